#include "resn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace resn {

namespace {
constexpr double kPi = 3.14159265358979323846;

int find_column(const std::vector<std::string>& names, const std::string& want) {
  auto it = std::find(names.begin(), names.end(), want);
  if (it == names.end()) {
    throw std::invalid_argument("csv: unknown column '" + want + "'");
  }
  return static_cast<int>(it - names.begin());
}
}  // namespace

const char* to_string(Partition p) {
  switch (p) {
    case Partition::train: return "train";
    case Partition::validation: return "validation";
    case Partition::test: return "test";
  }
  return "?";
}

const char* to_string(NormMode m) {
  switch (m) {
    case NormMode::none: return "none";
    case NormMode::zscore: return "zscore";
    case NormMode::minmax: return "minmax";
  }
  return "?";
}

NormMode norm_mode_from_string(const std::string& s) {
  if (s == "none") return NormMode::none;
  if (s == "zscore") return NormMode::zscore;
  if (s == "minmax") return NormMode::minmax;
  throw std::invalid_argument("unknown normalization mode '" + s + "'");
}

WindowBatch gather(const WindowBatch& batch, std::span<const int> indices) {
  WindowBatch out;
  out.look_back = batch.look_back;
  const Eigen::Index n = static_cast<Eigen::Index>(indices.size());
  const Eigen::Index all = batch.windows();
  out.inputs.resize(n * batch.look_back, batch.inputs.cols());
  out.targets.resize(n, batch.targets.cols());
  for (Eigen::Index k = 0; k < n; ++k) {
    const int src = indices[k];
    out.targets.row(k) = batch.targets.row(src);
    for (int t = 0; t < batch.look_back; ++t) {
      out.inputs.row(t * n + k) = batch.inputs.row(t * all + src);
    }
  }
  return out;
}

double sine_value(const SineSpec& spec, double t) {
  return spec.amplitude * std::sin(2.0 * kPi * spec.frequency * t + spec.phase);
}

SeriesDataset SeriesDataset::sine(const SineSpec& spec) {
  if (spec.rate <= 0) throw std::invalid_argument("sine: rate must be positive");
  if (spec.t_end < spec.t_start) {
    throw std::invalid_argument("sine: empty time range");
  }
  // Inclusive endpoints: [0, 100] s at 10 Hz gives 1001 samples.
  const auto count =
      static_cast<Eigen::Index>(std::floor((spec.t_end - spec.t_start) * spec.rate + 1e-9)) + 1;
  Eigen::MatrixXd data(count, 1);
  for (Eigen::Index k = 0; k < count; ++k) {
    data(k, 0) = sine_value(spec, spec.t_start + static_cast<double>(k) / spec.rate);
  }
  SeriesDataset ds;
  ds.data_ = std::move(data);
  ds.input_cols_ = {0};
  ds.output_cols_ = {0};
  ds.names_ = {"y"};
  return ds;
}

SeriesDataset SeriesDataset::from_csv(const std::string& path,
                                      const std::vector<std::string>& input_columns,
                                      const std::vector<std::string>& output_columns) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file '" + path + "'");
  std::vector<std::string> names;
  {
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) names.push_back(cell);
  }
  const std::size_t ncols = names.size();
  if (ncols == 0) throw std::runtime_error("csv: header has no columns");

  std::vector<double> values;
  int file_line = 1;
  while (std::getline(in, line)) {
    ++file_line;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(row, cell, ',')) {
      if (col >= ncols) break;
      std::size_t pos = 0;
      double v = 0;
      try {
        v = std::stod(cell, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
      if (pos == 0 || pos != cell.size()) {
        throw std::runtime_error("csv: row " + std::to_string(file_line) + ", column '" +
                                 names[col] + "': not numeric: '" + cell + "'");
      }
      values.push_back(v);
      ++col;
    }
    if (col != ncols) {
      throw std::runtime_error("csv: row " + std::to_string(file_line) + ": expected " +
                               std::to_string(ncols) + " columns, got " + std::to_string(col));
    }
  }
  const auto nrows = static_cast<Eigen::Index>(values.size() / ncols);
  if (nrows == 0) throw std::runtime_error("csv: no data rows in '" + path + "'");

  Eigen::MatrixXd data(nrows, static_cast<Eigen::Index>(ncols));
  for (Eigen::Index r = 0; r < nrows; ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      data(r, c) = values[static_cast<std::size_t>(r) * ncols + c];
    }
  }

  std::vector<int> in_cols, out_cols;
  for (const auto& n : input_columns) in_cols.push_back(find_column(names, n));
  for (const auto& n : output_columns) out_cols.push_back(find_column(names, n));

  SeriesDataset ds;
  ds.data_ = std::move(data);
  ds.input_cols_ = std::move(in_cols);
  ds.output_cols_ = std::move(out_cols);
  ds.names_ = names;
  if (ds.input_cols_.empty() || ds.output_cols_.empty()) {
    throw std::invalid_argument("csv: need at least one input and one output column");
  }
  return ds;
}

SeriesDataset SeriesDataset::from_matrix(Eigen::MatrixXd data,
                                         std::vector<int> input_columns,
                                         std::vector<int> output_columns) {
  if (data.rows() == 0 || data.cols() == 0) {
    throw std::invalid_argument("dataset: empty matrix");
  }
  for (int c : input_columns) {
    if (c < 0 || c >= data.cols()) throw std::invalid_argument("dataset: input column out of range");
  }
  for (int c : output_columns) {
    if (c < 0 || c >= data.cols()) throw std::invalid_argument("dataset: output column out of range");
  }
  if (input_columns.empty() || output_columns.empty()) {
    throw std::invalid_argument("dataset: need input and output columns");
  }
  SeriesDataset ds;
  ds.names_.reserve(static_cast<std::size_t>(data.cols()));
  for (Eigen::Index c = 0; c < data.cols(); ++c) ds.names_.push_back("c" + std::to_string(c));
  ds.data_ = std::move(data);
  ds.input_cols_ = std::move(input_columns);
  ds.output_cols_ = std::move(output_columns);
  return ds;
}

void SeriesDataset::split(double train_frac, double validation_frac, double test_frac,
                          int min_rows) {
  if (std::abs(train_frac + validation_frac + test_frac - 1.0) > 1e-9) {
    throw std::invalid_argument("split: fractions must sum to 1");
  }
  if (validation_frac <= 0 || test_frac <= 0 || train_frac <= 0) {
    throw std::invalid_argument("split: every fraction must be positive");
  }
  const int total = static_cast<int>(rows());
  const int n_val = static_cast<int>(std::floor(validation_frac * total));
  const int n_test = static_cast<int>(std::floor(test_frac * total));
  const int n_train = total - n_val - n_test;
  if (n_train < min_rows || n_val < min_rows || n_test < min_rows) {
    throw std::invalid_argument(
        "split: partition smaller than " + std::to_string(min_rows) + " rows (train " +
        std::to_string(n_train) + ", validation " + std::to_string(n_val) + ", test " +
        std::to_string(n_test) + ")");
  }
  parts_[0] = {0, n_train};
  parts_[1] = {n_train, n_train + n_val};
  parts_[2] = {n_train + n_val, total};
}

void SeriesDataset::normalize(NormMode mode) {
  if (!has_partitions()) {
    throw std::logic_error("normalize: split the dataset first");
  }
  norm_.mode = mode;
  norm_.offset = Eigen::VectorXd::Zero(features());
  norm_.scale = Eigen::VectorXd::Ones(features());
  if (mode == NormMode::none) return;

  const auto [begin, end] = parts_[0];
  const auto train = data_.middleRows(begin, end - begin);
  for (Eigen::Index c = 0; c < features(); ++c) {
    const auto col = train.col(c);
    if (mode == NormMode::zscore) {
      const double mean = col.mean();
      const double var = (col.array() - mean).square().sum() / static_cast<double>(col.size());
      const double sd = std::sqrt(var);
      if (sd <= 0) {
        throw std::invalid_argument("normalize: zero-variance column '" + names_[c] + "'");
      }
      norm_.offset[c] = mean;
      norm_.scale[c] = sd;
    } else {
      const double lo = col.minCoeff();
      const double hi = col.maxCoeff();
      if (hi <= lo) {
        throw std::invalid_argument("normalize: constant column '" + names_[c] + "'");
      }
      norm_.offset[c] = lo;
      norm_.scale[c] = hi - lo;
    }
  }
  data_ = (data_.rowwise() - norm_.offset.transpose()).array().rowwise() /
          norm_.scale.transpose().array();
}

std::pair<int, int> SeriesDataset::partition_range(Partition part) const {
  if (!has_partitions()) throw std::logic_error("partition_range: dataset not split");
  return parts_[static_cast<int>(part)];
}

int SeriesDataset::partition_rows(Partition part) const {
  const auto [begin, end] = partition_range(part);
  return end - begin;
}

WindowBatch SeriesDataset::window(int look_back, Partition part) const {
  if (look_back < 1) throw std::invalid_argument("window: look_back must be >= 1");
  const auto [begin, end] = partition_range(part);
  const int len = end - begin;
  const int count = len - look_back;
  if (count < 1) {
    throw std::invalid_argument("window: " + std::string(to_string(part)) + " partition has " +
                                std::to_string(len) + " rows, need more than look-back " +
                                std::to_string(look_back));
  }
  WindowBatch batch;
  batch.look_back = look_back;
  batch.inputs.resize(static_cast<Eigen::Index>(count) * look_back, input_dim());
  batch.targets.resize(count, output_dim());
  for (int k = 0; k < count; ++k) {
    for (std::size_t j = 0; j < output_cols_.size(); ++j) {
      batch.targets(k, static_cast<Eigen::Index>(j)) = data_(begin + k + look_back, output_cols_[j]);
    }
    for (int t = 0; t < look_back; ++t) {
      for (std::size_t j = 0; j < input_cols_.size(); ++j) {
        batch.inputs(static_cast<Eigen::Index>(t) * count + k, static_cast<Eigen::Index>(j)) =
            data_(begin + k + t, input_cols_[j]);
      }
    }
  }
  return batch;
}

Eigen::MatrixXd SeriesDataset::denormalize_outputs(const Eigen::MatrixXd& values) const {
  if (values.cols() != output_dim()) {
    throw std::invalid_argument("denormalize_outputs: column count mismatch");
  }
  if (norm_.mode == NormMode::none || norm_.offset.size() == 0) return values;
  Eigen::MatrixXd out = values;
  for (std::size_t j = 0; j < output_cols_.size(); ++j) {
    const int c = output_cols_[j];
    out.col(static_cast<Eigen::Index>(j)) =
        values.col(static_cast<Eigen::Index>(j)).array() * norm_.scale[c] + norm_.offset[c];
  }
  return out;
}

}  // namespace resn
