#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <string>
#include <vector>

namespace resn {

enum class Partition { train, validation, test };

enum class NormMode { none, zscore, minmax };

const char* to_string(Partition p);
const char* to_string(NormMode m);
NormMode norm_mode_from_string(const std::string& s);

/// Per-column affine normalization x' = (x - offset) / scale, fitted on the
/// training partition only.
struct NormParams {
  NormMode mode = NormMode::none;
  Eigen::VectorXd offset;  // zscore: mean, minmax: min
  Eigen::VectorXd scale;   // zscore: sd,   minmax: max - min
};

/// A batch of sliding windows ready for the network. Timestep t of every
/// window lives in rows [t*W, (t+1)*W) of `inputs`, so the per-timestep
/// input transform is a single matrix product.
struct WindowBatch {
  Eigen::MatrixXd inputs;   // (look_back * windows) x input_dim
  Eigen::MatrixXd targets;  // windows x output_dim
  int look_back = 0;

  Eigen::Index windows() const { return targets.rows(); }
  auto step(int t) const { return inputs.middleRows(t * windows(), windows()); }
};

/// Extracts the windows at the given indices into a new batch.
WindowBatch gather(const WindowBatch& batch, std::span<const int> indices);

struct SineSpec {
  double amplitude = 1.0;
  double frequency = 1.0;
  double phase = 0.0;
  double t_start = 0.0;
  double t_end = 100.0;
  double rate = 10.0;  // samples per second
};

double sine_value(const SineSpec& spec, double t);

/// A multivariate time series with contiguous train/validation/test
/// partitions. Immutable after construction + split + normalize; safe to
/// share read-only across threads.
class SeriesDataset {
 public:
  /// Samples y(t) = A sin(2 pi f t + phi) on [t_start, t_end] inclusive of
  /// both endpoints; the default spec yields 1001 points.
  static SeriesDataset sine(const SineSpec& spec = {});

  /// Loads a rectangular numeric CSV with a header row. Column roles are
  /// given by name; errors carry the file line number.
  static SeriesDataset from_csv(const std::string& path,
                                const std::vector<std::string>& input_columns,
                                const std::vector<std::string>& output_columns);

  static SeriesDataset from_matrix(Eigen::MatrixXd data,
                                   std::vector<int> input_columns,
                                   std::vector<int> output_columns);

  /// Chronological split; sizes follow the floor rule with the remainder
  /// going to train. Validation and test fractions must be positive and the
  /// fractions must sum to 1. Every partition must have at least min_rows
  /// rows (pass max look-back + 1 to guarantee windowability).
  void split(double train_frac, double validation_frac, double test_frac,
             int min_rows = 1);

  /// Fits per-column parameters on the training partition and transforms
  /// every row. zscore rejects zero-variance columns, minmax constant ones.
  void normalize(NormMode mode);

  /// Sliding windows over one partition: window k reads rows
  /// [begin+k, begin+k+LB) and predicts row begin+k+LB, giving
  /// partition_length - LB windows. Throws if the partition is too short.
  WindowBatch window(int look_back, Partition part) const;

  Eigen::Index rows() const { return data_.rows(); }
  Eigen::Index features() const { return data_.cols(); }
  const Eigen::MatrixXd& matrix() const { return data_; }
  int input_dim() const { return static_cast<int>(input_cols_.size()); }
  int output_dim() const { return static_cast<int>(output_cols_.size()); }
  bool has_partitions() const { return parts_[2].second > 0; }
  /// Half-open row range [begin, end) of a partition.
  std::pair<int, int> partition_range(Partition part) const;
  int partition_rows(Partition part) const;

  const NormParams& normalization() const { return norm_; }
  const std::vector<int>& input_columns() const { return input_cols_; }
  const std::vector<int>& output_columns() const { return output_cols_; }
  const std::vector<std::string>& column_names() const { return names_; }

  /// Maps normalized output-column values back to original units.
  Eigen::MatrixXd denormalize_outputs(const Eigen::MatrixXd& values) const;

 private:
  Eigen::MatrixXd data_;
  std::vector<int> input_cols_;
  std::vector<int> output_cols_;
  std::vector<std::string> names_;
  std::array<std::pair<int, int>, 3> parts_{};  // train/validation/test
  NormParams norm_;
};

}  // namespace resn
