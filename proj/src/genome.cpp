#include "resn/genome.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace resn {

void ArchBounds::validate() const {
  auto check = [](int lo, int hi, const char* name) {
    if (lo > hi) {
      throw std::invalid_argument(std::string("bounds: min_") + name +
                                  " exceeds max_" + name);
    }
  };
  check(min_lb, max_lb, "lb");
  check(min_npl, max_npl, "npl");
  check(min_hl, max_hl, "hl");
  if (min_lb < 1 || min_npl < 1 || min_hl < 1) {
    throw std::invalid_argument("bounds: all minima must be >= 1");
  }
}

ArchGenome::ArchGenome(std::vector<int> entries) : entries_(std::move(entries)) {
  if (entries_.size() < 2) {
    throw std::invalid_argument(
        "genome needs a look-back and at least one hidden layer");
  }
  for (int v : entries_) {
    if (v < 1) {
      throw std::invalid_argument("genome entries must be positive");
    }
  }
}

int ArchGenome::total_cells() const {
  return std::accumulate(entries_.begin() + 1, entries_.end(), 0);
}

bool ArchGenome::satisfies(const ArchBounds& b) const {
  if (hidden_layers() < b.min_hl || hidden_layers() > b.max_hl) return false;
  if (look_back() < b.min_lb || look_back() > b.max_lb) return false;
  for (int i = 0; i < hidden_layers(); ++i) {
    if (layer_width(i) < b.min_npl || layer_width(i) > b.max_npl) return false;
  }
  return true;
}

std::string ArchGenome::to_string() const {
  std::ostringstream out;
  out << '<';
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out << ", ";
    out << entries_[i];
  }
  out << '>';
  return out.str();
}

ArchGenome parse_genome(const std::string& text) {
  std::vector<int> entries;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t pos = 0;
    int value = 0;
    try {
      value = std::stoi(item, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("genome: not an integer: '" + item + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size()) {
      throw std::invalid_argument("genome: trailing garbage in '" + item + "'");
    }
    entries.push_back(value);
  }
  return ArchGenome(std::move(entries));
}

}  // namespace resn
