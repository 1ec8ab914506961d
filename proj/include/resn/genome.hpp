#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace resn {

/// Box constraints of the architecture search space.
struct ArchBounds {
  int min_lb = 2;
  int max_lb = 30;
  int min_npl = 1;
  int max_npl = 100;
  int min_hl = 1;
  int max_hl = 3;

  void validate() const;  // throws std::invalid_argument on min > max etc.
};

/// Variable-length integer encoding of a stacked-LSTM architecture:
/// entries[0] is the look-back (input window length), entries[1..] are the
/// LSTM cell counts of the hidden layers.
class ArchGenome {
 public:
  ArchGenome() = default;
  explicit ArchGenome(std::vector<int> entries);

  int look_back() const { return entries_[0]; }
  int hidden_layers() const { return static_cast<int>(entries_.size()) - 1; }
  int layer_width(int layer) const { return entries_[1 + layer]; }  // 0-based
  int total_cells() const;  // sum of hidden-layer widths

  const std::vector<int>& entries() const { return entries_; }
  std::vector<int>& entries() { return entries_; }

  bool satisfies(const ArchBounds& bounds) const;
  std::string to_string() const;  // "<lb, w1, ..., wH>"

  friend bool operator==(const ArchGenome&, const ArchGenome&) = default;

 private:
  std::vector<int> entries_;
};

/// Parses "10,8,8" (look-back first). Throws std::invalid_argument on
/// malformed input or fewer than two entries.
ArchGenome parse_genome(const std::string& text);

}  // namespace resn
