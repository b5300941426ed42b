#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace hs6v {

/// Weakly decreasing sequence of positive integers.
class Partition {
 public:
  Partition() = default;
  /// Drops trailing zeros; throws DomainError if not weakly decreasing or negative.
  explicit Partition(std::vector<int> parts);
  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

  const std::vector<int>& parts() const { return parts_; }
  int size() const;  ///< |lambda|
  int length() const { return static_cast<int>(parts_.size()); }
  bool empty() const { return parts_.empty(); }
  /// lambda_i with 1-based i; 0 beyond the length.
  int part(int i) const { return i >= 1 && i <= length() ? parts_[i - 1] : 0; }
  Partition dual() const;
  /// Multiplicities m_1, m_2, ... (index 0 unused).
  std::vector<int> multiplicities() const;

  /// True when this dominates other (equal sizes assumed).
  bool dominates(const Partition& other) const;

  std::string to_string() const;  ///< "(3,1,1)" or "()"

  auto operator<=>(const Partition&) const = default;

 private:
  std::vector<int> parts_;
};

/// Partitions of n, in reverse lexicographic order: (n), (n-1,1), ..., (1^n).
std::vector<Partition> partitions_of(int n, int max_length = -1);

/// All partitions of sizes 0..degree with at most max_length parts
/// (max_length < 0 means unbounded), by size then reverse lexicographic.
std::vector<Partition> partitions_up_to(int degree, int max_length = -1);

}  // namespace hs6v
