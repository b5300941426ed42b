#include "hs6v/partition.hpp"

#include <numeric>

#include "hs6v/errors.hpp"

namespace hs6v {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] <= 0) throw DomainError("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1]) throw DomainError("partition parts must be weakly decreasing");
  }
}

int Partition::size() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

Partition Partition::dual() const {
  if (parts_.empty()) return {};
  std::vector<int> out(parts_.front(), 0);
  for (int p : parts_)
    for (int j = 0; j < p; ++j) ++out[j];
  return Partition(std::move(out));
}

std::vector<int> Partition::multiplicities() const {
  std::vector<int> m(parts_.empty() ? 1 : parts_.front() + 1, 0);
  for (int p : parts_) ++m[p];
  return m;
}

bool Partition::dominates(const Partition& other) const {
  int a = 0, b = 0;
  const int n = std::max(length(), other.length());
  for (int i = 1; i <= n; ++i) {
    a += part(i);
    b += other.part(i);
    if (a < b) return false;
  }
  return true;
}

std::string Partition::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(parts_[i]);
  }
  return s + ")";
}

namespace {

void generate(int remaining, int max_part, int max_length, std::vector<int>& prefix, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  if (max_length == 0) return;
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    prefix.push_back(p);
    generate(remaining - p, p, max_length < 0 ? -1 : max_length - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions_of(int n, int max_length) {
  if (n < 0) throw DomainError("partitions_of: negative size");
  std::vector<Partition> out;
  std::vector<int> prefix;
  generate(n, n, max_length, prefix, out);
  return out;
}

std::vector<Partition> partitions_up_to(int degree, int max_length) {
  if (degree < 0) throw DomainError("partitions_up_to: negative degree");
  std::vector<Partition> out;
  for (int n = 0; n <= degree; ++n) {
    auto level = partitions_of(n, max_length);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

}  // namespace hs6v
