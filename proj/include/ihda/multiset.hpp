#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ihda {

/// Dense multiset over an index range [0, size). Used for markings (over
/// places) and concsets (over transitions); the tag keeps the two apart.
template <class Tag>
class Counts {
 public:
  using value_type = std::uint32_t;

  Counts() = default;
  explicit Counts(std::size_t size) : v_(size, 0) {}
  explicit Counts(std::vector<value_type> v) : v_(std::move(v)) {}

  std::size_t size() const { return v_.size(); }
  value_type operator[](std::size_t i) const { return v_[i]; }
  value_type& operator[](std::size_t i) { return v_[i]; }
  const std::vector<value_type>& values() const { return v_; }

  /// Sum of multiplicities.
  std::size_t total() const {
    std::size_t n = 0;
    for (auto c : v_) n += c;
    return n;
  }
  bool empty() const { return total() == 0; }

  /// Pointwise a <= b.
  bool contained_in(const Counts& other) const {
    for (std::size_t i = 0; i < v_.size(); ++i)
      if (v_[i] > other.v_[i]) return false;
    return true;
  }

  Counts& operator+=(const Counts& o) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  /// Requires o <= *this.
  Counts& operator-=(const Counts& o) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Counts& add_scaled(const Counts& o, value_type k) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += k * o.v_[i];
    return *this;
  }

  friend Counts operator+(Counts a, const Counts& b) { return a += b; }
  friend Counts operator-(Counts a, const Counts& b) { return a -= b; }
  friend bool operator==(const Counts&, const Counts&) = default;
  friend auto operator<=>(const Counts& a, const Counts& b) { return a.v_ <=> b.v_; }

  value_type max_count() const {
    return v_.empty() ? 0 : *std::max_element(v_.begin(), v_.end());
  }

 private:
  std::vector<value_type> v_;
};

struct PlaceTag {};
struct TransitionTag {};

/// Token counts per place.
using Marking = Counts<PlaceTag>;
/// Multiset of transitions running concurrently.
using Concset = Counts<TransitionTag>;

}  // namespace ihda
