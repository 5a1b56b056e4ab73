#pragma once

// Exhaustive subgroup enumeration for small finite abelian groups (|B| <= 64).
// Subgroups are bitmasks over the mixed-radix element indices of B. This is
// the ground-truth oracle for direct-summand questions; it never consults
// divisibility.

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "h1cyc/abelian.hpp"

namespace h1cyc {

using ElementMask = std::uint64_t;

class SubgroupLattice {
 public:
  static constexpr std::uint64_t kMaxOrder = 64;

  explicit SubgroupLattice(FinAbGroup b) : group_(std::move(b)) {
    order_ = group_.order();
    if (order_ > kMaxOrder) throw std::invalid_argument("SubgroupLattice: |B| exceeds 64");
    sum_.assign(order_ * order_, 0);
    mul_.assign(order_ * order_, 0);
    for (std::uint64_t i = 0; i < order_; ++i) {
      const GroupElement x = group_.element_at(i);
      for (std::uint64_t j = 0; j < order_; ++j) {
        sum_[i * order_ + j] = static_cast<std::uint8_t>(group_.index_of(group_.add(x, group_.element_at(j))));
        mul_[i * order_ + j] = static_cast<std::uint8_t>(group_.index_of(group_.scale(static_cast<Residue>(j), x)));
      }
    }
    enumerate();
  }

  const FinAbGroup& group() const { return group_; }
  std::uint64_t order() const { return order_; }
  const std::vector<ElementMask>& subgroups() const { return subgroups_; }
  ElementMask full_mask() const { return order_ == 64 ? ~ElementMask{0} : (ElementMask{1} << order_) - 1; }

  // S + <x>
  ElementMask extend(ElementMask s, std::uint64_t x) const {
    ElementMask out = 0;
    for (std::uint64_t k = 0; k < order_; ++k) {
      const std::uint64_t y = mul_[x * order_ + k];
      if (k > 0 && y == 0) break;
      for (ElementMask rest = s; rest != 0; rest &= rest - 1) {
        const auto i = static_cast<std::uint64_t>(std::countr_zero(rest));
        out |= ElementMask{1} << sum_[i * order_ + y];
      }
    }
    return out;
  }

  ElementMask mask_of(const Subgroup& s) const {
    if (!(s.ambient == group_)) throw std::invalid_argument("SubgroupLattice: subgroup of a different group");
    ElementMask m = 1;
    for (const auto& g : s.generators) m = extend(m, group_.index_of(group_.reduce(g)));
    return m;
  }

  Subgroup to_subgroup(ElementMask mask) const {
    Subgroup s{group_, {}};
    ElementMask span = 1;
    for (ElementMask rest = mask; rest != 0; rest &= rest - 1) {
      const auto i = static_cast<std::uint64_t>(std::countr_zero(rest));
      if ((span >> i) & 1) continue;
      s.generators.push_back(group_.element_at(i));
      span = extend(span, i);
    }
    return s;
  }

  std::optional<ElementMask> complement(ElementMask s) const {
    const auto size = static_cast<std::uint64_t>(std::popcount(s));
    if (order_ % size != 0) return std::nullopt;
    for (ElementMask c : subgroups_)
      if (static_cast<std::uint64_t>(std::popcount(c)) * size == order_ && (c & s) == 1) return c;
    return std::nullopt;
  }

  bool is_summand(ElementMask s) const { return complement(s).has_value(); }

 private:
  void enumerate() {
    std::unordered_set<ElementMask> seen{1};
    subgroups_ = {1};
    for (std::size_t next = 0; next < subgroups_.size(); ++next) {
      const ElementMask s = subgroups_[next];
      for (std::uint64_t x = 0; x < order_; ++x) {
        if ((s >> x) & 1) continue;
        const ElementMask t = extend(s, x);
        if (seen.insert(t).second) subgroups_.push_back(t);
      }
    }
  }

  FinAbGroup group_;
  std::uint64_t order_ = 1;
  std::vector<std::uint8_t> sum_;
  std::vector<std::uint8_t> mul_;  // mul_[x * order + k] = index of k*x
  std::vector<ElementMask> subgroups_;
};

/// Oracle: a complement of S found by exhaustive subgroup search.
inline std::optional<Subgroup> direct_summand_oracle(const SubgroupLattice& lattice, const Subgroup& s) {
  const auto c = lattice.complement(lattice.mask_of(s));
  if (!c) return std::nullopt;
  return lattice.to_subgroup(*c);
}

}  // namespace h1cyc
