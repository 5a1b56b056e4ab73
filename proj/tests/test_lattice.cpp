#include <gtest/gtest.h>

#include "h1cyc/lattice.hpp"

using namespace h1cyc;

namespace {

// Subgroup count by enumeration, compared against known small values.
std::size_t count(std::vector<Residue> factors) {
  return SubgroupLattice(FinAbGroup::from_invariant_factors(std::move(factors))).subgroups().size();
}

}  // namespace

TEST(Lattice, SubgroupCounts) {
  EXPECT_EQ(count({}), 1u);
  EXPECT_EQ(count({12}), 6u);        // one per divisor
  EXPECT_EQ(count({2, 2}), 5u);      // trivial, three lines, whole
  EXPECT_EQ(count({2, 4}), 8u);
  EXPECT_EQ(count({2, 2, 2}), 16u);
  EXPECT_EQ(count({4, 4}), 15u);
  EXPECT_EQ(count({2, 2, 2, 2, 2, 2}), 2825u);
}

TEST(Lattice, SummandOracle) {
  const FinAbGroup z4 = FinAbGroup::from_invariant_factors({4});
  const SubgroupLattice l4(z4);
  EXPECT_FALSE(direct_summand_oracle(l4, {z4, {{2}}}).has_value());
  const FinAbGroup b = FinAbGroup::from_invariant_factors({2, 4});
  const SubgroupLattice l(b);
  const auto c = direct_summand_oracle(l, {b, {{1, 0}}});
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(subgroup_order(*c), 4u);
  // <(1,2)> has order 2 and is a summand of Z/2 + Z/4; <(0,2)> is not.
  EXPECT_TRUE(l.is_summand(l.mask_of({b, {{1, 2}}})));
  EXPECT_FALSE(l.is_summand(l.mask_of({b, {{0, 2}}})));
}

TEST(Lattice, RoundTrip) {
  const FinAbGroup b = FinAbGroup::from_invariant_factors({2, 12});
  const SubgroupLattice l(b);
  for (ElementMask s : l.subgroups()) EXPECT_EQ(l.mask_of(l.to_subgroup(s)), s);
  EXPECT_EQ(l.subgroups().back() | l.full_mask(), l.full_mask());
  EXPECT_THROW(SubgroupLattice(FinAbGroup::from_invariant_factors({65})), std::invalid_argument);
}
