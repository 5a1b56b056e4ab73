#include <numeric>

#include <gtest/gtest.h>

#include "h1cyc/cohomology.hpp"
#include "oracles.hpp"

using namespace h1cyc;
using namespace h1cyc::lemma_fg;

namespace {

using GroupPtr = std::shared_ptr<const MatGroup>;
using ModulePtr = std::shared_ptr<const GModule>;

GroupPtr group(MatGroup g) { return std::make_shared<const MatGroup>(std::move(g)); }

GroupPtr unit_group(Residue q, Residue u) { return group(MatGroup::closure({ZModMatrix::from_rows(q, {{u}})})); }

CocycleSpacePtr natural_space(const GroupPtr& g) {
  return cocycle_space(g, std::make_shared<const GModule>(GModule::natural(*g)));
}

std::uint64_t size(const ZModMatrix& howell) { return detail::span_size(howell); }

// |Z1| = |B1| |H1|, and Z1 agrees with the pairwise-constraint oracle.
void check_space(const CocycleSpacePtr& s) {
  const H1Group h = h1(s);
  EXPECT_EQ(size(s->z1), size(s->b1) * h.order());
  EXPECT_EQ(oracle::expanded_z1(*s), oracle::pairwise_z1(*s->group, *s->module));
}

}  // namespace

TEST(Cohomology, TrivialGroup) {
  const auto s = natural_space(group(MatGroup::closure({ZModMatrix::identity(4, 1)})));
  EXPECT_EQ(size(s->z1), 1u);
  EXPECT_EQ(size(s->b1), 1u);
  EXPECT_TRUE(h1(s).is_trivial());
  const Cocycle b = coboundary(s, Vec{3});
  EXPECT_TRUE(b.is_zero());
}

TEST(Cohomology, SignActionOnZ4) {
  const auto s = natural_space(unit_group(4, 3));
  EXPECT_EQ(size(s->z1), 4u);
  EXPECT_EQ(size(s->b1), 2u);
  EXPECT_EQ(h1(s).invariant_factors(), (std::vector<Residue>{2}));
  const Cocycle b = coboundary(s, Vec{1});
  EXPECT_EQ(b.value(1), Vec{2});
  EXPECT_TRUE(coboundary(s, Vec{0}).is_zero());
  EXPECT_EQ(cyclic_h1(ZModMatrix::from_rows(4, {{3}})).group.invariant_factors(), (std::vector<Residue>{2}));
  EXPECT_TRUE(cyclic_h1(ZModMatrix::identity(4, 2)).group.is_trivial());
  EXPECT_TRUE(h1_cyc(s).is_trivial());
  check_space(s);
}

TEST(Cohomology, CoboundaryWitness) {
  const auto s = natural_space(group(build_G2(5)));
  EXPECT_EQ(*is_coboundary(Cocycle(s, Vec(s->unknowns, 0))), (Vec{0, 0}));
  const Cocycle b = coboundary(s, Vec{7, 11});
  const auto m = is_coboundary(b);
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(coboundary(s, *m).generator_values(), b.generator_values());
  EXPECT_THROW(Cocycle(s, Vec(s->unknowns, 1)), std::invalid_argument);
}

TEST(Cohomology, CyclicFormulaAgreesWithH1) {
  // Cyclic groups acting on Z/4, Z/8, Z/9, Z/25 by every unit, and rank-2 actions.
  for (Residue q : {4, 8, 9, 25})
    for (Residue u = 1; u < q; ++u) {
      if (std::gcd(u, q) != 1) continue;
      const auto s = natural_space(unit_group(q, u));
      EXPECT_EQ(h1(s).invariant_factors(), cyclic_h1(ZModMatrix::from_rows(q, {{u}})).group.invariant_factors())
          << "q = " << q << ", u = " << u;
      EXPECT_TRUE(h1_cyc(s).is_trivial());
      check_space(s);
    }
  for (Residue p : {2, 5})
    for (const auto& c : cyclic_subgroups(build_G2(p))) {
      const auto s = natural_space(group(c));
      EXPECT_EQ(h1(s).invariant_factors(), cyclic_h1(c.generators().front()).group.invariant_factors());
      EXPECT_TRUE(h1_cyc(s).is_trivial());
    }
}

TEST(Cohomology, NontrivialHInH2HasNoCohomology) {
  const MatGroup h2 = build_H2(5);
  for (std::size_t i = 1; i < h2.order(); ++i) {
    const auto s = natural_space(group(MatGroup::closure({h2.element(i)})));
    EXPECT_EQ(s->z1, s->b1);
    EXPECT_EQ(norm_matrix(h2.element(i)), scalar_mul(5, ZModMatrix::identity(25, 2)));
    EXPECT_EQ(kernel(transpose(norm_matrix(h2.element(i)))), ZModMatrix::from_rows(25, {{5, 0}, {0, 5}}));
  }
}

TEST(Cohomology, PairwiseOracleOnConstructionAtTwo) {
  check_space(natural_space(group(build_G2(2))));
  check_space(natural_space(group(build_N(2))));
}

TEST(Cohomology, PairwiseOracleOnG3AtTwo) { check_space(natural_space(group(build_G3(2)))); }

TEST(Cohomology, BruteForceG2AtTwo) {
  const auto g = group(build_G2(2));
  const auto s = natural_space(g);
  const oracle::BruteH1 brute = oracle::brute_h1(*g, *s->module);
  const H1Group full = h1(s), cyc = h1_cyc(s);
  EXPECT_EQ(brute.z1, size(s->z1));
  EXPECT_EQ(brute.b1, size(s->b1));
  EXPECT_EQ(brute.h1, full.order());
  EXPECT_EQ(brute.h1cyc, cyc.order());
  for (auto [k, c] : brute.h1_killed_by) EXPECT_EQ(c, oracle::killed_by(full.invariant_factors(), k)) << k;
  for (auto [k, c] : brute.h1cyc_killed_by) EXPECT_EQ(c, oracle::killed_by(cyc.invariant_factors(), k)) << k;
  EXPECT_EQ(full.invariant_factors(), (std::vector<Residue>{2, 4}));
  EXPECT_EQ(cyc.invariant_factors(), (std::vector<Residue>{2, 2}));
}

TEST(Cohomology, BruteForceCyclicAndN) {
  for (Residue q : {4, 8, 9, 25})
    for (Residue u = 1; u < q; ++u) {
      if (std::gcd(u, q) != 1) continue;
      const auto g = unit_group(q, u);
      const auto s = natural_space(g);
      const oracle::BruteH1 brute = oracle::brute_h1(*g, *s->module);
      EXPECT_EQ(brute.h1, h1(s).order());
      EXPECT_EQ(brute.h1cyc, 1u);
    }
}

TEST(Cohomology, LocallyTrivialClassesRestrictTrivially) {
  for (Residue p : {2, 5}) {
    const auto g = group(build_G2(p));
    const auto s = natural_space(g);
    const H1Group cyc = h1_cyc(s);
    for (const auto& z : cyc.representatives())
      for (std::size_t x = 0; x < g->order(); ++x) {
        const auto cg = group(cyclic_subgroup(*g, x));
        const auto sub = cocycle_space(cg, std::make_shared<const GModule>(GModule::restricted(*s->module, *g, *cg)));
        EXPECT_TRUE(is_coboundary(restrict_cocycle(z, sub)).has_value());
      }
    // Restriction to the trivial subgroup is always trivial.
    const auto one = group(MatGroup::closure({ZModMatrix::identity(p * p, 2)}));
    const auto sub = cocycle_space(one, std::make_shared<const GModule>(GModule::restricted(*s->module, *g, *one)));
    for (const auto& z : h1(s).representatives()) EXPECT_TRUE(restrict_cocycle(z, sub).is_zero());
  }
}

TEST(Cohomology, CocycleIdentityOnRepresentatives) {
  const auto s = natural_space(group(build_G2(5)));
  for (const auto& z : h1(s).representatives()) EXPECT_TRUE(check_cocycle_identity(z));
}

TEST(Cohomology, InflationOnTheConstruction) {
  const Residue p = 5;
  const auto g2 = group(build_G2(p)), g3 = group(build_G3(p));
  const auto s2 = natural_space(g2), s3 = natural_space(g3);
  const Inflation inf(s2, s3, reduction_map(*g3, *g2), scaled_lift_identification(p, 2));
  const H1Group c2 = h1_cyc(s2), c3 = h1_cyc(s3), full3 = h1(s3);
  EXPECT_TRUE(inf(Cocycle(s2, Vec(s2->unknowns, 0))).is_zero());
  for (const auto& z : c2.representatives()) {
    const Cocycle w = inf(z);
    EXPECT_FALSE(is_coboundary(w).has_value());
    EXPECT_NO_THROW(c3.class_of(w));
    EXPECT_FALSE(full3.group().is_zero(full3.class_of(w)));
  }
  const AbHom induced = induced_map(c2, c3, [&](const Cocycle& z) { return inf(z); });
  EXPECT_TRUE(is_injective(induced));
  EXPECT_TRUE(is_surjective(induced));
  // The identification must be equivariant.
  EXPECT_THROW(Inflation(s2, s3, reduction_map(*g3, *g2), ZModMatrix::from_rows(125, {{5, 5}, {0, 5}})),
               std::invalid_argument);
}

TEST(Cohomology, InflationAlongIdentity) {
  const auto g = group(build_G2(5));
  const auto s = natural_space(g);
  std::vector<std::size_t> id(g->order());
  std::iota(id.begin(), id.end(), 0);
  const Inflation inf(s, s, id, ZModMatrix::identity(25, 2));
  for (const auto& z : h1(s).representatives()) EXPECT_EQ(inf(z).generator_values(), z.generator_values());
}

TEST(Cohomology, InflationRestrictionExactness) {
  // Cyclic of order 4 (2 mod 5), its subgroup of order 2, Z/4 with trivial action.
  const auto c4 = group(MatGroup::closure({ZModMatrix::from_rows(5, {{2}})}));
  const MatGroup c2 = MatGroup::closure({ZModMatrix::from_rows(5, {{4}})});
  const auto s = cocycle_space(c4, std::make_shared<const GModule>(GModule::trivial(*c4, 4, 1)));
  const InfResReport r = verify_inf_res_exactness(s, c2);
  EXPECT_TRUE(r.holds());
  // Hom(C2, Z/4) = Z/2, Hom(C4, Z/4) = Z/4.
  EXPECT_EQ(r.h1_quotient, (std::vector<Residue>{2}));
  EXPECT_EQ(r.h1_group, (std::vector<Residue>{4}));
  EXPECT_EQ(r.h1_normal, (std::vector<Residue>{2}));

  const auto g3 = group(build_G3(2));
  EXPECT_TRUE(verify_inf_res_exactness(natural_space(g3), build_N(2)).holds());

  const auto g2 = group(build_G2(5));
  const InfResReport t = verify_inf_res_exactness(natural_space(g2), MatGroup::closure({ZModMatrix::identity(25, 2)}));
  EXPECT_TRUE(t.holds());
  EXPECT_EQ(t.h1_quotient, t.h1_group);
  EXPECT_TRUE(t.h1_normal.empty());
}

TEST(Cohomology, ValuesOnNOfLocallyTrivialClasses) {
  for (Residue p : {2, 5}) {
    const auto g3 = group(build_G3(p));
    const auto s = natural_space(g3);
    const ZModMatrix basis = locally_trivial_cocycles(*s);
    const MatGroup n = build_N(p);
    for (const auto& x : n.elements()) {
      const std::size_t i = *g3->index_of(x);
      for (std::size_t k = 0; k < basis.rows(); ++k)
        for (Residue v : mat_vec(s->value_maps[i], basis.row(k))) EXPECT_EQ(v % (p * p), 0);
    }
  }
}
