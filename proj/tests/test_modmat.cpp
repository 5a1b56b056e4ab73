#include <cmath>

#include <gtest/gtest.h>

#include "h1cyc/modmat.hpp"
#include "h1cyc/rng.hpp"
#include "oracles.hpp"

using namespace h1cyc;

namespace {

ZModMatrix random_matrix(Rng& rng, Residue q, std::size_t r, std::size_t c) {
  ZModMatrix a(q, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) a(i, j) = static_cast<Residue>(rng.below(static_cast<std::uint64_t>(q)));
  return a;
}

// Product of random elementary operations: invertible by construction.
ZModMatrix random_unimodular(Rng& rng, Residue q, std::size_t n) {
  ZModMatrix u = ZModMatrix::identity(q, n);
  for (int step = 0; step < 12 && n > 0; ++step) {
    ZModMatrix e = ZModMatrix::identity(q, n);
    const std::size_t i = rng.below(n), j = rng.below(n);
    if (i == j) {
      Residue unit;
      do unit = static_cast<Residue>(rng.below(static_cast<std::uint64_t>(q)));
      while (std::gcd(unit, q) != 1);
      e(i, i) = unit;
    } else {
      e(i, j) = static_cast<Residue>(rng.below(static_cast<std::uint64_t>(q)));
    }
    u = e * u;
  }
  return u;
}

const Residue kModuli[] = {2, 4, 6, 8, 9, 12, 25, 27, 30};

}  // namespace

TEST(ModMat, SquareOfOrderThreeElement) {
  const ZModMatrix g = ZModMatrix::from_rows(25, {{1, -3}, {1, -2}});
  const ZModMatrix g2 = g * g;
  EXPECT_EQ(g2, ZModMatrix::from_rows(25, {{23, 3}, {24, 1}}));
  EXPECT_EQ(g * g2, ZModMatrix::identity(25, 2));
  EXPECT_EQ(ZModMatrix::identity(4, 2) * ZModMatrix::identity(4, 2), ZModMatrix::identity(4, 2));
}

TEST(ModMat, RejectsUnreducedEntriesAndShapeMismatch) {
  EXPECT_THROW(ZModMatrix::from_reduced_rows(4, {{4}}), std::invalid_argument);
  EXPECT_THROW(ZModMatrix::identity(4, 2) * ZModMatrix::identity(4, 3), std::invalid_argument);
  EXPECT_THROW(ZModMatrix::identity(4, 2) * ZModMatrix::identity(8, 2), std::invalid_argument);
}

TEST(ModMat, HowellExamples) {
  EXPECT_EQ(howell_form(ZModMatrix::identity(4, 3)), ZModMatrix::identity(4, 3));
  EXPECT_EQ(howell_form(ZModMatrix::from_rows(4, {{3}})), ZModMatrix::from_rows(4, {{1}}));
  EXPECT_EQ(howell_form(ZModMatrix::from_rows(4, {{2}})), ZModMatrix::from_rows(4, {{2}}));
  // Span of (2, 1) mod 4 contains (0, 2); the Howell form must show it.
  EXPECT_EQ(howell_form(ZModMatrix::from_rows(4, {{2, 1}})), ZModMatrix::from_rows(4, {{2, 1}, {0, 2}}));
}

TEST(ModMat, KernelExamples) {
  EXPECT_EQ(kernel(ZModMatrix::from_rows(4, {{2}})), ZModMatrix::from_rows(4, {{2}}));
  EXPECT_EQ(kernel(ZModMatrix::from_rows(5, {{1, 2}, {3, 4}})).rows(), 0u);
  EXPECT_EQ(kernel(scalar_mul(5, ZModMatrix::identity(25, 2))), ZModMatrix::from_rows(25, {{5, 0}, {0, 5}}));
}

TEST(ModMat, SolveExamples) {
  const ZModMatrix two = ZModMatrix::from_rows(4, {{2}});
  ASSERT_TRUE(solve(two, Vec{2}).has_value());
  EXPECT_EQ(vec_mat(*solve(two, Vec{2}), two), Vec{2});
  EXPECT_FALSE(solve(two, Vec{1}).has_value());
  const Vec b{3, 1, 4};
  EXPECT_EQ(*solve(ZModMatrix::identity(7, 3), b), b);
}

TEST(ModMat, SmithExamples) {
  const SmithForm s = smith_normal_form(ZModMatrix::diagonal(12, {6, 4}));
  EXPECT_EQ(s.diagonal(), (Vec{2, 0}));
  EXPECT_EQ(s.u * ZModMatrix::diagonal(12, {6, 4}) * s.v, s.d);
  const SmithForm id = smith_normal_form(ZModMatrix::identity(9, 3));
  EXPECT_EQ(id.d, ZModMatrix::identity(9, 3));
  EXPECT_EQ(smith_normal_form(ZModMatrix(6, 2, 3)).diagonal(), (Vec{0, 0}));
}

TEST(ModMat, InvertibilityExamples) {
  EXPECT_TRUE(is_invertible(ZModMatrix::from_rows(5, {{1, -3}, {0, -1}})));
  EXPECT_FALSE(is_invertible(ZModMatrix::from_rows(4, {{2, 0}, {0, 1}})));
  EXPECT_TRUE(is_invertible(ZModMatrix::identity(12, 4)));
  const ZModMatrix a = ZModMatrix::from_rows(25, {{1, -3}, {1, -2}});
  EXPECT_EQ(a * *inverse(a), ZModMatrix::identity(25, 2));
}

TEST(ModMatProperty, HowellIsIdempotentAndCanonical) {
  Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const Residue q = kModuli[rng.below(std::size(kModuli))];
    const std::size_t r = 1 + rng.below(4), c = 1 + rng.below(4);
    const ZModMatrix a = random_matrix(rng, q, r, c);
    const ZModMatrix h = howell_form(a);
    EXPECT_EQ(howell_form(h), h);
    for (std::size_t i = 0; i < a.rows(); ++i) EXPECT_TRUE(solve(h, a.row(i)).has_value());
    // Same span, different generators: same form.
    EXPECT_EQ(howell_form(random_unimodular(rng, q, r) * a), h);
    EXPECT_EQ(howell_form(vstack(a, random_matrix(rng, q, 1, r) * a)), h);
  }
}

TEST(ModMatProperty, HowellSpanMatchesEnumeration) {
  Rng rng(102);
  for (int trial = 0; trial < 100; ++trial) {
    const Residue q = kModuli[rng.below(std::size(kModuli))];
    const std::size_t c = 1 + rng.below(3);
    const ZModMatrix a = random_matrix(rng, q, 1 + rng.below(3), c);
    if (std::pow(q, a.rows()) > 1e4) continue;
    const ZModMatrix h = howell_form(a);
    if (std::pow(q, h.rows()) > 1e5) continue;
    EXPECT_EQ(oracle::span_set(a), oracle::span_set(h));
  }
}

TEST(ModMatProperty, KernelAgainstBruteForce) {
  Rng rng(103);
  for (int trial = 0; trial < 150; ++trial) {
    const Residue q = kModuli[rng.below(std::size(kModuli))];
    const std::size_t r = 1 + rng.below(3), c = 1 + rng.below(3);
    if (std::pow(q, r) > 1e4) continue;
    const ZModMatrix a = random_matrix(rng, q, r, c);
    const ZModMatrix k = kernel(a);
    for (std::size_t i = 0; i < k.rows(); ++i) EXPECT_TRUE(detail::is_zero(vec_mat(k.row(i), a)));
    oracle::for_each_vector(q, r, [&](const Vec& x) {
      if (detail::is_zero(oracle::times(x, a)) && !detail::is_zero(x)) {
        EXPECT_TRUE(k.rows() > 0 && solve(k, x).has_value());
      }
    });
  }
}

TEST(ModMatProperty, SolveAgainstBruteForce) {
  Rng rng(104);
  for (int trial = 0; trial < 150; ++trial) {
    const Residue q = kModuli[rng.below(std::size(kModuli))];
    const std::size_t r = 1 + rng.below(3), c = 1 + rng.below(3);
    if (std::pow(q, r) > 1e4) continue;
    const ZModMatrix a = random_matrix(rng, q, r, c);
    const std::set<Vec> image = oracle::span_set(a);
    const Vec b = random_matrix(rng, q, 1, c).row_vec(0);
    const auto x = solve(a, b);
    EXPECT_EQ(x.has_value(), image.count(b) == 1);
    if (x) {
      EXPECT_EQ(vec_mat(*x, a), b);
    }
  }
}

TEST(ModMatProperty, SmithIdentityAndChain) {
  Rng rng(105);
  for (int trial = 0; trial < 300; ++trial) {
    const Residue q = kModuli[rng.below(std::size(kModuli))];
    const ZModMatrix a = random_matrix(rng, q, 1 + rng.below(4), 1 + rng.below(4));
    const SmithForm s = smith_normal_form(a);
    ASSERT_TRUE(is_invertible(s.u));
    ASSERT_TRUE(is_invertible(s.v));
    EXPECT_EQ(s.u * a * s.v, s.d);
    for (std::size_t i = 0; i < s.d.rows(); ++i)
      for (std::size_t j = 0; j < s.d.cols(); ++j)
        if (i != j) {
          EXPECT_EQ(s.d(i, j), 0);
        }
    const Vec d = s.diagonal();
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      const Residue lo = d[i] == 0 ? q : d[i], hi = d[i + 1] == 0 ? q : d[i + 1];
      EXPECT_EQ(hi % lo, 0) << "chain broken at " << i;
      EXPECT_EQ(q % lo, 0);
    }
  }
}

TEST(ModMatProperty, InverseRoundTrip) {
  Rng rng(106);
  for (int trial = 0; trial < 200; ++trial) {
    const Residue q = kModuli[rng.below(std::size(kModuli))];
    const std::size_t n = 1 + rng.below(4);
    const ZModMatrix u = random_unimodular(rng, q, n);
    ASSERT_TRUE(is_invertible(u));
    EXPECT_EQ(u * *inverse(u), ZModMatrix::identity(q, n));
  }
}
