#pragma once

// Finite abelian groups in invariant-factor form, their homomorphisms and
// subgroups, and the divisibility vocabulary: m-divisible elements, maps that
// preserve (n-)divisibility, pure subgroups and direct summands.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "h1cyc/modmat.hpp"
#include "h1cyc/rng.hpp"

namespace h1cyc {

using GroupElement = Vec;

inline std::vector<Residue> divisors(Residue n) {
  std::vector<Residue> small, large;
  for (Residue d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      small.push_back(d);
      if (d != n / d) large.push_back(n / d);
    }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

// Divisors of n of the form q^e with q prime and e >= 1.
inline std::vector<Residue> prime_power_divisors(Residue n) {
  std::vector<Residue> out;
  for (Residue d : divisors(n)) {
    if (d == 1) continue;
    Residue q = 2;
    while (d % q != 0) ++q;
    Residue x = d;
    while (x % q == 0) x /= q;
    if (x == 1) out.push_back(d);
  }
  return out;
}

inline bool is_prime(Residue n) {
  if (n < 2) return false;
  for (Residue d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

class FinAbGroup {
 public:
  FinAbGroup() = default;

  // Requires a chain d_1 | d_2 | ... with every d_i >= 2.
  static FinAbGroup from_invariant_factors(std::vector<Residue> factors) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (factors[i] < 2) throw std::invalid_argument("FinAbGroup: invariant factor < 2");
      if (i > 0 && factors[i] % factors[i - 1] != 0)
        throw std::invalid_argument("FinAbGroup: invariant factors do not form a divisibility chain");
    }
    FinAbGroup g;
    g.factors_ = std::move(factors);
    return g;
  }

  const std::vector<Residue>& invariant_factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }
  Residue factor(std::size_t i) const { return factors_[i]; }
  bool is_trivial() const { return factors_.empty(); }
  Residue exponent() const { return factors_.empty() ? 1 : factors_.back(); }
  // Working modulus for linear algebra: every factor divides it.
  Residue modulus() const { return std::max<Residue>(2, exponent()); }

  std::uint64_t order() const {
    unsigned __int128 o = 1;
    for (Residue d : factors_) {
      o *= static_cast<unsigned __int128>(d);
      if (o > UINT64_MAX) throw std::overflow_error("FinAbGroup::order overflows 64 bits");
    }
    return static_cast<std::uint64_t>(o);
  }

  bool contains(const GroupElement& a) const {
    if (a.size() != rank()) return false;
    for (std::size_t i = 0; i < rank(); ++i)
      if (a[i] < 0 || a[i] >= factors_[i]) return false;
    return true;
  }

  GroupElement zero() const { return GroupElement(rank(), 0); }

  GroupElement reduce(std::span<const Residue> a) const {
    if (a.size() != rank()) throw std::invalid_argument("FinAbGroup::reduce: wrong element length");
    GroupElement out(rank());
    for (std::size_t i = 0; i < rank(); ++i) out[i] = modarith::reduce(a[i], factors_[i]);
    return out;
  }

  GroupElement add(const GroupElement& a, const GroupElement& b) const {
    GroupElement out(rank());
    for (std::size_t i = 0; i < rank(); ++i) out[i] = modarith::add(a[i], b[i], factors_[i]);
    return out;
  }

  GroupElement sub(const GroupElement& a, const GroupElement& b) const {
    GroupElement out(rank());
    for (std::size_t i = 0; i < rank(); ++i) out[i] = modarith::sub(a[i], b[i], factors_[i]);
    return out;
  }

  GroupElement scale(Residue k, const GroupElement& a) const {
    GroupElement out(rank());
    for (std::size_t i = 0; i < rank(); ++i)
      out[i] = modarith::mul(modarith::reduce(k, factors_[i]), a[i], factors_[i]);
    return out;
  }

  bool is_zero(const GroupElement& a) const {
    return std::all_of(a.begin(), a.end(), [](Residue e) { return e == 0; });
  }

  Residue element_order(const GroupElement& a) const {
    Residue o = 1;
    for (std::size_t i = 0; i < rank(); ++i) o = std::lcm(o, factors_[i] / std::gcd(a[i], factors_[i]));
    return o;
  }

  // Mixed-radix index, first coordinate least significant.
  std::uint64_t index_of(const GroupElement& a) const {
    std::uint64_t idx = 0;
    for (std::size_t i = rank(); i-- > 0;) idx = idx * static_cast<std::uint64_t>(factors_[i]) + a[i];
    return idx;
  }

  GroupElement element_at(std::uint64_t idx) const {
    GroupElement a(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
      a[i] = static_cast<Residue>(idx % static_cast<std::uint64_t>(factors_[i]));
      idx /= static_cast<std::uint64_t>(factors_[i]);
    }
    return a;
  }

  // diag(d_1, ..., d_r) over Z/modulus(): the relations of the presentation.
  ZModMatrix relations() const { return ZModMatrix::diagonal(modulus(), factors_); }

  std::string to_string() const {
    if (factors_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < rank(); ++i) s += (i ? " + Z/" : "Z/") + std::to_string(factors_[i]);
    return s;
  }

  friend bool operator==(const FinAbGroup&, const FinAbGroup&) = default;

 private:
  std::vector<Residue> factors_;
};

/// Invariant-factor form of (Z/E)^k / rowspan(relations), with E = modulus.
struct Presentation {
  FinAbGroup group;
  ZModMatrix to_canonical;    // k x rank; row i = canonical coordinates of e_i
  ZModMatrix from_canonical;  // rank x k; row j = a preimage of the j-th canonical generator
};

inline Presentation present(const ZModMatrix& relations) {
  const Residue e = relations.modulus();
  const std::size_t k = relations.cols();
  const SmithForm snf = smith_normal_form(relations);
  const Vec diag = snf.diagonal();
  const ZModMatrix vinv = *inverse(snf.v);
  std::vector<Residue> factors;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < k; ++i) {
    const Residue d = i < diag.size() ? diag[i] : 0;
    const Residue f = d == 0 ? e : d;
    if (f > 1) {
      factors.push_back(f);
      kept.push_back(i);
    }
  }
  Presentation out;
  out.group = FinAbGroup::from_invariant_factors(factors);
  out.to_canonical = ZModMatrix(e, k, kept.size());
  out.from_canonical = ZModMatrix(e, kept.size(), k);
  for (std::size_t c = 0; c < kept.size(); ++c) {
    for (std::size_t i = 0; i < k; ++i) {
      out.to_canonical(i, c) = snf.v(i, kept[c]) % factors[c];
      out.from_canonical(c, i) = vinv(kept[c], i);
    }
  }
  return out;
}

/// Direct product of cyclic groups of the given orders, canonicalized.
inline Presentation canonicalize(const std::vector<Residue>& orders) {
  Residue e = 1;
  for (Residue o : orders) {
    if (o < 2) throw std::invalid_argument("ab_group_new: cyclic order " + std::to_string(o) + " < 2");
    e = std::lcm(e, o);
  }
  return present(ZModMatrix::diagonal(std::max<Residue>(2, e), orders));
}

inline FinAbGroup ab_group_new(const std::vector<Residue>& orders) { return canonicalize(orders).group; }

class AbHom {
 public:
  AbHom() = default;

  // images[i] is the image of the i-th domain generator. Rejects images of
  // the wrong shape, unreduced coordinates, and maps that are not well defined.
  AbHom(FinAbGroup domain, FinAbGroup codomain, const std::vector<GroupElement>& images)
      : domain_(std::move(domain)), codomain_(std::move(codomain)) {
    if (images.size() != domain_.rank()) throw std::invalid_argument("AbHom: one image per domain generator required");
    matrix_ = ZModMatrix(codomain_.modulus(), domain_.rank(), codomain_.rank());
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (!codomain_.contains(images[i]))
        throw std::invalid_argument("AbHom: image of generator " + std::to_string(i) + " is not a reduced codomain element");
      if (!codomain_.is_zero(codomain_.scale(domain_.factor(i), images[i])))
        throw std::invalid_argument("AbHom: not well defined at generator " + std::to_string(i));
      for (std::size_t j = 0; j < codomain_.rank(); ++j) matrix_(i, j) = images[i][j];
    }
  }

  static AbHom zero(const FinAbGroup& a, const FinAbGroup& b) {
    return AbHom(a, b, std::vector<GroupElement>(a.rank(), b.zero()));
  }

  static AbHom identity(const FinAbGroup& a) {
    std::vector<GroupElement> images;
    for (std::size_t i = 0; i < a.rank(); ++i) {
      GroupElement e = a.zero();
      e[i] = 1;
      images.push_back(e);
    }
    return AbHom(a, a, images);
  }

  const FinAbGroup& domain() const { return domain_; }
  const FinAbGroup& codomain() const { return codomain_; }
  const ZModMatrix& matrix() const { return matrix_; }
  GroupElement image_of_generator(std::size_t i) const { return matrix_.row_vec(i); }

  GroupElement operator()(const GroupElement& a) const {
    if (a.size() != domain_.rank()) throw std::invalid_argument("AbHom: argument has wrong length");
    GroupElement out = codomain_.zero();
    for (std::size_t i = 0; i < domain_.rank(); ++i)
      if (a[i] != 0) out = codomain_.add(out, codomain_.scale(a[i], matrix_.row_vec(i)));
    return out;
  }

  friend bool operator==(const AbHom&, const AbHom&) = default;

 private:
  FinAbGroup domain_;
  FinAbGroup codomain_;
  ZModMatrix matrix_{2, 0, 0};
};

// h o f
inline AbHom compose(const AbHom& h, const AbHom& f) {
  if (!(f.codomain() == h.domain())) throw std::invalid_argument("compose: codomain/domain mismatch");
  std::vector<GroupElement> images;
  for (std::size_t i = 0; i < f.domain().rank(); ++i) images.push_back(h(f.image_of_generator(i)));
  return AbHom(f.domain(), h.codomain(), images);
}

struct Subgroup {
  FinAbGroup ambient;
  std::vector<GroupElement> generators;
};

inline Subgroup trivial_subgroup(const FinAbGroup& b) { return {b, {}}; }

inline Subgroup whole_group(const FinAbGroup& b) {
  Subgroup s{b, {}};
  for (std::size_t i = 0; i < b.rank(); ++i) {
    GroupElement e = b.zero();
    e[i] = 1;
    s.generators.push_back(e);
  }
  return s;
}

namespace detail {

inline ZModMatrix generator_matrix(const FinAbGroup& b, const std::vector<GroupElement>& gens, Residue modulus) {
  ZModMatrix g(modulus, gens.size(), b.rank());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].size() != b.rank()) throw std::invalid_argument("subgroup generator has wrong length");
    for (std::size_t j = 0; j < b.rank(); ++j) g(i, j) = modarith::reduce(gens[i][j], modulus);
  }
  return g;
}

// [gens ; diag(factors)] over Z/E: its row span is the preimage lattice of S mod E.
inline ZModMatrix lattice_matrix(const Subgroup& s) {
  const Residue e = s.ambient.modulus();
  return vstack(generator_matrix(s.ambient, s.generators, e), s.ambient.relations());
}

inline std::uint64_t span_size(const ZModMatrix& howell) {
  unsigned __int128 o = 1;
  for (Residue c : span_cyclic_orders(howell)) {
    o *= static_cast<unsigned __int128>(c);
    if (o > UINT64_MAX) throw std::overflow_error("span size overflows 64 bits");
  }
  return static_cast<std::uint64_t>(o);
}

}  // namespace detail

/// Canonical key of a subgroup: equal keys iff equal subgroups.
inline ZModMatrix span_key(const Subgroup& s) { return howell_form(detail::lattice_matrix(s)); }

inline bool same_subgroup(const Subgroup& s, const Subgroup& t) {
  return s.ambient == t.ambient && span_key(s) == span_key(t);
}

inline bool subgroup_contains(const Subgroup& s, const GroupElement& x) {
  RowBasis basis(s.ambient.modulus(), s.ambient.rank());
  basis.insert_rows(detail::lattice_matrix(s));
  return basis.contains(x);
}

inline bool is_contained(const Subgroup& s, const Subgroup& t) {
  for (const auto& g : s.generators)
    if (!subgroup_contains(t, g)) return false;
  return true;
}

inline std::uint64_t subgroup_order(const Subgroup& s) {
  const std::uint64_t lattice = detail::span_size(span_key(s));
  const std::uint64_t relations = detail::span_size(howell_form(s.ambient.relations()));
  return lattice / relations;
}

inline Subgroup multiple(Residue m, const Subgroup& s) {
  Subgroup out{s.ambient, {}};
  for (const auto& g : s.generators) out.generators.push_back(s.ambient.scale(m, g));
  return out;
}

inline Subgroup subgroup_sum(const Subgroup& s, const Subgroup& t) {
  Subgroup out = s;
  out.generators.insert(out.generators.end(), t.generators.begin(), t.generators.end());
  return out;
}

inline Subgroup intersect(const Subgroup& s, const Subgroup& t) {
  if (!(s.ambient == t.ambient)) throw std::invalid_argument("intersect: different ambient groups");
  const FinAbGroup& b = s.ambient;
  const Residue e = b.modulus();
  const ZModMatrix gs = detail::generator_matrix(b, s.generators, e);
  const ZModMatrix stacked = vstack(vstack(gs, detail::generator_matrix(b, t.generators, e)), b.relations());
  const ZModMatrix ker = kernel(stacked);
  Subgroup out{b, {}};
  for (std::size_t i = 0; i < ker.rows(); ++i) {
    GroupElement x = b.reduce(vec_mat(ker.row(i).first(s.generators.size()), gs));
    if (!b.is_zero(x)) out.generators.push_back(std::move(x));
  }
  return out;
}

struct AbstractSubgroup {
  FinAbGroup group;
  AbHom inclusion;
};

/// S as an abstract group together with its inclusion into the ambient group.
inline AbstractSubgroup abstract_form(const Subgroup& s) {
  const FinAbGroup& b = s.ambient;
  const Residue e = b.modulus();
  const std::size_t k = s.generators.size();
  const ZModMatrix gs = detail::generator_matrix(b, s.generators, e);
  const ZModMatrix ker = kernel(vstack(gs, b.relations()));
  const Presentation pres = present(column_slice(ker, 0, k));
  std::vector<GroupElement> images;
  for (std::size_t j = 0; j < pres.group.rank(); ++j) images.push_back(b.reduce(vec_mat(pres.from_canonical.row(j), gs)));
  return {pres.group, AbHom(pres.group, b, images)};
}

struct Quotient {
  FinAbGroup group;
  AbHom projection;
  std::vector<GroupElement> lifts;  // a preimage of each canonical generator
};

inline Quotient quotient(const Subgroup& s) {
  const FinAbGroup& b = s.ambient;
  for (const auto& g : s.generators)
    if (!b.contains(g)) throw std::invalid_argument("quotient: generator outside B");
  const Presentation pres = present(detail::lattice_matrix(s));
  std::vector<GroupElement> images, lifts;
  for (std::size_t i = 0; i < b.rank(); ++i) images.push_back(pres.to_canonical.row_vec(i));
  for (std::size_t j = 0; j < pres.group.rank(); ++j) lifts.push_back(b.reduce(pres.from_canonical.row(j)));
  return {pres.group, AbHom(b, pres.group, images), lifts};
}

inline Subgroup image_subgroup(const AbHom& f) {
  Subgroup s{f.codomain(), {}};
  for (std::size_t i = 0; i < f.domain().rank(); ++i) s.generators.push_back(f.image_of_generator(i));
  return s;
}

inline Subgroup kernel_subgroup(const AbHom& f) {
  const FinAbGroup& a = f.domain();
  const FinAbGroup& b = f.codomain();
  const Residue l = std::max<Residue>(2, std::lcm(a.exponent(), b.exponent()));
  ZModMatrix stacked(l, a.rank() + b.rank(), b.rank());
  for (std::size_t i = 0; i < a.rank(); ++i)
    for (std::size_t j = 0; j < b.rank(); ++j) stacked(i, j) = f.matrix()(i, j);
  for (std::size_t j = 0; j < b.rank(); ++j) stacked(a.rank() + j, j) = b.factor(j) % l;
  const ZModMatrix ker = kernel(stacked);
  Subgroup out{a, {}};
  for (std::size_t i = 0; i < ker.rows(); ++i) {
    GroupElement x = a.reduce(ker.row(i).first(a.rank()));
    if (!a.is_zero(x)) out.generators.push_back(std::move(x));
  }
  return out;
}

inline bool is_injective(const AbHom& f) { return kernel_subgroup(f).generators.empty(); }

inline bool is_surjective(const AbHom& f) { return subgroup_order(image_subgroup(f)) == f.codomain().order(); }

/// C[n] = {c : n*c = 0}.
inline Subgroup torsion_subgroup(const FinAbGroup& c, Residue n) {
  Subgroup s{c, {}};
  for (std::size_t i = 0; i < c.rank(); ++i) {
    const Residue g = std::gcd(n, c.factor(i));
    if (g == 1) continue;
    GroupElement e = c.zero();
    e[i] = c.factor(i) / g;
    s.generators.push_back(e);
  }
  return s;
}

/// A witness a' with m*a' = a, or nullopt when a is not divisible by m in A.
inline std::optional<GroupElement> is_divisible(const FinAbGroup& a_group, const GroupElement& a, Residue m) {
  if (m < 1) throw std::invalid_argument("is_divisible: m must be >= 1");
  GroupElement w(a_group.rank());
  for (std::size_t i = 0; i < a_group.rank(); ++i) {
    const Residue d = a_group.factor(i);
    const Residue g = std::gcd(m, d);
    if (a[i] % g != 0) return std::nullopt;
    const Residue dq = d / g;
    w[i] = dq == 1 ? 0 : modarith::mul(a[i] / g, *modarith::inverse((m / g) % dq, dq), dq);
  }
  return w;
}

struct DivisibilityVerdict {
  bool preserves = true;
  // On failure: m and a with f(a) divisible by m in B but a not divisible by m in A.
  std::optional<std::pair<Residue, GroupElement>> counterexample;
};

namespace detail {

// Is A/m -> B/m injective? Kernel of A -> B/mB must lie in mA.
inline std::optional<GroupElement> divisibility_failure(const AbHom& f, Residue m) {
  const FinAbGroup& a = f.domain();
  const FinAbGroup& b = f.codomain();
  std::vector<Residue> reduced_factors;
  std::vector<GroupElement> images(a.rank());
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < b.rank(); ++j)
    if (std::gcd(m, b.factor(j)) > 1) {
      kept.push_back(j);
      reduced_factors.push_back(std::gcd(m, b.factor(j)));
    }
  const FinAbGroup bm = FinAbGroup::from_invariant_factors(reduced_factors);
  for (std::size_t i = 0; i < a.rank(); ++i) {
    GroupElement y(kept.size());
    for (std::size_t c = 0; c < kept.size(); ++c) y[c] = f.matrix()(i, kept[c]) % reduced_factors[c];
    images[i] = y;
  }
  const Subgroup ker = kernel_subgroup(AbHom(a, bm, images));
  for (const auto& x : ker.generators)
    if (!is_divisible(a, x, m)) return x;
  return std::nullopt;
}

inline DivisibilityVerdict check_divisors(const AbHom& f, const std::vector<Residue>& ms) {
  for (Residue m : ms) {
    if (m == 1) continue;
    if (auto bad = divisibility_failure(f, m)) return {false, std::pair{m, *bad}};
  }
  return {};
}

}  // namespace detail

/// Definition-level check over every divisor m of n.
inline DivisibilityVerdict preserves_n_divisibility(const AbHom& f, Residue n) {
  if (n < 1) throw std::invalid_argument("preserves_n_divisibility: n must be >= 1");
  return detail::check_divisors(f, divisors(n));
}

/// Same question, restricted to prime-power divisors of n.
inline DivisibilityVerdict preserves_n_divisibility_prime_powers(const AbHom& f, Residue n) {
  if (n < 1) throw std::invalid_argument("preserves_n_divisibility: n must be >= 1");
  return detail::check_divisors(f, prime_power_divisors(n));
}

/// Every m >= 1. Only gcd(m, L) matters for L = lcm of both exponents, so
/// m = 1..L covers all cases.
inline DivisibilityVerdict preserves_divisibility(const AbHom& f) {
  const Residue l = std::lcm(f.domain().exponent(), f.codomain().exponent());
  std::vector<Residue> ms(static_cast<std::size_t>(l));
  std::iota(ms.begin(), ms.end(), Residue{1});
  return detail::check_divisors(f, ms);
}

inline Subgroup multiple_subgroup(const FinAbGroup& b, Residue m) { return multiple(m, whole_group(b)); }

/// S is pure in B at level n: S ∩ mB = mS for every m | n.
inline bool is_pure_subgroup(const Subgroup& s, Residue n) {
  const FinAbGroup& b = s.ambient;
  if (n % b.exponent() != 0) throw std::invalid_argument("is_pure_subgroup: exponent of B must divide n");
  for (Residue m : divisors(n))
    if (!same_subgroup(intersect(s, multiple_subgroup(b, m)), multiple(m, s))) return false;
  return true;
}

/// A complement C with B = S ⊕ C, or nullopt if S is not a direct summand.
///
/// Existence is decided by whether the inclusion preserves exp(B)-divisibility.
/// The complement lifts each canonical generator of B/S (order q) and corrects
/// the lift b by some s in S with q*s = q*b, which purity guarantees.
inline std::optional<Subgroup> is_direct_summand(const Subgroup& s) {
  const FinAbGroup& b = s.ambient;
  const Residue e = b.modulus();
  const AbstractSubgroup abs = abstract_form(s);
  if (!preserves_n_divisibility(abs.inclusion, b.exponent()).preserves) return std::nullopt;
  const Quotient q = quotient(s);
  const ZModMatrix gs = detail::generator_matrix(b, s.generators, e);
  Subgroup complement{b, {}};
  for (std::size_t j = 0; j < q.group.rank(); ++j) {
    const Residue order = q.group.factor(j);
    const GroupElement& lift = q.lifts[j];
    const GroupElement target = b.scale(order, lift);
    const auto lambda = solve(vstack(scalar_mul(order, gs), b.relations()), target);
    if (!lambda) throw std::logic_error("is_direct_summand: purity violated while building complement");
    const GroupElement corr = b.reduce(vec_mat(std::span<const Residue>(*lambda).first(s.generators.size()), gs));
    complement.generators.push_back(b.sub(lift, corr));
  }
  if (!intersect(s, complement).generators.empty() ||
      subgroup_order(s) * subgroup_order(complement) != b.order())
    throw std::logic_error("is_direct_summand: complement verification failed");
  return complement;
}

/// Quotient of two row spans over Z/q: span(sub) / span(rel), rel ⊆ sub.
struct Subquotient {
  FinAbGroup group;
  ZModMatrix sub;              // Howell basis of the numerator
  ZModMatrix to_canonical;     // sub.rows() x rank
  ZModMatrix representatives;  // rank x ambient dimension

  /// Canonical coordinates of the class of u; throws if u is outside the numerator.
  GroupElement coordinates(std::span<const Residue> u) const {
    const auto c = solve(sub, u);
    if (!c) throw std::invalid_argument("Subquotient::coordinates: vector outside the numerator span");
    return group.reduce(vec_mat(*c, to_canonical));
  }
};

inline Subquotient subquotient(const ZModMatrix& sub_rows, const ZModMatrix& rel_rows) {
  const Residue q = sub_rows.modulus();
  const ZModMatrix sub = howell_form(sub_rows);
  const std::size_t k = sub.rows();
  ZModMatrix relations = kernel(sub);
  if (relations.rows() == 0) relations = ZModMatrix(q, 0, k);
  for (std::size_t i = 0; i < rel_rows.rows(); ++i) {
    const auto c = solve(sub, rel_rows.row(i));
    if (!c) throw std::invalid_argument("subquotient: relation outside the numerator span");
    relations = vstack(relations, ZModMatrix::from_rows(q, {*c}, k));
  }
  const Presentation pres = present(relations.rows() == 0 ? ZModMatrix(q, 0, k) : relations);
  return {pres.group, sub, pres.to_canonical, sub.rows() == 0 ? ZModMatrix(q, 0, sub_rows.cols()) : mat_mul(pres.from_canonical, sub)};
}

// Fuzz generators.

inline FinAbGroup random_group(Residue max_order, Rng& rng) {
  if (max_order < 1) throw std::invalid_argument("random_group: max_order must be >= 1");
  Residue n = rng.range(1, max_order);
  std::vector<Residue> orders;
  while (n > 1) {
    const auto ds = divisors(n);
    const Residue d = ds[1 + rng.below(ds.size() - 1)];
    orders.push_back(d);
    n /= d;
  }
  return ab_group_new(orders);
}

// Random group with exponent dividing n and order at most max_order.
inline FinAbGroup random_torsion_group(Residue n, Residue max_order, Rng& rng) {
  std::vector<Residue> ds;
  for (Residue d : divisors(n))
    if (d > 1) ds.push_back(d);
  std::vector<Residue> orders;
  Residue order = 1;
  while (!ds.empty() && rng.below(4) != 0) {
    const Residue d = ds[rng.below(ds.size())];
    if (order * d > max_order) break;
    orders.push_back(d);
    order *= d;
  }
  return ab_group_new(orders);
}

inline GroupElement random_element(const FinAbGroup& b, Rng& rng) {
  GroupElement x(b.rank());
  for (std::size_t i = 0; i < b.rank(); ++i) x[i] = static_cast<Residue>(rng.below(static_cast<std::uint64_t>(b.factor(i))));
  return x;
}

inline AbHom random_hom(const FinAbGroup& a, const FinAbGroup& b, Rng& rng) {
  std::vector<GroupElement> images;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    GroupElement y(b.rank());
    for (std::size_t j = 0; j < b.rank(); ++j) {
      const Residue g = std::gcd(a.factor(i), b.factor(j));
      y[j] = (b.factor(j) / g) * static_cast<Residue>(rng.below(static_cast<std::uint64_t>(g)));
    }
    images.push_back(y);
  }
  return AbHom(a, b, images);
}

inline Subgroup random_subgroup(const FinAbGroup& b, Rng& rng) {
  Subgroup s{b, {}};
  const std::size_t count = rng.below(b.rank() + 2);
  for (std::size_t i = 0; i < count; ++i) s.generators.push_back(random_element(b, rng));
  return s;
}

// Random automorphism by rejection over random endomorphisms; identity if none found.
inline AbHom random_automorphism(const FinAbGroup& a, Rng& rng, int tries = 32) {
  for (int t = 0; t < tries; ++t) {
    AbHom h = random_hom(a, a, rng);
    if (is_injective(h)) return h;
  }
  return AbHom::identity(a);
}

/// A random subgroup of B in abstract form with its (randomly re-based) inclusion.
inline AbstractSubgroup random_embedding(const FinAbGroup& b, Rng& rng) {
  AbstractSubgroup abs = abstract_form(random_subgroup(b, rng));
  abs.inclusion = compose(abs.inclusion, random_automorphism(abs.group, rng));
  return abs;
}

}  // namespace h1cyc
