#pragma once

// Finite subgroups of GL_n(Z/q) enumerated by breadth-first closure, the
// modules they act on, and the explicit groups H2, G2, N, G3 over Z/p^k.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "h1cyc/abelian.hpp"
#include "h1cyc/modmat.hpp"

namespace h1cyc {

class ClosureCapExceeded : public std::runtime_error {
 public:
  explicit ClosureCapExceeded(std::size_t cap)
      : std::runtime_error("closure exceeded the cap of " + std::to_string(cap) + " elements") {}
};

inline constexpr std::size_t kDefaultClosureCap = 1'000'000;

namespace detail {

// Row-major base-q digit string.
inline std::string element_key(const ZModMatrix& x) {
  int bytes = 1;
  for (Residue m = x.modulus() - 1; m > 255; m >>= 8) ++bytes;
  std::string key;
  key.reserve(x.data().size() * static_cast<std::size_t>(bytes));
  for (Residue e : x.data())
    for (int b = 0; b < bytes; ++b) key.push_back(static_cast<char>((e >> (8 * b)) & 0xff));
  return key;
}

}  // namespace detail

class MatGroup {
 public:
  /// The group generated by `generators`, by breadth-first left multiplication.
  /// Element 0 is the identity; element i (i > 0) equals
  /// generators[parent_generator(i)] * element(parent(i)).
  static MatGroup closure(std::vector<ZModMatrix> generators, std::size_t cap = kDefaultClosureCap) {
    return closure(std::move(generators), 0, 0, cap);
  }

  static MatGroup closure(std::vector<ZModMatrix> generators, Residue modulus, std::size_t dim,
                          std::size_t cap = kDefaultClosureCap) {
    if (!generators.empty()) {
      modulus = generators.front().modulus();
      dim = generators.front().rows();
    }
    if (modulus < 2) throw std::invalid_argument("MatGroup: modulus required for an empty generator list");
    for (const auto& g : generators) {
      if (g.rows() != dim || g.cols() != dim) throw std::invalid_argument("MatGroup: generators must be square of equal size");
      if (g.modulus() != modulus) throw std::invalid_argument("MatGroup: generators must share a modulus");
      if (!is_invertible(g)) throw std::invalid_argument("MatGroup: non-invertible generator");
    }
    MatGroup group;
    group.modulus_ = modulus;
    group.dim_ = dim;
    group.generators_ = std::move(generators);
    group.left_mult_.resize(group.generators_.size());
    group.add(ZModMatrix::identity(modulus, dim), 0, 0);
    for (std::size_t i = 0; i < group.elements_.size(); ++i) {
      for (std::size_t s = 0; s < group.generators_.size(); ++s) {
        ZModMatrix y = mat_mul(group.generators_[s], group.elements_[i]);
        auto it = group.index_.find(detail::element_key(y));
        std::uint32_t j;
        if (it == group.index_.end()) {
          if (group.elements_.size() >= cap) throw ClosureCapExceeded(cap);
          j = group.add(std::move(y), static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(s));
        } else {
          j = it->second;
        }
        group.left_mult_[s].push_back(j);
      }
    }
    return group;
  }

  Residue modulus() const { return modulus_; }
  std::size_t dim() const { return dim_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<ZModMatrix>& generators() const { return generators_; }
  std::size_t generator_count() const { return generators_.size(); }
  const ZModMatrix& element(std::size_t i) const { return elements_[i]; }
  const std::vector<ZModMatrix>& elements() const { return elements_; }

  std::optional<std::size_t> index_of(const ZModMatrix& x) const {
    if (x.modulus() != modulus_ || x.rows() != dim_ || x.cols() != dim_) return std::nullopt;
    auto it = index_.find(detail::element_key(x));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const ZModMatrix& x) const { return index_of(x).has_value(); }

  std::size_t parent(std::size_t i) const { return parent_[i]; }
  std::size_t parent_generator(std::size_t i) const { return parent_gen_[i]; }

  // Index of generators[s] * element(i).
  std::size_t left_multiply(std::size_t s, std::size_t i) const { return left_mult_[s][i]; }

  std::size_t generator_index(std::size_t s) const { return left_mult_[s][0]; }

  /// Witness word: element(i) = gen[w[0]] * gen[w[1]] * ... .
  std::vector<std::size_t> word(std::size_t i) const {
    std::vector<std::size_t> w;
    for (; i != 0; i = parent_[i]) w.push_back(parent_gen_[i]);
    return w;
  }

  std::size_t multiply(std::size_t i, std::size_t j) const {
    auto k = index_of(mat_mul(elements_[i], elements_[j]));
    if (!k) throw std::logic_error("MatGroup: table not closed under multiplication");
    return *k;
  }

  std::size_t inverse_index(std::size_t i) const {
    auto k = index_of(*inverse(elements_[i]));
    if (!k) throw std::logic_error("MatGroup: table not closed under inversion");
    return *k;
  }

 private:
  std::uint32_t add(ZModMatrix x, std::uint32_t parent, std::uint32_t gen) {
    const auto idx = static_cast<std::uint32_t>(elements_.size());
    index_.emplace(detail::element_key(x), idx);
    elements_.push_back(std::move(x));
    parent_.push_back(parent);
    parent_gen_.push_back(gen);
    return idx;
  }

  Residue modulus_ = 2;
  std::size_t dim_ = 0;
  std::vector<ZModMatrix> generators_;
  std::vector<ZModMatrix> elements_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> parent_gen_;
  std::vector<std::vector<std::uint32_t>> left_mult_;
};

inline std::size_t element_order(const ZModMatrix& x) {
  if (!is_invertible(x)) throw std::invalid_argument("element_order: matrix is not invertible");
  const ZModMatrix id = ZModMatrix::identity(x.modulus(), x.rows());
  ZModMatrix y = x;
  std::size_t r = 1;
  while (!(y == id)) {
    y = mat_mul(y, x);
    ++r;
  }
  return r;
}

/// The subgroup of `g` generated by element i, as its own group.
inline MatGroup cyclic_subgroup(const MatGroup& g, std::size_t i) { return MatGroup::closure({g.element(i)}); }

/// Every cyclic subgroup <x> of g exactly once, in order of first generator index.
inline std::vector<MatGroup> cyclic_subgroups(const MatGroup& g) {
  std::set<std::vector<std::size_t>> seen;
  std::vector<MatGroup> out;
  for (std::size_t i = 0; i < g.order(); ++i) {
    std::vector<std::size_t> members{0};
    for (std::size_t j = i; j != 0; j = g.multiply(i, j)) members.push_back(j);
    std::sort(members.begin(), members.end());
    if (seen.insert(members).second) out.push_back(cyclic_subgroup(g, i));
  }
  return out;
}

inline bool is_subgroup(const MatGroup& g, const MatGroup& h) {
  return std::all_of(h.generators().begin(), h.generators().end(), [&](const ZModMatrix& x) { return g.contains(x); });
}

/// H normal in G, given H ⊆ G: conjugation by G's generators preserves H.
inline bool is_normal(const MatGroup& g, const MatGroup& h) {
  if (!is_subgroup(g, h)) throw std::invalid_argument("is_normal: H is not a subgroup of G");
  for (const auto& x : g.generators()) {
    const ZModMatrix xi = *inverse(x);
    for (const auto& y : h.generators())
      if (!h.contains(mat_mul(mat_mul(x, y), xi))) return false;
  }
  return true;
}

/// Entrywise reduction to a modulus dividing the current one.
inline ZModMatrix reduce_mod(const ZModMatrix& x, Residue target) {
  if (x.modulus() % target != 0) throw std::invalid_argument("reduce_mod: target must divide the modulus");
  ZModMatrix y(target, x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) y(i, j) = x(i, j) % target;
  return y;
}

/// Same integer entries read modulo a multiple of the current modulus.
inline ZModMatrix lift_mod(const ZModMatrix& x, Residue target) {
  if (target % x.modulus() != 0) throw std::invalid_argument("lift_mod: target must be a multiple of the modulus");
  return ZModMatrix::from_rows(target, x.to_rows(), x.cols());
}

/// For each element of g, the index of its reduction in `target`.
inline std::vector<std::size_t> reduction_map(const MatGroup& g, const MatGroup& target) {
  std::vector<std::size_t> map(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) {
    auto j = target.index_of(reduce_mod(g.element(i), target.modulus()));
    if (!j) throw std::invalid_argument("reduction_map: element does not reduce into the target group");
    map[i] = *j;
  }
  return map;
}

/// Generators 1 + q*E_ab of the kernel of GL_n(Z/Q) -> GL_n(Z/q).
inline std::vector<ZModMatrix> congruence_kernel_generators(Residue q, Residue big_q, std::size_t n) {
  std::vector<ZModMatrix> gens;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      ZModMatrix x = ZModMatrix::identity(big_q, n);
      x(a, b) = (x(a, b) + q) % big_q;
      gens.push_back(x);
    }
  return gens;
}

/// Full preimage of g under reduction Z/Q -> Z/q (q = g.modulus()), generated
/// by lifts of g's generators together with the congruence kernel.
inline MatGroup preimage_under_reduction(const MatGroup& g, Residue big_q, std::size_t cap = kDefaultClosureCap) {
  if (big_q % g.modulus() != 0 || big_q == g.modulus())
    throw std::invalid_argument("preimage_under_reduction: target modulus must be a proper multiple");
  std::vector<ZModMatrix> gens;
  for (const auto& x : g.generators()) gens.push_back(lift_mod(x, big_q));
  for (auto& k : congruence_kernel_generators(g.modulus(), big_q, g.dim())) gens.push_back(std::move(k));
  return MatGroup::closure(std::move(gens), big_q, g.dim(), cap);
}

/// Z/q-module (Z/q)^n with a matrix action of a MatGroup, stored per element.
/// Actions are column-vector actions: x |-> action(g) * x.
class GModule {
 public:
  static GModule natural(const MatGroup& g) {
    GModule m;
    m.modulus_ = g.modulus();
    m.rank_ = g.dim();
    m.actions_ = g.elements();
    m.generator_actions_ = g.generators();
    return m;
  }

  static GModule trivial(const MatGroup& g, Residue modulus, std::size_t rank) {
    return from_generator_action(g, modulus, rank,
                                 std::vector<ZModMatrix>(g.generator_count(), ZModMatrix::identity(modulus, rank)));
  }

  /// Extends an action given on generators; rejects assignments that do not
  /// define a homomorphism on the group.
  static GModule from_generator_action(const MatGroup& g, Residue modulus, std::size_t rank,
                                       std::vector<ZModMatrix> generator_actions) {
    if (generator_actions.size() != g.generator_count())
      throw std::invalid_argument("GModule: one action matrix per group generator required");
    for (const auto& a : generator_actions)
      if (a.modulus() != modulus || a.rows() != rank || a.cols() != rank)
        throw std::invalid_argument("GModule: action matrix does not match modulus and rank");
    GModule m;
    m.modulus_ = modulus;
    m.rank_ = rank;
    m.generator_actions_ = std::move(generator_actions);
    m.actions_.resize(g.order());
    m.actions_[0] = ZModMatrix::identity(modulus, rank);
    for (std::size_t i = 1; i < g.order(); ++i)
      m.actions_[i] = mat_mul(m.generator_actions_[g.parent_generator(i)], m.actions_[g.parent(i)]);
    for (std::size_t s = 0; s < g.generator_count(); ++s)
      for (std::size_t i = 0; i < g.order(); ++i)
        if (!(m.actions_[g.left_multiply(s, i)] == mat_mul(m.generator_actions_[s], m.actions_[i])))
          throw std::invalid_argument("GModule: generator action does not define a group homomorphism");
    return m;
  }

  /// Restriction of m (a G-module) to a subgroup h of g.
  static GModule restricted(const GModule& m, const MatGroup& g, const MatGroup& h) {
    std::vector<ZModMatrix> acts;
    for (const auto& x : h.generators()) {
      auto i = g.index_of(x);
      if (!i) throw std::invalid_argument("GModule::restricted: H is not a subgroup of G");
      acts.push_back(m.action(*i));
    }
    return from_generator_action(h, m.modulus(), m.rank(), std::move(acts));
  }

  Residue modulus() const { return modulus_; }
  std::size_t rank() const { return rank_; }
  std::size_t group_order() const { return actions_.size(); }
  const ZModMatrix& action(std::size_t element) const { return actions_[element]; }
  const ZModMatrix& generator_action(std::size_t s) const { return generator_actions_[s]; }
  std::size_t generator_count() const { return generator_actions_.size(); }

 private:
  Residue modulus_ = 2;
  std::size_t rank_ = 0;
  std::vector<ZModMatrix> actions_;
  std::vector<ZModMatrix> generator_actions_;
};

/// Howell basis (rows) of M^G = {x : g x = x for all g}, as the joint kernel
/// of (g - 1) over the generators.
inline ZModMatrix fixed_points(const GModule& m) {
  const Residue q = m.modulus();
  const std::size_t n = m.rank();
  const ZModMatrix id = ZModMatrix::identity(q, n);
  ZModMatrix joint(q, n, 0);
  for (std::size_t s = 0; s < m.generator_count(); ++s)
    joint = hstack(joint, transpose(mat_sub(m.generator_action(s), id)));
  return kernel(joint);
}

// Explicit constructions over Z/p^2 and Z/p^3.
namespace lemma_fg {

inline void require_admissible_prime(Residue p) {
  if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
  if (p % 3 != 2) throw std::invalid_argument("p = " + std::to_string(p) + " is not congruent to 2 mod 3");
}

/// M_{a,b} = [[a - 2b, 3(b - a)], [-b, -(a - 2b)]] over Z/modulus.
inline ZModMatrix m_ab(Residue a, Residue b, Residue modulus) {
  return ZModMatrix::from_rows(modulus, {{a - 2 * b, 3 * (b - a)}, {-b, -(a - 2 * b)}});
}

/// 1 + p*M_{a,b} over Z/p^2; depends only on a, b mod p.
inline ZModMatrix h_element(Residue p, Residue a, Residue b) {
  const Residue q = p * p;
  return ZModMatrix::from_rows(q, {{1 + p * (a - 2 * b), 3 * p * (b - a)}, {-p * b, 1 - p * (a - 2 * b)}});
}

inline ZModMatrix build_g(Residue p) {
  require_admissible_prime(p);
  return ZModMatrix::from_rows(p * p, {{1, -3}, {1, -2}});
}

inline MatGroup build_H2(Residue p) {
  require_admissible_prime(p);
  MatGroup h = MatGroup::closure({h_element(p, 1, 0), h_element(p, 0, 1)});
  if (h.order() != static_cast<std::size_t>(p * p)) throw std::logic_error("build_H2: |H2| != p^2");
  return h;
}

inline MatGroup build_G2(Residue p) {
  require_admissible_prime(p);
  MatGroup g = MatGroup::closure({build_g(p), h_element(p, 1, 0), h_element(p, 0, 1)});
  if (g.order() != static_cast<std::size_t>(3 * p * p)) throw std::logic_error("build_G2: |G2| != 3p^2");
  return g;
}

/// Matrices congruent to the identity mod p^2 inside GL_2(Z/p^3).
inline MatGroup build_N(Residue p) {
  if (!is_prime(p)) throw std::invalid_argument("build_N: p must be prime");
  return MatGroup::closure(congruence_kernel_generators(p * p, p * p * p, 2));
}

inline MatGroup build_G3(Residue p, std::size_t cap = kDefaultClosureCap) {
  return preimage_under_reduction(build_G2(p), p * p * p, cap);
}

}  // namespace lemma_fg

}  // namespace h1cyc
