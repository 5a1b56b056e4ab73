#pragma once

// First cohomology of a finite matrix group acting on (Z/q)^n.
//
// A 1-cocycle is parameterized by its values on the group generators: the
// unknown vector u stacks Z(s_1), ..., Z(s_t). Closing the group breadth-first
// assigns every element x a matrix L_x with Z(x) = L_x u, and every Cayley
// edge that reaches an already-known element yields the constraint that the
// two expressions agree. Z^1 is the solution space of those constraints.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "h1cyc/abelian.hpp"
#include "h1cyc/matgroup.hpp"
#include "h1cyc/modmat.hpp"

namespace h1cyc {

struct CocycleSpace {
  std::shared_ptr<const MatGroup> group;
  std::shared_ptr<const GModule> module;
  std::size_t unknowns = 0;            // generators x rank
  std::vector<ZModMatrix> value_maps;  // rank x unknowns per element: Z(x) = value_maps[x] * u
  ZModMatrix constraints;              // Howell form; u is a cocycle iff constraints * u = 0
  ZModMatrix z1;                       // Howell basis of Z^1
  ZModMatrix b1;                       // Howell basis of B^1

  Residue modulus() const { return module->modulus(); }
  std::size_t rank() const { return module->rank(); }
};

using CocycleSpacePtr = std::shared_ptr<const CocycleSpace>;

/// Solutions u of the homogeneous system rows * u = 0, as a Howell basis.
inline ZModMatrix right_kernel(const ZModMatrix& rows, std::size_t unknowns) {
  if (rows.rows() == 0) return ZModMatrix::identity(rows.modulus(), unknowns);
  return kernel(transpose(rows));
}

namespace detail {

// (g - 1) for each generator, transposed and laid side by side: m * A lists
// the coboundary of m on the generators.
inline ZModMatrix coboundary_operator(const GModule& m) {
  const ZModMatrix id = ZModMatrix::identity(m.modulus(), m.rank());
  ZModMatrix a(m.modulus(), m.rank(), 0);
  for (std::size_t s = 0; s < m.generator_count(); ++s) a = hstack(a, transpose(mat_sub(m.generator_action(s), id)));
  return a;
}

}  // namespace detail

inline CocycleSpacePtr cocycle_space(std::shared_ptr<const MatGroup> group, std::shared_ptr<const GModule> module) {
  const MatGroup& g = *group;
  const GModule& m = *module;
  if (m.group_order() != g.order() || m.generator_count() != g.generator_count())
    throw std::invalid_argument("cocycle_space: module does not belong to this group");
  const Residue q = m.modulus();
  const std::size_t n = m.rank(), t = g.generator_count(), d = n * t;

  auto space = std::make_shared<CocycleSpace>();
  space->group = group;
  space->module = module;
  space->unknowns = d;
  space->value_maps.assign(g.order(), ZModMatrix(q, n, d));

  RowBasis constraints(q, d);
  std::vector<bool> assigned(g.order(), false);
  assigned[0] = true;
  Vec row(d);
  for (std::size_t i = 0; i < g.order(); ++i) {
    for (std::size_t s = 0; s < t; ++s) {
      // Z(s x) = Z(s) + s Z(x)
      ZModMatrix candidate = mat_mul(m.generator_action(s), space->value_maps[i]);
      for (std::size_t k = 0; k < n; ++k) candidate(k, s * n + k) = modarith::add(candidate(k, s * n + k), 1, q);
      const std::size_t j = g.left_multiply(s, i);
      if (!assigned[j]) {
        space->value_maps[j] = std::move(candidate);
        assigned[j] = true;
        continue;
      }
      const ZModMatrix& known = space->value_maps[j];
      for (std::size_t k = 0; k < n; ++k) {
        bool zero = true;
        for (std::size_t c = 0; c < d; ++c) {
          row[c] = modarith::sub(candidate(k, c), known(k, c), q);
          zero = zero && row[c] == 0;
        }
        if (!zero) constraints.insert(row);
      }
    }
  }
  space->constraints = constraints.canonical();
  space->z1 = right_kernel(space->constraints, d);
  space->b1 = howell_form(detail::coboundary_operator(m));
  return space;
}

inline CocycleSpacePtr cocycle_space(const MatGroup& group, const GModule& module) {
  return cocycle_space(std::make_shared<const MatGroup>(group), std::make_shared<const GModule>(module));
}

class Cocycle {
 public:
  /// Rejects generator values that violate the cocycle constraints.
  Cocycle(CocycleSpacePtr space, Vec generator_values) : space_(std::move(space)), values_(std::move(generator_values)) {
    if (values_.size() != space_->unknowns) throw std::invalid_argument("Cocycle: wrong number of generator values");
    for (auto& v : values_) v = modarith::reduce(v, space_->modulus());
    if (!detail::is_zero(mat_vec(space_->constraints, values_)))
      throw std::invalid_argument("Cocycle: generator values violate the cocycle identity");
  }

  const CocycleSpacePtr& space() const { return space_; }
  const Vec& generator_values() const { return values_; }

  Vec value(std::size_t element) const { return mat_vec(space_->value_maps[element], values_); }

  std::vector<Vec> table() const {
    std::vector<Vec> out;
    out.reserve(space_->group->order());
    for (std::size_t i = 0; i < space_->group->order(); ++i) out.push_back(value(i));
    return out;
  }

  bool is_zero() const { return detail::is_zero(values_); }

 private:
  CocycleSpacePtr space_;
  Vec values_;
};

/// Z(x y) = Z(x) + x Z(y) on the given pairs (all pairs when `pairs` is empty).
inline bool check_cocycle_identity(const Cocycle& z, const std::vector<std::pair<std::size_t, std::size_t>>& pairs = {}) {
  const MatGroup& g = *z.space()->group;
  const GModule& m = *z.space()->module;
  const Residue q = m.modulus();
  const std::vector<Vec> table = z.table();
  if (!detail::is_zero(table[0])) return false;
  auto check = [&](std::size_t x, std::size_t y) {
    const Vec lhs = table[g.multiply(x, y)];
    Vec rhs = mat_vec(m.action(x), table[y]);
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = modarith::add(rhs[k], table[x][k], q);
    return lhs == rhs;
  };
  if (pairs.empty()) {
    for (std::size_t x = 0; x < g.order(); ++x)
      for (std::size_t y = 0; y < g.order(); ++y)
        if (!check(x, y)) return false;
    return true;
  }
  for (auto [x, y] : pairs)
    if (!check(x, y)) return false;
  return true;
}

/// The coboundary g |-> (g - 1) m.
inline Cocycle coboundary(const CocycleSpacePtr& space, std::span<const Residue> m) {
  if (m.size() != space->rank()) throw std::invalid_argument("coboundary: module element has wrong length");
  return Cocycle(space, vec_mat(m, detail::coboundary_operator(*space->module)));
}

/// Some m with Z = coboundary(m), or nullopt.
inline std::optional<Vec> is_coboundary(const Cocycle& z) {
  return solve(detail::coboundary_operator(*z.space()->module), z.generator_values());
}

/// H^1 presented by invariant factors, with representatives in
/// generator-value coordinates.
struct H1Group {
  CocycleSpacePtr space;
  Subquotient quotient;  // numerator: the relevant cocycles; denominator: B^1

  const FinAbGroup& group() const { return quotient.group; }
  const std::vector<Residue>& invariant_factors() const { return quotient.group.invariant_factors(); }
  std::uint64_t order() const { return quotient.group.order(); }
  bool is_trivial() const { return quotient.group.is_trivial(); }
  const ZModMatrix& cocycles() const { return quotient.sub; }

  std::vector<Cocycle> representatives() const {
    std::vector<Cocycle> out;
    for (std::size_t i = 0; i < quotient.representatives.rows(); ++i)
      out.emplace_back(space, quotient.representatives.row_vec(i));
    return out;
  }

  /// Class of z in canonical coordinates; throws if z is not in the numerator.
  GroupElement class_of(const Cocycle& z) const { return quotient.coordinates(z.generator_values()); }
};

inline H1Group h1(const CocycleSpacePtr& space) { return {space, subquotient(space->z1, space->b1)}; }

/// Conditions on u forcing Z(x) into the image of (x - 1), for one element x.
inline void add_local_triviality_rows(const CocycleSpace& space, std::size_t x, RowBasis& rows) {
  const Residue q = space.modulus();
  const std::size_t n = space.rank();
  const ZModMatrix a = mat_sub(space.module->action(x), ZModMatrix::identity(q, n));
  // u A v = d: y lies in the column span of A iff (u y)_i is a multiple of d_i.
  const SmithForm snf = smith_normal_form(a);
  const ZModMatrix projected = mat_mul(snf.u, space.value_maps[x]);
  const Vec diag = snf.diagonal();
  for (std::size_t i = 0; i < n; ++i) {
    const Residue di = diag[i] == 0 ? q : diag[i];
    if (di == 1) continue;
    const Vec r = detail::scaled(projected.row(i), q / di, q);
    if (!detail::is_zero(r)) rows.insert(r);
  }
}

/// Cocycles whose restriction to every cyclic subgroup <x> is a coboundary,
/// i.e. Z(x) ∈ (x - 1)M for every x in G.
inline ZModMatrix locally_trivial_cocycles(const CocycleSpace& space) {
  RowBasis rows(space.modulus(), space.unknowns);
  rows.insert_rows(space.constraints);
  for (std::size_t x = 0; x < space.group->order(); ++x) add_local_triviality_rows(space, x, rows);
  return right_kernel(rows.canonical(), space.unknowns);
}

/// H^1_cyc(G, M): classes restricting trivially to every cyclic subgroup.
inline H1Group h1_cyc(const CocycleSpacePtr& space) {
  return {space, subquotient(locally_trivial_cocycles(*space), space->b1)};
}

/// The norm 1 + g + ... + g^(r-1) of an element of order r.
inline ZModMatrix norm_matrix(const ZModMatrix& gamma) {
  const ZModMatrix id = ZModMatrix::identity(gamma.modulus(), gamma.rows());
  ZModMatrix sum = id, power = gamma;
  while (!(power == id)) {
    sum = mat_add(sum, power);
    power = mat_mul(power, gamma);
  }
  return sum;
}

/// H^1(<gamma>, M) = ker(T_gamma) / (gamma - 1)M, computed from gamma alone.
/// The numerator is the Howell basis of ker(T_gamma) in M's coordinates.
inline Subquotient cyclic_h1(const ZModMatrix& gamma) {
  if (gamma.rows() != gamma.cols()) throw std::invalid_argument("cyclic_h1: matrix is not square");
  if (!is_invertible(gamma)) throw std::invalid_argument("cyclic_h1: matrix is not invertible");
  const ZModMatrix t = norm_matrix(gamma);
  const ZModMatrix image = transpose(mat_sub(gamma, ZModMatrix::identity(gamma.modulus(), gamma.rows())));
  return subquotient(right_kernel(t, gamma.rows()), image);
}

/// Restriction of z to a subgroup, expressed in the subgroup's own space.
inline Cocycle restrict_cocycle(const Cocycle& z, const CocycleSpacePtr& subspace) {
  const MatGroup& g = *z.space()->group;
  Vec values;
  for (const auto& x : subspace->group->generators()) {
    auto i = g.index_of(x);
    if (!i) throw std::invalid_argument("restrict: subgroup generator outside the group");
    const Vec v = z.value(*i);
    values.insert(values.end(), v.begin(), v.end());
  }
  return Cocycle(subspace, std::move(values));
}

/// Inflation along a surjection G -> Q into M^N, with the module
/// identification iota: M_Q -> M_G given as an integer matrix applied to lifts.
class Inflation {
 public:
  Inflation(CocycleSpacePtr source, CocycleSpacePtr target, std::vector<std::size_t> projection, ZModMatrix iota)
      : source_(std::move(source)), target_(std::move(target)), projection_(std::move(projection)), iota_(std::move(iota)) {
    const MatGroup& g = *target_->group;
    const MatGroup& q = *source_->group;
    const Residue qq = source_->modulus(), qg = target_->modulus();
    if (projection_.size() != g.order()) throw std::invalid_argument("Inflation: projection must cover every element of G");
    if (iota_.modulus() != qg || iota_.rows() != target_->rank() || iota_.cols() != source_->rank())
      throw std::invalid_argument("Inflation: identification map has the wrong shape");
    if (!scalar_mul(qq, iota_).is_zero())
      throw std::invalid_argument("Inflation: identification map is not well defined on M_Q");
    for (std::size_t s = 0; s < g.generator_count(); ++s)
      for (std::size_t i = 0; i < g.order(); ++i)
        if (projection_[g.left_multiply(s, i)] != q.multiply(projection_[g.generator_index(s)], projection_[i]))
          throw std::invalid_argument("Inflation: projection is not a homomorphism");
    for (std::size_t s = 0; s < g.generator_count(); ++s) {
      const ZModMatrix rho_q = lift_mod(source_->module->action(projection_[g.generator_index(s)]), qg);
      if (!(mat_mul(iota_, rho_q) == mat_mul(target_->module->generator_action(s), iota_)))
        throw std::invalid_argument("Inflation: identification map is not equivariant");
    }
  }

  Cocycle operator()(const Cocycle& z) const {
    if (z.space() != source_) throw std::invalid_argument("Inflation: cocycle lives on a different space");
    const MatGroup& g = *target_->group;
    Vec values;
    for (std::size_t s = 0; s < g.generator_count(); ++s) {
      const Vec v = mat_vec(iota_, z.value(projection_[g.generator_index(s)]));
      values.insert(values.end(), v.begin(), v.end());
    }
    return Cocycle(target_, std::move(values));
  }

  const CocycleSpacePtr& source() const { return source_; }
  const CocycleSpacePtr& target() const { return target_; }

 private:
  CocycleSpacePtr source_;
  CocycleSpacePtr target_;
  std::vector<std::size_t> projection_;
  ZModMatrix iota_;
};

/// The map x |-> p * lift(x) from (Z/p^2)^n into (Z/p^3)^n.
inline ZModMatrix scaled_lift_identification(Residue p, std::size_t n) {
  return scalar_mul(p, ZModMatrix::identity(p * p * p, n));
}

/// Induced map between presented cohomology groups, from a cocycle-level map.
template <class CocycleMap>
AbHom induced_map(const H1Group& source, const H1Group& target, CocycleMap&& map) {
  std::vector<GroupElement> images;
  for (const auto& z : source.representatives()) images.push_back(target.class_of(map(z)));
  return AbHom(source.group(), target.group(), images);
}

struct InfResReport {
  std::vector<Residue> h1_quotient;  // H^1(G/N, M^N)
  std::vector<Residue> h1_group;     // H^1(G, M)
  std::vector<Residue> h1_normal;    // H^1(N, M)
  bool inflation_injective = false;
  bool restriction_kills_inflation = false;
  bool kernel_of_restriction_is_image = false;
  bool holds() const { return inflation_injective && restriction_kills_inflation && kernel_of_restriction_is_image; }
};

/// Exactness of 0 -> H^1(G/N, M^N) -> H^1(G, M) -> H^1(N, M) at its first two
/// terms. The inflated cocycles are identified inside Z^1(G, M) as those
/// vanishing on N.
inline InfResReport verify_inf_res_exactness(const CocycleSpacePtr& space, const MatGroup& normal) {
  const MatGroup& g = *space->group;
  const GModule& m = *space->module;
  const Residue q = space->modulus();
  const std::size_t n = space->rank(), d = space->unknowns;
  if (!is_normal(g, normal)) throw std::invalid_argument("verify_inf_res_exactness: N is not normal in G");

  std::vector<std::size_t> n_elements;
  for (const auto& x : normal.elements()) n_elements.push_back(*g.index_of(x));

  // Cocycles vanishing on N: the image of inflation at the cocycle level.
  RowBasis vanish(q, d);
  vanish.insert_rows(space->constraints);
  for (std::size_t x : n_elements) vanish.insert_rows(space->value_maps[x]);
  const ZModMatrix inflated = right_kernel(vanish.canonical(), d);

  const GModule restricted = GModule::restricted(m, g, normal);
  const ZModMatrix fixed = fixed_points(restricted);
  const ZModMatrix cob = detail::coboundary_operator(m);
  const ZModMatrix b1_fixed = fixed.rows() == 0 ? ZModMatrix(q, 0, d) : howell_form(mat_mul(fixed, cob));

  InfResReport report;
  report.h1_quotient = subquotient(inflated, b1_fixed).group.invariant_factors();
  report.h1_group = h1(space).invariant_factors();
  report.h1_normal = h1(cocycle_space(normal, restricted)).invariant_factors();

  // Injective: an inflated cocycle that is a G-coboundary is a coboundary of M^N.
  {
    const ZModMatrix ker = kernel(vstack(inflated, space->b1));
    ZModMatrix meet(q, 0, d);
    for (std::size_t i = 0; i < ker.rows(); ++i)
      meet = vstack(meet, ZModMatrix::from_rows(q, {vec_mat(ker.row(i).first(inflated.rows()), inflated)}, d));
    report.inflation_injective = howell_form(meet) == b1_fixed;
  }

  report.restriction_kills_inflation = true;
  for (std::size_t i = 0; i < inflated.rows(); ++i)
    for (std::size_t x : n_elements)
      if (!detail::is_zero(mat_vec(space->value_maps[x], inflated.row(i)))) report.restriction_kills_inflation = false;

  // Kernel of restriction: (u, m) with u a cocycle and Z(x) = (x - 1) m on N.
  {
    RowBasis rows(q, d + n);
    Vec r(d + n);
    for (std::size_t i = 0; i < space->constraints.rows(); ++i) {
      std::fill(r.begin(), r.end(), 0);
      std::copy(space->constraints.row(i).begin(), space->constraints.row(i).end(), r.begin());
      rows.insert(r);
    }
    const ZModMatrix id = ZModMatrix::identity(q, n);
    for (std::size_t x : n_elements) {
      const ZModMatrix a = mat_sub(m.action(x), id);
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t c = 0; c < d; ++c) r[c] = space->value_maps[x](k, c);
        for (std::size_t c = 0; c < n; ++c) r[d + c] = modarith::neg(a(k, c), q);
        rows.insert(r);
      }
    }
    const ZModMatrix sol = right_kernel(rows.canonical(), d + n);
    const ZModMatrix ker_res = howell_form(column_slice(sol, 0, d));
    report.kernel_of_restriction_is_image = ker_res == howell_form(vstack(inflated, space->b1));
  }
  return report;
}

}  // namespace h1cyc
