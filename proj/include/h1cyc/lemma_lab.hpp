#pragma once

// Executable checks of the direct-summand lemmas on finite abelian groups:
//
//   equivalence    for an embedding f: A -> B of n-torsion groups,
//                  f(A) summand  <=>  f preserves divisibility
//                                <=>  f preserves n-divisibility;
//   diagram        the six-hypothesis criterion for beta(B) to be a summand
//                  of B' in a commutative square over an exact-ish row;
//   non-summand    (i) P not m-divisible but f(P) is, (ii) ker f ⊆ mA
//                  imply f(A) is not a summand.
//
// Conclusions are always judged by exhaustive subgroup search, never by the
// divisibility criterion itself.

#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "h1cyc/abelian.hpp"
#include "h1cyc/lattice.hpp"
#include "h1cyc/rng.hpp"

namespace h1cyc::lab {

enum class Verdict { holds, not_applicable, violated };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::not_applicable: return "not_applicable";
    case Verdict::violated: return "violated";
  }
  return "?";
}

struct Flag {
  std::string name;
  bool value = false;
};

struct LemmaReport {
  std::string lemma;
  std::vector<Flag> hypotheses;
  std::optional<bool> conclusion;  // evaluated only when every hypothesis holds
  std::vector<Flag> checks;        // proof-step invariants and cross-checks
  std::optional<std::string> counterexample;
  double elapsed_ms = 0;

  bool applicable() const {
    return std::all_of(hypotheses.begin(), hypotheses.end(), [](const Flag& f) { return f.value; });
  }

  Verdict verdict() const {
    if (counterexample) return Verdict::violated;
    return applicable() ? Verdict::holds : Verdict::not_applicable;
  }

  bool flag(const std::string& name) const {
    for (const auto* list : {&hypotheses, &checks})
      for (const auto& f : *list)
        if (f.name == name) return f.value;
    throw std::out_of_range("LemmaReport: no flag named " + name);
  }
};

inline std::string describe(const FinAbGroup& g) { return g.to_string(); }

inline std::string describe(const GroupElement& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
  return s + ")";
}

inline std::string describe(const AbHom& f) {
  std::string s = describe(f.domain()) + " -> " + describe(f.codomain()) + " [";
  for (std::size_t i = 0; i < f.domain().rank(); ++i) s += (i ? " " : "") + describe(f.image_of_generator(i));
  return s + "]";
}

/// Lattices keyed by invariant factors; owned by one campaign or sweep.
class LatticeCache {
 public:
  const SubgroupLattice& get(const FinAbGroup& b) {
    auto it = cache_.find(b.invariant_factors());
    if (it == cache_.end()) it = cache_.emplace(b.invariant_factors(), std::make_unique<SubgroupLattice>(b)).first;
    return *it->second;
  }

 private:
  std::map<std::vector<Residue>, std::unique_ptr<SubgroupLattice>> cache_;
};

namespace detail {

inline bool is_n_torsion(const FinAbGroup& g, Residue n) { return n % g.exponent() == 0; }

inline void close(LemmaReport& r, std::chrono::steady_clock::time_point start) {
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/// Summand test by exhaustive search when |B| <= 64.
inline bool summand_by_oracle(const Subgroup& s, LatticeCache& lattices) {
  const SubgroupLattice& lattice = lattices.get(s.ambient);
  return lattice.is_summand(lattice.mask_of(s));
}

inline LemmaReport check_lemma_equiv_divisibilite(const AbHom& f, Residue n, LatticeCache& lattices) {
  const auto start = std::chrono::steady_clock::now();
  LemmaReport r;
  r.lemma = "2.2";
  r.hypotheses = {{"A is n-torsion", detail::is_n_torsion(f.domain(), n)},
                  {"B is n-torsion", detail::is_n_torsion(f.codomain(), n)},
                  {"f is an embedding", is_injective(f)}};
  if (!r.applicable()) {
    detail::close(r, start);
    return r;
  }
  const Subgroup image = image_subgroup(f);
  const bool summand = summand_by_oracle(image, lattices);
  const DivisibilityVerdict all_m = preserves_divisibility(f);
  const DivisibilityVerdict n_div = preserves_n_divisibility(f, n);
  const DivisibilityVerdict prime_powers = preserves_n_divisibility_prime_powers(f, n);
  const bool pure = is_pure_subgroup(image, n);
  const bool fast_summand = is_direct_summand(image).has_value();

  r.checks = {{"(1) f(A) is a direct summand (oracle)", summand},
              {"(2) f preserves divisibility", all_m.preserves},
              {"(3) f preserves n-divisibility", n_div.preserves},
              {"prime-power divisors agree with all divisors", prime_powers.preserves == n_div.preserves},
              {"f(A) pure at level n agrees with (3)", pure == n_div.preserves},
              {"complement construction agrees with oracle", fast_summand == summand}};
  const bool equivalent = summand == all_m.preserves && all_m.preserves == n_div.preserves;
  r.conclusion = equivalent;
  const bool cross_ok = std::all_of(r.checks.begin() + 3, r.checks.end(), [](const Flag& c) { return c.value; });
  if (!equivalent || !cross_ok) r.counterexample = "f = " + describe(f) + ", n = " + std::to_string(n);
  detail::close(r, start);
  return r;
}

struct DiagramInstance {
  FinAbGroup a, b, c, b_prime, c_prime;
  AbHom f, g, beta, gamma, g_prime;
  Residue n = 1;
};

inline bool is_commutative(const DiagramInstance& d) { return compose(d.g_prime, d.beta) == compose(d.gamma, d.g); }

inline std::string describe(const DiagramInstance& d) {
  return "n = " + std::to_string(d.n) + "; f: " + describe(d.f) + "; g: " + describe(d.g) + "; beta: " + describe(d.beta) +
         "; gamma: " + describe(d.gamma) + "; g': " + describe(d.g_prime);
}

inline std::vector<Flag> diagram_hypotheses(const DiagramInstance& d) {
  return {{"(1) B and B' are n-torsion", detail::is_n_torsion(d.b, d.n) && detail::is_n_torsion(d.b_prime, d.n)},
          {"(2) beta is an embedding", is_injective(d.beta)},
          {"(3) gamma preserves n-divisibility", preserves_n_divisibility(d.gamma, d.n).preserves},
          {"(4) C[n] is contained in im g", is_contained(torsion_subgroup(d.c, d.n), image_subgroup(d.g))},
          {"(5) ker g is contained in im f", is_contained(kernel_subgroup(d.g), image_subgroup(d.f))},
          {"(6) beta o f preserves n-divisibility", preserves_n_divisibility(compose(d.beta, d.f), d.n).preserves}};
}

inline LemmaReport check_lemma_diagramme(const DiagramInstance& d, LatticeCache& lattices) {
  const auto start = std::chrono::steady_clock::now();
  if (!is_commutative(d)) throw std::invalid_argument("check_lemma_diagramme: diagram does not commute");
  LemmaReport r;
  r.lemma = "2.3";
  r.hypotheses = diagram_hypotheses(d);
  if (r.applicable()) {
    const bool summand = summand_by_oracle(image_subgroup(d.beta), lattices);
    const bool beta_preserves = preserves_n_divisibility(d.beta, d.n).preserves;
    r.conclusion = summand;
    r.checks = {{"beta(B) is a direct summand of B' (oracle)", summand},
                {"beta preserves n-divisibility", beta_preserves}};
    if (!summand || !beta_preserves) r.counterexample = describe(d);
  }
  detail::close(r, start);
  return r;
}

inline LemmaReport check_lemma_pasinjectif(const AbHom& f, Residue m, const GroupElement& p, LatticeCache& lattices) {
  const auto start = std::chrono::steady_clock::now();
  const FinAbGroup& a = f.domain();
  const FinAbGroup& b = f.codomain();
  if (!a.contains(p)) throw std::invalid_argument("check_lemma_pasinjectif: P is not an element of A");
  if (m < 1) throw std::invalid_argument("check_lemma_pasinjectif: m must be >= 1");
  LemmaReport r;
  r.lemma = "3.1";
  const Subgroup ker = kernel_subgroup(f);
  const bool cond_i = !is_divisible(a, p, m) && is_divisible(b, f(p), m);
  const bool cond_ii = std::all_of(ker.generators.begin(), ker.generators.end(),
                                   [&](const GroupElement& x) { return is_divisible(a, x, m).has_value(); });
  r.hypotheses = {{"(i) P is not m-divisible but f(P) is", cond_i}, {"(ii) ker f consists of m-divisible elements", cond_ii}};
  if (r.applicable()) {
    const bool summand = summand_by_oracle(image_subgroup(f), lattices);
    // Mechanism: the induced embedding A/ker f -> B breaks divisibility at (m, class of P).
    const Quotient q = quotient(ker);
    std::vector<GroupElement> images;
    for (const auto& lift : q.lifts) images.push_back(f(lift));
    const AbHom induced(q.group, b, images);
    const GroupElement p_bar = q.projection(p);
    const bool mechanism = is_injective(induced) && !is_divisible(q.group, p_bar, m) && is_divisible(b, induced(p_bar), m);
    r.conclusion = !summand;
    r.checks = {{"f(A) is not a direct summand (oracle)", !summand},
                {"induced embedding fails divisibility at (m, P)", mechanism}};
    if (summand || !mechanism)
      r.counterexample = "f = " + describe(f) + ", m = " + std::to_string(m) + ", P = " + describe(p);
  }
  detail::close(r, start);
  return r;
}

struct DirectSum {
  FinAbGroup group;
  AbHom inj_first, inj_second, proj_first, proj_second;
};

inline DirectSum direct_sum(const FinAbGroup& x, const FinAbGroup& y) {
  std::vector<Residue> orders = x.invariant_factors();
  orders.insert(orders.end(), y.invariant_factors().begin(), y.invariant_factors().end());
  const Presentation pres = canonicalize(orders);
  const FinAbGroup& s = pres.group;
  std::vector<GroupElement> ix, iy, px, py;
  for (std::size_t i = 0; i < x.rank(); ++i) ix.push_back(pres.to_canonical.row_vec(i));
  for (std::size_t i = 0; i < y.rank(); ++i) iy.push_back(pres.to_canonical.row_vec(x.rank() + i));
  for (std::size_t j = 0; j < s.rank(); ++j) {
    const auto row = pres.from_canonical.row(j);
    px.push_back(x.reduce(row.first(x.rank())));
    py.push_back(y.reduce(row.subspan(x.rank())));
  }
  return {s, AbHom(x, s, ix), AbHom(y, s, iy), AbHom(s, x, px), AbHom(s, y, py)};
}

enum class Sampler { rejection, kummer };

inline const char* to_string(Sampler s) { return s == Sampler::rejection ? "S1" : "S2"; }

/// Rejection sampler: five random groups and maps, kept iff the square
/// commutes and all six hypotheses hold.
inline std::optional<DiagramInstance> sample_diagram_rejection(Rng& rng, Residue max_order, Residue n) {
  DiagramInstance d;
  d.n = n;
  d.a = random_torsion_group(n, max_order, rng);
  d.b = random_torsion_group(n, max_order, rng);
  d.c = random_torsion_group(n, max_order, rng);
  d.b_prime = random_torsion_group(n, max_order, rng);
  d.c_prime = random_torsion_group(n, max_order, rng);
  d.f = random_hom(d.a, d.b, rng);
  d.g = random_hom(d.b, d.c, rng);
  d.beta = random_hom(d.b, d.b_prime, rng);
  d.gamma = random_hom(d.c, d.c_prime, rng);
  d.g_prime = random_hom(d.b_prime, d.c_prime, rng);
  if (!is_commutative(d)) return std::nullopt;
  for (const auto& h : diagram_hypotheses(d))
    if (!h.value) return std::nullopt;
  return d;
}

// Random group whose order is coprime to n.
inline FinAbGroup random_coprime_group(Residue n, Residue max_order, Rng& rng) {
  std::vector<Residue> orders;
  Residue order = 1;
  while (rng.below(3) == 0) {
    const Residue d = rng.range(2, std::max<Residue>(2, max_order));
    if (std::gcd(d, n) != 1 || order * d > max_order) break;
    orders.push_back(d);
    order *= d;
  }
  return ab_group_new(orders);
}

/// Kummer-shaped sampler: B' random, B a random subgroup, A -> B -> C exact
/// with C = B/A ⊕ D (|D| coprime to n), C' the pushout of B' <- B -> C,
/// optionally followed by a random map C' -> C''. Kept iff all six
/// hypotheses hold.
inline std::optional<DiagramInstance> sample_diagram_kummer(Rng& rng, Residue max_order, Residue n) {
  DiagramInstance d;
  d.n = n;
  d.b_prime = random_torsion_group(n, max_order, rng);
  const AbstractSubgroup b = random_embedding(d.b_prime, rng);
  d.b = b.group;
  d.beta = b.inclusion;
  const AbstractSubgroup a = random_embedding(d.b, rng);
  d.a = a.group;
  d.f = a.inclusion;
  const Quotient q = quotient(image_subgroup(d.f));
  const DirectSum c = direct_sum(q.group, random_coprime_group(n, max_order, rng));
  d.c = c.group;
  d.g = compose(c.inj_first, q.projection);

  const DirectSum bc = direct_sum(d.b_prime, d.c);
  Subgroup glue{bc.group, {}};
  for (std::size_t i = 0; i < d.b.rank(); ++i) {
    GroupElement e = d.b.zero();
    e[i] = 1;
    glue.generators.push_back(bc.group.sub(bc.inj_first(d.beta(e)), bc.inj_second(d.g(e))));
  }
  const Quotient pushout = quotient(glue);
  d.c_prime = pushout.group;
  d.g_prime = compose(pushout.projection, bc.inj_first);
  d.gamma = compose(pushout.projection, bc.inj_second);
  if (rng.coin()) {
    const FinAbGroup target = random_torsion_group(n, max_order, rng);
    const AbHom psi = random_hom(d.c_prime, target, rng);
    d.c_prime = target;
    d.g_prime = compose(psi, d.g_prime);
    d.gamma = compose(psi, d.gamma);
  }
  for (const auto& h : diagram_hypotheses(d))
    if (!h.value) return std::nullopt;
  return d;
}

inline std::optional<DiagramInstance> sample_diagram(Sampler s, Rng& rng, Residue max_order, Residue n) {
  return s == Sampler::rejection ? sample_diagram_rejection(rng, max_order, n) : sample_diagram_kummer(rng, max_order, n);
}

/// All finite abelian groups of order <= max_order, by invariant factors.
inline std::vector<FinAbGroup> all_groups_up_to(Residue max_order) {
  std::vector<FinAbGroup> out;
  std::function<void(std::vector<Residue>&, Residue, Residue)> rec = [&](std::vector<Residue>& chain, Residue prev,
                                                                         Residue order) {
    out.push_back(FinAbGroup::from_invariant_factors(chain));
    for (Residue d = prev == 1 ? 2 : prev; order * d <= max_order; d += prev) {
      chain.push_back(d);
      rec(chain, d, order * d);
      chain.pop_back();
    }
  };
  std::vector<Residue> chain;
  rec(chain, 1, 1);
  return out;
}

struct SweepReport {
  std::uint64_t instances = 0;   // everything enumerated
  std::uint64_t applicable = 0;  // hypotheses satisfied
  std::uint64_t violations = 0;
  std::vector<std::string> failures;  // first few counterexamples

  void record_failure(std::string s) {
    ++violations;
    if (failures.size() < 8) failures.push_back(std::move(s));
  }
};

/// Every subgroup S of every B with |B| <= max_order, taken as the embedding
/// abstract(S) -> B with n = exp(B), through the library's linear-algebra paths.
inline SweepReport sweep_equiv_divisibilite_subgroups(Residue max_order) {
  SweepReport rep;
  LatticeCache lattices;
  for (const auto& b : all_groups_up_to(max_order)) {
    const SubgroupLattice& lattice = lattices.get(b);
    for (ElementMask s : lattice.subgroups()) {
      const AbstractSubgroup abs = abstract_form(lattice.to_subgroup(s));
      const LemmaReport r = check_lemma_equiv_divisibilite(abs.inclusion, b.exponent(), lattices);
      ++rep.instances;
      if (r.applicable()) ++rep.applicable;
      if (r.verdict() == Verdict::violated) rep.record_failure(*r.counterexample);
    }
  }
  return rep;
}

namespace detail {

// Element-index arithmetic for a small group, with masks of mG for each m.
struct SmallGroupTables {
  FinAbGroup group;
  std::uint64_t order = 0;
  std::vector<std::uint8_t> sum;         // sum[i * order + j]
  std::vector<std::uint8_t> step_prev;   // element k = step_prev[k] + generator step_gen[k]
  std::vector<std::uint8_t> step_gen;
  std::vector<std::uint8_t> generator;   // index of the i-th basis element
  std::map<Residue, ElementMask> multiples;  // m -> mask of mG

  SmallGroupTables(FinAbGroup g, Residue n) : group(std::move(g)) {
    order = group.order();
    sum.resize(order * order);
    for (std::uint64_t i = 0; i < order; ++i)
      for (std::uint64_t j = 0; j < order; ++j)
        sum[i * order + j] =
            static_cast<std::uint8_t>(group.index_of(group.add(group.element_at(i), group.element_at(j))));
    step_prev.resize(order);
    step_gen.resize(order);
    for (std::uint64_t k = 1; k < order; ++k) {
      GroupElement x = group.element_at(k);
      std::size_t i = 0;
      while (x[i] == 0) ++i;
      x[i] -= 1;
      step_prev[k] = static_cast<std::uint8_t>(group.index_of(x));
      step_gen[k] = static_cast<std::uint8_t>(i);
    }
    for (std::size_t i = 0; i < group.rank(); ++i) {
      GroupElement e = group.zero();
      e[i] = 1;
      generator.push_back(static_cast<std::uint8_t>(group.index_of(e)));
    }
    for (Residue m : divisors(n)) {
      ElementMask mask = 0;
      for (std::uint64_t k = 0; k < order; ++k)
        mask |= ElementMask{1} << group.index_of(group.scale(m, group.element_at(k)));
      multiples[m] = mask;
    }
  }

  std::uint64_t element_order(std::uint64_t k) const { return static_cast<std::uint64_t>(group.element_order(group.element_at(k))); }
};

// Calls visit(images, table) for every homomorphism A -> B; table[k] is the
// image of element k of A.
template <class Visit>
void for_each_hom(const SmallGroupTables& a, const SmallGroupTables& b, Visit&& visit) {
  std::vector<std::vector<std::uint8_t>> candidates(a.group.rank());
  for (std::size_t i = 0; i < a.group.rank(); ++i)
    for (std::uint64_t y = 0; y < b.order; ++y)
      if (a.group.factor(i) % static_cast<Residue>(b.element_order(y)) == 0)
        candidates[i].push_back(static_cast<std::uint8_t>(y));
  std::vector<std::size_t> choice(a.group.rank(), 0);
  std::vector<std::uint8_t> table(a.order, 0);
  for (;;) {
    for (std::uint64_t k = 1; k < a.order; ++k)
      table[k] = b.sum[table[a.step_prev[k]] * b.order + candidates[a.step_gen[k]][choice[a.step_gen[k]]]];
    visit(table);
    std::size_t i = 0;
    while (i < choice.size() && ++choice[i] == candidates[i].size()) choice[i++] = 0;
    if (i == choice.size()) return;
  }
}

inline std::unordered_set<ElementMask> summand_masks(const SubgroupLattice& lattice) {
  std::unordered_set<ElementMask> out;
  for (ElementMask s : lattice.subgroups())
    if (lattice.is_summand(s)) out.insert(s);
  return out;
}

}  // namespace detail

struct NonSummandWitness {
  AbHom f;
  Residue m = 1;
  GroupElement p;
};

struct ExhaustiveReport {
  SweepReport equivalence;  // every embedding A -> B, |A|, |B| <= bound
  SweepReport non_summand;  // every (f, m) for which some P satisfies (i), with (ii)
  std::uint64_t non_injective_applicable = 0;
  std::optional<NonSummandWitness> non_injective_example;  // first one met
};

/// Every homomorphism f: A -> B with |A|, |B| <= max_order, evaluated on
/// element tables. For embeddings, the three equivalent conditions are
/// compared (n = lcm of exponents). For every m | n with (i) and (ii)
/// satisfied by some P, f(A) must fail the summand oracle.
inline ExhaustiveReport sweep_small_homomorphisms(Residue max_order) {
  ExhaustiveReport rep;
  const auto groups = all_groups_up_to(max_order);
  LatticeCache lattices;
  std::map<std::vector<Residue>, std::unordered_set<ElementMask>> summands;
  for (const auto& b : groups) summands[b.invariant_factors()] = detail::summand_masks(lattices.get(b));

  for (const auto& a : groups) {
    for (const auto& b : groups) {
      const Residue n = std::lcm(a.exponent(), b.exponent());
      const detail::SmallGroupTables ta(a, n), tb(b, n);
      const auto& summand_set = summands[b.invariant_factors()];
      const std::vector<Residue> ms = divisors(n);
      detail::for_each_hom(ta, tb, [&](const std::vector<std::uint8_t>& table) {
        ElementMask image = 0, kernel = 0;
        for (std::uint64_t k = 0; k < ta.order; ++k) {
          image |= ElementMask{1} << table[k];
          if (table[k] == 0) kernel |= ElementMask{1} << k;
        }
        const bool summand = summand_set.count(image) != 0;
        bool preserves_all = true;
        for (Residue m : ms) {
          const ElementMask ma = ta.multiples.at(m), mb = tb.multiples.at(m);
          ElementMask lifts = 0;  // {P : f(P) ∈ mB}
          for (std::uint64_t k = 0; k < ta.order; ++k)
            if ((mb >> table[k]) & 1) lifts |= ElementMask{1} << k;
          const bool preserves_m = (lifts & ~ma) == 0;
          preserves_all = preserves_all && preserves_m;
          // Non-summand lemma at this m.
          const bool cond_i = !preserves_m;
          const bool cond_ii = (kernel & ~ma) == 0;
          if (cond_i && cond_ii) {
            ++rep.non_summand.applicable;
            if (kernel != 1) {
              ++rep.non_injective_applicable;
              if (!rep.non_injective_example) {
                std::vector<GroupElement> images;
                for (std::uint8_t gen : ta.generator) images.push_back(b.element_at(table[gen]));
                const auto p = static_cast<std::uint64_t>(std::countr_zero(lifts & ~ma));
                rep.non_injective_example = NonSummandWitness{AbHom(a, b, images), m, a.element_at(p)};
              }
            }
            if (summand) rep.non_summand.record_failure(describe(a) + " -> " + describe(b) + ", m = " + std::to_string(m));
          }
        }
        ++rep.non_summand.instances;
        ++rep.equivalence.instances;
        if (kernel != 1) return;
        ++rep.equivalence.applicable;
        // For finite groups every m is governed by gcd(m, n), so the divisors of
        // n cover "all m" as well as "m | n"; the prime-power subset is checked too.
        bool preserves_prime_powers = true;
        for (Residue m : prime_power_divisors(n)) {
          ElementMask lifts = 0;
          for (std::uint64_t k = 0; k < ta.order; ++k)
            if ((tb.multiples.at(m) >> table[k]) & 1) lifts |= ElementMask{1} << k;
          preserves_prime_powers = preserves_prime_powers && (lifts & ~ta.multiples.at(m)) == 0;
        }
        if (summand != preserves_all || preserves_all != preserves_prime_powers)
          rep.equivalence.record_failure(describe(a) + " -> " + describe(b));
      });
    }
  }
  return rep;
}


struct CampaignConfig {
  std::string lemma = "2.2";  // "2.2", "2.3" or "3.1"
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  Residue max_order = 32;
  Residue n = 12;
  Sampler sampler = Sampler::kummer;
};

inline void validate(const CampaignConfig& c) {
  if (c.lemma != "2.2" && c.lemma != "2.3" && c.lemma != "3.1")
    throw std::invalid_argument("lemma: expected \"2.2\", \"2.3\" or \"3.1\"");
  if (c.max_order < 1 || c.max_order > static_cast<Residue>(SubgroupLattice::kMaxOrder))
    throw std::invalid_argument("max_order: must lie in [1, 64]");
  if (c.n < 1 || c.n > 1'000'000) throw std::invalid_argument("n: must lie in [1, 1000000]");
}

struct TrialOutcome {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  bool sampled = true;  // false when the sampler rejected its draw
  Verdict verdict = Verdict::not_applicable;
  std::optional<std::string> counterexample;
};

struct CampaignReport {
  CampaignConfig config;
  std::vector<TrialOutcome> outcomes;
  std::uint64_t sampled = 0;
  std::uint64_t holds = 0;
  std::uint64_t not_applicable = 0;
  std::uint64_t violated = 0;

  double yield() const { return outcomes.empty() ? 0.0 : static_cast<double>(sampled) / static_cast<double>(outcomes.size()); }
  bool passed() const { return violated == 0; }
};

namespace detail {

inline TrialOutcome trial_equiv(Rng& rng, const CampaignConfig& c, LatticeCache& lattices) {
  const FinAbGroup b = random_torsion_group(c.n, c.max_order, rng);
  const AbstractSubgroup a = random_embedding(b, rng);
  const LemmaReport r = check_lemma_equiv_divisibilite(a.inclusion, c.n, lattices);
  return {0, 0, true, r.verdict(), r.counterexample};
}

inline TrialOutcome trial_diagram(Rng& rng, const CampaignConfig& c, LatticeCache& lattices) {
  const auto d = sample_diagram(c.sampler, rng, c.max_order, c.n);
  if (!d) return {0, 0, false, Verdict::not_applicable, std::nullopt};
  LemmaReport r = check_lemma_diagramme(*d, lattices);
  // Re-verification of what the sampler claims, by separate kernel/image code.
  if (c.sampler == Sampler::kummer && !same_subgroup(kernel_subgroup(d->g), image_subgroup(d->f)))
    r.counterexample = "sampler produced a non-exact row: " + describe(*d);
  if (!r.applicable()) r.counterexample = "sampler emitted an instance failing a hypothesis: " + describe(*d);
  return {0, 0, true, r.verdict(), r.counterexample};
}

inline TrialOutcome trial_non_summand(Rng& rng, const CampaignConfig& c, LatticeCache& lattices) {
  const FinAbGroup a = random_torsion_group(c.n, c.max_order, rng);
  const FinAbGroup b = random_torsion_group(c.n, c.max_order, rng);
  const AbHom f = random_hom(a, b, rng);
  std::vector<Residue> ms = divisors(c.n);
  if (ms.size() > 1) ms.erase(ms.begin());  // m = 1 never satisfies (i)
  const Residue m = ms[rng.below(ms.size())];
  // Prefer a P satisfying (i), scanning from a random start.
  const std::uint64_t order = a.order();
  const std::uint64_t offset = rng.below(order);
  GroupElement p = a.element_at(offset);
  for (std::uint64_t k = 0; k < order; ++k) {
    const GroupElement x = a.element_at((offset + k) % order);
    if (!is_divisible(a, x, m) && is_divisible(b, f(x), m)) {
      p = x;
      break;
    }
  }
  const LemmaReport r = check_lemma_pasinjectif(f, m, p, lattices);
  return {0, 0, true, r.verdict(), r.counterexample};
}

}  // namespace detail

/// Trials are run in index order, each with its own derived seed, so a
/// campaign is a pure function of its config.
inline CampaignReport run_campaign(const CampaignConfig& config) {
  validate(config);
  CampaignReport rep;
  rep.config = config;
  LatticeCache lattices;
  for (std::uint64_t i = 0; i < config.trials; ++i) {
    const std::uint64_t seed = Rng::derive(config.seed, i);
    Rng rng(seed);
    TrialOutcome t = config.lemma == "2.2"   ? detail::trial_equiv(rng, config, lattices)
                     : config.lemma == "2.3" ? detail::trial_diagram(rng, config, lattices)
                                             : detail::trial_non_summand(rng, config, lattices);
    t.index = i;
    t.seed = seed;
    if (t.sampled) ++rep.sampled;
    switch (t.verdict) {
      case Verdict::holds: ++rep.holds; break;
      case Verdict::not_applicable: ++rep.not_applicable; break;
      case Verdict::violated: ++rep.violated; break;
    }
    rep.outcomes.push_back(std::move(t));
  }
  return rep;
}

}  // namespace h1cyc::lab
