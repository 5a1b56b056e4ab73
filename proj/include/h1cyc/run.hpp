#pragma once

// Runs behind the command-line tool. Each run is a list of named steps; a step
// either asserts a claim (and can fail the run) or only records an outcome.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "h1cyc/cohomology.hpp"
#include "h1cyc/json.hpp"
#include "h1cyc/lattice.hpp"
#include "h1cyc/lemma_lab.hpp"
#include "h1cyc/matgroup.hpp"

namespace h1cyc::run {

using io::Json;

inline constexpr const char* kVersion = "0.1.0";

struct Step {
  std::string name;
  bool asserted = true;
  bool passed = false;
  Json detail = Json::object();
  double elapsed_ms = 0;
};

struct RunReport {
  std::string command;
  Json input = Json::object();
  std::vector<Step> steps;

  bool overall() const {
    for (const auto& s : steps)
      if (s.asserted && !s.passed) return false;
    return true;
  }
};

// FNV-1a over the serialized input.
inline std::string digest(const Json& input) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : input.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline Json to_json(const RunReport& r, bool timings = false) {
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    Json j = {{"name", s.name}, {"asserted", s.asserted}, {"passed", s.passed}, {"detail", s.detail}};
    if (timings) j["elapsed_ms"] = s.elapsed_ms;
    steps.push_back(std::move(j));
  }
  return {{"tool", "h1cyc"},     {"version", kVersion},        {"command", r.command}, {"input", r.input},
          {"input_digest", digest(r.input)}, {"steps", steps}, {"overall", r.overall() ? "pass" : "fail"}};
}

inline RunReport from_json(const Json& j) {
  RunReport r;
  r.command = j.at("command").get<std::string>();
  r.input = j.at("input");
  for (const auto& s : j.at("steps"))
    r.steps.push_back({s.at("name").get<std::string>(), s.at("asserted").get<bool>(), s.at("passed").get<bool>(),
                       s.at("detail"), s.contains("elapsed_ms") ? s["elapsed_ms"].get<double>() : 0.0});
  return r;
}

/// Runs body(step) and records it; exceptions turn into a failed step.
inline void step(RunReport& r, std::string name, const std::function<void(Step&)>& body, bool asserted = true) {
  Step s;
  s.name = std::move(name);
  s.asserted = asserted;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(s);
  } catch (const std::exception& e) {
    s.passed = false;
    s.detail["error"] = e.what();
  }
  s.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  r.steps.push_back(std::move(s));
}

struct ReproduceOptions {
  Residue p = 5;
  std::size_t cap = kDefaultClosureCap;
  bool allow_large = false;
};

/// Rejects p outside the supported range; the message names the field.
inline void check_reproduce_prime(const ReproduceOptions& o) {
  if (!is_prime(o.p)) throw io::InputError("--p", std::to_string(o.p) + " is not prime");
  if (o.p % 3 != 2) throw io::InputError("--p", std::to_string(o.p) + " is not congruent to 2 mod 3");
  if (o.p > 7 && !o.allow_large)
    throw io::InputError("--p", "p > 7 needs --allow-large (|G3| = 3p^6 elements)");
}

/// The whole construction: the groups over Z/p^2 and Z/p^3, the cyclic
/// computations for the p-torsion subgroup, both H^1 and H^1_cyc, inflation
/// and the fixed points. Claims that use p odd are only asserted for p odd.
inline RunReport reproduce(const ReproduceOptions& o) {
  check_reproduce_prime(o);
  const Residue p = o.p;
  const Residue q2 = p * p, q3 = p * p * p;
  const bool odd = p % 2 == 1;
  RunReport r;
  r.command = "reproduce";
  r.input = {{"p", p}, {"cap", o.cap}};

  std::shared_ptr<const MatGroup> h2, g2, n3, g3;
  step(r, "build groups H2, G2, N, G3 and check their orders", [&](Step& s) {
    h2 = std::make_shared<const MatGroup>(lemma_fg::build_H2(p));
    g2 = std::make_shared<const MatGroup>(lemma_fg::build_G2(p));
    n3 = std::make_shared<const MatGroup>(lemma_fg::build_N(p));
    g3 = std::make_shared<const MatGroup>(lemma_fg::build_G3(p, o.cap));
    const auto pp = static_cast<std::size_t>(p * p);
    s.detail = {{"H2", h2->order()}, {"G2", g2->order()}, {"N", n3->order()}, {"G3", g3->order()}};
    s.passed = h2->order() == pp && g2->order() == 3 * pp && n3->order() == pp * pp && g3->order() == 3 * pp * pp * pp &&
               is_normal(*g2, *h2) && is_subgroup(*g3, *n3) && is_normal(*g3, *n3);
  });
  if (!g3) return r;

  step(r, "every h != 1 in H2 has h - 1 = p M_ab with M_ab invertible mod p", [&](Step& s) {
    std::size_t checked = 0;
    bool ok = true;
    for (Residue a = 0; a < p; ++a)
      for (Residue b = 0; b < p; ++b) {
        if (a == 0 && b == 0) continue;
        const ZModMatrix h = lemma_fg::h_element(p, a, b);
        ok = ok && h2->contains(h);
        ok = ok && mat_sub(h, ZModMatrix::identity(q2, 2)) == scalar_mul(p, lemma_fg::m_ab(a, b, q2));
        ok = ok && is_invertible(lemma_fg::m_ab(a, b, p));
        ++checked;
      }
    s.detail = {{"nontrivial_elements", checked}};
    s.passed = ok && checked + 1 == h2->order();
  });

  step(
      r, "norm T_h = 1 + h + ... + h^(p-1) equals p for every h != 1 in H2",
      [&](Step& s) {
        std::size_t bad = 0;
        for (std::size_t i = 1; i < h2->order(); ++i)
          if (!(norm_matrix(h2->element(i)) == scalar_mul(p, ZModMatrix::identity(q2, 2)))) ++bad;
        s.detail = {{"failures", bad}};
        s.passed = bad == 0;
      },
      odd);

  const auto m2 = std::make_shared<const GModule>(GModule::natural(*g2));
  step(
      r, "H1(<h>, M2) = 0 for every h in H2 via ker(T_h)/(h-1)M2",
      [&](Step& s) {
        std::size_t nonzero = 0;
        for (std::size_t i = 0; i < h2->order(); ++i)
          if (!cyclic_h1(h2->element(i)).group.is_trivial()) ++nonzero;
        s.detail = {{"elements", h2->order()}, {"nonzero", nonzero}};
        s.passed = nonzero == 0;
      },
      odd);

  step(
      r, "H1(Gamma, M2) = 0 for every cyclic subgroup Gamma of G2",
      [&](Step& s) {
        const auto cyclics = cyclic_subgroups(*g2);
        std::size_t nonzero = 0, disagree = 0;
        for (const auto& c : cyclics) {
          auto cg = std::make_shared<const MatGroup>(c);
          const H1Group h = h1(cocycle_space(cg, std::make_shared<const GModule>(GModule::natural(*cg))));
          const ZModMatrix gamma = c.generator_count() ? c.generators().front() : ZModMatrix::identity(q2, 2);
          if (h.invariant_factors() != cyclic_h1(gamma).group.invariant_factors()) ++disagree;
          if (!h.is_trivial()) ++nonzero;
        }
        s.detail = {{"elements_covered", g2->order()}, {"cyclic_subgroups", cyclics.size()}, {"nonzero", nonzero},
                    {"formula_disagreements", disagree}};
        s.passed = nonzero == 0 && disagree == 0;
      },
      odd);

  CocycleSpacePtr s2;
  std::optional<H1Group> cyc2;
  step(
      r, "H1(G2, M2) = H1_cyc(G2, M2) and it is nonzero",
      [&](Step& s) {
        s2 = cocycle_space(g2, m2);
        const H1Group full = h1(s2);
        cyc2 = h1_cyc(s2);
        s.detail = {{"h1_invariant_factors", full.invariant_factors()},
                    {"h1cyc_invariant_factors", cyc2->invariant_factors()},
                    {"z1_order", detail::span_size(s2->z1)},
                    {"b1_order", detail::span_size(s2->b1)}};
        s.passed = full.cocycles() == cyc2->cocycles() && !cyc2->is_trivial();
      },
      odd);

  step(r, "H1_cyc(N, M3) = 0", [&](Step& s) {
    const auto sn = cocycle_space(n3, std::make_shared<const GModule>(GModule::natural(*n3)));
    const H1Group c = h1_cyc(sn);
    s.detail = {{"h1_invariant_factors", h1(sn).invariant_factors()}, {"h1cyc_invariant_factors", c.invariant_factors()}};
    s.passed = c.is_trivial();
  });

  const auto m3 = std::make_shared<const GModule>(GModule::natural(*g3));
  CocycleSpacePtr s3;
  step(
      r, "inflation H1_cyc(G2, M2) -> H1_cyc(G3, M3) is a bijection",
      [&](Step& s) {
        if (!s2) s2 = cocycle_space(g2, m2);
        if (!cyc2) cyc2 = h1_cyc(s2);
        s3 = cocycle_space(g3, m3);
        const H1Group cyc3 = h1_cyc(s3);
        const Inflation inf(s2, s3, reduction_map(*g3, *g2), scaled_lift_identification(p, 2));
        const AbHom induced = induced_map(*cyc2, cyc3, [&](const Cocycle& z) { return inf(z); });
        const InfResReport exact = verify_inf_res_exactness(s3, *n3);
        s.detail = {{"source_invariant_factors", cyc2->invariant_factors()},
                    {"target_invariant_factors", cyc3.invariant_factors()},
                    {"h1_g3_invariant_factors", exact.h1_group},
                    {"injective", is_injective(induced)},
                    {"surjective", is_surjective(induced)},
                    {"inflation_restriction_exact", exact.holds()}};
        s.passed = is_injective(induced) && is_surjective(induced) && exact.holds();
      },
      odd);

  step(r, "every class of H1_cyc(G3, M3) takes values in p^2 M3 on N", [&](Step& s) {
    if (!s3) s3 = cocycle_space(g3, m3);
    const ZModMatrix basis = locally_trivial_cocycles(*s3);
    std::size_t bad = 0;
    for (const auto& x : n3->elements()) {
      const std::size_t i = *g3->index_of(x);
      for (std::size_t k = 0; k < basis.rows(); ++k)
        for (Residue v : mat_vec(s3->value_maps[i], basis.row(k)))
          if (v % q2 != 0) ++bad;
    }
    s.detail = {{"cocycle_basis_rows", basis.rows()}, {"N_elements", n3->order()}, {"violations", bad}};
    s.passed = bad == 0;
  });

  step(r, "fixed points: M3^N = p M3 and M3^G3 = 0", [&](Step& s) {
    const ZModMatrix fixed_n = fixed_points(GModule::natural(*n3));
    const ZModMatrix p_m3 = howell_form(scalar_mul(p, ZModMatrix::identity(q3, 2)));
    const ZModMatrix fixed_g = fixed_points(*m3);
    const bool g_trivial = fixed_g.rows() == 0 || fixed_g.is_zero();
    s.detail = {{"fixed_by_N", io::to_json(fixed_n)}, {"fixed_by_G3_trivial", g_trivial}};
    s.passed = howell_form(fixed_n) == p_m3 && g_trivial;
  });
  return r;
}


/// H^1 (and optionally H^1_cyc) of a matrix group acting on a module.
inline RunReport h1_query(const Json& group_spec, const Json& module_spec, bool cyc, std::size_t cap) {
  RunReport r;
  r.command = "h1";
  r.input = {{"group", group_spec}, {"module", module_spec}, {"cyc", cyc}, {"cap", cap}};
  const auto g = std::make_shared<const MatGroup>(io::mat_group_from_json(group_spec, cap, "/group"));
  const auto m = std::make_shared<const GModule>(io::module_from_json(module_spec, *g, "/module"));
  step(r, "first cohomology", [&](Step& s) {
    const auto space = cocycle_space(g, m);
    const H1Group full = h1(space);
    Json witnesses = Json::array();
    for (const auto& z : full.representatives()) witnesses.push_back(z.generator_values());
    s.detail = {{"group_order", g->order()}, {"h1_invariant_factors", full.invariant_factors()},
                {"witness_cocycles", witnesses}};
    if (cyc) s.detail["h1cyc_invariant_factors"] = h1_cyc(space).invariant_factors();
    s.passed = true;
  });
  return r;
}

/// Decides whether a subgroup is a direct summand; gives a complement if so.
inline RunReport summand_query(const Json& group_spec, const Json& subgroup_spec) {
  RunReport r;
  r.command = "summand";
  r.input = {{"group", group_spec}, {"subgroup", subgroup_spec}};
  const FinAbGroup b = io::group_from_json(group_spec, "/group");
  const Json& gens = io::detail::member(subgroup_spec, "generators", "/subgroup");
  const Subgroup sub{b, io::elements_from_json(b, gens, "/subgroup/generators")};
  step(r, "direct summand test", [&](Step& s) {
    const auto complement = is_direct_summand(sub);
    s.detail = {{"summand", complement.has_value()}, {"subgroup_order", subgroup_order(sub)}};
    if (complement) {
      s.detail["complement_generators"] = complement->generators;
    } else {
      const AbstractSubgroup abs = abstract_form(sub);
      const DivisibilityVerdict v = preserves_n_divisibility(abs.inclusion, b.exponent());
      if (v.counterexample)
        s.detail["witness"] = {{"m", v.counterexample->first}, {"element", abs.inclusion(v.counterexample->second)}};
    }
    if (b.order() <= SubgroupLattice::kMaxOrder) {
      const SubgroupLattice lattice(b);
      const bool oracle = lattice.is_summand(lattice.mask_of(sub));
      s.detail["oracle_agrees"] = oracle == complement.has_value();
      s.passed = oracle == complement.has_value();
    } else {
      s.passed = true;
    }
  });
  return r;
}

inline RunReport fuzz(const lab::CampaignConfig& config) {
  RunReport r;
  r.command = "fuzz";
  r.input = io::to_json(config);
  step(r, "campaign", [&](Step& s) {
    const lab::CampaignReport c = lab::run_campaign(config);
    s.detail = io::to_json(c);
    s.passed = c.passed();
  });
  return r;
}

/// Wall-clock of the pipeline stages, always with timings.
inline RunReport bench(const ReproduceOptions& o) {
  RunReport r = reproduce(o);
  r.command = "bench";
  return r;
}

}  // namespace h1cyc::run
