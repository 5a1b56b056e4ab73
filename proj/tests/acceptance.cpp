// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Equalities are exact; the only tolerances are the wall-clock budgets below.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "h1cyc/json.hpp"
#include "h1cyc/lemma_lab.hpp"
#include "h1cyc/run.hpp"
#include "oracles.hpp"

using namespace h1cyc;
using namespace h1cyc::lemma_fg;

namespace {

constexpr double kReproduceBudgetS = 300;  // criterion 1
constexpr double kClosureBudgetS = 60;     // criterion 2, G3 at p = 5
constexpr double kLemma22BudgetS = 600;    // criterion 5

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// Lines are printed in criterion order at the end; 4 tallies instances from the others.
std::map<int, std::pair<bool, std::string>> results;

void report(int id, bool ok, const std::string& what) { results[id] = {ok, what}; }

// Runs a criterion; an exception is a failure with its message.
void criterion(int id, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream what;
  bool ok = false;
  try {
    ok = body(what);
  } catch (const std::exception& e) {
    what << " exception: " << e.what();
  }
  report(id, ok, what.str());
}

using GroupPtr = std::shared_ptr<const MatGroup>;

GroupPtr share(MatGroup g) { return std::make_shared<const MatGroup>(std::move(g)); }

CocycleSpacePtr natural_space(const GroupPtr& g) {
  return cocycle_space(g, std::make_shared<const GModule>(GModule::natural(*g)));
}

// Counting identity |Z1| = |B1| |H1|, tallied over every instance computed here.
struct CountingTally {
  std::size_t instances = 0, exceptions = 0;
  void check(const CocycleSpacePtr& s) {
    ++instances;
    if (detail::span_size(s->z1) != detail::span_size(s->b1) * h1(s).order()) ++exceptions;
  }
} counting;

// The cohomology corpus: cyclic groups on rank 1 and 2 modules, and the construction at p = 2.
std::vector<std::pair<std::string, GroupPtr>> corpus() {
  std::vector<std::pair<std::string, GroupPtr>> out;
  for (Residue q : {4, 8, 9, 25})
    for (Residue u = 1; u < q; ++u)
      if (std::gcd(u, q) == 1)
        out.emplace_back("<" + std::to_string(u) + "> mod " + std::to_string(q),
                         share(MatGroup::closure({ZModMatrix::from_rows(q, {{u}})})));
  for (Residue q : {4, 8, 9, 25})
    for (const auto& rows : std::vector<std::vector<std::vector<Residue>>>{
             {{0, -1}, {1, -1}}, {{0, 1}, {1, 0}}, {{1, 1}, {0, 1}}, {{-1, 1}, {0, -1}}})
      out.emplace_back("rank 2 mod " + std::to_string(q), share(MatGroup::closure({ZModMatrix::from_rows(q, rows)})));
  out.emplace_back("G2 at 2", share(build_G2(2)));
  out.emplace_back("N at 2", share(build_N(2)));
  out.emplace_back("G3 at 2", share(build_G3(2)));
  return out;
}

bool same_set(const MatGroup& g, const std::set<std::string>& s) {
  if (g.order() != s.size()) return false;
  for (const auto& x : g.elements())
    if (!s.count(detail::element_key(x))) return false;
  return true;
}

}  // namespace

int main() {
  // 1. The construction at p = 5.
  criterion(1, [](std::ostringstream& w) {
    const auto t = Clock::now();
    const run::RunReport r = run::reproduce({});
    const double s = seconds_since(t);
    std::size_t passed = 0;
    for (const auto& step : r.steps) passed += step.asserted && step.passed;
    w << passed << "/" << r.steps.size() << " steps, " << s << " s (budget " << kReproduceBudgetS << " s)";
    return r.steps.size() == 10 && passed == 10 && s <= kReproduceBudgetS;
  });

  // 2. Orders from closure against the explicit products.
  criterion(2, [](std::ostringstream& w) {
    bool ok = true;
    for (Residue p : {2, 5}) {
      const Residue q2 = p * p, q3 = p * p * p;
      std::set<std::string> h2, g2, n;
      for (Residue a = 0; a < p; ++a)
        for (Residue b = 0; b < p; ++b) h2.insert(detail::element_key(h_element(p, a, b)));
      ZModMatrix power = ZModMatrix::identity(q2, 2);
      for (int i = 0; i < 3; ++i, power = power * build_g(p))
        for (Residue a = 0; a < p; ++a)
          for (Residue b = 0; b < p; ++b) g2.insert(detail::element_key(power * h_element(p, a, b)));
      oracle::for_each_vector(p, 4, [&](const Vec& x) {
        n.insert(detail::element_key(ZModMatrix::from_rows(
            q3, {{1 + q2 * x[0], q2 * x[1]}, {q2 * x[2], 1 + q2 * x[3]}})));
      });
      const MatGroup H2 = build_H2(p), G2 = build_G2(p), N = build_N(p);
      const auto t = Clock::now();
      const MatGroup G3 = build_G3(p);
      const double s = seconds_since(t);
      // Every element of G3 reduces into G2 with fibres of size |N|.
      std::vector<std::size_t> fibre(G2.order(), 0);
      for (std::size_t j : reduction_map(G3, G2)) ++fibre[j];
      const bool fibres = std::all_of(fibre.begin(), fibre.end(), [&](std::size_t c) { return c == N.order(); });
      const auto pp = static_cast<std::size_t>(p * p);
      const bool orders = H2.order() == pp && G2.order() == 3 * pp && N.order() == pp * pp &&
                          G3.order() == 3 * pp * pp * pp && G3.order() == G2.order() * N.order();
      const bool sets = same_set(H2, h2) && same_set(G2, g2) && same_set(N, n);
      const bool fast = p != 5 || s <= kClosureBudgetS;
      w << "p=" << p << ": |H2|=" << H2.order() << " |G2|=" << G2.order() << " |N|=" << N.order()
        << " |G3|=" << G3.order() << " (closure " << s << " s); ";
      ok = ok && orders && sets && fibres && fast;
    }
    w << "budget " << kClosureBudgetS << " s";
    return ok;
  });

  // 3 and 4. Pairwise-constraint oracle and the cyclic formula on the corpus.
  criterion(3, [](std::ostringstream& w) {
    std::size_t groups = 0, cyclic = 0, mismatches = 0;
    for (const auto& [name, g] : corpus()) {
      ++groups;
      const auto s = natural_space(g);
      counting.check(s);
      if (oracle::expanded_z1(*s) != oracle::pairwise_z1(*g, *s->module)) {
        ++mismatches;
        w << "[Z1 mismatch on " << name << "] ";
      }
      for (const auto& c : cyclic_subgroups(*g)) {
        ++cyclic;
        const auto cs = natural_space(share(c));
        counting.check(cs);
        const auto formula = c.generators().empty()
                                 ? std::vector<Residue>{}
                                 : cyclic_h1(c.generators().front()).group.invariant_factors();
        if (h1(cs).invariant_factors() != formula) {
          ++mismatches;
          w << "[cyclic formula mismatch in " << name << "] ";
        }
      }
    }
    w << groups << " groups, " << cyclic << " cyclic subgroups, " << mismatches << " mismatches";
    return mismatches == 0;
  });

  // 5. Lemma 2.2: exhaustive to order 32, then random embeddings to order 64.
  const auto t5 = Clock::now();
  const lab::ExhaustiveReport sweep = lab::sweep_small_homomorphisms(32);
  criterion(5, [&](std::ostringstream& w) {
    const lab::SweepReport subgroups = lab::sweep_equiv_divisibilite_subgroups(32);
    lab::CampaignConfig c;
    c.lemma = "2.2";
    c.trials = 1000;
    c.seed = 42;
    c.max_order = 64;
    const lab::CampaignReport random = lab::run_campaign(c);
    const double s = seconds_since(t5);
    w << "exhaustive embeddings " << sweep.equivalence.applicable << " (violations " << sweep.equivalence.violations
      << "), subgroup inclusions " << subgroups.applicable << " (violations " << subgroups.violations
      << "), random " << random.holds << "/" << c.trials << " (violations " << random.violated << "), " << s
      << " s (budget " << kLemma22BudgetS << " s)";
    return sweep.equivalence.violations == 0 && subgroups.violations == 0 && random.violated == 0 &&
           random.holds >= 1000 && sweep.equivalence.applicable > 0 && s <= kLemma22BudgetS;
  });

  // 6. Lemma 2.3 from both samplers.
  criterion(6, [](std::ostringstream& w) {
    std::uint64_t accepted = 0, violated = 0;
    for (lab::Sampler sampler : {lab::Sampler::rejection, lab::Sampler::kummer}) {
      lab::CampaignConfig c;
      c.lemma = "2.3";
      c.trials = 1000;
      c.seed = 42;
      c.max_order = 64;
      c.sampler = sampler;
      const lab::CampaignReport r = lab::run_campaign(c);
      accepted += r.holds;
      violated += r.violated;
      w << lab::to_string(sampler) << " accepted " << r.holds << "/" << c.trials << "; ";
    }
    w << "violations " << violated;
    return accepted >= 100 && violated == 0;
  });

  // 7. Lemma 3.1: the doubling map and the exhaustive search.
  criterion(7, [&](std::ostringstream& w) {
    lab::LatticeCache lattices;
    const AbHom doubling(FinAbGroup::from_invariant_factors({2}), FinAbGroup::from_invariant_factors({4}), {{2}});
    const lab::LemmaReport r = lab::check_lemma_pasinjectif(doubling, 2, {1}, lattices);
    bool example = false;
    if (sweep.non_injective_example) {
      const auto& x = *sweep.non_injective_example;
      example = lab::check_lemma_pasinjectif(x.f, x.m, x.p, lattices).verdict() == lab::Verdict::holds;
    }
    w << "Z/2 -> Z/4 " << lab::to_string(r.verdict()) << "; exhaustive instances " << sweep.non_summand.applicable
      << " (non-injective " << sweep.non_injective_applicable << "), violations " << sweep.non_summand.violations;
    return r.verdict() == lab::Verdict::holds && sweep.non_summand.applicable > 0 &&
           sweep.non_summand.violations == 0 && example;
  });

  // 8. Locally trivial classes of G3 take values in p^2 M3 on N.
  criterion(8, [](std::ostringstream& w) {
    bool ok = true;
    for (Residue p : {2, 5}) {
      const auto g3 = share(build_G3(p));
      const auto s = natural_space(g3);
      counting.check(s);
      const H1Group cyc = h1_cyc(s);
      const MatGroup n = build_N(p);
      std::size_t checked = 0, bad = 0;
      for (const auto& z : cyc.representatives())
        for (const auto& x : n.elements()) {
          ++checked;
          for (Residue v : z.value(*g3->index_of(x))) bad += v % (p * p) != 0;
        }
      w << "p=" << p << ": " << cyc.representatives().size() << " classes x " << n.order() << " elements, " << bad
        << " off p^2 M3; ";
      ok = ok && checked > 0 && bad == 0;
    }
    return ok;
  });

  // Further instances for the counting identity: the construction at p = 5.
  for (const GroupPtr& g : {share(build_G2(5)), share(build_N(5))}) {
    counting.check(natural_space(g));
    for (const auto& c : cyclic_subgroups(*g)) counting.check(natural_space(share(c)));
  }
  report(4, counting.instances > 0 && counting.exceptions == 0,
         std::to_string(counting.instances) + " instances, " + std::to_string(counting.exceptions) + " exceptions");

  // 9. Byte-identical reports.
  criterion(9, [](std::ostringstream& w) {
    const std::string a = run::to_json(run::reproduce({})).dump(2), b = run::to_json(run::reproduce({})).dump(2);
    bool ok = a == b;
    std::size_t campaigns = 0;
    for (const char* lemma : {"2.2", "2.3", "3.1"})
      for (lab::Sampler sampler : {lab::Sampler::rejection, lab::Sampler::kummer}) {
        lab::CampaignConfig c;
        c.lemma = lemma;
        c.trials = 200;
        c.seed = 42;
        c.sampler = sampler;
        const std::string x = run::to_json(run::fuzz(c)).dump(2), y = run::to_json(run::fuzz(c)).dump(2);
        ok = ok && x == y;
        ++campaigns;
      }
    w << "reproduce(5) twice, " << campaigns << " campaigns twice, identical: " << (ok ? "yes" : "no");
    return ok;
  });

  int failures = 0;
  for (const auto& [id, r] : results) {
    std::printf("criterion %d: %s  %s\n", id, r.first ? "PASS" : "FAIL", r.second.c_str());
    failures += !r.first;
  }
  return failures == 0 ? 0 : 1;
}
