#pragma once

// JSON forms of the core values. Readers validate strictly and name the
// offending field in the exception message.
//
//   matrix     {"modulus": m, "rows": r, "cols": c, "entries": [[...], ...]}
//   group      {"invariant_factors": [...]}
//   hom        {"domain": group, "codomain": group, "matrix": [[...], ...]}
//   mat group  {"modulus": q, "dim": n, "generators": [matrix | [[...]], ...]}
//   module     {"modulus": q, "rank": n, "action": "natural" | "trivial" | [matrix, ...]}

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "h1cyc/abelian.hpp"
#include "h1cyc/lemma_lab.hpp"
#include "h1cyc/matgroup.hpp"
#include "h1cyc/modmat.hpp"

namespace h1cyc::io {

using Json = nlohmann::ordered_json;

/// Malformed input; `field` is a JSON-pointer-like path.
class InputError : public std::invalid_argument {
 public:
  InputError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

namespace detail {

inline const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw InputError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(path + "/" + key, "missing");
  return *it;
}

inline std::int64_t integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw InputError(path, "expected an integer");
  return j.get<std::int64_t>();
}

inline std::int64_t positive(const Json& j, const std::string& path, std::int64_t min = 1) {
  const std::int64_t v = integer(j, path);
  if (v < min) throw InputError(path, "must be >= " + std::to_string(min));
  return v;
}

inline std::vector<Vec> int_rows(const Json& j, const std::string& path) {
  if (!j.is_array()) throw InputError(path, "expected an array of rows");
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string rp = path + "/" + std::to_string(i);
    if (!j[i].is_array()) throw InputError(rp, "expected an array");
    Vec row;
    for (std::size_t k = 0; k < j[i].size(); ++k) row.push_back(integer(j[i][k], rp + "/" + std::to_string(k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ZModMatrix reduced_matrix(Residue modulus, std::size_t rows, std::size_t cols, const std::vector<Vec>& entries,
                                 const std::string& path) {
  if (entries.size() != rows) throw InputError(path, "expected " + std::to_string(rows) + " rows");
  ZModMatrix m(modulus, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rp = path + "/" + std::to_string(i);
    if (entries[i].size() != cols) throw InputError(rp, "expected " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) {
      if (entries[i][k] < 0 || entries[i][k] >= modulus)
        throw InputError(rp + "/" + std::to_string(k), "entry not reduced modulo " + std::to_string(modulus));
      m(i, k) = entries[i][k];
    }
  }
  return m;
}

}  // namespace detail

inline Json to_json(const ZModMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row_vec(i));
  return {{"modulus", m.modulus()}, {"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

inline ZModMatrix matrix_from_json(const Json& j, const std::string& path = "") {
  const Residue q = detail::positive(detail::member(j, "modulus", path), path + "/modulus", 2);
  const auto r = static_cast<std::size_t>(detail::positive(detail::member(j, "rows", path), path + "/rows", 0));
  const auto c = static_cast<std::size_t>(detail::positive(detail::member(j, "cols", path), path + "/cols", 0));
  return detail::reduced_matrix(q, r, c, detail::int_rows(detail::member(j, "entries", path), path + "/entries"),
                                path + "/entries");
}

inline Json to_json(const FinAbGroup& g) { return {{"invariant_factors", g.invariant_factors()}}; }

inline FinAbGroup group_from_json(const Json& j, const std::string& path = "") {
  const Json& f = detail::member(j, "invariant_factors", path);
  if (!f.is_array()) throw InputError(path + "/invariant_factors", "expected an array");
  std::vector<Residue> factors;
  for (std::size_t i = 0; i < f.size(); ++i)
    factors.push_back(detail::positive(f[i], path + "/invariant_factors/" + std::to_string(i), 2));
  try {
    return FinAbGroup::from_invariant_factors(factors);
  } catch (const std::invalid_argument& e) {
    throw InputError(path + "/invariant_factors", e.what());
  }
}

inline Json to_json(const AbHom& f) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < f.domain().rank(); ++i) rows.push_back(f.image_of_generator(i));
  return {{"domain", to_json(f.domain())}, {"codomain", to_json(f.codomain())}, {"matrix", rows}};
}

inline AbHom hom_from_json(const Json& j, const std::string& path = "") {
  const FinAbGroup a = group_from_json(detail::member(j, "domain", path), path + "/domain");
  const FinAbGroup b = group_from_json(detail::member(j, "codomain", path), path + "/codomain");
  const std::vector<Vec> rows = detail::int_rows(detail::member(j, "matrix", path), path + "/matrix");
  if (rows.size() != a.rank()) throw InputError(path + "/matrix", "expected one row per domain generator");
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!b.contains(rows[i])) throw InputError(path + "/matrix/" + std::to_string(i), "not a reduced codomain element");
  try {
    return AbHom(a, b, rows);
  } catch (const std::invalid_argument& e) {
    throw InputError(path + "/matrix", e.what());
  }
}

inline std::vector<GroupElement> elements_from_json(const FinAbGroup& g, const Json& j, const std::string& path) {
  const std::vector<Vec> rows = detail::int_rows(j, path);
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!g.contains(rows[i])) throw InputError(path + "/" + std::to_string(i), "not a reduced element of " + g.to_string());
  return rows;
}

inline Json to_json(const MatGroup& g) {
  Json gens = Json::array();
  for (const auto& x : g.generators()) gens.push_back(to_json(x));
  return {{"modulus", g.modulus()}, {"dim", g.dim()}, {"generators", gens}};
}

inline std::vector<ZModMatrix> generator_list(const Json& j, Residue q, std::size_t dim, const std::string& path) {
  if (!j.is_array()) throw InputError(path, "expected an array of matrices");
  std::vector<ZModMatrix> gens;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string gp = path + "/" + std::to_string(i);
    ZModMatrix x = j[i].is_object() ? matrix_from_json(j[i], gp)
                                    : detail::reduced_matrix(q, dim, dim, detail::int_rows(j[i], gp), gp);
    if (x.modulus() != q || x.rows() != dim || x.cols() != dim)
      throw InputError(gp, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix modulo " +
                               std::to_string(q));
    if (!is_invertible(x)) throw InputError(gp, "matrix is not invertible");
    gens.push_back(std::move(x));
  }
  return gens;
}

inline MatGroup mat_group_from_json(const Json& j, std::size_t cap = kDefaultClosureCap, const std::string& path = "") {
  const Residue q = detail::positive(detail::member(j, "modulus", path), path + "/modulus", 2);
  const auto dim = static_cast<std::size_t>(detail::positive(detail::member(j, "dim", path), path + "/dim", 0));
  return MatGroup::closure(generator_list(detail::member(j, "generators", path), q, dim, path + "/generators"), q, dim, cap);
}

inline GModule module_from_json(const Json& j, const MatGroup& g, const std::string& path = "") {
  const Json& action = detail::member(j, "action", path);
  if (action.is_string()) {
    const std::string kind = action.get<std::string>();
    if (kind == "natural") return GModule::natural(g);
    if (kind != "trivial") throw InputError(path + "/action", "expected \"natural\", \"trivial\" or a matrix list");
    const Residue q = detail::positive(detail::member(j, "modulus", path), path + "/modulus", 2);
    const auto n = static_cast<std::size_t>(detail::positive(detail::member(j, "rank", path), path + "/rank", 0));
    return GModule::trivial(g, q, n);
  }
  const Residue q = detail::positive(detail::member(j, "modulus", path), path + "/modulus", 2);
  const auto n = static_cast<std::size_t>(detail::positive(detail::member(j, "rank", path), path + "/rank", 0));
  std::vector<ZModMatrix> acts = generator_list(action, q, n, path + "/action");
  if (acts.size() != g.generator_count())
    throw InputError(path + "/action", "expected one matrix per group generator (" + std::to_string(g.generator_count()) + ")");
  try {
    return GModule::from_generator_action(g, q, n, std::move(acts));
  } catch (const std::invalid_argument& e) {
    throw InputError(path + "/action", e.what());
  }
}

inline Json to_json(const lab::CampaignConfig& c) {
  return {{"lemma", c.lemma}, {"trials", c.trials}, {"seed", c.seed},
          {"max_order", c.max_order}, {"n", c.n}, {"sampler", lab::to_string(c.sampler)}};
}

inline lab::CampaignConfig campaign_from_json(const Json& j, lab::CampaignConfig c = {}) {
  if (!j.is_object()) throw InputError("", "expected an object");
  if (j.contains("lemma")) {
    if (!j["lemma"].is_string()) throw InputError("/lemma", "expected a string");
    c.lemma = j["lemma"].get<std::string>();
  }
  if (j.contains("trials")) c.trials = static_cast<std::uint64_t>(detail::positive(j["trials"], "/trials", 0));
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) throw InputError("/seed", "expected an integer");
    if (j["seed"].is_number_integer() && !j["seed"].is_number_unsigned() && j["seed"].get<std::int64_t>() < 0)
      throw InputError("/seed", "must be non-negative");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("max_order")) c.max_order = detail::positive(j["max_order"], "/max_order");
  if (j.contains("n")) c.n = detail::positive(j["n"], "/n");
  if (j.contains("sampler")) {
    const std::string s = j["sampler"].is_string() ? j["sampler"].get<std::string>() : "";
    if (s == "S1") c.sampler = lab::Sampler::rejection;
    else if (s == "S2") c.sampler = lab::Sampler::kummer;
    else throw InputError("/sampler", "expected \"S1\" or \"S2\"");
  }
  try {
    lab::validate(c);
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    throw InputError("/" + what.substr(0, what.find(':')), what.substr(what.find(':') + 2));
  }
  return c;
}

inline Json to_json(const lab::LemmaReport& r, bool timings = false) {
  Json hyp = Json::object(), checks = Json::object();
  for (const auto& h : r.hypotheses) hyp[h.name] = h.value;
  for (const auto& c : r.checks) checks[c.name] = c.value;
  Json out = {{"lemma", r.lemma}, {"verdict", lab::to_string(r.verdict())}, {"hypotheses", hyp}};
  out["conclusion"] = r.conclusion ? Json(*r.conclusion) : Json(nullptr);
  out["checks"] = checks;
  out["counterexample"] = r.counterexample ? Json(*r.counterexample) : Json(nullptr);
  if (timings) out["elapsed_ms"] = r.elapsed_ms;
  return out;
}

inline Json to_json(const lab::CampaignReport& r) {
  Json trials = Json::array();
  for (const auto& t : r.outcomes) {
    Json o = {{"index", t.index}, {"seed", t.seed}, {"sampled", t.sampled}, {"verdict", lab::to_string(t.verdict)}};
    if (t.counterexample) o["counterexample"] = *t.counterexample;
    trials.push_back(std::move(o));
  }
  return {{"config", to_json(r.config)},
          {"counts",
           {{"trials", r.outcomes.size()},
            {"sampled", r.sampled},
            {"holds", r.holds},
            {"not_applicable", r.not_applicable},
            {"violated", r.violated}}},
          {"trials", trials}};
}

}  // namespace h1cyc::io
