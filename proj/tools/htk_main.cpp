// htk: hypertrees, random complexes, and their limit constants.
//
// One binary, one subcommand per computation or experiment.  Every run with
// --out also writes <out>.manifest.json recording the subcommand, parameters,
// seed, version, and wall-clock duration.  Outputs depend only on (seed,
// parameters); --jobs is accepted for interface stability and does not affect
// results.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "htk/htk.hpp"
#include "manifest.hpp"
#include "output.hpp"

namespace {

using nlohmann::json;
using namespace htk;
using tools::g12;
using tools::json_num;

constexpr std::uint64_t kUnsetM = ~0ULL;

struct Args {
  std::int32_t n = 0, d = 0;
  double p = -1;
  std::uint64_t m = kUnsetM;
  std::vector<double> c;
  double eps = 0;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t steps = 0;
  std::uint64_t depth = 0;
  std::uint64_t pool = 0;
  std::string format;
  std::string out;
  std::string in;
  int jobs = 1;
};

core::SimplicialComplex load_complex(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open input: " + path);
  return core::read_complex(f);
}

std::string complex_to_cx(const core::SimplicialComplex& x) {
  std::ostringstream ss;
  core::write_complex(x, ss);
  return ss.str();
}

json faces_json(const std::vector<std::uint64_t>& faces) {
  return json(faces);
}

void finish(const Args& a, const std::string& sub,
            std::map<std::string, std::string> params, const std::string& payload,
            const tools::ManifestTimer& timer) {
  tools::emit(payload, a.out);
  if (!a.out.empty()) {
    tools::RunManifest m;
    m.subcommand = sub;
    m.parameters = std::move(params);
    m.seed = a.seed;
    m.duration_seconds = timer.elapsed();
    tools::write_manifest(m, a.out);
  }
}

// ---------------------------------------------------------------------------
// exact linear algebra on a stored complex
// ---------------------------------------------------------------------------

void run_certify(const Args& a) {
  tools::ManifestTimer t;
  auto X = load_complex(a.in);
  auto cert = ops::certify(X);
  json j = {{"n", X.n},
            {"d", X.d},
            {"face_count", cert.face_count},
            {"is_hypertree", cert.is_hypertree},
            {"rank", cert.rank},
            {"beta_top", cert.beta_top},
            {"beta_codim1", cert.beta_codim1},
            {"prime", cert.prime},
            {"second_prime_checked", cert.second_prime_checked}};
  finish(a, "certify", {{"in", a.in}}, j.dump(2) + "\n", t);
}

void run_rank(const Args& a) {
  tools::ManifestTimer t;
  auto X = load_complex(a.in);
  auto M = linalg::build_boundary_matrix(X);
  auto r = linalg::rank_mod_p(M, linalg::kPrime1);
  json j = {{"n", X.n},
            {"d", X.d},
            {"rows", M.rows},
            {"cols", M.cols},
            {"rank", r.rank},
            {"method", r.method},
            {"prime", r.prime},
            {"peeled", r.peeled},
            {"randomized", r.randomized}};
  finish(a, "rank", {{"in", a.in}}, j.dump(2) + "\n", t);
}

void run_snf(const Args& a) {
  tools::ManifestTimer t;
  auto X = load_complex(a.in);
  auto M = linalg::build_boundary_matrix(X);
  auto s = linalg::smith_normal_form(M);
  json factors = json::array();
  for (const auto& f : s.factors) factors.push_back(f.get_str());
  json j = {{"n", X.n},
            {"d", X.d},
            {"rank", s.rank},
            {"factors", factors},
            {"torsion_order", s.torsion_order.get_str()}};
  finish(a, "snf", {{"in", a.in}}, j.dump(2) + "\n", t);
}

void run_coshadow(const Args& a) {
  tools::ManifestTimer t;
  auto X = load_complex(a.in);
  auto sh = ops::coshadow(X);
  const std::uint64_t lb = ops::coshadow_lower_bound(X.n, X.d, X.faces.size());
  std::string payload;
  if (a.format == "csv") {
    std::ostringstream ss;
    ss << "rank,vertices\n";
    for (std::uint64_t r : sh) {
      ss << r << ",";
      auto f = core::face_unrank(r, X.d + 1, X.n);
      for (std::size_t i = 0; i < f.size(); ++i) ss << (i ? " " : "") << f[i];
      ss << "\n";
    }
    payload = ss.str();
  } else {
    json j = {{"n", X.n},
              {"d", X.d},
              {"count", sh.size()},
              {"lower_bound", lb},
              {"faces", faces_json(sh)}};
    payload = j.dump(2) + "\n";
  }
  finish(a, "coshadow", {{"in", a.in}, {"format", a.format}}, payload, t);
}

void run_collapse(const Args& a) {
  tools::ManifestTimer t;
  auto X = load_complex(a.in);
  const bool seeded = a.seed != 0;
  auto r = ops::peel_collapse(X, a.seed, seeded);
  std::string payload;
  if (a.format == "csv") {
    std::ostringstream ss;
    ss << "step,facet,cell\n";
    for (std::size_t i = 0; i < r.removals.size(); ++i)
      ss << i << "," << r.removals[i].first << "," << r.removals[i].second << "\n";
    payload = ss.str();
  } else {
    json j = {{"n", X.n},
              {"d", X.d},
              {"collapsible", r.collapsible},
              {"removed", r.removals.size()},
              {"core_size", r.core.size()},
              {"core", faces_json(r.core)}};
    payload = j.dump(2) + "\n";
  }
  finish(a, "collapse",
         {{"in", a.in}, {"seed", std::to_string(a.seed)}, {"format", a.format}}, payload,
         t);
}

// ---------------------------------------------------------------------------
// enumeration
// ---------------------------------------------------------------------------

json summary_json(const ops::EnumerationSummary& s) {
  return {{"n", s.n},
          {"d", s.d},
          {"subsets_checked", s.subsets_checked},
          {"count", s.hypertree_count},
          {"torsion", s.torsion_histogram},
          {"kalai_sum", s.kalai_sum.get_str()},
          {"expected", s.expected.get_str()}};
}

void run_enumerate(const Args& a) {
  tools::ManifestTimer t;
  auto s = ops::enumerate_hypertrees(a.n, a.d);
  finish(a, "enumerate", {{"n", std::to_string(a.n)}, {"d", std::to_string(a.d)}},
         summary_json(s).dump(2) + "\n", t);
}

void run_kalai_sum(const Args& a) {
  tools::ManifestTimer t;
  auto s = ops::enumerate_hypertrees(a.n, a.d);
  json j = summary_json(s);
  j["match"] = s.kalai_sum == s.expected;
  finish(a, "kalai-sum", {{"n", std::to_string(a.n)}, {"d", std::to_string(a.d)}},
         j.dump(2) + "\n", t);
}

void run_cone(const Args& a) {
  tools::ManifestTimer t;
  auto X = ops::cone_hypertree(a.n, a.d);
  std::string payload;
  if (a.format == "cx") {
    payload = complex_to_cx(X);
  } else {
    auto cert = ops::certify(X);
    json j = {{"n", X.n},
              {"d", X.d},
              {"face_count", X.faces.size()},
              {"is_hypertree", cert.is_hypertree},
              {"faces", faces_json(X.faces)}};
    payload = j.dump(2) + "\n";
  }
  finish(a, "cone",
         {{"n", std::to_string(a.n)}, {"d", std::to_string(a.d)}, {"format", a.format}},
         payload, t);
}

// ---------------------------------------------------------------------------
// analytic constants
// ---------------------------------------------------------------------------

void run_bounds(const Args& a) {
  tools::ManifestTimer t;
  double alpha = std::nan("");
  if (a.d <= 8) alpha = analytic::alpha_constant(a.d).alpha;
  const std::int32_t n = a.n > 0 ? a.n : a.d + 2;
  auto b = ops::bound_evaluators(n, a.d, alpha);
  json j = {{"d", a.d}, {"cnd_base", json_num(b.cnd_base)}};
  if (!std::isnan(b.thm_base)) {
    j["thm_base"] = json_num(b.thm_base);
    j["alpha"] = json_num(alpha);
  }
  if (a.n > 0) {
    j["n"] = a.n;
    j["log_lower_cnd"] = json_num(b.log_lower_cnd);
    j["log_upper_kalai"] = json_num(b.log_upper_kalai);
    j["log_lower_corollary"] = json_num(b.log_lower_corollary);
    if (!std::isnan(b.log_lower_thm)) j["log_lower_thm"] = json_num(b.log_lower_thm);
  }
  finish(a, "bounds", {{"n", std::to_string(a.n)}, {"d", std::to_string(a.d)}},
         j.dump(2) + "\n", t);
}

void run_constants(const Args& a) {
  tools::ManifestTimer t;
  auto th = analytic::threshold(a.d);
  const double resid_t = (a.d + 1) * (1 - th.t_star) +
                         (1 + a.d * th.t_star) * std::log(th.t_star);
  const double resid_c =
      th.t_star - std::exp(-th.c_star * std::pow(1 - th.t_star, a.d));
  json j = {{"d", a.d},
            {"t_star", json_num(th.t_star)},
            {"c_star", json_num(th.c_star)},
            {"residual_critical", json_num(resid_t)},
            {"residual_fixed_point", json_num(resid_c)},
            {"tolerances", {{"threshold", 1e-12}, {"alpha", 1e-9}}}};
  finish(a, "constants", {{"d", std::to_string(a.d)}}, j.dump(2) + "\n", t);
}

void run_alpha(const Args& a) {
  tools::ManifestTimer t;
  auto r = analytic::alpha_constant(a.d);
  json j = {{"d", a.d},
            {"alpha", json_num(r.alpha)},
            {"alpha_alt", json_num(r.alpha_alt)},
            {"diff", json_num(r.diff)},
            {"prefactor", json_num(std::exp(1 + r.alpha) / (a.d + 1))}};
  finish(a, "alpha", {{"d", std::to_string(a.d)}}, j.dump(2) + "\n", t);
}

void run_curve(const Args& a) {
  tools::ManifestTimer t;
  std::vector<analytic::CurvePoint> rows;
  auto th = analytic::threshold(a.d);
  if (a.c.size() == 1) {
    const double c = a.c[0];
    rows.push_back({c, analytic::t_of_c(c, th), analytic::sbar(c, th),
                    analytic::r_of_c(c, th)});
  } else {
    if (a.steps == 0)
      throw std::invalid_argument("curve: a --c range needs --steps >= 1");
    rows = analytic::curve_table(a.d, a.c[0], a.c[1], a.steps);
  }
  std::string payload;
  if (a.format == "json") {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"c", json_num(r.c)},
                     {"t_c", json_num(r.t)},
                     {"sbar", json_num(r.sbar)},
                     {"r", json_num(r.r)}});
    payload = json{{"d", a.d}, {"points", arr}}.dump(2) + "\n";
  } else {
    std::ostringstream ss;
    ss << "c,t_c,sbar,r\n";
    for (const auto& r : rows)
      ss << g12(r.c) << "," << g12(r.t) << "," << g12(r.sbar) << "," << g12(r.r)
         << "\n";
    payload = ss.str();
  }
  std::map<std::string, std::string> params = {{"d", std::to_string(a.d)},
                                               {"steps", std::to_string(a.steps)},
                                               {"format", a.format}};
  for (std::size_t i = 0; i < a.c.size(); ++i)
    params["c" + std::to_string(i)] = g12(a.c[i]);
  finish(a, "curve", std::move(params), payload, t);
}

// ---------------------------------------------------------------------------
// random models
// ---------------------------------------------------------------------------

void run_grow(const Args& a) {
  tools::ManifestTimer t;
  auto tr = models::growth_process(a.n, a.d, models::Rng(a.seed));
  std::string payload;
  if (a.format == "cx") {
    payload = complex_to_cx(tr.final_complex);
  } else if (a.format == "csv") {
    std::ostringstream ss;
    ss << "step,face,live_after\n";
    for (std::size_t i = 0; i < tr.faces.size(); ++i)
      ss << i << "," << tr.faces[i] << "," << tr.live[i + 1] << "\n";
    payload = ss.str();
  } else {
    json j = {{"n", tr.n},           {"d", tr.d},
              {"seed", a.seed},      {"version", kVersion},
              {"faces", tr.faces},   {"live", tr.live},
              {"final", faces_json(tr.final_complex.faces)}};
    payload = j.dump(2) + "\n";
  }
  finish(a, "grow",
         {{"n", std::to_string(a.n)},
          {"d", std::to_string(a.d)},
          {"seed", std::to_string(a.seed)},
          {"format", a.format}},
         payload, t);
}

void run_sample_lm(const Args& a) {
  tools::ManifestTimer t;
  const bool m_set = a.m != kUnsetM;
  if ((a.p >= 0) == m_set)
    throw std::invalid_argument("sample-lm: give exactly one of --p or --m");
  core::SimplicialComplex X =
      m_set ? models::sample_Y_M(a.n, a.d, a.m, models::Rng(a.seed))
            : models::sample_Y(a.n, a.d, a.p, models::Rng(a.seed));
  std::string payload;
  if (a.format == "json") {
    json j = {{"n", X.n},
              {"d", X.d},
              {"seed", a.seed},
              {"version", kVersion},
              {"face_count", X.faces.size()},
              {"faces", faces_json(X.faces)}};
    if (m_set)
      j["m"] = a.m;
    else
      j["p"] = json_num(a.p);
    payload = j.dump(2) + "\n";
  } else {
    payload = complex_to_cx(X);
  }
  std::map<std::string, std::string> params = {{"n", std::to_string(a.n)},
                                               {"d", std::to_string(a.d)},
                                               {"seed", std::to_string(a.seed)},
                                               {"format", a.format}};
  if (m_set)
    params["m"] = std::to_string(a.m);
  else
    params["p"] = g12(a.p);
  finish(a, "sample-lm", std::move(params), payload, t);
}

void run_sample_1out(const Args& a) {
  tools::ManifestTimer t;
  auto s = models::sample_1out_eps(a.n, a.d, a.eps, models::Rng(a.seed));
  std::string payload;
  if (a.format == "json") {
    json j = {{"n", s.complex.n},
              {"d", s.complex.d},
              {"eps", json_num(a.eps)},
              {"seed", a.seed},
              {"version", kVersion},
              {"face_count", s.complex.faces.size()},
              {"duplicates", s.duplicates},
              {"faces", faces_json(s.complex.faces)}};
    payload = j.dump(2) + "\n";
  } else {
    payload = complex_to_cx(s.complex);
  }
  finish(a, "sample-1out",
         {{"n", std::to_string(a.n)},
          {"d", std::to_string(a.d)},
          {"eps", g12(a.eps)},
          {"seed", std::to_string(a.seed)},
          {"format", a.format}},
         payload, t);
}

void run_chain(const Args& a) {
  tools::ManifestTimer t;
  core::SimplicialComplex init =
      a.in.empty() ? ops::cone_hypertree(a.n, a.d) : load_complex(a.in);
  auto r = models::base_exchange_chain(a.n, a.d, a.steps, models::Rng(a.seed), init);
  std::string payload;
  if (a.format == "csv") {
    std::ostringstream ss;
    ss << "state,count\n";
    for (const auto& [state, cnt] : r.visits) {
      for (std::size_t i = 0; i < state.size(); ++i) ss << (i ? " " : "") << state[i];
      ss << "," << cnt << "\n";
    }
    payload = ss.str();
  } else {
    json j = {{"n", a.n},
              {"d", a.d},
              {"steps", a.steps},
              {"seed", a.seed},
              {"version", kVersion},
              {"initial", faces_json(init.faces)},
              {"final", faces_json(r.state.faces)},
              {"distinct_states", r.visits.size()}};
    payload = j.dump(2) + "\n";
  }
  finish(a, "chain",
         {{"n", std::to_string(a.n)},
          {"d", std::to_string(a.d)},
          {"steps", std::to_string(a.steps)},
          {"seed", std::to_string(a.seed)},
          {"in", a.in},
          {"format", a.format}},
         payload, t);
}

void run_greedy(const Args& a) {
  tools::ManifestTimer t;
  auto g = models::greedy_collapsible_process(a.n, a.d, models::Rng(a.seed));
  std::string payload;
  if (a.format == "cx") {
    payload = complex_to_cx(g.complex);
  } else {
    json j = {{"n", a.n},
              {"d", a.d},
              {"seed", a.seed},
              {"version", kVersion},
              {"face_count", g.face_count},
              {"faces", faces_json(g.complex.faces)}};
    payload = j.dump(2) + "\n";
  }
  finish(a, "greedy-collapsible",
         {{"n", std::to_string(a.n)},
          {"d", std::to_string(a.d)},
          {"seed", std::to_string(a.seed)},
          {"format", a.format}},
         payload, t);
}

void run_hypertree_prob(const Args& a) {
  tools::ManifestTimer t;
  auto e = models::hypertree_probability(a.n, a.d, a.trials, models::Rng(a.seed));
  json j = {{"n", a.n},
            {"d", a.d},
            {"trials", e.trials},
            {"seed", a.seed},
            {"version", kVersion},
            {"successes", e.successes},
            {"estimate", json_num(e.estimate)},
            {"wilson_lo", json_num(e.lo)},
            {"wilson_hi", json_num(e.hi)}};
  finish(a, "hypertree-prob",
         {{"n", std::to_string(a.n)},
          {"d", std::to_string(a.d)},
          {"trials", std::to_string(a.trials)},
          {"seed", std::to_string(a.seed)}},
         j.dump(2) + "\n", t);
}

void run_curve_experiment(const Args& a) {
  tools::ManifestTimer t;
  std::vector<double> cs = a.c;
  if (cs.empty()) cs = {1.0, 2.0, 2.5, 3.5, 5.0};
  auto cells = models::curve_experiment(a.n, a.d, cs, a.trials, models::Rng(a.seed));
  std::string payload;
  if (a.format == "json") {
    json arr = json::array();
    for (const auto& cell : cells)
      arr.push_back({{"c", json_num(cell.c)},
                     {"trials", cell.trials},
                     {"mean_rank_norm", json_num(cell.mean_rank_norm)},
                     {"stderr_rank", json_num(cell.stderr_rank)},
                     {"mean_density", json_num(cell.mean_density)},
                     {"stderr_density", json_num(cell.stderr_density)}});
    json j = {{"n", a.n},          {"d", a.d},   {"trials", a.trials},
              {"seed", a.seed},    {"version", kVersion},
              {"cells", arr}};
    payload = j.dump(2) + "\n";
  } else {
    std::ostringstream ss;
    ss << "n,d,trials,seed,c,statistic,value,stderr\n";
    for (const auto& cell : cells) {
      ss << a.n << "," << a.d << "," << cell.trials << "," << a.seed << ","
         << g12(cell.c) << ",rank_norm," << g12(cell.mean_rank_norm) << ","
         << g12(cell.stderr_rank) << "\n";
      ss << a.n << "," << a.d << "," << cell.trials << "," << a.seed << ","
         << g12(cell.c) << ",coshadow_density," << g12(cell.mean_density) << ","
         << g12(cell.stderr_density) << "\n";
    }
    payload = ss.str();
  }
  std::map<std::string, std::string> params = {{"n", std::to_string(a.n)},
                                               {"d", std::to_string(a.d)},
                                               {"trials", std::to_string(a.trials)},
                                               {"seed", std::to_string(a.seed)},
                                               {"format", a.format}};
  for (std::size_t i = 0; i < cs.size(); ++i) params["c" + std::to_string(i)] = g12(cs[i]);
  finish(a, "curve-experiment", std::move(params), payload, t);
}

// ---------------------------------------------------------------------------
// local weak limit
// ---------------------------------------------------------------------------

void run_census(const Args& a) {
  tools::ManifestTimer t;
  models::Rng master(a.seed);
  auto X = models::sample_1out(a.n, a.d, master.substream("sample-1out", 0)).complex;
  auto rep = local_limit::neighborhood_census(X, a.depth, a.trials,
                                              master.substream("census", 0));
  std::string payload;
  if (a.format == "json") {
    json rows = json::array();
    for (const auto& row : rep.rows)
      rows.push_back({{"code", row.code},
                      {"empirical", json_num(row.empirical)},
                      {"limit", json_num(row.limit)},
                      {"absdiff", json_num(std::fabs(row.empirical - row.limit))}});
    json j = {{"n", a.n},
              {"d", rep.d},
              {"radius", rep.radius},
              {"trials", rep.trials},
              {"limit_trials", rep.limit_trials},
              {"seed", a.seed},
              {"version", kVersion},
              {"tv", json_num(rep.tv)},
              {"rows", rows}};
    payload = j.dump(2) + "\n";
  } else {
    std::ostringstream ss;
    ss << "type-code,empirical,limit,abs-diff\n";
    for (const auto& row : rep.rows)
      ss << row.code << "," << g12(row.empirical) << "," << g12(row.limit) << ","
         << g12(std::fabs(row.empirical - row.limit)) << "\n";
    payload = ss.str();
  }
  finish(a, "census",
         {{"n", std::to_string(a.n)},
          {"d", std::to_string(a.d)},
          {"depth", std::to_string(a.depth)},
          {"trials", std::to_string(a.trials)},
          {"seed", std::to_string(a.seed)},
          {"format", a.format}},
         payload, t);
}

void run_population(const Args& a) {
  tools::ManifestTimer t;
  auto rep = local_limit::population_dynamics(a.d, a.pool, a.steps, models::Rng(a.seed));
  json fps = json::array();
  for (const auto& fp : local_limit::solve_ab(a.d))
    fps.push_back({{"a", json_num(fp.a)},
                   {"b", json_num(fp.b)},
                   {"branch", fp.branch},
                   {"residual_a", json_num(fp.resid_a)},
                   {"residual_b", json_num(fp.resid_b)},
                   {"expected_X",
                    json_num(local_limit::expected_X_formula(fp.a, fp.b, a.d))}});
  std::string payload;
  if (a.format == "csv") {
    std::ostringstream ss;
    ss << "sweep,E_X\n";
    for (std::size_t i = 0; i < rep.history.size(); ++i)
      ss << (i + 1) << "," << g12(rep.history[i]) << "\n";
    payload = ss.str();
  } else {
    json j = {{"d", rep.d},
              {"pool", rep.pool},
              {"sweeps", rep.sweeps},
              {"seed", a.seed},
              {"version", kVersion},
              {"E_X", json_num(rep.E_X)},
              {"stderr", json_num(rep.stderr_X)},
              {"Pr_X_pos", json_num(rep.Pr_X_positive)},
              {"E_Y", json_num(rep.E_Y)},
              {"converged", rep.converged},
              {"fixed_points", fps}};
    payload = j.dump(2) + "\n";
  }
  finish(a, "population",
         {{"d", std::to_string(a.d)},
          {"pool", std::to_string(a.pool)},
          {"steps", std::to_string(a.steps)},
          {"seed", std::to_string(a.seed)},
          {"format", a.format}},
         payload, t);
}

void run_boundary_count(const Args& a) {
  tools::ManifestTimer t;
  auto X = load_complex(a.in);
  json j = {{"n", X.n},
            {"d", X.d},
            {"face_count", X.faces.size()},
            {"simplex_boundaries", models::simplex_boundary_count(X)},
            {"beta_top", models::betti_top(X)}};
  finish(a, "boundary-count", {{"in", a.in}}, j.dump(2) + "\n", t);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypertree toolkit: exact homology, random complexes, limit constants"};
  app.require_subcommand(1);
  Args a;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", a.out, "write output here (plus <out>.manifest.json)");
    sub->add_option("--jobs", a.jobs, "worker count (results are identical for any value)")
        ->check(CLI::PositiveNumber);
  };
  const auto add_nd = [&](CLI::App* sub) {
    sub->add_option("--n", a.n, "vertex count")->required()->check(CLI::PositiveNumber);
    sub->add_option("--d", a.d, "dimension")->required()->check(CLI::PositiveNumber);
  };
  const auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", a.seed, "master RNG seed")->required();
  };
  const auto add_format = [&](CLI::App* sub, const std::vector<std::string>& allowed,
                              const std::string& def) {
    sub->add_option("--format", a.format, "output format (default " + def + ")")
        ->check(CLI::IsMember(allowed));
    sub->parse_complete_callback([&a, def] {
      if (a.format.empty()) a.format = def;
    });
  };

  std::function<void()> runner;
  const auto set = [&](CLI::App* sub, void (*fn)(const Args&)) {
    sub->callback([&runner, fn, &a] { runner = [fn, &a] { fn(a); }; });
  };

  {
    auto* s = app.add_subcommand("certify", "decide whether a stored complex is a hypertree");
    s->add_option("--in", a.in, "complex file")->required();
    add_common(s);
    set(s, run_certify);
  }
  {
    auto* s = app.add_subcommand("rank", "boundary-matrix rank mod a 62-bit prime");
    s->add_option("--in", a.in, "complex file")->required();
    add_common(s);
    set(s, run_rank);
  }
  {
    auto* s = app.add_subcommand("snf", "Smith normal form of the boundary matrix");
    s->add_option("--in", a.in, "complex file")->required();
    add_common(s);
    set(s, run_snf);
  }
  {
    auto* s = app.add_subcommand("coshadow", "d-faces addable without creating a d-cycle");
    s->add_option("--in", a.in, "acyclic complex file")->required();
    add_format(s, {"csv", "json"}, "json");
    add_common(s);
    set(s, run_coshadow);
  }
  {
    auto* s = app.add_subcommand("collapse", "greedy d-collapse; core is order-independent");
    s->add_option("--in", a.in, "complex file")->required();
    s->add_option("--seed", a.seed, "shuffle the initial exposed-face queue");
    add_format(s, {"csv", "json"}, "json");
    add_common(s);
    set(s, run_collapse);
  }
  {
    auto* s = app.add_subcommand("enumerate", "exhaustive hypertree scan with torsion");
    add_nd(s);
    add_common(s);
    set(s, run_enumerate);
  }
  {
    auto* s = app.add_subcommand("kalai-sum", "sum of squared torsion orders vs n^C(n-2,d)");
    add_nd(s);
    add_common(s);
    set(s, run_kalai_sum);
  }
  {
    auto* s = app.add_subcommand("cone", "the cone hypertree on n vertices");
    add_nd(s);
    add_format(s, {"cx", "json"}, "json");
    add_common(s);
    set(s, run_cone);
  }
  {
    auto* s = app.add_subcommand("bounds", "enumeration bounds; alpha-form included for d <= 8");
    s->add_option("--n", a.n, "vertex count for the log-scale bounds");
    s->add_option("--d", a.d, "dimension")->required()->check(CLI::PositiveNumber);
    add_common(s);
    set(s, run_bounds);
  }
  {
    auto* s = app.add_subcommand("constants", "critical pair (t*, c*) of the rank curve");
    s->add_option("--d", a.d, "dimension")->required()->check(CLI::PositiveNumber);
    add_common(s);
    set(s, run_constants);
  }
  {
    auto* s = app.add_subcommand("alpha", "the exponential-growth constant, both integral forms");
    s->add_option("--d", a.d, "dimension")->required()->check(CLI::PositiveNumber);
    add_common(s);
    set(s, run_alpha);
  }
  {
    auto* s = app.add_subcommand("curve", "analytic (c, t_c, sbar, r) table");
    s->add_option("--d", a.d, "dimension")->required()->check(CLI::PositiveNumber);
    s->add_option("--c", a.c, "single c, or lower and upper grid ends")
        ->required()
        ->expected(1, 2);
    s->add_option("--steps", a.steps, "grid intervals between the two --c values");
    add_format(s, {"csv", "json"}, "csv");
    add_common(s);
    set(s, run_curve);
  }
  {
    auto* s = app.add_subcommand("grow", "uniform-coshadow growth process to a hypertree");
    add_nd(s);
    add_seed(s);
    add_format(s, {"json", "csv", "cx"}, "json");
    add_common(s);
    set(s, run_grow);
  }
  {
    auto* s = app.add_subcommand("sample-lm", "Linial-Meshulam Y_d(n,p) or Y_d(n,M)");
    add_nd(s);
    s->add_option("--p", a.p, "face probability");
    s->add_option("--m", a.m, "exact face count");
    add_seed(s);
    add_format(s, {"cx", "json"}, "cx");
    add_common(s);
    set(s, run_sample_lm);
  }
  {
    auto* s = app.add_subcommand("sample-1out", "1-out complex S_d(n,1), optionally eps-sparsified");
    add_nd(s);
    s->add_option("--eps", a.eps, "deactivation probability")->check(CLI::Range(0.0, 1.0));
    add_seed(s);
    add_format(s, {"cx", "json"}, "cx");
    add_common(s);
    set(s, run_sample_1out);
  }
  {
    auto* s = app.add_subcommand("chain", "base-exchange walk on hypertrees");
    add_nd(s);
    s->add_option("--steps", a.steps, "walk length")->required();
    s->add_option("--in", a.in, "initial hypertree (default: the cone)");
    add_seed(s);
    add_format(s, {"json", "csv"}, "json");
    add_common(s);
    set(s, run_chain);
  }
  {
    auto* s = app.add_subcommand("greedy-collapsible", "random greedy collapsible-complex process");
    add_nd(s);
    add_seed(s);
    add_format(s, {"json", "cx"}, "json");
    add_common(s);
    set(s, run_greedy);
  }
  {
    auto* s = app.add_subcommand("hypertree-prob", "Pr[uniform C(n-1,d)-subset is a hypertree]");
    add_nd(s);
    s->add_option("--trials", a.trials, "Monte Carlo trials")->required();
    add_seed(s);
    add_common(s);
    set(s, run_hypertree_prob);
  }
  {
    auto* s = app.add_subcommand("curve-experiment",
                                 "empirical rank and co-shadow density at c/n");
    add_nd(s);
    s->add_option("--trials", a.trials, "trials per c")->required();
    s->add_option("--c", a.c, "c values (default 1 2 2.5 3.5 5)");
    add_seed(s);
    add_format(s, {"csv", "json"}, "csv");
    add_common(s);
    set(s, run_curve_experiment);
  }
  {
    auto* s = app.add_subcommand("census", "neighborhood census of S_d(n,1) vs the limit tree");
    add_nd(s);
    s->add_option("--depth", a.depth, "facet generations (0..2)")->required();
    s->add_option("--trials", a.trials, "root draws")->required();
    add_seed(s);
    add_format(s, {"csv", "json"}, "csv");
    add_common(s);
    set(s, run_census);
  }
  {
    auto* s = app.add_subcommand("population", "population dynamics of the limit recursion");
    s->add_option("--d", a.d, "dimension")->required()->check(CLI::PositiveNumber);
    s->add_option("--pool", a.pool, "pool size")->required();
    s->add_option("--steps", a.steps, "sweeps")->required();
    add_seed(s);
    add_format(s, {"json", "csv"}, "json");
    add_common(s);
    set(s, run_population);
  }
  {
    auto* s = app.add_subcommand("boundary-count", "simplex-boundary subcomplexes and beta_top");
    s->add_option("--in", a.in, "complex file")->required();
    add_common(s);
    set(s, run_boundary_count);
  }

  try {
    app.parse(argc, argv);
    if (runner) runner();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const models::InternalInvariantError& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
