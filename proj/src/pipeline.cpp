#include "pwave/pipeline.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace pwave {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const char* status(bool ok) { return ok ? "pass" : "fail"; }

Json settings_json(const CheckSettings& c) {
  return {{"tolerances",
           {{"flatness", c.tolerances.flatness},
            {"parallel", c.tolerances.parallel},
            {"similarity", c.tolerances.similarity},
            {"gauge", c.tolerances.gauge},
            {"lattice", c.tolerances.lattice},
            {"transversality", c.tolerances.transversality}}},
          {"grid", {{"t_min", c.grid.t_min}, {"t_max", c.grid.t_max}, {"count", c.grid.count}}},
          {"samples", c.samples},
          {"seed", c.seed},
          {"word_length", c.word_length},
          {"fd_step", c.fd_step},
          {"sample_half_width", c.sample_half_width}};
}

Json model_json(const ModelSpec& m) {
  return {{"n", m.n()},
          {"dim", m.dim()},
          {"profile", m.profile().is_constant() ? "constant" : "sampled"},
          {"B", to_json(m.B())},
          {"F", to_json(m.F())},
          {"K_generators", m.K_generators().size()},
          {"non_flat", m.non_flat()},
          {"L_eigenvalues", to_json(sorted_eigenvalues(m.L()->matrix()))},
          {"spectral", to_json(spectral_type(*m.L()))}};
}

std::vector<HeisElement> probe_heis(const SpecFile& s) {
  if (!s.gamma0.empty()) return s.gamma0;
  const int n = s.model.n();
  return {HeisElement{Vec::Constant(n, 0.5), Vec::Constant(n, -0.25), 0.3}};
}

Json flatness_stage(const SpecFile& s, const std::vector<BrinkmannPoint>& samples,
                    std::vector<CsvTable>& tables, bool& ok) {
  const auto& c = s.checks;
  const FdOptions opts{c.fd_step, true};
  const auto fl = conformal_flatness(s.model, samples, c.tolerances.flatness, opts);
  const auto par =
      check_parallel(s.model, CoordinateField::d_v(), samples, c.tolerances.parallel, opts);
  ok = par.parallel && par.null_everywhere;

  CsvTable t;
  t.file_name = fl.measure + "_samples.csv";
  t.columns = {"index", "v"};
  for (int i = 0; i < s.model.n(); ++i) t.columns.push_back("x" + std::to_string(i + 1));
  t.columns.push_back("u");
  t.columns.push_back("max_" + fl.measure);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::vector<double> row{static_cast<double>(i)};
    const Vec pc = samples[i].coords();
    for (Eigen::Index j = 0; j < pc.size(); ++j) row.push_back(pc(j));
    row.push_back(fl.per_sample[i]);
    t.rows.push_back(row);
  }
  tables.push_back(std::move(t));
  return {{"conformal_flatness", to_json(fl)},
          {"parallel_null_field", to_json(par)},
          {"status", status(ok)}};
}

Json action_stage(const SpecFile& s, const std::vector<BrinkmannPoint>& samples, bool& ok) {
  const auto& m = s.model;
  const double tol = s.checks.tolerances.similarity;
  Json entries = Json::array();
  ok = true;
  auto record = [&](const std::function<ChartMap()>& make, const std::string& name,
                    double expected) {
    Json e = {{"name", name}, {"expected_factor", expected}};
    try {
      const auto rep = similarity_factor(m, make().renamed(name), samples, tol);
      const bool match =
          rep.factor && std::abs(*rep.factor - expected) <= tol * std::max(1.0, expected);
      e["report"] = to_json(rep);
      e["status"] = status(match);
      ok = ok && match;
    } catch (const Error& err) {
      e["status"] = "error";
      e["error"] = err.what();
      ok = false;
    }
    entries.push_back(e);
  };

  for (double t : {-1.0, -0.3, 0.3, 1.0}) {
    std::ostringstream nm;
    nm << "conf_flow(" << t << ")";
    record([&] { return realize_conf_flow(m, t); }, nm.str(), std::exp(2.0 * t));
  }
  const auto heis = probe_heis(s);
  for (std::size_t i = 0; i < heis.size(); ++i)
    record([&] { return realize_heis(m, heis[i]); }, "heis[" + std::to_string(i) + "]", 1.0);
  for (std::size_t i = 0; i < m.K_generators().size(); ++i)
    record([&] { return realize_K(m, m.K_generators()[i]); }, "K[" + std::to_string(i) + "]",
           1.0);
  if (m.profile().is_constant()) {
    record([&] { return realize_translation_flow(m, 0.7); }, "translation_flow(0.7)", 1.0);
    record([&] { return realize_flip(m, 0.0); }, "flip(0)", 1.0);
  }
  if (s.gamma_hat)
    record([&] { return realize_element(m, *s.gamma_hat); }, "gamma_hat",
           std::exp(2.0 * s.gamma_hat->t_H));

  // Pointwise homomorphism check of the leafwise Heisenberg action.
  double hom = 0.0;
  const HeisElement h1 = heis.front();
  const HeisElement h2{Vec::Constant(m.n(), -0.4), Vec::Constant(m.n(), 0.7), -0.2};
  try {
    const auto lhs = realize_heis(m, heis_mul(h1, h2));
    const auto rhs = compose(realize_heis(m, h1), realize_heis(m, h2));
    for (const auto& p : samples)
      hom = std::max(hom, (lhs.apply(p.coords()) - rhs.apply(p.coords())).cwiseAbs().maxCoeff());
  } catch (const Error& err) {
    hom = std::numeric_limits<double>::infinity();
  }
  const double hom_tol = 1e-8;
  ok = ok && hom <= hom_tol;
  return {{"similarities", entries},
          {"homomorphism", {{"max_error", std::isfinite(hom) ? Json(hom) : Json(nullptr)},
                            {"tolerance", hom_tol},
                            {"status", status(hom <= hom_tol)}}},
          {"tolerance", tol},
          {"status", status(ok)}};
}

Json quotient_stage(const SpecFile& s, std::vector<CsvTable>& tables, bool& ok) {
  ok = false;
  if (!s.has_gamma) return {{"status", "fail"}, {"reason", "spec has no gamma section"}};
  const auto gamma = *s.gamma();
  const auto& m = s.model;
  const auto& c = s.checks;
  Json out;
  const auto validation = validate_gamma(gamma);
  out["validation"] = to_json(validation);

  bool proper_ok = false;
  try {
    const Mat n0 = malcev_closure(gamma.gamma0);
    const auto pr = properness_check(m, n0.cols() ? n0 : Mat(2 * m.n() + 1, 0), gamma.gamma_hat,
                                     c.grid, c.tolerances.transversality);
    out["properness"] = to_json(pr);
    proper_ok = pr.verdict == ProperVerdict::pass;
    CsvTable t{"transversality.csv", {"t", "d"}, {}};
    for (std::size_t i = 0; i < pr.t_values.size(); ++i)
      t.rows.push_back({pr.t_values[i], pr.d_values[i]});
    tables.push_back(std::move(t));
  } catch (const Error& e) {
    out["properness"] = {{"verdict", "fail"}, {"reason", e.what()}};
  }

  bool lattice_ok = false;
  if (gamma.gamma_hat && !gamma.gamma0.empty()) {
    Mat cm(2 * m.n() + 1, static_cast<Eigen::Index>(gamma.gamma0.size()));
    for (std::size_t i = 0; i < gamma.gamma0.size(); ++i)
      cm.col(static_cast<Eigen::Index>(i)) = heis_log(gamma.gamma0[i]).coords();
    const Mat a = automorphism_part(*gamma.gamma_hat).matrix();
    const Mat restriction = cm.completeOrthogonalDecomposition().solve(a * cm);
    const double invariance = max_abs(a * cm - cm * restriction);
    Json lj;
    if (cm.fullPivLu().rank() < cm.cols()) {
      lj = {{"verdict", "inconclusive"}, {"reason", "Γ0 generators are linearly dependent"}};
    } else if (invariance > 1e-8) {
      lj = {{"verdict", "not_preserved"},
            {"reason", "span of Γ0 is not invariant under gamma_hat"},
            {"invariance_residual", invariance}};
    } else {
      try {
        const auto cert = lattice_preservation(restriction, c.tolerances.lattice);
        lj = to_json(cert);
        lattice_ok = cert.verdict == LatticeVerdict::preserved;
      } catch (const Error& e) {
        lj = {{"verdict", "inconclusive"}, {"reason", e.what()}};
      }
    }
    lj["restriction"] = to_json(restriction);
    out["lattice"] = lj;
  } else {
    out["lattice"] = {{"verdict", "inconclusive"},
                      {"reason", "needs gamma_hat and at least one Γ0 generator"}};
  }

  bool orbit_ok = false;
  try {
    const auto orb = orbit_separation(gamma, BrinkmannPoint::origin(m.n()), c.word_length);
    Json oj = to_json(orb);
    oj["threshold"] = kOrbitSeparationThreshold;
    orbit_ok = orb.min_displacement > kOrbitSeparationThreshold;
    out["orbit_separation"] = oj;
  } catch (const Error& e) {
    out["orbit_separation"] = {{"error", e.what()}};
  }
  ok = validation.ok() && proper_ok && lattice_ok && orbit_ok;
  out["status"] = status(ok);
  return out;
}

double cocycle_residual(const GaugeFunction& f) {
  double worst = 0.0;
  const double b = f.b();
  for (int i = 0; i <= 10000; ++i) {
    const double u = -5.0 * std::abs(b) + 10.0 * std::abs(b) * i / 10000.0;
    worst = std::max(worst, std::abs(f(u + b) - f(u) + f.alpha()));
  }
  return worst;
}

Json gauge_stage(const SpecFile& s, const std::vector<BrinkmannPoint>& samples, bool& ok) {
  ok = false;
  const auto& m = s.model;
  const double tol = s.checks.tolerances.gauge;
  if (!s.gamma_hat) return {{"status", "fail"}, {"reason", "spec has no gamma_hat"}};
  Json out;
  try {
    const auto phi = realize_element(m, *s.gamma_hat, "gamma_hat");
    const auto data = measure_gauge_data(m, phi, samples, s.checks.tolerances.similarity);
    out["measured"] = {{"b", data.b},
                       {"alpha", data.alpha},
                       {"similarity_residual", data.similarity_residual}};
    std::vector<ChartMap> elements{phi};
    for (std::size_t i = 0; i < s.gamma0.size(); ++i)
      elements.push_back(realize_heis(m, s.gamma0[i]).renamed("gamma0[" + std::to_string(i) + "]"));
    for (std::size_t i = 0; i < m.K_generators().size(); ++i)
      elements.push_back(realize_K(m, m.K_generators()[i]).renamed("K[" + std::to_string(i) + "]"));

    Json variants = Json::array();
    bool all = true;
    for (auto variant : {GaugeVariant::linear, GaugeVariant::bump}) {
      GaugeSpec g;
      g.b = data.b;
      g.alpha = data.alpha;
      g.variant = variant;
      if (variant == GaugeVariant::bump && g.b < 0.0) {
        g.b = -g.b;
        g.alpha = -g.alpha;
      }
      g.epsilon = 0.25 * std::abs(g.b);
      const auto f = build_gauge(g);
      const auto rep = verify_gauge(m, f, elements, samples, tol);
      Json j = to_json(rep);
      const double cres = cocycle_residual(f);
      j["cocycle_residual"] = cres;
      j["cocycle_tolerance"] = 1e-10;
      const bool pass = rep.all_isometries() && cres < 1e-10;
      j["status"] = status(pass);
      all = all && pass;
      variants.push_back(j);
    }
    out["gauges"] = variants;
    ok = all;
  } catch (const Error& e) {
    out["error"] = e.what();
  }
  out["tolerance"] = tol;
  out["status"] = status(ok);
  return out;
}

struct RunContext {
  const ExampleBuild* example = nullptr;
};

RunResult run_impl(const SpecFile& s, const Stages& stages, const std::string& source,
                   const std::string& input_hash, const RunContext& ctx) {
  RunResult r;
  const auto t_all = Clock::now();
  r.report["tool"] = {{"name", "wavecli"}, {"version", kToolVersion}};
  r.report["input"] = {{"source", source}, {"sha256", input_hash}};
  r.report["settings"] = settings_json(s.checks);
  r.report["model"] = model_json(s.model);
  const auto& c = s.checks;
  const auto samples = sample_points(s.model, c.samples, c.seed, c.sample_half_width);

  Json st = Json::object();
  bool pass = true;
  if (stages.flatness) {
    const auto t0 = Clock::now();
    bool ok = false;
    try {
      st["flatness"] = flatness_stage(s, samples, r.tables, ok);
    } catch (const Error& e) {
      st["flatness"] = {{"status", "fail"}, {"error", e.what()}};
    }
    pass = pass && ok;
    r.timings["flatness"] = seconds_since(t0);
  }
  if (stages.action) {
    const auto t0 = Clock::now();
    bool ok = false;
    st["action"] = action_stage(s, samples, ok);
    pass = pass && ok;
    r.timings["action"] = seconds_since(t0);
  }
  const bool skip_gamma_stages = !s.has_gamma && !stages.explicit_selection;
  const Json skipped = {{"status", "skipped"}, {"reason", "spec has no gamma section"}};
  if (stages.quotient && skip_gamma_stages) {
    st["quotient"] = skipped;
  } else if (stages.quotient) {
    const auto t0 = Clock::now();
    bool ok = false;
    if (ctx.example && !ctx.example->gamma) {
      st["quotient"] = {{"status", "fail"},
                        {"reason", "no invariant lattice: " + ctx.example->lattice.reason},
                        {"lattice", to_json(ctx.example->lattice)}};
    } else {
      st["quotient"] = quotient_stage(s, r.tables, ok);
    }
    pass = pass && ok;
    r.timings["quotient"] = seconds_since(t0);
  }
  if (stages.gauge && skip_gamma_stages) {
    st["gauge"] = skipped;
  } else if (stages.gauge) {
    const auto t0 = Clock::now();
    bool ok = false;
    st["gauge"] = gauge_stage(s, samples, ok);
    pass = pass && ok;
    r.timings["gauge"] = seconds_since(t0);
  }
  r.report["stages"] = st;
  r.report["status"] = status(pass);
  r.pass = pass;
  r.timings["total"] = seconds_since(t_all);
  return r;
}

Json example_json(const ExampleBuild& ex) {
  return {{"name", ex.name},
          {"params", {{"adjusted", ex.params.adjusted}, {"b", ex.params.b}}},
          {"L_eigenvalues", to_json(ex.l_eigenvalues)},
          {"gamma_hat", to_json(ex.gamma_hat)},
          {"n_basis", to_json(ex.n_basis)},
          {"restriction", to_json(ex.restriction)},
          {"lattice", to_json(ex.lattice)},
          {"diagnostics", ex.diagnostics}};
}

}  // namespace

std::string CsvTable::render() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  os << std::setprecision(17);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

RunResult run_checks(const SpecFile& spec, const Stages& stages, const std::string& source,
                     const std::string& input_hash) {
  return run_impl(spec, stages, source, input_hash, {});
}

RunResult run_example(const std::string& name, const ExampleParams& params,
                      const CheckSettings& checks) {
  const auto t0 = Clock::now();
  const auto ex = build_example(name, params);
  SpecFile s{ex.spec, ex.gamma_hat, ex.gamma ? ex.gamma->gamma0 : std::vector<HeisElement>{},
             true, checks};
  Json fingerprint = spec_to_json(s);
  fingerprint["example"] = {{"name", name}, {"adjusted", params.adjusted}, {"b", params.b}};
  RunResult r = run_impl(s, Stages::all(), "example:" + name, sha256_hex(fingerprint.dump()),
                         RunContext{&ex});
  r.report["example"] = example_json(ex);
  r.timings["build"] = seconds_since(t0) - r.timings["total"].get<double>();
  if (!ex.gamma) {
    ExampleParams adj = params;
    adj.adjusted = true;
    RunResult rerun = run_example(name, adj, checks);
    r.report["adjusted_rerun"] = rerun.report;
    r.timings["adjusted_rerun"] = rerun.timings;
    for (auto& t : rerun.tables) {
      t.file_name = "adjusted_" + t.file_name;
      r.tables.push_back(std::move(t));
    }
  }
  return r;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

std::string render_report(const RunResult& r) {
  Json doc = r.report;
  doc["timings"] = r.timings;
  return doc.dump(2) + "\n";
}

}  // namespace pwave
