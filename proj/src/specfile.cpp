#include "pwave/specfile.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace pwave {

std::optional<GammaSpec> SpecFile::gamma() const {
  if (!has_gamma) return std::nullopt;
  return GammaSpec{model, gamma_hat, gamma0};
}

std::string Diagnostic::format() const {
  std::ostringstream os;
  if (line > 0) os << "line " << line << ": ";
  os << (pointer.empty() ? "/" : pointer) << ": " << message;
  return os.str();
}

namespace {

std::string join(const std::vector<Diagnostic>& d) {
  std::ostringstream os;
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "\n" : "") << d[i].format();
  return os.str();
}

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

class LineScanner {
 public:
  explicit LineScanner(const std::string& text) : s_(text) {}

  std::map<std::string, int> run() {
    skip_ws();
    if (pos_ < s_.size()) value("");
    return lines_;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      if (s_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }
  std::string string_token() {
    std::string out;
    ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) {
        const char e = s_[pos_ + 1];
        out += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        pos_ += 2;
        continue;
      }
      out += s_[pos_++];
    }
    ++pos_;
    return out;
  }
  void value(const std::string& path) {
    skip_ws();
    if (pos_ >= s_.size()) return;
    lines_.emplace(path, line_);
    const char c = s_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      while (pos_ < s_.size() && s_[pos_] != '}') {
        const std::string key = string_token();
        skip_ws();
        ++pos_;  // ':'
        value(path + "/" + escape_token(key));
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      int index = 0;
      while (pos_ < s_.size() && s_[pos_] != ']') {
        value(path + "/" + std::to_string(index++));
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
             s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '}')
        ++pos_;
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::map<std::string, int> lines_;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, int> lines) : lines_(std::move(lines)) {}

  void error(const std::string& ptr, const std::string& msg) {
    diags.push_back({ptr, line_of(ptr), msg});
  }
  int line_of(std::string ptr) const {
    while (true) {
      auto it = lines_.find(ptr);
      if (it != lines_.end()) return it->second;
      if (ptr.empty()) return 0;
      ptr = ptr.substr(0, ptr.rfind('/'));
    }
  }
  bool object(const Json& j, const std::string& ptr, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
      error(ptr, "expected an object");
      return false;
    }
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!allowed.count(it.key()))
        error(ptr + "/" + escape_token(it.key()), "unknown key '" + it.key() + "'");
    return true;
  }
  std::optional<double> number(const Json& j, const std::string& ptr) {
    if (!j.is_number()) {
      error(ptr, "expected a number");
      return std::nullopt;
    }
    return j.get<double>();
  }
  std::optional<long long> integer(const Json& j, const std::string& ptr, long long lo,
                                   long long hi) {
    if (!j.is_number_integer()) {
      error(ptr, "expected an integer");
      return std::nullopt;
    }
    const long long v = j.get<long long>();
    if (v < lo || v > hi) {
      error(ptr, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
      return std::nullopt;
    }
    return v;
  }
  std::optional<double> positive(const Json& j, const std::string& ptr) {
    auto v = number(j, ptr);
    if (v && !(*v > 0.0)) {
      error(ptr, "must be positive");
      return std::nullopt;
    }
    return v;
  }
  std::optional<Vec> vector(const Json& j, const std::string& ptr, int len) {
    if (!j.is_array() || static_cast<int>(j.size()) != len) {
      error(ptr, "expected an array of " + std::to_string(len) + " numbers");
      return std::nullopt;
    }
    Vec v(len);
    bool ok = true;
    for (int i = 0; i < len; ++i) {
      auto x = number(j[i], ptr + "/" + std::to_string(i));
      if (x) v(i) = *x;
      else ok = false;
    }
    return ok ? std::optional<Vec>(v) : std::nullopt;
  }
  std::optional<Mat> matrix(const Json& j, const std::string& ptr, int rows, int cols) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows) {
      error(ptr, "expected " + std::to_string(rows) + " rows of " + std::to_string(cols) +
                     " numbers");
      return std::nullopt;
    }
    Mat m(rows, cols);
    bool ok = true;
    for (int i = 0; i < rows; ++i) {
      auto row = vector(j[i], ptr + "/" + std::to_string(i), cols);
      if (row) m.row(i) = row->transpose();
      else ok = false;
    }
    return ok ? std::optional<Mat>(m) : std::nullopt;
  }

  // Reports the worst asymmetric entry of m (stored at ptr) and returns false.
  bool symmetric(const Mat& m, const std::string& ptr, const std::string& what, bool anti) {
    double worst = 0.0;
    int wi = 0, wj = 0;
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) {
        const double d = anti ? std::abs(m(i, j) + m(j, i)) : std::abs(m(i, j) - m(j, i));
        if (d > worst) {
          worst = d;
          wi = i;
          wj = j;
        }
      }
    if (worst <= 1e-12) return true;
    std::ostringstream os;
    os.precision(12);
    os << what << " must be " << (anti ? "antisymmetric" : "symmetric") << ": entry [" << wi
       << "][" << wj << "] = " << m(wi, wj) << " but entry [" << wj << "][" << wi
       << "] = " << m(wj, wi);
    error(ptr + "/" + std::to_string(std::min(wi, wj)) + "/" + std::to_string(std::max(wi, wj)),
          os.str());
    return false;
  }

  std::optional<HeisElement> heis(const Json& j, const std::string& ptr, int n) {
    if (!object(j, ptr, {"alpha", "beta", "z"})) return std::nullopt;
    bool ok = true;
    for (const char* key : {"alpha", "beta", "z"})
      if (!j.contains(key)) {
        error(ptr, std::string("missing key '") + key + "'");
        ok = false;
      }
    if (!ok) return std::nullopt;
    auto a = vector(j["alpha"], ptr + "/alpha", n);
    auto b = vector(j["beta"], ptr + "/beta", n);
    auto z = number(j["z"], ptr + "/z");
    if (!a || !b || !z) return std::nullopt;
    return HeisElement{*a, *b, *z};
  }

  std::vector<Diagnostic> diags;

 private:
  std::map<std::string, int> lines_;
};

std::optional<Profile> read_profile(Reader& r, const Json& j, int n) {
  const std::string ptr = "/model/profile";
  if (!r.object(j, ptr, {"constant", "sampled", "ode_steps"})) return std::nullopt;
  const bool has_c = j.contains("constant"), has_s = j.contains("sampled");
  if (has_c == has_s) {
    r.error(ptr, "exactly one of 'constant' or 'sampled' is required");
    return std::nullopt;
  }
  int ode_steps = 2048;
  if (j.contains("ode_steps")) {
    auto v = r.integer(j["ode_steps"], ptr + "/ode_steps", 16, 1 << 22);
    if (!v) return std::nullopt;
    ode_steps = static_cast<int>(*v);
  }
  if (has_c) {
    auto b = r.matrix(j["constant"], ptr + "/constant", n, n);
    if (!b || !r.symmetric(*b, ptr + "/constant", "profile matrix B", false)) return std::nullopt;
    return Profile::constant(*b);
  }
  const Json& s = j["sampled"];
  if (!s.is_array() || s.size() < 8) {
    r.error(ptr + "/sampled", "expected an array of at least 8 [u, S] nodes");
    return std::nullopt;
  }
  std::vector<ProfileNode> nodes;
  bool ok = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::string np = ptr + "/sampled/" + std::to_string(i);
    if (!s[i].is_array() || s[i].size() != 2) {
      r.error(np, "expected a pair [u, S]");
      ok = false;
      continue;
    }
    auto u = r.number(s[i][0], np + "/0");
    auto m = r.matrix(s[i][1], np + "/1", n, n);
    if (!u || !m || !r.symmetric(*m, np + "/1", "profile sample S", false)) {
      ok = false;
      continue;
    }
    nodes.push_back({*u, *m});
  }
  if (!ok) return std::nullopt;
  try {
    return Profile::sampled(std::move(nodes), ode_steps);
  } catch (const Error& e) {
    r.error(ptr + "/sampled", e.what());
    return std::nullopt;
  }
}

void read_checks(Reader& r, const Json& j, CheckSettings& c) {
  const std::string ptr = "/checks";
  if (!r.object(j, ptr,
                {"tolerances", "grids", "samples", "seed", "word_length", "fd_step",
                 "sample_half_width"}))
    return;
  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    const std::string tp = ptr + "/tolerances";
    if (r.object(t, tp,
                 {"flatness", "parallel", "similarity", "gauge", "lattice", "transversality"})) {
      auto set = [&](const char* key, double& field) {
        if (!t.contains(key)) return;
        if (auto v = r.positive(t[key], tp + "/" + key)) field = *v;
      };
      set("flatness", c.tolerances.flatness);
      set("parallel", c.tolerances.parallel);
      set("similarity", c.tolerances.similarity);
      set("gauge", c.tolerances.gauge);
      set("lattice", c.tolerances.lattice);
      set("transversality", c.tolerances.transversality);
    }
  }
  if (j.contains("grids")) {
    const Json& g = j["grids"];
    const std::string gp = ptr + "/grids";
    if (r.object(g, gp, {"transversality"}) && g.contains("transversality")) {
      const Json& t = g["transversality"];
      const std::string tp = gp + "/transversality";
      if (r.object(t, tp, {"t_min", "t_max", "count"})) {
        if (t.contains("t_min"))
          if (auto v = r.number(t["t_min"], tp + "/t_min")) c.grid.t_min = *v;
        if (t.contains("t_max"))
          if (auto v = r.number(t["t_max"], tp + "/t_max")) c.grid.t_max = *v;
        if (t.contains("count"))
          if (auto v = r.integer(t["count"], tp + "/count", 2, 10000000))
            c.grid.count = static_cast<int>(*v);
        if (!(c.grid.t_max > c.grid.t_min)) r.error(tp, "t_max must exceed t_min");
      }
    }
  }
  if (j.contains("samples"))
    if (auto v = r.integer(j["samples"], ptr + "/samples", 1, 1000000))
      c.samples = static_cast<int>(*v);
  if (j.contains("seed"))
    if (auto v = r.integer(j["seed"], ptr + "/seed", 0, std::numeric_limits<long long>::max()))
      c.seed = static_cast<std::uint64_t>(*v);
  if (j.contains("word_length"))
    if (auto v = r.integer(j["word_length"], ptr + "/word_length", 1, 12))
      c.word_length = static_cast<int>(*v);
  if (j.contains("fd_step"))
    if (auto v = r.positive(j["fd_step"], ptr + "/fd_step")) {
      if (*v <= 1e-8) r.error(ptr + "/fd_step", "finite-difference step must exceed 1e-8");
      else c.fd_step = *v;
    }
  if (j.contains("sample_half_width"))
    if (auto v = r.positive(j["sample_half_width"], ptr + "/sample_half_width"))
      c.sample_half_width = *v;
}

}  // namespace

SpecError::SpecError(std::vector<Diagnostic> diagnostics)
    : Error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::map<std::string, int> json_pointer_lines(const std::string& text) {
  return LineScanner(text).run();
}

SpecFile parse_spec(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
    throw SpecError({{"", line, std::string("JSON syntax error: ") + e.what()}});
  }
  Reader r(json_pointer_lines(text));
  auto fail_if_any = [&] {
    if (!r.diags.empty()) throw SpecError(r.diags);
  };

  if (!r.object(root, "", {"model", "gamma", "checks"})) fail_if_any();
  if (!root.contains("model")) r.error("", "missing key 'model'");
  fail_if_any();

  const Json& m = root["model"];
  if (!r.object(m, "/model", {"n", "profile", "F", "K"})) fail_if_any();
  if (!m.contains("n")) r.error("/model", "missing key 'n'");
  if (!m.contains("profile")) r.error("/model", "missing key 'profile'");
  fail_if_any();
  auto n_opt = r.integer(m["n"], "/model/n", 1, 64);
  fail_if_any();
  const int n = static_cast<int>(*n_opt);

  auto profile = read_profile(r, m["profile"], n);
  Mat f = Mat::Zero(n, n);
  if (m.contains("F")) {
    if (auto fm = r.matrix(m["F"], "/model/F", n, n)) {
      if (r.symmetric(*fm, "/model/F", "F", true)) f = *fm;
    }
  }
  std::vector<Mat> ks;
  if (m.contains("K")) {
    if (!m["K"].is_array()) {
      r.error("/model/K", "expected an array of n x n matrices");
    } else {
      for (std::size_t i = 0; i < m["K"].size(); ++i)
        if (auto k = r.matrix(m["K"][i], "/model/K/" + std::to_string(i), n, n)) ks.push_back(*k);
    }
  }
  fail_if_any();

  // Invariants of the model.
  std::vector<Mat> profile_values;
  if (profile->is_constant()) profile_values.push_back(profile->constant_value());
  else
    for (const auto& node : profile->nodes()) profile_values.push_back(node.S);
  if (profile->is_constant()) {
    const Mat& b = profile->constant_value();
    const double c = max_abs(f * b - b * f);
    if (c > 1e-9)
      r.error("/model/F", "F must commute with the constant profile B (|[F, B]| = " +
                              std::to_string(c) + ")");
  }
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const std::string kp = "/model/K/" + std::to_string(i);
    if (!is_orthogonal(ks[i], 1e-10)) {
      r.error(kp, "K generator is not orthogonal");
      continue;
    }
    double dev = 0.0;
    for (const auto& s : profile_values) dev = std::max(dev, max_abs(ks[i] * s * ks[i].transpose() - s));
    if (dev > 1e-9)
      r.error(kp, "K generator does not preserve the profile (|k S k^T - S| = " +
                      std::to_string(dev) + ")");
    if (max_abs(ks[i] * f - f * ks[i]) > 1e-10) r.error(kp, "K generator does not commute with F");
  }
  fail_if_any();

  std::optional<ModelSpec> model;
  try {
    model = ModelSpec::from_profile(*profile, f, ks);
  } catch (const Error& e) {
    r.error("/model", e.what());
    fail_if_any();
  }

  SpecFile out{*model, std::nullopt, {}, false, {}};
  if (root.contains("gamma")) {
    const Json& g = root["gamma"];
    out.has_gamma = true;
    if (r.object(g, "/gamma", {"gamma_hat", "gamma0"})) {
      if (g.contains("gamma_hat")) {
        const Json& gh = g["gamma_hat"];
        const std::string gp = "/gamma/gamma_hat";
        if (r.object(gh, gp, {"t_H", "t_L", "k", "x"})) {
          double t_H = 0.0, t_L = 0.0;
          Mat k = Mat::Identity(n, n);
          HeisElement x = HeisElement::identity(n);
          bool ok = true;
          if (gh.contains("t_H")) {
            if (auto v = r.number(gh["t_H"], gp + "/t_H")) t_H = *v;
            else ok = false;
          }
          if (gh.contains("t_L")) {
            if (auto v = r.number(gh["t_L"], gp + "/t_L")) t_L = *v;
            else ok = false;
          }
          if (gh.contains("k")) {
            if (auto v = r.matrix(gh["k"], gp + "/k", n, n)) k = *v;
            else ok = false;
          }
          if (gh.contains("x")) {
            if (auto v = r.heis(gh["x"], gp + "/x", n)) x = *v;
            else ok = false;
          }
          if (ok) {
            try {
              out.gamma_hat = make_conf_element(model->L(), t_H, t_L, k, x);
            } catch (const Error& e) {
              r.error(gp + "/k", e.what());
            }
          }
        }
      }
      if (g.contains("gamma0")) {
        if (!g["gamma0"].is_array()) {
          r.error("/gamma/gamma0", "expected an array of Heisenberg elements");
        } else {
          for (std::size_t i = 0; i < g["gamma0"].size(); ++i)
            if (auto h = r.heis(g["gamma0"][i], "/gamma/gamma0/" + std::to_string(i), n))
              out.gamma0.push_back(*h);
        }
      }
    }
  }
  if (root.contains("checks")) read_checks(r, root["checks"], out.checks);
  fail_if_any();

  if (out.has_gamma) {
    const auto v = validate_gamma(*out.gamma());
    for (const auto& issue : v.issues) r.error("/gamma/gamma0", issue);
    fail_if_any();
  }
  return out;
}

SpecFile load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return parse_spec(ss.str());
}

Json spec_to_json(const SpecFile& spec) {
  const ModelSpec& m = spec.model;
  const Profile& p = m.profile();
  Json profile;
  if (p.is_constant()) {
    profile["constant"] = to_json(p.constant_value());
  } else {
    Json nodes = Json::array();
    for (const auto& node : p.nodes()) nodes.push_back({node.u, to_json(node.S)});
    profile["sampled"] = nodes;
    profile["ode_steps"] = p.ode_steps();
  }
  Json ks = Json::array();
  for (const auto& k : m.K_generators()) ks.push_back(to_json(k));
  Json doc = {{"model", {{"n", m.n()}, {"profile", profile}, {"F", to_json(m.F())}, {"K", ks}}}};
  if (spec.has_gamma) {
    Json g = Json::object();
    if (spec.gamma_hat) g["gamma_hat"] = to_json(*spec.gamma_hat);
    Json g0 = Json::array();
    for (const auto& h : spec.gamma0) g0.push_back(to_json(h));
    g["gamma0"] = g0;
    doc["gamma"] = g;
  }
  const auto& c = spec.checks;
  doc["checks"] = {
      {"tolerances",
       {{"flatness", c.tolerances.flatness},
        {"parallel", c.tolerances.parallel},
        {"similarity", c.tolerances.similarity},
        {"gauge", c.tolerances.gauge},
        {"lattice", c.tolerances.lattice},
        {"transversality", c.tolerances.transversality}}},
      {"grids",
       {{"transversality",
         {{"t_min", c.grid.t_min}, {"t_max", c.grid.t_max}, {"count", c.grid.count}}}}},
      {"samples", c.samples},
      {"seed", c.seed},
      {"word_length", c.word_length},
      {"fd_step", c.fd_step},
      {"sample_half_width", c.sample_half_width}};
  return doc;
}

SpecFile spec_from_gamma(const GammaSpec& gamma, const CheckSettings& checks) {
  return SpecFile{gamma.spec, gamma.gamma_hat, gamma.gamma0, true, checks};
}

}  // namespace pwave
