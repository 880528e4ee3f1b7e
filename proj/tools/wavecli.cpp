#include "pwave/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace {

using namespace pwave;

enum Exit { kPass = 0, kCheckFailure = 1, kInputError = 2, kIoError = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_positive(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v > 0.0) || !std::isfinite(v))
    throw InputError(what + ": expected a positive number, got '" + text + "'");
  return v;
}

double* tolerance_field(Tolerances& t, const std::string& name) {
  static const std::map<std::string, double Tolerances::*> fields = {
      {"flatness", &Tolerances::flatness},     {"parallel", &Tolerances::parallel},
      {"similarity", &Tolerances::similarity}, {"gauge", &Tolerances::gauge},
      {"lattice", &Tolerances::lattice},       {"transversality", &Tolerances::transversality}};
  auto it = fields.find(name);
  return it == fields.end() ? nullptr : &(t.*(it->second));
}

void apply_env(CheckSettings& c) {
  for (const char* name : {"flatness", "similarity", "gauge", "parallel", "lattice"}) {
    std::string var = std::string("WAVECLI_TOL_") + name;
    for (auto& ch : var) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (const char* v = std::getenv(var.c_str())) *tolerance_field(c.tolerances, name) =
        parse_positive(v, var);
  }
}

struct CommonFlags {
  std::vector<std::string> tol;
  std::string grid;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::string out;

  void add_to(CLI::App* app) {
    app->add_option("--tol", tol,
                    "Tolerance override NAME=VALUE (flatness, parallel, similarity, gauge, "
                    "lattice, transversality) or a bare VALUE for all");
    app->add_option("--grid", grid, "Transversality grid T_MIN:T_MAX:COUNT");
    app->add_option("--samples", samples, "Number of sample points")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Seed of the sample sequence");
    app->add_option("--out", out, "Directory for report.json and CSV tables");
  }

  void apply(CheckSettings& c) const {
    for (const auto& item : tol) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        const double v = parse_positive(item, "--tol");
        for (const char* name :
             {"flatness", "parallel", "similarity", "gauge", "lattice", "transversality"})
          *tolerance_field(c.tolerances, name) = v;
        continue;
      }
      const std::string name = item.substr(0, eq);
      double* field = tolerance_field(c.tolerances, name);
      if (!field) throw InputError("--tol: unknown tolerance '" + name + "'");
      *field = parse_positive(item.substr(eq + 1), "--tol " + name);
    }
    if (!grid.empty()) {
      const auto a = grid.find(':');
      const auto b = grid.find(':', a == std::string::npos ? a : a + 1);
      if (a == std::string::npos || b == std::string::npos)
        throw InputError("--grid: expected T_MIN:T_MAX:COUNT, got '" + grid + "'");
      try {
        std::size_t u1 = 0, u2 = 0, u3 = 0;
        const std::string s1 = grid.substr(0, a), s2 = grid.substr(a + 1, b - a - 1),
                          s3 = grid.substr(b + 1);
        c.grid.t_min = std::stod(s1, &u1);
        c.grid.t_max = std::stod(s2, &u2);
        c.grid.count = std::stoi(s3, &u3);
        if (u1 != s1.size() || u2 != s2.size() || u3 != s3.size()) throw std::exception();
      } catch (const std::exception&) {
        throw InputError("--grid: expected T_MIN:T_MAX:COUNT, got '" + grid + "'");
      }
      if (!(c.grid.t_max > c.grid.t_min) || c.grid.count < 2)
        throw InputError("--grid: need T_MAX > T_MIN and COUNT >= 2");
    }
    if (samples) c.samples = *samples;
    if (seed) c.seed = *seed;
  }
};

int emit(const RunResult& r, const std::string& out) {
  const std::string text = render_report(r);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) {
      std::cerr << "error: cannot create '" << out << "': " << ec.message() << "\n";
      return kIoError;
    }
    auto write = [&](const std::string& name, const std::string& body) {
      const auto path = std::filesystem::path(out) / name;
      std::ofstream f(path, std::ios::binary);
      f << body;
      if (!f) throw IoError("cannot write '" + path.string() + "'");
    };
    try {
      write("report.json", text);
      for (const auto& t : r.tables) write(t.file_name, t.render());
    } catch (const IoError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kIoError;
    }
    std::cout << "status: " << (r.pass ? "pass" : "fail") << "\n"
              << "report: " << (std::filesystem::path(out) / "report.json").string() << "\n";
  }
  return r.pass ? kPass : kCheckFailure;
}

int report_spec_error(const SpecError& e, const std::string& path) {
  for (const auto& d : e.diagnostics()) std::cerr << path << ":" << d.format() << "\n";
  return kInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal plane-wave verification tool"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Validate a model-spec file");
  validate->add_option("path", validate_path, "Spec file")->required();

  std::string example_name;
  bool alpha_adjusted = false;
  double b = 1.0;
  CommonFlags example_flags;
  auto* example = app.add_subcommand("example", "Run the full pipeline on a bundled example");
  example->add_option("name", example_name, "cw4 | example1 | example2")->required();
  example->add_flag("--alpha-adjusted", alpha_adjusted,
                    "Use the time scale for which the hyperbolic pair has integer trace");
  example->add_option("--b", b, "Profile constant of example2 (b > 0)");
  example_flags.add_to(example);

  std::string check_path;
  bool f_flat = false, f_action = false, f_quot = false, f_gauge = false;
  CommonFlags check_flags;
  auto* check = app.add_subcommand("check", "Run selected stages on a spec file");
  check->add_option("path", check_path, "Spec file")->required();
  check->add_flag("--flatness", f_flat, "Conformal flatness and parallel null field");
  check->add_flag("--action", f_action, "Similarity certification of chart realizations");
  check->add_flag("--quotient", f_quot, "Properness, lattice and orbit separation");
  check->add_flag("--gauge", f_gauge, "Conformal gauge of gamma_hat");
  check_flags.add_to(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (*validate) {
      load_spec(validate_path);
      std::cout << "valid: " << validate_path << "\n";
      return kPass;
    }
    if (*example) {
      if (example_name != "cw4" && example_name != "example1" && example_name != "example2") {
        std::cerr << "error: unknown example '" << example_name
                  << "' (expected cw4, example1, example2)\n";
        return kInputError;
      }
      if (!(b > 0.0)) {
        std::cerr << "error: --b must be positive\n";
        return kInputError;
      }
      CheckSettings c;
      apply_env(c);
      example_flags.apply(c);
      return emit(run_example(example_name, {alpha_adjusted, b}, c), example_flags.out);
    }
    if (*check) {
      SpecFile s = [&] {
        try {
          return load_spec(check_path);
        } catch (const SpecError& e) {
          report_spec_error(e, check_path);
          throw;
        }
      }();
      apply_env(s.checks);
      check_flags.apply(s.checks);
      Stages st{f_flat, f_action, f_quot, f_gauge, true};
      if (!f_flat && !f_action && !f_quot && !f_gauge) st = Stages::all();
      std::ifstream in(check_path, std::ios::binary);
      std::ostringstream raw;
      raw << in.rdbuf();
      const auto source = std::filesystem::path(check_path).filename().string();
      return emit(run_checks(s, st, source, sha256_hex(raw.str())), check_flags.out);
    }
  } catch (const SpecError& e) {
    if (*validate) return report_spec_error(e, validate_path);
    return kInputError;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailure;
  }
  return kInputError;
}
