#include "pwave/quotient.hpp"

#include "pwave/expm.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace pwave {
namespace {

Mat orthonormalize(const Mat& m) {
  Eigen::HouseholderQR<Mat> qr(m);
  return qr.householderQ() * Mat::Identity(m.rows(), m.cols());
}

int numeric_rank(const Mat& m, double rel_tol = 1e-10) {
  if (m.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * std::max(1.0, s(0))) ++r;
  return r;
}

double singular_product(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  double p = 1.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) p *= svd.singularValues()(i);
  return p;
}

Mat log_matrix(const std::vector<HeisElement>& gens, int n) {
  Mat c(2 * n + 1, static_cast<Eigen::Index>(gens.size()));
  for (std::size_t i = 0; i < gens.size(); ++i) c.col(i) = heis_log(gens[i]).coords();
  return c;
}

// Integer coordinates of target in the columns of c, or nullopt.
std::optional<Vec> integer_coordinates(const Mat& c, const Vec& target, double tol) {
  if (c.cols() == 0) {
    if (target.cwiseAbs().maxCoeff() <= tol) return Vec(0);
    return std::nullopt;
  }
  const Vec m = c.completeOrthogonalDecomposition().solve(target);
  if ((c * m - target).cwiseAbs().maxCoeff() > tol * std::max(1.0, target.cwiseAbs().maxCoeff()))
    return std::nullopt;
  const Vec r = m.array().round().matrix();
  if ((m - r).cwiseAbs().maxCoeff() > tol * std::max(1.0, m.cwiseAbs().maxCoeff()))
    return std::nullopt;
  return r;
}

bool is_integral(const Mat& m, double tol) {
  return (m - m.array().round().matrix()).cwiseAbs().maxCoeff() <= tol;
}

// Orthonormal basis of the largest L-invariant subspace of span(q) (q orthonormal).
Mat maximal_invariant_subspace(const Mat& q, const Mat& l, double tol) {
  Mat cur = q;
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
  while (cur.cols() > 0) {
    const Mat leak = l * cur - cur * (cur.transpose() * l * cur);
    Eigen::JacobiSVD<Mat> svd(leak, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    Eigen::Index keep = 0;
    for (Eigen::Index i = 0; i < cur.cols(); ++i)
      if (i >= s.size() || s(i) <= tol * scale) ++keep;
    if (keep == cur.cols()) return cur;
    cur = orthonormalize(cur * svd.matrixV().rightCols(keep));
  }
  return cur;
}

}  // namespace

GammaValidation validate_gamma(const GammaSpec& gamma, double tol) {
  GammaValidation out;
  const int n = gamma.spec.n();
  for (const auto& g : gamma.gamma0)
    require_dim(g.n() == n, "GammaSpec: Γ0 generator dimension does not match the model");
  const auto& g0 = gamma.gamma0;
  for (std::size_t i = 0; i < g0.size(); ++i)
    for (std::size_t j = i + 1; j < g0.size(); ++j)
      out.max_commutator = std::max(out.max_commutator, log_norm(heis_commutator(g0[i], g0[j])));
  if (out.max_commutator > tol) {
    out.abelian = false;
    std::ostringstream os;
    os << "Γ0 is not abelian: commutator norm " << out.max_commutator;
    out.issues.push_back(os.str());
  }

  const Mat c = log_matrix(g0, n);
  if (gamma.gamma_hat && !g0.empty()) {
    const auto& gh = *gamma.gamma_hat;
    if (gh.n() != n) throw DimensionError("GammaSpec: gamma_hat dimension does not match the model");
    const auto gh_inv = group_inv(gh);
    for (std::size_t i = 0; i < g0.size(); ++i) {
      for (int dir = 0; dir < 2; ++dir) {
        const auto& left = dir == 0 ? gh : gh_inv;
        const auto& right = dir == 0 ? gh_inv : gh;
        const auto conj = group_mul(group_mul(left, conf_from_heis(gh.L, g0[i])), right);
        const Vec target = heis_log(conj.x).coords();
        const Vec m = c.completeOrthogonalDecomposition().solve(target);
        const double res = std::max((c * m - target).cwiseAbs().maxCoeff(),
                                    (m - m.array().round().matrix()).cwiseAbs().maxCoeff());
        out.normalization_residual = std::max(out.normalization_residual, res);
      }
    }
    if (out.normalization_residual > tol) {
      out.normalized = false;
      std::ostringstream os;
      os << "gamma_hat does not normalize Γ0: residual " << out.normalization_residual;
      out.issues.push_back(os.str());
    }
  }

  // Γ0 ∩ Z: a nonzero integer vector m with zero a-projection of c m.
  const Eigen::Index r = c.cols();
  if (r > 0) {
    const Mat proj = c.topRows(2 * n);
    if (numeric_rank(proj) < r) {
      int bound = 1;
      while (std::pow(2.0 * (bound + 1) + 1.0, static_cast<double>(r)) <= 2e5) ++bound;
      Vec m = Vec::Constant(r, -bound);
      const double scale = std::max(1.0, proj.cwiseAbs().maxCoeff());
      while (true) {
        if (m.cwiseAbs().maxCoeff() > 0 && (proj * m).cwiseAbs().maxCoeff() <= tol * scale) {
          out.center_free = false;
          std::ostringstream os;
          os << "Γ0 meets the center: integer combination (" << m.transpose()
             << ") of generators is central";
          out.issues.push_back(os.str());
          break;
        }
        Eigen::Index k = 0;
        while (k < r && m(k) == bound) m(k++) = -bound;
        if (k == r) break;
        m(k) += 1;
      }
    }
  }
  return out;
}

Mat malcev_closure(const std::vector<HeisElement>& generators, double tol) {
  if (generators.empty()) return Mat(0, 0);
  const int n = generators.front().n();
  std::vector<Vec> basis;
  auto add = [&](Vec v) {
    for (const auto& b : basis) v -= b.dot(v) * b;
    for (const auto& b : basis) v -= b.dot(v) * b;
    const double nv = v.norm();
    if (nv <= tol) return false;
    basis.push_back(v / nv);
    return true;
  };
  for (const auto& g : generators) {
    require_dim(g.n() == n, "malcev_closure: generators of different dimensions");
    add(heis_log(g).coords());
  }
  bool grew = true;
  while (grew) {
    grew = false;
    const auto current = basis;
    for (std::size_t i = 0; i < current.size() && !grew; ++i)
      for (std::size_t j = i + 1; j < current.size() && !grew; ++j) {
        const auto br = bracket(HeisAlgebraElement::from_coords(current[i]),
                                HeisAlgebraElement::from_coords(current[j]));
        if (add(br.coords())) grew = true;
      }
  }
  Mat out(2 * n + 1, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) out.col(i) = basis[i];
  return out;
}

Mat a_plus_basis(int n) {
  Mat a = Mat::Zero(2 * n + 1, n);
  a.topRows(n) = Mat::Identity(n, n);
  return a;
}

std::string to_string(ProperVerdict v) {
  switch (v) {
    case ProperVerdict::pass: return "pass";
    case ProperVerdict::fail: return "fail";
    case ProperVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

PropernessReport properness_check(const ModelSpec& spec, const Mat& n0_basis,
                                  const std::optional<ConfGroupElement>& gamma_hat,
                                  const TransversalityGrid& grid, double threshold) {
  const int n = spec.n();
  const int dim = 2 * n + 1;
  require_dim(n0_basis.rows() == dim, "properness_check: basis vectors must live in heis_{2n+1}");
  if (grid.count < 2 || !(grid.t_max > grid.t_min))
    throw PreconditionError("properness_check: grid needs count >= 2 and t_max > t_min");
  const int k = static_cast<int>(n0_basis.cols());
  if (numeric_rank(n0_basis) < k)
    throw PreconditionError("properness_check: n0 basis is rank-deficient");

  PropernessReport r;
  r.grid = grid;
  r.threshold = threshold;
  r.dim_n0 = k;
  std::vector<std::string> failures;

  r.cond_pL = gamma_hat.has_value() && std::abs(gamma_hat->t_L) > 1e-12;
  if (!r.cond_pL) failures.push_back("(i) p_L(gamma_hat) is trivial");

  if (k == 0) {
    r.cond_intersection_at_0 = r.cond_intersection_d0 = true;
    r.rank_stacked = n;
    r.min_transversality = r.tail_min = 1.0;
    failures.push_back("(iii) dim n0 != n + 1 (n0 is zero)");
    std::ostringstream os;
    for (std::size_t i = 0; i < failures.size(); ++i) os << (i ? "; " : "") << failures[i];
    r.verdict = ProperVerdict::fail;
    r.reason = os.str();
    return r;
  }

  const Mat ap = a_plus_basis(n);
  Mat stacked(dim, k + n);
  stacked << n0_basis, ap;
  r.rank_stacked = numeric_rank(stacked);
  r.cond_intersection_at_0 = r.rank_stacked == std::min(dim, k + n) && k + n <= dim;
  if (!r.cond_intersection_at_0) {
    Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeFullV);
    const Vec null = svd.matrixV().col(svd.matrixV().cols() - 1);
    Vec w = n0_basis * null.head(k);
    if (w.norm() > 0) w /= w.norm();
    r.witness = w;
    failures.push_back("(ii) n0 meets a+ nontrivially");
  }

  r.cond_dim = k == n + 1;
  if (!r.cond_dim) failures.push_back("(iii) dim n0 != n + 1");

  const Mat l = spec.L()->matrix();
  const double dt = (grid.t_max - grid.t_min) / (grid.count - 1);
  auto d_of = [&](const Mat& e) {
    Mat m(dim, e.cols() + n);
    m << e, ap;
    return singular_product(m);
  };
  const Mat e0 = orthonormalize(n0_basis);
  r.cond_intersection_d0 = d_of(e0) > threshold;

  // The L-invariant part of n0 is fixed by e^{tL}; only the remainder moves,
  // and it is stepped in the quotient so that roundoff along the fixed part
  // (possibly a repelling direction) is never amplified.
  const Mat fixed = maximal_invariant_subspace(e0, l, 1e-10);
  const Mat proj = Mat::Identity(dim, dim) - fixed * fixed.transpose();
  Mat moving(dim, 0);
  if (fixed.cols() < k) {
    Eigen::JacobiSVD<Mat> svd(proj * e0, Eigen::ComputeThinU);
    moving = svd.matrixU().leftCols(k - fixed.cols());
  }
  auto span_of = [&](const Mat& mv) {
    Mat e(dim, fixed.cols() + mv.cols());
    e << fixed, mv;
    return e;
  };
  auto advance = [&](const Mat& step, const Mat& mv) {
    if (mv.cols() == 0) return mv;
    return orthonormalize(proj * (step * mv));
  };

  // Reach t_min from 0 in steps of at most dt, then sweep the grid.
  Mat mv = moving;
  const int pre_steps = static_cast<int>(std::ceil(std::abs(grid.t_min) / dt));
  if (pre_steps > 0) {
    const Mat step = expm((grid.t_min / pre_steps) * l);
    for (int i = 0; i < pre_steps; ++i) mv = advance(step, mv);
  }
  const Mat fwd = expm(dt * l);
  const Mat bwd = expm(-dt * l);
  const Mat mv_start = mv;
  r.t_values.reserve(grid.count);
  r.d_values.reserve(grid.count);
  r.min_transversality = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.count; ++i) {
    if (i > 0) mv = advance(fwd, mv);
    const double t = grid.t_min + i * dt;
    const double d = d_of(span_of(mv));
    r.t_values.push_back(t);
    r.d_values.push_back(d);
    if (d < r.min_transversality) {
      r.min_transversality = d;
      r.argmin_t = t;
    }
  }
  // Tails: keep stepping for four grid lengths past each end.
  const int tail_steps = 4 * (grid.count - 1);
  r.tail_min = std::numeric_limits<double>::infinity();
  Mat mf = mv, mb = mv_start;
  for (int i = 0; i < tail_steps; ++i) {
    mf = advance(fwd, mf);
    mb = advance(bwd, mb);
    r.tail_min = std::min({r.tail_min, d_of(span_of(mf)), d_of(span_of(mb))});
  }

  if (!failures.empty()) {
    r.verdict = ProperVerdict::fail;
    std::ostringstream os;
    for (std::size_t i = 0; i < failures.size(); ++i) os << (i ? "; " : "") << failures[i];
    r.reason = os.str();
  } else if (r.cond_intersection_d0 != r.cond_intersection_at_0) {
    r.verdict = ProperVerdict::inconclusive;
    r.reason = "rank test and d(0) disagree on condition (ii)";
  } else if (r.min_transversality <= threshold) {
    r.verdict = ProperVerdict::fail;
    std::ostringstream os;
    os << "(iv) e^{tL} n0 meets a+ near t = " << r.argmin_t;
    r.reason = os.str();
  } else if (r.min_transversality < 10.0 * threshold) {
    r.verdict = ProperVerdict::inconclusive;
    r.reason = "minimum of d(t) is within 10x of the threshold; sampling cannot certify all t";
  } else if (r.tail_min <= threshold) {
    r.verdict = ProperVerdict::inconclusive;
    r.reason = "d(t) decays beyond the sampled grid";
  } else {
    r.verdict = ProperVerdict::pass;
    r.reason = "all conditions hold on the grid and its extended tails";
  }
  return r;
}

std::string to_string(LatticeVerdict v) {
  switch (v) {
    case LatticeVerdict::preserved: return "preserved";
    case LatticeVerdict::not_preserved: return "not_preserved";
    case LatticeVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::vector<double> characteristic_polynomial(const Mat& a) {
  require_dim(a.rows() == a.cols(), "characteristic_polynomial: matrix must be square");
  const Eigen::Index m = a.rows();
  std::vector<double> c(m + 1, 0.0);
  c[0] = 1.0;
  Mat mk = Mat::Zero(m, m);
  for (Eigen::Index k = 1; k <= m; ++k) {
    mk = a * mk + c[k - 1] * Mat::Identity(m, m);
    c[k] = -(a * mk).trace() / static_cast<double>(k);
  }
  return c;
}

LatticeCertificate lattice_preservation(const Mat& a, double tol, std::uint64_t seed) {
  require_dim(a.rows() == a.cols() && a.rows() > 0, "lattice_preservation: matrix must be square");
  const Eigen::Index m = a.rows();
  if (std::abs(a.determinant()) < 1e-12)
    throw PreconditionError("lattice_preservation: matrix is singular");

  LatticeCertificate cert;
  cert.tolerance = tol;
  cert.char_poly = characteristic_polynomial(a);
  int worst = 0;
  for (std::size_t i = 0; i < cert.char_poly.size(); ++i) {
    const double defect = std::abs(cert.char_poly[i] - std::round(cert.char_poly[i]));
    if (defect > cert.max_integrality_defect) {
      cert.max_integrality_defect = defect;
      worst = static_cast<int>(i);
    }
  }
  auto coeff_name = [&](int i) {
    std::ostringstream os;
    os << "coefficient of x^" << (m - i) << " = " << cert.char_poly[i];
    return os.str();
  };
  if (cert.max_integrality_defect > 1e-3) {
    cert.verdict = LatticeVerdict::not_preserved;
    cert.offending_coefficient = worst;
    cert.reason = "characteristic polynomial is not integral: " + coeff_name(worst) +
                  " is not an integer";
    return cert;
  }
  if (cert.max_integrality_defect > tol) {
    cert.verdict = LatticeVerdict::inconclusive;
    cert.offending_coefficient = worst;
    cert.reason = "characteristic polynomial is nearly integral (" + coeff_name(worst) +
                  "); re-run in higher precision";
    return cert;
  }
  if (std::abs(std::abs(std::round(cert.char_poly.back())) - 1.0) > 0.5) {
    cert.verdict = LatticeVerdict::not_preserved;
    cert.offending_coefficient = static_cast<int>(m);
    cert.reason = "determinant is not ±1: " + coeff_name(static_cast<int>(m));
    return cert;
  }

  auto finish = [&](const Mat& basis) {
    const Mat action = basis.fullPivLu().solve(a * basis);
    const Mat rounded = (action.array().round() + 0.0).matrix();  // + 0.0 clears negative zeros
    cert.basis = basis;
    cert.integer_action = rounded;
    cert.verification_residual = (action - rounded).cwiseAbs().maxCoeff();
    Eigen::JacobiSVD<Mat> svd(basis);
    const auto& s = svd.singularValues();
    cert.basis_condition = s(0) / s(s.size() - 1);
    if (cert.verification_residual <= 1e-8) {
      cert.verdict = LatticeVerdict::preserved;
    } else {
      cert.verdict = LatticeVerdict::inconclusive;
      std::ostringstream os;
      os << "basis verification residual " << cert.verification_residual << " exceeds 1e-8";
      cert.reason = os.str();
    }
  };

  if (is_integral(a, 1e-12)) {
    finish(Mat::Identity(m, m));
    if (cert.verdict == LatticeVerdict::preserved) cert.reason = "integer matrix: standard lattice";
    return cert;
  }

  std::vector<Vec> candidates;
  for (Eigen::Index i = 0; i < m; ++i) candidates.push_back(Vec::Unit(m, i));
  candidates.push_back(Vec::Ones(m));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 8; ++i) {
    Vec v(m);
    for (Eigen::Index j = 0; j < m; ++j) v(j) = nd(rng);
    candidates.push_back(v);
  }
  Mat best;
  double best_cond = std::numeric_limits<double>::infinity();
  for (const auto& v0 : candidates) {
    Mat k(m, m);
    Vec v = v0 / v0.norm();
    for (Eigen::Index j = 0; j < m; ++j) {
      k.col(j) = v;
      v = a * v;
    }
    Eigen::JacobiSVD<Mat> svd(k);
    const auto& s = svd.singularValues();
    const double cond = s(m - 1) > 0 ? s(0) / s(m - 1) : std::numeric_limits<double>::infinity();
    if (cond < best_cond) {
      best_cond = cond;
      best = k;
    }
  }
  if (!(best_cond < 1e10)) {
    cert.verdict = LatticeVerdict::inconclusive;
    cert.reason = "characteristic polynomial is integral but no cyclic vector was found "
                  "(matrix not cyclic); rational canonical form is not implemented";
    return cert;
  }
  finish(best);
  if (cert.verdict == LatticeVerdict::preserved)
    cert.reason = "integral characteristic polynomial; cyclic-vector companion basis";
  return cert;
}

bool membership(const ConfGroupElement& g, const GammaSpec& gamma, double tol) {
  const int n = gamma.spec.n();
  if (g.n() != n) return false;
  long k = 0;
  if (gamma.gamma_hat) {
    const auto& gh = *gamma.gamma_hat;
    double ratio = 0.0;
    if (std::abs(gh.t_L) > 1e-12) ratio = g.t_L / gh.t_L;
    else if (std::abs(gh.t_H) > 1e-12) ratio = g.t_H / gh.t_H;
    if (std::abs(ratio - std::round(ratio)) > tol) return false;
    k = std::lround(ratio);
  }
  ConfGroupElement h = g;
  if (k != 0) h = group_mul(group_pow(*gamma.gamma_hat, -k), g);
  if (std::abs(h.t_H) > tol || std::abs(h.t_L) > tol) return false;
  if (max_abs(h.k - Mat::Identity(n, n)) > tol) return false;
  return integer_coordinates(log_matrix(gamma.gamma0, n), heis_log(h.x).coords(), tol).has_value();
}

OrbitReport orbit_separation(const GammaSpec& gamma, const BrinkmannPoint& p, int word_length,
                             long max_words) {
  if (word_length < 1) throw PreconditionError("orbit_separation: word_length must be >= 1");
  const auto& spec = gamma.spec;
  require_dim(p.n() == spec.n(), "orbit_separation: point dimension does not match the model");
  OrbitReport report;
  report.word_length = word_length;

  std::vector<ConfGroupElement> gens;
  std::vector<std::string> names;
  if (gamma.gamma_hat) {
    gens.push_back(*gamma.gamma_hat);
    names.push_back("T");
  }
  for (std::size_t i = 0; i < gamma.gamma0.size(); ++i) {
    gens.push_back(conf_from_heis(spec.L(), gamma.gamma0[i]));
    names.push_back("G" + std::to_string(i + 1));
  }
  const std::size_t m = gens.size();
  if (m == 0) return report;

  // Symmetric set: index 2i is the generator, 2i+1 its inverse.
  std::vector<ConfGroupElement> sym;
  std::vector<std::string> sym_names;
  for (std::size_t i = 0; i < m; ++i) {
    sym.push_back(gens[i]);
    sym.push_back(group_inv(gens[i]));
    sym_names.push_back(names[i]);
    sym_names.push_back(names[i] + "^-1");
  }
  double total = 0.0, level = 2.0 * m;
  for (int l = 1; l <= word_length; ++l) {
    total += level;
    level *= 2.0 * m - 1.0;
  }
  if (total > static_cast<double>(max_words)) {
    std::ostringstream os;
    os << "orbit_separation: " << total << " reduced words exceed the budget of " << max_words;
    throw BudgetError(os.str());
  }

  const Vec pc = p.coords();
  std::vector<int> word;
  std::function<void(const ConfGroupElement&, int)> walk = [&](const ConfGroupElement& w,
                                                               int last) {
    for (int s = 0; s < static_cast<int>(sym.size()); ++s) {
      if (last >= 0 && (s ^ 1) == last) continue;
      const auto next = group_mul(w, sym[s]);
      word.push_back(s);
      ++report.words_enumerated;
      if (is_identity(next, 1e-12)) {
        ++report.identity_words_skipped;
      } else {
        const double d = (realize_element(spec, next).apply(pc) - pc).norm();
        if (d < report.min_displacement) {
          report.min_displacement = d;
          std::ostringstream os;
          for (std::size_t i = 0; i < word.size(); ++i) os << (i ? " " : "") << sym_names[word[i]];
          report.witness_word = os.str();
        }
      }
      if (static_cast<int>(word.size()) < word_length) walk(next, s);
      word.pop_back();
    }
  };
  walk(conf_identity(spec.L()), -1);
  return report;
}

double adjusted_time_scale() { return 0.5 * std::log((3.0 + std::sqrt(5.0)) / 2.0); }

namespace {

Vec real_eigenvector(const Mat& m, double eigenvalue) {
  Eigen::EigenSolver<Mat> es(m);
  Eigen::Index best = -1;
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double g = std::abs(es.eigenvalues()(i) - std::complex<double>(eigenvalue, 0.0));
    if (g < gap) {
      gap = g;
      best = i;
    }
  }
  if (gap > 1e-8) {
    std::ostringstream os;
    os << "no eigenvalue near " << eigenvalue;
    throw PreconditionError(os.str());
  }
  Vec v = es.eigenvectors().col(best).real();
  v /= v.norm();
  // fix the sign: largest-magnitude entry positive
  Eigen::Index idx;
  v.cwiseAbs().maxCoeff(&idx);
  if (v(idx) < 0) v = -v;
  return v;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

ExampleBuild build_example(const std::string& name, const ExampleParams& params) {
  const double s = adjusted_time_scale();
  std::optional<ModelSpec> spec;
  std::vector<double> contracting;
  double t_H = 0.0, t_L = 0.0;
  std::vector<std::string> diag;
  int n = 0;

  if (name == "cw4" || name == "example1") {
    n = 2;
    const double r15 = std::sqrt(15.0);
    Mat b(2, 2);
    b << 6.0, r15, r15, 4.0;
    spec = ModelSpec::cahen_wallach(b, Mat::Zero(2, 2), {-Mat::Identity(2, 2)});
    contracting = {-1.0, -3.0};
    const double t = params.adjusted ? s : 1.0;
    t_H = t;
    t_L = t;
    diag.push_back("T = L + H; gamma_hat = exp(" + fmt(t) + " T)");
  } else if (name == "example2") {
    if (!(params.b > 0.0) || !std::isfinite(params.b))
      throw PreconditionError("example2 requires b > 0 (hyperbolic profile)");
    n = 1;
    spec = ModelSpec::cahen_wallach(Mat::Constant(1, 1, params.b), Mat::Zero(1, 1),
                                    {-Mat::Identity(1, 1)});
    const double rb = std::sqrt(params.b);
    const double alpha = 3.0 / rb;
    contracting = {-rb};
    const double t = params.adjusted ? s : 1.0;
    t_H = t;
    t_L = alpha * t;
    diag.push_back("T = alpha L + H with alpha = 3/sqrt(b) = " + fmt(alpha) +
                   "; gamma_hat = exp(" + fmt(t) + " T)");
    diag.push_back("eigenvectors of L for ±sqrt(b) are proportional to (±sqrt(b), 1) in "
                   "(a+, a-) coordinates");
  } else {
    throw PreconditionError("unknown example '" + name + "' (expected cw4, example1, example2)");
  }

  ExampleBuild out{name,
                   params,
                   *spec,
                   sorted_eigenvalues(spec->L()->matrix()),
                   make_conf_element(spec->L(), t_H, t_L, Mat::Identity(n, n),
                                     HeisElement::identity(n)),
                   Mat(),
                   Mat(),
                   {},
                   std::nullopt,
                   std::move(diag)};

  const Mat l = spec->L()->matrix();
  Mat nb(2 * n + 1, n + 1);
  for (std::size_t i = 0; i < contracting.size(); ++i)
    nb.col(static_cast<Eigen::Index>(i)) = real_eigenvector(l, contracting[i]);
  nb.col(n) = Vec::Unit(2 * n + 1, 2 * n);
  out.n_basis = nb;

  const Mat a = automorphism_part(out.gamma_hat).matrix();
  out.restriction = nb.completeOrthogonalDecomposition().solve(a * nb);
  const double invariance = max_abs(a * nb - nb * out.restriction);
  if (invariance > 1e-9)
    out.diagnostics.push_back("warning: n is not invariant under gamma_hat (residual " +
                              fmt(invariance) + ")");
  out.lattice = lattice_preservation(out.restriction);
  out.diagnostics.push_back("restriction of gamma_hat to n has trace " +
                            fmt(out.restriction.trace()) + "; lattice verdict " +
                            to_string(out.lattice.verdict));

  if (out.lattice.verdict != LatticeVerdict::preserved) {
    out.diagnostics.push_back(
        "integrality obstruction: a unimodular map preserving a lattice has an integral "
        "characteristic polynomial, but " + out.lattice.reason);
    out.diagnostics.push_back(
        "adjusted parameters: keep the ratio t_L/t_H and scale time to s = ln((3+sqrt5)/2)/2 = " +
        fmt(s) + ", so the hyperbolic pair (lambda, 1/lambda) has lambda + 1/lambda = 3");
    return out;
  }

  GammaSpec gamma{*spec, out.gamma_hat, {}};
  for (Eigen::Index j = 0; j < out.lattice.basis.cols(); ++j)
    gamma.gamma0.push_back(
        heis_exp(HeisAlgebraElement::from_coords(nb * out.lattice.basis.col(j))));
  const auto v = validate_gamma(gamma);
  for (const auto& issue : v.issues) out.diagnostics.push_back("warning: " + issue);
  out.gamma = std::move(gamma);
  return out;
}

}  // namespace pwave
