#include "pwave/conformal_group.hpp"

#include "pwave/expm.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pwave {
namespace {

void require_same_group(const ConfGroupElement& g1, const ConfGroupElement& g2) {
  require_dim(g1.n() == g2.n(), "group operation: dimension mismatch");
  if (g1.L != g2.L && (!g1.L || !g2.L || g1.L->matrix() != g2.L->matrix()))
    throw PreconditionError("group operation: elements belong to different models (L differs)");
}

}  // namespace

ConfGroupElement make_conf_element(std::shared_ptr<const Derivation> L, double t_H, double t_L,
                                   const Mat& k, const HeisElement& x) {
  if (!L) throw PreconditionError("conformal group element requires a generator L");
  const int n = L->n();
  require_dim(x.n() == n, "conformal group element: Heis part has wrong dimension");
  require_dim(k.rows() == n && k.cols() == n, "conformal group element: k must be n x n");
  const auto rho = HeisAutomorphism::from_orthogonal(k);
  const Mat& l = L->matrix();
  if (max_abs(rho.matrix() * l - l * rho.matrix()) > 1e-10)
    throw PreconditionError("conformal group element: rho(k) does not commute with L");
  return {t_H, t_L, k, x, std::move(L)};
}

ConfGroupElement conf_identity(std::shared_ptr<const Derivation> L) {
  const int n = L->n();
  return {0.0, 0.0, Mat::Identity(n, n), HeisElement::identity(n), std::move(L)};
}

ConfGroupElement conf_from_heis(std::shared_ptr<const Derivation> L, const HeisElement& x) {
  auto g = conf_identity(std::move(L));
  require_dim(x.n() == g.n(), "conformal group element: Heis part has wrong dimension");
  g.x = x;
  return g;
}

HeisAutomorphism automorphism_part(const ConfGroupElement& g) {
  const int n = g.n();
  const Mat h = Derivation::homothety(n).matrix();
  const Mat a = expm(g.t_H * h + g.t_L * g.L->matrix());
  return HeisAutomorphism(a).compose(HeisAutomorphism::from_orthogonal(g.k));
}

ConfGroupElement group_mul(const ConfGroupElement& g1, const ConfGroupElement& g2) {
  require_same_group(g1, g2);
  const auto a1 = automorphism_part(g1);
  ConfGroupElement r = g1;
  r.t_H = g1.t_H + g2.t_H;
  r.t_L = g1.t_L + g2.t_L;
  r.k = g1.k * g2.k;
  r.x = heis_mul(g1.x, a1.apply(g2.x));
  return r;
}

ConfGroupElement group_inv(const ConfGroupElement& g) {
  ConfGroupElement r = g;
  r.t_H = -g.t_H;
  r.t_L = -g.t_L;
  r.k = g.k.transpose();
  r.x = automorphism_part(r).apply(heis_inv(g.x));
  return r;
}

ConfGroupElement group_pow(const ConfGroupElement& g, long k) {
  ConfGroupElement base = k < 0 ? group_inv(g) : g;
  ConfGroupElement r = conf_identity(g.L);
  for (long i = 0; i < std::labs(k); ++i) r = group_mul(r, base);
  return r;
}

Mat adjoint(const ConfGroupElement& g) {
  const int n = g.n();
  const auto lx = heis_log(g.x);
  // ad_X(Y) = [X, Y] only touches the center: z += X.a+ . Y.a- - Y.a+ . X.a-
  Mat ad_x = Mat::Identity(2 * n + 1, 2 * n + 1);
  ad_x.block(2 * n, 0, 1, n) = -lx.a_minus.transpose();
  ad_x.block(2 * n, n, 1, n) = lx.a_plus.transpose();
  return ad_x * automorphism_part(g).matrix();
}

double group_distance(const ConfGroupElement& g1, const ConfGroupElement& g2) {
  require_same_group(g1, g2);
  double d = std::max(std::abs(g1.t_H - g2.t_H), std::abs(g1.t_L - g2.t_L));
  d = std::max(d, max_abs(g1.k - g2.k));
  return std::max(d, log_distance(g1.x, g2.x));
}

bool is_identity(const ConfGroupElement& g, double tol) {
  return group_distance(g, conf_identity(g.L)) <= tol;
}

HeisElement conjugate_to_linear(const ConfGroupElement& g) {
  const int n = g.n();
  const auto a = automorphism_part(g);
  for (const auto& ev : sorted_eigenvalues(a.matrix())) {
    if (std::abs(ev - 1.0) <= 1e-9) {
      std::ostringstream os;
      os << "conjugate_to_linear: automorphism part has eigenvalue " << ev.real()
         << (ev.imag() >= 0 ? "+" : "") << ev.imag()
         << "i equal to 1 (fixed-point lemma not applicable)";
      throw PreconditionError(os.str());
    }
  }
  // Abelianized equation (a_bar - I) x1_bar = x_bar.
  const Mat a_bar = a.matrix().topLeftCorner(2 * n, 2 * n);
  Vec x_bar(2 * n);
  x_bar << g.x.alpha, g.x.beta;
  const Vec x1_bar = (a_bar - Mat::Identity(2 * n, 2 * n)).fullPivLu().solve(x_bar);
  HeisElement x1{x1_bar.head(n), x1_bar.tail(n), 0.0};

  // Remaining defect w = x1 x a(x1^-1) is central; fix it with z1, (1 - a_z) z1 = -w.
  const HeisElement w = heis_mul(heis_mul(x1, g.x), a.apply(heis_inv(x1)));
  const double a_z = a.matrix()(2 * n, 2 * n);
  const double z1 = -w.z / (1.0 - a_z);
  return heis_mul(x1, HeisElement::center(n, z1));
}

std::string to_string(ContractionVerdict v) {
  switch (v) {
    case ContractionVerdict::contracting: return "contracting";
    case ContractionVerdict::bounded: return "bounded";
    case ContractionVerdict::diverging: return "diverging";
  }
  return "unknown";
}

ContractionReport contraction_test(const ConfGroupElement& g, const ConfGroupElement& h,
                                   int k_max) {
  require_same_group(g, h);
  ContractionReport report;
  report.norms.reserve(static_cast<std::size_t>(std::max(k_max, 0)) + 1);
  const auto g_inv = group_inv(g);
  ConfGroupElement current = h;
  report.norms.push_back(log_norm(current.x));
  for (int k = 1; k <= k_max; ++k) {
    current = group_mul(group_mul(g, current), g_inv);
    report.norms.push_back(log_norm(current.x));
  }
  const auto [lo, hi] = std::minmax_element(report.norms.begin(), report.norms.end());
  report.min_norm = *lo;
  report.max_norm = *hi;
  const double first = report.norms.front();
  const double last = report.norms.back();
  if (first > 0.0 && last < 1e-6 * first) report.verdict = ContractionVerdict::contracting;
  else if (first > 0.0 && last > 1e6 * first) report.verdict = ContractionVerdict::diverging;
  else report.verdict = ContractionVerdict::bounded;
  return report;
}

}  // namespace pwave
