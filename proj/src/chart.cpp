#include "pwave/chart.hpp"

#include "pwave/expm.hpp"

#include <cmath>
#include <sstream>

namespace pwave {

ChartMap::ChartMap(std::string name, int n, Forward forward, Jacobian jacobian)
    : name_(std::move(name)), n_(n), forward_(std::move(forward)), jacobian_(std::move(jacobian)) {}

ChartMap ChartMap::identity(int n) {
  return ChartMap(
      "identity", n, [](const Vec& c) { return c; },
      [n](const Vec&) { return Mat(Mat::Identity(n + 2, n + 2)); });
}

BrinkmannPoint ChartMap::operator()(const BrinkmannPoint& p) const {
  require_dim(p.n() == n_, "chart map: point dimension mismatch");
  return BrinkmannPoint::from_coords(forward_(p.coords()));
}

Mat ChartMap::jacobian_at(const BrinkmannPoint& p) const {
  require_dim(p.n() == n_, "chart map: point dimension mismatch");
  return jacobian_(p.coords());
}

ChartMap ChartMap::renamed(std::string name) const {
  ChartMap copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

ChartMap compose(const ChartMap& outer, const ChartMap& inner) {
  require_dim(outer.n() == inner.n(), "compose: dimension mismatch");
  return ChartMap(
      outer.name() + " o " + inner.name(), outer.n(),
      [outer, inner](const Vec& c) { return outer.apply(inner.apply(c)); },
      [outer, inner](const Vec& c) { return Mat(outer.jacobian(inner.apply(c)) * inner.jacobian(c)); });
}

ChartMap realize_heis(const ModelSpec& spec, const HeisElement& h) {
  const int n = spec.n();
  require_dim(h.n() == n, "realize_heis: element dimension does not match the model");
  Vec data(2 * n);
  data << -h.alpha, h.beta;
  const double c = h.z - 0.5 * h.alpha.dot(h.beta);
  const Profile profile = spec.profile();

  auto state = [profile, data](double u) { return Vec(profile.fundamental(u) * data); };
  auto forward = [n, c, state](const Vec& y) {
    const Vec s = state(y(n + 1));
    const Vec p = s.head(n);
    const Vec q = s.tail(n);
    Vec out = y;
    out(0) = y(0) - p.dot(y.segment(1, n)) - 0.5 * q.dot(p) + c;
    out.segment(1, n) = y.segment(1, n) + q;
    return out;
  };
  auto jacobian = [n, profile, state](const Vec& y) {
    const double u = y(n + 1);
    const Vec s = state(u);
    const Vec p = s.head(n);
    const Vec q = s.tail(n);
    const Vec x = y.segment(1, n);
    const Vec sq = profile.at(u) * q;
    Mat j = Mat::Identity(n + 2, n + 2);
    j.block(0, 1, 1, n) = -p.transpose();
    j(0, n + 1) = -sq.dot(x) - 0.5 * (p.dot(p) + q.dot(sq));
    j.block(1, n + 1, n, 1) = p;
    return j;
  };
  return ChartMap("heis", n, forward, jacobian);
}

ChartMap realize_conf_flow(const ModelSpec& spec, double t_H) {
  const int n = spec.n();
  const double s1 = std::exp(t_H);
  const double s2 = std::exp(2.0 * t_H);
  Vec diag = Vec::Constant(n + 2, s1);
  diag(0) = s2;
  diag(n + 1) = 1.0;
  const Mat j = diag.asDiagonal();
  return ChartMap(
      "conf_flow", n, [diag](const Vec& y) { return Vec(diag.cwiseProduct(y)); },
      [j](const Vec&) { return j; });
}

ChartMap realize_translation_flow(const ModelSpec& spec, double t) {
  const int n = spec.n();
  if (!spec.profile().is_constant())
    throw PreconditionError(
        "realize_translation_flow: only constant (Cahen-Wallach) profiles have the pure "
        "u-translation as an isometry flow");
  return ChartMap(
      "translation_flow", n,
      [n, t](const Vec& y) {
        Vec out = y;
        out(n + 1) += t;
        return out;
      },
      [n](const Vec&) { return Mat(Mat::Identity(n + 2, n + 2)); });
}

ChartMap realize_flip(const ModelSpec& spec, double b) {
  const int n = spec.n();
  const Profile& profile = spec.profile();
  if (!profile.is_constant()) {
    double worst = 0.0;
    int checked = 0;
    for (const auto& node : profile.nodes()) {
      if (!profile.contains(b - node.u)) continue;
      worst = std::max(worst, max_abs(profile.at(b - node.u) - node.S));
      ++checked;
    }
    if (checked == 0 || worst > 1e-9) {
      std::ostringstream os;
      os << "realize_flip: S(-u + b) != S(u) for b = " << b << " (max deviation " << worst
         << " over " << checked << " nodes)";
      throw PreconditionError(os.str());
    }
  }
  Mat j = Mat::Identity(n + 2, n + 2);
  j(0, 0) = -1.0;
  j(n + 1, n + 1) = -1.0;
  return ChartMap(
      "flip", n,
      [n, b](const Vec& y) {
        Vec out = y;
        out(0) = -y(0);
        out(n + 1) = b - y(n + 1);
        return out;
      },
      [j](const Vec&) { return j; });
}

ChartMap realize_K(const ModelSpec& spec, const Mat& k) {
  const int n = spec.n();
  require_dim(k.rows() == n && k.cols() == n, "realize_K: k must be n x n");
  if (!is_orthogonal(k, 1e-10)) throw PreconditionError("realize_K: k is not orthogonal");
  const Profile& profile = spec.profile();
  auto check = [&](const Mat& s) {
    const double dev = max_abs(k * s * k.transpose() - s);
    if (dev > 1e-9) {
      std::ostringstream os;
      os << "realize_K: k S k^T != S (deviation " << dev << ")";
      throw PreconditionError(os.str());
    }
  };
  if (profile.is_constant()) check(profile.constant_value());
  for (const auto& node : profile.nodes()) check(node.S);
  Mat j = Mat::Identity(n + 2, n + 2);
  j.block(1, 1, n, n) = k;
  return ChartMap(
      "K", n,
      [n, k](const Vec& y) {
        Vec out = y;
        out.segment(1, n) = k * y.segment(1, n);
        return out;
      },
      [j](const Vec&) { return j; });
}

ChartMap realize_element(const ModelSpec& spec, const ConfGroupElement& g,
                         const std::string& name) {
  const int n = spec.n();
  require_dim(g.n() == n, "realize_element: element dimension does not match the model");
  if (g.L && max_abs(g.L->matrix() - spec.L()->matrix()) > 1e-12)
    throw PreconditionError("realize_element: element was built over a different L");
  ChartMap out = realize_heis(spec, g.x);
  if (g.t_H != 0.0) out = compose(out, realize_conf_flow(spec, g.t_H));
  if (g.t_L != 0.0) {
    out = compose(out, realize_translation_flow(spec, g.t_L));
    if (max_abs(spec.F()) > 0.0) out = compose(out, realize_K(spec, expm(g.t_L * spec.F())));
  }
  if (max_abs(g.k - Mat::Identity(n, n)) > 0.0) out = compose(out, realize_K(spec, g.k));
  return out.renamed(name);
}

MetricAtPoint pullback_metric(const ModelSpec& spec, const ChartMap& phi, const BrinkmannPoint& p) {
  const Mat j = phi.jacobian_at(p);
  const Mat g = metric_at(spec, phi(p)).g;
  return {j.transpose() * g * j};
}

std::string to_string(SimilarityVerdict v) {
  switch (v) {
    case SimilarityVerdict::isometry: return "isometry";
    case SimilarityVerdict::similarity: return "similarity";
    case SimilarityVerdict::not_conformal_in_tolerance: return "not_conformal_in_tolerance";
  }
  return "unknown";
}

SimilarityReport similarity_factor(const ModelSpec& spec, const ChartMap& phi,
                                   const std::vector<BrinkmannPoint>& samples, double tol) {
  SimilarityReport report;
  report.name = phi.name();
  report.tolerance = tol;
  report.samples = static_cast<int>(samples.size());
  if (samples.empty()) return report;
  std::vector<Mat> pulled, base;
  double num = 0.0, den = 0.0;
  for (const auto& p : samples) {
    pulled.push_back(pullback_metric(spec, phi, p).g);
    base.push_back(metric_at(spec, p).g);
    // upper triangle only: independent entries
    for (Eigen::Index i = 0; i < base.back().rows(); ++i)
      for (Eigen::Index j = i; j < base.back().cols(); ++j) {
        num += pulled.back()(i, j) * base.back()(i, j);
        den += base.back()(i, j) * base.back()(i, j);
      }
  }
  const double c = num / den;
  for (std::size_t s = 0; s < samples.size(); ++s)
    report.max_residual = std::max(report.max_residual, max_abs(pulled[s] - c * base[s]));
  if (report.max_residual <= tol) {
    report.factor = c;
    report.verdict = std::abs(c - 1.0) <= tol ? SimilarityVerdict::isometry
                                              : SimilarityVerdict::similarity;
  }
  return report;
}

}  // namespace pwave
