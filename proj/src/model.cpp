#include "pwave/model.hpp"

#include "pwave/expm.hpp"

#include <boost/math/interpolators/cardinal_quintic_b_spline.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace pwave {

struct Profile::Impl {
  int n = 0;
  bool constant = true;
  Mat value;
  std::vector<ProfileNode> nodes;
  double u_min = -std::numeric_limits<double>::infinity();
  double u_max = std::numeric_limits<double>::infinity();
  // Upper-triangular entries, row-major (i <= j).
  std::vector<boost::math::interpolators::cardinal_quintic_b_spline<double>> splines;
  int ode_steps = 0;
  double ode_h = 0.0;
  long first_index = 0;      // table[i] holds Phi(ode_h * (first_index + i))
  std::vector<Mat> table;
  double spline_max = 0.0;

  Mat eval(double u) const {
    u = std::clamp(u, u_min, spline_max);
    Mat s(n, n);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        s(i, j) = s(j, i) = splines[idx++](u);
      }
    }
    return s;
  }

  Mat rhs(double u, const Mat& phi) const {
    // d/du [P; Q] = [S Q; P]
    const Mat s = eval(u);
    Mat d(2 * n, phi.cols());
    d.topRows(n) = s * phi.bottomRows(n);
    d.bottomRows(n) = phi.topRows(n);
    return d;
  }

  Mat rk4(double u, const Mat& phi, double h) const {
    const Mat k1 = rhs(u, phi);
    const Mat k2 = rhs(u + 0.5 * h, phi + 0.5 * h * k1);
    const Mat k3 = rhs(u + 0.5 * h, phi + 0.5 * h * k2);
    const Mat k4 = rhs(u + h, phi + h * k3);
    return phi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
};

Profile::Profile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Profile Profile::constant(const Mat& b) {
  require_dim(b.rows() == b.cols() && b.rows() >= 1, "profile: B must be square with n >= 1");
  if (!is_symmetric(b, 1e-12)) throw PreconditionError("profile: B must be symmetric");
  auto impl = std::make_shared<Impl>();
  impl->n = static_cast<int>(b.rows());
  impl->value = b;
  return Profile(std::move(impl));
}

Profile Profile::sampled(std::vector<ProfileNode> nodes, int ode_steps) {
  if (nodes.size() < 8) throw PreconditionError("sampled profile: at least 8 nodes required");
  if (ode_steps < 16) throw PreconditionError("sampled profile: ode_steps must be >= 16");
  const auto n = nodes.front().S.rows();
  const double h = nodes[1].u - nodes[0].u;
  if (!(h > 0)) throw PreconditionError("sampled profile: nodes must be increasing in u");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    require_dim(nodes[i].S.rows() == n && nodes[i].S.cols() == n,
                "sampled profile: every S must be n x n");
    if (!is_symmetric(nodes[i].S, 1e-12)) {
      std::ostringstream os;
      os << "sampled profile: S(u) is not symmetric at node " << i << " (u = " << nodes[i].u << ")";
      throw PreconditionError(os.str());
    }
    if (i > 0 && std::abs((nodes[i].u - nodes[i - 1].u) - h) > 1e-9 * std::max(1.0, h))
      throw PreconditionError("sampled profile: nodes must be uniformly spaced");
  }
  auto impl = std::make_shared<Impl>();
  impl->n = static_cast<int>(n);
  impl->constant = false;
  impl->u_min = nodes.front().u;
  impl->u_max = nodes.back().u;
  if (impl->u_min > 0.0 || impl->u_max < 0.0)
    throw PreconditionError("sampled profile: domain must contain u = 0 (ODE initial data)");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      std::vector<double> y(nodes.size());
      for (std::size_t k = 0; k < nodes.size(); ++k) y[k] = nodes[k].S(i, j);
      impl->splines.emplace_back(y, impl->u_min, h);
    }
  }
  impl->spline_max = impl->splines.front().t_max();
  impl->nodes = std::move(nodes);

  impl->ode_steps = ode_steps;
  impl->ode_h = (impl->u_max - impl->u_min) / ode_steps;
  const double dh = impl->ode_h;
  const long lo = static_cast<long>(std::ceil(impl->u_min / dh - 1e-12));
  const long hi = static_cast<long>(std::floor(impl->u_max / dh + 1e-12));
  impl->first_index = lo;
  impl->table.assign(static_cast<std::size_t>(hi - lo + 1), Mat());
  const auto zero = static_cast<std::size_t>(-lo);
  impl->table[zero] = Mat::Identity(2 * n, 2 * n);
  for (long k = 0; k < hi; ++k) {
    const auto i = zero + static_cast<std::size_t>(k);
    impl->table[i + 1] = impl->rk4(k * dh, impl->table[i], dh);
  }
  for (long k = 0; k > lo; --k) {
    const auto i = zero - static_cast<std::size_t>(-k);
    impl->table[i - 1] = impl->rk4(k * dh, impl->table[i], -dh);
  }
  return Profile(std::move(impl));
}

bool Profile::is_constant() const { return impl_->constant; }
int Profile::n() const { return impl_->n; }
std::pair<double, double> Profile::domain() const { return {impl_->u_min, impl_->u_max}; }

bool Profile::contains(double u) const {
  return std::isfinite(u) && u >= impl_->u_min && u <= impl_->u_max;
}

Mat Profile::at(double u) const {
  if (impl_->constant) return impl_->value;
  if (!contains(u)) {
    std::ostringstream os;
    os << "profile: u = " << u << " outside sampled domain [" << impl_->u_min << ", "
       << impl_->u_max << "]";
    throw DomainError(os.str());
  }
  return impl_->eval(u);
}

const Mat& Profile::constant_value() const {
  if (!impl_->constant) throw PreconditionError("profile is not constant");
  return impl_->value;
}

const std::vector<ProfileNode>& Profile::nodes() const { return impl_->nodes; }
int Profile::ode_steps() const { return impl_->ode_steps; }

Mat Profile::fundamental(double u) const {
  const int n = impl_->n;
  if (impl_->constant) {
    Mat m = Mat::Zero(2 * n, 2 * n);
    m.topRightCorner(n, n) = impl_->value;
    m.bottomLeftCorner(n, n) = Mat::Identity(n, n);
    return expm(u * m);
  }
  if (!contains(u)) {
    std::ostringstream os;
    os << "leaf ODE: u = " << u << " outside sampled domain [" << impl_->u_min << ", "
       << impl_->u_max << "]";
    throw DomainError(os.str());
  }
  const double dh = impl_->ode_h;
  long k = std::lround(u / dh);
  k = std::clamp(k, impl_->first_index,
                 impl_->first_index + static_cast<long>(impl_->table.size()) - 1);
  const auto& base = impl_->table[static_cast<std::size_t>(k - impl_->first_index)];
  const double rest = u - k * dh;
  if (rest == 0.0) return base;
  return impl_->rk4(k * dh, base, rest);
}

ModelSpec::ModelSpec(Profile profile, Mat f, std::vector<Mat> k)
    : n_(profile.n()), profile_(std::move(profile)), f_(std::move(f)), k_(std::move(k)) {
  if (f_.size() == 0) f_ = Mat::Zero(n_, n_);
  require_dim(f_.rows() == n_ && f_.cols() == n_, "model: F must be n x n");
  if (!is_antisymmetric(f_, 1e-12)) throw PreconditionError("model: F must be antisymmetric");
  const Mat b = B();
  if (profile_.is_constant() && max_abs(f_ * b - b * f_) > 1e-10)
    throw PreconditionError("model: constant profile requires [F, B] = 0");
  l_ = std::make_shared<const Derivation>(Derivation::l_form(f_, b));
  for (std::size_t i = 0; i < k_.size(); ++i) {
    const Mat& k = k_[i];
    std::ostringstream where;
    where << "model: K generator " << i;
    require_dim(k.rows() == n_ && k.cols() == n_, where.str() + " must be n x n");
    if (!is_orthogonal(k, 1e-10)) throw PreconditionError(where.str() + " is not orthogonal");
    auto preserves = [&](const Mat& s) { return max_abs(k * s * k.transpose() - s) <= 1e-9; };
    bool ok = profile_.is_constant() ? preserves(b) : true;
    for (const auto& node : profile_.nodes()) ok = ok && preserves(node.S);
    if (!ok) throw PreconditionError(where.str() + " does not preserve S (k S k^T != S)");
    if (max_abs(k * f_ - f_ * k) > 1e-10)
      throw PreconditionError(where.str() + " does not commute with F");
  }
}

ModelSpec ModelSpec::cahen_wallach(const Mat& b, const Mat& f, std::vector<Mat> k) {
  return ModelSpec(Profile::constant(b), f, std::move(k));
}

ModelSpec ModelSpec::from_profile(Profile profile, const Mat& f, std::vector<Mat> k) {
  return ModelSpec(std::move(profile), f, std::move(k));
}

bool ModelSpec::non_flat() const {
  if (profile_.is_constant()) return max_abs(profile_.constant_value()) > 0.0;
  for (const auto& node : profile_.nodes())
    if (max_abs(node.S) > 0.0) return true;
  return false;
}

Mat ModelSpec::B() const {
  return profile_.is_constant() ? profile_.constant_value() : profile_.at(0.0);
}

BrinkmannPoint BrinkmannPoint::from_coords(const Vec& c) {
  require_dim(c.size() >= 3, "Brinkmann point needs at least 3 coordinates");
  const auto n = c.size() - 2;
  return {c(0), c.segment(1, n), c(n + 1)};
}

BrinkmannPoint BrinkmannPoint::origin(int n) { return {0.0, Vec::Zero(n), 0.0}; }

Vec BrinkmannPoint::coords() const {
  Vec c(n() + 2);
  c << v, x, u;
  return c;
}

MetricAtPoint metric_at(const ModelSpec& spec, const BrinkmannPoint& p) {
  const int n = spec.n();
  require_dim(p.n() == n, "metric_at: point dimension does not match the model");
  Mat g = Mat::Zero(n + 2, n + 2);
  g(0, n + 1) = g(n + 1, 0) = 1.0;
  g.block(1, 1, n, n) = Mat::Identity(n, n);
  g(n + 1, n + 1) = p.x.dot(spec.profile().at(p.u) * p.x);
  return {g};
}

Mat inverse_metric_at(const ModelSpec& spec, const BrinkmannPoint& p) {
  const int n = spec.n();
  require_dim(p.n() == n, "inverse_metric_at: point dimension does not match the model");
  Mat gi = Mat::Zero(n + 2, n + 2);
  gi(0, n + 1) = gi(n + 1, 0) = 1.0;
  gi.block(1, 1, n, n) = Mat::Identity(n, n);
  gi(0, 0) = -p.x.dot(spec.profile().at(p.u) * p.x);
  return gi;
}

int negative_index(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(g, Eigen::EigenvaluesOnly);
  int count = 0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    if (solver.eigenvalues()(i) < 0.0) ++count;
  return count;
}

std::vector<BrinkmannPoint> sample_points(const ModelSpec& spec, int count, std::uint64_t seed,
                                          double half_width, double margin) {
  static constexpr std::array<int, 20> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                                  31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  const int dim = spec.dim();
  require_dim(dim <= static_cast<int>(kPrimes.size()), "sample_points: dimension too large");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(static_cast<std::size_t>(dim));
  for (auto& s : shift) s = unit(rng);

  double u_lo = -half_width;
  double u_hi = half_width;
  if (!spec.profile().is_constant()) {
    const auto [a, b] = spec.profile().domain();
    u_lo = std::max(u_lo, a + margin);
    u_hi = std::min(u_hi, b - margin);
    if (!(u_lo < u_hi)) throw DomainError("sample_points: profile domain too small for margin");
  }

  std::vector<BrinkmannPoint> points;
  points.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 1; i <= count; ++i) {
    Vec c(dim);
    for (int d = 0; d < dim; ++d) {
      // radical inverse of i in base p
      double f = 1.0, r = 0.0;
      for (int k = i; k > 0; k /= kPrimes[d]) {
        f /= kPrimes[d];
        r += f * (k % kPrimes[d]);
      }
      const double t = std::fmod(r + shift[static_cast<std::size_t>(d)], 1.0);
      c(d) = d == dim - 1 ? u_lo + (u_hi - u_lo) * t : -half_width + 2.0 * half_width * t;
    }
    points.push_back(BrinkmannPoint::from_coords(c));
  }
  return points;
}

}  // namespace pwave
