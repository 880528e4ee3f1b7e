#include "pwave/gauge.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace pwave {

std::string to_string(GaugeVariant v) { return v == GaugeVariant::linear ? "linear" : "bump"; }

double smooth_step(double t) {
  auto psi = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = psi(t);
  return a / (a + psi(1.0 - t));
}

double GaugeFunction::derivative(double u, int order, double h) const {
  // Central stencils on u + j h, j = -3..3.
  static const std::array<std::array<double, 7>, 6> w = {{
      {0, 0, 0, 1, 0, 0, 0},
      {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0, 3.0 / 4, -3.0 / 20, 1.0 / 60},
      {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90},
      {1.0 / 8, -1.0, 13.0 / 8, 0, -13.0 / 8, 1.0, -1.0 / 8},
      {-1.0 / 6, 2.0, -13.0 / 2, 28.0 / 3, -13.0 / 2, 2.0, -1.0 / 6},
      {-1.0 / 2, 2.0, -5.0 / 2, 0, 5.0 / 2, -2.0, 1.0 / 2},
  }};
  if (order < 0 || order > 5) throw PreconditionError("GaugeFunction::derivative: order must be 0..5");
  if (order == 0) return eval_(u);
  double acc = 0.0;
  for (int j = -3; j <= 3; ++j) acc += w[order][j + 3] * eval_(u + j * h);
  return acc / std::pow(h, order);
}

GaugeFunction build_gauge(const GaugeSpec& g) {
  if (g.b == 0.0 || !std::isfinite(g.b))
    throw PreconditionError(
        "build_gauge: b = 0, the element has no translation part along the leaf parameter");
  GaugeFunction f;
  f.spec_ = g;
  const double b = g.b, alpha = g.alpha;
  if (g.variant == GaugeVariant::linear) {
    f.eval_ = [b, alpha](double u) { return -(alpha / b) * u; };
    return f;
  }
  if (!(g.epsilon > 0.0 && g.epsilon < b))
    throw PreconditionError("build_gauge: bump variant requires 0 < epsilon < b");
  if (!g.phi0) throw PreconditionError("build_gauge: bump variant requires phi0");
  const auto phi0 = g.phi0;
  const double eps = g.epsilon;
  auto f0 = [=](double u) {
    const double chi = smooth_step((u - eps) / (b - eps));
    return (1.0 - chi) * phi0(u) + chi * (phi0(u - b) - alpha);
  };
  f.eval_ = [=](double u) {
    const double k = std::floor(u / b);
    return f0(u - k * b) - k * alpha;
  };
  return f;
}

MetricAtPoint rescaled_metric_at(const ModelSpec& spec, const GaugeFunction& f,
                                 const BrinkmannPoint& p) {
  return {std::exp(f(p.u)) * metric_at(spec, p).g};
}

bool GaugeReport::all_isometries() const {
  for (const auto& e : per_element)
    if (!e.isometry) return false;
  return true;
}

GaugeReport verify_gauge(const ModelSpec& spec, const GaugeFunction& f,
                         const std::vector<ChartMap>& elements,
                         const std::vector<BrinkmannPoint>& samples, double tol) {
  GaugeReport r;
  r.b = f.b();
  r.alpha = f.alpha();
  r.variant = f.variant();
  r.tolerance = tol;
  r.samples = static_cast<int>(samples.size());
  for (const auto& phi : elements) {
    GaugeElementResult e{phi.name(), 0.0, false};
    for (const auto& p : samples) {
      const Mat j = phi.jacobian_at(p);
      const Mat pulled = j.transpose() * rescaled_metric_at(spec, f, phi(p)).g * j;
      e.residual = std::max(e.residual, max_abs(pulled - rescaled_metric_at(spec, f, p).g));
    }
    e.isometry = e.residual <= tol;
    r.per_element.push_back(e);
  }
  return r;
}

GaugeData measure_gauge_data(const ModelSpec& spec, const ChartMap& phi,
                             const std::vector<BrinkmannPoint>& samples, double tol) {
  if (samples.empty()) throw PreconditionError("measure_gauge_data: no samples");
  GaugeData d;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& p : samples) {
    const double du = phi(p).u - p.u;
    lo = std::min(lo, du);
    hi = std::max(hi, du);
  }
  if (hi - lo > 1e-10) {
    std::ostringstream os;
    os << "measure_gauge_data: u-displacement of '" << phi.name()
       << "' varies across samples (spread " << hi - lo
       << "); the map is not a translation of the leaf parameter";
    throw PreconditionError(os.str());
  }
  d.b = 0.5 * (lo + hi);
  const auto sim = similarity_factor(spec, phi, samples, tol);
  d.similarity_residual = sim.max_residual;
  if (!sim.factor || *sim.factor <= 0.0) {
    std::ostringstream os;
    os << "measure_gauge_data: '" << phi.name() << "' is not a similarity (residual "
       << sim.max_residual << ")";
    throw PreconditionError(os.str());
  }
  d.alpha = std::log(*sim.factor);
  return d;
}

}  // namespace pwave
