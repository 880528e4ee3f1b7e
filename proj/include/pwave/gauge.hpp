#pragma once

#include "pwave/chart.hpp"
#include "pwave/model.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pwave {

enum class GaugeVariant { linear, bump };
std::string to_string(GaugeVariant v);

/// Data of the cocycle f(u + b) = f(u) - alpha.
struct GaugeSpec {
  double b = 1.0;
  double alpha = 0.0;
  GaugeVariant variant = GaugeVariant::linear;
  /// Bump variant only: germ prescribed near u = 0. It is evaluated on (epsilon - b, epsilon).
  std::function<double(double)> phi0 = [](double) { return 0.0; };
  double epsilon = 0.25;
};

/// Function of the leaf parameter u.
class GaugeFunction {
 public:
  double operator()(double u) const { return eval_(u); }
  /// d^k f / du^k for k = 0..5 by central differences with step h.
  double derivative(double u, int order, double h = 0.02) const;
  double b() const { return spec_.b; }
  double alpha() const { return spec_.alpha; }
  GaugeVariant variant() const { return spec_.variant; }
  const GaugeSpec& spec() const { return spec_; }

 private:
  friend GaugeFunction build_gauge(const GaugeSpec& g);
  GaugeSpec spec_;
  std::function<double(double)> eval_;
};

/// Linear: f(u) = -(alpha/b) u. Bump: smooth blend on [0, b] of phi0 near 0
/// and phi0(u - b) - alpha near b, extended by f(u) = f0(u - kb) - k alpha.
GaugeFunction build_gauge(const GaugeSpec& g);

/// Smooth step: 0 for t <= 0, 1 for t >= 1, C-infinity in between.
double smooth_step(double t);

MetricAtPoint rescaled_metric_at(const ModelSpec& spec, const GaugeFunction& f,
                                 const BrinkmannPoint& p);

struct GaugeElementResult {
  std::string name;
  double residual = 0.0;
  bool isometry = false;
};

struct GaugeReport {
  double b = 0.0;
  double alpha = 0.0;
  GaugeVariant variant = GaugeVariant::linear;
  double tolerance = 0.0;
  int samples = 0;
  std::vector<GaugeElementResult> per_element;
  bool all_isometries() const;
};

/// Max entry-wise gap between phi^*(e^f g) and e^f g over the samples, per element.
GaugeReport verify_gauge(const ModelSpec& spec, const GaugeFunction& f,
                         const std::vector<ChartMap>& elements,
                         const std::vector<BrinkmannPoint>& samples, double tol);

struct GaugeData {
  double b = 0.0;
  double alpha = 0.0;
  double similarity_residual = 0.0;
};

/// Reads b from the u-displacement of phi and alpha = log of its similarity factor.
GaugeData measure_gauge_data(const ModelSpec& spec, const ChartMap& phi,
                             const std::vector<BrinkmannPoint>& samples, double tol = 1e-8);

}  // namespace pwave
