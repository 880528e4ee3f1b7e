#pragma once

#include "pwave/conformal_group.hpp"
#include "pwave/model.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pwave {

/// Differentiable self-map of the Brinkmann chart together with its exact Jacobian.
class ChartMap {
 public:
  using Forward = std::function<Vec(const Vec&)>;
  using Jacobian = std::function<Mat(const Vec&)>;

  ChartMap(std::string name, int n, Forward forward, Jacobian jacobian);
  static ChartMap identity(int n);

  BrinkmannPoint operator()(const BrinkmannPoint& p) const;
  Mat jacobian_at(const BrinkmannPoint& p) const;
  Vec apply(const Vec& c) const { return forward_(c); }
  Mat jacobian(const Vec& c) const { return jacobian_(c); }

  const std::string& name() const { return name_; }
  int n() const { return n_; }
  ChartMap renamed(std::string name) const;

 private:
  std::string name_;
  int n_;
  Forward forward_;
  Jacobian jacobian_;
};

/// (outer o inner)(p) = outer(inner(p)); Jacobians multiply by the chain rule.
ChartMap compose(const ChartMap& outer, const ChartMap& inner);

/// Leafwise Heisenberg action: on the leaf u, with (p, q) = Phi(u) (-alpha, beta)
/// and c = z - alpha.beta/2,
///     v -> v - p.x - q.p/2 + c,   x -> x + q,   u -> u.
ChartMap realize_heis(const ModelSpec& spec, const HeisElement& h);
/// (v, x, u) -> (e^{2t} v, e^t x, u).
ChartMap realize_conf_flow(const ModelSpec& spec, double t_H);
/// u -> u + t; constant profiles only.
ChartMap realize_translation_flow(const ModelSpec& spec, double t);
/// (v, x, u) -> (-v, x, -u + b); requires S(-u + b) = S(u).
ChartMap realize_flip(const ModelSpec& spec, double b);
/// (v, x, u) -> (v, k x, u); requires k orthogonal with k S kᵀ = S.
ChartMap realize_K(const ModelSpec& spec, const Mat& k);
/// Full element (a, x) = (1, x)(a, 1):
/// realize_heis(x) o conf_flow(t_H) o L-flow(t_L) o realize_K(k), where the
/// L-flow is translation_flow(t) o realize_K(e^{tF}).
ChartMap realize_element(const ModelSpec& spec, const ConfGroupElement& g,
                         const std::string& name = "element");

MetricAtPoint pullback_metric(const ModelSpec& spec, const ChartMap& phi, const BrinkmannPoint& p);

enum class SimilarityVerdict { isometry, similarity, not_conformal_in_tolerance };
std::string to_string(SimilarityVerdict v);

struct SimilarityReport {
  std::string name;
  std::optional<double> factor;
  double max_residual = 0.0;
  int samples = 0;
  SimilarityVerdict verdict = SimilarityVerdict::not_conformal_in_tolerance;
  double tolerance = 0.0;
};

/// Least-squares constant c with phi^* g ~ c g over all independent entries at
/// all samples; the max residual against tol decides the verdict.
SimilarityReport similarity_factor(const ModelSpec& spec, const ChartMap& phi,
                                   const std::vector<BrinkmannPoint>& samples, double tol);

}  // namespace pwave
