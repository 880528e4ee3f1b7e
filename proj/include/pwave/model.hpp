#pragma once

#include "pwave/common.hpp"
#include "pwave/derivation.hpp"

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

namespace pwave {

struct ProfileNode {
  double u = 0.0;
  Mat S;
};

/// The wave profile S(u): either a constant symmetric matrix B (Cahen-Wallach)
/// or a uniformly sampled table interpolated entry-wise by quintic B-splines.
///
/// Sampled profiles also carry the fundamental solution of the leaf ODE
/// d/du (p, q) = (S q, p), tabulated by RK4 from u = 0 at construction.
class Profile {
 public:
  static Profile constant(const Mat& b);
  /// Nodes must be uniformly spaced, symmetric, at least 8 of them, and the
  /// domain must contain u = 0. ode_steps sets the RK4 step (domain length / ode_steps).
  static Profile sampled(std::vector<ProfileNode> nodes, int ode_steps = 2048);

  bool is_constant() const;
  int n() const;
  /// Inclusive domain; (-inf, inf) for a constant profile.
  std::pair<double, double> domain() const;
  bool contains(double u) const;
  Mat at(double u) const;
  const Mat& constant_value() const;
  const std::vector<ProfileNode>& nodes() const;
  int ode_steps() const;

  /// Phi(u) with Phi(0) = I for the state (p, q), p = beta', q = beta.
  Mat fundamental(double u) const;

 private:
  struct Impl;
  explicit Profile(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// A homogeneous plane-wave model 2 du dv + x^T S(u) x du^2 + dx^2 in
/// Brinkmann coordinates, with the data of its isometry-flow generator.
class ModelSpec {
 public:
  /// Constant profile S = B. F must be antisymmetric and commute with B.
  static ModelSpec cahen_wallach(const Mat& b, const Mat& f = Mat(), std::vector<Mat> k = {});
  /// Any profile; for sampled profiles L is formed with B = S(0).
  static ModelSpec from_profile(Profile profile, const Mat& f = Mat(), std::vector<Mat> k = {});

  int n() const { return n_; }
  int dim() const { return n_ + 2; }
  const Profile& profile() const { return profile_; }
  const Mat& F() const { return f_; }
  const std::vector<Mat>& K_generators() const { return k_; }
  /// L is trivial on the center for every model built here.
  bool complete() const { return true; }
  /// False when S vanishes identically (flat space).
  bool non_flat() const;
  Mat B() const;
  const std::shared_ptr<const Derivation>& L() const { return l_; }

 private:
  ModelSpec(Profile profile, Mat f, std::vector<Mat> k);
  int n_;
  Profile profile_;
  Mat f_;
  std::vector<Mat> k_;
  std::shared_ptr<const Derivation> l_;
};

/// Coordinates ordered (v, x^1..x^n, u) with indices 0..n+1.
struct BrinkmannPoint {
  double v = 0.0;
  Vec x;
  double u = 0.0;

  static BrinkmannPoint from_coords(const Vec& c);
  static BrinkmannPoint origin(int n);
  Vec coords() const;
  int n() const { return static_cast<int>(x.size()); }
};

struct MetricAtPoint {
  Mat g;
};

MetricAtPoint metric_at(const ModelSpec& spec, const BrinkmannPoint& p);
/// Closed-form inverse: g^{vu} = 1, g^{vv} = -x^T S x, g^{ii} = 1.
Mat inverse_metric_at(const ModelSpec& spec, const BrinkmannPoint& p);

/// Number of negative eigenvalues of a symmetric matrix (1 for Lorentzian).
int negative_index(const Mat& g);

/// Low-discrepancy points (Halton, seeded Cranley-Patterson rotation) in the
/// box [-half_width, half_width]^{n+2}; the u-range is shrunk to fit a sampled
/// profile's domain with the given margin.
std::vector<BrinkmannPoint> sample_points(const ModelSpec& spec, int count, std::uint64_t seed,
                                          double half_width = 2.0, double margin = 0.1);

}  // namespace pwave
