#pragma once

#include "pwave/model.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pwave {

/// Dense rank-3 / rank-4 arrays over a common index range 0..dim-1.
class Tensor3 {
 public:
  explicit Tensor3(int dim = 0) : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim)) {}
  double& operator()(int a, int b, int c) { return data_[index(a, b, c)]; }
  double operator()(int a, int b, int c) const { return data_[index(a, b, c)]; }
  int dim() const { return dim_; }
  double max_abs() const;

 private:
  std::size_t index(int a, int b, int c) const {
    return static_cast<std::size_t>((a * dim_ + b) * dim_ + c);
  }
  int dim_;
  std::vector<double> data_;
};

class Tensor4 {
 public:
  explicit Tensor4(int dim = 0)
      : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim * dim)) {}
  double& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }
  int dim() const { return dim_; }
  double max_abs() const;
  /// Largest |component| and where it sits.
  std::pair<double, std::array<int, 4>> argmax_abs() const;

 private:
  std::size_t index(int a, int b, int c, int d) const {
    return static_cast<std::size_t>(((a * dim_ + b) * dim_ + c) * dim_ + d);
  }
  int dim_;
  std::vector<double> data_;
};

struct FdOptions {
  double step = 1e-2;
  /// One level of Richardson extrapolation (steps h and h/2).
  bool richardson = true;
};

/// christoffel(a, b, c) = Gamma^a_{bc}; riemann is all-lower with
/// Ric_{bd} = g^{ac} R_{abcd}; weyl only for dim >= 4, cotton only for dim 3
/// (C_{abc} = nabla_c P_{ab} - nabla_b P_{ac}, P = Ric - (R/4) g).
struct CurvatureTensors {
  int dim = 0;
  Tensor3 christoffel;
  Tensor4 riemann;
  Mat ricci;
  double scalar = 0.0;
  std::optional<Tensor4> weyl;
  std::optional<Tensor3> cotton;
};

using MetricField = std::function<Mat(const Vec&)>;

/// Curvature of an arbitrary metric field by central differences. When
/// `inverse` is empty the inverse metric is obtained by LU.
CurvatureTensors curvature_from_metric(const MetricField& metric, const Vec& point,
                                       const FdOptions& options,
                                       const MetricField& inverse = {});

/// Curvature of a plane-wave model at p (exact inverse metric).
CurvatureTensors curvature_at(const ModelSpec& spec, const BrinkmannPoint& p,
                              const FdOptions& options = {});
CurvatureTensors curvature_at(const ModelSpec& spec, const BrinkmannPoint& p, double fd_step);

struct FlatnessReport {
  bool conformally_flat = false;
  std::string measure;  // "weyl" (dim >= 4) or "cotton" (dim 3)
  double max_component = 0.0;
  BrinkmannPoint witness_point;
  std::vector<int> witness_index;
  double tolerance = 0.0;
  int dim = 0;
  std::vector<double> per_sample;  // max |component| at each sample
};

/// Max |Weyl| (dim >= 4) or max |Cotton| (dim 3) over the samples against tol.
FlatnessReport conformal_flatness(const ModelSpec& spec, const std::vector<BrinkmannPoint>& samples,
                                  double tol, const FdOptions& options = {});

/// Coordinate vector fields: index 0 is d_v, 1..n are d_{x^i}, n+1 is d_u.
struct CoordinateField {
  int index = 0;
  static CoordinateField d_v() { return {0}; }
  static CoordinateField d_x(int i) { return {1 + i}; }
  static CoordinateField d_u(int n) { return {n + 1}; }
  std::string name(int n) const;
};

struct ParallelReport {
  std::string field;
  double max_norm = 0.0;  // max_{a,b} |nabla_b X^a| = |Gamma^a_{b,index}|
  BrinkmannPoint witness_point;
  bool null_everywhere = false;  // g(X, X) == 0 exactly at every sample
  double tolerance = 0.0;
  bool parallel = false;
};

ParallelReport check_parallel(const ModelSpec& spec, CoordinateField field,
                              const std::vector<BrinkmannPoint>& samples, double tol,
                              const FdOptions& options = {});

}  // namespace pwave
