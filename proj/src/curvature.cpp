#include "pwave/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pwave {
namespace {

struct MetricDerivs {
  Mat g;
  std::vector<Mat> d1;               // d1[c](a, b) = d_c g_ab
  std::vector<std::vector<Mat>> d2;  // d2[c][d](a, b) = d_c d_d g_ab
};

MetricDerivs central_derivs(const MetricField& metric, const Vec& p, double h) {
  const auto dim = static_cast<int>(p.size());
  MetricDerivs out;
  out.g = metric(p);
  out.d1.assign(static_cast<std::size_t>(dim), Mat());
  out.d2.assign(static_cast<std::size_t>(dim), std::vector<Mat>(static_cast<std::size_t>(dim)));
  std::vector<Mat> plus(static_cast<std::size_t>(dim)), minus(static_cast<std::size_t>(dim));
  for (int c = 0; c < dim; ++c) {
    const auto uc = static_cast<std::size_t>(c);
    plus[uc] = metric(p + h * Vec::Unit(dim, c));
    minus[uc] = metric(p - h * Vec::Unit(dim, c));
    out.d1[uc] = (plus[uc] - minus[uc]) / (2.0 * h);
    out.d2[uc][uc] = (plus[uc] - 2.0 * out.g + minus[uc]) / (h * h);
  }
  for (int c = 0; c < dim; ++c) {
    for (int d = c + 1; d < dim; ++d) {
      const Vec ec = h * Vec::Unit(dim, c);
      const Vec ed = h * Vec::Unit(dim, d);
      const Mat mixed =
          (metric(p + ec + ed) - metric(p + ec - ed) - metric(p - ec + ed) + metric(p - ec - ed)) /
          (4.0 * h * h);
      out.d2[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)] = mixed;
      out.d2[static_cast<std::size_t>(d)][static_cast<std::size_t>(c)] = mixed;
    }
  }
  return out;
}

MetricDerivs metric_derivs(const MetricField& metric, const Vec& p, const FdOptions& opt) {
  if (!(opt.step > 1e-8) || !std::isfinite(opt.step)) {
    std::ostringstream os;
    os << "finite differences: step " << opt.step << " underflows (must exceed 1e-8)";
    throw PreconditionError(os.str());
  }
  MetricDerivs coarse = central_derivs(metric, p, opt.step);
  if (!opt.richardson) return coarse;
  MetricDerivs fine = central_derivs(metric, p, 0.5 * opt.step);
  for (std::size_t c = 0; c < fine.d1.size(); ++c) {
    fine.d1[c] = (4.0 * fine.d1[c] - coarse.d1[c]) / 3.0;
    for (std::size_t d = 0; d < fine.d2.size(); ++d)
      fine.d2[c][d] = (4.0 * fine.d2[c][d] - coarse.d2[c][d]) / 3.0;
  }
  return fine;
}

struct Geometry {
  Mat g;
  Mat ginv;
  Tensor3 christoffel;
  Tensor4 riemann;
  Mat ricci;
  double scalar = 0.0;
};

Geometry geometry_at(const MetricField& metric, const MetricField& inverse, const Vec& p,
                     const FdOptions& opt) {
  const auto dim = static_cast<int>(p.size());
  const MetricDerivs md = metric_derivs(metric, p, opt);
  Geometry geo;
  geo.g = md.g;
  geo.ginv = inverse ? inverse(p) : Mat(md.g.inverse());

  Tensor3 first(dim);  // Gamma_{dbc}
  for (int d = 0; d < dim; ++d)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c)
        first(d, b, c) = 0.5 * (md.d1[static_cast<std::size_t>(c)](d, b) +
                                md.d1[static_cast<std::size_t>(b)](d, c) -
                                md.d1[static_cast<std::size_t>(d)](b, c));
  geo.christoffel = Tensor3(dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c) {
        double s = 0.0;
        for (int d = 0; d < dim; ++d) s += geo.ginv(a, d) * first(d, b, c);
        geo.christoffel(a, b, c) = s;
      }

  const auto& gam = geo.christoffel;
  auto dd = [&](int c, int d) -> const Mat& {
    return md.d2[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)];
  };
  geo.riemann = Tensor4(dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c)
        for (int d = 0; d < dim; ++d) {
          double r = 0.5 * (dd(b, c)(a, d) + dd(a, d)(b, c) - dd(b, d)(a, c) - dd(a, c)(b, d));
          for (int e = 0; e < dim; ++e)
            for (int f = 0; f < dim; ++f)
              r += md.g(e, f) * (gam(e, b, c) * gam(f, a, d) - gam(e, b, d) * gam(f, a, c));
          geo.riemann(a, b, c, d) = r;
        }

  geo.ricci = Mat::Zero(dim, dim);
  for (int b = 0; b < dim; ++b)
    for (int d = 0; d < dim; ++d) {
      double s = 0.0;
      for (int a = 0; a < dim; ++a)
        for (int c = 0; c < dim; ++c) s += geo.ginv(a, c) * geo.riemann(a, b, c, d);
      geo.ricci(b, d) = s;
    }
  geo.scalar = (geo.ginv.array() * geo.ricci.array()).sum();
  return geo;
}

Tensor4 weyl_from(const Geometry& geo) {
  const auto dim = static_cast<int>(geo.g.rows());
  const double n = dim;
  const Mat& g = geo.g;
  const Mat& ric = geo.ricci;
  Tensor4 w(dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c)
        for (int d = 0; d < dim; ++d) {
          const double ricci_part =
              (g(a, c) * ric(b, d) - g(a, d) * ric(b, c) - g(b, c) * ric(a, d) +
               g(b, d) * ric(a, c)) /
              (n - 2.0);
          const double scalar_part =
              geo.scalar * (g(a, c) * g(b, d) - g(a, d) * g(b, c)) / ((n - 1.0) * (n - 2.0));
          w(a, b, c, d) = geo.riemann(a, b, c, d) - ricci_part + scalar_part;
        }
  return w;
}

Mat schouten3(const Geometry& geo) { return geo.ricci - 0.25 * geo.scalar * geo.g; }

Tensor3 cotton_from(const MetricField& metric, const MetricField& inverse, const Vec& p,
                    const Geometry& geo, const FdOptions& opt) {
  const int dim = 3;
  auto schouten_at = [&](const Vec& q) { return schouten3(geometry_at(metric, inverse, q, opt)); };
  auto derivative = [&](int c, double h) {
    const Vec e = h * Vec::Unit(dim, c);
    return Mat((schouten_at(p + e) - schouten_at(p - e)) / (2.0 * h));
  };
  std::vector<Mat> dp(dim);
  for (int c = 0; c < dim; ++c) {
    const Mat coarse = derivative(c, opt.step);
    dp[static_cast<std::size_t>(c)] =
        opt.richardson ? Mat((4.0 * derivative(c, 0.5 * opt.step) - coarse) / 3.0) : coarse;
  }
  const Mat pab = schouten3(geo);
  const auto& gam = geo.christoffel;
  auto nabla = [&](int c, int a, int b) {
    double s = dp[static_cast<std::size_t>(c)](a, b);
    for (int e = 0; e < dim; ++e) s -= gam(e, c, a) * pab(e, b) + gam(e, c, b) * pab(a, e);
    return s;
  };
  Tensor3 cotton(dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c) cotton(a, b, c) = nabla(c, a, b) - nabla(b, a, c);
  return cotton;
}

}  // namespace

double Tensor3::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Tensor4::max_abs() const { return argmax_abs().first; }

std::pair<double, std::array<int, 4>> Tensor4::argmax_abs() const {
  std::pair<double, std::array<int, 4>> best{0.0, {0, 0, 0, 0}};
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int c = 0; c < dim_; ++c)
        for (int d = 0; d < dim_; ++d) {
          const double v = std::abs((*this)(a, b, c, d));
          if (v > best.first) best = {v, {a, b, c, d}};
        }
  return best;
}

CurvatureTensors curvature_from_metric(const MetricField& metric, const Vec& point,
                                       const FdOptions& options, const MetricField& inverse) {
  const auto dim = static_cast<int>(point.size());
  require_dim(dim >= 2, "curvature: dimension must be at least 2");
  Geometry geo = geometry_at(metric, inverse, point, options);
  CurvatureTensors out;
  out.dim = dim;
  if (dim >= 4) out.weyl = weyl_from(geo);
  if (dim == 3) out.cotton = cotton_from(metric, inverse, point, geo, options);
  out.christoffel = std::move(geo.christoffel);
  out.riemann = std::move(geo.riemann);
  out.ricci = std::move(geo.ricci);
  out.scalar = geo.scalar;
  return out;
}

CurvatureTensors curvature_at(const ModelSpec& spec, const BrinkmannPoint& p,
                              const FdOptions& options) {
  require_dim(p.n() == spec.n(), "curvature_at: point dimension does not match the model");
  const MetricField metric = [&spec](const Vec& c) {
    return metric_at(spec, BrinkmannPoint::from_coords(c)).g;
  };
  const MetricField inverse = [&spec](const Vec& c) {
    return inverse_metric_at(spec, BrinkmannPoint::from_coords(c));
  };
  return curvature_from_metric(metric, p.coords(), options, inverse);
}

CurvatureTensors curvature_at(const ModelSpec& spec, const BrinkmannPoint& p, double fd_step) {
  return curvature_at(spec, p, FdOptions{fd_step, true});
}

FlatnessReport conformal_flatness(const ModelSpec& spec, const std::vector<BrinkmannPoint>& samples,
                                  double tol, const FdOptions& options) {
  if (samples.empty()) throw PreconditionError("conformal_flatness: empty sample set");
  FlatnessReport report;
  report.dim = spec.dim();
  report.tolerance = tol;
  report.measure = spec.dim() >= 4 ? "weyl" : "cotton";
  report.witness_point = samples.front();
  report.per_sample.reserve(samples.size());
  for (const auto& p : samples) {
    const auto curv = curvature_at(spec, p, options);
    double value = 0.0;
    std::vector<int> index;
    if (curv.weyl) {
      const auto [v, idx] = curv.weyl->argmax_abs();
      value = v;
      index.assign(idx.begin(), idx.end());
    } else {
      const Tensor3& c = *curv.cotton;
      index = {0, 0, 0};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int d = 0; d < 3; ++d)
            if (std::abs(c(a, b, d)) > value) {
              value = std::abs(c(a, b, d));
              index = {a, b, d};
            }
    }
    report.per_sample.push_back(value);
    if (value > report.max_component || report.per_sample.size() == 1) {
      report.max_component = value;
      report.witness_point = p;
      report.witness_index = index;
    }
  }
  report.conformally_flat = report.max_component < tol;
  return report;
}

std::string CoordinateField::name(int n) const {
  if (index == 0) return "d_v";
  if (index == n + 1) return "d_u";
  return "d_x" + std::to_string(index);
}

ParallelReport check_parallel(const ModelSpec& spec, CoordinateField field,
                              const std::vector<BrinkmannPoint>& samples, double tol,
                              const FdOptions& options) {
  const int dim = spec.dim();
  require_dim(field.index >= 0 && field.index < dim, "check_parallel: field index out of range");
  ParallelReport report;
  report.field = field.name(spec.n());
  report.tolerance = tol;
  report.null_everywhere = true;
  if (!samples.empty()) report.witness_point = samples.front();
  for (const auto& p : samples) {
    const auto curv = curvature_at(spec, p, options);
    double worst = 0.0;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        worst = std::max(worst, std::abs(curv.christoffel(a, b, field.index)));
    if (worst > report.max_norm) {
      report.max_norm = worst;
      report.witness_point = p;
    }
    const double gkk = metric_at(spec, p).g(field.index, field.index);
    report.null_everywhere = report.null_everywhere && gkk == 0.0;
  }
  report.parallel = report.max_norm < tol;
  return report;
}

}  // namespace pwave
