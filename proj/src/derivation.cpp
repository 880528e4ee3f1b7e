#include "pwave/derivation.hpp"

#include "pwave/expm.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pwave {
namespace {

int n_from_size(Eigen::Index size) {
  require_dim(size % 2 == 1 && size >= 3, "heis matrices must be (2n+1)x(2n+1) with n >= 1");
  return static_cast<int>((size - 1) / 2);
}

Vec bracket_coords(const Vec& x, const Vec& y) {
  return bracket(HeisAlgebraElement::from_coords(x), HeisAlgebraElement::from_coords(y)).coords();
}

}  // namespace

Derivation::Derivation(Mat m) : m_(std::move(m)), n_(0) {
  require_dim(m_.rows() == m_.cols(), "derivation matrix must be square");
  n_ = n_from_size(m_.rows());
}

Derivation Derivation::l_form(const Mat& f, const Mat& b) {
  require_dim(f.rows() == f.cols() && b.rows() == b.cols() && f.rows() == b.rows(),
              "L-form: F and B must be square of equal size");
  if (!is_antisymmetric(f, 1e-12)) throw PreconditionError("L-form: F must be antisymmetric");
  if (!is_symmetric(b, 1e-12)) throw PreconditionError("L-form: B must be symmetric");
  const auto n = f.rows();
  Mat m = Mat::Zero(2 * n + 1, 2 * n + 1);
  m.block(0, 0, n, n) = f;
  m.block(0, n, n, n) = b;
  m.block(n, 0, n, n) = Mat::Identity(n, n);
  m.block(n, n, n, n) = f;
  return Derivation(std::move(m));
}

Derivation Derivation::homothety(int n) {
  Vec d = Vec::Ones(2 * n + 1);
  d(2 * n) = 2.0;
  return Derivation(d.asDiagonal());
}

double Derivation::law_residual() const {
  const auto dim = m_.rows();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Vec ei = Vec::Unit(dim, i);
      const Vec ej = Vec::Unit(dim, j);
      const Vec lhs = m_ * bracket_coords(ei, ej);
      const Vec rhs = bracket_coords(m_ * ei, ej) + bracket_coords(ei, m_ * ej);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

HeisAutomorphism::HeisAutomorphism(Mat m) : m_(std::move(m)), n_(0) {
  require_dim(m_.rows() == m_.cols(), "automorphism matrix must be square");
  n_ = n_from_size(m_.rows());
}

HeisAutomorphism HeisAutomorphism::identity(int n) {
  return HeisAutomorphism(Mat::Identity(2 * n + 1, 2 * n + 1));
}

HeisAutomorphism HeisAutomorphism::from_orthogonal(const Mat& k) {
  if (!is_orthogonal(k, 1e-10)) throw PreconditionError("K element must be orthogonal");
  const auto n = k.rows();
  Mat m = Mat::Identity(2 * n + 1, 2 * n + 1);
  m.block(0, 0, n, n) = k;
  m.block(n, n, n, n) = k;
  return HeisAutomorphism(std::move(m));
}

HeisElement HeisAutomorphism::apply(const HeisElement& x) const {
  require_dim(x.n() == n_, "automorphism: dimension mismatch");
  return heis_exp(apply(heis_log(x)));
}

HeisAlgebraElement HeisAutomorphism::apply(const HeisAlgebraElement& x) const {
  require_dim(x.n() == n_, "automorphism: dimension mismatch");
  return HeisAlgebraElement::from_coords(m_ * x.coords());
}

HeisAutomorphism HeisAutomorphism::compose(const HeisAutomorphism& inner) const {
  require_dim(inner.n_ == n_, "automorphism: dimension mismatch");
  return HeisAutomorphism(m_ * inner.m_);
}

HeisAutomorphism HeisAutomorphism::inverse() const {
  return HeisAutomorphism(m_.partialPivLu().inverse());
}

double HeisAutomorphism::bracket_residual() const {
  const auto dim = m_.rows();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const Vec ei = Vec::Unit(dim, i);
      const Vec ej = Vec::Unit(dim, j);
      const Vec lhs = m_ * bracket_coords(ei, ej);
      const Vec rhs = bracket_coords(m_ * ei, m_ * ej);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

HeisAutomorphism exp_derivation(const Derivation& d, double t) {
  const double residual = d.law_residual();
  if (residual > 1e-10) {
    std::ostringstream os;
    os << "exp_derivation: matrix violates the derivation law (residual " << residual << ")";
    throw PreconditionError(os.str());
  }
  return HeisAutomorphism(expm(t * d.matrix()));
}

std::string to_string(SpectralType t) {
  switch (t) {
    case SpectralType::hyperbolic: return "hyperbolic";
    case SpectralType::elliptic: return "elliptic";
    case SpectralType::unipotent: return "unipotent";
    case SpectralType::mixed: return "mixed";
  }
  return "unknown";
}

std::vector<std::complex<double>> sorted_eigenvalues(const Mat& m) {
  Eigen::EigenSolver<Mat> solver(m, false);
  const auto& ev = solver.eigenvalues();
  std::vector<std::complex<double>> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), [](auto a, auto b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

SpectralReport spectral_type(const Derivation& d, double tol) {
  const int n = d.n();
  const Mat block = d.matrix().topLeftCorner(2 * n, 2 * n);
  SpectralReport report;
  report.eigenvalues = sorted_eigenvalues(block);

  // Nilpotent blocks give eigenvalues of size ~ eps^(1/k); decide those by the power test.
  Mat power = Mat::Identity(2 * n, 2 * n);
  for (int k = 0; k < 2 * n; ++k) power = power * block;
  const double scale = std::max(1.0, std::pow(max_abs(block), 2 * n));
  if (max_abs(power) <= tol * scale) {
    report.type = SpectralType::unipotent;
    report.diagnostic = "restriction to a+ (+) a- is nilpotent";
    return report;
  }

  bool has_real = false;
  bool has_imag = false;
  bool has_other = false;
  for (const auto& ev : report.eigenvalues) {
    if (std::abs(ev) <= tol) continue;
    const bool re = std::abs(ev.real()) > tol;
    const bool im = std::abs(ev.imag()) > tol;
    if (re && im) has_other = true;
    else if (re) has_real = true;
    else has_imag = true;
  }
  if (has_other || (has_real && has_imag)) {
    report.type = SpectralType::mixed;
    report.diagnostic = "nonzero spectrum is neither purely real nor purely imaginary";
  } else if (has_real) {
    report.type = SpectralType::hyperbolic;
  } else if (has_imag) {
    report.type = SpectralType::elliptic;
  } else {
    report.type = SpectralType::unipotent;
  }
  return report;
}

}  // namespace pwave
