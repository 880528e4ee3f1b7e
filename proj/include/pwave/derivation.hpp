#pragma once

#include "pwave/common.hpp"
#include "pwave/heisenberg.hpp"

#include <complex>
#include <string>
#include <vector>

namespace pwave {

/// Linear map on heis_{2n+1}, written in the ordered basis (a+, a-, z).
///
/// The raw constructor stores any square matrix of size 2n+1; law_residual()
/// reports how far it is from satisfying D[X,Y] = [DX,Y] + [X,DY].
class Derivation {
 public:
  explicit Derivation(Mat m);

  /// The isometry-flow generator [[F, B, 0], [I, F, 0], [0, 0, 0]].
  /// F must be antisymmetric and B symmetric (to 1e-12).
  static Derivation l_form(const Mat& f, const Mat& b);
  /// The homothety generator diag(I_n, I_n, 2).
  static Derivation homothety(int n);

  const Mat& matrix() const { return m_; }
  int n() const { return n_; }
  /// Max violation of the derivation law over all basis pairs.
  double law_residual() const;

 private:
  Mat m_;
  int n_;
};

/// Automorphism of Heis_{2n+1} acting on log-coordinates: x -> exp(M log x).
class HeisAutomorphism {
 public:
  explicit HeisAutomorphism(Mat m);
  static HeisAutomorphism identity(int n);
  /// K-part embedding diag(k, k, 1); k must be orthogonal.
  static HeisAutomorphism from_orthogonal(const Mat& k);

  const Mat& matrix() const { return m_; }
  int n() const { return n_; }

  HeisElement apply(const HeisElement& x) const;
  HeisAlgebraElement apply(const HeisAlgebraElement& x) const;
  HeisAutomorphism compose(const HeisAutomorphism& inner) const;
  HeisAutomorphism inverse() const;
  /// Max violation of phi[X,Y] = [phi X, phi Y] over basis pairs.
  double bracket_residual() const;

 private:
  Mat m_;
  int n_;
};

/// exp(t D); throws PreconditionError when D violates the derivation law beyond 1e-10.
HeisAutomorphism exp_derivation(const Derivation& d, double t);

enum class SpectralType { hyperbolic, elliptic, unipotent, mixed };

std::string to_string(SpectralType t);

struct SpectralReport {
  SpectralType type = SpectralType::unipotent;
  std::vector<std::complex<double>> eigenvalues;  // of D restricted to a+ (+) a-
  std::string diagnostic;
};

/// Classify the nonzero spectrum of D on a+ (+) a- (real: hyperbolic, purely
/// imaginary: elliptic, none: unipotent, anything else: mixed).
SpectralReport spectral_type(const Derivation& d, double tol = 1e-9);

/// Eigenvalues of a real matrix sorted by (real, imag).
std::vector<std::complex<double>> sorted_eigenvalues(const Mat& m);

}  // namespace pwave
