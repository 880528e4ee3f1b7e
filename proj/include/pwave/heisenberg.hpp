#pragma once

#include "pwave/common.hpp"

namespace pwave {

/// Element of heis_{2n+1} in the splitting a+ (+) a- (+) z.
///
/// The bracket is [X, Y] = (0, 0, X.a_plus . Y.a_minus - Y.a_plus . X.a_minus).
struct HeisAlgebraElement {
  Vec a_plus;
  Vec a_minus;
  double z = 0.0;

  static HeisAlgebraElement zero(int n);
  /// Coordinates (a_plus, a_minus, z) stacked into a vector of length 2n+1.
  static HeisAlgebraElement from_coords(const Vec& c);

  int n() const { return static_cast<int>(a_plus.size()); }
  Vec coords() const;
};

HeisAlgebraElement bracket(const HeisAlgebraElement& x, const HeisAlgebraElement& y);

/// Point of Heis_{2n+1} in the affine matrix model
///
///     | 1  alpha^T  z    |
///     | 0  I_n      beta |
///     | 0  0        1    |
///
/// so that (a1, b1, z1)(a2, b2, z2) = (a1 + a2, b1 + b2, z1 + z2 + a1.b2).
struct HeisElement {
  Vec alpha;
  Vec beta;
  double z = 0.0;

  static HeisElement identity(int n);
  static HeisElement center(int n, double c);
  static HeisElement from_coords(const Vec& c);

  int n() const { return static_cast<int>(alpha.size()); }
  Vec coords() const;
};

HeisElement heis_mul(const HeisElement& h1, const HeisElement& h2);
HeisElement heis_inv(const HeisElement& h);

/// Exact exponential of the 2-step nilpotent algebra: exp(a, b, c) = (a, b, c + a.b/2).
HeisElement heis_exp(const HeisAlgebraElement& x);
HeisAlgebraElement heis_log(const HeisElement& h);

/// Group commutator h1 h2 h1^-1 h2^-1 (always central).
HeisElement heis_commutator(const HeisElement& h1, const HeisElement& h2);

/// Euclidean norm of the log-coordinates.
double log_norm(const HeisElement& h);

/// Max-abs distance between log-coordinates.
double log_distance(const HeisElement& h1, const HeisElement& h2);

}  // namespace pwave
