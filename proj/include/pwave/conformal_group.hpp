#pragma once

#include "pwave/derivation.hpp"
#include "pwave/heisenberg.hpp"

#include <memory>
#include <string>
#include <vector>

namespace pwave {

/// Element (a, x) of G = (R_H x R_L x K) |x Heis_{2n+1}, where
/// a = exp(t_H H) exp(t_L L) rho(k) acts on Heis by automorphisms.
///
/// Elements share the generator L by pointer; every binary operation checks
/// that both operands were built over the same L.
struct ConfGroupElement {
  double t_H = 0.0;
  double t_L = 0.0;
  Mat k;
  HeisElement x;
  std::shared_ptr<const Derivation> L;

  int n() const { return x.n(); }
};

/// Build an element, checking that k is orthogonal and that rho(k) commutes with L.
ConfGroupElement make_conf_element(std::shared_ptr<const Derivation> L, double t_H, double t_L,
                                   const Mat& k, const HeisElement& x);
ConfGroupElement conf_identity(std::shared_ptr<const Derivation> L);
/// Pure Heisenberg element (1, x).
ConfGroupElement conf_from_heis(std::shared_ptr<const Derivation> L, const HeisElement& x);

/// The automorphism part a = exp(t_H H) exp(t_L L) diag(k, k, 1).
HeisAutomorphism automorphism_part(const ConfGroupElement& g);

ConfGroupElement group_mul(const ConfGroupElement& g1, const ConfGroupElement& g2);
ConfGroupElement group_inv(const ConfGroupElement& g);
ConfGroupElement group_pow(const ConfGroupElement& g, long k);

/// Ad(g) on heis in log-coordinates: Ad(a, x) = Ad_x o a.
Mat adjoint(const ConfGroupElement& g);

/// Distance used for "equal up to tolerance": max over parameter and log-coordinate gaps.
double group_distance(const ConfGroupElement& g1, const ConfGroupElement& g2);
bool is_identity(const ConfGroupElement& g, double tol);

/// Returns x1 with x1 (a, x) x1^-1 = (a, 1); throws PreconditionError when a
/// has an eigenvalue within 1e-9 of 1.
HeisElement conjugate_to_linear(const ConfGroupElement& g);

enum class ContractionVerdict { contracting, bounded, diverging };
std::string to_string(ContractionVerdict v);

struct ContractionReport {
  std::vector<double> norms;  // norms[k] = |log Heis-part of g^k h g^-k|, k = 0..k_max
  ContractionVerdict verdict = ContractionVerdict::bounded;
  double min_norm = 0.0;
  double max_norm = 0.0;
};

/// Iterate h -> g h g^-1 and classify the orbit of the Heis-part.
ContractionReport contraction_test(const ConfGroupElement& g, const ConfGroupElement& h,
                                   int k_max);

}  // namespace pwave
