#include "pwave/heisenberg.hpp"

namespace pwave {

HeisAlgebraElement HeisAlgebraElement::zero(int n) {
  return {Vec::Zero(n), Vec::Zero(n), 0.0};
}

HeisAlgebraElement HeisAlgebraElement::from_coords(const Vec& c) {
  require_dim(c.size() % 2 == 1, "heis coordinates must have odd length 2n+1");
  const auto n = (c.size() - 1) / 2;
  return {c.head(n), c.segment(n, n), c(2 * n)};
}

Vec HeisAlgebraElement::coords() const {
  Vec c(2 * n() + 1);
  c << a_plus, a_minus, z;
  return c;
}

HeisAlgebraElement bracket(const HeisAlgebraElement& x, const HeisAlgebraElement& y) {
  require_dim(x.n() == y.n(), "bracket: dimension mismatch");
  auto r = HeisAlgebraElement::zero(x.n());
  r.z = x.a_plus.dot(y.a_minus) - y.a_plus.dot(x.a_minus);
  return r;
}

HeisElement HeisElement::identity(int n) { return {Vec::Zero(n), Vec::Zero(n), 0.0}; }

HeisElement HeisElement::center(int n, double c) { return {Vec::Zero(n), Vec::Zero(n), c}; }

HeisElement HeisElement::from_coords(const Vec& c) {
  require_dim(c.size() % 2 == 1, "heis coordinates must have odd length 2n+1");
  const auto n = (c.size() - 1) / 2;
  return {c.head(n), c.segment(n, n), c(2 * n)};
}

Vec HeisElement::coords() const {
  Vec c(2 * n() + 1);
  c << alpha, beta, z;
  return c;
}

HeisElement heis_mul(const HeisElement& h1, const HeisElement& h2) {
  require_dim(h1.n() == h2.n(), "heis_mul: dimension mismatch");
  return {h1.alpha + h2.alpha, h1.beta + h2.beta, h1.z + h2.z + h1.alpha.dot(h2.beta)};
}

HeisElement heis_inv(const HeisElement& h) {
  return {-h.alpha, -h.beta, h.alpha.dot(h.beta) - h.z};
}

HeisElement heis_exp(const HeisAlgebraElement& x) {
  return {x.a_plus, x.a_minus, x.z + 0.5 * x.a_plus.dot(x.a_minus)};
}

HeisAlgebraElement heis_log(const HeisElement& h) {
  return {h.alpha, h.beta, h.z - 0.5 * h.alpha.dot(h.beta)};
}

HeisElement heis_commutator(const HeisElement& h1, const HeisElement& h2) {
  return heis_mul(heis_mul(h1, h2), heis_mul(heis_inv(h1), heis_inv(h2)));
}

double log_norm(const HeisElement& h) { return heis_log(h).coords().norm(); }

double log_distance(const HeisElement& h1, const HeisElement& h2) {
  require_dim(h1.n() == h2.n(), "log_distance: dimension mismatch");
  return (heis_log(h1).coords() - heis_log(h2).coords()).cwiseAbs().maxCoeff();
}

}  // namespace pwave
