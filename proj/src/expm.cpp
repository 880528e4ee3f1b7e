#include "pwave/expm.hpp"

#include <array>
#include <cmath>

namespace pwave {
namespace {

// theta_m for double precision, m = 3, 5, 7, 9, 13.
constexpr std::array<double, 5> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0,
                                          5.371920351148152e0};

void pade_low(const Mat& a, int m, Mat& u, Mat& v) {
  static const double b3[] = {120., 60., 12., 1.};
  static const double b5[] = {30240., 15120., 3360., 420., 30., 1.};
  static const double b7[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
  static const double b9[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                              2162160.,     110880.,     3960.,       90.,         1.};
  const double* b = m == 3 ? b3 : m == 5 ? b5 : m == 7 ? b7 : b9;
  const Mat id = Mat::Identity(a.rows(), a.cols());
  const Mat a2 = a * a;
  Mat pow = id;
  Mat odd = Mat::Zero(a.rows(), a.cols());
  Mat even = Mat::Zero(a.rows(), a.cols());
  for (int k = 0; k <= m / 2; ++k) {
    odd += b[2 * k + 1] * pow;
    even += b[2 * k] * pow;
    pow = pow * a2;
  }
  u = a * odd;
  v = even;
}

void pade13(const Mat& a, Mat& u, Mat& v) {
  static const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                             1187353796428800.,  129060195264000.,   10559470521600.,
                             670442572800.,      33522128640.,       1323241920.,
                             40840800.,          960960.,            16380.,
                             182.,               1.};
  const Mat id = Mat::Identity(a.rows(), a.cols());
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  const Mat tu = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                 b[3] * a2 + b[1] * id;
  u = a * tu;
  v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
      b[0] * id;
}

}  // namespace

Mat expm(const Mat& a) {
  require_dim(a.rows() == a.cols(), "expm: matrix must be square");
  if (a.size() == 0) return a;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  Mat u, v;
  constexpr std::array<int, 4> kLowOrders = {3, 5, 7, 9};
  for (std::size_t i = 0; i < kLowOrders.size(); ++i) {
    if (norm1 <= kTheta[i]) {
      pade_low(a, kLowOrders[i], u, v);
      return (v - u).partialPivLu().solve(v + u);
    }
  }
  int squarings = 0;
  if (norm1 > kTheta[4]) squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta[4])));
  const Mat scaled = a / std::ldexp(1.0, squarings);
  pade13(scaled, u, v);
  Mat r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

}  // namespace pwave
