#include "oracles.hpp"
#include "pwave/quotient.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <cmath>
#include <complex>

using namespace pwave;

namespace {

double bracket_closure_residual(const Mat& basis) {
  const Mat proj = basis * basis.transpose();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < basis.cols(); ++i)
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
      const Vec br = bracket(HeisAlgebraElement::from_coords(basis.col(i)),
                             HeisAlgebraElement::from_coords(basis.col(j)))
                         .coords();
      worst = std::max(worst, (br - proj * br).cwiseAbs().maxCoeff());
    }
  return worst;
}

// d(t) straight from the definition: orthonormalize e^{tL} n0 and take the
// product of the singular values of [Q | a+].
double direct_d(const Mat& l, const Mat& n0, int n, double t) {
  const Mat moved = oracle::expm(t * l) * n0;
  const Mat q = Eigen::HouseholderQR<Mat>(moved).householderQ() * Mat::Identity(moved.rows(), moved.cols());
  Mat stacked(q.rows(), q.cols() + n);
  stacked << q, a_plus_basis(n);
  const Vec sv = Eigen::JacobiSVD<Mat>(stacked).singularValues();
  return sv.prod();
}

std::vector<double> poly_from_eigenvalues(const Mat& a) {
  const auto ev = Eigen::EigenSolver<Mat>(a).eigenvalues();
  std::vector<std::complex<double>> c{1.0};
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    c.push_back(0.0);
    for (std::size_t k = c.size() - 1; k > 0; --k) c[k] -= ev(i) * c[k - 1];
  }
  std::vector<double> out;
  for (const auto& x : c) out.push_back(x.real());
  return out;
}

}  // namespace

TEST_SUITE("quotient") {

TEST_CASE("malcev_closure") {
  const HeisElement e1{Vec::Ones(1), Vec::Zero(1), 0.0}, f1{Vec::Zero(1), Vec::Ones(1), 0.0};
  const Mat one = malcev_closure({heis_exp({Vec::Constant(1, 2.0), Vec::Constant(1, 1.0), 0.5})});
  CHECK(one.cols() == 1);
  Vec dir(3);
  dir << 2.0, 1.0, 0.5;
  CHECK(std::abs(std::abs(one.col(0).dot(dir.normalized())) - 1.0) < 1e-14);

  const Mat all = malcev_closure({e1, f1});
  CHECK(all.cols() == 3);
  CHECK(max_abs(all.transpose() * all - Mat::Identity(3, 3)) < 1e-14);

  const HeisElement a1{Vec::Unit(2, 0), Vec::Zero(2), 0.0}, a2{Vec::Unit(2, 1), Vec::Zero(2), 0.0};
  const Mat plus = malcev_closure({a1, a2});
  CHECK(plus.cols() == 2);
  CHECK(plus.row(4).norm() < 1e-15);
  CHECK(malcev_closure({}).size() == 0);

  std::mt19937_64 rng(13);
  for (int i = 0; i < 10; ++i) {
    const Mat b = malcev_closure({oracle::random_heis(rng, 2), oracle::random_heis(rng, 2)});
    CHECK(bracket_closure_residual(b) < 1e-12);
  }
}

TEST_CASE("properness: condition failures") {
  const auto ex = build_example("cw4", {true});
  const auto noL = make_conf_element(ex.spec.L(), 0.5, 0.0, Mat::Identity(2, 2), HeisElement::identity(2));
  const auto r1 = properness_check(ex.spec, ex.n_basis, noL);
  CHECK_FALSE(r1.cond_pL);
  CHECK(r1.verdict == ProperVerdict::fail);

  Mat bad = ex.n_basis;
  bad.col(0) = Vec::Unit(5, 0);
  const auto r2 = properness_check(ex.spec, bad, ex.gamma_hat);
  CHECK_FALSE(r2.cond_intersection_at_0);
  CHECK_FALSE(r2.cond_intersection_d0);
  CHECK(r2.verdict == ProperVerdict::fail);
  REQUIRE(r2.witness.has_value());
  CHECK(r2.witness->tail(3).norm() < 1e-12);
  CHECK(r2.witness->norm() > 0.5);

  const auto r3 = properness_check(ex.spec, ex.n_basis.leftCols(2), ex.gamma_hat);
  CHECK_FALSE(r3.cond_dim);
  CHECK(r3.verdict == ProperVerdict::fail);

  Mat deficient = ex.n_basis;
  deficient.col(1) = deficient.col(0);
  CHECK_THROWS_AS(properness_check(ex.spec, deficient, ex.gamma_hat), PreconditionError);
  CHECK_THROWS_AS(properness_check(ex.spec, ex.n_basis, ex.gamma_hat, {1.0, 0.0, 10}), PreconditionError);
}

TEST_CASE("properness: contracting eigendirections pass on [-20, 20]") {
  const auto ex = build_example("cw4", {true});
  const auto r = properness_check(ex.spec, ex.n_basis, ex.gamma_hat);
  CHECK(r.cond_pL);
  CHECK(r.cond_intersection_at_0);
  CHECK(r.cond_dim);
  CHECK(r.dim_n0 == 3);
  CHECK(r.t_values.size() == 4001);
  CHECK(r.d_values.size() == 4001);
  CHECK(r.min_transversality > 1e-7);
  CHECK(r.tail_min > 1e-7);
  CHECK(r.verdict == ProperVerdict::pass);
  CHECK(to_string(r.verdict) == "pass");
  // n0 is L-invariant, so d(t) is constant and equal to its value at t = 0
  const double d0 = direct_d(ex.spec.L()->matrix(), ex.n_basis, 2, 0.0);
  double spread = 0.0;
  for (double d : r.d_values) spread = std::max(spread, std::abs(d - d0));
  CHECK(spread < 1e-8);
  CHECK(d0 == doctest::Approx(r.min_transversality).epsilon(1e-8));
}

TEST_CASE("properness: a generic n0 agrees with the direct definition") {
  const auto spec = ModelSpec::cahen_wallach(oracle::cw4_B());
  Mat n0(5, 3);
  n0 << 0.3, 0.1, 0.0,
        -0.2, 0.4, 0.0,
        1.0, 0.0, 0.2,
        0.5, 1.0, -0.1,
        0.0, 0.3, 1.0;
  const auto gh = make_conf_element(spec.L(), 0.2, 0.4, Mat::Identity(2, 2), HeisElement::identity(2));
  const auto r = properness_check(spec, n0, gh, {-2.0, 2.0, 81});
  for (std::size_t i = 0; i < r.t_values.size(); ++i) {
    const double ref = direct_d(spec.L()->matrix(), n0, 2, r.t_values[i]);
    CHECK(std::abs(r.d_values[i] - ref) < 1e-9);
  }
}

TEST_CASE("characteristic polynomial matches the eigenvalue expansion") {
  std::mt19937_64 rng(14);
  for (int m = 1; m <= 6; ++m) {
    Mat a(m, m);
    for (int i = 0; i < m; ++i) a.col(i) = oracle::random_vec(rng, m, 2.0);
    const auto cp = characteristic_polynomial(a), ref = poly_from_eigenvalues(a);
    REQUIRE(cp.size() == static_cast<std::size_t>(m + 1));
    CHECK(cp[0] == 1.0);
    for (int k = 0; k <= m; ++k) CHECK(std::abs(cp[k] - ref[k]) < 1e-10 * std::pow(4.0, m));
  }
}

TEST_CASE("lattice_preservation verdicts") {
  Mat cat(2, 2);
  cat << 2, 1, 1, 1;
  const auto c1 = lattice_preservation(cat);
  CHECK(c1.verdict == LatticeVerdict::preserved);
  CHECK(max_abs(c1.basis - Mat::Identity(2, 2)) == 0.0);

  const double lam = (3.0 + std::sqrt(5.0)) / 2.0;
  const Mat hyp = Vec((Vec(2) << lam, 1.0 / lam).finished()).asDiagonal();
  const auto c2 = lattice_preservation(hyp);
  CHECK(c2.verdict == LatticeVerdict::preserved);
  CHECK(std::abs(c2.char_poly[1] + 3.0) < 1e-12);
  CHECK(std::abs(c2.char_poly[2] - 1.0) < 1e-12);
  CHECK(c2.verification_residual <= 1e-8);
  const Mat back = hyp * c2.basis - c2.basis * c2.integer_action;
  CHECK(max_abs(back) < 1e-8);
  CHECK(max_abs(c2.integer_action - c2.integer_action.array().round().matrix()) == 0.0);

  const Mat e2 = Vec((Vec(2) << std::exp(2.0), std::exp(-2.0)).finished()).asDiagonal();
  const auto c3 = lattice_preservation(e2);
  CHECK(c3.verdict == LatticeVerdict::not_preserved);
  REQUIRE(c3.offending_coefficient.has_value());
  CHECK(*c3.offending_coefficient == 1);
  CHECK(std::abs(c3.char_poly[1] + 7.5243914) < 1e-6);

  const double mu = (3.0 + 1e-5 + std::sqrt(std::pow(3.0 + 1e-5, 2) - 4.0)) / 2.0;
  const Mat near = Vec((Vec(2) << mu, 1.0 / mu).finished()).asDiagonal();
  CHECK(lattice_preservation(near).verdict == LatticeVerdict::inconclusive);

  Mat det2(2, 2);
  det2 << 2, 0, 0, 1;
  CHECK(lattice_preservation(det2).verdict == LatticeVerdict::not_preserved);

  Mat rot = Mat::Identity(4, 4);
  rot.topLeftCorner(2, 2) = oracle::rotation2(0.3);
  rot.bottomRightCorner(2, 2) = oracle::rotation2(-1.1);
  Mat perm = Mat::Zero(4, 4);
  perm(0, 0) = perm(1, 2) = perm(2, 1) = perm(3, 3) = 1.0;
  const Mat q = rot * perm;
  const Mat doubled = q * Vec((Vec(4) << lam, lam, 1 / lam, 1 / lam).finished()).asDiagonal() * q.transpose();
  CHECK(lattice_preservation(doubled).verdict == LatticeVerdict::inconclusive);

  CHECK_THROWS_AS(lattice_preservation(Mat::Zero(2, 2)), PreconditionError);
}

TEST_CASE("bundled examples") {
  const auto cw = build_example("cw4");
  const double ev[] = {-3, -1, 0, 1, 3};
  for (int i = 0; i < 5; ++i) CHECK(std::abs(cw.l_eigenvalues[static_cast<std::size_t>(i)] - std::complex<double>(ev[i], 0)) < 1e-10);
  CHECK(cw.lattice.verdict == LatticeVerdict::not_preserved);
  CHECK_FALSE(cw.gamma.has_value());
  CHECK_FALSE(cw.diagnostics.empty());

  const auto cwa = build_example("cw4", {true});
  CHECK(cwa.lattice.verdict == LatticeVerdict::preserved);
  REQUIRE(cwa.gamma.has_value());
  CHECK(validate_gamma(*cwa.gamma).ok());
  CHECK(cwa.gamma->gamma0.size() == 3);

  const auto ex1 = build_example("example1", {true});
  CHECK(max_abs(ex1.restriction - cwa.restriction) == 0.0);

  const auto e2 = build_example("example2");
  CHECK(e2.lattice.verdict == LatticeVerdict::not_preserved);
  CHECK(std::abs(e2.lattice.char_poly[1] + (std::exp(2.0) + std::exp(-2.0))) < 1e-9);
  for (double b : {0.5, 1.0, 4.0}) {
    const auto e2a = build_example("example2", {true, b});
    CHECK(e2a.lattice.verdict == LatticeVerdict::preserved);
    CHECK(std::abs(e2a.lattice.char_poly[1] + 3.0) < 1e-9);
    REQUIRE(e2a.gamma.has_value());
    CHECK(properness_check(e2a.spec, malcev_closure(e2a.gamma->gamma0), e2a.gamma_hat).verdict ==
          ProperVerdict::pass);
  }
  CHECK_THROWS_AS(build_example("example2", {false, -1.0}), PreconditionError);
  CHECK_THROWS_AS(build_example("nope"), PreconditionError);
  CHECK(std::abs(std::exp(2 * adjusted_time_scale()) + std::exp(-2 * adjusted_time_scale()) - 3.0) < 1e-14);
}

TEST_CASE("membership") {
  const auto ex = build_example("example2", {true});
  const auto& gamma = *ex.gamma;
  const auto L = ex.spec.L();
  const auto g0 = conf_from_heis(L, gamma.gamma0[0]);
  const auto g = group_mul(group_pow(ex.gamma_hat, 3), g0);
  CHECK(membership(g, gamma));
  CHECK(membership(conf_identity(L), gamma));
  CHECK(membership(group_mul(group_inv(g0), group_pow(ex.gamma_hat, -2)), gamma));

  CHECK_FALSE(membership(conf_from_heis(L, heis_exp(HeisAlgebraElement::from_coords(0.5 * heis_log(gamma.gamma0[0]).coords()))), gamma));
  const auto root = make_conf_element(L, 0.5 * ex.gamma_hat.t_H, 0.5 * ex.gamma_hat.t_L, Mat::Identity(1, 1), HeisElement::identity(1));
  CHECK_FALSE(membership(root, gamma));
}

TEST_CASE("validate_gamma") {
  const auto spec = ModelSpec::cahen_wallach(Mat::Constant(1, 1, 1.0));
  const HeisElement e1{Vec::Ones(1), Vec::Zero(1), 0.0}, f1{Vec::Zero(1), Vec::Ones(1), 0.0};
  const auto v1 = validate_gamma({spec, std::nullopt, {e1, f1}});
  CHECK_FALSE(v1.abelian);
  CHECK(v1.max_commutator == doctest::Approx(1.0));
  CHECK_FALSE(v1.ok());
  CHECK_FALSE(v1.issues.empty());

  const auto v2 = validate_gamma({spec, std::nullopt, {e1, HeisElement::center(1, 1.0)}});
  CHECK(v2.abelian);
  CHECK_FALSE(v2.center_free);

  const auto v3 = validate_gamma({spec, std::nullopt, {e1, HeisElement{Vec::Constant(1, -2.0), Vec::Zero(1), 0.5}}});
  CHECK_FALSE(v3.center_free);

  const auto ex = build_example("example2", {true});
  auto gamma = *ex.gamma;
  CHECK(validate_gamma(gamma).ok());
  gamma.gamma_hat = make_conf_element(ex.spec.L(), 0.3, 0.9, Mat::Identity(1, 1), HeisElement::identity(1));
  const auto v4 = validate_gamma(gamma);
  CHECK_FALSE(v4.normalized);
  CHECK(v4.normalization_residual > 1e-3);
}

TEST_CASE("orbit separation") {
  const auto spec = ModelSpec::cahen_wallach(oracle::cw4_B());
  const auto o = BrinkmannPoint::origin(2);
  const auto trivial = orbit_separation({spec, std::nullopt, {}}, o, 4);
  CHECK(std::isinf(trivial.min_displacement));
  CHECK(trivial.words_enumerated == 0);

  for (const auto& p : sample_points(spec, 3, 1)) {
    const auto c = orbit_separation({spec, std::nullopt, {HeisElement::center(2, 1.0)}}, p, 3);
    CHECK(c.min_displacement == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.words_enumerated == 6);
  }

  const auto ex = build_example("example2", {true});
  const auto r = orbit_separation(*ex.gamma, BrinkmannPoint::origin(1), 4);
  CHECK(r.min_displacement > 1e-3);
  CHECK(r.identity_words_skipped > 0);
  CHECK_FALSE(r.witness_word.empty());
  CHECK_THROWS_AS(orbit_separation(*ex.gamma, BrinkmannPoint::origin(1), 4, 50), BudgetError);
  CHECK_THROWS_AS(orbit_separation(*ex.gamma, BrinkmannPoint::origin(1), 0), PreconditionError);
}

TEST_CASE("elliptic models: conjugation orbits accumulate at the identity") {
  const auto spec = ModelSpec::cahen_wallach(Mat::Constant(1, 1, -2.0));
  CHECK(spectral_type(*spec.L()).type == SpectralType::elliptic);
  const auto g = make_conf_element(spec.L(), -0.15, 0.8, Mat::Identity(1, 1), HeisElement::identity(1));
  const auto h = conf_from_heis(spec.L(), HeisElement{Vec::Ones(1), Vec::Constant(1, 0.5), 0.2});
  const auto rep = contraction_test(g, h, 200);
  double previous = std::numeric_limits<double>::infinity();
  for (int k_max : {10, 50, 100, 200}) {
    const double m = *std::min_element(rep.norms.begin(), rep.norms.begin() + k_max + 1);
    CHECK(m < previous);
    previous = m;
  }
  CHECK(previous < 1e-10);
}

}  // TEST_SUITE
