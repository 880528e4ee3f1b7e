#include "oracles.hpp"
#include "pwave/conformal_group.hpp"
#include "pwave/expm.hpp"

#include <doctest.h>

#include <cmath>

using namespace pwave;

TEST_SUITE("lie_core") {

TEST_CASE("expm agrees with the reference matrix exponential") {
  std::mt19937_64 rng(11);
  for (double scale : {1e-3, 0.1, 1.0, 5.0, 20.0}) {
    for (int trial = 0; trial < 10; ++trial) {
      Mat a(5, 5);
      for (int i = 0; i < 25; ++i) a(i / 5, i % 5) = oracle::random_vec(rng, 1, scale)(0);
      const Mat ref = oracle::expm(a);
      const double rel = max_abs(expm(a) - ref) / std::max(1.0, max_abs(ref));
      CHECK(rel < 1e-12);
    }
  }
  CHECK(max_abs(expm(Mat::Zero(3, 3)) - Mat::Identity(3, 3)) == 0.0);
}

TEST_CASE("heis_mul reproduces the affine matrix model") {
  std::mt19937_64 rng(1);
  for (int n : {1, 2, 3}) {
    for (int i = 0; i < 50; ++i) {
      const auto a = oracle::random_heis(rng, n), b = oracle::random_heis(rng, n);
      const Mat prod = oracle::heis_matrix(a) * oracle::heis_matrix(b);
      CHECK(max_abs(oracle::heis_matrix(heis_mul(a, b)) - prod) < 1e-15);
      CHECK(max_abs(oracle::heis_matrix(heis_inv(a)) - oracle::heis_matrix(a).inverse()) < 1e-13);
    }
  }
}

TEST_CASE("heis_mul examples") {
  const auto one = HeisElement{Vec::Ones(1), Vec::Zero(1), 0.0};
  const auto two = HeisElement{Vec::Zero(1), Vec::Ones(1), 0.0};
  const auto ab = heis_mul(one, two), ba = heis_mul(two, one);
  CHECK(ab.alpha(0) == 1.0);
  CHECK(ab.beta(0) == 1.0);
  CHECK(ab.z == 1.0);
  CHECK(ba.z == 0.0);
  const auto h = HeisElement{Vec::Constant(2, 0.3), Vec::Constant(2, -1.2), 0.7};
  CHECK(log_distance(heis_mul(h, HeisElement::identity(2)), h) == 0.0);
  CHECK(heis_mul(HeisElement::center(2, 1.5), HeisElement::center(2, 2.0)).z == 3.5);
  CHECK_THROWS_AS(heis_mul(h, HeisElement::identity(3)), DimensionError);
}

TEST_CASE("heis_mul is associative on 1000 random triples") {
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = oracle::random_heis(rng, 3), b = oracle::random_heis(rng, 3),
               c = oracle::random_heis(rng, 3);
    worst = std::max(worst, log_distance(heis_mul(heis_mul(a, b), c), heis_mul(a, heis_mul(b, c))));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("heis_exp matches the nilpotent matrix exponential and log inverts it") {
  const auto e = heis_exp(HeisAlgebraElement{Vec::Ones(1), Vec::Ones(1), 0.0});
  CHECK(e.z == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(log_norm(heis_exp(HeisAlgebraElement::zero(2))) == 0.0);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 3;
    const auto x = HeisAlgebraElement::from_coords(oracle::random_vec(rng, 2 * n + 1, 2.0));
    Mat gen = Mat::Zero(n + 2, n + 2);
    gen.block(0, 1, 1, n) = x.a_plus.transpose();
    gen(0, n + 1) = x.z;
    gen.block(1, n + 1, n, 1) = x.a_minus;
    CHECK(max_abs(oracle::heis_matrix(heis_exp(x)) - oracle::expm(gen)) < 1e-13);
    CHECK((heis_log(heis_exp(x)).coords() - x.coords()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("bracket is central, antisymmetric and matches the group commutator") {
  std::mt19937_64 rng(4);
  const auto x = HeisAlgebraElement::from_coords(oracle::random_vec(rng, 5));
  const auto y = HeisAlgebraElement::from_coords(oracle::random_vec(rng, 5));
  const auto xy = bracket(x, y), yx = bracket(y, x);
  CHECK(xy.a_plus.norm() == 0.0);
  CHECK(xy.a_minus.norm() == 0.0);
  CHECK(xy.z == doctest::Approx(-yx.z));
  CHECK(xy.z == doctest::Approx(x.a_plus.dot(y.a_minus) - y.a_plus.dot(x.a_minus)));
  const auto c = heis_commutator(heis_exp(x), heis_exp(y));
  CHECK(c.alpha.norm() == 0.0);
  CHECK(c.z == doctest::Approx(xy.z).epsilon(1e-12));
}

TEST_CASE("derivations: law, H, L-form, spectrum") {
  const Mat f = Mat::Zero(2, 2);
  const auto l = Derivation::l_form(f, oracle::cw4_B());
  CHECK(l.law_residual() < 1e-12);
  CHECK(Derivation::homothety(3).law_residual() < 1e-12);
  Vec hd(5);
  hd << 1, 1, 1, 1, 2;
  CHECK(max_abs(Derivation::homothety(2).matrix() - Mat(hd.asDiagonal())) == 0.0);

  const auto ev = sorted_eigenvalues(l.matrix());
  const double expect[] = {-3, -1, 0, 1, 3};
  REQUIRE(ev.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(ev[i].real() - expect[i]) < 1e-10);
    CHECK(std::abs(ev[i].imag()) < 1e-10);
  }
  CHECK_THROWS_AS(Derivation::l_form(Mat::Identity(2, 2), oracle::cw4_B()), PreconditionError);
  Mat nonsym = oracle::cw4_B();
  nonsym(0, 1) += 1.0;
  CHECK_THROWS_AS(Derivation::l_form(f, nonsym), PreconditionError);

  Mat bad = Mat::Zero(3, 3);
  bad(0, 0) = 1.0;
  CHECK(Derivation(bad).law_residual() > 0.5);
  CHECK_THROWS_AS(exp_derivation(Derivation(bad), 1.0), PreconditionError);
}

TEST_CASE("exp_derivation: identity, H, flow law, bracket preservation") {
  const auto l = Derivation::l_form(oracle::rotation2(0.0) - Mat::Identity(2, 2), 2.0 * Mat::Identity(2, 2));
  CHECK(max_abs(exp_derivation(l, 0.0).matrix() - Mat::Identity(5, 5)) == 0.0);
  const auto eh = exp_derivation(Derivation::homothety(2), 1.0).matrix();
  Vec d(5);
  d << M_E, M_E, M_E, M_E, M_E * M_E;
  CHECK(max_abs(eh - Mat(d.asDiagonal())) < 1e-13);

  Mat f(2, 2);
  f << 0, 0.7, -0.7, 0;
  const auto lf = Derivation::l_form(f, 3.0 * Mat::Identity(2, 2));
  for (double s : {-0.8, 0.3, 1.1})
    for (double t : {-0.4, 0.9}) {
      const Mat lhs = exp_derivation(lf, s).compose(exp_derivation(lf, t)).matrix();
      CHECK(max_abs(lhs - exp_derivation(lf, s + t).matrix()) < 1e-10);
      CHECK(exp_derivation(lf, s).bracket_residual() < 1e-10);
    }
}

TEST_CASE("automorphisms act as homomorphisms; K embeds as diag(k, k, 1)") {
  std::mt19937_64 rng(5);
  const auto phi = exp_derivation(Derivation::l_form(Mat::Zero(2, 2), oracle::cw4_B()), 0.37);
  for (int i = 0; i < 20; ++i) {
    const auto a = oracle::random_heis(rng, 2), b = oracle::random_heis(rng, 2);
    CHECK(log_distance(phi.apply(heis_mul(a, b)), heis_mul(phi.apply(a), phi.apply(b))) < 1e-12);
  }
  const Mat k = oracle::rotation2(0.4);
  const Mat rk = HeisAutomorphism::from_orthogonal(k).matrix();
  CHECK(max_abs(rk.block(0, 0, 2, 2) - k) == 0.0);
  CHECK(max_abs(rk.block(2, 2, 2, 2) - k) == 0.0);
  CHECK(rk(4, 4) == 1.0);
  CHECK(max_abs(rk.block(0, 2, 2, 2)) == 0.0);
  CHECK_THROWS_AS(HeisAutomorphism::from_orthogonal(2.0 * k), PreconditionError);
}

TEST_CASE("group law: identity, conjugation by exp(H), associativity, inverse") {
  const auto spec = ModelSpec::cahen_wallach(oracle::cw4_B(), Mat::Zero(2, 2), {-Mat::Identity(2, 2)});
  const auto L = spec.L();
  std::mt19937_64 rng(6);
  auto random_g = [&] {
    std::uniform_real_distribution<double> u(-1, 1);
    const Mat k = u(rng) > 0 ? Mat(Mat::Identity(2, 2)) : Mat(-Mat::Identity(2, 2));
    return make_conf_element(L, u(rng), u(rng), k, oracle::random_heis(rng, 2));
  };
  const auto g = random_g();
  CHECK(group_distance(group_mul(g, conf_identity(L)), g) < 1e-15);
  CHECK(is_identity(group_mul(g, group_inv(g)), 1e-12));

  const auto a = make_conf_element(L, 1.0, 0.0, Mat::Identity(2, 2), HeisElement::identity(2));
  const auto c = group_mul(group_mul(a, conf_from_heis(L, HeisElement::center(2, 1.0))), group_inv(a));
  CHECK(c.t_H == 0.0);
  CHECK(c.x.z == doctest::Approx(std::exp(2.0)).epsilon(1e-13));
  CHECK(c.x.alpha.norm() < 1e-14);

  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto g1 = random_g(), g2 = random_g(), g3 = random_g();
    worst = std::max(worst, group_distance(group_mul(group_mul(g1, g2), g3),
                                           group_mul(g1, group_mul(g2, g3))));
  }
  CHECK(worst < 1e-10);

  const auto other = ModelSpec::cahen_wallach(2.0 * Mat::Identity(2, 2));
  CHECK_THROWS_AS(group_mul(g, conf_identity(other.L())), PreconditionError);
  CHECK_THROWS_AS(make_conf_element(L, 0, 0, oracle::rotation2(0.3), HeisElement::identity(2)),
                  PreconditionError);
}

TEST_CASE("projections are homomorphisms and adjoint is multiplicative") {
  const auto spec = ModelSpec::cahen_wallach(oracle::cw4_B());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 20; ++i) {
    const auto g1 = make_conf_element(spec.L(), u(rng), u(rng), Mat::Identity(2, 2), oracle::random_heis(rng, 2));
    const auto g2 = make_conf_element(spec.L(), u(rng), u(rng), -Mat::Identity(2, 2), oracle::random_heis(rng, 2));
    const auto g = group_mul(g1, g2);
    CHECK(g.t_H == doctest::Approx(g1.t_H + g2.t_H));
    CHECK(g.t_L == doctest::Approx(g1.t_L + g2.t_L));
    CHECK(max_abs(g.k - g1.k * g2.k) == 0.0);
    const Mat lhs = adjoint(g), rhs = adjoint(g1) * adjoint(g2);
    CHECK(max_abs(lhs - rhs) / std::max(1.0, max_abs(rhs)) < 1e-10);
  }
}

TEST_CASE("conjugate_to_linear") {
  const auto spec1 = ModelSpec::cahen_wallach(Mat::Constant(1, 1, 1.0));
  const auto L = spec1.L();
  const auto lin = make_conf_element(L, 0.7, 0.2, Mat::Identity(1, 1), HeisElement::identity(1));
  CHECK(log_norm(conjugate_to_linear(lin)) < 1e-14);

  const auto g = make_conf_element(L, 1.0, 0.0, Mat::Identity(1, 1),
                                   HeisElement{Vec::Ones(1), Vec::Ones(1), 1.0});
  const auto x1 = conf_from_heis(L, conjugate_to_linear(g));
  const auto r = group_mul(group_mul(x1, g), group_inv(x1));
  CHECK(log_norm(r.x) < 1e-12);
  CHECK(r.t_H == doctest::Approx(1.0));

  const auto iso = make_conf_element(L, 0.0, 0.8, Mat::Identity(1, 1), HeisElement{Vec::Ones(1), Vec::Zero(1), 0.0});
  CHECK_THROWS_AS(conjugate_to_linear(iso), PreconditionError);
}

TEST_CASE("contraction_test verdicts") {
  const auto hyper = ModelSpec::cahen_wallach(Mat::Constant(1, 1, 1.0));
  const auto h = conf_from_heis(hyper.L(), HeisElement{Vec::Ones(1), Vec::Constant(1, -0.5), 0.3});
  const auto id = contraction_test(conf_identity(hyper.L()), h, 10);
  CHECK(id.verdict == ContractionVerdict::bounded);
  CHECK(id.max_norm - id.min_norm < 1e-14);

  const auto shrink = make_conf_element(hyper.L(), -1.0, 0.0, Mat::Identity(1, 1), HeisElement::identity(1));
  const auto c = contraction_test(shrink, h, 60);
  CHECK(c.verdict == ContractionVerdict::contracting);
  for (std::size_t k = 1; k < c.norms.size(); ++k) CHECK(c.norms[k] < c.norms[k - 1]);

  const auto elliptic = ModelSpec::cahen_wallach(Mat::Constant(1, 1, -4.0));
  const auto rot = make_conf_element(elliptic.L(), 0.0, 0.9, Mat::Identity(1, 1), HeisElement::identity(1));
  const auto e = contraction_test(rot, conf_from_heis(elliptic.L(), HeisElement{Vec::Ones(1), Vec::Zero(1), 0.0}), 500);
  CHECK(e.verdict == ContractionVerdict::bounded);
  CHECK(e.max_norm - e.min_norm > 1e-3);
}

TEST_CASE("spectral_type classification") {
  auto type = [](double b) {
    return spectral_type(*ModelSpec::cahen_wallach(Mat::Constant(1, 1, b)).L()).type;
  };
  CHECK(type(1.0) == SpectralType::hyperbolic);
  CHECK(type(-2.0) == SpectralType::elliptic);
  CHECK(type(0.0) == SpectralType::unipotent);
  Mat b(2, 2);
  b << 1, 0, 0, -1;
  CHECK(spectral_type(*ModelSpec::cahen_wallach(b).L()).type == SpectralType::mixed);
}

}  // TEST_SUITE
