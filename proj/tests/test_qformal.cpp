#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "thetaver/json_io.hpp"
#include "thetaver/qformal.hpp"
#include "thetaver/sampling.hpp"

using namespace thetaver;
using namespace thetaver::qf;

TEST_CASE("variable indexing") {
  CHECK(var_count(1) == 1);
  CHECK(var_count(2) == 3);
  CHECK(var_count(3) == 6);
  CHECK(var_index(2, 0, 0) == 0);
  CHECK(var_index(2, 0, 1) == 1);
  CHECK(var_index(2, 1, 0) == 1);
  CHECK(var_index(2, 1, 1) == 2);
  CHECK(var_pair(3, 4) == std::pair<int, int>{1, 2});
}

TEST_CASE("classical theta series") {
  const auto s = theta_series(HalfChar::from_string("0"), HalfChar::from_string("0"), 16);
  CHECK(s.term_count() == 3);  // 1 + 2q + 2q^4 with stored exponents 0, 4, 16
  CHECK(s.coefficient({0}) == GaussRat(Rational(1)));
  CHECK(s.coefficient({4}) == GaussRat(Rational(2)));
  CHECK(s.coefficient({16}) == GaussRat(Rational(2)));
  CHECK(s.pi_weight() == 0);

  // odd theta constant series cancels identically at every order
  const auto odd = theta_series(HalfChar::from_string("1"), HalfChar::from_string("1"), 64);
  CHECK(odd.is_zero());

  // even characteristic: gradient series vanishes identically
  const auto geven = theta_grad_series(HalfChar::from_string("0"), HalfChar::from_string("1"), 0, 32);
  CHECK(geven.is_zero());

  // odd gradient: leading stored exponent 1, coefficient -2
  const auto godd = theta_grad_series(HalfChar::from_string("1"), HalfChar::from_string("1"), 0, 32);
  CHECK(godd.coefficient({1}) == GaussRat(Rational(-2)));
  CHECK(godd.pi_weight() == 1);
}

TEST_CASE("substitution consistency against the numerical evaluator") {
  EvalConfig cfg;
  cfg.tol = 1e-14;
  // rapid decay point tau = 3i I
  for (int g = 1; g <= 2; ++g) {
    const PeriodMatrix tau(Eigen::MatrixXcd::Identity(g, g) * Complex(0, 3));
    for (const auto& ch : all_characteristics(g)) {
      const auto s = theta_series(ch.eps, ch.delta, 24 + 8 * g);
      const Complex numeric =
          theta_value(ch.eps, ch.delta, tau, Eigen::VectorXcd::Zero(g), cfg);
      CHECK(std::abs(s.evaluate(tau) - numeric) < 1e-10);
    }
    // a composite series built by ring operations
    const auto a = theta2_series(HalfChar::zero(g), 24);
    const auto b = theta2_series(HalfChar::from_index(g, 1), 24);
    const Complex lhs = (a * b).evaluate(tau);
    const Complex rhs = theta2_value(HalfChar::zero(g), tau, Eigen::VectorXcd::Zero(g), cfg) *
                        theta2_value(HalfChar::from_index(g, 1), tau, Eigen::VectorXcd::Zero(g), cfg);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("ring operations") {
  // (1 + q)^2 = 1 + 2q + q^2 on stored exponents
  FormalSeries s(1, 0, 64);
  s.add_term({0}, GaussRat(Rational(1)));
  s.add_term({4}, GaussRat(Rational(1)));
  const auto sq = s * s;
  CHECK(sq.coefficient({0}) == GaussRat(Rational(1)));
  CHECK(sq.coefficient({4}) == GaussRat(Rational(2)));
  CHECK(sq.coefficient({8}) == GaussRat(Rational(1)));

  // 2x2 series determinant is ad - bc
  const auto a = theta_series(HalfChar::from_string("0"), HalfChar::from_string("0"), 16);
  const auto b = theta_series(HalfChar::from_string("0"), HalfChar::from_string("1"), 16);
  const auto c = theta_series(HalfChar::from_string("1"), HalfChar::from_string("0"), 16);
  const auto d = theta2_series(HalfChar::from_string("0"), 16);
  const auto dd = qf::det({{a, b}, {c, d}});
  CHECK(compare(dd, a * d - b * c).equal);

  // associativity and distributivity on truncated samples
  CHECK(compare((a * b) * c, a * (b * c)).equal);
  CHECK(compare(a * (b + c), a * b + a * c).equal);

  // pi-grading mismatch is a structural error
  const auto grad = theta_grad_series(HalfChar::from_string("1"), HalfChar::from_string("1"), 0, 16);
  CHECK_THROWS_AS(a + grad, std::logic_error);
}

TEST_CASE("tau derivative of a series") {
  // two constructions of d/dtau theta: operator on the series vs direct build
  const auto s = theta_series(HalfChar::from_string("0"), HalfChar::from_string("0"), 32);
  const auto ds = s.tau_derivative(0, 0);
  FormalSeries direct(1, 1, 32);
  for (int m = -3; m <= 3; ++m) {
    if (4 * m * m > 32) continue;
    // pi i m^2 per term, as coefficient i m^2 with one pi factored out
    direct.add_term({4 * m * m}, GaussRat(Rational(0), Rational(m * m)));
  }
  CHECK(compare(ds, direct).equal);

  // derivative of a constant vanishes
  FormalSeries one(2, 0, 16);
  one.add_term({0, 0, 0}, GaussRat(Rational(1)));
  CHECK(one.tau_derivative(0, 1).is_zero());

  // product rule holds exactly
  const auto f = theta_series(HalfChar::from_string("10"), HalfChar::from_string("00"), 16);
  const auto g = theta2_series(HalfChar::from_string("01"), 16);
  CHECK(compare((f * g).tau_derivative(0, 1),
                f.tau_derivative(0, 1) * g + f * g.tau_derivative(0, 1))
            .equal);
}

TEST_CASE("heat consistency is exact on series") {
  // hessian series = 4 i pi * (halved tau-derivative series), entrywise
  for (const char* es : {"10", "11"})
    for (const char* ds : {"01", "11"}) {
      const HalfChar eps = HalfChar::from_string(es), delta = HalfChar::from_string(ds);
      for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) {
          const auto hess = theta_hess_series(eps, delta, i, j, 16);
          const auto heat = theta_series(eps, delta, 16)
                                .heat_entry(i, j)
                                .scaled(GaussRat(Rational(0), Rational(4)))
                                .with_pi_shift(1);
          CHECK(compare(hess, heat).equal);
        }
    }
}

TEST_CASE("jacobian determinant series squares to the triple product") {
  const auto D = jacobian_det_series({Characteristic::from_string("1|1")}, 32);
  CHECK(D.pi_weight() == 0);
  auto prod = theta_series(HalfChar::from_string("0"), HalfChar::from_string("0"), 32);
  prod = prod * theta_series(HalfChar::from_string("1"), HalfChar::from_string("0"), 32);
  prod = prod * theta_series(HalfChar::from_string("0"), HalfChar::from_string("1"), 32);
  CHECK(compare(D * D, prod * prod).equal);
}

TEST_CASE("formal identity checks") {
  const Catalog cat = Catalog::builtin();
  CHECK(formal_identity_check("jac0", 1, 32, cat).pass);
  CHECK(formal_identity_check("jac1", 2, 12, cat).pass);
  CHECK(formal_identity_check("tT", 1, 24, cat).pass);
  CHECK(formal_identity_check("tT2", 1, 24, cat).pass);
  CHECK(formal_identity_check("tT", 2, 12, cat).pass);
  CHECK(formal_identity_check("tT2", 2, 12, cat).pass);
  CHECK(formal_identity_check("Eq", 1, 32, cat).pass);
  CHECK(formal_identity_check("Eq", 2, 12, cat).pass);
  CHECK(formal_identity_check("cor", 2, 10, cat).pass);
  CHECK(formal_identity_check("gen2", 2, 12, cat).pass);
  CHECK(formal_identity_check("secondgen", 1, 32, cat).pass);
  CHECK_THROWS_AS(formal_identity_check("nope", 1, 8, cat), std::invalid_argument);
  // constants must come from the catalog in exact form
  CHECK_THROWS_AS(formal_identity_check("Eq", 2, 8, Catalog{}), ConstantNotRational);

  // a wrong constant is caught at the first differing coefficient
  Catalog broken;
  broken.set("Eq", 1, ExactConstant{Rational(5), 3, -1});
  const auto res = formal_identity_check("Eq", 1, 16, broken);
  CHECK_FALSE(res.pass);
  CHECK(res.detail.find("mismatch") != std::string::npos);
}

TEST_CASE("exact constant detection") {
  const auto a = detect_exact_constant(Complex(0.0, 8.0 * std::acos(-1.0)));
  REQUIRE(a.has_value());
  CHECK(a->r == Rational(8));
  CHECK(a->s == 1);
  CHECK(a->t == 1);

  const auto b = detect_exact_constant(Complex(-64.0 / std::pow(std::acos(-1.0), 2), 0.0));
  REQUIRE(b.has_value());
  CHECK(b->r == Rational(64));
  CHECK(b->s == 2);
  CHECK(b->t == -2);

  CHECK_FALSE(detect_exact_constant(Complex(1.2345678, 0.77)).has_value());
  CHECK_FALSE(detect_exact_constant(Complex(0.0, 0.0)).has_value());
}

TEST_CASE("series json dump shape") {
  const auto s = theta_series(HalfChar::from_string("0"), HalfChar::from_string("0"), 16);
  const auto j = series_to_json(s);
  CHECK(j.at("genus") == 1);
  CHECK(j.at("pi_weight") == 0);
  CHECK(j.at("order_bound") == 16);
  REQUIRE(j.at("terms").size() == 3);
  CHECK(j.at("terms")[0].at("re") == "1");
  CHECK(j.at("terms")[1].at("exps")[0] == 4);
}
