#include <doctest.h>

#include "kgo/cli.hpp"
#include "kgo/error.hpp"
#include "support.hpp"

using namespace kgo;
using namespace kgo::testing;

namespace {

Sample t3_with_label(const std::function<double(double)>& f) {
  Matrix x(3, 1), y(3, 1);
  x << -1, 0, 1;
  for (int i = 0; i < 3; ++i) y(i, 0) = f(x(i, 0));
  return Sample(x, y);
}

// oracle: normal equations solved by a dense LDLT on the raw Gram matrix
Matrix normal_equation_beta(const Embedding& e) {
  const Matrix g = e.x_basis.transpose() * e.weights.asDiagonal() * e.x_basis;
  const Matrix fx = e.f_basis.transpose() * e.weights.asDiagonal() * e.x_basis;
  return g.ldlt().solve(fx.transpose()).transpose();
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("least squares examples") {
  const Embedding e = t3_embedding();
  const LeastSquaresMap ls = fit_least_squares(e);
  CHECK(ls.beta.isApprox(Matrix::Identity(2, 2)));
  CHECK((eval_least_squares(ls, vec({1, 1})) - vec({1, 1})).norm() < 1e-12);

  const Embedding e2 = embed(t3_with_label([](double x) { return 2 + 3 * x; }), mono(2), mono(2));
  const LeastSquaresMap l2 = fit_least_squares(e2);
  CHECK((l2.beta.row(1).transpose() - vec({2, 3})).norm() < 1e-12);
  CHECK((l2.beta - normal_equation_beta(e2)).norm() < 1e-12);
  CHECK(eval_least_squares(l2, vec({1, 0}))(1) == doctest::Approx(2));

  // f = (1, x^2 - 2/3) against x-basis {1, x}
  const Embedding e3 = embed(t3_with_label([](double x) { return x * x - 2.0 / 3; }), mono(2), mono(2));
  const LeastSquaresMap l3 = fit_least_squares(e3);
  CHECK(std::abs(l3.beta(1, 1)) < 1e-12);
  CHECK(eval_least_squares(l3, vec({1, 0}))(1) == doctest::Approx(0).epsilon(1e-12));

  const LeastSquaresMap zero{Matrix::Zero(2, 2)};
  CHECK(eval_least_squares(zero, vec({1, 5})).norm() == 0.0);
}

TEST_CASE("least squares reproduces exact polynomial labels") {
  Gen g(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = g.integer(2, 6);
    Vector c(n);
    for (int i = 0; i < n; ++i) c(i) = g.normal();
    const Sample s = g.sample(60, 1, 1);
    Matrix f(s.size(), 1);
    for (Eigen::Index l = 0; l < s.size(); ++l) f(l, 0) = c.dot(evaluate_basis(mono(n), s.x_rows().row(l).transpose()));
    const Sample ex(s.x_rows(), f, s.weights());
    const Embedding e = embed(ex, mono(n), mono(2));
    const LeastSquaresMap ls = fit_least_squares(e);
    double worst = 0;
    for (Eigen::Index l = 0; l < ex.size(); ++l)
      worst = std::max(worst, std::abs(eval_least_squares(ls, e.x_basis.row(l).transpose())(1) - f(l, 0)));
    CHECK(worst <= 1e-9);
    // normal-equation residual
    const Matrix fx = e.x_basis.transpose() * e.weights.asDiagonal() * e.f_basis;
    CHECK((e.x_space.gram_raw * ls.beta.transpose() - fx).norm() <= 1e-8 * std::max(1.0, fx.norm()));
  }
}

TEST_CASE("least squares partial-unitarity residual") {
  CHECK(least_squares_residual(t3_embedding(), fit_least_squares(t3_embedding())) <= 1e-9);
  Gen g(43);
  Matrix x(500, 2);
  for (int l = 0; l < 500; ++l) {
    x(l, 0) = g.uniform();
    x(l, 1) = g.uniform();
  }
  BasisSpec xs;
  xs.variables = 2;
  xs.degree = 1;
  const Sample s(x, x.col(0));
  const Embedding e = embed(s, xs, mono(2));
  // f = x0 is in the span of {1, x0, x1}
  CHECK(least_squares_residual(e, fit_least_squares(e)) <= 1e-9);
  const Embedding e2 = embed(Sample(x.col(0), x.col(1)), mono(2), mono(2));
  CHECK(least_squares_residual(e2, fit_least_squares(e2)) > 0.01);
}

TEST_CASE("Radon-Nikodym examples") {
  const Embedding e = t3_embedding();
  const RadonNikodymModel rn = fit_radon_nikodym(e);
  CHECK(std::abs(eval_radon_nikodym(rn, vec({1, 0}))(1)) < 1e-12);
  for (const Matrix& a : rn.third_moments) CHECK((a - a.transpose()).norm() <= 1e-12 * std::max(1.0, a.norm()));

  const Embedding ec = embed(t3_with_label([](double) { return 2.5; }), mono(2), mono(2));
  const RadonNikodymModel rc = fit_radon_nikodym(ec);
  for (double x : {-3.0, 0.2, 7.0}) CHECK(eval_radon_nikodym(rc, vec({1, x}))(1) == doctest::Approx(2.5));
  CHECK_THROWS_AS(eval_radon_nikodym(rn, vec({0, 0})), Error);
}

TEST_CASE("Radon-Nikodym square wave stays in the label range") {
  const Sample s = grid_sample(201, [](double v) { return std::abs(v) < 0.5 ? 1.0 : 0.0; });
  const Embedding e = embed(s, mono(7), mono(2));
  const RadonNikodymModel rn = fit_radon_nikodym(e);
  for (int i = 0; i <= 400; ++i) {
    const double x = -1.0 + i * 0.005;
    const double v = eval_radon_nikodym(rn, evaluate_basis(mono(7), vec({x})))(1);
    CHECK(v >= -1e-9);
    CHECK(v <= 1 + 1e-9);
  }
}

TEST_CASE("Radon-Nikodym bounds and large-x limit") {
  Gen g(47);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = g.integer(2, 6);
    const Sample s = g.sample(40, 1, 1);
    const Embedding e = embed(s, mono(n), mono(2));
    const RadonNikodymModel rn = fit_radon_nikodym(e);
    const double lo = s.f_rows().minCoeff(), hi = s.f_rows().maxCoeff();
    for (int i = 0; i < 50; ++i) {
      const double v = eval_radon_nikodym(rn, evaluate_basis(mono(n), vec({g.uniform(-3, 3)})))(1);
      CHECK(v >= lo - 1e-9);
      CHECK(v <= hi + 1e-9);
    }
    const double v3 = eval_radon_nikodym(rn, evaluate_basis(mono(n), vec({1e3})))(1);
    const double v4 = eval_radon_nikodym(rn, evaluate_basis(mono(n), vec({1e4})))(1);
    CHECK(std::abs(v3 - v4) < 0.01 * std::max(1e-12, std::abs(v4)));
  }
}

TEST_CASE("joint distribution coverage") {
  CHECK(joint_distribution_coverage(t3_embedding()) == doctest::Approx(3).epsilon(1e-12));
  Gen g(53);
  Matrix x(500, 2);
  for (int l = 0; l < 500; ++l) {
    x(l, 0) = g.uniform();
    x(l, 1) = g.uniform();
  }
  BasisSpec xs;
  xs.variables = 2;
  xs.degree = 1;
  const Embedding aug = embed(Sample(x, x.col(0)), xs, mono(2));
  CHECK(joint_distribution_coverage(aug) < 500 - 1e-3);
  const Embedding single = embed(Sample(Matrix::Constant(1, 1, 0.4), Matrix::Constant(1, 1, 0.2), Vector::Constant(1, 0.7)),
                                 mono(2), mono(2));
  CHECK(joint_distribution_coverage(single) == doctest::Approx(0.7));
}

TEST_CASE("direct projection probability") {
  const Embedding e = t3_embedding();
  const LeastSquaresMap ls = fit_least_squares(e);
  for (double x : {-1.0, 0.0, 1.0})
    CHECK(direct_projection_probability(e, ls, vec({1, x}), vec({1, x})) == doctest::Approx(1));
  CHECK(direct_projection_probability(e, ls, vec({1, 0}), vec({1, 1})) == doctest::Approx(0.4));
  for (double c : {2.0, -3.0})
    CHECK(direct_projection_probability(e, ls, vec({1, 0}), c * vec({1, 1})) == doctest::Approx(0.4));
}

}  // TEST_SUITE
