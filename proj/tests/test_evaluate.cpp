#include <doctest.h>

#include "kgo/error.hpp"
#include "kgo/linalg.hpp"
#include "kgo/model_io.hpp"
#include "support.hpp"

#include <limits>

using namespace kgo;
using namespace kgo::testing;

namespace {

FitOptions options(Algorithm a = Algorithm::LinearConstraints,
                   TensorKind k = TensorKind::ChristoffelProduct) {
  FitOptions o;
  o.kind = k;
  o.solver.algorithm = a;
  return o;
}

KgoModel t3_model() { return fit_model(t3_sample(), mono(2), mono(2), options()).model; }

Vector pt(double v) { return vec({v}); }

// Brute force argmax of P(f) over an f grid on [-2, 2].
double grid_argmax(const KgoModel& m, const Vector& x, int points = 401) {
  double best = std::numeric_limits<double>::quiet_NaN(), best_p = -1;
  for (int i = 0; i < points; ++i) {
    const double f = -2.0 + 4.0 * i / (points - 1);
    const double p = probability(m, x, pt(f));
    if (p > best_p) {
      best_p = p;
      best = f;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("evaluate") {

TEST_CASE("T3 identity channel") {
  const KgoModel m = t3_model();
  CHECK(m.F == doctest::Approx(3).epsilon(1e-10));
  CHECK(m.F_tot == doctest::Approx(3).epsilon(1e-10));
  CHECK(probability(m, pt(0), pt(0)) == doctest::Approx(1).epsilon(1e-12));
  CHECK(probability(m, pt(0), pt(1)) == doctest::Approx(0.4).epsilon(1e-12));
  const Vector g = evaluate_basis(m.f_space.spec, pt(0.7));
  for (double c : {2.0, -3.0})
    CHECK(probability_basis(m, evaluate_basis(m.x_space.spec, pt(0.3)), c * g) ==
          doctest::Approx(probability_basis(m, evaluate_basis(m.x_space.spec, pt(0.3)), g)));

  const Prediction p0 = value(m, pt(0));
  CHECK(p0.value(1) == doctest::Approx(0).scale(1));
  CHECK(p0.certainty == doctest::Approx(1));
  CHECK_FALSE(p0.pole);
  const Prediction p1 = value(m, pt(1));
  CHECK(p1.value(1) == doctest::Approx(1).epsilon(1e-9));
  CHECK(p1.certainty == doctest::Approx(1));
  CHECK(std::abs(value(m, pt(0.5)).value(1) - 0.5) <= 1e-9);
}

TEST_CASE("coverage") {
  const FitResult r = fit_model(t3_sample(), mono(2), mono(2), options());
  CHECK(coverage(Matrix::Zero(2, 2), r.tensor) == 0.0);
  CHECK(coverage(Matrix::Identity(2, 2), r.tensor) == doctest::Approx(3));
  CHECK_THROWS_AS(coverage(Matrix::Identity(1, 2), r.tensor), Error);
}

TEST_CASE("most probable outcome matches a grid search") {
  Gen g(101);
  for (int trial = 0; trial < 6; ++trial) {
    const Sample s = g.sample(80, 1, 1, 0.2);
    const KgoModel m = fit_model(s, mono(g.integer(3, 5)), mono(2), options()).model;
    for (int q = 0; q < 5; ++q) {
      const Vector x = pt(g.uniform());
      const Prediction p = value(m, x);
      const Prediction mp = most_probable(m, x);
      CHECK(probability_basis(m, evaluate_basis(m.x_space.spec, x), mp.f_max_p) ==
            doctest::Approx(mp.certainty).epsilon(1e-10));
      CHECK(mp.certainty >= 0.0);
      if (p.pole || std::abs(p.value(1)) > 1.99) continue;
      CHECK(std::abs(grid_argmax(m, x) - p.value(1)) <= 0.01 + 1e-12);
    }
  }
}

TEST_CASE("root-finding value") {
  Gen g(103);
  for (int trial = 0; trial < 4; ++trial) {
    const Sample s = g.sample(80, 1, 1, 0.2);
    const KgoModel m = fit_model(s, mono(4), mono(3), options()).model;
    for (int q = 0; q < 4; ++q) {
      const Vector x = pt(g.uniform());
      const double r = value_by_roots(m, x);
      if (std::abs(r) > 1.99) continue;
      CHECK(std::abs(grid_argmax(m, x, 4001) - r) <= 1e-3 + 1e-12);
    }
  }
  // with a two-function basis the root agrees with the dyadic route
  const KgoModel t3 = t3_model();
  CHECK(value_by_roots(t3, pt(0.5)) == doctest::Approx(0.5));
  KgoModel cheb = t3;
  cheb.f_space.spec.kind = BasisKind::ChebyshevScaled;
  CHECK_THROWS_AS(value_by_roots(cheb, pt(0.5)), Error);
}

TEST_CASE("pole flag") {
  KgoModel m = t3_model();
  m.op.u.row(0).setZero();
  const Prediction p = value(m, pt(0.5));
  CHECK(p.pole);
  CHECK_FALSE(value(t3_model(), pt(0.5)).pole);
}

TEST_CASE("least-squares adjusted model on exact data") {
  Gen g(107);
  Matrix x(30, 1), f(30, 1);
  for (int l = 0; l < 30; ++l) {
    x(l, 0) = g.uniform();
    f(l, 0) = 2 * x(l, 0) + 1;
  }
  const Sample s(x, f);
  const FitResult r = fit_model(s, mono(2), mono(2), options(Algorithm::LsqAdj));
  CHECK(r.model.op.residual <= 1e-10);
  const Embedding e = embed(s, mono(2), mono(2));
  const LeastSquaresMap ls = fit_least_squares(e);
  for (double q : {-0.8, -0.1, 0.4, 0.9}) {
    const Vector lsv = eval_least_squares(ls, evaluate_basis(mono(2), pt(q)));
    CHECK(std::abs(value(r.model, pt(q)).value(1) - lsv(1) / lsv(0)) <= 1e-9);
  }
}

TEST_CASE("adjusted probabilities") {
  const KgoModel m = t3_model();
  for (double v : {-1.0, 0.0, 1.0})
    for (AdjustedMode mode : {AdjustedMode::ImportantOnly, AdjustedMode::DofAdjusted, AdjustedMode::SvdBasis})
      CHECK(adjusted_probability(m, pt(v), pt(v), mode) == doctest::Approx(1).epsilon(1e-9));
  for (double xq : {-0.7, 0.2})
    for (double fq : {-1.3, 0.5})
      CHECK(adjusted_probability(m, pt(xq), pt(fq), AdjustedMode::SvdBasis) ==
            doctest::Approx(probability(m, pt(xq), pt(fq))));

  Gen g(109);
  const KgoModel r = fit_model(g.sample(60, 1, 1), mono(4), mono(2), options()).model;
  for (int q = 0; q < 20; ++q) {
    const Vector xb = evaluate_basis(r.x_space.spec, pt(g.uniform()));
    const Vector fb = evaluate_basis(r.f_space.spec, pt(g.uniform(-2, 2)));
    for (AdjustedMode mode : {AdjustedMode::ImportantOnly, AdjustedMode::DofAdjusted, AdjustedMode::SvdBasis}) {
      const double p = adjusted_probability_basis(r, xb, fb, mode);
      CHECK(p == doctest::Approx(adjusted_probability_basis(r, xb, -2.5 * fb, mode)));
      if (mode != AdjustedMode::DofAdjusted) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0 + 1e-9);
      }
    }
    const double p = probability_basis(r, xb, fb);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0 + 1e-9);
  }
  KgoModel no_adj = m;
  no_adj.adjusted_projector.reset();
  CHECK_THROWS_AS(adjusted_probability(no_adj, pt(0), pt(0), AdjustedMode::DofAdjusted), Error);
}

TEST_CASE("unadjusted operators are bounded by the largest singular value squared") {
  Gen g(113);
  KgoModel m = fit_model(g.sample(60, 1, 1), mono(3), mono(2), options()).model;
  m.op.u = g.matrix(2, 3);
  const double smax = svd(m.op.u).sigma(0);
  for (int q = 0; q < 30; ++q) {
    const double p = probability(m, pt(g.uniform()), pt(g.uniform(-2, 2)));
    CHECK(p >= 0.0);
    CHECK(p <= smax * smax * (1 + 1e-9));
  }
}

TEST_CASE("zero projection and bad queries") {
  const KgoModel m = t3_model();
  CHECK_THROWS_AS(probability_basis(m, Vector::Zero(2), vec({1, 0})), Error);
  CHECK_THROWS_AS(probability_basis(m, vec({1, 0}), Vector::Zero(2)), Error);
}

TEST_CASE("map_operator") {
  Gen g(127);
  const Matrix a = g.symmetric(3);
  CHECK(map_operator(Matrix::Identity(3, 3), a).isApprox(a));
  const Vector psi = g.matrix(3, 1).col(0);
  const Matrix u = g.partially_unitary(2, 3);
  const Vector ev = sym_eig(map_operator(u, psi * psi.transpose())).eigenvalues;
  CHECK(std::abs(ev(1)) <= 1e-12 * ev(0));
  for (int trial = 0; trial < 20; ++trial) {
    const int n = g.integer(1, 6), D = g.integer(1, n);
    const Matrix out = map_operator(g.partially_unitary(D, n), g.spd(n));
    CHECK(sym_eig(out).eigenvalues.minCoeff() >= -1e-10);
    const Matrix q = g.partially_unitary(n, n);
    const Matrix b = g.symmetric(n);
    CHECK(map_operator(q, b).trace() == doctest::Approx(b.trace()));
  }
  CHECK_THROWS_AS(map_operator(Matrix::Identity(2, 3), Matrix::Identity(2, 2)), Error);
}

TEST_CASE("gauge invariance under a Chebyshev basis") {
  Gen g(131);
  for (int trial = 0; trial < 4; ++trial) {
    const Sample s = g.sample(60, 1, 1);
    const int n = g.integer(3, 5);
    const FitOptions o = options(Algorithm::MaxEvSvdAdj);
    const KgoModel a = fit_model(s, mono(n), mono(2), o).model;
    const KgoModel b = fit_model(s, BasisSpec::univariate(BasisKind::ChebyshevScaled, n),
                                 BasisSpec::univariate(BasisKind::ChebyshevScaled, 2), o).model;
    CHECK(rel_diff(a.F, b.F) <= 1e-7);
    for (int q = 0; q < 5; ++q) {
      const Vector x = pt(g.uniform()), f = pt(g.uniform(-2, 2));
      CHECK(std::abs(probability(a, x, f) - probability(b, x, f)) <= 1e-7);
    }
  }
}

TEST_CASE("model serialization") {
  Gen g(137);
  const KgoModel m = fit_model(g.sample(50, 1, 1), mono(4), mono(3),
                               [] { FitOptions o = options(); o.D = 2; return o; }()).model;
  const std::string text = serialize_model(m);
  const KgoModel r = deserialize_model(text);
  CHECK(r.op.u == m.op.u);
  CHECK(r.x_space.T == m.x_space.T);
  CHECK(r.f_space.gram_raw == m.f_space.gram_raw);
  CHECK(r.out_map == m.out_map);
  REQUIRE(r.subspace_raw);
  CHECK(*r.subspace_raw == *m.subspace_raw);
  CHECK(r.F == m.F);
  CHECK(r.F_tot == m.F_tot);
  CHECK(r.kind == m.kind);
  CHECK(serialize_model(r) == text);

  const FitResult t3 = fit_model(t3_sample(), mono(2), mono(2), options());
  const KgoModel back = deserialize_model(serialize_model(t3.model));
  CHECK(std::abs(coverage(back.op.u, t3.tensor) - back.F) <= 1e-12 * back.F);

  auto data_error = [](const std::string& s) {
    try {
      deserialize_model(s);
    } catch (const Error& e) {
      return e.kind() == ErrorKind::Data;
    }
    return false;
  };
  CHECK(data_error(text.substr(0, text.size() / 2)));
  CHECK(data_error("{}"));
  std::string bumped = text;
  const auto pos = bumped.find("\"version\": 1");
  REQUIRE(pos != std::string::npos);
  bumped.replace(pos, 12, "\"version\": 2");
  CHECK(data_error(bumped));
}

}  // TEST_SUITE
