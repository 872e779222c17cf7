#include "kgo/evaluate.hpp"

#include "kgo/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace kgo {

namespace {

bool is_chebyshev(const BasisSpec& s) { return s.kind == BasisKind::ChebyshevScaled; }

Vector f_coords(const KgoModel& model, const Vector& f_basis_values) {
  const Vector g = model.f_space.coords(f_basis_values);
  if (!(g.squaredNorm() > 0.0)) fail_data("query f has zero projection (zero f vector?)");
  return g;
}

// polynomial helpers, coefficients in ascending powers
Vector poly_mul(const Vector& a, const Vector& b) {
  Vector r = Vector::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) r(i + j) += a(i) * b(j);
  return r;
}

Vector poly_der(const Vector& a) {
  if (a.size() <= 1) return Vector::Zero(1);
  Vector r(a.size() - 1);
  for (Eigen::Index i = 1; i < a.size(); ++i) r(i - 1) = static_cast<double>(i) * a(i);
  return r;
}

Vector poly_sub(const Vector& a, const Vector& b) {
  Vector r = Vector::Zero(std::max(a.size(), b.size()));
  r.head(a.size()) += a;
  r.head(b.size()) -= b;
  return r;
}

double poly_eval(const Vector& a, double x) {
  double r = 0.0;
  for (Eigen::Index i = a.size() - 1; i >= 0; --i) r = r * x + a(i);
  return r;
}

std::vector<double> real_roots(Vector c) {
  const double scale = c.cwiseAbs().maxCoeff();
  Eigen::Index deg = c.size() - 1;
  while (deg > 0 && std::abs(c(deg)) <= 1e-13 * scale) --deg;
  std::vector<double> out;
  if (deg < 1) return out;
  Matrix comp = Matrix::Zero(deg, deg);
  for (Eigen::Index i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < deg; ++i) comp(i, deg - 1) = -c(i) / c(deg);
  Eigen::EigenSolver<Matrix> es(comp, false);
  for (Eigen::Index i = 0; i < deg; ++i) {
    const auto z = es.eigenvalues()(i);
    if (std::abs(z.imag()) <= 1e-8 * std::max(1.0, std::abs(z))) out.push_back(z.real());
  }
  return out;
}

}  // namespace

FitResult fit_model(const Sample& sample, BasisSpec x_spec, BasisSpec f_spec,
                    const FitOptions& options) {
  options.solver.validate();
  if (is_chebyshev(x_spec)) x_spec = with_sample_ranges(x_spec, sample.x_rows());
  if (is_chebyshev(f_spec)) f_spec = with_sample_ranges(f_spec, sample.f_rows());

  FitResult r;
  r.embedding = embed(sample, x_spec, f_spec, options.rel_threshold);
  const Embedding& e = r.embedding;
  const int D = options.D.value_or(e.m());
  if (D < 1) fail_usage("D must be at least 1");

  std::optional<ContributingSubspace> sub;
  if (options.subspace || D < e.m())
    sub = contributing_subspace(e, D, options.subspace.value_or(SubspaceVariant::Projective));
  else if (D > e.m())
    fail_usage("D (" + std::to_string(D) + ") exceeds the f dimension (" +
               std::to_string(e.m()) + ")");

  r.tensor = build_s_tensor(options.kind, e, sub ? &*sub : nullptr);

  SolverConfig cfg = options.solver;
  const bool needs_lsq = cfg.algorithm == Algorithm::LsqAdj ||
                         (cfg.algorithm == Algorithm::LinearConstraints && options.lsq_initial);
  if (needs_lsq) {
    if (sub) fail_usage("the least-squares operator is only defined for D equal to the f dimension");
    cfg.initial = least_squares_ortho(e);
  }
  SolveResult sr = solve(r.tensor, cfg);

  KgoModel& m = r.model;
  m.x_space = e.x_space;
  m.f_space = e.f_space;
  m.op = sr.op;
  m.kind = options.kind;
  m.out_map = out_map(e, sub ? &*sub : nullptr);
  if (sub) m.subspace_raw = sub->raw;
  try {
    m.adjusted_projector = adjusted_christoffel(e).projector;
  } catch (const Error&) {
    m.adjusted_projector.reset();
  }
  m.F = sr.op.F;
  m.F_tot = ftot_upper_bound(e);
  m.F_jdg = joint_distribution_coverage(e);
  r.trace = std::move(sr.trace);
  return r;
}

double coverage(const Matrix& u, const STensor& s) { return quadratic_form(s, u); }

Vector alpha_of(const KgoModel& model, const Vector& x_basis_values) {
  const Vector x = model.x_space.coords(x_basis_values);
  const double n2 = x.squaredNorm();
  if (!(n2 > 0.0)) fail_numerical("query x has zero projection onto the x space");
  return model.out_map * (model.op.u * (x / std::sqrt(n2)));
}

double probability_basis(const KgoModel& model, const Vector& x_basis_values,
                         const Vector& f_basis_values) {
  const Vector a = alpha_of(model, x_basis_values);
  const Vector g = f_coords(model, f_basis_values);
  const double ov = g.dot(a);
  return ov * ov / g.squaredNorm();
}

double probability(const KgoModel& model, const Vector& x_raw, const Vector& f_raw) {
  return probability_basis(model, evaluate_basis(model.x_space.spec, x_raw),
                           evaluate_basis(model.f_space.spec, f_raw));
}

Prediction most_probable_basis(const KgoModel& model, const Vector& x_basis_values) {
  const Vector a = alpha_of(model, x_basis_values);
  Prediction p;
  p.f_max_p = model.f_space.gram_raw * model.f_space.T.transpose() * a;
  p.certainty = a.squaredNorm();
  p.probability_normalized = model.kind != TensorKind::PlainValue;
  const double c = p.f_max_p(static_cast<Eigen::Index>(BasisSpec::constant_index));
  const double scale = p.f_max_p.norm();
  p.pole = !(std::abs(c) >= 1e-10 * scale) || scale == 0.0;
  p.value = p.f_max_p / c;
  return p;
}

Prediction most_probable(const KgoModel& model, const Vector& x_raw) {
  return most_probable_basis(model, evaluate_basis(model.x_space.spec, x_raw));
}

Prediction value(const KgoModel& model, const Vector& x_raw) {
  return most_probable(model, x_raw);
}

double value_by_roots(const KgoModel& model, const Vector& x_raw) {
  const BasisSpec& fs = model.f_space.spec;
  if (fs.kind != BasisKind::Monomial || fs.variables != 1)
    fail_usage("root-finding value needs a univariate monomial f basis");
  const Vector a = alpha_of(model, evaluate_basis(model.x_space.spec, x_raw));
  const Vector p = model.f_space.T.transpose() * a;
  const Matrix qm = model.f_space.T.transpose() * model.f_space.T;
  Vector q = Vector::Zero(2 * qm.rows() - 1);
  for (Eigen::Index i = 0; i < qm.rows(); ++i)
    for (Eigen::Index j = 0; j < qm.cols(); ++j) q(i + j) += qm(i, j);
  const Vector r = poly_sub(2.0 * poly_mul(poly_der(p), q), poly_mul(p, poly_der(q)));
  double best = std::numeric_limits<double>::quiet_NaN();
  double best_p = -1.0;
  for (double t : real_roots(r)) {
    const double qv = poly_eval(q, t);
    if (!(qv > 0.0)) continue;
    const double pv = poly_eval(p, t);
    const double prob = pv * pv / qv;
    if (prob > best_p) {
      best_p = prob;
      best = t;
    }
  }
  if (std::isnan(best)) fail_numerical("no real stationary point of the probability");
  return best;
}

double adjusted_probability_basis(const KgoModel& model, const Vector& x_basis_values,
                                  const Vector& f_basis_values, AdjustedMode mode) {
  const Vector x = model.x_space.coords(x_basis_values);
  if (!(x.squaredNorm() > 0.0)) fail_numerical("query x has zero projection onto the x space");
  const Vector g = f_coords(model, f_basis_values);
  const Matrix map = model.out_map * model.op.u;  // m x n
  const Vector h = map * x;
  switch (mode) {
    case AdjustedMode::ImportantOnly: {
      const double den = g.squaredNorm() * h.squaredNorm();
      if (!(den > 0.0)) fail_numerical("important-only probability: zero denominator");
      const double ov = g.dot(h);
      return ov * ov / den;
    }
    case AdjustedMode::DofAdjusted: {
      if (!model.adjusted_projector)
        fail_usage("dof-adjusted probability needs the adjusted Christoffel function");
      const double den = g.squaredNorm() * x.dot(*model.adjusted_projector * x);
      if (!(den > 0.0)) fail_numerical("dof-adjusted probability: zero denominator");
      const double ov = g.dot(h);
      return ov * ov / den;
    }
    case AdjustedMode::SvdBasis: {
      Eigen::JacobiSVD<Matrix> js(map, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Eigen::Index D = std::min<Eigen::Index>(model.op.u.rows(), js.singularValues().size());
      const Vector fb = js.matrixU().leftCols(D).transpose() * g;
      const Vector xb = js.matrixV().leftCols(D).transpose() * x;
      const Vector sg = js.singularValues().head(D);
      const double num = (fb.array() * xb.array() * sg.array()).sum();
      const double den = fb.squaredNorm() * (xb.array() * sg.array()).matrix().squaredNorm();
      if (!(den > 0.0)) fail_numerical("svd-basis probability: zero denominator");
      return num * num / den;
    }
  }
  return 0.0;
}

double adjusted_probability(const KgoModel& model, const Vector& x_raw,
                            const Vector& f_raw, AdjustedMode mode) {
  return adjusted_probability_basis(model, evaluate_basis(model.x_space.spec, x_raw),
                                    evaluate_basis(model.f_space.spec, f_raw), mode);
}

Matrix map_operator(const Matrix& u, const Matrix& a) {
  if (a.rows() != a.cols() || u.cols() != a.rows())
    fail_usage("map_operator: dimension mismatch");
  const Matrix r = u * a * u.transpose();
  return 0.5 * (r + r.transpose());
}

}  // namespace kgo
