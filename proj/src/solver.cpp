#include "kgo/solver.hpp"

#include "kgo/error.hpp"
#include "kgo/linalg.hpp"

#include <cmath>

namespace kgo {

namespace {

constexpr double kRankTol = 1e-12;

int default_pool(const STensor& s, const SolverConfig& c) {
  const int dn = s.D * s.n;
  return c.candidate_pool > 0 ? c.candidate_pool : std::min(dn, 16);
}

struct Scored {
  Matrix adjusted;
  double F = 0.0;
};

Scored adjust_and_score(const Matrix& u, const STensor& s, AdjustMethod method) {
  PartiallyUnitaryOp op = enforce_partial_unitarity(u, method);
  return Scored{op.u, quadratic_form(s, op.u)};
}

IterationRecord record(int it, const Matrix& candidate, const Matrix& adjusted,
                       const STensor& s, double f_after) {
  IterationRecord r;
  r.iteration = it;
  const double scale = std::sqrt(static_cast<double>(candidate.rows())) / candidate.norm();
  r.f_before = quadratic_form(s, candidate * scale);
  r.f_after = f_after;
  r.residual = constraint_residual(adjusted);
  const Multipliers m = lagrange_multipliers(adjusted, s, false);
  r.lambda_antisym = m.antisym;
  r.spur = m.spur;
  return r;
}

bool converged(double prev, double cur, double tol) {
  return std::abs(cur - prev) < tol * std::abs(cur);
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::MaxEv: return "maxev";
    case Algorithm::MaxEvSvdAdj: return "maxev-svd-adj";
    case Algorithm::MaxEvEvAdj: return "maxev-evadj";
    case Algorithm::LagrangeIter: return "lagrange";
    case Algorithm::LinearConstraints: return "linear-constraints";
    case Algorithm::LsqAdj: return "lsq-adj";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  for (Algorithm a : {Algorithm::MaxEv, Algorithm::MaxEvSvdAdj, Algorithm::MaxEvEvAdj,
                      Algorithm::LagrangeIter, Algorithm::LinearConstraints, Algorithm::LsqAdj})
    if (to_string(a) == name) return a;
  fail_usage("unknown algorithm '" + name + "'");
}

void SolverConfig::validate() const {
  if (max_iterations < 1) fail_usage("max_iterations must be positive");
  if (!(rel_tol > 0.0)) fail_usage("rel_tol must be positive");
  if (candidate_pool < 0) fail_usage("candidate_pool must be nonnegative");
}

Vector flatten(const Matrix& u) {
  Vector v(u.size());
  for (Eigen::Index j = 0; j < u.rows(); ++j) v.segment(j * u.cols(), u.cols()) = u.row(j).transpose();
  return v;
}

Matrix unflatten(const Vector& v, int D, int n) {
  if (v.size() < static_cast<Eigen::Index>(D) * n) fail_usage("unflatten: vector too short");
  Matrix u(D, n);
  for (int j = 0; j < D; ++j) u.row(j) = v.segment(static_cast<Eigen::Index>(j) * n, n).transpose();
  return u;
}

double constraint_residual(const Matrix& u) {
  return (u * u.transpose() - Matrix::Identity(u.rows(), u.rows())).norm();
}

EigenStates solve_partial_constraint(const STensor& s, const Matrix& lambda) {
  if (lambda.rows() != s.D || lambda.cols() != s.D)
    fail_usage("multiplier matrix must be D x D");
  if (asymmetry(lambda) > 1e-12) fail_usage("multiplier matrix must be symmetric");
  Matrix m = s.S;
  for (int j = 0; j < s.D; ++j)
    for (int jp = 0; jp < s.D; ++jp)
      for (int k = 0; k < s.n; ++k) m(j * s.n + k, jp * s.n + k) -= lambda(j, jp);
  const SymEigResult e = sym_eig(0.5 * (m + m.transpose()));
  EigenStates out;
  out.values = e.eigenvalues;
  const double scale = std::sqrt(static_cast<double>(s.D));
  for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i)
    out.states.push_back(unflatten(e.eigenvectors.col(i), s.D, s.n) * scale);
  return out;
}

bool full_row_rank(const Matrix& u) {
  if (u.rows() > u.cols() || u.rows() == 0) return false;
  const Vector sv = Eigen::JacobiSVD<Matrix>(u).singularValues();
  return sv(0) > 0.0 && sv(sv.size() - 1) > kRankTol * sv(0);
}

int select_candidate_index(const std::vector<Matrix>& states, const STensor& s,
                           int pool_size, AdjustMethod method) {
  if (pool_size < 1) fail_usage("candidate pool must be at least 1");
  const int pool = std::min<int>(pool_size, static_cast<int>(states.size()));
  int best = -1;
  double best_f = 0.0;
  for (int i = 0; i < pool; ++i) {
    if (!full_row_rank(states[static_cast<std::size_t>(i)])) continue;
    const double f = adjust_and_score(states[static_cast<std::size_t>(i)], s, method).F;
    if (best < 0 || f > best_f) {
      best = i;
      best_f = f;
    }
  }
  return best;
}

Matrix select_candidate(const EigenStates& eig, const STensor& s, int pool_size,
                        AdjustMethod method) {
  const int i = select_candidate_index(eig.states, s, pool_size, method);
  if (i < 0) fail_numerical("every candidate in the pool is rank deficient");
  return eig.states[static_cast<std::size_t>(i)];
}

PartiallyUnitaryOp enforce_partial_unitarity(const Matrix& u, AdjustMethod method) {
  if (!u.allFinite()) fail_numerical("operator has non-finite entries");
  if (!full_row_rank(u)) fail_numerical("operator is rank deficient; cannot adjust");
  PartiallyUnitaryOp op;
  if (method == AdjustMethod::Svd) {
    Eigen::JacobiSVD<Matrix> js(u, Eigen::ComputeThinU | Eigen::ComputeThinV);
    op.u = js.matrixU() * js.matrixV().transpose();
  } else {
    const Matrix g = u * u.transpose();
    op.u = spd_inverse_sqrt(0.5 * (g + g.transpose())) * u;
  }
  op.residual = constraint_residual(op.u);
  op.algorithm = method == AdjustMethod::Svd ? Algorithm::MaxEvSvdAdj : Algorithm::MaxEvEvAdj;
  return op;
}

Multipliers lagrange_multipliers(const Matrix& u, const STensor& s, bool check) {
  if (u.rows() != s.D || u.cols() != s.n) fail_usage("operator shape does not match tensor");
  if (check && constraint_residual(u) > 1e-8)
    fail_numerical("multipliers need a partially unitary operator");
  const Matrix w = unflatten(s.S * flatten(u), s.D, s.n);
  Multipliers m;
  m.raw = u * w.transpose();
  m.symmetric = 0.5 * (m.raw + m.raw.transpose());
  m.spur = m.raw.trace();
  m.antisym = 0.5 * (m.raw - m.raw.transpose()).norm();
  return m;
}

SolveResult iterate_lagrange(const STensor& s, const SolverConfig& config) {
  config.validate();
  const int pool = default_pool(s, config);
  Matrix lambda = Matrix::Zero(s.D, s.D);
  SolveResult res;
  res.op.algorithm = Algorithm::LagrangeIter;
  double prev = 0.0;
  for (int it = 1; it <= config.max_iterations; ++it) {
    const EigenStates eig = solve_partial_constraint(s, lambda);
    const Matrix cand = select_candidate(eig, s, pool, AdjustMethod::Svd);
    const PartiallyUnitaryOp adj = enforce_partial_unitarity(cand, AdjustMethod::Svd);
    const double f = quadratic_form(s, adj.u);
    res.trace.records.push_back(record(it, cand, adj.u, s, f));
    if (it == 1 || f > res.op.F) {
      res.op.u = adj.u;
      res.op.F = f;
      res.op.residual = adj.residual;
    }
    res.op.iterations = it;
    if (it > 1 && converged(prev, f, config.rel_tol)) break;
    prev = f;
    lambda = lagrange_multipliers(adj.u, s).symmetric;
  }
  return res;
}

SolveResult iterate_linear_constraints(const STensor& s, const SolverConfig& config) {
  config.validate();
  const int dn = s.D * s.n;
  const int pool = config.candidate_pool > 0 ? config.candidate_pool : std::min(dn + 1, 16);
  Vector b = Vector::Zero(dn);
  double s0 = 0.0;
  SolveResult res;
  res.op.algorithm = Algorithm::LinearConstraints;
  bool have_best = false;
  if (config.initial) {
    const PartiallyUnitaryOp start = approximate_from_any(*config.initial);
    if (start.u.rows() != s.D || start.u.cols() != s.n)
      fail_usage("initial operator shape does not match tensor");
    res.op.u = start.u;
    res.op.F = quadratic_form(s, start.u);
    res.op.residual = start.residual;
    have_best = true;
    s0 = res.op.F;
    b = -(s.S * flatten(start.u));
  }
  double prev = res.op.F;
  Matrix z(dn + 1, dn + 1);
  for (int it = 1; it <= config.max_iterations; ++it) {
    z.topLeftCorner(dn, dn) = s.S;
    z.topRightCorner(dn, 1) = b;
    z.bottomLeftCorner(1, dn) = b.transpose();
    z(dn, dn) = s0;
    const SymEigResult e = sym_eig(z);
    std::vector<Matrix> states;
    const int take = std::min<int>(pool, static_cast<int>(e.eigenvalues.size()));
    for (int i = 0; i < take; ++i) states.push_back(unflatten(e.eigenvectors.col(i).head(dn), s.D, s.n));
    const int pick = select_candidate_index(states, s, take, AdjustMethod::Svd);
    if (pick < 0) fail_numerical("every candidate in the pool is rank deficient");
    const Matrix& cand = states[static_cast<std::size_t>(pick)];
    const PartiallyUnitaryOp adj = enforce_partial_unitarity(cand, AdjustMethod::Svd);
    const double f = quadratic_form(s, adj.u);
    res.trace.records.push_back(record(it, cand, adj.u, s, f));
    if (!have_best || f > res.op.F) {
      res.op.u = adj.u;
      res.op.F = f;
      res.op.residual = adj.residual;
      have_best = true;
    }
    res.op.iterations = it;
    if ((it > 1 || config.initial) && converged(prev, f, config.rel_tol)) break;
    prev = f;
    // chi = 1, S0 = F0, B0 = -S0
    s0 = f;
    b = -(s.S * flatten(adj.u));
  }
  return res;
}

PartiallyUnitaryOp approximate_from_any(const Matrix& u_any) {
  PartiallyUnitaryOp op = enforce_partial_unitarity(u_any, AdjustMethod::Svd);
  op.algorithm = Algorithm::LsqAdj;
  return op;
}

OperatorAdjustment operator_adjust(const Matrix& u, const Matrix& j, const STensor& s) {
  if (u.rows() != s.D || u.cols() != s.n) fail_usage("operator shape does not match tensor");
  if (j.rows() != s.D || j.cols() != s.D) fail_usage("J must be D x D");
  if (!full_row_rank(u)) fail_numerical("operator is rank deficient; cannot adjust");
  const Matrix gu = u * u.transpose();
  const Matrix gus = 0.5 * (gu + gu.transpose());
  const GenEigResult ge = gen_sym_eig(0.5 * (j + j.transpose()), gus);
  OperatorAdjustment out;
  out.v = ge.eigenvectors.transpose() * u;

  // S^adj = (A (x) I) S (A (x) I)^T with A = V^T G^{1/2}
  const SymEigResult gev = sym_eig(gus);
  const Matrix sqrt_g =
      gev.eigenvectors * gev.eigenvalues.cwiseSqrt().asDiagonal() * gev.eigenvectors.transpose();
  const Matrix a = ge.eigenvectors.transpose() * sqrt_g;
  const int dn = s.D * s.n;
  Matrix big = Matrix::Zero(dn, dn);
  for (int r = 0; r < s.D; ++r)
    for (int c = 0; c < s.D; ++c)
      for (int k = 0; k < s.n; ++k) big(r * s.n + k, c * s.n + k) = a(r, c);
  out.transferred = STensor{s.kind, s.D, s.n, big * s.S * big.transpose()};
  out.transferred.S = 0.5 * (out.transferred.S + out.transferred.S.transpose());
  out.F = quadratic_form(out.transferred, out.v);
  return out;
}

SigmaMultipliers sigma_basis_multipliers(const Matrix& u, const STensor& s) {
  if (u.rows() != s.D || u.cols() != s.n) fail_usage("operator shape does not match tensor");
  if (!full_row_rank(u)) fail_numerical("operator is rank deficient");
  Eigen::JacobiSVD<Matrix> js(u, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Matrix& uu = js.matrixU();
  const Matrix& vv = js.matrixV();
  std::vector<Vector> basis;
  for (int i = 0; i < s.D; ++i) basis.push_back(flatten(uu.col(i) * vv.col(i).transpose()));
  Matrix st(s.D, s.D);
  for (int a = 0; a < s.D; ++a)
    for (int b = 0; b < s.D; ++b) st(a, b) = basis[static_cast<std::size_t>(a)].dot(s.S * basis[static_cast<std::size_t>(b)]);
  SigmaMultipliers out;
  out.per_sigma = st.rowwise().sum();
  out.converted = uu * out.per_sigma.asDiagonal() * uu.transpose();
  return out;
}

SolveResult solve(const STensor& s, const SolverConfig& config) {
  config.validate();
  if (s.D > s.n) fail_usage("operator rows exceed columns; swap the x and f roles");
  switch (config.algorithm) {
    case Algorithm::MaxEv: {
      const EigenStates eig = solve_partial_constraint(s, Matrix::Zero(s.D, s.D));
      SolveResult r;
      r.op.u = eig.states.front();
      r.op.F = quadratic_form(s, r.op.u);
      r.op.residual = constraint_residual(r.op.u);
      r.op.algorithm = Algorithm::MaxEv;
      r.op.iterations = 1;
      IterationRecord rec;
      rec.iteration = 1;
      rec.f_before = rec.f_after = r.op.F;
      rec.residual = r.op.residual;
      const Multipliers m = lagrange_multipliers(r.op.u, s, false);
      rec.spur = m.spur;
      rec.lambda_antisym = m.antisym;
      r.trace.records.push_back(rec);
      return r;
    }
    case Algorithm::MaxEvSvdAdj:
    case Algorithm::MaxEvEvAdj: {
      const AdjustMethod method =
          config.algorithm == Algorithm::MaxEvSvdAdj ? AdjustMethod::Svd : AdjustMethod::GramEig;
      const EigenStates eig = solve_partial_constraint(s, Matrix::Zero(s.D, s.D));
      const Matrix cand = select_candidate(eig, s, default_pool(s, config), method);
      SolveResult r;
      r.op = enforce_partial_unitarity(cand, method);
      r.op.F = quadratic_form(s, r.op.u);
      r.op.algorithm = config.algorithm;
      r.op.iterations = 1;
      r.trace.records.push_back(record(1, cand, r.op.u, s, r.op.F));
      return r;
    }
    case Algorithm::LagrangeIter:
      return iterate_lagrange(s, config);
    case Algorithm::LinearConstraints:
      return iterate_linear_constraints(s, config);
    case Algorithm::LsqAdj: {
      if (!config.initial) fail_usage("lsq-adj needs the least-squares operator as initial value");
      if (config.initial->rows() != s.D || config.initial->cols() != s.n)
        fail_usage("lsq-adj needs D equal to the f dimension");
      SolveResult r;
      r.op = approximate_from_any(*config.initial);
      r.op.F = quadratic_form(s, r.op.u);
      r.op.iterations = 1;
      r.trace.records.push_back(record(1, *config.initial, r.op.u, s, r.op.F));
      return r;
    }
  }
  fail_usage("unknown algorithm");
}

}  // namespace kgo
