#pragma once

#include "kgo/tensors.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kgo {

enum class Algorithm { MaxEv, MaxEvSvdAdj, MaxEvEvAdj, LagrangeIter, LinearConstraints, LsqAdj };
enum class AdjustMethod { Svd, GramEig };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

struct SolverConfig {
  Algorithm algorithm = Algorithm::LinearConstraints;
  int max_iterations = 1000;
  double rel_tol = 1e-10;
  /// 0 selects min(D*n, 16).
  int candidate_pool = 0;
  /// Only used to order otherwise exact ties; all paths are deterministic.
  std::uint64_t seed = 0;
  /// LSQ_ADJ input, or the LINEAR_CONSTRAINTS starting point.
  std::optional<Matrix> initial;

  void validate() const;
};

struct PartiallyUnitaryOp {
  Matrix u;  // D x n
  double residual = 0.0;
  Algorithm algorithm = Algorithm::MaxEvSvdAdj;
  int iterations = 0;
  double F = 0.0;
};

struct IterationRecord {
  int iteration = 0;
  double f_before = 0.0;  // candidate scaled to sum u^2 = D
  double f_after = 0.0;   // adjusted
  double residual = 0.0;
  double lambda_antisym = 0.0;
  double spur = 0.0;      // trace of the multiplier matrix at the adjusted iterate
};

struct IterationTrace {
  std::vector<IterationRecord> records;
};

struct SolveResult {
  PartiallyUnitaryOp op;
  IterationTrace trace;
};

/// Eigenpairs of S - lambda (x) I_n, descending; each state is D x n with
/// sum u^2 = D.
struct EigenStates {
  Vector values;
  std::vector<Matrix> states;
};

/// Row-major vec(u), the flattening of STensor.
Vector flatten(const Matrix& u);
Matrix unflatten(const Vector& v, int D, int n);

double constraint_residual(const Matrix& u);

EigenStates solve_partial_constraint(const STensor& s, const Matrix& lambda);

/// Index into `states` of the chosen candidate; -1 if every candidate in the
/// pool is rank deficient.
int select_candidate_index(const std::vector<Matrix>& states, const STensor& s,
                           int pool_size, AdjustMethod method = AdjustMethod::Svd);
Matrix select_candidate(const EigenStates& eig, const STensor& s, int pool_size,
                        AdjustMethod method = AdjustMethod::Svd);

bool full_row_rank(const Matrix& u);
PartiallyUnitaryOp enforce_partial_unitarity(const Matrix& u, AdjustMethod method);

struct Multipliers {
  Matrix raw;        // lambda~, generally not symmetric
  Matrix symmetric;  // returned multipliers
  double spur = 0.0;
  double antisym = 0.0;
};

/// lambda~ = u W^T with W = reshape(S vec u). With `check` the input must be
/// partially unitary.
Multipliers lagrange_multipliers(const Matrix& u, const STensor& s, bool check = true);

SolveResult iterate_lagrange(const STensor& s, const SolverConfig& config);
SolveResult iterate_linear_constraints(const STensor& s, const SolverConfig& config);
PartiallyUnitaryOp approximate_from_any(const Matrix& u_any);

struct OperatorAdjustment {
  Matrix v;  // satisfies v v^T = I
  STensor transferred;
  double F = 0.0;  // vec(v)^T S^adj vec(v)
};

OperatorAdjustment operator_adjust(const Matrix& u, const Matrix& j, const STensor& s);

struct SigmaMultipliers {
  Vector per_sigma;  // lambda~_s
  Matrix converted;  // U diag(lambda~) U^T
};

SigmaMultipliers sigma_basis_multipliers(const Matrix& u, const STensor& s);

/// Runs the configured algorithm.
SolveResult solve(const STensor& s, const SolverConfig& config);

}  // namespace kgo
