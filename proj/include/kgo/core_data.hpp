#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kgo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Weighted supervised observations x^(l) -> f^(l) with weights w^(l).
/// Rows are observations; the measure <h> = sum_l h(l) w^(l).
class Sample {
 public:
  Sample(Matrix x_rows, Matrix f_rows, Vector weights);
  /// Unit weights.
  Sample(Matrix x_rows, Matrix f_rows);

  const Matrix& x_rows() const { return x_rows_; }
  const Matrix& f_rows() const { return f_rows_; }
  const Vector& weights() const { return weights_; }

  Eigen::Index size() const { return weights_.size(); }
  /// <1>
  double total_weight() const { return weights_.sum(); }

 private:
  Matrix x_rows_;
  Matrix f_rows_;
  Vector weights_;
};

/// Inclusive zero-based column range.
struct ColumnRange {
  int first = 0;
  int last = 0;
  int width() const { return last - first + 1; }
  bool overlaps(const ColumnRange& o) const {
    return first <= o.last && o.first <= last;
  }
};

/// Parsed form of `x=<a>-<b>;f=<c>-<d>[;w=<e>]`. A single index `x=3` is
/// accepted as shorthand for `x=3-3`. x and f may alias (f = x demos); the
/// weight column must not overlap either.
struct ColumnSpec {
  ColumnRange x;
  ColumnRange f;
  std::optional<int> w;
  bool has_f = true;

  /// With require_f false the f range may be omitted (query files).
  static ColumnSpec parse(const std::string& text, bool require_f = true);
};

/// Numeric rows of a comma-separated text; '#' lines and blank lines are
/// skipped. Errors name the 1-based data row.
std::vector<std::vector<double>> read_csv(const std::string& csv_text);
std::string read_file(const std::string& path);

/// Reads a comma-separated file. Lines starting with '#' and blank lines are
/// skipped. Row numbers in error messages are 1-based data rows.
Sample load_sample(const std::string& path, const std::string& column_spec);
Sample parse_sample(const std::string& csv_text, const ColumnSpec& spec);

enum class ProductOrder { Exact, UpTo };

/// Multi-indices k with sum(k) == order (Exact) or <= order (UpTo).
///
/// Ordering: graded, then lexicographically descending on (k_0, ..., k_{n-1})
/// within each total degree. For raw=(a,b), order 2 exact this gives
/// (a^2, ab, b^2); for UpTo the constant multi-index comes first.
std::vector<std::vector<int>> multi_indices(int n, int order, ProductOrder mode,
                                            std::size_t cap = 10000);

/// Number of monomials without enumerating them; throws past `cap`.
std::size_t product_dimension(int n, int order, ProductOrder mode,
                              std::size_t cap = 10000);

Vector product_attributes(const Vector& raw, int order, ProductOrder mode,
                          std::size_t cap = 10000);

double weighted_average(const Sample& sample,
                        const std::function<double(Eigen::Index)>& h);

enum class BasisKind { Monomial, ChebyshevScaled };

/// TotalDegree: products with total degree <= degree.
/// Tensor: every per-variable degree <= degree (the image basis x^kx y^ky).
enum class BasisLayout { TotalDegree, Tensor };

/// How raw attribute (or label) columns are expanded into a Hilbert-space
/// basis. The constant component is always index 0.
struct BasisSpec {
  BasisKind kind = BasisKind::Monomial;
  BasisLayout layout = BasisLayout::TotalDegree;
  /// Largest per-variable power; a univariate basis has degree+1 functions.
  int degree = 1;
  int variables = 1;
  /// Chebyshev argument scaling: [lo, hi] maps onto [-1, 1] per variable.
  std::vector<double> lo;
  std::vector<double> hi;

  static constexpr std::size_t constant_index = 0;

  /// Univariate basis with n functions (powers 0..n-1).
  static BasisSpec univariate(BasisKind kind, int n);

  std::size_t dim() const;
  std::vector<std::vector<int>> exponents() const;
};

/// Sets Chebyshev ranges from the per-column min/max of `rows`.
BasisSpec with_sample_ranges(BasisSpec spec, const Matrix& rows);

Vector evaluate_basis(const BasisSpec& spec, const Vector& raw);

/// Row-wise evaluate_basis.
Matrix evaluate_basis_rows(const BasisSpec& spec, const Matrix& rows);

}  // namespace kgo
