#include "kgo/core_data.hpp"

#include "kgo/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace kgo {

namespace {

void check_sample(const Matrix& x, const Matrix& f, const Vector& w) {
  if (w.size() < 1) fail_data("sample is empty");
  if (x.rows() != w.size() || f.rows() != w.size())
    fail_data("sample row counts disagree: x=" + std::to_string(x.rows()) +
              " f=" + std::to_string(f.rows()) +
              " w=" + std::to_string(w.size()));
  for (Eigen::Index l = 0; l < w.size(); ++l) {
    if (!std::isfinite(w(l)) || w(l) < 0.0)
      fail_data("weight of observation " + std::to_string(l + 1) +
                " is negative or not finite");
  }
  if (!x.allFinite() || !f.allFinite()) fail_data("sample has non-finite values");
  if (!(w.sum() > 0.0)) fail_data("total weight must be positive");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_index(const std::string& tok, const std::string& ctx) {
  int v = 0;
  const std::string t = trim(tok);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || v < 0)
    fail_usage("bad column index '" + tok + "' in " + ctx);
  return v;
}

ColumnRange parse_range(const std::string& text, const std::string& ctx) {
  const auto dash = text.find('-');
  ColumnRange r;
  if (dash == std::string::npos) {
    r.first = r.last = parse_index(text, ctx);
  } else {
    r.first = parse_index(text.substr(0, dash), ctx);
    r.last = parse_index(text.substr(dash + 1), ctx);
  }
  if (r.last < r.first) fail_usage("empty column range in " + ctx);
  return r;
}

// Overflow-safe binomial; returns cap+1 once the value exceeds cap.
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double r = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (r > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(std::llround(r));
}

void exact_indices(int n, int order, std::vector<int>& cur, int pos,
                   std::vector<std::vector<int>>& out) {
  if (pos == n - 1) {
    cur[pos] = order;
    out.push_back(cur);
    return;
  }
  for (int k = order; k >= 0; --k) {
    cur[pos] = k;
    exact_indices(n, order - k, cur, pos + 1, out);
  }
}

double chebyshev(int k, double t) {
  if (k == 0) return 1.0;
  double a = 1.0, b = t;
  for (int i = 1; i < k; ++i) {
    const double c = 2.0 * t * b - a;
    a = b;
    b = c;
  }
  return b;
}

}  // namespace

Sample::Sample(Matrix x_rows, Matrix f_rows, Vector weights)
    : x_rows_(std::move(x_rows)),
      f_rows_(std::move(f_rows)),
      weights_(std::move(weights)) {
  check_sample(x_rows_, f_rows_, weights_);
}

Sample::Sample(Matrix x_rows, Matrix f_rows)
    : Sample(std::move(x_rows), f_rows, Vector::Ones(f_rows.rows())) {}

ColumnSpec ColumnSpec::parse(const std::string& text, bool require_f) {
  ColumnSpec spec;
  bool has_x = false, has_f = false;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) fail_usage("column spec item '" + part + "' lacks '='");
    const std::string key = trim(part.substr(0, eq));
    const std::string val = part.substr(eq + 1);
    if (key == "x") {
      spec.x = parse_range(val, "x");
      has_x = true;
    } else if (key == "f") {
      spec.f = parse_range(val, "f");
      has_f = true;
    } else if (key == "w") {
      spec.w = parse_index(val, "w");
    } else {
      fail_usage("unknown column spec key '" + key + "'");
    }
  }
  if (!has_x || (require_f && !has_f)) fail_usage("column spec needs both x= and f= ranges");
  spec.has_f = has_f;
  if (spec.w) {
    const ColumnRange wr{*spec.w, *spec.w};
    if (wr.overlaps(spec.x) || (has_f && wr.overlaps(spec.f)))
      fail_usage("weight column overlaps the x or f range");
  }
  return spec;
}

std::vector<std::vector<double>> read_csv(const std::string& csv_text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(csv_text);
  std::string line;
  int data_row = 0;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    ++data_row;
    std::vector<double> vals;
    std::stringstream ls(t);
    std::string tok;
    while (std::getline(ls, tok, ',')) {
      const std::string v = trim(tok);
      double d = 0.0;
      auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
      if (v.empty() || ec != std::errc() || p != v.data() + v.size() || !std::isfinite(d))
        fail_data("row " + std::to_string(data_row) + ": cannot parse '" + v +
                  "' as a finite real");
      vals.push_back(d);
    }
    rows.push_back(std::move(vals));
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_data("cannot open file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Sample parse_sample(const std::string& csv_text, const ColumnSpec& spec) {
  int needed = std::max(spec.x.last, spec.f.last);
  if (spec.w) needed = std::max(needed, *spec.w);
  const auto rows = read_csv(csv_text);
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (static_cast<int>(rows[i].size()) <= needed)
      fail_data("row " + std::to_string(i + 1) + ": expected at least " +
                std::to_string(needed + 1) + " columns, got " +
                std::to_string(rows[i].size()));
  if (rows.empty()) fail_data("no data rows selected");

  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  Matrix x(m, spec.x.width()), f(m, spec.f.width());
  Vector w = Vector::Ones(m);
  for (Eigen::Index l = 0; l < m; ++l) {
    const auto& r = rows[static_cast<std::size_t>(l)];
    for (int c = 0; c < spec.x.width(); ++c) x(l, c) = r[spec.x.first + c];
    for (int c = 0; c < spec.f.width(); ++c) f(l, c) = r[spec.f.first + c];
    if (spec.w) w(l) = r[*spec.w];
  }
  return Sample(std::move(x), std::move(f), std::move(w));
}

Sample load_sample(const std::string& path, const std::string& column_spec) {
  const ColumnSpec spec = ColumnSpec::parse(column_spec);
  return parse_sample(read_file(path), spec);
}

std::size_t product_dimension(int n, int order, ProductOrder mode,
                              std::size_t cap) {
  if (n < 1 || order < 0) fail_usage("product_attributes needs n >= 1 and order >= 0");
  const auto nn = static_cast<std::size_t>(n);
  const auto dd = static_cast<std::size_t>(order);
  // sum_{d<=D} C(n+d-1, d) = C(n+D, D)
  const std::size_t dim = mode == ProductOrder::Exact
                              ? binomial_capped(nn + dd - 1, dd, cap)
                              : binomial_capped(nn + dd, dd, cap);
  if (dim > cap)
    fail_usage("producted dimension exceeds the cap of " + std::to_string(cap));
  return dim;
}

std::vector<std::vector<int>> multi_indices(int n, int order, ProductOrder mode,
                                            std::size_t cap) {
  const std::size_t dim = product_dimension(n, order, mode, cap);
  std::vector<std::vector<int>> out;
  out.reserve(dim);
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  if (mode == ProductOrder::Exact) {
    exact_indices(n, order, cur, 0, out);
  } else {
    for (int d = 0; d <= order; ++d) exact_indices(n, d, cur, 0, out);
  }
  return out;
}

Vector product_attributes(const Vector& raw, int order, ProductOrder mode,
                          std::size_t cap) {
  const auto idx = multi_indices(static_cast<int>(raw.size()), order, mode, cap);
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    double v = 1.0;
    for (Eigen::Index j = 0; j < raw.size(); ++j)
      v *= std::pow(raw(j), idx[i][static_cast<std::size_t>(j)]);
    out(static_cast<Eigen::Index>(i)) = v;
  }
  return out;
}

double weighted_average(const Sample& sample,
                        const std::function<double(Eigen::Index)>& h) {
  double acc = 0.0;
  for (Eigen::Index l = 0; l < sample.size(); ++l) {
    const double v = h(l);
    if (!std::isfinite(v))
      fail_data("averaged function is not finite at observation " +
                std::to_string(l + 1));
    acc += v * sample.weights()(l);
  }
  return acc;
}

BasisSpec BasisSpec::univariate(BasisKind kind, int n) {
  if (n < 1) fail_usage("basis dimension must be at least 1");
  BasisSpec s;
  s.kind = kind;
  s.degree = n - 1;
  s.variables = 1;
  s.lo = {-1.0};
  s.hi = {1.0};
  return s;
}

std::vector<std::vector<int>> BasisSpec::exponents() const {
  if (variables < 1 || degree < 0) fail_usage("invalid basis spec");
  if (layout == BasisLayout::TotalDegree)
    return multi_indices(variables, degree, ProductOrder::UpTo);
  // Tensor layout: first variable varies slowest.
  std::size_t dim = 1;
  for (int v = 0; v < variables; ++v) {
    dim *= static_cast<std::size_t>(degree + 1);
    if (dim > 10000) fail_usage("tensor basis dimension exceeds the cap of 10000");
  }
  std::vector<std::vector<int>> out;
  out.reserve(dim);
  std::vector<int> cur(static_cast<std::size_t>(variables), 0);
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t rem = i;
    for (int v = variables - 1; v >= 0; --v) {
      cur[static_cast<std::size_t>(v)] =
          static_cast<int>(rem % static_cast<std::size_t>(degree + 1));
      rem /= static_cast<std::size_t>(degree + 1);
    }
    out.push_back(cur);
  }
  return out;
}

std::size_t BasisSpec::dim() const {
  if (layout == BasisLayout::TotalDegree)
    return product_dimension(variables, degree, ProductOrder::UpTo);
  return exponents().size();
}

BasisSpec with_sample_ranges(BasisSpec spec, const Matrix& rows) {
  if (rows.cols() != spec.variables)
    fail_usage("basis expects " + std::to_string(spec.variables) +
               " columns, sample has " + std::to_string(rows.cols()));
  spec.lo.assign(static_cast<std::size_t>(spec.variables), 0.0);
  spec.hi.assign(static_cast<std::size_t>(spec.variables), 0.0);
  for (int v = 0; v < spec.variables; ++v) {
    spec.lo[static_cast<std::size_t>(v)] = rows.col(v).minCoeff();
    spec.hi[static_cast<std::size_t>(v)] = rows.col(v).maxCoeff();
  }
  return spec;
}

namespace {

// per-variable 1D values p_0..p_degree
Matrix univariate_table(const BasisSpec& spec, const Vector& raw) {
  Matrix table(spec.variables, spec.degree + 1);
  for (int v = 0; v < spec.variables; ++v) {
    double t = raw(v);
    if (spec.kind == BasisKind::ChebyshevScaled) {
      const auto sv = static_cast<std::size_t>(v);
      if (spec.lo.size() != static_cast<std::size_t>(spec.variables) ||
          spec.hi.size() != spec.lo.size())
        fail_usage("Chebyshev basis is missing argument ranges");
      const double width = spec.hi[sv] - spec.lo[sv];
      t = width > 0.0 ? (2.0 * raw(v) - (spec.hi[sv] + spec.lo[sv])) / width : 0.0;
    }
    double p = 1.0;
    for (int k = 0; k <= spec.degree; ++k) {
      if (spec.kind == BasisKind::Monomial) {
        table(v, k) = p;
        p *= t;
      } else {
        table(v, k) = chebyshev(k, t);
      }
    }
  }
  return table;
}

}  // namespace

Vector evaluate_basis(const BasisSpec& spec, const Vector& raw) {
  if (raw.size() != spec.variables)
    fail_data("basis expects " + std::to_string(spec.variables) +
              " raw values, got " + std::to_string(raw.size()));
  const Matrix table = univariate_table(spec, raw);
  const auto exps = spec.exponents();
  Vector out(static_cast<Eigen::Index>(exps.size()));
  for (std::size_t i = 0; i < exps.size(); ++i) {
    double v = 1.0;
    for (int j = 0; j < spec.variables; ++j)
      v *= table(j, exps[i][static_cast<std::size_t>(j)]);
    out(static_cast<Eigen::Index>(i)) = v;
  }
  return out;
}

Matrix evaluate_basis_rows(const BasisSpec& spec, const Matrix& rows) {
  Matrix out(rows.rows(), static_cast<Eigen::Index>(spec.dim()));
  for (Eigen::Index l = 0; l < rows.rows(); ++l)
    out.row(l) = evaluate_basis(spec, rows.row(l).transpose()).transpose();
  return out;
}

}  // namespace kgo
