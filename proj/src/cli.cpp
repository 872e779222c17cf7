#include "kgo/cli.hpp"

#include "kgo/error.hpp"
#include "kgo/model_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace kgo {

namespace {

using nlohmann::json;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

BasisLayout parse_layout(const std::string& s) {
  if (s == "total") return BasisLayout::TotalDegree;
  if (s == "tensor") return BasisLayout::Tensor;
  fail_usage("unknown basis layout '" + s + "' (expected total or tensor)");
}

SubspaceVariant parse_variant(const std::string& s) {
  if (s == "projective") return SubspaceVariant::Projective;
  if (s == "coverage") return SubspaceVariant::Coverage;
  fail_usage("unknown subspace variant '" + s + "' (expected projective or coverage)");
}

double component_or_nan(const Vector& v, Eigen::Index i) {
  return i < v.size() ? v(i) : std::nan("");
}

Vector row_vector(const std::vector<double>& r, const ColumnRange& c) {
  Vector v(c.width());
  for (int i = 0; i < c.width(); ++i) v(i) = r[static_cast<std::size_t>(c.first + i)];
  return v;
}

// Label columns shared by the one-dimensional demos.
Table demo_1d(const DemoOptions& o, const std::function<double(double)>& label, int m) {
  if (o.n < 1 || m < 1) fail_usage("demo needs n >= 1 and m >= 1");
  const Sample s = grid_sample(o.grid, label);
  const BasisSpec xs = BasisSpec::univariate(BasisKind::Monomial, o.n);
  const BasisSpec fs = BasisSpec::univariate(BasisKind::Monomial, m);
  const Embedding e = embed(s, xs, fs);
  const LeastSquaresMap ls = fit_least_squares(e);
  const RadonNikodymModel rn = fit_radon_nikodym(e);
  FitOptions fo;
  fo.kind = o.kind;
  fo.solver = o.solver;
  fo.lsq_initial = o.lsq_initial;
  // A two-valued label (square wave) makes every eigenstate rank one; the
  // baselines are still reported and the operator columns become nan.
  std::optional<KgoModel> model;
  try {
    model = fit_model(s, xs, fs, fo).model;
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::Numerical) throw;
    std::cerr << "warning: operator fit failed (" << err.what()
              << "); operator columns are nan. Try --lsq-init.\n";
  }

  Table t{{"x", "exact", "least_squares", "radon_nikodym", "kgo_value", "kgo_probability", "pole"}, {}};
  const double nan = std::nan("");
  for (Eigen::Index l = 0; l < s.size(); ++l) {
    const Vector x = s.x_rows().row(l).transpose();
    const Vector bx = evaluate_basis(xs, x);
    const double truth = s.f_rows()(l, 0);
    std::vector<double> row{x(0), truth, component_or_nan(eval_least_squares(ls, bx), 1),
                            component_or_nan(eval_radon_nikodym(rn, bx), 1)};
    if (model) {
      const Prediction p = value(*model, x);
      row.insert(row.end(), {component_or_nan(p.value, 1),
                             probability(*model, x, Vector::Constant(1, truth)), p.pole ? 1.0 : 0.0});
    } else {
      row.insert(row.end(), {nan, nan, nan});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

struct RunRecord {
  std::string subcommand;
  json config;
  std::string digest;
  std::vector<std::string> outputs;
};

void write_manifest(const std::string& prefix, RunRecord rec, double elapsed_ms) {
  json j{{"subcommand", rec.subcommand},
         {"config", rec.config},
         {"input_digest", rec.digest},
         {"outputs", rec.outputs},
         {"elapsed_ms", elapsed_ms}};
  write_atomically(prefix + "manifest.json", j.dump(1) + "\n");
}

std::string trace_tsv(const IterationTrace& tr) {
  Table t{{"iteration", "f_before", "f_after", "residual", "lambda_antisym", "spur"}, {}};
  for (const auto& r : tr.records)
    t.rows.push_back({static_cast<double>(r.iteration), r.f_before, r.f_after, r.residual,
                      r.lambda_antisym, r.spur});
  return to_tsv(t);
}

struct FitArgs {
  std::string data, cols, x_basis = "monomial:2", f_basis = "monomial:2";
  std::string x_layout = "total", f_layout = "total";
  std::string tensor = "christoffel-product", algorithm = "linear-constraints";
  std::string subspace, prefix;
  int d = 0, max_iter = 1000, pool = 0;
  double tol = 1e-10, threshold = 1e-12;
  bool lsq_init = false;
};

struct EvalArgs {
  std::string model, data, cols, prefix;
};

struct DemoArgs {
  std::string name, prefix, image, tensor = "christoffel-product", algorithm = "linear-constraints";
  int n = 7, m = 0, grid = 201, max_iter = 1000, pool = 0;
  double tol = 1e-10;
  bool lsq_init = false;
  std::vector<double> ys{-0.6, 0.0, 0.4};
};

SolverConfig solver_config(const std::string& algorithm, int max_iter, double tol, int pool) {
  SolverConfig c;
  c.algorithm = algorithm_from_string(algorithm);
  c.max_iterations = max_iter;
  c.rel_tol = tol;
  c.candidate_pool = pool;
  c.validate();
  return c;
}

void cmd_fit(const FitArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const ColumnSpec cs = ColumnSpec::parse(a.cols);
  const std::string raw = read_file(a.data);
  const Sample s = parse_sample(raw, cs);
  const BasisSpec xs = parse_basis(a.x_basis, cs.x.width(), parse_layout(a.x_layout));
  const BasisSpec fs = parse_basis(a.f_basis, cs.f.width(), parse_layout(a.f_layout));

  FitOptions fo;
  fo.kind = tensor_kind_from_string(a.tensor);
  fo.solver = solver_config(a.algorithm, a.max_iter, a.tol, a.pool);
  if (a.d > 0) fo.D = a.d;
  if (!a.subspace.empty()) fo.subspace = parse_variant(a.subspace);
  fo.lsq_initial = a.lsq_init;
  fo.rel_threshold = a.threshold;
  const FitResult fit = fit_model(s, xs, fs, fo);
  const KgoModel& m = fit.model;

  std::ostringstream rep;
  rep << "tensor\t" << to_string(m.kind) << "\n"
      << "algorithm\t" << to_string(m.op.algorithm) << "\n"
      << "iterations\t" << m.op.iterations << "\n"
      << "D\t" << m.op.u.rows() << "\n"
      << "n\t" << m.x_space.eff_dim << "\n"
      << "m\t" << m.f_space.eff_dim << "\n"
      << "total_weight\t" << format_real(s.total_weight()) << "\n"
      << "F\t" << format_real(m.F) << "\n"
      << "F_tot\t" << format_real(m.F_tot) << "\n"
      << "F_jdg\t" << format_real(m.F_jdg) << "\n"
      << "constraint_residual\t" << format_real(m.op.residual) << "\n";

  const std::string model_path = a.prefix + "model.json";
  const std::string trace_path = a.prefix + "trace.tsv";
  const std::string report_path = a.prefix + "report.txt";
  write_atomically(model_path, serialize_model(m));
  write_atomically(trace_path, trace_tsv(fit.trace));
  write_atomically(report_path, rep.str());
  std::cout << rep.str();

  RunRecord rec{"fit",
                json{{"data", a.data}, {"cols", a.cols}, {"x_basis", a.x_basis},
                     {"f_basis", a.f_basis}, {"x_layout", a.x_layout}, {"f_layout", a.f_layout},
                     {"tensor", a.tensor}, {"algorithm", a.algorithm}, {"d", a.d},
                     {"subspace", a.subspace}, {"max_iter", a.max_iter}, {"tol", a.tol},
                     {"pool", a.pool}, {"threshold", a.threshold}, {"lsq_init", a.lsq_init}},
                "fnv1a:" + hex64(fnv1a(raw)),
                {model_path, trace_path, report_path}};
  write_manifest(a.prefix, rec,
                 std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
}

void cmd_eval(const EvalArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const KgoModel m = load_model(a.model);
  const ColumnSpec cs = ColumnSpec::parse(a.cols, false);
  const std::string raw = read_file(a.data);
  const auto rows = read_csv(raw);
  if (cs.x.width() != m.x_space.spec.variables)
    fail_usage("query has " + std::to_string(cs.x.width()) + " x columns, model expects " +
               std::to_string(m.x_space.spec.variables));
  if (cs.has_f && cs.f.width() != m.f_space.spec.variables)
    fail_usage("query has " + std::to_string(cs.f.width()) + " f columns, model expects " +
               std::to_string(m.f_space.spec.variables));
  int needed = cs.x.last;
  if (cs.has_f) needed = std::max(needed, cs.f.last);

  const int mraw = m.f_space.raw_dim;
  std::ostringstream out;
  std::vector<std::string> header;
  for (int i = 0; i < cs.x.width(); ++i) header.push_back("x" + std::to_string(i));
  for (int j = 0; j < mraw; ++j) header.push_back("fmaxp" + std::to_string(j));
  for (int j = 1; j < mraw; ++j) header.push_back("value" + std::to_string(j));
  header.push_back("certainty");
  header.push_back("pole");
  if (cs.has_f) header.push_back("probability");
  header.push_back("status");
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "\t" : "") << header[i];
  out << "\n";

  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) <= needed)
      fail_data("row " + std::to_string(r + 1) + ": expected at least " +
                std::to_string(needed + 1) + " columns");
    const Vector x = row_vector(rows[r], cs.x);
    std::vector<std::string> cells;
    for (Eigen::Index i = 0; i < x.size(); ++i) cells.push_back(format_real(x(i)));
    std::string status = "ok";
    try {
      const Prediction p = most_probable(m, x);
      std::vector<std::string> vals;
      for (int j = 0; j < mraw; ++j) vals.push_back(format_real(p.f_max_p(j)));
      for (int j = 1; j < mraw; ++j) vals.push_back(format_real(p.value(j)));
      vals.push_back(format_real(p.certainty));
      vals.push_back(p.pole ? "1" : "0");
      if (cs.has_f) vals.push_back(format_real(probability(m, x, row_vector(rows[r], cs.f))));
      if (!p.probability_normalized) status = "ok-unnormalized";
      cells.insert(cells.end(), vals.begin(), vals.end());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Usage) throw;
      status = "zero-projection";
      const std::size_t fill = header.size() - 1 - cells.size();
      for (std::size_t k = 0; k < fill; ++k) cells.push_back("nan");
    }
    cells.push_back(status);
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "\t" : "") << cells[i];
    out << "\n";
  }
  const std::string path = a.prefix + "eval.tsv";
  write_atomically(path, out.str());
  RunRecord rec{"eval", json{{"model", a.model}, {"data", a.data}, {"cols", a.cols}},
                "fnv1a:" + hex64(fnv1a(raw + read_file(a.model))), {path}};
  write_manifest(a.prefix, rec,
                 std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
}

void cmd_demo(const DemoArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  DemoOptions o;
  o.n = a.n;
  o.m = a.m;
  o.grid = a.grid;
  o.ys = a.ys;
  o.kind = tensor_kind_from_string(a.tensor);
  o.solver = solver_config(a.algorithm, a.max_iter, a.tol, a.pool);
  o.image_path = a.image;
  o.lsq_initial = a.lsq_init;
  Table t;
  std::string digest_src = a.name;
  if (a.name == "localized-states") t = demo_localized_states(o);
  else if (a.name == "square-wave") t = demo_square_wave(o);
  else if (a.name == "exact-map") t = demo_exact_map(o);
  else if (a.name == "image") {
    t = demo_image(o);
    digest_src += read_file(a.image);
  } else fail_usage("unknown demo '" + a.name + "'");
  const std::string path = a.prefix + "demo_" + a.name + ".tsv";
  write_atomically(path, to_tsv(t));
  RunRecord rec{"demo",
                json{{"name", a.name}, {"n", a.n}, {"m", a.m}, {"grid", a.grid}, {"ys", a.ys},
                     {"tensor", a.tensor}, {"algorithm", a.algorithm}, {"image", a.image},
                     {"max_iter", a.max_iter}, {"tol", a.tol}, {"pool", a.pool},
                     {"lsq_init", a.lsq_init}},
                "fnv1a:" + hex64(fnv1a(digest_src)), {path}};
  write_manifest(a.prefix, rec,
                 std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_tsv(const Table& t) {
  std::ostringstream out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "\t" : "") << t.header[i];
  out << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "\t" : "") << format_real(r[i]);
    out << "\n";
  }
  return out.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_atomically(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail_data("cannot write '" + tmp + "'");
    out << contents;
    out.flush();
    if (!out) fail_data("failed writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail_data("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

BasisSpec parse_basis(const std::string& text, int variables, BasisLayout layout) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) fail_usage("basis '" + text + "' must look like kind:n");
  const std::string kind = text.substr(0, colon);
  int n = 0;
  try {
    std::size_t pos = 0;
    n = std::stoi(text.substr(colon + 1), &pos);
    if (pos != text.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    fail_usage("basis size in '" + text + "' is not an integer");
  }
  if (n < 1) fail_usage("basis size must be at least 1");
  BasisSpec s;
  if (kind == "monomial") s.kind = BasisKind::Monomial;
  else if (kind == "chebyshev") s.kind = BasisKind::ChebyshevScaled;
  else fail_usage("unknown basis kind '" + kind + "'");
  s.layout = layout;
  s.degree = n - 1;
  s.variables = variables;
  s.lo.assign(static_cast<std::size_t>(variables), -1.0);
  s.hi.assign(static_cast<std::size_t>(variables), 1.0);
  s.dim();  // validates the cap
  return s;
}

Sample grid_sample(int points, const std::function<double(double)>& label) {
  if (points < 2) fail_usage("grid needs at least 2 points");
  Matrix x(points, 1), f(points, 1);
  for (int i = 0; i < points; ++i) {
    x(i, 0) = -1.0 + 2.0 * i / (points - 1);
    f(i, 0) = label(x(i, 0));
  }
  return Sample(x, f, Vector::Constant(points, 2.0 / points));
}

Table demo_localized_states(const DemoOptions& o) {
  if (o.n < 1) fail_usage("demo needs n >= 1");
  const Sample s = grid_sample(o.grid, [](double v) { return v; });
  const BasisSpec xs = BasisSpec::univariate(BasisKind::Monomial, o.n);
  const Matrix b = evaluate_basis_rows(xs, s.x_rows());
  const SpaceBasis space = make_space(b, s.weights(), xs);
  Table t;
  t.header.push_back("x");
  std::vector<LocalizedState> states;
  for (double y : o.ys) {
    t.header.push_back("psi2_y=" + format_real(y));
    states.push_back(localized_state(space, evaluate_basis(xs, Vector::Constant(1, y))));
  }
  for (Eigen::Index l = 0; l < s.size(); ++l) {
    std::vector<double> row{s.x_rows()(l, 0)};
    const Vector c = space.coords(b.row(l).transpose());
    for (const auto& st : states) {
      const double psi = st.coords.dot(c);
      row.push_back(psi * psi);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table demo_square_wave(const DemoOptions& o) {
  return demo_1d(o, [](double v) { return std::abs(v) < 0.5 ? 1.0 : 0.0; }, o.m > 0 ? o.m : 2);
}

Table demo_exact_map(const DemoOptions& o) {
  return demo_1d(o, [](double v) { return v; }, o.m > 0 ? o.m : 5);
}

GrayImage parse_pgm(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  if (tokens.size() < 4 || tokens[0] != "P2") fail_data("image is not an ASCII PGM (P2) file");
  GrayImage img;
  try {
    img.width = std::stoi(tokens[1]);
    img.height = std::stoi(tokens[2]);
    img.maxval = std::stoi(tokens[3]);
  } catch (const std::exception&) {
    fail_data("malformed PGM header");
  }
  if (img.width < 1 || img.height < 1 || img.maxval < 1) fail_data("malformed PGM header");
  const std::size_t count = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  if (tokens.size() != 4 + count) fail_data("PGM pixel count does not match its header");
  for (std::size_t i = 0; i < count; ++i) {
    int v = 0;
    try {
      v = std::stoi(tokens[4 + i]);
    } catch (const std::exception&) {
      fail_data("malformed PGM pixel value");
    }
    if (v < 0 || v > img.maxval) fail_data("PGM pixel value out of range");
    img.pixels.push_back(v);
  }
  return img;
}

Table demo_image(const DemoOptions& o) {
  if (o.n < 1) fail_usage("image demo needs n >= 1");
  const int m = o.m > 0 ? o.m : 2;
  const GrayImage img = parse_pgm(read_file(o.image_path));
  const Eigen::Index count = static_cast<Eigen::Index>(img.pixels.size());
  Matrix x(count, 2), f(count, 1);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) {
      const Eigen::Index l = static_cast<Eigen::Index>(r) * img.width + c;
      x(l, 0) = c;
      x(l, 1) = r;
      f(l, 0) = static_cast<double>(img.pixels[static_cast<std::size_t>(l)]) / img.maxval;
    }
  const Sample s(x, f);
  BasisSpec xs;
  xs.kind = BasisKind::ChebyshevScaled;
  xs.layout = BasisLayout::Tensor;
  xs.degree = o.n - 1;
  xs.variables = 2;
  const BasisSpec fs = BasisSpec::univariate(BasisKind::Monomial, m);
  FitOptions fo;
  fo.kind = o.kind;
  fo.solver = o.solver;
  fo.lsq_initial = o.lsq_initial;
  const FitResult fit = fit_model(s, xs, fs, fo);
  const BasisSpec& xs_fit = fit.model.x_space.spec;
  const LeastSquaresMap ls = fit_least_squares(fit.embedding);
  const RadonNikodymModel rn = fit_radon_nikodym(fit.embedding);

  Table t{{"px", "py", "exact", "least_squares", "radon_nikodym", "kgo_value", "kgo_probability", "pole"}, {}};
  for (Eigen::Index l = 0; l < count; ++l) {
    const Vector p = x.row(l).transpose();
    const Vector bx = evaluate_basis(xs_fit, p);
    const double truth = f(l, 0);
    const Prediction pr = value(fit.model, p);
    t.rows.push_back({p(0), p(1), truth, component_or_nan(eval_least_squares(ls, bx), 1),
                      component_or_nan(eval_radon_nikodym(rn, bx), 1),
                      component_or_nan(pr.value, 1),
                      probability(fit.model, p, Vector::Constant(1, truth)),
                      pr.pole ? 1.0 : 0.0});
  }
  return t;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Knowledge generalizing operator: fit, evaluate, demonstrate"};
  app.require_subcommand(1);

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "Fit a model from a CSV sample");
  fit->add_option("--data", fa.data, "CSV data file")->required();
  fit->add_option("--cols", fa.cols, "Columns, e.g. x=0-1;f=2;w=3")->required();
  fit->add_option("--x-basis", fa.x_basis, "kind:n for x (monomial|chebyshev)")->capture_default_str();
  fit->add_option("--f-basis", fa.f_basis, "kind:n for f (monomial|chebyshev)")->capture_default_str();
  fit->add_option("--x-layout", fa.x_layout, "total|tensor")->capture_default_str();
  fit->add_option("--f-layout", fa.f_layout, "total|tensor")->capture_default_str();
  fit->add_option("--tensor", fa.tensor,
                  "christoffel-product|christoffel-adjusted|f-christoffel|plain-value")
      ->capture_default_str();
  fit->add_option("--algorithm", fa.algorithm,
                  "maxev|maxev-svd-adj|maxev-evadj|lagrange|linear-constraints|lsq-adj")
      ->capture_default_str();
  fit->add_option("--d", fa.d, "Operator rows (default: f dimension)");
  fit->add_option("--subspace", fa.subspace, "projective|coverage contributing subspace");
  fit->add_flag("--lsq-init", fa.lsq_init, "Start linear-constraints from adjusted least squares");
  fit->add_option("--max-iter", fa.max_iter, "Iteration cap")->capture_default_str();
  fit->add_option("--tol", fa.tol, "Relative F change stop")->capture_default_str();
  fit->add_option("--pool", fa.pool, "Candidate pool (0: min(D*n,16))")->capture_default_str();
  fit->add_option("--threshold", fa.threshold, "Gram regularization threshold")->capture_default_str();
  fit->add_option("--out-prefix", fa.prefix, "Output path prefix");

  EvalArgs ea;
  auto* ev = app.add_subcommand("eval", "Evaluate a model on query rows");
  ev->add_option("--model", ea.model, "Model file")->required();
  ev->add_option("--data", ea.data, "CSV query file")->required();
  ev->add_option("--cols", ea.cols, "Columns, e.g. x=0-1[;f=2]")->required();
  ev->add_option("--out-prefix", ea.prefix, "Output path prefix");

  DemoArgs da;
  auto* demo = app.add_subcommand("demo", "Run a demonstration");
  demo->add_option("name", da.name, "localized-states|square-wave|exact-map|image")->required();
  demo->add_option("--n", da.n, "x basis size per variable")->capture_default_str();
  demo->add_option("--m", da.m, "f basis size (0: demo default)")->capture_default_str();
  demo->add_option("--grid", da.grid, "Grid points on [-1,1]")->capture_default_str();
  demo->add_option("--ys", da.ys, "Localization points");
  demo->add_option("--image", da.image, "ASCII PGM (P2) input");
  demo->add_option("--tensor", da.tensor, "Tensor kind")->capture_default_str();
  demo->add_option("--algorithm", da.algorithm, "Solver algorithm")->capture_default_str();
  demo->add_option("--max-iter", da.max_iter, "Iteration cap")->capture_default_str();
  demo->add_option("--tol", da.tol, "Relative F change stop")->capture_default_str();
  demo->add_option("--pool", da.pool, "Candidate pool")->capture_default_str();
  demo->add_flag("--lsq-init", da.lsq_init, "Start linear-constraints from adjusted least squares");
  demo->add_option("--out-prefix", da.prefix, "Output path prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (fit->parsed()) cmd_fit(fa);
    else if (ev->parsed()) cmd_eval(ea);
    else if (demo->parsed()) cmd_demo(da);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Usage: return 2;
      case ErrorKind::Data: return 3;
      case ErrorKind::Numerical: return 4;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 4;
}

}  // namespace kgo
