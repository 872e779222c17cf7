#include "kgo/model_io.hpp"

#include "kgo/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace kgo {

using nlohmann::json;

namespace {

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

Matrix matrix_from(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const json& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows))
    fail_data("model matrix has inconsistent shape");
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = data.at(static_cast<std::size_t>(r));
    if (row.size() != static_cast<std::size_t>(cols)) fail_data("model matrix row has wrong length");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

json to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vector_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json to_json(const BasisSpec& s) {
  return json{{"kind", s.kind == BasisKind::Monomial ? "monomial" : "chebyshev"},
              {"layout", s.layout == BasisLayout::TotalDegree ? "total-degree" : "tensor"},
              {"degree", s.degree},
              {"variables", s.variables},
              {"lo", s.lo},
              {"hi", s.hi}};
}

BasisSpec spec_from(const json& j) {
  BasisSpec s;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "monomial") s.kind = BasisKind::Monomial;
  else if (kind == "chebyshev") s.kind = BasisKind::ChebyshevScaled;
  else fail_data("unknown basis kind '" + kind + "' in model");
  const auto layout = j.at("layout").get<std::string>();
  if (layout == "total-degree") s.layout = BasisLayout::TotalDegree;
  else if (layout == "tensor") s.layout = BasisLayout::Tensor;
  else fail_data("unknown basis layout '" + layout + "' in model");
  s.degree = j.at("degree").get<int>();
  s.variables = j.at("variables").get<int>();
  s.lo = j.at("lo").get<std::vector<double>>();
  s.hi = j.at("hi").get<std::vector<double>>();
  return s;
}

json to_json(const SpaceBasis& s) {
  return json{{"spec", to_json(s.spec)},
              {"raw_dim", s.raw_dim},
              {"eff_dim", s.eff_dim},
              {"T", to_json(s.T)},
              {"gram", to_json(s.gram_raw)},
              {"constant_coords", to_json(s.constant_coords)}};
}

SpaceBasis space_from(const json& j) {
  SpaceBasis s;
  s.spec = spec_from(j.at("spec"));
  s.raw_dim = j.at("raw_dim").get<int>();
  s.eff_dim = j.at("eff_dim").get<int>();
  s.T = matrix_from(j.at("T"));
  s.gram_raw = matrix_from(j.at("gram"));
  s.constant_coords = vector_from(j.at("constant_coords"));
  if (s.T.rows() != s.eff_dim || s.T.cols() != s.raw_dim || s.gram_raw.rows() != s.raw_dim ||
      s.gram_raw.cols() != s.raw_dim || s.spec.dim() != static_cast<std::size_t>(s.raw_dim))
    fail_data("model space dimensions are inconsistent");
  return s;
}

}  // namespace

std::string serialize_model(const KgoModel& model) {
  json j;
  j["format"] = "kgo-model";
  j["version"] = kModelVersion;
  j["x_space"] = to_json(model.x_space);
  j["f_space"] = to_json(model.f_space);
  j["kind"] = to_string(model.kind);
  j["u"] = to_json(model.op.u);
  j["out_map"] = to_json(model.out_map);
  j["subspace_raw"] = model.subspace_raw ? to_json(*model.subspace_raw) : json(nullptr);
  j["adjusted_projector"] =
      model.adjusted_projector ? to_json(*model.adjusted_projector) : json(nullptr);
  j["solver"] = json{{"algorithm", to_string(model.op.algorithm)},
                     {"iterations", model.op.iterations},
                     {"residual", model.op.residual},
                     {"F", model.op.F}};
  j["F"] = model.F;
  j["F_tot"] = model.F_tot;
  j["F_jdg"] = model.F_jdg;
  return j.dump(1) + "\n";
}

KgoModel deserialize_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    fail_data(std::string("corrupt model payload: ") + ex.what());
  }
  try {
    if (!j.is_object() || j.value("format", "") != "kgo-model")
      fail_data("not a kgo model file");
    const int version = j.at("version").get<int>();
    if (version != kModelVersion)
      fail_data("model version " + std::to_string(version) + " is not supported (expected " +
                std::to_string(kModelVersion) + ")");
    KgoModel m;
    m.x_space = space_from(j.at("x_space"));
    m.f_space = space_from(j.at("f_space"));
    m.kind = tensor_kind_from_string(j.at("kind").get<std::string>());
    m.op.u = matrix_from(j.at("u"));
    m.out_map = matrix_from(j.at("out_map"));
    if (!j.at("subspace_raw").is_null()) m.subspace_raw = matrix_from(j.at("subspace_raw"));
    if (!j.at("adjusted_projector").is_null())
      m.adjusted_projector = matrix_from(j.at("adjusted_projector"));
    const json& s = j.at("solver");
    m.op.algorithm = algorithm_from_string(s.at("algorithm").get<std::string>());
    m.op.iterations = s.at("iterations").get<int>();
    m.op.residual = s.at("residual").get<double>();
    m.op.F = s.at("F").get<double>();
    m.F = j.at("F").get<double>();
    m.F_tot = j.at("F_tot").get<double>();
    m.F_jdg = j.at("F_jdg").get<double>();
    if (m.op.u.cols() != m.x_space.eff_dim || m.out_map.rows() != m.f_space.eff_dim ||
        m.out_map.cols() != m.op.u.rows())
      fail_data("model operator dimensions are inconsistent");
    return m;
  } catch (const json::exception& ex) {
    fail_data(std::string("corrupt model payload: ") + ex.what());
  } catch (const Error& ex) {
    if (ex.kind() == ErrorKind::Data) throw;
    fail_data(std::string("corrupt model payload: ") + ex.what());
  }
}

void save_model(const KgoModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_data("cannot write model file '" + path + "'");
  out << serialize_model(model);
  if (!out) fail_data("failed writing model file '" + path + "'");
}

KgoModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_data("cannot open model file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize_model(buf.str());
}

}  // namespace kgo
