#pragma once

#include <filesystem>

#include <json.hpp>

#include "cdinn/csv.hpp"
#include "cdinn/dataset.hpp"
#include "cdinn/network.hpp"
#include "cdinn/scaler.hpp"

namespace cdinn {

using json = nlohmann::json;

// Versioned JSON model container. Raw (pre-squaring) parameters are stored so
// the nonnegativity mechanism survives a round-trip; doubles serialize with
// shortest-round-trip formatting, so reloaded models reproduce forward
// outputs bit-for-bit.
struct ModelFile {
  static constexpr int kFormatVersion = 1;
  NetworkParams net;
  AffineScaler input_scaler;
  AffineScaler output_scaler;
  json provenance;  // seed, epochs, final mse, free-form
};

namespace io_detail {

inline json to_json(const Matrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

inline Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  m.data = j.at("data").get<std::vector<double>>();
  require(m.data.size() == m.rows * m.cols, "model file: matrix size mismatch");
  return m;
}

inline json to_json(const DenseLayerParams& l) {
  return json{{"raw_z_weight", to_json(l.raw_z_weight)},
              {"free_weight", to_json(l.free_weight)},
              {"passthrough_weight", to_json(l.passthrough_weight)},
              {"bias", l.bias},
              {"prelu_slope", l.prelu_slope},
              {"constrained", l.constrained},
              {"use_passthrough", l.use_passthrough},
              {"bias_enabled", l.bias_enabled},
              {"slope_trainable", l.slope_trainable},
              {"linear", l.activation == Activation::linear}};
}

inline DenseLayerParams layer_from_json(const json& j) {
  DenseLayerParams l;
  l.raw_z_weight = matrix_from_json(j.at("raw_z_weight"));
  l.free_weight = matrix_from_json(j.at("free_weight"));
  l.passthrough_weight = matrix_from_json(j.at("passthrough_weight"));
  l.bias = j.at("bias").get<Vector>();
  l.prelu_slope = j.at("prelu_slope").get<Vector>();
  l.constrained = j.at("constrained").get<bool>();
  l.use_passthrough = j.at("use_passthrough").get<bool>();
  l.bias_enabled = j.at("bias_enabled").get<bool>();
  l.slope_trainable = j.at("slope_trainable").get<bool>();
  l.activation = j.at("linear").get<bool>() ? Activation::linear : Activation::pc_relu;
  return l;
}

inline json to_json(const NetworkSpec& s) {
  return json{{"kind", to_string(s.kind)},
              {"input_dim", s.input_dim},
              {"hidden_widths", s.hidden_widths},
              {"output_dim", s.output_dim},
              {"activation", s.activation == HiddenActivation::kind_default
                                 ? "default"
                                 : (s.activation == HiddenActivation::relu ? "relu" : "pc_relu")},
              {"passthrough_enabled", s.passthrough_enabled},
              {"bias_enabled", s.bias_enabled},
              {"expand_recurrent_input", s.expand_recurrent_input},
              {"rng_seed", s.rng_seed},
              {"initial_slope", s.initial_slope}};
}

inline NetworkSpec spec_from_json(const json& j) {
  NetworkSpec s;
  s.kind = parse_net_kind(j.at("kind").get<std::string>());
  s.input_dim = j.at("input_dim").get<std::size_t>();
  s.hidden_widths = j.at("hidden_widths").get<std::vector<std::size_t>>();
  s.output_dim = j.at("output_dim").get<std::size_t>();
  const std::string act = j.at("activation").get<std::string>();
  s.activation = act == "default" ? HiddenActivation::kind_default
                                  : (act == "relu" ? HiddenActivation::relu
                                                   : HiddenActivation::pc_relu);
  s.passthrough_enabled = j.at("passthrough_enabled").get<bool>();
  s.bias_enabled = j.at("bias_enabled").get<bool>();
  s.expand_recurrent_input = j.at("expand_recurrent_input").get<bool>();
  s.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  s.initial_slope = j.at("initial_slope").get<double>();
  return s;
}

inline json to_json(const RecurrentParams& r) {
  return json{{"u_in", to_json(r.u_in)},
              {"z_rec", to_json(r.z_rec)},
              {"m_out", to_json(r.m_out)},
              {"d_in_prev", to_json(r.d_in_prev)},
              {"n_rec_out", to_json(r.n_rec_out)},
              {"v_in_out", to_json(r.v_in_out)},
              {"bias_z", r.bias_z},
              {"bias_y", r.bias_y},
              {"prelu_slope", r.prelu_slope},
              {"u_constrained", r.u_constrained},
              {"m_constrained", r.m_constrained},
              {"passthroughs", r.passthroughs},
              {"bias_enabled", r.bias_enabled},
              {"slope_trainable", r.slope_trainable},
              {"expand_input", r.expand_input},
              {"relu_output", r.relu_output}};
}

inline RecurrentParams recurrent_from_json(const json& j) {
  RecurrentParams r;
  r.u_in = matrix_from_json(j.at("u_in"));
  r.z_rec = matrix_from_json(j.at("z_rec"));
  r.m_out = matrix_from_json(j.at("m_out"));
  r.d_in_prev = matrix_from_json(j.at("d_in_prev"));
  r.n_rec_out = matrix_from_json(j.at("n_rec_out"));
  r.v_in_out = matrix_from_json(j.at("v_in_out"));
  r.bias_z = j.at("bias_z").get<Vector>();
  r.bias_y = j.at("bias_y").get<Vector>();
  r.prelu_slope = j.at("prelu_slope").get<Vector>();
  r.u_constrained = j.at("u_constrained").get<bool>();
  r.m_constrained = j.at("m_constrained").get<bool>();
  r.passthroughs = j.at("passthroughs").get<bool>();
  r.bias_enabled = j.at("bias_enabled").get<bool>();
  r.slope_trainable = j.at("slope_trainable").get<bool>();
  r.expand_input = j.at("expand_input").get<bool>();
  r.relu_output = j.at("relu_output").get<bool>();
  return r;
}

inline json to_json(const AffineScaler& s) { return json{{"min", s.mins}, {"max", s.maxs}}; }

inline AffineScaler scaler_from_json(const json& j) {
  AffineScaler s;
  s.mins = j.at("min").get<Vector>();
  s.maxs = j.at("max").get<Vector>();
  return s;
}

}  // namespace io_detail

inline void save_model(const std::filesystem::path& path, const ModelFile& m) {
  json j;
  j["format_version"] = ModelFile::kFormatVersion;
  j["spec"] = io_detail::to_json(m.net.spec);
  json trunks = json::array();
  for (const auto& trunk : m.net.trunks) {
    json layers = json::array();
    for (const auto& layer : trunk) layers.push_back(io_detail::to_json(layer));
    trunks.push_back(layers);
  }
  j["trunks"] = trunks;
  j["recurrent"] = io_detail::to_json(m.net.rec);
  j["input_scaler"] = io_detail::to_json(m.input_scaler);
  j["output_scaler"] = io_detail::to_json(m.output_scaler);
  j["provenance"] = m.provenance;
  write_file_atomic(path, j.dump(2) + "\n");
}

inline ModelFile load_model(const std::filesystem::path& path) {
  const json j = json::parse(read_file(path));
  const int version = j.at("format_version").get<int>();
  if (version != ModelFile::kFormatVersion)
    throw std::runtime_error("model file " + path.string() + ": unsupported format_version " +
                             std::to_string(version));
  ModelFile m;
  m.net.spec = io_detail::spec_from_json(j.at("spec"));
  for (const auto& trunk : j.at("trunks")) {
    std::vector<DenseLayerParams> layers;
    for (const auto& layer : trunk) layers.push_back(io_detail::layer_from_json(layer));
    m.net.trunks.push_back(std::move(layers));
  }
  m.net.rec = io_detail::recurrent_from_json(j.at("recurrent"));
  m.input_scaler = io_detail::scaler_from_json(j.at("input_scaler"));
  m.output_scaler = io_detail::scaler_from_json(j.at("output_scaler"));
  m.provenance = j.at("provenance");
  return m;
}

// Provenance sidecar for generated datasets.
inline void save_provenance(const std::filesystem::path& path, const Provenance& prov) {
  json j;
  j["generator"] = prov.generator;
  j["params"] = prov.params;
  j["seed"] = prov.seed;
  write_file_atomic(path, j.dump(2) + "\n");
}

inline Provenance load_provenance(const std::filesystem::path& path) {
  const json j = json::parse(read_file(path));
  Provenance prov;
  prov.generator = j.at("generator").get<std::string>();
  prov.params = j.at("params").get<std::map<std::string, double>>();
  prov.seed = j.at("seed").get<std::uint64_t>();
  return prov;
}

// Record of one benchmark invocation; re-running from it reproduces every
// numeric column (timing columns are non-normative).
struct RunManifest {
  std::string experiment;
  json config;
  std::vector<std::string> outputs;
  std::string timestamp;
  std::string toolkit_version = "cdinn-1.0";
};

inline void save_manifest(const std::filesystem::path& path, const RunManifest& m) {
  json j;
  j["experiment"] = m.experiment;
  j["config"] = m.config;
  j["outputs"] = m.outputs;
  j["timestamp"] = m.timestamp;
  j["toolkit_version"] = m.toolkit_version;
  write_file_atomic(path, j.dump(2) + "\n");
}

inline RunManifest load_manifest(const std::filesystem::path& path) {
  const json j = json::parse(read_file(path));
  RunManifest m;
  m.experiment = j.at("experiment").get<std::string>();
  m.config = j.at("config");
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  m.timestamp = j.at("timestamp").get<std::string>();
  m.toolkit_version = j.at("toolkit_version").get<std::string>();
  return m;
}

}  // namespace cdinn
