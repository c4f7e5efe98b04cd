#include "grading/model_io.hpp"

#include <json.hpp>

#include "grading/error.hpp"
#include "grading/util.hpp"

namespace grading {

namespace {

using nlohmann::json;

constexpr int kModelVersion = 1;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(m(i, j));
  return arr;
}

Eigen::MatrixXd matrix_from_json(const json& arr, Eigen::Index rows,
                                 Eigen::Index cols, const std::string& what) {
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(rows * cols))
    throw DecodeError("model block '" + what + "' has wrong length");
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = arr[k++].get<double>();
  return m;
}

}  // namespace

void save_model(const std::filesystem::path& path, const Network& net,
                Task task, const std::string& config_echo) {
  json doc;
  doc["format"] = "grading-model";
  doc["version"] = kModelVersion;
  doc["task"] = task_name(task);
  doc["structure"] = {
      {"input_size", net.structure.input_size},
      {"hidden_layers", net.structure.hidden_layers},
      {"output_size", net.structure.output_size},
      {"jump_connections", net.structure.jump_connections},
      {"activation", activation_name(net.structure.activation)},
      {"output_activation", activation_name(net.structure.output_activation)},
  };

  json weights = json::array();
  json biases = json::array();
  for (const auto& w : net.weights) weights.push_back(matrix_to_json(w));
  for (const auto& b : net.biases) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < b.size(); ++i) arr.push_back(b(i));
    biases.push_back(std::move(arr));
  }
  doc["weights"] = std::move(weights);
  doc["biases"] = std::move(biases);
  if (net.structure.jump_connections) doc["jump"] = matrix_to_json(net.jump);
  if (!config_echo.empty()) {
    json cfg = json::parse(config_echo, nullptr, false);
    doc["config"] = cfg.is_discarded() ? json(config_echo) : cfg;
  }

  write_file_atomic(path, doc.dump(2) + "\n");
}

LoadedModel load_model(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  json doc = json::parse(content, nullptr, false);
  if (doc.is_discarded())
    throw DecodeError("not valid JSON: " + path.string());

  try {
    if (doc.at("format").get<std::string>() != "grading-model")
      throw DecodeError("not a grading model: " + path.string());
    if (doc.at("version").get<int>() != kModelVersion)
      throw DecodeError("unsupported model version in " + path.string());

    LoadedModel loaded;
    loaded.task = task_from_name(doc.at("task").get<std::string>());

    const json& s = doc.at("structure");
    NetworkStructure structure;
    structure.input_size = s.at("input_size").get<int>();
    structure.hidden_layers = s.at("hidden_layers").get<std::vector<int>>();
    structure.output_size = s.at("output_size").get<int>();
    structure.jump_connections = s.at("jump_connections").get<bool>();
    structure.activation =
        activation_from_name(s.at("activation").get<std::string>());
    structure.output_activation =
        activation_from_name(s.at("output_activation").get<std::string>());
    structure.validate();

    Network net;
    net.structure = structure;
    const std::vector<int> sizes = structure.layer_sizes();
    const json& weights = doc.at("weights");
    const json& biases = doc.at("biases");
    if (weights.size() != sizes.size() - 1 || biases.size() != sizes.size() - 1)
      throw DecodeError("model layer count mismatch in " + path.string());
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      net.weights.push_back(matrix_from_json(
          weights[l], sizes[l + 1], sizes[l], "weights[" + std::to_string(l) + "]"));
      net.biases.push_back(matrix_from_json(biases[l], sizes[l + 1], 1,
                                            "biases[" + std::to_string(l) + "]"));
    }
    if (structure.jump_connections)
      net.jump = matrix_from_json(doc.at("jump"), structure.output_size,
                                  structure.input_size, "jump");
    else
      net.jump.resize(0, 0);

    if (!net.all_finite())
      throw DecodeError("model contains non-finite weights: " + path.string());
    loaded.network = std::move(net);
    return loaded;
  } catch (const json::exception& e) {
    throw DecodeError("malformed model " + path.string() + ": " + e.what());
  }
}

}  // namespace grading
