#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "facecue/error.hpp"
#include "facecue/features.hpp"
#include "facecue/forest.hpp"
#include "facecue/pca.hpp"

namespace facecue {

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::string_view kModelFormatName = "facecue-model";

struct ModelBundle {
  PcaModel pca;
  ForestModel forest;
  OriginIndex origin;
  int format_version = kModelFormatVersion;
  /// Source frame_ids the model was trained on, sorted.
  std::vector<std::string> training_manifest;

  friend bool operator==(const ModelBundle&, const ModelBundle&) = default;
};

inline nlohmann::json to_json(const ForestConfig& c) {
  nlohmann::json j;
  j["n_trees"] = c.n_trees;
  j["max_depth"] = c.max_depth ? nlohmann::json(*c.max_depth) : nlohmann::json(nullptr);
  j["min_samples_split"] = c.min_samples_split;
  j["max_features"] = c.max_features ? nlohmann::json(*c.max_features) : nlohmann::json(nullptr);
  j["seed"] = c.seed;
  j["test_mode"] = c.test_mode;
  return j;
}

inline ForestConfig forest_config_from_json(const nlohmann::json& j) {
  ForestConfig c;
  c.n_trees = j.at("n_trees").get<std::size_t>();
  if (!j.at("max_depth").is_null()) c.max_depth = j.at("max_depth").get<std::size_t>();
  c.min_samples_split = j.at("min_samples_split").get<std::size_t>();
  if (!j.at("max_features").is_null()) c.max_features = j.at("max_features").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.test_mode = j.at("test_mode").get<bool>();
  return c;
}

namespace detail {

inline nlohmann::json tree_to_json(const DecisionTree& tree) {
  std::vector<std::int32_t> feature, left, right;
  std::vector<double> threshold;
  std::vector<ClassCounts> counts;
  for (const auto& n : tree.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    counts.push_back(n.counts);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left},
          {"right", right},     {"counts", counts}};
}

inline DecisionTree tree_from_json(const nlohmann::json& j, std::size_t n_features) {
  const auto feature = j.at("feature").get<std::vector<std::int32_t>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<std::int32_t>>();
  const auto right = j.at("right").get<std::vector<std::int32_t>>();
  const auto counts = j.at("counts").get<std::vector<ClassCounts>>();
  const std::size_t n = feature.size();
  if (n == 0 || threshold.size() != n || left.size() != n || right.size() != n ||
      counts.size() != n) {
    throw Error(ErrorCode::MalformedModel, "tree arrays disagree in length");
  }
  DecisionTree tree;
  tree.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = tree.nodes[i];
    node = {feature[i], threshold[i], left[i], right[i], counts[i]};
    if (node.is_leaf()) {
      if (node.counts[0] + node.counts[1] == 0) {
        throw Error(ErrorCode::MalformedModel, "leaf with no training rows");
      }
      continue;
    }
    // Pre-order storage: children always follow their parent.
    const auto in_range = [&](std::int32_t c) {
      return c > static_cast<std::int32_t>(i) && static_cast<std::size_t>(c) < n;
    };
    if (static_cast<std::size_t>(node.feature) >= n_features || !in_range(node.left) ||
        !in_range(node.right)) {
      throw Error(ErrorCode::MalformedModel, "bad internal node " + std::to_string(i));
    }
  }
  return tree;
}

}  // namespace detail

inline nlohmann::json to_json(const ModelBundle& b) {
  nlohmann::json j;
  j["format"] = kModelFormatName;
  j["format_version"] = b.format_version;
  j["origin_index"] = b.origin.value();
  j["training_manifest"] = b.training_manifest;

  auto& pca = j["pca"];
  pca["k"] = b.pca.k();
  pca["mean"] = b.pca.mean;
  pca["explained_variance"] = b.pca.explained_variance;
  pca["components"] = nlohmann::json::array();
  for (std::size_t r = 0; r < b.pca.k(); ++r) {
    const auto row = b.pca.components.row(r);
    pca["components"].push_back(std::vector<double>(row.begin(), row.end()));
  }

  auto& forest = j["forest"];
  forest["n_features"] = b.forest.n_features;
  forest["config"] = to_json(b.forest.config);
  forest["trees"] = nlohmann::json::array();
  for (const auto& t : b.forest.trees) forest["trees"].push_back(detail::tree_to_json(t));
  return j;
}

/// Model file text. Keys are emitted in sorted order and doubles in their
/// shortest round-trip form, so equal bundles serialise to equal bytes.
inline std::string serialize_bundle(const ModelBundle& b) { return to_json(b).dump() + "\n"; }

inline ModelBundle parse_bundle(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedModel, e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kModelFormatName) {
      throw Error(ErrorCode::MalformedModel, "not a facecue model file");
    }
    ModelBundle b;
    b.format_version = j.at("format_version").get<int>();
    if (b.format_version != kModelFormatVersion) {
      throw Error(ErrorCode::FormatVersionMismatch,
                  "model format_version " + std::to_string(b.format_version) +
                      ", this build reads " + std::to_string(kModelFormatVersion));
    }
    b.origin = OriginIndex(j.at("origin_index").get<std::size_t>());
    b.training_manifest = j.at("training_manifest").get<std::vector<std::string>>();

    const auto& pca = j.at("pca");
    b.pca.mean = pca.at("mean").get<std::vector<double>>();
    b.pca.explained_variance = pca.at("explained_variance").get<std::vector<double>>();
    const auto rows = pca.at("components").get<std::vector<std::vector<double>>>();
    const auto k = pca.at("k").get<std::size_t>();
    if (b.pca.mean.size() != kAngleCount || rows.size() != k ||
        b.pca.explained_variance.size() != k || k == 0) {
      throw Error(ErrorCode::MalformedModel, "PCA block has inconsistent dimensions");
    }
    b.pca.components = Matrix::from_rows(rows);
    if (b.pca.components.cols() != kAngleCount) {
      throw Error(ErrorCode::MalformedModel, "PCA components must have 67 entries");
    }

    const auto& forest = j.at("forest");
    b.forest.n_features = forest.at("n_features").get<std::size_t>();
    b.forest.config = forest_config_from_json(forest.at("config"));
    for (const auto& t : forest.at("trees")) {
      b.forest.trees.push_back(detail::tree_from_json(t, b.forest.n_features));
    }
    if (b.forest.n_features != b.pca.k()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "forest expects " + std::to_string(b.forest.n_features) +
                      " features but PCA produces " + std::to_string(b.pca.k()));
    }
    if (b.forest.trees.size() != b.forest.config.n_trees || b.forest.trees.empty()) {
      throw Error(ErrorCode::MalformedModel, "tree count differs from n_trees");
    }
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedModel, e.what());
  }
}

}  // namespace facecue
