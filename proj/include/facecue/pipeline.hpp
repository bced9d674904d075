#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "facecue/augmentation.hpp"
#include "facecue/csv.hpp"
#include "facecue/error.hpp"
#include "facecue/features.hpp"
#include "facecue/forest.hpp"
#include "facecue/landmarks.hpp"
#include "facecue/metrics.hpp"
#include "facecue/model_io.hpp"
#include "facecue/pca.hpp"
#include "facecue/rng.hpp"

namespace facecue {

using WarningSink = std::function<void(std::string_view)>;

/// Angle features for one frame, reporting substituted (degenerate) landmarks.
inline AngleVector frame_angles(const LandmarkFrame& frame, OriginIndex origin,
                                DegeneratePolicy policy, const WarningSink& warn) {
  auto v = angles_from_frame(frame, origin, policy);
  if (warn) {
    for (auto i : v.degenerate) {
      warn("frame '" + frame.frame_id + "': landmark " + std::to_string(i) +
           " coincides with the origin; angle set to 0");
    }
  }
  return v;
}

inline Matrix angle_matrix(const Dataset& data, OriginIndex origin, DegeneratePolicy policy,
                           const WarningSink& warn) {
  Matrix m(0, kAngleCount);
  for (const auto& frame : data) m.append_row(frame_angles(frame, origin, policy, warn).angles);
  return m;
}

// ---------------------------------------------------------------------------
// split

struct SplitResult {
  Dataset train;
  Dataset test;
};

/// Number of training frames for `n` frames at `fraction`: floor(n * fraction).
inline std::size_t train_size(std::size_t n, double fraction) {
  // The epsilon keeps products such as 10 * 0.7 = 7.000000000000001 and
  // 100 * 0.29 = 28.999999999999996 on the intended integer.
  return std::min(n, static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 1e-9)));
}

/// Stratified random split. The training size is floor(n * fraction); it is
/// shared among classes by largest remainder (earlier class wins ties), and
/// within each class the chosen frames come from a seeded shuffle. Both halves
/// keep input order.
inline SplitResult split_dataset(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "train fraction must be in (0, 1]");
  }
  validate_dataset(data, true);

  std::array<std::vector<std::size_t>, kClassCount> members;
  for (std::size_t i = 0; i < data.size(); ++i) members[class_index(*data[i].label)].push_back(i);
  for (auto c : kClassOrder) {
    if (members[class_index(c)].empty()) {
      throw Error(ErrorCode::ClassAbsent, "no " + std::string(to_string(c)) + " frames");
    }
  }

  const std::uint64_t n = data.size();
  const std::uint64_t total = train_size(data.size(), train_fraction);
  std::array<std::uint64_t, kClassCount> quota{}, remainder{};
  std::uint64_t assigned = 0;
  for (std::size_t c = 0; c < kClassCount; ++c) {
    quota[c] = members[c].size() * total / n;
    remainder[c] = members[c].size() * total % n;
    assigned += quota[c];
  }
  while (assigned < total) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < kClassCount; ++c) {
      if (remainder[c] > remainder[best]) best = c;
    }
    ++quota[best];
    remainder[best] = 0;
    ++assigned;
  }

  std::vector<bool> in_train(data.size(), false);
  for (std::size_t c = 0; c < kClassCount; ++c) {
    auto idx = members[c];
    Rng rng = Rng::stream(seed, StreamTag::Split, c);
    for (std::size_t i = idx.size(); i > 1; --i) {
      std::swap(idx[i - 1], idx[static_cast<std::size_t>(rng.below(i))]);
    }
    for (std::size_t i = 0; i < quota[c]; ++i) in_train[idx[i]] = true;
  }

  SplitResult out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (in_train[i] ? out.train : out.test).push_back(data[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// train

struct TrainConfig {
  AugmentationConfig augmentation;
  bool augment = true;
  std::size_t k = 4;
  ForestConfig forest;
  OriginIndex origin;
  DegeneratePolicy degenerate = DegeneratePolicy::Substitute;
  unsigned threads = 1;
};

/// Sorted, de-duplicated source frame_ids (augmentation suffix removed).
inline std::vector<std::string> source_ids(const Dataset& data) {
  std::set<std::string, std::less<>> ids;
  for (const auto& f : data) ids.emplace(source_id(f.frame_id));
  return {ids.begin(), ids.end()};
}

/// augment (training data only) -> angles -> PCA fit -> projection -> forest.
inline ModelBundle train_bundle(const Dataset& train, const TrainConfig& config,
                                const WarningSink& warn = {}) {
  if (train.empty()) throw Error(ErrorCode::EmptyTrainingSet, "training set is empty");
  validate_dataset(train, true);

  const Dataset augmented = config.augment ? augment_dataset(train, config.augmentation) : train;
  const Matrix angles = angle_matrix(augmented, config.origin, config.degenerate, warn);

  ModelBundle bundle;
  bundle.origin = config.origin;
  bundle.training_manifest = source_ids(train);
  bundle.pca = fit_pca(angles, config.k);

  std::vector<SentenceClass> labels;
  labels.reserve(augmented.size());
  for (const auto& f : augmented) labels.push_back(*f.label);
  bundle.forest = train_forest(transform_rows(bundle.pca, angles), labels, config.forest,
                               config.threads);
  return bundle;
}

// ---------------------------------------------------------------------------
// predict

struct Prediction {
  std::string frame_id;
  SentenceClass predicted = SentenceClass::AS;
  std::array<double, kClassCount> proba{};
};

inline std::vector<Prediction> predict_frames(const ModelBundle& bundle, const Dataset& frames,
                                              DegeneratePolicy policy = DegeneratePolicy::Substitute,
                                              const WarningSink& warn = {}) {
  validate_dataset(frames, false);
  std::vector<Prediction> out;
  out.reserve(frames.size());
  for (const auto& frame : frames) {
    const auto angles = frame_angles(frame, bundle.origin, policy, warn);
    const auto z = transform(bundle.pca, angles.angles);
    const auto votes = tree_votes(bundle.forest, z);
    const double n = static_cast<double>(bundle.forest.trees.size());
    out.push_back({frame.frame_id, majority(votes), {votes[0] / n, votes[1] / n}});
  }
  return out;
}

inline std::string format_predictions_csv(const std::vector<Prediction>& predictions) {
  std::string out = "frame_id,predicted,p_as,p_st\n";
  for (const auto& p : predictions) {
    out += p.frame_id + "," + std::string(to_string(p.predicted)) + "," +
           csv::format_exact(p.proba[0]) + "," + csv::format_exact(p.proba[1]) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// evaluate

/// Refuses any test frame whose source id was used for training.
inline void check_disjoint(const ModelBundle& bundle, const Dataset& test) {
  std::set<std::string_view, std::less<>> train(bundle.training_manifest.begin(),
                                                bundle.training_manifest.end());
  std::vector<std::string> overlap;
  for (const auto& f : test) {
    if (train.contains(source_id(f.frame_id))) overlap.push_back(f.frame_id);
  }
  if (!overlap.empty()) {
    std::string ids;
    for (std::size_t i = 0; i < overlap.size() && i < 10; ++i) ids += (i ? ", " : "") + overlap[i];
    if (overlap.size() > 10) ids += ", ...";
    throw Error(ErrorCode::TrainTestOverlap, std::to_string(overlap.size()) +
                                                 " test frame(s) were used in training: " + ids);
  }
}

inline EvalReport evaluate_bundle(const ModelBundle& bundle, const Dataset& test,
                                  DegeneratePolicy policy = DegeneratePolicy::Substitute) {
  if (test.empty()) throw Error(ErrorCode::EmptyTestSet, "test set is empty");
  check_disjoint(bundle, test);
  return evaluate(bundle.forest, bundle.pca, test, bundle.origin, policy);
}

// ---------------------------------------------------------------------------
// run manifest

struct InputDigest {
  std::string path;
  std::string sha256;

  friend bool operator==(const InputDigest&, const InputDigest&) = default;
};

/// Everything needed to repeat a run.
struct RunManifest {
  std::string command;
  std::uint64_t seed = 0;
  double train_fraction = 0.7;
  bool stratified_split = true;
  AugmentationConfig augmentation;
  bool augment = true;
  ForestConfig forest;
  std::size_t k = 4;
  std::size_t origin_index = kChinIndex;
  bool strict_degenerate = false;
  std::vector<InputDigest> inputs;
  std::vector<std::string> outputs;

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

inline nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["seed"] = m.seed;
  j["split"] = {{"train_fraction", m.train_fraction}, {"stratified", m.stratified_split}};
  j["augmentation"] = {{"enabled", m.augment},
                       {"rotation_range", m.augmentation.rotation_range},
                       {"shift_range", m.augmentation.shift_range},
                       {"scale_range", m.augmentation.scale_range},
                       {"copies_per_frame", m.augmentation.copies_per_frame},
                       {"seed", m.augmentation.seed}};
  j["forest"] = to_json(m.forest);
  j["k"] = m.k;
  j["origin_index"] = m.origin_index;
  j["strict_degenerate"] = m.strict_degenerate;
  j["inputs"] = nlohmann::json::array();
  for (const auto& in : m.inputs) j["inputs"].push_back({{"path", in.path}, {"sha256", in.sha256}});
  j["outputs"] = m.outputs;
  return j;
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.train_fraction = j.at("split").at("train_fraction").get<double>();
    m.stratified_split = j.at("split").at("stratified").get<bool>();
    const auto& a = j.at("augmentation");
    m.augment = a.at("enabled").get<bool>();
    m.augmentation.rotation_range = a.at("rotation_range").get<double>();
    m.augmentation.shift_range = a.at("shift_range").get<double>();
    m.augmentation.scale_range = a.at("scale_range").get<double>();
    m.augmentation.copies_per_frame = a.at("copies_per_frame").get<std::size_t>();
    m.augmentation.seed = a.at("seed").get<std::uint64_t>();
    m.forest = forest_config_from_json(j.at("forest"));
    m.k = j.at("k").get<std::size_t>();
    m.origin_index = j.at("origin_index").get<std::size_t>();
    m.strict_degenerate = j.at("strict_degenerate").get<bool>();
    for (const auto& in : j.at("inputs")) {
      m.inputs.push_back({in.at("path").get<std::string>(), in.at("sha256").get<std::string>()});
    }
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedModel, std::string("run manifest: ") + e.what());
  }
}

inline TrainConfig train_config_from(const RunManifest& m) {
  TrainConfig c;
  c.augmentation = m.augmentation;
  c.augment = m.augment;
  c.k = m.k;
  c.forest = m.forest;
  c.origin = OriginIndex(m.origin_index);
  c.degenerate = m.strict_degenerate ? DegeneratePolicy::Strict : DegeneratePolicy::Substitute;
  return c;
}

}  // namespace facecue
