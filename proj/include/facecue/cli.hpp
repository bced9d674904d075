#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "facecue/augmentation.hpp"
#include "facecue/csv.hpp"
#include "facecue/error.hpp"
#include "facecue/features.hpp"
#include "facecue/metrics.hpp"
#include "facecue/model_io.hpp"
#include "facecue/pipeline.hpp"
#include "facecue/synthetic.hpp"

namespace facecue::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kDataError = 2, kProtocolViolation = 3 };

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::IoError, "SHA-256 computation failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

inline std::string absolute_path(const std::filesystem::path& p) {
  return std::filesystem::absolute(p).lexically_normal().string();
}

inline InputDigest digest_file(const std::filesystem::path& p) {
  return {absolute_path(p), sha256_hex(csv::read_file(p))};
}

inline std::filesystem::path manifest_path(const std::filesystem::path& primary_output) {
  return primary_output.string() + ".manifest.json";
}

inline void write_manifest(const std::filesystem::path& primary_output, const RunManifest& m) {
  csv::write_file(manifest_path(primary_output), to_json(m).dump(2) + "\n");
}

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::size_t origin_index = kChinIndex;
  std::size_t k = 4;
  std::size_t n_trees = 100;
  std::optional<std::size_t> max_depth;
  double train_fraction = 0.7;
  bool strict_degenerate = false;
};

struct AugmentOptions {
  std::size_t copies = 29;
  double rotation_range = 0.26;
  double shift_range = 0.1;
  double scale_range = 0.1;
};

struct Paths {
  std::string input, output, train_out, test_out, model, report, json, manifest;
};

struct TrainOptions {
  bool no_augment = false;
  std::size_t min_samples_split = 2;
  std::optional<std::size_t> max_features;
  unsigned threads = 1;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv) {
    CLI::App app{"Facial-landmark sentence-type classifier (AS vs ST)", "facecue"};
    app.fallthrough();
    app.require_subcommand(1);

    app.add_option("--seed", g_.seed, "Seed for split, augmentation and forest");
    app.add_option("--origin-index", g_.origin_index, "Landmark used as angle origin")
        ->check(CLI::Range(0, 67));
    app.add_option("--k", g_.k, "Number of principal components");
    app.add_option("--n-trees", g_.n_trees, "Trees in the forest");
    app.add_option("--max-depth", g_.max_depth, "Tree depth limit (default unlimited)");
    app.add_option("--train-fraction", g_.train_fraction, "Training share for split");
    app.add_flag("--strict-degenerate", g_.strict_degenerate,
                 "Fail when a landmark coincides with the origin");

    auto* split = app.add_subcommand("split", "Stratified train/test split of a landmark CSV");
    split->add_option("-i,--input", p_.input, "Labelled landmark CSV")->required();
    split->add_option("--train-out", p_.train_out, "Training landmark CSV")->required();
    split->add_option("--test-out", p_.test_out, "Test landmark CSV")->required();

    auto* extract = app.add_subcommand("extract-features", "Landmark CSV to angle CSV");
    extract->add_option("-i,--input", p_.input)->required();
    extract->add_option("-o,--output", p_.output)->required();

    auto* augment = app.add_subcommand("augment", "Write augmented copies of a landmark CSV");
    augment->add_option("-i,--input", p_.input)->required();
    augment->add_option("-o,--output", p_.output)->required();
    add_augment_options(augment);

    auto* train = app.add_subcommand("train", "Fit PCA and forest, write a model file");
    train->add_option("-i,--input", p_.input, "Labelled training landmark CSV");
    train->add_option("-o,--output", p_.output, "Model file");
    train->add_option("--manifest", p_.manifest, "Repeat the run recorded in this manifest");
    add_augment_options(train);
    train->add_flag("--no-augment", t_.no_augment, "Train on the input frames only");
    train->add_option("--min-samples-split", t_.min_samples_split);
    train->add_option("--max-features", t_.max_features, "Features tried per split");
    train->add_option("--threads", t_.threads, "Worker threads (does not affect output)");

    auto* predict = app.add_subcommand("predict", "Classify frames of a landmark CSV");
    predict->add_option("-m,--model", p_.model)->required();
    predict->add_option("-i,--input", p_.input)->required();
    predict->add_option("-o,--output", p_.output, "Predictions CSV")->required();

    auto* evaluate = app.add_subcommand("evaluate", "Score a model on a labelled test CSV");
    evaluate->add_option("-m,--model", p_.model)->required();
    evaluate->add_option("-i,--input", p_.input)->required();
    evaluate->add_option("--report", p_.report, "Text report (default <input>.report.txt)");
    evaluate->add_option("--json", p_.json, "JSON report (default <input>.report.json)");

    std::size_t synth_count = 175;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic labelled landmark CSV");
    synth->add_option("-o,--output", p_.output)->required();
    synth->add_option("--count", synth_count, "Number of frames");

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out_, err_);
      return code == 0 ? kSuccess : kUsageError;
    }

    try {
      if (*split) return cmd_split();
      if (*extract) return cmd_extract();
      if (*augment) return cmd_augment();
      if (*train) return cmd_train();
      if (*predict) return cmd_predict();
      if (*evaluate) return cmd_evaluate();
      if (*synth) return cmd_synth(synth_count);
    } catch (const Error& e) {
      err_ << "error: " << e.what() << "\n";
      if (is_protocol_violation(e.code())) return kProtocolViolation;
      if (e.code() == ErrorCode::InvalidConfig) return kUsageError;
      return kDataError;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << "\n";
      return kDataError;
    }
    return kUsageError;
  }

 private:
  void add_augment_options(CLI::App* sub) {
    sub->add_option("--copies", a_.copies, "Augmented copies per frame");
    sub->add_option("--rotation-range", a_.rotation_range, "Max |rotation| in radians");
    sub->add_option("--shift-range", a_.shift_range, "Max shift, fraction of eye distance");
    sub->add_option("--scale-range", a_.scale_range, "Scale drawn from [1-r, 1+r]");
  }

  DegeneratePolicy policy() const {
    return g_.strict_degenerate ? DegeneratePolicy::Strict : DegeneratePolicy::Substitute;
  }

  WarningSink warn() {
    return [this](std::string_view msg) { err_ << "warning: " << msg << "\n"; };
  }

  AugmentationConfig augmentation_config() const {
    AugmentationConfig c;
    c.rotation_range = a_.rotation_range;
    c.shift_range = a_.shift_range;
    c.scale_range = a_.scale_range;
    c.copies_per_frame = a_.copies;
    c.seed = g_.seed;
    return c;
  }

  RunManifest base_manifest(std::string command) const {
    RunManifest m;
    m.command = std::move(command);
    m.seed = g_.seed;
    m.train_fraction = g_.train_fraction;
    m.augmentation = augmentation_config();
    m.k = g_.k;
    m.origin_index = g_.origin_index;
    m.strict_degenerate = g_.strict_degenerate;
    m.forest.n_trees = g_.n_trees;
    m.forest.max_depth = g_.max_depth;
    m.forest.seed = g_.seed;
    return m;
  }

  int cmd_split() {
    auto m = base_manifest("split");
    m.inputs.push_back(digest_file(p_.input));
    const auto result = split_dataset(read_landmark_csv(p_.input), g_.train_fraction, g_.seed);
    write_landmark_csv(p_.train_out, result.train);
    write_landmark_csv(p_.test_out, result.test);
    m.outputs = {absolute_path(p_.train_out), absolute_path(p_.test_out)};
    write_manifest(p_.train_out, m);
    out_ << "split: " << result.train.size() << " train, " << result.test.size() << " test\n";
    return kSuccess;
  }

  int cmd_extract() {
    auto m = base_manifest("extract-features");
    m.inputs.push_back(digest_file(p_.input));
    const auto data = read_landmark_csv(p_.input);
    validate_dataset(data, false);
    const OriginIndex origin(g_.origin_index);
    std::vector<AngleVector> rows;
    std::vector<std::optional<SentenceClass>> labels;
    for (const auto& f : data) {
      rows.push_back(frame_angles(f, origin, policy(), warn()));
      labels.push_back(f.label);
    }
    write_angle_csv(p_.output, make_feature_matrix(rows, labels));
    m.outputs = {absolute_path(p_.output)};
    write_manifest(p_.output, m);
    out_ << "extract-features: " << rows.size() << " rows\n";
    return kSuccess;
  }

  int cmd_augment() {
    auto m = base_manifest("augment");
    m.inputs.push_back(digest_file(p_.input));
    const auto data = read_landmark_csv(p_.input);
    validate_dataset(data, false);
    const auto augmented = augment_dataset(data, augmentation_config());
    write_landmark_csv(p_.output, augmented);
    m.outputs = {absolute_path(p_.output)};
    write_manifest(p_.output, m);
    out_ << "augment: " << data.size() << " -> " << augmented.size() << " frames\n";
    return kSuccess;
  }

  int cmd_train() {
    RunManifest m;
    if (!p_.manifest.empty()) {
      m = manifest_from_json(parse_json_file(p_.manifest));
      if (m.command != "train" || m.inputs.size() != 1) {
        throw Error(ErrorCode::InvalidConfig, p_.manifest + " is not a train manifest");
      }
      const auto now = digest_file(m.inputs.front().path);
      if (now.sha256 != m.inputs.front().sha256) {
        throw Error(ErrorCode::DigestMismatch, m.inputs.front().path + " changed since the run");
      }
      if (p_.output.empty()) {
        if (m.outputs.empty()) throw Error(ErrorCode::InvalidConfig, "no output path");
        p_.output = m.outputs.front();
      }
    } else {
      if (p_.input.empty() || p_.output.empty()) {
        throw Error(ErrorCode::InvalidConfig, "train needs --input and --output (or --manifest)");
      }
      m = base_manifest("train");
      m.augment = !t_.no_augment;
      m.forest.min_samples_split = t_.min_samples_split;
      m.forest.max_features = t_.max_features;
      m.inputs.push_back(digest_file(p_.input));
    }

    auto config = train_config_from(m);
    config.threads = t_.threads;
    const auto train = read_landmark_csv(m.inputs.front().path);
    const auto bundle = train_bundle(train, config, warn());
    csv::write_file(p_.output, serialize_bundle(bundle));

    m.forest = bundle.forest.config;
    m.outputs = {absolute_path(p_.output)};
    write_manifest(p_.output, m);
    out_ << "train: " << train.size() << " frames";
    if (config.augment) out_ << " (" << train.size() * (1 + config.augmentation.copies_per_frame)
                             << " after augmentation)";
    out_ << ", k=" << bundle.pca.k() << ", " << bundle.forest.trees.size() << " trees\n";
    return kSuccess;
  }

  int cmd_predict() {
    auto m = base_manifest("predict");
    m.inputs = {digest_file(p_.model), digest_file(p_.input)};
    const auto bundle = parse_bundle(csv::read_file(p_.model));
    const auto predictions = predict_frames(bundle, read_landmark_csv(p_.input), policy(), warn());
    csv::write_file(p_.output, format_predictions_csv(predictions));
    m.outputs = {absolute_path(p_.output)};
    write_manifest(p_.output, m);
    out_ << "predict: " << predictions.size() << " rows\n";
    return kSuccess;
  }

  int cmd_evaluate() {
    if (p_.report.empty()) p_.report = p_.input + ".report.txt";
    if (p_.json.empty()) p_.json = p_.input + ".report.json";
    auto m = base_manifest("evaluate");
    m.inputs = {digest_file(p_.model), digest_file(p_.input)};
    const auto bundle = parse_bundle(csv::read_file(p_.model));
    const auto report = evaluate_bundle(bundle, read_landmark_csv(p_.input), policy());
    const auto text = format_report(report);
    csv::write_file(p_.report, text);
    csv::write_file(p_.json, to_json(report).dump(2) + "\n");
    m.outputs = {absolute_path(p_.report), absolute_path(p_.json)};
    write_manifest(p_.json, m);
    out_ << text;
    return kSuccess;
  }

  int cmd_synth(std::size_t count) {
    SyntheticConfig c;
    c.count = count;
    c.seed = g_.seed;
    write_landmark_csv(p_.output, synthetic_dataset(c));
    auto m = base_manifest("synth");
    m.outputs = {absolute_path(p_.output)};
    write_manifest(p_.output, m);
    out_ << "synth: " << count << " frames\n";
    return kSuccess;
  }

  static nlohmann::json parse_json_file(const std::string& path) {
    try {
      return nlohmann::json::parse(csv::read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedModel, path + ": " + e.what());
    }
  }

  std::ostream& out_;
  std::ostream& err_;
  GlobalOptions g_;
  AugmentOptions a_;
  Paths p_;
  TrainOptions t_;
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  return Runner(out, err).run(argc, argv);
}

/// Convenience for in-process callers; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  std::vector<const char*> argv{"facecue"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace facecue::cli
