#pragma once

#include <array>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "facecue/augmentation.hpp"
#include "facecue/error.hpp"
#include "facecue/features.hpp"
#include "facecue/forest.hpp"
#include "facecue/landmarks.hpp"
#include "facecue/pca.hpp"

namespace facecue {

/// Exact ratio of two counts. Rates are kept as integers so identities such
/// as TPR + FNR = 1 can be checked without rounding.
struct Rate {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rate&, const Rate&) = default;
};

/// Unset when the denominator is zero; such a rate is undefined, not 0.
inline std::optional<Rate> make_rate(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return Rate{num, den};
}

/// counts[true][predicted], both indexed in class order (AS, ST).
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, kClassCount>, kClassCount> counts{};

  void add(SentenceClass truth, SentenceClass predicted) {
    ++counts[class_index(truth)][class_index(predicted)];
  }

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& row : counts)
      for (auto c : row) t += c;
    return t;
  }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// One-vs-rest rates with `positive` as the positive class.
struct ClassRates {
  std::optional<Rate> tpr, fpr, tnr, fnr;
};

struct EvalReport {
  ConfusionMatrix confusion;
  std::array<ClassRates, kClassCount> per_class;
  Rate accuracy;
};

inline ClassRates class_rates(const ConfusionMatrix& m, SentenceClass positive) {
  const std::size_t p = class_index(positive);
  const std::size_t q = 1 - p;
  const std::uint64_t tp = m.counts[p][p];
  const std::uint64_t fn = m.counts[p][q];
  const std::uint64_t fp = m.counts[q][p];
  const std::uint64_t tn = m.counts[q][q];
  return {make_rate(tp, tp + fn), make_rate(fp, fp + tn), make_rate(tn, fp + tn),
          make_rate(fn, tp + fn)};
}

inline EvalReport make_report(const ConfusionMatrix& confusion) {
  const auto total = confusion.total();
  if (total == 0) throw Error(ErrorCode::EmptyTestSet, "no evaluated frames");
  EvalReport report;
  report.confusion = confusion;
  for (auto c : kClassOrder) report.per_class[class_index(c)] = class_rates(confusion, c);
  report.accuracy = Rate{confusion.counts[0][0] + confusion.counts[1][1], total};
  return report;
}

inline EvalReport make_report(std::span<const SentenceClass> truth,
                              std::span<const SentenceClass> predicted) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::DimensionMismatch, "truth and prediction lengths differ");
  }
  ConfusionMatrix m;
  for (std::size_t i = 0; i < truth.size(); ++i) m.add(truth[i], predicted[i]);
  return make_report(m);
}

/// Fixed-point rendering independent of the global locale.
inline std::string format_fixed(double value, int decimals) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
  return std::string(buf, end);
}

/// Table of per-class rates at three decimals plus the confusion counts.
inline std::string format_report(const EvalReport& report) {
  auto cell = [](const std::optional<Rate>& r) {
    std::string s = r ? format_fixed(r->value(), 3) : "undef";
    return std::string(8 - std::min<std::size_t>(8, s.size()), ' ') + s;
  };
  std::string out = "Class      TPR     FPR     TNR     FNR\n";
  for (auto c : kClassOrder) {
    const auto& r = report.per_class[class_index(c)];
    out += std::string(to_string(c)) + "   " + cell(r.tpr) + cell(r.fpr) + cell(r.tnr) +
           cell(r.fnr) + "\n";
  }
  const auto& m = report.confusion.counts;
  out += "\nConfusion (rows: true, cols: predicted)\n";
  out += "        AS      ST\n";
  for (auto c : kClassOrder) {
    const auto& row = m[class_index(c)];
    out += std::string(to_string(c)) + "  " + std::string(6 - std::to_string(row[0]).size(), ' ') +
           std::to_string(row[0]) + "  " + std::string(6 - std::to_string(row[1]).size(), ' ') +
           std::to_string(row[1]) + "\n";
  }
  out += "\nAccuracy: " + format_fixed(report.accuracy.value(), 3) + " (" +
         std::to_string(report.accuracy.num) + "/" + std::to_string(report.accuracy.den) + ")\n";
  return out;
}

inline nlohmann::json rate_json(const std::optional<Rate>& r) {
  if (!r) return {{"value", nullptr}, {"numerator", nullptr}, {"denominator", 0}};
  return {{"value", r->value()}, {"numerator", r->num}, {"denominator", r->den}};
}

inline nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json j;
  j["class_order"] = {"AS", "ST"};
  j["confusion"] = report.confusion.counts;
  j["accuracy"] = rate_json(report.accuracy);
  for (auto c : kClassOrder) {
    const auto& r = report.per_class[class_index(c)];
    j["per_class"][std::string(to_string(c))] = {{"tpr", rate_json(r.tpr)},
                                                 {"fpr", rate_json(r.fpr)},
                                                 {"tnr", rate_json(r.tnr)},
                                                 {"fnr", rate_json(r.fnr)}};
  }
  return j;
}

/// angles -> PCA projection -> forest vote, for one frame.
inline SentenceClass classify(const ForestModel& forest, const PcaModel& pca,
                              const LandmarkFrame& frame, OriginIndex origin,
                              DegeneratePolicy policy = DegeneratePolicy::Substitute) {
  const auto angles = angles_from_frame(frame, origin, policy);
  return predict(forest, transform(pca, angles.angles));
}

/// Scores a labelled held-out set. Augmented frames are refused: test data
/// must be original frames only.
inline EvalReport evaluate(const ForestModel& forest, const PcaModel& pca, const Dataset& test,
                           OriginIndex origin,
                           DegeneratePolicy policy = DegeneratePolicy::Substitute) {
  if (test.empty()) throw Error(ErrorCode::EmptyTestSet, "test set is empty");
  validate_dataset(test, true);
  ConfusionMatrix m;
  for (const auto& frame : test) {
    if (is_augmented_id(frame.frame_id)) {
      throw Error(ErrorCode::AugmentedTestData,
                  "frame '" + frame.frame_id + "' is an augmented copy");
    }
    m.add(*frame.label, classify(forest, pca, frame, origin, policy));
  }
  return make_report(m);
}

}  // namespace facecue
