#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "facecue/error.hpp"

namespace facecue {

inline constexpr std::size_t kLandmarkCount = 68;

/// Chin-centre point of the 68-landmark scheme (jawline midpoint).
inline constexpr std::size_t kChinIndex = 8;

/// Image-plane coordinate in pixels, origin at the top-left corner.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Sentence type. The enumerator order is the tie-breaking order (AS < ST).
enum class SentenceClass : int { AS = 0, ST = 1 };

inline constexpr std::size_t kClassCount = 2;
inline constexpr SentenceClass kClassOrder[kClassCount] = {SentenceClass::AS, SentenceClass::ST};

constexpr std::size_t class_index(SentenceClass c) { return static_cast<std::size_t>(c); }

constexpr std::string_view to_string(SentenceClass c) {
  return c == SentenceClass::AS ? "AS" : "ST";
}

inline std::optional<SentenceClass> parse_class(std::string_view text) {
  if (text == "AS") return SentenceClass::AS;
  if (text == "ST") return SentenceClass::ST;
  return std::nullopt;
}

struct LandmarkFrame {
  std::string frame_id;
  std::vector<Point2> points;
  std::optional<SentenceClass> label;

  friend bool operator==(const LandmarkFrame&, const LandmarkFrame&) = default;
};

/// Frames in file order. Whether labels are required depends on the consumer.
using Dataset = std::vector<LandmarkFrame>;

inline const LandmarkFrame& validate_frame(const LandmarkFrame& frame) {
  if (frame.points.size() != kLandmarkCount) {
    throw Error(ErrorCode::WrongPointCount,
                "frame '" + frame.frame_id + "' has " + std::to_string(frame.points.size()) +
                    " points, expected " + std::to_string(kLandmarkCount));
  }
  for (std::size_t i = 0; i < frame.points.size(); ++i) {
    const auto& p = frame.points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::NonFiniteCoordinate,
                  "frame '" + frame.frame_id + "' landmark " + std::to_string(i));
    }
  }
  return frame;
}

/// Validates every frame, checks frame_id uniqueness and, when asked, that
/// every frame carries a label.
inline void validate_dataset(const Dataset& data, bool require_labels) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(data.size());
  for (const auto& frame : data) {
    validate_frame(frame);
    if (!seen.insert(frame.frame_id).second) {
      throw Error(ErrorCode::DuplicateFrameId, "frame_id '" + frame.frame_id + "' repeats");
    }
    if (require_labels && !frame.label) {
      throw Error(ErrorCode::MissingLabel, "frame '" + frame.frame_id + "' has no label");
    }
  }
}

}  // namespace facecue
