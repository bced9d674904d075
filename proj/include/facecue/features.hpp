#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "facecue/error.hpp"
#include "facecue/landmarks.hpp"

namespace facecue {

inline constexpr std::size_t kAngleCount = kLandmarkCount - 1;

/// Landmark used as the coordinate origin for the angle features.
class OriginIndex {
 public:
  constexpr OriginIndex() = default;
  explicit OriginIndex(std::size_t index) : index_(index) {
    if (index >= kLandmarkCount) {
      throw Error(ErrorCode::InvalidConfig,
                  "origin index " + std::to_string(index) + " outside 0..67");
    }
  }

  constexpr std::size_t value() const { return index_; }

  friend bool operator==(const OriginIndex&, const OriginIndex&) = default;

 private:
  std::size_t index_ = kChinIndex;
};

/// What to do when a landmark coincides with the origin.
enum class DegeneratePolicy {
  Substitute,  ///< emit angle 0 and record the landmark index
  Strict,      ///< throw DegenerateLandmark
};

struct Displacement {
  double dx = 0.0;
  double dy = 0.0;
};

struct AngleVector {
  std::string source_frame_id;
  /// Radians in [0, pi], ascending landmark index with the origin skipped.
  std::vector<double> angles;
  /// Landmark indices whose displacement had zero norm (angle forced to 0).
  std::vector<std::size_t> degenerate;
};

/// Landmark index that feature column `feature` was computed from.
constexpr std::size_t landmark_for_feature(std::size_t feature, OriginIndex origin) {
  return feature < origin.value() ? feature : feature + 1;
}

/// (x0 - xi, y0 - yi) for every landmark i != origin, ascending i.
inline std::vector<Displacement> to_origin_frame(const LandmarkFrame& frame, OriginIndex origin) {
  validate_frame(frame);
  const Point2 o = frame.points[origin.value()];
  std::vector<Displacement> out;
  out.reserve(kAngleCount);
  for (std::size_t i = 0; i < kLandmarkCount; ++i) {
    if (i == origin.value()) continue;
    out.push_back({o.x - frame.points[i].x, o.y - frame.points[i].y});
  }
  return out;
}

/// theta_i = arccos((x0 - xi) / sqrt((x0 - xi)^2 + (y0 - yi)^2)).
///
/// The sign of the vertical displacement is discarded by arccos, so the
/// feature cannot tell a landmark above the origin from its mirror image
/// below it. This is intentional; do not replace it with atan2.
inline AngleVector angles_from_frame(const LandmarkFrame& frame, OriginIndex origin = {},
                                     DegeneratePolicy policy = DegeneratePolicy::Substitute) {
  const auto displacements = to_origin_frame(frame, origin);
  AngleVector out;
  out.source_frame_id = frame.frame_id;
  out.angles.reserve(displacements.size());
  for (std::size_t j = 0; j < displacements.size(); ++j) {
    const auto [dx, dy] = displacements[j];
    const double norm = std::sqrt(dx * dx + dy * dy);
    if (norm == 0.0) {
      const std::size_t landmark = landmark_for_feature(j, origin);
      if (policy == DegeneratePolicy::Strict) {
        throw Error(ErrorCode::DegenerateLandmark,
                    "frame '" + frame.frame_id + "' landmark " + std::to_string(landmark) +
                        " coincides with origin landmark " + std::to_string(origin.value()));
      }
      out.degenerate.push_back(landmark);
      out.angles.push_back(0.0);
      continue;
    }
    out.angles.push_back(std::acos(std::clamp(dx / norm, -1.0, 1.0)));
  }
  return out;
}

}  // namespace facecue
