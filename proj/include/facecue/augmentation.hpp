#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "facecue/error.hpp"
#include "facecue/landmarks.hpp"
#include "facecue/rng.hpp"

namespace facecue {

/// Separator between a source frame_id and the augmentation counter.
inline constexpr std::string_view kAugmentMarker = "~aug";

/// Translations are snapped to this grid (pixels) so that integer landmark
/// coordinates stay exactly representable and shift-only copies produce
/// bit-identical angle features.
inline constexpr double kShiftQuantum = 1.0 / 256.0;

struct AugmentationConfig {
  double rotation_range = 0.26;  ///< max |rotation|, radians
  double shift_range = 0.1;      ///< max |shift| per axis, fraction of inter-ocular distance
  double scale_range = 0.1;      ///< scale factor drawn from [1 - r, 1 + r]
  std::size_t copies_per_frame = 29;
  std::uint64_t seed = 0;

  friend bool operator==(const AugmentationConfig&, const AugmentationConfig&) = default;
};

inline void validate(const AugmentationConfig& config) {
  auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!ok(config.rotation_range) || !ok(config.shift_range) || !ok(config.scale_range)) {
    throw Error(ErrorCode::InvalidConfig, "augmentation ranges must be finite and non-negative");
  }
  if (config.scale_range >= 1.0) {
    throw Error(ErrorCode::InvalidConfig, "scale_range must be < 1");
  }
  if (config.copies_per_frame < 1) {
    throw Error(ErrorCode::InvalidConfig, "copies_per_frame must be >= 1");
  }
}

/// One concrete draw of the random affine perturbation.
struct AffineParams {
  double rotation = 0.0;  ///< radians, counter-clockwise in (x, y)
  double scale = 1.0;
  double shift_x = 0.0;
  double shift_y = 0.0;
};

inline Point2 centroid(const LandmarkFrame& frame) {
  double sx = 0.0, sy = 0.0;
  for (const auto& p : frame.points) {
    sx += p.x;
    sy += p.y;
  }
  const auto n = static_cast<double>(frame.points.size());
  return {sx / n, sy / n};
}

/// Distance between the two eye centres (means of landmarks 36-41 and 42-47).
inline double inter_ocular_distance(const LandmarkFrame& frame) {
  Point2 left, right;
  for (std::size_t i = 36; i < 42; ++i) {
    left.x += frame.points[i].x / 6.0;
    left.y += frame.points[i].y / 6.0;
    right.x += frame.points[i + 6].x / 6.0;
    right.y += frame.points[i + 6].y / 6.0;
  }
  return std::hypot(right.x - left.x, right.y - left.y);
}

inline AffineParams draw_affine(const LandmarkFrame& frame, const AugmentationConfig& config,
                                Rng& rng) {
  const double bound = config.shift_range * inter_ocular_distance(frame);
  auto snap = [](double v) { return std::round(v / kShiftQuantum) * kShiftQuantum; };
  AffineParams params;
  params.rotation = rng.uniform(-config.rotation_range, config.rotation_range);
  params.scale = rng.uniform(1.0 - config.scale_range, 1.0 + config.scale_range);
  params.shift_x = snap(rng.uniform(-bound, bound));
  params.shift_y = snap(rng.uniform(-bound, bound));
  return params;
}

/// Rotate and scale about the landmark centroid, then translate.
inline LandmarkFrame apply_affine(const LandmarkFrame& frame, const AffineParams& params) {
  LandmarkFrame out = frame;
  if (params.rotation != 0.0 || params.scale != 1.0) {
    const Point2 c = centroid(frame);
    const double cs = std::cos(params.rotation) * params.scale;
    const double sn = std::sin(params.rotation) * params.scale;
    for (auto& p : out.points) {
      const double dx = p.x - c.x;
      const double dy = p.y - c.y;
      p = {c.x + (cs * dx - sn * dy), c.y + (sn * dx + cs * dy)};
    }
  }
  for (auto& p : out.points) {
    p.x += params.shift_x;
    p.y += params.shift_y;
  }
  return out;
}

inline std::string augmented_id(std::string_view source_id, std::size_t counter) {
  return std::string(source_id) + std::string(kAugmentMarker) + std::to_string(counter);
}

inline bool is_augmented_id(std::string_view frame_id) {
  return frame_id.find(kAugmentMarker) != std::string_view::npos;
}

/// Source frame_id of a possibly augmented frame.
inline std::string_view source_id(std::string_view frame_id) {
  return frame_id.substr(0, frame_id.find(kAugmentMarker));
}

inline LandmarkFrame augment_frame(const LandmarkFrame& frame, const AugmentationConfig& config,
                                   Rng& rng, std::size_t counter = 1) {
  validate_frame(frame);
  LandmarkFrame out = apply_affine(frame, draw_affine(frame, config, rng));
  out.frame_id = augmented_id(frame.frame_id, counter);
  return out;
}

/// Each source frame followed by its copies. Frame i draws from its own
/// stream derived from (seed, i), so the result does not depend on the order
/// in which frames are processed.
inline Dataset augment_dataset(const Dataset& data, const AugmentationConfig& config) {
  validate(config);
  if (data.empty()) throw Error(ErrorCode::EmptyDataset, "nothing to augment");
  Dataset out;
  out.reserve(data.size() * (1 + config.copies_per_frame));
  for (std::size_t i = 0; i < data.size(); ++i) {
    Rng rng = Rng::stream(config.seed, StreamTag::Augmentation, i);
    out.push_back(validate_frame(data[i]));
    for (std::size_t c = 1; c <= config.copies_per_frame; ++c) {
      out.push_back(augment_frame(data[i], config, rng, c));
    }
  }
  return out;
}

}  // namespace facecue
