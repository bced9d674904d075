#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "facecue/landmarks.hpp"
#include "facecue/rng.hpp"

namespace facecue {

/// Generator for labelled landmark frames with a known class signal: AS
/// frames have their eyebrows (landmarks 17-26) raised relative to ST frames.
/// Every frame also gets an individual face shape, head pose and per-landmark
/// jitter, and coordinates are rounded to whole pixels like a detector's.
struct SyntheticConfig {
  std::size_t count = 175;
  double brow_raise = 24.0;      ///< template pixels, AS only
  double brow_jitter = 1.5;      ///< sd of a per-frame shift of the whole brow
  double landmark_jitter = 0.5;  ///< sd per coordinate
  double max_roll = 0.1;         ///< radians
  double width_spread = 0.03;    ///< face width factor drawn from 1 +- spread
  bool round_to_pixels = true;
  std::uint64_t seed = 0;
};

namespace detail {

/// Neutral 68-point face in a 200 x 200 box, chin (landmark 8) at (100, 170).
inline std::vector<Point2> template_face() {
  std::vector<Point2> p(kLandmarkCount);
  const double pi = std::numbers::pi;
  for (std::size_t i = 0; i <= 16; ++i) {  // jaw
    const double phi = pi * static_cast<double>(i) / 16.0;
    p[i] = {100.0 - 70.0 * std::cos(phi), 80.0 + 90.0 * std::sin(phi)};
  }
  for (std::size_t i = 0; i < 5; ++i) {  // brows
    const double t = static_cast<double>(i) / 4.0;
    const double arch = 8.0 * std::sin(pi * t);
    p[17 + i] = {45.0 + 45.0 * t, 62.0 - arch};
    p[22 + i] = {110.0 + 45.0 * t, 62.0 - arch};
  }
  for (std::size_t i = 0; i < 4; ++i) p[27 + i] = {100.0, 75.0 + 13.0 * static_cast<double>(i)};
  for (std::size_t i = 0; i < 5; ++i) {  // nostrils
    const double t = static_cast<double>(i) / 4.0;
    p[31 + i] = {85.0 + 30.0 * t, 120.0 + 3.0 * std::sin(pi * t)};
  }
  auto ellipse = [&](std::size_t first, std::size_t n, double cx, double cy, double rx, double ry) {
    for (std::size_t i = 0; i < n; ++i) {
      const double phi = pi - 2.0 * pi * static_cast<double>(i) / static_cast<double>(n);
      p[first + i] = {cx + rx * std::cos(phi), cy - ry * std::sin(phi)};
    }
  };
  ellipse(36, 6, 70.0, 80.0, 12.0, 5.0);
  ellipse(42, 6, 130.0, 80.0, 12.0, 5.0);
  ellipse(48, 12, 100.0, 145.0, 25.0, 10.0);
  ellipse(60, 8, 100.0, 145.0, 15.0, 4.0);
  return p;
}

}  // namespace detail

/// Frame i is AS when i is even and ST otherwise.
inline LandmarkFrame synthetic_frame(const SyntheticConfig& config, std::size_t i) {
  Rng rng = Rng::stream(config.seed, StreamTag::Synthetic, i);
  const SentenceClass label = i % 2 == 0 ? SentenceClass::AS : SentenceClass::ST;

  auto pts = detail::template_face();
  // Individual face shape.
  const double width = rng.uniform(1.0 - config.width_spread, 1.0 + config.width_spread);
  const double eye_height = rng.normal(0.0, 1.5);
  for (auto& q : pts) q.x = 100.0 + (q.x - 100.0) * width;
  for (std::size_t k = 36; k < 48; ++k) pts[k].y += eye_height;

  const double raise = (label == SentenceClass::AS ? config.brow_raise : 0.0) +
                       rng.normal(0.0, config.brow_jitter);
  for (std::size_t k = 17; k <= 26; ++k) pts[k].y -= raise;
  for (auto& q : pts) {
    q.x += rng.normal(0.0, config.landmark_jitter);
    q.y += rng.normal(0.0, config.landmark_jitter);
  }

  // Head pose: roll about the face centre, size, position in a 640 x 480 image.
  const double roll = rng.uniform(-config.max_roll, config.max_roll);
  const double size = rng.uniform(0.9, 1.6);
  const double tx = rng.uniform(150.0, 490.0);
  const double ty = rng.uniform(120.0, 360.0);
  const double c = std::cos(roll) * size;
  const double s = std::sin(roll) * size;

  LandmarkFrame frame;
  char id[32];
  std::snprintf(id, sizeof id, "synth_%04zu", i);
  frame.frame_id = id;
  frame.label = label;
  frame.points.reserve(kLandmarkCount);
  for (const auto& q : pts) {
    const double dx = q.x - 100.0;
    const double dy = q.y - 110.0;
    Point2 out{tx + c * dx - s * dy, ty + s * dx + c * dy};
    if (config.round_to_pixels) out = {std::round(out.x), std::round(out.y)};
    frame.points.push_back(out);
  }
  return frame;
}

inline Dataset synthetic_dataset(const SyntheticConfig& config) {
  Dataset data;
  data.reserve(config.count);
  for (std::size_t i = 0; i < config.count; ++i) data.push_back(synthetic_frame(config, i));
  return data;
}

}  // namespace facecue
