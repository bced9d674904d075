#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "facecue/landmarks.hpp"
#include "facecue/matrix.hpp"
#include "facecue/rng.hpp"

namespace facecue::fixtures {

/// 68 landmarks with integer pixel coordinates in [0, 640) x [0, 480).
inline LandmarkFrame random_pixel_frame(Rng& rng, std::string id = "f") {
  LandmarkFrame f;
  f.frame_id = std::move(id);
  for (std::size_t i = 0; i < kLandmarkCount; ++i) {
    f.points.push_back({static_cast<double>(rng.below(640)), static_cast<double>(rng.below(480))});
  }
  return f;
}

/// 68 landmarks with arbitrary real coordinates.
inline LandmarkFrame random_real_frame(Rng& rng, std::string id = "f") {
  LandmarkFrame f;
  f.frame_id = std::move(id);
  for (std::size_t i = 0; i < kLandmarkCount; ++i) {
    f.points.push_back({rng.uniform(-300.0, 900.0), rng.uniform(-300.0, 900.0)});
  }
  return f;
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.uniform(lo, hi);
  return m;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("facecue_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace facecue::fixtures
