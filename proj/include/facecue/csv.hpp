#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "facecue/error.hpp"
#include "facecue/features.hpp"
#include "facecue/landmarks.hpp"
#include "facecue/matrix.hpp"

namespace facecue {

/// A rejected data row: 1-based line number in the file and the reason.
struct RowIssue {
  std::size_t line = 0;
  std::string message;
};

/// Thrown when one or more rows fail to parse. Every bad row is listed.
class CsvError : public Error {
 public:
  CsvError(const std::string& source, std::vector<RowIssue> issues)
      : Error(ErrorCode::RowParseError, describe(source, issues)), issues_(std::move(issues)) {}

  const std::vector<RowIssue>& issues() const { return issues_; }

 private:
  static std::string describe(const std::string& source, const std::vector<RowIssue>& issues) {
    std::string s = source + ": " + std::to_string(issues.size()) + " bad row(s)";
    for (const auto& i : issues) s += "\n  line " + std::to_string(i.line) + ": " + i.message;
    return s;
  }
  std::vector<RowIssue> issues_;
};

/// Angle rows as read back from disk. Labels are optional (prediction input).
struct FeatureMatrix {
  std::vector<std::string> frame_ids;
  Matrix values;  ///< n x 67
  std::vector<std::optional<SentenceClass>> labels;

  std::size_t size() const { return frame_ids.size(); }
};

namespace csv {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

/// Lines of `text` without terminators; a final empty line after the last
/// newline is not a row.
inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

inline std::optional<double> parse_real(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return v;
}

/// Shortest representation that parses back to the same double.
inline std::string format_exact(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::string format_significant(double v, int digits) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, end);
}

inline std::string read_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::MissingFile, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

inline void check_writable_id(std::string_view id) {
  if (id.empty() || id.find_first_of(",\"\r\n") != std::string_view::npos) {
    throw Error(ErrorCode::IoError, "frame_id '" + std::string(id) + "' cannot be written to CSV");
  }
}

inline std::string label_field(const std::optional<SentenceClass>& label) {
  return label ? std::string(to_string(*label)) : std::string();
}

/// Parses the frame_id and label fields shared by both schemas. Returns the
/// problem description on failure.
inline std::optional<std::string> parse_identity(std::string_view id, std::string_view label,
                                                 std::optional<SentenceClass>& out_label) {
  if (id.empty()) return "empty frame_id";
  if (id.find('"') != std::string_view::npos) return "quoted fields are not supported";
  if (label.empty()) {
    out_label.reset();
    return std::nullopt;
  }
  out_label = parse_class(label);
  if (!out_label) return "unknown label '" + std::string(label) + "' (expected AS, ST or empty)";
  return std::nullopt;
}

}  // namespace csv

inline std::string landmark_csv_header() {
  std::string h = "frame_id,label";
  for (std::size_t i = 0; i < kLandmarkCount; ++i) {
    h += ",x" + std::to_string(i) + ",y" + std::to_string(i);
  }
  return h;
}

inline std::string angle_csv_header() {
  std::string h = "frame_id,label";
  for (std::size_t j = 1; j <= kAngleCount; ++j) h += ",a" + std::to_string(j);
  return h;
}

/// Landmark CSV: frame_id,label,x0,y0,...,x67,y67 (138 columns).
inline Dataset parse_landmark_csv(std::string_view text, const std::string& source = "<memory>") {
  const auto lines = csv::split_lines(text);
  if (lines.empty() || lines.front() != landmark_csv_header()) {
    throw Error(ErrorCode::MalformedHeader, source + ": expected landmark CSV header");
  }
  constexpr std::size_t kColumns = 2 + 2 * kLandmarkCount;
  Dataset data;
  std::vector<RowIssue> issues;
  std::unordered_map<std::string_view, std::size_t> seen;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    const auto fields = csv::split_fields(lines[li]);
    if (fields.size() != kColumns) {
      issues.push_back({line_no, std::to_string(fields.size()) + " columns, expected " +
                                     std::to_string(kColumns)});
      continue;
    }
    LandmarkFrame frame;
    if (auto err = csv::parse_identity(fields[0], fields[1], frame.label)) {
      issues.push_back({line_no, *err});
      continue;
    }
    frame.frame_id = std::string(fields[0]);
    frame.points.resize(kLandmarkCount);
    std::optional<std::string> err;
    for (std::size_t i = 0; i < kLandmarkCount && !err; ++i) {
      const auto x = csv::parse_real(fields[2 + 2 * i]);
      const auto y = csv::parse_real(fields[3 + 2 * i]);
      if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y)) {
        err = "landmark " + std::to_string(i) + " is not a finite number";
      } else {
        frame.points[i] = {*x, *y};
      }
    }
    if (err) {
      issues.push_back({line_no, *err});
      continue;
    }
    if (auto [it, inserted] = seen.emplace(fields[0], line_no); !inserted) {
      issues.push_back({line_no, "duplicate frame_id (first on line " +
                                     std::to_string(it->second) + ")"});
      continue;
    }
    data.push_back(std::move(frame));
  }
  if (!issues.empty()) throw CsvError(source, std::move(issues));
  return data;
}

inline Dataset read_landmark_csv(const std::filesystem::path& path) {
  return parse_landmark_csv(csv::read_file(path), path.string());
}

inline std::string format_landmark_csv(const Dataset& data) {
  std::string out = landmark_csv_header() + "\n";
  for (const auto& frame : data) {
    validate_frame(frame);
    csv::check_writable_id(frame.frame_id);
    out += frame.frame_id + "," + csv::label_field(frame.label);
    for (const auto& p : frame.points) {
      out += "," + csv::format_exact(p.x) + "," + csv::format_exact(p.y);
    }
    out += "\n";
  }
  return out;
}

inline void write_landmark_csv(const std::filesystem::path& path, const Dataset& data) {
  csv::write_file(path, format_landmark_csv(data));
}

/// Angles are written with this many significant digits.
inline constexpr int kAngleDigits = 12;

/// Largest accepted angle. Rounding pi to 12 significant digits lands just
/// above pi, so the range check allows that much slack and clamps.
inline constexpr double kAngleUpperBound = std::numbers::pi + 1e-10;

/// Angle CSV: frame_id,label,a1,...,a67 (69 columns).
inline FeatureMatrix parse_angle_csv(std::string_view text, const std::string& source = "<memory>") {
  const auto lines = csv::split_lines(text);
  if (lines.empty() || lines.front() != angle_csv_header()) {
    throw Error(ErrorCode::MalformedHeader, source + ": expected angle CSV header");
  }
  constexpr std::size_t kColumns = 2 + kAngleCount;
  FeatureMatrix fm;
  fm.values = Matrix(0, kAngleCount);
  std::vector<RowIssue> issues;
  std::unordered_map<std::string_view, std::size_t> seen;
  std::vector<double> row(kAngleCount);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    const auto fields = csv::split_fields(lines[li]);
    if (fields.size() != kColumns) {
      issues.push_back({line_no, std::to_string(fields.size()) + " columns, expected " +
                                     std::to_string(kColumns)});
      continue;
    }
    std::optional<SentenceClass> label;
    if (auto err = csv::parse_identity(fields[0], fields[1], label)) {
      issues.push_back({line_no, *err});
      continue;
    }
    std::optional<std::string> err;
    for (std::size_t j = 0; j < kAngleCount && !err; ++j) {
      const auto a = csv::parse_real(fields[2 + j]);
      if (!a || !(*a >= 0.0 && *a <= kAngleUpperBound)) {
        err = "a" + std::to_string(j + 1) + " = '" + std::string(fields[2 + j]) +
              "' is not an angle in [0, pi]";
      } else {
        row[j] = std::min(*a, std::numbers::pi);
      }
    }
    if (err) {
      issues.push_back({line_no, *err});
      continue;
    }
    if (auto [it, inserted] = seen.emplace(fields[0], line_no); !inserted) {
      issues.push_back({line_no, "duplicate frame_id (first on line " +
                                     std::to_string(it->second) + ")"});
      continue;
    }
    fm.frame_ids.emplace_back(fields[0]);
    fm.labels.push_back(label);
    fm.values.append_row(row);
  }
  if (!issues.empty()) throw CsvError(source, std::move(issues));
  return fm;
}

inline FeatureMatrix read_angle_csv(const std::filesystem::path& path) {
  return parse_angle_csv(csv::read_file(path), path.string());
}

inline std::string format_angle_csv(const FeatureMatrix& fm) {
  if (fm.values.rows() != fm.size() || fm.labels.size() != fm.size()) {
    throw Error(ErrorCode::DimensionMismatch, "feature matrix columns disagree in length");
  }
  std::string out = angle_csv_header() + "\n";
  for (std::size_t r = 0; r < fm.size(); ++r) {
    csv::check_writable_id(fm.frame_ids[r]);
    if (fm.values.cols() != kAngleCount) {
      throw Error(ErrorCode::DimensionMismatch, "angle rows must have 67 values");
    }
    out += fm.frame_ids[r] + "," + csv::label_field(fm.labels[r]);
    for (double a : fm.values.row(r)) out += "," + csv::format_significant(a, kAngleDigits);
    out += "\n";
  }
  return out;
}

inline void write_angle_csv(const std::filesystem::path& path, const FeatureMatrix& fm) {
  csv::write_file(path, format_angle_csv(fm));
}

/// Stacks angle vectors with their labels.
inline FeatureMatrix make_feature_matrix(std::span<const AngleVector> rows,
                                         std::span<const std::optional<SentenceClass>> labels) {
  if (rows.size() != labels.size()) {
    throw Error(ErrorCode::DimensionMismatch, "labels and angle rows differ in count");
  }
  FeatureMatrix fm;
  fm.values = Matrix(0, kAngleCount);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    fm.frame_ids.push_back(rows[i].source_frame_id);
    fm.labels.push_back(labels[i]);
    fm.values.append_row(rows[i].angles);
  }
  return fm;
}

}  // namespace facecue
