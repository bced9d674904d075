#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "facecue/csv.hpp"
#include "support.hpp"

using namespace facecue;

namespace {

std::string landmark_row(const std::string& id, const std::string& label, int columns_of_numbers = 136) {
  std::string s = id + "," + label;
  for (int i = 0; i < columns_of_numbers; ++i) s += "," + std::to_string(10 + i % 50) + ".5";
  return s;
}

FeatureMatrix random_angles(Rng& rng, std::size_t n) {
  FeatureMatrix fm;
  fm.values = Matrix(0, kAngleCount);
  for (std::size_t i = 0; i < n; ++i) {
    fm.frame_ids.push_back("r" + std::to_string(i));
    fm.labels.push_back(i % 3 == 0 ? std::nullopt
                                   : std::optional(i % 3 == 1 ? SentenceClass::AS : SentenceClass::ST));
    std::vector<double> row(kAngleCount);
    for (double& a : row) a = rng.uniform(0, std::numbers::pi);
    fm.values.append_row(row);
  }
  return fm;
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

}  // namespace

TEST(LandmarkCsv, ReadsWellFormedRows) {
  const std::string text = landmark_csv_header() + "\n" + landmark_row("a", "AS") + "\n" +
                           landmark_row("b", "ST") + "\r\n" + landmark_row("c", "") + "\n";
  const auto d = parse_landmark_csv(text);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[0].label, SentenceClass::AS);
  EXPECT_EQ(d[1].label, SentenceClass::ST);
  EXPECT_FALSE(d[2].label);
  EXPECT_EQ(d[2].frame_id, "c");
  EXPECT_EQ(d[0].points[1].x, 12.5);
}

TEST(LandmarkCsv, ShortRowNamesItsLine) {
  const std::string text = landmark_csv_header() + "\n" + landmark_row("a", "AS") + "\n" +
                           landmark_row("b", "AS", 135) + "\n";
  try {
    parse_landmark_csv(text);
    FAIL();
  } catch (const CsvError& e) {
    ASSERT_EQ(e.issues().size(), 1u);
    EXPECT_EQ(e.issues()[0].line, 3u);
    EXPECT_EQ(e.code(), ErrorCode::RowParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(LandmarkCsv, EveryRejectedRowIsReported) {
  std::string bad_number = landmark_row("c", "AS");
  bad_number.replace(bad_number.find("10.5"), 4, "abc");
  const std::string text = landmark_csv_header() + "\n" + landmark_row("a", "XX") + "\n" +
                           landmark_row("b", "AS") + "\n" + bad_number + "\n" +
                           landmark_row("b", "ST") + "\n" + landmark_row("e", "AS").replace(5, 4, "nan") + "\n";
  try {
    parse_landmark_csv(text);
    FAIL();
  } catch (const CsvError& e) {
    std::vector<std::size_t> lines;
    for (const auto& i : e.issues()) lines.push_back(i.line);
    EXPECT_EQ(lines, (std::vector<std::size_t>{2, 4, 5, 6}));
  }
}

TEST(LandmarkCsv, EmptyDataSectionAndHeaderErrors) {
  EXPECT_TRUE(parse_landmark_csv(landmark_csv_header() + "\n").empty());
  EXPECT_EQ(code_of([] { parse_landmark_csv("frame_id,label,x0\n"); }), ErrorCode::MalformedHeader);
  EXPECT_EQ(code_of([] { parse_landmark_csv(""); }), ErrorCode::MalformedHeader);
  EXPECT_EQ(code_of([] { read_landmark_csv("/nonexistent/facecue.csv"); }), ErrorCode::MissingFile);
}

TEST(LandmarkCsv, WriteReadIsLossless) {
  Rng rng(61);
  Dataset d;
  for (int i = 0; i < 5; ++i) {
    d.push_back(fixtures::random_real_frame(rng, "id" + std::to_string(i)));
    if (i % 2) d.back().label = SentenceClass::ST;
  }
  EXPECT_EQ(parse_landmark_csv(format_landmark_csv(d)), d);
  d[0].frame_id = "has,comma";
  EXPECT_THROW(format_landmark_csv(d), Error);
}

TEST(AngleCsv, RoundTripAtTwelveDigits) {
  Rng rng(62);
  const auto fm = random_angles(rng, 5);
  const auto dir = fixtures::scratch_dir("angles");
  write_angle_csv(dir / "a.csv", fm);
  const auto back = read_angle_csv(dir / "a.csv");
  ASSERT_EQ(back.size(), 5u);
  EXPECT_EQ(back.frame_ids, fm.frame_ids);
  EXPECT_EQ(back.labels, fm.labels);
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c < kAngleCount; ++c) {
      EXPECT_LT(std::abs(back.values(r, c) - fm.values(r, c)), 1e-9);
      EXPECT_LE(std::abs(back.values(r, c) - fm.values(r, c)), 5e-12 * std::abs(fm.values(r, c)) + 1e-300);
    }
}

TEST(AngleCsv, PiSurvivesRoundTrip) {
  FeatureMatrix fm;
  fm.values = Matrix(1, kAngleCount, std::numbers::pi);
  fm.frame_ids = {"p"};
  fm.labels = {SentenceClass::AS};
  const auto back = parse_angle_csv(format_angle_csv(fm));
  EXPECT_EQ(back.values(0, 0), std::numbers::pi);
}

TEST(AngleCsv, EmptyRowsWriteHeaderOnly) {
  FeatureMatrix fm;
  EXPECT_EQ(format_angle_csv(fm), angle_csv_header() + "\n");
  EXPECT_EQ(parse_angle_csv(format_angle_csv(fm)).size(), 0u);
}

TEST(AngleCsv, RejectsOutOfRangeAngleAndUnknownLabel) {
  Rng rng(63);
  auto text = format_angle_csv(random_angles(rng, 2));
  auto out_of_range = text;
  const auto pos = out_of_range.find("r1,");
  const auto field = out_of_range.find(',', pos + 3) + 1;
  out_of_range.replace(field, out_of_range.find(',', field) - field, "3.5");
  EXPECT_EQ(code_of([&] { parse_angle_csv(out_of_range); }), ErrorCode::RowParseError);

  auto bad_label = text;
  bad_label.replace(bad_label.find("r1,AS"), 5, "r1,QS");
  EXPECT_EQ(code_of([&] { parse_angle_csv(bad_label); }), ErrorCode::RowParseError);
}

TEST(AngleCsv, LargeFile) {
  Rng rng(64);
  const auto fm = random_angles(rng, 3660);
  const auto back = parse_angle_csv(format_angle_csv(fm));
  EXPECT_EQ(back.size(), 3660u);
  EXPECT_EQ(back.values.rows(), 3660u);
}
