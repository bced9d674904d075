#include <gtest/gtest.h>

#include <algorithm>

#include "facecue/metrics.hpp"
#include "support.hpp"

using namespace facecue;
using enum SentenceClass;

namespace {

ConfusionMatrix matrix(std::uint64_t as_as, std::uint64_t as_st, std::uint64_t st_as,
                       std::uint64_t st_st) {
  ConfusionMatrix m;
  m.counts = {{{as_as, as_st}, {st_as, st_st}}};
  return m;
}

}  // namespace

TEST(Report, PerfectClassifier) {
  const auto r = make_report(matrix(7, 0, 0, 5));
  for (auto c : kClassOrder) {
    const auto& rates = r.per_class[class_index(c)];
    EXPECT_EQ(rates.tpr->value(), 1.0);
    EXPECT_EQ(rates.tnr->value(), 1.0);
    EXPECT_EQ(rates.fpr->value(), 0.0);
    EXPECT_EQ(rates.fnr->value(), 0.0);
  }
  EXPECT_EQ(r.accuracy.value(), 1.0);
}

TEST(Report, ConstantAsOnBalancedSet) {
  std::vector<SentenceClass> truth(10, AS), pred(20, AS);
  truth.insert(truth.end(), 10, ST);
  const auto r = make_report(truth, pred);
  EXPECT_EQ(r.confusion, matrix(10, 0, 10, 0));
  EXPECT_EQ(r.accuracy.value(), 0.5);
  const auto& as = r.per_class[0];
  EXPECT_EQ(as.tpr->value(), 1.0);
  EXPECT_EQ(as.fpr->value(), 1.0);
  EXPECT_EQ(as.tnr->value(), 0.0);
  EXPECT_EQ(as.fnr->value(), 0.0);
  const auto& st = r.per_class[1];
  EXPECT_EQ(st.tpr->value(), 0.0);
  EXPECT_EQ(st.fnr->value(), 1.0);
  EXPECT_EQ(st.fpr->value(), 0.0);
  EXPECT_EQ(st.tnr->value(), 1.0);
}

TEST(Report, PublishedRowsSatisfyRateIdentities) {
  // AS row 0.826 / 0.172 / 0.827 / 0.174 as published, three-decimal rounding.
  EXPECT_NEAR(0.826 + 0.174, 1.0, 1e-12);
  EXPECT_NEAR(0.172 + 0.827, 1.0, 0.0015);
}

TEST(Report, ThreeDecimalDisplay) {
  // 19/23 = 0.826, 4/23 = 0.174, 5/29 = 0.172, 24/29 = 0.828
  const auto r = make_report(matrix(19, 4, 5, 24));
  const auto text = format_report(r);
  EXPECT_NE(text.find("AS      0.826   0.172   0.828   0.174"), std::string::npos) << text;
  EXPECT_NE(text.find("ST      0.828   0.174   0.826   0.172"), std::string::npos) << text;
  EXPECT_NE(text.find("Accuracy: 0.827 (43/52)"), std::string::npos) << text;
}

TEST(Report, UndefinedRatesAreNotZero) {
  const auto r = make_report(matrix(3, 1, 0, 0));  // no ST frames
  const auto& as = r.per_class[0];
  EXPECT_TRUE(as.tpr.has_value());
  EXPECT_FALSE(as.fpr.has_value());
  EXPECT_FALSE(as.tnr.has_value());
  const auto& st = r.per_class[1];
  EXPECT_FALSE(st.tpr.has_value());
  EXPECT_FALSE(st.fnr.has_value());
  EXPECT_NE(format_report(r).find("undef"), std::string::npos);
  const auto j = to_json(r);
  EXPECT_TRUE(j["per_class"]["ST"]["tpr"]["value"].is_null());
  EXPECT_EQ(j["per_class"]["AS"]["tpr"]["numerator"], 3);
}

TEST(Report, EmptyIsAnError) {
  try {
    make_report(ConfusionMatrix{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyTestSet);
  }
}

TEST(ReportProperties, IdentitiesAccuracyAndOrderIndependence) {
  Rng rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(80);
    std::vector<SentenceClass> truth, pred;
    for (std::size_t i = 0; i < n; ++i) {
      truth.push_back(rng.below(2) ? ST : AS);
      pred.push_back(rng.below(2) ? ST : AS);
    }
    const auto r = make_report(truth, pred);
    EXPECT_EQ(r.confusion.total(), n);
    for (const auto& rates : r.per_class) {
      if (rates.tpr) {
        EXPECT_EQ(rates.tpr->num + rates.fnr->num, rates.tpr->den);
        EXPECT_NEAR(rates.tpr->value() + rates.fnr->value(), 1.0, 1e-12);
      }
      if (rates.fpr) {
        EXPECT_EQ(rates.fpr->num + rates.tnr->num, rates.fpr->den);
        EXPECT_NEAR(rates.fpr->value() + rates.tnr->value(), 1.0, 1e-12);
      }
    }
    double weighted = 0;
    for (auto c : kClassOrder) {
      const auto& t = r.per_class[class_index(c)].tpr;
      if (t) weighted += t->value() * static_cast<double>(t->den) / static_cast<double>(n);
    }
    EXPECT_NEAR(r.accuracy.value(), weighted, 1e-12);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    std::vector<SentenceClass> t2, p2;
    for (auto i : perm) {
      t2.push_back(truth[i]);
      p2.push_back(pred[i]);
    }
    EXPECT_EQ(make_report(t2, p2).confusion, r.confusion);
  }
}

TEST(Evaluate, RejectsEmptyAndAugmentedTestData) {
  ForestModel forest;
  PcaModel pca;
  try {
    evaluate(forest, pca, {}, OriginIndex{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyTestSet);
  }
  Rng rng(52);
  Dataset test{fixtures::random_pixel_frame(rng, "clip~aug3")};
  test[0].label = AS;
  try {
    evaluate(forest, pca, test, OriginIndex{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AugmentedTestData);
    EXPECT_TRUE(is_protocol_violation(e.code()));
  }
}
