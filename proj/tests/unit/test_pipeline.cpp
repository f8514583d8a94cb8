#include <gtest/gtest.h>

#include "fuzzeeg/error.hpp"
#include "fuzzeeg/pipeline.hpp"
#include "test_support.hpp"

using namespace fuzzeeg;
using testing_support::gaussian_series;

namespace {
SignalFrame frame(std::vector<double> samples, int label, const std::string& id) {
  SignalFrame f;
  f.samples = std::move(samples);
  f.fs = 173.61;
  f.label = label;
  f.frame_id = id;
  f.source_id = id;
  return f;
}

const TqwtParams kSmall{1.0, 3.0, 3};
}  // namespace

TEST(Pipeline, ColumnNames) {
  const auto names = feature_column_names(9);
  ASSERT_EQ(names.size(), 135u);
  EXPECT_EQ(names.front(), "band0_fu_en");
  EXPECT_EQ(names[14], "band0_fu_me_en_global");
  EXPECT_EQ(names[15], "band1_fu_en");
  EXPECT_EQ(names.back(), "band8_fu_me_en_global");
}

TEST(Pipeline, DefaultFramesGive135Columns) {
  std::vector<SignalFrame> frames;
  for (int k = 0; k < 4; ++k) frames.push_back(frame(gaussian_series(868, 40 + k), k % 2, "Z001#" + std::to_string(k)));
  const FeatureMatrix fm = extract_features(frames, TqwtParams{}, EntropyParams{}, 1);
  EXPECT_EQ(fm.rows(), 4u);
  EXPECT_EQ(fm.cols(), 135u);
  EXPECT_EQ(fm.labels, (std::vector<int>{0, 1, 0, 1}));
  EXPECT_TRUE(fm.values.allFinite());
  EXPECT_EQ(fm.column_names, feature_column_names(9));
}

TEST(Pipeline, EmptyAndMixedLengths) {
  EXPECT_THROW(extract_features({}, kSmall, EntropyParams{}), EmptyInputError);
  std::vector<SignalFrame> frames = {frame(gaussian_series(256, 1), 0, "a"), frame(gaussian_series(200, 2), 1, "b")};
  EXPECT_THROW(extract_features(frames, kSmall, EntropyParams{}), ShapeError);
}

TEST(Pipeline, DuplicateFramesGiveIdenticalRowsAndThreadsAgree) {
  const auto x = gaussian_series(256, 3);
  std::vector<SignalFrame> frames = {frame(x, 0, "a"), frame(gaussian_series(256, 4), 1, "b"), frame(x, 0, "c")};
  const FeatureMatrix one = extract_features(frames, kSmall, EntropyParams{}, 1);
  const FeatureMatrix many = extract_features(frames, kSmall, EntropyParams{}, 3);
  EXPECT_TRUE(one.values.row(0) == one.values.row(2));
  EXPECT_TRUE(one.values == many.values);
  EXPECT_EQ(one.frame_ids, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Pipeline, UndecomposableFramesAreSkipped) {
  std::vector<SignalFrame> frames = {frame(gaussian_series(256, 5), 0, "ok")};
  auto bad = gaussian_series(256, 6);
  bad[10] = std::nan("");
  frames.push_back(frame(bad, 1, "bad"));
  const FeatureMatrix fm = extract_features(frames, kSmall, EntropyParams{}, 1);
  EXPECT_EQ(fm.rows(), 1u);
  EXPECT_EQ(fm.skipped_frames, (std::vector<std::string>{"bad"}));
}

TEST(Pipeline, DegenerateCellsFlagged) {
  std::vector<SignalFrame> frames = {frame(std::vector<double>(256, 0.0), 0, "flat")};
  const FeatureMatrix fm = extract_features(frames, kSmall, EntropyParams{}, 1);
  EXPECT_EQ(fm.degenerate_count(), fm.cols());
  EXPECT_TRUE((fm.values.array() == 0.0).all());
}

TEST(Pipeline, Normalization) {
  Eigen::MatrixXd v(3, 2);
  v << 0, 4, 5, 4, 10, 4;
  const NormStats st = fit_normalization(v);
  const Eigen::MatrixXd n = apply_normalization(st, v);
  EXPECT_DOUBLE_EQ(n(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(n(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(n(2, 0), 1.0);
  EXPECT_TRUE((n.col(1).array() == 0.0).all());
  Eigen::MatrixXd probe(1, 2);
  probe << 5, 4;
  EXPECT_DOUBLE_EQ(apply_normalization(st, probe)(0, 0), 0.0);
  probe << 20, 4;
  EXPECT_DOUBLE_EQ(apply_normalization(st, probe)(0, 0), 3.0);
}

TEST(Pipeline, NormalizeKeepsStatsAndRange) {
  FeatureMatrix fm;
  fm.values = Eigen::MatrixXd::Random(20, 5) * 7.0;
  fm.labels.assign(20, 0);
  const FeatureMatrix n = normalize(fm);
  EXPECT_LE(n.values.maxCoeff(), 1.0);
  EXPECT_GE(n.values.minCoeff(), -1.0);
  EXPECT_TRUE(n.norm_stats.min.isApprox(fm.values.colwise().minCoeff().transpose()));
}

TEST(Pipeline, CsvRoundTripAndDeterminism) {
  testing_support::TempDir dir("pipe");
  std::vector<SignalFrame> frames = {frame(gaussian_series(256, 7), 0, "a"), frame(gaussian_series(256, 8), 1, "b")};
  FeatureMatrix fm = extract_features(frames, kSmall, EntropyParams{}, 1);
  fm.metadata = describe(kSmall);
  write_feature_csv(dir / "f1.csv", fm);
  write_feature_csv(dir / "f2.csv", extract_features(frames, kSmall, EntropyParams{}, 2));
  const FeatureMatrix back = read_feature_csv(dir / "f1.csv");
  EXPECT_TRUE(back.values == fm.values);
  EXPECT_EQ(back.labels, fm.labels);
  EXPECT_EQ(back.column_names, fm.column_names);
  EXPECT_EQ(testing_support::read_text(dir / "f1.csv"), testing_support::read_text(dir / "f2.csv"));
  const std::string meta = testing_support::read_text(meta_path(dir / "f1.csv"));
  EXPECT_NE(meta.find("tqwt.levels=3"), std::string::npos);
  EXPECT_NE(meta.find("degenerate_cells="), std::string::npos);
}

TEST(Pipeline, DescribeEntropy) {
  const auto d = describe(EntropyParams{});
  EXPECT_EQ(d.at("entropy.m"), "2");
  EXPECT_EQ(d.at("entropy.m_bins"), "512");
}
