#include <gtest/gtest.h>

#include <numeric>

#include "fuzzeeg/dataio.hpp"
#include "fuzzeeg/error.hpp"
#include "test_support.hpp"

using namespace fuzzeeg;
using testing_support::TempDir;
using testing_support::write_text;

TEST(Dataio, BonnPrefixMapsToSet) {
  EXPECT_EQ(bonn_class_from_filename("Z001.txt"), "A");
  EXPECT_EQ(bonn_class_from_filename("O017.txt"), "B");
  EXPECT_EQ(bonn_class_from_filename("N100.TXT"), "C");
  EXPECT_EQ(bonn_class_from_filename("F042.txt"), "D");
  EXPECT_EQ(bonn_class_from_filename("S003.txt"), "E");
  EXPECT_FALSE(bonn_class_from_filename("X001.txt").has_value());
}

TEST(Dataio, BonnSegmentOf4097Values) {
  TempDir dir("bonn");
  std::string text;
  for (int i = 0; i < 4097; ++i) text += std::to_string(i % 50 - 25) + "\n";
  write_text(dir / "Z001.txt", text);
  const Recording rec = load_bonn_segment(dir / "Z001.txt");
  EXPECT_EQ(rec.samples.size(), 4097u);
  EXPECT_DOUBLE_EQ(rec.fs, 173.61);
  EXPECT_EQ(rec.class_tag, "A");
  EXPECT_EQ(rec.source_id, "Z001");
}

TEST(Dataio, BonnExplicitTag) {
  TempDir dir("bonn");
  write_text(dir / "seg.txt", "1.0\n2.0\n3.0");
  const Recording rec = load_bonn_segment(dir / "seg.txt", "E");
  EXPECT_EQ(rec.samples, (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(rec.class_tag, "E");
}

TEST(Dataio, BonnEmptyAndMalformed) {
  TempDir dir("bonn");
  write_text(dir / "Z000.txt", "");
  EXPECT_THROW(load_bonn_segment(dir / "Z000.txt"), EmptyInputError);
  write_text(dir / "Z001.txt", "1\n2\nabc\n");
  try {
    load_bonn_segment(dir / "Z001.txt");
    FAIL() << "expected a format error";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(load_bonn_segment(dir / "missing.txt"), ConfigError);
}

TEST(Dataio, CsvChannelSelection) {
  TempDir dir("csv");
  write_text(dir / "rec.csv", "a,b\n1,10\n2,20\n3,30\n");
  const Recording rec = load_csv_multichannel(dir / "rec.csv", 256.0, 1);
  EXPECT_EQ(rec.samples, (std::vector<double>{10, 20, 30}));
  EXPECT_THROW(load_csv_multichannel(dir / "rec.csv", 256.0, 5), ParameterError);
  write_text(dir / "bad.csv", "1,2\n3,x\n");
  EXPECT_THROW(load_csv_multichannel(dir / "bad.csv", 256.0, 1), FormatError);
}

TEST(Dataio, CsvWithoutHeader) {
  TempDir dir("csv");
  std::string text;
  for (int i = 0; i < 1024; ++i) text += std::to_string(i) + "," + std::to_string(-i) + "\n";
  write_text(dir / "rec.csv", text);
  const Recording rec = load_csv_multichannel(dir / "rec.csv", 256.0, 0);
  EXPECT_EQ(rec.samples.size(), 1024u);
  EXPECT_DOUBLE_EQ(rec.samples.front(), 0.0);
}

TEST(Dataio, WindowArithmetic) {
  Recording rec;
  rec.fs = kBonnSamplingRate;
  rec.samples.resize(4097);
  std::iota(rec.samples.begin(), rec.samples.end(), 0.0);
  rec.source_id = "Z001";
  const auto frames = window(rec, 5.0);
  ASSERT_EQ(frames.size(), 4u);
  for (std::size_t k = 0; k < frames.size(); ++k) {
    EXPECT_EQ(frames[k].samples.size(), 868u);
    EXPECT_EQ(frames[k].index, k);
    EXPECT_DOUBLE_EQ(frames[k].samples.front(), static_cast<double>(k * 868));
  }
  // Concatenated frames are a bit-identical prefix.
  std::vector<double> joined;
  for (const auto& f : frames) joined.insert(joined.end(), f.samples.begin(), f.samples.end());
  EXPECT_TRUE(std::equal(joined.begin(), joined.end(), rec.samples.begin()));
}

TEST(Dataio, WindowEdgeCases) {
  Recording rec;
  rec.fs = 256.0;
  rec.samples.assign(1024, 1.0);
  EXPECT_EQ(window(rec, 4.0).size(), 1u);
  rec.samples.assign(100, 1.0);
  EXPECT_TRUE(window(rec, 4.0).empty());
  EXPECT_THROW(window(rec, 0.0), ParameterError);
}

TEST(Dataio, FrameCountFormula) {
  for (std::size_t n : {10u, 99u, 500u, 4097u}) {
    Recording rec;
    rec.fs = 10.0;
    rec.samples.assign(n, 0.5);
    EXPECT_EQ(window(rec, 1.3).size(), n / 13);
  }
}

namespace {
FramePools pools_of(const std::vector<std::string>& tags, int per_tag) {
  FramePools pools;
  for (const auto& tag : tags) {
    Recording rec;
    rec.fs = 10.0;
    rec.samples.assign(static_cast<std::size_t>(per_tag) * 10, 1.0);
    rec.class_tag = tag;
    rec.source_id = tag + "01";
    pools[tag] = window(rec, 1.0);
  }
  return pools;
}
}  // namespace

TEST(Dataio, AssembleTwoClassCase) {
  const auto frames = assemble_case(pools_of({"A", "E"}, 3), *find_bonn_case("A-E"));
  ASSERT_EQ(frames.size(), 6u);
  for (const auto& f : frames) EXPECT_EQ(f.label, f.class_tag == "A" ? 0 : 1);
  EXPECT_EQ(frames.front().source_id, "A01");
}

TEST(Dataio, AssembleThreeClassCase) {
  const auto frames = assemble_case(pools_of({"A", "B", "C", "D", "E"}, 2), parse_case("AB-CD-E"));
  EXPECT_EQ(frames.size(), 10u);
  std::set<int> labels;
  for (const auto& f : frames) labels.insert(f.label);
  EXPECT_EQ(labels, (std::set<int>{0, 1, 2}));
}

TEST(Dataio, AssembleMissingTag) {
  EXPECT_THROW(assemble_case(pools_of({"A", "E"}, 1), parse_case("X-E")), ConfigError);
  EXPECT_THROW(parse_case("A-A"), ConfigError);
  EXPECT_THROW(parse_case("ABE"), ConfigError);
}

TEST(Dataio, BonnCaseRegistry) {
  EXPECT_EQ(bonn_cases().size(), 6u);
  EXPECT_TRUE(find_bonn_case("ABCD-E").has_value());
  EXPECT_FALSE(find_bonn_case("A-B").has_value());
}
