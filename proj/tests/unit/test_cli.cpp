#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "fuzzeeg/csv.hpp"
#include "fuzzeeg/error.hpp"
#include "fuzzeeg/pipeline.hpp"
#include "test_support.hpp"

using namespace fuzzeeg;
using testing_support::TempDir;
using testing_support::read_text;
using testing_support::write_text;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Bonn-style files: sines for set A, noise bursts for set E.
void write_bonn_dir(const std::filesystem::path& dir, int files_per_class, std::size_t samples) {
  for (int k = 0; k < files_per_class; ++k) {
    char name[16];
    std::snprintf(name, sizeof name, "Z%03d.txt", k + 1);
    auto z = testing_support::sine(samples, 0.02 + 0.002 * k, 50.0);
    const auto zn = testing_support::gaussian_series(samples, 10 + k, 2.0);
    for (std::size_t i = 0; i < samples; ++i) z[i] += zn[i];
    testing_support::write_series(dir / "Z" / name, z);
    std::snprintf(name, sizeof name, "S%03d.txt", k + 1);
    testing_support::write_series(dir / "S" / name, testing_support::gaussian_series(samples, 100 + k, 80.0));
  }
}

std::string fast_config(const std::filesystem::path& root, const std::filesystem::path& out) {
  return "[data]\nroot = " + root.string() + "\nwindow_seconds = 2.0\n[tqwt]\nlevels = 3\n[output]\ndir = " +
         out.string() + "\nthreads = 1\n";
}

void write_separable_features(const std::filesystem::path& path, int per_class, int dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.3);
  FeatureMatrix fm;
  fm.values.resize(2 * per_class, dims);
  for (int i = 0; i < 2 * per_class; ++i) {
    const int label = i % 2;
    for (int d = 0; d < dims; ++d) fm.values(i, d) = (label ? 1.0 : -1.0) + g(rng);
    fm.labels.push_back(label);
  }
  for (int d = 0; d < dims; ++d) fm.column_names.push_back("f" + std::to_string(d));
  write_feature_csv(path, fm);
}

double summary_mean(const std::filesystem::path& path, const std::string& metric) {
  const CsvTable t = read_csv(path);
  for (const auto& row : t.rows)
    if (row[0] == metric) return std::stod(row[1]);
  return -1.0;
}

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
  EXPECT_EQ(run_cli({}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"explode"}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"bench", "--bogus"}).code, cli::kExitConfig);
}

TEST(Cli, ConfigErrors) {
  TempDir dir("cli");
  write_text(dir / "bad.ini", "[tqwt]\nqq = 2\n");
  EXPECT_EQ(run_cli({"-c", (dir / "bad.ini").string(), "bench"}).code, cli::kExitConfig);
  write_text(dir / "bad2.ini", "[nonsense]\na = 1\n");
  EXPECT_EQ(run_cli({"-c", (dir / "bad2.ini").string(), "bench"}).code, cli::kExitConfig);
  write_text(dir / "bad3.ini", "[tqwt]\nr = 0.5\n");
  EXPECT_EQ(run_cli({"-c", (dir / "bad3.ini").string(), "bench"}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"-c", (dir / "missing.ini").string(), "bench"}).code, cli::kExitConfig);
}

TEST(Cli, ConfigEchoReloads) {
  TempDir dir("cli");
  write_text(dir / "c.ini",
             "[entropy]\nm = 3\nifuen_drop = 0,1\n[classifier]\nkind = knn\n[swarm]\nn_pop = 7\n[cases]\nmine = AB-E\n");
  const cli::RunConfig a = cli::load_config(dir / "c.ini");
  EXPECT_EQ(a.entropy.m, 3);
  EXPECT_EQ(a.entropy.ifuen_drop, (std::vector<int>{0, 1}));
  EXPECT_EQ(a.experiment.classifier.kind, ClassifierKind::Knn);
  write_text(dir / "echo.ini", a.to_ini());
  const cli::RunConfig b = cli::load_config(dir / "echo.ini");
  EXPECT_EQ(a.to_ini(), b.to_ini());
  cli::RunConfig c = a;
  c.case_name = "mine";
  EXPECT_EQ(c.resolve_case().class_groups.size(), 2u);
  c.case_name = "Q-E";
  EXPECT_THROW(c.resolve_case(), ConfigError);
}

TEST(Cli, DataRootFromEnvironment) {
  TempDir dir("cli");
  ::setenv(cli::kDataRootEnv, dir.path().c_str(), 1);
  const cli::RunConfig c = cli::load_config(std::nullopt);
  ::unsetenv(cli::kDataRootEnv);
  EXPECT_EQ(c.data_root, dir.path());
}

TEST(Cli, DecomposeSingleBonnFile) {
  TempDir dir("cli");
  testing_support::write_series(dir / "Z001.txt", testing_support::gaussian_series(4097, 1, 30.0));
  const auto r = run_cli({"decompose", "-i", (dir / "Z001.txt").string(), "-o", (dir / "out").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  for (int k = 0; k < 4; ++k) {
    const auto path = dir / "out" / "decompose" / ("Z001_frame" + std::to_string(k) + ".csv");
    ASSERT_TRUE(std::filesystem::exists(path));
    EXPECT_EQ(read_subbands_csv(path).bands.size(), 9u);
  }
  EXPECT_FALSE(std::filesystem::exists(dir / "out" / "decompose" / "Z001_frame4.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "decompose" / "decompose.config.ini"));
}

TEST(Cli, DecomposeErrors) {
  TempDir dir("cli");
  EXPECT_EQ(run_cli({"decompose", "-i", (dir / "nope.txt").string(), "-o", (dir / "out").string()}).code,
            cli::kExitConfig);
  testing_support::write_series(dir / "Z001.txt", testing_support::gaussian_series(4097, 1));
  write_text(dir / "deep.ini", "[tqwt]\nlevels = 20\n");
  const auto r = run_cli({"-c", (dir / "deep.ini").string(), "decompose", "-i", (dir / "Z001.txt").string(), "-o",
                          (dir / "out").string()});
  EXPECT_EQ(r.code, cli::kExitConfig);
  EXPECT_NE(r.err.find("J_max"), std::string::npos);
}

TEST(Cli, FeaturesDeterministicWithConfigEcho) {
  TempDir dir("cli");
  write_bonn_dir(dir / "data", 1, 800);
  write_text(dir / "c.ini", fast_config(dir / "data", dir / "o1"));
  ASSERT_EQ(run_cli({"-c", (dir / "c.ini").string(), "features"}).code, cli::kExitOk);
  ASSERT_EQ(run_cli({"-c", (dir / "c.ini").string(), "-j", "2", "features", "-o", (dir / "o2").string()}).code,
            cli::kExitOk);
  const std::string a = read_text(dir / "o1" / "features.csv");
  EXPECT_EQ(a, read_text(dir / "o2" / "features.csv"));
  const FeatureMatrix fm = read_feature_csv(dir / "o1" / "features.csv");
  EXPECT_EQ(fm.cols(), 4u * 15u);
  EXPECT_EQ(fm.rows(), 4u);  // two 347-sample frames per file
  EXPECT_EQ(std::count(fm.labels.begin(), fm.labels.end(), 1), 2);
  EXPECT_TRUE(std::filesystem::exists(dir / "o1" / "features.config.ini"));
  EXPECT_NE(read_text(meta_path(dir / "o1" / "features.csv")).find("case=A-E"), std::string::npos);
}

TEST(Cli, FeaturesEmptyDirectory) {
  TempDir dir("cli");
  std::filesystem::create_directories(dir / "empty");
  write_text(dir / "c.ini", fast_config(dir / "empty", dir / "out"));
  EXPECT_EQ(run_cli({"-c", (dir / "c.ini").string(), "features"}).code, cli::kExitConfig);
}

TEST(Cli, CsvFormatUsesDirectoryClasses) {
  TempDir dir("cli");
  for (const std::string cls : {"A", "E"}) {
    std::string text = "t,ch0\n";
    const auto x = testing_support::gaussian_series(600, cls == "A" ? 1 : 2);
    for (std::size_t i = 0; i < x.size(); ++i) text += std::to_string(i) + "," + std::to_string(x[i]) + "\n";
    write_text(dir / "data" / cls / "rec.csv", text);
  }
  write_text(dir / "c.ini", "[data]\nroot = " + (dir / "data").string() +
                                "\nformat = csv\nfs = 256\nchannel = 1\nwindow_seconds = 1.0\n[tqwt]\nlevels = 3\n[output]\ndir = " +
                                (dir / "out").string() + "\n");
  ASSERT_EQ(run_cli({"-c", (dir / "c.ini").string(), "features"}).code, cli::kExitOk);
  EXPECT_EQ(read_feature_csv(dir / "out" / "features.csv").rows(), 4u);
}

TEST(Cli, EvaluateSeparableWithBreedingSwarm) {
  TempDir dir("cli");
  write_separable_features(dir / "features.csv", 40, 8, 1);
  write_text(dir / "c.ini", "[swarm]\nn_pop = 20\nmax_iter = 40\n[experiment]\nfolds = 5\nrepeats = 1\n");
  const auto r = run_cli({"-c", (dir / "c.ini").string(), "evaluate", "-f", (dir / "features.csv").string(), "-o",
                          (dir / "out").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_GE(summary_mean(dir / "out" / "summary.csv", "acc"), 0.98);
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "eval.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "confusion.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "evaluate.config.ini"));
}

TEST(Cli, EvaluateKnnAndUnknownCase) {
  TempDir dir("cli");
  write_separable_features(dir / "features.csv", 20, 4, 2);
  write_text(dir / "c.ini", "[classifier]\nkind = knn\n[experiment]\nfolds = 5\nrepeats = 1\n");
  const std::string cfg = (dir / "c.ini").string(), feats = (dir / "features.csv").string();
  EXPECT_EQ(run_cli({"-c", cfg, "evaluate", "-f", feats, "-o", (dir / "out").string()}).code, cli::kExitOk);
  EXPECT_EQ(run_cli({"-c", cfg, "evaluate", "--case", "Q-Z", "-f", feats, "-o", (dir / "o2").string()}).code,
            cli::kExitConfig);
  EXPECT_EQ(run_cli({"-c", cfg, "evaluate", "-f", (dir / "none.csv").string(), "-o", (dir / "o3").string()}).code,
            cli::kExitConfig);
}

TEST(Cli, ReduceAndTrain) {
  TempDir dir("cli");
  write_separable_features(dir / "features.csv", 20, 6, 3);
  write_text(dir / "c.ini",
             "[autoencoder]\nlayer_sizes = 6,4,3,4,6\nepochs = 5\n[classifier]\nkind = anfis\nepochs = 5\n");
  const std::string cfg = (dir / "c.ini").string(), feats = (dir / "features.csv").string();
  auto r = run_cli({"-c", cfg, "reduce", "-f", feats, "-o", (dir / "red").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(read_feature_csv(dir / "red" / "reduced.csv").cols(), 3u);
  EXPECT_TRUE(std::filesystem::exists(dir / "red" / "autoencoder.txt"));
  EXPECT_TRUE(std::filesystem::exists(dir / "red" / "autoencoder_loss.csv"));

  r = run_cli({"-c", cfg, "train", "-f", feats, "-o", (dir / "tr").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "tr" / "anfis.txt"));
  EXPECT_TRUE(std::filesystem::exists(dir / "tr" / "train_report.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "tr" / "train.config.ini"));
  EXPECT_NE(r.out.find("training accuracy"), std::string::npos);

  write_text(dir / "wrong.ini", "[autoencoder]\nlayer_sizes = 5,3,5\n");
  EXPECT_EQ(run_cli({"-c", (dir / "wrong.ini").string(), "reduce", "-f", feats, "-o", (dir / "x").string()}).code,
            cli::kExitConfig);
}

TEST(Cli, TrainSwarmAndKnn) {
  TempDir dir("cli");
  write_separable_features(dir / "features.csv", 15, 3, 4);
  write_text(dir / "pso.ini", "[classifier]\nkind = anfis_pso\n[swarm]\nn_pop = 10\nmax_iter = 5\n");
  ASSERT_EQ(run_cli({"-c", (dir / "pso.ini").string(), "train", "-f", (dir / "features.csv").string(), "-o",
                     (dir / "p").string()})
                .code,
            cli::kExitOk);
  EXPECT_TRUE(std::filesystem::exists(dir / "p" / "trace.csv"));
  write_text(dir / "knn.ini", "[classifier]\nkind = knn\n");
  ASSERT_EQ(run_cli({"-c", (dir / "knn.ini").string(), "train", "-f", (dir / "features.csv").string(), "-o",
                     (dir / "k").string()})
                .code,
            cli::kExitOk);
  EXPECT_TRUE(std::filesystem::exists(dir / "k" / "knn_reference.csv"));
}

TEST(Cli, BenchRowsAndRepeatWarning) {
  TempDir dir("cli");
  write_text(dir / "c.ini", "[bench]\nlength = 200\nsweep = 100,200\n");
  const auto r = run_cli({"-c", (dir / "c.ini").string(), "bench", "-r", "1", "-o", (dir / "out").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  const CsvTable t = read_csv(dir / "out" / "bench.csv");
  EXPECT_EQ(t.header, (std::vector<std::string>{"kernel_id", "n", "median_seconds", "min_seconds", "value"}));
  ASSERT_EQ(t.rows.size(), 15u);
  EXPECT_EQ(t.rows[0][0], "fu_en");
  EXPECT_EQ(t.rows[13][0], "fu_en");
  EXPECT_EQ(t.rows[13][1], "100");
  EXPECT_EQ(t.rows[14][1], "200");
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "bench.config.ini"));
}

TEST(Cli, BenchSelectedKernelsFromRecording) {
  TempDir dir("cli");
  testing_support::write_series(dir / "Z001.txt", testing_support::gaussian_series(1000, 5));
  write_text(dir / "c.ini", "[bench]\nkernels = fu_en,fu_dist_en\nlength = 300\n");
  const auto r = run_cli({"-c", (dir / "c.ini").string(), "bench", "-i", (dir / "Z001.txt").string(), "-o",
                          (dir / "out").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const CsvTable t = read_csv(dir / "out" / "bench.csv");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][0], "fu_dist_en");
  write_text(dir / "bad.ini", "[bench]\nkernels = fu_en,warp\n");
  EXPECT_EQ(run_cli({"-c", (dir / "bad.ini").string(), "bench", "-o", (dir / "o").string()}).code, cli::kExitConfig);
}
