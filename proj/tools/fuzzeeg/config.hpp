#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fuzzeeg/autoenc.hpp"
#include "fuzzeeg/dataio.hpp"
#include "fuzzeeg/entropy.hpp"
#include "fuzzeeg/evaluation.hpp"
#include "fuzzeeg/tqwt.hpp"

namespace fuzzeeg::cli {

inline constexpr const char* kDataRootEnv = "FUZZEEG_DATA_ROOT";

enum class DataFormat { Bonn, Csv };

struct RunConfig {
  // [data]
  std::filesystem::path data_root;
  DataFormat format = DataFormat::Bonn;
  double fs = kBonnSamplingRate;
  std::size_t channel = 0;
  double window_seconds = 5.0;
  std::string case_name = "A-E";
  std::map<std::string, std::string> user_cases;  // [cases] name = spec

  TqwtParams tqwt;
  EntropyParams entropy;
  ExperimentConfig experiment;  // classifier, swarm, autoencoder, folds, repeats, seed

  // [bench]
  std::vector<std::string> bench_kernels;  // empty: all
  std::size_t bench_length = 868;
  int bench_repeats = 5;
  std::vector<std::size_t> bench_sweep;

  std::filesystem::path output_dir = "fuzzeeg-out";
  int threads = 0;

  /// Case by name: the Bonn registry first, then [cases].
  CaseSpec resolve_case() const;
  /// Every setting as INI text, for the echo written next to outputs.
  std::string to_ini() const;
};

/// Reads an INI file (sections data, cases, tqwt, entropy, autoencoder,
/// classifier, swarm, experiment, bench, output). A missing path yields the
/// defaults. FUZZEEG_DATA_ROOT overrides data.root. Unknown keys and bad
/// values throw ConfigError.
RunConfig load_config(const std::optional<std::filesystem::path>& path);

}  // namespace fuzzeeg::cli
