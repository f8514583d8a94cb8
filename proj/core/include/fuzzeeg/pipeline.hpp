#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fuzzeeg/dataio.hpp"
#include "fuzzeeg/entropy.hpp"
#include "fuzzeeg/tqwt.hpp"

namespace fuzzeeg {

/// Per-column min / max learned on training rows.
struct NormStats {
  Eigen::VectorXd min;
  Eigen::VectorXd max;
};

struct FeatureMatrix {
  Eigen::MatrixXd values;  // rows x (bands * kFeatureCount)
  std::vector<int> labels;
  std::vector<std::string> column_names;
  std::vector<std::string> frame_ids;
  // Row-major rows x cols; 1 where a kernel reported a degenerate input or the
  // band was too short for it. Such cells hold 0.
  std::vector<std::uint8_t> degenerate;
  std::vector<std::string> skipped_frames;
  std::map<std::string, std::string> metadata;
  NormStats norm_stats;  // empty until normalize() is called

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
  std::size_t degenerate_count() const;
};

/// "band{b}_{feature_id}" for every band and feature, band-major.
std::vector<std::string> feature_column_names(int bands);

/// One feature row: decompose, then the 15-feature set on each sub-band.
/// `degenerate` (if given) receives one flag per column.
std::vector<double> frame_features(std::span<const double> frame, const TqwtParams& tqwt, const EntropyParams& ep,
                                   std::vector<std::uint8_t>* degenerate = nullptr);

/// Feature matrix of labeled frames, computed on `threads` workers (0: all
/// cores). Row order follows frame order. Frames that cannot be decomposed
/// are skipped and listed in `skipped_frames`. Throws EmptyInputError on no
/// frames and ShapeError on mixed frame lengths.
FeatureMatrix extract_features(std::span<const SignalFrame> frames, const TqwtParams& tqwt, const EntropyParams& ep,
                               int threads = 0);

NormStats fit_normalization(const Eigen::MatrixXd& values);

/// Affine map of each column onto [-1, 1] using `stats`; constant columns map
/// to 0. Values outside the fitted range are not clipped.
Eigen::MatrixXd apply_normalization(const NormStats& stats, const Eigen::MatrixXd& values);

/// Fits stats on `fm` and returns the normalized copy carrying those stats.
FeatureMatrix normalize(const FeatureMatrix& fm);

/// CSV with the column names plus "label", and a ".meta" sidecar listing the
/// metadata, degenerate cells and skipped frames.
void write_feature_csv(const std::filesystem::path& path, const FeatureMatrix& fm);
FeatureMatrix read_feature_csv(const std::filesystem::path& path);

std::filesystem::path meta_path(const std::filesystem::path& csv_path);

/// Key / value view of the parameters, for metadata and config echoes.
std::map<std::string, std::string> describe(const TqwtParams& p);
std::map<std::string, std::string> describe(const EntropyParams& p);

}  // namespace fuzzeeg
