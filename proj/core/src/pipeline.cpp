#include "fuzzeeg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "fuzzeeg/csv.hpp"
#include "fuzzeeg/error.hpp"
#include "parallel.hpp"

namespace fuzzeeg {
namespace {

bool decomposable(std::span<const double> frame, const TqwtParams& tqwt) {
  if (frame.empty() || tqwt.max_levels(frame.size()) < tqwt.levels) return false;
  return std::all_of(frame.begin(), frame.end(), [](double v) { return std::isfinite(v); });
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

std::size_t FeatureMatrix::degenerate_count() const {
  return static_cast<std::size_t>(std::count(degenerate.begin(), degenerate.end(), std::uint8_t{1}));
}

std::vector<std::string> feature_column_names(int bands) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(bands) * kFeatureCount);
  for (int b = 0; b < bands; ++b)
    for (std::string_view id : feature_ids()) names.push_back("band" + std::to_string(b) + "_" + std::string(id));
  return names;
}

std::vector<double> frame_features(std::span<const double> frame, const TqwtParams& tqwt, const EntropyParams& ep,
                                   std::vector<std::uint8_t>* degenerate) {
  const SubBandSet sb = decompose(frame, tqwt);
  std::vector<double> row;
  row.reserve(sb.bands.size() * kFeatureCount);
  if (degenerate) degenerate->clear();
  for (const auto& band : sb.bands) {
    std::array<EntropyResult, kFeatureCount> feats{};
    bool too_short = false;
    try {
      feats = compute_features(band, ep);
    } catch (const InsufficientDataError&) {
      too_short = true;
    }
    // A band too short for one kernel still yields the kernels that fit.
    if (too_short) {
      for (std::size_t i = 0; i < kKernelCount; ++i) {
        const Kernel k = all_kernels()[i];
        try {
          if (k == Kernel::FuMeEn) {
            const MeasureEntropy me = fu_me_en(band, ep);
            feats[i] = {me.total, me.degenerate};
            feats[kKernelCount] = {me.local, me.degenerate};
            feats[kKernelCount + 1] = {me.global, me.degenerate};
          } else {
            feats[i] = compute_kernel(k, band, ep);
          }
        } catch (const InsufficientDataError&) {
          feats[i] = {0.0, true};
          if (k == Kernel::FuMeEn) feats[kKernelCount] = feats[kKernelCount + 1] = {0.0, true};
        }
      }
    }
    for (const EntropyResult& f : feats) {
      const bool bad = f.degenerate || !std::isfinite(f.value);
      row.push_back(bad ? 0.0 : f.value);
      if (degenerate) degenerate->push_back(bad ? 1 : 0);
    }
  }
  return row;
}

FeatureMatrix extract_features(std::span<const SignalFrame> frames, const TqwtParams& tqwt, const EntropyParams& ep,
                               int threads) {
  if (frames.empty()) throw EmptyInputError("extract_features: no frames");
  tqwt.validate();
  ep.validate();
  const std::size_t len = frames.front().samples.size();
  for (const auto& f : frames)
    if (f.samples.size() != len)
      throw ShapeError("extract_features: frame '" + f.frame_id + "' has length " + std::to_string(f.samples.size()) +
                       ", expected " + std::to_string(len));

  FeatureMatrix fm;
  const int bands = tqwt.levels + 1;
  fm.column_names = feature_column_names(bands);
  const std::size_t cols = fm.column_names.size();

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (decomposable(frames[i].samples, tqwt)) kept.push_back(i);
    else fm.skipped_frames.push_back(frames[i].frame_id);
  }

  std::vector<std::vector<double>> rows(kept.size());
  std::vector<std::vector<std::uint8_t>> flags(kept.size());
  detail::parallel_for(kept.size(), threads, [&](std::size_t k) {
    rows[k] = frame_features(frames[kept[k]].samples, tqwt, ep, &flags[k]);
  });

  fm.values.resize(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(cols));
  fm.degenerate.reserve(kept.size() * cols);
  for (std::size_t k = 0; k < kept.size(); ++k) {
    for (std::size_t c = 0; c < cols; ++c)
      fm.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = rows[k][c];
    fm.degenerate.insert(fm.degenerate.end(), flags[k].begin(), flags[k].end());
    fm.labels.push_back(frames[kept[k]].label);
    fm.frame_ids.push_back(frames[kept[k]].frame_id);
  }

  fm.metadata = describe(tqwt);
  for (const auto& [k, v] : describe(ep)) fm.metadata[k] = v;
  fm.metadata["frame_length"] = std::to_string(len);
  return fm;
}

NormStats fit_normalization(const Eigen::MatrixXd& values) {
  if (values.rows() == 0) throw EmptyInputError("fit_normalization: no rows");
  return {values.colwise().minCoeff().transpose(), values.colwise().maxCoeff().transpose()};
}

Eigen::MatrixXd apply_normalization(const NormStats& stats, const Eigen::MatrixXd& values) {
  if (stats.min.size() != values.cols() || stats.max.size() != values.cols())
    throw ShapeError("apply_normalization: stats have " + std::to_string(stats.min.size()) + " columns, data has " +
                     std::to_string(values.cols()));
  Eigen::MatrixXd out(values.rows(), values.cols());
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    const double lo = stats.min(c), span = stats.max(c) - stats.min(c);
    if (span > 0.0) out.col(c) = (2.0 * (values.col(c).array() - lo) / span - 1.0).matrix();
    else out.col(c).setZero();
  }
  return out;
}

FeatureMatrix normalize(const FeatureMatrix& fm) {
  FeatureMatrix out = fm;
  out.norm_stats = fit_normalization(fm.values);
  out.values = apply_normalization(out.norm_stats, fm.values);
  return out;
}

std::filesystem::path meta_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".meta");
  return p;
}

void write_feature_csv(const std::filesystem::path& path, const FeatureMatrix& fm) {
  if (fm.column_names.size() != fm.cols() || fm.labels.size() != fm.rows())
    throw ShapeError("write_feature_csv: names / labels do not match the matrix");
  CsvTable t;
  t.header = fm.column_names;
  t.header.push_back("label");
  t.rows.reserve(fm.rows());
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    std::vector<std::string> row;
    row.reserve(fm.cols() + 1);
    for (std::size_t c = 0; c < fm.cols(); ++c)
      row.push_back(format_double(fm.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))));
    row.push_back(std::to_string(fm.labels[r]));
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);

  std::ofstream meta(meta_path(path));
  if (!meta) throw ConfigError("cannot write " + meta_path(path).string());
  for (const auto& [k, v] : fm.metadata) meta << k << '=' << v << '\n';
  meta << "rows=" << fm.rows() << '\n' << "cols=" << fm.cols() << '\n';
  meta << "degenerate_cells=" << fm.degenerate_count() << '\n';
  meta << "skipped_frames=" << fm.skipped_frames.size() << '\n';
  for (const auto& id : fm.skipped_frames) meta << "skipped=" << id << '\n';
  if (!fm.frame_ids.empty())
    for (std::size_t r = 0; r < fm.rows(); ++r) meta << "frame=" << r << ':' << fm.frame_ids[r] << '\n';
  const std::size_t cols = fm.cols();
  for (std::size_t i = 0; i < fm.degenerate.size(); ++i)
    if (fm.degenerate[i]) meta << "degenerate=" << i / cols << ':' << fm.column_names[i % cols] << '\n';
}

FeatureMatrix read_feature_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  if (t.header.empty() || t.header.back() != "label")
    throw FormatError(path.string(), 1, "last column must be 'label'");
  FeatureMatrix fm;
  fm.column_names.assign(t.header.begin(), t.header.end() - 1);
  const std::size_t cols = fm.column_names.size();
  fm.values.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c <= cols; ++c) {
      const std::string& cell = t.rows[r][c];
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size() || cell.empty())
        throw FormatError(path.string(), r + 2, "non-numeric cell '" + cell + "'");
      if (c == cols) {
        if (v != std::floor(v)) throw FormatError(path.string(), r + 2, "label must be an integer");
        fm.labels.push_back(static_cast<int>(v));
      } else {
        fm.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
      }
    }
  }
  fm.degenerate.assign(fm.rows() * cols, 0);

  std::ifstream meta(meta_path(path));
  std::string line;
  while (meta && std::getline(meta, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    if (key == "skipped") {
      fm.skipped_frames.push_back(value);
    } else if (key == "frame") {
      fm.frame_ids.push_back(value.substr(value.find(':') + 1));
    } else if (key == "degenerate") {
      const auto colon = value.find(':');
      const std::size_t r = std::stoul(value.substr(0, colon));
      const auto it = std::find(fm.column_names.begin(), fm.column_names.end(), value.substr(colon + 1));
      if (r < fm.rows() && it != fm.column_names.end())
        fm.degenerate[r * cols + static_cast<std::size_t>(it - fm.column_names.begin())] = 1;
    } else if (key != "rows" && key != "cols" && key != "degenerate_cells" && key != "skipped_frames") {
      fm.metadata[key] = value;
    }
  }
  return fm;
}

std::map<std::string, std::string> describe(const TqwtParams& p) {
  return {{"tqwt.q", format_double(p.q)}, {"tqwt.r", format_double(p.r)}, {"tqwt.levels", std::to_string(p.levels)}};
}

std::map<std::string, std::string> describe(const EntropyParams& p) {
  std::map<std::string, std::string> d{
      {"entropy.m", std::to_string(p.m)},
      {"entropy.n", format_double(p.n)},
      {"entropy.r_frac", format_double(p.r_frac)},
      {"entropy.tau", std::to_string(p.tau)},
      {"entropy.alpha", format_double(p.alpha)},
      {"entropy.pm", std::to_string(p.pm)},
      {"entropy.delay", std::to_string(p.delay)},
      {"entropy.k_depth", std::to_string(p.k_depth)},
      {"entropy.k_seg", std::to_string(p.k_seg)},
      {"entropy.m_bins", std::to_string(p.m_bins)},
      {"entropy.shift", std::to_string(p.shift)},
      {"entropy.n_local", format_double(p.n_local)},
      {"entropy.r_local", format_double(p.r_local)},
      {"entropy.n_global", format_double(p.n_global)},
      {"entropy.r_global", format_double(p.r_global)},
      {"entropy.ifuen_drop", join_ints(p.ifuen_drop)},
  };
  if (p.r_abs) d["entropy.r_abs"] = format_double(*p.r_abs);
  return d;
}

}  // namespace fuzzeeg
