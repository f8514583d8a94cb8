#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fuzzeeg {

// Sampling rate of the Bonn University segments (4097 samples, 23.6 s).
inline constexpr double kBonnSamplingRate = 173.61;

struct Recording {
  std::vector<double> samples;  // microvolts
  double fs = 0.0;              // Hz
  std::string source_id;
  std::string class_tag;        // "A".."E" for Bonn, user-defined otherwise
};

struct SignalFrame {
  std::vector<double> samples;
  double fs = 0.0;
  int label = -1;  // -1 until assemble_case assigns a group
  std::string frame_id;
  std::string source_id;
  std::string class_tag;
  std::size_t index = 0;  // position of the frame inside its recording
};

struct ClassGroup {
  int label = 0;
  std::set<std::string> tags;
};

struct CaseSpec {
  std::string name;
  std::vector<ClassGroup> class_groups;

  // Throws ConfigError unless there are >= 2 non-empty, disjoint groups.
  void validate() const;
};

using FramePools = std::map<std::string, std::vector<SignalFrame>>;

/// Bonn filename prefix to set letter: Z->A, O->B, N->C, F->D, S->E.
std::optional<std::string> bonn_class_from_filename(const std::filesystem::path& path);

/// Reads a one-value-per-line Bonn segment. The class tag comes from
/// `class_tag` when given, otherwise from the filename prefix (empty if the
/// prefix is not a Bonn one).
Recording load_bonn_segment(const std::filesystem::path& path,
                            std::optional<std::string> class_tag = std::nullopt);

/// Reads one column (0-based `channel`) of a comma-separated numeric file.
/// A first row containing any non-numeric cell is treated as a header.
Recording load_csv_multichannel(const std::filesystem::path& path, double fs, std::size_t channel,
                                std::optional<std::string> class_tag = std::nullopt);

std::size_t frame_length(double seconds, double fs);

/// Non-overlapping frames of floor(seconds * fs) samples; the trailing
/// remainder is dropped. A window longer than the recording yields no frames.
std::vector<SignalFrame> window(const Recording& rec, double seconds);

/// Case names: groups of single-letter tags joined by '-',
/// e.g. "A-E", "ABCD-E", "AB-CD-E". Labels are assigned left to right.
CaseSpec parse_case(const std::string& name);

/// The six Bonn classification cases.
const std::vector<CaseSpec>& bonn_cases();
std::optional<CaseSpec> find_bonn_case(const std::string& name);

/// Labels every frame of the referenced pools with its group index. Output is
/// sorted by (source_id, frame index).
std::vector<SignalFrame> assemble_case(const FramePools& pools, const CaseSpec& spec);

}  // namespace fuzzeeg
