#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "fuzzeeg/dataio.hpp"

namespace fuzzeeg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// Entry point shared by the executable and the tests; args exclude argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Recordings under the data root: Bonn text files with the class taken from
/// the file name prefix, or CSV files with the class taken from their parent
/// directory. Sorted by path.
std::vector<Recording> load_recordings(const RunConfig& cfg);

/// Frames of every recording, pooled by class tag.
FramePools pool_frames(const std::vector<Recording>& recordings, double window_seconds);

}  // namespace fuzzeeg::cli
