#include "fuzzeeg/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fuzzeeg/error.hpp"

namespace fuzzeeg {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view token) {
  token = trim(token);
  if (token.empty()) return std::nullopt;
  if (token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    cells.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return in;
}

}  // namespace

void CaseSpec::validate() const {
  if (class_groups.size() < 2) throw ConfigError("case '" + name + "' needs at least two groups");
  std::set<std::string> seen;
  for (const auto& group : class_groups) {
    if (group.tags.empty()) throw ConfigError("case '" + name + "' has an empty group");
    for (const auto& tag : group.tags) {
      if (!seen.insert(tag).second)
        throw ConfigError("case '" + name + "' uses tag '" + tag + "' in more than one group");
    }
  }
}

std::optional<std::string> bonn_class_from_filename(const std::filesystem::path& path) {
  const auto stem = path.filename().string();
  if (stem.empty()) return std::nullopt;
  switch (stem.front()) {
    case 'Z': case 'z': return "A";
    case 'O': case 'o': return "B";
    case 'N': case 'n': return "C";
    case 'F': case 'f': return "D";
    case 'S': case 's': return "E";
    default: return std::nullopt;
  }
}

Recording load_bonn_segment(const std::filesystem::path& path,
                            std::optional<std::string> class_tag) {
  auto in = open_or_throw(path);
  Recording rec;
  rec.fs = kBonnSamplingRate;
  rec.source_id = path.stem().string();
  rec.class_tag = class_tag ? *class_tag : bonn_class_from_filename(path).value_or("");

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string token;
    while (tokens >> token) {
      const auto value = parse_number(token);
      if (!value) throw FormatError(path.string(), line_no, "not a number: '" + token + "'");
      rec.samples.push_back(*value);
    }
  }
  if (rec.samples.empty()) throw EmptyInputError(path.string() + ": no samples");
  return rec;
}

Recording load_csv_multichannel(const std::filesystem::path& path, double fs, std::size_t channel,
                                std::optional<std::string> class_tag) {
  if (!(fs > 0.0)) throw ParameterError("sampling rate must be positive");
  auto in = open_or_throw(path);
  Recording rec;
  rec.fs = fs;
  rec.source_id = path.stem().string();
  rec.class_tag = class_tag.value_or("");

  std::string line;
  std::size_t line_no = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (first_row) {
      first_row = false;
      const bool header = std::any_of(cells.begin(), cells.end(),
                                      [](auto c) { return !parse_number(c).has_value(); });
      if (channel >= cells.size())
        throw ParameterError("channel " + std::to_string(channel) + " out of range (" +
                             std::to_string(cells.size()) + " columns)");
      if (header) continue;
    }
    if (channel >= cells.size())
      throw FormatError(path.string(), line_no, "row has only " + std::to_string(cells.size()) + " columns");
    const auto value = parse_number(cells[channel]);
    if (!value)
      throw FormatError(path.string(), line_no, "non-numeric cell '" + std::string(cells[channel]) + "'");
    rec.samples.push_back(*value);
  }
  if (rec.samples.empty()) throw EmptyInputError(path.string() + ": no samples");
  return rec;
}

std::size_t frame_length(double seconds, double fs) {
  if (!(seconds > 0.0) || !(fs > 0.0)) throw ParameterError("window seconds and fs must be positive");
  const auto len = static_cast<std::size_t>(std::floor(seconds * fs));
  if (len < 2) throw ParameterError("window shorter than two samples");
  return len;
}

std::vector<SignalFrame> window(const Recording& rec, double seconds) {
  const std::size_t len = frame_length(seconds, rec.fs);
  std::vector<SignalFrame> frames;
  const std::size_t count = rec.samples.size() / len;
  frames.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    SignalFrame frame;
    const auto begin = rec.samples.begin() + static_cast<std::ptrdiff_t>(k * len);
    frame.samples.assign(begin, begin + static_cast<std::ptrdiff_t>(len));
    frame.fs = rec.fs;
    frame.source_id = rec.source_id;
    frame.class_tag = rec.class_tag;
    frame.index = k;
    frame.frame_id = rec.source_id + "#" + std::to_string(k);
    frames.push_back(std::move(frame));
  }
  return frames;
}

CaseSpec parse_case(const std::string& name) {
  CaseSpec spec;
  spec.name = name;
  std::stringstream ss(name);
  std::string group;
  int label = 0;
  while (std::getline(ss, group, '-')) {
    ClassGroup g;
    g.label = label++;
    for (char c : group) g.tags.insert(std::string(1, c));
    spec.class_groups.push_back(std::move(g));
  }
  spec.validate();
  return spec;
}

const std::vector<CaseSpec>& bonn_cases() {
  static const std::vector<CaseSpec> cases = [] {
    std::vector<CaseSpec> out;
    for (const char* name : {"A-E", "B-E", "C-E", "D-E", "ABCD-E", "AB-CD-E"})
      out.push_back(parse_case(name));
    return out;
  }();
  return cases;
}

std::optional<CaseSpec> find_bonn_case(const std::string& name) {
  for (const auto& c : bonn_cases())
    if (c.name == name) return c;
  return std::nullopt;
}

std::vector<SignalFrame> assemble_case(const FramePools& pools, const CaseSpec& spec) {
  spec.validate();
  std::vector<SignalFrame> out;
  for (const auto& group : spec.class_groups) {
    for (const auto& tag : group.tags) {
      const auto it = pools.find(tag);
      if (it == pools.end())
        throw ConfigError("case '" + spec.name + "' references class '" + tag + "' with no frames");
      for (auto frame : it->second) {
        frame.label = group.label;
        out.push_back(std::move(frame));
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const SignalFrame& a, const SignalFrame& b) {
    if (a.source_id != b.source_id) return a.source_id < b.source_id;
    return a.index < b.index;
  });
  return out;
}

}  // namespace fuzzeeg
