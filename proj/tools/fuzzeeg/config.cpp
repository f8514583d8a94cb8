#include "config.hpp"

#include <cstdlib>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fuzzeeg/csv.hpp"
#include "fuzzeeg/error.hpp"
#include "fuzzeeg/pipeline.hpp"

namespace fuzzeeg::cli {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"data", {"root", "format", "fs", "channel", "window_seconds", "case"}},
    {"cases", {}},
    {"tqwt", {"q", "r", "levels"}},
    {"entropy",
     {"m", "n", "r_frac", "r_abs", "tau", "alpha", "pm", "delay", "k_depth", "k_seg", "m_bins", "shift", "n_local",
      "r_local", "n_global", "r_global", "ifuen_drop"}},
    {"autoencoder", {"enabled", "layer_sizes", "epochs", "batch_size", "rho", "epsilon"}},
    {"classifier", {"kind", "mf_per_input", "k_neighbors", "search", "epochs", "learning_rate", "decay"}},
    {"swarm",
     {"n_pop", "max_iter", "c1", "c2", "w", "velocity_limit", "w1", "k1", "bs_w", "ga_fraction", "mutation_rate",
      "mutation_sigma", "c_min", "c_max", "f", "l"}},
    {"experiment", {"folds", "repeats", "seed", "positive_label"}},
    {"bench", {"kernels", "length", "repeats", "sweep"}},
    {"output", {"dir", "threads"}},
};

template <typename T>
T parse_value(const std::string& section, const std::string& key, const std::string& text) {
  std::istringstream ss(text);
  T v{};
  ss >> v;
  if (!ss || !(ss >> std::ws).eof())
    throw ConfigError("config: [" + section + "] " + key + " = '" + text + "' is not a valid value");
  return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& section, const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(parse_value<T>(section, key, item.substr(b, e - b + 1)));
  }
  return out;
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "off" || text == "no") return false;
  throw ConfigError("config: [" + section + "] " + key + " = '" + text + "' is not a boolean");
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < v.size(); ++i) ss << (i ? "," : "") << v[i];
  return ss.str();
}

const char* activation_id(Activation a) {
  return a == Activation::Relu ? "relu" : a == Activation::Tanh ? "tanh" : "linear";
}

}  // namespace

CaseSpec RunConfig::resolve_case() const {
  if (auto c = find_bonn_case(case_name)) return *c;
  const auto it = user_cases.find(case_name);
  if (it == user_cases.end())
    throw ConfigError("unknown case '" + case_name + "': not a Bonn case and not defined under [cases]");
  CaseSpec spec = parse_case(it->second);
  spec.name = case_name;
  return spec;
}

RunConfig load_config(const std::optional<std::filesystem::path>& path) {
  RunConfig c;
  pt::ptree tree;
  if (path) {
    if (!std::filesystem::exists(*path)) throw ConfigError("config file not found: " + path->string());
    try {
      pt::read_ini(path->string(), tree);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigError("config: " + std::string(e.what()));
    }
  }

  for (const auto& [section, body] : tree) {
    const auto known = kKnownKeys.find(section);
    if (known == kKnownKeys.end()) throw ConfigError("config: unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      const std::string v = value.get_value<std::string>();
      if (section == "cases") {
        c.user_cases[key] = v;
        continue;
      }
      if (!known->second.count(key)) throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
      auto num = [&](auto& field) { field = parse_value<std::decay_t<decltype(field)>>(section, key, v); };

      if (section == "data") {
        if (key == "root") c.data_root = v;
        else if (key == "format") {
          if (v == "bonn") c.format = DataFormat::Bonn;
          else if (v == "csv") c.format = DataFormat::Csv;
          else throw ConfigError("config: data.format must be 'bonn' or 'csv'");
        } else if (key == "fs") num(c.fs);
        else if (key == "channel") num(c.channel);
        else if (key == "window_seconds") num(c.window_seconds);
        else if (key == "case") c.case_name = v;
      } else if (section == "tqwt") {
        if (key == "q") num(c.tqwt.q);
        else if (key == "r") num(c.tqwt.r);
        else num(c.tqwt.levels);
      } else if (section == "entropy") {
        EntropyParams& e = c.entropy;
        if (key == "m") num(e.m);
        else if (key == "n") num(e.n);
        else if (key == "r_frac") num(e.r_frac);
        else if (key == "r_abs") e.r_abs = parse_value<double>(section, key, v);
        else if (key == "tau") num(e.tau);
        else if (key == "alpha") num(e.alpha);
        else if (key == "pm") num(e.pm);
        else if (key == "delay") num(e.delay);
        else if (key == "k_depth") num(e.k_depth);
        else if (key == "k_seg") num(e.k_seg);
        else if (key == "m_bins") num(e.m_bins);
        else if (key == "shift") num(e.shift);
        else if (key == "n_local") num(e.n_local);
        else if (key == "r_local") num(e.r_local);
        else if (key == "n_global") num(e.n_global);
        else if (key == "r_global") num(e.r_global);
        else if (key == "ifuen_drop") e.ifuen_drop = parse_list<int>(section, key, v);
      } else if (section == "autoencoder") {
        AeConfig& a = c.experiment.autoencoder;
        if (key == "enabled") c.experiment.use_autoencoder = parse_bool(section, key, v);
        else if (key == "layer_sizes") {
          a.layer_sizes = parse_list<int>(section, key, v);
          if (a.layer_sizes.size() >= 2) {
            a.activations.assign(a.layer_sizes.size() - 1, Activation::Relu);
            a.activations.back() = Activation::Tanh;
          }
        } else if (key == "epochs") num(a.epochs);
        else if (key == "batch_size") num(a.batch_size);
        else if (key == "rho") num(a.rho);
        else if (key == "epsilon") num(a.epsilon);
      } else if (section == "classifier") {
        ClassifierSpec& s = c.experiment.classifier;
        if (key == "kind") {
          const auto k = classifier_from_id(v);
          if (!k) throw ConfigError("config: unknown classifier '" + v + "'");
          s.kind = *k;
        } else if (key == "mf_per_input") num(s.mf_per_input);
        else if (key == "k_neighbors") num(s.k_neighbors);
        else if (key == "search") {
          if (v == "all") s.search = AnfisSearch::AllParameters;
          else if (v == "premise") s.search = AnfisSearch::PremiseOnly;
          else throw ConfigError("config: classifier.search must be 'all' or 'premise'");
        } else if (key == "epochs") num(s.hybrid.epochs);
        else if (key == "learning_rate") num(s.hybrid.learning_rate);
        else if (key == "decay") num(s.hybrid.decay);
      } else if (section == "swarm") {
        SwarmConfig& s = c.experiment.classifier.swarm;
        if (key == "n_pop") num(s.n_pop);
        else if (key == "max_iter") num(s.max_iter);
        else if (key == "c1") num(s.pso.c1);
        else if (key == "c2") num(s.pso.c2);
        else if (key == "w") num(s.pso.w);
        else if (key == "velocity_limit") num(s.pso.velocity_limit);
        else if (key == "w1") num(s.bs.w1);
        else if (key == "k1") num(s.bs.k1);
        else if (key == "bs_w") num(s.bs.w);
        else if (key == "ga_fraction") num(s.bs.ga_fraction);
        else if (key == "mutation_rate") num(s.bs.mutation_rate);
        else if (key == "mutation_sigma") num(s.bs.mutation_sigma);
        else if (key == "c_min") num(s.goa.c_min);
        else if (key == "c_max") num(s.goa.c_max);
        else if (key == "f") num(s.goa.f);
        else if (key == "l") num(s.goa.l);
      } else if (section == "experiment") {
        if (key == "folds") num(c.experiment.folds);
        else if (key == "repeats") num(c.experiment.repeats);
        else if (key == "seed") num(c.experiment.seed);
        else if (key == "positive_label") c.experiment.positive_label = parse_value<int>(section, key, v);
      } else if (section == "bench") {
        if (key == "kernels") {
          std::istringstream ss(v);
          std::string id;
          while (std::getline(ss, id, ',')) {
            id.erase(0, id.find_first_not_of(" \t"));
            id.erase(id.find_last_not_of(" \t") + 1);
            if (id.empty()) continue;
            if (!kernel_from_id(id)) throw ConfigError("config: unknown kernel '" + id + "' in [bench]");
            c.bench_kernels.push_back(id);
          }
        } else if (key == "length") num(c.bench_length);
        else if (key == "repeats") num(c.bench_repeats);
        else if (key == "sweep") c.bench_sweep = parse_list<std::size_t>(section, key, v);
      } else if (section == "output") {
        if (key == "dir") c.output_dir = v;
        else if (key == "threads") num(c.threads);
      }
    }
  }

  if (const char* root = std::getenv(kDataRootEnv); root && *root) c.data_root = root;

  try {
    c.tqwt.validate();
    c.entropy.validate();
    c.experiment.autoencoder.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(c.fs > 0.0)) throw ConfigError("config: data.fs must be positive");
  if (!(c.window_seconds > 0.0)) throw ConfigError("config: data.window_seconds must be positive");
  if (c.experiment.folds < 2) throw ConfigError("config: experiment.folds must be >= 2");
  if (c.experiment.repeats < 1) throw ConfigError("config: experiment.repeats must be >= 1");
  if (c.experiment.classifier.mf_per_input != 2 && c.experiment.classifier.mf_per_input != 3)
    throw ConfigError("config: classifier.mf_per_input must be 2 or 3");
  return c;
}

std::string RunConfig::to_ini() const {
  std::ostringstream o;
  o << "[data]\nroot = " << data_root.string() << "\nformat = " << (format == DataFormat::Bonn ? "bonn" : "csv")
    << "\nfs = " << format_double(fs) << "\nchannel = " << channel
    << "\nwindow_seconds = " << format_double(window_seconds) << "\ncase = " << case_name << "\n\n";
  if (!user_cases.empty()) {
    o << "[cases]\n";
    for (const auto& [k, v] : user_cases) o << k << " = " << v << '\n';
    o << '\n';
  }
  o << "[tqwt]\n";
  for (const auto& [k, v] : describe(tqwt)) o << k.substr(k.find('.') + 1) << " = " << v << '\n';
  o << "\n[entropy]\n";
  for (const auto& [k, v] : describe(entropy)) {
    std::string val = v;
    for (char& ch : val)
      if (ch == ';') ch = ',';
    o << k.substr(k.find('.') + 1) << " = " << val << '\n';
  }
  const AeConfig& a = experiment.autoencoder;
  o << "\n[autoencoder]\nenabled = " << (experiment.use_autoencoder ? "true" : "false")
    << "\nlayer_sizes = " << join(a.layer_sizes) << "\nepochs = " << a.epochs << "\nbatch_size = " << a.batch_size
    << "\nrho = " << format_double(a.rho) << "\nepsilon = " << format_double(a.epsilon) << "\n; activations =";
  for (Activation act : a.activations) o << ' ' << activation_id(act);
  const ClassifierSpec& s = experiment.classifier;
  o << "\n\n[classifier]\nkind = " << classifier_id(s.kind) << "\nmf_per_input = " << s.mf_per_input
    << "\nk_neighbors = " << s.k_neighbors << "\nsearch = " << (s.search == AnfisSearch::PremiseOnly ? "premise" : "all")
    << "\nepochs = " << s.hybrid.epochs << "\nlearning_rate = " << format_double(s.hybrid.learning_rate)
    << "\ndecay = " << format_double(s.hybrid.decay) << "\n\n";
  const SwarmConfig& w = s.swarm;
  o << "[swarm]\nn_pop = " << w.n_pop << "\nmax_iter = " << w.max_iter << "\nc1 = " << format_double(w.pso.c1)
    << "\nc2 = " << format_double(w.pso.c2) << "\nw = " << format_double(w.pso.w)
    << "\nvelocity_limit = " << format_double(w.pso.velocity_limit) << "\nw1 = " << format_double(w.bs.w1)
    << "\nk1 = " << format_double(w.bs.k1) << "\nbs_w = " << format_double(w.bs.w)
    << "\nga_fraction = " << format_double(w.bs.ga_fraction) << "\nmutation_rate = " << format_double(w.bs.mutation_rate)
    << "\nmutation_sigma = " << format_double(w.bs.mutation_sigma) << "\nc_min = " << format_double(w.goa.c_min)
    << "\nc_max = " << format_double(w.goa.c_max) << "\nf = " << format_double(w.goa.f)
    << "\nl = " << format_double(w.goa.l) << "\n\n";
  o << "[experiment]\nfolds = " << experiment.folds << "\nrepeats = " << experiment.repeats
    << "\nseed = " << experiment.seed << '\n';
  if (experiment.positive_label) o << "positive_label = " << *experiment.positive_label << '\n';
  o << "\n[bench]\nkernels = " << join(bench_kernels) << "\nlength = " << bench_length
    << "\nrepeats = " << bench_repeats << "\nsweep = " << join(bench_sweep) << "\n\n";
  o << "[output]\ndir = " << output_dir.string() << "\nthreads = " << threads << '\n';
  return o.str();
}

}  // namespace fuzzeeg::cli
