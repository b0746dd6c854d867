#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ddsl/errors.hpp"
#include "ddsl/harness.hpp"

namespace ddsl {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"simulation",
       {"case", "L", "T", "N", "dx", "dv", "U0", "epsilon0", "integrator", "reconstruction",
        "domain", "seed", "snapshot_every"}},
      {"field", {"kind", "amplitude"}},
      {"sigma", {"kinds", "amplitudes"}},
      {"initial", {"kind", "alpha"}},
      {"experiment",
       {"samples", "levels", "error_window", "node_budget", "repetitions", "threads"}},
  };
  return s;
}

const std::vector<std::string>& required_keys() {
  static const std::vector<std::string> r = {
      "simulation.L",  "simulation.T",        "simulation.N",          "simulation.dx",
      "simulation.dv", "simulation.epsilon0", "simulation.integrator", "initial.kind"};
  return r;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", key, v));
  }
}

unsigned long long to_count(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    const auto n = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not a nonnegative integer", key, v));
  }
}

template <class F>
auto wrap_parse(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(fmt::format("{}: {}", key, e.what()));
  }
}

void apply_overrides(pt::ptree& tree, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError(fmt::format("override '{}' is not of the form section.key=value", o));
    }
    const std::string key = o.substr(0, eq);
    if (key.find('.') == std::string::npos) {
      throw ConfigError(fmt::format("override key '{}' needs a section prefix", key));
    }
    tree.put(key, o.substr(eq + 1));
  }
}

SimulationConfig from_tree(const pt::ptree& tree) {
  std::vector<std::string> unknown;
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) {
      unknown.push_back(section);
      continue;
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) unknown.push_back(section + "." + key);
    }
  }
  if (!unknown.empty()) {
    throw ConfigError(fmt::format("unknown config keys: {}", fmt::join(unknown, ", ")));
  }
  std::vector<std::string> missing;
  for (const auto& k : required_keys()) {
    if (!tree.get_optional<std::string>(k)) missing.push_back(k);
  }
  const std::string case_str = tree.get<std::string>("simulation.case", "I");
  if (parse_field_case(case_str) == FieldCase::I && !tree.get_optional<std::string>("field.kind")) {
    missing.push_back("field.kind");
  }
  if (!missing.empty()) {
    throw ConfigError(fmt::format("missing required config keys: {}", fmt::join(missing, ", ")));
  }

  auto str = [&](const std::string& k, const std::string& def = "") {
    return tree.get<std::string>(k, def);
  };
  auto num = [&](const std::string& k, double def) {
    const auto v = tree.get_optional<std::string>(k);
    return v ? to_double(k, *v) : def;
  };
  auto count = [&](const std::string& k, unsigned long long def) {
    const auto v = tree.get_optional<std::string>(k);
    return v ? to_count(k, *v) : def;
  };

  SimulationConfig c;
  c.field_case = parse_field_case(case_str);
  c.L = num("simulation.L", c.L);
  c.T = num("simulation.T", c.T);
  c.N = count("simulation.N", c.N);
  c.dx = num("simulation.dx", c.dx);
  c.dv = num("simulation.dv", c.dv);
  const std::string u0 = str("simulation.U0", "auto");
  c.U0 = u0 == "auto" ? 0.0 : to_double("simulation.U0", u0);
  c.epsilon0 = num("simulation.epsilon0", c.epsilon0);
  c.integrator = wrap_parse("simulation.integrator",
                            [&] { return parse_integrator(str("simulation.integrator")); });
  c.reconstruction = wrap_parse("simulation.reconstruction", [&] {
    return parse_reconstruction(str("simulation.reconstruction", "linear"));
  });
  c.domain = parse_domain_policy(str("simulation.domain", "adaptive"));
  c.seed = count("simulation.seed", c.seed);
  c.snapshot_every = count("simulation.snapshot_every", 0);

  if (c.field_case == FieldCase::I) {
    c.field_kind = wrap_parse("field.kind", [&] { return parse_field_kind(str("field.kind")); });
    c.field_amplitude = num("field.amplitude", 0.0);
  }

  const auto kinds = split_list(str("sigma.kinds"));
  const auto amps = split_list(str("sigma.amplitudes"));
  if (kinds.size() != amps.size()) {
    throw ConfigError(fmt::format("sigma.kinds has {} entries but sigma.amplitudes has {}",
                                  kinds.size(), amps.size()));
  }
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    SigmaSpec s;
    s.kind = wrap_parse("sigma.kinds", [&] { return parse_sigma_kind(kinds[i]); });
    s.amplitude = to_double("sigma.amplitudes", amps[i]);
    c.sigma.push_back(s);
  }

  c.initial = parse_initial_kind(str("initial.kind"));
  if (c.initial == InitialKind::Custom) {
    throw ConfigError("initial.kind = custom is only available through the library API");
  }
  c.alpha = num("initial.alpha", c.alpha);

  c.samples = count("experiment.samples", c.samples);
  c.levels = count("experiment.levels", c.levels);
  c.error_window = num("experiment.error_window", c.error_window);
  c.node_budget = num("experiment.node_budget", c.node_budget);
  c.repetitions = count("experiment.repetitions", c.repetitions);
  c.threads = static_cast<unsigned>(count("experiment.threads", c.threads));
  c.validate();
  return c;
}

}  // namespace

SimulationConfig parse_config(std::istream& in, const std::vector<std::string>& overrides) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("malformed config: {}", e.what()));
  }
  apply_overrides(tree, overrides);
  return from_tree(tree);
}

SimulationConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in, overrides);
}

void save_config(std::ostream& out, const SimulationConfig& c) {
  fmt::print(out, "[simulation]\n");
  fmt::print(out, "case = {}\n", to_string(c.field_case));
  fmt::print(out, "L = {:.17g}\nT = {:.17g}\nN = {}\n", c.L, c.T, c.N);
  fmt::print(out, "dx = {:.17g}\ndv = {:.17g}\n", c.dx, c.dv);
  if (c.U0 > 0.0) {
    fmt::print(out, "U0 = {:.17g}\n", c.U0);
  } else {
    fmt::print(out, "U0 = auto\n");
  }
  fmt::print(out, "epsilon0 = {:.17g}\n", c.epsilon0);
  fmt::print(out, "integrator = {}\nreconstruction = {}\ndomain = {}\n", to_string(c.integrator),
             to_string(c.reconstruction), to_string(c.domain));
  fmt::print(out, "seed = {}\nsnapshot_every = {}\n\n", c.seed, c.snapshot_every);

  if (c.field_case == FieldCase::I) {
    fmt::print(out, "[field]\nkind = {}\namplitude = {:.17g}\n\n", to_string(c.field_kind),
               c.field_amplitude);
  }
  std::vector<std::string> kinds, amps;
  for (const auto& s : c.sigma) {
    kinds.emplace_back(to_string(s.kind));
    amps.push_back(fmt::format("{:.17g}", s.amplitude));
  }
  fmt::print(out, "[sigma]\nkinds = {}\namplitudes = {}\n\n", fmt::join(kinds, ","),
             fmt::join(amps, ","));
  fmt::print(out, "[initial]\nkind = {}\nalpha = {:.17g}\n\n", to_string(c.initial), c.alpha);
  fmt::print(out,
             "[experiment]\nsamples = {}\nlevels = {}\nerror_window = {:.17g}\n"
             "node_budget = {:.17g}\nrepetitions = {}\nthreads = {}\n",
             c.samples, c.levels, c.error_window, c.node_budget, c.repetitions, c.threads);
}

void save_config(const std::string& path, const SimulationConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path);
  save_config(out, cfg);
}

std::string config_text(const SimulationConfig& cfg) {
  std::ostringstream s;
  save_config(s, cfg);
  return s.str();
}

std::uint64_t config_hash(const SimulationConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : config_text(cfg)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace ddsl
