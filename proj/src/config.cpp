#include "dce/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dce/errors.hpp"

namespace dce {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"scenario", {"family", "tau", "temperatures"}},
      {"geometry", {"L0", "Lf", "R0", "eps"}},
      {"numerics",
       {"time_step", "t_start", "t_end", "spatial_points", "energy_tol", "moore_tol",
        "effective_tol", "moore_samples", "cross_check", "critical_tau", "critical_tau_lo",
        "critical_tau_hi", "critical_tau_tol"}},
      {"outputs", {"directory", "trajectories", "moore", "energy"}},
      {"sweep", {"taus"}},
      {"custom", {"left", "right"}},
  };
  return keys;
}

double to_double(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  double v;
  if (!(in >> v) || !(in >> std::ws).eof()) {
    throw ConfigError("'" + key + "' is not a number: '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("'" + key + "' is not a boolean: '" + text + "'");
}

std::vector<Segment> parse_segments(const std::string& text) {
  std::vector<Segment> out;
  std::istringstream all(text);
  std::string chunk;
  while (std::getline(all, chunk, ';')) {
    const std::vector<double> v = parse_list(chunk);
    if (v.empty()) continue;
    if (v.size() < 3) throw ConfigError("custom segment needs start, end and coefficients");
    Segment s;
    s.start = v[0];
    s.end = v[1];
    s.shape = Eigen::Map<const Eigen::VectorXd>(v.data() + 2, static_cast<Eigen::Index>(v.size() - 2));
    out.push_back(std::move(s));
  }
  return out;
}

void require_positive(const std::string& key, double v) {
  if (!(v > 0.0)) throw ConfigError("'" + key + "' must be positive");
}

RunConfig from_tree(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    const auto it = allowed_keys().find(section);
    if (it == allowed_keys().end()) throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) {
        throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      }
    }
  }
  auto get = [&](const std::string& path) { return tree.get_optional<std::string>(path); };
  auto num = [&](const std::string& path, double& dst) {
    if (auto s = get(path)) dst = to_double(path, *s);
  };
  auto flag = [&](const std::string& path, bool& dst) {
    if (auto s = get(path)) dst = to_bool(path, *s);
  };

  RunConfig c;
  if (auto s = get("scenario.family")) {
    c.geometry.family = parse_family(*s);
  } else {
    throw ConfigError("[scenario] family is required");
  }
  num("scenario.tau", c.tau);
  if (auto s = get("scenario.temperatures")) c.temperatures = parse_list(*s);
  num("geometry.L0", c.geometry.L0);
  if (auto s = get("geometry.Lf")) c.geometry.Lf = to_double("geometry.Lf", *s);
  num("geometry.R0", c.geometry.R0);
  num("geometry.eps", c.geometry.eps);

  Numerics& n = c.numerics;
  num("numerics.time_step", n.time_step);
  if (auto s = get("numerics.t_start")) n.t_start = to_double("numerics.t_start", *s);
  if (auto s = get("numerics.t_end")) n.t_end = to_double("numerics.t_end", *s);
  double points = n.spatial_points, samples = n.moore_samples;
  num("numerics.spatial_points", points);
  num("numerics.moore_samples", samples);
  n.spatial_points = static_cast<int>(points);
  n.moore_samples = static_cast<int>(samples);
  num("numerics.energy_tol", n.energy_tol);
  num("numerics.moore_tol", n.moore_tol);
  num("numerics.effective_tol", n.effective_tol);
  flag("numerics.cross_check", n.cross_check);
  flag("numerics.critical_tau", n.critical_tau);
  num("numerics.critical_tau_lo", n.critical_tau_lo);
  num("numerics.critical_tau_hi", n.critical_tau_hi);
  num("numerics.critical_tau_tol", n.critical_tau_tol);

  if (auto s = get("outputs.directory")) c.outputs.directory = *s;
  flag("outputs.trajectories", c.outputs.trajectories);
  flag("outputs.moore", c.outputs.moore);
  flag("outputs.energy", c.outputs.energy);

  if (auto s = get("sweep.taus")) c.sweep_taus = parse_list(*s);
  if (auto s = get("custom.left")) c.custom_left = parse_segments(*s);
  if (auto s = get("custom.right")) c.custom_right = parse_segments(*s);

  require_positive("tau", c.tau);
  require_positive("time_step", n.time_step);
  require_positive("energy_tol", n.energy_tol);
  require_positive("moore_tol", n.moore_tol);
  require_positive("effective_tol", n.effective_tol);
  require_positive("critical_tau_tol", n.critical_tau_tol);
  if (n.spatial_points < 3) throw ConfigError("spatial_points must be at least 3");
  if (n.moore_samples < 2) throw ConfigError("moore_samples must be at least 2");
  if (n.t_start && n.t_end && !(*n.t_end > *n.t_start)) {
    throw ConfigError("t_end must exceed t_start");
  }
  if (c.temperatures.empty()) throw ConfigError("at least one temperature is required");
  for (double T : c.temperatures) {
    if (!(T >= 0.0)) throw ConfigError("temperatures must be non-negative");
  }
  for (double t : c.sweep_taus) require_positive("sweep taus", t);
  if (c.geometry.family != Family::custom && (!c.custom_left.empty() || !c.custom_right.empty())) {
    throw ConfigError("[custom] segments need family = custom");
  }
  if (c.explicit_segments() && (c.numerics.critical_tau || !c.sweep_taus.empty())) {
    throw ConfigError("critical_tau and sweeps vary tau, which explicit [custom] segments ignore");
  }
  // Validates the geometry against the family rules.
  try {
    (void)c.reference();
  } catch (const GeometryError& e) {
    throw ConfigError(std::string("invalid geometry: ") + e.what());
  }
  return c;
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> out;
  std::string item;
  while (in >> item) out.push_back(to_double("list", item));
  return out;
}

TrajectoryPair RunConfig::reference(double duration) const {
  if (!explicit_segments()) return make_reference(geometry, duration);
  auto path = [](const std::vector<Segment>& segs, double rest) {
    return segs.empty() ? MirrorPath(rest) : MirrorPath::from_segments(segs);
  };
  TrajectoryPair pair = make_pair(path(custom_left, geometry.L0), path(custom_right, geometry.R0));
  if (pair.tau == 0.0) pair.tau = duration;
  return pair;
}

RunConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return from_tree(tree);
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace dce
