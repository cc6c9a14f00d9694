#include "repsim/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/json_parser.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "repsim/io.hpp"

namespace repsim::config {

namespace {

namespace pt = boost::property_tree;

const std::set<std::string> kGeneratorKeys{"users", "objects", "sparsity", "seed",
                                           "r_max", "sigma_min", "sigma_max", "mode"};
const std::set<std::string> kAlgorithmKeys{"list", "beta", "epsilon", "delta", "max_iterations"};
const std::set<std::string> kSweepKeys{"type",         "sigma_max_grid", "modes",   "r_grid",
                                       "sigma_min_rule", "realizations", "workers", "relevant_fraction"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void check_keys(const Tree& tree) {
  for (const auto& [section, body] : tree) {
    const std::set<std::string>* allowed = nullptr;
    if (section == "generator") allowed = &kGeneratorKeys;
    else if (section == "algorithms") allowed = &kAlgorithmKeys;
    else if (section == "sweep") allowed = &kSweepKeys;
    else throw ConfigError(section, "unknown section");
    for (const auto& [key, value] : body) {
      if (!allowed->contains(key)) throw ConfigError(section + "." + key, "unknown key");
    }
  }
}

std::optional<std::string> lookup(const Tree& tree, const std::string& path) {
  if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return trim(*v);
  return std::nullopt;
}

double real_at(const Tree& tree, const std::string& path, double fallback) {
  const auto text = lookup(tree, path);
  if (!text) return fallback;
  const auto v = io::parse_double(*text);
  if (!v) throw ConfigError(path, "expected a real number, got '" + *text + "'");
  return *v;
}

template <typename Int>
Int int_at(const Tree& tree, const std::string& path, Int fallback) {
  const auto text = lookup(tree, path);
  if (!text) return fallback;
  Int v{};
  const auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), v);
  if (ec != std::errc{} || ptr != text->data() + text->size()) {
    throw ConfigError(path, "expected an integer, got '" + *text + "'");
  }
  return v;
}

template <typename Fn>
auto with_field(const std::string& field, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) out += (k ? "," : "") + items[k];
  return out;
}

}  // namespace

Tree load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  Tree tree;
  try {
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
      pt::read_json(in, tree);
    } else {
      pt::read_ini(in, tree);
    }
  } catch (const pt::file_parser_error& e) {
    throw ConfigError(path + ":" + std::to_string(e.line()), e.message());
  }
  check_keys(tree);
  return tree;
}

Tree parse_ini(const std::string& text) {
  std::istringstream in(text);
  Tree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::file_parser_error& e) {
    throw ConfigError("<string>:" + std::to_string(e.line()), e.message());
  }
  check_keys(tree);
  return tree;
}

std::vector<double> parse_real_grid(const std::string& text, const std::string& field) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(trim(part));
    if (parts.size() != 3) throw ConfigError(field, "range must be start:stop:step");
    const auto start = io::parse_double(parts[0]);
    const auto stop = io::parse_double(parts[1]);
    const auto step = io::parse_double(parts[2]);
    if (!start || !stop || !step || !(*step > 0.0)) throw ConfigError(field, "bad range '" + text + "'");
    for (long k = 0;; ++k) {
      const double v = *start + static_cast<double>(k) * *step;
      if (v > *stop + 1e-9 * *step) break;
      grid.push_back(v);
    }
  } else {
    for (const auto& item : split_list(text)) {
      const auto v = io::parse_double(item);
      if (!v) throw ConfigError(field, "not a number: '" + item + "'");
      grid.push_back(*v);
    }
  }
  if (grid.empty()) throw ConfigError(field, "grid must not be empty");
  return grid;
}

std::vector<int> parse_int_grid(const std::string& text, const std::string& field) {
  auto to_int = [&](const std::string& s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ConfigError(field, "not an integer: '" + s + "'");
    return v;
  };
  std::vector<int> grid;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(trim(part));
    if (parts.size() != 2 && parts.size() != 3) throw ConfigError(field, "range must be start:stop[:step]");
    const int start = to_int(parts[0]);
    const int stop = to_int(parts[1]);
    const int step = parts.size() == 3 ? to_int(parts[2]) : 1;
    if (step <= 0) throw ConfigError(field, "range step must be positive");
    for (int v = start; v <= stop; v += step) grid.push_back(v);
  } else {
    for (const auto& item : split_list(text)) grid.push_back(to_int(item));
  }
  if (grid.empty()) throw ConfigError(field, "grid must not be empty");
  return grid;
}

GeneratorConfig generator_from(const Tree& tree) {
  GeneratorConfig c;
  c.num_users = int_at<std::size_t>(tree, "generator.users", c.num_users);
  c.num_objects = int_at<std::size_t>(tree, "generator.objects", c.num_objects);
  c.sparsity = real_at(tree, "generator.sparsity", c.sparsity);
  c.seed = int_at<std::uint64_t>(tree, "generator.seed", c.seed);
  c.r_max = int_at<int>(tree, "generator.r_max", c.r_max);
  c.sigma_min = real_at(tree, "generator.sigma_min", c.sigma_min);
  c.sigma_max = real_at(tree, "generator.sigma_max", c.sigma_max);
  if (auto mode = lookup(tree, "generator.mode")) {
    c.mode = with_field("generator.mode", [&] { return parse_scale_mode(*mode); });
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("generator." + e.field(), std::string(e.what()).substr(e.field().size() + 2));
  }
  return c;
}

std::vector<AlgorithmConfig> algorithms_from(const Tree& tree) {
  AlgorithmConfig shared;
  shared.beta = real_at(tree, "algorithms.beta", shared.beta);
  shared.epsilon = real_at(tree, "algorithms.epsilon", shared.epsilon);
  shared.convergence_threshold = real_at(tree, "algorithms.delta", shared.convergence_threshold);
  shared.max_iterations = int_at<int>(tree, "algorithms.max_iterations", shared.max_iterations);
  with_field("algorithms", [&] {
    shared.validate();
    return 0;
  });

  const auto list = lookup(tree, "algorithms.list").value_or("aa,mizz,yzlm,dkvd");
  std::vector<AlgorithmConfig> out;
  for (const auto& name : split_list(list)) {
    auto c = shared;
    c.kind = with_field("algorithms.list", [&] { return parse_algorithm_kind(name); });
    out.push_back(c);
  }
  if (out.empty()) throw ConfigError("algorithms.list", "at least one algorithm is required");
  return out;
}

ExperimentSpec experiment_from(const Tree& tree) {
  ExperimentSpec spec;
  spec.base = generator_from(tree);
  spec.algorithms = algorithms_from(tree);
  spec.realizations = int_at<int>(tree, "sweep.realizations", 100);
  spec.workers = int_at<int>(tree, "sweep.workers", 1);
  spec.relevant_fraction = real_at(tree, "sweep.relevant_fraction", kDefaultRelevantFraction);

  const auto type = lookup(tree, "sweep.type").value_or("sigma_max");
  if (type == "sigma_max") {
    SigmaMaxSweep s;
    s.r_max = spec.base.r_max;
    s.sigma_min = spec.base.sigma_min;
    const auto grid = lookup(tree, "sweep.sigma_max_grid");
    s.sigma_max_grid = grid ? parse_real_grid(*grid, "sweep.sigma_max_grid") : default_sigma_max_grid();
    if (const auto modes = lookup(tree, "sweep.modes")) {
      s.modes.clear();
      for (const auto& m : split_list(*modes)) {
        s.modes.push_back(with_field("sweep.modes", [&] { return parse_scale_mode(m); }));
      }
    }
    spec.sweep = s;
  } else if (type == "resolution") {
    ResolutionSweep s;
    const auto grid = lookup(tree, "sweep.r_grid");
    s.r_grid = grid ? parse_int_grid(*grid, "sweep.r_grid") : default_r_grid();
    if (const auto rule = lookup(tree, "sweep.sigma_min_rule")) {
      s.sigma_min_rule = with_field("sweep.sigma_min_rule", [&] { return parse_sigma_min_rule(*rule); });
    }
    spec.sweep = s;
  } else {
    throw ConfigError("sweep.type", "expected sigma_max or resolution, got '" + type + "'");
  }
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("sweep." + e.field(), std::string(e.what()).substr(e.field().size() + 2));
  }
  return spec;
}

Tree to_tree(const GeneratorConfig& c) {
  Tree tree;
  tree.put("generator.users", std::to_string(c.num_users));
  tree.put("generator.objects", std::to_string(c.num_objects));
  tree.put("generator.sparsity", io::format_double(c.sparsity));
  tree.put("generator.seed", std::to_string(c.seed));
  tree.put("generator.r_max", std::to_string(c.r_max));
  tree.put("generator.sigma_min", io::format_double(c.sigma_min));
  tree.put("generator.sigma_max", io::format_double(c.sigma_max));
  tree.put("generator.mode", to_string(c.mode));
  return tree;
}

Tree to_tree(const ExperimentSpec& spec) {
  Tree tree = to_tree(spec.base);
  std::vector<std::string> names;
  for (const auto& a : spec.algorithms) names.emplace_back(to_string(a.kind));
  const auto& first = spec.algorithms.front();
  tree.put("algorithms.list", join(names));
  tree.put("algorithms.beta", io::format_double(first.beta));
  tree.put("algorithms.epsilon", io::format_double(first.epsilon));
  tree.put("algorithms.delta", io::format_double(first.convergence_threshold));
  tree.put("algorithms.max_iterations", std::to_string(first.max_iterations));

  if (const auto* s = std::get_if<SigmaMaxSweep>(&spec.sweep)) {
    tree.put("generator.r_max", std::to_string(s->r_max));
    tree.put("generator.sigma_min", io::format_double(s->sigma_min));
    tree.put("sweep.type", "sigma_max");
    std::vector<std::string> grid, modes;
    for (double v : s->sigma_max_grid) grid.push_back(io::format_double(v));
    for (auto m : s->modes) modes.emplace_back(to_string(m));
    tree.put("sweep.sigma_max_grid", join(grid));
    tree.put("sweep.modes", join(modes));
  } else {
    const auto& r = std::get<ResolutionSweep>(spec.sweep);
    tree.put("sweep.type", "resolution");
    std::vector<std::string> grid;
    for (int v : r.r_grid) grid.push_back(std::to_string(v));
    tree.put("sweep.r_grid", join(grid));
    tree.put("sweep.sigma_min_rule", to_string(r.sigma_min_rule));
  }
  tree.put("sweep.realizations", std::to_string(spec.realizations));
  tree.put("sweep.workers", std::to_string(spec.workers));
  tree.put("sweep.relevant_fraction", io::format_double(spec.relevant_fraction));
  return tree;
}

void write_json(const std::string& path, const Tree& tree) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  pt::write_json(out, tree);
}

}  // namespace repsim::config
