#include "levy/config.hpp"

#include "levy/paths.hpp"
#include "levy/rng.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace levy {
namespace {

using nlohmann::json;

// Tracks which keys of an object were read; leftovers are typos.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string where) : node_(node), where_(std::move(where)) {
    if (!node_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json& get(const std::string& key) {
    seen_.insert(key);
    if (!node_.contains(key)) throw ConfigError(where_ + ": missing key '" + key + "'");
    return node_.at(key);
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key) ? &node_.at(key) : nullptr;
  }

  double number(const std::string& key) {
    const auto& v = get(key);
    if (!v.is_number()) throw ConfigError(where_ + "." + key + ": expected a number");
    return v.get<double>();
  }

  long integer(const std::string& key) {
    const auto& v = get(key);
    if (!v.is_number_integer()) throw ConfigError(where_ + "." + key + ": expected an integer");
    return v.get<long>();
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : node_.items())
      if (!seen_.contains(key)) throw ConfigError(where_ + ": unknown key '" + key + "'");
  }

 private:
  const json& node_;
  std::string where_;
  std::set<std::string> seen_;
};

Vector to_vector(const json& node, const std::string& where) {
  if (!node.is_array()) throw ConfigError(where + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number()) throw ConfigError(where + ": expected an array of numbers");
    v[static_cast<Eigen::Index>(i)] = node[i].get<double>();
  }
  return v;
}

Matrix to_matrix(const json& node, Eigen::Index dim, const std::string& where) {
  if (!node.is_array() || static_cast<Eigen::Index>(node.size()) != dim)
    throw ConfigError(where + ": expected " + std::to_string(dim) + " rows");
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Vector row = to_vector(node[static_cast<std::size_t>(i)], where);
    if (row.size() != dim) throw ConfigError(where + ": row length must equal dim");
    m.row(i) = row.transpose();
  }
  return m;
}

void check_dim(const Vector& v, Eigen::Index dim, const std::string& where) {
  if (v.size() != dim)
    throw ConfigError(where + ": dimension mismatch (expected " + std::to_string(dim) + ", got " +
                      std::to_string(v.size()) + ")");
}

LevyMeasure parse_levy(const json& node, Eigen::Index dim) {
  ObjectReader r(node, "characteristics.levy");
  const auto& kind_node = r.get("kind");
  if (!kind_node.is_string()) throw ConfigError("characteristics.levy.kind: expected a string");
  const auto kind = kind_node.get<std::string>();
  if (kind == "zero") {
    r.finish();
    return LevyMeasure::zero(dim);
  }
  if (kind == "atomic") {
    const auto& atoms_node = r.get("atoms");
    if (!atoms_node.is_array()) throw ConfigError("characteristics.levy.atoms: expected an array");
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < atoms_node.size(); ++i) {
      const std::string where = "characteristics.levy.atoms[" + std::to_string(i) + "]";
      ObjectReader a(atoms_node[i], where);
      Atom atom{to_vector(a.get("point"), where + ".point"), a.number("mass")};
      check_dim(atom.point, dim, where + ".point");
      a.finish();
      atoms.push_back(std::move(atom));
    }
    r.finish();
    return LevyMeasure::atomic(dim, std::move(atoms));
  }
  if (kind == "radial_shell") {
    RadialShellParams p;
    p.dim = dim;
    p.scale = r.number("scale");
    p.exponent = r.number("exponent");
    if (r.has("outer_mass")) p.outer_mass = r.number("outer_mass");
    if (r.has("outer_radius")) p.outer_radius = r.number("outer_radius");
    if (const auto* dirs = r.find("directions")) {
      if (!dirs->is_array()) throw ConfigError("characteristics.levy.directions: expected an array");
      for (const auto& d : *dirs) {
        p.directions.push_back(to_vector(d, "characteristics.levy.directions"));
        check_dim(p.directions.back(), dim, "characteristics.levy.directions");
      }
    }
    if (const auto* w = r.find("direction_weights")) {
      const Vector weights = to_vector(*w, "characteristics.levy.direction_weights");
      p.direction_weights.assign(weights.data(), weights.data() + weights.size());
    }
    r.finish();
    return LevyMeasure::radial_shell(std::move(p));
  }
  throw ConfigError("characteristics.levy.kind: unknown kind '" + kind + "'");
}

}  // namespace

Characteristics ExperimentConfig::characteristics() const {
  return Characteristics(gamma, covariance, nu, disk);
}

std::vector<double> ExperimentConfig::grid() const { return uniform_grid(horizon, grid_steps); }

std::vector<Vector> ExperimentConfig::functionals() const {
  if (!verification.explicit_functionals.empty()) return verification.explicit_functionals;
  Rng rng = StreamFactory(seed).derive(0, StreamComponent::kFunctionals);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> out;
  for (int i = 0; i < verification.functional_count; ++i) {
    Vector a(dim());
    for (Eigen::Index k = 0; k < dim(); ++k) a[k] = normal(rng);
    out.push_back(a);
  }
  return out;
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : tree.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config(const nlohmann::json& tree) {
  try {
    ExperimentConfig c;
    c.tree = tree;
    ObjectReader root(tree, "config");

    ObjectReader space(root.get("space"), "space");
    const long dim = space.integer("dim");
    if (dim < 1) throw ConfigError("space.dim: must be >= 1");
    if (const auto* w = space.find("weights")) {
      const Vector weights = to_vector(*w, "space.weights");
      check_dim(weights, dim, "space.weights");
      c.space = SpaceModel(weights);
    } else {
      c.space = SpaceModel(dim);
    }
    space.finish();

    ObjectReader disk(root.get("disk"), "disk");
    const Vector radii = to_vector(disk.get("radii"), "disk.radii");
    check_dim(radii, dim, "disk.radii");
    c.disk = BanachDisk(radii);
    disk.finish();

    ObjectReader ch(root.get("characteristics"), "characteristics");
    c.gamma = Vector::Zero(dim);
    if (const auto* g = ch.find("gamma")) {
      c.gamma = to_vector(*g, "characteristics.gamma");
      check_dim(c.gamma, dim, "characteristics.gamma");
    }
    c.covariance = Matrix::Zero(dim, dim);
    if (const auto* q = ch.find("Q")) c.covariance = to_matrix(*q, dim, "characteristics.Q");
    c.nu = parse_levy(ch.get("levy"), dim);
    ch.finish();
    // Validates symmetry and positive semidefiniteness.
    (void)c.characteristics();

    ObjectReader time(root.get("time"), "time");
    c.horizon = time.number("horizon");
    if (!(c.horizon > 0.0)) throw ConfigError("time.horizon: must be positive");
    const long steps = time.integer("grid_steps");
    if (steps < 1 || steps > 10000000) throw ConfigError("time.grid_steps: must be >= 1");
    c.grid_steps = static_cast<int>(steps);
    time.finish();

    ObjectReader sim(root.get("simulation"), "simulation");
    c.replicas = sim.integer("replicas");
    if (c.replicas < 1) throw ConfigError("simulation.replicas: must be >= 1");
    const auto& seed = sim.get("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long>() >= 0))
      throw ConfigError("simulation.seed: expected a nonnegative integer");
    c.seed = seed.get<std::uint64_t>();
    const long cutoff = sim.integer("shell_cutoff");
    if (cutoff < 1 || cutoff > 1000000) throw ConfigError("simulation.shell_cutoff: must be >= 1");
    c.shell_cutoff = static_cast<int>(cutoff);
    sim.finish();

    if (const auto* v = root.find("verification")) {
      ObjectReader ver(*v, "verification");
      auto& vc = c.verification;
      if (const auto* f = ver.find("functionals")) {
        if (f->is_number_integer()) {
          vc.functional_count = f->get<int>();
          if (vc.functional_count < 1) throw ConfigError("verification.functionals: must be >= 1");
        } else if (f->is_array()) {
          for (const auto& a : *f) {
            vc.explicit_functionals.push_back(to_vector(a, "verification.functionals"));
            check_dim(vc.explicit_functionals.back(), dim, "verification.functionals");
          }
          if (vc.explicit_functionals.empty())
            throw ConfigError("verification.functionals: empty list");
          vc.functional_count = static_cast<int>(vc.explicit_functionals.size());
        } else {
          throw ConfigError("verification.functionals: expected a count or a list of vectors");
        }
      }
      if (ver.has("epsilon")) vc.epsilon = ver.number("epsilon");
      if (!(vc.epsilon > 0.0 && vc.epsilon < 1.0))
        throw ConfigError("verification.epsilon: must lie in (0, 1)");
      if (const auto* levels = ver.find("truncation_levels")) {
        if (!levels->is_array() || levels->empty())
          throw ConfigError("verification.truncation_levels: expected a nonempty integer list");
        vc.truncation_levels.clear();
        for (const auto& l : *levels) {
          if (!l.is_number_integer() || l.get<long>() < 1)
            throw ConfigError("verification.truncation_levels: levels must be integers >= 1");
          vc.truncation_levels.push_back(l.get<int>());
        }
      }
      if (ver.has("tolerance_z")) vc.tolerance_z = ver.number("tolerance_z");
      if (!(vc.tolerance_z > 0.0)) throw ConfigError("verification.tolerance_z: must be positive");
      if (ver.has("mc_samples")) vc.mc_samples = ver.integer("mc_samples");
      if (vc.mc_samples < 100) throw ConfigError("verification.mc_samples: must be >= 100");
      ver.finish();
    }
    root.finish();
    return c;
  } catch (const ConfigError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  nlohmann::json tree;
  try {
    tree = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(tree);
}

ExperimentConfig with_overrides(const ExperimentConfig& config, std::optional<std::uint64_t> seed,
                                std::optional<long> replicas) {
  nlohmann::json tree = config.tree;
  if (seed) tree["simulation"]["seed"] = *seed;
  if (replicas) tree["simulation"]["replicas"] = *replicas;
  return parse_config(tree);
}

}  // namespace levy
