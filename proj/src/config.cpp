#include "mtqite/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "mtqite/error.hpp"

namespace mtqite {

using nlohmann::json;

std::string_view to_string(ModelKind k) noexcept {
  switch (k) {
    case ModelKind::tfim:
      return "tfim";
    case ModelKind::xxz:
      return "xxz";
    case ModelKind::hubbard:
      return "hubbard";
    case ModelKind::molecule:
      return "molecule";
    case ModelKind::pauli_sum:
      return "pauli_sum";
  }
  return "?";
}

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::qite:
      return "qite";
    case Algorithm::mtqite:
      return "mtqite";
    case Algorithm::both:
      return "both";
  }
  return "?";
}

namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Typed access with key-path error messages.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("must be an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j_.items()) {
      if (!ok.count(k)) throw ConfigError("unknown key '" + where(k) + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& raw(const char* key) const {
    if (!has(key)) throw ConfigError("missing key '" + where(key) + "'");
    return j_.at(key);
  }
  Reader sub(const char* key) const { return Reader(raw(key), where(key)); }

  std::string str(const char* key) const {
    const auto& v = raw(key);
    if (!v.is_string()) throw ConfigError("'" + where(key) + "' must be a string");
    return v.get<std::string>();
  }
  std::string str(const char* key, const std::string& def) const { return has(key) ? str(key) : def; }

  double num(const char* key) const {
    const auto& v = raw(key);
    if (!v.is_number()) throw ConfigError("'" + where(key) + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError("'" + where(key) + "' must be finite");
    return d;
  }
  double num(const char* key, double def) const { return has(key) ? num(key) : def; }

  long long integer(const char* key) const {
    const auto& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError("'" + where(key) + "' must be an integer");
    return v.get<long long>();
  }
  long long integer(const char* key, long long def) const { return has(key) ? integer(key) : def; }

  bool boolean(const char* key, bool def) const {
    if (!has(key)) return def;
    const auto& v = raw(key);
    if (!v.is_boolean()) throw ConfigError("'" + where(key) + "' must be true or false");
    return v.get<bool>();
  }

  std::vector<std::vector<int>> int_lists(const char* key) const {
    const auto& v = raw(key);
    std::vector<std::vector<int>> out;
    if (!v.is_array()) throw ConfigError("'" + where(key) + "' must be a list of lists");
    for (const auto& g : v) {
      if (!g.is_array()) throw ConfigError("'" + where(key) + "' must be a list of lists");
      auto& row = out.emplace_back();
      for (const auto& x : g) {
        if (!x.is_number_integer()) throw ConfigError("'" + where(key) + "' entries must be integers");
        row.push_back(x.get<int>());
      }
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("'" + (path_.empty() ? std::string("<root>") : path_) + "' " + msg);
  }
  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
};

ModelSpec parse_model(const Reader& r, const std::filesystem::path& base) {
  ModelSpec m;
  const auto type = r.str("type");
  if (type == "tfim") {
    r.allow({"type", "n", "h_over_j"});
    m.kind = ModelKind::tfim;
    m.n = static_cast<int>(r.integer("n"));
    m.h_over_j = r.num("h_over_j", 1.0);
  } else if (type == "xxz") {
    r.allow({"type", "n", "j"});
    m.kind = ModelKind::xxz;
    m.n = static_cast<int>(r.integer("n"));
    m.j = r.num("j", 1.0);
  } else if (type == "hubbard") {
    r.allow({"type", "sites", "u"});
    m.kind = ModelKind::hubbard;
    m.n = static_cast<int>(r.integer("sites"));
    m.u = r.num("u", 4.0);
  } else if (type == "molecule") {
    r.allow({"type", "fcidump"});
    m.kind = ModelKind::molecule;
    std::filesystem::path p = r.str("fcidump");
    if (p.is_relative() && !base.empty()) p = base / p;
    if (!std::filesystem::exists(p)) throw ConfigError("FCIDUMP file not found: " + p.string());
    m.fcidump = p;
  } else if (type == "pauli_sum") {
    r.allow({"type", "terms"});
    m.kind = ModelKind::pauli_sum;
    const auto& terms = r.raw("terms");
    if (!terms.is_array() || terms.empty()) r.fail("terms must be a non-empty list of [coeff, label]");
    for (const auto& t : terms) {
      if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_string()) {
        r.fail("terms must be a non-empty list of [coeff, label]");
      }
      m.terms.emplace_back(t[0].get<double>(), t[1].get<std::string>());
    }
    m.n = static_cast<int>(PauliString::from_label(m.terms.front().second).n_qubits());
  } else {
    throw ConfigError("unknown model type '" + type + "'");
  }
  if (m.kind != ModelKind::molecule && m.n < 1) r.fail("needs a positive size");
  return m;
}

PartitionSpec parse_partition(const Reader& r) {
  const auto type = r.str("type");
  if (type == "trivial") {
    r.allow({"type"});
    return partition_spec::Trivial{};
  }
  if (type == "explicit") {
    r.allow({"type", "groups"});
    return partition_spec::Explicit{r.int_lists("groups")};
  }
  if (type == "even_odd") {
    r.allow({"type"});
    return partition_spec::EvenOdd{};
  }
  if (type == "blocks") {
    r.allow({"type", "count", "merge"});
    partition_spec::Blocks b;
    b.count = static_cast<int>(r.integer("count"));
    if (r.has("merge")) b.merge = r.int_lists("merge");
    return b;
  }
  if (type == "greedy_commuting") {
    r.allow({"type", "count"});
    return partition_spec::GreedyCommuting{static_cast<int>(r.integer("count"))};
  }
  throw ConfigError("unknown partition type '" + type + "'");
}

TimeGrid parse_grid(const Reader& r) {
  r.allow({"l", "t_max", "include_zero", "values"});
  try {
    if (r.has("values")) {
      const auto& v = r.raw("values");
      if (!v.is_array()) r.fail("values must be a list of numbers");
      std::vector<double> vals;
      for (const auto& x : v) {
        if (!x.is_number()) r.fail("values must be a list of numbers");
        vals.push_back(x.get<double>());
      }
      return TimeGrid::from_values(std::move(vals));
    }
    return TimeGrid::uniform(static_cast<int>(r.integer("l", 12)), r.num("t_max", 0.5),
                             r.boolean("include_zero", true));
  } catch (const InputError& e) {
    r.fail(e.what());
  }
}

InitialSpec parse_initial(const Reader& r) {
  const auto type = r.str("type");
  if (type == "bitstring") {
    r.allow({"type", "bits"});
    return initial_spec::Bitstring{r.str("bits")};
  }
  if (type == "hartree_fock") {
    r.allow({"type"});
    return initial_spec::HartreeFock{};
  }
  if (type == "symmetric_batch") {
    r.allow({"type", "count", "x_prob", "h_prob", "projection_beta", "inversion_sector"});
    initial_spec::SymmetricBatch b;
    b.count = static_cast<int>(r.integer("count", 1));
    b.x_prob = r.num("x_prob", 0.5);
    b.h_prob = r.num("h_prob", 0.5);
    b.projection_beta = r.num("projection_beta", 10.0);
    b.inversion_sector = static_cast<int>(r.integer("inversion_sector", 0));
    if (b.inversion_sector != 0 && b.inversion_sector != 1 && b.inversion_sector != -1) {
      r.fail("inversion_sector must be -1, 0 or 1");
    }
    if (b.count < 1) r.fail("count must be at least 1");
    if (b.x_prob < 0 || b.x_prob > 1 || b.h_prob < 0 || b.h_prob > 1) r.fail("probabilities must lie in [0, 1]");
    if (b.projection_beta < 0) r.fail("projection_beta must be non-negative");
    return b;
  }
  throw ConfigError("unknown initial_state type '" + type + "'");
}

}  // namespace

std::string model_tag(const ModelSpec& m) {
  switch (m.kind) {
    case ModelKind::tfim:
      return "tfim_n" + std::to_string(m.n) + "_h" + fmt_num(m.h_over_j);
    case ModelKind::xxz:
      return "xxz_n" + std::to_string(m.n) + "_J" + fmt_num(m.j);
    case ModelKind::hubbard:
      return "hubbard_L" + std::to_string(m.n) + "_U" + fmt_num(m.u);
    case ModelKind::molecule:
      return m.fcidump.stem().string();
    case ModelKind::pauli_sum:
      return "pauli_n" + std::to_string(m.n);
  }
  return "?";
}

std::filesystem::path ExperimentConfig::csv_path() const {
  std::filesystem::path dir = output_dir;
  if (dir.empty()) {
    const char* env = std::getenv("MTQITE_OUTPUT_DIR");
    dir = (env != nullptr && *env != '\0') ? std::filesystem::path(env) : std::filesystem::path("results");
  }
  return dir / (csv_name.empty() ? name + ".csv" : csv_name);
}

std::filesystem::path ExperimentConfig::json_path() const {
  return csv_path().parent_path() / (json_name.empty() ? name + ".json" : json_name);
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  const Reader r(doc, "");
  r.allow({"name", "model", "partition", "domain_size", "basis", "symmetry_reduction", "formulation", "grid",
           "trotter_steps", "qite_trotter_steps", "algorithm", "initial_state", "seed", "rcond", "drop_threshold", "term_order",
           "apply_mode", "use_symmetry_links", "output"});
  ExperimentConfig c;
  c.source = doc;
  c.base_dir = base_dir;
  c.name = r.str("name", "experiment");
  if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos) {
    throw ConfigError("'name' must be a non-empty file stem");
  }
  c.model = parse_model(r.sub("model"), base_dir);
  if (r.has("partition")) c.partition = parse_partition(r.sub("partition"));
  c.domain_size = static_cast<int>(r.integer("domain_size", 0));
  if (c.domain_size < 0) throw ConfigError("'domain_size' must be >= 0");

  const bool chem = c.model.kind == ModelKind::molecule;
  const auto basis = r.str("basis", chem ? "uccgsd" : "pauli");
  if (basis == "pauli") {
    c.basis = BasisKind::pauli;
  } else if (basis == "uccgsd") {
    c.basis = BasisKind::uccgsd;
  } else {
    throw ConfigError("'basis' must be pauli or uccgsd");
  }
  if (c.basis == BasisKind::uccgsd && !(chem || c.model.kind == ModelKind::hubbard)) {
    throw ConfigError("'basis' uccgsd needs a fermionic model");
  }
  c.symmetry_reduction = r.boolean("symmetry_reduction", !chem);
  const auto form =
      r.str("formulation", c.basis == BasisKind::uccgsd ? "antihermitian_order2" : "pauli_order2");
  try {
    c.formulation = formulation_from_string(form);
  } catch (const InputError& e) {
    throw ConfigError(std::string("'formulation': ") + e.what());
  }
  if (c.basis == BasisKind::uccgsd && c.formulation != Formulation::antihermitian_order2) {
    throw ConfigError("'formulation' must be antihermitian_order2 for operator pools");
  }
  if (r.has("grid")) c.grid = parse_grid(r.sub("grid"));
  c.trotter_steps = static_cast<int>(r.integer("trotter_steps", 10));
  if (c.trotter_steps < 0) throw ConfigError("'trotter_steps' must be >= 0");
  c.qite_trotter_steps = static_cast<int>(r.integer("qite_trotter_steps", -1));
  if (r.has("qite_trotter_steps") && c.qite_trotter_steps < 0) throw ConfigError("'qite_trotter_steps' must be >= 0");

  const auto alg = r.str("algorithm", "both");
  if (alg == "qite") {
    c.algorithm = Algorithm::qite;
  } else if (alg == "mtqite") {
    c.algorithm = Algorithm::mtqite;
  } else if (alg == "both") {
    c.algorithm = Algorithm::both;
  } else {
    throw ConfigError("'algorithm' must be qite, mtqite or both");
  }

  if (r.has("initial_state")) {
    c.initial = parse_initial(r.sub("initial_state"));
  } else if (chem) {
    c.initial = initial_spec::HartreeFock{};
  } else {
    throw ConfigError("missing key 'initial_state'");
  }
  if (std::holds_alternative<initial_spec::HartreeFock>(c.initial) && !chem) {
    throw ConfigError("'initial_state' hartree_fock needs a molecule model");
  }

  const long long seed = r.integer("seed", 1);
  if (seed < 0) throw ConfigError("'seed' must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.rcond = r.num("rcond", kDefaultRcond);
  c.drop_threshold = r.num("drop_threshold", kDefaultDropThreshold);
  if (c.rcond < 0 || c.drop_threshold < 0) throw ConfigError("'rcond' and 'drop_threshold' must be >= 0");

  const auto order = r.str("term_order", "first_term_first");
  if (order == "first_term_first") {
    c.term_order = TermOrder::first_term_first;
  } else if (order == "last_term_first") {
    c.term_order = TermOrder::last_term_first;
  } else {
    throw ConfigError("'term_order' must be first_term_first or last_term_first");
  }
  const auto mode = r.str("apply_mode", "rotation_product");
  if (mode == "rotation_product") {
    c.apply_mode = ApplyMode::rotation_product;
  } else if (mode == "exact_generator") {
    c.apply_mode = ApplyMode::exact_generator;
  } else {
    throw ConfigError("'apply_mode' must be rotation_product or exact_generator");
  }
  c.use_symmetry_links = r.boolean("use_symmetry_links", true);

  if (r.has("output")) {
    const auto o = r.sub("output");
    o.allow({"dir", "csv", "json"});
    if (o.has("dir")) c.output_dir = o.str("dir");
    c.csv_name = o.str("csv", "");
    c.json_name = o.str("json", "");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

}  // namespace mtqite
