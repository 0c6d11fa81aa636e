#include "mtqite/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <random>
#include <sstream>

#include "mtqite/error.hpp"

namespace mtqite {

using nlohmann::json;

// ---- preparation -------------------------------------------------------------

PreparedExperiment prepare(const ExperimentConfig& config) {
  PreparedExperiment p;
  p.config = config;
  const auto& m = config.model;
  switch (m.kind) {
    case ModelKind::tfim:
      p.hamiltonian = build_tfim(m.n, m.h_over_j);
      break;
    case ModelKind::xxz:
      p.hamiltonian = build_xxz(m.n, m.j);
      break;
    case ModelKind::hubbard:
      p.hamiltonian = build_hubbard(m.n, m.u);
      break;
    case ModelKind::molecule:
      p.molecule = parse_fcidump(m.fcidump);
      p.hamiltonian = p.molecule->qubit_hamiltonian();
      break;
    case ModelKind::pauli_sum: {
      std::vector<PauliTerm> terms;
      for (const auto& [c, label] : m.terms) terms.push_back({c, PauliString::from_label(label)});
      p.hamiltonian = ObservableSum(m.n, std::move(terms));
      if (!p.hamiltonian.is_hermitian()) throw ConfigError("pauli_sum model is not hermitian");
      break;
    }
  }
  const int n = p.hamiltonian.n_qubits();
  if (n > kDenseQubitCap) {
    throw ConfigError("model has " + std::to_string(n) + " qubits; the dense oracles stop at " +
                      std::to_string(kDenseQubitCap));
  }

  p.group.n_qubits = n;
  if (config.symmetry_reduction) p.group = find_z2_symmetries(p.hamiltonian);

  PartitionOptions popts;
  popts.domain_size = config.domain_size;
  if (config.basis == BasisKind::uccgsd) {
    p.pool = build_uccgsd_pool(n);
    popts.pool = &p.pool;
  } else {
    // The greedy partition scores fragments against the full-register basis.
    if (std::holds_alternative<partition_spec::GreedyCommuting>(config.partition)) {
      p.pool = pauli_pool(reduce_basis(widen_domain(0, 0, n), p.group, n));
      popts.pool = &p.pool;
    }
  }
  popts.detect_inversion_links = config.use_symmetry_links;
  p.partition = make_partition(p.hamiltonian, config.partition, popts);

  for (std::size_t t = 0; t < p.partition.size(); ++t) {
    if (config.basis == BasisKind::uccgsd) {
      p.bases.push_back(QiteBasis::pool(p.pool));
    } else {
      auto strings = reduce_basis(p.partition.domains[t], p.group, n);
      if (strings.empty()) throw ConfigError("reduced basis of term " + std::to_string(t) + " is empty");
      p.bases.push_back(QiteBasis::pauli(std::move(strings)));
    }
  }
  p.ground = exact_ground(p.hamiltonian);
  return p;
}

// ---- initial states ----------------------------------------------------------

std::vector<StateVector> generate_initial_batch(const initial_spec::SymmetricBatch& spec, std::uint64_t seed,
                                                const SymmetryGroup& group, int n_qubits) {
  if (spec.count < 1) throw ConfigError("batch count must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const auto elements = group.empty() ? std::vector<PauliString>{} : group.elements();

  std::optional<ExactPropagator> projector;
  if (!group.empty() && spec.projection_beta > 0.0) {
    ObservableSum aux(n_qubits);
    for (const auto& e : elements) {
      if (!e.is_identity()) aux -= ObservableSum(e);
    }
    projector.emplace(aux);
  }

  std::vector<StateVector> out;
  int rejected = 0;
  const double r2 = 1.0 / std::sqrt(2.0);
  while (static_cast<int>(out.size()) < spec.count) {
    std::vector<cplx> amps{1.0};
    for (int q = 0; q < n_qubits; ++q) {
      cplx a0 = 1.0, a1 = 0.0;
      const double ux = u01(rng);
      const double uh = u01(rng);
      if (ux < spec.x_prob) std::swap(a0, a1);
      if (uh < spec.h_prob) {
        const cplx b0 = r2 * (a0 + a1);
        const cplx b1 = r2 * (a0 - a1);
        a0 = b0;
        a1 = b1;
      }
      std::vector<cplx> next(amps.size() * 2);
      for (std::size_t i = 0; i < amps.size(); ++i) {
        next[i] = amps[i] * a0;
        next[i + amps.size()] = amps[i] * a1;
      }
      amps = std::move(next);
    }
    bool ok = true;
    if (spec.inversion_sector != 0) {
      const auto perm = inversion_permutation(n_qubits);
      std::vector<cplx> sym(amps.size());
      for (std::size_t i = 0; i < amps.size(); ++i) {
        sym[i] = 0.5 * (amps[i] + static_cast<double>(spec.inversion_sector) * amps[permute_mask(i, perm)]);
      }
      double weight = 0.0;
      for (const auto& a : sym) weight += std::norm(a);
      ok = weight > 1e-6;
      amps = std::move(sym);
    }
    if (!ok) {
      if (++rejected > kMaxResamples) {
        throw ConfigError("symmetric batch: more than " + std::to_string(kMaxResamples) +
                          " rejected samples; the target sector is unreachable with these probabilities");
      }
      continue;
    }
    StateVector s = StateVector::from_amplitudes(n_qubits, std::move(amps));

    if (!elements.empty()) {
      // Weight of the target sector: <P> with P the group average.
      double weight = 0.0;
      for (const auto& e : elements) weight += s.expectation(e).real();
      weight /= static_cast<double>(elements.size());
      ok = weight > 1e-6;
      if (ok && projector) {
        s = projector->evolve(s, spec.projection_beta);
        for (const auto& e : elements) ok = ok && std::abs(s.expectation(e).real() - 1.0) <= 1e-8;
      }
    }
    if (ok && spec.inversion_sector != 0) {
      ok = std::abs(inversion_expectation(s).real() - spec.inversion_sector) <= 1e-8;
    }
    if (!ok) {
      if (++rejected > kMaxResamples) {
        throw ConfigError("symmetric batch: more than " + std::to_string(kMaxResamples) +
                          " rejected samples; the target sector is unreachable with these probabilities");
      }
      continue;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<StateVector> initial_states(const PreparedExperiment& p) {
  const int n = p.hamiltonian.n_qubits();
  const auto& init = p.config.initial;
  if (const auto* b = std::get_if<initial_spec::Bitstring>(&init)) {
    if (static_cast<int>(b->bits.size()) != n) {
      throw ConfigError("initial bitstring has " + std::to_string(b->bits.size()) + " bits, model has " +
                        std::to_string(n) + " qubits");
    }
    try {
      return {StateVector::from_bits(b->bits)};
    } catch (const InputError& e) {
      throw ConfigError(std::string("initial bitstring: ") + e.what());
    }
  }
  if (std::holds_alternative<initial_spec::HartreeFock>(init)) {
    if (!p.molecule) throw ConfigError("hartree_fock initial state needs a molecule");
    std::string bits(static_cast<std::size_t>(n), '0');
    for (int k = 0; k < p.molecule->n_electrons && k < n; ++k) bits[static_cast<std::size_t>(k)] = '1';
    return {StateVector::from_bits(bits)};
  }
  return generate_initial_batch(std::get<initial_spec::SymmetricBatch>(init), p.config.seed, p.group, n);
}

// ---- output ------------------------------------------------------------------

const char* const kCsvHeader =
    "run_id,algorithm,model,step,dt,energy,exact_energy,infidelity,rotations,paulis_linear,paulis_scan,wall_time_s";

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << kCsvHeader << "\r\n";
  for (const auto& r : rows) {
    std::string dts;
    for (std::size_t i = 0; i < r.dts.size(); ++i) dts += (i ? ";" : "") + format_double(r.dts[i]);
    os << r.run_id << ',' << csv_field(r.algorithm) << ',' << csv_field(r.model) << ',' << r.step << ','
       << csv_field(dts) << ',' << format_double(r.energy) << ',' << format_double(r.exact_energy) << ','
       << format_double(r.infidelity) << ',' << r.rotations << ',' << r.paulis_linear << ',' << r.paulis_scan
       << ',' << format_double(r.wall_time) << "\r\n";
  }
}

namespace {

json stats(const std::vector<double>& v, bool lower_is_better = true) {
  if (v.empty()) return json::object();
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size());
  double best = v.front();
  double lo = v.front();
  double hi = v.front();
  for (double x : v) {
    best = lower_is_better ? std::min(best, x) : std::max(best, x);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return {{"mean", mean}, {"std", std::sqrt(var)}, {"best", best}, {"min", lo}, {"max", hi}, {"total", sum}};
}

void add_rows(std::vector<ResultRow>& rows, const RunOutcome& run, const PreparedExperiment& p) {
  const auto tag = model_tag(p.config.model);
  for (const auto& s : run.record.steps) {
    ResultRow r;
    r.run_id = run.run_id;
    r.algorithm = run.record.algorithm;
    r.model = tag;
    r.step = s.step;
    r.dts = s.dts;
    r.energy = s.energy;
    r.exact_energy = p.ground.energy;
    r.infidelity = std::max(s.infidelity, kInfidelityFloor);
    r.rotations = s.rotations;
    r.paulis_linear = s.ledger_linear;
    r.paulis_scan = s.ledger_scan;
    r.wall_time = run.wall_time;
    rows.push_back(std::move(r));
  }
}

double stabilizer_deviation(const StateVector& s, const std::vector<PauliString>& gens,
                            const std::vector<double>& start) {
  double dev = 0.0;
  for (std::size_t g = 0; g < gens.size(); ++g) dev = std::max(dev, std::abs(s.expectation(gens[g]).real() - start[g]));
  return dev;
}

}  // namespace

ExperimentResult run_prepared(const PreparedExperiment& p) {
  const auto& cfg = p.config;
  const auto states = initial_states(p);
  const bool do_qite = cfg.algorithm != Algorithm::mtqite;
  const bool do_mt = cfg.algorithm != Algorithm::qite;

  RunOptions base;
  base.formulation = cfg.formulation;
  base.step.rcond = cfg.rcond;
  base.step.drop_threshold = cfg.drop_threshold;
  base.apply_mode = cfg.apply_mode;
  base.term_order = cfg.term_order;
  base.use_symmetry_links = cfg.use_symmetry_links;
  base.ground = &p.ground;

  const auto& gens = p.group.stabilizer_generators;
  ExperimentResult res;
  const std::size_t n_states = states.size();
  if (do_qite) res.qite_runs.resize(n_states);
  if (do_mt) res.mtqite_runs.resize(n_states);
  std::vector<double> stab_dev(n_states, 0.0);

  const std::size_t n_tasks = n_states * (do_qite && do_mt ? 2 : 1);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(n_tasks); ++ti) {
    const auto task = static_cast<std::size_t>(ti);
    const std::size_t run = task % n_states;
    const bool mt = do_mt && (!do_qite || task >= n_states);
    try {
      std::vector<double> start;
      for (const auto& g : gens) start.push_back(states[run].expectation(g).real());
      RunOptions opts = base;
      double dev = 0.0;
      if (mt) opts.on_step = [&](int, const StateVector& s) { dev = std::max(dev, stabilizer_deviation(s, gens, start)); };
      const auto t0 = std::chrono::steady_clock::now();
      RunOutcome out;
      out.run_id = static_cast<int>(run);
      out.record = mt ? run_mtqite(p.partition, p.bases, states[run], cfg.grid, cfg.trotter_steps, opts)
                      : run_qite_baseline(p.partition, p.bases, states[run], cfg.grid, cfg.qite_steps(), opts);
      out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (!mt) dev = stabilizer_deviation(out.record.final_state, gens, start);
#pragma omp critical(mtqite_experiment_merge)
      stab_dev[run] = std::max(stab_dev[run], dev);
      (mt ? res.mtqite_runs : res.qite_runs)[run] = std::move(out);
    } catch (...) {
#pragma omp critical(mtqite_experiment_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t run = 0; run < n_states; ++run) {
    if (do_qite) add_rows(res.rows, res.qite_runs[run], p);
    if (do_mt) add_rows(res.rows, res.mtqite_runs[run], p);
    res.invariants.max_stabilizer_deviation = std::max(res.invariants.max_stabilizer_deviation, stab_dev[run]);
  }

  auto& inv = res.invariants;
  for (const auto& run : res.mtqite_runs) {
    const auto& steps = run.record.steps;
    for (std::size_t k = 1; k < steps.size(); ++k) {
      const double rise = steps[k].energy - steps[k - 1].energy;
      inv.max_energy_increase = std::max(inv.max_energy_increase, rise);
      if (cfg.grid.include_zero() && rise > 1e-12) inv.monotonic = false;
      if (!std::isnan(steps[k].diagonal_energy) && steps[k].energy > steps[k].diagonal_energy + 1e-12) {
        inv.scan_below_diagonal = false;
      }
    }
  }
  if (cfg.formulation != Formulation::antihermitian_order2) inv.hermitian_only_ledger = false;
  for (const auto* runs : {&res.qite_runs, &res.mtqite_runs}) {
    for (const auto& run : *runs) {
      inv.hermitian_only_ledger = inv.hermitian_only_ledger && run.record.ledger.real_phase_only(Purpose::linear_system);
    }
  }
  res.summary = summarize(p, res);
  return res;
}

json summarize(const PreparedExperiment& p, const ExperimentResult& result) {
  json s;
  s["name"] = p.config.name;
  s["model"] = model_tag(p.config.model);
  s["n_qubits"] = p.hamiltonian.n_qubits();
  s["exact_energy"] = p.ground.energy;
  s["ground_degeneracy"] = p.ground.degeneracy;
  s["formulation"] = std::string(to_string(p.config.formulation));
  s["trotter_steps"] = p.config.trotter_steps;
  s["qite_trotter_steps"] = p.config.qite_steps();
  s["grid"] = p.config.grid.values;
  s["seed"] = p.config.seed;
  json algs = json::object();
  auto one = [&](const std::vector<RunOutcome>& runs, const std::string& name) {
    if (runs.empty()) return;
    std::vector<double> infid, energy, error, linear, unkeyed, scan, rot, dts;
    for (const auto& r : runs) {
      const auto& last = r.record.steps.back();
      infid.push_back(std::max(last.infidelity, kInfidelityFloor));
      energy.push_back(last.energy);
      error.push_back(std::abs(last.energy - p.ground.energy));
      linear.push_back(static_cast<double>(last.ledger_linear));
      unkeyed.push_back(static_cast<double>(r.record.ledger.unkeyed_count(Purpose::linear_system)));
      scan.push_back(static_cast<double>(last.ledger_scan));
      rot.push_back(static_cast<double>(last.rotations));
      if (!std::isnan(r.record.chosen_dt)) dts.push_back(r.record.chosen_dt);
    }
    json a;
    a["runs"] = runs.size();
    a["final_infidelity"] = stats(infid);
    a["final_energy"] = stats(energy);
    a["final_abs_error"] = stats(error);
    a["paulis_linear"] = stats(linear);
    a["paulis_linear_unkeyed"] = stats(unkeyed);
    a["paulis_scan"] = stats(scan);
    a["rotations"] = stats(rot);
    if (!dts.empty()) a["chosen_dt"] = dts;
    algs[name] = a;
  };
  one(result.qite_runs, "qite");
  one(result.mtqite_runs, "mtqite");
  s["algorithms"] = algs;
  const auto& inv = result.invariants;
  s["invariants"] = {{"monotonic", inv.monotonic},
                     {"max_energy_increase", inv.max_energy_increase},
                     {"scan_below_diagonal", inv.scan_below_diagonal},
                     {"max_stabilizer_deviation", inv.max_stabilizer_deviation},
                     {"hermitian_only_ledger", p.config.formulation == Formulation::antihermitian_order2
                                                   ? json(inv.hermitian_only_ledger)
                                                   : json(nullptr)}};
  return s;
}

json describe(const PreparedExperiment& p) {
  json d;
  const int n = p.hamiltonian.n_qubits();
  d["name"] = p.config.name;
  d["model"] = model_tag(p.config.model);
  d["n_qubits"] = n;
  d["hamiltonian_terms"] = p.hamiltonian.size();
  d["exact_energy"] = p.ground.energy;
  d["ground_degeneracy"] = p.ground.degeneracy;
  json gens = json::array();
  for (const auto& g : p.group.stabilizer_generators) gens.push_back(g.label());
  d["symmetry_generators"] = gens;
  d["grid"] = p.config.grid.values;
  d["formulation"] = std::string(to_string(p.config.formulation));

  const auto states = initial_states(p);
  json terms = json::array();
  std::size_t est = 0;
  for (std::size_t t = 0; t < p.partition.size(); ++t) {
    json term;
    term["fragments"] = p.partition.terms[t].size();
    term["support"] = mask_qubits(p.partition.terms[t].support());
    term["domain"] = mask_qubits(p.partition.domains[t]);
    term["basis_size"] = p.bases[t].size();
    const auto link = p.partition.symmetry_links.find(static_cast<int>(t));
    if (link != p.partition.symmetry_links.end()) term["inversion_of"] = link->second.source;
    const auto m = measure_term(states.front(), p.partition.terms[t].without_identity(), p.bases[t], p.config.formulation);
    term["paulis_per_reference"] = m.distinct_strings;
    est += m.distinct_strings;
    terms.push_back(term);
  }
  d["terms"] = terms;
  std::size_t nonzero = 0;
  for (double v : p.config.grid.values) nonzero += v > 0.0;
  // Upper bounds for one run; links and repeated strings only lower them.
  d["ledger_estimate"] = {{"mtqite_linear_per_run", est * static_cast<std::size_t>(p.config.trotter_steps)},
                          {"qite_linear_per_run", est * static_cast<std::size_t>(p.config.qite_steps()) * nonzero},
                          {"initial_states", states.size()}};
  d["csv"] = p.config.csv_path().string();
  d["json"] = p.config.json_path().string();
  return d;
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& res) {
  const auto csv = cfg.csv_path();
  if (!csv.parent_path().empty()) std::filesystem::create_directories(csv.parent_path());
  {
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw RunError("cannot write " + csv.string());
    write_csv(out, res.rows);
  }
  std::ofstream js(cfg.json_path(), std::ios::binary);
  if (!js) throw RunError("cannot write " + cfg.json_path().string());
  js << res.summary.dump(2) << '\n';
}

ExperimentResult run_experiment(const ExperimentConfig& config, bool write_files) {
  const auto prepared = prepare(config);
  auto res = run_prepared(prepared);
  if (write_files) write_outputs(config, res);
  return res;
}

SweepResult sweep(const ExperimentConfig& base, const std::string& param, const std::vector<std::string>& values,
                  bool write_files) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::string pointer = "/" + param;
  for (auto& c : pointer) {
    if (c == '.') c = '/';
  }
  const json::json_pointer ptr(pointer);
  if (!base.source.contains(ptr)) throw ConfigError("sweep parameter '" + param + "' is not set in the config");

  SweepResult sw;
  sw.param = param;
  std::ostringstream combined;
  combined << "param,value," << kCsvHeader << "\r\n";
  for (const auto& v : values) {
    json doc = base.source;
    json parsed;
    try {
      parsed = json::parse(v);
    } catch (const json::parse_error&) {
      parsed = v;
    }
    doc[ptr] = parsed;
    doc["name"] = base.name + "_" + param + "=" + v;
    auto cfg = parse_config(doc, base.base_dir);
    cfg.output_dir = base.output_dir;
    cfg.csv_name.clear();
    cfg.json_name.clear();
    auto res = run_experiment(cfg, write_files);
    std::ostringstream rows;
    write_csv(rows, res.rows);
    std::string text = rows.str();
    text.erase(0, text.find("\r\n") + 2);
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) combined << csv_field(param) << ',' << csv_field(v) << ',' << line << "\r\n";
    }
    sw.values.push_back(v);
    sw.results.push_back(std::move(res));
  }
  if (write_files) {
    ExperimentConfig named = base;
    named.csv_name = base.name + "_sweep_" + param + ".csv";
    const auto path = named.csv_path();
    if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RunError("cannot write " + path.string());
    out << combined.str();
  }
  return sw;
}

}  // namespace mtqite
