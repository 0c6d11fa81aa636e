#include "mtqite/driver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "mtqite/error.hpp"
#include "mtqite/symmetry.hpp"

namespace mtqite {

TimeGrid TimeGrid::uniform(int l, double t_max, bool include_zero) {
  if (l < 1) throw InputError("time grid needs at least one value");
  if (!(t_max > 0.0)) throw InputError("time grid maximum must be positive");
  TimeGrid g;
  if (include_zero) g.values.push_back(0.0);
  for (int i = 1; i <= l; ++i) g.values.push_back(t_max * i / l);
  return g;
}

TimeGrid TimeGrid::from_values(std::vector<double> values) {
  if (values.empty()) throw InputError("time grid is empty");
  std::sort(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) throw InputError("time grid values must be >= 0");
    if (i > 0 && values[i] == values[i - 1]) throw InputError("time grid values must be distinct");
  }
  return {std::move(values)};
}

namespace {

std::vector<std::size_t> application_order(std::size_t m, TermOrder order) {
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  if (order == TermOrder::last_term_first) std::reverse(idx.begin(), idx.end());
  return idx;
}

void check_inputs(const HamiltonianPartition& p, const std::vector<QiteBasis>& bases, const StateVector& s) {
  if (p.terms.empty()) throw InputError("partition has no terms");
  if (bases.size() != p.terms.size()) throw InputError("need one basis per partition term");
  if (s.n_qubits() != p.n_qubits()) throw DimensionError("initial state and Hamiltonian sizes differ");
}

double energy_of(const StateVector& s, const ObservableSum& h) { return s.expectation(h).real(); }

double infidelity_of(const StateVector& s, const RunOptions& opts) {
  if (opts.ground == nullptr) return std::numeric_limits<double>::quiet_NaN();
  return std::max(1.0 - fidelity(s, *opts.ground), 0.0);
}

TermSolution solve_direct(const StateVector& reference, const HamiltonianPartition& partition,
                          const QiteBasis& basis, std::size_t m, const TimeGrid& grid, const RunOptions& opts,
                          MeasurementLedger* ledger, std::uint64_t reference_id) {
  // The identity part of a term only rescales the state.
  const ObservableSum h = partition.terms[m].without_identity();
  const auto measured = measure_term(reference, h, basis, opts.formulation, ledger, reference_id);
  const PseudoInverse pinv(measured.s, opts.step.rcond, negated_system(opts.formulation));
  TermSolution sol;
  for (double dt : grid.values) {
    if (dt == 0.0) {
      UnitaryStep empty;
      empty.term_index = static_cast<int>(m);
      empty.domain = partition.domains[m];
      sol.per_dt.emplace_back(std::move(empty));
      continue;
    }
    try {
      const double c = normalization(measured, dt);
      const Eigen::VectorXd b = b_vector(measured, dt, c);
      const Eigen::VectorXd a = pinv.solve(b);
      auto step = make_step(basis, a, dt, static_cast<int>(m), partition.domains[m], opts.step.drop_threshold);
      step.residual = (measured.s * a - b).norm();
      sol.per_dt.emplace_back(std::move(step));
    } catch (const DegenerateNormalizationError&) {
      sol.per_dt.emplace_back(std::nullopt);
      ++sol.excluded;
    }
  }
  if (sol.excluded == static_cast<int>(grid.size())) {
    throw RunError("every grid point is degenerate for term " + std::to_string(m));
  }
  return sol;
}

}  // namespace

std::vector<TermSolution> solve_terms(const StateVector& reference, const HamiltonianPartition& partition,
                                      const std::vector<QiteBasis>& bases, const TimeGrid& grid,
                                      const RunOptions& opts, MeasurementLedger* ledger,
                                      std::uint64_t reference_id) {
  check_inputs(partition, bases, reference);
  const std::size_t m_terms = partition.size();
  bool symmetric = false;
  if (opts.use_symmetry_links && !partition.symmetry_links.empty()) {
    symmetric = std::abs(std::abs(inversion_expectation(reference)) - 1.0) <= opts.link_tolerance;
  }
  std::vector<TermSolution> out(m_terms);
  for (std::size_t m = 0; m < m_terms; ++m) {
    const auto link = partition.symmetry_links.find(static_cast<int>(m));
    if (symmetric && link != partition.symmetry_links.end()) {
      const auto& src = out[static_cast<std::size_t>(link->second.source)];
      TermSolution sol;
      sol.transported = true;
      sol.excluded = src.excluded;
      for (const auto& s : src.per_dt) {
        if (s) {
          sol.per_dt.emplace_back(transport_linked_step(partition, static_cast<int>(m), *s));
        } else {
          sol.per_dt.emplace_back(std::nullopt);
        }
      }
      out[m] = std::move(sol);
      continue;
    }
    out[m] = solve_direct(reference, partition, bases[m], m, grid, opts, ledger, reference_id);
  }
  return out;
}

ScanResult energy_scan(const StateVector& reference, const std::vector<TermSolution>& table,
                       const ObservableSum& h_full, const TimeGrid& grid, const RunOptions& opts,
                       MeasurementLedger* ledger, std::uint64_t first_candidate_id) {
  if (table.empty()) throw InputError("energy scan needs at least one term");
  const std::size_t m_terms = table.size();
  const std::size_t g = grid.size();
  for (const auto& t : table) {
    if (t.per_dt.size() != g) throw InputError("step table does not match the time grid");
  }
  std::size_t total = 1;
  for (std::size_t m = 0; m < m_terms; ++m) {
    if (total > 50'000'000 / g) throw InputError("energy scan too large");
    total *= g;
  }
  std::vector<std::size_t> stride(m_terms, 1);
  for (std::size_t m = m_terms - 1; m > 0; --m) stride[m - 1] = stride[m] * g;

  const auto order = application_order(m_terms, opts.term_order);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> energies(total, nan);

  // Depth-first over the application order so shared prefixes are applied once.
  auto descend = [&](auto&& self, std::size_t level, const StateVector& state, std::size_t flat) -> void {
    if (level == m_terms) {
      energies[flat] = energy_of(state, h_full);
      return;
    }
    const std::size_t m = order[level];
    for (std::size_t c = 0; c < g; ++c) {
      const auto& step = table[m].per_dt[c];
      if (!step) continue;
      if (step->empty()) {
        self(self, level + 1, state, flat + c * stride[m]);
      } else {
        StateVector next = state;
        next.apply(*step, opts.apply_mode);
        self(self, level + 1, next, flat + c * stride[m]);
      }
    }
  };

  std::exception_ptr failure;
  const std::size_t m0 = order[0];
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(g); ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    const auto& step = table[m0].per_dt[c];
    if (!step) continue;
    try {
      StateVector next = reference;
      if (!step->empty()) next.apply(*step, opts.apply_mode);
      descend(descend, 1, next, c * stride[m0]);
    } catch (...) {
#pragma omp critical(mtqite_scan_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  ScanResult res;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < total; ++i) {
    if (std::isnan(energies[i])) continue;
    ++res.candidates;
    if (ledger != nullptr) ledger->record_scan(first_candidate_id + i, h_full);
    best = std::min(best, energies[i]);
  }
  if (res.candidates == 0) throw RunError("energy scan has no admissible candidate");

  auto decode = [&](std::size_t flat) {
    std::vector<std::size_t> idx(m_terms);
    for (std::size_t m = 0; m < m_terms; ++m) idx[m] = (flat / stride[m]) % g;
    return idx;
  };
  auto dt_sum = [&](const std::vector<std::size_t>& idx) {
    double s = 0.0;
    for (std::size_t c : idx) s += grid.values[c];
    return s;
  };
  std::optional<std::size_t> winner;
  for (std::size_t i = 0; i < total; ++i) {
    if (std::isnan(energies[i]) || energies[i] > best + opts.tie_tolerance) continue;
    if (!winner) {
      winner = i;
      continue;
    }
    const auto a = decode(i);
    const auto b = decode(*winner);
    const double sa = dt_sum(a);
    const double sb = dt_sum(b);
    // Row-major order already is lexicographic order of the dt tuple.
    if (sa < sb) winner = i;
  }
  res.choice = decode(*winner);
  res.energy = energies[*winner];
  for (std::size_t c = 0; c < g; ++c) {
    std::size_t flat = 0;
    for (std::size_t m = 0; m < m_terms; ++m) flat += c * stride[m];
    if (!std::isnan(energies[flat])) {
      res.diagonal_energy = std::isnan(res.diagonal_energy) ? energies[flat] : std::min(res.diagonal_energy, energies[flat]);
    }
  }
  res.energies = std::move(energies);
  return res;
}

RunRecord run_mtqite(const HamiltonianPartition& partition, const std::vector<QiteBasis>& bases,
                     const StateVector& initial, const TimeGrid& grid, int steps, const RunOptions& opts) {
  check_inputs(partition, bases, initial);
  if (steps < 0) throw InputError("number of Trotter steps must be non-negative");
  const std::size_t m_terms = partition.size();
  const auto order = application_order(m_terms, opts.term_order);

  RunRecord rec;
  rec.algorithm = "mtqite";
  StateVector state = initial;
  StepRecord s0;
  s0.dts.assign(m_terms, 0.0);
  s0.energy = energy_of(state, partition.full);
  s0.infidelity = infidelity_of(state, opts);
  rec.steps.push_back(s0);
  if (opts.on_step) opts.on_step(0, state);

  std::size_t rotations = 0;
  std::uint64_t next_candidate = 0;
  for (int k = 1; k <= steps; ++k) {
    const auto table = solve_terms(state, partition, bases, grid, opts, &rec.ledger, static_cast<std::uint64_t>(k));
    const auto scan = energy_scan(state, table, partition.full, grid, opts, &rec.ledger, next_candidate);
    next_candidate += scan.energies.size();

    StepRecord r;
    r.step = k;
    for (std::size_t m : order) {
      const auto& step = *table[m].per_dt[scan.choice[m]];
      if (!step.empty()) state.apply(step, opts.apply_mode);
      rotations += step.rotation_count();
    }
    for (std::size_t m = 0; m < m_terms; ++m) {
      const auto& step = *table[m].per_dt[scan.choice[m]];
      r.dts.push_back(grid.values[scan.choice[m]]);
      r.residuals.push_back(step.residual);
      r.excluded_points += table[m].excluded;
      r.transported_terms += table[m].transported ? 1 : 0;
    }
    r.energy = energy_of(state, partition.full);
    r.infidelity = infidelity_of(state, opts);
    r.rotations = rotations;
    r.ledger_linear = rec.ledger.count(Purpose::linear_system);
    r.ledger_scan = rec.ledger.count(Purpose::energy_scan);
    r.diagonal_energy = scan.diagonal_energy;
    rec.steps.push_back(std::move(r));
    if (opts.on_step) opts.on_step(k, state);
  }
  rec.final_state = state;
  return rec;
}

namespace {

struct BaselineRun {
  bool ok = true;
  std::vector<StepRecord> steps;
  std::vector<std::size_t> ledger_counts;
  StateVector final_state{1};
  MeasurementLedger ledger;
};

BaselineRun baseline_for_dt(const HamiltonianPartition& partition, const std::vector<QiteBasis>& bases,
                            const StateVector& initial, double dt, std::uint64_t id_base, int steps,
                            const RunOptions& opts) {
  const std::size_t m_terms = partition.size();
  const auto order = application_order(m_terms, opts.term_order);
  BaselineRun run;
  StateVector state = initial;
  std::size_t rotations = 0;
  std::uint64_t next_id = id_base;
  for (int k = 1; k <= steps; ++k) {
    StepRecord r;
    r.step = k;
    r.dts.assign(m_terms, dt);
    r.residuals.assign(m_terms, 0.0);
    for (std::size_t m : order) {
      const ObservableSum h = partition.terms[m].without_identity();
      const auto measured = measure_term(state, h, bases[m], opts.formulation, &run.ledger, next_id++);
      double c = 0.0;
      try {
        c = normalization(measured, dt);
      } catch (const DegenerateNormalizationError&) {
        run.ok = false;
        return run;
      }
      const Eigen::VectorXd b = b_vector(measured, dt, c);
      const Eigen::VectorXd a = PseudoInverse(measured.s, opts.step.rcond, negated_system(opts.formulation)).solve(b);
      auto step = make_step(bases[m], a, dt, static_cast<int>(m), partition.domains[m], opts.step.drop_threshold);
      r.residuals[m] = (measured.s * a - b).norm();
      if (!step.empty()) state.apply(step, opts.apply_mode);
      rotations += step.rotation_count();
    }
    r.energy = energy_of(state, partition.full);
    r.infidelity = infidelity_of(state, opts);
    r.rotations = rotations;
    run.steps.push_back(std::move(r));
    run.ledger_counts.push_back(run.ledger.count(Purpose::linear_system));
  }
  run.final_state = state;
  return run;
}

}  // namespace

RunRecord run_qite_baseline(const HamiltonianPartition& partition, const std::vector<QiteBasis>& bases,
                            const StateVector& initial, const TimeGrid& grid, int steps,
                            const RunOptions& opts) {
  check_inputs(partition, bases, initial);
  if (steps < 0) throw InputError("number of Trotter steps must be non-negative");
  const std::size_t m_terms = partition.size();

  RunRecord rec;
  rec.algorithm = "qite";
  StepRecord s0;
  s0.dts.assign(m_terms, 0.0);
  s0.energy = energy_of(initial, partition.full);
  s0.infidelity = infidelity_of(initial, opts);
  rec.steps.push_back(s0);
  rec.final_state = initial;

  std::vector<double> dts;
  for (double v : grid.values) {
    if (v > 0.0) dts.push_back(v);
  }
  if (dts.empty() || steps == 0) {
    // Nothing to evolve: the state stays put.
    for (int k = 1; k <= steps; ++k) {
      StepRecord r = s0;
      r.step = k;
      rec.steps.push_back(r);
    }
    return rec;
  }

  std::vector<BaselineRun> runs(dts.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t di = 0; di < static_cast<std::int64_t>(dts.size()); ++di) {
    const auto d = static_cast<std::size_t>(di);
    try {
      runs[d] = baseline_for_dt(partition, bases, initial, dts[d], (static_cast<std::uint64_t>(d) + 1) << 32,
                                steps, opts);
    } catch (...) {
#pragma omp critical(mtqite_baseline_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::optional<std::size_t> best;
  for (std::size_t d = 0; d < runs.size(); ++d) {
    if (!runs[d].ok) {
      rec.excluded_dts.push_back(dts[d]);
      continue;
    }
    if (!best || runs[d].steps.back().energy < runs[*best].steps.back().energy) best = d;
  }
  if (!best) throw RunError("baseline QITE failed for every time step size");

  for (const auto& run : runs) rec.ledger.merge(run.ledger);
  rec.chosen_dt = dts[*best];
  rec.final_state = runs[*best].final_state;
  for (int k = 1; k <= steps; ++k) {
    StepRecord r = runs[*best].steps[static_cast<std::size_t>(k - 1)];
    // The budget is the sum over every step size tried, failed runs included.
    for (const auto& run : runs) {
      const auto kk = static_cast<std::size_t>(k);
      r.ledger_linear += kk <= run.ledger_counts.size() ? run.ledger_counts[kk - 1]
                                                        : run.ledger.count(Purpose::linear_system);
    }
    rec.steps.push_back(std::move(r));
  }
  return rec;
}

}  // namespace mtqite
