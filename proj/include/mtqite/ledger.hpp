#pragma once

#include <cstdint>
#include <map>
#include <unordered_set>

#include "mtqite/pauli.hpp"

namespace mtqite {

enum class Purpose { linear_system, energy_scan };

/// Distinct Pauli expectation values evaluated, keyed by the state they
/// were evaluated on. The identity is never counted.
class MeasurementLedger {
 public:
  /// A linear-system expectation value <p> on reference `reference_id`.
  void record(std::uint64_t reference_id, const PauliString& p);
  /// Same, for a string whose phase was already classified.
  void record(std::uint64_t reference_id, const PauliKey& key, bool real_phase);
  /// Every non-identity string of h measured on candidate state
  /// `candidate_id` during an energy scan. Candidate ids are never reused,
  /// so only the per-candidate count is stored.
  void record_scan(std::uint64_t candidate_id, const ObservableSum& h);

  /// Set union; the result does not depend on merge order.
  void merge(const MeasurementLedger& other);

  /// Distinct (reference, string) pairs.
  std::size_t count(Purpose purpose) const noexcept;
  /// Distinct strings, ignoring which state they were measured on.
  std::size_t unkeyed_count(Purpose purpose) const noexcept;
  /// True while every string recorded under `purpose` carried a real phase.
  bool real_phase_only(Purpose purpose) const noexcept;

 private:
  struct Key {
    std::uint64_t ref;
    std::uint64_t x;
    std::uint64_t z;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  std::unordered_set<Key, KeyHash> linear_;
  std::unordered_set<PauliKey, PauliKeyHash> linear_strings_;
  std::map<std::uint64_t, std::size_t> scan_candidates_;
  std::unordered_set<PauliKey, PauliKeyHash> scan_strings_;
  bool linear_real_ = true;
  bool scan_real_ = true;
};

}  // namespace mtqite
