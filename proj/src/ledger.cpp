#include "mtqite/ledger.hpp"

#include <algorithm>

namespace mtqite {

std::size_t MeasurementLedger::KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t h = k.ref * 0x9E3779B97F4A7C15ULL;
  h ^= k.x + 0xBF58476D1CE4E5B9ULL + (h << 6) + (h >> 2);
  h ^= k.z + 0x94D049BB133111EBULL + (h << 6) + (h >> 2);
  return static_cast<std::size_t>(h);
}

void MeasurementLedger::record(std::uint64_t reference_id, const PauliString& p) {
  record(reference_id, p.key(), p.has_real_phase());
}

void MeasurementLedger::record(std::uint64_t reference_id, const PauliKey& key, bool real_phase) {
  if (key.x == 0 && key.z == 0) return;
  linear_.insert({reference_id, key.x, key.z});
  linear_strings_.insert(key);
  linear_real_ = linear_real_ && real_phase;
}

void MeasurementLedger::record_scan(std::uint64_t candidate_id, const ObservableSum& h) {
  std::size_t n = 0;
  for (const auto& t : h.terms()) {
    if (t.string.is_identity()) continue;
    scan_strings_.insert(t.string.key());
    scan_real_ = scan_real_ && t.string.has_real_phase();
    ++n;
  }
  scan_candidates_.emplace(candidate_id, n);
}

void MeasurementLedger::merge(const MeasurementLedger& other) {
  linear_.insert(other.linear_.begin(), other.linear_.end());
  linear_strings_.insert(other.linear_strings_.begin(), other.linear_strings_.end());
  for (const auto& [id, n] : other.scan_candidates_) {
    auto [it, fresh] = scan_candidates_.emplace(id, n);
    if (!fresh) it->second = std::max(it->second, n);
  }
  scan_strings_.insert(other.scan_strings_.begin(), other.scan_strings_.end());
  linear_real_ = linear_real_ && other.linear_real_;
  scan_real_ = scan_real_ && other.scan_real_;
}

std::size_t MeasurementLedger::count(Purpose purpose) const noexcept {
  if (purpose == Purpose::linear_system) return linear_.size();
  std::size_t total = 0;
  for (const auto& [id, n] : scan_candidates_) total += n;
  return total;
}

std::size_t MeasurementLedger::unkeyed_count(Purpose purpose) const noexcept {
  return purpose == Purpose::linear_system ? linear_strings_.size() : scan_strings_.size();
}

bool MeasurementLedger::real_phase_only(Purpose purpose) const noexcept {
  return purpose == Purpose::linear_system ? linear_real_ : scan_real_;
}

}  // namespace mtqite
