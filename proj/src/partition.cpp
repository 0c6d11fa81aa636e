#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "mtqite/error.hpp"
#include "mtqite/hamiltonians.hpp"

namespace mtqite {

std::uint64_t widen_domain(std::uint64_t support, int width, int n_qubits) {
  const std::uint64_t all = n_qubits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_qubits) - 1;
  if (width <= 0 || width >= n_qubits) return all;
  int lo = 0;
  int hi = 0;
  if (support != 0) {
    lo = std::countr_zero(support);
    hi = 63 - std::countl_zero(support);
  }
  const int size = hi - lo + 1;
  if (size > width) {
    throw InputError("domain size " + std::to_string(width) + " smaller than term support of " +
                     std::to_string(size) + " qubits");
  }
  const int extra = width - size;
  lo -= (extra + 1) / 2;
  hi += extra / 2;
  if (lo < 0) {
    hi -= lo;
    lo = 0;
  }
  if (hi > n_qubits - 1) {
    lo -= hi - (n_qubits - 1);
    hi = n_qubits - 1;
  }
  std::uint64_t mask = 0;
  for (int q = lo; q <= hi; ++q) mask |= std::uint64_t{1} << q;
  return mask;
}

namespace {

using Groups = std::vector<std::vector<PauliTerm>>;

Groups explicit_groups(const ObservableSum& h, const partition_spec::Explicit& spec) {
  std::vector<int> seen(h.size(), 0);
  Groups groups;
  for (const auto& g : spec.groups) {
    auto& out = groups.emplace_back();
    for (int idx : g) {
      if (idx < 0 || static_cast<std::size_t>(idx) >= h.size()) {
        throw InputError("partition group index " + std::to_string(idx) + " out of range");
      }
      if (seen[static_cast<std::size_t>(idx)]++) {
        throw InputError("fragment " + std::to_string(idx) + " assigned twice");
      }
      out.push_back(h.terms()[static_cast<std::size_t>(idx)]);
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw InputError("partition groups do not cover fragment " + std::to_string(i));
  }
  return groups;
}

Groups even_odd_groups(const ObservableSum& h) {
  Groups groups(2);
  for (const auto& t : h.terms()) {
    const std::uint64_t s = t.string.support();
    const int lo = s ? std::countr_zero(s) : 0;
    groups[static_cast<std::size_t>(lo % 2)].push_back(t);
  }
  return groups;
}

Groups block_groups(const ObservableSum& h, int count) {
  const int n = h.n_qubits();
  if (count < 1 || count > n) throw InputError("block count must lie in [1, n_qubits]");
  const double width = static_cast<double>(n) / count;
  Groups groups(static_cast<std::size_t>(count));
  for (const auto& t : h.terms()) {
    const std::uint64_t s = t.string.support();
    if (s == 0) {
      groups[0].push_back(t);
      continue;
    }
    const double centre = 0.5 * (std::countr_zero(s) + (63 - std::countl_zero(s)));
    const double pos = (centre + 0.5) / width;
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) < 1e-9 && nearest > 0 && nearest < count) {
      const auto k = static_cast<std::size_t>(nearest);
      groups[k - 1].push_back({0.5 * t.coeff, t.string});
      groups[k].push_back({0.5 * t.coeff, t.string});
    } else {
      const auto k = static_cast<std::size_t>(std::clamp(static_cast<int>(std::floor(pos)), 0, count - 1));
      groups[k].push_back(t);
    }
  }
  return groups;
}

Groups greedy_groups(const ObservableSum& h, int count, const OperatorPool& pool) {
  if (count < 1) throw InputError("greedy partition needs at least one group");
  std::vector<std::size_t> order;
  std::optional<PauliTerm> identity;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h.terms()[i].string.is_identity()) {
      identity = h.terms()[i];
    } else {
      order.push_back(i);
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(h.terms()[a].coeff) > std::abs(h.terms()[b].coeff);
  });

  // alive[g][k]: pool generator k commutes with every member of group g.
  std::vector<std::vector<char>> alive(static_cast<std::size_t>(count), std::vector<char>(pool.size(), 1));
  Groups groups(static_cast<std::size_t>(count));
  for (std::size_t idx : order) {
    const PauliTerm& frag = h.terms()[idx];
    const ObservableSum fop(frag.string);
    std::vector<char> comm(pool.size());
    for (std::size_t k = 0; k < pool.size(); ++k) {
      comm[k] = commutator(pool[k].generator, fop).empty() ? 1 : 0;
    }
    std::size_t best = 0;
    long best_score = -1;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      long score = 0;
      for (std::size_t k = 0; k < pool.size(); ++k) score += alive[g][k] & comm[k];
      if (score > best_score) {
        best_score = score;
        best = g;
      }
    }
    for (std::size_t k = 0; k < pool.size(); ++k) alive[best][k] &= comm[k];
    groups[best].push_back(frag);
  }
  if (identity) groups[0].push_back(*identity);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw InputError("greedy partition left group " + std::to_string(g) + " empty");
  }
  return groups;
}

}  // namespace

HamiltonianPartition make_partition(const ObservableSum& h, const PartitionSpec& spec,
                                    const PartitionOptions& opts) {
  if (h.empty()) throw InputError("cannot partition an empty Hamiltonian");
  const int n = h.n_qubits();
  HamiltonianPartition part;
  part.full = h;

  Groups groups;
  std::vector<std::vector<int>> merge;
  if (std::holds_alternative<partition_spec::Trivial>(spec)) {
    groups.push_back(h.terms());
  } else if (const auto* e = std::get_if<partition_spec::Explicit>(&spec)) {
    groups = explicit_groups(h, *e);
  } else if (std::holds_alternative<partition_spec::EvenOdd>(spec)) {
    groups = even_odd_groups(h);
  } else if (const auto* b = std::get_if<partition_spec::Blocks>(&spec)) {
    groups = block_groups(h, b->count);
    merge = b->merge;
  } else if (const auto* g = std::get_if<partition_spec::GreedyCommuting>(&spec)) {
    if (opts.pool == nullptr || opts.pool->empty()) {
      throw InputError("greedy_commuting partition needs an operator pool");
    }
    groups = greedy_groups(h, g->count, *opts.pool);
  }

  std::vector<ObservableSum> pieces;
  std::vector<std::uint64_t> piece_domains;
  for (auto& grp : groups) {
    if (grp.empty()) throw InputError("partition produced an empty term");
    ObservableSum term(n, std::move(grp));
    if (term.empty()) throw InputError("partition term cancels to zero");
    piece_domains.push_back(widen_domain(term.support(), opts.domain_size, n));
    pieces.push_back(std::move(term));
  }

  if (merge.empty()) {
    part.terms = std::move(pieces);
    part.domains = std::move(piece_domains);
  } else {
    std::vector<int> used(pieces.size(), 0);
    for (const auto& m : merge) {
      ObservableSum term(n);
      std::uint64_t dom = 0;
      for (int k : m) {
        if (k < 0 || static_cast<std::size_t>(k) >= pieces.size() || used[static_cast<std::size_t>(k)]++) {
          throw InputError("invalid or repeated block index in merge list");
        }
        term += pieces[static_cast<std::size_t>(k)];
        dom |= piece_domains[static_cast<std::size_t>(k)];
      }
      part.terms.push_back(std::move(term));
      part.domains.push_back(dom);
    }
    if (std::find(used.begin(), used.end(), 0) != used.end()) {
      throw InputError("merge list does not cover every block");
    }
  }

  if (opts.detect_inversion_links) {
    const auto inv = inversion_permutation(n);
    for (std::size_t m = 0; m < part.terms.size(); ++m) {
      for (std::size_t s = 0; s < m; ++s) {
        if (part.symmetry_links.count(static_cast<int>(s))) continue;
        if (part.domains[m] != permute_mask(part.domains[s], inv)) continue;
        if (part.terms[m].distance(part.terms[s].inverted()) > 1e-12) continue;
        part.symmetry_links[static_cast<int>(m)] = {static_cast<int>(s), inv};
        break;
      }
    }
  }

  if (auto err = validate_partition(part)) throw InputError("invalid partition: " + *err);
  return part;
}

std::optional<std::string> validate_partition(const HamiltonianPartition& p, double tol) {
  ObservableSum sum(p.n_qubits());
  for (const auto& t : p.terms) sum += t;
  if (sum.distance(p.full) > tol) return "terms do not sum to the full Hamiltonian";
  if (p.domains.size() != p.terms.size()) return "domain count mismatch";
  for (std::size_t m = 0; m < p.terms.size(); ++m) {
    if (p.terms[m].support() & ~p.domains[m]) {
      return "term " + std::to_string(m) + " support leaves its domain";
    }
  }
  for (const auto& [m, link] : p.symmetry_links) {
    if (link.source < 0 || static_cast<std::size_t>(link.source) >= p.terms.size() ||
        static_cast<std::size_t>(m) >= p.terms.size()) {
      return "symmetry link index out of range";
    }
    const auto image = p.terms[static_cast<std::size_t>(link.source)].permuted(link.permutation);
    if (image.distance(p.terms[static_cast<std::size_t>(m)]) > tol) {
      return "term " + std::to_string(m) + " is not the image of its linked source";
    }
  }
  return std::nullopt;
}

}  // namespace mtqite
