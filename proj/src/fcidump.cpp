#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "mtqite/error.hpp"
#include "mtqite/hamiltonians.hpp"

namespace mtqite {

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// Pulls KEY=value pairs out of the namelist header. Values may be
// comma-separated lists (ORBSYM); only the first item is kept.
std::map<std::string, std::string> parse_header(const std::string& text, int line) {
  std::map<std::string, std::string> kv;
  std::string body = text;
  for (auto& c : body) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  std::size_t pos = 0;
  while ((pos = body.find('=', pos)) != std::string::npos) {
    std::size_t k_end = pos;
    while (k_end > 0 && body[k_end - 1] == ' ') --k_end;
    std::size_t k_beg = k_end;
    while (k_beg > 0 && (std::isalnum(static_cast<unsigned char>(body[k_beg - 1])) || body[k_beg - 1] == '_')) {
      --k_beg;
    }
    const std::string key = upper(body.substr(k_beg, k_end - k_beg));
    std::size_t v_beg = pos + 1;
    while (v_beg < body.size() && body[v_beg] == ' ') ++v_beg;
    std::size_t v_end = v_beg;
    while (v_end < body.size() && body[v_end] != ',' && body[v_end] != ' ' && body[v_end] != '/') ++v_end;
    if (key.empty()) throw ParseError("malformed FCIDUMP header", line);
    kv[key] = body.substr(v_beg, v_end - v_beg);
    pos = v_end;
  }
  return kv;
}

int header_int(const std::map<std::string, std::string>& kv, const std::string& key, int line,
               bool required) {
  auto it = kv.find(key);
  if (it == kv.end()) {
    if (required) throw ParseError("FCIDUMP header missing " + key, line);
    return 0;
  }
  int v = 0;
  const auto& s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("FCIDUMP header value " + key + "=" + s + " is not an integer", line);
  }
  return v;
}

}  // namespace

MolecularIntegrals read_fcidump_integrals(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open FCIDUMP file " + path.string());

  std::string line;
  int lineno = 0;
  std::string header;
  bool in_header = false;
  bool header_done = false;
  int header_line = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string u = upper(line);
    if (!in_header) {
      if (u.find("&FCI") == std::string::npos) {
        if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw ParseError("expected &FCI header", lineno);
      }
      in_header = true;
      header_line = lineno;
    }
    const auto end_pos = std::min(u.find("&END"), u.find('/'));
    header += ' ' + line.substr(0, std::min(end_pos, line.size()));
    if (end_pos != std::string::npos) {
      header_done = true;
      break;
    }
  }
  if (!header_done) throw ParseError("unterminated FCIDUMP header", lineno);
  const auto hpos = upper(header).find("&FCI");
  const auto kv = parse_header(header.substr(hpos + 4), header_line);

  MolecularIntegrals ints;
  ints.n_orbitals = header_int(kv, "NORB", header_line, true);
  ints.n_electrons = header_int(kv, "NELEC", header_line, true);
  ints.ms2 = header_int(kv, "MS2", header_line, false);
  if (ints.n_orbitals <= 0) throw ParseError("NORB must be positive", header_line);
  const auto n = static_cast<std::size_t>(ints.n_orbitals);
  ints.one_body.assign(n * n, 0.0);
  ints.two_body.assign(n * n * n * n, 0.0);

  auto set2 = [&](int p, int q, double v) {
    ints.one_body[static_cast<std::size_t>(p) * n + q] = v;
    ints.one_body[static_cast<std::size_t>(q) * n + p] = v;
  };
  auto idx4 = [&](int p, int q, int r, int s) {
    return ((static_cast<std::size_t>(p) * n + q) * n + r) * n + s;
  };
  auto set4 = [&](int i, int j, int k, int l, double v) {
    // Eight-fold symmetry of real orbitals.
    const int perms[8][4] = {{i, j, k, l}, {j, i, k, l}, {i, j, l, k}, {j, i, l, k},
                             {k, l, i, j}, {l, k, i, j}, {k, l, j, i}, {l, k, j, i}};
    for (const auto& pm : perms) ints.two_body[idx4(pm[0], pm[1], pm[2], pm[3])] = v;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string vtok;
    int i = 0, j = 0, k = 0, l = 0;
    if (!(ls >> vtok >> i >> j >> k >> l)) throw ParseError("malformed integral line", lineno);
    std::string extra;
    if (ls >> extra) throw ParseError("trailing tokens on integral line", lineno);
    for (auto& c : vtok) {
      if (c == 'D' || c == 'd') c = 'e';
    }
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(vtok, &used);
      if (used != vtok.size()) throw std::invalid_argument(vtok);
    } catch (const std::exception&) {
      throw ParseError("bad integral value '" + vtok + "'", lineno);
    }
    for (int idx : {i, j, k, l}) {
      if (idx < 0 || idx > ints.n_orbitals) {
        throw RangeError("line " + std::to_string(lineno) + ": orbital index " + std::to_string(idx) +
                         " exceeds NORB=" + std::to_string(ints.n_orbitals));
      }
    }
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      ints.core_energy = v;
    } else if (j == 0 && k == 0 && l == 0) {
      continue;  // orbital energy, not part of the Hamiltonian
    } else if (k == 0 && l == 0) {
      if (i == 0 || j == 0) throw ParseError("one-electron line needs two indices", lineno);
      set2(i - 1, j - 1, v);
    } else {
      if (i == 0 || j == 0 || k == 0 || l == 0) throw ParseError("two-electron line needs four indices", lineno);
      set4(i - 1, j - 1, k - 1, l - 1, v);
    }
  }
  return ints;
}

MolecularHamiltonian parse_fcidump(const std::filesystem::path& path) {
  return molecular_hamiltonian(read_fcidump_integrals(path));
}

}  // namespace mtqite
