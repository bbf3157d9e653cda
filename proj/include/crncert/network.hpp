#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "crncert/rational.hpp"

namespace crncert {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Term {
  int species = 0;  // 0-based index
  long coeff = 1;   // > 0
};

struct Reaction {
  std::vector<Term> left, right;
  bool reversible = true;
};

// Species and reaction orderings are load-bearing: they fix the row and
// column order of the stoichiometric matrix.
struct ReactionNetwork {
  std::vector<std::string> species;
  std::vector<Reaction> reactions;

  int species_count() const { return int(species.size()); }
  int reaction_count() const { return int(reactions.size()); }
  bool fully_reversible() const {
    for (const auto& r : reactions)
      if (!r.reversible) return false;
    return true;
  }
};

namespace detail {

inline bool name_start(char c) { return std::isalpha(uint8_t(c)) || c == '_'; }
inline bool name_char(char c) { return std::isalnum(uint8_t(c)) || c == '_'; }

inline std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_on(const std::string& s, const std::string& sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t hit = s.find(sep, pos);
    if (hit == std::string::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, hit - pos));
    pos = hit + sep.size();
  }
}

// "2A", "2 A" or "A"
inline Term parse_term(const std::string& raw, std::map<std::string, int>& index,
                       std::vector<std::string>& species, bool allow_new) {
  std::string s = strip(raw);
  if (s.empty()) throw ParseError("empty species term");
  Term t;
  std::size_t p = 0;
  if (std::isdigit(uint8_t(s[0]))) {
    std::size_t q = 0;
    t.coeff = std::stol(s, &q);
    p = q;
    while (p < s.size() && (s[p] == ' ' || s[p] == '\t')) ++p;
    if (t.coeff <= 0) throw ParseError("nonpositive coefficient in term: " + raw);
  }
  if (p >= s.size() || !name_start(s[p])) throw ParseError("bad species term: " + raw);
  std::size_t q = p;
  while (q < s.size() && name_char(s[q])) ++q;
  if (q != s.size()) throw ParseError("trailing junk in term: " + raw);
  std::string name = s.substr(p);
  auto it = index.find(name);
  if (it == index.end()) {
    if (!allow_new) throw ParseError("species not in header: " + name);
    index[name] = int(species.size());
    species.push_back(name);
    it = index.find(name);
  }
  t.species = it->second;
  return t;
}

inline std::vector<Term> parse_side(const std::string& raw, std::map<std::string, int>& index,
                                    std::vector<std::string>& species, bool allow_new) {
  std::vector<Term> side;
  for (const auto& piece : split_on(raw, "+")) side.push_back(parse_term(piece, index, species, allow_new));
  // merge repeats of one species on a side
  std::vector<Term> merged;
  for (const auto& t : side) {
    bool hit = false;
    for (auto& m : merged)
      if (m.species == t.species) {
        m.coeff += t.coeff;
        hit = true;
      }
    if (!hit) merged.push_back(t);
  }
  return merged;
}

}  // namespace detail

// Line format: one reaction per line, `<->` reversible / `->` irreversible,
// `#` comments, optional `species: A B C` header pinning row order.
inline ReactionNetwork parse_network(const std::string& text) {
  ReactionNetwork net;
  std::map<std::string, int> index;
  bool allow_new = true;
  bool seen_reaction = false;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::strip(line);
    if (line.empty()) continue;

    if (line.rfind("species:", 0) == 0) {
      if (seen_reaction || !net.species.empty())
        throw ParseError("species header must come first (line " + std::to_string(lineno) + ")");
      std::istringstream names(line.substr(8));
      std::string name;
      while (names >> name) {
        if (index.count(name)) throw ParseError("duplicate species in header: " + name);
        index[name] = int(net.species.size());
        net.species.push_back(name);
      }
      if (net.species.empty()) throw ParseError("empty species header");
      allow_new = false;
      continue;
    }

    bool reversible;
    std::size_t arrow = line.find("<->");
    std::size_t arrow_len = 3;
    if (arrow != std::string::npos) {
      reversible = true;
    } else {
      arrow = line.find("->");
      arrow_len = 2;
      if (arrow == std::string::npos)
        throw ParseError("no arrow in reaction (line " + std::to_string(lineno) + "): " + line);
      reversible = false;
    }
    if (line.find("<-", arrow + arrow_len) != std::string::npos ||
        line.find("->", arrow + arrow_len) != std::string::npos)
      throw ParseError("multiple arrows on one line (line " + std::to_string(lineno) + ")");

    Reaction r;
    r.reversible = reversible;
    r.left = detail::parse_side(line.substr(0, arrow), index, net.species, allow_new);
    r.right = detail::parse_side(line.substr(arrow + arrow_len), index, net.species, allow_new);
    for (const auto& lt : r.left)
      for (const auto& rt : r.right)
        if (lt.species == rt.species)
          throw ParseError("species " + net.species[lt.species] +
                           " occurs on both sides of a reaction (line " + std::to_string(lineno) + ")");
    net.reactions.push_back(std::move(r));
    seen_reaction = true;
  }
  if (net.reactions.empty()) throw ParseError("no reactions");
  return net;
}

/// Canonical text form; parse(render(net)) reproduces species/reaction order.
inline std::string render(const ReactionNetwork& net) {
  std::ostringstream out;
  out << "species:";
  for (const auto& s : net.species) out << " " << s;
  out << "\n";
  auto side = [&](const std::vector<Term>& ts) {
    std::string s;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (i) s += " + ";
      if (ts[i].coeff != 1) s += std::to_string(ts[i].coeff);
      s += net.species[ts[i].species];
    }
    return s;
  };
  for (const auto& r : net.reactions)
    out << side(r.left) << (r.reversible ? " <-> " : " -> ") << side(r.right) << "\n";
  return out.str();
}

/// Gamma_{ij} = (right coefficient of i in j) - (left coefficient of i in j).
inline RatMat stoichiometric_matrix(const ReactionNetwork& net) {
  RatMat g(net.species_count(), net.reaction_count());
  for (int j = 0; j < net.reaction_count(); ++j) {
    for (const auto& t : net.reactions[j].left) g(t.species, j) -= t.coeff;
    for (const auto& t : net.reactions[j].right) g(t.species, j) += t.coeff;
  }
  return g;
}

namespace detail {
inline std::string species_name(int i) {
  if (i < 26) return std::string(1, char('A' + i));
  return "S" + std::to_string(i + 1);
}
}  // namespace detail

// The family R^(k): k reversible reactions on k+1 species, reactions ordered
// and oriented so the stoichiometric matrix follows the three column rules
// (column 1: -1 at row k, +1 at row k+1; columns j=2..k-1: +1 at row k-j+1,
// -1 at row k-j+2; column k: +1 at row 1, -1 at rows 2 and k+1).
inline ReactionNetwork family_network(int k) {
  if (k < 2) throw std::invalid_argument("family_network requires k >= 2");
  ReactionNetwork net;
  for (int i = 0; i <= k; ++i) net.species.push_back(detail::species_name(i));
  // 1-based species indices below, shifted on storage
  auto rxn = [](std::vector<int> left, std::vector<int> right) {
    Reaction r;
    for (int s : left) r.left.push_back({s - 1, 1});
    for (int s : right) r.right.push_back({s - 1, 1});
    return r;
  };
  net.reactions.push_back(rxn({k}, {k + 1}));
  for (int j = 2; j <= k - 1; ++j) net.reactions.push_back(rxn({k - j + 2}, {k - j + 1}));
  net.reactions.push_back(rxn({2, k + 1}, {1}));
  return net;
}

struct ElementaryFaceReport {
  bool all_repelling = true;
  // Zero sets Z = S^c (0-based species indices) whose face is not certified repelling.
  std::vector<std::vector<int>> failing_zero_sets;
};

// Combinatorial repelling-face criterion for fully reversible networks with
// no species on both sides of a reaction: the face with the species in Z
// zeroed is repelling iff some column of the row-submatrix Gamma^Z has
// nonzero entries all of one sign.
inline ElementaryFaceReport repelling_faces_check(const ReactionNetwork& net) {
  if (!net.fully_reversible())
    throw std::invalid_argument(
        "repelling_faces_check: criterion is established only for fully reversible networks");
  const int m = net.species_count();
  if (m > 24) throw std::invalid_argument("repelling_faces_check: more than 24 species");
  RatMat g = stoichiometric_matrix(net);
  ElementaryFaceReport rep;
  for (std::uint32_t z = 1; z + 1 < (std::uint32_t(1) << m); ++z) {
    bool repelling = false;
    for (int j = 0; j < g.cols() && !repelling; ++j) {
      bool pos = false, neg = false;
      for (int i = 0; i < m; ++i) {
        if (!(z >> i & 1)) continue;
        if (g(i, j) > 0) pos = true;
        if (g(i, j) < 0) neg = true;
      }
      repelling = (pos != neg);  // nonzero entries, all one sign
    }
    if (!repelling) {
      rep.all_repelling = false;
      std::vector<int> zs;
      for (int i = 0; i < m; ++i)
        if (z >> i & 1) zs.push_back(i);
      rep.failing_zero_sets.push_back(std::move(zs));
    }
  }
  return rep;
}

/// FNV-1a content hash of the canonical rendered text, as 16 hex digits.
inline std::string network_digest(const ReactionNetwork& net) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : render(net)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace crncert
