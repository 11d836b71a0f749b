#pragma once

// The reference table of Néron–Severi lattices of K3 surfaces with finite
// automorphism group, loaded from a data file of `rank expression` records.
// Membership is decided by genus-invariant equality against the entries of
// the matching rank. The file is assumed complete for every rank between its
// smallest and largest entries; verdicts at uncovered ranks are inconclusive.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "k3mds/discriminant.hpp"
#include "k3mds/lattice_expr.hpp"

namespace k3mds {

struct KondoEntry {
  std::size_t rank = 0;
  std::string expr;
  Lattice lattice;
  GenusInvariants genus;
};

class KondoList {
 public:
  static KondoList parse(std::istream& in, const std::string& origin = "<stream>") {
    KondoList list;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      std::istringstream row(line);
      long rank_field;
      std::string expr;
      if (!(row >> rank_field) || !(row >> expr))
        throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                 ": record needs `rank expression`");
      KondoEntry e;
      e.expr = expr;
      e.lattice = parse_lattice(expr);
      e.rank = e.lattice.rank();
      if (rank_field < 1 || rank_field > 19)
        throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                 ": rank must be between 1 and 19");
      if (static_cast<std::size_t>(rank_field) != e.rank)
        throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                 ": stated rank does not match the expression");
      if (!is_hyperbolic(e.lattice))
        throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                 ": entry is not hyperbolic");
      e.genus = genus_invariants(e.lattice);
      list.entries_.push_back(std::move(e));
    }
    if (list.entries_.empty())
      throw std::runtime_error(origin + ": no records found");
    list.min_rank_ = list.max_rank_ = list.entries_.front().rank;
    for (const auto& e : list.entries_) {
      list.min_rank_ = std::min(list.min_rank_, e.rank);
      list.max_rank_ = std::max(list.max_rank_, e.rank);
    }
    return list;
  }

  static KondoList load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open data file: " + path);
    return parse(in, path);
  }

  const std::vector<KondoEntry>& entries() const { return entries_; }

  bool covers(std::size_t rank) const { return rank >= min_rank_ && rank <= max_rank_; }
  std::size_t min_rank() const { return min_rank_; }
  std::size_t max_rank() const { return max_rank_; }

  struct Membership {
    Tri result = Tri::Inconclusive;
    const KondoEntry* match = nullptr;
    std::string reason;
  };

  Membership contains(const GenusInvariants& g, const FqfIsoConfig& cfg = {}) const {
    Membership out;
    if (g.rank > 19) {
      // rank-20 Néron-Severi lattices always carry infinite automorphism
      // groups, so no table of finite-automorphism lattices reaches them
      out.result = Tri::No;
      out.reason = "rank 20 exceeds every finite-automorphism Néron-Severi lattice";
      return out;
    }
    if (!covers(g.rank)) {
      out.result = Tri::Inconclusive;
      out.reason = "data file does not cover rank " + std::to_string(g.rank);
      return out;
    }
    bool uncertain = false;
    for (const auto& e : entries_) {
      if (e.rank != g.rank) continue;
      auto gv = genus_equal(e.genus, g, cfg);
      if (gv.result == Tri::Yes) {
        out.result = Tri::Yes;
        out.match = &e;
        out.reason = "genus-equal to " + e.expr;
        return out;
      }
      if (gv.result == Tri::Inconclusive) uncertain = true;
    }
    out.result = uncertain ? Tri::Inconclusive : Tri::No;
    out.reason = uncertain ? "some comparisons were inconclusive"
                           : "no entry of rank " + std::to_string(g.rank) + " matches";
    return out;
  }

  Membership contains(const Lattice& l, const FqfIsoConfig& cfg = {}) const {
    return contains(genus_invariants(l), cfg);
  }

 private:
  std::vector<KondoEntry> entries_;
  std::size_t min_rank_ = 0, max_rank_ = 0;
};

}  // namespace k3mds
