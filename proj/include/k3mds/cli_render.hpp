#pragma once

// Serialization of library results to ordered JSON (schema 1) and to plain
// text. Arbitrary-precision integers are rendered as decimal strings,
// rationals as "p/q".

#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "k3mds/classify.hpp"

namespace k3mds::render {

using ordered_json = nlohmann::ordered_json;

inline ordered_json json_int(const Int& x) { return x.str(); }
inline ordered_json json_rat(const Rat& x) { return to_string(x); }

inline ordered_json json_vec(const std::vector<Int>& v) {
  ordered_json a = ordered_json::array();
  for (const auto& x : v) a.push_back(json_int(x));
  return a;
}

inline ordered_json json_vec(const std::vector<Rat>& v) {
  ordered_json a = ordered_json::array();
  for (const auto& x : v) a.push_back(json_rat(x));
  return a;
}

inline ordered_json json_matrix(const IntMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(json_vec(m.row(i)));
  return rows;
}

inline const char* tri_name(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    case Tri::Inconclusive: return "inconclusive";
  }
  return "?";
}

inline ordered_json json_verdict(const ReprVerdict& v) {
  ordered_json j;
  j["kind"] = to_string(v.kind);
  if (v.kind == ReprVerdict::Witness) j["witness"] = json_vec(v.witness);
  if (v.kind == ReprVerdict::ObstructedMod) j["modulus"] = json_int(v.modulus);
  if (v.kind == ReprVerdict::Unknown) j["bound"] = v.bound;
  if (!v.note.empty()) j["note"] = v.note;
  if (!v.skipped_moduli.empty()) j["skipped_moduli"] = json_vec(v.skipped_moduli);
  return j;
}

inline std::string verdict_text(const ReprVerdict& v) {
  std::ostringstream out;
  out << to_string(v.kind);
  if (v.kind == ReprVerdict::Witness) {
    out << " (";
    for (std::size_t i = 0; i < v.witness.size(); ++i)
      out << (i ? "," : "") << v.witness[i].str();
    out << ")";
  }
  if (v.kind == ReprVerdict::ObstructedMod) out << " mod " << v.modulus.str();
  if (v.kind == ReprVerdict::Unknown) out << " (bound " << v.bound << ")";
  return out.str();
}

inline std::string group_text(const std::vector<Int>& factors) {
  if (factors.empty()) return "trivial";
  std::ostringstream out;
  for (std::size_t i = 0; i < factors.size(); ++i)
    out << (i ? " x " : "") << "Z/" << factors[i].str();
  return out.str();
}

inline ordered_json disc_json(const FiniteQuadraticForm& fqf) {
  ordered_json j;
  j["order"] = json_int(fqf.group_order());
  j["invariant_factors"] = json_vec(fqf.invariant_factors);
  j["q_integral"] = fqf.q_is_integral();
  ordered_json gens = ordered_json::array();
  for (std::size_t i = 0; i < fqf.ngens(); ++i) {
    ordered_json g;
    g["order"] = json_int(fqf.invariant_factors[i]);
    g["lift"] = json_vec(fqf.generator_lifts[i]);
    std::vector<Int> e(fqf.ngens());
    e[i] = 1;
    g["q"] = json_rat(fqf.q(FqfElement{e}));
    gens.push_back(g);
  }
  j["generators"] = gens;
  return j;
}

inline ordered_json lattice_json(const std::string& expr, const Lattice& l, bool with_disc) {
  ordered_json j;
  j["schema"] = 1;
  j["command"] = "lattice";
  j["expr"] = expr;
  auto inv = invariants(l);
  j["rank"] = inv.rank;
  j["signature"] = {{"positive", inv.sig_positive},
                    {"negative", inv.sig_negative},
                    {"zero", inv.sig_zero}};
  j["determinant"] = json_int(inv.determinant);
  j["even"] = true;
  j["hyperbolic"] = inv.hyperbolic;
  j["gram"] = json_matrix(l.gram);
  if (with_disc) j["discriminant"] = disc_json(discriminant_form(l));
  return j;
}

inline std::string lattice_text(const std::string& expr, const Lattice& l, bool with_disc) {
  auto inv = invariants(l);
  std::ostringstream out;
  out << "lattice " << expr << "\n";
  out << "  rank " << inv.rank << ", signature (" << inv.sig_positive << ","
      << inv.sig_negative << ")";
  if (inv.sig_zero) out << " corank " << inv.sig_zero;
  out << ", det " << inv.determinant.str() << ", even, "
      << (inv.hyperbolic ? "hyperbolic" : "not hyperbolic") << "\n";
  if (with_disc) {
    auto fqf = discriminant_form(l);
    out << "  discriminant group " << group_text(fqf.invariant_factors) << " (order "
        << fqf.group_order().str() << "), q "
        << (fqf.q_is_integral() ? "integral" : "half-integral") << "\n";
    for (std::size_t i = 0; i < fqf.ngens(); ++i) {
      std::vector<Int> e(fqf.ngens());
      e[i] = 1;
      out << "    gen " << i + 1 << ": order " << fqf.invariant_factors[i].str() << ", q = "
          << to_string(fqf.q(FqfElement{e})) << ", lift (";
      for (std::size_t k = 0; k < fqf.generator_lifts[i].size(); ++k)
        out << (k ? "," : "") << to_string(fqf.generator_lifts[i][k]);
      out << ")\n";
    }
  }
  return out.str();
}

inline ordered_json overlattices_json(const std::string& expr, const Int& index,
                                      const OverlatticeEnumeration& e) {
  ordered_json j;
  j["schema"] = 1;
  j["command"] = "overlattices";
  j["expr"] = expr;
  j["index"] = json_int(index);
  j["total_isotropic_classes"] = e.total_isotropic_classes;
  ordered_json classes = ordered_json::array();
  for (const auto& c : e.classes) {
    ordered_json cj;
    cj["index"] = json_int(c.index);
    ordered_json glues = ordered_json::array();
    for (const auto& g : c.glues) glues.push_back(json_vec(g));
    cj["glues"] = glues;
    cj["gram"] = json_matrix(c.lattice.gram);
    cj["determinant"] = json_int(det(c.lattice.gram));
    cj["invariant_factors"] = json_vec(c.genus.fqf->invariant_factors);
    cj["q_integral"] = c.integral_q;
    if (c.dedup_uncertain) cj["dedup_uncertain"] = true;
    classes.push_back(cj);
  }
  j["classes"] = classes;
  return j;
}

inline std::string overlattices_text(const std::string& expr, const Int& index,
                                     const OverlatticeEnumeration& e) {
  std::ostringstream out;
  out << "even overlattices of " << expr << " of index " << index.str() << "\n";
  out << "  isotropic classes: " << e.total_isotropic_classes << ", genus classes: "
      << e.classes.size() << "\n";
  std::size_t i = 0;
  for (const auto& c : e.classes) {
    out << "  class " << ++i << ": det " << det(c.lattice.gram).str() << ", disc "
        << group_text(c.genus.fqf->invariant_factors) << ", q "
        << (c.integral_q ? "integral" : "half-integral") << ", glue classes " << c.glues.size()
        << ", e.g. (";
    for (std::size_t k = 0; k < c.glues[0].size(); ++k)
      out << (k ? "," : "") << to_string(c.glues[0][k]);
    out << ")\n";
  }
  return out.str();
}

inline ordered_json complement_json(const std::string& expr,
                                    const std::vector<std::vector<Int>>& vectors,
                                    const ComplementResult& c) {
  ordered_json j;
  j["schema"] = 1;
  j["command"] = "complement";
  j["expr"] = expr;
  ordered_json vs = ordered_json::array();
  for (const auto& v : vectors) vs.push_back(json_vec(v));
  j["vectors"] = vs;
  j["rank"] = c.lattice.rank();
  j["gram"] = json_matrix(c.lattice.gram);
  j["embedding"] = json_matrix(c.embedding);
  j["span_rank"] = c.span_rank;
  j["span_degenerate"] = c.span_degenerate;
  j["determinant"] = json_int(det(c.lattice.gram));
  return j;
}

inline std::string complement_text(const std::string& expr, const ComplementResult& c) {
  std::ostringstream out;
  out << "orthogonal complement in " << expr << "\n";
  out << "  rank " << c.lattice.rank() << ", det " << det(c.lattice.gram).str()
      << (c.span_degenerate ? ", span degenerate" : "") << "\n";
  for (std::size_t i = 0; i < c.embedding.rows(); ++i) {
    out << "  basis " << i + 1 << ": (";
    for (std::size_t k = 0; k < c.embedding.cols(); ++k)
      out << (k ? "," : "") << c.embedding(i, k).str();
    out << ")\n";
  }
  return out.str();
}

inline ordered_json represents_json(const std::string& expr, const ConstraintSystem& sys,
                                    const ReprVerdict& v) {
  ordered_json j;
  j["schema"] = 1;
  j["command"] = "represents";
  j["expr"] = expr;
  j["target"] = json_int(sys.target);
  ordered_json lins = ordered_json::array();
  for (const auto& [vec, val] : sys.linear) {
    ordered_json lj;
    lj["vector"] = json_vec(vec);
    lj["value"] = json_int(val);
    lins.push_back(lj);
  }
  j["linear"] = lins;
  j["verdict"] = json_verdict(v);
  return j;
}

inline std::string represents_text(const ReprVerdict& v) {
  return "verdict: " + verdict_text(v) + (v.note.empty() ? "" : " [" + v.note + "]") + "\n";
}

inline ordered_json classify_json(const std::string& expr, const PairVerdict& pv) {
  ordered_json j;
  j["schema"] = 1;
  j["command"] = "classify";
  j["m_expr"] = expr;
  j["m_in_list"] = tri_name(pv.m_in_list);
  ordered_json cands = ordered_json::array();
  for (const auto& c : pv.candidates) {
    ordered_json cj;
    cj["display"] = c.display;
    cj["index"] = json_int(c.index);
    cj["l_in_list"] = tri_name(c.l_in_list);
    if (c.bx_evaluated) cj["bx"] = json_verdict(c.bx);
    cj["admissible"] = tri_name(c.admissible);
    cj["reasons"] = c.reasons;
    ordered_json glues = ordered_json::array();
    for (const auto& g : c.glues) glues.push_back(json_vec(g));
    if (!c.glues.empty()) cj["glues"] = glues;
    cands.push_back(cj);
  }
  j["candidates"] = cands;
  return j;
}

inline std::string classify_text(const std::string& expr, const PairVerdict& pv) {
  std::ostringstream out;
  out << "classify M = " << expr << " (in list: " << tri_name(pv.m_in_list) << ")\n";
  std::size_t i = 0;
  for (const auto& c : pv.candidates) {
    out << "  candidate " << ++i << ": " << c.display << ", index " << c.index.str()
        << ", L in list: " << tri_name(c.l_in_list);
    if (c.bx_evaluated) out << ", B_X: " << verdict_text(c.bx);
    out << ", admissible: " << tri_name(c.admissible) << "\n";
    for (const auto& r : c.reasons) out << "      - " << r << "\n";
  }
  return out.str();
}

inline ordered_json table_json(const TableReport& t) {
  ordered_json j;
  j["schema"] = 1;
  j["command"] = "table1";
  ordered_json rows = ordered_json::array();
  for (const auto& r : t.rows) {
    ordered_json rj;
    rj["rho"] = r.rho;
    rj["L"] = r.l_expr;
    rj["M"] = r.m_expr;
    rj["index"] = json_int(r.index);
    rj["bx"] = json_verdict(r.bx);
    rj["matched"] = r.matched;
    rows.push_back(rj);
  }
  j["rows"] = rows;
  j["row_count"] = t.rows.size();
  j["all_matched"] = t.all_matched;
  j["problems"] = t.problems;
  return j;
}

inline std::string table_text(const TableReport& t) {
  std::ostringstream out;
  out << "rho  L                M                index  B_X\n";
  for (const auto& r : t.rows) {
    std::string l = r.l_expr, m = r.m_expr;
    l.resize(std::max<std::size_t>(l.size(), 16), ' ');
    m.resize(std::max<std::size_t>(m.size(), 16), ' ');
    out << (r.rho < 10 ? " " : "") << r.rho << "   " << l << " " << m << " " << r.index.str()
        << "      " << verdict_text(r.bx) << (r.matched ? "" : "  [UNMATCHED]") << "\n";
  }
  out << t.rows.size() << " rows, " << (t.all_matched ? "all matching" : "MISMATCH") << "\n";
  for (const auto& p : t.problems) out << "problem: " << p << "\n";
  return out.str();
}

inline ordered_json family_json(const FamilyVerdict& v) {
  ordered_json j;
  j["schema"] = 1;
  j["command"] = "family";
  j["mode"] = v.mode == FamilyMode::Sd ? "Sd" : "Qd";
  j["d"] = json_int(v.d);
  j["verdict"] = to_string(v.verdict);
  j["y_mds"] = tri_name(v.y_mds);
  j["y_reason"] = v.y_reason;
  j["bx"] = json_verdict(v.bx);
  j["contracted_ns"] = v.contracted_ns.label;
  j["reasons"] = v.reasons;
  return j;
}

inline std::string family_text(const FamilyVerdict& v) {
  std::ostringstream out;
  out << "family " << (v.mode == FamilyMode::Sd ? "S_d" : "Q_d") << " at d = " << v.d.str()
      << ": " << to_string(v.verdict) << "\n";
  out << "  contracted NS " << v.contracted_ns.label << ", Mori Dream: " << tri_name(v.y_mds)
      << " (" << v.y_reason << ")\n";
  out << "  B_X: " << verdict_text(v.bx) << "\n";
  for (const auto& r : v.reasons) out << "  - " << r << "\n";
  return out.str();
}

inline ordered_json isometry_json(const std::string& expr, const IsometryReport& r,
                                  const std::optional<IntMatrix>& restricted) {
  ordered_json j;
  j["schema"] = 1;
  j["command"] = "isometry";
  j["expr"] = expr;
  j["matrix"] = json_matrix(r.matrix);
  j["is_isometry"] = r.is_isometry;
  j["finite"] = r.finite;
  if (r.order) j["order"] = *r.order;
  j["certificate"] = r.certificate;
  if (restricted) j["restriction"] = json_matrix(*restricted);
  return j;
}

inline std::string isometry_text(const IsometryReport& r,
                                 const std::optional<IntMatrix>& restricted) {
  std::ostringstream out;
  out << (r.is_isometry ? "isometry" : "NOT an isometry") << ", order ";
  if (r.finite)
    out << *r.order;
  else
    out << "infinite";
  out << " [" << r.certificate << "]\n";
  if (restricted) {
    out << "restriction:\n";
    for (std::size_t i = 0; i < restricted->rows(); ++i) {
      out << "  (";
      for (std::size_t k = 0; k < restricted->cols(); ++k)
        out << (k ? "," : "") << (*restricted)(i, k).str();
      out << ")\n";
    }
  }
  return out.str();
}

}  // namespace k3mds::render
