#pragma once

// Command-line surface. Every command is a thin adapter over the library:
// parse arguments, call one pipeline, serialize the result. Machine output
// is schema-stable ordered JSON ("schema": 1); human output is plain text.
// Exit codes: 0 ok, 1 expectation mismatch (table1), 2 usage error, 3 data
// file missing, 4 inconclusive result under --strict.

#include <json.hpp>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "k3mds/classify.hpp"
#include "k3mds/cli_render.hpp"

namespace k3mds::cli {

struct Report {
  int exit_code = 0;
  std::string text;
  nlohmann::ordered_json payload;
  std::vector<std::string> warnings;
  bool inconclusive = false;
};

namespace detail {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Args {
  std::vector<std::string> positional;
  std::multimap<std::string, std::string> options;
  std::set<std::string> flags;

  bool has(const std::string& k) const { return flags.count(k) || options.count(k); }
  std::string get(const std::string& k, const std::string& fallback = "") const {
    auto it = options.find(k);
    return it == options.end() ? fallback : it->second;
  }
  std::vector<std::string> all(const std::string& k) const {
    std::vector<std::string> out;
    auto [lo, hi] = options.equal_range(k);
    for (auto it = lo; it != hi; ++it) out.push_back(it->second);
    return out;
  }
};

inline Args parse_args(const std::vector<std::string>& argv, std::size_t start,
                       const std::set<std::string>& value_opts,
                       const std::set<std::string>& flag_opts) {
  Args a;
  for (std::size_t i = start; i < argv.size(); ++i) {
    const std::string& s = argv[i];
    if (s.rfind("--", 0) == 0) {
      std::string name = s.substr(2);
      auto eq = name.find('=');
      if (eq != std::string::npos) {
        std::string key = name.substr(0, eq);
        if (!value_opts.count(key)) throw Usage("unknown option --" + key);
        a.options.insert({key, name.substr(eq + 1)});
        continue;
      }
      if (flag_opts.count(name)) {
        a.flags.insert(name);
        continue;
      }
      if (value_opts.count(name)) {
        if (i + 1 >= argv.size()) throw Usage("option --" + name + " needs a value");
        a.options.insert({name, argv[++i]});
        continue;
      }
      throw Usage("unknown option --" + name);
    }
    a.positional.push_back(s);
  }
  return a;
}

inline std::vector<Int> parse_int_vector(const std::string& csv) {
  std::vector<Int> v;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    Rat r = parse_rat(item);
    if (!is_integer(r)) throw Usage("expected an integer coordinate, got '" + item + "'");
    v.push_back(numerator(r));
  }
  if (v.empty()) throw Usage("empty vector");
  return v;
}

inline std::vector<std::vector<Int>> parse_vector_list(const std::string& s) {
  std::vector<std::vector<Int>> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) out.push_back(parse_int_vector(item));
  if (out.empty()) throw Usage("empty vector list");
  return out;
}

inline IntMatrix parse_matrix(const std::string& s, std::size_t n) {
  auto rows = parse_vector_list(s);
  if (rows.size() != n) throw Usage("matrix needs " + std::to_string(n) + " rows");
  for (const auto& r : rows)
    if (r.size() != n) throw Usage("matrix rows need " + std::to_string(n) + " entries");
  return from_rows(rows, n);
}

inline std::size_t basis_index(const Lattice& l, const std::string& name) {
  for (std::size_t i = 0; i < l.basis_names.size(); ++i)
    if (l.basis_names[i] == name) return i;
  throw Usage("no basis vector named '" + name + "'");
}

}  // namespace detail

inline Report run(const std::vector<std::string>& argv);

namespace detail {

inline const char* kUsage =
    "usage: k3mds [--json] [--strict] <command> ...\n"
    "commands:\n"
    "  lattice <expr> [--disc] [--invariants]\n"
    "  overlattices <expr> --index 2\n"
    "  complement <expr> --vectors v1;v2;...      (vectors are comma-separated)\n"
    "  represents <expr> --target t [--dot name=c]... [--moduli m1,m2,...] [--bound B]\n"
    "  classify <M-expr> --kondo FILE\n"
    "  table1 --kondo FILE\n"
    "  family --sd d | --qd d [--kondo FILE]\n"
    "  isometry <expr> --matrix r1;r2;... [--restrict v1;v2;...]\n";

inline Report cmd_lattice(const Args& a) {
  if (a.positional.size() != 1) throw Usage("lattice: exactly one expression expected");
  Lattice l = parse_lattice(a.positional[0]);
  Report rep;
  rep.payload = render::lattice_json(a.positional[0], l, a.has("disc"));
  rep.text = render::lattice_text(a.positional[0], l, a.has("disc"));
  return rep;
}

inline Report cmd_overlattices(const Args& a) {
  if (a.positional.size() != 1) throw Usage("overlattices: exactly one expression expected");
  Int index(a.get("index", "2"));
  Lattice l = parse_lattice(a.positional[0]);
  auto e = even_overlattices(l, index);
  Report rep;
  rep.payload = render::overlattices_json(a.positional[0], index, e);
  rep.text = render::overlattices_text(a.positional[0], index, e);
  for (const auto& c : e.classes) rep.inconclusive = rep.inconclusive || c.dedup_uncertain;
  return rep;
}

inline Report cmd_complement(const Args& a) {
  if (a.positional.size() != 1) throw Usage("complement: exactly one expression expected");
  if (!a.has("vectors")) throw Usage("complement: --vectors is required");
  Lattice l = parse_lattice(a.positional[0]);
  auto vectors = parse_vector_list(a.get("vectors"));
  auto c = orthogonal_complement(l, vectors);
  Report rep;
  rep.payload = render::complement_json(a.positional[0], vectors, c);
  rep.text = render::complement_text(a.positional[0], c);
  return rep;
}

inline Report cmd_represents(const Args& a) {
  if (a.positional.size() != 1) throw Usage("represents: exactly one expression expected");
  if (!a.has("target")) throw Usage("represents: --target is required");
  Lattice l = parse_lattice(a.positional[0]);
  ConstraintSystem sys;
  sys.target = Int(a.get("target"));
  for (const auto& dot : a.all("dot")) {
    auto eq = dot.find('=');
    if (eq == std::string::npos) throw Usage("--dot expects name=value");
    std::size_t idx = basis_index(l, dot.substr(0, eq));
    std::vector<Int> n(l.rank());
    n[idx] = 1;
    sys.linear.push_back({n, Int(dot.substr(eq + 1))});
  }
  ReprConfig cfg;
  if (a.has("moduli")) {
    cfg.moduli.clear();
    for (const auto& m : parse_int_vector(a.get("moduli"))) cfg.moduli.push_back(m);
  }
  if (a.has("bound")) cfg.search_bound = std::stol(a.get("bound"));
  ReprVerdict v = represents(l, sys, cfg);
  Report rep;
  rep.payload = render::represents_json(a.positional[0], sys, v);
  rep.text = render::represents_text(v);
  rep.inconclusive = (v.kind == ReprVerdict::Unknown);
  return rep;
}

inline Report cmd_classify(const Args& a) {
  if (a.positional.size() != 1) throw Usage("classify: exactly one expression expected");
  if (!a.has("kondo")) throw Usage("classify: --kondo FILE is required");
  KondoList kondo = KondoList::load(a.get("kondo"));
  Lattice m = parse_lattice(a.positional[0]);
  PairVerdict pv = classify_pair(m, kondo);
  Report rep;
  rep.payload = render::classify_json(a.positional[0], pv);
  rep.text = render::classify_text(a.positional[0], pv);
  for (const auto& c : pv.candidates)
    rep.inconclusive = rep.inconclusive || c.admissible == Tri::Inconclusive;
  return rep;
}

inline Report cmd_table1(const Args& a) {
  if (!a.has("kondo")) throw Usage("table1: --kondo FILE is required");
  KondoList kondo = KondoList::load(a.get("kondo"));
  TableReport t = generate_table1(kondo);
  Report rep;
  rep.payload = render::table_json(t);
  rep.text = render::table_text(t);
  if (!t.all_matched) rep.exit_code = 1;
  return rep;
}

inline Report cmd_family(const Args& a) {
  bool sd = a.has("sd"), qd = a.has("qd");
  if (sd == qd) throw Usage("family: exactly one of --sd or --qd is required");
  Int d(a.get(sd ? "sd" : "qd"));
  std::optional<KondoList> kondo;
  if (a.has("kondo")) kondo = KondoList::load(a.get("kondo"));
  FamilyVerdict v =
      family_verdict(d, sd ? FamilyMode::Sd : FamilyMode::Qd, kondo ? &*kondo : nullptr);
  Report rep;
  rep.payload = render::family_json(v);
  rep.text = render::family_text(v);
  rep.inconclusive = (v.verdict == FamilyVerdict::Unknown ||
                      v.verdict == FamilyVerdict::AdmissibleConditional);
  return rep;
}

inline Report cmd_isometry(const Args& a) {
  if (a.positional.size() != 1) throw Usage("isometry: exactly one expression expected");
  if (!a.has("matrix")) throw Usage("isometry: --matrix is required");
  Lattice l = parse_lattice(a.positional[0]);
  IntMatrix m = parse_matrix(a.get("matrix"), l.rank());
  IsometryReport rep_iso = isometry_order(m, l);
  Report rep;
  std::optional<IntMatrix> restricted;
  if (a.has("restrict")) {
    auto rows = parse_vector_list(a.get("restrict"));
    restricted = restrict_isometry(m, l, from_rows(rows, l.rank()));
  }
  rep.payload = render::isometry_json(a.positional[0], rep_iso, restricted);
  rep.text = render::isometry_text(rep_iso, restricted);
  return rep;
}

}  // namespace detail

inline Report run(const std::vector<std::string>& argv) {
  using namespace detail;
  Report rep;
  try {
    std::vector<std::string> args = argv;
    bool json = false, strict = false;
    for (auto it = args.begin(); it != args.end();) {
      if (*it == "--json") {
        json = true;
        it = args.erase(it);
      } else if (*it == "--strict") {
        strict = true;
        it = args.erase(it);
      } else {
        ++it;
      }
    }
    if (args.empty()) throw Usage("no command given");
    const std::string cmd = args[0];
    static const std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>>
        spec_of = {
            {"lattice", {{}, {"disc", "invariants"}}},
            {"overlattices", {{"index"}, {}}},
            {"complement", {{"vectors"}, {}}},
            {"represents", {{"target", "dot", "moduli", "bound"}, {}}},
            {"classify", {{"kondo"}, {}}},
            {"table1", {{"kondo"}, {}}},
            {"family", {{"sd", "qd", "kondo"}, {}}},
            {"isometry", {{"matrix", "restrict"}, {}}},
        };
    auto spec_it = spec_of.find(cmd);
    if (spec_it == spec_of.end()) throw Usage("unknown command '" + cmd + "'");
    Args a = parse_args(args, 1, spec_it->second.first, spec_it->second.second);
    if (cmd == "lattice") rep = cmd_lattice(a);
    else if (cmd == "overlattices") rep = cmd_overlattices(a);
    else if (cmd == "complement") rep = cmd_complement(a);
    else if (cmd == "represents") rep = cmd_represents(a);
    else if (cmd == "classify") rep = cmd_classify(a);
    else if (cmd == "table1") rep = cmd_table1(a);
    else if (cmd == "family") rep = cmd_family(a);
    else if (cmd == "isometry") rep = cmd_isometry(a);
    if (strict && rep.inconclusive && rep.exit_code == 0) rep.exit_code = 4;
    if (json) rep.text = rep.payload.dump(2) + "\n";
    return rep;
  } catch (const Usage& e) {
    rep.exit_code = 2;
    rep.text = std::string("error: ") + e.what() + "\n" + kUsage;
    return rep;
  } catch (const ParseError& e) {
    rep.exit_code = 2;
    rep.text = std::string("error: ") + e.what() + "\n";
    return rep;
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    rep.exit_code = msg.find("cannot open data file") != std::string::npos ? 3 : 2;
    rep.text = "error: " + msg + "\n";
    return rep;
  } catch (const std::exception& e) {
    rep.exit_code = 2;
    rep.text = std::string("error: ") + e.what() + "\n";
    return rep;
  }
}

}  // namespace k3mds::cli
