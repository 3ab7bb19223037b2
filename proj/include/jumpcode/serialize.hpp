#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "jumpcode/codes.hpp"
#include "jumpcode/designs.hpp"
#include "jumpcode/dynamics.hpp"
#include "jumpcode/state.hpp"
#include "jumpcode/trajectory.hpp"

namespace jumpcode {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// States.  {"n": 4, "terms": [{"basis": "1100", "re": .., "im": ..}, ..]}
// with terms sorted by basis string; the term map already iterates in that
// order, so output is byte-stable.
// ---------------------------------------------------------------------------

inline Json state_to_json(const StateVector& psi) {
  Json terms = Json::array();
  for (const auto& [b, a] : psi.terms())
    terms.push_back({{"basis", b.str()}, {"re", a.real()}, {"im", a.imag()}});
  return Json{{"n", psi.n()}, {"terms", std::move(terms)}};
}

inline StateVector state_from_json(const Json& j) {
  try {
    const int n = j.at("n").get<int>();
    StateVector::TermMap map;
    for (const auto& term : j.at("terms")) {
      const BasisState b =
          BasisState::from_string(term.at("basis").get<std::string>());
      if (b.n() != n) throw MalformedInput("basis length differs from n");
      map[b] += Complex{term.at("re").get<double>(),
                        term.at("im").get<double>()};
    }
    return StateVector(n, std::move(map));
  } catch (const Json::exception& e) {
    throw MalformedInput(std::string("bad state JSON: ") + e.what());
  } catch (const Error& e) {
    throw MalformedInput(std::string("bad state JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Codebooks.  {"n":…, "k":…, "label":…, "codewords":[<state>…]}
// ---------------------------------------------------------------------------

inline Json codebook_to_json(const Codebook& cb) {
  Json words = Json::array();
  for (const auto& c : cb.codewords) words.push_back(state_to_json(c));
  return Json{{"n", cb.n},
              {"k", cb.k},
              {"label", cb.label},
              {"codewords", std::move(words)}};
}

inline Codebook codebook_from_json(const Json& j) {
  try {
    Codebook cb;
    cb.n = j.at("n").get<int>();
    cb.k = j.at("k").get<int>();
    cb.label = j.value("label", std::string{});
    for (const auto& w : j.at("codewords"))
      cb.codewords.push_back(state_from_json(w));
    return cb;
  } catch (const Json::exception& e) {
    throw MalformedInput(std::string("bad codebook JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Condition reports.  Per-pattern entries use the pinned keys
// {"pattern":[..], "lambda":…, "max_offdiag":…, "pass":…}.  Despite its
// name, "max_offdiag" is the worst deviation of the whole Gram matrix from
// Lambda_e * delta_ij — unequal diagonals count too; the key is kept for
// schema compatibility.
// ---------------------------------------------------------------------------

inline Json complex_to_json(const Complex& z) {
  return Json::array({z.real(), z.imag()});
}

inline Json gram_to_json(const std::vector<std::vector<Complex>>& gram) {
  Json rows = Json::array();
  for (const auto& row : gram) {
    Json r = Json::array();
    for (const Complex& z : row) r.push_back(complex_to_json(z));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline Json report_to_json(const ConditionReport& report) {
  Json patterns = Json::array();
  for (const auto& pc : report.patterns) {
    Json entry{{"pattern", pc.pattern},
               {"lambda", pc.lambda},
               {"max_offdiag", pc.max_deviation},
               {"pass", pc.pass},
               {"repeated", pc.repeated},
               {"gram", gram_to_json(pc.gram)}};
    if (!pc.class_block_counts.empty())
      entry["class_block_counts"] = pc.class_block_counts;
    patterns.push_back(std::move(entry));
  }
  return Json{{"t", report.t},
              {"tolerance", report.tolerance},
              {"pass", report.pass},
              {"max_deviation", report.max_deviation},
              {"worst_pattern", report.worst_pattern},
              {"patterns", std::move(patterns)}};
}

inline Json knill_report_to_json(const FullKnillReport& report) {
  Json pairs = Json::array();
  for (const auto& pc : report.pairs)
    pairs.push_back({{"alpha", pc.alpha},
                     {"beta", pc.beta},
                     {"lambda", complex_to_json(pc.lambda)},
                     {"max_offdiag", pc.max_deviation},
                     {"pass", pc.pass},
                     {"gram", gram_to_json(pc.gram)}});
  Json violations = Json::array();
  for (const auto& v : report.violations)
    violations.push_back({{"alpha", v.alpha},
                          {"beta", v.beta},
                          {"i", v.i},
                          {"j", v.j},
                          {"value", complex_to_json(v.value)}});
  return Json{{"tolerance", report.tolerance},
              {"pass", report.pass},
              {"pairs", std::move(pairs)},
              {"violations", std::move(violations)}};
}

// ---------------------------------------------------------------------------
// Designs.  {"n":9, "k":3, "classes":[[[1,2,3],[4,5,6],…],…]}
// ---------------------------------------------------------------------------

inline Json design_to_json(const SeedDesign& d) {
  return Json{{"n", d.n}, {"k", d.k}, {"classes", d.classes}};
}

inline SeedDesign design_from_json(const Json& j) {
  try {
    SeedDesign d;
    d.n = j.at("n").get<int>();
    d.k = j.at("k").get<int>();
    d.classes =
        j.at("classes").get<std::vector<std::vector<Block>>>();
    return d;
  } catch (const Json::exception& e) {
    throw MalformedInput(std::string("bad design JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Gate lists.  [{"gate":"H","q":1},{"gate":"CNOT","c":1,"t":2},…]
// ---------------------------------------------------------------------------

inline Json gates_to_json(const GateList& gates) {
  Json out = Json::array();
  for (const Gate& g : gates) {
    switch (g.kind) {
      case Gate::Kind::X:
        out.push_back({{"gate", "X"}, {"q", g.q1}});
        break;
      case Gate::Kind::H:
        out.push_back({{"gate", "H"}, {"q", g.q1}});
        break;
      case Gate::Kind::Cnot:
        out.push_back({{"gate", "CNOT"}, {"c", g.q1}, {"t", g.q2}});
        break;
    }
  }
  return out;
}

inline GateList gates_from_json(const Json& j) {
  try {
    GateList gates;
    for (const auto& g : j) {
      const std::string kind = g.at("gate").get<std::string>();
      if (kind == "X")
        gates.push_back(Gate::x(g.at("q").get<int>()));
      else if (kind == "H")
        gates.push_back(Gate::h(g.at("q").get<int>()));
      else if (kind == "CNOT")
        gates.push_back(Gate::cnot(g.at("c").get<int>(), g.at("t").get<int>()));
      else
        throw MalformedInput("unknown gate kind '" + kind + "'");
    }
    return gates;
  } catch (const Json::exception& e) {
    throw MalformedInput(std::string("bad gate JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Density matrices.  {"n":…, "entries":[{"row":"01","col":"10","re":…,
// "im":…},…]} — nonzero entries in row-major order.
// ---------------------------------------------------------------------------

inline Json density_to_json(const DensityMatrix& rho) {
  Json entries = Json::array();
  for (std::uint64_t r = 0; r < rho.dim(); ++r)
    for (std::uint64_t c = 0; c < rho.dim(); ++c) {
      const Complex z = rho.at(r, c);
      if (z == Complex{0.0, 0.0}) continue;
      entries.push_back({{"row", BasisState(rho.n(), r).str()},
                         {"col", BasisState(rho.n(), c).str()},
                         {"re", z.real()},
                         {"im", z.imag()}});
    }
  return Json{{"n", rho.n()}, {"entries", std::move(entries)}};
}

// ---------------------------------------------------------------------------
// Fidelity curves as CSV: `t,fidelity_mean,fidelity_stderr,n_traj`, twelve
// significant digits.
// ---------------------------------------------------------------------------

inline std::string format_g12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string ensemble_to_csv(const EnsembleResult& result) {
  std::string out = "t,fidelity_mean,fidelity_stderr,n_traj\n";
  for (std::size_t s = 0; s < result.sample_times.size(); ++s) {
    out += format_g12(result.sample_times[s]);
    out += ',';
    out += format_g12(result.fidelity_mean[s]);
    out += ',';
    out += format_g12(result.fidelity_stderr[s]);
    out += ',';
    out += std::to_string(result.n_trajectories);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Files and provenance.
// ---------------------------------------------------------------------------

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error("short write to '" + path + "'");
}

inline Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw MalformedInput("invalid JSON in " + origin + ": " + e.what());
  }
}

/// FNV-1a 64-bit hash, rendered as 16 hex digits; used to fingerprint
/// report inputs.
inline std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace jumpcode
