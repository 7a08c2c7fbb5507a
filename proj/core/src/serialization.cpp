#include "incompat/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace incompat {

using json = nlohmann::ordered_json;

// ------------------------------------------------------------ primitives --

namespace {

std::string line_anchor(const std::string& text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

cplx parse_entry(const json& cell, const std::string& where) {
  if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
    throw ValidationError(where + ": complex entries must be [re, im] number pairs");
  const double re = cell[0].get<double>();
  const double im = cell[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im))
    throw ValidationError(where + ": non-finite number");
  return {re, im};
}

ComplexMatrix parse_matrix(const json& node, const std::string& where) {
  if (!node.is_array() || node.empty()) throw ValidationError(where + ": expected a matrix");
  const int rows = static_cast<int>(node.size());
  if (!node[0].is_array() || node[0].empty())
    throw ValidationError(where + ": matrix rows must be arrays");
  const int cols = static_cast<int>(node[0].size());
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!node[i].is_array() || static_cast<int>(node[i].size()) != cols)
      throw ValidationError(where + ": ragged matrix rows");
    for (int j = 0; j < cols; ++j) m(i, j) = parse_entry(node[i][j], where);
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(r));
  }
  return rows;
}

int require_int(const json& doc, const char* key, int min_value) {
  if (!doc.contains(key) || !doc[key].is_number_integer())
    throw ValidationError(std::string("missing or non-integer \"") + key + "\"");
  const int v = doc[key].get<int>();
  if (v < min_value)
    throw ValidationError(std::string("\"") + key + "\" must be at least " +
                          std::to_string(min_value));
  return v;
}

FunctionalContext parse_context(const json& doc) {
  FunctionalContext ctx;
  if (!doc.contains("context")) return ctx;
  const json& c = doc["context"];
  if (!c.is_object()) throw ValidationError("\"context\" must be an object");
  if (c.contains("observable")) {
    try {
      ctx.observable = HermitianMatrix(parse_matrix(c["observable"], "context.observable"));
    } catch (const Error& e) {
      throw ValidationError(std::string("context.observable: ") + e.what());
    }
  }
  if (c.contains("basis")) {
    if (!c["basis"].is_array() || c["basis"].empty())
      throw ValidationError("context.basis must be a non-empty array of matrices");
    std::vector<ComplexMatrix> projectors;
    for (size_t i = 0; i < c["basis"].size(); ++i)
      projectors.push_back(
          parse_matrix(c["basis"][i], "context.basis[" + std::to_string(i) + "]"));
    try {
      ctx.basis = ReferenceBasis(std::move(projectors));
    } catch (const Error& e) {
      throw ValidationError(std::string("context.basis: ") + e.what());
    }
  }
  return ctx;
}

// header fields plus the schema-complete element map, with unexpected or
// missing "x:a" keys called out by name
std::vector<std::vector<json>> collect_elements(const json& doc, int settings,
                                                const std::vector<int>& outcomes) {
  if (!doc.contains("elements") || !doc["elements"].is_object())
    throw ValidationError("missing \"elements\" object");
  const json& el = doc["elements"];
  std::set<std::string> expected;
  std::vector<std::vector<json>> out(settings);
  for (int x = 0; x < settings; ++x) {
    out[x].resize(outcomes[x]);
    for (int a = 0; a < outcomes[x]; ++a) {
      const std::string key = std::to_string(x) + ":" + std::to_string(a);
      expected.insert(key);
      if (!el.contains(key)) throw ValidationError("missing element \"" + key + "\"");
      out[x][a] = el[key];
    }
  }
  for (const auto& item : el.items())
    if (!expected.count(item.key()))
      throw ValidationError("unexpected element key \"" + item.key() + "\"");
  return out;
}

} // namespace

// --------------------------------------------------------------- parsing --

AssemblageDocument parse_assemblage(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError("JSON parse error at " + line_anchor(json_text, e.byte) + ": " +
                          e.what());
  }
  if (!doc.is_object()) throw ValidationError("top-level JSON value must be an object");
  if (!doc.contains("kind") || !doc["kind"].is_string())
    throw ValidationError("missing or non-string \"kind\"");

  AssemblageDocument out;
  out.kind = doc["kind"].get<std::string>();
  const int dim = require_int(doc, "dim", 1);
  const int settings = require_int(doc, "settings", 1);
  if (!doc.contains("outcomes") || !doc["outcomes"].is_array() ||
      static_cast<int>(doc["outcomes"].size()) != settings)
    throw ValidationError("\"outcomes\" must list one outcome count per setting");
  std::vector<int> outcomes;
  for (const auto& n : doc["outcomes"]) {
    if (!n.is_number_integer() || n.get<int>() < 1)
      throw ValidationError("\"outcomes\" entries must be positive integers");
    outcomes.push_back(n.get<int>());
  }
  const std::vector<std::vector<json>> nodes = collect_elements(doc, settings, outcomes);

  auto fail = [](const std::string& key, const Error& e) -> void {
    throw ValidationError("element \"" + key + "\": " + e.what());
  };

  if (out.kind == "state" || out.kind == "measurement") {
    std::vector<std::vector<SubnormalizedState>> states;
    std::vector<std::vector<Effect>> effects;
    for (int x = 0; x < settings; ++x) {
      std::vector<SubnormalizedState> srow;
      std::vector<Effect> erow;
      for (int a = 0; a < outcomes[x]; ++a) {
        const std::string key = std::to_string(x) + ":" + std::to_string(a);
        ComplexMatrix m = parse_matrix(nodes[x][a], "element \"" + key + "\"");
        if (m.rows() != dim || m.cols() != dim)
          throw ValidationError("element \"" + key + "\": expected a " + std::to_string(dim) +
                                "x" + std::to_string(dim) + " matrix");
        try {
          if (out.kind == "state")
            srow.emplace_back(m);
          else
            erow.emplace_back(m);
        } catch (const Error& e) {
          fail(key, e);
        }
      }
      states.push_back(std::move(srow));
      effects.push_back(std::move(erow));
    }
    if (out.kind == "state")
      out.state.emplace(std::move(states));
    else
      out.measurement.emplace(std::move(effects));
  } else if (out.kind == "instrument") {
    std::vector<std::vector<std::vector<ComplexMatrix>>> kraus(settings);
    for (int x = 0; x < settings; ++x) {
      kraus[x].resize(outcomes[x]);
      for (int a = 0; a < outcomes[x]; ++a) {
        const std::string key = std::to_string(x) + ":" + std::to_string(a);
        const json& list = nodes[x][a];
        if (!list.is_array() || list.empty())
          throw ValidationError("element \"" + key +
                                "\": instrument entries are arrays of Kraus matrices");
        for (size_t k = 0; k < list.size(); ++k) {
          ComplexMatrix m = parse_matrix(
              list[k], "element \"" + key + "\" kraus[" + std::to_string(k) + "]");
          if (m.cols() != dim)
            throw ValidationError("element \"" + key + "\": Kraus columns must equal dim");
          kraus[x][a].push_back(std::move(m));
        }
      }
    }
    try {
      out.instrument.emplace(std::move(kraus));
    } catch (const Error& e) {
      throw ValidationError(std::string("instrument invalid: ") + e.what());
    }
  } else {
    throw ValidationError("unknown kind \"" + out.kind +
                          "\" (expected state, measurement or instrument)");
  }
  out.context = parse_context(doc);
  return out;
}

AssemblageDocument load_assemblage(const std::string& path) {
  return parse_assemblage(read_text_file(path));
}

namespace {

json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": JSON parse error at " + line_anchor(text, e.byte) + ": " +
                          e.what());
  }
}

} // namespace

HermitianMatrix load_observable(const std::string& path) {
  try {
    return HermitianMatrix(parse_matrix(parse_json_file(path), "observable"));
  } catch (const Error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

ReferenceBasis load_basis(const std::string& path) {
  const json doc = parse_json_file(path);
  if (!doc.is_array() || doc.empty())
    throw ValidationError(path + ": expected a non-empty array of projector matrices");
  std::vector<ComplexMatrix> projectors;
  for (size_t i = 0; i < doc.size(); ++i)
    projectors.push_back(parse_matrix(doc[i], path + ": basis[" + std::to_string(i) + "]"));
  try {
    return ReferenceBasis(std::move(projectors));
  } catch (const Error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

// --------------------------------------------------------------- writers --

namespace {

void append_context(json& doc, const FunctionalContext& ctx) {
  if (!ctx.observable && !ctx.basis) return;
  json c = json::object();
  if (ctx.observable) c["observable"] = matrix_to_json(ctx.observable->mat());
  if (ctx.basis) {
    json b = json::array();
    for (int i = 0; i < ctx.basis->size(); ++i) b.push_back(matrix_to_json(ctx.basis->proj(i)));
    c["basis"] = std::move(b);
  }
  doc["context"] = std::move(c);
}

template <typename A>
json document_header(const char* kind, int dim, const A& a) {
  json doc;
  doc["kind"] = kind;
  doc["dim"] = dim;
  doc["settings"] = a.settings();
  json outs = json::array();
  for (int x = 0; x < a.settings(); ++x) outs.push_back(a.outcomes(x));
  doc["outcomes"] = std::move(outs);
  doc["elements"] = json::object();
  return doc;
}

std::string dump_doc(const json& doc) { return doc.dump(2) + "\n"; }

} // namespace

std::string assemblage_to_json(const StateAssemblage& s, const FunctionalContext& ctx) {
  json doc = document_header("state", s.dim(), s);
  for (int x = 0; x < s.settings(); ++x)
    for (int a = 0; a < s.outcomes(x); ++a)
      doc["elements"][std::to_string(x) + ":" + std::to_string(a)] =
          matrix_to_json(s.at(x, a).mat());
  append_context(doc, ctx);
  return dump_doc(doc);
}

std::string assemblage_to_json(const MeasurementAssemblage& m, const FunctionalContext& ctx) {
  json doc = document_header("measurement", m.dim(), m);
  for (int x = 0; x < m.settings(); ++x)
    for (int a = 0; a < m.outcomes(x); ++a)
      doc["elements"][std::to_string(x) + ":" + std::to_string(a)] =
          matrix_to_json(m.at(x, a).mat());
  append_context(doc, ctx);
  return dump_doc(doc);
}

std::string assemblage_to_json(const InstrumentAssemblage& inst, const FunctionalContext& ctx) {
  json doc = document_header("instrument", inst.dim_in(), inst);
  for (int x = 0; x < inst.settings(); ++x)
    for (int a = 0; a < inst.outcomes(x); ++a) {
      json list = json::array();
      for (const auto& k : inst.at(x, a)) list.push_back(matrix_to_json(k));
      doc["elements"][std::to_string(x) + ":" + std::to_string(a)] = std::move(list);
    }
  append_context(doc, ctx);
  return dump_doc(doc);
}

std::string report_to_json(const WitnessReport& r) {
  json doc;
  doc["functional"] = r.functional;
  doc["g_as"] = r.g_as;
  doc["F_as"] = r.F_as;
  doc["x_star"] = r.x_star;
  doc["x_lower"] = r.x_lower;
  doc["violation"] = r.violation;
  doc["metadata"] = {{"p_floor", r.p_floor}};
  return dump_doc(doc);
}

// ------------------------------------------------------------------- CSV --

std::string format_sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string scan_to_csv(const ScanTable& t) {
  std::string out = t.axis1.name + "," + t.axis2.name;
  for (const auto& n : t.functional_names) out += ",violation_" + n;
  out += "\n";
  for (int i = 0; i < t.axis1.resolution; ++i)
    for (int j = 0; j < t.axis2.resolution; ++j) {
      out += format_sig12(t.axis1.value(i)) + "," + format_sig12(t.axis2.value(j));
      const auto& cell = t.values[static_cast<size_t>(i) * t.axis2.resolution + j];
      for (double v : cell) out += "," + format_sig12(v);
      out += "\n";
    }
  return out;
}

std::string scan_summary(const ScanTable& t) {
  std::string out;
  for (size_t k = 0; k < t.functional_names.size(); ++k) {
    double lo = t.values[0][k], hi = t.values[0][k];
    int cross_lo = -1, cross_hi = -1;
    for (int i = 0; i < t.axis1.resolution; ++i) {
      int crossings = 0;
      for (int j = 0; j < t.axis2.resolution; ++j) {
        const double v = t.values[static_cast<size_t>(i) * t.axis2.resolution + j][k];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        if (j > 0) {
          const double prev =
              t.values[static_cast<size_t>(i) * t.axis2.resolution + j - 1][k];
          if ((prev > 0.0) != (v > 0.0)) ++crossings;
        }
      }
      cross_lo = cross_lo < 0 ? crossings : std::min(cross_lo, crossings);
      cross_hi = std::max(cross_hi, crossings);
    }
    out += "functional=" + t.functional_names[k] + " min=" + format_sig12(lo) +
           " max=" + format_sig12(hi) + " zero_crossings_per_row=" + std::to_string(cross_lo) +
           ".." + std::to_string(cross_hi) + "\n";
  }
  return out;
}

// ----------------------------------------------------------------- files --

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw ValidationError("cannot open file for writing: " + path);
  outf << text;
  if (!outf) throw ValidationError("write failed: " + path);
}

} // namespace incompat
