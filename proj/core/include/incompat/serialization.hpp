#ifndef INCOMPAT_SERIALIZATION_HPP
#define INCOMPAT_SERIALIZATION_HPP

// File formats of the command-line layer: the JSON assemblage document
// ({"kind", "dim", "settings", "outcomes", "elements", "context"} with
// complex entries as [re, im] pairs), the witness report JSON, and the CSV
// scan table (12 significant digits, byte-deterministic).

#include <optional>
#include <string>

#include "incompat/scenarios.hpp"

namespace incompat {

// parsed assemblage file: exactly one of the three payloads is set
struct AssemblageDocument {
  std::string kind; // "state" | "measurement" | "instrument"
  std::optional<StateAssemblage> state;
  std::optional<MeasurementAssemblage> measurement;
  std::optional<InstrumentAssemblage> instrument;
  FunctionalContext context; // observable / basis carried along in the file
};

// Parse/load with messages that name the offending element key (validation)
// or the line and column (malformed JSON).  Throws ValidationError or
// ShapeError; never returns a partially built document.
AssemblageDocument parse_assemblage(const std::string& json_text);
AssemblageDocument load_assemblage(const std::string& path);

// Document writers (2-space indent, keys in schema order, trailing newline).
std::string assemblage_to_json(const StateAssemblage& s, const FunctionalContext& ctx = {});
std::string assemblage_to_json(const MeasurementAssemblage& m, const FunctionalContext& ctx = {});
std::string assemblage_to_json(const InstrumentAssemblage& inst, const FunctionalContext& ctx = {});

// {"functional", "g_as", "F_as", "x_star", "x_lower", "violation", "metadata"}
std::string report_to_json(const WitnessReport& r);

// side files for --observable (one JSON matrix) and --basis (JSON array of
// rank-one projector matrices)
HermitianMatrix load_observable(const std::string& path);
ReferenceBasis load_basis(const std::string& path);

// shortest %.12g rendering used by every CSV cell
std::string format_sig12(double v);

// header axis1,axis2,violation_<name>...; rows in grid-index order
std::string scan_to_csv(const ScanTable& t);

// one human-oriented line per functional: min/max violation and the range of
// zero-boundary crossing counts across axis1 rows
std::string scan_summary(const ScanTable& t);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace incompat

#endif
