#pragma once

#include "placid/causal_graph.hpp"
#include "placid/dcor.hpp"
#include "placid/gmm.hpp"
#include "placid/peeling.hpp"
#include "placid/simulation.hpp"
#include "placid/surrogate.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace placid {

using Json = nlohmann::ordered_json;

inline constexpr const char* format_version = "1";

// Malformed input data: unparsable cells, ragged rows, missing values.
class DataError : public Error {
public:
    using Error::Error;
};

// Missing or unreadable files.
class IoError : public Error {
public:
    using Error::Error;
};

// --- JSON (indices are 1-based on the wire) ---------------------------------

Json to_json(const CausalGraph& g);
CausalGraph causal_graph_from_json(const Json& j);

Json to_json(const AncestralGraph& a);
// Validates ranges and acyclicity (CycleError on a cyclic edge set).
AncestralGraph arg_from_json(const Json& j);

Json to_json(const PeelingResult& r);
Json to_json(const BasisSpec& b);
BasisSpec basis_spec_from_json(const Json& j);
Json to_json(const EstimationResult& r);
Json to_json(const DcorMatrices& d);
Json to_json(const SimConfig& c);
SimConfig sim_config_from_json(const Json& j, SimConfig base = {});
Json to_json(const Metrics& m);
Json to_json(const BenchmarkSummary& s);
Json to_json(const Replication& r);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

// --- DOT ---------------------------------------------------------------------

// Primary nodes as ellipses, secondary nodes as boxes.
std::string to_dot(const CausalGraph& g, const std::string& name = "G");
std::string to_dot(const AncestralGraph& a, const std::string& name = "ARG");
// Selected edges labelled with their estimates.
std::string selected_to_dot(const EstimationResult& r, Index p, const std::string& name = "E");

// --- CSV ---------------------------------------------------------------------

struct Table {
    std::vector<std::string> header;
    Matrix values;  // rows x header.size()
};

// First line is the header. Every cell must parse as a finite number; empty
// cells and NA markers are rejected with the offending line and column.
Table parse_csv(const std::string& text, const std::string& source = "<input>");
Table read_csv(const std::string& path);

std::string matrix_to_csv(const Matrix& m, const std::vector<std::string>& row_names,
                          const std::vector<std::string>& col_names);
std::string summary_to_csv(const BenchmarkSummary& s);

// --- files ---------------------------------------------------------------------

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);
Json read_json_file(const std::string& path);

// Shortest decimal text that round-trips the double.
std::string format_double(double v);

} // namespace placid
