#pragma once

#include "placid/io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace placid::cli {

enum ExitCode : int {
    ok = 0,
    config_error = 2,
    data_error = 3,   // unreadable or malformed inputs, including cyclic ARG files
    degenerate = 4,   // peeling stall, singular moments
    internal_error = 5,
};

// Configuration of a data-driven run (dcor, discover, estimate, pipeline).
struct RunConfig {
    std::vector<std::string> inputs;   // CSV files joined column-wise
    std::vector<std::string> y_columns;
    std::vector<std::string> x_columns;
    std::vector<VariableKind> x_kinds; // aligned with x_columns
    std::optional<double> alpha;       // unset: 1 / n^2
    Index gamma = 1;
    double q_star = 0.05;
    OmegaMode omega = OmegaMode::Identity;
    Index degree = 2;
    Index max_basis_columns = 256;
    bool mean_augmentation = true;
    std::string output_dir = ".";
    std::uint64_t seed = 1;

    // Throws InvalidArgument on empty or overlapping roles and bad levels.
    void validate() const;
};

Json to_json(const RunConfig& c);
// `x_kinds` may be one kind for every X column, an array aligned with
// `x_columns`, or an object keyed by column name.
RunConfig run_config_from_json(const Json& j, RunConfig base = {});

struct Dataset {
    Matrix X;
    Matrix Y;
};

// Reads the inputs, selects the role columns and checks the declared kinds.
// Throws DataError with the file, line or column at fault.
Dataset load_dataset(const RunConfig& c);

// Worker threads from the PLACID_THREADS environment variable (default 1).
unsigned thread_count();

// Entry point of the `placid` executable.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace placid::cli
