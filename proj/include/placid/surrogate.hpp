#pragma once

#include "placid/types.hpp"

#include <string>
#include <vector>

namespace placid {

// Declared type of a secondary variable.
enum class VariableKind { Binary, Polytomous, Continuous };

// Per-coordinate factor family used to build surrogate IVs.
enum class FactorKind { CenteredBinary, CenteredDummy, CenteredPolynomial };

std::string to_string(VariableKind k);
std::string to_string(FactorKind k);
VariableKind variable_kind_from_string(const std::string& s);
FactorKind factor_kind_from_string(const std::string& s);

// One candidate IV together with the constants that define its centered
// factors phi_d(x) - center_d.
struct CoordinateSpec {
    Index variable = 0;  // secondary column
    FactorKind kind = FactorKind::CenteredBinary;
    std::vector<double> levels;   // dummy: category value of each indicator
    double shift = 0.0;           // polynomial: standardization location
    double scale = 1.0;           // polynomial: standardization scale
    Index degree = 1;             // polynomial: highest power
    std::vector<double> centers;  // empirical mean of each raw factor

    Index factor_count() const;
    // Uncentered factor d evaluated at x.
    double raw_factor(Index d, double x) const;

    bool operator==(const CoordinateSpec&) const = default;
};

// A basis column: the product over the coordinates of subset `coords`
// (positions into BasisSpec::coordinates) of the chosen factor `factors[i]`.
struct BasisColumn {
    std::vector<Index> coords;
    std::vector<Index> factors;

    bool operator==(const BasisColumn&) const = default;
};

struct BasisSpec {
    Index node = 0;
    IndexSet candidate_set;
    Index gamma = 1;
    std::vector<IndexSet> subsets;  // secondary indices, canonical order
    std::vector<CoordinateSpec> coordinates;  // aligned with candidate_set
    std::vector<BasisColumn> columns;

    Index size() const { return columns.size(); }
    bool operator==(const BasisSpec&) const = default;
};

struct EvaluatedBasis {
    BasisSpec spec;
    Matrix values;  // n x size()
};

struct BasisOptions {
    Index degree = 2;           // polynomial degree for continuous IVs
    bool standardize = true;    // standardize continuous IVs before powers
    Index max_columns = 256;
};

// All subsets of `ca` with at least |ca| - gamma + 1 elements, ordered by size
// then lexicographically.
std::vector<IndexSet> enumerate_subsets(const IndexSet& ca, Index gamma);

// Number of basis columns the given factor counts and gamma produce.
Index basis_column_count(const std::vector<Index>& factor_counts, Index gamma);

struct DummyEncoding {
    double reference = 0.0;
    std::vector<double> levels;  // category behind each indicator column
    Matrix indicators;           // n x levels.size()
};

// Indicator columns for every level except the most frequent one. A column
// whose levels are exactly {0, 1} passes through as a single indicator of 1.
DummyEncoding dummy_encode(const Eigen::Ref<const Vector>& column);

// Product basis Prod_{s in alpha}(X_s - mean_s) over the enumerated subsets.
EvaluatedBasis build_binary_basis(const Matrix& X, const IndexSet& ca, Index gamma,
                                  Index node = 0);

// Centered monomials up to `degree` per coordinate, multiplied over the
// enumerated subsets with every degree assignment.
EvaluatedBasis build_continuous_basis(const Matrix& X, const IndexSet& ca, Index gamma,
                                      Index degree, Index node = 0,
                                      const BasisOptions& opts = {});

// General builder: `kinds` declares each secondary column's type (size q).
EvaluatedBasis build_basis(const Matrix& X, Index node, const IndexSet& ca, Index gamma,
                           const std::vector<VariableKind>& kinds, const BasisOptions& opts = {});

// Centered factor values: column offsets[a] + d holds phi_d(X_s) - center_d
// for coordinate a. Returns offsets through the out parameter.
Matrix centered_factors(const BasisSpec& spec, const Matrix& X, std::vector<Index>& offsets);

// Re-evaluates a (possibly deserialized) spec on data.
Matrix evaluate_basis(const BasisSpec& spec, const Matrix& X);

} // namespace placid
