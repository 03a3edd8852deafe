#include "placid/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace placid {

std::string to_string(VariableKind k) {
    switch (k) {
    case VariableKind::Binary: return "binary";
    case VariableKind::Polytomous: return "polytomous";
    case VariableKind::Continuous: return "continuous";
    }
    return "unknown";
}

std::string to_string(FactorKind k) {
    switch (k) {
    case FactorKind::CenteredBinary: return "centered-binary";
    case FactorKind::CenteredDummy: return "centered-dummy";
    case FactorKind::CenteredPolynomial: return "centered-polynomial";
    }
    return "unknown";
}

VariableKind variable_kind_from_string(const std::string& s) {
    if (s == "binary") return VariableKind::Binary;
    if (s == "polytomous") return VariableKind::Polytomous;
    if (s == "continuous") return VariableKind::Continuous;
    throw InvalidArgument("unknown variable kind '" + s + "'");
}

FactorKind factor_kind_from_string(const std::string& s) {
    if (s == "centered-binary") return FactorKind::CenteredBinary;
    if (s == "centered-dummy") return FactorKind::CenteredDummy;
    if (s == "centered-polynomial") return FactorKind::CenteredPolynomial;
    throw InvalidArgument("unknown factor kind '" + s + "'");
}

Index CoordinateSpec::factor_count() const {
    switch (kind) {
    case FactorKind::CenteredBinary: return 1;
    case FactorKind::CenteredDummy: return levels.size();
    case FactorKind::CenteredPolynomial: return degree;
    }
    return 0;
}

double CoordinateSpec::raw_factor(Index d, double x) const {
    switch (kind) {
    case FactorKind::CenteredBinary: return x;
    case FactorKind::CenteredDummy: return x == levels[d] ? 1.0 : 0.0;
    case FactorKind::CenteredPolynomial: {
        double z = (x - shift) / scale;
        double v = z;
        for (Index i = 0; i < d; ++i) v *= z;
        return v;
    }
    }
    return 0.0;
}

std::vector<IndexSet> enumerate_subsets(const IndexSet& ca, Index gamma) {
    const Index m = ca.size();
    if (gamma < 1 || gamma > m) {
        throw InvalidArgument("gamma = " + std::to_string(gamma) +
                              " out of range for a candidate set of size " + std::to_string(m));
    }
    IndexSet sorted = ca;
    std::sort(sorted.begin(), sorted.end());
    std::vector<IndexSet> out;
    for (Index size = m - gamma + 1; size <= m; ++size) {
        // Lexicographic combinations of `size` positions out of m.
        std::vector<Index> pos(size);
        for (Index i = 0; i < size; ++i) pos[i] = i;
        while (true) {
            IndexSet s;
            for (Index i : pos) s.push_back(sorted[i]);
            out.push_back(std::move(s));
            Index i = size;
            while (i > 0 && pos[i - 1] == m - size + (i - 1)) --i;
            if (i == 0) break;
            ++pos[i - 1];
            for (Index k = i; k < size; ++k) pos[k] = pos[k - 1] + 1;
        }
    }
    return out;
}

Index basis_column_count(const std::vector<Index>& factor_counts, Index gamma) {
    IndexSet positions(factor_counts.size());
    for (Index i = 0; i < positions.size(); ++i) positions[i] = i;
    Index total = 0;
    for (const auto& alpha : enumerate_subsets(positions, gamma)) {
        Index prod = 1;
        for (Index a : alpha) prod *= factor_counts[a];
        total += prod;
    }
    return total;
}

DummyEncoding dummy_encode(const Eigen::Ref<const Vector>& column) {
    std::map<double, Index> counts;
    for (Eigen::Index i = 0; i < column.size(); ++i) {
        if (!std::isfinite(column(i))) throw InvalidArgument("dummy_encode: non-finite category");
        ++counts[column(i)];
    }
    if (counts.size() < 2) {
        throw DegenerateError("dummy_encode: column has a single observed level");
    }
    DummyEncoding enc;
    if (counts.size() == 2 && counts.begin()->first == 0.0 && counts.rbegin()->first == 1.0) {
        enc.reference = 0.0;
        enc.levels = {1.0};
    } else {
        auto ref = counts.begin();
        for (auto it = counts.begin(); it != counts.end(); ++it) {
            if (it->second > ref->second) ref = it;
        }
        enc.reference = ref->first;
        for (const auto& [level, n] : counts) {
            if (level != enc.reference) enc.levels.push_back(level);
        }
    }
    enc.indicators = Matrix::Zero(column.size(), enc.levels.size());
    for (Eigen::Index i = 0; i < column.size(); ++i) {
        for (Index d = 0; d < enc.levels.size(); ++d) {
            if (column(i) == enc.levels[d]) enc.indicators(i, d) = 1.0;
        }
    }
    return enc;
}

namespace {

std::string column_name(Index l) { return "X" + std::to_string(l + 1); }

CoordinateSpec make_coordinate(const Matrix& X, Index l, VariableKind kind,
                               const BasisOptions& opts) {
    if (static_cast<Eigen::Index>(l) >= X.cols()) {
        throw InvalidArgument("candidate IV " + column_name(l) + " out of range");
    }
    auto col = X.col(l);
    if (!col.allFinite()) throw InvalidArgument("non-finite value in " + column_name(l));
    const double n = static_cast<double>(X.rows());
    CoordinateSpec c;
    c.variable = l;
    switch (kind) {
    case VariableKind::Binary: {
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            if (col(i) != 0.0 && col(i) != 1.0) {
                throw InvalidArgument("non-binary value in binary column " + column_name(l) +
                                      " at row " + std::to_string(i + 1));
            }
        }
        c.kind = FactorKind::CenteredBinary;
        break;
    }
    case VariableKind::Polytomous: {
        DummyEncoding enc;
        try {
            enc = dummy_encode(col);
        } catch (const DegenerateError&) {
            throw DegenerateError("degenerate basis: " + column_name(l) + " has a single level");
        }
        c.kind = FactorKind::CenteredDummy;
        c.levels = enc.levels;
        break;
    }
    case VariableKind::Continuous: {
        c.kind = FactorKind::CenteredPolynomial;
        c.degree = opts.degree;
        if (opts.degree < 1) throw InvalidArgument("basis degree must be at least 1");
        if (opts.standardize) {
            c.shift = col.mean();
            c.scale = std::sqrt((col.array() - c.shift).square().sum() / n);
        }
        break;
    }
    }
    c.centers.resize(c.factor_count());
    for (Index d = 0; d < c.factor_count(); ++d) {
        double sum = 0.0, sq = 0.0;
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            double v = c.raw_factor(d, col(i));
            sum += v;
            sq += v * v;
        }
        c.centers[d] = sum / n;
        double var = sq / n - c.centers[d] * c.centers[d];
        if (!(c.scale > 0.0) || !(var > 1e-14 * std::max(1.0, sq / n))) {
            throw DegenerateError("degenerate basis: centered factor of " + column_name(l) +
                                  " is identically zero (constant column)");
        }
    }
    return c;
}

} // namespace

Matrix centered_factors(const BasisSpec& spec, const Matrix& X, std::vector<Index>& offsets) {
    offsets.assign(spec.coordinates.size(), 0);
    Index total = 0;
    for (Index a = 0; a < spec.coordinates.size(); ++a) {
        offsets[a] = total;
        total += spec.coordinates[a].factor_count();
    }
    Matrix F(X.rows(), total);
    for (Index a = 0; a < spec.coordinates.size(); ++a) {
        const auto& c = spec.coordinates[a];
        if (static_cast<Eigen::Index>(c.variable) >= X.cols()) {
            throw InvalidArgument("basis references a missing column " + column_name(c.variable));
        }
        for (Index d = 0; d < c.factor_count(); ++d) {
            for (Eigen::Index i = 0; i < X.rows(); ++i) {
                F(i, offsets[a] + d) = c.raw_factor(d, X(i, c.variable)) - c.centers[d];
            }
        }
    }
    return F;
}

Matrix evaluate_basis(const BasisSpec& spec, const Matrix& X) {
    std::vector<Index> offsets;
    Matrix F = centered_factors(spec, X, offsets);
    Matrix Z(X.rows(), spec.columns.size());
    for (Index col = 0; col < spec.columns.size(); ++col) {
        const auto& bc = spec.columns[col];
        Vector v = Vector::Ones(X.rows());
        for (Index i = 0; i < bc.coords.size(); ++i) {
            v.array() *= F.col(offsets[bc.coords[i]] + bc.factors[i]).array();
        }
        Z.col(col) = v;
    }
    return Z;
}

EvaluatedBasis build_basis(const Matrix& X, Index node, const IndexSet& ca, Index gamma,
                           const std::vector<VariableKind>& kinds, const BasisOptions& opts) {
    BasisSpec spec;
    spec.node = node;
    spec.candidate_set = ca;
    std::sort(spec.candidate_set.begin(), spec.candidate_set.end());
    spec.candidate_set.erase(std::unique(spec.candidate_set.begin(), spec.candidate_set.end()),
                             spec.candidate_set.end());
    spec.gamma = gamma;
    spec.subsets = enumerate_subsets(spec.candidate_set, gamma);

    std::vector<Index> factor_counts;
    for (Index l : spec.candidate_set) {
        if (l >= kinds.size()) throw InvalidArgument("no declared kind for " + column_name(l));
        spec.coordinates.push_back(make_coordinate(X, l, kinds[l], opts));
        factor_counts.push_back(spec.coordinates.back().factor_count());
    }

    Index count = basis_column_count(factor_counts, gamma);
    if (count > opts.max_columns) {
        throw InvalidArgument("surrogate basis for Y" + std::to_string(node + 1) + " would have " +
                              std::to_string(count) + " columns (cap " +
                              std::to_string(opts.max_columns) +
                              "); lower the basis degree or gamma");
    }

    for (const auto& alpha : spec.subsets) {
        std::vector<Index> coords;
        for (Index l : alpha) {
            auto it = std::lower_bound(spec.candidate_set.begin(), spec.candidate_set.end(), l);
            coords.push_back(static_cast<Index>(it - spec.candidate_set.begin()));
        }
        // Odometer over factor assignments, first coordinate slowest.
        std::vector<Index> f(coords.size(), 0);
        while (true) {
            spec.columns.push_back({coords, f});
            long i = static_cast<long>(coords.size()) - 1;
            for (; i >= 0; --i) {
                if (++f[i] < spec.coordinates[coords[i]].factor_count()) break;
                f[i] = 0;
            }
            if (i < 0) break;
        }
    }

    EvaluatedBasis out;
    out.values = evaluate_basis(spec, X);
    out.spec = std::move(spec);
    return out;
}

EvaluatedBasis build_binary_basis(const Matrix& X, const IndexSet& ca, Index gamma, Index node) {
    std::vector<VariableKind> kinds(X.cols(), VariableKind::Binary);
    return build_basis(X, node, ca, gamma, kinds);
}

EvaluatedBasis build_continuous_basis(const Matrix& X, const IndexSet& ca, Index gamma,
                                      Index degree, Index node, const BasisOptions& opts) {
    std::vector<VariableKind> kinds(X.cols(), VariableKind::Continuous);
    BasisOptions o = opts;
    o.degree = degree;
    return build_basis(X, node, ca, gamma, kinds, o);
}

} // namespace placid
