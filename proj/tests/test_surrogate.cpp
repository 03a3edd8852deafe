#include "placid/io.hpp"
#include "placid/surrogate.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace placid;

namespace {

Index binom(Index n, Index k) {
    Index r = 1;
    for (Index i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

Matrix bernoulli(std::mt19937_64& rng, Index n, Index q) {
    std::bernoulli_distribution coin(0.5);
    Matrix X(n, q);
    for (Index l = 0; l < q; ++l) {
        for (Index i = 0; i < n; ++i) X(i, l) = coin(rng);
    }
    return X;
}

Matrix gaussian(std::mt19937_64& rng, Index n, Index q) {
    std::normal_distribution<double> z;
    Matrix X(n, q);
    for (Index l = 0; l < q; ++l) {
        for (Index i = 0; i < n; ++i) X(i, l) = z(rng);
    }
    return X;
}

// Every subset of `ca` of size >= gamma (the admissible valid-IV sets).
std::vector<IndexSet> admissible(const IndexSet& ca, Index gamma) {
    std::vector<IndexSet> out;
    for (unsigned mask = 1; mask < (1u << ca.size()); ++mask) {
        IndexSet s;
        for (Index i = 0; i < ca.size(); ++i) {
            if (mask >> i & 1) s.push_back(ca[i]);
        }
        if (s.size() >= gamma) out.push_back(s);
    }
    return out;
}

} // namespace

TEST_CASE("subset enumeration") {
    CHECK(enumerate_subsets({1, 3}, 1) == std::vector<IndexSet>{{1, 3}});
    CHECK(enumerate_subsets({1, 3}, 2) == std::vector<IndexSet>{{1}, {3}, {1, 3}});
    for (Index m = 1; m <= 6; ++m) {
        IndexSet ca;
        for (Index i = 0; i < m; ++i) ca.push_back(2 * i);
        CHECK(enumerate_subsets(ca, m).size() == (Index(1) << m) - 1);
        for (Index gamma = 1; gamma <= m; ++gamma) {
            auto subsets = enumerate_subsets(ca, gamma);
            Index expected = 0;
            for (Index s = m - gamma + 1; s <= m; ++s) expected += binom(m, s);
            CHECK(subsets.size() == expected);
            // Every subset meets every admissible valid set.
            for (const auto& a : subsets) {
                for (const auto& v : admissible(ca, gamma)) {
                    bool meets = std::any_of(a.begin(), a.end(), [&](Index s) {
                        return std::find(v.begin(), v.end(), s) != v.end();
                    });
                    CHECK(meets);
                }
            }
        }
    }
    CHECK_THROWS_AS(enumerate_subsets({1, 2}, 0), InvalidArgument);
    CHECK_THROWS_AS(enumerate_subsets({1, 2}, 3), InvalidArgument);
}

TEST_CASE("binary basis, single pair") {
    std::mt19937_64 rng(1);
    Matrix X = bernoulli(rng, 50, 5);
    EvaluatedBasis b = build_binary_basis(X, {1, 3}, 1);
    REQUIRE(b.values.cols() == 1);
    Vector expected = ((X.col(1).array() - X.col(1).mean()) * (X.col(3).array() - X.col(3).mean())).matrix();
    CHECK((b.values.col(0) - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("binary basis, n = 4 hand arithmetic") {
    Matrix X(4, 2);
    X << 1, 0,  //
        0, 0,   //
        1, 1,   //
        1, 1;
    // means 0.75 and 0.5
    EvaluatedBasis b = build_binary_basis(X, {0, 1}, 2);
    REQUIRE(b.values.cols() == 3);
    Matrix expected(4, 3);
    expected << 0.25, -0.5, -0.125,  //
        -0.75, -0.5, 0.375,          //
        0.25, 0.5, 0.125,            //
        0.25, 0.5, 0.125;
    CHECK((b.values - expected).cwiseAbs().maxCoeff() <= 1e-15);
    // Single-factor columns are exactly centered.
    CHECK(std::abs(b.values.col(0).mean()) <= 1e-15);
    CHECK(std::abs(b.values.col(1).mean()) <= 1e-15);
}

TEST_CASE("binary basis errors") {
    Matrix X = Matrix::Ones(10, 2);
    X(0, 1) = 0;
    CHECK_THROWS_AS(build_binary_basis(X, {0, 1}, 1), DegenerateError);
    try {
        build_binary_basis(X, {0, 1}, 1);
    } catch (const DegenerateError& e) {
        CHECK(std::string(e.what()).find("X1") != std::string::npos);
    }
    Matrix Y = Matrix::Zero(6, 2);
    Y << 0, 1, 1, 0, 0, 2, 1, 1, 0, 0, 1, 1;
    CHECK_THROWS_AS(build_binary_basis(Y, {0, 1}, 1), InvalidArgument);
}

TEST_CASE("continuous basis") {
    std::mt19937_64 rng(2);
    Matrix X = gaussian(rng, 200, 3);
    EvaluatedBasis b = build_continuous_basis(X, {0, 2}, 1, 2);
    CHECK(b.values.cols() == 4);
    REQUIRE(b.spec.columns.size() == 4);
    CHECK(b.spec.columns[0].factors == std::vector<Index>{0, 0});
    CHECK(b.spec.columns[1].factors == std::vector<Index>{0, 1});
    CHECK(b.spec.columns[2].factors == std::vector<Index>{1, 0});
    CHECK(b.spec.columns[3].factors == std::vector<Index>{1, 1});

    // Degree 1 without standardization is the binary formula on real data.
    BasisOptions raw;
    raw.standardize = false;
    EvaluatedBasis d1 = build_continuous_basis(X, {0, 2}, 2, 1, 0, raw);
    Vector a = (X.col(0).array() - X.col(0).mean()).matrix();
    Vector c = (X.col(2).array() - X.col(2).mean()).matrix();
    REQUIRE(d1.values.cols() == 3);
    CHECK((d1.values.col(0) - a).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((d1.values.col(1) - c).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((d1.values.col(2) - Vector(a.array() * c.array())).cwiseAbs().maxCoeff() <= 1e-12);

    // Count formula: sum over subsets of D^|alpha|.
    EvaluatedBasis big = build_continuous_basis(X, {0, 1, 2}, 2, 3);
    CHECK(big.values.cols() == 3 * 9 + 27);
    CHECK(basis_column_count({3, 3, 3}, 2) == 54);

    Matrix flat = X;
    flat.col(1).setConstant(2.0);
    CHECK_THROWS_AS(build_continuous_basis(flat, {0, 1}, 1, 2), DegenerateError);

    BasisOptions capped;
    capped.max_columns = 10;
    CHECK_THROWS_AS(build_continuous_basis(X, {0, 1, 2}, 3, 3, 0, capped), InvalidArgument);
}

TEST_CASE("basis membership: conditional means vanish given the complement") {
    // For alpha_k = {0} (|alpha_k| >= gamma = 1) the basis built from ca = {0, 1}
    // must have mean zero conditional on X_1 (the coordinate outside alpha_k).
    std::mt19937_64 rng(3);
    const Index n = 20000;
    Matrix X = gaussian(rng, n, 2);
    EvaluatedBasis b = build_continuous_basis(X, {0, 1}, 1, 2);
    const int bins = 8;
    for (Index col = 0; col < b.values.cols(); ++col) {
        for (Index cond : {0, 1}) {
            std::vector<double> sum(bins, 0.0);
            std::vector<int> cnt(bins, 0);
            for (Index i = 0; i < n; ++i) {
                double u = 0.5 * std::erfc(-X(i, cond) / std::sqrt(2.0));
                int bin = std::min(bins - 1, int(u * bins));
                sum[bin] += b.values(i, col);
                cnt[bin] += 1;
            }
            double sd = std::sqrt((b.values.col(col).array() - b.values.col(col).mean()).square().mean());
            for (int k = 0; k < bins; ++k) {
                // 5 standard errors of a bin mean.
                CHECK(std::abs(sum[k] / cnt[k]) <= 5.0 * sd / std::sqrt(double(cnt[k])));
            }
        }
    }
}

TEST_CASE("column means shrink like 1/sqrt(n)") {
    std::mt19937_64 rng(4);
    auto mean_abs = [&](Index n) {
        double acc = 0.0;
        const int reps = 40;
        for (int r = 0; r < reps; ++r) {
            Matrix X = bernoulli(rng, n, 3);
            acc += std::abs(build_binary_basis(X, {0, 1, 2}, 1).values.col(0).mean());
        }
        return acc / reps;
    };
    double small = mean_abs(400), large = mean_abs(6400);
    double slope = std::log(large / small) / std::log(16.0);
    // A product of centered factors has O(1/n) bias plus O(1/sqrt n) noise.
    CHECK(slope < -0.35);
}

TEST_CASE("dummy encoding") {
    Vector three(7);
    three << 0, 1, 2, 2, 2, 1, 0;
    DummyEncoding d = dummy_encode(three);
    CHECK(d.reference == 2.0);
    CHECK(d.levels == std::vector<double>{0.0, 1.0});
    CHECK(d.indicators.cols() == 2);
    CHECK(d.indicators(0, 0) == 1.0);
    CHECK(d.indicators(1, 1) == 1.0);

    Vector bin(4);
    bin << 1, 1, 1, 0;
    DummyEncoding b = dummy_encode(bin);
    CHECK(b.indicators.cols() == 1);
    CHECK(b.indicators.col(0) == bin);

    CHECK_THROWS_AS(dummy_encode(Vector::Constant(5, 3.0)), DegenerateError);
}

TEST_CASE("polytomous coordinates expand into dummies") {
    Matrix X(9, 2);
    X << 0, 1, 1, 0, 2, 1, 2, 0, 2, 1, 1, 0, 0, 1, 2, 0, 2, 1;
    EvaluatedBasis b = build_basis(X, 0, {0, 1}, 1, {VariableKind::Polytomous, VariableKind::Binary});
    CHECK(b.values.cols() == 2);  // two indicators of X1 times one factor of X2
    CHECK(b.spec.coordinates[0].kind == FactorKind::CenteredDummy);
}

TEST_CASE("basis spec JSON round trip and re-evaluation") {
    std::mt19937_64 rng(5);
    Matrix X = gaussian(rng, 100, 3);
    EvaluatedBasis b = build_continuous_basis(X, {0, 1, 2}, 2, 2, 4);
    BasisSpec back = basis_spec_from_json(Json::parse(to_json(b.spec).dump()));
    CHECK(back == b.spec);
    CHECK((evaluate_basis(back, X) - b.values).cwiseAbs().maxCoeff() == 0.0);
}
