#include "placid/simulation.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace placid;

namespace {

SimConfig small_config() {
    SimConfig c;
    c.p = 4;
    c.q = 10;
    c.r = 2;
    c.n = 300;
    c.n_reps = 3;
    c.secondary_kind = SecondaryKind::Discrete;
    return c;
}

} // namespace

TEST_CASE("hub graph") {
    SimConfig c;
    c.graph_kind = GraphKind::Hub;
    std::mt19937_64 rng(1);
    auto g = gen_graph(c, rng);
    REQUIRE(g.graph.edges().size() == 9);
    for (Index j = 1; j < 10; ++j) CHECK(g.graph.has_edge(0, j));
    for (Index k = 0; k < 10; ++k) {
        for (Index j = 0; j < 10; ++j) {
            double b = std::abs(g.B(k, j));
            if (g.graph.has_edge(k, j)) {
                CHECK(b > 0.8);
                CHECK(b < 1.2);
            } else {
                CHECK(b == 0.0);
            }
        }
    }
}

TEST_CASE("random graph edge count matches the Bernoulli expectation") {
    SimConfig c;
    std::mt19937_64 rng(2);
    const int draws = 1000;
    const double pairs = 45.0, prob = 1.0 / 20.0;
    double sum = 0.0;
    for (int d = 0; d < draws; ++d) {
        auto g = gen_graph(c, rng);
        sum += g.graph.edges().size();
        for (auto [k, j] : g.graph.edges()) {
            CHECK(k < j);
            CHECK(std::abs(g.B(k, j)) > 0.8);
            CHECK(std::abs(g.B(k, j)) < 1.2);
        }
    }
    double mean = sum / draws;
    double se = std::sqrt(pairs * prob * (1 - prob) / draws);
    CHECK(std::abs(mean - 2.25) <= 3 * se);
}

TEST_CASE("design interventions") {
    auto iv = design_interventions(10, 25);
    CausalGraph g(10, 25, {}, iv);
    // 1-based intr(j) = {j, p+j, 2p+floor(j/2)}.
    CHECK(g.interventions_on(0) == IndexSet{0, 10, 19});
    CHECK(g.interventions_on(1) == IndexSet{1, 11, 20});
    CHECK(g.interventions_on(9) == IndexSet{9, 19, 24});
    CHECK(g.targets_of(19) == IndexSet{0, 9});
    CHECK(g.targets_of(20) == IndexSet{1, 2});
}

TEST_CASE("discrete data: nonlinear effects take values in {0, 2, 6}") {
    SimConfig c = small_config();
    std::mt19937_64 rng(3);
    auto g = gen_graph(c, rng);
    auto ds = gen_data(c, g, rng);
    CHECK(ds.X.rows() == 300);
    CHECK(ds.X.cols() == 10);
    CHECK(((ds.X.array() == 0.0) || (ds.X.array() == 1.0)).all());
    Matrix G = nonlinear_effects(ds.kind, ds.truth, ds.X, ds.weights);
    std::set<double> seen(G.data(), G.data() + G.size());
    for (double v : seen) CHECK((v == 0.0 || v == 2.0 || v == 6.0));
    CHECK(seen.size() == 3);

    // Every input pattern of three binary variables.
    Matrix X(8, 3);
    for (int m = 0; m < 8; ++m) {
        for (int b = 0; b < 3; ++b) X(m, b) = (m >> b) & 1;
    }
    CausalGraph one(1, 3, {}, {{0, 0}, {1, 0}, {2, 0}});
    Matrix g1 = nonlinear_effects(SecondaryKind::Discrete, one, X, Vector::Ones(1));
    Vector expect(8);
    expect << 0, 0, 0, 2, 0, 2, 2, 6;
    CHECK(g1.col(0) == expect);
}

TEST_CASE("continuous nonlinear effect") {
    CausalGraph one(1, 2, {}, {{0, 0}, {1, 0}});
    Matrix X(2, 2);
    X << 0.5, -2.0, 1.0, 1.0;
    Vector w(1);
    w << 3.0;
    Matrix g = nonlinear_effects(SecondaryKind::Continuous, one, X, w);
    // w (x1^2 + 1(x1>0) + x2^2 + 1(x2>0)) + w/2 * 2 x1 x2
    CHECK(g(0, 0) == doctest::Approx(3.0 * (0.25 + 1 + 4 + 0) + 3.0 * (0.5 * -2.0)));
    CHECK(g(1, 0) == doctest::Approx(3.0 * (1 + 1 + 1 + 1) + 3.0 * 1.0));
}

TEST_CASE("generated data satisfies the recursion") {
    for (auto kind : {SecondaryKind::Discrete, SecondaryKind::Continuous}) {
        SimConfig c = small_config();
        c.secondary_kind = kind;
        c.graph_kind = GraphKind::Hub;
        std::mt19937_64 rng(4);
        auto g = gen_graph(c, rng);
        auto ds = gen_data(c, g, rng);
        CHECK(regenerate_y(ds) == ds.Y);
        CHECK(ds.U.cols() == 2);
        CHECK((ds.noise_scales.array() > 0.3).all());
        CHECK((ds.noise_scales.array() < 0.4).all());
        CHECK((ds.weights.cwiseAbs().array() > 2.8).all());
        CHECK((ds.weights.cwiseAbs().array() < 3.2).all());
        // Loadings: confounder k on Y_{2k-1}, Y_{2k} only.
        for (Index k = 0; k < 2; ++k) {
            for (Index j = 0; j < 4; ++j) {
                double a = std::abs(ds.phi(k, j));
                if (j / 2 == k) {
                    CHECK(a > 0.3);
                    CHECK(a < 0.4);
                } else {
                    CHECK(a == 0.0);
                }
            }
        }
    }
}

TEST_CASE("degenerate SEM gives independent noise columns") {
    SimConfig c = small_config();
    c.n = 20000;
    std::mt19937_64 rng(5);
    auto g = gen_graph(c, rng);
    auto ds = gen_data(c, g, rng);
    ds.B_true.setZero();
    ds.phi.setZero();
    ds.X.setZero();
    Matrix Y = regenerate_y(ds);
    CHECK(Y == ds.E);
    Matrix centered = Y.rowwise() - Y.colwise().mean();
    Matrix cov = centered.transpose() * centered / double(c.n - 1);
    for (Index j = 0; j < 4; ++j) {
        CHECK(cov(j, j) == doctest::Approx(std::pow(ds.noise_scales(j), 2)).epsilon(0.05));
        for (Index k = 0; k < j; ++k) CHECK(std::abs(cov(j, k)) < 0.005);
    }
}

TEST_CASE("structure scores") {
    std::vector<Edge> ten;
    for (Index j = 1; j <= 10; ++j) ten.emplace_back(0, j);
    CausalGraph truth(11, 0, ten, {});
    auto m = score_structure(ten, truth);
    CHECK(m.fdp == 0.0);
    CHECK(m.tpr == 1.0);
    CHECK(m.shd == 0.0);
    CHECK(m.ji == 1.0);

    std::vector<Edge> nine(ten.begin(), ten.end() - 1);
    m = score_structure(nine, truth);
    CHECK(m.tpr == doctest::Approx(0.9));
    CHECK(m.shd == 1.0);
    CHECK(m.ji == doctest::Approx(0.9));

    CausalGraph one(2, 0, {{0, 1}}, {});
    m = score_structure({{1, 0}}, one);
    CHECK(m.tp == 0);
    CHECK(m.re == 1);
    CHECK(m.fn == 1);
    CHECK(m.fdp == 1.0);
    CHECK(m.shd == 2.0);

    m = score_structure({}, one);
    CHECK(m.fdp == 0.0);
    CHECK(m.tpr == 0.0);

    // Invariants over random estimates.
    std::mt19937_64 rng(6);
    SimConfig c;
    std::bernoulli_distribution coin(0.1);
    for (int rep = 0; rep < 300; ++rep) {
        auto g = gen_graph(c, rng);
        std::vector<Edge> est;
        for (Index k = 0; k < 10; ++k) {
            for (Index j = 0; j < 10; ++j) {
                if (k != j && coin(rng)) est.emplace_back(k, j);
            }
        }
        auto s = score_structure(est, g.graph);
        CHECK(s.tp + s.fn == Index(g.graph.edges().size()));
        CHECK(s.tp + s.re + s.fp == Index(est.size()));
        CHECK(s.fdp >= 0.0);
        CHECK(s.fdp <= 1.0);
        CHECK(s.ji >= 0.0);
        CHECK(s.ji <= 1.0);
    }
}

TEST_CASE("parameter losses") {
    Matrix B = Matrix::Random(4, 4);
    auto l = score_parameters(B, B);
    CHECK(l.l_inf == 0.0);
    CHECK(l.l_1 == 0.0);
    CHECK(l.l_2 == 0.0);

    Matrix H = B;
    H(1, 2) += 0.5;
    l = score_parameters(H, B);
    CHECK(l.l_inf == doctest::Approx(0.5));
    CHECK(l.l_1 == doctest::Approx(0.5));
    CHECK(l.l_2 == doctest::Approx(0.5));

    H = B;
    H(0, 1) -= 0.3;
    H(3, 2) += 0.4;
    l = score_parameters(H, B);
    CHECK(l.l_inf == doctest::Approx(0.4));
    CHECK(l.l_1 == doctest::Approx(0.7));
    CHECK(l.l_2 == doctest::Approx(0.5));

    CHECK_THROWS_AS(score_parameters(Matrix::Zero(3, 3), B), InvalidArgument);
}

TEST_CASE("seeding") {
    CHECK(stream_seed(1, 0) != stream_seed(1, 1));
    CHECK(stream_seed(1, 0) != stream_seed(2, 0));
    CHECK(stream_seed(7, 3) == stream_seed(7, 3));
}

TEST_CASE("benchmark: determinism, thread independence and aggregation") {
    SimConfig c = small_config();
    auto a = run_benchmark(c, 1);
    auto b = run_benchmark(c, 1);
    auto t = run_benchmark(c, 3);
    CHECK(a.n_ok + a.n_failed == 3);
    REQUIRE(a.metrics.size() == 7);
    for (std::size_t i = 0; i < a.metrics.size(); ++i) {
        CHECK(a.metrics[i].mean == b.metrics[i].mean);
        CHECK(a.metrics[i].sd == b.metrics[i].sd);
        CHECK(a.metrics[i].mean == t.metrics[i].mean);
        CHECK(a.metrics[i].sd == t.metrics[i].sd);
    }
    for (Index r = 0; r < 3; ++r) {
        CHECK(a.replications[r].selected == t.replications[r].selected);
        CHECK(a.replications[r].seed == stream_seed(c.seed, r));
    }
    // Aggregates are the mean of the successful replications.
    double sum = 0;
    for (const auto& r : a.replications) {
        if (r.ok) sum += r.metrics.fdp;
    }
    if (a.n_ok > 0) CHECK(a.metric("fdp").mean == doctest::Approx(sum / a.n_ok));
    CHECK_THROWS_AS(a.metric("auc"), InvalidArgument);

    c.n_reps = 1;
    auto one = run_benchmark(c, 1);
    for (const auto& m : one.metrics) CHECK(m.sd == 0.0);
}

TEST_CASE("config validation and presets") {
    SimConfig c;
    CHECK_NOTHROW(c.validate());
    c.q = 26;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c.reference_design = false;
    CHECK_NOTHROW(c.validate());
    c.n = 1;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);

    auto names = preset_names();
    CHECK(std::find(names.begin(), names.end(), "table2-random-p10") != names.end());
    for (const auto& name : names) {
        auto p = preset(name);
        CHECK_NOTHROW(p.validate());
    }
    auto t1 = preset("table1-hub-p10");
    CHECK(t1.secondary_kind == SecondaryKind::Continuous);
    CHECK(t1.graph_kind == GraphKind::Hub);
    auto t2 = preset("table2-random-p20");
    CHECK(t2.secondary_kind == SecondaryKind::Discrete);
    CHECK(t2.p == 20);
    CHECK(t2.q == 50);
    CHECK(t2.r == 10);
    CHECK_THROWS_AS(preset("table9"), InvalidArgument);
    CHECK(graph_kind_from_string(to_string(GraphKind::Hub)) == GraphKind::Hub);
    CHECK(secondary_kind_from_string(to_string(SecondaryKind::Continuous)) == SecondaryKind::Continuous);
    CHECK_THROWS_AS(graph_kind_from_string("star"), InvalidArgument);
}
