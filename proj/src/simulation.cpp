#include "placid/simulation.hpp"

#include "placid/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

namespace placid {

std::string to_string(GraphKind k) { return k == GraphKind::Random ? "random" : "hub"; }
std::string to_string(SecondaryKind k) {
    return k == SecondaryKind::Continuous ? "continuous" : "discrete";
}

GraphKind graph_kind_from_string(const std::string& s) {
    if (s == "random") return GraphKind::Random;
    if (s == "hub") return GraphKind::Hub;
    throw InvalidArgument("unknown graph kind '" + s + "' (expected random or hub)");
}

SecondaryKind secondary_kind_from_string(const std::string& s) {
    if (s == "continuous") return SecondaryKind::Continuous;
    if (s == "discrete") return SecondaryKind::Discrete;
    throw InvalidArgument("unknown secondary kind '" + s + "' (expected continuous or discrete)");
}

void SimConfig::validate() const {
    if (p < 2) throw InvalidArgument("p must be at least 2");
    if (n < 10) throw InvalidArgument("n must be at least 10");
    if (n_reps < 1) throw InvalidArgument("n_reps must be at least 1");
    if (q < 2 * p + p / 2) {
        throw InvalidArgument("q must be at least 2p + floor(p/2) for the intervention design");
    }
    if (r < (p + 1) / 2) throw InvalidArgument("r must be at least ceil(p/2)");
    if (reference_design && (q != 2 * p + p / 2 || r != p / 2 || p % 2 != 0)) {
        throw InvalidArgument("reference design requires even p, q = 2p + p/2 and r = p/2");
    }
    if (alpha && !(*alpha > 0.0 && *alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
    if (gamma < 1) throw InvalidArgument("gamma must be at least 1");
    if (!(q_star > 0.0 && q_star < 1.0)) throw InvalidArgument("q_star must lie in (0, 1)");
    if (degree < 1) throw InvalidArgument("degree must be at least 1");
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    // SplitMix64 finalizer over a counter derived from both inputs.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Uniform on (-hi, -lo) U (lo, hi).
double signed_band(std::mt19937_64& rng, double lo, double hi) {
    double mag = uniform(rng, lo, hi);
    return std::bernoulli_distribution(0.5)(rng) ? mag : -mag;
}

Matrix gaussian(std::mt19937_64& rng, Index rows, Index cols) {
    std::normal_distribution<double> z(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) m(i, j) = z(rng);
    }
    return m;
}

} // namespace

std::vector<Edge> design_interventions(Index p, Index q) {
    std::vector<Edge> iv;
    for (Index j = 1; j <= p; ++j) {
        for (Index l : {j, p + j, 2 * p + j / 2}) {
            if (l < 1 || l > q) throw InvalidArgument("intervention index out of range");
            iv.emplace_back(l - 1, j - 1);
        }
    }
    return iv;
}

SimGraph gen_graph(const SimConfig& cfg, std::mt19937_64& rng) {
    const Index p = cfg.p;
    std::vector<Edge> edges;
    if (cfg.graph_kind == GraphKind::Hub) {
        for (Index j = 1; j < p; ++j) edges.emplace_back(0, j);
    } else {
        std::bernoulli_distribution coin(1.0 / (2.0 * static_cast<double>(p)));
        for (Index k = 0; k < p; ++k) {
            for (Index j = k + 1; j < p; ++j) {
                if (coin(rng)) edges.emplace_back(k, j);
            }
        }
    }
    SimGraph g;
    g.B = Matrix::Zero(p, p);
    for (auto [k, j] : edges) g.B(k, j) = signed_band(rng, 0.8, 1.2);
    g.graph = CausalGraph(p, cfg.q, edges, design_interventions(p, cfg.q));
    return g;
}

Matrix nonlinear_effects(SecondaryKind kind, const CausalGraph& truth, const Matrix& X,
                         const Vector& weights) {
    const Index n = X.rows();
    Matrix G = Matrix::Zero(n, truth.p());
    for (Index j = 0; j < truth.p(); ++j) {
        IndexSet iv = truth.interventions_on(j);
        Vector pair_sum = Vector::Zero(n);
        for (Index a : iv) {
            for (Index b : iv) {
                if (a != b) pair_sum.array() += X.col(a).array() * X.col(b).array();
            }
        }
        if (kind == SecondaryKind::Discrete) {
            G.col(j) = pair_sum;
        } else {
            Vector main = Vector::Zero(n);
            for (Index a : iv) {
                main.array() += X.col(a).array().square() +
                                (X.col(a).array() > 0.0).cast<double>();
            }
            G.col(j) = weights(j) * main + 0.5 * weights(j) * pair_sum;
        }
    }
    return G;
}

Matrix regenerate_y(const SimDataset& ds) {
    Matrix G = nonlinear_effects(ds.kind, ds.truth, ds.X, ds.weights);
    Matrix Y = G + ds.U * ds.phi + ds.E;
    for (Index j : ds.truth.topological_order()) {
        for (Index k : ds.truth.parents(j)) Y.col(j) += ds.B_true(k, j) * Y.col(k);
    }
    return Y;
}

SimDataset gen_data(const SimConfig& cfg, const SimGraph& g, std::mt19937_64& rng) {
    const Index n = cfg.n, p = cfg.p, q = cfg.q, r = cfg.r;
    if (g.graph.p() != p || g.graph.q() != q) throw InvalidArgument("graph does not match config");
    SimDataset ds;
    ds.kind = cfg.secondary_kind;
    ds.truth = g.graph;
    ds.B_true = g.B;

    if (ds.kind == SecondaryKind::Continuous) {
        ds.X = gaussian(rng, n, q);
    } else {
        std::bernoulli_distribution coin(0.5);
        ds.X.resize(n, q);
        for (Index l = 0; l < q; ++l) {
            for (Index i = 0; i < n; ++i) ds.X(i, l) = coin(rng) ? 1.0 : 0.0;
        }
    }
    ds.U = gaussian(rng, n, r);

    // Confounder k loads on Y_{2k-1} and Y_{2k}; phi_11 lies in the first block.
    ds.phi = Matrix::Zero(r, p);
    for (Index k = 0; k < r; ++k) {
        for (Index j : {2 * k, 2 * k + 1}) {
            if (j < p) ds.phi(k, j) = signed_band(rng, 0.3, 0.4);
        }
    }
    ds.noise_scales.resize(p);
    for (Index j = 0; j < p; ++j) ds.noise_scales(j) = uniform(rng, 0.3, 0.4);
    ds.E = gaussian(rng, n, p) * ds.noise_scales.asDiagonal();
    ds.weights.resize(p);
    for (Index j = 0; j < p; ++j) ds.weights(j) = signed_band(rng, 2.8, 3.2);

    ds.Y = regenerate_y(ds);
    return ds;
}

SimDataset gen_nonlinear_example(Index n, std::mt19937_64& rng) {
    SimDataset ds;
    ds.kind = SecondaryKind::Continuous;
    ds.truth = CausalGraph(3, 4, {{0, 1}, {1, 2}}, {{0, 0}, {1, 1}, {3, 1}, {2, 2}, {3, 2}});
    ds.B_true = Matrix::Zero(3, 3);
    ds.B_true(0, 1) = signed_band(rng, 0.8, 1.2);
    ds.B_true(1, 2) = signed_band(rng, 0.8, 1.2);
    ds.X = gaussian(rng, n, 4);
    ds.U = gaussian(rng, n, 1);
    ds.phi.resize(1, 3);
    for (Index j = 0; j < 3; ++j) ds.phi(0, j) = signed_band(rng, 0.3, 0.4);
    ds.noise_scales.resize(3);
    for (Index j = 0; j < 3; ++j) ds.noise_scales(j) = uniform(rng, 0.3, 0.4);
    ds.E = gaussian(rng, n, 3) * ds.noise_scales.asDiagonal();
    ds.weights = Vector::Ones(3);

    auto x = [&](Index l) { return ds.X.col(l).array(); };
    Matrix G(n, 3);
    G.col(0) = x(0).square().matrix();
    // X4 enters Y2 through an interaction so the pair {X2, X4} stays relevant
    // when only one of them is assumed valid.
    G.col(1) = (x(1).square() + x(1) * x(3) + x(3)).matrix();
    // X4 enters Y3 through its square so it cannot cancel against the linear
    // X4 term carried over from Y2.
    G.col(2) = (x(2) + 0.5 * x(3).square()).matrix();
    ds.Y = G + ds.U * ds.phi + ds.E;
    ds.Y.col(1) += ds.B_true(0, 1) * ds.Y.col(0);
    ds.Y.col(2) += ds.B_true(1, 2) * ds.Y.col(1);
    return ds;
}

Metrics score_structure(const std::vector<Edge>& est, const CausalGraph& truth) {
    std::set<Edge> found(est.begin(), est.end());
    Metrics m;
    for (const Edge& e : found) {
        if (truth.has_edge(e.first, e.second)) {
            ++m.tp;
        } else if (truth.has_edge(e.second, e.first)) {
            ++m.re;
        } else {
            ++m.fp;
        }
    }
    for (const Edge& e : truth.edges()) {
        if (!found.count(e)) ++m.fn;
    }
    double tp = m.tp, re = m.re, fp = m.fp, fn = m.fn;
    m.fdp = (tp + re + fp) > 0 ? (re + fp) / (tp + re + fp) : 0.0;
    m.tpr = (tp + fn) > 0 ? tp / (tp + fn) : 1.0;
    m.shd = fp + fn + re;
    m.ji = (tp + m.shd) > 0 ? tp / (tp + m.shd) : 1.0;
    return m;
}

Losses score_parameters(const Matrix& B_hat, const Matrix& B_true) {
    if (B_hat.rows() != B_true.rows() || B_hat.cols() != B_true.cols()) {
        throw InvalidArgument("score_parameters: shape mismatch");
    }
    Matrix d = (B_hat - B_true).cwiseAbs();
    Losses l;
    if (d.size() == 0) return l;
    l.l_inf = d.maxCoeff();
    l.l_1 = d.sum();
    l.l_2 = std::sqrt(d.squaredNorm());
    return l;
}

const MetricSummary& BenchmarkSummary::metric(const std::string& name) const {
    for (const auto& m : metrics) {
        if (m.name == name) return m;
    }
    throw InvalidArgument("unknown metric '" + name + "'");
}

Replication run_replication(const SimConfig& cfg, Index rep, unsigned dcor_threads) {
    Replication out;
    out.index = rep;
    out.seed = stream_seed(cfg.seed, rep);
    try {
        std::mt19937_64 rng(out.seed);
        SimGraph g = gen_graph(cfg, rng);
        SimDataset ds = gen_data(cfg, g, rng);
        out.true_edges = g.graph.edges().size();

        PipelineOptions opts;
        opts.alpha = cfg.alpha;
        opts.threads = dcor_threads;
        opts.estimate.q_star = cfg.q_star;
        opts.estimate.omega = cfg.omega;
        opts.estimate.moments.gamma = cfg.gamma;
        opts.estimate.moments.basis.degree = cfg.degree;
        opts.estimate.moments.kinds.assign(cfg.q, cfg.secondary_kind == SecondaryKind::Discrete
                                                      ? VariableKind::Binary
                                                      : VariableKind::Continuous);
        PipelineResult res = run_pipeline(ds.X, ds.Y, opts);

        out.selected = res.estimation.selected_edges;
        out.warnings = res.peeling.warnings;
        out.warnings.insert(out.warnings.end(), res.estimation.warnings.begin(),
                            res.estimation.warnings.end());
        out.metrics = score_structure(out.selected, g.graph);
        Losses l = score_parameters(res.estimation.coefficient_matrix(cfg.p), g.B);
        out.metrics.l_inf = l.l_inf;
        out.metrics.l_1 = l.l_1;
        out.metrics.l_2 = l.l_2;
        out.ok = true;
    } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
    }
    return out;
}

BenchmarkSummary run_benchmark(const SimConfig& cfg, unsigned threads) {
    cfg.validate();
    BenchmarkSummary s;
    s.config = cfg;
    s.replications.resize(cfg.n_reps);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cfg.n_reps)));
    if (threads == 1) {
        for (Index r = 0; r < cfg.n_reps; ++r) s.replications[r] = run_replication(cfg, r);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (Index r = t; r < cfg.n_reps; r += threads) {
                    s.replications[r] = run_replication(cfg, r);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    const std::vector<std::pair<std::string, double Metrics::*>> fields = {
        {"fdp", &Metrics::fdp},     {"tpr", &Metrics::tpr}, {"shd", &Metrics::shd},
        {"ji", &Metrics::ji},       {"l_inf", &Metrics::l_inf}, {"l_1", &Metrics::l_1},
        {"l_2", &Metrics::l_2}};
    for (const auto& rep : s.replications) (rep.ok ? s.n_ok : s.n_failed) += 1;
    for (const auto& [name, field] : fields) {
        MetricSummary m{name, 0.0, 0.0};
        if (s.n_ok > 0) {
            double sum = 0.0;
            for (const auto& rep : s.replications) {
                if (rep.ok) sum += rep.metrics.*field;
            }
            m.mean = sum / static_cast<double>(s.n_ok);
            if (s.n_ok > 1) {
                double ss = 0.0;
                for (const auto& rep : s.replications) {
                    if (rep.ok) ss += std::pow(rep.metrics.*field - m.mean, 2);
                }
                m.sd = std::sqrt(ss / static_cast<double>(s.n_ok - 1));
            }
        }
        s.metrics.push_back(m);
    }
    return s;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const char* table : {"table1", "table2", "table3"}) {
        for (const char* kind : {"random", "hub"}) {
            for (const char* p : {"p10", "p20"}) {
                names.push_back(std::string(table) + "-" + kind + "-" + p);
            }
        }
    }
    return names;
}

SimConfig preset(const std::string& name) {
    auto names = preset_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::string msg = "unknown preset '" + name + "'; available:";
        for (const auto& n : names) msg += " " + n;
        throw InvalidArgument(msg);
    }
    SimConfig cfg;
    // table1: continuous secondaries; table2/table3: binary secondaries (table3
    // reports the parameter losses of the same runs).
    cfg.secondary_kind = name.rfind("table1", 0) == 0 ? SecondaryKind::Continuous
                                                       : SecondaryKind::Discrete;
    cfg.graph_kind = name.find("-hub-") != std::string::npos ? GraphKind::Hub : GraphKind::Random;
    cfg.p = name.ends_with("p20") ? 20 : 10;
    cfg.q = 2 * cfg.p + cfg.p / 2;
    cfg.r = cfg.p / 2;
    cfg.n = 1000;
    cfg.n_reps = 50;
    cfg.seed = 1;
    cfg.gamma = 2;
    cfg.q_star = 0.05;
    return cfg;
}

} // namespace placid
