#pragma once

#include "placid/causal_graph.hpp"
#include "placid/gmm.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace placid {

enum class GraphKind { Random, Hub };
enum class SecondaryKind { Continuous, Discrete };

std::string to_string(GraphKind k);
std::string to_string(SecondaryKind k);
GraphKind graph_kind_from_string(const std::string& s);
SecondaryKind secondary_kind_from_string(const std::string& s);

struct SimConfig {
    GraphKind graph_kind = GraphKind::Random;
    Index p = 10;
    Index q = 25;
    Index r = 5;
    Index n = 1000;
    SecondaryKind secondary_kind = SecondaryKind::Discrete;
    Index n_reps = 50;
    std::uint64_t seed = 1;
    std::optional<double> alpha;  // unset: 1 / n^2
    Index gamma = 2;
    double q_star = 0.05;
    OmegaMode omega = OmegaMode::Identity;
    Index degree = 2;
    // The benchmark design requires q = 2p + floor(p/2) and r = p/2.
    bool reference_design = true;

    // Throws InvalidArgument on inconsistent dimensions or levels.
    void validate() const;
};

// Splittable seeding: an independent 64-bit seed per (seed, stream).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

struct SimGraph {
    CausalGraph graph;
    Matrix B;  // p x p, B(k, j) = effect of Y_k on Y_j
};

// intr(j) = {j, p+j, 2p+floor(j/2)} in 1-based numbering.
std::vector<Edge> design_interventions(Index p, Index q);

SimGraph gen_graph(const SimConfig& cfg, std::mt19937_64& rng);

struct SimDataset {
    Matrix X;            // n x q
    Matrix Y;            // n x p
    Matrix U;            // n x r confounders
    Matrix E;            // n x p independent noise e_j
    Matrix phi;          // r x p loadings
    Matrix B_true;       // p x p
    Vector noise_scales; // sigma_j
    Vector weights;      // w_j of the continuous g_j (unused for discrete)
    SecondaryKind kind = SecondaryKind::Discrete;
    CausalGraph truth;
};

// g_j(X_intr(j)) for every j, n x p.
Matrix nonlinear_effects(SecondaryKind kind, const CausalGraph& truth, const Matrix& X,
                         const Vector& weights);

// Recomputes Y in topological order from the stored parts.
Matrix regenerate_y(const SimDataset& ds);

SimDataset gen_data(const SimConfig& cfg, const SimGraph& g, std::mt19937_64& rng);

// Y1 -> Y2 -> Y3 with X1 -> Y1, X2 -> Y2, X3 -> Y3 and X4 -> {Y2, Y3}, one
// confounder on all three. Y1 = X1^2 + noise, so X1 is uncorrelated with Y
// while still dependent on it.
SimDataset gen_nonlinear_example(Index n, std::mt19937_64& rng);

struct Metrics {
    Index tp = 0, re = 0, fp = 0, fn = 0;
    double fdp = 0.0, tpr = 0.0, shd = 0.0, ji = 0.0;
    double l_inf = 0.0, l_1 = 0.0, l_2 = 0.0;
};

// Structure scores of an estimated edge set against the truth's direct edges.
Metrics score_structure(const std::vector<Edge>& est, const CausalGraph& truth);

struct Losses {
    double l_inf = 0.0, l_1 = 0.0, l_2 = 0.0;
};

Losses score_parameters(const Matrix& B_hat, const Matrix& B_true);

struct MetricSummary {
    std::string name;
    double mean = 0.0;
    double sd = 0.0;
};

struct Replication {
    Index index = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    Metrics metrics;
    Index true_edges = 0;
    std::vector<Edge> selected;
    std::vector<std::string> warnings;
};

struct BenchmarkSummary {
    SimConfig config;
    std::vector<MetricSummary> metrics;  // fdp, tpr, shd, ji, l_inf, l_1, l_2
    Index n_ok = 0;
    Index n_failed = 0;
    std::vector<Replication> replications;

    const MetricSummary& metric(const std::string& name) const;
};

// One replication: generate, discover, estimate, score.
Replication run_replication(const SimConfig& cfg, Index rep, unsigned dcor_threads = 1);

// Replications run on up to `threads` workers; results are aggregated in
// replication order so the summary does not depend on scheduling.
BenchmarkSummary run_benchmark(const SimConfig& cfg, unsigned threads = 1);

// Named configurations, e.g. "table2-random-p10".
std::vector<std::string> preset_names();
// Throws InvalidArgument for an unknown name.
SimConfig preset(const std::string& name);

} // namespace placid
