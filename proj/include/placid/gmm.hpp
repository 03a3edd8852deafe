#pragma once

#include "placid/causal_graph.hpp"
#include "placid/surrogate.hpp"
#include "placid/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace placid {

// Stacked moment conditions over the ancestral edges. For edge i = (k, j)
// the block is Z_k * (Y_j - sum_{m in me(k,j)} beta_mj Y_m - beta_kj Y_k),
// which is affine in beta: m(beta) = h - Gmat * beta.
struct MomentSystem {
    std::vector<Edge> edge_order;        // canonical (lexicographic) order
    std::vector<IndexSet> mediators;     // me(k, j) per edge
    std::vector<std::vector<Index>> terms;  // edges whose beta enters block i
    std::map<Index, EvaluatedBasis> bases;  // surrogate basis per source node
    std::vector<Index> block_offset;     // first stacked row of block i
    Index t_gamma = 0;                   // total stacked dimension
    Matrix Y;                            // n x p
    std::vector<std::string> warnings;

    Index n() const { return static_cast<Index>(Y.rows()); }
    Index edges() const { return edge_order.size(); }

    // Per-sample moments at beta: n x t_gamma.
    Matrix sample_moments(const Vector& beta) const;
    // Empirical mean of Z (.) B_Y.
    Vector h_mean() const;
    // Empirical mean of diag(Z) A_Y, t_gamma x N.
    Matrix g_mean() const;
    // h_mean() - g_mean() * beta.
    Vector mean_moment(const Vector& beta) const;
};

struct MomentOptions {
    Index gamma = 1;
    std::vector<VariableKind> kinds;  // one per secondary column
    BasisOptions basis;
};

// Assembles the moment system for the ancestral edges of `arg`. Every node
// with descendants needs a nonempty candidate set. gamma is clamped to the
// candidate-set size per node (with a warning).
MomentSystem build_moment_system(const Matrix& X, const Matrix& Y, const AncestralGraph& arg,
                                 const MomentOptions& opts);

struct GmmSolution {
    Vector beta;
    std::vector<bool> flagged;  // edges in a near-null direction of the normal matrix
    double condition = 1.0;
    std::vector<std::string> warnings;
};

// Closed-form minimizer of mean_moment(b)' Omega mean_moment(b). Throws
// DegenerateError when the normal matrix is singular.
GmmSolution solve_gmm(const MomentSystem& sys, const Matrix& omega, double cond_limit = 1e12);

struct VarianceComponents {
    Matrix G_block;  // (qmu + t_gamma) x (qmu + N)
    Matrix C_block;  // t_gamma x qmu
    Matrix D_block;  // t_gamma x N
    Matrix F_block;  // (qmu + t_gamma) square
    Matrix W_block;  // (qmu + t_gamma) square
    Matrix V;        // N x N asymptotic covariance of sqrt(n)(beta_hat - beta)
    Vector sigma;    // standard errors sqrt(V_ii / n)
    // Centering constants treated as location parameters: (variable, factor).
    std::vector<std::pair<Index, Index>> mu_params;
};

// Sandwich variance with the centering constants of the surrogate bases
// appended as location parameters. `augment = false` drops them (C = 0).
VarianceComponents sandwich_variance(const MomentSystem& sys, const Matrix& X,
                                     const Vector& beta, const Matrix& omega,
                                     bool augment = true);

// Two-sided normal p-values 2 (1 - Phi(|beta| / sigma)).
Vector pvalues(const Vector& beta, const Vector& sigma);

// Benjamini-Yekutieli step-up selection at level q_star. Returns a mask over
// `pvals`.
std::vector<bool> by_select(const Vector& pvals, double q_star);

enum class OmegaMode { Identity, TwoStep };
std::string to_string(OmegaMode m);
OmegaMode omega_mode_from_string(const std::string& s);

struct EstimateOptions {
    MomentOptions moments;
    OmegaMode omega = OmegaMode::Identity;
    double q_star = 0.05;
    bool mean_augmentation = true;
    double cond_limit = 1e12;
};

struct EstimationResult {
    std::vector<Edge> edge_order;
    Vector beta;
    Vector sigma;
    Vector pvals;
    std::vector<bool> selected;
    std::vector<bool> flagged;
    std::vector<Edge> selected_edges;
    VarianceComponents variance;
    double q_star = 0.05;
    std::vector<std::string> warnings;

    // p x p coefficient matrix with beta on the selected edges, zero elsewhere.
    Matrix coefficient_matrix(Index p) const;
};

EstimationResult estimate(const Matrix& X, const Matrix& Y, const AncestralGraph& arg,
                          const EstimateOptions& opts);

} // namespace placid
