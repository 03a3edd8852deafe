#pragma once
// Brute-force reference implementations shared by the unit tests. They are
// written for clarity, not speed, and only used on small inputs.

#include "placid/causal_graph.hpp"

#include "placid/types.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using placid::Edge;
using placid::Index;
using placid::IndexSet;

// Reachability from sum_{m=1..p} A^m with integer arithmetic.
inline std::set<Edge> reach_by_powers(Index p, const std::vector<Edge>& edges) {
    Eigen::MatrixXi A = Eigen::MatrixXi::Zero(p, p);
    for (auto [k, j] : edges) A(k, j) = 1;
    Eigen::MatrixXi power = A, total = Eigen::MatrixXi::Zero(p, p);
    for (Index m = 1; m <= p; ++m) {
        total += power;
        power = (power * A).cwiseMin(1);
    }
    std::set<Edge> out;
    for (Index k = 0; k < p; ++k) {
        for (Index j = 0; j < p; ++j) {
            if (total(k, j) > 0) out.emplace(k, j);
        }
    }
    return out;
}

// Every simple directed path from k to j as a node sequence.
inline std::vector<std::vector<Index>> all_paths(Index p, const std::vector<Edge>& edges, Index k,
                                                 Index j) {
    std::vector<std::vector<Index>> out;
    std::vector<Index> path{k};
    std::function<void(Index)> walk = [&](Index v) {
        if (v == j && path.size() > 1) {
            out.push_back(path);
            return;
        }
        for (auto [a, b] : edges) {
            if (a != v || std::find(path.begin(), path.end(), b) != path.end()) continue;
            path.push_back(b);
            walk(b);
            path.pop_back();
        }
    };
    walk(k);
    (void)p;
    return out;
}

inline IndexSet mediators(Index p, const std::vector<Edge>& edges, Index k, Index j) {
    std::set<Index> s;
    for (const auto& path : all_paths(p, edges, k, j)) {
        for (Index i = 1; i + 1 < path.size(); ++i) s.insert(path[i]);
    }
    return IndexSet(s.begin(), s.end());
}

inline int longest_path(Index p, const std::vector<Edge>& edges, Index k, Index j) {
    int best = -1;
    for (const auto& path : all_paths(p, edges, k, j)) best = std::max(best, int(path.size()) - 1);
    return best;
}

// Random DAG over a random permutation of the nodes.
inline std::vector<Edge> random_dag(Index p, double density, std::mt19937_64& rng) {
    std::vector<Index> order(p);
    for (Index i = 0; i < p; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::bernoulli_distribution coin(density);
    std::vector<Edge> edges;
    for (Index a = 0; a < p; ++a) {
        for (Index b = a + 1; b < p; ++b) {
            if (coin(rng)) edges.emplace_back(order[a], order[b]);
        }
    }
    return edges;
}

// All DAGs over p labelled nodes (p <= 4): every orientation subset that is acyclic.
inline std::vector<std::vector<Edge>> all_dags(Index p) {
    std::vector<Edge> pairs;
    for (Index a = 0; a < p; ++a) {
        for (Index b = 0; b < p; ++b) {
            if (a != b) pairs.emplace_back(a, b);
        }
    }
    std::vector<std::vector<Edge>> out;
    const Index m = pairs.size();
    for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
        std::vector<Edge> e;
        bool both = false;
        for (Index i = 0; i < m && !both; ++i) {
            if (!(mask >> i & 1)) continue;
            Edge rev{pairs[i].second, pairs[i].first};
            for (const auto& x : e) both |= x == rev;
            e.push_back(pairs[i]);
        }
        if (both) continue;
        if (placid::find_cycle(p, e).empty()) out.push_back(e);
    }
    return out;
}

// Literal O(n^3) definition: S1 + S2 - 2 S3 with the triple sum for S3.
inline double dcov_triple_sum(const placid::Vector& x, const placid::Vector& y) {
    const Index n = x.size();
    const double nn = static_cast<double>(n);
    double s1 = 0, ax = 0, by = 0, s3 = 0;
    for (Index r = 0; r < n; ++r) {
        for (Index s = 0; s < n; ++s) {
            s1 += std::abs(x(r) - x(s)) * std::abs(y(r) - y(s));
            ax += std::abs(x(r) - x(s));
            by += std::abs(y(r) - y(s));
            for (Index t = 0; t < n; ++t) s3 += std::abs(x(r) - x(t)) * std::abs(y(s) - y(t));
        }
    }
    return s1 / (nn * nn) + (ax / (nn * nn)) * (by / (nn * nn)) - 2.0 * s3 / (nn * nn * nn);
}

// Population R: X_l depends on Y_j iff (l, j) is a reach edge of the truth.
inline Eigen::MatrixXi population_r(const placid::AncestralGraph& a) {
    Eigen::MatrixXi R = Eigen::MatrixXi::Zero(a.q, a.p);
    for (auto [l, j] : a.reach_edges) R(l, j) = 1;
    return R;
}

// Dependence strengths: random positive where R is 1, zero elsewhere.
inline placid::Matrix population_c(const Eigen::MatrixXi& R, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    placid::Matrix C = placid::Matrix::Zero(R.rows(), R.cols());
    for (Eigen::Index i = 0; i < R.rows(); ++i) {
        for (Eigen::Index j = 0; j < R.cols(); ++j) {
            if (R(i, j)) C(i, j) = u(rng);
        }
    }
    return C;
}

// One valid IV per node, plus random extra IVs targeting a node and some of
// its descendants (candidate) or arbitrary nodes (possibly invalid).
inline placid::CausalGraph with_ivs(Index p, const std::vector<Edge>& edges, std::mt19937_64& rng,
                                    bool any_invalid) {
    placid::CausalGraph bare(p, 0, edges, {});
    std::vector<Edge> ivs;
    for (Index j = 0; j < p; ++j) ivs.emplace_back(j, j);
    Index q = p;
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<Index> node(0, p - 1);
    for (int extra = 0; extra < 2; ++extra) {
        Index k = node(rng);
        ivs.emplace_back(q, k);
        IndexSet pool = any_invalid ? IndexSet{} : bare.descendants(k);
        if (any_invalid) {
            for (Index j = 0; j < p; ++j) {
                if (j != k) pool.push_back(j);
            }
        }
        for (Index j : pool) {
            if (coin(rng)) ivs.emplace_back(q, j);
        }
        ++q;
    }
    return placid::CausalGraph(p, q, edges, ivs);
}

} // namespace oracle
