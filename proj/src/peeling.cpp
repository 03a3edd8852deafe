#include "placid/peeling.hpp"

#include <algorithm>
#include <limits>

namespace placid {

std::vector<Edge> transitive_closure(const std::vector<Edge>& edges, Index p) {
    for (auto [k, j] : edges) {
        if (k >= p || j >= p) throw InvalidArgument("transitive_closure: edge out of range");
    }
    auto cycle = find_cycle(p, edges);
    if (!cycle.empty()) {
        std::string msg = "ambiguous ancestral order: cycle";
        for (Index v : cycle) msg += " Y" + std::to_string(v + 1);
        throw CycleError(msg, cycle);
    }
    // Acyclic, so iterating to a fixed point over reach sets terminates in at
    // most p rounds; p is small in every use.
    std::vector<std::vector<char>> reach(p, std::vector<char>(p, 0));
    for (auto [k, j] : edges) reach[k][j] = 1;
    for (Index mid = 0; mid < p; ++mid) {
        for (Index k = 0; k < p; ++k) {
            if (!reach[k][mid]) continue;
            for (Index j = 0; j < p; ++j) {
                if (reach[mid][j]) reach[k][j] = 1;
            }
        }
    }
    std::vector<Edge> out;
    for (Index k = 0; k < p; ++k) {
        for (Index j = 0; j < p; ++j) {
            if (reach[k][j]) out.emplace_back(k, j);
        }
    }
    return out;
}

std::vector<IndexSet> candidate_sets_from_arg(const std::vector<Edge>& ancestral_edges,
                                              const std::vector<Edge>& reach_edges, Index p,
                                              Index q) {
    std::vector<std::vector<char>> anc(p, std::vector<char>(p, 0));
    for (auto [k, j] : ancestral_edges) anc[k][j] = 1;
    std::vector<IndexSet> reached(q);
    for (auto [l, j] : reach_edges) reached[l].push_back(j);

    std::vector<IndexSet> ca(p);
    for (Index l = 0; l < q; ++l) {
        for (Index k : reached[l]) {
            bool ok = std::all_of(reached[l].begin(), reached[l].end(),
                                  [&](Index j) { return j == k || anc[k][j]; });
            if (ok) ca[k].push_back(l);
        }
    }
    for (auto& s : ca) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    return ca;
}

PeelingResult estimate_arg(const Matrix& c, const Eigen::MatrixXi& rejections) {
    if (c.rows() != rejections.rows() || c.cols() != rejections.cols()) {
        throw InvalidArgument("estimate_arg: C and R must have the same shape");
    }
    const Index q = static_cast<Index>(c.rows());
    const Index p = static_cast<Index>(c.cols());
    if (q == 0 || p == 0) throw InvalidArgument("estimate_arg: need q >= 1 and p >= 1");

    auto dep = [&](Index l, Index j) { return rejections(l, j) != 0; };

    PeelingResult res;
    res.leaf_ivs.assign(p, {});
    std::vector<char> y_left(p, 1), x_left(q, 1);
    Index y_count = p;
    std::vector<Edge> partial;  // unmediated-parent edges before closure

    while (y_count > 0) {
        // Support size of each remaining secondary row over remaining nodes.
        Index best = std::numeric_limits<Index>::max();
        std::vector<Index> norm(q, 0);
        for (Index l = 0; l < q; ++l) {
            if (!x_left[l]) continue;
            for (Index j = 0; j < p; ++j) {
                if (y_left[j] && dep(l, j)) ++norm[l];
            }
            if (norm[l] > 0) best = std::min(best, norm[l]);
        }

        if (best == std::numeric_limits<Index>::max()) {
            IndexSet rest;
            for (Index j = 0; j < p; ++j) {
                if (y_left[j]) rest.push_back(j);
            }
            std::string msg = "peeling stalled: no remaining secondary variable depends on";
            for (Index j : rest) msg += " Y" + std::to_string(j + 1);
            msg += "; peeled as one final level without IVs";
            res.warnings.push_back(msg);
            res.levels.push_back(rest);
            res.stalled = true;
            break;
        }

        IndexSet leaves;
        for (Index l = 0; l < q; ++l) {
            if (!x_left[l] || norm[l] != best) continue;
            Index k = p;
            double top = -std::numeric_limits<double>::infinity();
            bool tie = false;
            for (Index j = 0; j < p; ++j) {
                if (!y_left[j]) continue;
                if (c(l, j) > top) {
                    top = c(l, j);
                    k = j;
                    tie = false;
                } else if (c(l, j) == top) {
                    tie = true;
                }
            }
            if (tie) {
                res.warnings.push_back("tie in distance correlation for X" + std::to_string(l + 1) +
                                       "; chose Y" + std::to_string(k + 1));
            }
            leaves.push_back(k);
            res.leaf_ivs[k].push_back(l);
        }
        std::sort(leaves.begin(), leaves.end());
        leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());

        for (Index k : leaves) {
            const auto& ivs = res.leaf_ivs[k];
            for (Index j = 0; j < p; ++j) {
                if (y_left[j]) continue;
                bool all = std::all_of(ivs.begin(), ivs.end(), [&](Index l) { return dep(l, j); });
                if (all) partial.emplace_back(k, j);
            }
        }
        for (Index k : leaves) {
            y_left[k] = 0;
            --y_count;
            for (Index l : res.leaf_ivs[k]) x_left[l] = 0;
        }
        res.levels.push_back(leaves);
    }

    AncestralGraph& arg = res.arg;
    arg.p = p;
    arg.q = q;
    arg.ancestral_edges = transitive_closure(partial, p);

    std::vector<std::vector<char>> reach(q, std::vector<char>(p, 0));
    for (Index l = 0; l < q; ++l) {
        for (Index j = 0; j < p; ++j) reach[l][j] = dep(l, j) ? 1 : 0;
    }
    for (auto [k, j] : arg.ancestral_edges) {
        for (Index l = 0; l < q; ++l) {
            if (dep(l, k)) reach[l][j] = 1;
        }
    }
    for (Index l = 0; l < q; ++l) {
        for (Index j = 0; j < p; ++j) {
            if (reach[l][j]) arg.reach_edges.emplace_back(l, j);
        }
    }
    arg.candidate_ivs = candidate_sets_from_arg(arg.ancestral_edges, arg.reach_edges, p, q);
    return res;
}

} // namespace placid
