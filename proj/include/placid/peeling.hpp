#pragma once

#include "placid/causal_graph.hpp"
#include "placid/dcor.hpp"
#include "placid/types.hpp"

#include <string>
#include <vector>

namespace placid {

struct PeelingResult {
    AncestralGraph arg;
    // levels[h] holds the nodes removed at peel h, i.e. estimated height h.
    std::vector<IndexSet> levels;
    // IVs selected for each node at the moment it was peeled as a leaf.
    std::vector<IndexSet> leaf_ivs;
    std::vector<std::string> warnings;
    // True when the loop ran out of informative secondary rows before every
    // node was peeled.
    bool stalled = false;

    bool operator==(const PeelingResult&) const = default;
};

// Smallest transitively closed superset of `edges` over nodes 0..p-1.
// Throws CycleError if the edges contain a directed cycle.
std::vector<Edge> transitive_closure(const std::vector<Edge>& edges, Index p);

// l is a candidate IV for k iff (l, k) is a reach edge and every other node j
// reached by l is a descendant of k under the (closed) ancestral edges.
std::vector<IndexSet> candidate_sets_from_arg(const std::vector<Edge>& ancestral_edges,
                                              const std::vector<Edge>& reach_edges, Index p,
                                              Index q);

// Leaf-peeling recovery of the ancestral relation graph from distance
// correlations `c` and rejection indicators `rejections` (both q x p).
PeelingResult estimate_arg(const Matrix& c, const Eigen::MatrixXi& rejections);

inline PeelingResult estimate_arg(const DcorMatrices& dc) {
    return estimate_arg(dc.c, dc.rejections);
}

} // namespace placid
