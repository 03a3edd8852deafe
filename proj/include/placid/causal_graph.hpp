#pragma once

#include "placid/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace placid {

// Returns a directed cycle (as a node sequence, first node not repeated) among
// `edges` over nodes 0..p-1, or an empty vector if the edges form a DAG.
std::vector<Index> find_cycle(Index p, const std::vector<Edge>& edges);

// Ancestral relation graph: transitive ancestral edges E+, reachability edges
// I+ from secondary to primary variables, and candidate-IV sets per node.
struct AncestralGraph {
    Index p = 0;
    Index q = 0;
    std::vector<Edge> ancestral_edges;  // (k, j): Y_k is an ancestor of Y_j
    std::vector<Edge> reach_edges;      // (l, j): X_l reaches Y_j
    std::vector<IndexSet> candidate_ivs;  // size p

    // Throws CycleError if ancestral_edges is cyclic, InvalidArgument on range.
    void validate() const;

    bool operator==(const AncestralGraph&) const = default;
};

// Causal graph over p primary variables Y and q secondary variables X.
// Immutable; construction fails on out-of-range indices or directed cycles.
class CausalGraph {
public:
    CausalGraph() = default;
    CausalGraph(Index p, Index q, std::vector<Edge> edges, std::vector<Edge> interventions);

    Index p() const noexcept { return p_; }
    Index q() const noexcept { return q_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<Edge>& interventions() const noexcept { return interventions_; }

    bool has_edge(Index k, Index j) const;

    IndexSet parents(Index j) const;
    IndexSet children(Index j) const;
    IndexSet ancestors(Index j) const;
    IndexSet descendants(Index j) const;
    IndexSet mediators(Index k, Index j) const;
    Index height(Index j) const;
    // Length of the longest directed path k -> ... -> j; nullopt if none.
    std::optional<Index> longest_path_len(Index k, Index j) const;
    IndexSet leaves() const;

    // intr(j): secondary variables with an edge into Y_j.
    IndexSet interventions_on(Index j) const;
    // Primary variables targeted by X_l.
    IndexSet targets_of(Index l) const;

    IndexSet valid_ivs(Index j) const;
    IndexSet candidate_ivs(Index j) const;

    // A topological order of the primary variables (parents first).
    std::vector<Index> topological_order() const;

    AncestralGraph to_arg() const;

    bool operator==(const CausalGraph& o) const {
        return p_ == o.p_ && q_ == o.q_ && edges_ == o.edges_ && interventions_ == o.interventions_;
    }

private:
    void check_node(Index j) const;
    void check_iv(Index l) const;

    Index p_ = 0;
    Index q_ = 0;
    std::vector<Edge> edges_;
    std::vector<Edge> interventions_;
    std::vector<IndexSet> children_;
    std::vector<IndexSet> parents_;
    std::vector<IndexSet> targets_;   // per secondary variable
    std::vector<IndexSet> intr_;      // per primary variable
    std::vector<Index> topo_;
};

} // namespace placid
