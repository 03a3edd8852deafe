#include "placid/causal_graph.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace placid {

namespace {

void sort_unique(std::vector<Edge>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string node_name(Index j) { return "Y" + std::to_string(j + 1); }

} // namespace

std::vector<Index> find_cycle(Index p, const std::vector<Edge>& edges) {
    std::vector<IndexSet> out(p);
    for (auto [k, j] : edges) out[k].push_back(j);
    // 0 = unvisited, 1 = on stack, 2 = done
    std::vector<int> state(p, 0);
    std::vector<Index> stack;
    std::vector<Index> cycle;

    std::function<bool(Index)> dfs = [&](Index u) {
        state[u] = 1;
        stack.push_back(u);
        for (Index v : out[u]) {
            if (state[v] == 1) {
                auto it = std::find(stack.begin(), stack.end(), v);
                cycle.assign(it, stack.end());
                return true;
            }
            if (state[v] == 0 && dfs(v)) return true;
        }
        stack.pop_back();
        state[u] = 2;
        return false;
    };
    for (Index u = 0; u < p; ++u) {
        if (state[u] == 0 && dfs(u)) return cycle;
    }
    return {};
}

void AncestralGraph::validate() const {
    if (candidate_ivs.size() != p) {
        throw InvalidArgument("ancestral graph: candidate_ivs must have one entry per node");
    }
    for (auto [k, j] : ancestral_edges) {
        if (k >= p || j >= p || k == j) {
            throw InvalidArgument("ancestral graph: ancestral edge out of range");
        }
    }
    for (auto [l, j] : reach_edges) {
        if (l >= q || j >= p) throw InvalidArgument("ancestral graph: reach edge out of range");
    }
    for (const auto& ca : candidate_ivs) {
        for (Index l : ca) {
            if (l >= q) throw InvalidArgument("ancestral graph: candidate IV out of range");
        }
    }
    auto cycle = find_cycle(p, ancestral_edges);
    if (!cycle.empty()) {
        std::string msg = "ancestral graph contains a cycle:";
        for (Index v : cycle) msg += " " + node_name(v);
        throw CycleError(msg, cycle);
    }
}

CausalGraph::CausalGraph(Index p, Index q, std::vector<Edge> edges,
                         std::vector<Edge> interventions)
    : p_(p), q_(q), edges_(std::move(edges)), interventions_(std::move(interventions)) {
    sort_unique(edges_);
    sort_unique(interventions_);
    children_.assign(p_, {});
    parents_.assign(p_, {});
    intr_.assign(p_, {});
    targets_.assign(q_, {});
    for (auto [k, j] : edges_) {
        if (k >= p_ || j >= p_) throw InvalidArgument("edge index out of range");
        if (k == j) throw CycleError("self-loop on " + node_name(k), {k});
        children_[k].push_back(j);
        parents_[j].push_back(k);
    }
    for (auto [l, j] : interventions_) {
        if (l >= q_ || j >= p_) throw InvalidArgument("intervention index out of range");
        targets_[l].push_back(j);
        intr_[j].push_back(l);
    }

    // Kahn's algorithm; a leftover node means a cycle.
    std::vector<Index> indeg(p_, 0);
    for (auto [k, j] : edges_) ++indeg[j];
    std::vector<Index> ready;
    for (Index j = 0; j < p_; ++j) {
        if (indeg[j] == 0) ready.push_back(j);
    }
    topo_.reserve(p_);
    for (std::size_t head = 0; head < ready.size(); ++head) {
        Index u = ready[head];
        topo_.push_back(u);
        for (Index v : children_[u]) {
            if (--indeg[v] == 0) ready.push_back(v);
        }
    }
    if (topo_.size() != p_) {
        auto cycle = find_cycle(p_, edges_);
        std::string msg = "causal graph contains a cycle:";
        for (Index v : cycle) msg += " " + node_name(v);
        throw CycleError(msg, cycle);
    }
}

void CausalGraph::check_node(Index j) const {
    if (j >= p_) throw InvalidArgument("primary index " + std::to_string(j + 1) + " out of range");
}

void CausalGraph::check_iv(Index l) const {
    if (l >= q_) throw InvalidArgument("secondary index " + std::to_string(l + 1) + " out of range");
}

bool CausalGraph::has_edge(Index k, Index j) const {
    check_node(k);
    check_node(j);
    return std::binary_search(children_[k].begin(), children_[k].end(), j);
}

IndexSet CausalGraph::parents(Index j) const {
    check_node(j);
    return parents_[j];
}

IndexSet CausalGraph::children(Index j) const {
    check_node(j);
    return children_[j];
}

IndexSet CausalGraph::ancestors(Index j) const {
    check_node(j);
    std::vector<char> seen(p_, 0);
    std::vector<Index> todo{j};
    while (!todo.empty()) {
        Index u = todo.back();
        todo.pop_back();
        for (Index v : parents_[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                todo.push_back(v);
            }
        }
    }
    IndexSet out;
    for (Index v = 0; v < p_; ++v) {
        if (seen[v]) out.push_back(v);
    }
    return out;
}

IndexSet CausalGraph::descendants(Index j) const {
    check_node(j);
    std::vector<char> seen(p_, 0);
    std::vector<Index> todo{j};
    while (!todo.empty()) {
        Index u = todo.back();
        todo.pop_back();
        for (Index v : children_[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                todo.push_back(v);
            }
        }
    }
    IndexSet out;
    for (Index v = 0; v < p_; ++v) {
        if (seen[v]) out.push_back(v);
    }
    return out;
}

IndexSet CausalGraph::mediators(Index k, Index j) const {
    check_node(k);
    check_node(j);
    if (k == j) throw InvalidArgument("mediators requires distinct nodes");
    auto de = descendants(k);
    auto an = ancestors(j);
    IndexSet out;
    std::set_intersection(de.begin(), de.end(), an.begin(), an.end(), std::back_inserter(out));
    return out;
}

Index CausalGraph::height(Index j) const {
    check_node(j);
    std::vector<Index> h(p_, 0);
    for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
        for (Index c : children_[*it]) h[*it] = std::max(h[*it], h[c] + 1);
    }
    return h[j];
}

std::optional<Index> CausalGraph::longest_path_len(Index k, Index j) const {
    check_node(k);
    check_node(j);
    if (k == j) return std::nullopt;
    // best[v] = longest path length k -> v, -1 if unreachable.
    std::vector<long> best(p_, -1);
    best[k] = 0;
    for (Index u : topo_) {
        if (best[u] < 0) continue;
        for (Index v : children_[u]) best[v] = std::max(best[v], best[u] + 1);
    }
    if (best[j] <= 0) return std::nullopt;
    return static_cast<Index>(best[j]);
}

IndexSet CausalGraph::leaves() const {
    IndexSet out;
    for (Index j = 0; j < p_; ++j) {
        if (children_[j].empty()) out.push_back(j);
    }
    return out;
}

IndexSet CausalGraph::interventions_on(Index j) const {
    check_node(j);
    return intr_[j];
}

IndexSet CausalGraph::targets_of(Index l) const {
    check_iv(l);
    return targets_[l];
}

IndexSet CausalGraph::valid_ivs(Index j) const {
    check_node(j);
    IndexSet out;
    for (Index l : intr_[j]) {
        if (targets_[l].size() == 1) out.push_back(l);
    }
    return out;
}

IndexSet CausalGraph::candidate_ivs(Index j) const {
    check_node(j);
    auto de = descendants(j);
    IndexSet out;
    for (Index l : intr_[j]) {
        bool ok = std::all_of(targets_[l].begin(), targets_[l].end(), [&](Index t) {
            return t == j || std::binary_search(de.begin(), de.end(), t);
        });
        if (ok) out.push_back(l);
    }
    return out;
}

std::vector<Index> CausalGraph::topological_order() const { return topo_; }

AncestralGraph CausalGraph::to_arg() const {
    AncestralGraph arg;
    arg.p = p_;
    arg.q = q_;
    for (Index j = 0; j < p_; ++j) {
        auto an = ancestors(j);
        for (Index k : an) arg.ancestral_edges.emplace_back(k, j);
        an.push_back(j);
        for (Index k : an) {
            for (Index l : intr_[k]) arg.reach_edges.emplace_back(l, j);
        }
        arg.candidate_ivs.push_back(candidate_ivs(j));
    }
    sort_unique(arg.ancestral_edges);
    sort_unique(arg.reach_edges);
    return arg;
}

} // namespace placid
