#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "commvuln/errors.hpp"

namespace commvuln {

/// Undirected simple graph. Node identifiers are opaque strings; internally
/// nodes are dense indices in first-appearance order. Immutable after
/// construction, so it is safe to share read-only across workers.
class Graph {
public:
    Graph() = default;

    /// Build from explicit node labels and label pairs. Nodes keep the given
    /// order; edge endpoints must name known nodes. Duplicate edges (either
    /// orientation) collapse; self-loops are rejected.
    static Graph build(const std::vector<std::string>& nodes,
                       const std::vector<std::pair<std::string, std::string>>& edges) {
        Graph g;
        for (const auto& label : nodes) g.intern(label, /*allow_new=*/true);
        for (const auto& [a, b] : edges) {
            const int ia = g.require(a);
            const int ib = g.require(b);
            g.add_edge_checked(ia, ib, a);
        }
        g.finish();
        return g;
    }

    std::size_t node_count() const { return labels_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }

    /// Index of a node label, or -1 when unknown.
    int find(std::string_view label) const {
        auto it = index_.find(std::string(label));
        return it == index_.end() ? -1 : it->second;
    }

    int degree(int i) const {
        if (i < 0 || static_cast<std::size_t>(i) >= labels_.size())
            throw PipelineError("degree: unknown node index " + std::to_string(i));
        return static_cast<int>(adj_[static_cast<std::size_t>(i)].size());
    }

    int degree(std::string_view label) const {
        const int i = find(label);
        if (i < 0) throw PipelineError("degree: unknown node '" + std::string(label) + "'");
        return degree(i);
    }

    bool has_edge(int i, int j) const {
        if (i == j) return false;
        const auto& nbrs = adj_[static_cast<std::size_t>(i)];
        return std::binary_search(nbrs.begin(), nbrs.end(), j);
    }

    const std::vector<int>& neighbors(int i) const { return adj_[static_cast<std::size_t>(i)]; }

    /// Edges as index pairs with first < second, in insertion order.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

private:
    friend Graph parse_edge_list(std::istream& in);

    int intern(const std::string& label, bool allow_new) {
        auto it = index_.find(label);
        if (it != index_.end()) return it->second;
        if (!allow_new) return -1;
        const int idx = static_cast<int>(labels_.size());
        labels_.push_back(label);
        index_.emplace(label, idx);
        adj_.emplace_back();
        return idx;
    }

    int require(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) throw InputError("edge endpoint names unknown node '" + label + "'");
        return it->second;
    }

    void add_edge_checked(int ia, int ib, const std::string& shown) {
        if (ia == ib) throw InputError("self-loop on node '" + shown + "' is not allowed");
        const auto key = std::make_pair(std::min(ia, ib), std::max(ia, ib));
        if (seen_.emplace(pack(key.first, key.second)).second) {
            edges_.push_back(key);
            adj_[static_cast<std::size_t>(ia)].push_back(ib);
            adj_[static_cast<std::size_t>(ib)].push_back(ia);
        }
    }

    void finish() {
        for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
        seen_.clear();
    }

    static long long pack(int a, int b) {
        return (static_cast<long long>(a) << 32) | static_cast<unsigned>(b);
    }

    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::vector<int>> adj_;
    std::vector<std::pair<int, int>> edges_;
    std::unordered_set<long long> seen_;
};

/// Parse a whitespace-separated edge list. Lines starting with '#' are
/// comments, blank lines are ignored, every other line must hold exactly two
/// node tokens. Node order is first appearance.
inline Graph parse_edge_list(std::istream& in) {
    Graph g;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a)) continue;           // blank
        if (a.front() == '#') continue;     // comment
        if (!(ls >> b) || (ls >> extra))
            throw InputError("line " + std::to_string(lineno) +
                             ": expected exactly two node tokens");
        const int ia = g.intern(a, true);
        const int ib = g.intern(b, true);
        g.add_edge_checked(ia, ib, a);
    }
    g.finish();
    return g;
}

inline Graph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    return parse_edge_list(in);
}

/// Serialize back to the edge-list format, one edge per line in insertion
/// order. parse(serialize(g)) reproduces the edge set.
inline std::string to_edge_list(const Graph& g) {
    std::string out;
    for (const auto& [a, b] : g.edges()) {
        out += g.label(a);
        out += ' ';
        out += g.label(b);
        out += '\n';
    }
    return out;
}

} // namespace commvuln
