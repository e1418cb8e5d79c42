#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "commvuln/errors.hpp"
#include "commvuln/graph.hpp"

namespace commvuln {

/// Assignment of every node to exactly one community. Communities are kept in
/// canonical order (sorted by smallest member index, members sorted), so equal
/// partitions compare equal.
struct Partition {
    std::vector<std::vector<int>> communities;
    std::vector<int> assignment; // node index -> community index

    std::size_t count() const { return communities.size(); }

    static Partition of(const Graph& g, std::vector<std::vector<int>> comms) {
        Partition p;
        for (auto& c : comms) {
            if (c.empty()) throw PipelineError("partition contains an empty community");
            std::sort(c.begin(), c.end());
        }
        std::sort(comms.begin(), comms.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        p.communities = std::move(comms);
        p.assignment.assign(g.node_count(), -1);
        for (std::size_t ci = 0; ci < p.communities.size(); ++ci) {
            for (int v : p.communities[ci]) {
                if (v < 0 || static_cast<std::size_t>(v) >= g.node_count())
                    throw PipelineError("partition names a node outside the graph");
                if (p.assignment[static_cast<std::size_t>(v)] != -1)
                    throw PipelineError("node '" + g.label(v) + "' appears in two communities");
                p.assignment[static_cast<std::size_t>(v)] = static_cast<int>(ci);
            }
        }
        for (std::size_t v = 0; v < g.node_count(); ++v)
            if (p.assignment[v] == -1)
                throw PipelineError("node '" + g.label(static_cast<int>(v)) +
                                    "' is missing from the partition");
        return p;
    }

    /// Convenience builder from node labels.
    static Partition of_labels(const Graph& g,
                               const std::vector<std::vector<std::string>>& comms) {
        std::vector<std::vector<int>> idx(comms.size());
        for (std::size_t ci = 0; ci < comms.size(); ++ci)
            for (const auto& lbl : comms[ci]) {
                const int v = g.find(lbl);
                if (v < 0) throw PipelineError("partition names unknown node '" + lbl + "'");
                idx[ci].push_back(v);
            }
        return of(g, std::move(idx));
    }

    static Partition singletons(const Graph& g) {
        std::vector<std::vector<int>> comms(g.node_count());
        for (std::size_t v = 0; v < g.node_count(); ++v)
            comms[v] = {static_cast<int>(v)};
        return of(g, std::move(comms));
    }

    bool operator==(const Partition& other) const { return communities == other.communities; }
};

/// Modularity of a partition. Fraction of intra-community edges minus the
/// expected fraction under the degree-preserving null model.
inline double modularity(const Graph& g, const Partition& p) {
    if (g.edge_count() == 0)
        throw PipelineError("modularity is undefined on an edgeless graph");
    if (p.assignment.size() != g.node_count())
        throw PipelineError("partition does not cover the graph's node set");
    const double m = static_cast<double>(g.edge_count());
    std::vector<double> internal(p.count(), 0.0);
    std::vector<double> degsum(p.count(), 0.0);
    for (const auto& [a, b] : g.edges()) {
        const int ca = p.assignment[static_cast<std::size_t>(a)];
        const int cb = p.assignment[static_cast<std::size_t>(b)];
        if (ca == cb) internal[static_cast<std::size_t>(ca)] += 1.0;
    }
    for (std::size_t v = 0; v < g.node_count(); ++v)
        degsum[static_cast<std::size_t>(p.assignment[v])] += g.degree(static_cast<int>(v));
    double q = 0.0;
    for (std::size_t c = 0; c < p.count(); ++c) {
        const double frac = degsum[c] / (2.0 * m);
        q += internal[c] / m - frac * frac;
    }
    return q;
}

/// Modularity change from merging communities a and b of p:
///   E_between/|E| - 2 * D_a * D_b / (2|E|)^2.
/// Equals modularity(merged) - modularity(p) exactly.
inline double merge_delta_q(const Graph& g, const Partition& p, int a, int b) {
    if (a == b) throw PipelineError("merge_delta_q: cannot merge a community with itself");
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= p.count() ||
        static_cast<std::size_t>(b) >= p.count())
        throw PipelineError("merge_delta_q: community index out of range");
    if (g.edge_count() == 0)
        throw PipelineError("merge_delta_q is undefined on an edgeless graph");
    const double m = static_cast<double>(g.edge_count());
    double between = 0.0;
    for (const auto& [u, v] : g.edges()) {
        const int cu = p.assignment[static_cast<std::size_t>(u)];
        const int cv = p.assignment[static_cast<std::size_t>(v)];
        if ((cu == a && cv == b) || (cu == b && cv == a)) between += 1.0;
    }
    auto degsum = [&](int c) {
        double d = 0.0;
        for (int v : p.communities[static_cast<std::size_t>(c)]) d += g.degree(v);
        return d;
    };
    const double da = degsum(a);
    const double db = degsum(b);
    return between / m - 2.0 * da * db / ((2.0 * m) * (2.0 * m));
}

/// One row of the agglomeration trace. The initial state is step t=0 with no
/// merged pair. A final row with applied=false records the rejected merge that
/// stopped the loop (its q/delta_q describe the structure that was not kept).
struct MergeStep {
    int t = 0;
    std::optional<std::pair<std::string, std::string>> merged; // representative labels
    double q = 0.0;
    std::optional<double> delta_q;
    bool applied = true;
    Partition partition; // structure after this step (hypothetical for a rejected row)
};

struct DetectionTrace {
    std::vector<MergeStep> steps;
    Partition final;
    double final_q = 0.0;
};

namespace detail {

// Working state of the greedy loop: one entry per live community, labelled by
// its smallest node index. The merged community keeps the smaller label.
struct Agglomerator {
    const Graph& g;
    std::vector<int> comm_of;           // node -> community label
    std::map<int, std::vector<int>> members;
    std::map<int, double> degsum;

    explicit Agglomerator(const Graph& g_) : g(g_), comm_of(g_.node_count()) {
        for (std::size_t v = 0; v < g.node_count(); ++v) {
            const int i = static_cast<int>(v);
            comm_of[v] = i;
            members[i] = {i};
            degsum[i] = g.degree(i);
        }
    }

    Partition snapshot() const {
        std::vector<std::vector<int>> comms;
        comms.reserve(members.size());
        for (const auto& [lbl, mem] : members) comms.push_back(mem);
        return Partition::of(g, std::move(comms));
    }

    // Best merge by max delta-Q; ties broken by lexicographically smallest
    // (min label, max label) pair. Candidates are all unordered pairs,
    // including non-adjacent ones.
    struct Candidate {
        int a = -1, b = -1;
        double delta_q = 0.0;
    };

    std::optional<Candidate> best_merge() const {
        if (members.size() < 2) return std::nullopt;
        const double m = static_cast<double>(g.edge_count());
        std::map<std::pair<int, int>, double> between;
        for (const auto& [u, v] : g.edges()) {
            const int cu = comm_of[static_cast<std::size_t>(u)];
            const int cv = comm_of[static_cast<std::size_t>(v)];
            if (cu != cv) between[{std::min(cu, cv), std::max(cu, cv)}] += 1.0;
        }
        Candidate best;
        bool have = false;
        // std::map iteration gives ascending (a, b): the first strict max wins,
        // which realizes the lexicographic tie-break.
        for (auto ia = members.begin(); ia != members.end(); ++ia) {
            for (auto ib = std::next(ia); ib != members.end(); ++ib) {
                const int a = ia->first;
                const int b = ib->first;
                auto it = between.find({a, b});
                const double e = it == between.end() ? 0.0 : it->second;
                const double dq =
                    e / m - 2.0 * degsum.at(a) * degsum.at(b) / ((2.0 * m) * (2.0 * m));
                if (!have || dq > best.delta_q) {
                    best = {a, b, dq};
                    have = true;
                }
            }
        }
        if (!have) return std::nullopt;
        return best;
    }

    void apply(const Candidate& c) {
        const int keep = std::min(c.a, c.b);
        const int drop = std::max(c.a, c.b);
        for (int v : members.at(drop)) comm_of[static_cast<std::size_t>(v)] = keep;
        auto& mem = members.at(keep);
        auto& gone = members.at(drop);
        mem.insert(mem.end(), gone.begin(), gone.end());
        std::sort(mem.begin(), mem.end());
        degsum.at(keep) += degsum.at(drop);
        members.erase(drop);
        degsum.erase(drop);
    }
};

} // namespace detail

/// Greedy agglomerative detection: start from singletons, repeatedly apply the
/// merge maximizing delta-Q, stop at the first step whose best delta-Q is
/// negative (that merge is recorded but not applied) or when one community is
/// left. Deterministic; the selection loop is single-threaded by contract.
inline DetectionTrace detect_communities(const Graph& g) {
    if (g.edge_count() == 0)
        throw PipelineError("community detection requires at least one edge");
    detail::Agglomerator agg(g);
    DetectionTrace trace;
    Partition current = agg.snapshot();
    double q_prev = modularity(g, current);
    trace.steps.push_back({0, std::nullopt, q_prev, std::nullopt, true, current});
    int t = 0;
    while (true) {
        auto cand = agg.best_merge();
        if (!cand) break;
        ++t;
        const auto name = std::make_pair(g.label(cand->a), g.label(cand->b));
        if (cand->delta_q < 0.0) {
            detail::Agglomerator preview = agg;
            preview.apply(*cand);
            const Partition rejected = preview.snapshot();
            const double q_rej = modularity(g, rejected);
            trace.steps.push_back({t, name, q_rej, q_rej - q_prev, false, rejected});
            break;
        }
        agg.apply(*cand);
        current = agg.snapshot();
        const double q_now = modularity(g, current);
        trace.steps.push_back({t, name, q_now, q_now - q_prev, true, current});
        q_prev = q_now;
    }
    trace.final = current;
    trace.final_q = q_prev;
    return trace;
}

} // namespace commvuln
