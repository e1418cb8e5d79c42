#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "commvuln/community.hpp"
#include "commvuln/errors.hpp"
#include "commvuln/graph.hpp"
#include "commvuln/parallel.hpp"

namespace commvuln {

/// Edges with both endpoints inside community ci (interior cohesion).
inline int eic(const Graph& g, const Partition& p, int ci) {
    if (ci < 0 || static_cast<std::size_t>(ci) >= p.count())
        throw PipelineError("eic: unknown community " + std::to_string(ci));
    int count = 0;
    for (const auto& [a, b] : g.edges())
        if (p.assignment[static_cast<std::size_t>(a)] == ci &&
            p.assignment[static_cast<std::size_t>(b)] == ci)
            ++count;
    return count;
}

/// Edges with exactly one endpoint inside community ci (small-scale
/// interaction with the neighbouring communities).
inline int eoc(const Graph& g, const Partition& p, int ci) {
    if (ci < 0 || static_cast<std::size_t>(ci) >= p.count())
        throw PipelineError("eoc: unknown community " + std::to_string(ci));
    int count = 0;
    for (const auto& [a, b] : g.edges()) {
        const bool ia = p.assignment[static_cast<std::size_t>(a)] == ci;
        const bool ib = p.assignment[static_cast<std::size_t>(b)] == ci;
        if (ia != ib) ++count;
    }
    return count;
}

/// Descending, zero-padded distribution of a community's intra-community node
/// degrees. kappa is the largest community size in the partition; entries
/// beyond the community's size are exactly zero.
struct ProbabilitySet {
    std::vector<double> values;
    int community = -1;
    int member_count = 0;
    int kappa = 0;
};

/// The degree used here is the node's degree in the subgraph induced by the
/// community, not its full-graph degree; the two readings are kept apart so
/// the alternative can be toggled for experiments.
inline int intra_degree(const Graph& g, const Partition& p, int node) {
    const int c = p.assignment[static_cast<std::size_t>(node)];
    int d = 0;
    for (int w : g.neighbors(node))
        if (p.assignment[static_cast<std::size_t>(w)] == c) ++d;
    return d;
}

inline ProbabilitySet probability_set(const Graph& g, const Partition& p, int ci) {
    if (ci < 0 || static_cast<std::size_t>(ci) >= p.count())
        throw PipelineError("probability_set: unknown community " + std::to_string(ci));
    std::size_t kappa = 0;
    for (const auto& c : p.communities) kappa = std::max(kappa, c.size());
    const auto& members = p.communities[static_cast<std::size_t>(ci)];
    std::vector<int> intra;
    intra.reserve(members.size());
    int total = 0;
    for (int v : members) {
        intra.push_back(intra_degree(g, p, v));
        total += intra.back();
    }
    if (total == 0)
        throw PipelineError("probability_set: community " + std::to_string(ci + 1) +
                            " has no internal edge, its degree distribution is degenerate");
    ProbabilitySet ps;
    ps.community = ci;
    ps.member_count = static_cast<int>(members.size());
    ps.kappa = static_cast<int>(kappa);
    ps.values.assign(kappa, 0.0);
    for (std::size_t i = 0; i < intra.size(); ++i)
        ps.values[i] = static_cast<double>(intra[i]) / static_cast<double>(total);
    std::sort(ps.values.begin(), ps.values.end(), std::greater<double>());
    return ps;
}

/// Jensen-Shannon divergence between two communities' probability sets,
/// truncated at kappa' = min of the two community sizes. Probability mass at
/// indices beyond kappa' is dropped, exactly as the model prescribes; the
/// result stays within [0, ln 2]. 0*ln(0/x) terms are taken as 0.
inline double jsd(const ProbabilitySet& pi, const ProbabilitySet& pj) {
    const int kprime = std::min(pi.member_count, pj.member_count);
    if (kprime < 1) throw PipelineError("jsd: empty probability set");
    double sum = 0.0;
    for (int t = 0; t < kprime; ++t) {
        const double a = pi.values[static_cast<std::size_t>(t)];
        const double b = pj.values[static_cast<std::size_t>(t)];
        const double mid = 0.5 * (a + b);
        if (a > 0.0) sum += a * std::log(a / mid);
        if (b > 0.0) sum += b * std::log(b / mid);
    }
    return 0.5 * sum;
}

/// Log-sigmoid transition from divergence to abstract distance,
/// 1 / (1 + e^(-phi*mu)). Strictly increasing in mu; 0.5 at mu = 0.
inline double abstract_distance(double mu, double phi) {
    return 1.0 / (1.0 + std::exp(-phi * mu));
}

/// Fully-connected weighted network over communities: symmetric abstract
/// distance matrix (zero diagonal) plus the underlying divergences.
struct CommunityNetwork {
    std::size_t size = 0;
    std::vector<double> ad;  // row-major size*size
    std::vector<double> div; // row-major size*size

    double at(std::size_t i, std::size_t j) const { return ad[i * size + j]; }
    double divergence(std::size_t i, std::size_t j) const { return div[i * size + j]; }
};

inline CommunityNetwork community_network(const Graph& g, const Partition& p, double phi) {
    if (p.count() < 2)
        throw PipelineError("community network requires at least two communities");
    const std::size_t n = p.count();
    std::vector<ProbabilitySet> sets;
    sets.reserve(n);
    for (std::size_t c = 0; c < n; ++c)
        sets.push_back(probability_set(g, p, static_cast<int>(c)));
    CommunityNetwork cn;
    cn.size = n;
    cn.ad.assign(n * n, 0.0);
    cn.div.assign(n * n, 0.0);
    // unordered pairs, flattened so the fill parallelizes over independent slots
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    parallel_for(pairs.size(), [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        const double mu = jsd(sets[i], sets[j]);
        const double up = abstract_distance(mu, phi);
        cn.div[i * n + j] = cn.div[j * n + i] = mu;
        cn.ad[i * n + j] = cn.ad[j * n + i] = up;
    });
    return cn;
}

/// Gravity index: sum over the other communities of
/// |N_ci| * |N_cj| / ad(i,j)^2. Large-scale interaction strength.
inline double gravity_index(const Partition& p, const CommunityNetwork& cn, int ci) {
    if (p.count() < 2)
        throw PipelineError("gravity index is undefined with a single community");
    if (cn.size != p.count())
        throw PipelineError("community network does not match the partition");
    if (ci < 0 || static_cast<std::size_t>(ci) >= p.count())
        throw PipelineError("gravity_index: unknown community " + std::to_string(ci));
    const std::size_t i = static_cast<std::size_t>(ci);
    const double ni = static_cast<double>(p.communities[i].size());
    double total = 0.0;
    for (std::size_t j = 0; j < cn.size; ++j) {
        if (j == i) continue;
        const double up = cn.at(i, j);
        total += ni * static_cast<double>(p.communities[j].size()) / (up * up);
    }
    return total;
}

} // namespace commvuln
