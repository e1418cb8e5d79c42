#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "commvuln/errors.hpp"
#include "commvuln/metrics.hpp"

namespace commvuln {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct NormalizedFactors {
    std::vector<double> eta;
    std::vector<double> sigma;
    std::vector<double> gamma;
};

namespace detail {

inline std::vector<double> normalize_one(const std::vector<double>& v, const char* name) {
    if (v.empty()) throw PipelineError(std::string("normalize_factors: empty ") + name + " vector");
    const double mx = *std::max_element(v.begin(), v.end());
    if (!(mx > 0.0))
        throw PipelineError(std::string("normalize_factors: ") + name +
                            " vector has no positive entry");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / mx;
    return out;
}

} // namespace detail

/// Max-normalization: each factor divided by its vector's maximum, so the
/// strongest community scores exactly 1 in every factor.
inline NormalizedFactors normalize_factors(const std::vector<double>& eta,
                                           const std::vector<double>& sigma,
                                           const std::vector<double>& gamma) {
    if (eta.size() != sigma.size() || eta.size() != gamma.size())
        throw PipelineError("normalize_factors: factor vectors differ in length");
    return {detail::normalize_one(eta, "eta"), detail::normalize_one(sigma, "sigma"),
            detail::normalize_one(gamma, "gamma")};
}

/// Weighted vulnerability zeta_i = 1 / (eta_i^alpha * sigma_i^beta * gamma_i^chi)
/// on normalized factors. A zero factor raised to a positive weight makes the
/// community infinitely vulnerable: the +inf sentinel, never an epsilon.
inline std::vector<double> vulnerability(const std::vector<double>& eta_n,
                                         const std::vector<double>& sigma_n,
                                         const std::vector<double>& gamma_n, double alpha,
                                         double beta, double chi) {
    if (eta_n.size() != sigma_n.size() || eta_n.size() != gamma_n.size())
        throw PipelineError("vulnerability: factor vectors differ in length");
    std::vector<double> zeta(eta_n.size());
    for (std::size_t i = 0; i < zeta.size(); ++i) {
        const double denom =
            std::pow(eta_n[i], alpha) * std::pow(sigma_n[i], beta) * std::pow(gamma_n[i], chi);
        zeta[i] = 1.0 / denom;
    }
    return zeta;
}

/// Relative vulnerability xi_i = zeta_i / min over finite zeta. The sturdiest
/// community maps to exactly 1; +inf sentinels propagate.
inline std::vector<double> relative_vulnerability(const std::vector<double>& zeta) {
    double mn = kInfinity;
    for (double z : zeta)
        if (std::isfinite(z)) mn = std::min(mn, z);
    if (!std::isfinite(mn))
        throw PipelineError("relative_vulnerability: every community is infinitely vulnerable");
    if (!(mn > 0.0))
        throw PipelineError("relative_vulnerability: nonpositive vulnerability floor");
    std::vector<double> xi(zeta.size());
    for (std::size_t i = 0; i < zeta.size(); ++i) xi[i] = zeta[i] / mn;
    return xi;
}

enum class Relation { approx, leq, less, much_less };

inline const char* relation_token(Relation r) {
    switch (r) {
        case Relation::approx: return "~";
        case Relation::leq: return "<=";
        case Relation::less: return "<";
        case Relation::much_less: return "<<";
    }
    return "?";
}

/// Ascending-vulnerability chain with gap-classified relations.
struct FuzzyRanking {
    std::vector<int> order;          // community indices, ascending xi
    std::vector<Relation> relations; // order.size()-1 entries
    std::vector<double> gaps;        // finite gaps only
    double delta = 0.0;              // mean finite gap

    std::string chain(const std::vector<std::string>& names) const {
        std::string out;
        for (std::size_t t = 0; t < order.size(); ++t) {
            if (t > 0) {
                out += ' ';
                out += relation_token(relations[t - 1]);
                out += ' ';
            }
            out += names[static_cast<std::size_t>(order[t])];
        }
        return out;
    }
};

namespace detail {

// Gap classification against the mean gap. The thresholds are strict on both
// sides in the model statement; an exact boundary takes the weaker symbol.
inline Relation classify_gap(double gap, double delta) {
    if (gap <= 0.25 * delta) return Relation::approx;
    if (gap <= 0.75 * delta) return Relation::leq;
    if (gap <= 1.5 * delta) return Relation::less;
    return Relation::much_less;
}

} // namespace detail

/// Sort xi ascending (ties by community id), classify each adjacent gap
/// against the mean gap delta. Infinite entries sit at the vulnerable end of
/// the chain joined by "<<"; delta averages the finite gaps only.
inline FuzzyRanking fuzzy_ranking(const std::vector<double>& xi) {
    if (xi.size() < 2) throw PipelineError("fuzzy ranking needs at least two communities");
    FuzzyRanking fr;
    fr.order.resize(xi.size());
    std::iota(fr.order.begin(), fr.order.end(), 0);
    std::stable_sort(fr.order.begin(), fr.order.end(), [&](int a, int b) {
        const double xa = xi[static_cast<std::size_t>(a)];
        const double xb = xi[static_cast<std::size_t>(b)];
        if (xa != xb) return xa < xb;
        return a < b;
    });
    std::size_t finite = 0;
    while (finite < fr.order.size() &&
           std::isfinite(xi[static_cast<std::size_t>(fr.order[finite])]))
        ++finite;
    for (std::size_t t = 0; t + 1 < finite; ++t)
        fr.gaps.push_back(xi[static_cast<std::size_t>(fr.order[t + 1])] -
                          xi[static_cast<std::size_t>(fr.order[t])]);
    fr.delta = fr.gaps.empty()
                   ? 0.0
                   : std::accumulate(fr.gaps.begin(), fr.gaps.end(), 0.0) /
                         static_cast<double>(fr.gaps.size());
    for (std::size_t t = 0; t + 1 < fr.order.size(); ++t) {
        if (t + 1 >= finite) {
            fr.relations.push_back(Relation::much_less); // into or within the +inf tail
        } else {
            fr.relations.push_back(detail::classify_gap(fr.gaps[t], fr.delta));
        }
    }
    return fr;
}

/// Per-community vulnerability assessment plus the ranking chain.
struct VulnerabilityReport {
    struct Row {
        std::string name;                 // c1, c2, ... in canonical order
        std::vector<std::string> members; // node labels
        int eta_raw = 0;
        int sigma_raw = 0;
        double gamma_raw = 0.0;
        double eta = 0.0;   // normalized
        double sigma = 0.0; // normalized
        double gamma = 0.0; // normalized
        double zeta = 0.0;
        double xi = 0.0;
        int rank = 0; // 1 = most vulnerable
    };
    std::vector<Row> rows;
    double alpha = 1.0, beta = 1.0, chi = 1.0;
    double phi = 3.0;
    FuzzyRanking ranking;

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r.name);
        return out;
    }

    std::string chain() const { return ranking.chain(names()); }
};

/// Assemble the full report for a given partition: factors, community network,
/// gravity, weighted scores, ranks, and the fuzzy chain.
inline VulnerabilityReport build_report(const Graph& g, const Partition& p, double alpha,
                                        double beta, double chi, double phi) {
    const std::size_t n = p.count();
    if (n < 2) throw PipelineError("vulnerability report needs at least two communities");
    std::vector<double> eta_raw(n), sigma_raw(n), gamma_raw(n);
    for (std::size_t c = 0; c < n; ++c) {
        eta_raw[c] = eic(g, p, static_cast<int>(c));
        sigma_raw[c] = eoc(g, p, static_cast<int>(c));
    }
    const CommunityNetwork cn = community_network(g, p, phi);
    for (std::size_t c = 0; c < n; ++c) gamma_raw[c] = gravity_index(p, cn, static_cast<int>(c));
    const NormalizedFactors nf = normalize_factors(eta_raw, sigma_raw, gamma_raw);
    const std::vector<double> zeta = vulnerability(nf.eta, nf.sigma, nf.gamma, alpha, beta, chi);
    const std::vector<double> xi = relative_vulnerability(zeta);

    VulnerabilityReport rep;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.chi = chi;
    rep.phi = phi;
    rep.rows.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        auto& row = rep.rows[c];
        row.name = "c" + std::to_string(c + 1);
        for (int v : p.communities[c]) row.members.push_back(g.label(v));
        row.eta_raw = static_cast<int>(eta_raw[c]);
        row.sigma_raw = static_cast<int>(sigma_raw[c]);
        row.gamma_raw = gamma_raw[c];
        row.eta = nf.eta[c];
        row.sigma = nf.sigma[c];
        row.gamma = nf.gamma[c];
        row.zeta = zeta[c];
        row.xi = xi[c];
    }
    // rank 1 = most vulnerable; ties by ascending community id
    std::vector<int> by_desc(n);
    std::iota(by_desc.begin(), by_desc.end(), 0);
    std::stable_sort(by_desc.begin(), by_desc.end(), [&](int a, int b) {
        const double xa = xi[static_cast<std::size_t>(a)];
        const double xb = xi[static_cast<std::size_t>(b)];
        if (xa != xb) return xa > xb;
        return a < b;
    });
    for (std::size_t pos = 0; pos < n; ++pos)
        rep.rows[static_cast<std::size_t>(by_desc[pos])].rank = static_cast<int>(pos + 1);
    rep.ranking = fuzzy_ranking(xi);
    return rep;
}

/// End-to-end: detect communities, then evaluate them.
inline VulnerabilityReport evaluate_vulnerability(const Graph& g, double alpha, double beta,
                                                  double chi, double phi) {
    const DetectionTrace trace = detect_communities(g);
    return build_report(g, trace.final, alpha, beta, chi, phi);
}

} // namespace commvuln
