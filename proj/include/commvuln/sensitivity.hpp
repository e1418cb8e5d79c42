#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "commvuln/errors.hpp"
#include "commvuln/parallel.hpp"
#include "commvuln/rng.hpp"
#include "commvuln/vulnerability.hpp"

namespace commvuln {

/// Deterministic model: (alpha, beta, chi) -> per-community zeta vector.
using ModelFn = std::function<std::vector<double>(double, double, double)>;

constexpr std::size_t kSobolParams = 3;
inline constexpr std::array<const char*, kSobolParams> kSobolParamNames = {"alpha", "beta",
                                                                           "chi"};

enum class CommunityStatus { ok, zero_variance, non_finite };

inline const char* status_token(CommunityStatus s) {
    switch (s) {
        case CommunityStatus::ok: return "ok";
        case CommunityStatus::zero_variance: return "zero_variance";
        case CommunityStatus::non_finite: return "non_finite";
    }
    return "?";
}

struct SobolEntry {
    double first_order = 0.0;      // S_i, clipped to [0, 1]
    double total_effect = 0.0;     // S_Ti, clipped to [0, 1]
    double first_order_raw = 0.0;  // pre-clip estimate
    double total_effect_raw = 0.0; // pre-clip estimate
};

struct SobolCommunity {
    std::string name;
    CommunityStatus status = CommunityStatus::ok;
    double variance = 0.0;                          // V-hat of the output
    std::array<SobolEntry, kSobolParams> entries{}; // alpha, beta, chi
};

struct SobolResult {
    std::vector<SobolCommunity> communities;
    std::size_t sample_count = 0; // rows per base matrix
    std::uint64_t seed = 0;
    double range_lo = 0.0;
    double range_hi = 2.0;
};

/// Raw pick-and-freeze evaluations: base matrices A and B plus, per parameter,
/// the hybrid matrix AB_k (A with column k taken from B). Stored per community
/// so index estimation and block bootstrap can reuse one expensive sampling run.
struct SobolSamples {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double range_lo = 0.0;
    double range_hi = 2.0;
    std::vector<std::string> names;
    // [community][row]
    std::vector<std::vector<double>> y_a;
    std::vector<std::vector<double>> y_b;
    // [community][parameter][row]
    std::vector<std::array<std::vector<double>, kSobolParams>> y_ab;
};

namespace detail {

// Order-insensitive reduction: fixed 256-wide blocks summed sequentially, so
// the result is bit-stable for any worker count.
template <class F>
double block_mean(std::size_t n, F&& value) {
    constexpr std::size_t kBlock = 256;
    double total = 0.0;
    for (std::size_t start = 0; start < n; start += kBlock) {
        const std::size_t stop = std::min(n, start + kBlock);
        double partial = 0.0;
        for (std::size_t i = start; i < stop; ++i) partial += value(i);
        total += partial;
    }
    return total / static_cast<double>(n);
}

} // namespace detail

/// Draw the A/B matrices with the counter-based generator and evaluate the
/// model on every pick-and-freeze row: n * (2 + 3) evaluations in total.
inline SobolSamples sobol_samples(const ModelFn& fn, std::size_t n, std::uint64_t seed,
                                  double range_lo, double range_hi) {
    if (n < 64) throw InputError("sobol sampling needs at least 64 rows per matrix");
    if (!(range_lo < range_hi)) throw InputError("sobol range lower bound must be below upper");

    SobolSamples s;
    s.n = n;
    s.seed = seed;
    s.range_lo = range_lo;
    s.range_hi = range_hi;

    auto draw = [&](std::uint64_t stream, std::size_t row, std::size_t col) {
        return rng::uniform(seed, stream, row, col, range_lo, range_hi);
    };

    const std::vector<double> probe = fn(1.0, 1.0, 1.0);
    const std::size_t m = probe.size();
    if (m == 0) throw PipelineError("sobol sampling: model produced no communities");
    s.names.resize(m);
    for (std::size_t c = 0; c < m; ++c) s.names[c] = "c" + std::to_string(c + 1);
    s.y_a.assign(m, std::vector<double>(n));
    s.y_b.assign(m, std::vector<double>(n));
    s.y_ab.assign(m, {});
    for (std::size_t c = 0; c < m; ++c)
        for (std::size_t k = 0; k < kSobolParams; ++k) s.y_ab[c][k].assign(n, 0.0);

    parallel_for(n, [&](std::size_t row) {
        std::array<double, kSobolParams> a{}, b{};
        for (std::size_t col = 0; col < kSobolParams; ++col) {
            a[col] = draw(0, row, col);
            b[col] = draw(1, row, col);
        }
        const std::vector<double> ya = fn(a[0], a[1], a[2]);
        const std::vector<double> yb = fn(b[0], b[1], b[2]);
        for (std::size_t c = 0; c < m; ++c) {
            s.y_a[c][row] = ya[c];
            s.y_b[c][row] = yb[c];
        }
        for (std::size_t k = 0; k < kSobolParams; ++k) {
            std::array<double, kSobolParams> ab = a;
            ab[k] = b[k];
            const std::vector<double> yab = fn(ab[0], ab[1], ab[2]);
            for (std::size_t c = 0; c < m; ++c) s.y_ab[c][k][row] = yab[c];
        }
    });
    return s;
}

namespace detail {

template <class RowAt>
SobolResult estimate_indices(const SobolSamples& s, std::size_t rows, RowAt&& row_at) {
    constexpr double kVarFloor = 1e-14;
    SobolResult res;
    res.sample_count = s.n;
    res.seed = s.seed;
    res.range_lo = s.range_lo;
    res.range_hi = s.range_hi;
    res.communities.resize(s.names.size());
    for (std::size_t c = 0; c < s.names.size(); ++c) {
        SobolCommunity& com = res.communities[c];
        com.name = s.names[c];

        bool finite = true;
        for (std::size_t i = 0; i < rows && finite; ++i) {
            const std::size_t r = row_at(i);
            if (!std::isfinite(s.y_a[c][r]) || !std::isfinite(s.y_b[c][r])) finite = false;
            for (std::size_t k = 0; k < kSobolParams && finite; ++k)
                if (!std::isfinite(s.y_ab[c][k][r])) finite = false;
        }
        if (!finite) {
            com.status = CommunityStatus::non_finite;
            continue; // indices stay 0; the samples hit the +inf sentinel
        }

        const double vhat = 0.5 * block_mean(rows, [&](std::size_t i) {
                                const std::size_t r = row_at(i);
                                const double d = s.y_b[c][r] - s.y_a[c][r];
                                return d * d;
                            });
        com.variance = vhat;
        if (vhat < kVarFloor) {
            com.status = CommunityStatus::zero_variance;
            continue; // constant output: all indices defined as 0
        }
        for (std::size_t k = 0; k < kSobolParams; ++k) {
            // Jansen estimators. With V-hat pinned to the same B-vs-A block
            // mean, a parameter the output ignores yields S_i = S_Ti = 0
            // bit-exactly, not merely statistically.
            const double num_first = 0.5 * block_mean(rows, [&](std::size_t i) {
                                         const std::size_t r = row_at(i);
                                         const double d = s.y_b[c][r] - s.y_ab[c][k][r];
                                         return d * d;
                                     });
            const double num_total = 0.5 * block_mean(rows, [&](std::size_t i) {
                                         const std::size_t r = row_at(i);
                                         const double d = s.y_a[c][r] - s.y_ab[c][k][r];
                                         return d * d;
                                     });
            SobolEntry& e = com.entries[k];
            e.first_order_raw = 1.0 - num_first / vhat;
            e.total_effect_raw = num_total / vhat;
            e.first_order = std::clamp(e.first_order_raw, 0.0, 1.0);
            e.total_effect = std::clamp(e.total_effect_raw, 0.0, 1.0);
        }
    }
    return res;
}

} // namespace detail

/// Estimate indices from a sampling run, using every row.
inline SobolResult sobol_indices_from(const SobolSamples& s) {
    return detail::estimate_indices(s, s.n, [](std::size_t i) { return i; });
}

/// Estimate from a row subset (indices into the sampling run, repeats allowed)
/// — the resampling hook for block-bootstrap standard errors.
inline SobolResult sobol_indices_from(const SobolSamples& s,
                                      const std::vector<std::size_t>& rows) {
    if (rows.empty()) throw PipelineError("sobol estimation over an empty row subset");
    for (std::size_t r : rows)
        if (r >= s.n) throw PipelineError("sobol row subset index out of range");
    return detail::estimate_indices(s, rows.size(), [&](std::size_t i) { return rows[i]; });
}

/// One-call path: sample then estimate. Deterministic for fixed (n, seed).
inline SobolResult sobol_indices(const ModelFn& fn, std::size_t n, std::uint64_t seed,
                                 double range_lo = 0.0, double range_hi = 2.0) {
    return sobol_indices_from(sobol_samples(fn, n, seed, range_lo, range_hi));
}

/// Model over fixed normalized factors: zeta_i(alpha, beta, chi).
inline ModelFn zeta_model(const NormalizedFactors& nf) {
    if (nf.eta.size() != nf.sigma.size() || nf.eta.size() != nf.gamma.size())
        throw PipelineError("zeta model: factor vectors differ in length");
    return [nf](double alpha, double beta, double chi) {
        return vulnerability(nf.eta, nf.sigma, nf.gamma, alpha, beta, chi);
    };
}

/// Sobol' indices of each community's zeta for a concrete network: pipeline to
/// normalized factors, then Monte Carlo over the weight cube.
inline SobolResult sobol_indices(const Graph& g, const Partition& p, double phi, std::size_t n,
                                 std::uint64_t seed, double range_lo = 0.0,
                                 double range_hi = 2.0) {
    const std::size_t m = p.count();
    if (m < 2) throw PipelineError("sensitivity analysis needs at least two communities");
    std::vector<double> eta_raw(m), sigma_raw(m), gamma_raw(m);
    for (std::size_t c = 0; c < m; ++c) {
        eta_raw[c] = eic(g, p, static_cast<int>(c));
        sigma_raw[c] = eoc(g, p, static_cast<int>(c));
    }
    const CommunityNetwork cn = community_network(g, p, phi);
    for (std::size_t c = 0; c < m; ++c) gamma_raw[c] = gravity_index(p, cn, static_cast<int>(c));
    const NormalizedFactors nf = normalize_factors(eta_raw, sigma_raw, gamma_raw);
    return sobol_indices(zeta_model(nf), n, seed, range_lo, range_hi);
}

} // namespace commvuln
