// Acceptance harness: exercises the published behaviour of the library end to
// end and prints one PASS/FAIL line per criterion. Exits non-zero if any
// criterion fails. Criterion 9 is optional and activated by environment
// variables naming user-supplied edge lists.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <commvuln/commvuln.hpp>

#include "../fixture.hpp"

using namespace commvuln;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error(what);
}

void check_close(double got, double want, double tol, const std::string& what) {
    if (!(std::fabs(got - want) <= tol))
        throw std::runtime_error(what + ": got " + std::to_string(got) + ", want " +
                                 std::to_string(want) + " +/- " + std::to_string(tol));
}

void criterion(int id, const char* name, long limit_ms,
               const std::function<std::string()>& body) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    std::string note;
    std::string error;
    try {
        note = body();
    } catch (const std::exception& e) {
        error = e.what();
    }
    const long ms = static_cast<long>(
        std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0).count());
    if (error.empty() && limit_ms > 0 && ms >= limit_ms)
        error = "runtime budget exceeded (" + std::to_string(ms) + " ms >= " +
                std::to_string(limit_ms) + " ms)";
    if (error.empty()) {
        std::printf("[%d] PASS %s (%ld ms)%s%s\n", id, name, ms, note.empty() ? "" : " — ",
                    note.c_str());
    } else {
        std::printf("[%d] FAIL %s (%ld ms): %s\n", id, name, ms, error.c_str());
        ++failures;
    }
    std::fflush(stdout);
}

// --- criterion 1: golden merge trace -------------------------------------

std::string golden_merge_trace() {
    const Graph g = example9();
    const DetectionTrace tr = detect_communities(g);
    check(tr.steps.size() == 8, "trace should hold 8 rows, has " +
                                    std::to_string(tr.steps.size()));
    const double expect[8] = {-0.1224, -0.0612, -0.0051, 0.0995,
                              0.1403,  0.2117,  0.2857,  0.2653};
    for (std::size_t t = 0; t < 8; ++t)
        check_close(tr.steps[t].q, expect[t], 5e-5, "Q at step " + std::to_string(t));
    check(detail::partition_text(g, tr.final) == "{1,2} {3,4,5} {6,7,8,9}",
          "final partition is " + detail::partition_text(g, tr.final));
    return "";
}

// --- criterion 2: golden abstract distances -------------------------------

std::string golden_distances() {
    const Graph g = example9();
    const Partition p = example9_partition(g);
    const CommunityNetwork cn = community_network(g, p, 3.0);
    check_close(cn.divergence(1, 2), 0.0090, 5e-5, "mu_23");
    check_close(cn.at(1, 2), 0.5067, 5e-5, "upsilon_23");
    const double expect[3][3] = {{0.0, 0.5126, 0.5318},
                                 {0.5126, 0.0, 0.5067},
                                 {0.5318, 0.5067, 0.0}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            check_close(cn.at(i, j), expect[i][j], 5e-4,
                        "upsilon(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    return "";
}

// --- criterion 3: golden gravity indices ----------------------------------

std::string golden_gravity() {
    const Graph g = example9();
    const Partition p = example9_partition(g);
    const CommunityNetwork cn = community_network(g, p, 3.0);
    check_close(gravity_index(p, cn, 0), 51.1223, 0.05, "gamma_1");
    check_close(gravity_index(p, cn, 1), 69.5717, 0.05, "gamma_2");
    // independent re-evaluation of the pairwise sum for the third community
    double brute = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
        if (j == 2) continue;
        const double sz_i = static_cast<double>(p.communities[2].size());
        const double sz_j = static_cast<double>(p.communities[j].size());
        brute += sz_i * sz_j / (cn.at(2, j) * cn.at(2, j));
    }
    check(brute > 74.5 && brute < 75.5,
          "brute-force gamma_3 lands near 75, got " + std::to_string(brute));
    check_close(gravity_index(p, cn, 2), brute, 1e-9, "gamma_3 vs brute force");
    return "gamma_3=" + std::to_string(brute);
}

// --- criterion 4: golden vulnerability report ------------------------------

std::string golden_report() {
    const VulnerabilityReport rep = evaluate_vulnerability(example9(), 1.0, 1.0, 1.0, 3.0);
    const double expect[3] = {17.6099, 4.3133, 1.0};
    for (std::size_t c = 0; c < 3; ++c) {
        const double rel = std::fabs(rep.rows[c].zeta - expect[c]) / expect[c];
        check(rel <= 0.005, "zeta_" + std::to_string(c + 1) + " relative error " +
                                std::to_string(rel));
        check(rep.rows[c].xi == rep.rows[c].zeta,
              "xi_" + std::to_string(c + 1) + " differs from zeta");
    }
    check(rep.rows[2].zeta == 1.0, "minimum zeta is exactly 1");
    check_close(rep.ranking.delta, 8.3050, 0.01, "delta");
    check(rep.chain() == "c3 <= c2 << c1", "chain is '" + rep.chain() + "'");
    return "";
}

// --- criterion 5: classical degeneracy -------------------------------------

std::string classical_degeneracy() {
    const VulnerabilityReport fix = evaluate_vulnerability(example9(), 0.0, 1.0, 0.0, 3.0);
    check(fix.rows[0].zeta == 2.0 && fix.rows[1].zeta == 2.0 && fix.rows[2].zeta == 1.0,
          "fixture scores under beta-only weights should be exactly (2,2,1)");

    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> size_dist(6, 14);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    int evaluated = 0;
    int attempts = 0;
    while (evaluated < 100 && attempts < 4000) {
        ++attempts;
        const int n = size_dist(rng);
        std::string text;
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                if (coin(rng) < 0.25)
                    text += std::to_string(i) + " " + std::to_string(j) + "\n";
        if (text.empty()) continue;
        const Graph g = parse_edge_list(text);
        const DetectionTrace tr = detect_communities(g);
        VulnerabilityReport rep;
        try {
            rep = build_report(g, tr.final, 0.0, 1.0, 0.0, 3.0);
        } catch (const PipelineError&) {
            continue; // degenerate partition (singletons or closed components)
        }
        const std::size_t m = rep.rows.size();
        int max_sigma = 0;
        for (const auto& row : rep.rows) max_sigma = std::max(max_sigma, row.sigma_raw);
        std::vector<double> oracle(m);
        for (std::size_t c = 0; c < m; ++c)
            oracle[c] = rep.rows[c].sigma_raw == 0
                            ? kInfinity
                            : static_cast<double>(max_sigma) / rep.rows[c].sigma_raw;
        for (std::size_t c = 0; c < m; ++c) {
            const double z = rep.rows[c].zeta;
            if (std::isinf(oracle[c])) {
                check(std::isinf(z), "expected unbounded score");
            } else {
                check(std::fabs(z - oracle[c]) <= 1e-9 * oracle[c],
                      "score mismatch: " + std::to_string(z) + " vs " +
                          std::to_string(oracle[c]));
            }
        }
        std::vector<int> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return oracle[a] > oracle[b]; });
        for (std::size_t k = 0; k < m; ++k)
            check(rep.rows[static_cast<std::size_t>(order[k])].rank ==
                      static_cast<int>(k) + 1,
                  "rank order mismatch on random graph");
        ++evaluated;
    }
    check(evaluated == 100,
          "only " + std::to_string(evaluated) + " random graphs evaluated");
    return "100 random graphs (" + std::to_string(attempts) + " attempts)";
}

// --- criterion 6: exhaustive merge oracle ----------------------------------

Partition merge_pair(const Graph& g, const Partition& p, std::size_t a, std::size_t b) {
    std::vector<std::vector<int>> comms;
    comms.reserve(p.count() - 1);
    std::vector<int> joined = p.communities[a];
    joined.insert(joined.end(), p.communities[b].begin(), p.communities[b].end());
    comms.push_back(std::move(joined));
    for (std::size_t c = 0; c < p.count(); ++c)
        if (c != a && c != b) comms.push_back(p.communities[c]);
    return Partition::of(g, std::move(comms));
}

std::string merge_oracle() {
    long graphs = 0;
    long pair_checks = 0;
    for (int n = 2; n <= 6; ++n) {
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
        const unsigned masks = 1u << pairs.size();
        for (unsigned mask = 1; mask < masks; ++mask) {
            // connectivity over all n labelled nodes
            std::vector<unsigned> adj(static_cast<std::size_t>(n), 0u);
            for (std::size_t e = 0; e < pairs.size(); ++e)
                if (mask & (1u << e)) {
                    adj[static_cast<std::size_t>(pairs[e].first)] |=
                        1u << pairs[e].second;
                    adj[static_cast<std::size_t>(pairs[e].second)] |=
                        1u << pairs[e].first;
                }
            unsigned seen = 1u;
            unsigned frontier = 1u;
            while (frontier != 0) {
                unsigned next = 0;
                for (int v = 0; v < n; ++v)
                    if (frontier & (1u << v)) next |= adj[static_cast<std::size_t>(v)];
                frontier = next & ~seen;
                seen |= next;
            }
            if (seen != (1u << n) - 1u) continue;
            ++graphs;

            std::string text;
            for (std::size_t e = 0; e < pairs.size(); ++e)
                if (mask & (1u << e))
                    text += std::to_string(pairs[e].first + 1) + " " +
                            std::to_string(pairs[e].second + 1) + "\n";
            const Graph g = parse_edge_list(text);
            const DetectionTrace tr = detect_communities(g);

            for (std::size_t t = 1; t < tr.steps.size(); ++t) {
                const Partition& prev = tr.steps[t - 1].partition;
                const double q_prev = modularity(g, prev);
                for (std::size_t a = 0; a < prev.count(); ++a)
                    for (std::size_t b = a + 1; b < prev.count(); ++b) {
                        const double d = merge_delta_q(g, prev, static_cast<int>(a),
                                                       static_cast<int>(b));
                        const double oracle =
                            modularity(g, merge_pair(g, prev, a, b)) - q_prev;
                        if (std::fabs(d - oracle) > 1e-12)
                            throw std::runtime_error(
                                "delta mismatch " + std::to_string(d - oracle) +
                                " on mask " + std::to_string(mask) + " (n=" +
                                std::to_string(n) + ")");
                        ++pair_checks;
                    }
            }

            // greedy local maximality: undoing the last applied merge never wins
            int last_applied = -1;
            for (std::size_t t = 0; t < tr.steps.size(); ++t)
                if (tr.steps[t].applied && tr.steps[t].merged)
                    last_applied = static_cast<int>(t);
            if (last_applied > 0)
                check(tr.final_q >=
                          tr.steps[static_cast<std::size_t>(last_applied) - 1].q - 1e-12,
                      "undoing the last merge beat the final Q");
        }
    }
    check(graphs == 27475, "expected 27475 connected graphs, saw " + std::to_string(graphs));
    return std::to_string(graphs) + " graphs, " + std::to_string(pair_checks) +
           " pair checks";
}

// --- criterion 7: sobol estimator laws -------------------------------------

struct QuadIndices {
    double s[kSobolParams];
    double st[kSobolParams];
};

// 201-point equal-weight tensor quadrature on [0,2]^3. The model factorizes
// per parameter, so the tensor sums reduce to one-dimensional moments.
QuadIndices quadrature_indices(double eta, double sigma, double gamma) {
    const int kGrid = 201;
    const double bases[kSobolParams] = {eta, sigma, gamma};
    double mean[kSobolParams];
    double mean_sq[kSobolParams];
    for (std::size_t k = 0; k < kSobolParams; ++k) {
        double s1 = 0.0;
        double s2 = 0.0;
        for (int i = 0; i < kGrid; ++i) {
            const double t = 2.0 * i / (kGrid - 1);
            const double f = std::pow(bases[k], -t);
            s1 += f;
            s2 += f * f;
        }
        mean[k] = s1 / kGrid;
        mean_sq[k] = s2 / kGrid;
    }
    const double total_var =
        mean_sq[0] * mean_sq[1] * mean_sq[2] -
        (mean[0] * mean[1] * mean[2]) * (mean[0] * mean[1] * mean[2]);
    QuadIndices out{};
    for (std::size_t k = 0; k < kSobolParams; ++k) {
        const std::size_t i = (k + 1) % kSobolParams;
        const std::size_t j = (k + 2) % kSobolParams;
        const double var_k = mean_sq[k] - mean[k] * mean[k];
        const double var_others =
            mean_sq[i] * mean_sq[j] - (mean[i] * mean[j]) * (mean[i] * mean[j]);
        out.s[k] = var_k * (mean[i] * mean[j]) * (mean[i] * mean[j]) / total_var;
        out.st[k] = 1.0 - var_others * mean[k] * mean[k] / total_var;
    }
    return out;
}

std::string sobol_laws() {
    const NormalizedFactors nf{{0.2, 0.6, 1.0}, {0.5, 1.0, 0.5}, {0.8, 0.9, 1.0}};
    const std::size_t n = 4096;
    const SobolSamples s = sobol_samples(zeta_model(nf), n, 2024, 0.0, 2.0);
    const SobolResult res = sobol_indices_from(s);

    // inert weights produce exact zeros (unit factors)
    for (std::size_t k : {std::size_t{0}, std::size_t{2}}) {
        check(res.communities[2].entries[k].first_order == 0.0 &&
                  res.communities[2].entries[k].total_effect == 0.0,
              "community 3 has unit eta and gamma; indices must be exactly 0");
    }
    check(res.communities[1].entries[1].first_order == 0.0 &&
              res.communities[1].entries[1].total_effect == 0.0,
          "community 2 has unit sigma; beta indices must be exactly 0");

    // a sigma-only community charges everything to beta
    check_close(res.communities[2].entries[1].first_order, 1.0, 0.02, "S(beta), sigma-only");

    // first order never exceeds total effect beyond three bootstrap errors
    const std::size_t block = 256;
    const std::size_t nblocks = n / block;
    std::mt19937 rng(777);
    std::uniform_int_distribution<std::size_t> pick(0, nblocks - 1);
    const int replicates = 200;
    std::vector<std::vector<double>> diffs(3 * kSobolParams);
    std::vector<std::size_t> rows(n);
    for (int r = 0; r < replicates; ++r) {
        std::size_t at = 0;
        for (std::size_t b = 0; b < nblocks; ++b) {
            const std::size_t blk = pick(rng);
            for (std::size_t i = 0; i < block; ++i) rows[at++] = blk * block + i;
        }
        const SobolResult boot = sobol_indices_from(s, rows);
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t k = 0; k < kSobolParams; ++k)
                diffs[c * kSobolParams + k].push_back(
                    boot.communities[c].entries[k].first_order_raw -
                    boot.communities[c].entries[k].total_effect_raw);
    }
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t k = 0; k < kSobolParams; ++k) {
            const auto& d = diffs[c * kSobolParams + k];
            double mean = 0.0;
            for (double v : d) mean += v;
            mean /= static_cast<double>(d.size());
            double var = 0.0;
            for (double v : d) var += (v - mean) * (v - mean);
            const double se = std::sqrt(var / static_cast<double>(d.size() - 1));
            const double point = res.communities[c].entries[k].first_order_raw -
                                 res.communities[c].entries[k].total_effect_raw;
            check(point <= 3.0 * se + 1e-9,
                  "S exceeded S_T by more than 3 standard errors (community " +
                      std::to_string(c + 1) + ", parameter " +
                      std::string(kSobolParamNames[k]) + ")");
        }

    // estimator agrees with tensor quadrature
    for (std::size_t c = 0; c < 3; ++c) {
        const QuadIndices q = quadrature_indices(nf.eta[c], nf.sigma[c], nf.gamma[c]);
        for (std::size_t k = 0; k < kSobolParams; ++k) {
            check_close(res.communities[c].entries[k].first_order, q.s[k], 0.02,
                        "S vs quadrature (community " + std::to_string(c + 1) +
                            ", parameter " + std::string(kSobolParamNames[k]) + ")");
            check_close(res.communities[c].entries[k].total_effect, q.st[k], 0.02,
                        "S_T vs quadrature (community " + std::to_string(c + 1) +
                            ", parameter " + std::string(kSobolParamNames[k]) + ")");
        }
    }
    return "4096 rows, 200 bootstrap replicates";
}

// --- criterion 8: byte-identical determinism --------------------------------

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const std::string cmd =
        env_prefix + "\"" + COMMVULN_CLI_PATH + "\" " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return {};
    RunResult r;
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
    return r;
}

std::string determinism() {
    const std::string fixture = std::string("\"") + COMMVULN_FIXTURE_DIR + "/example9.edges\"";
    const std::string cases[4] = {
        "detect " + fixture + " --format json",
        "evaluate " + fixture + " --format json",
        "sensitivity " + fixture + " --samples 256 --seed 11 --format csv",
        "export-cn " + fixture,
    };
    for (const std::string& args : cases) {
        const RunResult first = run_cli(args);
        const RunResult second = run_cli(args);
        check(first.code == 0, "exit code " + std::to_string(first.code) + " for: " + args);
        check(!first.out.empty(), "empty output for: " + args);
        check(first.out == second.out, "repeat run differed for: " + args);
        const RunResult serial = run_cli(args, "COMMVULN_THREADS=1 ");
        const RunResult threaded = run_cli(args, "COMMVULN_THREADS=7 ");
        check(serial.code == 0 && threaded.code == 0, "thread-pinned run failed: " + args);
        check(serial.out == first.out && threaded.out == first.out,
              "output depends on COMMVULN_THREADS for: " + args);
    }
    return "4 subcommands, 4 runs each";
}

// --- criterion 9: published orderings (optional) -----------------------------

void check_case(const char* path, std::size_t communities, double q,
                const std::vector<int>& ranks, const std::string& chain) {
    std::ifstream in(path);
    check(in.good(), std::string("cannot open '") + path + "'");
    const Graph g = parse_edge_list(in);
    const DetectionTrace tr = detect_communities(g);
    check(tr.final.count() == communities,
          std::string(path) + ": expected " + std::to_string(communities) +
              " communities, found " + std::to_string(tr.final.count()));
    check_close(tr.final_q, q, 5e-4, std::string(path) + ": modularity");
    const VulnerabilityReport rep = build_report(g, tr.final, 1.0, 1.0, 1.0, 3.0);
    for (std::size_t c = 0; c < ranks.size(); ++c)
        check(rep.rows[c].rank == ranks[c],
              std::string(path) + ": rank of c" + std::to_string(c + 1) + " is " +
                  std::to_string(rep.rows[c].rank) + ", expected " +
                  std::to_string(ranks[c]));
    check(rep.chain() == chain,
          std::string(path) + ": chain is '" + rep.chain() + "', expected '" + chain + "'");
}

std::string published_orderings() {
    const char* manzi = std::getenv("COMMVULN_MANZI_EDGELIST");
    const char* italian = std::getenv("COMMVULN_ITALIAN_EDGELIST");
    if (manzi == nullptr && italian == nullptr)
        return "skipped: set COMMVULN_MANZI_EDGELIST / COMMVULN_ITALIAN_EDGELIST to enable";
    std::string note;
    if (manzi != nullptr) {
        check_case(manzi, 7, 0.6316, {4, 3, 6, 2, 5, 7, 1},
                   "c6 ~ c3 <= c5 ~ c1 ~ c2 << c4 <= c7");
        note += "manzi ok";
    }
    if (italian != nullptr) {
        check_case(italian, 10, 0.7596, {5, 7, 4, 8, 9, 6, 2, 3, 10, 1},
                   "c9 ~ c5 ~ c4 ~ c2 ~ c6 ~ c1 ~ c3 <= c8 << c7 << c10");
        if (!note.empty()) note += ", ";
        note += "italian ok";
    }
    return note;
}

} // namespace

int main() {
    criterion(1, "golden merge trace", 1000, golden_merge_trace);
    criterion(2, "golden abstract distances", 0, golden_distances);
    criterion(3, "golden gravity indices", 0, golden_gravity);
    criterion(4, "golden vulnerability report", 0, golden_report);
    criterion(5, "classical degeneracy", 0, classical_degeneracy);
    criterion(6, "exhaustive merge oracle", 60000, merge_oracle);
    criterion(7, "sobol estimator laws", 30000, sobol_laws);
    criterion(8, "byte-identical determinism", 0, determinism);
    criterion(9, "published orderings (optional)", 0, published_orderings);
    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
}
