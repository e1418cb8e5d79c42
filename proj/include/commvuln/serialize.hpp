#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "commvuln/community.hpp"
#include "commvuln/errors.hpp"
#include "commvuln/metrics.hpp"
#include "commvuln/sensitivity.hpp"
#include "commvuln/vulnerability.hpp"

namespace commvuln {

enum class Format { table, csv, json };

inline Format parse_format(std::string_view s) {
    if (s == "table") return Format::table;
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw InputError("unknown output format '" + std::string(s) + "'");
}

/// Fixed 6-decimal rendering for table/CSV modes; infinities as "inf".
inline std::string fmt6(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

/// JSON value for a score that may carry the +inf sentinel.
inline nlohmann::json json_number(double v) {
    if (std::isinf(v)) return v > 0 ? nlohmann::json("inf") : nlohmann::json("-inf");
    return nlohmann::json(v);
}

/// Inverse of json_number, for round-trip reads.
inline double json_to_number(const nlohmann::json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return kInfinity;
        if (s == "-inf") return -kInfinity;
        throw InputError("unexpected numeric sentinel '" + s + "'");
    }
    return j.get<double>();
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string join_csv(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_field(fields[i]);
    }
    out += '\n';
    return out;
}

// Column-aligned plain-text table: header plus rows, two-space gutters.
inline std::string render_table(const std::vector<std::string>& header,
                                const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    std::string out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += "  ";
            out += row[c];
            if (c + 1 < row.size()) out.append(width[c] - row[c].size(), ' ');
        }
        out += '\n';
    };
    emit(header);
    for (const auto& row : rows) emit(row);
    return out;
}

inline std::string partition_text(const Graph& g, const Partition& p) {
    std::string out;
    for (std::size_t c = 0; c < p.communities.size(); ++c) {
        if (c) out += ' ';
        out += '{';
        for (std::size_t k = 0; k < p.communities[c].size(); ++k) {
            if (k) out += ',';
            out += g.label(p.communities[c][k]);
        }
        out += '}';
    }
    return out;
}

inline nlohmann::json partition_json(const Graph& g, const Partition& p) {
    nlohmann::json comms = nlohmann::json::array();
    for (const auto& comm : p.communities) {
        nlohmann::json members = nlohmann::json::array();
        for (int v : comm) members.push_back(g.label(v));
        comms.push_back(std::move(members));
    }
    return comms;
}

} // namespace detail

// --- detection trace ---------------------------------------------------

inline std::string trace_to_table(const Graph& g, const DetectionTrace& tr) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : tr.steps) {
        rows.push_back({std::to_string(s.t),
                        s.merged ? "(" + s.merged->first + "," + s.merged->second + ")" : "-",
                        s.delta_q ? fmt6(*s.delta_q) : "-", fmt6(s.q),
                        s.applied ? "yes" : "no", detail::partition_text(g, s.partition)});
    }
    std::string out =
        detail::render_table({"t", "merge", "delta_q", "q", "applied", "communities"}, rows);
    out += "final_q=" + fmt6(tr.final_q) + '\n';
    out += "final=" + detail::partition_text(g, tr.final) + '\n';
    return out;
}

inline std::string trace_to_csv(const Graph& g, const DetectionTrace& tr) {
    std::string out = detail::join_csv({"t", "merge", "delta_q", "q", "applied", "communities"});
    for (const auto& s : tr.steps) {
        out += detail::join_csv(
            {std::to_string(s.t),
             s.merged ? s.merged->first + "+" + s.merged->second : std::string(),
             s.delta_q ? fmt6(*s.delta_q) : std::string(), fmt6(s.q),
             s.applied ? "yes" : "no", detail::partition_text(g, s.partition)});
    }
    return out;
}

inline nlohmann::json trace_to_json(const Graph& g, const DetectionTrace& tr) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : tr.steps) {
        nlohmann::json row;
        row["t"] = s.t;
        if (s.merged)
            row["merged"] = nlohmann::json::array({s.merged->first, s.merged->second});
        else
            row["merged"] = nullptr;
        row["delta_q"] = s.delta_q ? nlohmann::json(*s.delta_q) : nlohmann::json(nullptr);
        row["q"] = s.q;
        row["applied"] = s.applied;
        row["communities"] = detail::partition_json(g, s.partition);
        steps.push_back(std::move(row));
    }
    nlohmann::json out;
    out["steps"] = std::move(steps);
    out["final"]["communities"] = detail::partition_json(g, tr.final);
    out["final"]["q"] = tr.final_q;
    return out;
}

// --- vulnerability report ----------------------------------------------

namespace detail {

inline std::vector<std::string> report_row(const VulnerabilityReport::Row& r) {
    std::string members;
    for (std::size_t k = 0; k < r.members.size(); ++k) {
        if (k) members += ';';
        members += r.members[k];
    }
    return {r.name,          members,       std::to_string(r.eta_raw),
            std::to_string(r.sigma_raw),    fmt6(r.gamma_raw),
            fmt6(r.eta),     fmt6(r.sigma), fmt6(r.gamma),
            fmt6(r.zeta),    fmt6(r.xi),    std::to_string(r.rank)};
}

inline const std::vector<std::string>& report_header() {
    static const std::vector<std::string> h = {"community", "members", "eta",    "sigma",
                                               "gamma",     "eta_n",   "sigma_n", "gamma_n",
                                               "zeta",      "xi",      "rank"};
    return h;
}

} // namespace detail

inline std::string report_to_table(const VulnerabilityReport& rep) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : rep.rows) rows.push_back(detail::report_row(r));
    std::string out = "alpha=" + fmt6(rep.alpha) + " beta=" + fmt6(rep.beta) +
                      " chi=" + fmt6(rep.chi) + " phi=" + fmt6(rep.phi) + '\n';
    out += detail::render_table(detail::report_header(), rows);
    out += "delta=" + fmt6(rep.ranking.delta) + '\n';
    out += "ranking: " + rep.chain() + '\n';
    return out;
}

inline std::string report_to_csv(const VulnerabilityReport& rep) {
    std::string out = detail::join_csv(detail::report_header());
    for (const auto& r : rep.rows) out += detail::join_csv(detail::report_row(r));
    out += "# alpha=" + fmt6(rep.alpha) + " beta=" + fmt6(rep.beta) + " chi=" + fmt6(rep.chi) +
           " phi=" + fmt6(rep.phi) + '\n';
    out += "# delta=" + fmt6(rep.ranking.delta) + '\n';
    out += "# ranking: " + rep.chain() + '\n';
    return out;
}

inline nlohmann::json report_to_json(const VulnerabilityReport& rep) {
    nlohmann::json out;
    out["alpha"] = rep.alpha;
    out["beta"] = rep.beta;
    out["chi"] = rep.chi;
    out["phi"] = rep.phi;
    nlohmann::json comms = nlohmann::json::array();
    for (const auto& r : rep.rows) {
        nlohmann::json row;
        row["name"] = r.name;
        row["members"] = r.members;
        row["eta"] = r.eta_raw;
        row["sigma"] = r.sigma_raw;
        row["gamma"] = r.gamma_raw;
        row["eta_n"] = r.eta;
        row["sigma_n"] = r.sigma;
        row["gamma_n"] = r.gamma;
        row["zeta"] = json_number(r.zeta);
        row["xi"] = json_number(r.xi);
        row["rank"] = r.rank;
        comms.push_back(std::move(row));
    }
    out["communities"] = std::move(comms);
    out["delta"] = rep.ranking.delta;
    out["chain"] = rep.chain();
    nlohmann::json order = nlohmann::json::array();
    for (int c : rep.ranking.order) order.push_back(rep.rows[static_cast<std::size_t>(c)].name);
    out["order"] = std::move(order);
    nlohmann::json rel = nlohmann::json::array();
    for (Relation r : rep.ranking.relations) rel.push_back(relation_token(r));
    out["relations"] = std::move(rel);
    return out;
}

// --- sobol result --------------------------------------------------------

namespace detail {

inline std::vector<std::string> sobol_row(const SobolResult& res, std::size_t c,
                                          std::size_t k) {
    const SobolCommunity& com = res.communities[c];
    const SobolEntry& e = com.entries[k];
    return {com.name,
            kSobolParamNames[k],
            fmt6(e.first_order),
            fmt6(e.total_effect),
            fmt6(e.first_order_raw),
            fmt6(e.total_effect_raw),
            status_token(com.status),
            std::to_string(res.sample_count),
            std::to_string(res.seed),
            fmt6(res.range_lo),
            fmt6(res.range_hi)};
}

inline const std::vector<std::string>& sobol_header() {
    static const std::vector<std::string> h = {
        "community",       "parameter",        "first_order", "total_effect",
        "first_order_raw", "total_effect_raw", "status",      "samples",
        "seed",            "range_lo",         "range_hi"};
    return h;
}

} // namespace detail

inline std::string sobol_to_table(const SobolResult& res) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t c = 0; c < res.communities.size(); ++c)
        for (std::size_t k = 0; k < kSobolParams; ++k)
            rows.push_back(detail::sobol_row(res, c, k));
    return detail::render_table(detail::sobol_header(), rows);
}

inline std::string sobol_to_csv(const SobolResult& res) {
    std::string out = detail::join_csv(detail::sobol_header());
    for (std::size_t c = 0; c < res.communities.size(); ++c)
        for (std::size_t k = 0; k < kSobolParams; ++k)
            out += detail::join_csv(detail::sobol_row(res, c, k));
    return out;
}

inline nlohmann::json sobol_to_json(const SobolResult& res) {
    nlohmann::json out;
    out["sample_count"] = res.sample_count;
    out["seed"] = res.seed;
    out["range"] = nlohmann::json::array({res.range_lo, res.range_hi});
    out["distribution"] = "independent uniform per parameter";
    nlohmann::json comms = nlohmann::json::array();
    for (const auto& com : res.communities) {
        nlohmann::json row;
        row["name"] = com.name;
        row["status"] = status_token(com.status);
        row["variance"] = com.variance;
        nlohmann::json idx;
        for (std::size_t k = 0; k < kSobolParams; ++k) {
            const SobolEntry& e = com.entries[k];
            nlohmann::json one;
            one["first_order"] = e.first_order;
            one["total_effect"] = e.total_effect;
            one["first_order_raw"] = e.first_order_raw;
            one["total_effect_raw"] = e.total_effect_raw;
            idx[kSobolParamNames[k]] = std::move(one);
        }
        row["indices"] = std::move(idx);
        comms.push_back(std::move(row));
    }
    out["communities"] = std::move(comms);
    return out;
}

// --- community network ----------------------------------------------------

/// DOT rendering: complete weighted graph over c1..cK, edge attribute = the
/// abstract distance.
inline std::string cn_to_dot(const Partition& p, const CommunityNetwork& cn) {
    if (cn.size != p.count()) throw PipelineError("community network does not match partition");
    std::string out = "graph communities {\n";
    for (std::size_t c = 0; c < cn.size; ++c) {
        out += "  c" + std::to_string(c + 1) + " [label=\"c" + std::to_string(c + 1) + " (" +
               std::to_string(p.communities[c].size()) + " nodes)\"];\n";
    }
    for (std::size_t i = 0; i < cn.size; ++i)
        for (std::size_t j = i + 1; j < cn.size; ++j)
            out += "  c" + std::to_string(i + 1) + " -- c" + std::to_string(j + 1) +
                   " [label=\"" + fmt6(cn.at(i, j)) + "\", weight=\"" + fmt6(cn.at(i, j)) +
                   "\"];\n";
    out += "}\n";
    return out;
}

/// CSV rendering: the full distance matrix, zero diagonal.
inline std::string cn_to_csv(const CommunityNetwork& cn) {
    std::vector<std::string> header(1);
    for (std::size_t c = 0; c < cn.size; ++c) header.push_back("c" + std::to_string(c + 1));
    std::string out = detail::join_csv(header);
    for (std::size_t i = 0; i < cn.size; ++i) {
        std::vector<std::string> row = {"c" + std::to_string(i + 1)};
        for (std::size_t j = 0; j < cn.size; ++j) row.push_back(fmt6(cn.at(i, j)));
        out += detail::join_csv(row);
    }
    return out;
}

// --- format dispatch -------------------------------------------------------

inline std::string serialize(const Graph& g, const DetectionTrace& tr, Format f) {
    switch (f) {
        case Format::table: return trace_to_table(g, tr);
        case Format::csv: return trace_to_csv(g, tr);
        case Format::json: return trace_to_json(g, tr).dump(2) + '\n';
    }
    throw PipelineError("unreachable format");
}

inline std::string serialize(const VulnerabilityReport& rep, Format f) {
    switch (f) {
        case Format::table: return report_to_table(rep);
        case Format::csv: return report_to_csv(rep);
        case Format::json: return report_to_json(rep).dump(2) + '\n';
    }
    throw PipelineError("unreachable format");
}

inline std::string serialize(const SobolResult& res, Format f) {
    switch (f) {
        case Format::table: return sobol_to_table(res);
        case Format::csv: return sobol_to_csv(res);
        case Format::json: return sobol_to_json(res).dump(2) + '\n';
    }
    throw PipelineError("unreachable format");
}

} // namespace commvuln
