// commvuln: community vulnerability evaluation for undirected networks.
//
// Subcommands:
//   detect       greedy modularity community detection, with merge trace
//   evaluate     full vulnerability report (factors, zeta/xi, fuzzy ranking)
//   sensitivity  Sobol' indices of zeta w.r.t. the weighting parameters
//   export-cn    community network as DOT (or CSV matrix)

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <commvuln/commvuln.hpp>

namespace {

struct RunConfig {
    std::string input;
    double phi = 3.0;
    double alpha = 1.0;
    double beta = 1.0;
    double chi = 1.0;
    std::size_t samples = 4096;
    double range_lo = 0.0;
    double range_hi = 2.0;
    std::uint64_t seed = 42;
    std::string format = "table";
    std::string cn_format = "dot";
    std::string output; // empty: stdout

    void validate() const {
        if (!(phi > 0.0)) throw commvuln::InputError("--phi must be positive");
        if (samples < 64) throw commvuln::InputError("--samples must be at least 64");
        if (!(range_lo < range_hi))
            throw commvuln::InputError("--range-lo must be below --range-hi");
    }
};

commvuln::Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw commvuln::InputError("cannot open input file '" + path + "'");
    commvuln::Graph g = commvuln::parse_edge_list(in);
    if (g.edge_count() == 0)
        throw commvuln::InputError("input file '" + path + "' contains no edges");
    return g;
}

void emit(const std::string& text, const std::string& output) {
    if (output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) throw commvuln::InputError("cannot open output file '" + output + "'");
    out << text;
}

int run_detect(const RunConfig& cfg) {
    const commvuln::Graph g = load_graph(cfg.input);
    const commvuln::DetectionTrace tr = commvuln::detect_communities(g);
    emit(commvuln::serialize(g, tr, commvuln::parse_format(cfg.format)), cfg.output);
    return 0;
}

int run_evaluate(const RunConfig& cfg) {
    const commvuln::Graph g = load_graph(cfg.input);
    const commvuln::VulnerabilityReport rep =
        commvuln::evaluate_vulnerability(g, cfg.alpha, cfg.beta, cfg.chi, cfg.phi);
    emit(commvuln::serialize(rep, commvuln::parse_format(cfg.format)), cfg.output);
    return 0;
}

int run_sensitivity(const RunConfig& cfg) {
    const commvuln::Graph g = load_graph(cfg.input);
    const commvuln::DetectionTrace tr = commvuln::detect_communities(g);
    const commvuln::SobolResult res = commvuln::sobol_indices(
        g, tr.final, cfg.phi, cfg.samples, cfg.seed, cfg.range_lo, cfg.range_hi);
    emit(commvuln::serialize(res, commvuln::parse_format(cfg.format)), cfg.output);
    return 0;
}

int run_export_cn(const RunConfig& cfg) {
    const commvuln::Graph g = load_graph(cfg.input);
    const commvuln::DetectionTrace tr = commvuln::detect_communities(g);
    const commvuln::CommunityNetwork cn = commvuln::community_network(g, tr.final, cfg.phi);
    std::string text;
    if (cfg.cn_format == "dot") {
        text = commvuln::cn_to_dot(tr.final, cn);
    } else if (cfg.cn_format == "csv") {
        text = commvuln::cn_to_csv(cn);
    } else {
        throw commvuln::InputError("export-cn supports --format dot or csv");
    }
    emit(text, cfg.output);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"community vulnerability evaluation on undirected networks"};
    app.require_subcommand(1);

    RunConfig cfg;

    auto add_input = [&](CLI::App* cmd) {
        cmd->add_option("input", cfg.input, "edge-list file")->required();
        cmd->add_option("--output", cfg.output, "output file (default: stdout)");
    };
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", cfg.format, "output format: table, csv, json")
            ->capture_default_str();
    };
    auto add_phi = [&](CLI::App* cmd) {
        cmd->add_option("--phi", cfg.phi, "distance steepness")->capture_default_str();
    };

    CLI::App* detect = app.add_subcommand("detect", "detect communities, print merge trace");
    add_input(detect);
    add_format(detect);

    CLI::App* evaluate = app.add_subcommand("evaluate", "full vulnerability report");
    add_input(evaluate);
    add_format(evaluate);
    add_phi(evaluate);
    evaluate->add_option("--alpha", cfg.alpha, "internal-edge weight")->capture_default_str();
    evaluate->add_option("--beta", cfg.beta, "spanning-edge weight")->capture_default_str();
    evaluate->add_option("--chi", cfg.chi, "gravity weight")->capture_default_str();

    CLI::App* sensitivity =
        app.add_subcommand("sensitivity", "Sobol' indices of the weighting parameters");
    add_input(sensitivity);
    add_format(sensitivity);
    add_phi(sensitivity);
    sensitivity->add_option("--samples", cfg.samples, "rows per base sample matrix")
        ->capture_default_str();
    sensitivity->add_option("--range-lo", cfg.range_lo, "weight range lower bound")
        ->capture_default_str();
    sensitivity->add_option("--range-hi", cfg.range_hi, "weight range upper bound")
        ->capture_default_str();
    sensitivity->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();

    CLI::App* export_cn =
        app.add_subcommand("export-cn", "export the community network (DOT or CSV)");
    add_input(export_cn);
    add_phi(export_cn);
    export_cn->add_option("--format", cfg.cn_format, "output format: dot, csv")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cfg.validate();
        if (detect->parsed()) return run_detect(cfg);
        if (evaluate->parsed()) return run_evaluate(cfg);
        if (sensitivity->parsed()) return run_sensitivity(cfg);
        if (export_cn->parsed()) return run_export_cn(cfg);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const commvuln::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const commvuln::PipelineError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
