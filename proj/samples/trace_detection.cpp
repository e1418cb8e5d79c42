// Run greedy modularity detection on an edge-list file and print the merge
// trace, one row per agglomeration step.

#include <fstream>
#include <iostream>

#include <commvuln/commvuln.hpp>

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: " << argv[0] << " <edge-list file>\n";
        return 1;
    }
    std::ifstream in(argv[1]);
    if (!in) {
        std::cerr << "cannot open '" << argv[1] << "'\n";
        return 1;
    }
    try {
        const commvuln::Graph g = commvuln::parse_edge_list(in);
        const commvuln::DetectionTrace tr = commvuln::detect_communities(g);
        std::cout << commvuln::trace_to_table(g, tr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
