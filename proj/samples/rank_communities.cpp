// Score the communities of a small collaboration network and print the
// full vulnerability report.

#include <iostream>
#include <string>

#include <commvuln/commvuln.hpp>

int main() {
    const std::string edges =
        "1 2\n3 4\n3 5\n4 5\n6 7\n6 8\n6 9\n7 8\n7 9\n8 9\n1 6\n2 7\n3 6\n5 9\n";
    const commvuln::Graph g = commvuln::parse_edge_list(edges);
    const commvuln::VulnerabilityReport rep =
        commvuln::evaluate_vulnerability(g, 1.0, 1.0, 1.0, 3.0);
    std::cout << commvuln::report_to_table(rep);
    return 0;
}
