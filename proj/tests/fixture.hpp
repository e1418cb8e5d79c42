#pragma once

#include <string>

#include <commvuln/commvuln.hpp>

// Shared 9-node fixture: two tightly-knit small communities bridged to a
// 4-clique. Detection lands on {1,2} {3,4,5} {6,7,8,9}.
inline const char* kExample9 =
    "1 2\n3 4\n3 5\n4 5\n6 7\n6 8\n6 9\n7 8\n7 9\n8 9\n1 6\n2 7\n3 6\n5 9\n";

inline commvuln::Graph example9() { return commvuln::parse_edge_list(std::string(kExample9)); }

inline commvuln::Partition example9_partition(const commvuln::Graph& g) {
    return commvuln::Partition::of_labels(
        g, {{"1", "2"}, {"3", "4", "5"}, {"6", "7", "8", "9"}});
}
