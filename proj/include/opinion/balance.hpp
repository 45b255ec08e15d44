#pragma once

#include "opinion/signed_graph.hpp"

#include <string>
#include <vector>

namespace opinion {

enum class GraphClass {
    Unsigned,     // no negative edges
    Balanced,     // consistent 2-coloring of the sign structure
    AntiBalanced, // sign-negated graph is balanced
    Clusterable,  // k >= 3 positive-edge components, negatives only across
    Unbalanced,
};

std::string to_string(GraphClass c);

/// Structural certificate produced by classify().
///
/// v1/v2 hold the bipartition for Balanced graphs (positive edges inside a
/// set, negative across). For Unsigned graphs v1 is all vertices and v2 is
/// empty (trivially balanced). For AntiBalanced graphs v1/v2 hold the
/// bipartition of the sign-negated graph. parts holds the k-partition for
/// Clusterable. witness_cycle is a vertex sequence (closed walk in the
/// underlying undirected sign structure) whose sign constraints are
/// inconsistent, present only for Unbalanced.
struct BalanceCertificate {
    GraphClass cls = GraphClass::Unsigned;
    std::vector<int> v1;
    std::vector<int> v2;
    std::vector<std::vector<int>> parts;
    int k = 0;
    std::vector<int> witness_cycle;
};

/// Classifies the sign structure of g. Precedence when several definitions
/// apply: Unsigned, Balanced, AntiBalanced, Clusterable(k>=3), Unbalanced.
/// Sign tests compare exactly against 0 (weights are structural data).
/// v1 is canonicalized to contain the lowest-indexed vertex of each
/// undirected component.
BalanceCertificate classify(const SignedDigraph& g);

} // namespace opinion
