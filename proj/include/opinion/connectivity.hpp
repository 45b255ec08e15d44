#pragma once

#include "opinion/signed_graph.hpp"

#include <vector>

namespace opinion {

/// Strong-connectivity and periodicity report for the unsigned counterpart.
struct ConnectivityReport {
    bool irreducible = false;
    /// gcd of directed cycle lengths; 0 when the graph has no cycle.
    int period = 0;
    bool aperiodic = false; // period == 1
    /// Strongly connected components, condensation order: components that
    /// receive no outside influence come first.
    std::vector<std::vector<int>> sccs;
};

ConnectivityReport connectivity(const SignedDigraph& g);

/// Permutation of a graph with exactly one closed strongly connected
/// component into leader/follower block form
///
///     A_perm = [ A11  0  ]     A11: r x r leader block (the closed SCC)
///              [ A21 A22 ]     rows r..n-1: followers
///
/// ordering[k] = original vertex at block position k.
struct BlockDecomposition {
    std::vector<int> ordering;
    int r = 0;
    Eigen::MatrixXd A11;
    Eigen::MatrixXd A21;
    Eigen::MatrixXd A22;

    int n() const { return static_cast<int>(ordering.size()); }

    /// The full permuted matrix [A11 0; A21 A22].
    Eigen::MatrixXd permuted() const;

    /// Reassembles the original adjacency matrix under the inverse
    /// permutation (exact, entry by entry).
    Eigen::MatrixXd reassemble() const;
};

/// Fails with InputError if the condensation has more than one closed SCC
/// (ambiguous leader) or if the leader subgraph is neither unsigned nor
/// structurally balanced.
BlockDecomposition block_decompose(const SignedDigraph& g);

} // namespace opinion
