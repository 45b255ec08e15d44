#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>

namespace opinion {

/// A weighted signed digraph on n agents, stored as its adjacency matrix.
///
/// Convention: A(i,j) != 0 means agent j's opinion feeds agent i's update,
/// so row i lists the influencers of agent i. Vertices are 0-based in code
/// and 1-based in files and user-facing output.
struct SignedDigraph {
    Eigen::MatrixXd A;

    int n() const { return static_cast<int>(A.rows()); }

    /// Validates the invariants (square, n >= 1, zero diagonal, finite
    /// entries) and wraps the matrix. Throws InputError on violation.
    static SignedDigraph from_matrix(Eigen::MatrixXd a);
};

/// Parses the JSON graph format:
///   {"n": <int>, "edges": [{"i": <int>, "j": <int>, "w": <float>}, ...]}
/// where entry (i,j,w) sets A(i,j) = w (j influences i), ids 1-based.
/// `origin` names the source in error messages (file path or "<string>").
SignedDigraph load_graph(const std::string& text, const std::string& origin = "<string>");
SignedDigraph load_graph_file(const std::filesystem::path& path);

/// Serializes a graph back to the JSON format; load_graph(write_graph(g))
/// reproduces A bit-exactly.
std::string write_graph(const SignedDigraph& g);

/// Entrywise absolute value |a_ij|.
SignedDigraph unsigned_counterpart(const SignedDigraph& g);

/// Entrywise sign flip -a_ij. Used by the anti-balance test.
SignedDigraph negated(const SignedDigraph& g);

} // namespace opinion
