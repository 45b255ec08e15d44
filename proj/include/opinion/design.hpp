#pragma once

#include "opinion/balance.hpp"
#include "opinion/connectivity.hpp"
#include "opinion/spectrum.hpp"
#include "opinion/transform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace opinion {

/// Which construction produced a design.
enum class DesignPath { Unsigned, Balanced, Block };

std::string to_string(DesignPath p);

/// The modified Laplacian design: coordinates z = P x, Az = P A P^-1,
/// theta_z = diag(row sums of Az) (absolute row sums on the block path),
/// theta_x = P^-1 theta_z P, Lx = theta_x - A, Lz = theta_z - Az.
///
/// For the block path all matrices live in the block ordering carried by
/// `ordering` (empty = identity); callers permute x-vectors accordingly.
struct DesignResult {
    TransformMatrix P;
    Eigen::MatrixXd Az;
    Eigen::MatrixXd theta_z;
    Eigen::MatrixXd theta_x;
    Eigen::MatrixXd Lx;
    Eigen::MatrixXd Lz;
    DesignPath path = DesignPath::Unsigned;
    std::vector<int> ordering; // block path only

    int n() const { return static_cast<int>(Lx.rows()); }
};

/// Balanced/unsigned path. Precondition: check_membership(a, p) holds;
/// a failing membership check is reported as InputError.
DesignResult design_laplacian(const Eigen::MatrixXd& a, const TransformMatrix& p);

/// Block path for the one-closed-SCC class: P = blkdiag(P1, P2), P1 must
/// make the leader block nonnegative, P2 only needs to be invertible.
/// theta_z uses absolute row sums since follower rows of Az may stay signed.
DesignResult block_design(const BlockDecomposition& dec, const TransformMatrix& p1,
                          const TransformMatrix& p2);

enum class Existence {
    Exists,            // a membership witness is attached
    NotExists,         // no invertible P at all (anti-balanced class)
    NotExistsDiagonal, // no diagonal P (k-partite class); non-diagonal unknown
    Unknown,
};

std::string to_string(Existence e);

struct ExistenceVerdict {
    Existence verdict = Existence::Unknown;
    std::string reason;
    std::optional<TransformMatrix> witness;
    SpectrumReport evidence; // spectrum of A
    /// Perron check: +rho(A) is an eigenvalue and simple.
    bool leading_positive_simple = false;
    /// -rho(A) is an eigenvalue (within gap tolerance); the anti-balanced
    /// signature together with leading_in_spectrum = false.
    bool leading_real_negative = false;
};

/// Existence decision for the transform set, by graph class, with the
/// spectral evidence used by the argument.
ExistenceVerdict existence_report(const SignedDigraph& g);

} // namespace opinion
