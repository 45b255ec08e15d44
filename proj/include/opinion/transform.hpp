#pragma once

#include "opinion/balance.hpp"

#include <Eigen/Dense>
#include <filesystem>
#include <string>

namespace opinion {

enum class TransformKind { Diagonal, Full, BlockDiagonal };

/// Candidate coordinate change z = P x.
struct TransformMatrix {
    Eigen::MatrixXd P;
    TransformKind kind = TransformKind::Full;
    int r = 0;          // leader block size, BlockDiagonal only
    double tol = 1e-12; // nonnegativity slack when validating P A P^-1 >= 0

    int n() const { return static_cast<int>(P.rows()); }

    static TransformMatrix diagonal(const Eigen::VectorXd& d);
    static TransformMatrix full(Eigen::MatrixXd p);
    static TransformMatrix block_diagonal(const Eigen::MatrixXd& p1, const Eigen::MatrixXd& p2);

    /// Kind-aware inverse: diagonal and block-diagonal transforms are
    /// inverted blockwise so structural zeros stay exactly zero.
    /// Throws NumericError if singular.
    Eigen::MatrixXd inverse() const;

    /// P A P^-1, using the kind-aware inverse.
    Eigen::MatrixXd similarity(const Eigen::MatrixXd& a) const;
};

/// True iff P is invertible and every entry of P A P^-1 is >= -P.tol.
/// A singular P is an error (NumericError), not a "no".
bool check_membership(const Eigen::MatrixXd& a, const TransformMatrix& p);

/// Diagonal gauge from a balance certificate: +m_i on v1, -m_i on v2
/// (all positive for Unsigned). Canonicalized so the entry for vertex 0
/// is positive. cert must classify as Unsigned or Balanced.
TransformMatrix gauge_design(const BalanceCertificate& cert,
                             const Eigen::VectorXd& magnitudes, int n);

/// Inverse problem for connected unsigned graphs: given x0 and a desired
/// final state, returns the diagonal P with p_i = 1/xf_i. Requires every
/// xf_i nonzero and |sum_i x0_i/xf_i - n| <= 1e-9. The returned transform
/// predicts xf exactly only when the induced P A P^-1 is weight-balanced;
/// verify through the steady-state predictor.
TransformMatrix reverse_design(const Eigen::VectorXd& x0, const Eigen::VectorXd& xf_desired);

struct RatioDesign {
    TransformMatrix P;
    /// Direction of the final state: x_f is proportional to this vector
    /// (equal to the requested ratios; the scalar factor is w_z^T P x0).
    Eigen::VectorXd direction;
};

/// Scaled-clustering design: P = diag(1/ratios). The ratio signs must match
/// the bipartition gauge up to a global flip (constant sign on v1, opposite
/// on v2), otherwise P would fail membership.
RatioDesign ratio_design(const SignedDigraph& g, const BalanceCertificate& cert,
                         const Eigen::VectorXd& ratios);

/// P-matrix JSON:
///   {"kind": "diagonal", "values": [...]}
///   {"kind": "full",     "rows": [[...], ...]}
///   {"kind": "block",    "rows": [[...], ...], "r": <int>}
TransformMatrix load_transform(const std::string& text, const std::string& origin = "<string>");
TransformMatrix load_transform_file(const std::filesystem::path& path);
std::string write_transform(const TransformMatrix& p);

} // namespace opinion
