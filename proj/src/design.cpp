#include "opinion/design.hpp"

#include "opinion/errors.hpp"

#include <complex>
#include <utility>

namespace opinion {

std::string to_string(DesignPath p) {
    switch (p) {
    case DesignPath::Unsigned: return "unsigned";
    case DesignPath::Balanced: return "balanced";
    case DesignPath::Block: return "block";
    }
    return "?";
}

std::string to_string(Existence e) {
    switch (e) {
    case Existence::Exists: return "Exists";
    case Existence::NotExists: return "NotExists";
    case Existence::NotExistsDiagonal: return "NotExistsForDiagonal";
    case Existence::Unknown: return "Unknown";
    }
    return "?";
}

DesignResult design_laplacian(const Eigen::MatrixXd& a, const TransformMatrix& p) {
    if (a.rows() != a.cols())
        throw InputError("design: adjacency matrix must be square");

    DesignResult res;
    res.P = p;
    res.Az = p.similarity(a); // throws NumericError if P is singular
    if ((res.Az.array() < -p.tol).any())
        throw InputError("design: P is not a member (P A P^-1 has entries below -tol)");

    const Eigen::VectorXd row_sums = res.Az.rowwise().sum();
    res.theta_z = row_sums.asDiagonal();
    const Eigen::MatrixXd p_inv = p.inverse();
    res.theta_x = p_inv * res.theta_z * p.P;
    res.Lx = res.theta_x - a;
    res.Lz = res.theta_z - res.Az;
    res.path = (a.array() >= 0.0).all() ? DesignPath::Unsigned : DesignPath::Balanced;
    return res;
}

DesignResult block_design(const BlockDecomposition& dec, const TransformMatrix& p1,
                          const TransformMatrix& p2) {
    const int n = dec.n();
    const int r = dec.r;
    if (p1.n() != r)
        throw InputError("block design: P1 must be " + std::to_string(r) + "x" +
                         std::to_string(r));
    if (p2.n() != n - r)
        throw InputError("block design: P2 must be " + std::to_string(n - r) + "x" +
                         std::to_string(n - r));
    if (!check_membership(dec.A11, p1)) // also rejects singular P1
        throw InputError("block design: P1 does not make the leader block nonnegative");

    DesignResult res;
    res.P = TransformMatrix::block_diagonal(p1.P, p2.P);
    res.P.tol = p1.tol;
    res.ordering = dec.ordering;

    const Eigen::MatrixXd a = dec.permuted();
    const Eigen::MatrixXd p1_inv = p1.inverse();
    const Eigen::MatrixXd p2_inv = p2.inverse(); // throws if P2 singular

    // blockwise similarity keeps the top-right zero block exact
    res.Az = Eigen::MatrixXd::Zero(n, n);
    res.Az.topLeftCorner(r, r) = p1.P * dec.A11 * p1_inv;
    if (r < n) {
        res.Az.bottomLeftCorner(n - r, r) = p2.P * dec.A21 * p1_inv;
        res.Az.bottomRightCorner(n - r, n - r) = p2.P * dec.A22 * p2_inv;
    }

    // follower rows of Az may stay signed; the out-degree uses |Az|
    const Eigen::VectorXd row_sums = res.Az.cwiseAbs().rowwise().sum();
    res.theta_z = row_sums.asDiagonal();

    Eigen::MatrixXd p_inv = Eigen::MatrixXd::Zero(n, n);
    p_inv.topLeftCorner(r, r) = p1_inv;
    if (r < n)
        p_inv.bottomRightCorner(n - r, n - r) = p2_inv;

    res.theta_x = p_inv * res.theta_z * res.P.P;
    res.Lx = res.theta_x - a;
    res.Lz = res.theta_z - res.Az;
    res.path = DesignPath::Block;
    return res;
}

ExistenceVerdict existence_report(const SignedDigraph& g) {
    const BalanceCertificate cert = classify(g);
    ExistenceVerdict v;
    v.evidence = spectrum(g.A);

    const double rho = v.evidence.spectral_radius;
    const double gap = SpectrumReport::kGapTol * std::max(1.0, rho);
    v.leading_positive_simple = v.evidence.leading_in_spectrum && v.evidence.leading_simple;
    for (int i = 0; i < v.evidence.eigenvalues.size(); ++i)
        if (std::abs(v.evidence.eigenvalues(i) - std::complex<double>(-rho, 0.0)) <= gap)
            v.leading_real_negative = true;

    switch (cert.cls) {
    case GraphClass::Unsigned:
        v.verdict = Existence::Exists;
        v.reason = "unsigned graph: any positive diagonal transform works";
        v.witness = gauge_design(cert, Eigen::VectorXd::Ones(g.n()), g.n());
        break;
    case GraphClass::Balanced:
        v.verdict = Existence::Exists;
        v.reason = "structurally balanced: diagonal gauge over the bipartition";
        v.witness = gauge_design(cert, Eigen::VectorXd::Ones(g.n()), g.n());
        break;
    case GraphClass::AntiBalanced:
        v.verdict = Existence::NotExists;
        v.reason = "anti-balanced: the dominant eigenvalue is real negative, so no "
                   "similarity transform can make A nonnegative";
        break;
    case GraphClass::Clusterable:
        v.verdict = Existence::NotExistsDiagonal;
        v.reason = "k-partite sign pattern (k=" + std::to_string(cert.k) +
                   "): no diagonal transform exists; non-diagonal unknown";
        break;
    case GraphClass::Unbalanced:
        v.verdict = Existence::Unknown;
        v.reason = v.leading_positive_simple
                       ? "unbalanced, but the spectral radius is a simple positive "
                         "eigenvalue; a non-diagonal transform may exist"
                       : "unbalanced and the spectral radius is not a simple positive "
                         "eigenvalue";
        break;
    }
    return v;
}

} // namespace opinion
