#include "opinion/dynamics.hpp"

#include "opinion/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace opinion {

std::string to_string(Stability s) {
    switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Marginal: return "marginal";
    case Stability::Unstable: return "unstable";
    }
    return "?";
}

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kStabilityTol = 1e-10;

// Single kernel vector of m under the rank-revealing threshold; dimension
// of the kernel reported through `nullity`.
Eigen::VectorXd kernel_vector(const Eigen::MatrixXd& m, int& nullity) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(kPivotTol);
    nullity = static_cast<int>(lu.dimensionOfKernel());
    if (nullity != 1)
        return Eigen::VectorXd();
    return lu.kernel().col(0);
}

} // namespace

NullPair null_pair(const Eigen::MatrixXd& l) {
    if (l.rows() != l.cols())
        throw InputError("null_pair: matrix must be square");

    int nv = 0, nw = 0;
    Eigen::VectorXd v = kernel_vector(l, nv);
    if (nv == 0)
        throw NumericError("null_pair: zero is not in the spectrum (matrix has full rank "
                           "at pivot tolerance 1e-10)");
    if (nv != 1)
        throw NumericError("null_pair: zero eigenvalue is not simple (kernel dimension " +
                           std::to_string(nv) + ")");
    Eigen::VectorXd w = kernel_vector(l.transpose(), nw);
    if (nw != 1)
        throw NumericError("null_pair: left kernel dimension " + std::to_string(nw) +
                           ", expected 1");

    // scale v so its largest-magnitude entry is +1 (the all-ones vector
    // stays the all-ones vector), then normalize w against it
    int arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    v /= v(arg);
    const double dot = w.dot(v);
    if (std::abs(dot) < 1e-14)
        throw NumericError("null_pair: left and right null vectors are orthogonal "
                           "(defective zero eigenvalue)");
    w /= dot;
    return NullPair{std::move(v), std::move(w)};
}

bool weight_balanced(const Eigen::MatrixXd& m, double tol) {
    const Eigen::VectorXd rows = m.rowwise().sum();
    const Eigen::VectorXd cols = m.colwise().sum();
    return ((rows - cols).cwiseAbs().array() <= tol).all();
}

Stability stability_verdict(const SpectrumReport& lz_spectrum) {
    const auto& ev = lz_spectrum.eigenvalues;
    // ignore the single eigenvalue closest to zero (the consensus mode)
    int zero_idx = 0;
    double zero_mod = std::abs(ev(0));
    for (int i = 1; i < ev.size(); ++i)
        if (std::abs(ev(i)) < zero_mod) {
            zero_mod = std::abs(ev(i));
            zero_idx = i;
        }
    Stability s = Stability::Stable;
    for (int i = 0; i < ev.size(); ++i) {
        if (i == zero_idx)
            continue;
        if (ev(i).real() < -kStabilityTol)
            return Stability::Unstable;
        if (ev(i).real() <= kStabilityTol)
            s = Stability::Marginal;
    }
    return s;
}

namespace {

void require_stable(const DesignResult& design) {
    const Stability s = stability_verdict(spectrum(design.Lz));
    if (s != Stability::Stable)
        throw NumericError("steady-state prediction rejected: spectrum of Lz is " +
                           to_string(s) +
                           " (nonzero eigenvalues must have real part > 1e-10)");
}

Eigen::VectorXd to_block_order(const Eigen::VectorXd& x, const std::vector<int>& ordering) {
    if (ordering.empty())
        return x;
    Eigen::VectorXd y(x.size());
    for (int i = 0; i < x.size(); ++i)
        y(i) = x(ordering[i]);
    return y;
}

Eigen::VectorXd from_block_order(const Eigen::VectorXd& y, const std::vector<int>& ordering) {
    if (ordering.empty())
        return y;
    Eigen::VectorXd x(y.size());
    for (int i = 0; i < y.size(); ++i)
        x(ordering[i]) = y(i);
    return x;
}

} // namespace

SteadyStatePrediction predict_steady_state(const DesignResult& design,
                                           const Eigen::VectorXd& x0) {
    if (design.path == DesignPath::Block)
        return predict_block(design, x0);
    if (x0.size() != design.n())
        throw InputError("predict: x0 length " + std::to_string(x0.size()) +
                         ", expected " + std::to_string(design.n()));
    require_stable(design);

    NullPair np = null_pair(design.Lz);
    SteadyStatePrediction pred;
    pred.method = PredictMethod::General;
    pred.n_zero = 1;
    const double scale = np.w.dot(design.P.P * x0);
    pred.xf = design.P.inverse() * (np.v * scale);
    pred.v = std::move(np.v);
    pred.w = std::move(np.w);
    return pred;
}

SteadyStatePrediction predict_uniform(const DesignResult& design, const Eigen::VectorXd& x0) {
    if (design.path == DesignPath::Block)
        throw InputError("predict_uniform: not applicable to block designs");
    if (x0.size() != design.n())
        throw InputError("predict: x0 length mismatch");
    if (!weight_balanced(design.Az)) {
        std::ostringstream msg;
        msg << "predict_uniform: Az is not weight-balanced (row sums differ from column "
               "sums by "
            << (design.Az.rowwise().sum().transpose() - design.Az.colwise().sum())
                   .cwiseAbs()
                   .maxCoeff()
            << "); use predict_steady_state";
        throw InputError(msg.str());
    }
    require_stable(design);

    const int n = design.n();
    SteadyStatePrediction pred;
    pred.method = PredictMethod::UniformCorollary;
    pred.n_zero = 1;
    pred.v = Eigen::VectorXd::Ones(n);
    pred.w = Eigen::VectorXd::Constant(n, 1.0 / n);
    const double scale = pred.w.dot(design.P.P * x0);
    pred.xf = design.P.inverse() * (pred.v * scale);
    return pred;
}

SteadyStatePrediction predict_block(const DesignResult& design, const Eigen::VectorXd& x0) {
    if (design.path != DesignPath::Block)
        throw InputError("predict_block: design did not come from the block path");
    const int n = design.n();
    const int r = design.P.r;
    if (x0.size() != n)
        throw InputError("predict: x0 length mismatch");

    const Eigen::VectorXd x0p = to_block_order(x0, design.ordering);
    const Eigen::MatrixXd lz11 = design.Lz.topLeftCorner(r, r);
    const Eigen::MatrixXd lz21 = design.Lz.bottomLeftCorner(n - r, r);
    const Eigen::MatrixXd lz22 = design.Lz.bottomRightCorner(n - r, n - r);

    NullPair leader = null_pair(lz11); // throws when the leader zero is not simple
    const Eigen::MatrixXd p1 = design.P.P.topLeftCorner(r, r);
    const double scale = leader.w.dot(p1 * x0p.head(r));

    Eigen::VectorXd zf(n);
    zf.head(r) = leader.v * scale;
    if (r < n) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(lz22);
        lu.setThreshold(kPivotTol);
        if (!lu.isInvertible())
            throw NumericError("predict_block: Lz22 is singular; follower block has no "
                               "unique steady state");
        zf.tail(n - r) = -lu.solve(lz21 * leader.v) * scale;
    }

    // follower stability: eigenvalues of Lz22 in the open right half plane
    if (r < n) {
        const SpectrumReport rep = spectrum(lz22);
        for (int i = 0; i < rep.eigenvalues.size(); ++i)
            if (rep.eigenvalues(i).real() <= kStabilityTol)
                throw NumericError("predict_block: Lz22 has an eigenvalue with "
                                   "non-positive real part; followers do not settle");
    }

    SteadyStatePrediction pred;
    pred.method = PredictMethod::Block;
    pred.n_zero = 1;
    pred.xf = from_block_order(design.P.inverse() * zf, design.ordering);
    // null pair of the full Lz: v = [v1; -Lz22^-1 Lz21 v1], w = [w1; 0]
    pred.v = Eigen::VectorXd::Zero(n);
    pred.v.head(r) = leader.v;
    if (r < n)
        pred.v.tail(n - r) = zf.tail(n - r) / scale;
    pred.w = Eigen::VectorXd::Zero(n);
    pred.w.head(r) = leader.w;
    return pred;
}

Trajectory simulate(const Eigen::MatrixXd& lx, const Eigen::VectorXd& x0,
                    const SimOptions& opt) {
    if (lx.rows() != lx.cols())
        throw InputError("simulate: Lx must be square");
    if (x0.size() != lx.rows())
        throw InputError("simulate: x0 length mismatch");
    if (!(opt.dt > 0.0))
        throw InputError("simulate: dt must be positive");
    if (opt.t_end < opt.dt)
        throw InputError("simulate: t_end must be at least dt");
    if (!x0.allFinite())
        throw InputError("simulate: x0 has non-finite entries");

    const long long steps = static_cast<long long>(std::llround(opt.t_end / opt.dt));
    const long long total = steps + 1;
    long long stride = 1;
    if (opt.max_samples > 0 && total > opt.max_samples)
        stride = (total + opt.max_samples - 1) / opt.max_samples;

    Trajectory traj;
    traj.dt = opt.dt;
    const double max_diag = lx.diagonal().maxCoeff();
    if (max_diag > 0.0 && opt.dt > 0.5 / max_diag) {
        std::ostringstream msg;
        msg << "dt = " << opt.dt << " exceeds the stability guard 0.5/max(theta_x) = "
            << 0.5 / max_diag;
        traj.warning = msg.str();
    }

    Eigen::VectorXd x = x0;
    Eigen::VectorXd k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size());
    traj.samples.push_back({0.0, x});
    if (opt.settle_tol > 0.0 && (lx * x).cwiseAbs().maxCoeff() < opt.settle_tol) {
        traj.converged = true;
        traj.t_converged = 0.0;
    }

    const double h = opt.dt;
    for (long long k = 1; k <= steps; ++k) {
        k1.noalias() = -(lx * x);
        k2.noalias() = -(lx * (x + 0.5 * h * k1));
        k3.noalias() = -(lx * (x + 0.5 * h * k2));
        k4.noalias() = -(lx * (x + h * k3));
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double t = static_cast<double>(k) * h;

        if (!x.allFinite()) {
            std::ostringstream msg;
            msg << "simulate: non-finite state at t = " << t << " (divergence)";
            throw NumericError(msg.str());
        }
        if (!traj.converged && opt.settle_tol > 0.0 &&
            (lx * x).cwiseAbs().maxCoeff() < opt.settle_tol) {
            traj.converged = true;
            traj.t_converged = t;
        }
        if (k % stride == 0 && k != steps)
            traj.samples.push_back({t, x});
    }
    traj.samples.push_back({static_cast<double>(steps) * h, x}); // last always kept
    return traj;
}

VerificationReport verify(const DesignResult& design, const Eigen::VectorXd& x0,
                          const SimOptions& opt) {
    VerificationReport rep;
    rep.lz_spectrum = spectrum(design.Lz);
    rep.stability = stability_verdict(rep.lz_spectrum);
    if (rep.stability != Stability::Stable) {
        rep.pass = false;
        return rep; // no prediction, no integration of a non-settling system
    }

    rep.prediction = design.path == DesignPath::Block ? predict_block(design, x0)
                                                      : predict_steady_state(design, x0);

    const Eigen::VectorXd x0p = to_block_order(x0, design.ordering);
    Trajectory traj = simulate(design.Lx, x0p, opt);
    if (!design.ordering.empty())
        for (auto& s : traj.samples)
            s.x = from_block_order(s.x, design.ordering);

    rep.xf_simulated = traj.samples.back().x;
    rep.max_error = (rep.prediction.xf - rep.xf_simulated).cwiseAbs().maxCoeff();
    rep.converged = traj.converged;
    rep.t_converged = traj.t_converged;
    rep.tolerance = traj.converged ? 1e-6 : 1e-3;
    rep.pass = rep.max_error < rep.tolerance;
    rep.trajectory = std::move(traj);
    return rep;
}

} // namespace opinion
