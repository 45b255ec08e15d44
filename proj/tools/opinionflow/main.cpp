// opinionflow: classify signed graphs, design modified-Laplacian opinion
// dynamics, predict steady states and verify them by simulation.

#include "opinion/balance.hpp"
#include "opinion/connectivity.hpp"
#include "opinion/design.hpp"
#include "opinion/dynamics.hpp"
#include "opinion/errors.hpp"
#include "opinion/io.hpp"
#include "opinion/signed_graph.hpp"
#include "opinion/svg.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace opinion;

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInputError = 2;

std::string vertex_set(const std::vector<int>& vs) {
    std::string s = "{";
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(vs[i] + 1);
    }
    return s + "}";
}

std::string format_vec(const Eigen::VectorXd& v) {
    std::string s = "(";
    char buf[32];
    for (int i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6g", v(i));
        if (i)
            s += ", ";
        s += buf;
    }
    return s + ")";
}

std::string format_eig(const SpectrumReport& rep) {
    std::string s;
    char buf[64];
    for (int i = 0; i < rep.eigenvalues.size(); ++i) {
        const auto& e = rep.eigenvalues(i);
        if (std::abs(e.imag()) < 1e-12)
            std::snprintf(buf, sizeof buf, "%.6g", e.real());
        else
            std::snprintf(buf, sizeof buf, "%.6g%+.6gi", e.real(), e.imag());
        if (i)
            s += ", ";
        s += buf;
    }
    return s;
}

void print_matrix(const Eigen::MatrixXd& m, const std::string& name) {
    std::cout << name << " =\n";
    char buf[32];
    for (int i = 0; i < m.rows(); ++i) {
        std::cout << "  [";
        for (int j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%10.6g", m(i, j));
            std::cout << (j ? ", " : " ") << buf;
        }
        std::cout << " ]\n";
    }
}

std::string existence_line(const ExistenceVerdict& v) {
    switch (v.verdict) {
    case Existence::Exists: return "P exists (" + v.reason + ")";
    case Existence::NotExists: return "P does not exist (" + v.reason + ")";
    case Existence::NotExistsDiagonal: return "no diagonal P (" + v.reason + ")";
    case Existence::Unknown: return "P existence unknown (" + v.reason + ")";
    }
    return "?";
}

int cmd_classify(const std::string& graph_path) {
    const SignedDigraph g = load_graph_file(graph_path);
    const BalanceCertificate cert = classify(g);
    const ConnectivityReport conn = connectivity(g);
    const ExistenceVerdict ex = existence_report(g);

    std::cout << to_string(cert.cls);
    if (cert.cls == GraphClass::Balanced || cert.cls == GraphClass::AntiBalanced)
        std::cout << ", V1=" << vertex_set(cert.v1) << " V2=" << vertex_set(cert.v2);
    if (cert.cls == GraphClass::Clusterable) {
        std::cout << " (k=" << cert.k << "):";
        for (const auto& p : cert.parts)
            std::cout << " " << vertex_set(p);
    }
    if (cert.cls == GraphClass::Unbalanced)
        std::cout << ", witness cycle " << vertex_set(cert.witness_cycle);
    std::cout << "; " << (conn.irreducible ? "irreducible" : "not irreducible")
              << "; period " << conn.period << (conn.aperiodic ? " (aperiodic)" : "")
              << "; " << existence_line(ex) << "\n";
    std::cout << "spectrum(A): " << format_eig(ex.evidence)
              << "; rho = " << ex.evidence.spectral_radius
              << (ex.evidence.leading_in_spectrum ? " (in spectrum" : " (not in spectrum")
              << (ex.evidence.leading_simple ? ", simple)" : ")") << "\n";
    if (!conn.irreducible) {
        std::cout << "components:";
        for (const auto& scc : conn.sccs)
            std::cout << " " << vertex_set(scc);
        std::cout << "\n";
    }
    return kExitPass;
}

int cmd_spectrum(const std::string& graph_path) {
    const SignedDigraph g = load_graph_file(graph_path);
    const SpectrumReport rep = spectrum(g.A);
    for (int i = 0; i < rep.eigenvalues.size(); ++i)
        std::printf("%.12g %+.12gi\n", rep.eigenvalues(i).real(), rep.eigenvalues(i).imag());
    std::printf("spectral_radius %.12g  in_spectrum %s  simple %s\n", rep.spectral_radius,
                rep.leading_in_spectrum ? "yes" : "no", rep.leading_simple ? "yes" : "no");
    return kExitPass;
}

// Build the transform and design for a graph given the scenario mode.
// For gauge mode on the block class, leader entries take the leader gauge
// sign and follower entries stay positive diagonal.
struct BuiltDesign {
    DesignResult design;
    BalanceCertificate cert;
    bool reverse_gate_ok = true;   // only meaningful for reverse mode
    std::string reverse_note;
};

BuiltDesign build_design(const SignedDigraph& g, const Scenario& sc) {
    BuiltDesign out;
    out.cert = classify(g);

    const bool plain = out.cert.cls == GraphClass::Unsigned ||
                       out.cert.cls == GraphClass::Balanced;

    switch (sc.mode) {
    case TransformMode::Gauge: {
        Eigen::VectorXd mags = sc.magnitudes.value_or(Eigen::VectorXd::Ones(g.n()));
        if (mags.size() != g.n())
            throw InputError("scenario: magnitudes length " + std::to_string(mags.size()) +
                             ", graph has n = " + std::to_string(g.n()));
        if (plain) {
            out.design = design_laplacian(g.A, gauge_design(out.cert, mags, g.n()));
        } else {
            // block class: gauge the leader, keep followers positive diagonal
            const BlockDecomposition dec = block_decompose(g);
            const BalanceCertificate leader_cert = classify(SignedDigraph{dec.A11});
            Eigen::VectorXd m1(dec.r), m2(g.n() - dec.r);
            for (int i = 0; i < dec.r; ++i)
                m1(i) = mags(dec.ordering[i]);
            for (int i = dec.r; i < g.n(); ++i)
                m2(i - dec.r) = mags(dec.ordering[i]);
            const TransformMatrix p1 = gauge_design(leader_cert, m1, dec.r);
            const TransformMatrix p2 = TransformMatrix::diagonal(m2);
            out.design = block_design(dec, p1, p2);
        }
        break;
    }
    case TransformMode::File: {
        const TransformMatrix p = load_transform_file(sc.p_path);
        if (plain) {
            out.design = design_laplacian(g.A, p);
        } else {
            const BlockDecomposition dec = block_decompose(g);
            if (p.kind != TransformKind::BlockDiagonal && p.kind != TransformKind::Diagonal)
                throw InputError("block-class graph needs a diagonal or block transform");
            std::vector<int> identity(g.n());
            for (int i = 0; i < g.n(); ++i)
                identity[i] = i;
            if (dec.ordering != identity)
                throw InputError("transform file for a block-class graph requires the "
                                 "graph to be stored leader-first (reorder vertices)");
            const int r = dec.r;
            out.design = block_design(
                dec, TransformMatrix::full(p.P.topLeftCorner(r, r)),
                TransformMatrix::full(p.P.bottomRightCorner(g.n() - r, g.n() - r)));
        }
        break;
    }
    case TransformMode::Reverse: {
        if (!plain)
            throw InputError("reverse design applies to unsigned/balanced graphs only");
        const TransformMatrix p = reverse_design(sc.x0, sc.xf_target);
        out.design = design_laplacian(g.A, p);
        out.reverse_gate_ok = weight_balanced(out.design.Az);
        if (!out.reverse_gate_ok)
            out.reverse_note =
                "reverse-design gate failed: P A P^-1 is not weight-balanced, so the "
                "requested x_f is not guaranteed; reporting the projector prediction";
        break;
    }
    case TransformMode::Ratio: {
        if (!plain)
            throw InputError("ratio design applies to unsigned/balanced graphs only");
        out.design = design_laplacian(g.A, ratio_design(g, out.cert, sc.ratios).P);
        break;
    }
    }
    return out;
}

int run_scenario(const Scenario& sc, bool quiet) {
    const SignedDigraph g = load_graph_file(sc.graph_path);
    if (sc.x0.size() != g.n())
        throw InputError("scenario: x0 length " + std::to_string(sc.x0.size()) +
                         ", graph has n = " + std::to_string(g.n()));

    BuiltDesign built = build_design(g, sc);
    const VerificationReport ver = verify(built.design, sc.x0, sc.sim);

    if (!built.reverse_note.empty() && !quiet)
        std::cout << "note: " << built.reverse_note << "\n";
    if (!ver.trajectory.warning.empty() && !quiet)
        std::cout << "warning: " << ver.trajectory.warning << "\n";

    if (sc.csv_out)
        write_trajectory_csv(ver.trajectory, *sc.csv_out);
    if (sc.svg_out)
        write_trajectory_svg(ver.trajectory, *sc.svg_out);
    if (sc.report_out)
        write_report_json(report_json(built.cert, spectrum(g.A), built.design, ver),
                          *sc.report_out);

    if (!quiet) {
        std::cout << "class: " << to_string(built.cert.cls)
                  << "   path: " << to_string(built.design.path) << "\n";
        if (ver.prediction.xf.size() > 0)
            std::cout << "xf predicted: " << format_vec(ver.prediction.xf) << "\n";
        if (ver.xf_simulated.size() > 0)
            std::cout << "xf simulated: " << format_vec(ver.xf_simulated) << "\n";
        std::cout << "max |pred - sim| = " << ver.max_error
                  << "  (tolerance " << ver.tolerance << ", "
                  << (ver.converged ? "converged" : "fixed horizon") << ")\n";
        std::cout << "stability: " << to_string(ver.stability) << "   "
                  << (ver.pass ? "PASS" : "FAIL") << "\n";
    }
    return ver.pass ? kExitPass : kExitVerifyFail;
}

int cmd_run(const std::string& scenario_path, const std::optional<std::string>& csv,
            const std::optional<std::string>& svg, const std::optional<std::string>& report,
            const std::optional<double>& dt, const std::optional<double>& t_end) {
    Scenario sc = load_scenario_file(scenario_path);
    if (csv)
        sc.csv_out = *csv;
    if (svg)
        sc.svg_out = *svg;
    if (report)
        sc.report_out = *report;
    if (dt)
        sc.sim.dt = *dt;
    if (t_end)
        sc.sim.t_end = *t_end;
    return run_scenario(sc, /*quiet=*/false);
}

int cmd_sweep(const std::string& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::printf("%-28s %-14s %-12s %s\n", "scenario", "class", "max_error", "result");
    bool any_fail = false;
    for (const auto& f : files) {
        std::string name = f.stem().string();
        try {
            const Scenario sc = load_scenario_file(f);
            const SignedDigraph g = load_graph_file(sc.graph_path);
            if (sc.x0.size() != g.n())
                throw InputError("x0 length does not match graph");
            BuiltDesign built = build_design(g, sc);
            const VerificationReport ver = verify(built.design, sc.x0, sc.sim);
            if (sc.csv_out)
                write_trajectory_csv(ver.trajectory, *sc.csv_out);
            if (sc.svg_out)
                write_trajectory_svg(ver.trajectory, *sc.svg_out);
            if (sc.report_out)
                write_report_json(report_json(built.cert, spectrum(g.A), built.design, ver),
                                  *sc.report_out);
            std::printf("%-28s %-14s %-12.3g %s\n", name.c_str(),
                        to_string(built.cert.cls).c_str(), ver.max_error,
                        ver.pass ? "pass" : "FAIL");
            any_fail = any_fail || !ver.pass;
        } catch (const std::exception& e) {
            std::printf("%-28s %-14s %-12s error: %s\n", name.c_str(), "-", "-", e.what());
            any_fail = true;
        }
    }
    return any_fail ? kExitVerifyFail : kExitPass;
}

int cmd_design(const std::string& graph_path, const std::optional<std::string>& p_file,
               const std::vector<double>& magnitudes) {
    const SignedDigraph g = load_graph_file(graph_path);
    const BalanceCertificate cert = classify(g);

    DesignResult design;
    if (p_file) {
        const TransformMatrix p = load_transform_file(*p_file);
        if (cert.cls == GraphClass::Unsigned || cert.cls == GraphClass::Balanced) {
            design = design_laplacian(g.A, p);
        } else if (p.kind == TransformKind::BlockDiagonal) {
            const BlockDecomposition dec = block_decompose(g);
            design = block_design(dec, TransformMatrix::full(p.P.topLeftCorner(p.r, p.r)),
                                  TransformMatrix::full(p.P.bottomRightCorner(
                                      g.n() - p.r, g.n() - p.r)));
        } else {
            design = design_laplacian(g.A, p); // membership will reject if unusable
        }
    } else {
        Eigen::VectorXd mags = Eigen::VectorXd::Ones(g.n());
        if (!magnitudes.empty()) {
            if (static_cast<int>(magnitudes.size()) != g.n())
                throw InputError("expected " + std::to_string(g.n()) + " magnitudes");
            mags = Eigen::Map<const Eigen::VectorXd>(magnitudes.data(), g.n());
        }
        if (cert.cls == GraphClass::Unsigned || cert.cls == GraphClass::Balanced) {
            design = design_laplacian(g.A, gauge_design(cert, mags, g.n()));
        } else {
            const BlockDecomposition dec = block_decompose(g);
            const BalanceCertificate leader_cert = classify(SignedDigraph{dec.A11});
            Eigen::VectorXd m1(dec.r), m2(g.n() - dec.r);
            for (int i = 0; i < dec.r; ++i)
                m1(i) = mags(dec.ordering[i]);
            for (int i = dec.r; i < g.n(); ++i)
                m2(i - dec.r) = mags(dec.ordering[i]);
            design = block_design(dec, gauge_design(leader_cert, m1, dec.r),
                                  TransformMatrix::diagonal(m2));
        }
    }

    std::cout << "class: " << to_string(cert.cls) << "   path: " << to_string(design.path)
              << "\n";
    print_matrix(design.P.P, "P");
    print_matrix(design.theta_x, "theta_x");
    print_matrix(design.Lx, "L_x");
    print_matrix(design.Az, "A_z = P A P^-1");
    return kExitPass;
}

int cmd_reverse(const std::string& graph_path, const std::vector<double>& x0v,
                const std::vector<double>& xfv) {
    const SignedDigraph g = load_graph_file(graph_path);
    if (static_cast<int>(x0v.size()) != g.n() || static_cast<int>(xfv.size()) != g.n())
        throw InputError("reverse: --x0 and --xf must have " + std::to_string(g.n()) +
                         " entries");
    const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(x0v.data(), g.n());
    const Eigen::VectorXd xf = Eigen::Map<const Eigen::VectorXd>(xfv.data(), g.n());

    const TransformMatrix p = reverse_design(x0, xf);
    std::cout << "P = diag" << format_vec(p.P.diagonal()) << "\n";

    const DesignResult design = design_laplacian(g.A, p);
    const bool gate = weight_balanced(design.Az);
    std::cout << "weight-balance gate: " << (gate ? "holds" : "FAILS") << "\n";
    const SteadyStatePrediction pred = predict_steady_state(design, x0);
    std::cout << "projected x_f: " << format_vec(pred.xf) << "\n";
    if (!gate)
        std::cout << "note: gate failed; the requested x_f " << format_vec(xf)
                  << " is not guaranteed, the projected value above is what the flow "
                     "reaches\n";
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"modified-Laplacian opinion dynamics on signed digraphs"};
    app.require_subcommand(1);

    std::string graph_path, scenario_path, sweep_dir;
    std::optional<std::string> p_file, csv, svg, report;
    std::optional<double> dt, t_end;
    std::vector<double> magnitudes, x0v, xfv;

    auto* c_classify = app.add_subcommand("classify", "classify a signed graph");
    c_classify->add_option("graph", graph_path, "graph JSON file")->required();

    auto* c_spectrum = app.add_subcommand("spectrum", "eigenvalues of the adjacency matrix");
    c_spectrum->add_option("graph", graph_path, "graph JSON file")->required();

    auto* c_design = app.add_subcommand("design", "compute theta_x and L_x");
    c_design->add_option("graph", graph_path, "graph JSON file")->required();
    c_design->add_option("--p-file", p_file, "transform JSON file");
    c_design->add_option("--magnitudes", magnitudes, "gauge magnitudes")->delimiter(',');

    auto* c_reverse = app.add_subcommand("reverse", "diagonal P from a desired final state");
    c_reverse->add_option("graph", graph_path, "graph JSON file")->required();
    c_reverse->add_option("--x0", x0v, "initial opinions")->required()->delimiter(',');
    c_reverse->add_option("--xf", xfv, "desired final opinions")->required()->delimiter(',');

    auto* c_run = app.add_subcommand("run", "run a scenario end to end");
    c_run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    c_run->add_option("--csv", csv, "trajectory CSV path");
    c_run->add_option("--svg", svg, "trajectory SVG path");
    c_run->add_option("--report", report, "verification report JSON path");
    c_run->add_option("--dt", dt, "integration step");
    c_run->add_option("--t-end", t_end, "integration horizon");

    auto* c_sweep = app.add_subcommand("sweep", "run every scenario in a directory");
    c_sweep->add_option("dir", sweep_dir, "directory of scenario JSON files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_classify->parsed())
            return cmd_classify(graph_path);
        if (c_spectrum->parsed())
            return cmd_spectrum(graph_path);
        if (c_design->parsed())
            return cmd_design(graph_path, p_file, magnitudes);
        if (c_reverse->parsed())
            return cmd_reverse(graph_path, x0v, xfv);
        if (c_run->parsed())
            return cmd_run(scenario_path, csv, svg, report, dt, t_end);
        if (c_sweep->parsed())
            return cmd_sweep(sweep_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
