#pragma once

#include "opinion/balance.hpp"
#include "opinion/design.hpp"
#include "opinion/dynamics.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace opinion {

enum class TransformMode { Gauge, File, Reverse, Ratio };

/// One end-to-end run description (JSON file):
///
/// {
///   "graph": "path.json",
///   "x0": [ ... ],
///   "transform": {"mode": "gauge",   "magnitudes": [...]}     (optional magnitudes)
///              | {"mode": "file",    "path": "P.json"}
///              | {"mode": "reverse", "xf": [...]}
///              | {"mode": "ratio",   "ratios": [...]},
///   "sim":     {"dt": 1e-3, "t_end": 20.0, "settle_tol": 1e-9},   (optional)
///   "outputs": {"csv": "...", "svg": "...", "report": "..."}      (optional)
/// }
///
/// Relative paths are resolved against the scenario file's directory.
struct Scenario {
    std::string name;
    std::filesystem::path graph_path;
    Eigen::VectorXd x0;
    TransformMode mode = TransformMode::Gauge;
    std::optional<Eigen::VectorXd> magnitudes; // gauge; defaults to all ones
    std::filesystem::path p_path;              // file
    Eigen::VectorXd xf_target;                 // reverse
    Eigen::VectorXd ratios;                    // ratio
    SimOptions sim;
    std::optional<std::filesystem::path> csv_out;
    std::optional<std::filesystem::path> svg_out;
    std::optional<std::filesystem::path> report_out;
};

Scenario load_scenario(const std::string& text, const std::string& origin = "<string>");
Scenario load_scenario_file(const std::filesystem::path& path);

/// Trajectory CSV: header "t,x1,...,xn", one row per retained sample,
/// 17 significant digits. Applies the <=10000-row thinning rule if the
/// trajectory still carries more samples.
std::string trajectory_csv(const Trajectory& traj);
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

/// Verification report JSON with fields {classification, spectrum, theta_x,
/// L_x, xf_predicted, xf_simulated, max_error, stable, pass}.
std::string report_json(const BalanceCertificate& cert, const SpectrumReport& a_spectrum,
                        const DesignResult& design, const VerificationReport& ver);
void write_report_json(const std::string& json, const std::filesystem::path& path);

} // namespace opinion
