#include "opinion/io.hpp"

#include "opinion/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace opinion {

namespace {

using nlohmann::json;

int line_of_byte(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k)
        if (text[k] == '\n')
            ++line;
    return line;
}

Eigen::VectorXd json_vector(const json& arr, const std::string& origin, const char* field) {
    if (!arr.is_array() || arr.empty())
        throw InputError(origin + ": \"" + field + "\" must be a non-empty number array");
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            throw InputError(origin + ": \"" + field + "\" has a non-numeric entry");
        v(i) = arr[i].get<double>();
    }
    return v;
}

json vector_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i)
        arr.push_back(v(i));
    return arr;
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_text(const std::string& text, const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write file: " + path.string());
    out << text;
}

} // namespace

Scenario load_scenario(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(origin + ":" + std::to_string(line_of_byte(text, e.byte)) + ": " +
                         e.what());
    }
    if (!doc.is_object())
        throw InputError(origin + ": scenario must be a JSON object");

    Scenario sc;
    sc.name = std::filesystem::path(origin).stem().string();
    const std::filesystem::path base =
        origin == "<string>" ? std::filesystem::path(".")
                             : std::filesystem::path(origin).parent_path();
    auto resolve = [&base](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };

    if (!doc.contains("graph") || !doc["graph"].is_string())
        throw InputError(origin + ": missing string field \"graph\"");
    sc.graph_path = resolve(doc["graph"].get<std::string>());

    if (!doc.contains("x0"))
        throw InputError(origin + ": missing field \"x0\"");
    sc.x0 = json_vector(doc["x0"], origin, "x0");

    if (!doc.contains("transform") || !doc["transform"].is_object())
        throw InputError(origin + ": missing object field \"transform\"");
    const json& tf = doc["transform"];
    if (!tf.contains("mode") || !tf["mode"].is_string())
        throw InputError(origin + ": transform needs a string \"mode\"");
    const std::string mode = tf["mode"].get<std::string>();
    if (mode == "gauge") {
        sc.mode = TransformMode::Gauge;
        if (tf.contains("magnitudes"))
            sc.magnitudes = json_vector(tf["magnitudes"], origin, "magnitudes");
    } else if (mode == "file") {
        sc.mode = TransformMode::File;
        if (!tf.contains("path") || !tf["path"].is_string())
            throw InputError(origin + ": transform mode \"file\" needs \"path\"");
        sc.p_path = resolve(tf["path"].get<std::string>());
    } else if (mode == "reverse") {
        sc.mode = TransformMode::Reverse;
        if (!tf.contains("xf"))
            throw InputError(origin + ": transform mode \"reverse\" needs \"xf\"");
        sc.xf_target = json_vector(tf["xf"], origin, "xf");
    } else if (mode == "ratio") {
        sc.mode = TransformMode::Ratio;
        if (!tf.contains("ratios"))
            throw InputError(origin + ": transform mode \"ratio\" needs \"ratios\"");
        sc.ratios = json_vector(tf["ratios"], origin, "ratios");
    } else {
        throw InputError(origin + ": unknown transform mode \"" + mode + "\"");
    }

    if (doc.contains("sim")) {
        const json& sim = doc["sim"];
        if (!sim.is_object())
            throw InputError(origin + ": \"sim\" must be an object");
        if (sim.contains("dt"))
            sc.sim.dt = sim["dt"].get<double>();
        if (sim.contains("t_end"))
            sc.sim.t_end = sim["t_end"].get<double>();
        if (sim.contains("settle_tol"))
            sc.sim.settle_tol = sim["settle_tol"].get<double>();
    }
    if (doc.contains("outputs")) {
        const json& out = doc["outputs"];
        if (!out.is_object())
            throw InputError(origin + ": \"outputs\" must be an object");
        if (out.contains("csv"))
            sc.csv_out = resolve(out["csv"].get<std::string>());
        if (out.contains("svg"))
            sc.svg_out = resolve(out["svg"].get<std::string>());
        if (out.contains("report"))
            sc.report_out = resolve(out["report"].get<std::string>());
    }
    return sc;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open scenario file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str(), path.string());
}

std::string trajectory_csv(const Trajectory& traj) {
    if (traj.samples.empty())
        throw InputError("trajectory has no samples");
    const int n = static_cast<int>(traj.samples.front().x.size());

    // thinning safety net; simulate() already caps at 10000 by default
    const std::size_t total = traj.samples.size();
    std::size_t stride = 1;
    if (total > 10000)
        stride = (total + 9999) / 10000;

    std::string out;
    out.reserve(std::min<std::size_t>(total, 10001) * (20 * (n + 1)));
    out += "t";
    for (int i = 1; i <= n; ++i) {
        out += ",x";
        out += std::to_string(i);
    }
    out += "\n";
    char buf[32];
    auto emit = [&](const OpinionState& s) {
        std::snprintf(buf, sizeof buf, "%.17g", s.t);
        out += buf;
        for (int i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, ",%.17g", s.x(i));
            out += buf;
        }
        out += "\n";
    };
    for (std::size_t k = 0; k < total; ++k)
        if (k % stride == 0 && k != total - 1)
            emit(traj.samples[k]);
    emit(traj.samples.back());
    return out;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
    write_text(trajectory_csv(traj), path);
}

std::string report_json(const BalanceCertificate& cert, const SpectrumReport& a_spectrum,
                        const DesignResult& design, const VerificationReport& ver) {
    json doc;

    json cls;
    cls["class"] = to_string(cert.cls);
    auto one_based = [](const std::vector<int>& vs) {
        json arr = json::array();
        for (int v : vs)
            arr.push_back(v + 1);
        return arr;
    };
    if (cert.cls == GraphClass::Balanced || cert.cls == GraphClass::AntiBalanced ||
        cert.cls == GraphClass::Unsigned) {
        cls["v1"] = one_based(cert.v1);
        cls["v2"] = one_based(cert.v2);
    }
    if (cert.cls == GraphClass::Clusterable) {
        cls["k"] = cert.k;
        json parts = json::array();
        for (const auto& p : cert.parts)
            parts.push_back(one_based(p));
        cls["parts"] = std::move(parts);
    }
    if (cert.cls == GraphClass::Unbalanced)
        cls["witness_cycle"] = one_based(cert.witness_cycle);
    doc["classification"] = std::move(cls);

    json eig = json::array();
    for (int i = 0; i < a_spectrum.eigenvalues.size(); ++i)
        eig.push_back({{"re", a_spectrum.eigenvalues(i).real()},
                       {"im", a_spectrum.eigenvalues(i).imag()}});
    doc["spectrum"] = std::move(eig);

    doc["theta_x"] = matrix_json(design.theta_x);
    doc["L_x"] = matrix_json(design.Lx);
    doc["xf_predicted"] =
        ver.prediction.xf.size() > 0 ? vector_json(ver.prediction.xf) : json(nullptr);
    doc["xf_simulated"] =
        ver.xf_simulated.size() > 0 ? vector_json(ver.xf_simulated) : json(nullptr);
    doc["max_error"] = ver.max_error;
    doc["stable"] = ver.stability == Stability::Stable;
    doc["stability"] = to_string(ver.stability);
    doc["converged"] = ver.converged;
    doc["tolerance"] = ver.tolerance;
    doc["pass"] = ver.pass;
    return doc.dump(2) + "\n";
}

void write_report_json(const std::string& json_text, const std::filesystem::path& path) {
    write_text(json_text, path);
}

} // namespace opinion
