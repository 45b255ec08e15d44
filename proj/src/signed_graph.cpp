#include "opinion/signed_graph.hpp"

#include "opinion/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace opinion {

namespace {

using nlohmann::json;

// nlohmann reports byte offsets; error messages want lines.
int line_of_byte(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k)
        if (text[k] == '\n')
            ++line;
    return line;
}

[[noreturn]] void parse_fail(const std::string& origin, int line, const std::string& what) {
    throw InputError(origin + ":" + std::to_string(line) + ": " + what);
}

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail(origin, line_of_byte(text, e.byte), e.what());
    }
}

} // namespace

SignedDigraph SignedDigraph::from_matrix(Eigen::MatrixXd a) {
    if (a.rows() != a.cols())
        throw InputError("adjacency matrix must be square");
    if (a.rows() < 1)
        throw InputError("graph needs at least one agent");
    if (!a.allFinite())
        throw InputError("adjacency matrix has non-finite entries");
    for (int i = 0; i < a.rows(); ++i)
        if (a(i, i) != 0.0)
            throw InputError("self-loop at vertex " + std::to_string(i + 1));
    return SignedDigraph{std::move(a)};
}

SignedDigraph load_graph(const std::string& text, const std::string& origin) {
    const json doc = parse_json(text, origin);
    if (!doc.is_object() || !doc.contains("n"))
        parse_fail(origin, 1, "expected an object with field \"n\"");
    if (!doc["n"].is_number_integer())
        parse_fail(origin, 1, "field \"n\" must be an integer");
    const long long n = doc["n"].get<long long>();
    if (n < 1)
        parse_fail(origin, 1, "field \"n\" must be >= 1, got " + std::to_string(n));

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    std::set<std::pair<long long, long long>> seen;
    if (doc.contains("edges")) {
        if (!doc["edges"].is_array())
            parse_fail(origin, 1, "field \"edges\" must be an array");
        int idx = 0;
        for (const auto& e : doc["edges"]) {
            ++idx;
            const std::string where = "edge #" + std::to_string(idx);
            if (!e.is_object() || !e.contains("i") || !e.contains("j") || !e.contains("w"))
                parse_fail(origin, 1, where + ": expected fields i, j, w");
            if (!e["i"].is_number_integer() || !e["j"].is_number_integer())
                parse_fail(origin, 1, where + ": i and j must be integers");
            if (!e["w"].is_number())
                parse_fail(origin, 1, where + ": w must be a number");
            const long long i = e["i"].get<long long>();
            const long long j = e["j"].get<long long>();
            const double w = e["w"].get<double>();
            if (i < 1 || i > n || j < 1 || j > n)
                parse_fail(origin, 1,
                           where + ": vertex id out of range 1.." + std::to_string(n) + " in (" +
                               std::to_string(i) + "," + std::to_string(j) + ")");
            if (i == j)
                parse_fail(origin, 1, where + ": self-loop at vertex " + std::to_string(i));
            if (!seen.insert({i, j}).second)
                parse_fail(origin, 1,
                           where + ": duplicate edge (" + std::to_string(i) + "," +
                               std::to_string(j) + ")");
            if (!std::isfinite(w))
                parse_fail(origin, 1, where + ": weight must be finite");
            a(i - 1, j - 1) = w;
        }
    }
    return SignedDigraph{std::move(a)};
}

SignedDigraph load_graph_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open graph file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_graph(buf.str(), path.string());
}

std::string write_graph(const SignedDigraph& g) {
    json doc;
    doc["n"] = g.n();
    json edges = json::array();
    // nlohmann emits shortest round-trip doubles, so weights survive exactly
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            if (g.A(i, j) != 0.0)
                edges.push_back({{"i", i + 1}, {"j", j + 1}, {"w", g.A(i, j)}});
    doc["edges"] = std::move(edges);
    return doc.dump(2) + "\n";
}

SignedDigraph unsigned_counterpart(const SignedDigraph& g) {
    return SignedDigraph{g.A.cwiseAbs()};
}

SignedDigraph negated(const SignedDigraph& g) {
    return SignedDigraph{-g.A};
}

} // namespace opinion
