#include "opinion/transform.hpp"

#include "opinion/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace opinion {

namespace {

using nlohmann::json;

Eigen::MatrixXd invert_dense(const Eigen::MatrixXd& m, const char* what) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (!lu.isInvertible())
        throw NumericError(std::string("singular ") + what +
                           " (rank " + std::to_string(lu.rank()) + " of " +
                           std::to_string(m.rows()) + ")");
    return lu.inverse();
}

} // namespace

TransformMatrix TransformMatrix::diagonal(const Eigen::VectorXd& d) {
    TransformMatrix t;
    t.P = d.asDiagonal();
    t.kind = TransformKind::Diagonal;
    return t;
}

TransformMatrix TransformMatrix::full(Eigen::MatrixXd p) {
    if (p.rows() != p.cols())
        throw InputError("transform matrix must be square");
    TransformMatrix t;
    t.P = std::move(p);
    t.kind = TransformKind::Full;
    return t;
}

TransformMatrix TransformMatrix::block_diagonal(const Eigen::MatrixXd& p1,
                                                const Eigen::MatrixXd& p2) {
    if (p1.rows() != p1.cols() || p2.rows() != p2.cols())
        throw InputError("block transform: P1 and P2 must be square");
    const int r = static_cast<int>(p1.rows());
    const int n = r + static_cast<int>(p2.rows());
    TransformMatrix t;
    t.P = Eigen::MatrixXd::Zero(n, n);
    t.P.topLeftCorner(r, r) = p1;
    t.P.bottomRightCorner(n - r, n - r) = p2;
    t.kind = TransformKind::BlockDiagonal;
    t.r = r;
    return t;
}

Eigen::MatrixXd TransformMatrix::inverse() const {
    switch (kind) {
    case TransformKind::Diagonal: {
        Eigen::VectorXd d = P.diagonal();
        for (int i = 0; i < d.size(); ++i) {
            if (d(i) == 0.0)
                throw NumericError("singular transform: zero diagonal entry " +
                                   std::to_string(i + 1));
            d(i) = 1.0 / d(i);
        }
        return Eigen::MatrixXd(d.asDiagonal());
    }
    case TransformKind::BlockDiagonal: {
        const int m = n();
        Eigen::MatrixXd inv = Eigen::MatrixXd::Zero(m, m);
        inv.topLeftCorner(r, r) = invert_dense(P.topLeftCorner(r, r), "leader block P1");
        if (r < m)
            inv.bottomRightCorner(m - r, m - r) =
                invert_dense(P.bottomRightCorner(m - r, m - r), "follower block P2");
        return inv;
    }
    case TransformKind::Full:
        return invert_dense(P, "transform P");
    }
    throw NumericError("unreachable transform kind");
}

Eigen::MatrixXd TransformMatrix::similarity(const Eigen::MatrixXd& a) const {
    if (a.rows() != P.rows() || a.cols() != P.cols())
        throw InputError("transform size " + std::to_string(P.rows()) +
                         " does not match matrix size " + std::to_string(a.rows()));
    return P * a * inverse();
}

bool check_membership(const Eigen::MatrixXd& a, const TransformMatrix& p) {
    const Eigen::MatrixXd az = p.similarity(a); // throws if P singular
    return (az.array() >= -p.tol).all();
}

TransformMatrix gauge_design(const BalanceCertificate& cert,
                             const Eigen::VectorXd& magnitudes, int n) {
    if (cert.cls != GraphClass::Unsigned && cert.cls != GraphClass::Balanced)
        throw InputError("gauge design needs an Unsigned or Balanced certificate, got " +
                         to_string(cert.cls));
    if (magnitudes.size() != n)
        throw InputError("gauge design: expected " + std::to_string(n) + " magnitudes, got " +
                         std::to_string(magnitudes.size()));
    if (!(magnitudes.array() > 0.0).all())
        throw InputError("gauge design: magnitudes must be positive");

    Eigen::VectorXd d = magnitudes;
    for (int v : cert.v2)
        d(v) = -d(v);
    if (d(0) < 0.0)
        d = -d; // canonical global sign: entry for vertex 1 positive
    return TransformMatrix::diagonal(d);
}

TransformMatrix reverse_design(const Eigen::VectorXd& x0, const Eigen::VectorXd& xf_desired) {
    const int n = static_cast<int>(x0.size());
    if (xf_desired.size() != n)
        throw InputError("reverse design: x0 and xf must have equal length");
    for (int i = 0; i < n; ++i)
        if (xf_desired(i) == 0.0)
            throw InputError("reverse design: xf entry " + std::to_string(i + 1) +
                             " is zero; every target must be nonzero");
    const double sum = (x0.array() / xf_desired.array()).sum();
    const double residual = sum - static_cast<double>(n);
    if (std::abs(residual) > 1e-9) {
        std::ostringstream msg;
        msg << "reverse design: targets violate sum(x0_i/xf_i) = n: residual " << residual;
        throw InputError(msg.str());
    }
    return TransformMatrix::diagonal(xf_desired.cwiseInverse()); // k = 1
}

RatioDesign ratio_design(const SignedDigraph& g, const BalanceCertificate& cert,
                         const Eigen::VectorXd& ratios) {
    if (cert.cls != GraphClass::Unsigned && cert.cls != GraphClass::Balanced)
        throw InputError("ratio design needs an Unsigned or Balanced certificate, got " +
                         to_string(cert.cls));
    if (ratios.size() != g.n())
        throw InputError("ratio design: expected " + std::to_string(g.n()) + " ratios");
    for (int i = 0; i < ratios.size(); ++i)
        if (ratios(i) == 0.0)
            throw InputError("ratio design: ratio entry " + std::to_string(i + 1) + " is zero");

    // the gauge demands one sign per camp (up to a global flip)
    auto camp_sign = [&](const std::vector<int>& camp) {
        int s = 0;
        for (int v : camp) {
            const int sv = ratios(v) > 0.0 ? 1 : -1;
            if (s == 0)
                s = sv;
            else if (s != sv)
                throw InputError("ratio design: mixed signs inside one camp (vertex " +
                                 std::to_string(v + 1) + ")");
        }
        return s;
    };
    const int s1 = camp_sign(cert.v1);
    const int s2 = camp_sign(cert.v2);
    if (s1 != 0 && s2 != 0 && s1 == s2)
        throw InputError("ratio design: ratio signs must differ between the two camps "
                         "(the transform would fail membership)");

    RatioDesign rd;
    rd.P = TransformMatrix::diagonal(ratios.cwiseInverse());
    rd.direction = ratios;
    return rd;
}

namespace {

int line_of_byte(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k)
        if (text[k] == '\n')
            ++line;
    return line;
}

Eigen::MatrixXd rows_to_matrix(const json& rows, const std::string& origin) {
    if (!rows.is_array() || rows.empty())
        throw InputError(origin + ": \"rows\" must be a non-empty array of arrays");
    const std::size_t n = rows.size();
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n)
            throw InputError(origin + ": row " + std::to_string(i + 1) + " must have " +
                             std::to_string(n) + " numbers");
        for (std::size_t j = 0; j < n; ++j) {
            if (!rows[i][j].is_number())
                throw InputError(origin + ": non-numeric entry in row " + std::to_string(i + 1));
            m(i, j) = rows[i][j].get<double>();
        }
    }
    return m;
}

} // namespace

TransformMatrix load_transform(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(origin + ":" + std::to_string(line_of_byte(text, e.byte)) + ": " +
                         e.what());
    }
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
        throw InputError(origin + ": expected an object with string field \"kind\"");
    const std::string kind = doc["kind"].get<std::string>();
    if (kind == "diagonal") {
        if (!doc.contains("values") || !doc["values"].is_array())
            throw InputError(origin + ": diagonal transform needs \"values\"");
        Eigen::VectorXd d(doc["values"].size());
        for (std::size_t i = 0; i < doc["values"].size(); ++i)
            d(i) = doc["values"][i].get<double>();
        return TransformMatrix::diagonal(d);
    }
    if (kind == "full")
        return TransformMatrix::full(rows_to_matrix(doc["rows"], origin));
    if (kind == "block") {
        if (!doc.contains("r") || !doc["r"].is_number_integer())
            throw InputError(origin + ": block transform needs integer \"r\"");
        const Eigen::MatrixXd m = rows_to_matrix(doc["rows"], origin);
        const int r = doc["r"].get<int>();
        if (r < 1 || r > m.rows())
            throw InputError(origin + ": block size r out of range");
        if (!m.topRightCorner(r, m.cols() - r).isZero(0.0) ||
            !m.bottomLeftCorner(m.rows() - r, r).isZero(0.0))
            throw InputError(origin + ": block transform has nonzero off-diagonal blocks");
        return TransformMatrix::block_diagonal(m.topLeftCorner(r, r),
                                               m.bottomRightCorner(m.rows() - r, m.cols() - r));
    }
    throw InputError(origin + ": unknown transform kind \"" + kind + "\"");
}

TransformMatrix load_transform_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open transform file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_transform(buf.str(), path.string());
}

std::string write_transform(const TransformMatrix& p) {
    json doc;
    switch (p.kind) {
    case TransformKind::Diagonal: {
        doc["kind"] = "diagonal";
        json vals = json::array();
        for (int i = 0; i < p.n(); ++i)
            vals.push_back(p.P(i, i));
        doc["values"] = std::move(vals);
        break;
    }
    case TransformKind::BlockDiagonal:
        doc["kind"] = "block";
        doc["r"] = p.r;
        [[fallthrough]];
    case TransformKind::Full: {
        if (p.kind == TransformKind::Full)
            doc["kind"] = "full";
        json rows = json::array();
        for (int i = 0; i < p.n(); ++i) {
            json row = json::array();
            for (int j = 0; j < p.n(); ++j)
                row.push_back(p.P(i, j));
            rows.push_back(std::move(row));
        }
        doc["rows"] = std::move(rows);
        break;
    }
    }
    return doc.dump(2) + "\n";
}

} // namespace opinion
