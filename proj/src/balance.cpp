#include "opinion/balance.hpp"

#include <algorithm>
#include <deque>

namespace opinion {

std::string to_string(GraphClass c) {
    switch (c) {
    case GraphClass::Unsigned: return "Unsigned";
    case GraphClass::Balanced: return "Balanced";
    case GraphClass::AntiBalanced: return "AntiBalanced";
    case GraphClass::Clusterable: return "Clusterable";
    case GraphClass::Unbalanced: return "Unbalanced";
    }
    return "?";
}

namespace {

// One sign constraint between a pair of vertices. positive => same side,
// negative => opposite sides. Both directed entries contribute constraints,
// so a mixed pair (a_uv > 0, a_vu < 0) is contradictory by itself.
struct Constraint {
    int to;
    bool negative;
};

std::vector<std::vector<Constraint>> constraint_graph(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    std::vector<std::vector<Constraint>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (a(i, j) != 0.0) {
                const bool neg = a(i, j) < 0.0;
                adj[i].push_back({j, neg});
                adj[j].push_back({i, neg});
            }
    return adj;
}

struct Coloring {
    bool consistent = true;
    std::vector<int> color;        // 0/1, -1 unvisited
    std::vector<int> witness;      // closed vertex walk with an odd number of
                                   // negative constraints, when inconsistent
};

// BFS 2-coloring of the sign constraints. On the first conflict the witness
// cycle is assembled from the two tree paths to the offending edge.
Coloring two_color(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    const auto adj = constraint_graph(a);
    Coloring res;
    res.color.assign(n, -1);
    std::vector<int> parent(n, -1), depth(n, 0);

    auto tree_path_to_root = [&](int v) {
        std::vector<int> path;
        for (int u = v; u != -1; u = parent[u])
            path.push_back(u);
        return path;
    };

    for (int s = 0; s < n; ++s) {
        if (res.color[s] != -1)
            continue;
        res.color[s] = 0; // lowest-indexed vertex of each component on side 0
        std::deque<int> queue{s};
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (const auto& c : adj[u]) {
                const int want = c.negative ? 1 - res.color[u] : res.color[u];
                if (res.color[c.to] == -1) {
                    res.color[c.to] = want;
                    parent[c.to] = u;
                    depth[c.to] = depth[u] + 1;
                    queue.push_back(c.to);
                } else if (res.color[c.to] != want) {
                    // fundamental cycle: u..lca reversed, then lca..c.to, closed by (c.to,u)
                    std::vector<int> pu = tree_path_to_root(u);
                    std::vector<int> pv = tree_path_to_root(c.to);
                    while (pu.size() > 1 && pv.size() > 1 &&
                           pu[pu.size() - 2] == pv[pv.size() - 2]) {
                        pu.pop_back();
                        pv.pop_back();
                    }
                    res.witness = pu; // u ... lca
                    for (auto it = pv.rbegin() + 1; it != pv.rend(); ++it)
                        res.witness.push_back(*it); // ... c.to
                    res.witness.push_back(u);       // close the walk
                    res.consistent = false;
                    return res;
                }
            }
        }
    }
    return res;
}

// Connected components over positive entries only (undirected).
std::vector<int> positive_components(const Eigen::MatrixXd& a, int& count) {
    const int n = static_cast<int>(a.rows());
    std::vector<int> comp(n, -1);
    count = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] != -1)
            continue;
        const int id = count++;
        std::deque<int> queue{s};
        comp[s] = id;
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int v = 0; v < n; ++v) {
                const bool linked = a(u, v) > 0.0 || a(v, u) > 0.0;
                if (linked && comp[v] == -1) {
                    comp[v] = id;
                    queue.push_back(v);
                }
            }
        }
    }
    return comp;
}

BalanceCertificate bipartition_cert(const Coloring& col, GraphClass cls, int n) {
    BalanceCertificate cert;
    cert.cls = cls;
    for (int v = 0; v < n; ++v)
        (col.color[v] == 0 ? cert.v1 : cert.v2).push_back(v);
    return cert;
}

} // namespace

BalanceCertificate classify(const SignedDigraph& g) {
    const Eigen::MatrixXd& a = g.A;

    if ((a.array() >= 0.0).all()) {
        BalanceCertificate cert;
        cert.cls = GraphClass::Unsigned;
        cert.v1.resize(g.n());
        for (int v = 0; v < g.n(); ++v)
            cert.v1[v] = v;
        return cert;
    }

    const Coloring balanced_try = two_color(a);
    if (balanced_try.consistent)
        return bipartition_cert(balanced_try, GraphClass::Balanced, g.n());

    const Coloring anti_try = two_color(-a);
    if (anti_try.consistent)
        return bipartition_cert(anti_try, GraphClass::AntiBalanced, g.n());

    int k = 0;
    const std::vector<int> comp = positive_components(a, k);
    bool clusterable = true;
    for (int i = 0; i < g.n() && clusterable; ++i)
        for (int j = 0; j < g.n(); ++j)
            if (a(i, j) < 0.0 && comp[i] == comp[j]) {
                clusterable = false;
                break;
            }
    if (clusterable && k >= 3) {
        BalanceCertificate cert;
        cert.cls = GraphClass::Clusterable;
        cert.k = k;
        cert.parts.resize(k);
        for (int v = 0; v < g.n(); ++v)
            cert.parts[comp[v]].push_back(v);
        return cert;
    }

    BalanceCertificate cert;
    cert.cls = GraphClass::Unbalanced;
    cert.witness_cycle = balanced_try.witness;
    return cert;
}

} // namespace opinion
