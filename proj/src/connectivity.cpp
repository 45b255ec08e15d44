#include "opinion/connectivity.hpp"

#include "opinion/balance.hpp"
#include "opinion/errors.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace opinion {

namespace {

// Successor lists of the influence digraph: A(i,j) != 0 is the edge j -> i.
std::vector<std::vector<int>> successors(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    std::vector<std::vector<int>> succ(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (a(i, j) != 0.0)
                succ[j].push_back(i);
    return succ;
}

struct SccResult {
    std::vector<int> comp;               // vertex -> component id
    std::vector<std::vector<int>> sccs;  // id -> members (ascending)
};

// Iterative Tarjan.
SccResult tarjan(const std::vector<std::vector<int>>& succ) {
    const int n = static_cast<int>(succ.size());
    SccResult res;
    res.comp.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int next_index = 0;

    struct Frame {
        int v;
        std::size_t edge;
    };
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1)
            continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge < succ[f.v].size()) {
                const int w = succ[f.v][f.edge++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    std::vector<int> scc;
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        res.comp[w] = static_cast<int>(res.sccs.size());
                        scc.push_back(w);
                    } while (w != f.v);
                    std::sort(scc.begin(), scc.end());
                    res.sccs.push_back(std::move(scc));
                }
                const int v = f.v;
                call.pop_back();
                if (!call.empty())
                    low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
        }
    }
    return res;
}

// Reorders components so that components receiving no outside influence
// come first (topological order of the condensation along influence edges).
// Kahn's algorithm with an index-ordered queue for determinism.
std::vector<int> condensation_order(const SccResult& scc,
                                    const std::vector<std::vector<int>>& succ) {
    const int m = static_cast<int>(scc.sccs.size());
    std::vector<std::vector<int>> cadj(m);
    std::vector<int> indeg(m, 0);
    for (int u = 0; u < static_cast<int>(succ.size()); ++u)
        for (int v : succ[u]) {
            const int cu = scc.comp[u], cv = scc.comp[v];
            if (cu != cv)
                cadj[cu].push_back(cv);
        }
    for (auto& adj : cadj) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
        for (int v : adj)
            ++indeg[v];
    }
    std::vector<int> ready;
    for (int c = 0; c < m; ++c)
        if (indeg[c] == 0)
            ready.push_back(c);
    std::vector<int> order;
    while (!ready.empty()) {
        std::sort(ready.begin(), ready.end(), [&](int x, int y) {
            return scc.sccs[x][0] < scc.sccs[y][0];
        });
        const int c = ready.front();
        ready.erase(ready.begin());
        order.push_back(c);
        for (int v : cadj[c])
            if (--indeg[v] == 0)
                ready.push_back(v);
    }
    return order;
}

// Period of one SCC: gcd of |level[u] + 1 - level[v]| over its internal
// edges, from a BFS layering. 0 when the SCC has no internal edge.
int scc_period(const std::vector<int>& members, const std::vector<int>& comp,
               const std::vector<std::vector<int>>& succ) {
    if (members.size() == 1) {
        // self-loops are excluded by the graph invariant
        return 0;
    }
    const int id = comp[members[0]];
    std::vector<int> level(succ.size(), -1);
    std::deque<int> queue{members[0]};
    level[members[0]] = 0;
    int g = 0;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : succ[u]) {
            if (comp[v] != id)
                continue;
            if (level[v] == -1) {
                level[v] = level[u] + 1;
                queue.push_back(v);
            } else {
                g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
            }
        }
    }
    // tree edges of the layering contribute 0 to the gcd and are skipped;
    // an SCC with >= 2 vertices always has a non-tree edge closing a cycle
    return g;
}

} // namespace

ConnectivityReport connectivity(const SignedDigraph& g) {
    const auto succ = successors(g.A);
    const SccResult scc = tarjan(succ);

    ConnectivityReport rep;
    rep.irreducible = scc.sccs.size() == 1;

    int period = 0;
    for (const auto& members : scc.sccs)
        period = std::gcd(period, scc_period(members, scc.comp, succ));
    rep.period = period;
    rep.aperiodic = period == 1;

    for (int c : condensation_order(scc, succ))
        rep.sccs.push_back(scc.sccs[c]);
    return rep;
}

Eigen::MatrixXd BlockDecomposition::permuted() const {
    const int m = n();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    a.topLeftCorner(r, r) = A11;
    if (r < m) {
        a.bottomLeftCorner(m - r, r) = A21;
        a.bottomRightCorner(m - r, m - r) = A22;
    }
    return a;
}

Eigen::MatrixXd BlockDecomposition::reassemble() const {
    const Eigen::MatrixXd p = permuted();
    const int m = n();
    Eigen::MatrixXd a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            a(ordering[i], ordering[j]) = p(i, j);
    return a;
}

BlockDecomposition block_decompose(const SignedDigraph& g) {
    const auto succ = successors(g.A);
    const SccResult scc = tarjan(succ);

    // closed SCC = no incoming influence; with A(i,j) != 0 meaning j -> i,
    // a component is closed iff the rows of its members have support only
    // inside the component.
    std::vector<int> closed;
    for (int c = 0; c < static_cast<int>(scc.sccs.size()); ++c) {
        bool ok = true;
        for (int i : scc.sccs[c]) {
            for (int j = 0; j < g.n() && ok; ++j)
                if (g.A(i, j) != 0.0 && scc.comp[j] != c)
                    ok = false;
            if (!ok)
                break;
        }
        if (ok)
            closed.push_back(c);
    }
    if (closed.size() != 1)
        throw InputError("block decomposition is ambiguous: " +
                         std::to_string(closed.size()) +
                         " closed strongly connected components (need exactly 1)");

    const int leader = closed[0];
    BlockDecomposition dec;
    dec.ordering = scc.sccs[leader];
    dec.r = static_cast<int>(dec.ordering.size());
    for (int c : condensation_order(scc, succ))
        if (c != leader)
            for (int v : scc.sccs[c])
                dec.ordering.push_back(v);

    const int m = g.n();
    Eigen::MatrixXd perm(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            perm(i, j) = g.A(dec.ordering[i], dec.ordering[j]);

    if (dec.r < m && !perm.topRightCorner(dec.r, m - dec.r).isZero(0.0))
        throw NumericError("leader block received follower influence; decomposition broken");

    dec.A11 = perm.topLeftCorner(dec.r, dec.r);
    if (dec.r < m) {
        dec.A21 = perm.bottomLeftCorner(m - dec.r, dec.r);
        dec.A22 = perm.bottomRightCorner(m - dec.r, m - dec.r);
    } else {
        dec.A21.resize(0, dec.r);
        dec.A22.resize(0, 0);
    }

    const auto leader_cls = classify(SignedDigraph{dec.A11}).cls;
    if (leader_cls != GraphClass::Unsigned && leader_cls != GraphClass::Balanced)
        throw InputError("leader component is not structurally balanced (" +
                         to_string(leader_cls) + "); block design requires it");

    return dec;
}

} // namespace opinion
