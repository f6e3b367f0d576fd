#ifndef MGF_GRAPHS_HPP
#define MGF_GRAPHS_HPP

// Multigraphs without self-edges, the text format "i-j:mult, ...", incidence
// matrices, bridges and blocks (maximal 2-connected pieces), and the reduction
// of bivalent vertices used by the torus evaluators.

#include "core.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace mgf {

class MultiGraph {
public:
    using pair_t = std::pair<int, int>;  // 0-based, first < second

    MultiGraph() = default;
    MultiGraph(int n, std::map<pair_t, int> mult) : n_(n), mult_(std::move(mult)) { validate(); }

    // "1-2:5, 2-3:1, 1-3:1".  Separators: comma, semicolon or newline.  A
    // missing ":mult" means 1; repeated pairs accumulate.
    static MultiGraph parse(const std::string& text) {
        std::map<pair_t, int> m;
        int n = 0;
        std::string tok;
        std::string norm = text;
        for (char& c : norm)
            if (c == ';' || c == '\n') c = ',';
        std::stringstream ss(norm);
        while (std::getline(ss, tok, ',')) {
            tok.erase(std::remove_if(tok.begin(), tok.end(), [](unsigned char c) { return std::isspace(c); }),
                      tok.end());
            if (tok.empty()) continue;
            int i = 0, j = 0, l = 1;
            char dash = 0, colon = 0;
            std::istringstream ts(tok);
            if (!(ts >> i >> dash >> j) || dash != '-')
                throw error(error_kind::ParseError, "bad edge '" + tok + "'");
            if (ts >> colon) {
                if (colon != ':' || !(ts >> l))
                    throw error(error_kind::ParseError, "bad multiplicity in '" + tok + "'");
            }
            std::string rest;
            if (ts >> rest) throw error(error_kind::ParseError, "trailing text in '" + tok + "'");
            if (i < 1 || j < 1) throw error(error_kind::InvalidGraph, "vertices are 1-indexed");
            if (i == j) throw error(error_kind::InvalidGraph, "self-edge at vertex " + std::to_string(i));
            if (l < 1) throw error(error_kind::InvalidGraph, "multiplicity must be >= 1");
            n = std::max({n, i, j});
            m[{std::min(i, j) - 1, std::max(i, j) - 1}] += l;
        }
        if (m.empty()) throw error(error_kind::ParseError, "empty graph");
        return MultiGraph(n, std::move(m));
    }

    int n() const { return n_; }
    const std::map<pair_t, int>& mult() const { return mult_; }

    int multiplicity(int i, int j) const {
        auto it = mult_.find({std::min(i, j), std::max(i, j)});
        return it == mult_.end() ? 0 : it->second;
    }

    int weight() const {
        int w = 0;
        for (const auto& [e, l] : mult_) w += l;
        return w;
    }

    int degree(int v) const {
        int d = 0;
        for (const auto& [e, l] : mult_)
            if (e.first == v || e.second == v) d += l;
        return d;
    }

    std::string str() const {
        std::string s;
        for (const auto& [e, l] : mult_) {
            if (!s.empty()) s += ", ";
            s += std::to_string(e.first + 1) + "-" + std::to_string(e.second + 1) + ":" + std::to_string(l);
        }
        return s;
    }

    // Label-respecting cache key: degree sequence, then the sorted
    // multiplicities, then the labelled edge list.  Equal keys mean equal
    // labelled graphs; isomorphic relabellings get different keys.
    std::string canonical_key() const {
        std::vector<int> deg(n_), ms;
        for (int v = 0; v < n_; ++v) deg[v] = degree(v);
        for (const auto& [e, l] : mult_) ms.push_back(l);
        std::vector<int> sd = deg;
        std::sort(sd.begin(), sd.end());
        std::sort(ms.begin(), ms.end());
        std::string k = "n" + std::to_string(n_) + "|d";
        for (int d : sd) k += std::to_string(d) + ".";
        k += "|m";
        for (int m : ms) k += std::to_string(m) + ".";
        k += "|" + str();
        return k;
    }

    bool operator==(const MultiGraph& o) const { return n_ == o.n_ && mult_ == o.mult_; }

    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(n_);
        for (const auto& [e, l] : mult_) {
            adj[e.first].push_back(e.second);
            adj[e.second].push_back(e.first);
        }
        return adj;
    }

private:
    void validate() const {
        if (n_ < 2) throw error(error_kind::InvalidGraph, "a graph needs at least two vertices");
        for (const auto& [e, l] : mult_) {
            if (e.first == e.second) throw error(error_kind::InvalidGraph, "self-edge");
            if (e.first < 0 || e.second >= n_ || e.first > e.second)
                throw error(error_kind::InvalidGraph, "edge out of range");
            if (l < 1) throw error(error_kind::InvalidGraph, "multiplicity must be >= 1");
        }
        auto adj = adjacency();
        std::vector<bool> seen(n_, false);
        std::vector<int> st{0};
        seen[0] = true;
        int count = 1;
        while (!st.empty()) {
            int v = st.back();
            st.pop_back();
            for (int w : adj[v])
                if (!seen[w]) { seen[w] = true; ++count; st.push_back(w); }
        }
        if (count != n_) throw error(error_kind::InvalidGraph, "graph is not connected");
    }

    int n_ = 0;
    std::map<pair_t, int> mult_;
};

struct IncidenceMatrix {
    std::vector<std::vector<int>> entries;            // n rows, l columns
    std::vector<MultiGraph::pair_t> edges;             // column -> (i, j), i < j
    int rows() const { return static_cast<int>(entries.size()); }
    int cols() const { return static_cast<int>(edges.size()); }
};

// Columns ordered lexicographically by (i, j), copies adjacent; +1 at the
// lower label (edge oriented away from it), -1 at the higher.
inline IncidenceMatrix incidence(const MultiGraph& g) {
    IncidenceMatrix m;
    for (const auto& [e, l] : g.mult())
        for (int c = 0; c < l; ++c) m.edges.push_back(e);
    m.entries.assign(g.n(), std::vector<int>(m.edges.size(), 0));
    for (size_t a = 0; a < m.edges.size(); ++a) {
        m.entries[m.edges[a].first][a] = 1;
        m.entries[m.edges[a].second][a] = -1;
    }
    return m;
}

inline int loop_count(const MultiGraph& g) { return g.weight() - g.n() + 1; }

namespace detail {

// Tarjan's algorithm over the simple graph underlying g.  Emits the vertex
// sets of the blocks and the list of bridges (with multiplicity one).
struct block_finder {
    const MultiGraph& g;
    std::vector<std::vector<int>> adj;
    std::vector<int> disc, low;
    std::vector<std::pair<int, int>> stack;
    std::vector<std::vector<int>> blocks;
    int timer = 0;

    explicit block_finder(const MultiGraph& gr) : g(gr), adj(gr.adjacency()), disc(gr.n(), -1), low(gr.n(), 0) {
        dfs(0, -1);
    }

    void dfs(int v, int parent) {
        disc[v] = low[v] = timer++;
        for (int w : adj[v]) {
            if (disc[w] < 0) {
                stack.emplace_back(v, w);
                dfs(w, v);
                low[v] = std::min(low[v], low[w]);
                if (low[w] >= disc[v]) {
                    std::set<int> vs;
                    while (true) {
                        auto e = stack.back();
                        stack.pop_back();
                        vs.insert(e.first);
                        vs.insert(e.second);
                        if (e == std::make_pair(v, w)) break;
                    }
                    blocks.emplace_back(vs.begin(), vs.end());
                }
            } else if (w != parent && disc[w] < disc[v]) {
                stack.emplace_back(v, w);
                low[v] = std::min(low[v], disc[w]);
            }
        }
    }
};

} // namespace detail

// Edges (with their multiplicity) whose removal disconnects the graph.
inline std::vector<MultiGraph::pair_t> bridges(const MultiGraph& g) {
    std::vector<MultiGraph::pair_t> out;
    detail::block_finder bf(g);
    for (const auto& b : bf.blocks) {
        if (b.size() != 2) continue;
        MultiGraph::pair_t e{b[0], b[1]};
        if (g.multiplicity(b[0], b[1]) == 1) out.push_back(e);
    }
    return out;
}

inline bool is_one_particle_reducible(const MultiGraph& g) { return !bridges(g).empty(); }

// Blocks of g as graphs of their own, vertices relabelled in increasing order.
// A bridge becomes a single-edge factor.  Weights add up to weight(g).
inline std::vector<MultiGraph> cut_vertex_factor(const MultiGraph& g) {
    detail::block_finder bf(g);
    std::vector<MultiGraph> out;
    for (const auto& b : bf.blocks) {
        std::map<int, int> relabel;
        for (size_t i = 0; i < b.size(); ++i) relabel[b[i]] = static_cast<int>(i);
        std::map<MultiGraph::pair_t, int> m;
        for (const auto& [e, l] : g.mult())
            if (relabel.count(e.first) && relabel.count(e.second))
                m[{relabel[e.first], relabel[e.second]}] = l;
        out.emplace_back(static_cast<int>(b.size()), std::move(m));
    }
    std::reverse(out.begin(), out.end());
    return out;
}

inline bool is_vertex_reducible(const MultiGraph& g) { return cut_vertex_factor(g).size() > 1; }

inline MultiGraph cycle_graph(int n) {
    if (n == 2) return MultiGraph(2, {{{0, 1}, 2}});
    std::map<MultiGraph::pair_t, int> m;
    for (int i = 0; i < n; ++i) {
        int a = i, b = (i + 1) % n;
        m[{std::min(a, b), std::max(a, b)}] = 1;
    }
    return MultiGraph(n, std::move(m));
}

inline MultiGraph banana_graph(int l) { return MultiGraph(2, {{{0, 1}, l}}); }

// A graph whose edges carry iterated-propagator orders: every copy of an edge
// is listed separately, so a plain multigraph has all orders equal to one.
struct WeightedGraph {
    int n = 0;
    std::map<MultiGraph::pair_t, std::vector<int>> edges;

    static WeightedGraph from(const MultiGraph& g) {
        WeightedGraph w;
        w.n = g.n();
        for (const auto& [e, l] : g.mult()) w.edges[e] = std::vector<int>(l, 1);
        return w;
    }

    int weight() const {
        int s = 0;
        for (const auto& [e, v] : edges)
            for (int a : v) s += a;
        return s;
    }

    int valence(int v) const {
        int d = 0;
        for (const auto& [e, a] : edges)
            if (e.first == v || e.second == v) d += static_cast<int>(a.size());
        return d;
    }
};

// Integrates out vertices joined to two distinct neighbours by single edges:
// the convolution of G_a and G_b on the torus is G_{a+b}.  Repeats until no
// such vertex is left; the surviving vertices are relabelled in order.
inline WeightedGraph reduce_chains(WeightedGraph w) {
    bool changed = true;
    while (changed && w.n > 2) {
        changed = false;
        for (int v = 0; v < w.n && !changed; ++v) {
            if (w.valence(v) != 2) continue;
            std::vector<std::pair<int, int>> nb;  // (neighbour, order)
            for (const auto& [e, a] : w.edges) {
                if (e.first == v) for (int x : a) nb.emplace_back(e.second, x);
                if (e.second == v) for (int x : a) nb.emplace_back(e.first, x);
            }
            if (nb.size() != 2 || nb[0].first == nb[1].first) continue;
            int u = nb[0].first, t = nb[1].first;
            WeightedGraph r;
            r.n = w.n - 1;
            auto lbl = [v](int x) { return x > v ? x - 1 : x; };
            for (const auto& [e, a] : w.edges) {
                if (e.first == v || e.second == v) continue;
                r.edges[{lbl(e.first), lbl(e.second)}] = a;
            }
            int a = lbl(u), b = lbl(t);
            r.edges[{std::min(a, b), std::max(a, b)}].push_back(nb[0].second + nb[1].second);
            w = std::move(r);
            changed = true;
        }
    }
    return w;
}

} // namespace mgf

#endif // MGF_GRAPHS_HPP
