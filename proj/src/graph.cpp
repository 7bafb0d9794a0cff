#include "trigibbs/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace trigibbs {

Graph::Graph(int n) : n_(n), adj_(n) {
    if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
}

bool Graph::has_edge(int u, int v) const {
    const auto& a = adj_[u];
    return std::binary_search(a.begin(), a.end(), v);
}

int Graph::max_degree() const {
    int d = 0;
    for (const auto& a : adj_) d = std::max(d, static_cast<int>(a.size()));
    return d;
}

int Graph::min_degree() const {
    if (n_ == 0) return 0;
    int d = n_;
    for (const auto& a : adj_) d = std::min(d, static_cast<int>(a.size()));
    return d;
}

int Graph::codegree(int u, int v) const {
    const auto& a = adj_[u];
    const auto& b = adj_[v];
    int count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib)
            ++ia;
        else if (*ib < *ia)
            ++ib;
        else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

Graph::ToggleDelta Graph::toggle_edge(int u, int v) {
    if (u == v) throw std::invalid_argument("toggle_edge: self-loop");
    int d = codegree(u, v);
    auto& a = adj_[u];
    auto& b = adj_[v];
    auto it = std::lower_bound(a.begin(), a.end(), v);
    if (it != a.end() && *it == v) {
        a.erase(it);
        b.erase(std::lower_bound(b.begin(), b.end(), u));
        --edges_;
        triangles_ -= d;
        return {-1, -d};
    }
    a.insert(it, v);
    b.insert(std::lower_bound(b.begin(), b.end(), u), u);
    ++edges_;
    triangles_ += d;
    return {+1, +d};
}

void Graph::set_edge(int u, int v, bool present) {
    if (has_edge(u, v) != present) toggle_edge(u, v);
}

Graph Graph::from_edge_list(std::istream& in) {
    int n = -1;
    std::int64_t m = -1;
    if (!(in >> n >> m)) throw std::invalid_argument("edge list: bad header");
    if (n < 0 || m < 0) throw std::invalid_argument("edge list: bad header values");
    Graph g(n);
    for (std::int64_t i = 0; i < m; ++i) {
        int u, v;
        if (!(in >> u >> v)) throw std::invalid_argument("edge list: truncated");
        if (u < 0 || v < 0 || u >= n || v >= n || u == v)
            throw std::invalid_argument("edge list: invalid endpoint");
        if (g.has_edge(u, v)) throw std::invalid_argument("edge list: duplicate edge");
        g.toggle_edge(u, v);
    }
    return g;
}

void Graph::to_edge_list(std::ostream& out) const {
    out << n_ << ' ' << edges_ << '\n';
    for (int u = 0; u < n_; ++u)
        for (int v : adj_[u])
            if (u < v) out << u << ' ' << v << '\n';
}

Graph complete_graph(int n) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.toggle_edge(u, v);
    return g;
}

Graph complete_bipartite(int a, int b) {
    Graph g(a + b);
    for (int u = 0; u < a; ++u)
        for (int v = a; v < a + b; ++v) g.toggle_edge(u, v);
    return g;
}

Graph cycle_graph(int n) {
    if (n < 3) return path_graph(n);
    Graph g(n);
    for (int u = 0; u < n; ++u) g.toggle_edge(u, (u + 1) % n);
    return g;
}

Graph path_graph(int n) {
    Graph g(n);
    for (int u = 0; u + 1 < n; ++u) g.toggle_edge(u, u + 1);
    return g;
}

}  // namespace trigibbs
