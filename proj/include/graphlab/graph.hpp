#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "graphlab/errors.hpp"

namespace graphlab {

using Vertex = std::uint32_t;

struct Edge {
    Vertex u = 0;
    Vertex v = 0; // canonical: u <= v; a loop has u == v
};

struct ComponentSummary {
    std::vector<long long> sizes; // sorted descending
    long long largest = 0;        // L1
    long long count = 0;
};

// Multigraph on [0, n): loops and parallel edges allowed. A loop contributes 2
// to its endpoint's degree but counts as a single edge. Immutable once built.
class MultiGraph {
public:
    MultiGraph(Vertex n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
        for (Edge& e : edges_) {
            if (e.u > e.v) std::swap(e.u, e.v);
            if (e.v >= n_) throw precondition_error("MultiGraph: vertex id out of range");
        }
    }

    Vertex n_vertices() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }

    std::vector<long long> degrees() const {
        std::vector<long long> deg(n_, 0);
        for (const Edge& e : edges_) {
            deg[e.u] += 1;
            deg[e.v] += 1; // a loop hits both branches: degree 2
        }
        return deg;
    }

    bool is_simple() const {
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(edges_.size() * 2);
        for (const Edge& e : edges_) {
            if (e.u == e.v) return false;
            const std::uint64_t key =
                (static_cast<std::uint64_t>(e.u) << 32) | static_cast<std::uint64_t>(e.v);
            if (!seen.insert(key).second) return false;
        }
        return true;
    }

    ComponentSummary components() const {
        DisjointSets ds(n_);
        for (const Edge& e : edges_) ds.unite(e.u, e.v);
        std::vector<long long> size_of_root(n_, 0);
        for (Vertex v = 0; v < n_; ++v) ++size_of_root[ds.find(v)];
        ComponentSummary cs;
        for (Vertex v = 0; v < n_; ++v)
            if (size_of_root[v] > 0) cs.sizes.push_back(size_of_root[v]);
        std::sort(cs.sizes.begin(), cs.sizes.end(), std::greater<>());
        cs.count = static_cast<long long>(cs.sizes.size());
        cs.largest = cs.sizes.empty() ? 0 : cs.sizes.front();
        return cs;
    }

    // Number of components with exactly s vertices and s-1 edges (multiplicity
    // counted, so components carrying loops or parallel edges never qualify).
    long long count_isolated_trees(long long s) const {
        if (s < 1) throw precondition_error("count_isolated_trees: s must be positive");
        DisjointSets ds(n_);
        for (const Edge& e : edges_) ds.unite(e.u, e.v);
        std::vector<long long> vertices_of_root(n_, 0), edges_of_root(n_, 0);
        for (Vertex v = 0; v < n_; ++v) ++vertices_of_root[ds.find(v)];
        for (const Edge& e : edges_) ++edges_of_root[ds.find(e.u)];
        long long trees = 0;
        for (Vertex v = 0; v < n_; ++v)
            if (vertices_of_root[v] == s && edges_of_root[v] == s - 1) ++trees;
        return trees;
    }

    // Sub-multigraph induced by `vertices` (relabelled 0..k-1 in input order).
    MultiGraph induced(const std::vector<Vertex>& vertices) const {
        std::vector<Vertex> label(n_, n_);
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (vertices[i] >= n_) throw precondition_error("induced: vertex id out of range");
            label[vertices[i]] = static_cast<Vertex>(i);
        }
        std::vector<Edge> kept;
        for (const Edge& e : edges_)
            if (label[e.u] != n_ && label[e.v] != n_) kept.push_back({label[e.u], label[e.v]});
        return MultiGraph(static_cast<Vertex>(vertices.size()), std::move(kept));
    }

    // Edge-list text format: one "u v" pair per line, 0-based; loops as "u u".
    void write_edge_list(std::ostream& os) const {
        for (const Edge& e : edges_) os << e.u << ' ' << e.v << '\n';
    }

    static MultiGraph read_edge_list(std::istream& is, Vertex n_hint = 0) {
        std::vector<Edge> edges;
        Vertex max_id = 0;
        std::string line;
        while (std::getline(is, line)) {
            std::istringstream ls(line);
            long long u, v;
            if (!(ls >> u >> v)) continue;
            if (u < 0 || v < 0) throw precondition_error("read_edge_list: negative vertex id");
            edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
            max_id = std::max({max_id, static_cast<Vertex>(u), static_cast<Vertex>(v)});
        }
        const Vertex n = std::max(n_hint, edges.empty() ? n_hint : max_id + 1);
        return MultiGraph(n, std::move(edges));
    }

private:
    // Union-find with path halving and union by size.
    class DisjointSets {
    public:
        explicit DisjointSets(Vertex n) : parent_(n), size_(n, 1) {
            std::iota(parent_.begin(), parent_.end(), 0);
        }
        Vertex find(Vertex v) const {
            while (parent_[v] != v) {
                parent_[v] = parent_[parent_[v]];
                v = parent_[v];
            }
            return v;
        }
        void unite(Vertex a, Vertex b) {
            a = find(a);
            b = find(b);
            if (a == b) return;
            if (size_[a] < size_[b]) std::swap(a, b);
            parent_[b] = a;
            size_[a] += size_[b];
        }

    private:
        mutable std::vector<Vertex> parent_;
        std::vector<Vertex> size_;
    };

    Vertex n_;
    std::vector<Edge> edges_;
};

} // namespace graphlab
