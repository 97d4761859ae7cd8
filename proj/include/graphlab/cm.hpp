#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "graphlab/degree_sequence.hpp"
#include "graphlab/errors.hpp"
#include "graphlab/graph.hpp"
#include "graphlab/hashset.hpp"
#include "graphlab/rng.hpp"

namespace graphlab {

// Configuration model: pair the m half-edges (stubs) uniformly at random via a
// partial Fisher-Yates shuffle of the stub array.
inline MultiGraph sample_cm(const DegreeSequence& d, Rng& rng) {
    const long long m = d.m();
    std::vector<Vertex> stub_vertex(static_cast<std::size_t>(m));
    std::size_t pos = 0;
    for (Vertex v = 0; v < static_cast<Vertex>(d.n()); ++v)
        for (int k = 0; k < d.degrees()[v]; ++k) stub_vertex[pos++] = v;

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m / 2));
    for (std::size_t i = 0; i < stub_vertex.size(); i += 2) {
        const std::size_t j = i + 1 + static_cast<std::size_t>(rng.below(stub_vertex.size() - i - 1));
        std::swap(stub_vertex[i + 1], stub_vertex[j]);
        edges.push_back({stub_vertex[i], stub_vertex[i + 1]});
    }
    return MultiGraph(static_cast<Vertex>(d.n()), std::move(edges));
}

struct SimpleProbability {
    double empirical = 0.0;
    double paper_formula = 0.0;     // exp(-(1/m) sum d_i^2), as printed
    double janson_asymptotic = 0.0; // exp(-nu/2 - nu^2/4), nu = sum d(d-1)/m
    long long trials = 0;
    long long simple_count = 0;
};

inline SimpleProbability simple_probability(const DegreeSequence& d, long long trials,
                                            std::uint64_t seed) {
    if (trials < 1) throw precondition_error("simple_probability: trials must be >= 1");
    SimpleProbability out;
    out.trials = trials;
    out.paper_formula =
        std::exp(-static_cast<double>(d.sum_squares()) / static_cast<double>(d.m()));
    const double nu = static_cast<double>(d.sum_squares() - d.m()) / static_cast<double>(d.m());
    out.janson_asymptotic = std::exp(-nu / 2.0 - nu * nu / 4.0);
    for (long long trial = 0; trial < trials; ++trial) {
        Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(trial));
        if (sample_cm(d, rng).is_simple()) ++out.simple_count;
    }
    out.empirical = static_cast<double>(out.simple_count) / static_cast<double>(trials);
    return out;
}

enum class CmEvent : std::uint8_t { NewVertex, BackEdge, Restart };

struct CmStep {
    CmEvent event = CmEvent::NewVertex;
    Vertex vertex = 0;          // vertex discovered (or restarted at); back edge: f's vertex
    std::uint32_t stub_e = 0;   // consumed stubs (pairing steps only)
    std::uint32_t stub_f = 0;
    long long x = 0;            // X_t after the step
    long long m_t = 0;          // M_t after the step
    double q_t = 0.0;           // (1/(M_t-1)) sum over unexplored of d(d-2)
    double r_t = 0.0;
};

struct ExplorationTrace {
    Vertex start = 0;
    std::vector<CmStep> steps;
    long long tau_x = -1; // first t with X_t = 0
    std::vector<Edge> edges;
};

// Edge-by-edge exploration of the configuration model. The pairing is built
// lazily: each step matches the smallest unmatched half-edge incident to the
// explored set ("smallest" in the (vertex, within-vertex) stub order) with a
// uniform unmatched half-edge. Stepping is exposed so tests can clone a state
// and resample continuations.
class CmExplorer {
public:
    CmExplorer(const DegreeSequence& d, Vertex start) : degrees_(&d) {
        const long long n = d.n();
        if (start >= n) throw precondition_error("CmExplorer: start out of range");
        const long long m = d.m();
        stub_vertex_.resize(static_cast<std::size_t>(m));
        stub_offset_.resize(static_cast<std::size_t>(n) + 1, 0);
        for (std::size_t v = 0; v < static_cast<std::size_t>(n); ++v)
            stub_offset_[v + 1] = stub_offset_[v] + static_cast<std::uint32_t>(d.degrees()[v]);
        for (Vertex v = 0; v < static_cast<Vertex>(n); ++v)
            for (std::uint32_t s = stub_offset_[v]; s < stub_offset_[v + 1]; ++s)
                stub_vertex_[s] = v;

        pool_.resize(static_cast<std::size_t>(m));
        pool_pos_.resize(static_cast<std::size_t>(m));
        for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(m); ++s) {
            pool_[s] = s;
            pool_pos_[s] = s;
        }
        matched_.assign(static_cast<std::size_t>(m), 0);
        explored_.assign(static_cast<std::size_t>(n), 0);

        sum_dd2_out_ = 0;
        sum_dd2sq_out_ = 0;
        for (const long long deg : d.degrees()) {
            sum_dd2_out_ += deg * (deg - 2);
            sum_dd2sq_out_ += deg * (deg - 2) * (deg - 2);
        }
        explore_vertex(start);
        x_ = d.degrees()[start];
        trace_.start = start;
    }

    bool finished() const { return pool_.empty(); }
    long long x() const { return x_; }
    long long m_t() const { return static_cast<long long>(pool_.size()); }
    long long t() const { return static_cast<long long>(trace_.steps.size()); }

    double q_t() const {
        const long long denom = m_t() - 1;
        return denom > 0 ? static_cast<double>(sum_dd2_out_) / static_cast<double>(denom) : 0.0;
    }
    double r_t() const {
        const long long denom = m_t() - 1;
        return denom > 0 ? static_cast<double>(sum_dd2sq_out_) / static_cast<double>(denom) : 0.0;
    }

    const ExplorationTrace& trace() const { return trace_; }
    ExplorationTrace take_trace() { return std::move(trace_); }
    const std::vector<std::uint8_t>& explored() const { return explored_; }

    CmExplorer clone() const { return *this; }

    // One exploration step; returns the recorded step.
    CmStep step(Rng& rng) {
        if (finished()) throw precondition_error("CmExplorer: already finished");
        CmStep rec;
        if (x_ == 0) {
            // Restart: a uniform unmatched half-edge picks the next start
            // vertex, i.e. proportional to remaining stubs. No pairing is
            // consumed.
            const std::uint32_t stub = pool_[static_cast<std::size_t>(rng.below(pool_.size()))];
            const Vertex u = stub_vertex_[stub];
            explore_vertex(u);
            x_ = degrees_->degrees()[u];
            rec.event = CmEvent::Restart;
            rec.vertex = u;
        } else {
            const std::uint32_t e = smallest_frontier_stub();
            remove_from_pool(e);
            matched_[e] = 1;
            const std::uint32_t f = pool_[static_cast<std::size_t>(rng.below(pool_.size()))];
            remove_from_pool(f);
            matched_[f] = 1;
            const Vertex u = stub_vertex_[f];
            trace_.edges.push_back({stub_vertex_[e], u});
            rec.stub_e = e;
            rec.stub_f = f;
            rec.vertex = u;
            if (!explored_[u]) {
                explore_vertex(u);
                x_ += degrees_->degrees()[u] - 2;
                rec.event = CmEvent::NewVertex;
            } else {
                x_ -= 2;
                rec.event = CmEvent::BackEdge;
            }
        }
        rec.x = x_;
        rec.m_t = m_t();
        rec.q_t = q_t();
        rec.r_t = r_t();
        trace_.steps.push_back(rec);
        if (x_ == 0 && trace_.tau_x < 0) trace_.tau_x = t();
        return rec;
    }

    // Runs the process to completion (all stubs matched, every component
    // swept).
    void run(Rng& rng) {
        while (!finished()) step(rng);
    }

private:
    void explore_vertex(Vertex v) {
        explored_[v] = 1;
        const long long deg = degrees_->degrees()[v];
        sum_dd2_out_ -= deg * (deg - 2);
        sum_dd2sq_out_ -= deg * (deg - 2) * (deg - 2);
        for (std::uint32_t s = stub_offset_[v]; s < stub_offset_[v + 1]; ++s)
            frontier_.push(s);
    }

    std::uint32_t smallest_frontier_stub() {
        while (!frontier_.empty() && matched_[frontier_.top()]) frontier_.pop();
        if (frontier_.empty())
            throw error("CmExplorer: frontier empty with X > 0 (internal inconsistency)");
        const std::uint32_t s = frontier_.top();
        frontier_.pop();
        return s;
    }

    void remove_from_pool(std::uint32_t stub) {
        const std::uint32_t at = pool_pos_[stub];
        const std::uint32_t last = pool_.back();
        pool_[at] = last;
        pool_pos_[last] = at;
        pool_.pop_back();
    }

    const DegreeSequence* degrees_;
    std::vector<Vertex> stub_vertex_;
    std::vector<std::uint32_t> stub_offset_;
    std::vector<std::uint32_t> pool_;     // unmatched stubs
    std::vector<std::uint32_t> pool_pos_; // stub -> index in pool_
    std::vector<std::uint8_t> matched_;
    std::vector<std::uint8_t> explored_;
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> frontier_;
    long long x_ = 0;
    long long sum_dd2_out_ = 0;
    long long sum_dd2sq_out_ = 0;
    ExplorationTrace trace_;
};

inline ExplorationTrace explore_cm(const DegreeSequence& d, Vertex start, Rng& rng) {
    CmExplorer explorer(d, start);
    explorer.run(rng);
    return explorer.take_trace();
}

struct L1Sample {
    std::vector<long long> l1;
    std::vector<std::uint8_t> simple;
    double mean_l1 = 0.0;
};

// Independent CM samples; L1 via union-find components plus a simplicity flag
// per trial (for conditioning on simple outcomes).
inline L1Sample l1_statistics(const DegreeSequence& d, long long trials, std::uint64_t seed) {
    if (trials < 1) throw precondition_error("l1_statistics: trials must be >= 1");
    L1Sample out;
    out.l1.resize(static_cast<std::size_t>(trials));
    out.simple.resize(static_cast<std::size_t>(trials));
    double sum = 0.0;
    for (long long trial = 0; trial < trials; ++trial) {
        Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(trial));
        const MultiGraph g = sample_cm(d, rng);
        out.l1[static_cast<std::size_t>(trial)] = g.components().largest;
        out.simple[static_cast<std::size_t>(trial)] = g.is_simple() ? 1 : 0;
        sum += static_cast<double>(out.l1[static_cast<std::size_t>(trial)]);
    }
    out.mean_l1 = sum / static_cast<double>(trials);
    return out;
}

} // namespace graphlab
