#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "graphlab/cm.hpp"
#include "graphlab/degree_sequence.hpp"
#include "graphlab/errors.hpp"
#include "graphlab/graph.hpp"
#include "graphlab/hashset.hpp"
#include "graphlab/rng.hpp"

namespace graphlab {

// Havel-Hakimi construction of one simple realization; throws when the
// sequence is not graphical. Start state for the switching chain.
inline std::vector<Edge> havel_hakimi(const DegreeSequence& d) {
    std::set<std::pair<int, Vertex>, std::greater<>> remaining; // (residual degree, vertex)
    for (Vertex v = 0; v < static_cast<Vertex>(d.n()); ++v)
        remaining.insert({d.degrees()[v], v});
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(d.m() / 2));
    std::vector<std::pair<int, Vertex>> taken;
    while (!remaining.empty()) {
        const auto [deg, v] = *remaining.begin();
        remaining.erase(remaining.begin());
        if (deg == 0) break;
        if (static_cast<std::size_t>(deg) > remaining.size())
            throw not_graphical_error("havel_hakimi: not enough remaining vertices");
        taken.clear();
        for (int k = 0; k < deg; ++k) {
            const auto [du, u] = *remaining.begin();
            remaining.erase(remaining.begin());
            if (du == 0) throw not_graphical_error("havel_hakimi: sequence not graphical");
            edges.push_back({v, u});
            taken.push_back({du - 1, u});
        }
        for (const auto& p : taken) remaining.insert(p);
    }
    return edges;
}

// Degree-preserving switching chain over simple graphs: propose two uniform
// oriented edges (a,b), (c,d); if a,b,c,d are distinct, ab and cd present and
// ac, bd absent, replace ab,cd by ac,bd, otherwise stay. The proposal count
// between any two adjacent states is equal in both directions, so the
// stationary distribution is uniform over the (connected) state space.
class SwitchingChain {
public:
    SwitchingChain(const DegreeSequence& d, std::uint64_t seed)
        : rng_(seed), n_(static_cast<Vertex>(d.n())) {
        edges_ = havel_hakimi(d);
        present_ = HashSet64(edges_.size() * 2);
        for (const Edge& e : edges_) present_.insert(edge_key(e.u, e.v));
    }

    // Proposes and (when legal) applies `proposals` switchings.
    void advance(long long proposals) {
        for (long long i = 0; i < proposals; ++i) propose();
    }

    long long accepted() const { return accepted_; }

    MultiGraph graph() const {
        std::vector<Edge> copy = edges_;
        return MultiGraph(n_, std::move(copy));
    }

    Rng& rng() { return rng_; }

private:
    void propose() {
        const std::size_t i = static_cast<std::size_t>(rng_.below(edges_.size()));
        const std::size_t j = static_cast<std::size_t>(rng_.below(edges_.size()));
        if (i == j) return;
        Vertex a = edges_[i].u, b = edges_[i].v;
        Vertex c = edges_[j].u, d = edges_[j].v;
        if (rng_.next_u64() & 1) std::swap(a, b);
        if (rng_.next_u64() & 1) std::swap(c, d);
        if (a == c || a == d || b == c || b == d) return;
        const std::uint64_t ac = edge_key(a, c), bd = edge_key(b, d);
        if (present_.contains(ac) || present_.contains(bd)) return;
        present_.erase(edge_key(a, b));
        present_.erase(edge_key(c, d));
        present_.insert(ac);
        present_.insert(bd);
        edges_[i] = {std::min(a, c), std::max(a, c)};
        edges_[j] = {std::min(b, d), std::max(b, d)};
        ++accepted_;
    }

    Rng rng_;
    Vertex n_;
    std::vector<Edge> edges_;
    HashSet64 present_;
    long long accepted_ = 0;
};

// Exact uniform sampling by rejecting non-simple configuration-model draws.
// Refuses degree sequences whose estimated acceptance rate is below 1e-6.
inline MultiGraph sample_um_rejection(const DegreeSequence& d, long long max_attempts, Rng& rng) {
    const double nu = static_cast<double>(d.sum_squares() - d.m()) / static_cast<double>(d.m());
    const double acceptance = std::exp(-nu / 2.0 - nu * nu / 4.0);
    if (acceptance < 1e-6)
        throw precondition_error(
            "sample_um_rejection: estimated acceptance below 1e-6, use the switching sampler");
    for (long long attempt = 0; attempt < max_attempts; ++attempt) {
        MultiGraph g = sample_cm(d, rng);
        if (g.is_simple()) return g;
    }
    throw attempts_exhausted_error("sample_um_rejection: no simple graph in " +
                                   std::to_string(max_attempts) + " attempts");
}

// MCMC sampling via the switching chain, burn_in proposed moves from a
// Havel-Hakimi start.
inline MultiGraph sample_um_switching(const DegreeSequence& d, long long burn_in,
                                      std::uint64_t seed) {
    SwitchingChain chain(d, seed);
    chain.advance(burn_in);
    return chain.graph();
}

struct UmStep {
    bool restart = false;
    Vertex vertex = 0;   // w_{t+1}
    long long x = 0;     // X_{t+1} = |E(V_{t+1}, outside)|
    long long m_t = 0;   // M_{t+1} = sum of degrees outside V_{t+1}
    long long l_t = 0;   // degree-1 vertices outside V_{t+1}
    int eta = 0;         // d_{w_{t+1}} - 2
    double z = 0.0;      // Z_{t+1}
};

struct UmTrace {
    std::vector<Vertex> v0;
    long long x0 = 0;
    double z0 = 0.0;             // 2 |Q0| T
    double t_threshold = 0.0;    // T = m0/|Q0|
    long long cap = 0;           // gamma*T + 1ceiling cap on tau_Z
    std::vector<UmStep> steps;
    std::optional<long long> tau_x; // first t with X_t = 0
    std::optional<long long> tau_z; // min(first t with Z_t <= 0, cap); empty if sweep ended first
    long long sum_v0_degrees = 0;
};

inline constexpr int kGammaDefault = 80;

// Vertex-by-vertex exploration of a fixed simple graph from V0 = S + {v},
// where S is the greedy certificate set. Advances the dominating process
// Z_t = 2|Q0|T + sum eta_i alongside, and runs until Z hits 0, the cap
// gamma*T+1 is reached, or every vertex is explored. Adjacency lists are
// shuffled once up front, which realizes the uniform edge-order permutations.
inline UmTrace explore_um(const MultiGraph& g, const DegreeSequence& d, double m0, double q0,
                          Vertex v, Rng& rng, int gamma = kGammaDefault) {
    const auto cert = d.subcritical_certificate(m0, q0);
    if (!cert.valid)
        throw precondition_error("explore_um: (m0, Q0) certificate invalid for this sequence");
    const Vertex n = g.n_vertices();
    if (v >= n) throw precondition_error("explore_um: v out of range");

    // Adjacency lists with per-vertex shuffled order.
    std::vector<std::vector<Vertex>> adj(n);
    for (const Edge& e : g.edges()) {
        adj[e.u].push_back(e.v);
        if (e.u != e.v) adj[e.v].push_back(e.u);
    }
    for (auto& list : adj) rng.shuffle(list);

    UmTrace trace;
    const double abs_q0 = std::fabs(q0);
    if (abs_q0 > 0.0) {
        trace.t_threshold = m0 / abs_q0;
        trace.z0 = 2.0 * abs_q0 * trace.t_threshold;
        const double cap_d = std::ceil(static_cast<double>(gamma) * trace.t_threshold) + 1.0;
        trace.cap = cap_d < 1e15 ? static_cast<long long>(cap_d)
                                 : std::numeric_limits<long long>::max() / 2;
    } else {
        // Q0 = 0: T is infinite and the gamma*T cap never binds; Z0 = 2 m0 is
        // the 2|Q0|T limit.
        trace.t_threshold = std::numeric_limits<double>::infinity();
        trace.z0 = 2.0 * m0;
        trace.cap = std::numeric_limits<long long>::max() / 2;
    }

    std::vector<std::uint8_t> inside(n, 0);
    // Greedy certificate set: the cert.set_size largest-degree vertices.
    // Degrees are sorted ascending in d, so these are the last indexes; the
    // graph is expected to use the same vertex order as the sequence.
    std::vector<Vertex> v0;
    for (long long i = 0; i < cert.set_size; ++i)
        v0.push_back(static_cast<Vertex>(d.n() - 1 - i));
    if (std::find(v0.begin(), v0.end(), v) == v0.end()) v0.push_back(v);
    for (const Vertex u : v0) inside[u] = 1;
    trace.v0 = v0;

    const auto& degs = d.degrees();
    long long m_out = 0, l_out = 0;
    long long x = 0;
    for (Vertex u = 0; u < n; ++u) {
        if (inside[u]) {
            trace.sum_v0_degrees += degs[u];
            continue;
        }
        m_out += degs[u];
        if (degs[u] == 1) ++l_out;
    }
    std::vector<long long> boundary(n, 0); // per inside vertex: edges to outside
    for (const Edge& e : g.edges()) {
        if (inside[e.u] != inside[e.v]) {
            ++x;
            ++boundary[inside[e.u] ? e.u : e.v];
        }
    }
    trace.x0 = x;

    std::set<Vertex> active; // inside vertices with boundary edges
    for (const Vertex u : v0)
        if (boundary[u] > 0) active.insert(u);
    std::vector<std::size_t> cursor(n, 0);

    // Restart sampling: pick a uniform stub, reroll while its vertex is
    // already explored. M_t >= m/3 along relevant time ranges keeps the
    // expected reroll count O(1).
    std::vector<Vertex> stub_vertex;
    stub_vertex.reserve(static_cast<std::size_t>(d.m()));
    for (Vertex u = 0; u < n; ++u)
        for (int k = 0; k < degs[u]; ++k) stub_vertex.push_back(u);

    double z = trace.z0;
    long long explored_count = static_cast<long long>(v0.size());
    if (x == 0) trace.tau_x = 0;

    while (static_cast<long long>(trace.steps.size()) < trace.cap &&
           explored_count < static_cast<long long>(n)) {
        UmStep rec;
        Vertex w = 0;
        if (x == 0) {
            do {
                w = stub_vertex[static_cast<std::size_t>(rng.below(stub_vertex.size()))];
            } while (inside[w]);
            rec.restart = true;
        } else {
            const Vertex vt = *active.begin();
            auto& list = adj[vt];
            std::size_t& cur = cursor[vt];
            while (cur < list.size() && inside[list[cur]]) ++cur;
            if (cur >= list.size())
                throw error("explore_um: active vertex has no boundary edge (inconsistency)");
            w = list[cur];
        }
        // Reveal w: every edge from w to the inside becomes internal, the rest
        // extend the boundary.
        long long to_inside = 0;
        for (const Vertex z_nb : adj[w]) {
            if (inside[z_nb]) {
                ++to_inside;
                if (--boundary[z_nb] == 0) active.erase(z_nb);
            }
        }
        inside[w] = 1;
        ++explored_count;
        boundary[w] = degs[w] - to_inside;
        if (boundary[w] > 0) active.insert(w);
        x += degs[w] - 2 * to_inside;
        m_out -= degs[w];
        if (degs[w] == 1) --l_out;

        rec.vertex = w;
        rec.eta = static_cast<int>(degs[w]) - 2;
        z += rec.eta;
        rec.x = x;
        rec.m_t = m_out;
        rec.l_t = l_out;
        rec.z = z;
        trace.steps.push_back(rec);

        const long long t_now = static_cast<long long>(trace.steps.size());
        if (x == 0 && !trace.tau_x) trace.tau_x = t_now;
        if (z <= 0.0 && !trace.tau_z) {
            trace.tau_z = t_now;
            break;
        }
    }
    if (!trace.tau_z && static_cast<long long>(trace.steps.size()) >= trace.cap)
        trace.tau_z = trace.cap;
    return trace;
}

struct MomentCheckRow {
    long long t = 0;
    double eta_mean = 0.0;
    double eta_mean_se = 0.0;   // standard error
    double eta_sq_mean = 0.0;
    double eta_sq_mean_se = 0.0;
    double q0_half = 0.0;       // bound on the mean
    double four_r = 0.0;        // bound on the second moment
    bool mean_ok = false;       // eta_mean <= Q0/2 + 3 se
    bool sq_ok = false;         // eta_sq_mean <= 4R + 3 se
    // Degree-1 discovery rate against its predicted value.
    double deg1_rate = 0.0;
    double deg1_pred = 0.0;
    bool deg1_ok = false;       // within (1 +- 0.1) of predicted + 3 sigma slack
    long long samples = 0;
};

struct MomentReport {
    std::vector<MomentCheckRow> rows;
    long long violations = 0;
};

// Empirical conditional increment moments at sampled times t <= T over fresh
// uniform-model samples, against the bounds Q0/2 and 4R. Also checks the
// degree-1 discovery probability against (1 +- 0.1) of its predicted value.
inline MomentReport increment_moment_check(const DegreeSequence& d, double m0, double q0,
                                           long long trials, std::uint64_t seed,
                                           long long burn_in = -1, int time_points = 20) {
    const auto cert = d.subcritical_certificate(m0, q0);
    if (!cert.valid) throw precondition_error("increment_moment_check: invalid certificate");
    if (burn_in < 0) burn_in = 20 * d.m();
    const double T = cert.t_value;
    const long long t_max = std::max<long long>(1, static_cast<long long>(T));
    std::vector<long long> ts;
    for (int i = 1; i <= time_points; ++i) {
        const long long t = t_max * i / time_points;
        if (t >= 1 && (ts.empty() || t != ts.back())) ts.push_back(t);
    }

    struct Acc {
        double eta = 0, eta2 = 0, eta4 = 0;
        double deg1 = 0, pred = 0;
        long long count = 0;
    };
    std::vector<Acc> acc(ts.size());

    SwitchingChain chain(d, seed);
    chain.advance(burn_in);
    for (long long trial = 0; trial < trials; ++trial) {
        if (trial > 0) chain.advance(2 * d.m());
        const MultiGraph g = chain.graph();
        Rng rng = Rng::for_trial(seed ^ 0x5b5b5b5bULL, static_cast<std::uint64_t>(trial));
        const Vertex v = static_cast<Vertex>(rng.below(g.n_vertices()));
        const UmTrace trace = explore_um(g, d, m0, q0, v, rng);
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const long long t = ts[k];
            // Conditional quantities at time t use the state after step t-1
            // (F_t-measurable) and the discovery at step t.
            if (t >= static_cast<long long>(trace.steps.size())) continue;
            const UmStep& prev = trace.steps[static_cast<std::size_t>(t - 1)];
            const UmStep& st = trace.steps[static_cast<std::size_t>(t)];
            const double eta = st.eta;
            acc[k].eta += eta;
            acc[k].eta2 += eta * eta;
            acc[k].eta4 += eta * eta * eta * eta;
            acc[k].deg1 += (st.eta == -1) ? 1.0 : 0.0;
            acc[k].pred += prev.m_t > 0
                               ? static_cast<double>(prev.l_t) / static_cast<double>(prev.m_t)
                               : 0.0;
            ++acc[k].count;
        }
    }

    MomentReport report;
    const double r = d.r_value();
    for (std::size_t k = 0; k < ts.size(); ++k) {
        if (acc[k].count < 2) continue;
        MomentCheckRow row;
        row.t = ts[k];
        row.samples = acc[k].count;
        const double cnt = static_cast<double>(acc[k].count);
        row.eta_mean = acc[k].eta / cnt;
        row.eta_sq_mean = acc[k].eta2 / cnt;
        const double var_eta = std::max(0.0, acc[k].eta2 / cnt - row.eta_mean * row.eta_mean);
        const double var_eta2 =
            std::max(0.0, acc[k].eta4 / cnt - row.eta_sq_mean * row.eta_sq_mean);
        row.eta_mean_se = std::sqrt(var_eta / cnt);
        row.eta_sq_mean_se = std::sqrt(var_eta2 / cnt);
        row.q0_half = q0 / 2.0;
        row.four_r = 4.0 * r;
        row.mean_ok = row.eta_mean <= row.q0_half + 3.0 * row.eta_mean_se;
        row.sq_ok = row.eta_sq_mean <= row.four_r + 3.0 * row.eta_sq_mean_se;
        row.deg1_rate = acc[k].deg1 / cnt;
        row.deg1_pred = acc[k].pred / cnt;
        const double se1 = std::sqrt(row.deg1_pred * std::max(0.0, 1.0 - row.deg1_pred) / cnt);
        row.deg1_ok = row.deg1_rate >= 0.9 * row.deg1_pred - 3.0 * se1 &&
                      row.deg1_rate <= 1.1 * row.deg1_pred + 3.0 * se1;
        if (!row.mean_ok || !row.sq_ok || !row.deg1_ok) ++report.violations;
        report.rows.push_back(row);
    }
    return report;
}

struct TauZTail {
    double fraction_exceeding = 0.0; // empirical P(tau_Z > gamma T)
    double one_over_lambda = 0.0;
    double lambda = 0.0;
    long long trials = 0;
};

// Empirical tail of the dominating process stopping time over uniform starts,
// reported against 1/lambda (the hidden constant is not asserted).
inline TauZTail tau_z_tail(const DegreeSequence& d, double m0, double q0, long long trials,
                           std::uint64_t seed, int gamma = kGammaDefault) {
    const auto cert = d.subcritical_certificate(m0, q0);
    if (!cert.valid) throw precondition_error("tau_z_tail: invalid certificate");
    if (cert.lambda < 10.0)
        throw precondition_error("tau_z_tail: requires lambda >= 10");
    TauZTail out;
    out.lambda = cert.lambda;
    out.one_over_lambda = 1.0 / cert.lambda;
    out.trials = trials;
    const double gamma_t = static_cast<double>(gamma) * cert.t_value;
    long long exceed = 0;
    SwitchingChain chain(d, seed);
    chain.advance(20 * d.m());
    for (long long trial = 0; trial < trials; ++trial) {
        if (trial > 0) chain.advance(2 * d.m());
        const MultiGraph g = chain.graph();
        Rng rng = Rng::for_trial(seed ^ 0x7171717171ULL, static_cast<std::uint64_t>(trial));
        const Vertex v = static_cast<Vertex>(rng.below(g.n_vertices()));
        const UmTrace trace = explore_um(g, d, m0, q0, v, rng, gamma);
        // A sweep that ends with Z still positive is counted as exceeding.
        const bool exceeded = !trace.tau_z.has_value() ||
                              static_cast<double>(*trace.tau_z) > gamma_t;
        if (exceeded) ++exceed;
    }
    out.fraction_exceeding = static_cast<double>(exceed) / static_cast<double>(trials);
    return out;
}

} // namespace graphlab
