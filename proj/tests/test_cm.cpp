#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "graphlab/cm.hpp"
#include "graphlab/stats.hpp"

using namespace graphlab;

namespace {

// Recompute X_t from scratch by replaying the first `upto` trace steps:
// count unmatched stubs incident to explored vertices.
long long recompute_x(const DegreeSequence& d, const ExplorationTrace& trace, long long upto) {
    const auto& degs = d.degrees();
    std::vector<std::uint32_t> offset(degs.size() + 1, 0);
    for (std::size_t v = 0; v < degs.size(); ++v)
        offset[v + 1] = offset[v] + static_cast<std::uint32_t>(degs[v]);
    std::vector<char> explored(degs.size(), 0);
    std::vector<char> matched(offset.back(), 0);
    explored[trace.start] = 1;
    auto vertex_of = [&](std::uint32_t stub) {
        return static_cast<std::size_t>(
            std::upper_bound(offset.begin(), offset.end(), stub) - offset.begin() - 1);
    };
    for (long long t = 0; t < upto; ++t) {
        const CmStep& s = trace.steps[static_cast<std::size_t>(t)];
        if (s.event == CmEvent::Restart) {
            explored[s.vertex] = 1;
        } else {
            matched[s.stub_e] = 1;
            matched[s.stub_f] = 1;
            explored[vertex_of(s.stub_e)] = 1;
            explored[vertex_of(s.stub_f)] = 1;
        }
    }
    long long x = 0;
    for (std::size_t v = 0; v < degs.size(); ++v) {
        if (!explored[v]) continue;
        for (std::uint32_t s = offset[v]; s < offset[v + 1]; ++s)
            if (!matched[s]) ++x;
    }
    return x;
}

} // namespace

TEST(SampleCm, PreservesDegreesExactly) {
    Rng rng(1);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<int> degrees;
        long long sum = 0;
        const long long n = 2 + static_cast<long long>(rng.below(60));
        for (long long i = 0; i < n; ++i) {
            const int d = 1 + static_cast<int>(rng.below(5));
            degrees.push_back(d);
            sum += d;
        }
        if (sum % 2 != 0) degrees.push_back(1);
        const auto d = DegreeSequence::from_degrees(degrees);
        const MultiGraph g = sample_cm(d, rng);
        const auto got = g.degrees();
        for (std::size_t v = 0; v < got.size(); ++v)
            ASSERT_EQ(got[v], d.degrees()[v]) << "vertex " << v;
    }
}

TEST(SampleCm, ForcedOutcomes) {
    Rng rng(2);
    const auto pair = DegreeSequence::from_degrees({1, 1});
    const MultiGraph g = sample_cm(pair, rng);
    ASSERT_EQ(g.edges().size(), 1u);
    EXPECT_EQ(g.edges()[0].u, 0u);
    EXPECT_EQ(g.edges()[0].v, 1u);

    const auto loop = DegreeSequence::from_degrees({2});
    const MultiGraph h = sample_cm(loop, rng);
    ASSERT_EQ(h.edges().size(), 1u);
    EXPECT_EQ(h.edges()[0].u, h.edges()[0].v);
}

TEST(SampleCm, MatchingUniformOnFourStubs) {
    // d = (1,1,1,1): vertex 0's partner is uniform over {1,2,3}.
    const auto d = DegreeSequence::from_counts({{1, 4}});
    const long long n = 100000;
    std::map<Vertex, long long> partner_count;
    for (long long i = 0; i < n; ++i) {
        Rng rng = Rng::for_trial(5150, static_cast<std::uint64_t>(i));
        const MultiGraph g = sample_cm(d, rng);
        for (const Edge& e : g.edges())
            if (e.u == 0) ++partner_count[e.v];
    }
    const double sd = std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / static_cast<double>(n));
    for (Vertex v = 1; v <= 3; ++v)
        EXPECT_NEAR(static_cast<double>(partner_count[v]) / static_cast<double>(n), 1.0 / 3.0,
                    3.0 * sd);
}

TEST(SimpleProbability, SmallEnumerableCases) {
    const auto d4 = DegreeSequence::from_counts({{1, 4}});
    const auto r4 = simple_probability(d4, 2000, 99);
    EXPECT_DOUBLE_EQ(r4.empirical, 1.0); // all 3 matchings are simple
    EXPECT_DOUBLE_EQ(r4.janson_asymptotic, 1.0);

    const auto d22 = DegreeSequence::from_degrees({2, 2});
    const auto r22 = simple_probability(d22, 2000, 99);
    EXPECT_DOUBLE_EQ(r22.empirical, 0.0); // loops or a doubled edge, always

    // paper_formula is exp(-sum d^2 / m) as printed.
    EXPECT_NEAR(r22.paper_formula, std::exp(-2.0), 1e-15);
}

TEST(SimpleProbability, ThreeRegularMatchesJanson) {
    const auto d = DegreeSequence::from_counts({{3, 2000}});
    const auto r = simple_probability(d, 2000, 1234);
    EXPECT_NEAR(r.janson_asymptotic, std::exp(-2.0), 1e-12); // nu = 2 exactly
    const double sd = std::sqrt(r.janson_asymptotic * (1 - r.janson_asymptotic) / 2000.0);
    EXPECT_NEAR(r.empirical, r.janson_asymptotic, 3.0 * sd);
}

TEST(ExploreCm, ForcedTraces) {
    Rng rng(5);
    const auto pair = DegreeSequence::from_degrees({1, 1});
    const auto trace = explore_cm(pair, 0, rng);
    ASSERT_EQ(trace.steps.size(), 1u);
    EXPECT_EQ(trace.steps[0].event, CmEvent::NewVertex);
    EXPECT_EQ(trace.steps[0].x, 0);
    EXPECT_EQ(trace.tau_x, 1);

    const auto loop = DegreeSequence::from_degrees({2});
    const auto ltrace = explore_cm(loop, 0, rng);
    ASSERT_EQ(ltrace.steps.size(), 1u);
    EXPECT_EQ(ltrace.steps[0].event, CmEvent::BackEdge); // a loop is a back edge
    EXPECT_EQ(ltrace.steps[0].x, 0);
    EXPECT_EQ(ltrace.tau_x, 1);
}

TEST(ExploreCm, TraceRecomputationCheckpoints) {
    const auto d = two_point_mix(2000, 1, 3, -0.1);
    for (int rep = 0; rep < 5; ++rep) {
        Rng rng(1000 + rep);
        const auto trace = explore_cm(d, 0, rng);
        Rng pick(33 + rep);
        for (int k = 0; k < 10; ++k) {
            const long long t =
                1 + static_cast<long long>(pick.below(trace.steps.size()));
            ASSERT_EQ(recompute_x(d, trace, t), trace.steps[static_cast<std::size_t>(t - 1)].x)
                << "checkpoint t=" << t;
        }
        // M_t decreases by exactly the consumed half-edges.
        long long pairings = 0;
        for (const CmStep& s : trace.steps) {
            if (s.event != CmEvent::Restart) ++pairings;
            ASSERT_EQ(s.m_t, d.m() - 2 * pairings);
        }
    }
}

TEST(ExploreCm, EpochSizesMatchComponents) {
    const auto d = two_point_mix(500, 1, 3, -0.2);
    Rng rng(77);
    const auto trace = explore_cm(d, 3, rng);
    // Epochs are the maximal step ranges between X = 0 events; each epoch's
    // vertex set is one component (restart vertices open the next epoch).
    std::vector<long long> epoch_sizes;
    long long current = 1; // the start vertex
    for (const CmStep& s : trace.steps) {
        if (s.event == CmEvent::NewVertex || s.event == CmEvent::Restart) ++current;
        if (s.x == 0) {
            epoch_sizes.push_back(current);
            current = 0;
        }
    }
    std::sort(epoch_sizes.begin(), epoch_sizes.end(), std::greater<>());
    const MultiGraph g(static_cast<Vertex>(d.n()), trace.edges);
    EXPECT_EQ(epoch_sizes, g.components().sizes);
}

TEST(ExploreCm, IncrementMeanMatchesQtUnderResampling) {
    // Conditional on a history with X_t > 0, the mean one-step increment over
    // resampled continuations tracks Q_t.
    const auto d = two_point_mix(30000, 1, 3, -0.1);
    CmExplorer explorer(d, 0);
    Rng rng(4242);
    for (int t = 0; t < 60; ++t) {
        if (explorer.x() == 0) explorer.step(rng);
        explorer.step(rng);
    }
    ASSERT_GT(explorer.x(), 0);
    const double q_t = explorer.q_t();
    const double r_t = explorer.r_t();
    const long long n_resample = 100000;
    double sum = 0.0;
    for (long long i = 0; i < n_resample; ++i) {
        CmExplorer copy = explorer.clone();
        Rng fresh = Rng::for_trial(987, static_cast<std::uint64_t>(i));
        const long long x_before = copy.x();
        copy.step(fresh);
        sum += static_cast<double>(copy.x() - x_before);
    }
    const double mean = sum / static_cast<double>(n_resample);
    const double sd = std::sqrt(r_t / static_cast<double>(n_resample));
    EXPECT_NEAR(mean, q_t, 3.0 * sd);
}

TEST(L1Statistics, ForcedAndBoundedCases) {
    const auto pairs = DegreeSequence::from_counts({{1, 20}});
    const auto stats = l1_statistics(pairs, 50, 7);
    for (const long long l1 : stats.l1) EXPECT_EQ(l1, 2);

    const auto cycles = DegreeSequence::from_counts({{2, 10}});
    const auto cstats = l1_statistics(cycles, 50, 7);
    for (const long long l1 : cstats.l1) {
        EXPECT_GE(l1, 1);
        EXPECT_LE(l1, 10);
    }
}

TEST(L1Statistics, SeedExchangeability) {
    // Two independent seeds draw from the same L1 distribution (the sampler
    // only sees the sorted sequence, so equal-degree relabelings coincide).
    const auto d = two_point_mix(1000, 1, 3, -0.15);
    const auto a = l1_statistics(d, 10000, 1111);
    const auto b = l1_statistics(d, 10000, 2222);
    std::vector<double> xa(a.l1.begin(), a.l1.end()), xb(b.l1.begin(), b.l1.end());
    const double dist = ks_distance(xa, xb);
    EXPECT_GT(ks_p_value(dist, xa.size(), xb.size()), 0.01);
}
