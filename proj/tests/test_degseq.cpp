#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cmath>
#include <sstream>

#include "graphlab/degree_sequence.hpp"
#include "graphlab/rng.hpp"

using namespace graphlab;

namespace {

DegreeSequence mix_1_3(long long ones, long long threes) {
    return DegreeSequence::from_counts({{1, ones}, {3, threes}});
}

// Half the draws lean on degree-1 vertices (Q < 0 typical), half are uniform
// over 1..6 (Q > 0 typical), so both regimes show up.
DegreeSequence random_sequence(Rng& rng, long long n) {
    const bool heavy = rng.below(2) == 0;
    std::vector<int> degrees;
    long long sum = 0;
    for (long long i = 0; i < n; ++i) {
        int d;
        if (heavy) {
            d = 1 + static_cast<int>(rng.below(6));
        } else {
            const std::uint64_t roll = rng.below(20);
            d = roll < 15 ? 1 : roll < 18 ? 2 : 3;
        }
        degrees.push_back(d);
        sum += d;
    }
    if (sum % 2 != 0) {
        degrees.push_back(1);
    }
    return DegreeSequence::from_degrees(degrees);
}

} // namespace

TEST(DegreeSequence, ValidationAndCachedScalars) {
    EXPECT_THROW(DegreeSequence::from_degrees({}), precondition_error);
    EXPECT_THROW(DegreeSequence::from_degrees({0, 2}), precondition_error);
    EXPECT_THROW(DegreeSequence::from_degrees({1, 1, 1}), precondition_error); // odd sum

    const auto d = DegreeSequence::from_degrees({3, 1, 1, 1, 1, 1, 1, 1});
    EXPECT_EQ(d.n(), 8);
    EXPECT_EQ(d.m(), 10);
    EXPECT_EQ(d.max_degree(), 3);
    EXPECT_EQ(d.n1(), 7);
    EXPECT_TRUE(std::is_sorted(d.degrees().begin(), d.degrees().end()));
}

TEST(DegreeSequence, QAndRValues) {
    const auto all2 = DegreeSequence::from_counts({{2, 9}});
    EXPECT_DOUBLE_EQ(all2.q_value(), 0.0);
    EXPECT_DOUBLE_EQ(all2.r_value(), 0.0);

    const auto all1 = DegreeSequence::from_counts({{1, 10}});
    EXPECT_DOUBLE_EQ(all1.q_value(), -1.0);
    EXPECT_DOUBLE_EQ(all1.r_value(), 1.0);

    const auto mix = mix_1_3(7, 1);
    EXPECT_DOUBLE_EQ(mix.q_value(), -0.4);
    EXPECT_DOUBLE_EQ(mix.r_value(), 1.0);
}

TEST(DegreeSequence, IntegerIdentityForQ) {
    // Q m = sum d^2 - 2m, exactly in integers.
    Rng rng(31337);
    for (int rep = 0; rep < 20; ++rep) {
        const auto d = random_sequence(rng, 50 + static_cast<long long>(rng.below(200)));
        EXPECT_EQ(d.q_numerator(), d.sum_squares() - 2 * d.m());
    }
}

TEST(DegreeSequence, LatticeStep) {
    const auto mix13 = mix_1_3(5, 5);
    const auto ls = mix13.lattice_step();
    EXPECT_EQ(ls.step, 2);
    EXPECT_EQ(ls.offset, 1);
    EXPECT_FALSE(ls.degenerate);

    const auto d123 = DegreeSequence::from_degrees({1, 2, 3, 2});
    EXPECT_EQ(d123.lattice_step().step, 1);
    EXPECT_EQ(d123.lattice_step().offset, 0);

    const auto all3 = DegreeSequence::from_counts({{3, 4}});
    EXPECT_TRUE(all3.lattice_step().degenerate);
}

TEST(DegreeSequence, SizeBiasedPmf) {
    const auto mix = mix_1_3(7, 1);
    const auto pmf = mix.size_biased_pmf();
    EXPECT_NEAR(pmf.prob_at(1), 0.7, 1e-15);
    EXPECT_NEAR(pmf.prob_at(3), 0.3, 1e-15);

    const auto all2 = DegreeSequence::from_counts({{2, 6}});
    EXPECT_NEAR(all2.size_biased_pmf().prob_at(2), 1.0, 1e-15);

    const auto two = DegreeSequence::from_degrees({1, 3});
    EXPECT_NEAR(two.size_biased_pmf().prob_at(1), 0.25, 1e-15);
    EXPECT_NEAR(two.size_biased_pmf().prob_at(3), 0.75, 1e-15);

    const auto eta = mix.increment_pmf();
    EXPECT_NEAR(eta.prob_at(-1), 0.7, 1e-15);
    EXPECT_NEAR(eta.prob_at(1), 0.3, 1e-15);

    double total = 0.0;
    for (const Atom& a : pmf.atoms()) total += a.prob;
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(DegreeSequence, SizeBiasedMeanMatchesRationalOracle) {
    // Mean of the size-biased law is sum d^2 / m; verify in exact rationals.
    using rational = boost::rational<boost::multiprecision::cpp_int>;
    const auto d = DegreeSequence::from_degrees({1, 1, 2, 3, 3, 4, 5, 5});
    rational mean(0);
    for (const auto& [k, cnt] : d.distinct())
        mean += rational(k, 1) * rational(static_cast<long long>(k) * cnt, d.m());
    EXPECT_EQ(mean, rational(d.sum_squares(), d.m()));
    EXPECT_NEAR(d.size_biased_pmf().mean(),
                static_cast<double>(d.sum_squares()) / static_cast<double>(d.m()), 1e-12);
}

TEST(DegreeSequence, StarSetExamplesAndMinimality) {
    EXPECT_EQ(DegreeSequence::from_counts({{1, 10}}).star_set().size, 0);
    EXPECT_EQ(DegreeSequence::from_counts({{2, 7}}).star_set().size, 0);

    const auto d = DegreeSequence::from_degrees({1, 1, 1, 1, 3, 5});
    const auto s = d.star_set();
    EXPECT_EQ(s.size, 1);
    EXPECT_EQ(s.degree_sum, 5);

    Rng rng(777);
    for (int rep = 0; rep < 20; ++rep) {
        const auto seq = random_sequence(rng, 100);
        const auto star = seq.star_set();
        if (seq.q_value() <= 0.0) {
            EXPECT_EQ(star.size, 0);
            continue;
        }
        // Residual after removing the |S*| largest degrees is <= 0, and
        // removing one fewer leaves it > 0.
        long long residual = seq.q_numerator();
        const auto& degs = seq.degrees();
        for (long long i = 0; i < star.size; ++i) {
            const long long deg = degs[degs.size() - 1 - static_cast<std::size_t>(i)];
            if (i == star.size - 1) EXPECT_GT(residual, 0);
            residual -= deg * (deg - 2);
        }
        EXPECT_LE(residual, 0);
    }
}

TEST(DegreeSequence, SubcriticalCertificate) {
    const auto all1 = DegreeSequence::from_counts({{1, 10}});
    EXPECT_TRUE(all1.subcritical_certificate(0.0, -1.0).valid);

    const auto all2 = DegreeSequence::from_counts({{2, 8}});
    EXPECT_FALSE(all2.subcritical_certificate(0.0, -0.1).valid);

    const auto d = DegreeSequence::from_degrees({1, 1, 1, 1, 3, 5});
    const auto cert = d.subcritical_certificate(5.0, 0.0);
    EXPECT_TRUE(cert.valid);
    EXPECT_EQ(cert.set_size, 1);
    EXPECT_EQ(cert.set_degree_sum, 5);

    EXPECT_THROW(d.subcritical_certificate(5.0, 0.5), precondition_error);

    // T and lambda definitions.
    const auto mix = mix_1_3(80000, 20000);
    const double q0 = mix.q_value();
    const auto c = mix.subcritical_certificate(500.0, q0);
    EXPECT_TRUE(c.valid);
    EXPECT_NEAR(c.t_value, 500.0 / std::fabs(q0), 1e-9);
    const double expected_lambda = static_cast<double>(mix.n()) * q0 * q0 /
                                   (3.0 * std::fabs(q0) + mix.r_value());
    EXPECT_NEAR(c.lambda, expected_lambda, 1e-9);
}

TEST(DegreeSequence, SubcriticalImpliesMaxDegreeBound) {
    // Q <= 0 implies Delta <= ceil(sqrt(2m)) + 2.
    Rng rng(2024);
    int seen = 0;
    while (seen < 20) {
        const auto d = random_sequence(rng, 30 + static_cast<long long>(rng.below(200)));
        if (d.q_value() > 0.0) continue;
        ++seen;
        const double bound = std::ceil(std::sqrt(2.0 * static_cast<double>(d.m()))) + 2.0;
        EXPECT_LE(static_cast<double>(d.max_degree()), bound);
    }
}

TEST(LowerBoundSequence, ConstructionAndParity) {
    const auto a = lower_bound_sequence(100, 5, 0.5);
    EXPECT_EQ(a.ell, 2);
    EXPECT_EQ(a.sequence.count_of(5), 2);
    EXPECT_EQ(a.sequence.count_of(1), 98);
    EXPECT_NEAR(a.p_star, 0.25, 1e-15);

    const auto big = lower_bound_sequence(1'000'000, 50, 0.5);
    EXPECT_EQ(big.ell, 200);

    // Parity fix appends one degree-1 vertex when the raw sum is odd.
    const auto odd = lower_bound_sequence(101, 5, 0.5);
    EXPECT_EQ(odd.sequence.m() % 2, 0);
    EXPECT_EQ(odd.sequence.count_of(1), 100);

    EXPECT_THROW(lower_bound_sequence(100, 1, 0.5), precondition_error);
    EXPECT_THROW(lower_bound_sequence(20, 5, 0.5), precondition_error);
    EXPECT_THROW(lower_bound_sequence(10'000, 20, 0.999), precondition_error); // ell < 1
}

TEST(LowerBoundSequence, CriticalityFunctionals) {
    // Q = -eps - 2(1-eps)/Delta + O(1/Delta^2) and R = (1-eps)(Delta-2)^2/Delta
    // + O(1), so the +-0.05 window on Q and the [0.9, 1.1] window on
    // R/((1-eps) Delta) need Delta of order 50+; R/Delta needs Delta ~ 100.
    for (const double eps : {0.05, 0.3, 0.5}) {
        for (const int delta : {50, 100}) {
            const auto lbs = lower_bound_sequence(1'000'000, delta, eps);
            const double q = lbs.sequence.q_value();
            EXPECT_GE(q, -eps - 0.05) << "eps=" << eps << " delta=" << delta;
            EXPECT_LE(q, -eps + 0.05) << "eps=" << eps << " delta=" << delta;
            const double r_ratio =
                lbs.sequence.r_value() / ((1.0 - eps) * static_cast<double>(delta));
            EXPECT_GE(r_ratio, 0.9) << "eps=" << eps << " delta=" << delta;
            EXPECT_LE(r_ratio, 1.1) << "eps=" << eps << " delta=" << delta;
            if (eps <= 0.1 && delta >= 100) {
                const double plain = lbs.sequence.r_value() / static_cast<double>(delta);
                EXPECT_GE(plain, 0.9);
                EXPECT_LE(plain, 1.1);
            }
        }
    }
    // At the small-Delta boundary, pin the exact integer identity instead:
    // R m = ell Delta (Delta-2)^2 + n1.
    const auto lbs = lower_bound_sequence(1'000'000, 20, 0.5);
    const long long expected =
        lbs.ell * 20 * 18 * 18 + lbs.sequence.n1();
    EXPECT_EQ(std::llround(lbs.sequence.r_value() * static_cast<double>(lbs.sequence.m())),
              expected);
}

TEST(DegreeSequence, CheckAssumptions) {
    const auto all2 = DegreeSequence::from_counts({{2, 10}});
    EXPECT_FALSE(all2.check_assumptions().non_two_fraction.holds);

    const auto mix = mix_1_3(7, 1);
    const auto rep = mix.check_assumptions();
    EXPECT_TRUE(rep.non_two_fraction.holds);
    EXPECT_NEAR(rep.fourth_moment.value, 11.0, 1e-12);
    EXPECT_FALSE(rep.fourth_moment.holds); // 11 > sqrt(3)

    const auto all1 = DegreeSequence::from_counts({{1, 10}});
    const auto rep1 = all1.check_assumptions();
    EXPECT_TRUE(rep1.non_two_fraction.holds);
    EXPECT_TRUE(rep1.fourth_moment.holds); // E[D^4] = 1 <= 1
}

TEST(DegreeSequence, ParseBothFileFormats) {
    std::istringstream list("3\n1\n1\n1\n# comment\n1\n1\n1\n1\n");
    const auto a = DegreeSequence::parse(list);
    EXPECT_EQ(a.n(), 8);
    EXPECT_EQ(a.max_degree(), 3);

    std::istringstream runs("7 1\n1 3\n");
    const auto b = DegreeSequence::parse(runs);
    EXPECT_EQ(b.n(), 8);
    EXPECT_EQ(b.m(), 10);
    EXPECT_EQ(b.count_of(1), 7);
}

TEST(TwoPointMix, HitsTargetQ) {
    const double target = -std::pow(1e5, -0.25);
    const auto d = two_point_mix(100000, 1, 3, target);
    EXPECT_EQ(d.m() % 2, 0);
    EXPECT_NEAR(d.q_value(), target, 1e-4);
    EXPECT_DOUBLE_EQ(d.r_value(), 1.0);

    EXPECT_THROW(two_point_mix(100, 1, 3, 1.5), precondition_error);
}
