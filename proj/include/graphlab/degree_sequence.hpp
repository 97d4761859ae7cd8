#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "graphlab/errors.hpp"
#include "graphlab/lattice.hpp"

namespace graphlab {

// A validated degree sequence: nondecreasing positive degrees with even sum.
// All scalar functionals accumulate in integers and divide once at the end.
class DegreeSequence {
public:
    static DegreeSequence from_degrees(std::vector<int> degrees) {
        if (degrees.empty()) throw precondition_error("DegreeSequence: empty");
        std::sort(degrees.begin(), degrees.end());
        if (degrees.front() < 1)
            throw precondition_error("DegreeSequence: all degrees must be >= 1");
        DegreeSequence d;
        d.degrees_ = std::move(degrees);
        d.finalize();
        return d;
    }

    static DegreeSequence from_counts(const std::vector<std::pair<int, long long>>& counts) {
        std::vector<int> degrees;
        for (const auto& [degree, count] : counts) {
            if (count < 0) throw precondition_error("DegreeSequence: negative count");
            for (long long i = 0; i < count; ++i) degrees.push_back(degree);
        }
        return from_degrees(std::move(degrees));
    }

    // Accepts either one degree per line or run-length "count degree" pairs.
    static DegreeSequence parse(std::istream& in) {
        std::vector<int> degrees;
        std::string line;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            long long a;
            if (!(ls >> a)) continue;
            long long b;
            if (ls >> b) {
                if (a < 0 || b <= 0 || b > std::numeric_limits<int>::max())
                    throw precondition_error("DegreeSequence: bad 'count degree' pair: " + line);
                for (long long i = 0; i < a; ++i) degrees.push_back(static_cast<int>(b));
            } else {
                if (a <= 0 || a > std::numeric_limits<int>::max())
                    throw precondition_error("DegreeSequence: bad degree: " + line);
                degrees.push_back(static_cast<int>(a));
            }
        }
        return from_degrees(std::move(degrees));
    }

    const std::vector<int>& degrees() const { return degrees_; }
    long long n() const { return static_cast<long long>(degrees_.size()); }
    long long m() const { return m_; }
    int max_degree() const { return degrees_.back(); }
    long long n1() const { return count_of(1); }
    long long n2() const { return count_of(2); }

    // (degree, count) pairs, ascending by degree.
    const std::vector<std::pair<int, long long>>& distinct() const { return distinct_; }

    long long count_of(int k) const {
        auto it = std::lower_bound(distinct_.begin(), distinct_.end(), k,
                                   [](const auto& p, int v) { return p.first < v; });
        return (it != distinct_.end() && it->first == k) ? it->second : 0;
    }

    // Q = (1/m) sum d(d-2). Q < 0 marks subcriticality.
    double q_value() const { return static_cast<double>(sum_d_d2_) / static_cast<double>(m_); }

    // R = (1/m) sum d(d-2)^2.
    double r_value() const { return static_cast<double>(sum_d_d2sq_) / static_cast<double>(m_); }

    long long q_numerator() const { return sum_d_d2_; } // sum d(d-2), exact
    long long sum_squares() const { return sum_sq_; }

    struct LatticeStep {
        long long offset = 0; // b = d_1 mod h
        long long step = 1;   // h
        bool degenerate = false;
    };

    // Largest h with all degrees in L(b, h); degenerate when only one distinct
    // degree is present (h is then unbounded; reported as 1 with the flag).
    LatticeStep lattice_step() const {
        LatticeStep ls;
        if (distinct_.size() == 1) {
            ls.degenerate = true;
            ls.step = 1;
            ls.offset = 0;
            return ls;
        }
        long long g = 0;
        for (std::size_t i = 1; i < distinct_.size(); ++i)
            g = std::gcd(g, static_cast<long long>(distinct_[i].first - distinct_[0].first));
        ls.step = g;
        ls.offset = ((degrees_.front() % g) + g) % g;
        return ls;
    }

    // Size-biased degree distribution: P(k) = k * n_k / m.
    LatticeDistribution size_biased_pmf() const {
        std::vector<Atom> atoms;
        atoms.reserve(distinct_.size());
        for (const auto& [k, cnt] : distinct_)
            atoms.push_back({k, static_cast<double>(k) * static_cast<double>(cnt) /
                                    static_cast<double>(m_)});
        return LatticeDistribution::from_atoms(std::move(atoms));
    }

    // Exploration increment law eta = (size-biased degree) - 2.
    LatticeDistribution increment_pmf() const { return size_biased_pmf().shifted(-2); }

    struct StarSet {
        long long size = 0;       // |S*|
        long long degree_sum = 0; // m* = sum of degrees in S*
    };

    // Smallest set of largest-degree vertices whose removal makes the residual
    // sum d(d-2) nonpositive. Empty when Q <= 0.
    StarSet star_set() const {
        StarSet s;
        long long residual = sum_d_d2_;
        for (auto it = degrees_.rbegin(); it != degrees_.rend() && residual > 0; ++it) {
            const long long d = *it;
            residual -= d * (d - 2);
            s.degree_sum += d;
            ++s.size;
        }
        return s;
    }

    struct Certificate {
        bool valid = false;
        double m0 = 0.0;
        double q0 = 0.0;
        long long set_size = 0;       // |S| of the greedy witness
        long long set_degree_sum = 0; // sum of degrees over S
        double residual_q = 0.0;      // (1/m) sum over [n]\S of d(d-2)
        double t_value = 0.0;         // T = m0/|Q0|
        double lambda = 0.0;          // n Q0^2 / (Delta |Q0| + R)
        long long star_size = 0;      // |S*|
        long long m_star = 0;
        bool cond_m0_ge_3mstar = false;
        bool cond_log_inequality = false; // m0|Q0| >= (Delta|Q0|+R) log(lambda)
    };

    // Greedy witness for (m0, Q0)-subcriticality: remove largest degrees until
    // the residual criticality drops to Q0; valid when the removed degree sum
    // stays within m0. Also evaluates the side conditions of the uniform-model
    // component bound and exposes T and lambda.
    Certificate subcritical_certificate(double m0, double q0) const {
        if (q0 > 0.0) throw precondition_error("subcritical_certificate: Q0 must be <= 0");
        Certificate c;
        c.m0 = m0;
        c.q0 = q0;
        const double target = q0 * static_cast<double>(m_);
        long long residual = sum_d_d2_;
        auto it = degrees_.rbegin();
        while (static_cast<double>(residual) > target && it != degrees_.rend()) {
            const long long d = *it++;
            residual -= d * (d - 2);
            c.set_degree_sum += d;
            ++c.set_size;
        }
        c.residual_q = static_cast<double>(residual) / static_cast<double>(m_);
        c.valid = c.residual_q <= q0 && static_cast<double>(c.set_degree_sum) <= m0;

        const StarSet star = star_set();
        c.star_size = star.size;
        c.m_star = star.degree_sum;
        c.cond_m0_ge_3mstar = m0 >= 3.0 * static_cast<double>(star.degree_sum);

        const double abs_q0 = std::fabs(q0);
        const double r = r_value();
        const double denom = static_cast<double>(max_degree()) * abs_q0 + r;
        c.lambda = static_cast<double>(n()) * q0 * q0 / denom;
        c.t_value = abs_q0 > 0.0 ? m0 / abs_q0 : std::numeric_limits<double>::infinity();
        c.cond_log_inequality =
            c.lambda > 0.0 ? (m0 * abs_q0 >= denom * std::log(c.lambda)) : false;
        return c;
    }

    struct AssumptionItem {
        bool checkable = false;
        bool holds = false;
        double value = 0.0;
        std::string note;
    };

    struct AssumptionReport {
        AssumptionItem convergence;      // (i): sequence-level, not checkable at one n
        AssumptionItem q_to_zero;        // (ii): reports Q_n
        AssumptionItem non_two_fraction; // (iii): fraction of degrees outside {0,2} positive
        AssumptionItem lattice;          // (iv): reports h_n; as-limit not checkable
        AssumptionItem fourth_moment;    // (v): E[D^4] <= Delta^(1/2)
        bool all_checkable_hold() const {
            return non_two_fraction.holds && fourth_moment.holds;
        }
    };

    AssumptionReport check_assumptions() const {
        AssumptionReport rep;
        rep.convergence.checkable = false;
        rep.convergence.note = "sequence-level, not checkable at one n";

        rep.q_to_zero.checkable = false;
        rep.q_to_zero.value = q_value();
        rep.q_to_zero.note = "finite-n value reported; the limit is sequence-level";

        double fraction_not_two = 0.0;
        for (const auto& [k, cnt] : distinct_)
            if (k != 2) fraction_not_two += static_cast<double>(cnt);
        fraction_not_two /= static_cast<double>(n());
        rep.non_two_fraction.checkable = true;
        rep.non_two_fraction.value = fraction_not_two;
        rep.non_two_fraction.holds = fraction_not_two > 0.0;

        const LatticeStep ls = lattice_step();
        rep.lattice.checkable = false;
        rep.lattice.value = static_cast<double>(ls.step);
        rep.lattice.note = ls.degenerate ? "degenerate (single distinct degree)"
                                         : "finite-n step reported; equality with the limit "
                                           "step is sequence-level";

        unsigned __int128 sum4 = 0;
        for (const auto& [k, cnt] : distinct_) {
            const unsigned __int128 k2 = static_cast<unsigned __int128>(k) * k;
            sum4 += k2 * k2 * static_cast<unsigned __int128>(cnt);
        }
        const double e4 = static_cast<double>(sum4) / static_cast<double>(n());
        rep.fourth_moment.checkable = true;
        rep.fourth_moment.value = e4;
        rep.fourth_moment.holds = e4 <= std::sqrt(static_cast<double>(max_degree()));
        return rep;
    }

private:
    void finalize() {
        m_ = 0;
        sum_sq_ = 0;
        sum_d_d2_ = 0;
        sum_d_d2sq_ = 0;
        for (const long long d : degrees_) {
            m_ += d;
            sum_sq_ += d * d;
            sum_d_d2_ += d * (d - 2);
            sum_d_d2sq_ += d * (d - 2) * (d - 2);
        }
        if (m_ % 2 != 0) throw precondition_error("DegreeSequence: degree sum must be even");
        distinct_.clear();
        for (const int d : degrees_) {
            if (!distinct_.empty() && distinct_.back().first == d)
                ++distinct_.back().second;
            else
                distinct_.push_back({d, 1});
        }
    }

    std::vector<int> degrees_;
    std::vector<std::pair<int, long long>> distinct_;
    long long m_ = 0;
    long long sum_sq_ = 0;
    long long sum_d_d2_ = 0;
    long long sum_d_d2sq_ = 0;
};

struct LowerBoundSequence {
    DegreeSequence sequence;
    long long ell = 0;   // number of degree-Delta hubs
    double p_star = 0.0; // Delta^2 / n
};

// Tightness construction: ell = floor((1-eps) n / Delta^2) vertices of degree
// Delta, the rest of degree 1, plus one extra degree-1 vertex if the sum would
// be odd.
inline LowerBoundSequence lower_bound_sequence(long long n, int delta, double eps) {
    if (delta < 2) throw precondition_error("lower_bound_sequence: delta must be >= 2");
    if (static_cast<long long>(delta) * delta >= n)
        throw precondition_error("lower_bound_sequence: requires delta^2 < n");
    if (!(eps > 0.0 && eps < 1.0))
        throw precondition_error("lower_bound_sequence: eps must be in (0,1)");
    const long long ell = static_cast<long long>(
        std::floor((1.0 - eps) * static_cast<double>(n) / (static_cast<double>(delta) * delta)));
    if (ell < 1) throw precondition_error("lower_bound_sequence: ell < 1");
    long long ones = n - ell;
    if ((ones + ell * delta) % 2 != 0) ++ones;
    LowerBoundSequence out{
        DegreeSequence::from_counts({{1, ones}, {delta, ell}}),
        ell,
        static_cast<double>(delta) * static_cast<double>(delta) / static_cast<double>(n)};
    return out;
}

// Two-atom sequence with degrees {low, high} tuned so Q is as close to
// q_target as the integer counts allow (count parity fixed to keep m even).
inline DegreeSequence two_point_mix(long long n, int low, int high, double q_target) {
    if (low < 1 || high <= low) throw precondition_error("two_point_mix: need 1 <= low < high");
    const double a = static_cast<double>(low) * (low - 2);
    const double b = static_cast<double>(high) * (high - 2);
    const double f = (q_target * low - a) / ((b - a) - q_target * (high - low));
    if (!(f >= 0.0 && f <= 1.0))
        throw precondition_error("two_point_mix: q_target unreachable with these degrees");
    long long n_high = std::llround(f * static_cast<double>(n));
    n_high = std::clamp<long long>(n_high, 0, n);
    auto total = [&](long long k) {
        return static_cast<long long>(low) * (n - k) + static_cast<long long>(high) * k;
    };
    if (total(n_high) % 2 != 0) {
        if (n_high + 1 <= n && total(n_high + 1) % 2 == 0)
            ++n_high;
        else if (n_high >= 1 && total(n_high - 1) % 2 == 0)
            --n_high;
        else
            throw precondition_error("two_point_mix: cannot fix parity");
    }
    return DegreeSequence::from_counts({{low, n - n_high}, {high, n_high}});
}

} // namespace graphlab
