#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphlab/errors.hpp"

namespace graphlab {

struct Atom {
    long long value = 0;
    double prob = 0.0;
};

// Finite probability distribution supported on an integer lattice L(b, h).
// Atoms are kept sorted by value with strictly positive probabilities summing
// to 1 within 1e-12. h is the maximal step for the atom set; a single-atom
// distribution has no well-defined step and is flagged degenerate (h = 1).
class LatticeDistribution {
public:
    static LatticeDistribution from_atoms(std::vector<Atom> atoms) {
        std::map<long long, double> merged;
        for (const Atom& a : atoms) {
            if (a.prob < 0.0) throw precondition_error("LatticeDistribution: negative probability");
            if (a.prob == 0.0) continue;
            merged[a.value] += a.prob;
        }
        if (merged.empty()) throw precondition_error("LatticeDistribution: no atoms with positive mass");
        LatticeDistribution x;
        x.atoms_.reserve(merged.size());
        double total = 0.0;
        for (const auto& [v, p] : merged) {
            x.atoms_.push_back({v, p});
            total += p;
        }
        if (std::fabs(total - 1.0) > 1e-12)
            throw precondition_error("LatticeDistribution: probabilities sum to " +
                                     std::to_string(total) + ", not 1");
        x.compute_lattice();
        return x;
    }

    static LatticeDistribution from_values_probs(const std::vector<long long>& values,
                                                 const std::vector<double>& probs) {
        if (values.size() != probs.size())
            throw precondition_error("LatticeDistribution: values/probs size mismatch");
        std::vector<Atom> atoms(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) atoms[i] = {values[i], probs[i]};
        return from_atoms(std::move(atoms));
    }

    static LatticeDistribution point_mass(long long v) { return from_atoms({{v, 1.0}}); }

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    long long step() const { return step_; }
    long long offset() const { return offset_; }
    bool degenerate_step() const { return degenerate_; }
    long long min_value() const { return atoms_.front().value; }
    long long max_value() const { return atoms_.back().value; }

    double prob_at(long long v) const {
        auto it = std::lower_bound(atoms_.begin(), atoms_.end(), v,
                                   [](const Atom& a, long long w) { return a.value < w; });
        return (it != atoms_.end() && it->value == v) ? it->prob : 0.0;
    }

    double mean() const {
        double s = 0.0;
        for (const Atom& a : atoms_) s += a.prob * static_cast<double>(a.value);
        return s;
    }

    double variance() const {
        const double mu = mean();
        double s = 0.0;
        for (const Atom& a : atoms_) {
            const double d = static_cast<double>(a.value) - mu;
            s += a.prob * d * d;
        }
        return s;
    }

    double abs_third_moment() const {
        double s = 0.0;
        for (const Atom& a : atoms_) {
            const double v = std::fabs(static_cast<double>(a.value));
            s += a.prob * v * v * v;
        }
        return s;
    }

    LatticeDistribution shifted(long long delta) const {
        std::vector<Atom> atoms = atoms_;
        for (Atom& a : atoms) a.value += delta;
        return from_atoms(std::move(atoms));
    }

    double min_prob() const {
        double p = atoms_.front().prob;
        for (const Atom& a : atoms_) p = std::min(p, a.prob);
        return p;
    }

private:
    void compute_lattice() {
        if (atoms_.size() == 1) {
            step_ = 1;
            degenerate_ = true;
            offset_ = 0;
            return;
        }
        long long g = 0;
        for (std::size_t i = 1; i < atoms_.size(); ++i)
            g = std::gcd(g, atoms_[i].value - atoms_[0].value);
        step_ = g;
        degenerate_ = false;
        offset_ = ((atoms_[0].value % g) + g) % g;
    }

    std::vector<Atom> atoms_;
    long long step_ = 1;
    long long offset_ = 0;
    bool degenerate_ = false;
};

// k-th derivative of the moment generating function at theta:
// phi^(k)(theta) = E[X^k e^(theta X)], by direct summation over atoms.
inline double mgf_derivative(const LatticeDistribution& x, int k, double theta) {
    if (k < 0) throw precondition_error("mgf_derivative: k must be nonnegative");
    double s = 0.0;
    for (const Atom& a : x.atoms()) {
        double vk = 1.0;
        for (int i = 0; i < k; ++i) vk *= static_cast<double>(a.value);
        s += a.prob * vk * std::exp(theta * static_cast<double>(a.value));
    }
    return s;
}

struct ThetaSolution {
    double theta0 = 0.0;
    double phi_at = 0.0;  // phi(theta0)
    double phi2_at = 0.0; // phi''(theta0)
};

// Smallest positive root of phi'(theta) = 0, by bracketing bisection.
// phi' is strictly increasing on distributions with an atom >= 1, so the root
// is unique; bisection is unconditionally convergent even when phi' is very
// flat near 0.
inline ThetaSolution theta0_solve(const LatticeDistribution& x) {
    if (mgf_derivative(x, 1, 0.0) >= 0.0)
        throw no_root_error("theta0_solve: phi'(0) >= 0 (critical or supercritical input)");
    if (x.max_value() < 1)
        throw no_root_error("theta0_solve: no atom >= 1, phi' never becomes positive");

    double hi = 1.0;
    const double hi_cap = 690.0 / static_cast<double>(x.max_value());
    while (mgf_derivative(x, 1, hi) <= 0.0) {
        hi *= 2.0;
        if (hi > hi_cap)
            throw no_root_error("theta0_solve: root bracket exceeds overflow-safe range");
    }
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-17 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double d = mgf_derivative(x, 1, mid);
        if (d == 0.0) {
            lo = hi = mid;
            break;
        }
        (d < 0.0 ? lo : hi) = mid;
    }
    ThetaSolution sol;
    sol.theta0 = 0.5 * (lo + hi);
    sol.phi_at = mgf_derivative(x, 0, sol.theta0);
    sol.phi2_at = mgf_derivative(x, 2, sol.theta0);
    if (std::fabs(mgf_derivative(x, 1, sol.theta0)) > 1e-10)
        throw no_root_error("theta0_solve: bisection failed to reach |phi'| <= 1e-10");
    return sol;
}

// Exponential tilt: P(x_theta = v) = e^(theta v) P(x = v) / phi(theta).
inline LatticeDistribution tilt(const LatticeDistribution& x, double theta) {
    const double phi = mgf_derivative(x, 0, theta);
    if (!std::isfinite(phi) || phi <= 0.0)
        throw precondition_error("tilt: phi(theta) not finite and positive");
    std::vector<Atom> atoms;
    atoms.reserve(x.size());
    for (const Atom& a : x.atoms())
        atoms.push_back({a.value, a.prob * std::exp(theta * static_cast<double>(a.value)) / phi});
    double total = 0.0;
    for (const Atom& a : atoms) total += a.prob;
    for (Atom& a : atoms) a.prob /= total;
    return LatticeDistribution::from_atoms(std::move(atoms));
}

// Step distribution beta for the dominating walk: mass at -1 is reduced by
// 2T/(m-2T) relative to eta and all mass at values >= 0 is scaled by
// m/(m-2T). Sums to 1 exactly by construction.
inline LatticeDistribution beta_from(const LatticeDistribution& eta, double T, double m) {
    if (eta.min_value() < -1)
        throw precondition_error("beta_from: eta has atoms below -1");
    if (!(2.0 * T < m)) throw invalid_mass_error("beta_from: requires T < m/2");
    const double scale = m / (m - 2.0 * T);
    const double shift = 2.0 * T / (m - 2.0 * T);
    const double mass_minus1 = scale * eta.prob_at(-1) - shift;
    if (mass_minus1 < -1e-15)
        throw invalid_mass_error("beta_from: negative mass at -1 (T too large)");
    std::vector<Atom> atoms;
    atoms.reserve(eta.size() + 1);
    if (mass_minus1 > 0.0) atoms.push_back({-1, mass_minus1});
    for (const Atom& a : eta.atoms())
        if (a.value >= 0) atoms.push_back({a.value, scale * a.prob});
    return LatticeDistribution::from_atoms(std::move(atoms));
}

// Dense pmf over consecutive lattice indexes; value(i) = origin + i*step.
struct DensePmf {
    long long origin = 0;
    long long step = 1;
    std::vector<double> probs;

    long long value_at(std::size_t i) const {
        return origin + static_cast<long long>(i) * step;
    }
};

inline DensePmf to_dense(const LatticeDistribution& x) {
    DensePmf d;
    d.origin = x.min_value();
    d.step = x.step();
    const std::size_t len =
        static_cast<std::size_t>((x.max_value() - x.min_value()) / d.step) + 1;
    d.probs.assign(len, 0.0);
    for (const Atom& a : x.atoms())
        d.probs[static_cast<std::size_t>((a.value - d.origin) / d.step)] = a.prob;
    return d;
}

namespace detail {

inline std::vector<double> conv_dense(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
    }
    return out;
}

} // namespace detail

inline constexpr std::size_t kDefaultSupportGuard = 10'000'000;

// Exact n-fold convolution of x with itself, by binary powering of the dense
// pmf. Output support is guarded: at most max_support lattice points.
inline DensePmf convolve_dense(const LatticeDistribution& x, long long n,
                               std::size_t max_support = kDefaultSupportGuard) {
    if (n < 1) throw precondition_error("convolve_dense: n must be positive");
    const DensePmf base = to_dense(x);
    const std::size_t span = base.probs.size() - 1;
    if (span * static_cast<std::size_t>(n) + 1 > max_support)
        throw support_too_large_error("convolve_dense: output support exceeds guard");

    DensePmf out;
    out.step = base.step;
    out.origin = 0;
    out.probs = {1.0};
    std::vector<double> pow2 = base.probs;
    long long pow2_origin = base.origin;
    long long k = n;
    for (;;) {
        if (k & 1) {
            out.probs = detail::conv_dense(out.probs, pow2);
            out.origin += pow2_origin;
        }
        k >>= 1;
        if (k == 0) break;
        pow2 = detail::conv_dense(pow2, pow2);
        pow2_origin *= 2;
    }
    return out;
}

// Same operation returned as a LatticeDistribution; zero-probability interior
// lattice points are dropped to satisfy the positivity invariant.
inline LatticeDistribution convolve_pmf(const LatticeDistribution& x, long long n,
                                        std::size_t max_support = kDefaultSupportGuard) {
    if (n == 1) return x;
    const DensePmf d = convolve_dense(x, n, max_support);
    std::vector<Atom> atoms;
    atoms.reserve(d.probs.size());
    double total = 0.0;
    for (std::size_t i = 0; i < d.probs.size(); ++i) {
        if (d.probs[i] > 0.0) atoms.push_back({d.value_at(i), d.probs[i]});
        total += d.probs[i];
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw error("convolve_pmf: mass conservation violated: total = " + std::to_string(total));
    for (Atom& a : atoms) a.prob /= total;
    return LatticeDistribution::from_atoms(std::move(atoms));
}

// Distance from alpha to the nearest integer, in [0, 1/2].
inline double nearest_int_distance(double alpha) {
    const double frac = alpha - std::floor(alpha);
    return std::min(frac, 1.0 - frac);
}

// Symmetrization X* = X - X' (X' an independent copy), computed exactly.
class Symmetrization {
public:
    explicit Symmetrization(const LatticeDistribution& x) {
        std::map<long long, double> m;
        for (const Atom& a : x.atoms())
            for (const Atom& b : x.atoms()) m[a.value - b.value] += a.prob * b.prob;
        atoms_.reserve(m.size());
        for (const auto& [v, p] : m) atoms_.push_back({v, p});
        for (const Atom& a : atoms_) abs_mean_ += a.prob * std::fabs(static_cast<double>(a.value));
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    // Lipschitz constant of d -> E<X* d>^2.
    double lipschitz() const { return abs_mean_; }

    double h_at(double d) const {
        double s = 0.0;
        for (const Atom& a : atoms_) {
            const double g = nearest_int_distance(static_cast<double>(a.value) * d);
            s += a.prob * g * g;
        }
        return s;
    }

private:
    std::vector<Atom> atoms_;
    double abs_mean_ = 0.0;
};

// H(X, d) = E<X* d>^2, the lattice-concentration functional.
inline double h_param(const LatticeDistribution& x, double d) {
    return Symmetrization(x).h_at(d);
}

// Result of a grid + local-refinement approximation of an infimum. value is
// the refined minimum over sampled points (an upper bound on the true inf);
// lower_bound subtracts the Lipschitz slack and certifies inf >= lower_bound.
struct InfimumEstimate {
    double value = 0.0;
    double lower_bound = 0.0;
    double minimizer = 0.0;
};

namespace detail {

template <class F>
InfimumEstimate grid_infimum(F&& f, double lo, double hi, int grid_points, double lipschitz) {
    InfimumEstimate est;
    est.value = std::numeric_limits<double>::infinity();
    const double width = hi - lo;
    const int n = std::max(grid_points, 2);
    double spacing = width / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i) {
        const double d = lo + spacing * static_cast<double>(i);
        const double v = f(d);
        if (v < est.value) {
            est.value = v;
            est.minimizer = d;
        }
    }
    // Golden-section refinement in the bracket around the best grid point.
    double a = std::max(lo, est.minimizer - spacing);
    double b = std::min(hi, est.minimizer + spacing);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double e = a + gr * (b - a);
    double fc = f(c), fe = f(e);
    for (int i = 0; i < 80; ++i) {
        if (fc < fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + gr * (b - a);
            fe = f(e);
        }
    }
    const double refined = std::min(fc, fe);
    if (refined < est.value) {
        est.value = refined;
        est.minimizer = fc < fe ? c : e;
    }
    est.lower_bound = std::max(0.0, est.value - lipschitz * spacing * 0.5);
    return est;
}

} // namespace detail

// H_D(X) = inf over d in [1/(4D), 1/(2D)] of H(X, d).
inline InfimumEstimate h_d_param(const LatticeDistribution& x, long long D,
                                 int grid_points = 10'000) {
    if (D < 1) throw precondition_error("h_d_param: D must be a positive integer");
    const Symmetrization sym(x);
    const double lo = 1.0 / (4.0 * static_cast<double>(D));
    const double hi = 1.0 / (2.0 * static_cast<double>(D));
    return detail::grid_infimum([&](double d) { return sym.h_at(d); }, lo, hi, grid_points,
                                sym.lipschitz());
}

// D(X, d) = inf over alpha of E<(X - alpha) d>^2. The objective is periodic in
// alpha with period 1/|d|.
inline InfimumEstimate d_param(const LatticeDistribution& x, double d, int grid_points = 10'000) {
    if (d == 0.0) return {0.0, 0.0, 0.0};
    const double period = 1.0 / std::fabs(d);
    auto objective = [&](double alpha) {
        double s = 0.0;
        for (const Atom& a : x.atoms()) {
            const double g = nearest_int_distance((static_cast<double>(a.value) - alpha) * d);
            s += a.prob * g * g;
        }
        return s;
    };
    return detail::grid_infimum(objective, 0.0, period, grid_points, std::fabs(d));
}

// w(x) = max over ordered triples of distinct atoms of
// |x_i - x_l| / gcd(|x_i - x_l|, |x_j - x_l|).
inline long long w_of_atoms(std::span<const long long> values) {
    std::vector<long long> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.size() < 3) throw precondition_error("w_of_atoms: needs at least 3 distinct values");
    long long best = 0;
    for (std::size_t l = 0; l < v.size(); ++l)
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i == l) continue;
            const long long dil = std::llabs(v[i] - v[l]);
            for (std::size_t j = 0; j < v.size(); ++j) {
                if (j == l || j == i) continue;
                const long long djl = std::llabs(v[j] - v[l]);
                best = std::max(best, dil / std::gcd(dil, djl));
            }
        }
    return best;
}

// |characteristic function| at t, exactly from atoms.
inline double cf_modulus(const LatticeDistribution& x, double t) {
    double re = 0.0, im = 0.0;
    for (const Atom& a : x.atoms()) {
        re += a.prob * std::cos(t * static_cast<double>(a.value));
        im += a.prob * std::sin(t * static_cast<double>(a.value));
    }
    return std::sqrt(re * re + im * im);
}

namespace detail {

template <class F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-13) {
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

} // namespace detail

struct LltBoundCheck {
    double lhs_sup = 0.0;       // sup over the lattice of |P(S_n = w) - gaussian(w)|
    double rhs = 0.0;           // 32 h gamma / (sigma^4 n) + 6 gamma / (h sigma^2 n H_h)
    double rhs_integral = 0.0;  // 32 h gamma / (sigma^4 n) + (h/pi) * int |phi(t)|^n dt
    bool holds = false;         // lhs_sup <= rhs
    long long arg_sup = 0;      // lattice point attaining the sup
    double sigma2 = 0.0;
    double gamma3 = 0.0;
    long long step = 1;
    InfimumEstimate h_h;        // H_h(X) with its minimizer
};

// Checks the explicit local-limit-theorem error bound for S_n = sum of n iid
// copies of x (x must be mean-zero). The left side is computed exactly via
// convolution; both closed-form right sides are evaluated.
inline LltBoundCheck llt_bound_check(const LatticeDistribution& x, long long n,
                                     std::size_t max_support = kDefaultSupportGuard) {
    if (std::fabs(x.mean()) > 1e-10)
        throw precondition_error("llt_bound_check: distribution must be mean-zero");
    if (x.size() < 2)
        throw precondition_error("llt_bound_check: needs at least 2 atoms");

    LltBoundCheck out;
    out.sigma2 = x.variance();
    out.gamma3 = x.abs_third_moment();
    out.step = x.step();
    const double h = static_cast<double>(out.step);
    const double nn = static_cast<double>(n);

    const DensePmf sn = convolve_dense(x, n, max_support);
    const double denom = 2.0 * nn * out.sigma2;
    auto gaussian = [&](long long w) {
        const double ww = static_cast<double>(w);
        return h / std::sqrt(M_PI * denom) * std::exp(-ww * ww / denom);
    };
    for (std::size_t i = 0; i < sn.probs.size(); ++i) {
        const long long w = sn.value_at(i);
        const double gap = std::fabs(sn.probs[i] - gaussian(w));
        if (gap > out.lhs_sup) {
            out.lhs_sup = gap;
            out.arg_sup = w;
        }
    }
    // Just outside the reachable range the pmf is 0 and the gaussian decreases
    // in |w|, so two boundary points cover the rest of the lattice.
    for (const long long w : {sn.origin - sn.step,
                              sn.value_at(sn.probs.size() - 1) + sn.step}) {
        const double gap = gaussian(w);
        if (gap > out.lhs_sup) {
            out.lhs_sup = gap;
            out.arg_sup = w;
        }
    }

    const double first_term = 32.0 * h * out.gamma3 / (out.sigma2 * out.sigma2 * nn);
    out.h_h = h_d_param(x, out.step);
    out.rhs = first_term + 6.0 * out.gamma3 / (h * out.sigma2 * nn * out.h_h.value);

    const double t_lo = out.sigma2 / (4.0 * out.gamma3);
    const double t_hi = M_PI / h;
    const double integral = detail::integrate(
        [&](double t) { return std::pow(cf_modulus(x, t), static_cast<double>(n)); }, t_lo, t_hi);
    out.rhs_integral = first_term + h / M_PI * integral;

    out.holds = out.lhs_sup <= out.rhs;
    return out;
}

} // namespace graphlab
