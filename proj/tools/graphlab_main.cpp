// graphlab: samplers, explorations and experiments for largest-component
// statistics of random graphs with prescribed degree sequences.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "graphlab/graphlab.hpp"

namespace {

using namespace graphlab;

struct SequenceOptions {
    std::string file;
    std::string literal;
    std::vector<double> two_mix;     // n, low, high, q_target
    std::vector<double> lower_bound; // n, delta, eps
    std::vector<double> hub_bulk;    // n, hub_count, hub_degree, ones
};

void add_sequence_options(CLI::App* app, SequenceOptions& opts) {
    auto* file = app->add_option("--seq-file", opts.file,
                                 "degree sequence file (one degree per line, or 'count degree')");
    auto* lit = app->add_option("--seq", opts.literal, "literal degrees, e.g. \"1 1 3 3\"");
    auto* mix = app->add_option("--two-mix", opts.two_mix,
                                "n,low,high,q_target mix tuned to a target Q")
                    ->expected(4)
                    ->delimiter(',');
    auto* lb = app->add_option("--lower-bound", opts.lower_bound,
                               "n,delta,eps tightness construction")
                   ->expected(3)
                   ->delimiter(',');
    auto* hb = app->add_option("--hub-bulk", opts.hub_bulk,
                               "n,hub_count,hub_degree,ones hub-plus-bulk sequence")
                   ->expected(4)
                   ->delimiter(',');
    file->excludes(lit, mix, lb, hb);
    lit->excludes(mix, lb, hb);
    mix->excludes(lb, hb);
    lb->excludes(hb);
}

DegreeSequence build_sequence_cli(const SequenceOptions& opts) {
    if (!opts.file.empty()) {
        std::ifstream in(opts.file);
        if (!in) throw config_error("cannot open " + opts.file);
        return DegreeSequence::parse(in);
    }
    if (!opts.literal.empty()) {
        std::istringstream in(opts.literal);
        std::vector<int> degrees;
        long long v;
        while (in >> v) degrees.push_back(static_cast<int>(v));
        return DegreeSequence::from_degrees(degrees);
    }
    if (!opts.two_mix.empty())
        return two_point_mix(static_cast<long long>(opts.two_mix[0]),
                             static_cast<int>(opts.two_mix[1]),
                             static_cast<int>(opts.two_mix[2]), opts.two_mix[3]);
    if (!opts.lower_bound.empty())
        return lower_bound_sequence(static_cast<long long>(opts.lower_bound[0]),
                                    static_cast<int>(opts.lower_bound[1]), opts.lower_bound[2])
            .sequence;
    if (!opts.hub_bulk.empty()) {
        SequenceSpec spec;
        spec.kind = "hub_bulk";
        spec.n = static_cast<long long>(opts.hub_bulk[0]);
        spec.hub_count = static_cast<long long>(opts.hub_bulk[1]);
        spec.hub_degree = static_cast<int>(opts.hub_bulk[2]);
        spec.ones = static_cast<long long>(opts.hub_bulk[3]);
        return build_sequence(spec);
    }
    throw config_error("no degree sequence given (use --seq, --seq-file, --two-mix, "
                       "--lower-bound or --hub-bulk)");
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw config_error("cannot write " + path);
    return file;
}

const char* cm_event_name(CmEvent e) {
    switch (e) {
        case CmEvent::NewVertex: return "new";
        case CmEvent::BackEdge: return "back";
        case CmEvent::Restart: return "restart";
    }
    return "?";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random-graph largest-component laboratory"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "global RNG seed")->capture_default_str();

    // --- experiment -------------------------------------------------------
    auto* exp_cmd = app.add_subcommand("experiment", "run a configured experiment (E1-E6)");
    std::string exp_config;
    std::optional<std::uint64_t> exp_seed;
    std::optional<long long> exp_trials;
    std::optional<std::string> exp_out;
    std::optional<int> exp_workers;
    bool exp_assert = false;
    exp_cmd->add_option("--config", exp_config, "experiment config file")->required();
    exp_cmd->add_option("--override-seed", exp_seed, "override [experiment] seed");
    exp_cmd->add_option("--trials", exp_trials, "override [experiment] trials");
    exp_cmd->add_option("--out", exp_out, "override output path prefix");
    exp_cmd->add_option("--workers", exp_workers, "override worker count");
    exp_cmd->add_flag("--assert", exp_assert, "exit 4 when the acceptance fraction is not met");

    // --- cm ----------------------------------------------------------------
    auto* cm_cmd = app.add_subcommand("cm", "configuration-model operations");
    cm_cmd->require_subcommand(1);
    SequenceOptions cm_seq;
    std::string cm_out;
    auto* cm_sample = cm_cmd->add_subcommand("sample", "sample one multigraph, emit edge list");
    add_sequence_options(cm_sample, cm_seq);
    cm_sample->add_option("--out", cm_out, "output path (default stdout)");
    auto* cm_explore = cm_cmd->add_subcommand("explore", "edge-by-edge exploration trace CSV");
    long long cm_start = 0;
    add_sequence_options(cm_explore, cm_seq);
    cm_explore->add_option("--start", cm_start, "start vertex")->capture_default_str();
    cm_explore->add_option("--out", cm_out, "output path (default stdout)");
    auto* cm_l1 = cm_cmd->add_subcommand("l1", "largest-component sample CSV");
    long long cm_trials = 100;
    add_sequence_options(cm_l1, cm_seq);
    cm_l1->add_option("--trials", cm_trials, "number of trials")->capture_default_str();
    cm_l1->add_option("--out", cm_out, "output path (default stdout)");

    // --- um ----------------------------------------------------------------
    auto* um_cmd = app.add_subcommand("um", "uniform-model operations");
    um_cmd->require_subcommand(1);
    SequenceOptions um_seq;
    std::string um_out;
    std::string um_method = "rejection";
    long long um_burn_factor = 20, um_max_attempts = 10000;
    auto* um_sample = um_cmd->add_subcommand("sample", "sample one simple graph, emit edge list");
    add_sequence_options(um_sample, um_seq);
    um_sample->add_option("--method", um_method, "rejection|switching")->capture_default_str();
    um_sample->add_option("--burn-in-factor", um_burn_factor, "switching burn-in in units of m")
        ->capture_default_str();
    um_sample->add_option("--max-attempts", um_max_attempts, "rejection attempt budget")
        ->capture_default_str();
    um_sample->add_option("--out", um_out, "output path (default stdout)");
    auto* um_explore = um_cmd->add_subcommand("explore", "vertex-by-vertex exploration trace CSV");
    double um_m0 = 0.0, um_q0 = 0.0;
    long long um_start = 0;
    add_sequence_options(um_explore, um_seq);
    um_explore->add_option("--m0", um_m0, "certificate m0")->required();
    um_explore->add_option("--q0", um_q0, "certificate Q0 (<= 0)")->required();
    um_explore->add_option("--start", um_start, "start vertex v")->capture_default_str();
    um_explore->add_option("--method", um_method, "rejection|switching")->capture_default_str();
    um_explore->add_option("--burn-in-factor", um_burn_factor, "switching burn-in in units of m")
        ->capture_default_str();
    um_explore->add_option("--out", um_out, "output path (default stdout)");
    auto* um_moments = um_cmd->add_subcommand("moments", "conditional increment-moment report");
    long long um_trials = 200;
    add_sequence_options(um_moments, um_seq);
    um_moments->add_option("--m0", um_m0, "certificate m0")->required();
    um_moments->add_option("--q0", um_q0, "certificate Q0 (<= 0)")->required();
    um_moments->add_option("--trials", um_trials, "number of trials")->capture_default_str();
    um_moments->add_option("--out", um_out, "output path (default stdout)");

    // --- walk ---------------------------------------------------------------
    auto* walk_cmd = app.add_subcommand("walk", "stopping-time table: t, exact, bound, empirical");
    std::string walk_dist = "-1:0.7,1:0.3";
    long long walk_start = 1, walk_tmax = 50, walk_trials = 100000;
    std::string walk_out;
    walk_cmd->add_option("--dist", walk_dist, "step law, value:prob pairs")->capture_default_str();
    walk_cmd->add_option("--start", walk_start, "start level s")->capture_default_str();
    walk_cmd->add_option("--t-max", walk_tmax, "largest time")->capture_default_str();
    walk_cmd->add_option("--trials", walk_trials, "Monte Carlo trials")->capture_default_str();
    walk_cmd->add_option("--out", walk_out, "output path (default stdout)");

    // --- llt ----------------------------------------------------------------
    auto* llt_cmd = app.add_subcommand("llt", "local-limit-theorem bound check CSV");
    std::string llt_dist = "-1:0.5,1:0.5";
    std::vector<long long> llt_ns{50, 200, 1000};
    std::string llt_out;
    llt_cmd->add_option("--dist", llt_dist, "mean-zero step law, value:prob pairs")
        ->capture_default_str();
    llt_cmd->add_option("--n", llt_ns, "sample sizes")->delimiter(',')->capture_default_str();
    llt_cmd->add_option("--out", llt_out, "output path (default stdout)");

    // --- theory -------------------------------------------------------------
    auto* theory_cmd = app.add_subcommand("theory", "scalar functionals of a degree sequence");
    SequenceOptions theory_seq;
    add_sequence_options(theory_cmd, theory_seq);
    std::optional<double> theory_m0, theory_q0;
    theory_cmd->add_option("--m0", theory_m0, "certificate m0 to evaluate");
    theory_cmd->add_option("--q0", theory_q0, "certificate Q0 to evaluate");

    CLI11_PARSE(app, argc, argv);

    try {
        if (exp_cmd->parsed()) {
            ExperimentConfig cfg = ExperimentConfig::from_config(ConfigFile::parse_file(exp_config));
            if (exp_seed) cfg.seed = *exp_seed;
            if (exp_trials) cfg.trials = *exp_trials;
            if (exp_out) cfg.out = *exp_out;
            if (exp_workers) cfg.workers = *exp_workers;
            const ExperimentResult res = run_experiment(cfg);
            write_experiment_outputs(cfg, res);
            std::cout << res.summary.dump(2) << std::endl;
            if (exp_assert && !res.pass) return 4;
            return 0;
        }

        if (cm_cmd->parsed()) {
            const DegreeSequence d = build_sequence_cli(cm_seq);
            std::ofstream file;
            std::ostream& os = open_out(file, cm_out);
            if (cm_sample->parsed()) {
                Rng rng(seed);
                sample_cm(d, rng).write_edge_list(os);
            } else if (cm_explore->parsed()) {
                Rng rng(seed);
                const ExplorationTrace trace =
                    explore_cm(d, static_cast<Vertex>(cm_start), rng);
                os << "t,x,m,q,r,event,vertex\n";
                for (std::size_t t = 0; t < trace.steps.size(); ++t) {
                    const CmStep& s = trace.steps[t];
                    os << (t + 1) << ',' << s.x << ',' << s.m_t << ','
                       << format_double(s.q_t) << ',' << format_double(s.r_t) << ','
                       << cm_event_name(s.event) << ',' << s.vertex << '\n';
                }
            } else {
                const L1Sample sample = l1_statistics(d, cm_trials, seed);
                os << "trial,l1,simple\n";
                for (std::size_t i = 0; i < sample.l1.size(); ++i)
                    os << i << ',' << sample.l1[i] << ',' << int(sample.simple[i]) << '\n';
            }
            return 0;
        }

        if (um_cmd->parsed()) {
            const DegreeSequence d = build_sequence_cli(um_seq);
            std::ofstream file;
            std::ostream& os = open_out(file, um_out);
            auto sample_graph = [&](std::uint64_t s) {
                if (um_method == "switching")
                    return sample_um_switching(d, um_burn_factor * d.m(), s);
                Rng rng(s);
                return sample_um_rejection(d, um_max_attempts, rng);
            };
            if (um_sample->parsed()) {
                sample_graph(seed).write_edge_list(os);
            } else if (um_explore->parsed()) {
                const MultiGraph g = sample_graph(seed);
                Rng rng(seed ^ 0xE1E1E1E1ULL);
                const UmTrace trace =
                    explore_um(g, d, um_m0, um_q0, static_cast<Vertex>(um_start), rng);
                os << "t,x,m,l,eta,z,event,vertex\n";
                for (std::size_t t = 0; t < trace.steps.size(); ++t) {
                    const UmStep& s = trace.steps[t];
                    os << (t + 1) << ',' << s.x << ',' << s.m_t << ',' << s.l_t << ',' << s.eta
                       << ',' << format_double(s.z) << ',' << (s.restart ? "restart" : "reveal")
                       << ',' << s.vertex << '\n';
                }
            } else {
                const MomentReport report =
                    increment_moment_check(d, um_m0, um_q0, um_trials, seed);
                os << "t,samples,eta_mean,se,q0_half,mean_ok,eta_sq_mean,se2,four_r,sq_ok,"
                      "deg1_rate,deg1_pred,deg1_ok\n";
                for (const MomentCheckRow& r : report.rows)
                    os << r.t << ',' << r.samples << ',' << format_double(r.eta_mean) << ','
                       << format_double(r.eta_mean_se) << ',' << format_double(r.q0_half) << ','
                       << r.mean_ok << ',' << format_double(r.eta_sq_mean) << ','
                       << format_double(r.eta_sq_mean_se) << ',' << format_double(r.four_r) << ','
                       << r.sq_ok << ',' << format_double(r.deg1_rate) << ','
                       << format_double(r.deg1_pred) << ',' << r.deg1_ok << '\n';
            }
            return 0;
        }

        if (walk_cmd->parsed()) {
            const WalkSpec spec(parse_distribution_literal(walk_dist), walk_start);
            std::ofstream file;
            std::ostream& os = open_out(file, walk_out);
            const std::vector<double> exact = exact_stop_prob_upto(spec, walk_tmax);
            std::vector<long long> hits(static_cast<std::size_t>(walk_tmax) + 1, 0);
            for (long long trial = 0; trial < walk_trials; ++trial) {
                Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(trial));
                const StopResult r = simulate_stop(spec, walk_tmax, rng);
                if (!r.censored) ++hits[static_cast<std::size_t>(r.time)];
            }
            const bool has_theta = mgf_derivative(spec.step, 1, 0.0) < 0.0 &&
                                   spec.step.max_value() >= 1;
            os << "t,exact,bound,empirical\n";
            for (long long t = 1; t <= walk_tmax; ++t) {
                const double bound =
                    has_theta ? ub_up_bound(spec, static_cast<double>(t)) : std::nan("");
                os << t << ',' << format_double(exact[static_cast<std::size_t>(t)]) << ','
                   << format_double(bound) << ','
                   << format_double(static_cast<double>(hits[static_cast<std::size_t>(t)]) /
                                    static_cast<double>(walk_trials))
                   << '\n';
            }
            return 0;
        }

        if (llt_cmd->parsed()) {
            const LatticeDistribution dist = parse_distribution_literal(llt_dist);
            std::ofstream file;
            std::ostream& os = open_out(file, llt_out);
            os << "n,lhs_sup,rhs,rhs_integral,holds,sigma2,gamma,h,h_h\n";
            for (const long long n : llt_ns) {
                const LltBoundCheck chk = llt_bound_check(dist, n);
                os << n << ',' << format_double(chk.lhs_sup) << ',' << format_double(chk.rhs)
                   << ',' << format_double(chk.rhs_integral) << ',' << chk.holds << ','
                   << format_double(chk.sigma2) << ',' << format_double(chk.gamma3) << ','
                   << chk.step << ',' << format_double(chk.h_h.value) << '\n';
            }
            return 0;
        }

        if (theory_cmd->parsed()) {
            const DegreeSequence d = build_sequence_cli(theory_seq);
            std::cout << "n = " << d.n() << "\nm = " << d.m()
                      << "\nmax_degree = " << d.max_degree() << "\nq = " << d.q_value()
                      << "\nr = " << d.r_value() << '\n';
            const auto ls = d.lattice_step();
            std::cout << "lattice_step = " << ls.step << " (offset " << ls.offset
                      << (ls.degenerate ? ", degenerate)" : ")") << '\n';
            const auto star = d.star_set();
            std::cout << "star_set_size = " << star.size << "\nm_star = " << star.degree_sum
                      << '\n';
            if (d.q_value() < 0.0 && d.increment_pmf().max_value() >= 1) {
                const auto sol = theta0_solve(d.increment_pmf());
                std::cout << "theta0 = " << sol.theta0 << "\nphi(theta0) = " << sol.phi_at
                          << "\nphi''(theta0) = " << sol.phi2_at
                          << "\nt_n = " << t_bound(d.increment_pmf(), d)
                          << "\nclosed_form = " << closed_form_threshold(d) << '\n';
            }
            const auto rep = d.check_assumptions();
            std::cout << "assumption (ii) Q = " << rep.q_to_zero.value << " [" << rep.q_to_zero.note
                      << "]\n"
                      << "assumption (iii) fraction deg not in {0,2} = "
                      << rep.non_two_fraction.value
                      << (rep.non_two_fraction.holds ? " [holds]" : " [fails]") << '\n'
                      << "assumption (iv) h_n = " << rep.lattice.value << " [" << rep.lattice.note
                      << "]\n"
                      << "assumption (v) E[D^4] = " << rep.fourth_moment.value
                      << (rep.fourth_moment.holds ? " <= sqrt(max_degree) [holds]"
                                                  : " > sqrt(max_degree) [fails]")
                      << '\n';
            if (theory_m0 && theory_q0) {
                const auto cert = d.subcritical_certificate(*theory_m0, *theory_q0);
                std::cout << "certificate valid = " << cert.valid
                          << "\n  set_size = " << cert.set_size
                          << "\n  set_degree_sum = " << cert.set_degree_sum
                          << "\n  residual_q = " << cert.residual_q << "\n  T = " << cert.t_value
                          << "\n  lambda = " << cert.lambda
                          << "\n  m0 >= 3m*: " << cert.cond_m0_ge_3mstar
                          << "\n  log condition: " << cert.cond_log_inequality << '\n';
            }
            return 0;
        }
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const precondition_error& e) {
        std::cerr << "precondition failure: " << e.what() << '\n';
        return 3;
    } catch (const no_root_error& e) {
        std::cerr << "precondition failure: " << e.what() << '\n';
        return 3;
    } catch (const not_graphical_error& e) {
        std::cerr << "precondition failure: " << e.what() << '\n';
        return 3;
    } catch (const invalid_mass_error& e) {
        std::cerr << "precondition failure: " << e.what() << '\n';
        return 3;
    } catch (const attempts_exhausted_error& e) {
        std::cerr << "precondition failure: " << e.what() << '\n';
        return 3;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
