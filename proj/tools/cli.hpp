#ifndef VCSNDP_TOOLS_CLI_HPP
#define VCSNDP_TOOLS_CLI_HPP

#include "vcsndp/vcsndp.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace vcsndp::cli {

// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_negative = 1; // infeasible or not-good result
inline constexpr int exit_usage = 2;
inline constexpr int exit_budget = 3;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open instance file '" + path + "'");
    try {
        return parse_instance(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path + ": " + std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
    }
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
}

/// Flags shared by `solve` and `bench`.
struct SolveFlags {
    std::string single_source = "auto";
    std::string backend = "iterative";
    std::uint64_t seed = 0;
    std::optional<int> p;
    std::optional<int> q;
    bool unsafe_params = false;
    std::string log_basis = "tau";
    bool verify = false;
    bool verify_family = false;
    int max_resamples = 16;
    std::string json;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t exact_budget = default_exact_budget;

    void attach(CLI::App& app) {
        app.add_option("--single-source", single_source, "Single-source mode: auto|on|off")
            ->check(CLI::IsMember({"auto", "on", "off"}));
        app.add_option("--backend", backend, "Element-connectivity backend: iterative|exact")
            ->check(CLI::IsMember({"iterative", "exact"}));
        app.add_option("--seed", seed, "Family sampling seed");
        app.add_option("--p", p, "Override the number of subsets p");
        app.add_option("--q", q, "Override the draws per terminal q");
        app.add_flag("--unsafe-params", unsafe_params, "Accept --p/--q overrides with p != 2kq");
        app.add_option("--log-basis", log_basis, "Logarithm basis for default parameters: n|tau")
            ->check(CLI::IsMember({"n", "tau"}));
        app.add_flag("--verify", verify, "Verify vertex connectivity of the final solution");
        app.add_flag("--verify-family", verify_family, "Exhaustively check the sampled family; resample if bad");
        app.add_option("--max-resamples", max_resamples, "Family samples before giving up")
            ->check(CLI::PositiveNumber);
        app.add_option("--json", json, "Write the machine-readable report to this path");
        app.add_option("--jobs", jobs, "Worker threads for the per-subset solves")->check(CLI::PositiveNumber);
        app.add_option("--exact-budget", exact_budget, "Node budget of exact searches");
    }

    PipelineConfig config(const Instance& inst) const {
        if (p.has_value() != q.has_value()) throw UsageError("--p and --q must be given together");
        if (unsafe_params && !p) throw UsageError("--unsafe-params requires --p and --q");
        PipelineConfig cfg;
        if (single_source == "on")
            cfg.mode = FamilyMode::single_source;
        else if (single_source == "off")
            cfg.mode = FamilyMode::general;
        else
            cfg.mode = common_source(inst) ? FamilyMode::single_source : FamilyMode::general;
        if (p) {
            cfg.params_override = std::pair(*p, *q);
            const int k = inst.k();
            if (!unsafe_params && *p != 2 * k * *q)
                throw UsageError("--p must equal 2*k*q (k=" + std::to_string(k) + "); pass --unsafe-params to override");
        }
        cfg.allow_unsafe_params = unsafe_params;
        cfg.log_basis = log_basis == "n" ? LogBasis::n : LogBasis::tau;
        cfg.seed = seed;
        cfg.backend = backend == "exact" ? Backend::exact : Backend::iterative;
        cfg.verify_family = verify_family;
        cfg.max_resamples = max_resamples;
        cfg.verify_solution = verify;
        cfg.exact_budget = exact_budget;
        cfg.jobs = jobs;
        return cfg;
    }
};

inline std::string fmt_double(double x) {
    std::ostringstream out;
    out << std::setprecision(10) << x;
    return out.str();
}

inline void print_violations(std::ostream& out, const VerificationReport& report) {
    for (const PairCheck& p : report.violations())
        out << "violated pair (" << p.u << "," << p.v << "): required " << p.required << ", achieved " << p.achieved
            << '\n';
}

} // namespace detail

/// Runs the command line `args` (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Vertex-connectivity survivable network design toolkit"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random feasible instance");
    std::string gen_model = "erdos-renyi";
    GeneratorSpec gspec;
    std::string gen_out;
    std::optional<double> gen_edge_param;
    gen->add_option("--model", gen_model, "erdos-renyi|grid|wheel")
        ->check(CLI::IsMember({"erdos-renyi", "grid", "wheel"}));
    gen->add_option("--n", gspec.n, "Vertex count")->required();
    gen->add_option("--edge-param", gen_edge_param, "Edge probability (erdos-renyi) or row width (grid)");
    gen->add_option("--k", gspec.k, "Maximum requirement")->required();
    gen->add_option("--pairs", gspec.num_pairs, "Requirement pairs to draw");
    gen->add_option("--cost-min", gspec.cost_min, "Smallest integer edge cost");
    gen->add_option("--cost-max", gspec.cost_max, "Largest integer edge cost");
    gen->add_option("--seed", gspec.seed, "Generator seed");
    gen->add_option("-o,--output", gen_out, "Output path (default: standard output)");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Run the randomized reduction pipeline");
    std::string solve_inst;
    std::string solve_sol_out;
    detail::SolveFlags solve_flags;
    solve_cmd->add_option("instance", solve_inst, "Instance file")->required();
    solve_cmd->add_option("-o,--output", solve_sol_out, "Write the solution file here");
    solve_flags.attach(*solve_cmd);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Check a solution against an instance");
    std::string verify_inst, verify_sol;
    verify_cmd->add_option("instance", verify_inst, "Instance file")->required();
    verify_cmd->add_option("solution", verify_sol, "Solution file")->required();

    // family
    auto* family_cmd = app.add_subcommand("family", "Sample and diagnose a terminal family");
    std::optional<int> fam_terminals;
    std::string fam_from;
    std::optional<int> fam_k;
    std::optional<int> fam_basis;
    std::string fam_mode = "general";
    std::uint64_t fam_seed = 0;
    bool fam_check = false;
    std::optional<std::uint64_t> fam_estimate;
    std::string fam_dump;
    auto* opt_terms = family_cmd->add_option("--terminals", fam_terminals, "Use terminals 0..count-1, all pairs demanded");
    auto* opt_from = family_cmd->add_option("--from", fam_from, "Take terminals, pairs and k from an instance");
    opt_terms->excludes(opt_from);
    family_cmd->add_option("--k", fam_k, "Maximum requirement");
    family_cmd->add_option("--basis", fam_basis, "Logarithm basis (default: number of terminals)");
    family_cmd->add_option("--mode", fam_mode, "general|single-source")
        ->check(CLI::IsMember({"general", "single-source"}));
    family_cmd->add_option("--seed", fam_seed, "Sampling seed");
    family_cmd->add_flag("--check", fam_check, "Run the exhaustive goodness check");
    family_cmd->add_option("--estimate", fam_estimate, "Monte Carlo bad-event trials");
    family_cmd->add_option("--dump", fam_dump, "Write the family (phi lines) to this path");

    // exact
    auto* exact_cmd = app.add_subcommand("exact", "Exact minimum-cost VC-SNDP solution (small instances)");
    std::string exact_inst, exact_out;
    std::uint64_t exact_budget = default_exact_budget;
    exact_cmd->add_option("instance", exact_inst, "Instance file")->required();
    exact_cmd->add_option("--budget", exact_budget, "Branch-and-bound node budget");
    exact_cmd->add_option("-o,--output", exact_out, "Write the solution file here");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run the pipeline over every *.txt instance in a directory");
    std::string bench_dir;
    detail::SolveFlags bench_flags;
    bool bench_no_exact = false;
    bool bench_timing = false;
    bench_cmd->add_option("directory", bench_dir, "Corpus directory")->required();
    bench_cmd->add_flag("--no-exact", bench_no_exact, "Skip the exact oracle");
    bench_cmd->add_flag("--timing", bench_timing, "Record wall time per instance (makes output nondeterministic)");
    bench_flags.attach(*bench_cmd);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (gen->parsed()) {
            gspec.model = *parse_graph_model(gen_model);
            if (gspec.model == GraphModel::wheel && gen_edge_param)
                throw UsageError("--edge-param has no meaning for the wheel model");
            if (gen_edge_param)
                gspec.edge_param = *gen_edge_param;
            else if (gspec.model == GraphModel::grid)
                gspec.edge_param = std::max(1.0, std::floor(std::sqrt(static_cast<double>(gspec.n))));
            Instance inst = generate_instance(gspec);
            std::string text = write_instance(inst);
            if (gen_out.empty())
                out << text;
            else
                detail::write_text(gen_out, text);
            return exit_ok;
        }

        if (solve_cmd->parsed()) {
            Instance inst = detail::load_instance(solve_inst);
            PipelineConfig cfg = solve_flags.config(inst);
            PipelineResult res = solve(inst, cfg);
            out << "mode " << to_string(res.mode);
            if (res.source) out << " (source " << *res.source << ")";
            out << "\nk " << res.k << "  |T| " << res.tau << "  p " << res.params.p << "  q " << res.params.q << '\n';
            if (res.goodness) out << "family " << (res.goodness->good ? "good" : "not good") << " after "
                                  << res.resamples_used << " resamples\n";
            out << "copies " << res.copies.size() << "  distinct instances " << res.solves.size() << '\n';
            out << "cost " << res.solution.cost.to_string() << "  edges " << res.solution.edge_ids.size() << '\n';
            out << "lower bound " << detail::fmt_double(res.lower_bound) << "  certified bound "
                << detail::fmt_double(res.cost_bound) << '\n';
            if (!solve_sol_out.empty()) detail::write_text(solve_sol_out, write_solution(res.solution));
            if (!solve_flags.json.empty())
                detail::write_text(solve_flags.json, pipeline_json(inst, cfg, res).dump(2) + "\n");
            if (res.verification) {
                if (res.verification->feasible) {
                    out << "FEASIBLE\n";
                } else {
                    out << "INFEASIBLE\n";
                    detail::print_violations(out, *res.verification);
                    return exit_negative;
                }
            }
            return exit_ok;
        }

        if (verify_cmd->parsed()) {
            Instance inst = detail::load_instance(verify_inst);
            std::ifstream in(verify_sol);
            if (!in) throw UsageError("cannot open solution file '" + verify_sol + "'");
            EdgeSolution sol = parse_solution(in, inst);
            VerificationReport report = verify_vc_solution(inst, sol);
            for (const PairCheck& p : report.pairs)
                out << "pair (" << p.u << "," << p.v << ") required " << p.required << " achieved " << p.achieved
                    << '\n';
            out << "cost " << sol.cost.to_string() << '\n';
            if (report.feasible) {
                out << "FEASIBLE\n";
                return exit_ok;
            }
            out << "INFEASIBLE\n";
            detail::print_violations(out, report);
            return exit_negative;
        }

        if (family_cmd->parsed()) {
            if (!fam_terminals && fam_from.empty()) throw UsageError("family needs --terminals or --from");
            TerminalSet terminals;
            std::vector<Requirement> pairs;
            int k = 0;
            if (fam_terminals) {
                if (*fam_terminals < 0) throw UsageError("--terminals must be nonnegative");
                if (!fam_k) throw UsageError("--k is required with --terminals");
                std::vector<Vertex> ts(static_cast<std::size_t>(*fam_terminals));
                for (int i = 0; i < *fam_terminals; ++i) ts[static_cast<std::size_t>(i)] = i;
                terminals = TerminalSet(ts);
                for (int u = 0; u < *fam_terminals; ++u)
                    for (int v = u + 1; v < *fam_terminals; ++v) pairs.push_back({u, v, *fam_k});
                k = *fam_k;
            } else {
                Instance inst = detail::load_instance(fam_from);
                terminals = derive_terminals(inst);
                pairs = inst.requirements();
                k = fam_k.value_or(inst.k());
            }
            FamilyMode mode = fam_mode == "general" ? FamilyMode::general : FamilyMode::single_source;
            int basis = fam_basis.value_or(static_cast<int>(terminals.size()));
            FamilyParams params = default_params(k, basis, mode);
            out << "p " << params.p << "  q " << params.q << "  (k " << k << ", basis " << basis << ", "
                << to_string(mode) << ")\n";
            TerminalFamily family = sample_family(terminals, params, fam_seed);
            if (!fam_dump.empty()) {
                std::ostringstream dump;
                write_family(dump, family);
                detail::write_text(fam_dump, dump.str());
            }
            int code = exit_ok;
            if (fam_check) {
                GoodnessReport rep = mode == FamilyMode::general
                                         ? is_good_family_general(family, pairs, terminals, k)
                                         : is_good_family_single_source(family, terminals, k);
                if (rep.good) {
                    out << "GOOD\n";
                } else {
                    out << "NOT GOOD: " << rep.witness->note << '\n';
                    code = exit_negative;
                }
            }
            if (fam_estimate) {
                BadEventRates rates = estimate_bad_events(terminals, params, fam_seed, *fam_estimate);
                const double q = params.q;
                out << "trials " << rates.trials << '\n';
                out << "E1 rate " << detail::fmt_double(rates.rate_e1) << "  bound "
                    << detail::fmt_double(std::exp(-q / 32.0)) << '\n';
                out << "E2 rate " << detail::fmt_double(rates.rate_e2) << "  bound "
                    << detail::fmt_double(std::exp(-q / 32.0) + std::exp(-q / (8.0 * k))) << '\n';
                out << "single-source rate " << detail::fmt_double(rates.rate_single) << "  bound "
                    << detail::fmt_double(std::pow(0.5, q)) << '\n';
            }
            return code;
        }

        if (exact_cmd->parsed()) {
            Instance inst = detail::load_instance(exact_inst);
            EdgeSolution sol = solve_exact_vcsndp(inst, exact_budget);
            out << "optimal cost " << sol.cost.to_string() << "  edges " << sol.edge_ids.size() << '\n';
            if (!exact_out.empty()) detail::write_text(exact_out, write_solution(sol));
            return exit_ok;
        }

        if (bench_cmd->parsed()) {
            namespace fs = std::filesystem;
            if (!fs::is_directory(bench_dir)) throw UsageError("'" + bench_dir + "' is not a directory");
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(bench_dir))
                if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
            std::sort(files.begin(), files.end());
            std::vector<std::pair<std::string, Instance>> corpus;
            for (const auto& f : files) corpus.emplace_back(f.filename().string(), detail::load_instance(f.string()));
            // Mode and overrides are resolved per instance, as for `solve`.
            BenchmarkOptions opts;
            opts.run_exact = !bench_no_exact;
            opts.exact_budget = bench_flags.exact_budget;
            opts.timing = bench_timing;
            BenchmarkReport report;
            for (const auto& item : corpus) {
                std::vector<std::pair<std::string, Instance>> one{item};
                BenchmarkReport r = benchmark(one, bench_flags.config(item.second), opts);
                report.records.push_back(std::move(r.records.front()));
            }
            double sum = 0.0;
            int count = 0;
            for (const auto& rec : report.records) {
                out << rec.name << ": ";
                if (!rec.error.empty()) {
                    out << "error: " << rec.error << '\n';
                    continue;
                }
                out << "cost " << rec.cost->to_string();
                if (rec.exact_opt) out << "  opt " << rec.exact_opt->to_string();
                if (rec.empirical_ratio) {
                    out << "  ratio " << detail::fmt_double(*rec.empirical_ratio);
                    sum += *rec.empirical_ratio;
                    ++count;
                    report.max_ratio = std::max(report.max_ratio.value_or(0.0), *rec.empirical_ratio);
                }
                out << "  p " << rec.p << '\n';
            }
            if (count > 0) {
                report.mean_ratio = sum / count;
                out << "mean ratio " << detail::fmt_double(*report.mean_ratio) << "  max ratio "
                    << detail::fmt_double(*report.max_ratio) << '\n';
            }
            if (!bench_flags.json.empty())
                detail::write_text(bench_flags.json, benchmark_json(report).dump(2) + "\n");
            return exit_ok;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << '\n';
        return exit_usage;
    } catch (const InstanceError& e) {
        err << "input error: " << e.what() << '\n';
        return exit_usage;
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << '\n';
        return exit_budget;
    } catch (const InfeasibleError& e) {
        out << "INFEASIBLE: " << e.what() << '\n';
        return exit_negative;
    } catch (const FamilyNotGoodError& e) {
        out << "NOT GOOD: " << e.what() << '\n';
        return exit_negative;
    } catch (const GenerationError& e) {
        err << "generation failed: " << e.what() << '\n';
        return exit_negative;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "failed: " << e.what() << '\n';
        return exit_negative;
    }
    return exit_usage;
}

} // namespace vcsndp::cli

#endif // VCSNDP_TOOLS_CLI_HPP
