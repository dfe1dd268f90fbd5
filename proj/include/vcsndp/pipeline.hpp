#ifndef VCSNDP_PIPELINE_HPP
#define VCSNDP_PIPELINE_HPP

#include "vcsndp/connectivity.hpp"
#include "vcsndp/element_solver.hpp"
#include "vcsndp/errors.hpp"
#include "vcsndp/family.hpp"
#include "vcsndp/instance.hpp"
#include "vcsndp/subset_search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace vcsndp {

enum class Backend { iterative, exact };

inline const char* to_string(Backend b) { return b == Backend::iterative ? "iterative" : "exact"; }

struct PipelineConfig {
    FamilyMode mode = FamilyMode::general;
    std::optional<std::pair<int, int>> params_override; ///< (p, q)
    bool allow_unsafe_params = false;                   ///< accept overrides with p != 2kq
    LogBasis log_basis = LogBasis::tau;
    std::uint64_t seed = 0;
    Backend backend = Backend::iterative;
    bool verify_family = false;
    int max_resamples = 16;
    bool verify_solution = false;
    std::uint64_t exact_budget = default_exact_budget;
    std::uint64_t goodness_budget = default_goodness_budget;
    unsigned jobs = 1;
};

/// One distinct element instance solved by the pipeline. Copies whose
/// inducing subsets coincide share a single solve.
struct ElementSolve {
    std::vector<Vertex> subset;
    std::size_t active_pairs = 0;
    EdgeSolution edges;
    SolveCertificate certificate;
};

/// A subset T_i with at least one active pair, and the distinct solve it maps to.
struct CopyRecord {
    int index = 0;
    std::size_t solve = 0;
};

struct PipelineResult {
    FamilyMode mode = FamilyMode::general;
    std::optional<Vertex> source;
    int k = 0;
    int tau = 0;
    FamilyParams params;
    TerminalFamily family;
    std::optional<GoodnessReport> goodness;
    int resamples_used = 0;
    std::vector<ElementSolve> solves;
    std::vector<CopyRecord> copies;
    EdgeSolution solution;
    std::optional<VerificationReport> verification;
    double lower_bound = 0.0; ///< largest per-copy lower bound; each is <= OPT
    double cost_bound = 0.0;  ///< 2 * p * lower_bound

    const ElementSolve& copy_solve(const CopyRecord& c) const { return solves[c.solve]; }

    /// Sum over copies of the per-copy lower bounds.
    double lower_bound_sum() const {
        double s = 0.0;
        for (const CopyRecord& c : copies) s += solves[c.solve].certificate.lp_lower_bound;
        return s;
    }
};

class FamilyNotGoodError : public std::runtime_error {
public:
    FamilyNotGoodError(const std::string& what, GoodnessWitness witness)
        : std::runtime_error(what), witness_(std::move(witness)) {}
    const GoodnessWitness& witness() const { return witness_; }

private:
    GoodnessWitness witness_;
};

/// A per-copy backend failure, tagged with the subset index that raised it.
class BackendError : public std::runtime_error {
public:
    BackendError(int index, const std::string& what)
        : std::runtime_error("instance " + std::to_string(index) + ": " + what), index_(index) {}
    int index() const { return index_; }

private:
    int index_;
};

/// Vertex shared by every requirement pair (smallest such id), if any.
inline std::optional<Vertex> common_source(const Instance& inst) {
    const auto& reqs = inst.requirements();
    if (reqs.empty()) return std::nullopt;
    for (Vertex c : {std::min(reqs[0].u, reqs[0].v), std::max(reqs[0].u, reqs[0].v)}) {
        if (std::all_of(reqs.begin(), reqs.end(), [c](const Requirement& q) { return q.u == c || q.v == c; }))
            return c;
    }
    return std::nullopt;
}

/// Throws InfeasibleError naming the first pair whose requirement exceeds its
/// vertex connectivity in the full graph.
inline void check_vc_feasible(const Instance& inst) {
    const EdgeMask all = inst.all_edges();
    for (const Requirement& q : inst.requirements()) {
        int kappa = vertex_connectivity_pair(inst, all, q.u, q.v).value;
        if (kappa < q.r)
            throw InfeasibleError("pair (" + std::to_string(q.u) + "," + std::to_string(q.v) + ") requires " +
                                  std::to_string(q.r) + " but the full graph only has vertex connectivity " +
                                  std::to_string(kappa));
    }
}

namespace detail {

/// Runs task(i) for i in [0, count) on up to `jobs` threads. The first
/// exception (by index) is rethrown after all workers finish.
template <class Task>
void parallel_for(std::size_t count, unsigned jobs, Task task) {
    std::vector<std::exception_ptr> errors(count);
    auto run = [&](std::size_t i) {
        try {
            task(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) run(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) run(i);
            });
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct Plan {
    FamilyParams params;
    TerminalSet family_terminals; ///< terminals that draw indices
    std::optional<Vertex> source;
};

inline FamilyParams resolve_params(const PipelineConfig& cfg, FamilyMode mode, int k, int n, int tau) {
    const int basis = cfg.log_basis == LogBasis::n ? n : tau;
    if (!cfg.params_override) return default_params(k, basis, mode, cfg.log_basis);
    FamilyParams params;
    params.k = k;
    params.basis = basis;
    params.log_basis = cfg.log_basis;
    params.mode = mode;
    params.p = cfg.params_override->first;
    params.q = cfg.params_override->second;
    params.validate(cfg.allow_unsafe_params);
    return params;
}

inline PipelineResult run_pipeline(const Instance& inst, const PipelineConfig& cfg, FamilyMode mode) {
    if (inst.requirements().empty()) throw std::invalid_argument("instance has no requirements");
    if (cfg.max_resamples < 1) throw std::invalid_argument("max_resamples must be at least 1");
    check_vc_feasible(inst);

    PipelineResult result;
    result.mode = mode;
    const TerminalSet terminals = derive_terminals(inst);
    result.k = inst.k();
    result.tau = static_cast<int>(terminals.size());

    TerminalSet drawing = terminals;
    if (mode == FamilyMode::single_source) {
        result.source = common_source(inst);
        if (!result.source) throw std::invalid_argument("requirement pairs share no common source vertex");
        std::vector<Vertex> sinks;
        for (Vertex t : terminals.members())
            if (t != *result.source) sinks.push_back(t);
        drawing = TerminalSet(std::move(sinks));
    }
    result.params = resolve_params(cfg, mode, result.k, inst.n(), result.tau);

    for (int attempt = 0; attempt < cfg.max_resamples; ++attempt) {
        result.family = sample_family(drawing, result.params, cfg.seed + static_cast<std::uint64_t>(attempt));
        result.resamples_used = attempt;
        if (!cfg.verify_family) break;
        result.goodness = mode == FamilyMode::general
                              ? is_good_family_general(result.family, inst.requirements(), terminals, result.k,
                                                       cfg.goodness_budget)
                              : is_good_family_single_source(result.family, drawing, result.k, cfg.goodness_budget);
        if (result.goodness->good) break;
        if (attempt + 1 == cfg.max_resamples)
            throw FamilyNotGoodError("no good family within " + std::to_string(cfg.max_resamples) +
                                         " samples; last witness: " + result.goodness->witness->note,
                                     *result.goodness->witness);
    }

    // Induce one element instance per subset; identical subsets share a solve.
    std::map<std::vector<Vertex>, std::size_t> seen;
    std::vector<ElementInstance> distinct;
    std::vector<int> first_index;
    for (int i = 1; i <= result.params.p; ++i) {
        std::vector<Vertex> subset = result.family.subset(i);
        if (result.source) {
            subset.push_back(*result.source);
            std::sort(subset.begin(), subset.end());
        }
        if (subset.size() < 2) continue;
        auto it = seen.find(subset);
        if (it == seen.end()) {
            ElementInstance ei = induce_element_instance(inst, terminals, subset);
            if (ei.active_pairs().empty()) continue;
            it = seen.emplace(subset, distinct.size()).first;
            distinct.push_back(std::move(ei));
            first_index.push_back(i);
            result.solves.push_back({subset, distinct.back().active_pairs().size(), {}, {}});
        }
        result.copies.push_back({i, it->second});
    }

    parallel_for(distinct.size(), cfg.jobs, [&](std::size_t j) {
        ElementSolve& out = result.solves[j];
        try {
            if (cfg.backend == Backend::iterative) {
                auto [sol, cert] = solve_iterative_rounding(distinct[j]);
                out.edges = std::move(sol);
                out.certificate = std::move(cert);
            } else {
                out.edges = solve_exact(distinct[j], cfg.exact_budget);
                out.certificate.solution_cost = out.edges.cost;
                out.certificate.lp_lower_bound = out.edges.cost.to_double();
                out.certificate.ratio = 1.0;
            }
        } catch (const BudgetExceeded&) {
            throw;
        } catch (const std::exception& e) {
            throw BackendError(first_index[j], e.what());
        }
    });

    EdgeMask uni(static_cast<std::size_t>(inst.m()), false);
    for (const ElementSolve& s : result.solves)
        for (EdgeId e : s.edges.edge_ids) uni[static_cast<std::size_t>(e)] = true;
    result.solution = make_solution(inst, uni);
    for (const ElementSolve& s : result.solves)
        result.lower_bound = std::max(result.lower_bound, s.certificate.lp_lower_bound);
    result.cost_bound = 2.0 * result.params.p * result.lower_bound;
    if (cfg.verify_solution) result.verification = verify_vc_solution(inst, result.solution);
    return result;
}

} // namespace detail

/// General VC-SNDP: sample a terminal family, solve the element-connectivity
/// instance induced by every subset, and return the union of their edge sets.
inline PipelineResult solve_vcsndp(const Instance& inst, const PipelineConfig& cfg) {
    return detail::run_pipeline(inst, cfg, FamilyMode::general);
}

/// Single-source VC-SNDP: as solve_vcsndp, with the source joining every
/// induced terminal set and only the sinks drawing indices.
inline PipelineResult solve_single_source(const Instance& inst, const PipelineConfig& cfg) {
    return detail::run_pipeline(inst, cfg, FamilyMode::single_source);
}

/// Dispatches on cfg.mode.
inline PipelineResult solve(const Instance& inst, const PipelineConfig& cfg) {
    return cfg.mode == FamilyMode::general ? solve_vcsndp(inst, cfg) : solve_single_source(inst, cfg);
}

/// Minimum-cost edge set in which every requirement pair is r-vertex connected.
inline EdgeSolution solve_exact_vcsndp(const Instance& inst, std::uint64_t budget = default_exact_budget) {
    if (inst.requirements().empty()) return EdgeSolution{};
    auto feasible = [&inst](const EdgeMask& mask) {
        for (const Requirement& q : inst.requirements())
            if (vertex_connectivity_pair(inst, mask, q.u, q.v).value < q.r) return false;
        return true;
    };
    return min_cost_feasible_subset(inst, inst.requirements(), feasible, budget);
}

struct BenchmarkOptions {
    bool run_exact = true;
    std::uint64_t exact_budget = default_exact_budget;
    bool timing = false;
};

struct BenchmarkRecord {
    std::string name;
    int n = 0;
    int m = 0;
    int k = 0;
    int tau = 0;
    int p = 0;
    int q = 0;
    std::optional<Cost> cost;
    std::optional<Cost> exact_opt;
    std::optional<double> lp_bound_sum;
    std::optional<double> empirical_ratio;
    std::optional<bool> feasible;
    int family_resamples = 0;
    std::size_t distinct_instances = 0;
    std::optional<double> wall_time_ms;
    std::string error;
};

struct BenchmarkReport {
    std::vector<BenchmarkRecord> records;
    std::optional<double> mean_ratio;
    std::optional<double> max_ratio;
};

/// Runs the pipeline, and the exact oracle where its budget allows, over a
/// named corpus. Failures are recorded per instance; the batch continues.
inline BenchmarkReport benchmark(const std::vector<std::pair<std::string, Instance>>& corpus, const PipelineConfig& cfg,
                                 const BenchmarkOptions& opts = {}) {
    BenchmarkReport report;
    double ratio_sum = 0.0;
    int ratio_count = 0;
    for (const auto& [name, inst] : corpus) {
        BenchmarkRecord rec;
        rec.name = name;
        rec.n = inst.n();
        rec.m = inst.m();
        rec.k = inst.k();
        rec.tau = static_cast<int>(derive_terminals(inst).size());
        auto start = std::chrono::steady_clock::now();
        try {
            PipelineResult res = solve(inst, cfg);
            rec.p = res.params.p;
            rec.q = res.params.q;
            rec.cost = res.solution.cost;
            rec.lp_bound_sum = res.lower_bound_sum();
            rec.family_resamples = res.resamples_used;
            rec.distinct_instances = res.solves.size();
            if (res.verification) rec.feasible = res.verification->feasible;
            if (opts.run_exact) {
                try {
                    rec.exact_opt = solve_exact_vcsndp(inst, opts.exact_budget).cost;
                    rec.empirical_ratio = cost_ratio(*rec.cost, rec.exact_opt->to_double());
                } catch (const BudgetExceeded&) {
                    // The exact oracle is best effort; the record simply omits it.
                }
            }
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
        if (opts.timing)
            rec.wall_time_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (rec.empirical_ratio) {
            ratio_sum += *rec.empirical_ratio;
            ++ratio_count;
            report.max_ratio = std::max(report.max_ratio.value_or(0.0), *rec.empirical_ratio);
        }
        report.records.push_back(std::move(rec));
    }
    if (ratio_count > 0) report.mean_ratio = ratio_sum / ratio_count;
    return report;
}

} // namespace vcsndp

#endif // VCSNDP_PIPELINE_HPP
