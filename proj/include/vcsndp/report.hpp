#ifndef VCSNDP_REPORT_HPP
#define VCSNDP_REPORT_HPP

#include "vcsndp/pipeline.hpp"

#include "json.hpp"

#include <cmath>
#include <optional>

namespace vcsndp {

namespace detail {

inline nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

template <class T>
nlohmann::json optional_json(const std::optional<T>& x) {
    return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

} // namespace detail

inline nlohmann::json verification_json(const VerificationReport& report) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const PairCheck& p : report.pairs)
        pairs.push_back({{"u", p.u}, {"v", p.v}, {"required", p.required}, {"achieved", p.achieved}});
    return {{"feasible", report.feasible}, {"pairs", pairs}};
}

/// Machine report of one pipeline run. Contains no timing data, so equal
/// inputs and seeds give byte-identical output.
inline nlohmann::json pipeline_json(const Instance& inst, const PipelineConfig& cfg, const PipelineResult& res) {
    nlohmann::json j;
    j["mode"] = to_string(res.mode);
    j["source"] = detail::optional_json(res.source);
    j["n"] = inst.n();
    j["m"] = inst.m();
    j["k"] = res.k;
    j["tau"] = res.tau;
    j["p"] = res.params.p;
    j["q"] = res.params.q;
    j["log_basis"] = to_string(res.params.log_basis);
    j["basis"] = res.params.basis;
    j["seed"] = cfg.seed;
    j["backend"] = to_string(cfg.backend);
    j["family_checked"] = res.goodness.has_value();
    j["family_good"] = res.goodness ? nlohmann::json(res.goodness->good) : nlohmann::json(nullptr);
    j["family_resamples"] = res.resamples_used;
    j["family_seed"] = res.family.seed();
    j["cost"] = res.solution.cost.to_string();
    j["edge_ids"] = res.solution.edge_ids;
    j["copies"] = res.copies.size();
    j["distinct_instances"] = res.solves.size();
    j["lower_bound"] = res.lower_bound;
    j["lp_bound_sum"] = res.lower_bound_sum();
    j["cost_bound"] = res.cost_bound;
    j["verification"] = res.verification ? verification_json(*res.verification) : nlohmann::json(nullptr);

    nlohmann::json per = nlohmann::json::array();
    for (const CopyRecord& c : res.copies) {
        const ElementSolve& s = res.copy_solve(c);
        per.push_back({{"instance_index", c.index},
                       {"distinct", c.solve},
                       {"subset", s.subset},
                       {"lp_lower_bound", s.certificate.lp_lower_bound},
                       {"cost", s.edges.cost.to_string()},
                       {"ratio", detail::finite_or_null(s.certificate.ratio)},
                       {"theory_deviation", s.certificate.theory_deviation}});
    }
    j["per_instance"] = per;
    return j;
}

inline nlohmann::json benchmark_json(const BenchmarkReport& report) {
    nlohmann::json records = nlohmann::json::array();
    for (const BenchmarkRecord& r : report.records) {
        nlohmann::json j;
        j["name"] = r.name;
        j["n"] = r.n;
        j["m"] = r.m;
        j["k"] = r.k;
        j["tau"] = r.tau;
        j["p"] = r.p;
        j["q"] = r.q;
        j["cost"] = r.cost ? nlohmann::json(r.cost->to_string()) : nlohmann::json(nullptr);
        j["exact_opt"] = r.exact_opt ? nlohmann::json(r.exact_opt->to_string()) : nlohmann::json(nullptr);
        j["lp_bound_sum"] = detail::optional_json(r.lp_bound_sum);
        j["empirical_ratio"] =
            r.empirical_ratio ? detail::finite_or_null(*r.empirical_ratio) : nlohmann::json(nullptr);
        j["ratio_bound"] = 2 * r.p;
        j["feasible"] = detail::optional_json(r.feasible);
        j["family_resamples"] = r.family_resamples;
        j["distinct_instances"] = r.distinct_instances;
        if (r.wall_time_ms) j["wall_time_ms"] = *r.wall_time_ms;
        if (!r.error.empty()) j["error"] = r.error;
        records.push_back(std::move(j));
    }
    return {{"instances", records},
            {"mean_ratio", detail::optional_json(report.mean_ratio)},
            {"max_ratio", detail::optional_json(report.max_ratio)}};
}

} // namespace vcsndp

#endif // VCSNDP_REPORT_HPP
