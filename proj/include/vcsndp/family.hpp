#ifndef VCSNDP_FAMILY_HPP
#define VCSNDP_FAMILY_HPP

#include "vcsndp/errors.hpp"
#include "vcsndp/instance.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vcsndp {

enum class FamilyMode { general, single_source };
enum class LogBasis { n, tau };

inline const char* to_string(FamilyMode mode) { return mode == FamilyMode::general ? "general" : "single-source"; }
inline const char* to_string(LogBasis basis) { return basis == LogBasis::n ? "n" : "tau"; }

/// Covering-family parameters: p subsets, q index draws per terminal.
struct FamilyParams {
    int k = 1;
    int basis = 2;
    LogBasis log_basis = LogBasis::tau;
    FamilyMode mode = FamilyMode::general;
    int p = 1;
    int q = 1;

    bool consistent() const { return p == 2 * k * q; }

    /// Throws unless q, p >= 1 and (when !allow_unsafe) p = 2kq.
    void validate(bool allow_unsafe = false) const {
        if (q < 1 || p < 1) throw std::invalid_argument("family parameters need p >= 1 and q >= 1");
        if (k < 1) throw std::invalid_argument("family parameters need k >= 1");
        if (!allow_unsafe && !consistent())
            throw std::invalid_argument("p must equal 2*k*q (got p=" + std::to_string(p) + ", q=" + std::to_string(q) +
                                        ", k=" + std::to_string(k) + ")");
    }

    friend bool operator==(const FamilyParams&, const FamilyParams&) = default;
};

/// q = ceil(64 k^2 ln basis) in general mode, q = ceil(2 k ln basis) in
/// single-source mode; then p = 2kq.
inline FamilyParams default_params(int k, int basis, FamilyMode mode, LogBasis log_basis = LogBasis::tau) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (basis < 2) throw std::invalid_argument("logarithm basis must be at least 2");
    const double lg = std::log(static_cast<double>(basis));
    const double raw = mode == FamilyMode::general ? 64.0 * k * k * lg : 2.0 * k * lg;
    FamilyParams params;
    params.k = k;
    params.basis = basis;
    params.log_basis = log_basis;
    params.mode = mode;
    params.q = std::max(1, static_cast<int>(std::ceil(raw)));
    params.p = 2 * k * params.q;
    return params;
}

/// Index assignment phi over a terminal set, and the derived subsets
/// T_i = { t : i in phi(t) } for i = 1..p.
class TerminalFamily {
public:
    TerminalFamily() = default;

    /// `phi[j]` lists the indices (1-based) drawn by terminals.members()[j].
    TerminalFamily(FamilyParams params, std::uint64_t seed, TerminalSet terminals, std::vector<std::vector<int>> phi)
        : params_(params), seed_(seed), terminals_(std::move(terminals)), phi_(std::move(phi)) {
        if (phi_.size() != terminals_.size()) throw std::invalid_argument("phi does not cover the terminal set");
        subsets_.assign(static_cast<std::size_t>(params_.p), {});
        bits_.reserve(phi_.size());
        for (std::size_t j = 0; j < phi_.size(); ++j) {
            auto& ix = phi_[j];
            std::sort(ix.begin(), ix.end());
            ix.erase(std::unique(ix.begin(), ix.end()), ix.end());
            boost::dynamic_bitset<> b(static_cast<std::size_t>(params_.p));
            for (int i : ix) {
                if (i < 1 || i > params_.p) throw std::invalid_argument("phi index outside 1..p");
                b.set(static_cast<std::size_t>(i - 1));
                subsets_[static_cast<std::size_t>(i - 1)].push_back(terminals_.members()[j]);
            }
            bits_.push_back(std::move(b));
        }
    }

    const FamilyParams& params() const { return params_; }
    std::uint64_t seed() const { return seed_; }
    const TerminalSet& terminals() const { return terminals_; }
    int p() const { return params_.p; }

    /// phi(t) as sorted 1-based indices; empty for non-members.
    const std::vector<int>& phi(Vertex t) const {
        static const std::vector<int> none;
        int j = terminals_.index_of(t);
        return j < 0 ? none : phi_[static_cast<std::size_t>(j)];
    }

    /// phi(t) as a p-bit set (bit i-1 for index i).
    boost::dynamic_bitset<> phi_bits(Vertex t) const {
        int j = terminals_.index_of(t);
        if (j < 0) return boost::dynamic_bitset<>(static_cast<std::size_t>(params_.p));
        return bits_[static_cast<std::size_t>(j)];
    }

    /// T_i for i in 1..p, sorted.
    const std::vector<Vertex>& subset(int i) const { return subsets_.at(static_cast<std::size_t>(i - 1)); }
    const std::vector<std::vector<Vertex>>& subsets() const { return subsets_; }

private:
    FamilyParams params_;
    std::uint64_t seed_ = 0;
    TerminalSet terminals_;
    std::vector<std::vector<int>> phi_;
    std::vector<boost::dynamic_bitset<>> bits_;
    std::vector<std::vector<Vertex>> subsets_;
};

/// Each terminal, in increasing vertex order, draws q indices uniformly from
/// {1..p} with replacement from a single mt19937_64 stream seeded by `seed`.
inline TerminalFamily sample_family(const TerminalSet& terminals, const FamilyParams& params, std::uint64_t seed) {
    params.validate(true);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(1, params.p);
    std::vector<std::vector<int>> phi(terminals.size());
    for (auto& ix : phi) {
        ix.reserve(static_cast<std::size_t>(params.q));
        for (int d = 0; d < params.q; ++d) ix.push_back(pick(rng));
    }
    return TerminalFamily(params, seed, terminals, std::move(phi));
}

/// Failure certificate: no subset contains `covered` while avoiding `blocking`.
struct GoodnessWitness {
    std::vector<Vertex> covered;
    std::vector<Vertex> blocking;
    std::string note;
};

struct GoodnessReport {
    bool good = true;
    std::optional<GoodnessWitness> witness;
    std::uint64_t checks = 0;
};

inline constexpr std::uint64_t default_goodness_budget = std::uint64_t{1} << 36;

namespace detail {

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
    if (r > n) return 0;
    std::uint64_t out = 1;
    for (std::uint64_t i = 1; i <= r; ++i) out = out * (n - r + i) / i;
    return out;
}

/// Word-operation estimate for checking `targets` covered sets against all
/// blocking sets of size <= max_block drawn from `pool` candidates.
inline std::uint64_t goodness_work(std::uint64_t targets, std::uint64_t pool, int max_block, int p) {
    std::uint64_t combos = 0;
    for (int j = 0; j <= max_block; ++j) combos += binomial(pool, static_cast<std::uint64_t>(j));
    return targets * combos * static_cast<std::uint64_t>(p);
}

/// Depth-first search over blocking sets X drawn from `pool` (|X| <= depth)
/// looking for one with remaining & ~phi(X) empty.
inline bool find_blocking_set(const TerminalFamily& family, const std::vector<Vertex>& pool, std::size_t start,
                              int depth, const boost::dynamic_bitset<>& remaining, std::vector<Vertex>& chosen,
                              std::uint64_t& checks) {
    ++checks;
    if (remaining.none()) return true;
    if (depth == 0) return false;
    for (std::size_t j = start; j < pool.size(); ++j) {
        chosen.push_back(pool[j]);
        boost::dynamic_bitset<> next = remaining - family.phi_bits(pool[j]);
        if (find_blocking_set(family, pool, j + 1, depth - 1, next, chosen, checks)) return true;
        chosen.pop_back();
    }
    return false;
}

inline std::string describe(const std::vector<Vertex>& xs) {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? "," : "") << xs[i];
    out << '}';
    return out.str();
}

} // namespace detail

/// Exhaustive check of the pairwise covering condition: for every pair (s,t)
/// and every X within T \ {s,t} of size <= k-1, some index lies in
/// phi(s) & phi(t) but outside phi(X).
inline GoodnessReport is_good_family_general(const TerminalFamily& family, const std::vector<Requirement>& pairs,
                                             const TerminalSet& terminals, int k,
                                             std::uint64_t budget = default_goodness_budget) {
    const int max_block = std::max(0, k - 1);
    const std::uint64_t pool = terminals.size() >= 2 ? terminals.size() - 2 : 0;
    if (detail::goodness_work(pairs.size(), pool, max_block, family.p()) > budget)
        throw BudgetExceeded("goodness check exceeds budget");
    GoodnessReport report;
    for (const Requirement& pr : pairs) {
        std::vector<Vertex> others;
        for (Vertex x : terminals.members())
            if (x != pr.u && x != pr.v) others.push_back(x);
        boost::dynamic_bitset<> shared = family.phi_bits(pr.u) & family.phi_bits(pr.v);
        std::vector<Vertex> chosen;
        if (detail::find_blocking_set(family, others, 0, max_block, shared, chosen, report.checks)) {
            report.good = false;
            report.witness = GoodnessWitness{{pr.u, pr.v}, chosen,
                                             "phi(" + std::to_string(pr.u) + ") & phi(" + std::to_string(pr.v) +
                                                 ") is covered by phi" + detail::describe(chosen)};
            return report;
        }
    }
    return report;
}

/// Exhaustive check of the per-terminal condition: every t has an index in
/// phi(t) outside phi(X) for every X within T \ {t} of size <= k-1.
inline GoodnessReport is_good_family_single_source(const TerminalFamily& family, const TerminalSet& terminals, int k,
                                                   std::uint64_t budget = default_goodness_budget) {
    const int max_block = std::max(0, k - 1);
    const std::uint64_t pool = terminals.size() >= 1 ? terminals.size() - 1 : 0;
    if (detail::goodness_work(terminals.size(), pool, max_block, family.p()) > budget)
        throw BudgetExceeded("goodness check exceeds budget");
    GoodnessReport report;
    for (Vertex t : terminals.members()) {
        std::vector<Vertex> others;
        for (Vertex x : terminals.members())
            if (x != t) others.push_back(x);
        std::vector<Vertex> chosen;
        if (detail::find_blocking_set(family, others, 0, max_block, family.phi_bits(t), chosen, report.checks)) {
            report.good = false;
            report.witness = GoodnessWitness{
                {t}, chosen, "phi(" + std::to_string(t) + ") is covered by phi" + detail::describe(chosen)};
            return report;
        }
    }
    return report;
}

/// Literal replay of a witness against the subsets T_i: true iff no T_i
/// contains every covered vertex while avoiding every blocking vertex.
inline bool witness_holds(const TerminalFamily& family, const GoodnessWitness& w) {
    for (const auto& subset : family.subsets()) {
        auto in = [&](Vertex v) { return std::binary_search(subset.begin(), subset.end(), v); };
        if (std::all_of(w.covered.begin(), w.covered.end(), in) && std::none_of(w.blocking.begin(), w.blocking.end(), in))
            return false;
    }
    return true;
}

/// Same condition as is_good_family_general, evaluated directly on the subsets
/// T_i instead of on index sets. Slow; used to cross-check the index criterion.
inline GoodnessReport is_good_family_general_by_subsets(const TerminalFamily& family,
                                                        const std::vector<Requirement>& pairs,
                                                        const TerminalSet& terminals, int k) {
    const int max_block = std::max(0, k - 1);
    GoodnessReport report;
    for (const Requirement& pr : pairs) {
        std::vector<Vertex> others;
        for (Vertex x : terminals.members())
            if (x != pr.u && x != pr.v) others.push_back(x);
        for (int size = 0; size <= std::min<int>(max_block, static_cast<int>(others.size())); ++size) {
            std::vector<bool> mask(others.size(), false);
            std::fill(mask.begin(), mask.begin() + size, true);
            do {
                GoodnessWitness w{{pr.u, pr.v}, {}, "no subset separates the pair from the blocking set"};
                for (std::size_t j = 0; j < others.size(); ++j)
                    if (mask[j]) w.blocking.push_back(others[j]);
                ++report.checks;
                if (witness_holds(family, w)) {
                    report.good = false;
                    report.witness = std::move(w);
                    return report;
                }
            } while (std::prev_permutation(mask.begin(), mask.end()));
        }
    }
    return report;
}

struct BadEventRates {
    double rate_e1 = 0.0;     ///< |phi(s) & phi(X)| >= 3q/4
    double rate_e2 = 0.0;     ///< phi(s) & phi(t) within phi(X)
    double rate_single = 0.0; ///< phi(t) within phi(X)
    std::uint64_t trials = 0;
};

/// Monte Carlo frequencies of the sampling bad events. Each trial draws a fresh
/// index assignment and a uniform (s, t, X) with |X| = k-1 among the terminals.
inline BadEventRates estimate_bad_events(const TerminalSet& terminals, const FamilyParams& params, std::uint64_t seed,
                                         std::uint64_t trials) {
    params.validate(true);
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    const int block = params.k - 1;
    if (static_cast<int>(terminals.size()) < 2 + block)
        throw std::invalid_argument("need at least " + std::to_string(2 + block) + " terminals");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, params.p - 1);
    std::vector<Vertex> order = terminals.members();

    auto draw = [&] {
        boost::dynamic_bitset<> b(static_cast<std::size_t>(params.p));
        for (int d = 0; d < params.q; ++d) b.set(static_cast<std::size_t>(pick(rng)));
        return b;
    };

    std::uint64_t e1 = 0, e2 = 0, single = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        // First 2 + block positions of a random permutation give s, t and X.
        for (int j = 0; j < 2 + block; ++j) {
            std::uniform_int_distribution<std::size_t> swap_with(static_cast<std::size_t>(j), order.size() - 1);
            std::swap(order[static_cast<std::size_t>(j)], order[swap_with(rng)]);
        }
        boost::dynamic_bitset<> phi_s = draw();
        boost::dynamic_bitset<> phi_t = draw();
        boost::dynamic_bitset<> phi_x(static_cast<std::size_t>(params.p));
        for (int j = 0; j < block; ++j) phi_x |= draw();
        if (4 * (phi_s & phi_x).count() >= static_cast<std::size_t>(3 * params.q)) ++e1;
        if ((phi_s & phi_t).is_subset_of(phi_x)) ++e2;
        if (phi_t.is_subset_of(phi_x)) ++single;
    }
    BadEventRates rates;
    rates.trials = trials;
    rates.rate_e1 = static_cast<double>(e1) / static_cast<double>(trials);
    rates.rate_e2 = static_cast<double>(e2) / static_cast<double>(trials);
    rates.rate_single = static_cast<double>(single) / static_cast<double>(trials);
    return rates;
}

/// `family <p> <q> <seed>` followed by one `phi <terminal> <indices...>` line per terminal.
inline void write_family(std::ostream& out, const TerminalFamily& family) {
    out << "family " << family.params().p << ' ' << family.params().q << ' ' << family.seed() << '\n';
    for (Vertex t : family.terminals().members()) {
        out << "phi " << t;
        for (int i : family.phi(t)) out << ' ' << i;
        out << '\n';
    }
}

} // namespace vcsndp

#endif // VCSNDP_FAMILY_HPP
