#ifndef VCSNDP_COVERING_LP_HPP
#define VCSNDP_COVERING_LP_HPP

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace vcsndp {

enum class LpStatus { optimal, infeasible };

template <class Scalar>
constexpr Scalar lp_epsilon() {
    if constexpr (std::is_floating_point_v<Scalar>)
        return Scalar(1e-11);
    else
        return Scalar(0);
}

/// Covering LP with unit box bounds:
///
///     min  c.x   s.t.  sum_{v in S_j} x_v >= b_j  (j = 1..K),   0 <= x <= 1,
///
/// with c >= 0. The solver runs the primal simplex on the dual
///
///     max  b.y - 1.z   s.t.  A^T y - z <= c,   y, z >= 0,
///
/// whose slack basis is feasible because c >= 0. Adding a covering row to the
/// primal adds a column to the dual, so re-optimisation after a new cut starts
/// from the previous basis. The primal solution is read off the dual's simplex
/// multipliers, and an unbounded dual certifies primal infeasibility.
template <class Scalar>
class CoveringLp {
public:
    explicit CoveringLp(std::vector<Scalar> costs) : costs_(std::move(costs)) {
        const std::size_t m = costs_.size();
        for (const Scalar& c : costs_)
            if (c < Scalar(0)) throw std::invalid_argument("covering LP needs nonnegative costs");
        // Columns [0,m): slacks w; [m,2m): upper-bound duals z; then one per constraint.
        rows_.assign(m, std::vector<Scalar>(2 * m, Scalar(0)));
        beta_ = costs_;
        basis_.resize(m);
        reduced_.assign(2 * m, Scalar(0));
        objective_coef_.assign(2 * m, Scalar(0));
        for (std::size_t e = 0; e < m; ++e) {
            rows_[e][e] = Scalar(1);
            rows_[e][m + e] = Scalar(-1);
            basis_[e] = e;
            objective_coef_[m + e] = Scalar(-1);
            reduced_[m + e] = Scalar(1);
        }
    }

    std::size_t variable_count() const { return costs_.size(); }
    std::size_t constraint_count() const { return constraints_.size(); }

    /// Adds sum_{v in vars} x_v >= rhs. Duplicate variable ids are ignored.
    void add_constraint(std::vector<int> vars, Scalar rhs) {
        const std::size_t m = costs_.size();
        std::sort(vars.begin(), vars.end());
        vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
        for (int v : vars)
            if (v < 0 || static_cast<std::size_t>(v) >= m) throw std::invalid_argument("constraint variable out of range");
        // Tableau column = B^{-1} a = sum of the slack columns (which hold B^{-1}).
        Scalar reduced = -rhs;
        for (int v : vars) reduced += reduced_[static_cast<std::size_t>(v)];
        for (std::size_t i = 0; i < m; ++i) {
            Scalar entry(0);
            for (int v : vars) entry += rows_[i][static_cast<std::size_t>(v)];
            rows_[i].push_back(entry);
        }
        reduced_.push_back(reduced);
        objective_coef_.push_back(rhs);
        constraints_.push_back({std::move(vars), rhs});
    }

    LpStatus solve() {
        const std::size_t m = costs_.size();
        const Scalar eps = lp_epsilon<Scalar>();
        int degenerate_run = 0;
        for (std::size_t iter = 0;; ++iter) {
            if (iter > max_pivots) throw std::runtime_error("simplex pivot limit reached");
            const bool bland = degenerate_run > 50;
            std::size_t enter = reduced_.size();
            for (std::size_t j = 0; j < reduced_.size(); ++j) {
                if (!(reduced_[j] < -eps)) continue;
                if (enter == reduced_.size() || (!bland && reduced_[j] < reduced_[enter])) enter = j;
                if (bland) break;
            }
            if (enter == reduced_.size()) break;

            std::size_t leave = m;
            Scalar best_ratio(0);
            for (std::size_t i = 0; i < m; ++i) {
                const Scalar& a = rows_[i][enter];
                if (!(a > pivot_tolerance())) continue;
                Scalar ratio = beta_[i] / a;
                if (leave == m || ratio < best_ratio ||
                    (!(best_ratio < ratio) && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == m) {
                status_ = LpStatus::infeasible;
                return status_;
            }
            degenerate_run = best_ratio > eps ? 0 : degenerate_run + 1;
            pivot(leave, enter);
        }
        status_ = LpStatus::optimal;
        return status_;
    }

    LpStatus status() const { return status_; }

    /// Primal values x_v, read from the reduced costs of the dual slack columns.
    std::vector<Scalar> solution() const {
        std::vector<Scalar> x(costs_.size());
        for (std::size_t e = 0; e < costs_.size(); ++e) {
            x[e] = reduced_[e];
            if constexpr (std::is_floating_point_v<Scalar>) x[e] = std::clamp(x[e], Scalar(0), Scalar(1));
        }
        return x;
    }

    /// Optimal value (dual objective of the current basis).
    Scalar objective() const {
        Scalar value(0);
        for (std::size_t i = 0; i < basis_.size(); ++i) value += objective_coef_[basis_[i]] * beta_[i];
        return value;
    }

    static constexpr std::size_t max_pivots = 2'000'000;

private:
    struct Row {
        std::vector<int> vars;
        Scalar rhs;
    };

    static Scalar pivot_tolerance() {
        if constexpr (std::is_floating_point_v<Scalar>)
            return Scalar(1e-9);
        else
            return Scalar(0);
    }

    void pivot(std::size_t r, std::size_t c) {
        const std::size_t m = costs_.size();
        const std::size_t cols = reduced_.size();
        const Scalar pv = rows_[r][c];
        for (std::size_t j = 0; j < cols; ++j) rows_[r][j] /= pv;
        beta_[r] /= pv;
        rows_[r][c] = Scalar(1);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r) continue;
            const Scalar f = rows_[i][c];
            if (f == Scalar(0)) continue;
            for (std::size_t j = 0; j < cols; ++j) rows_[i][j] -= f * rows_[r][j];
            beta_[i] -= f * beta_[r];
            rows_[i][c] = Scalar(0);
        }
        const Scalar f = reduced_[c];
        for (std::size_t j = 0; j < cols; ++j) reduced_[j] -= f * rows_[r][j];
        reduced_[c] = Scalar(0);
        basis_[r] = c;
    }

    std::vector<Scalar> costs_;
    std::vector<Row> constraints_;
    std::vector<std::vector<Scalar>> rows_;
    std::vector<Scalar> beta_;
    std::vector<std::size_t> basis_;
    std::vector<Scalar> reduced_;
    std::vector<Scalar> objective_coef_;
    LpStatus status_ = LpStatus::optimal;
};

} // namespace vcsndp

#endif // VCSNDP_COVERING_LP_HPP
