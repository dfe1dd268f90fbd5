#ifndef VCSNDP_INSTANCE_HPP
#define VCSNDP_INSTANCE_HPP

#include "vcsndp/cost.hpp"

#include <algorithm>
#include <charconv>
#include <climits>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vcsndp {

using Vertex = int;
using EdgeId = int;

/// Membership mask over the edges of one graph, indexed by edge-id.
using EdgeMask = std::vector<bool>;

struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    Cost cost;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Connectivity requirement r(u,v) on an unordered pair, stored with u < v.
struct Requirement {
    Vertex u = 0;
    Vertex v = 0;
    int r = 0;

    friend bool operator==(const Requirement&, const Requirement&) = default;
};

class InstanceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Sorted set of terminal vertices.
class TerminalSet {
public:
    TerminalSet() = default;
    explicit TerminalSet(std::vector<Vertex> members) : members_(std::move(members)) {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    }

    bool contains(Vertex v) const { return std::binary_search(members_.begin(), members_.end(), v); }
    const std::vector<Vertex>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }

    /// Position of v among the members, or -1.
    int index_of(Vertex v) const {
        auto it = std::lower_bound(members_.begin(), members_.end(), v);
        if (it == members_.end() || *it != v) return -1;
        return static_cast<int>(it - members_.begin());
    }

    friend bool operator==(const TerminalSet&, const TerminalSet&) = default;

private:
    std::vector<Vertex> members_;
};

/// Weighted undirected multigraph with pairwise vertex-connectivity requirements.
/// Immutable once constructed.
class Instance {
public:
    Instance() = default;

    Instance(int n, std::vector<Edge> edges, std::vector<Requirement> requirements)
        : n_(n), edges_(std::move(edges)), requirements_(std::move(requirements)) {
        if (n_ < 0) throw InstanceError("negative vertex count");
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const Edge& e = edges_[i];
            if (!valid_vertex(e.u) || !valid_vertex(e.v))
                throw InstanceError("edge " + std::to_string(i) + " has an out-of-range endpoint");
            if (e.u == e.v) throw InstanceError("edge " + std::to_string(i) + " is a self-loop");
            if (e.cost < Cost{}) throw InstanceError("edge " + std::to_string(i) + " has negative cost");
        }
        for (Requirement& q : requirements_) {
            if (!valid_vertex(q.u) || !valid_vertex(q.v))
                throw InstanceError("requirement has an out-of-range vertex");
            if (q.u == q.v) throw InstanceError("requirement on a single vertex");
            if (q.r < 1) throw InstanceError("requirement must be a positive integer");
            if (q.u > q.v) std::swap(q.u, q.v);
        }
        std::sort(requirements_.begin(), requirements_.end(), [](const Requirement& a, const Requirement& b) {
            return std::pair(a.u, a.v) < std::pair(b.u, b.v);
        });
        for (std::size_t i = 1; i < requirements_.size(); ++i) {
            if (requirements_[i - 1].u == requirements_[i].u && requirements_[i - 1].v == requirements_[i].v)
                throw InstanceError("duplicate requirement pair " + std::to_string(requirements_[i].u) + " " +
                                    std::to_string(requirements_[i].v));
        }
    }

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId id) const { return edges_.at(static_cast<std::size_t>(id)); }
    const std::vector<Requirement>& requirements() const { return requirements_; }

    /// Maximum requirement; 0 when there are no requirements.
    int k() const {
        int k = 0;
        for (const Requirement& q : requirements_) k = std::max(k, q.r);
        return k;
    }

    /// r(u,v), 0 when the pair carries no requirement.
    int requirement(Vertex u, Vertex v) const {
        if (u > v) std::swap(u, v);
        for (const Requirement& q : requirements_)
            if (q.u == u && q.v == v) return q.r;
        return 0;
    }

    EdgeMask all_edges() const { return EdgeMask(edges_.size(), true); }

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    bool valid_vertex(Vertex v) const { return v >= 0 && v < n_; }

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<Requirement> requirements_;
};

inline TerminalSet derive_terminals(const Instance& inst) {
    std::vector<Vertex> members;
    for (const Requirement& q : inst.requirements()) {
        members.push_back(q.u);
        members.push_back(q.v);
    }
    return TerminalSet(std::move(members));
}

/// A purchased edge set; edge-ids are kept sorted and unique.
struct EdgeSolution {
    std::vector<EdgeId> edge_ids;
    Cost cost;

    EdgeMask mask(const Instance& inst) const {
        EdgeMask m(static_cast<std::size_t>(inst.m()), false);
        for (EdgeId e : edge_ids) m[static_cast<std::size_t>(e)] = true;
        return m;
    }

    friend bool operator==(const EdgeSolution&, const EdgeSolution&) = default;
};

inline EdgeSolution make_solution(const Instance& inst, std::vector<EdgeId> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    EdgeSolution sol;
    for (EdgeId e : ids) {
        if (e < 0 || e >= inst.m()) throw InstanceError("edge-id " + std::to_string(e) + " out of range");
        sol.cost += inst.edge(e).cost;
    }
    sol.edge_ids = std::move(ids);
    return sol;
}

inline EdgeSolution make_solution(const Instance& inst, const EdgeMask& mask) {
    std::vector<EdgeId> ids;
    for (std::size_t e = 0; e < mask.size(); ++e)
        if (mask[e]) ids.push_back(static_cast<EdgeId>(e));
    return make_solution(inst, std::move(ids));
}

namespace detail {

/// Splits a stream into (line number, tokens) records, dropping comments and blank lines.
struct TokenLine {
    int line = 0;
    std::vector<std::string> tokens;
};

inline std::vector<TokenLine> tokenize(std::istream& in) {
    std::vector<TokenLine> out;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ss(raw);
        TokenLine tl{line, {}};
        std::string tok;
        while (ss >> tok) tl.tokens.push_back(tok);
        if (!tl.tokens.empty()) out.push_back(std::move(tl));
    }
    return out;
}

inline std::optional<long long> parse_int(const std::string& s) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

inline int expect_int(const TokenLine& tl, std::size_t pos, const char* what) {
    auto v = parse_int(tl.tokens[pos]);
    if (!v || *v < INT32_MIN || *v > INT32_MAX)
        throw ParseError(tl.line, std::string("malformed ") + what + " '" + tl.tokens[pos] + "'");
    return static_cast<int>(*v);
}

} // namespace detail

/// Reads the line-oriented instance format:
///   graph <n> <m>
///   edge <u> <v> <cost>     (m lines)
///   req <u> <v> <r>         (any number)
inline Instance parse_instance(std::istream& in) {
    auto lines = detail::tokenize(in);
    if (lines.empty()) throw ParseError(1, "missing 'graph' header");
    const auto& head = lines.front();
    if (head.tokens.size() != 3 || head.tokens[0] != "graph")
        throw ParseError(head.line, "expected 'graph <n> <m>'");
    int n = detail::expect_int(head, 1, "vertex count");
    int m = detail::expect_int(head, 2, "edge count");
    if (n < 0 || m < 0) throw ParseError(head.line, "negative count in header");

    auto check_vertex = [n](const detail::TokenLine& tl, int v) {
        if (v < 0 || v >= n) throw ParseError(tl.line, "vertex " + std::to_string(v) + " out of range");
    };

    std::vector<Edge> edges;
    std::vector<Requirement> reqs;
    std::size_t idx = 1;
    for (; idx < lines.size() && static_cast<int>(edges.size()) < m; ++idx) {
        const auto& tl = lines[idx];
        if (tl.tokens[0] != "edge") throw ParseError(tl.line, "expected " + std::to_string(m) + " edge lines");
        if (tl.tokens.size() != 4) throw ParseError(tl.line, "expected 'edge <u> <v> <cost>'");
        int u = detail::expect_int(tl, 1, "vertex");
        int v = detail::expect_int(tl, 2, "vertex");
        check_vertex(tl, u);
        check_vertex(tl, v);
        if (u == v) throw ParseError(tl.line, "self-loop on vertex " + std::to_string(u));
        if (!tl.tokens[3].empty() && tl.tokens[3][0] == '-') throw ParseError(tl.line, "negative cost");
        auto cost = Cost::parse(tl.tokens[3]);
        if (!cost) throw ParseError(tl.line, "malformed cost '" + tl.tokens[3] + "'");
        edges.push_back({u, v, *cost});
    }
    if (static_cast<int>(edges.size()) < m)
        throw ParseError(lines.back().line, "expected " + std::to_string(m) + " edge lines, found " +
                                                std::to_string(edges.size()));
    for (; idx < lines.size(); ++idx) {
        const auto& tl = lines[idx];
        if (tl.tokens[0] != "req") throw ParseError(tl.line, "expected 'req' line, got '" + tl.tokens[0] + "'");
        if (tl.tokens.size() != 4) throw ParseError(tl.line, "expected 'req <u> <v> <r>'");
        int u = detail::expect_int(tl, 1, "vertex");
        int v = detail::expect_int(tl, 2, "vertex");
        int r = detail::expect_int(tl, 3, "requirement");
        check_vertex(tl, u);
        check_vertex(tl, v);
        if (u == v) throw ParseError(tl.line, "requirement on a single vertex");
        if (r < 1) throw ParseError(tl.line, "requirement must be a positive integer");
        for (const Requirement& q : reqs)
            if (std::minmax(q.u, q.v) == std::minmax(u, v))
                throw ParseError(tl.line, "duplicate requirement pair " + std::to_string(u) + " " + std::to_string(v));
        reqs.push_back({u, v, r});
    }
    return Instance(n, std::move(edges), std::move(reqs));
}

inline Instance parse_instance(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

inline void write_instance(std::ostream& out, const Instance& inst) {
    out << "graph " << inst.n() << ' ' << inst.m() << '\n';
    for (const Edge& e : inst.edges()) out << "edge " << e.u << ' ' << e.v << ' ' << e.cost.to_string() << '\n';
    for (const Requirement& q : inst.requirements()) out << "req " << q.u << ' ' << q.v << ' ' << q.r << '\n';
}

inline std::string write_instance(const Instance& inst) {
    std::ostringstream out;
    write_instance(out, inst);
    return out.str();
}

inline void write_solution(std::ostream& out, const EdgeSolution& sol) {
    out << "solution " << sol.edge_ids.size() << ' ' << sol.cost.to_string() << '\n';
    for (EdgeId e : sol.edge_ids) out << e << '\n';
}

inline std::string write_solution(const EdgeSolution& sol) {
    std::ostringstream out;
    write_solution(out, sol);
    return out.str();
}

/// Reads `solution <count> <cost>` followed by one edge-id per line. The stated
/// cost must match the recomputed cost of the listed edges.
inline EdgeSolution parse_solution(std::istream& in, const Instance& inst) {
    auto lines = detail::tokenize(in);
    if (lines.empty()) throw ParseError(1, "missing 'solution' header");
    const auto& head = lines.front();
    if (head.tokens.size() != 3 || head.tokens[0] != "solution")
        throw ParseError(head.line, "expected 'solution <count> <cost>'");
    int count = detail::expect_int(head, 1, "edge count");
    auto stated = Cost::parse(head.tokens[2]);
    if (!stated) throw ParseError(head.line, "malformed cost '" + head.tokens[2] + "'");
    if (static_cast<int>(lines.size()) - 1 != count)
        throw ParseError(head.line, "header announces " + std::to_string(count) + " edges, found " +
                                        std::to_string(lines.size() - 1));
    std::vector<EdgeId> ids;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& tl = lines[i];
        if (tl.tokens.size() != 1) throw ParseError(tl.line, "expected a single edge-id");
        int e = detail::expect_int(tl, 0, "edge-id");
        if (e < 0 || e >= inst.m()) throw ParseError(tl.line, "edge-id " + std::to_string(e) + " out of range");
        ids.push_back(e);
    }
    EdgeSolution sol = make_solution(inst, std::move(ids));
    if (static_cast<int>(sol.edge_ids.size()) != count) throw ParseError(head.line, "duplicate edge-ids");
    if (sol.cost != *stated)
        throw ParseError(head.line, "stated cost " + stated->to_string() + " differs from edge total " +
                                        sol.cost.to_string());
    return sol;
}

inline EdgeSolution parse_solution(const std::string& text, const Instance& inst) {
    std::istringstream in(text);
    return parse_solution(in, inst);
}

} // namespace vcsndp

#endif // VCSNDP_INSTANCE_HPP
