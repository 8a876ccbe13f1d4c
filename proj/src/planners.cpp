#include "somepairs/planners.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "somepairs/errors.hpp"

namespace somepairs {

namespace {

constexpr int kMaxDepth = 64;

std::vector<int> iota_vec(int n) {
    std::vector<int> v(static_cast<size_t>(n));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// Lower half keeps the extra element when the count is odd.
std::pair<std::vector<int>, std::vector<int>> halve_list(const std::vector<int>& v) {
    const std::size_t cut = (v.size() + 1) / 2;
    return {std::vector<int>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(cut)),
            std::vector<int>(v.begin() + static_cast<std::ptrdiff_t>(cut), v.end())};
}

Reducer endpoints_reducer(const std::vector<Edge>& edges) {
    Reducer r;
    r.x_set.reserve(edges.size());
    r.y_set.reserve(edges.size());
    for (const Edge& e : edges) {
        r.x_set.push_back(e.x);
        r.y_set.push_back(e.y);
    }
    std::sort(r.x_set.begin(), r.x_set.end());
    r.x_set.erase(std::unique(r.x_set.begin(), r.x_set.end()), r.x_set.end());
    std::sort(r.y_set.begin(), r.y_set.end());
    r.y_set.erase(std::unique(r.y_set.begin(), r.y_set.end()), r.y_set.end());
    return r;
}

}  // namespace

MappingSchema plan_a(const ConnectionGraph& g, int q) {
    if (q < 1) throw PreconditionError("q must be positive");
    MappingSchema s;
    s.q = q;
    s.provenance = "a";
    auto groups = [q](int n) {
        std::vector<std::vector<int>> out;
        for (int lo = 0; lo < n; lo += q) {
            std::vector<int> grp;
            for (int v = lo; v < std::min(lo + q, n); ++v) grp.push_back(v);
            out.push_back(std::move(grp));
        }
        return out;
    };
    const auto gx = groups(g.n_x());
    const auto gy = groups(g.n_y());
    for (const auto& xs : gx) {
        for (const auto& ys : gy) {
            s.reducers.push_back({xs, ys});
        }
    }
    return s;
}

MappingSchema plan_b(const ConnectionGraph& g) {
    MappingSchema s;
    s.q = 1;
    s.provenance = "b";
    s.reducers.reserve(static_cast<size_t>(g.m()));
    for (const Edge& e : g.edges()) {
        s.reducers.push_back({{e.x}, {e.y}});
    }
    return s;
}

PartitionStrategy strategy_halve() {
    PartitionStrategy s;
    s.name = "halve";
    s.split = [](const Subproblem& sub, const ConnectionGraph&) {
        SplitResult r;
        std::tie(r.x1, r.x2) = halve_list(sub.x_indices);
        std::tie(r.y1, r.y2) = halve_list(sub.y_indices);
        return r;
    };
    return s;
}

PartitionStrategy strategy_weight_bit() {
    PartitionStrategy s;
    s.name = "weight";
    s.needs_labels = true;
    s.split = [](const Subproblem& sub, const ConnectionGraph& g) {
        const BitLabels& lb = *g.labels();
        SplitResult r;
        auto by_bit = [&](const std::vector<int>& idx, std::vector<int>& p1,
                          std::vector<int>& p2) {
            for (int i : idx) {
                const int w = lb.weight(i);
                ((w >> sub.depth) & 1 ? p2 : p1).push_back(i);
            }
        };
        by_bit(sub.x_indices, r.x1, r.x2);
        by_bit(sub.y_indices, r.y1, r.y2);
        // The weight digit stopped separating both sides: halve instead so
        // the recursion still shrinks.
        if ((r.x1.empty() || r.x2.empty()) && (r.y1.empty() || r.y2.empty())) {
            r = SplitResult{};
            std::tie(r.x1, r.x2) = halve_list(sub.x_indices);
            std::tie(r.y1, r.y2) = halve_list(sub.y_indices);
        }
        return r;
    };
    return s;
}

namespace {

void solve_c(const ConnectionGraph& g, int q, const PartitionStrategy& strategy,
             const Subproblem& sub, MappingSchema& out, PlanStats* stats) {
    if (stats) stats->max_depth = std::max(stats->max_depth, sub.depth);
    const long long m = static_cast<long long>(sub.edges.size());
    if (m <= q) {
        out.reducers.push_back(endpoints_reducer(sub.edges));
        if (stats) ++stats->endpoint_leaves;
        return;
    }
    if (static_cast<int>(std::max(sub.x_indices.size(), sub.y_indices.size())) <= q) {
        out.reducers.push_back({sub.x_indices, sub.y_indices});
        if (stats) ++stats->all_nodes_leaves;
        return;
    }
    if (sub.depth >= kMaxDepth) {
        throw NonProgressError("recursion exceeded depth " + std::to_string(kMaxDepth));
    }

    SplitResult split = strategy.split(sub, g);
    if (split.x1.size() + split.x2.size() != sub.x_indices.size() ||
        split.y1.size() + split.y2.size() != sub.y_indices.size()) {
        throw PreconditionError("strategy '" + strategy.name +
                                "' did not partition the subproblem");
    }

    std::vector<signed char> x_part(static_cast<size_t>(g.n_x()), -1);
    std::vector<signed char> y_part(static_cast<size_t>(g.n_y()), -1);
    for (int v : split.x1) x_part[static_cast<size_t>(v)] = 0;
    for (int v : split.x2) x_part[static_cast<size_t>(v)] = 1;
    for (int v : split.y1) y_part[static_cast<size_t>(v)] = 0;
    for (int v : split.y2) y_part[static_cast<size_t>(v)] = 1;

    std::vector<Edge> bucket[2][2];
    for (const Edge& e : sub.edges) {
        const signed char xp = x_part[static_cast<size_t>(e.x)];
        const signed char yp = y_part[static_cast<size_t>(e.y)];
        if (xp < 0 || yp < 0) {
            throw PreconditionError("strategy '" + strategy.name +
                                    "' dropped an index that has edges");
        }
        bucket[xp][yp].push_back(e);
    }

    const std::vector<int>* x_parts[2] = {&split.x1, &split.x2};
    const std::vector<int>* y_parts[2] = {&split.y1, &split.y2};
    int nonempty = 0;
    long long child_sum = 0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            if (!bucket[a][b].empty()) {
                ++nonempty;
                child_sum += static_cast<long long>(bucket[a][b].size());
            }
        }
    }
    if (stats) stats->splits.push_back({sub.depth, nonempty, m, child_sum});

    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            if (bucket[a][b].empty()) continue;
            if (x_parts[a]->size() == sub.x_indices.size() &&
                y_parts[b]->size() == sub.y_indices.size()) {
                throw NonProgressError("strategy '" + strategy.name +
                                       "' returned a child equal to its parent");
            }
            Subproblem child;
            child.x_indices = *x_parts[a];
            child.y_indices = *y_parts[b];
            child.edges = std::move(bucket[a][b]);
            child.depth = sub.depth + 1;
            solve_c(g, q, strategy, child, out, stats);
        }
    }
}

}  // namespace

MappingSchema plan_c(const ConnectionGraph& g, int q, const PartitionStrategy& strategy,
                     PlanStats* stats) {
    if (q < 1) throw PreconditionError("q must be positive");
    if (!strategy.split) throw PreconditionError("strategy has no split function");
    if (strategy.needs_labels && !g.labels()) {
        throw PreconditionError("strategy '" + strategy.name + "' requires bit labels");
    }
    MappingSchema out;
    out.q = q;
    out.provenance = "c:" + strategy.name;
    if (g.m() == 0) return out;

    Subproblem root;
    root.x_indices = iota_vec(g.n_x());
    root.y_indices = iota_vec(g.n_y());
    root.edges = g.edges();
    root.depth = 0;
    solve_c(g, q, strategy, root, out, stats);
    return out;
}

MappingSchema plan_prefix(const ConnectionGraph& g, int q) {
    if (!g.labels()) throw PreconditionError("prefix planning requires bit labels");
    const BitLabels& lb = *g.labels();
    const int b = lb.bits();
    const long long n = 1LL << b;

    if (q < 1 || (q & (q - 1)) != 0) {
        throw PreconditionError("q must be a power of two, got " + std::to_string(q));
    }
    const int k = std::countr_zero(static_cast<unsigned>(q));
    if (k > b) {
        throw PreconditionError("q = " + std::to_string(q) + " exceeds the side size " +
                                std::to_string(n));
    }

    // The construction only covers graphs whose edges are exactly the single
    // upward bit flips over the label cube.
    auto not_up = [&] {
        return PreconditionError("prefix planning needs the upward distance-one graph");
    };
    if (g.n_x() != n || g.n_y() != n) throw not_up();
    if (g.m() != static_cast<long long>(b) * (n / 2)) throw not_up();
    for (const Edge& e : g.edges()) {
        const std::uint32_t vx = lb.value(e.x);
        const std::uint32_t vy = lb.value(e.y);
        const std::uint32_t d = vx ^ vy;
        if (std::popcount(d) != 1 || (vx & d) != 0) throw not_up();
    }

    MappingSchema s;
    s.q = q;
    s.provenance = "prefix";

    for (int d = 0; d < b - k; ++d) {
        const std::uint32_t bit = 1u << (b - 1 - d);
        for (std::uint32_t v = 0; v < static_cast<std::uint32_t>(n); ++v) {
            if (v & bit) continue;
            s.reducers.push_back({{lb.index_of(v)}, {lb.index_of(v | bit)}});
        }
    }
    const std::uint32_t group = 1u << k;
    for (std::uint32_t base = 0; base < static_cast<std::uint32_t>(n); base += group) {
        std::vector<int> members;
        members.reserve(group);
        for (std::uint32_t v = base; v < base + group; ++v) {
            members.push_back(lb.index_of(v));
        }
        std::sort(members.begin(), members.end());
        s.reducers.push_back({members, members});
    }
    return s;
}

}  // namespace somepairs
