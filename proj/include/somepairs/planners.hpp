#pragma once

#include <functional>
#include <string>
#include <vector>

#include "somepairs/graph.hpp"
#include "somepairs/schema.hpp"

namespace somepairs {

// A node of the recursive planner: the surviving indices of each side plus
// the edges induced between them. Index lists stay sorted ascending.
struct Subproblem {
    std::vector<int> x_indices;
    std::vector<int> y_indices;
    std::vector<Edge> edges;
    int depth = 0;
};

// How a strategy divides both sides. part1/part2 must partition the
// subproblem's indices; either part may be empty.
struct SplitResult {
    std::vector<int> x1, x2;
    std::vector<int> y1, y2;
};

struct PartitionStrategy {
    std::string name;
    bool needs_labels = false;
    std::function<SplitResult(const Subproblem&, const ConnectionGraph&)> split;
};

// Recursion trace of plan_c, for reporting and tests.
struct PlanStats {
    struct SplitRecord {
        int depth = 0;
        int nonempty_children = 0;
        long long parent_edges = 0;
        long long child_edge_sum = 0;
    };
    std::vector<SplitRecord> splits;
    int max_depth = 0;
    long long all_nodes_leaves = 0;
    long long endpoint_leaves = 0;
};

// Grid planner: cuts each side into ceil(n/q) contiguous groups of at most q
// and pairs every X group with every Y group. Covers any edge set on these
// sides. Rate is exactly n/q when q divides n on equal sides.
MappingSchema plan_a(const ConnectionGraph& g, int q);

// One reducer per edge, recorded with q = 1. Rate is exactly m/n on equal
// sides.
MappingSchema plan_b(const ConnectionGraph& g);

// Midpoint split of each side's index list; an odd count leaves the extra
// element in the lower half.
PartitionStrategy strategy_halve();

// Splits by successive binary digits of the label weight: depth d separates
// indices with weight bit d clear from those with it set. Requires labels.
// When that digit no longer separates either side, falls back to the
// midpoint split for the node.
PartitionStrategy strategy_weight_bit();

// Recursive planner. Basis: a subproblem with at most q edges becomes one
// reducer holding just the edge endpoints; otherwise, if both sides have at
// most q nodes, one reducer holding all of them. Interior nodes split both
// sides via the strategy into four children, dropping edgeless ones, and
// solve the rest in order (1,1), (1,2), (2,1), (2,2). A child as large as
// its parent raises NonProgressError; depth is capped at 64.
MappingSchema plan_c(const ConnectionGraph& g, int q, const PartitionStrategy& strategy,
                     PlanStats* stats = nullptr);

// First-bit decomposition for the gen_hd1_up family with q = 2^k. Each level
// d pairs label p0w with p1w in its own two-node reducer and recurses on the
// half cubes; groups of q labels sharing their leading bits form the basis
// reducers. Rate over all inputs is exactly 1 + (b - k) / 2.
MappingSchema plan_prefix(const ConnectionGraph& g, int q);

}  // namespace somepairs
