#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace somepairs {

// Which of the two input sets an index refers to.
enum class Side { X, Y };

struct InputId {
    Side side = Side::X;
    int index = 0;

    friend bool operator==(const InputId&, const InputId&) = default;
};

// One output: the pair of inputs it depends on.
struct Edge {
    int x = 0;
    int y = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Bit-string labels shared by both sides: values[i] is the label of index i
// on either side, rendered MSB first when printed. Labels are a permutation
// of {0,1}^bits, so n_x = n_y = 2^bits whenever labels are present.
class BitLabels {
public:
    BitLabels(int bits, std::vector<std::uint32_t> values);

    int bits() const noexcept { return bits_; }
    const std::vector<std::uint32_t>& values() const noexcept { return values_; }

    std::uint32_t value(int index) const { return values_[static_cast<size_t>(index)]; }
    int weight(int index) const;              // popcount of the label
    int index_of(std::uint32_t value) const;  // inverse lookup
    std::string label_string(int index) const;

private:
    int bits_;
    std::vector<std::uint32_t> values_;
    std::vector<int> inverse_;  // label value -> index
};

// Bipartite connection graph over X indices [0, n_x) and Y indices [0, n_y).
// Edges are stored sorted by (x, y) with no duplicates.
class ConnectionGraph {
public:
    ConnectionGraph(int n_x, int n_y, std::vector<Edge> edges,
                    std::optional<BitLabels> labels = std::nullopt);

    int n_x() const noexcept { return n_x_; }
    int n_y() const noexcept { return n_y_; }
    long long m() const noexcept { return static_cast<long long>(edges_.size()); }

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    bool has_edge(int x, int y) const;

    // Y endpoints of x's edges, ascending. Entry k of the span corresponds to
    // edge index adjacency_offset(x) + k in edges().
    std::span<const int> x_neighbors(int x) const;
    long long adjacency_offset(int x) const { return adj_off_[static_cast<size_t>(x)]; }

    const std::optional<BitLabels>& labels() const noexcept { return labels_; }

    // For random generation with replacement: how many draws were requested.
    // -1 when the graph was not built that way.
    int draw_count = -1;

private:
    int n_x_;
    int n_y_;
    std::vector<Edge> edges_;
    std::vector<int> adj_;            // y column of edges_, row by row
    std::vector<long long> adj_off_;  // size n_x + 1, offsets into adj_
    std::optional<BitLabels> labels_;
};

// All ordered pairs of b-bit strings at Hamming distance exactly one.
// n_x = n_y = 2^b, m = b * 2^b. 1 <= b <= 20.
ConnectionGraph gen_hd1(int b);

// The directed variant: pairs (x, y) where y is x with one 0 flipped to 1.
// n_x = n_y = 2^b, m = b * 2^(b-1). 1 <= b <= 20.
ConnectionGraph gen_hd1_up(int b);

enum class RandomMode { with_replacement, distinct };

// Seeded random bipartite graph on n + n inputs. with_replacement draws m
// pairs and collapses duplicates; distinct rejects until m distinct edges
// exist (requires m <= n^2). Identical (n, m, mode, seed) give identical
// graphs.
ConnectionGraph gen_random(int n, long long m, RandomMode mode, std::uint64_t seed);

// Tab-separated edge list. Line 1 holds "<n_x>\t<n_y>". An optional second
// line "#labels b=<b>" is followed by 2^b label lines, one per index. Every
// other line is either a '#' comment, blank, or an edge "<x>\t<y>".
ConnectionGraph load_edge_list(const std::string& path);
void save_edge_list(const ConnectionGraph& g, const std::string& path);

// Number of edges with both endpoints inside S x T. Indices may repeat in
// S or T; repeats are ignored.
long long induced_edge_count(const ConnectionGraph& g,
                             std::span<const int> s,
                             std::span<const int> t);

}  // namespace somepairs
