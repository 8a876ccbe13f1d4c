#include "somepairs/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string_view>
#include <unordered_set>

#include "somepairs/errors.hpp"

namespace somepairs {

namespace {

constexpr int kMaxBits = 20;

std::uint64_t pack(int x, int y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
           static_cast<std::uint32_t>(y);
}

// Unbiased bounded draw that only depends on the engine's output sequence.
// std::uniform_int_distribution is not pinned down by the standard, so it is
// avoided for reproducibility.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

void check_b(int b) {
    if (b < 1 || b > kMaxBits) {
        throw SizeLimitError("label width must be between 1 and " +
                             std::to_string(kMaxBits) + ", got " + std::to_string(b));
    }
}

BitLabels identity_labels(int b) {
    std::vector<std::uint32_t> values(std::size_t{1} << b);
    for (std::uint32_t v = 0; v < values.size(); ++v) values[v] = v;
    return BitLabels(b, std::move(values));
}

}  // namespace

BitLabels::BitLabels(int bits, std::vector<std::uint32_t> values)
    : bits_(bits), values_(std::move(values)) {
    if (bits_ < 1 || bits_ > kMaxBits) throw SizeLimitError("unsupported label width");
    const std::size_t n = std::size_t{1} << bits_;
    if (values_.size() != n) throw Error("label table must hold exactly 2^bits entries");
    inverse_.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t v = values_[i];
        if (v >= n) throw Error("label value out of range");
        if (inverse_[v] != -1) throw Error("duplicate label value");
        inverse_[v] = static_cast<int>(i);
    }
}

int BitLabels::weight(int index) const {
    return std::popcount(values_[static_cast<size_t>(index)]);
}

int BitLabels::index_of(std::uint32_t value) const {
    if (value >= inverse_.size()) throw RangeError("label value out of range");
    return inverse_[value];
}

std::string BitLabels::label_string(int index) const {
    std::uint32_t v = values_[static_cast<size_t>(index)];
    std::string s(static_cast<size_t>(bits_), '0');
    for (int i = 0; i < bits_; ++i) {
        if (v & (1u << (bits_ - 1 - i))) s[static_cast<size_t>(i)] = '1';
    }
    return s;
}

ConnectionGraph::ConnectionGraph(int n_x, int n_y, std::vector<Edge> edges,
                                 std::optional<BitLabels> labels)
    : n_x_(n_x), n_y_(n_y), edges_(std::move(edges)), labels_(std::move(labels)) {
    if (n_x_ < 1 || n_y_ < 1) throw RangeError("side sizes must be positive");
    for (const Edge& e : edges_) {
        if (e.x < 0 || e.x >= n_x_ || e.y < 0 || e.y >= n_y_) {
            throw RangeError("edge endpoint (" + std::to_string(e.x) + ", " +
                             std::to_string(e.y) + ") out of range");
        }
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
        throw Error("duplicate edge");
    }
    if (labels_) {
        const long long n = 1LL << labels_->bits();
        if (n_x_ != n || n_y_ != n) {
            throw Error("labeled graphs need n_x = n_y = 2^bits");
        }
    }
    adj_off_.assign(static_cast<size_t>(n_x_) + 1, 0);
    for (const Edge& e : edges_) ++adj_off_[static_cast<size_t>(e.x) + 1];
    for (std::size_t i = 1; i < adj_off_.size(); ++i) adj_off_[i] += adj_off_[i - 1];
    adj_.reserve(edges_.size());
    for (const Edge& e : edges_) adj_.push_back(e.y);
}

bool ConnectionGraph::has_edge(int x, int y) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{x, y});
}

std::span<const int> ConnectionGraph::x_neighbors(int x) const {
    if (x < 0 || x >= n_x_) throw RangeError("x index out of range");
    const auto lo = static_cast<size_t>(adj_off_[static_cast<size_t>(x)]);
    const auto hi = static_cast<size_t>(adj_off_[static_cast<size_t>(x) + 1]);
    return {adj_.data() + lo, adj_.data() + hi};
}

ConnectionGraph gen_hd1(int b) {
    check_b(b);
    const std::uint32_t n = 1u << b;
    std::vector<Edge> edges;
    edges.reserve(static_cast<size_t>(n) * static_cast<size_t>(b));
    for (std::uint32_t x = 0; x < n; ++x) {
        for (int j = 0; j < b; ++j) {
            edges.push_back({static_cast<int>(x), static_cast<int>(x ^ (1u << j))});
        }
    }
    return ConnectionGraph(static_cast<int>(n), static_cast<int>(n), std::move(edges),
                           identity_labels(b));
}

ConnectionGraph gen_hd1_up(int b) {
    check_b(b);
    const std::uint32_t n = 1u << b;
    std::vector<Edge> edges;
    edges.reserve((static_cast<size_t>(n) / 2) * static_cast<size_t>(b));
    for (std::uint32_t x = 0; x < n; ++x) {
        for (int j = 0; j < b; ++j) {
            if (!(x & (1u << j))) {
                edges.push_back({static_cast<int>(x), static_cast<int>(x | (1u << j))});
            }
        }
    }
    return ConnectionGraph(static_cast<int>(n), static_cast<int>(n), std::move(edges),
                           identity_labels(b));
}

ConnectionGraph gen_random(int n, long long m, RandomMode mode, std::uint64_t seed) {
    if (n < 1) throw SizeLimitError("n must be positive");
    if (m < 0) throw SizeLimitError("m must be nonnegative");
    const long long cells = static_cast<long long>(n) * n;
    std::mt19937_64 rng(seed);
    if (mode == RandomMode::distinct) {
        if (m > cells) {
            throw InfeasibleError("cannot place " + std::to_string(m) +
                                  " distinct edges in a " + std::to_string(n) + "x" +
                                  std::to_string(n) + " graph");
        }
        std::unordered_set<std::uint64_t> seen;
        std::vector<Edge> edges;
        edges.reserve(static_cast<size_t>(m));
        while (static_cast<long long>(edges.size()) < m) {
            int x = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(n)));
            int y = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(n)));
            if (seen.insert(pack(x, y)).second) edges.push_back({x, y});
        }
        return ConnectionGraph(n, n, std::move(edges));
    }
    std::vector<Edge> edges;
    edges.reserve(static_cast<size_t>(m));
    for (long long i = 0; i < m; ++i) {
        int x = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(n)));
        int y = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(n)));
        edges.push_back({x, y});
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    ConnectionGraph g(n, n, std::move(edges));
    if (m > static_cast<long long>(std::numeric_limits<int>::max())) {
        throw SizeLimitError("draw count too large");
    }
    g.draw_count = static_cast<int>(m);
    return g;
}

namespace {

// Parses a full token as a nonnegative integer; returns false on junk.
bool parse_int(std::string_view token, long long& out) {
    if (token.empty()) return false;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

ConnectionGraph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);

    std::string line;
    int line_no = 0;

    if (!std::getline(in, line)) throw ParseError("missing size header", 1);
    ++line_no;
    strip_cr(line);
    long long n_x = 0, n_y = 0;
    {
        auto tab = line.find('\t');
        if (tab == std::string::npos || !parse_int(std::string_view(line).substr(0, tab), n_x) ||
            !parse_int(std::string_view(line).substr(tab + 1), n_y) || n_x < 1 || n_y < 1) {
            throw ParseError("size header must be \"<n_x>\\t<n_y>\" with positive sizes", line_no);
        }
    }

    std::optional<BitLabels> labels;
    bool peeked = false;
    if (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.rfind("#labels", 0) == 0) {
            std::string_view rest = std::string_view(line).substr(7);
            long long b = 0;
            if (rest.rfind(" b=", 0) != 0 || !parse_int(rest.substr(3), b) || b < 1 ||
                b > kMaxBits) {
                throw ParseError("label header must be \"#labels b=<b>\"", line_no);
            }
            const long long n = 1LL << b;
            if (n_x != n || n_y != n) {
                throw ParseError("labeled graphs need n_x = n_y = 2^b", line_no);
            }
            std::vector<std::uint32_t> values;
            values.reserve(static_cast<size_t>(n));
            for (long long i = 0; i < n; ++i) {
                if (!std::getline(in, line)) {
                    throw ParseError("expected " + std::to_string(n) + " label lines",
                                     line_no + 1);
                }
                ++line_no;
                strip_cr(line);
                if (static_cast<long long>(line.size()) != b) {
                    throw ParseError("label must be exactly " + std::to_string(b) + " bits",
                                     line_no);
                }
                std::uint32_t v = 0;
                for (char c : line) {
                    if (c != '0' && c != '1') throw ParseError("label must be 0/1 only", line_no);
                    v = (v << 1) | static_cast<std::uint32_t>(c - '0');
                }
                values.push_back(v);
            }
            try {
                labels.emplace(static_cast<int>(b), std::move(values));
            } catch (const Error& e) {
                throw ParseError(e.what(), line_no);
            }
        } else {
            peeked = true;
        }
    }

    std::vector<Edge> edges;
    std::unordered_set<std::uint64_t> seen;
    auto consume_edge_line = [&](const std::string& text, int at) {
        if (text.empty()) return;
        if (text[0] == '#') return;
        auto tab = text.find('\t');
        long long x = 0, y = 0;
        if (tab == std::string::npos || !parse_int(std::string_view(text).substr(0, tab), x) ||
            !parse_int(std::string_view(text).substr(tab + 1), y)) {
            throw ParseError("edge line must be \"<x>\\t<y>\"", at);
        }
        if (x < 0 || x >= n_x || y < 0 || y >= n_y) {
            throw ParseError("edge (" + std::to_string(x) + ", " + std::to_string(y) +
                                 ") out of range for " + std::to_string(n_x) + "x" +
                                 std::to_string(n_y),
                             at);
        }
        if (!seen.insert(pack(static_cast<int>(x), static_cast<int>(y))).second) {
            throw ParseError("duplicate edge (" + std::to_string(x) + ", " +
                                 std::to_string(y) + ")",
                             at);
        }
        edges.push_back({static_cast<int>(x), static_cast<int>(y)});
    };

    if (peeked) consume_edge_line(line, line_no);
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        consume_edge_line(line, line_no);
    }

    return ConnectionGraph(static_cast<int>(n_x), static_cast<int>(n_y), std::move(edges),
                           std::move(labels));
}

void save_edge_list(const ConnectionGraph& g, const std::string& path) {
    std::ostringstream out;
    out << g.n_x() << '\t' << g.n_y() << '\n';
    if (g.labels()) {
        const BitLabels& lb = *g.labels();
        out << "#labels b=" << lb.bits() << '\n';
        for (int i = 0; i < g.n_x(); ++i) out << lb.label_string(i) << '\n';
    }
    for (const Edge& e : g.edges()) out << e.x << '\t' << e.y << '\n';

    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << out.str();
    if (!f) throw Error("write failed for " + path);
}

long long induced_edge_count(const ConnectionGraph& g, std::span<const int> s,
                             std::span<const int> t) {
    std::vector<char> in_s(static_cast<size_t>(g.n_x()), 0);
    std::vector<char> in_t(static_cast<size_t>(g.n_y()), 0);
    for (int v : s) {
        if (v < 0 || v >= g.n_x()) throw RangeError("S index out of range");
        in_s[static_cast<size_t>(v)] = 1;
    }
    for (int v : t) {
        if (v < 0 || v >= g.n_y()) throw RangeError("T index out of range");
        in_t[static_cast<size_t>(v)] = 1;
    }
    long long count = 0;
    for (const Edge& e : g.edges()) {
        count += in_s[static_cast<size_t>(e.x)] & in_t[static_cast<size_t>(e.y)];
    }
    return count;
}

}  // namespace somepairs
