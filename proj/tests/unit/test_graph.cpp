#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "somepairs/errors.hpp"
#include "somepairs/graph.hpp"
#include "util.hpp"

using namespace somepairs;
using testutil::edge_set;
using testutil::popcount32;

namespace {

std::set<std::pair<int, int>> hd1_pairs_by_predicate(int b) {
    std::set<std::pair<int, int>> out;
    const int n = 1 << b;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (popcount32(static_cast<std::uint32_t>(x ^ y)) == 1) out.insert({x, y});
    return out;
}

std::set<std::pair<int, int>> hd1_up_pairs_by_predicate(int b) {
    std::set<std::pair<int, int>> out;
    const int n = 1 << b;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const int d = x ^ y;
            if (popcount32(static_cast<std::uint32_t>(d)) == 1 && (x & d) == 0)
                out.insert({x, y});
        }
    return out;
}

}  // namespace

TEST_CASE("hd1 generator matches the distance-one predicate") {
    for (int b = 1; b <= 4; ++b) {
        CAPTURE(b);
        const auto g = gen_hd1(b);
        CHECK(g.n_x() == (1 << b));
        CHECK(g.n_y() == (1 << b));
        CHECK(g.m() == static_cast<long long>(b) * (1 << b));
        CHECK(edge_set(g) == hd1_pairs_by_predicate(b));
        REQUIRE(g.labels().has_value());
        CHECK(g.labels()->bits() == b);
        for (int i = 0; i < g.n_x(); ++i) CHECK(g.labels()->value(i) == static_cast<std::uint32_t>(i));
    }
}

TEST_CASE("hd1 edge set is symmetric") {
    const auto g = gen_hd1(3);
    const auto s = edge_set(g);
    for (const auto& [x, y] : s) CHECK(s.count({y, x}) == 1);
}

TEST_CASE("hd1_up at b=2 is exactly the four upward flips") {
    const auto g = gen_hd1_up(2);
    const std::set<std::pair<int, int>> expected = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
    CHECK(edge_set(g) == expected);
    CHECK(g.m() == 4);
}

TEST_CASE("hd1_up generator matches the upward-flip predicate") {
    for (int b = 1; b <= 4; ++b) {
        CAPTURE(b);
        const auto g = gen_hd1_up(b);
        CHECK(g.m() == static_cast<long long>(b) * (1 << (b - 1)));
        CHECK(edge_set(g) == hd1_up_pairs_by_predicate(b));
        for (const auto& e : g.edges())
            CHECK(g.labels()->weight(e.y) == g.labels()->weight(e.x) + 1);
    }
}

TEST_CASE("label rendering is MSB first") {
    const auto g = gen_hd1(2);
    REQUIRE(g.labels().has_value());
    CHECK(g.labels()->label_string(0) == "00");
    CHECK(g.labels()->label_string(1) == "01");
    CHECK(g.labels()->label_string(2) == "10");
    CHECK(g.labels()->label_string(3) == "11");
    CHECK(g.labels()->index_of(2u) == 2);
    CHECK(g.labels()->weight(3) == 2);
}

TEST_CASE("generators reject out-of-range widths") {
    CHECK_THROWS_AS(gen_hd1(0), SizeLimitError);
    CHECK_THROWS_AS(gen_hd1(21), SizeLimitError);
    CHECK_THROWS_AS(gen_hd1_up(0), SizeLimitError);
    CHECK_THROWS_AS(gen_hd1_up(21), SizeLimitError);
}

TEST_CASE("graph construction validates its inputs") {
    CHECK_THROWS_AS(ConnectionGraph(0, 4, {}), RangeError);
    CHECK_THROWS_AS(ConnectionGraph(4, 4, {{0, 4}}), RangeError);
    CHECK_THROWS_AS(ConnectionGraph(4, 4, {{-1, 0}}), RangeError);
    CHECK_THROWS_AS(ConnectionGraph(4, 4, {{1, 2}, {1, 2}}), Error);
    // Labels force square power-of-two sides.
    BitLabels two(1, {0u, 1u});
    CHECK_THROWS_AS(ConnectionGraph(3, 3, {}, two), Error);
    CHECK_THROWS_AS(BitLabels(1, {0u, 0u}), Error);   // duplicate
    CHECK_THROWS_AS(BitLabels(1, {0u, 2u}), Error);   // out of range
    CHECK_THROWS_AS(BitLabels(2, {0u, 1u}), Error);   // wrong count
}

TEST_CASE("edges are sorted and adjacency is consistent") {
    ConnectionGraph g(3, 3, {{2, 0}, {0, 2}, {0, 1}, {1, 1}});
    std::vector<Edge> expected = {{0, 1}, {0, 2}, {1, 1}, {2, 0}};
    CHECK(g.edges() == expected);
    CHECK(g.has_edge(0, 2));
    CHECK_FALSE(g.has_edge(2, 2));

    auto n0 = g.x_neighbors(0);
    CHECK(std::vector<int>(n0.begin(), n0.end()) == std::vector<int>{1, 2});
    CHECK(g.x_neighbors(1).size() == 1);
    CHECK(g.x_neighbors(2)[0] == 0);
    CHECK(g.adjacency_offset(0) == 0);
    CHECK(g.adjacency_offset(1) == 2);
    CHECK(g.adjacency_offset(2) == 3);
    // Span entry k of x's neighbors is edge adjacency_offset(x)+k.
    for (int x = 0; x < g.n_x(); ++x) {
        auto nb = g.x_neighbors(x);
        for (size_t k = 0; k < nb.size(); ++k) {
            const auto& e = g.edges()[static_cast<size_t>(g.adjacency_offset(x)) + k];
            CHECK(e.x == x);
            CHECK(e.y == nb[k]);
        }
    }
}

TEST_CASE("distinct random graphs have exactly m edges and repeat per seed") {
    const auto a = gen_random(16, 32, RandomMode::distinct, 7);
    const auto b = gen_random(16, 32, RandomMode::distinct, 7);
    const auto c = gen_random(16, 32, RandomMode::distinct, 8);
    CHECK(a.m() == 32);
    CHECK(a.edges() == b.edges());
    CHECK(a.edges() != c.edges());
    CHECK(a.draw_count == -1);
    for (const auto& e : a.edges()) {
        CHECK(e.x >= 0);
        CHECK(e.x < 16);
        CHECK(e.y >= 0);
        CHECK(e.y < 16);
    }
    // m = n^2 forces the complete bipartite graph.
    const auto full = gen_random(4, 16, RandomMode::distinct, 3);
    CHECK(full.m() == 16);
    CHECK(edge_set(full).size() == 16);
    CHECK_THROWS_AS(gen_random(4, 17, RandomMode::distinct, 0), InfeasibleError);
}

TEST_CASE("with-replacement random graphs collapse duplicates and record draws") {
    const auto a = gen_random(8, 200, RandomMode::with_replacement, 1);
    CHECK(a.draw_count == 200);
    CHECK(a.m() <= 200);
    CHECK(a.m() <= 64);
    const auto b = gen_random(8, 200, RandomMode::with_replacement, 1);
    CHECK(a.edges() == b.edges());
    const auto tiny = gen_random(8, 0, RandomMode::with_replacement, 1);
    CHECK(tiny.m() == 0);
}

TEST_CASE("edge list round trip preserves the graph") {
    const auto dir = testutil::temp_dir();
    const auto path = (dir / "plain.tsv").string();
    const auto g = gen_random(10, 23, RandomMode::distinct, 5);
    save_edge_list(g, path);
    const auto back = load_edge_list(path);
    CHECK(back.n_x() == g.n_x());
    CHECK(back.n_y() == g.n_y());
    CHECK(back.edges() == g.edges());
    CHECK_FALSE(back.labels().has_value());
    // Saving the loaded graph reproduces the file byte for byte.
    const auto path2 = (dir / "plain2.tsv").string();
    save_edge_list(back, path2);
    CHECK(testutil::read_file(path) == testutil::read_file(path2));
}

TEST_CASE("edge list round trip preserves labels") {
    const auto dir = testutil::temp_dir();
    const auto path = (dir / "labeled.tsv").string();
    const auto g = gen_hd1_up(3);
    save_edge_list(g, path);
    const auto back = load_edge_list(path);
    REQUIRE(back.labels().has_value());
    CHECK(back.labels()->bits() == 3);
    CHECK(back.labels()->values() == g.labels()->values());
    CHECK(back.edges() == g.edges());
}

TEST_CASE("edge list parser accepts comments and blanks") {
    const auto dir = testutil::temp_dir();
    const auto path = (dir / "comments.tsv").string();
    testutil::write_file(path,
                         "4\t4\n"
                         "# a comment\n"
                         "\n"
                         "0\t1\n"
                         "# trailing note\n"
                         "2\t3\n");
    const auto g = load_edge_list(path);
    CHECK(g.n_x() == 4);
    CHECK(g.m() == 2);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(2, 3));
}

TEST_CASE("edge list parse errors name the offending line") {
    const auto dir = testutil::temp_dir();
    auto expect_line = [&](const std::string& text, int line) {
        const auto path = (dir / "bad.tsv").string();
        testutil::write_file(path, text);
        try {
            load_edge_list(path);
            FAIL_CHECK("expected ParseError for: " << text);
        } catch (const ParseError& e) {
            CHECK(e.line() == line);
        }
    };
    expect_line("bogus\n0\t1\n", 1);
    expect_line("4\t4\nx\ty\n", 2);
    expect_line("4\t4\n0\t1\n9\t0\n", 3);
    expect_line("4\t4\n0\t1\n0\t1\n", 3);          // duplicate edge
    expect_line("4\t4\n0\t1\t2\n", 2);             // extra column
    expect_line("4\t4\n#labels b=2\n00\n01\n", 5); // truncated label block
    CHECK_THROWS_AS(load_edge_list((dir / "missing_file.tsv").string()), Error);
}

TEST_CASE("labeled headers are parsed strictly") {
    const auto dir = testutil::temp_dir();
    const auto path = (dir / "lab.tsv").string();
    testutil::write_file(path,
                         "4\t4\n"
                         "#labels b=2\n"
                         "00\n01\n10\n11\n"
                         "0\t1\n");
    const auto g = load_edge_list(path);
    REQUIRE(g.labels().has_value());
    CHECK(g.labels()->bits() == 2);
    CHECK(g.m() == 1);

    testutil::write_file(path,
                         "4\t4\n"
                         "#labels b=2\n"
                         "00\n01\n10\n2x\n"
                         "0\t1\n");
    CHECK_THROWS_AS(load_edge_list(path), ParseError);
}

TEST_CASE("induced edge counts match a direct scan") {
    const auto g = gen_hd1(2);
    const std::vector<int> s01 = {0, 1};
    CHECK(induced_edge_count(g, s01, s01) == 2);  // 00<->01 both ways
    CHECK(induced_edge_count(g, {}, s01) == 0);

    const auto full = gen_random(4, 16, RandomMode::distinct, 1);
    const std::vector<int> s = {0, 3};
    const std::vector<int> t = {1, 2, 3};
    CHECK(induced_edge_count(full, s, t) == 6);

    // Repeats are ignored.
    const std::vector<int> rep = {0, 0, 1, 1};
    CHECK(induced_edge_count(g, rep, rep) == 2);

    const std::vector<int> bad = {99};
    CHECK_THROWS_AS(induced_edge_count(g, bad, s01), RangeError);
}

TEST_CASE("induced edge counts grow with the subsets") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = gen_random(9, 30, RandomMode::distinct, seed);
        std::vector<int> s = {1, 4};
        std::vector<int> t = {0, 2, 8};
        const auto base = induced_edge_count(g, s, t);
        std::vector<int> s2 = s;
        s2.push_back(7);
        CHECK(induced_edge_count(g, s2, t) >= base);
        std::vector<int> t2 = t;
        t2.push_back(5);
        CHECK(induced_edge_count(g, s, t2) >= base);
    }
}
