#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "somepairs/bounds.hpp"
#include "somepairs/errors.hpp"
#include "somepairs/graph.hpp"
#include "somepairs/rational.hpp"
#include "util.hpp"

using namespace somepairs;

namespace {

// Independent reference: enumerate every (S, T) pair outright. Only viable
// for small sides, which is exactly where it serves as the oracle.
long long phi_by_double_enumeration(const ConnectionGraph& g, int q) {
    long long best = 0;
    for (const auto& s : testutil::subsets(g.n_x(), q))
        for (const auto& t : testutil::subsets(g.n_y(), q))
            best = std::max(best, induced_edge_count(g, s, t));
    return best;
}

}  // namespace

TEST_CASE("closed-form bounds at n=16 m=64 q=2") {
    const auto r = bounds_report(16, 64, 2);
    CHECK(r.upper_a == Rational(8));
    CHECK(r.upper_b == Rational(4));
    CHECK(r.alg_c == doctest::Approx(std::sqrt(32.0)));
    CHECK(r.mu == Rational(1));  // 64 * 4 / 256

    const double e = std::numbers::e;
    CHECK(r.lower_complete_cap == doctest::Approx(16.0 / 6.0));
    REQUIRE(r.lower_complete_edge.has_value());
    CHECK(*r.lower_complete_edge == doctest::Approx(4.0 / (6.0 * std::log2(8.0 * e))));
    CHECK(r.lower_complete == doctest::Approx(*r.lower_complete_edge));
    CHECK(r.lower_any == doctest::Approx(r.lower_complete / 6.0));
    CHECK(r.lower_any_cap == doctest::Approx(16.0 / 36.0));
    REQUIRE(r.lower_any_logshift_edge.has_value());
    CHECK(*r.lower_any_logshift_edge == doctest::Approx(4.0 / (6.0 * std::log2(16.0 * e / 12.0))));
    REQUIRE(r.lower_any_logshift.has_value());
    CHECK(*r.lower_any_logshift == doctest::Approx(*r.lower_any_logshift_edge));

    CHECK(r.lower_any <= r.lower_complete);
    CHECK(r.lower_complete <= std::min(r.upper_a.to_double(), r.upper_b.to_double()) + 1e-9);
}

TEST_CASE("log terms vanish instead of exploding when the argument is small") {
    // q far above n: e*n/q <= 1, so only the cap terms remain.
    const auto r = bounds_report(4, 8, 16);
    CHECK_FALSE(r.lower_complete_edge.has_value());
    CHECK(r.lower_complete == doctest::Approx(4.0 / 48.0));
    CHECK_FALSE(r.lower_any_logshift_edge.has_value());
    CHECK_FALSE(r.lower_any_logshift.has_value());
    CHECK_THROWS_AS(bounds_report(0, 1, 1), PreconditionError);
    CHECK_THROWS_AS(bounds_report(4, -1, 1), PreconditionError);
    CHECK_THROWS_AS(bounds_report(4, 1, 0), PreconditionError);
}

TEST_CASE("bound ordering holds across a parameter sweep") {
    for (long long n : {4, 8, 16, 32, 64}) {
        for (long long m : {n, 2 * n, n * n / 4, n * n}) {
            for (int q = 1; q <= n; q *= 2) {
                CAPTURE(n);
                CAPTURE(m);
                CAPTURE(q);
                const auto r = bounds_report(n, m, q);
                const double best_upper = std::min(r.upper_a.to_double(), r.upper_b.to_double());
                CHECK(r.lower_any <= r.lower_complete + 1e-12);
                CHECK(r.lower_complete <= best_upper + 1e-9);
                CHECK(best_upper <= r.alg_c + 1e-9);
            }
        }
    }
}

TEST_CASE("brute-force expansion agrees with double enumeration") {
    std::vector<ConnectionGraph> graphs;
    graphs.push_back(gen_hd1(2));
    graphs.push_back(gen_hd1(3));
    graphs.push_back(gen_hd1_up(3));
    for (std::uint64_t seed = 0; seed < 6; ++seed)
        graphs.push_back(gen_random(7, 5 + 4 * static_cast<long long>(seed), RandomMode::distinct, seed));
    for (const auto& g : graphs) {
        for (int q : {1, 2, 3}) {
            CAPTURE(g.n_x());
            CAPTURE(g.m());
            CAPTURE(q);
            const auto r = brute_force_expansion(g, q);
            CHECK(r.exact);
            CHECK(r.q == q);
            CHECK(r.phi == phi_by_double_enumeration(g, q));
            // The witness must reproduce the reported value.
            CHECK(static_cast<int>(r.witness_s.size()) <= q);
            CHECK(static_cast<int>(r.witness_t.size()) <= q);
            CHECK(induced_edge_count(g, r.witness_s, r.witness_t) == r.phi);
            CHECK(std::is_sorted(r.witness_s.begin(), r.witness_s.end()));
            CHECK(std::is_sorted(r.witness_t.begin(), r.witness_t.end()));
        }
    }
}

TEST_CASE("expansion on distance-one cubes attains the log bound") {
    CHECK(brute_force_expansion(gen_hd1(2), 2).phi == 4);
    CHECK(brute_force_expansion(gen_hd1(3), 2).phi == 4);
    CHECK(brute_force_expansion(gen_hd1(3), 4).phi == 12);
    CHECK(hd1_phi_bound(1) == doctest::Approx(1.0));
    CHECK(hd1_phi_bound(2) == doctest::Approx(4.0));
    CHECK(hd1_phi_bound(4) == doctest::Approx(12.0));
    for (int b = 2; b <= 4; ++b)
        for (int q : {1, 2, 4}) {
            CAPTURE(b);
            CAPTURE(q);
            const auto r = brute_force_expansion(gen_hd1(b), q);
            CHECK(static_cast<double>(r.phi) <= hd1_phi_bound(q) + 1e-9);
        }
}

TEST_CASE("expansion grows with q") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto g = gen_random(8, 20, RandomMode::distinct, seed);
        long long prev = 0;
        for (int q = 1; q <= 4; ++q) {
            const auto r = brute_force_expansion(g, q);
            CHECK(r.phi >= prev);
            prev = r.phi;
        }
    }
}

TEST_CASE("expansion of a complete graph is q squared") {
    const auto g = gen_random(5, 25, RandomMode::distinct, 0);
    CHECK(brute_force_expansion(g, 2).phi == 4);
    CHECK(brute_force_expansion(g, 3).phi == 9);
}

TEST_CASE("expansion worker count does not change the answer") {
    const auto g = gen_hd1(3);
    const auto lone = brute_force_expansion(g, 3, kDefaultEnumerationBudget, 1);
    for (int jobs : {2, 4, 9}) {
        const auto multi = brute_force_expansion(g, 3, kDefaultEnumerationBudget, jobs);
        CHECK(multi.phi == lone.phi);
        CHECK(multi.witness_s == lone.witness_s);
        CHECK(multi.witness_t == lone.witness_t);
    }
}

TEST_CASE("expansion budget failures say what would be needed") {
    const auto g = gen_hd1(4);
    try {
        brute_force_expansion(g, 6, 100);
        FAIL_CHECK("expected BudgetError");
    } catch (const BudgetError& e) {
        CHECK(e.required() == 8008);  // C(16, 6)
    }
    CHECK_THROWS_AS(brute_force_expansion(g, 0), PreconditionError);
    CHECK_THROWS_AS(brute_force_expansion(g, 17), PreconditionError);
    CHECK_THROWS_AS(brute_force_expansion(g, 2, 0), PreconditionError);

    ConnectionGraph empty(6, 6, {});
    const auto r = brute_force_expansion(empty, 2);
    CHECK(r.phi == 0);
    CHECK(r.witness_s.empty());
}

TEST_CASE("reducer lower bound is m over phi") {
    CHECK(reducer_lower_bound(24, 4) == Rational(6));
    CHECK(reducer_lower_bound(24, 5) == Rational(24, 5));
    CHECK(reducer_lower_bound(0, 0) == Rational(0));
    CHECK(reducer_lower_bound(0, 3) == Rational(0));
    CHECK_THROWS_AS(reducer_lower_bound(5, 0), ContradictionError);
}

TEST_CASE("expansion experiment labels the regimes correctly") {
    // q * m == n^2 sits exactly on the case-1 boundary.
    const auto one = expansion_experiment(16, 128, 2, 3, 9);
    CHECK(one.case_label == "case1");
    REQUIRE(one.case_bound.has_value());
    const double e = std::numbers::e;
    CHECK(*one.case_bound == doctest::Approx(12.0 * std::log2(8.0 * e)));
    REQUIRE(one.case1_tight_bound.has_value());
    CHECK(*one.case1_tight_bound == doctest::Approx(8.0 * std::log2(8.0 * e)));
    CHECK_FALSE(one.kappa_ok);
    REQUIRE(one.per_trial.size() == 3);
    CHECK(one.per_trial[0].seed == 9);
    CHECK(one.per_trial[2].seed == 11);
    REQUIRE(one.fraction_within.has_value());
    CHECK(*one.fraction_within == doctest::Approx(1.0));  // phi <= q^2 = 4 << bound
    for (const auto& t : one.per_trial) {
        CHECK(t.phi >= 1);
        CHECK(t.phi <= 4);
        CHECK(t.within_case_bound);
        CHECK(t.rate_lower ==
              doctest::Approx(2.0 * static_cast<double>(t.edge_count) /
                              (static_cast<double>(t.phi) * 16.0)));
    }

    const auto two = expansion_experiment(16, 256, 4, 2, 0);
    CHECK(two.case_label == "case2");
    REQUIRE(two.case_bound.has_value());
    CHECK(*two.case_bound == doctest::Approx(48.0));  // 3 m q^2 / n^2
    CHECK_FALSE(two.case1_tight_bound.has_value());

    const auto gap = expansion_experiment(16, 256, 2, 2, 0);
    CHECK(gap.case_label == "gap");
    CHECK_FALSE(gap.case_bound.has_value());
    CHECK_FALSE(gap.fraction_within.has_value());
}

TEST_CASE("expansion experiment is deterministic and respects the mode") {
    const auto a = expansion_experiment(12, 40, 2, 4, 3);
    const auto b = expansion_experiment(12, 40, 2, 4, 3);
    REQUIRE(a.per_trial.size() == b.per_trial.size());
    for (size_t i = 0; i < a.per_trial.size(); ++i) {
        CHECK(a.per_trial[i].phi == b.per_trial[i].phi);
        CHECK(a.per_trial[i].edge_count == b.per_trial[i].edge_count);
    }
    CHECK(a.phi_max == b.phi_max);
    CHECK(a.phi_median == b.phi_median);

    // Distinct mode on a complete graph pins every trial to phi = q^2.
    const auto full = expansion_experiment(6, 36, 2, 2, 1, RandomMode::distinct);
    for (const auto& t : full.per_trial) {
        CHECK(t.edge_count == 36);
        CHECK(t.phi == 4);
    }

    const auto none = expansion_experiment(8, 16, 2, 0, 0);
    CHECK(none.per_trial.empty());
    CHECK(none.phi_max == 0);
    CHECK_FALSE(none.fraction_within.has_value());
    CHECK_THROWS_AS(expansion_experiment(8, 16, 2, -1, 0), PreconditionError);
}
