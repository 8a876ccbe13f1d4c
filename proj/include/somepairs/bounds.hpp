#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "somepairs/graph.hpp"
#include "somepairs/rational.hpp"

namespace somepairs {

inline constexpr long long kDefaultEnumerationBudget = 10'000'000;

// Closed-form rate bounds for n inputs per side, m outputs, reducer size q.
// upper_a and upper_b are exact; the rest are doubles. A log-based term whose
// argument is not > 1 is left unset rather than raising.
struct BoundsReport {
    long long n = 0;
    long long m = 0;
    int q = 1;

    Rational upper_a;  // n / q
    Rational upper_b;  // m / n
    double alg_c = 0;  // sqrt(m / q)

    double lower_complete_cap = 0;                // n / (3q)
    std::optional<double> lower_complete_edge;    // (m/n) / (6 log2(e n / q))
    double lower_complete = 0;                    // min of the terms present

    // For unrestricted schemas the completion argument divides the complete
    // bound by 6; that keeps lower_any <= lower_complete everywhere.
    double lower_any = 0;       // lower_complete / 6
    double lower_any_cap = 0;   // n / (18q)

    // Variant with the factor 6 folded into the log argument instead. Can
    // exceed lower_complete, so it is reported but not used for ordering.
    std::optional<double> lower_any_logshift_edge;  // (m/n) / (6 log2(e n / 6q))
    std::optional<double> lower_any_logshift;       // min(lower_any_cap, edge term)

    Rational mu;  // m q^2 / n^2
};

BoundsReport bounds_report(long long n, long long m, int q);

// Largest edge count any q-by-q index pair can cover, with a witness pair
// attaining it. exact is always true for the brute-force search.
struct ExpansionResult {
    long long phi = 0;
    std::vector<int> witness_s;
    std::vector<int> witness_t;
    int q = 0;
    bool exact = true;
};

// Exhaustive over S (all q-subsets of X); for each S the best T is the q
// columns with the largest edge counts from S, which is exact because the
// objective is additive over T's elements. Enumerating C(n_x, q) subsets
// above the budget raises BudgetError carrying the required budget. jobs > 1
// splits the S space; results do not depend on the worker count.
ExpansionResult brute_force_expansion(const ConnectionGraph& g, int q,
                                      long long budget = kDefaultEnumerationBudget,
                                      int jobs = 1);

// q * log2(2q): every q-by-q pair in a gen_hd1 graph covers at most this.
double hd1_phi_bound(int q);

// Any schema whose reducers each cover at most phi edges needs at least
// m / phi reducers. phi = 0 with m > 0 raises ContradictionError.
Rational reducer_lower_bound(long long m, long long phi);

struct ExpansionTrial {
    std::uint64_t seed = 0;
    long long edge_count = 0;  // realized edges after collapsing duplicates
    long long phi = 0;
    double rate_lower = 0;     // q * edge_count / (phi * n)
    bool within_case_bound = false;
    bool within_case1_tight = false;
};

// Measured expansion of seeded random instances against the closed-form
// regime bounds. case_label is "case1" when q <= n^2/m, "case2" when
// q >= n^2 ln(e n / q) / m, otherwise "gap" (no bound applies). Case 1 is
// checked against 6 q log2(e n / q) and also reported against the tighter
// constant 4.
struct ExpansionSummary {
    int n = 0;
    long long m = 0;  // requested draws
    int q = 1;
    int trials = 0;
    std::uint64_t seed = 0;
    RandomMode mode = RandomMode::with_replacement;

    std::string case_label;
    std::optional<double> case_bound;
    std::optional<double> case1_tight_bound;  // 4 q log2(e n / q), case 1 only
    bool kappa_ok = false;                    // m >= n * 2^(3e) / e

    std::vector<ExpansionTrial> per_trial;
    long long phi_max = 0;
    double phi_median = 0;
    std::optional<double> fraction_within;  // unset when gap or trials == 0
};

ExpansionSummary expansion_experiment(int n, long long m, int q, int trials,
                                      std::uint64_t seed,
                                      RandomMode mode = RandomMode::with_replacement,
                                      long long budget = kDefaultEnumerationBudget,
                                      int jobs = 1);

}  // namespace somepairs
