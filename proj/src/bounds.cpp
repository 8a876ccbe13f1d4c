#include "somepairs/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "somepairs/errors.hpp"

namespace somepairs {

namespace {

// C(n, k), clamped to cap + 1 once it exceeds cap.
long long binom_capped(long long n, long long k, long long cap) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    __int128 r = 1;
    for (long long i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > cap) return cap + 1;
    }
    return static_cast<long long>(r);
}

std::optional<double> log_term(double m_over_n, double arg) {
    if (arg <= 1.0) return std::nullopt;
    return m_over_n / (6.0 * std::log2(arg));
}

}  // namespace

BoundsReport bounds_report(long long n, long long m, int q) {
    if (n < 1) throw PreconditionError("n must be positive");
    if (m < 0) throw PreconditionError("m must be nonnegative");
    if (q < 1) throw PreconditionError("q must be positive");

    BoundsReport r;
    r.n = n;
    r.m = m;
    r.q = q;
    r.upper_a = Rational(n, q);
    r.upper_b = Rational(m, n);
    r.alg_c = std::sqrt(static_cast<double>(m) / static_cast<double>(q));
    r.mu = Rational(m, n) * Rational(q, n) * Rational(q);

    const double nd = static_cast<double>(n);
    const double qd = static_cast<double>(q);
    const double m_over_n = static_cast<double>(m) / nd;
    const double e = std::numbers::e;

    r.lower_complete_cap = nd / (3.0 * qd);
    r.lower_complete_edge = log_term(m_over_n, e * nd / qd);
    r.lower_complete = r.lower_complete_edge
                           ? std::min(r.lower_complete_cap, *r.lower_complete_edge)
                           : r.lower_complete_cap;

    r.lower_any = r.lower_complete / 6.0;
    r.lower_any_cap = nd / (18.0 * qd);
    r.lower_any_logshift_edge = log_term(m_over_n, e * nd / (6.0 * qd));
    if (r.lower_any_logshift_edge) {
        r.lower_any_logshift = std::min(r.lower_any_cap, *r.lower_any_logshift_edge);
    }
    return r;
}

namespace {

struct TaskBest {
    long long phi = -1;
    std::vector<int> s;
    std::vector<int> t;
};

// Enumerates every q-subset of X whose smallest element is `first` and keeps
// the best top-q column sum. Column counts are maintained incrementally; the
// active list tracks columns with a nonzero count in LIFO discipline.
class SubsetScanner {
public:
    SubsetScanner(const ConnectionGraph& g, int q)
        : g_(g), q_(q), col_(static_cast<size_t>(g.n_y()), 0) {
        stack_.reserve(static_cast<size_t>(q));
        top_.resize(static_cast<size_t>(q));
    }

    TaskBest scan_first(int first) {
        best_ = TaskBest{};
        add(first);
        extend(first + 1);
        remove(first);
        return std::move(best_);
    }

private:
    void add(int x) {
        stack_.push_back(x);
        for (int y : g_.x_neighbors(x)) {
            if (col_[static_cast<size_t>(y)]++ == 0) active_.push_back(y);
        }
    }

    void remove(int x) {
        const auto nbrs = g_.x_neighbors(x);
        for (std::size_t i = nbrs.size(); i-- > 0;) {
            const int y = nbrs[i];
            if (--col_[static_cast<size_t>(y)] == 0) active_.pop_back();
        }
        stack_.pop_back();
    }

    void extend(int from) {
        if (static_cast<int>(stack_.size()) == q_) {
            leaf();
            return;
        }
        const int remaining = q_ - static_cast<int>(stack_.size());
        for (int x = from; x <= g_.n_x() - remaining; ++x) {
            add(x);
            extend(x + 1);
            remove(x);
        }
    }

    void leaf() {
        // Top q columns under (count desc, index asc); exact because the
        // covered-edge count is a sum of independent per-column counts.
        int used = 0;
        for (int y : active_) {
            const long long c = col_[static_cast<size_t>(y)];
            int pos = used;
            while (pos > 0 && (top_[static_cast<size_t>(pos - 1)].first < c ||
                               (top_[static_cast<size_t>(pos - 1)].first == c &&
                                top_[static_cast<size_t>(pos - 1)].second > y))) {
                --pos;
            }
            if (pos >= q_) continue;
            if (used < q_) ++used;
            for (int i = used - 1; i > pos; --i) {
                top_[static_cast<size_t>(i)] = top_[static_cast<size_t>(i - 1)];
            }
            top_[static_cast<size_t>(pos)] = {c, y};
        }
        long long sum = 0;
        for (int i = 0; i < used; ++i) sum += top_[static_cast<size_t>(i)].first;
        if (sum > best_.phi) {
            best_.phi = sum;
            best_.s = stack_;
            best_.t.clear();
            for (int i = 0; i < used; ++i) best_.t.push_back(top_[static_cast<size_t>(i)].second);
            std::sort(best_.t.begin(), best_.t.end());
        }
    }

    const ConnectionGraph& g_;
    int q_;
    std::vector<long long> col_;
    std::vector<int> active_;
    std::vector<int> stack_;
    std::vector<std::pair<long long, int>> top_;
    TaskBest best_;
};

}  // namespace

ExpansionResult brute_force_expansion(const ConnectionGraph& g, int q, long long budget,
                                      int jobs) {
    if (q < 1) throw PreconditionError("q must be positive");
    if (q > g.n_x() || q > g.n_y()) {
        throw PreconditionError("q = " + std::to_string(q) +
                                " exceeds a side of the graph");
    }
    if (budget < 1) throw PreconditionError("budget must be positive");

    const long long subsets = binom_capped(g.n_x(), q, budget);
    if (subsets > budget) {
        const long long required =
            binom_capped(g.n_x(), q, std::numeric_limits<long long>::max() / 2);
        throw BudgetError("enumerating C(" + std::to_string(g.n_x()) + ", " +
                              std::to_string(q) + ") = " + std::to_string(required) +
                              " subsets exceeds the budget of " + std::to_string(budget),
                          required);
    }

    ExpansionResult result;
    result.q = q;
    result.exact = true;
    if (g.m() == 0) return result;

    const int first_count = g.n_x() - q + 1;
    std::vector<TaskBest> bests(static_cast<size_t>(first_count));
    const int workers = std::clamp(jobs, 1, first_count);

    if (workers == 1) {
        SubsetScanner scanner(g, q);
        for (int f = 0; f < first_count; ++f) bests[static_cast<size_t>(f)] = scanner.scan_first(f);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            SubsetScanner scanner(g, q);
            for (;;) {
                const int f = next.fetch_add(1);
                if (f >= first_count) break;
                bests[static_cast<size_t>(f)] = scanner.scan_first(f);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Fold in first-element order so ties resolve to the lexicographically
    // smallest witness regardless of the worker count.
    for (const TaskBest& b : bests) {
        if (b.phi > result.phi) {
            result.phi = b.phi;
            result.witness_s = b.s;
            result.witness_t = b.t;
        }
    }
    return result;
}

double hd1_phi_bound(int q) {
    if (q < 1) throw PreconditionError("q must be positive");
    return static_cast<double>(q) * std::log2(2.0 * static_cast<double>(q));
}

Rational reducer_lower_bound(long long m, long long phi) {
    if (m < 0 || phi < 0) throw PreconditionError("counts must be nonnegative");
    if (m == 0) return Rational(0);
    if (phi == 0) {
        throw ContradictionError("no subset pair covers any edge, yet edges exist");
    }
    return Rational(m, phi);
}

ExpansionSummary expansion_experiment(int n, long long m, int q, int trials,
                                      std::uint64_t seed, RandomMode mode,
                                      long long budget, int jobs) {
    if (trials < 0) throw PreconditionError("trials must be nonnegative");

    ExpansionSummary sum;
    sum.n = n;
    sum.m = m;
    sum.q = q;
    sum.trials = trials;
    sum.seed = seed;
    sum.mode = mode;

    const double nd = static_cast<double>(n);
    const double qd = static_cast<double>(q);
    const double md = static_cast<double>(m);
    const double e = std::numbers::e;
    const double n2 = nd * nd;

    if (static_cast<__int128>(q) * m <= static_cast<__int128>(n) * n) {
        sum.case_label = "case1";
        sum.case_bound = 6.0 * qd * std::log2(e * nd / qd);
        sum.case1_tight_bound = 4.0 * qd * std::log2(e * nd / qd);
    } else if (m > 0 && qd * md >= n2 * std::log(e * nd / qd)) {
        sum.case_label = "case2";
        sum.case_bound = 3.0 * md * qd * qd / n2;
    } else {
        sum.case_label = "gap";
    }
    sum.kappa_ok = md >= nd * std::exp2(3.0 * e) / e;

    std::vector<long long> phis;
    int within = 0;
    for (int t = 0; t < trials; ++t) {
        ExpansionTrial trial;
        trial.seed = seed + static_cast<std::uint64_t>(t);
        ConnectionGraph g = gen_random(n, m, mode, trial.seed);
        trial.edge_count = g.m();
        ExpansionResult ex = brute_force_expansion(g, q, budget, jobs);
        trial.phi = ex.phi;
        trial.rate_lower =
            ex.phi > 0 ? qd * static_cast<double>(g.m()) / (static_cast<double>(ex.phi) * nd)
                       : 0.0;
        if (sum.case_bound) {
            trial.within_case_bound = static_cast<double>(ex.phi) <= *sum.case_bound + 1e-9;
            within += trial.within_case_bound;
        }
        if (sum.case1_tight_bound) {
            trial.within_case1_tight =
                static_cast<double>(ex.phi) <= *sum.case1_tight_bound + 1e-9;
        }
        phis.push_back(ex.phi);
        sum.per_trial.push_back(trial);
    }

    if (!phis.empty()) {
        sum.phi_max = *std::max_element(phis.begin(), phis.end());
        std::sort(phis.begin(), phis.end());
        const std::size_t h = phis.size() / 2;
        sum.phi_median = phis.size() % 2 ? static_cast<double>(phis[h])
                                         : (static_cast<double>(phis[h - 1]) +
                                            static_cast<double>(phis[h])) /
                                               2.0;
        if (sum.case_bound) {
            sum.fraction_within = static_cast<double>(within) / static_cast<double>(trials);
        }
    }
    return sum;
}

}  // namespace somepairs
