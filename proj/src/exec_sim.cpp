#include "somepairs/exec_sim.hpp"

#include <algorithm>
#include <bit>
#include <random>

#include "somepairs/errors.hpp"

namespace somepairs {

namespace {

std::vector<int> normalized_presence(std::vector<int> v, int n, const char* side) {
    for (int i : v) {
        if (i < 0 || i >= n) {
            throw RangeError(std::string("present ") + side + " index " + std::to_string(i) +
                             " out of range");
        }
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Portable Bernoulli draw: 53 uniform bits against the probability.
bool coin(std::mt19937_64& rng, double prob) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 < prob;
}

}  // namespace

ExecutionTrace run(const ConnectionGraph& g, const MappingSchema& s,
                   const PresenceSet& presence, const PairRule& rule) {
    ValidationReport vr = validate(g, s);
    if (!vr.ok()) throw SchemaInvalidError(std::move(vr));

    const std::vector<int> px = normalized_presence(presence.present_x, g.n_x(), "x");
    const std::vector<int> py = normalized_presence(presence.present_y, g.n_y(), "y");

    std::vector<char> x_here(static_cast<size_t>(g.n_x()), 0);
    std::vector<char> y_here(static_cast<size_t>(g.n_y()), 0);
    for (int i : px) x_here[static_cast<size_t>(i)] = 1;
    for (int i : py) y_here[static_cast<size_t>(i)] = 1;

    ExecutionTrace trace;
    trace.per_reducer_load.reserve(s.reducers.size());
    std::vector<Edge> emitted;

    std::vector<int> rx, ry;
    for (const Reducer& r : s.reducers) {
        rx.clear();
        ry.clear();
        for (int x : r.x_set) {
            if (x_here[static_cast<size_t>(x)]) rx.push_back(x);
        }
        for (int y : r.y_set) {
            if (y_here[static_cast<size_t>(y)]) ry.push_back(y);
        }
        trace.assignments += static_cast<long long>(rx.size() + ry.size());
        trace.per_reducer_load.push_back(
            {static_cast<int>(rx.size()), static_cast<int>(ry.size())});
        if (rx.empty() || ry.empty()) continue;
        if (rule) {
            for (int x : rx) {
                for (int y : ry) {
                    if (rule(x, y)) emitted.push_back({x, y});
                }
            }
        } else {
            for (int x : rx) {
                for (int y : g.x_neighbors(x)) {
                    if (std::binary_search(ry.begin(), ry.end(), y)) emitted.push_back({x, y});
                }
            }
        }
    }

    std::sort(emitted.begin(), emitted.end());
    emitted.erase(std::unique(emitted.begin(), emitted.end()), emitted.end());
    trace.emitted = std::move(emitted);

    const long long present = static_cast<long long>(px.size() + py.size());
    trace.realized_rate = present > 0 ? Rational(trace.assignments, present) : Rational(0);
    return trace;
}

PairRule hamming_distance_one_rule(const ConnectionGraph& g) {
    if (!g.labels()) throw PreconditionError("rule requires bit labels");
    const std::vector<std::uint32_t> values = g.labels()->values();
    return [values](int x, int y) {
        return std::popcount(values[static_cast<size_t>(x)] ^
                             values[static_cast<size_t>(y)]) == 1;
    };
}

PairRule hamming_up_rule(const ConnectionGraph& g) {
    if (!g.labels()) throw PreconditionError("rule requires bit labels");
    const std::vector<std::uint32_t> values = g.labels()->values();
    return [values](int x, int y) {
        const std::uint32_t vx = values[static_cast<size_t>(x)];
        const std::uint32_t vy = values[static_cast<size_t>(y)];
        const std::uint32_t d = vx ^ vy;
        return std::popcount(d) == 1 && (vx & d) == 0;
    };
}

PresenceSet full_presence(const ConnectionGraph& g) {
    PresenceSet p;
    p.present_x.resize(static_cast<size_t>(g.n_x()));
    p.present_y.resize(static_cast<size_t>(g.n_y()));
    for (int i = 0; i < g.n_x(); ++i) p.present_x[static_cast<size_t>(i)] = i;
    for (int i = 0; i < g.n_y(); ++i) p.present_y[static_cast<size_t>(i)] = i;
    return p;
}

PresenceSet random_presence(const ConnectionGraph& g, double prob, std::uint64_t seed) {
    if (prob < 0.0 || prob > 1.0) throw PreconditionError("probability must be in [0, 1]");
    std::mt19937_64 rng(seed);
    PresenceSet p;
    for (int i = 0; i < g.n_x(); ++i) {
        if (coin(rng, prob)) p.present_x.push_back(i);
    }
    for (int i = 0; i < g.n_y(); ++i) {
        if (coin(rng, prob)) p.present_y.push_back(i);
    }
    return p;
}

LoadProfile load_profile(int n_x, int n_y, const MappingSchema& s, double presence_prob,
                         int trials, std::uint64_t seed) {
    if (n_x < 1 || n_y < 1) throw PreconditionError("side sizes must be positive");
    if (presence_prob < 0.0 || presence_prob > 1.0) {
        throw PreconditionError("probability must be in [0, 1]");
    }
    if (trials < 0) throw PreconditionError("trials must be nonnegative");
    for (const Reducer& r : s.reducers) {
        for (int x : r.x_set) {
            if (x < 0 || x >= n_x) throw RangeError("reducer x index out of range");
        }
        for (int y : r.y_set) {
            if (y < 0 || y >= n_y) throw RangeError("reducer y index out of range");
        }
    }

    LoadProfile profile;
    profile.trials = trials;
    profile.presence_prob = presence_prob;
    profile.load_histogram.assign(static_cast<size_t>(2 * s.q + 1), 0);
    if (trials == 0 || s.reducers.empty()) return profile;

    std::vector<char> x_here(static_cast<size_t>(n_x), 0);
    std::vector<char> y_here(static_cast<size_t>(n_y), 0);
    long long load_sum = 0;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t));
        for (int i = 0; i < n_x; ++i) x_here[static_cast<size_t>(i)] = coin(rng, presence_prob);
        for (int i = 0; i < n_y; ++i) y_here[static_cast<size_t>(i)] = coin(rng, presence_prob);
        for (const Reducer& r : s.reducers) {
            int load = 0;
            for (int x : r.x_set) load += x_here[static_cast<size_t>(x)];
            for (int y : r.y_set) load += y_here[static_cast<size_t>(y)];
            load_sum += load;
            profile.max_load = std::max(profile.max_load, load);
            if (static_cast<size_t>(load) >= profile.load_histogram.size()) {
                profile.load_histogram.resize(static_cast<size_t>(load) + 1, 0);
            }
            ++profile.load_histogram[static_cast<size_t>(load)];
        }
    }
    profile.mean_load = static_cast<double>(load_sum) /
                        (static_cast<double>(trials) * static_cast<double>(s.reducers.size()));
    return profile;
}

}  // namespace somepairs
