#include "somepairs/schema.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "somepairs/errors.hpp"

namespace somepairs {

namespace {

void check_reducer_ranges(const ConnectionGraph& g, const MappingSchema& s) {
    for (std::size_t i = 0; i < s.reducers.size(); ++i) {
        for (int x : s.reducers[i].x_set) {
            if (x < 0 || x >= g.n_x()) {
                throw RangeError("reducer " + std::to_string(i) + " holds x index " +
                                 std::to_string(x) + " outside [0, " +
                                 std::to_string(g.n_x()) + ")");
            }
        }
        for (int y : s.reducers[i].y_set) {
            if (y < 0 || y >= g.n_y()) {
                throw RangeError("reducer " + std::to_string(i) + " holds y index " +
                                 std::to_string(y) + " outside [0, " +
                                 std::to_string(g.n_y()) + ")");
            }
        }
    }
}

std::vector<int> normalized(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Extends the sorted set to size q with the smallest absent indices from
// [0, n).
void pad_side(std::vector<int>& side, int q, int n, const char* which) {
    const int need = q - static_cast<int>(side.size());
    if (need <= 0) return;
    if (q > n) {
        throw PreconditionError(std::string("cannot pad ") + which + " side to " +
                                std::to_string(q) + " from only " + std::to_string(n) +
                                " inputs");
    }
    std::vector<char> present(static_cast<size_t>(n), 0);
    for (int v : side) present[static_cast<size_t>(v)] = 1;
    std::vector<int> fill;
    fill.reserve(static_cast<size_t>(need));
    for (int v = 0; v < n && static_cast<int>(fill.size()) < need; ++v) {
        if (!present[static_cast<size_t>(v)]) fill.push_back(v);
    }
    std::vector<int> out;
    out.reserve(static_cast<size_t>(q));
    std::merge(side.begin(), side.end(), fill.begin(), fill.end(), std::back_inserter(out));
    side = std::move(out);
}

}  // namespace

ValidationReport validate(const ConnectionGraph& g, const MappingSchema& s) {
    if (s.q < 1) throw PreconditionError("schema capacity must be positive");
    check_reducer_ranges(g, s);

    ValidationReport report;
    for (std::size_t i = 0; i < s.reducers.size(); ++i) {
        const Reducer& r = s.reducers[i];
        if (static_cast<int>(r.x_set.size()) > s.q ||
            static_cast<int>(r.y_set.size()) > s.q) {
            report.offending_reducers.push_back(static_cast<int>(i));
        }
    }
    report.capacity_ok = report.offending_reducers.empty();

    std::vector<char> covered(static_cast<size_t>(g.m()), 0);
    std::vector<char> y_mark(static_cast<size_t>(g.n_y()), 0);
    for (const Reducer& r : s.reducers) {
        for (int y : r.y_set) y_mark[static_cast<size_t>(y)] = 1;
        for (int x : r.x_set) {
            const auto base = static_cast<size_t>(g.adjacency_offset(x));
            const auto nbrs = g.x_neighbors(x);
            for (std::size_t k = 0; k < nbrs.size(); ++k) {
                if (y_mark[static_cast<size_t>(nbrs[k])]) covered[base + k] = 1;
            }
        }
        for (int y : r.y_set) y_mark[static_cast<size_t>(y)] = 0;
    }
    for (std::size_t i = 0; i < covered.size(); ++i) {
        if (!covered[i]) report.uncovered_edges.push_back(g.edges()[i]);
    }
    report.covered = report.uncovered_edges.empty();
    return report;
}

ReplicationReport replication_report(const ConnectionGraph& g, const MappingSchema& s) {
    check_reducer_ranges(g, s);
    ReplicationReport rep;
    rep.x_counts.assign(static_cast<size_t>(g.n_x()), 0);
    rep.y_counts.assign(static_cast<size_t>(g.n_y()), 0);
    rep.p = static_cast<long long>(s.reducers.size());
    for (const Reducer& r : s.reducers) {
        for (int x : r.x_set) ++rep.x_counts[static_cast<size_t>(x)];
        for (int y : r.y_set) ++rep.y_counts[static_cast<size_t>(y)];
        rep.total_assignments += static_cast<long long>(r.x_set.size() + r.y_set.size());
    }
    for (long long c : rep.x_counts) rep.assigned_inputs += c > 0;
    for (long long c : rep.y_counts) rep.assigned_inputs += c > 0;
    rep.rate = Rational(rep.total_assignments, g.n_x() + g.n_y());
    rep.participating_rate =
        rep.assigned_inputs > 0 ? Rational(rep.total_assignments, rep.assigned_inputs)
                                : Rational(0);
    return rep;
}

bool is_complete(const MappingSchema& s) {
    for (const Reducer& r : s.reducers) {
        if (static_cast<int>(r.x_set.size()) != s.q ||
            static_cast<int>(r.y_set.size()) != s.q) {
            return false;
        }
    }
    return true;
}

MappingSchema make_complete(const ConnectionGraph& g, const MappingSchema& s) {
    const int n = std::max(g.n_x(), g.n_y());
    if (2 * s.q >= n) {
        throw PreconditionError("completion needs q < n/2, got q = " + std::to_string(s.q) +
                                ", n = " + std::to_string(n));
    }
    if (!validate(g, s).ok()) {
        throw PreconditionError("completion input schema does not validate");
    }

    MappingSchema out;
    out.q = s.q;
    out.provenance = s.provenance.empty() ? "complete" : s.provenance + "+complete";
    out.reducers = s.reducers;
    for (Reducer& r : out.reducers) {
        r.x_set = normalized(std::move(r.x_set));
        r.y_set = normalized(std::move(r.y_set));
    }

    const int half = s.q / 2;
    auto small = [&](const Reducer& r) {
        return static_cast<int>(r.x_set.size()) <= half &&
               static_cast<int>(r.y_set.size()) <= half;
    };
    auto total = [](const Reducer& r) { return r.x_set.size() + r.y_set.size(); };

    // Merge the two smallest qualifying reducers until at most one remains.
    while (true) {
        int first = -1, second = -1;
        for (std::size_t i = 0; i < out.reducers.size(); ++i) {
            if (!small(out.reducers[i])) continue;
            const auto better = [&](int other) {
                return other < 0 ||
                       total(out.reducers[i]) < total(out.reducers[static_cast<size_t>(other)]);
            };
            if (better(first)) {
                second = first;
                first = static_cast<int>(i);
            } else if (better(second)) {
                second = static_cast<int>(i);
            }
        }
        if (second < 0) break;
        if (first > second) std::swap(first, second);
        Reducer& a = out.reducers[static_cast<size_t>(first)];
        const Reducer& b = out.reducers[static_cast<size_t>(second)];
        std::vector<int> xs;
        std::vector<int> ys;
        std::set_union(a.x_set.begin(), a.x_set.end(), b.x_set.begin(), b.x_set.end(),
                       std::back_inserter(xs));
        std::set_union(a.y_set.begin(), a.y_set.end(), b.y_set.begin(), b.y_set.end(),
                       std::back_inserter(ys));
        a.x_set = std::move(xs);
        a.y_set = std::move(ys);
        out.reducers.erase(out.reducers.begin() + second);
    }

    for (Reducer& r : out.reducers) {
        pad_side(r.x_set, out.q, g.n_x(), "x");
        pad_side(r.y_set, out.q, g.n_y(), "y");
    }
    return out;
}

bool rp_identity_check(const MappingSchema& s, int n) {
    if (n < 1) throw PreconditionError("n must be positive");
    if (!is_complete(s)) throw PreconditionError("identity check needs a complete schema");
    long long total = 0;
    for (const Reducer& r : s.reducers) {
        total += static_cast<long long>(r.x_set.size() + r.y_set.size());
    }
    const Rational rate(total, 2LL * n);
    const Rational rn = rate * Rational(n);
    const Rational pq = Rational(static_cast<long long>(s.reducers.size())) * Rational(s.q);
    return rn == pq;
}

std::string schema_to_json_string(const MappingSchema& s) {
    nlohmann::ordered_json j;
    j["q"] = s.q;
    j["provenance"] = s.provenance;
    auto reducers = nlohmann::ordered_json::array();
    for (const Reducer& r : s.reducers) {
        nlohmann::ordered_json jr;
        jr["x"] = normalized(r.x_set);
        jr["y"] = normalized(r.y_set);
        reducers.push_back(std::move(jr));
    }
    j["reducers"] = std::move(reducers);
    return j.dump(2) + "\n";
}

MappingSchema schema_from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("schema is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("q") || !j.contains("reducers")) {
        throw Error("schema JSON needs \"q\" and \"reducers\"");
    }
    MappingSchema s;
    if (!j["q"].is_number_integer() || j["q"].get<long long>() < 1 ||
        j["q"].get<long long>() > std::numeric_limits<int>::max()) {
        throw Error("schema \"q\" must be a positive integer");
    }
    s.q = j["q"].get<int>();
    s.provenance = j.value("provenance", std::string{});
    if (!j["reducers"].is_array()) throw Error("schema \"reducers\" must be an array");
    for (const auto& jr : j["reducers"]) {
        if (!jr.is_object() || !jr.contains("x") || !jr.contains("y") ||
            !jr["x"].is_array() || !jr["y"].is_array()) {
            throw Error("each reducer needs integer arrays \"x\" and \"y\"");
        }
        Reducer r;
        for (const auto& v : jr["x"]) {
            if (!v.is_number_integer()) throw Error("reducer indices must be integers");
            r.x_set.push_back(v.get<int>());
        }
        for (const auto& v : jr["y"]) {
            if (!v.is_number_integer()) throw Error("reducer indices must be integers");
            r.y_set.push_back(v.get<int>());
        }
        r.x_set = normalized(std::move(r.x_set));
        r.y_set = normalized(std::move(r.y_set));
        s.reducers.push_back(std::move(r));
    }
    return s;
}

MappingSchema load_schema(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return schema_from_json_string(buf.str());
}

void save_schema(const MappingSchema& s, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << schema_to_json_string(s);
    if (!f) throw Error("write failed for " + path);
}

}  // namespace somepairs
