#pragma once

#include <string>
#include <vector>

#include "somepairs/graph.hpp"
#include "somepairs/rational.hpp"

namespace somepairs {

// Inputs delivered to one reducer. Both sets are sorted and duplicate free.
struct Reducer {
    std::vector<int> x_set;
    std::vector<int> y_set;

    friend bool operator==(const Reducer&, const Reducer&) = default;
};

// A mapping schema: the reducer contents plus the per-side capacity q they
// were built for. Duplicate reducers are allowed and counted separately.
struct MappingSchema {
    int q = 1;
    std::vector<Reducer> reducers;
    std::string provenance;
};

struct ValidationReport {
    bool covered = true;
    bool capacity_ok = true;
    std::vector<Edge> uncovered_edges;      // sorted
    std::vector<int> offending_reducers;    // indices with an oversized side

    bool ok() const noexcept { return covered && capacity_ok; }
};

struct ReplicationReport {
    std::vector<long long> x_counts;  // reducers containing each X index
    std::vector<long long> y_counts;
    long long total_assignments = 0;
    long long p = 0;                  // reducer count
    long long assigned_inputs = 0;    // inputs present in at least one reducer
    Rational rate;                    // total / (n_x + n_y)
    Rational participating_rate;      // total / assigned_inputs, 0 when none

    long long count(InputId id) const {
        const auto& v = id.side == Side::X ? x_counts : y_counts;
        return v[static_cast<size_t>(id.index)];
    }
};

// Checks coverage (every edge fits in some reducer) and capacity (no side
// exceeds q). Out-of-range reducer indices throw RangeError; they are not a
// failed validation.
ValidationReport validate(const ConnectionGraph& g, const MappingSchema& s);

ReplicationReport replication_report(const ConnectionGraph& g, const MappingSchema& s);

// True when every reducer holds exactly q inputs from each side. An empty
// schema is complete.
bool is_complete(const MappingSchema& s);

// Completion transform: repeatedly merge the two smallest reducers that each
// hold at most floor(q/2) inputs per side, then pad every reducer to exactly
// q per side with the lowest absent indices. Requires q < max(n_x, n_y) / 2
// and a schema that validates.
MappingSchema make_complete(const ConnectionGraph& g, const MappingSchema& s);

// For a complete schema on n + n inputs, rate * n must equal p * q exactly.
bool rp_identity_check(const MappingSchema& s, int n);

// JSON wire format: {"q": ..., "provenance": ..., "reducers": [{"x": [...],
// "y": [...]}, ...]} with keys in that order and arrays ascending, so equal
// schemas serialize byte for byte identically.
std::string schema_to_json_string(const MappingSchema& s);
MappingSchema schema_from_json_string(const std::string& text);
MappingSchema load_schema(const std::string& path);
void save_schema(const MappingSchema& s, const std::string& path);

}  // namespace somepairs
