#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "somepairs/graph.hpp"
#include "somepairs/rational.hpp"
#include "somepairs/schema.hpp"

namespace somepairs {

// Which inputs actually showed up. Index lists are sorted and unique.
struct PresenceSet {
    std::vector<int> present_x;
    std::vector<int> present_y;
};

// Decides whether a delivered (x, y) pair is an output. An empty function
// means: consult the graph's edge list.
using PairRule = std::function<bool(int x, int y)>;

struct ExecutionTrace {
    long long assignments = 0;  // deliveries of present inputs to reducers
    std::vector<std::pair<int, int>> per_reducer_load;  // (present x, present y)
    std::vector<Edge> emitted;  // sorted, globally deduplicated
    Rational realized_rate;     // assignments / present inputs, 0 on empty
};

// Raised when run() is handed a schema that does not validate.
class SchemaInvalidError : public Error {
public:
    explicit SchemaInvalidError(ValidationReport report)
        : Error("schema does not validate against the graph"),
          report_(std::move(report)) {}

    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

// Simulated map, shuffle and reduce. Each reducer sees its present inputs and
// emits the qualifying pairs among them; emissions are deduplicated across
// reducers. With the default rule the result is exactly
// edges intersect (present_x cross present_y) whenever the schema covers.
ExecutionTrace run(const ConnectionGraph& g, const MappingSchema& s,
                   const PresenceSet& presence, const PairRule& rule = {});

// Label-based rules for the Hamming families; both require labels.
PairRule hamming_distance_one_rule(const ConnectionGraph& g);
PairRule hamming_up_rule(const ConnectionGraph& g);

PresenceSet full_presence(const ConnectionGraph& g);
PresenceSet random_presence(const ConnectionGraph& g, double prob, std::uint64_t seed);

// Monte Carlo reducer load under independent presence with the given
// probability. Loads across reducers within a trial share one presence draw.
struct LoadProfile {
    int trials = 0;
    double presence_prob = 0;
    double mean_load = 0;  // mean present inputs per reducer per trial
    int max_load = 0;
    std::vector<long long> load_histogram;  // index = load, size 2q + 1
};

LoadProfile load_profile(int n_x, int n_y, const MappingSchema& s,
                         double presence_prob, int trials, std::uint64_t seed);

}  // namespace somepairs
