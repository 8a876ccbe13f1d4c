#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "somepairs/bounds.hpp"
#include "somepairs/errors.hpp"
#include "somepairs/exec_sim.hpp"
#include "somepairs/graph.hpp"
#include "somepairs/planners.hpp"
#include "somepairs/rational.hpp"
#include "somepairs/schema.hpp"

using json = nlohmann::ordered_json;
using namespace somepairs;

namespace {

// Exit codes: 0 success, 2 usage or bad input, 3 incompatible request,
// 4 enumeration budget exceeded, 5 validation failure under --strict.
constexpr int kExitUsage = 2;
constexpr int kExitIncompatible = 3;
constexpr int kExitBudget = 4;
constexpr int kExitStrict = 5;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("cannot write " + path);
}

void put_rational(json& j, const std::string& key, const Rational& r) {
    j[key] = r.str();
    j[key + "_decimal"] = r.to_double();
}

long long resolve_budget(long long flag_value, bool flag_given) {
    if (flag_given) {
        if (flag_value < 1) throw RangeError("--budget must be positive");
        return flag_value;
    }
    if (const char* env = std::getenv("SOMEPAIRS_BUDGET")) {
        long long v = 0;
        const char* last = env + std::char_traits<char>::length(env);
        auto [ptr, ec] = std::from_chars(env, last, v);
        if (ec != std::errc{} || ptr != last || v < 1) {
            throw RangeError("SOMEPAIRS_BUDGET must be a positive integer");
        }
        return v;
    }
    return kDefaultEnumerationBudget;
}

// One graph per invocation: either a TSV file or an inline generator. The
// random generator draws from the command's --seed.
struct GraphSource {
    std::string path;
    std::string gen;
    int b = 3;
    int n = 16;
    long long m = 32;
    bool distinct = false;
};

void add_graph_source(CLI::App* cmd, GraphSource& src) {
    auto* in = cmd->add_option("--in", src.path, "edge-list TSV to load");
    auto* gen = cmd->add_option("--gen", src.gen, "inline generator: hd1, hd1_up or random")
                    ->check(CLI::IsMember({"hd1", "hd1_up", "random"}));
    cmd->add_option("--b", src.b, "bit width for hd1/hd1_up generators");
    cmd->add_option("--n", src.n, "per-side size for the random generator");
    cmd->add_option("--m", src.m, "edge draws for the random generator");
    cmd->add_flag("--distinct", src.distinct, "random generator rejects duplicate edges");
    in->excludes(gen);
    gen->excludes(in);
}

ConnectionGraph make_generated(const std::string& name, int b, int n, long long m,
                               bool distinct, std::uint64_t seed) {
    if (name == "hd1") return gen_hd1(b);
    if (name == "hd1_up") return gen_hd1_up(b);
    if (name == "random") {
        return gen_random(n, m, distinct ? RandomMode::distinct : RandomMode::with_replacement,
                          seed);
    }
    throw RangeError("unknown generator " + name);
}

ConnectionGraph resolve_graph(const GraphSource& src, std::uint64_t seed) {
    if (!src.path.empty()) return load_edge_list(src.path);
    if (!src.gen.empty()) return make_generated(src.gen, src.b, src.n, src.m, src.distinct, seed);
    throw RangeError("a graph is required: pass --in <file> or --gen <name>");
}

// True when the labels witness the one-bit-upward family plan_prefix targets.
bool is_up_family(const ConnectionGraph& g) {
    if (!g.labels()) return false;
    const auto& lab = *g.labels();
    const long long expect = static_cast<long long>(lab.bits()) * (g.n_x() / 2);
    if (g.m() != expect) return false;
    for (const auto& e : g.edges()) {
        const std::uint32_t vx = lab.value(e.x);
        const std::uint32_t d = vx ^ lab.value(e.y);
        if (d == 0 || (d & (d - 1)) != 0 || (vx & d) != 0) return false;
    }
    return true;
}

MappingSchema plan_by_name(const ConnectionGraph& g, const std::string& planner, int q,
                           const std::string& strategy_name, PlanStats* stats = nullptr) {
    if (planner == "a") return plan_a(g, q);
    if (planner == "b") return plan_b(g);
    if (planner == "prefix") return plan_prefix(g, q);
    if (planner == "c") {
        PartitionStrategy strategy =
            strategy_name == "weight" ? strategy_weight_bit() : strategy_halve();
        return plan_c(g, q, strategy, stats);
    }
    throw RangeError("unknown planner " + planner);
}

json validation_json(const ValidationReport& rep) {
    json j;
    j["valid"] = rep.ok();
    j["covered"] = rep.covered;
    j["capacity_ok"] = rep.capacity_ok;
    j["uncovered_count"] = rep.uncovered_edges.size();
    json sample = json::array();
    for (size_t i = 0; i < rep.uncovered_edges.size() && i < 10; ++i) {
        sample.push_back({rep.uncovered_edges[i].x, rep.uncovered_edges[i].y});
    }
    j["uncovered_sample"] = sample;
    json offenders = json::array();
    for (size_t i = 0; i < rep.offending_reducers.size() && i < 10; ++i) {
        offenders.push_back(rep.offending_reducers[i]);
    }
    j["offending_reducers"] = offenders;
    return j;
}

int cmd_gen(const std::string& name, int b, int n, long long m, bool distinct,
            std::uint64_t seed, const std::string& out_path) {
    const auto g = make_generated(name, b, n, m, distinct, seed);
    save_edge_list(g, out_path);
    std::cout << "n_x=" << g.n_x() << " n_y=" << g.n_y() << " m=" << g.m() << "\n";
    return 0;
}

int cmd_plan(const GraphSource& src, const std::string& planner, int q,
             const std::string& strategy, std::uint64_t seed, const std::string& out_path) {
    const auto g = resolve_graph(src, seed);
    if (planner == "c" && strategy == "weight" && g.labels() && !is_up_family(g)) {
        std::cerr << "note: the weight strategy guarantees two nonempty children per split "
                     "only on the one-bit-upward family; running anyway without that "
                     "guarantee\n";
    }
    const auto s = plan_by_name(g, planner, q, strategy);
    const auto rep = replication_report(g, s);
    if (!out_path.empty()) save_schema(s, out_path);
    std::cout << "p=" << rep.p << "\n";
    std::cout << "rate=" << rep.rate.str() << " (" << format_double(rep.rate.to_double())
              << ")\n";
    std::cout << "complete=" << (is_complete(s) ? "true" : "false") << "\n";
    return 0;
}

int cmd_validate(const GraphSource& src, const std::string& schema_path, bool strict,
                 std::uint64_t seed) {
    const auto g = resolve_graph(src, seed);
    const auto s = load_schema(schema_path);
    const auto rep = validate(g, s);
    json j = validation_json(rep);
    const auto rr = replication_report(g, s);
    j["p"] = rr.p;
    put_rational(j, "rate", rr.rate);
    j["complete"] = is_complete(s);
    std::cout << j.dump(2) << "\n";
    if (strict && !rep.ok()) return kExitStrict;
    return 0;
}

json bounds_json(const BoundsReport& r) {
    json j;
    j["n"] = r.n;
    j["m"] = r.m;
    j["q"] = r.q;
    put_rational(j, "upper_a", r.upper_a);
    put_rational(j, "upper_b", r.upper_b);
    j["alg_c"] = r.alg_c;
    j["lower_complete_cap"] = r.lower_complete_cap;
    if (r.lower_complete_edge) {
        j["lower_complete_edge"] = *r.lower_complete_edge;
    } else {
        j["lower_complete_edge"] = nullptr;
    }
    j["lower_complete"] = r.lower_complete;
    j["lower_any"] = r.lower_any;
    j["lower_any_cap"] = r.lower_any_cap;
    j["lower_any_logshift_edge"] =
        r.lower_any_logshift_edge ? json(*r.lower_any_logshift_edge) : json(nullptr);
    j["lower_any_logshift"] =
        r.lower_any_logshift ? json(*r.lower_any_logshift) : json(nullptr);
    put_rational(j, "mu", r.mu);
    return j;
}

int cmd_analyze(const GraphSource& src, int q, const std::string& schema_path,
                long long budget, int jobs, std::uint64_t seed, const std::string& out_path) {
    const auto g = resolve_graph(src, seed);
    const long long n = std::max(g.n_x(), g.n_y());
    json j;
    if (g.n_x() != g.n_y()) {
        j["note"] = "sides differ; closed-form bounds use n = max(n_x, n_y)";
    }
    j["bounds"] = bounds_json(bounds_report(n, g.m(), q));

    if (!schema_path.empty()) {
        const auto s = load_schema(schema_path);
        const auto vrep = validate(g, s);
        const auto rrep = replication_report(g, s);
        json sj;
        sj["p"] = rrep.p;
        sj["q"] = s.q;
        sj["provenance"] = s.provenance;
        put_rational(sj, "rate", rrep.rate);
        put_rational(sj, "participating_rate", rrep.participating_rate);
        sj["complete"] = is_complete(s);
        sj["validation"] = validation_json(vrep);
        try {
            const auto exp = brute_force_expansion(g, s.q, budget, jobs);
            sj["phi"] = exp.phi;
            if (g.m() > 0) {
                const auto floor_p = reducer_lower_bound(g.m(), exp.phi);
                put_rational(sj, "reducer_floor", floor_p);
                sj["p_meets_floor"] = Rational(rrep.p) >= floor_p;
            } else {
                put_rational(sj, "reducer_floor", Rational(0));
                sj["p_meets_floor"] = true;
            }
        } catch (const BudgetError& e) {
            sj["phi"] = "skipped (budget)";
            sj["reducer_floor"] = "skipped (budget)";
            sj["budget_required"] = e.required();
        }
        j["schema"] = sj;
    }
    const std::string text = j.dump(2) + "\n";
    if (!out_path.empty()) write_text(out_path, text);
    std::cout << text;
    return 0;
}

int cmd_expansion(int n, long long m, int q, int trials, std::uint64_t seed,
                  const std::string& mode_name, long long budget, int jobs,
                  const std::string& out_path, const std::string& tsv_path) {
    const RandomMode mode =
        mode_name == "distinct" ? RandomMode::distinct : RandomMode::with_replacement;
    const auto sum = expansion_experiment(n, m, q, trials, seed, mode, budget, jobs);

    json j;
    j["n"] = sum.n;
    j["m"] = sum.m;
    j["q"] = sum.q;
    j["trials"] = sum.trials;
    j["seed"] = sum.seed;
    j["mode"] = mode_name;
    j["case"] = sum.case_label;
    j["case_bound"] = sum.case_bound ? json(*sum.case_bound) : json(nullptr);
    j["case1_tight_bound"] =
        sum.case1_tight_bound ? json(*sum.case1_tight_bound) : json(nullptr);
    j["kappa_ok"] = sum.kappa_ok;
    j["phi_max"] = sum.phi_max;
    j["phi_median"] = sum.phi_median;
    j["fraction_within"] = sum.fraction_within ? json(*sum.fraction_within) : json(nullptr);
    json rows = json::array();
    for (const auto& t : sum.per_trial) {
        json row;
        row["seed"] = t.seed;
        row["edge_count"] = t.edge_count;
        row["phi"] = t.phi;
        row["rate_lower"] = t.rate_lower;
        row["within_case_bound"] = t.within_case_bound;
        row["within_case1_tight"] = t.within_case1_tight;
        rows.push_back(row);
    }
    j["per_trial"] = rows;
    const std::string text = j.dump(2) + "\n";
    if (!out_path.empty()) write_text(out_path, text);
    std::cout << text;

    if (!tsv_path.empty()) {
        std::string tsv = "trial\tseed\tedge_count\tphi\trate_lower\twithin_case_bound\t"
                          "within_case1_tight\n";
        for (size_t i = 0; i < sum.per_trial.size(); ++i) {
            const auto& t = sum.per_trial[i];
            tsv += std::to_string(i) + "\t" + std::to_string(t.seed) + "\t" +
                   std::to_string(t.edge_count) + "\t" + std::to_string(t.phi) + "\t" +
                   format_double(t.rate_lower) + "\t" + (t.within_case_bound ? "1" : "0") +
                   "\t" + (t.within_case1_tight ? "1" : "0") + "\n";
        }
        write_text(tsv_path, tsv);
    }
    return 0;
}

int cmd_run(const GraphSource& src, const std::string& schema_path,
            const std::string& presence_name, double prob, const std::string& check,
            std::uint64_t seed, const std::string& out_path, const std::string& pairs_path) {
    const auto g = resolve_graph(src, seed);
    const auto s = load_schema(schema_path);

    PresenceSet presence;
    if (presence_name == "all") {
        presence = full_presence(g);
    } else if (presence_name == "random") {
        // Presence draws use seed + 1 so they stay decoupled from graph draws.
        presence = random_presence(g, prob, seed + 1);
    } else if (presence_name != "empty") {
        throw RangeError("unknown presence pattern " + presence_name);
    }

    PairRule rule;
    if (check == "hd1") {
        rule = hamming_distance_one_rule(g);
    } else if (check == "hd1_up") {
        rule = hamming_up_rule(g);
    } else if (check != "edges") {
        throw RangeError("unknown check mode " + check);
    }

    const auto trace = run(g, s, presence, rule);

    json j;
    j["present_x"] = presence.present_x.size();
    j["present_y"] = presence.present_y.size();
    j["p"] = s.reducers.size();
    j["check"] = check;
    j["assignments"] = trace.assignments;
    j["emitted"] = trace.emitted.size();
    put_rational(j, "realized_rate", trace.realized_rate);
    int max_load = 0;
    for (const auto& [lx, ly] : trace.per_reducer_load) max_load = std::max(max_load, lx + ly);
    j["max_load"] = max_load;
    const std::string text = j.dump(2) + "\n";
    if (!out_path.empty()) write_text(out_path, text);
    std::cout << text;

    if (!pairs_path.empty()) {
        std::string tsv;
        for (const auto& e : trace.emitted) {
            tsv += std::to_string(e.x) + "\t" + std::to_string(e.y) + "\n";
        }
        write_text(pairs_path, tsv);
    }
    return 0;
}

int error_exit_code(const Error& e) {
    if (dynamic_cast<const BudgetError*>(&e)) return kExitBudget;
    if (dynamic_cast<const PreconditionError*>(&e)) return kExitIncompatible;
    if (dynamic_cast<const NonProgressError*>(&e)) return kExitIncompatible;
    if (dynamic_cast<const SizeLimitError*>(&e)) return kExitUsage;
    if (dynamic_cast<const InfeasibleError*>(&e)) return kExitUsage;
    if (dynamic_cast<const ParseError*>(&e)) return kExitUsage;
    if (dynamic_cast<const RangeError*>(&e)) return kExitUsage;
    return 1;
}

int cmd_bench(const GraphSource& src, std::vector<int> qs, std::uint64_t seed,
              const std::string& out_path) {
    const auto g = resolve_graph(src, seed);
    if (qs.empty()) qs = {2, 4, 8, 16};
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());

    const std::vector<std::string> planners = {"a", "b", "c", "prefix"};
    std::string tsv = "planner\tq\tp\trate\trate_decimal\tcomplete\tle_sqrt_mq\tle_2sqrt_mq\t"
                      "error\n";
    int succeeded = 0;
    int first_error = 0;
    for (int q : qs) {
        for (const auto& planner : planners) {
            std::string row = planner + "\t" + std::to_string(q) + "\t";
            try {
                const auto s = plan_by_name(g, planner, q, "halve");
                const auto rep = replication_report(g, s);
                const double sqrt_mq = std::sqrt(static_cast<double>(g.m()) / q);
                const double rate = rep.rate.to_double();
                row += std::to_string(rep.p) + "\t" + rep.rate.str() + "\t" +
                       format_double(rate) + "\t" + (is_complete(s) ? "1" : "0") + "\t" +
                       (rate <= sqrt_mq + 1e-9 ? "1" : "0") + "\t" +
                       (rate <= 2 * sqrt_mq + 1e-9 ? "1" : "0") + "\t-\n";
                ++succeeded;
            } catch (const Error& e) {
                std::string msg = e.what();
                for (char& c : msg) {
                    if (c == '\t' || c == '\n') c = ' ';
                }
                row += "-\t-\t-\t-\t-\t-\t" + msg + "\n";
                if (first_error == 0) first_error = error_exit_code(e);
            }
            tsv += row;
        }
    }
    if (!out_path.empty()) write_text(out_path, tsv);
    std::cout << tsv;
    return succeeded > 0 ? 0 : first_error;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mapping-schema toolkit for some-pairs workloads"};
    app.require_subcommand(1);

    // One seed per invocation; graph draws use it directly, presence draws
    // use seed + 1, experiment trials use seed + trial.
    std::uint64_t seed = 0;

    auto* gen = app.add_subcommand("gen", "generate a connection graph as edge-list TSV");
    std::string gen_name;
    int gen_b = 3;
    int gen_n = 16;
    long long gen_m = 32;
    bool gen_distinct = false;
    std::string gen_out;
    gen->add_option("generator", gen_name, "hd1, hd1_up or random")
        ->required()
        ->check(CLI::IsMember({"hd1", "hd1_up", "random"}));
    gen->add_option("--b", gen_b, "bit width for hd1/hd1_up");
    gen->add_option("--n", gen_n, "per-side size for random");
    gen->add_option("--m", gen_m, "edge draws for random");
    gen->add_flag("--distinct", gen_distinct, "reject duplicate edges");
    gen->add_option("--seed", seed, "RNG seed (default 0)");
    gen->add_option("-o,--out", gen_out, "output TSV path")->required();

    auto* plan = app.add_subcommand("plan", "compute a mapping schema");
    std::string plan_name;
    int plan_q = 1;
    std::string plan_strategy = "halve";
    std::string plan_out;
    GraphSource plan_src;
    plan->add_option("planner", plan_name, "a, b, c or prefix")
        ->required()
        ->check(CLI::IsMember({"a", "b", "c", "prefix"}));
    plan->add_option("--q", plan_q, "per-side reducer capacity");
    plan->add_option("--strategy", plan_strategy, "split strategy for planner c")
        ->check(CLI::IsMember({"halve", "weight"}));
    add_graph_source(plan, plan_src);
    plan->add_option("--seed", seed, "RNG seed (default 0)");
    plan->add_option("-o,--out", plan_out, "schema JSON path");

    auto* validate_cmd = app.add_subcommand("validate", "check a schema against a graph");
    GraphSource val_src;
    std::string val_schema;
    bool val_strict = false;
    add_graph_source(validate_cmd, val_src);
    validate_cmd->add_option("--schema", val_schema, "schema JSON path")->required();
    validate_cmd->add_flag("--strict", val_strict, "exit 5 when validation fails");
    validate_cmd->add_option("--seed", seed, "RNG seed (default 0)");

    auto* analyze = app.add_subcommand("analyze", "closed-form bounds and schema metrics");
    GraphSource ana_src;
    int ana_q = 1;
    std::string ana_schema;
    std::string ana_out;
    long long ana_budget = kDefaultEnumerationBudget;
    int ana_jobs = 1;
    add_graph_source(analyze, ana_src);
    analyze->add_option("--q", ana_q, "per-side reducer capacity")->required();
    analyze->add_option("--schema", ana_schema, "schema JSON to measure");
    auto* ana_budget_opt = analyze->add_option("--budget", ana_budget,
                                               "subset enumeration budget");
    analyze->add_option("--jobs", ana_jobs, "worker threads for the expansion search");
    analyze->add_option("--seed", seed, "RNG seed (default 0)");
    analyze->add_option("-o,--out", ana_out, "report JSON path");

    auto* expansion = app.add_subcommand("expansion", "measured expansion experiment");
    int exp_n = 16;
    long long exp_m = 128;
    int exp_q = 2;
    int exp_trials = 20;
    std::string exp_mode = "with_replacement";
    long long exp_budget = kDefaultEnumerationBudget;
    int exp_jobs = 1;
    std::string exp_out;
    std::string exp_tsv;
    expansion->add_option("--n", exp_n, "per-side size")->required();
    expansion->add_option("--m", exp_m, "edge draws per trial")->required();
    expansion->add_option("--q", exp_q, "per-side reducer capacity")->required();
    expansion->add_option("--trials", exp_trials, "number of seeded trials");
    expansion->add_option("--mode", exp_mode, "with_replacement or distinct")
        ->check(CLI::IsMember({"with_replacement", "distinct"}));
    auto* exp_budget_opt = expansion->add_option("--budget", exp_budget,
                                                 "subset enumeration budget");
    expansion->add_option("--jobs", exp_jobs, "worker threads");
    expansion->add_option("--seed", seed, "RNG seed (default 0)");
    expansion->add_option("-o,--out", exp_out, "summary JSON path");
    expansion->add_option("--tsv", exp_tsv, "per-trial TSV path");

    auto* run_cmd = app.add_subcommand("run", "simulate one map-reduce execution");
    GraphSource run_src;
    std::string run_schema;
    std::string run_presence = "all";
    double run_prob = 0.5;
    std::string run_check = "edges";
    std::string run_out;
    std::string run_pairs;
    add_graph_source(run_cmd, run_src);
    run_cmd->add_option("--schema", run_schema, "schema JSON path")->required();
    run_cmd->add_option("--presence", run_presence, "all, empty or random")
        ->check(CLI::IsMember({"all", "empty", "random"}));
    run_cmd->add_option("--prob", run_prob, "presence probability for random");
    run_cmd->add_option("--check", run_check, "pair acceptance: edges, hd1 or hd1_up")
        ->check(CLI::IsMember({"edges", "hd1", "hd1_up"}));
    run_cmd->add_option("--seed", seed, "RNG seed (default 0)");
    run_cmd->add_option("-o,--out", run_out, "trace JSON path");
    run_cmd->add_option("--pairs", run_pairs, "emitted pairs TSV path");

    auto* bench = app.add_subcommand("bench", "planner comparison table");
    GraphSource bench_src;
    std::vector<int> bench_qs;
    std::string bench_out;
    add_graph_source(bench, bench_src);
    bench->add_option("--q-list", bench_qs, "capacities to sweep (default 2 4 8 16)");
    bench->add_option("--seed", seed, "RNG seed (default 0)");
    bench->add_option("-o,--out", bench_out, "table TSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen(gen_name, gen_b, gen_n, gen_m, gen_distinct, seed, gen_out);
        }
        if (plan->parsed()) {
            return cmd_plan(plan_src, plan_name, plan_q, plan_strategy, seed, plan_out);
        }
        if (validate_cmd->parsed()) {
            return cmd_validate(val_src, val_schema, val_strict, seed);
        }
        if (analyze->parsed()) {
            return cmd_analyze(ana_src, ana_q, ana_schema,
                               resolve_budget(ana_budget, ana_budget_opt->count() > 0),
                               ana_jobs, seed, ana_out);
        }
        if (expansion->parsed()) {
            return cmd_expansion(exp_n, exp_m, exp_q, exp_trials, seed, exp_mode,
                                 resolve_budget(exp_budget, exp_budget_opt->count() > 0),
                                 exp_jobs, exp_out, exp_tsv);
        }
        if (run_cmd->parsed()) {
            return cmd_run(run_src, run_schema, run_presence, run_prob, run_check, seed,
                           run_out, run_pairs);
        }
        if (bench->parsed()) {
            return cmd_bench(bench_src, bench_qs, seed, bench_out);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return error_exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
