#include "basicwalk/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "basicwalk/error.hpp"
#include "basicwalk/experiments.hpp"
#include "basicwalk/io.hpp"
#include "basicwalk/traps.hpp"
#include "basicwalk/walker.hpp"

namespace basicwalk::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything any subcommand can be configured with; unused fields stay at defaults.
struct RunConfig {
    // walk / experiment
    std::string graph;
    std::string labeling = "lazy";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> budget;
    std::string start;
    std::uint64_t port = 1;
    std::string trace;
    std::string summary;
    std::string out;
    std::optional<std::uint64_t> workers;
    // experiment
    std::string preset;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> n;
    std::optional<int> dim;
    std::uint64_t k = 3;
    std::vector<std::uint64_t> n_values{32, 64, 128, 256, 512, 1024};
    unsigned depth = 20;
    std::string mode;
    std::string event = "trap-t";
    std::uint64_t length = 3;
    std::string start_policy = "origin";
    std::string port_policy = "fixed";
    // bound
    std::string trap;
    std::uint64_t degree = 4;
    std::uint64_t deg_v = 0;
    std::vector<std::uint64_t> neighbor_degrees;
    // graph check
    std::string file;
    std::string export_path;
};

unsigned resolve_workers(const RunConfig& c) {
    if (c.workers) return static_cast<unsigned>(*c.workers);
    if (const char* env = std::getenv("BASICWALK_WORKERS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && *env != '\0') return static_cast<unsigned>(v);
        throw UsageError("BASICWALK_WORKERS must be a non-negative integer");
    }
    return 0;
}

std::uint64_t require_seed(const RunConfig& c, const std::string& what) {
    if (!c.seed) throw UsageError(what + " is randomized: --seed is required");
    return *c.seed;
}

std::string derived_summary_path(const RunConfig& c) {
    if (!c.summary.empty()) return c.summary;
    if (c.out.empty()) return {};
    const std::string& o = c.out;
    if (o.size() > 4 && o.compare(o.size() - 4, 4, ".csv") == 0) return o.substr(0, o.size() - 4) + ".json";
    return o + ".json";
}

template <class T>
json opt_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

void emit_csv(const RunConfig& c, const std::function<void(std::ostream&)>& writer) {
    if (c.out.empty()) return;
    std::ostringstream ss;
    writer(ss);
    write_file(c.out, ss.str());
}

void emit_summary(const RunConfig& c, const json& j) {
    const auto path = derived_summary_path(c);
    if (!path.empty()) write_file(path, j.dump(2) + "\n");
}

std::string fmt(double x, int prec = 6) {
    std::ostringstream ss;
    ss.precision(prec);
    ss << x;
    return ss.str();
}

// ---- walk ----

int run_walk(const RunConfig& c, std::ostream& out) {
    GraphFamily g = GraphFamily::lattice(2);
    LabelingMode mode;
    VertexRef start;
    std::uint64_t seed = 0;
    const std::uint64_t budget = c.budget.value_or(1000000);
    try {
        g = parse_graph_spec(c.graph);
        mode = parse_labeling_spec(c.labeling, g);
        start = c.start.empty() ? origin(g) : parse_vertex(g, c.start);
        if (is_randomized(mode)) seed = require_seed(c, "walk with labeling '" + c.labeling + "'");
        else seed = c.seed.value_or(0);
        if (budget == 0) throw UsageError("--budget must be >= 1");
        if (c.port < 1 || c.port > degree(g, start)) throw UsageError("--port out of range at the start vertex");
    } catch (const Error& e) {
        throw UsageError(e.what());
    }

    std::vector<TraceRow> trace;
    WalkOptions opts;
    opts.record_trace = !c.trace.empty();
    const WalkOutcome o = run_basic_walk(g, mode, start, c.port, budget, seed, opts, &trace);
    if (!c.trace.empty()) {
        std::ostringstream ss;
        write_trace_csv(ss, g, trace);
        write_file(c.trace, ss.str());
    }

    json config{{"graph", g.name()},
                {"labeling", c.labeling},
                {"seed", is_randomized(mode) ? json(seed) : json(nullptr)},
                {"budget", budget},
                {"start", format_vertex(g, start)},
                {"port", c.port},
                {"trace", c.trace.empty() ? json(nullptr) : json(c.trace)}};
    json summary{{"command", "walk"}, {"config", config}, {"result", to_json(o, g)}};
    emit_summary(c, summary);

    out << "walk " << g.name() << " labeling=" << c.labeling;
    if (is_randomized(mode)) out << " seed=" << seed;
    if (o.cycled()) out << ": cycled tail=" << o.tail() << " period=" << o.period();
    else out << ": budget exhausted";
    out << " steps=" << o.steps_taken << " unique_vertices=" << o.unique_vertices
        << " max_distance=" << o.max_distance << " monotone_escape=" << (o.monotone_escape ? "true" : "false") << "\n";
    return kOk;
}

// ---- experiment ----

json spec_echo(const ExperimentSpec& s, const RunConfig& c, unsigned workers) {
    return json{{"graph", s.graph.name()},
                {"labeling", c.labeling},
                {"start_policy", c.start_policy},
                {"port_policy", c.port_policy},
                {"trials", s.trials},
                {"budget", s.budget},
                {"seed", s.seed},
                {"workers", workers}};
}

int run_walk_preset(const RunConfig& c, std::ostream& out, const std::string& default_graph) {
    ExperimentSpec spec;
    const unsigned workers = resolve_workers(c);
    try {
        std::string gspec = c.graph.empty() ? default_graph : c.graph;
        if (c.preset == "zd-cycling" && c.graph.empty()) gspec = "z" + std::to_string(c.dim.value_or(3));
        spec.graph = parse_graph_spec(gspec);
        spec.mode = parse_labeling_spec(c.labeling, spec.graph);
        spec.trials = c.trials.value_or(10000);
        spec.budget = c.budget.value_or(10000000);
        spec.seed = is_randomized(spec.mode) ? require_seed(c, "preset " + c.preset) : c.seed.value_or(0);
        spec.workers = workers;
        if (c.start_policy == "uniform") spec.start = StartPolicy::uniform;
        else if (c.start_policy != "origin") throw UsageError("--start-policy is origin or uniform");
        if (c.port_policy == "uniform") spec.port = PortPolicy::uniform;
        else if (c.port_policy != "fixed") throw UsageError("--port-policy is fixed or uniform");
        validate_spec(spec);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    const ExperimentResult r = mc_cycle_stats(spec);
    emit_csv(c, [&](std::ostream& os) { write_rows_csv(os, r.rows); });

    json summary{{"command", "experiment"}, {"preset", c.preset}, {"config", spec_echo(spec, c, workers)},
                 {"result", to_json(r)}};
    if (spec.graph.kind() == FamilyKind::lattice && spec.graph.dimension() == 2) {
        const auto b = shell_bounds(analytic_trap_probability(TLattice{2}));
        summary["reference"] = {{"spiral_bound", b.spiral_bound.str()},
                                {"spiral_bound_float", b.spiral_bound.to_double()}};
    }
    emit_summary(c, summary);
    const auto& uv = r.metrics.at("unique_vertices");
    out << "experiment " << c.preset << " " << spec.graph.name() << ": trials=" << spec.trials
        << " fraction_cycled=" << fmt(r.fraction_cycled) << " mean_unique_vertices=" << fmt(uv.mean)
        << " se=" << fmt(uv.std_error) << " mean_period=" << fmt(r.metrics.at("period").mean) << "\n";
    return kOk;
}

int run_kn_coverage(const RunConfig& c, std::ostream& out) {
    const std::uint64_t n = c.n.value_or(1000), trials = c.trials.value_or(10000);
    const std::uint64_t seed = require_seed(c, "preset kn-coverage");
    if (n < 2) throw UsageError("--n must be >= 2");
    const unsigned workers = resolve_workers(c);
    const KnCoverage k = kn_coverage(n, trials, seed, workers);
    emit_csv(c, [&](std::ostream& os) { write_rows_csv(os, k.result.rows); });
    const auto& uv = k.result.metrics.at("unique_vertices");
    const Rational occ = occupancy_exact(n);
    json summary{{"command", "experiment"},
                 {"preset", "kn-coverage"},
                 {"config", {{"graph", "complete:" + std::to_string(n)}, {"n", n}, {"trials", trials},
                             {"budget", n - 1}, {"seed", seed}, {"workers", workers}}},
                 {"result", to_json(k.result)},
                 {"reference",
                  {{"lower_bound", k.lower_bound},
                   {"one_minus_inv_e", 1.0 - std::exp(-1.0)},
                   {"occupancy_exact_float", occ.to_double()},
                   {"mean_over_n", uv.mean / static_cast<double>(n)},
                   {"sigma_above_bound", uv.std_error > 0 ? (uv.mean - k.lower_bound) / uv.std_error : 0.0}}}};
    if (n <= 2000) summary["reference"]["occupancy_exact"] = occ.str();
    emit_summary(c, summary);
    out << "experiment kn-coverage n=" << n << ": mean_unique_vertices=" << fmt(uv.mean) << " se=" << fmt(uv.std_error)
        << " bound=(1-1/e)n=" << fmt(k.lower_bound) << " occupancy_exact=" << fmt(occ.to_double()) << "\n";
    return kOk;
}

int run_kn_arcs(const RunConfig& c, std::ostream& out) {
    const std::uint64_t n = c.n.value_or(1000), trials = c.trials.value_or(10000);
    const std::uint64_t seed = require_seed(c, "preset kn-arcs");
    if (n < 2) throw UsageError("--n must be >= 2");
    const unsigned workers = resolve_workers(c);
    const KnArcs k = kn_arcs_to_cycle(n, trials, seed, workers);
    emit_csv(c, [&](std::ostream& os) { write_rows_csv(os, k.result.rows); });
    const auto& st = k.result.metrics.at("steps");
    const double nn = static_cast<double>(n);
    json summary{{"command", "experiment"},
                 {"preset", "kn-arcs"},
                 {"config", {{"graph", "complete:" + std::to_string(n)}, {"n", n}, {"trials", trials},
                             {"budget", 2 * n * (n - 1) + 1}, {"seed", seed}, {"workers", workers}}},
                 {"result", to_json(k.result)},
                 {"reference",
                  {{"z_exact_dp", k.z_exact},
                   {"z_exact_dp_over_n", k.z_exact / nn},
                   {"conjecture_ratio", 1.8},
                   {"conjecture_value", 1.8 * nn},
                   {"mean_over_n", st.mean / nn},
                   {"sigma_from_z", st.std_error > 0 ? (st.mean - k.z_exact) / st.std_error : 0.0},
                   {"relative_discrepancy", (st.mean - k.z_exact) / k.z_exact}}}};
    emit_summary(c, summary);
    out << "experiment kn-arcs n=" << n << ": mean_steps=" << fmt(st.mean) << " se=" << fmt(st.std_error)
        << " mean/n=" << fmt(st.mean / nn) << " z_exact_dp=" << fmt(k.z_exact, 10) << "\n";
    return kOk;
}

int run_tree_escape(const RunConfig& c, std::ostream& out) {
    const std::uint64_t trials = c.trials.value_or(100000);
    const std::uint64_t seed = require_seed(c, "preset tree-escape");
    const std::uint64_t budget = c.budget.value_or(c.depth);
    TreeEscape t;
    try {
        t = tree_escape(c.depth, trials, budget, seed, resolve_workers(c));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::invalid_argument) throw UsageError(e.what());
        throw;
    }
    json factors = json::array();
    for (unsigned m = 2; m <= c.depth; ++m) factors.push_back(tree_escape_factor(m).str());
    json summary{{"command", "experiment"},
                 {"preset", "tree-escape"},
                 {"config", {{"graph", "tree"}, {"depth", c.depth}, {"trials", trials}, {"budget", budget},
                             {"seed", seed}, {"workers", resolve_workers(c)}}},
                 {"result", {{"escapes", t.escapes}, {"frequency", to_json(t.frequency)}}},
                 {"reference",
                  {{"exact_product", t.exact_product.str()},
                   {"exact_product_float", t.exact_product.to_double()},
                   {"factors", factors},
                   {"limit_estimate", t.limit_estimate},
                   {"e_minus_2", std::exp(-2.0)},
                   {"exceeds_e_minus_2", t.exceeds_e_minus_2}}}};
    emit_summary(c, summary);
    out << "experiment tree-escape M=" << c.depth << ": frequency=" << fmt(t.frequency.mean)
        << " se=" << fmt(t.frequency.std_error) << " exact=" << fmt(t.exact_product.to_double(), 10)
        << " limit~" << fmt(t.limit_estimate) << " e^-2=" << fmt(std::exp(-2.0)) << "\n";
    return kOk;
}

int run_occupancy(const RunConfig& c, std::ostream& out) {
    const std::uint64_t n = c.n.value_or(1000);
    if (n < 2) throw UsageError("--n must be >= 2");
    const std::string mode = c.mode.empty() ? "exact" : c.mode;
    const Rational exact = occupancy_exact(n);
    json summary{{"command", "experiment"}, {"preset", "occupancy"}};
    json config{{"n", n}, {"mode", mode}};
    json reference{{"exact_float", exact.to_double()},
                   {"exact_over_n", exact.to_double() / static_cast<double>(n)},
                   {"one_minus_inv_e", 1.0 - std::exp(-1.0)}};
    if (n <= 2000) reference["exact"] = exact.str();
    out << "experiment occupancy n=" << n << " mode=" << mode << ": exact=" << fmt(exact.to_double(), 10);
    if (mode == "mc") {
        const std::uint64_t trials = c.trials.value_or(10000), seed = require_seed(c, "occupancy mc");
        const auto values = occupancy_mc(n, trials, seed, resolve_workers(c));
        const Summary s = summarize(values);
        config["trials"] = trials;
        config["seed"] = seed;
        summary["result"] = to_json(s);
        emit_csv(c, [&](std::ostream& os) { write_values_csv(os, values); });
        out << " mc_mean=" << fmt(s.mean) << " se=" << fmt(s.std_error);
    } else if (mode != "exact") {
        throw UsageError("occupancy --mode is exact or mc");
    }
    summary["config"] = config;
    summary["reference"] = reference;
    emit_summary(c, summary);
    out << "\n";
    return kOk;
}

int run_zprocess(const RunConfig& c, std::ostream& out) {
    const std::uint64_t n = c.n.value_or(1000);
    if (n < 1) throw UsageError("--n must be >= 1");
    const std::string mode = c.mode.empty() ? "dp" : c.mode;
    const long double dp = z_process_exact(n);
    json config{{"n", n}, {"mode", mode}};
    json reference{{"exact_dp", static_cast<double>(dp)},
                   {"exact_dp_over_n", static_cast<double>(dp / static_cast<long double>(n))},
                   {"conjecture_ratio", 1.8}};
    json summary{{"command", "experiment"}, {"preset", "zprocess"}};
    out << "experiment zprocess n=" << n << " mode=" << mode << ": exact_dp=" << fmt(static_cast<double>(dp), 12);
    if (mode == "dp") {
        if (n <= 64) reference["exact_rational"] = z_process_exact_rational(n).str();
    } else if (mode == "brute-force") {
        if (n > 3) throw UsageError("brute-force z process needs n <= 3");
        const Rational b = z_process_brute_force(n);
        summary["result"] = {{"brute_force", b.str()}, {"brute_force_float", b.to_double()}};
        out << " brute_force=" << b.str();
    } else if (mode == "mc") {
        const std::uint64_t trials = c.trials.value_or(10000), seed = require_seed(c, "zprocess mc");
        const auto values = z_process_mc(n, trials, seed, resolve_workers(c));
        const Summary s = summarize(values);
        config["trials"] = trials;
        config["seed"] = seed;
        summary["result"] = to_json(s);
        emit_csv(c, [&](std::ostream& os) { write_values_csv(os, values); });
        out << " mc_mean=" << fmt(s.mean) << " se=" << fmt(s.std_error);
    } else {
        throw UsageError("zprocess --mode is dp, brute-force or mc");
    }
    summary["config"] = config;
    summary["reference"] = reference;
    emit_summary(c, summary);
    out << "\n";
    return kOk;
}

int run_trap_frequency(const RunConfig& c, std::ostream& out) {
    const std::uint64_t samples = c.trials.value_or(1000000);
    const std::uint64_t seed = require_seed(c, "preset trap-frequency");
    EventKind ev;
    json config{{"event", c.event}, {"samples", samples}, {"seed", seed}};
    try {
        if (c.event == "trap-t") {
            const int d = c.dim.value_or(2);
            if (d < 2) throw UsageError("--dim must be >= 2 for trap-t");
            ev = TrapTEvent{d};
            config["dim"] = d;
        } else if (c.event == "straight-path") {
            const GraphFamily g = parse_graph_spec(c.graph.empty() ? "z2" : c.graph);
            ev = StraightPathEvent{g, c.length};
            config["graph"] = g.name();
            config["length"] = c.length;
        } else {
            throw UsageError("--event is trap-t or straight-path");
        }
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    const EventFrequency f = mc_event_frequency(ev, samples, seed, resolve_workers(c));
    const double a = f.analytic.to_double();
    json summary{{"command", "experiment"},
                 {"preset", "trap-frequency"},
                 {"config", config},
                 {"result", {{"hits", f.hits}, {"frequency", to_json(f.frequency)}}},
                 {"reference",
                  {{"analytic", f.analytic.str()},
                   {"analytic_float", a},
                   {"sigma_distance", f.frequency.std_error > 0 ? (f.frequency.mean - a) / f.frequency.std_error : 0.0}}}};
    emit_summary(c, summary);
    out << "experiment trap-frequency " << c.event << ": hits=" << f.hits << "/" << samples
        << " frequency=" << fmt(f.frequency.mean) << " se=" << fmt(f.frequency.std_error) << " analytic=" << f.analytic.str()
        << "\n";
    return kOk;
}

int run_grid_tours(const RunConfig& c, std::ostream& out) {
    const std::uint64_t trials = c.trials.value_or(100);
    const std::uint64_t seed = require_seed(c, "preset grid-tours");
    GridTours t;
    try {
        t = grid_longest_tour(c.k, c.n_values, trials, seed, resolve_workers(c));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::invalid_argument) throw UsageError(e.what());
        throw;
    }
    emit_csv(c, [&](std::ostream& os) { write_grid_tours_csv(os, t); });
    json rows = json::array();
    for (const auto& r : t.rows)
        rows.push_back({{"k", r.k},
                        {"n", r.n},
                        {"vertices", r.vertices},
                        {"trials", r.trials},
                        {"mean_unique", r.mean_unique},
                        {"max_unique", r.max_unique},
                        {"mean_longest_tour", r.mean_longest_tour},
                        {"max_longest_tour", r.max_longest_tour},
                        {"mean_longest_tour_states", r.mean_longest_tour_states},
                        {"reference_cycle_law", 1.2701 * std::pow(static_cast<double>(r.vertices), 1.8891)}});
    json summary{{"command", "experiment"},
                 {"preset", "grid-tours"},
                 {"config", {{"k", c.k}, {"n_values", c.n_values}, {"trials", trials}, {"seed", seed},
                             {"workers", resolve_workers(c)}}},
                 {"result",
                  {{"rows", rows},
                   {"slope_max_unique_vs_ln_n", t.slope_max_unique},
                   {"slope_mean_longest_tour_vs_ln_n", t.slope_mean_longest_tour}}},
                 {"reference", {{"cycle_law", "1.2701 * |V|^1.8891"}, {"trend", "Theta(log n) for fixed k"}}}};
    emit_summary(c, summary);
    out << "experiment grid-tours k=" << c.k << ": rows=" << t.rows.size()
        << " slope_mean_longest_tour=" << fmt(t.slope_mean_longest_tour)
        << " slope_max_unique=" << fmt(t.slope_max_unique) << "\n";
    return kOk;
}

int run_experiment(const RunConfig& c, std::ostream& out) {
    const auto& p = c.preset;
    if (p == "z2-cycling") return run_walk_preset(c, out, "z2");
    if (p == "zd-cycling") return run_walk_preset(c, out, "z3");
    if (p == "hex-cycling") return run_walk_preset(c, out, "hex");
    if (p == "kn-coverage") return run_kn_coverage(c, out);
    if (p == "kn-arcs") return run_kn_arcs(c, out);
    if (p == "tree-escape") return run_tree_escape(c, out);
    if (p == "occupancy") return run_occupancy(c, out);
    if (p == "zprocess") return run_zprocess(c, out);
    if (p == "trap-frequency") return run_trap_frequency(c, out);
    if (p == "grid-tours") return run_grid_tours(c, out);
    throw UsageError("unknown preset '" + p + "'");
}

// ---- bound ----

int run_bound(const RunConfig& c, std::ostream& out) {
    TrapKind kind;
    if (c.trap == "t-lattice") kind = TLattice{c.dim.value_or(2)};
    else if (c.trap == "spire-hex") kind = SpireHex{};
    else if (c.trap == "star-cv") kind = StarCv{c.deg_v, {c.neighbor_degrees.begin(), c.neighbor_degrees.end()}};
    else if (c.trap == "straight-path") kind = StraightPath{c.degree, c.length};
    else throw UsageError("unknown trap '" + c.trap + "'");
    json j;
    try {
        j = bound_json(kind);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (!c.out.empty()) write_file(c.out, j.dump(2) + "\n");
    out << j.dump() << "\n";
    return kOk;
}

// ---- graph check ----

int run_graph_check(const RunConfig& c, std::ostream& out) {
    if (c.file.empty() == c.graph.empty()) throw UsageError("graph check takes exactly one of --file or --graph");
    GraphFamily g = GraphFamily::lattice(2);
    if (!c.file.empty()) {
        g = load_explicit(read_file(c.file));  // validation failures are the check's result: runtime error
    } else {
        try {
            g = parse_graph_spec(c.graph);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }
    if (!g.is_finite()) {
        out << "ok " << g.name() << ": infinite family\n";
        return kOk;
    }
    Degree lo = ~Degree{0}, hi = 0;
    for (std::uint64_t u = 0; u < g.vertex_count(); ++u) {
        const Degree d = degree(g, VertexRef::index(u));
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    if (!c.export_path.empty()) write_file(c.export_path, format_explicit(g));
    out << "ok " << g.name() << ": vertices=" << g.vertex_count() << " arcs=" << g.arc_count() << " min_degree=" << lo
        << " max_degree=" << hi << "\n";
    return kOk;
}

void add_common(CLI::App* sub, RunConfig& c) {
    sub->add_option("--seed", c.seed, "master seed (required for randomized runs)");
    sub->add_option("--workers", c.workers, "worker threads (default $BASICWALK_WORKERS, else all cores)");
    sub->add_option("--out", c.out, "output file (CSV for experiments, JSON for bound)");
    sub->add_option("--summary", c.summary, "summary JSON path (experiments default to <out>.json)");
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a path");
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (config_path.empty()) return rest;

    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(read_file(config_path));
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config " + config_path + ": " + e.what());
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (!cfg.is_object()) throw UsageError("config " + config_path + " must be a JSON object");

    std::size_t at = rest.empty() ? 0 : 1;
    if (rest.size() >= 2 && rest[0] == "graph" && rest[1] == "check") at = 2;
    auto given = [&](const std::string& flag) {
        return std::any_of(rest.begin() + static_cast<std::ptrdiff_t>(at), rest.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
    };
    auto scalar = [&](const nlohmann::json& v, const std::string& key) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_unsigned() || v.is_number_integer()) return v.dump();
        if (v.is_number()) return v.dump();
        throw UsageError("config key '" + key + "' has an unsupported value");
    };
    std::vector<std::string> spliced;
    for (const auto& [key, value] : cfg.items()) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (given(flag) || value.is_null()) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) spliced.push_back(flag);
        } else if (value.is_array()) {
            spliced.push_back(flag);
            for (const auto& v : value) spliced.push_back(scalar(v, key));
        } else {
            spliced.push_back(flag);
            spliced.push_back(scalar(value, key));
        }
    }
    rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(at), spliced.begin(), spliced.end());
    return rest;
}

int dispatch(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"basicwalk: random basic walk simulation lab", "basicwalk"};
    app.require_subcommand(1);

    auto* walk = app.add_subcommand("walk", "run one basic walk");
    walk->add_option("--graph", c.graph, "graph family: z<d>, hex, tree, complete:N, grid:KxN, star:M, file:PATH")
        ->required();
    walk->add_option("--labeling", c.labeling, "lazy, full, alternating, staircase, spiral[:x,y[,port]], fixture:PATH");
    walk->add_option("--budget", c.budget, "step budget (default 1000000)");
    walk->add_option("--start", c.start, "start vertex, e.g. '3;-2', 'r/0/1', '7' (default origin)");
    walk->add_option("--port", c.port, "initial port (default 1)");
    walk->add_option("--trace", c.trace, "write a per-step trace CSV");
    add_common(walk, c);

    auto* exp = app.add_subcommand("experiment", "run a seeded experiment batch");
    exp->add_option("--preset", c.preset,
                    "z2-cycling, zd-cycling, hex-cycling, kn-coverage, kn-arcs, tree-escape, occupancy, zprocess, "
                    "trap-frequency, grid-tours")
        ->required();
    exp->add_option("--graph", c.graph, "graph override for walk presets / straight-path event");
    exp->add_option("--labeling", c.labeling, "labeling for walk presets (default lazy)");
    exp->add_option("--trials,--samples", c.trials, "trials (samples for trap-frequency)");
    exp->add_option("--budget", c.budget, "step budget for walk presets");
    exp->add_option("--n", c.n, "n for kn-*, occupancy, zprocess");
    exp->add_option("--dim", c.dim, "lattice dimension (zd-cycling, trap-frequency)");
    exp->add_option("--k", c.k, "grid rows for grid-tours (default 3)");
    exp->add_option("--n-values", c.n_values, "grid columns for grid-tours")->expected(1, 64);
    exp->add_option("--depth", c.depth, "depth cap M for tree-escape (default 20)");
    exp->add_option("--mode", c.mode, "occupancy: exact|mc; zprocess: dp|brute-force|mc");
    exp->add_option("--event", c.event, "trap-frequency event: trap-t|straight-path");
    exp->add_option("--length", c.length, "straight-path length n (default 3)");
    exp->add_option("--start-policy", c.start_policy, "origin|uniform");
    exp->add_option("--port-policy", c.port_policy, "fixed|uniform");
    add_common(exp, c);

    auto* bound = app.add_subcommand("bound", "exact trap probability and shell bounds");
    bound->add_option("--trap", c.trap, "t-lattice, spire-hex, star-cv, straight-path")->required();
    bound->add_option("--dim", c.dim, "t-lattice dimension (default 2)");
    bound->add_option("--deg-v", c.deg_v, "star-cv: degree of v");
    bound->add_option("--neighbor-degrees", c.neighbor_degrees, "star-cv: degrees of the counted neighbours")
        ->expected(0, 1 << 20);
    bound->add_option("--degree", c.degree, "straight-path: degree d (default 4)");
    bound->add_option("--length", c.length, "straight-path: length n (default 3)");
    bound->add_option("--out", c.out, "also write the JSON here");

    auto* graph = app.add_subcommand("graph", "graph utilities");
    graph->require_subcommand(1);
    auto* check = graph->add_subcommand("check", "validate an adjacency file or family");
    check->add_option("--file", c.file, "adjacency file");
    check->add_option("--graph", c.graph, "family spec instead of a file");
    check->add_option("--export", c.export_path, "write the adjacency file of a finite family");

    for (auto* sub : {walk, exp, bound, check})
        for (auto* opt : sub->get_options()) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    for (auto* sub : {exp, bound})
        for (const char* name : {"--n-values", "--neighbor-degrees"})
            if (auto* o = sub->get_option_no_throw(name)) o->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

    std::vector<std::string> args;
    try {
        args = expand_config(raw_args);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (walk->parsed()) return run_walk(c, out);
        if (exp->parsed()) return run_experiment(c, out);
        if (bound->parsed()) return run_bound(c, out);
        if (check->parsed()) return run_graph_check(c, out);
        err << "error: no subcommand\n";
        return kUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntime;
    }
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args, out, err);
}

}  // namespace basicwalk::cli
