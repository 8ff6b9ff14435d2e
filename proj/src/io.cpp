#include "basicwalk/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "basicwalk/error.hpp"

namespace basicwalk {

namespace {

std::uint64_t parse_u64(std::string_view s, const std::string& what) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw Error(ErrorCode::invalid_argument, "bad " + what + " '" + std::string(s) + "'");
    return v;
}

std::int64_t parse_i64(std::string_view s, const std::string& what) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw Error(ErrorCode::invalid_argument, "bad " + what + " '" + std::string(s) + "'");
    return v;
}

}  // namespace

GraphFamily parse_graph_spec(std::string_view spec) {
    if (spec == "hex") return GraphFamily::hex();
    if (spec == "tree") return GraphFamily::growing_tree();
    if (spec.size() >= 2 && spec[0] == 'z' && spec.find(':') == std::string_view::npos)
        return GraphFamily::lattice(static_cast<int>(parse_u64(spec.substr(1), "lattice dimension")));
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos)
        throw Error(ErrorCode::invalid_argument, "unknown graph '" + std::string(spec) + "'");
    const auto head = spec.substr(0, colon), arg = spec.substr(colon + 1);
    if (head == "complete") return GraphFamily::complete(parse_u64(arg, "complete size"));
    if (head == "star") return GraphFamily::star(parse_u64(arg, "star leaves"));
    if (head == "grid") {
        const auto x = arg.find('x');
        if (x == std::string_view::npos) throw Error(ErrorCode::invalid_argument, "grid spec is grid:KxN");
        return GraphFamily::grid(parse_u64(arg.substr(0, x), "grid rows"), parse_u64(arg.substr(x + 1), "grid cols"));
    }
    if (head == "file") return load_explicit(read_file(std::string(arg)));
    throw Error(ErrorCode::invalid_argument, "unknown graph '" + std::string(spec) + "'");
}

LabelingMode parse_labeling_spec(std::string_view spec, const GraphFamily& g) {
    LabelingMode mode;
    if (spec == "lazy") {
        mode = LazyUniform{};
    } else if (spec == "full") {
        if (!g.is_finite()) throw Error(ErrorCode::infinite_family, "full labeling needs a finite graph");
        mode = FullUniform{};
    } else if (spec == "alternating") {
        mode = Deterministic{AlternatingZ1{}};
    } else if (spec == "staircase") {
        mode = Deterministic{StaircaseZ2{}};
    } else if (spec.substr(0, 6) == "spiral") {
        SpiralZ2 s;
        if (spec.size() > 6) {
            if (spec[6] != ':') throw Error(ErrorCode::invalid_argument, "spiral spec is spiral[:x,y[,port]]");
            std::vector<std::string_view> parts;
            auto rest = spec.substr(7);
            while (true) {
                auto c = rest.find(',');
                parts.push_back(rest.substr(0, c));
                if (c == std::string_view::npos) break;
                rest = rest.substr(c + 1);
            }
            if (parts.size() < 2 || parts.size() > 3)
                throw Error(ErrorCode::invalid_argument, "spiral spec is spiral[:x,y[,port]]");
            s.cx = parse_i64(parts[0], "spiral center");
            s.cy = parse_i64(parts[1], "spiral center");
            if (parts.size() == 3) s.init_port = parse_u64(parts[2], "spiral port");
        }
        mode = Deterministic{s};
    } else if (spec.substr(0, 8) == "fixture:") {
        mode = Deterministic{parse_fixture(g, read_file(std::string(spec.substr(8))))};
    } else {
        throw Error(ErrorCode::invalid_argument, "unknown labeling '" + std::string(spec) + "'");
    }
    if (auto* d = std::get_if<Deterministic>(&mode)) check_scheme_compatible(d->scheme, g);
    return mode;
}

bool is_randomized(const LabelingMode& mode) { return !std::holds_alternative<Deterministic>(mode); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
    out << contents;
    if (!out) throw Error(ErrorCode::io_error, "write failed for " + path);
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

nlohmann::ordered_json to_json(const Summary& s) {
    return {{"count", s.count},       {"mean", s.mean},       {"variance", s.variance},
            {"std_error", s.std_error}, {"ci99_low", s.ci_low}, {"ci99_high", s.ci_high}};
}

nlohmann::ordered_json to_json(const ExperimentResult& r) {
    nlohmann::ordered_json j;
    j["trials"] = r.rows.size();
    j["fraction_cycled"] = r.fraction_cycled;
    for (const auto& [name, s] : r.metrics) j["metrics"][name] = to_json(s);
    return j;
}

nlohmann::ordered_json to_json(const WalkOutcome& o, const GraphFamily& g) {
    nlohmann::ordered_json j;
    j["outcome"] = o.cycled() ? "cycled" : "budget_exhausted";
    j["steps"] = o.steps_taken;
    if (o.cycled()) {
        j["tail"] = o.tail();
        j["period"] = o.period();
    } else {
        j["tail"] = nullptr;
        j["period"] = nullptr;
    }
    j["unique_vertices"] = o.unique_vertices;
    j["unique_states"] = o.unique_states;
    j["max_distance"] = o.max_distance;
    j["monotone_escape"] = o.monotone_escape;
    j["fresh_labels"] = o.fresh_labels;
    j["final_vertex"] = format_vertex(g, o.final_state.position);
    j["final_port"] = o.final_state.next_port;
    return j;
}

nlohmann::ordered_json bound_json(const TrapKind& kind) {
    const Rational p = analytic_trap_probability(kind);
    const ShellBounds b = shell_bounds(p);
    nlohmann::ordered_json j;
    j["kind"] = trap_name(kind);
    j["probability"] = p.str();
    j["expected_shells"] = b.expected_shells.str();
    j["straight_line_bound"] = b.straight_line_bound.str();
    j["spiral_bound"] = b.spiral_bound.str();
    j["probability_float"] = p.to_double();
    return j;
}

void write_rows_csv(std::ostream& out, const std::vector<TrialRow>& rows) {
    out << "trial,outcome,steps,tail,period,unique_vertices,unique_states,max_distance,monotone_escape\n";
    for (const auto& r : rows) {
        out << r.trial << ',' << (r.cycled ? "cycled" : "budget_exhausted") << ',' << r.steps << ',';
        if (r.cycled) out << r.tail << ',' << r.period;
        else out << ',';
        out << ',' << r.unique_vertices << ',' << r.unique_states << ',' << r.max_distance << ','
            << (r.monotone_escape ? "true" : "false") << '\n';
    }
}

void write_values_csv(std::ostream& out, const std::vector<double>& values) {
    out << "trial,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << format_double(values[i]) << '\n';
}

void write_grid_tours_csv(std::ostream& out, const GridTours& t) {
    out << "k,n,vertices,trials,mean_unique,max_unique,mean_longest_tour,max_longest_tour,mean_longest_tour_states\n";
    for (const auto& r : t.rows)
        out << r.k << ',' << r.n << ',' << r.vertices << ',' << r.trials << ',' << format_double(r.mean_unique) << ','
            << r.max_unique << ',' << format_double(r.mean_longest_tour) << ',' << r.max_longest_tour << ','
            << format_double(r.mean_longest_tour_states) << '\n';
}

}  // namespace basicwalk
