#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "basicwalk/cli.hpp"
#include "basicwalk/error.hpp"
#include "basicwalk/experiments.hpp"
#include "basicwalk/io.hpp"
#include "basicwalk/traps.hpp"
#include "basicwalk/walker.hpp"

namespace py = pybind11;
using namespace basicwalk;

namespace {

py::dict outcome_dict(const WalkOutcome& o, const GraphFamily& g) {
    py::dict d;
    d["outcome"] = o.cycled() ? "cycled" : "budget_exhausted";
    d["steps"] = o.steps_taken;
    d["tail"] = o.cycled() ? py::object(py::int_(o.tail())) : py::object(py::none());
    d["period"] = o.cycled() ? py::object(py::int_(o.period())) : py::object(py::none());
    d["unique_vertices"] = o.unique_vertices;
    d["unique_states"] = o.unique_states;
    d["max_distance"] = o.max_distance;
    d["monotone_escape"] = o.monotone_escape;
    d["fresh_labels"] = o.fresh_labels;
    d["final_vertex"] = format_vertex(g, o.final_state.position);
    d["final_port"] = o.final_state.next_port;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "random basic walk simulation core";

    py::register_exception<Error>(m, "BasicWalkError", PyExc_ValueError);

    m.def(
        "walk",
        [](const std::string& graph, const std::string& labeling, std::uint64_t seed, std::uint64_t budget,
           const std::string& start, Port port) {
            const GraphFamily g = parse_graph_spec(graph);
            const LabelingMode mode = parse_labeling_spec(labeling, g);
            const VertexRef s = start.empty() ? origin(g) : parse_vertex(g, start);
            WalkOutcome o;
            {
                py::gil_scoped_release release;
                o = run_basic_walk(g, mode, s, port, budget, seed);
            }
            return outcome_dict(o, g);
        },
        py::arg("graph"), py::arg("labeling") = "lazy", py::arg("seed") = 0, py::arg("budget") = 1000000,
        py::arg("start") = "", py::arg("port") = 1);

    m.def(
        "trap_probability",
        [](const std::string& trap, int dim, Degree deg_v, std::vector<Degree> neighbor_degrees, Degree degree,
           std::uint64_t length) {
            TrapKind kind;
            if (trap == "t-lattice") kind = TLattice{dim};
            else if (trap == "spire-hex") kind = SpireHex{};
            else if (trap == "star-cv") kind = StarCv{deg_v, std::move(neighbor_degrees)};
            else if (trap == "straight-path") kind = StraightPath{degree, length};
            else throw Error(ErrorCode::malformed_kind, "unknown trap '" + trap + "'");
            return bound_json(kind).dump();
        },
        py::arg("trap"), py::arg("dim") = 2, py::arg("deg_v") = 0, py::arg("neighbor_degrees") = std::vector<Degree>{},
        py::arg("degree") = 4, py::arg("length") = 3, "bound record as a JSON string");

    m.def("z_process_exact", [](std::uint64_t n) { return static_cast<double>(z_process_exact(n)); }, py::arg("n"));
    m.def("z_process_exact_rational", [](std::uint64_t n) { return z_process_exact_rational(n).str(); }, py::arg("n"));
    m.def("occupancy_exact", [](std::uint64_t n) { return occupancy_exact(n).str(); }, py::arg("n"));
    m.def("tree_escape_factor", [](unsigned mm) { return tree_escape_factor(mm).str(); }, py::arg("m"));

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int rc;
            {
                py::gil_scoped_release release;
                rc = cli::dispatch(args, out, err);
            }
            return py::make_tuple(rc, out.str(), err.str());
        },
        py::arg("args"), "runs the command line tool in-process: (exit_code, stdout, stderr)");
}
