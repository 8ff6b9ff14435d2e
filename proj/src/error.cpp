#include "basicwalk/error.hpp"

namespace basicwalk {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_vertex: return "invalid-vertex";
    case ErrorCode::slot_out_of_range: return "slot-out-of-range";
    case ErrorCode::depth_limit: return "depth-limit";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::asymmetric_adjacency: return "asymmetric-adjacency";
    case ErrorCode::disconnected_graph: return "disconnected-graph";
    case ErrorCode::self_loop: return "self-loop";
    case ErrorCode::port_out_of_range: return "port-out-of-range";
    case ErrorCode::no_free_slot: return "no-free-slot";
    case ErrorCode::infinite_family: return "infinite-family";
    case ErrorCode::scheme_graph_mismatch: return "scheme-graph-mismatch";
    case ErrorCode::invalid_init_port: return "invalid-init-port";
    case ErrorCode::budget_zero: return "budget-zero";
    case ErrorCode::malformed_kind: return "malformed-kind";
    case ErrorCode::probability_out_of_range: return "probability-out-of-range";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::too_large: return "too-large";
    case ErrorCode::io_error: return "io-error";
    }
    return "unknown";
}

}  // namespace basicwalk
