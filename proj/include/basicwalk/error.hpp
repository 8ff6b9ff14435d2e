#pragma once

#include <stdexcept>
#include <string>

namespace basicwalk {

enum class ErrorCode {
    invalid_vertex,
    slot_out_of_range,
    depth_limit,
    parse_error,
    asymmetric_adjacency,
    disconnected_graph,
    self_loop,
    port_out_of_range,
    no_free_slot,
    infinite_family,
    scheme_graph_mismatch,
    invalid_init_port,
    budget_zero,
    malformed_kind,
    probability_out_of_range,
    invalid_argument,
    too_large,
    io_error,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace basicwalk
