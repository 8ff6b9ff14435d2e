#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "basicwalk/experiments.hpp"
#include "basicwalk/graph.hpp"
#include "basicwalk/labeling.hpp"
#include "basicwalk/rational.hpp"
#include "basicwalk/traps.hpp"
#include "basicwalk/walker.hpp"

namespace basicwalk {

// z<d>, hex, tree, complete:N, grid:KxN, star:M, file:PATH
GraphFamily parse_graph_spec(std::string_view spec);

// lazy, full, alternating, staircase, spiral[:x,y[,port]], fixture:PATH
LabelingMode parse_labeling_spec(std::string_view spec, const GraphFamily& g);

bool is_randomized(const LabelingMode& mode);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// "%.17g": round-trips and is byte-stable for identical doubles
std::string format_double(double x);

nlohmann::ordered_json to_json(const Summary& s);
nlohmann::ordered_json to_json(const ExperimentResult& r);
nlohmann::ordered_json to_json(const WalkOutcome& o, const GraphFamily& g);
nlohmann::ordered_json bound_json(const TrapKind& kind);

// trial,outcome,steps,tail,period,unique_vertices,unique_states,max_distance,monotone_escape
void write_rows_csv(std::ostream& out, const std::vector<TrialRow>& rows);
// trial,value
void write_values_csv(std::ostream& out, const std::vector<double>& values);
// k,n,vertices,trials,mean_unique,max_unique,mean_longest_tour,max_longest_tour,mean_longest_tour_states
void write_grid_tours_csv(std::ostream& out, const GridTours& t);

}  // namespace basicwalk
