#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "basicwalk/graph.hpp"
#include "basicwalk/labeling.hpp"
#include "basicwalk/rational.hpp"
#include "basicwalk/walker.hpp"

namespace basicwalk {

// two-sided 99% normal quantile
inline constexpr double kZ99 = 2.5758293035489004;

struct Summary {
    std::uint64_t count = 0;
    double mean = 0;
    double variance = 0;  // sample variance (n-1)
    double std_error = 0;
    double ci_low = 0;
    double ci_high = 0;
};

// Sums in index order in long double, so a summary is a pure function of the
// value sequence (independent of worker scheduling).
Summary summarize(const std::vector<double>& values);

// Runs f(i) for i in [0, count) on `workers` threads (0 = hardware). Work is
// strided by index; a failing item aborts the batch with its index.
void parallel_for(std::uint64_t count, unsigned workers, const std::function<void(std::uint64_t)>& f);

enum class StartPolicy { origin, uniform };
enum class PortPolicy { fixed_one, uniform };

struct ExperimentSpec {
    GraphFamily graph = GraphFamily::lattice(2);
    LabelingMode mode = LazyUniform{};
    StartPolicy start = StartPolicy::origin;
    PortPolicy port = PortPolicy::fixed_one;
    std::uint64_t trials = 1;
    std::uint64_t budget = 1;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

void validate_spec(const ExperimentSpec& spec);

struct TrialRow {
    std::uint64_t trial = 0;
    bool cycled = false;
    std::uint64_t steps = 0;
    std::uint64_t tail = 0;
    std::uint64_t period = 0;
    std::uint64_t unique_vertices = 0;
    std::uint64_t unique_states = 0;
    std::uint64_t max_distance = 0;
    bool monotone_escape = false;
};

struct ExperimentResult {
    std::vector<TrialRow> rows;
    // steps, unique_vertices, unique_states, max_distance, monotone_escape over
    // all rows; tail and period over cycled rows only
    std::map<std::string, Summary> metrics;
    double fraction_cycled = 0;
};

// Aggregates from rows (exact recomputation).
ExperimentResult aggregate(std::vector<TrialRow> rows);

// Trial i: stream Rng::for_trial(seed, i); start/port policy draws come from
// a derived substream so the walk stream is the same under either policy.
TrialRow run_trial(const ExperimentSpec& spec, std::uint64_t trial);

ExperimentResult mc_cycle_stats(const ExperimentSpec& spec);

// K_n from vertex 0, port 1, budget n-1: distinct vertices among v_0..v_{n-1}.
struct KnCoverage {
    ExperimentResult result;
    double lower_bound = 0;  // (1 - 1/e) n
};
KnCoverage kn_coverage(std::uint64_t n, std::uint64_t trials, std::uint64_t seed, unsigned workers = 1);

// K_n from vertex 0, port 1, budget 2n(n-1)+1: steps to the first repeated state.
struct KnArcs {
    ExperimentResult result;
    double z_exact = 0;  // z_process exact-dp for the same n
};
KnArcs kn_arcs_to_cycle(std::uint64_t n, std::uint64_t trials, std::uint64_t seed, unsigned workers = 1);

// X process: x_1 = 1, each next value uniform over [n] minus the previous one,
// n values in total; count of distinct values.
Rational occupancy_exact(std::uint64_t n);
std::vector<double> occupancy_mc(std::uint64_t n, std::uint64_t trials, std::uint64_t seed, unsigned workers = 1);

// Z process: z_s uniform on [n] at position ((s-1) mod n)+1, stopped at the
// first (position, value) pair seen before; K is that index (1-based).
long double z_process_exact(std::uint64_t n);
// Same sum in exact arithmetic; meant for small n.
Rational z_process_exact_rational(std::uint64_t n);
// Exhaustive enumeration, n <= 3 (too_large otherwise).
Rational z_process_brute_force(std::uint64_t n);
std::vector<double> z_process_mc(std::uint64_t n, std::uint64_t trials, std::uint64_t seed, unsigned workers = 1);

// Conditional chance that a monotone walk on the growing tree takes its m-th
// step downward too: 1 - 1/(2^(m-1)+1), m >= 2.
Rational tree_escape_factor(unsigned m);
struct TreeEscape {
    unsigned depth = 2;
    std::uint64_t trials = 0;
    std::uint64_t escapes = 0;
    Summary frequency;
    Rational exact_product;   // prod_{m=2}^{M} factor(m)
    double limit_estimate = 0;  // product continued to the deepest representable level
    bool exceeds_e_minus_2 = false;
};
TreeEscape tree_escape(unsigned depth_cap, std::uint64_t trials, std::uint64_t budget, std::uint64_t seed,
                       unsigned workers = 1);

struct StraightPathEvent {
    GraphFamily graph = GraphFamily::lattice(2);
    std::uint64_t n = 1;
};
struct TrapTEvent {
    int d = 2;
};
using EventKind = std::variant<StraightPathEvent, TrapTEvent>;

struct EventFrequency {
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;
    Summary frequency;
    Rational analytic;
};

// straight_path: fresh lazy walk from the origin, port 1, takes slot 1 n times
// in a row (x axis outward). trap_T: fresh origin entered with port 1 realizes
// T_d: out and back to the slot-1, slot-2, ..., slot-d neighbours in turn.
EventFrequency mc_event_frequency(const EventKind& event, std::uint64_t samples, std::uint64_t seed,
                                  unsigned workers = 1);

struct GridTourRow {
    std::uint64_t k = 0;
    std::uint64_t n = 0;
    std::uint64_t vertices = 0;
    std::uint64_t trials = 0;
    double mean_unique = 0;
    std::uint64_t max_unique = 0;
    double mean_longest_tour = 0;  // longest cycle (distinct vertices) over all states of the labeling
    std::uint64_t max_longest_tour = 0;
    double mean_longest_tour_states = 0;
};
struct GridTours {
    std::vector<GridTourRow> rows;
    // least squares slopes against ln n
    double slope_max_unique = 0;
    double slope_mean_longest_tour = 0;
};
GridTours grid_longest_tour(std::uint64_t k, const std::vector<std::uint64_t>& n_values, std::uint64_t trials,
                            std::uint64_t seed, unsigned workers = 1);

// Least squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

// Randomized search for a total labeling of K_n whose walk from (0, 1) cycles
// after visiting exactly `target` vertices.
std::optional<FixtureFinite> search_coverage_fixture(std::uint64_t n, std::uint64_t target, std::uint64_t seed,
                                                     std::uint64_t max_attempts);

}  // namespace basicwalk
