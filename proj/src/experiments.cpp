#include "basicwalk/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "basicwalk/error.hpp"
#include "basicwalk/traps.hpp"

namespace basicwalk {

Summary summarize(const std::vector<double>& values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    long double sum = 0;
    for (double v : values) sum += v;
    const long double mean = sum / static_cast<long double>(values.size());
    long double ss = 0;
    for (double v : values) ss += (v - mean) * (v - mean);
    s.mean = static_cast<double>(mean);
    s.variance = values.size() > 1 ? static_cast<double>(ss / static_cast<long double>(values.size() - 1)) : 0.0;
    s.std_error = std::sqrt(s.variance / static_cast<double>(values.size()));
    s.ci_low = s.mean - kZ99 * s.std_error;
    s.ci_high = s.mean + kZ99 * s.std_error;
    return s;
}

void parallel_for(std::uint64_t count, unsigned workers, const std::function<void(std::uint64_t)>& f) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(count, 1)));
    std::mutex mu;
    std::uint64_t failed_at = std::numeric_limits<std::uint64_t>::max();
    std::exception_ptr failure;
    std::atomic<bool> stop{false};
    auto work = [&](unsigned w) {
        for (std::uint64_t i = w; i < count && !stop.load(std::memory_order_relaxed); i += workers) {
            try {
                f(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
                stop = true;
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const Error& e) {
            throw Error(e.code(), "trial " + std::to_string(failed_at) + ": " + e.what());
        } catch (const std::exception& e) {
            throw Error(ErrorCode::invalid_argument, "trial " + std::to_string(failed_at) + ": " + e.what());
        }
    }
}

void validate_spec(const ExperimentSpec& spec) {
    if (spec.trials < 1) throw Error(ErrorCode::invalid_argument, "trials must be >= 1");
    if (spec.budget < 1) throw Error(ErrorCode::budget_zero, "budget must be >= 1");
    if (spec.start == StartPolicy::uniform && !spec.graph.is_finite())
        throw Error(ErrorCode::infinite_family, "uniform start needs a finite graph");
    if (std::holds_alternative<FullUniform>(spec.mode) && !spec.graph.is_finite())
        throw Error(ErrorCode::infinite_family, "full labeling needs a finite graph");
    if (auto* d = std::get_if<Deterministic>(&spec.mode)) check_scheme_compatible(d->scheme, spec.graph);
}

ExperimentResult aggregate(std::vector<TrialRow> rows) {
    ExperimentResult r;
    std::vector<double> steps, uv, us, md, mono, tail, period;
    std::uint64_t cycled = 0;
    for (const auto& row : rows) {
        steps.push_back(static_cast<double>(row.steps));
        uv.push_back(static_cast<double>(row.unique_vertices));
        us.push_back(static_cast<double>(row.unique_states));
        md.push_back(static_cast<double>(row.max_distance));
        mono.push_back(row.monotone_escape ? 1.0 : 0.0);
        if (row.cycled) {
            ++cycled;
            tail.push_back(static_cast<double>(row.tail));
            period.push_back(static_cast<double>(row.period));
        }
    }
    r.metrics["steps"] = summarize(steps);
    r.metrics["unique_vertices"] = summarize(uv);
    r.metrics["unique_states"] = summarize(us);
    r.metrics["max_distance"] = summarize(md);
    r.metrics["monotone_escape"] = summarize(mono);
    r.metrics["tail"] = summarize(tail);
    r.metrics["period"] = summarize(period);
    r.fraction_cycled = rows.empty() ? 0.0 : static_cast<double>(cycled) / static_cast<double>(rows.size());
    r.rows = std::move(rows);
    return r;
}

TrialRow run_trial(const ExperimentSpec& spec, std::uint64_t trial) {
    const auto& g = spec.graph;
    Rng rng = Rng::for_trial(spec.seed, trial);
    Rng policy = rng.derive(1);
    VertexRef start = origin(g);
    if (spec.start == StartPolicy::uniform) start = VertexRef::index(policy.uniform_below(g.vertex_count()));
    Port port = 1;
    if (spec.port == PortPolicy::uniform) port = policy.uniform_below(degree(g, start)) + 1;
    PortLabeling lab = make_labeling(g, spec.mode, rng);
    const WalkOutcome o = run_basic_walk(g, lab, start, port, spec.budget, rng);
    TrialRow row;
    row.trial = trial;
    row.cycled = o.cycled();
    row.steps = o.steps_taken;
    row.tail = o.tail();
    row.period = o.period();
    row.unique_vertices = o.unique_vertices;
    row.unique_states = o.unique_states;
    row.max_distance = o.max_distance;
    row.monotone_escape = o.monotone_escape;
    return row;
}

ExperimentResult mc_cycle_stats(const ExperimentSpec& spec) {
    validate_spec(spec);
    std::vector<TrialRow> rows(spec.trials);
    parallel_for(spec.trials, spec.workers, [&](std::uint64_t i) { rows[i] = run_trial(spec, i); });
    return aggregate(std::move(rows));
}

KnCoverage kn_coverage(std::uint64_t n, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    if (n < 2) throw Error(ErrorCode::invalid_argument, "kn-coverage needs n >= 2");
    ExperimentSpec spec;
    spec.graph = GraphFamily::complete(n);
    spec.trials = trials;
    spec.budget = n - 1;
    spec.seed = seed;
    spec.workers = workers;
    KnCoverage out{mc_cycle_stats(spec), (1.0 - std::exp(-1.0)) * static_cast<double>(n)};
    return out;
}

KnArcs kn_arcs_to_cycle(std::uint64_t n, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    if (n < 2) throw Error(ErrorCode::invalid_argument, "kn-arcs needs n >= 2");
    ExperimentSpec spec;
    spec.graph = GraphFamily::complete(n);
    spec.trials = trials;
    spec.budget = 2 * n * (n - 1) + 1;
    spec.seed = seed;
    spec.workers = workers;
    KnArcs out{mc_cycle_stats(spec), static_cast<double>(z_process_exact(n))};
    return out;
}

Rational occupancy_exact(std::uint64_t n) {
    if (n < 2) throw Error(ErrorCode::invalid_argument, "occupancy needs n >= 2");
    const auto m = static_cast<unsigned long>(n - 1);
    const Rational miss = Rational::pow(Rational(static_cast<long>(n - 2), m), n - 1);
    return Rational(1) + Rational(static_cast<long>(m)) * (Rational(1) - miss);
}

std::vector<double> occupancy_mc(std::uint64_t n, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    if (n < 2) throw Error(ErrorCode::invalid_argument, "occupancy needs n >= 2");
    std::vector<double> out(trials);
    parallel_for(trials, workers, [&](std::uint64_t i) {
        Rng rng = Rng::for_trial(seed, i);
        std::vector<bool> seen(n, false);
        std::uint64_t x = 0, distinct = 1;
        seen[0] = true;
        for (std::uint64_t k = 1; k < n; ++k) {
            std::uint64_t y = rng.uniform_below(n - 1);
            if (y >= x) ++y;
            x = y;
            if (!seen[x]) {
                seen[x] = true;
                ++distinct;
            }
        }
        out[i] = static_cast<double>(distinct);
    });
    return out;
}

long double z_process_exact(std::uint64_t n) {
    if (n < 1) throw Error(ErrorCode::invalid_argument, "z process needs n >= 1");
    // E[K] = sum_{t>=0} Pr(K > t); surviving step s (pass p = ceil(s/n)) has
    // chance 1 - (p-1)/n because the p-1 earlier values at that position are distinct
    long double sum = 1.0L, c = 0.0L, survive = 1.0L;
    const auto nn = static_cast<long double>(n);
    for (std::uint64_t p = 1; p <= n; ++p) {
        const long double f = 1.0L - static_cast<long double>(p - 1) / nn;
        for (std::uint64_t j = 0; j < n; ++j) {
            survive *= f;
            const long double y = survive - c;
            const long double t = sum + y;
            c = (t - sum) - y;
            sum = t;
        }
        if (survive < 1e-40L) break;
    }
    return sum;
}

Rational z_process_exact_rational(std::uint64_t n) {
    if (n < 1) throw Error(ErrorCode::invalid_argument, "z process needs n >= 1");
    if (n > 64) throw Error(ErrorCode::too_large, "exact rational z process limited to n <= 64");
    Rational sum(1), survive(1);
    for (std::uint64_t p = 1; p <= n; ++p) {
        const Rational f(static_cast<long>(n - (p - 1)), static_cast<unsigned long>(n));
        for (std::uint64_t j = 0; j < n; ++j) {
            survive *= f;
            sum += survive;
        }
    }
    return sum;
}

namespace {

void z_enumerate(std::uint64_t n, std::uint64_t s, std::vector<std::vector<bool>>& seen, const Rational& prob,
                 Rational& expectation) {
    const std::uint64_t pos = (s - 1) % n;
    const Rational branch = prob * Rational(1, static_cast<unsigned long>(n));
    for (std::uint64_t val = 0; val < n; ++val) {
        if (seen[pos][val]) {
            expectation += branch * Rational(static_cast<long>(s));
            continue;
        }
        seen[pos][val] = true;
        z_enumerate(n, s + 1, seen, branch, expectation);
        seen[pos][val] = false;
    }
}

}  // namespace

Rational z_process_brute_force(std::uint64_t n) {
    if (n < 1) throw Error(ErrorCode::invalid_argument, "z process needs n >= 1");
    if (n > 3) throw Error(ErrorCode::too_large, "brute-force z process limited to n <= 3");
    std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
    Rational e(0);
    z_enumerate(n, 1, seen, Rational(1), e);
    return e;
}

std::vector<double> z_process_mc(std::uint64_t n, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    if (n < 1) throw Error(ErrorCode::invalid_argument, "z process needs n >= 1");
    std::vector<double> out(trials);
    parallel_for(trials, workers, [&](std::uint64_t i) {
        Rng rng = Rng::for_trial(seed, i);
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(static_cast<std::size_t>(4 * n));
        for (std::uint64_t s = 1;; ++s) {
            const std::uint64_t key = ((s - 1) % n) * n + rng.uniform_below(n);
            if (!seen.insert(key).second) {
                out[i] = static_cast<double>(s);
                return;
            }
        }
    });
    return out;
}

Rational tree_escape_factor(unsigned m) {
    if (m < 2 || m > kMaxTreeLevel + 1) throw Error(ErrorCode::invalid_argument, "tree level factor needs 2 <= m <= 64");
    // a fresh level-(m-1) vertex has 2^(m-1) + 1 slots, one of them the parent
    const mpz_class deg = (mpz_class(1) << (m - 1)) + 1;
    return Rational(mpq_class(deg - 1, deg));
}

TreeEscape tree_escape(unsigned depth_cap, std::uint64_t trials, std::uint64_t budget, std::uint64_t seed,
                       unsigned workers) {
    if (depth_cap < 2 || depth_cap > kMaxTreeLevel)
        throw Error(ErrorCode::invalid_argument, "tree escape depth must be in [2, 63]");
    if (budget < depth_cap) throw Error(ErrorCode::invalid_argument, "tree escape budget must be >= depth");
    if (trials < 1) throw Error(ErrorCode::invalid_argument, "trials must be >= 1");
    TreeEscape out;
    out.depth = depth_cap;
    out.trials = trials;
    const GraphFamily g = GraphFamily::growing_tree();
    std::vector<double> hit(trials);
    // the event is settled by step M, so each walk runs exactly M steps
    parallel_for(trials, workers, [&](std::uint64_t i) {
        Rng rng = Rng::for_trial(seed, i);
        PortLabeling lab(g, LazyUniform{});
        const auto o = run_basic_walk(g, lab, origin(g), 1, depth_cap, rng);
        hit[i] = (o.monotone_prefix >= depth_cap) ? 1.0 : 0.0;
    });
    for (double h : hit) out.escapes += h > 0.5;
    out.frequency = summarize(hit);
    out.exact_product = Rational(1);
    for (unsigned m = 2; m <= depth_cap; ++m) out.exact_product *= tree_escape_factor(m);
    long double lim = 1.0L;
    for (unsigned m = 2; m <= kMaxTreeLevel + 1; ++m) lim *= 1.0L - 1.0L / (std::ldexp(1.0L, static_cast<int>(m - 1)) + 1.0L);
    out.limit_estimate = static_cast<double>(lim);
    out.exceeds_e_minus_2 = out.exact_product.to_double() > std::exp(-2.0) && out.limit_estimate > std::exp(-2.0);
    return out;
}

EventFrequency mc_event_frequency(const EventKind& event, std::uint64_t samples, std::uint64_t seed,
                                  unsigned workers) {
    if (samples < 1) throw Error(ErrorCode::invalid_argument, "samples must be >= 1");
    EventFrequency out;
    out.samples = samples;
    std::vector<double> hit(samples);

    if (const auto* sp = std::get_if<StraightPathEvent>(&event)) {
        const GraphFamily g = sp->graph;
        if (g.kind() != FamilyKind::lattice && g.kind() != FamilyKind::hex)
            throw Error(ErrorCode::invalid_argument, "straight-path event needs a lattice or the hex lattice");
        const std::uint64_t n = sp->n;
        const Degree d = degree(g, origin(g));
        out.analytic = n == 0 ? Rational(1) : analytic_trap_probability(StraightPath{d, n});
        parallel_for(samples, workers, [&](std::uint64_t i) {
            Rng rng = Rng::for_trial(seed, i);
            PortLabeling lab(g, LazyUniform{});
            WalkState s{origin(g), 1};
            std::uint64_t dist = 0;
            for (std::uint64_t k = 0; k < n; ++k) {
                const Slot slot = lab.resolve_exit_slot(s.position, s.next_port, rng);
                if (slot != 1) return;
                VertexRef w = neighbor(g, s.position, slot);
                const auto wd = distance(g, w);
                if (wd <= dist) return;
                dist = wd;
                const Port np = s.next_port % degree(g, w) + 1;
                s = WalkState{std::move(w), np};
            }
            hit[i] = 1.0;
        });
    } else {
        const int d = std::get<TrapTEvent>(event).d;
        out.analytic = analytic_trap_probability(TLattice{d});
        const GraphFamily g = GraphFamily::lattice(d);
        const VertexRef v = origin(g);
        parallel_for(samples, workers, [&](std::uint64_t i) {
            Rng rng = Rng::for_trial(seed, i);
            PortLabeling lab(g, LazyUniform{});
            WalkState s{v, 1};
            for (int k = 0; k < d; ++k) {
                // out to the slot-(k+1) neighbour (all inside the hyperplane x_d = 0) ...
                const VertexRef target = neighbor(g, v, static_cast<Slot>(k + 1));
                if (lab.resolve_exit_slot(s.position, s.next_port, rng) != static_cast<Slot>(k + 1)) return;
                s = WalkState{target, s.next_port % degree(g, target) + 1};
                // ... and straight back
                const Slot back = slot_toward(g, target, v);
                if (lab.resolve_exit_slot(s.position, s.next_port, rng) != back) return;
                s = WalkState{v, s.next_port % degree(g, v) + 1};
            }
            hit[i] = (s.next_port == 1) ? 1.0 : 0.0;
        });
    }
    for (double h : hit) out.hits += h > 0.5;
    out.frequency = summarize(hit);
    return out;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::invalid_argument, "slope needs >= 2 points");
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0) throw Error(ErrorCode::invalid_argument, "slope needs distinct x values");
    return sxy / sxx;
}

GridTours grid_longest_tour(std::uint64_t k, const std::vector<std::uint64_t>& n_values, std::uint64_t trials,
                            std::uint64_t seed, unsigned workers) {
    if (k < 1) throw Error(ErrorCode::invalid_argument, "grid tours need k >= 1");
    if (trials < 1) throw Error(ErrorCode::invalid_argument, "trials must be >= 1");
    if (n_values.empty()) throw Error(ErrorCode::invalid_argument, "grid tours need at least one n");
    GridTours out;
    for (auto n : n_values) {
        if (n < k) throw Error(ErrorCode::invalid_argument, "grid tours need n >= k");
        const GraphFamily g = GraphFamily::grid(k, n);
        struct Trial {
            std::uint64_t unique = 0, tour = 0, tour_states = 0;
        };
        std::vector<Trial> res(trials);
        const std::uint64_t stream = mix64(seed ^ mix64(k * 0x100000001b3ULL + n));
        parallel_for(trials, workers, [&](std::uint64_t i) {
            Rng rng = Rng::for_trial(stream, i);
            Rng policy = rng.derive(1);
            PortLabeling lab = full_uniform_labeling(g, rng);
            const auto start = VertexRef::index(policy.uniform_below(g.vertex_count()));
            const Port port = policy.uniform_below(degree(g, start)) + 1;
            const auto o = run_basic_walk(g, lab, start, port, g.arc_count() + 1, rng);
            const auto c = cycle_census(lab);
            res[i] = Trial{o.unique_vertices, c.longest_cycle_vertices, c.longest_cycle_states};
        });
        GridTourRow row;
        row.k = k;
        row.n = n;
        row.vertices = g.vertex_count();
        row.trials = trials;
        long double su = 0, st = 0, sts = 0;
        for (const auto& r : res) {
            su += r.unique;
            st += r.tour;
            sts += r.tour_states;
            row.max_unique = std::max(row.max_unique, r.unique);
            row.max_longest_tour = std::max(row.max_longest_tour, r.tour);
        }
        const auto t = static_cast<long double>(trials);
        row.mean_unique = static_cast<double>(su / t);
        row.mean_longest_tour = static_cast<double>(st / t);
        row.mean_longest_tour_states = static_cast<double>(sts / t);
        out.rows.push_back(row);
    }
    if (out.rows.size() >= 2) {
        std::vector<double> x, ymax, ytour;
        for (const auto& r : out.rows) {
            x.push_back(std::log(static_cast<double>(r.n)));
            ymax.push_back(static_cast<double>(r.max_unique));
            ytour.push_back(r.mean_longest_tour);
        }
        out.slope_max_unique = ls_slope(x, ymax);
        out.slope_mean_longest_tour = ls_slope(x, ytour);
    }
    return out;
}

std::optional<FixtureFinite> search_coverage_fixture(std::uint64_t n, std::uint64_t target, std::uint64_t seed,
                                                     std::uint64_t max_attempts) {
    if (target < 2 || target > n) throw Error(ErrorCode::invalid_argument, "coverage target must be in [2, n]");
    const GraphFamily g = GraphFamily::complete(n);
    for (std::uint64_t a = 0; a < max_attempts; ++a) {
        Rng rng = Rng::for_trial(seed, a);
        PortLabeling lab(g, LazyUniform{});
        std::unordered_set<std::uint64_t> visited{0};
        std::unordered_map<WalkState, std::uint64_t, WalkStateHash> first;
        WalkState s{VertexRef::index(0), 1};
        first.emplace(s, 0);
        for (std::uint64_t t = 1;; ++t) {
            Slot slot;
            if (auto b = lab.bound_slot(s.position, s.next_port)) {
                slot = *b;
            } else {
                // once `target` vertices are in, prefer exits back into them
                std::vector<Slot> free, inside;
                for (Slot c = 1; c <= n - 1; ++c) {
                    if (lab.port_of_slot(s.position, c)) continue;
                    free.push_back(c);
                    const auto w = static_cast<std::uint64_t>(neighbor(g, s.position, c)[0]);
                    if (visited.count(w)) inside.push_back(c);
                }
                const auto& pool = (visited.size() >= target && !inside.empty()) ? inside : free;
                slot = pool[rng.uniform_below(pool.size())];
                lab.bind(s.position, s.next_port, slot);
            }
            VertexRef w = neighbor(g, s.position, slot);
            visited.insert(static_cast<std::uint64_t>(w[0]));
            s = WalkState{w, s.next_port % (n - 1) + 1};
            if (visited.size() > target) break;
            if (!first.emplace(s, t).second) {
                if (visited.size() == target) return complete_fixture(lab);
                break;
            }
        }
    }
    return std::nullopt;
}

}  // namespace basicwalk
