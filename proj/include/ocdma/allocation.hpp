#pragma once
// Adaptive code reallocation. Offline: a codebook table mapping every active
// user count n to the code designed for n users (rate mode re-optimizes the
// length; power mode keeps the full-load length and re-optimizes the
// weight). Online: either a Bernoulli-activity Monte Carlo that estimates
// the gain ratios against fixed full-load assignment, or a message-driven
// replay that emits an assignment record per reallocation tick.

#include <cstdint>
#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "design.hpp"

namespace ocdma {

enum class AllocationMode { rate, power };
enum class DesignMethod { heuristic, brute };

struct CodeBook {
    std::int64_t L = 0, W = 0, lambda = 0;
};

struct CodebookTable {
    AllocationMode mode = AllocationMode::rate;
    std::int64_t N = 0;
    std::int64_t M = 1;
    double pe_th = 0.0;
    std::vector<CodeBook> entries;  // entries[n-1] serves n active users

    const CodeBook& book(std::int64_t n) const {
        if (n < 1 || n > N) throw std::out_of_range("CodebookTable: n outside 1..N");
        return entries[static_cast<std::size_t>(n - 1)];
    }
};

/// Build the per-load codebook table offline. Rate mode designs each load
/// level independently (heuristic by default); power mode fixes L from the
/// full-load rate design and then minimizes W per load level. Construction
/// fails atomically if any level is infeasible. A backward pass keeps the
/// tables monotone (an entry feasible for n users also serves fewer users),
/// which irons out the small non-monotone wobbles the heuristic can leave.
inline CodebookTable build_codebooks(AllocationMode mode, std::int64_t N, std::int64_t M,
                                     double pe_th, DesignMethod method = DesignMethod::heuristic,
                                     const SearchBounds& bounds = {}, int digits = 80,
                                     unsigned threads = 0) {
    if (N < 1) throw std::invalid_argument("build_codebooks: N >= 1 required");
    CodebookTable t;
    t.mode = mode;
    t.N = N;
    t.M = M;
    t.pe_th = pe_th;
    t.entries.resize(static_cast<std::size_t>(N));

    auto rate_design = [&](std::int64_t n) {
        return method == DesignMethod::brute
                   ? rate_optimize_brute(n, M, pe_th, bounds, digits, threads)
                   : rate_optimize_heuristic(n, M, pe_th, digits);
    };

    if (mode == AllocationMode::rate) {
        for (std::int64_t n = 1; n <= N; ++n) {
            const DesignResult r = rate_design(n);
            if (!r.feasible)
                throw std::runtime_error("build_codebooks: rate design infeasible at n=" +
                                         std::to_string(n));
            t.entries[static_cast<std::size_t>(n - 1)] = {r.L, r.W, r.lambda};
        }
        for (std::int64_t n = N - 1; n >= 1; --n) {
            auto& e = t.entries[static_cast<std::size_t>(n - 1)];
            const auto& next = t.entries[static_cast<std::size_t>(n)];
            if (e.L > next.L) e = next;
        }
    } else {
        const DesignResult base = rate_design(N);
        if (!base.feasible)
            throw std::runtime_error("build_codebooks: full-load rate design infeasible");
        for (std::int64_t n = 1; n <= N; ++n) {
            const DesignResult r = power_optimize_brute(n, M, base.L, pe_th, bounds, digits);
            if (!r.feasible)
                throw std::runtime_error("build_codebooks: power design infeasible at n=" +
                                         std::to_string(n));
            t.entries[static_cast<std::size_t>(n - 1)] = {base.L, r.W, r.lambda};
        }
        for (std::int64_t n = N - 1; n >= 1; --n) {
            auto& e = t.entries[static_cast<std::size_t>(n - 1)];
            const auto& next = t.entries[static_cast<std::size_t>(n)];
            if (e.W > next.W) e = next;
        }
    }
    return t;
}

struct SimConfig {
    std::int64_t N = 1;
    std::int64_t M = 1;
    double pe_th = 1e-7;
    double p_active = 0.5;
    std::int64_t intervals = 100000;
    std::uint64_t seed = 42;
    double T = 1.0;  // reallocation period; only the message-driven mode uses it
    AllocationMode mode = AllocationMode::rate;
};

inline void validate(const SimConfig& c) {
    if (c.N < 1) throw std::invalid_argument("SimConfig: N >= 1 required");
    if (!(c.p_active >= 0.0 && c.p_active <= 1.0))
        throw std::invalid_argument("SimConfig: p_active in [0,1] required");
    if (c.intervals < 1) throw std::invalid_argument("SimConfig: intervals >= 1 required");
    if (c.T <= 0.0) throw std::invalid_argument("SimConfig: T > 0 required");
}

struct GainReport {
    double gain = 0.0;
    double stderr_ = 0.0;
    std::int64_t intervals_used = 0;
    // power mode also carries the unweighted companion estimate
    std::optional<double> unweighted_gain;
    std::optional<double> unweighted_stderr;
    std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> per_interval_trace;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::int64_t sim_block = 4096;  // intervals per PRNG stream

// Active-user draw, one Bernoulli trial per user. Streams are derived from
// (seed, block) so the result is independent of how work would be sharded.
inline std::int64_t draw_actives(std::mt19937_64& g, std::int64_t N, std::uint64_t thresh) {
    std::int64_t n = 0;
    for (std::int64_t u = 0; u < N; ++u)
        if (g() < thresh) ++n;
    return n;
}

}  // namespace detail

/// Monte Carlo gain of adaptive reallocation against fixed full-load codes.
/// Rate mode: mean over non-idle intervals of L_N / L_{n_t} (per-user rate
/// ratio at a common chip rate). Power mode: active-user-weighted transmit
/// weight ratio sum(n_t W_{n_t}) / sum(n_t W_N), reported next to the
/// unweighted mean(W_{n_t}/W_N). All-idle intervals are skipped. Identical
/// configs (seed included) give bit-identical reports.
inline GainReport simulate_gain(const SimConfig& cfg, const CodebookTable& table,
                                bool record_trace = false) {
    validate(cfg);
    if (table.mode != cfg.mode || table.N != cfg.N || table.M != cfg.M ||
        table.pe_th != cfg.pe_th)
        throw std::invalid_argument("simulate_gain: table was built for a different system");
    if (cfg.p_active == 0.0)
        throw std::invalid_argument("simulate_gain: p_active = 0 leaves the gain undefined");

    const bool all_active = cfg.p_active == 1.0;
    const std::uint64_t thresh =
        all_active ? 0 : static_cast<std::uint64_t>(cfg.p_active * 18446744073709551616.0);

    const CodeBook full = table.book(cfg.N);
    GainReport rep;
    if (record_trace) rep.per_interval_trace.emplace();

    double sum = 0.0, sumsq = 0.0;          // rate ratios or unweighted weight ratios
    double wsum_num = 0.0, wsum_den = 0.0;  // power mode weighted accumulators
    std::vector<double> wnum, wden;         // kept for the delta-method error
    if (cfg.mode == AllocationMode::power) {
        wnum.reserve(static_cast<std::size_t>(cfg.intervals));
        wden.reserve(static_cast<std::size_t>(cfg.intervals));
    }

    std::mt19937_64 rng;
    for (std::int64_t t = 0; t < cfg.intervals; ++t) {
        // fresh stream per block: shard-independent and fully reproducible
        if (t % detail::sim_block == 0)
            rng.seed(detail::splitmix64(cfg.seed ^
                                        detail::splitmix64(static_cast<std::uint64_t>(
                                            t / detail::sim_block))));
        const std::int64_t n =
            all_active ? cfg.N : detail::draw_actives(rng, cfg.N, thresh);
        if (n == 0) continue;
        const CodeBook& b = table.book(n);
        ++rep.intervals_used;
        if (cfg.mode == AllocationMode::rate) {
            const double x = double(full.L) / double(b.L);
            sum += x;
            sumsq += x * x;
            if (record_trace) rep.per_interval_trace->emplace_back(n, b.L);
        } else {
            const double num = double(n) * double(b.W);
            const double den = double(n) * double(full.W);
            wsum_num += num;
            wsum_den += den;
            wnum.push_back(num);
            wden.push_back(den);
            const double u = double(b.W) / double(full.W);
            sum += u;
            sumsq += u * u;
            if (record_trace) rep.per_interval_trace->emplace_back(n, b.W);
        }
    }
    if (rep.intervals_used == 0)
        throw std::runtime_error("simulate_gain: every interval was idle; increase intervals");

    const double m = double(rep.intervals_used);
    const double mean = sum / m;
    const double var = m > 1 ? std::max(0.0, (sumsq - m * mean * mean) / (m - 1.0)) : 0.0;
    const double se = m > 1 ? std::sqrt(var / m) : 0.0;

    if (cfg.mode == AllocationMode::rate) {
        rep.gain = mean;
        rep.stderr_ = se;
    } else {
        const double g = wsum_num / wsum_den;
        // delta method on the ratio of sums
        double acc = 0.0;
        for (std::size_t i = 0; i < wnum.size(); ++i) {
            const double d = wnum[i] - g * wden[i];
            acc += d * d;
        }
        const double mean_den = wsum_den / m;
        rep.gain = g;
        rep.stderr_ = m > 1 ? std::sqrt(acc / (m - 1.0) / m) / mean_den : 0.0;
        rep.unweighted_gain = mean;
        rep.unweighted_stderr = se;
    }
    return rep;
}

struct ActivityEvent {
    double time = 0.0;
    std::int64_t user = 0;
    bool activate = false;
};

/// Parse `time,user_id,activate|deactivate` lines; a single leading header
/// line is tolerated.
inline std::vector<ActivityEvent> parse_event_trace(std::istream& in) {
    std::vector<ActivityEvent> events;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string t, u, a;
        if (!std::getline(ls, t, ',') || !std::getline(ls, u, ',') || !std::getline(ls, a))
            throw std::invalid_argument("event trace: malformed line: " + line);
        if (first && t == "time") {
            first = false;
            continue;
        }
        first = false;
        ActivityEvent e;
        try {
            e.time = std::stod(t);
            e.user = std::stoll(u);
        } catch (const std::exception&) {
            throw std::invalid_argument("event trace: malformed line: " + line);
        }
        if (a == "activate")
            e.activate = true;
        else if (a == "deactivate")
            e.activate = false;
        else
            throw std::invalid_argument("event trace: unknown action: " + a);
        events.push_back(e);
    }
    return events;
}

struct AssignmentRecord {
    double time = 0.0;
    std::int64_t n = 0;  // book id == active user count
    CodeBook book;
};

/// Replay an activity trace against the reallocation loop: the active count
/// updates immediately on each message, and every T (first tick at T, and an
/// initial full-load assignment at time 0) the book for the current count is
/// announced. Ticks with nobody active announce nothing. Users start active;
/// traces must alternate deactivate/activate per user.
inline std::vector<AssignmentRecord> run_message_simulation(const SimConfig& cfg,
                                                            const CodebookTable& table,
                                                            const std::vector<ActivityEvent>& events) {
    validate(cfg);
    if (table.mode != cfg.mode || table.N != cfg.N || table.M != cfg.M ||
        table.pe_th != cfg.pe_th)
        throw std::invalid_argument("run_message_simulation: table/config mismatch");

    std::vector<bool> active(static_cast<std::size_t>(cfg.N) + 1, true);
    std::int64_t n = cfg.N;
    double prev_time = -std::numeric_limits<double>::infinity();

    auto apply = [&](const ActivityEvent& e) {
        if (e.time < prev_time)
            throw std::invalid_argument("run_message_simulation: events not time-sorted");
        prev_time = e.time;
        if (e.user < 1 || e.user > cfg.N)
            throw std::invalid_argument("run_message_simulation: user id outside 1..N");
        const bool is_active = active[static_cast<std::size_t>(e.user)];
        if (e.activate) {
            if (is_active)
                throw std::invalid_argument("run_message_simulation: user already active");
            active[static_cast<std::size_t>(e.user)] = true;
            ++n;
        } else {
            if (!is_active)
                throw std::invalid_argument(
                    "run_message_simulation: deactivation of an inactive user");
            active[static_cast<std::size_t>(e.user)] = false;
            --n;
        }
    };

    std::vector<AssignmentRecord> records;
    records.push_back({0.0, cfg.N, table.book(cfg.N)});
    std::size_t ei = 0;
    for (std::int64_t j = 1; j <= cfg.intervals; ++j) {
        const double tick = double(j) * cfg.T;
        while (ei < events.size() && events[ei].time <= tick) apply(events[ei++]);
        if (n > 0) records.push_back({tick, n, table.book(n)});
    }
    while (ei < events.size()) apply(events[ei++]);  // validate the tail too
    return records;
}

}  // namespace ocdma
