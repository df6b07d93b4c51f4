#pragma once
// Sweep drivers behind the command-line front end. Each cmd_* function runs
// one experiment family and returns plain row structs; CSV serialization
// lives with the caller so the rows stay testable against direct library
// calls.

#include <cstdint>
#include <cstdio>
#include <future>
#include <stdexcept>
#include <string>
#include <vector>

#include "allocation.hpp"
#include "ber.hpp"
#include "design.hpp"

namespace ocdma {

/// Doubles rendered with 17 significant digits round-trip exactly.
inline std::string format_sig17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct BerSweepArgs {
    CodeParams code;
    std::int64_t n_min = 1;
    std::int64_t n_max = 1;
    int digits = 80;
};

struct BerRow {
    std::int64_t N = 0;
    double exact_v = 0.0;
    double approx_v = 0.0;
};

/// One row per user count: exact bound under the worst-case hit model next
/// to the closed-form estimate.
inline std::vector<BerRow> cmd_ber(const BerSweepArgs& a) {
    validate(a.code);
    if (a.n_min < 1 || a.n_max < a.n_min)
        throw std::invalid_argument("ber sweep: need 1 <= n_min <= n_max");
    std::vector<BerRow> rows(static_cast<std::size_t>(a.n_max - a.n_min + 1));
    std::vector<std::future<void>> jobs;
    const std::int64_t chunk = 32;
    for (std::int64_t lo = a.n_min; lo <= a.n_max; lo += chunk) {
        const std::int64_t hi = std::min(a.n_max, lo + chunk - 1);
        jobs.push_back(std::async(std::launch::async, [&, lo, hi] {
            for (std::int64_t n = lo; n <= hi; ++n) {
                const SystemSpec s = single_class(n, a.code);
                const InterferenceModel m = worst_case_model(s);
                BerRow r;
                r.N = n;
                r.exact_v = exact_ber(s, 0, m, a.digits);
                r.approx_v = approx_ber_single(n, a.code);
                rows[static_cast<std::size_t>(n - a.n_min)] = r;
            }
        }));
    }
    for (auto& j : jobs) j.get();
    return rows;
}

struct DesignSweepArgs {
    std::vector<std::int64_t> Ns;
    std::vector<double> pe_ths;
    std::int64_t M = 1;
    std::string method = "brute";  // brute | heuristic | power
    std::int64_t L = 0;            // fixed length for the power problem
    SearchBounds bounds{};
    int digits = 80;
    unsigned threads = 0;
};

struct DesignRow {
    std::int64_t N = 0;
    double pe_th = 0.0;
    std::int64_t L = 0, W = 0, lambda = 0;
    std::uint64_t eval_count = 0;
    std::string method;
    bool feasible = false;
};

/// Run the selected optimizer over the N x pe_th grid, rows in sweep order.
inline std::vector<DesignRow> cmd_design(const DesignSweepArgs& a) {
    if (a.Ns.empty() || a.pe_ths.empty())
        throw std::invalid_argument("design sweep: empty sweep range");
    if (a.method != "brute" && a.method != "heuristic" && a.method != "power")
        throw std::invalid_argument("design sweep: method must be brute|heuristic|power");
    if (a.method == "power" && a.L < 1)
        throw std::invalid_argument("design sweep: power mode needs a fixed L");
    std::vector<std::pair<std::int64_t, double>> points;
    for (const std::int64_t N : a.Ns)
        for (const double pe : a.pe_ths) points.emplace_back(N, pe);

    std::vector<DesignRow> rows(points.size());
    auto solve = [&](std::size_t i) {
        const auto [N, pe] = points[i];
        DesignResult r;
        if (a.method == "brute")
            r = rate_optimize_brute(N, a.M, pe, a.bounds, a.digits, a.threads);
        else if (a.method == "heuristic")
            r = rate_optimize_heuristic(N, a.M, pe, a.digits);
        else
            r = power_optimize_brute(N, a.M, a.L, pe, a.bounds, a.digits);
        DesignRow row;
        row.N = N;
        row.pe_th = pe;
        row.L = r.L;
        row.W = r.W;
        row.lambda = r.lambda;
        row.eval_count = r.eval_count;
        row.method = a.method;
        row.feasible = r.feasible;
        rows[i] = std::move(row);
    };
    if (a.method == "brute") {
        // the box scan parallelizes internally; keep the points sequential
        for (std::size_t i = 0; i < points.size(); ++i) solve(i);
    } else {
        std::vector<std::future<void>> jobs;
        for (std::size_t i = 0; i < points.size(); ++i)
            jobs.push_back(std::async(std::launch::async, solve, i));
        for (auto& j : jobs) j.get();
    }
    return rows;
}

struct SimulateSweepArgs {
    AllocationMode mode = AllocationMode::rate;
    std::int64_t N = 60;
    std::int64_t M = 1;
    std::vector<double> pe_ths;
    std::vector<double> p_actives;
    std::int64_t intervals = 100000;
    std::uint64_t seed = 42;
    DesignMethod method = DesignMethod::heuristic;
    SearchBounds bounds{};
    int digits = 80;
    unsigned threads = 0;
};

struct SimulateRow {
    double p_active = 0.0;
    double pe_th = 0.0;
    double gain = 0.0;
    double stderr_ = 0.0;
    std::string variant;
};

/// Build one table per threshold, then sweep the activity grid. Power mode
/// emits the weighted (default) and unweighted variants side by side.
inline std::vector<SimulateRow> cmd_simulate(const SimulateSweepArgs& a) {
    if (a.pe_ths.empty() || a.p_actives.empty())
        throw std::invalid_argument("simulate sweep: empty sweep range");
    std::vector<SimulateRow> rows;
    for (const double pe : a.pe_ths) {
        const CodebookTable table =
            build_codebooks(a.mode, a.N, a.M, pe, a.method, a.bounds, a.digits, a.threads);
        std::vector<std::vector<SimulateRow>> buffered(a.p_actives.size());
        std::vector<std::future<void>> jobs;
        for (std::size_t i = 0; i < a.p_actives.size(); ++i)
            jobs.push_back(std::async(std::launch::async, [&, i] {
                SimConfig cfg;
                cfg.N = a.N;
                cfg.M = a.M;
                cfg.pe_th = pe;
                cfg.p_active = a.p_actives[i];
                cfg.intervals = a.intervals;
                cfg.seed = a.seed;
                cfg.mode = a.mode;
                const GainReport g = simulate_gain(cfg, table);
                if (a.mode == AllocationMode::rate) {
                    buffered[i] = {{cfg.p_active, pe, g.gain, g.stderr_, "rate"}};
                } else {
                    buffered[i] = {
                        {cfg.p_active, pe, g.gain, g.stderr_, "power-weighted"},
                        {cfg.p_active, pe, *g.unweighted_gain, *g.unweighted_stderr,
                         "power-unweighted"}};
                }
            }));
        for (auto& j : jobs) j.get();
        for (auto& b : buffered) rows.insert(rows.end(), b.begin(), b.end());
    }
    return rows;
}

struct CodebookRow {
    std::int64_t n = 0, L = 0, W = 0, lambda = 0;
};

inline std::vector<CodebookRow> codebook_rows(const CodebookTable& t) {
    std::vector<CodebookRow> rows;
    rows.reserve(t.entries.size());
    for (std::int64_t n = 1; n <= t.N; ++n) {
        const CodeBook& b = t.book(n);
        rows.push_back({n, b.L, b.W, b.lambda});
    }
    return rows;
}

}  // namespace ocdma
