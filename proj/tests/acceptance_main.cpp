// Reproduction gate. Each numbered criterion pins a quantitative result of
// the study this library implements; the suite prints one verdict line per
// criterion and exits nonzero if any lands out of band. Expect a few minutes
// of runtime: criteria 1-3 run the full bounded-box searches.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ocdma/ocdma.hpp"
#include "oracles.hpp"

using namespace ocdma;

namespace {

int failures = 0;

void verdict(int criterion, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

struct GridPoint {
    DesignResult brute, heur;
};

std::map<std::pair<std::int64_t, int>, GridPoint> grid;  // (N, pe exponent) -> results
const double pe_of[3] = {1e-5, 1e-7, 1e-9};

void run_grid() {
    const SearchBounds bounds{4000, 100, 5};
    for (int e = 0; e < 3; ++e)
        for (std::int64_t N = 10; N <= 60; N += 10) {
            GridPoint pt;
            pt.brute = rate_optimize_brute(N, 1, pe_of[e], bounds, 80, 0);
            pt.heur = rate_optimize_heuristic(N, 1, pe_of[e], 80);
            grid[{N, e}] = pt;
        }
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// --- criterion 1: full-load designs reproduce the published lengths --------
void criterion_design_lengths() {
    const std::int64_t expected[3] = {809, 1139, 1445};
    bool ok = true;
    std::string msg = "rate-optimized L at N=60:";
    for (int e = 0; e < 3; ++e) {
        const DesignResult& r = grid[{60, e}].brute;
        const double dev = std::abs(double(r.L - expected[e])) / double(expected[e]);
        ok = ok && r.feasible && dev <= 0.05;
        msg += fmt(" pe=%.0e -> L=%lld (published %lld, dev %.2f%%)", pe_of[e],
                      (long long)r.L, (long long)expected[e], 100.0 * dev);
        if (r.L != expected[e] && r.feasible) {
            // document the deviation: exact-rational bound at the published
            // length for the best candidates shows why it is infeasible here
            std::printf("    note: at L=%lld the tightest candidates give\n",
                        (long long)expected[e]);
            const SearchBounds bounds{4000, 100, 5};
            double best = 1.0;
            std::int64_t bw = 0, bl = 0;
            for (std::int64_t W = 1; W <= bounds.W_max; ++W)
                for (std::int64_t lam = 1; lam <= std::min(bounds.lambda_max, W); ++lam) {
                    const CodeParams p{1, expected[e], W, lam};
                    if (W > expected[e] || W * W > 2 * lam * expected[e]) continue;
                    if (!within_johnson_bound(60, p)) continue;
                    const double v =
                        oracle::to_double(oracle::gooc_bound_rational(60, p));
                    if (v < best) {
                        best = v;
                        bw = W;
                        bl = lam;
                    }
                }
            std::printf("    exact-rational bound min = %.6e at (W=%lld, lambda=%lld), "
                        "threshold %.0e\n",
                        best, (long long)bw, (long long)bl, pe_of[e]);
        }
    }
    verdict(1, ok, msg);
}

// --- criterion 2: heuristic parity across the grid -------------------------
void criterion_heuristic_parity() {
    bool ok = true;
    std::string worst;
    for (const auto& [key, pt] : grid) {
        const bool match = pt.heur.feasible && pt.brute.feasible &&
                           pt.heur.W == pt.brute.W && pt.heur.lambda == pt.brute.lambda &&
                           pt.heur.L >= pt.brute.L &&
                           double(pt.heur.L) <= 1.02 * double(pt.brute.L);
        if (!match) {
            ok = false;
            worst += fmt(" N=%lld pe=%.0e: brute (%lld,%lld,%lld) vs heuristic (%lld,%lld,%lld);",
                         (long long)key.first, pe_of[key.second], (long long)pt.brute.L,
                         (long long)pt.brute.W, (long long)pt.brute.lambda,
                         (long long)pt.heur.L, (long long)pt.heur.W,
                         (long long)pt.heur.lambda);
        }
    }
    // the optimum correlation is mostly 2 or 3 once the system is loaded
    int in_range = 0, loaded = 0;
    bool lam_sane = true;
    for (const auto& [key, pt] : grid) {
        if (key.first < 20) continue;
        ++loaded;
        if (pt.brute.lambda == 2 || pt.brute.lambda == 3) ++in_range;
        lam_sane = lam_sane && pt.brute.lambda >= 2 && pt.brute.lambda <= 4;
    }
    const bool mainly = lam_sane && 5 * in_range >= 4 * loaded;
    ok = ok && mainly;
    verdict(2, ok,
            ok ? fmt("heuristic W and lambda equal brute force at all 18 grid points, L "
                     "within 2%%; optimal lambda in {2,3} at %d/%d loaded points",
                     in_range, loaded)
               : "mismatches:" + worst);
}

// --- criterion 3: candidate-evaluation gain --------------------------------
void criterion_complexity_gain() {
    const GridPoint& pt = grid[{60, 1}];  // pe = 1e-7
    const double gain = double(pt.brute.eval_count) / double(pt.heur.eval_count);
    verdict(3, gain >= 1e4,
            fmt("eval ratio at N=60, pe=1e-7, bounds (4000,100,5): %llu / %llu = %.0f "
                "(needs >= 1e4)",
                (unsigned long long)pt.brute.eval_count,
                (unsigned long long)pt.heur.eval_count, gain));
}

// --- criterion 4: adaptive reallocation gains ------------------------------
void criterion_adaptive_gains() {
    bool ok = true;
    std::string msg;

    std::map<int, CodebookTable> rate_tables, power_tables;
    for (int e = 0; e < 3; ++e) {
        rate_tables.emplace(e, build_codebooks(AllocationMode::rate, 60, 1, pe_of[e]));
        power_tables.emplace(e, build_codebooks(AllocationMode::power, 60, 1, pe_of[e]));
    }
    auto run = [&](const CodebookTable& t, double p) {
        SimConfig cfg;
        cfg.N = 60;
        cfg.pe_th = t.pe_th;
        cfg.p_active = p;
        cfg.intervals = 100000;
        cfg.seed = 42;
        cfg.mode = t.mode;
        return simulate_gain(cfg, t);
    };

    // the tables themselves carry the published full-load design
    ok = ok && rate_tables.at(1).book(60).L == 1139;
    ok = ok && power_tables.at(1).book(60).L == 1139 &&
         power_tables.at(1).book(60).W == rate_tables.at(1).book(60).W;
    msg += fmt("full-load books: rate (L=%lld,W=%lld), power (L=%lld,W=%lld); ",
               (long long)rate_tables.at(1).book(60).L,
               (long long)rate_tables.at(1).book(60).W,
               (long long)power_tables.at(1).book(60).L,
               (long long)power_tables.at(1).book(60).W);

    const GainReport rate_mid = run(rate_tables.at(1), 0.5);
    const GainReport pow_mid = run(power_tables.at(1), 0.5);
    const bool rate_band = std::abs(rate_mid.gain - 2.25) <= 0.20;
    const bool pow_band = std::abs(pow_mid.gain - 0.27) <= 0.05;
    const bool pow_unw_band = std::abs(*pow_mid.unweighted_gain - 0.27) <= 0.05;
    ok = ok && rate_band && pow_band;
    msg += fmt("G_rat(0.5,1e-7) = %.3f+-%.3f (target 2.25+-0.20); ", rate_mid.gain,
                  rate_mid.stderr_);
    msg += fmt("G_pow weighted = %.3f+-%.3f (target 0.27+-0.05; unweighted %.3f %s); ",
                  pow_mid.gain, pow_mid.stderr_, *pow_mid.unweighted_gain,
                  pow_unw_band ? "also in band" : "out of band");

    // monotone in the activity probability, both modes, pe = 1e-7
    double prev_rate = std::numeric_limits<double>::infinity(), prev_pow = 0.0;
    bool mono = true;
    for (int i = 1; i <= 10; ++i) {
        const double p = 0.1 * i;
        const double gr = run(rate_tables.at(1), p).gain;
        const double gp = run(power_tables.at(1), p).gain;
        mono = mono && gr <= prev_rate + 1e-12 && gr >= 1.0 && gp >= prev_pow - 1e-12 &&
               gp <= 1.0 + 1e-12;
        prev_rate = gr;
        prev_pow = gp;
    }
    ok = ok && mono;
    msg += fmt("activity monotonicity %s; ", mono ? "holds" : "violated");

    // tighter thresholds: more rate gain, less power saving
    const double r5 = run(rate_tables.at(0), 0.5).gain;
    const double r7 = rate_mid.gain;
    const double r9 = run(rate_tables.at(2), 0.5).gain;
    const double p5 = run(power_tables.at(0), 0.5).gain;
    const double p7 = pow_mid.gain;
    const double p9 = run(power_tables.at(2), 0.5).gain;
    const bool order = r5 < r7 && r7 < r9 && p5 < p7 && p7 < p9;
    ok = ok && order;
    msg += fmt("threshold ordering %s (G_rat %.2f/%.2f/%.2f, G_pow %.2f/%.2f/%.2f)",
                  order ? "holds" : "violated", r5, r7, r9, p5, p7, p9);
    verdict(4, ok, msg);
}

// --- criterion 5: closed-form estimate tracks the exact bound --------------
void criterion_estimate_fidelity() {
    const struct {
        std::int64_t lam, W, L;
    } systems[] = {{1, 3, 10000}, {2, 8, 2000}, {3, 9, 8000}};
    bool ok = true;
    std::string msg;
    for (const auto& sys : systems) {
        double worst = 0.0;
        std::int64_t worst_N = 0, points = 0;
        for (std::int64_t N = 2;; ++N) {
            const CodeParams p{1, sys.L, sys.W, sys.lam};
            const auto spec = single_class(N, p);
            const double e = exact_ber(spec, 0, worst_case_model(spec), 80);
            if (e > 1e-2) break;
            if (e < 1e-9) continue;
            ++points;
            const double gap = std::abs(std::log10(approx_ber_single(N, p)) - std::log10(e));
            if (gap > worst) {
                worst = gap;
                worst_N = N;
            }
        }
        ok = ok && worst <= 1.0 && points > 100;
        msg += fmt("lambda=%lld (L=%lld,W=%lld): %lld points, worst %.3f dec at N=%lld; ",
                      (long long)sys.lam, (long long)sys.L, (long long)sys.W,
                      (long long)points, worst, (long long)worst_N);
    }
    verdict(5, ok, msg + "(band: exact in [1e-9,1e-2], tolerance 1.0 decade)");
}

// --- criterion 6: engine against the exact-rational oracle -----------------
void criterion_oracle_equivalence() {
    std::mt19937_64 rng(1234);
    double worst = 0.0;
    bool ok = true;
    // highest correlation whose worst-case bracket stays inside [0,1] at
    // this weight (the model's validity domain)
    const auto lam_roof = [](std::int64_t W) -> std::int64_t {
        return W >= 9 ? 3 : W >= 3 ? 2 : 1;
    };
    for (int it = 0; it < 200; ++it) {
        std::uniform_int_distribution<std::int64_t> dk(1, 2), dn(1, 20);
        const std::int64_t K = dk(rng);
        SystemSpec s;
        s.K = K;
        s.M = std::uniform_int_distribution<std::int64_t>(1, 2)(rng);
        s.Gamma.assign(std::size_t(K), std::vector<std::int64_t>(std::size_t(K), 1));
        s.C.assign(std::size_t(K), std::vector<std::int64_t>(std::size_t(K), 1));
        for (std::int64_t k = 0; k < K; ++k) {
            std::uniform_int_distribution<std::int64_t> dw(1, 10);
            const std::int64_t W = dw(rng);
            std::uniform_int_distribution<std::int64_t> dl(
                std::max<std::int64_t>((W + s.M - 1) / s.M, 30), 500);
            s.N.push_back(dn(rng));
            s.W.push_back(W);
            s.L.push_back(dl(rng));
            s.B.push_back(1);
        }
        for (std::int64_t a = 0; a < K; ++a)
            for (std::int64_t b = 0; b < K; ++b)
                s.Gamma[std::size_t(a)][std::size_t(b)] =
                    std::uniform_int_distribution<std::int64_t>(
                        1, lam_roof(s.W[std::size_t(a)]))(rng);
        const auto m = worst_case_model(s);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(0, std::size_t(K) - 1)(rng);
        if (s.N[k] < 1) continue;
        Rational want = oracle::exact_ber_rational(s, k, m);
        if (want < 0) want = 0;
        if (want > Rational(1, 2)) want = Rational(1, 2);
        const double gap = oracle::relative_gap(Real240(exact_ber(s, k, m, 80)), want);
        // the returned double itself carries ~1e-16 quantization
        if (gap > worst) worst = gap;
        ok = ok && gap <= 1e-15;
    }
    std::string msg = fmt("200 random systems, exact engine at 80 digits vs exact "
                             "rationals: worst relative gap %.2e (needs <= 1e-15); ",
                             worst);

    // bracket polynomials match the closed coefficient forms, W <= 8
    bool poly_ok = true;
    for (std::int64_t W = 2; W <= 8 && poly_ok; ++W)
        for (std::int64_t lam = 1; lam <= std::min<std::int64_t>(5, W) && poly_ok; ++lam) {
            const auto s = single_class(4, {1, 101, W, lam});
            const auto m = worst_case_model(s);
            std::vector<Rational> samples;
            for (std::int64_t i = 0; i <= lam; ++i)
                samples.push_back(detail::bracket(s, m, 0, 0, i));
            poly_ok = oracle::interpolate_coeffs(samples) ==
                      oracle::self_poly_coeffs(W, lam, 1, 101);
        }
    for (std::int64_t W1 = 2; W1 <= 8 && poly_ok; ++W1)
        for (std::int64_t lam = 1; lam <= std::min<std::int64_t>(3, W1) && poly_ok; ++lam) {
            SystemSpec s;
            s.K = 2;
            s.M = 1;
            s.N = {3, 5};
            s.L = {101, 157};
            s.W = {W1, 6};
            s.Gamma = {{std::min<std::int64_t>(2, W1), lam}, {lam, 2}};
            s.C = {{1, 1}, {1, 1}};
            s.B = {1, 1};
            const auto m = worst_case_model(s);
            std::vector<Rational> samples;
            for (std::int64_t i = 0; i <= lam; ++i)
                samples.push_back(detail::bracket(s, m, 0, 1, i));
            poly_ok = oracle::interpolate_coeffs(samples) ==
                      oracle::cross_poly_coeffs(W1, 6, lam, 1, 157);
        }
    // classic AND-gate form: identical at unit correlation, and reproduced
    // by the engine under the matched hit model at every correlation
    bool gooc_ok = true;
    for (std::int64_t W = 2; W <= 8 && gooc_ok; ++W) {
        gooc_ok = oracle::self_poly_coeffs(W, 1, 1, 101) == oracle::gooc_poly_coeffs(W, 1, 1, 101);
        for (std::int64_t lam = 1; lam <= std::min<std::int64_t>(3, W) && gooc_ok; ++lam) {
            const CodeParams p{1, 101, W, lam};
            const auto s = single_class(6, p);
            const Real240 via_engine = exact_ber<Real240>(s, 0, gooc_worst_case_model(s));
            gooc_ok = oracle::relative_gap(via_engine, oracle::gooc_bound_rational(6, p)) < 1e-60;
        }
    }
    ok = ok && poly_ok && gooc_ok;
    msg += fmt("bracket polynomials %s; AND-gate bound through the engine %s",
                  poly_ok ? "coefficient-exact" : "MISMATCH",
                  gooc_ok ? "reproduced" : "MISMATCH");
    verdict(6, ok, msg);
}

// --- criterion 7: trivial anchors -------------------------------------------
void criterion_trivial_anchors() {
    bool ok = true;
    const auto s1 = single_class(1, {1, 500, 7, 2});
    ok = ok && exact_ber(s1, 0, worst_case_model(s1), 80) == 0.0;

    const auto bd = rate_optimize_brute(1, 1, 1e-9, {50, 8, 3});
    const auto hd = rate_optimize_heuristic(1, 1, 1e-9);
    ok = ok && bd.feasible && bd.L == 1 && bd.W == 1 && bd.lambda == 1;
    ok = ok && hd.feasible && hd.L == 1 && hd.W == 1 && hd.lambda == 1;

    const auto rt = build_codebooks(AllocationMode::rate, 12, 1, 1e-4);
    const auto pt = build_codebooks(AllocationMode::power, 12, 1, 1e-4);
    SimConfig cfg;
    cfg.N = 12;
    cfg.pe_th = 1e-4;
    cfg.p_active = 1.0;
    cfg.intervals = 1000;
    cfg.mode = AllocationMode::rate;
    ok = ok && simulate_gain(cfg, rt).gain == 1.0;
    cfg.mode = AllocationMode::power;
    const auto gp = simulate_gain(cfg, pt);
    ok = ok && gp.gain == 1.0 && *gp.unweighted_gain == 1.0;

    std::mt19937_64 rng(77);
    bool reduce = true;
    for (int it = 0; it < 1000 && reduce; ++it) {
        std::uniform_int_distribution<std::int64_t> dlam(1, 4), dn(1, 300);
        const std::int64_t lam = dlam(rng);
        std::uniform_int_distribution<std::int64_t> dw(lam, 25);
        const std::int64_t W = dw(rng);
        std::uniform_int_distribution<std::int64_t> dl(W, 3000);
        const CodeParams p{1, dl(rng), W, lam};
        const std::int64_t N = dn(rng);
        reduce = approx_ber(single_class(N, p), 0) == approx_ber_single(N, p);
    }
    ok = ok && reduce;
    verdict(7, ok,
            fmt("single-user exact rate 0 and (1,1,1) designs %s; full-activity gains exactly "
                "one %s; one-class estimate reduction bit-identical on 1000 draws %s",
                bd.L == 1 && hd.L == 1 ? "hold" : "FAIL", "hold", reduce ? "holds" : "FAIL"));
}

}  // namespace

int main() {
    std::printf("reproduction suite: 60-user PON designs, bounds (4000,100,5), seed 42\n");
    run_grid();
    criterion_design_lengths();
    criterion_heuristic_parity();
    criterion_complexity_gain();
    criterion_adaptive_gains();
    criterion_estimate_fidelity();
    criterion_oracle_equivalence();
    criterion_trivial_anchors();
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
