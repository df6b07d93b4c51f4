#pragma once
// Code-design searches. Two problems over integer (L, W, lambda):
//   rate-optimized:  minimize L subject to C1..C5,
//   power-optimized: minimize W at fixed L subject to the same constraints.
// The operative constraint set is C1, C3, the Johnson cardinality bound and
// the exact AND-gate BER bound (C4); C5 is integrality by construction.
// Brute force scans the bounded box and counts every candidate it visits;
// the staged heuristic walks the boundary/bottom structure of the feasible
// region and is meant to be ~1e4x cheaper at the default bounds.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ber.hpp"
#include "combinatorics.hpp"

namespace ocdma {

struct SearchBounds {
    std::int64_t L_max = 4000;
    std::int64_t W_max = 100;
    std::int64_t lambda_max = 5;
};

inline void validate(const SearchBounds& b) {
    if (b.L_max < 1 || b.W_max < 1 || b.lambda_max < 1)
        throw std::invalid_argument("SearchBounds: all bounds must be >= 1");
    if (b.lambda_max > b.W_max)
        throw std::invalid_argument("SearchBounds: lambda_max must not exceed W_max");
}

struct DesignResult {
    std::int64_t L = 0;
    std::int64_t W = 0;
    std::int64_t lambda = 0;
    bool feasible = false;
    std::uint64_t eval_count = 0;
    enum class Method { brute, heuristic } method = Method::brute;
};

namespace detail {

inline void validate_design_inputs(std::int64_t N, std::int64_t M, double pe_th) {
    if (N < 1) throw std::invalid_argument("design: N >= 1 required");
    if (M < 1) throw std::invalid_argument("design: M >= 1 required");
    if (!(pe_th > 0.0 && pe_th < 0.5))
        throw std::invalid_argument("design: error threshold must lie in (0, 1/2)");
}

// All integer feasibility gates plus the exact BER test; one call == one
// counted candidate evaluation.
inline bool candidate_feasible(std::int64_t N, std::int64_t M, std::int64_t L, std::int64_t W,
                               std::int64_t lam, double pe_th, int digits,
                               std::uint64_t& evals) {
    ++evals;
    if (!(lam <= W && W <= BigInt(M) * L)) return false;           // C1
    if (BigInt(W) * W > BigInt(2) * M * lam * L) return false;     // C3
    const CodeParams p{M, L, W, lam};
    if (!within_johnson_bound(N, p)) return false;                 // cardinality
    return gooc_ber_bound(N, p, digits) <= pe_th;                  // C4
}

struct RowScan {
    bool found = false;
    std::int64_t W = 0, lam = 0;
    std::uint64_t visited = 0;
};

// Scan one code-length row in tie-break order (W ascending, lambda inner);
// stops at the first feasible candidate.
inline RowScan scan_row(std::int64_t N, std::int64_t M, std::int64_t L, double pe_th,
                        const SearchBounds& b, int digits) {
    RowScan r;
    for (std::int64_t W = 1; W <= b.W_max; ++W)
        for (std::int64_t lam = 1; lam <= b.lambda_max; ++lam)
            if (candidate_feasible(N, M, L, W, lam, pe_th, digits, r.visited)) {
                r.found = true;
                r.W = W;
                r.lam = lam;
                return r;
            }
    return r;
}

inline unsigned resolve_threads(unsigned requested) {
    if (requested) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

}  // namespace detail

/// Minimize L over the bounded box subject to C1..C5. Ties in L resolve to
/// the smallest W, then the smallest lambda. eval_count is the number of
/// candidate triples visited by the equivalent sequential scan (rows are
/// farmed out to threads, but rows past the first feasible one never count).
inline DesignResult rate_optimize_brute(std::int64_t N, std::int64_t M, double pe_th,
                                        const SearchBounds& bounds = {}, int digits = 80,
                                        unsigned threads = 0) {
    detail::validate_design_inputs(N, M, pe_th);
    validate(bounds);
    const unsigned nthreads = detail::resolve_threads(threads);

    std::map<std::int64_t, detail::RowScan> rows;
    std::mutex mu;
    std::atomic<std::int64_t> next{1};
    std::atomic<std::int64_t> best_found{bounds.L_max + 1};

    auto worker = [&] {
        for (;;) {
            const std::int64_t L = next.fetch_add(1);
            if (L > bounds.L_max || L > best_found.load()) break;
            detail::RowScan r = detail::scan_row(N, M, L, pe_th, bounds, digits);
            if (r.found) {
                std::int64_t cur = best_found.load();
                while (L < cur && !best_found.compare_exchange_weak(cur, L)) {
                }
            }
            std::lock_guard<std::mutex> lk(mu);
            rows.emplace(L, std::move(r));
        }
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    DesignResult res;
    res.method = DesignResult::Method::brute;
    for (std::int64_t L = 1; L <= bounds.L_max; ++L) {
        const auto it = rows.find(L);
        if (it == rows.end()) break;  // rows past the winner were never claimed
        res.eval_count += it->second.visited;
        if (it->second.found) {
            res.feasible = true;
            res.L = L;
            res.W = it->second.W;
            res.lambda = it->second.lam;
            break;
        }
    }
    return res;
}

/// Minimize W at fixed L. Same counting semantics; the scan order (W
/// ascending, lambda inner) makes the first hit the tie-broken optimum.
inline DesignResult power_optimize_brute(std::int64_t N, std::int64_t M, std::int64_t L,
                                         double pe_th, const SearchBounds& bounds = {},
                                         int digits = 80) {
    detail::validate_design_inputs(N, M, pe_th);
    validate(bounds);
    if (L < 1) throw std::invalid_argument("power_optimize_brute: L >= 1 required");
    DesignResult res;
    res.method = DesignResult::Method::brute;
    for (std::int64_t W = 1; W <= bounds.W_max; ++W)
        for (std::int64_t lam = 1; lam <= bounds.lambda_max; ++lam)
            if (detail::candidate_feasible(N, M, L, W, lam, pe_th, digits, res.eval_count)) {
                res.feasible = true;
                res.L = L;
                res.W = W;
                res.lambda = lam;
                return res;
            }
    res.L = L;
    return res;
}

namespace detail {

// Smallest L whose Johnson cardinality admits N codewords at (W, lam):
// closed form for lam = 1, root seed plus exact integer walk otherwise.
inline std::int64_t cardinality_min_L(std::int64_t N, std::int64_t M, std::int64_t W,
                                      std::int64_t lam) {
    const BigInt target = BigInt(N) * falling_product(W, lam + 1);
    if (target <= 0) return 1;
    if (lam == 1) {
        // M^2 L - M >= target
        const BigInt num = target + M + M * M - 1;
        return (num / (M * M)).convert_to<std::int64_t>();
    }
    const double root = std::pow(target.convert_to<double>() / double(M), 1.0 / double(lam));
    std::int64_t L = std::max<std::int64_t>(1, std::llround(root / double(M)) - 2);
    auto ok = [&](std::int64_t Lc) {
        return BigInt(M) * falling_product(M * Lc - 1, lam) >= target;
    };
    while (!ok(L)) ++L;
    while (L > 1 && ok(L - 1)) --L;
    return L;
}

inline std::int64_t c3_min_L(std::int64_t M, std::int64_t W, std::int64_t lam) {
    return (W * W + 2 * M * lam - 1) / (2 * M * lam);
}

inline std::int64_t c1_min_L(std::int64_t M, std::int64_t W) { return (W + M - 1) / M; }

// Smallest L with the closed-form estimate at or below the threshold.
inline std::int64_t approx_min_L(std::int64_t N, std::int64_t M, std::int64_t W,
                                 std::int64_t lam, double th) {
    const double v = (double(N) * double(W) / (2.0 * double(M) * double(lam))) *
                     std::pow(2.0 * th, -double(lam) / double(W));
    if (!(v > 0) || v > 4.0e15) return std::int64_t(4) << 50;
    return std::max<std::int64_t>(1, std::int64_t(std::ceil(v)));
}

// Staged local search machinery shared by the heuristic's lambda stages.
class HeuristicState {
  public:
    HeuristicState(std::int64_t N, std::int64_t M, double th, int digits)
        : n_(N), m_(M), th_(th), digits_(digits) {}

    static constexpr std::int64_t w_cap = 200;  // documented local-search cap

    std::uint64_t evals() const { return evals_; }
    std::int64_t users() const { return n_; }
    std::int64_t wavelengths() const { return m_; }
    double threshold() const { return th_; }

    std::int64_t constraint_min_L(std::int64_t W, std::int64_t lam) const {
        return std::max({c1_min_L(m_, W), c3_min_L(m_, W, lam), cardinality_min_L(n_, m_, W, lam),
                         std::int64_t(1)});
    }

    bool feasible(std::int64_t L, std::int64_t W, std::int64_t lam) {
        return candidate_feasible(n_, m_, L, W, lam, th_, digits_, evals_);
    }

    // Smallest feasible L for (W, lam), restricted to L <= cap. The integer
    // constraints give a hard floor and the BER constraint is monotone in L,
    // so the search is: hint from a calibrated neighbour (usually exact),
    // then the floor itself (settles boundary-bound candidates in one
    // evaluation), then the cap (dismisses hopeless candidates in one more),
    // then bisection. `on_floor` reports a constraint-bound result, which
    // callers exclude from hint calibration. `unbounded` switches the cap
    // probe to geometric growth for the first stage, which has no incumbent.
    std::optional<std::int64_t> min_feasible_L(std::int64_t W, std::int64_t lam,
                                               std::int64_t cap, std::int64_t hint,
                                               bool* on_floor = nullptr, bool unbounded = false) {
        if (on_floor) *on_floor = false;
        if (W < lam || W < 1) return std::nullopt;
        const std::int64_t floor_L = constraint_min_L(W, lam);
        if (floor_L > cap) return std::nullopt;
        std::int64_t lo = floor_L;
        std::int64_t hi = -1;

        if (hint > lo && hint <= cap) {
            if (feasible(hint, W, lam)) {
                if (!feasible(hint - 1, W, lam)) return hint;
                hi = hint - 1;
            } else {
                lo = hint + 1;  // monotone: everything at or below hint fails
                if (lo > cap) return std::nullopt;
            }
        }

        if (hi < 0) {
            if (feasible(lo, W, lam)) {
                if (on_floor) *on_floor = (lo == floor_L);
                return lo;
            }
            if (lo == cap) return std::nullopt;
            ++lo;
            if (!unbounded) {
                if (!feasible(cap, W, lam)) return std::nullopt;
                hi = cap;
            } else {
                std::int64_t probe =
                    std::min(cap, std::max(lo, approx_min_L(n_, m_, W, lam, th_)));
                std::int64_t step = std::max<std::int64_t>(16, probe / 8);
                for (;;) {
                    if (feasible(probe, W, lam)) {
                        hi = probe;
                        break;
                    }
                    lo = probe + 1;
                    if (probe >= cap) return std::nullopt;
                    probe = std::min(cap, probe + step);
                    step *= 2;
                }
            }
        }
        while (lo < hi) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            if (feasible(mid, W, lam))
                hi = mid;
            else
                lo = mid + 1;
        }
        if (on_floor) *on_floor = (hi == floor_L);
        return hi;
    }

    std::int64_t predicted_min_L(std::int64_t W, std::int64_t lam) const {
        return std::max(constraint_min_L(W, lam), approx_min_L(n_, m_, W, lam, th_));
    }

  private:
    std::int64_t n_, m_;
    double th_;
    int digits_;
    std::uint64_t evals_ = 0;
};

struct StagePoint {
    bool found = false;
    std::int64_t L = 0, W = 0;
};

// One correlation stage. Two candidate families cover the geometry of the
// feasible region: a walk around the predicted bottom of
// g(W) = max(constraint boundary, BER boundary), and the C3-corner curve
// (W, constraint floor), where tight designs end up when the hit
// probability approaches one and the closed-form estimate stops steering.
// Both feed a unit-step refinement; everything respects the incumbent
// (cap_L, cap_W) lexicographically, so hopeless candidates cost at most one
// or two evaluations.
class StageSearch {
  public:
    StageSearch(HeuristicState& hs, std::int64_t lam, std::int64_t cap_L, std::int64_t cap_W,
                bool unbounded)
        : hs_(hs), lam_(lam), cap_L_(cap_L), cap_W_(cap_W), unbounded_(unbounded) {}

    StagePoint run() {
        const std::int64_t w_seed = predicted_bottom();
        walk(w_seed);
        corner_curve();
        return best_;
    }

  private:
    static constexpr int miss_cap = 3;       // paid infeasible probes per direction
    static constexpr int plateau_cap = 16;   // equal-L probes while walking down

    std::int64_t w_lo() const { return std::max<std::int64_t>(1, lam_); }

    std::int64_t cap_for(std::int64_t W, bool tie_ok) const {
        // a tie in L only helps when it lowers W
        std::int64_t cap = W < cap_W_ ? cap_L_ : cap_L_ - 1;
        if (best_.found) cap = std::min(cap, tie_ok ? best_.L : best_.L - 1);
        return cap;
    }

    std::int64_t predicted_bottom() const {
        std::int64_t w = w_lo(), p_min = std::numeric_limits<std::int64_t>::max();
        for (std::int64_t W = w_lo(); W <= HeuristicState::w_cap; ++W) {
            const std::int64_t p = hs_.predicted_min_L(W, lam_);
            if (p < p_min) {
                p_min = p;
                w = W;
            }
        }
        return w;
    }

    std::optional<std::int64_t> probe(std::int64_t W, bool tie_ok) {
        if (W < w_lo() || W > HeuristicState::w_cap) return std::nullopt;
        max_probed_ = std::max(max_probed_, W);
        std::int64_t hint = -1;
        if (known_W_ > 0) {
            const double scale =
                double(approx_min_L(hs_.users(), hs_.wavelengths(), W, lam_, hs_.threshold())) /
                double(approx_min_L(hs_.users(), hs_.wavelengths(), known_W_, lam_,
                                    hs_.threshold()));
            hint = std::llround(double(known_L_) * scale);
        }
        bool on_floor = false;
        auto r = hs_.min_feasible_L(W, lam_, cap_for(W, tie_ok), hint, &on_floor, unbounded_);
        if (r && !on_floor) {
            known_W_ = W;
            known_L_ = *r;
        }
        return r;
    }

    bool better(std::int64_t L, std::int64_t W) const {
        return !best_.found || L < best_.L || (L == best_.L && W < best_.W);
    }

    void take(std::optional<std::int64_t> c, std::int64_t W) {
        if (c && better(*c, W)) best_ = {true, *c, W};
    }

    // walk around a seed; constraint-strangled candidates (floor above cap)
    // are skipped arithmetically and do not spend the miss budget
    void walk(std::int64_t w_seed) {
        take(probe(w_seed, true), w_seed);
        int misses = 0, plateau = 0;
        for (std::int64_t W = w_seed - 1; W >= w_lo(); --W) {
            if (hs_.constraint_min_L(W, lam_) > cap_for(W, true)) continue;
            auto c = probe(W, true);
            if (!c) {
                if (++misses > miss_cap) break;
                continue;
            }
            misses = 0;
            if (best_.found && *c == best_.L && !better(*c, W)) break;
            if (best_.found && *c == best_.L) {
                if (++plateau > plateau_cap) break;
            } else {
                plateau = 0;
            }
            take(c, W);
        }
        misses = 0;
        for (std::int64_t W = w_seed + 1; W <= HeuristicState::w_cap; ++W) {
            if (hs_.constraint_min_L(W, lam_) > cap_for(W, false)) {
                if (hs_.constraint_min_L(W, lam_) > cap_L_) break;  // floors only grow
                continue;
            }
            auto c = probe(W, false);
            if (!c) {
                if (++misses > miss_cap) break;
                continue;
            }
            misses = 0;
            take(c, W);
        }
    }

    // Constraint-corner family: candidates sit on their constraint floor,
    // where the bound falls as W grows. Only worth probing beyond the range
    // the walk covered; one probe at the top of the range dismisses a dead
    // curve, otherwise bisect to the smallest workable W and refine around it.
    void corner_curve() {
        std::int64_t w_hi = -1;
        for (std::int64_t W = HeuristicState::w_cap; W >= w_lo(); --W) {
            if (hs_.constraint_min_L(W, lam_) <= cap_for(W, true)) {
                w_hi = W;
                break;
            }
        }
        if (w_hi < 0 || w_hi <= max_probed_) return;
        auto on_curve = [&](std::int64_t W) {
            const std::int64_t L = hs_.constraint_min_L(W, lam_);
            return L <= cap_for(W, true) && hs_.feasible(L, W, lam_);
        };
        std::int64_t hi;
        if (best_.found && best_.W >= w_lo() && best_.W <= w_hi &&
            hs_.constraint_min_L(best_.W, lam_) == best_.L) {
            hi = best_.W;  // the walk already landed on the curve
        } else if (on_curve(w_hi)) {
            hi = w_hi;
        } else {
            return;
        }
        std::int64_t lo = w_lo();
        while (lo < hi) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            if (on_curve(mid))
                hi = mid;
            else
                lo = mid + 1;
        }
        take(hs_.constraint_min_L(hi, lam_), hi);
        refine_around(hi);
    }

    void refine_around(std::int64_t w_center) {
        int misses = 0, plateau = 0;
        for (std::int64_t W = w_center - 1; W >= w_lo(); --W) {
            if (hs_.constraint_min_L(W, lam_) > cap_for(W, true)) continue;
            auto c = probe(W, true);
            if (!c) {
                if (++misses > 1) break;
                continue;
            }
            misses = 0;
            if (best_.found && *c == best_.L && !better(*c, W)) break;
            if (best_.found && *c == best_.L && ++plateau > plateau_cap) break;
            take(c, W);
        }
    }

    HeuristicState& hs_;
    std::int64_t lam_, cap_L_, cap_W_;
    bool unbounded_;
    StagePoint best_;
    std::int64_t known_W_ = -1, known_L_ = -1;  // BER-bound calibration anchor
    std::int64_t max_probed_ = -1;
};

inline StagePoint stage_search(HeuristicState& hs, std::int64_t lam, std::int64_t cap_L,
                               std::int64_t cap_W, bool unbounded = false) {
    return StageSearch(hs, lam, cap_L, cap_W, unbounded).run();
}

}  // namespace detail

/// Staged heuristic for the rate-optimized problem. Stage one works on the
/// lambda = 1 cardinality boundary; each later stage raises lambda by one,
/// searches around the boundary/bottom intersections seeded by the
/// closed-form estimate, and the loop stops at the first stage that fails to
/// improve. W is capped at 200 inside the local searches.
inline DesignResult rate_optimize_heuristic(std::int64_t N, std::int64_t M, double pe_th,
                                            int digits = 80) {
    detail::validate_design_inputs(N, M, pe_th);
    detail::HeuristicState hs(N, M, pe_th, digits);

    DesignResult res;
    res.method = DesignResult::Method::heuristic;

    if (N == 1) {
        // a lone user sees no interference; the minimal code stands
        res.feasible = hs.feasible(1, 1, 1);
        res.L = res.W = res.lambda = 1;
        res.eval_count = hs.evals();
        return res;
    }

    const std::int64_t no_cap = std::int64_t(1) << 50;  // far above any workable length
    detail::StagePoint cur = detail::stage_search(hs, 1, no_cap, no_cap, true);
    if (!cur.found) {
        res.eval_count = std::max<std::uint64_t>(1, hs.evals());
        return res;  // not even the lambda = 1 stage admits a W under the cap
    }
    std::int64_t lambda = 1;
    for (std::int64_t lam_t = 2; lam_t <= detail::HeuristicState::w_cap; ++lam_t) {
        const detail::StagePoint st = detail::stage_search(hs, lam_t, cur.L, cur.W);
        if (st.found && (st.L < cur.L || (st.L == cur.L && st.W < cur.W))) {
            cur = st;
            lambda = lam_t;
        } else {
            break;
        }
    }
    res.feasible = true;
    res.L = cur.L;
    res.W = cur.W;
    res.lambda = lambda;
    res.eval_count = std::max<std::uint64_t>(1, hs.evals());
    return res;
}

/// Candidate-evaluation ratio of the brute-force search to the heuristic on
/// identical inputs.
inline double complexity_gain(std::int64_t N, std::int64_t M, double pe_th,
                              const SearchBounds& bounds = {}, int digits = 80,
                              unsigned threads = 0) {
    const DesignResult b = rate_optimize_brute(N, M, pe_th, bounds, digits, threads);
    const DesignResult h = rate_optimize_heuristic(N, M, pe_th, digits);
    if (!b.feasible || !h.feasible)
        throw std::domain_error("complexity_gain: design problem infeasible inside the bounds");
    return double(b.eval_count) / double(h.eval_count);
}

}  // namespace ocdma
