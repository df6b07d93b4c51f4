#pragma once
// Exact combinatorial primitives and the code-design feasibility predicates
// shared by the BER engines and the design optimizers. Everything here is
// integer-exact; no floating point.

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace ocdma {

using BigInt = boost::multiprecision::cpp_int;

/// Geometry of one code class: M wavelengths, L chips per bit, W pulses per
/// codeword, maximum cross-correlation lambda.
struct CodeParams {
    std::int64_t M = 1;
    std::int64_t L = 1;
    std::int64_t W = 1;
    std::int64_t lambda = 1;
};

inline void validate(const CodeParams& p) {
    if (p.M < 1 || p.L < 1 || p.W < 1 || p.lambda < 1)
        throw std::invalid_argument("CodeParams: all fields must be positive integers");
    if (!(p.lambda <= p.W && p.W <= p.M * p.L))
        throw std::invalid_argument("CodeParams: need lambda <= W <= M*L");
}

/// C(n, k) with exact arbitrary-size arithmetic. Out-of-range arguments
/// (k < 0, n < 0, k > n) give 0 so hit polynomials evaluate without case
/// analysis.
inline BigInt binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::int64_t j = 1; j <= k; ++j) {
        r *= n - k + j;
        r /= j;  // exact: r is C(n-k+j, j) after each step
    }
    return r;
}

/// Falling product x (x-1) ... (x-terms+1); 1 for terms <= 0.
inline BigInt falling_product(std::int64_t x, std::int64_t terms) {
    BigInt r = 1;
    for (std::int64_t j = 0; j < terms; ++j) r *= x - j;
    return r;
}

/// Cardinality ceiling of an (M x L, W, lambda) code family:
///   floor( M (ML-1) ... (ML-lambda) / (W (W-1) ... (W-lambda)) ).
/// Requires W > lambda so every denominator factor is positive.
inline BigInt johnson_bound(const CodeParams& p) {
    validate(p);
    if (p.W <= p.lambda)
        throw std::invalid_argument("johnson_bound: requires W > lambda");
    const BigInt num = BigInt(p.M) * falling_product(p.M * p.L - 1, p.lambda);
    const BigInt den = falling_product(p.W, p.lambda + 1);
    return num / den;  // exact floor, both sides positive
}

/// True when N codewords fit under the Johnson bound. Product comparison,
/// so W == lambda is fine (left side is then 0).
inline bool within_johnson_bound(std::int64_t N, const CodeParams& p) {
    const BigInt lhs = BigInt(N) * falling_product(p.W, p.lambda + 1);
    const BigInt rhs = BigInt(p.M) * falling_product(p.M * p.L - 1, p.lambda);
    return lhs <= rhs;
}

struct ConstraintCheck {
    bool c1 = false;
    bool c2 = false;
    bool c3 = false;
    bool all() const { return c1 && c2 && c3; }
};

/// Per-constraint verdicts for N users on code p:
///   C1: lambda <= W <= ML
///   C2: N W(W-1)...(W-lambda) <= ML (ML-1)...(ML-lambda)
///   C3: W^2 <= 2 M lambda L   (squared form keeps the comparison exact)
/// Note the design searches use within_johnson_bound() as the operative
/// cardinality constraint; it is strictly tighter than C2 here (its product
/// starts at M rather than ML) and is what the optimizer results satisfy.
inline ConstraintCheck check_constraints(std::int64_t N, const CodeParams& p) {
    if (N < 1) throw std::invalid_argument("check_constraints: N >= 1 required");
    ConstraintCheck r;
    r.c1 = p.lambda <= p.W && p.W <= p.M * p.L;
    const BigInt lhs = BigInt(N) * falling_product(p.W, p.lambda + 1);
    const BigInt rhs = falling_product(p.M * p.L, p.lambda + 1);
    r.c2 = lhs <= rhs;
    r.c3 = BigInt(p.W) * p.W <= BigInt(2) * p.M * p.lambda * p.L;
    return r;
}

}  // namespace ocdma
