#pragma once
// Error-rate engines. The exact engine evaluates the alternating inclusion-
// exclusion bound for a multi-class system under an arbitrary hit-count
// model; its terms reach C(W, W/2) while results sit many orders of
// magnitude lower, so it runs in software floating point with a selectable
// number of decimal digits (hardware doubles are not enough). The closed-form
// approximation is plain double arithmetic.

#include <cstdint>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "combinatorics.hpp"
#include "system.hpp"

namespace ocdma {

template <unsigned Digits10>
using FixedReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits10>>;

using Real30 = FixedReal<30>;
using Real60 = FixedReal<60>;
using Real80 = FixedReal<80>;
using Real120 = FixedReal<120>;
using Real240 = FixedReal<240>;
using Real480 = FixedReal<480>;

namespace detail {

template <class Real>
Real to_real(const Rational& r) {
    return Real(boost::multiprecision::numerator(r)) / Real(boost::multiprecision::denominator(r));
}

template <class Real>
Real pow_uint(Real base, std::uint64_t e) {
    Real r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

// Interference bracket of class pair (k, q) at inclusion-exclusion index i:
//   1 + sum_{j=1}^{lam} sum_{m=j}^{lam} (-1)^j C(i,j) C(W_k - m, m - j) P_m
inline Rational bracket(const SystemSpec& s, const InterferenceModel& m, std::size_t k,
                        std::size_t q, std::int64_t i) {
    const std::int64_t lam = s.Gamma[k][q];
    const std::int64_t Wk = s.W[k];
    const auto& P = m.at(k, q);
    Rational acc = 1;
    for (std::int64_t j = 1; j <= lam; ++j) {
        const BigInt cij = binomial(i, j);
        if (cij == 0) continue;
        Rational inner = 0;
        for (std::int64_t mm = j; mm <= lam; ++mm)
            inner += Rational(binomial(Wk - mm, mm - j)) * P[static_cast<std::size_t>(mm - 1)];
        if (j % 2 == 1)
            acc -= Rational(cij) * inner;
        else
            acc += Rational(cij) * inner;
    }
    return acc;
}

inline const Rational& bracket_tolerance() {
    static const Rational eps(1, BigInt(1) << 40);
    return eps;
}

}  // namespace detail

/// Exact multi-class bound under hit model `m`. Covers unit-power,
/// no-diversity systems only; the bracket values must stay inside [0, 1+eps]
/// or the model is rejected. Result is clamped to [0, 1/2].
template <class Real>
Real exact_ber(const SystemSpec& s, std::size_t k, const InterferenceModel& m) {
    validate(s);
    validate(m, s);
    const auto K = static_cast<std::size_t>(s.K);
    if (k >= K) throw std::invalid_argument("exact_ber: class index out of range");
    if (s.N[k] < 1) throw std::invalid_argument("exact_ber: probed class needs at least one user");
    for (std::size_t a = 0; a < K; ++a) {
        if (s.B[a] != 1) throw std::invalid_argument("exact_ber: diversity orders must be 1");
        for (std::size_t b = 0; b < K; ++b)
            if (s.C[a][b] != 1) throw std::invalid_argument("exact_ber: power ratios must be 1");
    }

    const std::int64_t Wk = s.W[k];
    // bracket values, validated once, converted to working precision
    std::vector<std::vector<Real>> br(K, std::vector<Real>(static_cast<std::size_t>(Wk) + 1));
    for (std::size_t q = 0; q < K; ++q)
        for (std::int64_t i = 0; i <= Wk; ++i) {
            const Rational b = detail::bracket(s, m, k, q, i);
            if (b < 0 || b > Rational(1) + detail::bracket_tolerance())
                throw std::domain_error("exact_ber: bracket outside [0, 1+eps]; invalid hit model");
            br[q][static_cast<std::size_t>(i)] = detail::to_real<Real>(b);
        }

    Real acc = 0;
    for (std::int64_t i = 0; i <= Wk; ++i) {
        Real prod = 1;
        for (std::size_t q = 0; q < K; ++q) {
            const std::uint64_t e =
                static_cast<std::uint64_t>(s.N[q]) - (q == k ? 1 : 0);
            if (e) prod *= detail::pow_uint(br[q][static_cast<std::size_t>(i)], e);
        }
        const Real term = Real(binomial(Wk, i)) * prod;
        if (i % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    Real r = acc / 2;
    if (r < 0) r = 0;
    if (r > Real(1) / 2) r = Real(1) / 2;
    return r;
}

/// Single-class AND-gate bound with all partial hits collapsed onto the
/// maximal overlap: the bracket polynomial is
///   f(i) = 1 - q (1 - C(W-i, lambda)/C(W, lambda)),  q = W^2/(2 M lambda L).
/// This is the feasibility test (C4) used by the design searches; unlike the
/// generic bracket above it stays well-defined for every W >= lambda.
template <class Real>
Real gooc_ber_bound(std::int64_t n_users, const CodeParams& p) {
    validate(p);
    if (n_users < 1) throw std::invalid_argument("gooc_ber_bound: need n_users >= 1");
    if (n_users == 1) return 0;  // no interferers
    const Rational q(BigInt(p.W) * p.W, BigInt(2) * p.M * p.lambda * p.L);
    if (q > 1)
        throw std::domain_error("gooc_ber_bound: hit probability above 1 (W^2 > 2 M lambda L)");
    const BigInt cwl = binomial(p.W, p.lambda);
    Real acc = 0;
    for (std::int64_t i = 0; i <= p.W; ++i) {
        const Rational f = 1 - q * (1 - Rational(binomial(p.W - i, p.lambda), cwl));
        const Real term = Real(binomial(p.W, i)) *
                          detail::pow_uint(detail::to_real<Real>(f),
                                           static_cast<std::uint64_t>(n_users - 1));
        if (i % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    Real r = acc / 2;
    if (r < 0) r = 0;
    if (r > Real(1) / 2) r = Real(1) / 2;
    return r;
}

namespace detail {

template <class F, class... Args>
double dispatch_precision(int digits, F&& f, Args&&... args) {
    if (digits < 30) throw std::invalid_argument("precision below the 30-digit floor");
    if (digits <= 30) return f.template operator()<Real30>(args...);
    if (digits <= 60) return f.template operator()<Real60>(args...);
    if (digits <= 80) return f.template operator()<Real80>(args...);
    if (digits <= 120) return f.template operator()<Real120>(args...);
    if (digits <= 240) return f.template operator()<Real240>(args...);
    if (digits <= 480) return f.template operator()<Real480>(args...);
    throw std::invalid_argument("precision above the supported 480-digit ceiling");
}

struct ExactBerCall {
    template <class Real>
    double operator()(const SystemSpec& s, std::size_t k, const InterferenceModel& m) const {
        return exact_ber<Real>(s, k, m).template convert_to<double>();
    }
};

struct GoocCall {
    template <class Real>
    double operator()(std::int64_t n, const CodeParams& p) const {
        return gooc_ber_bound<Real>(n, p).template convert_to<double>();
    }
};

}  // namespace detail

inline double exact_ber(const SystemSpec& s, std::size_t k, const InterferenceModel& m,
                        int precision_digits = 80) {
    return detail::dispatch_precision(precision_digits, detail::ExactBerCall{}, s, k, m);
}

inline double gooc_ber_bound(std::int64_t n_users, const CodeParams& p, int precision_digits = 80) {
    return detail::dispatch_precision(precision_digits, detail::GoocCall{}, n_users, p);
}

/// Closed-form estimate for class k of a general system:
///   1/2 [ sum_i (N_i W_i / (2 M Gamma_ki L_i))^(C_ki/Gamma_ki) ]^(W_k B_k).
/// Deliberately not clamped; values above 1/2 flag the invalid regime to the
/// caller. Search code treats this as an accelerator only, never as the
/// feasibility test.
inline double approx_ber(const SystemSpec& s, std::size_t k) {
    validate(s);
    if (k >= static_cast<std::size_t>(s.K))
        throw std::invalid_argument("approx_ber: class index out of range");
    double sum = 0.0;
    for (std::size_t q = 0; q < static_cast<std::size_t>(s.K); ++q) {
        const double base = double(s.N[q]) * double(s.W[q]) /
                            (2.0 * double(s.M) * double(s.Gamma[k][q]) * double(s.L[q]));
        sum += std::pow(base, double(s.C[k][q]) / double(s.Gamma[k][q]));
    }
    return 0.5 * std::pow(sum, double(s.W[k] * s.B[k]));
}

/// Single-class specialization 1/2 (N W / (2 M L lambda))^(W/lambda),
/// computed with the same operation sequence as approx_ber so the two agree
/// bit-for-bit on one-class systems.
inline double approx_ber_single(std::int64_t n_users, const CodeParams& p) {
    validate(p);
    if (n_users < 1) throw std::invalid_argument("approx_ber_single: need n_users >= 1");
    const double base =
        double(n_users) * double(p.W) / (2.0 * double(p.M) * double(p.lambda) * double(p.L));
    return 0.5 * std::pow(std::pow(base, 1.0 / double(p.lambda)), double(p.W));
}

}  // namespace ocdma
