#pragma once
// Multi-class system description and interference models. A system is K
// classes sharing M wavelengths; class k has N_k users on (M L_k, W_k,
// Gamma_kk) codes, pairwise cross-correlations Gamma_kq, integer power
// ratios C_kq and diversity order B_k. An interference model assigns, for
// every ordered class pair (k, q), the probabilities P_m that one class-q
// interferer lands m pulses on a class-k receiver's mark positions.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "combinatorics.hpp"

namespace ocdma {

using Rational = boost::multiprecision::cpp_rational;

struct SystemSpec {
    std::int64_t K = 1;
    std::int64_t M = 1;
    std::vector<std::int64_t> N;                  // users per class
    std::vector<std::int64_t> L;                  // code length per class
    std::vector<std::int64_t> W;                  // code weight per class
    std::vector<std::vector<std::int64_t>> Gamma; // K x K cross-correlations
    std::vector<std::vector<std::int64_t>> C;     // K x K floored power ratios
    std::vector<std::int64_t> B;                  // diversity order per class
    double Rc = 1.0;  // chip rate; only used to report class rates
};

/// Transmission rate of class k at the configured chip rate.
inline double class_rate(const SystemSpec& s, std::size_t k) { return s.Rc / double(s.L.at(k)); }

inline void validate(const SystemSpec& s) {
    const auto K = static_cast<std::size_t>(s.K);
    if (s.K < 1) throw std::invalid_argument("SystemSpec: K >= 1 required");
    if (s.N.size() != K || s.L.size() != K || s.W.size() != K || s.B.size() != K ||
        s.Gamma.size() != K || s.C.size() != K)
        throw std::invalid_argument("SystemSpec: inconsistent dimensions");
    for (std::size_t k = 0; k < K; ++k) {
        if (s.Gamma[k].size() != K || s.C[k].size() != K)
            throw std::invalid_argument("SystemSpec: inconsistent matrix dimensions");
        if (s.N[k] < 0) throw std::invalid_argument("SystemSpec: negative user count");
        if (s.B[k] < 1) throw std::invalid_argument("SystemSpec: diversity order >= 1 required");
        validate(CodeParams{s.M, s.L[k], s.W[k], s.Gamma[k][k]});
        if (s.C[k][k] != 1) throw std::invalid_argument("SystemSpec: C diagonal must be 1");
        for (std::size_t q = 0; q < K; ++q) {
            if (s.Gamma[k][q] < 1) throw std::invalid_argument("SystemSpec: Gamma entries >= 1");
            if (s.C[k][q] < 1) throw std::invalid_argument("SystemSpec: power ratios >= 1");
            if (s.Gamma[k][q] > s.W[k])
                throw std::invalid_argument("SystemSpec: Gamma_kq must not exceed W_k");
        }
    }
}

/// Convenience constructor for the single-class system used throughout the
/// design machinery.
inline SystemSpec single_class(std::int64_t n_users, const CodeParams& p) {
    validate(p);
    SystemSpec s;
    s.K = 1;
    s.M = p.M;
    s.N = {n_users};
    s.L = {p.L};
    s.W = {p.W};
    s.Gamma = {{p.lambda}};
    s.C = {{1}};
    s.B = {1};
    return s;
}

/// Hit-count probability vectors P^{kq} = (P_1, ..., P_{Gamma_kq}), stored as
/// exact rationals so the BER engines introduce no rounding on input.
struct InterferenceModel {
    std::int64_t K = 1;
    std::vector<std::vector<Rational>> P;  // index k*K + q

    const std::vector<Rational>& at(std::size_t k, std::size_t q) const {
        return P.at(k * static_cast<std::size_t>(K) + q);
    }
};

inline void validate(const InterferenceModel& m, const SystemSpec& s) {
    if (m.K != s.K || m.P.size() != static_cast<std::size_t>(s.K) * static_cast<std::size_t>(s.K))
        throw std::invalid_argument("InterferenceModel: dimension mismatch with system");
    for (std::size_t k = 0; k < static_cast<std::size_t>(s.K); ++k)
        for (std::size_t q = 0; q < static_cast<std::size_t>(s.K); ++q) {
            const auto& v = m.at(k, q);
            if (v.size() != static_cast<std::size_t>(s.Gamma[k][q]))
                throw std::invalid_argument("InterferenceModel: P vector length != Gamma_kq");
            Rational sum = 0;
            for (const auto& p : v) {
                if (p < 0) throw std::invalid_argument("InterferenceModel: negative probability");
                sum += p;
            }
            if (sum > 1) throw std::invalid_argument("InterferenceModel: probabilities sum above 1");
        }
}

/// Worst-case model: all partial-hit mass sits on the maximal hit count,
///   P_m = 0 for m < Gamma_kq,
///   P_Gamma = W_k W_q / (2 M Gamma_kq L_q C(W_k, Gamma_kq)).
/// Rejects systems whose maximal-hit probability would exceed 1.
inline InterferenceModel worst_case_model(const SystemSpec& s) {
    validate(s);
    InterferenceModel m;
    m.K = s.K;
    m.P.resize(static_cast<std::size_t>(s.K) * static_cast<std::size_t>(s.K));
    for (std::size_t k = 0; k < static_cast<std::size_t>(s.K); ++k)
        for (std::size_t q = 0; q < static_cast<std::size_t>(s.K); ++q) {
            const std::int64_t lam = s.Gamma[k][q];
            std::vector<Rational> v(static_cast<std::size_t>(lam), Rational(0));
            const BigInt den = BigInt(2) * s.M * lam * s.L[q] * binomial(s.W[k], lam);
            v.back() = Rational(BigInt(s.W[k]) * s.W[q], den);
            if (v.back() > 1)
                throw std::domain_error("worst_case_model: maximal-hit probability exceeds 1");
            m.P[k * static_cast<std::size_t>(s.K) + q] = std::move(v);
        }
    return m;
}

/// Hit model that makes the interference bracket reduce to the classical
/// AND-gate bound polynomial 1 - q (1 - C(W_k - i, lam)/C(W_k, lam)) with
/// q = W_k W_q / (2 M lam L_q). Obtained by matching bracket coefficients,
/// which leaves a triangular system for the P_m. The solution can have a
/// negative component for lam >= 4 with small W; such systems are rejected
/// here, and the design searches evaluate the bound directly instead.
inline InterferenceModel gooc_worst_case_model(const SystemSpec& s) {
    validate(s);
    InterferenceModel m;
    m.K = s.K;
    m.P.resize(static_cast<std::size_t>(s.K) * static_cast<std::size_t>(s.K));
    for (std::size_t k = 0; k < static_cast<std::size_t>(s.K); ++k)
        for (std::size_t q = 0; q < static_cast<std::size_t>(s.K); ++q) {
            const std::int64_t lam = s.Gamma[k][q];
            const std::int64_t Wk = s.W[k];
            const Rational scale(BigInt(Wk) * s.W[q],
                                 BigInt(2) * s.M * lam * s.L[q] * binomial(Wk, lam));
            // back-substitute: sum_{m=j}^{lam} C(Wk-m, m-j) P_m = scale * C(Wk-j, lam-j)
            std::vector<Rational> v(static_cast<std::size_t>(lam), Rational(0));
            for (std::int64_t j = lam; j >= 1; --j) {
                Rational rhs = scale * Rational(binomial(Wk - j, lam - j));
                for (std::int64_t mm = j + 1; mm <= lam; ++mm)
                    rhs -= Rational(binomial(Wk - mm, mm - j)) * v[static_cast<std::size_t>(mm - 1)];
                if (rhs < 0)
                    throw std::domain_error(
                        "gooc_worst_case_model: no nonnegative hit distribution for these parameters");
                v[static_cast<std::size_t>(j - 1)] = rhs;
            }
            m.P[k * static_cast<std::size_t>(s.K) + q] = std::move(v);
        }
    validate(m, s);
    return m;
}

}  // namespace ocdma
