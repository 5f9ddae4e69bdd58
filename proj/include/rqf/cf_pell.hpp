#pragma once

/**
 * @file cf_pell.hpp
 * @brief Continued fractions of quadratic surds, fundamental units and a
 *        complete decision procedure for x^2 - d y^2 = N.
 *
 * Surd states (P, Q) stay within machine words; convergents, units and
 * witnesses are cpp_int because the fundamental unit of Q(sqrt d) can have
 * hundreds of digits already for d around 10^4.
 *
 * The norm-form solver does not scan y. For every square f^2 | N and every
 * root z of z^2 = d (mod |N/f^2|) it runs the PQa recurrence on
 * (z + sqrt d)/|N/f^2| (Lagrange-Matthews-Mollin), which yields one primitive
 * solution per class or proves the class empty. Each class representative is
 * then walked along its orbit under the Pell unit to the element of least |y|.
 */

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rqf/errors.hpp"
#include "rqf/intbase.hpp"

namespace rqf {

/// Largest |N| accepted by solve_norm_form unless the caller overrides it.
inline constexpr i64 default_norm_budget = 10'000'000;

// ---------------------------------------------------------------------------
// Quadratic surds and their continued fractions

/// (P + sqrt(D)) / Q with Q | (D - P^2).
struct QuadSurd {
    i64 P = 0;
    i64 Q = 1;
    i64 D = 2;

    /// Builds a normalized surd. If Q does not divide D - P^2 the numerator
    /// and denominator are scaled by |Q|, which preserves the value.
    static QuadSurd make(i64 P, i64 Q, i64 D) {
        if (Q == 0)
            throw input_error("surd denominator must be nonzero");
        if (D <= 0 || is_perfect_square(D))
            throw input_error("surd radicand must be a positive non-square, got " +
                              std::to_string(D));
        __int128 num = static_cast<__int128>(D) - static_cast<__int128>(P) * P;
        if (num % Q != 0) {
            const i64 aq = Q < 0 ? -Q : Q;
            i64 nP, nQ, nD;
            if (__builtin_mul_overflow(P, aq, &nP) || __builtin_mul_overflow(Q, aq, &nQ) ||
                __builtin_mul_overflow(D, Q, &nD) || __builtin_mul_overflow(nD, Q, &nD))
                throw input_error("surd normalization overflows 64-bit state");
            return QuadSurd{nP, nQ, nD};
        }
        return QuadSurd{P, Q, D};
    }

    static QuadSurd sqrt_of(i64 D) { return make(0, 1, D); }

    friend bool operator==(const QuadSurd&, const QuadSurd&) = default;
};

struct SurdState {
    i64 P;
    i64 Q;
    friend bool operator==(const SurdState&, const SurdState&) = default;
    friend auto operator<=>(const SurdState&, const SurdState&) = default;
};

/// a0; preperiod; (period)* together with the (P, Q) state behind every
/// quotient up to the end of the first period.
struct CFExpansion {
    i64 D = 0;
    i64 a0 = 0;
    std::vector<i64> preperiod;
    std::vector<i64> period;
    std::vector<SurdState> trace; // trace[n] produces quotient n

    /// Partial quotient a_n of the infinite expansion.
    i64 quotient(std::size_t n) const {
        if (n == 0)
            return a0;
        if (n <= preperiod.size())
            return preperiod[n - 1];
        return period[(n - 1 - preperiod.size()) % period.size()];
    }

    std::size_t period_start() const { return preperiod.size() + 1; }
};

namespace detail {

/// floor((P + sqrt D)/Q) given s = isqrt(D), D non-square.
inline i64 surd_floor(i64 P, i64 Q, i64 s) {
    return Q > 0 ? floor_div(P + s, Q) : floor_div(P + s + 1, Q);
}

/// One step of the (P, Q) recurrence; returns the quotient consumed.
inline i64 surd_step(i64& P, i64& Q, i64 D, i64 s) {
    const i64 a = surd_floor(P, Q, s);
    const __int128 nP = static_cast<__int128>(a) * Q - P;
    const __int128 nQ = (static_cast<__int128>(D) - nP * nP) / Q;
    if (nP > INT64_MAX || nP < INT64_MIN || nQ > INT64_MAX || nQ < INT64_MIN)
        throw input_error("surd state overflows 64-bit integers");
    P = static_cast<i64>(nP);
    Q = static_cast<i64>(nQ);
    return a;
}

} // namespace detail

/// Full preperiod and one minimal period via the (P, Q) recurrence. The
/// period is detected at the first repeated state.
inline CFExpansion cf_expand(const QuadSurd& surd) {
    const QuadSurd s = QuadSurd::make(surd.P, surd.Q, surd.D);
    const i64 root = isqrt(s.D);

    std::vector<SurdState> states;
    std::vector<i64> quotients;
    std::map<SurdState, std::size_t> seen;

    i64 P = s.P, Q = s.Q;
    std::size_t repeat_at = 0;
    for (;;) {
        const SurdState st{P, Q};
        if (auto it = seen.find(st); it != seen.end()) {
            repeat_at = it->second;
            break;
        }
        seen.emplace(st, states.size());
        states.push_back(st);
        quotients.push_back(detail::surd_step(P, Q, s.D, root));
    }

    const std::size_t len = states.size() - repeat_at;
    auto index_of = [&](std::size_t n) {
        return n < repeat_at ? n : repeat_at + (n - repeat_at) % len;
    };

    // a purely periodic expansion still reports its period after a0
    const std::size_t start = std::max<std::size_t>(repeat_at, 1);

    CFExpansion cf;
    cf.D = s.D;
    cf.a0 = quotients[0];
    for (std::size_t n = 1; n < start; ++n)
        cf.preperiod.push_back(quotients[n]);
    for (std::size_t k = 0; k < len; ++k)
        cf.period.push_back(quotients[index_of(start + k)]);
    for (std::size_t n = 0; n < start + len; ++n)
        cf.trace.push_back(states[index_of(n)]);
    return cf;
}

/// First k+1 convergents h_i / k_i.
inline std::vector<std::pair<Int, Int>> convergents(const CFExpansion& cf, std::size_t k) {
    std::vector<std::pair<Int, Int>> out;
    out.reserve(k + 1);
    Int h2 = 0, h1 = 1, k2 = 1, k1 = 0;
    for (std::size_t i = 0; i <= k; ++i) {
        const Int a = cf.quotient(i);
        Int h = a * h1 + h2;
        Int q = a * k1 + k2;
        h2 = std::move(h1);
        h1 = h;
        k2 = std::move(k1);
        k1 = q;
        out.emplace_back(std::move(h), std::move(q));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Units

/// Fundamental unit (t + u sqrt(delta))/2 of the maximal order of Q(sqrt d).
struct FundUnit {
    i64 d = 0;
    i64 delta = 0;
    Int t;
    Int u;
    int norm = 1;
    Int e_lo; ///< floor of the real value
    Int e_hi; ///< an integer >= the real value
};

/// Solutions of the Pell equations in d-coordinates (elements of Z[sqrt d]).
struct PellUnits {
    Int x1, y1; ///< least solution of x^2 - d y^2 = 1
    std::optional<std::pair<Int, Int>> minus; ///< least solution of x^2 - d y^2 = -1
};

/// Fundamental Pell solutions for any positive non-square d.
inline PellUnits pell_units(i64 d) {
    const CFExpansion cf = cf_expand(QuadSurd::sqrt_of(d));
    const std::size_t l = cf.period.size();
    auto [x, y] = convergents(cf, l - 1).back();
    PellUnits out;
    if (l % 2 == 1) {
        out.minus = std::make_pair(x, y);
        out.x1 = x * x + Int(d) * y * y;
        out.y1 = 2 * x * y;
    } else {
        out.x1 = std::move(x);
        out.y1 = std::move(y);
    }
    return out;
}

/// Least-u solution of t^2 - delta u^2 = +-4, from the period of
/// omega = (delta mod 2 + sqrt delta)/2: epsilon = p - q * conj(omega) with
/// p/q the convergent closing the first period.
inline FundUnit fundamental_unit(i64 d) {
    require_field_parameter(d);
    const bool one_mod_four = d % 4 == 1;
    const i64 delta = one_mod_four ? d : 4 * d;

    const CFExpansion cf =
        cf_expand(one_mod_four ? QuadSurd::make(1, 2, d) : QuadSurd::sqrt_of(d));
    if (!cf.preperiod.empty())
        throw consistency_error("expansion of the ring generator has a preperiod for d=" +
                                std::to_string(d));
    const std::size_t l = cf.period.size();
    const auto [p, q] = convergents(cf, l - 1).back();

    FundUnit fu;
    fu.d = d;
    fu.delta = delta;
    fu.t = one_mod_four ? Int(2 * p - q) : Int(2 * p);
    fu.u = q;
    fu.norm = (l % 2 == 1) ? -1 : 1;
    if (fu.t * fu.t - Int(delta) * fu.u * fu.u != 4 * fu.norm)
        throw consistency_error("unit norm check failed for d=" + std::to_string(d));

    // u*sqrt(delta) lies strictly between s and s+1
    const Int s = isqrt(Int(fu.u * fu.u * delta));
    fu.e_lo = (fu.t + s) / 2;
    fu.e_hi = (fu.t + s + 2) / 2;
    return fu;
}

// ---------------------------------------------------------------------------
// Norm forms x^2 - d y^2 = N

/// x^2 - d y^2 = N with x, y >= 0.
struct PellWitness {
    i64 d = 0;
    i64 N = 0;
    Int x;
    Int y;

    bool holds() const { return x * x - Int(d) * y * y == N; }
    friend bool operator==(const PellWitness&, const PellWitness&) = default;
};

/// Integer upper bound on the least y >= 0 of any solution of
/// x^2 - d y^2 = N, from the classical bounds on the fundamental solution of
/// each class under the Pell unit (x1, y1):
///   N > 0:  y <= y1 sqrt(N)   / sqrt(2(x1 + 1))
///   N < 0:  y <= y1 sqrt(|N|) / sqrt(2(x1 - 1))
inline Int norm_form_search_bound(const PellUnits& units, i64 N) {
    if (N == 0)
        throw input_error("norm form target must be nonzero");
    const Int absN = N < 0 ? Int(-N) : Int(N);
    const Int den = 2 * (N > 0 ? units.x1 + 1 : units.x1 - 1);
    return isqrt(Int(units.y1 * units.y1 * absN / den)) + 1;
}

inline Int norm_form_search_bound(i64 d, i64 N) {
    require_field_parameter(d);
    return norm_form_search_bound(pell_units(d), N);
}

namespace detail {

/// Moves x + y sqrt d along its orbit under the Pell unit until |y| stops
/// decreasing. |y| is unimodal along an orbit, so this reaches the minimum.
inline void reduce_in_orbit(Int& x, Int& y, i64 d, const PellUnits& u) {
    const Int D = d;
    for (;;) {
        Int fx = x * u.x1 + D * y * u.y1, fy = x * u.y1 + y * u.x1;
        Int bx = x * u.x1 - D * y * u.y1, by = y * u.x1 - x * u.y1;
        const Int ay = abs_value(y);
        if (abs_value(fy) < ay) {
            x = std::move(fx);
            y = std::move(fy);
        } else if (abs_value(by) < ay) {
            x = std::move(bx);
            y = std::move(by);
        } else {
            return;
        }
    }
}

/// One primitive solution of x^2 - d y^2 = m in the class x = z y (mod |m|),
/// or nothing if that class is empty.
inline std::optional<std::pair<Int, Int>>
lmm_class_solution(i64 d, i64 m, i64 z, const PellUnits& units, i64 root) {
    const i64 am = m < 0 ? -m : m;
    i64 P = z, Q = am;
    Int G2 = -z, G1 = am, B2 = 1, B1 = 0;
    std::set<SurdState> seen;
    const Int D = d;
    for (std::size_t i = 0;; ++i) {
        if (!seen.insert(SurdState{P, Q}).second)
            return std::nullopt;
        if (i >= 1 && (Q == 1 || Q == -1)) {
            const Int val = G1 * G1 - D * B1 * B1;
            if (val == m)
                return std::make_pair(G1, B1);
            if (val == -m && units.minus) {
                const auto& [t, w] = *units.minus;
                return std::make_pair(Int(G1 * t + D * B1 * w), Int(G1 * w + B1 * t));
            }
        }
        const i64 a = surd_step(P, Q, d, root);
        Int G = a * G1 + G2;
        Int B = a * B1 + B2;
        G2 = std::move(G1);
        G1 = std::move(G);
        B2 = std::move(B1);
        B1 = std::move(B);
    }
}

} // namespace detail

/// Solution of x^2 - d y^2 = N with the least y >= 0, or nothing if the
/// equation has no integer solution.
inline std::optional<PellWitness> solve_norm_form(i64 d, i64 N,
                                                  i64 budget = default_norm_budget) {
    require_field_parameter(d);
    if (N == 0)
        throw input_error("norm form target must be nonzero");
    const i64 absN = N < 0 ? -N : N;
    if (absN > budget)
        throw budget_exceeded("|N| = " + std::to_string(absN) + " exceeds " +
                              std::to_string(budget));

    if (N > 0 && is_perfect_square(N))
        return PellWitness{d, N, Int(isqrt(N)), Int(0)};

    const PellUnits units = pell_units(d);
    const i64 root = isqrt(d);

    std::optional<PellWitness> best;
    for (i64 f = 1; f <= absN / f; ++f) {
        if (N % (f * f) != 0)
            continue;
        const i64 m = N / (f * f);
        const i64 am = m < 0 ? -m : m;
        for (i64 z = -((am - 1) / 2); z <= am / 2; ++z) {
            if (mod_pos(z * z - d, am) != 0)
                continue;
            auto sol = detail::lmm_class_solution(d, m, z, units, root);
            if (!sol)
                continue;
            Int x = sol->first * f, y = sol->second * f;
            detail::reduce_in_orbit(x, y, d, units);
            PellWitness w{d, N, abs_value(x), abs_value(y)};
            if (!w.holds())
                throw consistency_error("norm form solution check failed");
            if (!best || w.y < best->y)
                best = std::move(w);
        }
    }
    return best;
}

/// Solutions of x^2 - d y^2 = +4p and -4p.
struct Representability {
    std::optional<PellWitness> plus;
    std::optional<PellWitness> minus;

    bool any() const { return plus.has_value() || minus.has_value(); }
};

inline Representability is_representable(i64 d, i64 p) {
    if (p <= 2 || !is_prime(p))
        throw input_error("p must be an odd prime, got " + std::to_string(p));
    return Representability{solve_norm_form(d, 4 * p), solve_norm_form(d, -4 * p)};
}

} // namespace rqf
