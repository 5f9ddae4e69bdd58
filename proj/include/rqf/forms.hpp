#pragma once

/**
 * @file forms.hpp
 * @brief Class numbers of real quadratic fields from cycles of reduced
 *        indefinite binary quadratic forms, plus genus rank, splitting of
 *        rational primes, the analytic class number formula (as a cross-check)
 *        and the extended Richaud-Degert classification.
 *
 * Every comparison against sqrt(delta) in the cycle machinery is done on
 * integers by squaring with explicit sign cases. Floating point appears only
 * in analytic_class_number.
 */

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rqf/cf_pell.hpp"
#include "rqf/errors.hpp"
#include "rqf/intbase.hpp"

namespace rqf {

/// A x^2 + B xy + C y^2.
struct QuadForm {
    i64 A = 0;
    i64 B = 0;
    i64 C = 0;

    i64 discriminant() const { return B * B - 4 * A * C; }

    friend bool operator==(const QuadForm&, const QuadForm&) = default;
    friend auto operator<=>(const QuadForm&, const QuadForm&) = default;
};

struct ClassGroupSummary {
    i64 d = 0;
    i64 delta = 0;
    i64 h_plus = 0;
    i64 h = 0;
    int unit_norm = 1;
    int genus_rank = 0;

    friend bool operator==(const ClassGroupSummary&, const ClassGroupSummary&) = default;
};

enum class SplittingType { Split, Inert, Ramified };

inline const char* to_string(SplittingType s) {
    switch (s) {
    case SplittingType::Split:
        return "split";
    case SplittingType::Inert:
        return "inert";
    case SplittingType::Ramified:
        return "ramified";
    }
    return "?";
}

inline std::optional<SplittingType> splitting_from_string(const std::string& s) {
    if (s == "split")
        return SplittingType::Split;
    if (s == "inert")
        return SplittingType::Inert;
    if (s == "ramified")
        return SplittingType::Ramified;
    return std::nullopt;
}

enum class RDBranch { standard, four_thirds };

inline const char* to_string(RDBranch b) {
    return b == RDBranch::standard ? "standard" : "four-thirds";
}

struct RDClassification {
    bool is_rd = false;
    i64 m = 0;
    i64 r = 0;
    RDBranch branch = RDBranch::standard;
};

// ---------------------------------------------------------------------------

/// d for d = 1 (mod 4), else 4d.
inline i64 discriminant_of(i64 d) {
    require_field_parameter(d);
    return d % 4 == 1 ? d : 4 * d;
}

inline bool is_fundamental_discriminant(i64 delta) {
    if (delta <= 1)
        return false;
    if (delta % 4 == 1)
        return is_squarefree(delta);
    if (delta % 4 != 0)
        return false;
    const i64 d = delta / 4;
    return (d % 4 == 2 || d % 4 == 3) && is_squarefree(d);
}

inline void require_fundamental_discriminant(i64 delta) {
    if (!is_fundamental_discriminant(delta))
        throw input_error("not a positive fundamental discriminant: " + std::to_string(delta));
}

/// 0 < B < sqrt(delta) and sqrt(delta) - B < 2|A| < sqrt(delta) + B.
inline bool is_reduced(const QuadForm& f) {
    const i64 delta = f.discriminant();
    if (delta <= 0 || is_perfect_square(delta))
        return false;
    if (f.B <= 0 || f.B * f.B >= delta)
        return false;
    const i64 g = 2 * (f.A < 0 ? -f.A : f.A);
    // g > sqrt(delta) - B  <=>  (g + B)^2 > delta, both sides positive
    if ((g + f.B) * (g + f.B) <= delta)
        return false;
    // g < sqrt(delta) + B  <=>  g - B < 0  or  (g - B)^2 < delta
    const i64 diff = g - f.B;
    return diff < 0 || diff * diff < delta;
}

/// Reduction step (A, B, C) -> (C, B', (B'^2 - delta)/(4C)) with
/// B' = -B (mod 2|C|) and sqrt(delta) - 2|C| < B' < sqrt(delta).
inline QuadForm rho(const QuadForm& f) {
    if (!is_reduced(f))
        throw input_error("rho expects a reduced form");
    const i64 delta = f.discriminant();
    const i64 s = isqrt(delta);
    const i64 two_c = 2 * (f.C < 0 ? -f.C : f.C);
    // B' in [s + 1 - 2|C|, s]
    const i64 lo = s + 1 - two_c;
    const i64 b = lo + mod_pos(-f.B - lo, two_c);
    QuadForm g{f.C, b, (b * b - delta) / (4 * f.C)};
    if (!is_reduced(g))
        throw consistency_error("rho produced a non-reduced form");
    return g;
}

/// All reduced forms of discriminant delta, in lexicographic order.
inline std::vector<QuadForm> reduced_forms(i64 delta) {
    if (delta <= 0 || is_perfect_square(delta))
        throw input_error("reduced_forms expects a positive non-square discriminant");
    std::vector<QuadForm> out;
    const i64 s = isqrt(delta);
    for (i64 b = (delta % 2 == 0) ? 2 : 1; b <= s; b += 2) {
        const i64 n = (delta - b * b) / 4; // n = -AC > 0
        for (i64 a : divisors(n)) {
            for (i64 sign : {1, -1}) {
                QuadForm f{sign * a, b, -sign * (n / a)};
                if (is_reduced(f))
                    out.push_back(f);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Number of rho-orbits on a set of reduced forms, visited in the given order.
inline i64 count_cycles(const std::vector<QuadForm>& forms) {
    std::map<QuadForm, bool> visited;
    for (const auto& f : forms)
        visited.emplace(f, false);
    i64 cycles = 0;
    for (const auto& start : forms) {
        if (visited.at(start))
            continue;
        ++cycles;
        QuadForm f = start;
        do {
            auto it = visited.find(f);
            if (it == visited.end())
                throw consistency_error("rho left the set of reduced forms");
            it->second = true;
            f = rho(f);
        } while (f != start);
    }
    return cycles;
}

/// Narrow class number: number of rho-cycles of reduced forms.
inline i64 narrow_class_number(i64 delta) {
    require_fundamental_discriminant(delta);
    return count_cycles(reduced_forms(delta));
}

/// Number of distinct prime divisors of delta, minus one.
inline int genus_rank(i64 delta) {
    require_fundamental_discriminant(delta);
    return static_cast<int>(factorize(delta).distinct_primes()) - 1;
}

/// Full class data of Q(sqrt d); h = h+ when the fundamental unit has norm -1,
/// h = h+/2 otherwise.
inline ClassGroupSummary wide_class_number(i64 d) {
    const i64 delta = discriminant_of(d);
    ClassGroupSummary s;
    s.d = d;
    s.delta = delta;
    s.h_plus = narrow_class_number(delta);
    s.unit_norm = fundamental_unit(d).norm;
    s.genus_rank = genus_rank(delta);
    if (s.unit_norm == -1) {
        s.h = s.h_plus;
    } else {
        if (s.h_plus % 2 != 0)
            throw consistency_error("odd narrow class number with a norm +1 unit, d=" +
                                    std::to_string(d));
        s.h = s.h_plus / 2;
    }
    if (s.h_plus % (i64{1} << s.genus_rank) != 0)
        throw consistency_error("2^genus_rank does not divide h+, d=" + std::to_string(d));
    return s;
}

inline SplittingType splitting_type(i64 d, i64 q) {
    if (!is_prime(q))
        throw input_error("splitting_type expects a prime, got " + std::to_string(q));
    const i64 delta = discriminant_of(d);
    if (delta % q == 0)
        return SplittingType::Ramified;
    return kronecker(delta, q) == 1 ? SplittingType::Split : SplittingType::Inert;
}

// ---------------------------------------------------------------------------
// Analytic class number formula

namespace detail {

template <typename F>
F analytic_class_number_value(i64 delta, const FundUnit& unit) {
    using std::log;
    using std::sin;
    using std::sqrt;
    const F pi = boost::math::constants::pi<F>();
    F sum = 0;
    for (i64 a = 1; a < delta; ++a) {
        const int chi = kronecker(delta, a);
        if (chi == 0)
            continue;
        const F term = log(sin(pi * F(a) / F(delta)));
        sum += chi > 0 ? term : F(-term);
    }
    const F eps = (F(unit.t) + F(unit.u) * sqrt(F(delta))) / 2;
    return -sum / (2 * log(eps));
}

} // namespace detail

/// h = -(1 / (2 ln eps)) * sum_{0<a<delta} chi(a) ln sin(pi a / delta),
/// chi = (delta / .), evaluated with at least `precision_digits` decimal
/// digits and rounded. Throws precision_error if the value is not within
/// 0.49 of a positive integer.
inline i64 analytic_class_number(i64 delta, unsigned precision_digits = 18) {
    require_fundamental_discriminant(delta);
    if (delta > 10'000)
        throw input_error("analytic_class_number is limited to delta <= 10^4");
    if (precision_digits == 0 || precision_digits > 100)
        throw input_error("precision must be between 1 and 100 decimal digits");

    const FundUnit unit = fundamental_unit(delta % 4 == 0 ? delta / 4 : delta);
    long double value;
    if (precision_digits <= 15) {
        value = detail::analytic_class_number_value<double>(delta, unit);
    } else if (precision_digits <= 18) {
        value = detail::analytic_class_number_value<long double>(delta, unit);
    } else if (precision_digits <= 50) {
        value = static_cast<long double>(
            detail::analytic_class_number_value<boost::multiprecision::cpp_bin_float_50>(delta,
                                                                                         unit));
    } else {
        value = static_cast<long double>(
            detail::analytic_class_number_value<boost::multiprecision::cpp_bin_float_100>(
                delta, unit));
    }
    const long double nearest = std::round(value);
    if (!std::isfinite(value) || std::fabs(value - nearest) > 0.49L || nearest < 1)
        throw precision_error("analytic class number for delta=" + std::to_string(delta) +
                              " evaluated to " + std::to_string(static_cast<double>(value)));
    return static_cast<i64>(nearest);
}

// ---------------------------------------------------------------------------
// Extended Richaud-Degert type

/// d = m^2 + r with r | 4m and -m < r <= m (standard), or r = +-4m/3 with
/// 3 | m (four-thirds). Standard decompositions are tried first, each branch
/// in ascending m.
inline RDClassification classify_rd(i64 d) {
    require_field_parameter(d);
    const i64 s = isqrt(d);
    const i64 lo = std::max<i64>(1, s - 2), hi = s + 2;

    for (i64 m = lo; m <= hi; ++m) {
        const i64 r = d - m * m;
        if (r != 0 && -m < r && r <= m && (4 * m) % r == 0)
            return {true, m, r, RDBranch::standard};
    }
    for (i64 m = lo; m <= hi; ++m) {
        if (m % 3 != 0)
            continue;
        const i64 r = d - m * m;
        if (r == 4 * m / 3 || r == -4 * m / 3)
            return {true, m, r, RDBranch::four_thirds};
    }
    return {};
}

} // namespace rqf
