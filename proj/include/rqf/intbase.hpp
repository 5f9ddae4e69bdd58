#pragma once

/**
 * @file intbase.hpp
 * @brief Exact integer primitives: square roots, gcd, Kronecker symbol,
 *        deterministic primality and bounded trial-division factorization.
 *
 * Everything here is pure. Machine-word routines work on std::int64_t /
 * std::uint64_t; isqrt and gcd are templates that also accept
 * boost::multiprecision::cpp_int, the big-integer type used for units and
 * convergents elsewhere in the library.
 */

#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rqf/errors.hpp"

namespace rqf {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                         boost::multiprecision::et_off>;

/// Default trial-division bound for factorize().
inline constexpr u64 default_trial_bound = 10'000'000;

// ---------------------------------------------------------------------------
// Square roots

/// floor(sqrt(n)) for n >= 0. Throws input_error on negative input.
template <typename T>
T isqrt(const T& n) {
    if (n < 0)
        throw input_error("isqrt of negative number");
    if constexpr (std::is_integral_v<T>) {
        using U = std::make_unsigned_t<T>;
        const U un = static_cast<U>(n);
        U r = static_cast<U>(std::sqrt(static_cast<long double>(un)));
        // the floating seed can be off by one in either direction near 2^64;
        // comparisons go through division so nothing overflows
        while (r > 0 && r > un / r)
            --r;
        while ((r + 1) <= un / (r + 1))
            ++r;
        return static_cast<T>(r);
    } else {
        return boost::multiprecision::sqrt(n);
    }
}

template <typename T>
bool is_perfect_square(const T& n) {
    if (n < 0)
        return false;
    T r = isqrt(n);
    return r * r == n;
}

// ---------------------------------------------------------------------------
// Division helpers (floor semantics, positive modulus)

inline constexpr i64 floor_div(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline constexpr i64 mod_pos(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + (m < 0 ? -m : m) : r;
}

template <typename T>
T abs_value(const T& v) {
    return v < 0 ? T(-v) : v;
}

/// gcd with gcd(0,0) = 0; result is nonnegative.
template <typename T>
T gcd(T a, T b) {
    a = abs_value(a);
    b = abs_value(b);
    while (b != 0) {
        T r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// ---------------------------------------------------------------------------
// Kronecker symbol

/// Kronecker symbol (a/n), extending Jacobi to even and negative n.
/// Binary algorithm after Cohen, "A Course in Computational Algebraic
/// Number Theory", Alg. 1.4.10.
inline int kronecker(i64 a, i64 n) {
    static constexpr int tab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};

    if (n == 0)
        return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0)
        return 0;

    int v = 0;
    while ((n & 1) == 0) {
        ++v;
        n >>= 1;
    }
    int k = (v & 1) ? tab2[a & 7] : 1;
    if (n < 0) {
        n = -n;
        if (a < 0)
            k = -k;
    }
    // n odd and positive from here on
    for (;;) {
        if (a == 0)
            return n > 1 ? 0 : k;
        v = 0;
        while ((a & 1) == 0) {
            ++v;
            a >>= 1;
        }
        if (v & 1)
            k *= tab2[n & 7];
        if (a & n & 2)
            k = -k;
        const i64 r = a < 0 ? -a : a;
        a = n % r;
        n = r;
    }
}

// ---------------------------------------------------------------------------
// Primality

namespace detail {

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

inline u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1)
            r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

} // namespace detail

/// Deterministic Miller-Rabin. The first twelve prime bases are exact for
/// every 64-bit input (the first seven already suffice below 3.4e14).
inline bool is_prime(u64 n) {
    if (n < 2)
        return false;
    static constexpr u64 bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : bases) {
        if (n % p == 0)
            return n == p;
    }
    u64 dd = n - 1;
    int s = 0;
    while ((dd & 1) == 0) {
        dd >>= 1;
        ++s;
    }
    for (u64 a : bases) {
        u64 x = detail::powmod(a, dd, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

inline bool is_prime(i64 n) { return n > 1 && is_prime(static_cast<u64>(n)); }
inline bool is_prime(int n) { return is_prime(static_cast<i64>(n)); }

// ---------------------------------------------------------------------------
// Factorization

struct PrimePower {
    u64 prime;
    unsigned exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Complete factorization of a positive integer, primes strictly increasing.
struct Factorization {
    u64 value = 1;
    std::vector<PrimePower> factors;

    std::size_t distinct_primes() const { return factors.size(); }

    bool squarefree() const {
        for (const auto& f : factors)
            if (f.exponent > 1)
                return false;
        return true;
    }

    /// Product of prime^exponent, recomputed.
    u64 product() const {
        u64 r = 1;
        for (const auto& f : factors)
            for (unsigned e = 0; e < f.exponent; ++e)
                r *= f.prime;
        return r;
    }
};

/// Trial division by 2 and odd candidates up to `trial_bound`. A cofactor
/// left over when the bound is reached is accepted only if it is prime;
/// otherwise budget_exceeded is thrown.
inline Factorization factorize(u64 n, u64 trial_bound = default_trial_bound) {
    if (n == 0)
        throw input_error("factorize(0)");
    Factorization out;
    out.value = n;
    auto take = [&](u64 p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e)
            out.factors.push_back({p, e});
    };
    take(2);
    u64 p = 3;
    for (; p <= trial_bound && p <= n / p; p += 2)
        take(p);
    if (n > 1) {
        const bool exhausted = p <= n / p; // stopped on the budget, not on sqrt
        if (exhausted && !is_prime(n))
            throw budget_exceeded("cofactor " + std::to_string(n) +
                                  " has no factor below trial bound " +
                                  std::to_string(trial_bound));
        out.factors.push_back({n, 1});
    }
    return out;
}

inline Factorization factorize(i64 n, u64 trial_bound = default_trial_bound) {
    if (n <= 0)
        throw input_error("factorize expects a positive integer, got " + std::to_string(n));
    return factorize(static_cast<u64>(n), trial_bound);
}

inline bool is_squarefree(i64 n, u64 trial_bound = default_trial_bound) {
    return factorize(n, trial_bound).squarefree();
}

/// Positive divisors of n in ascending order.
inline std::vector<i64> divisors(i64 n) {
    if (n <= 0)
        throw input_error("divisors expects a positive integer");
    std::vector<i64> lo, hi;
    for (i64 k = 1; k <= n / k; ++k) {
        if (n % k == 0) {
            lo.push_back(k);
            if (k != n / k)
                hi.push_back(n / k);
        }
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

/// d > 1 and squarefree; the domain of every field-level operation.
inline void require_field_parameter(i64 d) {
    if (d <= 1)
        throw input_error("d must be > 1, got " + std::to_string(d));
    if (!is_squarefree(d))
        throw input_error("d must be squarefree, got " + std::to_string(d));
}

} // namespace rqf
