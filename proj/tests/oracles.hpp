#pragma once

// Independent brute-force routines used only by tests. None of them call the
// continued-fraction, form-cycle or norm-form code they are checked against.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rqf/intbase.hpp"

namespace rqf::oracle {

/// a^((q-1)/2) mod q for an odd prime q, mapped to {-1, 0, 1}.
inline int euler_criterion(i64 a, i64 q) {
    const u64 r = detail::powmod(static_cast<u64>(mod_pos(a, q)), static_cast<u64>((q - 1) / 2),
                                 static_cast<u64>(q));
    if (r == 0)
        return 0;
    return r == 1 ? 1 : -1;
}

/// Kronecker symbol from its definition: factor n, use the Euler criterion
/// at odd primes, the mod-8 rule at 2 and the sign rule at -1.
inline int kronecker_by_definition(i64 a, i64 n) {
    if (n == 0)
        return (a == 1 || a == -1) ? 1 : 0;
    int k = 1;
    if (n < 0) {
        n = -n;
        if (a < 0)
            k = -k;
    }
    for (i64 q = 2; n > 1; ++q) {
        while (n % q == 0) {
            n /= q;
            if (q == 2) {
                if (a % 2 == 0)
                    return 0;
                const i64 r = mod_pos(a, 8);
                k *= (r == 1 || r == 7) ? 1 : -1;
            } else {
                k *= euler_criterion(a, q);
            }
        }
    }
    return k;
}

/// Least u >= 1 with delta u^2 +- 4 a perfect square, scanning u upward.
/// Returns (t, u, norm) or nothing if no solution has u <= u_limit.
struct UnitHit {
    Int t;
    i64 u;
    int norm;
};

inline std::optional<UnitHit> minimal_unit_search(i64 delta, i64 u_limit) {
    for (i64 u = 1; u <= u_limit; ++u) {
        const Int base = Int(delta) * u * u;
        for (int norm : {-1, 1}) {
            const Int v = base + 4 * norm;
            if (v >= 0 && is_perfect_square(v))
                return UnitHit{isqrt(v), u, norm};
        }
    }
    return std::nullopt;
}

/// Least y in [0, y_limit] with d y^2 + N a perfect square.
inline std::optional<std::pair<Int, Int>> norm_form_scan(i64 d, i64 N, const Int& y_limit) {
    for (Int y = 0; y <= y_limit; ++y) {
        const Int v = Int(d) * y * y + N;
        if (v >= 0 && is_perfect_square(v))
            return std::make_pair(isqrt(v), y);
    }
    return std::nullopt;
}

/// All squarefree d in [lo, hi], d > 1.
inline std::vector<i64> squarefree_range(i64 lo, i64 hi) {
    std::vector<i64> out;
    for (i64 d = std::max<i64>(lo, 2); d <= hi; ++d) {
        bool sf = true;
        for (i64 q = 2; q * q <= d; ++q)
            if (d % (q * q) == 0) {
                sf = false;
                break;
            }
        if (sf)
            out.push_back(d);
    }
    return out;
}

} // namespace rqf::oracle
