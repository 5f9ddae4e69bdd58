#pragma once

/**
 * @file theorem_lab.hpp
 * @brief Instrumented descent for the family d = a^2 m^2 + 4ap.
 *
 * Claim under test: for an odd prime p, a > 1, m >= 1 and squarefree
 * d = a^2 m^2 + 4ap, the equation x^2 - d y^2 = +-4p has no integer solution,
 * and therefore h(d) > 1.
 *
 * Nothing here assumes the claim. Each step of the descent argument is
 * evaluated on concrete numbers and the outcome is recorded:
 *
 *   alpha = (x - y sqrt d)/2          N(alpha) = +-p
 *   beta  = (a m^2 + 2p + m sqrt d)/2 N(beta)  = p^2
 *   alpha*beta / p = (X + Y sqrt d)/2 with
 *     X = ((a m^2 + 2p) x - m d y) / 2p,  Y = (m x - (a m^2 + 2p) y) / 2p
 *
 * compose_descent() reports whether X and Y are integers (for beta and for
 * its conjugate), case_analysis() replays the two minimality cases, and
 * verify_theorem() produces a per-instance verdict from an exact
 * representability test and the class number.
 */

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rqf/cf_pell.hpp"
#include "rqf/errors.hpp"
#include "rqf/forms.hpp"
#include "rqf/intbase.hpp"

namespace rqf {

/// Largest d the lab accepts; squarefree testing stays within trial division.
inline constexpr i64 max_family_d = 100'000'000'000'000; // 1e14

struct FamilyParams {
    i64 a = 0;
    i64 m = 0;
    i64 p = 0;

    /// a^2 m^2 + 4 a p, recomputed on every call.
    i64 d() const {
        const __int128 v = static_cast<__int128>(a) * a * m * m + static_cast<__int128>(4) * a * p;
        if (v > max_family_d || v < -max_family_d)
            throw input_error("family parameter d out of range");
        return static_cast<i64>(v);
    }

    friend bool operator==(const FamilyParams&, const FamilyParams&) = default;
};

struct HypothesisCheck {
    bool ok = false;
    std::string reason; ///< empty when ok
};

/// p > 2 prime, a > 1, m >= 1, d squarefree.
inline HypothesisCheck check_hypothesis(const FamilyParams& fp) {
    if (fp.p <= 2 || !is_prime(fp.p))
        return {false, "p is not an odd prime"};
    if (fp.a <= 1)
        return {false, "a must exceed 1"};
    if (fp.m < 1)
        return {false, "m must be at least 1"};
    if (!is_squarefree(fp.d()))
        return {false, "d is not squarefree"};
    return {true, {}};
}

// ---------------------------------------------------------------------------
// Integers of Q(sqrt d) written as (s + t sqrt d)/2

struct QuadInt {
    Int s;
    Int t;
    i64 d = 0;

    /// Validates membership in the ring of integers: s = t (mod 2) when
    /// d = 1 (mod 4), s and t both even otherwise.
    static QuadInt make(Int s, Int t, i64 d) {
        const bool same_parity = ((s - t) % 2) == 0;
        const bool ok = (d % 4 == 1) ? same_parity : (s % 2 == 0 && t % 2 == 0);
        if (!ok)
            throw input_error("parity violation: (" + s.str() + " + " + t.str() + " sqrt " +
                              std::to_string(d) + ")/2 is not an algebraic integer");
        return QuadInt{std::move(s), std::move(t), d};
    }

    Int norm() const { return (s * s - Int(d) * t * t) / 4; }

    friend QuadInt operator*(const QuadInt& l, const QuadInt& r) {
        if (l.d != r.d)
            throw input_error("QuadInt product across different fields");
        // ((s1 s2 + d t1 t2) + (s1 t2 + s2 t1) sqrt d) / 4
        return QuadInt::make((l.s * r.s + Int(l.d) * l.t * r.t) / 2,
                             (l.s * r.t + r.s * l.t) / 2, l.d);
    }

    friend bool operator==(const QuadInt&, const QuadInt&) = default;
};

/// (x - y sqrt d)/2.
inline QuadInt make_alpha(const Int& x, const Int& y, i64 d) { return QuadInt::make(x, -y, d); }

/// (a m^2 + 2p + m sqrt d)/2; asserts N(beta) = p^2.
inline QuadInt make_beta(const FamilyParams& fp) {
    if (const auto h = check_hypothesis(fp); !h.ok)
        throw input_error("make_beta: " + h.reason);
    QuadInt beta = QuadInt::make(Int(fp.a * fp.m * fp.m + 2 * fp.p), Int(fp.m), fp.d());
    if (beta.norm() != Int(fp.p) * fp.p)
        throw consistency_error("N(beta) != p^2");
    return beta;
}

// ---------------------------------------------------------------------------
// Descent step

struct DescentOutcome {
    Int X_num;
    Int Y_num;
    std::optional<Int> X;
    std::optional<Int> Y;
    bool integral = false;
    std::optional<bool> norm_preserved;
    bool used_conjugate = false;
};

namespace detail {

inline void require_basic_params(const FamilyParams& fp) {
    if (fp.p <= 2 || !is_prime(fp.p))
        throw input_error("p must be an odd prime");
    if (fp.a < 1 || fp.m < 1)
        throw input_error("a and m must be positive");
}

inline void require_pm4p(const FamilyParams& fp, const Int& x, const Int& y) {
    require_basic_params(fp);
    const Int n = x * x - Int(fp.d()) * y * y;
    if (n != 4 * fp.p && n != -4 * fp.p)
        throw input_error("(x, y) does not solve x^2 - d y^2 = +-4p");
}

} // namespace detail

/// Components of alpha*beta/p (or alpha*conj(beta)/p) before and after
/// division by 2p. When both divide, checks that the descended pair solves
/// the same equation as (x, y).
inline DescentOutcome compose_descent(const FamilyParams& fp, const Int& x, const Int& y,
                                      bool use_conjugate) {
    detail::require_pm4p(fp, x, y);
    const i64 d = fp.d();
    const Int c = fp.a * fp.m * fp.m + 2 * fp.p;
    const Int m = fp.m;
    const Int sign = use_conjugate ? -1 : 1;

    DescentOutcome out;
    out.used_conjugate = use_conjugate;
    out.X_num = c * x - sign * m * Int(d) * y;
    out.Y_num = m * x - sign * c * y;

    const Int two_p = 2 * fp.p;
    out.integral = (out.X_num % two_p == 0) && (out.Y_num % two_p == 0);
    if (out.integral) {
        out.X = out.X_num / two_p;
        out.Y = out.Y_num / two_p;
        out.norm_preserved =
            (*out.X * *out.X - Int(d) * *out.Y * *out.Y) == (x * x - Int(d) * y * y);
    }
    return out;
}

struct IntegralityRecord {
    bool beta_integral = false;
    bool conj_integral = false;
};

/// Which of the two composites divide by 2p. Recorded, not assumed.
inline IntegralityRecord descent_integrality(const FamilyParams& fp, const Int& x, const Int& y) {
    return {compose_descent(fp, x, y, false).integral, compose_descent(fp, x, y, true).integral};
}

enum class DescentCase { case1_contradiction, case2_contradiction, boundary_a1y1, premise_fails };

inline const char* to_string(DescentCase c) {
    switch (c) {
    case DescentCase::case1_contradiction:
        return "case1-contradiction";
    case DescentCase::case2_contradiction:
        return "case2-contradiction";
    case DescentCase::boundary_a1y1:
        return "boundary-a1y1";
    case DescentCase::premise_fails:
        return "premise-fails";
    }
    return "?";
}

/// End of the first chain: m^2 >= (a m^2 + 4p) y^2.
inline bool case1_conclusion_holds(const FamilyParams& fp, const Int& y) {
    return Int(fp.m) * fp.m >= Int(fp.a * fp.m * fp.m + 4 * fp.p) * y * y;
}

/// End of the second chain: 1 >= a y^2.
inline bool case2_conclusion_holds(const FamilyParams& fp, const Int& y) {
    return Int(1) >= Int(fp.a) * y * y;
}

/// Replays the minimality argument for a solution with y >= 1.
///
/// The premise is y <= |Y| for the integral beta-composite Y. With Y >= y the
/// first chain applies, with Y <= -y the second one. A failing premise
/// (non-integral composite, or |Y| < y) is reported as premise_fails.
inline DescentCase case_analysis(const FamilyParams& fp, const Int& x, const Int& y) {
    if (y < 1)
        throw input_error("case_analysis expects y >= 1");
    const DescentOutcome beta = compose_descent(fp, x, y, false);
    if (!beta.integral)
        return DescentCase::premise_fails;

    const Int two_py = 2 * fp.p * y;
    if (beta.Y_num >= two_py) {
        if (case1_conclusion_holds(fp, y))
            throw consistency_error("first minimality chain ended in a true inequality");
        return DescentCase::case1_contradiction;
    }
    if (beta.Y_num <= -two_py) {
        if (!case2_conclusion_holds(fp, y))
            return DescentCase::case2_contradiction;
        if (fp.a != 1 || y != 1)
            throw consistency_error("1 >= a y^2 with a, y >= 1 but not a = y = 1");
        return DescentCase::boundary_a1y1;
    }
    return DescentCase::premise_fails;
}

// ---------------------------------------------------------------------------
// gcd(m, p) > 1 branch and principality

struct GcdBranch {
    bool applicable = false;
    bool p_divides_d = false;
    int genus_rank = 0;
};

inline GcdBranch check_gcd_branch(const FamilyParams& fp) {
    if (const auto h = check_hypothesis(fp); !h.ok)
        throw input_error("check_gcd_branch: " + h.reason);
    const i64 d = fp.d();
    GcdBranch g;
    g.applicable = gcd(fp.m, fp.p) > 1;
    g.p_divides_d = d % fp.p == 0;
    g.genus_rank = genus_rank(discriminant_of(d));
    if (g.applicable && (!g.p_divides_d || g.genus_rank < 1))
        throw consistency_error("gcd(m, p) > 1 but p does not divide d or genus rank is 0");
    return g;
}

enum class Principality { principal_witness, non_principal_h_gt_1, not_split };

inline const char* to_string(Principality p) {
    switch (p) {
    case Principality::principal_witness:
        return "principal";
    case Principality::non_principal_h_gt_1:
        return "non-principal";
    case Principality::not_split:
        return "not-split";
    }
    return "?";
}

struct PrincipalityResult {
    Principality kind = Principality::not_split;
    std::optional<PellWitness> witness;
};

/// For split p, a prime ideal above p is principal iff u^2 - d v^2 = +-4p is
/// solvable.
inline PrincipalityResult principal_ideal_test(i64 d, i64 p) {
    if (p <= 2 || !is_prime(p))
        throw input_error("p must be an odd prime");
    if (splitting_type(d, p) != SplittingType::Split)
        return {Principality::not_split, std::nullopt};
    const Representability rep = is_representable(d, p);
    if (rep.minus && (!rep.plus || rep.minus->y <= rep.plus->y))
        return {Principality::principal_witness, rep.minus};
    if (rep.plus)
        return {Principality::principal_witness, rep.plus};
    return {Principality::non_principal_h_gt_1, std::nullopt};
}

// ---------------------------------------------------------------------------
// Per-instance verdict

enum class Verdict { hypothesis_not_met, claim_holds, claim_violated };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::hypothesis_not_met:
        return "hypothesis-not-met";
    case Verdict::claim_holds:
        return "claim-holds";
    case Verdict::claim_violated:
        return "claim-violated";
    }
    return "?";
}

inline std::optional<Verdict> verdict_from_string(const std::string& s) {
    for (Verdict v : {Verdict::hypothesis_not_met, Verdict::claim_holds, Verdict::claim_violated})
        if (s == to_string(v))
            return v;
    return std::nullopt;
}

/// Descent replayed on the least witness found.
struct DescentRecord {
    PellWitness witness;
    IntegralityRecord integrality;
    std::optional<DescentCase> outcome; ///< absent for y = 0
};

struct TheoremReport {
    FamilyParams params;
    i64 d = 0;
    bool hypothesis_ok = false;
    std::string reason;
    std::optional<Representability> representation;
    std::optional<ClassGroupSummary> summary;
    std::optional<SplittingType> splitting;
    i64 gcd_mp = 0;
    std::optional<GcdBranch> gcd_branch;
    std::optional<DescentRecord> descent;
    Verdict verdict = Verdict::hypothesis_not_met;
};

using SummarySource = std::function<ClassGroupSummary(i64)>;

/// Evaluates one (a, m, p). Failed hypotheses are encoded in the report;
/// a split p with no representation and h = 1 raises consistency_error.
inline TheoremReport verify_theorem(const FamilyParams& fp, const SummarySource& summary_of) {
    TheoremReport rep;
    rep.params = fp;
    rep.gcd_mp = gcd(fp.m, fp.p);
    rep.d = fp.d();

    const HypothesisCheck hyp = check_hypothesis(fp);
    rep.hypothesis_ok = hyp.ok;
    rep.reason = hyp.reason;
    if (!hyp.ok) {
        rep.verdict = Verdict::hypothesis_not_met;
        return rep;
    }

    rep.representation = is_representable(rep.d, fp.p);
    rep.summary = summary_of(rep.d);
    rep.splitting = splitting_type(rep.d, fp.p);
    rep.gcd_branch = check_gcd_branch(fp);

    const Representability& r = *rep.representation;
    if (r.any()) {
        const PellWitness& w =
            (r.minus && (!r.plus || r.minus->y <= r.plus->y)) ? *r.minus : *r.plus;
        DescentRecord dr{w, descent_integrality(fp, w.x, w.y), std::nullopt};
        if (w.y >= 1)
            dr.outcome = case_analysis(fp, w.x, w.y);
        rep.descent = std::move(dr);
    }

    const bool h_is_one = rep.summary->h == 1;
    if (*rep.splitting == SplittingType::Split && !r.any() && h_is_one)
        throw consistency_error("p splits, +-4p is not a norm, yet h = 1 (d=" +
                                std::to_string(rep.d) + ")");
    rep.verdict = (r.any() || h_is_one) ? Verdict::claim_violated : Verdict::claim_holds;
    return rep;
}

inline TheoremReport verify_theorem(const FamilyParams& fp) {
    return verify_theorem(fp, [](i64 d) { return wide_class_number(d); });
}

// ---------------------------------------------------------------------------
// Families

/// Odd a in [3, max_a], odd m in [1, max_m], odd primes p <= max_p, d
/// squarefree. Even a or m force 4 | d and are never emitted.
inline std::vector<FamilyParams> gen_paper_family(i64 max_a, i64 max_m, i64 max_p) {
    std::vector<FamilyParams> out;
    for (i64 a = 3; a <= max_a; a += 2)
        for (i64 m = 1; m <= max_m; m += 2)
            for (i64 p = 3; p <= max_p; p += 2) {
                if (!is_prime(p))
                    continue;
                FamilyParams fp{a, m, p};
                if (is_squarefree(fp.d()))
                    out.push_back(fp);
            }
    return out;
}

struct BLMember {
    i64 a;
    i64 m;
    i64 d; ///< a^2 m^2 + 4a
    friend bool operator==(const BLMember&, const BLMember&) = default;
};

/// Odd a, m >= 1 with a^2 m^2 + 4a squarefree and at most max_d.
inline std::vector<BLMember> gen_bl_family(i64 max_d) {
    std::vector<BLMember> out;
    for (i64 a = 1; a * a + 4 * a <= max_d; a += 2)
        for (i64 m = 1; a * a * m * m + 4 * a <= max_d; m += 2) {
            const i64 d = a * a * m * m + 4 * a;
            if (is_squarefree(d))
                out.push_back({a, m, d});
        }
    return out;
}

struct YokoiMember {
    i64 m;
    i64 d; ///< m^2 + 4
    friend bool operator==(const YokoiMember&, const YokoiMember&) = default;
};

/// Odd m <= max_m with m^2 + 4 squarefree.
inline std::vector<YokoiMember> gen_yokoi(i64 max_m) {
    std::vector<YokoiMember> out;
    for (i64 m = 1; m <= max_m; m += 2)
        if (is_squarefree(m * m + 4))
            out.push_back({m, m * m + 4});
    return out;
}

} // namespace rqf
