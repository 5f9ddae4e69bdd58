#include <random>

#include <gtest/gtest.h>

#include "rqf/theorem_lab.hpp"

using namespace rqf;

TEST(Family, Discriminant) {
    EXPECT_EQ((FamilyParams{3, 1, 5}.d()), 69);
    EXPECT_EQ((FamilyParams{5, 1, 3}.d()), 85);
    EXPECT_THROW((FamilyParams{1'000'000, 1'000'000, 3}.d()), input_error);
}

TEST(Hypothesis, Reasons) {
    EXPECT_TRUE(check_hypothesis({3, 1, 5}).ok);
    EXPECT_EQ(check_hypothesis({3, 1, 2}).reason, "p is not an odd prime");
    EXPECT_EQ(check_hypothesis({3, 1, 9}).reason, "p is not an odd prime");
    EXPECT_EQ(check_hypothesis({1, 1, 5}).reason, "a must exceed 1");
    EXPECT_EQ(check_hypothesis({3, 0, 5}).reason, "m must be at least 1");
    EXPECT_EQ(check_hypothesis({3, 1, 3}).reason, "d is not squarefree");
}

TEST(QuadInt, ParityEnforced) {
    EXPECT_NO_THROW(QuadInt::make(1, 1, 5));
    EXPECT_THROW(QuadInt::make(1, 0, 5), input_error);
    EXPECT_THROW(QuadInt::make(1, 1, 7), input_error);
    EXPECT_NO_THROW(QuadInt::make(2, 4, 7));
}

TEST(QuadInt, AlphaBetaExamples) {
    const QuadInt alpha = make_alpha(7, 1, 69);
    EXPECT_EQ(alpha, QuadInt::make(7, -1, 69));
    EXPECT_EQ(alpha.norm(), -5);

    const QuadInt beta = make_beta({3, 1, 5});
    EXPECT_EQ(beta, QuadInt::make(13, 1, 69));
    EXPECT_EQ(beta.norm(), 25);

    EXPECT_EQ(make_beta({5, 1, 3}), QuadInt::make(11, 1, 85));
    EXPECT_THROW(make_beta({3, 1, 3}), input_error);
}

TEST(QuadInt, NormIsMultiplicative) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<i64> coef(-10'000, 10'000);
    for (i64 d : {5, 13, 69, 85, 2, 3, 7}) {
        for (int i = 0; i < 300; ++i) {
            i64 s1 = coef(rng), t1 = coef(rng), s2 = coef(rng), t2 = coef(rng);
            if (d % 4 == 1) {
                t1 += (s1 - t1) & 1;
                t2 += (s2 - t2) & 1;
            } else {
                s1 *= 2, t1 *= 2, s2 *= 2, t2 *= 2;
            }
            const QuadInt a = QuadInt::make(s1, t1, d), b = QuadInt::make(s2, t2, d);
            ASSERT_EQ((a * b).norm(), a.norm() * b.norm());
        }
    }
}

TEST(Descent, ComposeExamples) {
    const FamilyParams fp{3, 1, 5};
    const DescentOutcome beta = compose_descent(fp, 7, 1, false);
    EXPECT_EQ(beta.X_num, 22);
    EXPECT_EQ(beta.Y_num, -6);
    EXPECT_FALSE(beta.integral);
    EXPECT_FALSE(beta.norm_preserved.has_value());

    const DescentOutcome conj = compose_descent(fp, 7, 1, true);
    EXPECT_TRUE(conj.integral);
    EXPECT_EQ(*conj.X, 16);
    EXPECT_EQ(*conj.Y, 2);
    EXPECT_TRUE(*conj.norm_preserved);

    const DescentOutcome back = compose_descent(fp, 16, 2, false);
    EXPECT_TRUE(back.integral);
    EXPECT_EQ(*back.X, 7);
    EXPECT_EQ(*back.Y, -1);
    EXPECT_TRUE(*back.norm_preserved);
}

TEST(Descent, RejectsNonSolutions) {
    EXPECT_THROW(compose_descent({3, 1, 5}, 8, 1, false), input_error);
}

TEST(Descent, IntegralityRecord) {
    const IntegralityRecord r = descent_integrality({3, 1, 5}, 7, 1);
    EXPECT_FALSE(r.beta_integral);
    EXPECT_TRUE(r.conj_integral);
}

TEST(Descent, CaseAnalysis) {
    const FamilyParams fp{3, 1, 5};
    EXPECT_EQ(case_analysis(fp, 7, 1), DescentCase::premise_fails);
    EXPECT_EQ(case_analysis(fp, 16, 2), DescentCase::premise_fails);
    EXPECT_THROW(case_analysis(fp, 2, 0), input_error);
    // a hypothetical first-chain endpoint would need 1 >= 23 y^2
    EXPECT_FALSE(case1_conclusion_holds(fp, 1));
    EXPECT_TRUE(case1_conclusion_holds(fp, 0));
    EXPECT_FALSE(case2_conclusion_holds(fp, 1));
    EXPECT_TRUE(case2_conclusion_holds({1, 1, 5}, 1));
    EXPECT_EQ(to_string(DescentCase::case1_contradiction), std::string("case1-contradiction"));
}

TEST(GcdBranch, Examples) {
    const GcdBranch g = check_gcd_branch({3, 5, 5});
    EXPECT_TRUE(g.applicable);
    EXPECT_TRUE(g.p_divides_d);
    EXPECT_EQ(g.genus_rank, 2);
    EXPECT_EQ((FamilyParams{3, 5, 5}.d()), 285);

    EXPECT_FALSE(check_gcd_branch({3, 1, 5}).applicable);
    EXPECT_THROW(check_gcd_branch({3, 1, 3}), input_error);
}

TEST(Principality, Examples) {
    const PrincipalityResult r69 = principal_ideal_test(69, 5);
    EXPECT_EQ(r69.kind, Principality::principal_witness);
    ASSERT_TRUE(r69.witness);
    EXPECT_EQ(r69.witness->x, 7);
    EXPECT_EQ(r69.witness->y, 1);

    EXPECT_EQ(principal_ideal_test(85, 3).kind, Principality::non_principal_h_gt_1);
    EXPECT_EQ(principal_ideal_test(69, 7).kind, Principality::not_split);
    EXPECT_EQ(principal_ideal_test(69, 3).kind, Principality::not_split);
    EXPECT_THROW(principal_ideal_test(69, 4), input_error);
}

TEST(Verify, Examples) {
    const TheoremReport holds = verify_theorem({5, 1, 3});
    EXPECT_EQ(holds.verdict, Verdict::claim_holds);
    EXPECT_EQ(holds.summary->h, 2);
    EXPECT_FALSE(holds.representation->any());

    const TheoremReport bad = verify_theorem({3, 1, 5});
    EXPECT_EQ(bad.verdict, Verdict::claim_violated);
    EXPECT_EQ(bad.summary->h, 1);
    ASSERT_TRUE(bad.representation->minus);
    EXPECT_EQ(bad.representation->minus->x, 7);
    EXPECT_EQ(bad.representation->minus->y, 1);
    ASSERT_TRUE(bad.descent);
    EXPECT_FALSE(bad.descent->integrality.beta_integral);
    EXPECT_TRUE(bad.descent->integrality.conj_integral);
    EXPECT_EQ(bad.descent->outcome, DescentCase::premise_fails);

    const TheoremReport skip = verify_theorem({3, 1, 3});
    EXPECT_EQ(skip.verdict, Verdict::hypothesis_not_met);
    EXPECT_FALSE(skip.hypothesis_ok);
    EXPECT_EQ(skip.reason, "d is not squarefree");
}

TEST(Verify, InjectedSummaryIsCrossChecked) {
    // p = 3 splits in Q(sqrt 85) without a norm +-12; claiming h = 1 is contradictory
    auto fake = [](i64 d) {
        ClassGroupSummary s = wide_class_number(d);
        s.h = 1;
        return s;
    };
    EXPECT_THROW(verify_theorem({5, 1, 3}, fake), consistency_error);
    // a larger fake h leaves a genuine violation in place
    auto inflate = [](i64 d) {
        ClassGroupSummary s = wide_class_number(d);
        s.h = 7;
        return s;
    };
    EXPECT_EQ(verify_theorem({3, 1, 5}, inflate).verdict, Verdict::claim_violated);
}

TEST(Verify, VerdictStrings) {
    for (Verdict v : {Verdict::hypothesis_not_met, Verdict::claim_holds, Verdict::claim_violated})
        EXPECT_EQ(verdict_from_string(to_string(v)), v);
    EXPECT_FALSE(verdict_from_string("maybe"));
}

TEST(Generators, Yokoi) {
    std::vector<i64> ds;
    for (const YokoiMember& y : gen_yokoi(7))
        ds.push_back(y.d);
    EXPECT_EQ(ds, (std::vector<i64>{5, 13, 29, 53}));
}

TEST(Generators, BL) {
    const auto bl = gen_bl_family(2000);
    auto has = [&](BLMember m) { return std::find(bl.begin(), bl.end(), m) != bl.end(); };
    EXPECT_TRUE(has({1, 1, 5}));
    EXPECT_TRUE(has({3, 1, 21}));
    EXPECT_TRUE(has({7, 5, 1253}));
    for (const BLMember& m : bl) {
        ASSERT_EQ(m.d, m.a * m.a * m.m * m.m + 4 * m.a);
        ASSERT_TRUE(m.a % 2 == 1 && m.m % 2 == 1);
        ASSERT_LE(m.d, 2000);
    }
}

TEST(Generators, FourApFamilyProperties) {
    for (const FamilyParams& fp : gen_paper_family(15, 15, 47)) {
        const i64 d = fp.d();
        ASSERT_TRUE(check_hypothesis(fp).ok);
        ASSERT_EQ(d % 4, 1);
        if (gcd(fp.a * fp.m, fp.p) == 1) {
            ASSERT_EQ(splitting_type(d, fp.p), SplittingType::Split) << d;
        }
        ASSERT_EQ(make_beta(fp).norm(), Int(fp.p) * fp.p);
    }
}

TEST(Properties, BetaNormOnRandomParameters) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<i64> am(2, 400);
    std::uniform_int_distribution<i64> pp(3, 50'000);
    int checked = 0;
    while (checked < 1000) {
        FamilyParams fp{am(rng), am(rng) / 2 + 1, pp(rng)};
        if (!check_hypothesis(fp).ok)
            continue;
        ASSERT_EQ(make_beta(fp).norm(), Int(fp.p) * fp.p);
        ++checked;
    }
}

TEST(Properties, DescentOnSweep) {
    for (const FamilyParams& fp : gen_paper_family(9, 9, 23)) {
        const TheoremReport rep = verify_theorem(fp);
        const bool rep_any = rep.representation->any();
        const bool h1 = rep.summary->h == 1;
        if (rep.verdict == Verdict::claim_holds)
            ASSERT_TRUE(!rep_any && !h1);
        else
            ASSERT_TRUE(rep_any || h1);

        for (const auto& w : {rep.representation->plus, rep.representation->minus}) {
            if (!w)
                continue;
            for (bool conj : {false, true}) {
                const DescentOutcome o = compose_descent(fp, w->x, w->y, conj);
                const Int two_p = 2 * fp.p;
                // 2p | Y_num forces 2p | X_num for a solution of +-4p
                ASSERT_EQ(o.integral, o.Y_num % two_p == 0) << fp.a << "," << fp.m << "," << fp.p;
                if (o.integral) {
                    ASSERT_TRUE(*o.norm_preserved);
                }
            }
        }
    }
}
