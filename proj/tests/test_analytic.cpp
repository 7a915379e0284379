#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tardos/analytic.hpp"
#include "tardos/attacks.hpp"
#include "tardos/kb.hpp"
#include "test_util.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <vector>

using namespace tardos;
using F50 = boost::multiprecision::cpp_bin_float_50;

namespace {

CodeParams make_params(int q, int c, double kappa) {
    CodeParams p;
    p.q = q;
    p.c = c;
    p.kappa = kappa;
    return p;
}

// Reference values below come from an independent 25-digit implementation
// evaluated at the decimal parameter values; the binary64 kappa used here sits
// ~1e-17 away, so golden comparisons are held to 1e-14 relative.
constexpr double golden_rel = 1e-14;

} // namespace

TEST_CASE("P1 matches reference values and normalizes") {
    const CodeParams p = make_params(3, 5, 0.35);
    const std::vector<F50> ref{
        F50("0.41612221997889513062"), F50("0.15493912446022691034"),
        F50("0.11306368541692233997"), F50("0.098407281751765740349"),
        F50("0.096960115843651538285"), F50("0.12050757254853834044")};
    F50 tot(0);
    for (int b = 0; b <= 5; ++b) {
        const F50 v = p1<F50>(b, p);
        CHECK(testutil::within_rel(v, ref[static_cast<std::size_t>(b)], F50(golden_rel)));
        tot += v;
    }
    CHECK(testutil::within_abs(tot, F50(1), F50(1e-40)));
    CHECK_THROWS_AS(p1<double>(6, p), invalid_argument_error);
    CHECK_THROWS_AS(p1<double>(-1, p), invalid_argument_error);
}

TEST_CASE("prob_sigma matches reference value and normalizes") {
    const CodeParams p = make_params(3, 5, 0.35);
    CHECK(testutil::within_rel(prob_sigma<F50>({2, 2, 1}, p), F50("0.017458363189377714261"),
                               F50(golden_rel)));
    F50 tot(0);
    for_each_count_vector(3, 5, [&](const std::vector<int>& sigma) {
        tot += prob_sigma<F50>(sigma, p);
    });
    CHECK(testutil::within_abs(tot, F50(1), F50(1e-40)));
    CHECK_THROWS_AS(prob_sigma<double>({2, 2}, p), invalid_argument_error);
    CHECK_THROWS_AS(prob_sigma<double>({2, 2, 2}, p), invalid_argument_error);
}

TEST_CASE("P1 is the single-count marginal of prob_sigma") {
    const CodeParams p = make_params(4, 6, 0.3);
    for (int b = 0; b <= 6; ++b) {
        F50 marg(0);
        for_each_count_vector(4, 6, [&](const std::vector<int>& sigma) {
            if (sigma[0] == b)
                marg += prob_sigma<F50>(sigma, p);
        });
        CHECK(testutil::within_abs(marg, p1<F50>(b, p), F50(1e-42)));
    }
}

TEST_CASE("prob_sigma factors as P1 times the conditional law") {
    const CodeParams p = make_params(3, 5, 0.35);
    for_each_count_vector(3, 5, [&](const std::vector<int>& sigma) {
        const int b = sigma[0];
        const std::vector<int> x{sigma[1], sigma[2]};
        const F50 lhs = prob_sigma<F50>(sigma, p);
        const F50 rhs = p1<F50>(b, p) * p_qmin1<F50>(x, b, p);
        CHECK(testutil::within_abs(lhs, rhs, F50(1e-42)));
    });
    // The conditional law itself normalizes.
    for (int b = 0; b <= 5; ++b) {
        F50 tot(0);
        for (int x0 = 0; x0 <= 5 - b; ++x0)
            tot += p_qmin1<F50>({x0, 5 - b - x0}, b, p);
        CHECK(testutil::within_abs(tot, F50(1), F50(1e-42)));
    }
}

TEST_CASE("T(b) matches reference values at q=3 c=20") {
    struct Spot {
        double kappa;
        int b;
        const char* value;
    };
    const std::vector<Spot> spots{
        {0.2, 0, "-1.275650925857777264740929"},
        {0.2, 1, "1.833157626788213254516594"},
        {0.2, 10, "0.2093639151677232539311987"},
        {0.2, 19, "-0.4486172150416152870736108"},
        {0.2, 20, "2.184672375332866111530344"},
        {0.9, 0, "-3.619216584450171620630539"},
        {0.9, 1, "-1.297925947526958098433021"},
        {0.9, 10, "0.8495854710539281055838914"},
        {0.9, 19, "3.864255612575681009554662"},
        {0.9, 20, "5.580983352612559954242356"},
    };
    for (const Spot& s : spots) {
        const CodeParams p = make_params(3, 20, s.kappa);
        CHECK(testutil::within_rel(t_exact<F50>(s.b, p), F50(s.value), F50(golden_rel)));
    }
    CHECK_THROWS_AS(t_exact<double>(21, make_params(3, 20, 0.2)), invalid_argument_error);
}

TEST_CASE("binary kappa=1/2 endpoints stay finite via the cancelled form") {
    // Naive evaluation hits 0 * Gamma(0) at both ends; the cancelled form must
    // give the finite limits. Interior T vanishes identically there.
    const CodeParams p = make_params(2, 6, 0.5);
    const F50 t0 = t_exact<F50>(0, p);
    const F50 tc = t_exact<F50>(6, p);
    CHECK(t0 < 0);
    CHECK(t0 > -100);
    CHECK(tc > 0);
    CHECK(tc < 100);
    for (int b = 1; b <= 5; ++b)
        CHECK(testutil::within_abs(t_exact<F50>(b, p), F50(0), F50(1e-45)));
    // c=1: the single interior-free case, T(1) = 2/pi exactly.
    const CodeParams p1c = make_params(2, 1, 0.5);
    CHECK(testutil::within_abs(t_exact<F50>(1, p1c), 2 / pi_const<F50>(), F50(1e-45)));
    CHECK(testutil::within_rel(t_exact<F50>(1, p1c), F50("0.6366197723675813430755351"),
                               F50(1e-24)));
}

TEST_CASE("t_approx is the large-c limit of t_exact") {
    const double x = 0.3;
    auto rel_dev = [&](int c) {
        const CodeParams p = make_params(3, c, 0.35);
        const double te = t_exact<double>(static_cast<int>(x * c), p);
        const double ta = t_approx<double>(x, p);
        return std::abs(te / ta - 1.0);
    };
    const double d100 = rel_dev(100);
    const double d400 = rel_dev(400);
    CHECK(d100 < 0.02);
    CHECK(d400 < d100);
    CHECK_THROWS_AS(t_approx<double>(0.0, make_params(3, 10, 0.35)), invalid_argument_error);
    CHECK_THROWS_AS(t_approx<double>(1.0, make_params(3, 10, 0.35)), invalid_argument_error);
}

TEST_CASE("K_b closed forms match reference values") {
    const CodeParams p7 = make_params(3, 7, 0.35);

    const KbVector<F50> maj = kb_for<F50>(Strategy::majority(3, 7), p7);
    const std::vector<F50> maj_ref{F50(0), F50(0), F50(0),
                                   F50("0.243441971383147853736089"),
                                   F50(1), F50(1), F50(1), F50(1)};
    for (int b = 0; b <= 7; ++b)
        CHECK(testutil::within_rel(maj.K[static_cast<std::size_t>(b)],
                                   maj_ref[static_cast<std::size_t>(b)], F50(golden_rel)));

    const KbVector<F50> min = kb_for<F50>(Strategy::minority(3, 7), p7);
    const std::vector<F50> min_ref{F50(0),
                                   F50("0.8933065224667391850054389"),
                                   F50("0.6730922098569157392686804"),
                                   F50("0.6257949125596184419713831"),
                                   F50(0), F50(0), F50(0), F50(1)};
    for (int b = 0; b <= 7; ++b)
        CHECK(testutil::within_rel(min.K[static_cast<std::size_t>(b)],
                                   min_ref[static_cast<std::size_t>(b)], F50(golden_rel)));
}

TEST_CASE("majority K_2 at q=3 c=5 equals 3 kappa / (8 kappa + 4)") {
    // Closed form in kappa, derived by hand from the conditional Dirichlet
    // integrals; evaluated at the same binary kappa so only roundoff remains.
    for (double kappa : {0.26, 0.35, 0.5, 0.75}) {
        const CodeParams p = make_params(3, 5, kappa);
        const KbVector<F50> K = kb_for<F50>(Strategy::majority(3, 5), p);
        const F50 k(kappa);
        CHECK(testutil::within_rel(K.K[2], 3 * k / (8 * k + 4), F50(1e-25)));
        CHECK(testutil::within_abs(K.K[1], F50(0), F50(1e-30)));
        CHECK(testutil::within_rel(K.K[3], F50(1), F50(1e-30)));
    }
}

TEST_CASE("interleaving K_b equals b/c through the class-1 route") {
    for (int c : {3, 5, 8}) {
        const CodeParams p = make_params(3, c, 0.4);
        const KbVector<F50> K = kb_for<F50>(Strategy::interleaving(3, c), p);
        for (int b = 0; b <= c; ++b) {
            // The route reproduces the stored weight exactly; the weight itself
            // is b/c rounded once to double when the builtin table is built.
            CHECK(testutil::within_abs(K.K[static_cast<std::size_t>(b)],
                                       F50(static_cast<double>(b) / c), F50(1e-40)));
            CHECK(testutil::within_abs(K.K[static_cast<std::size_t>(b)], F50(b) / c,
                                       F50(1e-15)));
        }
    }
}

TEST_CASE("closed forms agree with brute force for the builtins") {
    for (int q : {2, 3, 4}) {
        for (int c : {3, 5, 7}) {
            const CodeParams p = make_params(q, c, 0.4);
            for (const char* name : {"interleaving", "majority", "minority"}) {
                const Strategy s = Strategy::builtin_by_name(name, p);
                const KbVector<F50> fast = kb_for<F50>(s, p);
                const KbVector<F50> slow = kb_bruteforce<F50>(s, p);
                for (int b = 1; b <= c; ++b)
                    CHECK(testutil::within_abs(fast.K[static_cast<std::size_t>(b)],
                                               slow.K[static_cast<std::size_t>(b)], F50(1e-25)));
                // Interleaving's stored weights are b/c rounded to double, so
                // its defect floor sits at that quantization; the voting
                // tables are exact and stay at working precision.
                const F50 defect_tol =
                    std::string(name) == "interleaving" ? F50(1e-15) : F50(1e-20);
                CHECK(testutil::within_abs(kb_sum_rule_defect(fast, p), F50(0), defect_tol));
            }
        }
    }
}

TEST_CASE("closed forms agree with brute force in double precision") {
    const CodeParams p = make_params(3, 5, 0.35);
    const Strategy s = Strategy::majority(3, 5);
    const KbVector<double> fast = kb_for<double>(s, p);
    const KbVector<double> slow = kb_bruteforce<double>(s, p);
    for (int b = 0; b <= 5; ++b)
        CHECK(testutil::within_abs(fast.K[static_cast<std::size_t>(b)],
                                   slow.K[static_cast<std::size_t>(b)], 1e-12));
}

TEST_CASE("class-1 route handles non-normalized custom tables") {
    // Arbitrary weight tables: Psi need not define a distribution, and the
    // sum rule need not hold, but the two K_b routes must still agree.
    const CodeParams p = make_params(4, 6, 0.3);
    Strategy s;
    s.kind = StrategyKind::class1;
    s.name = "custom";
    s.c1.q = 4;
    s.c1.c = 6;
    s.c1.w.assign(static_cast<std::size_t>(7 * 4), 0.0);
    s.c1.W1.assign(static_cast<std::size_t>(7 * 4 * 7), 0.0);
    for (int b = 0; b <= 6; ++b)
        for (int ell = 0; ell < 4; ++ell) {
            s.c1.w[static_cast<std::size_t>(b * 4 + ell)] = 0.3 + 0.1 * b + 0.05 * ell;
            for (int z = 0; z <= 6; ++z)
                s.c1.W1[static_cast<std::size_t>((b * 4 + ell) * 7 + z)] =
                    ((b * 3 + ell * 5 + z * 7) % 11) / 11.0;
        }
    const KbVector<F50> fast = kb_for<F50>(s, p);
    const KbVector<F50> slow = kb_bruteforce<F50>(s, p);
    for (int b = 1; b <= 6; ++b)
        CHECK(testutil::within_rel(fast.K[static_cast<std::size_t>(b)],
                                   slow.K[static_cast<std::size_t>(b)], F50(1e-25)));
}

TEST_CASE("class-2 route handles non-normalized custom tables") {
    const CodeParams p = make_params(4, 6, 0.3);
    Strategy s;
    s.kind = StrategyKind::class2;
    s.name = "custom";
    s.c2.q = 4;
    s.c2.c = 6;
    s.c2.w.assign(7, 0.0);
    s.c2.W2.assign(static_cast<std::size_t>(7 * 7), 0.0);
    for (int b = 0; b <= 6; ++b) {
        // 3(b+1)/16 divides exactly by 1..4 in binary, so the class-1
        // embedding below ( w/(ell+1) ) introduces no table rounding.
        s.c2.w[static_cast<std::size_t>(b)] = 3.0 * (b + 1) / 16.0;
        for (int z = 0; z <= 6; ++z)
            s.c2.W2[static_cast<std::size_t>(b * 7 + z)] = ((b * 5 + z * 3) % 7) / 7.0;
    }
    const KbVector<F50> fast = kb_for<F50>(s, p);
    const KbVector<F50> slow = kb_bruteforce<F50>(s, p);
    for (int b = 1; b <= 6; ++b)
        CHECK(testutil::within_rel(fast.K[static_cast<std::size_t>(b)],
                                   slow.K[static_cast<std::size_t>(b)], F50(1e-25)));

    // The same spec embedded as class 1 (w1(b,ell) = w2(b)/(ell+1),
    // W1(b,ell,z) = W2(b,z)) reproduces identical K_b through the other form.
    Strategy e;
    e.kind = StrategyKind::class1;
    e.name = "custom";
    e.c1.q = 4;
    e.c1.c = 6;
    e.c1.w.assign(static_cast<std::size_t>(7 * 4), 0.0);
    e.c1.W1.assign(static_cast<std::size_t>(7 * 4 * 7), 0.0);
    for (int b = 0; b <= 6; ++b)
        for (int ell = 0; ell < 4; ++ell) {
            e.c1.w[static_cast<std::size_t>(b * 4 + ell)] =
                s.c2.w[static_cast<std::size_t>(b)] / (ell + 1);
            for (int z = 0; z <= 6; ++z)
                e.c1.W1[static_cast<std::size_t>((b * 4 + ell) * 7 + z)] =
                    s.c2.W2[static_cast<std::size_t>(b * 7 + z)];
        }
    const KbVector<F50> emb = kb_for<F50>(e, p);
    for (int b = 1; b <= 6; ++b)
        CHECK(testutil::within_rel(emb.K[static_cast<std::size_t>(b)],
                                   fast.K[static_cast<std::size_t>(b)], F50(1e-25)));
}

TEST_CASE("brute force refuses oversized enumerations") {
    const CodeParams p = make_params(4, 1000, 0.35);
    Strategy s;
    s.kind = StrategyKind::class3;
    s.name = "custom";
    s.c3.q = 4;
    s.c3.c = 1000;
    s.c3.W3.assign(static_cast<std::size_t>(1001 * 1001), 0);
    CHECK_THROWS_WITH_AS(kb_bruteforce<double>(s, p), doctest::Contains("term guard"),
                         numeric_error);
}

TEST_CASE("mu_tilde matches reference values") {
    struct Case {
        int q, c;
        const char* strategy;
        const char* value;
    };
    const std::vector<Case> cases{
        {3, 5, "majority", "0.88031500856832507824412"},
        {3, 7, "majority", "0.8801022152816347420169925"},
        {3, 7, "mu_min", "0.8713417956098130898383677"},
        {3, 5, "interleaving", "0.8830218595305004093670632"},
    };
    for (const Case& cse : cases) {
        const CodeParams p = make_params(cse.q, cse.c, 0.35);
        const Strategy s = Strategy::builtin_by_name(cse.strategy, p);
        const F50 mu = mu_tilde(kb_for<F50>(s, p), p);
        CHECK(testutil::within_rel(mu, F50(cse.value), F50(golden_rel)));
    }
}

TEST_CASE("mu_min K_b and mu_tilde across its ranking transitions") {
    struct Case {
        double kappa;
        std::vector<const char*> K;
        const char* mu;
    };
    const std::vector<Case> cases{
        {0.30,
         {"0", "0", "0", "0.2213541666666666666666667", "1", "1", "1", "1"},
         "0.7984681724422734257514881"},
        {0.34,
         {"0", "0", "0", "0.8713121118012422360248447", "0.3035714285714285714285714", "1", "1",
          "1"},
         "0.8644038243901665539984639"},
        {0.36,
         {"0", "0.5363683578237216646819047", "0.5723930982745686421605401",
          "0.8672168042010502625656414", "0.313953488372093023255814",
          "0.2093023255813953488372093", "0", "1"},
         "0.865754402169933394419327"},
    };
    for (const Case& cse : cases) {
        const CodeParams p = make_params(3, 7, cse.kappa);
        const KbVector<F50> K = kb_for<F50>(Strategy::mu_min(p), p);
        for (int b = 0; b <= 7; ++b)
            CHECK(testutil::within_rel(K.K[static_cast<std::size_t>(b)],
                                       F50(cse.K[static_cast<std::size_t>(b)]),
                                       F50(golden_rel)));
        CHECK(testutil::within_rel(mu_tilde(K, p), F50(cse.mu), F50(golden_rel)));
    }
}

TEST_CASE("the two mu_tilde routes agree") {
    // mu_tilde contracts over K_b; mu_tilde_direct enumerates count vectors
    // and goes through the double-precision theta, so agreement is capped
    // near 1e-15 relative.
    for (int q : {2, 3}) {
        for (int c : {3, 5, 7}) {
            const CodeParams p = make_params(q, c, 0.35);
            for (const char* name : {"interleaving", "majority", "minority", "mu_min"}) {
                const Strategy s = Strategy::builtin_by_name(name, p);
                const F50 via_kb = mu_tilde(kb_for<F50>(s, p), p);
                const F50 direct = mu_tilde_direct<F50>(s, p);
                CHECK(testutil::within_rel(via_kb, direct, F50(1e-13)));
            }
        }
    }
}

TEST_CASE("binary scheme at kappa=1/2 gives mu_tilde = 2/pi for every strategy") {
    // Interior T(b) vanish identically, so only b=c contributes and the
    // strategy drops out. kappa=1/2 is exact in binary, so the tolerance is
    // pure float50 roundoff.
    const F50 two_over_pi = 2 / pi_const<F50>();
    for (int c = 1; c <= 10; ++c) {
        const CodeParams p = make_params(2, c, 0.5);
        for (const char* name : {"interleaving", "majority", "minority"}) {
            const Strategy s = Strategy::builtin_by_name(name, p);
            CHECK(testutil::within_abs(mu_tilde(kb_for<F50>(s, p), p), two_over_pi, F50(1e-25)));
        }
        if (c <= 2)
            CHECK(testutil::within_abs(mu_tilde(kb_for<F50>(Strategy::mu_min(p), p), p),
                                       two_over_pi, F50(1e-25)));
    }
}

TEST_CASE("mu_tilde validates the K vector size") {
    const CodeParams p = make_params(3, 5, 0.35);
    KbVector<double> K;
    K.K.assign(4, 0.0);
    CHECK_THROWS_AS(mu_tilde(K, p), invalid_argument_error);
}
