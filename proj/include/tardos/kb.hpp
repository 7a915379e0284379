#pragma once
// K_b computation. Two independent routes:
//  - kb_bruteforce: direct expectation of Psi over the conditional law of the
//    other q-1 counts, enumerating count multisets with multiplicity weights;
//  - kb_class1/2/3: closed forms that replace the constrained x-sum by a
//    discrete Kronecker-delta representation over N_b-th roots of unity,
//    collapsing the cost from O(c^{q-2}) to O(q^2 c^2) or better.
// The module-level tests and the acceptance suite hold these two routes to
// each other below 1e-10 across the supported strategy classes.

#include <cstdint>
#include <vector>

#include "tardos/analytic.hpp"
#include "tardos/attacks.hpp"
#include "tardos/model.hpp"
#include "tardos/special.hpp"

namespace tardos {

inline constexpr double kb_bruteforce_term_guard = 1e8;
inline constexpr double kb_imag_residue_tol = 1e-9;

namespace detail {

// Number of labeled (q-1)-vectors with nonnegative entries summing to s.
inline double composition_count(int s, int parts) {
    double r = 1.0;
    for (int i = 1; i < parts; ++i)
        r = r * (s + i) / i;
    return r;
}

// Enumerates multisets of q-1 counts summing to s as non-increasing vectors,
// calling fn(x, labeled_multiplicity). The multiplicity is the number of
// labeled arrangements, (q-1)! / prod over repeated values.
template <class Fn> void for_each_count_multiset(int s, int parts, Fn&& fn) {
    std::vector<int> x(static_cast<std::size_t>(parts), 0);
    auto rec = [&](auto&& self, int pos, int remaining, int cap) -> void {
        if (pos == parts - 1) {
            if (remaining <= cap) {
                x[static_cast<std::size_t>(pos)] = remaining;
                double mult = 1.0;   // (parts)! / prod(run lengths!)
                double fact = 1.0;
                for (int i = 1; i <= parts; ++i)
                    fact *= i;
                int run = 1;
                for (int i = 1; i < parts; ++i) {
                    if (x[static_cast<std::size_t>(i)] == x[static_cast<std::size_t>(i - 1)]) {
                        ++run;
                    } else {
                        for (int r = 2; r <= run; ++r)
                            fact /= r;
                        run = 1;
                    }
                }
                for (int r = 2; r <= run; ++r)
                    fact /= r;
                mult = fact;
                fn(const_cast<const std::vector<int>&>(x), mult);
            }
            return;
        }
        for (int v = (remaining + parts - 1 - pos) / (parts - pos); v <= cap && v <= remaining;
             ++v) {
            // v must be at least ceil(remaining/(parts-pos)) to keep the
            // suffix non-increasing and able to absorb the remainder.
            x[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1, remaining - v, v);
        }
    };
    rec(rec, 0, s, s);
}

// Per-b root-of-unity workspace for the closed-form routes.
template <class R> struct RootWorkspace {
    int N = 0;
    std::vector<cx<R>> tau_pow; // tau^j for j in 0..N-1

    RootWorkspace(int b, int q, int c) {
        using std::cos;
        using std::sin;
        int bound = c - b;
        if (std::abs(c - b * q) > bound)
            bound = std::abs(c - b * q);
        if ((c - b) * (q - 2) > bound)
            bound = (c - b) * (q - 2);
        N = bound + 1;
        tau_pow.resize(static_cast<std::size_t>(N));
        const R two_pi = 2 * pi_const<R>();
        for (int j = 0; j < N; ++j) {
            const R a = two_pi * R(j) / R(N);
            tau_pow[static_cast<std::size_t>(j)] = cx<R>(cos(a), sin(a));
        }
    }

    // tau^e for any integer e (negative allowed).
    const cx<R>& pw(long long e) const {
        long long r = e % N;
        if (r < 0)
            r += N;
        return tau_pow[static_cast<std::size_t>(r)];
    }
};

template <class R> R log_beta_ones(const R& kappa, int n) {
    return R(n) * log_gamma(kappa) - log_gamma(R(n) * kappa);
}

} // namespace detail

// K_b by direct enumeration. K_0 := 0 and K_c comes out as 1 for any valid
// strategy. Refuses when the labeled enumeration would exceed ~1e8 terms.
template <class R> KbVector<R> kb_bruteforce(const Strategy& s, const CodeParams& params) {
    using std::exp;
    const int q = params.q;
    const int c = params.c;
    const R kappa(params.kappa);
    if (s.q() != q || s.c() != c)
        throw invalid_argument_error("kb_bruteforce: strategy dimensions do not match params");

    double budget = 0.0;
    for (int b = 1; b <= c; ++b)
        budget += detail::composition_count(c - b, q - 1);
    if (budget > kb_bruteforce_term_guard)
        throw numeric_error("kb_bruteforce: enumeration exceeds the term guard");

    KbVector<R> out;
    out.K.assign(static_cast<std::size_t>(c + 1), R(0));

    const R log_base = detail::log_beta_ones(kappa, q - 1);
    std::vector<int> labeled(static_cast<std::size_t>(q - 1), 0);
    for (int b = 1; b <= c; ++b) {
        R acc(0);
        detail::for_each_count_multiset(c - b, q - 1, [&](const std::vector<int>& x, double mult) {
            // P_{q-1}(x|b) for one labeled arrangement, times the number of
            // arrangements; psi is permutation invariant.
            R lg = log_gamma(R(c - b + 1));
            R lbs(0);
            for (int v : x) {
                lg -= log_gamma(R(v + 1));
                lbs += log_gamma(kappa + R(v));
            }
            lbs -= log_gamma(kappa * R(q - 1) + R(c - b));
            const R p = exp(lg + lbs - log_base);
            acc += R(mult) * p * detail::psi_tables<R>(s, b, x.data(), q - 1);
        });
        out.K[static_cast<std::size_t>(b)] = acc;
    }
    return out;
}

// Class-1 closed form:
//   K_b = (c-b)! / (N_b Gamma(c-b+kappa(q-1)) B(kappa 1_{q-1}))
//         * sum_a tau^{a(c-b)} sum_ell (q-1 choose ell)
//           G_{b a ell}^{q-1-ell} w(b,ell) v_{b a}^ell,
//   G_{b a ell} = sum_{z in 0..c-b, z != b} Gamma(kappa+z) W(b,ell,z) / (tau^{az} z!),
//   v_{b a}     = Gamma(kappa+b) / (tau^{ab} b!).
template <class R> KbVector<R> kb_class1(const Class1Spec& spec, const CodeParams& params) {
    using std::abs;
    using std::exp;
    const int q = params.q;
    const int c = params.c;
    const R kappa(params.kappa);
    if (spec.q != q || spec.c != c)
        throw invalid_argument_error("kb_class1: spec dimensions do not match params");

    KbVector<R> out;
    out.K.assign(static_cast<std::size_t>(c + 1), R(0));

    std::vector<R> gz(static_cast<std::size_t>(c + 1));
    for (int z = 0; z <= c; ++z)
        gz[static_cast<std::size_t>(z)] = exp(log_gamma(kappa + R(z)) - log_gamma(R(z + 1)));

    const R log_bk = detail::log_beta_ones(kappa, q - 1);
    for (int b = 1; b <= c; ++b) {
        const detail::RootWorkspace<R> ws(b, q, c);
        const R vmag = gz[static_cast<std::size_t>(b)];
        cx<R> acc(R(0), R(0));
        for (int a = 0; a < ws.N; ++a) {
            const cx<R> v = vmag * conj(ws.pw(1LL * a * b));
            cx<R> inner(R(0), R(0));
            for (int ell = 0; ell < q; ++ell) {
                cx<R> G(R(0), R(0));
                for (int z = 0; z <= c - b; ++z) {
                    if (z == b)
                        continue;
                    G += (gz[static_cast<std::size_t>(z)] * R(spec.W_at(b, ell, z))) *
                         conj(ws.pw(1LL * a * z));
                }
                inner += (binomial_r<R>(q - 1, ell) * R(spec.w_at(b, ell))) *
                         (powi(G, q - 1 - ell) * powi(v, ell));
            }
            acc += ws.pw(1LL * a * (c - b)) * inner;
        }
        const R pref = exp(log_gamma(R(c - b + 1)) - log_gamma(R(c - b) + kappa * R(q - 1)) -
                           log_bk) /
                       R(ws.N);
        const cx<R> Kb = acc * pref;
        if (abs(Kb.im) > R(kb_imag_residue_tol))
            throw numeric_error("kb_class1: imaginary residue exceeds tolerance");
        out.K[static_cast<std::size_t>(b)] = Kb.re;
    }
    out.K[0] = R(0);
    return out;
}

namespace detail {

// Shared assembly for the class-2/3 collapsed form
//   K_b = b!(c-b)! w(b) / (q N_b Gamma(kappa+b) Gamma(c-b+kappa(q-1))
//         B(kappa 1_{q-1})) * sum_a tau^{ac} [ (G_{ba}+v_{ba})^q - G_{ba}^q ].
template <class R, class WFn>
KbVector<R> kb_collapsed(const CodeParams& params, WFn&& W_at, const std::vector<double>& w) {
    using std::abs;
    using std::exp;
    const int q = params.q;
    const int c = params.c;
    const R kappa(params.kappa);

    KbVector<R> out;
    out.K.assign(static_cast<std::size_t>(c + 1), R(0));

    std::vector<R> gz(static_cast<std::size_t>(c + 1));
    for (int z = 0; z <= c; ++z)
        gz[static_cast<std::size_t>(z)] = exp(log_gamma(kappa + R(z)) - log_gamma(R(z + 1)));

    const R log_bk = log_beta_ones(kappa, q - 1);
    for (int b = 1; b <= c; ++b) {
        const RootWorkspace<R> ws(b, q, c);
        const R vmag = gz[static_cast<std::size_t>(b)];
        cx<R> acc(R(0), R(0));
        for (int a = 0; a < ws.N; ++a) {
            const cx<R> v = vmag * conj(ws.pw(1LL * a * b));
            cx<R> G(R(0), R(0));
            for (int z = 0; z <= c - b; ++z) {
                if (z == b)
                    continue;
                const double wz = W_at(b, z);
                if (wz == 0.0)
                    continue;
                G += (gz[static_cast<std::size_t>(z)] * R(wz)) * conj(ws.pw(1LL * a * z));
            }
            acc += ws.pw(1LL * a * c) * (powi(G + v, q) - powi(G, q));
        }
        const R pref = exp(log_gamma(R(b + 1)) + log_gamma(R(c - b + 1)) -
                           log_gamma(kappa + R(b)) - log_gamma(R(c - b) + kappa * R(q - 1)) -
                           log_bk) *
                       R(w[static_cast<std::size_t>(b)]) / (R(q) * R(ws.N));
        const cx<R> Kb = acc * pref;
        if (abs(Kb.im) > R(kb_imag_residue_tol))
            throw numeric_error("kb_class2: imaginary residue exceeds tolerance");
        out.K[static_cast<std::size_t>(b)] = Kb.re;
    }
    out.K[0] = R(0);
    return out;
}

} // namespace detail

template <class R> KbVector<R> kb_class2(const Class2Spec& spec, const CodeParams& params) {
    if (spec.q != params.q || spec.c != params.c)
        throw invalid_argument_error("kb_class2: spec dimensions do not match params");
    return detail::kb_collapsed<R>(
        params, [&](int b, int z) { return spec.W_at(b, z); }, spec.w);
}

template <class R> KbVector<R> kb_class3(const Class3Spec& spec, const CodeParams& params) {
    if (spec.q != params.q || spec.c != params.c)
        throw invalid_argument_error("kb_class3: spec dimensions do not match params");
    const std::vector<double> ones(static_cast<std::size_t>(params.c + 1), 1.0);
    return detail::kb_collapsed<R>(
        params, [&](int b, int z) { return spec.W_at(b, z) ? 1.0 : 0.0; }, ones);
}

// Dispatch to the fast route matching the strategy's class.
template <class R> KbVector<R> kb_for(const Strategy& s, const CodeParams& params) {
    switch (s.kind) {
    case StrategyKind::class1:
        return kb_class1<R>(s.c1, params);
    case StrategyKind::class2:
        return kb_class2<R>(s.c2, params);
    default:
        return kb_class3<R>(s.c3, params);
    }
}

// Sum-rule defect q * sum_b K_b P1(b) - 1; zero for every valid strategy.
template <class R> R kb_sum_rule_defect(const KbVector<R>& K, const CodeParams& params) {
    R acc(0);
    for (int b = 0; b <= params.c; ++b)
        acc += K.K[static_cast<std::size_t>(b)] * p1<R>(b, params);
    return R(params.q) * acc - R(1);
}

// mu_tilde by exhaustive enumeration over count vectors (the first expression
// of its definition); independent oracle for the K_b-based form.
template <class R> R mu_tilde_direct(const Strategy& s, const CodeParams& params) {
    const int q = params.q;
    const int c = params.c;
    std::vector<R> T(static_cast<std::size_t>(c + 1));
    for (int b = 0; b <= c; ++b)
        T[static_cast<std::size_t>(b)] = t_exact<R>(b, params);
    R acc(0);
    for_each_count_vector(q, c, [&](const std::vector<int>& sigma) {
        const R P = prob_sigma<R>(sigma, params);
        CountVector cv{sigma};
        const std::vector<double> th = theta(s, cv);
        R inner(0);
        for (int alpha = 0; alpha < q; ++alpha)
            inner += R(th[static_cast<std::size_t>(alpha)]) *
                     T[static_cast<std::size_t>(sigma[static_cast<std::size_t>(alpha)])];
        acc += P * inner;
    });
    return acc;
}

} // namespace tardos
