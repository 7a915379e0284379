#pragma once
// Exact distributional quantities of the scheme: the count-vector law P(sigma),
// its marginals P1 and P_{q-1}, the per-count weight T(b) (with stable handling
// of the endpoint pole/zero cancellations), its large-c approximation, and
// mu_tilde computed from a K_b vector.

#include <vector>

#include "tardos/model.hpp"
#include "tardos/special.hpp"

namespace tardos {

// Strategy parameters K_b, b = 0..c. K_0 = 0 and K_c = 1 always; a valid
// strategy further satisfies the sum rule q * sum_b K_b P1(b) = 1.
template <class R> struct KbVector {
    std::vector<R> K; // size c+1
};

template <class R> R binomial_r(int n, int k) {
    using std::exp;
    if (k < 0 || k > n)
        return R(0);
    return exp(log_gamma(R(n + 1)) - log_gamma(R(k + 1)) - log_gamma(R(n - k + 1)));
}

// Multinomial coefficient c! / prod(sigma_a!).
template <class R> R multinomial_r(int c, const std::vector<int>& sigma) {
    using std::exp;
    R lg = log_gamma(R(c + 1));
    for (int s : sigma)
        lg -= log_gamma(R(s + 1));
    return exp(lg);
}

// P(sigma) = (c choose sigma) B(kappa 1_q + sigma) / B(kappa 1_q).
template <class R> R prob_sigma(const std::vector<int>& sigma, const CodeParams& params) {
    using std::exp;
    const int q = params.q;
    const R kappa(params.kappa);
    if (static_cast<int>(sigma.size()) != q)
        throw invalid_argument_error("prob_sigma: sigma size must equal q");
    int tot = 0;
    for (int s : sigma) {
        if (s < 0)
            throw invalid_argument_error("prob_sigma: negative count");
        tot += s;
    }
    if (tot != params.c)
        throw invalid_argument_error("prob_sigma: counts must sum to c");
    std::vector<R> shifted, base;
    for (int s : sigma) {
        shifted.push_back(kappa + R(s));
        base.push_back(kappa);
    }
    return multinomial_r<R>(params.c, sigma) *
           exp(log_beta_vec(shifted) - log_beta_vec(base));
}

// P1(b) = (c choose b) B(kappa+b, kappa(q-1)+c-b) / B(kappa, kappa(q-1)).
template <class R> R p1(int b, const CodeParams& params) {
    using std::exp;
    const int c = params.c;
    if (b < 0 || b > c)
        throw invalid_argument_error("p1: b out of range");
    const R kappa(params.kappa);
    const R kq1 = kappa * R(params.q - 1);
    const R lg = log_gamma(kappa + R(b)) + log_gamma(kq1 + R(c - b)) -
                 log_gamma(kappa + kq1 + R(c)) -
                 (log_gamma(kappa) + log_gamma(kq1) - log_gamma(kappa + kq1));
    return binomial_r<R>(c, b) * exp(lg);
}

// P_{q-1}(x | b) = (c-b choose x) B(kappa 1_{q-1} + x) / B(kappa 1_{q-1}),
// the law of the remaining q-1 counts given one count equals b.
template <class R> R p_qmin1(const std::vector<int>& x, int b, const CodeParams& params) {
    using std::exp;
    const int q = params.q;
    const R kappa(params.kappa);
    if (static_cast<int>(x.size()) != q - 1)
        throw invalid_argument_error("p_qmin1: x size must equal q-1");
    int tot = 0;
    for (int v : x) {
        if (v < 0)
            throw invalid_argument_error("p_qmin1: negative count");
        tot += v;
    }
    if (tot != params.c - b)
        throw invalid_argument_error("p_qmin1: counts must sum to c-b");
    std::vector<R> shifted, base;
    for (int v : x) {
        shifted.push_back(kappa + R(v));
        base.push_back(kappa);
    }
    return multinomial_r<R>(params.c - b, x) *
           exp(log_beta_vec(shifted) - log_beta_vec(base));
}

// T(b) = {1/2 - kappa + (b/c)(kappa q - 1)} * c
//        * Gamma(b+kappa-1/2)/Gamma(b+kappa)
//        * Gamma(c-b+kappa(q-1)-1/2)/Gamma(c-b+kappa(q-1)).
//
// At b=0 the brace equals -(kappa-1/2) and the first Gamma ratio has argument
// kappa-1/2; at b=c the brace equals kappa(q-1)-1/2 against the second ratio.
// In both cases brace * Gamma(u) == +-Gamma(u+1) identically in kappa, so the
// endpoints are evaluated in that cancelled form; this keeps the binary
// kappa = 1/2 scheme finite instead of producing 0 * inf.
template <class R> R t_exact(int b, const CodeParams& params) {
    using std::exp;
    const int c = params.c;
    const int q = params.q;
    if (b < 0 || b > c)
        throw invalid_argument_error("t_exact: b out of range");
    const R kappa(params.kappa);
    const R kq1 = kappa * R(q - 1);
    const R half = R(1) / 2;
    if (b == 0) {
        return -R(c) * exp(log_gamma(kappa + half) - log_gamma(kappa) +
                           log_gamma(R(c) + kq1 - half) - log_gamma(R(c) + kq1));
    }
    if (b == c) {
        return R(c) * exp(log_gamma(R(c) + kappa - half) - log_gamma(R(c) + kappa) +
                          log_gamma(kq1 + half) - log_gamma(kq1));
    }
    const R brace = half - kappa + R(b) / R(c) * (kappa * R(q) - 1);
    const R u1 = R(b) + kappa - half;
    const R u2 = R(c - b) + kq1 - half;
    if (!(u1 > 0) || !(u2 > 0))
        throw numeric_error("t_exact: gamma argument pole at interior b");
    return brace * R(c) *
           exp(log_gamma(u1) - log_gamma(R(b) + kappa) + log_gamma(u2) -
               log_gamma(R(c - b) + kq1));
}

// Large-c approximation T(cx) ~ (1/2 - kappa + x(kappa q - 1)) / sqrt(x(1-x)).
template <class R> R t_approx(const R& x, const CodeParams& params) {
    using std::sqrt;
    if (!(x > 0) || !(x < 1))
        throw invalid_argument_error("t_approx: x must lie strictly in (0,1)");
    const R kappa(params.kappa);
    const R half = R(1) / 2;
    return (half - kappa + x * (kappa * R(params.q) - 1)) / sqrt(x * (1 - x));
}

// mu_tilde = q * sum_b K_b P1(b) T(b).
template <class R> R mu_tilde(const KbVector<R>& K, const CodeParams& params) {
    const int c = params.c;
    if (static_cast<int>(K.K.size()) != c + 1)
        throw invalid_argument_error("mu_tilde: K size must equal c+1");
    R acc(0);
    for (int b = 0; b <= c; ++b)
        acc += K.K[static_cast<std::size_t>(b)] * p1<R>(b, params) * t_exact<R>(b, params);
    return R(params.q) * acc;
}

// Enumerates all count vectors sigma with q nonnegative components summing to
// c, invoking fn(sigma) for each. Used by the brute-force routes and tests.
template <class Fn>
void for_each_count_vector(int q, int c, Fn&& fn) {
    std::vector<int> sigma(static_cast<std::size_t>(q), 0);
    // Recursive descent over components; the last component absorbs the rest.
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == q - 1) {
            sigma[static_cast<std::size_t>(pos)] = remaining;
            fn(const_cast<const std::vector<int>&>(sigma));
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            sigma[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    rec(rec, 0, c);
}

} // namespace tardos
