#pragma once
// Tail probabilities of the accusation score of an innocent user under a
// colluder strategy, computed two ways:
//  - a semi-analytic route: expand the segment characteristic function about
//    k = 0 into a generalized power series, pass to the m-segment convolution
//    through log / rescale / exp, and convert each non-Gaussian term into a
//    closed-form tail correction involving Hermite functions of negative
//    degree at imaginary argument;
//  - a numeric inversion oracle (Gil-Pelaez) integrating the characteristic
//    function directly.
// With phi(k) = E[exp(-i k S)] for the per-segment score S, the tail of the
// standardized m-segment score beyond z is
//   1/2 - (1/pi) Int_0^inf Im[exp(i u z) phi(u/sqrt(m))^m] du / u.

#include <cmath>
#include <cstddef>
#include <vector>

#include "tardos/analytic.hpp"
#include "tardos/model.hpp"
#include "tardos/series.hpp"
#include "tardos/special.hpp"

namespace tardos {

inline constexpr double lambda_pole_tol = 1e-6;
// Gate for the exact mass/mean/variance cancellations of the score series.
// Strategy tables are stored as doubles, so a legitimate K vector (e.g.
// interleaving's b/c weights) can miss the identities by ~1e-16; anything
// beyond 1e-12 means a genuinely broken input, not quantization.
inline constexpr double cancellation_tol = 1e-12;
inline constexpr int default_nu_max = 37;

namespace detail {

template <class R> void check_lambda_pole(const R& v) {
    using std::abs;
    using std::floor;
    const R tv = 2 * v;
    const R nearest = floor(tv + R(0.5));
    if (abs(tv - nearest) < R(lambda_pole_tol))
        throw numeric_error("pathological kappa: Lambda(d,v;k) pole at integer 2v");
}

// Exact i^j for integer j of either sign.
template <class R> cx<R> unit_rot(int j) {
    switch (((j % 4) + 4) % 4) {
    case 0:
        return cx<R>(R(1), R(0));
    case 1:
        return cx<R>(R(0), R(1));
    case 2:
        return cx<R>(R(-1), R(0));
    default:
        return cx<R>(R(0), R(-1));
    }
}

} // namespace detail

// Lambda(d, v; k) = Gamma(-2v) (-ik)^{2v} 1F2(v+d; v+1/2, v+1; k^2/4)
//                 + (1/2) sum_{j>=0} (ik)^j/j! Gamma(d+j/2) Gamma(v-j/2) / Gamma(d+v)
// for real k, with the branch (-ik)^{2v} = |k|^{2v} exp(-i pi v sgn k).
// Successive j-terms of the same parity have the real ratio
//   t_{j+2}/t_j = -k^2 (d+j/2) / ((v-1-j/2)(j+1)(j+2)),
// so the even terms are real, the odd ones purely imaginary, and both chains
// run on cheap multiplies from two Gamma seeds. The superexponentially
// convergent sums are cut by the shared stagnation rule.
template <class R> cx<R> lambda_term(const R& d, const R& v, const R& k) {
    using std::abs;
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    if (!(d > R(0)) || !(v > R(0)))
        throw invalid_argument_error("lambda_term: d > 0 and v > 0 violated");
    detail::check_lambda_pole(v);
    if (k == R(0))
        return cx<R>(beta_signed(d, v) / 2, R(0));

    const R ak = abs(k);
    const R sgn = k > R(0) ? R(1) : R(-1);

    const R mag = exp(2 * v * log(ak));
    const R ph = -pi_const<R>() * v * sgn;
    const cx<R> branch = mag * cx<R>(cos(ph), sin(ph));
    const R f12 = hyp1f2(v + d, v + R(0.5), v + R(1), k * k / 4);
    const cx<R> head = branch * (gamma_signed(-2 * v) * f12);

    const R lg_dv = log_gamma(d + v);
    const R k2 = k * k;
    R even = R(0), odd = R(0);
    R te = exp(log_gamma(d) + log_gamma(v) - lg_dv);                       // j = 0
    R to = k * exp(log_gamma(d + R(0.5)) + log_gamma(v - R(0.5)) - lg_dv); // j = 1, / i
    R peak(0);
    int small_run = 0;
    for (int j = 0;; ++j) {
        if (j == series_max_terms)
            throw numeric_error("lambda_term: j-sum did not converge within term budget");
        R a;
        if (j % 2 == 0) {
            even += te;
            a = abs(te);
            te *= -k2 * (d + R(j) / 2) / ((v - 1 - R(j) / 2) * R(j + 1) * R(j + 2));
        } else {
            odd += to;
            a = abs(to);
            to *= -k2 * (d + R(j) / 2) / ((v - 1 - R(j) / 2) * R(j + 1) * R(j + 2));
        }
        if (a > peak)
            peak = a;
        if (j > 2 && a <= peak * real_epsilon<R>()) {
            if (++small_run >= series_small_run)
                break;
        } else {
            small_run = 0;
        }
    }
    return head + cx<R>(even / 2, odd / 2);
}

// phi(k) = (2q / B(kappa, kappa(q-1))) sum_b C(c,b) K_b
//          [ Lambda(d_b, v_b; k) + Lambda(v_b - 1, d_b + 1; -k) ],
// d_b = b + kappa, v_b = c - b + kappa(q-1) + 1.
template <class R>
cx<R> phi_tilde(const KbVector<R>& K, const CodeParams& params, const R& k) {
    using std::exp;
    const int q = params.q;
    const int c = params.c;
    const R kappa(params.kappa);
    const R pref =
        R(2 * q) * exp(log_gamma(kappa * R(q)) - log_gamma(kappa) - log_gamma(kappa * R(q - 1)));
    cx<R> acc(R(0), R(0));
    for (int b = 0; b <= c; ++b) {
        const R Kb = K.K[static_cast<std::size_t>(b)];
        if (Kb == R(0))
            continue;
        const R d = R(b) + kappa;
        const R v = R(c - b) + kappa * R(q - 1) + R(1);
        const cx<R> pair = lambda_term(d, v, k) + lambda_term(v - R(1), d + R(1), -k);
        acc += (binomial_r<R>(c, b) * Kb) * pair;
    }
    return acc * pref;
}

// Series of phi about k = 0, valid for k > 0, truncated at exponent nu_max.
// Each Lambda(d, v; +-k) contributes integer powers j with coefficients
//   (1/2) (+-i)^j Gamma(d+j/2) Gamma(v-j/2) / (Gamma(d+v) j!)
// and powers 2v + 2n with coefficients
//   Gamma(-2v) e^{-+ i pi v} (v+d)_n / ((v+1/2)_n (v+1)_n n! 4^n).
template <class R>
GeneralizedSeries<R> phi_series(const KbVector<R>& K, const CodeParams& params, const R& nu_max) {
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    const int q = params.q;
    const int c = params.c;
    const R kappa(params.kappa);
    const R pref =
        R(2 * q) * exp(log_gamma(kappa * R(q)) - log_gamma(kappa) - log_gamma(kappa * R(q - 1)));

    GeneralizedSeries<R> out;
    const auto add_lambda = [&](const R& d, const R& v, bool mirrored, const R& weight) {
        detail::check_lambda_pole(v);
        // Non-integer powers 2v + 2n.
        {
            const R ph = mirrored ? pi_const<R>() * v : -pi_const<R>() * v;
            const cx<R> base = (gamma_signed(-2 * v) * weight) * cx<R>(cos(ph), sin(ph));
            R coef(1);
            for (int n = 0; 2 * v + R(2 * n) <= nu_max + R(exponent_merge_tol); ++n) {
                if (n > 0) {
                    const R rn(n);
                    coef *= (v + d + rn - 1) / ((v + rn - R(0.5)) * (v + rn) * rn * 4);
                }
                out.add_term(2 * v + R(2 * n), base * coef);
            }
        }
        // Integer powers j.
        {
            const R lg_dv = log_gamma(d + v);
            R lfact(0);
            for (int j = 0; R(j) <= nu_max + R(exponent_merge_tol); ++j) {
                if (j > 0)
                    lfact += log(R(j));
                const auto lgd = log_gamma_signed(d + R(j) / 2);
                const auto lgv = log_gamma_signed(v - R(j) / 2);
                const R mag = exp(lgd.log_abs + lgv.log_abs - lg_dv - lfact) *
                              R(lgd.sign * lgv.sign) * weight / 2;
                out.add_term(R(j), detail::unit_rot<R>(mirrored ? -j : j) * mag);
            }
        }
    };

    for (int b = 0; b <= c; ++b) {
        const R Kb = K.K[static_cast<std::size_t>(b)];
        if (Kb == R(0))
            continue;
        const R d = R(b) + kappa;
        const R v = R(c - b) + kappa * R(q - 1) + R(1);
        const R weight = pref * binomial_r<R>(c, b) * Kb;
        add_lambda(d, v, false, weight);
        add_lambda(v - R(1), d + R(1), true, weight);
    }
    out.normalize();
    out.truncate(nu_max);
    return out;
}

// m-independent intermediate: log phi with the exact -k^2/2 removed, after
// verifying the mass / mean / variance cancellations of the raw series.
template <class R>
GeneralizedSeries<R> log_phi_series(const KbVector<R>& K, const CodeParams& params,
                                    const R& nu_max) {
    using std::abs;
    GeneralizedSeries<R> s = phi_series(K, params, nu_max);

    const cx<R> one(R(1), R(0));
    if (abs(s.coeff_at(R(0)) - one) > R(cancellation_tol))
        throw numeric_error("phi series: k^0 coefficient differs from 1 (mass check)");
    s.drop_at(R(0));
    if (abs(s.coeff_at(R(1))) > R(cancellation_tol))
        throw numeric_error("phi series: k^1 coefficient differs from 0 (mean check)");
    s.drop_at(R(1));

    GeneralizedSeries<R> L = log1p_series(s, nu_max);
    if (abs(L.coeff_at(R(2)) + cx<R>(R(0.5), R(0))) > R(cancellation_tol))
        throw numeric_error("phi series: k^2 log-coefficient differs from -1/2 (variance check)");
    L.drop_at(R(2));
    return L;
}

// Per-term data of
//   [phi(k/sqrt(m))]^m = e^{-k^2/2} (1 + sum_t coeff_t k^{nu_t}),  k > 0,
// with omega_t = |coeff_t| and alpha_t = (2/pi) arg(coeff_t).
template <class R> struct ExpansionCoeffs {
    double m = 0;
    R nu_max{};
    std::vector<R> nu;
    std::vector<cx<R>> coeff;
    std::vector<R> omega;
    std::vector<R> alpha;

    std::size_t size() const { return nu.size(); }
};

// Terms whose coefficient sits this many orders below the largest one are
// representation dirt (e.g. from a K_b that should be exactly zero), far
// beneath the extended-precision noise floor of anything retained on purpose.
inline constexpr double expansion_noise_rel = 1e-40;

template <class R>
ExpansionCoeffs<R> expansion_from_log(const GeneralizedSeries<R>& L, double m, const R& nu_max) {
    using std::abs;
    using std::atan2;
    GeneralizedSeries<R> E = expm1_series(m_scaled(L, m), nu_max);
    if (!E.empty() && !(E.min_exponent() > R(2)))
        throw numeric_error("expansion: leading corrective exponent must exceed 2");

    R peak(0);
    for (const auto& t : E.terms())
        if (abs(t.coeff) > peak)
            peak = abs(t.coeff);
    const R floor_mag = peak * R(expansion_noise_rel);

    ExpansionCoeffs<R> out;
    out.m = m;
    out.nu_max = nu_max;
    out.nu.reserve(E.size());
    out.coeff.reserve(E.size());
    for (const auto& t : E.terms()) {
        if (abs(t.coeff) <= floor_mag)
            continue;
        out.nu.push_back(t.nu);
        out.coeff.push_back(t.coeff);
        out.omega.push_back(abs(t.coeff));
        out.alpha.push_back(R(2) / pi_const<R>() * atan2(t.coeff.im, t.coeff.re));
    }
    return out;
}

template <class R>
ExpansionCoeffs<R> expansion(const KbVector<R>& K, const CodeParams& params, double m,
                             const R& nu_max) {
    return expansion_from_log(log_phi_series(K, params, nu_max), m, nu_max);
}

// Gaussian upper tail beyond z.
template <class R> R gaussian_tail(const R& z) {
    using std::sqrt;
    return erfc(z / sqrt(R(2))) / 2;
}

// Tail of the standardized m-segment score beyond z:
//   R_m(z) = Omega(z) + (1/pi) sum_t Im[ conj(coeff_t) Gamma(nu_t) 2^{nu_t/2}
//                                        H_{-nu_t}(i z / sqrt(2)) ].
template <class R> R r_m(const ExpansionCoeffs<R>& ex, const R& z) {
    using std::exp;
    using std::log;
    using std::sqrt;
    R acc = gaussian_tail(z);
    const cx<R> zarg(R(0), z / sqrt(R(2)));
    const R l2 = log(R(2));
    for (std::size_t t = 0; t < ex.size(); ++t) {
        const R nu = ex.nu[t];
        const cx<R> h = hermite_h(-nu, zarg);
        const R w = exp(log_gamma(nu) + nu / 2 * l2);
        acc += w * (conj(ex.coeff[t]) * h).im / pi_const<R>();
    }
    return acc;
}

// Numeric inversion oracle. Integrates Im[e^{iuz} phi(u/sqrt(m))^m]/u over
// unit-width Gauss-Legendre panels up to u_cut; the integrand decays like
// e^{-u^2/2}, so u_cut = 14 loses nothing at the precision of interest.
// error_estimate comes from re-integrating at a lower node count.
template <class R> struct OracleResult {
    R value{};
    R error_estimate{};
};

template <class R>
std::vector<OracleResult<R>> gil_pelaez_oracle(const KbVector<R>& K, const CodeParams& params,
                                               double m, const std::vector<R>& zs,
                                               double u_cut = 14.0) {
    using std::abs;
    using std::cos;
    using std::sin;
    using std::sqrt;
    const R sqm = sqrt(R(m));
    const int panels = static_cast<int>(u_cut + 0.5);

    struct Node {
        R u;
        R w;       // quadrature weight including panel scale
        cx<R> p;   // phi(u/sqrt(m))^m
    };
    // phi evaluations dominate the cost; build the node caches once and reuse
    // them for every threshold.
    const auto build = [&](const QuadratureRule<R>& rule) {
        std::vector<Node> nodes;
        nodes.reserve(static_cast<std::size_t>(panels) * rule.nodes.size());
        for (int s = 0; s < panels; ++s) {
            const R mid = R(s) + R(0.5);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const R u = mid + rule.nodes[i] / 2;
                const cx<R> phi = phi_tilde(K, params, u / sqm);
                nodes.push_back({u, rule.weights[i] / 2, exp(R(m) * log(phi))});
            }
        }
        return nodes;
    };
    const std::vector<Node> n64 = build(gauss_legendre<R>(64));
    const std::vector<Node> n48 = build(gauss_legendre<R>(48));

    const auto integrate = [](const std::vector<Node>& nodes, const R& z) {
        R total(0);
        for (const auto& nd : nodes) {
            const R ph = nd.u * z;
            total += nd.w * (cx<R>(cos(ph), sin(ph)) * nd.p).im / nd.u;
        }
        return total;
    };

    std::vector<OracleResult<R>> out;
    out.reserve(zs.size());
    for (const R& z : zs) {
        const R v64 = integrate(n64, z);
        const R v48 = integrate(n48, z);
        out.push_back({R(0.5) - v64 / pi_const<R>(), abs(v64 - v48) / pi_const<R>()});
    }
    return out;
}

template <class R>
OracleResult<R> gil_pelaez_oracle(const KbVector<R>& K, const CodeParams& params, double m,
                                  const R& z, double u_cut = 14.0) {
    return gil_pelaez_oracle(K, params, m, std::vector<R>{z}, u_cut)[0];
}

// Smallest m whose semi-analytic tail at the colluder-mean threshold
// z = mu sqrt(m) / c drops to eps1. Seeds from the Gaussian closed form,
// brackets by doubling/halving, bisects on integers, then walks down through
// any non-monotone pocket so the returned m is minimal.
struct LengthSearchResult {
    long long m_star = 0;
    double threshold = 0.0; // z at m_star
    double tail = 0.0;      // r_m at m_star
};

template <class R>
LengthSearchResult find_min_length(const KbVector<R>& K, const CodeParams& params, const R& mu,
                                   double eps1, const R& nu_max) {
    using std::sqrt;
    if (!(mu > R(0)))
        throw numeric_error("find_min_length: mu_tilde <= 0, no sufficient code length exists");
    if (!(eps1 > 0.0 && eps1 < 1.0))
        throw invalid_argument_error("find_min_length: eps1 in (0,1) violated");

    const GeneralizedSeries<R> L = log_phi_series(K, params, nu_max);
    const R c(params.c);
    const auto tail_at = [&](long long m) -> R {
        const R z = mu * sqrt(R(static_cast<double>(m))) / c;
        return r_m(expansion_from_log(L, static_cast<double>(m), nu_max), z);
    };
    const auto ok = [&](long long m) { return tail_at(m) <= R(eps1); };
    const auto result_at = [&](long long m_star) {
        LengthSearchResult res;
        res.m_star = m_star;
        res.threshold =
            static_cast<double>(mu * sqrt(R(static_cast<double>(m_star))) / c);
        res.tail = static_cast<double>(tail_at(m_star));
        return res;
    };

    const double z_eps = boost::math::erfc_inv(2.0 * eps1) * std::sqrt(2.0);
    const double mu_d = static_cast<double>(mu);
    long long m0 =
        static_cast<long long>(std::ceil((params.c * z_eps / mu_d) * (params.c * z_eps / mu_d)));
    if (m0 < 1)
        m0 = 1;

    long long lo, hi;
    if (ok(m0)) {
        hi = m0;
        lo = m0 / 2;
        while (lo >= 1 && ok(lo)) {
            hi = lo;
            lo /= 2;
        }
        if (lo < 1)
            return result_at(1);
    } else {
        lo = m0;
        hi = 2 * m0;
        while (!ok(hi)) {
            lo = hi;
            if (hi > (1LL << 50))
                throw numeric_error("find_min_length: bracketing did not terminate");
            hi *= 2;
        }
    }
    // Invariant: !ok(lo), ok(hi).
    while (hi - lo > 1) {
        const long long mid = lo + (hi - lo) / 2;
        if (ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    long long m_star = hi;
    while (m_star > 1 && ok(m_star - 1))
        --m_star;
    return result_at(m_star);
}

} // namespace tardos
