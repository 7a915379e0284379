#pragma once
// Special-function numerics shared by the analytic modules, templated over a
// real type so every routine runs both at machine double and at extended
// precision (boost cpp_bin_float). Gamma/Beta values are kept in log domain
// with separate sign tracking: the series below multiply Gamma factors whose
// magnitudes overflow double long before the final result does.

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <vector>

#include "tardos/model.hpp"

namespace tardos {

using float50 = boost::multiprecision::cpp_bin_float_50;
using float100 = boost::multiprecision::cpp_bin_float_100;

// Resolution used by tolerance-terminated series, per real type.
template <class R> inline R real_epsilon() {
    return std::numeric_limits<R>::epsilon();
}

template <class R> inline R pi_const() {
    using std::atan;
    static const R value = 4 * atan(R(1));
    return value;
}

// Maps a requested mantissa width to the nearest supported tier
// (double = 53 bits, cpp_bin_float_50 ~ 166 bits, cpp_bin_float_100 ~ 333).
inline int nearest_precision_bits(int requested) {
    const int tiers[3] = {53, 166, 333};
    int best = tiers[0];
    for (int t : tiers)
        if (std::abs(t - requested) < std::abs(best - requested))
            best = t;
    return best;
}

// ---------------------------------------------------------------- complex --

// Minimal complex type usable with multiprecision reals (std::complex is only
// specified for the built-in floating types).
template <class R> struct cx {
    R re{};
    R im{};

    cx() = default;
    cx(R r) : re(std::move(r)), im(R(0)) {}
    cx(R r, R i) : re(std::move(r)), im(std::move(i)) {}

    cx& operator+=(const cx& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    cx& operator-=(const cx& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    cx& operator*=(const cx& o) {
        const R r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    cx& operator*=(const R& s) {
        re *= s;
        im *= s;
        return *this;
    }
};

template <class R> cx<R> operator+(cx<R> a, const cx<R>& b) { return a += b; }
template <class R> cx<R> operator-(cx<R> a, const cx<R>& b) { return a -= b; }
template <class R> cx<R> operator*(cx<R> a, const cx<R>& b) { return a *= b; }
template <class R> cx<R> operator*(cx<R> a, const R& s) { return a *= s; }
template <class R> cx<R> operator*(const R& s, cx<R> a) { return a *= s; }
template <class R> cx<R> operator-(const cx<R>& a) { return cx<R>(-a.re, -a.im); }

template <class R> cx<R> conj(const cx<R>& a) { return cx<R>(a.re, -a.im); }

template <class R> R abs(const cx<R>& a) {
    using std::sqrt;
    return sqrt(a.re * a.re + a.im * a.im);
}

template <class R> R arg(const cx<R>& a) {
    using std::atan2;
    return atan2(a.im, a.re);
}

template <class R> cx<R> operator/(const cx<R>& a, const cx<R>& b) {
    const R n = b.re * b.re + b.im * b.im;
    return cx<R>((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
}

template <class R> cx<R> operator/(const cx<R>& a, const R& s) {
    return cx<R>(a.re / s, a.im / s);
}

template <class R> cx<R> exp(const cx<R>& a) {
    using std::cos;
    using std::exp;
    using std::sin;
    const R e = exp(a.re);
    return cx<R>(e * cos(a.im), e * sin(a.im));
}

template <class R> cx<R> log(const cx<R>& a) {
    using std::log;
    return cx<R>(log(abs(a)), arg(a));
}

// a^p for real exponent p, principal branch.
template <class R> cx<R> pow(const cx<R>& a, const R& p) {
    return exp(cx<R>(p * log(abs(a)), p * arg(a)));
}

// Integer power by repeated squaring.
template <class R> cx<R> powi(cx<R> a, int n) {
    cx<R> r(R(1), R(0));
    for (; n > 0; n >>= 1) {
        if (n & 1)
            r *= a;
        a *= a;
    }
    return r;
}

// i^a = e^{i pi a / 2} for real a.
template <class R> cx<R> i_pow(const R& a) {
    using std::cos;
    using std::sin;
    const R half_pi = pi_const<R>() / 2;
    return cx<R>(cos(half_pi * a), sin(half_pi * a));
}

// ------------------------------------------------------------------ gamma --

// log Gamma(x) for x > 0.
template <class R> R log_gamma(const R& x) {
    if (!(x > 0))
        throw numeric_error("log_gamma: argument must be positive");
    return boost::math::lgamma(x);
}

// (log |Gamma(x)|, sign) for real x away from the poles at 0, -1, -2, ...
// Negative arguments go through the reflection formula
// Gamma(x) Gamma(1-x) = pi / sin(pi x).
template <class R> struct SignedLog {
    R log_abs;
    int sign; // +1 or -1
};

template <class R> SignedLog<R> log_gamma_signed(const R& x) {
    using std::abs;
    using std::floor;
    using std::log;
    if (x > 0)
        return {boost::math::lgamma(x), +1};
    const R r = x - floor(x);
    if (r == 0 || r < R(1e-13) || R(1) - r < R(1e-13))
        throw numeric_error("gamma pole at nonpositive integer argument");
    const R s = boost::math::sin_pi(x);
    return {log(pi_const<R>() / abs(s)) - boost::math::lgamma(1 - x),
            s > 0 ? +1 : -1};
}

// Gamma(x) with sign, for x not a nonpositive integer.
template <class R> R gamma_signed(const R& x) {
    using std::exp;
    const auto g = log_gamma_signed(x);
    return R(g.sign) * exp(g.log_abs);
}

// 1/Gamma(x); exactly zero at the poles (entire function).
template <class R> R rgamma(const R& x) {
    using std::abs;
    using std::exp;
    using std::floor;
    if (x <= 0) {
        const R r = x - floor(x);
        if (r == 0 || r < R(1e-12) || R(1) - r < R(1e-12))
            return R(0);
    }
    const auto g = log_gamma_signed(x);
    return R(g.sign) * exp(-g.log_abs);
}

// Generalized Beta B(v) = prod Gamma(v_a) / Gamma(sum v_a), all v_a > 0,
// evaluated in log domain.
template <class R> R log_beta_vec(const std::vector<R>& v) {
    if (v.empty())
        throw invalid_argument_error("beta_vec: empty argument vector");
    R num(0), tot(0);
    for (const R& a : v) {
        if (!(a > 0))
            throw invalid_argument_error("beta_vec: nonpositive component");
        num += log_gamma(a);
        tot += a;
    }
    return num - log_gamma(tot);
}

template <class R> R beta_vec(const std::vector<R>& v) {
    using std::exp;
    return exp(log_beta_vec(v));
}

// Two-argument Beta allowing a negative (non-pole) argument, with sign.
template <class R> SignedLog<R> log_beta_signed(const R& a, const R& b) {
    const auto ga = log_gamma_signed(a);
    const auto gb = log_gamma_signed(b);
    const auto gs = log_gamma_signed(a + b);
    return {ga.log_abs + gb.log_abs - gs.log_abs, ga.sign * gb.sign * gs.sign};
}

template <class R> R beta_signed(const R& a, const R& b) {
    using std::exp;
    const auto g = log_beta_signed(a, b);
    return R(g.sign) * exp(g.log_abs);
}

// --------------------------------------------------------- hypergeometric --

// Series termination rule shared by the hypergeometric sums: stop once 5
// consecutive terms fall below tol * |partial sum|, so isolated zero
// crossings of alternating terms cannot end the sum early.
inline constexpr int series_small_run = 5;
inline constexpr int series_max_terms = 20000;

// 1F2(a; b1, b2; x) for real arguments; entire in x.
template <class R> R hyp1f2(const R& a, const R& b1, const R& b2, const R& x) {
    using std::abs;
    const R tol = real_epsilon<R>();
    R term(1), sum(1);
    int small_run = 0;
    for (int n = 0; n < series_max_terms; ++n) {
        const R rn(n);
        term *= (a + rn) * x / ((b1 + rn) * (b2 + rn) * (rn + 1));
        sum += term;
        if (abs(term) < tol * abs(sum)) {
            if (++small_run >= series_small_run)
                return sum;
        } else {
            small_run = 0;
        }
    }
    throw numeric_error("hyp1f2: series did not converge within term budget");
}

// Confluent hypergeometric 1F1(a; b; z) for complex z. For Re z < 0 the
// direct series alternates destructively; the Kummer transform
// 1F1(a;b;z) = e^z 1F1(b-a;b;-z) moves the sum to the stable side.
template <class R> cx<R> hyp1f1(const R& a, const R& b, const cx<R>& z) {
    const R tol = real_epsilon<R>();
    if (z.re < 0)
        return exp(z) * hyp1f1(b - a, b, -z);
    cx<R> term(R(1), R(0));
    cx<R> sum(R(1), R(0));
    int small_run = 0;
    for (int n = 0; n < series_max_terms; ++n) {
        const R rn(n);
        term *= z * ((a + rn) / ((b + rn) * (rn + 1)));
        sum += term;
        if (abs(term) < tol * abs(sum)) {
            if (++small_run >= series_small_run)
                return sum;
        } else {
            small_run = 0;
        }
    }
    throw numeric_error("hyp1f1: series did not converge within term budget");
}

// Hermite function H_nu(z) for real order (any sign, non-integer allowed) and
// complex argument, via the two-branch confluent representation
//   H_nu(z) = 2^nu sqrt(pi) [ 1F1(-nu/2; 1/2; z^2) / Gamma((1-nu)/2)
//                             - 2 z 1F1((1-nu)/2; 3/2; z^2) / Gamma(-nu/2) ].
// The 1/Gamma factors are entire, so integer orders need no special casing.
template <class R> cx<R> hermite_h(const R& nu, const cx<R>& z) {
    using std::exp;
    using std::log;
    using std::sqrt;
    const cx<R> z2 = z * z;
    const R pref = exp(nu * log(R(2))) * sqrt(pi_const<R>());
    const cx<R> t1 = rgamma((1 - nu) / 2) * hyp1f1(-nu / 2, R(1) / 2, z2);
    const cx<R> t2 = rgamma(-nu / 2) * (z * hyp1f1((1 - nu) / 2, R(3) / 2, z2));
    return pref * (t1 - (R(2) * t2));
}

// Complementary error function.
template <class R> R erfc(const R& x) { return boost::math::erfc(x); }

// --------------------------------------------------------------- quadrature --

template <class R> struct QuadratureRule {
    std::vector<R> nodes;   // ascending in (-1, 1)
    std::vector<R> weights;
};

// Gauss-Legendre rule on [-1, 1], refined to full working precision by
// Newton iteration on P_n from the usual cosine initial guess. Quadratic
// convergence makes a fixed iteration count sufficient at every tier.
template <class R> QuadratureRule<R> make_gauss_legendre(int n) {
    using std::cos;
    QuadratureRule<R> rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const R pi = pi_const<R>();
    for (int i = 0; i < (n + 1) / 2; ++i) {
        R z = cos(pi * (R(i) + R(0.75)) / (R(n) + R(0.5)));
        R dp(0);
        for (int it = 0; it < 12; ++it) {
            R p0(1), p1(0);
            for (int j = 0; j < n; ++j) {
                const R p2 = p1;
                p1 = p0;
                p0 = ((R(2 * j + 1) * z * p1) - R(j) * p2) / R(j + 1);
            }
            dp = R(n) * (z * p0 - p1) / (z * z - 1);
            z -= p0 / dp;
        }
        rule.nodes[static_cast<std::size_t>(i)] = -z;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
        const R w = 2 / ((1 - z * z) * dp * dp);
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

// Cached rules keyed by node count, one cache per precision tier.
template <class R> const QuadratureRule<R>& gauss_legendre(int n) {
    static std::map<int, QuadratureRule<R>> cache;
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, make_gauss_legendre<R>(n)).first;
    return it->second;
}

} // namespace tardos
