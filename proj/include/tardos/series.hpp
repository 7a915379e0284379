#pragma once
// Sparse power series in |k| with real (generally non-integer) exponents and
// complex coefficients, valid for k > 0; the k < 0 side follows by conjugate
// symmetry of characteristic functions and is never stored. Exponents within
// a small tolerance of each other are merged into one term. All operations
// truncate at a caller-supplied maximum exponent, and exponents are only ever
// created as sums of existing ones, so truncation commutes with the algebra.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "tardos/model.hpp"
#include "tardos/special.hpp"

namespace tardos {

inline constexpr double exponent_merge_tol = 1e-9;

template <class R> struct SeriesTerm {
    R nu;
    cx<R> coeff;
};

template <class R> class GeneralizedSeries {
  public:
    void add_term(const R& nu, const cx<R>& coeff) {
        terms_.push_back({nu, coeff});
        normalized_ = false;
    }

    void add(const GeneralizedSeries& other) {
        terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
        normalized_ = false;
    }

    void scale(const cx<R>& f) {
        for (auto& t : terms_)
            t.coeff = t.coeff * f;
    }
    void scale(const R& f) {
        for (auto& t : terms_)
            t.coeff = t.coeff * f;
    }

    // Sorts by exponent and merges terms closer than the tolerance.
    void normalize() {
        if (normalized_)
            return;
        std::sort(terms_.begin(), terms_.end(),
                  [](const SeriesTerm<R>& a, const SeriesTerm<R>& b) { return a.nu < b.nu; });
        std::vector<SeriesTerm<R>> merged;
        merged.reserve(terms_.size());
        for (const auto& t : terms_) {
            if (!merged.empty() && t.nu - merged.back().nu < R(exponent_merge_tol)) {
                merged.back().coeff += t.coeff;
            } else {
                merged.push_back(t);
            }
        }
        terms_ = std::move(merged);
        normalized_ = true;
    }

    const std::vector<SeriesTerm<R>>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    // Coefficient of the term whose exponent lies within the merge tolerance
    // of nu; zero if absent. Requires normalize() first.
    cx<R> coeff_at(const R& nu) const {
        for (const auto& t : terms_) {
            using std::abs;
            if (abs(t.nu - nu) < R(exponent_merge_tol))
                return t.coeff;
            if (t.nu > nu + R(exponent_merge_tol))
                break;
        }
        return cx<R>(R(0), R(0));
    }

    // Removes the term at exponent nu (within tolerance) if present.
    void drop_at(const R& nu) {
        using std::abs;
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (abs(terms_[i].nu - nu) < R(exponent_merge_tol)) {
                terms_.erase(terms_.begin() + static_cast<std::ptrdiff_t>(i));
                return;
            }
        }
    }

    R min_exponent() const {
        // Requires normalize(); empty series reported as +infinity-ish.
        if (terms_.empty())
            return R(1e300);
        return terms_.front().nu;
    }

    // Discards terms with exponent above nu_max.
    void truncate(const R& nu_max) {
        terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                    [&](const SeriesTerm<R>& t) {
                                        return t.nu > nu_max + R(exponent_merge_tol);
                                    }),
                     terms_.end());
    }

    // Evaluates sum coeff * k^nu at k > 0.
    cx<R> eval(const R& k) const {
        using std::exp;
        using std::log;
        cx<R> acc(R(0), R(0));
        const R lk = log(k);
        for (const auto& t : terms_)
            acc += t.coeff * exp(t.nu * lk);
        return acc;
    }

    GeneralizedSeries mul(const GeneralizedSeries& other, const R& nu_max) const {
        GeneralizedSeries out;
        out.terms_.reserve(terms_.size() * 4);
        for (const auto& a : terms_) {
            if (a.nu > nu_max + R(exponent_merge_tol))
                continue;
            for (const auto& b : other.terms_) {
                const R nu = a.nu + b.nu;
                if (nu > nu_max + R(exponent_merge_tol))
                    break; // other is normalized ascending
                out.terms_.push_back({nu, a.coeff * b.coeff});
            }
        }
        out.normalize();
        return out;
    }

  private:
    std::vector<SeriesTerm<R>> terms_;
    bool normalized_ = false;
};

// log(1+u) for a series u with strictly positive minimum exponent,
// truncated at nu_max: sum_{j>=1} (-1)^{j+1} u^j / j.
template <class R>
GeneralizedSeries<R> log1p_series(GeneralizedSeries<R> u, const R& nu_max) {
    u.normalize();
    u.truncate(nu_max);
    if (u.empty())
        return u;
    if (!(u.min_exponent() > R(0)))
        throw numeric_error("log1p_series: nonpositive leading exponent");
    GeneralizedSeries<R> out = u;
    GeneralizedSeries<R> upow = u;
    const R nu0 = u.min_exponent();
    int j = 1;
    while (R(j + 1) * nu0 <= nu_max + R(exponent_merge_tol)) {
        ++j;
        upow = upow.mul(u, nu_max);
        if (upow.empty())
            break;
        GeneralizedSeries<R> term = upow;
        term.scale(cx<R>((j % 2 == 0 ? R(-1) : R(1)) / R(j), R(0)));
        out.add(term);
    }
    out.normalize();
    return out;
}

// exp(v) - 1 for a series v with strictly positive minimum exponent,
// truncated at nu_max: sum_{j>=1} v^j / j!.
template <class R>
GeneralizedSeries<R> expm1_series(GeneralizedSeries<R> v, const R& nu_max) {
    v.normalize();
    v.truncate(nu_max);
    if (v.empty())
        return v;
    if (!(v.min_exponent() > R(0)))
        throw numeric_error("expm1_series: nonpositive leading exponent");
    GeneralizedSeries<R> out = v;
    GeneralizedSeries<R> vpow = v;
    const R nu0 = v.min_exponent();
    R factorial(1);
    int j = 1;
    while (R(j + 1) * nu0 <= nu_max + R(exponent_merge_tol)) {
        ++j;
        factorial *= R(j);
        vpow = vpow.mul(v, nu_max);
        if (vpow.empty())
            break;
        GeneralizedSeries<R> term = vpow;
        term.scale(cx<R>(R(1) / factorial, R(0)));
        out.add(term);
    }
    out.normalize();
    return out;
}

// Substitutes k -> k/sqrt(m) and multiplies by m: coeff_nu -> coeff_nu *
// m^(1 - nu/2). Applied to the log of a characteristic function when forming
// the m-fold convolution of standardized scores.
template <class R>
GeneralizedSeries<R> m_scaled(const GeneralizedSeries<R>& s, double m) {
    using std::exp;
    using std::log;
    GeneralizedSeries<R> out;
    const R lm = log(R(m));
    for (const auto& t : s.terms())
        out.add_term(t.nu, t.coeff * exp((R(1) - t.nu / R(2)) * lm));
    out.normalize();
    return out;
}

} // namespace tardos
