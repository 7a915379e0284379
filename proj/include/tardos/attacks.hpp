#pragma once
// Collusion strategies in the Restricted Digit Model. A strategy is carried in
// the factorized form Psi_b(x) = f(b, ell, z): given that the coalition saw
// the output symbol b times, ell counts how many OTHER symbols were also seen
// exactly b times and z runs over the remaining counts. Three nested classes:
//   class 1: Psi = w(b, ell) * prod_k W1(b, ell, z_k)
//   class 2: Psi = w(b) / (ell+1) * prod_k W2(b, z_k)
//   class 3: Psi = 1 / (ell+1) * prod_k W3(b, z_k),  W3 boolean,
//            W3(b,z) + W3(z,b) = 1 for distinct nonzero counts, W3(b,0) = 1.
// Class 3 is exactly the ranking strategies (majority or minority voting, the
// mu_tilde-minimizing attack, any strict ordering of counts with 0 worst).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tardos/analytic.hpp"
#include "tardos/model.hpp"
#include "tardos/rng.hpp"

namespace tardos {

struct CountVector {
    std::vector<int> sigma; // q nonnegative entries summing to c
};

// Dense tables indexed by the small integer arguments; doubles convert
// exactly into the extended-precision paths.
struct Class1Spec {
    int q = 0, c = 0;
    std::vector<double> w;  // (c+1) x q, index [b*q + ell]
    std::vector<double> W1; // (c+1) x q x (c+1), index [(b*q + ell)*(c+1) + z]

    double w_at(int b, int ell) const { return w[static_cast<std::size_t>(b * q + ell)]; }
    double W_at(int b, int ell, int z) const {
        return W1[static_cast<std::size_t>((b * q + ell) * (c + 1) + z)];
    }
};

struct Class2Spec {
    int q = 0, c = 0;
    std::vector<double> w;  // c+1, index [b]
    std::vector<double> W2; // (c+1) x (c+1), index [b*(c+1) + z]

    double w_at(int b) const { return w[static_cast<std::size_t>(b)]; }
    double W_at(int b, int z) const { return W2[static_cast<std::size_t>(b * (c + 1) + z)]; }
};

struct Class3Spec {
    int q = 0, c = 0;
    std::vector<std::uint8_t> W3; // (c+1) x (c+1), index [b*(c+1) + z]

    bool W_at(int b, int z) const { return W3[static_cast<std::size_t>(b * (c + 1) + z)] != 0; }
};

enum class StrategyKind { class1, class2, class3 };

struct Strategy {
    StrategyKind kind = StrategyKind::class3;
    std::string name; // builtin name or "custom"
    Class1Spec c1;
    Class2Spec c2;
    Class3Spec c3;

    int q() const;
    int c() const;

    // ------------------------------------------------------------ builtins --
    // Interleaving: output each received symbol with probability count/c.
    // Stored as class 1 (w(b,ell) = b/c, W == 1) so it exercises that path.
    static Strategy interleaving(int q, int c);
    // Majority / minority voting: most / least frequent received symbol wins;
    // a count of zero always ranks worst.
    static Strategy majority(int q, int c);
    static Strategy minority(int q, int c);
    // The mu_tilde-minimizing attack: output a symbol whose count b has the
    // smallest T(b). Throws numeric_error("pathological kappa ...") when two
    // distinct co-occurring counts have equal T within relative 1e-12, since
    // the ranking (and hence the strategy) would be ill-defined.
    static Strategy mu_min(const CodeParams& params);
    // Class-3 strategy from an arbitrary strict ranking: rank[b] smaller is
    // better, for b in 1..c; zero counts rank worst.
    static Strategy from_ranking(int q, int c, const std::vector<int>& rank);
    // Random strict ranking of the counts 1..c (a seeded, normalized,
    // randomized class-2/3 spec for cross-route checks).
    static Strategy random_ranking(int q, int c, std::uint64_t seed);

    static Strategy builtin_by_name(const std::string& name, const CodeParams& params);

    // Validates class-3 structure: antisymmetry for distinct co-occurring
    // nonzero counts, W(b,0)=1, and transitivity on co-occurring triples.
    void check_class3() const;

    // JSON round-trip; schema documented in docs/formats.md.
    std::string to_json() const;
    static Strategy from_json_text(const std::string& text, const CodeParams& params);
};

// Tallies a coalition column into per-symbol counts.
CountVector count_symbols(const std::vector<Symbol>& coalition_column, int q, int c);

namespace detail {

// Psi table arithmetic over a caller-chosen scalar, so the enumeration
// cross-checks are not capped at double rounding. x is a raw (q-1)-buffer of
// the other counts; dimension checks are the caller's job.
template <class R> R psi_tables(const Strategy& s, int b, const int* x, int n) {
    int ell = 0;
    for (int i = 0; i < n; ++i)
        if (x[i] == b)
            ++ell;

    switch (s.kind) {
    case StrategyKind::class1: {
        R r(s.c1.w_at(b, ell));
        for (int i = 0; i < n; ++i)
            if (x[i] != b)
                r *= R(s.c1.W_at(b, ell, x[i]));
        return r;
    }
    case StrategyKind::class2: {
        R r = R(s.c2.w_at(b)) / (ell + 1);
        for (int i = 0; i < n; ++i)
            if (x[i] != b)
                r *= R(s.c2.W_at(b, x[i]));
        return r;
    }
    default: {
        for (int i = 0; i < n; ++i)
            if (x[i] != b && !s.c3.W_at(b, x[i]))
                return R(0);
        return R(1) / (ell + 1);
    }
    }
}

} // namespace detail

// Psi_b(x): probability of outputting a symbol whose count is b, given the
// other q-1 counts x. Requires b >= 1 and b + sum(x) = c.
double psi(const Strategy& s, int b, const std::vector<int>& x);

// theta_{y|sigma}: output distribution over symbols for one count vector.
// Enforces the Marking Assumption support (theta_y = 0 when sigma_y = 0) and
// checks normalization within 1e-12 (user-supplied specs may be inconsistent).
std::vector<double> theta(const Strategy& s, const CountVector& sigma);

// Allocation-free variant for simulation loops: sigma and th point at q
// entries, x_scratch at q-1. No dimension checks.
void theta_into(const Strategy& s, const int* sigma, double* th, int* x_scratch);

// One draw from theta.
Symbol pick_symbol(const Strategy& s, const CountVector& sigma, Rng& rng);

} // namespace tardos
