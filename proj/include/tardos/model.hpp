#pragma once
// Shared parameter types and validation for the q-ary Tardos fingerprinting
// scheme: alphabet size q, coalition size c, bias concentration kappa, code
// length m, user count n, false-positive target eps1.

#include <stdexcept>
#include <string>

namespace tardos {

// Thrown when inputs are structurally invalid (bad parameters, dimension
// mismatches, malformed files).
struct invalid_argument_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a computation cannot proceed numerically (poles, tie-breaking
// degeneracies, quadrature failure, guard limits).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CodeParams {
    int q = 2;          // alphabet size, >= 2
    int c = 1;          // coalition size, >= 1
    double kappa = 0.5; // Dirichlet concentration, > 0
    int m = 1;          // number of code segments, >= 1
    int n = 1;          // number of users, >= c
    double eps1 = 1e-10; // target false-positive probability, in (0,1)
};

struct Symbol {
    int index = 0; // in [0, q)
};

// The kappa interval (1/(2(q-1)), 1/2) inside which T(b) stays nonnegative.
// For q=2 the endpoints coincide and the interval is empty.
struct KappaInterval {
    double lo;
    double hi;
    bool empty() const { return !(lo < hi); }
};

// Build identifier stamped into every data file header.
const char* version_string();

// Returns params unchanged if every invariant holds; otherwise throws
// invalid_argument_error naming the first violated invariant.
CodeParams validate(const CodeParams& params);

// Same, for the subset used by the analytic routes (q, c, kappa); code
// length and user count are irrelevant there.
CodeParams validate_analytic(const CodeParams& params);

// Requires q >= 2.
KappaInterval safe_kappa_interval(int q);

} // namespace tardos
