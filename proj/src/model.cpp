#include "tardos/model.hpp"

namespace tardos {

const char* version_string() { return "tardos 1.0.0+g3e256dc"; }

CodeParams validate_analytic(const CodeParams& params) {
    if (!(params.q >= 2))
        throw invalid_argument_error("q >= 2 violated");
    if (!(params.c >= 1))
        throw invalid_argument_error("c >= 1 violated");
    if (!(params.kappa > 0))
        throw invalid_argument_error("kappa > 0 violated");
    return params;
}

CodeParams validate(const CodeParams& params) {
    validate_analytic(params);
    if (!(params.m >= 1))
        throw invalid_argument_error("m >= 1 violated");
    if (!(params.n >= params.c))
        throw invalid_argument_error("n >= c violated");
    if (!(params.eps1 > 0 && params.eps1 < 1))
        throw invalid_argument_error("0 < eps1 < 1 violated");
    return params;
}

KappaInterval safe_kappa_interval(int q) {
    if (q < 2)
        throw invalid_argument_error("q >= 2 violated");
    return KappaInterval{1.0 / (2.0 * (q - 1)), 0.5};
}

} // namespace tardos
