#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tardos/model.hpp"

#include <cstring>

using namespace tardos;

namespace {

std::string violated(const CodeParams& p, bool analytic_only = false) {
    try {
        if (analytic_only)
            validate_analytic(p);
        else
            validate(p);
    } catch (const invalid_argument_error& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("validate accepts a well-formed parameter set") {
    CodeParams p;
    p.q = 3;
    p.c = 5;
    p.kappa = 0.35;
    p.m = 100;
    p.n = 10;
    p.eps1 = 1e-10;
    CHECK_NOTHROW(validate(p));
    const CodeParams r = validate(p);
    CHECK(r.q == 3);
    CHECK(r.m == 100);
}

TEST_CASE("validate names the first violated invariant") {
    CodeParams good;
    good.q = 3;
    good.c = 5;
    good.kappa = 0.35;
    good.m = 100;
    good.n = 10;

    CodeParams p = good;
    p.q = 1;
    CHECK(violated(p).find("q >= 2") != std::string::npos);

    p = good;
    p.c = 0;
    CHECK(violated(p).find("c >= 1") != std::string::npos);

    p = good;
    p.kappa = 0.0;
    CHECK(violated(p).find("kappa > 0") != std::string::npos);

    p = good;
    p.kappa = -0.2;
    CHECK(violated(p).find("kappa > 0") != std::string::npos);

    p = good;
    p.m = 0;
    CHECK(violated(p).find("m >= 1") != std::string::npos);

    p = good;
    p.n = 4; // fewer users than colluders
    CHECK(violated(p).find("n >= c") != std::string::npos);

    p = good;
    p.eps1 = 0.0;
    CHECK(violated(p).find("eps1") != std::string::npos);

    p = good;
    p.eps1 = 1.0;
    CHECK(violated(p).find("eps1") != std::string::npos);
}

TEST_CASE("validate_analytic ignores code length, users, eps1") {
    CodeParams p;
    p.q = 4;
    p.c = 8;
    p.kappa = 0.2;
    p.m = 0;  // invalid for the full validator
    p.n = 0;  // invalid for the full validator
    p.eps1 = 2.0;
    CHECK_NOTHROW(validate_analytic(p));
    CHECK(violated(p).find("m >= 1") != std::string::npos);

    p.q = 1;
    CHECK(violated(p, true).find("q >= 2") != std::string::npos);
}

TEST_CASE("safe kappa interval") {
    const KappaInterval i3 = safe_kappa_interval(3);
    CHECK(i3.lo == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(i3.hi == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_FALSE(i3.empty());

    const KappaInterval i2 = safe_kappa_interval(2);
    CHECK(i2.lo == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(i2.hi == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(i2.empty());

    const KappaInterval i5 = safe_kappa_interval(5);
    CHECK(i5.lo == doctest::Approx(0.125).epsilon(1e-15));
    CHECK_FALSE(i5.empty());

    CHECK_THROWS_AS(safe_kappa_interval(1), invalid_argument_error);
}

TEST_CASE("version string present") {
    CHECK(version_string() != nullptr);
    CHECK(std::strlen(version_string()) > 0);
}
