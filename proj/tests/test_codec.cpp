#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tardos/codec.hpp"
#include "test_util.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

using namespace tardos;

namespace {

CodeParams reference_params() {
    CodeParams p;
    p.q = 3;
    p.c = 5;
    p.kappa = 0.35;
    p.m = 40;
    p.n = 12;
    p.eps1 = 1e-10;
    return p;
}

} // namespace

TEST_CASE("scoring pair identities") {
    // p g1(p) + (1-p) g0(p) = 0 and p g1^2 + (1-p) g0^2 = 1: the innocent
    // per-segment score has mean zero and unit variance for every bias.
    for (double p : {0.01, 0.1, 0.25, 0.5, 0.77, 0.99}) {
        CHECK(std::abs(p * g1(p) + (1.0 - p) * g0(p)) < 1e-14);
        CHECK(std::abs(p * g1(p) * g1(p) + (1.0 - p) * g0(p) * g0(p) - 1.0) < 1e-12);
        CHECK(g1(p) > 0.0);
        CHECK(g0(p) < 0.0);
    }
    CHECK(g1(0.25) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(g0(0.5) == doctest::Approx(-1.0).epsilon(1e-14));
    // Match uses g1 with the output symbol's bias, mismatch g0.
    CHECK(score_segment(2, 2, 0.3) == doctest::Approx(g1(0.3)).epsilon(1e-15));
    CHECK(score_segment(1, 2, 0.3) == doctest::Approx(g0(0.3)).epsilon(1e-15));
}

TEST_CASE("sample_bias rows are simplex points") {
    const CodeParams p = reference_params();
    Rng rng(5);
    const BiasMatrix biases = sample_bias(p, 200, rng);
    REQUIRE(biases.m == 200);
    REQUIRE(biases.q == 3);
    for (int i = 0; i < biases.m; ++i) {
        double tot = 0.0;
        for (int y = 0; y < biases.q; ++y) {
            const double v = biases.at(i, y);
            CHECK(v > 0.0);
            CHECK(v < 1.0);
            tot += v;
        }
        CHECK(std::abs(tot - 1.0) < 1e-12);
    }
}

TEST_CASE("bias marginal matches Beta(kappa, kappa(q-1))") {
    // Kolmogorov-Smirnov on the first component with 1e5 segments; the
    // critical value at significance 0.01 is 1.628/sqrt(n).
    const CodeParams p = reference_params();
    Rng rng(17);
    const int n = 100000;
    const BiasMatrix biases = sample_bias(p, n, rng);
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] = biases.at(i, 0);
    std::sort(xs.begin(), xs.end());
    const double a = p.kappa;
    const double b = p.kappa * (p.q - 1);
    double dmax = 0.0;
    for (int i = 0; i < n; ++i) {
        const double cdf = boost::math::ibeta(a, b, xs[static_cast<std::size_t>(i)]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        dmax = std::max(dmax, std::max(std::abs(cdf - lo), std::abs(cdf - hi)));
    }
    CHECK(dmax < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("code generation is deterministic in the seed") {
    const CodeParams p = reference_params();
    Rng r1(99), r2(99), r3(100);
    const BiasMatrix b1 = sample_bias(p, p.m, r1);
    const BiasMatrix b2 = sample_bias(p, p.m, r2);
    const BiasMatrix b3 = sample_bias(p, p.m, r3);
    CHECK(b1.p == b2.p);
    CHECK(b1.p != b3.p);
    const Code c1 = generate_code(b1, p.n, r1);
    const Code c2 = generate_code(b2, p.n, r2);
    CHECK(c1.x == c2.x);
    for (int j = 0; j < c1.n; ++j)
        for (int i = 0; i < c1.m; ++i) {
            CHECK(c1.at(j, i) >= 0);
            CHECK(c1.at(j, i) < p.q);
        }
}

TEST_CASE("accusation thresholds") {
    const CodeParams p = reference_params();
    Rng rng(7);
    const BiasMatrix biases = sample_bias(p, p.m, rng);
    const Code code = generate_code(biases, p.n, rng);
    // Pirate copy equal to user 0's codeword: that user's score is maximal
    // positive ( sum of g1 > 0 per segment ).
    std::vector<int> y(static_cast<std::size_t>(p.m));
    for (int i = 0; i < p.m; ++i)
        y[static_cast<std::size_t>(i)] = code.at(0, i);
    const AccusationResult res = accuse(code, y, biases, 0.0);
    REQUIRE(static_cast<int>(res.scores.size()) == p.n);
    CHECK(res.scores[0] > 0.0);
    CHECK(std::find(res.accused.begin(), res.accused.end(), 0) != res.accused.end());
    // An impossible threshold accuses nobody.
    CHECK(accuse(code, y, biases, 1e9).accused.empty());
    // Score identity: every user's score matches a direct recomputation.
    for (int j = 0; j < p.n; ++j) {
        double s = 0.0;
        for (int i = 0; i < p.m; ++i)
            s += score_segment(code.at(j, i), y[static_cast<std::size_t>(i)],
                               biases.at(i, y[static_cast<std::size_t>(i)]));
        CHECK(res.scores[static_cast<std::size_t>(j)] == doctest::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("bundle round-trip") {
    const CodeParams p = reference_params();
    Rng rng(31);
    CodeBundle in;
    in.params = p;
    in.seed = 31;
    in.biases = sample_bias(p, p.m, rng);
    in.code = generate_code(in.biases, p.n, rng);
    const std::string path = "roundtrip.trdc";
    write_bundle(path, in);
    const CodeBundle out = read_bundle(path);
    CHECK(out.params.q == p.q);
    CHECK(out.params.c == p.c);
    CHECK(out.params.kappa == doctest::Approx(p.kappa).epsilon(1e-15));
    CHECK(out.params.m == p.m);
    CHECK(out.params.n == p.n);
    CHECK(out.seed == in.seed);
    CHECK(out.biases.p == in.biases.p); // float64 block is bit-exact
    CHECK(out.code.x == in.code.x);
    std::remove(path.c_str());
}

TEST_CASE("bundle header guards") {
    const CodeParams p = reference_params();
    Rng rng(31);
    CodeBundle in;
    in.params = p;
    in.seed = 31;
    in.biases = sample_bias(p, p.m, rng);
    in.code = generate_code(in.biases, p.n, rng);
    const std::string path = "corrupt.trdc";
    write_bundle(path, in);

    auto patch_byte = [&](long offset, char value) {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(offset);
        f.put(value);
    };

    patch_byte(0, 'X'); // magic
    CHECK_THROWS_WITH_AS(read_bundle(path), doctest::Contains("magic"),
                         invalid_argument_error);
    patch_byte(0, 'T');
    patch_byte(4, 9); // version (little-endian u32 at offset 4)
    CHECK_THROWS_WITH_AS(read_bundle(path), doctest::Contains("version"),
                         invalid_argument_error);
    patch_byte(4, 1);
    CHECK_NOTHROW(read_bundle(path));

    // Truncation is detected.
    {
        std::ifstream f(path, std::ios::binary);
        std::vector<char> all((std::istreambuf_iterator<char>(f)),
                              std::istreambuf_iterator<char>());
        std::ofstream g(path, std::ios::binary | std::ios::trunc);
        g.write(all.data(), static_cast<long>(all.size()) - 16);
    }
    CHECK_THROWS_AS(read_bundle(path), invalid_argument_error);
    std::remove(path.c_str());
}

TEST_CASE("read_bundle missing file") {
    CHECK_THROWS_AS(read_bundle("does_not_exist.trdc"), invalid_argument_error);
}
