#include "tardos/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "tardos/codec.hpp"

namespace tardos {

namespace {

// Per-segment draw shared by every estimator: bias row p, colluder counts
// sigma (c categorical draws), exact theta. Buffers are caller-owned.
struct SegmentScratch {
    std::vector<double> p;
    std::vector<int> sigma;
    std::vector<double> th;
    std::vector<int> x;

    explicit SegmentScratch(int q)
        : p(static_cast<std::size_t>(q)), sigma(static_cast<std::size_t>(q)),
          th(static_cast<std::size_t>(q)), x(static_cast<std::size_t>(q > 1 ? q - 1 : 1)) {}
};

void draw_segment(const Strategy& s, const CodeParams& params, Rng& rng, SegmentScratch& sc) {
    rng.dirichlet(params.kappa, params.q, sc.p);
    for (int a = 0; a < params.q; ++a)
        sc.sigma[static_cast<std::size_t>(a)] = 0;
    for (int j = 0; j < params.c; ++j)
        ++sc.sigma[static_cast<std::size_t>(rng.categorical(sc.p.data(), params.q))];
    theta_into(s, sc.sigma.data(), sc.th.data(), sc.x.data());
}

long long blocks_for(long long trials) { return (trials + mc_block_trials - 1) / mc_block_trials; }

} // namespace

McEstimate empirical_mu(const Strategy& s, const CodeParams& params, long long trials,
                        std::uint64_t seed) {
    validate_analytic(params);
    if (trials <= 1)
        throw invalid_argument_error("empirical_mu: trials > 1 violated");
    SegmentScratch sc(params.q);
    KahanSum sum, sumsq;
    const long long nb = blocks_for(trials);
    for (long long blk = 0; blk < nb; ++blk) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(blk));
        const long long lo = blk * mc_block_trials;
        const long long hi = std::min(trials, lo + mc_block_trials);
        KahanSum bsum, bsumsq;
        for (long long t = lo; t < hi; ++t) {
            draw_segment(s, params, rng, sc);
            double v = 0.0;
            for (int a = 0; a < params.q; ++a) {
                const double th = sc.th[static_cast<std::size_t>(a)];
                if (th == 0.0)
                    continue;
                const int b = sc.sigma[static_cast<std::size_t>(a)];
                const double pa = sc.p[static_cast<std::size_t>(a)];
                v += th * (b * g1(pa) + (params.c - b) * g0(pa));
            }
            bsum.add(v);
            bsumsq.add(v * v);
        }
        sum.add(bsum.value());
        sumsq.add(bsumsq.value());
    }
    McEstimate e;
    e.n = trials;
    e.mean = sum.value() / static_cast<double>(trials);
    const double var =
        (sumsq.value() - trials * e.mean * e.mean) / static_cast<double>(trials - 1);
    e.se = std::sqrt(std::max(var, 0.0) / static_cast<double>(trials));
    return e;
}

KbEstimate empirical_kb(const Strategy& s, const CodeParams& params, long long trials,
                        std::uint64_t seed) {
    validate_analytic(params);
    if (trials <= 1)
        throw invalid_argument_error("empirical_kb: trials > 1 violated");
    SegmentScratch sc(params.q);
    const int c = params.c;
    std::vector<KahanSum> sum(static_cast<std::size_t>(c + 1));
    std::vector<KahanSum> sumsq(static_cast<std::size_t>(c + 1));
    std::vector<long long> count(static_cast<std::size_t>(c + 1), 0);
    const long long nb = blocks_for(trials);
    for (long long blk = 0; blk < nb; ++blk) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(blk));
        const long long lo = blk * mc_block_trials;
        const long long hi = std::min(trials, lo + mc_block_trials);
        for (long long t = lo; t < hi; ++t) {
            draw_segment(s, params, rng, sc);
            for (int a = 0; a < params.q; ++a) {
                const int b = sc.sigma[static_cast<std::size_t>(a)];
                const double th = sc.th[static_cast<std::size_t>(a)];
                sum[static_cast<std::size_t>(b)].add(th);
                sumsq[static_cast<std::size_t>(b)].add(th * th);
                ++count[static_cast<std::size_t>(b)];
            }
        }
    }
    KbEstimate est;
    est.rows.resize(static_cast<std::size_t>(c + 1));
    for (int b = 0; b <= c; ++b) {
        auto& row = est.rows[static_cast<std::size_t>(b)];
        row.n = count[static_cast<std::size_t>(b)];
        if (row.n >= 2) {
            row.mean = sum[static_cast<std::size_t>(b)].value() / static_cast<double>(row.n);
            const double var = (sumsq[static_cast<std::size_t>(b)].value() -
                                row.n * row.mean * row.mean) /
                               static_cast<double>(row.n - 1);
            row.se = std::sqrt(std::max(var, 0.0) / static_cast<double>(row.n));
        }
    }
    return est;
}

MomentEstimate empirical_innocent_moments(const Strategy& s, const CodeParams& params,
                                          long long trials, std::uint64_t seed) {
    validate_analytic(params);
    if (trials <= 1)
        throw invalid_argument_error("empirical_innocent_moments: trials > 1 violated");
    SegmentScratch sc(params.q);
    KahanSum s1, s2, s4;
    const long long nb = blocks_for(trials);
    for (long long blk = 0; blk < nb; ++blk) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(blk));
        const long long lo = blk * mc_block_trials;
        const long long hi = std::min(trials, lo + mc_block_trials);
        KahanSum b1, b2, b4;
        for (long long t = lo; t < hi; ++t) {
            draw_segment(s, params, rng, sc);
            const int y = rng.categorical(sc.th.data(), params.q);
            const double py = sc.p[static_cast<std::size_t>(y)];
            const int xj = rng.categorical(sc.p.data(), params.q);
            const double g = score_segment(xj, y, py);
            b1.add(g);
            b2.add(g * g);
            b4.add(g * g * g * g);
        }
        s1.add(b1.value());
        s2.add(b2.value());
        s4.add(b4.value());
    }
    MomentEstimate m;
    const double n = static_cast<double>(trials);
    m.mean.n = trials;
    m.mean.mean = s1.value() / n;
    const double var = (s2.value() - n * m.mean.mean * m.mean.mean) / (n - 1);
    m.mean.se = std::sqrt(std::max(var, 0.0) / n);
    m.var.n = trials;
    m.var.mean = var;
    // SE of the sample variance via the fourth moment.
    const double m2 = s2.value() / n;
    const double m4 = s4.value() / n;
    m.var.se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
    return m;
}

namespace {

template <class PerTrial>
void run_trials(const Strategy& s, const CodeParams& params, int m, long long trials,
                std::uint64_t seed, PerTrial&& per_trial) {
    SegmentScratch sc(params.q);
    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
    const long long nb = blocks_for(trials);
    for (long long blk = 0; blk < nb; ++blk) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(blk));
        const long long lo = blk * mc_block_trials;
        const long long hi = std::min(trials, lo + mc_block_trials);
        for (long long t = lo; t < hi; ++t) {
            KahanSum innocent, coalition;
            for (int i = 0; i < m; ++i) {
                draw_segment(s, params, rng, sc);
                const int y = rng.categorical(sc.th.data(), params.q);
                const double py = sc.p[static_cast<std::size_t>(y)];
                const int xj = rng.categorical(sc.p.data(), params.q);
                innocent.add(score_segment(xj, y, py));
                const int b = sc.sigma[static_cast<std::size_t>(y)];
                coalition.add(b * g1(py) + (params.c - b) * g0(py));
            }
            per_trial(innocent.value() * inv_sqrt_m, coalition.value());
        }
    }
}

} // namespace

std::vector<ScoreSample> simulate_scores(const Strategy& s, const CodeParams& params, int m,
                                         long long trials, std::uint64_t seed) {
    validate_analytic(params);
    if (m <= 0 || trials <= 0)
        throw invalid_argument_error("simulate_scores: m >= 1 and trials >= 1 violated");
    std::vector<ScoreSample> out;
    out.reserve(static_cast<std::size_t>(trials));
    run_trials(s, params, m, trials, seed,
               [&](double inn, double coal) { out.push_back({inn, coal}); });
    return out;
}

std::vector<FpEstimate> empirical_fp(const Strategy& s, const CodeParams& params, int m,
                                     const std::vector<double>& zs, long long trials,
                                     std::uint64_t seed) {
    validate_analytic(params);
    if (m <= 0 || trials <= 0)
        throw invalid_argument_error("empirical_fp: m >= 1 and trials >= 1 violated");
    if (zs.empty())
        throw invalid_argument_error("empirical_fp: no thresholds given");
    std::vector<long long> hits(zs.size(), 0);
    run_trials(s, params, m, trials, seed, [&](double inn, double) {
        for (std::size_t i = 0; i < zs.size(); ++i)
            if (inn > zs[i])
                ++hits[i];
    });
    std::vector<FpEstimate> out(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) {
        auto& e = out[i];
        e.z = zs[i];
        e.hits = hits[i];
        e.trials = trials;
        if (e.hits < mc_min_tail_hits)
            throw numeric_error("empirical_fp: too few tail hits for a reliable estimate");
        e.rate = static_cast<double>(e.hits) / static_cast<double>(trials);
        e.se = std::sqrt(e.rate * (1.0 - e.rate) / static_cast<double>(trials));
    }
    return out;
}

} // namespace tardos
