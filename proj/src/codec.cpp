#include "tardos/codec.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

#include <nlohmann/json.hpp>

namespace tardos {

double g1(double p) { return std::sqrt((1.0 - p) / p); }
double g0(double p) { return -std::sqrt(p / (1.0 - p)); }

double score_segment(int x, int y, double p_y) { return x == y ? g1(p_y) : g0(p_y); }

BiasMatrix sample_bias(const CodeParams& params, int m, Rng& rng) {
    validate_analytic(params);
    if (m <= 0)
        throw invalid_argument_error("sample_bias: m >= 1 violated");
    BiasMatrix out;
    out.m = m;
    out.q = params.q;
    out.p.resize(static_cast<std::size_t>(m) * params.q);
    std::vector<double> row(static_cast<std::size_t>(params.q));
    for (int i = 0; i < m; ++i) {
        rng.dirichlet(params.kappa, params.q, row);
        std::memcpy(&out.p[static_cast<std::size_t>(i) * params.q], row.data(),
                    sizeof(double) * row.size());
    }
    return out;
}

Code generate_code(const BiasMatrix& biases, int n, Rng& rng) {
    if (n <= 0)
        throw invalid_argument_error("generate_code: n >= 1 violated");
    Code out;
    out.n = n;
    out.m = biases.m;
    out.x.resize(static_cast<std::size_t>(n) * biases.m);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < biases.m; ++i)
            out.x[static_cast<std::size_t>(j) * biases.m + i] = static_cast<std::uint16_t>(
                rng.categorical(&biases.p[static_cast<std::size_t>(i) * biases.q], biases.q));
    return out;
}

AccusationResult accuse(const Code& code, const std::vector<int>& y, const BiasMatrix& biases,
                        double Z) {
    if (static_cast<int>(y.size()) != code.m || biases.m != code.m)
        throw invalid_argument_error("accuse: segment count mismatch");
    AccusationResult res;
    res.scores.resize(static_cast<std::size_t>(code.n));
    for (int j = 0; j < code.n; ++j) {
        KahanSum s;
        for (int i = 0; i < code.m; ++i) {
            const int yi = y[static_cast<std::size_t>(i)];
            if (yi < 0 || yi >= biases.q)
                throw invalid_argument_error("accuse: pirate symbol out of range");
            s.add(score_segment(code.at(j, i), yi, biases.at(i, yi)));
        }
        res.scores[static_cast<std::size_t>(j)] = s.value();
        if (s.value() > Z)
            res.accused.push_back(j);
    }
    return res;
}

namespace {

constexpr char bundle_magic[4] = {'T', 'R', 'D', 'C'};
constexpr std::uint32_t bundle_version = 1;

struct FileCloser {
    std::FILE* f;
    ~FileCloser() {
        if (f)
            std::fclose(f);
    }
};

void put_u32(std::FILE* f, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i)
        b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    if (std::fwrite(b, 1, 4, f) != 4)
        throw numeric_error("bundle write failed");
}

std::uint32_t get_u32(std::FILE* f) {
    unsigned char b[4];
    if (std::fread(b, 1, 4, f) != 4)
        throw invalid_argument_error("bundle read failed: truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

} // namespace

void write_bundle(const std::string& path, const CodeBundle& bundle) {
    nlohmann::json header = {
        {"q", bundle.params.q},          {"c", bundle.params.c}, {"kappa", bundle.params.kappa},
        {"m", bundle.biases.m},          {"n", bundle.code.n},   {"seed", bundle.seed},
    };
    const std::string hs = header.dump();

    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f)
        throw invalid_argument_error("write_bundle: cannot open " + path);
    FileCloser closer{f};

    if (std::fwrite(bundle_magic, 1, 4, f) != 4)
        throw numeric_error("bundle write failed");
    put_u32(f, bundle_version);
    put_u32(f, static_cast<std::uint32_t>(hs.size()));
    if (std::fwrite(hs.data(), 1, hs.size(), f) != hs.size())
        throw numeric_error("bundle write failed");
    const std::size_t np = bundle.biases.p.size();
    if (np && std::fwrite(bundle.biases.p.data(), sizeof(double), np, f) != np)
        throw numeric_error("bundle write failed");
    const std::size_t nx = bundle.code.x.size();
    if (nx && std::fwrite(bundle.code.x.data(), sizeof(std::uint16_t), nx, f) != nx)
        throw numeric_error("bundle write failed");
}

CodeBundle read_bundle(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f)
        throw invalid_argument_error("read_bundle: cannot open " + path);
    FileCloser closer{f};

    char magic[4];
    if (std::fread(magic, 1, 4, f) != 4 || std::memcmp(magic, bundle_magic, 4) != 0)
        throw invalid_argument_error("read_bundle: bad magic");
    const std::uint32_t version = get_u32(f);
    if (version != bundle_version)
        throw invalid_argument_error("read_bundle: unsupported version");
    const std::uint32_t hlen = get_u32(f);
    std::string hs(hlen, '\0');
    if (hlen && std::fread(hs.data(), 1, hlen, f) != hlen)
        throw invalid_argument_error("read_bundle: truncated header");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(hs);
    } catch (const nlohmann::json::exception& e) {
        throw invalid_argument_error(std::string("read_bundle: header parse error: ") + e.what());
    }

    CodeBundle out;
    try {
        out.params.q = header.at("q").get<int>();
        out.params.c = header.at("c").get<int>();
        out.params.kappa = header.at("kappa").get<double>();
        out.biases.m = header.at("m").get<int>();
        out.code.n = header.at("n").get<int>();
        out.seed = header.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw invalid_argument_error(std::string("read_bundle: header field error: ") + e.what());
    }
    out.params.m = out.biases.m;
    out.params.n = out.code.n;
    validate(out.params);
    if (out.biases.m <= 0 || out.code.n <= 0)
        throw invalid_argument_error("read_bundle: nonpositive dimensions");

    out.biases.q = out.params.q;
    out.code.m = out.biases.m;
    out.biases.p.resize(static_cast<std::size_t>(out.biases.m) * out.biases.q);
    out.code.x.resize(static_cast<std::size_t>(out.code.n) * out.code.m);
    if (std::fread(out.biases.p.data(), sizeof(double), out.biases.p.size(), f) !=
        out.biases.p.size())
        throw invalid_argument_error("read_bundle: truncated bias block");
    if (std::fread(out.code.x.data(), sizeof(std::uint16_t), out.code.x.size(), f) !=
        out.code.x.size())
        throw invalid_argument_error("read_bundle: truncated code block");
    return out;
}

} // namespace tardos
