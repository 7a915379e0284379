#include "tardos/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace tardos {

int Strategy::q() const {
    switch (kind) {
    case StrategyKind::class1:
        return c1.q;
    case StrategyKind::class2:
        return c2.q;
    default:
        return c3.q;
    }
}

int Strategy::c() const {
    switch (kind) {
    case StrategyKind::class1:
        return c1.c;
    case StrategyKind::class2:
        return c2.c;
    default:
        return c3.c;
    }
}

Strategy Strategy::interleaving(int q, int c) {
    Strategy s;
    s.kind = StrategyKind::class1;
    s.name = "interleaving";
    s.c1.q = q;
    s.c1.c = c;
    s.c1.w.assign(static_cast<std::size_t>((c + 1) * q), 0.0);
    s.c1.W1.assign(static_cast<std::size_t>((c + 1) * q * (c + 1)), 1.0);
    for (int b = 0; b <= c; ++b)
        for (int ell = 0; ell < q; ++ell)
            s.c1.w[static_cast<std::size_t>(b * q + ell)] = static_cast<double>(b) / c;
    return s;
}

Strategy Strategy::from_ranking(int q, int c, const std::vector<int>& rank) {
    if (static_cast<int>(rank.size()) != c + 1)
        throw invalid_argument_error("from_ranking: rank table must have c+1 entries");
    Strategy s;
    s.kind = StrategyKind::class3;
    s.name = "custom";
    s.c3.q = q;
    s.c3.c = c;
    s.c3.W3.assign(static_cast<std::size_t>((c + 1) * (c + 1)), 0);
    for (int b = 1; b <= c; ++b) {
        s.c3.W3[static_cast<std::size_t>(b * (c + 1))] = 1; // zero ranks worst
        for (int z = 1; z <= c; ++z)
            if (z != b && rank[static_cast<std::size_t>(b)] < rank[static_cast<std::size_t>(z)])
                s.c3.W3[static_cast<std::size_t>(b * (c + 1) + z)] = 1;
    }
    s.check_class3();
    return s;
}

Strategy Strategy::majority(int q, int c) {
    std::vector<int> rank(static_cast<std::size_t>(c + 1));
    for (int b = 0; b <= c; ++b)
        rank[static_cast<std::size_t>(b)] = c - b; // larger count ranks better
    Strategy s = from_ranking(q, c, rank);
    s.name = "majority";
    return s;
}

Strategy Strategy::minority(int q, int c) {
    std::vector<int> rank(static_cast<std::size_t>(c + 1));
    for (int b = 0; b <= c; ++b)
        rank[static_cast<std::size_t>(b)] = b; // smaller count ranks better
    Strategy s = from_ranking(q, c, rank);
    s.name = "minority";
    return s;
}

Strategy Strategy::mu_min(const CodeParams& params) {
    const int c = params.c;
    // Extended precision for the T ranking so the tie test reflects the
    // values, not double roundoff.
    std::vector<float50> T(static_cast<std::size_t>(c + 1));
    for (int b = 0; b <= c; ++b)
        T[static_cast<std::size_t>(b)] = t_exact<float50>(b, params);
    // Two distinct counts can appear in the same segment only if b + z <= c;
    // equal T there makes the argmin ill-defined.
    for (int b = 1; b <= c; ++b)
        for (int z = b + 1; z + b <= c; ++z) {
            const float50 tb = T[static_cast<std::size_t>(b)];
            const float50 tz = T[static_cast<std::size_t>(z)];
            float50 scale = abs(tb) > abs(tz) ? abs(tb) : abs(tz);
            if (scale < 1)
                scale = 1;
            if (abs(tb - tz) <= float50(1e-12) * scale)
                throw numeric_error(
                    "pathological kappa: T(" + std::to_string(b) + ") == T(" +
                    std::to_string(z) + ") makes the minimizing ranking ill-defined");
        }
    std::vector<int> order(static_cast<std::size_t>(c), 0);
    std::iota(order.begin(), order.end(), 1);
    std::sort(order.begin(), order.end(), [&](int a, int b2) {
        return T[static_cast<std::size_t>(a)] < T[static_cast<std::size_t>(b2)];
    });
    std::vector<int> rank(static_cast<std::size_t>(c + 1), c + 1);
    for (int i = 0; i < c; ++i)
        rank[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
    Strategy s = from_ranking(params.q, c, rank);
    s.name = "mu_min";
    return s;
}

Strategy Strategy::random_ranking(int q, int c, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> perm(static_cast<std::size_t>(c), 0);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = c - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    std::vector<int> rank(static_cast<std::size_t>(c + 1), c + 1);
    for (int b = 1; b <= c; ++b)
        rank[static_cast<std::size_t>(b)] = perm[static_cast<std::size_t>(b - 1)];
    Strategy s = from_ranking(q, c, rank);
    s.name = "random_ranking";
    return s;
}

Strategy Strategy::builtin_by_name(const std::string& name, const CodeParams& params) {
    if (name == "interleaving")
        return interleaving(params.q, params.c);
    if (name == "majority")
        return majority(params.q, params.c);
    if (name == "minority")
        return minority(params.q, params.c);
    if (name == "mu_min")
        return mu_min(params);
    throw invalid_argument_error("unknown builtin strategy: " + name);
}

void Strategy::check_class3() const {
    if (kind != StrategyKind::class3)
        throw invalid_argument_error("check_class3: strategy is not class 3");
    const int c = c3.c;
    for (int b = 1; b <= c; ++b) {
        if (!c3.W_at(b, 0))
            throw invalid_argument_error("class 3: W(b,0) must be 1 for b >= 1");
        for (int z = b + 1; b + z <= c; ++z)
            if (c3.W_at(b, z) == c3.W_at(z, b))
                throw invalid_argument_error(
                    "class 3: W(b,z) + W(z,b) must be 1 for co-occurring counts");
    }
    // Transitivity over triples of counts that can all appear together.
    for (int b = 1; b <= c; ++b)
        for (int z = 1; z <= c; ++z)
            for (int u = 1; u <= c; ++u) {
                if (b == z || z == u || b == u)
                    continue;
                if (b + z > c || z + u > c || b + u > c)
                    continue;
                if (c3.W_at(b, z) && c3.W_at(z, u) && !c3.W_at(b, u))
                    throw invalid_argument_error("class 3: ranking is not transitive");
            }
}

CountVector count_symbols(const std::vector<Symbol>& coalition_column, int q, int c) {
    if (static_cast<int>(coalition_column.size()) != c)
        throw invalid_argument_error("count_symbols: column must have exactly c entries");
    CountVector out;
    out.sigma.assign(static_cast<std::size_t>(q), 0);
    for (const Symbol& s : coalition_column) {
        if (s.index < 0 || s.index >= q)
            throw invalid_argument_error("count_symbols: symbol out of range");
        ++out.sigma[static_cast<std::size_t>(s.index)];
    }
    return out;
}

namespace {

double psi_raw(const Strategy& s, int b, const int* x, int n) {
    return detail::psi_tables<double>(s, b, x, n);
}

} // namespace

double psi(const Strategy& s, int b, const std::vector<int>& x) {
    const int q = s.q();
    const int c = s.c();
    if (b < 1 || b > c)
        throw invalid_argument_error("psi: b must lie in 1..c");
    if (static_cast<int>(x.size()) != q - 1)
        throw invalid_argument_error("psi: x must have q-1 entries");
    int tot = b;
    for (int v : x)
        tot += v;
    if (tot != c)
        throw invalid_argument_error("psi: b + sum(x) must equal c");
    return psi_raw(s, b, x.data(), q - 1);
}

void theta_into(const Strategy& s, const int* sigma, double* th, int* x_scratch) {
    const int q = s.q();
    double sum = 0.0;
    for (int alpha = 0; alpha < q; ++alpha) {
        const int b = sigma[alpha];
        if (b == 0) {
            th[alpha] = 0.0; // Marking Assumption: unseen symbols are never output
            continue;
        }
        int j = 0;
        for (int beta = 0; beta < q; ++beta)
            if (beta != alpha)
                x_scratch[j++] = sigma[beta];
        th[alpha] = psi_raw(s, b, x_scratch, q - 1);
        sum += th[alpha];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw numeric_error("theta: strategy output distribution does not normalize");
}

std::vector<double> theta(const Strategy& s, const CountVector& sigma) {
    const int q = s.q();
    const int c = s.c();
    if (static_cast<int>(sigma.sigma.size()) != q)
        throw invalid_argument_error("theta: sigma must have q entries");
    int tot = 0;
    for (int v : sigma.sigma)
        tot += v;
    if (tot != c)
        throw invalid_argument_error("theta: sigma must sum to c");

    std::vector<double> th(static_cast<std::size_t>(q), 0.0);
    std::vector<int> x(static_cast<std::size_t>(q > 1 ? q - 1 : 1), 0);
    theta_into(s, sigma.sigma.data(), th.data(), x.data());
    return th;
}

Symbol pick_symbol(const Strategy& s, const CountVector& sigma, Rng& rng) {
    const std::vector<double> th = theta(s, sigma);
    return Symbol{rng.categorical(th)};
}

// ----------------------------------------------------------------- JSON ----

std::string Strategy::to_json() const {
    nlohmann::json j;
    if (name != "custom" && name != "random_ranking" && !name.empty()) {
        j["kind"] = "builtin";
        j["name"] = name;
        return j.dump();
    }
    switch (kind) {
    case StrategyKind::class3: {
        j["kind"] = "class3";
        j["q"] = c3.q;
        j["c"] = c3.c;
        nlohmann::json table = nlohmann::json::array();
        for (int b = 0; b <= c3.c; ++b)
            for (int z = 0; z <= c3.c; ++z)
                table.push_back({b, z, c3.W_at(b, z) ? 1 : 0});
        j["table"] = table;
        break;
    }
    case StrategyKind::class2: {
        j["kind"] = "class2";
        j["q"] = c2.q;
        j["c"] = c2.c;
        j["w"] = c2.w;
        nlohmann::json table = nlohmann::json::array();
        for (int b = 0; b <= c2.c; ++b)
            for (int z = 0; z <= c2.c; ++z)
                table.push_back({b, z, c2.W_at(b, z)});
        j["W"] = table;
        break;
    }
    case StrategyKind::class1: {
        j["kind"] = "class1";
        j["q"] = c1.q;
        j["c"] = c1.c;
        nlohmann::json wt = nlohmann::json::array();
        for (int b = 0; b <= c1.c; ++b)
            for (int ell = 0; ell < c1.q; ++ell)
                wt.push_back({b, ell, c1.w_at(b, ell)});
        j["w"] = wt;
        nlohmann::json table = nlohmann::json::array();
        for (int b = 0; b <= c1.c; ++b)
            for (int ell = 0; ell < c1.q; ++ell)
                for (int z = 0; z <= c1.c; ++z)
                    table.push_back({b, ell, z, c1.W_at(b, ell, z)});
        j["W"] = table;
        break;
    }
    }
    return j.dump();
}

Strategy Strategy::from_json_text(const std::string& text, const CodeParams& params) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw invalid_argument_error(std::string("strategy JSON parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw invalid_argument_error("strategy JSON: missing string field \"kind\"");
    const std::string kind = j["kind"].get<std::string>();

    if (kind == "builtin") {
        if (!j.contains("name") || !j["name"].is_string())
            throw invalid_argument_error("strategy JSON: builtin requires \"name\"");
        return builtin_by_name(j["name"].get<std::string>(), params);
    }

    const int q = j.value("q", params.q);
    const int c = j.value("c", params.c);
    if (q != params.q || c != params.c)
        throw invalid_argument_error("strategy JSON: q/c do not match the run parameters");

    auto require_array = [&](const char* field) -> const nlohmann::json& {
        if (!j.contains(field) || !j[field].is_array())
            throw invalid_argument_error(std::string("strategy JSON: missing array field \"") +
                                         field + "\"");
        return j[field];
    };

    if (kind == "class3") {
        Strategy s;
        s.kind = StrategyKind::class3;
        s.name = "custom";
        s.c3.q = q;
        s.c3.c = c;
        s.c3.W3.assign(static_cast<std::size_t>((c + 1) * (c + 1)), 0);
        for (const auto& row : require_array("table")) {
            if (!row.is_array() || row.size() != 3)
                throw invalid_argument_error("strategy JSON: class3 table rows are [b,z,0|1]");
            const int b = row[0].get<int>();
            const int z = row[1].get<int>();
            const int v = row[2].get<int>();
            if (b < 0 || b > c || z < 0 || z > c || (v != 0 && v != 1))
                throw invalid_argument_error("strategy JSON: class3 table entry out of range");
            s.c3.W3[static_cast<std::size_t>(b * (c + 1) + z)] =
                static_cast<std::uint8_t>(v);
        }
        s.check_class3();
        return s;
    }
    if (kind == "class2") {
        Strategy s;
        s.kind = StrategyKind::class2;
        s.name = "custom";
        s.c2.q = q;
        s.c2.c = c;
        const auto& w = require_array("w");
        if (static_cast<int>(w.size()) != c + 1)
            throw invalid_argument_error("strategy JSON: class2 w must have c+1 entries");
        s.c2.w = w.get<std::vector<double>>();
        s.c2.W2.assign(static_cast<std::size_t>((c + 1) * (c + 1)), 0.0);
        for (const auto& row : require_array("W")) {
            if (!row.is_array() || row.size() != 3)
                throw invalid_argument_error("strategy JSON: class2 W rows are [b,z,value]");
            const int b = row[0].get<int>();
            const int z = row[1].get<int>();
            if (b < 0 || b > c || z < 0 || z > c)
                throw invalid_argument_error("strategy JSON: class2 W entry out of range");
            s.c2.W2[static_cast<std::size_t>(b * (c + 1) + z)] = row[2].get<double>();
        }
        return s;
    }
    if (kind == "class1") {
        Strategy s;
        s.kind = StrategyKind::class1;
        s.name = "custom";
        s.c1.q = q;
        s.c1.c = c;
        s.c1.w.assign(static_cast<std::size_t>((c + 1) * q), 0.0);
        s.c1.W1.assign(static_cast<std::size_t>((c + 1) * q * (c + 1)), 0.0);
        for (const auto& row : require_array("w")) {
            if (!row.is_array() || row.size() != 3)
                throw invalid_argument_error("strategy JSON: class1 w rows are [b,ell,value]");
            const int b = row[0].get<int>();
            const int ell = row[1].get<int>();
            if (b < 0 || b > c || ell < 0 || ell >= q)
                throw invalid_argument_error("strategy JSON: class1 w entry out of range");
            s.c1.w[static_cast<std::size_t>(b * q + ell)] = row[2].get<double>();
        }
        for (const auto& row : require_array("W")) {
            if (!row.is_array() || row.size() != 4)
                throw invalid_argument_error("strategy JSON: class1 W rows are [b,ell,z,value]");
            const int b = row[0].get<int>();
            const int ell = row[1].get<int>();
            const int z = row[2].get<int>();
            if (b < 0 || b > c || ell < 0 || ell >= q || z < 0 || z > c)
                throw invalid_argument_error("strategy JSON: class1 W entry out of range");
            s.c1.W1[static_cast<std::size_t>((b * q + ell) * (c + 1) + z)] =
                row[3].get<double>();
        }
        return s;
    }
    throw invalid_argument_error("strategy JSON: unknown kind \"" + kind + "\"");
}

} // namespace tardos
