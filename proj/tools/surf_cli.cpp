// Command-line front end for the two-layer code signature toolkit: parameter
// selection, key generation, signing, verification, the hull distinguisher,
// analytic cost tables, and decoder distribution checks.
//
// Exit codes (stable contract):
//   0  success / signature accepted
//   1  signature rejected by verify
//   2  usage or parameter error
//   3  I/O failure or malformed file

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "CLI11.hpp"
#include "json.hpp"

#include "surf/attack.hpp"
#include "surf/bitvec.hpp"
#include "surf/codes.hpp"
#include "surf/decoder.hpp"
#include "surf/errors.hpp"
#include "surf/estimator.hpp"
#include "surf/keyio.hpp"
#include "surf/parallel.hpp"
#include "surf/params.hpp"
#include "surf/rng.hpp"
#include "surf/scheme.hpp"

using nlohmann::json;
using namespace surf;

namespace {

constexpr int kOk = 0;
constexpr int kReject = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

// --- small output helpers ---------------------------------------------------

// Rounds to a fixed number of decimals so reports stay stable and readable;
// non-finite values pass through for the caller's null handling.
double rounded(long double x, int decimals = 6) {
    const double d = static_cast<double>(x);
    if (!std::isfinite(d)) return d;
    const double scale = std::pow(10.0, decimals);
    return std::round(d * scale) / scale;
}

// JSON value for a possibly non-finite number (JSON has no inf/nan).
json json_num(long double x, int decimals = 6) {
    const double d = rounded(x, decimals);
    if (!std::isfinite(d)) return nullptr;
    return d;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

// One table: ordered column names plus rows of JSON objects keyed by them.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<json> rows;
};

std::string csv_of(const Table& t) {
    std::ostringstream out;
    out << std::setprecision(10);
    for (size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const json& row : t.rows) {
        for (size_t i = 0; i < t.columns.size(); ++i) {
            out << (i ? "," : "");
            const json& v = row.at(t.columns[i]);
            if (v.is_string()) {
                out << v.get<std::string>();
            } else if (v.is_number_float()) {
                out << v.get<double>();
            } else if (!v.is_null()) {
                out << v.dump();
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string json_of(const Table& t) {
    json j{{"table", t.name}, {"rows", t.rows}};
    return j.dump(2) + "\n";
}

// Emits table text to stdout or to a file.
void emit_table(const Table& t, const std::string& format, const std::string& out_path) {
    const std::string text = format == "json" ? json_of(t) : csv_of(t);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
    }
}

// Prints the machine-readable summary as the final stdout line and optionally
// mirrors a pretty copy to a file.
void finish_json(const json& j, const std::string& out_path) {
    std::cout << j.dump() << "\n";
    if (!out_path.empty()) write_text_file(out_path, j.dump(2) + "\n");
}

// --- shared plumbing ----------------------------------------------------------

json params_json(const SurfParams& p) {
    return json{{"n", p.n},           {"k", p.k()},       {"k_u", p.k_u},
                {"k_v", p.k_v},       {"w", p.w},         {"lambda", p.lambda},
                {"lambda0", p.lambda0}};
}

SurfParams load_params_file(const std::string& path) {
    const std::vector<uint8_t> raw = keyio::read_file(path);
    const json j = json::parse(raw.begin(), raw.end());
    return select_params(j.at("n").get<uint32_t>(), j.at("lambda").get<uint32_t>());
}

uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<uint64_t>(rd()) << 32) ^ static_cast<uint64_t>(rd());
}

// The public code as seen by an attacker: parity (I | r).
codes::LinearCode code_of_public(const scheme::PublicKey& pk) {
    const uint32_t r = pk.params.r();
    const uint32_t n = pk.params.n;
    BitMatrix h(r, n);
    for (uint32_t i = 0; i < r; ++i) {
        h.set(i, i, true);
        for (uint32_t j = 0; j < pk.params.k(); ++j) {
            if (pk.r.get(i, j)) h.set(i, r + j, true);
        }
    }
    return codes::LinearCode(h);
}

// Plain-text code file: a line "n k" followed by k generator rows written as
// '0'/'1' strings of length n (any whitespace between rows).
codes::LinearCode read_code_file(const std::string& path) {
    const std::vector<uint8_t> raw = keyio::read_file(path);
    std::istringstream in(std::string(raw.begin(), raw.end()));
    uint64_t n = 0;
    uint64_t k = 0;
    if (!(in >> n >> k)) throw FormatError("code file: first line must be 'n k'");
    if (n == 0 || n > 1000000 || k > n) throw FormatError("code file: implausible n or k");
    std::vector<BitVector> rows;
    std::string token;
    while (rows.size() < k && in >> token) {
        if (token.size() != n) throw FormatError("code file: generator row length differs from n");
        BitVector v(n);
        for (size_t j = 0; j < n; ++j) {
            if (token[j] == '1') {
                v.set(j, true);
            } else if (token[j] != '0') {
                throw FormatError("code file: rows must consist of '0'/'1' characters");
            }
        }
        rows.push_back(v);
    }
    if (rows.size() != k) throw FormatError("code file: fewer generator rows than declared");
    return codes::LinearCode::from_generator(rows, static_cast<uint32_t>(n));
}

// Pearson chi-square with tail pooling (cells expecting < 5 are merged).
struct ChiSquare {
    bool valid = false;
    double statistic = 0.0;
    unsigned dof = 0;
    double p_value = 0.0;
};

ChiSquare chi_square_test(const std::vector<double>& observed, const std::vector<double>& expected) {
    ChiSquare out;
    double pooled_obs = 0.0;
    double pooled_exp = 0.0;
    double stat = 0.0;
    unsigned cells = 0;
    for (size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] < 5.0) {
            pooled_obs += observed[i];
            pooled_exp += expected[i];
        } else {
            const double d = observed[i] - expected[i];
            stat += d * d / expected[i];
            ++cells;
        }
    }
    if (pooled_exp > 0.0) {
        const double d = pooled_obs - pooled_exp;
        stat += d * d / pooled_exp;
        ++cells;
    }
    if (cells < 2) return out;
    out.valid = true;
    out.statistic = stat;
    out.dof = cells - 1;
    boost::math::chi_squared dist(out.dof);
    out.p_value = boost::math::cdf(boost::math::complement(dist, stat));
    return out;
}

// Positions carrying a 1 in both halves of a full-length word.
size_t paired_ones(const BitVector& word) {
    const size_t half = word.size() / 2;
    size_t count = 0;
    for (size_t j = 0; j < half; ++j) {
        if (word.get(j) && word.get(half + j)) ++count;
    }
    return count;
}

// --- params -------------------------------------------------------------------

int cmd_params(uint32_t n, uint32_t lambda, const std::string& out_path) {
    const SurfParams p = select_params(n, lambda);
    json j = params_json(p);
    j["m_rs"] = json_num(estimator::m_rs(p));
    j["pk_bytes"] = keyio::public_key_bytes(p);
    j["sk_bytes"] = keyio::secret_key_bytes(p);
    j["sig_bytes"] = keyio::signature_bytes(p);

    std::cout << "n         = " << p.n << "\n"
              << "k         = " << p.k() << "  (k_u = " << p.k_u << ", k_v = " << p.k_v << ")\n"
              << "w         = " << p.w << "\n"
              << "lambda    = " << p.lambda << "  (salt bits = " << p.lambda0 << ")\n"
              << "m_rs      = " << j["m_rs"].get<double>() << "\n"
              << "pk bytes  = " << j["pk_bytes"].get<size_t>() << "\n"
              << "sk bytes  = " << j["sk_bytes"].get<size_t>() << "\n"
              << "sig bytes = " << j["sig_bytes"].get<size_t>() << "\n";
    finish_json(j, out_path);
    return kOk;
}

// --- keygen -------------------------------------------------------------------

int cmd_keygen(const SurfParams& p, uint64_t seed, const std::string& sk_path,
               const std::string& pk_path) {
    Rng rng = make_rng(seed);
    const scheme::SecretKey sk = scheme::keygen(p, rng);
    const scheme::PublicKey pk = scheme::derive_public(sk);
    const std::vector<uint8_t> sk_bytes = keyio::encode_secret(sk);
    const std::vector<uint8_t> pk_bytes = keyio::encode_public(pk);
    keyio::write_file(sk_path, sk_bytes);
    keyio::write_file(pk_path, pk_bytes);
    json j = params_json(p);
    j["sk_file"] = sk_path;
    j["pk_file"] = pk_path;
    j["sk_bytes"] = sk_bytes.size();
    j["pk_bytes"] = pk_bytes.size();
    std::cout << "wrote " << sk_path << " (" << sk_bytes.size() << " bytes) and " << pk_path
              << " (" << pk_bytes.size() << " bytes)\n";
    finish_json(j, "");
    return kOk;
}

// --- sign / verify --------------------------------------------------------------

int cmd_sign(const std::string& sk_path, const std::string& msg_path, const std::string& sig_path,
             uint64_t seed) {
    const scheme::SecretKey sk = keyio::decode_secret(keyio::read_file(sk_path));
    const std::vector<uint8_t> msg = keyio::read_file(msg_path);
    Rng rng = make_rng(seed);
    decoder::DecodeStats stats;
    const scheme::Signature sig = scheme::sign(sk, msg, rng, &stats);
    keyio::write_file(sig_path, keyio::encode_signature(sig, sk.params));
    json j{{"weight", sig.e.weight()},
           {"w", sk.params.w},
           {"sig_file", sig_path},
           {"sig_bytes", keyio::signature_bytes(sk.params)},
           {"v_decodes", stats.v_decodes},
           {"u_decodes", stats.u_decodes}};
    std::cout << "signature weight = " << sig.e.weight() << " (parameter w = " << sk.params.w
              << ")\n";
    finish_json(j, "");
    return kOk;
}

int cmd_verify(const std::string& pk_path, const std::string& msg_path,
               const std::string& sig_path) {
    const scheme::PublicKey pk = keyio::decode_public(keyio::read_file(pk_path));
    const std::vector<uint8_t> msg = keyio::read_file(msg_path);
    const scheme::Signature sig = keyio::decode_signature(keyio::read_file(sig_path));
    const bool ok = scheme::verify(pk, msg, sig);
    std::cout << (ok ? "ACCEPT" : "REJECT") << "\n";
    return ok ? kOk : kReject;
}

// --- distinguish ----------------------------------------------------------------

int cmd_distinguish(const std::string& pk_path, const std::string& code_path,
                    std::optional<uint32_t> ku_opt, std::optional<uint32_t> kv_opt,
                    const std::string& out_path) {
    std::optional<codes::LinearCode> code;
    std::string source;
    if (!pk_path.empty()) {
        const scheme::PublicKey pk = keyio::decode_public(keyio::read_file(pk_path));
        code = code_of_public(pk);
        if (!ku_opt) ku_opt = pk.params.k_u;
        if (!kv_opt) kv_opt = pk.params.k_v;
        source = "public-key";
    } else {
        code = read_code_file(code_path);
        source = "code-file";
        if (!ku_opt || !kv_opt) {
            std::cerr << "error: --kU and --kV are required with --code-file\n";
            return kUsage;
        }
    }
    if (*ku_opt < *kv_opt) {
        std::cerr << "warning: k_U < k_V leaves no hull fingerprint (the construction forces "
                     "dimension k_U - k_V >= 0); refusing to classify\n";
        return kUsage;
    }
    const attack::DistinguisherVerdict v = attack::hull_distinguish(*code, *ku_opt, *kv_opt);
    const std::string verdict = v.predicted == attack::CodeKind::Public ? "Public" : "Random";
    json j{{"source", source},
           {"n", code->n()},
           {"k", code->k()},
           {"k_u", *ku_opt},
           {"k_v", *kv_opt},
           {"hull_dim", v.hull_dim},
           {"expected_pub_dim", v.expected_pub_dim},
           {"verdict", verdict}};
    std::cout << "hull dimension " << v.hull_dim << " (a layered construction forces "
              << v.expected_pub_dim << ") -> " << verdict << "\n";
    finish_json(j, out_path);
    return kOk;
}

// --- estimate -------------------------------------------------------------------

Table table_isd(const std::vector<double>& w_over_n, uint32_t proxy_n) {
    Table t{"isd-exponents",
            {"w_over_n", "wf_multi", "m_over_n", "log2_q_over_n", "wf_doom"},
            {}};
    for (double x : w_over_n) {
        if (!(x > 0.0 && x < 0.5)) {
            throw std::invalid_argument("estimate: --w-over-n values must lie in (0, 0.5)");
        }
        const estimator::ExponentRow r = estimator::isd_exponents(static_cast<long double>(x), proxy_n);
        t.rows.push_back(json{{"w_over_n", json_num(r.w_over_n)},
                              {"wf_multi", json_num(r.dumer_exp)},
                              {"m_over_n", json_num(r.m_exp)},
                              {"log2_q_over_n", json_num(r.q_exp)},
                              {"wf_doom", json_num(r.doom_exp)}});
    }
    return t;
}

json layer_flat(const char* prefix, const attack::LayerCost& c) {
    json j;
    j[std::string(prefix) + "_log2"] = json_num(c.log2_cost, 4);
    j[std::string(prefix) + "_p"] = c.p;
    j[std::string(prefix) + "_ell"] = c.ell;
    return j;
}

json parameter_row(uint32_t n, uint32_t lambda) {
    const SurfParams p = select_params(n, lambda);
    const estimator::WorkfactorReport wf =
        estimator::doom_workfactor(p.n, p.k(), p.w, estimator::Regime::doom);
    const LogReal eps = estimator::epsilon_bound(p);
    const long double forge = static_cast<long double>(p.lambda) + 0.5L * eps.log2_value();
    const attack::StructuralCostReport cost =
        attack::structural_attack_cost(p.n, p.k(), p.k_u, p.k_v);
    json row = params_json(p);
    row["wf_doom_log2"] = json_num(wf.wf_log2, 4);
    row["log2_qhash_sqrt_eps"] = json_num(forge, 4);
    row["c_v_log2"] = json_num(cost.c_v.log2_cost, 4);
    row["c_u_log2"] = json_num(cost.c_u.log2_cost, 4);
    row["pk_bytes"] = keyio::public_key_bytes(p);
    row["sk_bytes"] = keyio::secret_key_bytes(p);
    row["sig_bytes"] = keyio::signature_bytes(p);
    return row;
}

Table table_parameters(std::optional<uint32_t> n, std::optional<uint32_t> lambda) {
    Table t{"proposed-parameters",
            {"n", "k", "k_u", "k_v", "w", "lambda", "lambda0", "wf_doom_log2",
             "log2_qhash_sqrt_eps", "c_v_log2", "c_u_log2", "pk_bytes", "sk_bytes", "sig_bytes"},
            {}};
    std::vector<std::pair<uint32_t, uint32_t>> sets;
    if (n || lambda) {
        if (!n || !lambda) {
            throw std::invalid_argument("estimate --table 3: give both --n and --lambda or neither");
        }
        sets.emplace_back(*n, *lambda);
    } else {
        sets = {{4800, 80}, {7700, 128}, {15400, 256}};
    }
    for (const auto& [nn, ll] : sets) t.rows.push_back(parameter_row(nn, ll));
    return t;
}

Table table_distortion(std::optional<uint32_t> n, std::optional<uint32_t> k, double rate_step) {
    if (n || k) {
        if (!n || !k) {
            throw std::invalid_argument("estimate --table gv: give both --n and --k or neither");
        }
        const uint32_t d = estimator::gv_bound(*n, *k);
        Table t{"gv-point", {"n", "k", "gv_bound", "relative"}, {}};
        t.rows.push_back(json{{"n", *n},
                              {"k", *k},
                              {"gv_bound", d},
                              {"relative", json_num(static_cast<long double>(d) / *n)}});
        return t;
    }
    if (!(rate_step > 0.0 && rate_step <= 0.25)) {
        throw std::invalid_argument("estimate: --rate-step must lie in (0, 0.25]");
    }
    // Relative distortion reached at rate R by: the typical-distance bound
    // h2^{-1}(1-R); a generic information-set decoder (1-R)/2; the layered
    // decoder without rejection (1-R)/3 at the feasibility-optimal split; and
    // the layered decoder with rejection sampling (3 - sqrt(1+8R))/4 at the
    // split minimizing the rejection constant.
    Table t{"distortion-comparison",
            {"rate", "gv", "generic", "layered", "layered_rejection"},
            {}};
    for (uint64_t i = 1; i * rate_step < 1.0 - rate_step / 2; ++i) {
        const long double r = static_cast<long double>(i) * rate_step;
        t.rows.push_back(json{
            {"rate", json_num(r)},
            {"gv", json_num(estimator::h2_inv(1.0L - r))},
            {"generic", json_num((1.0L - r) / 2.0L)},
            {"layered", json_num((1.0L - r) / 3.0L)},
            {"layered_rejection", json_num((3.0L - sqrtl(1.0L + 8.0L * r)) / 4.0L)}});
    }
    return t;
}

Table table_capacity(double p_step) {
    if (!(p_step > 0.0 && p_step <= 0.25)) {
        throw std::invalid_argument("estimate: --p-step must lie in (0, 0.25]");
    }
    Table t{"capacity", {"p", "bsc", "uuv"}, {}};
    for (uint64_t i = 0; i * p_step <= 0.5 + p_step / 2; ++i) {
        const long double p = std::min(static_cast<long double>(i) * p_step, 0.5L);
        const estimator::CapacityPoint c = estimator::capacity_curves(p);
        t.rows.push_back(
            json{{"p", json_num(p)}, {"bsc", json_num(c.bsc)}, {"uuv", json_num(c.uuv)}});
        if (p >= 0.5L) break;
    }
    return t;
}

Table table_epsilon(std::optional<uint32_t> n, std::optional<uint32_t> lambda) {
    if (!n || !lambda) {
        throw std::invalid_argument("estimate --table epsilon: --n and --lambda are required");
    }
    const SurfParams p = select_params(*n, *lambda);
    const LogReal eps = estimator::epsilon_bound(p);
    Table t{"syndrome-indistinguishability",
            {"n", "lambda", "w", "log2_epsilon", "log2_qhash_sqrt_eps"},
            {}};
    t.rows.push_back(json{
        {"n", p.n},
        {"lambda", p.lambda},
        {"w", p.w},
        {"log2_epsilon", json_num(eps.log2_value(), 4)},
        {"log2_qhash_sqrt_eps",
         json_num(static_cast<long double>(p.lambda) + 0.5L * eps.log2_value(), 4)}});
    return t;
}

Table table_attack(std::optional<uint32_t> n, std::optional<uint32_t> k,
                   std::optional<uint32_t> ku, std::optional<uint32_t> kv,
                   std::optional<uint32_t> p_max, std::optional<uint32_t> ell_max) {
    if (!n || !k || !ku || !kv) {
        throw std::invalid_argument("estimate --table attack: --n --k --kU --kV are required");
    }
    attack::StructuralGrid grid;
    if (p_max) grid.p_max = *p_max;
    if (ell_max) grid.ell_max = *ell_max;
    const attack::StructuralCostReport rep = attack::structural_attack_cost(*n, *k, *ku, *kv, grid);
    json row{{"n", *n}, {"k", *k}, {"k_u", *ku}, {"k_v", *kv}};
    row.update(layer_flat("c_v", rep.c_v));
    row.update(layer_flat("c_u", rep.c_u));
    row.update(layer_flat("c_v_dual", rep.c_v_dual));
    row.update(layer_flat("c_u_dual", rep.c_u_dual));
    Table t{"structural-attack-cost",
            {"n", "k", "k_u", "k_v", "c_v_log2", "c_v_p", "c_v_ell", "c_u_log2", "c_u_p",
             "c_u_ell", "c_v_dual_log2", "c_v_dual_p", "c_v_dual_ell", "c_u_dual_log2",
             "c_u_dual_p", "c_u_dual_ell"},
            {row}};
    return t;
}

Table table_density(double r_u, double r_v, uint32_t proxy_n, double x_step) {
    if (!(r_u > 0.0 && r_u < 1.0 && r_v > 0.0 && r_v < 1.0)) {
        throw std::invalid_argument("estimate: --rU and --rV must lie in (0, 1)");
    }
    if (!(x_step > 0.0 && x_step <= 0.1)) {
        throw std::invalid_argument("estimate: --x-step must lie in (0, 0.1]");
    }
    if (proxy_n < 1000) throw std::invalid_argument("estimate: --proxy-n must be >= 1000");
    const uint32_t n = proxy_n & ~1u;
    const uint32_t half = n / 2;
    const auto clamp_dim = [half](double rate) {
        const uint32_t d = static_cast<uint32_t>(std::llround(rate * half));
        return std::min(std::max<uint32_t>(d, 1), half - 1);
    };
    const uint32_t k_u = clamp_dim(r_u);
    const uint32_t k_v = clamp_dim(r_v);
    // Density of each structured shape among all codewords, per coordinate:
    // log2(a_shape(w) / a_random(w)) / n for even weights w = x*n.
    Table t{"codeword-density", {"w_over_n", "alpha_uu", "alpha_0v"}, {}};
    uint32_t last_w = 0;
    for (uint64_t i = 1; i * x_step <= 0.5 + x_step / 2; ++i) {
        const double x = std::min(static_cast<double>(i) * x_step, 0.5);
        uint32_t w = static_cast<uint32_t>(std::llround(x * n));
        w -= w % 2;
        if (w < 2 || w > half || w == last_w) continue;
        last_w = w;
        const codes::WeightEnumerator en = codes::expected_weight_enumerator(n, k_u, k_v, w);
        if (en.a_uu.is_zero() || en.a_0v.is_zero() || en.a_rand.is_zero()) continue;
        const long double lg_rand = en.a_rand.log2_value();
        t.rows.push_back(json{
            {"w_over_n", json_num(static_cast<long double>(w) / n)},
            {"alpha_uu", json_num((en.a_uu.log2_value() - lg_rand) / n)},
            {"alpha_0v", json_num((en.a_0v.log2_value() - lg_rand) / n)}});
    }
    return t;
}

// --- distcheck -------------------------------------------------------------------

int cmd_distcheck(uint32_t n, uint32_t ku, uint32_t kv, uint32_t w, uint64_t samples,
                  uint64_t seed, const std::string& out_path) {
    SurfParams p;
    p.n = n;
    p.k_u = ku;
    p.k_v = kv;
    p.w = w;
    p.lambda = 16;
    p.lambda0 = 48;
    p.validate();

    json report{{"n", n}, {"k_u", ku}, {"k_v", kv}, {"w", w},
                {"samples", samples}, {"seed", seed}};
    if (samples == 0) {
        report["note"] = "no samples requested; nothing to test";
        std::cout << "no samples requested; nothing to test\n";
        finish_json(report, out_path);
        return kOk;
    }

    Rng key_rng = make_rng(seed);
    const BitMatrix h_u = random_full_rank(p.r_u(), p.half(), key_rng);
    const BitMatrix h_v = random_full_rank(p.r_v(), p.half(), key_rng);
    const decoder::RejectionTable table = decoder::build_rejection_table(p);

    // One independent random stream per sample, so results do not depend on
    // the worker count (SURF_THREADS).
    std::vector<int64_t> first_layer_weight(samples, -1);
    std::vector<int64_t> paired_v1(samples, -1);
    std::vector<int64_t> paired_v2(samples, -1);
    parallel_for(samples, [&](uint64_t i) {
        Rng g = make_stream(seed, i);
        const auto draw_syndrome = [&p](Rng& r) {
            BitVector s(p.r());
            for (size_t b = 0; b < s.size(); ++b) {
                if (rng_bit(r)) s.set(b, true);
            }
            return s;
        };
        const BitVector s1 = draw_syndrome(g);
        try {
            paired_v1[i] = static_cast<int64_t>(paired_ones(
                decoder::uuv_decode_v1(h_u, h_v, s1, g)));
        } catch (const std::runtime_error&) {
            // decoder ran out of restart budget; counted below
        }
        const BitVector s2 = draw_syndrome(g);
        try {
            const BitVector e = decoder::uuv_decode_v2(h_u, h_v, s2, table, g);
            paired_v2[i] = static_cast<int64_t>(paired_ones(e));
            const BitVector lo = e.slice(0, p.half());
            const BitVector hi = e.slice(p.half(), p.n);
            first_layer_weight[i] = static_cast<int64_t>((lo ^ hi).weight());
        } catch (const std::runtime_error&) {
        }
    });

    uint64_t ok1 = 0;
    uint64_t ok2 = 0;
    uint64_t sum1 = 0;
    uint64_t sum2 = 0;
    std::vector<double> observed(w + 1, 0.0);
    for (uint64_t i = 0; i < samples; ++i) {
        if (paired_v1[i] >= 0) {
            ++ok1;
            sum1 += static_cast<uint64_t>(paired_v1[i]);
        }
        if (paired_v2[i] >= 0) {
            ++ok2;
            sum2 += static_cast<uint64_t>(paired_v2[i]);
            ++observed[static_cast<size_t>(first_layer_weight[i])];
        }
    }
    report["v1_completed"] = ok1;
    report["v2_completed"] = ok2;
    std::cout << "samples: " << samples << " (v1 completed " << ok1 << ", v2 completed " << ok2
              << ")\n";

    // First-layer weight of the rejection-sampled decoder against the law of
    // a uniform weight-w word.
    json chi_j;
    if (ok2 > 0) {
        const std::vector<long double> law = estimator::uniform_w1_law(n, w);
        std::vector<double> expected(w + 1, 0.0);
        for (uint32_t i = 0; i <= w; ++i) {
            expected[i] = static_cast<double>(law[i]) * static_cast<double>(ok2);
        }
        const ChiSquare chi = chi_square_test(observed, expected);
        if (chi.valid) {
            chi_j = json{{"statistic", json_num(chi.statistic, 4)},
                         {"dof", chi.dof},
                         {"p_value", json_num(chi.p_value, 6)},
                         {"pass", chi.p_value > 0.001}};
            std::cout << "v2 first-layer weight chi-square: stat " << rounded(chi.statistic, 2)
                      << ", dof " << chi.dof << ", p = " << rounded(chi.p_value, 4) << "  ["
                      << (chi.p_value > 0.001 ? "pass" : "FAIL") << "]\n";
        } else {
            chi_j = json{{"note", "too few samples for a chi-square"}};
            std::cout << "v2 first-layer weight chi-square: too few samples\n";
        }
    } else {
        chi_j = json{{"note", "no completed v2 samples"}};
    }
    report["w1_chi_square"] = chi_j;

    // Paired-position rate: the v1 decoder pins it to a constant below the
    // uniform mean; the rejection-sampled decoder must match the uniform one.
    json pair_j{{"alpha", 0.001}};
    const double z_crit = boost::math::quantile(boost::math::normal(), 1.0 - 0.001 / 2.0);
    pair_j["z_critical"] = json_num(z_crit, 4);
    const double half = static_cast<double>(p.half());
    const double uniform_rate =
        static_cast<double>(w) * (static_cast<double>(w) - 1.0) /
        (static_cast<double>(n) * (static_cast<double>(n) - 1.0));
    pair_j["uniform_rate"] = json_num(uniform_rate, 8);
    if (ok1 > 0 && ok2 > 0) {
        const double pairs1 = static_cast<double>(ok1) * half;
        const double pairs2 = static_cast<double>(ok2) * half;
        const double rate1 = static_cast<double>(sum1) / pairs1;
        const double rate2 = static_cast<double>(sum2) / pairs2;
        const double pool =
            (static_cast<double>(sum1) + static_cast<double>(sum2)) / (pairs1 + pairs2);
        const double se12 = std::sqrt(pool * (1.0 - pool) * (1.0 / pairs1 + 1.0 / pairs2));
        const double z12 = se12 > 0.0 ? (rate2 - rate1) / se12 : 0.0;
        const double se2 = std::sqrt(uniform_rate * (1.0 - uniform_rate) / pairs2);
        const double z2 = se2 > 0.0 ? (rate2 - uniform_rate) / se2 : 0.0;
        pair_j["rate_v1"] = json_num(rate1, 8);
        pair_j["rate_v2"] = json_num(rate2, 8);
        pair_j["z_v1_vs_v2"] = json_num(z12, 4);
        pair_j["v1_flagged"] = z12 > z_crit;
        pair_j["z_v2_vs_uniform"] = json_num(z2, 4);
        pair_j["v2_consistent"] = std::abs(z2) < z_crit;
        std::cout << "paired-position rate: v1 " << rounded(rate1, 6) << ", v2 "
                  << rounded(rate2, 6) << ", uniform " << rounded(uniform_rate, 6) << "\n"
                  << "  z(v1 vs v2) = " << rounded(z12, 2) << "  -> v1 "
                  << (z12 > z_crit ? "flagged" : "NOT flagged") << "\n"
                  << "  z(v2 vs uniform) = " << rounded(z2, 2) << "  -> v2 "
                  << (std::abs(z2) < z_crit ? "consistent" : "INCONSISTENT") << "\n";
    } else {
        pair_j["note"] = "a decoder completed no samples";
    }
    report["paired_positions"] = pair_j;

    finish_json(report, out_path);
    return kOk;
}

}  // namespace

// --- main -------------------------------------------------------------------------

int main(int argc, char** argv) {
    CLI::App app{"two-layer code signature toolkit"};
    app.require_subcommand(1);

    // params
    auto* c_params = app.add_subcommand("params", "derive a parameter set from n and lambda");
    uint32_t pa_n = 0;
    uint32_t pa_lambda = 0;
    std::string pa_out;
    c_params->add_option("--n", pa_n, "code length (even, >= 64)")->required();
    c_params->add_option("--lambda", pa_lambda, "security target in bits")->required();
    c_params->add_option("--out", pa_out, "also write the JSON to this file");

    // keygen
    auto* c_keygen = app.add_subcommand("keygen", "generate a key pair");
    uint32_t kg_n = 0;
    uint32_t kg_lambda = 0;
    std::string kg_params_file;
    std::string kg_sk;
    std::string kg_pk;
    uint64_t kg_seed = 0;
    auto* kg_n_opt = c_keygen->add_option("--n", kg_n, "code length");
    auto* kg_lambda_opt = c_keygen->add_option("--lambda", kg_lambda, "security target in bits");
    auto* kg_pf_opt = c_keygen->add_option("--params-file", kg_params_file,
                                           "JSON file with n and lambda (see 'params --out')");
    kg_pf_opt->excludes(kg_n_opt)->excludes(kg_lambda_opt);
    c_keygen->add_option("--out-sk", kg_sk, "secret key output path")->required();
    c_keygen->add_option("--out-pk", kg_pk, "public key output path")->required();
    auto* kg_seed_opt = c_keygen->add_option("--seed", kg_seed, "deterministic RNG seed");

    // sign
    auto* c_sign = app.add_subcommand("sign", "sign a message file");
    std::string sg_sk;
    std::string sg_msg;
    std::string sg_sig;
    uint64_t sg_seed = 0;
    c_sign->add_option("--sk", sg_sk, "secret key file")->required();
    c_sign->add_option("--msg-file", sg_msg, "message file")->required();
    c_sign->add_option("--out-sig", sg_sig, "signature output path")->required();
    auto* sg_seed_opt = c_sign->add_option("--seed", sg_seed, "deterministic RNG seed");

    // verify
    auto* c_verify = app.add_subcommand("verify", "verify a signature file");
    std::string vf_pk;
    std::string vf_msg;
    std::string vf_sig;
    c_verify->add_option("--pk", vf_pk, "public key file")->required();
    c_verify->add_option("--msg-file", vf_msg, "message file")->required();
    c_verify->add_option("--sig", vf_sig, "signature file")->required();

    // distinguish
    auto* c_dist = app.add_subcommand("distinguish",
                                      "classify a code as layered or random by its hull");
    std::string di_pk;
    std::string di_code;
    uint32_t di_ku = 0;
    uint32_t di_kv = 0;
    std::string di_out;
    auto* di_pk_opt = c_dist->add_option("--pk", di_pk, "public key file");
    auto* di_code_opt = c_dist->add_option("--code-file", di_code,
                                           "text code file: 'n k' then k generator rows of 0/1");
    di_pk_opt->excludes(di_code_opt);
    auto* di_ku_opt = c_dist->add_option("--kU", di_ku, "hypothesized top-layer dimension");
    auto* di_kv_opt = c_dist->add_option("--kV", di_kv, "hypothesized bottom-layer dimension");
    c_dist->add_option("--out", di_out, "also write the verdict JSON to this file");

    // estimate
    auto* c_est = app.add_subcommand("estimate", "emit analytic tables and figure curves");
    std::string es_table;
    c_est->add_option("--table", es_table, "one of: 1, 3, gv, capacity, epsilon, attack, density")
        ->required()
        ->check(CLI::IsMember({"1", "3", "gv", "capacity", "epsilon", "attack", "density"}));
    std::vector<double> es_won;
    c_est->add_option("--w-over-n", es_won, "relative weights for table 1");
    uint32_t es_proxy = 100000;
    c_est->add_option("--proxy-n", es_proxy, "proxy length for asymptotic evaluation");
    uint32_t es_n = 0;
    uint32_t es_k = 0;
    uint32_t es_lambda = 0;
    uint32_t es_ku = 0;
    uint32_t es_kv = 0;
    auto* es_n_opt = c_est->add_option("--n", es_n, "code length");
    auto* es_k_opt = c_est->add_option("--k", es_k, "code dimension");
    auto* es_lambda_opt = c_est->add_option("--lambda", es_lambda, "security target in bits");
    auto* es_ku_opt = c_est->add_option("--kU", es_ku, "top-layer dimension");
    auto* es_kv_opt = c_est->add_option("--kV", es_kv, "bottom-layer dimension");
    double es_rate_step = 0.01;
    c_est->add_option("--rate-step", es_rate_step, "rate grid step for --table gv");
    double es_p_step = 0.005;
    c_est->add_option("--p-step", es_p_step, "crossover grid step for --table capacity");
    double es_x_step = 0.005;
    c_est->add_option("--x-step", es_x_step, "relative-weight grid step for --table density");
    double es_ru = 0.6;
    double es_rv = 0.4;
    c_est->add_option("--rU", es_ru, "top-layer rate k_U/(n/2) for --table density");
    c_est->add_option("--rV", es_rv, "bottom-layer rate k_V/(n/2) for --table density");
    uint32_t es_pmax = 0;
    uint32_t es_ellmax = 0;
    auto* es_pmax_opt = c_est->add_option("--p-max", es_pmax, "grid cap for --table attack");
    auto* es_ellmax_opt = c_est->add_option("--ell-max", es_ellmax, "grid cap for --table attack");
    std::string es_format;
    c_est->add_option("--format", es_format, "csv or json (default: per table)")
        ->check(CLI::IsMember({"csv", "json"}));
    std::string es_out;
    c_est->add_option("--out", es_out, "write the table to this file");

    // distcheck
    auto* c_check = app.add_subcommand("distcheck",
                                       "decoder output-distribution diagnostics");
    uint32_t dc_n = 200;
    uint32_t dc_ku = 62;
    uint32_t dc_kv = 38;
    uint32_t dc_w = 38;
    uint64_t dc_samples = 2000;
    uint64_t dc_seed = 1;
    std::string dc_out;
    c_check->add_option("--n", dc_n, "code length");
    c_check->add_option("--kU", dc_ku, "top-layer dimension");
    c_check->add_option("--kV", dc_kv, "bottom-layer dimension");
    c_check->add_option("--w", dc_w, "signature weight");
    c_check->add_option("--samples", dc_samples, "number of decodes per decoder");
    c_check->add_option("--seed", dc_seed, "deterministic RNG seed");
    c_check->add_option("--out", dc_out, "also write the report JSON to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (app.got_subcommand(c_params)) {
            return cmd_params(pa_n, pa_lambda, pa_out);
        }
        if (app.got_subcommand(c_keygen)) {
            SurfParams p{};
            if (kg_pf_opt->count()) {
                p = load_params_file(kg_params_file);
            } else if (kg_n_opt->count() && kg_lambda_opt->count()) {
                p = select_params(kg_n, kg_lambda);
            } else {
                std::cerr << "error: give --params-file or both --n and --lambda\n";
                return kUsage;
            }
            const uint64_t seed = kg_seed_opt->count() ? kg_seed : entropy_seed();
            return cmd_keygen(p, seed, kg_sk, kg_pk);
        }
        if (app.got_subcommand(c_sign)) {
            const uint64_t seed = sg_seed_opt->count() ? sg_seed : entropy_seed();
            return cmd_sign(sg_sk, sg_msg, sg_sig, seed);
        }
        if (app.got_subcommand(c_verify)) {
            return cmd_verify(vf_pk, vf_msg, vf_sig);
        }
        if (app.got_subcommand(c_dist)) {
            if (!di_pk_opt->count() && !di_code_opt->count()) {
                std::cerr << "error: give --pk or --code-file\n";
                return kUsage;
            }
            std::optional<uint32_t> ku;
            std::optional<uint32_t> kv;
            if (di_ku_opt->count()) ku = di_ku;
            if (di_kv_opt->count()) kv = di_kv;
            return cmd_distinguish(di_pk, di_code, ku, kv, di_out);
        }
        if (app.got_subcommand(c_est)) {
            const auto opt_of = [](CLI::Option* o, uint32_t v) {
                return o->count() ? std::optional<uint32_t>(v) : std::nullopt;
            };
            const std::optional<uint32_t> n = opt_of(es_n_opt, es_n);
            const std::optional<uint32_t> k = opt_of(es_k_opt, es_k);
            const std::optional<uint32_t> lambda = opt_of(es_lambda_opt, es_lambda);
            const std::optional<uint32_t> ku = opt_of(es_ku_opt, es_ku);
            const std::optional<uint32_t> kv = opt_of(es_kv_opt, es_kv);
            Table t;
            std::string default_format = "csv";
            if (es_table == "1") {
                if (es_won.empty()) es_won = {0.11, 0.15, 0.19};
                t = table_isd(es_won, es_proxy);
            } else if (es_table == "3") {
                t = table_parameters(n, lambda);
            } else if (es_table == "gv") {
                t = table_distortion(n, k, es_rate_step);
                if (n) default_format = "json";
            } else if (es_table == "capacity") {
                t = table_capacity(es_p_step);
            } else if (es_table == "epsilon") {
                t = table_epsilon(n, lambda);
                default_format = "json";
            } else if (es_table == "attack") {
                t = table_attack(n, k, ku, kv, opt_of(es_pmax_opt, es_pmax),
                                 opt_of(es_ellmax_opt, es_ellmax));
                default_format = "json";
            } else {
                t = table_density(es_ru, es_rv, es_proxy, es_x_step);
            }
            emit_table(t, es_format.empty() ? default_format : es_format, es_out);
            return kOk;
        }
        if (app.got_subcommand(c_check)) {
            return cmd_distcheck(dc_n, dc_ku, dc_kv, dc_w, dc_samples, dc_seed, dc_out);
        }
        std::cerr << "error: no subcommand\n";
        return kUsage;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kIo;
    } catch (const InfeasibleAlignment& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "json error: " << e.what() << "\n";
        return kIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kUsage;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
