#include "surf/scheme.hpp"

#include <openssl/evp.h>

#include <stdexcept>

#include "surf/codes.hpp"
#include "surf/errors.hpp"

namespace surf::scheme {

namespace {

constexpr uint8_t kHashDomain = 0x53;
constexpr int kSaltRetries = 16;

size_t salt_bytes(const SurfParams& params) {
    return (static_cast<size_t>(params.lambda0) + 7) / 8;
}

} // namespace

SecretKey keygen(const SurfParams& params, Rng& rng) {
    params.validate();
    SecretKey sk;
    sk.params = params;
    sk.h_u = random_full_rank(params.r_u(), params.half(), rng);
    sk.h_v = random_full_rank(params.r_v(), params.half(), rng);
    const BitMatrix block = codes::uuv_block_parity(sk.h_u, sk.h_v);

    // The public parity is systematized on the first n-k positions, so the
    // permutation must map an information set of the dual there.
    constexpr int kPermutationRetries = 1000;
    std::vector<size_t> first(params.r());
    for (size_t j = 0; j < first.size(); ++j) first[j] = j;
    for (int attempt = 0; attempt < kPermutationRetries; ++attempt) {
        sk.pi = random_permutation(params.n, rng);
        const BitMatrix permuted = permute_columns(block, sk.pi);
        if (rank_of(permuted.select_columns(first)) == params.r()) return sk;
    }
    throw RestartBudgetExceeded("keygen: no systematizable permutation found");
}

BitMatrix permuted_block_parity(const SecretKey& sk) {
    return permute_columns(codes::uuv_block_parity(sk.h_u, sk.h_v), sk.pi);
}

PublicKey derive_public(const SecretKey& sk) {
    const BitMatrix permuted = permuted_block_parity(sk);
    const uint32_t r = sk.params.r();
    std::vector<size_t> first(r);
    for (size_t j = 0; j < r; ++j) first[j] = j;
    const BitMatrix t = inverse_of(permuted.select_columns(first));
    const BitMatrix systematic = mat_mul(t, permuted);

    std::vector<size_t> tail(sk.params.k());
    for (size_t j = 0; j < tail.size(); ++j) tail[j] = r + j;
    PublicKey pk;
    pk.params = sk.params;
    pk.r = systematic.select_columns(tail);
    return pk;
}

BitVector public_syndrome(const PublicKey& pk, const BitVector& e) {
    const uint32_t r = pk.params.r();
    if (e.size() != pk.params.n) {
        throw std::invalid_argument("public_syndrome: word length mismatch");
    }
    BitVector s = e.slice(0, r);
    s.xor_assign(mat_vec_mul_transposed(pk.r, e.slice(r, pk.params.n)));
    return s;
}

BitVector secret_syndrome_preimage(const SecretKey& sk, const BitVector& s) {
    const uint32_t r = sk.params.r();
    if (s.size() != r) {
        throw std::invalid_argument("secret_syndrome_preimage: syndrome length mismatch");
    }
    // T^-1 equals the first r columns of H', so T^-1 s = H' (s | 0).
    return mat_vec_mul_transposed(permuted_block_parity(sk),
                                  BitVector::concat(s, BitVector(sk.params.k())));
}

std::vector<uint8_t> shake256(const std::vector<uint8_t>& data, size_t out_bytes) {
    std::vector<uint8_t> out(out_bytes);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) throw std::runtime_error("shake256: EVP context allocation failed");
    bool ok = EVP_DigestInit_ex(ctx, EVP_shake256(), nullptr) == 1;
    ok = ok && EVP_DigestUpdate(ctx, data.data(), data.size()) == 1;
    ok = ok && EVP_DigestFinalXOF(ctx, out.data(), out.size()) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw std::runtime_error("shake256: digest computation failed");
    return out;
}

BitVector hash_to_syndrome(const std::vector<uint8_t>& message, const std::vector<uint8_t>& salt,
                           uint32_t out_bits) {
    std::vector<uint8_t> input;
    input.reserve(1 + salt.size() + message.size());
    input.push_back(kHashDomain);
    input.insert(input.end(), salt.begin(), salt.end());
    input.insert(input.end(), message.begin(), message.end());
    const std::vector<uint8_t> digest = shake256(input, (static_cast<size_t>(out_bits) + 7) / 8);
    BitVector s(out_bits);
    for (uint32_t b = 0; b < out_bits; ++b) {
        if ((digest[b / 8] >> (b % 8)) & 1) s.set(b, true);
    }
    return s;
}

Signature sign(const SecretKey& sk, const std::vector<uint8_t>& message, Rng& rng,
               decoder::DecodeStats* stats) {
    const decoder::RejectionTable table = decoder::build_rejection_table(sk.params);
    Signature sig;
    sig.salt.resize(salt_bytes(sk.params));
    for (int attempt = 0; attempt < kSaltRetries; ++attempt) {
        for (uint8_t& byte : sig.salt) byte = static_cast<uint8_t>(rng_below(rng, 256));
        const BitVector s = hash_to_syndrome(message, sig.salt, sk.params.r());
        const BitVector s_sec = secret_syndrome_preimage(sk, s);
        BitVector e_sec;
        try {
            e_sec = decoder::uuv_decode_v2(sk.h_u, sk.h_v, s_sec, table, rng, stats);
        } catch (const IterationBudgetExceeded&) {
            continue; // fresh salt, fresh syndrome
        }
        sig.e = apply(sk.pi, e_sec);
        return sig;
    }
    throw IterationBudgetExceeded("sign: decoder failed for every salt attempt");
}

bool verify(const PublicKey& pk, const std::vector<uint8_t>& message, const Signature& sig) {
    if (sig.e.size() != pk.params.n) return false;
    if (sig.e.weight() != pk.params.w) return false;
    if (sig.salt.size() != salt_bytes(pk.params)) return false;
    const BitVector s = hash_to_syndrome(message, sig.salt, pk.params.r());
    return public_syndrome(pk, sig.e) == s;
}

} // namespace surf::scheme
