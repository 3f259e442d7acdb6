#pragma once

#include <cstdint>
#include <vector>

#include "surf/bitvec.hpp"
#include "surf/decoder.hpp"
#include "surf/params.hpp"
#include "surf/rng.hpp"

namespace surf::scheme {

// Secret key: the two layer parity blocks and the column permutation.  The
// systematizing row transform is never stored; its inverse is applied via
// the permuted block parity itself (see secret_syndrome_preimage).
struct SecretKey {
    SurfParams params;
    BitMatrix h_u; // (n/2 - k_u) x (n/2), full row rank
    BitMatrix h_v; // (n/2 - k_v) x (n/2), full row rank
    Permutation pi;
};

// Public key: the code's parity matrix in systematic form (I | r).
struct PublicKey {
    SurfParams params;
    BitMatrix r; // (n-k) x k
};

struct Signature {
    BitVector e;               // weight-w word of length n
    std::vector<uint8_t> salt; // ceil(3*lambda/8) bytes
};

// Draws the layer blocks and a permutation, redrawing the permutation until
// the first n-k columns of the permuted block parity are invertible (so the
// public parity can be put in systematic form).
SecretKey keygen(const SurfParams& params, Rng& rng);

// Systematic public parity derived from the secret key.
PublicKey derive_public(const SecretKey& sk);

// (I | r) e^T: first n-k coordinates of e plus r times the rest.
BitVector public_syndrome(const PublicKey& pk, const BitVector& e);

// The permuted block parity H' = block parity with columns permuted by pi.
// The public parity is T H' with T the inverse of H's first n-k columns.
BitMatrix permuted_block_parity(const SecretKey& sk);

// Maps a public syndrome s to the block-layout syndrome the layered decoder
// expects: T^-1 s = H' (s | 0), using that T^-1 is exactly the first n-k
// columns of H'.
BitVector secret_syndrome_preimage(const SecretKey& sk, const BitVector& s);

// Raw SHAKE256 with arbitrary output length.
std::vector<uint8_t> shake256(const std::vector<uint8_t>& data, size_t out_bytes);

// Message digest used by sign/verify: SHAKE256(0x53 || salt || message),
// first out_bits bits, least significant bit of each byte first.
BitVector hash_to_syndrome(const std::vector<uint8_t>& message, const std::vector<uint8_t>& salt,
                           uint32_t out_bits);

// Signs by hashing under a fresh salt and decoding the syndrome with the
// rejection-sampled layered decoder; retries with a new salt (at most 16
// times) if the decoder exhausts its budget.
Signature sign(const SecretKey& sk, const std::vector<uint8_t>& message, Rng& rng,
               decoder::DecodeStats* stats = nullptr);

// Accepts iff the word has weight exactly w and its public syndrome equals
// the message digest under the signature's salt.
bool verify(const PublicKey& pk, const std::vector<uint8_t>& message, const Signature& sig);

} // namespace surf::scheme
