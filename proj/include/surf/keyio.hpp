#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "surf/scheme.hpp"

namespace surf::keyio {

// All files start with the same 24-byte header:
//   bytes 0..3   magic "SURF"
//   byte  4      format version (1)
//   byte  5      hash algorithm tag (1 = SHAKE256)
//   bytes 6..7   lambda, little endian
//   bytes 8..23  n, k_u, k_v, w as u32 little endian
// The payload length identifies the object kind; decoders check it exactly.
constexpr size_t kHeaderBytes = 24;
constexpr uint8_t kFormatVersion = 1;
constexpr uint8_t kHashAlgShake256 = 1;

// Payload: the redundancy block r, (n-k) x k bits, row major, least
// significant bit of each byte first; total ceil(k*(n-k)/8) bytes.
std::vector<uint8_t> encode_public(const scheme::PublicKey& pk);
scheme::PublicKey decode_public(const std::vector<uint8_t>& bytes);

// Payload: h_u then h_v (each row major, padded to a whole byte), then the
// permutation images as u32 little endian.
std::vector<uint8_t> encode_secret(const scheme::SecretKey& sk);
scheme::SecretKey decode_secret(const std::vector<uint8_t>& bytes);

// Payload: the word e (ceil(n/8) bytes) then the salt (ceil(3*lambda/8)).
std::vector<uint8_t> encode_signature(const scheme::Signature& sig, const SurfParams& params);
scheme::Signature decode_signature(const std::vector<uint8_t>& bytes, SurfParams* params_out = nullptr);

size_t public_key_bytes(const SurfParams& params);
size_t secret_key_bytes(const SurfParams& params);
size_t signature_bytes(const SurfParams& params);

void write_file(const std::string& path, const std::vector<uint8_t>& bytes);
std::vector<uint8_t> read_file(const std::string& path);

} // namespace surf::keyio
