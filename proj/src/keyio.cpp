#include "surf/keyio.hpp"

#include <fstream>

#include "surf/errors.hpp"

namespace surf::keyio {

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 24));
}

uint32_t get_u32(const std::vector<uint8_t>& in, size_t at) {
    return static_cast<uint32_t>(in[at]) | (static_cast<uint32_t>(in[at + 1]) << 8) |
           (static_cast<uint32_t>(in[at + 2]) << 16) | (static_cast<uint32_t>(in[at + 3]) << 24);
}

std::vector<uint8_t> encode_header(const SurfParams& params) {
    std::vector<uint8_t> out;
    out.reserve(kHeaderBytes);
    out.push_back('S');
    out.push_back('U');
    out.push_back('R');
    out.push_back('F');
    out.push_back(kFormatVersion);
    out.push_back(kHashAlgShake256);
    out.push_back(static_cast<uint8_t>(params.lambda));
    out.push_back(static_cast<uint8_t>(params.lambda >> 8));
    put_u32(out, params.n);
    put_u32(out, params.k_u);
    put_u32(out, params.k_v);
    put_u32(out, params.w);
    return out;
}

SurfParams decode_header(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < kHeaderBytes) throw FormatError("file shorter than the header");
    if (bytes[0] != 'S' || bytes[1] != 'U' || bytes[2] != 'R' || bytes[3] != 'F') {
        throw FormatError("bad magic");
    }
    if (bytes[4] != kFormatVersion) throw FormatError("unsupported format version");
    if (bytes[5] != kHashAlgShake256) throw FormatError("unsupported hash algorithm tag");
    SurfParams params;
    params.lambda = static_cast<uint32_t>(bytes[6]) | (static_cast<uint32_t>(bytes[7]) << 8);
    params.lambda0 = 3 * params.lambda;
    params.n = get_u32(bytes, 8);
    params.k_u = get_u32(bytes, 12);
    params.k_v = get_u32(bytes, 16);
    params.w = get_u32(bytes, 20);
    try {
        params.validate();
    } catch (const std::invalid_argument& err) {
        throw FormatError(std::string("invalid parameters: ") + err.what());
    }
    return params;
}

// Row-major bit packing, least significant bit of each byte first, padded to
// whole bytes at the end of the whole block.
void pack_bits(std::vector<uint8_t>& out, const BitMatrix& m) {
    const size_t bits = m.rows() * m.cols();
    const size_t start = out.size();
    out.resize(start + (bits + 7) / 8, 0);
    size_t b = 0;
    for (size_t r = 0; r < m.rows(); ++r) {
        for (size_t c = 0; c < m.cols(); ++c, ++b) {
            if (m.get(r, c)) out[start + b / 8] |= static_cast<uint8_t>(1u << (b % 8));
        }
    }
}

BitMatrix unpack_bits(const std::vector<uint8_t>& in, size_t& at, size_t rows, size_t cols) {
    const size_t bits = rows * cols;
    const size_t bytes = (bits + 7) / 8;
    if (at + bytes > in.size()) throw FormatError("truncated bit block");
    BitMatrix m(rows, cols);
    size_t b = 0;
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < cols; ++c, ++b) {
            if ((in[at + b / 8] >> (b % 8)) & 1) m.set(r, c, true);
        }
    }
    // Padding bits must be zero so every object has one canonical encoding.
    for (size_t p = bits; p < bytes * 8; ++p) {
        if ((in[at + p / 8] >> (p % 8)) & 1) throw FormatError("nonzero padding bits");
    }
    at += bytes;
    return m;
}

void pack_bitvector(std::vector<uint8_t>& out, const BitVector& v) {
    const size_t start = out.size();
    out.resize(start + (v.size() + 7) / 8, 0);
    for (size_t b = 0; b < v.size(); ++b) {
        if (v.get(b)) out[start + b / 8] |= static_cast<uint8_t>(1u << (b % 8));
    }
}

BitVector unpack_bitvector(const std::vector<uint8_t>& in, size_t& at, size_t bits) {
    const size_t bytes = (bits + 7) / 8;
    if (at + bytes > in.size()) throw FormatError("truncated bit block");
    BitVector v(bits);
    for (size_t b = 0; b < bits; ++b) {
        if ((in[at + b / 8] >> (b % 8)) & 1) v.set(b, true);
    }
    for (size_t p = bits; p < bytes * 8; ++p) {
        if ((in[at + p / 8] >> (p % 8)) & 1) throw FormatError("nonzero padding bits");
    }
    at += bytes;
    return v;
}

size_t block_bytes(size_t rows, size_t cols) { return (rows * cols + 7) / 8; }

} // namespace

size_t public_key_bytes(const SurfParams& params) {
    return kHeaderBytes + block_bytes(params.r(), params.k());
}

size_t secret_key_bytes(const SurfParams& params) {
    return kHeaderBytes + block_bytes(params.r_u(), params.half()) +
           block_bytes(params.r_v(), params.half()) + 4 * static_cast<size_t>(params.n);
}

size_t signature_bytes(const SurfParams& params) {
    return kHeaderBytes + (static_cast<size_t>(params.n) + 7) / 8 +
           (static_cast<size_t>(params.lambda0) + 7) / 8;
}

std::vector<uint8_t> encode_public(const scheme::PublicKey& pk) {
    std::vector<uint8_t> out = encode_header(pk.params);
    pack_bits(out, pk.r);
    return out;
}

scheme::PublicKey decode_public(const std::vector<uint8_t>& bytes) {
    scheme::PublicKey pk;
    pk.params = decode_header(bytes);
    if (bytes.size() != public_key_bytes(pk.params)) {
        throw FormatError("payload length does not match a public key");
    }
    size_t at = kHeaderBytes;
    pk.r = unpack_bits(bytes, at, pk.params.r(), pk.params.k());
    return pk;
}

std::vector<uint8_t> encode_secret(const scheme::SecretKey& sk) {
    std::vector<uint8_t> out = encode_header(sk.params);
    pack_bits(out, sk.h_u);
    pack_bits(out, sk.h_v);
    for (size_t i = 0; i < sk.pi.size(); ++i) put_u32(out, static_cast<uint32_t>(sk.pi.images[i]));
    return out;
}

scheme::SecretKey decode_secret(const std::vector<uint8_t>& bytes) {
    scheme::SecretKey sk;
    sk.params = decode_header(bytes);
    if (bytes.size() != secret_key_bytes(sk.params)) {
        throw FormatError("payload length does not match a secret key");
    }
    size_t at = kHeaderBytes;
    sk.h_u = unpack_bits(bytes, at, sk.params.r_u(), sk.params.half());
    sk.h_v = unpack_bits(bytes, at, sk.params.r_v(), sk.params.half());
    if (rank_of(sk.h_u) != sk.params.r_u() || rank_of(sk.h_v) != sk.params.r_v()) {
        throw FormatError("rank-deficient layer block");
    }
    sk.pi.images.resize(sk.params.n);
    std::vector<char> seen(sk.params.n, 0);
    for (uint32_t i = 0; i < sk.params.n; ++i) {
        const uint32_t image = get_u32(bytes, at);
        at += 4;
        if (image >= sk.params.n || seen[image]) throw FormatError("invalid permutation");
        seen[image] = 1;
        sk.pi.images[i] = image;
    }
    return sk;
}

std::vector<uint8_t> encode_signature(const scheme::Signature& sig, const SurfParams& params) {
    if (sig.e.size() != params.n) throw std::invalid_argument("encode_signature: length mismatch");
    if (sig.salt.size() != (static_cast<size_t>(params.lambda0) + 7) / 8) {
        throw std::invalid_argument("encode_signature: salt length mismatch");
    }
    std::vector<uint8_t> out = encode_header(params);
    pack_bitvector(out, sig.e);
    out.insert(out.end(), sig.salt.begin(), sig.salt.end());
    return out;
}

scheme::Signature decode_signature(const std::vector<uint8_t>& bytes, SurfParams* params_out) {
    const SurfParams params = decode_header(bytes);
    if (bytes.size() != signature_bytes(params)) {
        throw FormatError("payload length does not match a signature");
    }
    size_t at = kHeaderBytes;
    scheme::Signature sig;
    sig.e = unpack_bitvector(bytes, at, params.n);
    sig.salt.assign(bytes.begin() + static_cast<std::ptrdiff_t>(at), bytes.end());
    if (params_out != nullptr) *params_out = params;
    return sig;
}

void write_file(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                                std::istreambuf_iterator<char>());
}

} // namespace surf::keyio
