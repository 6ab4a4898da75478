#include "qcw/bits.hpp"

#include "qcw/errors.hpp"

namespace qcw {

Bits xor_bits(const Bits& a, const Bits& b) {
    if (a.size() != b.size())
        throw ParameterError("xor_bits: length mismatch");
    Bits out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

uint64_t bits_to_uint(const Bits& b) {
    if (b.size() > 64)
        throw ParameterError("bits_to_uint: more than 64 bits");
    uint64_t v = 0;
    for (size_t i = 0; i < b.size(); ++i)
        v |= static_cast<uint64_t>(b[i] & 1) << i;
    return v;
}

Bits uint_to_bits(uint64_t v, size_t n) {
    if (n > 64)
        throw ParameterError("uint_to_bits: more than 64 bits");
    Bits out(n);
    for (size_t i = 0; i < n; ++i) out[i] = static_cast<uint8_t>((v >> i) & 1);
    return out;
}

Bytes pack_bits(const Bits& b) {
    Bytes out((b.size() + 7) / 8, 0);
    for (size_t i = 0; i < b.size(); ++i)
        if (b[i] & 1) out[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
    return out;
}

Bits unpack_bits(const Bytes& bytes, size_t n_bits) {
    if (n_bits > bytes.size() * 8)
        throw ParameterError("unpack_bits: buffer too short");
    Bits out(n_bits);
    for (size_t i = 0; i < n_bits; ++i)
        out[i] = (bytes[i / 8] >> (i % 8)) & 1;
    return out;
}

static const char* kHexDigits = "0123456789abcdef";

std::string to_hex(const Bytes& data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t byte : data) {
        out.push_back(kHexDigits[byte >> 4]);
        out.push_back(kHexDigits[byte & 0xf]);
    }
    return out;
}

static int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Bytes from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0)
        throw FormatError("from_hex: odd length");
    Bytes out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw FormatError("from_hex: invalid digit");
        out[i] = static_cast<uint8_t>((hi << 4) | lo);
    }
    return out;
}

void put_u64(Bytes& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t get_u64(const Bytes& in, size_t& pos) {
    if (pos + 8 > in.size())
        throw FormatError("get_u64: truncated input");
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(in[pos + i]) << (8 * i);
    pos += 8;
    return v;
}

void put_u64_vec(Bytes& out, const std::vector<uint64_t>& v) {
    put_u64(out, v.size());
    for (uint64_t x : v) put_u64(out, x);
}

std::vector<uint64_t> get_u64_vec(const Bytes& in, size_t& pos) {
    uint64_t n = get_u64(in, pos);
    if (n > (in.size() - pos) / 8)
        throw FormatError("get_u64_vec: length prefix exceeds input");
    std::vector<uint64_t> v(n);
    for (uint64_t i = 0; i < n; ++i) v[i] = get_u64(in, pos);
    return v;
}

}  // namespace qcw
