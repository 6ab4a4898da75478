#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qcw {

// Bit string, one 0/1 value per element.
using Bits = std::vector<uint8_t>;

// Raw byte buffer (transcript payloads, serialized objects).
using Bytes = std::vector<uint8_t>;

Bits xor_bits(const Bits& a, const Bits& b);  // equal lengths required

uint64_t bits_to_uint(const Bits& b);         // b[0] is the low bit, |b| <= 64
Bits uint_to_bits(uint64_t v, size_t n);

// Bit packing uses LSB-first order within each byte.
Bytes pack_bits(const Bits& b);
Bits unpack_bits(const Bytes& bytes, size_t n_bits);

std::string to_hex(const Bytes& data);
Bytes from_hex(const std::string& hex);

// Little-endian u64 framing for serialized structures.
void put_u64(Bytes& out, uint64_t v);
uint64_t get_u64(const Bytes& in, size_t& pos);  // FormatError when truncated

void put_u64_vec(Bytes& out, const std::vector<uint64_t>& v);
std::vector<uint64_t> get_u64_vec(const Bytes& in, size_t& pos);

}  // namespace qcw
