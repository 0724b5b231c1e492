#pragma once

// Toeplitz randomness extractor over GF(2) and the leftover-hash output
// sizing. Bit order is little-endian within bytes; quantized samples pack
// channel 1 first.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "octoport/entropy.hpp"

namespace octoport {

/// Packed bit vector, LSB-first within each 64-bit word.
struct BitVec {
    std::vector<std::uint64_t> words;
    std::size_t nbits = 0;

    static BitVec zeros(std::size_t n);
    static BitVec from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t nbits);
    static BitVec random(std::size_t n, Rng& rng);
    std::vector<std::uint8_t> to_bytes() const;

    bool get(std::size_t i) const { return (words[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words[i >> 6] |= mask;
        else
            words[i >> 6] &= ~mask;
    }
};

BitVec operator^(const BitVec& a, const BitVec& b);

std::string to_hex(const BitVec& v);
BitVec from_hex(const std::string& hex, std::size_t nbits);

/// Leftover-hash output length k = floor(m h - 2 log2(1/eps)), clamped to
/// [0, m * bits_per_sample].
std::int64_t required_output_length(std::int64_t m_samples, int bits_per_sample, double h_bits,
                                    double security_eps);

/// y = T x over GF(2) with T the (out_len x raw.nbits) Toeplitz matrix built
/// from `seed` (first column top-down, then first row left to right):
/// T[i][j] = seed[i - j + raw.nbits - 1]. Requires
/// seed.nbits == raw.nbits + out_len - 1 (std::invalid_argument otherwise).
BitVec toeplitz_extract(const BitVec& raw, const BitVec& seed, std::size_t out_len);

/// Quantizes a sample batch on the ADC grid and packs the codes LSB-first,
/// channel 1 then channel 2, n_bits each. Out-of-range samples clamp to the
/// edge codes.
BitVec quantize_batch(const std::vector<std::array<double, 2>>& samples, const AdcGrid& g);

}  // namespace octoport
