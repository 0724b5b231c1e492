#include "octoport/extractor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace octoport {

namespace {

std::size_t word_count(std::size_t nbits) { return (nbits + 63) / 64; }

void mask_top(BitVec& v) {
    const std::size_t used = v.nbits & 63;
    if (used != 0 && !v.words.empty()) v.words.back() &= (~std::uint64_t{0}) >> (64 - used);
}

}  // namespace

BitVec BitVec::zeros(std::size_t n) {
    BitVec v;
    v.nbits = n;
    v.words.assign(word_count(n), 0);
    return v;
}

BitVec BitVec::from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t nbits) {
    if (bytes.size() * 8 < nbits) throw std::invalid_argument("BitVec: byte buffer too short");
    BitVec v = zeros(nbits);
    for (std::size_t i = 0; i < bytes.size() && i / 8 < v.words.size(); ++i) {
        v.words[i / 8] |= static_cast<std::uint64_t>(bytes[i]) << (8 * (i % 8));
    }
    mask_top(v);
    return v;
}

BitVec BitVec::random(std::size_t n, Rng& rng) {
    BitVec v = zeros(n);
    for (auto& w : v.words) w = rng.u64();
    mask_top(v);
    return v;
}

std::vector<std::uint8_t> BitVec::to_bytes() const {
    std::vector<std::uint8_t> out((nbits + 7) / 8, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>((words[i / 8] >> (8 * (i % 8))) & 0xffu);
    }
    return out;
}

BitVec operator^(const BitVec& a, const BitVec& b) {
    if (a.nbits != b.nbits) throw std::invalid_argument("BitVec xor: length mismatch");
    BitVec out = a;
    for (std::size_t i = 0; i < out.words.size(); ++i) out.words[i] ^= b.words[i];
    return out;
}

std::string to_hex(const BitVec& v) {
    static const char* digits = "0123456789abcdef";
    const auto bytes = v.to_bytes();
    std::string s;
    s.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

BitVec from_hex(const std::string& hex, std::size_t nbits) {
    if (hex.size() * 4 < nbits) throw std::invalid_argument("from_hex: string too short");
    auto nibble = [](char c) -> std::uint64_t {
        if (c >= '0' && c <= '9') return static_cast<std::uint64_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint64_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<std::uint64_t>(c - 'A' + 10);
        throw std::invalid_argument("from_hex: bad digit");
    };
    BitVec v = BitVec::zeros(nbits);
    for (std::size_t i = 0; i < hex.size() && i * 4 < nbits + 4; ++i) {
        const std::size_t byte = i / 2;
        const std::uint64_t val = nibble(hex[i]) << (i % 2 ? 0 : 4);
        if (byte / 8 < v.words.size()) v.words[byte / 8] |= val << (8 * (byte % 8));
    }
    mask_top(v);
    return v;
}

std::int64_t required_output_length(std::int64_t m_samples, int bits_per_sample, double h_bits,
                                    double security_eps) {
    if (m_samples < 0 || bits_per_sample < 0)
        throw std::invalid_argument("required_output_length: negative sizes");
    if (!(security_eps > 0.0 && security_eps <= 1.0))
        throw std::invalid_argument("required_output_length: eps in (0,1]");
    const double k = std::floor(static_cast<double>(m_samples) * h_bits -
                                2.0 * std::log2(1.0 / security_eps));
    const std::int64_t cap = m_samples * static_cast<std::int64_t>(bits_per_sample);
    if (k <= 0.0) return 0;
    return std::min(cap, static_cast<std::int64_t>(k));
}

BitVec toeplitz_extract(const BitVec& raw, const BitVec& seed, std::size_t out_len) {
    const std::size_t in_len = raw.nbits;
    if (in_len == 0 || out_len == 0) return BitVec::zeros(out_len);
    if (seed.nbits != in_len + out_len - 1)
        throw std::invalid_argument("toeplitz_extract: seed must hold in + out - 1 bits");

    // y_i = xor_j raw_j seed[i - j + in_len - 1]: a carry-less convolution of
    // raw with the seed; output bits are the middle window of the product.
    // One spare word absorbs the top shift carry.
    const std::size_t prod_bits = in_len + seed.nbits + 64;
    BitVec prod = BitVec::zeros(prod_bits);
    const std::size_t nw = seed.words.size();
    for (std::size_t j = 0; j < in_len; ++j) {
        if (!raw.get(j)) continue;
        const std::size_t wshift = j >> 6;
        const unsigned bshift = static_cast<unsigned>(j & 63);
        if (bshift == 0) {
            for (std::size_t w = 0; w < nw; ++w) prod.words[w + wshift] ^= seed.words[w];
        } else {
            std::uint64_t carry = 0;
            for (std::size_t w = 0; w < nw; ++w) {
                const std::uint64_t cur = seed.words[w];
                prod.words[w + wshift] ^= (cur << bshift) | carry;
                carry = cur >> (64 - bshift);
            }
            if (carry) prod.words[nw + wshift] ^= carry;
        }
    }

    BitVec out = BitVec::zeros(out_len);
    for (std::size_t i = 0; i < out_len; ++i) out.set(i, prod.get(in_len - 1 + i));
    return out;
}

BitVec quantize_batch(const std::vector<std::array<double, 2>>& samples, const AdcGrid& g) {
    const int n = g.n_bits;
    if (n > 31) throw std::invalid_argument("quantize_batch: n_bits > 31 unsupported");
    const std::uint64_t maxcode = (std::uint64_t{1} << n) - 1;
    BitVec out = BitVec::zeros(samples.size() * 2 * static_cast<std::size_t>(n));
    std::size_t pos = 0;
    for (const auto& xy : samples) {
        for (int ch = 0; ch < 2; ++ch) {
            int code = adc_code(xy[ch], g, ch);
            std::uint64_t c = code < 0 ? 0
                              : static_cast<std::uint64_t>(code) > maxcode
                                  ? maxcode
                                  : static_cast<std::uint64_t>(code);
            for (int b = 0; b < n; ++b) {
                out.set(pos++, (c >> b) & 1u);
            }
        }
    }
    return out;
}

}  // namespace octoport
