#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellsim/summation.hpp"

namespace bellsim {

// Prefix-free integer codes for the message K >= 1, plus the entropy
// and expected-length quantities used to account for the communication
// cost. K - 1 failures before the first acceptance make K geometric,
// so Golomb codes (with unary as the m = 1 special case) are the
// natural fit.

/// Histogram of observed message values.
using KCounts = std::map<std::uint64_t, std::uint64_t>;

using Codeword = std::vector<bool>;

inline std::string to_string(const Codeword& bits) {
    std::string s;
    s.reserve(bits.size());
    for (bool b : bits) s.push_back(b ? '1' : '0');
    return s;
}

/// Unary code for k >= 1: k - 1 zeros then a terminating one.
inline Codeword unary_encode(std::uint64_t k) {
    if (k < 1) throw std::invalid_argument("unary_encode: k must be >= 1");
    Codeword bits(k, false);
    bits.back() = true;
    return bits;
}

/// Decodes exactly one unary codeword; the input must be a complete
/// codeword with nothing following it.
inline std::uint64_t unary_decode(const Codeword& bits) {
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) {
            if (i + 1 != bits.size()) {
                throw std::invalid_argument("unary_decode: trailing bits");
            }
            return static_cast<std::uint64_t>(i) + 1;
        }
    }
    throw std::invalid_argument("unary_decode: missing terminator");
}

inline std::uint64_t unary_code_length(std::uint64_t k) {
    if (k < 1) throw std::invalid_argument("unary_code_length: k must be >= 1");
    return k;
}

/// Optimal Golomb parameter for a geometric source with success
/// probability p: the smallest m with (1-p)^m + (1-p)^{m+1} <= 1.
inline std::uint64_t golomb_param(double p) {
    if (!(p > 0.0) || !(p <= 1.0)) {
        throw std::invalid_argument("golomb_param: p must be in (0, 1]");
    }
    const double q = 1.0 - p;
    std::uint64_t m = 1;
    double qm = q;
    while (qm + qm * q > 1.0) {
        ++m;
        qm *= q;
    }
    return m;
}

namespace detail {

// Bit width of the truncated binary remainder: b = ceil(log2 m).
inline unsigned remainder_bits(std::uint64_t m) {
    unsigned b = 0;
    while ((std::uint64_t{1} << b) < m) ++b;
    return b;
}

}  // namespace detail

/// Golomb code for k >= 1 with parameter m >= 1. n = k - 1 splits into
/// quotient q = n / m (unary: q zeros then a one) and remainder n % m
/// in truncated binary. m = 1 reproduces the unary code exactly.
inline Codeword golomb_encode(std::uint64_t k, std::uint64_t m) {
    if (k < 1) throw std::invalid_argument("golomb_encode: k must be >= 1");
    if (m < 1) throw std::invalid_argument("golomb_encode: m must be >= 1");
    const std::uint64_t n = k - 1;
    const std::uint64_t q = n / m;
    const std::uint64_t r = n % m;

    Codeword bits(q, false);
    bits.push_back(true);

    const unsigned b = detail::remainder_bits(m);
    if (b > 0) {
        const std::uint64_t cutoff = (std::uint64_t{1} << b) - m;
        std::uint64_t value = r;
        unsigned width = b;
        if (r < cutoff) {
            width = b - 1;
        } else {
            value = r + cutoff;
        }
        for (unsigned i = width; i-- > 0;) {
            bits.push_back(((value >> i) & 1u) != 0);
        }
    }
    return bits;
}

/// Decodes exactly one Golomb codeword; the input must be complete with
/// nothing following it.
inline std::uint64_t golomb_decode(const Codeword& bits, std::uint64_t m) {
    if (m < 1) throw std::invalid_argument("golomb_decode: m must be >= 1");
    std::size_t pos = 0;
    while (pos < bits.size() && !bits[pos]) ++pos;
    if (pos == bits.size()) {
        throw std::invalid_argument("golomb_decode: missing quotient terminator");
    }
    const std::uint64_t q = pos;
    ++pos;

    std::uint64_t r = 0;
    const unsigned b = detail::remainder_bits(m);
    if (b > 0) {
        const std::uint64_t cutoff = (std::uint64_t{1} << b) - m;
        if (bits.size() - pos < b - 1u) {
            throw std::invalid_argument("golomb_decode: truncated remainder");
        }
        std::uint64_t value = 0;
        for (unsigned i = 0; i + 1 < b; ++i) {
            value = (value << 1) | (bits[pos++] ? 1u : 0u);
        }
        if (value < cutoff) {
            r = value;
        } else {
            if (pos == bits.size()) {
                throw std::invalid_argument("golomb_decode: truncated remainder");
            }
            value = (value << 1) | (bits[pos++] ? 1u : 0u);
            r = value - cutoff;
        }
    }
    if (pos != bits.size()) {
        throw std::invalid_argument("golomb_decode: trailing bits");
    }
    return q * m + r + 1;
}

inline std::uint64_t golomb_code_length(std::uint64_t k, std::uint64_t m) {
    if (k < 1) throw std::invalid_argument("golomb_code_length: k must be >= 1");
    if (m < 1) throw std::invalid_argument("golomb_code_length: m must be >= 1");
    const std::uint64_t n = k - 1;
    const std::uint64_t q = n / m;
    const std::uint64_t r = n % m;
    const unsigned b = detail::remainder_bits(m);
    std::uint64_t len = q + 1;
    if (b > 0) {
        const std::uint64_t cutoff = (std::uint64_t{1} << b) - m;
        len += (r < cutoff) ? b - 1 : b;
    }
    return len;
}

/// Shannon entropy in bits of the geometric distribution
/// P(K = k) = (1-p)^{k-1} p over k >= 1:
/// H = -log2(p) - ((1-p)/p) log2(1-p).
inline double geometric_entropy_bits(double p) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::invalid_argument("geometric_entropy_bits: p must be in (0, 1]");
    }
    if (p == 1.0) return 0.0;
    const double q = 1.0 - p;
    return -std::log2(p) - (q / p) * std::log2(q);
}

/// Plug-in entropy of an observed histogram, in bits.
inline double empirical_entropy_bits(const KCounts& counts) {
    if (counts.empty()) {
        throw std::invalid_argument("empirical_entropy_bits: empty histogram");
    }
    std::uint64_t total = 0;
    for (const auto& [k, n] : counts) total += n;
    NeumaierSum h;
    for (const auto& [k, n] : counts) {
        if (n == 0) continue;
        const double f = static_cast<double>(n) / static_cast<double>(total);
        h.add(-f * std::log2(f));
    }
    return h.value();
}

enum class Codec { unary, golomb };

/// Expected codeword length in bits under the geometric law with
/// success probability p. The series is summed with compensation until
/// the remaining tail cannot move the result at double precision; this
/// keeps the exact equalities E = 2 at p = 1/2 (unary) and E = pi/2 at
/// p = 2/pi (unary) intact.
inline double expected_code_length_bits(double p, Codec codec) {
    if (!(p > 0.0) || !(p <= 1.0)) {
        throw std::invalid_argument(
            "expected_code_length_bits: p must be in (0, 1]");
    }
    const std::uint64_t m = (codec == Codec::golomb) ? golomb_param(p) : 1;
    const double q = 1.0 - p;
    NeumaierSum sum;
    double pk = p;  // P(K = k)
    double tail_weight = 1.0;
    for (std::uint64_t k = 1;; ++k) {
        const std::uint64_t len =
            (codec == Codec::golomb) ? golomb_code_length(k, m) : k;
        sum.add(static_cast<double>(len) * pk);
        tail_weight *= q;
        // Remaining contribution is below (1-p)^k (k + 1/p + bound slack).
        if (tail_weight * (static_cast<double>(k) + 1.0 / p + 8.0) < 1e-18) {
            break;
        }
        pk *= q;
    }
    return sum.value();
}

}  // namespace bellsim
