#pragma once

/**
 * @file arith.hpp
 * @brief Exact 64-bit modular arithmetic, deterministic primality, prime
 *        sieves, and the order-ell power-residue character classifier.
 *
 * Everything here works with moduli below 2^62 so that every intermediate
 * product fits in an unsigned 128-bit integer. The character of a cyclic
 * field of odd prime degree ell and prime conductor f (f = 1 mod ell) is
 * represented canonically: chi(n) is identified with the residue
 * s = n^((f-1)/ell) mod f, an ell-th root of unity mod f. All criteria
 * used downstream (splitness, inverse pairs) depend only on this residue,
 * so no discrete logarithm is ever needed.
 */

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nefield {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline constexpr u64 kModulusCap = u64{1} << 62;

/// (a*b) mod m with a full-width intermediate product. Requires m < 2^62.
inline u64 mul_mod(u64 a, u64 b, u64 m) {
    assert(m > 0 && m < kModulusCap && a < m && b < m);
    return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

/// base^exp mod m by square-and-multiply. Requires m < 2^62, m > 0.
inline u64 pow_mod(u64 base, u64 exp, u64 m) {
    assert(m > 0 && m < kModulusCap);
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

inline u64 isqrt(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

namespace detail {

inline bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
    a %= n;
    if (a == 0) return true;
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace detail

/// Exact primality for n < 2^62. Deterministic Miller-Rabin over the first
/// twelve prime bases, a witness set known to be exact below 3.18e23.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (!detail::miller_rabin_witness(n, a, d, s)) return false;
    }
    return true;
}

/// Primes up to and including `limit` by a plain sieve of Eratosthenes.
inline std::vector<u32> small_primes(u32 limit) {
    std::vector<u32> out;
    if (limit < 2) return out;
    std::vector<bool> comp(static_cast<std::size_t>(limit) + 1, false);
    for (u32 p = 2; static_cast<u64>(p) * p <= limit; ++p) {
        if (comp[p]) continue;
        for (u64 q = static_cast<u64>(p) * p; q <= limit; q += p) comp[static_cast<std::size_t>(q)] = true;
    }
    for (u32 p = 2; p <= limit; ++p)
        if (!comp[p]) out.push_back(p);
    return out;
}

inline constexpr u64 kSegmentCap = 1'000'000'000;

/// Exactly the primes in [lo, hi], ascending. Segmented sieve seeded with
/// the primes up to sqrt(hi). The segment may span at most 1e9 integers.
inline std::vector<u64> primes_in_segment(u64 lo, u64 hi) {
    if (lo < 2 || lo > hi || hi >= kModulusCap)
        throw std::invalid_argument("primes_in_segment: need 2 <= lo <= hi < 2^62");
    if (hi - lo > kSegmentCap)
        throw std::invalid_argument("primes_in_segment: segment too large (span > 1e9)");
    const u64 root = isqrt(hi);
    const std::vector<u32> base = small_primes(static_cast<u32>(root));
    const std::size_t span = static_cast<std::size_t>(hi - lo + 1);
    std::vector<bool> comp(span, false);
    for (u32 p : base) {
        u64 start = std::max<u64>(static_cast<u64>(p) * p, ((lo + p - 1) / p) * p);
        for (u64 q = start; q <= hi; q += p) comp[static_cast<std::size_t>(q - lo)] = true;
    }
    std::vector<u64> out;
    for (std::size_t i = 0; i < span; ++i) {
        const u64 n = lo + i;
        if (n >= 2 && !comp[i]) out.push_back(n);
    }
    return out;
}

inline bool is_odd_prime_degree(u64 ell) { return ell >= 3 && ell <= 97 && ell % 2 == 1 && is_prime(ell); }

/// Ascending primes f = 1 (mod ell) in [lo, hi] -- the conductors of the
/// cyclic fields of degree ell in that window. Sieves in sub-chunks so the
/// intermediate prime list never holds a full 1e9-wide segment.
inline std::vector<u64> conductor_stream(u64 ell, u64 lo, u64 hi) {
    if (!is_odd_prime_degree(ell)) throw std::invalid_argument("conductor_stream: ell must be an odd prime in [3,97]");
    if (lo < 2 || lo > hi || hi >= kModulusCap)
        throw std::invalid_argument("conductor_stream: need 2 <= lo <= hi < 2^62");
    if (hi - lo > kSegmentCap) throw std::invalid_argument("conductor_stream: segment too large (span > 1e9)");
    constexpr u64 chunk = 16'000'000;
    std::vector<u64> out;
    u64 a = lo;
    while (true) {
        const u64 b = std::min(hi, a + chunk - 1);
        for (u64 p : primes_in_segment(a, b)) {
            if (p % ell == 1) out.push_back(p);
        }
        if (b == hi) break;
        a = b + 1;
    }
    return out;
}

/// Walks the primes in ascending order: a fixed table below 1e6, then odd
/// candidates tested with is_prime.
class PrimeIterator {
public:
    PrimeIterator() = default;

    u64 next() {
        const std::vector<u32>& table = prime_table();
        if (index_ < table.size()) return table[index_++];
        if (candidate_ == 0) candidate_ = table.back();
        do {
            candidate_ += 2;
        } while (!is_prime(candidate_));
        return candidate_;
    }

private:
    static const std::vector<u32>& prime_table() {
        static const std::vector<u32> table = small_primes(1'000'000);
        return table;
    }
    std::size_t index_ = 0;
    u64 candidate_ = 0;
};

/// A cyclic field class: odd prime degree ell in [3,97] and prime conductor
/// f = 1 (mod ell), f < 2^62. The discriminant f^(ell-1) is implied and
/// never materialized here.
struct FieldClass {
    u64 ell = 0;
    u64 f = 0;

    FieldClass(u64 ell_, u64 f_) : ell(ell_), f(f_) {
        if (!is_odd_prime_degree(ell)) throw std::invalid_argument("FieldClass: ell must be an odd prime in [3,97]");
        if (f >= kModulusCap) throw std::invalid_argument("FieldClass: conductor must be below 2^62");
        if (f == ell) throw std::invalid_argument("FieldClass: conductor equal to the degree is out of domain");
        if (f % ell != 1) throw std::invalid_argument("FieldClass: conductor must be 1 mod ell");
        if (!is_prime(f)) throw std::invalid_argument("FieldClass: conductor must be prime");
    }
};

/// Value of the canonical order-ell character: Zero when f divides the
/// argument, otherwise the residue s = n^((f-1)/ell) mod f with s^ell = 1.
/// The split class is s == 1.
struct CharValue {
    u64 residue = 0;
    bool zero = false;

    bool is_zero() const { return zero; }
    bool is_split() const { return !zero && residue == 1; }
    bool is_inert() const { return !zero && residue != 1; }
};

/// Precomputed engine for the order-ell power-residue character mod f.
/// Immutable after construction; safe to share across threads.
class PowerResidueClassifier {
public:
    explicit PowerResidueClassifier(FieldClass field) : field_(field), exponent_((field.f - 1) / field.ell) {}

    const FieldClass& field() const { return field_; }
    u64 ell() const { return field_.ell; }
    u64 conductor() const { return field_.f; }
    u64 exponent() const { return exponent_; }

    CharValue classify(u64 n) const {
        const u64 m = n % field_.f;
        if (m == 0) return CharValue{0, true};
        return CharValue{pow_mod(m, exponent_, field_.f), false};
    }

    /// True iff chi(n) = 1. Throws on the zero class (f | n).
    bool is_split(u64 n) const {
        const CharValue v = classify(n);
        if (v.zero) throw std::domain_error("is_split: argument divisible by the conductor");
        return v.residue == 1;
    }

    /// True iff chi(r) = chi(q2)^{-1}, i.e. r*q2 is an ell-th power residue.
    bool inverse_pair(u64 r, u64 q2) const {
        const CharValue cr = classify(r);
        const CharValue cq = classify(q2);
        if (cr.zero || cq.zero) throw std::domain_error("inverse_pair: argument divisible by the conductor");
        return mul_mod(cr.residue, cq.residue, field_.f) == 1;
    }

private:
    FieldClass field_;
    u64 exponent_;
};

inline PowerResidueClassifier make_classifier(FieldClass field) { return PowerResidueClassifier(field); }
inline PowerResidueClassifier make_classifier(u64 ell, u64 f) { return PowerResidueClassifier(FieldClass(ell, f)); }

} // namespace nefield
