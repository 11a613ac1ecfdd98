#pragma once

/**
 * @file factor.hpp
 * @brief Trial-division factorization with exact primality on cofactors.
 *
 * Factorizations are either complete or carry an explicit composite
 * cofactor whose prime factors all exceed the trial limit. Callers that
 * need certificate-grade conclusions must check completeness; nothing in
 * this module guesses.
 */

#include <optional>

#include <nefield/arith.hpp>

namespace nefield {

struct PrimePower {
    u64 p = 0;
    u32 e = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
    std::vector<PrimePower> factors; // ascending by prime
    u64 cofactor = 1;                // > 1 when trial division gave up; composite, factors > limit

    bool complete() const { return cofactor == 1; }
};

namespace detail {

inline const std::vector<u32>& factor_prime_table() {
    static const std::vector<u32> table = small_primes(10'000'000);
    return table;
}

} // namespace detail

/// Factor n > 0 by trial division with primes up to `factor_limit`, then an
/// exact primality test on what remains. A surviving composite cofactor is
/// reported as such, never split heuristically.
inline Factorization trial_factor(u64 n, u64 factor_limit) {
    if (n == 0) throw std::invalid_argument("trial_factor: n must be nonzero");
    if (factor_limit < 2) throw std::invalid_argument("trial_factor: factor_limit must be >= 2");
    Factorization out;
    auto push = [&out](u64 p, u32 e) { out.factors.push_back(PrimePower{p, e}); };

    u64 rem = n;
    const std::vector<u32>& table = detail::factor_prime_table();
    for (u32 p : table) {
        if (p > factor_limit || static_cast<u64>(p) * p > rem) break;
        if (rem % p == 0) {
            u32 e = 0;
            while (rem % p == 0) {
                rem /= p;
                ++e;
            }
            push(p, e);
        }
    }
    // Candidates past the cached table, if the limit allows and the
    // remainder still needs splitting.
    u64 d = table.empty() ? 3 : static_cast<u64>(table.back()) + 2;
    while (d <= factor_limit && d <= rem / d) {
        if (rem % d == 0 && is_prime(d)) {
            u32 e = 0;
            while (rem % d == 0) {
                rem /= d;
                ++e;
            }
            push(d, e);
        }
        d += 2;
    }
    if (rem > 1) {
        const u64 root = isqrt(rem);
        if (root <= factor_limit || is_prime(rem)) {
            // All prime candidates up to sqrt(rem) were tried, or the
            // remainder is certified prime outright.
            push(rem, 1);
        } else {
            out.cofactor = rem;
        }
    }
    return out;
}

/// Recompute the product of a factor list; nullopt on 64-bit overflow.
inline std::optional<u64> factorization_value(const std::vector<PrimePower>& factors) {
    u128 acc = 1;
    for (const PrimePower& pp : factors) {
        for (u32 i = 0; i < pp.e; ++i) {
            acc *= pp.p;
            if (acc > ~u64{0}) return std::nullopt;
        }
    }
    return static_cast<u64>(acc);
}

} // namespace nefield
