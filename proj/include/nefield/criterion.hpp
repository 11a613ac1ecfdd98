#pragma once

/**
 * @file criterion.hpp
 * @brief Non-norm-Euclideanity witness search over conductor ranges.
 *
 * For a field class (ell, f) let q1 < q2 be the two smallest inert primes.
 * A witness is a prime r with
 *
 *     gcd(r, q1 q2) = 1,
 *     chi(r) = chi(q2)^{-1},
 *     r q2 k != f (mod q1^2)  for every k = 1..q1-1,
 *     (q1 - 1)(q2 r - 1) <= f.
 *
 * Such a tuple (q1, q2, r) proves the field is not norm-Euclidean. Fields
 * where the search exhausts instead are survivors: candidates that this
 * criterion alone cannot rule out. The r-search walks prime values only;
 * composite r admissible in principle is deliberately not searched.
 */

#include <chrono>
#include <functional>
#include <variant>

#include <nefield/arith.hpp>

namespace nefield::criterion {

struct Witness {
    u64 ell = 0;
    u64 f = 0;
    u64 q1 = 0;
    u64 q2 = 0;
    u64 r = 0;

    friend bool operator==(const Witness&, const Witness&) = default;
};

enum class SurvivorReason {
    size_bound_exceeded, // every admissible r already violates (q1-1)(q2 r - 1) <= f
    search_cap_exceeded, // r exceeded the configured cap before any decision
};

struct SurvivorRecord {
    u64 ell = 0;
    u64 f = 0;
    SurvivorReason reason = SurvivorReason::size_bound_exceeded;
    u64 q1 = 0; // inert pair, always computed before the r-search
    u64 q2 = 0;
};

using SearchOutcome = std::variant<Witness, SurvivorRecord>;

inline constexpr u64 kDefaultRCap = 1'000'000;
inline constexpr u64 kInertScanCap = 1'000'000; // primes examined, not values

/// The two smallest rational primes inert in the field (chi != 0, 1),
/// skipping p = f. Throws if 1e6 primes pass without finding two; that
/// signals pathological input, not a reachable state for valid fields.
inline std::pair<u64, u64> find_inert_pair(const PowerResidueClassifier& cls) {
    PrimeIterator it;
    u64 first = 0;
    for (u64 scanned = 0; scanned < kInertScanCap; ++scanned) {
        const u64 p = it.next();
        if (p == cls.conductor()) continue;
        if (cls.classify(p).is_inert()) {
            if (first == 0) {
                first = p;
            } else {
                return {first, p};
            }
        }
    }
    throw std::runtime_error("find_inert_pair: no inert pair within the scan cap");
}

namespace detail {

/// r q2 k != f (mod q1^2) for all k = 1..q1-1.
inline bool congruence_condition(u64 r, u64 q1, u64 q2, u64 f) {
    const u64 m = q1 * q1;
    const u64 fm = f % m;
    const u64 rq2 = mul_mod(r % m, q2 % m, m);
    u64 acc = 0;
    for (u64 k = 1; k < q1; ++k) {
        acc += rq2;
        if (acc >= m) acc -= m;
        if (acc == fm) return false;
    }
    return true;
}

inline bool size_condition(u64 q1, u64 q2, u64 r, u64 f) {
    const u128 lhs = static_cast<u128>(q1 - 1) * (static_cast<u128>(q2) * r - 1);
    return lhs <= f;
}

} // namespace detail

/// Search ascending primes r for a witness. Candidates failing the inverse
/// pair or the congruence condition are skipped; once a candidate passing
/// both violates the size bound, no larger r can succeed and the field is
/// reported as a size-bound survivor.
inline SearchOutcome find_witness(const PowerResidueClassifier& cls, u64 r_cap = kDefaultRCap) {
    const u64 f = cls.conductor();
    const u64 ell = cls.ell();
    const auto [q1, q2] = find_inert_pair(cls);
    if (r_cap < q2) throw std::invalid_argument("find_witness: r_cap must be at least q2");

    PrimeIterator it;
    while (true) {
        const u64 r = it.next();
        if (r > r_cap) return SurvivorRecord{ell, f, SurvivorReason::search_cap_exceeded, q1, q2};
        if (r == q1 || r == q2 || r == f) continue;
        if (!cls.inverse_pair(r, q2)) continue;
        if (!detail::congruence_condition(r, q1, q2, f)) continue;
        if (!detail::size_condition(q1, q2, r, f))
            return SurvivorRecord{ell, f, SurvivorReason::size_bound_exceeded, q1, q2};
        return Witness{ell, f, q1, q2, r};
    }
}

inline SearchOutcome find_witness(const FieldClass& field, u64 r_cap = kDefaultRCap) {
    return find_witness(PowerResidueClassifier(field), r_cap);
}

/// Re-verify every witness condition from scratch, independent of the
/// search path: field validity, minimality of the inert pair, coprimality,
/// the inverse pair, the congruence condition, and the size bound.
inline bool check_witness(const Witness& w) noexcept {
    try {
        const PowerResidueClassifier cls = make_classifier(w.ell, w.f);
        const auto [q1, q2] = find_inert_pair(cls);
        if (q1 != w.q1 || q2 != w.q2) return false;
        if (w.r == 0 || w.r % w.q1 == 0 || w.r % w.q2 == 0) return false;
        if (w.r % w.f == 0) return false;
        if (!cls.inverse_pair(w.r, w.q2)) return false;
        if (!detail::congruence_condition(w.r, w.q1, w.q2, w.f)) return false;
        return detail::size_condition(w.q1, w.q2, w.r, w.f);
    } catch (const std::exception&) {
        return false;
    }
}

struct SweepSummary {
    u64 ell = 0;
    u64 lo = 0;
    u64 hi = 0;
    u64 conductor_count = 0;
    u64 witness_count = 0;
    std::vector<SurvivorRecord> survivors; // ordered by f
    u64 max_r = 0;
    double elapsed_seconds = 0.0;
};

/// Apply find_witness to every conductor in [lo, hi] in ascending order.
/// Each witness is re-checked with check_witness before it reaches the
/// sink; a failure there means the engine contradicted itself and aborts.
template <typename WitnessSink>
SweepSummary sweep(u64 ell, u64 lo, u64 hi, u64 r_cap, WitnessSink&& sink) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepSummary summary;
    summary.ell = ell;
    summary.lo = lo;
    summary.hi = hi;
    for (u64 f : conductor_stream(ell, lo, hi)) {
        ++summary.conductor_count;
        const PowerResidueClassifier cls = make_classifier(ell, f);
        SearchOutcome outcome = find_witness(cls, r_cap);
        if (const Witness* w = std::get_if<Witness>(&outcome)) {
            if (!check_witness(*w))
                throw std::logic_error("sweep: internal inconsistency, emitted witness failed re-verification");
            summary.max_r = std::max(summary.max_r, w->r);
            ++summary.witness_count;
            sink(*w);
        } else {
            summary.survivors.push_back(std::get<SurvivorRecord>(outcome));
        }
    }
    summary.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return summary;
}

} // namespace nefield::criterion
