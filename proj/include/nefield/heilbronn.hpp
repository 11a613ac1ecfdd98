#pragma once

/**
 * @file heilbronn.hpp
 * @brief Norm-set membership, decomposition certificates, and generators.
 *
 * Writing the conductor as f = a + b with chi(a) = 1 and neither a nor b in
 * the norm set proves the field is not norm-Euclidean. A certificate holds
 * the decomposition together with complete prime factorizations of both
 * sides so that verification needs character evaluations and primality
 * checks only, never factoring.
 *
 * Norm-set membership uses the class-number-one characterization: a nonzero
 * integer n lies in the norm set iff ell divides v_p(n) for every inert
 * prime p. The ramified prime and split primes impose no constraint, and
 * because ell is odd the sign of n is irrelevant. An integer whose
 * factorization cannot be completed within the trial limit is classified
 * Unknown; Unknown never supports a non-norm-Euclideanity conclusion.
 */

#include <optional>
#include <sstream>

#include <nefield/criterion.hpp>
#include <nefield/factor.hpp>

namespace nefield::heilbronn {

enum class Membership { in_n, not_in_n, unknown };

struct NormMembership {
    Membership verdict = Membership::unknown;
    u64 obstruction_p = 0; // inert prime with ell not dividing its valuation
    u32 obstruction_v = 0;

    bool in_norm_set() const { return verdict == Membership::in_n; }
};

inline constexpr u64 kDefaultFactorLimit = 10'000'000;

/// Membership of |n| in the norm set. A NotInN verdict is definitive even
/// when a composite cofactor survives trial division, because valuations at
/// fully extracted primes are exact. An InN verdict requires the complete
/// factorization.
inline NormMembership norm_set_member_abs(const PowerResidueClassifier& cls, u64 magnitude,
                                          u64 factor_limit = kDefaultFactorLimit) {
    if (magnitude == 0) throw std::invalid_argument("norm_set_member: n must be nonzero");
    const u64 ell = cls.ell();
    const Factorization fac = trial_factor(magnitude, factor_limit);
    for (const PrimePower& pp : fac.factors) {
        if (cls.classify(pp.p).is_inert() && pp.e % ell != 0)
            return NormMembership{Membership::not_in_n, pp.p, pp.e};
    }
    if (!fac.complete()) return NormMembership{Membership::unknown, 0, 0};
    return NormMembership{Membership::in_n, 0, 0};
}

inline NormMembership norm_set_member(const PowerResidueClassifier& cls, i64 n,
                                      u64 factor_limit = kDefaultFactorLimit) {
    const u64 magnitude = n < 0 ? 0 - static_cast<u64>(n) : static_cast<u64>(n);
    return norm_set_member_abs(cls, magnitude, factor_limit);
}

struct HeilbronnCertificate {
    u64 ell = 0;
    u64 f = 0;
    u64 a = 0;
    u64 b = 0;
    std::vector<PrimePower> factor_a;
    std::vector<PrimePower> factor_b;

    enum class Provenance { from_witness, cubic_case_tree, brute_search };
    Provenance provenance = Provenance::brute_search;
    std::string case_label; // cubic case-tree branch, empty otherwise
};

namespace detail {

inline bool factors_valid(const std::vector<PrimePower>& factors, u64 expected) {
    u64 last = 0;
    for (const PrimePower& pp : factors) {
        if (pp.p <= last || pp.e == 0 || !is_prime(pp.p)) return false;
        last = pp.p;
    }
    const std::optional<u64> value = factorization_value(factors);
    return value && *value == expected;
}

/// Membership decided from a complete, already verified factor list.
inline NormMembership membership_from_factors(const PowerResidueClassifier& cls,
                                              const std::vector<PrimePower>& factors) {
    for (const PrimePower& pp : factors) {
        if (cls.classify(pp.p).is_inert() && pp.e % cls.ell() != 0)
            return NormMembership{Membership::not_in_n, pp.p, pp.e};
    }
    return NormMembership{Membership::in_n, 0, 0};
}

} // namespace detail

/// Independent check of a certificate: the decomposition, both supplied
/// factorizations (re-multiplied and primality-tested), chi(a) = 1, and
/// both sides outside the norm set. Uses only certificate data plus fresh
/// character evaluations.
inline bool verify_certificate(const HeilbronnCertificate& cert) noexcept {
    try {
        if (cert.a == 0 || cert.b == 0) return false;
        if (cert.a + cert.b < cert.a || cert.a + cert.b != cert.f) return false;
        const PowerResidueClassifier cls = make_classifier(cert.ell, cert.f);
        if (!detail::factors_valid(cert.factor_a, cert.a)) return false;
        if (!detail::factors_valid(cert.factor_b, cert.b)) return false;
        if (!cls.classify(cert.a).is_split()) return false;
        if (detail::membership_from_factors(cls, cert.factor_a).verdict != Membership::not_in_n) return false;
        if (detail::membership_from_factors(cls, cert.factor_b).verdict != Membership::not_in_n) return false;
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

namespace detail {

inline std::vector<PrimePower> complete_factorization_or_throw(u64 n, u64 factor_limit, const char* what) {
    Factorization fac = trial_factor(n, factor_limit);
    if (!fac.complete()) {
        // Raise the limit to the square root, which always completes.
        fac = trial_factor(n, isqrt(n) + 1);
        if (!fac.complete()) throw std::logic_error(std::string(what) + ": factorization did not complete");
    }
    return std::move(fac.factors);
}

} // namespace detail

/// Build the certificate a = u q2 r, b = q1 v implied by a witness, where
/// 0 < u < q1 with u q2 r = f (mod q1) and v = (f - u q2 r)/q1. The witness
/// congruence condition guarantees q1 does not divide v. Verified before
/// return; failure throws rather than returning a bad certificate.
inline HeilbronnCertificate witness_decomposition(const criterion::Witness& w,
                                                  u64 factor_limit = kDefaultFactorLimit) {
    if (!criterion::check_witness(w)) throw std::invalid_argument("witness_decomposition: degenerate witness");
    const u64 q2r_mod = mul_mod(w.q2 % w.q1, w.r % w.q1, w.q1);
    const u64 inv = pow_mod(q2r_mod, w.q1 - 2, w.q1); // q1 prime and q2 r coprime to it
    const u64 u = mul_mod(w.f % w.q1, inv, w.q1);
    const u128 a_wide = static_cast<u128>(u) * w.q2 * w.r;
    if (u == 0 || a_wide >= w.f) throw std::invalid_argument("witness_decomposition: degenerate witness");
    const u64 a = static_cast<u64>(a_wide);
    const u64 v = (w.f - a) / w.q1;
    if (v == 0 || (w.f - a) % w.q1 != 0) throw std::invalid_argument("witness_decomposition: degenerate witness");
    HeilbronnCertificate cert;
    cert.ell = w.ell;
    cert.f = w.f;
    cert.a = a;
    cert.b = w.f - a;
    cert.factor_a = detail::complete_factorization_or_throw(cert.a, factor_limit, "witness_decomposition");
    cert.factor_b = detail::complete_factorization_or_throw(cert.b, factor_limit, "witness_decomposition");
    cert.provenance = HeilbronnCertificate::Provenance::from_witness;
    if (!verify_certificate(cert)) throw std::invalid_argument("witness_decomposition: degenerate witness");
    return cert;
}

/// Smallest positive integer r (prime or not) with gcd(r, q1 q2) = 1 and
/// chi(r) = chi(q2)^{-1}. This true minimum is what the cubic case tree
/// needs; it is a different quantity from the prime-only r of the witness
/// search.
inline u64 minimal_inverse_shift(const PowerResidueClassifier& cls, u64 q1, u64 q2, u64 scan_cap = 10'000'000) {
    for (u64 n = 2; n <= scan_cap; ++n) {
        if (n % q1 == 0 || n % q2 == 0 || n % cls.conductor() == 0) continue;
        if (cls.inverse_pair(n, q2)) return n;
    }
    throw std::runtime_error("minimal_inverse_shift: no admissible r within the scan cap");
}

/// Cubic decomposition generator. Requires ell = 3, q1 != 2, (q1, q2) the
/// inert pair, r the true minimal shift, and f >= q1 q2 max(3r, 10 q1).
/// Walks a case analysis on u = f (q2 r)^{-1} mod q1 and v = (f - u q2 r)/q1:
/// when q1 divides v the decomposition is repaired by shifting u by
/// multiples of q1 (or re-grouping around q2 - q1 and r - q1), branching on
/// the primality and character of u + q1 and u/2 + q1. Every branch's
/// output is verified before return.
inline HeilbronnCertificate cubic_decompose(const PowerResidueClassifier& cls, u64 q1, u64 q2, u64 r,
                                            u64 factor_limit = kDefaultFactorLimit) {
    const u64 f = cls.conductor();
    if (cls.ell() != 3) throw std::invalid_argument("cubic_decompose: degree must be 3");
    if (q1 == 2) throw std::invalid_argument("cubic_decompose: q1 = 2 violates the hypothesis");
    if (criterion::find_inert_pair(cls) != std::make_pair(q1, q2))
        throw std::invalid_argument("cubic_decompose: (q1, q2) is not the inert pair");
    if (minimal_inverse_shift(cls, q1, q2) != r)
        throw std::invalid_argument("cubic_decompose: r is not the minimal admissible shift");
    const u128 hypothesis = static_cast<u128>(q1) * q2 * std::max<u128>(3 * static_cast<u128>(r), 10 * static_cast<u128>(q1));
    if (static_cast<u128>(f) < hypothesis)
        throw std::invalid_argument("cubic_decompose: f below q1 q2 max(3r, 10 q1)");

    const auto chi = [&cls](u64 n) { return cls.classify(n).residue; };
    const u64 chi_q2 = chi(q2);
    const u64 chi_r = chi(r);
    const auto fail = [](const char* msg) -> HeilbronnCertificate {
        throw std::logic_error(std::string("cubic_decompose: internal inconsistency: ") + msg);
    };

    const u64 q2r = q2 * r; // fits: q2, r are small against f >= 3 q1 q2 r
    const u64 inv = pow_mod(q2r % q1, q1 - 2, q1);
    const u64 u = mul_mod(f % q1, inv, q1);
    if (u == 0 || u >= q1) return fail("u out of range");
    if ((f - u * q2r) % q1 != 0) return fail("v not integral");
    const u64 v = (f - u * q2r) / q1;
    if (v == 0) return fail("v vanished");

    std::string label;
    u64 a = 0, b = 0;
    const auto set = [&](const char* l, u64 a_, u64 b_) {
        label = l;
        a = a_;
        b = b_;
    };

    if (v % q1 != 0) {
        set("direct", u * q2r, q1 * v);
    } else if (u % 2 == 1) {
        if (v < q2r) return fail("case 1 needs v >= q2 r");
        set("1", (u + q1) * q2r, q1 * (v - q2r));
    } else {
        const u64 P = u + q1;     // odd since u is even and q1 odd
        const u64 Q = u / 2 + q1; // below (3/2) q1
        const bool P_prime = is_prime(P);
        const bool Q_prime = is_prime(Q);
        if (!P_prime || chi(P) == 1) {
            if (v < q2r) return fail("case 2a/2b needs v >= q2 r");
            set(P_prime ? "2b" : "2a", P * q2r, q1 * (v - q2r));
        } else if (chi(P) == chi_r) {
            if (r > P) return fail("case 2c expects r <= u + q1");
            if (!Q_prime || chi(Q) == 1) {
                if (v < 2 * q2r) return fail("case 2c-i needs v >= 2 q2 r");
                set("2c-i", (u + 2 * q1) * q2r, q1 * (v - 2 * q2r));
            } else if (chi(Q) == chi_q2) {
                if (u != 2 * (q2 - q1)) {
                    if (v < 2 * q2r) return fail("case 2c-ii needs v >= 2 q2 r");
                    set("2c-ii", (u + 2 * q1) * (q2 - q1) * r, q1 * (v + r * (u + 2 * q1 - 2 * q2)));
                } else {
                    if (u % 4 != 0) return fail("case 2c-ii-x expects 4 | u");
                    if (v < 4 * q2r) return fail("case 2c-ii-x needs v >= 4 q2 r");
                    set("2c-ii-x", (u + 4 * q1) * q2r, q1 * (v - 4 * q2r));
                }
            } else {
                if (r != Q) {
                    if (v < 2 * q2r) return fail("case 2c-iii needs v >= 2 q2 r");
                    if (r <= q2 || Q <= r) return fail("case 2c-iii expects q2 < r < u/2 + q1");
                    set("2c-iii", (r - q1) * q2 * (u + 2 * q1), q1 * (v + q2 * (u + 2 * q1 - 2 * r)));
                } else {
                    set("2c-iii-x", (r - q1) * q2 * (u + q1), q1 * (v + q2 * (u + q1 - r)));
                }
            }
        } else {
            // chi(P) == chi(q2)
            if (!Q_prime || chi(Q) == 1) {
                if (v < 2 * q2r) return fail("case 2d-i needs v >= 2 q2 r");
                set("2d-i", (u + 2 * q1) * q2r, q1 * (v - 2 * q2r));
            } else if (chi(Q) == chi_q2) {
                if (r > P * P) return fail("case 2d-ii expects r <= (u + q1)^2");
                if (r < P * P) {
                    if (v < q2r) return fail("case 2d-ii needs v >= q2 r");
                    if (q2 < q1 || u + q1 < q2) return fail("case 2d-ii expects q2 <= u + q1");
                    set("2d-ii", P * (q2 - q1) * r, q1 * (v + r * (u + q1 - q2)));
                } else {
                    if (Q != q2) return fail("case 2d-ii-x expects u/2 + q1 = q2");
                    if (v < u * q2 * P) return fail("case 2d-ii-x needs v >= u q2 (u + q1)");
                    set("2d-ii-x", 2 * u * q2 * q2 * P, q1 * (v - u * q2 * P));
                }
            } else {
                if (r <= q2 || r > Q) return fail("case 2d-iii expects q2 < r <= u/2 + q1");
                set("2d-iii", P * (q2 - q1) * r, q1 * (v + r * (u + q1 - q2)));
            }
        }
    }

    HeilbronnCertificate cert;
    cert.ell = 3;
    cert.f = f;
    cert.a = a;
    cert.b = b;
    if (a == 0 || b == 0 || a + b != f) return fail((label + ": sides do not sum to f").c_str());
    cert.factor_a = detail::complete_factorization_or_throw(a, factor_limit, "cubic_decompose");
    cert.factor_b = detail::complete_factorization_or_throw(b, factor_limit, "cubic_decompose");
    cert.provenance = HeilbronnCertificate::Provenance::cubic_case_tree;
    cert.case_label = label;
    if (!verify_certificate(cert)) return fail((label + ": verification failed").c_str());
    return cert;
}

inline HeilbronnCertificate cubic_decompose(u64 f, u64 q1, u64 q2, u64 r,
                                            u64 factor_limit = kDefaultFactorLimit) {
    return cubic_decompose(make_classifier(3, f), q1, q2, r, factor_limit);
}

/// Exhaustive search for a decomposition: scan a = 1..a_max for split a
/// with both a and f - a provably outside the norm set. Unknown verdicts
/// are skipped, never treated as NotInN. Returns the first hit with
/// complete factorizations, or nullopt.
inline std::optional<HeilbronnCertificate> brute_decompose(const PowerResidueClassifier& cls, u64 a_max,
                                                           u64 factor_limit = kDefaultFactorLimit) {
    const u64 f = cls.conductor();
    if (a_max >= f) throw std::invalid_argument("brute_decompose: a_max must be below f");
    for (u64 a = 1; a <= a_max; ++a) {
        if (!cls.classify(a).is_split()) continue;
        const Factorization fa = trial_factor(a, factor_limit);
        if (detail::membership_from_factors(cls, fa.factors).verdict != Membership::not_in_n) continue;
        if (!fa.complete()) continue; // conservative: only fully certified sides
        const u64 b = f - a;
        const Factorization fb = trial_factor(b, factor_limit);
        if (detail::membership_from_factors(cls, fb.factors).verdict != Membership::not_in_n) continue;
        if (!fb.complete()) continue;
        HeilbronnCertificate cert;
        cert.ell = cls.ell();
        cert.f = f;
        cert.a = a;
        cert.b = b;
        cert.factor_a = fa.factors;
        cert.factor_b = fb.factors;
        cert.provenance = HeilbronnCertificate::Provenance::brute_search;
        if (!verify_certificate(cert))
            throw std::logic_error("brute_decompose: internal inconsistency, candidate failed verification");
        return cert;
    }
    return std::nullopt;
}

// --- certificate file format -------------------------------------------
//
// One certificate per line:
//   CERT ell=<l> f=<f> a=<a> b=<b> fa=<p1^e1,p2^e2,...> fb=<...> prov=<witness|cubic:<case>|brute>
// Exact decimal integers; factorizations ascending by prime.

inline std::string format_factors(const std::vector<PrimePower>& factors) {
    std::string out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(factors[i].p);
        out += '^';
        out += std::to_string(factors[i].e);
    }
    return out;
}

inline std::string to_line(const HeilbronnCertificate& cert) {
    std::string prov;
    switch (cert.provenance) {
        case HeilbronnCertificate::Provenance::from_witness: prov = "witness"; break;
        case HeilbronnCertificate::Provenance::cubic_case_tree: prov = "cubic:" + cert.case_label; break;
        case HeilbronnCertificate::Provenance::brute_search: prov = "brute"; break;
    }
    std::ostringstream os;
    os << "CERT ell=" << cert.ell << " f=" << cert.f << " a=" << cert.a << " b=" << cert.b
       << " fa=" << format_factors(cert.factor_a) << " fb=" << format_factors(cert.factor_b)
       << " prov=" << prov;
    return os.str();
}

namespace detail {

inline u64 parse_u64(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("certificate parse: bad integer '" + s + "'");
    std::size_t pos = 0;
    const unsigned long long value = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("certificate parse: bad integer '" + s + "'");
    return value;
}

inline std::vector<PrimePower> parse_factors(const std::string& s) {
    std::vector<PrimePower> out;
    if (s.empty()) return out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
        const std::size_t caret = item.find('^');
        if (caret == std::string::npos) {
            out.push_back(PrimePower{parse_u64(item), 1});
        } else {
            out.push_back(PrimePower{parse_u64(item.substr(0, caret)),
                                     static_cast<u32>(parse_u64(item.substr(caret + 1)))});
        }
    }
    return out;
}

} // namespace detail

inline HeilbronnCertificate parse_certificate_line(const std::string& line) {
    std::istringstream is(line);
    std::string tag;
    is >> tag;
    if (tag != "CERT") throw std::invalid_argument("certificate parse: line does not start with CERT");
    HeilbronnCertificate cert;
    bool have_prov = false;
    std::string field;
    while (is >> field) {
        const std::size_t eq = field.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("certificate parse: bad field '" + field + "'");
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "ell") cert.ell = detail::parse_u64(value);
        else if (key == "f") cert.f = detail::parse_u64(value);
        else if (key == "a") cert.a = detail::parse_u64(value);
        else if (key == "b") cert.b = detail::parse_u64(value);
        else if (key == "fa") cert.factor_a = detail::parse_factors(value);
        else if (key == "fb") cert.factor_b = detail::parse_factors(value);
        else if (key == "prov") {
            have_prov = true;
            if (value == "witness") cert.provenance = HeilbronnCertificate::Provenance::from_witness;
            else if (value == "brute") cert.provenance = HeilbronnCertificate::Provenance::brute_search;
            else if (value.rfind("cubic:", 0) == 0) {
                cert.provenance = HeilbronnCertificate::Provenance::cubic_case_tree;
                cert.case_label = value.substr(6);
            } else throw std::invalid_argument("certificate parse: bad provenance '" + value + "'");
        } else throw std::invalid_argument("certificate parse: unknown key '" + key + "'");
    }
    if (!have_prov || cert.ell == 0 || cert.f == 0)
        throw std::invalid_argument("certificate parse: missing fields");
    return cert;
}

} // namespace nefield::heilbronn
