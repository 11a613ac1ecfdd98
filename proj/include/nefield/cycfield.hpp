#pragma once

/**
 * @file cycfield.hpp
 * @brief Exact arithmetic in a cyclic number field given by a defining
 *        polynomial: norms via resultants and Euclidean-minimum lower
 *        bounds through the norm set.
 *
 * Elements are polynomials in the field generator with rational
 * coefficients; all arithmetic is exact (GMP integers/rationals, no
 * floating point anywhere). The norm of an element is the resultant of
 * the monic defining polynomial with the element polynomial, computed as
 * a Sylvester determinant by fraction-free elimination after clearing
 * denominators.
 *
 * The lower-bound oracle: for alpha, beta integral with N(beta) = f, the
 * minimum of |N(alpha - beta z)| over integral z is congruent to N(alpha)
 * mod f and lies in the norm set, so
 *     m_K(alpha/beta) >= min{ |t| : t in N, t = N(alpha) (mod f) } / f.
 */

#include <gmpxx.h>

#include <nefield/heilbronn.hpp>

namespace nefield::cycfield {

using Int = mpz_class;
using Rat = mpq_class;

// --- polynomial helpers (ascending coefficient order) --------------------

inline std::size_t poly_degree(const std::vector<Int>& c) {
    std::size_t n = c.size();
    while (n > 0 && c[n - 1] == 0) --n;
    return n == 0 ? 0 : n - 1;
}

inline bool poly_is_zero(const std::vector<Int>& c) {
    for (const Int& x : c)
        if (x != 0) return false;
    return true;
}

/// Resultant of two integer polynomials (ascending coefficients) as the
/// determinant of their Sylvester matrix, by Bareiss fraction-free
/// elimination. Exact; sizes here stay below 200x200.
inline Int resultant(const std::vector<Int>& fc, const std::vector<Int>& gc) {
    if (poly_is_zero(fc) || poly_is_zero(gc)) return 0;
    const std::size_t n = poly_degree(fc);
    const std::size_t m = poly_degree(gc);
    if (n == 0 && m == 0) return 1; // two nonzero constants
    const std::size_t dim = n + m;
    // Row i < m: coefficients of f, descending, starting at column i.
    // Row m + i (i < n): coefficients of g, descending, starting at column i.
    std::vector<std::vector<Int>> a(dim, std::vector<Int>(dim, Int(0)));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= n; ++j) a[i][i + j] = fc[n - j];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= m; ++j) a[m + i][i + j] = gc[m - j];

    int sign = 1;
    Int prev(1);
    for (std::size_t k = 0; k + 1 < dim; ++k) {
        if (a[k][k] == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < dim && a[swap_row][k] == 0) ++swap_row;
            if (swap_row == dim) return 0;
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < dim; ++i) {
            for (std::size_t j = k + 1; j < dim; ++j) {
                Int num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Int det = a[dim - 1][dim - 1];
    return sign < 0 ? Int(-det) : det;
}

// --- irreducibility certification -----------------------------------------

namespace detail {

using ModPoly = std::vector<u64>; // ascending, coefficients in [0, p)

inline void mp_trim(ModPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline ModPoly mp_mulmod(const ModPoly& a, const ModPoly& b, const ModPoly& mod, u64 p) {
    if (a.empty() || b.empty()) return {};
    ModPoly prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            prod[i + j] = (prod[i + j] + mul_mod(a[i], b[j], p)) % p;
    }
    // reduce mod the monic polynomial `mod`
    const std::size_t d = mod.size() - 1;
    for (std::size_t i = prod.size(); i-- > d;) {
        const u64 c = prod[i];
        if (c == 0) continue;
        prod[i] = 0;
        for (std::size_t j = 0; j < d; ++j) {
            const u64 sub = mul_mod(c, mod[j], p);
            prod[i - d + j] = (prod[i - d + j] + p - sub) % p;
        }
    }
    prod.resize(d);
    mp_trim(prod);
    return prod;
}

inline ModPoly mp_powmod(ModPoly base, u64 exp, const ModPoly& mod, u64 p) {
    ModPoly result{1};
    while (exp > 0) {
        if (exp & 1) result = mp_mulmod(result, base, mod, p);
        base = mp_mulmod(base, base, mod, p);
        exp >>= 1;
    }
    return result;
}

inline ModPoly mp_gcd(ModPoly a, ModPoly b, u64 p) {
    mp_trim(a);
    mp_trim(b);
    while (!b.empty()) {
        // a mod b with b made monic
        const u64 lead_inv = pow_mod(b.back(), p - 2, p);
        for (u64& c : b) c = mul_mod(c, lead_inv, p);
        while (a.size() >= b.size()) {
            const u64 c = a.back();
            if (c != 0) {
                const std::size_t shift = a.size() - b.size();
                for (std::size_t j = 0; j < b.size(); ++j)
                    a[shift + j] = (a[shift + j] + p - mul_mod(c, b[j], p)) % p;
            }
            a.pop_back();
            mp_trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    mp_trim(a);
    return a;
}

inline ModPoly mp_derivative(const ModPoly& a, u64 p) {
    ModPoly out;
    for (std::size_t i = 1; i < a.size(); ++i) out.push_back(mul_mod(a[i], i % p, p));
    mp_trim(out);
    return out;
}

/// Degrees of the irreducible factors of a monic squarefree polynomial
/// over F_p, by distinct-degree splitting with Frobenius iterates.
inline std::vector<std::size_t> mp_factor_degrees(ModPoly f, u64 p) {
    std::vector<std::size_t> degrees;
    const ModPoly x{0, 1};
    ModPoly w = mp_powmod(x, p, f, p); // x^{p^d} mod f, here d = 1
    std::size_t d = 1;
    while (f.size() - 1 >= 2 * d) {
        ModPoly wx = w;
        // w - x
        if (wx.size() < 2) wx.resize(2, 0);
        wx[1] = (wx[1] + p - 1) % p;
        mp_trim(wx);
        ModPoly g = mp_gcd(f, wx, p);
        if (g.size() > 1) {
            const std::size_t gdeg = g.size() - 1;
            for (std::size_t i = 0; i < gdeg / d; ++i) degrees.push_back(d);
            // divide f by g (both monic after normalization)
            const u64 lead_inv = pow_mod(g.back(), p - 2, p);
            for (u64& c : g) c = mul_mod(c, lead_inv, p);
            ModPoly q(f.size() - g.size() + 1, 0);
            ModPoly rem = f;
            for (std::size_t i = q.size(); i-- > 0;) {
                const u64 c = rem[i + g.size() - 1];
                q[i] = c;
                if (c == 0) continue;
                for (std::size_t j = 0; j < g.size(); ++j)
                    rem[i + j] = (rem[i + j] + p - mul_mod(c, g[j], p)) % p;
            }
            f = q;
            if (f.size() - 1 < d + 1) break;
            // rebuild x^{p^d} modulo the smaller f
            w = mp_powmod(x, p, f, p);
            for (std::size_t i = 1; i < d; ++i) w = mp_powmod(w, p, f, p);
        }
        ++d;
        if (f.size() - 1 < 2 * d) break;
        w = mp_powmod(w, p, f, p);
    }
    if (f.size() > 1) degrees.push_back(f.size() - 1);
    return degrees;
}

} // namespace detail

/// Certify irreducibility over Q of a monic integer polynomial by the
/// splitting-type sieve: for good primes p (squarefree reduction mod p),
/// a rational factor's degree must be a subset sum of the mod-p factor
/// degrees; when the intersection over several p shrinks to {0, deg},
/// irreducibility is proven. Throws if no certificate is found within
/// `max_primes` good primes; reducible and undecidable inputs both land
/// there, never a silent accept.
inline void certify_irreducible(const std::vector<Int>& poly, int max_primes = 200) {
    const std::size_t deg = poly_degree(poly);
    if (deg == 0) throw std::invalid_argument("certify_irreducible: constant polynomial");
    if (poly[deg] != 1) throw std::invalid_argument("certify_irreducible: polynomial must be monic");
    if (deg == 1) return;
    if (deg > 97) throw std::invalid_argument("certify_irreducible: degree above 97 unsupported");

    // A repeated factor makes every reduction non-squarefree; reject it up
    // front so the good-prime scan below always terminates.
    std::vector<Int> der(deg);
    for (std::size_t i = 1; i <= deg; ++i) der[i - 1] = poly[i] * static_cast<long>(i);
    if (resultant(poly, der) == 0)
        throw std::invalid_argument("certify_irreducible: polynomial has a repeated factor");

    u128 possible = ~u128{0}; // candidate factor degrees as a bitmask
    PrimeIterator primes;
    int used = 0;
    int scanned = 0;
    while (used < max_primes && scanned < 50 * max_primes) {
        ++scanned;
        const u64 p = primes.next();
        if (p == 2) continue; // odd p keeps inverse logic simple
        detail::ModPoly fp(deg + 1);
        for (std::size_t i = 0; i <= deg; ++i) {
            Int c = poly[i] % static_cast<long>(p);
            if (c < 0) c += static_cast<long>(p);
            fp[i] = c.get_ui();
        }
        if (fp[deg] == 0) continue; // should not happen for monic
        detail::ModPoly der = detail::mp_derivative(fp, p);
        if (der.empty()) continue;
        if (detail::mp_gcd(fp, der, p).size() > 1) continue; // not squarefree mod p
        ++used;
        const std::vector<std::size_t> degrees = detail::mp_factor_degrees(fp, p);
        u128 sums = 1;
        for (std::size_t dd : degrees) sums |= sums << dd;
        possible &= sums;
        const u128 target = (u128{1} << deg) | 1;
        if ((possible & ~target) == 0) return; // only 0 and deg remain
    }
    throw std::invalid_argument("certify_irreducible: no irreducibility certificate found");
}

// --- the field spec and elements ------------------------------------------

struct FieldElement {
    std::vector<Rat> coeffs; // ascending in the generator, size = degree

    bool is_zero() const {
        for (const Rat& c : coeffs)
            if (c != 0) return false;
        return true;
    }
};

/// A cyclic field presented by a monic irreducible integer polynomial of
/// odd prime degree ell, attached to conductor f. Besides degree checks,
/// construction runs an irreducibility certificate and a discriminant
/// sanity test: disc(poly) must be a nonzero perfect square divisible by
/// f^(ell-1) (it equals f^(ell-1) times the squared index). Whether the
/// polynomial really generates the conductor-f field is not verified.
class NumberFieldSpec {
public:
    NumberFieldSpec(u64 ell, u64 f, std::vector<Int> min_poly_ascending)
        : classifier_(make_classifier(ell, f)), min_poly_(std::move(min_poly_ascending)) {
        if (poly_degree(min_poly_) != ell || min_poly_.size() != ell + 1)
            throw std::invalid_argument("NumberFieldSpec: polynomial degree must equal ell");
        if (min_poly_[ell] != 1) throw std::invalid_argument("NumberFieldSpec: polynomial must be monic");
        certify_irreducible(min_poly_);
        check_discriminant();
    }

    u64 degree() const { return classifier_.ell(); }
    u64 conductor() const { return classifier_.conductor(); }
    const PowerResidueClassifier& classifier() const { return classifier_; }
    const std::vector<Int>& min_poly() const { return min_poly_; }

private:
    void check_discriminant() const {
        const u64 ell = degree();
        std::vector<Int> der(ell);
        for (u64 i = 1; i <= ell; ++i) der[i - 1] = min_poly_[i] * static_cast<long>(i);
        Int disc = resultant(min_poly_, der);
        // deg = ell odd: sign factor (-1)^{ell(ell-1)/2}; lc = 1
        if ((ell * (ell - 1) / 2) % 2 == 1) disc = -disc;
        if (disc <= 0) throw std::invalid_argument("NumberFieldSpec: discriminant must be positive (totally real)");
        const Int fz = Int(static_cast<unsigned long>(conductor()));
        Int fpow;
        mpz_pow_ui(fpow.get_mpz_t(), fz.get_mpz_t(), ell - 1);
        if (!mpz_divisible_p(disc.get_mpz_t(), fpow.get_mpz_t()))
            throw std::invalid_argument("NumberFieldSpec: discriminant not divisible by f^(ell-1)");
        if (mpz_perfect_square_p(disc.get_mpz_t()) == 0)
            throw std::invalid_argument("NumberFieldSpec: discriminant is not a perfect square");
    }

    PowerResidueClassifier classifier_;
    std::vector<Int> min_poly_;
};

/// N(elem) for a monic defining polynomial: clear denominators, take the
/// Sylvester resultant, divide by den^ell. Multiplicative; N(c) = c^ell.
inline Rat norm(const std::vector<Int>& monic_poly, const FieldElement& elem) {
    const std::size_t ell = poly_degree(monic_poly);
    if (elem.coeffs.size() > ell)
        throw std::invalid_argument("norm: element has more coefficients than the field degree");
    if (elem.is_zero()) return Rat(0);
    Int den(1);
    for (const Rat& c : elem.coeffs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<Int> scaled(elem.coeffs.size());
    for (std::size_t i = 0; i < elem.coeffs.size(); ++i) {
        Rat v = elem.coeffs[i] * den;
        v.canonicalize();
        scaled[i] = v.get_num(); // denominator is 1 after scaling by the lcm
    }
    const Int res = resultant(monic_poly, scaled);
    Int den_pow;
    mpz_pow_ui(den_pow.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(ell));
    Rat out(res, den_pow);
    out.canonicalize();
    return out;
}

inline Rat norm(const NumberFieldSpec& spec, const FieldElement& elem) { return norm(spec.min_poly(), elem); }

/// Product of two elements modulo the defining polynomial.
inline FieldElement multiply(const NumberFieldSpec& spec, const FieldElement& a, const FieldElement& b) {
    const std::size_t ell = spec.degree();
    std::vector<Rat> prod(2 * ell - 1, Rat(0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs.size(); ++j) prod[i + j] += a.coeffs[i] * b.coeffs[j];
    const std::vector<Int>& m = spec.min_poly();
    for (std::size_t i = prod.size(); i-- > ell;) {
        const Rat c = prod[i];
        if (c == 0) continue;
        prod[i] = 0;
        for (std::size_t j = 0; j < ell; ++j) prod[i - ell + j] -= c * m[j];
    }
    prod.resize(ell);
    return FieldElement{std::move(prod)};
}

struct MinimumBound {
    Rat bound;               // |witness_t| / f
    Int witness_t;           // signed; in the norm set, = N(alpha) mod f
    u64 exhaustion_radius = 0; // all candidates with |t| below this were decided
    bool equality_attained = false;
};

inline constexpr u64 kDefaultEnumerationRadius = 1'000'000; // multiples of f

/// The Lemma lower bound for a given N(alpha): enumerate t = N(alpha)
/// (mod f) in increasing |t| and return the first member of the norm set.
/// Every candidate is decided with a complete factorization (the factor
/// limit is raised as needed); Unknown never skips a candidate.
inline MinimumBound lemma_lower_bound(const NumberFieldSpec& spec, const Int& norm_alpha,
                                      u64 radius = kDefaultEnumerationRadius,
                                      u64 factor_limit = heilbronn::kDefaultFactorLimit) {
    const u64 f = spec.conductor();
    const PowerResidueClassifier& cls = spec.classifier();
    Int t0z = norm_alpha % static_cast<unsigned long>(f);
    if (t0z < 0) t0z += static_cast<unsigned long>(f);
    const u64 t0 = t0z.get_ui();
    if (t0 == 0) return MinimumBound{Rat(0), Int(0), 0, false};

    const auto decide = [&](u64 magnitude) {
        heilbronn::NormMembership m = heilbronn::norm_set_member_abs(cls, magnitude, factor_limit);
        u64 limit = factor_limit;
        while (m.verdict == heilbronn::Membership::unknown) {
            limit = std::max(limit * 10, isqrt(magnitude) + 1);
            m = heilbronn::norm_set_member_abs(cls, magnitude, limit);
        }
        return m.verdict == heilbronn::Membership::in_n;
    };

    // Candidates by increasing |t|: t0 + j f (positive side) against
    // t0 - (j+1) f (negative side, magnitude (j+1) f - t0).
    u64 pos_mag = t0, neg_mag = f - t0;
    u64 pos_steps = 0, neg_steps = 0;
    u64 last_mag = 0;
    while (pos_steps + neg_steps < 2 * radius) {
        const bool take_pos = pos_mag < neg_mag;
        const u64 mag = take_pos ? pos_mag : neg_mag;
        if (mag < last_mag) throw std::logic_error("lemma_lower_bound: enumeration order broken");
        last_mag = mag;
        if (decide(mag)) {
            MinimumBound out;
            out.bound = Rat(Int(static_cast<unsigned long>(mag)), Int(static_cast<unsigned long>(f)));
            out.bound.canonicalize();
            out.witness_t = take_pos ? Int(static_cast<unsigned long>(mag)) : -Int(static_cast<unsigned long>(mag));
            out.exhaustion_radius = mag;
            return out;
        }
        if (take_pos) {
            if (pos_mag > ~u64{0} - f) throw std::runtime_error("lemma_lower_bound: exhausted the 64-bit range");
            pos_mag += f;
            ++pos_steps;
        } else {
            if (neg_mag > ~u64{0} - f) throw std::runtime_error("lemma_lower_bound: exhausted the 64-bit range");
            neg_mag += f;
            ++neg_steps;
        }
    }
    throw std::runtime_error("lemma_lower_bound: no norm-set member within the enumeration radius");
}

/// Lemma lower bound for a concrete pair (alpha, beta) with N(beta) = f.
/// Reports equality when |N(alpha)| coincides with the witness, as happens
/// when the infimum is attained at z = 0.
inline MinimumBound minimum_lower_bound(const NumberFieldSpec& spec, const FieldElement& alpha,
                                        const FieldElement& beta,
                                        u64 radius = kDefaultEnumerationRadius,
                                        u64 factor_limit = heilbronn::kDefaultFactorLimit) {
    if (alpha.is_zero() || beta.is_zero()) throw std::invalid_argument("minimum_lower_bound: zero element");
    const Rat nb = norm(spec, beta);
    if (nb != Rat(Int(static_cast<unsigned long>(spec.conductor()))))
        throw std::invalid_argument("minimum_lower_bound: N(beta) must equal the conductor exactly");
    const Rat na = norm(spec, alpha);
    if (na.get_den() != 1)
        throw std::invalid_argument("minimum_lower_bound: N(alpha) is not an integer; alpha is not integral");
    MinimumBound out = lemma_lower_bound(spec, na.get_num(), radius, factor_limit);
    out.equality_attained = out.witness_t != 0 && abs(na.get_num()) == abs(out.witness_t);
    return out;
}

// --- text formats -----------------------------------------------------------

/// Parse "1,-1,-12,21,1,-5": descending-degree integer coefficients.
inline std::vector<Int> parse_poly(const std::string& text) {
    std::vector<Int> desc;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.empty()) throw std::invalid_argument("parse_poly: empty coefficient");
        desc.emplace_back(item);
    }
    if (desc.empty()) throw std::invalid_argument("parse_poly: no coefficients");
    return std::vector<Int>(desc.rbegin(), desc.rend());
}

/// Parse "-106/5,-162/5,866/5,-28/5,-41": descending-degree rationals.
inline FieldElement parse_element(const std::string& text) {
    std::vector<Rat> desc;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.empty()) throw std::invalid_argument("parse_element: empty coefficient");
        Rat r(item);
        r.canonicalize();
        desc.push_back(r);
    }
    if (desc.empty()) throw std::invalid_argument("parse_element: no coefficients");
    return FieldElement{std::vector<Rat>(desc.rbegin(), desc.rend())};
}

} // namespace nefield::cycfield
