#pragma once

/**
 * @file interval.hpp
 * @brief Outward-rounded interval arithmetic over MPFR.
 *
 * Every quantity is carried as [lo, hi] with lo rounded toward -inf and hi
 * toward +inf, so a comparison `x.certainly_less(y)` (x.hi < y.lo) is a
 * machine-checked proof that the true values satisfy x < y. This is the
 * rounding discipline behind every bound certification in bounds.hpp:
 * inequalities are certified, not approximated.
 */

#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nefield {

class Interval {
public:
    explicit Interval(mpfr_prec_t prec = 128) {
        mpfr_init2(lo_, prec);
        mpfr_init2(hi_, prec);
        mpfr_set_nan(lo_);
        mpfr_set_nan(hi_);
    }

    Interval(const Interval& other) {
        mpfr_init2(lo_, mpfr_get_prec(other.lo_));
        mpfr_init2(hi_, mpfr_get_prec(other.hi_));
        mpfr_set(lo_, other.lo_, MPFR_RNDD);
        mpfr_set(hi_, other.hi_, MPFR_RNDU);
    }

    Interval(Interval&& other) noexcept {
        mpfr_init2(lo_, mpfr_get_prec(other.lo_));
        mpfr_init2(hi_, mpfr_get_prec(other.hi_));
        mpfr_swap(lo_, other.lo_);
        mpfr_swap(hi_, other.hi_);
    }

    Interval& operator=(Interval other) noexcept {
        mpfr_swap(lo_, other.lo_);
        mpfr_swap(hi_, other.hi_);
        return *this;
    }

    ~Interval() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }

    mpfr_prec_t precision() const { return std::max(mpfr_get_prec(lo_), mpfr_get_prec(hi_)); }

    static Interval exact_ui(unsigned long value, mpfr_prec_t prec) {
        Interval out(prec);
        if (mpfr_set_ui(out.lo_, value, MPFR_RNDD) != 0 || mpfr_set_ui(out.hi_, value, MPFR_RNDU) != 0)
            throw std::domain_error("Interval: integer not exactly representable at this precision");
        return out;
    }

    static Interval exact_si(long value, mpfr_prec_t prec) {
        Interval out(prec);
        if (mpfr_set_si(out.lo_, value, MPFR_RNDD) != 0 || mpfr_set_si(out.hi_, value, MPFR_RNDU) != 0)
            throw std::domain_error("Interval: integer not exactly representable at this precision");
        return out;
    }

    /// Exact d * 10^exp10; raises its own precision until the value fits.
    static Interval exact_pow10(unsigned digit, unsigned exp10, mpfr_prec_t prec) {
        mpz_t z;
        mpz_init(z);
        mpz_ui_pow_ui(z, 10, exp10);
        mpz_mul_ui(z, z, digit);
        mpfr_prec_t p = std::max<mpfr_prec_t>(prec, static_cast<mpfr_prec_t>(mpz_sizeinbase(z, 2) + 8));
        Interval out(p);
        mpfr_set_z(out.lo_, z, MPFR_RNDD);
        mpfr_set_z(out.hi_, z, MPFR_RNDU);
        mpz_clear(z);
        return out;
    }

    /// Decimal literal, outward rounded (the right way to ingest printed
    /// constants like 2.7151 that are not binary-exact).
    static Interval from_string(const std::string& text, mpfr_prec_t prec) {
        Interval out(prec);
        if (mpfr_set_str(out.lo_, text.c_str(), 10, MPFR_RNDD) != 0 ||
            mpfr_set_str(out.hi_, text.c_str(), 10, MPFR_RNDU) != 0)
            throw std::invalid_argument("Interval: cannot parse '" + text + "'");
        return out;
    }

    static Interval pi(mpfr_prec_t prec) {
        Interval out(prec);
        mpfr_const_pi(out.lo_, MPFR_RNDD);
        mpfr_const_pi(out.hi_, MPFR_RNDU);
        return out;
    }

    static Interval ratio(std::int64_t num, std::int64_t den, mpfr_prec_t prec) {
        return Interval::exact_si(num, prec) / Interval::exact_si(den, prec);
    }

    bool certainly_less(const Interval& other) const { return mpfr_cmp(hi_, other.lo_) < 0; }
    bool certainly_greater(const Interval& other) const { return other.certainly_less(*this); }
    bool certainly_positive() const { return mpfr_sgn(lo_) > 0; }
    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

    double lower_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double upper_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

    std::string upper_string(int digits = 12) const { return format(hi_, digits, MPFR_RNDU); }
    std::string lower_string(int digits = 12) const { return format(lo_, digits, MPFR_RNDD); }

    /// ceil(x * 10^decimals) as a long, certified: identical for both
    /// endpoints, so the decimal round-up of the true value is proven.
    /// Returns false when the interval is too wide to decide.
    bool certified_ceil_scaled(int decimals, long& out) const {
        mpfr_t slo, shi;
        const mpfr_prec_t p = precision() + 16;
        mpfr_init2(slo, p);
        mpfr_init2(shi, p);
        mpfr_ui_pow_ui(slo, 10, static_cast<unsigned long>(decimals), MPFR_RNDD);
        mpfr_mul(shi, hi_, slo, MPFR_RNDU);
        mpfr_mul(slo, lo_, slo, MPFR_RNDD);
        mpfr_ceil(slo, slo);
        mpfr_ceil(shi, shi);
        const bool agree = mpfr_cmp(slo, shi) == 0 && mpfr_fits_slong_p(shi, MPFR_RNDN);
        if (agree) out = mpfr_get_si(shi, MPFR_RNDN);
        mpfr_clear(slo);
        mpfr_clear(shi);
        return agree;
    }

    friend Interval operator+(const Interval& a, const Interval& b) {
        Interval out(std::max(a.precision(), b.precision()));
        mpfr_add(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_add(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return out;
    }

    friend Interval operator-(const Interval& a, const Interval& b) {
        Interval out(std::max(a.precision(), b.precision()));
        mpfr_sub(out.lo_, a.lo_, b.hi_, MPFR_RNDD);
        mpfr_sub(out.hi_, a.hi_, b.lo_, MPFR_RNDU);
        return out;
    }

    friend Interval operator*(const Interval& a, const Interval& b) {
        Interval out(std::max(a.precision(), b.precision()));
        corner_op(out, a, b, mpfr_mul);
        return out;
    }

    friend Interval operator/(const Interval& a, const Interval& b) {
        if (b.contains_zero()) throw std::domain_error("Interval: division by an interval containing zero");
        Interval out(std::max(a.precision(), b.precision()));
        corner_op(out, a, b, mpfr_div);
        return out;
    }

    friend Interval sqrt(const Interval& a) {
        if (mpfr_sgn(a.lo_) < 0) throw std::domain_error("Interval: sqrt of a possibly negative value");
        Interval out(a.precision());
        mpfr_sqrt(out.lo_, a.lo_, MPFR_RNDD);
        mpfr_sqrt(out.hi_, a.hi_, MPFR_RNDU);
        return out;
    }

    friend Interval log(const Interval& a) {
        if (!a.certainly_positive()) throw std::domain_error("Interval: log of a possibly nonpositive value");
        Interval out(a.precision());
        mpfr_log(out.lo_, a.lo_, MPFR_RNDD);
        mpfr_log(out.hi_, a.hi_, MPFR_RNDU);
        return out;
    }

    friend Interval exp(const Interval& a) {
        Interval out(a.precision());
        mpfr_exp(out.lo_, a.lo_, MPFR_RNDD);
        mpfr_exp(out.hi_, a.hi_, MPFR_RNDU);
        return out;
    }

    /// a^b for certainly positive a: extrema of the monotone-in-each-
    /// variable map lie at the corners of the box.
    friend Interval pow(const Interval& a, const Interval& b) {
        if (!a.certainly_positive()) throw std::domain_error("Interval: pow needs a certainly positive base");
        Interval out(std::max(a.precision(), b.precision()));
        corner_op(out, a, b, mpfr_pow);
        return out;
    }

    static Interval max_of(const Interval& a, const Interval& b) {
        Interval out(std::max(a.precision(), b.precision()));
        mpfr_max(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_max(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return out;
    }

private:
    using BinOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

    static void corner_op(Interval& out, const Interval& a, const Interval& b, BinOp op) {
        mpfr_t tmp;
        mpfr_init2(tmp, out.precision());
        const mpfr_srcptr as[2] = {a.lo_, a.hi_};
        const mpfr_srcptr bs[2] = {b.lo_, b.hi_};
        bool first = true;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                op(tmp, as[i], bs[j], MPFR_RNDD);
                if (first || mpfr_cmp(tmp, out.lo_) < 0) mpfr_set(out.lo_, tmp, MPFR_RNDD);
                op(tmp, as[i], bs[j], MPFR_RNDU);
                if (first || mpfr_cmp(tmp, out.hi_) > 0) mpfr_set(out.hi_, tmp, MPFR_RNDU);
                first = false;
            }
        }
        mpfr_clear(tmp);
    }

    static std::string format(mpfr_srcptr x, int digits, mpfr_rnd_t rnd) {
        char* buf = nullptr;
        mpfr_asprintf(&buf, "%.*R*e", digits, rnd, x);
        std::string out(buf);
        mpfr_free_str(buf);
        return out;
    }

    mpfr_t lo_;
    mpfr_t hi_;
};

} // namespace nefield
