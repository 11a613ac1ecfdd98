#include <catch2/catch_amalgamated.hpp>

#include <gmpxx.h>

#include <nefield/arith.hpp>

#include <random>

using namespace nefield;

namespace {

// Independent oracle: straightforward trial division.
bool trial_division_is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d <= n / d; ++d)
        if (n % d == 0) return false;
    return true;
}

// Independent oracle: a from-scratch sieve, no shared code with the library.
std::vector<u64> naive_sieve(u64 lo, u64 hi) {
    std::vector<bool> comp(hi + 1, false);
    std::vector<u64> out;
    for (u64 p = 2; p <= hi; ++p) {
        if (comp[p]) continue;
        if (p >= lo) out.push_back(p);
        for (u64 q = p * p; q <= hi; q += p) comp[q] = true;
    }
    return out;
}

} // namespace

TEST_CASE("mul_mod exact") {
    CHECK(mul_mod(0, 123, 1000) == 0);
    CHECK(mul_mod(1, 123, 1000) == 123);
    // frozen from a big-integer computation
    CHECK(mul_mod(1000000007ull, 1000000009ull, 10000000000037ull) == 15996300063ull);
}

TEST_CASE("mul_mod and pow_mod agree with the big-integer oracle near 2^62") {
    std::mt19937_64 rng(0x5eed0001);
    std::uniform_int_distribution<u64> mods(kModulusCap - (u64{1} << 32), kModulusCap - 1);
    for (int i = 0; i < 10000; ++i) {
        const u64 m = mods(rng);
        const u64 a = rng() % m;
        const u64 b = rng() % m;
        const u64 e = rng() % 1000000;
        mpz_class za(static_cast<unsigned long>(a)), zb(static_cast<unsigned long>(b)),
            zm(static_cast<unsigned long>(m)), r;
        mpz_mul(r.get_mpz_t(), za.get_mpz_t(), zb.get_mpz_t());
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), zm.get_mpz_t());
        REQUIRE(mul_mod(a, b, m) == r.get_ui());
        mpz_class ze(static_cast<unsigned long>(e));
        mpz_powm(r.get_mpz_t(), za.get_mpz_t(), ze.get_mpz_t(), zm.get_mpz_t());
        REQUIRE(pow_mod(a, e, m) == r.get_ui());
    }
}

TEST_CASE("pow_mod examples") {
    CHECK(pow_mod(7, 0, 97) == 1);
    CHECK(pow_mod(5, 6, 31) == 1);  // 5^6 = 15625 = 31*504 + 1
    CHECK(pow_mod(2, 6, 31) == 2);  // 2^6 = 64
}

TEST_CASE("is_prime basics and frozen cases") {
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(1));
    CHECK(is_prime(2));
    CHECK(is_prime(59999999974303ull)); // a conductor from the degree-97 run
    CHECK_FALSE(is_prime(59999999974301ull));
    for (u64 n = 0; n < 2000; ++n) REQUIRE(is_prime(n) == trial_division_is_prime(n));
}

TEST_CASE("is_prime(1e13+37) cross-checked by trial division") {
    const u64 n = 10000000000037ull;
    bool composite = false;
    for (u64 d = 2; d <= n / d; ++d) {
        if (n % d == 0) {
            composite = true;
            break;
        }
    }
    REQUIRE_FALSE(composite);
    REQUIRE(is_prime(n));
}

TEST_CASE("primes_in_segment") {
    CHECK(primes_in_segment(2, 10) == std::vector<u64>{2, 3, 5, 7});
    CHECK(primes_in_segment(90, 100) == std::vector<u64>{97});
    CHECK(primes_in_segment(2, 2) == std::vector<u64>{2});
    CHECK_THROWS_AS(primes_in_segment(10, 5), std::invalid_argument);
    CHECK_THROWS_AS(primes_in_segment(2, 2 + kSegmentCap + 1), std::invalid_argument);

    SECTION("matches a from-scratch sieve") {
        CHECK(primes_in_segment(500000, 600000) == naive_sieve(500000, 600000));
    }
    SECTION("count over [1e6, 2e6] matches the oracle count") {
        CHECK(primes_in_segment(1000000, 2000000).size() == 70435);
        CHECK(naive_sieve(1000000, 2000000).size() == 70435);
    }
}

TEST_CASE("conductor_stream") {
    CHECK(conductor_stream(5, 2, 50) == std::vector<u64>{11, 31, 41});
    CHECK(conductor_stream(3, 2, 20) == std::vector<u64>{7, 13, 19});
    CHECK(conductor_stream(97, 2, 194).empty());
    CHECK_THROWS_AS(conductor_stream(4, 2, 100), std::invalid_argument);
    CHECK_THROWS_AS(conductor_stream(2, 2, 100), std::invalid_argument);
}

TEST_CASE("FieldClass validation and make_classifier") {
    const PowerResidueClassifier c1 = make_classifier(5, 31);
    CHECK(c1.exponent() == 6);
    const PowerResidueClassifier c2 = make_classifier(3, 151);
    CHECK(c2.exponent() == 50);
    CHECK_THROWS_AS(make_classifier(5, 13), std::invalid_argument);  // 13 != 1 mod 5
    CHECK_THROWS_AS(make_classifier(5, 21), std::invalid_argument);  // composite
    CHECK_THROWS_AS(make_classifier(9, 19), std::invalid_argument);  // degree not prime
    CHECK_THROWS_AS(make_classifier(3, 3), std::invalid_argument);
    CHECK_THROWS_AS(make_classifier(101, 607), std::invalid_argument); // degree above 97
}

TEST_CASE("classify") {
    const PowerResidueClassifier cls = make_classifier(5, 31);
    CHECK(cls.classify(31).is_zero());
    CHECK(cls.classify(62).is_zero());
    CHECK(cls.classify(5).is_split());
    CHECK(cls.classify(2).residue == 2);
    CHECK(cls.classify(2).is_inert());
}

TEST_CASE("is_split and inverse_pair") {
    const PowerResidueClassifier cls = make_classifier(3, 151);
    CHECK(cls.inverse_pair(13, 5));       // 13^50 = 118, 5^50 = 32, 118*32 = 1 mod 151
    CHECK_FALSE(cls.inverse_pair(7, 5));  // 32*32 = 118 != 1
    CHECK(make_classifier(5, 31).is_split(1));
    CHECK_THROWS_AS(cls.is_split(151), std::domain_error);
    CHECK_THROWS_AS(cls.inverse_pair(151, 5), std::domain_error);
}

TEST_CASE("character multiplicativity on random pairs") {
    std::mt19937_64 rng(0x5eed0002);
    for (u64 f : {31ull, 151ull, 331ull, 997501ull}) {
        const u64 ell = (f - 1) % 3 == 0 ? 3 : 5;
        const PowerResidueClassifier cls = make_classifier(ell, f);
        std::uniform_int_distribution<u64> dist(1, f - 1);
        for (int i = 0; i < 300; ++i) {
            const u64 m = dist(rng), n = dist(rng);
            const u128 prod = static_cast<u128>(m) * n;
            const u64 lhs = cls.classify(static_cast<u64>(prod % f)).residue;
            REQUIRE(lhs == mul_mod(cls.classify(m).residue, cls.classify(n).residue, f));
        }
    }
}

TEST_CASE("root-of-unity and kernel size, exhaustively for small conductors") {
    for (auto [ell, f] : {std::pair<u64, u64>{3, 7}, {3, 151}, {5, 31}, {5, 41}, {7, 29}, {7, 43}}) {
        const PowerResidueClassifier cls = make_classifier(ell, f);
        u64 split_count = 0;
        for (u64 n = 1; n < f; ++n) {
            const CharValue v = cls.classify(n);
            REQUIRE(pow_mod(v.residue, ell, f) == 1);
            if (v.is_split()) ++split_count;
        }
        REQUIRE(split_count == (f - 1) / ell);
    }
}

TEST_CASE("character-choice independence against a discrete-log character") {
    // For every prime f <= 2000 and odd prime ell | f - 1, build all the
    // order-ell characters from an explicit discrete log table and check
    // that splitness and inverse pairs agree with the canonical residue.
    std::mt19937_64 rng(0x5eed0003);
    for (u64 f : primes_in_segment(3, 2000)) {
        for (u64 ell : {3ull, 5ull, 7ull, 11ull, 13ull}) {
            if ((f - 1) % ell != 0 || f == ell) continue;
            const PowerResidueClassifier cls = make_classifier(ell, f);

            // find a primitive root g of f
            std::vector<u64> prime_factors;
            u64 m = f - 1;
            for (u64 d = 2; d <= m / d; ++d)
                if (m % d == 0) {
                    prime_factors.push_back(d);
                    while (m % d == 0) m /= d;
                }
            if (m > 1) prime_factors.push_back(m);
            u64 g = 0;
            for (u64 cand = 2; cand < f; ++cand) {
                bool primitive = true;
                for (u64 q : prime_factors)
                    if (pow_mod(cand, (f - 1) / q, f) == 1) {
                        primitive = false;
                        break;
                    }
                if (primitive) {
                    g = cand;
                    break;
                }
            }
            REQUIRE(g != 0);
            std::vector<u64> dlog(f, 0);
            u64 acc = 1;
            for (u64 k = 0; k < f - 1; ++k) {
                dlog[acc] = k;
                acc = mul_mod(acc, g, f);
            }

            // chi_j(n) = exp(2 pi i j dlog(n) / ell); splitness and inverse
            // pairs depend only on dlog mod ell, for every j.
            for (u64 j = 1; j < ell; ++j) {
                for (u64 n = 1; n < f; ++n) {
                    const bool split_dlog = (j * dlog[n]) % ell == 0;
                    REQUIRE(split_dlog == cls.is_split(n));
                }
                for (int k = 0; k < 50; ++k) {
                    const u64 r = 1 + rng() % (f - 1);
                    const u64 q2 = 1 + rng() % (f - 1);
                    const bool inv_dlog = (j * (dlog[r] + dlog[q2])) % ell == 0;
                    REQUIRE(inv_dlog == cls.inverse_pair(r, q2));
                }
            }
        }
    }
}

TEST_CASE("PrimeIterator crosses the table boundary") {
    PrimeIterator it;
    u64 last = 0, count = 0;
    while (last < 1000100) {
        const u64 p = it.next();
        REQUIRE(p > last);
        last = p;
        ++count;
    }
    CHECK(count == 78505); // pi(1000099) = 78504, plus the first prime past the table
    CHECK(last == 1000117);
    CHECK(is_prime(last));
}
