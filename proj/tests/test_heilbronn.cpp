#include <catch2/catch_amalgamated.hpp>

#include <nefield/heilbronn.hpp>

#include <random>

using namespace nefield;
using namespace nefield::heilbronn;

TEST_CASE("norm_set_member") {
    const PowerResidueClassifier cls = make_classifier(5, 31);
    SECTION("6 is not a norm: 2 is inert and divides it once") {
        const NormMembership m = norm_set_member(cls, 6);
        CHECK(m.verdict == Membership::not_in_n);
        CHECK(m.obstruction_p == 2);
        CHECK(m.obstruction_v == 1);
    }
    CHECK(norm_set_member(cls, 25).verdict == Membership::in_n);  // 5 splits mod 31
    CHECK(norm_set_member(cls, 1).verdict == Membership::in_n);
    CHECK(norm_set_member(cls, -25).verdict == Membership::in_n); // odd degree, sign-free
    CHECK(norm_set_member(cls, 32).verdict == Membership::in_n);  // 2^5, valuation divisible by 5
    CHECK_THROWS_AS(norm_set_member(cls, 0), std::invalid_argument);

    SECTION("incomplete factorization yields Unknown, unless already obstructed") {
        // 1000003 * 1000033 has both factors above a tiny trial limit
        const u64 n = 1000003ull * 1000033ull;
        const NormMembership m = norm_set_member_abs(cls, n, 100);
        CHECK(m.verdict == Membership::unknown);
        // 2 * big-semiprime: the valuation of 2 is already decisive
        const NormMembership m2 = norm_set_member_abs(cls, 2 * n, 100);
        CHECK(m2.verdict == Membership::not_in_n);
        CHECK(m2.obstruction_p == 2);
    }
}

TEST_CASE("norm-set monoid closure on random members") {
    std::mt19937_64 rng(0x5eed0201);
    for (auto [ell, f] : {std::pair<u64, u64>{3, 151}, {5, 31}, {7, 29}}) {
        const PowerResidueClassifier cls = make_classifier(ell, f);
        std::vector<u64> members;
        for (u64 n = 1; n < 4000 && members.size() < 60; ++n)
            if (norm_set_member_abs(cls, n).verdict == Membership::in_n) members.push_back(n);
        for (int i = 0; i < 200; ++i) {
            const u64 a = members[rng() % members.size()];
            const u64 b = members[rng() % members.size()];
            REQUIRE(norm_set_member_abs(cls, a * b).verdict == Membership::in_n);
        }
    }
}

TEST_CASE("verify_certificate") {
    const auto cert = [](u64 ell, u64 f, u64 a, u64 b, std::vector<PrimePower> fa, std::vector<PrimePower> fb) {
        HeilbronnCertificate c;
        c.ell = ell;
        c.f = f;
        c.a = a;
        c.b = b;
        c.factor_a = std::move(fa);
        c.factor_b = std::move(fb);
        return c;
    };
    // 151 = 65 + 86; chi(65) = chi(5) chi(13) = 1; 5 inert divides 65 once;
    // 2 inert divides 86 once.
    CHECK(verify_certificate(cert(3, 151, 65, 86, {{5, 1}, {13, 1}}, {{2, 1}, {43, 1}})));
    // 31 = 6 + 25, but 25 = 5^2 is a norm.
    CHECK_FALSE(verify_certificate(cert(5, 31, 6, 25, {{2, 1}, {3, 1}}, {{5, 2}})));
    // 151 = 66 + 85 fails the split condition on 66.
    CHECK_FALSE(verify_certificate(cert(3, 151, 66, 85, {{2, 1}, {3, 1}, {11, 1}}, {{5, 1}, {17, 1}})));
    // wrong factorization product
    CHECK_FALSE(verify_certificate(cert(3, 151, 65, 86, {{5, 1}, {14, 1}}, {{2, 1}, {43, 1}})));
    // composite "prime" in the list
    CHECK_FALSE(verify_certificate(cert(3, 151, 65, 86, {{65, 1}}, {{2, 1}, {43, 1}})));
    // unordered factor list
    CHECK_FALSE(verify_certificate(cert(3, 151, 65, 86, {{13, 1}, {5, 1}}, {{2, 1}, {43, 1}})));
    // sides not summing to f
    CHECK_FALSE(verify_certificate(cert(3, 151, 60, 86, {{2, 2}, {3, 1}, {5, 1}}, {{2, 1}, {43, 1}})));
}

TEST_CASE("witness_decomposition")
{
    SECTION("degree 3, f = 151: a = 65, b = 86 via u = 1, v = 43") {
        const HeilbronnCertificate c = witness_decomposition(criterion::Witness{3, 151, 2, 5, 13});
        CHECK(c.a == 65);
        CHECK(c.b == 86);
        CHECK(c.provenance == HeilbronnCertificate::Provenance::from_witness);
        CHECK(verify_certificate(c));
    }
    SECTION("degree 97 sample row: q1 = 2 forces u = 1, a = 3 * 199") {
        const HeilbronnCertificate c = witness_decomposition(criterion::Witness{97, 59999999990599ull, 2, 3, 199});
        CHECK(c.a == 597);
        CHECK(verify_certificate(c));
    }
    SECTION("invalid witness is rejected") {
        CHECK_THROWS_AS(witness_decomposition(criterion::Witness{3, 151, 2, 5, 7}), std::invalid_argument);
    }
}

TEST_CASE("minimal_inverse_shift can be composite and differs from the prime-only search") {
    // Composite shifts count here: the case tree relies on true minimality.
    const PowerResidueClassifier cls = make_classifier(3, 151);
    const u64 r = minimal_inverse_shift(cls, 2, 5);
    CHECK(r <= 13); // the prime-only search found 13
    CHECK(cls.inverse_pair(r, 5));
    for (u64 n = 2; n < r; ++n) {
        if (n % 2 == 0 || n % 5 == 0) continue;
        CHECK_FALSE(cls.inverse_pair(n, 5));
    }
}

TEST_CASE("cubic_decompose hypothesis checks") {
    CHECK_THROWS_AS(cubic_decompose(1009, 2, 5, 3), std::invalid_argument); // q1 = 2
    // wrong inert pair
    const PowerResidueClassifier cls = make_classifier(3, 1009);
    const auto [q1, q2] = criterion::find_inert_pair(cls);
    if (q1 != 2) {
        CHECK_THROWS_AS(cubic_decompose(1009, q1, q2 + 1, 1), std::invalid_argument);
    }
}

TEST_CASE("cubic_decompose over the first qualifying conductors") {
    // First 60 cubic conductors above 1e4 with q1 != 2 and the size
    // hypothesis satisfied (the acceptance suite runs 500).
    u64 checked = 0;
    for (u64 f : conductor_stream(3, 10000, 60000)) {
        const PowerResidueClassifier cls = make_classifier(3, f);
        const auto [q1, q2] = criterion::find_inert_pair(cls);
        if (q1 == 2) continue;
        const u64 r = minimal_inverse_shift(cls, q1, q2);
        if (static_cast<u128>(f) < static_cast<u128>(q1) * q2 * std::max<u64>(3 * r, 10 * q1)) continue;
        const HeilbronnCertificate c = cubic_decompose(cls, q1, q2, r);
        REQUIRE(verify_certificate(c));
        REQUIRE(c.provenance == HeilbronnCertificate::Provenance::cubic_case_tree);
        REQUIRE_FALSE(c.case_label.empty());
        ++checked;
        if (checked >= 60) break;
    }
    REQUIRE(checked >= 60);
}

TEST_CASE("brute_decompose") {
    SECTION("f = 31, degree 5 is norm-Euclidean: no decomposition exists") {
        CHECK_FALSE(brute_decompose(make_classifier(5, 31), 30).has_value());
    }
    SECTION("f = 11, degree 5 is norm-Euclidean: no decomposition exists") {
        CHECK_FALSE(brute_decompose(make_classifier(5, 11), 10).has_value());
    }
    SECTION("f = 151, degree 3 has a decomposition (65 + 86 qualifies)") {
        const auto c = brute_decompose(make_classifier(3, 151), 150);
        REQUIRE(c.has_value());
        CHECK(verify_certificate(*c));
        CHECK(c->a == 60); // first valid split value: 60 = 2^2 * 3 * 5
    }
    SECTION("a_max must stay below f") {
        CHECK_THROWS_AS(brute_decompose(make_classifier(3, 151), 151), std::invalid_argument);
    }
}

TEST_CASE("generator soundness on random conductors") {
    std::mt19937_64 rng(0x5eed0202);
    const std::vector<u64> conductors = conductor_stream(3, 10000, 200000);
    for (int i = 0; i < 120; ++i) {
        const u64 f = conductors[rng() % conductors.size()];
        const auto outcome = criterion::find_witness(FieldClass(3, f));
        if (const auto* w = std::get_if<criterion::Witness>(&outcome)) {
            const HeilbronnCertificate c = witness_decomposition(*w);
            REQUIRE(verify_certificate(c));
        }
    }
}

TEST_CASE("certificate line round-trip and parsing") {
    const HeilbronnCertificate c = witness_decomposition(criterion::Witness{3, 151, 2, 5, 13});
    const std::string line = to_line(c);
    CHECK(line == "CERT ell=3 f=151 a=65 b=86 fa=5^1,13^1 fb=2^1,43^1 prov=witness");
    const HeilbronnCertificate parsed = parse_certificate_line(line);
    CHECK(parsed.ell == c.ell);
    CHECK(parsed.f == c.f);
    CHECK(parsed.a == c.a);
    CHECK(parsed.b == c.b);
    CHECK(parsed.factor_a == c.factor_a);
    CHECK(parsed.factor_b == c.factor_b);
    CHECK(verify_certificate(parsed));

    CHECK_THROWS_AS(parse_certificate_line("nonsense"), std::invalid_argument);
    CHECK_THROWS_AS(parse_certificate_line("CERT ell=3 f=151"), std::invalid_argument);
}
