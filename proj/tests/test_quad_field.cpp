#include "heckel/errors.hpp"
#include "heckel/quad_field.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace heckel;

namespace {

long gcd3(long a, long b, long c)
{
    return gcd_l(gcd_l(std::labs(a), std::labs(b)), std::labs(c));
}

/* reduced primitive forms of discriminant d < 0 */
long count_reduced_forms(long d)
{
    long n = 0;
    for (long a = 1; 3 * a * a <= -d; a++)
        for (long b = -a + 1; b <= a; b++) {
            long t = b * b - d;
            if (t % (4 * a))
                continue;
            long c = t / (4 * a);
            if (c < a || (c == a && b < 0) || gcd3(a, b, c) != 1)
                continue;
            n++;
        }
    return n;
}

/* [O : I] = M^2 / #{x + y w in I, 0 <= x, y < M} with M O inside I */
long index_by_counting(ideal const& I)
{
    long M = I.a();
    long in = 0;
    for (long x = 0; x < M; x++)
        for (long y = 0; y < M; y++)
            if (I.contains(field_element(I.disc(), x, y)))
                in++;
    return M * M / in;
}

ideal random_ideal(long d, std::mt19937_64& rng)
{
    std::uniform_int_distribution<long> u(-6, 6);
    field_element g1(d, u(rng), u(rng)), g2(d, u(rng), u(rng));
    if (g1.is_zero())
        g1 = field_element::integer(d, 3);
    return ideal::from_generators(d, {g1, g2});
}

std::vector<long> fundamental_discs(long bound)
{
    std::vector<long> out;
    for (long d = -3; d >= -bound; d--)
        if (is_fundamental_discriminant(d))
            out.push_back(d);
    return out;
}

}

TEST(field, roots_of_unity_count)
{
    EXPECT_EQ(quad_field::make(-4).w, 4);
    EXPECT_EQ(quad_field::make(-3).w, 6);
    EXPECT_EQ(quad_field::make(-23).w, 2);
    EXPECT_EQ(roots_of_unity(quad_field::make(-4)).size(), 4u);
    EXPECT_EQ(roots_of_unity(quad_field::make(-3)).size(), 6u);
}

TEST(field, rejects_non_fundamental)
{
    for (long d : {-5L, -12L, -16L, 0L, 5L, -27L}) {
        std::string why;
        EXPECT_FALSE(d < 0 && is_fundamental_discriminant(d, &why)) << d;
    }
    std::string why;
    EXPECT_FALSE(is_fundamental_discriminant(-5, &why));
    EXPECT_NE(why.find("mod 4"), std::string::npos);
    why.clear();
    EXPECT_FALSE(is_fundamental_discriminant(-12, &why));
    EXPECT_FALSE(why.empty());
    EXPECT_TRUE(is_fundamental_discriminant(-8));
    EXPECT_TRUE(is_fundamental_discriminant(-23));
}

TEST(primes, splitting_examples)
{
    quad_field K = quad_field::make(-4);
    prime_decomposition p5 = factor_rational_prime(K, 5);
    EXPECT_EQ(p5.type, splitting::split);
    ASSERT_EQ(p5.primes.size(), 2u);
    EXPECT_EQ(p5.primes[0].inorm(), 5);
    EXPECT_EQ(p5.primes[1].inorm(), 5);
    prime_decomposition p3 = factor_rational_prime(K, 3);
    EXPECT_EQ(p3.type, splitting::inert);
    ASSERT_EQ(p3.primes.size(), 1u);
    EXPECT_EQ(p3.primes[0].inorm(), 9);
    EXPECT_EQ(factor_rational_prime(K, 2).type, splitting::ramified);
}

TEST(primes, reconstruction_property)
{
    for (long d : {-3L, -4L, -7L, -8L, -15L, -20L, -23L, -47L}) {
        quad_field K = quad_field::make(d);
        for (long p = 2; p < 60; p++) {
            if (!is_prime_l(p))
                continue;
            prime_decomposition dec = factor_rational_prime(K, p);
            ideal prod = ideal::unit(d);
            for (auto const& P : dec.primes)
                prod = prod * P;
            if (dec.type == splitting::ramified)
                prod = prod * dec.primes[0];
            EXPECT_EQ(prod, ideal::integer(d, p)) << "d=" << d << " p=" << p;
        }
    }
}

TEST(ideals, conjugate_primes_multiply_to_five)
{
    ideal P = parse_ideal(-4, "(4+w)");
    EXPECT_EQ(P.inorm(), 5);
    EXPECT_EQ(P * P.conj(), ideal::integer(-4, 5));
    EXPECT_EQ(P.to_string(), "[5,4,1]");
    EXPECT_EQ(parse_ideal(-4, "(3)").to_string(), "[3,0,3]");
    EXPECT_EQ(parse_ideal(-4, "[5,4,1]"), P);
}

TEST(ideals, norm_by_index_counting)
{
    std::mt19937_64 rng(1);
    for (long d : {-4L, -23L, -7L}) {
        int done = 0;
        while (done < 17) {
            ideal I = random_ideal(d, rng);
            if (I.a() > 60)
                continue;
            EXPECT_EQ(index_by_counting(I), I.a() * I.c()) << I.to_string();
            EXPECT_EQ(I.inorm(), I.a() * I.c());
            done++;
        }
    }
}

TEST(ideals, norm_multiplicative_and_inverse_property)
{
    std::mt19937_64 rng(2);
    for (int t = 0; t < 200; t++) {
        long d = t % 2 ? -23 : -4;
        ideal I = random_ideal(d, rng), J = random_ideal(d, rng);
        EXPECT_EQ((I * J).norm(), I.norm() * J.norm());
        EXPECT_EQ(I * I.inverse(), ideal::unit(d));
        EXPECT_EQ((I / J) * J, I);
    }
}

TEST(ideals, hnf_canonicalization_idempotent)
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; t++) {
        ideal I = random_ideal(-15, rng);
        ideal J = ideal::from_hnf(-15, I.a(), I.b(), I.c(), I.den());
        EXPECT_EQ(I, J);
        EXPECT_EQ(I.c() > 0 && I.a() % I.c() == 0 && I.b() % I.c() == 0 && I.b() >= 0 && I.b() < I.a(), true);
    }
}

TEST(ideals, norm_two_prime_of_minus_23_is_not_principal)
{
    /* x^2 + x y + 6 y^2 = 2 has no integer solution */
    long solutions = 0;
    for (long x = -3; x <= 3; x++)
        for (long y = -3; y <= 3; y++)
            if (x * x + x * y + 6 * y * y == 2)
                solutions++;
    EXPECT_EQ(solutions, 0);
    ideal P = factor_rational_prime(quad_field::make(-23), 2).primes[0];
    EXPECT_EQ(P.inorm(), 2);
    EXPECT_FALSE(principal_generator(P).has_value());
    auto g = principal_generator(P.pow(3));
    ASSERT_TRUE(g.has_value());
    EXPECT_EQ(g->norm(), 8);
}

TEST(ideals, principal_generator_generates)
{
    ideal I = parse_ideal(-4, "(3)(4+w)");
    auto g = principal_generator(I);
    ASSERT_TRUE(g.has_value());
    EXPECT_EQ(ideal::principal(*g), I);
}

TEST(class_group, examples)
{
    EXPECT_EQ(class_group(quad_field::make(-4)).order(), 1);
    class_group_data c23 = class_group(quad_field::make(-23));
    EXPECT_EQ(c23.order(), 3);
    EXPECT_EQ(c23.G.invariants, std::vector<long>{3});
    class_group_data c20 = class_group(quad_field::make(-20));
    EXPECT_EQ(c20.order(), 2);
    EXPECT_EQ(c20.G.invariants, std::vector<long>{2});
    EXPECT_EQ(c23.forms.size(), reduced_forms(-23).size());
}

TEST(class_group, order_matches_reduced_form_count)
{
    for (long d : fundamental_discs(500))
        EXPECT_EQ(class_group(quad_field::make(d)).order(), count_reduced_forms(d)) << d;
}

TEST(class_group, representatives_closed_under_product)
{
    class_group_data cl = class_group(quad_field::make(-56));
    for (long i = 0; i < cl.order(); i++)
        for (long j = 0; j < cl.order(); j++) {
            ideal a = cl.representative(i), b = cl.representative(j);
            size_t k = cl.class_index(a * b);
            EXPECT_LT(k, size_t(cl.order()));
            /* class_index is a homomorphism */
            auto da = cl.dlog(a), db = cl.dlog(b), dk = cl.dlog(a * b);
            for (size_t r = 0; r < da.size(); r++)
                EXPECT_EQ(mod_l(da[r] + db[r], cl.G.invariants[r]), dk[r]);
        }
    for (long i = 0; i < cl.order(); i++)
        for (long j = i + 1; j < cl.order(); j++)
            EXPECT_NE(cl.class_index(cl.representative(i)), cl.class_index(cl.representative(j)));
}

TEST(lattice, oriented_basis_examples)
{
    oriented_lattice L = oriented_basis(ideal::unit(-4), 128);
    EXPECT_LT(abs(L.u() - complex(0, 1, 128)).to_double(), 1e-35);
    EXPECT_LT(abs(L.v() - complex(1, 0, 128)).to_double(), 1e-35);
    /* a negatively oriented pair is swapped */
    oriented_lattice M = oriented_lattice::from_basis(complex(1, 0, 128), complex(0, 1, 128));
    EXPECT_GT(M.tau().im.to_double(), 0);
}

TEST(lattice, covolume_is_norm_times_covolume_property)
{
    std::mt19937_64 rng(4);
    for (long d : {-4L, -23L, -3L}) {
        real c0 = quad_field::make(d).covolume(128);
        for (int t = 0; t < 10; t++) {
            ideal I = random_ideal(d, rng);
            if (t % 3 == 0)
                I = I.inverse();
            oriented_lattice L = oriented_basis(I, 128);
            EXPECT_GT(L.tau().im.to_double(), 0);
            EXPECT_GT(L.area_A().to_double(), 0);
            real want = c0 * real(I.norm(), 128);
            EXPECT_LT((abs(L.covolume() - want) / want).to_double(), 1e-30);
        }
    }
}

TEST(idele, principal_conductors)
{
    for (std::string s : {"(3)", "(4+w)", "(3)(4+w)"}) {
        ideal f = parse_ideal(-4, s);
        field_element x = idele_approximation(f);
        for (auto const& [P, e] : factor(f))
            EXPECT_EQ(valuation(x, P), e) << s;
        for (auto const& [P, e] : factor(ideal::principal(x))) {
            if (!P.divides(f))
                EXPECT_LE(e, 0) << s;
        }
    }
    EXPECT_EQ(idele_approximation(parse_ideal(-4, "(3)")), field_element::integer(-4, 3));
}

TEST(idele, non_principal_prime_audit)
{
    ideal P = factor_rational_prime(quad_field::make(-23), 2).primes[0];
    field_element x = idele_approximation(P);
    EXPECT_EQ(valuation(x, P), 1);
    for (auto const& [Q, e] : factor(ideal::principal(x))) {
        if (Q != P)
            EXPECT_LE(e, 0) << Q.to_string();
    }
}

TEST(parse, rejects_garbage)
{
    EXPECT_THROW(parse_ideal(-4, "(3"), invalid_input);
    EXPECT_THROW(parse_ideal(-4, "[3,1]"), invalid_input);
    EXPECT_THROW(parse_element(-4, "1+q"), invalid_input);
}

TEST(parse, exponent_is_repeated_product)
{
    ideal P = parse_ideal(-4, "(4+w)");
    EXPECT_EQ(parse_ideal(-4, "(4+w)^2"), P * P);
    EXPECT_EQ(parse_ideal(-4, "(3)(4+w)^3"), parse_ideal(-4, "(3)") * P * P * P);
    EXPECT_EQ(parse_ideal(-4, "(4+w)^2").inorm(), 25);
}
