#include "heckel/errors.hpp"
#include "heckel/hecke_l.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace heckel;

namespace {

constexpr prec_t P = 128;
eval_context ctx{P, 1};

ideal I(long d, char const* s)
{
    return parse_ideal(d, s);
}

std::vector<hecke_character> nontrivial(ray_class_ptr const& G)
{
    std::vector<hecke_character> out;
    for (auto const& c : characters(G))
        if (!c.is_trivial())
            out.push_back(c);
    return out;
}

hecke_character trivial_character(long d)
{
    return characters(make_ray_class_group(ideal::unit(d))).at(0);
}

double rel(complex const& a, complex const& b)
{
    return (abs(a - b) / abs(b)).to_double();
}

long double catalan()
{
    long double s = 0, c = 1;
    for (int n = 0; n < 60; n++) {
        s += 1 / ((2.0L * n + 1) * (2.0L * n + 1) * c);
        c = c * (2 * n + 1) * (2 * n + 2) / ((n + 1.0L) * (n + 1.0L));
    }
    return M_PIl / 8 * std::log(2 + std::sqrt(3.0L)) + 3 * s / 8;
}

/* number of ideals of Z[i] of norm n is sum_{e | n} chi_{-4}(e) */
long double gaussian_ideal_series(int s, long X)
{
    std::vector<long> r(X + 1, 0);
    for (long e = 1; e <= X; e += 2) {
        long c = e % 4 == 1 ? 1 : -1;
        for (long n = e; n <= X; n += e)
            r[n] += c;
    }
    long double t = 0;
    for (long n = X; n >= 1; n--)
        t += r[n] * std::pow((long double) n, -s);
    return t;
}

}

TEST(dirichlet, dedekind_zeta_of_gaussian_field_at_2)
{
    long double oracle = M_PIl * M_PIl / 6 * catalan();
    EXPECT_NEAR(double(oracle), 1.5067030099, 1e-10);
    hecke_character one = trivial_character(-4);
    series_result r = dirichlet_series_L(one, 2.0, 1000000);
    EXPECT_LE(std::abs(double(r.value.real() - oracle)), r.tail_bound);
    EXPECT_LT(r.tail_bound, 1e-4);
    series_result small = dirichlet_series_L(one, 2.0, 100000);
    EXPECT_NEAR(double(small.value.real()), double(gaussian_ideal_series(2, 100000)), 1e-15);
}

TEST(dirichlet, tail_bound_covers_the_truncation_property)
{
    ray_class_ptr G = make_ray_class_group(I(-4, "(3)"));
    prime_table Ta = make_prime_table(G, 20000), Tb = make_prime_table(G, 400000);
    for (auto const& chi : characters(G))
        for (double s : {2.0, 3.0}) {
            series_result a = dirichlet_series_L(chi, Ta, s), b = dirichlet_series_L(chi, Tb, s);
            EXPECT_LE(std::abs(std::complex<double>(a.value - b.value)), a.tail_bound);
        }
    EXPECT_THROW(dirichlet_series_L(characters(G)[0], 1.5, 1000), domain_error);
    EXPECT_THROW(dirichlet_series_L(characters(G)[0], 2.0, 100, 1e-12), bound_exceeded);
}

TEST(dirichlet, coefficients_skip_ideals_meeting_the_modulus)
{
    hecke_character chi = nontrivial(make_ray_class_group(I(-4, "(3)"))).at(0);
    std::vector<group_ring_element> c = dirichlet_coefficients_exact(chi, chi.exponent(), 50);
    /* norm 9: only (3); norm 3: nothing; norm 5: two primes */
    long n9 = 0, n5 = 0;
    for (long v : c[9])
        n9 += std::labs(v);
    for (long v : c[5])
        n5 += v;
    EXPECT_EQ(n9, 0);
    EXPECT_EQ(n5, 2);
    for (long v : c[3])
        EXPECT_EQ(v, 0);
}

TEST(dirichlet, euler_factor_identity_exact_and_numeric)
{
    ray_class_ptr G = make_ray_class_group(I(-4, "(3)(4+w)"));
    int found = 0;
    for (auto const& chi : characters(G)) {
        if (chi.conductor != I(-4, "(3)"))
            continue;
        found++;
        euler_identity_result e = euler_factor_identity(chi, 3000);
        EXPECT_TRUE(e.holds) << e.first_mismatch;
        ASSERT_EQ(e.stripped.size(), 1u);
        EXPECT_EQ(e.stripped[0], I(-4, "(4+w)").to_string());
        hecke_character prim = primitive_character(chi);
        EXPECT_EQ(prim.group->modulus, I(-4, "(3)"));
        series_result LD = dirichlet_series_L(chi, 2.0, 1000000), L = dirichlet_series_L(prim, 2.0, 1000000);
        complex cp = prim.value_complex(*prim.value(I(-4, "(4+w)")), 64);
        std::complex<long double> ep(1 - cp.re.to_double() / 25, -cp.im.to_double() / 25);
        double diff = std::abs(std::complex<double>(LD.value - ep * L.value));
        EXPECT_LE(diff, LD.tail_bound + 1.1 * L.tail_bound);
        EXPECT_LT(diff, 1e-10);
    }
    EXPECT_EQ(found, 1);
}

TEST(continued, dedekind_zeta_at_zero)
{
    complex z = L_continued(trivial_character(-4), complex(0, 0, P), 0, ctx);
    EXPECT_LT(abs(z - complex(real(-0.25, P), real(0L, P))).to_double(), 1e-30);
    EXPECT_THROW(L_continued(trivial_character(-4), complex(1, 0, P), 0, ctx), pole_error);
}

TEST(continued, dedekind_zeta_derivative_at_zero_product_rule)
{
    /* zeta_K = zeta L(chi_{-4}); beta(0) = 1/2, zeta(0) = -1/2, zeta'(0) = -log(2 pi)/2,
     * beta'(0) = log(Gamma(1/4)^2 / (2 pi sqrt 2)) */
    long double g = std::tgamma(0.25L);
    long double bp = std::log(g * g / (2 * M_PIl * std::sqrt(2.0L)));
    long double oracle = -std::log(2 * M_PIl) / 4 - bp / 2;
    complex d = L_continued(trivial_character(-4), complex(0, 0, P), 1, ctx);
    EXPECT_NEAR(d.re.to_double(), double(oracle), 1e-15);
}

TEST(continued, matches_series_at_2_and_3_property)
{
    for (char const* f : {"(3)", "(3)(4+w)", "(4+w)^2"}) {
        ray_class_ptr G = make_ray_class_group(I(-4, f));
        prime_table T = make_prime_table(G, 2000000);
        for (auto const& chi : characters(G)) {
            if (chi.is_trivial())
                continue;
            for (long s : {2L, 3L}) {
                series_result r = dirichlet_series_L(chi, T, double(s));
                complex c = L_continued(chi, complex(s, 0, P), 0, ctx);
                std::complex<double> cv(c.re.to_double(), c.im.to_double());
                double diff = std::abs(cv - std::complex<double>(r.value));
                EXPECT_LE(diff, r.tail_bound) << f << " " << chi.exps_string() << " s=" << s;
                if (s == 3) {
                    EXPECT_LT(r.tail_bound, 1e-10);
                }
                EXPECT_LT(diff / std::abs(cv), 1e-10) << f << " " << chi.exps_string() << " s=" << s;
            }
        }
    }
}

TEST(continued, first_order_zeros_property)
{
    for (char const* f : {"(3)", "(3)(4+w)", "(4+w)^2"}) {
        for (auto const& chi : nontrivial(make_ray_class_group(I(-4, f))))
            for (int j : {-1, -2}) {
                complex v = L_continued(chi, complex(j, 0, P), 0, ctx);
                EXPECT_LT(abs(v).to_double(), 1e-8) << f << " " << j;
                complex d = L_continued(chi, complex(j, 0, P), 1, ctx);
                EXPECT_GT(abs(d).to_double(), 1e-6);
            }
    }
    /* the trivial character has no zero at 0 */
    EXPECT_GT(abs(L_continued(trivial_character(-4), complex(0, 0, P), 0, ctx)).to_double(), 0.2);
}

TEST(continued, uncalibrated_convention_is_refused)
{
    hecke_character chi = nontrivial(make_ray_class_group(I(-4, "(3)"))).at(0);
    partial_zeta_convention c;
    c.validated = false;
    EXPECT_THROW(L_continued(chi, complex(2, 0, P), 0, ctx, c), calibration_missing);
}

TEST(continued, calibration_picks_the_frozen_convention)
{
    std::vector<ray_class_ptr> groups{make_ray_class_group(I(-4, "(3)")), make_ray_class_group(I(-4, "(3)(4+w)"))};
    calibration_record r = calibrate_partial_zeta(groups, eval_context{96, 1}, 3, 200000);
    EXPECT_EQ(r.convention.name(), frozen_partial_zeta().name());
    EXPECT_TRUE(r.convention.validated);
    int below = 0;
    for (auto const& [c, v] : r.candidates)
        below += v < 1e-8;
    EXPECT_EQ(below, 1);
}

TEST(derivative, termwise_matches_central_difference)
{
    for (auto const& chi : nontrivial(make_ray_class_group(I(-4, "(3)")))) {
        complex a = L_prime_at(chi, -1, ctx);
        complex b = L_prime_central_difference(chi, -1, ctx);
        EXPECT_LT(abs(a - b).to_double(), 1e-8);
    }
    EXPECT_THROW(L_prime_at(trivial_character(-4), 0, ctx), domain_error);
    EXPECT_THROW(L_prime_at(trivial_character(-4), 1, ctx), invalid_input);
}

TEST(derivative, functional_equation_bookkeeping)
{
    for (char const* f : {"(3)", "(4+w)^2"})
        for (auto const& chi : nontrivial(make_ray_class_group(I(-4, f)))) {
            functional_equation_result r = functional_equation_check(chi, -1, ctx);
            EXPECT_LT((abs(r.lhs - r.rhs) / r.lhs).to_double(), 1e-10) << f;
        }
}

TEST(deninger, matches_continued_route_in_absolute_value)
{
    for (char const* f : {"(3)", "(4+w)^2", "(3)(4+w)"})
        for (auto const& chi : nontrivial(make_ray_class_group(I(-4, f)))) {
            if (!chi.is_primitive())
                continue;
            for (int j : {-1, -2}) {
                complex D = deninger_value(chi, j, ctx);
                complex L = L_prime_at(chi, j, ctx);
                EXPECT_LT((abs(abs(D) - abs(L)) / abs(L)).to_double(), 1e-6) << f << " j=" << j;
            }
        }
}

TEST(deninger, homothety_invariance)
{
    hecke_character chi = nontrivial(make_ray_class_group(I(-4, "(3)"))).at(0);
    for (int j : {-1, -2}) {
        complex a = deninger_value(chi, j, ctx);
        complex b = deninger_assembly(chi, j, ctx, frozen_deninger(), complex(2, 1, P));
        EXPECT_LT(rel(b, a), 1e-25) << j;
    }
}

TEST(deninger, rational_orbit_consistency)
{
    ray_class_ptr G = make_ray_class_group(I(-4, "(4+w)^2"));
    EXPECT_EQ(G->order(), 5);
    std::vector<hecke_character> chars = characters(G);
    for (auto const& orbit : rational_orbits(chars)) {
        if (chars[orbit[0]].is_trivial())
            continue;
        EXPECT_EQ(orbit.size(), 4u);
        std::vector<double> before, after;
        for (size_t k : orbit) {
            complex v = deninger_value(chars[k], -1, ctx);
            /* chi and its complex conjugate give conjugate values */
            complex w = deninger_value(power(chars[k], -1), -1, ctx);
            EXPECT_LT(abs(w - conj(v)).to_double(), 1e-25);
            EXPECT_LT((abs(abs(L_prime_at(chars[k], -1, ctx)) - abs(v)) / abs(v)).to_double(), 1e-6);
            before.push_back(abs(v).to_double());
            after.push_back(abs(deninger_value(power(chars[k], 2), -1, ctx)).to_double());
        }
        std::sort(before.begin(), before.end());
        std::sort(after.begin(), after.end());
        for (size_t i = 0; i < before.size(); i++)
            EXPECT_NEAR(before[i], after[i], 1e-12 * before[i]);
    }
}

TEST(deninger, rejects_what_it_does_not_cover)
{
    ray_class_ptr G = make_ray_class_group(I(-4, "(3)(4+w)"));
    for (auto const& chi : nontrivial(G))
        if (!chi.is_primitive()) {
            EXPECT_THROW(deninger_value(chi, -1, ctx), invalid_input);
        }
    hecke_character chi = nontrivial(make_ray_class_group(I(-4, "(3)"))).at(0);
    EXPECT_THROW(deninger_value(chi, 0, ctx), invalid_input);
    hecke_character eta = nontrivial(make_ray_class_group(ideal::unit(-23))).at(0);
    EXPECT_THROW(deninger_value(eta, -1, ctx), invalid_input);
}

TEST(deninger, unimodular_constant_is_one)
{
    hecke_character chi = nontrivial(make_ray_class_group(I(-4, "(3)"))).at(0);
    complex c = solve_unimodular_constant(chi, -1, ctx);
    EXPECT_LT(abs(c - complex(1, 0, P)).to_double(), 1e-6);
}

TEST(kronecker_limit, elliptic_unit_branch)
{
    ideal a1 = I(-4, "(4+w)"), a2 = I(-4, "(7+2*w)");
    for (char const* f : {"(3)", "(3)(4+w)"})
        for (auto const& chi : nontrivial(make_ray_class_group(I(-4, f)))) {
            if (!chi.is_primitive())
                continue;
            complex lp = L_prime_at(chi, 0, ctx);
            ideal a = coprime(a1, I(-4, f)) ? a1 : a2;
            complex r1 = kronecker_limit_rhs(chi, a, ctx);
            EXPECT_LT(abs(abs(r1) - abs(lp)).to_double(), 1e-6) << f;
            EXPECT_LT(abs(r1 - lp).to_double(), 1e-6) << f;
            ideal b = I(-4, "(5+4*w)");
            complex r2 = kronecker_limit_rhs(chi, b, ctx);
            EXPECT_LT(abs(r1 - r2).to_double(), 1e-8) << f;
        }
}

TEST(kronecker_limit, class_group_branch)
{
    long d = -23;
    quad_field K = quad_field::make(d);
    ideal p3 = factor_rational_prime(K, 3).primes[0], p13 = factor_rational_prime(K, 13).primes[0];
    for (auto const& chi : nontrivial(make_ray_class_group(ideal::unit(d)))) {
        complex lp = L_prime_at(chi, 0, ctx);
        complex r1 = kronecker_limit_rhs(chi, p3, ctx), r2 = kronecker_limit_rhs(chi, p13, ctx);
        EXPECT_LT(abs(abs(r1) - abs(lp)).to_double(), 1e-6);
        EXPECT_LT(abs(r1 - lp).to_double(), 1e-6);
        EXPECT_LT(abs(r1 - r2).to_double(), 1e-8);
        /* a principal auxiliary ideal has chi(a) = 1 */
        EXPECT_THROW(kronecker_limit_rhs(chi, ideal::integer(d, 5), ctx), domain_error);
    }
    EXPECT_THROW(kronecker_limit_rhs(trivial_character(-4), I(-4, "(4+w)"), ctx), invalid_input);
}

TEST(determinism, thread_count_does_not_change_values)
{
    hecke_character chi = nontrivial(make_ray_class_group(I(-4, "(3)(4+w)"))).at(0);
    complex a = L_continued(chi, complex(-1, 0, P), 1, eval_context{P, 1});
    complex b = L_continued(chi, complex(-1, 0, P), 1, eval_context{P, 4});
    EXPECT_TRUE(a.re == b.re && a.im == b.im);
}
