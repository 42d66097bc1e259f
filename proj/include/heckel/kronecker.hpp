#ifndef HECKEL_KRONECKER_HPP_
#define HECKEL_KRONECKER_HPP_

#include "heckel/lattice.hpp"
#include "heckel/mp.hpp"
#include "heckel/parallel.hpp"
#include "heckel/quad_field.hpp"
#include "heckel/rational.hpp"

#include <array>
#include <map>
#include <utility>
#include <vector>

namespace heckel {

/* (z, gamma) = e(kPairingSign * Im(z conj gamma) / covolume); M_j is even in
 * z so both signs give the same sums, +1 is the frozen choice */
constexpr int kPairingSign = 1;

/* covolume / pi */
real area_A(oriented_lattice const& L);

/* throws domain_error when gamma is not a lattice point */
complex pontryagin_pairing(complex const& z, complex const& gamma, oriented_lattice const& L);

enum class sum_method { direct, accelerated };

struct sum_result {
    complex value;
    real error_bound;       /* rigorous for direct sums, 0 for the continuation */
    long shells = 0;
};

/* M_j(x) = sum' (x, g) / |g|^{2 - 2j}, j <= -1.  The direct method stops at
 * the first shell radius whose tail bound is below tol. */
sum_result eisenstein_kronecker_Mj(complex const& x, oriented_lattice const& L, int j,
        sum_method method, eval_context const& ctx, double tol = 1e-12, long max_shells = 4000);

enum class epstein_kind {
    shifted,    /* sum_{x + g != 0} |x + g|^{-2s} */
    twisted     /* sum'_{g} (x, g) |g|^{-2s} */
};

struct epstein_options {
    /* drop the s-independent-in-class term V^{-s}/(s - 1) (shifted kind) */
    bool drop_pole = false;
    /* multiplies the splitting parameter 1/V; the value does not depend on it */
    double split_scale = 1.0;
};

/* analytic continuation; value and d/ds */
dual epstein_continued(dual const& s, oriented_lattice const& L, complex const& x,
        epstein_kind kind, eval_context const& ctx, epstein_options const& opt = {});
complex epstein_continued(complex const& s, oriented_lattice const& L, complex const& x,
        epstein_kind kind, int derivative_order, eval_context const& ctx);

/* shifted kind by direct summation over shells |m|, |n| <= K, s >= 2
 * integral, with the midpoint-rule integral of the exterior added */
sum_result epstein_direct(long s, oriented_lattice const& L, complex const& x,
        eval_context const& ctx, long shells);

/* rational divisor on (Z/N)^2 */
struct torsion_divisor {
    long N = 1;
    std::map<std::pair<long, long>, rational> w;

    explicit torsion_divisor(long n = 1) : N(n) {}
    static torsion_divisor point(long N, long t1, long t2, rational const& c = 1);
    /* the points (N/a)(i, l), 0 <= i, l < a */
    static torsion_divisor torsion_subgroup(long N, long a, rational const& c = 1);
    void add(long t1, long t2, rational const& c);
    rational degree() const;
    torsion_divisor& operator+=(torsion_divisor const& o);
    friend torsion_divisor operator+(torsion_divisor a, torsion_divisor const& b) { a += b; return a; }
    friend torsion_divisor operator*(rational const& c, torsion_divisor a);
    friend torsion_divisor operator-(torsion_divisor a, torsion_divisor const& b) { return a + rational(-1) * b; }
};

typedef std::array<long, 4> mat2;       /* (a, b; c, d) mod N */

/* N^k / (k! (k+2)) sum_t psi(g^{-1} t) B_{k+2}(t_2 / N), k > 0 */
rational horospherical_rho(int k, torsion_divisor const& psi, mat2 const& g);

/* S, T and diag(r, 1) for r over a generating set of (Z/N)^x */
std::vector<mat2> gl2_generators(long N);

enum class beta_prime_variant {
    stated,         /* c0 = 1/(Nt^{4-2j} - 1), c1 = Nt^{2-2j}/(Nt^{4-2j} - 1) */
    degree_zero,    /* c0 = 1/(Nt^{2-2j} - 1), c1 = Nt^{-2j}/(Nt^{2-2j} - 1) */
    perturbed       /* stated with c0 = 1/(Nt^{4-2j} - 2) */
};

/* beta' - beta = c0 (0) - c1 sum_{E[Nt]} (p) at level N Nt */
torsion_divisor beta_prime_difference(int j, long N, long Nt, beta_prime_variant v);

struct kernel_check_result {
    bool in_kernel = false;
    rational worst;         /* the value of largest absolute value */
    mat2 worst_g{};
};

/* rho^{-2j}(beta' - beta)(g) = 0 for every generator g; beta in (Z/N)^2 */
kernel_check_result beta_prime_kernel_check(int j, long N, long Nt, std::pair<long, long> beta,
        beta_prime_variant v = beta_prime_variant::stated);

/* sum over u in P^{-1} G / G of M_j(x + u; G) against kappa M_j(N(P) x; sub),
 * with G, P ideals and x in K */
struct distribution_sides {
    complex lhs;
    complex sub_sum;    /* sum over the candidate sublattice, unscaled */
    long coset_count = 0;
};

distribution_sides p_distribution(ideal const& P, ideal const& G, field_element const& x, int j,
        bool conjugate_sublattice, eval_context const& ctx);

/* representatives of P^{-1} G / G */
std::vector<field_element> quotient_representatives(ideal const& big, ideal const& small);

}

#endif	/* HECKEL_KRONECKER_HPP_ */
