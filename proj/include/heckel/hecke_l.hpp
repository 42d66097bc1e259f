#ifndef HECKEL_HECKE_L_HPP_
#define HECKEL_HECKE_L_HPP_

#include "heckel/kronecker.hpp"
#include "heckel/mp.hpp"
#include "heckel/parallel.hpp"
#include "heckel/ray_class.hpp"

#include <complex>
#include <string>
#include <vector>

namespace heckel {

/* zeta(s, c) = weight * N(b)^{-s} * sum_{g in lattice} |1 + g|^{-2s}, b the
 * integral representative of c */
struct partial_zeta_convention {
    enum class lattice_choice { f_binv, f_b } lattice = lattice_choice::f_binv;
    enum class weight_choice { inv_w_f, inv_w_K } weight = weight_choice::inv_w_f;
    bool validated = false;

    std::string name() const;
};

std::vector<partial_zeta_convention> partial_zeta_candidates();
/* the calibrated choice: lattice f b^{-1}, weight 1/w_f */
partial_zeta_convention const& frozen_partial_zeta();

struct calibration_record {
    partial_zeta_convention convention;
    std::vector<std::string> moduli;
    long s = 3;
    long cutoff = 0;
    double worst_relative = 0;
    std::vector<std::pair<partial_zeta_convention, double> > candidates;
};

/* worst relative difference from dirichlet_series_L at s over the nontrivial
 * characters of the groups, per candidate */
std::vector<double> partial_zeta_residuals(std::vector<partial_zeta_convention> const& cands,
        std::vector<ray_class_ptr> const& groups, eval_context const& ctx, long s, long cutoff);

/* every candidate; the unique one below 1e-10 is returned validated */
calibration_record calibrate_partial_zeta(std::vector<ray_class_ptr> const& groups,
        eval_context const& ctx, long s = 3, long cutoff = 1000000);

/* value and d/ds of L(chi, s) = sum_c chi(c) zeta(s, c), chi on its own modulus */
dual L_continued(hecke_character const& chi, dual const& s, eval_context const& ctx,
        partial_zeta_convention const& conv = frozen_partial_zeta());
complex L_continued(hecke_character const& chi, complex const& s, int derivative_order,
        eval_context const& ctx, partial_zeta_convention const& conv = frozen_partial_zeta());

/* prime ideals of norm <= X with their class labels (or -1 when dividing the modulus) */
struct prime_table {
    ray_class_ptr group;
    long cutoff = 0;
    /* per rational prime p: splitting and labels of the primes above p */
    std::vector<long> primes;
    std::vector<splitting> types;
    std::vector<std::array<long, 2> > labels;
};

prime_table make_prime_table(ray_class_ptr const& G, long cutoff);

struct series_result {
    std::complex<long double> value;
    double tail_bound = 0;
    long cutoff = 0;
};

/* sum_{N a <= X} chi(a) N(a)^{-s} over ideals prime to the modulus, Re s >= 2;
 * tail bound sum_{n > X} d(n) n^{-Re s}.  bound_exceeded when the bound is above tol */
series_result dirichlet_series_L(hecke_character const& chi, std::complex<double> s, long cutoff,
        double tol = 1.0);
series_result dirichlet_series_L(hecke_character const& chi, prime_table const& T, std::complex<double> s);
double divisor_tail_bound(double sigma, double X);

/* exact coefficients in Z[Z/E]: out[n][k] = #{N a = n : chi(a) = e(k/E)} signed sums */
typedef std::vector<long> group_ring_element;
std::vector<group_ring_element> dirichlet_coefficients_exact(hecke_character const& chi, long E, long N);

struct euler_identity_result {
    bool holds = false;
    long checked = 0;
    long first_mismatch = 0;
    std::vector<std::string> stripped;      /* primes p | m, p not dividing f_chi */
};

/* L_m(chi) = prod (1 - chi'(p) N p^{-s}) L(chi') coefficientwise up to N */
euler_identity_result euler_factor_identity(hecke_character const& chi, long N);

struct deninger_convention {
    bool inverse_representative = true;     /* Gamma_c = f b^{-1}; else f b */
    bool conjugate_character = false;

    std::string name() const;
};

std::vector<deninger_convention> deninger_candidates();
deninger_convention const& frozen_deninger();

/* (-1)^j (-j)!^2 (sqrt|d| N f / 2 pi)^{-j} sum_c chi(c) A(Gamma_c)^{1-j} M_j(1; Gamma_c);
 * chi primitive, f != 1, w_f = 1, j <= -1; chi(rho_f) taken as 1 */
complex deninger_value(hecke_character const& chi, int j, eval_context const& ctx,
        deninger_convention const& conv = frozen_deninger());

/* the same assembly with every Gamma_c and the point 1 scaled by lambda */
complex deninger_assembly(hecke_character const& chi, int j, eval_context const& ctx,
        deninger_convention const& conv, complex const& lambda);

struct deninger_candidate_result {
    deninger_convention convention;
    double worst_abs_relative = 0;      /* | |D| - |L'| | / |L'| */
    double worst_constant_distance = 0; /* |L'/D - 1| */
};

struct deninger_calibration {
    deninger_convention convention;
    std::vector<deninger_candidate_result> candidates;
    int j = -1;
};

/* every candidate against L'(chi, j); the choice matches in absolute value with
 * the unimodular constant closest to 1 */
deninger_calibration calibrate_deninger(std::vector<hecke_character> const& chars, int j,
        eval_context const& ctx, std::vector<deninger_convention> const& cands = deninger_candidates());

/* L'(chi, j) after checking |L(chi, j)| < zero_tol */
complex L_prime_at(hecke_character const& chi, int j, eval_context const& ctx, double zero_tol = 1e-8);
/* central difference with step h at 27 extra bits */
complex L_prime_central_difference(hecke_character const& chi, int j, eval_context const& ctx,
        double h = 1e-6);

/* L'(chi, j) / deninger_value(chi, j) */
complex solve_unimodular_constant(hecke_character const& chi, int j, eval_context const& ctx);

/* the Kronecker limit right-hand side with log|x|_C = 2 log|x| at the complex place */
complex kronecker_limit_rhs(hecke_character const& chi, ideal const& a, eval_context const& ctx);

struct functional_equation_result {
    real lhs;   /* |L'(chi, j)| */
    real rhs;   /* (-j)! C^{-j} |Lambda(1 - j)| / C^{0}, C = sqrt(|d| N f) / 2 pi */
};

/* |Lambda(j)| = |Lambda(1 - j)| for primitive chi, Lambda(s) = C^s Gamma(s) L(chi, s) */
functional_equation_result functional_equation_check(hecke_character const& chi, int j,
        eval_context const& ctx);

struct lvalue_report {
    std::string character;
    std::string point;
    std::string method;
    complex value;
    double error_budget = 0;
    double seconds = 0;
};

}

#endif	/* HECKEL_HECKE_L_HPP_ */
