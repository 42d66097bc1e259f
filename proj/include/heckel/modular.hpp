#ifndef HECKEL_MODULAR_HPP_
#define HECKEL_MODULAR_HPP_

#include "heckel/lattice.hpp"
#include "heckel/mp.hpp"

namespace heckel {

/* q prod (1 - q^n)^24 with q = e(tau), no reduction of tau */
complex delta_q_product(complex const& tau);
/* 1 - 24 sum sigma_1(n) q^n */
complex eisenstein_e2(complex const& tau);

/* weight 12 in the lattice: Delta(Z tau + Z) = q prod (1 - q^n)^24 */
complex ramanujan_delta(oriented_lattice const& L);

struct sigma_data {
    complex sigma;
    /* eta(u), eta(v) for the basis of L; eta(v) u - eta(u) v = 2 pi i */
    complex eta_u, eta_v;
};

sigma_data sigma_and_quasiperiods(complex const& z, oriented_lattice const& L);

/* theta(z; L) = (2 pi)^12 Delta(L) exp(-6 eta(z) z) sigma(z)^12, degree 0 */
complex theta_function(complex const& z, oriented_lattice const& L);

}

#endif	/* HECKEL_MODULAR_HPP_ */
