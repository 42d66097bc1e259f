#ifndef HECKEL_LATTICE_HPP_
#define HECKEL_LATTICE_HPP_

#include "heckel/mp.hpp"

#include <array>
#include <cstdint>
#include <utility>

namespace heckel {

/* Z u + Z v with Im(u/v) > 0 */
class oriented_lattice {
    complex u_, v_;
    real covol_;
  public:
    oriented_lattice(complex u, complex v);
    /* swaps to restore Im(u/v) > 0 when needed */
    static oriented_lattice from_basis(complex u, complex v);

    complex const& u() const { return u_; }
    complex const& v() const { return v_; }
    prec_t prec() const { return u_.prec(); }
    real const& covolume() const { return covol_; }
    /* covolume / pi */
    real area_A() const;
    complex tau() const { return u_ / v_; }

    /* z = a u + b v */
    std::pair<real, real> coordinates(complex const& z) const;
    complex point(real const& a, real const& b) const;
    complex point(long m, long n) const;
    oriented_lattice scaled(complex const& lambda) const;
    oriented_lattice with_prec(prec_t p) const;
};

struct reduced_lattice {
    oriented_lattice lattice;
    /* (u_r, v_r) = m * (u, v) */
    std::array<std::array<long, 2>, 2> m;
};

/* Gauss reduction: |v| <= |u|, |Re(u/v)| <= 1/2 */
reduced_lattice reduce(oriented_lattice const& L);

}

#endif	/* HECKEL_LATTICE_HPP_ */
