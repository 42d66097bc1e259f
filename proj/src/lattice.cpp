#include "heckel/lattice.hpp"
#include "heckel/errors.hpp"

namespace heckel {

namespace {
real cross(complex const& u, complex const& v)
{
    /* Im(conj(u) v) */
    real r = u.re * v.im;
    r -= u.im * v.re;
    return r;
}
}

oriented_lattice::oriented_lattice(complex u, complex v)
    : u_(std::move(u)), v_(std::move(v)), covol_(1)
{
    /* Im(u/v) has the sign of Im(u conj v) = -Im(conj(u) v) */
    real c = cross(u_, v_);
    real scale = norm(u_) + norm(v_);
    if (abs(c) <= scale * ldexp(-long(prec()) / 2, prec()))
        throw domain_error("degenerate lattice basis");
    if (c.sign() > 0)
        throw domain_error("lattice basis is not oriented: Im(u/v) < 0");
    covol_ = abs(c);
}

oriented_lattice oriented_lattice::from_basis(complex u, complex v)
{
    if (cross(u, v).sign() > 0)
        std::swap(u, v);
    return oriented_lattice(std::move(u), std::move(v));
}

real oriented_lattice::area_A() const
{
    return covol_ / pi(prec());
}

std::pair<real, real> oriented_lattice::coordinates(complex const& z) const
{
    real den = cross(u_, v_);
    real a = -cross(v_, z) / den;
    real b = cross(u_, z) / den;
    return {std::move(a), std::move(b)};
}

complex oriented_lattice::point(real const& a, real const& b) const
{
    complex r = u_ * a;
    r += v_ * b;
    return r;
}

complex oriented_lattice::point(long m, long n) const
{
    complex r = u_ * m;
    r += v_ * n;
    return r;
}

oriented_lattice oriented_lattice::scaled(complex const& lambda) const
{
    return oriented_lattice(u_ * lambda, v_ * lambda);
}

oriented_lattice oriented_lattice::with_prec(prec_t p) const
{
    return oriented_lattice(complex(u_, p), complex(v_, p));
}

reduced_lattice reduce(oriented_lattice const& L)
{
    complex u = L.u(), v = L.v();
    long m00 = 1, m01 = 0, m10 = 0, m11 = 1;
    for (int it = 0; it < 10000; it++) {
        real mu = round((u.re * v.re + u.im * v.im) / norm(v));
        long k = mu.to_long_round();
        if (k != 0) {
            u -= v * k;
            m00 -= k * m10;
            m01 -= k * m11;
        }
        if (norm(u) < norm(v)) {
            /* (u, v) <- (-v, u) keeps the orientation */
            complex nu = -v;
            v = std::move(u);
            u = std::move(nu);
            long a = m00, b = m01;
            m00 = -m10; m01 = -m11;
            m10 = a; m11 = b;
            continue;
        }
        if (k == 0)
            break;
    }
    reduced_lattice r{oriented_lattice(std::move(u), std::move(v)), {{{m00, m01}, {m10, m11}}}};
    return r;
}

}
