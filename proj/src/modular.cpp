#include "heckel/modular.hpp"
#include "heckel/errors.hpp"

namespace heckel {

namespace {

const prec_t guard = 32;
const long max_terms = 1000000;

void check_upper(complex const& tau)
{
    if (tau.im.sign() <= 0)
        throw domain_error("tau must lie in the upper half plane");
}

/* (1/(2 pi i)) (e(z/2) - e(-z/2)) prod (1 - q^n e(z))(1 - q^n/e(z)) / (1 - q^n)^2 */
complex sigma_core(complex const& z, complex const& q)
{
    prec_t p = z.prec();
    real twopi = pi(p) * 2L;
    complex ipi = i_unit(p) * (twopi / 2L);
    complex h = exp(ipi * z);
    complex hinv = complex(1, 0, p) / h;
    complex u = h * h;
    complex uinv = hinv * hinv;
    complex r = h - hinv;
    r /= i_unit(p) * twopi;
    real eps = ldexp(-long(p) - 8, p);
    real big = max(abs(u), abs(uinv));
    complex qn = q;
    complex one(1, 0, p);
    for (long n = 1; n < max_terms; n++) {
        complex f = (one - qn * u) * (one - qn * uinv);
        complex g = one - qn;
        f /= g * g;
        r *= f;
        if (abs(qn) * big < eps && abs(qn) < eps)
            return r;
        qn *= q;
    }
    throw precision_loss("sigma product did not converge");
}

}

complex delta_q_product(complex const& tau)
{
    check_upper(tau);
    prec_t p = tau.prec();
    prec_t wp = p + guard;
    complex t(tau, wp);
    complex q = e_of(t.re);
    q *= exp(-(pi(wp) * 2L) * t.im);
    complex prod(1, 0, wp);
    complex qn = q;
    complex one(1, 0, wp);
    real eps = ldexp(-long(wp) - 8, wp);
    long n = 1;
    for (; n < max_terms; n++) {
        prod *= one - qn;
        if (abs(qn) < eps)
            break;
        qn *= q;
    }
    if (n == max_terms)
        throw precision_loss("eta product did not converge");
    complex r = pow(prod, 24L);
    r *= q;
    return complex(r, p);
}

complex eisenstein_e2(complex const& tau)
{
    check_upper(tau);
    prec_t p = tau.prec();
    prec_t wp = p + guard;
    complex t(tau, wp);
    complex q = e_of(t.re);
    q *= exp(-(pi(wp) * 2L) * t.im);
    complex s(wp);
    complex qn = q;
    complex one(1, 0, wp);
    real eps = ldexp(-long(wp) - 8, wp);
    for (long n = 1; n < max_terms; n++) {
        complex term = qn * n;
        term /= one - qn;
        s += term;
        if (abs(term) < eps)
            return complex(one - s * 24L, p);
        qn *= q;
    }
    throw precision_loss("E2 series did not converge");
}

complex ramanujan_delta(oriented_lattice const& L)
{
    prec_t p = L.prec();
    oriented_lattice W = L.with_prec(p + guard);
    reduced_lattice R = reduce(W);
    complex const& v = R.lattice.v();
    complex d = delta_q_product(R.lattice.tau());
    d /= pow(v, 12L);
    return complex(d, p);
}

sigma_data sigma_and_quasiperiods(complex const& z, oriented_lattice const& L)
{
    prec_t p = std::max(L.prec(), z.prec());
    prec_t wp = p + guard;
    reduced_lattice R = reduce(L.with_prec(wp));
    complex const& v = R.lattice.v();
    complex tau = R.lattice.tau();
    real pw = pi(wp);
    complex q = e_of(tau.re);
    q *= exp(-(pw * 2L) * tau.im);
    complex e2 = eisenstein_e2(tau);
    complex eta1 = e2 * (pw * pw / 3L);
    complex twopii = i_unit(wp) * (pw * 2L);
    complex zr = complex(z, wp) / v;
    complex s = sigma_core(zr, q);
    s *= exp(eta1 * zr * zr / 2L);
    s *= v;
    complex eta_vr = eta1 / v;
    complex eta_ur = (tau * eta1 - twopii) / v;
    /* (u, v) = m^{-1} (u_r, v_r), det m = 1 */
    auto const& m = R.m;
    complex eta_u = eta_ur * m[1][1] - eta_vr * m[0][1];
    complex eta_v = eta_vr * m[0][0] - eta_ur * m[1][0];
    return sigma_data{complex(s, p), complex(eta_u, p), complex(eta_v, p)};
}

complex theta_function(complex const& z, oriented_lattice const& L)
{
    prec_t p = std::max(L.prec(), z.prec());
    prec_t wp = p + guard;
    reduced_lattice R = reduce(L.with_prec(wp));
    complex const& v = R.lattice.v();
    complex tau = R.lattice.tau();
    real pw = pi(wp);
    complex q = e_of(tau.re);
    q *= exp(-(pw * 2L) * tau.im);
    complex zr = complex(z, wp) / v;
    /* zr = a tau + b */
    real a = zr.im / tau.im;
    complex s = sigma_core(zr, q);
    complex d = delta_q_product(tau);
    d *= pow(pw * 2L, 12L);
    complex ph = i_unit(wp) * (pw * a * 12L);
    complex r = d * exp(ph * zr);
    r *= pow(s, 12L);
    return complex(r, p);
}

}
