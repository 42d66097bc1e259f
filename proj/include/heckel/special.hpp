#ifndef HECKEL_SPECIAL_HPP_
#define HECKEL_SPECIAL_HPP_

#include "heckel/errors.hpp"
#include "heckel/mp.hpp"

#include <cmath>
#include <functional>

namespace heckel {

inline real quad_magnitude(real const& z) { return abs(z); }
inline real quad_magnitude(complex const& z) { return abs(z); }
inline real quad_magnitude(dual const& z) { return max(abs(z.v), abs(z.d)); }

/* Double-exponential (tanh-sinh) rule on [a, b] for smooth integrands.
 * Levels are refined until two successive estimates agree to about
 * half the working precision, after which the error is squared.
 */
template <class T, class F>
T tanh_sinh(F&& f, real const& a, real const& b, prec_t prec, T zero, int max_level = 12)
{
    double L = (double(prec) + 30) * M_LN2;
    double tmax = std::asinh((L + 3.0) / M_PI);
    real width = b - a;
    real halfpi = pi(prec) / 2L;
    real tol = ldexp(-long(prec * 0.55) - 4, prec);

    auto node = [&](real const& t, real& x, real& w) {
        real y = halfpi * sinh(t);
        real e = exp(-(y * 2L));
        real sig = 1L / (1L + e);
        real sig1 = e * sig;
        x = a + width * sig;
        w = width * cosh(t);
        w *= halfpi;
        w *= 2L;
        w *= sig;
        w *= sig1;
    };

    T sum = zero;
    real abssum(0L, prec);
    real h(0.5, prec);
    real x(prec), w(prec);
    long nmax = long(std::ceil(tmax / 0.5));
    for (long n = -nmax; n <= nmax; n++) {
        real t = h * n;
        node(t, x, w);
        T fx = f(x);
        fx *= w;
        abssum += quad_magnitude(fx);
        sum += fx;
    }
    T est = sum;
    est *= h;
    for (int level = 1; level <= max_level; level++) {
        h /= 2L;
        long nm = long(std::ceil(tmax / h.to_double()));
        for (long n = -nm; n <= nm; n++) {
            if ((n & 1) == 0)
                continue;
            real t = h * n;
            node(t, x, w);
            T fx = f(x);
            fx *= w;
            abssum += quad_magnitude(fx);
            sum += fx;
        }
        T next = sum;
        next *= h;
        T diff = next;
        diff -= est;
        est = std::move(next);
        real scale = max(quad_magnitude(est), abssum * h);
        if (level >= 3 && quad_magnitude(diff) <= tol * scale)
            return est;
    }
    throw precision_loss("tanh-sinh quadrature did not converge");
}

/* Gamma(s, x) for x > 0; throws precision_loss when the configured
 * continued-fraction depth or quadrature level does not reach prec. */
complex upper_incomplete_gamma(complex const& s, real const& x);
/* value and d/ds */
dual upper_incomplete_gamma(dual const& s, real const& x);

/* 1/Gamma(s) and its derivative, entire */
dual rgamma(dual const& s);
complex rgamma(complex const& s);

}

#endif	/* HECKEL_SPECIAL_HPP_ */
