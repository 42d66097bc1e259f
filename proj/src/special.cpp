#include "heckel/special.hpp"
#include "heckel/errors.hpp"
#include "heckel/rational.hpp"

#include <cmath>

namespace heckel {

namespace {

dual with_prec(dual const& z, prec_t p)
{
    return dual(complex(z.v, p), complex(z.d, p));
}

const double gamma_cf_threshold = 2.0;
const long gamma_cf_max_iter = 100000;

/* Legendre continued fraction, modified Lentz */
dual gamma_cf(dual const& s, real const& x)
{
    prec_t p = s.v.prec();
    real eps = ldexp(-long(p) - 4, p);
    real tiny = ldexp(-long(p) * 8, p);
    complex one(1, 0, p);
    auto b_of = [&](long n) {
        complex v = complex(x + (2 * n + 1), real(p)) - s.v;
        return dual(std::move(v), -s.d);
    };
    dual f = b_of(0);
    if (f.v.is_zero())
        f.v = complex(tiny);
    dual C = f;
    dual D(p);
    bool converged = false;
    for (long n = 1; n < gamma_cf_max_iter; n++) {
        complex av = (s.v - complex(real(n, p))) * n;
        dual a(std::move(av), s.d * n);
        dual b = b_of(n);
        D = b + a * D;
        if (D.v.is_zero())
            D.v = complex(tiny);
        D = dual(one, complex(p)) / D;
        C = b + a / C;
        if (C.v.is_zero())
            C.v = complex(tiny);
        dual delta = C * D;
        f *= delta;
        real err = abs(delta.v - one) + abs(delta.d);
        if (err < eps) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw precision_loss("incomplete gamma continued fraction exceeded its depth");
    dual r = pow(x, s);
    r *= exp(-x);
    return r / f;
}

/* x^s * int_0^oo exp(s w - x e^w) dw, differentiated under the integral */
dual gamma_quad(dual const& s, real const& x)
{
    prec_t p = s.v.prec();
    double sig = std::max(0.0, s.v.re.to_double());
    double xd = x.to_double();
    double L = (double(p) + 30) * M_LN2;
    double peak = sig > xd ? sig * std::log(sig / xd) - sig : 0.0;
    double W = 1.0;
    while (xd * std::exp(W) - sig * W < L + peak + 10)
        W += 0.25;
    real a(0L, p), b(W, p);
    auto f = [&](real const& w) {
        complex e = s.v * w;
        e -= x * exp(w);
        complex v = exp(e);
        complex d = v * w;
        return dual(std::move(v), std::move(d));
    };
    dual I = tanh_sinh(f, a, b, p, dual(p), 16);
    /* I.v = int f, I.d = int w f; chain through s.d */
    real lx = log(x);
    complex xs = exp(s.v * lx);
    complex val = xs * I.v;
    complex der = val * lx;
    der += xs * I.d;
    der *= s.d;
    return dual(std::move(val), std::move(der));
}

}

dual upper_incomplete_gamma(dual const& s, real const& x)
{
    if (x.sign() <= 0)
        throw domain_error("upper incomplete gamma requires x > 0");
    prec_t p = std::max(s.v.prec(), x.prec());
    prec_t wp = p + 24;
    dual sw = with_prec(s, wp);
    real xw(x, wp);
    dual r = x.to_double() >= gamma_cf_threshold ? gamma_cf(sw, xw) : gamma_quad(sw, xw);
    return with_prec(r, p);
}

complex upper_incomplete_gamma(complex const& s, real const& x)
{
    return upper_incomplete_gamma(dual::variable(s), x).v;
}

dual rgamma(dual const& s)
{
    prec_t p = s.v.prec();
    prec_t wp = p + 24;
    dual sw = with_prec(s, wp);
    long shift = std::max(0L, long(std::ceil(0.12 * double(wp) + 4 - s.v.re.to_double())));
    dual prod(complex(1, 0, wp), complex(wp));
    for (long k = 0; k < shift; k++) {
        dual t = sw;
        t.v += real(k, wp);
        prod *= t;
    }
    dual z = sw;
    z.v += real(shift, wp);

    dual lz = log(z);
    dual half(complex(real(0.5, wp)), complex(wp));
    dual lg = (z - half) * lz - z;
    real l2pi = log(pi(wp) * 2L) / 2L;
    lg.v += l2pi;
    dual zinv = dual(complex(1, 0, wp), complex(wp)) / z;
    dual zinv2 = zinv * zinv;
    dual pk = zinv;
    real eps = ldexp(-long(wp) - 8, wp);
    for (int k = 1; k < 400; k++) {
        rational c = bernoulli_number(2 * k) / rational(2 * k * (2 * k - 1));
        dual term = pk * real(c, wp);
        lg += term;
        if (quad_magnitude(term) < eps * (1L + quad_magnitude(lg)))
            break;
        pk *= zinv2;
    }
    dual r = prod * exp(-lg);
    return with_prec(r, p);
}

complex rgamma(complex const& s)
{
    return rgamma(dual::constant(s)).v;
}

}
