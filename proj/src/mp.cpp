#include "heckel/mp.hpp"
#include "heckel/errors.hpp"

#include <cstdlib>
#include <string>

namespace heckel {

real real::from_string(std::string_view s, prec_t prec)
{
    real r(prec);
    std::string t(s);
    if (mpfr_set_str(r.v_, t.c_str(), 10, MPFR_RNDN) != 0)
        throw invalid_input("cannot parse real number '" + t + "'");
    return r;
}

std::string real::to_string(int digits) const
{
    char * buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", digits - 1, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

std::string real::to_fixed(int frac_digits) const
{
    char * buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rf", frac_digits, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    if (s.size() > 1 && s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos)
        s = s.substr(1);
    return s;
}

real pi(prec_t prec) { real r(prec); mpfr_const_pi(r.get(), MPFR_RNDN); return r; }
real log2_const(prec_t prec) { real r(prec); mpfr_const_log2(r.get(), MPFR_RNDN); return r; }
real sqrt(real const& x) { real r(x.prec()); mpfr_sqrt(r.get(), x.get(), MPFR_RNDN); return r; }
real exp(real const& x) { real r(x.prec()); mpfr_exp(r.get(), x.get(), MPFR_RNDN); return r; }
real log(real const& x) { real r(x.prec()); mpfr_log(r.get(), x.get(), MPFR_RNDN); return r; }
real sin(real const& x) { real r(x.prec()); mpfr_sin(r.get(), x.get(), MPFR_RNDN); return r; }
real cos(real const& x) { real r(x.prec()); mpfr_cos(r.get(), x.get(), MPFR_RNDN); return r; }
void sin_cos(real& s, real& c, real const& x) { mpfr_sin_cos(s.get(), c.get(), x.get(), MPFR_RNDN); }
real atan2(real const& y, real const& x) { real r(std::max(x.prec(), y.prec())); mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN); return r; }
real abs(real const& x) { real r(x.prec()); mpfr_abs(r.get(), x.get(), MPFR_RNDN); return r; }
real pow(real const& x, real const& y) { real r(std::max(x.prec(), y.prec())); mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN); return r; }
real pow(real const& x, long n) { real r(x.prec()); mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN); return r; }
real floor(real const& x) { real r(x.prec()); mpfr_floor(r.get(), x.get()); return r; }
real round(real const& x) { real r(x.prec()); mpfr_round(r.get(), x.get()); return r; }
real sinh(real const& x) { real r(x.prec()); mpfr_sinh(r.get(), x.get(), MPFR_RNDN); return r; }
real cosh(real const& x) { real r(x.prec()); mpfr_cosh(r.get(), x.get(), MPFR_RNDN); return r; }
real asinh(real const& x) { real r(x.prec()); mpfr_asinh(r.get(), x.get(), MPFR_RNDN); return r; }
real tanh(real const& x) { real r(x.prec()); mpfr_tanh(r.get(), x.get(), MPFR_RNDN); return r; }
real min(real const& a, real const& b) { return a < b ? a : b; }
real max(real const& a, real const& b) { return a < b ? b : a; }
real ldexp(long e, prec_t prec) { real r(1L, prec); mpfr_mul_2si(r.get(), r.get(), e, MPFR_RNDN); return r; }

complex& complex::operator*=(complex const& o)
{
    real a = re * o.re;
    a -= im * o.im;
    real b = re * o.im;
    b += im * o.re;
    re = std::move(a);
    im = std::move(b);
    return *this;
}

complex& complex::operator/=(complex const& o)
{
    real n = norm(o);
    real a = re * o.re;
    a += im * o.im;
    real b = im * o.re;
    b -= re * o.im;
    a /= n;
    b /= n;
    re = std::move(a);
    im = std::move(b);
    return *this;
}

std::string complex::to_string(int digits) const
{
    return re.to_string(digits) + (im.sign() < 0 ? " - " : " + ") + abs(im).to_string(digits) + "i";
}

complex conj(complex const& z) { return complex(z.re, -z.im); }
real norm(complex const& z) { real r = z.re * z.re; r += z.im * z.im; return r; }
real abs(complex const& z) { real r(z.prec()); mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN); return r; }
real arg(complex const& z) { return atan2(z.im, z.re); }

complex expi(real const& theta)
{
    real s(theta.prec()), c(theta.prec());
    sin_cos(s, c, theta);
    return complex(std::move(c), std::move(s));
}

complex e_of(real const& t)
{
    /* reduce t mod 1 first so the angle stays small */
    real f = t - round(t);
    real th = f * pi(t.prec());
    th *= 2;
    return expi(th);
}

complex exp(complex const& z)
{
    complex r = expi(z.im);
    r *= exp(z.re);
    return r;
}

complex log(complex const& z)
{
    if (z.is_zero())
        throw domain_error("log of zero");
    return complex(log(abs(z)), arg(z));
}

complex sqrt(complex const& z)
{
    if (z.is_zero())
        return z;
    real r = abs(z);
    real a = sqrt((r + z.re) / 2L);
    real b = sqrt((r - z.re) / 2L);
    if (z.im.sign() < 0)
        b = -b;
    return complex(std::move(a), std::move(b));
}

complex pow(complex const& z, complex const& w)
{
    if (z.is_zero())
        throw domain_error("complex power of zero");
    return exp(w * log(z));
}

complex pow(complex const& z, long n)
{
    prec_t p = z.prec();
    complex r(1, 0, p);
    complex b = z;
    bool neg = n < 0;
    unsigned long m = neg ? -(unsigned long) n : n;
    while (m) {
        if (m & 1)
            r *= b;
        m >>= 1;
        if (m)
            b *= b;
    }
    if (neg)
        r = complex(1, 0, p) / r;
    return r;
}

complex i_unit(prec_t prec) { return complex(0, 1, prec); }

dual exp(dual const& z)
{
    complex e = exp(z.v);
    complex d = e * z.d;
    return dual(std::move(e), std::move(d));
}

dual log(dual const& z)
{
    return dual(log(z.v), z.d / z.v);
}

dual pow(real const& x, dual const& s)
{
    if (x.sign() <= 0)
        throw domain_error("real power base must be positive");
    real lx = log(x);
    complex e = exp(s.v * lx);
    complex d = e * s.d;
    d *= lx;
    return dual(std::move(e), std::move(d));
}

}
