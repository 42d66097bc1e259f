#ifndef HECKEL_MP_HPP_
#define HECKEL_MP_HPP_

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <string>
#include <string_view>
#include <utility>

namespace heckel {

typedef mpfr_prec_t prec_t;

class real {
    mpfr_t v_;
  public:
    explicit real(prec_t prec = 64) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    real(long x, prec_t prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, x, MPFR_RNDN); }
    real(int x, prec_t prec) : real(long(x), prec) {}
    real(double x, prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
    real(mpq_class const& q, prec_t prec) { mpfr_init2(v_, prec); mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
    real(mpz_class const& z, prec_t prec) { mpfr_init2(v_, prec); mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
    real(real const& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    real(real const& o, prec_t prec) { mpfr_init2(v_, prec); mpfr_set(v_, o.v_, MPFR_RNDN); }
    real(real&& o) noexcept { mpfr_init2(v_, MPFR_PREC_MIN); mpfr_swap(v_, o.v_); }
    ~real() { mpfr_clear(v_); }

    real& operator=(real const& o) {
        if (this != &o) {
            if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_))
                mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    real& operator=(real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }

    static real from_string(std::string_view s, prec_t prec);

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    prec_t prec() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long_round() const { return mpfr_get_si(v_, MPFR_RNDN); }
    long exponent() const { return mpfr_zero_p(v_) ? MPFR_EMIN_MIN : mpfr_get_exp(v_); }
    bool is_zero() const { return mpfr_zero_p(v_); }
    bool is_finite() const { return mpfr_number_p(v_); }
    int sign() const { return mpfr_sgn(v_); }

    /* digits significant digits, scientific notation */
    std::string to_string(int digits = 20) const;
    /* fixed notation with the given number of fractional digits */
    std::string to_fixed(int frac_digits) const;

    real& operator+=(real const& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    real& operator-=(real const& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    real& operator*=(real const& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    real& operator/=(real const& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
    real& operator+=(long o) { mpfr_add_si(v_, v_, o, MPFR_RNDN); return *this; }
    real& operator-=(long o) { mpfr_sub_si(v_, v_, o, MPFR_RNDN); return *this; }
    real& operator*=(long o) { mpfr_mul_si(v_, v_, o, MPFR_RNDN); return *this; }
    real& operator/=(long o) { mpfr_div_si(v_, v_, o, MPFR_RNDN); return *this; }
    real operator-() const { real r(*this); mpfr_neg(r.v_, r.v_, MPFR_RNDN); return r; }

    friend real operator+(real const& a, real const& b) { real r(std::max(a.prec(), b.prec())); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend real operator-(real const& a, real const& b) { real r(std::max(a.prec(), b.prec())); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend real operator*(real const& a, real const& b) { real r(std::max(a.prec(), b.prec())); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend real operator/(real const& a, real const& b) { real r(std::max(a.prec(), b.prec())); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend real operator+(real a, long b) { a += b; return a; }
    friend real operator-(real a, long b) { a -= b; return a; }
    friend real operator*(real a, long b) { a *= b; return a; }
    friend real operator/(real a, long b) { a /= b; return a; }
    friend real operator+(long b, real a) { a += b; return a; }
    friend real operator-(long b, real const& a) { real r(a.prec()); mpfr_si_sub(r.v_, b, a.v_, MPFR_RNDN); return r; }
    friend real operator*(long b, real a) { a *= b; return a; }
    friend real operator/(long b, real const& a) { real r(a.prec()); mpfr_si_div(r.v_, b, a.v_, MPFR_RNDN); return r; }

    friend bool operator<(real const& a, real const& b) { return mpfr_less_p(a.v_, b.v_); }
    friend bool operator>(real const& a, real const& b) { return mpfr_greater_p(a.v_, b.v_); }
    friend bool operator<=(real const& a, real const& b) { return mpfr_lessequal_p(a.v_, b.v_); }
    friend bool operator>=(real const& a, real const& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
    friend bool operator==(real const& a, real const& b) { return mpfr_equal_p(a.v_, b.v_); }
    friend bool operator<(real const& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
    friend bool operator>(real const& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
    friend bool operator<=(real const& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
    friend bool operator>=(real const& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }
};

real pi(prec_t prec);
real log2_const(prec_t prec);
real sqrt(real const& x);
real exp(real const& x);
real log(real const& x);
real sin(real const& x);
real cos(real const& x);
void sin_cos(real& s, real& c, real const& x);
real atan2(real const& y, real const& x);
real abs(real const& x);
real pow(real const& x, real const& y);
real pow(real const& x, long n);
real floor(real const& x);
real round(real const& x);
real sinh(real const& x);
real cosh(real const& x);
real asinh(real const& x);
real tanh(real const& x);
real min(real const& a, real const& b);
real max(real const& a, real const& b);
/* 2^e */
real ldexp(long e, prec_t prec);

struct complex {
    real re, im;
    explicit complex(prec_t prec = 64) : re(prec), im(prec) {}
    complex(real r, real i) : re(std::move(r)), im(std::move(i)) {}
    explicit complex(real r) : re(r), im(r.prec()) {}
    complex(long r, long i, prec_t prec) : re(r, prec), im(i, prec) {}
    complex(complex const& o, prec_t prec) : re(o.re, prec), im(o.im, prec) {}
    complex(complex const&) = default;
    complex(complex&&) noexcept = default;
    complex& operator=(complex const&) = default;
    complex& operator=(complex&&) noexcept = default;

    prec_t prec() const { return std::max(re.prec(), im.prec()); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    complex& operator+=(complex const& o) { re += o.re; im += o.im; return *this; }
    complex& operator-=(complex const& o) { re -= o.re; im -= o.im; return *this; }
    complex& operator*=(complex const& o);
    complex& operator/=(complex const& o);
    complex& operator+=(real const& o) { re += o; return *this; }
    complex& operator-=(real const& o) { re -= o; return *this; }
    complex& operator*=(real const& o) { re *= o; im *= o; return *this; }
    complex& operator/=(real const& o) { re /= o; im /= o; return *this; }
    complex& operator*=(long o) { re *= o; im *= o; return *this; }
    complex& operator/=(long o) { re /= o; im /= o; return *this; }
    complex operator-() const { return complex(-re, -im); }

    friend complex operator+(complex a, complex const& b) { a += b; return a; }
    friend complex operator-(complex a, complex const& b) { a -= b; return a; }
    friend complex operator*(complex a, complex const& b) { a *= b; return a; }
    friend complex operator/(complex a, complex const& b) { a /= b; return a; }
    friend complex operator+(complex a, real const& b) { a += b; return a; }
    friend complex operator-(complex a, real const& b) { a -= b; return a; }
    friend complex operator*(complex a, real const& b) { a *= b; return a; }
    friend complex operator/(complex a, real const& b) { a /= b; return a; }
    friend complex operator*(real const& b, complex a) { a *= b; return a; }
    friend complex operator*(complex a, long b) { a *= b; return a; }
    friend complex operator*(long b, complex a) { a *= b; return a; }
    friend complex operator/(complex a, long b) { a /= b; return a; }

    std::string to_string(int digits = 20) const;
};

complex conj(complex const& z);
real norm(complex const& z);          /* |z|^2 */
real abs(complex const& z);
real arg(complex const& z);
complex exp(complex const& z);
complex log(complex const& z);
complex sqrt(complex const& z);
complex pow(complex const& z, complex const& w);
complex pow(complex const& z, long n);
/* exp(i theta) */
complex expi(real const& theta);
/* exp(2 pi i t) */
complex e_of(real const& t);
complex i_unit(prec_t prec);

/* value and first derivative in s, carried through the analytic formulas */
struct dual {
    complex v, d;
    explicit dual(prec_t prec = 64) : v(prec), d(prec) {}
    dual(complex a, complex b) : v(std::move(a)), d(std::move(b)) {}
    static dual variable(complex s) { prec_t p = s.prec(); return dual(std::move(s), complex(1, 0, p)); }
    static dual constant(complex s) { prec_t p = s.prec(); return dual(std::move(s), complex(p)); }

    dual& operator+=(dual const& o) { v += o.v; d += o.d; return *this; }
    dual& operator-=(dual const& o) { v -= o.v; d -= o.d; return *this; }
    dual& operator*=(dual const& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
    dual& operator/=(dual const& o) { d = (d * o.v - v * o.d) / (o.v * o.v); v /= o.v; return *this; }
    dual& operator*=(complex const& o) { v *= o; d *= o; return *this; }
    dual& operator*=(real const& o) { v *= o; d *= o; return *this; }
    dual& operator+=(complex const& o) { v += o; return *this; }
    dual operator-() const { return dual(-v, -d); }

    friend dual operator+(dual a, dual const& b) { a += b; return a; }
    friend dual operator-(dual a, dual const& b) { a -= b; return a; }
    friend dual operator*(dual a, dual const& b) { a *= b; return a; }
    friend dual operator/(dual a, dual const& b) { a /= b; return a; }
    friend dual operator*(dual a, complex const& b) { a *= b; return a; }
    friend dual operator*(dual a, real const& b) { a *= b; return a; }
    friend dual operator+(dual a, complex const& b) { a += b; return a; }
};

dual exp(dual const& z);
dual log(dual const& z);
/* x^s for positive real x */
dual pow(real const& x, dual const& s);

}

#endif	/* HECKEL_MP_HPP_ */
