#ifndef HECKEL_RATIONAL_HPP_
#define HECKEL_RATIONAL_HPP_

#include <gmpxx.h>

#include <string>
#include <vector>

namespace heckel {

typedef mpq_class rational;

/* dense polynomial over Q, coefficients in increasing degree */
class rational_poly {
    std::vector<rational> c_;
    void trim();
  public:
    rational_poly() = default;
    explicit rational_poly(std::vector<rational> c) : c_(std::move(c)) { trim(); }
    static rational_poly constant(rational const& a) { return rational_poly({a}); }
    static rational_poly monomial(int k, rational const& a = 1);

    /* -1 for the zero polynomial */
    int degree() const { return int(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    rational coeff(int k) const { return k >= 0 && k < int(c_.size()) ? c_[k] : rational(0); }
    std::vector<rational> const& coeffs() const { return c_; }

    rational operator()(rational const& x) const;
    rational_poly derivative() const;
    /* p(a x + b) */
    rational_poly compose_affine(rational const& a, rational const& b) const;

    rational_poly& operator+=(rational_poly const& o);
    rational_poly& operator-=(rational_poly const& o);
    rational_poly& operator*=(rational const& a);
    friend rational_poly operator+(rational_poly a, rational_poly const& b) { a += b; return a; }
    friend rational_poly operator-(rational_poly a, rational_poly const& b) { a -= b; return a; }
    friend rational_poly operator*(rational_poly const& a, rational_poly const& b);
    friend rational_poly operator*(rational_poly a, rational const& b) { a *= b; return a; }
    friend rational_poly operator*(rational const& b, rational_poly a) { a *= b; return a; }
    friend bool operator==(rational_poly const& a, rational_poly const& b) { return a.c_ == b.c_; }

    std::string to_string(std::string const& var = "x") const;
};

/* n/d in lowest terms */
inline rational ratio(long n, long d)
{
    rational r(n, d);
    r.canonicalize();
    return r;
}

/* B_n with B_1 = -1/2 */
rational bernoulli_number(int n);
/* B_k(x), monic of degree k */
rational_poly bernoulli_poly(int k);

rational binomial(long n, long k);
rational factorial(long n);

/* fractional part {x} in [0, 1) */
rational frac(rational const& x);

}

#endif	/* HECKEL_RATIONAL_HPP_ */
