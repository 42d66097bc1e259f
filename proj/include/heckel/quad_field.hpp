#ifndef HECKEL_QUAD_FIELD_HPP_
#define HECKEL_QUAD_FIELD_HPP_

#include "heckel/abelian.hpp"
#include "heckel/lattice.hpp"
#include "heckel/mp.hpp"
#include "heckel/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace heckel {

/* K = Q(sqrt d), integral basis 1, w = (d + sqrt d)/2, sqrt d -> i sqrt|d| */
struct quad_field {
    long d = -4;
    int w = 4;
    long wnorm = 5;             /* N(w) = (d^2 - d)/4, w^2 = d w - wnorm */

    static quad_field make(long d);
    complex omega(prec_t prec) const;
    real covolume(prec_t prec) const;         /* of O_K: sqrt|d|/2 */
    friend bool operator==(quad_field const& a, quad_field const& b) { return a.d == b.d; }
};

bool is_fundamental_discriminant(long d, std::string* why = nullptr);

/* x + y w */
struct field_element {
    long d = -4;
    rational x, y;

    field_element() = default;
    field_element(long d_, rational x_, rational y_) : d(d_), x(std::move(x_)), y(std::move(y_)) {}
    static field_element integer(long d, long n) { return field_element(d, n, 0); }
    static field_element omega(long d) { return field_element(d, 0, 1); }

    bool is_zero() const { return x == 0 && y == 0; }
    bool is_integral() const;
    field_element conj() const;
    rational norm() const;
    rational trace() const;
    field_element inverse() const;
    complex to_complex(prec_t prec) const;
    std::string to_string() const;

    field_element operator-() const { return field_element(d, -x, -y); }
    friend field_element operator+(field_element const& a, field_element const& b) { return field_element(a.d, a.x + b.x, a.y + b.y); }
    friend field_element operator-(field_element const& a, field_element const& b) { return field_element(a.d, a.x - b.x, a.y - b.y); }
    friend field_element operator*(field_element const& a, field_element const& b);
    friend field_element operator/(field_element const& a, field_element const& b) { return a * b.inverse(); }
    friend field_element operator*(field_element const& a, rational const& q) { return field_element(a.d, a.x * q, a.y * q); }
    friend bool operator==(field_element const& a, field_element const& b) { return a.d == b.d && a.x == b.x && a.y == b.y; }
};

/* (1/den) (a Z + (b + c w) Z), canonical: c | a, c | b, 0 <= b < a,
 * gcd(den, content) = 1 */
class ideal {
    long d_ = -4;
    long a_ = 1, b_ = 0, c_ = 1, den_ = 1;
  public:
    ideal() = default;
    static ideal unit(long d) { ideal I; I.d_ = d; return I; }
    static ideal from_hnf(long d, long a, long b, long c, long den = 1);
    static ideal from_generators(long d, std::vector<field_element> const& gens);
    static ideal principal(field_element const& g);
    static ideal integer(long d, long n) { return principal(field_element::integer(d, n)); }

    long disc() const { return d_; }
    long a() const { return a_; }
    long b() const { return b_; }
    long c() const { return c_; }
    long den() const { return den_; }
    bool is_integral() const { return den_ == 1; }
    bool is_unit() const { return a_ == 1 && c_ == 1 && den_ == 1; }
    rational norm() const { rational r(a_ * c_, den_ * den_); r.canonicalize(); return r; }
    /* norm of an integral ideal */
    long inorm() const;
    /* Z-basis {a/den, (b + c w)/den} */
    std::pair<field_element, field_element> basis() const;

    bool contains(field_element const& x) const;
    /* I | J  for integral I, J, i.e. J subset I */
    bool divides(ideal const& J) const;
    ideal conj() const;
    ideal inverse() const;
    friend ideal operator*(ideal const& I, ideal const& J);
    friend ideal operator/(ideal const& I, ideal const& J) { return I * J.inverse(); }
    friend ideal operator+(ideal const& I, ideal const& J);      /* gcd */
    ideal pow(long e) const;
    friend bool operator==(ideal const& I, ideal const& J)
    {
        return I.d_ == J.d_ && I.a_ == J.a_ && I.b_ == J.b_ && I.c_ == J.c_ && I.den_ == J.den_;
    }
    friend bool operator!=(ideal const& I, ideal const& J) { return !(I == J); }
    friend bool operator<(ideal const& I, ideal const& J);

    std::string to_string() const;
};

enum class splitting { split, inert, ramified };

struct prime_decomposition {
    long p;
    splitting type;
    std::vector<ideal> primes;
};

prime_decomposition factor_rational_prime(quad_field const& K, long p);
bool is_prime_l(long n);
std::vector<std::pair<long, int> > factor_integer(long n);

/* prime ideal factorization of a nonzero fractional ideal */
std::vector<std::pair<ideal, int> > factor(ideal const& I);
int valuation(ideal const& I, ideal const& P);
int valuation(field_element const& x, ideal const& P);
bool coprime(ideal const& I, ideal const& J);

/* generator when I is principal */
std::optional<field_element> principal_generator(ideal const& I);

/* reduced exact basis (u, v), Im(u/v) > 0 */
std::pair<field_element, field_element> reduced_basis(ideal const& I);
oriented_lattice oriented_basis(ideal const& I, prec_t prec);

field_element idele_approximation(ideal const& f);

/* all integral ideals of norm n */
std::vector<ideal> ideals_of_norm(long d, long n);

/* units of O_K as field elements, generated by the first */
std::vector<field_element> roots_of_unity(quad_field const& K);

/* binary quadratic form a x^2 + b x y + c y^2 of discriminant b^2 - 4ac */
struct qform {
    long a, b, c;
    friend bool operator<(qform const& f, qform const& g)
    {
        if (f.a != g.a) return f.a < g.a;
        if (f.b != g.b) return f.b < g.b;
        return f.c < g.c;
    }
    friend bool operator==(qform const& f, qform const& g) { return f.a == g.a && f.b == g.b && f.c == g.c; }
};

qform reduce_form(qform f);
qform form_of_ideal(ideal const& I);
ideal ideal_of_form(long d, qform const& f);
std::vector<qform> reduced_forms(long d);

struct class_group_data {
    quad_field K;
    std::vector<qform> forms;
    std::map<qform, size_t> index;
    enumerated_group G;

    long order() const { return long(forms.size()); }
    size_t class_index(ideal const& I) const;
    std::vector<long> dlog(ideal const& I) const { return G.dlog(class_index(I)); }
    ideal representative(size_t idx) const { return ideal_of_form(K.d, forms[idx]); }
};

class_group_data class_group(quad_field const& K, long disc_bound = 1000000);

/* "(x+y*w)", "(3)", "[a,b,c]", juxtaposed literals multiply */
ideal parse_ideal(long d, std::string const& lit);
field_element parse_element(long d, std::string const& lit);

}

#endif	/* HECKEL_QUAD_FIELD_HPP_ */
