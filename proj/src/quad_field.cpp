#include "heckel/quad_field.hpp"
#include "heckel/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace heckel {

typedef __int128 i128;

namespace {

i128 abs128(i128 a) { return a < 0 ? -a : a; }

i128 gcd128(i128 a, i128 b)
{
    a = abs128(a);
    b = abs128(b);
    while (b) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i128 ext_gcd128(i128 a, i128 b, i128& s, i128& t)
{
    i128 s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (b) {
        i128 q = a / b;
        i128 r = a - q * b;
        a = b; b = r;
        i128 ns = s0 - q * s1; s0 = s1; s1 = ns;
        i128 nt = t0 - q * t1; t0 = t1; t1 = nt;
    }
    if (a < 0) {
        a = -a; s0 = -s0; t0 = -t0;
    }
    s = s0;
    t = t0;
    return a;
}

i128 mod128(i128 a, i128 m)
{
    i128 r = a % m;
    return r < 0 ? r + m : r;
}

long narrow(i128 v)
{
    if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
        throw bound_exceeded("integer overflow in ideal arithmetic");
    return long(v);
}

/* HNF {(a,0), (b,c)} of a Z-submodule of Z^2 */
struct hnf2 {
    i128 a = 0, b = 0, c = 0;
    void add(i128 x, i128 y)
    {
        if (y == 0 && c == 0) {
            a = gcd128(a, x);
        } else {
            i128 s, t;
            i128 g = ext_gcd128(c, y, s, t);
            i128 left = (y / g) * b - (c / g) * x;
            i128 nb = s * b + t * x;
            c = g;
            b = nb;
            a = gcd128(a, left);
        }
        if (a != 0)
            b = mod128(b, a);
    }
};

long wnorm_of(long d) { return (d * d - d) / 4; }

/* (x1 + y1 w)(x2 + y2 w) over Z */
void mul_int(long d, i128 x1, i128 y1, i128 x2, i128 y2, i128& x, i128& y)
{
    i128 n = wnorm_of(d);
    x = x1 * x2 - n * y1 * y2;
    y = x1 * y2 + x2 * y1 + i128(d) * y1 * y2;
}

i128 norm_int(long d, i128 x, i128 y)
{
    return x * x + i128(d) * x * y + i128(wnorm_of(d)) * y * y;
}

mpz_class lcm_den(std::vector<field_element> const& gens)
{
    mpz_class D = 1;
    for (auto const& g : gens) {
        mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), g.x.get_den_mpz_t());
        mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), g.y.get_den_mpz_t());
    }
    return D;
}

long to_long(mpz_class const& z)
{
    if (!z.fits_slong_p())
        throw bound_exceeded("integer overflow in ideal arithmetic");
    return z.get_si();
}

}

bool is_fundamental_discriminant(long d, std::string* why)
{
    auto fail = [&](std::string const& s) {
        if (why)
            *why = s;
        return false;
    };
    auto squarefree = [](long m) {
        m = std::labs(m);
        for (long p = 2; p * p <= m; p++)
            if (m % (p * p) == 0)
                return false;
        return true;
    };
    if (d >= 0)
        return fail("discriminant must be negative");
    long r = mod_l(d, 4);
    if (r == 1) {
        if (!squarefree(d))
            return fail("d = 1 mod 4 but d is not squarefree");
        return true;
    }
    if (r == 0) {
        long m = d / 4;
        long rm = mod_l(m, 4);
        if (rm != 2 && rm != 3)
            return fail("d = 4m requires m = 2 or 3 mod 4");
        if (!squarefree(m))
            return fail("d = 4m requires m squarefree");
        return true;
    }
    return fail("d must be 0 or 1 mod 4");
}

quad_field quad_field::make(long d)
{
    std::string why;
    if (!is_fundamental_discriminant(d, &why))
        throw invalid_input("not a negative fundamental discriminant (" + std::to_string(d) + "): " + why);
    quad_field K;
    K.d = d;
    K.w = d == -4 ? 4 : d == -3 ? 6 : 2;
    K.wnorm = wnorm_of(d);
    return K;
}

complex quad_field::omega(prec_t prec) const
{
    real s = sqrt(real(-d, prec));
    return complex(real(d, prec) / 2L, s / 2L);
}

real quad_field::covolume(prec_t prec) const
{
    return sqrt(real(-d, prec)) / 2L;
}

field_element operator*(field_element const& a, field_element const& b)
{
    rational n = wnorm_of(a.d);
    rational x = a.x * b.x - n * a.y * b.y;
    rational y = a.x * b.y + b.x * a.y + rational(a.d) * a.y * b.y;
    return field_element(a.d, std::move(x), std::move(y));
}

bool field_element::is_integral() const
{
    return x.get_den() == 1 && y.get_den() == 1;
}

field_element field_element::conj() const
{
    return field_element(d, x + y * d, -y);
}

rational field_element::norm() const
{
    return x * x + rational(d) * x * y + rational(wnorm_of(d)) * y * y;
}

rational field_element::trace() const
{
    return 2 * x + rational(d) * y;
}

field_element field_element::inverse() const
{
    rational n = norm();
    if (n == 0)
        throw domain_error("inverse of zero field element");
    field_element c = conj();
    return field_element(d, c.x / n, c.y / n);
}

complex field_element::to_complex(prec_t prec) const
{
    real s = sqrt(real(-d, prec));
    real yy(y, prec);
    real re = real(x, prec) + yy * real(d, prec) / 2L;
    real im = yy * s / 2L;
    return complex(std::move(re), std::move(im));
}

std::string field_element::to_string() const
{
    std::ostringstream os;
    if (y == 0) {
        os << x.get_str();
    } else {
        if (x != 0)
            os << x.get_str() << (y > 0 ? "+" : "-");
        else if (y < 0)
            os << "-";
        rational ay = abs(y);
        if (ay != 1)
            os << ay.get_str() << "*";
        os << "w";
    }
    return os.str();
}

ideal ideal::from_hnf(long d, long a, long b, long c, long den)
{
    field_element g1(d, a, 0), g2(d, b, c);
    std::vector<field_element> gens{g1, g2};
    if (den != 1) {
        for (auto & g : gens)
            g = g * rational(1, den);
    }
    ideal I = from_generators(d, gens);
    /* O-stability: the Z-span must already be the ideal */
    rational want = ratio(std::labs(a * c), den * den);
    if (I.norm() != want)
        throw invalid_input("[" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c)
                + "] is not an O_K-ideal");
    return I;
}

ideal ideal::from_generators(long d, std::vector<field_element> const& gens)
{
    mpz_class D = lcm_den(gens);
    hnf2 H;
    for (auto const& g : gens) {
        mpz_class x = g.x.get_num() * (D / g.x.get_den());
        mpz_class y = g.y.get_num() * (D / g.y.get_den());
        i128 xi = to_long(x), yi = to_long(y);
        H.add(xi, yi);
        i128 wx, wy;
        mul_int(d, xi, yi, 0, 1, wx, wy);
        H.add(wx, wy);
    }
    if (H.a == 0 || H.c == 0)
        throw domain_error("zero ideal");
    i128 Dl = to_long(D);
    i128 content = gcd128(gcd128(H.a, H.b), H.c);
    i128 k = gcd128(content, Dl);
    ideal I;
    I.d_ = d;
    I.a_ = narrow(H.a / k);
    I.c_ = narrow(abs128(H.c) / k);
    I.den_ = narrow(Dl / k);
    I.b_ = narrow(mod128(H.b / k, I.a_));
    return I;
}

ideal ideal::principal(field_element const& g)
{
    if (g.is_zero())
        throw domain_error("principal ideal of zero");
    return from_generators(g.d, {g});
}

long ideal::inorm() const
{
    if (den_ != 1)
        throw domain_error("integer norm of a fractional ideal");
    return narrow(i128(a_) * c_);
}

std::pair<field_element, field_element> ideal::basis() const
{
    rational q(1, den_);
    return {field_element(d_, rational(a_) * q, 0), field_element(d_, rational(b_) * q, rational(c_) * q)};
}

bool ideal::contains(field_element const& x) const
{
    rational X = x.x * den_, Y = x.y * den_;
    if (X.get_den() != 1 || Y.get_den() != 1)
        return false;
    mpz_class xi = X.get_num(), yi = Y.get_num();
    if (yi % c_ != 0)
        return false;
    mpz_class r = xi - (yi / c_) * b_;
    return r % a_ == 0;
}

bool ideal::divides(ideal const& J) const
{
    auto [e1, e2] = J.basis();
    return contains(e1) && contains(e2);
}

ideal ideal::conj() const
{
    auto [e1, e2] = basis();
    return from_generators(d_, {e1, e2.conj()});
}

ideal ideal::inverse() const
{
    /* I conj(I) = (N I) */
    ideal cj = conj();
    rational n = norm();
    auto [e1, e2] = cj.basis();
    rational q = 1 / n;
    return from_generators(d_, {e1 * q, e2 * q});
}

ideal operator*(ideal const& I, ideal const& J)
{
    auto [a1, b1] = I.basis();
    auto [a2, b2] = J.basis();
    return ideal::from_generators(I.d_, {a1 * a2, a1 * b2, b1 * a2, b1 * b2});
}

ideal operator+(ideal const& I, ideal const& J)
{
    auto [a1, b1] = I.basis();
    auto [a2, b2] = J.basis();
    return ideal::from_generators(I.d_, {a1, b1, a2, b2});
}

bool operator<(ideal const& I, ideal const& J)
{
    rational n1 = I.norm(), n2 = J.norm();
    if (n1 != n2)
        return n1 < n2;
    if (I.den_ != J.den_) return I.den_ < J.den_;
    if (I.a_ != J.a_) return I.a_ < J.a_;
    if (I.c_ != J.c_) return I.c_ < J.c_;
    return I.b_ < J.b_;
}

ideal ideal::pow(long e) const
{
    ideal base = e < 0 ? inverse() : *this;
    unsigned long m = e < 0 ? -e : e;
    ideal r = unit(d_);
    while (m) {
        if (m & 1)
            r = r * base;
        m >>= 1;
        if (m)
            base = base * base;
    }
    return r;
}

std::string ideal::to_string() const
{
    std::string s = "[" + std::to_string(a_) + "," + std::to_string(b_) + "," + std::to_string(c_) + "]";
    if (den_ != 1)
        s += "/" + std::to_string(den_);
    return s;
}

bool is_prime_l(long n)
{
    if (n < 2)
        return false;
    for (long p = 2; p * p <= n; p++)
        if (n % p == 0)
            return false;
    return true;
}

std::vector<std::pair<long, int> > factor_integer(long n)
{
    std::vector<std::pair<long, int> > f;
    n = std::labs(n);
    for (long p = 2; p * p <= n; p++) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            e++;
        }
        if (e)
            f.push_back({p, e});
    }
    if (n > 1)
        f.push_back({n, 1});
    return f;
}

namespace {

long powmod(long b, long e, long m)
{
    i128 r = 1, x = mod_l(b, m);
    while (e) {
        if (e & 1)
            r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return long(r);
}

/* square root of a quadratic residue n mod odd prime p */
long sqrt_mod(long n, long p)
{
    n = mod_l(n, p);
    if (n == 0)
        return 0;
    long q = p - 1, s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        s++;
    }
    long z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1)
        z++;
    long m = s;
    i128 c = powmod(z, q, p), t = powmod(n, q, p), r = powmod(n, (q + 1) / 2, p);
    while (t != 1) {
        long i = 0;
        i128 tt = t;
        while (tt != 1) {
            tt = tt * tt % p;
            i++;
        }
        i128 b = c;
        for (long j = 0; j < m - i - 1; j++)
            b = b * b % p;
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return long(r);
}

}

prime_decomposition factor_rational_prime(quad_field const& K, long p)
{
    if (!is_prime_l(p))
        throw invalid_input(std::to_string(p) + " is not prime");
    long d = K.d;
    std::vector<long> roots;
    /* roots of x^2 + d x + N(w) mod p */
    if (p == 2) {
        for (long x = 0; x < 2; x++)
            if (mod_l(x * x + d * x + K.wnorm, 2) == 0)
                roots.push_back(x);
    } else {
        long dm = mod_l(d, p);
        long inv2 = (p + 1) / 2;
        if (dm == 0) {
            roots.push_back(long(mod128(i128(-d) * inv2, p)));
        } else if (powmod(dm, (p - 1) / 2, p) == 1) {
            long r = sqrt_mod(dm, p);
            roots.push_back(long(mod128(i128(-d + r) * inv2, p)));
            roots.push_back(long(mod128(i128(-d - r) * inv2, p)));
            std::sort(roots.begin(), roots.end());
        }
    }
    prime_decomposition pd;
    pd.p = p;
    if (roots.empty()) {
        pd.type = splitting::inert;
        pd.primes.push_back(ideal::integer(d, p));
    } else if (roots.size() == 1) {
        pd.type = splitting::ramified;
        pd.primes.push_back(ideal::from_hnf(d, p, roots[0], 1));
    } else {
        pd.type = splitting::split;
        for (long r : roots)
            pd.primes.push_back(ideal::from_hnf(d, p, r, 1));
    }
    return pd;
}

int valuation(ideal const& I, ideal const& P)
{
    /* I = J / den */
    ideal J = I * ideal::integer(I.disc(), I.den());
    long p = factor_integer(P.inorm())[0].first;
    int e = 0;
    ideal Pinv = P.inverse();
    while (true) {
        ideal K2 = J * Pinv;
        if (!K2.is_integral())
            break;
        J = K2;
        e++;
    }
    int vden = 0;
    long dn = I.den();
    if (dn > 1) {
        ideal Pp = ideal::integer(I.disc(), p);
        int vp_p = 0;
        ideal t = Pp;
        while (true) {
            ideal K2 = t * Pinv;
            if (!K2.is_integral())
                break;
            t = K2;
            vp_p++;
        }
        long m = dn;
        int k = 0;
        while (m % p == 0) {
            m /= p;
            k++;
        }
        vden = k * vp_p;
    }
    return e - vden;
}

int valuation(field_element const& x, ideal const& P)
{
    return valuation(ideal::principal(x), P);
}

std::vector<std::pair<ideal, int> > factor(ideal const& I)
{
    long d = I.disc();
    ideal J = I * ideal::integer(d, I.den());
    std::vector<long> ps;
    for (auto [p, e] : factor_integer(J.inorm()))
        ps.push_back(p);
    for (auto [p, e] : factor_integer(I.den()))
        ps.push_back(p);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::vector<std::pair<ideal, int> > out;
    quad_field K = quad_field::make(d);
    for (long p : ps)
        for (auto const& P : factor_rational_prime(K, p).primes) {
            int v = valuation(I, P);
            if (v != 0)
                out.push_back({P, v});
        }
    return out;
}

bool coprime(ideal const& I, ideal const& J)
{
    return (I + J).is_unit();
}

namespace {

struct tracked_form {
    i128 A, B, C;
    i128 e1x, e1y, e2x, e2y;
};

void reduce_tracked(tracked_form& f)
{
    for (int it = 0; it < 100000; it++) {
        if (f.B > f.A || f.B <= -f.A) {
            i128 twoA = 2 * f.A;
            i128 num = f.A - f.B;
            i128 k = num >= 0 ? num / twoA : -((-num + twoA - 1) / twoA);
            i128 nb = f.B + twoA * k;
            i128 nc = f.A * k * k + f.B * k + f.C;
            f.B = nb;
            f.C = nc;
            f.e2x += k * f.e1x;
            f.e2y += k * f.e1y;
        }
        if (f.A > f.C) {
            std::swap(f.A, f.C);
            f.B = -f.B;
            i128 x = f.e1x, y = f.e1y;
            f.e1x = f.e2x; f.e1y = f.e2y;
            f.e2x = -x; f.e2y = -y;
            continue;
        }
        return;
    }
    throw error("form reduction did not terminate");
}

tracked_form norm_form(ideal const& I)
{
    /* integral part J = den I */
    long d = I.disc();
    i128 a = I.a(), b = I.b(), c = I.c();
    i128 N = a * c;
    tracked_form f;
    f.e1x = a; f.e1y = 0;
    f.e2x = b; f.e2y = c;
    i128 n1 = norm_int(d, a, 0), n2 = norm_int(d, b, c), n12 = norm_int(d, a + b, c);
    f.A = n1 / N;
    f.C = n2 / N;
    f.B = (n12 - n1 - n2) / N;
    return f;
}

}

std::optional<field_element> principal_generator(ideal const& I)
{
    tracked_form f = norm_form(I);
    reduce_tracked(f);
    if (f.A != 1)
        return std::nullopt;
    rational q(1, I.den());
    return field_element(I.disc(), rational(narrow(f.e1x)) * q, rational(narrow(f.e1y)) * q);
}

std::pair<field_element, field_element> reduced_basis(ideal const& I)
{
    tracked_form f = norm_form(I);
    reduce_tracked(f);
    long d = I.disc();
    rational q(1, I.den());
    field_element v(d, rational(narrow(f.e1x)) * q, rational(narrow(f.e1y)) * q);
    field_element u(d, rational(narrow(f.e2x)) * q, rational(narrow(f.e2y)) * q);
    /* Im(u/v) > 0 iff the w-coordinate of u conj(v) is positive */
    if ((u * v.conj()).y < 0)
        u = -u;
    return {u, v};
}

oriented_lattice oriented_basis(ideal const& I, prec_t prec)
{
    auto [u, v] = reduced_basis(I);
    return oriented_lattice(u.to_complex(prec), v.to_complex(prec));
}

field_element idele_approximation(ideal const& f)
{
    if (!f.is_integral())
        throw domain_error("idele approximation needs an integral modulus");
    long d = f.disc();
    if (auto g = principal_generator(f))
        return *g;
    long nf = f.inorm();
    /* alpha in f with N(alpha)/N(f) prime to N(f); then alpha / (N(alpha)/N(f)) */
    auto [e1, e2] = f.basis();
    for (long r = 1; r < 10000; r++)
        for (long m = -r; m <= r; m++)
            for (long n = -r; n <= r; n++) {
                if (std::max(std::labs(m), std::labs(n)) != r)
                    continue;
                field_element al = e1 * rational(m) + e2 * rational(n);
                if (al.is_zero())
                    continue;
                rational nb = al.norm() / nf;
                long nbl = to_long(nb.get_num());
                if (gcd_l(nbl, nf) == 1)
                    return al * rational(1, nbl);
            }
    (void) d;
    throw error("idele approximation search failed");
}

std::vector<ideal> ideals_of_norm(long d, long n)
{
    std::vector<ideal> out;
    long wn = wnorm_of(d);
    for (long c = 1; c * c <= n; c++) {
        if (n % (c * c) != 0)
            continue;
        long A = n / (c * c);
        for (long b = 0; b < A; b++) {
            i128 v = i128(b) * b + i128(d) * b + wn;
            if (mod128(v, A) == 0) {
                ideal I;
                I = ideal::from_hnf(d, A * c, b * c, c);
                out.push_back(I);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<field_element> roots_of_unity(quad_field const& K)
{
    field_element g = K.d == -4 || K.d == -3 ? field_element(K.d, 2, 1) : field_element::integer(K.d, -1);
    std::vector<field_element> out;
    field_element x = field_element::integer(K.d, 1);
    for (int i = 0; i < K.w; i++) {
        out.push_back(x);
        x = x * g;
    }
    return out;
}

qform reduce_form(qform f)
{
    tracked_form t{f.a, f.b, f.c, 1, 0, 0, 1};
    reduce_tracked(t);
    qform r{narrow(t.A), narrow(t.B), narrow(t.C)};
    if ((r.b < 0) && (r.a == r.c || -r.b == r.a))
        r.b = -r.b;
    return r;
}

qform form_of_ideal(ideal const& I)
{
    long d = I.disc();
    long A = I.a() / I.c();
    long bp = I.b() / I.c();
    long B = -(2 * bp + d);
    long C = narrow((i128(B) * B - d) / (4 * i128(A)));
    return qform{A, B, C};
}

ideal ideal_of_form(long d, qform const& f)
{
    long b = mod_l((-f.b - d) / 2, f.a);
    return ideal::from_hnf(d, f.a, b, 1);
}

std::vector<qform> reduced_forms(long d)
{
    std::vector<qform> out;
    long D = -d;
    for (long a = 1; 3 * a * a <= D; a++)
        for (long b = -a + 1; b <= a; b++) {
            if (mod_l(b - d, 2) != 0)
                continue;
            long num = b * b - d;
            if (num % (4 * a) != 0)
                continue;
            long c = num / (4 * a);
            if (c < a)
                continue;
            if (c == a && b < 0)
                continue;
            if (gcd_l(gcd_l(a, b), c) != 1)
                continue;
            out.push_back(qform{a, b, c});
        }
    std::sort(out.begin(), out.end());
    return out;
}

size_t class_group_data::class_index(ideal const& I) const
{
    ideal J = I * ideal::integer(K.d, I.den());
    qform f = reduce_form(form_of_ideal(J));
    auto it = index.find(f);
    if (it == index.end())
        throw error("reduced form missing from the class table");
    return it->second;
}

class_group_data class_group(quad_field const& K, long disc_bound)
{
    if (-K.d > disc_bound)
        throw bound_exceeded("|d| exceeds the class group bound");
    class_group_data C;
    C.K = K;
    C.forms = reduced_forms(K.d);
    for (size_t i = 0; i < C.forms.size(); i++)
        C.index[C.forms[i]] = i;
    qform one = reduce_form(form_of_ideal(ideal::unit(K.d)));
    size_t id = C.index.at(one);
    std::vector<ideal> reps;
    for (auto const& f : C.forms)
        reps.push_back(ideal_of_form(K.d, f));
    size_t n = C.forms.size();
    std::vector<size_t> table(n * n);
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++)
            table[i * n + j] = C.class_index(reps[i] * reps[j]);
    C.G = build_group(n, id, [&](size_t i, size_t j) { return table[i * n + j]; });
    return C;
}

field_element parse_element(long d, std::string const& lit)
{
    std::string s;
    for (char ch : lit)
        if (!std::isspace((unsigned char) ch))
            s += ch;
    if (s.empty())
        throw invalid_input("empty element literal");
    rational x = 0, y = 0;
    size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            i++;
        }
        size_t j = i;
        while (j < s.size() && std::isdigit((unsigned char) s[j]))
            j++;
        mpz_class coef = 1;
        bool has_num = j > i;
        if (has_num)
            coef = mpz_class(s.substr(i, j - i));
        i = j;
        bool has_w = false;
        if (i < s.size() && s[i] == '*') {
            i++;
            if (i >= s.size() || s[i] != 'w')
                throw invalid_input("bad element literal '" + lit + "'");
        }
        if (i < s.size() && s[i] == 'w') {
            has_w = true;
            i++;
        }
        if (!has_num && !has_w)
            throw invalid_input("bad element literal '" + lit + "'");
        if (has_w)
            y += sign * rational(coef);
        else
            x += sign * rational(coef);
        if (i < s.size() && s[i] != '+' && s[i] != '-')
            throw invalid_input("bad element literal '" + lit + "'");
    }
    return field_element(d, x, y);
}

ideal parse_ideal(long d, std::string const& lit)
{
    ideal I = ideal::unit(d);
    size_t i = 0;
    bool any = false;
    while (i < lit.size()) {
        char ch = lit[i];
        if (std::isspace((unsigned char) ch) || ch == '*') {
            i++;
            continue;
        }
        ideal J;
        if (ch == '(') {
            size_t j = lit.find(')', i);
            if (j == std::string::npos)
                throw invalid_input("unbalanced '(' in ideal literal '" + lit + "'");
            J = ideal::principal(parse_element(d, lit.substr(i + 1, j - i - 1)));
            i = j + 1;
        } else if (ch == '[') {
            size_t j = lit.find(']', i);
            if (j == std::string::npos)
                throw invalid_input("unbalanced '[' in ideal literal '" + lit + "'");
            std::string body = lit.substr(i + 1, j - i - 1);
            std::vector<long> v;
            std::stringstream ss(body);
            std::string tok;
            try {
                while (std::getline(ss, tok, ','))
                    v.push_back(std::stol(tok));
            } catch (std::exception const&) {
                throw invalid_input("bad HNF entry in ideal literal '" + lit + "'");
            }
            if (v.size() != 3)
                throw invalid_input("HNF literal needs three entries: '" + lit + "'");
            J = ideal::from_hnf(d, v[0], v[1], v[2]);
            i = j + 1;
        } else {
            throw invalid_input("bad ideal literal '" + lit + "'");
        }
        /* optional exponent */
        if (i < lit.size() && lit[i] == '^') {
            size_t j = i + 1;
            while (j < lit.size() && std::isdigit((unsigned char) lit[j]))
                j++;
            if (j == i + 1 || j - i > 4)
                throw invalid_input("bad exponent in ideal literal '" + lit + "'");
            J = J.pow(std::stol(lit.substr(i + 1, j - i - 1)));
            i = j;
        }
        I = I * J;
        any = true;
    }
    if (!any)
        throw invalid_input("empty ideal literal");
    return I;
}

}
