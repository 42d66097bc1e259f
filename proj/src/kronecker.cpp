#include "heckel/kronecker.hpp"
#include "heckel/errors.hpp"
#include "heckel/special.hpp"

#include <algorithm>
#include <cmath>

namespace heckel {

namespace {

constexpr prec_t kGuard = 32;
constexpr size_t kChunk = 16;

real cross(complex const& u, complex const& v)
{
    real r = u.re * v.im;
    r -= u.im * v.re;
    return r;
}

/* Im(z conj g) */
real im_conj(complex const& z, complex const& g)
{
    real r = z.im * g.re;
    r -= z.re * g.im;
    return r;
}

real frac_part(real const& t)
{
    return t - floor(t);
}

struct point_mn {
    long m, n;
};

bool shell_order(point_mn const& a, point_mn const& b)
{
    long ka = std::max(std::labs(a.m), std::labs(a.n));
    long kb = std::max(std::labs(b.m), std::labs(b.n));
    if (ka != kb)
        return ka < kb;
    if (a.m != b.m)
        return a.m < b.m;
    return a.n < b.n;
}

/* points g = m u + n v with |c + g|^2 <= R2, in shell order */
std::vector<point_mn> points_within(oriented_lattice const& L, complex const& c, double R2)
{
    double V = L.covolume().to_double();
    double R = std::sqrt(R2);
    auto [ca, cb] = L.coordinates(c);
    double a0 = ca.to_double(), b0 = cb.to_double();
    double au = abs(L.u()).to_double(), av = abs(L.v()).to_double();
    long mlo = long(std::floor(-a0 - R * av / V)) - 1, mhi = long(std::ceil(-a0 + R * av / V)) + 1;
    long nlo = long(std::floor(-b0 - R * au / V)) - 1, nhi = long(std::ceil(-b0 + R * au / V)) + 1;
    double ur = L.u().re.to_double(), ui = L.u().im.to_double();
    double vr = L.v().re.to_double(), vi = L.v().im.to_double();
    double cr = c.re.to_double(), ci = c.im.to_double();
    /* the double prefilter keeps a margin; the exact set is decided below */
    double slack = 1e-9 * (R2 + 1.0);
    std::vector<point_mn> out;
    for (long m = mlo; m <= mhi; m++)
        for (long n = nlo; n <= nhi; n++) {
            double x = cr + m * ur + n * vr, y = ci + m * ui + n * vi;
            if (x * x + y * y <= R2 + slack)
                out.push_back({m, n});
        }
    std::sort(out.begin(), out.end(), shell_order);
    return out;
}

double truncation_X(prec_t prec, double re_s)
{
    double P = double(prec) + 20;
    return P * M_LN2 + (std::fabs(re_s) + std::fabs(1 - re_s) + 2) * std::log(P);
}

/* reduce x modulo L; in_lattice when both coordinates are integral to half the precision */
complex reduce_mod(complex const& x, oriented_lattice const& L, bool& in_lattice)
{
    auto [a, b] = L.coordinates(x);
    real ra = round(a), rb = round(b);
    real tol = ldexp(-long(L.prec()) / 2, L.prec());
    in_lattice = abs(a - ra) < tol && abs(b - rb) < tol;
    if (in_lattice)
        return complex(L.prec());
    return x - L.point(ra, rb);
}

template <class T, class F>
T chunked_sum(size_t n, unsigned threads, T zero, F&& term)
{
    size_t nchunks = (n + kChunk - 1) / kChunk;
    auto parts = parallel_map<T>(nchunks, threads, [&](size_t c) {
        T acc = zero;
        size_t end = std::min(n, (c + 1) * kChunk);
        for (size_t i = c * kChunk; i < end; i++)
            acc += term(i);
        return acc;
    });
    T total = zero;
    for (auto const& p : parts)
        total += p;
    return total;
}

}

real area_A(oriented_lattice const& L)
{
    return L.area_A();
}

complex pontryagin_pairing(complex const& z, complex const& gamma, oriented_lattice const& L)
{
    auto [a, b] = L.coordinates(gamma);
    real tol = ldexp(-long(L.prec()) / 2, L.prec());
    if (abs(a - round(a)) > tol || abs(b - round(b)) > tol)
        throw domain_error("pairing argument is not a lattice point");
    real t = im_conj(z, gamma) / L.covolume();
    t *= long(kPairingSign);
    return e_of(frac_part(t));
}

dual epstein_continued(dual const& s, oriented_lattice const& L0, complex const& x0,
        epstein_kind kind, eval_context const& ctx, epstein_options const& opt)
{
    prec_t wp = ctx.prec + kGuard;
    oriented_lattice L = reduce(L0.with_prec(wp)).lattice;
    bool in_lattice = false;
    complex x = reduce_mod(complex(x0, wp), L, in_lattice);
    dual S(complex(s.v, wp), complex(s.d, wp));
    dual one = dual::constant(complex(1, 0, wp));
    dual s1 = one - S;          /* 1 - s */

    real V = L.covolume();
    real PI = pi(wp);
    real t = real(opt.split_scale, wp) / V;
    double Xmax = truncation_X(ctx.prec, S.v.re.to_double());
    double Vd = V.to_double(), td = t.to_double();

    /* primal: pi t |z|^2 <= Xmax; dual: pi |g|^2 / (V^2 t) <= Xmax */
    double Rp = Xmax / (M_PI * td);
    double Rd = Xmax * Vd * Vd * td / M_PI;
    complex zero_c(wp);
    dual zero(wp);
    bool shifted = kind == epstein_kind::shifted;

    if ((shifted && !opt.drop_pole) || (!shifted && in_lattice)) {
        complex sm1 = S.v - complex(1, 0, wp);
        if (abs(sm1) < ldexp(-long(ctx.prec) / 2, wp))
            throw pole_error("Epstein sum evaluated at its pole s = 1");
    }

    auto phase = [&](complex const& g) {
        real ph = im_conj(x, g) / V;
        ph *= long(kPairingSign);
        return e_of(frac_part(ph));
    };

    /* sum over g (kind twisted) or over x + g (kind shifted), Gamma(s, pi t |.|^2) */
    std::vector<point_mn> P1 = points_within(L, shifted ? x : zero_c, Rp);
    dual sum1 = chunked_sum<dual>(P1.size(), ctx.threads, zero, [&](size_t i) {
        complex g = L.point(P1[i].m, P1[i].n);
        complex z = shifted ? x + g : g;
        real a = norm(z);
        if (shifted ? (in_lattice && P1[i].m == 0 && P1[i].n == 0) : (P1[i].m == 0 && P1[i].n == 0))
            return zero;
        real A = PI * a;
        dual term = pow(A, -S) * upper_incomplete_gamma(S, A * t);
        if (!shifted)
            term *= phase(g);
        return term;
    });

    /* dual side, Gamma(1 - s, pi |.|^2 / (V^2 t)) */
    std::vector<point_mn> P2 = points_within(L, shifted ? zero_c : x, Rd);
    real V2t = V * V * t;
    dual sum2 = chunked_sum<dual>(P2.size(), ctx.threads, zero, [&](size_t i) {
        complex g = L.point(P2[i].m, P2[i].n);
        complex z = shifted ? g : x + g;
        if (shifted ? (P2[i].m == 0 && P2[i].n == 0) : (in_lattice && P2[i].m == 0 && P2[i].n == 0))
            return zero;
        real A = PI * norm(z) / (V * V);
        dual term = pow(A, S - one) * upper_incomplete_gamma(s1, PI * norm(z) / V2t);
        if (shifted)
            term *= phase(g);
        return term;
    });

    dual tot = sum1;
    sum2 *= real(1L, wp) / V;
    tot += sum2;
    dual prefactor = pow(PI, S) * rgamma(S);
    /* t^{s-1} / ((s - 1) V) */
    auto pole_term = [&]() {
        dual r = pow(t, S - one) / (S - one);
        r *= real(1L, wp) / V;
        return r;
    };
    if (shifted) {
        if (!opt.drop_pole)
            tot += pole_term();
    } else if (in_lattice) {
        tot += pole_term();
    }
    dual res = prefactor * tot;
    /* -(pi t)^s / Gamma(s + 1) */
    if (!shifted || in_lattice)
        res -= pow(PI * t, S) * rgamma(S + one);
    return dual(complex(res.v, ctx.prec), complex(res.d, ctx.prec));
}

complex epstein_continued(complex const& s, oriented_lattice const& L, complex const& x,
        epstein_kind kind, int derivative_order, eval_context const& ctx)
{
    if (derivative_order != 0 && derivative_order != 1)
        throw invalid_input("derivative order must be 0 or 1");
    dual r = epstein_continued(dual::variable(s), L, x, kind, ctx);
    return derivative_order == 0 ? r.v : r.d;
}

sum_result eisenstein_kronecker_Mj(complex const& x0, oriented_lattice const& L0, int j,
        sum_method method, eval_context const& ctx, double tol, long max_shells)
{
    if (j > -1)
        throw invalid_input("M_j needs j <= -1");
    prec_t wp = ctx.prec + kGuard;
    if (method == sum_method::accelerated) {
        complex s(long(1 - j), 0, wp);
        dual r = epstein_continued(dual::constant(s), L0, x0, epstein_kind::twisted, ctx);
        return {r.v, real(0L, ctx.prec), 0};
    }
    oriented_lattice L = reduce(L0.with_prec(wp)).lattice;
    bool in_lattice = false;
    complex x = reduce_mod(complex(x0, wp), L, in_lattice);
    long p = 2 - 2 * j, h = 1 - j;
    real V = L.covolume();
    real alpha = im_conj(x, L.u()) / V, beta = im_conj(x, L.v()) / V;
    alpha *= long(kPairingSign);
    beta *= long(kPairingSign);
    real uu = norm(L.u()), vv = norm(L.v());
    real uv = L.u().re * L.v().re + L.u().im * L.v().im;

    /* c = min |a u + b v| on max(|a|, |b|) = 1 */
    double ud = std::sqrt(uu.to_double()), vd = std::sqrt(vv.to_double());
    double uvd = uv.to_double();
    auto seg = [&](double pp, double ee, double pe) {
        /* min over t in [-1, 1] of |P + t E|^2, |P|^2 = pp, |E|^2 = ee, P.E = pe */
        double tt = std::clamp(-pe / ee, -1.0, 1.0);
        return pp + 2 * tt * pe + tt * tt * ee;
    };
    double c2 = std::min(seg(ud * ud, vd * vd, uvd), seg(vd * vd, ud * ud, uvd));
    double c = std::sqrt(c2) * (1 - 1e-12);
    auto tail = [&](long K) {
        return 8.0 * std::pow(c, -double(p)) * std::pow(double(K), double(2 - p)) / double(p - 2);
    };
    long K = 1;
    while (tail(K) > tol) {
        K++;
        if (K > max_shells)
            throw bound_exceeded("direct M_j needs more than " + std::to_string(max_shells) + " shells");
    }
    real twopi = pi(wp) * 2L;
    /* half plane: m > 0, or m = 0 and n > 0; each term counts g and -g */
    auto shell = [&](size_t kk) {
        long k = long(kk) + 1;
        real acc(0L, wp);
        auto term = [&](long m, long n) {
            real g2 = uu * (m * m);
            g2 += uv * (2 * m * n);
            g2 += vv * (n * n);
            real ph = alpha * m;
            ph += beta * n;
            real cs = cos(twopi * frac_part(ph));
            real den = pow(g2, h);
            acc += cs / den;
        };
        for (long n = -k; n <= k; n++)
            term(k, n);
        for (long m = 1; m < k; m++) {
            term(m, k);
            term(m, -k);
        }
        term(0, k);
        return acc;
    };
    auto parts = parallel_map<real>(size_t(K), ctx.threads, shell);
    real total(0L, wp);
    for (auto const& r : parts)
        total += r;
    total *= 2L;
    real err(tail(K), ctx.prec);
    err += ldexp(-long(ctx.prec), ctx.prec) * (4 * K * K);
    return {complex(real(total, ctx.prec)), err, K};
}

sum_result epstein_direct(long s, oriented_lattice const& L0, complex const& x0,
        eval_context const& ctx, long K)
{
    if (s < 2)
        throw invalid_input("direct Epstein sums need s >= 2");
    prec_t wp = ctx.prec + kGuard;
    oriented_lattice L = reduce(L0.with_prec(wp)).lattice;
    bool in_lattice = false;
    complex x = reduce_mod(complex(x0, wp), L, in_lattice);
    auto shell = [&](size_t kk) {
        long k = long(kk);
        real acc(0L, wp);
        auto term = [&](long m, long n) {
            if (k == 0 && in_lattice)
                return;
            complex z = x + L.point(m, n);
            acc += 1L / pow(norm(z), s);
        };
        if (k == 0) {
            term(0, 0);
            return acc;
        }
        for (long n = -k; n <= k; n++) {
            term(k, n);
            term(-k, n);
        }
        for (long m = -k + 1; m < k; m++) {
            term(m, k);
            term(m, -k);
        }
        return acc;
    };
    auto parts = parallel_map<real>(size_t(K + 1), ctx.threads, shell);
    real total(0L, wp);
    for (auto const& r : parts)
        total += r;

    /* exterior of the parallelogram x + {|a|, |b| <= K + 1/2}:
     * (1/V) (1/(2s-2)) sum_edges cross(P0, e) int_0^1 |P0 + tau e|^{-2s} */
    real V = L.covolume();
    real hk(double(K) + 0.5, wp);
    complex U = L.u() * hk, W = L.v() * hk;
    std::array<complex, 4> corner{x - U - W, x + U - W, x + U + W, x - U + W};
    real ext(0L, wp);
    for (int e = 0; e < 4; e++) {
        complex P0 = corner[e];
        complex E = corner[(e + 1) % 4] - P0;
        real cr = cross(P0, E);
        real integral = tanh_sinh<real>([&](real const& tau) {
            complex p = P0 + E * tau;
            return 1L / pow(norm(p), s);
        }, real(0L, wp), real(1L, wp), wp, real(0L, wp));
        ext += cr * integral;
    }
    ext = abs(ext) / (V * (2 * s - 2));
    total += ext;

    /* midpoint-rule error: sum_{k>K} 8k 2s(2s+1) (ck - r)^{-2s-2} (|u|^2+|v|^2)/24 */
    double ud = abs(L.u()).to_double(), vd = abs(L.v()).to_double();
    double uvd = (L.u().re * L.v().re + L.u().im * L.v().im).to_double();
    auto seg = [&](double pp, double ee, double pe) {
        double tt = std::clamp(-pe / ee, -1.0, 1.0);
        return pp + 2 * tt * pe + tt * tt * ee;
    };
    double c = std::sqrt(std::min(seg(ud * ud, vd * vd, uvd), seg(vd * vd, ud * ud, uvd))) * (1 - 1e-12);
    double r = ud + vd;
    double q = 2.0 * s + 2;
    double base = c * K - r;
    if (base <= 0)
        throw bound_exceeded("too few shells for the exterior correction");
    double C = 2.0 * s * (2.0 * s + 1) * (ud * ud + vd * vd) / 24.0;
    double bound = 8 * C / (c * c) * (std::pow(base, 2 - q) / (q - 2) + r * std::pow(base, 1 - q) / (q - 1));
    real err(bound, ctx.prec);
    err += ldexp(-long(ctx.prec), ctx.prec) * (4 * K * K + 4);
    return {complex(real(total, ctx.prec)), err, K};
}

torsion_divisor torsion_divisor::point(long N, long t1, long t2, rational const& c)
{
    torsion_divisor D(N);
    D.add(t1, t2, c);
    return D;
}

torsion_divisor torsion_divisor::torsion_subgroup(long N, long a, rational const& c)
{
    if (a <= 0 || N % a != 0)
        throw invalid_input("torsion subgroup order must divide the level");
    torsion_divisor D(N);
    long step = N / a;
    for (long i = 0; i < a; i++)
        for (long l = 0; l < a; l++)
            D.add(step * i, step * l, c);
    return D;
}

void torsion_divisor::add(long t1, long t2, rational const& c)
{
    auto key = std::make_pair(mod_l(t1, N), mod_l(t2, N));
    rational& r = w[key];
    r += c;
    if (r == 0)
        w.erase(key);
}

rational torsion_divisor::degree() const
{
    rational s = 0;
    for (auto const& [t, c] : w)
        s += c;
    return s;
}

torsion_divisor& torsion_divisor::operator+=(torsion_divisor const& o)
{
    if (o.N != N)
        throw invalid_input("divisors at different levels");
    for (auto const& [t, c] : o.w)
        add(t.first, t.second, c);
    return *this;
}

torsion_divisor operator*(rational const& c, torsion_divisor a)
{
    if (c == 0) {
        a.w.clear();
        return a;
    }
    for (auto& [t, v] : a.w)
        v *= c;
    return a;
}

rational horospherical_rho(int k, torsion_divisor const& psi, mat2 const& g)
{
    if (k <= 0)
        throw invalid_input("the horospherical map needs k > 0");
    long N = psi.N;
    rational_poly B = bernoulli_poly(k + 2);
    rational s = 0;
    /* sum_t psi(g^{-1} t) B(t_2/N) = sum_q psi(q) B((g q)_2 / N) */
    for (auto const& [q, c] : psi.w) {
        long t2 = mod_l((g[2] % N) * q.first + (g[3] % N) * q.second, N);
        s += c * B(ratio(t2, N));
    }
    mpz_class Nk;
    mpz_ui_pow_ui(Nk.get_mpz_t(), N, k);
    rational pref = rational(Nk) / (factorial(k) * (k + 2));
    rational r = pref * s;
    r.canonicalize();
    return r;
}

std::vector<mat2> gl2_generators(long N)
{
    if (N < 2)
        throw invalid_input("level must be at least 2");
    std::vector<mat2> out{mat2{0, N - 1, 1, 0}, mat2{1, 1, 0, 1}};
    std::vector<long> units;
    for (long r = 1; r < N; r++)
        if (gcd_l(r, N) == 1)
            units.push_back(r);
    std::vector<long> idx(N, -1);
    for (size_t i = 0; i < units.size(); i++)
        idx[units[i]] = long(i);
    enumerated_group G = build_group(units.size(), size_t(idx[1]), [&](size_t a, size_t b) {
        return size_t(idx[(units[a] * units[b]) % N]);
    });
    for (size_t g : G.generators)
        out.push_back(mat2{units[g], 0, 0, 1});
    return out;
}

torsion_divisor beta_prime_difference(int j, long N, long Nt, beta_prime_variant v)
{
    if (j > -1 || N < 2 || Nt < 2)
        throw invalid_input("need j <= -1, N >= 2, Nt >= 2");
    long M = N * Nt;
    auto ipow = [](long b, long e) {
        mpz_class r;
        mpz_ui_pow_ui(r.get_mpz_t(), b, e);
        return rational(r);
    };
    rational c0, c1;
    switch (v) {
    case beta_prime_variant::stated:
        c0 = 1 / (ipow(Nt, 4 - 2 * j) - 1);
        c1 = ipow(Nt, 2 - 2 * j) / (ipow(Nt, 4 - 2 * j) - 1);
        break;
    case beta_prime_variant::degree_zero:
        c0 = 1 / (ipow(Nt, 2 - 2 * j) - 1);
        c1 = ipow(Nt, -2 * j) / (ipow(Nt, 2 - 2 * j) - 1);
        break;
    case beta_prime_variant::perturbed:
        c0 = 1 / (ipow(Nt, 4 - 2 * j) - 2);
        c1 = ipow(Nt, 2 - 2 * j) / (ipow(Nt, 4 - 2 * j) - 1);
        break;
    }
    c0.canonicalize();
    c1.canonicalize();
    return torsion_divisor::point(M, 0, 0, c0) - torsion_divisor::torsion_subgroup(M, Nt, c1);
}

kernel_check_result beta_prime_kernel_check(int j, long N, long Nt, std::pair<long, long> beta,
        beta_prime_variant v)
{
    long M = N * Nt;
    torsion_divisor b = torsion_divisor::point(M, Nt * beta.first, Nt * beta.second);
    torsion_divisor bp = b + beta_prime_difference(j, N, Nt, v);
    torsion_divisor D = bp - b;
    kernel_check_result res;
    res.in_kernel = true;
    res.worst = 0;
    for (mat2 const& g : gl2_generators(M)) {
        rational r = horospherical_rho(-2 * j, D, g);
        if (r != 0)
            res.in_kernel = false;
        if (abs(r) > abs(res.worst) || (res.worst == 0 && r != 0)) {
            res.worst = r;
            res.worst_g = g;
        }
    }
    return res;
}

std::vector<field_element> quotient_representatives(ideal const& big, ideal const& small)
{
    rational idx = small.norm() / big.norm();
    if (idx.get_den() != 1)
        throw invalid_input("not a sublattice");
    long n = idx.get_num().get_si();
    auto [e1, e2] = big.basis();
    std::vector<field_element> reps;
    for (long a = 0; a < n && long(reps.size()) < n; a++)
        for (long b = 0; b < n && long(reps.size()) < n; b++) {
            field_element y = e1 * rational(a) + e2 * rational(b);
            bool fresh = true;
            for (auto const& r : reps)
                if (small.contains(y - r)) {
                    fresh = false;
                    break;
                }
            if (fresh)
                reps.push_back(y);
        }
    if (long(reps.size()) != n)
        throw error("quotient enumeration incomplete");
    return reps;
}

distribution_sides p_distribution(ideal const& P, ideal const& G, field_element const& x, int j,
        bool conjugate_sublattice, eval_context const& ctx)
{
    prec_t wp = ctx.prec + kGuard;
    oriented_lattice L = oriented_basis(G, wp);
    distribution_sides out;
    auto reps = quotient_representatives(P.inverse() * G, G);
    out.coset_count = long(reps.size());
    complex acc(ctx.prec);
    for (auto const& u : reps)
        acc += eisenstein_kronecker_Mj((x + u).to_complex(wp), L, j, sum_method::accelerated, ctx).value;
    out.lhs = acc;
    ideal sub = (conjugate_sublattice ? P.conj() : P) * G;
    oriented_lattice Ls = oriented_basis(sub, wp);
    field_element nx = x * P.norm();
    out.sub_sum = eisenstein_kronecker_Mj(nx.to_complex(wp), Ls, j, sum_method::accelerated, ctx).value;
    return out;
}

}
