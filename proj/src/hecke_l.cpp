#include "heckel/hecke_l.hpp"
#include "heckel/elliptic_units.hpp"
#include "heckel/errors.hpp"
#include "heckel/modular.hpp"

#include <cfloat>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace heckel {

namespace {

constexpr prec_t kGuard = 32;

typedef std::complex<long double> cld;

cld root_of_unity(long k, long e)
{
    long double t = 2.0L * 3.14159265358979323846264338327950288L * (long double)k / (long double)e;
    return cld(std::cos(t), std::sin(t));
}

ideal class_lattice(ray_class_group const& G, ideal const& b, bool inverse)
{
    return inverse ? G.modulus * b.inverse() : G.modulus * b;
}

void check_series_point(std::complex<double> s)
{
    if (s.real() < 2.0)
        throw domain_error("Dirichlet series requires Re(s) >= 2");
}

/* chi(c) as a complex number at the working precision */
std::vector<complex> class_values(hecke_character const& chi, prec_t prec, bool conjugate = false)
{
    auto const& G = *chi.group;
    std::vector<complex> v;
    for (size_t l = 0; l < size_t(G.order()); l++) {
        long k = chi.value_exponent(G.coords_of_label(l));
        if (conjugate)
            k = mod_l(-k, chi.exponent());
        v.push_back(chi.value_complex(k, prec));
    }
    return v;
}

std::string memo_key(ray_class_ptr const& G, dual const& s, prec_t prec,
        partial_zeta_convention const& conv, bool drop_pole)
{
    int digits = int(prec / 3.3) + 4;
    return std::to_string(G->K.d) + G->modulus.to_string() + conv.name() + (drop_pole ? "d" : "p")
        + std::to_string(prec) + s.v.to_string(digits) + s.d.to_string(digits);
}

/* partial zetas are shared by every character of a group */
std::mutex memo_mutex;
std::map<std::string, std::vector<dual> > memo;
std::map<std::string, std::vector<complex> > mj_memo;

std::vector<dual> partial_zetas_uncached(ray_class_ptr const& G, dual const& s, eval_context const& ctx,
        partial_zeta_convention const& conv, bool drop_pole);

/* zeta(s, c) per class label, unchecked convention */
std::vector<dual> partial_zetas(ray_class_ptr const& G, dual const& s, eval_context const& ctx,
        partial_zeta_convention const& conv, bool drop_pole)
{
    std::string key = memo_key(G, s, ctx.prec, conv, drop_pole);
    {
        std::lock_guard<std::mutex> lock(memo_mutex);
        auto it = memo.find(key);
        if (it != memo.end())
            return it->second;
    }
    std::vector<dual> z = partial_zetas_uncached(G, s, ctx, conv, drop_pole);
    std::lock_guard<std::mutex> lock(memo_mutex);
    if (memo.size() > 256)
        memo.clear();
    memo.emplace(key, z);
    return z;
}

std::vector<dual> partial_zetas_uncached(ray_class_ptr const& G, dual const& s, eval_context const& ctx,
        partial_zeta_convention const& conv, bool drop_pole)
{
    prec_t wp = ctx.prec + kGuard;
    eval_context wctx{wp, ctx.threads};
    std::vector<ideal> reps = G->representatives();
    bool inv = conv.lattice == partial_zeta_convention::lattice_choice::f_binv;
    long w = conv.weight == partial_zeta_convention::weight_choice::inv_w_f ? G->wf : G->K.w;
    dual S(complex(s.v, wp), complex(s.d, wp));
    epstein_options opt;
    opt.drop_pole = drop_pole;
    std::vector<dual> out;
    for (auto const& b : reps) {
        oriented_lattice L = oriented_basis(class_lattice(*G, b, inv), wp);
        dual z = epstein_continued(S, L, complex(1, 0, wp), epstein_kind::shifted, wctx, opt);
        real nb(b.norm(), wp);
        dual f = pow(nb, inv ? -S : S);
        z *= f;
        z *= real(1L, wp) / real(w, wp);
        out.push_back(z);
    }
    return out;
}

dual assemble(hecke_character const& chi, std::vector<dual> const& z, prec_t prec)
{
    std::vector<complex> v = class_values(chi, prec + kGuard);
    dual tot(prec + kGuard);
    for (size_t l = 0; l < z.size(); l++)
        tot += z[l] * v[l];
    return dual(complex(tot.v, prec), complex(tot.d, prec));
}

dual L_unchecked(hecke_character const& chi, dual const& s, eval_context const& ctx,
        partial_zeta_convention const& conv)
{
    if (chi.is_trivial()) {
        complex sm1 = s.v - complex(1, 0, s.v.prec());
        if (abs(sm1) < ldexp(-long(ctx.prec) / 2, ctx.prec))
            throw pole_error("trivial character: pole of the Dedekind zeta function at s = 1");
    }
    return assemble(chi, partial_zetas(chi.group, s, ctx, conv, !chi.is_trivial()), ctx.prec);
}

std::complex<double> to_std(complex const& z)
{
    return {z.re.to_double(), z.im.to_double()};
}

}

std::string partial_zeta_convention::name() const
{
    std::string r = lattice == lattice_choice::f_binv ? "lattice=f*b^-1" : "lattice=f*b";
    r += weight == weight_choice::inv_w_f ? ",weight=1/w_f" : ",weight=1/w_K";
    return r;
}

std::vector<partial_zeta_convention> partial_zeta_candidates()
{
    std::vector<partial_zeta_convention> out;
    for (auto l : {partial_zeta_convention::lattice_choice::f_binv, partial_zeta_convention::lattice_choice::f_b})
        for (auto w : {partial_zeta_convention::weight_choice::inv_w_f, partial_zeta_convention::weight_choice::inv_w_K}) {
            partial_zeta_convention c;
            c.lattice = l;
            c.weight = w;
            out.push_back(c);
        }
    return out;
}

partial_zeta_convention const& frozen_partial_zeta()
{
    static partial_zeta_convention const c{partial_zeta_convention::lattice_choice::f_binv,
        partial_zeta_convention::weight_choice::inv_w_f, true};
    return c;
}

std::vector<double> partial_zeta_residuals(std::vector<partial_zeta_convention> const& cands,
        std::vector<ray_class_ptr> const& groups, eval_context const& ctx, long s, long cutoff)
{
    std::vector<double> worst(cands.size(), 0.0);
    dual S = dual::constant(complex(s, 0, ctx.prec + kGuard));
    for (auto const& G : groups) {
        prime_table T = make_prime_table(G, cutoff);
        std::vector<std::vector<dual> > z;
        for (auto const& c : cands)
            z.push_back(partial_zetas(G, S, ctx, c, true));
        for (auto const& chi : characters(G)) {
            if (chi.is_trivial())
                continue;
            series_result D = dirichlet_series_L(chi, T, std::complex<double>(double(s), 0));
            std::complex<double> ref(double(D.value.real()), double(D.value.imag()));
            for (size_t i = 0; i < cands.size(); i++) {
                std::complex<double> v = to_std(assemble(chi, z[i], ctx.prec).v);
                double rel = std::abs(v - ref) / std::max(std::abs(ref), 1e-300);
                worst[i] = std::max(worst[i], rel);
            }
        }
    }
    return worst;
}

calibration_record calibrate_partial_zeta(std::vector<ray_class_ptr> const& groups,
        eval_context const& ctx, long s, long cutoff)
{
    auto cands = partial_zeta_candidates();
    std::vector<double> worst = partial_zeta_residuals(cands, groups, ctx, s, cutoff);
    calibration_record rec;
    rec.s = s;
    rec.cutoff = cutoff;
    for (auto const& G : groups)
        rec.moduli.push_back(G->modulus.to_string());
    long match = -1;
    for (size_t i = 0; i < cands.size(); i++) {
        rec.candidates.emplace_back(cands[i], worst[i]);
        if (worst[i] < 1e-10) {
            if (match >= 0)
                throw calibration_missing("partial zeta calibration is ambiguous");
            match = long(i);
        }
    }
    if (match < 0)
        throw calibration_missing("no partial zeta convention matches the Dirichlet series");
    rec.convention = cands[match];
    rec.convention.validated = true;
    rec.worst_relative = worst[match];
    return rec;
}

dual L_continued(hecke_character const& chi, dual const& s, eval_context const& ctx,
        partial_zeta_convention const& conv)
{
    if (!conv.validated)
        throw calibration_missing("partial zeta convention " + conv.name() + " has not been validated");
    return L_unchecked(chi, s, ctx, conv);
}

complex L_continued(hecke_character const& chi, complex const& s, int derivative_order,
        eval_context const& ctx, partial_zeta_convention const& conv)
{
    if (derivative_order != 0 && derivative_order != 1)
        throw invalid_input("derivative order must be 0 or 1");
    dual r = L_continued(chi, dual::variable(s), ctx, conv);
    return derivative_order == 0 ? r.v : r.d;
}

prime_table make_prime_table(ray_class_ptr const& G, long cutoff)
{
    prime_table T;
    T.group = G;
    T.cutoff = cutoff;
    std::vector<bool> comp(cutoff + 1, false);
    for (long p = 2; p <= cutoff; p++) {
        if (comp[p])
            continue;
        for (long q = p * p; q <= cutoff; q += p)
            comp[q] = true;
        prime_decomposition dec = factor_rational_prime(G->K, p);
        std::array<long, 2> lab{-1, -1};
        for (size_t i = 0; i < dec.primes.size() && i < 2; i++) {
            ideal const& P = dec.primes[i];
            if (P.divides(G->modulus))
                lab[i] = -1;
            else
                lab[i] = long(G->class_label(P));
        }
        T.primes.push_back(p);
        T.types.push_back(dec.type);
        T.labels.push_back(lab);
    }
    return T;
}

double divisor_tail_bound(double sigma, double X)
{
    double s1 = sigma - 1.0;
    return sigma * std::pow(X, -s1) * ((std::log(X) + 1.0) / s1 + 1.0 / (s1 * s1));
}

series_result dirichlet_series_L(hecke_character const& chi, prime_table const& T, std::complex<double> s)
{
    check_series_point(s);
    if (T.group != chi.group)
        throw invalid_input("prime table belongs to another modulus");
    long X = T.cutoff;
    auto const& G = *chi.group;
    std::vector<cld> cv;
    for (size_t l = 0; l < size_t(G.order()); l++)
        cv.push_back(root_of_unity(chi.value_exponent(G.coords_of_label(l)), chi.exponent()));
    auto val = [&](long lab) { return lab < 0 ? cld(0) : cv[lab]; };

    std::vector<int32_t> spf(X + 1, 0), pidx(X + 1, -1);
    for (size_t i = 0; i < T.primes.size(); i++) {
        long p = T.primes[i];
        pidx[p] = int32_t(i);
        for (long q = p; q <= X; q += p)
            if (spf[q] == 0)
                spf[q] = int32_t(p);
    }
    std::vector<cld> a(X + 1, cld(0));
    if (X >= 1)
        a[1] = 1;
    for (long n = 2; n <= X; n++) {
        long p = spf[n], m = n;
        int k = 0;
        while (m % p == 0) {
            m /= p;
            k++;
        }
        if (m > 1) {
            a[n] = a[n / m] * a[m];
            continue;
        }
        size_t i = pidx[p];
        cld x = val(T.labels[i][0]), y = val(T.labels[i][1]);
        cld r = 0;
        switch (T.types[i]) {
        case splitting::split: {
            /* sum_{i + l = k} x^i y^l */
            cld xp = 1;
            for (int e = 0; e <= k; e++) {
                r += xp * std::pow(y, k - e);
                xp *= x;
            }
            break;
        }
        case splitting::inert:
            r = (k % 2) ? cld(0) : std::pow(x, k / 2);
            break;
        case splitting::ramified:
            r = std::pow(x, k);
            break;
        }
        a[n] = r;
    }
    cld S(s.real(), s.imag());
    cld sum = 0;
    for (long n = 1; n <= X; n++)
        if (a[n] != cld(0))
            sum += a[n] * std::exp(-S * std::log((long double)n));
    series_result res;
    res.value = sum;
    res.cutoff = X;
    res.tail_bound = divisor_tail_bound(s.real(), double(X)) + 8.0 * double(X) * LDBL_EPSILON;
    return res;
}

series_result dirichlet_series_L(hecke_character const& chi, std::complex<double> s, long cutoff,
        double tol)
{
    check_series_point(s);
    double bound = divisor_tail_bound(s.real(), double(cutoff));
    if (bound > tol)
        throw bound_exceeded("cutoff " + std::to_string(cutoff) + " gives tail bound "
                + std::to_string(bound) + " above the requested " + std::to_string(tol));
    return dirichlet_series_L(chi, make_prime_table(chi.group, cutoff), s);
}

std::vector<group_ring_element> dirichlet_coefficients_exact(hecke_character const& chi, long E, long N)
{
    if (E % chi.exponent() != 0)
        throw invalid_input("group ring order must be a multiple of the character exponent");
    prime_table T = make_prime_table(chi.group, N);
    auto const& G = *chi.group;
    long scale = E / chi.exponent();
    std::vector<long> cv;
    for (size_t l = 0; l < size_t(G.order()); l++)
        cv.push_back(chi.value_exponent(G.coords_of_label(l)) * scale);
    group_ring_element zero(E, 0), one(E, 0);
    one[0] = 1;
    auto delta = [&](long lab) {
        group_ring_element r(E, 0);
        if (lab >= 0)
            r[cv[lab]] = 1;
        return r;
    };
    auto mul = [&](group_ring_element const& x, group_ring_element const& y) {
        group_ring_element r(E, 0);
        for (long i = 0; i < E; i++)
            if (x[i])
                for (long j = 0; j < E; j++)
                    if (y[j])
                        r[(i + j) % E] += x[i] * y[j];
        return r;
    };
    auto add = [&](group_ring_element x, group_ring_element const& y) {
        for (long i = 0; i < E; i++)
            x[i] += y[i];
        return x;
    };
    std::vector<group_ring_element> a(N + 1, zero);
    std::vector<long> spf(N + 1, 0), pidx(N + 1, -1);
    for (size_t i = 0; i < T.primes.size(); i++) {
        long p = T.primes[i];
        pidx[p] = long(i);
        for (long q = p; q <= N; q += p)
            if (spf[q] == 0)
                spf[q] = p;
    }
    if (N >= 1)
        a[1] = one;
    for (long n = 2; n <= N; n++) {
        long p = spf[n], m = n;
        int k = 0;
        while (m % p == 0) {
            m /= p;
            k++;
        }
        if (m > 1) {
            a[n] = mul(a[n / m], a[m]);
            continue;
        }
        size_t i = pidx[p];
        group_ring_element x = delta(T.labels[i][0]), y = delta(T.labels[i][1]);
        auto pw = [&](group_ring_element const& b, int e) {
            group_ring_element r = one;
            for (int t = 0; t < e; t++)
                r = mul(r, b);
            return r;
        };
        group_ring_element r = zero;
        switch (T.types[i]) {
        case splitting::split:
            for (int e = 0; e <= k; e++)
                r = add(r, mul(pw(x, e), pw(y, k - e)));
            break;
        case splitting::inert:
            if (k % 2 == 0)
                r = pw(x, k / 2);
            break;
        case splitting::ramified:
            r = pw(x, k);
            break;
        }
        a[n] = r;
    }
    return a;
}

euler_identity_result euler_factor_identity(hecke_character const& chi, long N)
{
    hecke_character prim = primitive_character(chi);
    long E = std::lcm(chi.exponent(), prim.exponent());
    auto b = dirichlet_coefficients_exact(chi, E, N);
    auto c = dirichlet_coefficients_exact(prim, E, N);
    euler_identity_result res;
    long scale = E / prim.exponent();
    for (auto const& [P, v] : factor(chi.group->modulus)) {
        if (valuation(prim.conductor, P) > 0)
            continue;
        res.stripped.push_back(P.to_string());
        long np = P.inorm();
        long k = *prim.value(P) * scale;
        /* multiply by (1 - chi'(P) NP^{-s}) */
        for (long n = N; n >= 1; n--) {
            if (n % np)
                continue;
            auto const& src = c[n / np];
            for (long i = 0; i < E; i++)
                c[n][(i + k) % E] -= src[i];
        }
    }
    res.holds = true;
    for (long n = 1; n <= N; n++) {
        res.checked = n;
        if (b[n] != c[n]) {
            res.holds = false;
            res.first_mismatch = n;
            break;
        }
    }
    return res;
}

std::string deninger_convention::name() const
{
    std::string r = inverse_representative ? "lattice=f*b^-1" : "lattice=f*b";
    r += conjugate_character ? ",character=conj" : ",character=chi";
    return r;
}

std::vector<deninger_convention> deninger_candidates()
{
    std::vector<deninger_convention> out;
    for (bool inv : {true, false})
        for (bool cj : {false, true})
            out.push_back(deninger_convention{inv, cj});
    return out;
}

deninger_convention const& frozen_deninger()
{
    static deninger_convention const c{true, false};
    return c;
}

complex deninger_assembly(hecke_character const& chi, int j, eval_context const& ctx,
        deninger_convention const& conv, complex const& lambda)
{
    auto const& G = *chi.group;
    if (j > -1)
        throw invalid_input("deninger_value needs j <= -1");
    if (chi.conductor.is_unit())
        throw invalid_input("deninger_value needs a conductor f != (1)");
    if (!chi.is_primitive())
        throw invalid_input("deninger_value needs a primitive character on its own conductor");
    if (G.wf != 1)
        throw domain_error("deninger_value needs w_f = 1, got w_f = " + std::to_string(G.wf));
    prec_t wp = ctx.prec + kGuard;
    eval_context wctx{wp, ctx.threads};
    complex lam(lambda, wp);
    std::vector<complex> v = class_values(chi, wp, conv.conjugate_character);
    std::string key = "M" + std::to_string(G.K.d) + G.modulus.to_string() + std::to_string(j)
        + (conv.inverse_representative ? "i" : "n") + std::to_string(wp) + lam.to_string(int(wp / 3.3) + 4);
    std::vector<complex> terms;
    {
        std::lock_guard<std::mutex> lock(memo_mutex);
        auto it = mj_memo.find(key);
        if (it != mj_memo.end())
            terms = it->second;
    }
    if (terms.empty()) {
        for (auto const& b : G.representatives()) {
            oriented_lattice L = oriented_basis(class_lattice(G, b, conv.inverse_representative), wp);
            L = L.scaled(lam);
            sum_result M = eisenstein_kronecker_Mj(lam, L, j, sum_method::accelerated, wctx);
            terms.push_back(M.value * pow(area_A(L), long(1 - j)));
        }
        std::lock_guard<std::mutex> lock(memo_mutex);
        if (mj_memo.size() > 256)
            mj_memo.clear();
        mj_memo.emplace(key, terms);
    }
    complex sum(wp);
    for (size_t l = 0; l < terms.size(); l++)
        sum += v[l] * terms[l];
    long n = -j;
    real fact(1L, wp);
    for (long k = 2; k <= n; k++)
        fact *= k;
    real C = sqrt(real(std::labs(G.K.d), wp)) * real(G.modulus.norm(), wp);
    C /= pi(wp) * 2L;
    real pref = fact * fact * pow(C, n);
    if (n % 2)
        pref = -pref;
    return complex(sum * pref, ctx.prec);
}

complex deninger_value(hecke_character const& chi, int j, eval_context const& ctx,
        deninger_convention const& conv)
{
    return deninger_assembly(chi, j, ctx, conv, complex(1, 0, ctx.prec + kGuard));
}

deninger_calibration calibrate_deninger(std::vector<hecke_character> const& chars, int j,
        eval_context const& ctx, std::vector<deninger_convention> const& cands)
{
    deninger_calibration cal;
    cal.j = j;
    std::vector<complex> lp;
    for (auto const& chi : chars)
        lp.push_back(L_prime_at(chi, j, ctx));
    long best = -1;
    for (auto const& conv : cands) {
        deninger_candidate_result r{conv, 0, 0};
        for (size_t i = 0; i < chars.size(); i++) {
            complex D = deninger_value(chars[i], j, ctx, conv);
            double a = abs(lp[i]).to_double();
            r.worst_abs_relative = std::max(r.worst_abs_relative, std::abs(abs(D).to_double() - a) / a);
            r.worst_constant_distance = std::max(r.worst_constant_distance,
                    abs(lp[i] / D - complex(1, 0, ctx.prec)).to_double());
        }
        cal.candidates.push_back(r);
        if (r.worst_abs_relative < 1e-6 && (best < 0
                    || r.worst_constant_distance < cal.candidates[best].worst_constant_distance))
            best = long(cal.candidates.size()) - 1;
    }
    if (best < 0)
        throw calibration_missing("no Deninger orientation matches |L'(chi, j)|");
    cal.convention = cal.candidates[best].convention;
    return cal;
}

complex L_prime_at(hecke_character const& chi, int j, eval_context const& ctx, double zero_tol)
{
    if (j > 0)
        throw invalid_input("L_prime_at needs j <= 0");
    dual r = L_continued(chi, dual::variable(complex(j, 0, ctx.prec)), ctx);
    if (!(abs(r.v) < zero_tol))
        throw domain_error("zero-order check fails: |L(chi, " + std::to_string(j) + ")| = "
                + abs(r.v).to_string(6));
    return r.d;
}

complex L_prime_central_difference(hecke_character const& chi, int j, eval_context const& ctx,
        double h)
{
    eval_context hctx{ctx.prec + 27, ctx.threads};
    prec_t p = hctx.prec;
    real H(h, p);
    complex sp(real(j, p) + H, real(p)), sm(real(j, p) - H, real(p));
    complex a = L_continued(chi, sp, 0, hctx);
    complex b = L_continued(chi, sm, 0, hctx);
    complex r = (a - b) / (H * 2L);
    return complex(r, ctx.prec);
}

complex solve_unimodular_constant(hecke_character const& chi, int j, eval_context const& ctx)
{
    return L_prime_at(chi, j, ctx) / deninger_value(chi, j, ctx);
}

complex kronecker_limit_rhs(hecke_character const& chi0, ideal const& a, eval_context const& ctx)
{
    if (chi0.is_trivial())
        throw invalid_input("kronecker_limit_rhs needs a nontrivial character");
    hecke_character chi = primitive_character(chi0);
    auto const& G = *chi.group;
    prec_t wp = ctx.prec + kGuard;
    eval_context wctx{wp, ctx.threads};
    std::vector<complex> v = class_values(chi, wp);
    complex sum(wp);
    if (!G.modulus.is_unit()) {
        check_auxiliary(a, G.modulus);
        auto units = elliptic_unit_conjugates(a, chi.group, wctx);
        for (auto const& u : units)
            sum += v[u.class_label] * (u.theta.log_abs * 2L);
        long E = chi.exponent();
        complex den = complex(real(a.inorm(), wp)) - chi.value_complex((E - *chi.value(a)) % E, wp);
        complex r = -(sum / den) / real(G.wf, wp);
        return complex(r, ctx.prec);
    }
    if (!a.is_integral() || a.is_unit())
        throw invalid_input("auxiliary ideal must be a proper integral ideal");
    long ka = *chi.value(a);
    if (ka == 0)
        throw domain_error("kronecker_limit_rhs needs chi(a) != 1 when f = (1)");
    std::vector<ideal> reps = G.representatives(a);
    ideal ai = a.inverse();
    auto logs = parallel_map<real>(reps.size(), ctx.threads, [&](size_t l) {
        ideal ci = reps[l].inverse();
        real x = log(abs(ramanujan_delta(oriented_basis(ci, wp))));
        x -= log(abs(ramanujan_delta(oriented_basis(ai * ci, wp))));
        return x;
    });
    for (size_t l = 0; l < reps.size(); l++)
        sum += v[l] * (logs[l] * 2L);
    complex den = complex(1, 0, wp) - chi.value_complex(chi.exponent() - ka, wp);
    complex r = -(sum / den) / real(12L * G.K.w, wp);
    return complex(r, ctx.prec);
}

functional_equation_result functional_equation_check(hecke_character const& chi, int j,
        eval_context const& ctx)
{
    if (j > -1)
        throw invalid_input("functional_equation_check needs j <= -1");
    if (!chi.is_primitive() || chi.is_trivial())
        throw invalid_input("functional_equation_check needs a nontrivial primitive character");
    prec_t wp = ctx.prec + kGuard;
    auto const& G = *chi.group;
    long n = -j;
    complex lp = L_prime_at(chi, j, ctx);
    complex l1 = L_continued(chi, complex(1 - j, 0, ctx.prec), 0, ctx);
    real fact(1L, wp);
    for (long k = 2; k <= n; k++)
        fact *= k;
    real C = sqrt(real(std::labs(G.K.d) * G.modulus.inorm(), wp)) / (pi(wp) * 2L);
    real rhs = fact * fact * pow(C, 1 - 2 * j) * abs(l1);
    return {real(abs(lp), ctx.prec), real(rhs, ctx.prec)};
}

}
