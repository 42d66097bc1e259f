#include "heckel/ray_class.hpp"
#include "heckel/errors.hpp"

#include <map>
#include <set>
#include <sstream>

namespace heckel {

typedef __int128 i128;

namespace {

long wnorm_of(long d) { return (d * d - d) / 4; }

long inv_mod(long m, long a)
{
    long s, t;
    long g = ext_gcd(mod_l(m, a), a, s, t);
    if (g != 1)
        throw not_coprime("denominator not prime to the modulus");
    return mod_l(s, a);
}

}

residue_ring::residue_ring(ideal const& f_)
    : d(f_.disc()), f(f_)
{
    if (!f.is_integral())
        throw domain_error("modulus must be integral");
    a = f.a();
    b = f.b();
    c = f.c();
    for (auto const& [P, e] : factor(f))
        primes.push_back(P);
}

long residue_ring::index(long x, long y) const
{
    i128 X = x, Y = y;
    i128 q = Y >= 0 ? Y / c : -((-Y + c - 1) / c);
    Y -= q * c;
    X -= q * b;
    i128 r = X % a;
    if (r < 0)
        r += a;
    return long(Y * a + r);
}

long residue_ring::mul(long i, long j) const
{
    auto [x1, y1] = element(i);
    auto [x2, y2] = element(j);
    i128 n = wnorm_of(d);
    i128 x = i128(x1) * x2 - n * y1 * y2;
    i128 y = i128(x1) * y2 + i128(x2) * y1 + i128(d) * y1 * y2;
    /* bring into long range before the canonical reduction */
    i128 A = i128(a) * c;
    x %= A;
    y %= A;
    return index(long(x), long(y));
}

bool residue_ring::is_unit(long idx) const
{
    auto [x, y] = element(idx);
    field_element al(d, x, y);
    for (auto const& P : primes)
        if (P.contains(al))
            return false;
    return true;
}

long residue_ring::residue(field_element const& x) const
{
    mpz_class m;
    mpz_lcm(m.get_mpz_t(), x.x.get_den_mpz_t(), x.y.get_den_mpz_t());
    mpz_class X = x.x.get_num() * (m / x.x.get_den());
    mpz_class Y = x.y.get_num() * (m / x.y.get_den());
    mpz_class A = a * c;
    mpz_class mm = m % a;
    long minv = inv_mod(mm.get_si(), a);
    mpz_class Xr = (X * minv) % A, Yr = (Y * minv) % A;
    return index(Xr.get_si(), Yr.get_si());
}

std::vector<long> units_mod_group::dlog_residue(long res) const
{
    long u = unit_of_residue.at(res);
    if (u < 0)
        throw not_coprime("element is not a unit modulo the conductor");
    return G.dlog(u);
}

std::vector<long> units_mod_group::dlog(field_element const& x) const
{
    return dlog_residue(R.residue(x));
}

units_mod_group units_mod(ideal const& f, long norm_bound)
{
    if (!f.is_integral())
        throw domain_error("modulus must be integral");
    if (f.inorm() > norm_bound)
        throw bound_exceeded("modulus norm " + std::to_string(f.inorm()) + " above bound");
    units_mod_group U{residue_ring(f), {}, {}, {}};
    long n = U.R.size();
    U.unit_of_residue.assign(n, -1);
    for (long r = 0; r < n; r++)
        if (U.R.is_unit(r)) {
            U.unit_of_residue[r] = U.residue_of_unit.size();
            U.residue_of_unit.push_back(r);
        }
    long one = U.R.index(1, 0);
    auto const& R = U.R;
    auto mul = [&](size_t i, size_t j) {
        return size_t(U.unit_of_residue[R.mul(U.residue_of_unit[i], U.residue_of_unit[j])]);
    };
    U.G = build_group(U.residue_of_unit.size(), U.unit_of_residue[one], mul);
    return U;
}

long phi_f(ideal const& f)
{
    long r = 1;
    for (auto const& [P, e] : factor(f)) {
        long np = P.inorm();
        long t = np - 1;
        for (int i = 1; i < e; i++)
            t *= np;
        r *= t;
    }
    return r;
}

long w_f(quad_field const& K, ideal const& f)
{
    long n = 0;
    field_element one = field_element::integer(K.d, 1);
    for (auto const& u : roots_of_unity(K))
        if (f.contains(u - one))
            n++;
    return n;
}

long ray_class_group::order() const
{
    long n = 1;
    for (long d : invariants)
        n *= d;
    return n;
}

std::vector<long> ray_class_group::present(std::vector<long> const& u, std::vector<long> const& c) const
{
    std::vector<long> full(u);
    full.insert(full.end(), c.begin(), c.end());
    std::vector<long> out(keep.size());
    for (size_t jj = 0; jj < keep.size(); jj++) {
        size_t j = keep[jj];
        i128 acc = 0;
        for (size_t i = 0; i < full.size(); i++)
            acc += i128(full[i]) * snf.V[i][j];
        out[jj] = long(((acc % invariants[jj]) + invariants[jj]) % invariants[jj]);
    }
    return out;
}

std::vector<long> ray_class_group::class_of_unit_residue(long res) const
{
    return present(U.dlog_residue(res), std::vector<long>(cl_gens.size(), 0));
}

std::vector<long> ray_class_group::class_of_element(field_element const& x) const
{
    return present(U.dlog(x), std::vector<long>(cl_gens.size(), 0));
}

std::vector<long> ray_class_group::artin_class(ideal const& A) const
{
    if (!coprime(A * ideal::integer(K.d, A.den()), modulus) || gcd_l(A.den(), modulus.a()) != 1)
        throw not_coprime("ideal " + A.to_string() + " is not prime to the modulus " + modulus.to_string());
    if (!A.is_integral()) {
        ideal J = A * ideal::integer(K.d, A.den());
        std::vector<long> cj = artin_class(J);
        std::vector<long> cd = class_of_element(field_element::integer(K.d, A.den()));
        for (size_t i = 0; i < cj.size(); i++)
            cj[i] = mod_l(cj[i] - cd[i], invariants[i]);
        return cj;
    }
    std::vector<long> k = cl.dlog(A);
    std::vector<long> e(cl_gens.size());
    ideal J = A;
    for (size_t i = 0; i < cl_gens.size(); i++) {
        e[i] = mod_l(-k[i], cl_orders[i]);
        J = J * cl_gen_powers[i][e[i]];
    }
    auto beta = principal_generator(J);
    if (!beta)
        throw error("class group bookkeeping failed: expected a principal ideal");
    std::vector<long> c(e.size());
    for (size_t i = 0; i < e.size(); i++)
        c[i] = -e[i];
    return present(U.dlog(*beta), c);
}

std::vector<ideal> ray_class_group::representatives(ideal const& avoid) const
{
    long n = order();
    std::vector<ideal> reps(n);
    std::vector<bool> have(n, false);
    long found = 0;
    ideal bad = modulus * avoid;
    for (long nm = 1; found < n; nm++) {
        if (nm > 100000000)
            throw error("representative search did not terminate");
        for (auto const& I : ideals_of_norm(K.d, nm)) {
            if (!coprime(I, bad))
                continue;
            size_t l = class_label(I);
            if (!have[l]) {
                have[l] = true;
                reps[l] = I;
                found++;
            }
        }
    }
    return reps;
}

std::vector<std::vector<long> > ray_class_group::local_kernel(ideal const& P, int t) const
{
    int v = valuation(modulus, P);
    ideal fp = modulus * P.pow(t - v);
    std::set<std::vector<long> > seen;
    field_element one = field_element::integer(K.d, 1);
    auto const& R = U.R;
    for (long r = 0; r < R.size(); r++) {
        if (U.unit_of_residue[r] < 0)
            continue;
        auto [x, y] = R.element(r);
        if (!fp.contains(field_element(K.d, x, y) - one))
            continue;
        seen.insert(class_of_unit_residue(r));
    }
    return std::vector<std::vector<long> >(seen.begin(), seen.end());
}

ray_class_ptr make_ray_class_group(ideal const& f, long norm_bound)
{
    auto G = std::make_shared<ray_class_group>();
    long d = f.disc();
    G->K = quad_field::make(d);
    G->modulus = f;
    G->cl = class_group(G->K);
    G->U = units_mod(f, norm_bound);
    G->h = G->cl.order();

    auto const& CG = G->cl.G;
    for (size_t i = 0; i < CG.rank(); i++) {
        size_t target = CG.generators[i];
        std::optional<ideal> pick;
        for (long nm = 1; !pick; nm++)
            for (auto const& I : ideals_of_norm(d, nm))
                if (coprime(I, f) && G->cl.class_index(I) == target) {
                    pick = I;
                    break;
                }
        long hi = CG.invariants[i];
        G->cl_gens.push_back(*pick);
        G->cl_orders.push_back(hi);
        std::vector<ideal> pw{ideal::unit(d)};
        for (long e = 1; e < hi; e++)
            pw.push_back(pw.back() * *pick);
        ideal top = pw.back() * *pick;
        auto g = principal_generator(top);
        if (!g)
            throw error("class group generator power is not principal");
        G->cl_gen_powers.push_back(std::move(pw));
        G->cl_gammas.push_back(*g);
    }

    size_t r1 = G->U.G.rank(), r2 = G->cl_gens.size();
    size_t nc = r1 + r2;
    int_matrix rel;
    for (size_t k = 0; k < r1; k++) {
        std::vector<long> row(nc, 0);
        row[k] = G->U.G.invariants[k];
        rel.push_back(row);
    }
    {
        std::vector<long> row(nc, 0);
        std::vector<long> u = G->U.dlog(roots_of_unity(G->K)[1 % G->K.w]);
        for (size_t k = 0; k < r1; k++)
            row[k] = u[k];
        rel.push_back(row);
    }
    for (size_t i = 0; i < r2; i++) {
        std::vector<long> row(nc, 0);
        std::vector<long> u = G->U.dlog(G->cl_gammas[i]);
        for (size_t k = 0; k < r1; k++)
            row[k] = -u[k];
        row[r1 + i] = G->cl_orders[i];
        rel.push_back(row);
    }
    if (nc == 0) {
        G->snf = smith_form{};
    } else {
        G->snf = smith_normal_form(rel, nc);
    }
    for (size_t j = 0; j < nc; j++)
        if (G->snf.diag[j] != 1) {
            if (G->snf.diag[j] == 0)
                throw error("ray class group presentation is not finite");
            G->keep.push_back(j);
            G->invariants.push_back(G->snf.diag[j]);
        }
    G->wf = w_f(G->K, f);
    G->phif = phi_f(f);
    std::vector<ideal> reps = G->representatives();
    for (size_t j = 0; j < G->invariants.size(); j++) {
        std::vector<long> e(G->invariants.size(), 0);
        e[j] = 1;
        G->generator_ideals.push_back(reps[G->label(e)]);
    }
    return G;
}

bool hecke_character::is_trivial() const
{
    for (long e : exps)
        if (e != 0)
            return false;
    return true;
}

long hecke_character::value_exponent(std::vector<long> const& coords) const
{
    long e = exponent();
    auto const& inv = group->invariants;
    i128 k = 0;
    for (size_t j = 0; j < exps.size(); j++)
        k += i128(exps[j]) * coords[j] * (e / inv[j]);
    return long(((k % e) + e) % e);
}

std::optional<long> hecke_character::value(ideal const& a) const
{
    ideal J = a * ideal::integer(a.disc(), a.den());
    if (!coprime(J, group->modulus) || gcd_l(a.den(), group->modulus.a()) != 1)
        return std::nullopt;
    return value_exponent(group->artin_class(a));
}

complex hecke_character::value_complex(long k, prec_t prec) const
{
    return e_of(real(ratio(k, exponent()), prec));
}

std::string hecke_character::exps_string() const
{
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < exps.size(); i++)
        os << (i ? "," : "") << exps[i];
    os << ")";
    return os.str();
}

std::vector<hecke_character> characters(ray_class_ptr const& G)
{
    long n = G->order();
    auto pf = factor(G->modulus);
    std::map<std::pair<size_t, int>, std::vector<std::vector<long> > > kernels;
    std::vector<hecke_character> out;
    for (long idx = 0; idx < n; idx++) {
        hecke_character chi;
        chi.group = G;
        chi.exps = mixed_radix_coords(idx, G->invariants);
        chi.index = idx;
        ideal cond = ideal::unit(G->K.d);
        for (size_t pi = 0; pi < pf.size(); pi++) {
            auto const& [P, v] = pf[pi];
            int t = 0;
            for (; t < v; t++) {
                auto key = std::make_pair(pi, t);
                auto it = kernels.find(key);
                if (it == kernels.end())
                    it = kernels.emplace(key, G->local_kernel(P, t)).first;
                bool trivial = true;
                for (auto const& c : it->second)
                    if (chi.value_exponent(c) != 0) {
                        trivial = false;
                        break;
                    }
                if (trivial)
                    break;
            }
            cond = cond * P.pow(t);
        }
        chi.conductor = cond;
        out.push_back(std::move(chi));
    }
    return out;
}

hecke_character primitive_character(hecke_character const& chi)
{
    if (chi.is_primitive())
        return chi;
    ray_class_ptr H = make_ray_class_group(chi.conductor);
    auto const& G = *chi.group;
    /* test ideals whose classes generate Cl of the conductor */
    std::vector<ideal> tests;
    std::set<size_t> span{H->label(std::vector<long>(H->rank(), 0))};
    for (long nm = 2; long(span.size()) < H->order(); nm++)
        for (auto const& I : ideals_of_norm(G.K.d, nm)) {
            if (!coprime(I, G.modulus))
                continue;
            std::vector<long> c = H->artin_class(I);
            std::set<size_t> grown = span;
            for (size_t s : span) {
                std::vector<long> x = H->coords_of_label(s);
                for (int k = 1; k <= H->exponent(); k++) {
                    for (size_t j = 0; j < x.size(); j++)
                        x[j] = mod_l(x[j] + c[j], H->invariants[j]);
                    grown.insert(H->label(x));
                }
            }
            if (grown.size() > span.size()) {
                span = std::move(grown);
                tests.push_back(I);
            }
        }
    for (auto const& psi : characters(H)) {
        bool ok = true;
        for (auto const& I : tests) {
            /* compare as roots of unity: k1/e1 = k2/e2 */
            long k1 = *chi.value(I), k2 = *psi.value(I);
            if (i128(k1) * psi.exponent() != i128(k2) * chi.exponent()) {
                ok = false;
                break;
            }
        }
        if (ok)
            return psi;
    }
    throw error("no primitive character matches");
}

hecke_character power(hecke_character const& chi, long a)
{
    hecke_character r = chi;
    for (size_t j = 0; j < r.exps.size(); j++)
        r.exps[j] = mod_l(r.exps[j] * a, chi.group->invariants[j]);
    r.index = mixed_radix_index(r.exps, chi.group->invariants);
    return r;
}

std::vector<std::vector<size_t> > rational_orbits(std::vector<hecke_character> const& chars)
{
    std::vector<std::vector<size_t> > orbits;
    std::vector<bool> seen(chars.size(), false);
    for (size_t i = 0; i < chars.size(); i++) {
        if (seen[i])
            continue;
        std::vector<size_t> orb;
        long e = chars[i].exponent();
        for (long a = 1; a <= e; a++) {
            if (gcd_l(a, e) != 1)
                continue;
            size_t j = power(chars[i], a).index;
            if (!seen[j]) {
                seen[j] = true;
                orb.push_back(j);
            }
        }
        std::sort(orb.begin(), orb.end());
        orbits.push_back(orb);
    }
    return orbits;
}

}
