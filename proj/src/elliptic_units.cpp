#include "heckel/elliptic_units.hpp"
#include "heckel/errors.hpp"
#include "heckel/modular.hpp"

namespace heckel {

namespace {

constexpr prec_t kGuard = 32;

bool near_lattice(complex const& z, oriented_lattice const& L)
{
    auto [a, b] = L.coordinates(z);
    real tol = ldexp(-long(L.prec()) / 2, L.prec());
    return abs(a - round(a)) < tol && abs(b - round(b)) < tol;
}

}

theta_value theta12(complex const& z0, oriented_lattice const& L0, oriented_lattice const& La0, long na)
{
    prec_t p = std::max(L0.prec(), z0.prec());
    prec_t wp = p + kGuard;
    oriented_lattice L = reduce(L0.with_prec(wp)).lattice;
    oriented_lattice La = reduce(La0.with_prec(wp)).lattice;
    complex z(z0, wp);
    if (near_lattice(z, La))
        throw divisor_error("theta12 evaluated on its divisor");
    /* value12 is L-periodic, so z may be moved into the fundamental cell */
    auto [a, b] = L.coordinates(z);
    z -= L.point(round(a), round(b));
    complex num = pow(theta_function(z, L), na);
    complex den = theta_function(z, La);
    theta_value r{complex(num / den, p), real(p)};
    r.log_abs = real(log(abs(r.value12)) / 12L, p);
    return r;
}

theta_value theta12(complex const& z, ideal const& g, ideal const& a, prec_t prec)
{
    prec_t wp = prec + kGuard;
    oriented_lattice L = oriented_basis(g, wp);
    oriented_lattice La = oriented_basis(a.inverse() * g, wp);
    theta_value r = theta12(complex(z, wp), L, La, a.inorm());
    return {complex(r.value12, prec), real(r.log_abs, prec)};
}

theta_value theta12(field_element const& z, ideal const& g, ideal const& a, prec_t prec)
{
    if ((a.inverse() * g).contains(z))
        throw divisor_error("theta12 evaluated at an a-torsion point " + z.to_string());
    return theta12(z.to_complex(prec + kGuard), g, a, prec);
}

void check_auxiliary(ideal const& a, ideal const& f)
{
    if (!a.is_integral() || a.is_unit())
        throw invalid_input("auxiliary ideal must be a proper integral ideal");
    if (!coprime(a, f * ideal::integer(a.disc(), 6)))
        throw not_coprime("auxiliary ideal " + a.to_string() + " is not prime to 6f");
}

elliptic_unit elliptic_unit_z(ideal const& a, ray_class_ptr const& G, size_t class_label, prec_t prec)
{
    if (G->modulus.is_unit())
        throw invalid_input("elliptic units need f != (1); use u_of_a");
    check_auxiliary(a, G->modulus);
    ideal c = G->representatives(a).at(class_label);
    ideal lat = c.inverse() * G->modulus;
    elliptic_unit u{a, G->modulus, class_label, c,
        theta12(field_element::integer(a.disc(), 1), lat, a, prec)};
    return u;
}

std::vector<elliptic_unit> elliptic_unit_conjugates(ideal const& a, ray_class_ptr const& G,
        eval_context const& ctx)
{
    if (G->modulus.is_unit())
        throw invalid_input("elliptic units need f != (1); use u_of_a");
    check_auxiliary(a, G->modulus);
    std::vector<ideal> reps = G->representatives(a);
    return parallel_map<elliptic_unit>(reps.size(), ctx.threads, [&](size_t l) {
        ideal lat = reps[l].inverse() * G->modulus;
        return elliptic_unit{a, G->modulus, l, reps[l],
            theta12(field_element::integer(a.disc(), 1), lat, a, ctx.prec)};
    });
}

real elliptic_log_abs(ideal const& a, ideal const& g, prec_t prec)
{
    return theta12(field_element::integer(a.disc(), 1), g, a, prec).log_abs;
}

complex u_of_a(ideal const& a, prec_t prec)
{
    prec_t wp = prec + kGuard;
    long d = a.disc();
    complex num = ramanujan_delta(oriented_basis(ideal::unit(d), wp));
    complex den = ramanujan_delta(oriented_basis(a.inverse(), wp));
    return complex(num / den, prec);
}

std::vector<real> u_conjugate_log_abs(ideal const& a, class_group_data const& cl, prec_t prec)
{
    prec_t wp = prec + kGuard;
    std::vector<real> out;
    for (size_t k = 0; k < size_t(cl.order()); k++) {
        ideal c = cl.representative(k);
        ideal ci = c.inverse();
        real l = log(abs(ramanujan_delta(oriented_basis(ci, wp))));
        l -= log(abs(ramanujan_delta(oriented_basis(a.inverse() * ci, wp))));
        out.push_back(real(l, prec));
    }
    return out;
}

norm_compat_report norm_compat_check(ideal const& a, ideal const& f, ideal const& p,
        eval_context const& ctx)
{
    long d = a.disc();
    if (factor(p).size() != 1 || factor(p)[0].second != 1)
        throw invalid_input(p.to_string() + " is not a prime ideal");
    ideal pf = p * f;
    check_auxiliary(a, pf);
    prec_t prec = ctx.prec;
    quad_field K = quad_field::make(d);
    ray_class_ptr Gpf = make_ray_class_group(pf);
    norm_compat_report rep;

    /* classes of Cl_{pf} over the identity of Cl_f */
    std::vector<ideal> reps = Gpf->representatives(a);
    std::vector<ideal> kernel;
    if (f.is_unit()) {
        class_group_data cl = class_group(K);
        size_t e = cl.class_index(ideal::unit(d));
        for (auto const& c : reps)
            if (cl.class_index(c) == e)
                kernel.push_back(c);
    } else {
        ray_class_ptr Gf = make_ray_class_group(f);
        for (auto const& c : reps)
            if (Gf->class_label(c) == 0)
                kernel.push_back(c);
    }
    auto logs = parallel_map<real>(kernel.size(), ctx.threads, [&](size_t i) {
        return elliptic_log_abs(a, kernel[i].inverse() * pf, prec);
    });
    real lhs(0L, prec);
    for (auto const& l : logs)
        lhs += l;
    lhs *= w_f(K, f);
    lhs /= w_f(K, pf);
    rep.lhs = lhs;

    if (f.is_unit()) {
        rep.which_case = "f = 1";
        /* (1/12) (log|u(p a)/u(a)| - N(a) log|u(p)|) */
        real r = log(abs(u_of_a(p * a, prec)));
        r -= log(abs(u_of_a(a, prec)));
        r -= log(abs(u_of_a(p, prec))) * a.inorm();
        rep.rhs = r / 12L;
    } else if (p.divides(f)) {
        rep.which_case = "p | f";
        rep.rhs = elliptic_log_abs(a, f, prec);
    } else {
        rep.which_case = "p does not divide f";
        ray_class_ptr Gf = make_ray_class_group(f);
        std::vector<long> cp = Gf->artin_class(p);
        for (size_t i = 0; i < cp.size(); i++)
            cp[i] = mod_l(-cp[i], Gf->invariants[i]);
        ideal dd = Gf->representatives(a).at(Gf->label(cp));
        real r = elliptic_log_abs(a, f, prec);
        r -= elliptic_log_abs(a, dd.inverse() * f, prec);
        rep.rhs = r;
    }
    return rep;
}

}
