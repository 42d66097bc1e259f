#include "heckel/elliptic_units.hpp"
#include "heckel/errors.hpp"
#include "heckel/hecke_l.hpp"
#include "heckel/kronecker.hpp"
#include "heckel/modular.hpp"
#include "heckel/special.hpp"
#include "heckel/verify.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace heckel;
using nlohmann::json;

namespace {

constexpr prec_t P = 128;

struct sub_check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct criterion {
    int id = 0;
    std::string title;
    double budget_seconds = 0;
    std::vector<sub_check> subs;
    double seconds = 0;
    /* sub-check names that are expected to fail; see README */
    std::vector<std::string> known_red;

    void add(std::string name, bool pass, std::string detail = "")
    {
        subs.push_back({std::move(name), pass, std::move(detail)});
    }
    bool is_known_red(sub_check const& s) const
    {
        for (auto const& k : known_red)
            if (s.name.rfind(k, 0) == 0)
                return true;
        return false;
    }
    long failures() const
    {
        long n = 0;
        for (auto const& s : subs)
            n += !s.pass;
        return n + (seconds > budget_seconds);
    }
    long unexpected_failures() const
    {
        long n = seconds > budget_seconds;
        for (auto const& s : subs)
            n += !s.pass && !is_known_red(s);
        return n;
    }
};

std::string sci(double x)
{
    char b[32];
    std::snprintf(b, sizeof b, "%.2e", x);
    return b;
}

ideal I(long d, char const* s)
{
    return parse_ideal(d, s);
}

std::vector<hecke_character> nontrivial(ray_class_ptr const& G)
{
    std::vector<hecke_character> out;
    for (auto const& c : characters(G))
        if (!c.is_trivial())
            out.push_back(c);
    return out;
}

std::string tag(long d, ideal const& f)
{
    return "d=" + std::to_string(d) + " f=" + f.to_string();
}

/* runs f, turning an exception into a failed sub-check */
void guarded(criterion& c, std::string const& name, std::function<void()> const& f)
{
    try {
        f();
    } catch (std::exception const& e) {
        c.add(name, false, std::string("error: ") + e.what());
    }
}

eval_context ctx{P, 1};

void criterion_1(criterion& c)
{
    hecke_character one = characters(make_ray_class_group(ideal::unit(-4))).at(0);
    complex z = L_continued(one, complex(0, 0, P), 0, ctx);
    double err = abs(z - complex(real(-0.25, P), real(0L, P))).to_double();
    c.add("zeta_K(0) = -1/4", err < 1e-8, "|err| " + sci(err));
}

void criterion_2(criterion& c)
{
    for (char const* fs : {"(3)", "(4+w)"}) {
        ideal f = I(-4, fs);
        auto chars = nontrivial(make_ray_class_group(f));
        if (chars.empty())
            c.add("no nontrivial characters " + tag(-4, f), true, "vacuous: Cl_f is trivial");
        for (auto const& chi : chars)
            for (int j : {-1, -2}) {
                double v = abs(L_continued(chi, complex(j, 0, P), 0, ctx)).to_double();
                c.add("L(chi, " + std::to_string(j) + ") = 0 " + tag(-4, f) + " chi" + chi.exps_string(),
                        v < 1e-8, "|L| " + sci(v));
            }
    }
}

void criterion_3(criterion& c)
{
    long primitive = 0;
    for (char const* fs : {"(3)", "(4+w)", "(3)(4+w)", "(4+w)^2"}) {
        ideal f = I(-4, fs);
        for (auto const& chi : nontrivial(make_ray_class_group(f))) {
            if (!chi.is_primitive())
                continue;
            primitive++;
            for (int j : {-1, -2}) {
                std::string name = "|D(chi, " + std::to_string(j) + ")| = |L'| " + tag(-4, f) + " chi" + chi.exps_string();
                guarded(c, name, [&] {
                    real D = abs(deninger_value(chi, j, ctx));
                    real L = abs(L_prime_at(chi, j, ctx));
                    double r = (abs(D - L) / L).to_double();
                    c.add(name, r < 1e-6, "rel " + sci(r));
                });
            }
        }
    }
    c.add("primitive nontrivial characters present", primitive > 0, std::to_string(primitive) + " characters");
}

void criterion_4(criterion& c)
{
    /* elliptic-unit branch */
    ideal f = I(-4, "(3)");
    for (auto const& chi : nontrivial(make_ray_class_group(f))) {
        guarded(c, "klf d=-4", [&] {
            complex lp = L_prime_at(chi, 0, ctx);
            complex r1 = kronecker_limit_rhs(chi, I(-4, "(4+w)"), ctx);
            complex r2 = kronecker_limit_rhs(chi, I(-4, "(7+2*w)"), ctx);
            double e = abs(abs(r1) - abs(lp)).to_double();
            c.add("|rhs| = |L'(chi, 0)| " + tag(-4, f), e < 1e-6, "|err| " + sci(e));
            double a = abs(r1 - r2).to_double();
            c.add("aux independence " + tag(-4, f), a < 1e-8, "|rhs(a1) - rhs(a2)| " + sci(a));
        });
    }
    /* class group branch */
    long d = -23;
    quad_field K = quad_field::make(d);
    ideal p3 = factor_rational_prime(K, 3).primes[0], p13 = factor_rational_prime(K, 13).primes[0];
    for (auto const& chi : nontrivial(make_ray_class_group(ideal::unit(d)))) {
        guarded(c, "klf d=-23", [&] {
            complex lp = L_prime_at(chi, 0, ctx);
            complex r1 = kronecker_limit_rhs(chi, p3, ctx), r2 = kronecker_limit_rhs(chi, p13, ctx);
            double e = abs(abs(r1) - abs(lp)).to_double();
            c.add("|rhs| = |L'(chi, 0)| d=-23 f=(1) chi" + chi.exps_string(), e < 1e-6, "|err| " + sci(e));
            double a = abs(r1 - r2).to_double();
            c.add("aux independence d=-23 chi" + chi.exps_string(), a < 1e-8, "|rhs(a1) - rhs(a2)| " + sci(a));
        });
    }
}

void criterion_5(criterion& c)
{
    bool ok = true;
    for (int k = 0; k <= 12; k++) {
        rational_poly B = bernoulli_poly(k);
        for (long a = 1; a <= 7; a++) {
            rational_poly S;
            for (long i = 0; i < a; i++)
                S += B.compose_affine(ratio(1, a), ratio(i, a));
            mpz_class ak;
            mpz_ui_pow_ui(ak.get_mpz_t(), a, k > 0 ? k - 1 : 0);
            rational scale = k > 0 ? rational(ak) : ratio(1, a);
            ok = ok && S * scale == B;
        }
    }
    c.add("bernoulli distribution relation k <= 12, a <= 7", ok);

    for (long N : {5L, 7L})
        for (long Nt : {2L, 3L})
            for (int j : {-1, -2}) {
                std::string t = " N=" + std::to_string(N) + " Nt=" + std::to_string(Nt) + " j=" + std::to_string(j);
                kernel_check_result r = beta_prime_kernel_check(j, N, Nt, {1, 0}, beta_prime_variant::stated);
                c.add("horospherical kernel stated" + t, r.in_kernel,
                        r.in_kernel ? "" : "rho = " + r.worst.get_str() + " on a generator");
            }

    struct modulus { long d; char const* f; };
    std::vector<modulus> moduli{{-4, "(1)"}, {-4, "(2)"}, {-4, "(3)"}, {-4, "(4+w)"}, {-4, "(1+w)"},
        {-4, "(3)(4+w)"}, {-4, "(4+w)^2"}, {-4, "(5)"}, {-4, "(9)"}, {-4, "(6)"},
        {-3, "(1)"}, {-3, "(2)"}, {-3, "(3)"}, {-23, "(1)"}, {-23, "(2)"}, {-23, "(3)"}};
    long bad = 0;
    std::string which;
    for (auto const& m : moduli) {
        ray_class_ptr G = make_ray_class_group(I(m.d, m.f));
        long rhs = G->h * G->phif * G->wf / G->K.w;
        if (G->order() != rhs || G->h * G->phif * G->wf % G->K.w != 0) {
            bad++;
            which += " " + tag(m.d, G->modulus);
        }
    }
    c.add("ray class order identity on " + std::to_string(moduli.size()) + " moduli", bad == 0, which);

    for (char const* fs : {"(3)(4+w)", "(9)(4+w)", "(4+w)^2"}) {
        ray_class_ptr G = make_ray_class_group(I(-4, fs));
        for (auto const& chi : characters(G)) {
            if (chi.is_primitive())
                continue;
            euler_identity_result e = euler_factor_identity(chi, 5000);
            c.add("euler factor identity " + tag(-4, G->modulus) + " chi" + chi.exps_string(), e.holds,
                    e.holds ? std::to_string(e.checked) + " coefficients" : "first mismatch at " + std::to_string(e.first_mismatch));
        }
    }
}

complex raw_theta12(complex const& z, oriented_lattice const& L, oriented_lattice const& La, long na)
{
    return pow(theta_function(z, L), na) / theta_function(z, La);
}

void criterion_6(criterion& c)
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0, 1), fr(-0.5, 0.5), ht(0.9, 1.8);
    std::uniform_int_distribution<long> sh(-3, 3);
    double worst = 0;
    for (int t = 0; t < 20; t++) {
        complex ua(complex(real(fr(rng), P), real(ht(rng), P)), P + 8);
        oriented_lattice La(ua, complex(1, 0, P + 8));
        oriented_lattice L(ua * 5L - complex(t % 5, 0, P + 8), La.v());
        complex z(L.point(real(u(rng), P), real(u(rng), P)), P);
        real base = theta12(z, L, La, 5).log_abs;
        oriented_lattice Lw = L.with_prec(P + 64), Law = La.with_prec(P + 64);
        complex zw = complex(z, P + 64) + Lw.point(sh(rng), sh(rng));
        real shifted = log(abs(raw_theta12(zw, Lw, Law, 5))) / 12L;
        worst = std::max(worst, abs(shifted - base).to_double());
    }
    c.add("theta12 ellipticity, 20 random pairs", worst < 1e-10, "max |diff| " + sci(worst));

    ideal a = I(-4, "(4+w)");
    oriented_lattice L(complex(0, 1, P), complex(1, 0, P));
    oriented_lattice La = oriented_basis(a.inverse(), P);
    complex z(real(0.23, P), real(0.41, P));
    real want = theta12(z, L, La, a.inorm()).log_abs;
    for (long b : {2L, 3L}) {
        real s(0L, P);
        for (long m = 0; m < b; m++)
            for (long n = 0; n < b; n++)
                s += theta12((z + L.point(m, n)) / b, L, La, a.inorm()).log_abs;
        double e = abs(s - want).to_double();
        c.add("theta12 norm property b=" + std::to_string(b), e < 1e-10, "|diff| " + sci(e));
    }
    {
        complex beta(3, 2, P);
        real s(0L, P);
        for (long k = 0; k < 13; k++)
            s += theta12((z + complex(k, 0, P)) / beta, L, La, a.inorm()).log_abs;
        double e = abs(s - want).to_double();
        c.add("theta12 norm property b=3+2i", e < 1e-10, "|diff| " + sci(e));
    }

    struct nc { char const* a; char const* f; char const* p; };
    for (nc s : {nc{"(4+w)", "(3)", "(3)"}, nc{"(7+2*w)", "(3)", "(4+w)"}, nc{"(4+w)", "(1)", "(3)"}}) {
        std::string name = std::string("norm compatibility f=") + s.f + " p=" + s.p;
        guarded(c, name, [&] {
            norm_compat_report r = norm_compat_check(I(-4, s.a), I(-4, s.f), I(-4, s.p), ctx);
            double e = abs(r.lhs - r.rhs).to_double();
            c.add(name + " (" + r.which_case + ")", e < 1e-10, "|diff| " + sci(e));
        });
    }

    for (char const* aux : {"(7+2*w)", "(5+4*w)"}) {
        ray_class_ptr G = make_ray_class_group(I(-4, "(3)(4+w)"));
        real s(0L, P);
        for (auto const& e : elliptic_unit_conjugates(I(-4, aux), G, ctx))
            s += e.theta.log_abs;
        double v = abs(s).to_double();
        c.add(std::string("global unit f=(3)(4+w) a=") + aux, v < 1e-10, "|sum| " + sci(v));
    }

    struct sym { char const* f; char const* a; char const* c; };
    for (sym s : {sym{"(3)", "(4+w)", "(7+2*w)"}, sym{"(3)(4+w)", "(7+2*w)", "(5+w)"}, sym{"(9)", "(4+w)", "(4+3*w)"}}) {
        ideal f = I(-4, s.f), aa = I(-4, s.a), cc = I(-4, s.c);
        real l = elliptic_log_abs(aa, f, P) * cc.inorm() - elliptic_log_abs(aa, cc.inverse() * f, P);
        real r = elliptic_log_abs(cc, f, P) * aa.inorm() - elliptic_log_abs(cc, aa.inverse() * f, P);
        double e = abs(l - r).to_double();
        c.add(std::string("symmetric galois relation f=") + s.f, e < 1e-10, "|diff| " + sci(e));
    }
}

void criterion_7(criterion& c)
{
    std::vector<oriented_lattice> lattices{oriented_lattice(complex(0, 1, P), complex(1, 0, P)),
        oriented_lattice(complex(real(0.3, P), real(1.7, P)), complex(real(1.1, P), real(0.2, P))),
        oriented_lattice(complex(real(-0.5, P), real(0.9, P)), complex(real(1.0, P), real(0L, P)))};
    complex x(real(0.37, P), real(0.21, P));
    double worst = 0, worst_bound = 0;
    for (int j : {-2, -3, -4})
        for (auto const& L : lattices) {
            sum_result a = eisenstein_kronecker_Mj(x, L, j, sum_method::accelerated, ctx);
            sum_result b = eisenstein_kronecker_Mj(x, L, j, sum_method::direct, ctx, 2.5e-11);
            worst = std::max(worst, abs(a.value - b.value).to_double());
            worst_bound = std::max(worst_bound, b.error_bound.to_double());
        }
    c.add("M_j direct vs accelerated, 3 lattices x j in {-2,-3,-4}", worst < 1e-10 && worst_bound < 1e-10,
            "max |diff| " + sci(worst) + ", max direct bound " + sci(worst_bound));

    worst = 0;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> fr(-0.5, 0.5), ht(0.9, 1.6), sh(0, 1);
    for (int t = 0; t < 4; t++) {
        oriented_lattice L(complex(real(fr(rng), P), real(ht(rng), P)), complex(1, 0, P));
        complex y = L.point(real(sh(rng), P), real(sh(rng), P));
        for (long s : {2L, 3L}) {
            complex a = epstein_continued(complex(s, 0, P), L, y, epstein_kind::shifted, 0, ctx);
            sum_result b = epstein_direct(s, L, y, ctx, s == 2 ? 500 : 200);
            double e = abs(a - b.value).to_double();
            worst = std::max(worst, e);
            if (e > b.error_bound.to_double() * 1.0001 + 1e-30)
                worst = std::max(worst, 1.0);
        }
    }
    c.add("epstein continued vs direct at s in {2,3}", worst < 1e-10, "max |diff| " + sci(worst));

    double bound = std::ldexp(1.0, -int(P) + 10);
    double wm = 0, wh = 0;
    for (int t = 0; t < 5; t++) {
        complex tau(real(fr(rng), P), real(ht(rng), P));
        complex lhs = delta_q_product(complex(-1, 0, P) / tau);
        complex rhs = pow(tau, 12L) * delta_q_product(tau);
        wm = std::max(wm, (abs(lhs - rhs) / abs(rhs)).to_double());
        oriented_lattice L(tau, complex(1, 0, P));
        double r = 0.5 + sh(rng) * 1.5, ang = sh(rng) * 2 * M_PI;
        complex lam(real(r * std::cos(ang), P), real(r * std::sin(ang), P));
        complex h1 = ramanujan_delta(L.scaled(lam)) * pow(lam, 12L), h0 = ramanujan_delta(L);
        wh = std::max(wh, (abs(h1 - h0) / abs(h0)).to_double());
    }
    c.add("delta modularity", wm < bound, "max rel " + sci(wm) + " vs " + sci(bound));
    c.add("delta homogeneity", wh < bound, "max rel " + sci(wh) + " vs " + sci(bound));

    /* kappa = N(P)^e, e in [-4, 4], with P G or conj(P) G; the survivor over all instances */
    struct inst { long d; long p; };
    std::vector<std::pair<int, bool> > alive;
    for (int e = -4; e <= 4; e++)
        for (bool cj : {false, true})
            alive.push_back({e, cj});
    double worst_rel = 0;
    for (inst s : {inst{-4, 2}, inst{-23, 3}, inst{-4, 5}}) {
        ideal Pr = factor_rational_prime(quad_field::make(s.d), s.p).primes[0];
        field_element y(s.d, ratio(1, 3), ratio(1, 7));
        for (int j : {-1, -2}) {
            std::vector<std::pair<int, bool> > next;
            for (bool cj : {false, true}) {
                distribution_sides r = p_distribution(Pr, ideal::unit(s.d), y, j, cj, ctx);
                for (auto const& [e, cc] : alive) {
                    if (cc != cj)
                        continue;
                    complex rhs = r.sub_sum * pow(real(s.p, P), real(e, P));
                    double rel = (abs(r.lhs - rhs) / abs(r.lhs)).to_double();
                    if (rel < 1e-10) {
                        next.push_back({e, cc});
                        if (e == 1 && cc)
                            worst_rel = std::max(worst_rel, rel);
                    }
                }
            }
            alive = next;
        }
    }
    bool unique = alive.size() == 1;
    std::string found = unique ? "kappa = N(P)^" + std::to_string(alive[0].first)
            + (alive[0].second ? " on conj(P) G" : " on P G") : std::to_string(alive.size()) + " candidates survive";
    c.add("M_j distribution identity, N(P) in {2,3,5}", unique, found + ", max rel " + sci(worst_rel));
}

std::string without_timing(std::string const& text)
{
    json j = json::parse(text);
    j.erase("timing");
    return j.dump(2);
}

std::string read_file(std::string const& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_8(criterion& c, std::string const& cli)
{
    if (!cli.empty()) {
        std::string dir = "/tmp/heckel-acceptance-" + std::to_string(::getpid());
        std::vector<std::string> outs;
        bool ran = std::system(("mkdir -p " + dir).c_str()) == 0;
        for (int run = 0; run < 3; run++) {
            int threads = run == 1 ? 4 : 1;
            std::string out = dir + "/r" + std::to_string(run) + ".json";
            std::string cmd = cli + " verify --threads " + std::to_string(threads) + " --out " + out + " > /dev/null";
            int rc = std::system(cmd.c_str());
            /* status 1 is a failed check, which does not concern determinism */
            ran = ran && WIFEXITED(rc) && WEXITSTATUS(rc) <= 1;
            outs.push_back(ran ? without_timing(read_file(out)) : "");
        }
        ran = std::system(("rm -rf " + dir).c_str()) == 0 && ran;
        c.add("verify runs complete", ran);
        c.add("repeat at 1 thread byte-identical", ran && outs[0] == outs[2]);
        c.add("1 thread vs 4 threads byte-identical", ran && outs[0] == outs[1]);
        return;
    }
    suite_config cfg;
    cfg.threads = 1;
    std::string a = emit_deterministic_json(run_suite(cfg));
    cfg.threads = 4;
    std::string b = emit_deterministic_json(run_suite(cfg));
    c.add("1 thread vs 4 threads byte-identical (in process)", a == b);
}

}

int main(int argc, char** argv)
{
    bool strict = false, verbose = false;
    int only = 0;
    std::string cli;
    for (int i = 1; i < argc; i++) {
        if (!std::strcmp(argv[i], "--strict"))
            strict = true;
        else if (!std::strcmp(argv[i], "--verbose"))
            verbose = true;
        else if (!std::strcmp(argv[i], "--cli") && i + 1 < argc)
            cli = argv[++i];
        else if (!std::strcmp(argv[i], "--only") && i + 1 < argc)
            only = std::atoi(argv[++i]);
        else {
            std::cerr << "usage: acceptance [--strict] [--verbose] [--only N] [--cli PATH]\n";
            return 2;
        }
    }

    std::vector<criterion> cs(8);
    cs[0] = {1, "Dedekind zeta of Q(i) at 0", 10, {}, 0, {}};
    cs[1] = {2, "first order zeros", 60, {}, 0, {}};
    cs[2] = {3, "lattice-sum formula vs continuation", 300, {}, 0, {}};
    cs[3] = {4, "Kronecker limit formula", 120, {}, 0, {}};
    cs[4] = {5, "exact identities", 600, {}, 0, {"horospherical kernel stated"}};
    cs[5] = {6, "elliptic units", 600, {}, 0, {}};
    cs[6] = {7, "numerical infrastructure", 900, {}, 0, {}};
    cs[7] = {8, "determinism", 1800, {}, 0, {}};
    std::vector<std::function<void(criterion&)> > run{criterion_1, criterion_2, criterion_3, criterion_4,
        criterion_5, criterion_6, criterion_7, [&](criterion& c) { criterion_8(c, cli); }};

    long unexpected = 0, failed = 0;
    for (size_t i = 0; i < cs.size(); i++) {
        criterion& c = cs[i];
        if (only && c.id != only)
            continue;
        auto t0 = std::chrono::steady_clock::now();
        guarded(c, "criterion " + std::to_string(c.id), [&] { run[i](c); });
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        long f = c.failures();
        failed += f > 0;
        unexpected += c.unexpected_failures() > 0;
        char head[160];
        std::snprintf(head, sizeof head, "criterion %d %s  %s (%zu checks, %ld failed, %.1f s of %.0f s)",
                c.id, f ? "FAIL" : "PASS", c.title.c_str(), c.subs.size(), f, c.seconds, c.budget_seconds);
        std::cout << head;
        if (f && !c.unexpected_failures())
            std::cout << "  known red: " << c.known_red[0];
        std::cout << "\n";
        for (auto const& s : c.subs)
            if (verbose || !s.pass)
                std::cout << "    " << (s.pass ? "pass " : "FAIL ") << s.name
                          << (s.detail.empty() ? "" : "  [" + s.detail + "]") << "\n";
        std::cout.flush();
    }
    long total = only ? 1 : 8;
    std::cout << (failed ? std::to_string(failed) + " of " + std::to_string(total) + " criteria fail"
            : "all " + std::to_string(total) + " criteria pass");
    if (failed && !unexpected)
        std::cout << ", all failures on the known-red list";
    std::cout << "\n";
    if (strict)
        return failed ? 1 : 0;
    return unexpected ? 1 : 0;
}
