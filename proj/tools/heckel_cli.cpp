#include "heckel/elliptic_units.hpp"
#include "heckel/errors.hpp"
#include "heckel/hecke_l.hpp"
#include "heckel/quad_field.hpp"
#include "heckel/ray_class.hpp"
#include "heckel/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace heckel;
using json = nlohmann::json;

namespace {

struct global_opts {
    long prec = 128;
    unsigned threads = 1;
    std::string cache;
    std::string format = "json";
    uint64_t seed = 0;
    bool prec_given = false, seed_given = false;
};

/* flat rendering of a JSON object for the csv and table formats */
void flatten(json const& j, std::string const& prefix, std::vector<std::pair<std::string, std::string> >& out)
{
    if (j.is_object()) {
        for (auto const& [k, v] : j.items())
            flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array()) {
        for (size_t i = 0; i < j.size(); i++)
            flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
    } else {
        out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
    }
}

void print(json const& j, std::string const& format)
{
    if (format == "json") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::vector<std::pair<std::string, std::string> > rows;
    flatten(j, "", rows);
    if (format == "csv") {
        std::cout << "key,value\n";
        for (auto const& [k, v] : rows) {
            bool q = v.find_first_of(",\"\n") != std::string::npos;
            std::string e;
            for (char c : v)
                e += c == '"' ? std::string("\"\"") : std::string(1, c);
            std::cout << k << "," << (q ? "\"" + e + "\"" : v) << "\n";
        }
        return;
    }
    size_t w = 0;
    for (auto const& r : rows)
        w = std::max(w, r.first.size());
    for (auto const& [k, v] : rows)
        std::cout << k << std::string(w - k.size() + 2, ' ') << v << "\n";
}

quad_field make_field(long d)
{
    std::string why;
    if (d >= 0 || !is_fundamental_discriminant(d, &why))
        throw invalid_input("discriminant " + std::to_string(d)
                + " is not a negative fundamental discriminant" + (why.empty() ? "" : ": " + why));
    return quad_field::make(d);
}

json character_json(hecke_character const& chi)
{
    return {{"index", chi.index}, {"exponents", chi.exps}, {"conductor", chi.conductor.to_string()},
        {"primitive", chi.is_primitive()}, {"trivial", chi.is_trivial()}};
}

std::string num(real const& x) { return x.to_string(25); }

int cmd_field(global_opts const& g, long d)
{
    quad_field K = make_field(d);
    class_group_data cl = class_group(K);
    json forms = json::array();
    for (auto const& f : cl.forms)
        forms.push_back({f.a, f.b, f.c});
    json j{{"disc", d}, {"class_number", cl.order()}, {"roots_of_unity", K.w},
        {"class_group", cl.G.invariants}, {"reduced_forms", forms},
        {"omega", "(d + sqrt(d))/2"}, {"covolume", num(K.covolume(g.prec))}};
    print(j, g.format);
    return 0;
}

int cmd_rayclass(global_opts const& g, long d, std::string const& lit)
{
    make_field(d);
    ray_class_ptr G = make_ray_class_group(parse_ideal(d, lit));
    if (!g.cache.empty() || !resolve_cache_dir(g.cache).empty())
        cached_group_table(G, resolve_cache_dir(g.cache));
    json gens = json::array();
    for (auto const& I : G->generator_ideals)
        gens.push_back(I.to_string());
    json j{{"disc", d}, {"modulus", G->modulus.to_string()}, {"invariants", G->invariants},
        {"order", G->order()}, {"h", G->h}, {"phi", G->phif}, {"w_f", G->wf}, {"w_K", G->K.w},
        {"generators", gens},
        {"order_identity", G->order() * G->K.w == G->h * G->phif * G->wf}};
    print(j, g.format);
    return 0;
}

int cmd_chars(global_opts const& g, long d, std::string const& lit)
{
    make_field(d);
    ray_class_ptr G = make_ray_class_group(parse_ideal(d, lit));
    auto chars = characters(G);
    json cs = json::array();
    for (auto const& chi : chars)
        cs.push_back(character_json(chi));
    json orbits = json::array();
    for (auto const& o : rational_orbits(chars))
        orbits.push_back(o);
    json j{{"disc", d}, {"modulus", G->modulus.to_string()}, {"invariants", G->invariants},
        {"characters", cs}, {"rational_orbits", orbits}};
    print(j, g.format);
    return 0;
}

json check_json(std::string const& name, real const& lhs, real const& rhs, double tol, bool& failed)
{
    double diff = abs(lhs - rhs).to_double();
    bool ok = diff <= tol;
    if (!ok)
        failed = true;
    char t[32];
    std::snprintf(t, sizeof t, "%.0e", tol);
    return {{"name", name}, {"pass", ok}, {"lhs", num(lhs)}, {"rhs", num(rhs)}, {"tol", t}};
}

int cmd_units(global_opts const& g, long d, std::string const& lit, std::string const& aux, bool value12)
{
    make_field(d);
    ideal f = parse_ideal(d, lit);
    ideal a = parse_ideal(d, aux);
    eval_context ctx{prec_t(g.prec), g.threads};
    json j{{"disc", d}, {"conductor", f.to_string()}, {"aux", a.to_string()}};
    json us = json::array(), checks = json::array();
    bool failed = false;
    if (f.is_unit()) {
        class_group_data cl = class_group(quad_field::make(d));
        auto logs = u_conjugate_log_abs(a, cl, ctx.prec);
        for (size_t k = 0; k < logs.size(); k++)
            us.push_back({{"class", cl.representative(k).to_string()}, {"log_abs_u", num(logs[k])}});
    } else {
        check_auxiliary(a, f);
        ray_class_ptr G = make_ray_class_group(f);
        real sum(0L, ctx.prec);
        for (auto const& u : elliptic_unit_conjugates(a, G, ctx)) {
            json e{{"label", u.class_label}, {"class_rep", u.class_rep.to_string()},
                {"log_abs", num(u.theta.log_abs)}};
            if (value12)
                e["value12"] = u.theta.value12.to_string(25);
            us.push_back(e);
            sum += u.theta.log_abs;
        }
        j["log_abs_sum"] = num(sum);
        auto fac = factor(f);
        if (fac.size() >= 2)
            checks.push_back(check_json("integrality: sum of log_abs", sum, real(0L, ctx.prec), 1e-10, failed));
        for (auto const& [P, e] : fac) {
            ideal lower = f * P.inverse();
            norm_compat_report r = norm_compat_check(a, lower, P, ctx);
            checks.push_back(check_json("norm compatibility " + lower.to_string() + " -> " + f.to_string()
                        + " (" + r.which_case + ")", r.lhs, r.rhs, 1e-10, failed));
        }
    }
    j["conjugates"] = us;
    j["checks"] = checks;
    print(j, g.format);
    return failed ? 1 : 0;
}

long ipow(long b, int e)
{
    long r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json value_json(std::string const& method, complex const& v, double budget, double secs)
{
    char b[32];
    std::snprintf(b, sizeof b, "%.3e", budget);
    char s[32];
    std::snprintf(s, sizeof s, "%.3f", secs);
    return {{"method", method}, {"re", num(v.re)}, {"im", num(v.im)}, {"abs", num(abs(v))},
        {"error_budget", b}, {"seconds", s}};
}

int cmd_lvalue(global_opts const& g, long d, std::string const& lit, int j, long index, bool all,
        std::string const& method)
{
    make_field(d);
    if (method != "deninger" && method != "continued" && method != "both")
        throw invalid_input("method must be deninger, continued or both");
    if (j > 0)
        throw invalid_input("j must be <= 0");
    ideal f = parse_ideal(d, lit);
    ray_class_ptr G = make_ray_class_group(f);
    auto chars = characters(G);
    std::vector<hecke_character> sel;
    if (index >= 0) {
        if (index >= long(chars.size()))
            throw invalid_input("character index out of range");
        sel.push_back(chars[index]);
    } else {
        for (auto const& chi : chars)
            if (!chi.is_trivial())
                sel.push_back(chi);
        if (!all && !sel.empty())
            sel.resize(1);
    }
    eval_context ctx{prec_t(g.prec), g.threads};
    double budget_rel = std::ldexp(1.0, -int(g.prec) + 20);
    bool failed = false;
    json reports = json::array();
    for (auto const& chi : sel) {
        json r{{"field", {{"disc", d}}}, {"conductor", f.to_string()},
            {"character", {{"exponents", chi.exps}, {"conductor", chi.conductor.to_string()}}}, {"j", j}};
        json values = json::array(), checks = json::array(), notes = json::array();
        std::optional<complex> cont, den;
        if (method != "deninger") {
            auto t0 = std::chrono::steady_clock::now();
            complex v0 = L_continued(chi, complex(j, 0, ctx.prec), 0, ctx);
            double zt = 1e-8;
            bool zero = abs(v0) < zt;
            checks.push_back({{"name", "first order zero"}, {"pass", zero}, {"lhs", num(abs(v0))},
                    {"rhs", "0"}, {"tol", "1e-08"}});
            if (!zero)
                failed = true;
            complex v = L_continued(chi, complex(j, 0, ctx.prec), 1, ctx);
            values.push_back(value_json("continued", v, budget_rel * std::max(1.0, abs(v).to_double()),
                        seconds_since(t0)));
            cont = v;
        }
        if (method != "continued") {
            auto t0 = std::chrono::steady_clock::now();
            hecke_character prim = primitive_character(chi);
            auto const& H = *prim.group;
            std::string route = j == 0 ? "kronecker-limit" : "deninger";
            std::string skip;
            if (j < 0 && H.modulus.is_unit())
                skip = "deninger route needs a conductor other than (1)";
            else if (j < 0 && H.wf != 1)
                skip = "deninger route needs w_f = 1 on the conductor";
            std::optional<complex> v;
            if (skip.empty() && j == 0) {
                ideal six = ideal::integer(d, 6);
                std::optional<ideal> aux;
                for (long p = 5; !aux && p < 1000; p++)
                    if (is_prime_l(p))
                        for (auto const& P : factor_rational_prime(G->K, p).primes)
                            if (!aux && coprime(P, f * six) && (!H.modulus.is_unit() || *prim.value(P) != 0))
                                aux = P;
                if (!aux)
                    skip = "no auxiliary prime below 1000";
                else
                    v = kronecker_limit_rhs(prim, *aux, ctx);
            } else if (skip.empty()) {
                v = deninger_value(prim, j, ctx);
            }
            if (v) {
                /* Euler factors at the primes of the modulus not dividing the conductor */
                complex e(1, 0, ctx.prec);
                for (auto const& [P, k] : factor(f)) {
                    if (P.divides(prim.conductor) || !prim.value(P))
                        continue;
                    complex x = prim.value_complex(*prim.value(P), ctx.prec);
                    e = e * (complex(1, 0, ctx.prec) - x * real(ipow(P.inorm(), -j), ctx.prec));
                }
                *v = *v * e;
                values.push_back(value_json(route, *v, budget_rel * std::max(1.0, abs(*v).to_double()),
                            seconds_since(t0)));
                den = v;
            } else {
                notes.push_back(skip);
            }
        }
        if (cont && den) {
            real a = abs(*cont), b = abs(*den);
            double rel = b.is_zero() ? a.to_double() : (abs(a - b) / b).to_double();
            bool ok = rel <= 1e-6;
            if (!ok)
                failed = true;
            checks.push_back({{"name", "absolute values agree"}, {"pass", ok}, {"lhs", num(a)},
                    {"rhs", num(b)}, {"tol", "1e-06"}});
            if (j == 0) {
                double diff = abs(*cont - *den).to_double();
                bool ok2 = diff <= 1e-6 * std::max(1.0, b.to_double());
                if (!ok2)
                    failed = true;
                checks.push_back({{"name", "values agree"}, {"pass", ok2}, {"lhs", cont->to_string(25)},
                        {"rhs", den->to_string(25)}, {"tol", "1e-06"}});
            }
        }
        r["values"] = values;
        r["checks"] = checks;
        if (!notes.empty())
            r["notes"] = notes;
        reports.push_back(r);
    }
    if (reports.size() == 1)
        print(reports[0], g.format);
    else
        print(reports, g.format);
    return failed ? 1 : 0;
}

int cmd_verify(global_opts const& g, suite_config cfg, std::string const& inputs_file,
        std::string const& out_file)
{
    if (!inputs_file.empty()) {
        std::ifstream in(inputs_file);
        if (!in)
            throw invalid_input("cannot read " + inputs_file);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = config_from_json(ss.str());
    }
    if (inputs_file.empty() || g.prec_given)
        cfg.prec = g.prec;
    cfg.threads = g.threads;
    cfg.cache_dir = g.cache;
    cfg.format = g.format;
    if (inputs_file.empty() || g.seed_given)
        cfg.seed = g.seed;
    cfg.validate();
    verification_report r = run_suite(cfg);
    std::string text = emit(r, g.format);
    if (!out_file.empty())
        write_atomic(out_file, text);
    std::cout << text;
    return r.pass() ? 0 : 1;
}

}

int main(int argc, char** argv)
{
    CLI::App app{"Hecke L-function special values of imaginary quadratic fields"};
    app.require_subcommand(1);
    app.fallthrough();
    global_opts g;
    app.add_option("--prec", g.prec, "working precision in bits")->check(CLI::Range(64, 4096));
    app.add_option("--threads", g.threads, "worker threads (0: all cores)");
    app.add_option("--cache", g.cache, "cache directory (HECKEL_CACHE_DIR overrides)");
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv", "table"}));
    app.add_option("--seed", g.seed, "seed for randomized instances, recorded in reports");

    long d = -4;
    std::string lit = "(1)", aux, method = "both", inputs_file, out_file;
    int j = -1;
    long index = -1;
    bool all = false;

    auto* field = app.add_subcommand("field", "field invariants");
    field->add_option("--disc", d, "fundamental discriminant")->required();

    auto* ray = app.add_subcommand("rayclass", "ray class group of a modulus");
    ray->add_option("--disc", d)->required();
    ray->add_option("--conductor", lit, "ideal literal, e.g. (3), (4+w), [2,1,1]")->required();

    auto* chs = app.add_subcommand("chars", "characters of a ray class group");
    chs->add_option("--disc", d)->required();
    chs->add_option("--conductor", lit)->required();

    auto* un = app.add_subcommand("units", "elliptic-unit conjugates");
    un->add_option("--disc", d)->required();
    un->add_option("--conductor", lit)->required();
    un->add_option("--aux", aux, "auxiliary ideal prime to 6f")->required();
    bool value12 = false;
    un->add_flag("--value12", value12, "include the 12th-power values");

    auto* lv = app.add_subcommand("lvalue", "L'(chi, j) by the lattice-sum and continuation routes");
    lv->add_option("--disc", d)->required();
    lv->add_option("--conductor", lit)->required();
    lv->add_option("--j", j, "integer j <= 0")->required();
    auto* ci = lv->add_option("--char", index, "character index");
    lv->add_flag("--all", all, "all nontrivial characters")->excludes(ci);
    lv->add_option("--method", method)->check(CLI::IsMember({"deninger", "continued", "both"}));

    suite_config cfg;
    std::vector<long> discs;
    std::vector<std::string> conductors, tols;
    std::vector<int> js;
    std::string beta = "stated";
    bool no_conductors = false;
    auto* vf = app.add_subcommand("verify", "run the verification suite");
    vf->add_option("--disc", discs, "discriminants");
    vf->add_option("--conductor", conductors, "conductor literals");
    vf->add_flag("--no-conductors", no_conductors, "structural checks only");
    vf->add_option("--j", js, "negative integers j");
    vf->add_option("--tol", tols, "family=value tolerance overrides");
    vf->add_option("--method", cfg.method)->check(CLI::IsMember({"deninger", "continued", "both"}));
    vf->add_option("--beta-variant", beta)->check(CLI::IsMember({"stated", "degree_zero", "perturbed"}));
    vf->add_option("--inputs", inputs_file, "re-run the inputs block of a JSON report");
    vf->add_option("--out", out_file, "also write the report here");

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    g.prec_given = app.count("--prec") > 0;
    g.seed_given = app.count("--seed") > 0;
    try {
        if (field->parsed())
            return cmd_field(g, d);
        if (ray->parsed())
            return cmd_rayclass(g, d, lit);
        if (chs->parsed())
            return cmd_chars(g, d, lit);
        if (un->parsed())
            return cmd_units(g, d, lit, aux, value12);
        if (lv->parsed())
            return cmd_lvalue(g, d, lit, j, index, all, method);
        if (vf->parsed()) {
            if (!discs.empty())
                cfg.discs = discs;
            if (!conductors.empty())
                cfg.conductors = conductors;
            if (no_conductors)
                cfg.conductors.clear();
            if (!js.empty())
                cfg.js = js;
            for (auto const& t : tols) {
                auto eq = t.find('=');
                if (eq == std::string::npos)
                    throw invalid_input("--tol expects family=value");
                std::string fam = t.substr(0, eq);
                default_tolerance(fam);
                cfg.tolerance_overrides[fam] = std::stod(t.substr(eq + 1));
            }
            cfg.beta = beta == "stated" ? beta_prime_variant::stated
                : beta == "degree_zero" ? beta_prime_variant::degree_zero : beta_prime_variant::perturbed;
            return cmd_verify(g, cfg, inputs_file, out_file);
        }
    } catch (invalid_input const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (not_coprime const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (std::invalid_argument const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
