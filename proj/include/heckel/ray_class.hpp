#ifndef HECKEL_RAY_CLASS_HPP_
#define HECKEL_RAY_CLASS_HPP_

#include "heckel/abelian.hpp"
#include "heckel/quad_field.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace heckel {

/* O_K / f with residues x + y w, 0 <= x < a, 0 <= y < c */
struct residue_ring {
    long d = -4;
    ideal f;
    long a = 1, b = 0, c = 1;
    std::vector<ideal> primes;

    explicit residue_ring(ideal const& f);
    residue_ring() = default;
    long size() const { return a * c; }
    long index(long x, long y) const;
    std::pair<long, long> element(long idx) const { return {idx % a, idx / a}; }
    long mul(long i, long j) const;
    bool is_unit(long idx) const;
    /* residue of an element whose denominator is prime to f */
    long residue(field_element const& x) const;
};

struct units_mod_group {
    residue_ring R;
    std::vector<long> unit_of_residue;      /* -1 for non-units */
    std::vector<long> residue_of_unit;
    enumerated_group G;

    long order() const { return long(residue_of_unit.size()); }
    std::vector<long> dlog(field_element const& x) const;
    std::vector<long> dlog_residue(long res) const;
};

units_mod_group units_mod(ideal const& f, long norm_bound = 1000000);

long phi_f(ideal const& f);
long w_f(quad_field const& K, ideal const& f);

class ray_class_group {
  public:
    quad_field K;
    ideal modulus;
    class_group_data cl;
    units_mod_group U;
    std::vector<ideal> cl_gens;             /* coprime to modulus, in the SNF generator classes */
    std::vector<std::vector<ideal> > cl_gen_powers;
    std::vector<long> cl_orders;
    std::vector<field_element> cl_gammas;   /* cl_gens[i]^{h_i} = (gamma_i) */
    smith_form snf;
    std::vector<size_t> keep;
    std::vector<long> invariants;
    long wf = 1, phif = 1, h = 1;
    std::vector<ideal> generator_ideals;

    long order() const;
    long exponent() const { return invariants.empty() ? 1 : invariants.back(); }
    size_t rank() const { return invariants.size(); }

    /* SNF coordinates of the class of an ideal prime to the modulus */
    std::vector<long> artin_class(ideal const& a) const;
    /* class of a principal ideal (alpha) with alpha prime to the modulus */
    std::vector<long> class_of_element(field_element const& x) const;
    std::vector<long> class_of_unit_residue(long res) const;
    size_t label(std::vector<long> const& coords) const { return mixed_radix_index(coords, invariants); }
    std::vector<long> coords_of_label(size_t lbl) const { return mixed_radix_coords(lbl, invariants); }
    size_t class_label(ideal const& a) const { return label(artin_class(a)); }

    /* one integral representative per class label, prime to modulus * avoid */
    std::vector<ideal> representatives(ideal const& avoid) const;
    std::vector<ideal> representatives() const { return representatives(ideal::unit(K.d)); }

    /* classes of residues = 1 mod modulus / P^{v-t}, prime to the modulus */
    std::vector<std::vector<long> > local_kernel(ideal const& P, int t) const;

  private:
    std::vector<long> present(std::vector<long> const& u, std::vector<long> const& c) const;
    friend std::shared_ptr<ray_class_group const> make_ray_class_group(ideal const& f, long norm_bound);
};

typedef std::shared_ptr<ray_class_group const> ray_class_ptr;

ray_class_ptr make_ray_class_group(ideal const& f, long norm_bound = 1000000);

struct hecke_character {
    ray_class_ptr group;
    std::vector<long> exps;     /* chi(g_j) = e(exps[j] / d_j) */
    ideal conductor;
    size_t index = 0;

    long exponent() const { return group->exponent(); }
    bool is_trivial() const;
    bool is_primitive() const { return conductor == group->modulus; }
    /* chi(class) = e(k / exponent) */
    long value_exponent(std::vector<long> const& coords) const;
    /* nullopt when a is not prime to the modulus */
    std::optional<long> value(ideal const& a) const;
    complex value_complex(long k, prec_t prec) const;
    std::string exps_string() const;
};

std::vector<hecke_character> characters(ray_class_ptr const& G);
/* the primitive character on Cl of the conductor inducing chi */
hecke_character primitive_character(hecke_character const& chi);
/* Aut(C)-orbits, as index lists */
std::vector<std::vector<size_t> > rational_orbits(std::vector<hecke_character> const& chars);
/* chi^a */
hecke_character power(hecke_character const& chi, long a);

}

#endif	/* HECKEL_RAY_CLASS_HPP_ */
