#ifndef HECKEL_ELLIPTIC_UNITS_HPP_
#define HECKEL_ELLIPTIC_UNITS_HPP_

#include "heckel/lattice.hpp"
#include "heckel/mp.hpp"
#include "heckel/parallel.hpp"
#include "heckel/quad_field.hpp"
#include "heckel/ray_class.hpp"

#include <string>
#include <vector>

namespace heckel {

/* the 12th power theta^{N a}(z; L) / theta(z; a^{-1} L) and (1/12) log|.| */
struct theta_value {
    complex value12;
    real log_abs;
};

/* L and La = a^{-1} L as complex lattices, na = N(a) */
theta_value theta12(complex const& z, oriented_lattice const& L, oriented_lattice const& La, long na);
/* L the embedding of the ideal g; divisor_error when z lies in a^{-1} g */
theta_value theta12(complex const& z, ideal const& g, ideal const& a, prec_t prec);
theta_value theta12(field_element const& z, ideal const& g, ideal const& a, prec_t prec);

/* a integral and prime to 6 f */
void check_auxiliary(ideal const& a, ideal const& f);

struct elliptic_unit {
    ideal aux, conductor;
    size_t class_label = 0;
    ideal class_rep;        /* c; the conjugate is theta12(1; c^{-1} f) */
    theta_value theta;
};

elliptic_unit elliptic_unit_z(ideal const& a, ray_class_ptr const& G, size_t class_label, prec_t prec);
/* one per class label, in label order */
std::vector<elliptic_unit> elliptic_unit_conjugates(ideal const& a, ray_class_ptr const& G,
        eval_context const& ctx);
/* log|a z_g| for the lattice g itself (point 1) */
real elliptic_log_abs(ideal const& a, ideal const& g, prec_t prec);

/* Delta(O_K) / Delta(a^{-1}) */
complex u_of_a(ideal const& a, prec_t prec);
/* log|u(a)^{Art(c)}| = log|Delta(c^{-1})| - log|Delta(a^{-1} c^{-1})|, per class index */
std::vector<real> u_conjugate_log_abs(ideal const& a, class_group_data const& cl, prec_t prec);

struct norm_compat_report {
    std::string which_case;     /* "p | f", "p does not divide f", "f = 1" */
    real lhs, rhs;
};

norm_compat_report norm_compat_check(ideal const& a, ideal const& f, ideal const& p,
        eval_context const& ctx);

}

#endif	/* HECKEL_ELLIPTIC_UNITS_HPP_ */
