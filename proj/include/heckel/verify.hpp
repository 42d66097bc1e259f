#ifndef HECKEL_VERIFY_HPP_
#define HECKEL_VERIFY_HPP_

#include "heckel/hecke_l.hpp"
#include "heckel/kronecker.hpp"
#include "heckel/mp.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace heckel {

extern char const* const kVersion;
/* bumped whenever the layout of cached tables changes */
constexpr int kCacheSchema = 1;

struct suite_config {
    std::vector<long> discs{-4};
    std::vector<std::string> conductors{"(3)", "(4+w)"};
    std::vector<int> js{-1, -2};
    prec_t prec = 128;
    /* per check family, raised to the family floor when smaller */
    std::map<std::string, double> tolerance_overrides;
    std::string method = "both";            /* deninger | continued | both */
    std::string cache_dir;                  /* empty: no cache */
    std::string format = "json";
    unsigned threads = 1;
    uint64_t seed = 0;
    beta_prime_variant beta = beta_prime_variant::stated;

    void validate() const;
};

/* default tolerance of a check family */
double default_tolerance(std::string const& family);

struct check_record {
    std::string name;
    std::string family;
    std::string anchor;     /* the identity that is checked */
    std::string inputs;     /* compact JSON */
    std::string lhs, rhs;
    double tolerance = 0;
    bool pass = false;
    std::string diagnostic;
    double seconds = 0;
};

struct verification_report {
    std::string suite_id;
    std::string inputs;             /* compact JSON of the config, re-runnable */
    std::string calibration;        /* compact JSON of the calibration artifacts */
    prec_t prec = 128;
    std::string version;
    uint64_t seed = 0;
    unsigned threads = 1;
    double total_seconds = 0;
    std::vector<check_record> checks;

    bool pass() const;
};

/* numerics, structure, lattice sums, elliptic units, L-values in that order;
 * failures of every kind become failed checks */
verification_report run_suite(suite_config const& cfg);

std::string emit(verification_report const& r, std::string const& format);
/* JSON without the timing block */
std::string emit_deterministic_json(verification_report const& r);
verification_report parse_report_json(std::string const& text);
/* write to path.tmp then rename */
void write_atomic(std::string const& path, std::string const& content);

std::string config_to_json(suite_config const& cfg);
suite_config config_from_json(std::string const& text);

/* HECKEL_CACHE_DIR when set, else the given directory */
std::string resolve_cache_dir(std::string const& flag);

/* cached class group and character table of modulus f, as JSON */
std::string group_table_json(ray_class_ptr const& G);
std::string cached_group_table(ray_class_ptr const& G, std::string const& cache_dir);

}

#endif	/* HECKEL_VERIFY_HPP_ */
