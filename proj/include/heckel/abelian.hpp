#ifndef HECKEL_ABELIAN_HPP_
#define HECKEL_ABELIAN_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace heckel {

typedef std::vector<std::vector<long> > int_matrix;

/* U R V = diag(d); the group Z^r / rows(R) has coordinates c -> c V mod d */
struct smith_form {
    std::vector<long> diag;
    int_matrix V, Vinv;
};

smith_form smith_normal_form(int_matrix R, size_t ncols);

long gcd_l(long a, long b);
/* g = s a + t b */
long ext_gcd(long a, long b, long& s, long& t);
long mod_l(long a, long m);

/* a finite abelian group given by its multiplication table on indices 0..n-1 */
struct enumerated_group {
    std::vector<long> invariants;        /* d_1 | d_2 | ..., all > 1 */
    std::vector<size_t> generators;      /* element index of each SNF generator */
    std::vector<int32_t> dlog_table;     /* n * rank */
    std::vector<size_t> by_index;        /* mixed-radix index -> element */
    size_t order = 0;

    size_t rank() const { return invariants.size(); }
    std::vector<long> dlog(size_t elem) const;
    size_t mixed_index(std::vector<long> const& c) const;
    size_t element(std::vector<long> const& c) const { return by_index[mixed_index(c)]; }
};

enumerated_group build_group(size_t n, size_t identity,
        std::function<size_t(size_t, size_t)> const& mul);

/* helpers on coordinate vectors modulo invariants */
std::vector<long> reduce_coords(std::vector<long> c, std::vector<long> const& inv);
size_t mixed_radix_index(std::vector<long> const& c, std::vector<long> const& inv);
std::vector<long> mixed_radix_coords(size_t idx, std::vector<long> const& inv);

}

#endif	/* HECKEL_ABELIAN_HPP_ */
