#include "heckel/abelian.hpp"
#include "heckel/errors.hpp"

#include <cstdlib>
#include <utility>

namespace heckel {

long gcd_l(long a, long b)
{
    a = std::labs(a);
    b = std::labs(b);
    while (b) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

long ext_gcd(long a, long b, long& s, long& t)
{
    long s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (b) {
        long q = a / b;
        long r = a - q * b;
        a = b; b = r;
        long ns = s0 - q * s1; s0 = s1; s1 = ns;
        long nt = t0 - q * t1; t0 = t1; t1 = nt;
    }
    if (a < 0) {
        a = -a; s0 = -s0; t0 = -t0;
    }
    s = s0;
    t = t0;
    return a;
}

long mod_l(long a, long m)
{
    long r = a % m;
    return r < 0 ? r + m : r;
}

smith_form smith_normal_form(int_matrix A, size_t r)
{
    size_t m = A.size();
    for (auto & row : A)
        row.resize(r, 0);
    int_matrix V(r, std::vector<long>(r, 0)), Vi(r, std::vector<long>(r, 0));
    for (size_t i = 0; i < r; i++)
        V[i][i] = Vi[i][i] = 1;

    auto col_addmul = [&](size_t j, size_t t, long k) {
        /* col_j -= k col_t */
        if (k == 0)
            return;
        for (size_t i = 0; i < m; i++)
            A[i][j] -= k * A[i][t];
        for (size_t i = 0; i < r; i++)
            V[i][j] -= k * V[i][t];
        for (size_t i = 0; i < r; i++)
            Vi[t][i] += k * Vi[j][i];
    };
    auto col_swap = [&](size_t j, size_t t) {
        if (j == t)
            return;
        for (size_t i = 0; i < m; i++)
            std::swap(A[i][j], A[i][t]);
        for (size_t i = 0; i < r; i++)
            std::swap(V[i][j], V[i][t]);
        std::swap(Vi[j], Vi[t]);
    };
    auto col_neg = [&](size_t j) {
        for (size_t i = 0; i < m; i++)
            A[i][j] = -A[i][j];
        for (size_t i = 0; i < r; i++)
            V[i][j] = -V[i][j];
        for (size_t i = 0; i < r; i++)
            Vi[j][i] = -Vi[j][i];
    };

    size_t rank = std::min(m, r);
    for (size_t t = 0; t < rank; t++) {
        for (;;) {
            /* pivot: smallest nonzero entry of the trailing block */
            long best = 0;
            size_t bi = t, bj = t;
            for (size_t i = t; i < m; i++)
                for (size_t j = t; j < r; j++)
                    if (A[i][j] != 0 && (best == 0 || std::labs(A[i][j]) < best)) {
                        best = std::labs(A[i][j]);
                        bi = i; bj = j;
                    }
            if (best == 0)
                break;
            std::swap(A[t], A[bi]);
            col_swap(t, bj);
            bool clean = true;
            for (size_t i = t + 1; i < m; i++) {
                long q = A[i][t] / A[t][t];
                if (q)
                    for (size_t j = t; j < r; j++)
                        A[i][j] -= q * A[t][j];
                if (A[i][t] != 0)
                    clean = false;
            }
            for (size_t j = t + 1; j < r; j++) {
                col_addmul(j, t, A[t][j] / A[t][t]);
                if (A[t][j] != 0)
                    clean = false;
            }
            if (!clean)
                continue;
            /* divisibility of the remaining block */
            bool divides = true;
            for (size_t i = t + 1; i < m && divides; i++)
                for (size_t j = t + 1; j < r; j++)
                    if (A[i][j] % A[t][t] != 0) {
                        for (size_t jj = t; jj < r; jj++)
                            A[t][jj] += A[i][jj];
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        if (A[t][t] < 0)
            col_neg(t);
    }
    smith_form s;
    s.diag.resize(r, 0);
    for (size_t t = 0; t < rank; t++)
        s.diag[t] = A[t][t];
    s.V = std::move(V);
    s.Vinv = std::move(Vi);
    return s;
}

std::vector<long> reduce_coords(std::vector<long> c, std::vector<long> const& inv)
{
    for (size_t i = 0; i < inv.size(); i++)
        c[i] = mod_l(c[i], inv[i]);
    return c;
}

size_t mixed_radix_index(std::vector<long> const& c, std::vector<long> const& inv)
{
    size_t idx = 0;
    for (size_t i = 0; i < inv.size(); i++)
        idx = idx * inv[i] + mod_l(c[i], inv[i]);
    return idx;
}

std::vector<long> mixed_radix_coords(size_t idx, std::vector<long> const& inv)
{
    std::vector<long> c(inv.size());
    for (size_t i = inv.size(); i-- > 0;) {
        c[i] = idx % inv[i];
        idx /= inv[i];
    }
    return c;
}

std::vector<long> enumerated_group::dlog(size_t elem) const
{
    size_t r = rank();
    std::vector<long> c(r);
    for (size_t i = 0; i < r; i++)
        c[i] = dlog_table[elem * r + i];
    return c;
}

size_t enumerated_group::mixed_index(std::vector<long> const& c) const
{
    return mixed_radix_index(c, invariants);
}

enumerated_group build_group(size_t n, size_t identity,
        std::function<size_t(size_t, size_t)> const& mul)
{
    /* greedy generators: H grows as H x <x> */
    std::vector<long> pos(n, -1);
    std::vector<size_t> H{identity};
    std::vector<std::vector<long> > hc{{}};
    pos[identity] = 0;
    std::vector<size_t> gens;
    int_matrix rel;
    for (size_t x = 0; x < n && H.size() < n; x++) {
        if (pos[x] >= 0)
            continue;
        size_t p = x;
        long k = 1;
        while (pos[p] < 0) {
            p = mul(p, x);
            k++;
        }
        size_t r = gens.size();
        std::vector<long> row(r + 1, 0);
        for (size_t i = 0; i < r; i++)
            row[i] = -hc[pos[p]][i];
        row[r] = k;
        for (auto & rw : rel)
            rw.push_back(0);
        rel.push_back(row);
        gens.push_back(x);
        size_t hs = H.size();
        for (auto & c : hc)
            c.push_back(0);
        size_t xp = x;
        for (long i = 1; i < k; i++) {
            for (size_t h = 0; h < hs; h++) {
                size_t e = mul(H[h], xp);
                std::vector<long> c = hc[h];
                c[r] = i;
                pos[e] = H.size();
                H.push_back(e);
                hc.push_back(std::move(c));
            }
            xp = mul(xp, x);
        }
    }
    if (H.size() != n)
        throw error("group enumeration did not close");

    size_t r = gens.size();
    smith_form s = smith_normal_form(rel, r);
    std::vector<size_t> keep;
    enumerated_group G;
    G.order = n;
    for (size_t i = 0; i < r; i++)
        if (s.diag[i] != 1) {
            keep.push_back(i);
            G.invariants.push_back(s.diag[i]);
        }
    /* SNF generator j = prod_i gens[i]^{Vinv[j][i]} */
    auto power = [&](size_t x, long e) {
        e = mod_l(e, long(n));
        size_t acc = identity, b = x;
        while (e) {
            if (e & 1)
                acc = mul(acc, b);
            e >>= 1;
            if (e)
                b = mul(b, b);
        }
        return acc;
    };
    for (size_t j : keep) {
        size_t g = identity;
        for (size_t i = 0; i < r; i++)
            g = mul(g, power(gens[i], s.Vinv[j][i]));
        G.generators.push_back(g);
    }
    size_t rk = keep.size();
    G.dlog_table.assign(n * rk, 0);
    G.by_index.assign(n, 0);
    for (size_t h = 0; h < n; h++) {
        std::vector<long> c(rk);
        for (size_t jj = 0; jj < rk; jj++) {
            size_t j = keep[jj];
            long acc = 0;
            for (size_t i = 0; i < r; i++)
                acc += hc[h][i] * s.V[i][j];
            c[jj] = mod_l(acc, G.invariants[jj]);
            G.dlog_table[H[h] * rk + jj] = int32_t(c[jj]);
        }
        G.by_index[mixed_radix_index(c, G.invariants)] = H[h];
    }
    return G;
}

}
