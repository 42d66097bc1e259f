#include "heckel/rational.hpp"
#include "heckel/errors.hpp"

#include <mutex>
#include <sstream>

namespace heckel {

void rational_poly::trim()
{
    while (!c_.empty() && c_.back() == 0)
        c_.pop_back();
    for (auto & a : c_)
        a.canonicalize();
}

rational_poly rational_poly::monomial(int k, rational const& a)
{
    std::vector<rational> c(k + 1, rational(0));
    c[k] = a;
    return rational_poly(std::move(c));
}

rational rational_poly::operator()(rational const& x) const
{
    rational r = 0;
    for (int i = degree(); i >= 0; i--)
        r = r * x + c_[i];
    return r;
}

rational_poly rational_poly::derivative() const
{
    std::vector<rational> c;
    for (int i = 1; i <= degree(); i++)
        c.push_back(c_[i] * i);
    return rational_poly(std::move(c));
}

rational_poly rational_poly::compose_affine(rational const& a, rational const& b) const
{
    rational_poly lin({b, a});
    rational_poly r;
    for (int i = degree(); i >= 0; i--)
        r = r * lin + constant(c_[i]);
    return r;
}

rational_poly& rational_poly::operator+=(rational_poly const& o)
{
    if (o.c_.size() > c_.size())
        c_.resize(o.c_.size(), rational(0));
    for (size_t i = 0; i < o.c_.size(); i++)
        c_[i] += o.c_[i];
    trim();
    return *this;
}

rational_poly& rational_poly::operator-=(rational_poly const& o)
{
    if (o.c_.size() > c_.size())
        c_.resize(o.c_.size(), rational(0));
    for (size_t i = 0; i < o.c_.size(); i++)
        c_[i] -= o.c_[i];
    trim();
    return *this;
}

rational_poly& rational_poly::operator*=(rational const& a)
{
    for (auto & x : c_)
        x *= a;
    trim();
    return *this;
}

rational_poly operator*(rational_poly const& a, rational_poly const& b)
{
    if (a.is_zero() || b.is_zero())
        return rational_poly();
    std::vector<rational> c(a.c_.size() + b.c_.size() - 1, rational(0));
    for (size_t i = 0; i < a.c_.size(); i++)
        for (size_t j = 0; j < b.c_.size(); j++)
            c[i + j] += a.c_[i] * b.c_[j];
    return rational_poly(std::move(c));
}

std::string rational_poly::to_string(std::string const& var) const
{
    if (is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; i--) {
        if (c_[i] == 0)
            continue;
        if (!first)
            os << " + ";
        os << c_[i].get_str();
        if (i > 0)
            os << "*" << var;
        if (i > 1)
            os << "^" << i;
        first = false;
    }
    return os.str();
}

rational binomial(long n, long k)
{
    if (k < 0 || k > n)
        return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return rational(r);
}

rational factorial(long n)
{
    if (n < 0)
        throw domain_error("factorial of negative integer");
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return rational(r);
}

rational frac(rational const& x)
{
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    rational r = x - rational(q);
    r.canonicalize();
    return r;
}

rational bernoulli_number(int n)
{
    if (n < 0)
        throw domain_error("negative Bernoulli index");
    static std::mutex mu;
    static std::vector<rational> table{rational(1)};
    std::lock_guard<std::mutex> lock(mu);
    /* sum_{k<=m} binom(m+1, k) B_k = 0 */
    while (int(table.size()) <= n) {
        int m = table.size();
        rational s = 0;
        for (int k = 0; k < m; k++)
            s += binomial(m + 1, k) * table[k];
        rational b = -s / (m + 1);
        b.canonicalize();
        table.push_back(b);
    }
    return table[n];
}

rational_poly bernoulli_poly(int k)
{
    if (k < 0)
        throw domain_error("negative Bernoulli polynomial degree");
    std::vector<rational> c(k + 1);
    for (int i = 0; i <= k; i++)
        c[i] = binomial(k, i) * bernoulli_number(k - i);
    return rational_poly(std::move(c));
}

}
