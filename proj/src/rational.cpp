#include "tauforge/rational.hpp"

#include <stdexcept>

namespace tauforge {

Q qpow(const Q& base, long e)
{
    if (e < 0) {
        if (base == 0) throw std::domain_error("qpow: zero to a negative power");
        Q inv = 1 / base;
        return qpow(inv, -e);
    }
    Q result = 1, b = base;
    while (e > 0) {
        if (e & 1) result *= b;
        b *= b;
        e >>= 1;
    }
    return result;
}

Z factorial(long n)
{
    if (n < 0) throw std::domain_error("factorial of a negative number");
    Z r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

Z binomial(long n, long k)
{
    if (k < 0 || n < 0 || k > n) return 0;
    Z r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

Q falling(const Q& x, long k)
{
    Q r = 1;
    for (long i = 0; i < k; ++i) r *= x - i;
    return r;
}

Q rising(const Q& x, long k)
{
    Q r = 1;
    for (long i = 0; i < k; ++i) r *= x + i;
    return r;
}

std::string to_string(const Q& q) { return q.get_str(); }

Q parse_rational(const std::string& s)
{
    Q q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("not a rational: " + s);
    q.canonicalize();
    return q;
}

long Rng::uniform(long lo, long hi)
{
    if (hi < lo) throw std::invalid_argument("Rng::uniform: empty range");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(eng_() % span);
}

Q Rng::small_rational(long num_bound, long den_bound, bool nonzero)
{
    for (;;) {
        Q q(uniform(-num_bound, num_bound), uniform(1, den_bound));
        q.canonicalize();
        if (!nonzero || q != 0) return q;
    }
}

}  // namespace tauforge
