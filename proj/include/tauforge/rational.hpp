#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace tauforge {

using Q = mpq_class;
using Z = mpz_class;

// GMP does not reduce Q(num, den), and its arithmetic assumes reduced operands.  Every
// rational handed to the library must be canonical; letters and diagonal weights are
// reduced on entry since they are commonly written as literals.
inline Q canonical(Q x)
{
    x.canonicalize();
    return x;
}
Q qpow(const Q& base, long e);
Z factorial(long n);
Z binomial(long n, long k);
// (x)(x-1)...(x-k+1)
Q falling(const Q& x, long k);
// (x)(x+1)...(x+k-1)
Q rising(const Q& x, long k);

std::string to_string(const Q& q);
Q parse_rational(const std::string& s);

// Deterministic generator used by every randomized suite.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    long uniform(long lo, long hi);  // inclusive
    Q small_rational(long num_bound = 5, long den_bound = 3, bool nonzero = false);
    bool coin() { return uniform(0, 1) == 1; }
    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace tauforge
