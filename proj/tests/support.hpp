#pragma once

#include "tauforge/polyring.hpp"

namespace tftest {

using namespace tauforge;

inline Poly random_poly(Rng& rng, const TablePtr& table, const Cutoffs& cut, int terms, int max_exp = 3)
{
    Poly p(table, cut);
    for (int i = 0; i < terms; ++i) {
        Mono m(table->size(), 0);
        for (std::size_t v = 0; v < table->size(); ++v)
            if (rng.uniform(0, 2) == 0) m[v] = static_cast<unsigned char>(rng.uniform(0, max_exp));
        p.add_term(m, rng.small_rational(6, 4));
    }
    return p;
}

}  // namespace tftest

#include "tauforge/fock.hpp"

namespace tftest {

// A few random basis states with charges in [n_lo, n_hi] and weights up to max_weight.
inline FockVector random_fock_vector(Rng& rng, const ModeWindow& w, int n_lo, int n_hi, int max_weight,
                                     int terms)
{
    const auto parts = enumerate_partitions(max_weight);
    FockVector v(w);
    for (int i = 0; i < terms; ++i) {
        const int n = static_cast<int>(rng.uniform(n_lo, n_hi));
        const auto& l = parts[rng.uniform(0, static_cast<long>(parts.size()) - 1)];
        v.add(BasisState{n, l}, rng.small_rational(5, 3, true));
    }
    return v;
}

inline Letter random_letter(Rng& rng, bool star, long lo, long hi, int terms = 3)
{
    std::map<long, Q> m;
    for (int i = 0; i < terms; ++i) m[rng.uniform(lo, hi)] += rng.small_rational(4, 3, true);
    return Letter::combination(star, m);
}

}  // namespace tftest
