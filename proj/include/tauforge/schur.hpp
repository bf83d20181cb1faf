#pragma once

#include <map>
#include <mutex>
#include <string>

#include "tauforge/partitions.hpp"
#include "tauforge/polyring.hpp"

namespace tauforge {

// Schur functions of one time family inside a fixed polynomial context.
// Results are cached per partition; the cache is internally locked.
class SchurContext {
public:
    SchurContext(TablePtr table, Cutoffs cut, std::string prefix = "t", int sign = 1);

    const TablePtr& table() const { return table_; }
    const Cutoffs& cutoffs() const { return cut_; }
    const std::string& prefix() const { return prefix_; }

    Poly h(int k) const;  // h_k(sign * t)
    Poly e(int k) const;  // e_k(sign * t)

    Poly jacobi_trudi(const Partition& l) const;
    Poly dual_jacobi_trudi(const Partition& l) const;
    Poly hook(int alpha, int beta, int form) const;  // form 0 or 1: the two alternating sums
    Poly giambelli(const Partition& l) const;
    Poly skew(const Partition& l, const Partition& mu) const;
    // Cached jacobi_trudi.
    Poly schur(const Partition& l) const;

private:
    TablePtr table_;
    Cutoffs cut_;
    std::string prefix_;
    int sign_;
    mutable std::mutex mu_;
    mutable std::map<int, Poly> h_cache_;
    mutable std::map<Partition, Poly> s_cache_;
};

// A table with the single family t1..tK and per-group cutoff D.
SchurContext standard_context(int D, const std::string& prefix = "t");

// w^{-|l|} (u)_l / H_l
Q schur_content_eval(const Partition& l, const Q& u, const Q& w);
// The Frobenius product form with the Cauchy determinant.
Q schur_content_frobenius(const Partition& l, const Q& u, const Q& w);

// sum_{|l|<=D} s_l(t) s_l(t') against exp(sum k t_k t'_k), per-family weight D.
bool cauchy_littlewood_check(int D);
// s_l(d~) s_mu(t) at t = 0
Q schur_pairing(const Partition& l, const Partition& mu);
// s_mu(d~) s_l(t)
Poly skew_via_derivatives(const SchurContext& ctx, const Partition& l, const Partition& mu);
// Converts a Schur polynomial of `ctx` into a differential operator in its time variables.
DiffOp schur_diffop(const SchurContext& ctx, const Partition& mu);
std::map<std::string, Q> tilde_scales(const std::string& prefix, int K);

}  // namespace tauforge
