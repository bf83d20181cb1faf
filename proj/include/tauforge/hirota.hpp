#pragma once

#include <string>
#include <vector>

#include "tauforge/polyring.hpp"
#include "tauforge/tau.hpp"

namespace tauforge {

// Outcome of a bilinear check: the identity was tested on every coefficient of total
// weight <= verified_weight (times, shift parameters and any symbolic parameters all
// carry weight one per degree).  On failure, counterexample names the lowest-weight
// surviving term.
struct HirotaReport {
    std::string check;
    bool holds = true;
    int verified_weight = -1;
    std::string counterexample;
};

// Total weight through which a truncated series is exact: the least of its cutoffs.
int exact_weight(const Poly& p);

// sum_{j>=0} h_j(-2a) h_{j+m+1}(d~_a) tau(t-a) tau'(t+a) = 0 with m = n - n' >= 0.
// m = 0 with tau' = tau is the KP residue identity.  `prefix` names the time family.
HirotaReport mkp_residue_check(const Poly& tau_n, const Poly& tau_np, int m, const std::string& prefix = "t");
HirotaReport kp_residue_check(const Poly& tau, const std::string& prefix = "t");

// (D1^4 + 3 D2^2 - 4 D1 D3) tau . tau = 0
HirotaReport kp_equation_check(const Poly& tau, const std::string& prefix = "t");
// (D1^2 - D2) tau_{n+1} . tau_n = 0
HirotaReport mkp_equation_check(const Poly& tau_next, const Poly& tau_n);
// (1/2) D1 D_{-1} tau_n . tau_n + tau_{n+1} tau_{n-1} = 0, with t_{-1} the first time of
// the tm family.
HirotaReport toda_equation_check(const Poly& tau_prev, const Poly& tau_n, const Poly& tau_next);

// Three-term relations with the shift points entering through w_i = 1/z_i (and b):
//   bi2   (z2 - z3) tau(t - [w1]) tau(t - [w2] - [w3]) + cyclic = 0
//   bi201 (z0 - z1)(z2 - z3) tau(t - [w0] - [w1]) tau(t - [w2] - [w3]) + cyclic in 1,2,3 = 0
//   bi3   z2 tau_{n+1}(t - [w2]) tau_n(t - [w1]) - z1 tau_{n+1}(t - [w1]) tau_n(t - [w2])
//           + (z1 - z2) tau_{n+1}(t) tau_n(t - [w1] - [w2]) = 0
//   bi4   2DTL relation with a = 1/w on the t side and b on the tm side
// Each is multiplied through by the w's so that it becomes polynomial.
enum class ThreeTerm { bi2, bi201, bi3, bi4 };
// bi2, bi201 read s.at(n); bi3 reads n and n+1; bi4 reads n-1, n, n+1.
HirotaReport three_term_check(ThreeTerm v, const TauSeries& s, int n);

// u = d1^2 log tau satisfies 3 u_22 = (4 u_3 - 12 u u_1 - u_111)_1 (tau(0) != 0).
HirotaReport scalar_kp_check(const Poly& tau);

}  // namespace tauforge
