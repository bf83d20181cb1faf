#pragma once

#include <map>
#include <string>
#include <vector>

#include "tauforge/tau.hpp"

namespace tauforge {

// sum_l w^l f_l(t), one polynomial per charge, all in the single-family ring.
struct BosonicState {
    TauRing ring;
    std::map<int, Poly> comp;

    Poly at(int l) const;  // zero for missing charges
    bool operator==(const BosonicState& o) const;
};

// Phi(|U>) = sum_l w^l <l| e^{J_+(t)} |U>, read off the Schur expansion
BosonicState phi_map(const FockVector& v, const TauRing& ring);
// the same map through the series of current applications
BosonicState phi_map_currents(const FockVector& v, const TauRing& ring);

struct BosonReport {
    std::string check;
    bool holds = true;
    int verified_weight = -1;  // t-weight through which the comparison is exact
    std::string detail;
};

// Phi(J_k U) = d_{t_k} Phi(U) (k > 0), w d_w Phi(U) (k = 0), |k| t_{|k|} Phi(U) (k < 0)
BosonReport current_rep_check(long k, const FockVector& v, const TauRing& ring);

// X(z) = e^{xi(t,z)} e^{-xi(d~, 1/z)} e^P z^Q,  X*(z) = e^{-xi(t,z)} e^{xi(d~, 1/z)} z^{-Q} e^{-P}
enum class Vertex { X, Xstar };
// The coefficient of z^j in X(z) s, or of z^{-j} in X*(z) s, matching psi_j and psi*_j.
// Each component is cut at the t-weight through which it is exact.
BosonicState vertex_coefficient(Vertex x, const BosonicState& s, long j);
// Coefficients j = j_lo..j_hi.
std::map<long, BosonicState> vertex_apply(Vertex x, const BosonicState& s, long j_lo, long j_hi);

// Phi(psi(z) U) = X(z) Phi(U) and Phi(psi*(z) U) = X*(z) Phi(U) for the modes j_lo..j_hi.
BosonReport correspondence_check(const FockVector& v, const TauRing& ring, long j_lo, long j_hi);

// e^{J_+(t)} psi(z) e^{-J_+(t)} = e^{xi(t,z)} psi(z), e^{J_-(t)} psi(z) e^{-J_-(t)} = e^{xi(t,1/z)} psi(z)
// and the psi* versions with e^{-xi}, as matrix elements of mode j on v.
BosonReport conjugation_check(int sign, bool star, long j, const FockVector& v, const TauRing& ring);

// a_m = 1! 2! ... (m-1)!
Z merged_constant(int m);

// Merged bosonization rules as exact Laurent identities in z on every basis state of
// weight <= D:
//   left:  <n| d^{m-1}psi(z) .. psi(z)   = a_m z^{m(n-m)}      <n-m| e^{-m J_+([1/z])}
//          <n| d^{m-1}psi*(z) .. psi*(z) = a_m z^{-m(n+m-1)}   <n+m| e^{ m J_+([1/z])}
//   right: psi(z) d psi(z) .. d^{m-1}psi(z) |n>   = s_m a_m z^{mn}     e^{ m J_-([z])} |n+m>
//          psi*(z) .. d^{m-1}psi*(z) |n>          = s_m a_m z^{m(1-n)} e^{-m J_-([z])} |n-m>
// with s_m = (-1)^{m(m-1)/2}.  m = 1 is the single-point rule.
enum class RuleSide { left, right };
BosonReport bosonization_rule_check(RuleSide side, bool star, int n, int m, int D);
// The right rule with an explicitly supplied constant c and power e in place of s_m a_m z^{...}.
BosonReport bosonization_rule_check_with(RuleSide side, bool star, int n, int m, int D, const Q& c, long e);

// <n| psi*(y) psi(z) = z^n y^{1-n} / (y - z) <n| e^{J_+([1/y] - [1/z])} at rational points, on every
// basis state of weight <= D.
BosonReport two_point_kernel_check(int n, const Q& z, const Q& y, int D);

// :psi(z+e) psi*(z): = z (dphi + e/2! (:(dphi)^2: + d^2phi) + e^2/3! (:(dphi)^3: + 3 :dphi d^2phi: + d^3phi)) + O(e^3)
// with dphi = sum_k J_k z^{-k-1}; compared order by order in e as Laurent polynomials in z
// between all basis states of weight <= D and charges n_lo..n_hi.
BosonReport current_from_vertices_check(int order, int n_lo, int n_hi, int D);

}  // namespace tauforge
