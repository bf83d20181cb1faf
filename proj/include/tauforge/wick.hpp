#pragma once

#include <optional>
#include <vector>

#include "tauforge/grouplike.hpp"

namespace tauforge {

// <bra| word |ket> by direct action in the window.
Q correlator_direct(const ModeWindow& w, int bra, const OperatorWord& word, int ket);

// <n| v_1 ... v_m w*_m ... w*_1 |n> = det <n| v_i w*_j |n>.  Series letters are allowed.
Q wick_standard(int n, const OperatorWord& v, const OperatorWord& w_star);
// <n| w*_1 ... w*_m v_m ... v_1 |n> = det <n| w*_i v_j |n>.
Q wick_standard_star_first(int n, const OperatorWord& w_star, const OperatorWord& v);

// Both sides of
//   <n|G' v_1..v_m G'' w*_m..w*_1 G|n~> / <n|G'G''G|n~> = det <n|G' v_j G'' w*_i G|n~> / <n|G'G''G|n~>
// multiplied through by the denominator to stay division free:  lhs * denominator^(m-1) == det.
// The bra <n|G' is passed as the vector it pairs with, so a polynomial bra such as
// <n|e^{J_+(t)} works the same way as a group-like one.
template <class R>
struct WickIdentity {
    R lhs, det, denominator;
    int m = 0;
};

WickIdentity<Q> wick_generalized(const FockVector& bra, const GroupLike& mid, const GroupLike& right,
                                 const FockVector& ket, const OperatorWord& v, const OperatorWord& w_star);
WickIdentity<Poly> wick_generalized(const PolyFockVector& bra, const GroupLike& mid, const GroupLike& right,
                                    const PolyFockVector& ket, const OperatorWord& v, const OperatorWord& w_star,
                                    const TablePtr& table, const Cutoffs& cut);

// The same with a group-like G' and the bra <n|.
WickIdentity<Q> wick_generalized(const GroupLike& left, int n, const GroupLike& mid, const GroupLike& right,
                                 const FockVector& ket, const OperatorWord& v, const OperatorWord& w_star);

// Column forms for a charge-zero G:
//   w_star_left:  <n-m| w*_m..w*_1 G|n>    (two determinants: shifted-psi and stepped charges)
//   v_left:       <n+m| v_m..v_1 G|n>      (two determinants)
//   v_right:      <n| G v_1..v_m |n-m>     (stepped charges only)
//   w_star_right: <n| G w*_1..w*_m |n+m>   (stepped charges only)
enum class ColumnSide { w_star_left, v_left, v_right, w_star_right };

struct ColumnForm {
    Q lhs;                      // ratio to <n|G|n>
    std::optional<Q> shifted;   // determinant with psi_{n-j} (psi*_{n+j-1}) insertions
    Q stepped;                  // determinant with charge-stepped denominators
};
ColumnForm wick_column_form(const GroupLike& g, const ModeWindow& w, int n, const OperatorWord& letters,
                            ColumnSide side);

// <n|G|n><n+1|psi_l w* G|n+1> = <n+1|G|n+1><n|psi_l w* G|n> + <n+1|psi_l G|n><n|w* G|n+1>
bool column_three_term(const GroupLike& g, const ModeWindow& w, int n, long l, const Letter& w_star);

// Closed-form vacuum expectations of generating series at rational points:
//   star_psi:     <n| psi*(zeta_1)..psi*(zeta_m) psi(z_m)..psi(z_1) |n>
//   psi_star:     <n| psi(z_1)..psi(z_m) psi*(zeta_m)..psi*(zeta_1) |n>
//   charged_up:   <n+l| psi*(zeta_{m-l})..psi*(zeta_1) psi(z_1)..psi(z_m) |n>,  zeta has m-l points
//   charged_down: <n-l| psi(z_{m-l})..psi(z_1) psi*(zeta_1)..psi*(zeta_m) |n>,  z has m-l points
enum class KernelKind { star_psi, psi_star, charged_up, charged_down };
Q vacuum_kernel(KernelKind kind, int n, const std::vector<Q>& z, const std::vector<Q>& zeta);
// prod (z_l/zeta_l)^n det zeta_i/(zeta_i - z_j), the determinant form of star_psi (psi_star with
// the sign of the denominators flipped).
Q vacuum_kernel_det(KernelKind kind, int n, const std::vector<Q>& z, const std::vector<Q>& zeta);

}  // namespace tauforge
