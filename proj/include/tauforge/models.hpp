#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tauforge/tau.hpp"

namespace tauforge {

// ---- solitons ----

// G = bare-ordered exp(sum A_ik psi*(q_i) psi(p_k)); points distinct, q_i != p_k, and
// for the 2DTL form all points nonzero.
struct SolitonData {
    std::vector<Q> p, q;
    QMatrix A;

    static SolitonData diagonal(std::vector<Q> p, std::vector<Q> q, const std::vector<Q>& a);
    std::size_t size() const { return p.size(); }
    bool is_diagonal() const;
    void validate(bool two_dim) const;  // throws std::invalid_argument
};

enum class SolitonForm { schur_sum, determinant, explicit_sum };

// schur_sum: coefficients c_l(n) of the fermionic element; determinant: det(I + A Q^{n,t});
// explicit_sum: 1 + sum e^{eta_i} + sum c_ij e^{eta_i + eta_j} + ... (diagonal A only).
// With two_dim the ring carries tm and the 2DTL tau-function is returned.
TauSeries soliton_tau(const SolitonData& d, const std::vector<int>& charges, int D, SolitonForm form,
                      bool two_dim = false);

// det_{i,j} (e^{xi(t,q_i)} q_i^{n-j} + b_i e^{xi(t,p_i)} p_i^{n-j})
Poly soliton_fermionic_det(const std::vector<Q>& p, const std::vector<Q>& q, const std::vector<Q>& b, int n,
                           const TauRing& ring);
// The determinant above equals gauge(n, t) times the diagonal soliton with couplings
//   a_i = b_i (q_i / p_i)^N (q_i - p_i) / q_i * prod_{k != i} (p_i - q_k) / (q_i - q_k),
// where gauge = Delta(q) prod_i q_i^{n-N} e^{xi(t, q_i)}.
std::vector<Q> fermionic_det_couplings(const std::vector<Q>& p, const std::vector<Q>& q, const std::vector<Q>& b);
Poly fermionic_det_gauge(const std::vector<Q>& q, int n, const TauRing& ring);

// ---- quasi-polynomial tau-functions ----

// Psi(p) = sum_m a_m d^m psi(z)/dz^m at z = p
struct QuasiLetter {
    Q p;
    std::vector<Q> a;
};
// tau_n = <n| e^{J_+(t)} Psi_1 .. Psi_N |n - N> through the column determinant
// det_{ij} <n-j+1| e^{J_+} Psi_i |n-j>.
TauSeries quasipoly_tau(const std::vector<QuasiLetter>& letters, const std::vector<int>& charges, int D);
// The same element as a fermionic word of generating-series letters.
GroupLike quasipoly_element(const std::vector<QuasiLetter>& letters);

// ---- matrix models ----

// <N| e^{J_+(t)} P+ e^{-J_-(tm)} |N> through the Fock space
TauSeries unitary_model_tau(const std::vector<int>& Ns, int D);
// det_{j,k=1..N} sum_a h_a(t) h_{a+j-k}(-tm)
Poly unitary_toeplitz(int N, const TauRing& ring);
// sum_{l(l) <= N} s_l(t) s_l(sign * tm)
Poly restricted_cauchy(int N, const TauRing& ring, int sign);

// A diagonal element G_0 = prod_{n>=0} g_n^{psi_n psi*_n} with rational stand-ins:
//   gaussian:    g_n = c^{-n-1} n!            (the common factor pi dropped)
//   hciz:        g_n = c^n / n!
//   log_squared: g_n = rho^n u^{n^2 + 2n}     (u = e^{beta/2}, rho = r^2)
enum class DiagonalKind { gaussian, hciz, log_squared };
struct DiagonalModel {
    DiagonalKind kind = DiagonalKind::gaussian;
    Q c = 1, u = 1, rho = 1;

    Q g(long n) const;
    // c_{l l}(N) / c_{empty}(N) and c_{empty}(N) from the closed forms
    Q ratio(const Partition& l, int N) const;
    Q prefactor(int N) const;
    // powers of pi left out of g_n and of the prefactor
    int pi_power(int N) const { return kind == DiagonalKind::gaussian ? N : 0; }
};
TauSeries diagonal_model_tau(const DiagonalModel& m, const std::vector<int>& Ns, int D);
// prefactor * sum_{l(l) <= N} ratio(l) s_l(t) s_l(-tm)
Poly diagonal_model_closed(const DiagonalModel& m, int N, const TauRing& ring);

// Gaussian Hermitian model in the single family t = t_+ - t_-, with (2 pi)^{N/2} dropped:
//   moments: det_{i,j=1..N} sum_k h_k(t) mu_{i+j-2+k}, mu_m = (m-1)!! (odd moments vanish)
//   fermionic: prod_{k<=N} Gamma(k) <N| e^{J_+(t)} e^{W_{-2}/2} |N>, W_{-2} = sum k(k-1) psi_k psi*_{k-2}
Poly hermitian_moment_det(int N, const TauRing& ring);
Poly hermitian_fermionic(int N, const TauRing& ring);
// Two-family version <N| e^{J_+(t)} G_0 P+ e^{-J_-(tm)} |N> with G_0 built from the
// Gaussian moments on the real line.
TauSeries hermitian_2d_tau(const std::vector<int>& Ns, int D);
Q gaussian_moment(int m);

// Hurwitz tau-function sum_l e^{beta C_l / 2} Qp^{|l|} s_l(t) s_l(-tm) with beta a formal
// parameter "beta" kept through degree beta_order.
TauSeries cut_and_join_tau(const Q& Qp, int D, int beta_order);
// exp(beta/2 W_0) Qp^{L_0} exp(-sum k t_k tm_k), W_0 applied term by term.
Poly cut_and_join_bosonic(const Q& Qp, const TauRing& ring);
// C_l = sum_i ((l_i - i + 1/2)^2 - (-i + 1/2)^2)
long casimir_c(const Partition& l);

// ---- Hamiltonian evolution ----

// Series in T1..TK (weight k, cutoff t_weight) and the formal variable "winv" = 1/w
// (cutoff L): <0| e^{a J_+([w^{-1}])} e^{H(T)} G |0>, divided by <0|G|0>.
struct HamiltonianSeries {
    TauRing ring;
    Poly direct;     // sum_l c_l s_l(a[w^{-1}]) e^{B_l(T)} / c_empty
    Poly soliton;    // infinite-soliton form with the A-matrix
};
HamiltonianSeries hamiltonian_tau(const GroupLike& g, const ModeWindow& w, const Q& a, int t_weight, int L);
// A_ik = (-1)^k (c_{(i-1|k-1)} / c_empty) (a)_i (-a)_k / (a Gamma(i) Gamma(k+1)), without w^{1-i-k}
Q hamiltonian_a_entry(const TauSource& src, const Q& a, int i, int k);

}  // namespace tauforge
