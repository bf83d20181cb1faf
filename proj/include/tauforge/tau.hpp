#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tauforge/grouplike.hpp"
#include "tauforge/schur.hpp"

namespace tauforge {

// The polynomial ring tau-series live in: times t1..tD (group 0), optionally a second
// family tm1..tmD (group 1), and weight-one parameters (last group, no cutoff).
struct TauRing {
    TablePtr table;
    Cutoffs cut;
    int D = 0;
    bool two_families = false;

    Poly zero() const { return Poly(table, cut); }
    Poly constant(const Q& c) const { return Poly::constant(table, cut, c); }
    SchurContext plus_context() const { return SchurContext(table, cut, "t", 1); }
    // Schur functions of -t_-
    SchurContext minus_context() const { return SchurContext(table, cut, "tm", -1); }
};
TauRing make_tau_ring(int D, bool two_families = false, const std::vector<std::string>& params = {});

// Supplies the states G|mu, m> a tau-function is built from, with coefficients in a TauRing.
// States are cached; the cache is internally locked.
class TauSource {
public:
    using StateFn = std::function<PolyFockVector(const BasisState&)>;

    TauSource(TauRing ring, StateFn fn, int charge = 0, std::string label = "");
    // G given as a group-like element acting in window w; states above weight max_weight
    // (when set) are dropped, which is exact for coefficients up to that weight.
    static TauSource from_element(const GroupLike& g, const TauRing& ring, const ModeWindow& w, int charge = 0,
                                  std::optional<int> max_weight = std::nullopt);

    const TauRing& ring() const { return ring_; }
    int charge() const { return charge_; }
    const std::string& label() const { return label_; }

    // G|mu, m>
    const PolyFockVector& state(const BasisState& s) const;
    // c_l(n) = (-1)^{b(l)} <l, n| G |n - q>
    Poly coefficient(const Partition& l, int n) const;
    // c_{l mu}(n) = (-1)^{b(l)+b(mu)} <l, n| G |mu, n - q>
    Poly coefficient(const Partition& l, const Partition& mu, int n) const;
    // (-1)^{sum(beta+1)} <n| psi*_{n+a_1}..psi*_{n+a_d} psi_{n-b_d-1}..psi_{n-b_1-1} G |n - q>
    // for arbitrary (not necessarily decreasing) index lists.
    Poly frobenius_coefficient(const std::vector<int>& alphas, const std::vector<int>& betas, int n) const;
    // c_s(n) = <n-1| psi*_{n+s-1} G |n - q>, c^a(n) = (-1)^a <n+1| psi_{n-a} G |n - q>
    Poly row_coefficient(int s, int n) const;
    Poly column_coefficient(int a, int n) const;

private:
    Poly matrix_element(int bra_charge, const OperatorWord& word, int n) const;

    TauRing ring_;
    StateFn fn_;
    int charge_;
    std::string label_;
    mutable std::mutex mu_;
    mutable std::map<BasisState, std::shared_ptr<const PolyFockVector>> cache_;
};

enum class TauKind { kp, mkp, dtl };

struct TauSeries {
    TauKind kind = TauKind::mkp;
    TauRing ring;
    std::map<int, Poly> tau;  // per charge
    std::map<int, std::map<Partition, Poly>> coeffs;
    std::map<int, std::map<std::pair<Partition, Partition>, Poly>> coeffs2;
    std::string provenance;

    const Poly& at(int n) const;
};

// tau_n(t) = sum_{|l| <= D} c_l(n) s_l(t) for each n in charges.
TauSeries expand_mkp(const TauSource& src, const std::vector<int>& charges);
TauSeries expand_kp(const TauSource& src);
// tau_n(t, tm) = sum c_{l mu}(n) s_l(t) s_mu(-tm)
TauSeries expand_2dtl(const TauSource& src, const std::vector<int>& charges);

// <n| e^{J_+(t)} G |n - q> by applying current exponentials to the states themselves.
Poly tau_direct(const TauSource& src, int n);
// <n| e^{J_+(t)} G e^{-J_-(tm)} |n - q>
Poly tau_direct_2dtl(const GroupLike& g, const TauRing& ring, const ModeWindow& w, int n, int charge = 0);

// Restricted sums: l(l) <= N + n and, for two families, l(mu) <= M + n.  nullopt is no bound.
TauSeries restrict_series(const TauSeries& s, std::optional<int> N, std::optional<int> M = std::nullopt);

struct CheckResult {
    bool applicable = true;
    bool holds = true;
    std::string detail;
};

// c_l c_0^{d-1} = det c_{(a_i|b_j)}
CheckResult giambelli_check(const TauSource& src, int n, const Partition& l);
// rows: c_l(n) prod_{k=1}^{l(l)-1} c_0(n-k) = det c_{l_i-i+j}(n-j+1)
// columns: c_l(n) prod_{k=1}^{l_1-1} c_0(n+k) = det c^{l'_i-i+j}(n+j-1)
enum class JtOrientation { rows, columns };
CheckResult quantum_jt_check(const TauSource& src, int n, const Partition& l, JtOrientation o);
// Plucker relation for the Frobenius data and the removed positions r < s (1-based).
CheckResult pluecker_check(const TauSource& src, int n, const std::vector<int>& alphas, const std::vector<int>& betas,
                           int r, int s);
// c_s^a(n) c_s^a(n+1) - c_{s+1}^a(n) c_{s-1}^a(n+1) = c_s^{a-1}(n) c_s^{a+1}(n+1) for the rectangle (s^a)
CheckResult rectangle_three_term(const TauSource& src, int n, int s, int a);

}  // namespace tauforge
