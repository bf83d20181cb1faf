#include "tauforge/tau.hpp"

#include <sstream>
#include <stdexcept>

namespace tauforge {

TauRing make_tau_ring(int D, bool two_families, const std::vector<std::string>& params)
{
    if (D < 0) throw std::invalid_argument("tau ring: negative cutoff");
    VarTable::Builder b;
    b.times("t", D, 0);
    if (two_families) b.times("tm", D, 1);
    const int pgroup = two_families ? 2 : 1;
    for (const auto& p : params) b.param(p, pgroup);
    TauRing r;
    r.table = b.build();
    r.cut = Cutoffs::uniform(*r.table, D);
    for (std::size_t g = (two_families ? 2 : 1); g < r.cut.group.size(); ++g) r.cut.group[g] = kUnbounded;
    r.D = D;
    r.two_families = two_families;
    return r;
}

TauSource::TauSource(TauRing ring, StateFn fn, int charge, std::string label)
    : ring_(std::move(ring)), fn_(std::move(fn)), charge_(charge), label_(std::move(label))
{
}

TauSource TauSource::from_element(const GroupLike& g, const TauRing& ring, const ModeWindow& w, int charge,
                                  std::optional<int> max_weight)
{
    auto fn = [g, ring, w, max_weight](const BasisState& s) {
        return to_poly(apply(g, basis_vector(w, s), max_weight), ring.table, ring.cut);
    };
    return TauSource(ring, fn, charge, g.kind());
}

const PolyFockVector& TauSource::state(const BasisState& s) const
{
    {
        std::lock_guard lock(mu_);
        auto it = cache_.find(s);
        if (it != cache_.end()) return *it->second;
    }
    auto v = std::make_shared<const PolyFockVector>(fn_(s));
    std::lock_guard lock(mu_);
    return *cache_.emplace(s, std::move(v)).first->second;
}

Poly TauSource::coefficient(const Partition& l, int n) const { return coefficient(l, Partition{}, n); }

Poly TauSource::coefficient(const Partition& l, const Partition& mu, int n) const
{
    Poly c = ring_.zero();
    c += state(BasisState{n - charge_, mu}).coefficient(BasisState{n, l});
    if ((l.b_exponent() + mu.b_exponent()) % 2) c = -c;
    return c;
}

Poly TauSource::matrix_element(int bra_charge, const OperatorWord& word, int n) const
{
    const PolyFockVector& gv = state(BasisState{n - charge_, {}});
    Poly c = ring_.zero();
    c += apply_word(word, gv).coefficient(BasisState{bra_charge, {}});
    return c;
}

Poly TauSource::frobenius_coefficient(const std::vector<int>& alphas, const std::vector<int>& betas, int n) const
{
    if (alphas.size() != betas.size()) throw std::invalid_argument("frobenius_coefficient: unequal lengths");
    OperatorWord word;
    int b = 0;
    for (int a : alphas) word.push_back(Letter::psi_star(n + a));
    for (auto it = betas.rbegin(); it != betas.rend(); ++it) {
        word.push_back(Letter::psi(n - *it - 1));
        b += *it + 1;
    }
    Poly c = matrix_element(n, word, n);
    return b % 2 ? -c : c;
}

Poly TauSource::row_coefficient(int s, int n) const
{
    if (s < 0) return ring_.zero();
    return matrix_element(n - 1, {Letter::psi_star(n + s - 1)}, n);
}

Poly TauSource::column_coefficient(int a, int n) const
{
    if (a < 0) return ring_.zero();
    Poly c = matrix_element(n + 1, {Letter::psi(n - a)}, n);
    return a % 2 ? -c : c;
}

const Poly& TauSeries::at(int n) const
{
    auto it = tau.find(n);
    if (it == tau.end()) throw std::out_of_range("tau series has no charge " + std::to_string(n));
    return it->second;
}

TauSeries expand_mkp(const TauSource& src, const std::vector<int>& charges)
{
    const TauRing& ring = src.ring();
    const SchurContext ctx = ring.plus_context();
    TauSeries out;
    out.kind = TauKind::mkp;
    out.ring = ring;
    out.provenance = src.label();
    for (int n : charges) {
        Poly tau = ring.zero();
        for (const auto& l : enumerate_partitions(ring.D)) {
            Poly c = src.coefficient(l, n);
            if (c.is_zero()) continue;
            tau += c * ctx.schur(l);
            out.coeffs[n].emplace(l, std::move(c));
        }
        out.tau.emplace(n, std::move(tau));
    }
    return out;
}

TauSeries expand_kp(const TauSource& src)
{
    TauSeries s = expand_mkp(src, {0});
    s.kind = TauKind::kp;
    return s;
}

TauSeries expand_2dtl(const TauSource& src, const std::vector<int>& charges)
{
    const TauRing& ring = src.ring();
    if (!ring.two_families) throw std::invalid_argument("expand_2dtl needs a ring with two time families");
    const SchurContext plus = ring.plus_context(), minus = ring.minus_context();
    TauSeries out;
    out.kind = TauKind::dtl;
    out.ring = ring;
    out.provenance = src.label();
    const auto parts = enumerate_partitions(ring.D);
    for (int n : charges) {
        Poly tau = ring.zero();
        for (const auto& mu : parts)
            for (const auto& l : parts) {
                Poly c = src.coefficient(l, mu, n);
                if (c.is_zero()) continue;
                tau += c * plus.schur(l) * minus.schur(mu);
                out.coeffs2[n].emplace(std::pair{l, mu}, std::move(c));
            }
        out.tau.emplace(n, std::move(tau));
    }
    return out;
}

Poly tau_direct(const TauSource& src, int n)
{
    const TauRing& ring = src.ring();
    const PolyFockVector& gv = src.state(BasisState{n - src.charge(), {}});
    Poly c = ring.zero();
    c += apply_current_exp_series(1, ring.table, ring.cut, "t", gv, ring.D).coefficient(BasisState{n, {}});
    return c;
}

Poly tau_direct_2dtl(const GroupLike& g, const TauRing& ring, const ModeWindow& w, int n, int charge)
{
    const PolyFockVector ket = apply_current_exp(-1, ring.minus_context(), vacuum_vector(w, n - charge), ring.D);
    const PolyFockVector gk = apply(g, ket, ring.D);
    Poly c = ring.zero();
    c += apply_current_exp_series(1, ring.table, ring.cut, "t", gk, ring.D).coefficient(BasisState{n, {}});
    return c;
}

TauSeries restrict_series(const TauSeries& s, std::optional<int> N, std::optional<int> M)
{
    TauSeries out = s;
    out.tau.clear();
    out.coeffs.clear();
    out.coeffs2.clear();
    auto keep = [](const Partition& l, std::optional<int> bound, int n) { return !bound || l.length() <= *bound + n; };
    const SchurContext plus = s.ring.plus_context();
    for (const auto& [n, table] : s.coeffs) {
        Poly tau = s.ring.zero();
        for (const auto& [l, c] : table)
            if (keep(l, N, n)) {
                tau += c * plus.schur(l);
                out.coeffs[n].emplace(l, c);
            }
        out.tau.emplace(n, std::move(tau));
    }
    if (!s.coeffs2.empty()) {
        const SchurContext minus = s.ring.minus_context();
        for (const auto& [n, table] : s.coeffs2) {
            Poly tau = s.ring.zero();
            for (const auto& [lm, c] : table)
                if (keep(lm.first, N, n) && keep(lm.second, M, n)) {
                    tau += c * plus.schur(lm.first) * minus.schur(lm.second);
                    out.coeffs2[n].emplace(lm, c);
                }
            out.tau.emplace(n, std::move(tau));
        }
    }
    return out;
}

namespace {

Poly det_of(const Matrix<Poly>& m, const TauRing& ring) { return det_poly(m, ring.table, ring.cut); }

CheckResult compare(const Poly& lhs, const Poly& rhs, const std::string& what)
{
    CheckResult r;
    r.holds = lhs == rhs;
    if (!r.holds) r.detail = what + ": " + lhs.str() + " != " + rhs.str();
    return r;
}

CheckResult inapplicable(const std::string& why) { return CheckResult{false, true, why}; }

}  // namespace

CheckResult giambelli_check(const TauSource& src, int n, const Partition& l)
{
    const Poly c0 = src.coefficient({}, n);
    if (c0.is_zero()) return inapplicable("c_0(n) vanishes");
    const Frobenius f = l.frobenius();
    const int d = f.rank();
    Matrix<Poly> m(d, std::vector<Poly>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m[i][j] = src.coefficient(Partition::hook(f.alphas[i], f.betas[j]), n);
    Poly lhs = src.coefficient(l, n);
    for (int k = 1; k < d; ++k) lhs = lhs * c0;
    return compare(lhs, d == 0 ? lhs : det_of(m, src.ring()), "giambelli " + l.str());
}

CheckResult quantum_jt_check(const TauSource& src, int n, const Partition& l, JtOrientation o)
{
    const bool rows = o == JtOrientation::rows;
    const Partition shape = rows ? l : l.transpose();
    const int len = shape.length();
    Poly lhs = src.coefficient(l, n);
    for (int k = 1; k < len; ++k) {
        const Poly c = src.coefficient({}, rows ? n - k : n + k);
        if (c.is_zero()) return inapplicable("c_0 vanishes at a shifted charge");
        lhs = lhs * c;
    }
    if (len == 0) {
        const Poly c0 = src.coefficient({}, n);
        return compare(lhs, c0, "quantum Jacobi-Trudi " + l.str());
    }
    Matrix<Poly> m(len, std::vector<Poly>(len));
    for (int i = 1; i <= len; ++i)
        for (int j = 1; j <= len; ++j) {
            const int idx = shape[i] - i + j;
            m[i - 1][j - 1] = rows ? src.row_coefficient(idx, n - j + 1) : src.column_coefficient(idx, n + j - 1);
        }
    return compare(lhs, det_of(m, src.ring()), std::string("quantum Jacobi-Trudi ") + (rows ? "rows " : "columns ") +
                                                   l.str());
}

CheckResult pluecker_check(const TauSource& src, int n, const std::vector<int>& alphas, const std::vector<int>& betas,
                           int r, int s)
{
    const int d = static_cast<int>(alphas.size());
    if (static_cast<int>(betas.size()) != d || r < 1 || s <= r || s > d)
        throw std::invalid_argument("pluecker_check: need 1 <= r < s <= d");
    auto drop = [](std::vector<int> v, std::vector<int> idx) {
        std::sort(idx.rbegin(), idx.rend());
        for (int i : idx) v.erase(v.begin() + (i - 1));
        return v;
    };
    auto c = [&](std::vector<int> ia, std::vector<int> ib) {
        return src.frobenius_coefficient(drop(alphas, ia), drop(betas, ib), n);
    };
    const Poly lhs = c({}, {}) * c({r, s}, {r, s});
    const Poly rhs = c({r}, {r}) * c({s}, {s}) - c({r}, {s}) * c({s}, {r});
    return compare(lhs, rhs, "pluecker");
}

CheckResult rectangle_three_term(const TauSource& src, int n, int s, int a)
{
    if (s < 1 || a < 1) throw std::invalid_argument("rectangle_three_term: need s, a >= 1");
    auto c = [&](int cols, int rows, int m) { return src.coefficient(Partition::rectangle(rows, cols), m); };
    const Poly lhs = c(s, a, n) * c(s, a, n + 1) - c(s + 1, a, n) * c(s - 1, a, n + 1);
    const Poly rhs = c(s, a - 1, n) * c(s, a + 1, n + 1);
    return compare(lhs, rhs, "rectangle three-term");
}

}  // namespace tauforge
