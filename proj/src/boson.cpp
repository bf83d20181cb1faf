#include "tauforge/boson.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

namespace tauforge {

namespace {

using Laurent = std::map<long, Q>;

void laurent_add(Laurent& f, long e, const Q& c)
{
    if (sgn(c) == 0) return;
    Q& slot = f[e];
    slot += c;
    if (sgn(slot) == 0) f.erase(e);
}

std::string laurent_str(const Laurent& f)
{
    if (f.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : f) {
        if (!first) os << " + ";
        first = false;
        os << to_string(c) << " z^" << e;
    }
    return os.str();
}

Poly recut(const Poly& p, const Cutoffs& cut)
{
    Poly r(p.table(), cut);
    for (const auto& [m, c] : p.terms()) r.add_term(m, c);
    return r;
}

Cutoffs at_weight(const TauRing& ring, int c)
{
    Cutoffs cut = ring.cut;
    cut.group[0] = c;
    return cut;
}

std::vector<BasisState> states_of(int n, int D)
{
    std::vector<BasisState> out;
    for (const auto& l : enumerate_partitions(D)) out.push_back(BasisState{n, l});
    return out;
}

std::map<std::string, Q> times_at(const TauRing& ring, const std::function<Q(int)>& tk)
{
    std::map<std::string, Q> a;
    for (int k = 1; k <= ring.D; ++k) a[time_name("t", k)] = tk(k);
    return a;
}

// h_b(sign d~) as differential operators, b = 0..D
std::vector<DiffOp> h_tilde_ops(const TauRing& ring, int sign)
{
    std::vector<DiffOp> ops;
    for (int b = 0; b <= ring.D; ++b) ops.push_back(as_diffop(h_poly(b, sign, ring.table, ring.cut, "t"), {}));
    return ops;
}

BosonReport report(std::string check) { return BosonReport{std::move(check), true, -1, ""}; }

void fail(BosonReport& r, const std::string& why)
{
    if (r.holds) r.detail = why;
    r.holds = false;
}

void note_weight(BosonReport& r, int w) { r.verified_weight = r.verified_weight < 0 ? w : std::min(r.verified_weight, w); }

}  // namespace

Poly BosonicState::at(int l) const
{
    auto it = comp.find(l);
    return it == comp.end() ? ring.zero() : it->second;
}

bool BosonicState::operator==(const BosonicState& o) const
{
    for (const auto& [l, f] : comp)
        if (!(f == o.at(l))) return false;
    for (const auto& [l, f] : o.comp)
        if (!(at(l) == f)) return false;
    return true;
}

BosonicState phi_map(const FockVector& v, const TauRing& ring)
{
    BosonicState s{ring, {}};
    const SchurContext ctx = ring.plus_context();
    for (const auto& [state, c] : v.terms()) {
        if (state.shape.size() > ring.D) continue;
        auto it = s.comp.try_emplace(state.charge, ring.zero()).first;
        Poly term = ctx.schur(state.shape) * c;
        if (state.shape.b_exponent() % 2) term = -term;
        it->second += term;
    }
    return s;
}

BosonicState phi_map_currents(const FockVector& v, const TauRing& ring)
{
    BosonicState s{ring, {}};
    const PolyFockVector e = apply_current_exp_series(1, ring.table, ring.cut, "t", v, ring.D);
    for (const auto& [state, c] : v.terms()) {
        if (s.comp.count(state.charge)) continue;
        s.comp.emplace(state.charge, e.coefficient(BasisState{state.charge, {}}));
    }
    return s;
}

BosonReport current_rep_check(long k, const FockVector& v, const TauRing& ring)
{
    BosonReport r = report("current J_" + std::to_string(k));
    if (std::labs(k) > ring.D) throw std::invalid_argument("current_rep_check: |k| exceeds the cutoff");
    const BosonicState lhs = phi_map(apply_current(k, v), ring);
    const BosonicState phi = phi_map(v, ring);
    BosonicState rhs{ring, {}};
    for (const auto& [l, f] : phi.comp) {
        if (k > 0)
            rhs.comp.emplace(l, f.derivative(time_name("t", static_cast<int>(k))));
        else if (k == 0)
            rhs.comp.emplace(l, f * Q(l));
        else
            rhs.comp.emplace(l, Poly::variable(ring.table, ring.cut, time_name("t", static_cast<int>(-k)), Q(-k)) * f);
    }
    note_weight(r, k > 0 ? ring.D - static_cast<int>(k) : ring.D);
    if (!(lhs == rhs)) fail(r, "Phi(J_k v) differs from the bosonic action");
    return r;
}

BosonicState vertex_coefficient(Vertex x, const BosonicState& s, long j)
{
    const TauRing& ring = s.ring;
    const int D = ring.D;
    const bool star = x == Vertex::Xstar;
    const auto ops = h_tilde_ops(ring, star ? 1 : -1);
    const auto scales = tilde_scales("t", D);
    BosonicState out{ring, {}};
    for (const auto& [l, f] : s.comp) {
        // X: z^l sum_a h_a(t) z^a sum_b h_b(-d~) z^{-b}, picks a = j - l + b
        // X*: z^{1-l} sum_a h_a(-t) z^a sum_b h_b(d~) z^{-b}, picks a = l - 1 - j + b
        const long shift = star ? l - 1 - j : j - l;
        const long exact = std::min<long>(D, D + shift);
        if (exact < 0) continue;
        const Cutoffs cut = at_weight(ring, static_cast<int>(exact));
        Poly acc(ring.table, cut);
        for (long b = std::max<long>(0, -shift); b <= D; ++b) {
            const long a = b + shift;
            if (a > exact) break;
            Poly db = apply_diffop(ops[b], f, scales);
            if (db.is_zero()) continue;
            acc += recut(h_poly(static_cast<int>(a), star ? -1 : 1, ring.table, cut, "t"), cut) * recut(db, cut);
        }
        out.comp.emplace(star ? l - 1 : l + 1, acc);
    }
    return out;
}

std::map<long, BosonicState> vertex_apply(Vertex x, const BosonicState& s, long j_lo, long j_hi)
{
    std::map<long, BosonicState> out;
    for (long j = j_lo; j <= j_hi; ++j) out.emplace(j, vertex_coefficient(x, s, j));
    return out;
}

BosonReport correspondence_check(const FockVector& v, const TauRing& ring, long j_lo, long j_hi)
{
    BosonReport r = report("vertex correspondence");
    const BosonicState phi = phi_map(v, ring);
    for (long j = j_lo; j <= j_hi; ++j)
        for (bool star : {false, true}) {
            const BosonicState lhs = phi_map(star ? apply_psi_star(j, v) : apply_psi(j, v), ring);
            const BosonicState rhs = vertex_coefficient(star ? Vertex::Xstar : Vertex::X, phi, j);
            for (const auto& [l, f] : rhs.comp) note_weight(r, f.cutoffs().group[0]);
            // components dropped by the vertex side carry no exact information
            BosonicState cut_lhs{ring, {}};
            for (const auto& [l, f] : lhs.comp)
                if (rhs.comp.count(l)) cut_lhs.comp.emplace(l, f);
            if (!(cut_lhs == rhs))
                fail(r, std::string(star ? "psi*_" : "psi_") + std::to_string(j) + " does not match the vertex operator");
        }
    return r;
}

BosonReport conjugation_check(int sign, bool star, long j, const FockVector& v, const TauRing& ring)
{
    BosonReport r = report(std::string("conjugation of ") + (star ? "psi*" : "psi") +
                           (sign > 0 ? " by e^{J_+}" : " by e^{J_-}"));
    const auto& w = v.window();
    const int D = ring.D;
    auto mode = [&](bool s, long k, const PolyFockVector& u) {
        if (!w.contains(k)) {
            // psi below the window and psi* above it annihilate every in-window state
            if ((!s && k < w.lo()) || (s && k >= w.hi())) return PolyFockVector(w);
            throw WindowError("conjugation_check: mode outside the window");
        }
        return s ? apply_psi_star(k, u) : apply_psi(k, u);
    };
    const PolyFockVector pv = to_poly(v, ring.table, ring.cut);
    const PolyFockVector lhs = apply_current_exp_series(sign, ring.table, ring.cut, "t", mode(star, j, pv), D);
    const PolyFockVector ev = apply_current_exp_series(sign, ring.table, ring.cut, "t", pv, D);
    PolyFockVector rhs(w);
    for (int a = 0; a <= D; ++a) {
        // e^{J_+}: psi_j -> sum h_a psi_{j-a}, psi*_j -> sum h_a(-t) psi*_{j+a}; e^{J_-} flips the shifts
        const long k = (star == (sign > 0)) ? j + a : j - a;
        PolyFockVector term = mode(star, k, ev);
        if (term.empty()) continue;
        rhs += term.scaled_by(h_poly(a, star ? -1 : 1, ring.table, ring.cut, "t"));
    }
    note_weight(r, D);
    if (!(lhs - rhs).empty()) fail(r, "mode " + std::to_string(j) + " fails to conjugate");
    return r;
}

Z merged_constant(int m)
{
    Z a = 1;
    for (int k = 1; k < m; ++k) a *= factorial(k);
    return a;
}

BosonReport bosonization_rule_check_with(RuleSide side, bool star, int n, int m, int D, const Q& c, long e)
{
    BosonReport r = report(std::string(side == RuleSide::left ? "left" : "right") + " bosonization of " +
                           (star ? "psi*" : "psi") + " with m=" + std::to_string(m));
    if (m < 1) throw std::invalid_argument("bosonization_rule_check: m >= 1");
    const TauRing ring = make_tau_ring(std::max(D, 1));
    const ModeWindow w = ModeWindow::around(n - m, n + m, D + m + 2);
    // d^r psi(z) = sum falling(j, r) z^{j-r} psi_j, d^r psi*(z) = sum falling(-j, r) z^{-j-r} psi*_j
    auto apply_derivative = [&](int order, const std::map<long, FockVector>& in) {
        std::map<long, FockVector> out;
        for (const auto& [ex, vec] : in)
            for (long j = w.lo(); j < w.hi(); ++j) {
                const Q f = falling(Q(star ? -j : j), order);
                if (sgn(f) == 0) continue;
                FockVector img = star ? apply_psi_star(j, vec) : apply_psi(j, vec);
                if (img.empty()) continue;
                const long ez = ex + (star ? -j : j) - order;
                auto it = out.try_emplace(ez, w).first;
                it->second += img * f;
                if (it->second.empty()) out.erase(it);
            }
        return out;
    };
    // left rules: e^{-m J_+([1/z])} for psi and e^{m J_+([1/z])} for psi*, t_k = tsign m z^{-k} / k
    const int tsign = star ? 1 : -1;
    const auto point = times_at(ring, [&](int k) { return canonical(Q(tsign * m, k)); });
    note_weight(r, D);
    if (side == RuleSide::left) {
        const int src = star ? n + m : n - m;
        for (const auto& U : states_of(src, D)) {
            std::map<long, FockVector> cur{{0, basis_vector(w, U)}};
            for (int order = 0; order < m; ++order) cur = apply_derivative(order, cur);
            Laurent lhs, rhs;
            for (const auto& [ex, vec] : cur) laurent_add(lhs, ex, vec.coefficient(BasisState{n, {}}));
            const PolyFockVector eu = apply_current_exp_series(1, ring.table, ring.cut, "t", basis_vector(w, U), D);
            laurent_add(rhs, e - U.shape.size(), c * eu.coefficient(BasisState{src, {}}).evaluate(point));
            if (lhs != rhs) {
                fail(r, "state " + U.str() + ": " + laurent_str(lhs) + " vs " + laurent_str(rhs));
                return r;
            }
        }
        return r;
    }
    const int dst = star ? n - m : n + m;
    std::map<long, FockVector> cur{{0, vacuum_vector(w, n)}};
    for (int order = m - 1; order >= 0; --order) cur = apply_derivative(order, cur);
    // e^{m J_-([z])} for psi and e^{-m J_-([z])} for psi*
    const auto rpoint = times_at(ring, [&](int k) { return canonical(Q(-tsign * m, k)); });
    const PolyFockVector ev = apply_current_exp_series(-1, ring.table, ring.cut, "t", vacuum_vector(w, dst), D);
    for (const auto& V : states_of(dst, D)) {
        Laurent lhs, rhs;
        for (const auto& [ex, vec] : cur) laurent_add(lhs, ex, vec.coefficient(V));
        laurent_add(rhs, e + V.shape.size(), c * ev.coefficient(V).evaluate(rpoint));
        if (lhs != rhs) {
            fail(r, "state " + V.str() + ": " + laurent_str(lhs) + " vs " + laurent_str(rhs));
            return r;
        }
    }
    return r;
}

BosonReport bosonization_rule_check(RuleSide side, bool star, int n, int m, int D)
{
    const Q a(merged_constant(m));
    const Q s = (m * (m - 1) / 2) % 2 ? Q(-1) : Q(1);
    if (side == RuleSide::left)
        return star ? bosonization_rule_check_with(side, star, n, m, D, a, -long(m) * (n + m - 1))
                    : bosonization_rule_check_with(side, star, n, m, D, a, long(m) * (n - m));
    return star ? bosonization_rule_check_with(side, star, n, m, D, s * a, long(m) * (1 - n))
                : bosonization_rule_check_with(side, star, n, m, D, s * a, long(m) * n);
}

BosonReport two_point_kernel_check(int n, const Q& z, const Q& y, int D)
{
    BosonReport r = report("two-point kernel");
    if (sgn(z) == 0 || sgn(y) == 0 || z == y) throw std::invalid_argument("two_point_kernel_check: need z, y nonzero and distinct");
    const TauRing ring = make_tau_ring(std::max(D, 1));
    const ModeWindow w = ModeWindow::around(n, n, D + 2);
    const Q ratio = z / y;
    const auto point = times_at(ring, [&](int k) -> Q { return (qpow(y, -k) - qpow(z, -k)) / Q(k); });
    const Q pre = Q(qpow(z, n) * qpow(y, 1 - n) / (y - z));
    const BasisState vac{n, {}};
    note_weight(r, D);
    for (const auto& U : states_of(n, D)) {
        const FockVector u = basis_vector(w, U);
        Q lhs = 0;
        for (long j = w.lo(); j < w.hi(); ++j) {
            const FockVector pj = apply_psi(j, u);
            if (pj.empty()) continue;
            for (long i = w.lo(); i < w.hi(); ++i) {
                const Q c = apply_psi_star(i, pj).coefficient(vac);
                if (sgn(c)) lhs += c * qpow(y, -i) * qpow(z, j);
            }
        }
        // the empty modes j >= hi each give psi*_j psi_j U = U
        lhs += u.coefficient(vac) * qpow(ratio, w.hi()) / (1 - ratio);
        const PolyFockVector eu = apply_current_exp_series(1, ring.table, ring.cut, "t", u, D);
        const Q rhs = pre * eu.coefficient(vac).evaluate(point);
        if (lhs != rhs) {
            fail(r, "state " + U.str() + ": " + to_string(lhs) + " vs " + to_string(rhs));
            return r;
        }
    }
    return r;
}

BosonReport current_from_vertices_check(int order, int n_lo, int n_hi, int D)
{
    BosonReport r = report("current expansion at order " + std::to_string(order));
    if (order < 0 || order > 2) throw std::invalid_argument("current_from_vertices_check: order 0..2");
    const ModeWindow w = ModeWindow::around(n_lo, n_hi, 2 * D + 2);
    using Image = std::map<long, FockVector>;
    auto add = [&](Image& img, long e, const FockVector& v, const Q& c) {
        if (sgn(c) == 0 || v.empty()) return;
        auto it = img.try_emplace(e, w).first;
        it->second += v * c;
        if (it->second.empty()) img.erase(it);
    };
    note_weight(r, D);
    for (int n = n_lo; n <= n_hi; ++n)
        for (const auto& U : states_of(n, D)) {
            const FockVector u = basis_vector(w, U);
            Image lhs, rhs;
            // sum_{j,i} C(j, order) z^{j-order-i} :psi_j psi*_i:
            const Q rf(factorial(order));
            for (long i = w.lo(); i < w.hi(); ++i) {
                const FockVector a = apply_psi_star(i, u);
                for (long j = w.lo(); j < w.hi(); ++j) {
                    const Q c = falling(Q(j), order) / rf;
                    if (sgn(c) == 0) continue;
                    FockVector b = a.empty() ? FockVector(w) : apply_psi(j, a);
                    if (i == j && j < 0) b -= u;
                    add(lhs, j - order - i, b, c);
                }
            }
            // bosonic side; normal order puts higher modes to the right, where they act first
            std::map<std::vector<long>, FockVector> cache;
            auto normal = [&](std::vector<long> idx) -> const FockVector& {
                std::sort(idx.begin(), idx.end());
                auto it = cache.find(idx);
                if (it != cache.end()) return it->second;
                // only images of weight <= D are compared, and lowering below zero kills U
                long down = 0, total = 0;
                for (long k : idx) {
                    if (k > 0) down += k;
                    total += k;
                }
                if (down > U.shape.size() || U.shape.size() - total > D) return cache.emplace(idx, FockVector(w)).first->second;
                FockVector v = u;
                for (auto k = idx.rbegin(); k != idx.rend() && !v.empty(); ++k) v = apply_current(*k, v);
                return cache.emplace(idx, v).first->second;
            };
            const long K = D;
            if (order == 0) {
                for (long k = -K; k <= K; ++k) add(rhs, -k, normal({k}), 1);
            } else if (order == 1) {
                for (long a = -K; a <= K; ++a)
                    for (long b = -K; b <= K; ++b) add(rhs, -a - b - 1, normal({a, b}), Q(1, 2));
                for (long k = -K; k <= K; ++k) add(rhs, -k - 1, normal({k}), Q(-k - 1, 2));
            } else {
                for (long a = -K; a <= K; ++a)
                    for (long b = -K; b <= K; ++b) {
                        for (long c = -K; c <= K; ++c) add(rhs, -a - b - c - 2, normal({a, b, c}), Q(1, 6));
                        add(rhs, -a - b - 2, normal({a, b}), canonical(Q(-b - 1, 2)));
                    }
                for (long k = -K; k <= K; ++k) add(rhs, -k - 2, normal({k}), canonical(Q((k + 1) * (k + 2), 6)));
            }
            // compare on the states of weight <= D
            std::set<long> exps;
            for (const auto& [e, v] : lhs) exps.insert(e);
            for (const auto& [e, v] : rhs) exps.insert(e);
            for (long e : exps) {
                FockVector d = lhs.count(e) ? lhs.at(e) : FockVector(w);
                if (rhs.count(e)) d -= rhs.at(e);
                for (const auto& [V, c] : d.terms())
                    if (V.shape.size() <= D && V.charge >= n_lo && V.charge <= n_hi) {
                        fail(r, "<" + V.str() + "| . |" + U.str() + "> at z^" + std::to_string(e));
                        return r;
                    }
            }
        }
    return r;
}

}  // namespace tauforge
