#include "tauforge/grouplike.hpp"

#include <set>
#include <sstream>

namespace tauforge {

ModeMatrix ModeMatrix::zero(int lo, int size)
{
    return ModeMatrix{lo, zero_matrix(size, size)};
}

Q ModeMatrix::at(long i, long k) const
{
    if (i < lo || k < lo || i >= hi() || k >= hi()) return 0;
    return a[i - lo][k - lo];
}

void ModeMatrix::set(long i, long k, const Q& v)
{
    if (i < lo || k < lo || i >= hi() || k >= hi()) throw std::out_of_range("mode matrix index outside its range");
    a[i - lo][k - lo] = v;
}

bool ModeMatrix::is_zero() const { return tauforge::is_zero(a); }

ModeMatrix ModeMatrix::widened(int new_lo, int new_hi) const
{
    if (new_lo > lo || new_hi < hi()) throw std::invalid_argument("widened range must contain the old one");
    ModeMatrix m = zero(new_lo, new_hi - new_lo);
    for (long i = lo; i < hi(); ++i)
        for (long k = lo; k < hi(); ++k) m.set(i, k, at(i, k));
    return m;
}

std::string GroupLike::kind() const
{
    static const char* names[] = {"exponent_bilinear", "normal_ordered_bilinear", "linear_word", "soliton", "diagonal",
                                  "projector", "outer", "scalar", "product"};
    return names[v.index()];
}

GroupLike operator*(const GroupLike& a, const GroupLike& b) { return GroupLike{Product{{a, b}}}; }

GroupLike singular_limit(const Letter& phi_star, const Letter& psi, std::optional<int> vacuum)
{
    if (!phi_star.star || psi.star) throw std::invalid_argument("singular_limit expects (psi* letter, psi letter)");
    const Q c = contraction(psi, phi_star, vacuum);
    if (sgn(c) == 0) throw std::domain_error("singular_limit: <Psi Phi*> vanishes, no singular point");
    return GroupLike{Product{{GroupLike{Scalar{1 / c}}, GroupLike{LinearWord{{psi, phi_star}}}}}};
}

FockVector apply_bilinear(const ModeMatrix& b, const FockVector& v)
{
    const auto& w = v.window();
    std::vector<std::tuple<long, long, Q>> entries;
    for (long i = b.lo; i < b.hi(); ++i)
        for (long k = b.lo; k < b.hi(); ++k)
            if (sgn(b.at(i, k)) != 0) {
                w.require(i);
                w.require(k);
                entries.emplace_back(i, k, b.at(i, k));
            }
    return v.act([&](Mask m) {
        WedgeImage img;
        for (const auto& [i, k, c] : entries) {
            auto r1 = psi_on_mask(w, m, k, false);
            if (!r1) continue;
            auto r2 = psi_on_mask(w, r1->first, i, true);
            if (!r2) continue;
            img.emplace_back(r2->first, r1->second * r2->second > 0 ? c : Q(-c));
        }
        return img;
    });
}

namespace {

// sum_m X^m v / m!, which must terminate.
FockVector exp_series_apply(const ModeMatrix& x, const FockVector& v, std::optional<int> max_weight)
{
    const auto& w = v.window();
    const int cap = 4 * w.size() + 8;
    FockVector total = v, term = v;
    for (int m = 1;; ++m) {
        term = apply_bilinear(x, term) * Q(1, m);
        if (max_weight) term = term.filtered([&](Mask s) { return weight_of(w, s) <= *max_weight; });
        if (term.empty()) break;
        if (m > cap) throw std::runtime_error("exponential series does not terminate in the window");
        total += term;
    }
    return total;
}

int effective_vacuum(const NormalOrderedBilinear& g, const ModeWindow& w)
{
    if (g.a.size() > 0 && (g.a.lo < w.lo() || g.a.hi() > w.hi()))
        throw WindowError("bilinear element reaches outside the window");
    if (!g.vacuum) return w.hi();
    return std::clamp(*g.vacuum, w.lo(), w.hi());
}

// :exp of the blocks psi*_i psi_k with i, k on the same side of n: psi_s -> (1 - A) psi_s
// above the vacuum and psi*_a -> (1 + A) psi*_a below it.
FockVector apply_rotation_block(const ModeMatrix& a, int n, const FockVector& v)
{
    const auto& w = v.window();
    bool trivial = true;
    for (long i = a.lo; i < a.hi() && trivial; ++i)
        for (long k = a.lo; k < a.hi(); ++k)
            if (sgn(a.at(i, k)) != 0 && ((i >= n) == (k >= n))) {
                trivial = false;
                break;
            }
    if (trivial) return v;
    std::map<long, Letter> rotated;
    auto letter_for = [&](long k, bool star) -> const Letter& {
        const long key = star ? -1 - (k - w.lo()) : k;
        auto it = rotated.find(key);
        if (it != rotated.end()) return it->second;
        std::map<long, Q> modes{{k, Q(1)}};
        if (star) {
            for (long i = std::max<long>(a.lo, w.lo()); i < std::min<long>(a.hi(), n); ++i) modes[i] += a.at(i, k);
        } else {
            for (long b = std::max<long>(a.lo, n); b < a.hi(); ++b) modes[b] -= a.at(k, b);
        }
        return rotated.emplace(key, Letter::combination(star, modes)).first->second;
    };
    const Mask vac = w.vacuum(n);
    FockVector out(w);
    for (const auto& [m, c] : v.wedge_terms()) {
        // m = sigma * psi_{s1} ... psi_{sr} psi*_{a1} ... psi*_{aq} |n>
        std::vector<long> parts, holes;
        for (long k = w.hi() - 1; k >= n; --k)
            if (occupied(w, m, k)) parts.push_back(k);
        for (long k = w.lo(); k < n; ++k)
            if (!occupied(w, m, k)) holes.push_back(k);
        Mask cur = vac;
        int sigma = 1;
        for (auto it = holes.rbegin(); it != holes.rend(); ++it) {
            auto r = psi_on_mask(w, cur, *it, true);
            cur = r->first;
            sigma *= r->second;
        }
        for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
            auto r = psi_on_mask(w, cur, *it, false);
            cur = r->first;
            sigma *= r->second;
        }
        FockVector t(w);
        t.add_wedge(vac, sigma > 0 ? c : Q(-c));
        for (auto it = holes.rbegin(); it != holes.rend() && !t.empty(); ++it) t = apply_letter(letter_for(*it, true), t);
        for (auto it = parts.rbegin(); it != parts.rend() && !t.empty(); ++it)
            t = apply_letter(letter_for(*it, false), t);
        out += t;
    }
    return out;
}

FockVector apply_normal_ordered_bilinear(const NormalOrderedBilinear& g, const FockVector& v,
                                         std::optional<int> max_weight)
{
    const auto& w = v.window();
    const int n = effective_vacuum(g, w);
    const auto& a = g.a;
    ModeMatrix creators = ModeMatrix::zero(a.lo, a.size()), annihilators = creators;
    for (long i = a.lo; i < a.hi(); ++i)
        for (long k = a.lo; k < a.hi(); ++k) {
            if (i < n && k >= n) creators.set(i, k, a.at(i, k));
            if (i >= n && k < n) annihilators.set(i, k, a.at(i, k));
        }
    FockVector t = exp_series_apply(annihilators, v, std::nullopt);
    t = apply_rotation_block(a, n, t);
    return exp_series_apply(creators, t, max_weight);
}

FockVector apply_impl(const GroupLike& g, const FockVector& v, std::optional<int> max_weight)
{
    const auto& w = v.window();
    return std::visit(
        [&](const auto& e) -> FockVector {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, ExponentBilinear>) {
                // psi*_i psi_k moves a particle from i to k, so with i <= k throughout no
                // term ever lowers the weight and pruning each power is exact
                bool raising = true;
                for (int r = 0; r < e.b.size() && raising; ++r)
                    for (int c = 0; c < r; ++c)
                        if (sgn(e.b.a[r][c]) != 0) { raising = false; break; }
                return exp_series_apply(e.b, v, raising ? max_weight : std::nullopt);
            } else if constexpr (std::is_same_v<T, NormalOrderedBilinear>) {
                return apply_normal_ordered_bilinear(e, v, max_weight);
            } else if constexpr (std::is_same_v<T, LinearWord>) {
                return apply_word(e.letters, v);
            } else if constexpr (std::is_same_v<T, SolitonExponent>) {
                const int n0 = std::clamp(0, w.lo(), w.hi());
                auto [scalar, nob] = soliton_to_vacuum(e, w, n0);
                return apply_normal_ordered_bilinear(nob, v, max_weight) * scalar;
            } else if constexpr (std::is_same_v<T, Diagonal>) {
                return apply_diagonal_weights(e.weight, v);
            } else if constexpr (std::is_same_v<T, ProjectorElement>) {
                return projector_apply(e.kind, e.charge, e.shape, v);
            } else if constexpr (std::is_same_v<T, OuterElement>) {
                return outer_apply(e.ket, e.bra, v);
            } else if constexpr (std::is_same_v<T, Scalar>) {
                return v * e.value;
            } else {
                FockVector t = v;
                for (std::size_t i = e.factors.size(); i-- > 0 && !t.empty();)
                    t = apply_impl(e.factors[i], t, i == 0 ? max_weight : std::nullopt);
                return t;
            }
        },
        g.v);
}

}  // namespace

FockVector apply(const GroupLike& g, const FockVector& v, std::optional<int> max_weight)
{
    FockVector out = apply_impl(g, v, max_weight);
    if (max_weight) out = out.filtered([&](Mask m) { return weight_of(v.window(), m) <= *max_weight; });
    return out;
}

PolyFockVector apply(const GroupLike& g, const PolyFockVector& v, std::optional<int> max_weight)
{
    const auto& w = v.window();
    PolyFockVector out(w);
    for (const auto& [m, c] : v.wedge_terms()) {
        FockVector single(w);
        single.add_wedge(m, Q(1));
        const FockVector image = apply(g, single, max_weight);
        for (const auto& [m2, q] : image.wedge_terms()) out.add_wedge(m2, c * q);
    }
    return out;
}

// ---- generating-series bilinears ---------------------------------------------

namespace {

ModeMatrix letters_mode_matrix(const QMatrix& b, const std::vector<Letter>& phi_star, const std::vector<Letter>& psi,
                               const ModeWindow& w)
{
    std::vector<std::vector<std::pair<long, Q>>> phis, psis;
    for (const auto& f : phi_star) phis.push_back(f.window_coefficients(w));
    for (const auto& f : psi) psis.push_back(f.window_coefficients(w));
    ModeMatrix modes = ModeMatrix::zero(w.lo(), w.size());
    for (std::size_t i = 0; i < phis.size(); ++i)
        for (std::size_t k = 0; k < psis.size(); ++k) {
            if (sgn(b[i][k]) == 0) continue;
            for (const auto& [j, x] : phis[i])
                for (const auto& [l, y] : psis[k]) modes.a[j - w.lo()][l - w.lo()] += b[i][k] * x * y;
        }
    return modes;
}

void check_shape(const QMatrix& a, std::size_t rows, std::size_t cols)
{
    if (a.size() != rows) throw std::invalid_argument("bilinear matrix rows must match the psi* letters");
    for (const auto& row : a)
        if (row.size() != cols) throw std::invalid_argument("bilinear matrix columns must match the psi letters");
}

}  // namespace

std::pair<Q, NormalOrderedBilinear> letters_to_vacuum(const QMatrix& a, const std::vector<Letter>& phi_star,
                                                      const std::vector<Letter>& psi, const ModeWindow& w, int n0)
{
    check_shape(a, phi_star.size(), psi.size());
    QMatrix c = zero_matrix(phi_star.size(), psi.size());
    for (std::size_t i = 0; i < phi_star.size(); ++i)
        for (std::size_t k = 0; k < psi.size(); ++k) c[i][k] = contraction(phi_star[i], psi[k], n0);
    // x exp(A) x = det(I + A C^T) :exp((I + A C^T)^{-1} A):_{n0}
    const QMatrix m = identity_matrix(phi_star.size()) + a * transpose(c);
    auto inv = inverse(m);
    if (!inv) throw std::domain_error("bilinear element has no normally ordered form around this vacuum");
    return {det(m), NormalOrderedBilinear{letters_mode_matrix(*inv * a, phi_star, psi, w), n0}};
}

NormalOrderedBilinear letters_to_bare(const QMatrix& a, const std::vector<Letter>& phi_star,
                                      const std::vector<Letter>& psi, const ModeWindow& w)
{
    check_shape(a, phi_star.size(), psi.size());
    for (const auto& f : phi_star)
        if (!f.finite()) throw std::domain_error("bare mode expansion needs finite letters");
    for (const auto& f : psi)
        if (!f.finite()) throw std::domain_error("bare mode expansion needs finite letters");
    return NormalOrderedBilinear{letters_mode_matrix(a, phi_star, psi, w), std::nullopt};
}

namespace {

std::vector<Letter> series_letters(const std::vector<Q>& pts, bool star)
{
    std::vector<Letter> out;
    for (const auto& z : pts) out.push_back(star ? Letter::psi_star_series(z) : Letter::psi_series(z));
    return out;
}

}  // namespace

QMatrix soliton_contractions(const SolitonExponent& s, int n0)
{
    QMatrix c = zero_matrix(s.q.size(), s.p.size());
    for (std::size_t i = 0; i < s.q.size(); ++i)
        for (std::size_t k = 0; k < s.p.size(); ++k)
            c[i][k] = contraction(Letter::psi_star_series(s.q[i]), Letter::psi_series(s.p[k]), n0);
    return c;
}

std::pair<Q, NormalOrderedBilinear> soliton_to_vacuum(const SolitonExponent& s, const ModeWindow& w, int n0)
{
    return letters_to_vacuum(s.a, series_letters(s.q, true), series_letters(s.p, false), w, n0);
}

// ---- rotations and reordering ---------------------------------------------------

namespace {

QMatrix vacuum_projector(const ModeMatrix& a, int n, bool above)
{
    QMatrix p = zero_matrix(a.size(), a.size());
    for (long k = a.lo; k < a.hi(); ++k)
        if ((k >= n) == above) p[k - a.lo][k - a.lo] = 1;
    return p;
}

}  // namespace

Rotation rotation_of(const GroupLike& g)
{
    Rotation rot;
    if (auto e = std::get_if<ExponentBilinear>(&g.v)) {
        rot.lo = e->b.lo;
        try {
            rot.r = exp_nilpotent(e->b.a);
            rot.r_prime = inverse(*rot.r);
        } catch (const std::exception& ex) {
            rot.diagnostic = ex.what();
        }
        return rot;
    }
    if (auto e = std::get_if<NormalOrderedBilinear>(&g.v)) {
        const auto& a = e->a;
        rot.lo = a.lo;
        const QMatrix id = identity_matrix(a.size());
        if (!e->vacuum) {
            rot.r = id + a.a;
            rot.r_prime = inverse(*rot.r);
            if (!rot.r_prime) rot.diagnostic = "I + B is degenerate, so R' does not exist";
            return rot;
        }
        const QMatrix pp = vacuum_projector(a, *e->vacuum, true), pm = vacuum_projector(a, *e->vacuum, false);
        if (auto inv = inverse(id - a.a * pp)) rot.r = id + *inv * a.a;
        if (auto inv = inverse(id + a.a * pm)) rot.r_prime = id - *inv * a.a;
        if (!rot.r && !rot.r_prime)
            rot.diagnostic = "I - A P+ and I + A P- are both degenerate: neither R nor R' exists";
        else if (!rot.r)
            rot.diagnostic = "I - A P+ is degenerate, so R does not exist";
        else if (!rot.r_prime)
            rot.diagnostic = "I + A P- is degenerate, so R' does not exist";
        return rot;
    }
    rot.diagnostic = "no finite rotation matrix for element kind " + g.kind();
    return rot;
}

bool rotation_holds(const GroupLike& g, const Rotation& rot, const std::vector<FockVector>& samples)
{
    for (const auto& v : samples) {
        const auto& w = v.window();
        const FockVector gv = apply(g, v);
        auto modes = [&](const QMatrix& m) { return static_cast<long>(m.size()); };
        if (rot.r) {
            for (long n = 0; n < modes(*rot.r); ++n) {
                FockVector rhs(w);
                for (long l = 0; l < modes(*rot.r); ++l)
                    if (sgn((*rot.r)[l][n]) != 0) rhs += apply_psi_star(rot.lo + l, gv) * (*rot.r)[l][n];
                if (!(apply(g, apply_psi_star(rot.lo + n, v)) == rhs)) return false;
            }
        }
        if (rot.r_prime) {
            for (long n = 0; n < modes(*rot.r_prime); ++n) {
                FockVector rhs(w);
                for (long l = 0; l < modes(*rot.r_prime); ++l)
                    if (sgn((*rot.r_prime)[l][n]) != 0)
                        rhs += apply(g, apply_psi_star(rot.lo + l, v)) * (*rot.r_prime)[l][n];
                if (!(apply_psi_star(rot.lo + n, gv) == rhs)) return false;
            }
        }
    }
    return true;
}

std::pair<Q, NormalOrderedBilinear> reorder(const NormalOrderedBilinear& g, std::optional<int> target)
{
    const auto& a = g.a;
    const QMatrix id = identity_matrix(a.size());
    Q scalar = 1;
    QMatrix bare = a.a;
    if (g.vacuum) {
        // :exp(A):_n = det(I - P A) x exp(B) x with B = (I - A P)^{-1} A
        const QMatrix p = vacuum_projector(a, *g.vacuum, true);
        auto inv = inverse(id - a.a * p);
        if (!inv) throw std::domain_error("reorder: I - A P is degenerate");
        scalar = det(id - p * a.a);
        bare = *inv * a.a;
    }
    if (!target) return {scalar, NormalOrderedBilinear{ModeMatrix{a.lo, bare}, std::nullopt}};
    // x exp(B) x = det(I + P B) :exp(A'):_m with A' = B (I + P B)^{-1}
    const QMatrix p = vacuum_projector(a, *target, true);
    auto inv = inverse(id + p * bare);
    if (!inv) throw std::domain_error("reorder: I + P B is degenerate");
    scalar *= det(id + p * bare);
    return {scalar, NormalOrderedBilinear{ModeMatrix{a.lo, bare * *inv}, target}};
}

NormalOrderedBilinear compose_normal_ordered(const NormalOrderedBilinear& left, const NormalOrderedBilinear& right)
{
    if (left.vacuum || right.vacuum) throw std::invalid_argument("compose_normal_ordered expects bare ordering");
    const int lo = std::min(left.a.lo, right.a.lo), hi = std::max(left.a.hi(), right.a.hi());
    const QMatrix b1 = left.a.widened(lo, hi).a, b = right.a.widened(lo, hi).a;
    return NormalOrderedBilinear{ModeMatrix{lo, b + b1 + b1 * b}, std::nullopt};
}

NormalOrderedBilinear exponent_to_bare(const ModeMatrix& b)
{
    return NormalOrderedBilinear{ModeMatrix{b.lo, exp_nilpotent(b.a) - identity_matrix(b.size())}, std::nullopt};
}

Q infinity_expectation(const NormalOrderedBilinear& g)
{
    if (!g.vacuum) return 1;
    const QMatrix p = vacuum_projector(g.a, *g.vacuum, true);
    return det(identity_matrix(g.a.size()) - p * g.a.a);
}

// ---- checks ------------------------------------------------------------------

BbcResult bbc_check(const GroupLike& g, const std::vector<BasisState>& samples, const ModeWindow& w)
{
    struct Data {
        std::vector<FockVector> psi_g, star_g, g_psi, g_star;
    };
    std::vector<Data> data;
    for (const auto& s : samples) {
        const FockVector v = basis_vector(w, s);
        const FockVector gv = apply(g, v);
        Data d;
        for (long k = w.lo(); k < w.hi(); ++k) {
            d.psi_g.push_back(apply_psi(k, gv));
            d.star_g.push_back(apply_psi_star(k, gv));
            d.g_psi.push_back(apply(g, apply_psi(k, v)));
            d.g_star.push_back(apply(g, apply_psi_star(k, v)));
        }
        data.push_back(std::move(d));
    }
    using Key = std::pair<Mask, Mask>;
    auto tensor = [&](const std::vector<FockVector>& a, const std::vector<FockVector>& b) {
        std::map<Key, Q> t;
        for (std::size_t k = 0; k < a.size(); ++k)
            for (const auto& [u, x] : a[k].wedge_terms())
                for (const auto& [u2, y] : b[k].wedge_terms()) t[{u, u2}] += x * y;
        std::erase_if(t, [](const auto& e) { return sgn(e.second) == 0; });
        return t;
    };
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = 0; j < samples.size(); ++j) {
            auto lhs = tensor(data[i].psi_g, data[j].star_g);
            auto rhs = tensor(data[i].g_psi, data[j].g_star);
            if (lhs == rhs) continue;
            std::ostringstream os;
            os << "V=" << samples[i].str() << " V'=" << samples[j].str();
            for (const auto& [key, x] : lhs) {
                auto it = rhs.find(key);
                if (it == rhs.end() || it->second != x) {
                    os << " U=" << w.decode(key.first).str() << " U'=" << w.decode(key.second).str();
                    break;
                }
            }
            return {false, os.str()};
        }
    return {};
}

std::optional<int> charge_of(const GroupLike& g, const std::vector<BasisState>& samples, const ModeWindow& w)
{
    std::set<int> seen;
    for (const auto& s : samples) {
        const FockVector gv = apply(g, basis_vector(w, s));
        for (const auto& [m, c] : gv.wedge_terms()) seen.insert(w.charge(m) - s.charge);
    }
    if (seen.size() > 1) throw std::logic_error("element mixes charges on the sampled states");
    if (seen.empty()) return std::nullopt;
    return *seen.begin();
}

std::pair<Q, NormalOrderedBilinear> reconstruct_exponential(const GroupLike& g, const ModeWindow& w, int n,
                                                            std::optional<int> max_weight)
{
    const FockVector gn = apply(g, vacuum_vector(w, n), max_weight);
    const Q c0 = gn.coefficient(BasisState{n, {}});
    if (sgn(c0) == 0) throw std::domain_error("reconstruct_exponential: <n|G|n> vanishes");
    ModeMatrix a = ModeMatrix::zero(w.lo(), w.size());
    for (int alpha = 0; n + alpha < w.hi(); ++alpha)
        for (int beta = 0; n - beta - 1 >= w.lo(); ++beta) {
            if (max_weight && alpha + beta + 1 > *max_weight) continue;
            const Q c = gn.coefficient(BasisState{n, Partition::hook(alpha, beta)});
            a.set(n - beta - 1, n + alpha, c / c0);
        }
    return {c0, NormalOrderedBilinear{a, n}};
}

}  // namespace tauforge
