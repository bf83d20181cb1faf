#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tauforge/partitions.hpp"
#include "tauforge/polyring.hpp"
#include "tauforge/rational.hpp"

namespace tauforge {

// Occupation bits of the modes lo..hi-1; modes below lo are filled, modes from hi up are empty.
using Mask = unsigned __int128;

class WindowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BasisState {
    int charge = 0;
    Partition shape;
    std::string str() const;
    auto operator<=>(const BasisState&) const = default;
};

class ModeWindow {
public:
    ModeWindow(int lo, int hi);
    // Room for charges n_lo..n_hi and weights up to D, plus a margin of two.
    static ModeWindow around(int n_lo, int n_hi, int D);

    int lo() const { return lo_; }
    int hi() const { return hi_; }
    int size() const { return hi_ - lo_; }
    bool contains(long k) const { return k >= lo_ && k < hi_; }
    void require(long k) const;
    bool fits(const BasisState& s) const;
    Mask encode(const BasisState& s) const;  // throws WindowError
    BasisState decode(Mask m) const;
    int charge(Mask m) const;
    Mask vacuum(int n) const;
    bool operator==(const ModeWindow&) const = default;

private:
    int lo_, hi_;
};

int popcount(Mask m);
inline Mask bit(const ModeWindow& w, long k) { return Mask(1) << (k - w.lo()); }
inline bool occupied(const ModeWindow& w, Mask m, long k)
{
    if (k < w.lo()) return true;
    if (k >= w.hi()) return false;
    return (m >> (k - w.lo())) & 1;
}
// (-1)^{number of occupied modes above k}
int sign_above(const ModeWindow& w, Mask m, long k);

// Image of one wedge state under an operator: signed or weighted wedge states.
using WedgeImage = std::vector<std::pair<Mask, Q>>;

inline bool ring_is_zero(const Q& q) { return sgn(q) == 0; }
inline bool ring_is_zero(const Poly& p) { return p.is_zero(); }

// Sparse vector over the wedge basis psi_{m1} psi_{m2} ... |sea>, m1 > m2 > ...
// The canonical state |lambda,n> equals (-1)^{b(lambda)} times its wedge, and the
// public accessors speak in terms of the canonical states.
template <class R>
class FockVectorT {
public:
    using Terms = std::map<Mask, R>;

    explicit FockVectorT(ModeWindow w) : win_(w) {}
    static FockVectorT basis(const ModeWindow& w, const BasisState& s, const R& c)
    {
        FockVectorT v(w);
        v.add(s, c);
        return v;
    }

    const ModeWindow& window() const { return win_; }
    const Terms& wedge_terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_wedge(Mask m, const R& c)
    {
        if (ring_is_zero(c)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
            return;
        }
        it->second += c;
        if (ring_is_zero(it->second)) terms_.erase(it);
    }
    void add(const BasisState& s, const R& c)
    {
        const Mask m = win_.encode(s);
        if (s.shape.b_exponent() % 2)
            add_wedge(m, -c);
        else
            add_wedge(m, c);
    }
    R coefficient(const BasisState& s) const
    {
        if (!win_.fits(s)) return R{};
        auto it = terms_.find(win_.encode(s));
        if (it == terms_.end()) return R{};
        return s.shape.b_exponent() % 2 ? R(-it->second) : it->second;
    }
    std::vector<std::pair<BasisState, R>> terms() const
    {
        std::vector<std::pair<BasisState, R>> out;
        for (const auto& [m, c] : terms_) {
            BasisState s = win_.decode(m);
            out.emplace_back(s, s.shape.b_exponent() % 2 ? R(-c) : c);
        }
        return out;
    }

    FockVectorT& operator+=(const FockVectorT& o)
    {
        require_window(o);
        for (const auto& [m, c] : o.terms_) add_wedge(m, c);
        return *this;
    }
    FockVectorT& operator-=(const FockVectorT& o)
    {
        require_window(o);
        for (const auto& [m, c] : o.terms_) add_wedge(m, R(-c));
        return *this;
    }
    FockVectorT& operator*=(const Q& s)
    {
        if (sgn(s) == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }
    // Multiplication by a ring element (a polynomial for PolyFockVector).
    FockVectorT scaled_by(const R& s) const
    {
        FockVectorT out(win_);
        for (const auto& [m, c] : terms_) out.add_wedge(m, c * s);
        return out;
    }
    friend FockVectorT operator+(FockVectorT a, const FockVectorT& b) { return a += b; }
    friend FockVectorT operator-(FockVectorT a, const FockVectorT& b) { return a -= b; }
    friend FockVectorT operator*(FockVectorT a, const Q& s) { return a *= s; }
    friend FockVectorT operator*(const Q& s, FockVectorT a) { return a *= s; }

    bool operator==(const FockVectorT& o) const
    {
        if (!(win_ == o.win_) || terms_.size() != o.terms_.size()) return false;
        for (const auto& [m, c] : terms_) {
            auto it = o.terms_.find(m);
            if (it == o.terms_.end() || !(it->second == c)) return false;
        }
        return true;
    }

    // Applies a linear operator given by its action on single wedge states.
    template <class Op>
    FockVectorT act(Op op) const
    {
        FockVectorT out(win_);
        for (const auto& [m, c] : terms_)
            for (const auto& [m2, q] : op(m)) {
                if (sgn(q) == 0) continue;
                R t = c;
                t *= q;
                out.add_wedge(m2, t);
            }
        return out;
    }

    // Keeps only the states accepted by the predicate.
    template <class Pred>
    FockVectorT filtered(Pred keep) const
    {
        FockVectorT out(win_);
        for (const auto& [m, c] : terms_)
            if (keep(m)) out.terms_.emplace(m, c);
        return out;
    }

private:
    void require_window(const FockVectorT& o) const
    {
        if (!(win_ == o.win_)) throw WindowError("fock vectors live in different windows");
    }
    ModeWindow win_;
    Terms terms_;
};

using FockVector = FockVectorT<Q>;
using PolyFockVector = FockVectorT<Poly>;

FockVector basis_vector(const ModeWindow& w, const BasisState& s);
FockVector vacuum_vector(const ModeWindow& w, int n);
PolyFockVector to_poly(const FockVector& v, TablePtr table, const Cutoffs& cut);
// Coefficients of a polynomial-valued vector at a point of the time variables.
FockVector evaluate(const PolyFockVector& v, const std::map<std::string, Q>& assignment);

// Weight |lambda| of a wedge state.
int weight_of(const ModeWindow& w, Mask m);

// ---- single modes -------------------------------------------------------

std::optional<std::pair<Mask, int>> psi_on_mask(const ModeWindow& w, Mask m, long k, bool star);

template <class R>
FockVectorT<R> apply_psi(long k, const FockVectorT<R>& v)
{
    v.window().require(k);
    return v.act([&](Mask m) {
        WedgeImage img;
        if (auto r = psi_on_mask(v.window(), m, k, false)) img.emplace_back(r->first, Q(r->second));
        return img;
    });
}

template <class R>
FockVectorT<R> apply_psi_star(long k, const FockVectorT<R>& v)
{
    v.window().require(k);
    return v.act([&](Mask m) {
        WedgeImage img;
        if (auto r = psi_on_mask(v.window(), m, k, true)) img.emplace_back(r->first, Q(r->second));
        return img;
    });
}

// sum of coefficient products over common states (the basis is orthonormal)
template <class R>
R inner(const FockVectorT<R>& u, const FockVectorT<R>& v)
{
    if (!(u.window() == v.window())) throw WindowError("inner: window mismatch");
    R acc{};
    for (const auto& [m, c] : u.wedge_terms()) {
        auto it = v.wedge_terms().find(m);
        if (it != v.wedge_terms().end()) acc += c * it->second;
    }
    return acc;
}

enum class CreationRoute { frobenius, row, column };
FockVector basis_state_via_creation(const ModeWindow& w, CreationRoute route, const Partition& l, int n);

// ---- letters and words ---------------------------------------------------

// c * d^order/dz^order of psi(z) = sum_k psi_k z^k (or psi*(z) = sum_k psi*_k z^{-k}) at z = point
struct SeriesTerm {
    Q point;
    int order = 0;
    Q coeff = 1;
};

// A linear combination of psi's or of psi*'s, possibly including generating series.
struct Letter {
    bool star = false;
    std::map<long, Q> modes;
    std::vector<SeriesTerm> series;

    static Letter psi(long k, const Q& c = 1);
    static Letter psi_star(long k, const Q& c = 1);
    static Letter combination(bool star, std::map<long, Q> modes);
    static Letter psi_series(const Q& point, int order = 0, const Q& c = 1);
    static Letter psi_star_series(const Q& point, int order = 0, const Q& c = 1);

    bool finite() const { return series.empty(); }
    Q mode_coefficient(long k) const;
    // In-window coefficients; finite modes outside the window are an error.
    std::vector<std::pair<long, Q>> window_coefficients(const ModeWindow& w) const;
    std::string str() const;
};

using OperatorWord = std::vector<Letter>;

// <vac| f g |vac> for the vacuum |n>; nullopt stands for the bare ordering (all psi* to the left).
Q contraction(const Letter& f, const Letter& g, std::optional<int> vacuum);

struct WordTerm {
    Q coeff;
    std::vector<int> letters;  // indices into the word, in order
    bool operator==(const WordTerm&) const = default;
};

// :f_0 ... f_r:  as a combination of ordinary products of sub-words.
std::vector<WordTerm> normal_order_word(const OperatorWord& word, std::optional<int> vacuum);
// f_0 ... f_r as a combination of normally ordered sub-words (Wick expansion).
std::vector<WordTerm> wick_expand(const OperatorWord& word, std::optional<int> vacuum);

// Window-truncated action of one letter.
template <class R>
FockVectorT<R> apply_letter(const Letter& f, const FockVectorT<R>& v)
{
    const auto& w = v.window();
    const auto coeffs = f.window_coefficients(w);
    return v.act([&](Mask m) {
        WedgeImage img;
        for (const auto& [k, c] : coeffs)
            if (auto r = psi_on_mask(w, m, k, f.star)) img.emplace_back(r->first, r->second > 0 ? c : Q(-c));
        return img;
    });
}

// Splits a letter into the parts creating (true) or annihilating (false) relative to |n>.
Letter letter_part(const Letter& f, const ModeWindow& w, int n, bool creation);

// :f_0 ... f_r:_n applied to v.  Exact inside the window whenever lo <= n <= hi.
template <class R>
FockVectorT<R> apply_normal_ordered(const OperatorWord& word, int n, const FockVectorT<R>& v)
{
    const auto& w = v.window();
    const int r = static_cast<int>(word.size());
    if (r == 0) return v;
    bool series = false;
    for (const auto& f : word) series = series || !f.finite();
    if (series && (n < w.lo() || n > w.hi()))
        throw WindowError("series letters need a vacuum inside the window");
    std::vector<Letter> cre, ann;
    for (const auto& f : word) {
        cre.push_back(letter_part(f, w, n, true));
        ann.push_back(letter_part(f, w, n, false));
    }
    FockVectorT<R> out(w);
    for (unsigned choice = 0; choice < (1u << r); ++choice) {
        // bit i set: letter i contributes its creation part
        std::vector<const Letter*> left, right;
        int swaps = 0, ann_seen = 0;
        bool zero = false;
        for (int i = 0; i < r; ++i) {
            const bool c = (choice >> i) & 1;
            const Letter& part = c ? cre[i] : ann[i];
            if (part.modes.empty()) {
                zero = true;
                break;
            }
            if (c) {
                left.push_back(&part);
                swaps += ann_seen;
            } else {
                right.push_back(&part);
                ++ann_seen;
            }
        }
        if (zero) continue;
        FockVectorT<R> t = v;
        for (auto it = right.rbegin(); it != right.rend() && !t.empty(); ++it) t = apply_letter(**it, t);
        for (auto it = left.rbegin(); it != left.rend() && !t.empty(); ++it) t = apply_letter(**it, t);
        if (swaps % 2) t *= Q(-1);
        out += t;
    }
    return out;
}

// Ordinary product f_0 ... f_r applied to v.  Finite words act letter by letter;
// words with generating series go through the Wick expansion around a vacuum
// inside the window, which keeps the truncation exact.
template <class R>
FockVectorT<R> apply_word(const OperatorWord& word, const FockVectorT<R>& v)
{
    bool finite = true;
    for (const auto& f : word) finite = finite && f.finite();
    if (finite) {
        FockVectorT<R> t = v;
        for (auto it = word.rbegin(); it != word.rend() && !t.empty(); ++it) t = apply_letter(*it, t);
        return t;
    }
    const auto& w = v.window();
    const int n0 = std::clamp(0, w.lo(), w.hi());
    FockVectorT<R> out(w);
    for (const auto& term : wick_expand(word, n0)) {
        OperatorWord sub;
        for (int i : term.letters) sub.push_back(word[i]);
        out += apply_normal_ordered(sub, n0, v) * term.coeff;
    }
    return out;
}

// ---- projectors ----------------------------------------------------------

enum class ProjectorKind { plus, minus };
// P+_{n,l}: all modes of I_{n,l} filled; P-_{n,l}: all modes outside I_{n,l} empty.
bool projector_keeps(const ModeWindow& w, Mask m, ProjectorKind kind, int n, const Partition& l);

template <class R>
FockVectorT<R> projector_apply(ProjectorKind kind, int n, const Partition& l, const FockVectorT<R>& v)
{
    const auto& w = v.window();
    return v.filtered([&](Mask m) { return projector_keeps(w, m, kind, n, l); });
}

template <class R>
FockVectorT<R> projector_apply(ProjectorKind kind, int n, const FockVectorT<R>& v)
{
    return projector_apply(kind, n, Partition{}, v);
}

// |l,n><mu,m| v
template <class R>
FockVectorT<R> outer_apply(const BasisState& ket, const BasisState& bra, const FockVectorT<R>& v)
{
    FockVectorT<R> out(v.window());
    R c = v.coefficient(bra);
    if (!ring_is_zero(c)) out.add(ket, c);
    return out;
}

// ---- currents ------------------------------------------------------------

// J_k = sum_j psi_j psi*_{j+k}; J_0 is the charge.
WedgeImage current_on_mask(const ModeWindow& w, Mask m, long k);

template <class R>
FockVectorT<R> apply_current(long k, const FockVectorT<R>& v)
{
    return v.act([&](Mask m) { return current_on_mask(v.window(), m, k); });
}

// e^{J_-(t)} (sign -1) or e^{J_+(t)} (sign +1) through skew Schur functions of the
// time family of `ctx`; new states are kept up to |lambda| + D.
class SchurContext;
PolyFockVector apply_current_exp(int sign, const SchurContext& ctx, const FockVector& v, int D);
// The same exponential expanded as a power series of applications of the currents.
PolyFockVector apply_current_exp_series(int sign, TablePtr table, const Cutoffs& cut,
                                        const std::string& prefix, const FockVector& v, int D);
PolyFockVector apply_current_exp_series(int sign, TablePtr table, const Cutoffs& cut,
                                        const std::string& prefix, const PolyFockVector& v, int D);
// s_l(J~_{+-}) with J~_k = J_k / k.
FockVector apply_schur_of_currents(const Partition& l, int sign, const FockVector& v);

// ---- diagonal evolution --------------------------------------------------

// log of the eigenvalue of exp(sum_j b_j :psi_j psi*_j:) on |l,n>, in closed form
template <class R>
R diagonal_log_eigenvalue(const std::function<R(long)>& b, int n, const Partition& l, const R& zero = R{})
{
    R acc = zero;
    if (n > 0)
        for (long j = 0; j < n; ++j) acc += b(j);
    if (n < 0)
        for (long j = n; j < 0; ++j) acc -= b(j);
    for (int j = 1; j <= l.length(); ++j) {
        acc += b(n + l[j] - j);
        acc -= b(n - j);
    }
    return acc;
}

// The same quantity read off the occupation numbers.
template <class R>
R diagonal_log_eigenvalue_direct(const std::function<R(long)>& b, const ModeWindow& w, Mask m)
{
    R acc{};
    const long from = std::min(w.lo(), 0), to = std::max(w.hi(), 0);
    for (long j = from; j < to; ++j) {
        const bool occ = occupied(w, m, j);
        if (occ && j >= 0) acc += b(j);
        if (!occ && j < 0) acc -= b(j);
    }
    return acc;
}

// Integer polynomial p(j) = sum_i coeffs[i] j^i.
struct ModePolynomial {
    std::vector<Z> coeffs;
    Z operator()(long j) const;
};

// exp(sum_j p(j) :psi_j psi*_j:) with e replaced by `base` (the eigenvalue is base^E, E an integer).
FockVector apply_diagonal_exp(const ModePolynomial& p, const Q& base, const FockVector& v);
// prod_j g_j^{:psi_j psi*_j:} for nonzero rational weights g_j.
FockVector apply_diagonal_weights(const std::function<Q(long)>& g, const FockVector& v);
// exp(sum_j b_j :psi_j psi*_j:) with polynomial b_j (no constant terms).
PolyFockVector apply_diagonal_exp(const std::function<Poly(long)>& b, TablePtr table, const Cutoffs& cut,
                                  const FockVector& v);

}  // namespace tauforge
