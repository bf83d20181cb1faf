#include "tauforge/wick.hpp"

#include <stdexcept>

namespace tauforge {

namespace {

void require_letters(const OperatorWord& word, bool star, const char* what)
{
    for (const auto& f : word)
        if (f.star != star) throw std::invalid_argument(std::string(what) + ": letter of the wrong kind");
}

template <class R>
FockVectorT<R> act(const Letter& f, const FockVectorT<R>& v)
{
    return f.finite() ? apply_letter(f, v) : apply_word(OperatorWord{f}, v);
}

template <class R, class Pair, class Det>
WickIdentity<R> generalized(Pair pair, const GroupLike& mid, const GroupLike& right, const FockVectorT<R>& ket,
                            const OperatorWord& v, const OperatorWord& w_star, Det det_fn)
{
    require_letters(v, false, "wick_generalized");
    require_letters(w_star, true, "wick_generalized");
    if (v.size() != w_star.size()) throw std::invalid_argument("wick_generalized: need as many v as w*");
    const int m = static_cast<int>(v.size());
    const FockVectorT<R> g = apply(right, ket);
    WickIdentity<R> out;
    out.m = m;
    out.denominator = pair(apply(mid, g));
    FockVectorT<R> x = g;
    for (int i = 0; i < m; ++i) x = act(w_star[i], x);
    x = apply(mid, x);
    for (int j = m - 1; j >= 0; --j) x = act(v[j], x);
    out.lhs = pair(x);
    Matrix<R> n(m, std::vector<R>(m));
    for (int i = 0; i < m; ++i) {
        const FockVectorT<R> wi = apply(mid, act(w_star[i], g));
        for (int j = 0; j < m; ++j) n[i][j] = pair(act(v[j], wi));
    }
    out.det = det_fn(n);
    return out;
}

Q checked_ratio(const Q& a, const Q& b, const char* what)
{
    if (sgn(b) == 0) throw std::domain_error(std::string(what) + ": vanishing central correlator");
    return a / b;
}

}  // namespace

Q correlator_direct(const ModeWindow& w, int bra, const OperatorWord& word, int ket)
{
    return inner(vacuum_vector(w, bra), apply_word(word, vacuum_vector(w, ket)));
}

Q wick_standard(int n, const OperatorWord& v, const OperatorWord& w_star)
{
    require_letters(v, false, "wick_standard");
    require_letters(w_star, true, "wick_standard");
    if (v.size() != w_star.size()) throw std::invalid_argument("wick_standard: need as many v as w*");
    const std::size_t m = v.size();
    QMatrix a = zero_matrix(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) a[i][j] = contraction(v[i], w_star[j], n);
    return det(a);
}

Q wick_standard_star_first(int n, const OperatorWord& w_star, const OperatorWord& v)
{
    require_letters(v, false, "wick_standard");
    require_letters(w_star, true, "wick_standard");
    if (v.size() != w_star.size()) throw std::invalid_argument("wick_standard: need as many v as w*");
    const std::size_t m = v.size();
    QMatrix a = zero_matrix(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) a[i][j] = contraction(w_star[i], v[j], n);
    return det(a);
}

WickIdentity<Q> wick_generalized(const FockVector& bra, const GroupLike& mid, const GroupLike& right,
                                 const FockVector& ket, const OperatorWord& v, const OperatorWord& w_star)
{
    return generalized<Q>([&](const FockVector& x) { return inner(bra, x); }, mid, right, ket, v, w_star,
                          [](const QMatrix& a) { return det(a); });
}

WickIdentity<Poly> wick_generalized(const PolyFockVector& bra, const GroupLike& mid, const GroupLike& right,
                                    const PolyFockVector& ket, const OperatorWord& v, const OperatorWord& w_star,
                                    const TablePtr& table, const Cutoffs& cut)
{
    return generalized<Poly>(
        [&](const PolyFockVector& x) {
            Poly r(table, cut);
            r += inner(bra, x);
            return r;
        },
        mid, right, ket, v, w_star, [&](const Matrix<Poly>& a) { return det_poly(a, table, cut); });
}

WickIdentity<Q> wick_generalized(const GroupLike& left, int n, const GroupLike& mid, const GroupLike& right,
                                 const FockVector& ket, const OperatorWord& v, const OperatorWord& w_star)
{
    const FockVector bra = vacuum_vector(ket.window(), n);
    return generalized<Q>([&](const FockVector& x) { return inner(bra, apply(left, x)); }, mid, right, ket, v,
                          w_star, [](const QMatrix& a) { return det(a); });
}

ColumnForm wick_column_form(const GroupLike& g, const ModeWindow& w, int n, const OperatorWord& letters,
                            ColumnSide side)
{
    const bool star = side == ColumnSide::w_star_left || side == ColumnSide::w_star_right;
    require_letters(letters, star, "wick_column_form");
    const int m = static_cast<int>(letters.size());
    auto vac = [&](int k) { return vacuum_vector(w, k); };
    auto central = [&](int k) { return inner(vac(k), apply(g, vac(k))); };
    const Q d = central(n);
    const char* what = "wick_column_form";
    ColumnForm out;
    QMatrix stepped = zero_matrix(m, m);
    switch (side) {
    case ColumnSide::w_star_left:
    case ColumnSide::v_left: {
        const int dir = star ? -1 : 1;
        FockVector x = apply(g, vac(n));
        const FockVector gn = x;
        for (int i = 0; i < m; ++i) x = act(letters[i], x);
        out.lhs = checked_ratio(inner(vac(n + dir * m), x), d, what);
        QMatrix shifted = zero_matrix(m, m);
        for (int i = 0; i < m; ++i) {
            const FockVector li = act(letters[i], gn);
            for (int j = 1; j <= m; ++j) {
                const FockVector s = star ? apply_psi(n - j, li) : apply_psi_star(n + j - 1, li);
                shifted[i][j - 1] = checked_ratio(inner(vac(n), s), d, what);
                // <n-j| w*_i G |n-j+1> / <n-j+1|G|n-j+1>, or <n+j| v_i G |n+j-1> / <n+j-1|G|n+j-1>
                const int from = star ? n - j + 1 : n + j - 1;
                stepped[i][j - 1] = checked_ratio(
                    inner(vac(from + dir), act(letters[i], apply(g, vac(from)))), central(from), what);
            }
        }
        out.shifted = det(shifted);
        break;
    }
    case ColumnSide::v_right:
    case ColumnSide::w_star_right: {
        // <n| G v_1..v_m |n-m>  or  <n| G w*_1..w*_m |n+m>
        const int dir = star ? 1 : -1;
        FockVector x = vac(n + dir * m);
        for (int i = m - 1; i >= 0; --i) x = act(letters[i], x);
        out.lhs = checked_ratio(inner(vac(n), apply(g, x)), d, what);
        for (int i = 0; i < m; ++i)
            for (int j = 1; j <= m; ++j) {
                const int to = star ? n + j - 1 : n - j + 1;
                stepped[i][j - 1] = checked_ratio(inner(vac(to), apply(g, act(letters[i], vac(to + dir)))),
                                                  central(to), what);
            }
        break;
    }
    }
    out.stepped = det(stepped);
    return out;
}

bool column_three_term(const GroupLike& g, const ModeWindow& w, int n, long l, const Letter& w_star)
{
    auto vac = [&](int k) { return vacuum_vector(w, k); };
    auto me = [&](int a, const OperatorWord& word, int b) { return inner(vac(a), apply_word(word, apply(g, vac(b)))); };
    const Q lhs = me(n, {}, n) * me(n + 1, {Letter::psi(l), w_star}, n + 1);
    const Q rhs = me(n + 1, {}, n + 1) * me(n, {Letter::psi(l), w_star}, n) +
                  me(n + 1, {Letter::psi(l)}, n) * me(n, {w_star}, n + 1);
    return lhs == rhs;
}

namespace {

Q diff(const Q& a, const Q& b)
{
    Q d = a - b;
    if (sgn(d) == 0) throw std::domain_error("vacuum_kernel: coincident points hit a pole");
    return d;
}

Q power(const Q& x, long e)
{
    if (sgn(x) == 0 && e < 0) throw std::domain_error("vacuum_kernel: zero point with a negative power");
    return qpow(x, e);
}

// prod_{i<i'} (x_i - x_i')
Q vandermonde(const std::vector<Q>& x)
{
    Q r = 1;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = i + 1; k < x.size(); ++k) r *= x[i] - x[k];
    return r;
}

}  // namespace

Q vacuum_kernel(KernelKind kind, int n, const std::vector<Q>& z, const std::vector<Q>& zeta)
{
    // prod_{j>j'} (y_j - y_j') = (-1)^{C(k,2)} prod_{j<j'} (y_j - y_j')
    auto reversed = [](const std::vector<Q>& y) {
        const std::size_t k = y.size();
        return (k * (k - 1) / 2) % 2 ? Q(-vandermonde(y)) : vandermonde(y);
    };
    Q r = 1;
    switch (kind) {
    case KernelKind::star_psi:
    case KernelKind::psi_star:
    case KernelKind::charged_up: {
        if (kind != KernelKind::charged_up && z.size() != zeta.size())
            throw std::invalid_argument("vacuum_kernel: need as many z as zeta");
        if (zeta.size() > z.size()) throw std::invalid_argument("vacuum_kernel: more zeta than z");
        r = vandermonde(z) * reversed(zeta);
        for (const auto& a : zeta)
            for (const auto& b : z) r /= kind == KernelKind::psi_star ? diff(b, a) : diff(a, b);
        for (const auto& b : z) r *= power(b, n);
        for (const auto& a : zeta) r *= power(a, 1 - n);
        return r;
    }
    case KernelKind::charged_down: {
        if (z.size() > zeta.size()) throw std::invalid_argument("vacuum_kernel: more z than zeta");
        r = vandermonde(zeta) * reversed(z);
        for (const auto& a : z)
            for (const auto& b : zeta) r /= diff(a, b);
        for (const auto& b : zeta) r *= power(b, 1 - n);
        for (const auto& a : z) r *= power(a, n);
        return r;
    }
    }
    return r;
}

Q vacuum_kernel_det(KernelKind kind, int n, const std::vector<Q>& z, const std::vector<Q>& zeta)
{
    if (kind != KernelKind::star_psi && kind != KernelKind::psi_star)
        throw std::invalid_argument("vacuum_kernel_det: only the neutral kernels have a determinant form");
    if (z.size() != zeta.size()) throw std::invalid_argument("vacuum_kernel: need as many z as zeta");
    const std::size_t m = z.size();
    QMatrix a = zero_matrix(m, m);
    Q pre = 1;
    for (std::size_t i = 0; i < m; ++i) {
        pre *= power(z[i], n) * power(zeta[i], -n);
        for (std::size_t j = 0; j < m; ++j)
            a[i][j] = zeta[i] / (kind == KernelKind::star_psi ? diff(zeta[i], z[j]) : diff(z[i], zeta[j]));
    }
    return pre * det(a);
}

}  // namespace tauforge
