#include "tauforge/det.hpp"

namespace tauforge {

QMatrix identity_matrix(std::size_t n)
{
    QMatrix m = zero_matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

QMatrix zero_matrix(std::size_t rows, std::size_t cols) { return QMatrix(rows, std::vector<Q>(cols, Q(0))); }

QMatrix operator*(const QMatrix& a, const QMatrix& b)
{
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    QMatrix c = zero_matrix(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != k) throw std::invalid_argument("matrix shape mismatch");
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    }
    return c;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b)
{
    QMatrix c = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) c[i][j] += b.at(i).at(j);
    return c;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) { return a + scaled(b, -1); }

QMatrix scaled(const QMatrix& a, const Q& s)
{
    QMatrix c = a;
    for (auto& row : c)
        for (auto& x : row) x *= s;
    return c;
}

QMatrix transpose(const QMatrix& a)
{
    if (a.empty()) return {};
    QMatrix t = zero_matrix(a[0].size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

Q det(QMatrix a)
{
    const std::size_t n = a.size();
    Q d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            const Q f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return d;
}

std::optional<QMatrix> inverse(const QMatrix& m)
{
    const std::size_t n = m.size();
    QMatrix a = m, inv = identity_matrix(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return std::nullopt;
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        const Q piv = a[c][c];
        for (std::size_t k = 0; k < n; ++k) {
            a[c][k] /= piv;
            inv[c][k] /= piv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const Q f = a[r][c];
            for (std::size_t k = 0; k < n; ++k) {
                a[r][k] -= f * a[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    return inv;
}

bool is_zero(const QMatrix& a)
{
    for (const auto& row : a)
        for (const auto& x : row)
            if (x != 0) return false;
    return true;
}

QMatrix exp_nilpotent(const QMatrix& a)
{
    const std::size_t n = a.size();
    QMatrix sum = identity_matrix(n), term = identity_matrix(n);
    for (std::size_t k = 1; k <= n + 1; ++k) {
        term = scaled(term * a, Q(1, static_cast<long>(k)));
        if (is_zero(term)) return sum;
        sum = sum + term;
    }
    throw std::domain_error("exp_nilpotent: matrix is not nilpotent");
}

Poly det_poly(const Matrix<Poly>& a, const TablePtr& table, const Cutoffs& cut)
{
    return det_expand<Poly>(a, Poly(table, cut), Poly::constant(table, cut, 1),
                            [](const Poly& p) { return p.is_zero(); });
}

}  // namespace tauforge
