#pragma once

#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "tauforge/polyring.hpp"
#include "tauforge/rational.hpp"

namespace tauforge {

template <class T>
using Matrix = std::vector<std::vector<T>>;

using QMatrix = Matrix<Q>;

QMatrix identity_matrix(std::size_t n);
QMatrix zero_matrix(std::size_t rows, std::size_t cols);
QMatrix operator*(const QMatrix& a, const QMatrix& b);
QMatrix operator+(const QMatrix& a, const QMatrix& b);
QMatrix operator-(const QMatrix& a, const QMatrix& b);
QMatrix scaled(const QMatrix& a, const Q& s);
QMatrix transpose(const QMatrix& a);
Q det(QMatrix a);
std::optional<QMatrix> inverse(const QMatrix& a);
// exp of a nilpotent matrix; throws if the series does not terminate by n steps.
QMatrix exp_nilpotent(const QMatrix& a);
bool is_zero(const QMatrix& a);

// Division-free determinant by expansion over row prefixes and column subsets.
// Zero entries are skipped, so banded and Hessenberg shapes stay cheap.
template <class R, class IsZero>
R det_expand(const Matrix<R>& a, const R& zero, const R& one, IsZero is_zero_fn)
{
    const std::size_t n = a.size();
    if (n == 0) return one;
    if (n > 30) throw std::invalid_argument("det_expand: matrix too large");
    for (const auto& row : a)
        if (row.size() != n) throw std::invalid_argument("det_expand: matrix not square");
    std::unordered_map<unsigned, R> cur{{0u, one}};
    for (std::size_t i = 0; i < n; ++i) {
        std::unordered_map<unsigned, R> next;
        for (const auto& [mask, val] : cur) {
            for (std::size_t j = 0; j < n; ++j) {
                if (mask & (1u << j) || is_zero_fn(a[i][j])) continue;
                // sign: number of already chosen columns greater than j
                int above = __builtin_popcount(mask >> (j + 1));
                R term = val * a[i][j];
                if (above % 2) term = -term;
                auto it = next.find(mask | (1u << j));
                if (it == next.end())
                    next.emplace(mask | (1u << j), std::move(term));
                else
                    it->second = it->second + term;
            }
        }
        cur = std::move(next);
        if (cur.empty()) return zero;
    }
    auto it = cur.find((n >= 32) ? ~0u : ((1u << n) - 1));
    return it == cur.end() ? zero : it->second;
}

Poly det_poly(const Matrix<Poly>& a, const TablePtr& table, const Cutoffs& cut);

}  // namespace tauforge
