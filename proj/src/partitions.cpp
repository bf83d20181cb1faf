#include "tauforge/partitions.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tauforge {

Partition::Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts))
{
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] <= 0) throw std::invalid_argument("partition parts must be positive");
        if (i > 0 && parts_[i] > parts_[i - 1])
            throw std::invalid_argument("partition parts must be weakly decreasing");
    }
}

Partition Partition::from_frobenius(const Frobenius& f)
{
    const int d = f.rank();
    if (static_cast<int>(f.betas.size()) != d) throw std::invalid_argument("Frobenius lists differ in length");
    for (int i = 1; i < d; ++i)
        if (f.alphas[i] >= f.alphas[i - 1] || f.betas[i] >= f.betas[i - 1])
            throw std::invalid_argument("Frobenius coordinates must be strictly decreasing");
    if (d > 0 && (f.alphas.back() < 0 || f.betas.back() < 0))
        throw std::invalid_argument("Frobenius coordinates must be non-negative");
    if (d == 0) return {};
    const int rows = f.betas[0] + 1;
    std::vector<int> parts(rows, 0);
    for (int i = 0; i < d; ++i) parts[i] = f.alphas[i] + i + 1;
    // rows below the diagonal block are determined by the column lengths
    for (int r = d; r < rows; ++r) {
        int len = 0;
        for (int j = 0; j < d; ++j)
            if (f.betas[j] + j + 1 > r) len = j + 1;
        parts[r] = len;
    }
    return Partition(parts);
}

Partition Partition::hook(int alpha, int beta)
{
    std::vector<int> p{alpha + 1};
    p.insert(p.end(), beta, 1);
    return Partition(p);
}

Partition Partition::rectangle(int rows, int cols)
{
    if (rows <= 0 || cols <= 0) return {};
    return Partition(std::vector<int>(rows, cols));
}

int Partition::size() const
{
    int s = 0;
    for (int p : parts_) s += p;
    return s;
}

Partition Partition::transpose() const
{
    if (parts_.empty()) return {};
    std::vector<int> t(parts_[0], 0);
    for (int p : parts_)
        for (int j = 0; j < p; ++j) ++t[j];
    return Partition(t);
}

int Partition::durfee() const
{
    int d = 0;
    while (d < length() && parts_[d] >= d + 1) ++d;
    return d;
}

Frobenius Partition::frobenius() const
{
    const Partition t = transpose();
    Frobenius f;
    for (int i = 1; i <= durfee(); ++i) {
        f.alphas.push_back((*this)[i] - i);
        f.betas.push_back(t[i] - i);
    }
    return f;
}

int Partition::b_exponent() const
{
    int b = 0;
    for (int beta : frobenius().betas) b += beta + 1;
    return b;
}

bool Partition::contains(const Partition& mu) const
{
    if (mu.length() > length()) return false;
    for (int i = 1; i <= mu.length(); ++i)
        if (mu[i] > (*this)[i]) return false;
    return true;
}

int Partition::hook_length(int i, int j) const
{
    if (!contains_box(i, j)) throw std::out_of_range("hook_length: box outside the diagram");
    return (*this)[i] + transpose()[j] - i - j + 1;
}

Z Partition::hook_product() const
{
    Z h = 1;
    const Partition t = transpose();
    for (int i = 1; i <= length(); ++i)
        for (int j = 1; j <= (*this)[i]; ++j) h *= (*this)[i] + t[j] - i - j + 1;
    return h;
}

Q Partition::pochhammer_content(const Q& u) const
{
    Q r = 1;
    for (int i = 1; i <= length(); ++i)
        for (int j = 1; j <= (*this)[i]; ++j) r *= u + (j - i);
    return r;
}

Q Partition::pochhammer_frobenius(const Q& u) const
{
    const Frobenius f = frobenius();
    Q r = 1;
    for (int i = 0; i < f.rank(); ++i) {
        Q term = rising(u, f.alphas[i] + 1) * rising(1 - u, f.betas[i]);
        if (f.betas[i] % 2) term = -term;
        r *= term;
    }
    return r;
}

long Partition::content_sum() const
{
    long c = 0;
    for (int i = 1; i <= length(); ++i)
        for (int j = 1; j <= (*this)[i]; ++j) c += j - i;
    return c;
}

std::string Partition::str() const
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
    os << ')';
    return os.str();
}

bool MayaSet::contains(long k) const
{
    const long l = shape_.length();
    if (k <= charge_ - l - 1) return true;
    for (int i = 1; i <= l; ++i)
        if (k == charge_ + shape_[i] - i) return true;
    return false;
}

std::vector<long> MayaSet::occupied_from(long floor) const
{
    std::vector<long> out;
    for (long i = 1;; ++i) {
        const long k = charge_ + shape_[static_cast<int>(std::min<long>(i, 1L << 30))] - i;
        if (k < floor) break;
        out.push_back(k);
    }
    return out;
}

MayaSet maya_set(int n, const Partition& lambda) { return MayaSet(n, lambda); }

std::pair<int, Partition> maya_canonicalize(const MayaDescription& d)
{
    std::set<long> parts(d.particles.begin(), d.particles.end());
    std::set<long> holes(d.holes.begin(), d.holes.end());
    if (parts.size() != d.particles.size() || holes.size() != d.holes.size())
        throw std::invalid_argument("maya_canonicalize: repeated mode");
    for (long p : parts)
        if (p < d.sea) throw std::invalid_argument("maya_canonicalize: particle below the sea level");
    for (long h : holes)
        if (h >= d.sea) throw std::invalid_argument("maya_canonicalize: hole above the sea level");
    const long n = d.sea + static_cast<long>(parts.size()) - static_cast<long>(holes.size());
    // occupied modes above the lowest hole, descending
    const long floor = holes.empty() ? d.sea : *holes.begin();
    std::vector<long> occ(parts.rbegin(), parts.rend());
    for (long k = d.sea - 1; k >= floor; --k)
        if (!holes.count(k)) occ.push_back(k);
    std::vector<int> lambda;
    for (std::size_t i = 0; i < occ.size(); ++i)
        lambda.push_back(static_cast<int>(occ[i] - n + static_cast<long>(i) + 1));
    return {static_cast<int>(n), Partition(lambda)};
}

MayaDescription maya_describe(const MayaSet& m)
{
    MayaDescription d;
    d.sea = m.charge();
    const Frobenius f = m.shape().frobenius();
    for (int a : f.alphas) d.particles.push_back(m.charge() + a);
    for (int b : f.betas) d.holes.push_back(m.charge() - b - 1);
    return d;
}

namespace {

void gen(int remaining, int max_part, int rows_left, std::vector<int>& cur, std::vector<Partition>& out)
{
    if (remaining == 0) {
        out.emplace_back(cur);
        return;
    }
    if (rows_left == 0) return;
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
        cur.push_back(p);
        gen(remaining - p, p, rows_left - 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<Partition> partitions_of(int weight, std::optional<int> max_rows, std::optional<int> max_cols)
{
    std::vector<Partition> out;
    if (weight < 0) return out;
    std::vector<int> cur;
    gen(weight, max_cols.value_or(weight), max_rows.value_or(weight), cur, out);
    return out;
}

std::vector<Partition> enumerate_partitions(int max_weight, std::optional<int> max_rows,
                                            std::optional<int> max_cols)
{
    if (max_weight < 0) throw std::invalid_argument("enumerate_partitions: negative weight");
    std::vector<Partition> out;
    for (int w = 0; w <= max_weight; ++w) {
        auto layer = partitions_of(w, max_rows, max_cols);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

}  // namespace tauforge
