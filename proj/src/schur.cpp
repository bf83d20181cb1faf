#include "tauforge/schur.hpp"

#include "tauforge/det.hpp"

namespace tauforge {

SchurContext::SchurContext(TablePtr table, Cutoffs cut, std::string prefix, int sign)
    : table_(std::move(table)), cut_(std::move(cut)), prefix_(std::move(prefix)), sign_(sign)
{
}

Poly SchurContext::h(int k) const
{
    if (k < 0) return Poly(table_, cut_);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = h_cache_.find(k);
    if (it != h_cache_.end()) return it->second;
    Poly p = h_poly(k, sign_, table_, cut_, prefix_);
    h_cache_.emplace(k, p);
    return p;
}

Poly SchurContext::e(int k) const
{
    if (k < 0) return Poly(table_, cut_);
    Poly p = h_poly(k, -sign_, table_, cut_, prefix_);
    return k % 2 ? -p : p;
}

Poly SchurContext::jacobi_trudi(const Partition& l) const
{
    const int n = l.length();
    Matrix<Poly> m(n, std::vector<Poly>(n));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) m[i - 1][j - 1] = h(l[i] - i + j);
    return det_poly(m, table_, cut_);
}

Poly SchurContext::dual_jacobi_trudi(const Partition& l) const
{
    const Partition t = l.transpose();
    const int n = t.length();
    Matrix<Poly> m(n, std::vector<Poly>(n));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) m[i - 1][j - 1] = e(t[i] - i + j);
    return det_poly(m, table_, cut_);
}

Poly SchurContext::hook(int alpha, int beta, int form) const
{
    // h_k(-t) in this context is e_k up to sign
    auto hm = [&](int k) { return k % 2 ? -e(k) : e(k); };
    Poly sum(table_, cut_);
    if (form == 0) {
        for (int m = 0; m <= alpha; ++m) sum += h(alpha - m) * hm(beta + m + 1);
        return (beta + 1) % 2 ? -sum : sum;
    }
    for (int m = 0; m <= beta; ++m) sum += hm(beta - m) * h(alpha + m + 1);
    return beta % 2 ? -sum : sum;
}

Poly SchurContext::giambelli(const Partition& l) const
{
    const Frobenius f = l.frobenius();
    const int d = f.rank();
    Matrix<Poly> m(d, std::vector<Poly>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m[i][j] = hook(f.alphas[i], f.betas[j], 0);
    return det_poly(m, table_, cut_);
}

Poly SchurContext::skew(const Partition& l, const Partition& mu) const
{
    if (!l.contains(mu)) return Poly(table_, cut_);
    const int n = l.length();
    Matrix<Poly> m(n, std::vector<Poly>(n));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) m[i - 1][j - 1] = h(l[i] - mu[j] - i + j);
    return det_poly(m, table_, cut_);
}

Poly SchurContext::schur(const Partition& l) const
{
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = s_cache_.find(l);
        if (it != s_cache_.end()) return it->second;
    }
    Poly p = jacobi_trudi(l);
    std::lock_guard<std::mutex> lock(mu_);
    s_cache_.emplace(l, p);
    return p;
}

SchurContext standard_context(int D, const std::string& prefix)
{
    auto T = VarTable::Builder().times(prefix, std::max(D, 1), 0).build();
    return SchurContext(T, Cutoffs::uniform(*T, D), prefix);
}

Q schur_content_eval(const Partition& l, const Q& u, const Q& w)
{
    return qpow(w, -l.size()) * l.pochhammer_content(u) / Q(l.hook_product());
}

Q schur_content_frobenius(const Partition& l, const Q& u, const Q& w)
{
    const Frobenius f = l.frobenius();
    const int d = f.rank();
    Q r = 1;
    for (int i = 0; i < d; ++i) {
        Q term = rising(u, f.alphas[i] + 1) * rising(1 - u, f.betas[i]) /
                 Q(factorial(f.alphas[i]) * factorial(f.betas[i]));
        if (f.betas[i] % 2) term = -term;
        r *= term;
    }
    Q num = 1, den = qpow(w, l.size());
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) num *= Q((f.alphas[j] - f.alphas[k]) * (f.betas[j] - f.betas[k]));
    for (int k = 0; k < d; ++k)
        for (int m = 0; m < d; ++m) den *= f.alphas[k] + f.betas[m] + 1;
    return r * num / den;
}

std::map<std::string, Q> tilde_scales(const std::string& prefix, int K)
{
    std::map<std::string, Q> s;
    for (int k = 1; k <= K; ++k) s[time_name(prefix, k)] = Q(1, k);
    return s;
}

DiffOp schur_diffop(const SchurContext& ctx, const Partition& mu) { return as_diffop(ctx.schur(mu), {}); }

bool cauchy_littlewood_check(int D)
{
    auto T = VarTable::Builder().times("t", std::max(D, 1), 0).times("s", std::max(D, 1), 1).build();
    auto cut = Cutoffs::uniform(*T, D);
    SchurContext a(T, cut, "t"), b(T, cut, "s");
    Poly lhs(T, cut);
    for (const auto& l : enumerate_partitions(D)) lhs += a.schur(l) * b.schur(l);
    Poly arg(T, cut);
    for (int k = 1; k <= D; ++k)
        arg += Poly::variable(T, cut, time_name("t", k), k) * Poly::variable(T, cut, time_name("s", k));
    return lhs == exp_series(arg);
}

Q schur_pairing(const Partition& l, const Partition& mu)
{
    const int D = std::max(l.size(), mu.size());
    auto ctx = standard_context(D);
    Poly r = apply_diffop(schur_diffop(ctx, l), ctx.schur(mu), tilde_scales("t", std::max(D, 1)));
    return r.constant_term();
}

Poly skew_via_derivatives(const SchurContext& ctx, const Partition& l, const Partition& mu)
{
    Poly r = apply_diffop(schur_diffop(ctx, mu), ctx.schur(l), tilde_scales(ctx.prefix(), family_size(*ctx.table(), ctx.prefix())));
    // the derivatives lower the nominal cutoff; the result is exact because s_l is a polynomial
    return embed(r, ctx.table(), ctx.cutoffs());
}

}  // namespace tauforge
