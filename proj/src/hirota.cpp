#include "tauforge/hirota.hpp"

#include <algorithm>
#include <stdexcept>

namespace tauforge {

int exact_weight(const Poly& p)
{
    int w = p.cutoffs().total;
    for (int g : p.cutoffs().group) w = std::min(w, g);
    return w;
}

namespace {

// A single-group table holding every input variable plus the auxiliary ones, cut at the
// total weight through which all inputs are exact.
struct Frame {
    TablePtr table;
    Cutoffs cut;
    int weight = 0;

    Poly zero() const { return Poly(table, cut); }
    Poly var(const std::string& name) const { return Poly::variable(table, cut, name); }
    Poly take(const Poly& p) const { return embed(p, table, cut); }
};

Frame make_frame(const std::vector<const Poly*>& inputs, const std::vector<std::pair<std::string, int>>& families,
                 const std::vector<std::string>& formal)
{
    VarTable::Builder b;
    std::map<std::string, int> seen;
    int weight = kUnbounded;
    for (const Poly* p : inputs) {
        const VarTable& t = *p->table();
        for (std::size_t i = 0; i < t.size(); ++i)
            if (seen.emplace(t.var(i).name, t.var(i).weight).second) b.add(t.var(i).name, 0, t.var(i).weight);
        weight = std::min(weight, exact_weight(*p));
    }
    if (weight >= kUnbounded) throw std::invalid_argument("bilinear checks need truncated series");
    auto fresh = [&](const std::string& name, int w) {
        if (!seen.emplace(name, w).second) throw std::invalid_argument("variable name clash: " + name);
    };
    for (const auto& [prefix, count] : families) {
        for (int k = 1; k <= count; ++k) fresh(time_name(prefix, k), k);
        b.times(prefix, count, 0);
    }
    for (const auto& name : formal) {
        fresh(name, 1);
        b.param(name, 0);
    }
    Frame f;
    f.table = b.build();
    f.cut = Cutoffs::total_only(*f.table, weight);
    f.weight = weight;
    return f;
}

// Same terms, declared exact through total weight w.  Used when an exactly known
// homogeneous factor of weight j multiplies something exact through w - j.
Poly lift(const Poly& p, int w)
{
    Poly r(p.table(), Cutoffs::total_only(*p.table(), w));
    for (const auto& [m, q] : p.terms()) r.add_term(m, q);
    return r;
}

HirotaReport report(const std::string& name, const Poly& r)
{
    HirotaReport out;
    out.check = name;
    out.verified_weight = exact_weight(r);
    out.holds = r.is_zero();
    if (!out.holds) {
        auto it = std::min_element(r.terms().begin(), r.terms().end(), [&](const auto& x, const auto& y) {
            return r.total_weight(x.first) < r.total_weight(y.first);
        });
        out.counterexample = Poly::monomial(r.table(), r.cutoffs(), it->first, it->second).str();
    }
    return out;
}

Poly shifted(Poly p, const std::string& prefix, std::initializer_list<const char*> params)
{
    for (const char* z : params) p = bracket_shift(p, -1, prefix, z);
    return p;
}

}  // namespace

HirotaReport mkp_residue_check(const Poly& tau_n, const Poly& tau_np, int m, const std::string& prefix)
{
    if (m < 0) throw std::invalid_argument("mkp_residue_check: need n >= n'");
    const int D = family_size(*tau_n.table(), prefix);
    const Frame f = make_frame({&tau_n, &tau_np}, {{"_a", D}}, {});
    const Poly F = family_shift(f.take(tau_n), prefix, -1, "_a") * family_shift(f.take(tau_np), prefix, 1, "_a");
    const int target = f.weight - m - 1;
    const Cutoffs out = Cutoffs::total_only(*f.table, target);
    std::map<std::string, Q> scales;
    for (int k = 1; k <= D; ++k) scales[time_name("_a", k)] = Q(1, k);
    // h_j(-2a) = sum_i h_i(-a) h_{j-i}(-a)
    std::vector<Poly> hm;
    for (int j = 0; j <= std::max(target, 0); ++j) hm.push_back(h_poly(j, -1, f.table, out, "_a"));
    Poly sum(f.table, out);
    for (int j = 0; j <= target; ++j) {
        Poly h2(f.table, out);
        for (int i = 0; i <= j; ++i) h2 += hm[i] * hm[j - i];
        const DiffOp op = as_diffop(h_poly(j + m + 1, 1, f.table, f.cut, "_a"), {});
        sum += h2 * lift(apply_diffop(op, F, scales), target);
    }
    return report(m == 0 ? "kp_residue" : "mkp_residue", sum);
}

HirotaReport kp_residue_check(const Poly& tau, const std::string& prefix)
{
    return mkp_residue_check(tau, tau, 0, prefix);
}

HirotaReport kp_equation_check(const Poly& tau, const std::string& prefix)
{
    const Frame f = make_frame({&tau}, {}, {});
    const Poly T = f.take(tau);
    const std::string t1 = time_name(prefix, 1), t2 = time_name(prefix, 2), t3 = time_name(prefix, 3);
    const DiffOp op{{{Q(1), {{t1, 4}}}, {Q(3), {{t2, 2}}}, {Q(-4), {{t1, 1}, {t3, 1}}}}};
    return report("kp_equation", hirota_bilinear(op, T, T));
}

HirotaReport mkp_equation_check(const Poly& tau_next, const Poly& tau_n)
{
    const Frame f = make_frame({&tau_next, &tau_n}, {}, {});
    const DiffOp op{{{Q(1), {{"t1", 2}}}, {Q(-1), {{"t2", 1}}}}};
    return report("mkp_equation", hirota_bilinear(op, f.take(tau_next), f.take(tau_n)));
}

HirotaReport toda_equation_check(const Poly& tau_prev, const Poly& tau_n, const Poly& tau_next)
{
    const Frame f = make_frame({&tau_prev, &tau_n, &tau_next}, {}, {});
    const Poly T = f.take(tau_n);
    const DiffOp op{{{Q(1, 2), {{"t1", 1}, {"tm1", 1}}}}};
    return report("toda_equation", hirota_bilinear(op, T, T) + f.take(tau_next) * f.take(tau_prev));
}

HirotaReport three_term_check(ThreeTerm v, const TauSeries& s, int n)
{
    switch (v) {
    case ThreeTerm::bi2: {
        const Poly& tau = s.at(n);
        const Frame f = make_frame({&tau}, {}, {"_w1", "_w2", "_w3"});
        const Poly T = f.take(tau);
        const Poly w1 = f.var("_w1"), w2 = f.var("_w2"), w3 = f.var("_w3");
        Poly r = w1 * (w3 - w2) * shifted(T, "t", {"_w1"}) * shifted(T, "t", {"_w2", "_w3"});
        r += w2 * (w1 - w3) * shifted(T, "t", {"_w2"}) * shifted(T, "t", {"_w3", "_w1"});
        r += w3 * (w2 - w1) * shifted(T, "t", {"_w3"}) * shifted(T, "t", {"_w1", "_w2"});
        return report("three_term_bi2", r);
    }
    case ThreeTerm::bi201: {
        const Poly& tau = s.at(n);
        const Frame f = make_frame({&tau}, {}, {"_w0", "_w1", "_w2", "_w3"});
        const Poly T = f.take(tau);
        const Poly w0 = f.var("_w0"), w1 = f.var("_w1"), w2 = f.var("_w2"), w3 = f.var("_w3");
        Poly r = (w1 - w0) * (w3 - w2) * shifted(T, "t", {"_w0", "_w1"}) * shifted(T, "t", {"_w2", "_w3"});
        r += (w2 - w0) * (w1 - w3) * shifted(T, "t", {"_w0", "_w2"}) * shifted(T, "t", {"_w3", "_w1"});
        r += (w3 - w0) * (w2 - w1) * shifted(T, "t", {"_w0", "_w3"}) * shifted(T, "t", {"_w1", "_w2"});
        return report("three_term_bi201", r);
    }
    case ThreeTerm::bi3: {
        const Poly &tau = s.at(n), &next = s.at(n + 1);
        const Frame f = make_frame({&tau, &next}, {}, {"_w1", "_w2"});
        const Poly T = f.take(tau), N = f.take(next);
        const Poly w1 = f.var("_w1"), w2 = f.var("_w2");
        Poly r = w1 * shifted(N, "t", {"_w2"}) * shifted(T, "t", {"_w1"});
        r -= w2 * shifted(N, "t", {"_w1"}) * shifted(T, "t", {"_w2"});
        r += (w2 - w1) * N * shifted(T, "t", {"_w1", "_w2"});
        return report("three_term_bi3", r);
    }
    case ThreeTerm::bi4: {
        if (s.kind != TauKind::dtl) throw std::invalid_argument("bi4 needs a 2DTL series");
        const Poly &prev = s.at(n - 1), &tau = s.at(n), &next = s.at(n + 1);
        const Frame f = make_frame({&prev, &tau, &next}, {}, {"_w", "_b"});
        const Poly T = f.take(tau);
        const Poly Ta = shifted(T, "t", {"_w"}), Tb = shifted(T, "tm", {"_b"});
        Poly r = Ta * Tb - T * shifted(Ta, "tm", {"_b"});
        r -= f.var("_w") * f.var("_b") * shifted(f.take(next), "tm", {"_b"}) * shifted(f.take(prev), "t", {"_w"});
        return report("three_term_bi4", r);
    }
    }
    throw std::invalid_argument("unknown three-term variant");
}

HirotaReport scalar_kp_check(const Poly& tau)
{
    const Frame f = make_frame({&tau}, {}, {});
    const Poly T = f.take(tau);
    const Q c = T.constant_term();
    if (c == 0) throw std::domain_error("scalar_kp_check: tau(0) vanishes");
    const Poly u = log_series(T * Q(1 / c)).derivative("t1").derivative("t1");
    auto d = [](const Poly& p, const char* v) { return p.derivative(v); };
    const Poly u1 = d(u, "t1");
    const Poly rhs = d(Q(4) * d(u, "t3") - Q(12) * u * u1 - d(d(u1, "t1"), "t1"), "t1");
    return report("scalar_kp", Q(3) * d(d(u, "t2"), "t2") - rhs);
}

}  // namespace tauforge
