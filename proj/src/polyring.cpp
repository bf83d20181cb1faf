#include "tauforge/polyring.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace tauforge {

VarTable::Builder& VarTable::Builder::add(const std::string& name, int group, int weight)
{
    if (weight < 1) throw std::invalid_argument("variable weights must be positive: " + name);
    if (group < 0) throw std::invalid_argument("negative grading group: " + name);
    for (const auto& v : vars_)
        if (v.name == name) throw std::invalid_argument("duplicate variable: " + name);
    vars_.push_back({name, group, weight});
    return *this;
}

VarTable::Builder& VarTable::Builder::times(const std::string& prefix, int count, int group)
{
    for (int k = 1; k <= count; ++k) add(time_name(prefix, k), group, k);
    return *this;
}

TablePtr VarTable::Builder::build() const
{
    auto t = std::make_shared<VarTable>();
    t->vars_ = vars_;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        t->lookup_[vars_[i].name] = i;
        t->groups_ = std::max(t->groups_, vars_[i].group + 1);
    }
    return t;
}

std::optional<std::size_t> VarTable::find(const std::string& name) const
{
    auto it = lookup_.find(name);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

std::size_t VarTable::index(const std::string& name) const
{
    auto i = find(name);
    if (!i) throw std::invalid_argument("unknown variable: " + name);
    return *i;
}

std::string time_name(const std::string& prefix, int k) { return prefix + std::to_string(k); }

Cutoffs Cutoffs::uniform(const VarTable& t, int per_group, int total)
{
    Cutoffs c;
    c.group.assign(t.groups(), per_group);
    c.total = total;
    return c;
}

Cutoffs Cutoffs::total_only(const VarTable& t, int total) { return uniform(t, kUnbounded, total); }

Cutoffs Cutoffs::meet(const Cutoffs& o) const
{
    if (group.size() != o.group.size()) throw std::invalid_argument("cutoff arity mismatch");
    Cutoffs c = *this;
    for (std::size_t g = 0; g < group.size(); ++g) c.group[g] = std::min(group[g], o.group[g]);
    c.total = std::min(total, o.total);
    return c;
}

Cutoffs Cutoffs::lowered(int grp, int by) const
{
    Cutoffs c = *this;
    if (c.group.at(grp) < kUnbounded) c.group[grp] -= by;
    if (c.total < kUnbounded) c.total -= by;
    return c;
}

bool Cutoffs::bounded() const
{
    if (total < kUnbounded) return true;
    for (int g : group)
        if (g >= kUnbounded) return false;
    return !group.empty();
}

Poly::Poly(TablePtr table, Cutoffs cut) : table_(std::move(table)), cut_(std::move(cut))
{
    if (!table_) throw std::invalid_argument("polynomial without a variable table");
    if (static_cast<int>(cut_.group.size()) != table_->groups()) throw std::invalid_argument("cutoff arity mismatch");
}

Poly Poly::constant(TablePtr table, Cutoffs cut, const Q& c)
{
    Poly p(std::move(table), std::move(cut));
    p.insert(Mono(p.table_->size(), 0), c);
    return p;
}

Poly Poly::variable(TablePtr table, Cutoffs cut, const std::string& name, const Q& coeff)
{
    Poly p(std::move(table), std::move(cut));
    Mono m(p.table_->size(), 0);
    m[p.table_->index(name)] = 1;
    p.insert(m, coeff);
    return p;
}

Poly Poly::monomial(TablePtr table, Cutoffs cut, const Mono& m, const Q& coeff)
{
    Poly p(std::move(table), std::move(cut));
    if (m.size() != p.table_->size()) throw std::invalid_argument("monomial arity mismatch");
    p.insert(m, coeff);
    return p;
}

int Poly::group_weight(const Mono& m, int grp) const
{
    int w = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] && table_->var(i).group == grp) w += m[i] * table_->var(i).weight;
    return w;
}

int Poly::total_weight(const Mono& m) const
{
    int w = 0;
    for (std::size_t i = 0; i < m.size(); ++i) w += m[i] * table_->var(i).weight;
    return w;
}

bool Poly::fits(const Mono& m, const Cutoffs& c) const
{
    if (c.total < 0) return false;
    std::vector<int> gw(c.group.size(), 0);
    int tw = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        const auto& v = table_->var(i);
        gw[v.group] += m[i] * v.weight;
        tw += m[i] * v.weight;
    }
    if (tw > c.total) return false;
    for (std::size_t g = 0; g < gw.size(); ++g)
        if (gw[g] > c.group[g] || c.group[g] < 0) return false;
    return true;
}

void Poly::insert(const Mono& m, const Q& c)
{
    if (c == 0 || !fits(m, cut_)) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

void Poly::add_term(const Mono& m, const Q& c)
{
    if (m.size() != table_->size()) throw std::invalid_argument("monomial arity mismatch");
    insert(m, c);
}

Q Poly::constant_term() const { return coeff(Mono(table_->size(), 0)); }

Q Poly::coeff(const Mono& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? Q(0) : it->second;
}

Mono Poly::mono(const std::map<std::string, int>& exps) const
{
    Mono m(table_->size(), 0);
    for (const auto& [name, e] : exps) {
        if (e < 0 || e > 255) throw std::invalid_argument("exponent out of range");
        m[table_->index(name)] = static_cast<unsigned char>(e);
    }
    return m;
}

Q Poly::coeff(const std::map<std::string, int>& exps) const { return coeff(mono(exps)); }

int Poly::max_total_weight() const
{
    int w = -1;
    for (const auto& [m, c] : terms_) w = std::max(w, total_weight(m));
    return w;
}

Poly Poly::with_cutoffs(const Cutoffs& c) const
{
    Poly r(table_, cut_.meet(c));
    for (const auto& [m, q] : terms_) r.insert(m, q);
    return r;
}

Poly Poly::homogeneous_part(int total) const
{
    Poly r(table_, cut_);
    for (const auto& [m, q] : terms_)
        if (total_weight(m) == total) r.terms_.emplace(m, q);
    return r;
}

void require_same_table(const Poly& a, const Poly& b)
{
    if (a.table() != b.table() && !(a.table() && b.table() && a.table()->size() == b.table()->size()))
        throw std::invalid_argument("polynomials over different variable tables");
    if (a.table() != b.table())
        for (std::size_t i = 0; i < a.table()->size(); ++i)
            if (a.table()->var(i).name != b.table()->var(i).name || a.table()->var(i).group != b.table()->var(i).group ||
                a.table()->var(i).weight != b.table()->var(i).weight)
                throw std::invalid_argument("polynomials over different variable tables");
}

Poly& Poly::operator+=(const Poly& o)
{
    if (!table_) return *this = o;
    if (!o.table_) return *this;
    require_same_table(*this, o);
    const Cutoffs c = cut_.meet(o.cut_);
    if (!(c == cut_)) *this = with_cutoffs(c);
    for (const auto& [m, q] : o.terms_) insert(m, q);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly& Poly::operator*=(const Q& s)
{
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, q] : terms_) q *= s;
    return *this;
}

Poly Poly::operator-() const
{
    Poly r = *this;
    for (auto& [m, q] : r.terms_) q = -q;
    return r;
}

namespace {

struct Flat {
    const Mono* m;
    const Q* c;
    std::vector<int> gw;
    int tw;
};

std::vector<Flat> flatten(const Poly& p)
{
    std::vector<Flat> out;
    out.reserve(p.term_count());
    const auto& t = *p.table();
    for (const auto& [m, c] : p.terms()) {
        Flat f{&m, &c, std::vector<int>(t.groups(), 0), 0};
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!m[i]) continue;
            f.gw[t.var(i).group] += m[i] * t.var(i).weight;
            f.tw += m[i] * t.var(i).weight;
        }
        out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end(), [](const Flat& a, const Flat& b) { return a.tw < b.tw; });
    return out;
}

}  // namespace

Poly operator*(const Poly& a, const Poly& b)
{
    require_same_table(a, b);
    Poly r(a.table(), a.cutoffs().meet(b.cutoffs()));
    if (a.is_zero() || b.is_zero()) return r;
    const auto fa = flatten(a), fb = flatten(b);
    const Cutoffs& c = r.cutoffs();
    const std::size_t n = a.table()->size();
    Mono m(n);
    for (const auto& x : fa) {
        if (x.tw > c.total) break;
        for (const auto& y : fb) {
            if (x.tw + y.tw > c.total) break;
            bool ok = true;
            for (std::size_t g = 0; g < c.group.size() && ok; ++g) ok = x.gw[g] + y.gw[g] <= c.group[g];
            if (!ok) continue;
            for (std::size_t i = 0; i < n; ++i) {
                const int e = (*x.m)[i] + (*y.m)[i];
                if (e > 255) throw std::overflow_error("exponent overflow");
                m[i] = static_cast<unsigned char>(e);
            }
            r.add_term(m, (*x.c) * (*y.c));
        }
    }
    return r;
}

Poly Poly::pow(int e) const
{
    if (e < 0) throw std::invalid_argument("negative polynomial power");
    Poly r = constant(table_, cut_, 1), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

bool Poly::equals_mod(const Poly& o) const
{
    require_same_table(*this, o);
    const Cutoffs c = cut_.meet(o.cut_);
    return with_cutoffs(c).terms_ == o.with_cutoffs(c).terms_;
}

Poly Poly::derivative(std::size_t var) const
{
    const auto& v = table_->var(var);
    Poly r(table_, cut_.lowered(v.group, v.weight));
    for (const auto& [m, q] : terms_) {
        if (!m[var]) continue;
        Mono d = m;
        --d[var];
        r.insert(d, q * m[var]);
    }
    return r;
}

Poly Poly::derivative(const std::string& name) const { return derivative(table_->index(name)); }

Q Poly::evaluate(const std::map<std::string, Q>& assignment) const
{
    std::vector<const Q*> vals(table_->size(), nullptr);
    for (std::size_t i = 0; i < table_->size(); ++i) {
        auto it = assignment.find(table_->var(i).name);
        if (it != assignment.end()) vals[i] = &it->second;
    }
    Q sum = 0;
    for (const auto& [m, q] : terms_) {
        Q term = q;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!m[i]) continue;
            if (!vals[i]) throw std::invalid_argument("evaluate: missing value for " + table_->var(i).name);
            term *= qpow(*vals[i], m[i]);
        }
        sum += term;
    }
    return sum;
}

Poly Poly::partial_evaluate(const std::map<std::string, Q>& assignment) const
{
    Poly r(table_, cut_);
    for (const auto& [m, q] : terms_) {
        Mono k = m;
        Q term = q;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!m[i]) continue;
            auto it = assignment.find(table_->var(i).name);
            if (it == assignment.end()) continue;
            term *= qpow(it->second, m[i]);
            k[i] = 0;
        }
        r.insert(k, term);
    }
    return r;
}

std::string Poly::str() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, q] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << q.get_str();
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i]) os << '*' << table_->var(i).name << (m[i] > 1 ? "^" + std::to_string(m[i]) : "");
    }
    return os.str();
}

namespace {

// Guards series that terminate only because every term has positive weight
// in some bounded grading.
void require_nilpotent(const Poly& x)
{
    const auto& c = x.cutoffs();
    if (c.total < kUnbounded) return;
    for (const auto& [m, q] : x.terms()) {
        bool ok = false;
        for (std::size_t i = 0; i < m.size() && !ok; ++i)
            ok = m[i] && c.group[x.table()->var(i).group] < kUnbounded;
        if (!ok) throw std::domain_error("series does not terminate under the given cutoffs");
    }
}

}  // namespace

Poly exp_series(const Poly& p)
{
    if (p.constant_term() != 0) throw std::domain_error("exp_series: nonzero constant term is not rational");
    require_nilpotent(p);
    Poly sum = Poly::constant(p.table(), p.cutoffs(), 1);
    Poly term = sum;
    for (int k = 1; !term.is_zero(); ++k) {
        term = term * p;
        term *= Q(1, k);
        sum += term;
    }
    return sum;
}

Poly log_series(const Poly& p)
{
    if (p.constant_term() != 1) throw std::domain_error("log_series: constant term must be 1");
    Poly x = p - Poly::constant(p.table(), p.cutoffs(), 1);
    require_nilpotent(x);
    Poly sum(p.table(), p.cutoffs());
    Poly power = x;
    for (int k = 1; !power.is_zero(); ++k) {
        sum += power * Q(k % 2 ? 1 : -1, k);
        power = power * x;
    }
    return sum;
}

Poly inverse_series(const Poly& p)
{
    const Q c = p.constant_term();
    if (c == 0) throw std::domain_error("inverse_series: vanishing constant term");
    Poly x = (p - Poly::constant(p.table(), p.cutoffs(), c)) * Q(-1 / c);
    require_nilpotent(x);
    Poly sum = Poly::constant(p.table(), p.cutoffs(), 1);
    Poly power = x;
    while (!power.is_zero()) {
        sum += power;
        power = power * x;
    }
    return sum * Q(1 / c);
}

Poly embed(const Poly& p, TablePtr table, const Cutoffs& cut)
{
    Poly r(table, cut);
    std::vector<std::size_t> map(p.table()->size());
    for (std::size_t i = 0; i < map.size(); ++i) map[i] = table->index(p.table()->var(i).name);
    for (const auto& [m, q] : p.terms()) {
        Mono k(table->size(), 0);
        for (std::size_t i = 0; i < m.size(); ++i) k[map[i]] = m[i];
        r.add_term(k, q);
    }
    return r;
}

Poly substitute(const Poly& p, const std::map<std::string, Poly>& images, TablePtr table, const Cutoffs& cut)
{
    const std::size_t n = p.table()->size();
    std::vector<const Poly*> img(n, nullptr);
    std::vector<std::size_t> direct(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = images.find(p.table()->var(i).name);
        if (it != images.end()) {
            if (it->second.table() != table) throw std::invalid_argument("substitute: image over a different table");
            img[i] = &it->second;
        } else {
            direct[i] = table->index(p.table()->var(i).name);
        }
    }
    // powers of each image, computed lazily
    std::vector<std::vector<Poly>> powers(n);
    auto power = [&](std::size_t i, int e) -> const Poly& {
        auto& v = powers[i];
        if (v.empty()) v.push_back(Poly::constant(table, cut, 1));
        while (static_cast<int>(v.size()) <= e) v.push_back((v.back() * img[i]->with_cutoffs(cut)));
        return v[e];
    };
    Poly r(table, cut);
    for (const auto& [m, q] : p.terms()) {
        Mono base(table->size(), 0);
        Poly term = Poly::constant(table, cut, q);
        for (std::size_t i = 0; i < n; ++i) {
            if (!m[i]) continue;
            if (img[i])
                term = term * power(i, m[i]);
            else
                base[direct[i]] = static_cast<unsigned char>(base[direct[i]] + m[i]);
        }
        if (term.is_zero()) continue;
        term = term * Poly::monomial(table, cut, base, 1);
        r += term;
    }
    return r;
}

int family_size(const VarTable& t, const std::string& prefix)
{
    int k = 0;
    while (t.has(time_name(prefix, k + 1))) ++k;
    return k;
}

Poly h_poly(int k, int sign, TablePtr table, const Cutoffs& cut, const std::string& prefix)
{
    if (k < 0) return Poly(table, cut);
    if (k == 0) return Poly::constant(table, cut, 1);
    // h_k = (1/k) sum_{j=1..k} j t_j h_{k-j}
    std::vector<Poly> h{Poly::constant(table, cut, 1)};
    const int K = family_size(*table, prefix);
    for (int m = 1; m <= k; ++m) {
        Poly acc(table, cut);
        for (int j = 1; j <= std::min(m, K); ++j)
            acc += Poly::variable(table, cut, time_name(prefix, j), Q(j * sign)) * h[m - j];
        acc *= Q(1, m);
        h.push_back(acc);
    }
    return h[k];
}

Poly e_poly(int k, TablePtr table, const Cutoffs& cut, const std::string& prefix)
{
    Poly h = h_poly(k, -1, std::move(table), cut, prefix);
    return k % 2 ? -h : h;
}

Poly xi_series(TablePtr table, const Cutoffs& cut, const std::string& prefix, const std::string& param)
{
    Poly r(table, cut);
    const int K = family_size(*table, prefix);
    const Poly z = Poly::variable(table, cut, param);
    Poly zk = z;
    for (int k = 1; k <= K; ++k) {
        r += Poly::variable(table, cut, time_name(prefix, k)) * zk;
        zk = zk * z;
    }
    return r;
}

Poly bracket_shift(const Poly& p, int sign, const std::string& prefix, const std::string& param)
{
    const auto& table = p.table();
    const Cutoffs& cut = p.cutoffs();
    std::map<std::string, Poly> img;
    const int K = family_size(*table, prefix);
    const Poly z = Poly::variable(table, cut, param);
    Poly zk = z;
    for (int k = 1; k <= K; ++k) {
        img.emplace(time_name(prefix, k), Poly::variable(table, cut, time_name(prefix, k)) + zk * Q(sign, k));
        zk = zk * z;
    }
    return substitute(p, img, table, cut);
}

Poly bracket_shift_value(const Poly& p, int sign, const std::string& prefix, const Q& value)
{
    const auto& table = p.table();
    const Cutoffs& cut = p.cutoffs();
    std::map<std::string, Poly> img;
    const int K = family_size(*table, prefix);
    for (int k = 1; k <= K; ++k)
        img.emplace(time_name(prefix, k), Poly::variable(table, cut, time_name(prefix, k)) +
                                              Poly::constant(table, cut, qpow(value, k) * Q(sign, k)));
    return substitute(p, img, table, cut);
}

Poly family_shift(const Poly& p, const std::string& prefix, int sign, const std::string& other)
{
    const auto& table = p.table();
    const Cutoffs& cut = p.cutoffs();
    std::map<std::string, Poly> img;
    const int K = family_size(*table, prefix);
    for (int k = 1; k <= K; ++k) {
        Poly im = Poly::variable(table, cut, time_name(prefix, k));
        if (table->has(time_name(other, k))) im += Poly::variable(table, cut, time_name(other, k), sign);
        img.emplace(time_name(prefix, k), im);
    }
    return substitute(p, img, table, cut);
}

std::map<std::string, Q> miwa_times(const Q& u, const Q& w, int count, const std::string& prefix)
{
    std::map<std::string, Q> t;
    for (int k = 1; k <= count; ++k) t[time_name(prefix, k)] = u * qpow(w, -k) / k;
    return t;
}

namespace {

Poly apply_derivs(const Poly& f, const std::vector<std::pair<std::size_t, int>>& ds)
{
    Poly r = f;
    for (const auto& [v, e] : ds)
        for (int i = 0; i < e && !r.is_zero(); ++i) r = r.derivative(v);
    // derivatives of zero still lower the valid range
    if (r.is_zero()) {
        Cutoffs c = f.cutoffs();
        for (const auto& [v, e] : ds) c = c.lowered(f.table()->var(v).group, e * f.table()->var(v).weight);
        return Poly(f.table(), c);
    }
    return r;
}

}  // namespace

Poly apply_diffop(const DiffOp& op, const Poly& f, const std::map<std::string, Q>& scales)
{
    Poly r;
    for (const auto& [c, exps] : op.terms) {
        std::vector<std::pair<std::size_t, int>> ds;
        Q coeff = c;
        for (const auto& [name, e] : exps) {
            ds.emplace_back(f.table()->index(name), e);
            auto it = scales.find(name);
            if (it != scales.end()) coeff *= qpow(it->second, e);
        }
        Poly term = apply_derivs(f, ds) * coeff;
        if (!r.table())
            r = term;
        else
            r += term;
    }
    if (!r.table()) return Poly(f.table(), f.cutoffs());
    return r;
}

DiffOp as_diffop(const Poly& p, const std::map<std::string, std::string>& rename)
{
    DiffOp op;
    for (const auto& [m, q] : p.terms()) {
        std::map<std::string, int> exps;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!m[i]) continue;
            const auto& name = p.table()->var(i).name;
            auto it = rename.find(name);
            exps[it == rename.end() ? name : it->second] = m[i];
        }
        op.terms.emplace_back(q, exps);
    }
    return op;
}

Poly hirota_bilinear(const DiffOp& P, const Poly& f, const Poly& g)
{
    require_same_table(f, g);
    Poly result(f.table(), f.cutoffs().meet(g.cutoffs()));
    for (const auto& [c, exps] : P.terms) {
        std::vector<std::pair<std::size_t, int>> vars;
        for (const auto& [name, e] : exps) vars.emplace_back(f.table()->index(name), e);
        // distribute each D_v^e by Leibniz: sum_j C(e,j) (-1)^{e-j} d^j f d^{e-j} g
        std::vector<int> split(vars.size(), 0);
        std::function<void(std::size_t, Q)> rec = [&](std::size_t idx, Q coeff) {
            if (idx == vars.size()) {
                std::vector<std::pair<std::size_t, int>> df, dg;
                for (std::size_t i = 0; i < vars.size(); ++i) {
                    df.emplace_back(vars[i].first, split[i]);
                    dg.emplace_back(vars[i].first, vars[i].second - split[i]);
                }
                result += apply_derivs(f, df) * apply_derivs(g, dg) * coeff;
                return;
            }
            const int e = vars[idx].second;
            for (int j = 0; j <= e; ++j) {
                split[idx] = j;
                Q k(binomial(e, j));
                if ((e - j) % 2) k = -k;
                rec(idx + 1, coeff * k);
            }
        };
        rec(0, c);
    }
    return result;
}

}  // namespace tauforge
