#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tauforge/rational.hpp"

namespace tauforge {

struct Variable {
    std::string name;
    int group = 0;
    int weight = 1;
};

class VarTable;
using TablePtr = std::shared_ptr<const VarTable>;

// Named variables with a grading group and a positive integer weight each.
class VarTable {
public:
    class Builder {
    public:
        Builder& add(const std::string& name, int group, int weight);
        // prefix1 .. prefixK with weights 1..K
        Builder& times(const std::string& prefix, int count, int group);
        // a single weight-one parameter
        Builder& param(const std::string& name, int group) { return add(name, group, 1); }
        TablePtr build() const;

    private:
        std::vector<Variable> vars_;
    };

    std::size_t size() const { return vars_.size(); }
    int groups() const { return groups_; }
    const Variable& var(std::size_t i) const { return vars_[i]; }
    std::optional<std::size_t> find(const std::string& name) const;
    std::size_t index(const std::string& name) const;  // throws on unknown names
    bool has(const std::string& name) const { return find(name).has_value(); }

private:
    std::vector<Variable> vars_;
    std::map<std::string, std::size_t> lookup_;
    int groups_ = 0;
};

std::string time_name(const std::string& prefix, int k);

inline constexpr int kUnbounded = 1 << 29;

// Weight cutoffs: one per grading group plus one on the total weight.
// kUnbounded means no cutoff; a negative cutoff leaves nothing valid.
struct Cutoffs {
    std::vector<int> group;
    int total = kUnbounded;

    static Cutoffs uniform(const VarTable& t, int per_group, int total = kUnbounded);
    static Cutoffs total_only(const VarTable& t, int total);
    Cutoffs meet(const Cutoffs& o) const;
    Cutoffs lowered(int grp, int by) const;
    bool bounded() const;
    bool operator==(const Cutoffs&) const = default;
};

using Mono = std::vector<unsigned char>;

class Poly {
public:
    Poly() = default;
    Poly(TablePtr table, Cutoffs cut);
    static Poly constant(TablePtr table, Cutoffs cut, const Q& c);
    static Poly variable(TablePtr table, Cutoffs cut, const std::string& name, const Q& coeff = 1);
    static Poly monomial(TablePtr table, Cutoffs cut, const Mono& m, const Q& coeff);

    const TablePtr& table() const { return table_; }
    const Cutoffs& cutoffs() const { return cut_; }
    const std::map<Mono, Q>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    Q constant_term() const;
    Q coeff(const Mono& m) const;
    Q coeff(const std::map<std::string, int>& exps) const;
    Mono mono(const std::map<std::string, int>& exps) const;

    int group_weight(const Mono& m, int grp) const;
    int total_weight(const Mono& m) const;
    bool fits(const Mono& m, const Cutoffs& c) const;
    // Largest total weight present (-1 for zero).
    int max_total_weight() const;

    Poly with_cutoffs(const Cutoffs& c) const;  // truncates and narrows
    Poly homogeneous_part(int total) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Q& s);
    Poly operator-() const;
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Q& s) { return a *= s; }
    friend Poly operator*(const Q& s, Poly a) { return a *= s; }
    Poly pow(int e) const;
    void add_term(const Mono& m, const Q& c);

    // Exact equality of the stored terms after truncating both to the common cutoff.
    bool equals_mod(const Poly& o) const;
    bool operator==(const Poly& o) const { return equals_mod(o); }

    Poly derivative(const std::string& name) const;
    Poly derivative(std::size_t var) const;
    Q evaluate(const std::map<std::string, Q>& assignment) const;
    // Substitutes some variables by rationals, keeping the others symbolic.
    Poly partial_evaluate(const std::map<std::string, Q>& assignment) const;

    std::string str() const;

private:
    void insert(const Mono& m, const Q& c);
    TablePtr table_;
    Cutoffs cut_;
    std::map<Mono, Q> terms_;
};

void require_same_table(const Poly& a, const Poly& b);

Poly exp_series(const Poly& p);
Poly log_series(const Poly& p);
Poly inverse_series(const Poly& p);

// Re-expresses p over another table, mapping variables by name.
Poly embed(const Poly& p, TablePtr table, const Cutoffs& cut);
// Variables listed in `images` are replaced; all others are mapped by name.
Poly substitute(const Poly& p, const std::map<std::string, Poly>& images, TablePtr table, const Cutoffs& cut);

// h_k(sign * t) for the time family `prefix`.
Poly h_poly(int k, int sign, TablePtr table, const Cutoffs& cut, const std::string& prefix = "t");
// e_k(t) = (-1)^k h_k(-t)
Poly e_poly(int k, TablePtr table, const Cutoffs& cut, const std::string& prefix = "t");
// xi(t, z) = sum_k t_k z^k over the materialized times of the family.
Poly xi_series(TablePtr table, const Cutoffs& cut, const std::string& prefix, const std::string& param);
// t_k -> t_k + sign * param^k / k (param is a variable name) or sign * value^k / k.
Poly bracket_shift(const Poly& p, int sign, const std::string& prefix, const std::string& param);
Poly bracket_shift_value(const Poly& p, int sign, const std::string& prefix, const Q& value);
// t_k -> t_k + sign * s_k where s is another time family (e.g. t -> t - a).
Poly family_shift(const Poly& p, const std::string& prefix, int sign, const std::string& other);
// Miwa times t_k = u w^{-k} / k for k = 1..K.
std::map<std::string, Q> miwa_times(const Q& u, const Q& w, int count, const std::string& prefix = "t");
int family_size(const VarTable& t, const std::string& prefix);

// A polynomial in derivative symbols: each term maps variable names to powers.
struct DiffOp {
    std::vector<std::pair<Q, std::map<std::string, int>>> terms;
};

// Applies the operator sum c * prod (scale_v d/dv)^e to f, where scale comes from `scales`
// (missing entries mean 1).
Poly apply_diffop(const DiffOp& op, const Poly& f, const std::map<std::string, Q>& scales = {});
// Converts a polynomial (e.g. h_k in symbols) into a differential operator, renaming
// variables through `rename`.
DiffOp as_diffop(const Poly& p, const std::map<std::string, std::string>& rename);

// P(D) f . g = P(d_X)(f(t+X) g(t-X)) at X=0.
Poly hirota_bilinear(const DiffOp& P, const Poly& f, const Poly& g);

}  // namespace tauforge
