#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tauforge/det.hpp"
#include "tauforge/fock.hpp"

namespace tauforge {

// A finite matrix indexed by modes lo..lo+size-1; entries outside are zero.
// Entry (i, k) multiplies psi*_i psi_k.
struct ModeMatrix {
    int lo = 0;
    QMatrix a;

    static ModeMatrix zero(int lo, int size);
    int size() const { return static_cast<int>(a.size()); }
    int hi() const { return lo + size(); }
    Q at(long i, long k) const;
    void set(long i, long k, const Q& v);
    bool is_zero() const;
    // Same entries over a larger (or equal) mode range.
    ModeMatrix widened(int new_lo, int new_hi) const;
};

// exp(sum b_ik psi*_i psi_k); applied as a power series that must terminate.
struct ExponentBilinear {
    ModeMatrix b;
};

// Normally ordered exp(sum a_ik psi*_i psi_k), bare (every psi* to the left) or
// relative to the vacuum |m>.
struct NormalOrderedBilinear {
    ModeMatrix a;
    std::optional<int> vacuum;
};

// An ordinary product of letters.
struct LinearWord {
    OperatorWord letters;
};

// Bare-ordered exp(sum_{i,k} A_ik psi*(q_i) psi(p_k)).
struct SolitonExponent {
    QMatrix a;
    std::vector<Q> p, q;
};

// prod_j g_j^{:psi_j psi*_j:} with nonzero weights g_j.
struct Diagonal {
    std::function<Q(long)> weight;
};

struct ProjectorElement {
    ProjectorKind kind = ProjectorKind::plus;
    int charge = 0;
    Partition shape;
};

// |ket><bra|
struct OuterElement {
    BasisState ket, bra;
};

struct Scalar {
    Q value;
};

struct GroupLike;

// Applied right to left: factors.back() acts first.
struct Product {
    std::vector<GroupLike> factors;
};

struct GroupLike {
    using Variant = std::variant<ExponentBilinear, NormalOrderedBilinear, LinearWord, SolitonExponent, Diagonal,
                                 ProjectorElement, OuterElement, Scalar, Product>;
    Variant v;

    static GroupLike identity() { return GroupLike{Scalar{Q(1)}}; }
    std::string kind() const;
};

GroupLike operator*(const GroupLike& a, const GroupLike& b);

// :exp(beta Psi Phi*):_n at beta = 1/<n|Psi Phi*|n> is not invertible and collapses to
// Psi Phi* / <n|Psi Phi*|n>.  Bare ordering uses the anticommutator {Psi, Phi*}.
GroupLike singular_limit(const Letter& phi_star, const Letter& psi, std::optional<int> vacuum = 0);

// G v inside the window of v.  With max_weight set, states above that weight are
// dropped; stages that can only raise the weight are pruned as they run.
FockVector apply(const GroupLike& g, const FockVector& v, std::optional<int> max_weight = std::nullopt);
PolyFockVector apply(const GroupLike& g, const PolyFockVector& v, std::optional<int> max_weight = std::nullopt);

// sum b_ik psi*_i psi_k v
FockVector apply_bilinear(const ModeMatrix& b, const FockVector& v);

// Bare-ordered exp(sum A_ik phi*_i psi_k) for letters phi*_i, psi_k, rewritten as a scalar
// times an element normally ordered around n0, inside the window.
std::pair<Q, NormalOrderedBilinear> letters_to_vacuum(const QMatrix& a, const std::vector<Letter>& phi_star,
                                                      const std::vector<Letter>& psi, const ModeWindow& w, int n0);
// The same exponent expanded in modes, bare ordered (finite letters only).
NormalOrderedBilinear letters_to_bare(const QMatrix& a, const std::vector<Letter>& phi_star,
                                      const std::vector<Letter>& psi, const ModeWindow& w);
std::pair<Q, NormalOrderedBilinear> soliton_to_vacuum(const SolitonExponent& s, const ModeWindow& w, int n0);
// <n0| psi*(q_i) psi(p_k) |n0>
QMatrix soliton_contractions(const SolitonExponent& s, int n0);

struct Rotation {
    std::optional<QMatrix> r, r_prime;  // over the mode range starting at `lo`
    int lo = 0;
    std::string diagnostic;
};
Rotation rotation_of(const GroupLike& g);
// G psi*_n = sum_l R_ln psi*_l G and psi*_n G = sum_l R'_ln G psi*_l on the given states.
bool rotation_holds(const GroupLike& g, const Rotation& rot, const std::vector<FockVector>& samples);

// Rewrites the element in another ordering: G = scalar * G'.
std::pair<Q, NormalOrderedBilinear> reorder(const NormalOrderedBilinear& g, std::optional<int> target);
// Bare-ordered composition: B'' = B + B' + B'B.
NormalOrderedBilinear compose_normal_ordered(const NormalOrderedBilinear& left, const NormalOrderedBilinear& right);
// B = e^b - I for nilpotent b.
NormalOrderedBilinear exponent_to_bare(const ModeMatrix& b);
// <inf| :exp(A):_n |inf> = det(I - P_{>=n} A)
Q infinity_expectation(const NormalOrderedBilinear& g);

struct BbcResult {
    bool holds = true;
    std::string witness;
};
// sum_k <U|psi_k G|V><U'|psi*_k G|V'> = sum_k <U|G psi_k|V><U'|G psi*_k|V'> for all U, U'
// and every pair (V, V') drawn from the samples.
BbcResult bbc_check(const GroupLike& g, const std::vector<BasisState>& samples, const ModeWindow& w);

// The charge q with [Q, G] = qG on the samples; throws if the samples see mixed charges.
std::optional<int> charge_of(const GroupLike& g, const std::vector<BasisState>& samples, const ModeWindow& w);

// G|n> = <n|G|n> exp(sum A_{n-b-1, n+a} psi*_{n-b-1} psi_{n+a}) |n> with A from hook coefficients.
std::pair<Q, NormalOrderedBilinear> reconstruct_exponential(const GroupLike& g, const ModeWindow& w, int n,
                                                            std::optional<int> max_weight = std::nullopt);

}  // namespace tauforge
