#include <doctest.h>

#include "support.hpp"
#include "tauforge/grouplike.hpp"

using namespace tauforge;
using tftest::random_fock_vector;

namespace {

BasisState st(int n, Partition l = {}) { return BasisState{n, std::move(l)}; }

ModeMatrix random_matrix(Rng& rng, int lo, int size, int band, int density = 2)
{
    ModeMatrix m = ModeMatrix::zero(lo, size);
    for (int i = 0; i < size; ++i)
        for (int k = 0; k < size; ++k)
            if (std::abs(i - k) <= band && rng.uniform(0, density) != 0) m.a[i][k] = rng.small_rational(3, 2);
    return m;
}

// :exp(sum A_ik psi*_i psi_k):_n as sum_m :X^m:_n / m!, each term a normally ordered word.
FockVector normal_ordered_oracle(const ModeMatrix& a, std::optional<int> vacuum, const FockVector& v)
{
    std::vector<std::pair<Letter, Letter>> rows;
    for (long i = a.lo; i < a.hi(); ++i) {
        std::map<long, Q> m;
        for (long k = a.lo; k < a.hi(); ++k) m[k] = a.at(i, k);
        Letter l = Letter::combination(false, m);
        if (!l.modes.empty()) rows.emplace_back(Letter::psi_star(i), l);
    }
    const int n = vacuum ? *vacuum : v.window().hi();
    FockVector total = v;
    const int r = static_cast<int>(rows.size());
    for (int m = 1; m <= r; ++m) {
        std::vector<int> idx(m, 0);
        FockVector term(v.window());
        while (true) {
            OperatorWord word;
            for (int i : idx) {
                word.push_back(rows[i].first);
                word.push_back(rows[i].second);
            }
            term += apply_normal_ordered(word, n, v);
            int p = 0;
            while (p < m && ++idx[p] == r) idx[p++] = 0;
            if (p == m) break;
        }
        total += term * Q(1, Z(factorial(m)));
    }
    return total;
}

std::vector<BasisState> sample_states(int n_lo, int n_hi, int max_weight)
{
    std::vector<BasisState> out;
    for (int n = n_lo; n <= n_hi; ++n)
        for (const auto& l : enumerate_partitions(max_weight)) out.push_back(st(n, l));
    return out;
}

}  // namespace

TEST_CASE("identity and simple elements")
{
    ModeWindow w(-6, 6);
    CHECK(apply(GroupLike::identity(), vacuum_vector(w, 0)) == vacuum_vector(w, 0));
    Rng rng(1);
    auto v = random_fock_vector(rng, w, -1, 1, 3, 8);
    // :exp(psi*_1 psi_1 - psi*_{-1} psi_{-1}): = psi*_1 psi_1 psi_{-1} psi*_{-1}
    ModeMatrix a = ModeMatrix::zero(-2, 4);
    a.set(1, 1, 1);
    a.set(-1, -1, -1);
    GroupLike g{NormalOrderedBilinear{a, 0}};
    CHECK(apply(g, vacuum_vector(w, 0)) == vacuum_vector(w, 0));
    OperatorWord word{Letter::psi_star(1), Letter::psi(1), Letter::psi(-1), Letter::psi_star(-1)};
    CHECK(apply(g, v) == apply_word(word, v));
    auto rot = rotation_of(g);
    CHECK(!rot.r);
    CHECK(!rot.r_prime);
    CHECK(!rot.diagnostic.empty());
    CHECK(bbc_check(g, sample_states(-1, 1, 2), w).holds);
    // e^{a psi_k psi*_k} = 1 + (e^a - 1) psi_k psi*_k, with e^a written as the weight g
    for (long k : {-2, 0, 3}) {
        const Q gk(5, 2);
        GroupLike d{Diagonal{[&](long j) { return j == k ? gk : Q(1); }}};
        auto expect = v + apply_word(OperatorWord{Letter::psi(k), Letter::psi_star(k)}, v) * (gk - 1);
        if (k < 0) {
            // :psi_k psi*_k: = psi_k psi*_k - 1 below the vacuum
            expect = (v + apply_word(OperatorWord{Letter::psi(k), Letter::psi_star(k)}, v) * (gk - 1)) * (1 / gk);
        }
        CHECK(apply(d, v) == expect);
        // the same element as a bare-ordered exponent: g (1 - (1 - 1/g) psi*_k psi_k)
        ModeMatrix b = ModeMatrix::zero(k, 1);
        b.set(k, k, 1 / gk - 1);
        GroupLike bare = GroupLike{Scalar{k < 0 ? Q(1) : gk}} * GroupLike{NormalOrderedBilinear{b, std::nullopt}};
        CHECK(apply(bare, v) == expect);
    }
}

TEST_CASE("normally ordered exponentials against the word expansion")
{
    ModeWindow w(-6, 6);
    Rng rng(31);
    for (int rep = 0; rep < 8; ++rep) {
        ModeMatrix a = random_matrix(rng, -2, 4, 3, 3);
        auto v = random_fock_vector(rng, w, -1, 1, 3, 5);
        for (std::optional<int> n : {std::optional<int>{}, std::optional<int>{0}, std::optional<int>{-1},
                                     std::optional<int>{1}}) {
            GroupLike g{NormalOrderedBilinear{a, n}};
            CHECK(apply(g, v) == normal_ordered_oracle(a, n, v));
        }
    }
}

TEST_CASE("exponent of a bilinear form")
{
    ModeWindow w(-6, 6);
    Rng rng(4);
    for (int rep = 0; rep < 6; ++rep) {
        // strictly upper triangular: nilpotent
        ModeMatrix b = ModeMatrix::zero(-2, 4);
        for (int i = 0; i < 4; ++i)
            for (int k = i + 1; k < 4; ++k) b.a[i][k] = rng.small_rational(3, 2);
        auto v = random_fock_vector(rng, w, -1, 1, 3, 5);
        GroupLike e{ExponentBilinear{b}};
        auto bare = exponent_to_bare(b);
        CHECK(apply(e, v) == apply(GroupLike{bare}, v));
        QMatrix b2 = b.a * b.a;
        CHECK(bare.a.a == b.a + scaled(b2, Q(1, 2)) + scaled(b2 * b.a, Q(1, 6)));
        auto rot = rotation_of(e);
        REQUIRE(rot.r);
        CHECK(*rot.r == exp_nilpotent(b.a));
        CHECK(rotation_holds(e, rot, {v}));
        CHECK(bbc_check(e, sample_states(-1, 0, 2), w).holds);
    }
    CHECK(rotation_of(GroupLike{ExponentBilinear{ModeMatrix::zero(0, 3)}}).r == identity_matrix(3));
    CHECK(exponent_to_bare(ModeMatrix::zero(0, 2)).a.is_zero());
}

TEST_CASE("rotation matrices of normally ordered exponents")
{
    ModeWindow w(-6, 6);
    Rng rng(12);
    int checked = 0;
    for (int rep = 0; rep < 10; ++rep) {
        ModeMatrix a = random_matrix(rng, -2, 4, 2);
        GroupLike g{NormalOrderedBilinear{a, 0}};
        auto rot = rotation_of(g);
        auto v = random_fock_vector(rng, w, -1, 1, 2, 4);
        if (rot.r && rot.r_prime) {
            CHECK(rotation_holds(g, rot, {v}));
            CHECK(*rot.r * *rot.r_prime == identity_matrix(4));
            ++checked;
        }
        GroupLike bare{NormalOrderedBilinear{a, std::nullopt}};
        auto rb = rotation_of(bare);
        CHECK(rotation_holds(bare, Rotation{rb.r, std::nullopt, rb.lo, ""}, {v}));
    }
    CHECK(checked > 0);
}

TEST_CASE("reordering between vacua")
{
    ModeWindow w(-6, 6);
    auto [s0, b0] = reorder(NormalOrderedBilinear{ModeMatrix::zero(-2, 4), 0}, std::nullopt);
    CHECK(s0 == 1);
    CHECK(b0.a.is_zero());
    ModeMatrix neg = ModeMatrix::zero(-3, 3);
    neg.set(-3, -2, Q(2));
    neg.set(-1, -3, Q(-1, 2));
    neg.set(-2, -2, Q(3));
    auto [s1, b1] = reorder(NormalOrderedBilinear{neg, 0}, std::nullopt);
    CHECK(s1 == 1);
    CHECK(b1.a.a == neg.a);
    Rng rng(99);
    for (int rep = 0; rep < 6; ++rep) {
        ModeMatrix a = random_matrix(rng, -2, 4, 1, 3);
        NormalOrderedBilinear g{a, 0};
        std::vector<FockVector> vs;
        for (int i = 0; i < 10; ++i) vs.push_back(random_fock_vector(rng, w, -1, 1, 3, 1));
        for (std::optional<int> target : {std::optional<int>{}, std::optional<int>{-1}, std::optional<int>{2}}) {
            std::pair<Q, NormalOrderedBilinear> r;
            try {
                r = reorder(g, target);
            } catch (const std::domain_error&) {
                continue;
            }
            for (const auto& v : vs) CHECK(apply(GroupLike{g}, v) == apply(GroupLike{r.second}, v) * r.first);
        }
        // bare -> vacuum 0 -> bare
        NormalOrderedBilinear bare{a, std::nullopt};
        try {
            auto [sa, to0] = reorder(bare, 0);
            auto [sb, back] = reorder(to0, std::nullopt);
            CHECK(sa * sb == 1);
            CHECK(back.a.a == a.a);
        } catch (const std::domain_error&) {
        }
        // <inf| :exp(A): |inf> = det(I - P+ A)
        const Q top = inner(vacuum_vector(w, w.hi()), apply(GroupLike{g}, vacuum_vector(w, w.hi())));
        CHECK(top == infinity_expectation(g));
    }
}

TEST_CASE("composition of bare-ordered exponents")
{
    ModeWindow w(-6, 6);
    Rng rng(17);
    for (int rep = 0; rep < 6; ++rep) {
        NormalOrderedBilinear b{random_matrix(rng, -2, 4, 2), std::nullopt};
        NormalOrderedBilinear b1{random_matrix(rng, -1, 4, 2), std::nullopt};
        auto v = random_fock_vector(rng, w, -1, 1, 3, 4);
        auto c = compose_normal_ordered(b1, b);
        CHECK(apply(GroupLike{c}, v) == apply(GroupLike{b1}, apply(GroupLike{b}, v)));
        auto z = compose_normal_ordered(NormalOrderedBilinear{ModeMatrix::zero(-2, 4), std::nullopt}, b);
        CHECK(z.a.a == b.a.a);
    }
    // diagonal B, B'
    ModeMatrix d1 = ModeMatrix::zero(0, 2), d2 = ModeMatrix::zero(0, 2);
    d1.set(0, 0, 2);
    d1.set(1, 1, 3);
    d2.set(0, 0, Q(1, 2));
    auto c = compose_normal_ordered(NormalOrderedBilinear{d2, std::nullopt}, NormalOrderedBilinear{d1, std::nullopt});
    CHECK(c.a.at(0, 0) == 2 + Q(1, 2) + 1);
    CHECK(c.a.at(1, 1) == 3);
}

TEST_CASE("bilinears in letters and solitons")
{
    ModeWindow w(-6, 6);
    Rng rng(23);
    for (int rep = 0; rep < 6; ++rep) {
        std::vector<Letter> phis, psis;
        for (int i = 0; i < 2; ++i) phis.push_back(tftest::random_letter(rng, true, -3, 3, 2));
        for (int k = 0; k < 2; ++k) psis.push_back(tftest::random_letter(rng, false, -3, 3, 2));
        QMatrix a = zero_matrix(2, 2);
        for (auto& row : a)
            for (auto& x : row) x = rng.small_rational(3, 2);
        auto bare = letters_to_bare(a, phis, psis, w);
        auto v = random_fock_vector(rng, w, -1, 1, 3, 4);
        for (int n0 : {-1, 0, 2}) {
            try {
                auto [s, g] = letters_to_vacuum(a, phis, psis, w, n0);
                CHECK(apply(GroupLike{bare}, v) == apply(GroupLike{g}, v) * s);
            } catch (const std::domain_error&) {
            }
        }
    }
    // generating-series solitons: any reference vacuum and any window give the same amplitudes
    SolitonExponent sol{{{Q(1, 3), Q(2)}, {Q(-1), Q(1, 2)}}, {Q(1, 2), Q(-1, 3)}, {Q(2), Q(3)}};
    ModeWindow w1(-7, 7), w2(-10, 10);
    for (int n = -1; n <= 1; ++n) {
        auto u = apply(GroupLike{sol}, vacuum_vector(w1, n));
        auto u2 = apply(GroupLike{sol}, vacuum_vector(w2, n));
        for (const auto& l : enumerate_partitions(4)) CHECK(u.coefficient(st(n, l)) == u2.coefficient(st(n, l)));
        for (int n0 : {-2, 1}) {
            auto [s, g] = soliton_to_vacuum(sol, w1, n0);
            auto u3 = apply(GroupLike{g}, vacuum_vector(w1, n)) * s;
            for (const auto& l : enumerate_partitions(4)) CHECK(u.coefficient(st(n, l)) == u3.coefficient(st(n, l)));
        }
    }
    CHECK(bbc_check(GroupLike{sol}, sample_states(0, 0, 2), w1).holds);
}

TEST_CASE("basic bilinear condition")
{
    ModeWindow w(-6, 6);
    auto samples = sample_states(-1, 1, 2);
    CHECK(bbc_check(GroupLike::identity(), samples, w).holds);
    CHECK(bbc_check(GroupLike{LinearWord{{Letter::psi(1)}}}, samples, w).holds);
    CHECK(bbc_check(GroupLike{LinearWord{{Letter::psi_star(0)}}}, samples, w).holds);
    Rng rng(5);
    GroupLike g1{NormalOrderedBilinear{random_matrix(rng, -2, 4, 2), 0}};
    GroupLike g2{ExponentBilinear{ModeMatrix{-1, {{0, 1, 2}, {0, 0, Q(1, 2)}, {0, 0, 0}}}}};
    GroupLike d{Diagonal{[](long j) { return Q(j + 7, 3); }}};
    GroupLike p{ProjectorElement{ProjectorKind::plus, 0, {}}};
    GroupLike o{OuterElement{st(0, {1}), st(1, {2})}};
    for (const auto& g : {g1, g2, d, p, o, g1 * g2, d * g1 * p}) {
        auto r = bbc_check(g, samples, w);
        CHECK_MESSAGE(r.holds, g.kind() << ' ' << r.witness);
    }
}

TEST_CASE("definite charge")
{
    ModeWindow w(-7, 7);
    auto samples = sample_states(-1, 1, 3);
    Rng rng(8);
    CHECK(charge_of(GroupLike{NormalOrderedBilinear{random_matrix(rng, -2, 4, 2), 0}}, samples, w) == 0);
    CHECK(charge_of(GroupLike{LinearWord{{Letter::psi(2)}}}, samples, w) == 1);
    for (int rep = 0; rep < 50; ++rep) {
        const int np = static_cast<int>(rng.uniform(0, 2)), ns = static_cast<int>(rng.uniform(0, 2));
        OperatorWord word;
        for (int i = 0; i < np; ++i) word.push_back(tftest::random_letter(rng, false, -3, 3, 2));
        for (int i = 0; i < ns; ++i) word.push_back(tftest::random_letter(rng, true, -3, 3, 2));
        GroupLike g = rng.coin() ? GroupLike{LinearWord{word}}
                                 : GroupLike{LinearWord{word}} * GroupLike{NormalOrderedBilinear{
                                                                     random_matrix(rng, -2, 4, 1), std::nullopt}};
        auto q = charge_of(g, samples, w);
        if (q) CHECK(*q == np - ns);
    }
    CHECK(charge_of(GroupLike{Product{{GroupLike{LinearWord{{Letter::psi(1)}}}}}}, samples, w) == 1);
    CHECK(charge_of(GroupLike{OuterElement{st(1, {1}), st(-1, {2})}}, samples, w) == 2);
}

TEST_CASE("singular limit of a rank-one exponent")
{
    ModeWindow w(-6, 6);
    Rng rng(41);
    int seen = 0;
    for (int rep = 0; rep < 8; ++rep) {
        Letter phi = tftest::random_letter(rng, true, -2, 2, 3), psi = tftest::random_letter(rng, false, -2, 2, 3);
        auto v = random_fock_vector(rng, w, -1, 1, 3, 5);
        // bare: 1 + beta Phi* Psi at beta = -1/{Psi, Phi*}
        const Q gamma = contraction(psi, phi, std::nullopt);
        if (sgn(gamma) != 0) {
            auto bare = letters_to_bare({{-1 / gamma}}, {phi}, {psi}, w);
            CHECK(apply(singular_limit(phi, psi, std::nullopt), v) == apply(GroupLike{bare}, v));
            auto rot = rotation_of(GroupLike{bare});
            REQUIRE(rot.r);
            CHECK(det(*rot.r) == 0);
            ++seen;
        }
        // around |0>: 1 + beta :Psi Phi*: at beta = 1/<0|Psi Phi*|0>
        const Q c = contraction(psi, phi, 0);
        if (sgn(c) != 0) {
            auto g = singular_limit(phi, psi);
            auto expect = v - apply_normal_ordered(OperatorWord{phi, psi}, 0, v) * (1 / c);
            CHECK(apply(g, v) == expect);
            CHECK(bbc_check(g, sample_states(0, 0, 2), w).holds);
            ++seen;
        } else {
            CHECK_THROWS_AS(singular_limit(phi, psi), std::domain_error);
        }
    }
    CHECK(seen > 3);
}

TEST_CASE("reconstruction of the exponential form")
{
    ModeWindow w(-8, 8);
    auto [c, id] = reconstruct_exponential(GroupLike::identity(), w, 0);
    CHECK(c == 1);
    CHECK(id.a.is_zero());
    GroupLike d{Diagonal{[](long j) { return Q(j * j + 2, 3); }}};
    auto [cd, ed] = reconstruct_exponential(d, w, 0);
    CHECK(apply(GroupLike{ed}, vacuum_vector(w, 0)) * cd == apply(d, vacuum_vector(w, 0)));
    Rng rng(2);
    for (int n : {0, 1}) {
        ModeMatrix a = random_matrix(rng, -3, 6, 2);
        GroupLike g{NormalOrderedBilinear{a, std::nullopt}};
        try {
            auto [c0, e] = reconstruct_exponential(g, w, n, 5);
            auto lhs = apply(GroupLike{e}, vacuum_vector(w, n), 5) * c0;
            CHECK(lhs == apply(g, vacuum_vector(w, n), 5));
        } catch (const std::domain_error&) {
        }
    }
}
