#include <doctest.h>

#include "support.hpp"
#include "tauforge/polyring.hpp"

using namespace tauforge;

namespace {

TablePtr times_table(int K) { return VarTable::Builder().times("t", K, 0).build(); }

}  // namespace

TEST_CASE("ring operations with truncation")
{
    auto T = times_table(4);
    auto c2 = Cutoffs::uniform(*T, 2), c1 = Cutoffs::uniform(*T, 1);
    auto t1 = Poly::variable(T, c2, "t1");
    auto one = Poly::constant(T, c2, 1);
    CHECK((t1 + Poly(T, c2)) == t1);
    CHECK((t1 * t1).coeff({{"t1", 2}}) == 1);
    auto t1c = Poly::variable(T, c1, "t1");
    CHECK((t1c * t1c).is_zero());
    auto prod = (one + t1) * (one - t1);
    CHECK(prod == one - t1 * t1);
    CHECK(prod.term_count() == 2);
}

TEST_CASE("ring axioms on random polynomials")
{
    Rng rng(5);
    auto T = VarTable::Builder().times("t", 4, 0).param("z", 1).build();
    for (int D = 0; D <= 6; ++D) {
        auto cut = Cutoffs::uniform(*T, D);
        auto a = tftest::random_poly(rng, T, cut, 6), b = tftest::random_poly(rng, T, cut, 6),
             c = tftest::random_poly(rng, T, cut, 6);
        CHECK(((a * b) * c) == (a * (b * c)));
        CHECK((a * (b + c)) == (a * b + a * c));
        CHECK((a * b) == (b * a));
        CHECK((a - a).is_zero());
    }
}

TEST_CASE("derivatives and h polynomials")
{
    auto T = times_table(6);
    auto cut = Cutoffs::uniform(*T, 6);
    auto h1 = h_poly(1, 1, T, cut), h2 = h_poly(2, 1, T, cut), h4 = h_poly(4, 1, T, cut);
    CHECK(h1 == Poly::variable(T, cut, "t1"));
    auto t = [&](const char* n) { return Poly::variable(T, cut, n); };
    CHECK(h2 == t("t1") * t("t1") * Q(1, 2) + t("t2"));
    auto expect4 = t("t1").pow(4) * Q(1, 24) + t("t2").pow(2) * Q(1, 2) + t("t1").pow(2) * t("t2") * Q(1, 2) +
                   t("t1") * t("t3") + t("t4");
    CHECK(h4 == expect4);
    CHECK(h_poly(-2, 1, T, cut).is_zero());
    CHECK(h2.derivative("t1") == h1);
    CHECK(t("t1").derivative("t3").is_zero());
    CHECK(h4.derivative("t2") == h2);
    for (int k = 0; k <= 6; ++k)
        for (int n = 1; n <= 6; ++n) CHECK(h_poly(k, 1, T, cut).derivative(time_name("t", n)) == h_poly(k - n, 1, T, cut));
    CHECK(e_poly(2, T, cut) == t("t1") * t("t1") * Q(1, 2) - t("t2"));
}

TEST_CASE("generating identity and quasihomogeneity")
{
    for (int D = 0; D <= 10; ++D) {
        auto T = VarTable::Builder().times("t", D, 0).param("z", 1).build();
        auto cut = Cutoffs::uniform(*T, D);
        auto gen = exp_series(xi_series(T, cut, "t", "z"));
        Poly sum(T, cut);
        auto z = Poly::variable(T, cut, "z");
        for (int k = 0; k <= D; ++k) sum += h_poly(k, 1, T, cut) * z.pow(k);
        CHECK(gen == sum);
    }
    auto T = times_table(6);
    auto cut = Cutoffs::uniform(*T, 6);
    const Q a(-3, 2);
    std::map<std::string, Poly> scaled;
    for (int k = 1; k <= 6; ++k)
        scaled.emplace(time_name("t", k), Poly::variable(T, cut, time_name("t", k), qpow(a, k)));
    for (int k = 0; k <= 6; ++k)
        CHECK(substitute(h_poly(k, 1, T, cut), scaled, T, cut) == h_poly(k, 1, T, cut) * qpow(a, k));
}

TEST_CASE("bracket shifts")
{
    auto T = VarTable::Builder().times("t", 5, 0).param("z", 1).build();
    auto cut = Cutoffs::total_only(*T, 5);
    auto t1 = Poly::variable(T, cut, "t1");
    auto z = Poly::variable(T, cut, "z");
    CHECK(bracket_shift(t1, -1, "t", "z") == t1 - z);
    auto h2 = h_poly(2, 1, T, cut);
    // h_2(t + [z]) = h_2 + h_1 z + z^2
    CHECK(bracket_shift(h2, +1, "t", "z") == h2 + t1 * z + z * z);
    Rng rng(3);
    auto p = tftest::random_poly(rng, T, cut, 8);
    CHECK(bracket_shift(bracket_shift(p, +1, "t", "z"), -1, "t", "z") == p);
}

TEST_CASE("evaluation and Miwa times")
{
    auto T = times_table(4);
    auto cut = Cutoffs::uniform(*T, 4);
    CHECK(Poly::variable(T, cut, "t1").evaluate({{"t1", 3}}) == 3);
    auto m = miwa_times(1, 1, 3);
    CHECK(m["t1"] == 1);
    CHECK(m["t2"] == Q(1, 2));
    CHECK(m["t3"] == Q(1, 3));
    CHECK_THROWS(Poly::variable(T, cut, "t2").evaluate({{"t1", 1}}));
}

TEST_CASE("log, exp and inverse are mutually consistent")
{
    Rng rng(9);
    auto T = VarTable::Builder().times("t", 4, 0).build();
    auto cut = Cutoffs::uniform(*T, 6);
    auto x = tftest::random_poly(rng, T, cut, 5);
    x -= Poly::constant(T, cut, x.constant_term());
    auto e = exp_series(x);
    CHECK(log_series(e) == x);
    auto one = Poly::constant(T, cut, 1);
    auto y = one * Q(3) + x;
    CHECK(y * inverse_series(y) == one);
}

TEST_CASE("Hirota bilinear operators")
{
    const int D = 8;
    auto T = times_table(D);
    auto cut = Cutoffs::uniform(*T, D);
    Rng rng(17);
    auto tau = tftest::random_poly(rng, T, cut, 12);
    auto d = [&](const Poly& p, std::initializer_list<const char*> vs) {
        Poly r = p;
        for (auto v : vs) r = r.derivative(v);
        return r;
    };
    DiffOp D1{{{1, {{"t1", 1}}}}};
    auto f = tftest::random_poly(rng, T, cut, 6), g = tftest::random_poly(rng, T, cut, 6);
    CHECK(hirota_bilinear(D1, f, g) == d(f, {"t1"}) * g - f * d(g, {"t1"}));
    DiffOp D11{{{1, {{"t1", 2}}}}};
    CHECK(hirota_bilinear(D11, tau, tau) == (tau * d(tau, {"t1", "t1"}) - d(tau, {"t1"}).pow(2)) * Q(2));
    DiffOp kp{{{1, {{"t1", 4}}}, {3, {{"t2", 2}}}, {-4, {{"t1", 1}, {"t3", 1}}}}};
    auto lhs = hirota_bilinear(kp, tau, tau);
    auto t1 = d(tau, {"t1"}), t2 = d(tau, {"t2"}), t3 = d(tau, {"t3"});
    auto rhs = tau * d(tau, {"t1", "t1", "t1", "t1"}) - t1 * d(tau, {"t1", "t1", "t1"}) * Q(4) +
               d(tau, {"t1", "t1"}).pow(2) * Q(3) + tau * d(tau, {"t2", "t2"}) * Q(3) - t2 * t2 * Q(3) -
               tau * d(tau, {"t1", "t3"}) * Q(4) + t1 * t3 * Q(4);
    CHECK(lhs == rhs * Q(2));
    CHECK(lhs.cutoffs().group[0] == D - 4);
    for (const auto& P : {D1, D11, DiffOp{{{1, {{"t1", 1}, {"t2", 1}}}}}, DiffOp{{{1, {{"t3", 1}}}}}}) {
        int deg = 0;
        for (auto& [n, e] : P.terms[0].second) deg += e;
        Q sign = deg % 2 ? -1 : 1;
        CHECK(hirota_bilinear(P, f, g) == hirota_bilinear(P, g, f) * sign);
    }
}
