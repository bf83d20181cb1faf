#include "tauforge/models.hpp"

#include <algorithm>
#include <stdexcept>

namespace tauforge {

namespace {

// s * sum_k z^k prefix_k
Poly xi(const TauRing& r, const std::string& prefix, const Q& z, const Q& s = 1)
{
    Poly out = r.zero();
    Q zk = 1;
    for (int k = 1; k <= r.D; ++k) {
        zk *= z;
        out += Poly::variable(r.table, r.cut, time_name(prefix, k), s * zk);
    }
    return out;
}

// exp(-sum k t_k tm_k)
Poly vacuum_2dtl(const TauRing& r, const Q& scale = 1)
{
    Poly x = r.zero();
    Q s = 1;
    for (int k = 1; k <= r.D; ++k) {
        s *= scale;
        x += Poly::variable(r.table, r.cut, time_name("t", k), -Q(k) * s) *
             Poly::variable(r.table, r.cut, time_name("tm", k));
    }
    return exp_series(x);
}

// The same terms with cutoffs `cut`; for results known to be exact there.
Poly recut(const Poly& p, const Cutoffs& cut)
{
    Poly r(p.table(), cut);
    for (const auto& [m, c] : p.terms()) r.add_term(m, c);
    return r;
}

TauSeries make_series(TauKind kind, const TauRing& ring, std::string provenance)
{
    TauSeries s;
    s.kind = kind;
    s.ring = ring;
    s.provenance = std::move(provenance);
    return s;
}

Q gamma_product(int N)
{
    Q r = 1;
    for (int k = 1; k <= N; ++k) r *= Q(factorial(k - 1));
    return r;
}

std::pair<int, int> charge_range(const std::vector<int>& charges)
{
    if (charges.empty()) throw std::invalid_argument("no charges requested");
    auto [lo, hi] = std::minmax_element(charges.begin(), charges.end());
    return {*lo, *hi};
}

}  // namespace

// ---- solitons ----

SolitonData SolitonData::diagonal(std::vector<Q> p, std::vector<Q> q, const std::vector<Q>& a)
{
    SolitonData d;
    d.A = zero_matrix(a.size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d.A[i][i] = canonical(a[i]);
    d.p = std::move(p);
    d.q = std::move(q);
    return d;
}

bool SolitonData::is_diagonal() const
{
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t k = 0; k < A[i].size(); ++k)
            if (i != k && sgn(A[i][k]) != 0) return false;
    return true;
}

void SolitonData::validate(bool two_dim) const
{
    const std::size_t N = p.size();
    if (q.size() != N || A.size() != N) throw std::invalid_argument("soliton data: sizes differ");
    for (const auto& row : A)
        if (row.size() != N) throw std::invalid_argument("soliton data: coupling matrix is not square");
    for (std::size_t i = 0; i < N; ++i) {
        if (sgn(q[i]) == 0) throw std::invalid_argument("soliton data: q points must be nonzero");
        if (two_dim && sgn(p[i]) == 0) throw std::invalid_argument("soliton data: 2DTL points must be nonzero");
        for (std::size_t k = 0; k < N; ++k) {
            if (q[i] == p[k]) throw std::invalid_argument("soliton data: pole collision q_i = p_k");
            if (k > i && (p[i] == p[k] || q[i] == q[k])) throw std::invalid_argument("soliton data: repeated point");
        }
    }
}

namespace {

// <n| e^{J_+} psi*(q) psi(p) [e^{-J_-}] |n> / <n| e^{J_+} [e^{-J_-}] |n>
Poly soliton_kernel(const TauRing& r, const Q& p, const Q& q, int n, bool two_dim)
{
    Poly e = xi(r, "t", p) - xi(r, "t", q);
    if (two_dim) e += xi(r, "tm", 1 / p) - xi(r, "tm", 1 / q);
    return exp_series(e) * (q / (q - p) * qpow(p / q, n));
}

Poly soliton_determinant(const SolitonData& d, const TauRing& r, int n, bool two_dim)
{
    const std::size_t N = d.size();
    Matrix<Poly> M(N, std::vector<Poly>(N, r.zero()));  // M[k][i]: p_k against q_i
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t i = 0; i < N; ++i) M[k][i] = soliton_kernel(r, d.p[k], d.q[i], n, two_dim);
    Matrix<Poly> m(N, std::vector<Poly>(N, r.zero()));
    for (std::size_t i = 0; i < N; ++i) {
        m[i][i] += r.constant(1);
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t k = 0; k < N; ++k)
                if (sgn(d.A[i][k]) != 0) m[i][j] += M[k][j] * d.A[i][k];
    }
    Poly tau = N ? det_poly(m, r.table, r.cut) : r.constant(1);
    return two_dim ? tau * vacuum_2dtl(r) : tau;
}

Poly soliton_explicit(const SolitonData& d, const TauRing& r, int n, bool two_dim)
{
    if (!d.is_diagonal()) throw std::invalid_argument("explicit soliton sum needs a diagonal coupling matrix");
    const std::size_t N = d.size();
    if (N > 20) throw std::invalid_argument("explicit soliton sum: too many solitons");
    std::vector<Poly> eta;
    for (std::size_t i = 0; i < N; ++i) eta.push_back(soliton_kernel(r, d.p[i], d.q[i], n, two_dim) * d.A[i][i]);
    Poly tau = r.zero();
    for (unsigned long mask = 0; mask < (1ul << N); ++mask) {
        Poly term = r.constant(1);
        Q c = 1;
        for (std::size_t i = 0; i < N; ++i) {
            if (!(mask >> i & 1)) continue;
            term = term * eta[i];
            for (std::size_t j = i + 1; j < N; ++j)
                if (mask >> j & 1)
                    c *= (d.p[i] - d.p[j]) * (d.q[i] - d.q[j]) / ((d.p[i] - d.q[j]) * (d.q[i] - d.p[j]));
        }
        tau += term * c;
    }
    return two_dim ? tau * vacuum_2dtl(r) : tau;
}

}  // namespace

TauSeries soliton_tau(const SolitonData& d, const std::vector<int>& charges, int D, SolitonForm form, bool two_dim)
{
    d.validate(two_dim);
    const TauRing ring = make_tau_ring(D, two_dim);
    const TauKind kind = two_dim ? TauKind::dtl : TauKind::mkp;
    if (form == SolitonForm::schur_sum) {
        const auto [lo, hi] = charge_range(charges);
        const ModeWindow w = ModeWindow::around(lo, hi, two_dim ? 2 * D + 2 : D + 2);
        GroupLike g{SolitonExponent{d.A, d.p, d.q}};
        auto src = TauSource::from_element(g, ring, w, 0, two_dim ? std::nullopt : std::optional<int>(D));
        TauSeries s = two_dim ? expand_2dtl(src, charges) : expand_mkp(src, charges);
        s.provenance = "soliton/schur";
        return s;
    }
    TauSeries s = make_series(kind, ring, form == SolitonForm::determinant ? "soliton/determinant" : "soliton/explicit");
    for (int n : charges)
        s.tau.emplace(n, form == SolitonForm::determinant ? soliton_determinant(d, ring, n, two_dim)
                                                          : soliton_explicit(d, ring, n, two_dim));
    return s;
}

Poly soliton_fermionic_det(const std::vector<Q>& p, const std::vector<Q>& q, const std::vector<Q>& b, int n,
                           const TauRing& ring)
{
    const std::size_t N = p.size();
    if (q.size() != N || b.size() != N) throw std::invalid_argument("fermionic determinant: sizes differ");
    if (N == 0) return ring.constant(1);
    Matrix<Poly> m(N, std::vector<Poly>(N, ring.zero()));
    for (std::size_t i = 0; i < N; ++i) {
        const Poly eq = exp_series(xi(ring, "t", q[i])), ep = exp_series(xi(ring, "t", p[i]));
        for (std::size_t j = 0; j < N; ++j) {
            const long e = n - static_cast<long>(j) - 1;
            m[i][j] = eq * qpow(q[i], e) + ep * (b[i] * qpow(p[i], e));
        }
    }
    return det_poly(m, ring.table, ring.cut);
}

std::vector<Q> fermionic_det_couplings(const std::vector<Q>& p, const std::vector<Q>& q, const std::vector<Q>& b)
{
    const std::size_t N = p.size();
    if (q.size() != N || b.size() != N) throw std::invalid_argument("fermionic determinant: sizes differ");
    std::vector<Q> a(N);
    for (std::size_t i = 0; i < N; ++i) {
        Q c = b[i] * qpow(q[i] / p[i], static_cast<long>(N)) * (q[i] - p[i]) / q[i];
        for (std::size_t k = 0; k < N; ++k)
            if (k != i) c *= (p[i] - q[k]) / (q[i] - q[k]);
        a[i] = c;
    }
    return a;
}

Poly fermionic_det_gauge(const std::vector<Q>& q, int n, const TauRing& ring)
{
    const long N = static_cast<long>(q.size());
    Q c = 1;
    Poly e = ring.zero();
    for (long i = 0; i < N; ++i) {
        c *= qpow(q[i], n - N);
        for (long k = i + 1; k < N; ++k) c *= q[i] - q[k];
        e += xi(ring, "t", q[i]);
    }
    return exp_series(e) * c;
}

// ---- quasi-polynomial tau-functions ----

namespace {

// sum_r a_r d^r/dz^r [z^m e^{xi(t,z)}] at z = p
Poly quasi_entry(const QuasiLetter& L, long m, const TauRing& r)
{
    std::map<long, Poly> cur;  // z^e coefficients of the prefactor of e^{xi}
    cur.emplace(m, r.constant(1));
    std::vector<Poly> dxi;     // k t_k, multiplying z^{k-1}
    for (int k = 1; k <= r.D; ++k) dxi.push_back(Poly::variable(r.table, r.cut, time_name("t", k), Q(k)));
    auto eval = [&](const std::map<long, Poly>& c) {
        Poly s = r.zero();
        for (const auto& [e, f] : c) {
            if (sgn(L.p) == 0) {
                if (e < 0) throw std::domain_error("quasi-polynomial letter: negative power at z = 0");
                if (e == 0) s += f;
                continue;
            }
            s += f * qpow(L.p, e);
        }
        return s;
    };
    Poly out = r.zero();
    for (std::size_t order = 0; order < L.a.size(); ++order) {
        if (order > 0) {
            std::map<long, Poly> next;
            auto add = [&](long e, const Poly& f) {
                auto it = next.find(e);
                if (it == next.end())
                    next.emplace(e, f);
                else
                    it->second += f;
            };
            for (const auto& [e, f] : cur) {
                if (e != 0) add(e - 1, f * Q(e));
                for (int k = 1; k <= r.D; ++k) add(e + k - 1, f * dxi[k - 1]);
            }
            cur = std::move(next);
        }
        if (sgn(L.a[order]) != 0) out += eval(cur) * L.a[order];
    }
    return out * exp_series(xi(r, "t", L.p));
}

}  // namespace

TauSeries quasipoly_tau(const std::vector<QuasiLetter>& letters, const std::vector<int>& charges, int D)
{
    const TauRing ring = make_tau_ring(D);
    TauSeries s = make_series(TauKind::mkp, ring, "quasi-polynomial");
    const std::size_t N = letters.size();
    for (int n : charges) {
        if (N == 0) {
            s.tau.emplace(n, ring.constant(1));
            continue;
        }
        Matrix<Poly> m(N, std::vector<Poly>(N, ring.zero()));
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) m[i][j] = quasi_entry(letters[i], n - static_cast<long>(j) - 1, ring);
        s.tau.emplace(n, det_poly(m, ring.table, ring.cut));
    }
    return s;
}

GroupLike quasipoly_element(const std::vector<QuasiLetter>& letters)
{
    OperatorWord word;
    for (const auto& L : letters) {
        Letter f;
        f.star = false;
        for (std::size_t r = 0; r < L.a.size(); ++r)
            if (sgn(L.a[r]) != 0) f.series.push_back({canonical(L.p), static_cast<int>(r), canonical(L.a[r])});
        if (f.series.empty()) throw std::invalid_argument("quasi-polynomial letter with no terms");
        word.push_back(std::move(f));
    }
    return GroupLike{LinearWord{std::move(word)}};
}

// ---- matrix models ----

TauSeries unitary_model_tau(const std::vector<int>& Ns, int D)
{
    const TauRing ring = make_tau_ring(D, true);
    const auto [lo, hi] = charge_range(Ns);
    const ModeWindow w = ModeWindow::around(lo, hi, 2 * D + 2);
    auto src = TauSource::from_element(GroupLike{ProjectorElement{ProjectorKind::plus, 0, {}}}, ring, w);
    TauSeries s = expand_2dtl(src, Ns);
    s.provenance = "unitary model";
    return s;
}

Poly unitary_toeplitz(int N, const TauRing& ring)
{
    if (N < 0) return ring.zero();
    if (N == 0) return ring.constant(1);
    const SchurContext plus = ring.plus_context(), minus = ring.minus_context();
    Matrix<Poly> m(N, std::vector<Poly>(N, ring.zero()));
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
            for (int a = std::max(0, k - j); a <= ring.D && a + j - k <= ring.D; ++a)
                m[j][k] += plus.h(a) * minus.h(a + j - k);
    return det_poly(m, ring.table, ring.cut);
}

Poly restricted_cauchy(int N, const TauRing& ring, int sign)
{
    if (N < 0) return ring.zero();
    const SchurContext plus = ring.plus_context(), other(ring.table, ring.cut, "tm", sign);
    Poly s = ring.zero();
    for (const auto& l : enumerate_partitions(ring.D))
        if (l.length() <= N) s += plus.schur(l) * other.schur(l);
    return s;
}

Q DiagonalModel::g(long n) const
{
    switch (kind) {
    case DiagonalKind::gaussian:
        return Q(factorial(n)) / qpow(c, n + 1);
    case DiagonalKind::hciz:
        return qpow(c, n) / Q(factorial(n));
    case DiagonalKind::log_squared:
        return qpow(rho, n) * qpow(u, n * n + 2 * n);
    }
    throw std::invalid_argument("unknown diagonal model");
}

Q DiagonalModel::ratio(const Partition& l, int N) const
{
    if (l.length() > N) return 0;
    const long size = l.size();
    switch (kind) {
    case DiagonalKind::gaussian:
        return l.pochhammer_content(N) / qpow(c, size);
    case DiagonalKind::hciz:
        return qpow(c, size) / l.pochhammer_content(N);
    case DiagonalKind::log_squared:
        return qpow(u, casimir_c(l)) * qpow(rho * qpow(u, 2L * N + 1), size);
    }
    throw std::invalid_argument("unknown diagonal model");
}

Q DiagonalModel::prefactor(int N) const
{
    if (N < 0) return 0;
    const long n = N;
    switch (kind) {
    case DiagonalKind::gaussian:
        return gamma_product(N) / qpow(c, n * (n + 1) / 2);
    case DiagonalKind::hciz:
        return qpow(c, n * (n - 1) / 2) / gamma_product(N);
    case DiagonalKind::log_squared:
        return qpow(u, n * (n - 1) * (2 * n - 1) / 6 + n * (n - 1)) * qpow(rho, n * (n - 1) / 2);
    }
    throw std::invalid_argument("unknown diagonal model");
}

TauSeries diagonal_model_tau(const DiagonalModel& m, const std::vector<int>& Ns, int D)
{
    if (sgn(m.c) == 0 || sgn(m.u) == 0 || sgn(m.rho) == 0) throw std::invalid_argument("diagonal model: zero parameter");
    const TauRing ring = make_tau_ring(D, true);
    const auto [lo, hi] = charge_range(Ns);
    const ModeWindow w = ModeWindow::around(lo, hi, 2 * D + 2);
    Diagonal g0{[m](long j) -> Q { return j < 0 ? Q(1) : canonical(m.g(j)); }};
    GroupLike g = GroupLike{g0} * GroupLike{ProjectorElement{ProjectorKind::plus, 0, {}}};
    TauSeries s = expand_2dtl(TauSource::from_element(g, ring, w), Ns);
    s.provenance = "diagonal model";
    return s;
}

Poly diagonal_model_closed(const DiagonalModel& m, int N, const TauRing& ring)
{
    if (N < 0) return ring.zero();
    const SchurContext plus = ring.plus_context(), minus = ring.minus_context();
    Poly s = ring.zero();
    for (const auto& l : enumerate_partitions(ring.D))
        if (l.length() <= N) s += plus.schur(l) * minus.schur(l) * m.ratio(l, N);
    return s * m.prefactor(N);
}

Q gaussian_moment(int m)
{
    if (m < 0) throw std::invalid_argument("negative moment");
    if (m % 2) return 0;
    Q r = 1;
    for (int k = m - 1; k > 1; k -= 2) r *= k;
    return r;
}

Poly hermitian_moment_det(int N, const TauRing& ring)
{
    if (N < 0) return ring.zero();
    if (N == 0) return ring.constant(1);
    const SchurContext ctx = ring.plus_context();
    Matrix<Poly> m(N, std::vector<Poly>(N, ring.zero()));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k <= ring.D; ++k)
                if (const Q mu = gaussian_moment(i + j + k); sgn(mu) != 0) m[i][j] += ctx.h(k) * mu;
    return det_poly(m, ring.table, ring.cut);
}

Poly hermitian_fermionic(int N, const TauRing& ring)
{
    if (N < 0) return ring.zero();
    const ModeWindow w = ModeWindow::around(N, N, ring.D + 2);
    // W_{-2}/2 = -sum k(k-1)/2 psi*_{k-2} psi_k
    ModeMatrix b = ModeMatrix::zero(w.lo(), w.size());
    for (long k = w.lo() + 2; k < w.hi(); ++k) b.set(k - 2, k, Q(-k * (k - 1)) / 2);
    auto src = TauSource::from_element(GroupLike{ExponentBilinear{b}}, ring, w, 0, ring.D);
    return tau_direct(src, N) * gamma_product(N);
}

TauSeries hermitian_2d_tau(const std::vector<int>& Ns, int D)
{
    const TauRing ring = make_tau_ring(D, true);
    const auto [lo, hi] = charge_range(Ns);
    const ModeWindow w = ModeWindow::around(lo, hi, 2 * D + 2);
    TauSeries s = make_series(TauKind::dtl, ring, "Gaussian Hermitian model");
    if (w.hi() <= 0) {
        for (int n : Ns) s.tau.emplace(n, ring.zero());
        return s;
    }
    // :exp(sum_{n,m>=0} mu_{n+m} psi_n psi*_m - sum_{j>=0} psi_j psi*_j): relative to |0>
    ModeMatrix a = ModeMatrix::zero(0, w.hi());
    for (long i = 0; i < w.hi(); ++i)
        for (long k = 0; k < w.hi(); ++k) a.set(i, k, -(gaussian_moment(static_cast<int>(i + k)) - (i == k ? 1 : 0)));
    GroupLike g = GroupLike{NormalOrderedBilinear{a, 0}} * GroupLike{ProjectorElement{ProjectorKind::plus, 0, {}}};
    s = expand_2dtl(TauSource::from_element(g, ring, w), Ns);
    s.provenance = "Gaussian Hermitian model";
    return s;
}

long casimir_c(const Partition& l) { return 2 * l.content_sum(); }

TauSeries cut_and_join_tau(const Q& Qp, int D, int beta_order)
{
    if (sgn(Qp) == 0) throw std::invalid_argument("cut-and-join: Q must be nonzero");
    if (beta_order < 0) throw std::invalid_argument("cut-and-join: negative beta order");
    TauRing ring = make_tau_ring(D, true, {"beta"});
    ring.cut.group[2] = beta_order;
    const ModeWindow w = ModeWindow::around(0, 0, 2 * D + 2);
    const Q base = canonical(Qp);
    auto fn = [ring, w, base](const BasisState& s) {
        const FockVector v = apply_diagonal_weights([base](long j) { return qpow(base, j); }, basis_vector(w, s));
        auto b = [&ring](long j) { return Poly::variable(ring.table, ring.cut, "beta", Q(j * j + j) / 2); };
        return apply_diagonal_exp(b, ring.table, ring.cut, v);
    };
    TauSeries s = expand_2dtl(TauSource(ring, fn, 0, "cut-and-join"), {0});
    s.provenance = "cut-and-join";
    return s;
}

Poly cut_and_join_bosonic(const Q& Qp, const TauRing& ring)
{
    const int order = ring.cut.group.size() > 2 ? ring.cut.group[2] : 0;
    const Poly beta = Poly::variable(ring.table, ring.cut, "beta", Q(1, 2));
    auto t = [&](int k) { return Poly::variable(ring.table, ring.cut, time_name("t", k)); };
    auto W0 = [&](const Poly& f) {
        Poly r = ring.zero();
        for (int a = 1; a < ring.D; ++a)
            for (int b = 1; a + b <= ring.D; ++b) {
                const std::string ab = time_name("t", a + b);
                r += t(a) * t(b) * recut(f.derivative(ab), ring.cut) * Q(a * b);
                r += t(a + b) * recut(f.derivative(time_name("t", a)).derivative(time_name("t", b)), ring.cut) *
                     Q(a + b);
            }
        return r;
    };
    Poly term = vacuum_2dtl(ring, Qp), sum = term;
    for (int m = 1; m <= order; ++m) {
        term = W0(term) * beta * Q(1, m);
        sum += term;
    }
    return sum;
}

// ---- Hamiltonian evolution ----

Q hamiltonian_a_entry(const TauSource& src, const Q& a, int i, int k)
{
    const Q c0 = src.coefficient({}, 0).constant_term();
    if (sgn(c0) == 0) throw std::domain_error("hamiltonian: vanishing c_empty");
    if (sgn(a) == 0) throw std::domain_error("hamiltonian: a must be nonzero");
    const Q c = src.frobenius_coefficient({i - 1}, {k - 1}, 0).constant_term();
    Q r = c / c0 * rising(a, i) * rising(-a, k) / (a * Q(factorial(i - 1)) * Q(factorial(k)));
    return k % 2 ? -r : r;
}

HamiltonianSeries hamiltonian_tau(const GroupLike& g, const ModeWindow& w, const Q& a, int t_weight, int L)
{
    if (t_weight < 0 || L < 0) throw std::invalid_argument("hamiltonian: negative cutoff");
    VarTable::Builder b;
    b.times("T", t_weight, 0);
    b.param("winv", 1);
    HamiltonianSeries out;
    TauRing& r = out.ring;
    r.table = b.build();
    r.cut = Cutoffs::uniform(*r.table, t_weight);
    r.cut.group[1] = L;
    r.D = t_weight;
    const auto src = TauSource::from_element(g, make_tau_ring(0), w, 0, L);
    const Q c0 = src.coefficient({}, 0).constant_term();
    if (sgn(c0) == 0) throw std::domain_error("hamiltonian: vanishing c_empty");
    const Poly winv = Poly::variable(r.table, r.cut, "winv");
    auto winv_pow = [&](long e) {
        Poly p = Poly::constant(r.table, r.cut, 1);
        for (long i = 0; i < e; ++i) p = p * winv;
        return p;
    };
    // exp(sum_j T_j sum_x (x^j) - (y^j)) over the moved particles x and holes y
    auto evolution = [&](const std::vector<long>& from, const std::vector<long>& to) {
        Poly e = Poly(r.table, r.cut);
        for (int j = 1; j <= t_weight; ++j) {
            Q s = 0;
            for (long x : to) s += qpow(Q(x), j);
            for (long y : from) s -= qpow(Q(y), j);
            e += Poly::variable(r.table, r.cut, time_name("T", j), s);
        }
        return exp_series(e);
    };

    out.direct = Poly(r.table, r.cut);
    for (const auto& l : enumerate_partitions(L)) {
        const Q c = src.coefficient(l, 0).constant_term();
        if (sgn(c) == 0) continue;
        std::vector<long> from, to;
        for (int i = 1; i <= l.length(); ++i) {
            from.push_back(-i);
            to.push_back(l[i] - i);
        }
        out.direct += evolution(from, to) * winv_pow(l.size()) * (c / c0 * schur_content_eval(l, a, 1));
    }

    // sum over I, K subsets of {1..L} with |I| = |K| and sum I + sum K - |I| <= L
    QMatrix A = zero_matrix(L, L);
    for (int i = 1; i <= L; ++i)
        for (int k = 1; i + k - 1 <= L; ++k) A[i - 1][k - 1] = hamiltonian_a_entry(src, a, i, k);
    std::vector<std::vector<int>> subsets{{}};
    for (int x = 1; x <= L; ++x) {
        const std::size_t n = subsets.size();
        for (std::size_t s = 0; s < n; ++s) {
            auto v = subsets[s];
            v.push_back(x);
            subsets.push_back(std::move(v));
        }
    }
    auto total = [](const std::vector<int>& v) {
        long s = 0;
        for (int x : v) s += x;
        return s;
    };
    out.soliton = Poly(r.table, r.cut);
    for (const auto& I : subsets)
        for (const auto& K : subsets) {
            const std::size_t d = I.size();
            if (K.size() != d) continue;
            const long weight = total(I) + total(K) - static_cast<long>(d);
            if (weight > L) continue;
            QMatrix AIK = zero_matrix(d, d), cauchy = zero_matrix(d, d);
            for (std::size_t x = 0; x < d; ++x)
                for (std::size_t y = 0; y < d; ++y) {
                    AIK[x][y] = A[I[x] - 1][K[y] - 1];
                    cauchy[x][y] = Q(K[y]) / (I[x] - 1 + K[y]);
                }
            const Q c = d ? det(AIK) * det(cauchy) : Q(1);
            if (sgn(c) == 0) continue;
            std::vector<long> from, to;
            for (int i : I) to.push_back(i - 1);
            for (int k : K) from.push_back(-k);
            out.soliton += evolution(from, to) * winv_pow(weight) * c;
        }
    return out;
}

}  // namespace tauforge
