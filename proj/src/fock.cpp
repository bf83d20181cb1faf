#include "tauforge/fock.hpp"

#include <sstream>

#include "tauforge/schur.hpp"

namespace tauforge {

std::string BasisState::str() const
{
    std::ostringstream os;
    os << '|' << shape.str() << ',' << charge << '>';
    return os.str();
}

ModeWindow::ModeWindow(int lo, int hi) : lo_(lo), hi_(hi)
{
    if (hi <= lo) throw WindowError("mode window must have lo < hi");
    if (hi - lo > 128) throw WindowError("mode window wider than 128 modes");
}

ModeWindow ModeWindow::around(int n_lo, int n_hi, int D)
{
    return ModeWindow(n_lo - D - 2, n_hi + D + 2);
}

void ModeWindow::require(long k) const
{
    if (!contains(k))
        throw WindowError("mode " + std::to_string(k) + " outside window [" + std::to_string(lo_) + "," +
                          std::to_string(hi_) + ")");
}

bool ModeWindow::fits(const BasisState& s) const
{
    const int n = s.charge, l = s.shape.length();
    if (l == 0) return n >= lo_ && n <= hi_;
    return n - l >= lo_ && n + s.shape[1] <= hi_;
}

Mask ModeWindow::encode(const BasisState& s) const
{
    if (!fits(s)) throw WindowError("state " + s.str() + " does not fit the mode window");
    const int n = s.charge, l = s.shape.length();
    Mask m = 0;
    for (int i = 1; i <= l; ++i) m |= bit(*this, n + s.shape[i] - i);
    for (long k = lo_; k < n - l; ++k) m |= bit(*this, k);
    return m;
}

int popcount(Mask m)
{
    return __builtin_popcountll(static_cast<unsigned long long>(m)) +
           __builtin_popcountll(static_cast<unsigned long long>(m >> 64));
}

int ModeWindow::charge(Mask m) const { return lo_ + popcount(m); }

BasisState ModeWindow::decode(Mask m) const
{
    const int n = charge(m);
    std::vector<int> parts;
    int i = 0;
    for (long k = hi_ - 1; k >= lo_; --k) {
        if (!((m >> (k - lo_)) & 1)) continue;
        ++i;
        const long part = k - n + i;
        if (part <= 0) break;
        parts.push_back(static_cast<int>(part));
    }
    return BasisState{n, Partition(std::move(parts))};
}

Mask ModeWindow::vacuum(int n) const
{
    if (n < lo_ || n > hi_) throw WindowError("vacuum charge outside the window");
    Mask m = 0;
    for (long k = lo_; k < n; ++k) m |= bit(*this, k);
    return m;
}

int sign_above(const ModeWindow& w, Mask m, long k)
{
    int count;
    if (k >= w.hi())
        count = 0;
    else if (k < w.lo())
        count = popcount(m) + static_cast<int>(w.lo() - 1 - k);
    else
        count = popcount(m >> (k - w.lo() + 1));
    return count % 2 ? -1 : 1;
}

FockVector basis_vector(const ModeWindow& w, const BasisState& s) { return FockVector::basis(w, s, Q(1)); }

FockVector vacuum_vector(const ModeWindow& w, int n) { return basis_vector(w, BasisState{n, {}}); }

PolyFockVector to_poly(const FockVector& v, TablePtr table, const Cutoffs& cut)
{
    PolyFockVector out(v.window());
    for (const auto& [m, c] : v.wedge_terms()) out.add_wedge(m, Poly::constant(table, cut, c));
    return out;
}

FockVector evaluate(const PolyFockVector& v, const std::map<std::string, Q>& assignment)
{
    FockVector out(v.window());
    for (const auto& [m, c] : v.wedge_terms()) out.add_wedge(m, c.evaluate(assignment));
    return out;
}

int weight_of(const ModeWindow& w, Mask m) { return w.decode(m).shape.size(); }

std::optional<std::pair<Mask, int>> psi_on_mask(const ModeWindow& w, Mask m, long k, bool star)
{
    w.require(k);
    const Mask b = bit(w, k);
    if (star == !(m & b)) return std::nullopt;
    return std::make_pair(m ^ b, sign_above(w, m, k));
}

FockVector basis_state_via_creation(const ModeWindow& w, CreationRoute route, const Partition& l, int n)
{
    FockVector v(w);
    switch (route) {
    case CreationRoute::frobenius: {
        const auto f = l.frobenius();
        const int d = f.rank();
        v = vacuum_vector(w, n);
        for (int i = 0; i < d; ++i) v = apply_psi(n + f.alphas[i], v);
        for (int i = d - 1; i >= 0; --i) v = apply_psi_star(n - f.betas[i] - 1, v);
        break;
    }
    case CreationRoute::row: {
        const int len = l.length();
        v = vacuum_vector(w, n - len);
        for (int i = len; i >= 1; --i) v = apply_psi(n + l[i] - i, v);
        if (l.b_exponent() % 2) v *= Q(-1);
        break;
    }
    case CreationRoute::column: {
        const Partition t = l.transpose();
        const int m = l[1];
        v = vacuum_vector(w, n + m);
        for (int i = m; i >= 1; --i) v = apply_psi_star(n - t[i] + i - 1, v);
        if ((l.size() - l.b_exponent()) % 2) v *= Q(-1);
        break;
    }
    }
    return v;
}

// ---- letters ---------------------------------------------------------------

Letter Letter::psi(long k, const Q& c) { return combination(false, {{k, c}}); }
Letter Letter::psi_star(long k, const Q& c) { return combination(true, {{k, c}}); }

Letter Letter::combination(bool star, std::map<long, Q> modes)
{
    Letter f;
    f.star = star;
    for (auto& [k, c] : modes)
        if (sgn(c) != 0) f.modes.emplace(k, canonical(c));
    return f;
}

Letter Letter::psi_series(const Q& point, int order, const Q& c)
{
    if (sgn(point) == 0) throw std::invalid_argument("series letters need a nonzero point");
    Letter f;
    f.series.push_back({canonical(point), order, canonical(c)});
    return f;
}

Letter Letter::psi_star_series(const Q& point, int order, const Q& c)
{
    Letter f = psi_series(point, order, c);
    f.star = true;
    return f;
}

namespace {

Q series_coefficient(const Letter& f, long k)
{
    Q acc = 0;
    for (const auto& s : f.series) {
        // d^r z^e = falling(e, r) z^{e-r}, with e = k for psi and e = -k for psi*
        const long e = f.star ? -k : k;
        const Q fall = falling(Q(e), s.order);
        if (sgn(fall) == 0) continue;
        acc += s.coeff * fall * qpow(s.point, e - s.order);
    }
    return acc;
}

// d_z^a d_x^b of z^n x^{1-n} / (z - x)
Q kernel_derivative(long n, const Q& z, int a, const Q& x, int b)
{
    if (z == x) throw std::domain_error("contraction of series letters at coincident points");
    const Q diff = z - x;
    Q acc = 0;
    for (int i = 0; i <= a; ++i)
        for (int j = 0; j <= b; ++j) {
            const int u = a - i, v = b - j;
            Q term = Q(binomial(a, i) * binomial(b, j)) * falling(Q(n), i) * qpow(z, n - i) *
                     falling(Q(1 - n), j) * qpow(x, 1 - n - j) * Q(factorial(u + v)) * qpow(diff, -1 - u - v);
            if (u % 2) term = -term;
            acc += term;
        }
    return acc;
}

}  // namespace

Q Letter::mode_coefficient(long k) const
{
    Q acc = series_coefficient(*this, k);
    auto it = modes.find(k);
    if (it != modes.end()) acc += it->second;
    return acc;
}

std::vector<std::pair<long, Q>> Letter::window_coefficients(const ModeWindow& w) const
{
    for (const auto& [k, c] : modes) w.require(k);
    std::vector<std::pair<long, Q>> out;
    if (series.empty()) {
        for (const auto& [k, c] : modes) out.emplace_back(k, c);
        return out;
    }
    for (long k = w.lo(); k < w.hi(); ++k) {
        Q c = mode_coefficient(k);
        if (sgn(c) != 0) out.emplace_back(k, c);
    }
    return out;
}

std::string Letter::str() const
{
    std::ostringstream os;
    const char* name = star ? "psi*" : "psi";
    bool first = true;
    for (const auto& [k, c] : modes) {
        os << (first ? "" : " + ") << to_string(c) << ' ' << name << '_' << k;
        first = false;
    }
    for (const auto& s : series) {
        os << (first ? "" : " + ") << to_string(s.coeff) << " d^" << s.order << ' ' << name << '(' << to_string(s.point)
           << ')';
        first = false;
    }
    return first ? "0" : os.str();
}

Q contraction(const Letter& f, const Letter& g, std::optional<int> vacuum)
{
    if (f.star == g.star) return 0;
    // psi before psi*: modes below the vacuum; psi* before psi: modes at or above it
    const bool psi_first = !f.star;
    if (!vacuum && !psi_first) return 0;
    auto counts = [&](long k) { return !vacuum || (psi_first ? k < *vacuum : k >= *vacuum); };
    Q acc = 0;
    for (const auto& [k, c] : f.modes)
        if (counts(k)) acc += c * g.mode_coefficient(k);
    for (const auto& [k, c] : g.modes)
        if (counts(k)) acc += c * series_coefficient(f, k);
    if (f.series.empty() || g.series.empty()) return acc;
    if (!vacuum) throw std::domain_error("bare contraction of two generating series diverges");
    const Letter& p = psi_first ? f : g;
    const Letter& s = psi_first ? g : f;
    for (const auto& a : p.series)
        for (const auto& b : s.series) {
            Q k = a.coeff * b.coeff * kernel_derivative(*vacuum, a.point, a.order, b.point, b.order);
            acc += psi_first ? k : Q(-k);
        }
    return acc;
}

namespace {

void merge_term(std::vector<WordTerm>& out, const Q& c, std::vector<int> letters)
{
    if (sgn(c) == 0) return;
    for (auto& t : out)
        if (t.letters == letters) {
            t.coeff += c;
            return;
        }
    out.push_back({c, std::move(letters)});
}

std::vector<WordTerm> prune(std::vector<WordTerm> v)
{
    std::erase_if(v, [](const WordTerm& t) { return sgn(t.coeff) == 0; });
    return v;
}

std::vector<WordTerm> normal_order_rec(const OperatorWord& word, const std::vector<int>& idx,
                                       std::optional<int> vacuum)
{
    if (idx.empty()) return {{Q(1), {}}};
    const int f = idx.front();
    const std::vector<int> rest(idx.begin() + 1, idx.end());
    std::vector<WordTerm> out;
    for (const auto& t : normal_order_rec(word, rest, vacuum)) {
        std::vector<int> l{f};
        l.insert(l.end(), t.letters.begin(), t.letters.end());
        merge_term(out, t.coeff, std::move(l));
    }
    for (std::size_t j = 0; j < rest.size(); ++j) {
        const Q c = contraction(word[f], word[rest[j]], vacuum);
        if (sgn(c) == 0) continue;
        std::vector<int> without = rest;
        without.erase(without.begin() + j);
        const Q sign = (j % 2) ? Q(1) : Q(-1);
        for (const auto& t : normal_order_rec(word, without, vacuum)) merge_term(out, sign * c * t.coeff, t.letters);
    }
    return out;
}

}  // namespace

std::vector<WordTerm> normal_order_word(const OperatorWord& word, std::optional<int> vacuum)
{
    std::vector<int> idx(word.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    return prune(normal_order_rec(word, idx, vacuum));
}

std::vector<WordTerm> wick_expand(const OperatorWord& word, std::optional<int> vacuum)
{
    std::vector<WordTerm> cur{{Q(1), {}}};
    for (int i = static_cast<int>(word.size()) - 1; i >= 0; --i) {
        std::vector<WordTerm> next;
        for (const auto& t : cur) {
            std::vector<int> l{i};
            l.insert(l.end(), t.letters.begin(), t.letters.end());
            merge_term(next, t.coeff, std::move(l));
            for (std::size_t j = 0; j < t.letters.size(); ++j) {
                const Q c = contraction(word[i], word[t.letters[j]], vacuum);
                if (sgn(c) == 0) continue;
                std::vector<int> without = t.letters;
                without.erase(without.begin() + j);
                merge_term(next, (j % 2 ? Q(-1) : Q(1)) * c * t.coeff, std::move(without));
            }
        }
        cur = prune(std::move(next));
    }
    return cur;
}

Letter letter_part(const Letter& f, const ModeWindow& w, int n, bool creation)
{
    Letter out;
    out.star = f.star;
    for (const auto& [k, c] : f.window_coefficients(w)) {
        const bool creates = f.star ? k < n : k >= n;
        if (creates == creation) out.modes.emplace(k, c);
    }
    return out;
}

// ---- projectors and currents -------------------------------------------------

bool projector_keeps(const ModeWindow& w, Mask m, ProjectorKind kind, int n, const Partition& l)
{
    const MayaSet maya(n, l);
    // modes below the window are filled and above it empty; both must agree with I_{n,l}
    const long low = std::min<long>(w.lo(), n - l.length()) - 1;
    const long high = std::max<long>(w.hi(), n + l[1]) + 1;
    for (long k = low; k < high; ++k) {
        const bool in = maya.contains(k);
        if (kind == ProjectorKind::plus && in && !occupied(w, m, k)) return false;
        if (kind == ProjectorKind::minus && !in && occupied(w, m, k)) return false;
    }
    return true;
}

WedgeImage current_on_mask(const ModeWindow& w, Mask m, long k)
{
    WedgeImage img;
    if (k == 0) {
        img.emplace_back(m, Q(w.charge(m)));
        return img;
    }
    for (long j = w.lo(); j < w.hi(); ++j) {
        const long src = j + k;
        if (occupied(w, m, j) || !occupied(w, m, src)) continue;
        if (src < w.lo()) throw WindowError("current moves a mode from below the window");
        if (src >= w.hi()) continue;
        const int s1 = sign_above(w, m, src);
        const Mask m1 = m ^ bit(w, src);
        const int s2 = sign_above(w, m1, j);
        img.emplace_back(m1 | bit(w, j), Q(s1 * s2));
    }
    return img;
}

PolyFockVector apply_current_exp(int sign, const SchurContext& ctx, const FockVector& v, int D)
{
    PolyFockVector out(v.window());
    for (const auto& [state, c] : v.terms()) {
        const Partition& l = state.shape;
        if (sign < 0) {
            for (const auto& mu : enumerate_partitions(l.size() + D)) {
                if (mu.size() < l.size() || !mu.contains(l)) continue;
                Poly s = ctx.skew(mu, l);
                if (s.is_zero()) continue;
                if ((mu.b_exponent() - l.b_exponent()) % 2) s = -s;
                out.add(BasisState{state.charge, mu}, s * c);
            }
        } else {
            for (const auto& mu : enumerate_partitions(l.size())) {
                if (!l.contains(mu)) continue;
                Poly s = ctx.skew(l, mu);
                if (s.is_zero()) continue;
                if ((l.b_exponent() - mu.b_exponent()) % 2) s = -s;
                out.add(BasisState{state.charge, mu}, s * c);
            }
        }
    }
    return out;
}

PolyFockVector apply_current_exp_series(int sign, TablePtr table, const Cutoffs& cut, const std::string& prefix,
                                        const PolyFockVector& v, int D)
{
    const int K = std::min(D, family_size(*table, prefix));
    std::vector<Poly> t;
    for (int k = 1; k <= K; ++k) t.push_back(Poly::variable(table, cut, time_name(prefix, k)));
    PolyFockVector total = v, term = v;
    for (int m = 1; m <= D && !term.empty(); ++m) {
        PolyFockVector next(v.window());
        for (int k = 1; k <= K; ++k) {
            const PolyFockVector jv = apply_current(sign * k, term);
            for (const auto& [mask, c] : jv.wedge_terms()) next.add_wedge(mask, c * t[k - 1]);
        }
        term = next * Q(1, m);
        total += term;
    }
    return total;
}

PolyFockVector apply_current_exp_series(int sign, TablePtr table, const Cutoffs& cut, const std::string& prefix,
                                        const FockVector& v, int D)
{
    return apply_current_exp_series(sign, table, cut, prefix, to_poly(v, table, cut), D);
}

FockVector apply_schur_of_currents(const Partition& l, int sign, const FockVector& v)
{
    if (l.empty()) return v;
    const int w = l.size();
    const SchurContext ctx = standard_context(w);
    const Poly s = ctx.schur(l);
    FockVector out(v.window());
    for (const auto& [mono, c] : s.terms()) {
        FockVector t = v;
        for (std::size_t var = 0; var < mono.size(); ++var) {
            const int k = ctx.table()->var(var).weight;
            for (int e = 0; e < mono[var]; ++e) t = apply_current(sign * k, t) * Q(1, k);
        }
        out += t * c;
    }
    return out;
}

// ---- diagonal evolution -------------------------------------------------------

Z ModePolynomial::operator()(long j) const
{
    Z acc = 0, p = 1;
    for (const auto& c : coeffs) {
        acc += c * p;
        p *= j;
    }
    return acc;
}

FockVector apply_diagonal_exp(const ModePolynomial& p, const Q& base, const FockVector& v)
{
    const std::function<Z(long)> b = [&](long j) { return p(j); };
    return v.act([&](Mask m) {
        const BasisState s = v.window().decode(m);
        const Z e = diagonal_log_eigenvalue(b, s.charge, s.shape);
        if (!e.fits_slong_p()) throw std::overflow_error("diagonal exponent too large");
        return WedgeImage{{m, qpow(base, e.get_si())}};
    });
}

FockVector apply_diagonal_weights(const std::function<Q(long)>& weight, const FockVector& v)
{
    auto g = [&](long j) {
        Q x = canonical(weight(j));
        if (sgn(x) == 0) throw std::domain_error("diagonal weight vanishes at mode " + std::to_string(j));
        return x;
    };
    return v.act([&](Mask m) {
        const BasisState s = v.window().decode(m);
        const int n = s.charge;
        Q e = 1;
        if (n > 0)
            for (long j = 0; j < n; ++j) e *= g(j);
        if (n < 0)
            for (long j = n; j < 0; ++j) e /= g(j);
        for (int j = 1; j <= s.shape.length(); ++j) e *= g(n + s.shape[j] - j) / g(n - j);
        return WedgeImage{{m, e}};
    });
}

PolyFockVector apply_diagonal_exp(const std::function<Poly(long)>& b, TablePtr table, const Cutoffs& cut,
                                  const FockVector& v)
{
    const Poly zero(table, cut);
    PolyFockVector out(v.window());
    for (const auto& [m, c] : v.wedge_terms()) {
        const BasisState s = v.window().decode(m);
        out.add_wedge(m, exp_series(diagonal_log_eigenvalue(b, s.charge, s.shape, zero)) * c);
    }
    return out;
}

}  // namespace tauforge
