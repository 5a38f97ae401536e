#include "fcrystal/witt.hpp"

#include <stdexcept>
#include <string>

#include "fcrystal/errors.hpp"

namespace fcrystal {

namespace {

using Poly = std::vector<i64>;  // over F_p, lowest degree first

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly pmod(Poly a, const Poly& f, i64 p) {
    trim(a);
    const int df = static_cast<int>(f.size()) - 1;
    const i64 lead_inv = ZMod(p, 1).inv(f.back());
    while (static_cast<int>(a.size()) - 1 >= df) {
        const int da = static_cast<int>(a.size()) - 1;
        const i64 c = a.back() * lead_inv % p;
        for (int i = 0; i <= df; ++i) a[da - df + i] = ((a[da - df + i] - c * f[i]) % p + p) % p;
        trim(a);
    }
    return a;
}

Poly pmulmod(const Poly& a, const Poly& b, const Poly& f, i64 p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return pmod(c, f, p);
}

Poly ppowmod(Poly a, i64 e, const Poly& f, i64 p) {
    Poly r = pmod({1}, f, p);
    a = pmod(a, f, p);
    while (e) {
        if (e & 1) r = pmulmod(r, a, f, p);
        a = pmulmod(a, a, f, p);
        e >>= 1;
    }
    return r;
}

Poly pgcd(Poly a, Poly b, i64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = pmod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// x^(p^k) mod f
Poly frob_power_of_x(int k, const Poly& f, i64 p) {
    Poly h = pmod({0, 1}, f, p);
    for (int i = 0; i < k; ++i) h = ppowmod(h, p, f, p);
    return h;
}

// (h - x) mod f
Poly sub_x(Poly h, const Poly& f, i64 p) {
    if (h.size() < 2) h.resize(2, 0);
    h[1] = (h[1] - 1 + p) % p;
    return pmod(h, f, p);
}

WittElem eval_poly(const WittRing& r, const std::vector<i64>& coeffs, const WittElem& t) {
    WittElem acc = r.zero();
    for (size_t i = coeffs.size(); i-- > 0;) acc = r.add(r.mul(acc, t), r.from_int(coeffs[i]));
    return acc;
}

std::vector<i64> derivative(const std::vector<i64>& c) {
    std::vector<i64> d;
    for (size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<i64>(i));
    return d;
}

// Newton iteration for a simple root of an integer polynomial, starting from a root mod p.
WittElem hensel_root(const WittRing& r, const std::vector<i64>& f, WittElem t) {
    const auto df = derivative(f);
    for (int iter = 0; iter < 64; ++iter) {
        WittElem ft = eval_poly(r, f, t);
        if (r.is_zero(ft)) return t;
        t = r.sub(t, r.mul(ft, r.inverse(eval_poly(r, df, t))));
    }
    throw std::logic_error("Hensel iteration did not converge");
}

}  // namespace

bool irreducible_mod_p(i64 p, const std::vector<i64>& monic) {
    Poly f(monic.begin(), monic.end());
    for (auto& c : f) c = ((c % p) + p) % p;
    const int s = static_cast<int>(f.size()) - 1;
    if (s < 1 || f.back() != 1) return false;
    if (sub_x(frob_power_of_x(s, f, p), f, p).size() != 0) return false;
    for (int q = 2; q <= s; ++q) {
        if (s % q != 0 || !is_prime(q)) continue;
        Poly g = pgcd(f, sub_x(frob_power_of_x(s / q, f, p), f, p), p);
        if (g.size() != 1) return false;
    }
    return true;
}

std::vector<i64> first_irreducible(i64 p, int s) {
    i64 count = 1;
    for (int i = 0; i < s && count < (i64(1) << 40); ++i) count *= p;
    for (i64 t = 0; t < count; ++t) {
        std::vector<i64> f(s + 1, 0);
        i64 u = t;
        for (int i = 0; i < s; ++i) {
            f[i] = u % p;
            u /= p;
        }
        f[s] = 1;
        if (irreducible_mod_p(p, f)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");
}

WittRing make_ring(i64 p, int s, int N) {
    if (p % 2 == 0 || !is_prime(p))
        throw InvalidParams("p = " + std::to_string(p) + " is not an odd prime");
    if (s < 1) throw InvalidParams("residue degree must be at least 1");
    if (N < 1) throw InvalidParams("precision must be at least 1");
    if (checked_power(p, N) < 0) throw InvalidParams("p^N must stay below 2^62");

    WittRing r;
    r.z_ = ZMod(p, N);
    r.s_ = s;
    r.modulus_ = first_irreducible(p, s);
    r.frob_.assign(1, ZMat::identity(s));
    // Frobenius root: the lift of x^p that is again a root of the modulus.
    WittElem t = r.pow(r.generator(), static_cast<std::uint64_t>(p));
    t = hensel_root(r, r.modulus_, t);
    r.frob_root_ = t;
    ZMat F(s, s);
    WittElem power = r.one();
    for (int i = 0; i < s; ++i) {
        for (int k = 0; k < s; ++k) F(k, i) = power.coeffs[k];
        power = r.mul(power, t);
    }
    for (int k = 1; k < s; ++k) r.frob_.push_back(zmul(r.z_, F, r.frob_.back()));
    return r;
}

WittElem WittRing::from_int(i64 v) const {
    WittElem e = zero();
    e.coeffs[0] = z_.reduce(v);
    return e;
}

WittElem WittRing::generator() const {
    if (s_ == 1) return from_int(z_.neg(modulus_[0]));
    WittElem e = zero();
    e.coeffs[1] = 1;
    return e;
}

WittElem WittRing::from_coeffs(std::vector<i64> c) const {
    if (static_cast<int>(c.size()) != s_) throw InvalidParams("coefficient vector has wrong length");
    for (auto& x : c) x = z_.reduce(x);
    return WittElem{std::move(c)};
}

WittElem WittRing::add(const WittElem& a, const WittElem& b) const {
    WittElem c = a;
    for (int i = 0; i < s_; ++i) c.coeffs[i] = z_.add(a.coeffs[i], b.coeffs[i]);
    return c;
}

WittElem WittRing::sub(const WittElem& a, const WittElem& b) const {
    WittElem c = a;
    for (int i = 0; i < s_; ++i) c.coeffs[i] = z_.sub(a.coeffs[i], b.coeffs[i]);
    return c;
}

WittElem WittRing::neg(const WittElem& a) const {
    WittElem c = a;
    for (auto& x : c.coeffs) x = z_.neg(x);
    return c;
}

WittElem WittRing::mul(const WittElem& a, const WittElem& b) const {
    if (s_ == 1) return WittElem{{z_.mul(a.coeffs[0], b.coeffs[0])}};
    std::vector<i64> c(2 * s_ - 1, 0);
    for (int i = 0; i < s_; ++i) {
        if (a.coeffs[i] == 0) continue;
        for (int j = 0; j < s_; ++j) c[i + j] = z_.add(c[i + j], z_.mul(a.coeffs[i], b.coeffs[j]));
    }
    for (int k = 2 * s_ - 2; k >= s_; --k) {
        const i64 top = c[k];
        if (top == 0) continue;
        for (int i = 0; i < s_; ++i) c[k - s_ + i] = z_.sub(c[k - s_ + i], z_.mul(top, modulus_[i]));
        c[k] = 0;
    }
    c.resize(s_);
    return WittElem{std::move(c)};
}

WittElem WittRing::scale(const WittElem& a, i64 k) const {
    WittElem c = a;
    const i64 kk = z_.reduce(k);
    for (auto& x : c.coeffs) x = z_.mul(x, kk);
    return c;
}

WittElem WittRing::pow(const WittElem& a, std::uint64_t e) const {
    WittElem r = one(), b = a;
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

WittElem WittRing::frobenius(const WittElem& a, long k) const {
    long kk = k % s_;
    if (kk < 0) kk += s_;
    if (kk == 0) return a;
    return WittElem{zapply(z_, frob_[kk], a.coeffs)};
}

WittElem WittRing::inverse(const WittElem& a) const {
    if (!is_unit(a)) throw std::domain_error("inverse of a non-unit ring element");
    if (s_ == 1) return WittElem{{z_.inv(a.coeffs[0])}};
    // Solve a * y = 1 through the multiplication matrix of a.
    ZMat A(s_, s_);
    WittElem basis = one();
    for (int i = 0; i < s_; ++i) {
        WittElem col = mul(a, basis);
        for (int k = 0; k < s_; ++k) A(k, i) = col.coeffs[k];
        basis = mul(basis, generator());
    }
    auto y = zsolve(z_, A, one().coeffs);
    if (!y) throw std::logic_error("unit without inverse");
    return WittElem{*y};
}

WittElem WittRing::div_p_power(const WittElem& a, int k) const {
    if (k <= 0) return a;
    if (k >= z_.N) return zero();
    const i64 pk = z_.ppow(k);
    WittElem c = a;
    for (auto& x : c.coeffs) {
        if (x % pk != 0) throw PrecisionError("division by p^" + std::to_string(k) + " is not exact");
        x /= pk;
    }
    return c;
}

int WittRing::val(const WittElem& a) const {
    int v = z_.N;
    for (auto x : a.coeffs) v = std::min(v, z_.val(x));
    return v;
}

bool WittRing::is_zero(const WittElem& a) const {
    for (auto x : a.coeffs)
        if (x != 0) return false;
    return true;
}

WittElem WittRing::reduce_mod_p_power(const WittElem& a, int k) const {
    if (k >= z_.N) return a;
    const i64 pk = z_.ppow(k);
    WittElem c = a;
    for (auto& x : c.coeffs) x %= pk;
    return c;
}

WittElem WittRing::random(Rng& rng) const {
    std::uniform_int_distribution<i64> d(0, z_.M - 1);
    WittElem e = zero();
    for (auto& x : e.coeffs) x = d(rng);
    return e;
}

WittElem WittRing::random_unit(Rng& rng) const {
    for (;;) {
        WittElem e = random(rng);
        if (is_unit(e)) return e;
    }
}

WittElem frobenius(const WittRing& r, const WittElem& x, long k) { return r.frobenius(x, k); }

WittElem teichmuller(const WittRing& r, const WittElem& residue) {
    WittElem y = r.reduce_mod_p_power(residue, 1);
    if (r.is_zero(y)) return y;
    // Newton on y^q - y with q = p^s; the derivative q y^(q-1) - 1 is a unit.
    const i64 q_mod = r.zmod().ppow(r.s());
    for (int iter = 0; iter < 64; ++iter) {
        WittElem yq = y;
        for (int i = 0; i < r.s(); ++i) yq = r.pow(yq, static_cast<std::uint64_t>(r.p()));
        WittElem f = r.sub(yq, y);
        if (r.is_zero(f)) return y;
        WittElem df = r.sub(r.scale(r.mul(yq, r.inverse(y)), q_mod), r.one());
        y = r.sub(y, r.mul(f, r.inverse(df)));
    }
    throw std::logic_error("Teichmuller iteration did not converge");
}

WittElem RingExtension::embed(const WittRing& small, const WittElem& x) const {
    WittElem acc = big.zero();
    for (int i = small.s(); i-- > 0;) acc = big.add(big.mul(acc, root), big.from_int(x.coeffs[i]));
    return acc;
}

RingExtension extend_ring(const WittRing& r, int k) {
    if (k < 1) throw InvalidParams("extension degree must be positive");
    RingExtension ext{make_ring(r.p(), r.s() * k, r.N()), k, WittElem{}};
    const WittRing& B = ext.big;
    const auto& f = r.modulus();
    if (k == 1) {
        ext.root = B.generator();
        return ext;
    }
    auto is_residue_root = [&](const WittElem& z) { return B.val(eval_poly(B, f, z)) >= 1; };
    WittElem found;
    bool ok = is_residue_root(B.zero());
    if (ok) found = B.zero();
    // Norms down to F_{p^s} are surjective; enumerate powers of a norm.
    Rng rng(0x5eed0fULL + static_cast<std::uint64_t>(k));
    i64 qs = 1;
    for (int i = 0; i < r.s(); ++i) qs *= r.p();
    for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
        WittElem w = B.random_unit(rng);
        WittElem zeta = B.one();
        for (int j = 0; j < k; ++j) zeta = B.mul(zeta, B.frobenius(w, static_cast<long>(j) * r.s()));
        WittElem z = B.one();
        for (i64 e = 0; e < qs - 1 && !ok; ++e) {
            if (is_residue_root(z)) {
                ok = true;
                found = z;
            }
            z = B.mul(z, zeta);
        }
    }
    if (!ok) throw std::logic_error("no root of the base modulus in the extension");
    ext.root = hensel_root(B, f, found);
    return ext;
}

}  // namespace fcrystal
