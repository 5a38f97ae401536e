#include "fcrystal/laurent.hpp"

#include <algorithm>
#include <string>

#include "fcrystal/errors.hpp"

namespace fcrystal {

LaurentElem laurent_zero(const WittRing& r) { return LaurentElem{0, r.zero(), r.N(), true}; }

LaurentElem laurent_make(const WittRing& r, int val, const WittElem& x) {
    const int v = r.val(x);
    if (v >= r.N()) return laurent_zero(r);
    return LaurentElem{val + v, r.div_p_power(x, v), r.N() - v, false};
}

LaurentElem laurent_from_integral(const WittRing& r, const WittElem& x) { return laurent_make(r, 0, x); }

LaurentElem laurent_add(const WittRing& r, const LaurentElem& a, const LaurentElem& b) {
    if (a.zero) return b;
    if (b.zero) return a;
    const LaurentElem& lo = a.val <= b.val ? a : b;
    const LaurentElem& hi = a.val <= b.val ? b : a;
    const int gap = hi.val - lo.val;
    const int prec = std::min(lo.eff_prec, gap + hi.eff_prec);
    WittElem sum = r.add(lo.unit, r.scale(hi.unit, r.zmod().ppow(gap)));
    sum = r.reduce_mod_p_power(sum, prec);
    const int t = r.val(sum);
    if (t >= prec) return laurent_zero(r);
    return LaurentElem{lo.val + t, r.div_p_power(sum, t), prec - t, false};
}

LaurentElem laurent_neg(const WittRing& r, const LaurentElem& a) {
    if (a.zero) return a;
    LaurentElem c = a;
    c.unit = r.neg(a.unit);
    c.unit = r.reduce_mod_p_power(c.unit, c.eff_prec);
    return c;
}

LaurentElem laurent_sub(const WittRing& r, const LaurentElem& a, const LaurentElem& b) {
    return laurent_add(r, a, laurent_neg(r, b));
}

LaurentElem laurent_mul(const WittRing& r, const LaurentElem& a, const LaurentElem& b) {
    if (a.zero || b.zero) return laurent_zero(r);
    const int prec = std::min(a.eff_prec, b.eff_prec);
    return LaurentElem{a.val + b.val, r.reduce_mod_p_power(r.mul(a.unit, b.unit), prec), prec, false};
}

LaurentElem laurent_inverse(const WittRing& r, const LaurentElem& a) {
    if (a.zero) throw NotIntegral("inverse of zero");
    return LaurentElem{-a.val, r.reduce_mod_p_power(r.inverse(a.unit), a.eff_prec), a.eff_prec, false};
}

LaurentElem laurent_div_p(const LaurentElem& a, int k) {
    LaurentElem c = a;
    if (!c.zero) c.val -= k;
    return c;
}

WittElem laurent_to_integral(const WittRing& r, const LaurentElem& a, int shift) {
    if (a.zero) return r.zero();
    const int e = a.val + shift;
    if (e < 0) throw NotIntegral("entry of valuation " + std::to_string(a.val) + " after shift " + std::to_string(shift));
    if (e >= r.N()) return r.zero();
    if (e + a.eff_prec < r.N())
        throw PrecisionError("only " + std::to_string(e + a.eff_prec) + " digits are trusted");
    return r.scale(a.unit, r.zmod().ppow(e));
}

}  // namespace fcrystal
