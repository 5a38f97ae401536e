#pragma once

#include "fcrystal/witt.hpp"

namespace fcrystal {

// p^val * unit in W[1/p], with the unit trusted modulo p^eff_prec.
// The zero element has zero == true; its val and unit are unused.
struct LaurentElem {
    int val = 0;
    WittElem unit;
    int eff_prec = 0;
    bool zero = true;

    bool operator==(const LaurentElem& o) const {
        if (zero || o.zero) return zero == o.zero;
        return val == o.val && unit == o.unit && eff_prec == o.eff_prec;
    }
};

LaurentElem laurent_zero(const WittRing& r);
// p^val * x with x an arbitrary ring element; powers of p inside x move into val.
LaurentElem laurent_make(const WittRing& r, int val, const WittElem& x);
LaurentElem laurent_from_integral(const WittRing& r, const WittElem& x);

LaurentElem laurent_add(const WittRing& r, const LaurentElem& a, const LaurentElem& b);
LaurentElem laurent_neg(const WittRing& r, const LaurentElem& a);
LaurentElem laurent_sub(const WittRing& r, const LaurentElem& a, const LaurentElem& b);
LaurentElem laurent_mul(const WittRing& r, const LaurentElem& a, const LaurentElem& b);
LaurentElem laurent_inverse(const WittRing& r, const LaurentElem& a);  // NotIntegral for zero
LaurentElem laurent_div_p(const LaurentElem& a, int k);

// p^(val + shift) * unit as an element of W/p^N; NotIntegral if the exponent is negative,
// PrecisionError if digits below p^N are untrusted.
WittElem laurent_to_integral(const WittRing& r, const LaurentElem& a, int shift = 0);

}  // namespace fcrystal
