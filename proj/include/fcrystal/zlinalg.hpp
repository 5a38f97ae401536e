#pragma once

#include <optional>
#include <vector>

#include "fcrystal/modint.hpp"

namespace fcrystal {

// Dense matrix over Z/p^N, row-major.
struct ZMat {
    int rows = 0, cols = 0;
    std::vector<i64> a;

    ZMat() = default;
    ZMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}
    static ZMat identity(int n);

    i64& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    i64 operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

ZMat zmul(const ZMod& z, const ZMat& A, const ZMat& B);
std::vector<i64> zapply(const ZMod& z, const ZMat& A, const std::vector<i64>& x);

// U * A * V = diag(p^e_0, p^e_1, ...); exponent N marks a zero diagonal entry.
struct Smith {
    ZMat U, V;
    std::vector<int> exps;  // length min(rows, cols)
    int rank = 0;           // number of exponents below N
};

Smith smith(const ZMod& z, ZMat A);

// Some x with A x = b, or nothing when b is outside the image.
std::optional<std::vector<i64>> zsolve(const ZMod& z, const ZMat& A, const std::vector<i64>& b);

struct Kernel {
    std::vector<std::vector<i64>> free;     // generators with a unit coordinate
    std::vector<std::vector<i64>> torsion;  // generators divisible by p
};

Kernel zkernel(const ZMod& z, const ZMat& A);

}  // namespace fcrystal
