#include "fcrystal/zlinalg.hpp"

#include <algorithm>
#include <utility>

namespace fcrystal {

ZMat ZMat::identity(int n) {
    ZMat I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1;
    return I;
}

ZMat zmul(const ZMod& z, const ZMat& A, const ZMat& B) {
    ZMat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            i64 aik = A(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < B.cols; ++j) C(i, j) = z.add(C(i, j), z.mul(aik, B(k, j)));
        }
    return C;
}

std::vector<i64> zapply(const ZMod& z, const ZMat& A, const std::vector<i64>& x) {
    std::vector<i64> y(A.rows, 0);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) y[i] = z.add(y[i], z.mul(A(i, j), x[j]));
    return y;
}

namespace {

void swap_rows(ZMat& A, int i, int j) {
    if (i == j) return;
    for (int c = 0; c < A.cols; ++c) std::swap(A(i, c), A(j, c));
}

void swap_cols(ZMat& A, int i, int j) {
    if (i == j) return;
    for (int r = 0; r < A.rows; ++r) std::swap(A(r, i), A(r, j));
}

// row_i -= f * row_k
void row_axpy(const ZMod& z, ZMat& A, int i, int k, i64 f) {
    if (f == 0) return;
    for (int c = 0; c < A.cols; ++c) A(i, c) = z.sub(A(i, c), z.mul(f, A(k, c)));
}

// col_j -= f * col_k
void col_axpy(const ZMod& z, ZMat& A, int j, int k, i64 f) {
    if (f == 0) return;
    for (int r = 0; r < A.rows; ++r) A(r, j) = z.sub(A(r, j), z.mul(f, A(r, k)));
}

}  // namespace

Smith smith(const ZMod& z, ZMat A) {
    Smith S;
    S.U = ZMat::identity(A.rows);
    S.V = ZMat::identity(A.cols);
    const int m = std::min(A.rows, A.cols);
    S.exps.assign(m, z.N);
    for (int k = 0; k < m; ++k) {
        int best = z.N, bi = -1, bj = -1;
        for (int i = k; i < A.rows && best > 0; ++i)
            for (int j = k; j < A.cols; ++j) {
                int v = z.val(A(i, j));
                if (v < best) {
                    best = v, bi = i, bj = j;
                    if (v == 0) break;
                }
            }
        if (bi < 0) break;
        swap_rows(A, k, bi);
        swap_rows(S.U, k, bi);
        swap_cols(A, k, bj);
        swap_cols(S.V, k, bj);
        const i64 pe = z.ppow(best);
        const i64 unit = z.inv(A(k, k) / pe);
        for (int c = 0; c < A.cols; ++c) A(k, c) = z.mul(A(k, c), unit);
        for (int c = 0; c < S.U.cols; ++c) S.U(k, c) = z.mul(S.U(k, c), unit);
        for (int i = k + 1; i < A.rows; ++i) {
            i64 f = A(i, k) / pe;
            row_axpy(z, A, i, k, f);
            row_axpy(z, S.U, i, k, f);
        }
        for (int j = k + 1; j < A.cols; ++j) {
            i64 f = A(k, j) / pe;
            col_axpy(z, A, j, k, f);
            col_axpy(z, S.V, j, k, f);
        }
        S.exps[k] = best;
        S.rank = k + 1;
    }
    return S;
}

std::optional<std::vector<i64>> zsolve(const ZMod& z, const ZMat& A, const std::vector<i64>& b) {
    Smith S = smith(z, A);
    std::vector<i64> y = zapply(z, S.U, b);
    std::vector<i64> w(A.cols, 0);
    for (int k = 0; k < A.rows; ++k) {
        if (k < S.rank) {
            i64 pe = z.ppow(S.exps[k]);
            if (y[k] % pe != 0) return std::nullopt;
            w[k] = y[k] / pe;
        } else if (y[k] != 0) {
            return std::nullopt;
        }
    }
    return zapply(z, S.V, w);
}

Kernel zkernel(const ZMod& z, const ZMat& A) {
    Smith S = smith(z, A);
    Kernel K;
    auto column = [&](int k, i64 scale) {
        std::vector<i64> v(A.cols);
        for (int r = 0; r < A.cols; ++r) v[r] = z.mul(S.V(r, k), scale);
        return v;
    };
    for (int k = 0; k < A.cols; ++k) {
        if (k < S.rank) {
            if (S.exps[k] > 0) K.torsion.push_back(column(k, z.ppow(z.N - S.exps[k])));
        } else {
            K.free.push_back(column(k, 1));
        }
    }
    return K;
}

}  // namespace fcrystal
