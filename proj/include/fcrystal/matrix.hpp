#pragma once

#include <functional>
#include <vector>

#include "fcrystal/witt.hpp"

namespace fcrystal {

// Dense row-major matrix over a truncated Witt ring.
struct WMat {
    int rows = 0, cols = 0;
    std::vector<WittElem> a;

    WMat() = default;
    WMat(const WittRing& r, int nr, int nc) : rows(nr), cols(nc), a(static_cast<size_t>(nr) * nc, r.zero()) {}
    static WMat identity(const WittRing& r, int n);

    WittElem& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const WittElem& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
    bool operator==(const WMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
    bool operator!=(const WMat& o) const { return !(*this == o); }
};

WMat mat_add(const WittRing& r, const WMat& A, const WMat& B);
WMat mat_sub(const WittRing& r, const WMat& A, const WMat& B);
WMat mat_neg(const WittRing& r, const WMat& A);
WMat mat_mul(const WittRing& r, const WMat& A, const WMat& B);
WMat mat_scale(const WittRing& r, const WMat& A, const WittElem& c);
WMat mat_frobenius(const WittRing& r, const WMat& A, long k = 1);
WMat mat_transpose(const WMat& A);

// Inverse over the ring; throws NotIntegral unless the determinant is a unit.
WMat mat_inverse(const WittRing& r, const WMat& A);
bool mat_is_invertible(const WittRing& r, const WMat& A);

int mat_val(const WittRing& r, const WMat& A);  // minimum entry valuation, N for zero
bool mat_is_zero(const WMat& A);
WMat mat_reduce(const WittRing& r, const WMat& A, int k);      // entries mod p^k
WMat mat_div_p_power(const WittRing& r, const WMat& A, int k);  // exact, else PrecisionError

// diag(p^w_1, ..., p^w_d) for nonnegative weights; entries past the precision vanish.
WMat diag_ppow(const WittRing& r, const std::vector<int>& weights);

WMat submatrix(const WMat& A, const std::vector<int>& rows, const std::vector<int>& cols);
std::vector<int> index_range(int begin, int end);

// Characteristic polynomial det(xI - A), coefficients c_0 .. c_n, by Berkowitz.
std::vector<WittElem> charpoly(const WittRing& r, const WMat& A);
WittElem determinant(const WittRing& r, const WMat& A);

WMat random_matrix(const WittRing& r, int nr, int nc, Rng& rng);
WMat random_invertible(const WittRing& r, int n, Rng& rng);

// Embedding of a matrix into an extension ring.
WMat mat_embed(const RingExtension& ext, const WittRing& small, const WMat& A);

// Z/p^N coordinates of a vector of ring elements, s per entry.
std::vector<i64> to_coords(const std::vector<WittElem>& v);
std::vector<WittElem> from_coords(const WittRing& r, const std::vector<i64>& c);

// Matrix of an additive, W(F_p)-linear map W^in -> W^out in Z/p^N coordinates.
ZMat linear_map_matrix(const WittRing& r, int in_dim, int out_dim,
                       const std::function<std::vector<WittElem>(const std::vector<WittElem>&)>& f);

}  // namespace fcrystal
