#include "fcrystal/matrix.hpp"

#include <algorithm>
#include <stdexcept>

#include "fcrystal/errors.hpp"

namespace fcrystal {

WMat WMat::identity(const WittRing& r, int n) {
    WMat I(r, n, n);
    for (int i = 0; i < n; ++i) I(i, i) = r.one();
    return I;
}

WMat mat_add(const WittRing& r, const WMat& A, const WMat& B) {
    WMat C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = r.add(A.a[i], B.a[i]);
    return C;
}

WMat mat_sub(const WittRing& r, const WMat& A, const WMat& B) {
    WMat C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = r.sub(A.a[i], B.a[i]);
    return C;
}

WMat mat_neg(const WittRing& r, const WMat& A) {
    WMat C = A;
    for (auto& x : C.a) x = r.neg(x);
    return C;
}

WMat mat_mul(const WittRing& r, const WMat& A, const WMat& B) {
    if (A.cols != B.rows) throw std::invalid_argument("matrix shapes do not match");
    WMat C(r, A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            const WittElem& aik = A(i, k);
            if (r.is_zero(aik)) continue;
            for (int j = 0; j < B.cols; ++j) {
                if (r.is_zero(B(k, j))) continue;
                C(i, j) = r.add(C(i, j), r.mul(aik, B(k, j)));
            }
        }
    return C;
}

WMat mat_scale(const WittRing& r, const WMat& A, const WittElem& c) {
    WMat C = A;
    for (auto& x : C.a) x = r.mul(x, c);
    return C;
}

WMat mat_frobenius(const WittRing& r, const WMat& A, long k) {
    WMat C = A;
    for (auto& x : C.a) x = r.frobenius(x, k);
    return C;
}

WMat mat_transpose(const WMat& A) {
    WMat C;
    C.rows = A.cols;
    C.cols = A.rows;
    C.a.resize(A.a.size());
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) C(j, i) = A(i, j);
    return C;
}

WMat mat_inverse(const WittRing& r, const WMat& A) {
    if (A.rows != A.cols) throw std::invalid_argument("inverse of a non-square matrix");
    const int n = A.rows;
    WMat M = A, I = WMat::identity(r, n);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i)
            if (r.is_unit(M(i, c))) {
                piv = i;
                break;
            }
        if (piv < 0) throw NotIntegral("matrix is not invertible over the integers");
        for (int j = 0; j < n; ++j) {
            std::swap(M(c, j), M(piv, j));
            std::swap(I(c, j), I(piv, j));
        }
        const WittElem inv = r.inverse(M(c, c));
        for (int j = 0; j < n; ++j) {
            M(c, j) = r.mul(M(c, j), inv);
            I(c, j) = r.mul(I(c, j), inv);
        }
        for (int i = 0; i < n; ++i) {
            if (i == c || r.is_zero(M(i, c))) continue;
            const WittElem f = M(i, c);
            for (int j = 0; j < n; ++j) {
                M(i, j) = r.sub(M(i, j), r.mul(f, M(c, j)));
                I(i, j) = r.sub(I(i, j), r.mul(f, I(c, j)));
            }
        }
    }
    return I;
}

bool mat_is_invertible(const WittRing& r, const WMat& A) {
    return A.rows == A.cols && r.is_unit(determinant(r, A));
}

int mat_val(const WittRing& r, const WMat& A) {
    int v = r.N();
    for (const auto& x : A.a) v = std::min(v, r.val(x));
    return v;
}

bool mat_is_zero(const WMat& A) {
    for (const auto& x : A.a)
        for (auto c : x.coeffs)
            if (c != 0) return false;
    return true;
}

WMat mat_reduce(const WittRing& r, const WMat& A, int k) {
    WMat C = A;
    for (auto& x : C.a) x = r.reduce_mod_p_power(x, k);
    return C;
}

WMat mat_div_p_power(const WittRing& r, const WMat& A, int k) {
    WMat C = A;
    for (auto& x : C.a) x = r.div_p_power(x, k);
    return C;
}

WMat diag_ppow(const WittRing& r, const std::vector<int>& weights) {
    const int d = static_cast<int>(weights.size());
    WMat D(r, d, d);
    for (int i = 0; i < d; ++i) {
        if (weights[i] < 0) throw std::invalid_argument("negative weight in an integral diagonal");
        D(i, i) = r.from_int(r.zmod().ppow(weights[i]));
    }
    return D;
}

WMat submatrix(const WMat& A, const std::vector<int>& rows, const std::vector<int>& cols) {
    WMat C;
    C.rows = static_cast<int>(rows.size());
    C.cols = static_cast<int>(cols.size());
    C.a.reserve(rows.size() * cols.size());
    for (int i : rows)
        for (int j : cols) C.a.push_back(A(i, j));
    return C;
}

std::vector<int> index_range(int begin, int end) {
    std::vector<int> v;
    for (int i = begin; i < end; ++i) v.push_back(i);
    return v;
}

std::vector<WittElem> charpoly(const WittRing& r, const WMat& A) {
    const int n = A.rows;
    // Highest degree first while building.
    std::vector<WittElem> poly{r.one()};
    for (int k = 1; k <= n; ++k) {
        const int m = k - 1;  // size of the leading block
        const WittElem& a = A(m, m);
        // Toeplitz column: 1, -a, -R C, -R M C, ..., -R M^{m-1} C
        std::vector<WittElem> t{r.one(), r.neg(a)};
        std::vector<WittElem> v(m);
        for (int i = 0; i < m; ++i) v[i] = A(i, m);
        for (int e = 0; e < m; ++e) {
            WittElem rc = r.zero();
            for (int i = 0; i < m; ++i) rc = r.add(rc, r.mul(A(m, i), v[i]));
            t.push_back(r.neg(rc));
            std::vector<WittElem> w(m, r.zero());
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) w[i] = r.add(w[i], r.mul(A(i, j), v[j]));
            v = std::move(w);
        }
        std::vector<WittElem> next(k + 1, r.zero());
        for (int i = 0; i <= k; ++i)
            for (int j = 0; j <= std::min(i, k - 1); ++j) next[i] = r.add(next[i], r.mul(t[i - j], poly[j]));
        poly = std::move(next);
    }
    std::reverse(poly.begin(), poly.end());
    return poly;
}

WittElem determinant(const WittRing& r, const WMat& A) {
    WittElem c0 = charpoly(r, A)[0];
    return A.rows % 2 == 0 ? c0 : r.neg(c0);
}

WMat random_matrix(const WittRing& r, int nr, int nc, Rng& rng) {
    WMat M(r, nr, nc);
    for (auto& x : M.a) x = r.random(rng);
    return M;
}

WMat random_invertible(const WittRing& r, int n, Rng& rng) {
    for (;;) {
        WMat M = random_matrix(r, n, n, rng);
        if (mat_is_invertible(r, M)) return M;
    }
}

WMat mat_embed(const RingExtension& ext, const WittRing& small, const WMat& A) {
    WMat C(ext.big, A.rows, A.cols);
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = ext.embed(small, A.a[i]);
    return C;
}

std::vector<i64> to_coords(const std::vector<WittElem>& v) {
    std::vector<i64> c;
    for (const auto& x : v) c.insert(c.end(), x.coeffs.begin(), x.coeffs.end());
    return c;
}

std::vector<WittElem> from_coords(const WittRing& r, const std::vector<i64>& c) {
    const int s = r.s();
    std::vector<WittElem> v(c.size() / s);
    for (size_t i = 0; i < v.size(); ++i)
        v[i] = r.from_coeffs(std::vector<i64>(c.begin() + i * s, c.begin() + (i + 1) * s));
    return v;
}

ZMat linear_map_matrix(const WittRing& r, int in_dim, int out_dim,
                       const std::function<std::vector<WittElem>(const std::vector<WittElem>&)>& f) {
    const int s = r.s();
    ZMat Z(out_dim * s, in_dim * s);
    for (int j = 0; j < in_dim; ++j)
        for (int t = 0; t < s; ++t) {
            std::vector<WittElem> e(in_dim, r.zero());
            e[j].coeffs[t] = 1;
            auto col = to_coords(f(e));
            for (int i = 0; i < out_dim * s; ++i) Z(i, j * s + t) = col[i];
        }
    return Z;
}

}  // namespace fcrystal
