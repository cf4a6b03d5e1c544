#pragma once
#include <stdexcept>
#include <vector>

#include "field.hpp"

namespace parabtk {

template <class K>
using Vec = std::vector<K>;
template <class K>
using Mat = std::vector<std::vector<K>>;  // row-major

// in-place reduced row echelon form, returns pivot columns
template <class K>
std::vector<int> rref(Mat<K>& m, int ncols) {
    std::vector<int> piv;
    int r = 0;
    const int rows = int(m.size());
    for (int c = 0; c < ncols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (!m[i][c].is_zero()) { p = i; break; }
        if (p < 0) continue;
        std::swap(m[p], m[r]);
        const K inv = m[r][c].inv();
        for (int j = c; j < ncols; ++j) m[r][j] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            const K f = m[i][c];
            for (int j = c; j < ncols; ++j) m[i][j] -= f * m[r][j];
        }
        piv.push_back(c);
        ++r;
    }
    m.resize(r);
    return piv;
}

template <class K>
int rank(Mat<K> m, int ncols) {
    return int(rref(m, ncols).size());
}

// basis of {x : m x = 0}
template <class K>
std::vector<Vec<K>> nullspace(Mat<K> m, int ncols) {
    auto piv = rref(m, ncols);
    std::vector<bool> is_piv(ncols, false);
    for (int c : piv) is_piv[c] = true;
    std::vector<Vec<K>> out;
    for (int fc = 0; fc < ncols; ++fc) {
        if (is_piv[fc]) continue;
        Vec<K> v(ncols, K(0));
        v[fc] = K(1);
        for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][fc];
        out.push_back(std::move(v));
    }
    return out;
}

// row space basis (reduced)
template <class K>
Mat<K> row_basis(Mat<K> m, int ncols) {
    rref(m, ncols);
    return m;
}

template <class K>
Mat<K> transpose(const Mat<K>& m, int ncols) {
    Mat<K> t(ncols, Vec<K>(m.size(), K(0)));
    for (size_t i = 0; i < m.size(); ++i)
        for (int j = 0; j < ncols; ++j) t[j][i] = m[i][j];
    return t;
}

template <class K>
bool in_row_span(const Mat<K>& basis, const Vec<K>& v, int ncols) {
    Mat<K> m = basis;
    const int r0 = rank(m, ncols);
    m.push_back(v);
    return rank(m, ncols) == r0;
}

}  // namespace parabtk
