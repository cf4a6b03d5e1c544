#include "parabtk/lp.hpp"

#include <stdexcept>

namespace parabtk {

namespace {

struct Tableau {
    int m = 0, cols = 0;
    Mat<Rat> a;               // m rows, cols entries
    std::vector<Rat> rhs;     // m
    std::vector<Rat> obj;     // cols, stores -reduced cost
    Rat objval;
    std::vector<int> basis;   // m

    void pivot(int r, int c) {
        const Rat inv = a[r][c].inv();
        for (auto& x : a[r]) x *= inv;
        rhs[r] *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            const Rat f = a[i][c];
            for (int j = 0; j < cols; ++j)
                if (!a[r][j].is_zero()) a[i][j] -= f * a[r][j];
            rhs[i] -= f * rhs[r];
        }
        if (!obj[c].is_zero()) {
            const Rat f = obj[c];
            for (int j = 0; j < cols; ++j)
                if (!a[r][j].is_zero()) obj[j] -= f * a[r][j];
            objval -= f * rhs[r];
        }
        basis[r] = c;
    }

    // returns false when unbounded
    bool run(const std::vector<bool>& allowed) {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < cols; ++j)
                if (allowed[j] && obj[j].sign() < 0) { enter = j; break; }
            if (enter < 0) return true;
            int leave = -1;
            Rat best;
            for (int i = 0; i < m; ++i) {
                if (a[i][enter].sign() <= 0) continue;
                Rat ratio = rhs[i] / a[i][enter];
                if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LPResult lp_maximize(const std::vector<Rat>& c, const Mat<Rat>& A, const std::vector<Rat>& b) {
    const int n = int(c.size()), m = int(A.size());
    if (int(b.size()) != m) throw std::invalid_argument("lp: rhs size mismatch");
    // columns: x (n), slacks (m), artificial (1)
    Tableau T;
    T.m = m;
    T.cols = n + m + 1;
    const int art = n + m;
    T.a.assign(m, std::vector<Rat>(T.cols, Rat(0)));
    T.rhs = b;
    T.basis.resize(m);
    for (int i = 0; i < m; ++i) {
        if (int(A[i].size()) != n) throw std::invalid_argument("lp: row size mismatch");
        for (int j = 0; j < n; ++j) T.a[i][j] = A[i][j];
        T.a[i][n + i] = Rat(1);
        T.a[i][art] = Rat(-1);
        T.basis[i] = n + i;
    }
    std::vector<bool> allowed(T.cols, true);
    int minrow = -1;
    for (int i = 0; i < m; ++i)
        if (b[i].sign() < 0 && (minrow < 0 || b[i] < b[minrow])) minrow = i;

    LPResult res;
    if (minrow >= 0) {
        // phase one: maximize -x0
        T.obj.assign(T.cols, Rat(0));
        T.obj[art] = Rat(1);
        T.objval = Rat(0);
        T.pivot(minrow, art);
        T.run(allowed);
        if (T.objval.sign() != 0) {
            res.status = LPResult::Status::Infeasible;
            return res;
        }
        for (int i = 0; i < m; ++i) {
            if (T.basis[i] != art) continue;
            for (int j = 0; j < art; ++j)
                if (!T.a[i][j].is_zero()) {
                    T.pivot(i, j);
                    break;
                }
        }
    }
    allowed[art] = false;
    for (int i = 0; i < m; ++i) T.a[i][art] = Rat(0);
    // phase two objective in terms of the current basis
    T.obj.assign(T.cols, Rat(0));
    T.objval = Rat(0);
    for (int j = 0; j < n; ++j) T.obj[j] = -c[j];
    for (int i = 0; i < m; ++i) {
        const int bj = T.basis[i];
        if (bj < n && !c[bj].is_zero()) {
            const Rat f = T.obj[bj];
            for (int j = 0; j < T.cols; ++j)
                if (!T.a[i][j].is_zero()) T.obj[j] -= f * T.a[i][j];
            T.objval -= f * T.rhs[i];
        }
    }
    if (!T.run(allowed)) {
        res.status = LPResult::Status::Unbounded;
        return res;
    }
    res.status = LPResult::Status::Optimal;
    res.x.assign(n, Rat(0));
    for (int i = 0; i < m; ++i)
        if (T.basis[i] < n) res.x[T.basis[i]] = T.rhs[i];
    res.value = T.objval;
    return res;
}

}  // namespace parabtk
