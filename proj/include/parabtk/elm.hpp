#pragma once
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stability.hpp"

namespace parabtk {

// polynomial 2-vectors in the affine chart, columns of a frame
template <class K>
using PolyVec = std::array<Poly<K>, 2>;

namespace detail {

template <class K>
int weighted_degree(const PolyVec<K>& v, const SplitType& E) {
    int d = std::numeric_limits<int>::min();
    if (!v[0].is_zero()) d = std::max(d, v[0].deg() - E.d1);
    if (!v[1].is_zero()) d = std::max(d, v[1].deg() - E.d2);
    return d;
}

template <class K>
std::array<K, 2> leading_vector(const PolyVec<K>& v, const SplitType& E) {
    const int D = weighted_degree(v, E);
    return {v[0].coeff(D + E.d1), v[1].coeff(D + E.d2)};
}

template <class K>
bool is_zero_vec(const PolyVec<K>& v) {
    return v[0].is_zero() && v[1].is_zero();
}

}  // namespace detail

// column reduction of a rank-2 lattice in k[x]^2 with respect to the weights of E;
// returns two columns whose leading vectors are independent
template <class K>
std::array<PolyVec<K>, 2> column_reduce(std::vector<PolyVec<K>> cols, const SplitType& E) {
    using detail::is_zero_vec;
    using detail::leading_vector;
    using detail::weighted_degree;
    while (true) {
        cols.erase(std::remove_if(cols.begin(), cols.end(), [](const PolyVec<K>& v) { return is_zero_vec(v); }), cols.end());
        if (cols.size() < 2) throw std::logic_error("lattice does not have rank two");
        // sort by weighted degree, largest first
        std::sort(cols.begin(), cols.end(), [&](const PolyVec<K>& a, const PolyVec<K>& b) { return weighted_degree(a, E) > weighted_degree(b, E); });
        bool changed = false;
        // find a column whose leading vector lies in the span of lower-or-equal degree leading vectors
        for (size_t a = 0; a < cols.size() && !changed; ++a) {
            const int Da = weighted_degree(cols[a], E);
            const auto la = leading_vector(cols[a], E);
            std::vector<size_t> lower;
            for (size_t b = 0; b < cols.size(); ++b)
                if (b != a && weighted_degree(cols[b], E) <= Da) lower.push_back(b);
            // solve la = sum c_b lb over lower columns (at most two are needed)
            Mat<K> m;
            for (size_t b : lower) {
                auto lb = leading_vector(cols[b], E);
                m.push_back({lb[0], lb[1]});
            }
            if (m.empty()) continue;
            Mat<K> aug = m;
            aug.push_back({la[0], la[1]});
            if (rank(aug, 2) != rank(m, 2)) continue;
            // coefficients via nullspace of the transposed system
            Mat<K> sys(2, Vec<K>(lower.size() + 1, K(0)));
            for (size_t j = 0; j < lower.size(); ++j) {
                auto lb = leading_vector(cols[lower[j]], E);
                sys[0][j] = lb[0];
                sys[1][j] = lb[1];
            }
            sys[0][lower.size()] = la[0];
            sys[1][lower.size()] = la[1];
            for (const auto& ns : nullspace(sys, int(lower.size()) + 1)) {
                if (ns.back().is_zero()) continue;
                const K scale = -ns.back().inv();
                // cancel the leading term: la = sum c_j lb_j
                PolyVec<K> w = cols[a];
                for (size_t j = 0; j < lower.size(); ++j) {
                    if (ns[j].is_zero()) continue;
                    const K cj = ns[j] * scale;  // la = sum cj lb_j
                    const int shift = Da - weighted_degree(cols[lower[j]], E);
                    for (int r = 0; r < 2; ++r) w[r] = w[r] - cj * cols[lower[j]][r].shift_up(shift);
                }
                cols[a] = w;
                changed = true;
                break;
            }
        }
        if (!changed) break;
    }
    if (cols.size() != 2) throw std::logic_error("column reduction left " + std::to_string(cols.size()) + " columns");
    return {cols[0], cols[1]};
}

// a frame O(d1') + O(d2') -> E given by two columns
template <class K>
struct Frame {
    SplitType E;            // ambient splitting type
    SplitType Enew;         // splitting type of the lattice
    std::array<PolyVec<K>, 2> col;

    Mat2<K> matrix() const {
        Mat2<K> m;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) m[r][c] = col[c][r];
        return m;
    }
};

// frame of a lattice: column reduced, d1' <= d2', leading vectors normalized
// (frames are compared through find_isomorphism, not through a canonical form)
template <class K>
Frame<K> frame_of_lattice(const std::vector<PolyVec<K>>& gens, const SplitType& E) {
    auto cols = column_reduce(gens, E);
    int D0 = detail::weighted_degree(cols[0], E), D1 = detail::weighted_degree(cols[1], E);
    // new degree of a column is minus its weighted degree
    if (D0 < D1) {
        std::swap(cols[0], cols[1]);
        std::swap(D0, D1);
    }
    auto l0 = detail::leading_vector(cols[0], E), l1 = detail::leading_vector(cols[1], E);
    if (D0 == D1) {
        // constant change of basis making the leading matrix the identity
        const K det = l0[0] * l1[1] - l1[0] * l0[1];
        const K i00 = l1[1] / det, i01 = -l1[0] / det, i10 = -l0[1] / det, i11 = l0[0] / det;
        PolyVec<K> a, b;
        for (int r = 0; r < 2; ++r) {
            a[r] = i00 * cols[0][r] + i10 * cols[1][r];
            b[r] = i01 * cols[0][r] + i11 * cols[1][r];
        }
        cols = {a, b};
    } else {
        for (int c = 0; c < 2; ++c) {
            auto l = detail::leading_vector(cols[c], E);
            const K s = (l[0].is_zero() ? l[1] : l[0]).inv();
            for (int r = 0; r < 2; ++r) cols[c][r] = s * cols[c][r];
        }
    }
    Frame<K> F;
    F.E = E;
    F.col = cols;
    F.Enew = {-detail::weighted_degree(cols[0], E), -detail::weighted_degree(cols[1], E)};
    return F;
}

namespace detail {

template <class K>
PolyVec<K> local_to_global(const TruncElement<K>& g, const K& t) {
    // f = x - t
    return {g.c[0].shift(-t), g.c[1].shift(-t)};
}

// lattice of sections whose restriction at t lies in l
template <class K>
std::vector<PolyVec<K>> lattice_generators(const TruncSubmodule<K>& l, const K& t) {
    const int n = l.order();
    std::vector<PolyVec<K>> g;
    for (const auto& v : l.generators()) g.push_back(local_to_global(v, t));
    const Poly<K> fn = Poly<K>::linear_power(t, n);
    g.push_back({fn, Poly<K>()});
    g.push_back({Poly<K>(), fn});
    return g;
}

template <class K>
Mat2<K> adjugate(const Mat2<K>& m) {
    Mat2<K> a;
    a[0][0] = m[1][1];
    a[1][1] = m[0][0];
    a[0][1] = -m[0][1];
    a[1][0] = -m[1][0];
    return a;
}

// local expansion at t of G^{-1} v, given that the result is regular at t
template <class K>
TruncElement<K> frame_coordinates(const Frame<K>& F, const PolyVec<K>& v, const K& t, int n) {
    const Mat2<K> G = F.matrix();
    const Mat2<K> A = adjugate(G);
    Poly<K> det = mat2_det(G);
    PolyVec<K> w{A[0][0] * v[0] + A[0][1] * v[1], A[1][0] * v[0] + A[1][1] * v[1]};
    // expand around t and divide by det as a power series with possible pole cancellation
    Poly<K> dl = det.shift(t);
    const int vd = dl.valuation(std::numeric_limits<int>::max() / 2);
    Poly<K> unit = dl.shift_down(vd);
    Poly<K> uinv = unit.inverse_trunc(n);
    std::array<Poly<K>, 2> out;
    for (int r = 0; r < 2; ++r) {
        Poly<K> wl = w[r].shift(t);
        if (!wl.is_zero() && wl.valuation(std::numeric_limits<int>::max() / 2) < vd)
            throw std::logic_error("section is not regular in the new frame");
        out[r] = Poly<K>::mul_trunc(wl.shift_down(vd), uinv, n);
    }
    return TruncElement<K>(n, out[0], out[1]);
}

// exact global coordinates G^{-1} v for v in the lattice
template <class K>
PolyVec<K> frame_solve(const Frame<K>& F, const PolyVec<K>& v) {
    const Mat2<K> G = F.matrix();
    const Mat2<K> A = adjugate(G);
    Poly<K> det = mat2_det(G);
    PolyVec<K> out;
    for (int r = 0; r < 2; ++r) {
        Poly<K> w = A[r][0] * v[0] + A[r][1] * v[1];
        auto [q, rem] = w.divmod(det);
        if (!rem.is_zero()) throw std::logic_error("vector is not in the lattice");
        out[r] = q;
    }
    return out;
}

}  // namespace detail

template <class K>
struct ElmResult {
    RefinedParabolicBundle<K> bundle;
    Frame<K> frame;  // columns: new basis in old coordinates
    int point = 0;
};

template <class K>
ElmResult<K> elm_minus_with_frame(const RefinedParabolicBundle<K>& B, int i0) {
    if (i0 < 0 || i0 >= B.npoints()) throw std::out_of_range("point index out of range");
    const K t = B.D[i0].t;
    const int n = B.D[i0].n;
    const auto& s0 = B.s[i0];
    Frame<K> F = frame_of_lattice(detail::lattice_generators(s0.top(), t), B.E);
    ElmResult<K> R;
    R.frame = F;
    R.point = i0;
    R.bundle.E = F.Enew;
    R.bundle.D = B.D;
    R.bundle.s.resize(B.npoints());
    for (int i = 0; i < B.npoints(); ++i) {
        if (i == i0) continue;
        const int ni = B.D[i].n;
        std::vector<TruncSubmodule<K>> lv;
        for (int k = 0; k <= ni; ++k) {
            std::vector<TruncElement<K>> gens;
            for (const auto& g : B.s[i].level(k).generators())
                gens.push_back(detail::frame_coordinates(F, detail::local_to_global(g, B.D[i].t), B.D[i].t, ni));
            lv.push_back(TruncSubmodule<K>::from_generators(gens, ni));
        }
        R.bundle.s[i] = RefinedStructure<K>::from_levels(lv);
    }
    // (E')^{(n-k)} = (x-t)^k E^{(k)}
    std::vector<TruncSubmodule<K>> lv(n + 1);
    for (int k = 0; k <= n; ++k) {
        const Poly<K> fk = Poly<K>::linear_power(t, k);
        std::vector<TruncElement<K>> gens;
        for (const auto& g : detail::lattice_generators(s0.level(k), t))
            gens.push_back(detail::frame_coordinates(F, PolyVec<K>{fk * g[0], fk * g[1]}, t, n));
        lv[n - k] = TruncSubmodule<K>::from_generators(gens, n);
    }
    R.bundle.s[i0] = RefinedStructure<K>::from_levels(lv);
    R.bundle.validate();
    return R;
}

template <class K>
RefinedParabolicBundle<K> elm_minus(const RefinedParabolicBundle<K>& B, int i0) {
    return elm_minus_with_frame(B, i0).bundle;
}

// the subbundle L' of E' induced by L (saturation of L ∩ E')
template <class K>
LineSubbundle<K> induced_subbundle(const RefinedParabolicBundle<K>& B, const ElmResult<K>& R, const LineSubbundle<K>& L) {
    const int i0 = R.point;
    const K t = B.D[i0].t;
    const int n = B.D[i0].n;
    const int c = cyclic_intersection(B.s[i0].top(), restrict_at_point(B, L, i0));
    const Poly<K> fk = Poly<K>::linear_power(t, n - c);
    auto a = detail::frame_solve(R.frame, PolyVec<K>{fk * L.p, fk * L.q});
    return detail::saturate_column(R.bundle.E, a[0], a[1]);
}

// w'_{i0,k} = 1 - w_{i0,n-k+1}
inline Weights flip_weights(const Weights& w, int i0) {
    Weights o = w;
    const int n = int(w.w[i0].size());
    for (int k = 1; k <= n; ++k) o.at(i0, k) = Rat(1) - w.at(i0, n - k + 1);
    return o;
}

// tensor with O(m t_i): degrees shift, local data unchanged
template <class K>
RefinedParabolicBundle<K> twist(const RefinedParabolicBundle<K>& B, int m, int i = 0) {
    if (B.npoints() > 0 && (i < 0 || i >= B.npoints())) throw std::out_of_range("point index out of range");
    RefinedParabolicBundle<K> o = B;
    o.E.d1 += m;
    o.E.d2 += m;
    return o;
}

struct ParityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// degree-preserving elm at one even point or a pair with even total multiplicity
template <class K>
RefinedParabolicBundle<K> elm_named(const RefinedParabolicBundle<K>& B, const std::vector<int>& pts) {
    if (pts.empty() || pts.size() > 2) throw std::invalid_argument("elm needs one or two points");
    if (pts.size() == 2 && pts[0] == pts[1]) throw std::invalid_argument("elm points must differ");
    int tot = 0;
    for (int i : pts) {
        if (i < 0 || i >= B.npoints()) throw std::out_of_range("point index out of range");
        tot += B.D[i].n;
    }
    if (tot % 2) throw ParityError("elm needs even total multiplicity, got " + std::to_string(tot));
    RefinedParabolicBundle<K> R = B;
    for (int i : pts) R = elm_minus(R, i);
    return twist(R, tot / 2, pts[0]);
}

// ---- isomorphisms ----

// Hom space of refined bundles with the same splitting type and divisor
template <class K>
std::vector<Mat2<K>> hom_space(const RefinedParabolicBundle<K>& A, const RefinedParabolicBundle<K>& B) {
    if (A.E.d1 != B.E.d1 || A.E.d2 != B.E.d2 || A.npoints() != B.npoints()) return {};
    const int dd[2] = {A.E.d1, A.E.d2};
    std::array<std::array<int, 2>, 2> off{}, len{};
    int U = 0;
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
            off[j][k] = U;
            len[j][k] = std::max(0, dd[j] - dd[k] + 1);
            U += len[j][k];
        }
    auto basis_mat = [&](int u) {
        Mat2<K> m;
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                if (u >= off[j][k] && u < off[j][k] + len[j][k]) m[j][k] = Poly<K>::monomial(K(1), u - off[j][k]);
        return m;
    };
    Mat<K> rows;
    for (int i = 0; i < A.npoints(); ++i) {
        const int n = A.D[i].n;
        for (int k = 1; k <= n; ++k) {
            Mat<K> ann = detail::annihilator(B.s[i].level(k));
            for (const auto& g : A.s[i].level(k).generators()) {
                std::vector<Vec<K>> img(U);
                for (int u = 0; u < U; ++u) img[u] = apply_local(basis_mat(u), A.D[i].t, g).coords();
                for (const auto& phi : ann) {
                    Vec<K> row(U, K(0));
                    for (int u = 0; u < U; ++u)
                        for (int j = 0; j < 2 * n; ++j) row[u] += phi[j] * img[u][j];
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    std::vector<Vec<K>> ns;
    if (rows.empty()) {
        for (int u = 0; u < U; ++u) {
            Vec<K> v(U, K(0));
            v[u] = K(1);
            ns.push_back(v);
        }
    } else {
        ns = nullspace(rows, U);
    }
    std::vector<Mat2<K>> out;
    for (const auto& v : ns) {
        Mat2<K> m;
        for (int u = 0; u < U; ++u)
            if (!v[u].is_zero()) {
                auto b = basis_mat(u);
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k) m[j][k] += v[u] * b[j][k];
            }
        out.push_back(m);
    }
    return out;
}

// an automorphism of E carrying A's structures onto B's, if one exists
template <class K>
std::optional<Mat2<K>> find_isomorphism(const RefinedParabolicBundle<K>& A, const RefinedParabolicBundle<K>& B, uint64_t seed = 5) {
    if (A.E.d1 != B.E.d1 || A.E.d2 != B.E.d2 || A.npoints() != B.npoints()) return std::nullopt;
    for (int i = 0; i < A.npoints(); ++i)
        if (!(A.D[i].t == B.D[i].t) || A.D[i].n != B.D[i].n) return std::nullopt;
    auto H = hom_space(A, B);
    if (H.empty()) return std::nullopt;
    auto invertible = [](const Mat2<K>& m) {
        Poly<K> d = mat2_det(m);
        return d.deg() == 0;
    };
    auto combo = [&](const std::vector<K>& c) {
        Mat2<K> m;
        for (size_t u = 0; u < H.size(); ++u)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) m[j][k] += c[u] * H[u][j][k];
        return m;
    };
    for (const auto& h : H)
        if (invertible(h)) return h;
    std::mt19937_64 rng(seed);
    const int r = int(H.size());
    if constexpr (K::finite) {
        long total = 1;
        for (int u = 0; u < r && total <= 200000; ++u) total *= K::characteristic();
        if (total <= 200000) {
            std::vector<K> c(r);
            for (long idx = 1; idx < total; ++idx) {
                long x = idx;
                for (int u = 0; u < r; ++u) {
                    c[u] = K(x % long(K::characteristic()));
                    x /= long(K::characteristic());
                }
                auto m = combo(c);
                if (invertible(m)) return m;
            }
            return std::nullopt;
        }
    }
    std::vector<K> c(r);
    for (int it = 0; it < 32; ++it) {
        for (auto& x : c) x = random_element<K>(rng, 5 + it);
        auto m = combo(c);
        if (invertible(m)) return m;
    }
    return std::nullopt;
}

// structures transported by an automorphism of E
template <class K>
RefinedParabolicBundle<K> apply_automorphism(const RefinedParabolicBundle<K>& B, const Mat2<K>& A) {
    RefinedParabolicBundle<K> o = B;
    for (int i = 0; i < B.npoints(); ++i) {
        const int n = B.D[i].n;
        std::vector<TruncSubmodule<K>> lv;
        for (int k = 0; k <= n; ++k) {
            std::vector<TruncElement<K>> g;
            for (const auto& v : B.s[i].level(k).generators()) g.push_back(apply_local(A, B.D[i].t, v));
            lv.push_back(TruncSubmodule<K>::from_generators(g, n));
        }
        o.s[i] = RefinedStructure<K>::from_levels(lv);
    }
    return o;
}

template <class K>
bool same_data(const RefinedParabolicBundle<K>& A, const RefinedParabolicBundle<K>& B) {
    if (A.E.d1 != B.E.d1 || A.E.d2 != B.E.d2 || A.npoints() != B.npoints()) return false;
    for (int i = 0; i < A.npoints(); ++i)
        if (!(A.D[i].t == B.D[i].t) || A.D[i].n != B.D[i].n || !(A.s[i] == B.s[i])) return false;
    return true;
}

template <class K>
bool isomorphic(const RefinedParabolicBundle<K>& A, const RefinedParabolicBundle<K>& B) {
    auto m = find_isomorphism(A, B);
    return m && same_data(apply_automorphism(A, *m), B);
}

// elm∘elm at i0 in the normalized frame (x - t)^n Id; compare with twist(B, -n)
template <class K>
RefinedParabolicBundle<K> double_elm_normalized(const RefinedParabolicBundle<K>& B, int i0) {
    auto R1 = elm_minus_with_frame(B, i0);
    auto R2 = elm_minus_with_frame(R1.bundle, i0);
    const K t = B.D[i0].t;
    const int n = B.D[i0].n;
    // composite frame G1 G2 = (x - t)^n A with A in Aut(E)
    Mat2<K> G = mat2_mul(R1.frame.matrix(), R2.frame.matrix());
    const Poly<K> fn = Poly<K>::linear_power(t, n);
    Mat2<K> A;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            auto [q, rem] = G[r][c].divmod(fn);
            if (!rem.is_zero()) throw std::logic_error("double elm frame is not divisible by (x-t)^n");
            A[r][c] = q;
        }
    if (mat2_det(A).deg() != 0) throw std::logic_error("double elm frame is not an automorphism");
    return apply_automorphism(R2.bundle, A);
}

// ---- the combinatorial type transform ----

struct TypeTransformRow {
    int k;
    int b, X1, X2, X1b, X2b;
    YoungType type;  // of l'_{n-k}
};

inline std::vector<TypeTransformRow> type_transform_rows(const StandardTableau& tab) {
    const int n = tab.n;
    std::vector<int> a1(n + 1), a2(n + 1), b(n + 1);
    for (int k = 0; k <= n; ++k) {
        a1[k] = tab.shape(k).a1;
        a2[k] = tab.a2[k];
    }
    b[n] = a1[n];
    for (int k = n - 1; k >= 0; --k) b[k] = std::min(b[k + 1], a1[k]);
    std::vector<TypeTransformRow> rows;
    for (int k = 0; k <= n; ++k) {
        TypeTransformRow r;
        r.k = k;
        r.b = b[k];
        r.X1 = a1[n] + a2[n] - a1[k] - a2[k];
        r.X2 = a2[n] - a2[k];
        r.X1b = r.X1 + a1[k] - b[k];
        r.X2b = r.X2 - a1[k] + b[k];
        if (r.X2b >= r.X1b)
            r.type = {r.X2b - r.X1b, r.X1b, n};
        else
            r.type = {r.X1b - r.X2b, r.X2b, n};
        rows.push_back(r);
    }
    return rows;
}

inline StandardTableau type_transform_formula(const StandardTableau& tab) {
    if (!tab.valid()) throw std::invalid_argument("not a standard tableau");
    StandardTableau out;
    out.n = tab.n;
    out.a2.assign(tab.n + 1, 0);
    for (const auto& r : type_transform_rows(tab)) {
        if (r.type.length() != tab.n - r.k) throw std::logic_error("type transform produced a wrong length");
        out.a2[tab.n - r.k] = r.type.a2;
    }
    if (!out.valid()) throw std::logic_error("type transform produced an invalid tableau");
    return out;
}

}  // namespace parabtk
