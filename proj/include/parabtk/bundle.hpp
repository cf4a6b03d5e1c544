#pragma once
#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "filtration.hpp"

namespace parabtk {

template <class K>
struct MarkedPoint {
    K t;
    int n = 1;
};

struct SplitType {
    int d1 = 0, d2 = 0;
    int degree() const { return d1 + d2; }
};

template <class K>
struct RefinedParabolicBundle {
    SplitType E;
    std::vector<MarkedPoint<K>> D;
    std::vector<RefinedStructure<K>> s;

    int d() const { return E.degree(); }
    int n() const {
        int t = 0;
        for (const auto& p : D) t += p.n;
        return t;
    }
    int npoints() const { return int(D.size()); }
    bool is_parabolic() const {
        for (const auto& x : s)
            if (!x.top_is_free()) return false;
        return true;
    }
    void validate() const {
        if (E.d1 > E.d2) throw InvalidStructure("splitting type needs d1 <= d2");
        if (s.size() != D.size()) throw InvalidStructure("one structure per marked point is required");
        for (size_t i = 0; i < D.size(); ++i) {
            if (D[i].n < 1) throw InvalidStructure("multiplicities must be positive");
            for (size_t j = 0; j < i; ++j)
                if (D[i].t == D[j].t) throw InvalidStructure("duplicate marked point " + D[i].t.str());
            if (s[i].order() != D[i].n) throw InvalidStructure("structure order differs from multiplicity at point " + std::to_string(i));
        }
    }
};

// section (p, q) of O(d1-e) + O(d2-e) spanning a line subbundle O(e)
template <class K>
struct LineSubbundle {
    int e = 0;
    Poly<K> p, q;

    bool is_saturated(const SplitType& E) const {
        if ((!p.is_zero() && p.deg() > E.d1 - e) || (!q.is_zero() && q.deg() > E.d2 - e)) return false;
        if (p.is_zero() && q.is_zero()) return false;
        if (Poly<K>::gcd(p, q).deg() != 0) return false;
        return (!p.is_zero() && p.deg() == E.d1 - e) || (!q.is_zero() && q.deg() == E.d2 - e);
    }
    std::string str() const { return "O(" + std::to_string(e) + ") via (" + p.str() + ", " + q.str() + ")"; }
};

struct SaturationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class K>
TruncElement<K> restrict_at_point(const RefinedParabolicBundle<K>& B, const LineSubbundle<K>& L, int i) {
    if (!L.is_saturated(B.E)) throw SaturationError("line subbundle is not saturated: " + L.str());
    const auto& pt = B.D.at(i);
    return TruncElement<K>(pt.n, L.p.shift(pt.t), L.q.shift(pt.t));
}

// c[i][k] = length(l_{i,k} ∩ L|), k = 0..n_i
struct IntersectionProfile {
    std::vector<std::vector<int>> c;

    int npoints() const { return int(c.size()); }
    int order(int i) const { return int(c[i].size()) - 1; }
    int delta(int i, int k) const { return c[i][k] - c[i][k - 1]; }
    int eps(int i, int k) const { return delta(i, k) ? -1 : 1; }
    int m(int i) const { return c[i].back(); }
    int total_m() const {
        int s = 0;
        for (size_t i = 0; i < c.size(); ++i) s += m(int(i));
        return s;
    }
    // eps_{i,1..n_i}
    std::vector<int> eps_vector(int i) const {
        std::vector<int> v;
        for (int k = 1; k <= order(i); ++k) v.push_back(eps(i, k));
        return v;
    }
    friend bool operator==(const IntersectionProfile& a, const IntersectionProfile& b) { return a.c == b.c; }
    friend bool operator<(const IntersectionProfile& a, const IntersectionProfile& b) { return a.c < b.c; }

    // written (eps_n, ..., eps_1)
    std::string eps_str(int i) const {
        std::string s = "(";
        for (int k = order(i); k >= 1; --k) s += eps(i, k) > 0 ? "+" : "-";
        return s + ")";
    }
};

struct NValue {
    int N = 0;
    int kmax = 0;
    bool in_I_plus = false;
};

// prefix sums from the deepest level k = 1
inline NValue n_value(const std::vector<int>& eps) {
    NValue r;
    int s = 0;
    bool first = true;
    for (size_t k = 0; k < eps.size(); ++k) {
        s += eps[k];
        if (first || s >= r.N) {
            r.N = s;
            r.kmax = int(k) + 1;
            first = false;
        }
    }
    r.in_I_plus = r.N > 0;
    return r;
}

// largest s <= n with f^{n-s} v in l
template <class K>
int cyclic_intersection(const TruncSubmodule<K>& l, const TruncElement<K>& v) {
    const int n = v.n;
    int s = 0;
    while (s < n && l.contains(v.f_pow(n - s - 1))) ++s;
    return s;
}

template <class K>
IntersectionProfile intersection_profile(const RefinedParabolicBundle<K>& B, const LineSubbundle<K>& L) {
    IntersectionProfile P;
    P.c.resize(B.D.size());
    for (size_t i = 0; i < B.D.size(); ++i) {
        const auto v = restrict_at_point(B, L, int(i));
        const int n = B.D[i].n;
        P.c[i].assign(n + 1, 0);
        for (int k = 1; k <= n; ++k) P.c[i][k] = cyclic_intersection(B.s[i].level(k), v);
    }
    return P;
}

// linear-algebra oracle for c_{i,k}: dim(l ∩ <v>) over the base field
template <class K>
IntersectionProfile intersection_profile_oracle(const RefinedParabolicBundle<K>& B, const LineSubbundle<K>& L) {
    IntersectionProfile P;
    P.c.resize(B.D.size());
    for (size_t i = 0; i < B.D.size(); ++i) {
        const auto v = restrict_at_point(B, L, int(i));
        const int n = B.D[i].n;
        Mat<K> cyc = oracle_span<K>({v}, n);
        P.c[i].assign(n + 1, 0);
        for (int k = 1; k <= n; ++k) {
            Mat<K> l = B.s[i].level(k).span_basis();
            Mat<K> sum = l;
            sum.insert(sum.end(), cyc.begin(), cyc.end());
            P.c[i][k] = int(l.size()) + int(cyc.size()) - rank(sum, 2 * n);
        }
    }
    return P;
}

template <class K>
struct ProfileWitness {
    int e = 0;
    IntersectionProfile profile;
    LineSubbundle<K> L;
};

struct ProfileOptions {
    uint64_t seed = 20240601;
    long fp_cap = 20000;  // max elements scanned per linear system over F_p
    int q_tries = 8;  // exact profiles are Zariski open in their linear stratum
};

namespace detail {

template <class K>
Mat<K> annihilator(const TruncSubmodule<K>& l) {
    const int n = l.order();
    Mat<K> b = l.span_basis();
    if (b.empty()) {
        Mat<K> id(2 * n, Vec<K>(2 * n, K(0)));
        for (int i = 0; i < 2 * n; ++i) id[i][i] = K(1);
        return id;
    }
    return nullspace(b, 2 * n);
}

// iterate over nonzero vectors of span(basis) up to scaling, calling fn until it returns true
template <class K, class Fn>
bool scan_span(const std::vector<Vec<K>>& basis, int dim, std::mt19937_64& rng, const ProfileOptions& opt, Fn&& fn) {
    const int r = int(basis.size());
    if (r == 0) return false;
    auto combine = [&](const std::vector<K>& coef) {
        Vec<K> x(dim, K(0));
        for (int j = 0; j < r; ++j)
            if (!coef[j].is_zero())
                for (int u = 0; u < dim; ++u) x[u] += coef[j] * basis[j][u];
        return x;
    };
    if constexpr (K::finite) {
        const long p = K::characteristic();
        long total = 1;
        bool big = false;
        for (int j = 0; j < r; ++j) {
            total *= p;
            if (total > opt.fp_cap * p) { big = true; break; }
        }
        if (!big) {
            std::vector<K> coef(r);
            for (long idx = 1; idx < total; ++idx) {
                long t = idx;
                int lead = -1;
                bool skip = false;
                for (int j = 0; j < r; ++j) {
                    long dgt = t % p;
                    t /= p;
                    coef[j] = K(dgt);
                    if (dgt != 0 && lead < 0) {
                        lead = j;
                        if (dgt != 1) skip = true;
                    }
                }
                if (skip) continue;
                if (fn(combine(coef))) return true;
            }
            return false;
        }
        std::vector<K> coef(r);
        for (long it = 0; it < opt.fp_cap; ++it) {
            for (auto& c : coef) c = random_element<K>(rng);
            if (fn(combine(coef))) return true;
        }
        return false;
    } else {
        std::vector<K> coef(r);
        for (int it = 0; it < opt.q_tries; ++it) {
            const int h = 3 + 4 * it;
            for (auto& c : coef) c = K(long(rng() % (2 * h + 1)) - h);
            if (fn(combine(coef))) return true;
        }
        return false;
    }
}

}  // namespace detail

// unknown layout: p coefficients 0..d1-e, then q coefficients 0..d2-e
template <class K>
LineSubbundle<K> section_from_coords(const SplitType& E, int e, const Vec<K>& x) {
    const int np = std::max(0, E.d1 - e + 1), nq = std::max(0, E.d2 - e + 1);
    LineSubbundle<K> L;
    L.e = e;
    L.p = Poly<K>(std::vector<K>(x.begin(), x.begin() + np));
    L.q = Poly<K>(std::vector<K>(x.begin() + np, x.begin() + np + nq));
    return L;
}

template <class K>
std::vector<ProfileWitness<K>> achievable_profiles(const RefinedParabolicBundle<K>& B, int e, const ProfileOptions& opt = {}) {
    std::vector<ProfileWitness<K>> out;
    const SplitType E = B.E;
    if (e > E.d2) return out;
    const int np = std::max(0, E.d1 - e + 1), nq = std::max(0, E.d2 - e + 1);
    const int U = np + nq;
    const int P = B.npoints();
    std::mt19937_64 rng(opt.seed ^ (uint64_t(e + 1000) * 0x9E3779B97F4A7C15ULL));

    // restrictions of basis sections, per point
    std::vector<std::vector<TruncElement<K>>> vb(P);
    for (int i = 0; i < P; ++i) {
        const int n = B.D[i].n;
        for (int u = 0; u < U; ++u) {
            Poly<K> mono = Poly<K>::monomial(K(1), u < np ? u : u - np).shift(B.D[i].t);
            vb[i].push_back(u < np ? TruncElement<K>(n, mono, {}) : TruncElement<K>(n, {}, mono));
        }
    }
    // cond[i][k][s]: rows forcing f^{n-s} v in l_{i,k}
    std::vector<std::vector<std::vector<Mat<K>>>> cond(P);
    for (int i = 0; i < P; ++i) {
        const int n = B.D[i].n;
        cond[i].resize(n + 1);
        for (int k = 1; k <= n; ++k) {
            Mat<K> ann = detail::annihilator(B.s[i].level(k));
            cond[i][k].resize(n + 1);
            for (int s = 1; s <= n; ++s) {
                for (const auto& phi : ann) {
                    Vec<K> row(U, K(0));
                    for (int u = 0; u < U; ++u) {
                        auto cs = vb[i][u].f_pow(n - s).coords();
                        K acc(0);
                        for (int j = 0; j < 2 * n; ++j) acc += phi[j] * cs[j];
                        row[u] = acc;
                    }
                    cond[i][k][s].push_back(std::move(row));
                }
            }
        }
    }
    // all step vectors
    int total_bits = 0;
    for (const auto& p : B.D) total_bits += p.n;
    std::map<IntersectionProfile, bool> seen;
    for (long mask = 0; mask < (1L << total_bits); ++mask) {
        IntersectionProfile target;
        target.c.resize(P);
        Mat<K> rows;
        int bit = 0;
        for (int i = 0; i < P; ++i) {
            const int n = B.D[i].n;
            target.c[i].assign(n + 1, 0);
            for (int k = 1; k <= n; ++k, ++bit) {
                target.c[i][k] = target.c[i][k - 1] + int((mask >> bit) & 1);
                const int s = target.c[i][k];
                if (s > 0) rows.insert(rows.end(), cond[i][k][s].begin(), cond[i][k][s].end());
            }
        }
        std::vector<Vec<K>> W;
        if (rows.empty()) {
            for (int u = 0; u < U; ++u) {
                Vec<K> v(U, K(0));
                v[u] = K(1);
                W.push_back(v);
            }
        } else {
            W = nullspace(rows, U);
        }
        if (W.empty()) continue;
        ProfileWitness<K> found;
        bool ok = detail::scan_span<K>(W, U, rng, opt, [&](const Vec<K>& x) {
            LineSubbundle<K> L = section_from_coords(E, e, x);
            if (!L.is_saturated(E)) return false;
            IntersectionProfile pr = intersection_profile(B, L);
            if (!(pr == target)) return false;
            found = {e, pr, L};
            return true;
        });
        if (ok && !seen.count(target)) {
            seen[target] = true;
            out.push_back(found);
        }
    }
    return out;
}

// exhaustive oracle over F_p: every saturated section of degree e
template <class K>
std::vector<IntersectionProfile> exhaustive_profiles(const RefinedParabolicBundle<K>& B, int e) {
    static_assert(K::finite, "exhaustive profiles need a finite field");
    std::vector<IntersectionProfile> out;
    if (e > B.E.d2) return out;
    const int np = std::max(0, B.E.d1 - e + 1), nq = std::max(0, B.E.d2 - e + 1);
    const int U = np + nq;
    const long p = K::characteristic();
    long total = 1;
    for (int j = 0; j < U; ++j) total *= p;
    std::map<IntersectionProfile, bool> seen;
    Vec<K> x(U);
    for (long idx = 1; idx < total; ++idx) {
        long t = idx;
        for (int j = 0; j < U; ++j) {
            x[j] = K(t % p);
            t /= p;
        }
        auto L = section_from_coords(B.E, e, x);
        if (!L.is_saturated(B.E)) continue;
        auto pr = intersection_profile(B, L);
        if (!seen.count(pr)) {
            seen[pr] = true;
            out.push_back(pr);
        }
    }
    return out;
}

// degree ranges for the "for every subbundle" quantifiers:
// Stab >= d - 2e - n > 0 once e < (d-n)/2, so lower degrees never matter
inline int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
inline int ceil_div(int a, int b) { return -floor_div(-a, b); }

template <class K>
int stability_degree_min(const RefinedParabolicBundle<K>& B) {
    return ceil_div(B.d() - B.n(), 2) - 1;
}
template <class K>
int tame_degree_min(const RefinedParabolicBundle<K>& B) {
    return ceil_div(B.d(), 2);
}

template <class K>
std::vector<ProfileWitness<K>> profiles_in_range(const RefinedParabolicBundle<K>& B, int emin, int emax, const ProfileOptions& opt = {}) {
    std::vector<ProfileWitness<K>> all;
    for (int e = emin; e <= emax; ++e) {
        auto v = achievable_profiles(B, e, opt);
        all.insert(all.end(), v.begin(), v.end());
    }
    return all;
}

// ---- endomorphisms ----

template <class K>
using Mat2 = std::array<std::array<Poly<K>, 2>, 2>;

template <class K>
Mat2<K> mat2_identity() {
    Mat2<K> m;
    m[0][0] = Poly<K>(K(1));
    m[1][1] = Poly<K>(K(1));
    return m;
}

template <class K>
Mat2<K> mat2_mul(const Mat2<K>& a, const Mat2<K>& b) {
    Mat2<K> r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return r;
}

template <class K>
Poly<K> mat2_det(const Mat2<K>& a) {
    return a[0][0] * a[1][1] - a[0][1] * a[1][0];
}

// A(t + f) applied to a local element
template <class K>
TruncElement<K> apply_local(const Mat2<K>& A, const K& t, const TruncElement<K>& v) {
    const int n = v.n;
    Poly<K> r0 = Poly<K>::mul_trunc(A[0][0].shift(t), v.c[0], n) + Poly<K>::mul_trunc(A[0][1].shift(t), v.c[1], n);
    Poly<K> r1 = Poly<K>::mul_trunc(A[1][0].shift(t), v.c[0], n) + Poly<K>::mul_trunc(A[1][1].shift(t), v.c[1], n);
    return TruncElement<K>(n, r0, r1);
}

enum class EndoLevel { TopOnly, FullChain };

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class K>
std::vector<Mat2<K>> endomorphism_space(const RefinedParabolicBundle<K>& B, EndoLevel level) {
    if (level == EndoLevel::TopOnly && !B.is_parabolic())
        throw PreconditionError("TopOnly endomorphisms need free top levels");
    const int dd[2] = {B.E.d1, B.E.d2};
    // entry (j,k) has degree <= d_j - d_k
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
    for (int i = 0; i < B.npoints(); ++i) {
        const int n = B.D[i].n;
        const int kmin = level == EndoLevel::TopOnly ? n : 1;
        for (int k = kmin; k <= n; ++k) {
            const auto& l = B.s[i].level(k);
            Mat<K> ann = detail::annihilator(l);
            for (const auto& g : l.generators()) {
                std::vector<Vec<K>> img(U);
                for (int u = 0; u < U; ++u) img[u] = apply_local(basis_mat(u), B.D[i].t, g).coords();
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

template <class K>
struct Decomposition {
    LineSubbundle<K> L1, L2;
    Mat2<K> idempotent;
};

template <class K>
struct DecomposabilityResult {
    bool decomposable = false;   // over the base field
    bool geometric = false;      // some endomorphism has distinct eigenvalues
    std::optional<Decomposition<K>> witness;
};

namespace detail {
template <class K>
K mat2_trace_const(const Mat2<K>& a) {
    return (a[0][0] + a[1][1]).coeff(0);
}
template <class K>
K mat2_det_const(const Mat2<K>& a) {
    return mat2_det(a).coeff(0);
}
template <class K>
K discriminant(const Mat2<K>& a) {
    const K t = mat2_trace_const(a), d = mat2_det_const(a);
    if constexpr (K::finite) {
        if (K::characteristic() == 2) return t;  // separable iff trace nonzero
    }
    return t * t - K(4) * d;
}

// saturate a column (polynomial vector) to a line subbundle
template <class K>
LineSubbundle<K> saturate_column(const SplitType& E, Poly<K> p, Poly<K> q) {
    Poly<K> g = Poly<K>::gcd(p, q);
    p = p.divmod(g).first;
    q = q.divmod(g).first;
    // smallest twist that makes (p,q) a section of E(-e)
    int e = std::numeric_limits<int>::max();
    if (!p.is_zero()) e = std::min(e, E.d1 - p.deg());
    if (!q.is_zero()) e = std::min(e, E.d2 - q.deg());
    return {e, p, q};
}

template <class K>
std::optional<Decomposition<K>> finish_split(const RefinedParabolicBundle<K>& B, const Mat2<K>& P) {
    // image of P and of I - P; pick a nonzero column of each
    Mat2<K> Q = mat2_identity<K>();
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) Q[j][k] -= P[j][k];
    auto col = [](const Mat2<K>& M) -> std::pair<Poly<K>, Poly<K>> {
        for (int c = 0; c < 2; ++c)
            if (!M[0][c].is_zero() || !M[1][c].is_zero()) return {M[0][c], M[1][c]};
        return {{}, {}};
    };
    auto [p1, q1] = col(P);
    auto [p2, q2] = col(Q);
    if ((p1.is_zero() && q1.is_zero()) || (p2.is_zero() && q2.is_zero())) return std::nullopt;
    Decomposition<K> dcmp;
    dcmp.L1 = saturate_column(B.E, p1, q1);
    dcmp.L2 = saturate_column(B.E, p2, q2);
    dcmp.idempotent = P;
    return dcmp;
}
template <class K>
std::optional<Decomposition<K>> split_by(const RefinedParabolicBundle<K>& B, const Mat2<K>& A) {
    const K t = mat2_trace_const(A), d = mat2_det_const(A);
    const K disc = t * t - K(4) * d;
    if constexpr (K::finite) {
        if (K::characteristic() == 2) {
            for (const K& l1 : K::elements())
                for (const K& l2 : K::elements())
                    if (l1 != l2 && l1 + l2 == t && l1 * l2 == d) {
                        Mat2<K> P = A;
                        P[0][0] -= Poly<K>(l2);
                        P[1][1] -= Poly<K>(l2);
                        const K sc = (l1 - l2).inv();
                        for (auto& r : P)
                            for (auto& x : r) x = sc * x;
                        return finish_split(B, P);
                    }
            return std::nullopt;
        }
    }
    K root;
    if (disc.is_zero() || !field_sqrt(disc, root)) return std::nullopt;
    const K half = K(2).inv();
    const K l1 = (t + root) * half, l2 = (t - root) * half;
    Mat2<K> P = A;
    P[0][0] -= Poly<K>(l2);
    P[1][1] -= Poly<K>(l2);
    const K sc = (l1 - l2).inv();
    for (auto& r : P)
        for (auto& x : r) x = sc * x;
    return finish_split(B, P);
}

}  // namespace detail

template <class K>
DecomposabilityResult<K> is_decomposable(const RefinedParabolicBundle<K>& B, uint64_t seed = 7) {
    DecomposabilityResult<K> res;
    auto basis = endomorphism_space(B, EndoLevel::FullChain);
    std::vector<Mat2<K>> cands = basis;
    for (size_t a = 0; a < basis.size(); ++a)
        for (size_t b = a + 1; b < basis.size(); ++b) {
            Mat2<K> s;
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) s[j][k] = basis[a][j][k] + basis[b][j][k];
            cands.push_back(s);
        }
    bool any = false;
    for (const auto& A : cands)
        if (!detail::discriminant(A).is_zero()) { any = true; break; }
    res.geometric = any;
    if (!any) return res;
    // eigenvalues must lie in the base field for an honest splitting
    auto try_split = [&](const Mat2<K>& A) -> bool {
        if (detail::discriminant(A).is_zero()) return false;
        auto w = detail::split_by(B, A);
        if (w) {
            res.decomposable = true;
            res.witness = *w;
            return true;
        }
        return false;
    };
    for (const auto& A : cands)
        if (try_split(A)) return res;
    std::mt19937_64 rng(seed);
    const int r = int(basis.size());
    auto combo = [&](const std::vector<K>& c) {
        Mat2<K> m;
        for (int u = 0; u < r; ++u)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) m[j][k] += c[u] * basis[u][j][k];
        return m;
    };
    if constexpr (K::finite) {
        long total = 1;
        for (int u = 0; u < r && total <= 100000; ++u) total *= K::characteristic();
        if (total <= 100000) {
            std::vector<K> c(r);
            for (long idx = 0; idx < total; ++idx) {
                long t = idx;
                for (int u = 0; u < r; ++u) {
                    c[u] = K(t % long(K::characteristic()));
                    t /= long(K::characteristic());
                }
                if (try_split(combo(c))) return res;
            }
            return res;
        }
    }
    std::vector<K> c(r);
    for (int it = 0; it < 64; ++it) {
        for (auto& x : c) x = random_element<K>(rng, 4);
        if (try_split(combo(c))) return res;
    }
    return res;
}

template <class K>
bool is_general_position(const RefinedParabolicBundle<K>& B) {
    if (B.d() != 1) throw PreconditionError("general position is defined for degree 1");
    if (!B.is_parabolic()) throw PreconditionError("general position needs free top levels");
    if (B.E.d1 == B.E.d2) return true;
    LineSubbundle<K> L{B.E.d2, Poly<K>(), Poly<K>(K(1))};
    return intersection_profile(B, L).total_m() == 0;
}

}  // namespace parabtk
