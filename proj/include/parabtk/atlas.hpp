#pragma once
#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bundle.hpp"
#include "elm.hpp"
#include "stability.hpp"

namespace parabtk {

// ---- divisor shapes of degree 5 ----

enum class DivisorShape { D2111, D221, D311, D32, D41, D5 };

inline const std::vector<DivisorShape>& all_shapes() {
    static const std::vector<DivisorShape> s = {DivisorShape::D2111, DivisorShape::D221, DivisorShape::D311,
                                                DivisorShape::D32,   DivisorShape::D41,  DivisorShape::D5};
    return s;
}

inline std::vector<int> shape_multiplicities(DivisorShape s) {
    switch (s) {
        case DivisorShape::D2111: return {2, 1, 1, 1};
        case DivisorShape::D221: return {2, 2, 1};
        case DivisorShape::D311: return {3, 1, 1};
        case DivisorShape::D32: return {3, 2};
        case DivisorShape::D41: return {4, 1};
        case DivisorShape::D5: return {5};
    }
    return {};
}

inline std::string shape_name(DivisorShape s) {
    std::string r = "D";
    for (int m : shape_multiplicities(s)) r += std::to_string(m);
    return r;
}

inline std::optional<DivisorShape> shape_from_string(const std::string& s) {
    for (auto sh : all_shapes())
        if (shape_name(sh) == s) return sh;
    return std::nullopt;
}

struct UnsupportedBundle : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// multiplicities must be listed in the canonical non-increasing order
template <class K>
DivisorShape shape_of(const std::vector<MarkedPoint<K>>& D) {
    std::vector<int> m;
    for (const auto& p : D) m.push_back(p.n);
    for (auto sh : all_shapes())
        if (shape_multiplicities(sh) == m) return sh;
    throw UnsupportedBundle("divisor is not one of the degree-5 shapes in canonical order");
}

template <class K>
std::vector<K> canonical_points(int count) {
    static const long pts[] = {0, 1, 3, -2, 5};
    std::vector<K> t;
    for (int i = 0; i < count; ++i) t.push_back(K(pts[i]));
    return t;
}

// ---- special types ----

enum class SpecialKind { A, B, C, D, E, F, Generic };

inline const char* kind_name(SpecialKind k) {
    static const char* r[] = {"A", "B", "C", "D", "E", "F", "Generic"};
    return r[int(k)];
}

struct SpecialType {
    SpecialKind kind = SpecialKind::Generic;
    std::string label;
    std::string str() const { return label.empty() ? std::string(kind_name(kind)) : std::string(kind_name(kind)) + ":" + label; }
    friend bool operator==(const SpecialType& a, const SpecialType& b) { return a.kind == b.kind && a.label == b.label; }
    friend bool operator!=(const SpecialType& a, const SpecialType& b) { return !(a == b); }
    friend bool operator<(const SpecialType& a, const SpecialType& b) {
        return a.kind != b.kind ? a.kind < b.kind : a.label < b.label;
    }
};

// one row of the special-bundle list
struct SpecialRow {
    SpecialType type;
    SplitType E;
    std::vector<int> tableau;  // roman index per point
    int e = 0;                 // degree of the witness subbundle
    std::vector<int> m;        // required m-values of the witness
    bool has_witness = true;
    bool realizable = true;    // some point asks for more contact than its top level allows
};

namespace detail {

inline std::string pt(int i) { return "[t" + std::to_string(i + 1) + "]"; }

// E^{(k)} has a2 = 1 exactly on levels k+1..n
inline StandardTableau e_tableau(int n, int k) { return k == 0 ? StandardTableau::free_tableau(n) : StandardTableau::T_k(n, n - k); }

inline int tableau_index(const StandardTableau& t) {
    auto nm = tableau_name(t);
    if (!nm) throw std::logic_error("tableau outside the dictionary");
    return nm->index;
}

inline std::string deficit_label(const std::vector<int>& mult, const std::vector<int>& m, const std::string& prefix) {
    std::string s;
    for (size_t i = 0; i < mult.size(); ++i) {
        const int d = mult[i] - m[i];
        if (d == 1) s += (s.empty() ? "" : ",") + pt(int(i));
        if (d == 2) s += (s.empty() ? "" : ",") + std::string("2") + pt(int(i));
    }
    return prefix + "_{" + s + "}";
}

struct ERowSpec {
    int sup;
    std::vector<int> tab;
    std::vector<int> m;
};

inline std::vector<ERowSpec> e_rows(DivisorShape s) {
    std::vector<ERowSpec> r;
    auto pair = [](int np, int i, int j) {
        std::vector<int> m(np, 0);
        m[i] = m[j] = 1;
        return m;
    };
    auto dbl = [](int np, int i) {
        std::vector<int> m(np, 0);
        m[i] = 2;
        return m;
    };
    switch (s) {
        case DivisorShape::D2111:
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j) r.push_back({0, {1, 1, 1, 1}, pair(4, i, j)});
            r.push_back({0, {1, 1, 1, 1}, dbl(4, 0)});
            for (int i = 1; i < 4; ++i) r.push_back({1, {2, 1, 1, 1}, pair(4, 0, i)});
            break;
        case DivisorShape::D221:
            for (int i = 0; i < 2; ++i) r.push_back({0, {1, 1, 1}, pair(3, i, 2)});
            for (int i : {0, 2}) r.push_back({1, {1, 2, 1}, pair(3, std::min(i, 1), std::max(i, 1))});
            for (int j : {1, 2}) r.push_back({2, {2, 1, 1}, pair(3, 0, j)});
            r.push_back({3, {2, 2, 1}, pair(3, 0, 1)});
            for (int i = 0; i < 2; ++i) r.push_back({0, {1, 1, 1}, dbl(3, i)});
            break;
        case DivisorShape::D311:
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j) r.push_back({0, {1, 1, 1}, pair(3, i, j)});
            for (int j = 1; j < 3; ++j) r.push_back({1, {2, 1, 1}, pair(3, 0, j)});
            for (int j = 1; j < 3; ++j) r.push_back({2, {3, 1, 1}, pair(3, 0, j)});
            for (int k = 0; k < 3; ++k) r.push_back({k, {k + 1, 1, 1}, dbl(3, 0)});
            break;
        case DivisorShape::D32: {
            const int tabs[5][2] = {{2, 1}, {3, 1}, {1, 2}, {2, 2}, {3, 2}};
            for (int k = 0; k < 5; ++k) r.push_back({k, {tabs[k][0], tabs[k][1]}, pair(2, 0, 1)});
            for (int k = 0; k < 3; ++k) r.push_back({k, {k + 1, 1}, dbl(2, 0)});
            r.push_back({0, {1, 1}, dbl(2, 1)});
            r.push_back({1, {1, 2}, dbl(2, 1)});
            break;
        }
        case DivisorShape::D41: {
            for (int k = 0; k < 4; ++k) r.push_back({k, {k + 1, 1}, pair(2, 0, 1)});
            const int tabs[4] = {2, 4, 5, 6};
            for (int k = 0; k < 4; ++k) r.push_back({k, {tabs[k], 1}, dbl(2, 0)});
            break;
        }
        case DivisorShape::D5: {
            const int tabs[5] = {5, 7, 8, 9, 10};
            for (int k = 0; k < 5; ++k) r.push_back({k, {tabs[k]}, dbl(1, 0)});
            break;
        }
    }
    return r;
}

inline std::string e_label(const ERowSpec& r) {
    std::string s = "Q^(" + std::to_string(r.sup) + ")_{";
    bool first = true;
    for (size_t i = 0; i < r.m.size(); ++i) {
        if (r.m[i] == 0) continue;
        s += (first ? "" : ",") + (r.m[i] == 2 ? std::string("2") : std::string()) + pt(int(i));
        first = false;
    }
    return s + "}";
}

}  // namespace detail

inline std::vector<SpecialRow> special_rows(DivisorShape s) {
    const auto mult = shape_multiplicities(s);
    const int np = int(mult.size());
    std::vector<SpecialRow> rows;
    const std::vector<int> free_tabs(np, 1);
    // A: O(-1) through every full point
    rows.push_back({{SpecialKind::A, "C"}, {0, 1}, free_tabs, -1, mult});
    // B and C: O(0) witnesses by deficit pattern
    for (int tot_def : {2, 1}) {
        std::set<std::vector<int>> seen;
        std::vector<int> m(np);
        std::function<void(int, int)> rec = [&](int i, int left) {
            if (i == np) {
                if (left == 0) seen.insert(m);
                return;
            }
            for (int d = 0; d <= std::min({left, mult[i], 2}); ++d) {
                m[i] = mult[i] - d;
                rec(i + 1, left - d);
            }
        };
        rec(0, tot_def);
        for (const auto& mm : seen) {
            SpecialRow r{{tot_def == 2 ? SpecialKind::B : SpecialKind::C, detail::deficit_label(mult, mm, tot_def == 2 ? "L" : "P")},
                         {0, 1}, free_tabs, 0, mm};
            rows.push_back(r);
        }
    }
    // D: the chain E^{(k)} at one point
    for (int i = 0; i < np; ++i)
        for (int k = 0; k < mult[i]; ++k) {
            std::vector<int> tabs = free_tabs;
            tabs[i] = detail::tableau_index(detail::e_tableau(mult[i], k));
            std::vector<int> m(np, 0);
            m[i] = 1;
            rows.push_back({{SpecialKind::D, "E^(" + std::to_string(k) + ")_{" + detail::pt(i) + "}"}, {0, 1}, tabs, 1, m});
        }
    for (const auto& er : detail::e_rows(s)) rows.push_back({{SpecialKind::E, detail::e_label(er)}, {0, 1}, er.tab, 1, er.m});
    rows.push_back({{SpecialKind::F, "F"}, {-1, 2}, free_tabs, 0, {}, false});
    for (auto& r : rows) {
        if (!r.has_witness) continue;
        for (int i = 0; i < np; ++i) {
            const int a2 = tableau_from_name(mult[i], r.tableau[i]).top().a2;
            if (r.m[i] > mult[i] - a2 || r.m[i] < a2) r.realizable = false;
        }
    }
    return rows;
}

inline std::optional<SpecialRow> find_row(DivisorShape s, const SpecialType& t) {
    for (const auto& r : special_rows(s))
        if (r.type == t) return r;
    return std::nullopt;
}

// ---- classification ----

template <class K>
struct Classification {
    SpecialType type;
    std::vector<SpecialType> also;  // further matching labels of the same kind
    bool unlisted = false;          // a D/E-type witness without an appendix row
    // an O(-1) section with full contact, saturated or (x - t_j) times an O(0) of deficit one
    bool conic_witness = false;
    std::vector<SpecialType> line_witnesses;  // B rows met by some O(0), contact at least as required
};

namespace detail {

template <class K>
std::vector<int> m_vector(const IntersectionProfile& P) {
    std::vector<int> m;
    for (int i = 0; i < P.npoints(); ++i) m.push_back(P.m(i));
    return m;
}

}  // namespace detail

template <class K>
Classification<K> classify_special_full(const RefinedParabolicBundle<K>& B, bool check_preconditions = true,
                                        const ProfileOptions& opt = {}) {
    B.validate();
    if (B.n() != 5) throw UnsupportedBundle("classification needs a degree-5 divisor");
    if (B.d() != 1) throw UnsupportedBundle("classification needs degree 1");
    const DivisorShape sh = shape_of(B.D);
    const auto mult = shape_multiplicities(sh);
    const int np = int(mult.size());
    if (check_preconditions) {
        auto dec = is_decomposable(B);
        if (dec.decomposable || dec.geometric) throw UnsupportedBundle("bundle is decomposable");
        if (!is_tame(B, opt)) throw UnsupportedBundle("bundle is not tame");
    }
    Classification<K> res;
    if (B.E.d1 == -1 && B.E.d2 == 2) {
        res.type = {SpecialKind::F, "F"};
        return res;
    }
    if (B.E.d1 != 0 || B.E.d2 != 1) throw UnsupportedBundle("splitting type is neither (0,1) nor (-1,2)");

    std::vector<int> tabs;
    for (const auto& s : B.s) tabs.push_back(detail::tableau_index(s.tableau()));
    const auto rows = special_rows(sh);

    const LineSubbundle<K> top_line{1, Poly<K>(), Poly<K>(K(1))};
    const auto m1 = detail::m_vector<K>(intersection_profile(B, top_line));
    int s1 = 0;
    for (int x : m1) s1 += x;
    if (s1 > 0) {
        const SpecialKind want = s1 == 1 ? SpecialKind::D : SpecialKind::E;
        for (const auto& r : rows)
            if (r.type.kind == want && r.tableau == tabs && r.m == m1) {
                res.type = r.type;
                return res;
            }
        res.unlisted = true;
        return res;
    }
    for (const auto& pw : achievable_profiles(B, -1, opt))
        if (detail::m_vector<K>(pw.profile) == mult) res.conic_witness = true;
    // O(0) witnesses: deficit one gives C, deficit two gives B
    std::vector<std::vector<int>> m0;
    for (const auto& pw : achievable_profiles(B, 0, opt)) m0.push_back(detail::m_vector<K>(pw.profile));
    for (const auto& r : rows) {
        if (r.type.kind != SpecialKind::B) continue;
        for (const auto& m : m0) {
            bool ok = true;
            for (int i = 0; i < np; ++i) ok = ok && m[i] >= r.m[i];
            if (ok) {
                res.line_witnesses.push_back(r.type);
                break;
            }
        }
    }
    for (const auto& m : m0) {
        int def = 0;
        for (int i = 0; i < np; ++i) def += mult[i] - m[i];
        if (def == 1) res.conic_witness = true;
    }
    for (int tot_def : {1, 2}) {
        std::vector<SpecialType> hits;
        for (const auto& m : m0) {
            int def = 0;
            for (int i = 0; i < np; ++i) def += mult[i] - m[i];
            if (def != tot_def) continue;
            hits.push_back({tot_def == 1 ? SpecialKind::C : SpecialKind::B, detail::deficit_label(mult, m, tot_def == 1 ? "P" : "L")});
        }
        if (!hits.empty()) {
            std::sort(hits.begin(), hits.end());
            res.type = hits[0];
            res.also.assign(hits.begin() + 1, hits.end());
            return res;
        }
    }
    if (res.conic_witness) res.type = {SpecialKind::A, "C"};  // no O(0) of deficit one by now, so the witness is saturated
    return res;
}

template <class K>
SpecialType classify_special(const RefinedParabolicBundle<K>& B, const ProfileOptions& opt = {}) {
    return classify_special_full(B, true, opt).type;
}

// ---- representatives ----

struct Unrealizable : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

// generic structure of tableau `tab` whose top meets O.v in length exactly m
template <class K>
std::optional<RefinedStructure<K>> structure_with_contact(const StandardTableau& tab, const TruncElement<K>& v, int m, std::mt19937_64& rng) {
    const int n = tab.n;
    const int nu = tab.a2[n], mu = n - nu;
    if (m < nu || m > n - nu) return std::nullopt;
    for (int attempt = 0; attempt < 64; ++attempt) {
        TruncElement<K> u1 = v;
        if (m < n - nu) {
            TruncElement<K> r(n, random_poly<K>(rng, n, false), random_poly<K>(rng, n, false));
            u1 = v + r.f_pow(m - nu);
        }
        TruncElement<K> u2(n, random_poly<K>(rng, n, false), random_poly<K>(rng, n, false));
        const K det = u1.c[0].coeff(0) * u2.c[1].coeff(0) - u1.c[1].coeff(0) * u2.c[0].coeff(0);
        if (det.is_zero()) continue;
        auto top = TruncSubmodule<K>::from_generators({u1.f_pow(nu), u2.f_pow(mu)}, n);
        if (!(top.type() == tab.top()) || cyclic_intersection(top, v) != m) continue;
        auto ch = random_chain(top, tab, rng);
        if (ch) return ch;
    }
    return std::nullopt;
}

// local expansion at t of a global section (p, q)
template <class K>
TruncElement<K> local_vector(const Poly<K>& p, const Poly<K>& q, const K& t, int n) {
    return TruncElement<K>(n, p.shift(t).truncate(n), q.shift(t).truncate(n));
}

}  // namespace detail

// a random global section spanning a saturated O(e) in E
template <class K>
LineSubbundle<K> random_line(const SplitType& E, int e, std::mt19937_64& rng) {
    for (;;) {
        const int np = E.d1 - e + 1, nq = E.d2 - e + 1;
        LineSubbundle<K> L{e, detail::random_poly<K>(rng, std::max(0, np), false), detail::random_poly<K>(rng, std::max(0, nq), false)};
        if (L.is_saturated(E)) return L;
    }
}

template <class K>
RefinedParabolicBundle<K> build_from_row(DivisorShape s, const SpecialRow& row, std::mt19937_64& rng) {
    const auto mult = shape_multiplicities(s);
    const int np = int(mult.size());
    const auto t = canonical_points<K>(np);
    RefinedParabolicBundle<K> B;
    B.E = row.E;
    LineSubbundle<K> W = row.has_witness ? random_line<K>(row.E, row.e, rng) : random_line<K>(row.E, row.E.d2, rng);
    if (row.has_witness && row.e == 1) W = {1, Poly<K>(), Poly<K>(K(1))};
    for (int i = 0; i < np; ++i) {
        B.D.push_back({t[i], mult[i]});
        const auto tab = tableau_from_name(mult[i], row.tableau[i]);
        const auto v = detail::local_vector(W.p, W.q, t[i], mult[i]);
        const int m = row.has_witness ? row.m[i] : 0;
        auto st = detail::structure_with_contact(tab, v, m, rng);
        if (!st) throw Unrealizable("row " + row.type.str() + " cannot be realized at point " + std::to_string(i));
        B.s.push_back(*st);
    }
    B.validate();
    return B;
}

template <class K = Rat>
RefinedParabolicBundle<K> representative_of(DivisorShape s, const SpecialType& t, uint64_t seed = 1, int attempts = 60) {
    std::mt19937_64 rng(seed);
    if (t.kind == SpecialKind::Generic) {
        SpecialRow row{t, {0, 1}, std::vector<int>(shape_multiplicities(s).size(), 1), 1, std::vector<int>(shape_multiplicities(s).size(), 0)};
        for (int a = 0; a < attempts; ++a) {
            auto B = build_from_row<K>(s, row, rng);
            try {
                if (classify_special(B).kind == SpecialKind::Generic) return B;
            } catch (const UnsupportedBundle&) {
            }
        }
        throw std::runtime_error("no generic representative found");
    }
    auto row = find_row(s, t);
    if (!row) throw std::invalid_argument("type " + t.str() + " is not listed for " + shape_name(s));
    if (!row->realizable) throw Unrealizable("type " + t.str() + " asks for more contact than the tableau allows");
    int untame = 0;
    const LineSubbundle<K> top_line{1, Poly<K>(), Poly<K>(K(1))};
    for (int a = 0; a < attempts; ++a) {
        auto B = build_from_row<K>(s, *row, rng);
        if (row->e == 1 && !tame_condition(B.d(), 1, intersection_profile(B, top_line))) ++untame;
        try {
            if (classify_special(B) == t) return B;
        } catch (const UnsupportedBundle&) {
        }
    }
    // the witness O(1) itself breaks tameness on every draw
    if (untame == attempts) throw Unrealizable("type " + t.str() + " is never tame: its own O(1) violates the bound");
    if constexpr (K::finite) throw std::runtime_error("field too small for a representative of " + t.str() + "; retry over Q");
    throw std::runtime_error("no representative found for " + t.str());
}

// ---- democratic stability as a function of w ----

struct DemocraticIntervals {
    std::vector<Rat> walls;               // interior points where the verdict changes
    std::vector<Verdict> open_verdicts;   // on the open pieces between consecutive walls, size walls+1
    std::vector<Verdict> wall_verdicts;
    Verdict at(const Rat& w) const {
        for (size_t i = 0; i < walls.size(); ++i) {
            if (w == walls[i]) return wall_verdicts[i];
            if (w < walls[i]) return open_verdicts[i];
        }
        return open_verdicts.back();
    }
    // (lo, hi) pieces with a stable verdict
    std::vector<std::pair<Rat, Rat>> stable_pieces() const {
        std::vector<std::pair<Rat, Rat>> r;
        for (size_t i = 0; i < open_verdicts.size(); ++i)
            if (open_verdicts[i] == Verdict::Stable) r.push_back({i == 0 ? Rat(0) : walls[i - 1], i == walls.size() ? Rat(1) : walls[i]});
        return r;
    }
};

template <class K>
DemocraticIntervals democratic_intervals(const RefinedParabolicBundle<K>& B, const ProfileOptions& opt = {}) {
    const auto profs = stability_profiles(B, opt);
    const auto orders = orders_of(B);
    std::set<Rat> cand;
    for (const auto& pw : profs) {
        // Stab = d - 2e + w (n - 2m) under democratic weights
        const int slope = B.n() - 2 * pw.profile.total_m();
        if (slope == 0) continue;
        Rat w(long(2 * pw.e - B.d()), long(slope));
        if (w > Rat(0) && w < Rat(1)) cand.insert(w);
    }
    std::vector<Rat> pts(cand.begin(), cand.end());
    auto verdict = [&](const Rat& w) { return is_w_stable(B, Weights::democratic(orders, w), profs).verdict; };
    std::vector<Verdict> open;
    for (size_t i = 0; i <= pts.size(); ++i) {
        const Rat lo = i == 0 ? Rat(0) : pts[i - 1], hi = i == pts.size() ? Rat(1) : pts[i];
        open.push_back(verdict((lo + hi) / Rat(2)));
    }
    DemocraticIntervals r;
    r.open_verdicts.push_back(open[0]);
    for (size_t i = 0; i < pts.size(); ++i) {
        if (open[i + 1] != open[i]) {
            r.walls.push_back(pts[i]);
            r.wall_verdicts.push_back(verdict(pts[i]));
            r.open_verdicts.push_back(open[i + 1]);
        }
    }
    return r;
}

// verdict pattern of a special kind on the four democratic chambers
inline std::vector<Verdict> expected_chamber_verdicts(SpecialKind k) {
    const Verdict S = Verdict::Stable, U = Verdict::Unstable;
    switch (k) {
        case SpecialKind::A: return {U, S, S, U};
        case SpecialKind::B: return {U, S, S, S};
        case SpecialKind::C: return {U, S, U, U};
        case SpecialKind::D: return {U, U, S, S};
        case SpecialKind::E: return {U, U, U, U};
        case SpecialKind::F: return {U, U, U, S};
        case SpecialKind::Generic: return {U, S, S, S};
    }
    return {};
}

inline const std::vector<Rat>& chamber_samples() {
    static const std::vector<Rat> w = {Rat(1, 10), Rat(1, 4), Rat(1, 2), Rat(4, 5)};
    return w;
}

struct ShapeAtlas {
    DivisorShape shape;
    std::vector<SpecialType> types;
    std::vector<RefinedParabolicBundle<Rat>> reps;
    std::vector<SpecialType> unrealizable;
};

inline ShapeAtlas build_atlas(DivisorShape s, uint64_t seed = 1) {
    ShapeAtlas A;
    A.shape = s;
    for (const auto& row : special_rows(s)) {
        if (!row.realizable) {
            A.unrealizable.push_back(row.type);
            continue;
        }
        try {
            A.reps.push_back(representative_of<Rat>(s, row.type, seed));
            A.types.push_back(row.type);
        } catch (const Unrealizable&) {
            A.unrealizable.push_back(row.type);
        }
    }
    A.types.push_back({SpecialKind::Generic, ""});
    A.reps.push_back(representative_of<Rat>(s, {SpecialKind::Generic, ""}, seed));
    return A;
}

inline std::vector<Rat> walls_of(const std::vector<RefinedParabolicBundle<Rat>>& reps) {
    std::set<Rat> w;
    for (const auto& B : reps)
        for (const auto& x : democratic_intervals(B).walls) w.insert(x);
    return {w.begin(), w.end()};
}

inline std::vector<Rat> walls(DivisorShape s, uint64_t seed = 1) { return walls_of(build_atlas(s, seed).reps); }

// degree-4 reduced divisor in degree -1: generic, one direction in O, and the (-2,1) splitting
inline std::vector<RefinedParabolicBundle<Rat>> reduced4_representatives() {
    std::vector<RefinedParabolicBundle<Rat>> r;
    std::vector<MarkedPoint<Rat>> D;
    for (long t : {0, 1, 3, -2}) D.push_back({Rat(t), 1});
    auto st = [](long a, long b) { return RefinedStructure<Rat>::free(TruncElement<Rat>(1, Poly<Rat>(Rat(a)), Poly<Rat>(Rat(b)))); };
    r.push_back({{-1, 0}, D, {st(1, 1), st(1, 2), st(1, -1), st(1, 5)}});
    r.push_back({{-1, 0}, D, {st(0, 1), st(1, 2), st(1, -1), st(1, 5)}});
    r.push_back({{-2, 1}, D, {st(1, 1), st(1, 2), st(1, -1), st(1, 5)}});
    for (auto& B : r) B.validate();
    return r;
}

inline std::vector<Rat> walls_reduced4() { return walls_of(reduced4_representatives()); }

// ---- epsilon tables ----

struct EpsilonRow {
    TableauName tab;
    int m = 0;
    bool realizable = true;
    std::vector<int> eps;  // eps_1..eps_n
    int N = 0;
    int printed_N = 0;
    std::vector<int> printed_eps;
    bool deviation = false;  // N differs from the printed value
    std::string eps_str() const {
        std::string s = "(";
        for (size_t k = eps.size(); k-- > 0;) s += eps[k] > 0 ? "+" : "-";
        return s + ")";
    }
};

struct PrintedEpsilonRow {
    int tab;
    int m;
    const char* eps;  // written eps_n .. eps_1
    int N;
};

// reference values of the four correspondence tables
inline std::vector<PrintedEpsilonRow> printed_epsilon_rows(int n) {
    switch (n) {
        case 2: return {{1, 1, "+-", 0}, {2, 1, "-+", 1}, {2, 2, "--", -2}};
        case 3: return {{1, 1, "++-", 1}, {1, 2, "+--", -1}, {2, 1, "+-+", 1}, {2, 2, "--+", 1}, {3, 1, "-++", 2}, {3, 2, "-+-", 0}};
        case 4:
            return {{1, 1, "+++-", 2}, {1, 2, "++--", 0}, {2, 1, "++-+", 2}, {2, 2, "+--+", 1}, {3, 1, "+-++", 2},
                    {3, 2, "+-+-", 0}, {4, 1, "-+++", 3}, {4, 2, "-++-", 1}, {5, 2, "-+-+", 1}, {6, 2, "--++", 2}};
        case 5:
            return {{1, 1, "++++-", 3}, {1, 2, "+++--", 1}, {2, 1, "+++-+", 3}, {2, 2, "++--+", 1}, {3, 1, "++-++", 3},
                    {3, 2, "++-+-", 1}, {4, 1, "+-+++", 3}, {4, 2, "+-++-", 1}, {5, 1, "-++++", 4}, {5, 2, "-+++-", 2},
                    {6, 2, "+-+-+", 1}, {7, 2, "+--++", 2}, {8, 2, "-++-+", 2}, {9, 2, "-+-++", 2}, {10, 2, "--+++", 3}};
    }
    throw std::invalid_argument("correspondence tables exist for n = 2..5");
}

namespace detail {
inline std::vector<int> parse_eps(const char* s) {
    std::vector<int> v;
    for (const char* p = s; *p; ++p) v.push_back(*p == '+' ? 1 : -1);
    std::reverse(v.begin(), v.end());
    return v;
}
}  // namespace detail

// generic (tableau, m) pair: a random chain and a direction with contact m, majority over draws
inline std::optional<std::vector<int>> generic_eps(const StandardTableau& tab, int m, uint64_t seed = 5, int draws = 5) {
    std::mt19937_64 rng(seed);
    const int n = tab.n;
    const TruncElement<Rat> v(n, Poly<Rat>(), Poly<Rat>(Rat(1)));
    std::map<std::vector<int>, int> votes;
    for (int d = 0; d < draws; ++d) {
        auto st = detail::structure_with_contact(tab, v, m, rng);
        if (!st) return std::nullopt;
        IntersectionProfile P;
        P.c.assign(1, std::vector<int>(n + 1, 0));
        for (int k = 1; k <= n; ++k) P.c[0][k] = cyclic_intersection(st->level(k), v);
        ++votes[P.eps_vector(0)];
    }
    auto best = std::max_element(votes.begin(), votes.end(), [](auto& a, auto& b) { return a.second < b.second; });
    return best->first;
}

inline std::vector<EpsilonRow> epsilon_table(int n) {
    std::vector<EpsilonRow> out;
    for (const auto& pr : printed_epsilon_rows(n)) {
        EpsilonRow r;
        r.tab = {n, pr.tab};
        r.m = pr.m;
        r.printed_eps = detail::parse_eps(pr.eps);
        r.printed_N = pr.N;
        auto e = generic_eps(tableau_from_name(n, pr.tab), pr.m);
        if (e) {
            r.eps = *e;
        } else {
            // no line subbundle has this contact; only the definitional N of the printed tuple is checked
            r.realizable = false;
            r.eps = r.printed_eps;
        }
        r.N = n_value(r.eps).N;
        r.deviation = r.N != r.printed_N;
        out.push_back(r);
    }
    return out;
}

// ---- elm on special loci ----

struct ElmAction {
    std::map<SpecialType, SpecialType> image;
    std::vector<SpecialType> failed;  // image not classifiable
};

inline ElmAction elm_action_table(DivisorShape s, const std::vector<int>& pts, uint64_t seed = 1) {
    int tot = 0;
    const auto mult = shape_multiplicities(s);
    for (int i : pts) {
        if (i < 0 || i >= int(mult.size())) throw std::out_of_range("elm point index out of range");
        tot += mult[i];
    }
    if (tot % 2) throw ParityError("elm needs even total multiplicity, got " + std::to_string(tot));
    ElmAction act;
    const auto A = build_atlas(s, seed);
    for (size_t j = 0; j < A.types.size(); ++j) {
        if (A.types[j].kind == SpecialKind::Generic) continue;
        auto img = elm_named(A.reps[j], pts);
        try {
            act.image[A.types[j]] = classify_special(img);
        } catch (const UnsupportedBundle&) {
            act.failed.push_back(A.types[j]);
        }
    }
    return act;
}

}  // namespace parabtk
