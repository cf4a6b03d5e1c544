#pragma once
#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bundle.hpp"
#include "lp.hpp"

namespace parabtk {

// w[i][k-1] = w_{i,k}; nonincreasing in k, inside [0,1]
struct Weights {
    std::vector<std::vector<Rat>> w;

    static Weights democratic(const std::vector<int>& orders, const Rat& v) {
        Weights W;
        for (int n : orders) W.w.emplace_back(n, v);
        return W;
    }
    static Weights zero(const std::vector<int>& orders) { return democratic(orders, Rat(0)); }

    const Rat& at(int i, int k) const { return w[i][k - 1]; }
    Rat& at(int i, int k) { return w[i][k - 1]; }

    // empty string when valid, else the first violation
    std::string violation() const {
        for (size_t i = 0; i < w.size(); ++i)
            for (size_t k = 0; k < w[i].size(); ++k) {
                if (w[i][k] < Rat(0) || w[i][k] > Rat(1))
                    return "weights[" + std::to_string(i) + "]: entry " + std::to_string(k + 1) + " outside [0,1]";
                if (k > 0 && w[i][k] > w[i][k - 1])
                    return "weights[" + std::to_string(i) + "]: w_" + std::to_string(k + 1) + " > w_" + std::to_string(k);
            }
        return {};
    }
    bool valid() const { return violation().empty(); }
    bool on_boundary() const {
        for (const auto& r : w)
            for (const auto& x : r)
                if (x.is_zero() || x == Rat(1)) return true;
        return false;
    }
    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < w.size(); ++i) {
            s += i ? "; (" : "(";
            for (size_t k = 0; k < w[i].size(); ++k) s += (k ? ", " : "") + w[i][k].str();
            s += ")";
        }
        return s + "]";
    }
};

template <class K>
std::vector<int> orders_of(const RefinedParabolicBundle<K>& B) {
    std::vector<int> o;
    for (const auto& p : B.D) o.push_back(p.n);
    return o;
}

inline Rat stab_from_profile(int d, int e, const IntersectionProfile& P, const Weights& w) {
    Rat s(long(d - 2 * e));
    for (int i = 0; i < P.npoints(); ++i)
        for (int k = 1; k <= P.order(i); ++k)
            if (!w.at(i, k).is_zero()) s += P.eps(i, k) > 0 ? w.at(i, k) : -w.at(i, k);
    return s;
}

template <class K>
Rat stab_index(const RefinedParabolicBundle<K>& B, const LineSubbundle<K>& L, const Weights& w) {
    return stab_from_profile(B.d(), L.e, intersection_profile(B, L), w);
}

enum class Verdict { Stable, StrictlySemistable, Unstable };
inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "stable";
        case Verdict::StrictlySemistable: return "strictly-semistable";
        default: return "unstable";
    }
}

template <class K>
struct StabilityReport {
    Verdict verdict = Verdict::Stable;
    Rat min_index;
    std::optional<ProfileWitness<K>> minimizer;
    std::vector<NValue> nvals;  // per point, for the minimizer
    bool holds(bool strict) const { return strict ? verdict == Verdict::Stable : verdict != Verdict::Unstable; }
};

template <class K>
std::vector<ProfileWitness<K>> stability_profiles(const RefinedParabolicBundle<K>& B, const ProfileOptions& opt = {}) {
    return profiles_in_range(B, stability_degree_min(B), B.E.d2, opt);
}

inline std::vector<NValue> nvalues_of(const IntersectionProfile& P) {
    std::vector<NValue> v;
    for (int i = 0; i < P.npoints(); ++i) v.push_back(n_value(P.eps_vector(i)));
    return v;
}

template <class K>
StabilityReport<K> is_w_stable(const RefinedParabolicBundle<K>& B, const Weights& w, const std::vector<ProfileWitness<K>>& profs) {
    if (!w.valid()) throw std::invalid_argument("weight ordering violated: " + w.violation());
    StabilityReport<K> r;
    for (const auto& pw : profs) {
        Rat s = stab_from_profile(B.d(), pw.e, pw.profile, w);
        if (!r.minimizer || s < r.min_index) {
            r.min_index = s;
            r.minimizer = pw;
        }
    }
    if (!r.minimizer) {
        r.verdict = Verdict::Stable;
        return r;
    }
    r.nvals = nvalues_of(r.minimizer->profile);
    r.verdict = r.min_index.sign() > 0 ? Verdict::Stable : r.min_index.sign() == 0 ? Verdict::StrictlySemistable : Verdict::Unstable;
    return r;
}

template <class K>
StabilityReport<K> is_w_stable(const RefinedParabolicBundle<K>& B, const Weights& w, const ProfileOptions& opt = {}) {
    return is_w_stable(B, w, stability_profiles(B, opt));
}

template <class K>
struct PredicateReport {
    bool holds = true;
    std::optional<ProfileWitness<K>> violator;
};

template <class K>
PredicateReport<K> admissible_report(const RefinedParabolicBundle<K>& B, const ProfileOptions& opt = {}) {
    PredicateReport<K> r;
    for (const auto& pw : profiles_in_range(B, tame_degree_min(B), B.E.d2, opt))
        if (pw.profile.total_m() > B.n() + B.d() - 2 * pw.e - 2) {
            r.holds = false;
            r.violator = pw;
            return r;
        }
    return r;
}
template <class K>
bool is_admissible(const RefinedParabolicBundle<K>& B, const ProfileOptions& opt = {}) {
    return admissible_report(B, opt).holds;
}

inline bool tame_condition(int d, int e, const IntersectionProfile& P) {
    int sum = 0;
    bool any = false;
    for (const auto& nv : nvalues_of(P))
        if (nv.in_I_plus) {
            any = true;
            sum += nv.N;
        }
    return any && 2 * e - d + 1 <= sum;
}

template <class K>
PredicateReport<K> tame_report(const RefinedParabolicBundle<K>& B, const ProfileOptions& opt = {}) {
    PredicateReport<K> r;
    for (const auto& pw : profiles_in_range(B, tame_degree_min(B), B.E.d2, opt))
        if (!tame_condition(B.d(), pw.e, pw.profile)) {
            r.holds = false;
            r.violator = pw;
            return r;
        }
    return r;
}
template <class K>
bool is_tame(const RefinedParabolicBundle<K>& B, const ProfileOptions& opt = {}) {
    return tame_report(B, opt).holds;
}

template <class K>
bool is_simple_parabolic(const RefinedParabolicBundle<K>& B) {
    if (!B.is_parabolic()) throw PreconditionError("simplicity is defined for parabolic bundles (free top levels)");
    return endomorphism_space(B, EndoLevel::TopOnly).size() == 1;
}

// alpha[i][k-1] = alpha_{i,k}, k = 1..n_i+1
template <class K>
Rat parabolic_degree(const RefinedParabolicBundle<K>& B, const LineSubbundle<K>& L, const std::vector<std::vector<Rat>>& alpha) {
    check_alpha(B, alpha);
    auto P = intersection_profile(B, L);
    Rat s(long(L.e));
    for (int i = 0; i < B.npoints(); ++i) {
        const int n = B.D[i].n;
        for (int k = 1; k <= n; ++k)
            if (P.delta(i, k)) s += alpha[i][k - 1];
        s += alpha[i][n] * Rat(long(n - P.m(i)));
    }
    return s;
}

template <class K>
Rat parabolic_degree_of_bundle(const RefinedParabolicBundle<K>& B, const std::vector<std::vector<Rat>>& alpha) {
    check_alpha(B, alpha);
    Rat s(long(B.d()));
    for (int i = 0; i < B.npoints(); ++i) {
        const int n = B.D[i].n;
        for (int k = 1; k <= n; ++k) s += alpha[i][k - 1];
        s += alpha[i][n] * Rat(long(n));
    }
    return s;
}

template <class K>
void check_alpha(const RefinedParabolicBundle<K>& B, const std::vector<std::vector<Rat>>& alpha) {
    if (int(alpha.size()) != B.npoints()) throw std::invalid_argument("one alpha tuple per point");
    for (int i = 0; i < B.npoints(); ++i) {
        const auto& a = alpha[i];
        if (int(a.size()) != B.D[i].n + 1) throw std::invalid_argument("alpha tuple needs n_i + 1 entries");
        for (size_t k = 0; k < a.size(); ++k) {
            if (!(a[k] > Rat(0) && a[k] < Rat(1))) throw std::invalid_argument("alpha entries must lie in (0,1)");
            if (k > 0 && !(a[k] < a[k - 1])) throw std::invalid_argument("alpha must strictly decrease in k");
        }
    }
}

inline Weights weights_from_alpha(const std::vector<std::vector<Rat>>& alpha) {
    Weights W;
    for (const auto& a : alpha) {
        std::vector<Rat> r;
        for (size_t k = 0; k + 1 < a.size(); ++k) r.push_back(a[k] - a.back());
        W.w.push_back(r);
    }
    return W;
}

// ---- weight search ----

// maximize t subject to (a . y) - t >= beta (margin rows), (a . y) <= gamma (plain rows), y >= 0, t <= 1
struct MarginLP {
    int nv = 0;
    std::vector<std::pair<Vec<Rat>, Rat>> margin, plain;

    struct Solution {
        bool feasible = false;
        Rat t;
        Vec<Rat> y;
    };
    Solution solve() const {
        Rat C(1);
        for (const auto& [a, b] : margin) {
            Rat s = b.sign() < 0 ? -b : b;
            for (const auto& x : a) s += x.sign() < 0 ? -x : x;
            if (s + Rat(1) > C) C = s + Rat(1);
        }
        // tt = t + C >= 0
        Mat<Rat> A;
        Vec<Rat> rhs;
        for (const auto& [a, b] : margin) {
            Vec<Rat> row(nv + 1);
            for (int j = 0; j < nv; ++j) row[j] = -a[j];
            row[nv] = Rat(1);
            A.push_back(row);
            rhs.push_back(C - b);
        }
        for (const auto& [a, g] : plain) {
            Vec<Rat> row(nv + 1);
            for (int j = 0; j < nv; ++j) row[j] = a[j];
            row[nv] = Rat(0);
            A.push_back(row);
            rhs.push_back(g);
        }
        Vec<Rat> cap(nv + 1, Rat(0));
        cap[nv] = Rat(1);
        A.push_back(cap);
        rhs.push_back(C + Rat(1));
        Vec<Rat> c(nv + 1, Rat(0));
        c[nv] = Rat(1);
        auto r = lp_maximize(c, A, rhs);
        Solution s;
        if (r.status != LPResult::Status::Optimal) return s;
        s.feasible = true;
        s.t = r.x[nv] - C;
        s.y.assign(r.x.begin(), r.x.begin() + nv);
        return s;
    }
};

enum class WeightStrategy { ExactLP, Constructive };

template <class K>
struct WeightSearchResult {
    bool found = false;
    Weights weights;
    Rat margin;                                // optimal min Stab (LP) or verified min index
    bool boundary = false;
    std::string method;                        // case label for the constructive recipe
    std::vector<ProfileWitness<K>> certificate;  // tight profiles when not found
};

namespace detail {

// flat index of (i,k)
inline std::vector<int> weight_offsets(const std::vector<int>& orders) {
    std::vector<int> off;
    int s = 0;
    for (int n : orders) {
        off.push_back(s);
        s += n;
    }
    off.push_back(s);
    return off;
}

}  // namespace detail

template <class K>
WeightSearchResult<K> find_weights_lp(const RefinedParabolicBundle<K>& B, const std::vector<ProfileWitness<K>>& profs) {
    WeightSearchResult<K> res;
    res.method = "exact-lp";
    const auto orders = orders_of(B);
    const auto off = detail::weight_offsets(orders);
    const int V = off.back();
    MarginLP lp;
    lp.nv = V;
    for (const auto& pw : profs) {
        Vec<Rat> a(V, Rat(0));
        for (int i = 0; i < B.npoints(); ++i)
            for (int k = 1; k <= orders[i]; ++k) a[off[i] + k - 1] = Rat(long(pw.profile.eps(i, k)));
        lp.margin.push_back({a, Rat(long(2 * pw.e - B.d()))});
    }
    for (int i = 0; i < B.npoints(); ++i) {
        Vec<Rat> a(V, Rat(0));
        a[off[i]] = Rat(1);
        lp.plain.push_back({a, Rat(1)});
        for (int k = 2; k <= orders[i]; ++k) {
            Vec<Rat> o(V, Rat(0));
            o[off[i] + k - 1] = Rat(1);
            o[off[i] + k - 2] = Rat(-1);
            lp.plain.push_back({o, Rat(0)});
        }
    }
    auto sol = lp.solve();
    Weights W;
    for (int i = 0; i < B.npoints(); ++i) W.w.emplace_back(sol.y.begin() + off[i], sol.y.begin() + off[i + 1]);
    res.margin = sol.t;
    if (!sol.feasible || sol.t.sign() <= 0) {
        for (const auto& pw : profs)
            if (!sol.feasible || stab_from_profile(B.d(), pw.e, pw.profile, W) == sol.t) res.certificate.push_back(pw);
        return res;
    }
    // pull the vertex toward the democratic 1/2 point so that no entry sits on the boundary
    Weights mid = Weights::democratic(orders, Rat(1, 2));
    Rat worst(0);
    for (const auto& pw : profs) {
        Rat s = stab_from_profile(B.d(), pw.e, pw.profile, mid);
        if (-s > worst) worst = -s;
    }
    const Rat lam = sol.t / (Rat(2) * (sol.t + worst));
    for (int i = 0; i < B.npoints(); ++i)
        for (int k = 1; k <= orders[i]; ++k) W.at(i, k) = (Rat(1) - lam) * W.at(i, k) + lam * mid.at(i, k);
    res.found = true;
    res.weights = W;
    res.boundary = W.on_boundary();
    return res;
}

namespace detail {

struct PatternEntry {
    int i, k, var;
};

// max-margin LP restricted to a weight pattern, with strict pattern inequalities
template <class K>
std::optional<Weights> solve_pattern(const RefinedParabolicBundle<K>& B, const std::vector<ProfileWitness<K>>& profs, int nvar,
                                     const std::vector<PatternEntry>& pat, const std::vector<std::pair<int, int>>& greater) {
    const auto orders = orders_of(B);
    MarginLP lp;
    lp.nv = nvar;
    auto coeffs = [&](const IntersectionProfile& P) {
        Vec<Rat> a(nvar, Rat(0));
        for (const auto& e : pat) a[e.var] += Rat(long(P.eps(e.i, e.k)));
        return a;
    };
    for (const auto& pw : profs) lp.margin.push_back({coeffs(pw.profile), Rat(long(2 * pw.e - B.d()))});
    for (int v = 0; v < nvar; ++v) {
        Vec<Rat> a(nvar, Rat(0));
        a[v] = Rat(1);
        lp.margin.push_back({a, Rat(0)});  // w_v > 0
        Vec<Rat> b(nvar, Rat(0));
        b[v] = Rat(-1);
        lp.margin.push_back({b, Rat(-1)});  // w_v < 1
    }
    for (auto [a, b] : greater) {
        Vec<Rat> r(nvar, Rat(0));
        r[a] = Rat(1);
        r[b] = Rat(-1);
        lp.margin.push_back({r, Rat(0)});
    }
    auto sol = lp.solve();
    if (!sol.feasible || sol.t.sign() <= 0) return std::nullopt;
    Weights W = Weights::zero(orders);
    for (const auto& e : pat) W.at(e.i, e.k) = sol.y[e.var];
    if (!W.valid()) return std::nullopt;
    return W;
}

}  // namespace detail

template <class K>
WeightSearchResult<K> find_weights_constructive(const RefinedParabolicBundle<K>& B, const std::vector<ProfileWitness<K>>& profs) {
    WeightSearchResult<K> res;
    const auto orders = orders_of(B);
    const int d = B.d();
    auto verify = [&](const Weights& W, const std::string& label) {
        auto rep = is_w_stable(B, W, profs);
        res.method = label;
        if (rep.verdict == Verdict::Stable) {
            res.found = true;
            res.weights = W;
            res.margin = rep.min_index;
            res.boundary = W.on_boundary();
        } else if (rep.minimizer) {
            res.certificate.push_back(*rep.minimizer);
        }
        return res;
    };
    if (B.E.d1 < B.E.d2) {
        // the destabilizing O(d2)
        LineSubbundle<K> L{B.E.d2, Poly<K>(), Poly<K>(K(1))};
        auto P = intersection_profile(B, L);
        int Nsum = 0, Nc = 0;
        std::vector<NValue> nv = nvalues_of(P);
        for (int i = 0; i < B.npoints(); ++i) {
            if (nv[i].in_I_plus) {
                Nsum += nv[i].N;
                for (int k = nv[i].kmax + 1; k <= orders[i]; ++k) Nc += P.eps(i, k);
            } else {
                for (int k = 1; k <= orders[i]; ++k) Nc += P.eps(i, k);
            }
        }
        res.method = "d1<d2";
        if (Nsum <= 0) return res;
        const int gap = B.E.d2 - B.E.d1;
        // variables (w, w')
        MarginLP lp;
        lp.nv = 2;
        lp.margin.push_back({{Rat(long(Nsum)), Rat(long(Nc))}, Rat(long(gap))});
        lp.margin.push_back({{Rat(long(-Nsum)), Rat(long(2 - Nc))}, Rat(long(-gap))});
        lp.margin.push_back({{Rat(0), Rat(1)}, Rat(0)});
        lp.margin.push_back({{Rat(1), Rat(-1)}, Rat(0)});
        lp.margin.push_back({{Rat(-1), Rat(0)}, Rat(-1)});
        lp.margin.push_back({{Rat(-1), Rat(-1)}, Rat(-1)});
        auto sol = lp.solve();
        if (!sol.feasible || sol.t.sign() <= 0) return res;
        Weights W = Weights::zero(orders);
        for (int i = 0; i < B.npoints(); ++i)
            for (int k = 1; k <= orders[i]; ++k)
                W.at(i, k) = (nv[i].in_I_plus && k <= nv[i].kmax) ? sol.y[0] : sol.y[1];
        return verify(W, "d1<d2");
    }

    // d1 = d2: subbundles of degree d2 are constant directions
    const int e = B.E.d2;
    const int i1 = 0;
    const auto& l1 = B.s[i1].level(1);
    TruncElement<K> g = l1.generators().front();
    const int val = g.valuation();
    LineSubbundle<K> L1{e, Poly<K>(g.c[0].coeff(val)), Poly<K>(g.c[1].coeff(val))};
    auto P1 = intersection_profile(B, L1);
    auto nv1 = nvalues_of(P1);
    int i2 = -1;
    for (int i = 0; i < B.npoints(); ++i)
        if (nv1[i].N >= 1) { i2 = i; break; }
    res.method = "d1=d2";
    if (i2 < 0) return res;
    const int kmax2 = nv1[i2].kmax;
    // case (B) if some degree-e L has eps(L1)=+, eps(L)=- on K_max(i2)
    int best = 0;
    std::optional<IntersectionProfile> P2;
    for (const auto& pw : profs) {
        if (pw.e != e) continue;
        int cnt = 0;
        for (int k = 1; k <= kmax2; ++k)
            if (P1.eps(i2, k) > 0 && pw.profile.eps(i2, k) < 0) ++cnt;
        if (cnt > best) {
            best = cnt;
            P2 = pw.profile;
        }
    }
    using detail::PatternEntry;
    std::vector<PatternEntry> pat;
    std::vector<std::pair<int, int>> gt;
    std::string label;
    auto add_range = [&](int i, int k0, int k1, int var) {
        for (int k = k0; k <= k1; ++k) pat.push_back({i, k, var});
    };
    int nvar = 2;
    if (!P2) {
        if (i1 != i2) {
            label = "A-i";
            pat.push_back({i1, 1, 0});
            add_range(i2, 1, kmax2, 1);
        } else {
            label = "A-ii";
            pat.push_back({i1, 1, 0});
            add_range(i1, 2, kmax2, 1);
            gt.push_back({0, 1});
        }
    } else {
        auto both_plus = [&](int i, int k) { return P1.eps(i, k) > 0 && P2->eps(i, k) > 0; };
        int i3 = -1, k3 = -1;
        for (int k = 1; k <= kmax2 && i3 < 0; ++k)
            if (both_plus(i2, k)) { i3 = i2; k3 = k; }
        for (int i = 0; i < B.npoints() && i3 < 0; ++i)
            for (int k = 1; k <= orders[i]; ++k)
                if (both_plus(i, k)) { i3 = i; k3 = k; break; }
        if (i3 < 0) return res;  // only for decomposable bundles
        nvar = 4;
        if (i1 != i2 && i2 != i3 && i1 != i3) {
            label = "B-i";
            pat.push_back({i1, 1, 0});
            add_range(i2, 1, kmax2, 1);
            add_range(i3, 1, k3 - 1, 2);
            pat.push_back({i3, k3, 3});
            gt.push_back({2, 3});
        } else if (i1 != i2 && i2 == i3 && k3 <= kmax2) {
            label = "B-ii";
            nvar = 2;
            pat.push_back({i1, 1, 0});
            add_range(i2, 1, kmax2, 1);
        } else if (i1 != i2 && i2 == i3) {
            label = "B-iii";
            pat.push_back({i1, 1, 0});
            add_range(i2, 1, kmax2, 1);
            add_range(i2, kmax2 + 1, k3 - 1, 2);
            pat.push_back({i2, k3, 3});
            gt.push_back({1, 2});
            gt.push_back({2, 3});
        } else if (i1 == i3 && i1 != i2) {
            label = "B-iv";
            pat.push_back({i1, 1, 0});
            add_range(i2, 1, kmax2, 1);
            add_range(i1, 2, k3 - 1, 2);
            pat.push_back({i1, k3, 3});
            gt.push_back({0, 2});
            gt.push_back({2, 3});
        } else if (i1 == i2 && i1 != i3) {
            label = "B-v";
            pat.push_back({i1, 1, 0});
            add_range(i1, 2, kmax2, 1);
            add_range(i3, 1, k3 - 1, 2);
            pat.push_back({i3, k3, 3});
            gt.push_back({0, 1});
            gt.push_back({2, 3});
        } else if (k3 <= kmax2) {
            label = "B-vi";
            nvar = 2;
            pat.push_back({i1, 1, 0});
            add_range(i1, 2, kmax2, 1);
            gt.push_back({0, 1});
        } else {
            label = "B-vii";
            pat.push_back({i1, 1, 0});
            add_range(i1, 2, kmax2, 1);
            add_range(i1, kmax2 + 1, k3 - 1, 2);
            pat.push_back({i1, k3, 3});
            gt.push_back({0, 1});
            gt.push_back({1, 2});
            gt.push_back({2, 3});
        }
    }
    // drop variables that the pattern never uses (empty ranges)
    std::vector<int> used(nvar, 0);
    for (const auto& p : pat) used[p.var] = 1;
    std::vector<int> remap(nvar, -1);
    int nv = 0;
    for (int v = 0; v < nvar; ++v)
        if (used[v]) remap[v] = nv++;
    for (auto& p : pat) p.var = remap[p.var];
    // chain a > b > c through skipped variables
    std::vector<std::pair<int, int>> gt2;
    for (auto [a, b] : gt) {
        int ra = remap[a], rb = remap[b];
        if (ra >= 0 && rb >= 0) gt2.push_back({ra, rb});
    }
    for (auto [a, b] : gt)
        if (remap[a] < 0 || remap[b] < 0)
            for (auto [c, dd] : gt)
                if (dd == a && remap[c] >= 0 && remap[b] >= 0) gt2.push_back({remap[c], remap[b]});
    auto W = detail::solve_pattern(B, profs, nv, pat, gt2);
    res.method = label;
    if (!W) return res;
    (void)d;
    return verify(*W, label);
}

template <class K>
WeightSearchResult<K> find_stabilizing_weights(const RefinedParabolicBundle<K>& B, WeightStrategy strat, const ProfileOptions& opt = {}) {
    auto profs = stability_profiles(B, opt);
    return strat == WeightStrategy::ExactLP ? find_weights_lp(B, profs) : find_weights_constructive(B, profs);
}

}  // namespace parabtk
