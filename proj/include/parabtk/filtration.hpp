#pragma once
#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "trunc.hpp"

namespace parabtk {

struct InvalidStructure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// a standard tableau of two-column shapes is fixed by a2 at each level
struct StandardTableau {
    int n = 0;
    std::vector<int> a2;  // a2[k] for k = 0..n, a2[0] = 0

    YoungType shape(int k) const { return {k - 2 * a2[k], a2[k], n}; }
    YoungType top() const { return shape(n); }
    // shapes listed from level n down to level 1
    std::vector<YoungType> shapes() const {
        std::vector<YoungType> s;
        for (int k = n; k >= 1; --k) s.push_back(shape(k));
        return s;
    }
    bool valid() const {
        if (int(a2.size()) != n + 1 || a2[0] != 0) return false;
        for (int k = 1; k <= n; ++k) {
            if (k - 2 * a2[k] < 0 || a2[k] < 0) return false;
            const int d = a2[k] - a2[k - 1];
            if (d != 0 && d != 1) return false;
        }
        return true;
    }
    // levels k where a2^{k+1} - a2^k > 0
    std::vector<int> drop_levels() const {
        std::vector<int> out;
        for (int k = 1; k < n; ++k)
            if (a2[k + 1] > a2[k]) out.push_back(k);
        return out;
    }
    friend bool operator==(const StandardTableau& a, const StandardTableau& b) { return a.n == b.n && a.a2 == b.a2; }
    friend bool operator<(const StandardTableau& a, const StandardTableau& b) {
        return a.n != b.n ? a.n < b.n : a.a2 < b.a2;
    }

    // from a top-down a2 list (levels n..1)
    static StandardTableau from_top_down(const std::vector<int>& td) {
        StandardTableau t;
        t.n = int(td.size());
        t.a2.assign(t.n + 1, 0);
        for (int j = 0; j < t.n; ++j) t.a2[t.n - j] = td[j];
        if (!t.valid()) throw std::invalid_argument("not a standard tableau");
        return t;
    }
    static StandardTableau free_tableau(int n) { return from_top_down(std::vector<int>(n, 0)); }
    // top (1^{n-2},2), a2 drops at level n-k
    static StandardTableau T_k(int n, int k) {
        if (k == 0) return free_tableau(n);
        if (k < 1 || k > n - 1) throw std::invalid_argument("T_k needs 0 <= k <= n-1");
        StandardTableau t;
        t.n = n;
        t.a2.assign(n + 1, 0);
        for (int j = n - k + 1; j <= n; ++j) t.a2[j] = 1;
        return t;
    }
    std::string str() const {
        std::string s;
        for (int k = n; k >= 1; --k) s += (k == n ? "" : " > ") + shape(k).str();
        return s;
    }
};

namespace detail {
inline const std::map<int, std::vector<std::vector<int>>>& tableau_dictionary() {
    // top-down a2 sequences in the order I, II, III, ...
    static const std::map<int, std::vector<std::vector<int>>> d = {
        {1, {{0}}},
        {2, {{0, 0}, {1, 0}}},
        {3, {{0, 0, 0}, {1, 1, 0}, {1, 0, 0}}},
        {4, {{0, 0, 0, 0}, {1, 1, 1, 0}, {1, 1, 0, 0}, {1, 0, 0, 0}, {2, 1, 1, 0}, {2, 1, 0, 0}}},
        {5,
         {{0, 0, 0, 0, 0},
          {1, 1, 1, 1, 0},
          {1, 1, 1, 0, 0},
          {1, 1, 0, 0, 0},
          {1, 0, 0, 0, 0},
          {2, 2, 1, 1, 0},
          {2, 2, 1, 0, 0},
          {2, 1, 1, 1, 0},
          {2, 1, 1, 0, 0},
          {2, 1, 0, 0, 0}}},
    };
    return d;
}
inline const char* roman(int i) {
    static const char* r[] = {"I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X"};
    return r[i - 1];
}
}  // namespace detail

struct TableauName {
    int n = 0;
    int index = 0;  // 1-based roman numeral
    std::string str() const { return "T^(" + std::to_string(n) + ")_" + detail::roman(index); }
};

inline int roman_index(const std::string& s) {
    for (int i = 1; i <= 10; ++i)
        if (s == detail::roman(i)) return i;
    throw std::invalid_argument("bad roman numeral: " + s);
}

inline StandardTableau tableau_from_name(int n, int index) {
    const auto& d = detail::tableau_dictionary();
    auto it = d.find(n);
    if (it == d.end() || index < 1 || index > int(it->second.size()))
        throw std::invalid_argument("no tableau named T^(" + std::to_string(n) + ")_" + std::to_string(index));
    return StandardTableau::from_top_down(it->second[index - 1]);
}

inline std::optional<TableauName> tableau_name(const StandardTableau& t) {
    const auto& d = detail::tableau_dictionary();
    auto it = d.find(t.n);
    if (it == d.end()) return std::nullopt;
    for (size_t i = 0; i < it->second.size(); ++i)
        if (StandardTableau::from_top_down(it->second[i]) == t) return TableauName{t.n, int(i) + 1};
    return std::nullopt;
}

// all one-box-removal chains below `top`
inline std::vector<StandardTableau> enumerate_tableaus(const YoungType& top) {
    const int n = top.length();
    std::vector<StandardTableau> out;
    StandardTableau cur;
    cur.n = n;
    cur.a2.assign(n + 1, 0);
    cur.a2[n] = top.a2;
    auto rec = [&](auto&& self, int k) -> void {
        if (k == 0) {
            if (cur.a2[0] == 0) out.push_back(cur);
            return;
        }
        for (int drop = 0; drop <= 1; ++drop) {
            const int a2 = cur.a2[k] - drop;
            const int lev = k - 1;
            if (a2 < 0 || lev - 2 * a2 < 0) continue;
            cur.a2[lev] = a2;
            self(self, lev);
        }
    };
    if (n == 0) return out;
    rec(rec, n);
    return out;
}

// hook-length count for (1^a1, 2^a2): via the conjugate two-row shape
inline long hook_count(const YoungType& t) {
    const int m = t.length(), c2 = t.a2;
    auto binom = [](int nn, int kk) -> long {
        if (kk < 0 || kk > nn) return 0;
        long r = 1;
        for (int i = 1; i <= kk; ++i) r = r * (nn - kk + i) / i;
        return r;
    };
    return binom(m, c2) - binom(m, c2 - 1);
}

template <class K>
class RefinedStructure {
public:
    RefinedStructure() = default;
    // chain listed as [l_n, ..., l_1]
    RefinedStructure(int n, const std::vector<TruncSubmodule<K>>& top_down) : n_(n) {
        if (int(top_down.size()) != n) throw InvalidStructure("chain has " + std::to_string(top_down.size()) + " levels, expected " + std::to_string(n));
        lv_.assign(n + 1, TruncSubmodule<K>::zero(n));
        for (int j = 0; j < n; ++j) lv_[n - j] = top_down[j];
        validate();
    }
    static RefinedStructure from_levels(std::vector<TruncSubmodule<K>> lv) {
        RefinedStructure s;
        s.n_ = int(lv.size()) - 1;
        s.lv_ = std::move(lv);
        s.validate();
        return s;
    }
    // l, f l, f^2 l, ... for a free generator
    static RefinedStructure free(const TruncElement<K>& g) {
        const int n = g.n;
        std::vector<TruncSubmodule<K>> lv(n + 1);
        for (int k = 0; k <= n; ++k) lv[k] = TruncSubmodule<K>::from_generators({g.f_pow(n - k)}, n);
        return from_levels(std::move(lv));
    }

    int order() const { return n_; }
    const TruncSubmodule<K>& level(int k) const { return lv_.at(k); }
    const TruncSubmodule<K>& top() const { return lv_.at(n_); }
    const std::vector<TruncSubmodule<K>>& levels() const { return lv_; }
    bool top_is_free() const { return top().is_free(); }

    friend bool operator==(const RefinedStructure& a, const RefinedStructure& b) {
        if (a.n_ != b.n_) return false;
        for (int k = 1; k <= a.n_; ++k)
            if (a.lv_[k] != b.lv_[k]) return false;
        return true;
    }

    StandardTableau tableau() const {
        StandardTableau t;
        t.n = n_;
        t.a2.assign(n_ + 1, 0);
        for (int k = 1; k <= n_; ++k) t.a2[k] = lv_[k].type().a2;
        if (!t.valid()) throw InvalidStructure("chain types do not form a standard tableau");
        return t;
    }

private:
    void validate() const {
        if (n_ < 1) throw InvalidStructure("structure order must be positive");
        for (int k = 0; k <= n_; ++k) {
            if (lv_[k].order() != n_) throw InvalidStructure("level order mismatch");
            if (lv_[k].length() != k)
                throw InvalidStructure("level " + std::to_string(k) + " has length " + std::to_string(lv_[k].length()));
            if (k > 0 && !lv_[k].contains(lv_[k - 1]))
                throw InvalidStructure("level " + std::to_string(k - 1) + " not contained in level " + std::to_string(k));
        }
    }
    int n_ = 0;
    std::vector<TruncSubmodule<K>> lv_;
};

template <class K>
StandardTableau tableau_of(const RefinedStructure<K>& s) {
    return s.tableau();
}

// <a1 v1 + a2 v2, f v1, f v2>; f l when a2(l) = 0
template <class K>
TruncSubmodule<K> colength_one_family(const TruncSubmodule<K>& l, const K& al1, const K& al2) {
    if (l.is_zero()) throw std::invalid_argument("zero module has no colength-one submodule");
    if (l.type().a2 == 0) return l.f_times();
    if (al1.is_zero() && al2.is_zero()) throw std::invalid_argument("invalid projective point [0:0]");
    const int n = l.order();
    return TruncSubmodule<K>::from_generators(
        {l.v1().scale(al1) + l.v2().scale(al2), l.v1().f_pow(1), l.v2().f_pow(1)}, n);
}

// points of P^1(F_p) as [1:a] and [0:1]
template <class K>
std::vector<std::pair<K, K>> projective_line_points() {
    std::vector<std::pair<K, K>> pts;
    for (const K& a : K::elements()) pts.emplace_back(K(1), a);
    pts.emplace_back(K(0), K(1));
    return pts;
}

template <class K>
std::vector<RefinedStructure<K>> enumerate_chains_fixed_top(const TruncSubmodule<K>& top) {
    if constexpr (!K::finite) {
        throw std::logic_error("chain enumeration needs a finite field");
    } else {
        const int n = top.order();
        if (top.length() != n) throw InvalidStructure("top level must have length n");
        std::vector<RefinedStructure<K>> out;
        std::vector<TruncSubmodule<K>> lv(n + 1, TruncSubmodule<K>::zero(n));
        lv[n] = top;
        auto rec = [&](auto&& self, int k) -> void {
            if (k == 0) {
                out.push_back(RefinedStructure<K>::from_levels(lv));
                return;
            }
            const auto& l = lv[k];
            if (l.type().a2 == 0) {
                lv[k - 1] = l.f_times();
                self(self, k - 1);
                return;
            }
            for (const auto& [a, b] : projective_line_points<K>()) {
                lv[k - 1] = colength_one_family(l, a, b);
                self(self, k - 1);
            }
        };
        rec(rec, n);
        return out;
    }
}

// every refined structure at a point of multiplicity n over F_p
template <class K>
std::vector<RefinedStructure<K>> enumerate_structures(int n) {
    if constexpr (!K::finite) {
        throw std::logic_error("structure enumeration needs a finite field");
    } else {
        // length-n submodules by descent from the full module, deduplicated by normal form
        std::map<std::string, TruncSubmodule<K>> layer{{TruncSubmodule<K>::full(n).str(), TruncSubmodule<K>::full(n)}};
        for (int len = 2 * n; len > n; --len) {
            std::map<std::string, TruncSubmodule<K>> next;
            for (const auto& [key, l] : layer) {
                if (l.type().a2 == 0) {
                    auto m = l.f_times();
                    next.emplace(m.str(), m);
                    continue;
                }
                for (const auto& [a, b] : projective_line_points<K>()) {
                    auto m = colength_one_family(l, a, b);
                    next.emplace(m.str(), m);
                }
            }
            layer = std::move(next);
        }
        std::vector<RefinedStructure<K>> out;
        for (const auto& [key, top] : layer) {
            auto ch = enumerate_chains_fixed_top(top);
            out.insert(out.end(), ch.begin(), ch.end());
        }
        return out;
    }
}

namespace detail {

// rows over k[eps]; returns the eps -> 0 limit of their k(eps)-span in k^dim
template <class K>
Mat<K> limit_at_zero(std::vector<std::vector<Poly<K>>> rows, int dim) {
    // Euclidean row reduction over k[eps] gives a k(eps)-independent set with the same k[eps]-span
    size_t cur = 0;
    for (int c = 0; c < dim && cur < rows.size(); ++c) {
        while (true) {
            int best = -1;
            for (size_t r = cur; r < rows.size(); ++r)
                if (!rows[r][c].is_zero() && (best < 0 || rows[r][c].deg() < rows[best][c].deg())) best = int(r);
            if (best < 0) break;
            std::swap(rows[cur], rows[best]);
            bool clean = true;
            for (size_t r = cur + 1; r < rows.size(); ++r) {
                if (rows[r][c].is_zero()) continue;
                auto q = rows[r][c].divmod(rows[cur][c]).first;
                for (int j = 0; j < dim; ++j) rows[r][j] = rows[r][j] - q * rows[cur][j];
                if (!rows[r][c].is_zero()) clean = false;
            }
            if (clean) {
                ++cur;
                break;
            }
        }
    }
    rows.resize(cur);
    const int r = int(rows.size());
    // saturate at eps = 0
    while (true) {
        Mat<K> m0t(dim, Vec<K>(r, K(0)));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < dim; ++j) m0t[j][i] = rows[i][j].coeff(0);
        auto dep = r ? nullspace(m0t, r) : std::vector<Vec<K>>{};
        if (dep.empty()) break;
        const auto& cvec = dep.front();
        int piv = 0;
        while (cvec[piv].is_zero()) ++piv;
        std::vector<Poly<K>> comb(dim);
        for (int i = 0; i < r; ++i)
            if (!cvec[i].is_zero())
                for (int j = 0; j < dim; ++j) comb[j] = comb[j] + cvec[i] * rows[i][j];
        for (auto& x : comb) x = x.shift_down(1);
        rows[piv] = comb;
    }
    Mat<K> out(r, Vec<K>(dim, K(0)));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < dim; ++j) out[i][j] = rows[i][j].coeff(0);
    return out;
}

}  // namespace detail

// closure of the tableau-T_k stratum below a top of type (1^{n-2},2^1):
// the stratum itself plus the limit of its one-parameter family
template <class K>
std::vector<RefinedStructure<K>> chain_component_closure(const TruncSubmodule<K>& top, int k) {
    const int n = top.order();
    if (!(top.type() == YoungType{n - 2, 1, n})) throw InvalidStructure("component closures need top type (1^{n-2},2^1)");
    const StandardTableau tk = StandardTableau::T_k(n, k);
    std::vector<RefinedStructure<K>> out;
    for (auto& c : enumerate_chains_fixed_top(top))
        if (c.tableau() == tk) out.push_back(c);
    // keep the a2 = 1 direction down to level L = n-k+1, then send the drop parameter to infinity
    std::vector<TruncSubmodule<K>> lv(n + 1, TruncSubmodule<K>::zero(n));
    lv[n] = top;
    const int L = n - k + 1;
    for (int j = n; j > L; --j) lv[j - 1] = colength_one_family(lv[j], K(0), K(1));
    const auto v1 = lv[L].v1(), v2 = lv[L].v2();
    auto as_row = [&](const TruncElement<K>& x, const TruncElement<K>& y) {
        // x + eps * y
        auto cx = x.coords(), cy = y.coords();
        std::vector<Poly<K>> row(2 * n);
        for (int j = 0; j < 2 * n; ++j) row[j] = Poly<K>(std::vector<K>{cx[j], cy[j]});
        return row;
    };
    const TruncElement<K> zero(n, {}, {});
    for (int j = L - 1; j >= 1; --j) {
        const int s = L - 1 - j;
        std::vector<std::vector<Poly<K>>> rows;
        for (int t = 0; s + t < n; ++t) rows.push_back(as_row(v2.f_pow(s + t), v1.f_pow(s + t)));
        for (int t = s + 1; t < n; ++t) {
            rows.push_back(as_row(v1.f_pow(t), zero));
            rows.push_back(as_row(v2.f_pow(t), zero));
        }
        Mat<K> lim = detail::limit_at_zero(rows, 2 * n);
        std::vector<TruncElement<K>> gens;
        for (const auto& r : lim) gens.push_back(TruncElement<K>::from_coords(n, r));
        lv[j] = TruncSubmodule<K>::from_generators(gens, n);
    }
    auto limit = RefinedStructure<K>::from_levels(lv);
    if (std::find(out.begin(), out.end(), limit) == out.end()) out.push_back(limit);
    return out;
}

namespace detail {
template <class K>
Poly<K> random_poly(std::mt19937_64& rng, int len, bool unit) {
    std::vector<K> c(len);
    for (auto& x : c) x = random_element<K>(rng, 3);
    if (unit && len > 0) c[0] = random_nonzero<K>(rng, 3);
    return Poly<K>(c);
}
}  // namespace detail

// genericity via randomized choice of generators; the good set is Zariski open
template <class K>
bool is_generic_structure(const RefinedStructure<K>& s, uint64_t seed = 1, int trials = 0) {
    const auto& top = s.top();
    const YoungType ty = top.type();
    if (ty.a2 == 0) return true;
    const int n = s.order();
    const StandardTableau tab = s.tableau();
    const auto drops = tab.drop_levels();
    if (trials <= 0) trials = K::finite ? 24 : 4;
    std::mt19937_64 rng(seed);
    const TruncElement<K>& V1 = top.v1();
    const TruncElement<K>& V2 = top.v2();
    const int a1n = ty.a1, a2n = ty.a2;
    for (int t = 0; t < trials; ++t) {
        TruncElement<K> v1 = V1, v2 = V2;
        if (t > 0) {
            auto u = detail::random_poly<K>(rng, n, true), r = detail::random_poly<K>(rng, n, false);
            auto sc = detail::random_poly<K>(rng, n, true), a = detail::random_poly<K>(rng, n, false).shift_up(a1n);
            v1 = V1.scale(u) + V2.scale(r);
            v2 = V2.scale(sc) + V1.scale(a);
        }
        bool ok = true;
        for (int k : drops) {
            const YoungType tk = tab.shape(k);
            const int X1 = a1n + a2n - tk.a1 - tk.a2, X2 = a2n - tk.a2;
            auto m = TruncSubmodule<K>::from_generators({v1.f_pow(X1), v2.f_pow(X2)}, n);
            if (m == s.level(k)) { ok = false; break; }
        }
        if (ok) return true;
    }
    return false;
}

// random chain below `top` realizing the tableau `tab`
template <class K>
std::optional<RefinedStructure<K>> random_chain(const TruncSubmodule<K>& top, const StandardTableau& tab, std::mt19937_64& rng) {
    const int n = top.order();
    if (tab.n != n || !(top.type() == tab.top())) return std::nullopt;
    std::vector<TruncSubmodule<K>> lv(n + 1, TruncSubmodule<K>::zero(n));
    lv[n] = top;
    for (int k = n; k >= 1; --k) {
        const auto& l = lv[k];
        const YoungType ty = l.type();
        if (ty.a2 == 0) {
            lv[k - 1] = l.f_times();
        } else if (tab.a2[k - 1] == tab.a2[k]) {
            if (ty.a1 == 0) return std::nullopt;
            lv[k - 1] = colength_one_family(l, K(0), K(1));
        } else if (ty.a1 == 0) {
            K a = random_element<K>(rng, 4), b = random_element<K>(rng, 4);
            if (a.is_zero() && b.is_zero()) a = K(1);
            lv[k - 1] = colength_one_family(l, a, b);
        } else {
            lv[k - 1] = colength_one_family(l, K(1), random_nonzero<K>(rng, 4));
        }
        if (lv[k - 1].type().a2 != tab.a2[k - 1]) return std::nullopt;
    }
    return RefinedStructure<K>::from_levels(std::move(lv));
}

}  // namespace parabtk
