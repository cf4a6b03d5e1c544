#pragma once
#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "poly.hpp"

namespace parabtk {

// element of O_n^2, O_n = k[f]/(f^n)
template <class K>
struct TruncElement {
    int n = 1;
    std::array<Poly<K>, 2> c;

    TruncElement() = default;
    TruncElement(int order, Poly<K> a, Poly<K> b) : n(order) {
        if (order < 1) throw std::invalid_argument("truncation order must be positive");
        c[0] = a.truncate(order);
        c[1] = b.truncate(order);
    }
    static TruncElement unit(int order, int comp) {
        return comp == 0 ? TruncElement(order, Poly<K>(K(1)), {}) : TruncElement(order, {}, Poly<K>(K(1)));
    }

    bool is_zero() const { return c[0].is_zero() && c[1].is_zero(); }
    int valuation() const { return std::min(c[0].valuation(n), c[1].valuation(n)); }

    TruncElement operator+(const TruncElement& o) const {
        check(o);
        return {n, c[0] + o.c[0], c[1] + o.c[1]};
    }
    TruncElement operator-(const TruncElement& o) const {
        check(o);
        return {n, c[0] - o.c[0], c[1] - o.c[1]};
    }
    TruncElement operator-() const { return {n, -c[0], -c[1]}; }
    // O_n-scalar multiple
    TruncElement scale(const Poly<K>& s) const {
        return {n, Poly<K>::mul_trunc(s, c[0], n), Poly<K>::mul_trunc(s, c[1], n)};
    }
    TruncElement scale(const K& s) const { return {n, s * c[0], s * c[1]}; }
    // componentwise product
    TruncElement mul(const TruncElement& o) const {
        check(o);
        return {n, Poly<K>::mul_trunc(c[0], o.c[0], n), Poly<K>::mul_trunc(c[1], o.c[1], n)};
    }
    TruncElement f_pow(int k) const { return {n, c[0].shift_up(k), c[1].shift_up(k)}; }

    // coordinates in k^{2n}: index comp*n + degree
    Vec<K> coords() const {
        Vec<K> v(2 * n, K(0));
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < n; ++i) v[j * n + i] = c[j].coeff(i);
        return v;
    }
    static TruncElement from_coords(int order, const Vec<K>& v) {
        std::vector<K> a(v.begin(), v.begin() + order), b(v.begin() + order, v.begin() + 2 * order);
        return {order, Poly<K>(a), Poly<K>(b)};
    }

    friend bool operator==(const TruncElement& a, const TruncElement& b) {
        return a.n == b.n && a.c[0] == b.c[0] && a.c[1] == b.c[1];
    }
    std::string str() const { return "(" + c[0].str("f") + ", " + c[1].str("f") + ")"; }

private:
    void check(const TruncElement& o) const {
        if (o.n != n) throw std::invalid_argument("incompatible local rings: O_" + std::to_string(n) + " vs O_" + std::to_string(o.n));
    }
};

// two-column partition (1^a1, 2^a2)
struct YoungType {
    int a1 = 0, a2 = 0, n = 0;
    int length() const { return a1 + 2 * a2; }
    int rows() const { return a1 + a2; }
    bool is_free_rank1() const { return a2 == 0; }
    friend bool operator==(const YoungType& a, const YoungType& b) { return a.a1 == b.a1 && a.a2 == b.a2; }
    friend bool operator!=(const YoungType& a, const YoungType& b) { return !(a == b); }
    std::string str() const { return "(1^" + std::to_string(a1) + ",2^" + std::to_string(a2) + ")"; }
};

// O_n-submodule of O_n^2 in normal form:
//   v1 has component `pivot` equal to f^nu, v2 = f^mu e_other (or zero),
//   v1's other component reduced mod f^mu
template <class K>
class TruncSubmodule {
public:
    TruncSubmodule() = default;

    static TruncSubmodule zero(int n) {
        TruncSubmodule s;
        s.n_ = n;
        s.nu_ = s.mu_ = n;
        s.v1_ = s.v2_ = TruncElement<K>(n, {}, {});
        return s;
    }
    static TruncSubmodule full(int n) {
        return from_generators({TruncElement<K>::unit(n, 0), TruncElement<K>::unit(n, 1)}, n);
    }

    static TruncSubmodule from_generators(const std::vector<TruncElement<K>>& gens_in, int n) {
        std::vector<TruncElement<K>> gens;
        for (const auto& g : gens_in) {
            if (g.n != n) throw std::invalid_argument("generator order mismatch");
            if (!g.is_zero()) gens.push_back(g);
        }
        if (gens.empty()) return zero(n);
        TruncSubmodule s;
        s.n_ = n;
        int nu = n;
        for (const auto& g : gens) nu = std::min(nu, g.valuation());
        int pivot = 1;
        for (const auto& g : gens)
            if (g.c[0].valuation(n) == nu) pivot = 0;
        const int other = 1 - pivot;
        size_t gi = 0;
        while (gens[gi].c[pivot].valuation(n) != nu) ++gi;
        const auto& g = gens[gi];
        Poly<K> u = g.c[pivot].shift_down(nu);
        Poly<K> uinv = u.inverse_trunc(n - nu);
        TruncElement<K> v1(n, {}, {});
        v1.c[pivot] = Poly<K>::monomial(K(1), nu).truncate(n);
        v1.c[other] = Poly<K>::mul_trunc(g.c[other], uinv, n);

        int mu = n;
        std::vector<Poly<K>> rest;
        for (size_t j = 0; j < gens.size(); ++j) {
            if (j == gi) continue;
            const auto& h = gens[j];
            Poly<K> sc = h.c[pivot].shift_down(nu);
            Poly<K> r = h.c[other] - Poly<K>::mul_trunc(sc, v1.c[other], n);
            mu = std::min(mu, r.valuation(n));
        }
        // f^{n-nu} v1 lands in the other component only
        mu = std::min(mu, v1.c[other].shift_up(n - nu).truncate(n).valuation(n));
        v1.c[other] = v1.c[other].truncate(mu);
        s.nu_ = nu;
        s.mu_ = mu;
        s.pivot_ = pivot;
        s.v1_ = v1;
        s.v2_ = TruncElement<K>(n, {}, {});
        if (mu < n) s.v2_.c[other] = Poly<K>::monomial(K(1), mu);
        return s;
    }

    int order() const { return n_; }
    int nu() const { return nu_; }
    int mu() const { return mu_; }
    int pivot() const { return pivot_; }
    const TruncElement<K>& v1() const { return v1_; }
    const TruncElement<K>& v2() const { return v2_; }
    bool is_zero() const { return nu_ == n_; }

    int length() const { return (n_ - nu_) + (n_ - mu_); }
    YoungType type() const { return {mu_ - nu_, n_ - mu_, n_}; }
    bool is_free() const { return nu_ == 0 && mu_ == n_; }  // free of rank one

    std::vector<TruncElement<K>> generators() const {
        std::vector<TruncElement<K>> g;
        if (!v1_.is_zero()) g.push_back(v1_);
        if (!v2_.is_zero()) g.push_back(v2_);
        return g;
    }

    bool contains(const TruncElement<K>& x) const {
        if (x.n != n_) throw std::invalid_argument("membership order mismatch");
        if (x.is_zero()) return true;
        if (is_zero()) return false;
        const int other = 1 - pivot_;
        if (x.c[pivot_].valuation(n_) < nu_) return false;
        Poly<K> sc = x.c[pivot_].shift_down(nu_);
        Poly<K> r = x.c[other] - Poly<K>::mul_trunc(sc, v1_.c[other], n_);
        return r.valuation(n_) >= mu_;
    }
    bool contains(const TruncSubmodule& o) const {
        for (const auto& g : o.generators())
            if (!contains(g)) return false;
        return true;
    }
    friend bool operator==(const TruncSubmodule& a, const TruncSubmodule& b) {
        return a.n_ == b.n_ && a.length() == b.length() && a.contains(b);
    }
    friend bool operator!=(const TruncSubmodule& a, const TruncSubmodule& b) { return !(a == b); }

    TruncSubmodule f_times(int k = 1) const {
        std::vector<TruncElement<K>> g;
        for (const auto& x : generators()) g.push_back(x.f_pow(k));
        return from_generators(g, n_);
    }

    // base-field basis of the subspace of k^{2n}
    Mat<K> span_basis() const {
        Mat<K> m;
        for (int j = 0; j < n_ - nu_; ++j) m.push_back(v1_.f_pow(j).coords());
        for (int j = 0; j < n_ - mu_; ++j) m.push_back(v2_.f_pow(j).coords());
        return m;
    }

    std::string str() const {
        if (is_zero()) return "<0>";
        std::string s = "<" + v1_.str();
        if (!v2_.is_zero()) s += ", " + v2_.str();
        return s + ">";
    }

private:
    int n_ = 1, nu_ = 1, mu_ = 1, pivot_ = 0;
    TruncElement<K> v1_, v2_;
};

template <class K>
TruncSubmodule<K> submodule_from_generators(const std::vector<TruncElement<K>>& gens, int n) {
    return TruncSubmodule<K>::from_generators(gens, n);
}

// independent linear-algebra oracle: closes the span under f and measures dimensions
template <class K>
Mat<K> oracle_span(const std::vector<TruncElement<K>>& gens, int n) {
    Mat<K> m;
    for (const auto& g : gens)
        for (int j = 0; j < n; ++j) m.push_back(g.f_pow(j).coords());
    if (m.empty()) return m;
    return row_basis(m, 2 * n);
}

template <class K>
int oracle_length(const std::vector<TruncElement<K>>& gens, int n) {
    return int(oracle_span(gens, n).size());
}

// lambda_j = dim(f^{n-j} O^2 ∩ l) - dim(f^{n-j+1} O^2 ∩ l)
template <class K>
YoungType oracle_type(const std::vector<TruncElement<K>>& gens, int n) {
    Mat<K> l = oracle_span(gens, n);
    const int dl = int(l.size());
    auto cap_dim = [&](int s) {  // dim(f^s O^2 ∩ l)
        Mat<K> v;
        for (int comp = 0; comp < 2; ++comp)
            for (int i = s; i < n; ++i) {
                Vec<K> e(2 * n, K(0));
                e[comp * n + i] = K(1);
                v.push_back(e);
            }
        Mat<K> sum = l;
        sum.insert(sum.end(), v.begin(), v.end());
        return dl + int(v.size()) - rank(sum, 2 * n);
    };
    YoungType t{0, 0, n};
    for (int j = 1; j <= n; ++j) {
        int lam = cap_dim(n - j) - cap_dim(n - j + 1);
        if (lam == 1) ++t.a1;
        if (lam == 2) ++t.a2;
    }
    return t;
}

}  // namespace parabtk
