#pragma once
#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "field.hpp"

namespace parabtk {

// dense univariate polynomial, ascending coefficients, trimmed
template <class K>
class Poly {
public:
    Poly() = default;
    Poly(const K& c) {
        if (!c.is_zero()) c_.push_back(c);
    }
    explicit Poly(std::vector<K> cs) : c_(std::move(cs)) { trim(); }

    static Poly monomial(const K& c, int d) {
        if (c.is_zero()) return {};
        std::vector<K> v(d + 1, K(0));
        v[d] = c;
        return Poly(std::move(v));
    }
    static Poly x() { return monomial(K(1), 1); }
    // (x - t)^k
    static Poly linear_power(const K& t, int k) {
        Poly r(K(1)), l(std::vector<K>{-t, K(1)});
        for (int i = 0; i < k; ++i) r = r * l;
        return r;
    }

    int deg() const { return int(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    K coeff(int i) const { return (i >= 0 && i < int(c_.size())) ? c_[i] : K(0); }
    K lead() const { return c_.empty() ? K(0) : c_.back(); }
    const std::vector<K>& coeffs() const { return c_; }

    // lowest nonzero index; `cap` when zero
    int valuation(int cap) const {
        for (int i = 0; i < int(c_.size()); ++i)
            if (!c_[i].is_zero()) return i;
        return cap;
    }

    void set_coeff(int i, const K& v) {
        if (i >= int(c_.size())) c_.resize(i + 1, K(0));
        c_[i] = v;
        trim();
    }

    K eval(const K& t) const {
        K r(0);
        for (int i = deg(); i >= 0; --i) r = r * t + c_[i];
        return r;
    }

    // p(x + t), i.e. Taylor expansion at t
    Poly shift(const K& t) const {
        std::vector<K> a = c_;
        const int n = int(a.size());
        for (int i = 0; i < n; ++i)
            for (int j = n - 2; j >= i; --j) a[j] += t * a[j + 1];
        return Poly(std::move(a));
    }

    Poly truncate(int n) const {
        if (int(c_.size()) <= n) return *this;
        return Poly(std::vector<K>(c_.begin(), c_.begin() + std::max(n, 0)));
    }
    // divide by f^k, dropping lower terms
    Poly shift_down(int k) const {
        if (k <= 0) return shift_up(-k);
        if (int(c_.size()) <= k) return {};
        return Poly(std::vector<K>(c_.begin() + k, c_.end()));
    }
    Poly shift_up(int k) const {
        if (is_zero() || k == 0) return *this;
        std::vector<K> v(k, K(0));
        v.insert(v.end(), c_.begin(), c_.end());
        return Poly(std::move(v));
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }
    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), K(0));
        for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) { return *this += -o; }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<K> r(a.c_.size() + b.c_.size() - 1, K(0));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(std::move(r));
    }
    friend Poly operator*(const K& s, const Poly& p) {
        if (s.is_zero()) return {};
        Poly r = p;
        for (auto& c : r.c_) c *= s;
        return r;
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    // truncated product mod f^n
    static Poly mul_trunc(const Poly& a, const Poly& b, int n) {
        if (a.is_zero() || b.is_zero() || n <= 0) return {};
        const int m = std::min<int>(n, int(a.c_.size() + b.c_.size()) - 1);
        std::vector<K> r(m, K(0));
        for (int i = 0; i < std::min<int>(m, int(a.c_.size())); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (int j = 0; j < int(b.c_.size()) && i + j < m; ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(std::move(r));
    }

    // inverse of a unit mod f^n
    Poly inverse_trunc(int n) const {
        if (coeff(0).is_zero()) throw std::domain_error("series is not a unit");
        std::vector<K> r(n, K(0));
        const K inv0 = c_[0].inv();
        r[0] = inv0;
        for (int k = 1; k < n; ++k) {
            K s(0);
            for (int j = 1; j <= k && j < int(c_.size()); ++j) s += c_[j] * r[k - j];
            r[k] = -s * inv0;
        }
        return Poly(std::move(r));
    }

    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.is_zero()) throw std::domain_error("polynomial division by zero");
        Poly q, r = *this;
        const K li = d.lead().inv();
        while (!r.is_zero() && r.deg() >= d.deg()) {
            const int s = r.deg() - d.deg();
            const K c = r.lead() * li;
            Poly t = monomial(c, s);
            q += t;
            r -= t * d;
        }
        return {q, r};
    }

    Poly monic() const {
        if (is_zero()) return {};
        return lead().inv() * (*this);
    }

    static Poly gcd(Poly a, Poly b) {
        while (!b.is_zero()) {
            Poly r = a.divmod(b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    std::string str(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::string s;
        for (int i = deg(); i >= 0; --i) {
            if (c_[i].is_zero()) continue;
            std::string cs = c_[i].str();
            bool neg = !cs.empty() && cs[0] == '-';
            if (neg) cs = cs.substr(1);
            if (!s.empty()) s += neg ? " - " : " + ";
            else if (neg) s += "-";
            if (i == 0) s += cs;
            else {
                if (cs != "1") s += cs + "*";
                s += var;
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<K> c_;
};

}  // namespace parabtk
