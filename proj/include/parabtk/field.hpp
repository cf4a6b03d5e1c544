#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace parabtk {

// rationals, thin wrapper over mpq_class
class Rat {
public:
    Rat() = default;
    Rat(int v) : v_(v) {}
    Rat(long v) : v_(v) {}
    Rat(long num, long den) : v_(num, den) {
        if (den == 0) throw std::domain_error("zero denominator");
        v_.canonicalize();
    }
    explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    // accepts "p", "-p", "p/q"
    static Rat parse(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("not a rational: " + s);
        if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
        q.canonicalize();
        return Rat(q);
    }

    const mpq_class& raw() const { return v_; }
    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    int sign() const { return sgn(v_); }
    bool is_integer() const { return v_.get_den() == 1; }
    Rat inv() const {
        if (is_zero()) throw std::domain_error("inverse of zero");
        return Rat(mpq_class(1) / v_);
    }
    std::string str() const { return v_.get_str(); }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) throw std::domain_error("division by zero");
        v_ /= o.v_;
        return *this;
    }
    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

    static constexpr bool finite = false;
    static uint32_t characteristic() { return 0; }
    static std::string field_name() { return "Q"; }
    static Rat from_rat(const Rat& r) { return r; }

private:
    mpq_class v_;
};

// prime field with a thread-local modulus; set it with FpScope
class Fp {
public:
    Fp() = default;
    Fp(long v) {
        const int64_t p = modulus();
        int64_t r = static_cast<int64_t>(v % p);
        if (r < 0) r += p;
        v_ = static_cast<uint32_t>(r);
    }

    static uint32_t modulus() {
        if (p_ == 0) throw std::logic_error("Fp modulus not set");
        return p_;
    }
    static void set_modulus(uint32_t p) { p_ = p; }
    static bool is_prime(uint64_t p) {
        if (p < 2) return false;
        for (uint64_t d = 2; d * d <= p; ++d)
            if (p % d == 0) return false;
        return true;
    }

    static Fp from_rat(const Rat& r) {
        const mpz_class p = modulus();
        mpz_class num = r.raw().get_num() % p, den = r.raw().get_den() % p;
        if (den == 0) throw std::domain_error("denominator vanishes mod p: " + r.str());
        return Fp(num.get_si()) / Fp(den.get_si());
    }

    uint32_t value() const { return v_; }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    Fp inv() const {
        if (v_ == 0) throw std::domain_error("inverse of zero");
        // Fermat
        uint64_t r = 1, b = v_, e = modulus() - 2;
        const uint64_t p = modulus();
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        Fp out;
        out.v_ = static_cast<uint32_t>(r);
        return out;
    }
    std::string str() const { return std::to_string(v_); }

    Fp operator-() const {
        Fp o;
        o.v_ = v_ == 0 ? 0 : modulus() - v_;
        return o;
    }
    Fp& operator+=(const Fp& o) {
        uint64_t s = uint64_t(v_) + o.v_;
        if (s >= modulus()) s -= modulus();
        v_ = static_cast<uint32_t>(s);
        return *this;
    }
    Fp& operator-=(const Fp& o) { return *this += -o; }
    Fp& operator*=(const Fp& o) {
        v_ = static_cast<uint32_t>(uint64_t(v_) * o.v_ % modulus());
        return *this;
    }
    Fp& operator/=(const Fp& o) { return *this *= o.inv(); }
    friend Fp operator+(Fp a, const Fp& b) { return a += b; }
    friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
    friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
    friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
    friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Fp& a, const Fp& b) { return a.v_ != b.v_; }

    static constexpr bool finite = true;
    static uint32_t characteristic() { return modulus(); }
    static std::string field_name() { return "F_" + std::to_string(modulus()); }

    static std::vector<Fp> elements() {
        std::vector<Fp> out;
        for (uint32_t i = 0; i < modulus(); ++i) out.emplace_back(long(i));
        return out;
    }

private:
    uint32_t v_ = 0;
    static inline thread_local uint32_t p_ = 0;
};

class FpScope {
public:
    explicit FpScope(uint32_t p) : saved_(peek()) {
        if (!Fp::is_prime(p)) throw std::invalid_argument("modulus is not prime: " + std::to_string(p));
        Fp::set_modulus(p);
    }
    ~FpScope() { Fp::set_modulus(saved_); }
    FpScope(const FpScope&) = delete;
    FpScope& operator=(const FpScope&) = delete;

private:
    static uint32_t peek() {
        try {
            return Fp::modulus();
        } catch (const std::logic_error&) {
            return 0;
        }
    }
    uint32_t saved_;
};

// runtime description of the base field
struct FieldConfig {
    uint32_t p = 0;  // 0 = Q
    bool is_rational() const { return p == 0; }
    static FieldConfig rationals() { return {}; }
    static FieldConfig prime(uint32_t q) {
        if (!Fp::is_prime(q)) throw std::invalid_argument("not a prime: " + std::to_string(q));
        return {q};
    }
    std::string str() const { return p == 0 ? "q" : "fp:" + std::to_string(p); }
};

template <class K>
K random_element(std::mt19937_64& rng, int height = 5) {
    if constexpr (K::finite) {
        std::uniform_int_distribution<long> d(0, long(K::characteristic()) - 1);
        return K(d(rng));
    } else {
        std::uniform_int_distribution<long> d(-height, height);
        std::uniform_int_distribution<long> den(1, 3);
        long a = d(rng);
        long b = (rng() % 4 == 0) ? den(rng) : 1;
        return K(a, b);
    }
}

template <class K>
K random_nonzero(std::mt19937_64& rng, int height = 5) {
    for (;;) {
        K x = random_element<K>(rng, height);
        if (!x.is_zero()) return x;
    }
}

// exact square root when it exists in the base field
inline bool field_sqrt(const Rat& a, Rat& out) {
    if (a.sign() < 0) return false;
    mpz_class n = a.raw().get_num(), d = a.raw().get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    out = Rat(mpq_class(rn, rd));
    return true;
}

inline bool field_sqrt(const Fp& a, Fp& out) {
    for (uint32_t i = 0; i < Fp::modulus(); ++i) {
        Fp x{long(i)};
        if (x * x == a) {
            out = x;
            return true;
        }
    }
    return false;
}

}  // namespace parabtk
