#include <catch_amalgamated.hpp>

#include <random>

#include "parabtk/trunc.hpp"

using namespace parabtk;

namespace {

template <class K>
TruncElement<K> random_elem(std::mt19937_64& rng, int n, int minval = 0) {
    std::vector<K> a(n), b(n);
    for (int i = minval; i < n; ++i) {
        a[i] = random_element<K>(rng, 3);
        b[i] = random_element<K>(rng, 3);
    }
    return {n, Poly<K>(a), Poly<K>(b)};
}

template <class K>
void normal_form_matches_oracle(uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int it = 0; it < 300; ++it) {
        const int n = 1 + int(rng() % 6);
        const int ng = 1 + int(rng() % 3);
        std::vector<TruncElement<K>> gens;
        for (int j = 0; j < ng; ++j) gens.push_back(random_elem<K>(rng, n, int(rng() % (n + 1))));
        auto l = submodule_from_generators(gens, n);
        REQUIRE(l.length() == oracle_length(gens, n));
        REQUIRE(l.type() == oracle_type(gens, n));
        for (const auto& g : gens) REQUIRE(l.contains(g));
        // generators of the normal form span the same module
        auto again = submodule_from_generators(l.generators(), n);
        REQUIRE(again == l);
        REQUIRE(int(l.span_basis().size()) == l.length());
    }
}

}  // namespace

TEST_CASE("normal form agrees with the linear-algebra oracle over Q") { normal_form_matches_oracle<Rat>(11); }

TEST_CASE("normal form agrees with the linear-algebra oracle over F_2, F_3, F_5") {
    for (uint32_t p : {2u, 3u, 5u}) {
        FpScope scope(p);
        normal_form_matches_oracle<Fp>(100 + p);
    }
}

TEST_CASE("type examples") {
    const int n = 3;
    using E = TruncElement<Rat>;
    auto f = Poly<Rat>::x();
    // <(1,0)> is free of rank one
    auto l1 = submodule_from_generators<Rat>({E(n, Poly<Rat>(Rat(1)), {})}, n);
    CHECK(l1.is_free());
    CHECK(l1.type() == YoungType{3, 0, n});
    // f * O^2 has type (2^2)
    auto l2 = submodule_from_generators<Rat>({E(n, f, {}), E(n, {}, f)}, n);
    CHECK(l2.type() == YoungType{0, 2, n});
    CHECK(l2.length() == 4);
    // <(1, 0), (0, f^2)> has type (1^2, 2^1)
    auto l3 = submodule_from_generators<Rat>({E(n, Poly<Rat>(Rat(1)), {}), E(n, {}, f * f)}, n);
    CHECK(l3.type() == YoungType{2, 1, n});
    CHECK(l3.length() == 4);
}

TEST_CASE("mismatched orders are rejected") {
    using E = TruncElement<Rat>;
    E a(2, Poly<Rat>(Rat(1)), {}), b(3, Poly<Rat>(Rat(1)), {});
    CHECK_THROWS_AS(a + b, std::invalid_argument);
    CHECK_THROWS_AS(E(0, {}, {}), std::invalid_argument);
}

TEST_CASE("f-multiplication drops length by the number of cyclic summands") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 100; ++it) {
        const int n = 2 + int(rng() % 4);
        auto l = submodule_from_generators<Rat>({random_elem<Rat>(rng, n), random_elem<Rat>(rng, n, 1)}, n);
        auto fl = l.f_times();
        CHECK(l.contains(fl));
        const int summands = (l.nu() < n) + (l.mu() < n);
        CHECK(l.length() - fl.length() == summands);
    }
}

TEST_CASE("rational parsing and field basics") {
    CHECK(Rat::parse("3/6") == Rat(1, 2));
    CHECK(Rat::parse("-4") == Rat(-4));
    CHECK_THROWS(Rat::parse("1/0"));
    FpScope scope(7);
    CHECK(Fp(3) * Fp(5) == Fp(1));
    CHECK(Fp(3).inv() == Fp(5));
    CHECK(Fp::from_rat(Rat(1, 2)) == Fp(4));
}
