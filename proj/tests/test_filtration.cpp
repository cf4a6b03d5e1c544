#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "parabtk/filtration.hpp"

using namespace parabtk;

namespace {

template <class K>
TruncSubmodule<K> top_of_type(int n, int a1, int a2) {
    // <(f^{a2}, 0), (0, f^{a1+a2})> up to the required type
    const int nu = n - a1 - a2, mu = n - a2;
    return TruncSubmodule<K>::from_generators(
        {TruncElement<K>(n, Poly<K>::monomial(K(1), nu), {}), TruncElement<K>(n, {}, Poly<K>::monomial(K(1), mu))}, n);
}

}  // namespace

TEST_CASE("appendix tableau dictionary entries are standard") {
    for (int n = 2; n <= 5; ++n) {
        int idx = 1;
        while (true) {
            StandardTableau t;
            try {
                t = tableau_from_name(n, idx);
            } catch (const std::exception&) {
                break;
            }
            CHECK(t.valid());
            auto name = tableau_name(t);
            REQUIRE(name);
            CHECK(name->index == idx);
            ++idx;
        }
        CHECK(idx > 2);
    }
    CHECK(tableau_from_name(3, 3) == StandardTableau::from_top_down({1, 0, 0}));
    CHECK(tableau_name(StandardTableau::from_top_down({2, 1, 1, 1, 0}))->str() == "T^(5)_VIII");
}

TEST_CASE("tableau enumeration matches the hook-length count") {
    for (int len = 1; len <= 9; ++len)
        for (int a2 = 0; 2 * a2 <= len; ++a2) {
            YoungType t{len - 2 * a2, a2, len};
            auto all = enumerate_tableaus(t);
            CHECK(long(all.size()) == hook_count(t));
            std::set<StandardTableau> uniq(all.begin(), all.end());
            CHECK(uniq.size() == all.size());
            for (const auto& x : all) CHECK(x.valid());
        }
}

TEST_CASE("T_k tableaus") {
    auto t = StandardTableau::T_k(5, 2);
    CHECK(t.top() == YoungType{3, 1, 5});
    CHECK(t.a2 == std::vector<int>{0, 0, 0, 0, 1, 1});
    CHECK(t.drop_levels() == std::vector<int>{3});
    CHECK(StandardTableau::T_k(4, 0) == StandardTableau::free_tableau(4));
    CHECK_THROWS(StandardTableau::T_k(4, 4));
}

TEST_CASE("chain counts over F_q for top type (1^{n-2},2)") {
    for (uint32_t q : {2u, 3u}) {
        FpScope scope(q);
        for (int n = 3; n <= 5; ++n) {
            auto top = top_of_type<Fp>(n, n - 2, 1);
            auto chains = enumerate_chains_fixed_top(top);
            CHECK(long(chains.size()) == long(n - 1) * q + 1);
            for (const auto& c : chains) CHECK(c.top() == top);
        }
    }
}

TEST_CASE("component closures form a chain of projective lines") {
    for (uint32_t q : {2u, 3u}) {
        FpScope scope(q);
        for (int n = 3; n <= 5; ++n) {
            auto top = top_of_type<Fp>(n, n - 2, 1);
            std::vector<std::vector<RefinedStructure<Fp>>> comp;
            for (int k = 1; k <= n - 1; ++k) {
                comp.push_back(chain_component_closure(top, k));
                CHECK(comp.back().size() == q + 1);
            }
            for (int a = 0; a < n - 1; ++a)
                for (int b = a + 1; b < n - 1; ++b) {
                    int common = 0;
                    for (const auto& x : comp[a])
                        for (const auto& y : comp[b])
                            if (x == y) ++common;
                    CHECK(common == (b - a == 1 ? 1 : 0));
                }
        }
    }
}

TEST_CASE("random chains realize the requested tableau") {
    std::mt19937_64 rng(3);
    for (int n = 2; n <= 6; ++n)
        for (int a2 = 0; 2 * a2 <= n; ++a2) {
            auto top = top_of_type<Rat>(n, n - 2 * a2, a2);
            for (const auto& tab : enumerate_tableaus(top.type())) {
                auto c = random_chain(top, tab, rng);
                if (!c) continue;
                CHECK(c->tableau() == tab);
            }
        }
}

TEST_CASE("chain validation errors") {
    using S = TruncSubmodule<Rat>;
    const int n = 2;
    auto full = S::full(n);
    CHECK_THROWS_AS(RefinedStructure<Rat>(n, {full, full}), InvalidStructure);
    CHECK_THROWS_AS(RefinedStructure<Rat>(n, {full}), InvalidStructure);
}

TEST_CASE("free structures are generic") {
    auto g = TruncElement<Rat>(3, Poly<Rat>(Rat(1)), Poly<Rat>(Rat(2)));
    auto s = RefinedStructure<Rat>::free(g);
    CHECK(s.tableau() == StandardTableau::free_tableau(3));
    CHECK(is_generic_structure(s));
}
