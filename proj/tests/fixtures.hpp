#pragma once
#include <random>
#include <vector>

#include "parabtk/bundle.hpp"

namespace fixtures {

using namespace parabtk;

// structure spanned by (a(f), b(f)) at a point of multiplicity n
template <class K>
RefinedStructure<K> free_at(int n, const std::vector<K>& a, const std::vector<K>& b) {
    return RefinedStructure<K>::free(TruncElement<K>(n, Poly<K>(a), Poly<K>(b)));
}

template <class K>
RefinedParabolicBundle<K> bundle(int d1, int d2, std::vector<MarkedPoint<K>> D, std::vector<RefinedStructure<K>> s) {
    RefinedParabolicBundle<K> B{{d1, d2}, std::move(D), std::move(s)};
    B.validate();
    return B;
}

// a random structure at a point of multiplicity n, any tableau
template <class K>
RefinedStructure<K> random_structure(std::mt19937_64& rng, int n, bool parabolic) {
    if (parabolic || rng() % 3 == 0) {
        std::vector<K> a(n), b(n);
        for (auto& x : a) x = random_element<K>(rng, 3);
        for (auto& x : b) x = random_element<K>(rng, 3);
        if (a[0].is_zero() && b[0].is_zero()) (rng() % 2 ? a : b)[0] = K(1);
        return free_at(n, a, b);
    }
    while (true) {
        // a random length-n top, then a random chain under it
        const int a2 = int(rng() % (n / 2 + 1));
        const int nu = a2, mu = n - a2;
        std::vector<K> c(n);
        for (int j = nu; j < mu; ++j) c[j] = random_element<K>(rng, 3);
        TruncElement<K> g1(n, {}, {}), g2(n, {}, {});
        const int piv = int(rng() % 2);
        g1.c[piv] = Poly<K>::monomial(K(1), nu);
        g1.c[1 - piv] = Poly<K>(c);
        g2.c[1 - piv] = Poly<K>::monomial(K(1), mu).truncate(n);
        auto top = TruncSubmodule<K>::from_generators({g1, g2}, n);
        if (top.length() != n) continue;
        auto tabs = enumerate_tableaus(top.type());
        auto ch = random_chain(top, tabs[rng() % tabs.size()], rng);
        if (ch) return *ch;
    }
}

template <class K>
RefinedParabolicBundle<K> random_bundle(std::mt19937_64& rng, const std::vector<int>& mult, int d1, int d2, bool parabolic) {
    RefinedParabolicBundle<K> B;
    B.E = {d1, d2};
    std::vector<K> used;
    for (int n : mult) {
        K t;
        do {
            t = random_element<K>(rng, 6);
        } while (std::find(used.begin(), used.end(), t) != used.end());
        used.push_back(t);
        B.D.push_back({t, n});
        B.s.push_back(random_structure<K>(rng, n, parabolic));
    }
    B.validate();
    return B;
}

}  // namespace fixtures
