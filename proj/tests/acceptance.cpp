// acceptance criteria; one PASS/FAIL line each, runtime limits pinned below
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "fixtures.hpp"
#include "parabtk/atlas.hpp"
#include "parabtk/elm.hpp"
#include "parabtk/flatness.hpp"

using namespace parabtk;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
};

const std::vector<DivisorShape>& shapes() { return all_shapes(); }

const ShapeAtlas& atlas(DivisorShape s) {
    static std::map<DivisorShape, ShapeAtlas> cache;
    auto it = cache.find(s);
    if (it == cache.end()) it = cache.emplace(s, build_atlas(s)).first;
    return it->second;
}

Outcome c1_epsilon() {
    int cells = 0, bad = 0, dev = 0;
    std::string where;
    for (int n = 2; n <= 5; ++n)
        for (const auto& r : epsilon_table(n)) {
            ++cells;
            if (r.eps != r.printed_eps) ++bad, where += " eps@" + r.tab.str();
            if (r.deviation) {
                ++dev;
                const bool expected = r.tab.n == 2 && r.tab.index == 2 && r.m == 2 && r.N == -1 && r.printed_N == -2;
                if (!expected) ++bad, where += " N@" + r.tab.str();
            }
        }
    std::ostringstream os;
    os << cells << " cells, " << dev << " flagged deviation" << where;
    return {bad == 0 && dev == 1, os.str()};
}

Outcome c2_table1() {
    int cells = 0, bad = 0;
    std::string where;
    for (auto s : shapes()) {
        const auto& A = atlas(s);
        for (size_t j = 0; j < A.types.size(); ++j) {
            auto I = democratic_intervals(A.reps[j]);
            auto want = expected_chamber_verdicts(A.types[j].kind);
            for (int c = 0; c < 4; ++c) {
                ++cells;
                if (I.at(chamber_samples()[c]) != want[c]) ++bad, where += " " + shape_name(s) + ":" + A.types[j].str();
            }
        }
    }
    std::ostringstream os;
    os << cells << " cells, " << bad << " mismatches" << where;
    int unreal = 0;
    for (auto s : shapes()) unreal += int(atlas(s).unrealizable.size());
    os << "; " << unreal << " appendix rows without a tame realization (D32)";
    return {bad == 0, os.str()};
}

Outcome c3_walls() {
    const std::vector<Rat> want = {Rat(1, 5), Rat(1, 3), Rat(3, 5)};
    bool ok = true;
    std::string d;
    for (auto s : shapes()) {
        auto w = walls_of(atlas(s).reps);
        if (w != want) {
            ok = false;
            d += " " + shape_name(s);
        }
    }
    const bool r4 = walls_reduced4() == std::vector<Rat>{Rat(1, 4), Rat(1, 2), Rat(3, 4)};
    return {ok && r4, ok ? "all six shapes give {1/5,1/3,3/5}; degree-4 reduced gives {1/4,1/2,3/4}" : "wrong walls:" + d};
}

// D = 2[0] + [1] over F_3, splitting (0,0) and (0,1)
Outcome f3_family(bool free_tops) {
    FpScope scope(3);
    auto s2 = enumerate_structures<Fp>(2), s1 = enumerate_structures<Fp>(1);
    int total = 0, mism = 0, positives = 0;
    for (int d2 : {0, 1})
        for (const auto& a : s2)
            for (const auto& b : s1) {
                RefinedParabolicBundle<Fp> B{{0, d2}, {{Fp(0), 2}, {Fp(1), 1}}, {a, b}};
                if (free_tops && !B.is_parabolic()) continue;
                ++total;
                const bool ti = is_tame(B) && !is_decomposable(B).decomposable;
                const bool other = free_tops ? is_simple_parabolic(B) : find_stabilizing_weights(B, WeightStrategy::ExactLP).found;
                positives += ti;
                mism += ti != other;
            }
    std::ostringstream os;
    os << total << " bundles, " << positives << " tame and undecomposable, " << mism << " mismatches";
    return {mism == 0 && total > 0, os.str()};
}

std::vector<int> random_shape(std::mt19937_64& rng) {
    static const std::vector<std::vector<int>> s = {{2, 1, 1, 1}, {2, 2, 1}, {3, 1, 1}, {3, 2}, {4, 1}, {5}, {2, 1}, {3}};
    return s[rng() % s.size()];
}

Weights random_weights(std::mt19937_64& rng, const std::vector<int>& orders) {
    Weights w;
    for (int n : orders) {
        std::vector<long> v(n);
        for (auto& x : v) x = long(rng() % 13);
        std::sort(v.rbegin(), v.rend());
        std::vector<Rat> r;
        for (long x : v) r.push_back(Rat(x, 12));
        w.w.push_back(r);
    }
    return w;
}

Outcome c6_elm_invariance() {
    std::mt19937_64 rng(606);
    long compared = 0, bad = 0, verdict_bad = 0;
    for (int it = 0; it < 200; ++it) {
        auto shape = random_shape(rng);
        auto B = fixtures::random_bundle<Rat>(rng, shape, int(rng() % 3) - 1, 1, it % 3 == 0);
        const int i0 = int(rng() % shape.size());
        auto R = elm_minus_with_frame(B, i0);
        auto w = random_weights(rng, orders_of(B));
        auto w2 = flip_weights(w, i0);
        for (const auto& pw : stability_profiles(B)) {
            auto L2 = induced_subbundle(B, R, pw.L);
            ++compared;
            if (stab_index(B, pw.L, w) != stab_index(R.bundle, L2, w2)) ++bad;
        }
        const auto half = Weights::democratic(orders_of(B), Rat(1, 2));
        if (is_w_stable(B, half).verdict != is_w_stable(R.bundle, flip_weights(half, i0)).verdict) ++verdict_bad;
    }
    std::ostringstream os;
    os << compared << " subbundle indices, " << bad << " unequal; " << verdict_bad << " verdict changes at w=1/2";
    return {bad == 0 && verdict_bad == 0, os.str()};
}

Outcome c7_involution() {
    std::mt19937_64 rng(707);
    int bad = 0;
    for (int it = 0; it < 100; ++it) {
        auto shape = random_shape(rng);
        auto B = fixtures::random_bundle<Rat>(rng, shape, int(rng() % 3) - 1, 1, it % 2);
        const int i0 = int(rng() % shape.size());
        if (!same_data(double_elm_normalized(B, i0), twist(B, -B.D[i0].n, i0))) ++bad;
    }
    return {bad == 0, "100 instances, " + std::to_string(bad) + " differ"};
}

Outcome c8_type_transform() {
    std::mt19937_64 rng(808);
    int checked = 0, bad = 0;
    for (int n = 3; n <= 5; ++n)
        for (int k = 0; k <= n - 1; ++k) {
            const auto tab = StandardTableau::T_k(n, k);
            const auto want = k == 0 ? tab : StandardTableau::T_k(n, n - k);
            int got = 0;
            for (int tries = 0; got < 4 && tries < 200; ++tries) {
                TruncElement<Rat> u1(n, detail::random_poly<Rat>(rng, n, true), detail::random_poly<Rat>(rng, n, false));
                TruncElement<Rat> u2(n, detail::random_poly<Rat>(rng, n, false), detail::random_poly<Rat>(rng, n, true));
                const int nu = tab.top().a2, mu = n - nu;
                auto top = TruncSubmodule<Rat>::from_generators({u1.f_pow(nu), u2.f_pow(mu)}, n);
                if (top.length() != n) continue;
                auto ch = random_chain(top, tab, rng);
                if (!ch || !is_generic_structure(*ch)) continue;
                ++got;
                ++checked;
                RefinedParabolicBundle<Rat> B{{0, 1}, {{Rat(0), n}}, {*ch}};
                const auto formula = type_transform_formula(tab);
                const auto sheaf = elm_minus(B, 0).s[0].tableau();
                if (!(formula == want) || !(sheaf == want)) ++bad;
            }
            if (got == 0) ++bad;
        }
    return {bad == 0, std::to_string(checked) + " generic chains, " + std::to_string(bad) + " failures"};
}

Outcome c9_flatness() {
    std::mt19937_64 rng(909);
    std::string d;
    bool ok = true;
    // (i) relocated example: flat exactly on c0 a_{1,2} + c1 a_{2,2} = 0
    int i_bad = 0;
    for (int it = 0; it < 20; ++it) {
        auto fd = random_formal_data(parab221(Rat(1), Rat(1)).D, 1, rng);
        const Rat a0 = fd.a[0][1], a1 = fd.a[1][1];
        if (a0.is_zero() && a1.is_zero()) continue;
        const Rat c0 = a1, c1 = -a0;  // the unique projective solution
        if (!is_lambda_flat(parab221(c0, c1), fd)) ++i_bad;
        if (is_lambda_flat(parab221(c0 + Rat(1), c1), fd) && !a0.is_zero()) ++i_bad;
        auto L = nonsimple_flat_locus(FlatShape::S221, fd, {Rat(0), Rat(1), Rat(2)});
        if (L.dimension != 0) ++i_bad;
    }
    d += "(i) " + std::to_string(i_bad) + " bad";
    ok = ok && i_bad == 0;
    // (ii) points and lines
    int ii_bad = 0, on_locus = 0;
    for (auto sh : {FlatShape::S22, FlatShape::S4, FlatShape::S221, FlatShape::S32, FlatShape::S41, FlatShape::S5}) {
        const auto t = default_points(sh);
        const auto B0 = nonsimple_family(sh, std::vector<Rat>(flat_shape_params(sh), Rat(1)), t);
        auto fd = random_formal_data(B0.D, B0.d(), rng);
        auto L = nonsimple_flat_locus(sh, fd, t);
        const bool line = sh == FlatShape::S32 || sh == FlatShape::S5;
        if (L.dimension != (line ? 1 : 0)) ++ii_bad;
        std::vector<std::vector<Rat>> pts;
        if (L.point) pts.push_back(*L.point);
        if (line) {
            std::vector<Rat> mix(3);
            for (int j = 0; j < 3; ++j) mix[j] = L.spanning[0][j] + Rat(3) * L.spanning[1][j];
            pts.push_back(mix);
        }
        for (const auto& c : pts) {
            // outside the open set where the family is defined
            if (sh == FlatShape::S221 && (c[0].is_zero() || c[1].is_zero())) continue;
            if (sh == FlatShape::S32 && (c[0].is_zero() || c[2].is_zero())) continue;
            if ((sh == FlatShape::S41 || sh == FlatShape::S5) && c[0].is_zero()) continue;
            ++on_locus;
            auto B = nonsimple_family(sh, c, t);
            if (!is_lambda_flat(B, fd) || is_simple_parabolic(B)) ++ii_bad;
        }
    }
    d += ", (ii) " + std::to_string(on_locus) + " locus points, " + std::to_string(ii_bad) + " bad";
    ok = ok && ii_bad == 0 && on_locus >= 6;
    // (iii) implications and the n = 4 odd-degree equivalence
    int iii_bad = 0, nonsimple = 0;
    auto sparse = [&](RefinedParabolicBundle<Rat>& B) {
        for (auto& s : B.s) {
            const int m = s.order();
            std::vector<Rat> g(m);
            if (rng() % 2) g[m - 1] = Rat(1);
            s = rng() % 4 ? fixtures::free_at<Rat>(m, g, {Rat(1)}) : fixtures::free_at<Rat>(m, {Rat(1)}, {Rat(0)});
        }
    };
    auto split = [&](int n) {
        std::vector<int> mult;
        for (int left = n; left > 0;) {
            int m = 1 + int(rng() % std::min(left, 3));
            mult.push_back(m);
            left -= m;
        }
        return mult;
    };
    for (int it = 0; it < 100; ++it) {
        auto B = fixtures::random_bundle<Rat>(rng, split(4 + int(rng() % 2)), -int(rng() % 2), int(rng() % 3), true);
        if (rng() % 2) sparse(B);
        auto fd = random_formal_data(B.D, B.d(), rng);
        const bool simple = is_simple_parabolic(B), flat = is_lambda_flat(B, fd);
        auto dec = is_decomposable(B);
        nonsimple += !simple;
        if (simple && !flat) ++iii_bad;
        if (flat && (dec.decomposable || dec.geometric || !is_admissible(B))) ++iii_bad;
    }
    int eq_bad = 0;
    for (int it = 0; it < 50; ++it) {
        const int d1 = -int(rng() % 2);
        auto B = fixtures::random_bundle<Rat>(rng, split(4), d1, d1 + 1 + 2 * int(rng() % 2), true);
        if (rng() % 2) sparse(B);
        auto fd = random_formal_data(B.D, B.d(), rng);
        auto dec = is_decomposable(B);
        const bool simple = is_simple_parabolic(B), flat = is_lambda_flat(B, fd);
        const bool ua = !dec.decomposable && !dec.geometric && is_admissible(B);
        if (simple != flat || flat != ua) ++eq_bad;
    }
    d += ", (iii) " + std::to_string(iii_bad) + " implication failures (" + std::to_string(nonsimple) + " non-simple), " + std::to_string(eq_bad) +
         " n=4 mismatches";
    ok = ok && iii_bad == 0 && eq_bad == 0 && nonsimple > 10;
    return {ok, d};
}

Outcome c10_chain_counts() {
    int bad = 0, tops = 0;
    for (uint32_t q : {2u, 3u}) {
        FpScope scope(q);
        for (int n = 3; n <= 5; ++n) {
            ++tops;
            auto top = TruncSubmodule<Fp>::from_generators(
                {TruncElement<Fp>(n, Poly<Fp>::monomial(Fp(1), 1), {}), TruncElement<Fp>(n, {}, Poly<Fp>::monomial(Fp(1), n - 1))}, n);
            if (top.type() != YoungType{n - 2, 1, n}) ++bad;
            if (long(enumerate_chains_fixed_top(top).size()) != long(n - 1) * q + 1) ++bad;
            std::vector<std::vector<RefinedStructure<Fp>>> comp;
            for (int k = 1; k <= n - 1; ++k) comp.push_back(chain_component_closure(top, k));
            for (int a = 0; a < n - 1; ++a)
                for (int b = a + 1; b < n - 1; ++b) {
                    int common = 0;
                    for (const auto& x : comp[a])
                        for (const auto& y : comp[b]) common += x == y;
                    if (common != (b - a == 1 ? 1 : 0)) ++bad;
                }
        }
    }
    return {bad == 0, std::to_string(tops) + " tops, " + std::to_string(bad) + " failures"};
}

bool general_position_rhs(const RefinedParabolicBundle<Rat>& B) {
    if (B.E.d1 != 0 || B.E.d2 != 1 || !B.is_parabolic()) return false;
    auto dec = is_decomposable(B);
    return !dec.decomposable && !dec.geometric && is_general_position(B);
}

Outcome c11_quarter() {
    std::mt19937_64 rng(1111);
    int total = 0, bad = 0, stable = 0;
    auto check = [&](const RefinedParabolicBundle<Rat>& B) {
        ++total;
        const bool st = is_w_stable(B, Weights::democratic(orders_of(B), Rat(1, 4))).verdict == Verdict::Stable;
        stable += st;
        if (st != general_position_rhs(B)) ++bad;
    };
    static const std::vector<std::vector<int>> five = {{2, 1, 1, 1}, {2, 2, 1}, {3, 1, 1}, {3, 2}, {4, 1}, {5}, {1, 1, 1, 1, 1}};
    for (int it = 0; it < 200; ++it) {
        const int sp = int(rng() % 4);
        SplitType E = sp == 0 ? SplitType{-1, 2} : sp == 1 ? SplitType{-2, 3} : SplitType{0, 1};
        auto B = fixtures::random_bundle<Rat>(rng, five[rng() % five.size()], E.d1, E.d2, it % 4 != 0);
        // special directions now and then
        for (auto& s : B.s)
            if (rng() % 5 == 0) s = fixtures::free_at<Rat>(s.order(), {Rat(0)}, {Rat(1)});
        check(B);
    }
    int reps = 0;
    for (auto s : shapes())
        for (const auto& B : atlas(s).reps) check(B), ++reps;
    std::ostringstream os;
    os << total << " instances (" << reps << " representatives), " << stable << " stable, " << bad << " mismatches";
    return {bad == 0, os.str()};
}

Outcome c12_curves() {
    int minus2 = 0, e0 = 0, generic = 0, bad = 0;
    for (auto s : shapes()) {
        const auto& A = atlas(s);
        for (size_t j = 0; j < A.types.size(); ++j) {
            const auto& t = A.types[j];
            const auto& B = A.reps[j];
            if (t.kind == SpecialKind::D) {
                // the (-2)-curves are E^(k) with k >= 1; E^(0) is not one of them
                if (t.label.rfind("E^(0)", 0) == 0) {
                    ++e0;
                    if (!B.is_parabolic()) ++bad;
                } else {
                    ++minus2;
                    if (B.is_parabolic()) ++bad;
                }
            }
            if (t.kind == SpecialKind::Generic) {
                ++generic;
                const bool st = is_w_stable(B, Weights::democratic(orders_of(B), Rat(1, 2))).verdict == Verdict::Stable;
                if (!st || !B.is_parabolic() || !is_simple_parabolic(B)) ++bad;
            }
        }
    }
    std::ostringstream os;
    os << minus2 << " E^(k>=1) representatives non-free, " << e0 << " E^(0) free, " << generic << " generic stable and simple, " << bad
       << " failures";
    return {bad == 0, os.str()};
}

}  // namespace

int main() {
    const std::vector<Criterion> all = {
        {1, "epsilon tables (n = 2..5) with one flagged cell", 10, c1_epsilon},
        {2, "stability verdicts of special bundles", 60, c2_table1},
        {3, "wall set per divisor shape", 60, c3_walls},
        {4, "tame and undecomposable <=> stabilizable over F_3", 300, [] { return f3_family(false); }},
        {5, "simple <=> tame and undecomposable (free tops) over F_3", 300, [] { return f3_family(true); }},
        {6, "stability index invariance under elm", 60, c6_elm_invariance},
        {7, "elm twice equals the twist", 30, c7_involution},
        {8, "generic T_k transforms to T_{n-k}", 30, c8_type_transform},
        {9, "flatness example, loci and implications", 120, c9_flatness},
        {10, "chain counts and adjacency", 60, c10_chain_counts},
        {11, "stability at w = 1/4 for n = 5", 60, c11_quarter},
        {12, "non-free tops on the (-2)-curves E^(k>=1), generic simple", 30, c12_curves},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.ok && dt <= c.limit_s;
        failed += !pass;
        std::ostringstream tm;
        tm.precision(2);
        tm << std::fixed << dt << "s/" << c.limit_s << "s";
        std::cout << (pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << " [" << tm.str() << "] " << o.detail
                  << (o.ok && !pass ? " (over the time limit)" : "") << std::endl;
    }
    std::cout << (all.size() - failed) << "/" << all.size() << " criteria pass" << std::endl;
    return failed ? 1 : 0;
}
