#include "parabtk/flatness.hpp"

#include <sstream>

namespace parabtk {

namespace {

Rat random_rat(std::mt19937_64& rng, long num_range, long den) {
    long num = long(rng() % uint64_t(2 * num_range + 1)) - num_range;
    return Rat(num, den);
}

Rat random_nonzero(std::mt19937_64& rng, long range) {
    Rat r;
    do {
        r = random_rat(rng, range, 1 + long(rng() % 3));
    } while (r.is_zero());
    return r;
}

bool add(Mat2<Rat>& acc, const Mat2<Rat>& a, const Rat& s) {
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) acc[j][k] += s * a[j][k];
    return true;
}

bool mat_is_zero(const Mat2<Rat>& a) {
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
            if (!a[j][k].is_zero()) return false;
    return true;
}

// multiplier m with N g = m g mod f^n, g the free generator at point i
Poly<Rat> multiplier_at(const RefinedParabolicBundle<Rat>& B, const Mat2<Rat>& N, int i) {
    const auto& top = B.s[i].top();
    const int n = B.D[i].n;
    const auto g = top.generators().front();
    const auto h = apply_local(N, B.D[i].t, g);
    const int c = g.c[0].coeff(0).is_zero() ? 1 : 0;
    Poly<Rat> m = Poly<Rat>::mul_trunc(h.c[c], g.c[c].inverse_trunc(n), n);
    if (!(g.scale(m) == h)) throw PreconditionError("endomorphism does not preserve the parabolic direction at point " + std::to_string(i));
    return m;
}

}  // namespace

std::vector<FormalDataViolation> validate_formal_data(const FormalData& fd, const std::vector<MarkedPoint<Rat>>& D) {
    std::vector<FormalDataViolation> out;
    const size_t np = D.size();
    if (fd.a.size() != np || fd.r_plus.size() != np || fd.r_minus.size() != np) {
        out.push_back({"shape", "formal data needs one entry per marked point"});
        return out;
    }
    for (size_t i = 0; i < np; ++i) {
        if (int(fd.a[i].size()) != D[i].n) {
            out.push_back({"shape", "point " + std::to_string(i) + " needs " + std::to_string(D[i].n) + " principal coefficients"});
            return out;
        }
    }
    for (size_t i = 0; i < np; ++i)
        if (fd.a[i].back().is_zero()) out.push_back({"(a)", "pole order at point " + std::to_string(i) + " is below its multiplicity"});
    Rat s(fd.d);
    for (size_t i = 0; i < np; ++i) s += fd.r_plus[i] + fd.r_minus[i];
    if (!s.is_zero()) out.push_back({"(b)", "residue sum plus degree is " + s.str()});
    if (np < 24) {
        for (uint32_t mask = 0; mask < (1u << np); ++mask) {
            Rat t;
            for (size_t i = 0; i < np; ++i) t += (mask >> i & 1) ? fd.r_minus[i] : fd.r_plus[i];
            if (t.is_integer()) {
                std::string signs;
                for (size_t i = 0; i < np; ++i) signs += (mask >> i & 1) ? '-' : '+';
                out.push_back({"(c)", "signed residue sum " + signs + " is the integer " + t.str()});
                break;
            }
        }
    }
    for (size_t i = 0; i < np; ++i)
        if (D[i].n == 1 && (fd.r_plus[i] - fd.r_minus[i]).is_integer())
            out.push_back({"(d)", "resonant residues at point " + std::to_string(i)});
    for (size_t i = 0; i < np; ++i)
        if (fd.a[i][0] != fd.r_plus[i] - fd.r_minus[i])
            out.push_back({"residue", "a_{i,1} differs from r^+ - r^- at point " + std::to_string(i)});
    return out;
}

FormalData random_formal_data(const std::vector<MarkedPoint<Rat>>& D, int d, std::mt19937_64& rng) {
    const size_t np = D.size();
    if (np == 0) throw std::invalid_argument("formal data needs at least one point");
    for (int attempt = 0; attempt < 1000; ++attempt) {
        FormalData fd;
        fd.d = d;
        fd.a.resize(np);
        fd.r_plus.resize(np);
        fd.r_minus.resize(np);
        Rat s(d);
        for (size_t i = 0; i < np; ++i) {
            fd.r_plus[i] = random_rat(rng, 20, 7);
            fd.r_minus[i] = random_rat(rng, 20, 7);
        }
        for (size_t i = 0; i + 1 < np; ++i) s += fd.r_plus[i] + fd.r_minus[i];
        fd.r_minus[np - 1] = -s - fd.r_plus[np - 1];
        for (size_t i = 0; i < np; ++i) {
            fd.a[i].resize(D[i].n);
            fd.a[i][0] = fd.r_plus[i] - fd.r_minus[i];
            for (int j = 1; j < D[i].n; ++j) fd.a[i][j] = j + 1 == D[i].n ? random_nonzero(rng, 9) : random_rat(rng, 9, 1 + long(rng() % 3));
        }
        if (validate_formal_data(fd, D).empty()) return fd;
    }
    throw std::runtime_error("could not sample valid formal data");
}

std::vector<Nilpotent> nilpotent_parabolic_endos(const RefinedParabolicBundle<Rat>& B) {
    auto basis = endomorphism_space(B, EndoLevel::TopOnly);
    // traceless part: the trace is a constant
    std::vector<Vec<Rat>> rows{Vec<Rat>(basis.size())};
    for (size_t u = 0; u < basis.size(); ++u) rows[0][u] = detail::mat2_trace_const(basis[u]);
    std::vector<Vec<Rat>> ns = nullspace(rows, int(basis.size()));
    std::vector<Mat2<Rat>> T;
    for (const auto& v : ns) {
        Mat2<Rat> m;
        for (size_t u = 0; u < basis.size(); ++u)
            if (!v[u].is_zero()) add(m, basis[u], v[u]);
        if (!mat_is_zero(m)) T.push_back(m);
    }
    // det vanishes on all of T iff it vanishes on basis elements and pairwise sums
    bool linear = true;
    for (size_t a = 0; a < T.size() && linear; ++a) {
        if (!mat2_det(T[a]).is_zero()) linear = false;
        for (size_t b = a + 1; b < T.size() && linear; ++b) {
            Mat2<Rat> s = T[a];
            add(s, T[b], Rat(1));
            if (!mat2_det(s).is_zero()) linear = false;
        }
    }
    std::vector<Nilpotent> out;
    for (const auto& N : T) {
        if (!linear && !mat2_det(N).is_zero()) continue;
        Nilpotent r;
        r.N = N;
        const int col = (N[0][0].is_zero() && N[1][0].is_zero()) ? 1 : 0;
        r.L0 = detail::saturate_column(B.E, N[0][col], N[1][col]);
        // N = u * f * (u1, -u0), so N = (0 0; f 0) when u = (0, 1)
        const Poly<Rat>& u0 = r.L0.p;
        const Poly<Rat>& u1 = r.L0.q;
        const int c = u0.is_zero() ? 1 : 0;
        const Poly<Rat> phi_u = N[c][col];
        const Poly<Rat> base = c == 0 ? u0 : u1;
        const Poly<Rat> wedge = col == 0 ? u1 : -u0;
        auto [q1, rem1] = phi_u.divmod(base);
        auto [q2, rem2] = q1.divmod(wedge);
        if (!rem1.is_zero() || !rem2.is_zero()) throw std::logic_error("nilpotent factorisation failed");
        r.f = q2;
        out.push_back(std::move(r));
    }
    return out;
}

Rat residue_pairing(const RefinedParabolicBundle<Rat>& B, const Mat2<Rat>& N, const FormalData& fd) {
    if (!B.is_parabolic()) throw PreconditionError("residue pairing needs free top levels");
    if (fd.a.size() != B.D.size()) throw std::invalid_argument("formal data does not match the divisor");
    Rat s;
    for (int i = 0; i < B.npoints(); ++i) {
        Poly<Rat> m = multiplier_at(B, N, i);
        for (int j = 1; j <= B.D[i].n; ++j) s += m.coeff(j - 1) * fd.a[i][j - 1];
    }
    return s;
}

FlatnessResult lambda_flatness(const RefinedParabolicBundle<Rat>& B, const FormalData& fd) {
    if (!B.is_parabolic()) throw PreconditionError("flatness needs free top levels");
    auto viol = validate_formal_data(fd, B.D);
    if (!viol.empty()) throw std::invalid_argument("invalid formal data: " + viol.front().condition + " " + viol.front().detail);
    FlatnessResult r;
    auto dec = is_decomposable(B);
    if (dec.decomposable || dec.geometric) {
        r.decomposable = true;
        r.witness = dec.witness;
        return r;
    }
    r.flat = true;
    for (const auto& nl : nilpotent_parabolic_endos(B)) {
        r.pairings.push_back(residue_pairing(B, nl.N, fd));
        if (!r.pairings.back().is_zero()) r.flat = false;
    }
    return r;
}

// ---- non-simple families ----

const char* flat_shape_name(FlatShape s) {
    switch (s) {
        case FlatShape::S22: return "2+2";
        case FlatShape::S4: return "4";
        case FlatShape::S221: return "2+2+1";
        case FlatShape::S32: return "3+2";
        case FlatShape::S41: return "4+1";
        case FlatShape::S5: return "5";
    }
    return "?";
}

std::optional<FlatShape> flat_shape_from_string(const std::string& s) {
    for (auto sh : {FlatShape::S22, FlatShape::S4, FlatShape::S221, FlatShape::S32, FlatShape::S41, FlatShape::S5})
        if (s == flat_shape_name(sh)) return sh;
    return std::nullopt;
}

std::vector<int> flat_shape_multiplicities(FlatShape s) {
    switch (s) {
        case FlatShape::S22: return {2, 2};
        case FlatShape::S4: return {4};
        case FlatShape::S221: return {2, 2, 1};
        case FlatShape::S32: return {3, 2};
        case FlatShape::S41: return {4, 1};
        case FlatShape::S5: return {5};
    }
    return {};
}

int flat_shape_params(FlatShape s) { return (s == FlatShape::S32 || s == FlatShape::S5) ? 3 : 2; }

std::vector<Rat> default_points(FlatShape s) {
    std::vector<Rat> t;
    for (size_t i = 0; i < flat_shape_multiplicities(s).size(); ++i) t.push_back(Rat(long(i)));
    return t;
}

RefinedParabolicBundle<Rat> nonsimple_family(FlatShape s, const std::vector<Rat>& c, const std::vector<Rat>& t) {
    const auto mult = flat_shape_multiplicities(s);
    if (int(c.size()) != flat_shape_params(s)) throw std::invalid_argument(std::string("family ") + flat_shape_name(s) + " takes " + std::to_string(flat_shape_params(s)) + " parameters");
    if (t.size() != mult.size()) throw std::invalid_argument("wrong number of points for the family");
    RefinedParabolicBundle<Rat> B;
    const bool even = s == FlatShape::S22 || s == FlatShape::S4;
    B.E = {0, even ? 0 : 1};
    // (g; 1) with g given by coefficients in the local parameter
    auto directed = [](int n, std::vector<Rat> g) {
        g.resize(n);
        return RefinedStructure<Rat>::free(TruncElement<Rat>(n, Poly<Rat>(g), Poly<Rat>(Rat(1))));
    };
    auto horizontal = [](int n) { return RefinedStructure<Rat>::free(TruncElement<Rat>(n, Poly<Rat>(Rat(1)), Poly<Rat>())); };
    for (size_t i = 0; i < mult.size(); ++i) B.D.push_back({t[i], mult[i]});
    const Rat z;
    switch (s) {
        case FlatShape::S22:
            B.s = {directed(2, {z, c[0]}), directed(2, {z, c[1]})};
            break;
        case FlatShape::S4:
            B.s = {directed(4, {z, z, c[0], c[1]})};
            break;
        case FlatShape::S221:
            B.s = {directed(2, {z, c[0]}), directed(2, {z, c[1]}), horizontal(1)};
            break;
        case FlatShape::S32:
            B.s = {directed(3, {z, c[0], c[1]}), directed(2, {z, c[2]})};
            break;
        case FlatShape::S41:
            B.s = {directed(4, {z, z, c[0], c[1]}), horizontal(1)};
            break;
        case FlatShape::S5:
            B.s = {directed(5, {z, z, c[0], c[1], c[2]})};
            break;
    }
    B.validate();
    return B;
}

FlatLocus nonsimple_flat_locus(FlatShape s, const FormalData& fd, const std::vector<Rat>& t) {
    const int P = flat_shape_params(s);
    // a generic member fixes the nilpotent; it does not depend on c
    std::vector<Rat> generic(P);
    for (int j = 0; j < P; ++j) generic[j] = Rat(long(j + 2), long(j + 1));
    auto B0 = nonsimple_family(s, generic, t);
    auto viol = validate_formal_data(fd, B0.D);
    if (!viol.empty()) throw std::invalid_argument("invalid formal data: " + viol.front().condition + " " + viol.front().detail);
    auto nil = nilpotent_parabolic_endos(B0);
    if (nil.size() != 1) throw std::logic_error("family member has " + std::to_string(nil.size()) + " nilpotent directions");
    FlatLocus L;
    L.shape = s;
    for (int j = 0; j < P; ++j) {
        std::vector<Rat> e(P);
        e[j] = Rat(1);
        L.functional.push_back(residue_pairing(nonsimple_family(s, e, t), nil[0].N, fd));
    }
    std::vector<Vec<Rat>> rows{L.functional};
    auto ker = nullspace(rows, P);
    L.dimension = int(ker.size()) - 1;
    if (L.dimension == 0) {
        L.point = ker[0];
    } else {
        L.spanning.assign(ker.begin(), ker.end());
    }
    return L;
}

RefinedParabolicBundle<Rat> parab221(const Rat& c0, const Rat& c1) {
    // (c_i (x - t_i)/(x - 2); 1) at t_i = 0, 1 and (1; 0) at 2, so N = (0 0; x-2 0) multiplies by c_i (x - t_i)
    RefinedParabolicBundle<Rat> B;
    B.E = {0, 1};
    B.D = {{Rat(0), 2}, {Rat(1), 2}, {Rat(2), 1}};
    B.s = {RefinedStructure<Rat>::free(TruncElement<Rat>(2, Poly<Rat>(std::vector<Rat>{Rat(0), c0 * Rat(-1, 2)}), Poly<Rat>(Rat(1)))),
           RefinedStructure<Rat>::free(TruncElement<Rat>(2, Poly<Rat>(std::vector<Rat>{Rat(0), -c1}), Poly<Rat>(Rat(1)))),
           RefinedStructure<Rat>::free(TruncElement<Rat>(1, Poly<Rat>(Rat(1)), Poly<Rat>()))};
    B.validate();
    return B;
}

}  // namespace parabtk
