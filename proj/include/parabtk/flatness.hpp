#pragma once
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bundle.hpp"
#include "stability.hpp"

namespace parabtk {

// principal part of lambda^+ - lambda^- and residues at each point, over Q
struct FormalData {
    std::vector<std::vector<Rat>> a;  // a[i][j-1] = a_{i,j}, coefficient of dx/(x-t_i)^j
    std::vector<Rat> r_plus, r_minus;
    int d = 0;
};

struct FormalDataViolation {
    std::string condition;  // "(a)", "(b)", "(c)", "(d)", "shape", "residue"
    std::string detail;
};

std::vector<FormalDataViolation> validate_formal_data(const FormalData& fd, const std::vector<MarkedPoint<Rat>>& D);

// consistent random data: residues with small denominators, a_{i,1} = r_i^+ - r_i^-
FormalData random_formal_data(const std::vector<MarkedPoint<Rat>>& D, int d, std::mt19937_64& rng);

struct Nilpotent {
    Mat2<Rat> N;
    LineSubbundle<Rat> L0;  // image, the invariant line
    Poly<Rat> f;            // N = f on E/L0 -> L0 in any splitting E = L + L0
};

// nilpotent endomorphisms of (E, l_top); a basis of the radical when B is undecomposable
std::vector<Nilpotent> nilpotent_parabolic_endos(const RefinedParabolicBundle<Rat>& B);

// sum over points of Res(m_i * mu_i), m_i the multiplier of N on the parabolic direction
Rat residue_pairing(const RefinedParabolicBundle<Rat>& B, const Mat2<Rat>& N, const FormalData& fd);

struct FlatnessResult {
    bool flat = false;
    bool decomposable = false;
    std::optional<Decomposition<Rat>> witness;
    std::vector<Rat> pairings;  // one per nilpotent basis element
};

FlatnessResult lambda_flatness(const RefinedParabolicBundle<Rat>& B, const FormalData& fd);
inline bool is_lambda_flat(const RefinedParabolicBundle<Rat>& B, const FormalData& fd) { return lambda_flatness(B, fd).flat; }

// ---- non-simple families ----

enum class FlatShape { S22, S4, S221, S32, S41, S5 };
const char* flat_shape_name(FlatShape s);
std::optional<FlatShape> flat_shape_from_string(const std::string& s);
std::vector<int> flat_shape_multiplicities(FlatShape s);
int flat_shape_params(FlatShape s);

// member of the family with parameters c at the given points (t_1, t_2, ...)
RefinedParabolicBundle<Rat> nonsimple_family(FlatShape s, const std::vector<Rat>& c, const std::vector<Rat>& t);
std::vector<Rat> default_points(FlatShape s);

struct FlatLocus {
    FlatShape shape;
    std::vector<Rat> functional;  // locus = {c : functional . c = 0} in P^{params-1}
    int dimension = 0;            // projective dimension: 0 point, 1 line
    std::optional<std::vector<Rat>> point;
    // two distinct points spanning the line when dimension 1
    std::vector<std::vector<Rat>> spanning;
};

struct UnsupportedShape : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

FlatLocus nonsimple_flat_locus(FlatShape s, const FormalData& fd, const std::vector<Rat>& t);

// the relocated example with D = 2[0] + 2[1] + [2]; multipliers c0 x and c1 (x - 1)
RefinedParabolicBundle<Rat> parab221(const Rat& c0, const Rat& c1);

}  // namespace parabtk
