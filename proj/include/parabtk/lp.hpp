#pragma once
#include <vector>

#include "field.hpp"
#include "linalg.hpp"

namespace parabtk {

struct LPResult {
    enum class Status { Optimal, Infeasible, Unbounded } status = Status::Infeasible;
    std::vector<Rat> x;
    Rat value;
};

// maximize c.x subject to A x <= b, x >= 0; exact two-phase simplex, Bland's rule
LPResult lp_maximize(const std::vector<Rat>& c, const Mat<Rat>& A, const std::vector<Rat>& b);

}  // namespace parabtk
