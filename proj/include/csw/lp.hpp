#pragma once

#include <span>
#include <vector>

#include "csw/rational.hpp"
#include "csw/sparse_vector.hpp"

namespace csw {

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Maximize, Minimize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct Constraint {
    std::vector<Rational> coefficients;
    Relation relation = Relation::LessEqual;
    Rational rhs;
};

// Variables are nonnegative unless flagged in `free_variables`.
struct LinearProgram {
    std::size_t num_variables = 0;
    Sense sense = Sense::Maximize;
    std::vector<Rational> objective;
    std::vector<Constraint> constraints;
    std::vector<bool> free_variables;  // empty means none are free

    bool is_free(std::size_t j) const { return j < free_variables.size() && free_variables[j]; }
};

// `certificate` holds one multiplier per constraint: dual prices when
// optimal (y^T b equals the objective), a Farkas vector when infeasible
// (y^T A >= 0 in the sign pattern of the rows, y^T b < 0).
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Rational objective;
    std::vector<Rational> primal;
    std::vector<Rational> certificate;
};

// Exact two-phase simplex with Bland's rule. Throws DimensionMismatch on
// malformed input.
LpSolution simplex_solve(const LinearProgram& lp);

// Exact check of the solution and its certificate against the program.
bool verify_certificate(const LinearProgram& lp, const LpSolution& solution);

struct DualNormResult {
    bool in_span = false;
    Rational value;                     // min sum |c_f| when in span
    std::vector<Rational> coefficients; // one per functional, sum c_f f = g
    // In span: y with |<f,y>| <= 1 for all f and <g,y> = value.
    // Out of span: y with <f,y> = 0 for all f and <g,y> < 0.
    SparseVector witness;
};

// min sum |c_f| subject to sum c_f f = g; never throws on out-of-span input.
DualNormResult dual_norm_solve(const SparseVector& g, std::span<const SparseVector> basis);

// Throws NotInSpan when g is not a combination of the basis.
Rational dual_norm(const SparseVector& g, std::span<const SparseVector> basis);

struct HullMembership {
    bool member = false;
    std::vector<Rational> coefficients;  // member: sum c_h h = f, sum |c_h| <= 1
    SparseVector separator;              // non-member: separating witness as in DualNormResult
};

HullMembership in_symmetric_hull(const SparseVector& f, std::span<const SparseVector> basis);

// Recomputes sum c_h h and sum |c_h| exactly; for non-members checks the
// separator instead.
bool verify_hull_certificate(const SparseVector& f, std::span<const SparseVector> basis, const HullMembership& m);

}  // namespace csw
