#include "csw/lp.hpp"

#include <algorithm>
#include <map>

#include "csw/error.hpp"

namespace csw {

namespace {

// Dense tableau over the standard-form system A x = b, x >= 0, b >= 0, with
// one artificial column per row appended last. Artificial columns are kept
// through phase 2 so that B^{-1} (and hence the duals) can be read off.
class Tableau {
public:
    Tableau(std::vector<std::vector<Rational>> rows, std::vector<Rational> rhs, std::size_t structural)
        : rows_(std::move(rows)), rhs_(std::move(rhs)), structural_(structural) {
        const std::size_t m = rows_.size();
        for (std::size_t i = 0; i < m; ++i) {
            rows_[i].resize(structural_ + m);
            rows_[i][structural_ + i] = 1;
            basis_.push_back(structural_ + i);
        }
    }

    std::size_t rows() const { return rows_.size(); }
    std::size_t columns() const { return structural_ + rows_.size(); }
    bool is_artificial(std::size_t j) const { return j >= structural_; }

    // Maximizes c^T x from the current basis, never letting artificial
    // columns enter. Returns false if unbounded.
    bool optimize(const std::vector<Rational>& c) {
        for (;;) {
            const auto d = reduced_costs(c);
            std::size_t enter = columns();
            for (std::size_t j = 0; j < structural_; ++j) {
                if (d[j] > 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == columns()) return true;
            std::size_t leave = rows();
            Rational best_ratio;
            for (std::size_t i = 0; i < rows(); ++i) {
                const auto& a = rows_[i][enter];
                if (a <= 0) continue;
                Rational ratio = rhs_[i] / a;
                if (leave == rows() || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = std::move(ratio);
                }
            }
            if (leave == rows()) return false;
            pivot(leave, enter);
        }
    }

    std::vector<Rational> reduced_costs(const std::vector<Rational>& c) const {
        std::vector<Rational> d(c);
        for (std::size_t i = 0; i < rows(); ++i) {
            const auto& cb = c[basis_[i]];
            if (cb == 0) continue;
            for (std::size_t j = 0; j < columns(); ++j) {
                if (rows_[i][j] != 0) d[j] -= cb * rows_[i][j];
            }
        }
        return d;
    }

    Rational value(const std::vector<Rational>& c) const {
        Rational z = 0;
        for (std::size_t i = 0; i < rows(); ++i) z += c[basis_[i]] * rhs_[i];
        return z;
    }

    // Pivots zero-level artificials out of the basis where some structural
    // column allows it; rows where none does are redundant and stay put.
    void expel_artificials() {
        for (std::size_t i = 0; i < rows(); ++i) {
            if (!is_artificial(basis_[i])) continue;
            for (std::size_t j = 0; j < structural_; ++j) {
                if (rows_[i][j] != 0) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    std::vector<Rational> solution() const {
        std::vector<Rational> x(columns(), Rational(0));
        for (std::size_t i = 0; i < rows(); ++i) x[basis_[i]] = rhs_[i];
        return x;
    }

    // y = c_B^T B^{-1}, from reduced costs of the artificial columns.
    std::vector<Rational> duals(const std::vector<Rational>& c) const {
        const auto d = reduced_costs(c);
        std::vector<Rational> y(rows());
        for (std::size_t i = 0; i < rows(); ++i) y[i] = c[structural_ + i] - d[structural_ + i];
        return y;
    }

private:
    void pivot(std::size_t r, std::size_t s) {
        const Rational a = rows_[r][s];
        for (auto& v : rows_[r]) {
            if (v != 0) v /= a;
        }
        rhs_[r] /= a;
        for (std::size_t i = 0; i < rows(); ++i) {
            if (i == r || rows_[i][s] == 0) continue;
            const Rational factor = rows_[i][s];
            for (std::size_t j = 0; j < columns(); ++j) {
                if (rows_[r][j] != 0) rows_[i][j] -= factor * rows_[r][j];
            }
            rhs_[i] -= factor * rhs_[r];
        }
        basis_[r] = s;
    }

    std::vector<std::vector<Rational>> rows_;
    std::vector<Rational> rhs_;
    std::vector<std::size_t> basis_;
    std::size_t structural_;
};

void check_dimensions(const LinearProgram& lp) {
    if (lp.objective.size() != lp.num_variables) {
        throw Error(ErrorCode::DimensionMismatch, "objective has " + std::to_string(lp.objective.size()) +
                                                      " entries for " + std::to_string(lp.num_variables) + " variables");
    }
    if (!lp.free_variables.empty() && lp.free_variables.size() != lp.num_variables) {
        throw Error(ErrorCode::DimensionMismatch, "free-variable mask has wrong length");
    }
    for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
        if (lp.constraints[i].coefficients.size() != lp.num_variables) {
            throw Error(ErrorCode::DimensionMismatch, "constraint " + std::to_string(i) + " has wrong length");
        }
    }
}

Rational row_value(const Constraint& c, const std::vector<Rational>& x) {
    Rational s = 0;
    for (std::size_t j = 0; j < x.size(); ++j) s += c.coefficients[j] * x[j];
    return s;
}

}  // namespace

LpSolution simplex_solve(const LinearProgram& lp) {
    check_dimensions(lp);
    const std::size_t n = lp.num_variables;
    const std::size_t m = lp.constraints.size();

    // Column layout: each variable (free ones split into +/-), then slacks.
    std::vector<std::size_t> plus(n), minus(n, SIZE_MAX);
    std::size_t cols = 0;
    for (std::size_t j = 0; j < n; ++j) {
        plus[j] = cols++;
        if (lp.is_free(j)) minus[j] = cols++;
    }
    std::vector<std::size_t> slack(m, SIZE_MAX);
    for (std::size_t i = 0; i < m; ++i) {
        if (lp.constraints[i].relation != Relation::Equal) slack[i] = cols++;
    }

    std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(cols, Rational(0)));
    std::vector<Rational> rhs(m);
    std::vector<int> sign(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& con = lp.constraints[i];
        sign[i] = con.rhs < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j) {
            const Rational a = sign[i] * con.coefficients[j];
            rows[i][plus[j]] = a;
            if (minus[j] != SIZE_MAX) rows[i][minus[j]] = -a;
        }
        if (slack[i] != SIZE_MAX) rows[i][slack[i]] = sign[i] * (con.relation == Relation::LessEqual ? 1 : -1);
        rhs[i] = sign[i] * con.rhs;
    }

    Tableau tab(std::move(rows), std::move(rhs), cols);
    LpSolution out;

    std::vector<Rational> phase1(cols + m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) phase1[cols + i] = -1;
    tab.optimize(phase1);
    if (tab.value(phase1) < 0) {
        out.status = LpStatus::Infeasible;
        auto y = tab.duals(phase1);
        for (std::size_t i = 0; i < m; ++i) y[i] *= sign[i];
        out.certificate = std::move(y);
        return out;
    }
    tab.expel_artificials();

    const Rational direction = lp.sense == Sense::Maximize ? 1 : -1;
    std::vector<Rational> phase2(cols + m, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        phase2[plus[j]] = direction * lp.objective[j];
        if (minus[j] != SIZE_MAX) phase2[minus[j]] = -phase2[plus[j]];
    }
    if (!tab.optimize(phase2)) {
        out.status = LpStatus::Unbounded;
        return out;
    }
    out.status = LpStatus::Optimal;
    out.objective = direction * tab.value(phase2);
    const auto x = tab.solution();
    out.primal.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.primal[j] = x[plus[j]];
        if (minus[j] != SIZE_MAX) out.primal[j] -= x[minus[j]];
    }
    auto y = tab.duals(phase2);
    for (std::size_t i = 0; i < m; ++i) y[i] *= direction * sign[i];
    out.certificate = std::move(y);
    return out;
}

bool verify_certificate(const LinearProgram& lp, const LpSolution& sol) {
    check_dimensions(lp);
    const std::size_t n = lp.num_variables;
    const std::size_t m = lp.constraints.size();
    if (sol.status == LpStatus::Unbounded) return true;
    if (sol.certificate.size() != m) return false;
    const auto& y = sol.certificate;

    // +1: row multipliers must be >= 0 on <= rows, <= 0 on >= rows (a
    // Farkas vector or the duals of a maximization); -1 flips both.
    auto row_signs_ok = [&](int orientation) {
        for (std::size_t i = 0; i < m; ++i) {
            const auto rel = lp.constraints[i].relation;
            const Rational v = orientation * y[i];
            if (rel == Relation::LessEqual && v < 0) return false;
            if (rel == Relation::GreaterEqual && v > 0) return false;
        }
        return true;
    };
    auto column = [&](std::size_t j) {
        Rational s = 0;
        for (std::size_t i = 0; i < m; ++i) s += y[i] * lp.constraints[i].coefficients[j];
        return s;
    };
    Rational yb = 0;
    for (std::size_t i = 0; i < m; ++i) yb += y[i] * lp.constraints[i].rhs;

    if (sol.status == LpStatus::Infeasible) {
        if (!row_signs_ok(1) || yb >= 0) return false;
        for (std::size_t j = 0; j < n; ++j) {
            const Rational a = column(j);
            if (lp.is_free(j) ? a != 0 : a < 0) return false;
        }
        return true;
    }

    if (sol.primal.size() != n) return false;
    for (std::size_t j = 0; j < n; ++j) {
        if (!lp.is_free(j) && sol.primal[j] < 0) return false;
    }
    Rational cx = 0;
    for (std::size_t j = 0; j < n; ++j) cx += lp.objective[j] * sol.primal[j];
    if (cx != sol.objective || yb != sol.objective) return false;
    for (const auto& con : lp.constraints) {
        const Rational v = row_value(con, sol.primal);
        if (con.relation == Relation::LessEqual && v > con.rhs) return false;
        if (con.relation == Relation::GreaterEqual && v < con.rhs) return false;
        if (con.relation == Relation::Equal && v != con.rhs) return false;
    }
    const int orientation = lp.sense == Sense::Maximize ? 1 : -1;
    if (!row_signs_ok(orientation)) return false;
    for (std::size_t j = 0; j < n; ++j) {
        const Rational gap = orientation * (column(j) - lp.objective[j]);
        if (lp.is_free(j) ? gap != 0 : gap < 0) return false;
    }
    return true;
}

DualNormResult dual_norm_solve(const SparseVector& g, std::span<const SparseVector> basis) {
    DualNormResult out;
    out.coefficients.assign(basis.size(), Rational(0));
    if (g.empty()) {
        out.in_span = true;
        out.value = 0;
        return out;
    }
    std::map<Position, std::size_t> row_of;
    for (const auto& [p, v] : g.entries()) row_of.emplace(p, 0);
    for (const auto& f : basis) {
        for (const auto& [p, v] : f.entries()) row_of.emplace(p, 0);
    }
    std::size_t r = 0;
    for (auto& [p, i] : row_of) i = r++;

    const std::size_t k = basis.size();
    LinearProgram lp;
    lp.num_variables = 2 * k;
    lp.sense = Sense::Minimize;
    lp.objective.assign(2 * k, Rational(1));
    lp.constraints.resize(row_of.size());
    for (auto& con : lp.constraints) {
        con.coefficients.assign(2 * k, Rational(0));
        con.relation = Relation::Equal;
        con.rhs = 0;
    }
    for (std::size_t j = 0; j < k; ++j) {
        for (const auto& [p, v] : basis[j].entries()) {
            auto& row = lp.constraints[row_of[p]].coefficients;
            row[j] = v;
            row[k + j] = -v;
        }
    }
    for (const auto& [p, v] : g.entries()) lp.constraints[row_of[p]].rhs = v;

    const auto sol = simplex_solve(lp);
    for (const auto& [p, i] : row_of) out.witness.set(p, sol.certificate[i]);
    if (sol.status != LpStatus::Optimal) return out;
    out.in_span = true;
    out.value = sol.objective;
    for (std::size_t j = 0; j < k; ++j) out.coefficients[j] = sol.primal[j] - sol.primal[k + j];
    return out;
}

Rational dual_norm(const SparseVector& g, std::span<const SparseVector> basis) {
    auto res = dual_norm_solve(g, basis);
    if (!res.in_span) throw Error(ErrorCode::NotInSpan, "vector " + g.to_string() + " is not in the span");
    return res.value;
}

HullMembership in_symmetric_hull(const SparseVector& f, std::span<const SparseVector> basis) {
    HullMembership out;
    auto res = dual_norm_solve(f, basis);
    out.member = res.in_span && res.value <= 1;
    if (out.member) {
        out.coefficients = std::move(res.coefficients);
    } else {
        out.separator = std::move(res.witness);
    }
    return out;
}

bool verify_hull_certificate(const SparseVector& f, std::span<const SparseVector> basis, const HullMembership& m) {
    if (m.member) {
        if (m.coefficients.size() != basis.size()) return false;
        SparseVector sum;
        Rational mass = 0;
        for (std::size_t j = 0; j < basis.size(); ++j) {
            if (m.coefficients[j] == 0) continue;
            sum += m.coefficients[j] * basis[j];
            mass += abs_value(m.coefficients[j]);
        }
        return sum == f && mass <= 1;
    }
    // Separator y: either |<h,y>| <= 1 for all h with <f,y> > 1, or
    // <h,y> = 0 for all h with <f,y> != 0.
    const Rational fy = pair(f, m.separator);
    bool bounded = fy > 1;
    bool orthogonal = fy != 0;
    for (const auto& h : basis) {
        const Rational hy = pair(h, m.separator);
        if (abs_value(hy) > 1) bounded = false;
        if (hy != 0) orthogonal = false;
    }
    return bounded || orthogonal;
}

}  // namespace csw
