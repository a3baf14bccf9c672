#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csw/rational.hpp"
#include "csw/scheme.hpp"
#include "csw/sparse_vector.hpp"

namespace csw {

enum class SpaceKind { Epsilon, KBasis };

std::string to_string(SpaceKind kind);

// How a functional came about. For the ε family `rule` is 0 on rank-0 sets
// and 1..4 for the four amalgamation cases (root / first piece / second
// piece / later pieces); `alpha` is the index point. For the K family the
// form is unit (e_α), spread (of a functional of the first piece) or cut
// (K^{-j} times a restricted unit or spread); `exponent` is the total power
// of 1/K and `steps` the number of closure steps taken at this level.
struct Origin {
    enum class Form { Base, Root, First, Second, Tail, Unit, Spread, Cut };

    Form form = Form::Base;
    int rank = 0;
    Position alpha = 0;
    int exponent = 0;
    int steps = 0;
    std::optional<Position> cut;
    std::optional<std::size_t> generator;  // index into H_{F_0}

    int rule() const;
    std::string form_name() const;
};

struct Functional {
    SparseVector vector;
    std::vector<Origin> origins;  // first entry is the primary origin
    SetId home;

    const Origin& origin() const { return origins.front(); }
};

class NormingFamily {
public:
    NormingFamily(std::shared_ptr<const Scheme> scheme, SpaceKind kind, Rational parameter, int scale_cap);

    const Scheme& scheme() const { return *scheme_; }
    std::shared_ptr<const Scheme> scheme_ptr() const { return scheme_; }
    SpaceKind kind() const { return kind_; }
    const Rational& parameter() const { return parameter_; }
    int scale_cap() const { return scale_cap_; }

    std::span<const SparseVector> vectors(SetId id) const { return vectors_.at(id.rank).at(id.index); }
    std::span<const std::vector<Origin>> origins(SetId id) const { return origins_.at(id.rank).at(id.index); }
    Functional functional(SetId id, std::size_t i) const;
    std::size_t total_functionals() const;

    // ε family only: h_α^F, stored in element order of F.
    const SparseVector& h(SetId id, Position alpha) const;

    void assign(SetId id, std::vector<SparseVector> vectors, std::vector<std::vector<Origin>> origins);

private:
    std::shared_ptr<const Scheme> scheme_;
    SpaceKind kind_;
    Rational parameter_;
    int scale_cap_;
    std::vector<std::vector<std::vector<SparseVector>>> vectors_;
    std::vector<std::vector<std::vector<std::vector<Origin>>>> origins_;
};

// f(φ_i^{-1}(γ)) at γ in the i-th piece of F; f must live on the first piece.
SparseVector spread(const SparseVector& f, const Scheme& scheme, SetId site);
Functional spread(const Functional& f, const Scheme& scheme, SetId site);

struct EpsOptions {
    // Use h_{min F_0}^{F_0} literally as the first summand of the root rule
    // instead of h_α^{F_0}. Only for demonstrating that coherence breaks.
    bool literal_root_rule = false;
};

NormingFamily build_eps_family(std::shared_ptr<const Scheme> scheme, const Rational& eps, EpsOptions options = {});
NormingFamily build_K_family(std::shared_ptr<const Scheme> scheme, const Rational& K, int scale_cap);

enum class NormMode { Local, All };

struct NormEvaluation {
    Rational value;
    std::optional<SetId> site;  // set whose family attained the max
    std::size_t index = 0;      // maximizing functional within it
};

// Local mode: max |<f,x>| over H_F for the minimal-rank F containing
// supp(x). All mode: max over every H_F of the scheme.
NormEvaluation evaluate_norm(const SparseVector& x, const NormingFamily& family, NormMode mode = NormMode::Local);
Rational norm(const SparseVector& x, const NormingFamily& family, NormMode mode = NormMode::Local);
// max over H_F for the given F (F must contain supp(x)).
Rational norm_on(const SparseVector& x, const NormingFamily& family, SetId site);

struct GlobalDual {
    Position alpha;
    SparseVector vector;
};

GlobalDual global_dual(const NormingFamily& family, Position alpha);

}  // namespace csw
