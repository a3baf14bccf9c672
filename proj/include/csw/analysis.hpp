#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "csw/norming.hpp"
#include "csw/report.hpp"
#include "csw/scheme.hpp"

namespace csw {

// ---- invariant sweeps ------------------------------------------------------

struct SweepResult {
    std::string name;
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::string counterexample;  // first failure

    bool pass() const { return failures == 0; }
    Claim claim() const;
};

// h_α^F(α) = 1 and h_α^F vanishes below α, every F and α ∈ F.
SweepResult check_nonseparability(const NormingFamily& family);
// h_α^F restricted to E equals h_α^E for every scheme E ⊂ F and α ∈ E.
SweepResult check_coherence_restriction(const NormingFamily& family);
// f restricted to E lies in conv(±H_E), certified by LP, for every f ∈ H_F
// and scheme E ⊂ F.
SweepResult check_coherence_hull(const NormingFamily& family);
// K^{-1}(f restricted below δ) ∈ H_F for f with fewer than scale_cap
// closure steps and δ ∈ F.
SweepResult check_closure(const NormingFamily& family);
// H_{F_i} = φ_i(H_{F_0}) as sets of vectors.
SweepResult check_transport_invariance(const NormingFamily& family);

// Random finitely supported vector inside `host`: random support of size
// 1..|host| and entries p/q with |p| <= 9, 1 <= q <= 6, p != 0.
SparseVector random_vector(std::mt19937_64& rng, std::span<const Position> host);

// Norm over H_E equals norm over H_F for every scheme set containing
// supp(x), for `samples` random x.
SweepResult check_norm_well_defined(const NormingFamily& family, std::size_t samples, std::uint64_t seed);
// Norm values coincide for two K families differing only in scale_cap.
SweepResult check_scale_cap_stability(const NormingFamily& low, const NormingFamily& high, std::size_t samples,
                                      std::uint64_t seed);

// Every f in H_F of `high` lies in conv(±H_F) of `low` (LP certificate) and
// H_F of `low` is contained in that of `high`, for every F: the two norms
// then agree on every vector, not just on samples.
SweepResult check_scale_cap_hulls(const NormingFamily& low, const NormingFamily& high);

// ---- biorthogonality -------------------------------------------------------

struct BiorthogonalityReport {
    Rational diagonal_min;
    Rational diagonal_max;
    Rational off_diagonal_max;
    Position argmax_alpha = 0;
    Position argmax_beta = 0;
    Report report;
};

BiorthogonalityReport check_biorthogonality(const NormingFamily& family);

// ---- basis constant --------------------------------------------------------

struct BasisConstant {
    Rational value;
    Position cut = 0;             // δ: restriction keeps positions < δ
    std::size_t functional = 0;   // index of g in the norming list
    SparseVector restricted;      // g restricted below δ
    SparseVector witness;         // x with ||x|| <= 1 and <g|δ, x> = value
    std::size_t lp_solves = 0;
    std::size_t out_of_span = 0;
};

// max over cuts δ in `positions` and g in `norming` of dual_norm(g|δ, norming).
BasisConstant basis_constant(std::span<const SparseVector> norming, std::span<const Position> positions);
BasisConstant basis_constant(const NormingFamily& family);
BasisConstant basis_constant_serial(std::span<const SparseVector> norming, std::span<const Position> positions);

// ||x|δ|| <= C ||x|| for `samples` random x and every cut; also checks that
// the witness of `constant` attains equality.
SweepResult check_prefix_inequality(const NormingFamily& family, const BasisConstant& constant, std::size_t samples,
                                    std::uint64_t seed);

// ---- capture experiments ---------------------------------------------------

struct EpsExperimentConfig {
    Rational eps;
    int n = 1;
    std::optional<std::int64_t> m;        // must equal 2nε when given
    std::optional<SparseVector> pattern;  // keyed by index in F_0; default unit at first non-root slot
    std::optional<SetId> site;            // default: first set with n_rank >= 2n+2
};

struct KExperimentConfig {
    Rational K;
    Rational K_prime = 1;
    Rational L;
    int n = 1;
    std::optional<SparseVector> pattern;
    std::optional<SetId> site;  // default: first set with n_rank >= 2n
};

// Parameter arithmetic only (m = 2nε, 1/K + 1/n < 1/L, ranges); throws ConfigInvalid.
void validate(const EpsExperimentConfig& config);
void validate(const KExperimentConfig& config);
// Also checks the family and the site; throws ConfigInvalid / CaptureUnavailable.
void validate(const EpsExperimentConfig& config, const NormingFamily& family);
void validate(const KExperimentConfig& config, const NormingFamily& family);

Report run_eps_experiment(const NormingFamily& family, const EpsExperimentConfig& config);
Report run_K_experiment(const NormingFamily& family, const KExperimentConfig& config);

// ---- separation bounds -----------------------------------------------------

struct SeparationConfig {
    Rational tau;
    Rational eps;
    std::optional<Rational> N;  // default: max dual norm of the supplied duals

    // (1/N)(1 - τ(1+ε)/ε)
    Rational delta(const Rational& N_value) const;
};

struct BiorthogonalData {
    std::vector<SparseVector> vectors;  // y_i
    std::vector<SparseVector> duals;    // y*_i
};

// indices = α_0 < ... < α_{2n+1} into the data. Throws NotBiorthogonal with
// a witness pair when the τ-biorthogonality or dual-norm premise fails.
Report verify_separation_bound(const BiorthogonalData& data, const NormingFamily& family, const SeparationConfig& config,
                               std::span<const std::size_t> indices);

// K variant: ||Σ_{i<n} x_i|| <= L ||Σ_{i<n} x_i - Σ_{n<=i<2n} x_i|| and
// the auxiliary ||w|| >= 1/(2K') over 2n chosen vectors.
Report verify_basic_separation(std::span<const SparseVector> xs, const NormingFamily& family, const Rational& K_prime,
                               const Rational& L, std::span<const std::size_t> indices);

}  // namespace csw
