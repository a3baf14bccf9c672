#pragma once

#include <optional>
#include <span>
#include <vector>

#include "csw/error.hpp"
#include "csw/scheme.hpp"

namespace csw {

// Increasing Δ-system: every pair of members meets exactly in `root`, and
// root < D_0 \ root < D_1 \ root < ...
struct DeltaSystem {
    std::vector<std::vector<Position>> members;
    std::vector<Position> root;
};

class NotDeltaError : public Error {
public:
    NotDeltaError(std::size_t i, std::size_t j, const std::string& why)
        : Error(ErrorCode::NotDelta, "members " + std::to_string(i) + " and " + std::to_string(j) + ": " + why),
          i_(i), j_(j) {}

    std::size_t i() const { return i_; }
    std::size_t j() const { return j_; }

private:
    std::size_t i_, j_;
};

// A single member is a Δ-system with empty root. Throws NotDeltaError.
DeltaSystem is_delta_system(std::vector<std::vector<Position>> members);

struct Capture {
    SetId site;
    std::vector<std::size_t> members;  // members[i] is captured by child F_i
};

// Returns the first capture in (rank, lexicographic set, lexicographic member
// subsequence) order; absence is a legitimate answer.
std::optional<Capture> find_capture(const Scheme& scheme, const DeltaSystem& system, std::size_t t);

// Serial reference for find_capture; same result, no OpenMP.
std::optional<Capture> find_capture_serial(const Scheme& scheme, const DeltaSystem& system, std::size_t t);

// Whether `site` captures members[chosen[i]] in children i = 0..|chosen|-1.
bool captures(const Scheme& scheme, SetId site, const DeltaSystem& system, std::span<const std::size_t> chosen);

// D_i = φ_i(D_0) for i < t, with D_0 the given positions (indices into F_0).
DeltaSystem make_captured_family(const Scheme& scheme, SetId site, std::span<const std::size_t> pattern_positions,
                                 std::size_t t);

}  // namespace csw
