#pragma once

#include <string>
#include <utility>
#include <vector>

#include "csw/rational.hpp"

namespace csw {

enum class Rel { Eq, Le, Ge, Lt, Gt };

std::string to_string(Rel rel);
bool holds(const Rational& lhs, Rel rel, const Rational& rhs);

// One checked statement "lhs rel rhs", always in exact rationals.
struct Claim {
    std::string name;
    Rational lhs;
    Rel relation = Rel::Eq;
    Rational rhs;
    bool pass = false;
    std::string witness;
};

Claim make_claim(std::string name, const Rational& lhs, Rel rel, const Rational& rhs, std::string witness = {});

struct Report {
    std::string title;
    std::vector<Claim> claims;
    std::vector<std::pair<std::string, Rational>> pairings;
    std::vector<std::pair<std::string, Rational>> norms;

    bool pass() const;
    const Claim* find(const std::string& name) const;
    const Rational* norm(const std::string& name) const;
    void add(Claim c) { claims.push_back(std::move(c)); }
};

}  // namespace csw
