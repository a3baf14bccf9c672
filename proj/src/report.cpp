#include "csw/report.hpp"

#include <algorithm>

namespace csw {

std::string to_string(Rel rel) {
    switch (rel) {
        case Rel::Eq: return "=";
        case Rel::Le: return "<=";
        case Rel::Ge: return ">=";
        case Rel::Lt: return "<";
        case Rel::Gt: return ">";
    }
    return "?";
}

bool holds(const Rational& lhs, Rel rel, const Rational& rhs) {
    switch (rel) {
        case Rel::Eq: return lhs == rhs;
        case Rel::Le: return lhs <= rhs;
        case Rel::Ge: return lhs >= rhs;
        case Rel::Lt: return lhs < rhs;
        case Rel::Gt: return lhs > rhs;
    }
    return false;
}

Claim make_claim(std::string name, const Rational& lhs, Rel rel, const Rational& rhs, std::string witness) {
    Claim c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.relation = rel;
    c.rhs = rhs;
    c.pass = holds(lhs, rel, rhs);
    c.witness = std::move(witness);
    return c;
}

bool Report::pass() const {
    return std::all_of(claims.begin(), claims.end(), [](const Claim& c) { return c.pass; });
}

const Claim* Report::find(const std::string& name) const {
    for (const auto& c : claims) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

const Rational* Report::norm(const std::string& name) const {
    for (const auto& [k, v] : norms) {
        if (k == name) return &v;
    }
    return nullptr;
}

}  // namespace csw
