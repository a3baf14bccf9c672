#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "csw/norming.hpp"
#include "csw/report.hpp"
#include "csw/scheme.hpp"

namespace csw::io {

using Json = nlohmann::ordered_json;

Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j);
Json vector_to_json(const SparseVector& v);
SparseVector vector_from_json(const Json& j);

// {"m":[...],"n":[...],"r":[...]}; n and r without the dummy slot.
Json type_to_json(const TypeSpec& type);
TypeSpec type_from_json(const Json& j);

// {"type":..., "levels":[[[...],...],...], "decomposition":{"k:i":[child indices]}}
Json scheme_to_json(const Scheme& scheme);
// Structural errors throw Parse; axioms are not checked here.
Scheme scheme_from_json(const Json& j);

// {"space","param","scale_cap","families":{"k:i":[{"vec","origin"}]},"scheme"}
Json family_to_json(const NormingFamily& family);
NormingFamily family_from_json(const Json& j);

Json report_to_json(const Report& report);
// Header row, one claim per row.
std::string report_to_csv(const Report& report);

Json read_json(const std::filesystem::path& path);
// Writes to a sibling temporary and renames over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);
// Bare file names go to $CSW_OUT_DIR when it is set.
std::filesystem::path output_path(const std::string& name);

}  // namespace csw::io
