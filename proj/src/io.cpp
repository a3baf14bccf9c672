#include "csw/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "csw/error.hpp"

namespace csw::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::Parse, what); }

template <class T>
T get(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing key \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        parse_error(std::string("bad value for \"") + key + "\": " + e.what());
    }
}

Origin::Form form_from_name(const std::string& name) {
    using F = Origin::Form;
    for (F f : {F::Base, F::Root, F::First, F::Second, F::Tail, F::Unit, F::Spread, F::Cut}) {
        Origin o;
        o.form = f;
        if (o.form_name() == name) return f;
    }
    parse_error("unknown origin form \"" + name + "\"");
}

Json origin_to_json(const Origin& o) {
    Json j;
    j["form"] = o.form_name();
    j["rank"] = o.rank;
    j["alpha"] = o.alpha;
    j["exponent"] = o.exponent;
    j["steps"] = o.steps;
    if (o.cut) j["cut"] = *o.cut;
    if (o.generator) j["generator"] = *o.generator;
    return j;
}

Origin origin_from_json(const Json& j) {
    Origin o;
    o.form = form_from_name(get<std::string>(j, "form"));
    o.rank = get<int>(j, "rank");
    o.alpha = get<Position>(j, "alpha");
    o.exponent = get<int>(j, "exponent");
    o.steps = get<int>(j, "steps");
    if (j.contains("cut")) o.cut = get<Position>(j, "cut");
    if (j.contains("generator")) o.generator = get<std::size_t>(j, "generator");
    return o;
}

}  // namespace

Json rational_to_json(const Rational& q) { return format_rational(q); }

Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    parse_error("rational must be a \"p/q\" string");
}

Json vector_to_json(const SparseVector& v) {
    Json j = Json::object();
    for (const auto& [p, q] : v.entries()) j[std::to_string(p)] = format_rational(q);
    return j;
}

SparseVector vector_from_json(const Json& j) {
    if (!j.is_object()) parse_error("vector must be an object");
    SparseVector v;
    for (const auto& [key, value] : j.items()) {
        Position p;
        try {
            std::size_t used = 0;
            const unsigned long raw = std::stoul(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
            p = static_cast<Position>(raw);
        } catch (const std::exception&) {
            parse_error("bad position \"" + key + "\"");
        }
        v.add(p, rational_from_json(value));
    }
    return v;
}

Json type_to_json(const TypeSpec& type) {
    Json j;
    j["m"] = type.m;
    j["n"] = std::vector<std::int64_t>(type.n.begin() + 1, type.n.end());
    j["r"] = std::vector<std::int64_t>(type.r.begin() + 1, type.r.end());
    return j;
}

TypeSpec type_from_json(const Json& j) {
    const auto m = get<std::vector<std::int64_t>>(j, "m");
    const auto n = get<std::vector<std::int64_t>>(j, "n");
    const auto r = get<std::vector<std::int64_t>>(j, "r");
    auto v = validate_type(m, n, r);
    if (!v.ok()) {
        const auto& first = v.violations.front();
        throw Error(ErrorCode::ConstraintViolation, first.constraint + " at k=" + std::to_string(first.k) +
                                                        (first.detail.empty() ? "" : ": " + first.detail));
    }
    return *v.spec;
}

Json scheme_to_json(const Scheme& scheme) {
    Json j;
    j["type"] = type_to_json(scheme.type());
    Json levels = Json::array();
    for (int k = 0; k <= scheme.depth(); ++k) {
        Json lvl = Json::array();
        for (const auto& s : scheme.level(k)) lvl.push_back(s.elements);
        levels.push_back(std::move(lvl));
    }
    j["levels"] = std::move(levels);
    Json dec = Json::object();
    for (int k = 1; k <= scheme.depth(); ++k) {
        for (std::uint32_t i = 0; i < scheme.level_size(k); ++i) {
            const auto c = scheme.child_indices({k, i});
            dec[SetId{k, i}.to_string()] = std::vector<std::uint32_t>(c.begin(), c.end());
        }
    }
    j["decomposition"] = std::move(dec);
    return j;
}

Scheme scheme_from_json(const Json& j) {
    const auto& tj = j.is_object() && j.contains("type") ? j.at("type") : Json();
    // The type is stored as given; a bad type is reported by check_axioms.
    TypeSpec type;
    type.m = get<std::vector<std::int64_t>>(tj, "m");
    auto n = get<std::vector<std::int64_t>>(tj, "n");
    auto r = get<std::vector<std::int64_t>>(tj, "r");
    if (type.m.empty()) parse_error("type.m is empty");
    type.depth = static_cast<int>(type.m.size()) - 1;
    type.n = {0};
    type.r = {0};
    type.n.insert(type.n.end(), n.begin(), n.end());
    type.r.insert(type.r.end(), r.begin(), r.end());

    const auto raw = get<std::vector<std::vector<std::vector<Position>>>>(j, "levels");
    if (static_cast<int>(raw.size()) != type.depth + 1) {
        parse_error("expected " + std::to_string(type.depth + 1) + " levels, found " + std::to_string(raw.size()));
    }
    std::vector<std::vector<SchemeSet>> levels(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        for (const auto& elements : raw[k]) {
            SchemeSet s;
            s.elements = elements;
            s.rank = static_cast<int>(k);
            if (k > 0 && k < type.r.size() && type.r[k] >= 0) s.root_size = static_cast<std::size_t>(type.r[k]);
            s.root_size = std::min(s.root_size, s.elements.size());
            levels[k].push_back(std::move(s));
        }
    }

    std::vector<std::vector<std::vector<std::uint32_t>>> children(raw.size());
    const Json dec = j.contains("decomposition") ? j.at("decomposition") : Json::object();
    if (!dec.is_object()) parse_error("decomposition must be an object");
    for (std::size_t k = 1; k < raw.size(); ++k) children[k].resize(raw[k].size());
    for (const auto& [key, value] : dec.items()) {
        SetId id;
        try {
            id = SetId::parse(key);
        } catch (const Error&) {
            parse_error("bad set id \"" + key + "\"");
        }
        if (id.rank < 1 || id.rank >= static_cast<int>(raw.size()) || id.index >= raw[id.rank].size()) {
            parse_error("decomposition key " + key + " names no set of positive rank");
        }
        auto idx = value.get<std::vector<std::uint32_t>>();
        for (auto c : idx) {
            if (c >= raw[id.rank - 1].size()) parse_error("child index out of range in " + key);
        }
        children[id.rank][id.index] = std::move(idx);
    }
    return Scheme(std::move(type), std::move(levels), std::move(children));
}

Json family_to_json(const NormingFamily& family) {
    const auto& scheme = family.scheme();
    Json j;
    j["space"] = to_string(family.kind());
    j["param"] = format_rational(family.parameter());
    j["scale_cap"] = family.scale_cap();
    Json fams = Json::object();
    for (int k = 0; k <= scheme.depth(); ++k) {
        for (std::uint32_t i = 0; i < scheme.level_size(k); ++i) {
            const SetId id{k, i};
            const auto vs = family.vectors(id);
            const auto os = family.origins(id);
            Json list = Json::array();
            for (std::size_t t = 0; t < vs.size(); ++t) {
                Json f;
                f["vec"] = vector_to_json(vs[t]);
                f["origin"] = origin_to_json(os[t].front());
                if (os[t].size() > 1) {
                    Json more = Json::array();
                    for (std::size_t o = 1; o < os[t].size(); ++o) more.push_back(origin_to_json(os[t][o]));
                    f["also"] = std::move(more);
                }
                list.push_back(std::move(f));
            }
            fams[id.to_string()] = std::move(list);
        }
    }
    j["families"] = std::move(fams);
    j["scheme"] = scheme_to_json(scheme);
    return j;
}

NormingFamily family_from_json(const Json& j) {
    const auto space = get<std::string>(j, "space");
    SpaceKind kind;
    if (space == "eps") {
        kind = SpaceKind::Epsilon;
    } else if (space == "k") {
        kind = SpaceKind::KBasis;
    } else {
        parse_error("space must be \"eps\" or \"k\"");
    }
    if (!j.contains("scheme")) parse_error("family file carries no scheme");
    auto scheme = std::make_shared<const Scheme>(scheme_from_json(j.at("scheme")));
    NormingFamily family(scheme, kind, rational_from_json(j.at("param")), get<int>(j, "scale_cap"));
    const auto& fams = j.at("families");
    for (int k = 0; k <= scheme->depth(); ++k) {
        for (std::uint32_t i = 0; i < scheme->level_size(k); ++i) {
            const SetId id{k, i};
            const auto key = id.to_string();
            if (!fams.contains(key)) parse_error("no family for set " + key);
            std::vector<SparseVector> vs;
            std::vector<std::vector<Origin>> os;
            for (const auto& f : fams.at(key)) {
                vs.push_back(vector_from_json(f.at("vec")));
                std::vector<Origin> list{origin_from_json(f.at("origin"))};
                if (f.contains("also")) {
                    for (const auto& o : f.at("also")) list.push_back(origin_from_json(o));
                }
                os.push_back(std::move(list));
            }
            family.assign(id, std::move(vs), std::move(os));
        }
    }
    return family;
}

Json report_to_json(const Report& report) {
    Json j;
    j["title"] = report.title;
    j["pass"] = report.pass();
    Json claims = Json::array();
    for (const auto& c : report.claims) {
        Json cj;
        cj["name"] = c.name;
        cj["lhs"] = format_rational(c.lhs);
        cj["rhs"] = format_rational(c.rhs);
        cj["relation"] = to_string(c.relation);
        cj["pass"] = c.pass;
        cj["witness"] = c.witness;
        claims.push_back(std::move(cj));
    }
    j["claims"] = std::move(claims);
    Json pairings = Json::object();
    for (const auto& [k, v] : report.pairings) pairings[k] = format_rational(v);
    j["pairings"] = std::move(pairings);
    Json norms = Json::object();
    for (const auto& [k, v] : report.norms) norms[k] = format_rational(v);
    j["norms"] = std::move(norms);
    return j;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string report_to_csv(const Report& report) {
    std::ostringstream out;
    out << "name,lhs,relation,rhs,pass,witness\n";
    for (const auto& c : report.claims) {
        out << csv_field(c.name) << ',' << format_rational(c.lhs) << ',' << csv_field(to_string(c.relation)) << ','
            << format_rational(c.rhs) << ',' << (c.pass ? "true" : "false") << ',' << csv_field(c.witness) << '\n';
    }
    return out.str();
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        parse_error(path.string() + ": " + e.what());
    }
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::Io, "cannot rename onto " + path.string());
    }
}

std::filesystem::path output_path(const std::string& name) {
    std::filesystem::path p(name);
    const char* dir = std::getenv("CSW_OUT_DIR");
    if (dir && *dir && !p.has_parent_path() && p.is_relative()) return std::filesystem::path(dir) / p;
    return p;
}

}  // namespace csw::io
