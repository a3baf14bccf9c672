#include "csw/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "csw/analysis.hpp"
#include "csw/error.hpp"
#include "csw/io.hpp"

namespace csw::cli {

namespace {

// Failures while reading input files map to the I/O exit code.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

io::Json load(const std::string& path) {
    try {
        return io::read_json(path);
    } catch (const Error& e) {
        throw InputError(e.what());
    }
}

std::vector<std::int64_t> parse_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::Parse, "bad integer list \"" + text + "\"");
        }
    }
    return out;
}

// Inline "m;n;r" or a JSON file holding a type (or a scheme with a type).
TypeSpec resolve_type(const std::string& text) {
    if (text.find(';') != std::string::npos) return parse_type(text);
    auto j = load(text);
    if (j.contains("type")) j = j.at("type");
    return io::type_from_json(j);
}

std::shared_ptr<const Scheme> resolve_scheme(const std::string& type, const std::string& scheme_file) {
    if (!scheme_file.empty()) {
        const auto j = load(scheme_file);
        try {
            return std::make_shared<const Scheme>(io::scheme_from_json(j));
        } catch (const Error& e) {
            throw InputError(e.what());
        }
    }
    if (type.empty()) throw Error(ErrorCode::ConfigInvalid, "give --type or --scheme");
    return std::make_shared<const Scheme>(build_scheme(resolve_type(type)));
}

NormingFamily load_family(const std::string& path) {
    const auto j = load(path);
    try {
        return io::family_from_json(j);
    } catch (const Error& e) {
        throw InputError(e.what());
    }
}

void emit(std::ostream& out, const std::string& path, const std::string& content) {
    if (path.empty()) {
        out << content;
    } else {
        io::write_atomic(io::output_path(path), content);
    }
}

std::string dump(const io::Json& j) { return j.dump(2) + "\n"; }

struct ReportOutputs {
    std::string json;
    std::string csv;
};

void add_report_outputs(CLI::App* cmd, ReportOutputs& o) {
    cmd->add_option("--json", o.json, "Write the report as JSON");
    cmd->add_option("--csv", o.csv, "Write the claims as CSV");
}

int finish(const Report& report, const ReportOutputs& o, std::ostream& out) {
    for (const auto& c : report.claims) {
        out << (c.pass ? "PASS  " : "FAIL  ") << c.name << ": " << format_rational(c.lhs) << ' '
            << to_string(c.relation) << ' ' << format_rational(c.rhs);
        if (!c.witness.empty()) out << "  [" << c.witness << ']';
        out << '\n';
    }
    for (const auto& [k, v] : report.norms) out << "norm " << k << " = " << format_rational(v) << '\n';
    if (!o.json.empty()) io::write_atomic(io::output_path(o.json), dump(io::report_to_json(report)));
    if (!o.csv.empty()) io::write_atomic(io::output_path(o.csv), io::report_to_csv(report));
    out << "result: " << (report.pass() ? "pass" : "fail") << '\n';
    return report.pass() ? Pass : ClaimFailure;
}

NormMode parse_mode(const std::string& s) { return s == "all" ? NormMode::All : NormMode::Local; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Construction-scheme norming toolkit", "csw"};
    app.require_subcommand(1);
    std::function<int()> action;

    // type validate
    auto* type_cmd = app.add_subcommand("type", "Type specifications")->require_subcommand(1);
    auto* validate_cmd = type_cmd->add_subcommand("validate", "Check the arithmetic of a type");
    std::string m_text, n_text, r_text, type_text;
    validate_cmd->add_option("--m", m_text, "Set sizes m_0..m_d");
    validate_cmd->add_option("--n", n_text, "Widths n_1..n_d");
    validate_cmd->add_option("--r", r_text, "Root sizes r_1..r_d");
    validate_cmd->add_option("--type", type_text, "Inline m;n;r or JSON file");
    validate_cmd->callback([&] {
        action = [&] {
            std::vector<std::int64_t> m, n, r;
            if (!type_text.empty()) {
                if (type_text.find(';') != std::string::npos) {
                    std::vector<std::string> parts;
                    std::stringstream ss(type_text);
                    std::string p;
                    while (std::getline(ss, p, ';')) parts.push_back(p);
                    parts.resize(3);
                    m = parse_list(parts[0]);
                    n = parse_list(parts[1]);
                    r = parse_list(parts[2]);
                } else {
                    auto j = load(type_text);
                    if (j.contains("type")) j = j.at("type");
                    m = j.at("m").get<std::vector<std::int64_t>>();
                    n = j.at("n").get<std::vector<std::int64_t>>();
                    r = j.at("r").get<std::vector<std::int64_t>>();
                }
            } else {
                m = parse_list(m_text);
                n = parse_list(n_text);
                r = parse_list(r_text);
            }
            const auto v = validate_type(m, n, r);
            if (v.ok()) {
                out << "valid " << format_type(*v.spec) << '\n';
                return int(Pass);
            }
            for (const auto& x : v.violations) {
                out << "invalid k=" << x.k << ' ' << x.constraint;
                if (!x.detail.empty()) out << ": " << x.detail;
                out << '\n';
            }
            return int(ClaimFailure);
        };
    });

    // scheme build|check
    auto* scheme_cmd = app.add_subcommand("scheme", "Build and check schemes")->require_subcommand(1);
    auto* build_cmd = scheme_cmd->add_subcommand("build", "Build the block-splitting scheme of a type");
    std::string out_path;
    build_cmd->add_option("--type", type_text, "Inline m;n;r or JSON file")->required();
    build_cmd->add_option("--out", out_path, "Output file (stdout if omitted)");
    build_cmd->callback([&] {
        action = [&] {
            const auto scheme = build_scheme(resolve_type(type_text));
            emit(out, out_path, dump(io::scheme_to_json(scheme)));
            if (!out_path.empty()) {
                out << "built " << scheme.total_sets() << " sets over " << scheme.universe_size() << " points\n";
            }
            return int(Pass);
        };
    });
    auto* check_cmd = scheme_cmd->add_subcommand("check", "Run the axiom checks on a scheme file");
    std::string in_path;
    check_cmd->add_option("file", in_path, "Scheme JSON")->required();
    check_cmd->callback([&] {
        action = [&] {
            const auto scheme = resolve_scheme("", in_path);
            const auto report = check_axioms(*scheme);
            for (const auto& r : report.results) {
                out << (r.pass ? "PASS  " : "FAIL  ") << r.axiom;
                if (!r.pass) out << ": " << r.counterexample;
                out << '\n';
            }
            out << "result: " << (report.ok() ? "pass" : "fail") << '\n';
            return int(report.ok() ? Pass : ClaimFailure);
        };
    });

    // norming build
    auto* norming_cmd = app.add_subcommand("norming", "Norming families")->require_subcommand(1);
    auto* nbuild_cmd = norming_cmd->add_subcommand("build", "Build a norming family");
    std::string scheme_file, space = "eps", param_text;
    int scale_cap = 2;
    bool literal_root = false;
    nbuild_cmd->add_option("--type", type_text, "Inline m;n;r or JSON file");
    nbuild_cmd->add_option("--scheme", scheme_file, "Scheme JSON instead of --type");
    nbuild_cmd->add_option("--space", space, "eps or k")->check(CLI::IsMember({"eps", "k"}));
    nbuild_cmd->add_option("--param", param_text, "eps or K as p/q")->required();
    nbuild_cmd->add_option("--scale-cap", scale_cap, "Closure steps per level (k only)");
    nbuild_cmd->add_flag("--literal-root-rule", literal_root, "Use h_0 in the root rule (breaks coherence)");
    nbuild_cmd->add_option("--out", out_path, "Output file (stdout if omitted)");
    nbuild_cmd->callback([&] {
        action = [&] {
            const Rational param = parse_rational(param_text);
            if (space == "eps" && !(param > 0 && param < 1)) {
                throw Error(ErrorCode::ConfigInvalid, "eps must lie in (0,1)");
            }
            if (space == "k" && !(param > 1)) throw Error(ErrorCode::ConfigInvalid, "K must exceed 1");
            if (space == "k" && scale_cap < 1) throw Error(ErrorCode::ConfigInvalid, "scale cap must be >= 1");
            const auto scheme = resolve_scheme(type_text, scheme_file);
            const auto family = space == "eps" ? build_eps_family(scheme, param, {literal_root})
                                               : build_K_family(scheme, param, scale_cap);
            emit(out, out_path, dump(io::family_to_json(family)));
            if (!out_path.empty()) out << "built " << family.total_functionals() << " functionals\n";
            return int(Pass);
        };
    });

    // norm eval
    auto* norm_cmd = app.add_subcommand("norm", "Norm evaluation")->require_subcommand(1);
    auto* eval_cmd = norm_cmd->add_subcommand("eval", "Evaluate the norm of a vector");
    std::string family_file, vec_text, mode = "local";
    eval_cmd->add_option("--family", family_file, "Family JSON")->required();
    eval_cmd->add_option("--vec", vec_text, "pos:val,pos:val")->required();
    eval_cmd->add_option("--norm-mode", mode, "local or all")->check(CLI::IsMember({"local", "all"}));
    eval_cmd->callback([&] {
        action = [&] {
            const auto x = SparseVector::parse(vec_text);
            const auto family = load_family(family_file);
            out << format_rational(norm(x, family, parse_mode(mode))) << '\n';
            return int(Pass);
        };
    });

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "Analysis suites")->require_subcommand(1);
    ReportOutputs outputs;
    std::uint64_t seed = 1;
    std::size_t samples = 200;
    auto* biorth_cmd = analyze_cmd->add_subcommand("biorth", "Biorthogonality of the global duals");
    auto* basis_cmd = analyze_cmd->add_subcommand("basis-constant", "Basis constant and prefix inequality");
    auto* coherence_cmd = analyze_cmd->add_subcommand("coherence", "Coherence and invariant sweeps");
    for (auto* c : {biorth_cmd, basis_cmd, coherence_cmd}) {
        c->add_option("--family", family_file, "Family JSON")->required();
        c->add_option("--seed", seed, "Seed for random sweeps");
        c->add_option("--samples", samples, "Random vectors per sweep");
        add_report_outputs(c, outputs);
    }
    biorth_cmd->callback([&] {
        action = [&] {
            const auto family = load_family(family_file);
            return finish(check_biorthogonality(family).report, outputs, out);
        };
    });
    basis_cmd->callback([&] {
        action = [&] {
            const auto family = load_family(family_file);
            const auto c = basis_constant(family);
            Report rep;
            rep.title = "basis constant";
            std::string where = "g#" + std::to_string(c.functional) + " cut " + std::to_string(c.cut);
            if (family.kind() == SpaceKind::KBasis) {
                rep.add(make_claim("basis constant <= K", c.value, Rel::Le, family.parameter(), where));
            } else {
                rep.add(make_claim("basis constant >= 1", c.value, Rel::Ge, 1, where));
            }
            rep.add(check_prefix_inequality(family, c, samples, seed).claim());
            rep.norms.emplace_back("basis_constant", c.value);
            out << "witness " << c.witness.to_string() << '\n';
            return finish(rep, outputs, out);
        };
    });
    coherence_cmd->callback([&] {
        action = [&] {
            const auto family = load_family(family_file);
            Report rep;
            rep.title = "coherence";
            if (family.kind() == SpaceKind::Epsilon) {
                rep.add(check_nonseparability(family).claim());
                rep.add(check_coherence_restriction(family).claim());
            } else {
                rep.add(check_closure(family).claim());
            }
            rep.add(check_coherence_hull(family).claim());
            rep.add(check_transport_invariance(family).claim());
            rep.add(check_norm_well_defined(family, samples, seed).claim());
            return finish(rep, outputs, out);
        };
    });

    // experiment eps|kbasis
    auto* exp_cmd = app.add_subcommand("experiment", "Capture experiments")->require_subcommand(1);
    auto* eps_cmd = exp_cmd->add_subcommand("eps", "Alternating-sum experiment in the eps space");
    auto* k_cmd = exp_cmd->add_subcommand("kbasis", "Block-sum experiment in the K space");
    std::string eps_text, k_text, l_text, kprime_text = "1", site_text, pattern_text;
    int n = 1;
    std::optional<std::int64_t> m_opt;
    for (auto* c : {eps_cmd, k_cmd}) {
        c->add_option("--n", n, "Number of pairs / block length")->required();
        c->add_option("--type", type_text, "Inline m;n;r or JSON file");
        c->add_option("--scheme", scheme_file, "Scheme JSON instead of --type");
        c->add_option("--site", site_text, "Capturing set k:i");
        c->add_option("--pattern", pattern_text, "Pattern on F_0 as slot:val,...");
        add_report_outputs(c, outputs);
    }
    eps_cmd->add_option("--eps", eps_text, "eps as p/q")->required();
    eps_cmd->add_option("--m", m_opt, "Must equal 2n*eps");
    k_cmd->add_option("--k", k_text, "K as p/q")->required();
    k_cmd->add_option("--L", l_text, "L as p/q")->required();
    k_cmd->add_option("--kprime", kprime_text, "K' as p/q");
    k_cmd->add_option("--scale-cap", scale_cap, "Closure steps per level");

    eps_cmd->callback([&] {
        action = [&] {
            EpsExperimentConfig cfg;
            cfg.eps = parse_rational(eps_text);
            cfg.n = n;
            cfg.m = m_opt;
            if (!site_text.empty()) cfg.site = SetId::parse(site_text);
            if (!pattern_text.empty()) cfg.pattern = SparseVector::parse(pattern_text);
            validate(cfg);
            const auto family = build_eps_family(resolve_scheme(type_text, scheme_file), cfg.eps);
            return finish(run_eps_experiment(family, cfg), outputs, out);
        };
    });
    k_cmd->callback([&] {
        action = [&] {
            KExperimentConfig cfg;
            cfg.K = parse_rational(k_text);
            cfg.L = parse_rational(l_text);
            cfg.K_prime = parse_rational(kprime_text);
            cfg.n = n;
            if (!site_text.empty()) cfg.site = SetId::parse(site_text);
            if (!pattern_text.empty()) cfg.pattern = SparseVector::parse(pattern_text);
            validate(cfg);
            if (scale_cap < 1) throw Error(ErrorCode::ConfigInvalid, "scale cap must be >= 1");
            const auto family = build_K_family(resolve_scheme(type_text, scheme_file), cfg.K, scale_cap);
            return finish(run_K_experiment(family, cfg), outputs, out);
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? int(Pass) : int(ConfigError);
    }
    if (!action) return ConfigError;
    try {
        return action();
    } catch (const InputError& e) {
        err << e.what() << '\n';
        return IoError;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return e.code() == ErrorCode::Io ? IoError : ConfigError;
    } catch (const nlohmann::json::exception& e) {
        err << "Parse: " << e.what() << '\n';
        return IoError;
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return ConfigError;
    }
}

}  // namespace csw::cli
