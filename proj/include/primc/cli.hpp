#pragma once

// Command-line front end: argument parsing, dispatch and serialisation.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "capparelli.hpp"
#include "characters.hpp"
#include "crystal.hpp"
#include "energy.hpp"
#include "errors.hpp"
#include "partitions.hpp"
#include "series.hpp"

namespace primc::cli {

inline constexpr const char* kToolVersion = "1.0.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    int n = 0;
    int level = 0;
    std::int64_t trunc = 10;
    int max_weight = 10;
    bool minimal = false;
    bool principal = false;
    std::string format;   // json, csv, dot or text; empty picks the command default
    std::string formula;  // gf: ct|lattice|theta|grounded, character: kp|positive|gp
    std::string basis = "qb";
    std::optional<std::string> spec_path;
    std::optional<std::string> output_path;
};

using nlohmann::json;

inline json part_json(const partitions::ColouredPart& p) {
    return {{"size", p.size}, {"colour", energy::name(p.colour)}};
}
inline json parts_json(const std::vector<partitions::ColouredPart>& parts) {
    json a = json::array();
    for (const auto& p : parts) a.push_back(part_json(p));
    return a;
}

inline json alpha_json(const AlphaExpansion& e) {
    json terms = json::array();
    for (const auto& [m, c] : e.terms) terms.push_back({{"alpha", m.c}, {"coef", c.str()}});
    return {{"n", e.n}, {"positive", e.positive()}, {"violations", e.violations.size()}, {"terms", terms}};
}

inline json report_json(const characters::VerificationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) {
        json j{{"name", c.name}, {"passed", c.passed}};
        if (!c.detail.empty()) j["detail"] = c.detail;
        checks.push_back(j);
    }
    return {{"n", r.n}, {"level", r.ell}, {"trunc", r.trunc}, {"passed", r.passed()}, {"checks", checks}};
}

inline std::string report_text(const characters::VerificationReport& r) {
    std::ostringstream os;
    for (const auto& c : r.checks) {
        os << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) os << ": " << c.detail;
        os << "\n";
    }
    std::size_t ok = 0;
    for (const auto& c : r.checks) ok += c.passed;
    os << ok << "/" << r.checks.size() << " checks passed\n";
    return os.str();
}

inline capparelli::CapparelliSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read spec file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("spec file '" + path + "' is not valid JSON: " + e.what());
    }
    return capparelli::spec_from_json(j);
}

namespace detail {

inline void require_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
    for (const char* f : allowed)
        if (c.format == f) return;
    std::string list;
    for (const char* f : allowed) list += (list.empty() ? "" : ", ") + std::string(f);
    throw UsageError("--format " + c.format + " is not available for " + c.command + " (use " + list + ")");
}

inline json params(const RunConfig& c) {
    json p{{"n", c.n}};
    if (c.command == "enumerate") {
        p["level"] = c.level;
        p["max-weight"] = c.max_weight;
        p["minimal"] = c.minimal;
    } else if (c.command == "capparelli") {
        p["max-weight"] = c.max_weight;
        p["spec"] = c.spec_path.value_or("");
    } else if (c.command == "gf" || c.command == "character") {
        p["level"] = c.level;
        p["trunc"] = c.trunc;
        p["formula"] = c.formula;
        if (c.command == "gf") p["minimal"] = c.minimal;
        if (c.command == "character") p["basis"] = c.basis;
    } else if (c.command == "verify") {
        p["level"] = c.level;
        p["trunc"] = c.trunc;
        p["principal"] = c.principal;
        if (c.spec_path) p["spec"] = *c.spec_path;
    }
    return p;
}

inline std::string envelope(const RunConfig& c, json result) {
    json doc{{"tool-version", kToolVersion}, {"command", c.command}, {"params", params(c)}, {"result", std::move(result)}};
    return doc.dump(2) + "\n";
}

inline std::string energy_doc(const RunConfig& c) {
    require_format(c, {"json", "csv"});
    const auto t = energy::energy_table(c.n);
    const auto cols = energy::colours(c.n);
    if (c.format == "csv") {
        std::ostringstream os;
        os << "earlier\\later";
        for (auto col : cols) os << "," << energy::name(col);
        os << "\n";
        for (auto row : cols) {
            os << energy::name(row);
            for (auto col : cols) os << "," << t.between(row, col);
            os << "\n";
        }
        return os.str();
    }
    json names = json::array(), matrix = json::array();
    for (auto row : cols) {
        names.push_back(energy::name(row));
        json r = json::array();
        for (auto col : cols) r.push_back(t.between(row, col));
        matrix.push_back(r);
    }
    const auto th = energy::verify_theorem(c.n, t);
    return envelope(c, {{"colours", names}, {"matrix", matrix}, {"rows", "earlier part"},
                        {"columns", "later part"}, {"equals-minimal-difference", th.passed}});
}

inline std::string graph_doc(const RunConfig& c) {
    require_format(c, {"dot", "json"});
    const auto g = crystal::pair_graph(c.n);
    if (c.format == "dot") return crystal::to_dot(g);
    json verts = json::array(), edges = json::array();
    for (std::size_t v = 0; v < g.vertices.size(); ++v) verts.push_back(g.node_id(static_cast<int>(v)));
    for (const auto& e : g.edges) edges.push_back({{"from", e.from}, {"to", e.to}, {"label", e.label}});
    return envelope(c, {{"vertices", verts}, {"edges", edges}, {"connected", g.connected},
                        {"components", g.components}});
}

inline std::string enumerate_doc(const RunConfig& c) {
    require_format(c, {"json", "text"});
    const auto all = partitions::enumerate_grounded(c.n, c.level, c.max_weight, c.minimal);
    if (c.format == "text") {
        std::string out;
        for (const auto& g : all) out += std::to_string(g.weight()) + " " + partitions::to_string(g) + "\n";
        return out;
    }
    json list = json::array();
    for (const auto& g : all) list.push_back(parts_json(g.parts));
    return envelope(c, {{"count", all.size()}, {"partitions", list}});
}

inline std::string capparelli_doc(RunConfig c) {
    require_format(c, {"json", "text"});
    if (!c.spec_path) throw UsageError("capparelli needs --spec <file>");
    const auto spec = load_spec(*c.spec_path);
    if (c.n != 0 && c.n != spec.n)
        throw UsageError("--n " + std::to_string(c.n) + " disagrees with the spec (n = " + std::to_string(spec.n) + ")");
    c.n = spec.n;
    const auto all = capparelli::enumerate_capparelli(spec, c.max_weight);
    if (c.format == "text") {
        std::string out;
        for (const auto& p : all) {
            int w = 0;
            for (const auto& x : p) w += x.size;
            out += std::to_string(w) + " " + partitions::to_string(p) + "\n";
        }
        return out;
    }
    json list = json::array();
    for (const auto& p : all) list.push_back(parts_json(p));
    return envelope(c, {{"spec", capparelli::spec_to_json(spec)}, {"count", all.size()}, {"partitions", list}});
}

inline Series series_for(const RunConfig& c) {
    if (c.command == "gf") {
        if (c.formula == "grounded") return partitions::gf_grounded(c.n, c.level, static_cast<int>(c.trunc), c.minimal);
        if (c.minimal) throw UsageError("--minimal only applies to --formula grounded");
        if (c.formula == "ct") return characters::gp_shifted(c.n, c.level, c.trunc);
        if (c.level != 0) throw UsageError("--formula " + c.formula + " is the level-0 form; use ct for a shifted level");
        if (c.formula == "lattice") return characters::gp_lattice(c.n, c.trunc);
        return characters::gp_theta(c.n, c.trunc);
    }
    if (c.formula == "kp") return characters::char_kp(c.n, c.level, c.trunc);
    if (c.formula == "positive") return characters::char_positive(c.n, c.level, c.trunc);
    return characters::char_from_gp(c.n, c.level, c.trunc);
}

inline std::string series_doc(const RunConfig& c) {
    require_format(c, {"json", "text"});
    const Series s = series_for(c);
    if (c.command == "character" && c.basis == "alpha") {
        const auto e = to_alpha(s);
        if (c.format == "text") {
            std::string out;
            for (const auto& [m, coef] : e.terms) {
                out += coef.str();
                for (std::size_t i = 0; i < m.c.size(); ++i)
                    if (m.c[i]) out += " a" + std::to_string(i) + "^" + std::to_string(m.c[i]);
                out += "\n";
            }
            return out;
        }
        return envelope(c, alpha_json(e));
    }
    if (c.format == "text") return to_string(s) + "\n";
    return envelope(c, to_json(s));
}

inline std::pair<std::string, bool> verify_doc(const RunConfig& c) {
    if (c.format == "csv" || c.format == "dot") require_format(c, {"json", "text"});
    characters::VerificationReport r;
    if (c.principal) {
        if (c.spec_path) throw UsageError("--principal does not take --spec");
        if (c.level != 0) throw UsageError("--principal has no level");
        r = characters::principal_spec(c.n, c.trunc);
    } else {
        std::optional<capparelli::CapparelliSpec> spec;
        if (c.spec_path) spec = load_spec(*c.spec_path);
        r = characters::verify_all(c.n, c.level, c.trunc, spec);
    }
    if (c.format == "text") return {report_text(r), r.passed()};
    return {envelope(c, report_json(r)), r.passed()};
}

}  // namespace detail

// Runs one job. Exit status: 0 success, 1 computation error or failed verification, 2 usage.
inline int run(RunConfig c, std::ostream& out, std::ostream& err) {
    try {
        if (c.format.empty()) c.format = c.command == "graph" ? "dot" : (c.command == "verify" ? "text" : "json");
        std::string doc;
        bool ok = true;
        if (c.command == "energy") doc = detail::energy_doc(c);
        else if (c.command == "graph") doc = detail::graph_doc(c);
        else if (c.command == "enumerate") doc = detail::enumerate_doc(c);
        else if (c.command == "capparelli") doc = detail::capparelli_doc(c);
        else if (c.command == "gf" || c.command == "character") doc = detail::series_doc(c);
        else if (c.command == "verify") std::tie(doc, ok) = detail::verify_doc(c);
        else throw UsageError("unknown command '" + c.command + "'");
        if (c.output_path) {
            std::ofstream f(*c.output_path, std::ios::binary);
            if (!f) throw UsageError("cannot write '" + *c.output_path + "'");
            f << doc;
        } else {
            out << doc;
        }
        return ok ? 0 : 1;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const primc::error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::logic_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

inline std::unique_ptr<CLI::App> make_app(RunConfig& c) {
    auto app = std::make_unique<CLI::App>("Level-1 perfect crystal of type A_{n-1}^(1): energy, coloured partitions, characters",
                                          "primc");
    app->require_subcommand(1);
    app->set_version_flag("--version", std::string(kToolVersion));
    auto common = [&c](CLI::App* s, bool needs_n = true) {
        auto* o = s->add_option("--n", c.n, "rank n (colours a_i b_j with 0 <= i, j < n)");
        if (needs_n) o->required();
        s->add_option("-o,--output", c.output_path, "write to this file instead of standard output");
    };
    auto format = [&c](CLI::App* s, std::vector<std::string> allowed) {
        s->add_option("--format", c.format, "output format")->check(CLI::IsMember(allowed));
    };
    auto* energy = app->add_subcommand("energy", "energy matrix H between consecutive colours");
    common(energy);
    format(energy, {"json", "csv"});
    auto* graph = app->add_subcommand("graph", "crystal graph of B (x) B");
    common(graph);
    format(graph, {"dot", "json"});
    auto* en = app->add_subcommand("enumerate", "grounded partitions up to a weight");
    common(en);
    en->add_option("--level", c.level, "ground a_l b_l");
    en->add_option("--max-weight", c.max_weight, "largest weight")->required()->check(CLI::NonNegativeNumber);
    en->add_flag("--minimal", c.minimal, "only minimal grounded partitions");
    format(en, {"json", "text"});
    auto* cap = app->add_subcommand("capparelli", "generalised Capparelli partitions for a (delta, gamma) spec");
    common(cap, false);
    cap->add_option("--spec", c.spec_path, "JSON file with delta and gamma tables")->required();
    cap->add_option("--max-weight", c.max_weight, "largest weight")->required()->check(CLI::NonNegativeNumber);
    format(cap, {"json", "text"});
    auto* gf = app->add_subcommand("gf", "generating function G^P");
    common(gf);
    gf->add_option("--level", c.level, "ground index (shifted G^P for ct, grounded partitions)");
    gf->add_option("--trunc", c.trunc, "truncation order in q")->required()->check(CLI::NonNegativeNumber);
    gf->add_option("--formula", c.formula, "evaluation route")
        ->required()
        ->check(CLI::IsMember({"ct", "lattice", "theta", "grounded"}));
    gf->add_flag("--minimal", c.minimal, "minimal grounded partitions (with --formula grounded)");
    format(gf, {"json", "text"});
    auto* ch = app->add_subcommand("character", "character e^{-L_l} ch L(L_l)");
    common(ch);
    ch->add_option("--level", c.level, "highest weight index l");
    ch->add_option("--trunc", c.trunc, "truncation order in q")->required()->check(CLI::NonNegativeNumber);
    ch->add_option("--formula", c.formula, "evaluation route")
        ->required()
        ->check(CLI::IsMember({"kp", "positive", "gp"}));
    ch->add_option("--basis", c.basis, "monomials in (q, b) or in e^{-alpha_i}")->check(CLI::IsMember({"qb", "alpha"}));
    format(ch, {"json", "text"});
    auto* ver = app->add_subcommand("verify", "check the identity chain");
    common(ver);
    ver->add_option("--level", c.level, "highest weight index l");
    ver->add_option("--trunc", c.trunc, "truncation order in q")->required()->check(CLI::NonNegativeNumber);
    ver->add_option("--spec", c.spec_path, "also check Capparelli partitions for this spec");
    ver->add_flag("--principal", c.principal, "check the principal specialisation instead");
    ver->add_option("--report", c.format, "report format")->check(CLI::IsMember({"json", "text"}));
    return app;
}

// Parses argv and runs. Help and version go to `out` with status 0.
inline int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    auto app = make_app(c);
    try {
        app->parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app->help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }
    c.command = app->get_subcommands().front()->get_name();
    return run(c, out, err);
}

}  // namespace primc::cli
