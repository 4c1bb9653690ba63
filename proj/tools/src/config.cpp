#include "trapmodes_app/config.hpp"

#include <trapmodes/error.hpp>

#include <boost/property_tree/ini_parser.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace trapmodes::app {

namespace pt = boost::property_tree;

namespace {

struct KindName {
    ExperimentKind kind;
    const char* name;
};

constexpr KindName kind_table[] = {
    {ExperimentKind::cross_section, "cross-section"},
    {ExperimentKind::condition, "condition"},
    {ExperimentKind::semicylinder, "semicylinder"},
    {ExperimentKind::thin_sweep, "thin-sweep"},
    {ExperimentKind::trapezoid, "trapezoid"},
    {ExperimentKind::splitting, "splitting"},
    {ExperimentKind::dumbbell, "dumbbell"},
    {ExperimentKind::neumann_half, "neumann-half"},
    {ExperimentKind::validate, "validate"},
    {ExperimentKind::export_mesh, "export-mesh"},
};

// Accepted keys per section; anything else is a typo worth reporting.
const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"experiment", {"kind", "name"}},
        {"profile_plus", {"kind", "a0", "a", "b", "eta", "value", "coeffs", "lo", "hi"}},
        {"profile_minus", {"kind", "a0", "a", "b", "eta", "value", "coeffs", "lo", "hi"}},
        {"cross_section", {"kind", "vertices", "refinements"}},
        {"solver", {"k", "tol", "shift", "seed", "max_restarts", "truncation", "trapped_margin"}},
        {"boundary", {"thin", "semi"}},
        {"sweep", {"h", "L", "truncation", "n_across", "density", "richardson"}},
        {"precision", {"enabled", "tol", "shift_gap"}},
        {"trapezoid", {"n_across", "along_per_width", "richardson", "j"}},
        {"head_plus", {"width", "height"}},
        {"head_minus", {"width", "height"}},
        {"epsilon", {"points", "lo", "hi", "values"}},
        {"domain", {"variant", "h", "L", "frame", "cut"}},
        {"mesh", {"n_across", "n_along"}},
        {"bc", {"lateral", "end_plus", "end_minus", "artificial", "symmetry"}},
        {"output", {"dir", "plots"}},
    };
    return keys;
}

void check_keys(const pt::ptree& tree) {
    for (const auto& [section, node] : tree) {
        if (section == "schema") continue;
        const auto it = known_keys().find(section);
        if (it == known_keys().end()) throw ConfigError("unknown section [" + section + "]");
        if (!node.data().empty()) throw ConfigError("'" + section + "' must be a section, not a key");
        for (const auto& [key, value] : node)
            if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
    }
}

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    std::optional<std::string> text(const std::string& key) const {
        auto v = tree_.get_optional<std::string>(key);
        if (v) {
            const auto a = v->find_first_not_of(" \t");
            if (a == std::string::npos) return std::string();
            return v->substr(a, v->find_last_not_of(" \t") - a + 1);
        }
        return std::nullopt;
    }

    double number(const std::string& key, double fallback) const {
        auto s = text(key);
        if (!s) return fallback;
        const auto v = mesh::parse_number_list(*s);
        if (v.size() != 1) throw ConfigError(key + " must be a single number");
        return v[0];
    }

    int integer(const std::string& key, int fallback) const {
        const double v = number(key, fallback);
        if (v != double(int(v))) throw ConfigError(key + " must be an integer");
        return int(v);
    }

    bool flag(const std::string& key, bool fallback) const {
        auto s = text(key);
        if (!s) return fallback;
        if (*s == "true" || *s == "yes" || *s == "1" || *s == "on") return true;
        if (*s == "false" || *s == "no" || *s == "0" || *s == "off") return false;
        throw ConfigError(key + " must be true or false");
    }

    std::vector<double> list(const std::string& key) const {
        auto s = text(key);
        return s ? mesh::parse_number_list(*s) : std::vector<double>{};
    }

    bool has_section(const std::string& s) const { return bool(tree_.get_child_optional(s)); }

private:
    const pt::ptree& tree_;
};

std::vector<mesh::Point> parse_vertices(const std::string& text) {
    std::vector<mesh::Point> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ';')) {
        std::istringstream pair(item);
        double x = 0.0, y = 0.0;
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        if (!(pair >> x >> y)) throw ConfigError("cross_section.vertices: expected 'x y; x y; ...'");
        std::string rest;
        if (pair >> rest) throw ConfigError("cross_section.vertices: trailing text '" + rest + "'");
        out.push_back({x, y});
    }
    return out;
}

mesh::BcType parse_face_type(const std::string& key, const std::optional<std::string>& s, mesh::BcType fallback) {
    if (!s) return fallback;
    try {
        return mesh::parse_bc_type(*s);
    } catch (const Error&) {
        throw ConfigError(key + ": expected dirichlet or neumann, got '" + *s + "'");
    }
}

void check_hs(const std::vector<double>& hs, const char* what) {
    for (double h : hs)
        if (!(h > 0.0 && h < 1.0)) throw ConfigError(std::string(what) + ": every h must lie in (0, 1)");
}

}  // namespace

const char* to_string(ExperimentKind k) {
    for (const auto& e : kind_table)
        if (e.kind == k) return e.name;
    return "unknown";
}

ExperimentKind parse_kind(const std::string& s) {
    for (const auto& e : kind_table)
        if (s == e.name) return e.kind;
    throw ConfigError("unknown experiment kind '" + s + "'");
}

std::vector<std::string> kind_names() {
    std::vector<std::string> out;
    for (const auto& e : kind_table) out.push_back(e.name);
    return out;
}

ExperimentConfig parse_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    }
    check_keys(tree);
    const Reader r(tree);

    ExperimentConfig c;
    if (!r.text("schema")) throw ConfigError("missing schema version (expected schema = 1)");
    c.schema = r.integer("schema", 0);
    if (c.schema != 1) throw ConfigError("unsupported schema version " + std::to_string(c.schema) + " (expected 1)");
    const auto kind = r.text("experiment.kind");
    if (!kind) throw ConfigError("missing experiment.kind");
    c.kind = parse_kind(*kind);
    c.name = r.text("experiment.name").value_or(to_string(c.kind));

    c.H_plus = mesh::profile_from_section(tree, "profile_plus");
    c.H_minus = mesh::profile_from_section(tree, "profile_minus");

    const std::string cs = r.text("cross_section.kind").value_or("interval");
    if (cs == "interval") {
        c.cross_section = problems::CrossSectionSpec::interval();
    } else if (cs == "half_interval") {
        c.cross_section = problems::CrossSectionSpec::half_interval();
    } else if (cs == "polygon") {
        const auto v = r.text("cross_section.vertices");
        if (!v) throw ConfigError("cross_section.kind = polygon needs cross_section.vertices");
        c.cross_section = problems::CrossSectionSpec::polygon(parse_vertices(*v));
        problems::validate_polygon(c.cross_section.vertices);
    } else {
        throw ConfigError("unknown cross_section.kind '" + cs + "'");
    }
    c.cross_section_refinements = r.integer("cross_section.refinements", 5);
    if (c.cross_section_refinements < 0 || c.cross_section_refinements > 8)
        throw ConfigError("cross_section.refinements must lie in [0, 8]");

    c.solve.k = r.integer("solver.k", 1);
    if (c.solve.k < 1) throw ConfigError("solver.k must be at least 1");
    c.solve.tol = r.number("solver.tol", 1e-10);
    if (!(c.solve.tol > 0.0)) throw ConfigError("solver.tol must be positive");
    if (r.text("solver.shift")) c.solve.shift = r.number("solver.shift", 0.0);
    c.solve.seed = std::uint64_t(r.number("solver.seed", double(eig::default_seed)));
    c.solve.max_restarts = r.integer("solver.max_restarts", 12);
    c.solve.truncation = parse_face_type("solver.truncation", r.text("solver.truncation"), mesh::BcType::dirichlet);
    c.solve.trapped_margin = r.number("solver.trapped_margin", 1e-3);

    c.thin_bc = problems::parse_thin_bc(r.text("boundary.thin").value_or("mixed"));
    c.semi_bc = problems::parse_semi_bc(r.text("boundary.semi").value_or(
        c.kind == ExperimentKind::neumann_half ? "half_mixed" : "mixed"));

    c.hs = r.list("sweep.h");
    check_hs(c.hs, "sweep.h");
    c.Ls = r.list("sweep.L");
    for (double L : c.Ls)
        if (!(L > 0.0)) throw ConfigError("sweep.L: every L must be positive");
    if (auto t = r.list("sweep.truncation"); !t.empty()) {
        if (t.size() != 2 || !(t[0] > 1.0 && t[1] > t[0]))
            throw ConfigError("sweep.truncation must be two lengths L1 < L2 (L1 > 1)");
        c.truncation = std::pair{t[0], t[1]};
    }
    c.policy.n_across = r.integer("sweep.n_across", c.policy.n_across);
    c.policy.density = r.integer("sweep.density", c.policy.density);
    c.policy.richardson = r.flag("sweep.richardson", c.policy.richardson);
    if (c.policy.n_across < 2 || c.policy.density < 1) throw ConfigError("sweep: n_across >= 2 and density >= 1");

    c.precision.enabled = r.flag("precision.enabled", c.precision.enabled);
    c.precision.tol = r.number("precision.tol", c.precision.tol);
    c.precision.shift_gap = r.number("precision.shift_gap", c.precision.shift_gap);

    c.trapezoid.n_across = r.integer("trapezoid.n_across", c.trapezoid.n_across);
    c.trapezoid.along_per_width = r.number("trapezoid.along_per_width", c.trapezoid.along_per_width);
    c.trapezoid.richardson = r.flag("trapezoid.richardson", c.trapezoid.richardson);
    if (auto js = r.list("trapezoid.j"); !js.empty()) {
        c.js.clear();
        for (double j : js) {
            if (j < 0 || j != double(int(j))) throw ConfigError("trapezoid.j must list non-negative integers");
            c.js.push_back(int(j));
        }
    }

    if (r.has_section("head_plus"))
        c.head_plus = {r.number("head_plus.width", 0.0), r.number("head_plus.height", 0.0)};
    if (r.has_section("head_minus"))
        c.head_minus = {r.number("head_minus.width", 0.0), r.number("head_minus.height", 0.0)};

    if (auto v = r.list("epsilon.values"); !v.empty()) {
        c.epsilon_grid = v;
    } else if (r.has_section("epsilon")) {
        c.epsilon_grid = conditions::default_epsilon_grid(r.integer("epsilon.points", 40), r.number("epsilon.lo", 1e-3),
                                                          r.number("epsilon.hi", 1.0));
    }

    if (c.kind == ExperimentKind::export_mesh) {
        if (!r.has_section("domain")) throw ConfigError("export-mesh needs a [domain] section");
        c.domain = mesh::domain_from_tree(tree);
        c.resolution = {r.integer("mesh.n_across", c.resolution.n_across),
                        r.integer("mesh.n_along", c.resolution.n_along)};
    }

    c.out_dir = r.text("output.dir").value_or("out");
    c.plots = r.flag("output.plots", false);

    // Kind-specific preconditions, reported before anything runs.
    switch (c.kind) {
        case ExperimentKind::thin_sweep:
        case ExperimentKind::dumbbell:
        case ExperimentKind::splitting:
            if (c.hs.size() < 3) throw ConfigError("sweep.h needs at least three values for " + std::string(*kind));
            break;
        case ExperimentKind::neumann_half:
            if (c.hs.size() < 3) throw ConfigError("sweep.h needs at least three values for neumann-half");
            break;
        case ExperimentKind::trapezoid:
            if (c.hs.empty()) throw ConfigError("sweep.h must list at least one value for trapezoid");
            break;
        case ExperimentKind::semicylinder:
            if (c.Ls.empty()) throw ConfigError("sweep.L must list at least one truncation length");
            break;
        default:
            break;
    }
    c.text = config_to_text(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return parse_config(s.str());
}

std::string config_to_text(const ExperimentConfig& c) {
    pt::ptree tree;
    tree.put("schema", c.schema);
    tree.put("experiment.kind", to_string(c.kind));
    tree.put("experiment.name", c.name);
    mesh::profile_to_section(tree, "profile_plus", c.H_plus);
    mesh::profile_to_section(tree, "profile_minus", c.H_minus);
    tree.put("cross_section.kind", problems::to_string(c.cross_section.kind));
    if (!c.cross_section.vertices.empty()) {
        std::ostringstream v;
        v.precision(17);
        for (std::size_t i = 0; i < c.cross_section.vertices.size(); ++i)
            v << (i ? "; " : "") << c.cross_section.vertices[i][0] << ' ' << c.cross_section.vertices[i][1];
        tree.put("cross_section.vertices", v.str());
    }
    tree.put("cross_section.refinements", c.cross_section_refinements);
    tree.put("solver.k", c.solve.k);
    tree.put("solver.tol", mesh::format_number_list({c.solve.tol}));
    if (c.solve.shift) tree.put("solver.shift", mesh::format_number_list({*c.solve.shift}));
    tree.put("solver.seed", c.solve.seed);
    tree.put("solver.max_restarts", c.solve.max_restarts);
    tree.put("solver.truncation", mesh::to_string(c.solve.truncation));
    tree.put("solver.trapped_margin", mesh::format_number_list({c.solve.trapped_margin}));
    tree.put("boundary.thin", problems::to_string(c.thin_bc));
    tree.put("boundary.semi", problems::to_string(c.semi_bc));
    tree.put("sweep.h", mesh::format_number_list(c.hs));
    tree.put("sweep.L", mesh::format_number_list(c.Ls));
    if (c.truncation) tree.put("sweep.truncation", mesh::format_number_list({c.truncation->first, c.truncation->second}));
    tree.put("sweep.n_across", c.policy.n_across);
    tree.put("sweep.density", c.policy.density);
    tree.put("sweep.richardson", c.policy.richardson);
    tree.put("precision.enabled", c.precision.enabled);
    tree.put("precision.tol", mesh::format_number_list({c.precision.tol}));
    tree.put("precision.shift_gap", mesh::format_number_list({c.precision.shift_gap}));
    tree.put("trapezoid.n_across", c.trapezoid.n_across);
    tree.put("trapezoid.along_per_width", mesh::format_number_list({c.trapezoid.along_per_width}));
    tree.put("trapezoid.richardson", c.trapezoid.richardson);
    std::vector<double> js(c.js.begin(), c.js.end());
    tree.put("trapezoid.j", mesh::format_number_list(js));
    tree.put("head_plus.width", mesh::format_number_list({c.head_plus.width}));
    tree.put("head_plus.height", mesh::format_number_list({c.head_plus.height}));
    tree.put("head_minus.width", mesh::format_number_list({c.head_minus.width}));
    tree.put("head_minus.height", mesh::format_number_list({c.head_minus.height}));
    tree.put("epsilon.values", mesh::format_number_list(c.epsilon_grid));
    if (c.domain) {
        pt::ptree d;
        mesh::domain_to_tree(d, *c.domain);
        for (const auto& [key, child] : d)
            if (key == "domain" || key == "bc") tree.put_child(key, child);
        tree.put("mesh.n_across", c.resolution.n_across);
        tree.put("mesh.n_along", c.resolution.n_along);
    }
    tree.put("output.dir", c.out_dir);
    tree.put("output.plots", c.plots);
    std::ostringstream out;
    pt::write_ini(out, tree);
    return out.str();
}

}  // namespace trapmodes::app
