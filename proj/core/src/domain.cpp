#include "trapmodes/domain.hpp"

#include "trapmodes/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <sstream>

namespace trapmodes::mesh {

namespace pt = boost::property_tree;

const char* to_string(BoundaryTag t) {
    switch (t) {
        case BoundaryTag::lateral: return "lateral";
        case BoundaryTag::end_plus: return "end_plus";
        case BoundaryTag::end_minus: return "end_minus";
        case BoundaryTag::artificial: return "artificial";
        case BoundaryTag::symmetry: return "symmetry";
    }
    return "?";
}

const char* to_string(BcType t) { return t == BcType::dirichlet ? "dirichlet" : "neumann"; }

BoundaryTag parse_boundary_tag(const std::string& s) {
    for (auto t : {BoundaryTag::lateral, BoundaryTag::end_plus, BoundaryTag::end_minus, BoundaryTag::artificial,
                   BoundaryTag::symmetry})
        if (s == to_string(t)) return t;
    throw ConfigError("unknown boundary tag '" + s + "'");
}

BcType parse_bc_type(const std::string& s) {
    if (s == "dirichlet") return BcType::dirichlet;
    if (s == "neumann") return BcType::neumann;
    throw ConfigError("unknown boundary condition '" + s + "'");
}

const char* to_string(Variant v) {
    switch (v) {
        case Variant::straight_cylinder_2d: return "straight_cylinder_2d";
        case Variant::distorted_cylinder_2d: return "distorted_cylinder_2d";
        case Variant::trapezoid_2d: return "trapezoid_2d";
        case Variant::semicylinder_2d: return "semicylinder_2d";
        case Variant::dumbbell_2d: return "dumbbell_2d";
        case Variant::half_semicylinder_2d: return "half_semicylinder_2d";
    }
    return "?";
}

Variant parse_variant(const std::string& s) {
    for (auto v : {Variant::straight_cylinder_2d, Variant::distorted_cylinder_2d, Variant::trapezoid_2d,
                   Variant::semicylinder_2d, Variant::dumbbell_2d, Variant::half_semicylinder_2d})
        if (s == to_string(v)) return v;
    throw ConfigError("unknown domain variant '" + s + "'");
}

const char* to_string(Frame f) { return f == Frame::physical ? "physical" : "stretched"; }

const char* to_string(Cut c) {
    switch (c) {
        case Cut::none: return "none";
        case Cut::across_half: return "across_half";
        case Cut::along_half: return "along_half";
    }
    return "?";
}

Frame parse_frame(const std::string& s) {
    if (s == "physical") return Frame::physical;
    if (s == "stretched") return Frame::stretched;
    throw ConfigError("unknown frame '" + s + "'");
}

Cut parse_cut(const std::string& s) {
    for (auto c : {Cut::none, Cut::across_half, Cut::along_half})
        if (s == to_string(c)) return c;
    throw ConfigError("unknown cut '" + s + "'");
}

DomainSpec DomainSpec::straight_cylinder(double h) {
    DomainSpec s;
    s.variant = Variant::straight_cylinder_2d;
    s.h = h;
    return s;
}

DomainSpec DomainSpec::distorted_cylinder(double h, ProfileSpec H_plus, ProfileSpec H_minus) {
    DomainSpec s;
    s.variant = Variant::distorted_cylinder_2d;
    s.h = h;
    s.H_plus = std::move(H_plus);
    s.H_minus = std::move(H_minus);
    return s;
}

DomainSpec DomainSpec::trapezoid(double h, ProfileSpec H_of_z) {
    DomainSpec s;
    s.variant = Variant::trapezoid_2d;
    s.h = h;
    s.H_plus = std::move(H_of_z);
    return s;
}

DomainSpec DomainSpec::semicylinder(ProfileSpec H, double L) {
    DomainSpec s;
    s.variant = Variant::semicylinder_2d;
    s.H_plus = std::move(H);
    s.L = L;
    s.frame = Frame::stretched;
    return s;
}

DomainSpec DomainSpec::half_semicylinder(ProfileSpec H, double L) {
    DomainSpec s = semicylinder(std::move(H), L);
    s.variant = Variant::half_semicylinder_2d;
    return s;
}

DomainSpec DomainSpec::dumbbell(double h, HeadSpec plus, HeadSpec minus) {
    DomainSpec s;
    s.variant = Variant::dumbbell_2d;
    s.h = h;
    s.head_plus = plus;
    s.head_minus = minus;
    return s;
}

void validate_domain(const DomainSpec& spec) {
    validate_profile(spec.H_plus);
    validate_profile(spec.H_minus);
    if (spec.is_semicylinder()) {
        const double bound = profile_max_abs(spec.H_plus) + 1.0;
        if (!(spec.L > bound)) {
            std::ostringstream msg;
            msg << "truncation length L=" << spec.L << " must exceed max|H| + 1 = " << bound;
            throw ConfigError(msg.str());
        }
        if (spec.head_plus.present() && spec.head_plus.width < 1.0)
            throw ConfigError("cane head must be at least as wide as the channel");
        if (spec.H_plus.kind == ProfileSpec::Kind::polynomial)
            throw ConfigError("semi-cylinder profiles are functions of eta on [0,1]");
        return;
    }
    if (!(spec.h > 0.0) || !std::isfinite(spec.h)) throw ConfigError("thickness h must be positive");
    switch (spec.variant) {
        case Variant::straight_cylinder_2d:
            break;
        case Variant::distorted_cylinder_2d: {
            if (spec.H_plus.kind == ProfileSpec::Kind::polynomial || spec.H_minus.kind == ProfileSpec::Kind::polynomial)
                throw ConfigError("end profiles are functions of eta on [0,1]");
            const int samples = 1024;
            for (int i = 0; i <= samples; ++i) {
                const double eta = double(i) / samples;
                const double top = 1.0 + spec.h * profile_eval(spec.H_plus, eta);
                const double bottom = -1.0 - spec.h * profile_eval(spec.H_minus, eta);
                if (!(top > bottom)) {
                    std::ostringstream msg;
                    msg << "ends intersect at eta=" << eta;
                    throw GeometryError(msg.str());
                }
            }
            break;
        }
        case Variant::trapezoid_2d: {
            const auto& H = spec.H_plus;
            if (H.domain_lo() > -1.0 || H.domain_hi() < 1.0)
                throw ConfigError("trapezoid profile must be defined on z in [-1,1]");
            for (int i = 0; i <= 1024; ++i) {
                const double z = -1.0 + 2.0 * i / 1024;
                if (!(profile_eval(H, z) > 0.0)) throw GeometryError("trapezoid profile must be positive on [-1,1]");
            }
            break;
        }
        case Variant::dumbbell_2d:
            for (const HeadSpec* head : {&spec.head_plus, &spec.head_minus}) {
                if (head->width < 0.0 || head->height < 0.0) throw ConfigError("head size must be non-negative");
                if (head->present() && head->width < 1.0)
                    throw ConfigError("dumbbell heads must be at least as wide as the channel");
            }
            break;
        default:
            break;
    }
    if (spec.cut != Cut::none && spec.variant != Variant::straight_cylinder_2d &&
        spec.variant != Variant::distorted_cylinder_2d)
        throw ConfigError("half cuts apply to thin cylinders only");
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = item.find_last_not_of(" \t");
        const std::string token = item.substr(first, last - first + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            throw ConfigError("not a number: '" + token + "'");
        }
        if (used != token.size()) throw ConfigError("not a number: '" + token + "'");
        out.push_back(v);
    }
    return out;
}

std::string format_number_list(const std::vector<double>& values) {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? ", " : "") << values[i];
    return out.str();
}

void profile_to_section(pt::ptree& tree, const std::string& section, const ProfileSpec& p) {
    pt::ptree node;
    switch (p.kind) {
        case ProfileSpec::Kind::fourier:
            node.put("kind", "fourier");
            node.put("a0", format_number_list({p.a0}));
            node.put("a", format_number_list(p.a));
            node.put("b", format_number_list(p.b));
            break;
        case ProfileSpec::Kind::table:
            node.put("kind", "table");
            node.put("eta", format_number_list(p.nodes));
            node.put("value", format_number_list(p.values));
            break;
        case ProfileSpec::Kind::polynomial:
            node.put("kind", "polynomial");
            node.put("coeffs", format_number_list(p.coeffs));
            node.put("lo", format_number_list({p.lo}));
            node.put("hi", format_number_list({p.hi}));
            break;
    }
    tree.put_child(pt::ptree::path_type(section, '\0'), node);
}

ProfileSpec profile_from_section(const pt::ptree& tree, const std::string& section) {
    auto child = tree.get_child_optional(pt::ptree::path_type(section, '\0'));
    if (!child) return ProfileSpec::zero();
    const pt::ptree& node = *child;
    const std::string kind = node.get<std::string>("kind", "fourier");
    auto scalar = [&](const char* key, double fallback) {
        auto s = node.get_optional<std::string>(key);
        if (!s) return fallback;
        auto v = parse_number_list(*s);
        if (v.size() != 1) throw ConfigError(section + "." + key + " must be a single number");
        return v[0];
    };
    auto list = [&](const char* key) { return parse_number_list(node.get<std::string>(key, "")); };
    ProfileSpec p;
    if (kind == "fourier") {
        p = ProfileSpec::fourier(scalar("a0", 0.0), list("a"), list("b"));
    } else if (kind == "table") {
        p = ProfileSpec::table(list("eta"), list("value"));
    } else if (kind == "polynomial") {
        p = ProfileSpec::polynomial(list("coeffs"), scalar("lo", -1.0), scalar("hi", 1.0));
    } else {
        throw ConfigError("unknown profile kind '" + kind + "' in section [" + section + "]");
    }
    validate_profile(p);
    return p;
}

void domain_to_tree(pt::ptree& tree, const DomainSpec& spec) {
    tree.put("schema", 1);
    tree.put("domain.variant", to_string(spec.variant));
    tree.put("domain.h", format_number_list({spec.h}));
    tree.put("domain.L", format_number_list({spec.L}));
    tree.put("domain.frame", to_string(spec.frame));
    tree.put("domain.cut", to_string(spec.cut));
    profile_to_section(tree, "profile_plus", spec.H_plus);
    profile_to_section(tree, "profile_minus", spec.H_minus);
    tree.put("head_plus.width", format_number_list({spec.head_plus.width}));
    tree.put("head_plus.height", format_number_list({spec.head_plus.height}));
    tree.put("head_minus.width", format_number_list({spec.head_minus.width}));
    tree.put("head_minus.height", format_number_list({spec.head_minus.height}));
    for (const auto& [tag, type] : spec.bc) tree.put(std::string("bc.") + to_string(tag), to_string(type));
}

DomainSpec domain_from_tree(const pt::ptree& tree) {
    const int schema = tree.get<int>("schema", 0);
    if (schema != 1) throw ConfigError("unsupported or missing schema version (expected schema = 1)");
    auto number = [&](const std::string& key, double fallback) {
        auto s = tree.get_optional<std::string>(key);
        if (!s) return fallback;
        auto v = parse_number_list(*s);
        if (v.size() != 1) throw ConfigError(key + " must be a single number");
        return v[0];
    };
    DomainSpec spec;
    spec.variant = parse_variant(tree.get<std::string>("domain.variant", "straight_cylinder_2d"));
    spec.h = number("domain.h", 1.0);
    spec.L = number("domain.L", 0.0);
    spec.frame = parse_frame(tree.get<std::string>("domain.frame", spec.is_semicylinder() ? "stretched" : "physical"));
    spec.cut = parse_cut(tree.get<std::string>("domain.cut", "none"));
    spec.H_plus = profile_from_section(tree, "profile_plus");
    spec.H_minus = profile_from_section(tree, "profile_minus");
    spec.head_plus = {number("head_plus.width", 0.0), number("head_plus.height", 0.0)};
    spec.head_minus = {number("head_minus.width", 0.0), number("head_minus.height", 0.0)};
    if (auto bc = tree.get_child_optional("bc"))
        for (const auto& [key, value] : *bc) spec.bc[parse_boundary_tag(key)] = parse_bc_type(value.data());
    if (spec.is_semicylinder()) spec.frame = Frame::stretched;
    validate_domain(spec);
    return spec;
}

std::string domain_to_config(const DomainSpec& spec) {
    pt::ptree tree;
    domain_to_tree(tree, spec);
    std::ostringstream out;
    pt::write_ini(out, tree);
    return out.str();
}

DomainSpec domain_from_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    }
    return domain_from_tree(tree);
}

}  // namespace trapmodes::mesh
