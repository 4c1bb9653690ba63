#include "trapmodes/error.hpp"
#include "trapmodes/mesh.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

namespace trapmodes::mesh {

namespace {

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void expect_header(std::istream& in, const char* word, std::size_t& count) {
    std::string got;
    if (!(in >> got) || got != word || !(in >> count))
        throw IoError(std::string("mesh text: expected '") + word + " <count>'");
}

}  // namespace

void write_mesh(std::ostream& out, const Mesh& mesh) {
    out << "nodes " << mesh.nodes.size() << '\n';
    for (const auto& p : mesh.nodes) out << g17(p[0]) << ' ' << g17(p[1]) << '\n';
    out << "triangles " << mesh.triangles.size() << '\n';
    for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "boundary " << mesh.boundary.size() << '\n';
    for (const auto& e : mesh.boundary) out << e.a << ' ' << e.b << ' ' << to_string(e.tag) << '\n';
}

Mesh read_mesh(std::istream& in) {
    Mesh m;
    std::size_t n = 0;
    expect_header(in, "nodes", n);
    m.nodes.resize(n);
    for (auto& p : m.nodes)
        if (!(in >> p[0] >> p[1])) throw IoError("mesh text: truncated node block");
    expect_header(in, "triangles", n);
    m.triangles.resize(n);
    for (auto& t : m.triangles)
        if (!(in >> t[0] >> t[1] >> t[2])) throw IoError("mesh text: truncated triangle block");
    expect_header(in, "boundary", n);
    m.boundary.resize(n);
    for (auto& e : m.boundary) {
        std::string tag;
        if (!(in >> e.a >> e.b >> tag)) throw IoError("mesh text: truncated boundary block");
        e.tag = parse_boundary_tag(tag);
    }
    validate_mesh(m);
    return m;
}

void write_field(std::ostream& out, const std::string& name, const std::vector<double>& nodal) {
    out << "field " << name << ' ' << nodal.size() << '\n';
    for (double v : nodal) out << g17(v) << '\n';
}

}  // namespace trapmodes::mesh
