#include "trapmodes/fem.hpp"

#include "trapmodes/error.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace trapmodes::fem {

namespace {

std::atomic<std::uint64_t> next_system_id{1};

}  // namespace

template <class Real>
AssembledSystem<Real> assemble_system(const mesh::Mesh& mesh, const mesh::BoundaryConditions& bc) {
    const int n_nodes = int(mesh.nodes.size());
    std::vector<char> dirichlet(n_nodes, 0);
    for (const auto& e : mesh.boundary) {
        auto it = bc.find(e.tag);
        if (it == bc.end())
            throw ConfigError(std::string("no boundary condition assigned to tag '") + mesh::to_string(e.tag) + "'");
        if (it->second == mesh::BcType::dirichlet) dirichlet[e.a] = dirichlet[e.b] = 1;
    }

    AssembledSystem<Real> sys;
    sys.id = next_system_id++;
    sys.free_index.assign(n_nodes, -1);
    for (int i = 0; i < n_nodes; ++i)
        if (!dirichlet[i]) {
            sys.free_index[i] = int(sys.dof_node.size());
            sys.dof_node.push_back(i);
        }
    sys.n_free = int(sys.dof_node.size());
    if (sys.n_free == 0) throw DegenerateSystemError("every node is constrained; the free set is empty");

    const int n = sys.n_free;
    std::vector<std::vector<int>> rows(n);
    for (const auto& t : mesh.triangles)
        for (int a = 0; a < 3; ++a) {
            const int i = sys.free_index[t[a]];
            if (i < 0) continue;
            for (int b = 0; b < 3; ++b) {
                const int j = sys.free_index[t[b]];
                if (j >= i) rows[i].push_back(j);
            }
        }
    SparseSym<Real> pattern;
    pattern.n = n;
    pattern.row_ptr.assign(1, 0);
    for (int i = 0; i < n; ++i) {
        auto& r = rows[i];
        r.push_back(i);
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        pattern.col.insert(pattern.col.end(), r.begin(), r.end());
        pattern.row_ptr.push_back(int(pattern.col.size()));
        std::vector<int>().swap(r);
    }
    pattern.val.assign(pattern.col.size(), Real(0));
    sys.K = pattern;
    sys.M = pattern;

    auto slot = [&pattern](int i, int j) {
        if (i > j) std::swap(i, j);
        auto first = pattern.col.begin() + pattern.row_ptr[i];
        auto last = pattern.col.begin() + pattern.row_ptr[i + 1];
        return int(std::lower_bound(first, last, j) - pattern.col.begin());
    };

    for (const auto& t : mesh.triangles) {
        std::array<Real, 3> x, y;
        for (int a = 0; a < 3; ++a) {
            x[a] = Real(mesh.nodes[t[a]][0]);
            y[a] = Real(mesh.nodes[t[a]][1]);
        }
        const Real area = ((x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0])) / 2;
        if (!(area > Real(0))) throw GeometryError("assemble_system: triangle with non-positive area");
        std::array<Real, 3> gb, gc;
        for (int a = 0; a < 3; ++a) {
            const int j = (a + 1) % 3, k = (a + 2) % 3;
            gb[a] = y[j] - y[k];
            gc[a] = x[k] - x[j];
        }
        const Real inv4a = Real(1) / (4 * area);
        const Real m_off = area / 12;
        const Real m_diag = area / 6;
        for (int a = 0; a < 3; ++a) {
            const int i = sys.free_index[t[a]];
            if (i < 0) continue;
            for (int b = 0; b < 3; ++b) {
                const int j = sys.free_index[t[b]];
                if (j < i) continue;
                const int p = slot(i, j);
                // Off-diagonal pairs are visited once per ordering; the upper
                // triangle only keeps one of them, so no doubling is needed.
                sys.K.val[p] += (gb[a] * gb[b] + gc[a] * gc[b]) * inv4a;
                sys.M.val[p] += a == b ? m_diag : m_off;
            }
        }
    }
    return sys;
}

template <class Real>
Real rayleigh_quotient(const AssembledSystem<Real>& system, const FieldVector<Real>& v) {
    if (v.system_id != system.id) throw DomainError("rayleigh_quotient: vector belongs to another system");
    if (int(v.values.size()) != system.n_free) throw DomainError("rayleigh_quotient: length mismatch");
    const Real num = dot(v.values, system.K * v.values);
    const Real den = dot(v.values, system.M * v.values);
    if (!(den > Real(0))) throw DomainError("rayleigh_quotient: zero vector");
    return num / den;
}

template <class Real>
FieldVector<Real> interpolate_function(const mesh::Mesh& mesh, const AssembledSystem<Real>& system,
                                       const std::function<double(double, double)>& f) {
    FieldVector<Real> out;
    out.system_id = system.id;
    out.values.resize(system.n_free);
    for (int d = 0; d < system.n_free; ++d) {
        const int node = system.dof_node[d];
        const double v = f(mesh.nodes[node][0], mesh.nodes[node][1]);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "interpolate_function: non-finite value at node " << node;
            throw NumericError(msg.str());
        }
        out.values[d] = Real(v);
    }
    return out;
}

template <class Real>
FieldVector<Real> make_field(const AssembledSystem<Real>& system, Vec<Real> values) {
    if (int(values.size()) != system.n_free) throw DomainError("make_field: length mismatch");
    return {std::move(values), system.id};
}

template <class Real>
std::vector<double> to_nodal(const AssembledSystem<Real>& system, const Vec<Real>& free_values) {
    std::vector<double> nodal(system.free_index.size(), 0.0);
    for (int d = 0; d < system.n_free; ++d) nodal[system.dof_node[d]] = to_double(free_values[d]);
    return nodal;
}

template <class Real>
void write_matrix_market(std::ostream& out, const SparseSym<Real>& A) {
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << A.n << ' ' << A.n << ' ' << A.nnz_stored() << '\n';
    for (int i = 0; i < A.n; ++i)
        for (int p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", to_double(A.val[p]));
            out << A.col[p] + 1 << ' ' << i + 1 << ' ' << buf << '\n';
        }
}

#define TRAPMODES_FEM_INSTANTIATE(R)                                                                                    \
    template struct AssembledSystem<R>;                                                                                \
    template AssembledSystem<R> assemble_system<R>(const mesh::Mesh&, const mesh::BoundaryConditions&);               \
    template R rayleigh_quotient<R>(const AssembledSystem<R>&, const FieldVector<R>&);                                 \
    template FieldVector<R> interpolate_function<R>(const mesh::Mesh&, const AssembledSystem<R>&,                      \
                                                    const std::function<double(double, double)>&);                     \
    template FieldVector<R> make_field<R>(const AssembledSystem<R>&, Vec<R>);                                          \
    template std::vector<double> to_nodal<R>(const AssembledSystem<R>&, const Vec<R>&);                                \
    template void write_matrix_market<R>(std::ostream&, const SparseSym<R>&);

TRAPMODES_FEM_INSTANTIATE(double)
TRAPMODES_FEM_INSTANTIATE(Wide)

}  // namespace trapmodes::fem
