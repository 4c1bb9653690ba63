#include "trapmodes/mesh.hpp"

#include "trapmodes/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

namespace trapmodes::mesh {

namespace {

// Distribution of grid rows along a thin channel in stretched units.
// Near a profiled end the rows blend from the curved end ζ = -H(η) to a
// flat row at ζ = ζ_b; beyond it rows are flat and equally spaced. The
// spacing snaps to 1/d when the cell density d is an integer, so a thin
// domain and a semi-cylinder built at the same density share node
// coordinates exactly near the + end.
class AlongLayout {
public:
    AlongLayout(int n, double length, const ProfileSpec* start, const ProfileSpec* end)
        : n_(n), length_(length), start_(start), end_(end) {
        if (start_ && !start_->is_identically_zero()) {
            zb_start_ = std::ceil(profile_max_abs(*start_)) + 1.0;
            nb_start_ = std::max(1, int(std::lround(n * zb_start_ / length)));
        }
        if (end_ && !end_->is_identically_zero()) {
            zb_end_ = std::ceil(profile_max_abs(*end_)) + 1.0;
            nb_end_ = std::max(1, int(std::lround(n * zb_end_ / length)));
        }
        const int uniform_cells = n - nb_start_ - nb_end_;
        const double uniform_length = length - zb_start_ - zb_end_;
        global_ = uniform_cells < 1 || !(uniform_length > 0.0);
        if (!global_) {
            const double d = uniform_cells / uniform_length;
            const double rd = std::round(d);
            if (rd >= 1.0 && std::abs(d - rd) <= 1e-9 * d) density_ = int(rd);
            spacing_ = uniform_length / uniform_cells;
        }
    }

    double zeta(int k, double eta) const {
        const double hs = start_ ? profile_eval(*start_, eta) : 0.0;
        const double he = end_ ? profile_eval(*end_, eta) : 0.0;
        if (global_) {
            if (k == 0) return -hs;
            if (k == n_) return length_ + he;
            const double a = -hs;
            const double b = length_ + he;
            return a + (b - a) * (double(k) / n_);
        }
        if (nb_start_ > 0 && k < nb_start_) {
            if (k == 0) return -hs;
            return -hs + (zb_start_ + hs) * (double(k) / nb_start_);
        }
        const int k_end = n_ - nb_end_;
        if (k <= k_end) return uniform(k);
        const double s = uniform(k_end);
        const double e = length_ + he;
        if (k == n_) return e;
        return s + (e - s) * (double(k - k_end) / nb_end_);
    }

    // Cell density used for attached blocks (heads).
    double density() const { return density_ > 0 ? double(density_) : n_ / length_; }

private:
    double uniform(int k) const {
        if (density_ > 0) return zb_start_ + double(k - nb_start_) / density_;
        return zb_start_ + (k - nb_start_) * spacing_;
    }

    int n_;
    double length_;
    const ProfileSpec* start_;
    const ProfileSpec* end_;
    double zb_start_ = 0.0;
    double zb_end_ = 0.0;
    int nb_start_ = 0;
    int nb_end_ = 0;
    bool global_ = false;
    int density_ = 0;
    double spacing_ = 0.0;
};

struct Block {
    std::vector<double> eta;                     // across coordinates of the grid columns
    int nk = 0;                                  // cells along
    std::function<double(int, double)> zeta;     // along coordinate of node (column value, row k)
    std::array<std::optional<BoundaryTag>, 4> side;  // eta_lo, eta_hi, k_lo, k_hi
};

struct Assembler {
    std::function<Point(double, double)> map;   // (η, ζ) -> output coordinates
    double orientation = 1.0;                     // sign of the map's Jacobian
    std::function<bool(double, double)> diagonal_a;  // cell centre -> use the (00,11) diagonal

    Mesh mesh;
    std::map<Point, int> index;
    std::map<std::pair<int, int>, std::pair<int, std::optional<BoundaryTag>>> edges;

    int node(double eta, double zeta) {
        const Point p = map(eta, zeta);
        auto [it, inserted] = index.emplace(p, int(mesh.nodes.size()));
        if (inserted) mesh.nodes.push_back(p);
        return it->second;
    }

    void count_edge(int a, int b) {
        auto key = std::minmax(a, b);
        edges[{key.first, key.second}].first += 1;
    }

    void tag_edge(int a, int b, std::optional<BoundaryTag> tag) {
        auto key = std::minmax(a, b);
        if (tag) edges[{key.first, key.second}].second = tag;
    }

    void add(const Block& block, int block_id) {
        const int ni = int(block.eta.size()) - 1;
        const int nk = block.nk;
        std::vector<int> ids((ni + 1) * (nk + 1));
        std::vector<Point> ref((ni + 1) * (nk + 1));
        for (int k = 0; k <= nk; ++k)
            for (int i = 0; i <= ni; ++i) {
                const double eta = block.eta[i];
                const double zeta = block.zeta(k, eta);
                ids[k * (ni + 1) + i] = node(eta, zeta);
                ref[k * (ni + 1) + i] = {eta, zeta};
            }
        auto id = [&](int i, int k) { return ids[k * (ni + 1) + i]; };
        auto rp = [&](int i, int k) { return ref[k * (ni + 1) + i]; };
        auto ref_area = [](const Point& a, const Point& b, const Point& c) {
            return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
        };
        for (int k = 0; k < nk; ++k)
            for (int i = 0; i < ni; ++i) {
                const Point c00 = rp(i, k), c10 = rp(i + 1, k), c01 = rp(i, k + 1), c11 = rp(i + 1, k + 1);
                const double ec = 0.25 * (c00[0] + c10[0] + c01[0] + c11[0]);
                const double zc = 0.25 * (c00[1] + c10[1] + c01[1] + c11[1]);
                std::array<std::array<int, 3>, 2> tri;
                std::array<std::array<Point, 3>, 2> tp;
                if (diagonal_a(ec, zc)) {
                    tri = {{{id(i, k), id(i + 1, k), id(i + 1, k + 1)}, {id(i, k), id(i + 1, k + 1), id(i, k + 1)}}};
                    tp = {{{c00, c10, c11}, {c00, c11, c01}}};
                } else {
                    tri = {{{id(i, k), id(i + 1, k), id(i, k + 1)}, {id(i + 1, k), id(i + 1, k + 1), id(i, k + 1)}}};
                    tp = {{{c00, c10, c01}, {c10, c11, c01}}};
                }
                for (int t = 0; t < 2; ++t) {
                    if (!(ref_area(tp[t][0], tp[t][1], tp[t][2]) > 0.0)) {
                        std::ostringstream msg;
                        msg << "degenerate mapping: non-positive triangle area in block " << block_id << " cell (i="
                            << i << ", k=" << k << ")";
                        throw GeometryError(msg.str());
                    }
                    Triangle out{tri[t][0], tri[t][1], tri[t][2]};
                    if (orientation < 0.0) std::swap(out[1], out[2]);
                    mesh.triangles.push_back(out);
                    for (int e = 0; e < 3; ++e) count_edge(out[e], out[(e + 1) % 3]);
                }
            }
        for (int k = 0; k < nk; ++k) {
            tag_edge(id(0, k), id(0, k + 1), block.side[0]);
            tag_edge(id(ni, k), id(ni, k + 1), block.side[1]);
        }
        for (int i = 0; i < ni; ++i) {
            tag_edge(id(i, 0), id(i + 1, 0), block.side[2]);
            tag_edge(id(i, nk), id(i + 1, nk), block.side[3]);
        }
    }

    Mesh finish(Resolution r) {
        for (const auto& [key, slot] : edges) {
            if (slot.first > 2) throw GeometryError("non-manifold edge in generated mesh");
            if (slot.first == 1) {
                if (!slot.second) throw GeometryError("generated boundary edge without tag");
                mesh.boundary.push_back({key.first, key.second, *slot.second});
            }
        }
        // Orient boundary edges so the domain lies on the left.
        std::map<std::pair<int, int>, int> directed;
        for (const auto& t : mesh.triangles)
            for (int e = 0; e < 3; ++e) directed[{t[e], t[(e + 1) % 3]}] = 1;
        for (auto& be : mesh.boundary)
            if (!directed.count({be.a, be.b})) std::swap(be.a, be.b);
        mesh.resolution = r;
        return std::move(mesh);
    }
};

std::vector<double> across_nodes(int n, Cut cut) {
    std::vector<double> eta(n + 1);
    for (int i = 0; i <= n; ++i) eta[i] = cut == Cut::across_half ? 0.5 + 0.5 * (double(i) / n) : double(i) / n;
    return eta;
}

std::vector<double> head_nodes(int n_across, double width) {
    const double overhang = 0.5 * (width - 1.0);
    const int m = overhang > 0.0 ? std::max(1, int(std::lround(overhang * n_across))) : 0;
    std::vector<double> eta;
    for (int j = 0; j < m; ++j) eta.push_back(-overhang + overhang * (double(j) / m));
    for (int i = 0; i <= n_across; ++i) eta.push_back(double(i) / n_across);
    for (int j = 1; j <= m; ++j) eta.push_back(j == m ? 1.0 + overhang : 1.0 + overhang * (double(j) / m));
    return eta;
}

Block head_block(int n_across, const HeadSpec& head, double density, bool at_start, double channel_end, BoundaryTag tag) {
    Block b;
    b.eta = head_nodes(n_across, head.width);
    b.nk = std::max(1, int(std::lround(head.height * density)));
    const int nk = b.nk;
    const double height = head.height;
    if (at_start) {
        b.zeta = [nk, height](int k, double) { return k == nk ? 0.0 : -height + height * (double(k) / nk); };
    } else {
        b.zeta = [nk, height, channel_end](int k, double) {
            return k == 0 ? channel_end : channel_end + height * (double(k) / nk);
        };
    }
    b.side = {tag, tag, tag, tag};
    return b;
}

Mesh build_channel(const DomainSpec& spec, Resolution r) {
    const bool semi = spec.is_semicylinder();
    const bool dumbbell = spec.variant == Variant::dumbbell_2d;
    const Cut cut = spec.variant == Variant::half_semicylinder_2d ? Cut::across_half : spec.cut;
    const double length = semi ? spec.L : (cut == Cut::along_half ? 1.0 / spec.h : 2.0 / spec.h);
    // Channels whose two ends are congruent get diagonals mirrored about the
    // midpoint; all others use one diagonal rule along the whole channel so
    // they share node and element layout with the semi-cylinder near ζ = 0.
    const bool mirrored_ends =
        !semi && cut != Cut::along_half &&
        (dumbbell ? spec.head_plus.width == spec.head_minus.width && spec.head_plus.height == spec.head_minus.height
                  : spec.variant == Variant::straight_cylinder_2d || describe(spec.H_plus) == describe(spec.H_minus));
    const double mid_along = mirrored_ends ? 0.5 * length : std::numeric_limits<double>::infinity();

    const ProfileSpec* start = dumbbell ? nullptr : &spec.H_plus;
    const ProfileSpec* end = (semi || dumbbell || cut == Cut::along_half) ? nullptr : &spec.H_minus;
    if (spec.variant == Variant::straight_cylinder_2d) start = end = nullptr;
    const HeadSpec head_start = semi || dumbbell ? spec.head_plus : HeadSpec{};
    const HeadSpec head_end = dumbbell ? spec.head_minus : HeadSpec{};
    if (head_start.present() && start && !start->is_identically_zero())
        throw ConfigError("a head can only be attached to a flat end");

    auto layout = std::make_shared<AlongLayout>(r.n_along, length, start, end);

    Assembler as;
    if (spec.frame == Frame::stretched || semi) {
        as.map = [](double eta, double zeta) { return Point{eta, zeta}; };
        as.orientation = 1.0;
    } else {
        const double h = spec.h;
        as.map = [h](double eta, double zeta) { return Point{h * eta, 1.0 - h * zeta}; };
        as.orientation = -1.0;
    }
    // Diagonals mirror about η = 1/2 (and about mid_along), so half-domain
    // spectra are exact subsets of the full-domain spectra.
    as.diagonal_a = [mid_along](double eta, double zeta) { return (eta < 0.5) == (zeta < mid_along); };

    Block channel;
    channel.eta = across_nodes(r.n_across, cut);
    channel.nk = r.n_along;
    channel.zeta = [layout](int k, double eta) { return layout->zeta(k, eta); };
    const BoundaryTag lo_side = cut == Cut::across_half ? BoundaryTag::symmetry : BoundaryTag::lateral;
    BoundaryTag far_side = BoundaryTag::end_minus;
    if (semi) far_side = BoundaryTag::artificial;
    if (cut == Cut::along_half) far_side = BoundaryTag::symmetry;
    channel.side = {lo_side, BoundaryTag::lateral, BoundaryTag::end_plus, far_side};

    int block_id = 0;
    if (head_start.present())
        as.add(head_block(r.n_across, head_start, layout->density(), true, 0.0, BoundaryTag::end_plus), block_id++);
    as.add(channel, block_id++);
    if (head_end.present())
        as.add(head_block(r.n_across, head_end, layout->density(), false, layout->zeta(r.n_along, 0.0),
                          BoundaryTag::end_minus),
               block_id++);
    return as.finish(r);
}

Mesh build_trapezoid(const DomainSpec& spec, Resolution r) {
    Assembler as;
    const double h = spec.h;
    const ProfileSpec H = spec.H_plus;
    as.map = [h, H](double eta, double z) { return Point{h * profile_eval(H, z) * eta, z}; };
    as.orientation = 1.0;
    as.diagonal_a = [](double eta, double z) { return (eta < 0.5) == (z > 0.0); };
    Block b;
    b.eta = across_nodes(r.n_across, Cut::none);
    b.nk = r.n_along;
    const int n = r.n_along;
    b.zeta = [n](int k, double) { return k == n ? 1.0 : -1.0 + 2.0 * (double(k) / n); };
    b.side = {BoundaryTag::lateral, BoundaryTag::lateral, BoundaryTag::end_minus, BoundaryTag::end_plus};
    as.add(b, 0);
    return as.finish(r);
}

double edge_length(const Point& a, const Point& b) { return std::hypot(b[0] - a[0], b[1] - a[1]); }

}  // namespace

Point stretched_to_physical(double h, const Point& p) { return {h * p[0], 1.0 - h * p[1]}; }

double signed_area(const Mesh& mesh, const Triangle& t) {
    const Point& a = mesh.nodes[t[0]];
    const Point& b = mesh.nodes[t[1]];
    const Point& c = mesh.nodes[t[2]];
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

Mesh build_mesh(const DomainSpec& spec, Resolution resolution) {
    if (resolution.n_across < 2 || resolution.n_along < 2)
        throw PreconditionError("resolution must be at least (2, 2)");
    validate_domain(spec);
    Mesh m = spec.variant == Variant::trapezoid_2d ? build_trapezoid(spec, resolution) : build_channel(spec, resolution);
    validate_mesh(m);
    return m;
}

Mesh refine_uniform(const Mesh& mesh) {
    Mesh out;
    out.nodes = mesh.nodes;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        auto key = std::minmax(a, b);
        auto it = midpoint.find({key.first, key.second});
        if (it != midpoint.end()) return it->second;
        const Point& p = mesh.nodes[a];
        const Point& q = mesh.nodes[b];
        out.nodes.push_back({0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])});
        const int id = int(out.nodes.size()) - 1;
        midpoint.emplace(std::pair<int, int>{key.first, key.second}, id);
        return id;
    };
    out.triangles.reserve(4 * mesh.triangles.size());
    for (const auto& t : mesh.triangles) {
        const int ab = mid(t[0], t[1]);
        const int bc = mid(t[1], t[2]);
        const int ca = mid(t[2], t[0]);
        out.triangles.push_back({t[0], ab, ca});
        out.triangles.push_back({ab, t[1], bc});
        out.triangles.push_back({ca, bc, t[2]});
        out.triangles.push_back({ab, bc, ca});
    }
    for (const auto& e : mesh.boundary) {
        const int m = mid(e.a, e.b);
        out.boundary.push_back({e.a, m, e.tag});
        out.boundary.push_back({m, e.b, e.tag});
    }
    out.resolution = {2 * mesh.resolution.n_across, 2 * mesh.resolution.n_along};
    return out;
}

MeshStats mesh_stats(const Mesh& mesh) {
    MeshStats s;
    s.n_nodes = mesh.nodes.size();
    s.n_triangles = mesh.triangles.size();
    s.n_boundary_edges = mesh.boundary.size();
    s.min_angle_deg = 180.0;
    for (const auto& t : mesh.triangles) {
        const double area = signed_area(mesh, t);
        s.total_area += area;
        std::array<double, 3> len;
        for (int e = 0; e < 3; ++e) len[e] = edge_length(mesh.nodes[t[e]], mesh.nodes[t[(e + 1) % 3]]);
        for (int e = 0; e < 3; ++e) {
            // angle opposite edge e
            const double a = len[e], b = len[(e + 1) % 3], c = len[(e + 2) % 3];
            const double cosv = std::clamp((b * b + c * c - a * a) / (2.0 * b * c), -1.0, 1.0);
            s.min_angle_deg = std::min(s.min_angle_deg, std::acos(cosv) * 180.0 / std::numbers::pi);
        }
        const double longest = *std::max_element(len.begin(), len.end());
        s.max_aspect_ratio = std::max(s.max_aspect_ratio, longest * longest / (2.0 * area));
    }
    return s;
}

void validate_mesh(const Mesh& mesh) {
    const int n = int(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
        const auto& t = mesh.triangles[i];
        for (int v : t)
            if (v < 0 || v >= n) throw GeometryError("triangle references a missing node");
        if (!(signed_area(mesh, t) > 0.0))
            throw GeometryError("triangle " + std::to_string(i) + " has non-positive signed area");
    }
    std::map<std::pair<int, int>, int> count;
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e) {
            auto key = std::minmax(t[e], t[(e + 1) % 3]);
            ++count[{key.first, key.second}];
        }
    std::map<std::pair<int, int>, int> tagged;
    for (const auto& e : mesh.boundary) {
        auto key = std::minmax(e.a, e.b);
        if (++tagged[{key.first, key.second}] > 1) throw GeometryError("boundary edge tagged twice");
    }
    std::vector<int> degree(n, 0);
    for (const auto& [key, c] : count) {
        if (c > 2) throw GeometryError("edge shared by more than two triangles");
        if (c == 1) {
            if (!tagged.count(key)) throw GeometryError("untagged boundary edge");
            ++degree[key.first];
            ++degree[key.second];
        }
    }
    for (const auto& [key, c] : tagged) {
        auto it = count.find(key);
        if (it == count.end() || it->second != 1) throw GeometryError("tagged edge is not a boundary edge");
    }
    for (int i = 0; i < n; ++i)
        if (degree[i] % 2 != 0) throw GeometryError("boundary does not form closed loops");

    // Bucket nodes on a 1e-9 grid and compare against neighbouring buckets.
    const double cell = 1e-9;
    std::map<std::pair<long long, long long>, std::vector<int>> buckets;
    auto key_of = [cell](const Point& p) {
        return std::pair<long long, long long>{(long long)std::floor(p[0] / cell), (long long)std::floor(p[1] / cell)};
    };
    for (int i = 0; i < n; ++i) {
        const Point& p = mesh.nodes[i];
        const auto key = key_of(p);
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = buckets.find({key.first + dx, key.second + dy});
                if (it == buckets.end()) continue;
                for (int j : it->second) {
                    const Point& q = mesh.nodes[j];
                    if (std::abs(q[0] - p[0]) <= 1e-12 && std::abs(q[1] - p[1]) <= 1e-12)
                        throw GeometryError("duplicate nodes within 1e-12");
                }
            }
        buckets[key].push_back(i);
    }
}

}  // namespace trapmodes::mesh
