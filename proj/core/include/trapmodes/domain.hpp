#pragma once

#include "trapmodes/profile.hpp"

#include <boost/property_tree/ptree_fwd.hpp>

#include <map>
#include <string>
#include <vector>

namespace trapmodes::mesh {

enum class BoundaryTag { lateral, end_plus, end_minus, artificial, symmetry };
enum class BcType { dirichlet, neumann };
using BoundaryConditions = std::map<BoundaryTag, BcType>;

const char* to_string(BoundaryTag t);
const char* to_string(BcType t);
BoundaryTag parse_boundary_tag(const std::string& s);
BcType parse_bc_type(const std::string& s);

enum class Variant {
    straight_cylinder_2d,
    distorted_cylinder_2d,
    trapezoid_2d,
    semicylinder_2d,
    dumbbell_2d,
    half_semicylinder_2d,
};

const char* to_string(Variant v);
Variant parse_variant(const std::string& s);

// Coordinates of thin domains. physical: (y, z) with z ∈ (-1, 1);
// stretched: (η, ζ) = (y/h, (1 - z)/h), so eigenvalues come out as h²λ.
enum class Frame { physical, stretched };

// Half domains of thin cylinders: across_half keeps η ∈ (1/2, 1),
// along_half keeps z > 0. The cut face is tagged `symmetry`.
enum class Cut { none, across_half, along_half };

const char* to_string(Frame f);
const char* to_string(Cut c);
Frame parse_frame(const std::string& s);
Cut parse_cut(const std::string& s);

// Axis-aligned rectangle in stretched units, centred on the channel axis.
struct HeadSpec {
    double width = 0.0;
    double height = 0.0;
    bool present() const { return width > 0.0 && height > 0.0; }
};

struct DomainSpec {
    Variant variant = Variant::straight_cylinder_2d;
    double h = 1.0;
    ProfileSpec H_plus = ProfileSpec::zero();   // also H for semi-cylinders, H(z) for the trapezoid
    ProfileSpec H_minus = ProfileSpec::zero();
    double L = 0.0;                             // truncation length of semi-cylinders
    HeadSpec head_plus;                         // dumbbell heads; head_plus doubles as the cane head
    HeadSpec head_minus;
    Frame frame = Frame::physical;
    Cut cut = Cut::none;
    BoundaryConditions bc;

    static DomainSpec straight_cylinder(double h);
    static DomainSpec distorted_cylinder(double h, ProfileSpec H_plus, ProfileSpec H_minus);
    static DomainSpec trapezoid(double h, ProfileSpec H_of_z);
    static DomainSpec semicylinder(ProfileSpec H, double L);
    static DomainSpec half_semicylinder(ProfileSpec H, double L);
    static DomainSpec dumbbell(double h, HeadSpec plus, HeadSpec minus);

    bool is_thin() const {
        return variant == Variant::straight_cylinder_2d || variant == Variant::distorted_cylinder_2d ||
               variant == Variant::dumbbell_2d;
    }
    bool is_semicylinder() const {
        return variant == Variant::semicylinder_2d || variant == Variant::half_semicylinder_2d;
    }
    bool has_symmetry_face() const {
        return variant == Variant::half_semicylinder_2d || cut != Cut::none;
    }
};

// Throws ConfigError/GeometryError when an invariant of the spec fails.
void validate_domain(const DomainSpec& spec);

// Sectioned key-value text (INI style) with `schema = 1`.
std::string domain_to_config(const DomainSpec& spec);
DomainSpec domain_from_config(const std::string& text);

// Section-level helpers shared with the experiment configuration reader.
void profile_to_section(boost::property_tree::ptree& tree, const std::string& section, const ProfileSpec& p);
ProfileSpec profile_from_section(const boost::property_tree::ptree& tree, const std::string& section);
void domain_to_tree(boost::property_tree::ptree& tree, const DomainSpec& spec);
DomainSpec domain_from_tree(const boost::property_tree::ptree& tree);

std::vector<double> parse_number_list(const std::string& text);
std::string format_number_list(const std::vector<double>& values);

}  // namespace trapmodes::mesh
