#pragma once

#include <string>
#include <vector>

namespace trapmodes::mesh {

// End profile H. Fourier and table profiles live on η ∈ [0,1]; polynomial
// profiles carry their own interval (the trapezoid uses z ∈ [-1,1]).
struct ProfileSpec {
    enum class Kind { fourier, table, polynomial };

    Kind kind = Kind::fourier;

    // fourier: a0 + Σ a[k-1] cos(2πkη) + Σ b[k-1] sin(2πkη)
    double a0 = 0.0;
    std::vector<double> a;
    std::vector<double> b;

    // table: strictly increasing nodes from 0 to 1, linear interpolation
    std::vector<double> nodes;
    std::vector<double> values;

    // polynomial: Σ coeffs[i] x^i on [lo, hi]
    std::vector<double> coeffs;
    double lo = 0.0;
    double hi = 1.0;

    static ProfileSpec zero();
    static ProfileSpec fourier(double a0, std::vector<double> a, std::vector<double> b = {});
    static ProfileSpec table(std::vector<double> nodes, std::vector<double> values);
    static ProfileSpec polynomial(std::vector<double> coeffs, double lo, double hi);

    double domain_lo() const { return kind == Kind::polynomial ? lo : 0.0; }
    double domain_hi() const { return kind == Kind::polynomial ? hi : 1.0; }

    bool is_identically_zero() const;
    bool is_smooth() const { return kind != Kind::table; }
};

// Throws DomainError / ConfigError when the profile itself is malformed.
void validate_profile(const ProfileSpec& p);

double profile_eval(const ProfileSpec& p, double x);
// Derivatives; table profiles return the one-sided slope for d1 and throw for d2.
double profile_d1(const ProfileSpec& p, double x);
double profile_d2(const ProfileSpec& p, double x);

// max |H| over the profile interval (exact at table nodes, sampled otherwise).
double profile_max_abs(const ProfileSpec& p);
double profile_min(const ProfileSpec& p);

// Break points where the profile is not smooth (table nodes), for quadrature.
std::vector<double> profile_breaks(const ProfileSpec& p);

std::string describe(const ProfileSpec& p);

}  // namespace trapmodes::mesh
