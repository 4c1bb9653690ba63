#include "trapmodes/profile.hpp"

#include "trapmodes/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace trapmodes::mesh {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_in_domain(const ProfileSpec& p, double x) {
    const double lo = p.domain_lo();
    const double hi = p.domain_hi();
    if (!(x >= lo && x <= hi)) {
        std::ostringstream msg;
        msg << "profile argument " << x << " outside [" << lo << ", " << hi << "]";
        throw DomainError(msg.str());
    }
}

std::size_t table_segment(const ProfileSpec& p, double x) {
    auto it = std::upper_bound(p.nodes.begin(), p.nodes.end(), x);
    std::size_t i = static_cast<std::size_t>(it - p.nodes.begin());
    if (i == 0) return 0;
    if (i >= p.nodes.size()) return p.nodes.size() - 2;
    return i - 1;
}

}  // namespace

ProfileSpec ProfileSpec::zero() { return fourier(0.0, {}, {}); }

ProfileSpec ProfileSpec::fourier(double a0, std::vector<double> a, std::vector<double> b) {
    ProfileSpec p;
    p.kind = Kind::fourier;
    p.a0 = a0;
    p.a = std::move(a);
    p.b = std::move(b);
    return p;
}

ProfileSpec ProfileSpec::table(std::vector<double> nodes, std::vector<double> values) {
    ProfileSpec p;
    p.kind = Kind::table;
    p.nodes = std::move(nodes);
    p.values = std::move(values);
    validate_profile(p);
    return p;
}

ProfileSpec ProfileSpec::polynomial(std::vector<double> coeffs, double lo, double hi) {
    ProfileSpec p;
    p.kind = Kind::polynomial;
    p.coeffs = std::move(coeffs);
    p.lo = lo;
    p.hi = hi;
    validate_profile(p);
    return p;
}

bool ProfileSpec::is_identically_zero() const {
    auto all_zero = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; });
    };
    switch (kind) {
        case Kind::fourier: return a0 == 0.0 && all_zero(a) && all_zero(b);
        case Kind::table: return all_zero(values);
        case Kind::polynomial: return all_zero(coeffs);
    }
    return false;
}

void validate_profile(const ProfileSpec& p) {
    auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double c) { return std::isfinite(c); });
    };
    switch (p.kind) {
        case ProfileSpec::Kind::fourier:
            if (!std::isfinite(p.a0) || !finite(p.a) || !finite(p.b))
                throw ConfigError("fourier profile has non-finite coefficients");
            return;
        case ProfileSpec::Kind::table: {
            if (p.nodes.size() < 2 || p.nodes.size() != p.values.size())
                throw ConfigError("table profile needs at least two (node, value) pairs");
            if (p.nodes.front() != 0.0 || p.nodes.back() != 1.0)
                throw ConfigError("table profile nodes must start at 0 and end at 1");
            for (std::size_t i = 1; i < p.nodes.size(); ++i)
                if (!(p.nodes[i] > p.nodes[i - 1]))
                    throw ConfigError("table profile nodes must be strictly increasing");
            if (!finite(p.values)) throw ConfigError("table profile has non-finite values");
            return;
        }
        case ProfileSpec::Kind::polynomial:
            if (p.coeffs.empty()) throw ConfigError("polynomial profile has no coefficients");
            if (!(p.hi > p.lo)) throw ConfigError("polynomial profile interval is empty");
            if (!finite(p.coeffs)) throw ConfigError("polynomial profile has non-finite coefficients");
            return;
    }
}

double profile_eval(const ProfileSpec& p, double x) {
    check_in_domain(p, x);
    switch (p.kind) {
        case ProfileSpec::Kind::fourier: {
            double s = p.a0;
            for (std::size_t k = 0; k < p.a.size(); ++k) s += p.a[k] * std::cos(two_pi * double(k + 1) * x);
            for (std::size_t k = 0; k < p.b.size(); ++k) s += p.b[k] * std::sin(two_pi * double(k + 1) * x);
            return s;
        }
        case ProfileSpec::Kind::table: {
            const std::size_t i = table_segment(p, x);
            const double t = (x - p.nodes[i]) / (p.nodes[i + 1] - p.nodes[i]);
            return p.values[i] + t * (p.values[i + 1] - p.values[i]);
        }
        case ProfileSpec::Kind::polynomial: {
            double s = 0.0;
            for (auto c = p.coeffs.rbegin(); c != p.coeffs.rend(); ++c) s = s * x + *c;
            return s;
        }
    }
    return 0.0;
}

double profile_d1(const ProfileSpec& p, double x) {
    check_in_domain(p, x);
    switch (p.kind) {
        case ProfileSpec::Kind::fourier: {
            double s = 0.0;
            for (std::size_t k = 0; k < p.a.size(); ++k) {
                const double w = two_pi * double(k + 1);
                s -= p.a[k] * w * std::sin(w * x);
            }
            for (std::size_t k = 0; k < p.b.size(); ++k) {
                const double w = two_pi * double(k + 1);
                s += p.b[k] * w * std::cos(w * x);
            }
            return s;
        }
        case ProfileSpec::Kind::table: {
            const std::size_t i = table_segment(p, x);
            return (p.values[i + 1] - p.values[i]) / (p.nodes[i + 1] - p.nodes[i]);
        }
        case ProfileSpec::Kind::polynomial: {
            double s = 0.0;
            for (std::size_t i = p.coeffs.size(); i-- > 1;) s = s * x + double(i) * p.coeffs[i];
            return s;
        }
    }
    return 0.0;
}

double profile_d2(const ProfileSpec& p, double x) {
    check_in_domain(p, x);
    switch (p.kind) {
        case ProfileSpec::Kind::fourier: {
            double s = 0.0;
            for (std::size_t k = 0; k < p.a.size(); ++k) {
                const double w = two_pi * double(k + 1);
                s -= p.a[k] * w * w * std::cos(w * x);
            }
            for (std::size_t k = 0; k < p.b.size(); ++k) {
                const double w = two_pi * double(k + 1);
                s -= p.b[k] * w * w * std::sin(w * x);
            }
            return s;
        }
        case ProfileSpec::Kind::table:
            throw PreconditionError("table profiles have no second derivative");
        case ProfileSpec::Kind::polynomial: {
            double s = 0.0;
            for (std::size_t i = p.coeffs.size(); i-- > 2;) s = s * x + double(i) * double(i - 1) * p.coeffs[i];
            return s;
        }
    }
    return 0.0;
}

double profile_max_abs(const ProfileSpec& p) {
    if (p.kind == ProfileSpec::Kind::table) {
        double m = 0.0;
        for (double v : p.values) m = std::max(m, std::abs(v));
        return m;
    }
    const int samples = 4096;
    double m = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double x = p.domain_lo() + (p.domain_hi() - p.domain_lo()) * i / samples;
        m = std::max(m, std::abs(profile_eval(p, x)));
    }
    return m;
}

double profile_min(const ProfileSpec& p) {
    if (p.kind == ProfileSpec::Kind::table) return *std::min_element(p.values.begin(), p.values.end());
    const int samples = 4096;
    double m = profile_eval(p, p.domain_lo());
    for (int i = 1; i <= samples; ++i) {
        const double x = p.domain_lo() + (p.domain_hi() - p.domain_lo()) * i / samples;
        m = std::min(m, profile_eval(p, x));
    }
    return m;
}

std::vector<double> profile_breaks(const ProfileSpec& p) {
    if (p.kind == ProfileSpec::Kind::table) return p.nodes;
    return {p.domain_lo(), p.domain_hi()};
}

std::string describe(const ProfileSpec& p) {
    std::ostringstream out;
    out.precision(17);
    auto list = [&out](const std::vector<double>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
    };
    switch (p.kind) {
        case ProfileSpec::Kind::fourier:
            out << "fourier(a0=" << p.a0 << ";a=";
            list(p.a);
            out << ";b=";
            list(p.b);
            out << ")";
            break;
        case ProfileSpec::Kind::table:
            out << "table(eta=";
            list(p.nodes);
            out << ";value=";
            list(p.values);
            out << ")";
            break;
        case ProfileSpec::Kind::polynomial:
            out << "polynomial(coeffs=";
            list(p.coeffs);
            out << ";on=[" << p.lo << "," << p.hi << "])";
            break;
    }
    return out.str();
}

}  // namespace trapmodes::mesh
