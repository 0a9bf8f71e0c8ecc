// Exact rational scalars and rational points on the unit sphere.
//
// All physics-facing quantities in this project are exact rationals; doubles
// appear only in diagnostics and in the closed-form constants module.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace loopgas {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat_pow(const Rat& base, long e) {
    if (e < 0) {
        if (base == 0) throw std::domain_error("rat_pow: 0^negative");
        return Rat(1) / rat_pow(base, -e);
    }
    Rat r = 1, b = base;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

inline double rat_double(const Rat& r) { return r.convert_to<double>(); }

inline std::string rat_str(const Rat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

// Rational point on S^2: coordinates are rationals with x^2+y^2+z^2 == 1.
struct Vec3 {
    Rat x, y, z;

    Rat norm2() const { return x * x + y * y + z * z; }
    bool is_unit() const { return norm2() == 1; }
};

inline Rat dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

// A fixed table of exact unit vectors (from Pythagorean quadruples), used to
// generate deterministic boundary assignments from a seed.
inline const std::array<Vec3, 14>& unit_vector_table() {
    static const std::array<Vec3, 14> tab = {{
        {Rat(1), Rat(0), Rat(0)},
        {Rat(0), Rat(1), Rat(0)},
        {Rat(0), Rat(0), Rat(1)},
        {Rat(3, 5), Rat(4, 5), Rat(0)},
        {Rat(-3, 5), Rat(0), Rat(4, 5)},
        {Rat(1, 3), Rat(2, 3), Rat(2, 3)},
        {Rat(-2, 3), Rat(2, 3), Rat(-1, 3)},
        {Rat(2, 7), Rat(3, 7), Rat(6, 7)},
        {Rat(-6, 7), Rat(2, 7), Rat(3, 7)},
        {Rat(1, 9), Rat(-4, 9), Rat(8, 9)},
        {Rat(4, 9), Rat(7, 9), Rat(-4, 9)},
        {Rat(2, 11), Rat(-6, 11), Rat(9, 11)},
        {Rat(12, 13), Rat(3, 13), Rat(-4, 13)},
        {Rat(-8, 17), Rat(9, 17), Rat(12, 17)},
    }};
    return tab;
}

// splitmix64: small deterministic PRNG used only to pick table entries.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline Vec3 random_unit_vector(std::uint64_t& state) {
    const auto& tab = unit_vector_table();
    Vec3 v = tab[splitmix64(state) % tab.size()];
    std::uint64_t s = splitmix64(state);
    if (s & 1) v.x = -v.x;
    if (s & 2) v.y = -v.y;
    if (s & 4) v.z = -v.z;
    return v;
}

}  // namespace loopgas
