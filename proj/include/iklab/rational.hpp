#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace iklab {

// All probabilities are exact rationals. Partition discovery and the
// identity checks compare distributions for equality, so there is no
// tolerance parameter anywhere in the library.
using Rat = boost::multiprecision::cpp_rational;

inline std::string to_fraction(const Rat& r) {
    return r.str();
}

inline Rat parse_fraction(std::string_view s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos) {
            return Rat(boost::multiprecision::cpp_int(std::string(s)));
        }
        boost::multiprecision::cpp_int num{std::string(s.substr(0, slash))};
        boost::multiprecision::cpp_int den{std::string(s.substr(slash + 1))};
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed fraction: " + std::string(s));
    }
}

// FNV-1a, used for stable cross-platform model hashes.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace iklab
