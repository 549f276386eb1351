#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace ptsys {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Error taxonomy used across the library. `parse` errors carry a position so
// the CLI can report locations and exit with the dedicated status code.
enum class ErrorKind { parse, precondition, validation, internal };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string msg, std::optional<std::size_t> pos = std::nullopt)
        : std::runtime_error(std::move(msg)), kind_(kind), pos_(pos) {}
    ErrorKind kind() const { return kind_; }
    std::optional<std::size_t> position() const { return pos_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> pos_;
};

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw Error(ErrorKind::precondition, "zero denominator");
    return Rat(num, den);
}

std::string rat_to_string(const Rat& r);   // "p" or "p/q", q > 0, reduced
Rat rat_from_string(const std::string& s); // accepts "p" and "p/q"

// 64-bit FNV-1a. Used for derived identifiers; must be stable across runs
// and platforms, which rules out std::hash.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(const std::string& s); // fnv1a rendered as 16 hex chars

} // namespace ptsys
