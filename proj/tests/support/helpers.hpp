#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "copytrace/error.hpp"

namespace copytrace::testing {

// Error code thrown by `f`, or nullopt when it returns normally.
template <typename F>
std::optional<ErrorCode> error_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

#ifdef COPYTRACE_FIXTURE_DIR
inline std::string fixture_path(const std::string& stem) {
    return std::string(COPYTRACE_FIXTURE_DIR) + "/" + stem + ".txt";
}

inline std::string read_fixture(const std::string& stem) { return read_file(fixture_path(stem)); }
#endif

// The five abstracts: P1 and P2 share nothing, P4 shares one of seven
// sentences with P3 (also held by P1), P1 shares three of six with P4, P2
// shares seven of nine with P5.
inline constexpr const char* kP1 = "30104599-abstraksi";
inline constexpr const char* kP2 = "50404783-abstraksi";
inline constexpr const char* kP3 = "30104876-abstraksi";
inline constexpr const char* kP4 = "31104453-abstraksi";
inline constexpr const char* kP5 = "50404087-abstraksi";

}  // namespace copytrace::testing
