#pragma once

#include <string>
#include <string_view>

namespace copytrace::detail {

// Escapes the five markup-significant characters. `apostrophe` is the
// entity emitted for '\''.
inline std::string escape_markup(std::string_view text, std::string_view apostrophe = "&apos;") {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += apostrophe; break;
        default: out += c;
        }
    }
    return out;
}

}  // namespace copytrace::detail
