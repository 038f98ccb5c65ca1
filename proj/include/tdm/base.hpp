#pragma once
// Shared identifiers, error types and small string helpers.

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdm {

// Objects and morphisms are dense indices into name-sorted tables, so index
// order coincides with lexicographic order on the unique names.
using ObjId = std::uint32_t;
using MorId = std::uint32_t;
inline constexpr std::uint32_t kNone = 0xFFFFFFFFu;

// Problems with caller-supplied data (bad typing, unknown ids, failed
// preconditions). The CLI maps these to exit code 2.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& m) : std::runtime_error(m) {}
};

// A theorem-backed construction step failed (missing/non-unique mediator,
// witness that does not certify). Indicates a bug or broken input upstream.
struct construction_error : std::runtime_error {
    explicit construction_error(const std::string& m) : std::runtime_error(m) {}
};

namespace detail {
inline void cat_into(std::ostringstream&) {}
template <class T, class... R>
void cat_into(std::ostringstream& os, const T& t, const R&... r) {
    os << t;
    cat_into(os, r...);
}
} // namespace detail

// Tiny replacement for std::format (not available on this toolchain).
template <class... T>
std::string cat(const T&... t) {
    std::ostringstream os;
    detail::cat_into(os, t...);
    return os.str();
}

inline void check_input(bool ok, const std::string& msg) {
    if (!ok) throw input_error(msg);
}
inline void check_construction(bool ok, const std::string& msg) {
    if (!ok) throw construction_error(msg);
}

} // namespace tdm
