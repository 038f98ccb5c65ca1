#pragma once
// Shared helpers for the test suites: bundled-file loading and the list of
// finite examples that carry tangent structures.

#include <string>
#include <vector>

#include "tdm/presentation.hpp"

#ifndef TDM_DATA_DIR
#error "TDM_DATA_DIR must be defined by the build"
#endif

inline std::string data_path(const std::string& name) {
    return std::string(TDM_DATA_DIR) + "/" + name;
}

inline tdm::PresentationFile load_example(const std::string& name) {
    return tdm::parse_file(data_path(name));
}

// Every bundled well-formed presentation with a tangent block.
inline const std::vector<std::string>& tangent_examples() {
    static const std::vector<std::string> v = {
        "chain3.cat",   "diamond.cat", "empty.cat", "grid23.cat",
        "iso2.cat",     "iso2swap.cat", "monoid-e.cat", "vposet.cat",
        "z2.cat",       "z2twist.cat"};
    return v;
}

// All well-formed bundled files (categories and the algebra collection).
inline const std::vector<std::string>& wellformed_examples() {
    static const std::vector<std::string> v = {
        "algebras.alg", "chain3.cat", "diamond.cat",  "empty.cat",
        "grid23.cat",   "iso2.cat",   "iso2swap.cat", "monoid-e.cat",
        "vposet.cat",   "z2.cat",     "z2twist.cat"};
    return v;
}

// The malformed bundle with the diagnostic class each one exercises.
inline const std::vector<std::pair<std::string, std::string>>&
malformed_examples() {
    static const std::vector<std::pair<std::string, std::string>> v = {
        {"bad_syntax.cat", "unexpected character"},
        {"bad_unknown.cat", "unknown object"},
        {"bad_compose.cat", "not composable"},
        {"bad_dup.cat", "duplicate name"},
        {"bad_table.cat", "invalid category"},
        {"bad_misscomp.cat", "invalid category"},
        {"bad_tangent.cat", "missing T image"},
        {"bad_witness.cat", "does not certify"},
        {"broken.cat", "unknown morphism"}};
    return v;
}
