#pragma once

#include <cstdint>
#include <string>

namespace hdx {

// Size limits for every enumeration in the library.
struct Caps {
    std::uint64_t group_order = 1'000'000;
    std::uint64_t subspace_count = 200'000;
    std::uint64_t configurations = std::uint64_t{1} << 24;
    std::uint64_t solver_faces = 2'500;
    std::uint64_t isomorphism_steps = 50'000'000;
    std::uint64_t jacobi_size = 700;

    static Caps defaults() { return {}; }

    // Parses "key=value,key=value" overrides (keys: group, subspaces, configs, solver, iso, jacobi).
    static Caps parse(const std::string& overrides, Caps base);
    static Caps parse(const std::string& overrides);
};

}  // namespace hdx
