#pragma once

#include "hdx/simplicial.hpp"

#include <string>
#include <vector>

namespace hdx::testing {

Complex full_simplex(int vertices);
Complex hollow_triangle();
Complex filled_triangle();
Complex cycle(int length);
Complex octahedron();
Complex path(int length);

// Seeded random complex: `faces` random maximal candidates of size 1..max_size on `vertices` labels.
Complex random_complex(unsigned seed, int vertices, int faces, int max_size);
// Seeded random pure complex of the given dimension.
Complex random_pure_complex(unsigned seed, int vertices, int faces, int dimension);

}  // namespace hdx::testing

#include <functional>
#include <map>
#include <set>

namespace hdx::testing {

// Vector spaces over a prime field handled as explicit sets of encoded vectors.
struct BruteSpace {
    int p;
    int m;
    using Sub = std::set<int>;

    std::vector<int> decode(int code) const;
    int encode(const std::vector<int>& v) const;
    int add(int a, int b) const;
    int scale(int c, int a) const;
    Sub span(const std::vector<int>& generators) const;
    int dim(const Sub& s) const;
    std::vector<Sub> subspaces(int d, const std::function<bool(const Sub&)>& keep = {}) const;
    Sub meet(const Sub& a, const Sub& b) const;
    bool transversal(const Sub& a, const Sub& b) const;
    bool contains(const Sub& big, const Sub& small) const;
    Sub unit_span(std::initializer_list<int> one_based) const;
};

// Vertex and edge counts of the inclusion flag complex on a family of subspaces.
struct FlagCounts {
    std::map<int, std::size_t> per_dimension;
    std::size_t edges = 0;
};
FlagCounts flag_counts(const BruteSpace& space, const std::vector<BruteSpace::Sub>& family);

}  // namespace hdx::testing
