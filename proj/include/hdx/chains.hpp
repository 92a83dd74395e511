#pragma once

#include "hdx/simplicial.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hdx {

// Finitely generated abelian group Z/m1 + ... + Z/mr, where a modulus of 0 stands for Z.
struct CoefficientGroup {
    std::vector<std::int64_t> moduli{0};

    static CoefficientGroup integers() { return {{0}}; }
    static CoefficientGroup cyclic(std::int64_t m);
    // Accepts "Z", "Z/3", "Z/2+Z", or a bare modulus "2".
    static CoefficientGroup parse(const std::string& text);

    std::size_t components() const { return moduli.size(); }
    bool is_integers() const { return moduli.size() == 1 && moduli[0] == 0; }
    std::string describe() const;
    bool operator==(const CoefficientGroup&) const = default;
};

std::string describe_modulus(std::int64_t modulus);

inline std::int64_t reduce_mod(std::int64_t a, std::int64_t modulus) {
    if (modulus == 0) return a;
    a %= modulus;
    return a < 0 ? a + modulus : a;
}

struct ChainTag {};
struct CochainTag {};

// Sparse coefficient assignment on canonically oriented simplices, with coefficients in Z
// (modulus 0) or Z/m. Zero coefficients are never stored.
template <class Tag>
class SparseSimplicial {
public:
    using Terms = std::map<Face, std::int64_t>;

    explicit SparseSimplicial(int degree = 0, std::int64_t modulus = 0) : degree_(degree), modulus_(modulus) {}

    static SparseSimplicial unit(Face oriented, std::int64_t coeff = 1, std::int64_t modulus = 0) {
        SparseSimplicial c(static_cast<int>(oriented.size()) - 1, modulus);
        c.add_oriented(std::move(oriented), coeff);
        return c;
    }

    int degree() const { return degree_; }
    std::int64_t modulus() const { return modulus_; }
    const Terms& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t support_size() const { return terms_.size(); }

    std::int64_t coeff(const Face& canonical) const {
        auto it = terms_.find(canonical);
        return it == terms_.end() ? 0 : it->second;
    }

    void add(const Face& canonical, std::int64_t c) {
        c = reduce_mod(c, modulus_);
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(canonical, c);
        if (!inserted) {
            it->second = reduce_mod(it->second + c, modulus_);
            if (it->second == 0) terms_.erase(it);
        }
    }

    void add_oriented(Face oriented, std::int64_t c) {
        const int sign = canonicalize(oriented);
        if (sign != 0) add(oriented, sign * c);
    }

    SparseSimplicial& operator+=(const SparseSimplicial& o) {
        for (const auto& [f, c] : o.terms_) add(f, c);
        return *this;
    }
    SparseSimplicial& operator-=(const SparseSimplicial& o) {
        for (const auto& [f, c] : o.terms_) add(f, -c);
        return *this;
    }
    SparseSimplicial& operator*=(std::int64_t a) {
        Terms next;
        for (const auto& [f, c] : terms_) {
            const std::int64_t v = reduce_mod(c * a, modulus_);
            if (v != 0) next.emplace(f, v);
        }
        terms_ = std::move(next);
        return *this;
    }
    friend SparseSimplicial operator+(SparseSimplicial a, const SparseSimplicial& b) { return a += b; }
    friend SparseSimplicial operator-(SparseSimplicial a, const SparseSimplicial& b) { return a -= b; }
    friend SparseSimplicial operator*(std::int64_t s, SparseSimplicial a) { return a *= s; }
    friend SparseSimplicial operator-(SparseSimplicial a) { return a *= -1; }
    bool operator==(const SparseSimplicial& o) const { return degree_ == o.degree_ && terms_ == o.terms_; }

    SparseSimplicial reduced(std::int64_t modulus) const {
        SparseSimplicial r(degree_, modulus);
        for (const auto& [f, c] : terms_) r.add(f, c);
        return r;
    }

    // Applies a vertex renaming and re-canonicalizes with the permutation sign.
    SparseSimplicial mapped(const std::vector<Vertex>& vertex_map) const {
        SparseSimplicial r(degree_, modulus_);
        for (const auto& [f, c] : terms_) {
            Face g;
            g.reserve(f.size());
            for (Vertex v : f) g.push_back(vertex_map.at(static_cast<std::size_t>(v)));
            r.add_oriented(std::move(g), c);
        }
        return r;
    }

private:
    int degree_;
    std::int64_t modulus_;
    Terms terms_;
};

using Chain = SparseSimplicial<ChainTag>;
using Cochain = SparseSimplicial<CochainTag>;

// Augmented boundary: the boundary of a vertex is the empty simplex.
Chain boundary(const Chain& a);
Chain boundary(const Chain& a, const Complex& X);
Cochain coboundary(const Cochain& phi, const Complex& X);

// Sum over the support of the weights.
Rational norm(const Cochain& phi, const Complex& X);
// Sum of coefficient products over common simplices.
std::int64_t pairing(const Cochain& phi, const Chain& a);

// [v, A]: prepends v to every simplex of A. Throws when v cannot be joined (when X is given).
Chain bracket_vertex(Vertex v, const Chain& a, const Complex* X = nullptr);
// [A1, A2]: concatenates simplices; degree j1 + j2 + 1.
Chain bracket_chains(const Chain& a1, const Chain& a2, const Complex* X = nullptr);

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Matrix of the augmented boundary from degree k to k-1 (rows: X(k-1), cols: X(k)).
IntMatrix boundary_matrix(const Complex& X, int k);

struct HomologyGroup {
    int degree;
    std::int64_t rank;
    std::vector<std::int64_t> torsion;
    bool vanishes() const { return rank == 0 && torsion.empty(); }
};

// Reduced integral homology in degrees -1..dim X.
std::vector<HomologyGroup> reduced_homology_ranks(const Complex& X);

// Dimension of reduced cohomology H^k(X; Z/p) for prime p, from the integral data.
std::int64_t reduced_cohomology_dimension_mod(const std::vector<HomologyGroup>& homology, int k, std::int64_t p);

}  // namespace hdx
