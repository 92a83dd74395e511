#pragma once

#include "hdx/caps.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hdx {

using FieldElement = std::uint8_t;

// Finite field given by tables. Elements are codes 0..size()-1; for an extension of a base
// field B by a polynomial of degree s, the code of sum c_i x^i is sum code(c_i) * |B|^i.
class Field {
public:
    static std::shared_ptr<const Field> prime(int p);
    // GF(p^s) defined by the least monic irreducible polynomial of degree s over GF(p), where
    // polynomials are ordered by their coefficient codes read from degree s-1 down to 0.
    static std::shared_ptr<const Field> galois(int p, int s);
    // base[x]/(poly); poly is monic, coefficients low-to-high including the leading 1.
    static std::shared_ptr<const Field> extension(std::shared_ptr<const Field> base, const std::vector<FieldElement>& poly);

    int size() const { return q_; }
    int characteristic() const { return p_; }
    int degree() const { return degree_over_prime_; }
    const Field* base() const { return base_.get(); }
    const std::vector<FieldElement>& modulus() const { return poly_; }
    std::string describe() const;

    FieldElement add(FieldElement a, FieldElement b) const { return add_[idx(a, b)]; }
    FieldElement sub(FieldElement a, FieldElement b) const { return add_[idx(a, neg_[b])]; }
    FieldElement mul(FieldElement a, FieldElement b) const { return mul_[idx(a, b)]; }
    FieldElement neg(FieldElement a) const { return neg_[a]; }
    FieldElement inv(FieldElement a) const;
    FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }
    FieldElement pow(FieldElement a, std::uint64_t e) const;
    FieldElement from_int(std::int64_t n) const;
    // Element x (the adjoined root) when this is an extension; 1 for prime fields with p > 1.
    FieldElement generator() const { return generator_; }
    // Additive basis over the prime field: 1, x, x^2, ... for galois fields.
    std::vector<FieldElement> prime_basis() const;

private:
    Field() = default;
    std::size_t idx(FieldElement a, FieldElement b) const { return static_cast<std::size_t>(a) * static_cast<std::size_t>(q_) + b; }

    int p_ = 0;
    int q_ = 0;
    int degree_over_prime_ = 1;
    std::shared_ptr<const Field> base_;
    std::vector<FieldElement> poly_;
    std::vector<FieldElement> add_, mul_, neg_, inv_;
    FieldElement generator_ = 1;
};

// Polynomials over a field, coefficient vectors low-to-high without trailing zeros.
using Polynomial = std::vector<FieldElement>;
void trim(Polynomial& f);
Polynomial poly_mul(const Field& F, const Polynomial& a, const Polynomial& b);
Polynomial poly_add(const Field& F, const Polynomial& a, const Polynomial& b);
Polynomial poly_mod(const Field& F, Polynomial a, const Polynomial& m);
bool is_irreducible(const Field& F, const Polynomial& f);

using FqMatrix = Eigen::Matrix<FieldElement, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

FqMatrix fq_multiply(const Field& F, const FqMatrix& a, const FqMatrix& b);
FqMatrix fq_transpose(const FqMatrix& a);
// Reduces to reduced row-echelon form in place, drops zero rows, returns pivot columns.
std::vector<int> fq_rref(const Field& F, FqMatrix& m);
int fq_rank(const Field& F, FqMatrix m);
// Basis (as rows, in RREF) of {x : m * x = 0}.
FqMatrix fq_null_space(const Field& F, const FqMatrix& m);
std::optional<FqMatrix> fq_inverse(const Field& F, const FqMatrix& m);
std::string fq_key(const FqMatrix& m);

// Subspace of F^m stored by its reduced row-echelon basis.
class Subspace {
public:
    Subspace() = default;
    static Subspace span(const Field& F, int ambient, FqMatrix rows);
    static Subspace zero(int ambient);
    static Subspace whole(int ambient);

    int ambient() const { return ambient_; }
    int dim() const { return static_cast<int>(basis_.rows()); }
    const FqMatrix& basis() const { return basis_; }
    const std::vector<int>& pivots() const { return pivots_; }
    // Stable text form, usable as a label: rows separated by ';', digits by ','.
    std::string key() const;

    bool contains_vector(const Field& F, const FqMatrix& row) const;
    bool contains(const Field& F, const Subspace& other) const;
    // Reduces a row vector modulo this subspace (eliminating pivot columns).
    FqMatrix reduce(const Field& F, const FqMatrix& row) const;

    bool operator==(const Subspace& o) const { return ambient_ == o.ambient_ && dim() == o.dim() && basis_ == o.basis_; }
    bool operator<(const Subspace& o) const;

private:
    int ambient_ = 0;
    FqMatrix basis_;
    std::vector<int> pivots_;
};

Subspace subspace_sum(const Field& F, const Subspace& u, const Subspace& w);
Subspace subspace_intersection(const Field& F, const Subspace& u, const Subspace& w);
int sum_dimension(const Field& F, const Subspace& u, const Subspace& w);

// Coordinates of a subspace W <= U in the RREF basis of U.
Subspace coordinates_in(const Field& F, const Subspace& w, const Subspace& u);
// Inverse of coordinates_in.
Subspace from_coordinates(const Field& F, const Subspace& coords, const Subspace& u);
// Image of W (containing U) in V/U, with V/U identified with the non-pivot coordinates of U.
Subspace quotient_image(const Field& F, const Subspace& w, const Subspace& u);
// Preimage in V of a subspace of V/U.
Subspace quotient_preimage(const Field& F, const Subspace& image, const Subspace& u);

std::vector<Subspace> enumerate_subspaces(const Field& F, int ambient, int d, const Caps& caps = {});
std::uint64_t gaussian_binomial(int q, int m, int d);

bool is_transversal(const Field& F, const Subspace& u, const Subspace& w);

// Symmetric bilinear form f given by its Gram matrix, odd characteristic, with Q(x) = f(x,x)/2.
class Form {
public:
    Form(std::shared_ptr<const Field> field, FqMatrix gram);
    // Q = x_1 x_{w+1} + ... + x_w x_{2w} on F^{2w}.
    static Form hyperbolic(std::shared_ptr<const Field> field, int witt);
    // Q = x_1 x_{w+1} + ... + x_w x_{2w} + x_{2w+1}^2 on F^{2w+1}.
    static Form parabolic(std::shared_ptr<const Field> field, int witt);

    const Field& field() const { return *field_; }
    std::shared_ptr<const Field> field_ptr() const { return field_; }
    const FqMatrix& gram() const { return gram_; }
    int ambient() const { return static_cast<int>(gram_.rows()); }

    FieldElement bilinear(const FqMatrix& x, const FqMatrix& y) const;
    FieldElement quadratic(const FqMatrix& x) const;
    bool nondegenerate() const;

    Subspace perp(const Subspace& u) const;
    bool is_totally_isotropic(const Subspace& u) const;
    int witt_index() const;
    // Totally isotropic subspaces of dimension d, each once.
    std::vector<Subspace> isotropic_subspaces(int d, const Caps& caps = {}) const;
    // Induced nondegenerate form on U^perp / U for totally isotropic U, with the basis used.
    Form quotient(const Subspace& u, FqMatrix* basis_out = nullptr) const;

private:
    std::shared_ptr<const Field> field_;
    FqMatrix gram_;
};

bool tilde_transversal(const Form& form, const Subspace& u, const Subspace& w);

// Helper: row vector from explicit entries.
FqMatrix fq_row(std::initializer_list<int> entries);
// Standard basis vector e_i (1-based) of F^m as a span.
Subspace standard_span(const Field& F, int ambient, std::initializer_list<int> indices);

}  // namespace hdx
