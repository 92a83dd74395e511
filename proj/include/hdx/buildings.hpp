#pragma once

#include "hdx/caps.hpp"
#include "hdx/cones.hpp"
#include "hdx/fq.hpp"
#include "hdx/simplicial.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hdx {

// A set of subspaces of F^ambient (optionally carrying a form) together with its flag complex.
// Vertex i of `complex` is `subspaces[i]`, labelled by its canonical key.
struct Geometry {
    std::shared_ptr<const Field> field;
    int ambient = 0;
    std::optional<Form> form;
    std::vector<Subspace> subspaces;
    Complex complex;
    // The defining set of subspaces when known; vertices are the members transversal to all of it.
    std::optional<std::vector<Subspace>> constraints;

    std::optional<Vertex> find(const Subspace& u) const { return complex.find_vertex(u.key()); }
};

// Builds a geometry from an explicit vertex set ordered by inclusion.
Geometry flag_geometry(std::shared_ptr<const Field> field, int ambient, std::optional<Form> form, std::vector<Subspace> vertices);

// Clique complex of a graph on labelled vertices.
Complex clique_complex(const std::vector<std::string>& labels, const std::vector<std::vector<Vertex>>& adjacency);

std::vector<Subspace> proper_subspaces(const Field& F, int ambient, const Caps& caps);
std::vector<Subspace> isotropic_subspaces(const Form& form, const Caps& caps);

Geometry an_building(std::shared_ptr<const Field> field, int ambient, const Caps& caps = {});
Geometry opposition_an(std::shared_ptr<const Field> field, int ambient, const std::vector<Subspace>& constraints, const Caps& caps = {});
Geometry cn_building(const Form& form, const Caps& caps = {});
// Throws DomainError unless the constraint set is closed under perp.
Geometry opposition_cn(const Form& form, const std::vector<Subspace>& constraints, const Caps& caps = {});

// The standard full flag <e1> < <e1,e2> < ... of F^ambient.
std::vector<Subspace> standard_flag(const Field& F, int ambient);
// Adds the perp of every member.
std::vector<Subspace> perp_closure(const Form& form, const std::vector<Subspace>& constraints);

struct Oriflamme {
    Geometry t;                       // inclusion flag complex, all isotropic dimensions
    std::vector<Subspace> tilde_subspaces;
    Complex tilde;                    // oriflamme incidence, codimension-one spaces removed
    std::vector<SubdivisionPair> pairing;
    std::vector<int> family;          // per tilde vertex: 0/1 for maximal spaces, -1 otherwise
};

Oriflamme dn_oriflamme(const Form& form, const Caps& caps = {});
Oriflamme opposition_dn(const Form& form, const std::vector<Subspace>& constraints, const Caps& caps = {});

struct ClassCheck {
    bool applicable = true;
    bool holds = false;
    std::int64_t required = 0;   // left-hand side, or N(E)
    std::int64_t field_size = 0;
    std::string detail;
};

// Sum_j C(n, j-1) e_j <= |K| with n = ambient - 2.
ClassCheck class_ca_check(const Field& F, int ambient, const std::vector<Subspace>& constraints);
// |K| >= N(E); not applicable for the non-thick case ambient = 2 * witt.
ClassCheck class_cc_check(const Form& form, const std::vector<Subspace>& constraints);

// Cone of degree dim - 1 on a geometry's flag complex, produced by the type-A or type-C
// filtration (by whether a form is present) with recursive relative-link cones and solver fallback.
ProvidedCone geometry_cone(const Geometry& g, const Caps& caps = {});

FiltrationPlan an_filtration_plan(std::shared_ptr<const Geometry> g, const Caps& caps = {});
FiltrationPlan cn_filtration_plan(std::shared_ptr<const Geometry> g, const Caps& caps = {});

// Graph-isomorphism search on 1-skeleta with colour refinement, confirmed on all faces.
// Optional per-vertex types must then be preserved. Returns the vertex map X -> Y.
std::optional<std::vector<Vertex>> complexes_isomorphic(const Complex& x, const Complex& y, const std::vector<int>* types_x = nullptr,
                                                         const std::vector<int>* types_y = nullptr, const Caps& caps = {});

}  // namespace hdx
