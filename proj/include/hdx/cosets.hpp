#pragma once

#include "hdx/caps.hpp"
#include "hdx/fq.hpp"
#include "hdx/simplicial.hpp"

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace hdx {

// Elementary matrix with 1-based position (row, col) set to `value` on top of the identity.
FqMatrix elementary_matrix(int degree, int row, int col, FieldElement value);

// Finite group of invertible matrices enumerated by breadth-first closure.
class MatrixGroup {
public:
    MatrixGroup() = default;

    // Closure of the generators and their inverses; throws ResourceError past caps.group_order.
    static MatrixGroup generate(std::shared_ptr<const Field> field, int degree, std::vector<FqMatrix> generators, const Caps& caps = {});
    // Wraps an explicit element list that the caller knows to be a group.
    static MatrixGroup from_elements(std::shared_ptr<const Field> field, int degree, std::vector<FqMatrix> elements);

    const Field& field() const { return *field_; }
    std::shared_ptr<const Field> field_ptr() const { return field_; }
    int degree() const { return degree_; }
    const std::vector<FqMatrix>& generators() const { return generators_; }
    // Identity first, then breadth-first order.
    const std::vector<FqMatrix>& elements() const { return elements_; }
    std::size_t order() const { return elements_.size(); }

    std::optional<std::size_t> index_of(const FqMatrix& m) const;
    bool contains(const FqMatrix& m) const { return index_of(m).has_value(); }
    bool is_subgroup_of(const MatrixGroup& g) const;
    MatrixGroup intersection(const MatrixGroup& other) const;

private:
    std::shared_ptr<const Field> field_;
    int degree_ = 0;
    std::vector<FqMatrix> generators_;
    std::vector<FqMatrix> elements_;
    std::unordered_map<std::string, std::size_t> index_;
};

// CC(G; H_0..H_n). Vertex labels are "type:coset".
struct CosetComplex {
    std::shared_ptr<const MatrixGroup> group;
    std::vector<MatrixGroup> subgroups;
    Complex complex;
    std::vector<int> types;                          // per vertex
    std::vector<std::vector<Vertex>> coset_vertex;   // [type][element index] -> vertex of g H_type
    std::vector<std::size_t> representative;         // per vertex, index of one element of the coset
};

CosetComplex coset_complex(std::shared_ptr<const MatrixGroup> group, std::vector<MatrixGroup> subgroups, const Caps& caps = {});

// Every face meets each type at most once.
bool is_partite(const CosetComplex& cc);

struct LinkCheck {
    bool holds = false;
    std::vector<int> face_types;
    std::size_t link_vertices = 0;
    std::string detail;
};

// Compares lk(face) with CC(H_T, (H_{T+i})_{i not in T}) through a type-preserving isomorphism.
LinkCheck link_identification(const CosetComplex& cc, const Face& face, const Caps& caps = {});

struct TransitivityCheck {
    bool applicable = true;
    bool holds = false;
    std::size_t facets = 0;
    std::size_t orbit = 0;
    std::string detail;
};

// Left translation by the generators is checked to be simplicial, then the orbit of one facet is grown.
TransitivityCheck facet_transitivity(const CosetComplex& cc);
// A bare complex carries no group action.
TransitivityCheck facet_transitivity(const Complex& x);

// CC(U+, (U_{I minus i})) for the upper unitriangular group of SL_{rank+1}(F).
CosetComplex unipotent_opposition(std::shared_ptr<const Field> field, int rank, const Caps& caps = {});

struct KmsExample {
    CosetComplex cc;
    std::shared_ptr<const Field> extension;  // F_q[t]/(f)
    std::vector<std::string> local_sets;     // names of the checked local groups
    std::vector<std::size_t> source_orders;  // orders over F_q[t]
    std::vector<std::size_t> image_orders;   // orders after reduction mod f
    bool injective = false;
    bool intersections_preserved = false;
    std::vector<std::string> notes;
};

// Reduction mod f of <e_{i,i+1}(F_q), e_{n+1,1}(t F_q)> in SL_{n+1}(F_q[t]); f is normalised to monic.
KmsExample kms_sl_example(int n, std::shared_ptr<const Field> base, const Polynomial& f, const Caps& caps = {});

}  // namespace hdx
