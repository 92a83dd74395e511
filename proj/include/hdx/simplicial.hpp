#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hdx {

using Vertex = std::int32_t;
// A face is a strictly increasing list of vertex indices; the empty list is the (-1)-face.
using Face = std::vector<Vertex>;
using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);

// Sorts an oriented vertex list in place and returns the sign of the sorting permutation,
// or 0 when a vertex repeats.
int canonicalize(Face& oriented);

bool is_subface(const Face& small, const Face& big);

std::int64_t binomial(int n, int k);

// Immutable finite simplicial complex with labelled vertices.
//
// Vertex indices are dense. Subcomplexes produced by link/full_subcomplex keep the relative
// order of the surviving parent indices, so canonical orientations agree with the parent.
class Complex {
public:
    // The complex {∅} with no vertices.
    Complex();

    static Complex from_index_faces(std::vector<std::string> labels, const std::vector<Face>& faces);
    static Complex from_maximal_faces(const std::vector<std::vector<std::string>>& faces);

    int dimension() const { return static_cast<int>(faces_.size()) - 2; }
    bool is_pure() const { return pure_; }
    std::size_t num_vertices() const { return labels_.size(); }
    std::size_t count(int k) const;
    std::size_t total_faces() const;

    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(Vertex v) const { return labels_.at(static_cast<std::size_t>(v)); }
    std::optional<Vertex> find_vertex(std::string_view label) const;
    Vertex vertex(std::string_view label) const;

    // Faces of dimension k in lexicographic order; empty for k outside -1..dimension().
    const std::vector<Face>& faces(int k) const;
    std::optional<std::size_t> index_of(const Face& face) const;
    bool contains(const Face& face) const { return index_of(face).has_value(); }

    const std::vector<Face>& maximal_faces() const { return maximal_; }
    const std::vector<std::size_t>& maximal_faces_of(Vertex v) const { return maximal_of_vertex_.at(static_cast<std::size_t>(v)); }

    // Number of top-dimensional faces containing the given face.
    std::int64_t top_coface_count(const Face& face) const;
    std::int64_t top_coface_count(int k, std::size_t index) const { return top_count_[static_cast<std::size_t>(k + 1)][index]; }

    const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_.at(static_cast<std::size_t>(v)); }
    bool adjacent(Vertex a, Vertex b) const;

    bool operator==(const Complex& other) const { return labels_ == other.labels_ && faces_ == other.faces_; }

private:
    void finish();

    std::vector<std::string> labels_;
    std::unordered_map<std::string, Vertex> label_index_;
    std::vector<std::vector<Face>> faces_;  // faces_[k+1] holds dimension k
    std::vector<std::vector<std::int64_t>> top_count_;
    std::vector<Face> maximal_;
    std::vector<std::vector<std::size_t>> maximal_of_vertex_;
    std::vector<std::vector<Vertex>> adjacency_;
    bool pure_ = true;
};

Complex link(const Complex& X, const Face& tau);
Complex skeleton(const Complex& X, int k);
// Vertex labels are tagged "0:" and "1:" to keep the factors disjoint; X's vertices come first.
Complex join(const Complex& X, const Complex& Y);
// Join that keeps the labels of both factors; they must already be disjoint.
Complex join_untagged(const Complex& X, const Complex& Y);
Complex full_subcomplex(const Complex& X, std::span<const Vertex> vertices);
Complex full_subcomplex(const Complex& X, const std::vector<std::string>& labels);
// lk_X(w) restricted to the vertices flagged in `allowed`.
Complex relative_link(const Complex& X, Vertex w, const std::vector<bool>& allowed);

Rational weight(const Complex& X, const Face& tau);
bool is_connected(const Complex& X);

// For each vertex of `sub`, the index of the vertex with the same label in `parent`.
std::vector<Vertex> embed_by_labels(const Complex& sub, const Complex& parent);

}  // namespace hdx
