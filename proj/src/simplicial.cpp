#include "hdx/simplicial.hpp"

#include "hdx/errors.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace hdx {

std::string to_string(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

int canonicalize(Face& oriented) {
    int sign = 1;
    // insertion sort keeps the parity bookkeeping obvious; faces are short
    for (std::size_t i = 1; i < oriented.size(); ++i) {
        for (std::size_t j = i; j > 0 && oriented[j - 1] >= oriented[j]; --j) {
            if (oriented[j - 1] == oriented[j]) return 0;
            std::swap(oriented[j - 1], oriented[j]);
            sign = -sign;
        }
    }
    return sign;
}

bool is_subface(const Face& small, const Face& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

Complex::Complex() : faces_{{Face{}}} { finish(); }

Complex Complex::from_index_faces(std::vector<std::string> labels, const std::vector<Face>& faces) {
    Complex X;
    X.labels_ = std::move(labels);
    const auto nv = static_cast<Vertex>(X.labels_.size());
    int top = X.labels_.empty() ? -1 : 0;
    for (const auto& f : faces) top = std::max(top, static_cast<int>(f.size()) - 1);
    X.faces_.assign(static_cast<std::size_t>(top + 2), {});
    std::vector<std::vector<Face>>& by_dim = X.faces_;
    by_dim[0].push_back({});
    for (Vertex v = 0; v < nv; ++v) by_dim[1].push_back({v});
    for (const auto& raw : faces) {
        Face f = raw;
        if (canonicalize(f) == 0) throw MalformedInput("face repeats a vertex");
        for (Vertex v : f)
            if (v < 0 || v >= nv) throw MalformedInput("face references unknown vertex index " + std::to_string(v));
        const std::size_t m = f.size();
        if (m > 20) throw ResourceError("face too large to close downward");
        for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
            Face sub;
            for (std::size_t i = 0; i < m; ++i)
                if (mask & (1u << i)) sub.push_back(f[i]);
            if (sub.size() >= 2) by_dim[sub.size()].push_back(std::move(sub));
        }
    }
    for (auto& level : by_dim) {
        std::sort(level.begin(), level.end());
        level.erase(std::unique(level.begin(), level.end()), level.end());
    }
    X.finish();
    return X;
}

Complex Complex::from_maximal_faces(const std::vector<std::vector<std::string>>& faces) {
    if (faces.empty()) throw MalformedInput("no faces given");
    std::vector<std::string> labels;
    std::unordered_map<std::string, Vertex> index;
    std::set<std::string> seen;
    for (const auto& f : faces)
        for (const auto& l : f) seen.insert(l);
    for (const auto& l : seen) {
        index.emplace(l, static_cast<Vertex>(labels.size()));
        labels.push_back(l);
    }
    std::vector<Face> idx;
    for (const auto& f : faces) {
        Face g;
        for (const auto& l : f) g.push_back(index.at(l));
        if (canonicalize(g) == 0) throw MalformedInput("duplicate label within one face");
        idx.push_back(std::move(g));
    }
    return from_index_faces(std::move(labels), idx);
}

void Complex::finish() {
    label_index_.clear();
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (!label_index_.emplace(labels_[i], static_cast<Vertex>(i)).second)
            throw MalformedInput("duplicate vertex label " + labels_[i]);
    }
    const int n = dimension();
    // maximal faces: those not covered by a face one dimension up
    maximal_.clear();
    std::vector<std::vector<char>> covered(faces_.size());
    for (std::size_t d = 0; d < faces_.size(); ++d) covered[d].assign(faces_[d].size(), 0);
    for (std::size_t d = 1; d < faces_.size(); ++d) {
        for (const auto& f : faces_[d]) {
            for (std::size_t drop = 0; drop < f.size(); ++drop) {
                Face sub;
                sub.reserve(f.size() - 1);
                for (std::size_t i = 0; i < f.size(); ++i)
                    if (i != drop) sub.push_back(f[i]);
                auto it = std::lower_bound(faces_[d - 1].begin(), faces_[d - 1].end(), sub);
                covered[d - 1][static_cast<std::size_t>(it - faces_[d - 1].begin())] = 1;
            }
        }
    }
    pure_ = true;
    for (std::size_t d = 0; d < faces_.size(); ++d)
        for (std::size_t i = 0; i < faces_[d].size(); ++i)
            if (!covered[d][i]) {
                maximal_.push_back(faces_[d][i]);
                if (static_cast<int>(d) - 1 != n) pure_ = false;
            }
    maximal_of_vertex_.assign(labels_.size(), {});
    for (std::size_t i = 0; i < maximal_.size(); ++i)
        for (Vertex v : maximal_[i]) maximal_of_vertex_[static_cast<std::size_t>(v)].push_back(i);

    top_count_.assign(faces_.size(), {});
    for (std::size_t d = 0; d < faces_.size(); ++d) top_count_[d].assign(faces_[d].size(), 0);
    for (const auto& f : faces_.back()) {
        const std::size_t m = f.size();
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            Face sub;
            for (std::size_t i = 0; i < m; ++i)
                if (mask & (1u << i)) sub.push_back(f[i]);
            auto& level = faces_[sub.size()];
            auto it = std::lower_bound(level.begin(), level.end(), sub);
            ++top_count_[sub.size()][static_cast<std::size_t>(it - level.begin())];
        }
    }
    adjacency_.assign(labels_.size(), {});
    if (faces_.size() > 2)
        for (const auto& e : faces_[2]) {
            adjacency_[static_cast<std::size_t>(e[0])].push_back(e[1]);
            adjacency_[static_cast<std::size_t>(e[1])].push_back(e[0]);
        }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

std::size_t Complex::count(int k) const { return faces(k).size(); }

std::size_t Complex::total_faces() const {
    std::size_t t = 0;
    for (const auto& level : faces_) t += level.size();
    return t;
}

std::optional<Vertex> Complex::find_vertex(std::string_view label) const {
    auto it = label_index_.find(std::string(label));
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
}

Vertex Complex::vertex(std::string_view label) const {
    auto v = find_vertex(label);
    if (!v) throw DomainError("unknown vertex label " + std::string(label));
    return *v;
}

const std::vector<Face>& Complex::faces(int k) const {
    static const std::vector<Face> none;
    if (k < -1 || k > dimension()) return none;
    return faces_[static_cast<std::size_t>(k + 1)];
}

std::optional<std::size_t> Complex::index_of(const Face& face) const {
    const auto& level = faces(static_cast<int>(face.size()) - 1);
    auto it = std::lower_bound(level.begin(), level.end(), face);
    if (it == level.end() || *it != face) return std::nullopt;
    return static_cast<std::size_t>(it - level.begin());
}

std::int64_t Complex::top_coface_count(const Face& face) const {
    auto i = index_of(face);
    if (!i) throw DomainError("face not in complex");
    return top_count_[face.size()][*i];
}

bool Complex::adjacent(Vertex a, Vertex b) const {
    const auto& nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

namespace {

// Builds the complex spanned by `faces` (parent indices) on the given parent vertices,
// renumbering monotonically.
Complex restrict_to(const Complex& X, const std::vector<Vertex>& keep, const std::vector<Face>& faces) {
    std::vector<Vertex> fresh(X.num_vertices(), -1);
    std::vector<std::string> labels;
    for (Vertex v : keep) {
        fresh[static_cast<std::size_t>(v)] = static_cast<Vertex>(labels.size());
        labels.push_back(X.label(v));
    }
    std::vector<Face> mapped;
    mapped.reserve(faces.size());
    for (const auto& f : faces) {
        Face g;
        g.reserve(f.size());
        for (Vertex v : f) g.push_back(fresh[static_cast<std::size_t>(v)]);
        mapped.push_back(std::move(g));
    }
    return Complex::from_index_faces(std::move(labels), mapped);
}

}  // namespace

Complex link(const Complex& X, const Face& tau) {
    if (!X.contains(tau)) throw DomainError("link of a face not in the complex");
    if (tau.empty()) return X;
    std::vector<Face> tops;
    std::set<Vertex> verts;
    for (std::size_t mi : X.maximal_faces_of(tau[0])) {
        const Face& m = X.maximal_faces()[mi];
        if (!is_subface(tau, m)) continue;
        Face rest;
        std::set_difference(m.begin(), m.end(), tau.begin(), tau.end(), std::back_inserter(rest));
        verts.insert(rest.begin(), rest.end());
        tops.push_back(std::move(rest));
    }
    return restrict_to(X, std::vector<Vertex>(verts.begin(), verts.end()), tops);
}

Complex skeleton(const Complex& X, int k) {
    if (k < -1 || k > X.dimension()) throw DomainError("skeleton degree out of range");
    std::vector<Face> faces;
    for (int d = 0; d <= k; ++d)
        for (const auto& f : X.faces(d)) faces.push_back(f);
    return Complex::from_index_faces(X.labels(), faces);
}

namespace {

Complex join_impl(const Complex& X, const Complex& Y, bool tag) {
    std::vector<std::string> labels;
    for (const auto& l : X.labels()) labels.push_back(tag ? "0:" + l : l);
    for (const auto& l : Y.labels()) labels.push_back(tag ? "1:" + l : l);
    const auto shift = static_cast<Vertex>(X.num_vertices());
    std::vector<Face> faces;
    for (const auto& a : X.maximal_faces())
        for (const auto& b : Y.maximal_faces()) {
            Face f = a;
            for (Vertex v : b) f.push_back(v + shift);
            faces.push_back(std::move(f));
        }
    return Complex::from_index_faces(std::move(labels), faces);
}

}  // namespace

Complex join(const Complex& X, const Complex& Y) { return join_impl(X, Y, true); }
Complex join_untagged(const Complex& X, const Complex& Y) { return join_impl(X, Y, false); }

Complex full_subcomplex(const Complex& X, std::span<const Vertex> vertices) {
    std::vector<char> in(X.num_vertices(), 0);
    for (Vertex v : vertices) {
        if (v < 0 || static_cast<std::size_t>(v) >= X.num_vertices()) throw DomainError("unknown vertex in full_subcomplex");
        in[static_cast<std::size_t>(v)] = 1;
    }
    std::vector<Vertex> keep;
    for (std::size_t v = 0; v < in.size(); ++v)
        if (in[v]) keep.push_back(static_cast<Vertex>(v));
    std::set<Face> tops;
    for (const auto& m : X.maximal_faces()) {
        Face f;
        for (Vertex v : m)
            if (in[static_cast<std::size_t>(v)]) f.push_back(v);
        if (!f.empty()) tops.insert(std::move(f));
    }
    return restrict_to(X, keep, std::vector<Face>(tops.begin(), tops.end()));
}

Complex full_subcomplex(const Complex& X, const std::vector<std::string>& labels) {
    std::vector<Vertex> vs;
    for (const auto& l : labels) vs.push_back(X.vertex(l));
    return full_subcomplex(X, vs);
}

Complex relative_link(const Complex& X, Vertex w, const std::vector<bool>& allowed) {
    std::set<Face> tops;
    std::set<Vertex> verts;
    for (std::size_t mi : X.maximal_faces_of(w)) {
        Face f;
        for (Vertex v : X.maximal_faces()[mi])
            if (v != w && allowed[static_cast<std::size_t>(v)]) f.push_back(v);
        verts.insert(f.begin(), f.end());
        if (!f.empty()) tops.insert(std::move(f));
    }
    return restrict_to(X, std::vector<Vertex>(verts.begin(), verts.end()), std::vector<Face>(tops.begin(), tops.end()));
}

Rational weight(const Complex& X, const Face& tau) {
    if (!X.is_pure()) throw UnsupportedError("weights need a pure complex");
    const int n = X.dimension();
    const auto k = static_cast<int>(tau.size()) - 1;
    const std::int64_t count = X.top_coface_count(tau);
    const std::int64_t denom = binomial(n + 1, k + 1) * static_cast<std::int64_t>(X.count(n));
    return Rational(count, denom);
}

bool is_connected(const Complex& X) {
    if (X.num_vertices() == 0) throw DomainError("connectivity of the empty complex");
    std::vector<char> seen(X.num_vertices(), 0);
    std::deque<Vertex> queue{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        for (Vertex u : X.neighbors(v))
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                ++reached;
                queue.push_back(u);
            }
    }
    return reached == X.num_vertices();
}

std::vector<Vertex> embed_by_labels(const Complex& sub, const Complex& parent) {
    std::vector<Vertex> map;
    map.reserve(sub.num_vertices());
    for (const auto& l : sub.labels()) map.push_back(parent.vertex(l));
    return map;
}

}  // namespace hdx
