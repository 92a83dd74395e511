#include "hdx/cosets.hpp"

#include "hdx/buildings.hpp"
#include "hdx/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace hdx {

FqMatrix elementary_matrix(int degree, int row, int col, FieldElement value) {
    if (row < 1 || col < 1 || row > degree || col > degree || row == col) throw DomainError("elementary matrix position out of range");
    FqMatrix m = FqMatrix::Identity(degree, degree);
    m(row - 1, col - 1) = value;
    return m;
}

MatrixGroup MatrixGroup::generate(std::shared_ptr<const Field> field, int degree, std::vector<FqMatrix> generators, const Caps& caps) {
    MatrixGroup g;
    g.field_ = std::move(field);
    g.degree_ = degree;
    const Field& F = *g.field_;
    std::vector<FqMatrix> steps;
    for (const auto& s : generators) {
        if (s.rows() != degree || s.cols() != degree) throw MalformedInput("generator has the wrong size");
        auto inv = fq_inverse(F, s);
        if (!inv) throw DomainError("generator is not invertible");
        steps.push_back(s);
        if (!(*inv == s)) steps.push_back(*inv);
    }
    g.generators_ = std::move(generators);
    const FqMatrix identity = FqMatrix::Identity(degree, degree);
    g.index_.emplace(fq_key(identity), 0);
    g.elements_.push_back(identity);
    for (std::size_t head = 0; head < g.elements_.size(); ++head) {
        for (const auto& s : steps) {
            FqMatrix next = fq_multiply(F, g.elements_[head], s);
            auto [it, inserted] = g.index_.emplace(fq_key(next), g.elements_.size());
            if (!inserted) continue;
            g.elements_.push_back(std::move(next));
            if (g.elements_.size() > caps.group_order)
                throw ResourceError("group enumeration exceeded the order cap of " + std::to_string(caps.group_order) + " (" +
                                    std::to_string(g.elements_.size()) + " elements found so far)");
        }
    }
    return g;
}

MatrixGroup MatrixGroup::from_elements(std::shared_ptr<const Field> field, int degree, std::vector<FqMatrix> elements) {
    MatrixGroup g;
    g.field_ = std::move(field);
    g.degree_ = degree;
    const FqMatrix identity = FqMatrix::Identity(degree, degree);
    g.elements_.push_back(identity);
    g.index_.emplace(fq_key(identity), 0);
    for (auto& e : elements)
        if (g.index_.emplace(fq_key(e), g.elements_.size()).second) g.elements_.push_back(std::move(e));
    return g;
}

std::optional<std::size_t> MatrixGroup::index_of(const FqMatrix& m) const {
    auto it = index_.find(fq_key(m));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool MatrixGroup::is_subgroup_of(const MatrixGroup& g) const {
    return std::all_of(elements_.begin(), elements_.end(), [&](const FqMatrix& m) { return g.contains(m); });
}

MatrixGroup MatrixGroup::intersection(const MatrixGroup& other) const {
    std::vector<FqMatrix> common;
    for (const auto& m : elements_)
        if (other.contains(m)) common.push_back(m);
    return from_elements(field_, degree_, std::move(common));
}

CosetComplex coset_complex(std::shared_ptr<const MatrixGroup> group, std::vector<MatrixGroup> subgroups, const Caps& caps) {
    if (subgroups.empty()) throw DomainError("coset complex needs at least one subgroup");
    const MatrixGroup& G = *group;
    const Field& F = G.field();
    for (std::size_t i = 0; i < subgroups.size(); ++i)
        if (!subgroups[i].is_subgroup_of(G)) throw DomainError("subgroup " + std::to_string(i) + " is not contained in the group");
    const std::size_t order = G.order();
    if (order * subgroups.size() > caps.group_order * 8) throw ResourceError("coset complex exceeds the group cap");

    CosetComplex cc;
    cc.group = group;
    std::vector<std::string> labels;
    cc.coset_vertex.assign(subgroups.size(), std::vector<Vertex>(order, -1));
    for (std::size_t t = 0; t < subgroups.size(); ++t) {
        std::size_t cosets = 0;
        for (std::size_t g = 0; g < order; ++g) {
            if (cc.coset_vertex[t][g] >= 0) continue;
            const auto v = static_cast<Vertex>(labels.size());
            labels.push_back(std::to_string(t) + ":" + std::to_string(cosets++));
            cc.types.push_back(static_cast<int>(t));
            cc.representative.push_back(g);
            for (const auto& h : subgroups[t].elements()) {
                const auto gh = G.index_of(fq_multiply(F, G.elements()[g], h));
                cc.coset_vertex[t][*gh] = v;
            }
        }
        if (cosets * subgroups[t].order() != order) throw DomainError("coset sizes do not partition the group");
    }
    std::vector<Face> facets;
    facets.reserve(order);
    for (std::size_t g = 0; g < order; ++g) {
        Face f;
        for (std::size_t t = 0; t < subgroups.size(); ++t) f.push_back(cc.coset_vertex[t][g]);
        std::sort(f.begin(), f.end());
        facets.push_back(std::move(f));
    }
    std::sort(facets.begin(), facets.end());
    facets.erase(std::unique(facets.begin(), facets.end()), facets.end());
    cc.complex = Complex::from_index_faces(std::move(labels), facets);
    cc.subgroups = std::move(subgroups);
    return cc;
}

bool is_partite(const CosetComplex& cc) {
    for (const auto& f : cc.complex.maximal_faces()) {
        std::set<int> seen;
        for (Vertex v : f)
            if (!seen.insert(cc.types[static_cast<std::size_t>(v)]).second) return false;
    }
    return true;
}

LinkCheck link_identification(const CosetComplex& cc, const Face& face, const Caps& caps) {
    LinkCheck out;
    if (face.empty()) throw DomainError("link identification needs a nonempty face");
    if (!cc.complex.contains(face)) throw DomainError("face is not in the coset complex");
    std::vector<bool> in_face(cc.subgroups.size(), false);
    for (Vertex v : face) {
        const int t = cc.types[static_cast<std::size_t>(v)];
        if (in_face[static_cast<std::size_t>(t)]) throw DomainError("face meets a type twice");
        in_face[static_cast<std::size_t>(t)] = true;
        out.face_types.push_back(t);
    }
    MatrixGroup stabiliser = cc.subgroups[static_cast<std::size_t>(out.face_types[0])];
    for (std::size_t i = 1; i < out.face_types.size(); ++i) stabiliser = stabiliser.intersection(cc.subgroups[static_cast<std::size_t>(out.face_types[i])]);

    const Complex lk = link(cc.complex, face);
    out.link_vertices = lk.num_vertices();
    std::vector<MatrixGroup> smaller;
    std::vector<int> remaining;
    for (std::size_t t = 0; t < cc.subgroups.size(); ++t)
        if (!in_face[t]) {
            smaller.push_back(stabiliser.intersection(cc.subgroups[t]));
            remaining.push_back(static_cast<int>(t));
        }
    if (smaller.empty()) {
        out.holds = lk.num_vertices() == 0 && lk.dimension() == -1;
        out.detail = out.holds ? "link of a facet is {empty}" : "facet has a nonempty link";
        return out;
    }
    auto local = coset_complex(std::make_shared<const MatrixGroup>(stabiliser), std::move(smaller), caps);
    std::vector<int> lk_types, local_types;
    for (const auto& l : lk.labels()) lk_types.push_back(cc.types[static_cast<std::size_t>(cc.complex.vertex(l))]);
    for (int t : local.types) local_types.push_back(remaining[static_cast<std::size_t>(t)]);
    auto map = complexes_isomorphic(lk, local.complex, &lk_types, &local_types, caps);
    out.holds = map.has_value();
    out.detail = std::to_string(lk.num_vertices()) + "-vertex link " + (out.holds ? "matches" : "does not match") + " the coset complex of the stabiliser (order " +
                 std::to_string(stabiliser.order()) + ")";
    return out;
}

TransitivityCheck facet_transitivity(const CosetComplex& cc) {
    TransitivityCheck out;
    const MatrixGroup& G = *cc.group;
    const Field& F = G.field();
    const auto& facets = cc.complex.maximal_faces();
    out.facets = facets.size();
    std::map<Face, std::size_t> facet_index;
    for (std::size_t i = 0; i < facets.size(); ++i) facet_index.emplace(facets[i], i);
    std::vector<FqMatrix> movers = G.generators();
    if (movers.empty()) movers = G.elements();
    std::vector<std::vector<Vertex>> action;
    for (const auto& s : movers) {
        std::vector<Vertex> image(cc.complex.num_vertices());
        for (std::size_t v = 0; v < image.size(); ++v) {
            const auto moved = G.index_of(fq_multiply(F, s, G.elements()[cc.representative[v]]));
            image[v] = cc.coset_vertex[static_cast<std::size_t>(cc.types[v])][*moved];
        }
        action.push_back(std::move(image));
    }
    std::vector<std::vector<std::size_t>> facet_action(action.size(), std::vector<std::size_t>(facets.size()));
    for (std::size_t a = 0; a < action.size(); ++a)
        for (std::size_t i = 0; i < facets.size(); ++i) {
            Face f;
            for (Vertex v : facets[i]) f.push_back(action[a][static_cast<std::size_t>(v)]);
            std::sort(f.begin(), f.end());
            auto it = facet_index.find(f);
            if (it == facet_index.end()) {
                out.detail = "left translation does not map facets to facets";
                return out;
            }
            facet_action[a][i] = it->second;
        }
    std::vector<bool> seen(facets.size(), false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
        const std::size_t f = queue.front();
        queue.pop_front();
        ++out.orbit;
        for (const auto& act : facet_action)
            if (!seen[act[f]]) {
                seen[act[f]] = true;
                queue.push_back(act[f]);
            }
    }
    out.holds = out.orbit == out.facets;
    out.detail = "orbit of one facet has " + std::to_string(out.orbit) + " of " + std::to_string(out.facets) + " facets";
    return out;
}

TransitivityCheck facet_transitivity(const Complex& x) {
    TransitivityCheck out;
    out.applicable = false;
    out.facets = x.maximal_faces().size();
    out.detail = "not a coset complex: no group action to test";
    return out;
}

namespace {

std::vector<FqMatrix> root_group_generators(const Field& F, int degree, int row, int col) {
    std::vector<FqMatrix> out;
    for (FieldElement a : F.prime_basis()) out.push_back(elementary_matrix(degree, row, col, a));
    return out;
}

// Square matrices over F_q[t] for the local groups before reduction.
struct PolyMatrix {
    int degree = 0;
    std::vector<Polynomial> entries;

    static PolyMatrix identity(int d) {
        PolyMatrix m;
        m.degree = d;
        m.entries.assign(static_cast<std::size_t>(d * d), {});
        for (int i = 0; i < d; ++i) m.at(i, i) = {1};
        return m;
    }
    Polynomial& at(int r, int c) { return entries[static_cast<std::size_t>(r * degree + c)]; }
    const Polynomial& at(int r, int c) const { return entries[static_cast<std::size_t>(r * degree + c)]; }

    PolyMatrix times(const Field& F, const PolyMatrix& o) const {
        PolyMatrix out;
        out.degree = degree;
        out.entries.assign(entries.size(), {});
        for (int r = 0; r < degree; ++r)
            for (int c = 0; c < degree; ++c) {
                Polynomial acc;
                for (int k = 0; k < degree; ++k)
                    if (!at(r, k).empty() && !o.at(k, c).empty()) acc = poly_add(F, acc, poly_mul(F, at(r, k), o.at(k, c)));
                out.at(r, c) = std::move(acc);
            }
        return out;
    }

    std::string key() const {
        std::string k;
        for (const auto& p : entries) {
            k.push_back(static_cast<char>(p.size()));
            for (auto c : p) k.push_back(static_cast<char>(c));
        }
        return k;
    }
};

struct PolyGenerator {
    PolyMatrix forward;
    PolyMatrix backward;
};

PolyGenerator poly_elementary(const Field& F, int degree, int row, int col, const Polynomial& value) {
    PolyGenerator g{PolyMatrix::identity(degree), PolyMatrix::identity(degree)};
    g.forward.at(row - 1, col - 1) = value;
    Polynomial neg = value;
    for (auto& c : neg) c = F.neg(c);
    g.backward.at(row - 1, col - 1) = neg;
    return g;
}

std::vector<PolyMatrix> enumerate_poly_group(const Field& F, int degree, const std::vector<PolyGenerator>& gens, const Caps& caps) {
    std::vector<PolyMatrix> elements{PolyMatrix::identity(degree)};
    std::unordered_map<std::string, std::size_t> seen{{elements[0].key(), 0}};
    for (std::size_t head = 0; head < elements.size(); ++head)
        for (const auto& g : gens)
            for (const PolyMatrix* step : {&g.forward, &g.backward}) {
                PolyMatrix next = elements[head].times(F, *step);
                if (!seen.emplace(next.key(), elements.size()).second) continue;
                elements.push_back(std::move(next));
                if (elements.size() > caps.group_order) throw ResourceError("local group over F_q[t] exceeds the order cap");
            }
    return elements;
}

}  // namespace

CosetComplex unipotent_opposition(std::shared_ptr<const Field> field, int rank, const Caps& caps) {
    if (rank < 1) throw DomainError("rank must be at least 1");
    const int d = rank + 1;
    std::vector<std::vector<FqMatrix>> roots;
    for (int j = 1; j <= rank; ++j) roots.push_back(root_group_generators(*field, d, j, j + 1));
    std::vector<FqMatrix> all;
    for (const auto& r : roots) all.insert(all.end(), r.begin(), r.end());
    auto group = std::make_shared<const MatrixGroup>(MatrixGroup::generate(field, d, all, caps));
    std::vector<MatrixGroup> subgroups;
    for (int omit = 0; omit < rank; ++omit) {
        std::vector<FqMatrix> gens;
        for (int j = 0; j < rank; ++j)
            if (j != omit) gens.insert(gens.end(), roots[static_cast<std::size_t>(j)].begin(), roots[static_cast<std::size_t>(j)].end());
        subgroups.push_back(MatrixGroup::generate(field, d, gens, caps));
    }
    return coset_complex(group, std::move(subgroups), caps);
}

KmsExample kms_sl_example(int n, std::shared_ptr<const Field> base, const Polynomial& f_in, const Caps& caps) {
    if (n < 2) throw DomainError("the KMS example needs n >= 2");
    const Field& K = *base;
    Polynomial f = f_in;
    trim(f);
    for (auto c : f)
        if (c >= K.size()) throw MalformedInput("polynomial coefficient outside the base field");
    if (f.size() < 3) throw DomainError("the KMS example needs an irreducible polynomial of degree at least 2");
    const FieldElement lead_inv = K.inv(f.back());
    for (auto& c : f) c = K.mul(c, lead_inv);
    if (!is_irreducible(K, f)) throw DomainError("polynomial is reducible");

    KmsExample out;
    out.extension = Field::extension(base, f);
    const Field& L = *out.extension;
    const int d = n + 1;

    // Root 0 is the affine root e_{n+1,1}(t); root i in 1..n is e_{i,i+1}.
    std::vector<std::vector<PolyGenerator>> source(static_cast<std::size_t>(n + 1));
    for (FieldElement a : K.prime_basis()) {
        source[0].push_back(poly_elementary(K, d, d, 1, Polynomial{0, a}));
        for (int i = 1; i <= n; ++i) source[static_cast<std::size_t>(i)].push_back(poly_elementary(K, d, i, i + 1, Polynomial{a}));
    }
    auto reduce = [&](const PolyMatrix& m) {
        FqMatrix r(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                Polynomial p = poly_mod(K, m.at(i, j), f);
                int code = 0;
                for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) code = code * K.size() + p[static_cast<std::size_t>(k)];
                r(i, j) = static_cast<FieldElement>(code);
            }
        return r;
    };
    auto image_generators = [&](unsigned mask) {
        std::vector<FqMatrix> gens;
        for (int r = 0; r <= n; ++r)
            if (mask & (1u << r))
                for (const auto& g : source[static_cast<std::size_t>(r)]) gens.push_back(reduce(g.forward));
        return gens;
    };

    const unsigned full = (1u << (n + 1)) - 1;
    std::map<unsigned, std::vector<PolyMatrix>> local_source;
    std::map<unsigned, MatrixGroup> local_image;
    out.injective = true;
    for (unsigned mask = 1; mask < full; ++mask) {
        std::vector<PolyGenerator> gens;
        std::string name = "U{";
        for (int r = 0; r <= n; ++r)
            if (mask & (1u << r)) {
                gens.insert(gens.end(), source[static_cast<std::size_t>(r)].begin(), source[static_cast<std::size_t>(r)].end());
                name += (name.size() > 2 ? "," : "") + std::to_string(r);
            }
        name += "}";
        auto elems = enumerate_poly_group(K, d, gens, caps);
        auto img = MatrixGroup::generate(out.extension, d, image_generators(mask), caps);
        std::set<std::string> reduced;
        for (const auto& e : elems) reduced.insert(fq_key(reduce(e)));
        const bool injective_here = reduced.size() == elems.size() && img.order() == elems.size();
        out.injective = out.injective && injective_here;
        out.local_sets.push_back(name);
        out.source_orders.push_back(elems.size());
        out.image_orders.push_back(img.order());
        local_source.emplace(mask, std::move(elems));
        local_image.emplace(mask, std::move(img));
    }
    out.intersections_preserved = true;
    for (auto a = local_source.begin(); a != local_source.end(); ++a)
        for (auto b = std::next(a); b != local_source.end(); ++b) {
            std::set<std::string> keys_b;
            for (const auto& e : b->second) keys_b.insert(e.key());
            std::set<std::string> image_of_meet;
            for (const auto& e : a->second)
                if (keys_b.count(e.key())) image_of_meet.insert(fq_key(reduce(e)));
            const MatrixGroup meet = local_image.at(a->first).intersection(local_image.at(b->first));
            std::set<std::string> meet_keys;
            for (const auto& e : meet.elements()) meet_keys.insert(fq_key(e));
            if (meet_keys != image_of_meet) {
                out.intersections_preserved = false;
                out.notes.push_back("intersection not preserved for masks " + std::to_string(a->first) + " and " + std::to_string(b->first));
            }
        }

    auto group = std::make_shared<const MatrixGroup>(MatrixGroup::generate(out.extension, d, image_generators(full), caps));
    std::vector<MatrixGroup> subgroups;
    for (int i = 0; i <= n; ++i) subgroups.push_back(local_image.at(full & ~(1u << i)));
    out.cc = coset_complex(group, std::move(subgroups), caps);
    out.notes.push_back("G_f has order " + std::to_string(group->order()) + " inside SL_" + std::to_string(d) + "(" + L.describe() + ")");
    return out;
}

}  // namespace hdx
