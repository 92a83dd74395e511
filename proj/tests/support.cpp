#include "support.hpp"

#include <algorithm>
#include <random>

namespace hdx::testing {

Complex full_simplex(int vertices) {
    std::vector<std::string> face;
    for (int i = 1; i <= vertices; ++i) face.push_back(std::to_string(i));
    return Complex::from_maximal_faces({face});
}

Complex hollow_triangle() { return Complex::from_maximal_faces({{"1", "2"}, {"2", "3"}, {"1", "3"}}); }

Complex filled_triangle() { return full_simplex(3); }

Complex cycle(int length) {
    std::vector<std::vector<std::string>> edges;
    for (int i = 0; i < length; ++i) edges.push_back({"c" + std::to_string(i), "c" + std::to_string((i + 1) % length)});
    return Complex::from_maximal_faces(edges);
}

Complex path(int length) {
    std::vector<std::vector<std::string>> edges;
    for (int i = 0; i < length; ++i) edges.push_back({"p" + std::to_string(i), "p" + std::to_string(i + 1)});
    return Complex::from_maximal_faces(edges);
}

Complex octahedron() {
    std::vector<std::vector<std::string>> faces;
    const std::vector<std::string> ring{"a", "b", "c", "d"};
    for (const std::string pole : {"n", "s"})
        for (int i = 0; i < 4; ++i) faces.push_back({pole, ring[static_cast<std::size_t>(i)], ring[static_cast<std::size_t>((i + 1) % 4)]});
    return Complex::from_maximal_faces(faces);
}

namespace {

Complex random_with(unsigned seed, int vertices, int faces, int min_size, int max_size) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> size(min_size, max_size);
    std::vector<std::string> labels;
    for (int i = 0; i < vertices; ++i) labels.push_back("v" + std::to_string(i));
    std::vector<std::vector<std::string>> out;
    for (int f = 0; f < faces; ++f) {
        std::vector<std::string> pick = labels;
        std::shuffle(pick.begin(), pick.end(), rng);
        pick.resize(static_cast<std::size_t>(std::min(size(rng), vertices)));
        out.push_back(pick);
    }
    return Complex::from_maximal_faces(out);
}

}  // namespace

Complex random_complex(unsigned seed, int vertices, int faces, int max_size) { return random_with(seed, vertices, faces, 1, max_size); }

Complex random_pure_complex(unsigned seed, int vertices, int faces, int dimension) {
    return random_with(seed, vertices, faces, dimension + 1, dimension + 1);
}

}  // namespace hdx::testing

namespace hdx::testing {

std::vector<int> BruteSpace::decode(int code) const {
    std::vector<int> v(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        v[static_cast<std::size_t>(i)] = code % p;
        code /= p;
    }
    return v;
}

int BruteSpace::encode(const std::vector<int>& v) const {
    int code = 0;
    for (int i = m - 1; i >= 0; --i) code = code * p + ((v[static_cast<std::size_t>(i)] % p) + p) % p;
    return code;
}

int BruteSpace::add(int a, int b) const {
    auto x = decode(a), y = decode(b);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    return encode(x);
}

int BruteSpace::scale(int c, int a) const {
    auto x = decode(a);
    for (auto& e : x) e *= c;
    return encode(x);
}

BruteSpace::Sub BruteSpace::span(const std::vector<int>& generators) const {
    Sub s{0};
    for (int g : generators) {
        Sub next;
        for (int v : s)
            for (int c = 0; c < p; ++c) next.insert(add(v, scale(c, g)));
        s = std::move(next);
    }
    return s;
}

int BruteSpace::dim(const Sub& s) const {
    int d = 0;
    for (std::size_t n = 1; n < s.size(); n *= static_cast<std::size_t>(p)) ++d;
    return d;
}

std::vector<BruteSpace::Sub> BruteSpace::subspaces(int d, const std::function<bool(const Sub&)>& keep) const {
    std::set<Sub> layer{Sub{0}};
    int total = 1;
    for (int i = 0; i < m; ++i) total *= p;
    for (int k = 0; k < d; ++k) {
        std::set<Sub> next;
        for (const auto& s : layer) {
            std::vector<bool> covered(static_cast<std::size_t>(total), false);
            for (int v : s) covered[static_cast<std::size_t>(v)] = true;
            for (int v = 1; v < total; ++v) {
                if (covered[static_cast<std::size_t>(v)]) continue;
                std::vector<int> gens(s.begin(), s.end());
                gens.push_back(v);
                Sub bigger = span(gens);
                for (int x : bigger) covered[static_cast<std::size_t>(x)] = true;
                if (!keep || keep(bigger)) next.insert(std::move(bigger));
            }
        }
        layer = std::move(next);
    }
    return {layer.begin(), layer.end()};
}

BruteSpace::Sub BruteSpace::meet(const Sub& a, const Sub& b) const {
    Sub out;
    for (int v : a)
        if (b.count(v)) out.insert(v);
    return out;
}

bool BruteSpace::transversal(const Sub& a, const Sub& b) const {
    const std::size_t both = meet(a, b).size();
    std::size_t total = 1;
    for (int i = 0; i < m; ++i) total *= static_cast<std::size_t>(p);
    return both == 1 || a.size() * b.size() / both == total;
}

bool BruteSpace::contains(const Sub& big, const Sub& small) const {
    return std::all_of(small.begin(), small.end(), [&](int v) { return big.count(v) > 0; });
}

BruteSpace::Sub BruteSpace::unit_span(std::initializer_list<int> one_based) const {
    std::vector<int> gens;
    for (int i : one_based) {
        std::vector<int> v(static_cast<std::size_t>(m), 0);
        v[static_cast<std::size_t>(i - 1)] = 1;
        gens.push_back(encode(v));
    }
    return span(gens);
}

FlagCounts flag_counts(const BruteSpace& space, const std::vector<BruteSpace::Sub>& family) {
    FlagCounts c;
    for (const auto& s : family) ++c.per_dimension[space.dim(s)];
    for (std::size_t a = 0; a < family.size(); ++a)
        for (std::size_t b = a + 1; b < family.size(); ++b)
            if (family[a].size() != family[b].size() && (space.contains(family[a], family[b]) || space.contains(family[b], family[a]))) ++c.edges;
    return c;
}

}  // namespace hdx::testing
