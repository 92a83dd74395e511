#include "doctest.h"
#include "support.hpp"

#include "hdx/buildings.hpp"
#include "hdx/cosets.hpp"
#include "hdx/errors.hpp"

#include <set>

using namespace hdx;

namespace {

FqMatrix permutation_matrix(std::initializer_list<int> images) {
    const auto n = static_cast<int>(images.size());
    FqMatrix m = FqMatrix::Zero(n, n);
    int row = 0;
    for (int c : images) m(row++, c) = 1;
    return m;
}

struct SymmetricExample {
    std::shared_ptr<const MatrixGroup> group;
    CosetComplex cc;
};

SymmetricExample s3_example() {
    auto F2 = Field::prime(2);
    const FqMatrix t12 = permutation_matrix({1, 0, 2});
    const FqMatrix t23 = permutation_matrix({0, 2, 1});
    auto g = std::make_shared<const MatrixGroup>(MatrixGroup::generate(F2, 3, {t12, t23}));
    auto cc = coset_complex(g, {MatrixGroup::generate(F2, 3, {t12}), MatrixGroup::generate(F2, 3, {t23})});
    return {g, cc};
}

std::size_t brute_sl2_order(int p) {
    std::size_t count = 0;
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b)
            for (int c = 0; c < p; ++c)
                for (int d = 0; d < p; ++d)
                    if (((a * d - b * c) % p + p) % p == 1) ++count;
    return count;
}

bool is_cycle(const Complex& x) {
    for (Vertex v = 0; v < static_cast<Vertex>(x.num_vertices()); ++v)
        if (x.neighbors(v).size() != 2) return false;
    return is_connected(x) && x.dimension() == 1;
}

}  // namespace

TEST_CASE("group enumeration") {
    auto F2 = Field::prime(2);
    auto F3 = Field::prime(3);
    SUBCASE("upper unitriangular over F2") {
        auto g = MatrixGroup::generate(F2, 3, {elementary_matrix(3, 1, 2, 1), elementary_matrix(3, 2, 3, 1)});
        CHECK(g.order() == 8);
        for (const auto& m : g.elements()) {
            CHECK(m(1, 0) == 0);
            CHECK(m(2, 0) == 0);
            CHECK(m(2, 1) == 0);
        }
    }
    SUBCASE("SL2(F3) from elementary generators") {
        auto g = MatrixGroup::generate(F3, 2, {elementary_matrix(2, 1, 2, 1), elementary_matrix(2, 2, 1, 1)});
        CHECK(g.order() == brute_sl2_order(3));
        CHECK(g.order() == 24);
        for (const auto& a : g.elements())
            for (const auto& b : g.elements()) CHECK(g.contains(fq_multiply(*F3, a, b)));
    }
    SUBCASE("SL2(F5)") {
        auto F5 = Field::prime(5);
        auto g = MatrixGroup::generate(F5, 2, {elementary_matrix(2, 1, 2, 1), elementary_matrix(2, 2, 1, 1)});
        CHECK(g.order() == brute_sl2_order(5));
    }
    SUBCASE("empty generator list") {
        auto g = MatrixGroup::generate(F2, 3, {});
        CHECK(g.order() == 1);
        CHECK(g.contains(FqMatrix::Identity(3, 3)));
    }
    SUBCASE("order cap") {
        Caps caps;
        caps.group_order = 10;
        CHECK_THROWS_AS(MatrixGroup::generate(F3, 2, {elementary_matrix(2, 1, 2, 1), elementary_matrix(2, 2, 1, 1)}, caps), ResourceError);
    }
}

TEST_CASE("coset complexes") {
    SUBCASE("S3 with two transpositions is a 6-cycle") {
        auto ex = s3_example();
        CHECK(ex.group->order() == 6);
        CHECK(ex.cc.complex.num_vertices() == 6);
        CHECK(ex.cc.complex.count(1) == 6);
        CHECK(is_cycle(ex.cc.complex));
        CHECK(is_partite(ex.cc));
        for (const auto& h : ex.cc.subgroups) {
            const auto cosets = static_cast<std::size_t>(std::count(ex.cc.types.begin(), ex.cc.types.end(), &h - ex.cc.subgroups.data()));
            CHECK(cosets * h.order() == ex.group->order());
        }
        auto tr = facet_transitivity(ex.cc);
        CHECK(tr.applicable);
        CHECK(tr.holds);
    }
    SUBCASE("the whole group gives a cone point") {
        auto ex = s3_example();
        auto cc = coset_complex(ex.group, {*ex.group, ex.cc.subgroups[1]});
        CHECK(std::count(cc.types.begin(), cc.types.end(), 0) == 1);
        const Vertex apex = cc.coset_vertex[0][0];
        for (const auto& f : cc.complex.maximal_faces()) CHECK(std::binary_search(f.begin(), f.end(), apex));
    }
    SUBCASE("subgroups must lie in the group") {
        auto F2 = Field::prime(2);
        auto g = std::make_shared<const MatrixGroup>(MatrixGroup::generate(F2, 3, {permutation_matrix({1, 0, 2})}));
        CHECK_THROWS_AS(coset_complex(g, {MatrixGroup::generate(F2, 3, {permutation_matrix({0, 2, 1})})}), DomainError);
    }
    SUBCASE("bare complexes have no action") {
        auto tr = facet_transitivity(hdx::testing::octahedron());
        CHECK_FALSE(tr.applicable);
    }
}

TEST_CASE("link identification") {
    auto ex = s3_example();
    for (Vertex v = 0; v < static_cast<Vertex>(ex.cc.complex.num_vertices()); ++v) {
        auto check = link_identification(ex.cc, {v});
        CHECK(check.holds);
        CHECK(check.link_vertices == 2);
    }
    for (const auto& f : ex.cc.complex.maximal_faces()) {
        auto check = link_identification(ex.cc, f);
        CHECK(check.holds);
        CHECK(check.link_vertices == 0);
    }
    CHECK_THROWS_AS(link_identification(ex.cc, {}), DomainError);
}

TEST_CASE("unipotent opposition model") {
    SUBCASE("q = 3") {
        auto cc = unipotent_opposition(Field::prime(3), 2);
        CHECK(cc.group->order() == 27);
        CHECK(cc.complex.num_vertices() == 18);
        CHECK(cc.complex.count(1) == 27);
    }
    SUBCASE("q = 2") {
        auto cc = unipotent_opposition(Field::prime(2), 2);
        CHECK(cc.group->order() == 8);
        CHECK(cc.complex.num_vertices() == 8);
        CHECK(cc.complex.count(1) == 8);
    }
    SUBCASE("isomorphic to the geometric opposition complex") {
        for (auto [p, s] : {std::pair{2, 1}, {3, 1}, {2, 2}}) {
            auto F = Field::galois(p, s);
            auto cc = unipotent_opposition(F, 2);
            auto geo = opposition_an(F, 3, standard_flag(*F, 3));
            CHECK(cc.group->order() == static_cast<std::size_t>(F->size() * F->size() * F->size()));
            CHECK(complexes_isomorphic(cc.complex, geo.complex).has_value());
        }
    }
    SUBCASE("rank 3 over F2 matches the F2^4 full-flag opposition") {
        auto F = Field::prime(2);
        auto cc = unipotent_opposition(F, 3);
        CHECK(cc.group->order() == 64);
        auto geo = opposition_an(F, 4, standard_flag(*F, 4));
        CHECK(complexes_isomorphic(cc.complex, geo.complex).has_value());
    }
}

TEST_CASE("KMS example over F2 with t^2 + t + 1") {
    auto kms = kms_sl_example(2, Field::prime(2), {1, 1, 1});
    const auto& cc = kms.cc;
    CHECK(kms.extension->size() == 4);
    CHECK(cc.group->order() <= 60480);
    CHECK(kms.injective);
    CHECK(kms.intersections_preserved);
    CHECK(cc.complex.is_pure());
    CHECK(cc.complex.dimension() == 2);
    CHECK(is_partite(cc));
    CHECK(is_connected(cc.complex));
    CHECK(cc.subgroups[0].order() == 8);
    for (const auto& h : cc.subgroups) CHECK(h.order() == 8);
    CHECK(facet_transitivity(cc).holds);

    auto F2 = Field::prime(2);
    const Complex opposition = opposition_an(F2, 3, standard_flag(*F2, 3)).complex;
    std::set<std::size_t> link_sizes;
    bool all_links = true;
    bool all_iso = true;
    for (Vertex v = 0; v < static_cast<Vertex>(cc.complex.num_vertices()); ++v) {
        auto check = link_identification(cc, {v});
        all_links = all_links && check.holds;
        link_sizes.insert(check.link_vertices);
        const Complex lk = link(cc.complex, {v});
        all_iso = all_iso && complexes_isomorphic(lk, opposition).has_value();
    }
    CHECK(all_links);
    CHECK(all_iso);
    CHECK(link_sizes.size() == 1);
    CHECK(*link_sizes.begin() == 8);
}

TEST_CASE("KMS input validation") {
    auto F2 = Field::prime(2);
    CHECK_THROWS_AS(kms_sl_example(2, F2, {1, 0, 1}), DomainError);
    CHECK_THROWS_AS(kms_sl_example(2, F2, {1, 1}), DomainError);
    CHECK_THROWS_AS(kms_sl_example(1, F2, {1, 1, 1}), DomainError);
}
