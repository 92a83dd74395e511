#include "doctest.h"
#include "support.hpp"

#include "hdx/buildings.hpp"
#include "hdx/chains.hpp"
#include "hdx/cones.hpp"
#include "hdx/cosets.hpp"
#include "hdx/errors.hpp"
#include "hdx/expansion.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace hdx;
using hdx::testing::cycle;
using hdx::testing::filled_triangle;
using hdx::testing::full_simplex;
using hdx::testing::hollow_triangle;
using hdx::testing::octahedron;
using hdx::testing::path;

namespace {

Complex real_projective_plane() {
    return Complex::from_maximal_faces({{"1", "2", "3"}, {"1", "3", "4"}, {"1", "4", "5"}, {"1", "5", "6"}, {"1", "2", "6"},
                                        {"2", "3", "5"}, {"2", "4", "5"}, {"2", "4", "6"}, {"3", "4", "6"}, {"3", "5", "6"}});
}

Complex torus() {
    std::vector<std::vector<std::string>> faces;
    for (int i = 0; i < 7; ++i) {
        auto v = [](int x) { return std::to_string(((x % 7) + 7) % 7); };
        faces.push_back({v(i), v(i + 1), v(i + 3)});
        faces.push_back({v(i), v(i + 2), v(i + 3)});
    }
    return Complex::from_maximal_faces(faces);
}

Complex two_triangles() { return Complex::from_maximal_faces({{"a", "b", "c"}, {"x", "y", "z"}}); }

Complex bowtie() { return Complex::from_maximal_faces({{"o", "a", "b"}, {"o", "c", "d"}}); }

// Straightforward definition-level evaluation built only on chains::coboundary and chains::norm.
struct OracleValues {
    std::optional<Rational> cb, cs, systole;
};

OracleValues oracle(const Complex& X, int k, std::int64_t m) {
    const auto& level = X.faces(k);
    std::vector<Cochain> all;
    std::size_t total = 1;
    for (std::size_t i = 0; i < level.size(); ++i) total *= static_cast<std::size_t>(m);
    for (std::size_t code = 0; code < total; ++code) {
        Cochain phi(k, m);
        std::size_t c = code;
        for (const auto& f : level) {
            phi.add(f, static_cast<std::int64_t>(c % static_cast<std::size_t>(m)));
            c /= static_cast<std::size_t>(m);
        }
        all.push_back(std::move(phi));
    }
    std::vector<Cochain> boundaries;
    if (k == 0) {
        for (std::int64_t a = 0; a < m; ++a) {
            Cochain c(0, m);
            for (const auto& f : level) c.add(f, a);
            boundaries.push_back(c);
        }
    } else {
        const auto& down = X.faces(k - 1);
        std::size_t count = 1;
        for (std::size_t i = 0; i < down.size(); ++i) count *= static_cast<std::size_t>(m);
        std::set<std::vector<std::pair<Face, std::int64_t>>> seen;
        for (std::size_t code = 0; code < count; ++code) {
            Cochain psi(k - 1, m);
            std::size_t c = code;
            for (const auto& f : down) {
                psi.add(f, static_cast<std::int64_t>(c % static_cast<std::size_t>(m)));
                c /= static_cast<std::size_t>(m);
            }
            const Cochain d = coboundary(psi, X);
            std::vector<std::pair<Face, std::int64_t>> key(d.terms().begin(), d.terms().end());
            if (seen.insert(key).second) boundaries.push_back(d);
        }
    }
    const bool top = k == X.dimension();
    auto d_of = [&](const Cochain& phi) { return top ? Cochain(k + 1, m) : coboundary(phi, X); };
    std::vector<Cochain> cocycles;
    for (const auto& phi : all)
        if (d_of(phi).empty()) cocycles.push_back(phi);

    auto in = [](const std::vector<Cochain>& s, const Cochain& phi) {
        return std::any_of(s.begin(), s.end(), [&](const Cochain& x) { return x == phi; });
    };
    auto distance = [&](const Cochain& phi, const std::vector<Cochain>& s) {
        Rational best(1000000);
        for (const auto& x : s) best = std::min(best, norm(phi - x, X));
        return best;
    };
    OracleValues out;
    for (const auto& phi : all) {
        const Rational d = top ? Rational(0) : norm(d_of(phi), X);
        if (!in(boundaries, phi)) {
            const Rational r = d / distance(phi, boundaries);
            if (!out.cb || r < *out.cb) out.cb = r;
        }
        if (!in(cocycles, phi)) {
            const Rational r = d / distance(phi, cocycles);
            if (!out.cs || r < *out.cs) out.cs = r;
        }
        if (in(cocycles, phi) && !in(boundaries, phi)) {
            const Rational n = norm(phi, X);
            if (!out.systole || n < *out.systole) out.systole = n;
        }
    }
    return out;
}

double cos_2pi_over(int n) { return std::cos(2 * std::numbers::pi / n); }

}  // namespace

TEST_CASE("walk matrix rows are stochastic in exact arithmetic") {
    for (const Complex& X : {octahedron(), filled_triangle(), bowtie(), real_projective_plane(), cycle(5)}) {
        const auto M = walk_matrix(X);
        for (const auto& row : M) CHECK(std::accumulate(row.begin(), row.end(), Rational(0)) == Rational(1));
    }
    const auto M = walk_matrix(octahedron());
    const Complex X = octahedron();
    CHECK(M[static_cast<std::size_t>(X.vertex("n"))][static_cast<std::size_t>(X.vertex("a"))] == Rational(1, 4));
    CHECK(M[static_cast<std::size_t>(X.vertex("n"))][static_cast<std::size_t>(X.vertex("s"))] == Rational(0));

    // In the bowtie the hub spreads evenly over four neighbours; a leaf goes to the hub or its partner.
    const Complex B = bowtie();
    const auto W = walk_matrix(B);
    CHECK(W[static_cast<std::size_t>(B.vertex("o"))][static_cast<std::size_t>(B.vertex("a"))] == Rational(1, 4));
    CHECK(W[static_cast<std::size_t>(B.vertex("a"))][static_cast<std::size_t>(B.vertex("o"))] == Rational(1, 2));

    CHECK_THROWS_AS(walk_matrix(Complex::from_maximal_faces({{"a"}, {"b"}})), DomainError);
    CHECK_THROWS_AS(walk_matrix(Complex::from_maximal_faces({{"a", "b", "c"}, {"c", "d"}})), UnsupportedError);
}

TEST_CASE("Jacobi agrees with a reference symmetric eigensolver") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int size : {1, 2, 3, 5, 8, 13, 21}) {
        Eigen::MatrixXd a(size, size);
        for (int i = 0; i < size; ++i)
            for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(rng);
        const auto mine = jacobi_eigenvalues(a);
        CHECK(mine.converged);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
        Eigen::VectorXd expected = ref.eigenvalues().reverse();
        for (int i = 0; i < size; ++i) CHECK(mine.eigenvalues(i) == doctest::Approx(expected(i)).epsilon(1e-9));
    }
    for (const Complex& X : {octahedron(), real_projective_plane(), torus(), cycle(7)}) {
        const Eigen::MatrixXd s = symmetrized_walk(X);
        const auto mine = jacobi_eigenvalues(s);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(s);
        Eigen::VectorXd expected = ref.eigenvalues().reverse();
        for (Eigen::Index i = 0; i < s.rows(); ++i) CHECK(mine.eigenvalues(i) == doctest::Approx(expected(i)).epsilon(1e-9));
        CHECK(mine.eigenvalues(0) == doctest::Approx(1.0));
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
            CHECK(mine.eigenvalues(i) >= -1 - 1e-9);
            CHECK(mine.eigenvalues(i) <= 1 + 1e-9);
        }
    }
    const auto ld = symmetrized_walk<long double>(octahedron());
    CHECK(static_cast<double>(ld(0, 1) + ld(1, 0)) == doctest::Approx(2 * symmetrized_walk(octahedron())(0, 1)));
}

TEST_CASE("second eigenvalue on graphs with known spectra") {
    for (int m : {3, 4, 5, 6}) {
        const auto r = second_eigenvalue(skeleton(full_simplex(m), 1));
        CHECK(r.connected);
        CHECK(r.value == doctest::Approx(-1.0 / (m - 1)).epsilon(1e-9));
    }
    CHECK(second_eigenvalue(filled_triangle()).value == doctest::Approx(-0.5));
    CHECK(std::abs(second_eigenvalue(cycle(4)).value) < 1e-9);
    for (int n : {5, 6, 9}) CHECK(second_eigenvalue(cycle(n)).value == doctest::Approx(cos_2pi_over(n)).epsilon(1e-9));
    // Adjacency of K_{2,2,2} has spectrum 4, 0^3, -2^2.
    CHECK(std::abs(second_eigenvalue(octahedron()).value) < 1e-9);

    const auto split = second_eigenvalue(two_triangles());
    CHECK_FALSE(split.connected);
    CHECK(split.value == 1.0);
}

TEST_CASE("iterative path matches the dense solver") {
    Caps dense;
    Caps sparse;
    sparse.jacobi_size = 0;
    for (const Complex& X : {cycle(9), octahedron(), real_projective_plane(), torus(), skeleton(full_simplex(6), 1)}) {
        const auto a = second_eigenvalue(X, dense);
        const auto b = second_eigenvalue(X, sparse);
        CHECK(a.method == "jacobi");
        CHECK(b.method == "shifted power iteration");
        CHECK(b.value == doctest::Approx(a.value).epsilon(1e-7));
    }
}

TEST_CASE("local spectral profiles") {
    const auto simplex = local_spectral_profile(full_simplex(4));
    CHECK(simplex.links.size() == 1 + 4 + 6);
    CHECK(simplex.all_connected);
    CHECK(simplex.lambda == doctest::Approx(-1.0 / 3));
    CHECK(simplex.links.front().face.empty());
    for (const auto& l : simplex.links) {
        CAPTURE(l.vertices);
        CHECK(l.spectrum.value == doctest::Approx(-1.0 / (static_cast<double>(l.vertices) - 1)));
    }

    const auto octa = local_spectral_profile(octahedron());
    CHECK(octa.links.size() == 7);
    for (std::size_t i = 1; i < octa.links.size(); ++i) {
        CHECK(octa.links[i].vertices == 4);
        CHECK(std::abs(octa.links[i].spectrum.value) < 1e-9);
    }
    CHECK(std::abs(octa.lambda) < 1e-9);

    const auto threaded = local_spectral_profile(torus(), {}, 3);
    const auto serial = local_spectral_profile(torus(), {}, 1);
    REQUIRE(threaded.links.size() == serial.links.size());
    for (std::size_t i = 0; i < serial.links.size(); ++i) {
        CHECK(threaded.links[i].face == serial.links[i].face);
        CHECK(threaded.links[i].spectrum.value == serial.links[i].spectrum.value);
    }
    // Vertex links of the 7-vertex torus are hexagons.
    CHECK(serial.lambda == doctest::Approx(std::max(0.5, second_eigenvalue(torus()).value)));

    const auto bow = local_spectral_profile(bowtie());
    CHECK_FALSE(bow.all_connected);
    CHECK(bow.lambda == 1.0);
}

TEST_CASE("coboundary constants on small complexes") {
    const auto f0 = brute_force_expansion(filled_triangle(), 0, 2);
    REQUIRE(f0.coboundary.value);
    CHECK(*f0.coboundary.value == Rational(2));
    CHECK(f0.configurations == 8);
    CHECK(f0.boundaries == 2);
    CHECK(*f0.cosystolic.value == Rational(2));
    CHECK_FALSE(f0.systole.value);
    CHECK(norm(f0.coboundary.witness, filled_triangle()) == Rational(1, 3));

    const auto f1 = brute_force_expansion(filled_triangle(), 1, 2);
    CHECK(*f1.coboundary.value == Rational(3));
    CHECK(*f1.cosystolic.value == Rational(3));

    const auto h0 = brute_force_expansion(hollow_triangle(), 0, 2);
    CHECK(*h0.coboundary.value == Rational(2));

    const auto h1 = brute_force_expansion(hollow_triangle(), 1, 2);
    CHECK(*h1.coboundary.value == Rational(0));
    CHECK_FALSE(h1.cosystolic.value);
    REQUIRE(h1.systole.value);
    CHECK(*h1.systole.value == Rational(1, 3));
    CHECK(h1.cocycles == 8);
    CHECK(h1.boundaries == 4);
    const Complex hollow = hollow_triangle();
    Cochain all_edges(1, 2);
    for (const auto& e : hollow.faces(1)) all_edges.add(e, 1);
    CHECK(norm(all_edges, hollow) == Rational(1));

    CHECK(*coboundary_constant(filled_triangle(), 0, 3).value == Rational(3, 2));
    CHECK_FALSE(coboundary_constant(real_projective_plane(), 2, 3).value);
    CHECK(*cosystolic_constant(filled_triangle(), 1, 2).value == Rational(3));
    CHECK(*systole(hollow_triangle(), 1, 3) == Rational(1, 3));

    Caps tiny;
    tiny.configurations = 100;
    CHECK_THROWS_AS(brute_force_expansion(octahedron(), 1, 2, tiny), ResourceError);
    CHECK_THROWS_AS(brute_force_expansion(filled_triangle(), 3, 2), DomainError);
    CHECK_THROWS_AS(brute_force_expansion(filled_triangle(), 0, 1), DomainError);
}

TEST_CASE("exhaustive search matches the definition-level oracle") {
    struct Instance {
        const char* name;
        Complex X;
        int k;
        std::int64_t m;
    };
    const std::vector<Instance> cases{
        {"filled triangle k0 m2", filled_triangle(), 0, 2}, {"filled triangle k1 m3", filled_triangle(), 1, 3},
        {"hollow triangle k0 m3", hollow_triangle(), 0, 3}, {"hollow triangle k1 m2", hollow_triangle(), 1, 2},
        {"hollow triangle k1 m4", hollow_triangle(), 1, 4}, {"path k0 m2", path(3), 0, 2},
        {"cycle k1 m2", cycle(4), 1, 2},                    {"two triangles k0 m2", two_triangles(), 0, 2},
        {"bowtie k1 m2", bowtie(), 1, 2},                   {"tetrahedron k1 m2", full_simplex(4), 1, 2},
        {"octahedron k0 m2", octahedron(), 0, 2},           {"octahedron k2 m2", octahedron(), 2, 2},
    };
    for (const auto& c : cases) {
        CAPTURE(c.name);
        const auto mine = brute_force_expansion(c.X, c.k, c.m);
        const auto ref = oracle(c.X, c.k, c.m);
        CHECK(mine.coboundary.value == ref.cb);
        CHECK(mine.cosystolic.value == ref.cs);
        CHECK(mine.systole.value == ref.systole);
        if (mine.coboundary.value && *mine.coboundary.value > Rational(0))
            CHECK(norm(coboundary(mine.coboundary.witness, c.X), c.X) / norm(mine.coboundary.witness, c.X) == *mine.coboundary.value);
    }
}

TEST_CASE("vanishing coboundary constant tracks cohomology") {
    struct Instance {
        const char* name;
        Complex X;
        int k;
        std::int64_t m;
    };
    const std::vector<Instance> cases{
        {"filled triangle", filled_triangle(), 0, 2}, {"filled triangle", filled_triangle(), 1, 2},
        {"hollow triangle", hollow_triangle(), 0, 2}, {"hollow triangle", hollow_triangle(), 1, 3},
        {"cycle", cycle(5), 1, 2},                    {"path", path(4), 0, 2},
        {"two triangles", two_triangles(), 0, 3},     {"two triangles", two_triangles(), 1, 2},
        {"bowtie", bowtie(), 1, 2},                   {"tetrahedron", full_simplex(4), 2, 2},
        {"tetrahedron boundary", skeleton(full_simplex(4), 2), 2, 2},
        {"octahedron", octahedron(), 1, 2},           {"octahedron", octahedron(), 2, 3},
        {"projective plane", real_projective_plane(), 1, 2},
        {"projective plane", real_projective_plane(), 2, 2},
        {"projective plane", real_projective_plane(), 2, 3},
        {"torus", torus(), 2, 2},
    };
    std::size_t zero = 0, positive = 0;
    for (const auto& c : cases) {
        CAPTURE(c.name);
        CAPTURE(c.k);
        CAPTURE(c.m);
        const auto r = brute_force_expansion(c.X, c.k, c.m);
        const bool nonzero = reduced_cohomology_nonzero(reduced_homology_ranks(c.X), c.k, c.m);
        const bool vanishes = r.coboundary.value && *r.coboundary.value == Rational(0);
        CHECK(vanishes == nonzero);
        CHECK((r.cocycles != r.boundaries) == nonzero);
        if (r.cosystolic.value && r.coboundary.value) CHECK(*r.cosystolic.value >= *r.coboundary.value);
        (nonzero ? zero : positive) += 1;
        if (c.m == 2 || c.m == 3) CHECK((reduced_cohomology_dimension_mod(reduced_homology_ranks(c.X), c.k, c.m) > 0) == nonzero);
    }
    CHECK(zero >= 5);
    CHECK(positive >= 5);
}

TEST_CASE("universal coefficients on torsion") {
    // H_1 = Z/2 for the projective plane.
    const auto h = reduced_homology_ranks(real_projective_plane());
    CHECK(reduced_cohomology_nonzero(h, 1, 2));
    CHECK(reduced_cohomology_nonzero(h, 2, 2));
    CHECK(reduced_cohomology_nonzero(h, 2, 4));
    CHECK_FALSE(reduced_cohomology_nonzero(h, 1, 3));
    CHECK_FALSE(reduced_cohomology_nonzero(h, 2, 3));
    CHECK_FALSE(reduced_cohomology_nonzero(h, 0, 2));
}

TEST_CASE("cone radius lower bound") {
    const Complex T = filled_triangle();
    const auto apex = apex_star_cone(T, 0, 1);
    const auto R = radius_profile(apex).max();
    CHECK(R == 1);
    const auto b = cone_bound_check(T, R, 0, true, brute_force_expansion(T, 0, 2).coboundary.value);
    CHECK(b.bound == Rational(1, 3));
    CHECK(b.verdict == BoundVerdict::Holds);
    CHECK(to_string(b.verdict) == "holds");

    const auto top = cone_bound_check(T, 1, 1, true);
    CHECK(top.bound == Rational(1, 3));
    CHECK(top.verdict == BoundVerdict::BoundOnly);
    CHECK(cone_bound_check(full_simplex(5), 2, 3, true).bound == Rational(1, 10));
    CHECK(cone_bound_check(T, 1, 0, false, Rational(2)).verdict == BoundVerdict::HypothesisUnverified);
    CHECK(cone_bound_check(T, 1, 0, true, Rational(1, 4)).verdict == BoundVerdict::Violated);
    CHECK_THROWS_AS(cone_bound_check(T, 1, 2, true), DomainError);
    CHECK_THROWS_AS(cone_bound_check(T, 0, 0, true), DomainError);

    // Facet-transitive complexes with verified cones.
    struct Instance {
        const char* name;
        Complex X;
    };
    for (const auto& c : std::vector<Instance>{{"tetrahedron", full_simplex(4)}, {"octahedron", octahedron()}, {"cycle", cycle(6)},
                                               {"tetrahedron boundary", skeleton(full_simplex(4), 2)}}) {
        CAPTURE(c.name);
        const int n = c.X.dimension();
        const auto cone = solve_cone_linear(c.X, n - 1, 0);
        REQUIRE(verify_cone(cone, c.X));
        const auto radius = radius_profile(cone).max();
        for (int k = 0; k <= n - 1; ++k) {
            const auto r = cone_bound_check(c.X, radius, k, true, coboundary_constant(c.X, k, 2).value);
            CHECK(r.verdict == BoundVerdict::Holds);
        }
    }
}

TEST_CASE("cone bound on the unipotent A2 opposition over F2") {
    auto F2 = Field::prime(2);
    const auto cc = unipotent_opposition(F2, 2);
    const auto transitive = facet_transitivity(cc);
    CHECK(transitive.holds);
    const auto g = std::make_shared<const Geometry>(opposition_an(F2, 3, standard_flag(*F2, 3)));
    const auto provided = geometry_cone(*g);
    REQUIRE(verify_cone(provided.cone, g->complex));
    REQUIRE(complexes_isomorphic(g->complex, cc.complex).has_value());
    const auto radius = radius_profile(provided.cone).max();
    const auto h = coboundary_constant(cc.complex, 0, 2);
    const auto r = cone_bound_check(cc.complex, radius, 0, transitive.holds, h.value);
    CHECK(r.bound == Rational(1, 2 * radius));
    CHECK(r.verdict == BoundVerdict::Holds);
}

TEST_CASE("local-to-global report") {
    const auto low = local_to_global_report(octahedron(), 2);
    CHECK_FALSE(low.applicable);
    CHECK(low.conclusion.find("dimension at least 3") != std::string::npos);

    const auto high = local_to_global_report(full_simplex(5), 2);
    CHECK(high.dimension == 4);
    CHECK(high.applicable);
    CHECK(high.spectral_connected);
    CHECK(high.lambda == doctest::Approx(-0.25));
    CHECK(high.links_skipped == 0);
    REQUIRE(high.link_coboundary_min);
    CHECK(*high.link_coboundary_min > Rational(0));
    CHECK(high.conclusion.find("eps and mu are not computable") != std::string::npos);
}
