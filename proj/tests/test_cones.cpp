#include "doctest.h"
#include "support.hpp"

#include "hdx/cones.hpp"
#include "hdx/errors.hpp"

#include <limits>
#include <random>

using namespace hdx;
using namespace hdx::testing;

namespace {

Face F(const Complex& X, std::initializer_list<const char*> labels) {
    Face f;
    for (const char* l : labels) f.push_back(X.vertex(l));
    canonicalize(f);
    return f;
}

// Cone equation checked on random integer chains rather than generators.
bool equation_on_random_chains(const ConeFunction& c, const Complex& X, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> coeff(-2, 2);
    for (int trial = 0; trial < 10; ++trial)
        for (int j = 0; j <= std::min(c.degree(), X.dimension()); ++j) {
            Chain a(j, c.modulus());
            for (const auto& f : X.faces(j))
                if (rng() % 3 == 0) a.add(f, coeff(rng));
            Chain lhs = boundary(c(a)) + c(boundary(a));
            if (!(lhs == a)) return false;
        }
    return true;
}

bool bounded_by(const RadiusProfile& r, const std::vector<std::int64_t>& bound) {
    for (int j = -1; j <= r.top(); ++j)
        if (static_cast<std::size_t>(j + 1) < bound.size() && r.at(j) > bound[static_cast<std::size_t>(j + 1)]) return false;
    return true;
}

bool homology_vanishes_through(const Complex& X, int k) {
    for (const auto& h : reduced_homology_ranks(X))
        if (h.degree <= k && !h.vanishes()) return false;
    return true;
}

}  // namespace

TEST_CASE("verification") {
    const Complex t = filled_triangle();
    const ConeFunction c = apex_star_cone(t, t.vertex("1"), 2);
    CHECK(verify_cone(c, t));
    CHECK(equation_on_random_chains(c, t, 1));
    CHECK(c.value({}) == Chain::unit({t.vertex("1")}));

    ConeFunction broken = c;
    const Face e = F(t, {"2", "3"});
    broken.set(e, Chain(2, 0));
    const auto verdict = verify_cone(broken, t);
    CHECK_FALSE(verdict.ok);
    REQUIRE(verdict.generator.has_value());
    CHECK(*verdict.generator == e);

    const Complex path3 = path(3);
    const ConeFunction bfs = graph_bfs_cone(path3, path3.vertex("p0"));
    CHECK(verify_cone(bfs, path3));
}

TEST_CASE("radius profiles") {
    const Complex p = path(3);
    const auto r = radius_profile(graph_bfs_cone(p, p.vertex("p0")));
    CHECK(r.at(-1) == 1);
    CHECK(r.at(0) == 3);

    const Complex c6 = cycle(6);
    for (Vertex apex = 0; apex < 6; ++apex) {
        const ConeFunction c = graph_bfs_cone(c6, apex);
        CHECK(verify_cone(c, c6));
        CHECK(radius_profile(c).at(0) == 3);
    }

    const Complex point = Complex::from_maximal_faces({{"v"}});
    const ConeFunction trivial = graph_bfs_cone(point, 0);
    CHECK(verify_cone(trivial, point));
    CHECK(trivial.value({0}).empty());
    CHECK(radius_profile(trivial).at(0) == 0);

    const Complex hollow = hollow_triangle();
    CHECK(radius_profile(graph_bfs_cone(hollow, 0)).at(0) == 1);

    CHECK_THROWS_AS(graph_bfs_cone(Complex::from_maximal_faces({{"a", "b"}, {"c"}}), 0), NoConeError);
}

TEST_CASE("bfs radius equals the eccentricity of the apex") {
    for (unsigned seed = 1; seed <= 15; ++seed) {
        const Complex X = skeleton(random_pure_complex(seed, 8, 9, 1), 1);
        if (!is_connected(X)) continue;
        for (Vertex apex = 0; apex < static_cast<Vertex>(X.num_vertices()); ++apex) {
            std::vector<int> dist(X.num_vertices(), -1);
            std::vector<Vertex> queue{apex};
            dist[static_cast<std::size_t>(apex)] = 0;
            for (std::size_t i = 0; i < queue.size(); ++i)
                for (Vertex u : X.neighbors(queue[i]))
                    if (dist[static_cast<std::size_t>(u)] < 0) {
                        dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(queue[i])] + 1;
                        queue.push_back(u);
                    }
            const ConeFunction c = graph_bfs_cone(X, apex);
            CHECK(verify_cone(c, X));
            CHECK(radius_profile(c).at(0) == *std::max_element(dist.begin(), dist.end()));
        }
    }
}

TEST_CASE("apex-star cones") {
    const Complex edge = Complex::from_maximal_faces({{"v", "u"}});
    const ConeFunction c = apex_star_cone(edge, edge.vertex("v"), 0);
    CHECK(c.value({edge.vertex("u")}) == Chain::unit({edge.vertex("v"), edge.vertex("u")}));
    CHECK(c.value({edge.vertex("v")}).empty());

    const Complex o = octahedron();
    const Complex upper = full_subcomplex(o, std::vector<std::string>{"n", "a", "b", "c", "d"});
    const Vertex n = upper.vertex("n");
    for (int k = 0; k <= 3; ++k) {
        const ConeFunction star = apex_star_cone(upper, n, k);
        CHECK(verify_cone(star, upper));
        for (int j = -1; j <= k; ++j) CHECK(radius_profile(star).at(j) <= 1);
    }
    const ConeFunction star = apex_star_cone(upper, n, 2);
    CHECK(radius_profile(star).values == std::vector<std::int64_t>{1, 1, 1, 0});
    CHECK(equation_on_random_chains(star, upper, 4));

    // Mixed simplex [v, u1, u2]: the apex part maps to zero and the boundary terms cancel.
    Chain mixed(2, 0);
    mixed.add(F(upper, {"n", "a", "b"}), 1);
    CHECK(star(mixed).empty());
    CHECK(boundary(star(mixed)) + star(boundary(mixed)) == mixed);
}

TEST_CASE("join cones") {
    const Complex point = Complex::from_maximal_faces({{"p"}});
    const JoinCone pp = join_cone(point, ConeFunction(0, -1), point, ConeFunction(0, -1));
    CHECK(pp.complex.count(1) == 1);
    CHECK(verify_cone(pp.cone, pp.complex));

    const Complex two = Complex::from_maximal_faces({{"a"}, {"b"}});
    const JoinCone square = join_cone(two, ConeFunction(0, -1), two, ConeFunction(0, -1));
    CHECK(square.complex.count(1) == 4);
    CHECK(verify_cone(square.cone, square.complex));
    const auto sq_bound = join_radius_bound(radius_profile(ConeFunction(0, -1)), radius_profile(ConeFunction(0, -1)), 0, 0);
    CHECK(bounded_by(radius_profile(square.cone), sq_bound));
    CHECK(radius_profile(square.cone).at(0) <= 3);

    const Complex edge1 = Complex::from_maximal_faces({{"x", "y"}});
    const ConeFunction c1 = apex_star_cone(edge1, 0, 1);
    const JoinCone tet = join_cone(edge1, c1, edge1, c1);
    CHECK(tet.cone.degree() == 2);
    CHECK(verify_cone(tet.cone, tet.complex));
    const auto bound = join_radius_bound(radius_profile(c1), radius_profile(c1), 1, 2);
    CHECK(bound[2] == 3);
    CHECK(bound[3] == 3);
    CHECK(bounded_by(radius_profile(tet.cone), bound));

    const Complex c5 = cycle(5);
    const ConeFunction bfs5 = graph_bfs_cone(c5, 0);
    const Complex tri = filled_triangle();
    const ConeFunction star3 = apex_star_cone(tri, 0, 1);
    for (const auto& [a, ca, b, cb] : std::vector<std::tuple<Complex, ConeFunction, Complex, ConeFunction>>{
             {c5, bfs5, tri, star3}, {tri, star3, c5, bfs5}, {c5, bfs5, two, ConeFunction(0, -1)}, {two, ConeFunction(0, -1), c5, bfs5}}) {
        const JoinCone j = join_cone(a, ca, b, cb);
        CHECK(verify_cone(j.cone, j.complex));
        CHECK(j.cone.degree() == a.dimension() + b.dimension());
        CHECK(bounded_by(radius_profile(j.cone), join_radius_bound(radius_profile(ca), radius_profile(cb), a.dimension(), j.cone.degree())));
    }

    CHECK_THROWS_AS(join_cone(tri, ConeFunction(0, 0), point, ConeFunction(0, -1)), DomainError);
    CHECK_THROWS_AS(join_cone(edge1, c1, edge1, c1.reduced(2)), DomainError);
}

TEST_CASE("extension by a vertex set") {
    const Complex o = octahedron();
    std::vector<bool> base(o.num_vertices(), true);
    base[static_cast<std::size_t>(o.vertex("s"))] = false;
    const Complex upper = full_subcomplex(o, std::vector<std::string>{"n", "a", "b", "c", "d"});
    const ConeFunction base_cone = apex_star_cone(upper, upper.vertex("n"), 1).mapped(embed_by_labels(upper, o));
    CHECK(verify_cone(base_cone, o, base));

    const Vertex s = o.vertex("s");
    const Complex equator = relative_link(o, s, base);
    CHECK(equator.count(1) == 4);
    const ConeFunction link_cone = graph_bfs_cone(equator, 0);
    CHECK(radius_profile(link_cone).at(0) == 2);

    const ConeFunction ext = extend_by_vertex_set(o, base, base_cone, {s}, {{s, link_cone.mapped(embed_by_labels(equator, o))}});
    CHECK(verify_cone(ext, o));
    CHECK(equation_on_random_chains(ext, o, 9));
    const auto bound = extension_radius_bound(radius_profile(base_cone), radius_profile(link_cone), 1);
    CHECK(bound == std::vector<std::int64_t>{1, 2, 4});
    const auto measured = radius_profile(ext);
    CHECK(measured.at(0) <= 2);
    CHECK(measured.at(1) <= 4);

    const ConeFunction same = extend_by_vertex_set(o, base, base_cone, {}, {});
    CHECK(same.table() == base_cone.table());

    std::vector<bool> ring_base(o.num_vertices(), false);
    ring_base[static_cast<std::size_t>(o.vertex("a"))] = ring_base[static_cast<std::size_t>(o.vertex("c"))] = true;
    CHECK_THROWS_AS(extend_by_vertex_set(o, ring_base, ConeFunction(o.vertex("a"), 0), {o.vertex("n"), o.vertex("b")}, {}), DomainError);
    CHECK_THROWS_AS(extend_by_vertex_set(o, base, base_cone, {o.vertex("n")}, {}), DomainError);
    CHECK_THROWS_AS(extend_by_vertex_set(o, base, base_cone, {s}, {}), DomainError);
}

TEST_CASE("coefficient transport") {
    const Complex c6 = cycle(6);
    const ConeFunction bfs = graph_bfs_cone(c6, 0);
    const GroupCone mod2 = transport_coefficients(bfs, CoefficientGroup::cyclic(2));
    CHECK(verify_cone(mod2, c6));
    CHECK(radius_profile(mod2).at(0) <= 3);
    CHECK(transport_support_contained(mod2, bfs));

    const GroupCone mixed = transport_coefficients(bfs, CoefficientGroup::parse("Z/3+Z"));
    CHECK(mixed.components.size() == 2);
    CHECK(verify_cone(mixed, c6));
    const auto rz = radius_profile(bfs), rm = radius_profile(mixed);
    for (int j = -1; j <= rz.top(); ++j) CHECK(rm.at(j) <= rz.at(j));
    CHECK(transport_support_contained(mixed, bfs));
    CHECK(mod2.components[0](Chain(0, 2)).empty());

    const Complex o = octahedron();
    const ConeFunction solved = solve_cone_linear(o, 1, 0);
    for (std::int64_t m : {2, 3, 4, 6}) {
        const GroupCone g = transport_coefficients(solved, CoefficientGroup::cyclic(m));
        CHECK(verify_cone(g, o));
        CHECK(transport_support_contained(g, solved));
        // Support of a * Cone(1_sigma) inside the integral support for every a.
        for (const auto& [sigma, value] : solved.table())
            for (std::int64_t a = 1; a < m; ++a) {
                Chain scaled = g.components[0](Chain::unit(sigma, a, m));
                for (const auto& [f, c] : scaled.terms()) CHECK(value.coeff(f) != 0);
            }
    }
}

TEST_CASE("linear solver") {
    const Complex t = filled_triangle();
    CHECK(verify_cone(solve_cone_linear(t, 1, 0), t));
    CHECK_THROWS_AS(solve_cone_linear(hollow_triangle(), 1, 0), NoConeError);
    const Complex o = octahedron();
    const ConeFunction oc = solve_cone_linear(o, 1, 0);
    CHECK(verify_cone(oc, o));
    CHECK_THROWS_AS(solve_cone_linear(o, 2, 0), NoConeError);
    Caps tiny;
    tiny.solver_faces = 5;
    CHECK_THROWS_AS(solve_cone_linear(o, 1, 0, tiny), ResourceError);

    // Existence tracks vanishing reduced homology through the cone degree.
    std::vector<Complex> corpus{filled_triangle(), hollow_triangle(), octahedron(), cycle(5), path(4), full_simplex(4)};
    for (unsigned seed = 1; seed <= 25; ++seed) corpus.push_back(random_complex(seed, 7, 6, 4));
    std::size_t found = 0, refused = 0;
    for (const auto& X : corpus)
        for (int k = 0; k <= X.dimension(); ++k) {
            const bool expected = homology_vanishes_through(X, k);
            try {
                const ConeFunction c = solve_cone_linear(X, k, 0);
                CHECK(expected);
                CHECK(verify_cone(c, X));
                ++found;
            } catch (const NoConeError&) {
                CHECK_FALSE(expected);
                ++refused;
            }
        }
    CHECK(found >= 10);
    CHECK(refused >= 10);
}

TEST_CASE("constructive and solver cones agree on verification") {
    const Complex o = octahedron();
    std::vector<bool> base(o.num_vertices(), true);
    base[static_cast<std::size_t>(o.vertex("s"))] = false;
    const Complex upper = full_subcomplex(o, std::vector<std::string>{"n", "a", "b", "c", "d"});
    const ConeFunction star = apex_star_cone(upper, upper.vertex("n"), 1);
    const ConeFunction solved = solve_cone_linear(upper, 1, upper.vertex("n"));
    CHECK(verify_cone(star, upper));
    CHECK(verify_cone(solved, upper));
    const Complex c6 = cycle(6);
    CHECK(verify_cone(graph_bfs_cone(c6, 2), c6));
    CHECK(verify_cone(solve_cone_linear(c6, 0, 2), c6));
}

TEST_CASE("filtration recursion values") {
    CHECK(filtration_R(0, RadiusClass::A) == 1);
    CHECK(filtration_S(1, RadiusClass::A) == 2);
    CHECK(filtration_f(1, RadiusClass::A) == 3);
    CHECK(filtration_stages(1, RadiusClass::A) == 2);
    CHECK(filtration_R(1, RadiusClass::A) == 18);
    for (int n = 1; n <= 2; ++n)
        for (auto cls : {RadiusClass::A, RadiusClass::C}) {
            std::int64_t s = 0;
            for (int a = 0; a + 1 <= n; ++a) s = std::max(s, ((a + 1) * filtration_R(a, cls) + 1) * filtration_R(n - 1 - a, cls));
            CHECK(filtration_S(n, cls) == s);
            std::int64_t r = filtration_f(n, cls);
            for (int i = 0; i < filtration_stages(n, cls); ++i) r = s * (r + 1);
            CHECK(filtration_R(n, cls) == r);
        }
    CHECK(filtration_R(2, RadiusClass::A) == 254671);
    CHECK(filtration_R(2, RadiusClass::C) == 932589061549873);
    // Values beyond 64 bits saturate instead of wrapping.
    CHECK(filtration_R(3, RadiusClass::A) == std::numeric_limits<std::int64_t>::max());
    CHECK(filtration_S(3, RadiusClass::A) == 764014);
}

TEST_CASE("filtration with no stages returns the base cone") {
    auto target = std::make_shared<const Complex>(filled_triangle());
    FiltrationPlan plan;
    plan.name = "triangle";
    plan.target = target;
    plan.base_vertices = {0, 1, 2};
    plan.base_provider = [](const Complex& X, const std::vector<bool>&) { return ProvidedCone{apex_star_cone(X, 0, 1), "apex", {}}; };
    plan.base_bound = 1;
    const auto result = run_filtration(plan);
    CHECK(result.cone.table() == apex_star_cone(*target, 0, 1).table());
    CHECK(result.ledger.stages.empty());
    CHECK(result.ledger.within_bounds());
}

TEST_CASE("filtration on the octahedron") {
    auto target = std::make_shared<const Complex>(octahedron());
    const Complex& o = *target;
    FiltrationPlan plan;
    plan.name = "octahedron";
    plan.target = target;
    plan.base_vertices = {o.vertex("n"), o.vertex("a"), o.vertex("b"), o.vertex("c"), o.vertex("d")};
    const Vertex n = o.vertex("n");
    plan.base_provider = [n](const Complex& X, const std::vector<bool>& mask) { return ProvidedCone{apex_star_on(X, mask, n, 1), "apex", {}}; };
    FiltrationStage stage;
    stage.name = "south";
    stage.vertices = {o.vertex("s")};
    stage.provider = [](const Complex& lk, Vertex) { return ProvidedCone{graph_bfs_cone(lk, 0), "bfs", {}}; };
    plan.stages.push_back(stage);
    const auto result = run_filtration(plan);
    CHECK(verify_cone(result.cone, o));
    REQUIRE(result.ledger.stages.size() == 1);
    CHECK(result.ledger.stages[0].within_extension);
    CHECK(result.ledger.stages[0].link_methods.at("bfs") == 1);
    CHECK(radius_profile(result.cone).at(1) <= 4);
}

TEST_CASE("subdivision transport on a subdivided triangle") {
    const Complex tilde = Complex::from_maximal_faces({{"w1", "w2", "x"}});
    const Complex t = Complex::from_maximal_faces({{"w1", "u", "x"}, {"u", "w2", "x"}});
    for (const std::string chosen : {"w1", "w2"}) {
        const std::vector<SubdivisionPair> pairing{{"u", "w1", "w2", chosen}};
        CHECK(check_subdivision(t, tilde, pairing).empty());
        const ConeFunction on_t = apex_star_cone(t, t.vertex("x"), 1);
        const ConeFunction moved = subdivision_transport(on_t, t, tilde, pairing);
        CHECK(verify_cone(moved, tilde));
        CHECK(radius_profile(moved).max() <= 2 * radius_profile(on_t).max());
        // A generator living in both complexes maps through the identity part.
        const Face shared = F(tilde, {"w1", "x"});
        CHECK(moved.value(shared).support_size() <= on_t.value(F(t, {"w1", "x"})).support_size() + 1);

        const ConeFunction solved = solve_cone_linear(t, 1, t.vertex("w1"));
        CHECK(verify_cone(subdivision_transport(solved, t, tilde, pairing), tilde));
    }
    CHECK_FALSE(check_subdivision(t, tilde, {{"u", "w1", "x", "w1"}}).empty());
    CHECK_THROWS_AS(subdivision_transport(apex_star_cone(t, t.vertex("x"), 1), t, tilde, {{"x", "w1", "w2", "w1"}}), DomainError);
}

TEST_CASE("transfer by labels") {
    const Complex a = Complex::from_maximal_faces({{"p", "q"}, {"q", "r"}});
    const Complex b = Complex::from_maximal_faces({{"r", "q"}, {"q", "p"}});
    const ConeFunction c = graph_bfs_cone(a, a.vertex("q"));
    const auto moved = transfer_by_labels(a, c, b);
    REQUIRE(moved.has_value());
    CHECK(verify_cone(*moved, b));
    CHECK_FALSE(transfer_by_labels(a, c, cycle(3)).has_value());
}
