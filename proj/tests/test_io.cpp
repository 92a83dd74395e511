#include "doctest.h"
#include "support.hpp"

#include "hdx/cones.hpp"
#include "hdx/errors.hpp"
#include "hdx/io.hpp"

#include <filesystem>
#include <fstream>

using namespace hdx;
using namespace hdx::testing;
using hdx::io::Json;

TEST_CASE("rationals") {
    CHECK(io::rational_string(Rational(2)) == "2/1");
    CHECK(io::rational_string(Rational(-3, 6)) == "-1/2");
    CHECK(io::parse_rational("4/6") == Rational(2, 3));
    CHECK(io::parse_rational("7") == Rational(7));
    CHECK_THROWS_AS(io::parse_rational("1/0"), MalformedInput);
    CHECK_THROWS_AS(io::parse_rational("x"), MalformedInput);
}

TEST_CASE("complex round trip is exact and byte-stable") {
    std::vector<Complex> corpus{filled_triangle(), octahedron(), cycle(7), Complex::from_maximal_faces({{"a", "b", "c"}, {"c", "d"}})};
    for (unsigned s = 1; s <= 10; ++s) corpus.push_back(random_complex(s, 8, 6, 4));
    for (const auto& X : corpus) {
        const Json j = io::complex_to_json(X);
        const Complex back = io::complex_from_json(j);
        CHECK(back == X);
        CHECK(io::dump(io::complex_to_json(back)) == io::dump(j));
        CHECK(io::dump(Json::parse(io::dump(j))) == io::dump(j));
    }
}

TEST_CASE("the loader closes maximal faces downward") {
    const Json j = Json::parse(R"({"vertices":["x","y","z","w"],"maximal_faces":[[2,0,1],[1,3],[0,1]]})");
    const Complex X = io::complex_from_json(j);
    CHECK(X.count(0) == 4);
    CHECK(X.count(1) == 4);
    CHECK(X.count(2) == 1);
    CHECK(X.maximal_faces().size() == 2);
    CHECK(X.label(0) == "x");
}

TEST_CASE("malformed complexes") {
    for (const char* text : {R"({"vertices":["a"]})", R"({"vertices":["a","b"],"maximal_faces":[[0,2]]})",
                             R"({"vertices":["a","b"],"maximal_faces":[[0]]})", R"({"vertices":["a","a"],"maximal_faces":[[0,1]]})",
                             R"({"vertices":["a"],"maximal_faces":[[0,0]]})", R"({"vertices":["a"],"maximal_faces":[]})",
                             R"({"vertices":[1],"maximal_faces":[[0]]})", R"([1,2])"})
        CHECK_THROWS_AS(io::complex_from_json(Json::parse(text)), MalformedInput);
}

TEST_CASE("chains and cochains") {
    Chain c(1, 0);
    c.add({0, 2}, -3);
    c.add({1, 2}, 1);
    const Json j = io::chain_to_json(c);
    CHECK(j.at("degree") == 1);
    CHECK(io::chain_from_json(j, 0) == c);
    const Json flipped = Json::parse(R"({"degree":1,"entries":[{"simplex":[2,0],"coeff":3}]})");
    CHECK(io::chain_from_json(flipped, 0).coeff({0, 2}) == -3);
    CHECK(io::cochain_from_json(flipped, 2).coeff({0, 2}) == 1);
    CHECK_THROWS_AS(io::chain_from_json(Json::parse(R"({"degree":1,"entries":[{"simplex":[0],"coeff":1}]})"), 0), MalformedInput);
}

TEST_CASE("cone round trip") {
    const Complex o = octahedron();
    const ConeFunction c = solve_cone_linear(o, 1, 0);
    const GroupCone back = io::cone_from_json(io::cone_to_json(c));
    REQUIRE(back.components.size() == 1);
    CHECK(back.group.is_integers());
    CHECK(back.components[0].table() == c.table());
    CHECK(verify_cone(back, o));

    const GroupCone mixed = transport_coefficients(c, CoefficientGroup::parse("Z/3+Z"));
    const Json mj = io::cone_to_json(mixed);
    CHECK(mj.at("coeff") == Json::array({"Z/3", "Z"}));
    const GroupCone mixed_back = io::cone_from_json(mj);
    CHECK(mixed_back.group == mixed.group);
    CHECK(verify_cone(mixed_back, o));
    for (std::size_t i = 0; i < mixed.components.size(); ++i) CHECK(mixed_back.components[i].table() == mixed.components[i].table());
    CHECK(io::dump(io::cone_to_json(mixed_back)) == io::dump(mj));

    // A generator written against the canonical orientation is negated on load.
    const Json reversed = Json::parse(R"({"apex":0,"k":1,"coeff":"Z","table":[{"simplex":[2,1],"chain":[{"simplex":[0,1,2],"coeff":1}]}]})");
    CHECK(io::cone_from_json(reversed).components[0].value({1, 2}).coeff({0, 1, 2}) == -1);
    CHECK_THROWS_AS(io::cone_from_json(Json::parse(R"({"apex":0,"k":1,"coeff":"Q","table":[]})")), MalformedInput);
    CHECK_THROWS_AS(io::cone_from_json(Json::parse(R"({"apex":0,"k":1,"coeff":["Z/2"],"table":[{"simplex":[1],"chain":[{"simplex":[0,1],"coeff":1}]}]})")),
                    MalformedInput);
}

TEST_CASE("files") {
    const auto dir = std::filesystem::temp_directory_path() / "hdx_test_io";
    std::filesystem::create_directories(dir);
    const auto path = dir / "octahedron.json";
    io::write_file(path, io::complex_to_json(octahedron()));
    CHECK(io::complex_from_json(io::read_file(path)) == octahedron());
    CHECK_THROWS_AS(io::read_file(dir / "missing.json"), MalformedInput);
    {
        std::ofstream broken(dir / "broken.json");
        broken << "{ nope";
    }
    CHECK_THROWS_AS(io::read_file(dir / "broken.json"), MalformedInput);
    std::filesystem::remove_all(dir);
}
