#include "hdx/io.hpp"

#include "hdx/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace hdx::io {

std::string rational_string(const Rational& r) { return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator()); }

Rational parse_rational(const std::string& text) {
    try {
        const auto slash = text.find('/');
        if (slash == std::string::npos) return Rational(std::stoll(text));
        const auto den = std::stoll(text.substr(slash + 1));
        if (den == 0) throw MalformedInput("zero denominator in '" + text + "'");
        return Rational(std::stoll(text.substr(0, slash)), den);
    } catch (const std::logic_error&) {
        throw MalformedInput("cannot parse rational '" + text + "'");
    }
}

namespace {

template <class F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const Json::exception& e) {
        throw MalformedInput(std::string(what) + ": " + e.what());
    }
}

Face face_from_json(const Json& j) {
    if (!j.is_array()) throw MalformedInput("simplex must be an array of vertex indices");
    Face f;
    for (const auto& v : j) f.push_back(v.get<Vertex>());
    return f;
}

std::int64_t modulus_from_text(const std::string& text) {
    const auto g = CoefficientGroup::parse(text);
    if (g.components() != 1) throw MalformedInput("expected a single cyclic summand, got '" + text + "'");
    return g.moduli.front();
}

}  // namespace

Json complex_to_json(const Complex& X) {
    Json j;
    j["vertices"] = X.labels();
    Json faces = Json::array();
    for (const auto& f : X.maximal_faces()) faces.push_back(f);
    j["maximal_faces"] = std::move(faces);
    return j;
}

Complex complex_from_json(const Json& j) {
    return guarded("complex", [&] {
        if (!j.is_object() || !j.contains("vertices") || !j.contains("maximal_faces"))
            throw MalformedInput("complex needs 'vertices' and 'maximal_faces'");
        auto labels = j.at("vertices").get<std::vector<std::string>>();
        std::vector<Face> faces;
        for (const auto& f : j.at("maximal_faces")) faces.push_back(face_from_json(f));
        if (faces.empty()) throw MalformedInput("complex has no faces");
        std::vector<bool> used(labels.size(), false);
        for (const auto& f : faces)
            for (Vertex v : f)
                if (v >= 0 && static_cast<std::size_t>(v) < used.size()) used[static_cast<std::size_t>(v)] = true;
        for (std::size_t i = 0; i < used.size(); ++i)
            if (!used[i]) throw MalformedInput("vertex '" + labels[i] + "' lies in no maximal face");
        return Complex::from_index_faces(std::move(labels), faces);
    });
}

namespace {

template <class Tag>
SparseSimplicial<Tag> simplicial_from_json(const Json& j, std::int64_t modulus) {
    return guarded("chain", [&] {
        SparseSimplicial<Tag> c(j.at("degree").get<int>(), modulus);
        for (const auto& e : j.at("entries")) {
            Face f = face_from_json(e.at("simplex"));
            if (static_cast<int>(f.size()) != c.degree() + 1) throw MalformedInput("chain entry has the wrong dimension");
            c.add_oriented(std::move(f), e.at("coeff").get<std::int64_t>());
        }
        return c;
    });
}

}  // namespace

Chain chain_from_json(const Json& j, std::int64_t modulus) { return simplicial_from_json<ChainTag>(j, modulus); }
Cochain cochain_from_json(const Json& j, std::int64_t modulus) { return simplicial_from_json<CochainTag>(j, modulus); }

Json cone_to_json(const ConeFunction& c) {
    Json table = Json::array();
    for (const auto& [sigma, value] : c.table()) {
        Json entries = Json::array();
        for (const auto& [f, coeff] : value.terms()) entries.push_back({{"simplex", f}, {"coeff", coeff}});
        table.push_back({{"simplex", sigma}, {"chain", std::move(entries)}});
    }
    return {{"apex", c.apex()}, {"k", c.degree()}, {"coeff", describe_modulus(c.modulus())}, {"table", std::move(table)}};
}

Json cone_to_json(const GroupCone& c) {
    if (c.components.size() == 1) return cone_to_json(c.components.front());
    if (c.components.empty()) throw DomainError("group cone has no components");
    std::set<Face> generators;
    for (const auto& comp : c.components)
        for (const auto& [sigma, value] : comp.table()) generators.insert(sigma);
    Json table = Json::array();
    for (const auto& sigma : generators) {
        std::set<Face> support;
        std::vector<Chain> values;
        for (const auto& comp : c.components) {
            values.push_back(comp.value(sigma));
            for (const auto& [f, coeff] : values.back().terms()) support.insert(f);
        }
        Json entries = Json::array();
        for (const auto& f : support) {
            Json tuple = Json::array();
            for (const auto& v : values) tuple.push_back(v.coeff(f));
            entries.push_back({{"simplex", f}, {"coeff", std::move(tuple)}});
        }
        table.push_back({{"simplex", sigma}, {"chain", std::move(entries)}});
    }
    Json summands = Json::array();
    for (auto m : c.group.moduli) summands.push_back(describe_modulus(m));
    const auto& first = c.components.front();
    return {{"apex", first.apex()}, {"k", first.degree()}, {"coeff", std::move(summands)}, {"table", std::move(table)}};
}

GroupCone cone_from_json(const Json& j) {
    return guarded("cone", [&] {
        const auto apex = j.at("apex").get<Vertex>();
        const int k = j.at("k").get<int>();
        const Json& coeff = j.at("coeff");
        GroupCone out;
        out.group.moduli.clear();
        const bool tuple = coeff.is_array();
        if (tuple) {
            if (coeff.empty()) throw MalformedInput("empty coefficient list");
            for (const auto& s : coeff) out.group.moduli.push_back(modulus_from_text(s.get<std::string>()));
        } else {
            out.group.moduli.push_back(modulus_from_text(coeff.get<std::string>()));
        }
        for (auto m : out.group.moduli) out.components.emplace_back(apex, k, m);
        for (const auto& row : j.at("table")) {
            Face sigma = face_from_json(row.at("simplex"));
            const int sign = canonicalize(sigma);
            if (sign == 0) throw MalformedInput("cone generator repeats a vertex");
            const int degree = static_cast<int>(sigma.size());
            std::vector<Chain> values;
            for (auto m : out.group.moduli) values.emplace_back(degree, m);
            for (const auto& e : row.at("chain")) {
                Face f = face_from_json(e.at("simplex"));
                if (static_cast<int>(f.size()) != degree + 1) throw MalformedInput("cone value has the wrong dimension");
                const Json& c = e.at("coeff");
                if (tuple != c.is_array()) throw MalformedInput("coefficient shape does not match 'coeff'");
                if (tuple && c.size() != values.size()) throw MalformedInput("coefficient tuple has the wrong length");
                for (std::size_t i = 0; i < values.size(); ++i)
                    values[i].add_oriented(f, sign * (tuple ? c.at(i).get<std::int64_t>() : c.get<std::int64_t>()));
            }
            for (std::size_t i = 0; i < values.size(); ++i) out.components[i].set(sigma, std::move(values[i]));
        }
        return out;
    });
}

Json radius_to_json(const RadiusProfile& r) {
    Json j = Json::object();
    for (int d = -1; d <= r.top(); ++d) j[std::to_string(d)] = r.at(d);
    return j;
}

Json ledger_to_json(const FiltrationLedger& l) {
    Json j;
    j["name"] = l.name;
    j["n"] = l.n;
    j["tracked"] = l.tracked;
    if (l.tracked) {
        j["class"] = l.cls == RadiusClass::A ? "A" : "C";
        j["f_n"] = l.f_n;
        j["ell_n"] = l.ell_n;
        j["S_n"] = l.S_n;
        j["R_n"] = l.R_n;
    }
    j["base"] = {{"method", l.base_method}, {"radius", radius_to_json(l.base_radius)}, {"within_f", l.base_within_f}};
    Json stages = Json::array();
    for (const auto& s : l.stages) {
        Json st;
        st["name"] = s.name;
        st["added"] = s.added;
        st["radius"] = radius_to_json(s.radius);
        st["extension_bound"] = s.extension_bound;
        if (s.ledger_bound) st["ledger_bound"] = s.ledger_bound;
        st["within_extension"] = s.within_extension;
        st["within_ledger"] = s.within_ledger;
        st["link_methods"] = s.link_methods;
        stages.push_back(std::move(st));
    }
    j["stages"] = std::move(stages);
    j["final_radius"] = radius_to_json(l.final_radius);
    j["final_within_R"] = l.final_within_R;
    j["fallbacks"] = l.fallbacks;
    j["unidentified"] = l.unidentified;
    j["violations"] = l.violations();
    j["notes"] = l.notes;
    Json children = Json::array();
    for (const auto& c : l.children) children.push_back(ledger_to_json(c));
    j["children"] = std::move(children);
    return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw MalformedInput(path.string() + ": " + e.what());
    }
}

void write_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw MalformedInput("cannot write " + path.string());
    out << dump(j);
}

}  // namespace hdx::io
