#include "cli.hpp"

#include "hdx/buildings.hpp"
#include "hdx/cones.hpp"
#include "hdx/cosets.hpp"
#include "hdx/errors.hpp"
#include "hdx/expansion.hpp"
#include "hdx/io.hpp"

#include "CLI11.hpp"

#include <boost/algorithm/string.hpp>

#include <climits>
#include <ostream>

namespace hdx::cli {

namespace {

using io::Json;

struct Options {
    // what to build
    std::string kind;
    int q = 0;
    int dim = 0;
    int witt = 0;
    int n = 0;
    int rank = 0;
    std::string form = "hyperbolic";
    std::string flag;
    std::string poly;
    std::string spec;
    // inputs and outputs
    std::string in;
    std::string with;
    std::string cone;
    std::string out;
    // command parameters
    std::string method;
    std::string apex;
    int k = INT_MIN;
    std::string coeff;
    std::string mode;
    std::string base;
    std::string add;
    std::string transitive = "auto";
    unsigned threads = 1;
    bool json = false;
    std::string caps;
};

struct Built {
    Complex complex;
    Json metadata = Json::object();
    std::shared_ptr<const Geometry> geometry;
    std::optional<Oriflamme> oriflamme;
    std::optional<CosetComplex> coset;
};

// ---------------------------------------------------------------------------------------------
// small helpers

std::shared_ptr<const Field> field_of_order(int q) {
    if (q < 2 || q > 256) throw DomainError("field size must lie in 2..256, got " + std::to_string(q));
    int p = 2;
    while (q % p != 0) ++p;
    int s = 0;
    for (int r = q; r > 1; r /= p) {
        if (r % p != 0) throw DomainError(std::to_string(q) + " is not a prime power");
        ++s;
    }
    return s == 1 ? Field::prime(p) : Field::galois(p, s);
}

std::vector<std::int64_t> parse_int_list(const std::string& text, const char* what) {
    std::vector<std::string> parts;
    boost::split(parts, text, boost::is_any_of(","));
    std::vector<std::int64_t> out;
    for (auto p : parts) {
        boost::trim(p);
        if (p.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(p, &used));
            if (used != p.size()) throw std::invalid_argument(p);
        } catch (const std::logic_error&) {
            throw MalformedInput(std::string("cannot read ") + what + " from '" + text + "'");
        }
    }
    return out;
}

std::vector<std::string> parse_label_list(const std::string& text) {
    std::vector<std::string> parts;
    boost::split(parts, text, boost::is_any_of(","));
    std::vector<std::string> out;
    for (auto p : parts) {
        boost::trim(p);
        if (!p.empty()) out.push_back(p);
    }
    return out;
}

Subspace leading_span(const Field& F, int ambient, int d) {
    FqMatrix rows = FqMatrix::Zero(d, ambient);
    for (int i = 0; i < d; ++i) rows(i, i) = 1;
    return Subspace::span(F, ambient, rows);
}

// "full" gives e_1 < e_1,e_2 < ... up to `top`; otherwise a comma list of dimensions.
std::vector<Subspace> standard_constraints(const Field& F, int ambient, int top, const std::string& flag) {
    std::vector<int> dims;
    if (flag.empty() || flag == "full") {
        for (int d = 1; d <= top; ++d) dims.push_back(d);
    } else {
        for (auto d : parse_int_list(flag, "flag dimensions")) {
            if (d < 1 || d > top) throw DomainError("flag dimension " + std::to_string(d) + " outside 1.." + std::to_string(top));
            dims.push_back(static_cast<int>(d));
        }
    }
    std::vector<Subspace> out;
    for (int d : dims) out.push_back(leading_span(F, ambient, d));
    return out;
}

Form make_form(const Options& o) {
    if (o.witt < 1) throw DomainError("--witt must be at least 1");
    auto F = field_of_order(o.q);
    if (F->characteristic() == 2) throw UnsupportedError("forms are only supported in odd characteristic");
    if (o.form == "hyperbolic") return Form::hyperbolic(F, o.witt);
    if (o.form == "parabolic") return Form::parabolic(F, o.witt);
    throw DomainError("--form must be hyperbolic or parabolic");
}

std::int64_t parse_modulus(const std::string& text) {
    std::string t = text.empty() ? "2" : text;
    if (t.rfind("Z/", 0) != 0) t = "Z/" + t;
    const auto g = CoefficientGroup::parse(t);
    if (g.components() != 1 || g.moduli[0] < 2) throw DomainError("coefficients must be a single Z/m with m >= 2");
    return g.moduli[0];
}

Json face_labels(const Complex& X, const Face& f) {
    Json j = Json::array();
    for (Vertex v : f) j.push_back(X.label(v));
    return j;
}

std::string describe_homology(const HomologyGroup& h) {
    std::string s;
    if (h.rank > 0) s = h.rank == 1 ? "Z" : "Z^" + std::to_string(h.rank);
    for (auto t : h.torsion) s += (s.empty() ? "" : " + ") + ("Z/" + std::to_string(t));
    return s.empty() ? "0" : s;
}

Json homology_json(const Complex& X, const Caps& caps) {
    for (int k = 0; k <= X.dimension(); ++k)
        if (X.count(k) > caps.solver_faces)
            return {{"skipped", "face count " + std::to_string(X.count(k)) + " in degree " + std::to_string(k) + " is over the solver cap " + std::to_string(caps.solver_faces)}};
    Json j = Json::array();
    for (const auto& h : reduced_homology_ranks(X)) j.push_back({{"degree", h.degree}, {"rank", h.rank}, {"torsion", h.torsion}, {"group", describe_homology(h)}});
    return j;
}

Json describe_complex(const Complex& X) {
    std::vector<std::size_t> f;
    for (int k = 0; k <= X.dimension(); ++k) f.push_back(X.count(k));
    return {{"dimension", X.dimension()}, {"f_vector", f}, {"pure", X.is_pure()}, {"connected", is_connected(X)}, {"maximal_faces", X.maximal_faces().size()}};
}

Json subspace_dimensions(const Geometry& g) {
    std::map<std::string, std::size_t> by_dim;
    for (const auto& u : g.subspaces) ++by_dim[std::to_string(u.dim())];
    return by_dim;
}

Json matrix_json(const FqMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(static_cast<int>(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

FqMatrix matrix_from_json(const Json& j, const Field& F, int degree) {
    if (!j.is_array() || static_cast<int>(j.size()) != degree) throw MalformedInput("matrix must have " + std::to_string(degree) + " rows");
    FqMatrix m(degree, degree);
    for (int r = 0; r < degree; ++r) {
        const Json& row = j.at(static_cast<std::size_t>(r));
        if (!row.is_array() || static_cast<int>(row.size()) != degree) throw MalformedInput("matrix rows must have " + std::to_string(degree) + " entries");
        for (int c = 0; c < degree; ++c) {
            const int v = row.at(static_cast<std::size_t>(c)).get<int>();
            if (v < 0 || v >= F.size()) throw MalformedInput("matrix entry " + std::to_string(v) + " is not a field element code");
            m(r, c) = static_cast<FieldElement>(v);
        }
    }
    return m;
}

Json coset_metadata(const CosetComplex& cc) {
    std::vector<std::size_t> orders;
    for (const auto& h : cc.subgroups) orders.push_back(h.order());
    Json gens = Json::array();
    for (const auto& g : cc.group->generators()) gens.push_back(matrix_json(g));
    return {{"group_order", cc.group->order()}, {"subgroup_orders", orders}, {"partite", is_partite(cc)}, {"types", cc.types}, {"generators", gens},
            {"field", cc.group->field().describe()}, {"degree", cc.group->degree()}};
}

// ---------------------------------------------------------------------------------------------
// building complexes

Built build(const Options& o, const Caps& caps) {
    Built b;
    const std::string& kind = o.kind;
    b.metadata["kind"] = kind;
    if (kind == "simplex") {
        if (o.dim < 0) throw DomainError("--dim must be non-negative");
        std::vector<std::string> face;
        for (int i = 0; i <= o.dim; ++i) face.push_back(std::to_string(i));
        b.complex = Complex::from_maximal_faces({face});
    } else if (kind == "octahedron") {
        std::vector<std::vector<std::string>> faces;
        const std::vector<std::string> ring{"a", "b", "c", "d"};
        for (const std::string pole : {"n", "s"})
            for (std::size_t i = 0; i < 4; ++i) faces.push_back({pole, ring[i], ring[(i + 1) % 4]});
        b.complex = Complex::from_maximal_faces(faces);
    } else if (kind == "cycle") {
        if (o.n < 3) throw DomainError("--n must be at least 3 for a cycle");
        std::vector<std::vector<std::string>> edges;
        for (int i = 0; i < o.n; ++i) edges.push_back({"c" + std::to_string(i), "c" + std::to_string((i + 1) % o.n)});
        b.complex = Complex::from_maximal_faces(edges);
    } else if (kind == "an-building" || kind == "an-opposition") {
        if (o.dim < 2) throw DomainError("--dim (ambient dimension) must be at least 2");
        auto F = field_of_order(o.q);
        Geometry g = kind == "an-building" ? an_building(F, o.dim, caps) : opposition_an(F, o.dim, standard_constraints(*F, o.dim, o.dim - 1, o.flag), caps);
        b.metadata["field"] = F->describe();
        b.metadata["ambient"] = o.dim;
        if (kind == "an-opposition") {
            const auto check = class_ca_check(*F, o.dim, *g.constraints);
            b.metadata["class_check"] = {{"holds", check.holds}, {"required", check.required}, {"field_size", check.field_size}, {"detail", check.detail}};
        }
        b.metadata["subspace_dimensions"] = subspace_dimensions(g);
        b.complex = g.complex;
        b.geometry = std::make_shared<const Geometry>(std::move(g));
    } else if (kind == "cn-building" || kind == "cn-opposition") {
        const Form form = make_form(o);
        Geometry g = kind == "cn-building" ? cn_building(form, caps)
                                           : opposition_cn(form, perp_closure(form, standard_constraints(form.field(), form.ambient(), o.witt, o.flag)), caps);
        b.metadata["field"] = form.field().describe();
        b.metadata["form"] = o.form;
        b.metadata["witt"] = o.witt;
        if (kind == "cn-opposition") {
            const auto check = class_cc_check(form, *g.constraints);
            b.metadata["class_check"] = {{"applicable", check.applicable}, {"holds", check.holds}, {"required", check.required}, {"field_size", check.field_size}, {"detail", check.detail}};
        }
        b.metadata["subspace_dimensions"] = subspace_dimensions(g);
        b.complex = g.complex;
        b.geometry = std::make_shared<const Geometry>(std::move(g));
    } else if (kind == "dn-oriflamme") {
        Options hyperbolic = o;
        hyperbolic.form = "hyperbolic";
        const Form form = make_form(hyperbolic);
        Oriflamme ori = o.flag.empty() ? dn_oriflamme(form, caps)
                                       : opposition_dn(form, perp_closure(form, standard_constraints(form.field(), form.ambient(), o.witt, o.flag)), caps);
        b.metadata["field"] = form.field().describe();
        b.metadata["witt"] = o.witt;
        b.metadata["subdivided"] = {{"complex", io::complex_to_json(ori.t.complex)}, {"summary", describe_complex(ori.t.complex)}};
        b.metadata["subdivision_check"] = check_subdivision(ori.t.complex, ori.tilde, ori.pairing);
        b.metadata["family"] = ori.family;
        b.complex = ori.tilde;
        b.oriflamme = std::move(ori);
    } else if (kind == "unipotent-opposition") {
        if (o.rank < 1) throw DomainError("--rank must be at least 1");
        auto cc = unipotent_opposition(field_of_order(o.q), o.rank, caps);
        b.metadata["coset"] = coset_metadata(cc);
        b.complex = cc.complex;
        b.coset = std::move(cc);
    } else if (kind == "kms-sl") {
        auto F = field_of_order(o.q);
        Polynomial f;
        for (auto c : parse_int_list(o.poly.empty() ? "1,1,1" : o.poly, "polynomial coefficients")) {
            if (c < 0 || c >= F->size()) throw DomainError("polynomial coefficient " + std::to_string(c) + " is not an element of " + F->describe());
            f.push_back(static_cast<FieldElement>(c));
        }
        auto ex = kms_sl_example(o.n, F, f, caps);
        Json local = Json::array();
        for (std::size_t i = 0; i < ex.local_sets.size(); ++i)
            local.push_back({{"set", ex.local_sets[i]}, {"source_order", ex.source_orders[i]}, {"image_order", ex.image_orders[i]}});
        b.metadata["coset"] = coset_metadata(ex.cc);
        b.metadata["extension"] = ex.extension->describe();
        b.metadata["local_groups"] = local;
        b.metadata["injective"] = ex.injective;
        b.metadata["intersections_preserved"] = ex.intersections_preserved;
        b.metadata["notes"] = ex.notes;
        b.complex = ex.cc.complex;
        b.coset = std::move(ex.cc);
    } else if (kind == "coset") {
        if (o.spec.empty()) throw DomainError("--spec is required for kind coset");
        const Json s = io::read_file(o.spec);
        try {
            auto F = field_of_order(s.at("q").get<int>());
            const int degree = s.at("degree").get<int>();
            std::vector<FqMatrix> gens;
            for (const auto& m : s.at("generators")) gens.push_back(matrix_from_json(m, *F, degree));
            auto group = std::make_shared<const MatrixGroup>(MatrixGroup::generate(F, degree, gens, caps));
            std::vector<MatrixGroup> subs;
            for (const auto& h : s.at("subgroups")) {
                std::vector<FqMatrix> hg;
                for (const auto& m : h) hg.push_back(matrix_from_json(m, *F, degree));
                subs.push_back(MatrixGroup::generate(F, degree, hg, caps));
            }
            auto cc = coset_complex(group, std::move(subs), caps);
            b.metadata["coset"] = coset_metadata(cc);
            b.complex = cc.complex;
            b.coset = std::move(cc);
        } catch (const Json::exception& e) {
            throw MalformedInput(std::string("coset spec: ") + e.what());
        }
    } else {
        throw DomainError("unknown kind '" + kind + "'");
    }
    b.metadata["summary"] = describe_complex(b.complex);
    return b;
}

Built load(const Options& o, const Caps& caps) {
    if (!o.in.empty() && !o.kind.empty()) throw DomainError("give either --in or --kind, not both");
    if (!o.kind.empty()) return build(o, caps);
    if (o.in.empty()) throw DomainError("an input complex is required (--in FILE or --kind ...)");
    const Json j = io::read_file(o.in);
    Built b;
    b.complex = io::complex_from_json(j.contains("complex") ? j.at("complex") : j);
    if (j.contains("metadata")) b.metadata = j.at("metadata");
    b.metadata["summary"] = describe_complex(b.complex);
    return b;
}

Vertex resolve_apex(const Complex& X, const std::string& text, Vertex fallback) {
    if (text.empty()) return fallback;
    if (auto v = X.find_vertex(text)) return *v;
    try {
        std::size_t used = 0;
        const long idx = std::stol(text, &used);
        if (used == text.size() && idx >= 0 && static_cast<std::size_t>(idx) < X.num_vertices()) return static_cast<Vertex>(idx);
    } catch (const std::logic_error&) {
    }
    throw DomainError("apex '" + text + "' is neither a vertex label nor an index");
}

std::optional<Vertex> cone_point(const Complex& X) {
    for (Vertex v = 0; v < static_cast<Vertex>(X.num_vertices()); ++v)
        if (X.maximal_faces_of(v).size() == X.maximal_faces().size()) return v;
    return std::nullopt;
}

// Cheapest constructor that applies: apex-star, then graph BFS, then the linear solver.
ConeFunction auto_cone(const Complex& X, int k, const Caps& caps, std::string& method) {
    if (k < 0) {
        method = "point";
        return ConeFunction(0, -1);
    }
    if (auto v = cone_point(X)) {
        method = "apex";
        return apex_star_cone(X, *v, k);
    }
    if (k == 0 && is_connected(X)) {
        method = "bfs";
        return graph_bfs_cone(X, 0);
    }
    method = "solve";
    return solve_cone_linear(X, k, 0, caps);
}

int default_degree(const Options& o, const Complex& X) { return o.k == INT_MIN ? X.dimension() - 1 : o.k; }

struct ConeRun {
    GroupCone cone;
    Complex complex;
    std::string method;
    std::vector<std::int64_t> bound;  // per degree j = -1..k, empty when the constructor has none
    Json ledgers = Json::array();
    Json extra = Json::object();
};

ConeRun make_cone(const Options& o, const Caps& caps) {
    ConeRun r;
    const std::string& m = o.method;
    auto single = [&](ConeFunction c) { r.cone = GroupCone{CoefficientGroup::integers(), {std::move(c)}}; };

    if (m == "transport") {
        if (o.cone.empty()) throw DomainError("transport needs --cone with an integral cone file");
        const Json cj = io::read_file(o.cone);
        Options in = o;
        if (in.in.empty() && in.kind.empty()) {
            if (!cj.contains("complex")) throw DomainError("the cone file carries no complex; pass --in");
            r.complex = io::complex_from_json(cj.at("complex"));
        } else {
            r.complex = load(in, caps).complex;
        }
        const GroupCone integral = io::cone_from_json(cj);
        if (integral.components.size() != 1 || integral.group.moduli[0] != 0) throw DomainError("transport starts from a single integral cone");
        const auto group = CoefficientGroup::parse(o.coeff.empty() ? "Z/2" : o.coeff);
        r.cone = transport_coefficients(integral.components[0], group);
        r.method = "transport";
        r.bound = radius_profile(integral.components[0]).values;
        r.extra["support_contained"] = transport_support_contained(r.cone, integral.components[0]);
        return r;
    }

    if (m == "filtration") {
        const Built b = load(o, caps);
        if (!b.geometry) throw DomainError("filtration needs a geometry: use --kind an-building|an-opposition|cn-building|cn-opposition");
        const ProvidedCone p = geometry_cone(*b.geometry, caps);
        r.complex = b.complex;
        single(p.cone);
        r.method = "filtration/" + p.method;
        for (const auto& l : p.ledgers) r.ledgers.push_back(io::ledger_to_json(l));
        std::size_t violations = 0;
        for (const auto& l : p.ledgers) violations += l.violations();
        r.extra["ledger_violations"] = violations;
        r.extra["fallback"] = p.fallback;
        return r;
    }

    if (m == "subdivision") {
        Options d = o;
        if (d.kind.empty()) d.kind = "dn-oriflamme";
        const Built b = build(d, caps);
        if (!b.oriflamme) throw DomainError("subdivision needs --kind dn-oriflamme");
        const Complex& t = b.oriflamme->t.complex;
        std::string inner;
        const ConeFunction c = auto_cone(t, t.dimension() - 1, caps, inner);
        const auto ver = verify_cone(c, t);
        if (!ver) throw DomainError("cone on the subdivided complex failed: " + ver.message);
        single(subdivision_transport(c, t, b.oriflamme->tilde, b.oriflamme->pairing));
        r.complex = b.complex;
        r.method = "subdivision";
        const auto rc = radius_profile(c);
        r.bound.assign(rc.values.size(), 2 * rc.max());
        r.bound[0] = 1;
        r.extra["subdivided_radius"] = io::radius_to_json(rc);
        r.extra["subdivided_method"] = inner;
        return r;
    }

    if (m == "join") {
        if (o.with.empty()) throw DomainError("join needs --with SECOND.json");
        const Built y1 = load(o, caps);
        Options second = o;
        second.kind.clear();
        second.in = o.with;
        const Built y2 = load(second, caps);
        std::string m1, m2;
        const ConeFunction c1 = auto_cone(y1.complex, y1.complex.dimension() - 1, caps, m1);
        const ConeFunction c2 = auto_cone(y2.complex, y2.complex.dimension() - 1, caps, m2);
        JoinCone jc = join_cone(y1.complex, c1, y2.complex, c2);
        r.complex = jc.complex;
        single(jc.cone);
        r.method = "join(" + m1 + "," + m2 + ")";
        r.bound = join_radius_bound(radius_profile(c1), radius_profile(c2), y1.complex.dimension(), jc.cone.degree());
        return r;
    }

    const Built b = load(o, caps);
    r.complex = b.complex;
    const Complex& X = r.complex;
    const int k = default_degree(o, X);
    if (m == "apex") {
        const auto point = cone_point(X);
        const Vertex v = resolve_apex(X, o.apex, point.value_or(0));
        single(apex_star_cone(X, v, k));
        r.method = "apex";
        r.bound.assign(static_cast<std::size_t>(k + 2), 1);
    } else if (m == "bfs") {
        single(graph_bfs_cone(X, resolve_apex(X, o.apex, 0)));
        r.method = "bfs";
    } else if (m == "solve") {
        single(solve_cone_linear(X, k, resolve_apex(X, o.apex, 0), caps));
        r.method = "solve";
    } else if (m == "extend") {
        const auto base_labels = parse_label_list(o.base);
        const auto add_labels = parse_label_list(o.add);
        if (base_labels.empty() || add_labels.empty()) throw DomainError("extend needs --base and --add label lists");
        std::vector<bool> base(X.num_vertices(), false);
        for (const auto& l : base_labels) base[static_cast<std::size_t>(X.vertex(l))] = true;
        const Complex sub = full_subcomplex(X, base_labels);
        std::string base_method;
        const ConeFunction base_cone = auto_cone(sub, k, caps, base_method).mapped(embed_by_labels(sub, X));
        std::map<Vertex, ConeFunction> links;
        std::vector<Vertex> added;
        RadiusProfile link_radius;
        link_radius.values.assign(static_cast<std::size_t>(k + 1), 0);
        Json link_methods = Json::object();
        for (const auto& l : add_labels) {
            const Vertex w = X.vertex(l);
            added.push_back(w);
            const Complex lk = relative_link(X, w, base);
            if (lk.num_vertices() == 0) throw DomainError("vertex " + l + " has an empty link in the base");
            std::string lm;
            ConeFunction c = auto_cone(lk, k - 1, caps, lm);
            if (k - 1 < 0) c = ConeFunction(0, -1);
            const auto rp = radius_profile(c);
            for (std::size_t i = 0; i < link_radius.values.size() && i < rp.values.size(); ++i)
                link_radius.values[i] = std::max(link_radius.values[i], rp.values[i]);
            links.emplace(w, c.mapped(embed_by_labels(lk, X)));
            link_methods[l] = lm;
        }
        single(extend_by_vertex_set(X, base, base_cone, added, links));
        r.method = "extend";
        r.bound = extension_radius_bound(radius_profile(base_cone), link_radius, k);
        r.extra["base_method"] = base_method;
        r.extra["link_methods"] = link_methods;
    } else {
        throw DomainError("unknown cone method '" + m + "'");
    }
    return r;
}

Json cone_document(const ConeRun& r, const ConeVerdict& verdict, const RadiusProfile& radius, bool within) {
    Json doc = io::cone_to_json(r.cone);
    doc["method"] = r.method;
    doc["verification"] = {{"ok", verdict.ok}, {"message", verdict.message}};
    doc["radius"] = io::radius_to_json(radius);
    if (!r.bound.empty()) {
        Json b = Json::object();
        for (std::size_t i = 0; i < r.bound.size(); ++i) b[std::to_string(static_cast<int>(i) - 1)] = r.bound[i];
        doc["radius_bound"] = b;
    }
    doc["within_bound"] = within;
    doc["ledgers"] = r.ledgers;
    doc["complex"] = io::complex_to_json(r.complex);
    for (const auto& [key, value] : r.extra.items()) doc[key] = value;
    return doc;
}

bool radius_within(const RadiusProfile& radius, const std::vector<std::int64_t>& bound) {
    for (std::size_t i = 0; i < bound.size() && i < radius.values.size(); ++i)
        if (radius.values[i] > bound[i]) return false;
    return true;
}

void emit(const Options& o, std::ostream& out, const Json& doc, const std::vector<std::string>& lines) {
    if (!o.out.empty()) io::write_file(o.out, doc);
    if (o.json) {
        out << io::dump(doc);
        return;
    }
    for (const auto& l : lines) out << l << "\n";
    if (!o.out.empty()) out << "wrote " << o.out << "\n";
}

std::string radius_line(const RadiusProfile& r) {
    std::string s = "radius:";
    for (int j = -1; j <= r.top(); ++j) s += " Rad_" + std::to_string(j) + "=" + std::to_string(r.at(j));
    return s;
}

std::string summary_line(const Complex& X) {
    std::string s = "dimension " + std::to_string(X.dimension()) + ", f-vector (";
    for (int k = 0; k <= X.dimension(); ++k) s += (k ? ", " : "") + std::to_string(X.count(k));
    return s + ")" + (X.is_pure() ? ", pure" : ", not pure") + (is_connected(X) ? ", connected" : ", disconnected");
}

Json rational_or_null(const std::optional<Rational>& r) { return r ? Json(io::rational_string(*r)) : Json(nullptr); }

Json labelled_cochain(const Complex& X, const Cochain& c) {
    Json entries = Json::array();
    for (const auto& [f, coeff] : c.terms()) entries.push_back({{"simplex", face_labels(X, f)}, {"coeff", coeff}});
    return {{"degree", c.degree()}, {"entries", entries}};
}

// ---------------------------------------------------------------------------------------------
// commands

int cmd_build(const Options& o, const Caps& caps, std::ostream& out) {
    const Built b = build(o, caps);
    const Json doc{{"complex", io::complex_to_json(b.complex)}, {"metadata", b.metadata}};
    emit(o, out, doc, {o.kind + ": " + std::to_string(b.complex.num_vertices()) + " vertices, " + summary_line(b.complex)});
    return kOk;
}

int cmd_cone(const Options& o, const Caps& caps, std::ostream& out, std::ostream& err) {
    ConeRun r;
    try {
        r = make_cone(o, caps);
    } catch (const NoConeError& e) {
        Options in = o;
        Json diagnostic{{"error", "no-cone"}, {"degree", e.degree()}, {"message", e.what()}};
        try {
            const Complex X = load(in, caps).complex;
            diagnostic["homology"] = homology_json(X, caps);
        } catch (const Error&) {
        }
        if (o.json) out << io::dump(diagnostic);
        err << e.what() << "\n";
        if (diagnostic.contains("homology") && diagnostic["homology"].is_array())
            for (const auto& h : diagnostic["homology"])
                if (h["rank"].get<std::int64_t>() > 0 || !h["torsion"].empty())
                    err << "  reduced H_" << h["degree"].get<int>() << " = " << h["group"].get<std::string>() << "\n";
        return kNoCone;
    }
    const auto verdict = verify_cone(r.cone, r.complex);
    const auto radius = radius_profile(r.cone);
    bool within = radius_within(radius, r.bound);
    if (r.extra.contains("ledger_violations") && r.extra["ledger_violations"].get<std::size_t>() > 0) within = false;
    if (r.extra.contains("support_contained") && !r.extra["support_contained"].get<bool>()) within = false;
    const Json doc = cone_document(r, verdict, radius, within);
    std::vector<std::string> lines{"method " + r.method + " on " + summary_line(r.complex), std::string("verification: ") + (verdict.ok ? "ok" : "FAILED " + verdict.message),
                                   radius_line(radius), std::string("within constructor bound: ") + (within ? "yes" : "no")};
    emit(o, out, doc, lines);
    return verdict.ok && within ? kOk : kCheckFailed;
}

int cmd_verify(const Options& o, const Caps& caps, std::ostream& out) {
    if (o.cone.empty()) throw DomainError("verify-cone needs --cone FILE");
    const Json cj = io::read_file(o.cone);
    Complex X;
    if (!o.in.empty() || !o.kind.empty()) X = load(o, caps).complex;
    else if (cj.contains("complex")) X = io::complex_from_json(cj.at("complex"));
    else throw DomainError("no complex given and the cone file carries none");
    const GroupCone c = io::cone_from_json(cj);
    const auto verdict = verify_cone(c, X);
    const auto radius = radius_profile(c);
    Json doc{{"ok", verdict.ok}, {"message", verdict.message}, {"radius", io::radius_to_json(radius)}, {"coeff", c.group.describe()}};
    if (verdict.generator) doc["generator"] = face_labels(X, *verdict.generator);
    Options quiet = o;
    quiet.out.clear();
    emit(quiet, out, doc, {std::string("verification: ") + (verdict.ok ? "ok" : "FAILED " + verdict.message), radius_line(radius)});
    return verdict.ok ? kOk : kCheckFailed;
}

Json spectral_json(const Complex& X, const SpectralReport& rep) {
    Json links = Json::array();
    for (const auto& l : rep.links)
        links.push_back({{"face", face_labels(X, l.face)}, {"vertices", l.vertices}, {"second_eigenvalue", l.spectrum.value}, {"error", l.spectrum.error},
                         {"connected", l.spectrum.connected}, {"method", l.spectrum.method}});
    return {{"links", links}, {"lambda", rep.lambda}, {"all_connected", rep.all_connected},
            {"verdict", rep.all_connected ? "lambda-local spectral expander with lambda = " + std::to_string(rep.lambda) : "some link is disconnected"}};
}

struct BoundRow {
    Json json;
    bool violated = false;
};

std::optional<bool> known_transitivity(const Built& b, const std::string& flag) {
    if (flag == "yes") return true;
    if (flag == "no") return false;
    if (flag != "auto") throw DomainError("--transitive must be yes, no or auto");
    if (b.coset) return facet_transitivity(*b.coset).holds;
    return std::nullopt;
}

std::vector<BoundRow> bound_rows(const Built& b, std::int64_t radius, const std::vector<int>& degrees, std::int64_t modulus, const Caps& caps, const std::string& flag) {
    const auto transitive = known_transitivity(b, flag);
    std::vector<BoundRow> rows;
    for (int k : degrees) {
        std::optional<Rational> measured;
        std::string note;
        try {
            measured = coboundary_constant(b.complex, k, modulus, caps).value;
        } catch (const ResourceError& e) {
            note = e.what();
        }
        const auto c = cone_bound_check(b.complex, radius, k, transitive.value_or(false), measured);
        BoundRow row;
        row.json = {{"k", k}, {"radius", radius}, {"bound", io::rational_string(c.bound)}, {"measured", rational_or_null(c.measured)}, {"verdict", to_string(c.verdict)},
                    {"transitivity", transitive ? (*transitive ? "holds" : "fails") : "unknown"}};
        if (!note.empty()) row.json["note"] = note;
        row.violated = c.verdict == BoundVerdict::Violated;
        rows.push_back(std::move(row));
    }
    return rows;
}

int cmd_expansion(const Options& o, const Caps& caps, std::ostream& out) {
    const Built b = load(o, caps);
    const Complex& X = b.complex;
    const std::int64_t modulus = parse_modulus(o.coeff);
    const std::string mode = o.mode.empty() ? "spectral" : o.mode;
    if (mode == "spectral") {
        const auto rep = local_spectral_profile(X, caps, o.threads);
        const Json doc = spectral_json(X, rep);
        emit(o, out, doc, {"links evaluated: " + std::to_string(rep.links.size()), "lambda = " + std::to_string(rep.lambda) + (rep.all_connected ? "" : " (some link disconnected)")});
        return kOk;
    }
    if (mode == "coboundary") {
        const int k = o.k == INT_MIN ? 0 : o.k;
        const auto r = brute_force_expansion(X, k, modulus, caps);
        const bool nonzero = reduced_cohomology_nonzero(reduced_homology_ranks(X), k, modulus);
        const bool vanishes = r.coboundary.value && *r.coboundary.value == Rational(0);
        Json doc{{"k", k},
                 {"coeff", describe_modulus(modulus)},
                 {"h_cb", rational_or_null(r.coboundary.value)},
                 {"h_cs", rational_or_null(r.cosystolic.value)},
                 {"systole", rational_or_null(r.systole.value)},
                 {"configurations", r.configurations},
                 {"boundaries", r.boundaries},
                 {"cocycles", r.cocycles},
                 {"cohomology_nonzero", nonzero},
                 {"consistent_with_homology", vanishes == nonzero}};
        if (r.coboundary.value) doc["witness_cb"] = labelled_cochain(X, r.coboundary.witness);
        if (r.cosystolic.value) doc["witness_cs"] = labelled_cochain(X, r.cosystolic.witness);
        if (r.systole.value) doc["witness_systole"] = labelled_cochain(X, r.systole.witness);
        emit(o, out, doc,
             {"h^" + std::to_string(k) + "_cb = " + (r.coboundary.value ? io::rational_string(*r.coboundary.value) : "none (empty quotient)"),
              "h^" + std::to_string(k) + "_cs = " + (r.cosystolic.value ? io::rational_string(*r.cosystolic.value) : "none (empty quotient)"),
              "systole = " + (r.systole.value ? io::rational_string(*r.systole.value) : "none"), std::string("H^k nonzero: ") + (nonzero ? "yes" : "no")});
        return vanishes == nonzero ? kOk : kCheckFailed;
    }
    if (mode == "bound") {
        if (o.cone.empty()) throw DomainError("bound mode needs --cone FILE");
        const GroupCone c = io::cone_from_json(io::read_file(o.cone));
        const auto verdict = verify_cone(c, X);
        if (!verdict) throw DomainError("the cone does not verify on this complex: " + verdict.message);
        const auto profile = radius_profile(c);
        std::int64_t radius = 0;
        for (int j = 0; j <= X.dimension() - 1; ++j) radius = std::max(radius, profile.at(j));
        std::vector<int> degrees;
        if (o.k != INT_MIN) degrees.push_back(o.k);
        else
            for (int k = 0; k <= X.dimension() - 1; ++k) degrees.push_back(k);
        const auto rows = bound_rows(b, radius, degrees, modulus, caps, o.transitive);
        Json arr = Json::array();
        std::vector<std::string> lines;
        bool violated = false;
        for (const auto& row : rows) {
            arr.push_back(row.json);
            violated = violated || row.violated;
            lines.push_back("k=" + std::to_string(row.json["k"].get<int>()) + ": bound " + row.json["bound"].get<std::string>() + ", measured " +
                            (row.json["measured"].is_null() ? std::string("n/a") : row.json["measured"].get<std::string>()) + ", " + row.json["verdict"].get<std::string>());
        }
        emit(o, out, {{"coeff", describe_modulus(modulus)}, {"rows", arr}}, lines);
        return violated ? kCheckFailed : kOk;
    }
    if (mode == "local-to-global") {
        const auto r = local_to_global_report(X, modulus, caps, o.threads);
        Json doc{{"dimension", r.dimension},
                 {"applicable", r.applicable},
                 {"lambda", r.lambda},
                 {"spectral_connected", r.spectral_connected},
                 {"link_coboundary_min", rational_or_null(r.link_coboundary_min)},
                 {"links_evaluated", r.links_evaluated},
                 {"links_skipped", r.links_skipped},
                 {"conclusion", r.conclusion}};
        emit(o, out, doc, {r.conclusion});
        return kOk;
    }
    throw DomainError("--mode must be spectral, coboundary, bound or local-to-global");
}

int cmd_report(const Options& o, const Caps& caps, std::ostream& out) {
    const Built b = load(o, caps);
    const Complex& X = b.complex;
    const std::int64_t modulus = parse_modulus(o.coeff);
    Json doc{{"summary", describe_complex(X)}, {"metadata", b.metadata}, {"homology", homology_json(X, caps)}};
    std::vector<std::string> lines{summary_line(X)};

    if (X.is_pure() && X.dimension() >= 1) {
        const auto rep = local_spectral_profile(X, caps, o.threads);
        double top = 0;
        for (const auto& l : rep.links)
            if (l.face.empty()) top = l.spectrum.value;
        doc["spectral"] = {{"lambda", rep.lambda}, {"links", rep.links.size()}, {"all_connected", rep.all_connected}, {"global_second_eigenvalue", top}};
        lines.push_back("lambda = " + std::to_string(rep.lambda) + " over " + std::to_string(rep.links.size()) + " links");
    }

    if (b.coset) {
        const auto t = facet_transitivity(*b.coset);
        doc["facet_transitivity"] = {{"holds", t.holds}, {"facets", t.facets}, {"orbit", t.orbit}, {"detail", t.detail}};
        std::size_t passed = 0;
        for (Vertex v = 0; v < static_cast<Vertex>(X.num_vertices()); ++v)
            if (link_identification(*b.coset, {v}, caps).holds) ++passed;
        doc["vertex_links_identified"] = {{"passed", passed}, {"total", X.num_vertices()}};
        lines.push_back("facet transitivity: " + std::string(t.holds ? "holds" : "fails") + "; vertex links identified " + std::to_string(passed) + "/" +
                        std::to_string(X.num_vertices()));
    }
    if (b.metadata.value("kind", "") == "kms-sl")
        doc["threshold_note"] = "q is below the field-size threshold of the local spectral theorem; this report verifies the construction only";

    if (X.is_pure() && X.dimension() >= 1) {
        try {
            std::optional<ProvidedCone> provided;
            ConeFunction cone;
            std::string method;
            if (b.geometry) {
                provided = geometry_cone(*b.geometry, caps);
                cone = provided->cone;
                method = "filtration/" + provided->method;
            } else {
                cone = auto_cone(X, X.dimension() - 1, caps, method);
            }
            const auto verdict = verify_cone(cone, X);
            const auto profile = radius_profile(cone);
            Json cj{{"method", method}, {"verified", verdict.ok}, {"radius", io::radius_to_json(profile)}};
            if (provided) {
                std::size_t violations = 0;
                for (const auto& l : provided->ledgers) violations += l.violations();
                cj["ledger_violations"] = violations;
            }
            doc["cone"] = cj;
            lines.push_back("cone (" + method + "): " + (verdict.ok ? "verified, " : "FAILED, ") + radius_line(profile));
            if (verdict.ok) {
                std::vector<int> degrees;
                for (int k = 0; k <= X.dimension() - 1; ++k) degrees.push_back(k);
                std::int64_t radius = 0;
                for (int j = 0; j <= X.dimension() - 1; ++j) radius = std::max(radius, profile.at(j));
                Json arr = Json::array();
                for (const auto& row : bound_rows(b, radius, degrees, modulus, caps, o.transitive)) {
                    arr.push_back(row.json);
                    lines.push_back("bound k=" + std::to_string(row.json["k"].get<int>()) + ": " + row.json["bound"].get<std::string>() + " (" +
                                    row.json["verdict"].get<std::string>() + ")");
                }
                doc["bounds"] = arr;
            }
        } catch (const NoConeError& e) {
            doc["cone"] = {{"error", "no-cone"}, {"degree", e.degree()}, {"message", e.what()}};
            lines.push_back(std::string("no cone: ") + e.what());
        } catch (const ResourceError& e) {
            doc["cone"] = {{"error", "resource"}, {"message", e.what()}};
            lines.push_back(std::string("cone skipped: ") + e.what());
        }
    }
    emit(o, out, doc, lines);
    return kOk;
}

void add_build_options(CLI::App* sub, Options& o) {
    sub->add_option("--kind", o.kind, "simplex|octahedron|cycle|an-building|an-opposition|cn-building|cn-opposition|dn-oriflamme|coset|kms-sl|unipotent-opposition");
    sub->add_option("--q", o.q, "field size (prime power up to 256)");
    sub->add_option("--dim", o.dim, "simplex dimension, or ambient dimension for type A");
    sub->add_option("--witt", o.witt, "Witt index for types C and D");
    sub->add_option("--n", o.n, "rank parameter n for kms-sl, length for cycle");
    sub->add_option("--rank", o.rank, "rank for unipotent-opposition");
    sub->add_option("--form", o.form, "hyperbolic|parabolic (type C)");
    sub->add_option("--flag", o.flag, "'full' or comma-separated dimensions of the standard flag");
    sub->add_option("--f", o.poly, "polynomial coefficients low-to-high over F_q (kms-sl)");
    sub->add_option("--spec", o.spec, "JSON group description (kind coset)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const std::string& caps_env) {
    Options o;
    CLI::App app{"hdx: simplicial complexes, cone functions and expansion"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--caps", o.caps, "cap overrides key=value,... (group, subspaces, configs, solver, iso, jacobi)");
    app.add_option("--threads", o.threads, "worker threads for per-link jobs")->check(CLI::Range(1u, 256u));
    app.add_flag("--json", o.json, "print only JSON on stdout");

    auto* build_cmd = app.add_subcommand("build", "build a complex and write it as JSON");
    add_build_options(build_cmd, o);
    build_cmd->add_option("--out", o.out, "output file");

    auto* cone_cmd = app.add_subcommand("cone", "construct and verify a cone function");
    add_build_options(cone_cmd, o);
    cone_cmd->add_option("--in", o.in, "complex JSON");
    cone_cmd->add_option("--method", o.method, "apex|bfs|join|extend|filtration|solve|transport|subdivision")->required();
    cone_cmd->add_option("--apex", o.apex, "apex vertex (label or index)");
    cone_cmd->add_option("--k", o.k, "cone degree (default dim - 1)");
    cone_cmd->add_option("--with", o.with, "second factor for join");
    cone_cmd->add_option("--base", o.base, "base vertex labels for extend");
    cone_cmd->add_option("--add", o.add, "added vertex labels for extend");
    cone_cmd->add_option("--cone", o.cone, "integral cone file for transport");
    cone_cmd->add_option("--coeff", o.coeff, "target group for transport, e.g. Z/2+Z");
    cone_cmd->add_option("--out", o.out, "output cone file");

    auto* verify_cmd = app.add_subcommand("verify-cone", "check the cone equations of a cone file");
    add_build_options(verify_cmd, o);
    verify_cmd->add_option("--in", o.in, "complex JSON (defaults to the complex stored in the cone file)");
    verify_cmd->add_option("--cone", o.cone, "cone file")->required();

    auto* exp_cmd = app.add_subcommand("expansion", "spectral, coboundary and bound reports");
    add_build_options(exp_cmd, o);
    exp_cmd->add_option("--in", o.in, "complex JSON");
    exp_cmd->add_option("--mode", o.mode, "spectral|coboundary|bound|local-to-global");
    exp_cmd->add_option("--k", o.k, "cochain degree");
    exp_cmd->add_option("--coeff", o.coeff, "modulus m of Z/m (default 2)");
    exp_cmd->add_option("--cone", o.cone, "cone file for bound mode");
    exp_cmd->add_option("--transitive", o.transitive, "yes|no|auto: facet transitivity for bound mode");
    exp_cmd->add_option("--out", o.out, "output report file");

    auto* report_cmd = app.add_subcommand("report", "summary report: homology, spectra, cone, bounds");
    add_build_options(report_cmd, o);
    report_cmd->add_option("--in", o.in, "complex JSON");
    report_cmd->add_option("--coeff", o.coeff, "modulus m of Z/m (default 2)");
    report_cmd->add_option("--transitive", o.transitive, "yes|no|auto");
    report_cmd->add_option("--out", o.out, "output report file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "hdx: " << e.what() << "\n";
        return kBadArguments;
    }

    try {
        Caps caps = Caps::parse(caps_env);
        if (!o.caps.empty()) caps = Caps::parse(o.caps, caps);
        if (*build_cmd) {
            if (o.kind.empty()) throw DomainError("build needs --kind");
            return cmd_build(o, caps, out);
        }
        if (*cone_cmd) return cmd_cone(o, caps, out, err);
        if (*verify_cmd) return cmd_verify(o, caps, out);
        if (*exp_cmd) return cmd_expansion(o, caps, out);
        if (*report_cmd) return cmd_report(o, caps, out);
    } catch (const ResourceError& e) {
        err << "hdx: resource cap: " << e.what() << "\n";
        return kResourceCap;
    } catch (const NoConeError& e) {
        err << "hdx: no cone: " << e.what() << "\n";
        return kNoCone;
    } catch (const Error& e) {
        err << "hdx: " << e.what() << "\n";
        return kBadArguments;
    } catch (const std::exception& e) {
        err << "hdx: internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kBadArguments;
}

}  // namespace hdx::cli
