#include "hdx/buildings.hpp"

#include "hdx/errors.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace hdx {

Complex clique_complex(const std::vector<std::string>& labels, const std::vector<std::vector<Vertex>>& adjacency) {
    const auto n = labels.size();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t v = 0; v < n; ++v)
        for (Vertex u : adjacency[v]) adj[v][static_cast<std::size_t>(u)] = true;
    std::vector<Face> cliques;
    std::function<void(Face&, std::vector<Vertex>, std::vector<Vertex>)> expand = [&](Face& r, std::vector<Vertex> p, std::vector<Vertex> x) {
        if (p.empty() && x.empty()) {
            cliques.push_back(r);
            return;
        }
        Vertex pivot = !p.empty() ? p.front() : x.front();
        std::size_t best = 0;
        for (const auto* set : {&p, &x})
            for (Vertex u : *set) {
                std::size_t c = 0;
                for (Vertex v : p) c += adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] ? 1 : 0;
                if (c >= best) {
                    best = c;
                    pivot = u;
                }
            }
        std::vector<Vertex> candidates;
        for (Vertex v : p)
            if (!adj[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(v)]) candidates.push_back(v);
        for (Vertex v : candidates) {
            std::vector<Vertex> p2, x2;
            for (Vertex u : p)
                if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) p2.push_back(u);
            for (Vertex u : x)
                if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) x2.push_back(u);
            r.push_back(v);
            expand(r, std::move(p2), std::move(x2));
            r.pop_back();
            p.erase(std::find(p.begin(), p.end(), v));
            x.push_back(v);
        }
    };
    std::vector<Vertex> all(n);
    for (std::size_t v = 0; v < n; ++v) all[v] = static_cast<Vertex>(v);
    Face r;
    expand(r, all, {});
    for (auto& c : cliques) std::sort(c.begin(), c.end());
    return Complex::from_index_faces(labels, cliques);
}

Geometry flag_geometry(std::shared_ptr<const Field> field, int ambient, std::optional<Form> form, std::vector<Subspace> vertices) {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    const auto n = vertices.size();
    std::vector<std::string> labels;
    labels.reserve(n);
    for (const auto& u : vertices) labels.push_back(u.key());
    std::vector<std::vector<Vertex>> adjacency(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            if (vertices[a].dim() == vertices[b].dim()) continue;
            if (vertices[b].contains(*field, vertices[a])) {
                adjacency[a].push_back(static_cast<Vertex>(b));
                adjacency[b].push_back(static_cast<Vertex>(a));
            }
        }
    Geometry g;
    g.field = std::move(field);
    g.ambient = ambient;
    g.form = std::move(form);
    g.subspaces = std::move(vertices);
    g.complex = clique_complex(labels, adjacency);
    return g;
}

std::vector<Subspace> proper_subspaces(const Field& F, int ambient, const Caps& caps) {
    std::uint64_t total = 0;
    for (int d = 1; d < ambient; ++d) total += gaussian_binomial(F.size(), ambient, d);
    if (total > caps.subspace_count) throw ResourceError("proper subspaces of F^" + std::to_string(ambient) + " exceed the subspace cap");
    std::vector<Subspace> out;
    for (int d = 1; d < ambient; ++d) {
        auto level = enumerate_subspaces(F, ambient, d, caps);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

std::vector<Subspace> isotropic_subspaces(const Form& form, const Caps& caps) {
    std::vector<Subspace> out;
    const int w = form.witt_index();
    for (int d = 1; d <= w; ++d) {
        auto level = form.isotropic_subspaces(d, caps);
        out.insert(out.end(), level.begin(), level.end());
        if (out.size() > caps.subspace_count) throw ResourceError("isotropic subspaces exceed the subspace cap");
    }
    return out;
}

namespace {

void check_constraints(int ambient, const std::vector<Subspace>& constraints) {
    for (const auto& e : constraints)
        if (e.ambient() != ambient) throw DomainError("constraint subspace lives in a different ambient space");
}

bool transversal_to_all(const Field& F, const Subspace& u, const std::vector<Subspace>& constraints) {
    return std::all_of(constraints.begin(), constraints.end(), [&](const Subspace& e) { return is_transversal(F, u, e); });
}

void require_form(const Form& form) {
    if (!form.nondegenerate()) throw DomainError("form is degenerate");
}

}  // namespace

Geometry an_building(std::shared_ptr<const Field> field, int ambient, const Caps& caps) {
    return opposition_an(std::move(field), ambient, {}, caps);
}

Geometry opposition_an(std::shared_ptr<const Field> field, int ambient, const std::vector<Subspace>& constraints, const Caps& caps) {
    if (ambient < 2) throw DomainError("type A geometry needs ambient dimension at least 2");
    check_constraints(ambient, constraints);
    std::vector<Subspace> keep;
    for (auto& u : proper_subspaces(*field, ambient, caps))
        if (transversal_to_all(*field, u, constraints)) keep.push_back(std::move(u));
    Geometry g = flag_geometry(field, ambient, std::nullopt, std::move(keep));
    g.constraints = constraints;
    return g;
}

std::vector<Subspace> perp_closure(const Form& form, const std::vector<Subspace>& constraints) {
    std::set<Subspace> all(constraints.begin(), constraints.end());
    for (const auto& e : constraints) all.insert(form.perp(e));
    return {all.begin(), all.end()};
}

namespace {

void require_perp_closed(const Form& form, const std::vector<Subspace>& constraints) {
    std::set<Subspace> all(constraints.begin(), constraints.end());
    for (const auto& e : constraints)
        if (!all.count(form.perp(e))) throw DomainError("constraint set is not closed under perp: missing perp of " + e.key());
}

}  // namespace

Geometry cn_building(const Form& form, const Caps& caps) { return opposition_cn(form, {}, caps); }

Geometry opposition_cn(const Form& form, const std::vector<Subspace>& constraints, const Caps& caps) {
    require_form(form);
    check_constraints(form.ambient(), constraints);
    require_perp_closed(form, constraints);
    std::vector<Subspace> keep;
    for (auto& u : isotropic_subspaces(form, caps))
        if (transversal_to_all(form.field(), u, constraints)) keep.push_back(std::move(u));
    Geometry g = flag_geometry(form.field_ptr(), form.ambient(), form, std::move(keep));
    g.constraints = constraints;
    return g;
}

std::vector<Subspace> standard_flag(const Field& F, int ambient) {
    std::vector<Subspace> out;
    for (int d = 1; d < ambient; ++d) {
        FqMatrix rows = FqMatrix::Zero(d, ambient);
        for (int i = 0; i < d; ++i) rows(i, i) = 1;
        out.push_back(Subspace::span(F, ambient, rows));
    }
    return out;
}

namespace {

Oriflamme build_oriflamme(const Form& form, std::vector<Subspace> vertices, const std::vector<Subspace>& constraints) {
    const Field& F = form.field();
    const int w = form.ambient() / 2;
    Oriflamme o;
    o.t = flag_geometry(form.field_ptr(), form.ambient(), form, vertices);
    o.t.constraints = constraints;
    for (const auto& u : o.t.subspaces)
        if (u.dim() != w - 1) o.tilde_subspaces.push_back(u);
    const auto n = o.tilde_subspaces.size();
    std::vector<std::string> labels;
    for (const auto& u : o.tilde_subspaces) labels.push_back(u.key());
    std::vector<std::vector<Vertex>> adjacency(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const auto& x = o.tilde_subspaces[a];
            const auto& y = o.tilde_subspaces[b];
            bool incident = false;
            if (x.dim() != y.dim()) incident = y.contains(F, x) || x.contains(F, y);
            else if (x.dim() == w) incident = subspace_intersection(F, x, y).dim() == w - 1;
            if (incident) {
                adjacency[a].push_back(static_cast<Vertex>(b));
                adjacency[b].push_back(static_cast<Vertex>(a));
            }
        }
    o.tilde = clique_complex(labels, adjacency);
    o.family.assign(n, -1);
    const Subspace* reference = nullptr;
    for (std::size_t a = 0; a < n; ++a) {
        const auto& x = o.tilde_subspaces[a];
        if (x.dim() != w) continue;
        if (!reference) reference = &x;
        o.family[a] = (w - subspace_intersection(F, x, *reference).dim()) % 2;
    }
    std::vector<const Subspace*> maximal;
    for (const auto& u : o.t.subspaces)
        if (u.dim() == w) maximal.push_back(&u);
    for (const auto& u : o.t.subspaces) {
        if (u.dim() != w - 1) continue;
        std::vector<const Subspace*> over;
        for (const auto* m : maximal)
            if (m->contains(F, u)) over.push_back(m);
        if (over.size() != 2)
            throw DomainError("codimension-one isotropic space " + u.key() + " lies in " + std::to_string(over.size()) + " admissible maximal spaces, expected 2");
        SubdivisionPair p;
        p.subdividing = u.key();
        p.first = over[0]->key();
        p.second = over[1]->key();
        p.chosen = std::min(*over[0], *over[1]).key();
        o.pairing.push_back(std::move(p));
    }
    return o;
}

void require_split(const Form& form) {
    require_form(form);
    if (form.ambient() % 2 != 0 || form.ambient() < 4) throw DomainError("oriflamme needs even ambient dimension at least 4");
    if (form.witt_index() != form.ambient() / 2) throw DomainError("oriflamme needs Witt index equal to half the ambient dimension");
}

}  // namespace

Oriflamme dn_oriflamme(const Form& form, const Caps& caps) { return opposition_dn(form, {}, caps); }

Oriflamme opposition_dn(const Form& form, const std::vector<Subspace>& constraints, const Caps& caps) {
    require_split(form);
    check_constraints(form.ambient(), constraints);
    require_perp_closed(form, constraints);
    std::vector<Subspace> keep;
    for (auto& u : isotropic_subspaces(form, caps))
        if (std::all_of(constraints.begin(), constraints.end(), [&](const Subspace& e) { return tilde_transversal(form, u, e); }))
            keep.push_back(std::move(u));
    return build_oriflamme(form, std::move(keep), constraints);
}

namespace {

std::map<int, std::int64_t> dimension_counts(const std::vector<Subspace>& constraints) {
    std::map<int, std::int64_t> e;
    std::set<Subspace> unique(constraints.begin(), constraints.end());
    for (const auto& c : unique) ++e[c.dim()];
    return e;
}

}  // namespace

ClassCheck class_ca_check(const Field& F, int ambient, const std::vector<Subspace>& constraints) {
    const int n = ambient - 2;
    auto e = dimension_counts(constraints);
    ClassCheck c;
    c.field_size = F.size();
    for (int j = 1; j <= n + 1; ++j) c.required += binomial(n, j - 1) * e[j];
    c.holds = c.required <= c.field_size;
    c.detail = "sum_j C(" + std::to_string(n) + ", j-1) e_j = " + std::to_string(c.required) + " vs |K| = " + std::to_string(c.field_size);
    return c;
}

ClassCheck class_cc_check(const Form& form, const std::vector<Subspace>& constraints) {
    const int m = form.ambient();
    const int w = form.witt_index();
    auto e = dimension_counts(constraints);
    auto e_hs = [&](int h, int s) {
        std::int64_t total = 0;
        for (int j = 0; j <= 2 * s; ++j) total += binomial(2 * s, j) * e[h + j];
        return total;
    };
    ClassCheck c;
    c.field_size = form.field().size();
    if (m == 2 * w + 1) {
        c.required = 2 * e_hs(2, w - 1);
        c.detail = "N(E) = 2 e_2^(" + std::to_string(w - 1) + ")";
    } else if (m == 2 * w + 2) {
        c.required = std::max(e_hs(2, w - 1) + e_hs(3, w - 1) + 1, 2 * e_hs(3, w - 1));
        c.detail = "N(E) = max{e_2 + e_3 + 1, 2 e_3} at s = " + std::to_string(w - 1);
    } else {
        c.applicable = false;
        c.detail = "ambient dimension " + std::to_string(m) + " with Witt index " + std::to_string(w) + " is not thick; N(E) undefined";
        return c;
    }
    c.holds = c.field_size >= c.required;
    c.detail += " = " + std::to_string(c.required) + " vs |K| = " + std::to_string(c.field_size);
    return c;
}

// ---------------------------------------------------------------------------------------------
// Recursive cone synthesis

namespace {

const Subspace& subspace_at(const Geometry& g, const std::string& label) { return g.subspaces[static_cast<std::size_t>(g.complex.vertex(label))]; }

ProvidedCone apex_or_solver(const Complex& rel, const std::string& apex_label, int k, const Caps& caps) {
    if (auto a = rel.find_vertex(apex_label)) {
        const bool star = std::all_of(rel.maximal_faces().begin(), rel.maximal_faces().end(),
                                      [&](const Face& f) { return std::binary_search(f.begin(), f.end(), *a); });
        if (star) return {apex_star_cone(rel, *a, k), "apex-star", {}, false, true};
    }
    return solver_cone(rel, caps, "relative link is not a cone over " + apex_label);
}

std::vector<Subspace> unique_nontrivial(std::vector<Subspace> pool, int ambient) {
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    pool.erase(std::remove_if(pool.begin(), pool.end(), [&](const Subspace& s) { return s.dim() == 0 || s.dim() == ambient; }), pool.end());
    return pool;
}

// Largest subset of `pool` transversal to every vertex; accepted when it cuts out exactly the vertex set.
std::optional<std::vector<Subspace>> identify_constraints(const Geometry& child, std::vector<Subspace> pool, const Caps& caps) {
    const Field& F = *child.field;
    pool = unique_nontrivial(std::move(pool), child.ambient);
    std::vector<Subspace> chosen;
    for (auto& c : pool)
        if (std::all_of(child.subspaces.begin(), child.subspaces.end(), [&](const Subspace& v) { return is_transversal(F, v, c); }))
            chosen.push_back(std::move(c));
    const auto universe = child.form ? isotropic_subspaces(*child.form, caps) : proper_subspaces(F, child.ambient, caps);
    std::size_t matched = 0;
    for (const auto& u : universe) {
        if (!transversal_to_all(F, u, chosen)) continue;
        if (!child.find(u)) return std::nullopt;
        ++matched;
    }
    if (matched != child.subspaces.size()) return std::nullopt;
    return chosen;
}

Complex relabeled(const Complex& x, std::vector<std::string> labels) { return Complex::from_index_faces(std::move(labels), x.maximal_faces()); }

struct Factor {
    Geometry geometry;
    std::vector<std::string> parent_labels;  // per child vertex
    std::vector<Subspace> pool;
};

ProvidedCone factor_link_cone(const Geometry& g, const Subspace& u, const Subspace& line, const Complex& rel, const Caps& caps) {
    const Field& F = *g.field;
    std::vector<Subspace> below, above;
    for (const auto& l : rel.labels()) {
        const Subspace& s = subspace_at(g, l);
        (s.dim() < u.dim() ? below : above).push_back(s);
    }
    std::vector<Subspace> parent_pool;
    if (g.constraints) {
        const std::optional<Subspace> line_perp = g.form ? std::optional<Subspace>(g.form->perp(line)) : std::nullopt;
        for (const auto& e : *g.constraints) {
            parent_pool.push_back(e);
            parent_pool.push_back(subspace_sum(F, e, line));
            if (line_perp) {
                const Subspace cut = subspace_intersection(F, e, *line_perp);
                parent_pool.push_back(cut);
                parent_pool.push_back(subspace_sum(F, cut, line));
            }
        }
    }

    std::vector<Factor> factors;
    if (!below.empty()) {
        Factor f;
        std::vector<Subspace> coords;
        for (const auto& s : below) coords.push_back(coordinates_in(F, s, u));
        f.geometry = flag_geometry(g.field, u.dim(), std::nullopt, coords);
        for (const auto& c : f.geometry.subspaces) f.parent_labels.push_back(from_coordinates(F, c, u).key());
        for (const auto& p : parent_pool) f.pool.push_back(coordinates_in(F, subspace_intersection(F, p, u), u));
        factors.push_back(std::move(f));
    }
    if (!above.empty()) {
        Factor f;
        std::vector<Subspace> coords;
        if (!g.form) {
            for (const auto& s : above) coords.push_back(quotient_image(F, s, u));
            f.geometry = flag_geometry(g.field, g.ambient - u.dim(), std::nullopt, coords);
            for (const auto& c : f.geometry.subspaces) f.parent_labels.push_back(quotient_preimage(F, c, u).key());
            for (const auto& p : parent_pool) f.pool.push_back(quotient_image(F, subspace_sum(F, p, u), u));
        } else {
            FqMatrix basis;
            Form induced = g.form->quotient(u, &basis);
            const Subspace frame = Subspace::span(F, g.ambient, basis);
            const Subspace u_perp = g.form->perp(u);
            auto to_coords = [&](const Subspace& s) {
                FqMatrix rows(s.dim(), g.ambient);
                for (Eigen::Index r = 0; r < s.dim(); ++r) rows.row(r) = u.reduce(F, s.basis().row(r));
                return coordinates_in(F, Subspace::span(F, g.ambient, rows), frame);
            };
            for (const auto& s : above) coords.push_back(to_coords(s));
            const int ambient = static_cast<int>(basis.rows());
            f.geometry = flag_geometry(g.field, ambient, induced, coords);
            for (const auto& c : f.geometry.subspaces) f.parent_labels.push_back(subspace_sum(F, from_coordinates(F, c, frame), u).key());
            for (const auto& p : parent_pool) {
                f.pool.push_back(to_coords(subspace_sum(F, subspace_intersection(F, p, u_perp), u)));
                f.pool.push_back(to_coords(subspace_intersection(F, subspace_sum(F, p, u), u_perp)));
            }
        }
        factors.push_back(std::move(f));
    }

    ProvidedCone out;
    out.identified = true;
    std::vector<ConeFunction> cones;
    std::vector<Complex> relabeled_factors;
    for (auto& f : factors) {
        auto identified = identify_constraints(f.geometry, f.pool, caps);
        if (identified) f.geometry.constraints = std::move(identified);
        else out.identified = false;
        ProvidedCone pc = geometry_cone(f.geometry, caps);
        out.fallback = out.fallback || pc.fallback;
        for (auto& l : pc.ledgers) out.ledgers.push_back(std::move(l));
        cones.push_back(std::move(pc.cone));
        relabeled_factors.push_back(relabeled(f.geometry.complex, f.parent_labels));
    }
    std::optional<ConeFunction> moved;
    if (factors.size() == 2) {
        JoinCone jc = join_cone(relabeled_factors[0], cones[0], relabeled_factors[1], cones[1], false);
        moved = transfer_by_labels(jc.complex, jc.cone, rel);
        out.method = "join";
    } else if (factors.size() == 1) {
        moved = transfer_by_labels(relabeled_factors[0], cones[0], rel);
        out.method = "factor";
    }
    if (!moved) {
        ProvidedCone s = solver_cone(rel, caps, "relative link at " + u.key() + " is not the expected join of factors");
        s.identified = false;
        return s;
    }
    out.cone = std::move(*moved);
    return out;
}

std::shared_ptr<const Complex> target_of(const std::shared_ptr<const Geometry>& g) { return {g, &g->complex}; }

std::optional<Vertex> first_line(const Geometry& g) {
    for (Vertex v = 0; v < static_cast<Vertex>(g.subspaces.size()); ++v)
        if (g.subspaces[static_cast<std::size_t>(v)].dim() == 1) return v;
    return std::nullopt;
}

std::vector<Vertex> vertices_where(std::size_t n, const std::function<bool(Vertex)>& pred) {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < static_cast<Vertex>(n); ++v)
        if (pred(v)) out.push_back(v);
    return out;
}

struct InnerStage {
    std::string name;
    std::vector<Vertex> vertices;                              // indices in the geometry
    std::function<Subspace(const Subspace&)> apex;             // apex of the relative link
};

// Runs the star-of-line filtration of the full subcomplex spanned by `base` and returns its cone in `target` indices.
ProvidedCone inner_filtration(std::shared_ptr<const Geometry> g, const Complex& target, const std::vector<bool>& base,
                              const std::vector<bool>& star, Vertex line, const std::vector<InnerStage>& stages, const std::string& name,
                              const Caps& caps) {
    const int n = g->complex.dimension();
    const auto verts = vertices_where(target.num_vertices(), [&](Vertex v) { return base[static_cast<std::size_t>(v)]; });
    auto kappa0 = std::make_shared<const Complex>(full_subcomplex(target, verts));
    auto local = [&](Vertex v) { return kappa0->vertex(g->complex.label(v)); };
    FiltrationPlan plan;
    plan.name = name;
    plan.target = kappa0;
    plan.caps = caps;
    plan.base_bound = 1;
    for (Vertex v = 0; v < static_cast<Vertex>(g->subspaces.size()); ++v)
        if (star[static_cast<std::size_t>(v)]) plan.base_vertices.push_back(local(v));
    const std::string apex_label = g->complex.label(line);
    plan.base_provider = [apex_label, n](const Complex& t, const std::vector<bool>& mask) {
        return ProvidedCone{apex_star_on(t, mask, t.vertex(apex_label), n - 1), "apex-star", {}, false, true};
    };
    for (const auto& s : stages) {
        FiltrationStage st;
        st.name = s.name;
        for (Vertex v : s.vertices) st.vertices.push_back(local(v));
        std::sort(st.vertices.begin(), st.vertices.end());
        auto apex = s.apex;
        st.provider = [g, kappa0, apex, n, caps](const Complex& rel, Vertex w) {
            const Subspace& u = subspace_at(*g, kappa0->label(w));
            return apex_or_solver(rel, apex(u).key(), n - 2, caps);
        };
        plan.stages.push_back(std::move(st));
    }
    FiltrationResult r = run_filtration(plan);
    return {r.cone.mapped(embed_by_labels(*kappa0, target)), "kappa0-filtration", {std::move(r.ledger)}, false, true};
}

}  // namespace

FiltrationPlan an_filtration_plan(std::shared_ptr<const Geometry> g, const Caps& caps) {
    const Field& F = *g->field;
    const int n = g->complex.dimension();
    if (n < 1) throw DomainError("type A filtration needs a complex of dimension at least 1");
    const auto line_v = first_line(*g);
    if (!line_v) throw DomainError("class violation: no transversal line in the vertex set");
    const Subspace line = g->subspaces[static_cast<std::size_t>(*line_v)];
    const auto nv = g->subspaces.size();
    std::vector<bool> y0(nv), star(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        const Subspace& u = g->subspaces[v];
        y0[v] = g->find(subspace_sum(F, u, line)).has_value();
        star[v] = u.contains(F, line);
    }
    FiltrationPlan plan;
    plan.name = "type A filtration in F^" + std::to_string(g->ambient) + " over " + F.describe();
    plan.target = target_of(g);
    plan.caps = caps;
    plan.radius_class = RadiusClass::A;
    plan.base_bound = filtration_f(n, RadiusClass::A);
    plan.notes.push_back("line " + line.key());
    plan.base_vertices = vertices_where(nv, [&](Vertex v) { return y0[static_cast<std::size_t>(v)]; });

    std::vector<InnerStage> inner;
    for (int i = 1; i <= n; ++i) {
        InnerStage s;
        s.name = "Y0 spaces of dimension " + std::to_string(i) + " avoiding the line";
        s.vertices = vertices_where(nv, [&](Vertex v) {
            const auto& u = g->subspaces[static_cast<std::size_t>(v)];
            return y0[static_cast<std::size_t>(v)] && !star[static_cast<std::size_t>(v)] && u.dim() == i;
        });
        s.apex = [g, line](const Subspace& u) { return subspace_sum(*g->field, u, line); };
        inner.push_back(std::move(s));
    }
    const Vertex lv = *line_v;
    plan.base_provider = [g, star, lv, inner, caps](const Complex& target, const std::vector<bool>& base) {
        return inner_filtration(g, target, base, star, lv, inner, "kappa0 of type A (star of the line, then Y0 by dimension)", caps);
    };
    for (int i = 1; i <= n + 1; ++i) {
        FiltrationStage st;
        const int d = g->ambient - i;
        st.name = "spaces outside Y0 of dimension " + std::to_string(d);
        st.vertices = vertices_where(nv, [&](Vertex v) { return !y0[static_cast<std::size_t>(v)] && g->subspaces[static_cast<std::size_t>(v)].dim() == d; });
        st.provider = [g, line, caps](const Complex& rel, Vertex w) {
            return factor_link_cone(*g, g->subspaces[static_cast<std::size_t>(w)], line, rel, caps);
        };
        plan.stages.push_back(std::move(st));
    }
    return plan;
}

FiltrationPlan cn_filtration_plan(std::shared_ptr<const Geometry> g, const Caps& caps) {
    if (!g->form) throw DomainError("type C filtration needs a form");
    const Field& F = *g->field;
    const Form& form = *g->form;
    const int n = g->complex.dimension();
    if (n < 1) throw DomainError("type C filtration needs a complex of dimension at least 1");
    const int w = form.witt_index();
    const auto line_v = first_line(*g);
    if (!line_v) throw DomainError("class violation: no transversal line in the vertex set");
    const Subspace line = g->subspaces[static_cast<std::size_t>(*line_v)];
    const Subspace line_perp = form.perp(line);
    const auto nv = g->subspaces.size();

    std::vector<Subspace> plus_line, cut, cut_plus;
    if (g->constraints)
        for (const auto& e : *g->constraints) {
            plus_line.push_back(subspace_sum(F, e, line));
            cut.push_back(subspace_intersection(F, e, line_perp));
            cut_plus.push_back(subspace_sum(F, cut.back(), line));
        }
    std::vector<bool> c1(nv), c2(nv), c3(nv), x0(nv), z(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        const Subspace& u = g->subspaces[v];
        const bool in_perp = line_perp.contains(F, u);
        c1[v] = u.contains(F, line);
        if (g->constraints) {
            c2[v] = !c1[v] && in_perp && transversal_to_all(F, u, plus_line);
            c3[v] = !in_perp && u.dim() > 1 && transversal_to_all(F, u, cut) && transversal_to_all(F, u, plus_line) && transversal_to_all(F, u, cut_plus);
            z[v] = c1[v] || transversal_to_all(F, u, plus_line);
        } else {
            c2[v] = !c1[v] && in_perp && g->find(subspace_sum(F, u, line)).has_value();
            if (!in_perp && u.dim() > 1) {
                const Subspace low = subspace_intersection(F, u, line_perp);
                c3[v] = g->find(low).has_value() && g->find(subspace_sum(F, low, line)).has_value();
            }
        }
        x0[v] = c1[v] || c2[v] || c3[v];
        if (!g->constraints) z[v] = x0[v];
    }

    FiltrationPlan plan;
    plan.name = "type C filtration in F^" + std::to_string(g->ambient) + " over " + F.describe();
    plan.target = target_of(g);
    plan.caps = caps;
    plan.radius_class = RadiusClass::C;
    plan.base_bound = filtration_f(n, RadiusClass::C);
    plan.notes.push_back("line " + line.key());
    plan.notes.push_back(g->constraints ? "kappa0 and Z from the constraint set" : "kappa0 by membership tests; Z = kappa0 (constraints unidentified)");
    plan.base_vertices = vertices_where(nv, [&](Vertex v) { return x0[static_cast<std::size_t>(v)]; });

    std::vector<InnerStage> inner;
    for (int i = 1; i <= w; ++i) {
        InnerStage s;
        s.name = "condition-2 spaces of dimension " + std::to_string(i);
        s.vertices = vertices_where(nv, [&](Vertex v) { return c2[static_cast<std::size_t>(v)] && g->subspaces[static_cast<std::size_t>(v)].dim() == i; });
        s.apex = [g, line](const Subspace& u) { return subspace_sum(*g->field, u, line); };
        inner.push_back(std::move(s));
    }
    for (int i = 1; i <= w; ++i) {
        InnerStage s;
        const int d = w + 1 - i;
        s.name = "condition-3 spaces of dimension " + std::to_string(d);
        s.vertices = vertices_where(nv, [&](Vertex v) { return c3[static_cast<std::size_t>(v)] && g->subspaces[static_cast<std::size_t>(v)].dim() == d; });
        s.apex = [g, line_perp](const Subspace& u) { return subspace_intersection(*g->field, u, line_perp); };
        inner.push_back(std::move(s));
    }
    const Vertex lv = *line_v;
    plan.base_provider = [g, c1, lv, inner, caps](const Complex& target, const std::vector<bool>& base) {
        return inner_filtration(g, target, base, c1, lv, inner, "kappa0 of type C (star of the line, condition 2 ascending, condition 3 descending)", caps);
    };
    auto outer_provider = [g, line, caps](const Complex& rel, Vertex v) {
        return factor_link_cone(*g, g->subspaces[static_cast<std::size_t>(v)], line, rel, caps);
    };
    for (int i = 1; i <= w; ++i) {
        FiltrationStage st;
        st.name = "Z outside kappa0, dimension " + std::to_string(i);
        st.vertices = vertices_where(nv, [&](Vertex v) { return z[static_cast<std::size_t>(v)] && !x0[static_cast<std::size_t>(v)] && g->subspaces[static_cast<std::size_t>(v)].dim() == i; });
        st.provider = outer_provider;
        plan.stages.push_back(std::move(st));
    }
    for (int i = 1; i <= w; ++i) {
        FiltrationStage st;
        const int d = w + 1 - i;
        st.name = "outside Z, dimension " + std::to_string(d);
        st.vertices = vertices_where(nv, [&](Vertex v) { return !z[static_cast<std::size_t>(v)] && !x0[static_cast<std::size_t>(v)] && g->subspaces[static_cast<std::size_t>(v)].dim() == d; });
        st.provider = outer_provider;
        plan.stages.push_back(std::move(st));
    }
    return plan;
}

ProvidedCone geometry_cone(const Geometry& g, const Caps& caps) {
    const Complex& K = g.complex;
    if (K.num_vertices() == 0) throw NoConeError("empty geometry has no cone", -1);
    if (K.dimension() == 0) return {ConeFunction(0, -1), "point", {}, false, true};
    auto shared = std::make_shared<const Geometry>(g);
    try {
        FiltrationPlan plan = g.form ? cn_filtration_plan(shared, caps) : an_filtration_plan(shared, caps);
        FiltrationResult r = run_filtration(plan);
        return {std::move(r.cone), g.form ? "filtration-C" : "filtration-A", {std::move(r.ledger)}, false, true};
    } catch (const ResourceError&) {
        throw;
    } catch (const Error& e) {
        return solver_cone(K, caps, std::string("filtration unavailable: ") + e.what());
    }
}

// ---------------------------------------------------------------------------------------------

std::optional<std::vector<Vertex>> complexes_isomorphic(const Complex& x, const Complex& y, const std::vector<int>* types_x,
                                                         const std::vector<int>* types_y, const Caps& caps) {
    if (x.num_vertices() != y.num_vertices() || x.dimension() != y.dimension()) return std::nullopt;
    for (int k = 0; k <= x.dimension(); ++k)
        if (x.count(k) != y.count(k)) return std::nullopt;
    if ((types_x == nullptr) != (types_y == nullptr)) throw DomainError("types must be given for both complexes or neither");
    const auto n = x.num_vertices();
    if (n == 0) return std::vector<Vertex>{};

    std::map<std::vector<std::int64_t>, int> dictionary;
    auto colour_of = [&](std::vector<std::int64_t> key) {
        auto [it, inserted] = dictionary.emplace(std::move(key), static_cast<int>(dictionary.size()));
        return it->second;
    };
    std::vector<int> cx(n), cy(n);
    for (std::size_t v = 0; v < n; ++v) {
        const auto vv = static_cast<Vertex>(v);
        cx[v] = colour_of({types_x ? (*types_x)[v] : 0, static_cast<std::int64_t>(x.neighbors(vv).size()), x.top_coface_count({vv})});
        cy[v] = colour_of({types_y ? (*types_y)[v] : 0, static_cast<std::int64_t>(y.neighbors(vv).size()), y.top_coface_count({vv})});
    }
    auto histogram = [](const std::vector<int>& c) {
        std::map<int, int> h;
        for (int v : c) ++h[v];
        return h;
    };
    std::size_t classes = 0;
    for (std::size_t round = 0; round <= n; ++round) {
        if (histogram(cx) != histogram(cy)) return std::nullopt;
        const std::size_t now = histogram(cx).size();
        if (now == classes) break;
        classes = now;
        dictionary.clear();
        auto refine = [&](const Complex& c, const std::vector<int>& old) {
            std::vector<int> next(n);
            for (std::size_t v = 0; v < n; ++v) {
                std::vector<std::int64_t> key{old[v]};
                std::vector<std::int64_t> around;
                for (Vertex u : c.neighbors(static_cast<Vertex>(v))) around.push_back(old[static_cast<std::size_t>(u)]);
                std::sort(around.begin(), around.end());
                key.insert(key.end(), around.begin(), around.end());
                next[v] = colour_of(std::move(key));
            }
            return next;
        };
        auto nx = refine(x, cx);
        auto ny = refine(y, cy);
        cx = std::move(nx);
        cy = std::move(ny);
    }

    // Search order: BFS from the rarest colour class so that most vertices have a mapped neighbour.
    auto h = histogram(cx);
    std::vector<Vertex> order;
    std::vector<bool> seen(n, false);
    std::vector<Vertex> starts(n);
    for (std::size_t v = 0; v < n; ++v) starts[v] = static_cast<Vertex>(v);
    std::stable_sort(starts.begin(), starts.end(), [&](Vertex a, Vertex b) { return h[cx[static_cast<std::size_t>(a)]] < h[cx[static_cast<std::size_t>(b)]]; });
    for (Vertex s : starts) {
        if (seen[static_cast<std::size_t>(s)]) continue;
        std::deque<Vertex> queue{s};
        seen[static_cast<std::size_t>(s)] = true;
        while (!queue.empty()) {
            Vertex v = queue.front();
            queue.pop_front();
            order.push_back(v);
            for (Vertex u : x.neighbors(v))
                if (!seen[static_cast<std::size_t>(u)]) {
                    seen[static_cast<std::size_t>(u)] = true;
                    queue.push_back(u);
                }
        }
    }
    std::vector<std::size_t> position(n);
    for (std::size_t i = 0; i < n; ++i) position[static_cast<std::size_t>(order[i])] = i;

    std::vector<Vertex> map(n, -1), inverse(n, -1);
    std::vector<std::vector<Vertex>> candidates(n);
    std::vector<std::size_t> cursor(n, 0);
    std::uint64_t steps = 0;

    auto build_candidates = [&](std::size_t level) {
        const Vertex v = order[level];
        std::vector<Vertex> out;
        Vertex anchor = -1;
        for (Vertex u : x.neighbors(v))
            if (position[static_cast<std::size_t>(u)] < level) {
                anchor = u;
                break;
            }
        const auto consider = [&](Vertex c) {
            if (inverse[static_cast<std::size_t>(c)] >= 0 || cy[static_cast<std::size_t>(c)] != cx[static_cast<std::size_t>(v)]) return;
            out.push_back(c);
        };
        if (anchor >= 0)
            for (Vertex c : y.neighbors(map[static_cast<std::size_t>(anchor)])) consider(c);
        else
            for (std::size_t c = 0; c < n; ++c) consider(static_cast<Vertex>(c));
        return out;
    };
    auto consistent = [&](std::size_t level, Vertex c) {
        const Vertex v = order[level];
        std::size_t mapped_x = 0, mapped_y = 0;
        for (Vertex u : x.neighbors(v))
            if (position[static_cast<std::size_t>(u)] < level) {
                ++mapped_x;
                if (!y.adjacent(c, map[static_cast<std::size_t>(u)])) return false;
            }
        for (Vertex u : y.neighbors(c))
            if (inverse[static_cast<std::size_t>(u)] >= 0) ++mapped_y;
        return mapped_x == mapped_y;
    };
    auto faces_match = [&]() {
        for (const auto& f : x.maximal_faces()) {
            Face g;
            for (Vertex v : f) g.push_back(map[static_cast<std::size_t>(v)]);
            std::sort(g.begin(), g.end());
            if (!y.contains(g)) return false;
        }
        return true;
    };

    std::size_t level = 0;
    candidates[0] = build_candidates(0);
    while (true) {
        if (++steps > caps.isomorphism_steps) throw ResourceError("isomorphism search exceeds the step cap");
        bool advanced = false;
        while (cursor[level] < candidates[level].size()) {
            const Vertex c = candidates[level][cursor[level]++];
            if (!consistent(level, c)) continue;
            map[static_cast<std::size_t>(order[level])] = c;
            inverse[static_cast<std::size_t>(c)] = order[level];
            advanced = true;
            break;
        }
        if (advanced) {
            if (level + 1 == n) {
                if (faces_match()) return map;
                const Vertex c = map[static_cast<std::size_t>(order[level])];
                inverse[static_cast<std::size_t>(c)] = -1;
                map[static_cast<std::size_t>(order[level])] = -1;
                continue;
            }
            ++level;
            candidates[level] = build_candidates(level);
            cursor[level] = 0;
            continue;
        }
        if (level == 0) return std::nullopt;
        --level;
        const Vertex c = map[static_cast<std::size_t>(order[level])];
        inverse[static_cast<std::size_t>(c)] = -1;
        map[static_cast<std::size_t>(order[level])] = -1;
    }
}

}  // namespace hdx
