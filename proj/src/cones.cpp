#include "hdx/cones.hpp"

#include "hdx/errors.hpp"
#include "hdx/smith.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

namespace hdx {

ConeFunction::ConeFunction(Vertex apex, int degree, std::int64_t modulus) : apex_(apex), degree_(degree), modulus_(modulus) {}

void ConeFunction::set(const Face& canonical, Chain value) {
    if (canonical.empty()) return;
    if (value.empty()) {
        table_.erase(canonical);
        return;
    }
    table_.insert_or_assign(canonical, value.reduced(modulus_));
}

Chain ConeFunction::value(const Face& canonical) const {
    if (canonical.empty()) return Chain::unit({apex_}, 1, modulus_);
    auto it = table_.find(canonical);
    if (it == table_.end()) return Chain(static_cast<int>(canonical.size()), modulus_);
    return it->second;
}

Chain ConeFunction::operator()(const Chain& a) const {
    if (a.degree() > degree_) throw DomainError("cone evaluated above its degree");
    Chain out(a.degree() + 1, modulus_);
    for (const auto& [f, c] : a.terms()) {
        if (f.empty()) {
            out.add({apex_}, c);
            continue;
        }
        auto it = table_.find(f);
        if (it == table_.end()) continue;
        for (const auto& [g, d] : it->second.terms()) out.add(g, c * d);
    }
    return out;
}

ConeFunction ConeFunction::reduced(std::int64_t modulus) const {
    ConeFunction r(apex_, degree_, modulus);
    for (const auto& [f, v] : table_) r.set(f, v.reduced(modulus));
    return r;
}

ConeFunction ConeFunction::mapped(const std::vector<Vertex>& vertex_map) const {
    ConeFunction r(vertex_map.at(static_cast<std::size_t>(apex_)), degree_, modulus_);
    for (const auto& [f, v] : table_) {
        Face g;
        for (Vertex x : f) g.push_back(vertex_map.at(static_cast<std::size_t>(x)));
        const int sign = canonicalize(g);
        if (sign == 0) throw DomainError("vertex map is not injective");
        r.set(g, sign * v.mapped(vertex_map));
    }
    return r;
}

std::int64_t RadiusProfile::at(int j) const {
    const auto i = static_cast<std::size_t>(j + 1);
    return (j < -1 || i >= values.size()) ? 0 : values[i];
}

std::int64_t RadiusProfile::max() const {
    std::int64_t m = 0;
    for (auto v : values) m = std::max(m, v);
    return m;
}

RadiusProfile radius_profile(const ConeFunction& c) {
    RadiusProfile p;
    p.values.assign(static_cast<std::size_t>(c.degree() + 2), 0);
    p.values[0] = 1;
    for (const auto& [f, v] : c.table()) {
        auto& slot = p.values[f.size()];
        slot = std::max<std::int64_t>(slot, static_cast<std::int64_t>(v.support_size()));
    }
    return p;
}

namespace {

std::string face_text(const Face& f) {
    std::string s = "[";
    for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
    return s + "]";
}

bool inside(const Face& f, const std::vector<bool>& mask) {
    return std::all_of(f.begin(), f.end(), [&](Vertex v) { return mask[static_cast<std::size_t>(v)]; });
}

}  // namespace

ConeVerdict verify_cone(const ConeFunction& c, const Complex& X) {
    return verify_cone(c, X, std::vector<bool>(X.num_vertices(), true));
}

ConeVerdict verify_cone(const ConeFunction& c, const Complex& X, const std::vector<bool>& mask) {
    ConeVerdict verdict;
    auto fail = [&](std::string msg, const Face& g) {
        verdict.ok = false;
        verdict.message = std::move(msg);
        verdict.generator = g;
        return verdict;
    };
    if (c.apex() < 0 || static_cast<std::size_t>(c.apex()) >= X.num_vertices() || !mask[static_cast<std::size_t>(c.apex())])
        return fail("apex is not a vertex of the complex", {});
    for (const auto& [f, v] : c.table()) {
        if (static_cast<int>(f.size()) - 1 > c.degree()) return fail("table entry above the cone degree", f);
        if (!inside(f, mask) || !X.contains(f)) return fail("table generator " + face_text(f) + " is not a face", f);
        if (v.degree() != static_cast<int>(f.size())) return fail("table value has the wrong degree", f);
        for (const auto& [g, coeff] : v.terms())
            if (!inside(g, mask) || !X.contains(g)) return fail("value of " + face_text(f) + " leaves the complex at " + face_text(g), f);
    }
    for (int j = 0; j <= c.degree() && j <= X.dimension(); ++j) {
        for (const auto& sigma : X.faces(j)) {
            if (!inside(sigma, mask)) continue;
            const Chain unit = Chain::unit(sigma, 1, c.modulus());
            Chain lhs = boundary(c.value(sigma));
            lhs += c(boundary(unit));
            if (!(lhs == unit)) return fail("cone equation fails at " + face_text(sigma), sigma);
        }
    }
    return verdict;
}

GroupCone transport_coefficients(const ConeFunction& integral, const CoefficientGroup& group) {
    if (integral.modulus() != 0) throw DomainError("transport starts from an integral cone");
    GroupCone out{group, {}};
    for (auto m : group.moduli) out.components.push_back(m == 0 ? integral : integral.reduced(m));
    return out;
}

ConeVerdict verify_cone(const GroupCone& c, const Complex& X) {
    for (std::size_t i = 0; i < c.components.size(); ++i) {
        auto v = verify_cone(c.components[i], X);
        if (!v) {
            v.message = "component " + std::to_string(i) + " (" + describe_modulus(c.group.moduli[i]) + "): " + v.message;
            return v;
        }
    }
    return {};
}

RadiusProfile radius_profile(const GroupCone& c) {
    RadiusProfile p;
    if (c.components.empty()) return p;
    const int k = c.components.front().degree();
    p.values.assign(static_cast<std::size_t>(k + 2), 0);
    p.values[0] = 1;
    std::set<Face> generators;
    for (const auto& comp : c.components)
        for (const auto& [f, v] : comp.table()) generators.insert(f);
    for (const auto& f : generators) {
        std::set<Face> support;
        for (const auto& comp : c.components) {
            const Chain value = comp.value(f);
            for (const auto& [g, coeff] : value.terms()) support.insert(g);
        }
        auto& slot = p.values[f.size()];
        slot = std::max<std::int64_t>(slot, static_cast<std::int64_t>(support.size()));
    }
    return p;
}

bool transport_support_contained(const GroupCone& c, const ConeFunction& integral) {
    for (std::size_t i = 0; i < c.components.size(); ++i) {
        const auto& comp = c.components[i];
        const std::int64_t m = c.group.moduli[i];
        std::vector<std::int64_t> samples;
        if (m == 0) samples = {1, -1, 2, 7};
        else
            for (std::int64_t a = 1; a < m; ++a) samples.push_back(a);
        for (const auto& [f, v] : comp.table()) {
            const Chain base = integral.value(f);
            for (auto a : samples) {
                const Chain image = comp(Chain::unit(f, a, m));
                for (const auto& [g, coeff] : image.terms())
                    if (base.coeff(g) == 0) return false;
            }
        }
    }
    return true;
}

ConeFunction apex_star_cone(const Complex& X, Vertex v, int k) {
    if (X.num_vertices() == 0) throw DomainError("apex-star cone on the empty complex");
    for (const auto& m : X.maximal_faces())
        if (!std::binary_search(m.begin(), m.end(), v)) throw DomainError("complex is not a cone over the requested apex");
    ConeFunction c(v, k);
    for (int j = 0; j <= k && j <= X.dimension(); ++j)
        for (const auto& sigma : X.faces(j)) {
            if (std::binary_search(sigma.begin(), sigma.end(), v)) continue;
            c.set(sigma, bracket_vertex(v, Chain::unit(sigma)));
        }
    return c;
}

ConeFunction graph_bfs_cone(const Complex& X, Vertex apex) {
    const auto nv = X.num_vertices();
    if (apex < 0 || static_cast<std::size_t>(apex) >= nv) throw DomainError("apex is not a vertex");
    std::vector<int> dist(nv, -1);
    std::deque<Vertex> queue{apex};
    dist[static_cast<std::size_t>(apex)] = 0;
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        for (Vertex u : X.neighbors(v))
            if (dist[static_cast<std::size_t>(u)] < 0) {
                dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
                queue.push_back(u);
            }
    }
    for (std::size_t v = 0; v < nv; ++v)
        if (dist[v] < 0) throw NoConeError("graph is disconnected; no 0-cone exists", 0);
    ConeFunction c(apex, 0);
    for (Vertex w = 0; w < static_cast<Vertex>(nv); ++w) {
        Chain path(1);
        Vertex cur = w;
        while (cur != apex) {
            Vertex parent = -1;
            for (Vertex u : X.neighbors(cur))
                if (dist[static_cast<std::size_t>(u)] == dist[static_cast<std::size_t>(cur)] - 1) {
                    parent = u;
                    break;
                }
            path.add_oriented({parent, cur}, 1);
            cur = parent;
        }
        c.set({w}, path);
    }
    return c;
}

JoinCone join_cone(const Complex& y1, const ConeFunction& c1, const Complex& y2, const ConeFunction& c2, bool tag_labels) {
    const int n1 = y1.dimension();
    const int n2 = y2.dimension();
    if (n1 < 0 || n2 < 0) throw DomainError("join cone needs nonempty factors");
    if (c1.degree() < n1 - 1 || c2.degree() < n2 - 1) throw DomainError("join cone factor degrees are too small");
    if (c1.modulus() != c2.modulus()) throw DomainError("join cone factors use different coefficients");
    const std::int64_t mod = c1.modulus();
    Complex J = tag_labels ? join(y1, y2) : join_untagged(y1, y2);
    const auto shift = static_cast<Vertex>(y1.num_vertices());
    std::vector<Vertex> lift2(y2.num_vertices());
    for (std::size_t i = 0; i < lift2.size(); ++i) lift2[i] = static_cast<Vertex>(i) + shift;
    const int k = n1 + n2;
    ConeFunction c(c1.apex(), k, mod);
    const std::int64_t sign = ((n1 + 1) % 2 == 0) ? 1 : -1;
    for (int j = 0; j <= k; ++j)
        for (const auto& sigma : J.faces(j)) {
            Face s1, s2;
            for (Vertex v : sigma) {
                if (v < shift) s1.push_back(v);
                else s2.push_back(v - shift);
            }
            const int d1 = static_cast<int>(s1.size()) - 1;
            const Chain second_unit = Chain::unit(s2, 1, mod).mapped(lift2);
            if (d1 < n1) {
                c.set(sigma, bracket_chains(c1.value(s1), second_unit));
            } else {
                Chain first = Chain::unit(s1, 1, mod);
                first -= c1(boundary(Chain::unit(s1, 1, mod)));
                const Chain second = c2.value(s2).mapped(lift2);
                c.set(sigma, sign * bracket_chains(first, second));
            }
        }
    return {std::move(J), std::move(c)};
}

std::vector<std::int64_t> join_radius_bound(const RadiusProfile& r1, const RadiusProfile& r2, int n1, int k) {
    std::vector<std::int64_t> out;
    std::int64_t running = 0;
    for (int j = -1; j <= k; ++j) {
        if (j == -1) {
            out.push_back(1);
            running = std::max<std::int64_t>(running, r1.at(-1));
            continue;
        }
        if (j < n1) {
            running = std::max(running, r1.at(j));
            out.push_back(running);
            continue;
        }
        std::int64_t first = 0;
        for (int j1 = -1; j1 <= n1 - 1; ++j1) first = std::max(first, r1.at(j1));
        out.push_back(std::max(first, ((n1 + 1) * r1.at(n1 - 1) + 1) * r2.at(j - n1 - 1)));
    }
    return out;
}

ConeFunction extend_by_vertex_set(const Complex& X, const std::vector<bool>& base, const ConeFunction& base_cone,
                                  const std::vector<Vertex>& added, const std::map<Vertex, ConeFunction>& link_cones) {
    if (added.empty()) return base_cone;
    std::vector<bool> is_added(X.num_vertices(), false);
    for (Vertex w : added) {
        if (base[static_cast<std::size_t>(w)]) throw DomainError("added vertex " + X.label(w) + " already lies in the base");
        is_added[static_cast<std::size_t>(w)] = true;
    }
    for (Vertex w : added)
        for (Vertex u : X.neighbors(w))
            if (is_added[static_cast<std::size_t>(u)]) throw DomainError("added vertices " + X.label(w) + " and " + X.label(u) + " are adjacent");
    int k = base_cone.degree();
    for (Vertex w : added) {
        auto it = link_cones.find(w);
        if (it == link_cones.end()) throw DomainError("missing relative-link cone for " + X.label(w));
        k = std::min(k, it->second.degree() + 1);
    }
    std::vector<bool> mask = base;
    for (Vertex w : added) mask[static_cast<std::size_t>(w)] = true;
    ConeFunction c(base_cone.apex(), k, base_cone.modulus());
    for (int j = 0; j <= k && j <= X.dimension(); ++j)
        for (const auto& sigma : X.faces(j)) {
            if (!inside(sigma, mask)) continue;
            std::size_t pos = sigma.size();
            for (std::size_t i = 0; i < sigma.size(); ++i)
                if (is_added[static_cast<std::size_t>(sigma[i])]) pos = i;
            if (pos == sigma.size()) {
                c.set(sigma, base_cone.value(sigma));
                continue;
            }
            const Vertex w = sigma[pos];
            Face tau = sigma;
            tau.erase(tau.begin() + static_cast<std::ptrdiff_t>(pos));
            const Chain a = link_cones.at(w).value(tau);
            Chain v = base_cone(a);
            v -= bracket_vertex(w, a);
            c.set(sigma, (pos % 2 == 0) ? v : -v);
        }
    return c;
}

std::vector<std::int64_t> extension_radius_bound(const RadiusProfile& base, const RadiusProfile& links, int k) {
    std::vector<std::int64_t> out;
    for (int j = -1; j <= k; ++j) {
        if (j == -1) {
            out.push_back(1);
            continue;
        }
        const std::int64_t outer = j == 0 ? 1 : links.at(j - 1);
        out.push_back(std::max(base.at(j), outer * (base.at(j) + 1)));
    }
    return out;
}

ConeFunction solve_cone_linear(const Complex& X, int k, Vertex apex, const Caps& caps) {
    if (apex < 0 || static_cast<std::size_t>(apex) >= X.num_vertices()) throw DomainError("apex is not a vertex");
    ConeFunction c(apex, k);
    for (int j = 0; j <= k; ++j) {
        const auto& rows = X.faces(j);
        const auto& cols = X.faces(j + 1);
        if (rows.size() > caps.solver_faces || cols.size() > caps.solver_faces)
            throw ResourceError("linear cone solver exceeds the face cap (" + std::to_string(caps.solver_faces) + ") in degree " + std::to_string(j));
        if (rows.empty()) break;
        const auto smith = smith_normal_form<std::int64_t>(boundary_matrix(X, j + 1), true);
        const auto r = smith.rank;
        for (const auto& sigma : rows) {
            Chain rhs = Chain::unit(sigma);
            rhs -= c(boundary(Chain::unit(sigma)));
            Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> b = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(static_cast<Eigen::Index>(rows.size()));
            for (const auto& [f, coeff] : rhs.terms()) b(static_cast<Eigen::Index>(*X.index_of(f))) = coeff;
            std::vector<__int128> pb(rows.size(), 0);
            for (Eigen::Index i = 0; i < smith.left.rows(); ++i)
                for (Eigen::Index t = 0; t < smith.left.cols(); ++t)
                    if (b(t) != 0) pb[static_cast<std::size_t>(i)] += static_cast<__int128>(smith.left(i, t)) * b(t);
            std::vector<__int128> y(cols.size(), 0);
            bool solvable = true;
            for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(rows.size()); ++i) {
                const __int128 value = pb[static_cast<std::size_t>(i)];
                if (i < r) {
                    const __int128 d = smith.diagonal(i, i);
                    if (value % d != 0) solvable = false;
                    else y[static_cast<std::size_t>(i)] = value / d;
                } else if (value != 0) {
                    solvable = false;
                }
            }
            if (!solvable)
                throw NoConeError("no cone: the degree-" + std::to_string(j) + " cone equation at " + face_text(sigma) + " has no integral solution", j);
            Chain x(j + 1);
            for (std::size_t t = 0; t < cols.size(); ++t) {
                __int128 s = 0;
                for (Eigen::Index i = 0; i < r; ++i)
                    if (y[static_cast<std::size_t>(i)] != 0) s += static_cast<__int128>(smith.right(static_cast<Eigen::Index>(t), i)) * y[static_cast<std::size_t>(i)];
                if (s > std::numeric_limits<std::int64_t>::max() || s < std::numeric_limits<std::int64_t>::min())
                    throw ResourceError("integer overflow in the linear cone solver");
                if (s != 0) x.add(cols[t], static_cast<std::int64_t>(s));
            }
            c.set(sigma, x);
        }
    }
    return c;
}

std::string check_subdivision(const Complex& t, const Complex& tilde, const std::vector<SubdivisionPair>& pairing) {
    std::set<std::string> subdividing;
    for (const auto& p : pairing) {
        if (!t.find_vertex(p.subdividing)) return "subdividing vertex " + p.subdividing + " missing from T";
        if (tilde.find_vertex(p.subdividing)) return "subdividing vertex " + p.subdividing + " also lies in T~";
        for (const auto* l : {&p.first, &p.second})
            if (!t.find_vertex(*l) || !tilde.find_vertex(*l)) return "paired vertex " + *l + " missing from T or T~";
        if (p.chosen != p.first && p.chosen != p.second) return "chosen vertex is not one of the pair";
        if (!subdividing.insert(p.subdividing).second) return "subdividing vertex listed twice";
    }
    for (const auto& l : t.labels())
        if (!subdividing.count(l) && !tilde.find_vertex(l)) return "vertex " + l + " of T is neither in T~ nor subdividing";
    if (tilde.num_vertices() + subdividing.size() != t.num_vertices()) return "vertex counts do not match a subdivision";
    std::map<std::pair<Vertex, Vertex>, std::string> new_edges;
    for (const auto& p : pairing) {
        const Vertex u = t.vertex(p.subdividing);
        const Vertex a = t.vertex(p.first);
        const Vertex b = t.vertex(p.second);
        if (!t.adjacent(u, a) || !t.adjacent(u, b)) return "subdividing vertex not joined to its pair in T";
        if (t.adjacent(a, b)) return "paired vertices adjacent in T";
        Vertex ta = tilde.vertex(p.first), tb = tilde.vertex(p.second);
        if (!tilde.adjacent(ta, tb)) return "paired vertices not adjacent in T~";
        if (!new_edges.emplace(std::minmax(ta, tb), p.subdividing).second) return "edge of T~ subdivided twice";
    }
    auto to_t = [&](const Face& f) {
        Face g;
        for (Vertex v : f) g.push_back(t.vertex(tilde.label(v)));
        canonicalize(g);
        return g;
    };
    for (int j = 0; j <= tilde.dimension(); ++j)
        for (const auto& f : tilde.faces(j)) {
            if (t.contains(to_t(f))) continue;
            std::vector<std::string> hits;
            for (std::size_t a = 0; a < f.size(); ++a)
                for (std::size_t b = a + 1; b < f.size(); ++b) {
                    auto it = new_edges.find({f[a], f[b]});
                    if (it != new_edges.end()) hits.push_back(it->second);
                }
            if (hits.size() != 1) return "face of T~ is neither in T nor contains exactly one subdivided edge";
            const Vertex u = t.vertex(hits[0]);
            for (std::size_t drop = 0; drop < 2; ++drop) {
                const auto& p = *std::find_if(pairing.begin(), pairing.end(), [&](const SubdivisionPair& q) { return q.subdividing == hits[0]; });
                const Vertex removed = tilde.vertex(drop == 0 ? p.first : p.second);
                Face g;
                for (Vertex v : f)
                    if (v != removed) g.push_back(t.vertex(tilde.label(v)));
                g.push_back(u);
                canonicalize(g);
                if (!t.contains(g)) return "half of a subdivided face is missing from T";
            }
        }
    std::map<std::string, const SubdivisionPair*> by_u;
    for (const auto& p : pairing) by_u[p.subdividing] = &p;
    for (int j = 0; j <= t.dimension(); ++j)
        for (const auto& f : t.faces(j)) {
            Face g;
            int count = 0;
            for (Vertex v : f) {
                auto it = by_u.find(t.label(v));
                if (it == by_u.end()) {
                    g.push_back(tilde.vertex(t.label(v)));
                } else {
                    ++count;
                    g.push_back(tilde.vertex(it->second->first));
                    g.push_back(tilde.vertex(it->second->second));
                }
            }
            if (count > 1) return "face of T contains two subdividing vertices";
            std::sort(g.begin(), g.end());
            g.erase(std::unique(g.begin(), g.end()), g.end());
            if (!tilde.contains(g)) return "face of T does not come from a face of T~";
        }
    return {};
}

ConeFunction subdivision_transport(const ConeFunction& c, const Complex& t, const Complex& tilde, const std::vector<SubdivisionPair>& pairing) {
    if (const auto problem = check_subdivision(t, tilde, pairing); !problem.empty()) throw DomainError("pairing inconsistent with T/T~: " + problem);
    struct Info {
        Vertex first_t, second_t, chosen_t, chosen_tilde;
    };
    std::map<Vertex, Info> by_u;
    std::map<std::pair<Vertex, Vertex>, Vertex> u_of_edge;  // tilde edge -> U in T
    for (const auto& p : pairing) {
        const Vertex u = t.vertex(p.subdividing);
        by_u[u] = {t.vertex(p.first), t.vertex(p.second), t.vertex(p.chosen), tilde.vertex(p.chosen)};
        u_of_edge[std::minmax(tilde.vertex(p.first), tilde.vertex(p.second))] = u;
    }
    std::vector<Vertex> tilde_to_t(tilde.num_vertices());
    for (Vertex v = 0; v < static_cast<Vertex>(tilde.num_vertices()); ++v) tilde_to_t[static_cast<std::size_t>(v)] = t.vertex(tilde.label(v));
    std::vector<Vertex> t_to_tilde(t.num_vertices(), -1);
    for (Vertex v = 0; v < static_cast<Vertex>(t.num_vertices()); ++v)
        if (auto x = tilde.find_vertex(t.label(v))) t_to_tilde[static_cast<std::size_t>(v)] = *x;

    auto f_map = [&](const Face& sigma) {
        Chain out(static_cast<int>(sigma.size()) - 1);
        Face oriented;
        for (Vertex v : sigma) oriented.push_back(tilde_to_t[static_cast<std::size_t>(v)]);
        Face canon = oriented;
        canonicalize(canon);
        if (t.contains(canon)) {
            out.add_oriented(oriented, 1);
            return out;
        }
        for (std::size_t a = 0; a < sigma.size(); ++a)
            for (std::size_t b = a + 1; b < sigma.size(); ++b) {
                auto it = u_of_edge.find({sigma[a], sigma[b]});
                if (it == u_of_edge.end()) continue;
                for (std::size_t pos : {a, b}) {
                    Face g = oriented;
                    g[pos] = it->second;
                    out.add_oriented(g, 1);
                }
            }
        return out;
    };
    auto g_map = [&](const Chain& a) {
        Chain out(a.degree(), a.modulus());
        for (const auto& [sigma, coeff] : a.terms()) {
            Face oriented;
            bool vanish = false;
            for (Vertex v : sigma) {
                auto it = by_u.find(v);
                if (it == by_u.end()) {
                    oriented.push_back(t_to_tilde[static_cast<std::size_t>(v)]);
                } else {
                    if (std::binary_search(sigma.begin(), sigma.end(), it->second.chosen_t)) vanish = true;
                    oriented.push_back(it->second.chosen_tilde);
                }
            }
            if (!vanish) out.add_oriented(oriented, coeff);
        }
        return out;
    };
    Vertex apex = t_to_tilde[static_cast<std::size_t>(c.apex())];
    if (apex < 0) apex = by_u.at(c.apex()).chosen_tilde;
    ConeFunction out(apex, c.degree(), c.modulus());
    for (int j = 0; j <= c.degree() && j <= tilde.dimension(); ++j)
        for (const auto& sigma : tilde.faces(j)) out.set(sigma, g_map(c(f_map(sigma))));
    return out;
}

// ---------------------------------------------------------------------------------------------

namespace {

constexpr std::int64_t kSaturated = std::numeric_limits<std::int64_t>::max();

std::int64_t sat_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    return __builtin_mul_overflow(a, b, &r) ? kSaturated : r;
}

std::int64_t sat_add(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    return __builtin_add_overflow(a, b, &r) ? kSaturated : r;
}

}  // namespace

std::int64_t filtration_f(int n, RadiusClass cls) { return cls == RadiusClass::A ? n + 2 : 2 * n + 3; }
int filtration_stages(int n, RadiusClass cls) { return cls == RadiusClass::A ? n + 1 : 2 * n + 2; }

std::int64_t filtration_S(int n, RadiusClass cls) {
    std::int64_t best = 0;
    for (int a = 0; a <= n - 1; ++a) {
        const int b = n - 1 - a;
        best = std::max(best, sat_mul(sat_add(sat_mul(a + 1, filtration_R(a, cls)), 1), filtration_R(b, cls)));
    }
    return best;
}

std::int64_t filtration_R(int n, RadiusClass cls) {
    if (n <= 0) return 1;
    const std::int64_t S = filtration_S(n, cls);
    const int ell = filtration_stages(n, cls);
    std::int64_t power = 1;
    std::int64_t sum = 0;
    for (int j = 1; j <= ell; ++j) {
        power = sat_mul(power, S);
        sum = sat_add(sum, power);
    }
    return sat_add(sat_mul(power, filtration_f(n, cls)), sum);
}

bool FiltrationLedger::within_bounds() const { return violations() == 0; }

std::size_t FiltrationLedger::violations() const {
    std::size_t v = 0;
    if (!base_within_f) ++v;
    if (!final_within_R) ++v;
    for (const auto& s : stages) v += (s.within_extension ? 0 : 1) + (s.within_ledger ? 0 : 1);
    for (const auto& c : children) v += c.violations();
    return v;
}

ProvidedCone solver_cone(const Complex& X, const Caps& caps, const std::string& reason) {
    ProvidedCone p{solve_cone_linear(X, X.dimension() - 1, 0, caps), "solver", {}, true, true};
    if (!reason.empty()) {
        FiltrationLedger note;
        note.name = "solver fallback";
        note.notes.push_back(reason);
        p.ledgers.push_back(std::move(note));
    }
    return p;
}

FiltrationResult run_filtration(const FiltrationPlan& plan) {
    const Complex& K = *plan.target;
    const int n = K.dimension();
    FiltrationLedger ledger;
    ledger.name = plan.name;
    ledger.n = n;
    ledger.notes = plan.notes;
    if (plan.radius_class) {
        ledger.tracked = true;
        ledger.cls = *plan.radius_class;
        ledger.f_n = plan.base_bound.value_or(filtration_f(n, ledger.cls));
        ledger.ell_n = filtration_stages(n, ledger.cls);
        ledger.S_n = filtration_S(n, ledger.cls);
        ledger.R_n = filtration_R(n, ledger.cls);
    } else if (plan.base_bound) {
        ledger.f_n = *plan.base_bound;
    }
    std::vector<bool> mask(K.num_vertices(), false);
    for (Vertex v : plan.base_vertices) mask[static_cast<std::size_t>(v)] = true;
    ProvidedCone base = plan.base_provider(K, mask);
    if (auto v = verify_cone(base.cone, K, mask); !v)
        throw Error("filtration '" + plan.name + "': base cone fails verification: " + v.message);
    ledger.base_method = base.method;
    ledger.base_radius = radius_profile(base.cone);
    if (plan.base_bound) ledger.base_within_f = ledger.base_radius.max() <= *plan.base_bound;
    if (base.fallback) ++ledger.fallbacks;
    for (auto& l : base.ledgers) ledger.children.push_back(std::move(l));

    ConeFunction current = base.cone;
    std::int64_t recursion = ledger.f_n;
    for (std::size_t si = 0; si < plan.stages.size(); ++si) {
        const auto& stage = plan.stages[si];
        const std::string where = "filtration '" + plan.name + "' stage " + std::to_string(si + 1) + " (" + stage.name + ")";
        StageRecord rec;
        rec.name = stage.name;
        rec.added = stage.vertices.size();
        std::map<Vertex, ConeFunction> links;
        RadiusProfile link_max;
        for (Vertex w : stage.vertices) {
            if (mask[static_cast<std::size_t>(w)]) throw DomainError(where + ": vertex " + K.label(w) + " already present");
            const Complex rel = relative_link(K, w, mask);
            if (rel.num_vertices() == 0) throw DomainError(where + ": empty relative link at " + K.label(w));
            ProvidedCone pc = stage.provider(rel, w);
            if (auto v = verify_cone(pc.cone, rel); !v) throw Error(where + ": relative-link cone at " + K.label(w) + " fails: " + v.message);
            if (pc.cone.degree() < n - 2) throw Error(where + ": relative-link cone degree too small at " + K.label(w));
            ++rec.link_methods[pc.method];
            if (pc.fallback) ++ledger.fallbacks;
            if (!pc.identified) ++ledger.unidentified;
            for (auto& l : pc.ledgers) ledger.children.push_back(std::move(l));
            const RadiusProfile rp = radius_profile(pc.cone);
            if (link_max.values.size() < rp.values.size()) link_max.values.resize(rp.values.size(), 0);
            for (std::size_t i = 0; i < rp.values.size(); ++i) link_max.values[i] = std::max(link_max.values[i], rp.values[i]);
            links.emplace(w, pc.cone.mapped(embed_by_labels(rel, K)));
        }
        ConeFunction next = extend_by_vertex_set(K, mask, current, stage.vertices, links);
        for (Vertex w : stage.vertices) mask[static_cast<std::size_t>(w)] = true;
        if (auto v = verify_cone(next, K, mask); !v) throw Error(where + ": extended cone fails verification: " + v.message);
        const RadiusProfile before = radius_profile(current);
        rec.radius = radius_profile(next);
        rec.extension_bound = stage.vertices.empty() ? before.values : extension_radius_bound(before, link_max, next.degree());
        for (int j = -1; j <= next.degree(); ++j)
            if (rec.radius.at(j) > rec.extension_bound[static_cast<std::size_t>(j + 1)]) rec.within_extension = false;
        if (ledger.tracked && stage.tracked) {
            recursion = sat_mul(ledger.S_n, sat_add(recursion, 1));
            rec.ledger_bound = recursion;
            rec.within_ledger = rec.radius.max() <= recursion;
        }
        ledger.stages.push_back(std::move(rec));
        current = std::move(next);
    }
    for (std::size_t v = 0; v < mask.size(); ++v)
        if (!mask[v]) throw DomainError("filtration '" + plan.name + "' does not reach vertex " + K.label(static_cast<Vertex>(v)));
    if (auto v = verify_cone(current, K); !v) throw Error("filtration '" + plan.name + "': final cone fails verification: " + v.message);
    ledger.final_radius = radius_profile(current);
    if (ledger.tracked) ledger.final_within_R = ledger.final_radius.max() <= ledger.R_n;
    return {std::move(current), std::move(ledger)};
}

}  // namespace hdx

namespace hdx {

std::optional<ConeFunction> transfer_by_labels(const Complex& from, const ConeFunction& cone, const Complex& to) {
    if (from.num_vertices() != to.num_vertices() || from.dimension() != to.dimension()) return std::nullopt;
    for (int k = 0; k <= from.dimension(); ++k)
        if (from.count(k) != to.count(k)) return std::nullopt;
    std::vector<Vertex> map(from.num_vertices());
    for (Vertex v = 0; v < static_cast<Vertex>(from.num_vertices()); ++v) {
        auto t = to.find_vertex(from.label(v));
        if (!t) return std::nullopt;
        map[static_cast<std::size_t>(v)] = *t;
    }
    for (const auto& m : from.maximal_faces()) {
        Face g;
        for (Vertex v : m) g.push_back(map[static_cast<std::size_t>(v)]);
        std::sort(g.begin(), g.end());
        if (!to.contains(g)) return std::nullopt;
    }
    return cone.mapped(map);
}

ConeFunction apex_star_on(const Complex& target, const std::vector<bool>& mask, Vertex apex, int k) {
    std::vector<Vertex> verts;
    for (Vertex v = 0; v < static_cast<Vertex>(target.num_vertices()); ++v)
        if (mask[static_cast<std::size_t>(v)]) verts.push_back(v);
    const Complex sub = full_subcomplex(target, verts);
    const auto local = sub.vertex(target.label(apex));
    return apex_star_cone(sub, local, k).mapped(embed_by_labels(sub, target));
}

}  // namespace hdx
