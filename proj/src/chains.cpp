#include "hdx/chains.hpp"

#include "hdx/errors.hpp"
#include "hdx/smith.hpp"

#include <boost/algorithm/string.hpp>

namespace hdx {

CoefficientGroup CoefficientGroup::cyclic(std::int64_t m) {
    if (m < 2) throw DomainError("cyclic coefficient group needs modulus >= 2");
    return {{m}};
}

CoefficientGroup CoefficientGroup::parse(const std::string& text) {
    std::vector<std::string> parts;
    boost::split(parts, text, boost::is_any_of("+,"));
    CoefficientGroup g;
    g.moduli.clear();
    for (auto part : parts) {
        boost::trim(part);
        if (part == "Z") {
            g.moduli.push_back(0);
            continue;
        }
        if (boost::starts_with(part, "Z/")) part = part.substr(2);
        try {
            std::size_t used = 0;
            const long long m = std::stoll(part, &used);
            if (used != part.size() || m < 2) throw MalformedInput("bad modulus");
            g.moduli.push_back(m);
        } catch (const std::logic_error&) {
            throw MalformedInput("cannot parse coefficient group '" + text + "'");
        }
    }
    if (g.moduli.empty()) throw MalformedInput("empty coefficient group");
    return g;
}

std::string describe_modulus(std::int64_t modulus) {
    return modulus == 0 ? std::string("Z") : "Z/" + std::to_string(modulus);
}

std::string CoefficientGroup::describe() const {
    std::string s;
    for (std::size_t i = 0; i < moduli.size(); ++i) {
        if (i) s += "+";
        s += describe_modulus(moduli[i]);
    }
    return s;
}

Chain boundary(const Chain& a) {
    Chain out(a.degree() - 1, a.modulus());
    if (a.degree() < 0) return out;
    for (const auto& [f, c] : a.terms()) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            Face sub;
            sub.reserve(f.size() - 1);
            for (std::size_t j = 0; j < f.size(); ++j)
                if (j != i) sub.push_back(f[j]);
            out.add(sub, (i % 2 == 0) ? c : -c);
        }
    }
    return out;
}

Chain boundary(const Chain& a, const Complex& X) {
    for (const auto& [f, c] : a.terms())
        if (!X.contains(f)) throw DomainError("chain simplex not in complex");
    return boundary(a);
}

Cochain coboundary(const Cochain& phi, const Complex& X) {
    const int k = phi.degree();
    if (k < -1 || k >= X.dimension()) throw DomainError("coboundary degree out of range");
    Cochain out(k + 1, phi.modulus());
    for (const auto& [tau, c] : phi.terms()) {
        if (!X.contains(tau)) throw DomainError("cochain simplex not in complex");
        std::vector<Vertex> candidates;
        if (tau.empty()) {
            for (Vertex v = 0; v < static_cast<Vertex>(X.num_vertices()); ++v) candidates.push_back(v);
        } else {
            candidates = X.neighbors(tau[0]);
        }
        for (Vertex u : candidates) {
            if (std::binary_search(tau.begin(), tau.end(), u)) continue;
            Face sigma = tau;
            auto pos = std::lower_bound(sigma.begin(), sigma.end(), u);
            const auto index = pos - sigma.begin();
            sigma.insert(pos, u);
            if (!X.contains(sigma)) continue;
            out.add(sigma, (index % 2 == 0) ? c : -c);
        }
    }
    return out;
}

Rational norm(const Cochain& phi, const Complex& X) {
    Rational total(0);
    for (const auto& [f, c] : phi.terms()) total += weight(X, f);
    return total;
}

std::int64_t pairing(const Cochain& phi, const Chain& a) {
    std::int64_t s = 0;
    for (const auto& [f, c] : a.terms()) s += c * phi.coeff(f);
    return reduce_mod(s, phi.modulus());
}

Chain bracket_vertex(Vertex v, const Chain& a, const Complex* X) {
    Chain out(a.degree() + 1, a.modulus());
    for (const auto& [f, c] : a.terms()) {
        Face g;
        g.reserve(f.size() + 1);
        g.push_back(v);
        g.insert(g.end(), f.begin(), f.end());
        Face check = g;
        if (canonicalize(check) == 0 || (X && !X->contains(check)))
            throw DomainError("simplex cannot be joined with the vertex");
        out.add_oriented(std::move(g), c);
    }
    return out;
}

Chain bracket_chains(const Chain& a1, const Chain& a2, const Complex* X) {
    if (a1.modulus() != a2.modulus()) throw DomainError("coefficient mismatch in bracket");
    Chain out(a1.degree() + a2.degree() + 1, a1.modulus());
    for (const auto& [f1, c1] : a1.terms())
        for (const auto& [f2, c2] : a2.terms()) {
            Face g = f1;
            g.insert(g.end(), f2.begin(), f2.end());
            Face check = g;
            if (canonicalize(check) == 0 || (X && !X->contains(check)))
                throw DomainError("factor mismatch in bracket of chains");
            out.add_oriented(std::move(g), c1 * c2);
        }
    return out;
}

IntMatrix boundary_matrix(const Complex& X, int k) {
    const auto& rows = X.faces(k - 1);
    const auto& cols = X.faces(k);
    IntMatrix m = IntMatrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const Face& f = cols[j];
        for (std::size_t i = 0; i < f.size(); ++i) {
            Face sub;
            for (std::size_t t = 0; t < f.size(); ++t)
                if (t != i) sub.push_back(f[t]);
            const auto r = X.index_of(sub);
            m(static_cast<Eigen::Index>(*r), static_cast<Eigen::Index>(j)) += (i % 2 == 0) ? 1 : -1;
        }
    }
    return m;
}

std::vector<HomologyGroup> reduced_homology_ranks(const Complex& X) {
    const int n = X.dimension();
    // smith[k] describes the boundary from degree k to k-1, for k = 0..n+1
    std::vector<SmithForm<std::int64_t>> smith;
    for (int k = 0; k <= n + 1; ++k) smith.push_back(smith_normal_form<std::int64_t>(boundary_matrix(X, k)));
    std::vector<HomologyGroup> out;
    for (int k = -1; k <= n; ++k) {
        const auto size = static_cast<std::int64_t>(X.count(k));
        const std::int64_t rank_out = k >= 0 ? smith[static_cast<std::size_t>(k)].rank : 0;
        const auto& next = smith[static_cast<std::size_t>(k + 1)];
        HomologyGroup h{k, size - rank_out - next.rank, {}};
        for (auto d : next.invariants)
            if (d > 1) h.torsion.push_back(d);
        out.push_back(std::move(h));
    }
    return out;
}

std::int64_t reduced_cohomology_dimension_mod(const std::vector<HomologyGroup>& homology, int k, std::int64_t p) {
    std::int64_t dim = 0;
    for (const auto& h : homology) {
        if (h.degree == k) {
            dim += h.rank;
            for (auto t : h.torsion)
                if (t % p == 0) ++dim;
        }
        if (h.degree == k - 1)
            for (auto t : h.torsion)
                if (t % p == 0) ++dim;
    }
    return dim;
}

}  // namespace hdx
