#include "hdx/expansion.hpp"

#include "hdx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace hdx {

namespace {

void require_walkable(const Complex& X) {
    if (!X.is_pure()) throw UnsupportedError("random walk needs a pure complex");
    if (X.dimension() < 1) throw DomainError("random walk needs a complex of dimension at least 1");
}

// Edge weights w({u,v}) keyed by edge index, and per-vertex sums.
struct EdgeWeights {
    std::vector<Rational> edge;
    std::vector<Rational> vertex_sum;
};

EdgeWeights edge_weights(const Complex& X) {
    EdgeWeights w;
    const auto& edges = X.faces(1);
    w.edge.reserve(edges.size());
    w.vertex_sum.assign(X.num_vertices(), Rational(0));
    const std::int64_t denom = binomial(X.dimension() + 1, 2) * static_cast<std::int64_t>(X.count(X.dimension()));
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Rational r(X.top_coface_count(1, i), denom);
        w.edge.push_back(r);
        w.vertex_sum[static_cast<std::size_t>(edges[i][0])] += r;
        w.vertex_sum[static_cast<std::size_t>(edges[i][1])] += r;
    }
    return w;
}

double to_double(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

}  // namespace

std::vector<std::vector<Rational>> walk_matrix(const Complex& X) {
    require_walkable(X);
    const auto w = edge_weights(X);
    const auto n = X.num_vertices();
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
    const auto& edges = X.faces(1);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto u = static_cast<std::size_t>(edges[i][0]);
        const auto v = static_cast<std::size_t>(edges[i][1]);
        m[u][v] = w.edge[i] / w.vertex_sum[u];
        m[v][u] = w.edge[i] / w.vertex_sum[v];
    }
    for (std::size_t u = 0; u < n; ++u) {
        const Rational total = std::accumulate(m[u].begin(), m[u].end(), Rational(0));
        if (total != Rational(1)) throw DomainError("walk matrix row " + std::to_string(u) + " does not sum to 1");
    }
    return m;
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> symmetrized_walk(const Complex& X) {
    require_walkable(X);
    const auto w = edge_weights(X);
    const auto n = static_cast<Eigen::Index>(X.num_vertices());
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> s = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    const auto& edges = X.faces(1);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto u = edges[i][0];
        const auto v = edges[i][1];
        using std::sqrt;
        const Scalar value = static_cast<Scalar>(to_double(w.edge[i])) /
                             sqrt(static_cast<Scalar>(to_double(w.vertex_sum[static_cast<std::size_t>(u)])) *
                                  static_cast<Scalar>(to_double(w.vertex_sum[static_cast<std::size_t>(v)])));
        s(u, v) = value;
        s(v, u) = value;
    }
    return s;
}

template Eigen::MatrixXd symmetrized_walk<double>(const Complex&);
template Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> symmetrized_walk<long double>(const Complex&);

JacobiResult jacobi_eigenvalues(Eigen::MatrixXd a, double tolerance, int max_sweeps) {
    JacobiResult out;
    const Eigen::Index n = a.rows();
    auto off = [&] {
        double s = 0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = 0; q < n; ++q)
                if (p != q) s += a(p, q) * a(p, q);
        return std::sqrt(s);
    };
    out.off_diagonal = off();
    while (out.off_diagonal > tolerance && out.sweeps < max_sweeps) {
        for (Eigen::Index p = 0; p < n - 1; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        ++out.sweeps;
        out.off_diagonal = off();
    }
    out.converged = out.off_diagonal <= tolerance;
    out.eigenvalues = a.diagonal();
    std::sort(out.eigenvalues.data(), out.eigenvalues.data() + n, std::greater<>());
    return out;
}

namespace {

SecondEigenvalue iterative_second(const Complex& X) {
    const auto w = edge_weights(X);
    const auto n = X.num_vertices();
    struct Entry {
        std::size_t to;
        double value;
    };
    std::vector<std::vector<Entry>> rows(n);
    const auto& edges = X.faces(1);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto u = static_cast<std::size_t>(edges[i][0]);
        const auto v = static_cast<std::size_t>(edges[i][1]);
        const double value = to_double(w.edge[i]) / std::sqrt(to_double(w.vertex_sum[u]) * to_double(w.vertex_sum[v]));
        rows[u].push_back({v, value});
        rows[v].push_back({u, value});
    }
    Eigen::VectorXd top(static_cast<Eigen::Index>(n));
    for (std::size_t u = 0; u < n; ++u) top(static_cast<Eigen::Index>(u)) = std::sqrt(to_double(w.vertex_sum[u]));
    top.normalize();
    auto apply = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
        for (std::size_t u = 0; u < n; ++u)
            for (const auto& e : rows[u]) y(static_cast<Eigen::Index>(u)) += e.value * x(static_cast<Eigen::Index>(e.to));
        return y;
    };
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (std::size_t u = 0; u < n; ++u) x(static_cast<Eigen::Index>(u)) = std::sin(static_cast<double>(u) + 1.0);
    x -= x.dot(top) * top;
    x.normalize();
    double lambda = 0;
    double residual = 1;
    for (int it = 0; it < 100000; ++it) {
        Eigen::VectorXd sx = apply(x);
        lambda = x.dot(sx);
        residual = (sx - lambda * x).norm();
        if (residual < 1e-9) break;
        Eigen::VectorXd y = sx + x;
        y -= y.dot(top) * top;
        x = y.normalized();
    }
    return {lambda, residual, true, "shifted power iteration"};
}

}  // namespace

SecondEigenvalue second_eigenvalue(const Complex& X, const Caps& caps) {
    require_walkable(X);
    if (!is_connected(X)) return {1.0, 0.0, false, "disconnected"};
    if (X.num_vertices() <= caps.jacobi_size) {
        auto r = jacobi_eigenvalues(symmetrized_walk<double>(X));
        return {r.eigenvalues(1), r.off_diagonal, true, r.converged ? "jacobi" : "jacobi (not converged)"};
    }
    return iterative_second(X);
}

SpectralReport local_spectral_profile(const Complex& X, const Caps& caps, unsigned threads) {
    if (!X.is_pure()) throw UnsupportedError("local spectral profile needs a pure complex");
    const int n = X.dimension();
    if (n < 1) throw DomainError("local spectral profile needs dimension at least 1");
    std::vector<Face> faces;
    for (int k = -1; k <= n - 2; ++k)
        for (const auto& f : X.faces(k)) faces.push_back(f);
    SpectralReport report;
    report.links.resize(faces.size());
    auto work = [&](std::size_t begin, std::size_t step) {
        for (std::size_t i = begin; i < faces.size(); i += step) {
            const Complex lk = link(X, faces[i]);
            report.links[i] = {faces[i], lk.num_vertices(), second_eigenvalue(lk, caps)};
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(faces.size())));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, t, workers);
        for (auto& t : pool) t.join();
    }
    for (const auto& l : report.links) {
        report.lambda = std::max(report.lambda, l.spectrum.value);
        report.all_connected = report.all_connected && l.spectrum.connected;
    }
    return report;
}

// ---------------------------------------------------------------------------------------------

namespace {

// Cochains on X(k) with values in Z/m packed as mixed-radix codes.
class CochainSpace {
public:
    CochainSpace(const Complex& X, int k, std::int64_t m, const Caps& caps) : X_(X), k_(k), m_(m) {
        if (m < 2) throw DomainError("coefficients must be Z/m with m >= 2");
        if (m > 255) throw UnsupportedError("moduli above 255 are not supported by the exhaustive search");
        if (!X.is_pure()) throw UnsupportedError("expansion constants need a pure complex");
        const int n = X.dimension();
        if (k < 0 || k > n) throw DomainError("cochain degree out of range");
        size_ = X.count(k);
        total_ = 1;
        for (std::size_t i = 0; i < size_; ++i) {
            if (total_ > caps.configurations / static_cast<std::uint64_t>(m))
                throw ResourceError("exhaustive search needs " + std::to_string(m) + "^" + std::to_string(size_) + " configurations, over the cap of " +
                                    std::to_string(caps.configurations) + "; use the cone bound instead");
            total_ *= static_cast<std::uint64_t>(m);
        }
        const std::int64_t top = static_cast<std::int64_t>(X.count(n));
        denom_k_ = binomial(n + 1, k + 1) * top;
        denom_up_ = k < n ? binomial(n + 1, k + 2) * top : 1;
        for (std::size_t i = 0; i < size_; ++i) count_k_.push_back(X.top_coface_count(k, i));
        if (k < n) {
            const auto& up = X.faces(k + 1);
            for (std::size_t j = 0; j < up.size(); ++j) {
                count_up_.push_back(X.top_coface_count(k + 1, j));
                std::vector<std::pair<std::size_t, int>> row;
                for (std::size_t drop = 0; drop < up[j].size(); ++drop) {
                    Face sub;
                    for (std::size_t i = 0; i < up[j].size(); ++i)
                        if (i != drop) sub.push_back(up[j][i]);
                    row.emplace_back(*index_k(sub), drop % 2 == 0 ? 1 : -1);
                }
                incidence_.push_back(std::move(row));
            }
        }
        // Images of unit (k-1)-cochains; the augmentation sends the empty face to all ones.
        const auto& down = X.faces(k - 1);
        for (std::size_t s = 0; s < down.size(); ++s) {
            std::vector<int> gen(size_, 0);
            for (std::size_t i = 0; i < size_; ++i) {
                const Face& f = X.faces(k)[i];
                for (std::size_t drop = 0; drop < f.size(); ++drop) {
                    Face sub;
                    for (std::size_t t = 0; t < f.size(); ++t)
                        if (t != drop) sub.push_back(f[t]);
                    if (sub == down[s]) gen[i] = static_cast<int>(reduce_mod(drop % 2 == 0 ? 1 : -1, m_));
                }
            }
            boundary_generators_.push_back(encode(gen));
        }
    }

    std::uint64_t total() const { return total_; }
    std::size_t size() const { return size_; }

    std::vector<int> decode(std::uint64_t code) const {
        std::vector<int> d(size_);
        for (std::size_t i = 0; i < size_; ++i) {
            d[i] = static_cast<int>(code % static_cast<std::uint64_t>(m_));
            code /= static_cast<std::uint64_t>(m_);
        }
        return d;
    }
    std::uint64_t encode(const std::vector<int>& d) const {
        std::uint64_t code = 0;
        for (std::size_t i = size_; i-- > 0;) code = code * static_cast<std::uint64_t>(m_) + static_cast<std::uint64_t>(d[i]);
        return code;
    }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        if (m_ == 2) return a ^ b;
        std::uint64_t out = 0, place = 1;
        const auto m = static_cast<std::uint64_t>(m_);
        for (std::size_t i = 0; i < size_; ++i) {
            out += ((a % m + b % m) % m) * place;
            a /= m;
            b /= m;
            place *= m;
        }
        return out;
    }

    // Numerator of the norm over the common denominator for degree k.
    std::int64_t norm_numerator(std::uint64_t code) const {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < size_; ++i) {
            if (code % static_cast<std::uint64_t>(m_) != 0) s += count_k_[i];
            code /= static_cast<std::uint64_t>(m_);
        }
        return s;
    }
    // Numerator of ||d phi|| over the common denominator for degree k + 1.
    std::int64_t coboundary_numerator(std::uint64_t code) const {
        if (incidence_.empty()) return 0;
        const auto d = decode(code);
        std::int64_t s = 0;
        for (std::size_t j = 0; j < incidence_.size(); ++j) {
            std::int64_t v = 0;
            for (const auto& [i, sign] : incidence_[j]) v += sign * d[i];
            if (reduce_mod(v, m_) != 0) s += count_up_[j];
        }
        return s;
    }
    Rational norm(std::uint64_t code) const { return Rational(norm_numerator(code), denom_k_); }
    Rational coboundary_norm(std::uint64_t code) const { return Rational(coboundary_numerator(code), denom_up_); }

    std::vector<std::uint64_t> boundaries() const {
        std::vector<bool> seen(total_, false);
        std::vector<std::uint64_t> out{0};
        seen[0] = true;
        for (std::size_t head = 0; head < out.size(); ++head)
            for (auto g : boundary_generators_) {
                const auto next = add(out[head], g);
                if (!seen[next]) {
                    seen[next] = true;
                    out.push_back(next);
                }
            }
        std::sort(out.begin(), out.end());
        return out;
    }
    std::vector<std::uint64_t> cocycles() const {
        std::vector<std::uint64_t> out;
        for (std::uint64_t c = 0; c < total_; ++c)
            if (coboundary_numerator(c) == 0) out.push_back(c);
        return out;
    }

    Cochain to_cochain(std::uint64_t code) const {
        Cochain phi(k_, m_);
        const auto d = decode(code);
        for (std::size_t i = 0; i < size_; ++i)
            if (d[i] != 0) phi.add(X_.faces(k_)[i], d[i]);
        return phi;
    }

private:
    std::optional<std::size_t> index_k(const Face& f) const {
        const auto& level = X_.faces(k_);
        auto it = std::lower_bound(level.begin(), level.end(), f);
        if (it == level.end() || *it != f) return std::nullopt;
        return static_cast<std::size_t>(it - level.begin());
    }

    const Complex& X_;
    int k_;
    std::int64_t m_;
    std::size_t size_ = 0;
    std::uint64_t total_ = 1;
    std::int64_t denom_k_ = 1;
    std::int64_t denom_up_ = 1;
    std::vector<std::int64_t> count_k_, count_up_;
    std::vector<std::vector<std::pair<std::size_t, int>>> incidence_;
    std::vector<std::uint64_t> boundary_generators_;
};

// min over nonzero cosets of C / S of ||d phi|| / ||phi - S||, together with a least-norm representative.
ExpansionValue quotient_minimum(const CochainSpace& space, const std::vector<std::uint64_t>& subgroup) {
    ExpansionValue best;
    std::vector<bool> visited(space.total(), false);
    for (auto s : subgroup) visited[s] = true;
    for (std::uint64_t phi = 0; phi < space.total(); ++phi) {
        if (visited[phi]) continue;
        std::int64_t least = std::numeric_limits<std::int64_t>::max();
        std::uint64_t arg = phi;
        for (auto s : subgroup) {
            const auto psi = space.add(phi, s);
            visited[psi] = true;
            const auto n = space.norm_numerator(psi);
            if (n < least || (n == least && psi < arg)) {
                least = n;
                arg = psi;
            }
        }
        const Rational ratio = space.coboundary_norm(arg) / space.norm(arg);
        if (!best.value || ratio < *best.value) {
            best.value = ratio;
            best.witness = space.to_cochain(arg);
        }
    }
    return best;
}

}  // namespace

ExpansionReport brute_force_expansion(const Complex& X, int k, std::int64_t modulus, const Caps& caps) {
    CochainSpace space(X, k, modulus, caps);
    ExpansionReport r;
    r.degree = k;
    r.modulus = modulus;
    r.configurations = space.total();
    const auto b = space.boundaries();
    const auto z = space.cocycles();
    r.boundaries = b.size();
    r.cocycles = z.size();
    r.coboundary = quotient_minimum(space, b);
    r.cosystolic = quotient_minimum(space, z);
    for (auto c : z) {
        if (std::binary_search(b.begin(), b.end(), c)) continue;
        const Rational n = space.norm(c);
        if (!r.systole.value || n < *r.systole.value) {
            r.systole.value = n;
            r.systole.witness = space.to_cochain(c);
        }
    }
    return r;
}

ExpansionValue coboundary_constant(const Complex& X, int k, std::int64_t modulus, const Caps& caps) {
    CochainSpace space(X, k, modulus, caps);
    return quotient_minimum(space, space.boundaries());
}

ExpansionValue cosystolic_constant(const Complex& X, int k, std::int64_t modulus, const Caps& caps) {
    CochainSpace space(X, k, modulus, caps);
    return quotient_minimum(space, space.cocycles());
}

std::optional<Rational> systole(const Complex& X, int k, std::int64_t modulus, const Caps& caps) {
    return brute_force_expansion(X, k, modulus, caps).systole.value;
}

bool reduced_cohomology_nonzero(const std::vector<HomologyGroup>& homology, int k, std::int64_t modulus) {
    for (const auto& h : homology) {
        if (h.degree == k) {
            if (h.rank > 0) return true;
            for (auto t : h.torsion)
                if (std::gcd(t, modulus) > 1) return true;
        }
        if (h.degree == k - 1)
            for (auto t : h.torsion)
                if (std::gcd(t, modulus) > 1) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------------------------

std::string to_string(BoundVerdict v) {
    switch (v) {
        case BoundVerdict::Holds: return "holds";
        case BoundVerdict::Violated: return "violated";
        case BoundVerdict::HypothesisUnverified: return "hypothesis unverified";
        case BoundVerdict::BoundOnly: return "bound only";
    }
    return "unknown";
}

ConeBound cone_bound_check(const Complex& X, std::int64_t radius, int k, bool transitive, std::optional<Rational> measured) {
    const int n = X.dimension();
    if (k < 0 || k > n - 1) throw DomainError("cone bound degree must lie in 0..n-1");
    if (radius <= 0) throw DomainError("cone radius must be positive");
    ConeBound out;
    out.degree = k;
    out.radius = radius;
    out.bound = Rational(1, radius * binomial(n + 1, k + 1));
    out.measured = measured;
    if (!transitive) out.verdict = BoundVerdict::HypothesisUnverified;
    else if (measured) out.verdict = *measured >= out.bound ? BoundVerdict::Holds : BoundVerdict::Violated;
    else out.verdict = BoundVerdict::BoundOnly;
    return out;
}

LocalToGlobalReport local_to_global_report(const Complex& X, std::int64_t modulus, const Caps& caps, unsigned threads) {
    LocalToGlobalReport r;
    r.dimension = X.dimension();
    r.applicable = r.dimension >= 3;
    const auto spectral = local_spectral_profile(X, caps, threads);
    r.lambda = spectral.lambda;
    r.spectral_connected = spectral.all_connected;
    for (int k = 0; k <= r.dimension - 2; ++k)
        for (const auto& tau : X.faces(k)) {
            const Complex lk = link(X, tau);
            for (int j = 0; j < lk.dimension(); ++j) {
                try {
                    auto h = coboundary_constant(lk, j, modulus, caps);
                    ++r.links_evaluated;
                    if (h.value && (!r.link_coboundary_min || *h.value < *r.link_coboundary_min)) r.link_coboundary_min = h.value;
                } catch (const ResourceError&) {
                    ++r.links_skipped;
                }
            }
        }
    std::string hyp = "links are " + std::string(spectral.all_connected ? "connected" : "not all connected") + " with lambda = " + std::to_string(r.lambda);
    if (r.link_coboundary_min) hyp += ", link coboundary constants >= " + to_string(*r.link_coboundary_min);
    if (r.links_skipped) hyp += " (" + std::to_string(r.links_skipped) + " link degrees over the cap)";
    r.conclusion = r.applicable ? hyp + ". If lambda is below the non-explicit threshold for these link constants, the (n-1)-skeleton is an "
                                        "(eps, mu, Z/" + std::to_string(modulus) + ")-cosystolic expander; eps and mu are not computable here."
                                : hyp + ". The local-to-global statement needs dimension at least 3.";
    return r;
}

}  // namespace hdx
