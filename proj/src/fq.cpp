#include "hdx/fq.hpp"

#include "hdx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace hdx {

namespace {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace

void trim(Polynomial& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Polynomial poly_add(const Field& F, const Polynomial& a, const Polynomial& b) {
    Polynomial r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = F.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
    trim(r);
    return r;
}

Polynomial poly_mul(const Field& F, const Polynomial& a, const Polynomial& b) {
    if (a.empty() || b.empty()) return {};
    Polynomial r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    trim(r);
    return r;
}

Polynomial poly_mod(const Field& F, Polynomial a, const Polynomial& m) {
    trim(a);
    if (m.empty()) throw DomainError("polynomial division by zero");
    const FieldElement lead_inv = F.inv(m.back());
    while (a.size() >= m.size()) {
        const FieldElement factor = F.mul(a.back(), lead_inv);
        const std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = F.sub(a[shift + i], F.mul(factor, m[i]));
        trim(a);
    }
    return a;
}

bool is_irreducible(const Field& F, const Polynomial& f_in) {
    Polynomial f = f_in;
    trim(f);
    const int s = static_cast<int>(f.size()) - 1;
    if (s < 1) return false;
    const int q = F.size();
    for (int d = 1; 2 * d <= s; ++d) {
        std::uint64_t total = 1;
        for (int i = 0; i < d; ++i) total *= static_cast<std::uint64_t>(q);
        for (std::uint64_t code = 0; code < total; ++code) {
            Polynomial g(static_cast<std::size_t>(d) + 1, 0);
            std::uint64_t c = code;
            for (int i = 0; i < d; ++i) {
                g[static_cast<std::size_t>(i)] = static_cast<FieldElement>(c % static_cast<std::uint64_t>(q));
                c /= static_cast<std::uint64_t>(q);
            }
            g[static_cast<std::size_t>(d)] = 1;
            if (poly_mod(F, f, g).empty()) return false;
        }
    }
    return true;
}

std::shared_ptr<const Field> Field::prime(int p) {
    if (!is_prime(p)) throw DomainError("field characteristic must be prime");
    if (p > 256) throw UnsupportedError("fields larger than 256 elements are not supported");
    auto F = std::shared_ptr<Field>(new Field());
    F->p_ = p;
    F->q_ = p;
    F->add_.resize(static_cast<std::size_t>(p * p));
    F->mul_.resize(static_cast<std::size_t>(p * p));
    F->neg_.resize(static_cast<std::size_t>(p));
    F->inv_.assign(static_cast<std::size_t>(p), 0);
    for (int a = 0; a < p; ++a) {
        F->neg_[static_cast<std::size_t>(a)] = static_cast<FieldElement>((p - a) % p);
        for (int b = 0; b < p; ++b) {
            F->add_[static_cast<std::size_t>(a * p + b)] = static_cast<FieldElement>((a + b) % p);
            F->mul_[static_cast<std::size_t>(a * p + b)] = static_cast<FieldElement>((a * b) % p);
            if ((a * b) % p == 1) F->inv_[static_cast<std::size_t>(a)] = static_cast<FieldElement>(b);
        }
    }
    F->generator_ = p > 1 ? 1 : 0;
    return F;
}

std::shared_ptr<const Field> Field::extension(std::shared_ptr<const Field> base, const std::vector<FieldElement>& poly_in) {
    Polynomial poly = poly_in;
    trim(poly);
    const int s = static_cast<int>(poly.size()) - 1;
    if (s < 1) throw DomainError("extension polynomial must have degree >= 1");
    if (poly.back() != 1) throw DomainError("extension polynomial must be monic");
    for (auto c : poly)
        if (c >= base->size()) throw DomainError("polynomial coefficient outside the base field");
    if (!is_irreducible(*base, poly)) throw DomainError("extension polynomial is reducible");
    long long q = 1;
    for (int i = 0; i < s; ++i) q *= base->size();
    if (q > 256) throw UnsupportedError("fields larger than 256 elements are not supported");
    auto F = std::shared_ptr<Field>(new Field());
    F->p_ = base->characteristic();
    F->q_ = static_cast<int>(q);
    F->degree_over_prime_ = base->degree() * s;
    F->base_ = base;
    F->poly_ = poly;
    const int b = base->size();
    auto decode = [&](int code) {
        Polynomial v(static_cast<std::size_t>(s), 0);
        for (int i = 0; i < s; ++i) {
            v[static_cast<std::size_t>(i)] = static_cast<FieldElement>(code % b);
            code /= b;
        }
        trim(v);
        return v;
    };
    auto encode = [&](const Polynomial& v) {
        int code = 0;
        for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i) code = code * b + v[static_cast<std::size_t>(i)];
        return static_cast<FieldElement>(code);
    };
    const auto qs = static_cast<std::size_t>(q);
    F->add_.resize(qs * qs);
    F->mul_.resize(qs * qs);
    F->neg_.resize(qs);
    F->inv_.assign(qs, 0);
    std::vector<Polynomial> all;
    for (int c = 0; c < q; ++c) all.push_back(decode(c));
    for (std::size_t a = 0; a < qs; ++a) {
        F->neg_[a] = encode(poly_mul(*base, all[a], Polynomial{base->neg(1)}));
        for (std::size_t c = 0; c < qs; ++c) {
            F->add_[a * qs + c] = encode(poly_add(*base, all[a], all[c]));
            const FieldElement m = encode(poly_mod(*base, poly_mul(*base, all[a], all[c]), poly));
            F->mul_[a * qs + c] = m;
            if (m == 1) F->inv_[a] = static_cast<FieldElement>(c);
        }
    }
    F->generator_ = static_cast<FieldElement>(b);
    return F;
}

std::shared_ptr<const Field> Field::galois(int p, int s) {
    auto base = prime(p);
    if (s == 1) return base;
    if (s < 1) throw DomainError("field degree must be >= 1");
    std::uint64_t total = 1;
    for (int i = 0; i < s; ++i) total *= static_cast<std::uint64_t>(p);
    if (total > 256) throw UnsupportedError("fields larger than 256 elements are not supported");
    for (std::uint64_t code = 0; code < total; ++code) {
        Polynomial f(static_cast<std::size_t>(s) + 1, 0);
        std::uint64_t c = code;
        for (int i = 0; i < s; ++i) {
            f[static_cast<std::size_t>(i)] = static_cast<FieldElement>(c % static_cast<std::uint64_t>(p));
            c /= static_cast<std::uint64_t>(p);
        }
        f[static_cast<std::size_t>(s)] = 1;
        if (is_irreducible(*base, f)) return extension(base, f);
    }
    throw DomainError("no irreducible polynomial found");
}

std::string Field::describe() const {
    return "GF(" + std::to_string(p_) + "^" + std::to_string(degree_over_prime_) + ")";
}

FieldElement Field::inv(FieldElement a) const {
    if (a == 0) throw DomainError("inverse of zero in a finite field");
    return inv_[a];
}

FieldElement Field::pow(FieldElement a, std::uint64_t e) const {
    FieldElement r = 1;
    FieldElement b = a;
    while (e) {
        if (e & 1u) r = mul(r, b);
        b = mul(b, b);
        e >>= 1u;
    }
    return r;
}

FieldElement Field::from_int(std::int64_t n) const {
    std::int64_t m = n % p_;
    if (m < 0) m += p_;
    FieldElement r = 0;
    for (std::int64_t i = 0; i < m; ++i) r = add(r, 1);
    return r;
}

std::vector<FieldElement> Field::prime_basis() const {
    if (!base_) return {1};
    std::vector<FieldElement> basis;
    const auto sub = base_->prime_basis();
    const int s = static_cast<int>(poly_.size()) - 1;
    int power = 1;
    for (int i = 0; i < s; ++i) {
        for (auto b : sub) basis.push_back(static_cast<FieldElement>(b * power));
        power *= base_->size();
    }
    return basis;
}

FqMatrix fq_multiply(const Field& F, const FqMatrix& a, const FqMatrix& b) {
    if (a.cols() != b.rows()) throw DomainError("matrix shape mismatch");
    FqMatrix r = FqMatrix::Zero(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < a.cols(); ++k) {
            const FieldElement x = a(i, k);
            if (x == 0) continue;
            for (Eigen::Index j = 0; j < b.cols(); ++j)
                if (b(k, j) != 0) r(i, j) = F.add(r(i, j), F.mul(x, b(k, j)));
        }
    return r;
}

FqMatrix fq_transpose(const FqMatrix& a) { return a.transpose(); }

std::vector<int> fq_rref(const Field& F, FqMatrix& m) {
    std::vector<int> pivots;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
        Eigen::Index sel = -1;
        for (Eigen::Index r = row; r < m.rows(); ++r)
            if (m(r, col) != 0) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        m.row(row).swap(m.row(sel));
        const FieldElement scale = F.inv(m(row, col));
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(row, c) = F.mul(m(row, c), scale);
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col) == 0) continue;
            const FieldElement factor = m(r, col);
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                if (m(row, c) != 0) m(r, c) = F.sub(m(r, c), F.mul(factor, m(row, c)));
        }
        pivots.push_back(static_cast<int>(col));
        ++row;
    }
    m.conservativeResize(row, m.cols());
    return pivots;
}

int fq_rank(const Field& F, FqMatrix m) { return static_cast<int>(fq_rref(F, m).size()); }

FqMatrix fq_null_space(const Field& F, const FqMatrix& m_in) {
    FqMatrix m = m_in;
    const auto pivots = fq_rref(F, m);
    const auto n = m.cols();
    std::vector<char> is_pivot(static_cast<std::size_t>(n), 0);
    for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = 1;
    std::vector<FqMatrix> rows;
    for (Eigen::Index free = 0; free < n; ++free) {
        if (is_pivot[static_cast<std::size_t>(free)]) continue;
        FqMatrix v = FqMatrix::Zero(1, n);
        v(0, free) = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v(0, pivots[r]) = F.neg(m(static_cast<Eigen::Index>(r), free));
        rows.push_back(v);
    }
    FqMatrix out(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = rows[i];
    fq_rref(F, out);
    return out;
}

std::optional<FqMatrix> fq_inverse(const Field& F, const FqMatrix& m) {
    const auto n = m.rows();
    if (m.cols() != n) return std::nullopt;
    FqMatrix aug(n, 2 * n);
    aug.leftCols(n) = m;
    aug.rightCols(n) = FqMatrix::Identity(n, n);
    auto pivots = fq_rref(F, aug);
    if (static_cast<Eigen::Index>(pivots.size()) < n || pivots[static_cast<std::size_t>(n - 1)] >= n) return std::nullopt;
    return FqMatrix(aug.rightCols(n));
}

std::string fq_key(const FqMatrix& m) {
    std::string s(reinterpret_cast<const char*>(m.data()), static_cast<std::size_t>(m.size()));
    return s;
}

Subspace Subspace::span(const Field& F, int ambient, FqMatrix rows) {
    if (rows.cols() != ambient && rows.rows() > 0) throw DomainError("ambient mismatch in span");
    rows.conservativeResize(rows.rows(), ambient);
    Subspace s;
    s.ambient_ = ambient;
    s.pivots_ = fq_rref(F, rows);
    s.basis_ = std::move(rows);
    return s;
}

Subspace Subspace::zero(int ambient) {
    Subspace s;
    s.ambient_ = ambient;
    s.basis_ = FqMatrix(0, ambient);
    return s;
}

Subspace Subspace::whole(int ambient) {
    Subspace s;
    s.ambient_ = ambient;
    s.basis_ = FqMatrix::Identity(ambient, ambient);
    for (int i = 0; i < ambient; ++i) s.pivots_.push_back(i);
    return s;
}

std::string Subspace::key() const {
    std::string s = "<";
    for (Eigen::Index r = 0; r < basis_.rows(); ++r) {
        if (r) s += ";";
        for (Eigen::Index c = 0; c < basis_.cols(); ++c) {
            if (c) s += ",";
            s += std::to_string(static_cast<int>(basis_(r, c)));
        }
    }
    return s + ">";
}

bool Subspace::operator<(const Subspace& o) const {
    if (ambient_ != o.ambient_) return ambient_ < o.ambient_;
    if (dim() != o.dim()) return dim() < o.dim();
    return std::lexicographical_compare(basis_.data(), basis_.data() + basis_.size(), o.basis_.data(), o.basis_.data() + o.basis_.size());
}

FqMatrix Subspace::reduce(const Field& F, const FqMatrix& row) const {
    FqMatrix v = row;
    for (std::size_t r = 0; r < pivots_.size(); ++r) {
        const FieldElement factor = v(0, pivots_[r]);
        if (factor == 0) continue;
        for (Eigen::Index c = 0; c < v.cols(); ++c)
            if (basis_(static_cast<Eigen::Index>(r), c) != 0) v(0, c) = F.sub(v(0, c), F.mul(factor, basis_(static_cast<Eigen::Index>(r), c)));
    }
    return v;
}

bool Subspace::contains_vector(const Field& F, const FqMatrix& row) const {
    const FqMatrix v = reduce(F, row);
    for (Eigen::Index c = 0; c < v.cols(); ++c)
        if (v(0, c) != 0) return false;
    return true;
}

bool Subspace::contains(const Field& F, const Subspace& other) const {
    if (other.dim() > dim()) return false;
    for (Eigen::Index r = 0; r < other.basis_.rows(); ++r)
        if (!contains_vector(F, other.basis_.row(r))) return false;
    return true;
}

Subspace subspace_sum(const Field& F, const Subspace& u, const Subspace& w) {
    if (u.ambient() != w.ambient()) throw DomainError("ambient mismatch");
    FqMatrix m(u.dim() + w.dim(), u.ambient());
    if (u.dim()) m.topRows(u.dim()) = u.basis();
    if (w.dim()) m.bottomRows(w.dim()) = w.basis();
    return Subspace::span(F, u.ambient(), m);
}

int sum_dimension(const Field& F, const Subspace& u, const Subspace& w) {
    if (u.ambient() != w.ambient()) throw DomainError("ambient mismatch");
    FqMatrix m(u.dim() + w.dim(), u.ambient());
    if (u.dim()) m.topRows(u.dim()) = u.basis();
    if (w.dim()) m.bottomRows(w.dim()) = w.basis();
    return fq_rank(F, m);
}

Subspace subspace_intersection(const Field& F, const Subspace& u, const Subspace& w) {
    if (u.ambient() != w.ambient()) throw DomainError("ambient mismatch");
    const int m = u.ambient();
    // annihilators under the standard dot product
    const FqMatrix au = u.dim() ? fq_null_space(F, u.basis()) : FqMatrix(FqMatrix::Identity(m, m));
    const FqMatrix aw = w.dim() ? fq_null_space(F, w.basis()) : FqMatrix(FqMatrix::Identity(m, m));
    FqMatrix both(au.rows() + aw.rows(), m);
    if (au.rows()) both.topRows(au.rows()) = au;
    if (aw.rows()) both.bottomRows(aw.rows()) = aw;
    if (both.rows() == 0) return Subspace::whole(m);
    return Subspace::span(F, m, fq_null_space(F, both));
}

Subspace coordinates_in(const Field& F, const Subspace& w, const Subspace& u) {
    if (!u.contains(F, w)) throw DomainError("coordinates of a subspace not contained in the frame");
    FqMatrix c(w.dim(), u.dim());
    for (Eigen::Index r = 0; r < w.dim(); ++r)
        for (std::size_t i = 0; i < u.pivots().size(); ++i) c(r, static_cast<Eigen::Index>(i)) = w.basis()(r, u.pivots()[i]);
    return Subspace::span(F, u.dim(), c);
}

Subspace from_coordinates(const Field& F, const Subspace& coords, const Subspace& u) {
    FqMatrix rows = fq_multiply(F, coords.basis(), u.basis());
    if (coords.dim() == 0) rows = FqMatrix(0, u.ambient());
    return Subspace::span(F, u.ambient(), rows);
}

namespace {

std::vector<int> complement_columns(const Subspace& u) {
    std::vector<int> cols;
    for (int c = 0; c < u.ambient(); ++c)
        if (std::find(u.pivots().begin(), u.pivots().end(), c) == u.pivots().end()) cols.push_back(c);
    return cols;
}

}  // namespace

Subspace quotient_image(const Field& F, const Subspace& w, const Subspace& u) {
    const auto cols = complement_columns(u);
    FqMatrix img(w.dim(), static_cast<Eigen::Index>(cols.size()));
    for (Eigen::Index r = 0; r < w.dim(); ++r) {
        const FqMatrix v = u.reduce(F, w.basis().row(r));
        for (std::size_t i = 0; i < cols.size(); ++i) img(r, static_cast<Eigen::Index>(i)) = v(0, cols[i]);
    }
    return Subspace::span(F, static_cast<int>(cols.size()), img);
}

Subspace quotient_preimage(const Field& F, const Subspace& image, const Subspace& u) {
    const auto cols = complement_columns(u);
    FqMatrix rows(u.dim() + image.dim(), u.ambient());
    rows.setZero();
    if (u.dim()) rows.topRows(u.dim()) = u.basis();
    for (Eigen::Index r = 0; r < image.dim(); ++r)
        for (std::size_t i = 0; i < cols.size(); ++i) rows(u.dim() + r, cols[i]) = image.basis()(r, static_cast<Eigen::Index>(i));
    return Subspace::span(F, u.ambient(), rows);
}

std::uint64_t gaussian_binomial(int q, int m, int d) {
    if (d < 0 || d > m) return 0;
    long double num = 1;
    long double den = 1;
    for (int i = 0; i < d; ++i) {
        num *= (std::pow(static_cast<long double>(q), m - i) - 1);
        den *= (std::pow(static_cast<long double>(q), i + 1) - 1);
    }
    return static_cast<std::uint64_t>(num / den + 0.5L);
}

std::vector<Subspace> enumerate_subspaces(const Field& F, int ambient, int d, const Caps& caps) {
    if (d < 0 || d > ambient) throw DomainError("subspace dimension out of range");
    if (gaussian_binomial(F.size(), ambient, d) > caps.subspace_count)
        throw ResourceError("subspace enumeration exceeds cap (" + std::to_string(caps.subspace_count) + ")");
    std::vector<Subspace> out;
    if (d == 0) {
        out.push_back(Subspace::zero(ambient));
        return out;
    }
    const int q = F.size();
    std::vector<int> pivots(static_cast<std::size_t>(d));
    std::function<void(int, int)> choose = [&](int idx, int start) {
        if (idx == d) {
            // free slots: row r, columns after its pivot that are not pivots
            std::vector<std::pair<int, int>> slots;
            for (int r = 0; r < d; ++r)
                for (int c = pivots[static_cast<std::size_t>(r)] + 1; c < ambient; ++c)
                    if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) slots.emplace_back(r, c);
            std::vector<int> digits(slots.size(), 0);
            while (true) {
                FqMatrix m = FqMatrix::Zero(d, ambient);
                for (int r = 0; r < d; ++r) m(r, pivots[static_cast<std::size_t>(r)]) = 1;
                for (std::size_t i = 0; i < slots.size(); ++i) m(slots[i].first, slots[i].second) = static_cast<FieldElement>(digits[i]);
                out.push_back(Subspace::span(F, ambient, m));
                std::size_t i = 0;
                while (i < digits.size() && ++digits[i] == q) digits[i++] = 0;
                if (i == digits.size()) break;
            }
            return;
        }
        for (int c = start; c <= ambient - (d - idx); ++c) {
            pivots[static_cast<std::size_t>(idx)] = c;
            choose(idx + 1, c + 1);
        }
    };
    choose(0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

bool is_transversal(const Field& F, const Subspace& u, const Subspace& w) {
    const int s = sum_dimension(F, u, w);
    return s == u.ambient() || s == u.dim() + w.dim();
}

Form::Form(std::shared_ptr<const Field> field, FqMatrix gram) : field_(std::move(field)), gram_(std::move(gram)) {
    if (field_->characteristic() == 2) throw UnsupportedError("forms require odd characteristic");
    if (gram_.rows() != gram_.cols()) throw DomainError("Gram matrix must be square");
    if (gram_ != FqMatrix(gram_.transpose())) throw DomainError("Gram matrix must be symmetric");
}

Form Form::hyperbolic(std::shared_ptr<const Field> field, int witt) {
    FqMatrix g = FqMatrix::Zero(2 * witt, 2 * witt);
    for (int i = 0; i < witt; ++i) g(i, i + witt) = g(i + witt, i) = 1;
    return Form(std::move(field), g);
}

Form Form::parabolic(std::shared_ptr<const Field> field, int witt) {
    FqMatrix g = FqMatrix::Zero(2 * witt + 1, 2 * witt + 1);
    for (int i = 0; i < witt; ++i) g(i, i + witt) = g(i + witt, i) = 1;
    g(2 * witt, 2 * witt) = field->from_int(2);
    return Form(std::move(field), g);
}

FieldElement Form::bilinear(const FqMatrix& x, const FqMatrix& y) const {
    const FqMatrix v = fq_multiply(*field_, fq_multiply(*field_, x, gram_), y.transpose());
    return v(0, 0);
}

FieldElement Form::quadratic(const FqMatrix& x) const {
    return field_->div(bilinear(x, x), field_->from_int(2));
}

bool Form::nondegenerate() const { return fq_rank(*field_, gram_) == ambient(); }

Subspace Form::perp(const Subspace& u) const {
    const int m = ambient();
    if (u.dim() == 0) return Subspace::whole(m);
    return Subspace::span(*field_, m, fq_null_space(*field_, fq_multiply(*field_, u.basis(), gram_)));
}

bool Form::is_totally_isotropic(const Subspace& u) const {
    if (u.dim() == 0) return true;
    const FqMatrix g = fq_multiply(*field_, fq_multiply(*field_, u.basis(), gram_), u.basis().transpose());
    for (Eigen::Index i = 0; i < g.size(); ++i)
        if (g.data()[i] != 0) return false;
    return true;
}

namespace {

// All nonzero vectors of F^m as rows, in code order.
std::vector<FqMatrix> nonzero_vectors(const Field& F, int m) {
    std::vector<FqMatrix> out;
    std::vector<int> digits(static_cast<std::size_t>(m), 0);
    const int q = F.size();
    while (true) {
        std::size_t i = 0;
        while (i < digits.size() && ++digits[i] == q) digits[i++] = 0;
        if (i == digits.size()) break;
        FqMatrix v(1, m);
        for (int c = 0; c < m; ++c) v(0, c) = static_cast<FieldElement>(digits[static_cast<std::size_t>(c)]);
        out.push_back(v);
    }
    return out;
}

}  // namespace

int Form::witt_index() const {
    const int m = ambient();
    Subspace u = Subspace::zero(m);
    const auto vectors = nonzero_vectors(*field_, m);
    bool grown = true;
    while (grown) {
        grown = false;
        const Subspace up = perp(u);
        for (const auto& v : vectors) {
            if (!up.contains_vector(*field_, v) || u.contains_vector(*field_, v)) continue;
            if (bilinear(v, v) != 0) continue;
            FqMatrix rows(u.dim() + 1, m);
            if (u.dim()) rows.topRows(u.dim()) = u.basis();
            rows.row(u.dim()) = v;
            u = Subspace::span(*field_, m, rows);
            grown = true;
            break;
        }
    }
    return u.dim();
}

std::vector<Subspace> Form::isotropic_subspaces(int d, const Caps& caps) const {
    const int m = ambient();
    if (d == 0) return {Subspace::zero(m)};
    std::vector<FqMatrix> iso;
    for (const auto& v : nonzero_vectors(*field_, m))
        if (bilinear(v, v) == 0) iso.push_back(v);
    std::set<Subspace> level{Subspace::zero(m)};
    for (int k = 1; k <= d; ++k) {
        std::set<Subspace> next;
        for (const auto& u : level) {
            const Subspace up = perp(u);
            for (const auto& v : iso) {
                if (!up.contains_vector(*field_, v) || u.contains_vector(*field_, v)) continue;
                FqMatrix rows(u.dim() + 1, m);
                if (u.dim()) rows.topRows(u.dim()) = u.basis();
                rows.row(u.dim()) = v;
                next.insert(Subspace::span(*field_, m, rows));
                if (next.size() > caps.subspace_count) throw ResourceError("isotropic subspace enumeration exceeds cap");
            }
        }
        level = std::move(next);
    }
    return {level.begin(), level.end()};
}

Form Form::quotient(const Subspace& u, FqMatrix* basis_out) const {
    const Subspace up = perp(u);
    FqMatrix reduced(up.dim(), ambient());
    for (Eigen::Index r = 0; r < up.dim(); ++r) reduced.row(r) = u.reduce(*field_, up.basis().row(r));
    fq_rref(*field_, reduced);
    if (basis_out) *basis_out = reduced;
    const FqMatrix g = fq_multiply(*field_, fq_multiply(*field_, reduced, gram_), reduced.transpose());
    return Form(field_, g);
}

bool tilde_transversal(const Form& form, const Subspace& u, const Subspace& w) {
    const Field& F = form.field();
    if (is_transversal(F, u, w)) return true;
    if (!form.is_totally_isotropic(u) || !form.is_totally_isotropic(w)) return false;
    if (!(form.perp(u) == u) || !(form.perp(w) == w)) return false;
    return subspace_intersection(F, u, w).dim() == 1;
}

FqMatrix fq_row(std::initializer_list<int> entries) {
    FqMatrix v(1, static_cast<Eigen::Index>(entries.size()));
    Eigen::Index i = 0;
    for (int e : entries) v(0, i++) = static_cast<FieldElement>(e);
    return v;
}

Subspace standard_span(const Field& F, int ambient, std::initializer_list<int> indices) {
    FqMatrix rows = FqMatrix::Zero(static_cast<Eigen::Index>(indices.size()), ambient);
    Eigen::Index r = 0;
    for (int i : indices) rows(r++, i - 1) = 1;
    return Subspace::span(F, ambient, rows);
}

}  // namespace hdx
