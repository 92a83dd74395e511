#pragma once

#include "hdx/caps.hpp"
#include "hdx/chains.hpp"
#include "hdx/cones.hpp"
#include "hdx/simplicial.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace hdx {

// ---------------------------------------------------------------------------------------------
// Spectra

// Random walk on the 1-skeleton weighted by w({u,v}); rows sum to one exactly.
std::vector<std::vector<Rational>> walk_matrix(const Complex& X);

// D^{1/2} M D^{-1/2} for the stationary measure, as a dense symmetric matrix.
template <class Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> symmetrized_walk(const Complex& X);

struct JacobiResult {
    Eigen::VectorXd eigenvalues;  // descending
    int sweeps = 0;
    double off_diagonal = 0;      // Frobenius norm left off the diagonal
    bool converged = false;
};

// Cyclic Jacobi rotations on a symmetric matrix.
JacobiResult jacobi_eigenvalues(Eigen::MatrixXd a, double tolerance = 1e-9, int max_sweeps = 100);

struct SecondEigenvalue {
    double value = 1.0;
    double error = 0.0;  // off-diagonal mass for Jacobi, residual norm for the iterative path
    bool connected = true;
    std::string method;
};

// Second largest eigenvalue of the walk; dense Jacobi up to caps.jacobi_size vertices, shifted power
// iteration orthogonal to the stationary vector beyond that.
SecondEigenvalue second_eigenvalue(const Complex& X, const Caps& caps = {});

struct LinkSpectrum {
    Face face;  // empty for X itself
    std::size_t vertices = 0;
    SecondEigenvalue spectrum;
};

struct SpectralReport {
    std::vector<LinkSpectrum> links;
    double lambda = -1.0;
    bool all_connected = true;
};

// Every link X_tau, tau in X(-1..n-2). Links are evaluated on `threads` workers; output order is by face.
SpectralReport local_spectral_profile(const Complex& X, const Caps& caps = {}, unsigned threads = 1);

// ---------------------------------------------------------------------------------------------
// Coboundary and cosystolic constants over Z/m

struct ExpansionValue {
    std::optional<Rational> value;  // nothing when the minimum runs over an empty set
    Cochain witness;                // a minimising representative of least norm in its coset
};

struct ExpansionReport {
    int degree = 0;
    std::int64_t modulus = 2;
    std::size_t configurations = 0;
    ExpansionValue coboundary;     // h^k_cb
    ExpansionValue cosystolic;     // h^k_cs
    ExpansionValue systole;        // least norm on Z^k minus B^k
    std::size_t boundaries = 0;    // |B^k|
    std::size_t cocycles = 0;      // |Z^k|
};

// Exhaustive evaluation; throws ResourceError when m^{|X(k)|} exceeds caps.configurations.
ExpansionReport brute_force_expansion(const Complex& X, int k, std::int64_t modulus, const Caps& caps = {});

ExpansionValue coboundary_constant(const Complex& X, int k, std::int64_t modulus, const Caps& caps = {});
ExpansionValue cosystolic_constant(const Complex& X, int k, std::int64_t modulus, const Caps& caps = {});
std::optional<Rational> systole(const Complex& X, int k, std::int64_t modulus, const Caps& caps = {});

// Reduced H^k(X; Z/m) != 0 by universal coefficients from integral homology.
bool reduced_cohomology_nonzero(const std::vector<HomologyGroup>& homology, int k, std::int64_t modulus);

// ---------------------------------------------------------------------------------------------
// Cone radius lower bound

enum class BoundVerdict { Holds, Violated, HypothesisUnverified, BoundOnly };
std::string to_string(BoundVerdict v);

struct ConeBound {
    int degree = 0;
    std::int64_t radius = 0;
    Rational bound;                     // 1 / (radius * C(n+1, k+1))
    std::optional<Rational> measured;   // brute-force h^k_cb when evaluated
    BoundVerdict verdict = BoundVerdict::BoundOnly;
};

// `transitive` says whether facet transitivity is known; `measured` is compared when given.
ConeBound cone_bound_check(const Complex& X, std::int64_t radius, int k, bool transitive, std::optional<Rational> measured = std::nullopt);

// ---------------------------------------------------------------------------------------------
// Local-to-global hypotheses

struct LocalToGlobalReport {
    int dimension = 0;
    bool applicable = false;            // needs n >= 3
    double lambda = 1.0;
    bool spectral_connected = false;
    std::optional<Rational> link_coboundary_min;  // min over tau in X(0..n-2), 0 <= j < dim X_tau
    std::size_t links_evaluated = 0;
    std::size_t links_skipped = 0;      // over the brute-force cap
    std::string conclusion;
};

LocalToGlobalReport local_to_global_report(const Complex& X, std::int64_t modulus, const Caps& caps = {}, unsigned threads = 1);

}  // namespace hdx
