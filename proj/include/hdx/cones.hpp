#pragma once

#include "hdx/caps.hpp"
#include "hdx/chains.hpp"
#include "hdx/simplicial.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hdx {

// Linear map on chains given by its values on canonical generators 1_sigma, dim sigma in -1..k.
// Missing generators map to zero; the empty face always maps to 1_[apex].
class ConeFunction {
public:
    ConeFunction(Vertex apex = 0, int degree = -1, std::int64_t modulus = 0);

    Vertex apex() const { return apex_; }
    int degree() const { return degree_; }
    std::int64_t modulus() const { return modulus_; }
    const std::map<Face, Chain>& table() const { return table_; }

    void set(const Face& canonical, Chain value);
    Chain value(const Face& canonical) const;
    Chain operator()(const Chain& a) const;

    ConeFunction reduced(std::int64_t modulus) const;
    // Moves the cone along an injective vertex map (e.g. from a subcomplex into its parent).
    ConeFunction mapped(const std::vector<Vertex>& vertex_map) const;

private:
    Vertex apex_;
    int degree_;
    std::int64_t modulus_;
    std::map<Face, Chain> table_;
};

// Rad_j for j = -1..k, stored at index j + 1.
struct RadiusProfile {
    std::vector<std::int64_t> values;
    std::int64_t at(int j) const;
    std::int64_t max() const;
    int top() const { return static_cast<int>(values.size()) - 2; }
};

RadiusProfile radius_profile(const ConeFunction& c);

struct ConeVerdict {
    bool ok = true;
    std::string message;
    std::optional<Face> generator;
    explicit operator bool() const { return ok; }
};

ConeVerdict verify_cone(const ConeFunction& c, const Complex& X);
// Verification on the full subcomplex spanned by the flagged vertices, in the parent's indices.
ConeVerdict verify_cone(const ConeFunction& c, const Complex& X, const std::vector<bool>& vertices);

// Cone with coefficients in a direct sum, one component cone per summand.
struct GroupCone {
    CoefficientGroup group;
    std::vector<ConeFunction> components;
};

GroupCone transport_coefficients(const ConeFunction& integral, const CoefficientGroup& group);
ConeVerdict verify_cone(const GroupCone& c, const Complex& X);
RadiusProfile radius_profile(const GroupCone& c);
// Per generator and per component, the support is contained in the integral support.
bool transport_support_contained(const GroupCone& c, const ConeFunction& integral);

// Cone on a complex in which every maximal face contains v; simplices through v map to 0.
ConeFunction apex_star_cone(const Complex& X, Vertex v, int k);
// Shortest-path cone on the 1-skeleton, ties broken towards the smallest index.
ConeFunction graph_bfs_cone(const Complex& X, Vertex apex);

struct JoinCone {
    Complex complex;
    ConeFunction cone;
};
// Cone on Y1 * Y2 (labels tagged as in join()) of degree dim Y1 + dim Y2 from cones of degree
// at least dim Y_i - 1 on the factors. The apex is the apex of the first factor.
JoinCone join_cone(const Complex& y1, const ConeFunction& c1, const Complex& y2, const ConeFunction& c2, bool tag_labels = true);
std::vector<std::int64_t> join_radius_bound(const RadiusProfile& r1, const RadiusProfile& r2, int n1, int k);

// Extends a cone on the full subcomplex spanned by `base` to base + W. link_cones[w] lives on
// the parent's indices and cones lk_X(w) restricted to `base`.
ConeFunction extend_by_vertex_set(const Complex& X, const std::vector<bool>& base, const ConeFunction& base_cone,
                                  const std::vector<Vertex>& added, const std::map<Vertex, ConeFunction>& link_cones);
// R''_{j-1} (R'_j + 1) for j = -1..k (index j + 1), with R''_{-1} = 1.
std::vector<std::int64_t> extension_radius_bound(const RadiusProfile& base, const RadiusProfile& links, int k);

// Solves the cone equations degree by degree over the integers; throws NoConeError.
ConeFunction solve_cone_linear(const Complex& X, int k, Vertex apex, const Caps& caps = {});

struct SubdivisionPair {
    std::string subdividing;  // label of U in T
    std::string first;        // W1, W2: labels in both T and T~
    std::string second;
    std::string chosen;       // W_U, one of first/second
};

// Transports a cone on the edge subdivision T of T~ to T~.
ConeFunction subdivision_transport(const ConeFunction& c, const Complex& t, const Complex& tilde, const std::vector<SubdivisionPair>& pairing);
// Structural check that T is the subdivision of T~ described by the pairing; empty string on success.
std::string check_subdivision(const Complex& t, const Complex& tilde, const std::vector<SubdivisionPair>& pairing);

// ---------------------------------------------------------------------------------------------
// Filtration engine

enum class RadiusClass { A, C };

std::int64_t filtration_f(int n, RadiusClass cls);
int filtration_stages(int n, RadiusClass cls);
std::int64_t filtration_S(int n, RadiusClass cls);
std::int64_t filtration_R(int n, RadiusClass cls);

struct StageRecord {
    std::string name;
    std::size_t added = 0;
    RadiusProfile radius;
    std::vector<std::int64_t> extension_bound;
    std::int64_t ledger_bound = 0;  // R^{(i)}(n), 0 when the stage is not tracked by the recursion
    bool within_extension = true;
    bool within_ledger = true;
    std::map<std::string, std::size_t> link_methods;
};

struct FiltrationLedger {
    std::string name;
    int n = 0;
    bool tracked = false;
    RadiusClass cls = RadiusClass::A;
    std::int64_t f_n = 0;
    int ell_n = 0;
    std::int64_t S_n = 0;
    std::int64_t R_n = 0;
    std::string base_method;
    RadiusProfile base_radius;
    bool base_within_f = true;
    std::vector<StageRecord> stages;
    RadiusProfile final_radius;
    bool final_within_R = true;
    std::size_t fallbacks = 0;
    std::size_t unidentified = 0;
    std::vector<std::string> notes;
    std::vector<FiltrationLedger> children;

    // True when this plan and every nested plan stayed within all bounds.
    bool within_bounds() const;
    std::size_t violations() const;
};

struct ProvidedCone {
    ConeFunction cone;
    std::string method;
    std::vector<FiltrationLedger> ledgers;
    bool fallback = false;
    bool identified = true;
};

// Given the relative link (own indices, parent labels) of vertex w, returns a cone on it.
using LinkConeProvider = std::function<ProvidedCone(const Complex& relative_link, Vertex w)>;
// Given the target and the base vertex flags, returns a cone on the base in target indices.
using BaseConeProvider = std::function<ProvidedCone(const Complex& target, const std::vector<bool>& base)>;

struct FiltrationStage {
    std::string name;
    std::vector<Vertex> vertices;
    LinkConeProvider provider;
    bool tracked = true;  // counts as one of the l_n stages of the radius recursion
};

struct FiltrationPlan {
    std::string name;
    std::shared_ptr<const Complex> target;
    std::vector<Vertex> base_vertices;
    BaseConeProvider base_provider;
    std::vector<FiltrationStage> stages;
    std::optional<RadiusClass> radius_class;  // enables the R^{(i)} ledger
    std::optional<std::int64_t> base_bound;    // f(n) checked against the base cone
    std::vector<std::string> notes;
    Caps caps;
};

struct FiltrationResult {
    ConeFunction cone;
    FiltrationLedger ledger;
};

FiltrationResult run_filtration(const FiltrationPlan& plan);

// Solver-based provider for any relative link, degree dim - 1.
ProvidedCone solver_cone(const Complex& X, const Caps& caps, const std::string& reason);

// Moves a cone between two complexes that agree up to vertex numbering, matching vertices by
// label. Returns nothing when the label sets or face sets differ.
std::optional<ConeFunction> transfer_by_labels(const Complex& from, const ConeFunction& cone, const Complex& to);

// Cone on the full subcomplex spanned by `mask` obtained from an apex-star cone, indexed in `target`.
ConeFunction apex_star_on(const Complex& target, const std::vector<bool>& mask, Vertex apex, int k);

}  // namespace hdx
