#pragma once

#include <optional>
#include <set>
#include <vector>

#include <json.hpp>

#include "toda/prime_context.hpp"

namespace toda {

// Monomial u^s u_{i_1} ... u_{i_d} of the coefficient quotient, indices a
// sorted multiset in [floor, n-1]. Index n normalizes away (u_n = 1); an
// index below the floor would be zero in the quotient and is never stored.
struct UMonomial {
    Int u_exp;                       // exponent s of u; internal degree -2s
    std::vector<long long> indices;  // ascending

    long long degree() const { return static_cast<long long>(indices.size()); }
    friend bool operator==(const UMonomial&, const UMonomial&) = default;
    friend bool operator<(const UMonomial& a, const UMonomial& b) {
        if (a.indices.size() != b.indices.size()) return a.indices.size() < b.indices.size();
        if (a.indices != b.indices) return a.indices < b.indices;
        return a.u_exp < b.u_exp;
    }
};

// Canonical constructor: sorts, strips index n, rejects indices outside
// [floor, n]. Rejecting below-floor construction keeps "zero monomial"
// states unrepresentable.
UMonomial make_monomial(const PrimeContext& ctx, long long floor, const Int& u_exp,
                        std::vector<long long> indices);

std::string monomial_display(const UMonomial& m);
nlohmann::json monomial_to_json(const UMonomial& m);

// Eigenvalue exponent of the order-n^2 generator on the monomial, mod n^2:
// (s + sum(p^i - 1)) mod n^2. Zero iff the monomial can appear in a fixed
// element.
Int tau_weight(const PrimeContext& ctx, const UMonomial& m);

// Leading-order terms of (sigma - 1) applied to the monomial: one index
// lowering i -> i-1 per distinct index with i-1 >= floor, plus the raising
// term m * u_{n-1} when s != 0 mod p (its coefficient is s times a unit).
// Sorted, deduplicated.
std::vector<UMonomial> lowering_emissions(const PrimeContext& ctx, long long floor,
                                          const UMonomial& m);

// Exact inverse of lowering_emissions over the degree <= degree_bound
// universe: all mu with nu among mu's emissions. Raise one index i -> i+1
// (i <= n-2); when nu contains u_{n-1} and s != 0 mod p, also the monomial
// nu minus one u_{n-1} (whose raising term is nu). Sorted, deduplicated.
std::vector<UMonomial> producers(const PrimeContext& ctx, long long floor, const UMonomial& nu,
                                 long long degree_bound);

enum class ProducerState { tau_forbidden, excluded_earlier };

struct ProducerWitness {
    UMonomial mono;
    ProducerState state;
    Int tau;  // weight, meaningful when tau_forbidden
};

// Why one monomial cannot appear in any fixed element: either its tau
// eigenvalue is not 1 (a priori), or some emission nu of it has every other
// producer already dead, so the nu-coefficient of (sigma - 1)(fixed element)
// could not vanish.
struct ExclusionRecord {
    UMonomial mono;
    bool a_priori = false;
    Int tau;
    std::optional<UMonomial> emission;
    std::vector<ProducerWitness> producers;
};

nlohmann::json exclusion_record_to_json(const ExclusionRecord& r);

struct ExclusionResult {
    std::vector<UMonomial> universe;        // canonical order, degree <= bound
    std::vector<ExclusionRecord> excluded;  // chain order
    std::set<UMonomial> excluded_set;
    std::vector<UMonomial> retained;        // canonical order

    bool is_excluded(const UMonomial& m) const { return excluded_set.count(m) != 0; }
};

// Least fixpoint of the exclusion rule over the fixed-u^s universe.
// Drivers are the same-degree (lowering) emissions; for the empty monomial,
// whose entire leading emission is the raising term, that term drives too.
ExclusionResult exclusion_fixpoint(const PrimeContext& ctx, long long floor, const Int& u_exp,
                                   long long degree_bound);

// Same fixpoint with an explicit sweep order (any permutation of the
// universe); the excluded set is order-independent, witness chains may
// differ.
ExclusionResult exclusion_fixpoint_ordered(const PrimeContext& ctx, long long floor,
                                           const Int& u_exp, long long degree_bound,
                                           const std::vector<UMonomial>& order);

// Connecting-map nonvanishing for the k-th generator: u^{1-p^k} u_k is
// excluded at floor k-1. Domain: 3 <= k <= p-1.
bool vk_boundary_nonzero(const PrimeContext& ctx, long long k);

// The square obstruction at m = (p+3)/2: u^{2(1-p^m)} u_m u_m is excluded
// at floor 3. Requires theorem_applies.
bool vm_square_obstructed(const PrimeContext& ctx);

}  // namespace toda
