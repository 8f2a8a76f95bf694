#pragma once

#include <optional>
#include <vector>

#include "toda/closed_form.hpp"
#include "toda/prime_context.hpp"
#include "toda/report.hpp"

namespace toda {

// The coefficient quotient R/(u_0, ..., u_{k-1}); k = 0 is the full ring,
// k >= p collapses the quotient to zero.
struct QuotientContext {
    long long k = 0;
    long long alive_floor = 0;  // first surviving generator index
};

QuotientContext make_quotient_context(const PrimeContext& ctx, long long k);

// One term of the long-exact-sequence unfolding of the quotient: the ambient
// group H^{s + |indexSet|, d - sum |v_i|} that must vanish.
struct ReductionTerm {
    std::vector<long long> index_set;  // strictly increasing subset of [0, k)
    long long s = 0;                   // cohomological degree of the ambient group
    Int t;                             // internal degree of the ambient group
};

// First enumerated term whose ambient group is nonzero, if any.
// nullopt certifies H^{s,d} of the quotient vanishes; a witness is only
// inconclusive for nonvanishing (connecting maps are never computed).
std::optional<ReductionTerm> quotient_h_obstruction(const PrimeContext& ctx, long long k,
                                                    long long s, const Int& d);
bool quotient_h_vanishes(const PrimeContext& ctx, long long k, long long s, const Int& d);

// Homotopy-level vanishing through the collapsed page: every unfolded term
// must miss the survivor pattern in the t - s = d - 1 - |indexSet| - sum line.
std::optional<ReductionTerm> homotopy_obstruction(const PrimeContext& ctx, long long m,
                                                  const Int& d);
bool homotopy_vanishes(const PrimeContext& ctx, long long m, const Int& d);

// Degree-family sweeps; one report each, with per-instance witness rows.
CheckReport lemma_cohomology_verify(const PrimeContext& ctx);
CheckReport lemma_homotopy_verify(const PrimeContext& ctx, long long m);

// Rank upper bound for H^{1, 2pn + 2pn^2 m} of R/(u_0, u_1) by counting
// contributing terms; the bound must be exactly 1 for every m in range.
CheckReport v1_module_check(const PrimeContext& ctx, long long m_lo, long long m_hi);

}  // namespace toda
