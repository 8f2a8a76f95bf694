/* Closed-form rank formulas for the E_2 and E_infinity pages of the fixed-point
 * spectral sequence. The ring is F_q[D^{+-1}]<A>[B] with |D| = (0, 2pn^2),
 * |A| = (1, 2n), |B| = (2, 2pn); ranks above the zero line are 0 or 1 and the
 * zero line splits as the D-Laurent line plus an opaque multiplication kernel
 * supported on t == 0 mod 2n. */
#pragma once

#include <optional>

#include "toda/prime_context.hpp"

namespace toda {

enum class CohomologyClassKind {
    zero,        // no class at this bidegree
    delta_line,  // s = 0, t == 0 mod 2pn^2: the invertible-generator line
    kernel_k,    // s = 0, t == 0 mod 2n but not on the delta line: opaque part
    odd_class,   // s odd: D^a A B^b
    even_class,  // s even >= 2: D^a B^b
};

// Monomial witness D^a A^e B^b for a rank-1 group.
struct E2Witness {
    Int delta_exp;       // a, any sign
    int alpha_exp = 0;   // e in {0, 1}
    Int beta_exp;        // b >= 0
    friend bool operator==(const E2Witness&, const E2Witness&) = default;
};

struct E2Rank {
    int rank = 0;  // 0 or 1 for s >= 1
    std::optional<E2Witness> witness;
};

// Rank of E_2^{s,t} for s >= 1 (s <= 0 is a domain error: the zero line is
// not rank-one bookkeeping). Rank 1 iff
//   s odd:  t == 2n + (s-1)pn  mod 2pn^2
//   s even: t == s pn          mod 2pn^2
E2Rank e2_rank(const PrimeContext& ctx, long long s, const Int& t);

// Necessary condition for H^{0,t} != 0: t == 0 mod 2n. Not sufficient beyond
// the delta line; callers treat "allowed" as inconclusive, "not allowed" as
// a proof of vanishing.
bool zero_line_allowed(const PrimeContext& ctx, const Int& t);

// Classification of a bidegree on the E_2 page (zero line included).
CohomologyClassKind classify_bidegree(const PrimeContext& ctx, long long s, const Int& t);

// Survivor pattern on E_infinity for s >= 1:
//   s odd:  1 <= s <= 2n-1 and t == 2n + (s-1)pn + 2pn^2 x mod 2p^2n^2
//           for some x with x != -1 mod p
//   s even: 2 <= s <= 2n^2 and t == s pn mod 2p^2n^2
bool einf_nonzero(const PrimeContext& ctx, long long s, const Int& t);

}  // namespace toda
