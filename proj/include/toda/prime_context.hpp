/* Numerical context for one odd prime p >= 5: the group-cohomology moduli
 * and the generator-degree bookkeeping every other module consumes. */
#pragma once

#include <stdexcept>

#include "toda/bigint.hpp"

namespace toda {

struct InvalidPrimeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// All moduli are even and pairwise divide the next: 2n | 2pn | 2pn^2 | 2p^2n^2.
struct PrimeContext {
    long long p = 0;       // odd prime, >= 5
    long long n = 0;       // p - 1
    Int mod_2n;            // 2n: internal-degree support of H^0
    Int mod_beta;          // 2pn: beta-degree period
    Int mod_delta;         // 2pn^2: delta-degree period (E_2 columns)
    Int mod_period;        // 2p^2n^2: full E_infinity period
    bool theorem_applies = false;  // p > 5; p = 5 builds a context but the
                                   // nonexistence pipeline refuses to run
};

struct Bidegree {
    long long s = 0;  // cohomological degree, >= 0
    Int t;            // internal degree
    friend bool operator==(const Bidegree&, const Bidegree&) = default;
};

// Throws InvalidPrimeError unless p is a prime >= 5.
PrimeContext make_context(long long p);

// |v_i| = 2(p^i - 1); i = 0 gives 0. Strictly increasing in i, always
// divisible by 2n for i >= 1.
Int vi_degree(const PrimeContext& ctx, long long i);

// Degree congruence used by the boundary-comparison step: checks
// |v_k| - |v_{k-1}| - 2pn - 2pn^2 == 0 mod 2p^2n^2. Holds for every
// 3 <= k <= p-1; k = 2 is accepted and fails, anything else is a domain
// error.
bool delta_degree_check(const PrimeContext& ctx, long long k);

// |v_k| != 0 mod 2pn^2, i.e. the degree misses the invertible-generator line
// of H^0 and lands in its complement. Domain: 1 <= k <= p-1.
bool step5_in_kernel(const PrimeContext& ctx, long long k);

}  // namespace toda
