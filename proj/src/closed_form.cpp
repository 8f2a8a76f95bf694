#include "toda/closed_form.hpp"

namespace toda {

namespace {

// Residue of the unique monomial with filtration s >= 1: e = s mod 2,
// b = (s - e)/2, residue = e*2n + b*2pn mod 2pn^2.
Int line_residue(const PrimeContext& ctx, long long s) {
    int e = static_cast<int>(s & 1);
    Int b = (Int(s) - e) / 2;
    return e * ctx.mod_2n + b * ctx.mod_beta;
}

}  // namespace

E2Rank e2_rank(const PrimeContext& ctx, long long s, const Int& t) {
    if (s < 1) throw std::domain_error("e2_rank: filtration must be >= 1");
    Int off = t - line_residue(ctx, s);
    if (!divides(ctx.mod_delta, off)) return {};
    E2Rank r;
    r.rank = 1;
    r.witness = E2Witness{off / ctx.mod_delta, static_cast<int>(s & 1), (Int(s) - (s & 1)) / 2};
    return r;
}

bool zero_line_allowed(const PrimeContext& ctx, const Int& t) {
    return divides(ctx.mod_2n, t);
}

CohomologyClassKind classify_bidegree(const PrimeContext& ctx, long long s, const Int& t) {
    if (s < 0) throw std::domain_error("classify_bidegree: negative filtration");
    if (s == 0) {
        if (divides(ctx.mod_delta, t)) return CohomologyClassKind::delta_line;
        if (divides(ctx.mod_2n, t)) return CohomologyClassKind::kernel_k;
        return CohomologyClassKind::zero;
    }
    if (e2_rank(ctx, s, t).rank == 0) return CohomologyClassKind::zero;
    return (s & 1) ? CohomologyClassKind::odd_class : CohomologyClassKind::even_class;
}

bool einf_nonzero(const PrimeContext& ctx, long long s, const Int& t) {
    if (s < 1) throw std::domain_error("einf_nonzero: filtration must be >= 1");
    Int N = ctx.n;
    if (s & 1) {
        if (Int(s) > 2 * N - 1) return false;
        Int off = mod_norm(t - line_residue(ctx, s), ctx.mod_period);
        if (!divides(ctx.mod_delta, off)) return false;
        // off/2pn^2 in [0, p); survivors require the delta-power exponent
        // class x != -1 mod p.
        return off / ctx.mod_delta != ctx.p - 1;
    }
    if (s < 2 || Int(s) > 2 * N * N) return false;
    return divides(ctx.mod_period, t - line_residue(ctx, s));
}

}  // namespace toda
