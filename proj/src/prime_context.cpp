#include "toda/prime_context.hpp"

namespace toda {

PrimeContext make_context(long long p) {
    if (p < 5 || !is_prime(p))
        throw InvalidPrimeError("invalid prime: need an odd prime >= 5, got " +
                                std::to_string(p));
    PrimeContext ctx;
    ctx.p = p;
    ctx.n = p - 1;
    Int P = p, N = ctx.n;
    ctx.mod_2n = 2 * N;
    ctx.mod_beta = 2 * P * N;
    ctx.mod_delta = 2 * P * N * N;
    ctx.mod_period = 2 * P * P * N * N;
    ctx.theorem_applies = p > 5;
    return ctx;
}

Int vi_degree(const PrimeContext& ctx, long long i) {
    if (i < 0) throw std::domain_error("vi_degree: negative index");
    return 2 * (pow_int(ctx.p, static_cast<unsigned long>(i)) - 1);
}

bool delta_degree_check(const PrimeContext& ctx, long long k) {
    if (k < 2 || k > ctx.p - 1)
        throw std::domain_error("delta_degree_check: k out of range [2, p-1]");
    Int lhs = vi_degree(ctx, k) - vi_degree(ctx, k - 1) - ctx.mod_beta - ctx.mod_delta;
    return divides(ctx.mod_period, lhs);
}

bool step5_in_kernel(const PrimeContext& ctx, long long k) {
    if (k < 1 || k > ctx.p - 1)
        throw std::domain_error("step5_in_kernel: k out of range [1, p-1]");
    return !divides(ctx.mod_delta, vi_degree(ctx, k));
}

}  // namespace toda
