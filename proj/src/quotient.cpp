#include "toda/quotient.hpp"

#include <bit>
#include <iomanip>
#include <sstream>

namespace toda {

namespace {

using nlohmann::json;

json term_to_json(const ReductionTerm& term) {
    json j;
    j["indexSet"] = term.index_set;
    j["s"] = term.s;
    j["t"] = term.t.str();
    return j;
}

std::vector<long long> mask_bits(unsigned long mask) {
    std::vector<long long> out;
    for (long long i = 0; mask >> i; ++i)
        if ((mask >> i) & 1ul) out.push_back(i);
    return out;
}

}  // namespace

QuotientContext make_quotient_context(const PrimeContext& ctx, long long k) {
    if (k < 0 || k > ctx.p) throw std::domain_error("quotient index must lie in [0, p]");
    return QuotientContext{k, k};
}

std::optional<ReductionTerm> quotient_h_obstruction(const PrimeContext& ctx, long long k,
                                                    long long s, const Int& d) {
    if (k < 0) throw std::domain_error("negative quotient index");
    if (s < 0) throw std::domain_error("negative cohomological degree");
    if (k >= ctx.p) return std::nullopt;  // the quotient ring is zero
    std::vector<Int> deg(static_cast<std::size_t>(k));
    for (long long i = 0; i < k; ++i) deg[static_cast<std::size_t>(i)] = vi_degree(ctx, i);

    for (unsigned long mask = 0; mask < (1ul << k); ++mask) {
        long long r = std::popcount(mask);
        Int t = d;
        for (long long i = 0; i < k; ++i)
            if ((mask >> i) & 1ul) t -= deg[static_cast<std::size_t>(i)];
        long long st = s + r;
        bool nonzero = st == 0 ? zero_line_allowed(ctx, t) : e2_rank(ctx, st, t).rank == 1;
        if (nonzero) return ReductionTerm{mask_bits(mask), st, t};
    }
    return std::nullopt;
}

bool quotient_h_vanishes(const PrimeContext& ctx, long long k, long long s, const Int& d) {
    return !quotient_h_obstruction(ctx, k, s, d).has_value();
}

std::optional<ReductionTerm> homotopy_obstruction(const PrimeContext& ctx, long long m,
                                                  const Int& d) {
    if (m < 0 || m >= ctx.p - 1) throw std::domain_error("quotient depth must lie in [0, p-2]");
    std::vector<Int> deg(static_cast<std::size_t>(m) + 1);
    for (long long i = 0; i <= m; ++i) deg[static_cast<std::size_t>(i)] = vi_degree(ctx, i);
    const long long s_hi = 2 * ctx.n * ctx.n;

    for (unsigned long mask = 0; mask < (1ul << (m + 1)); ++mask) {
        long long r = std::popcount(mask);
        Int base = d - 1 - r;
        for (long long i = 0; i <= m; ++i)
            if ((mask >> i) & 1ul) base -= deg[static_cast<std::size_t>(i)];
        for (long long s = 0; s <= s_hi; ++s) {
            Int t = base + s;
            bool nonzero = s == 0 ? zero_line_allowed(ctx, t) : einf_nonzero(ctx, s, t);
            if (nonzero) return ReductionTerm{mask_bits(mask), s, t};
        }
    }
    return std::nullopt;
}

bool homotopy_vanishes(const PrimeContext& ctx, long long m, const Int& d) {
    return !homotopy_obstruction(ctx, m, d).has_value();
}

CheckReport lemma_cohomology_verify(const PrimeContext& ctx) {
    CheckReport rep;
    rep.check_id = "lemma31";
    rep.params["prime"] = std::to_string(ctx.p);
    json rows = json::array();
    bool all = true;
    long long checked = 0;
    for (long long y = 0; y < ctx.n; ++y) {
        if (y % ctx.n == 1) {
            rows.push_back({{"y", y}, {"verdict", verdict_name(Verdict::hypothesis_excluded)}});
            continue;
        }
        Int d = ctx.mod_beta * y;  // 2pny
        for (long long k = 0; k < ctx.p; ++k) {
            for (int family = 1; family <= 2; ++family) {
                if (family == 2 && k == ctx.p - 1) continue;  // outside the statement
                Int dd = family == 1 ? d : d - ctx.mod_2n;
                auto obst = quotient_h_obstruction(ctx, k, family, dd);
                ++checked;
                json row{{"y", y},
                         {"k", k},
                         {"family", family == 1 ? "H1" : "H2"},
                         {"d", dd.str()},
                         {"verdict", verdict_name(obst ? Verdict::fail : Verdict::pass)}};
                if (obst) {
                    row["witness"] = term_to_json(*obst);
                    all = false;
                }
                rows.push_back(std::move(row));
            }
        }
    }
    rep.witnesses["rows"] = std::move(rows);
    rep.witnesses["checked"] = checked;
    rep.verdict = all ? Verdict::pass : Verdict::fail;
    return rep;
}

CheckReport lemma_homotopy_verify(const PrimeContext& ctx, long long m) {
    if (m < 0 || m >= ctx.p - 1) throw std::domain_error("quotient depth must lie in [0, p-2]");
    CheckReport rep;
    std::ostringstream id;
    id << "lemma32-m" << std::setw(2) << std::setfill('0') << m;
    rep.check_id = id.str();
    rep.params["prime"] = std::to_string(ctx.p);
    rep.params["m"] = std::to_string(m);
    json rows = json::array();
    bool all = true;
    bool any_witness = false;
    for (long long y = 0; y < ctx.n; ++y) {
        if (y % ctx.n == 0) {
            rows.push_back({{"y", y}, {"verdict", verdict_name(Verdict::hypothesis_excluded)}});
            continue;
        }
        Int d = ctx.mod_2n + ctx.mod_beta + 2 * Int(ctx.p) * ctx.p * ctx.n * y;
        auto obst = homotopy_obstruction(ctx, m, d);
        json row{{"y", y},
                 {"d", d.str()},
                 {"verdict", verdict_name(obst ? Verdict::fail : Verdict::pass)}};
        if (obst) {
            row["witness"] = term_to_json(*obst);
            all = false;
            any_witness = true;
        }
        rows.push_back(std::move(row));
    }
    rep.witnesses["rows"] = std::move(rows);
    rep.witnesses["witnessSearchExhausted"] = !any_witness;
    rep.verdict = all ? Verdict::pass : Verdict::fail;
    return rep;
}

CheckReport v1_module_check(const PrimeContext& ctx, long long m_lo, long long m_hi) {
    if (m_lo > m_hi) throw std::domain_error("empty range");
    CheckReport rep;
    rep.check_id = "v1-module";
    rep.params["prime"] = std::to_string(ctx.p);
    rep.params["mLo"] = std::to_string(m_lo);
    rep.params["mHi"] = std::to_string(m_hi);
    json rows = json::array();
    bool all = true;
    const Int deg0 = vi_degree(ctx, 0), deg1 = vi_degree(ctx, 1);
    for (long long m = m_lo; m <= m_hi; ++m) {
        Int d = ctx.mod_beta + ctx.mod_delta * m;  // 2pn + 2pn^2 m
        long long bound = 0;
        json contributing = json::array();
        for (unsigned long mask = 0; mask < 4; ++mask) {
            long long r = std::popcount(mask);
            Int t = d;
            if (mask & 1ul) t -= deg0;
            if (mask & 2ul) t -= deg1;
            if (e2_rank(ctx, 1 + r, t).rank == 1) {
                ++bound;
                contributing.push_back(term_to_json(ReductionTerm{mask_bits(mask), 1 + r, t}));
            }
        }
        if (bound != 1) all = false;
        rows.push_back({{"m", m},
                        {"d", d.str()},
                        {"bound", bound},
                        {"contributing", std::move(contributing)},
                        {"verdict", verdict_name(bound == 1 ? Verdict::pass : Verdict::fail)}});
    }
    rep.witnesses["rows"] = std::move(rows);
    rep.verdict = all ? Verdict::pass : Verdict::fail;
    return rep;
}

}  // namespace toda
