#include "toda/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <sstream>
#include <thread>

namespace toda {

namespace {

using nlohmann::json;

std::string pad2(long long v) {
    std::ostringstream out;
    out << std::setw(2) << std::setfill('0') << v;
    return out.str();
}

json key_to_json(const ClassKey& k) {
    json j;
    j["s"] = k.s;
    j["t"] = k.t.str();
    j["kMarker"] = k.k_marker;
    j["deltaExp"] = k.delta_exp.str();
    j["alphaExp"] = k.alpha_exp;
    j["betaExp"] = k.beta_exp.str();
    return j;
}

json term_json(const ReductionTerm& term) {
    json j;
    j["indexSet"] = term.index_set;
    j["s"] = term.s;
    j["t"] = term.t.str();
    return j;
}

// y with d == 2pny mod 2pn^2, if the residue lies on that line at all.
std::optional<long long> beta_line_y(const PrimeContext& ctx, const Int& d) {
    Int r = mod_norm(d, ctx.mod_delta);
    if (!divides(ctx.mod_beta, r)) return std::nullopt;
    return (r / ctx.mod_beta).convert_to<long long>();
}

// y with d == 2n + 2pn + 2p^2ny mod 2p^2n^2, if any.
std::optional<long long> homotopy_line_y(const PrimeContext& ctx, const Int& d) {
    Int r = mod_norm(d - ctx.mod_2n - ctx.mod_beta, ctx.mod_period);
    Int step = 2 * Int(ctx.p) * ctx.p * ctx.n;
    if (!divides(step, r)) return std::nullopt;
    return (r / step).convert_to<long long>();
}

json fixpoint_json(const ExclusionResult& res, const UMonomial& target, bool excluded) {
    json j;
    j["target"] = monomial_to_json(target);
    j["excluded"] = excluded;
    j["universeSize"] = res.universe.size();
    json chain = json::array();
    for (const auto& rec : res.excluded) chain.push_back(exclusion_record_to_json(rec));
    j["chain"] = std::move(chain);
    json retained = json::array();
    for (const auto& m : res.retained) retained.push_back(monomial_to_json(m));
    j["retained"] = std::move(retained);
    return j;
}

CheckReport einf_oracle_check(const PrimeContext& ctx) {
    Window w;
    w.s_max = 2 * ctx.n * ctx.n + 2;
    w.t_min = 0;
    w.t_max = ctx.mod_period - 1;
    EinfComparison cmp = compare_einfinity(ctx, w);
    CheckReport r;
    r.check_id = "einf-oracle";
    r.params["prime"] = std::to_string(ctx.p);
    r.params["sMax"] = std::to_string(w.s_max);
    r.params["tMin"] = w.t_min.str();
    r.params["tMax"] = w.t_max.str();
    r.witnesses["bidegreesChecked"] = cmp.bidegrees_checked.str();
    json mm = json::array();
    for (const auto& rec : cmp.mismatches) {
        json j;
        j["s"] = rec.s;
        j["t"] = rec.t.str();
        j["engineAlive"] = rec.engine_alive;
        j["closedAlive"] = rec.closed_alive;
        mm.push_back(std::move(j));
    }
    r.witnesses["mismatches"] = std::move(mm);
    json un = json::array();
    for (const auto& key : cmp.unknowns) un.push_back(key_to_json(key));
    r.witnesses["unknowns"] = std::move(un);
    if (!cmp.mismatches.empty())
        r.verdict = Verdict::fail;
    else if (!cmp.unknowns.empty())
        r.verdict = Verdict::inconclusive;
    return r;
}

CheckReport prop34_step1(const PrimeContext& ctx, long long k) {
    long long floor = k - 1;
    Int s = 1 - pow_int(ctx.p, static_cast<unsigned long>(k));
    ExclusionResult res = exclusion_fixpoint(ctx, floor, s, 2);
    UMonomial target = make_monomial(ctx, floor, s, {k});
    bool excluded = res.is_excluded(target);
    CheckReport r;
    r.check_id = "prop34-k" + pad2(k) + "-step1";
    r.params["prime"] = std::to_string(ctx.p);
    r.params["k"] = std::to_string(k);
    r.params["floor"] = std::to_string(floor);
    r.params["uExp"] = s.str();
    r.params["degreeBound"] = "2";
    r.witnesses = fixpoint_json(res, target, excluded);
    r.verdict = excluded ? Verdict::pass : Verdict::fail;
    return r;
}

CheckReport prop34_step2(const PrimeContext& ctx, long long k) {
    CheckReport r;
    r.check_id = "prop34-k" + pad2(k) + "-step2";
    r.params["prime"] = std::to_string(ctx.p);
    r.params["k"] = std::to_string(k);
    json rows = json::array();
    bool all = true;
    for (long long m = 2; m <= k - 2; ++m) {
        Int d = vi_degree(ctx, k) - vi_degree(ctx, k - 1) - vi_degree(ctx, m);
        auto obst = quotient_h_obstruction(ctx, m, 2, d);
        auto y = beta_line_y(ctx, d + ctx.mod_2n);
        json row;
        row["m"] = m;
        row["d"] = d.str();
        row["lemmaHypothesis"] = y.has_value() && *y != 1;
        if (y) row["y"] = *y;
        row["verdict"] = verdict_name(obst ? Verdict::fail : Verdict::pass);
        if (obst) {
            row["witness"] = term_json(*obst);
            all = false;
        }
        rows.push_back(std::move(row));
    }
    r.witnesses["rows"] = std::move(rows);
    r.verdict = all ? Verdict::pass : Verdict::fail;
    return r;
}

CheckReport prop34_step3(const PrimeContext& ctx, long long k) {
    CheckReport r;
    r.check_id = "prop34-k" + pad2(k) + "-step3";
    r.params["prime"] = std::to_string(ctx.p);
    r.params["k"] = std::to_string(k);
    bool identity = delta_degree_check(ctx, k);
    bool base = vk_boundary_nonzero(ctx, 3);
    r.witnesses["degreeIdentity"] = identity;
    r.witnesses["baseBoundary"] = base;
    r.verdict = identity && base ? Verdict::pass : Verdict::fail;
    return r;
}

CheckReport prop34_step4(const PrimeContext& ctx, long long k) {
    CheckReport r;
    r.check_id = "prop34-k" + pad2(k) + "-step4";
    r.params["prime"] = std::to_string(ctx.p);
    r.params["k"] = std::to_string(k);
    json rows = json::array();
    bool all = true;
    for (long long m = 0; m <= k - 2; ++m) {
        Int d = vi_degree(ctx, k) - vi_degree(ctx, m);
        auto obst = quotient_h_obstruction(ctx, m, 1, d);
        auto y = beta_line_y(ctx, d);
        json row;
        row["m"] = m;
        row["d"] = d.str();
        row["lemmaHypothesis"] = y.has_value() && *y != 1;
        if (y) row["y"] = *y;
        row["verdict"] = verdict_name(obst ? Verdict::fail : Verdict::pass);
        if (obst) {
            row["witness"] = term_json(*obst);
            all = false;
        }
        rows.push_back(std::move(row));
    }
    r.witnesses["rows"] = std::move(rows);
    r.verdict = all ? Verdict::pass : Verdict::fail;
    return r;
}

CheckReport prop34_step5(const PrimeContext& ctx, long long k) {
    CheckReport r;
    r.check_id = "prop34-k" + pad2(k) + "-step5";
    r.params["prime"] = std::to_string(ctx.p);
    r.params["k"] = std::to_string(k);
    bool in_kernel = step5_in_kernel(ctx, k);
    Int d = vi_degree(ctx, k);
    r.witnesses["degree"] = d.str();
    r.witnesses["residue"] = mod_norm(d, ctx.mod_delta).str();
    r.witnesses["inKernel"] = in_kernel;
    r.verdict = in_kernel ? Verdict::pass : Verdict::fail;
    return r;
}

CheckReport prop34_lemma32(const PrimeContext& ctx, long long k) {
    CheckReport r;
    r.check_id = "prop34-k" + pad2(k) + "-lemma32";
    long long m = k - 2;
    Int d = vi_degree(ctx, k);
    r.params["prime"] = std::to_string(ctx.p);
    r.params["k"] = std::to_string(k);
    r.params["m"] = std::to_string(m);
    r.params["d"] = d.str();
    auto obst = homotopy_obstruction(ctx, m, d);
    auto y = homotopy_line_y(ctx, d);
    r.witnesses["inFamily"] = y.has_value() && *y != 0;
    if (y) r.witnesses["y"] = *y;
    if (obst) r.witnesses["witness"] = term_json(*obst);
    r.verdict = obst ? Verdict::fail : Verdict::pass;
    return r;
}

CheckReport prop35_square(const PrimeContext& ctx) {
    long long m = (ctx.p + 3) / 2;
    Int s = 2 * (1 - pow_int(ctx.p, static_cast<unsigned long>(m)));
    ExclusionResult res = exclusion_fixpoint(ctx, 3, s, 2);
    UMonomial target = make_monomial(ctx, 3, s, {m, m});
    bool excluded = res.is_excluded(target);
    CheckReport r;
    r.check_id = "prop35-square";
    r.params["prime"] = std::to_string(ctx.p);
    r.params["m"] = std::to_string(m);
    r.params["floor"] = "3";
    r.params["uExp"] = s.str();
    r.params["degreeBound"] = "2";
    r.witnesses = fixpoint_json(res, target, excluded);
    r.verdict = excluded ? Verdict::pass : Verdict::fail;
    return r;
}

CheckReport prop35_homotopy(const PrimeContext& ctx, long long k) {
    long long m = (ctx.p + 3) / 2;
    Int d = 2 * vi_degree(ctx, m) - vi_degree(ctx, k);
    CheckReport r;
    r.check_id = "prop35-homotopy-k" + pad2(k);
    r.params["prime"] = std::to_string(ctx.p);
    r.params["k"] = std::to_string(k);
    r.params["m"] = std::to_string(k - 1);
    r.params["d"] = d.str();
    auto obst = homotopy_obstruction(ctx, k - 1, d);
    auto y = homotopy_line_y(ctx, d);
    r.witnesses["inFamily"] = y.has_value() && *y != 0;
    if (y) r.witnesses["y"] = *y;
    if (obst) r.witnesses["witness"] = term_json(*obst);
    r.verdict = obst ? Verdict::fail : Verdict::pass;
    return r;
}

std::vector<CheckReport> run_tasks(std::vector<std::function<CheckReport()>> tasks) {
    auto timed = [](const std::function<CheckReport()>& f) {
        auto t0 = std::chrono::steady_clock::now();
        CheckReport r = f();
        r.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        return r;
    };
    unsigned nt = worker_threads();
    if (nt > tasks.size()) nt = static_cast<unsigned>(tasks.size());
    std::vector<CheckReport> out(tasks.size());
    if (nt <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) out[i] = timed(tasks[i]);
        return out;
    }
    std::vector<std::exception_ptr> errs(tasks.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (unsigned t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
                try {
                    out[i] = timed(tasks[i]);
                } catch (...) {
                    errs[i] = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace

unsigned worker_threads() {
    if (const char* env = std::getenv("TODA_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v >= 1 && v <= 256) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1u;
}

PipelineVerdict run_theorem_pipeline(const PrimeContext& ctx) {
    if (!ctx.theorem_applies)
        throw PipelineRefusal("the nonexistence theorem requires p > 5; refusing p = " +
                              std::to_string(ctx.p));

    std::vector<std::function<CheckReport()>> tasks;
    tasks.push_back([&ctx] { return einf_oracle_check(ctx); });
    tasks.push_back([&ctx] { return lemma_cohomology_verify(ctx); });
    for (long long m = 0; m <= ctx.p - 2; ++m)
        tasks.push_back([&ctx, m] { return lemma_homotopy_verify(ctx, m); });
    for (long long k = 4; k <= ctx.p - 1; ++k) {
        tasks.push_back([&ctx, k] { return prop34_step1(ctx, k); });
        tasks.push_back([&ctx, k] { return prop34_step2(ctx, k); });
        tasks.push_back([&ctx, k] { return prop34_step3(ctx, k); });
        tasks.push_back([&ctx, k] { return prop34_step4(ctx, k); });
        tasks.push_back([&ctx, k] { return prop34_step5(ctx, k); });
        tasks.push_back([&ctx, k] { return prop34_lemma32(ctx, k); });
    }
    tasks.push_back([&ctx] { return prop35_square(ctx); });
    long long m_top = (ctx.p + 3) / 2;
    for (long long k = 3; k <= m_top - 1; ++k)
        tasks.push_back([&ctx, k] { return prop35_homotopy(ctx, k); });

    std::vector<CheckReport> reports = run_tasks(std::move(tasks));

    PipelineVerdict v;
    v.prime = ctx.p;
    for (auto& r : reports) {
        if (r.check_id.rfind("einf-", 0) == 0)
            v.oracle_check = std::move(r);
        else if (r.check_id.rfind("prop34-", 0) == 0)
            v.vk_permanent_checks.push_back(std::move(r));
        else if (r.check_id.rfind("prop35-", 0) == 0)
            v.vm_square_checks.push_back(std::move(r));
        else
            v.lemma_reports.push_back(std::move(r));
    }
    if (v.all_pass()) v.conclusion = kConclusion;
    return v;
}

}  // namespace toda
