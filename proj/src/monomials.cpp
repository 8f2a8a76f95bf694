#include "toda/monomials.hpp"

#include <algorithm>
#include <sstream>

namespace toda {

namespace {

using nlohmann::json;

std::vector<UMonomial> sorted_unique(std::vector<UMonomial> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

bool raising_active(const PrimeContext& ctx, const UMonomial& m, long long floor) {
    // coefficient of the raising term is s times a unit; the new index must
    // survive the quotient
    return mod_norm(m.u_exp, ctx.p) != 0 && ctx.n - 1 >= floor;
}

std::vector<UMonomial> lowerings_only(const PrimeContext& ctx, long long floor,
                                      const UMonomial& m) {
    (void)ctx;
    std::vector<UMonomial> out;
    for (std::size_t i = 0; i < m.indices.size(); ++i) {
        if (i > 0 && m.indices[i] == m.indices[i - 1]) continue;  // one per distinct index
        if (m.indices[i] - 1 < floor) continue;                   // lands in the ideal
        UMonomial low = m;
        low.indices[i] -= 1;
        std::sort(low.indices.begin(), low.indices.end());
        out.push_back(std::move(low));
    }
    return out;
}

std::optional<UMonomial> raising_term(const PrimeContext& ctx, long long floor,
                                      const UMonomial& m) {
    if (!raising_active(ctx, m, floor)) return std::nullopt;
    UMonomial up = m;
    up.indices.push_back(ctx.n - 1);
    std::sort(up.indices.begin(), up.indices.end());
    return up;
}

std::vector<UMonomial> build_universe(const PrimeContext& ctx, long long floor, const Int& u_exp,
                                      long long bound) {
    std::vector<UMonomial> out;
    std::vector<long long> cur;
    auto rec = [&](auto&& self, long long start, long long remaining) -> void {
        if (remaining == 0) {
            out.push_back(UMonomial{u_exp, cur});
            return;
        }
        for (long long i = start; i <= ctx.n - 1; ++i) {
            cur.push_back(i);
            self(self, i, remaining - 1);
            cur.pop_back();
        }
    };
    for (long long d = 0; d <= bound; ++d) rec(rec, floor, d);
    return out;
}

}  // namespace

UMonomial make_monomial(const PrimeContext& ctx, long long floor, const Int& u_exp,
                        std::vector<long long> indices) {
    UMonomial m;
    m.u_exp = u_exp;
    for (long long i : indices) {
        if (i == ctx.n) continue;  // u_n = 1
        if (i < floor) throw std::domain_error("index below the quotient floor is zero");
        if (i > ctx.n) throw std::domain_error("no generator above index n");
        m.indices.push_back(i);
    }
    std::sort(m.indices.begin(), m.indices.end());
    return m;
}

std::string monomial_display(const UMonomial& m) {
    std::ostringstream out;
    out << "u^" << m.u_exp.str();
    for (long long i : m.indices) out << " u" << i;
    return out.str();
}

json monomial_to_json(const UMonomial& m) {
    json j;
    j["uExp"] = m.u_exp.str();
    j["indices"] = m.indices;
    return j;
}

Int tau_weight(const PrimeContext& ctx, const UMonomial& m) {
    Int w = m.u_exp;
    for (long long i : m.indices) w += pow_int(ctx.p, static_cast<unsigned long>(i)) - 1;
    return mod_norm(w, Int(ctx.n) * ctx.n);
}

std::vector<UMonomial> lowering_emissions(const PrimeContext& ctx, long long floor,
                                          const UMonomial& m) {
    std::vector<UMonomial> out = lowerings_only(ctx, floor, m);
    if (auto up = raising_term(ctx, floor, m)) out.push_back(std::move(*up));
    return sorted_unique(std::move(out));
}

std::vector<UMonomial> producers(const PrimeContext& ctx, long long /*floor*/,
                                 const UMonomial& nu, long long degree_bound) {
    // raising an index never drops below the floor, so only the degree bound
    // constrains the candidates
    std::vector<UMonomial> out;
    for (std::size_t i = 0; i < nu.indices.size(); ++i) {
        if (i > 0 && nu.indices[i] == nu.indices[i - 1]) continue;
        long long idx = nu.indices[i];
        UMonomial up = nu;
        if (idx == ctx.n - 1) {
            // raising n-1 to n deletes the index; the inverse emission is the
            // raising term, so it needs the same nonzero coefficient
            if (mod_norm(nu.u_exp, ctx.p) == 0) continue;
            up.indices.erase(up.indices.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            up.indices[i] += 1;
            std::sort(up.indices.begin(), up.indices.end());
        }
        if (up.degree() <= degree_bound) out.push_back(std::move(up));
    }
    return sorted_unique(std::move(out));
}

json exclusion_record_to_json(const ExclusionRecord& r) {
    json j;
    j["excluded"] = monomial_to_json(r.mono);
    j["aPriori"] = r.a_priori;
    if (r.a_priori) j["tauWeight"] = r.tau.str();
    if (r.emission) {
        j["emission"] = monomial_to_json(*r.emission);
        json prods = json::array();
        for (const auto& w : r.producers) {
            json pj;
            pj["mono"] = monomial_to_json(w.mono);
            pj["state"] =
                w.state == ProducerState::tau_forbidden ? "tau-forbidden" : "excluded-earlier";
            if (w.state == ProducerState::tau_forbidden) pj["tauWeight"] = w.tau.str();
            prods.push_back(std::move(pj));
        }
        j["producers"] = std::move(prods);
    }
    return j;
}

ExclusionResult exclusion_fixpoint_ordered(const PrimeContext& ctx, long long floor,
                                           const Int& u_exp, long long degree_bound,
                                           const std::vector<UMonomial>& order) {
    if (degree_bound < 1) throw std::domain_error("degree bound must be at least 1");
    if (floor < 0 || floor > ctx.n) throw std::domain_error("floor out of range [0, n]");

    ExclusionResult res;
    res.universe = build_universe(ctx, floor, u_exp, degree_bound);
    {
        std::vector<UMonomial> check = order;
        std::sort(check.begin(), check.end());
        std::vector<UMonomial> canon = res.universe;
        std::sort(canon.begin(), canon.end());
        if (check != canon)
            throw std::invalid_argument("sweep order must be a permutation of the universe");
    }

    std::set<UMonomial> forbidden;
    auto exclude = [&res](ExclusionRecord rec) {
        res.excluded_set.insert(rec.mono);
        res.excluded.push_back(std::move(rec));
    };
    for (const UMonomial& mu : order) {
        Int w = tau_weight(ctx, mu);
        if (w != 0) {
            forbidden.insert(mu);
            ExclusionRecord rec;
            rec.mono = mu;
            rec.a_priori = true;
            rec.tau = w;
            exclude(std::move(rec));
        }
    }

    bool changed = true;
    while (changed) {
        changed = false;
        for (const UMonomial& mu : order) {
            if (res.is_excluded(mu)) continue;
            std::vector<UMonomial> drivers = lowerings_only(ctx, floor, mu);
            if (mu.indices.empty()) {
                // the raising term is the entire leading emission of u^s, so
                // it forces exclusions exactly like a same-degree emission
                if (auto up = raising_term(ctx, floor, mu)) drivers.push_back(std::move(*up));
            }
            drivers = sorted_unique(std::move(drivers));
            for (const UMonomial& nu : drivers) {
                std::vector<UMonomial> prods = producers(ctx, floor, nu, degree_bound);
                bool all_dead = true;
                std::vector<ProducerWitness> wits;
                for (const UMonomial& q : prods) {
                    if (q == mu) continue;
                    if (!res.is_excluded(q)) {
                        all_dead = false;
                        break;
                    }
                    ProducerWitness w;
                    w.mono = q;
                    if (forbidden.count(q)) {
                        w.state = ProducerState::tau_forbidden;
                        w.tau = tau_weight(ctx, q);
                    } else {
                        w.state = ProducerState::excluded_earlier;
                    }
                    wits.push_back(std::move(w));
                }
                if (!all_dead) continue;
                ExclusionRecord rec;
                rec.mono = mu;
                rec.tau = 0;
                rec.emission = nu;
                rec.producers = std::move(wits);
                exclude(std::move(rec));
                changed = true;
                break;
            }
        }
    }

    for (const UMonomial& mu : res.universe)
        if (!res.is_excluded(mu)) res.retained.push_back(mu);
    return res;
}

ExclusionResult exclusion_fixpoint(const PrimeContext& ctx, long long floor, const Int& u_exp,
                                   long long degree_bound) {
    return exclusion_fixpoint_ordered(ctx, floor, u_exp, degree_bound,
                                      build_universe(ctx, floor, u_exp, degree_bound));
}

bool vk_boundary_nonzero(const PrimeContext& ctx, long long k) {
    if (k < 3 || k > ctx.p - 1) throw std::domain_error("generator index must lie in [3, p-1]");
    long long floor = k - 1;
    Int s = 1 - pow_int(ctx.p, static_cast<unsigned long>(k));
    ExclusionResult res = exclusion_fixpoint(ctx, floor, s, 2);
    return res.is_excluded(make_monomial(ctx, floor, s, {k}));
}

bool vm_square_obstructed(const PrimeContext& ctx) {
    if (!ctx.theorem_applies) throw std::domain_error("square obstruction needs p > 5");
    long long m = (ctx.p + 3) / 2;
    Int s = 2 * (1 - pow_int(ctx.p, static_cast<unsigned long>(m)));
    ExclusionResult res = exclusion_fixpoint(ctx, 3, s, 2);
    return res.is_excluded(make_monomial(ctx, 3, s, {m, m}));
}

}  // namespace toda
