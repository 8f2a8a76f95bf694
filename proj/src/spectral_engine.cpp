#include "toda/spectral_engine.hpp"

#include <sstream>

namespace toda {

namespace {

void validate_class(const PrimeContext& ctx, const SSClass& c) {
    if (c.alpha_exp < 0 || c.alpha_exp > 1)
        throw std::domain_error("exterior exponent must be 0 or 1");
    if (c.beta_exp < 0) throw std::domain_error("negative polynomial exponent");
    if (c.coeff < 1 || c.coeff >= ctx.p)
        throw std::domain_error("coefficient must be a unit mod p");
}

long long small(const Int& v) { return v.convert_to<long long>(); }

}  // namespace

long long class_filtration(const SSClass& c) {
    return c.alpha_exp + 2 * small(c.beta_exp);
}

Int class_internal_degree(const PrimeContext& ctx, const SSClass& c) {
    return c.delta_exp * ctx.mod_delta + c.alpha_exp * ctx.mod_2n + c.beta_exp * ctx.mod_beta;
}

ClassKey monomial_key(const PrimeContext& ctx, const SSClass& c) {
    ClassKey k;
    k.s = class_filtration(c);
    k.t = class_internal_degree(ctx, c);
    k.delta_exp = c.delta_exp;
    k.alpha_exp = c.alpha_exp;
    k.beta_exp = c.beta_exp;
    return k;
}

ClassKey kernel_marker_key(const Int& t) {
    ClassKey k;
    k.t = t;
    k.k_marker = true;
    return k;
}

Page e2_page(const PrimeContext& ctx, const Window& w) {
    if (w.s_max < 0 || w.t_min > w.t_max)
        throw std::domain_error("empty window");
    Page pg;
    pg.window = w;
    for (int e = 0; e <= 1 && e <= w.s_max; ++e) {
        for (long long b = 0; e + 2 * b <= w.s_max; ++b) {
            Int resid = e * ctx.mod_2n + b * ctx.mod_beta;
            Int a = ceil_div(w.t_min - resid, ctx.mod_delta);
            Int a_hi = floor_div(w.t_max - resid, ctx.mod_delta);
            for (; a <= a_hi; ++a)
                pg.entries.emplace(monomial_key(ctx, SSClass{a, e, b, 1}), ClassStatus{});
        }
    }
    for (Int t = ceil_div(w.t_min, ctx.mod_2n) * ctx.mod_2n; t <= w.t_max; t += ctx.mod_2n)
        pg.entries.emplace(kernel_marker_key(t), ClassStatus{});
    return pg;
}

std::optional<SSClass> d_first(const PrimeContext& ctx, const SSClass& c) {
    validate_class(ctx, c);
    if (c.alpha_exp == 1) return std::nullopt;  // Leibniz term carries A^2 = 0
    long long am = small(mod_norm(c.delta_exp, ctx.p));
    if (am == 0) return std::nullopt;
    int coeff = static_cast<int>((c.coeff * am) % ctx.p);
    return SSClass{c.delta_exp - 1, 1, c.beta_exp + ctx.p - 1, coeff};
}

bool survives_to_e2p(const PrimeContext& ctx, const SSClass& c) {
    validate_class(ctx, c);
    if (c.alpha_exp == 1)
        // killed classes are exactly the d_first images D^a A B^b with
        // b >= p-1 whose preimage D^{a+1} B^{b-p+1} has a+1 != 0 mod p
        return c.beta_exp < ctx.p - 1 || mod_norm(c.delta_exp + 1, ctx.p) == 0;
    return mod_norm(c.delta_exp, ctx.p) == 0;
}

std::optional<SSClass> d_second(const PrimeContext& ctx, const SSClass& c) {
    if (!survives_to_e2p(ctx, c))
        throw std::domain_error("d_second: class does not survive to the E_2p page");
    if (c.alpha_exp != 1 || mod_norm(c.delta_exp + 1, ctx.p) != 0) return std::nullopt;
    Int n = ctx.n;
    return SSClass{c.delta_exp - (ctx.p - 1), 0, c.beta_exp + n * n + 1, c.coeff};
}

Page run_to_einfinity(const PrimeContext& ctx, const Window& w) {
    Int n = ctx.n;
    if (w.t_max - w.t_min + 1 < ctx.mod_period || Int(w.s_max) < 2 * n * n + 2)
        throw WindowError(
            "boundary effects: window must span one full t-period with s_max >= 2n^2+2");

    Page pg = e2_page(ctx, w);
    const long long r1 = 2 * ctx.p - 1;
    const long long r2 = small(2 * n * n + 1);

    // d_{2p-1} everywhere; record kill pairs, flag targets that leave the window.
    for (auto& [key, st] : pg.entries) {
        if (key.k_marker) continue;
        auto img = d_first(ctx, SSClass{key.delta_exp, key.alpha_exp, key.beta_exp, 1});
        if (!img) continue;
        st.fate = Fate::supports;
        st.page = r1;
        st.unit_coeff = img->coeff;
        st.partner = monomial_key(ctx, *img);
        if (st.partner->s <= w.s_max && st.partner->t <= w.t_max) {
            auto it = pg.entries.find(*st.partner);
            if (it == pg.entries.end())
                throw std::logic_error("differential target missing from materialized window");
            it->second.fate = Fate::killed;
            it->second.page = r1;
            it->second.partner = key;
            it->second.unit_coeff = img->coeff;
        } else {
            st.partner_outside = true;
        }
    }
    // A kill whose source sits below the window cannot be replayed from
    // materialized classes; such statuses are flagged, never guessed.
    for (auto& [key, st] : pg.entries) {
        if (key.k_marker || st.fate != Fate::alive || key.alpha_exp != 1) continue;
        if (key.beta_exp < ctx.p - 1) continue;                  // no preimage monomial
        if (mod_norm(key.delta_exp + 1, ctx.p) == 0) continue;   // preimage maps to zero
        if (key.t - (r1 - 1) >= w.t_min) continue;
        st.fate = Fate::unknown;
        st.page = r1;
    }
    pg.index = PageIndex::e2p;

    // d_{2n^2+1} on survivors.
    for (auto& [key, st] : pg.entries) {
        if (key.k_marker || st.fate != Fate::alive || key.alpha_exp != 1) continue;
        auto img = d_second(ctx, SSClass{key.delta_exp, key.alpha_exp, key.beta_exp, 1});
        if (!img) continue;
        st.fate = Fate::supports;
        st.page = r2;
        st.unit_coeff = img->coeff;
        st.partner = monomial_key(ctx, *img);
        if (st.partner->s <= w.s_max && st.partner->t <= w.t_max) {
            auto it = pg.entries.find(*st.partner);
            if (it == pg.entries.end())
                throw std::logic_error("differential target missing from materialized window");
            if (it->second.fate != Fate::alive)
                throw std::logic_error("second differential hit a class that was already dead");
            it->second.fate = Fate::killed;
            it->second.page = r2;
            it->second.partner = key;
            it->second.unit_coeff = img->coeff;
        } else {
            st.partner_outside = true;
        }
    }
    // Unresolved-source propagation mirrors the first round.
    for (auto& [key, st] : pg.entries) {
        if (key.k_marker || key.alpha_exp != 0) continue;
        if (st.fate != Fate::alive) continue;
        if (key.beta_exp < n * n + 1) continue;         // no preimage monomial
        if (key.t - (r2 - 1) >= w.t_min) continue;
        st.fate = Fate::unknown;
        st.page = r2;
    }
    for (auto& [key, st] : pg.entries) {
        if (key.k_marker || st.fate != Fate::unknown || key.alpha_exp != 1) continue;
        // an unknown source with a live second differential leaves its target
        // unresolved as well
        if (mod_norm(key.delta_exp + 1, ctx.p) != 0) continue;
        ClassKey tk = monomial_key(
            ctx, SSClass{key.delta_exp - (ctx.p - 1), 0, key.beta_exp + n * n + 1, 1});
        auto it = pg.entries.find(tk);
        if (it != pg.entries.end() && it->second.fate == Fate::alive) {
            it->second.fate = Fate::unknown;
            it->second.page = r2;
        }
    }
    pg.index = PageIndex::einf;
    return pg;
}

EinfComparison compare_einfinity(const PrimeContext& ctx, const Window& w) {
    Page pg = run_to_einfinity(ctx, w);
    EinfComparison cmp;
    cmp.window = w;
    cmp.bidegrees_checked = Int(w.s_max) * (w.t_max - w.t_min + 1);

    // alive internal degrees per filtration, sorted (map order gives this)
    std::map<long long, std::vector<Int>> alive;
    for (const auto& [key, st] : pg.entries) {
        if (key.k_marker || key.s < 1) continue;
        if (st.fate == Fate::alive) alive[key.s].push_back(key.t);
        if (st.fate == Fate::unknown) cmp.unknowns.push_back(key);
    }
    for (long long s = 1; s <= w.s_max; ++s) {
        const auto it = alive.find(s);
        const std::vector<Int>* ts = it == alive.end() ? nullptr : &it->second;
        std::size_t idx = 0;
        for (Int t = w.t_min; t <= w.t_max; ++t) {
            bool eng = false;
            if (ts) {
                while (idx < ts->size() && (*ts)[idx] < t) ++idx;
                eng = idx < ts->size() && (*ts)[idx] == t;
            }
            bool closed = einf_nonzero(ctx, s, t);
            if (eng != closed) cmp.mismatches.push_back({s, t, eng, closed});
        }
    }
    return cmp;
}

std::string dump_page(const PrimeContext& ctx, const Page& page) {
    (void)ctx;
    std::ostringstream out;
    for (const auto& [key, st] : page.entries) {
        out << key.s << ' ' << key.t << ' ';
        if (key.k_marker)
            out << "0 0 0 0";
        else
            out << key.delta_exp << ' ' << key.alpha_exp << ' ' << key.beta_exp << " 1";
        out << ' ';
        switch (st.fate) {
            case Fate::alive: out << "alive"; break;
            case Fate::supports: out << "supports:d" << st.page; break;
            case Fate::killed: out << "killed:d" << st.page; break;
            case Fate::unknown: out << "unknown:d" << st.page; break;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace toda
