/* Materialized spectral-sequence engine over a finite bidegree window.
 *
 * Classes are monomials D^a A^e B^b (A exterior, coefficient in F_p^x) plus
 * opaque zero-line tokens for the multiplication kernel. Two differentials
 * act: d_{2p-1}, generated by D -> A B^{p-1} and extended by Leibniz, and
 * d_{2n^2+1}, generated by D^{p-1} A -> B^{n^2+1} and extended
 * multiplicatively over the surviving D^{p}-powers and B. Afterwards the
 * sequence collapses, so the window statuses after both rounds are final.
 *
 * The engine works purely by materializing classes and recording kill pairs;
 * statuses that would require looking outside the window are flagged as
 * unknown instead of being guessed. */
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toda/closed_form.hpp"

namespace toda {

struct WindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Monomial class c * D^a A^e B^b with c in {1, .., p-1}.
struct SSClass {
    Int delta_exp;      // a, any sign
    int alpha_exp = 0;  // e in {0, 1}
    Int beta_exp;       // b >= 0
    int coeff = 1;
    friend bool operator==(const SSClass&, const SSClass&) = default;
};

long long class_filtration(const SSClass& c);            // s = e + 2b
Int class_internal_degree(const PrimeContext& ctx, const SSClass& c);  // t

struct Window {
    long long s_max = 0;
    Int t_min, t_max;
};

// Map key: bidegree first so iteration order matches dump order. K-marker
// entries (opaque zero-line tokens) carry zero exponents and sort after the
// monomial at the same bidegree.
struct ClassKey {
    long long s = 0;
    Int t;
    bool k_marker = false;
    Int delta_exp;
    int alpha_exp = 0;
    Int beta_exp;

    friend bool operator<(const ClassKey& x, const ClassKey& y) {
        if (x.s != y.s) return x.s < y.s;
        if (x.t != y.t) return x.t < y.t;
        if (x.k_marker != y.k_marker) return !x.k_marker;
        if (x.delta_exp != y.delta_exp) return x.delta_exp < y.delta_exp;
        if (x.alpha_exp != y.alpha_exp) return x.alpha_exp < y.alpha_exp;
        return x.beta_exp < y.beta_exp;
    }
    friend bool operator==(const ClassKey&, const ClassKey&) = default;
};

ClassKey monomial_key(const PrimeContext& ctx, const SSClass& c);
ClassKey kernel_marker_key(const Int& t);

enum class Fate { alive, supports, killed, unknown };

struct ClassStatus {
    Fate fate = Fate::alive;
    long long page = 0;                // differential length r that acted
    std::optional<ClassKey> partner;   // target if supports, source if killed
    int unit_coeff = 0;                // F_p^x coefficient of the hit
    bool partner_outside = false;      // target left the window (still dead)
};

enum class PageIndex { e2, e2p, einf };

struct Page {
    PageIndex index = PageIndex::e2;
    Window window;
    std::map<ClassKey, ClassStatus> entries;
};

// All monomials with bidegree inside the window, zero-line D-powers included,
// plus kernel markers at every (0, t) with t == 0 mod 2n. Empty window is a
// domain error.
Page e2_page(const PrimeContext& ctx, const Window& window);

// Leibniz image of c under d_{2p-1}: (a mod p) D^{a-1} A B^{b+p-1} when e = 0,
// zero when e = 1 (A^2 = 0) or a == 0 mod p. nullopt encodes zero.
std::optional<SSClass> d_first(const PrimeContext& ctx, const SSClass& c);

// Kernel-mod-image condition for surviving the d_{2p-1} round.
bool survives_to_e2p(const PrimeContext& ctx, const SSClass& c);

// d_{2n^2+1} on an E_2p survivor (anything else is a domain error):
// D^a A B^b with a == -1 mod p maps to D^{a-p+1} B^{b+n^2+1}; even-line
// survivors and odd-line classes with a != -1 mod p map to zero.
std::optional<SSClass> d_second(const PrimeContext& ctx, const SSClass& c);

// Both differential rounds over the window. Requires the window to cover at
// least one full t-period 2p^2n^2 and s_max >= 2n^2 + 2; anything narrower
// throws WindowError (truncated differentials would silently corrupt
// statuses). Classes whose partner falls outside the window are flagged,
// never dropped.
Page run_to_einfinity(const PrimeContext& ctx, const Window& window);

struct MismatchRecord {
    long long s = 0;
    Int t;
    bool engine_alive = false;
    bool closed_alive = false;
};

struct EinfComparison {
    Window window;
    Int bidegrees_checked;
    std::vector<MismatchRecord> mismatches;  // every disagreement, not just the first
    std::vector<ClassKey> unknowns;          // statuses the window could not resolve
    bool pass() const { return mismatches.empty() && unknowns.empty(); }
};

// Engine alive-set vs closed-form survivor formula at every bidegree with
// s >= 1 in the window.
EinfComparison compare_einfinity(const PrimeContext& ctx, const Window& window);

// Line-oriented serialization "s t a e b coeff status", sorted by bidegree.
// Kernel markers carry coeff 0. Used for golden-file comparisons.
std::string dump_page(const PrimeContext& ctx, const Page& page);

}  // namespace toda
