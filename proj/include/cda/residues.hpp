#pragma once

#include <complex>
#include <numbers>
#include <optional>

#include "cda/cech.hpp"

namespace cda {

/// Product of circles |z_j| = r_j in a chart, with explicit orientation and
/// exact values for the non-circled variables.  Radii are rational proxies:
/// only the inside/outside classification of poles affects exact results.
struct TorusCycle {
    struct Circle {
        std::size_t var;
        Rational radius;
    };

    VarSetPtr chart;
    std::vector<Circle> circles; // iterated innermost-first in this order
    int orientation = 1;
    std::map<std::size_t, Scalar> fixed;
};

namespace detail {

inline Rational rat_abs(const Rational& a) { return a < 0 ? Rational(-a) : a; }
/// |z| <= |re| + |im|
inline Rational mag_ub(const GaussRat& z) {
    return rat_abs(z.re) + rat_abs(z.im);
}
/// |z| >= max(|re|, |im|)
inline Rational mag_lb(const GaussRat& z) {
    return std::max(rat_abs(z.re), rat_abs(z.im));
}

/// Exactly bounded magnitude of a pi-free scalar coefficient.
inline std::pair<Rational, Rational> scalar_bounds(const Scalar& s) {
    if (!s.is_pi_free())
        throw UnsupportedDenominator("pi-dependent denominator coefficient");
    GaussRat c = s.rational_part();
    return {mag_lb(c), mag_ub(c)};
}

enum class RootRegion { none, inside, outside };

/// Where the roots (in v) of a denominator factor lie relative to |v| = r.
/// `none` means the factor does not depend on v.
inline RootRegion classify_factor(const Poly& g, std::size_t v,
                                  const Rational& r) {
    if (!g.depends_on(v)) return RootRegion::none;
    auto parts = g.by_var(v);
    if (parts.size() == 1) return RootRegion::inside; // monomial: pole at 0
    Rational max_ub(0), lead_lb, const_lb;
    int deg = parts.rbegin()->first;
    bool have_const = parts.count(0) > 0;
    for (auto& [k, c] : parts) {
        if (!c.is_constant())
            throw UnsupportedDenominator(
                "cannot classify roots of a multivariate factor");
        auto [lb, ub] = scalar_bounds(c.constant());
        if (k == deg) lead_lb = lb;
        else max_ub = std::max(max_ub, ub);
        if (k == 0) const_lb = lb;
    }
    if (have_const) {
        // roots satisfy |root| >= const_lb / (const_lb + max over k>=1)
        Rational up(0);
        for (auto& [k, c] : parts)
            if (k > 0) up = std::max(up, scalar_bounds(c.constant()).second);
        if (const_lb > 0 && const_lb / (const_lb + up) > r)
            return RootRegion::outside;
    }
    if (lead_lb > 0) {
        // roots satisfy |root| <= 1 + max over k<deg / lead
        if (Rational(1) + max_ub / lead_lb < r) return RootRegion::inside;
    }
    throw UnsupportedDenominator(
        "cannot certify pole positions against the circle radius");
}

/// One contour extraction: coefficient of v^{-1} in the Laurent expansion of
/// f on the annulus containing |v| = r.
inline RationalFn contour_coefficient(const RationalFn& f, std::size_t v,
                                      const Rational& r) {
    const VarSetPtr& vs = f.varset();
    if (f.depends_on(vs->conj_of(v)))
        throw UnsupportedDenominator(
            "integrand depends on the conjugate of a circled variable");
    bool monomial_only = true, has_outside = false, has_inside = false;
    for (auto& fac : f.den()) {
        switch (classify_factor(fac.base, v, r)) {
        case RootRegion::none:
            break;
        case RootRegion::inside:
            if (fac.base.by_var(v).size() > 1) {
                has_inside = true;
                monomial_only = false;
            }
            break;
        case RootRegion::outside:
            has_outside = true;
            monomial_only = false;
            break;
        }
    }
    (void)monomial_only;
    if (!has_inside) return laurent_coefficient(f, v, -1);
    if (has_outside)
        throw UnsupportedDenominator(
            "poles on both sides of the circle in one factor split");
    // all non-monomial poles inside: expand at infinity via v -> 1/v
    auto one = RationalFn::constant(vs, Scalar(1));
    auto var = RationalFn::var(vs, v);
    Subst inv{vs, {{v, one / var}}};
    RationalFn g = substitute(f, inv) / (var * var);
    return laurent_coefficient(g, v, -1);
}

inline Scalar two_pi_i_pow(std::size_t k) {
    Scalar r(1);
    for (std::size_t j = 0; j < k; ++j)
        r = r * Scalar::pi_pow(1, GaussRat{Rational(0), Rational(2)});
    return r;
}

inline Scalar as_scalar(const RationalFn& f) {
    if (f.is_zero()) return Scalar();
    if (!f.is_constant())
        throw Error("torus integral did not reduce to a constant");
    return f.constant_value();
}

inline Subst fixed_subst(const TorusCycle& c) {
    Subst s{c.chart, {}};
    for (auto& [v, val] : c.fixed)
        s.images.emplace(v, RationalFn::constant(c.chart, val));
    return s;
}

} // namespace detail

/// Exact integral of a pure (k,0)-form over the k-torus: orientation times
/// (2 pi i)^k times the iterated Laurent coefficient at exponent -1.
inline Scalar integrate_torus_exact(const Form& a, const TorusCycle& c) {
    require_same_varset(a.varset(), c.chart);
    std::size_t k = c.circles.size();
    std::vector<std::size_t> circled;
    for (auto& ci : c.circles) circled.push_back(ci.var);
    std::vector<std::size_t> key_dz = circled;
    std::sort(key_dz.begin(), key_dz.end());

    Subst fix = detail::fixed_subst(c);
    RationalFn coeff{Poly(c.chart)};
    for (auto& [key, f] : a.terms()) {
        if (key.dt) throw DegreeError("dt has no place on a torus cycle");
        if (!key.dzb.empty())
            throw DegreeError("exact torus integration needs a pure (k,0)-form");
        if (key.dz.size() != k) throw DegreeError("form degree does not match cycle");
        if (key.dz != key_dz) continue; // differentials in fixed directions
        coeff = c.fixed.empty() ? f : substitute(f, fix);
    }
    for (auto& ci : c.circles)
        coeff = detail::contour_coefficient(coeff, ci.var, ci.radius);
    Scalar r = detail::as_scalar(coeff) * detail::two_pi_i_pow(k);
    if (c.orientation < 0) r = -r;
    return r;
}

/// Trapezoidal product-rule integration over the torus, with grid doubling.
inline std::complex<double> integrate_torus_numeric(const Form& a,
                                                    const TorusCycle& c,
                                                    std::size_t n_points = 64,
                                                    double tol = 1e-10,
                                                    std::size_t cap = 1 << 14) {
    require_same_varset(a.varset(), c.chart);
    std::size_t k = c.circles.size();

    auto estimate = [&](std::size_t n) {
        std::complex<double> total = 0;
        std::vector<std::size_t> grid(k, 0);
        const double step = 2 * std::numbers::pi / static_cast<double>(n);
        while (true) {
            NumPoint pt;
            for (auto& [v, val] : c.fixed) pt.vals[v] = val.eval();
            std::vector<std::complex<double>> z(k);
            for (std::size_t j = 0; j < k; ++j) {
                double r = to_double(c.circles[j].radius);
                z[j] = std::polar(r, step * static_cast<double>(grid[j]));
                pt.vals[c.circles[j].var] = z[j];
            }
            for (auto& [key, f] : a.terms()) {
                if (key.dt) throw DegreeError("dt has no place on a torus cycle");
                if (key.dz.size() + key.dzb.size() != k) continue;
                // each circled variable must carry exactly one differential
                std::vector<int> used(k, 0);
                std::complex<double> jac = 1;
                std::vector<std::size_t> order; // phi index per wedge slot
                bool ok = true;
                auto use = [&](std::size_t var, bool bar) {
                    for (std::size_t j = 0; j < k; ++j)
                        if (c.circles[j].var == var && used[j] == 0) {
                            used[j] = 1;
                            order.push_back(j);
                            jac *= bar ? std::complex<double>(0, -1) * std::conj(z[j])
                                       : std::complex<double>(0, 1) * z[j];
                            return true;
                        }
                    return false;
                };
                for (auto v : key.dz) ok = ok && use(v, false);
                for (auto v : key.dzb) ok = ok && use(v, true);
                if (!ok) continue;
                // permutation sign from wedge-slot order to circle order
                int sign = 1;
                for (std::size_t aa = 0; aa < order.size(); ++aa)
                    for (std::size_t bb = aa + 1; bb < order.size(); ++bb)
                        if (order[aa] > order[bb]) sign = -sign;
                total += static_cast<double>(sign) * jac * f.eval(pt);
            }
            std::size_t j = 0;
            while (j < k && ++grid[j] == n) grid[j++] = 0;
            if (j == k) break;
        }
        double scale = 1;
        for (std::size_t j = 0; j < k; ++j) scale *= step;
        return total * scale * static_cast<double>(c.orientation);
    };

    std::complex<double> prev = estimate(n_points);
    for (std::size_t n = n_points * 2; n <= cap; n *= 2) {
        std::complex<double> cur = estimate(n);
        if (std::abs(cur - prev) < tol * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    throw NonConvergent("torus quadrature did not converge within the cap");
}

/// Order of vanishing of a univariate rational function at z = p; equals
/// (1/2 pi i) Res_p(df/f).
inline int point_residue(const RationalFn& f, const GaussRat& p) {
    if (f.is_zero()) throw ZeroFunction("order of the zero function");
    const VarSetPtr& vs = f.varset();
    if (vs->n_holo() != 1) throw Error("point_residue needs a univariate function");
    Poly lin = Poly::var(vs, 0) - Poly(vs, Scalar::pi_pow(0, p));
    auto mult = [&](Poly g) {
        int m = 0;
        while (!g.is_zero()) {
            auto q = g.try_divide(lin);
            if (!q) break;
            g = *q;
            ++m;
        }
        return m;
    };
    int ord = mult(f.num());
    for (auto& fac : f.den()) ord -= fac.mult * mult(fac.base);
    return ord;
}

/// One evaluated term of a residue pairing.
struct ResidueTerm {
    MultiIndex cell;
    std::string method; // "exact", "numeric", "zero", "skipped"
    std::optional<Scalar> exact;
    std::complex<double> numeric{0, 0};
    std::string note;
};

struct ResidueReport {
    std::optional<Scalar> exact; // present when every term integrated exactly
    std::complex<double> numeric{0, 0};
    std::vector<ResidueTerm> terms;
    bool ok = true;
};

/// sum_{i<j, i>=1} ( int_{R_ij} sigma_i ^ xi_ij - int_{R_0ij} sigma_0i ^ xi_ij ).
inline ResidueReport residue_pairing(const Cover& cov, const Cochain& sigma,
                                     const Cochain& xi,
                                     const std::map<MultiIndex, TorusCycle>& cells,
                                     int special = 0, bool numeric_only = false) {
    ResidueReport rep;
    bool all_exact = true;

    auto add_term = [&](MultiIndex cell_idx, const Form& integrand, int sign) {
        ResidueTerm term;
        term.cell = cell_idx;
        if (integrand.is_zero()) {
            term.method = "zero";
            term.exact = Scalar();
            rep.terms.push_back(std::move(term));
            return;
        }
        auto it = cells.find(cell_idx);
        if (it == cells.end()) {
            // no cycle declared: the cell is empty (e.g. R_012)
            term.method = "empty";
            term.exact = Scalar();
            rep.terms.push_back(std::move(term));
            return;
        }
        Form f = sign < 0 ? -integrand : integrand;
        bool have_numeric = true;
        try {
            term.numeric = integrate_torus_numeric(f, it->second);
        } catch (const Error& e) {
            have_numeric = false;
            term.note = std::string("numeric: ") + e.what();
        }
        if (!numeric_only) {
            try {
                term.exact = integrate_torus_exact(f, it->second);
                term.method = "exact";
                if (!have_numeric) term.numeric = term.exact->eval();
            } catch (const Error& e) {
                term.method = "numeric";
                all_exact = false;
                if (!term.note.empty()) term.note += "; ";
                term.note += std::string("exact: ") + e.what();
                if (!have_numeric) rep.ok = false;
            }
        } else {
            term.method = "numeric";
            all_exact = false;
            if (!have_numeric) rep.ok = false;
        }
        rep.numeric += term.numeric;
        rep.terms.push_back(std::move(term));
    };

    int n = cov.nsets();
    for (int i = 0; i < n; ++i) {
        if (i == special) continue;
        for (int j = i + 1; j < n; ++j) {
            if (j == special) continue;
            MultiIndex pr{i, j};
            if (cov.is_empty(pr)) continue;
            Form xi_ij = xi.component(pr);

            // int_{R_ij} sigma_i ^ xi_ij
            Form si = cov.restrict_form(pr, {i}, sigma.component({i}));
            add_term(pr, si.wedge(xi_ij), +1);

            // - int_{R_{0ij}} sigma_{0i} ^ xi_ij
            MultiIndex tri{special, i, j};
            std::sort(tri.begin(), tri.end());
            if (cov.is_empty(tri)) continue;
            MultiIndex p0i{std::min(special, i), std::max(special, i)};
            Form s0i = cov.restrict_form(tri, p0i, sigma.component(p0i));
            Form x = cov.restrict_form(tri, pr, xi_ij);
            add_term(tri, s0i.wedge(x), -1);
        }
    }
    if (all_exact) {
        Scalar total;
        for (auto& t : rep.terms)
            if (t.exact) total = total + *t.exact;
        rep.exact = total;
    }
    return rep;
}

} // namespace cda
