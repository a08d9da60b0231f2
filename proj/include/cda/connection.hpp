#pragma once

#include "cda/matrix.hpp"

namespace cda {

inline Scalar i_over_2pi_pow(int p) {
    Scalar c = Scalar::pi_pow(-1, GaussRat{Rational(0), Rational(1, 2)});
    Scalar r(1);
    for (int k = 0; k < p; ++k) r = r * c;
    return r;
}

/// A connection in a local frame, given by its matrix of 1-forms.
struct ConnectionChart {
    VarSetPtr vs;
    MatrixForm theta;

    ConnectionChart(VarSetPtr v, MatrixForm th)
        : vs(std::move(v)), theta(std::move(th)) {
        require_same_varset(vs, theta.varset());
        if (!theta.all_degree(1) && !theta.is_zero())
            throw DegreeError("connection matrix entries must be 1-forms");
    }

    static ConnectionChart trivial(const VarSetPtr& vs, std::size_t rank) {
        return ConnectionChart(vs, MatrixForm(vs, rank));
    }

    std::size_t rank() const { return theta.size(); }
    /// A (1,0)-connection: every entry of pure bidegree (1,0).
    bool is_10() const { return theta.all_type(1, 0); }
};

/// kappa = d theta + theta ^ theta.
inline MatrixForm curvature(const MatrixForm& theta) {
    if (!theta.all_degree(1) && !theta.is_zero())
        throw DegreeError("curvature needs a matrix of 1-forms");
    return theta.d() + theta * theta;
}

/// theta~ = A^{-1} dA + A^{-1} theta A for a frame change by the 0-form
/// matrix A.
inline MatrixForm frame_change(const MatrixForm& theta, const MatrixForm& A) {
    MatrixForm Ainv = inverse_0form(A);
    return Ainv * A.d() + Ainv * theta * A;
}

/// xi = del(h) h^{-1} for a holomorphic transition matrix h.
inline MatrixForm transition_atiyah_cocycle(const MatrixForm& h) {
    auto g = as_ratfn_grid(h);
    const VarSetPtr& vs = h.varset();
    for (auto& row : g)
        for (auto& c : row)
            for (std::size_t v = 0; v < vs->size(); ++v)
                if (!vs->is_holo(v) && c.depends_on(v))
                    throw Error("transition matrix must be holomorphic");
    return h.del() * inverse_0form(h);
}

inline Form atiyah_form(const ConnectionChart& c, std::size_t p) {
    MatrixForm k11 = c.theta.dbar();
    return sigma_p(k11, p) * i_over_2pi_pow(static_cast<int>(p));
}

inline Form chern_form(const ConnectionChart& c, std::size_t p) {
    return sigma_p(curvature(c.theta), p) * i_over_2pi_pow(static_cast<int>(p));
}

/// Polynomial in the elementary symmetric functions sigma_1..sigma_l:
/// exponent vector (e_1..e_l) -> Scalar coefficient.
struct SymPoly {
    std::map<std::vector<int>, Scalar> terms;

    static SymPoly sigma(std::size_t p, std::size_t ell) {
        SymPoly P;
        std::vector<int> e(ell, 0);
        e.at(p - 1) = 1;
        P.terms[std::move(e)] = Scalar(1);
        return P;
    }

    /// Weighted degree: sum of p*e_p over the leading support (must be
    /// homogeneous for difference forms).
    int weighted_degree() const {
        int d = -1;
        for (auto& [e, c] : terms) {
            int w = 0;
            for (std::size_t p = 0; p < e.size(); ++p)
                w += static_cast<int>(p + 1) * e[p];
            if (d < 0) d = w;
            else if (d != w) throw DegreeError("sym poly is not homogeneous");
        }
        return d < 0 ? 0 : d;
    }
};

/// Evaluate P(sigma_1(kappa), ..., sigma_l(kappa)) in the exterior algebra.
inline Form eval_sym_poly(const SymPoly& P, const MatrixForm& kappa) {
    Form out(kappa.varset());
    for (auto& [e, c] : P.terms) {
        Form term(RationalFn::constant(kappa.varset(), c));
        for (std::size_t p = 0; p < e.size(); ++p)
            for (int j = 0; j < e[p]; ++j)
                term = term.wedge(sigma_p(kappa, p + 1));
        out = out + term;
    }
    return out;
}

/// phi^A(nabla) (Atiyah flavor) or phi(nabla) (Chern flavor).
inline Form phi_form(const ConnectionChart& c, const SymPoly& P,
                     bool use_chern = false) {
    MatrixForm kappa = use_chern ? curvature(c.theta) : c.theta.dbar();
    int d = P.weighted_degree();
    return eval_sym_poly(P, kappa) * i_over_2pi_pow(d);
}

enum class Flavor { atiyah, chern };

namespace detail {

/// Extend a varset by one fresh real deformation parameter; returns the new
/// varset, the old->new index map and the new parameter's flat index.
struct TExtension {
    VarSetPtr evs;
    std::vector<std::size_t> up;   // old flat -> new flat
    std::vector<std::size_t> down; // new flat -> old flat (t slot unused)
    std::size_t t;
};

inline TExtension extend_by_t(const VarSetPtr& vs) {
    std::vector<std::string> holo, real;
    for (std::size_t v = 0; v < vs->n_holo(); ++v) holo.push_back(vs->name(v));
    for (std::size_t p = 0; p < vs->n_real(); ++p)
        real.push_back(vs->name(2 * vs->n_holo() + p));
    std::string tn = "t";
    while (vs->find(tn) != VarSet::npos) tn += "'";
    real.push_back(tn);
    TExtension ext;
    ext.evs = make_varset(std::move(holo), std::move(real));
    ext.up.resize(vs->size());
    for (std::size_t v = 0; v < vs->size(); ++v)
        ext.up[v] = ext.evs->index_of(vs->name(v));
    ext.t = ext.evs->index_of(tn);
    ext.down.assign(ext.evs->size(), 0);
    for (std::size_t v = 0; v < ext.evs->size(); ++v)
        if (v != ext.t) ext.down[v] = vs->index_of(ext.evs->name(v));
    return ext;
}

/// Exact integral over t in [0,1] of a RationalFn polynomial in t (the
/// denominator must be t-free), expressed back on the base varset.
inline RationalFn integrate_t(const RationalFn& f, const TExtension& ext,
                              const VarSetPtr& base) {
    for (auto& fac : f.den())
        if (fac.base.depends_on(ext.t))
            throw Error("deformation integrand has a t-dependent denominator");
    Poly acc(f.varset());
    for (auto& [k, ck] : f.num().by_var(ext.t)) {
        Scalar w = Scalar::pi_pow(0, GaussRat{Rational(1, k + 1), Rational(0)});
        acc = acc + ck * w;
    }
    RationalFn r(acc, f.den());
    return r.relabel(base, ext.down);
}

} // namespace detail

/// Bott difference form phi(nabla_0, nabla_1) by exact integration over the
/// segment nabla_t = (1-t) nabla_0 + t nabla_1.
inline Form difference_form(const ConnectionChart& c0, const ConnectionChart& c1,
                            const SymPoly& P, Flavor flavor) {
    require_same_varset(c0.vs, c1.vs);
    if (c0.rank() != c1.rank()) throw Error("connection ranks differ");
    auto ext = detail::extend_by_t(c0.vs);
    auto t = RationalFn::var(ext.evs, ext.t);
    auto one = RationalFn::constant(ext.evs, Scalar(1));
    MatrixForm th0 = c0.theta.relabel(ext.evs, ext.up);
    MatrixForm th1 = c1.theta.relabel(ext.evs, ext.up);
    MatrixForm tht = th0 * (one - t) + th1 * t;
    MatrixForm kap = tht.d() + tht * tht;
    int d = P.weighted_degree();
    Form phi = eval_sym_poly(P, kap) * i_over_2pi_pow(d);
    Form fiber = phi.dt_component();
    Form out(c0.vs);
    for (auto& [k, c] : fiber.terms()) {
        if (k.dt) throw Error("unexpected nested dt");
        RationalFn ic = detail::integrate_t(c, ext, c0.vs);
        FormKey nk = k; // indices unchanged: t extension keeps holo slots
        out.accumulate(std::move(nk), std::move(ic));
    }
    if (flavor == Flavor::atiyah) return out.type_component(d, d - 1);
    return out;
}

inline Form atiyah_difference(const ConnectionChart& c0,
                              const ConnectionChart& c1, std::size_t p) {
    return difference_form(c0, c1, SymPoly::sigma(p, c0.rank()), Flavor::atiyah);
}
inline Form chern_difference(const ConnectionChart& c0,
                             const ConnectionChart& c1, std::size_t p) {
    return difference_form(c0, c1, SymPoly::sigma(p, c0.rank()), Flavor::chern);
}

/// Holomorphic vector field: one RationalFn component per holomorphic
/// variable.
struct VectorField {
    VarSetPtr vs;
    std::vector<RationalFn> comp;

    VectorField(VarSetPtr v, std::vector<RationalFn> c)
        : vs(std::move(v)), comp(std::move(c)) {
        if (comp.size() != vs->n_holo())
            throw Error("vector field needs one component per holomorphic variable");
        for (auto& f : comp) require_same_varset(f.varset(), vs);
    }
};

/// [v, w]^k = sum_j (v^j d_j w^k - w^j d_j v^k).
inline VectorField lie_bracket(const VectorField& v, const VectorField& w) {
    require_same_varset(v.vs, w.vs);
    std::vector<RationalFn> out;
    for (std::size_t k = 0; k < v.comp.size(); ++k) {
        RationalFn acc{Poly(v.vs)};
        for (std::size_t j = 0; j < v.comp.size(); ++j)
            acc = acc + v.comp[j] * w.comp[k].derivative(j) -
                  w.comp[j] * v.comp[k].derivative(j);
        out.push_back(std::move(acc));
    }
    return VectorField(v.vs, std::move(out));
}

/// Data for the induced partial connection on the normal bundle of
/// V = {z_{m+1} = ... = z_n = 0}: ambient chart, dim V = m, and a
/// distribution frame of m ambient vector fields tangent to V.
struct PartialConnectionData {
    VarSetPtr ambient;
    std::size_t m; // V uses the first m holomorphic variables
    std::vector<VectorField> frame;
};

/// The holomorphic partial connection delta(nu_k)(u_j) = pi([u_j, d/dz_{m+k}]|_V)
/// solved for a (1,0) connection matrix on V (the determined case r = m).
inline ConnectionChart normal_partial_connection(const PartialConnectionData& data) {
    const VarSetPtr& avs = data.ambient;
    std::size_t n = avs->n_holo(), m = data.m;
    if (m == 0 || m > n) throw Error("invalid submanifold dimension");
    if (data.frame.size() != m)
        throw DegenerateFrame("determined case needs exactly dim V generators");
    std::size_t ell = n - m; // normal rank

    std::vector<std::string> holo;
    for (std::size_t v = 0; v < m; ++v) holo.push_back(avs->name(v));
    VarSetPtr vvs = make_varset(std::move(holo));

    // restriction to V: z_{m+1..n} -> 0, first m variables carried by name
    Subst restr{vvs, {}};
    for (std::size_t k = 0; k < ell; ++k)
        restr.images.emplace(m + k, RationalFn(Poly(vvs)));

    // tangency and the delta matrix D[l][k][j] = -d(u_j^{m+l})/dz_{m+k} |_V
    std::vector<std::vector<RationalFn>> U(m); // U[j][i] = u_j^i |_V
    for (std::size_t j = 0; j < m; ++j) {
        require_same_varset(data.frame[j].vs, avs);
        for (std::size_t k = 0; k < ell; ++k)
            if (!substitute(data.frame[j].comp[m + k], restr).is_zero())
                throw Error("distribution generator is not tangent to V");
        for (std::size_t i = 0; i < m; ++i)
            U[j].push_back(substitute(data.frame[j].comp[i], restr));
    }
    RationalFn detU = det_ratfn(U, vvs);
    if (detU.is_zero())
        throw DegenerateFrame("distribution frame is linearly dependent on V");

    MatrixForm theta(vvs, ell);
    for (std::size_t l = 0; l < ell; ++l)
        for (std::size_t k = 0; k < ell; ++k) {
            std::vector<RationalFn> b;
            for (std::size_t j = 0; j < m; ++j)
                b.push_back(substitute(
                    -(data.frame[j].comp[m + l].derivative(m + k)), restr));
            // Cramer: theta^l_k = sum_i x_i dz_i with U x = b
            Form entry(vvs);
            for (std::size_t i = 0; i < m; ++i) {
                auto Ui = U;
                for (std::size_t j = 0; j < m; ++j) Ui[j][i] = b[j];
                RationalFn xi = det_ratfn(Ui, vvs) / detU;
                if (!xi.is_zero())
                    entry.accumulate(FormKey{false, {i}, {}}, std::move(xi));
            }
            theta.at(l, k) = std::move(entry);
        }
    return ConnectionChart(vvs, std::move(theta));
}

} // namespace cda
