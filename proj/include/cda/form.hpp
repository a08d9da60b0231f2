#pragma once

#include <map>
#include <sstream>
#include <vector>

#include "cda/ratfn.hpp"

namespace cda {

/// Wedge monomial key: (dt?) dz_{I} dzb_{J} with I, J strictly increasing
/// lists of holomorphic variable indices.  dt is kept leftmost.
struct FormKey {
    bool dt = false;
    std::vector<std::size_t> dz;
    std::vector<std::size_t> dzb;

    int degree() const {
        return static_cast<int>(dz.size() + dzb.size()) + (dt ? 1 : 0);
    }
    auto operator<=>(const FormKey&) const = default;
};

namespace detail {

/// Generator encoding for sign bookkeeping: dt = 0, dz_i = 1+i,
/// dzb_i = 1+n+i; canonical order is ascending.
inline std::vector<int> gen_seq(const FormKey& k, std::size_t n) {
    std::vector<int> s;
    if (k.dt) s.push_back(0);
    for (auto v : k.dz) s.push_back(1 + static_cast<int>(v));
    for (auto v : k.dzb) s.push_back(1 + static_cast<int>(n + v));
    return s;
}

/// Sort an odd-generator sequence; returns (key, sign) or sign 0 when a
/// generator repeats.
inline std::pair<FormKey, int> sort_gens(std::vector<int> s, std::size_t n) {
    int sign = 1;
    for (std::size_t i = 1; i < s.size(); ++i)
        for (std::size_t j = i; j > 0 && s[j] < s[j - 1]; --j) {
            std::swap(s[j], s[j - 1]);
            sign = -sign;
        }
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] == s[i - 1]) return {{}, 0};
    FormKey k;
    for (int g : s) {
        if (g == 0)
            k.dt = true;
        else if (g <= static_cast<int>(n))
            k.dz.push_back(static_cast<std::size_t>(g - 1));
        else
            k.dzb.push_back(static_cast<std::size_t>(g - 1) - n);
    }
    return {std::move(k), sign};
}

} // namespace detail

/// Exterior-algebra element: finite sum of (RationalFn) * dz_I ^ dzb_J (^dt)
/// terms over a fixed varset.  Index sets are kept sorted ascending with the
/// reordering sign absorbed into the coefficient.
class Form {
public:
    Form() = default;
    explicit Form(VarSetPtr vs) : vs_(std::move(vs)) {}
    /// 0-form from a coefficient.
    explicit Form(RationalFn f) : vs_(f.varset()) {
        if (!f.is_zero()) terms_[FormKey{}] = std::move(f);
    }

    static Form dvar(const VarSetPtr& vs, std::size_t holo_var) {
        Form a(vs);
        a.terms_[FormKey{false, {holo_var}, {}}] =
            RationalFn::constant(vs, Scalar(1));
        return a;
    }
    static Form dvar_bar(const VarSetPtr& vs, std::size_t holo_var) {
        Form a(vs);
        a.terms_[FormKey{false, {}, {holo_var}}] =
            RationalFn::constant(vs, Scalar(1));
        return a;
    }
    static Form dt_gen(const VarSetPtr& vs) {
        Form a(vs);
        a.terms_[FormKey{true, {}, {}}] = RationalFn::constant(vs, Scalar(1));
        return a;
    }

    const VarSetPtr& varset() const { return vs_; }
    const std::map<FormKey, RationalFn>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void accumulate(FormKey k, RationalFn c) {
        if (c.is_zero()) return;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(std::move(k), std::move(c));
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Form operator-() const {
        Form r(vs_);
        for (auto& [k, c] : terms_) r.terms_[k] = -c;
        return r;
    }
    Form operator+(const Form& o) const {
        require_same_varset(vs_, o.vs_);
        Form r = *this;
        for (auto& [k, c] : o.terms_) r.accumulate(k, c);
        return r;
    }
    Form operator-(const Form& o) const { return *this + (-o); }
    Form operator*(const Scalar& s) const {
        Form r(vs_);
        for (auto& [k, c] : terms_) r.accumulate(k, c * s);
        return r;
    }
    Form operator*(const RationalFn& f) const {
        Form r(vs_);
        for (auto& [k, c] : terms_) r.accumulate(k, c * f);
        return r;
    }

    bool operator==(const Form& o) const {
        if (!same_varset(vs_, o.vs_)) return false;
        return (*this - o).is_zero();
    }
    bool operator!=(const Form& o) const { return !(*this == o); }

    /// Graded-anticommutative wedge; sign from index-set interleaving parity.
    Form wedge(const Form& o) const {
        require_same_varset(vs_, o.vs_);
        std::size_t n = vs_->n_holo();
        Form r(vs_);
        for (auto& [k1, c1] : terms_)
            for (auto& [k2, c2] : o.terms_) {
                auto s1 = detail::gen_seq(k1, n);
                auto s2 = detail::gen_seq(k2, n);
                s1.insert(s1.end(), s2.begin(), s2.end());
                auto [k, sign] = detail::sort_gens(std::move(s1), n);
                if (sign == 0) continue;
                RationalFn c = c1 * c2;
                if (sign < 0) c = -c;
                r.accumulate(std::move(k), std::move(c));
            }
        return r;
    }

    /// Holomorphic exterior derivative: adds one dz.
    Form del() const { return exterior(false); }
    /// Antiholomorphic exterior derivative: adds one dzb.
    Form dbar() const { return exterior(true); }
    /// Full derivative d = del + dbar (+ dt ^ d/dt when a parameter exists).
    Form d() const {
        Form r = del() + dbar();
        std::size_t n = vs_->n_holo();
        for (std::size_t p = 0; p < vs_->n_real(); ++p) {
            std::size_t v = 2 * n + p;
            for (auto& [k, c] : terms_) {
                if (k.dt) continue; // dt ^ dt = 0
                RationalFn dc = c.derivative(v);
                if (dc.is_zero()) continue;
                FormKey nk = k;
                nk.dt = true; // dt stays leftmost: no sign
                r.accumulate(std::move(nk), std::move(dc));
            }
        }
        return r;
    }

    /// Terms of bidegree (p, q) without dt.
    Form type_component(int p, int q) const {
        Form r(vs_);
        for (auto& [k, c] : terms_)
            if (!k.dt && static_cast<int>(k.dz.size()) == p &&
                static_cast<int>(k.dzb.size()) == q)
                r.terms_[k] = c;
        return r;
    }

    /// Coefficient form of dt (dt stripped; dt was leftmost, so no sign).
    Form dt_component() const {
        Form r(vs_);
        for (auto& [k, c] : terms_)
            if (k.dt) {
                FormKey nk = k;
                nk.dt = false;
                r.terms_[std::move(nk)] = c;
            }
        return r;
    }
    /// Terms without dt.
    Form no_dt_component() const {
        Form r(vs_);
        for (auto& [k, c] : terms_)
            if (!k.dt) r.terms_[k] = c;
        return r;
    }

    Form conj() const {
        Form r(vs_);
        std::size_t n = vs_->n_holo();
        for (auto& [k, c] : terms_) {
            auto s = detail::gen_seq(k, n);
            for (auto& g : s) {
                if (g == 0) continue;
                if (g <= static_cast<int>(n))
                    g += static_cast<int>(n);
                else
                    g -= static_cast<int>(n);
            }
            auto [nk, sign] = detail::sort_gens(std::move(s), n);
            RationalFn nc = c.conj();
            if (sign < 0) nc = -nc;
            r.accumulate(std::move(nk), std::move(nc));
        }
        return r;
    }

    Form relabel(VarSetPtr nvs, const std::vector<std::size_t>& vmap) const {
        Form r(nvs);
        std::size_t nn = nvs->n_holo();
        for (auto& [k, c] : terms_) {
            std::vector<int> s;
            if (k.dt) s.push_back(0);
            auto push = [&](std::size_t old_flat) {
                std::size_t nv = vmap[old_flat];
                if (nv >= 2 * nn)
                    throw Error("relabel maps a differential to a parameter");
                s.push_back(1 + static_cast<int>(nv));
            };
            for (auto v : k.dz) push(v);
            for (auto v : k.dzb) push(vs_->conj_of(v));
            auto [nk, sign] = detail::sort_gens(std::move(s), nn);
            if (sign == 0) throw Error("relabel collides form generators");
            RationalFn nc = c.relabel(nvs, vmap);
            if (sign < 0) nc = -nc;
            r.accumulate(std::move(nk), std::move(nc));
        }
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [k, c] : terms_) {
            if (!first) os << "  +  ";
            first = false;
            os << "[" << c.str() << "]";
            if (k.dt) os << " dt";
            for (auto v : k.dz) os << " d" << vs_->name(v);
            for (auto v : k.dzb) os << " d" << vs_->name(vs_->conj_of(v));
        }
        return os.str();
    }

private:
    Form exterior(bool anti) const {
        Form r(vs_);
        std::size_t n = vs_->n_holo();
        for (auto& [k, c] : terms_)
            for (std::size_t v = 0; v < n; ++v) {
                RationalFn dc = c.derivative(anti ? vs_->conj_of(v) : v);
                if (dc.is_zero()) continue;
                std::vector<int> s{anti ? static_cast<int>(1 + n + v)
                                        : static_cast<int>(1 + v)};
                auto kv = detail::gen_seq(k, n);
                // new differential multiplies from the left but after dt
                if (k.dt) {
                    s.insert(s.begin(), 0);
                    kv.erase(kv.begin());
                    dc = -dc; // moved the new generator past dt
                }
                s.insert(s.end(), kv.begin(), kv.end());
                auto [nk, sign] = detail::sort_gens(std::move(s), n);
                if (sign == 0) continue;
                if (sign < 0) dc = -dc;
                r.accumulate(std::move(nk), std::move(dc));
            }
        return r;
    }

    VarSetPtr vs_;
    std::map<FormKey, RationalFn> terms_;
};

inline Form wedge(const Form& a, const Form& b) { return a.wedge(b); }

/// Holomorphic chart transition: expresses each target holomorphic variable
/// as a rational function of the source holomorphic variables.
class ChartMap {
public:
    ChartMap(VarSetPtr source, VarSetPtr target,
             std::map<std::size_t, RationalFn> components)
        : source_(std::move(source)), target_(std::move(target)),
          comp_(std::move(components)) {
        for (auto& [v, f] : comp_) {
            if (!target_->is_holo(v))
                throw Error("chart map component must target a holomorphic variable");
            require_same_varset(f.varset(), source_);
            for (std::size_t w = 0; w < source_->size(); ++w)
                if (!source_->is_holo(w) && f.depends_on(w))
                    throw Error("chart map component is not holomorphic in " +
                                source_->name(w));
        }
    }

    const VarSetPtr& source() const { return source_; }
    const VarSetPtr& target() const { return target_; }
    const std::map<std::size_t, RationalFn>& components() const { return comp_; }

    Subst subst() const {
        Subst s{source_, {}};
        for (auto& [v, f] : comp_) s.images.emplace(v, f);
        return s;
    }

private:
    VarSetPtr source_, target_;
    std::map<std::size_t, RationalFn> comp_;
};

/// Pullback of a form on the map's target chart to the source chart.
inline Form pullback(const ChartMap& m, const Form& a) {
    require_same_varset(a.varset(), m.target());
    Subst s = m.subst();
    const VarSetPtr& src = m.source();
    auto dz_image = [&](std::size_t v) {
        auto it = m.components().find(v);
        if (it == m.components().end()) {
            auto sv = src->find(m.target()->name(v));
            if (sv == VarSet::npos)
                throw UnknownVariable("pullback: no image for d" +
                                      m.target()->name(v));
            return Form::dvar(src, sv);
        }
        Form img(src);
        for (std::size_t w = 0; w < src->n_holo(); ++w) {
            RationalFn dw = it->second.derivative(w);
            if (!dw.is_zero()) img.accumulate(FormKey{false, {w}, {}}, std::move(dw));
        }
        return img;
    };
    Form out(src);
    for (auto& [k, c] : a.terms()) {
        Form acc{substitute(c, s)};
        if (k.dt) {
            if (src->n_real() == 0)
                throw UnknownVariable("pullback: source has no parameter for dt");
            acc = acc.wedge(Form::dt_gen(src));
        }
        for (auto v : k.dz) acc = acc.wedge(dz_image(v));
        for (auto v : k.dzb) acc = acc.wedge(dz_image(v).conj());
        out = out + acc;
    }
    return out;
}

} // namespace cda
