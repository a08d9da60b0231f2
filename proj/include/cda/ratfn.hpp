#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "cda/poly.hpp"

namespace cda {

/// Rational function numerator / product of factored denominators.  The
/// denominator stays factored; no multivariate gcd.  Equality is decided by
/// cross-multiplication; normalization (monomial content cancellation and
/// trial division by stored factors) is best-effort only.
class RationalFn {
public:
    struct Factor {
        Poly base;
        int mult;
    };

    RationalFn() = default;
    explicit RationalFn(Poly num) : num_(std::move(num)) {}
    RationalFn(Poly num, std::vector<Factor> den)
        : num_(std::move(num)), den_(std::move(den)) {
        for (auto& f : den_)
            if (f.base.is_zero()) throw DivByZero("zero polynomial in denominator");
        normalize();
    }

    static RationalFn constant(VarSetPtr vs, Scalar c) {
        return RationalFn(Poly(std::move(vs), std::move(c)));
    }
    static RationalFn var(VarSetPtr vs, std::size_t v) {
        return RationalFn(Poly::var(std::move(vs), v));
    }

    const Poly& num() const { return num_; }
    const std::vector<Factor>& den() const { return den_; }
    const VarSetPtr& varset() const { return num_.varset(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const {
        return num_.is_constant() && den_.empty();
    }
    Scalar constant_value() const {
        if (!is_constant()) throw Error("not a constant rational function");
        return num_.constant();
    }

    Poly den_expanded() const {
        Poly d(varset(), Scalar(1));
        for (auto& f : den_)
            for (int j = 0; j < f.mult; ++j) d = d * f.base;
        return d;
    }

    bool depends_on(std::size_t v) const {
        if (num_.depends_on(v)) return true;
        for (auto& f : den_)
            if (f.base.depends_on(v)) return true;
        return false;
    }

    RationalFn operator-() const {
        RationalFn r = *this;
        r.num_ = -r.num_;
        return r;
    }

    RationalFn operator+(const RationalFn& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        // union of factors with max multiplicity
        std::vector<Factor> uni = den_;
        for (auto& g : o.den_) {
            bool found = false;
            for (auto& f : uni)
                if (f.base == g.base) {
                    f.mult = std::max(f.mult, g.mult);
                    found = true;
                    break;
                }
            if (!found) uni.push_back(g);
        }
        auto cofactor = [&](const std::vector<Factor>& own) {
            Poly c(varset(), Scalar(1));
            for (auto& f : uni) {
                int have = 0;
                for (auto& g : own)
                    if (g.base == f.base) have = g.mult;
                for (int j = have; j < f.mult; ++j) c = c * f.base;
            }
            return c;
        };
        Poly n = num_ * cofactor(den_) + o.num_ * cofactor(o.den_);
        return RationalFn(std::move(n), std::move(uni));
    }
    RationalFn operator-(const RationalFn& o) const { return *this + (-o); }

    RationalFn operator*(const RationalFn& o) const {
        if (is_zero() || o.is_zero()) return RationalFn(Poly(varset()));
        std::vector<Factor> d = den_;
        for (auto& g : o.den_) d.push_back(g);
        return RationalFn(num_ * o.num_, std::move(d));
    }
    RationalFn operator*(const Scalar& s) const {
        RationalFn r = *this;
        r.num_ = r.num_ * s;
        if (r.num_.is_zero()) r.den_.clear();
        return r;
    }

    RationalFn operator/(const RationalFn& o) const {
        if (o.is_zero()) throw DivByZero("division by zero rational function");
        Poly n = num_;
        for (auto& g : o.den_)
            for (int j = 0; j < g.mult; ++j) n = n * g.base;
        std::vector<Factor> d = den_;
        d.push_back({o.num_, 1});
        return RationalFn(std::move(n), std::move(d));
    }

    RationalFn pow(int k) const {
        if (k < 0) return RationalFn::constant(varset(), Scalar(1)) / this->pow(-k);
        RationalFn r = RationalFn::constant(varset(), Scalar(1));
        for (int j = 0; j < k; ++j) r = r * *this;
        return r;
    }

    /// Semantic equality by cross-multiplication of expanded denominators.
    bool operator==(const RationalFn& o) const {
        return num_ * o.den_expanded() == o.num_ * den_expanded();
    }
    bool operator!=(const RationalFn& o) const { return !(*this == o); }

    /// Quotient-rule derivative, exact.
    RationalFn derivative(std::size_t v) const {
        if (v >= varset()->size()) throw UnknownVariable("derivative: bad variable index");
        if (!depends_on(v)) return RationalFn(Poly(varset()));
        // f = N / prod F_i^{m_i}
        // f' = (N' prod F_i - N sum m_i F_i' prod_{j!=i} F_j) / prod F_i^{m_i+1}
        Poly prod_all(varset(), Scalar(1));
        for (auto& f : den_) prod_all = prod_all * f.base;
        Poly n = num_.derivative(v) * prod_all;
        for (std::size_t i = 0; i < den_.size(); ++i) {
            Poly t = num_ * den_[i].base.derivative(v) *
                     Scalar(static_cast<long>(den_[i].mult));
            for (std::size_t j = 0; j < den_.size(); ++j)
                if (j != i) t = t * den_[j].base;
            n = n - t;
        }
        std::vector<Factor> d = den_;
        for (auto& f : d) f.mult += 1;
        return RationalFn(std::move(n), std::move(d));
    }

    RationalFn conj() const {
        std::vector<Factor> d;
        d.reserve(den_.size());
        for (auto& f : den_) d.push_back({f.base.conj(), f.mult});
        return RationalFn(num_.conj(), std::move(d));
    }

    std::complex<double> eval(const NumPoint& pt) const {
        std::complex<double> d{1, 0};
        for (auto& f : den_) {
            std::complex<double> b = f.base.eval(pt);
            for (int j = 0; j < f.mult; ++j) d *= b;
        }
        if (std::abs(d) < 1e-12) throw NumericPole("denominator nearly vanishes");
        return num_.eval(pt) / d;
    }

    RationalFn relabel(VarSetPtr nvs, const std::vector<std::size_t>& vmap) const {
        std::vector<Factor> d;
        d.reserve(den_.size());
        for (auto& f : den_) d.push_back({f.base.relabel(nvs, vmap), f.mult});
        return RationalFn(num_.relabel(std::move(nvs), vmap), std::move(d));
    }

    std::string str() const {
        std::string s = "(" + num_.str() + ")";
        for (auto& f : den_) {
            s += " / (" + f.base.str() + ")";
            if (f.mult != 1) s += "^" + std::to_string(f.mult);
        }
        return s;
    }

private:
    /// Best-effort simplification; never required for correctness of ==.
    void normalize() {
        if (num_.is_zero()) {
            den_.clear();
            return;
        }
        // fold invertible constant factors into the numerator
        std::vector<Factor> kept;
        for (auto& f : den_) {
            if (f.base.is_constant() && f.base.constant().is_single_term()) {
                Scalar inv = f.base.constant().inv();
                for (int j = 0; j < f.mult; ++j) num_ = num_ * inv;
            } else {
                kept.push_back(std::move(f));
            }
        }
        den_ = std::move(kept);
        // cancel monomial factors against the numerator's monomial content
        std::vector<int> content = num_.monomial_content();
        if (!content.empty()) {
            for (auto& f : den_) {
                if (!f.base.is_monomial()) continue;
                const Scalar& c = f.base.terms().begin()->second;
                if (!c.is_single_term()) continue;
                auto e = f.base.terms().begin()->first;
                // factor^mult = c^mult * x^(e*mult); cancel what we can
                bool nontrivial = false;
                for (std::size_t v = 0; v < e.size(); ++v)
                    if (e[v] > 0) nontrivial = true;
                if (!nontrivial) continue;
                // how many whole copies of the monomial divide the content?
                int copies = f.mult;
                for (std::size_t v = 0; v < e.size(); ++v)
                    if (e[v] > 0) copies = std::min(copies, content[v] / e[v]);
                if (copies <= 0) continue;
                std::vector<int> cancel(e.size());
                for (std::size_t v = 0; v < e.size(); ++v) {
                    cancel[v] = e[v] * copies;
                    content[v] -= cancel[v];
                }
                Scalar ic = c.inv(), icp = Scalar(1);
                for (int j = 0; j < copies; ++j) icp = icp * ic;
                num_ = num_.shift_down(cancel) * icp;
                f.mult -= copies;
            }
            den_.erase(std::remove_if(den_.begin(), den_.end(),
                                      [](const Factor& f) { return f.mult == 0; }),
                       den_.end());
        }
        // trial division of the numerator by non-monomial factors
        bool progress = true;
        while (progress) {
            progress = false;
            for (auto& f : den_) {
                if (f.mult == 0 || f.base.is_monomial()) continue;
                if (auto q = num_.try_divide(f.base)) {
                    num_ = std::move(*q);
                    f.mult -= 1;
                    progress = true;
                }
            }
            den_.erase(std::remove_if(den_.begin(), den_.end(),
                                      [](const Factor& f) { return f.mult == 0; }),
                       den_.end());
        }
        // merge syntactically equal factors
        std::vector<Factor> merged;
        for (auto& f : den_) {
            bool found = false;
            for (auto& g : merged)
                if (g.base.terms() == f.base.terms()) {
                    g.mult += f.mult;
                    found = true;
                    break;
                }
            if (!found) merged.push_back(std::move(f));
        }
        den_ = std::move(merged);
    }

    Poly num_;
    std::vector<Factor> den_;
};

/// Variable substitution into a target varset.  Holomorphic variables map
/// through `images`; conjugates through the conjugated images; unmapped
/// variables carry over by name.  Real parameters may be mapped to real
/// expressions but default to themselves.
struct Subst {
    VarSetPtr target;
    std::map<std::size_t, RationalFn> images; // source flat index (holo or real)
};

inline RationalFn subst_image(const VarSet& src, const Subst& s, std::size_t v) {
    std::size_t base = src.is_conj(v) ? src.conj_of(v) : v;
    auto it = s.images.find(base);
    RationalFn img;
    if (it != s.images.end()) {
        img = it->second;
    } else {
        auto tv = s.target->find(src.name(base));
        if (tv == VarSet::npos)
            throw UnknownVariable("substitute: no image for variable " + src.name(base));
        img = RationalFn::var(s.target, tv);
    }
    return src.is_conj(v) ? img.conj() : img;
}

inline RationalFn substitute(const Poly& p, const Subst& s) {
    RationalFn acc{Poly(s.target)};
    const VarSet& src = *p.varset();
    for (auto& [e, c] : p.terms()) {
        RationalFn term = RationalFn::constant(s.target, c);
        for (std::size_t v = 0; v < e.size(); ++v)
            if (e[v] != 0) term = term * subst_image(src, s, v).pow(e[v]);
        acc = acc + term;
    }
    return acc;
}

inline RationalFn substitute(const RationalFn& f, const Subst& s) {
    RationalFn r = substitute(f.num(), s);
    for (auto& fac : f.den()) {
        RationalFn fs = substitute(fac.base, s);
        if (fs.is_zero())
            throw SingularSubstitution("denominator factor maps to zero");
        for (int j = 0; j < fac.mult; ++j) r = r / fs;
    }
    return r;
}

/// Coefficient of v^k in the Laurent expansion about v = 0.  The denominator
/// viewed in v must be a monomial times factors with nonzero v-constant term.
inline RationalFn laurent_coefficient(const RationalFn& f, std::size_t v, int k) {
    const VarSetPtr& vs = f.varset();
    if (f.is_zero()) return f;
    int mono_pow = 0;               // accumulated v-power from monomial factors
    std::vector<RationalFn::Factor> vfree;
    std::vector<Poly> series_factors; // non-monomial factors involving v
    for (auto& fac : f.den()) {
        if (!fac.base.depends_on(v)) {
            vfree.push_back(fac);
            continue;
        }
        if (fac.base.is_monomial()) {
            auto e = fac.base.terms().begin()->first;
            mono_pow += e[v] * fac.mult;
            Poly rest(vs);
            auto e2 = e;
            e2[v] = 0;
            rest.accumulate(std::move(e2), fac.base.terms().begin()->second);
            vfree.push_back({std::move(rest), fac.mult});
            continue;
        }
        auto by = fac.base.by_var(v);
        if (by.find(0) == by.end() || by.at(0).is_zero())
            throw UnsupportedDenominator(
                "denominator factor vanishes at " + vs->name(v) + " = 0");
        for (int j = 0; j < fac.mult; ++j) series_factors.push_back(fac.base);
    }
    int target = k + mono_pow;
    if (target < 0) return RationalFn(Poly(vs));
    // running truncated series in v with RationalFn coefficients
    std::map<int, RationalFn> acc;
    for (auto& [j, cj] : f.num().by_var(v))
        if (j <= target) acc.emplace(j, RationalFn(cj));
    for (auto& p : series_factors) {
        auto by = p.by_var(v);
        RationalFn c0_inv =
            RationalFn::constant(vs, Scalar(1)) / RationalFn(by.at(0));
        // inverse series s: s_0 = 1/p0 ; s_t = -(1/p0) sum_{u>=1} p_u s_{t-u}
        std::map<int, RationalFn> inv;
        inv[0] = c0_inv;
        for (int t = 1; t <= target; ++t) {
            RationalFn sum{Poly(vs)};
            for (auto& [u, pu] : by) {
                if (u == 0 || u > t) continue;
                sum = sum + RationalFn(pu) * inv.at(t - u);
            }
            inv[t] = -(c0_inv * sum);
        }
        std::map<int, RationalFn> next;
        for (auto& [a, ca] : acc)
            for (auto& [b, cb] : inv) {
                if (a + b > target) continue;
                RationalFn t = ca * cb;
                auto it = next.find(a + b);
                if (it == next.end())
                    next.emplace(a + b, std::move(t));
                else
                    it->second = it->second + t;
            }
        acc = std::move(next);
    }
    auto it = acc.find(target);
    if (it == acc.end()) return RationalFn(Poly(vs));
    RationalFn r = std::move(it->second);
    for (auto& fac : vfree)
        for (int j = 0; j < fac.mult; ++j) r = r / RationalFn(fac.base);
    return r;
}

} // namespace cda
