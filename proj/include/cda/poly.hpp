#pragma once

#include <algorithm>
#include <complex>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "cda/scalar.hpp"
#include "cda/varset.hpp"

namespace cda {

/// Numeric assignment for eval: a complex value per holomorphic variable and
/// a real value per real parameter.  Conjugate variables evaluate to the
/// conjugate of their partner.
struct NumPoint {
    std::map<std::size_t, std::complex<double>> vals; // keyed by holo/real flat index
};

/// Multivariate polynomial over Scalar, canonical: no zero coefficients,
/// exponent vectors of full varset length, lex term order via std::map.
class Poly {
public:
    using Exp = std::vector<int>;

    Poly() = default;
    explicit Poly(VarSetPtr vs) : vs_(std::move(vs)) {}
    Poly(VarSetPtr vs, Scalar c) : vs_(std::move(vs)) {
        if (!c.is_zero()) terms_[Exp(vs_->size(), 0)] = std::move(c);
    }

    static Poly var(VarSetPtr vs, std::size_t v, int pow = 1) {
        Poly p(vs);
        Exp e(vs->size(), 0);
        e.at(v) = pow;
        p.terms_[std::move(e)] = Scalar(1);
        return p;
    }

    const VarSetPtr& varset() const { return vs_; }
    const std::map<Exp, Scalar>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        if (terms_.empty()) return true;
        if (terms_.size() != 1) return false;
        auto& e = terms_.begin()->first;
        return std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
    }
    bool is_one() const { return is_constant() && constant().is_one(); }
    bool is_monomial() const { return terms_.size() == 1; }

    Scalar constant() const {
        if (terms_.empty()) return Scalar();
        return terms_.begin()->second;
    }

    bool depends_on(std::size_t v) const {
        for (auto& [e, c] : terms_)
            if (e[v] != 0) return true;
        return false;
    }
    int degree_in(std::size_t v) const {
        int d = 0;
        for (auto& [e, c] : terms_) d = std::max(d, e[v]);
        return d;
    }

    Poly operator-() const {
        Poly r(vs_);
        for (auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }
    Poly operator+(const Poly& o) const {
        require_compat(o);
        Poly r = vs_ ? *this : o;
        if (!vs_) return r.add_in(*this);
        return r.add_in(o);
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }
    Poly operator*(const Poly& o) const {
        require_compat(o);
        Poly r(vs_ ? vs_ : o.vs_);
        for (auto& [e1, c1] : terms_)
            for (auto& [e2, c2] : o.terms_) {
                Scalar p = c1 * c2;
                if (p.is_zero()) continue;
                Exp e = e1;
                for (std::size_t k = 0; k < e.size(); ++k) e[k] += e2[k];
                r.accumulate(std::move(e), std::move(p));
            }
        return r;
    }
    Poly operator*(const Scalar& s) const {
        Poly r(vs_);
        if (s.is_zero()) return r;
        for (auto& [e, c] : terms_) {
            Scalar p = c * s;
            if (!p.is_zero()) r.terms_[e] = std::move(p);
        }
        return r;
    }
    Poly pow(int k) const {
        Poly r(vs_, Scalar(1));
        for (int j = 0; j < k; ++j) r = r * *this;
        return r;
    }

    bool operator==(const Poly& o) const { return (*this - o).is_zero(); }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly derivative(std::size_t v) const {
        Poly r(vs_);
        for (auto& [e, c] : terms_) {
            if (e[v] == 0) continue;
            Exp d = e;
            Scalar nc = c * Scalar(static_cast<long>(d[v]));
            d[v] -= 1;
            r.accumulate(std::move(d), std::move(nc));
        }
        return r;
    }

    /// i -> -i, z <-> z~, real parameters fixed.
    Poly conj() const {
        Poly r(vs_);
        for (auto& [e, c] : terms_) {
            Exp d(e.size(), 0);
            for (std::size_t v = 0; v < e.size(); ++v) d[vs_->conj_of(v)] = e[v];
            r.accumulate(std::move(d), c.conj());
        }
        return r;
    }

    std::complex<double> eval(const NumPoint& pt) const {
        std::complex<double> sum{0, 0};
        for (auto& [e, c] : terms_) {
            std::complex<double> m = c.eval();
            for (std::size_t v = 0; v < e.size(); ++v) {
                if (e[v] == 0) continue;
                std::complex<double> base;
                std::size_t key = vs_->is_conj(v) ? vs_->conj_of(v) : v;
                auto it = pt.vals.find(key);
                if (it == pt.vals.end())
                    throw Error("eval: no value for variable " + vs_->name(key));
                base = vs_->is_conj(v) ? std::conj(it->second) : it->second;
                for (int j = 0; j < e[v]; ++j) m *= base;
            }
            sum += m;
        }
        return sum;
    }

    /// Decompose as a polynomial in variable v: power -> coefficient Poly.
    std::map<int, Poly> by_var(std::size_t v) const {
        std::map<int, Poly> out;
        for (auto& [e, c] : terms_) {
            Exp d = e;
            int k = d[v];
            d[v] = 0;
            auto it = out.find(k);
            if (it == out.end()) it = out.emplace(k, Poly(vs_)).first;
            it->second.accumulate(std::move(d), Scalar(c));
        }
        return out;
    }

    /// Exact multivariate division: returns *this / g if g divides exactly,
    /// otherwise nullopt.  Coefficient division needs invertible (single
    /// pi-term) leading coefficients; a non-invertible one yields nullopt.
    std::optional<Poly> try_divide(const Poly& g) const {
        if (g.is_zero()) return std::nullopt;
        Poly rem = *this;
        Poly quot(vs_);
        auto& glt = *g.terms_.rbegin();
        if (!glt.second.is_single_term()) return std::nullopt;
        Scalar glc_inv = glt.second.inv();
        while (!rem.is_zero()) {
            auto& rlt = *rem.terms_.rbegin();
            Exp qe = rlt.first;
            for (std::size_t v = 0; v < qe.size(); ++v) {
                qe[v] -= glt.first[v];
                if (qe[v] < 0) return std::nullopt;
            }
            Scalar qc = rlt.second * glc_inv;
            Poly qterm(vs_);
            qterm.terms_[qe] = qc;
            rem = rem - qterm * g;
            quot.accumulate(std::move(qe), std::move(qc));
            // progress check: leading term strictly decreased
            if (!rem.is_zero() && !(rem.terms_.rbegin()->first < rlt.first) &&
                rem.terms_.rbegin()->first == rlt.first)
                return std::nullopt;
        }
        return quot;
    }

    /// Componentwise min of all exponent vectors (the monomial content).
    Exp monomial_content() const {
        if (terms_.empty()) return {};
        Exp m = terms_.begin()->first;
        for (auto& [e, c] : terms_)
            for (std::size_t v = 0; v < m.size(); ++v) m[v] = std::min(m[v], e[v]);
        return m;
    }

    /// Divide out a monomial (exponentwise; caller guarantees divisibility).
    Poly shift_down(const Exp& m) const {
        Poly r(vs_);
        for (auto& [e, c] : terms_) {
            Exp d = e;
            for (std::size_t v = 0; v < d.size(); ++v) d[v] -= m[v];
            r.terms_[std::move(d)] = c;
        }
        return r;
    }

    /// Re-express on another varset via an index map old var -> new var.
    Poly relabel(VarSetPtr nvs, const std::vector<std::size_t>& vmap) const {
        Poly r(nvs);
        for (auto& [e, c] : terms_) {
            Exp d(nvs->size(), 0);
            for (std::size_t v = 0; v < e.size(); ++v)
                if (e[v] != 0) d.at(vmap[v]) += e[v];
            r.accumulate(std::move(d), Scalar(c));
        }
        return r;
    }

    void accumulate(Exp e, Scalar c) {
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(std::move(e), std::move(c));
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (!first) os << " + ";
            first = false;
            os << "(" << it->second.str() << ")";
            for (std::size_t v = 0; v < it->first.size(); ++v)
                if (it->first[v] != 0) {
                    os << "*" << vs_->name(v);
                    if (it->first[v] != 1) os << "^" << it->first[v];
                }
        }
        return os.str();
    }

private:
    void require_compat(const Poly& o) const {
        if (vs_ && o.vs_) require_same_varset(vs_, o.vs_);
    }
    Poly& add_in(const Poly& o) {
        for (auto& [e, c] : o.terms_) accumulate(e, c);
        return *this;
    }

    VarSetPtr vs_;
    std::map<Exp, Scalar> terms_;
};

} // namespace cda
