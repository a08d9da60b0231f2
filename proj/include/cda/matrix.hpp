#pragma once

#include <vector>

#include "cda/form.hpp"

namespace cda {

/// Square matrix of Forms over a shared varset.
class MatrixForm {
public:
    MatrixForm(VarSetPtr vs, std::size_t n)
        : vs_(std::move(vs)), n_(n), e_(n * n, Form(vs_)) {}

    static MatrixForm identity(const VarSetPtr& vs, std::size_t n) {
        MatrixForm m(vs, n);
        for (std::size_t i = 0; i < n; ++i)
            m.at(i, i) = Form(RationalFn::constant(vs, Scalar(1)));
        return m;
    }

    std::size_t size() const { return n_; }
    const VarSetPtr& varset() const { return vs_; }
    Form& at(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
    const Form& at(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }

    bool is_zero() const {
        for (auto& f : e_)
            if (!f.is_zero()) return false;
        return true;
    }

    MatrixForm operator-() const { return map([](const Form& f) { return -f; }); }
    MatrixForm operator+(const MatrixForm& o) const {
        check(o);
        MatrixForm r(vs_, n_);
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] + o.e_[k];
        return r;
    }
    MatrixForm operator-(const MatrixForm& o) const { return *this + (-o); }
    /// Matrix product with entrywise wedge.
    MatrixForm operator*(const MatrixForm& o) const {
        check(o);
        MatrixForm r(vs_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                Form s(vs_);
                for (std::size_t k = 0; k < n_; ++k)
                    s = s + at(i, k).wedge(o.at(k, j));
                r.at(i, j) = std::move(s);
            }
        return r;
    }
    MatrixForm operator*(const Scalar& s) const {
        return map([&](const Form& f) { return f * s; });
    }
    MatrixForm operator*(const RationalFn& f) const {
        return map([&](const Form& g) { return g * f; });
    }
    bool operator==(const MatrixForm& o) const { return (*this - o).is_zero(); }
    bool operator!=(const MatrixForm& o) const { return !(*this == o); }

    MatrixForm d() const { return map([](const Form& f) { return f.d(); }); }
    MatrixForm del() const { return map([](const Form& f) { return f.del(); }); }
    MatrixForm dbar() const { return map([](const Form& f) { return f.dbar(); }); }
    MatrixForm type_component(int p, int q) const {
        return map([&](const Form& f) { return f.type_component(p, q); });
    }
    MatrixForm conj() const { return map([](const Form& f) { return f.conj(); }); }
    MatrixForm relabel(VarSetPtr nvs,
                       const std::vector<std::size_t>& vmap) const {
        MatrixForm r(nvs, n_);
        for (std::size_t k = 0; k < e_.size(); ++k)
            r.e_[k] = e_[k].relabel(nvs, vmap);
        return r;
    }

    /// True when every entry is homogeneous of the given total degree.
    bool all_degree(int deg) const {
        for (auto& f : e_)
            for (auto& [k, c] : f.terms())
                if (k.degree() != deg) return false;
        return true;
    }
    /// True when every entry has pure bidegree (p, q) (no dt).
    bool all_type(int p, int q) const {
        for (auto& f : e_)
            if (f.type_component(p, q) != f) return false;
        return true;
    }

    template <class F> MatrixForm map(F&& fn) const {
        MatrixForm r(vs_, n_);
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = fn(e_[k]);
        return r;
    }

private:
    void check(const MatrixForm& o) const {
        require_same_varset(vs_, o.vs_);
        if (n_ != o.n_) throw Error("matrix size mismatch");
    }

    VarSetPtr vs_;
    std::size_t n_;
    std::vector<Form> e_;
};

/// Determinant of a RationalFn grid by Laplace expansion.
inline RationalFn det_ratfn(const std::vector<std::vector<RationalFn>>& a,
                            const VarSetPtr& vs) {
    std::size_t n = a.size();
    if (n == 0) return RationalFn::constant(vs, Scalar(1));
    if (n == 1) return a[0][0];
    RationalFn acc{Poly(vs)};
    for (std::size_t j = 0; j < n; ++j) {
        if (a[0][j].is_zero()) continue;
        std::vector<std::vector<RationalFn>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<RationalFn> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(a[i][k]);
            minor.push_back(std::move(row));
        }
        RationalFn term = a[0][j] * det_ratfn(minor, vs);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

/// Extract a grid of 0-form coefficients; throws unless all entries are
/// 0-forms.
inline std::vector<std::vector<RationalFn>> as_ratfn_grid(const MatrixForm& m) {
    std::size_t n = m.size();
    std::vector<std::vector<RationalFn>> g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Form& f = m.at(i, j);
            RationalFn c{Poly(m.varset())};
            for (auto& [k, v] : f.terms()) {
                if (k.degree() != 0) throw DegreeError("expected a 0-form entry");
                c = v;
            }
            g[i].push_back(std::move(c));
        }
    return g;
}

/// Inverse of a matrix of 0-forms via the adjugate over the function field.
inline MatrixForm inverse_0form(const MatrixForm& m) {
    auto g = as_ratfn_grid(m);
    std::size_t n = m.size();
    RationalFn det = det_ratfn(g, m.varset());
    if (det.is_zero()) throw SingularFrameChange("matrix determinant is zero");
    MatrixForm r(m.varset(), n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::vector<RationalFn>> minor;
            for (std::size_t a = 0; a < n; ++a) {
                if (a == j) continue;
                std::vector<RationalFn> row;
                for (std::size_t b = 0; b < n; ++b)
                    if (b != i) row.push_back(g[a][b]);
                minor.push_back(std::move(row));
            }
            RationalFn c = det_ratfn(minor, m.varset()) / det;
            if ((i + j) % 2 == 1) c = -c;
            r.at(i, j) = Form(std::move(c));
        }
    return r;
}

/// Determinant of a matrix of even-degree forms (entries commute) by Laplace
/// expansion along the first row.
inline Form det_even(const MatrixForm& m) {
    std::size_t n = m.size();
    if (n == 0) return Form(RationalFn::constant(m.varset(), Scalar(1)));
    if (n == 1) return m.at(0, 0);
    Form acc(m.varset());
    for (std::size_t j = 0; j < n; ++j) {
        if (m.at(0, j).is_zero()) continue;
        MatrixForm minor(m.varset(), n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t col = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == j) continue;
                minor.at(i - 1, col++) = m.at(i, k);
            }
        }
        Form term = m.at(0, j).wedge(det_even(minor));
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

/// t^p coefficient of det(I + t*kappa): sum of p x p principal minors.
inline Form sigma_p(const MatrixForm& kappa, std::size_t p) {
    std::size_t n = kappa.size();
    if (p > n) throw DegreeError("sigma_p: p exceeds matrix size");
    if (p == 0) return Form(RationalFn::constant(kappa.varset(), Scalar(1)));
    Form acc(kappa.varset());
    std::vector<std::size_t> idx(p);
    // iterate over p-subsets of {0..n-1}
    for (std::size_t i = 0; i < p; ++i) idx[i] = i;
    while (true) {
        MatrixForm sub(kappa.varset(), p);
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = 0; b < p; ++b)
                sub.at(a, b) = kappa.at(idx[a], idx[b]);
        acc = acc + det_even(sub);
        // next combination
        std::size_t i = p;
        while (i > 0 && idx[i - 1] == n - p + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t k = i; k < p; ++k) idx[k] = idx[k - 1] + 1;
    }
    return acc;
}

} // namespace cda
