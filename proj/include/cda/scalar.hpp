#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "cda/errors.hpp"

namespace cda {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Gaussian rational a + b*i.
struct GaussRat {
    Rational re{0};
    Rational im{0};

    GaussRat() = default;
    GaussRat(Rational r) : re(std::move(r)) {}
    GaussRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussRat(long n) : re(n) {}

    bool is_zero() const { return re == 0 && im == 0; }

    GaussRat operator-() const { return {-re, -im}; }
    GaussRat operator+(const GaussRat& o) const { return {re + o.re, im + o.im}; }
    GaussRat operator-(const GaussRat& o) const { return {re - o.re, im - o.im}; }
    GaussRat operator*(const GaussRat& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GaussRat inv() const {
        Rational n = re * re + im * im;
        if (n == 0) throw NotInvertible("inverse of zero Gaussian rational");
        return {re / n, -im / n};
    }
    GaussRat operator/(const GaussRat& o) const { return *this * o.inv(); }
    GaussRat conj() const { return {re, -im}; }

    bool operator==(const GaussRat& o) const { return re == o.re && im == o.im; }
    bool operator!=(const GaussRat& o) const { return !(*this == o); }

    std::complex<double> eval() const { return {to_double(re), to_double(im)}; }
};

/// Element of Q(i)[pi, pi^-1]: a Laurent polynomial in a formal symbol pi
/// with Gaussian rational coefficients.  pi is never evaluated except in
/// eval(); this keeps cancellations like (i/2pi)^2 * (2pi i)^2 = 1 exact.
class Scalar {
public:
    Scalar() = default;
    Scalar(long n) {
        if (n != 0) terms_[0] = GaussRat(n);
    }
    Scalar(Rational q) {
        if (q != 0) terms_[0] = GaussRat(std::move(q));
    }
    Scalar(GaussRat g) {
        if (!g.is_zero()) terms_[0] = std::move(g);
    }

    static Scalar i() { return Scalar(GaussRat{Rational(0), Rational(1)}); }
    static Scalar pi_pow(int k, GaussRat c = GaussRat(1)) {
        Scalar s;
        if (!c.is_zero()) s.terms_[k] = std::move(c);
        return s;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->first == 0 &&
               terms_.begin()->second == GaussRat(1);
    }
    /// True when the value lies in Q(i) (no pi dependence).
    bool is_pi_free() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
    }
    bool is_single_term() const { return terms_.size() == 1; }

    /// The pi-free Gaussian rational value; throws if pi is present.
    GaussRat rational_part() const {
        if (terms_.empty()) return GaussRat(0);
        if (!is_pi_free()) throw Error("scalar is not pi-free");
        return terms_.begin()->second;
    }

    const std::map<int, GaussRat>& terms() const { return terms_; }

    Scalar operator-() const {
        Scalar r;
        for (auto& [k, c] : terms_) r.terms_[k] = -c;
        return r;
    }
    Scalar operator+(const Scalar& o) const {
        Scalar r = *this;
        for (auto& [k, c] : o.terms_) {
            auto it = r.terms_.find(k);
            if (it == r.terms_.end()) {
                r.terms_[k] = c;
            } else {
                it->second = it->second + c;
                if (it->second.is_zero()) r.terms_.erase(it);
            }
        }
        return r;
    }
    Scalar operator-(const Scalar& o) const { return *this + (-o); }
    Scalar operator*(const Scalar& o) const {
        Scalar r;
        for (auto& [k1, c1] : terms_)
            for (auto& [k2, c2] : o.terms_) {
                GaussRat p = c1 * c2;
                if (p.is_zero()) continue;
                auto it = r.terms_.find(k1 + k2);
                if (it == r.terms_.end()) {
                    r.terms_[k1 + k2] = p;
                } else {
                    it->second = it->second + p;
                    if (it->second.is_zero()) r.terms_.erase(it);
                }
            }
        return r;
    }

    /// Multiplicative inverse; defined only for single-term values q*i^a*pi^b.
    Scalar inv() const {
        if (terms_.empty()) throw NotInvertible("inverse of zero Scalar");
        if (terms_.size() != 1)
            throw NotInvertible("Scalar with several pi-graded terms has no inverse");
        auto& [k, c] = *terms_.begin();
        return pi_pow(-k, c.inv());
    }
    Scalar operator/(const Scalar& o) const { return *this * o.inv(); }

    Scalar conj() const {
        Scalar r;
        for (auto& [k, c] : terms_) r.terms_[k] = c.conj();
        return r;
    }

    bool operator==(const Scalar& o) const { return terms_ == o.terms_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    bool operator<(const Scalar& o) const {
        auto cmp = [](const GaussRat& a, const GaussRat& b) {
            if (a.re != b.re) return a.re < b.re ? -1 : 1;
            if (a.im != b.im) return a.im < b.im ? -1 : 1;
            return 0;
        };
        auto it = terms_.begin(), jt = o.terms_.begin();
        for (; it != terms_.end() && jt != o.terms_.end(); ++it, ++jt) {
            if (it->first != jt->first) return it->first < jt->first;
            int c = cmp(it->second, jt->second);
            if (c != 0) return c < 0;
        }
        return it == terms_.end() && jt != o.terms_.end();
    }

    std::complex<double> eval() const {
        std::complex<double> v{0, 0};
        for (auto& [k, c] : terms_) v += c.eval() * std::pow(std::numbers::pi, k);
        return v;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [k, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.re.str();
            if (c.im != 0) os << (c.im > 0 ? "+" : "") << c.im.str() << "i";
            os << ")";
            if (k != 0) os << "*pi^" << k;
        }
        return os.str();
    }

private:
    // pi-exponent -> coefficient; zero coefficients never stored.
    std::map<int, GaussRat> terms_;
};

inline Scalar operator*(long n, const Scalar& s) { return Scalar(n) * s; }

} // namespace cda
