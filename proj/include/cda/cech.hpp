#pragma once

#include <optional>
#include <random>

#include "cda/connection.hpp"

namespace cda {

using MultiIndex = std::vector<int>;

/// One (multi-)intersection of the cover: its hosting chart plus transition
/// maps to the charts of its faces (sub-multi-indices).
struct Patch {
    bool empty = false;
    VarSetPtr chart;
    /// face multi-index -> chart map with source = this patch's chart and
    /// target = the face's chart
    std::map<MultiIndex, ChartMap> maps;
};

/// Finite cover with nerve truncated at triple intersections.
class Cover {
public:
    explicit Cover(int nsets) : n_(nsets) {}

    int nsets() const { return n_; }

    void set_patch(MultiIndex idx, Patch p) {
        validate_index(idx);
        patches_.insert_or_assign(std::move(idx), std::move(p));
    }
    void set_empty(MultiIndex idx) {
        validate_index(idx);
        Patch p;
        p.empty = true;
        patches_.insert_or_assign(std::move(idx), std::move(p));
    }

    bool is_empty(const MultiIndex& idx) const {
        if (idx.size() > 3) return true;
        auto it = patches_.find(idx);
        return it == patches_.end() || it->second.empty;
    }
    const Patch& patch(const MultiIndex& idx) const {
        auto it = patches_.find(idx);
        if (it == patches_.end() || it->second.empty)
            throw CoverMismatch("no patch for the requested intersection");
        return it->second;
    }
    const std::map<MultiIndex, Patch>& patches() const { return patches_; }

    /// Restrict a form living on face `face` to the intersection `idx`.
    Form restrict_form(const MultiIndex& idx, const MultiIndex& face,
                       const Form& f) const {
        const Patch& p = patch(idx);
        auto it = p.maps.find(face);
        if (it == p.maps.end()) {
            const Patch& fp = patch(face);
            if (same_varset(p.chart, fp.chart)) return f;
            throw MissingTransition("no transition map from intersection to face");
        }
        return pullback(it->second, f);
    }
    MatrixForm restrict_matrix(const MultiIndex& idx, const MultiIndex& face,
                               const MatrixForm& m) const {
        MatrixForm r(patch(idx).chart, m.size());
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j)
                r.at(i, j) = restrict_form(idx, face, m.at(i, j));
        return r;
    }

    /// The transition map from intersection to face, materializing the
    /// identity when the charts coincide; nullopt when unavailable.
    std::optional<ChartMap> map_to(const MultiIndex& idx,
                                   const MultiIndex& face) const {
        const Patch& p = patch(idx);
        auto it = p.maps.find(face);
        if (it != p.maps.end()) return it->second;
        const Patch& fp = patch(face);
        if (same_varset(p.chart, fp.chart))
            return ChartMap(p.chart, fp.chart, {});
        return std::nullopt;
    }

    /// Numeric spot check: transition maps compose consistently through
    /// intermediate faces (I -> J -> K versus I -> K).
    bool check_consistency(std::mt19937_64& rng, int samples = 4,
                           double tol = 1e-9) const {
        for (auto& [idx, p] : patches_) {
            if (p.empty || idx.size() == 1) continue;
            for (auto& [mid, pm] : patches_) {
                if (pm.empty || mid.size() >= idx.size() || !subset(mid, idx))
                    continue;
                for (auto& [far, pf] : patches_) {
                    if (pf.empty || far.size() >= mid.size() || !subset(far, mid))
                        continue;
                    auto m1 = map_to(idx, mid);
                    auto m2 = map_to(mid, far);
                    auto direct = map_to(idx, far);
                    if (!m1 || !m2 || !direct) continue;
                    for (int s = 0; s < samples; ++s)
                        if (!check_composition(*m1, *m2, *direct, rng, tol))
                            return false;
                }
            }
        }
        return true;
    }

private:
    static bool subset(const MultiIndex& a, const MultiIndex& b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    }

    void validate_index(const MultiIndex& idx) const {
        if (idx.empty() || idx.size() > 3)
            throw CoverMismatch("multi-index depth out of range");
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (idx[k] < 0 || idx[k] >= n_)
                throw CoverMismatch("set index out of range");
            if (k > 0 && idx[k] <= idx[k - 1])
                throw CoverMismatch("multi-index must be strictly increasing");
        }
    }

    static bool check_composition(const ChartMap& m1, const ChartMap& m2,
                                  const ChartMap& direct, std::mt19937_64& rng,
                                  double tol) {
        std::uniform_real_distribution<double> u(0.4, 1.3);
        NumPoint pt;
        const VarSetPtr& src = m1.source();
        for (std::size_t v = 0; v < src->size(); ++v)
            if (src->is_holo(v) || src->is_real(v))
                pt.vals[v] = src->is_real(v)
                                 ? std::complex<double>(u(rng), 0.0)
                                 : std::complex<double>(u(rng), u(rng) - 0.85);
        try {
            NumPoint mid;
            const VarSetPtr& mvs = m2.source();
            for (std::size_t v = 0; v < mvs->n_holo(); ++v) {
                auto it = m1.components().find(v);
                if (it != m1.components().end())
                    mid.vals[v] = it->second.eval(pt);
                else
                    mid.vals[v] = pt.vals.at(src->index_of(mvs->name(v)));
            }
            const VarSetPtr& tvs = m2.target();
            for (std::size_t v = 0; v < tvs->n_holo(); ++v) {
                std::complex<double> through, straight;
                auto i2 = m2.components().find(v);
                through = i2 != m2.components().end()
                              ? i2->second.eval(mid)
                              : mid.vals.at(mvs->index_of(tvs->name(v)));
                auto id = direct.components().find(v);
                straight = id != direct.components().end()
                               ? id->second.eval(pt)
                               : pt.vals.at(src->index_of(tvs->name(v)));
                if (std::abs(through - straight) >
                    tol * (1.0 + std::abs(straight)))
                    return false;
            }
        } catch (const NumericPole&) {
            return true; // unlucky sample; other samples decide
        }
        return true;
    }

    int n_;
    std::map<MultiIndex, Patch> patches_;
};

/// Cech-Dolbeault cochain of base bidegree (p, q): the component on a
/// (k+1)-fold intersection is a (p, q-k)-form in the intersection's chart.
struct Cochain {
    const Cover* cover = nullptr;
    int p = 0, q = 0;
    std::map<MultiIndex, Form> comp;

    Form component(const MultiIndex& idx) const {
        auto it = comp.find(idx);
        if (it != comp.end()) return it->second;
        return Form(cover->patch(idx).chart);
    }
    void set(MultiIndex idx, Form f) {
        if (!f.is_zero()) comp.insert_or_assign(std::move(idx), std::move(f));
    }
    bool is_zero() const {
        for (auto& [i, f] : comp)
            if (!f.is_zero()) return false;
        return true;
    }
};

namespace detail {

inline void require_same_cover(const Cochain& a, const Cochain& b) {
    if (a.cover != b.cover) throw CoverMismatch("cochains on different covers");
}

} // namespace detail

inline Cochain operator+(const Cochain& a, const Cochain& b) {
    detail::require_same_cover(a, b);
    Cochain r = a;
    for (auto& [i, f] : b.comp) {
        auto it = r.comp.find(i);
        if (it == r.comp.end())
            r.comp.emplace(i, f);
        else {
            it->second = it->second + f;
            if (it->second.is_zero()) r.comp.erase(it);
        }
    }
    return r;
}

inline Cochain operator-(const Cochain& a) {
    Cochain r = a;
    for (auto& [i, f] : r.comp) f = -f;
    return r;
}
inline Cochain operator-(const Cochain& a, const Cochain& b) { return a + (-b); }

/// (D s)_{i_0..i_k} = sum_nu (-1)^nu s_{i_0..^i_nu..i_k} + (-1)^k dbar s_{i_0..i_k},
/// truncated at triple intersections.
inline Cochain dbar_cech(const Cochain& s) {
    const Cover& cov = *s.cover;
    Cochain r;
    r.cover = s.cover;
    r.p = s.p;
    r.q = s.q + 1;
    for (auto& [idx, p] : cov.patches()) {
        if (p.empty) continue;
        std::size_t k = idx.size() - 1;
        Form acc(p.chart);
        for (std::size_t nu = 0; nu < idx.size(); ++nu) {
            if (k == 0) break; // no faces of a single set
            MultiIndex face = idx;
            face.erase(face.begin() + static_cast<long>(nu));
            Form part = cov.restrict_form(idx, face, s.component(face));
            acc = (nu % 2 == 0) ? acc + part : acc - part;
        }
        Form db = s.component(idx).dbar();
        acc = (k % 2 == 0) ? acc + db : acc - db;
        r.set(idx, std::move(acc));
    }
    return r;
}

/// (s cup t)_{i_0..i_k} = sum_m (-1)^{(p+q-m)(k-m)} s_{i_0..i_m} ^ t_{i_m..i_k}.
inline Cochain cup(const Cochain& s, const Cochain& t) {
    detail::require_same_cover(s, t);
    const Cover& cov = *s.cover;
    Cochain r;
    r.cover = s.cover;
    r.p = s.p + t.p;
    r.q = s.q + t.q;
    int deg = s.p + s.q;
    for (auto& [idx, patch] : cov.patches()) {
        if (patch.empty) continue;
        int k = static_cast<int>(idx.size()) - 1;
        Form acc(patch.chart);
        for (int m = 0; m <= k; ++m) {
            MultiIndex head(idx.begin(), idx.begin() + m + 1);
            MultiIndex tail(idx.begin() + m, idx.end());
            if (cov.is_empty(head) || cov.is_empty(tail)) continue;
            Form a = cov.restrict_form(idx, head, s.component(head));
            Form b = cov.restrict_form(idx, tail, t.component(tail));
            Form w = a.wedge(b);
            if (((deg - m) * (k - m)) % 2 != 0) w = -w;
            acc = acc + w;
        }
        r.set(idx, std::move(acc));
    }
    return r;
}

/// Pull a connection chart back to an intersection chart and re-express it in
/// the intersection's reference frame via the 0-form frame matrix A
/// (new frame = old frame * A); A absent means the identity.
inline ConnectionChart connection_on_patch(const Cover& cov, const MultiIndex& idx,
                                           const MultiIndex& face,
                                           const ConnectionChart& c,
                                           const MatrixForm* A) {
    MatrixForm th = cov.restrict_matrix(idx, face, c.theta);
    if (A) th = frame_change(th, *A);
    return ConnectionChart(cov.patch(idx).chart, std::move(th));
}

/// Per-pair frame relations: (pair multi-index, set) -> 0-form matrix A on
/// the pair chart.
using FrameRelations = std::map<std::pair<MultiIndex, int>, MatrixForm>;

/// a^p(nabla_*) = (a^p(nabla_i), a^p(nabla_i, nabla_j), 0).
inline Cochain localized_atiyah_cocycle(const Cover& cov,
                                        const std::vector<ConnectionChart>& conns,
                                        const FrameRelations& frames,
                                        std::size_t p) {
    if (static_cast<int>(conns.size()) != cov.nsets())
        throw CoverMismatch("need one connection chart per cover set");
    Cochain r;
    r.cover = &cov;
    r.p = static_cast<int>(p);
    r.q = static_cast<int>(p);
    for (auto& [idx, patch] : cov.patches()) {
        if (patch.empty) continue;
        if (idx.size() == 1) {
            r.set(idx, atiyah_form(conns[static_cast<std::size_t>(idx[0])], p));
        } else if (idx.size() == 2) {
            auto frame_of = [&](int i) -> const MatrixForm* {
                auto it = frames.find({idx, i});
                return it == frames.end() ? nullptr : &it->second;
            };
            MultiIndex fi{idx[0]}, fj{idx[1]};
            ConnectionChart ci = connection_on_patch(
                cov, idx, fi, conns[static_cast<std::size_t>(idx[0])],
                frame_of(idx[0]));
            ConnectionChart cj = connection_on_patch(
                cov, idx, fj, conns[static_cast<std::size_t>(idx[1])],
                frame_of(idx[1]));
            r.set(idx, atiyah_difference(ci, cj, p));
        } else if (p > 1) {
            throw Error("triple components need multi-connection difference "
                        "forms, only available for p = 1");
        }
        // triple components vanish for p = 1: bidegree (1, -1)
    }
    return r;
}

/// sigma lies in the relative subcomplex A(U, U_special).
inline bool is_relative(const Cochain& s, int special_set) {
    MultiIndex idx{special_set};
    if (s.cover->is_empty(idx)) return true;
    return s.component(idx).is_zero();
}

/// xi_ij = tau_ij + rho_i - rho_j on each pair chart (Stein reduction of a
/// D-closed (tau_i, tau_ij) with user-supplied potentials dbar rho_i = tau_i).
inline Cochain stein_reduction(const Cover& cov,
                               const std::map<int, Form>& potentials,
                               const Cochain& tau) {
    Cochain xi;
    xi.cover = &cov;
    xi.p = tau.p;
    xi.q = tau.q;
    for (auto& [idx, patch] : cov.patches()) {
        if (patch.empty || idx.size() != 2) continue;
        Form acc = tau.component(idx);
        for (int side = 0; side < 2; ++side) {
            auto it = potentials.find(idx[static_cast<std::size_t>(side)]);
            if (it == potentials.end()) continue;
            MultiIndex face{idx[static_cast<std::size_t>(side)]};
            Form part = cov.restrict_form(idx, face, it->second);
            acc = (side == 0) ? acc + part : acc - part;
        }
        xi.set(idx, std::move(acc));
    }
    return xi;
}

} // namespace cda
