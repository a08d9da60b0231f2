#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cda/errors.hpp"

namespace cda {

/// An ordered set of chart variables: n holomorphic names z_i, their paired
/// formal conjugates, and optional real parameters (such as the deformation
/// variable t).  Variables are addressed by a flat index:
///   [0, n)      holomorphic
///   [n, 2n)     conjugates, paired 1:1 with the holomorphic block
///   [2n, 2n+m)  real parameters (self-conjugate)
class VarSet {
public:
    VarSet(std::vector<std::string> holo, std::vector<std::string> real = {})
        : holo_(std::move(holo)), real_(std::move(real)) {
        conj_.reserve(holo_.size());
        for (auto& h : holo_) conj_.push_back(h + "~");
        check_unique();
    }

    std::size_t n_holo() const { return holo_.size(); }
    std::size_t n_real() const { return real_.size(); }
    std::size_t size() const { return 2 * holo_.size() + real_.size(); }

    bool is_holo(std::size_t v) const { return v < n_holo(); }
    bool is_conj(std::size_t v) const { return v >= n_holo() && v < 2 * n_holo(); }
    bool is_real(std::size_t v) const { return v >= 2 * n_holo() && v < size(); }

    std::size_t conj_of(std::size_t v) const {
        if (is_holo(v)) return v + n_holo();
        if (is_conj(v)) return v - n_holo();
        return v; // real parameters are self-conjugate
    }

    const std::string& name(std::size_t v) const {
        if (is_holo(v)) return holo_[v];
        if (is_conj(v)) return conj_[v - n_holo()];
        return real_[v - 2 * n_holo()];
    }

    /// Flat index of a variable name, or npos.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t find(const std::string& nm) const {
        for (std::size_t v = 0; v < size(); ++v)
            if (name(v) == nm) return v;
        return npos;
    }
    std::size_t index_of(const std::string& nm) const {
        auto v = find(nm);
        if (v == npos) throw UnknownVariable("unknown variable: " + nm);
        return v;
    }

    bool operator==(const VarSet& o) const {
        return holo_ == o.holo_ && real_ == o.real_;
    }
    bool operator!=(const VarSet& o) const { return !(*this == o); }

private:
    void check_unique() const {
        for (std::size_t a = 0; a < size(); ++a)
            for (std::size_t b = a + 1; b < size(); ++b)
                if (name(a) == name(b))
                    throw Error("duplicate variable name: " + name(a));
    }

    std::vector<std::string> holo_, conj_, real_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

inline VarSetPtr make_varset(std::vector<std::string> holo,
                             std::vector<std::string> real = {}) {
    return std::make_shared<VarSet>(std::move(holo), std::move(real));
}

inline bool same_varset(const VarSetPtr& a, const VarSetPtr& b) {
    return a == b || (a && b && *a == *b);
}

inline void require_same_varset(const VarSetPtr& a, const VarSetPtr& b) {
    if (!same_varset(a, b)) throw VarSetMismatch("operands live on different varsets");
}

} // namespace cda
