#pragma once

// The P^3 / Martinet-distribution worked example: cover of V = P^2 by
// U_0..U_3, the induced normal-bundle connections, frame relations and
// Fubini-Study potentials.

#include "cda/cech.hpp"
#include "test_helpers.hpp"

namespace cda::test {

struct Section9 {
    VarSetPtr vs0;  // (x, y)    chart of U_0, U_1
    VarSetPtr vs2;  // (y2, z2)  chart of U_2
    VarSetPtr vs13; // (x1, z1)  chart of U_3
    Cover cover{4};
    std::vector<ConnectionChart> conns;
    FrameRelations frames;
    std::map<int, Form> potentials; // rho_1, rho_2, rho_3
};

inline Form fs_potential(const VarSetPtr& vs) {
    // -(i/2pi) (u~ du + v~ dv) / (1 + |u|^2 + |v|^2) for the chart (u, v)
    auto u = RationalFn::var(vs, 0);
    auto v = RationalFn::var(vs, 1);
    auto ub = RationalFn::var(vs, vs->conj_of(0));
    auto vb = RationalFn::var(vs, vs->conj_of(1));
    auto D = RationalFn::constant(vs, Scalar(1)) + u * ub + v * vb;
    Form r(vs);
    r.accumulate(FormKey{false, {0}, {}}, -(ub / D) * half_i_over_pi());
    r.accumulate(FormKey{false, {1}, {}}, -(vb / D) * half_i_over_pi());
    return r;
}

inline Section9 make_section9() {
    Section9 s;
    s.vs0 = make_varset({"x", "y"});
    s.vs2 = make_varset({"y2", "z2"});
    s.vs13 = make_varset({"x1", "z1"});

    auto one0 = RationalFn::constant(s.vs0, Scalar(1));
    auto x = RationalFn::var(s.vs0, 0);
    auto y = RationalFn::var(s.vs0, 1);
    auto one2 = RationalFn::constant(s.vs2, Scalar(1));
    auto y2 = RationalFn::var(s.vs2, 0);
    auto z2 = RationalFn::var(s.vs2, 1);
    auto one13 = RationalFn::constant(s.vs13, Scalar(1));
    auto x1 = RationalFn::var(s.vs13, 0);
    auto z1 = RationalFn::var(s.vs13, 1);

    // chart transitions
    auto m_2to0 = [&] { // (y2,z2) -> (x,y): x = z2/y2, y = 1/y2
        return ChartMap(s.vs2, s.vs0, {{0, z2 / y2}, {1, one2 / y2}});
    };
    auto m_13to0 = [&] { // (x1,z1) -> (x,y): x = 1/x1, y = z1/x1
        return ChartMap(s.vs13, s.vs0, {{0, one13 / x1}, {1, z1 / x1}});
    };
    auto m_13to2 = [&] { // (x1,z1) -> (y2,z2): y2 = x1/z1, z2 = 1/z1
        return ChartMap(s.vs13, s.vs2, {{0, x1 / z1}, {1, one13 / z1}});
    };
    auto m_0to13 = [&] { // (x,y) -> (x1,z1): x1 = 1/x, z1 = y/x
        return ChartMap(s.vs0, s.vs13, {{0, one0 / x}, {1, y / x}});
    };
    auto m_2to13 = [&] { // (y2,z2) -> (x1,z1): x1 = y2/z2, z1 = 1/z2
        return ChartMap(s.vs2, s.vs13, {{0, y2 / z2}, {1, one2 / z2}});
    };

    auto single = [&](int i, VarSetPtr ch) {
        Patch p;
        p.chart = std::move(ch);
        s.cover.set_patch({i}, std::move(p));
    };
    single(0, s.vs0);
    single(1, s.vs0);
    single(2, s.vs2);
    single(3, s.vs13);

    auto pair = [&](int i, int j, VarSetPtr ch,
                    std::map<MultiIndex, ChartMap> maps) {
        Patch p;
        p.chart = std::move(ch);
        p.maps = std::move(maps);
        s.cover.set_patch({i, j}, std::move(p));
    };
    pair(0, 1, s.vs0, {});
    pair(0, 2, s.vs2, {{{0}, m_2to0()}});
    pair(0, 3, s.vs13, {{{0}, m_13to0()}});
    pair(1, 2, s.vs2, {{{1}, m_2to0()}});
    pair(1, 3, s.vs13, {{{1}, m_13to0()}});
    pair(2, 3, s.vs13, {{{2}, m_13to2()}});

    auto triple = [&](MultiIndex idx, VarSetPtr ch,
                      std::map<MultiIndex, ChartMap> maps) {
        Patch p;
        p.chart = std::move(ch);
        p.maps = std::move(maps);
        s.cover.set_patch(std::move(idx), std::move(p));
    };
    triple({0, 1, 2}, s.vs2,
           {{{0}, m_2to0()}, {{1}, m_2to0()}, {{0, 1}, m_2to0()}});
    triple({0, 1, 3}, s.vs0,
           {{{3}, m_0to13()},
            {{0, 3}, m_0to13()},
            {{1, 3}, m_0to13()}});
    triple({0, 2, 3}, s.vs2,
           {{{0}, m_2to0()},
            {{3}, m_2to13()},
            {{0, 3}, m_2to13()},
            {{2, 3}, m_2to13()}});
    triple({1, 2, 3}, s.vs2,
           {{{1}, m_2to0()},
            {{3}, m_2to13()},
            {{1, 3}, m_2to13()},
            {{2, 3}, m_2to13()}});

    // nabla_0 induced on the normal bundle (frame nu_1), nabla_1..3 trivial
    auto avs = make_varset({"x", "y", "z"});
    auto azero = RationalFn(Poly(avs));
    auto aone = RationalFn::constant(avs, Scalar(1));
    auto ay = RationalFn::var(avs, 1);
    auto az = RationalFn::var(avs, 2);
    PartialConnectionData pdata{avs, 2,
                                {VectorField(avs, {azero, ay, az}),
                                 VectorField(avs, {aone, -aone, azero})}};
    s.conns.push_back(normal_partial_connection(pdata));
    s.conns.push_back(ConnectionChart::trivial(s.vs0, 1));
    s.conns.push_back(ConnectionChart::trivial(s.vs2, 1));
    s.conns.push_back(ConnectionChart::trivial(s.vs13, 1));

    // frame relations: nu_2 = (1/y2) nu_1, nu_3 = (1/x1) nu_1, nu_3 = (1/z1) nu_2
    auto rel = [&](MultiIndex pr, int set, const RationalFn& a) {
        MatrixForm A(a.varset(), 1);
        A.at(0, 0) = Form(a);
        s.frames.emplace(std::make_pair(std::move(pr), set), std::move(A));
    };
    rel({0, 2}, 0, one2 / y2);
    rel({0, 3}, 0, one13 / x1);
    rel({1, 2}, 1, one2 / y2);
    rel({1, 3}, 1, one13 / x1);
    rel({2, 3}, 2, one13 / z1);

    s.potentials.emplace(1, fs_potential(s.vs0));
    s.potentials.emplace(2, fs_potential(s.vs2));
    s.potentials.emplace(3, fs_potential(s.vs13));
    return s;
}

/// Single-term (1,0)-form c * d(var).
inline Form d10(const VarSetPtr& vs, std::size_t v, const RationalFn& c) {
    Form f(vs);
    f.accumulate(FormKey{false, {v}, {}}, c);
    return f;
}

} // namespace cda::test
