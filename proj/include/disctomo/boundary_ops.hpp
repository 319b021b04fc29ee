#pragma once

#include "boundary.hpp"

namespace disctomo {

// ---------------------------------------------------------------------------
// Basis bookkeeping on d+SM.
//
//   phi_{p,q}  = (1/(pi sqrt 2)) e^{i(p beta + 2q alpha)}
//   phi'_{p,q} = e^{i alpha} phi_{p,q}
//   u_{p,q}  = phi_{p,q}  + (-1)^p phi_{p,p-q}      (V+, even frequencies)
//   v_{p,q}  = phi_{p,q}  - (-1)^p phi_{p,p-q}      (V-, even frequencies)
//   u'_{p,q} = phi'_{p,q} + (-1)^p phi'_{p,p-q-1}   (V+, odd frequencies)
//   v'_{p,q} = phi'_{p,q} - (-1)^p phi'_{p,p-q-1}   (V-, odd frequencies)
//
// Redundancies: u_{p,p-q} = (-1)^p u_{p,q}, v_{p,p-q} = -(-1)^p v_{p,q}, and
// the primed analogues with q <-> p-q-1. Canonical representatives take
// 2q >= p (unprimed) and 2q+1 >= p (primed); v_{2q,q} and u'_{2q+1,q} vanish
// identically.
// ---------------------------------------------------------------------------

enum class BasisFamily { phi, phip, u, v, up, vp };

struct BoundaryBasisIndex {
    BasisFamily family;
    int p, q;
};

inline bool is_canonical(const BoundaryBasisIndex& idx) {
    switch (idx.family) {
        case BasisFamily::u:
        case BasisFamily::v: return 2 * idx.q >= idx.p;
        case BasisFamily::up:
        case BasisFamily::vp: return 2 * idx.q + 1 >= idx.p;
        default: return true;
    }
}

inline bool is_null_element(const BoundaryBasisIndex& idx) {
    return (idx.family == BasisFamily::v && idx.p == 2 * idx.q) ||
           (idx.family == BasisFamily::up && idx.p == 2 * idx.q + 1);
}

// Canonical index plus the sign relating the element to its canonical form:
// element(idx) = sign * element(canonical).
inline std::pair<BoundaryBasisIndex, double> canonicalize(BoundaryBasisIndex idx) {
    if (is_canonical(idx)) return {idx, 1.0};
    double s = idx.p % 2 ? -1.0 : 1.0;
    switch (idx.family) {
        case BasisFamily::u: return {{idx.family, idx.p, idx.p - idx.q}, s};
        case BasisFamily::v: return {{idx.family, idx.p, idx.p - idx.q}, -s};
        case BasisFamily::up: return {{idx.family, idx.p, idx.p - idx.q - 1}, s};
        case BasisFamily::vp: return {{idx.family, idx.p, idx.p - idx.q - 1}, -s};
        default: return {idx, 1.0};
    }
}

inline InflowField make_basis(const BoundaryBasisIndex& idx, int P, int Q) {
    InflowField f = InflowField::zero(P, Q);
    const double c = 1.0 / (pi * std::numbers::sqrt2);
    const double sp = idx.p % 2 ? -1.0 : 1.0;
    switch (idx.family) {
        case BasisFamily::phi: f.E.add(idx.p, idx.q, c); break;
        case BasisFamily::phip: f.O.add(idx.p, idx.q, c); break;
        case BasisFamily::u:
            f.E.add(idx.p, idx.q, c);
            f.E.add(idx.p, idx.p - idx.q, sp * c);
            break;
        case BasisFamily::v:
            f.E.add(idx.p, idx.q, c);
            f.E.add(idx.p, idx.p - idx.q, -sp * c);
            break;
        case BasisFamily::up:
            f.O.add(idx.p, idx.q, c);
            f.O.add(idx.p, idx.p - idx.q - 1, sp * c);
            break;
        case BasisFamily::vp:
            f.O.add(idx.p, idx.q, c);
            f.O.add(idx.p, idx.p - idx.q - 1, -sp * c);
            break;
    }
    return f;
}

// Coefficient of `f` against the (canonical, non-null) basis element, using
// the representation's raw tables (exact for fields expressed in the matching
// family). For u/v: coefficient = E_{p,q} picked from the canonical slot; the
// partner slot carries the reflected copy.
inline cplx basis_coefficient(const InflowField& f, const BoundaryBasisIndex& idx) {
    const double c = 1.0 / (pi * std::numbers::sqrt2);
    const double sp = idx.p % 2 ? -1.0 : 1.0;
    switch (idx.family) {
        case BasisFamily::phi: return f.E.at(idx.p, idx.q) / c;
        case BasisFamily::phip: return f.O.at(idx.p, idx.q) / c;
        case BasisFamily::u:
        case BasisFamily::v: {
            cplx e1 = f.E.at(idx.p, idx.q) / c;
            if (idx.p == 2 * idx.q) // self-paired: u = 2 phi, v = 0
                return idx.family == BasisFamily::u ? 0.5 * e1 : cplx{0.0};
            cplx e2 = sp * f.E.at(idx.p, idx.p - idx.q) / c;
            return idx.family == BasisFamily::u ? 0.5 * (e1 + e2) : 0.5 * (e1 - e2);
        }
        case BasisFamily::up:
        case BasisFamily::vp: {
            cplx o1 = f.O.at(idx.p, idx.q) / c;
            if (idx.p == 2 * idx.q + 1) // self-paired: u' = 0, v' = 2 phi'
                return idx.family == BasisFamily::vp ? 0.5 * o1 : cplx{0.0};
            cplx o2 = sp * f.O.at(idx.p, idx.p - idx.q - 1) / c;
            return idx.family == BasisFamily::up ? 0.5 * (o1 + o2) : 0.5 * (o1 - o2);
        }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Extension / restriction operators.
// ---------------------------------------------------------------------------

// A+-: L2(d+SM) -> L2(dSM), even/odd extension via the scattering relation.
// In the (E,O) representation the S*-even content extends to its own global
// expression and the S*-odd content picks up a sign(cos alpha) factor:
//   A+ u = E(u-part + v'-part) + sigma E(v-part + u'-part)
//   A- u = E(v-part + u'-part) + sigma E(u-part + v'-part)
inline BoundaryField a_extend(const InflowField& u, int sign) {
    InflowField up = u.parity_part(+1), um = u.parity_part(-1);
    auto to_torus = [&](const Coef2& E, const Coef2& O) {
        int P = std::max(E.P, O.P), N = std::max(2 * E.Q, 2 * O.Q + 1) + 1;
        Coef2 r(P, N);
        for (int p = -E.P; p <= E.P; ++p)
            for (int q = -E.Q; q <= E.Q; ++q) {
                cplx v = E.at(p, q);
                if (v != cplx{0.0}) r.at(p, 2 * q) += v;
            }
        for (int p = -O.P; p <= O.P; ++p)
            for (int q = -O.Q; q <= O.Q; ++q) {
                cplx v = O.at(p, q);
                if (v != cplx{0.0}) r.at(p, 2 * q + 1) += v;
            }
        return r;
    };
    Coef2 even_part, odd_part; // S*-even and S*-odd global expressions
    even_part = to_torus(up.E, um.O); // u-parts and v'-parts
    odd_part = to_torus(um.E, up.O);  // v-parts and u'-parts
    if (sign > 0) return BoundaryField{std::move(even_part), std::move(odd_part)};
    return BoundaryField{std::move(odd_part), std::move(even_part)};
}

// A+-*: L2(dSM) -> L2(d+SM), (A+-* w)(b,a) = w(b,a) +- w(S(b,a)) on d+SM.
inline InflowField a_restrict(const BoundaryField& w, int sign) {
    BoundaryField sw = w.scat_pullback();
    BoundaryField sum = w + cplx(double(sign)) * sw;
    return restrict_coeffs(sum);
}

// ---------------------------------------------------------------------------
// The operators P, C and their adjoints / pseudo-inverses, evaluated
// compositionally (exact index maps; the square-wave bookkeeping guarantees
// H_+- only ever acts on band-limited content along these compositions).
// ---------------------------------------------------------------------------

// P = A-* H A+ with parity selection: P+ = A-* H+ A+ on V+, P- = A-* H- A+
// on V-; `all` applies the split operator P = P+ (+) P-. The S_A-parity
// projection enforces each summand's mathematical domain.
inline InflowField op_P(const InflowField& u, HilbertParity par = HilbertParity::all) {
    auto apply = [&](HilbertParity hp, int dom) {
        return a_restrict(a_extend(u.parity_part(dom), +1).hilbert(hp), -1);
    };
    if (par == HilbertParity::even) return apply(HilbertParity::even, +1);
    if (par == HilbertParity::odd) return apply(HilbertParity::odd, -1);
    return apply(HilbertParity::even, +1) + apply(HilbertParity::odd, -1);
}

// C = (1/2) A-* H A-; C+ = (1/2) A-* H+ A- acts on V-, C- = (1/2) A-* H- A-
// acts on V+.
inline InflowField op_C(const InflowField& u, HilbertParity par) {
    int dom = (par == HilbertParity::even) ? -1 : +1;
    return 0.5 * a_restrict(a_extend(u.parity_part(dom), -1).hilbert(par), -1);
}

// P+-* = -A+* H+- A-: P+* maps V- to V+, P-* maps V+ to V-.
inline InflowField op_P_star(const InflowField& u, HilbertParity par) {
    int dom = (par == HilbertParity::even) ? -1 : +1;
    return cplx(-1.0) *
           a_restrict(a_extend(u.parity_part(dom), -1).hilbert(par), +1);
}

// A+* H A+ (diagnostic operator from the rho_a computation).
inline InflowField op_AHA(const InflowField& u, HilbertParity par = HilbertParity::all) {
    return a_restrict(a_extend(u, +1).hilbert(par), +1);
}

// P-dagger = (1/4) P-* restricted to the odd-frequency V+ content plus
// (1/4) P+* (Id - 12 C+^2) on the even-frequency V- content. P P-dagger is
// the orthogonal projection onto V_{+,0} (+) V_{-,perp}; content outside the
// (u', v) expansion is projected out, matching the operator's use on the
// ranges of I_0 and I_perp.
enum class PDaggerPart { plus, minus, all };

inline InflowField op_P_dagger(const InflowField& s, PDaggerPart part = PDaggerPart::all) {
    InflowField sp = s.parity_part(+1), sm = s.parity_part(-1);
    InflowField out;
    if (part != PDaggerPart::plus) { // P-^dagger on u'-content
        InflowField uprime{Coef2(sp.E.P, sp.E.Q), sp.O};
        out = out + 0.25 * op_P_star(uprime, HilbertParity::odd);
    }
    if (part != PDaggerPart::minus) { // P+^dagger on v-content
        InflowField vpart{sm.E, Coef2(sm.O.P, sm.O.Q)};
        InflowField c2 = op_C(op_C(vpart, HilbertParity::even), HilbertParity::even);
        InflowField inner = vpart + cplx(-12.0) * c2;
        out = out + 0.25 * op_P_star(inner, HilbertParity::even);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spectral oracle: the closed-form sgn-formula action on canonical basis
// elements. Used as ground truth against the compositional operators.
//   P+ u_{p,q}   = -i (sgn 2q - sgn 2(p-q)) v_{p,q}
//   P- v'_{p,q}  = -i (sgn(2q+1) - sgn(2p-2q-1)) u'_{p,q}
//   C+ v_{p,q}   = -(i/2) (sgn q + sgn(p-q)) v_{p,q}
//   P+* v_{p,q}  =  i (sgn 2q - sgn 2(p-q)) u_{p,q}
//   P-* u'_{p,q} =  i (sgn(2q+1) - sgn(2p-2q-1)) v'_{p,q}
//   A+*HA+ v'_{p,q} = -i (sgn(2q+1) + sgn(2p-2q-1)) v'_{p,q}
// The formulas are reflection-consistent, so they hold at every index; the
// oracle reports the action at the canonical representative.
// ---------------------------------------------------------------------------

enum class SpectralOp { Pplus, Pminus, Cplus, PplusStar, PminusStar, AHA };

struct OracleResult {
    cplx coeff;
    BoundaryBasisIndex out;
};

inline OracleResult spectral_oracle(const BoundaryBasisIndex& idx, SpectralOp which) {
    if (!is_canonical(idx))
        throw std::invalid_argument("spectral_oracle: index not canonical");
    const int p = idx.p, q = idx.q;
    auto expect = [&](BasisFamily f) {
        if (idx.family != f)
            throw std::invalid_argument("spectral_oracle: wrong family for operator");
    };
    switch (which) {
        case SpectralOp::Pplus:
            expect(BasisFamily::u);
            return {-I * double(sgn(2 * q) - sgn(2 * (p - q))),
                    {BasisFamily::v, p, q}};
        case SpectralOp::Pminus:
            expect(BasisFamily::vp);
            return {-I * double(sgn(2 * q + 1) - sgn(2 * p - 2 * q - 1)),
                    {BasisFamily::up, p, q}};
        case SpectralOp::Cplus:
            expect(BasisFamily::v);
            return {-0.5 * I * double(sgn(q) + sgn(p - q)), {BasisFamily::v, p, q}};
        case SpectralOp::PplusStar:
            expect(BasisFamily::v);
            return {I * double(sgn(2 * q) - sgn(2 * (p - q))), {BasisFamily::u, p, q}};
        case SpectralOp::PminusStar:
            expect(BasisFamily::up);
            return {I * double(sgn(2 * q + 1) - sgn(2 * p - 2 * q - 1)),
                    {BasisFamily::vp, p, q}};
        case SpectralOp::AHA:
            expect(BasisFamily::vp);
            return {-I * double(sgn(2 * q + 1) + sgn(2 * p - 2 * q - 1)),
                    {BasisFamily::vp, p, q}};
    }
    throw std::logic_error("spectral_oracle: unreachable");
}

// Compositional counterpart of the oracle, for table comparisons: applies the
// requested operator to the canonical basis element and extracts the
// coefficient of the expected output element.
inline cplx compositional_table_entry(const BoundaryBasisIndex& idx, SpectralOp which,
                                      int P, int Q) {
    InflowField in = make_basis(idx, P, Q);
    InflowField out;
    switch (which) {
        case SpectralOp::Pplus: out = op_P(in, HilbertParity::even); break;
        case SpectralOp::Pminus: out = op_P(in, HilbertParity::odd); break;
        case SpectralOp::Cplus: out = op_C(in, HilbertParity::even); break;
        case SpectralOp::PplusStar: out = op_P_star(in, HilbertParity::even); break;
        case SpectralOp::PminusStar: out = op_P_star(in, HilbertParity::odd); break;
        case SpectralOp::AHA: out = op_AHA(in, HilbertParity::odd); break;
    }
    return basis_coefficient(out, spectral_oracle(idx, which).out);
}

} // namespace disctomo
