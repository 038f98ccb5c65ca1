#pragma once
// Pullback machinery: certified pullbacks with explicit mediator tables,
// weak variants, images under an endofunctor, T-pullbacks (universality of
// every iterate over one functor orbit), terminals and n-fold pullbacks.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tdm/base.hpp"
#include "tdm/fincat.hpp"

namespace tdm {

// left: N -> M, right: E -> M. "Pullback of right along left".
struct Cospan {
    MorId left = kNone;
    MorId right = kNone;
};

// Corner layout:
//   P --top--> E
//   |          |
// leftv      rightv
//   v          v
//   N -bottom-> M
// Commutes when top;rightv = leftv;bottom. Read as a pullback candidate for
// the cospan (left = bottom, right = rightv) with apex P = dom(top) and
// projections (leftv to N, top to E).
struct Square {
    MorId top = kNone, bottom = kNone, leftv = kNone, rightv = kNone;
};

inline bool square_commutes(const FinCategory& c, const Square& s) {
    if (c.dom(s.top) != c.dom(s.leftv)) return false;
    if (c.cod(s.top) != c.dom(s.rightv)) return false;
    if (c.cod(s.leftv) != c.dom(s.bottom)) return false;
    if (c.cod(s.bottom) != c.cod(s.rightv)) return false;
    MorId a = c.comp[s.top][s.rightv], b = c.comp[s.leftv][s.bottom];
    return a != kNone && a == b;
}

inline Cospan cospan_of(const Square& s) { return Cospan{s.bottom, s.rightv}; }
inline ObjId apex_of(const FinCategory& c, const Square& s) {
    return c.dom(s.top);
}

// A cone over the cospan (left: N -> M, right: E -> M) is a pair
// (to_n: X -> N, to_e: X -> E) with to_n;left = to_e;right.
using Cone = std::pair<MorId, MorId>;

struct PullbackCertificate {
    Square square;
    // cone -> unique mediator m with m;leftv = to_n and m;top = to_e.
    std::map<Cone, MorId> mediators;
};

// Why a cone fails to certify: 0 or >= 2 mediators.
struct ConeFailure {
    Cone cone{kNone, kNone};
    unsigned mediator_count = 0;
};

struct PbVerdict {
    bool ok = false;
    std::optional<PullbackCertificate> cert;
    std::optional<ConeFailure> failure; // first failing cone in scan order
};

namespace detail {

// Scans every cone over the square's cospan; `weak` accepts >= 1 mediator
// (the certificate then stores the first mediator found, in scan order).
inline PbVerdict certify_square(const FinCategory& c, const Square& s,
                                bool weak) {
    PbVerdict v;
    if (!square_commutes(c, s)) {
        v.failure = ConeFailure{};
        return v;
    }
    ObjId p = apex_of(c, s);
    ObjId n = c.cod(s.leftv), e = c.cod(s.top);
    PullbackCertificate cert;
    cert.square = s;
    for (ObjId x = 0; x < c.n_obj(); ++x) {
        for (MorId u : c.homset(x, n))
            for (MorId w : c.homset(x, e)) {
                if (c.comp[u][s.bottom] != c.comp[w][s.rightv]) continue;
                MorId found = kNone;
                unsigned count = 0;
                for (MorId m : c.homset(x, p)) {
                    if (c.comp[m][s.leftv] == u && c.comp[m][s.top] == w) {
                        ++count;
                        if (found == kNone) found = m;
                    }
                }
                if (count == 0 || (count > 1 && !weak)) {
                    v.failure = ConeFailure{{u, w}, count};
                    return v;
                }
                cert.mediators[{u, w}] = found;
            }
    }
    v.ok = true;
    v.cert = std::move(cert);
    return v;
}

} // namespace detail

// Strict universality check for a commuting square. Non-commuting input is
// an input error for the public op; internal callers pre-check.
inline PbVerdict is_pullback_square(const FinCategory& c, const Square& s) {
    check_input(square_commutes(c, s), "is_pullback_square: square does not commute");
    return detail::certify_square(c, s, /*weak=*/false);
}

inline PbVerdict is_weak_pullback_square(const FinCategory& c, const Square& s) {
    check_input(square_commutes(c, s), "is_weak_pullback_square: square does not commute");
    return detail::certify_square(c, s, /*weak=*/true);
}

// All certifying squares over the cospan, in canonical scan order:
// ascending (apex, leftv, top). Used by closure checks that quantify over
// "any pullback" rather than the canonical one.
inline std::vector<PullbackCertificate>
all_pullback_certificates(const FinCategory& c, const Cospan& sp) {
    check_input(c.cod(sp.left) == c.cod(sp.right),
                "cospan legs have different codomains");
    std::vector<PullbackCertificate> out;
    ObjId n = c.dom(sp.left), e = c.dom(sp.right);
    for (ObjId p = 0; p < c.n_obj(); ++p)
        for (MorId a : c.homset(p, n))
            for (MorId b : c.homset(p, e)) {
                if (c.comp[a][sp.left] != c.comp[b][sp.right]) continue;
                if (c.comp[a][sp.left] == kNone) continue;
                Square s{b, sp.left, a, sp.right};
                auto v = detail::certify_square(c, s, false);
                if (v.ok) out.push_back(std::move(*v.cert));
            }
    return out;
}

// Canonical pullback: the first certifying square in ascending
// (apex name, left-projection name, top-projection name) order. The
// least-apex tie-break is part of the library contract; the projection order
// extends it deterministically when several pairs certify at the same apex.
inline std::optional<PullbackCertificate>
compute_pullback(const FinCategory& c, const Cospan& sp) {
    check_input(c.cod(sp.left) == c.cod(sp.right),
                "cospan legs have different codomains");
    ObjId n = c.dom(sp.left), e = c.dom(sp.right);
    for (ObjId p = 0; p < c.n_obj(); ++p)
        for (MorId a : c.homset(p, n))
            for (MorId b : c.homset(p, e)) {
                if (c.comp[a][sp.left] != c.comp[b][sp.right]) continue;
                if (c.comp[a][sp.left] == kNone) continue;
                Square s{b, sp.left, a, sp.right};
                auto v = detail::certify_square(c, s, false);
                if (v.ok) return std::move(v.cert);
            }
    return std::nullopt;
}

// Looks up the unique mediator for a cone; non-cones are input errors.
inline MorId mediating_morphism(const FinCategory& c,
                                const PullbackCertificate& cert,
                                MorId to_n, MorId to_e) {
    auto it = cert.mediators.find({to_n, to_e});
    check_input(it != cert.mediators.end(),
                cat("mediating_morphism: (", to_n == kNone ? "?" : c.mname(to_n),
                    ", ", to_e == kNone ? "?" : c.mname(to_e),
                    ") is not a cone over the certified square"));
    return it->second;
}

inline Square apply_functor_to_square(const Functor& F, const Square& s) {
    return Square{F.mor[s.top], F.mor[s.bottom], F.mor[s.leftv],
                  F.mor[s.rightv]};
}

struct TPullbackCertificate {
    PullbackCertificate base;                   // k = 0
    std::vector<PullbackCertificate> iterates;  // k = 1 .. orbit bound - 1
};

struct TPbVerdict {
    bool ok = false;
    std::optional<TPullbackCertificate> cert;
    unsigned failing_k = 0; // first k whose iterate square fails
    std::optional<ConeFailure> failure;
};

// T-pullback: T^k(square) is a strict pullback for every k in one full orbit
// of T (k = 0 .. preperiod+period-1); further iterates repeat tables already
// checked. `weak` relaxes every level to weak universality.
inline TPbVerdict is_T_pullback_impl(const FinCategory& c, const Functor& T,
                                     const Square& s, bool weak) {
    check_input(square_commutes(c, s), "is_T_pullback: square does not commute");
    FunctorOrbit orb = functor_orbit(c, T);
    TPbVerdict out;
    TPullbackCertificate cert;
    Functor it = identity_functor(c);
    for (unsigned k = 0; k < orb.bound(); ++k) {
        Square sk = apply_functor_to_square(it, s);
        auto v = detail::certify_square(c, sk, weak);
        if (!v.ok) {
            out.failing_k = k;
            out.failure = v.failure;
            return out;
        }
        if (k == 0)
            cert.base = std::move(*v.cert);
        else
            cert.iterates.push_back(std::move(*v.cert));
        it = compose_endofunctors(it, T);
    }
    out.ok = true;
    out.cert = std::move(cert);
    return out;
}

inline TPbVerdict is_T_pullback(const FinCategory& c, const Functor& T,
                                const Square& s) {
    return is_T_pullback_impl(c, T, s, false);
}
inline TPbVerdict is_weak_T_pullback(const FinCategory& c, const Functor& T,
                                     const Square& s) {
    return is_T_pullback_impl(c, T, s, true);
}

// Terminal object by universality scan: exactly one morphism from every
// object. Ties cannot happen up to identity tables; if several isomorphic
// terminals exist the least-named one is returned.
inline std::optional<ObjId> compute_terminal(const FinCategory& c) {
    for (ObjId t = 0; t < c.n_obj(); ++t) {
        bool ok = true;
        for (ObjId x = 0; x < c.n_obj() && ok; ++x)
            ok = c.homset(x, t).size() == 1;
        if (ok) return t;
    }
    return std::nullopt;
}

// Wide pullback of n copies of p: E -> M, built as an iterated chain of
// binary canonical pullbacks, with an n-leg mediator table on top.
struct NfoldCertificate {
    ObjId apex = kNone;
    std::vector<MorId> projections;            // n legs apex -> E
    std::vector<PullbackCertificate> chain;    // n-1 binary certificates
    std::map<std::vector<MorId>, MorId> mediators; // n-leg cones -> mediator
};

inline std::optional<NfoldCertificate>
compute_nfold_pullback(const FinCategory& c, MorId p, unsigned n) {
    check_input(n >= 1, "compute_nfold_pullback: n must be >= 1");
    NfoldCertificate out;
    if (n == 1) {
        out.apex = c.dom(p);
        out.projections = {c.id(c.dom(p))};
        for (ObjId x = 0; x < c.n_obj(); ++x)
            for (MorId u : c.homset(x, c.dom(p)))
                out.mediators[{u}] = u;
        return out;
    }
    // d_k: apex_k -> M is the diagonal composite of the k-fold stage.
    ObjId apex = c.dom(p);
    std::vector<MorId> projs{c.id(apex)};
    MorId diag = p;
    for (unsigned k = 2; k <= n; ++k) {
        auto cert = compute_pullback(c, Cospan{diag, p});
        if (!cert) return std::nullopt;
        const Square& s = cert->square;
        ObjId napex = apex_of(c, s);
        std::vector<MorId> nprojs;
        for (MorId pr : projs) nprojs.push_back(c.comp[s.leftv][pr]);
        nprojs.push_back(s.top);
        apex = napex;
        projs = std::move(nprojs);
        diag = c.comp[s.leftv][diag];
        out.chain.push_back(std::move(*cert));
    }
    out.apex = apex;
    out.projections = projs;
    // n-leg cone table: legs u_1..u_n: X -> E with equal composites u_i;p.
    std::vector<std::vector<MorId>> stack;
    for (ObjId x = 0; x < c.n_obj(); ++x) {
        const auto& hs = c.homset(x, c.dom(p));
        std::vector<unsigned> idx(n, 0);
        if (hs.empty()) continue;
        while (true) {
            std::vector<MorId> legs(n);
            for (unsigned i = 0; i < n; ++i) legs[i] = hs[idx[i]];
            bool cone = true;
            for (unsigned i = 1; i < n && cone; ++i)
                cone = c.comp[legs[i]][p] == c.comp[legs[0]][p];
            if (cone) {
                // Fold through the chain of binary mediators.
                MorId m = legs[0];
                for (unsigned i = 1; i < n; ++i) {
                    const auto& bc = out.chain[i - 1];
                    auto it = bc.mediators.find({m, legs[i]});
                    check_construction(it != bc.mediators.end(),
                                       "n-fold pullback: chain mediator missing");
                    m = it->second;
                }
                out.mediators[legs] = m;
            }
            unsigned i = 0;
            for (; i < n; ++i) {
                if (++idx[i] < hs.size()) break;
                idx[i] = 0;
            }
            if (i == n) break;
        }
    }
    return out;
}

} // namespace tdm
