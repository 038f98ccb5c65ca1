#pragma once
// Finite commutative algebras over a prime field: dual-numbers tangent
// functor, pushouts by tensor product over a base (kernel computation over
// F_p), certified mediators, and depth-bounded preservation of pushouts by
// the tangent functor. Standalone example generator; desk-scale by design.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdm/base.hpp"

namespace tdm {

struct FiniteAlgebra {
    unsigned prime = 2;
    unsigned dim = 0;
    std::vector<std::string> basis;
    std::vector<unsigned> unit; // coordinates of 1
    // mul[i][j] = coordinates of basis_i * basis_j
    std::vector<std::vector<std::vector<unsigned>>> mul;
};

struct AlgebraHom {
    // mat[i] = coordinates in the target of the image of source basis_i
    std::vector<std::vector<unsigned>> mat;
};

namespace fp {

inline std::vector<unsigned> zero(unsigned d) {
    return std::vector<unsigned>(d, 0);
}

inline void axpy(std::vector<unsigned>& acc, unsigned scalar,
                 const std::vector<unsigned>& v, unsigned p) {
    for (size_t i = 0; i < acc.size(); ++i)
        acc[i] = (acc[i] + scalar * v[i]) % p;
}

// Row echelon form in place; returns pivot column per row kept.
inline std::vector<size_t> rref(std::vector<std::vector<unsigned>>& rows,
                                unsigned p) {
    std::vector<size_t> pivots;
    size_t ncols = rows.empty() ? 0 : rows[0].size();
    size_t r = 0;
    for (size_t col = 0; col < ncols && r < rows.size(); ++col) {
        size_t sel = r;
        while (sel < rows.size() && rows[sel][col] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        // normalize: find inverse of rows[r][col] mod p
        unsigned inv = 1;
        for (unsigned t = 1; t < p; ++t)
            if (rows[r][col] * t % p == 1) inv = t;
        for (auto& x : rows[r]) x = x * inv % p;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][col] == 0) continue;
            unsigned s = p - rows[i][col];
            axpy(rows[i], s, rows[r], p);
        }
        pivots.push_back(col);
        ++r;
    }
    rows.resize(r);
    return pivots;
}

inline unsigned rank(std::vector<std::vector<unsigned>> rows, unsigned p) {
    return unsigned(rref(rows, p).size());
}

} // namespace fp

inline std::vector<unsigned> alg_mul(const FiniteAlgebra& a,
                                     const std::vector<unsigned>& x,
                                     const std::vector<unsigned>& y) {
    auto out = fp::zero(a.dim);
    for (unsigned i = 0; i < a.dim; ++i) {
        if (x[i] == 0) continue;
        for (unsigned j = 0; j < a.dim; ++j) {
            if (y[j] == 0) continue;
            fp::axpy(out, x[i] * y[j] % a.prime, a.mul[i][j], a.prime);
        }
    }
    return out;
}

inline std::vector<unsigned> hom_apply(const FiniteAlgebra& tgt,
                                       const AlgebraHom& h,
                                       const std::vector<unsigned>& x,
                                       unsigned p) {
    auto out = fp::zero(tgt.dim);
    for (size_t i = 0; i < h.mat.size(); ++i)
        if (x[i]) fp::axpy(out, x[i], h.mat[i], p);
    return out;
}

struct AlgCheck {
    bool ok = true;
    std::string detail;
};

inline AlgCheck validate_algebra(const FiniteAlgebra& a) {
    auto fail = [](std::string d) { return AlgCheck{false, std::move(d)}; };
    if (a.prime < 2) return fail("prime must be at least 2");
    for (unsigned t = 2; t < a.prime; ++t)
        if (a.prime % t == 0) return fail("modulus is not prime");
    if (a.dim == 0) return fail("dimension must be positive");
    if (a.basis.size() != a.dim || a.unit.size() != a.dim ||
        a.mul.size() != a.dim)
        return fail("table sizes do not match dimension");
    for (const auto& row : a.mul) {
        if (row.size() != a.dim) return fail("multiplication table ragged");
        for (const auto& v : row) {
            if (v.size() != a.dim) return fail("multiplication table ragged");
            for (unsigned x : v)
                if (x >= a.prime) return fail("coefficient out of range");
        }
    }
    for (unsigned x : a.unit)
        if (x >= a.prime) return fail("unit coefficient out of range");
    auto e = [&](unsigned i) {
        auto v = fp::zero(a.dim);
        v[i] = 1;
        return v;
    };
    for (unsigned i = 0; i < a.dim; ++i) {
        if (alg_mul(a, a.unit, e(i)) != e(i) ||
            alg_mul(a, e(i), a.unit) != e(i))
            return fail(cat("unit law fails at basis ", a.basis[i]));
        for (unsigned j = 0; j < a.dim; ++j) {
            if (a.mul[i][j] != a.mul[j][i])
                return fail(cat("commutativity fails at (", a.basis[i], ", ",
                                a.basis[j], ")"));
            for (unsigned k = 0; k < a.dim; ++k)
                if (alg_mul(a, a.mul[i][j], e(k)) !=
                    alg_mul(a, e(i), a.mul[j][k]))
                    return fail(cat("associativity fails at (", a.basis[i],
                                    ", ", a.basis[j], ", ", a.basis[k], ")"));
        }
    }
    return {};
}

inline AlgCheck validate_hom(const FiniteAlgebra& src, const FiniteAlgebra& tgt,
                             const AlgebraHom& h) {
    auto fail = [](std::string d) { return AlgCheck{false, std::move(d)}; };
    if (src.prime != tgt.prime) return fail("characteristic mismatch");
    if (h.mat.size() != src.dim) return fail("matrix row count mismatch");
    for (const auto& r : h.mat) {
        if (r.size() != tgt.dim) return fail("matrix column count mismatch");
        for (unsigned x : r)
            if (x >= src.prime) return fail("entry out of range");
    }
    unsigned p = src.prime;
    if (hom_apply(tgt, h, src.unit, p) != tgt.unit)
        return fail("unit not preserved");
    auto e = [&](unsigned i) {
        auto v = fp::zero(src.dim);
        v[i] = 1;
        return v;
    };
    for (unsigned i = 0; i < src.dim; ++i)
        for (unsigned j = 0; j < src.dim; ++j)
            if (hom_apply(tgt, h, src.mul[i][j], p) !=
                alg_mul(tgt, h.mat[i], h.mat[j]))
                return fail(cat("multiplication not preserved at (",
                                src.basis[i], ", ", src.basis[j], ")"));
    return {};
}

inline AlgebraHom identity_hom(const FiniteAlgebra& a) {
    AlgebraHom h;
    h.mat.assign(a.dim, fp::zero(a.dim));
    for (unsigned i = 0; i < a.dim; ++i) h.mat[i][i] = 1;
    return h;
}

inline AlgebraHom compose_hom(const FiniteAlgebra& mid,
                              const FiniteAlgebra& tgt, const AlgebraHom& f,
                              const AlgebraHom& g) {
    AlgebraHom h;
    h.mat.resize(f.mat.size());
    for (size_t i = 0; i < f.mat.size(); ++i)
        h.mat[i] = hom_apply(tgt, g, f.mat[i], tgt.prime);
    (void)mid;
    return h;
}

// ---------------------------------------------------------------------
// Dual numbers: T(A) = A[eps], eps^2 = 0.

inline FiniteAlgebra dual_numbers(const FiniteAlgebra& a) {
    FiniteAlgebra t;
    t.prime = a.prime;
    t.dim = 2 * a.dim;
    t.basis.resize(t.dim);
    for (unsigned i = 0; i < a.dim; ++i) {
        t.basis[i] = a.basis[i];
        t.basis[a.dim + i] = cat(a.basis[i], ".eps");
    }
    t.unit = fp::zero(t.dim);
    for (unsigned i = 0; i < a.dim; ++i) t.unit[i] = a.unit[i];
    auto embed = [&](const std::vector<unsigned>& v, bool eps) {
        auto out = fp::zero(t.dim);
        for (unsigned i = 0; i < a.dim; ++i) out[(eps ? a.dim : 0) + i] = v[i];
        return out;
    };
    t.mul.assign(t.dim, std::vector<std::vector<unsigned>>(
                            t.dim, fp::zero(t.dim)));
    for (unsigned i = 0; i < a.dim; ++i)
        for (unsigned j = 0; j < a.dim; ++j) {
            t.mul[i][j] = embed(a.mul[i][j], false);
            t.mul[i][a.dim + j] = embed(a.mul[i][j], true);
            t.mul[a.dim + i][j] = embed(a.mul[i][j], true);
            // eps^2 = 0: the (eps, eps) block stays zero
        }
    return t;
}

inline AlgebraHom dual_numbers_hom(const FiniteAlgebra& src,
                                   const FiniteAlgebra& tgt,
                                   const AlgebraHom& f) {
    AlgebraHom h;
    h.mat.assign(2 * src.dim, fp::zero(2 * tgt.dim));
    for (unsigned i = 0; i < src.dim; ++i)
        for (unsigned j = 0; j < tgt.dim; ++j) {
            h.mat[i][j] = f.mat[i][j];
            h.mat[src.dim + i][tgt.dim + j] = f.mat[i][j];
        }
    return h;
}

// The tangent projection, zero and their friends as algebra homs: on A[eps],
// p: A -> A[eps] is the unit inclusion and z: A[eps] -> A kills eps. (In the
// opposite category these become TA -> A and A -> TA respectively.)
inline AlgebraHom dual_unit_inclusion(const FiniteAlgebra& a) {
    AlgebraHom h;
    h.mat.assign(a.dim, fp::zero(2 * a.dim));
    for (unsigned i = 0; i < a.dim; ++i) h.mat[i][i] = 1;
    return h;
}

inline AlgebraHom dual_augmentation(const FiniteAlgebra& a) {
    AlgebraHom h;
    h.mat.assign(2 * a.dim, fp::zero(a.dim));
    for (unsigned i = 0; i < a.dim; ++i) h.mat[i][i] = 1;
    return h;
}

// ---------------------------------------------------------------------
// Pushout N (x)_M E as a quotient of the plain tensor product.

struct PushoutResult {
    FiniteAlgebra tensor;
    AlgebraHom in_n, in_e;
    // ambient (i, j) pair each quotient basis element descends from
    std::vector<std::pair<unsigned, unsigned>> basis_src;
    bool cocone_commutes = false;
    bool spanning_ok = false; // pure tensors span: mediators are unique
    struct TestCase {
        bool factors = false; // mediator exists, is a hom, commutes
    };
    std::vector<TestCase> tests;
    bool tests_ok = true;
    // internal: reduced relation rows + pivot columns, for projections
    std::vector<std::vector<unsigned>> rel_rows;
    std::vector<size_t> rel_pivots;
};

inline PushoutResult tensor_over(
    const FiniteAlgebra& m, const FiniteAlgebra& n, const FiniteAlgebra& e,
    const AlgebraHom& f, const AlgebraHom& g,
    const std::vector<std::tuple<const FiniteAlgebra*, AlgebraHom, AlgebraHom>>&
        test_cocones = {}) {
    check_input(validate_algebra(m).ok && validate_algebra(n).ok &&
                    validate_algebra(e).ok,
                "tensor_over: invalid algebra");
    check_input(validate_hom(m, n, f).ok, "tensor_over: invalid hom f");
    check_input(validate_hom(m, e, g).ok, "tensor_over: invalid hom g");
    unsigned p = m.prime;
    unsigned dn = n.dim, de = e.dim, amb = dn * de;
    auto idx = [&](unsigned i, unsigned j) { return size_t(i) * de + j; };

    // ambient product of two pure tensors, as a coordinate vector
    auto pure = [&](const std::vector<unsigned>& x,
                    const std::vector<unsigned>& y) {
        auto out = fp::zero(amb);
        for (unsigned i = 0; i < dn; ++i)
            for (unsigned j = 0; j < de; ++j)
                out[idx(i, j)] = x[i] * y[j] % p;
        return out;
    };
    auto basis_n = [&](unsigned i) {
        auto v = fp::zero(dn);
        v[i] = 1;
        return v;
    };
    auto basis_e = [&](unsigned j) {
        auto v = fp::zero(de);
        v[j] = 1;
        return v;
    };

    // relations f(m_t) n_i (x) e_j - n_i (x) g(m_t) e_j; this family is
    // closed under multiplication by pure tensors, so its span is an ideal
    std::vector<std::vector<unsigned>> rel;
    for (unsigned t = 0; t < m.dim; ++t)
        for (unsigned i = 0; i < dn; ++i)
            for (unsigned j = 0; j < de; ++j) {
                auto row = fp::zero(amb);
                auto u = alg_mul(n, f.mat[t], basis_n(i));
                for (unsigned a = 0; a < dn; ++a)
                    row[idx(a, j)] = (row[idx(a, j)] + u[a]) % p;
                auto v = alg_mul(e, g.mat[t], basis_e(j));
                for (unsigned b = 0; b < de; ++b)
                    row[idx(i, b)] = (row[idx(i, b)] + p - v[b] % p) % p;
                rel.push_back(std::move(row));
            }
    PushoutResult r;
    r.rel_rows = std::move(rel);
    r.rel_pivots = fp::rref(r.rel_rows, p);

    std::vector<bool> is_pivot(amb, false);
    for (size_t c : r.rel_pivots) is_pivot[c] = true;
    for (unsigned i = 0; i < dn; ++i)
        for (unsigned j = 0; j < de; ++j)
            if (!is_pivot[idx(i, j)]) r.basis_src.emplace_back(i, j);

    auto project = [&](std::vector<unsigned> v) {
        for (size_t row = 0; row < r.rel_rows.size(); ++row) {
            unsigned cval = v[r.rel_pivots[row]];
            if (cval) fp::axpy(v, p - cval, r.rel_rows[row], p);
        }
        std::vector<unsigned> out(r.basis_src.size(), 0);
        for (size_t k = 0; k < r.basis_src.size(); ++k)
            out[k] = v[idx(r.basis_src[k].first, r.basis_src[k].second)];
        return out;
    };

    FiniteAlgebra& q = r.tensor;
    q.prime = p;
    q.dim = unsigned(r.basis_src.size());
    check_construction(q.dim > 0, "tensor_over: quotient collapsed to zero");
    for (auto [i, j] : r.basis_src)
        q.basis.push_back(cat(n.basis[i], "*", e.basis[j]));
    q.unit = project(pure(n.unit, e.unit));
    q.mul.assign(q.dim, std::vector<std::vector<unsigned>>(q.dim));
    for (unsigned a = 0; a < q.dim; ++a)
        for (unsigned b = 0; b < q.dim; ++b) {
            auto [i1, j1] = r.basis_src[a];
            auto [i2, j2] = r.basis_src[b];
            auto prod = fp::zero(amb);
            const auto& nn = n.mul[i1][i2];
            const auto& ee = e.mul[j1][j2];
            for (unsigned i = 0; i < dn; ++i)
                for (unsigned j = 0; j < de; ++j)
                    prod[idx(i, j)] = nn[i] * ee[j] % p;
            q.mul[a][b] = project(prod);
        }
    {
        auto vr = validate_algebra(q);
        check_construction(vr.ok,
                           cat("tensor_over: quotient not an algebra: ",
                               vr.detail));
    }

    r.in_n.mat.resize(dn);
    for (unsigned i = 0; i < dn; ++i)
        r.in_n.mat[i] = project(pure(basis_n(i), e.unit));
    r.in_e.mat.resize(de);
    for (unsigned j = 0; j < de; ++j)
        r.in_e.mat[j] = project(pure(n.unit, basis_e(j)));
    check_construction(validate_hom(n, q, r.in_n).ok &&
                           validate_hom(e, q, r.in_e).ok,
                       "tensor_over: cocone legs are not homs");
    r.cocone_commutes =
        compose_hom(n, q, f, r.in_n).mat == compose_hom(e, q, g, r.in_e).mat;
    check_construction(r.cocone_commutes, "tensor_over: cocone square broken");

    // pure tensors span the quotient, which pins mediators uniquely
    {
        std::vector<std::vector<unsigned>> span;
        for (unsigned i = 0; i < dn; ++i)
            for (unsigned j = 0; j < de; ++j)
                span.push_back(
                    alg_mul(q, r.in_n.mat[i], r.in_e.mat[j]));
        r.spanning_ok = fp::rank(span, p) == q.dim;
    }

    for (const auto& [xp, phi, psi] : test_cocones) {
        const FiniteAlgebra& x = *xp;
        PushoutResult::TestCase tc;
        bool cone_ok = validate_hom(n, x, phi).ok && validate_hom(e, x, psi).ok &&
                       compose_hom(n, x, f, phi).mat ==
                           compose_hom(e, x, g, psi).mat;
        if (cone_ok) {
            AlgebraHom h;
            h.mat.resize(q.dim);
            for (unsigned k = 0; k < q.dim; ++k) {
                auto [i, j] = r.basis_src[k];
                h.mat[k] = alg_mul(x, phi.mat[i], psi.mat[j]);
            }
            // factorization check subsumes well-definedness of h
            bool full = true;
            for (unsigned i = 0; i < dn && full; ++i)
                for (unsigned j = 0; j < de && full; ++j)
                    full = hom_apply(x, h,
                                     alg_mul(q, r.in_n.mat[i], r.in_e.mat[j]),
                                     p) == alg_mul(x, phi.mat[i], psi.mat[j]);
            tc.factors = full && validate_hom(q, x, h).ok &&
                         compose_hom(n, x, r.in_n, h).mat == phi.mat &&
                         compose_hom(e, x, r.in_e, h).mat == psi.mat;
        }
        r.tests_ok = r.tests_ok && tc.factors;
        r.tests.push_back(tc);
    }
    return r;
}

// ---------------------------------------------------------------------
// Depth-bounded preservation of pushouts under dual numbers.

struct PreservationVerdict {
    bool ok = true;
    struct Level {
        unsigned k = 0;
        unsigned dim_tensor_of_duals = 0; // dim of T^k N (x)_{T^k M} T^k E
        unsigned dim_dual_of_tensor = 0;  // dim of T^k (N (x)_M E)
        bool mediator_is_hom = false;
        bool bijective = false;
    };
    std::vector<Level> levels;
    std::string detail;
};

inline PreservationVerdict check_T_preserves_pushout(
    const FiniteAlgebra& m, const FiniteAlgebra& n, const FiniteAlgebra& e,
    const AlgebraHom& f, const AlgebraHom& g, unsigned depth) {
    PushoutResult base = tensor_over(m, n, e, f, g);
    PreservationVerdict verdict;

    FiniteAlgebra mk = m, nk = n, ek = e, qk = base.tensor;
    AlgebraHom fk = f, gk = g, ink = base.in_n, iek = base.in_e;
    unsigned p = m.prime;
    for (unsigned k = 1; k <= depth; ++k) {
        FiniteAlgebra m2 = dual_numbers(mk), n2 = dual_numbers(nk),
                      e2 = dual_numbers(ek), q2 = dual_numbers(qk);
        AlgebraHom f2 = dual_numbers_hom(mk, nk, fk);
        AlgebraHom g2 = dual_numbers_hom(mk, ek, gk);
        AlgebraHom in2 = dual_numbers_hom(nk, qk, ink);
        AlgebraHom ie2 = dual_numbers_hom(ek, qk, iek);
        mk = std::move(m2);
        nk = std::move(n2);
        ek = std::move(e2);
        qk = std::move(q2);
        fk = std::move(f2);
        gk = std::move(g2);
        ink = std::move(in2);
        iek = std::move(ie2);

        PushoutResult pk = tensor_over(mk, nk, ek, fk, gk);
        PreservationVerdict::Level lvl;
        lvl.k = k;
        lvl.dim_tensor_of_duals = pk.tensor.dim;
        lvl.dim_dual_of_tensor = qk.dim;
        // canonical comparison: mediator out of the freshly built pushout
        // for the cocone (T^k in_N, T^k in_E) into T^k of the base pushout
        AlgebraHom u;
        u.mat.resize(pk.tensor.dim);
        for (unsigned t = 0; t < pk.tensor.dim; ++t) {
            auto [i, j] = pk.basis_src[t];
            u.mat[t] = alg_mul(qk, ink.mat[i], iek.mat[j]);
        }
        lvl.mediator_is_hom =
            validate_hom(pk.tensor, qk, u).ok &&
            compose_hom(nk, qk, pk.in_n, u).mat == ink.mat &&
            compose_hom(ek, qk, pk.in_e, u).mat == iek.mat;
        lvl.bijective = lvl.mediator_is_hom &&
                        pk.tensor.dim == qk.dim &&
                        fp::rank(u.mat, p) == qk.dim;
        if (!lvl.bijective) {
            verdict.ok = false;
            verdict.detail = cat("comparison fails at depth ", k);
        }
        verdict.levels.push_back(lvl);
    }
    return verdict;
}

// Exhaustive hom enumeration (desk scale: p^(dim_src * dim_tgt) candidates).
inline std::vector<AlgebraHom> enumerate_homs(const FiniteAlgebra& src,
                                              const FiniteAlgebra& tgt) {
    std::vector<AlgebraHom> out;
    unsigned p = src.prime;
    size_t cells = size_t(src.dim) * tgt.dim;
    check_input(cells <= 24, "enumerate_homs: search space too large");
    size_t total = 1;
    for (size_t i = 0; i < cells; ++i) total *= p;
    for (size_t code = 0; code < total; ++code) {
        AlgebraHom h;
        h.mat.assign(src.dim, fp::zero(tgt.dim));
        size_t c = code;
        for (unsigned i = 0; i < src.dim; ++i)
            for (unsigned j = 0; j < tgt.dim; ++j) {
                h.mat[i][j] = unsigned(c % p);
                c /= p;
            }
        if (validate_hom(src, tgt, h).ok) out.push_back(std::move(h));
    }
    return out;
}

} // namespace tdm
