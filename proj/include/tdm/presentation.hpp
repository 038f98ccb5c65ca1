#pragma once
// Line-oriented presentation files: a category block (objects, morphisms,
// identities, composition entries), an optional tangent block, and optional
// system / algebra / algebra-hom blocks. The parser yields validated
// structures or positioned diagnostics; the serializer emits the canonical
// spelling (sorted cells, explicit witnesses), so parse and serialize round
// trip byte-stably.

#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tdm/base.hpp"
#include "tdm/fincat.hpp"
#include "tdm/limits.hpp"
#include "tdm/ringcat.hpp"
#include "tdm/tangent.hpp"

namespace tdm {

struct PresentationFile {
    FinCategory cat;
    bool has_category = false; // a category block was present (may be empty)
    std::optional<TangentStructure> ts;
    std::map<std::string, std::vector<MorId>> systems; // sorted members
    struct NamedAlgebra {
        std::string name;
        FiniteAlgebra alg;
    };
    std::vector<NamedAlgebra> algebras; // sorted by name
    struct NamedHom {
        std::string name, src, tgt;
        AlgebraHom hom;
    };
    std::vector<NamedHom> alghoms; // sorted by name

    const FiniteAlgebra* algebra(const std::string& n) const {
        for (const auto& a : algebras)
            if (a.name == n) return &a.alg;
        return nullptr;
    }
};

namespace detail {

[[noreturn]] inline void diag(unsigned line, unsigned col,
                              const std::string& msg) {
    throw input_error(cat("line ", line, ", col ", col, ": ", msg));
}

struct Token {
    std::string text;
    unsigned col = 0; // 1-based
};

inline bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool ident_char(char c) {
    return ident_start(c) || (c >= '0' && c <= '9');
}

inline std::vector<Token> lex_line(const std::string& raw, unsigned line) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < raw.size()) {
        char c = raw[i];
        if (c == '#') break;
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        unsigned col = unsigned(i) + 1;
        if (ident_start(c)) {
            size_t j = i;
            while (j < raw.size() && ident_char(raw[j])) ++j;
            out.push_back({raw.substr(i, j - i), col});
            i = j;
        } else if (c >= '0' && c <= '9') {
            size_t j = i;
            while (j < raw.size() && raw[j] >= '0' && raw[j] <= '9') ++j;
            out.push_back({raw.substr(i, j - i), col});
            i = j;
        } else if (c == '-' && i + 1 < raw.size() && raw[i + 1] == '>') {
            out.push_back({"->", col});
            i += 2;
        } else if (c == ':' || c == '=' || c == '(' || c == ')' || c == ',') {
            out.push_back({std::string(1, c), col});
            ++i;
        } else {
            diag(line, col, cat("unexpected character '", std::string(1, c),
                                "'"));
        }
    }
    return out;
}

struct LineCursor {
    const std::vector<Token>* toks = nullptr;
    unsigned line = 0;
    size_t pos = 0;

    bool done() const { return pos >= toks->size(); }
    const Token& peek() const { return (*toks)[pos]; }
    Token take(const char* what) {
        if (done())
            diag(line, unsigned((*toks).empty() ? 1 : toks->back().col + 1),
                 cat("expected ", what));
        return (*toks)[pos++];
    }
    Token expect(const std::string& text) {
        Token t = take(cat("'", text, "'").c_str());
        if (t.text != text)
            diag(line, t.col,
                 cat("expected '", text, "', found '", t.text, "'"));
        return t;
    }
    Token ident(const char* what) {
        Token t = take(what);
        if (!ident_start(t.text[0]))
            diag(line, t.col, cat("expected ", what, ", found '", t.text, "'"));
        return t;
    }
    unsigned number(const char* what) {
        Token t = take(what);
        for (char c : t.text)
            if (c < '0' || c > '9')
                diag(line, t.col,
                     cat("expected ", what, ", found '", t.text, "'"));
        return unsigned(std::stoul(t.text));
    }
    void end_of_line() {
        if (!done())
            diag(line, peek().col, cat("unexpected token '", peek().text, "'"));
    }
};

} // namespace detail

inline PresentationFile parse_text(const std::string& text) {
    using detail::diag;
    using detail::LineCursor;
    using detail::Token;

    // pre-lex all lines
    std::vector<std::vector<Token>> lines;
    {
        std::istringstream in(text);
        std::string raw;
        unsigned ln = 0;
        while (std::getline(in, raw)) {
            ++ln;
            lines.push_back(detail::lex_line(raw, ln));
        }
    }
    auto cursor = [&](size_t i) {
        LineCursor c;
        c.toks = &lines[i];
        c.line = unsigned(i) + 1;
        return c;
    };

    PresentationFile pf;
    bool have_category = false, have_tangent = false;

    struct Pos {
        unsigned line = 0, col = 0;
    };
    std::map<std::string, Pos> cells; // shared object/morphism namespace
    std::vector<std::string> obj_names;
    struct RawMor {
        std::string name, dom, cod;
        Pos pos;
    };
    std::vector<RawMor> raw_mors;
    std::map<std::string, std::pair<std::string, Pos>> id_decl; // obj -> mor
    struct RawThen {
        std::string f, g, h;
        Pos pos;
    };
    std::vector<RawThen> raw_thens;

    // tangent raw data
    unsigned bound = 2;
    std::map<std::string, std::string> t_obj, t_mor;
    std::array<std::map<std::string, std::string>, 6> comps; // p z s l c n
    const char* comp_kw[6] = {"p", "z", "s", "l", "c", "n"};
    struct RawWitness {
        bool auto_search = true;
        std::string apex;
        std::vector<std::string> projs;
        Pos pos;
    };
    std::map<std::pair<std::string, unsigned>, RawWitness> raw_witness;
    Pos tangent_pos;
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, Pos>>>>
        raw_systems;

    size_t i = 0;
    auto skip_blank = [&]() {
        while (i < lines.size() && lines[i].empty()) ++i;
    };

    skip_blank();
    while (i < lines.size()) {
        LineCursor hc = cursor(i);
        Token head = hc.ident("block keyword");

        if (head.text == "category") {
            if (have_category)
                diag(hc.line, head.col, "duplicate category block");
            have_category = true;
            hc.end_of_line();
            ++i;
            for (;; ++i) {
                skip_blank();
                if (i >= lines.size())
                    diag(unsigned(lines.size()), 1,
                         "unexpected end of file inside category block");
                LineCursor lc = cursor(i);
                Token kw = lc.ident("category entry");
                if (kw.text == "end") {
                    lc.end_of_line();
                    ++i;
                    break;
                }
                if (kw.text == "object") {
                    Token n = lc.ident("object name");
                    lc.end_of_line();
                    auto it = cells.find(n.text);
                    if (it != cells.end())
                        diag(lc.line, n.col,
                             cat("duplicate name '", n.text,
                                 "' (first declared at line ",
                                 it->second.line, ")"));
                    cells[n.text] = {lc.line, n.col};
                    obj_names.push_back(n.text);
                } else if (kw.text == "mor") {
                    Token n = lc.ident("morphism name");
                    lc.expect(":");
                    Token d = lc.ident("object name");
                    lc.expect("->");
                    Token c = lc.ident("object name");
                    lc.end_of_line();
                    auto it = cells.find(n.text);
                    if (it != cells.end())
                        diag(lc.line, n.col,
                             cat("duplicate name '", n.text,
                                 "' (first declared at line ",
                                 it->second.line, ")"));
                    cells[n.text] = {lc.line, n.col};
                    raw_mors.push_back(
                        {n.text, d.text, c.text, {lc.line, n.col}});
                } else if (kw.text == "id") {
                    Token o = lc.ident("object name");
                    lc.expect("=");
                    Token m = lc.ident("morphism name");
                    lc.end_of_line();
                    if (id_decl.count(o.text))
                        diag(lc.line, o.col,
                             cat("duplicate identity for '", o.text, "'"));
                    id_decl[o.text] = {m.text, Pos{lc.line, m.col}};
                } else if (kw.text == "then") {
                    lc.expect("(");
                    Token f = lc.ident("morphism name");
                    lc.expect(",");
                    Token g = lc.ident("morphism name");
                    lc.expect(")");
                    lc.expect("=");
                    Token h = lc.ident("morphism name");
                    lc.end_of_line();
                    raw_thens.push_back(
                        {f.text, g.text, h.text, {lc.line, f.col}});
                } else {
                    diag(lc.line, kw.col,
                         cat("unknown category entry '", kw.text, "'"));
                }
            }
        } else if (head.text == "tangent") {
            if (!have_category)
                diag(hc.line, head.col, "tangent block before category block");
            if (have_tangent)
                diag(hc.line, head.col, "duplicate tangent block");
            have_tangent = true;
            tangent_pos = {hc.line, head.col};
            hc.end_of_line();
            ++i;
            for (;; ++i) {
                skip_blank();
                if (i >= lines.size())
                    diag(unsigned(lines.size()), 1,
                         "unexpected end of file inside tangent block");
                LineCursor lc = cursor(i);
                Token kw = lc.ident("tangent entry");
                if (kw.text == "end") {
                    lc.end_of_line();
                    ++i;
                    break;
                }
                if (kw.text == "bound") {
                    bound = lc.number("bound value");
                    lc.end_of_line();
                    if (bound < 2)
                        diag(lc.line, kw.col, "bound must be at least 2");
                } else if (kw.text == "T") {
                    Token a = lc.ident("cell name");
                    lc.expect("=");
                    Token b = lc.ident("cell name");
                    lc.end_of_line();
                    if (!cells.count(a.text))
                        diag(lc.line, a.col,
                             cat("unknown identifier '", a.text, "'"));
                    bool is_obj = false;
                    for (const auto& on : obj_names)
                        if (on == a.text) is_obj = true;
                    auto& tbl = is_obj ? t_obj : t_mor;
                    if (tbl.count(a.text))
                        diag(lc.line, a.col,
                             cat("duplicate T entry for '", a.text, "'"));
                    tbl[a.text] = b.text;
                } else {
                    int ci = -1;
                    for (int k = 0; k < 6; ++k)
                        if (kw.text == comp_kw[k]) ci = k;
                    if (ci >= 0) {
                        Token o = lc.ident("object name");
                        lc.expect("=");
                        Token m = lc.ident("morphism name");
                        lc.end_of_line();
                        if (comps[ci].count(o.text))
                            diag(lc.line, o.col,
                                 cat("duplicate ", comp_kw[ci],
                                     " entry for '", o.text, "'"));
                        comps[ci][o.text] = m.text;
                    } else if (kw.text == "witness") {
                        Token o = lc.ident("object name");
                        unsigned n = lc.number("witness arity");
                        lc.expect("=");
                        Token first = lc.take("witness body");
                        RawWitness w;
                        w.pos = {lc.line, o.col};
                        if (first.text == "auto") {
                            lc.end_of_line();
                        } else {
                            w.auto_search = false;
                            w.apex = first.text;
                            lc.expect(":");
                            for (unsigned k = 0; k < n; ++k)
                                w.projs.push_back(
                                    lc.ident("projection name").text);
                            lc.end_of_line();
                        }
                        if (raw_witness.count({o.text, n}))
                            diag(lc.line, o.col,
                                 cat("duplicate witness for '", o.text, "' ",
                                     n));
                        raw_witness[{o.text, n}] = std::move(w);
                    } else {
                        diag(lc.line, kw.col,
                             cat("unknown tangent entry '", kw.text, "'"));
                    }
                }
            }
        } else if (head.text == "system") {
            if (!have_category)
                diag(hc.line, head.col, "system block before category block");
            Token n = hc.ident("system name");
            hc.end_of_line();
            for (const auto& rs : raw_systems)
                if (rs.first == n.text)
                    diag(hc.line, n.col,
                         cat("duplicate system '", n.text, "'"));
            std::vector<std::pair<std::string, Pos>> raw;
            ++i;
            for (;; ++i) {
                skip_blank();
                if (i >= lines.size())
                    diag(unsigned(lines.size()), 1,
                         "unexpected end of file inside system block");
                LineCursor lc = cursor(i);
                Token kw = lc.ident("system entry");
                if (kw.text == "end") {
                    lc.end_of_line();
                    ++i;
                    break;
                }
                if (kw.text != "member")
                    diag(lc.line, kw.col,
                         cat("unknown system entry '", kw.text, "'"));
                Token m = lc.ident("morphism name");
                lc.end_of_line();
                raw.emplace_back(m.text, Pos{lc.line, m.col});
            }
            // member names resolve after the category is built
            raw_systems.emplace_back(n.text, std::move(raw));
        } else if (head.text == "algebra") {
            Token n = hc.ident("algebra name");
            hc.end_of_line();
            for (const auto& a : pf.algebras)
                if (a.name == n.text)
                    diag(hc.line, n.col,
                         cat("duplicate algebra '", n.text, "'"));
            FiniteAlgebra alg;
            bool saw_prime = false, saw_dim = false, saw_basis = false,
                 saw_unit = false;
            std::vector<std::tuple<unsigned, unsigned, unsigned, unsigned>>
                mul_entries;
            ++i;
            for (;; ++i) {
                skip_blank();
                if (i >= lines.size())
                    diag(unsigned(lines.size()), 1,
                         "unexpected end of file inside algebra block");
                LineCursor lc = cursor(i);
                Token kw = lc.ident("algebra entry");
                if (kw.text == "end") {
                    lc.end_of_line();
                    ++i;
                    break;
                }
                if (kw.text == "prime") {
                    alg.prime = lc.number("prime");
                    lc.end_of_line();
                    saw_prime = true;
                } else if (kw.text == "dim") {
                    alg.dim = lc.number("dimension");
                    lc.end_of_line();
                    saw_dim = true;
                } else if (kw.text == "basis") {
                    while (!lc.done())
                        alg.basis.push_back(lc.ident("basis label").text);
                    saw_basis = true;
                } else if (kw.text == "unit") {
                    while (!lc.done())
                        alg.unit.push_back(lc.number("unit coefficient"));
                    saw_unit = true;
                } else if (kw.text == "mul") {
                    unsigned a = lc.number("basis index");
                    unsigned b = lc.number("basis index");
                    unsigned k = lc.number("basis index");
                    unsigned v = lc.number("coefficient");
                    lc.end_of_line();
                    mul_entries.emplace_back(a, b, k, v);
                } else {
                    diag(lc.line, kw.col,
                         cat("unknown algebra entry '", kw.text, "'"));
                }
            }
            if (!saw_prime || !saw_dim || !saw_basis || !saw_unit)
                diag(hc.line, n.col,
                     cat("algebra '", n.text,
                         "' needs prime, dim, basis and unit"));
            alg.mul.assign(alg.dim, std::vector<std::vector<unsigned>>(
                                        alg.dim, fp::zero(alg.dim)));
            for (auto [a, b, k, v] : mul_entries) {
                if (a >= alg.dim || b >= alg.dim || k >= alg.dim ||
                    v >= alg.prime)
                    diag(hc.line, n.col,
                         cat("mul entry out of range in algebra '", n.text,
                             "'"));
                alg.mul[a][b][k] = v;
            }
            auto vr = validate_algebra(alg);
            if (!vr.ok)
                diag(hc.line, n.col,
                     cat("invalid algebra '", n.text, "': ", vr.detail));
            pf.algebras.push_back({n.text, std::move(alg)});
        } else if (head.text == "alghom") {
            Token n = hc.ident("hom name");
            hc.expect(":");
            Token src = hc.ident("algebra name");
            hc.expect("->");
            Token tgt = hc.ident("algebra name");
            hc.end_of_line();
            for (const auto& h : pf.alghoms)
                if (h.name == n.text)
                    diag(hc.line, n.col,
                         cat("duplicate alghom '", n.text, "'"));
            const FiniteAlgebra* sa = pf.algebra(src.text);
            const FiniteAlgebra* ta = pf.algebra(tgt.text);
            if (!sa)
                diag(hc.line, src.col,
                     cat("unknown algebra '", src.text, "'"));
            if (!ta)
                diag(hc.line, tgt.col,
                     cat("unknown algebra '", tgt.text, "'"));
            AlgebraHom hom;
            hom.mat.assign(sa->dim, fp::zero(ta->dim));
            ++i;
            for (;; ++i) {
                skip_blank();
                if (i >= lines.size())
                    diag(unsigned(lines.size()), 1,
                         "unexpected end of file inside alghom block");
                LineCursor lc = cursor(i);
                Token kw = lc.ident("alghom entry");
                if (kw.text == "end") {
                    lc.end_of_line();
                    ++i;
                    break;
                }
                if (kw.text != "mat")
                    diag(lc.line, kw.col,
                         cat("unknown alghom entry '", kw.text, "'"));
                unsigned r = lc.number("row index");
                unsigned c = lc.number("column index");
                unsigned v = lc.number("value");
                lc.end_of_line();
                if (r >= sa->dim || c >= ta->dim || v >= sa->prime)
                    diag(lc.line, kw.col, "mat entry out of range");
                hom.mat[r][c] = v;
            }
            auto vr = validate_hom(*sa, *ta, hom);
            if (!vr.ok)
                diag(hc.line, n.col,
                     cat("invalid alghom '", n.text, "': ", vr.detail));
            pf.alghoms.push_back({n.text, src.text, tgt.text, std::move(hom)});
        } else {
            diag(hc.line, head.col,
                 cat("unknown block keyword '", head.text, "'"));
        }
        skip_blank();
    }

    check_input(have_category || !pf.algebras.empty(),
                "file declares neither a category nor an algebra");
    pf.has_category = have_category;

    // ---- resolve the category ----
    if (have_category) {
        std::set<std::string> obj_set(obj_names.begin(), obj_names.end());
        auto is_object = [&](const std::string& n) {
            return obj_set.count(n) != 0;
        };
        for (const auto& rm : raw_mors) {
            if (!is_object(rm.dom))
                diag(rm.pos.line, rm.pos.col,
                     cat("unknown object '", rm.dom, "'"));
            if (!is_object(rm.cod))
                diag(rm.pos.line, rm.pos.col,
                     cat("unknown object '", rm.cod, "'"));
        }
        auto mor_info = [&](const std::string& n)
            -> const RawMor* {
            for (const auto& rm : raw_mors)
                if (rm.name == n) return &rm;
            return nullptr;
        };
        for (const auto& th : raw_thens) {
            const RawMor* f = mor_info(th.f);
            const RawMor* g = mor_info(th.g);
            const RawMor* h = mor_info(th.h);
            if (!f) diag(th.pos.line, th.pos.col,
                         cat("unknown morphism '", th.f, "'"));
            if (!g) diag(th.pos.line, th.pos.col,
                         cat("unknown morphism '", th.g, "'"));
            if (!h) diag(th.pos.line, th.pos.col,
                         cat("unknown morphism '", th.h, "'"));
            if (f->cod != g->dom)
                diag(th.pos.line, th.pos.col,
                     cat("morphisms '", th.f, "' and '", th.g,
                         "' are not composable (cod '", f->cod, "' vs dom '",
                         g->dom, "')"));
            if (h->dom != f->dom || h->cod != g->cod)
                diag(th.pos.line, th.pos.col,
                     cat("composite '", th.h, "' has the wrong type"));
        }
        {
            std::map<std::pair<std::string, std::string>, std::string> seen;
            for (const auto& th : raw_thens) {
                auto key = std::make_pair(th.f, th.g);
                auto it = seen.find(key);
                if (it != seen.end() && it->second != th.h)
                    diag(th.pos.line, th.pos.col,
                         cat("conflicting composition entries for ('", th.f,
                             "', '", th.g, "')"));
                seen[key] = th.h;
            }
        }
        for (const auto& [obj, decl] : id_decl) {
            if (!is_object(obj))
                diag(decl.second.line, decl.second.col,
                     cat("unknown object '", obj, "'"));
            const RawMor* m = mor_info(decl.first);
            if (!m)
                diag(decl.second.line, decl.second.col,
                     cat("unknown morphism '", decl.first, "'"));
            if (m->dom != obj || m->cod != obj)
                diag(decl.second.line, decl.second.col,
                     cat("identity of '", obj, "' must be an endomorphism"));
        }

        CatBuilder b;
        for (const auto& on : obj_names) b.add_object(on);
        for (const auto& rm : raw_mors) b.add_morphism(rm.name, rm.dom, rm.cod);
        for (const auto& on : obj_names) {
            auto it = id_decl.find(on);
            if (it != id_decl.end()) {
                b.set_identity(on, it->second.first);
            } else {
                std::string mint = cat("id_", on);
                auto pit = cells.find(mint);
                if (pit != cells.end())
                    diag(pit->second.line, pit->second.col,
                         cat("name '", mint,
                             "' collides with the auto-minted identity of '",
                             on, "'; declare `id ", on, " = ...` explicitly"));
                b.add_morphism(mint, on, on);
                b.set_identity(on, mint);
            }
        }
        for (const auto& th : raw_thens) b.set_comp(th.f, th.g, th.h);
        pf.cat = b.build();
        auto vr = validate_category(pf.cat);
        if (!vr.valid())
            diag(1, 1, cat("invalid category: ", vr.violations[0]));
    }

    // ---- resolve systems ----
    for (auto& [sys_name, raw] : raw_systems) {
        std::vector<MorId> ms;
        for (auto& [mn, pos] : raw) {
            auto mid = pf.cat.mor_by_name(mn);
            if (!mid)
                diag(pos.line, pos.col, cat("unknown morphism '", mn, "'"));
            ms.push_back(*mid);
        }
        std::sort(ms.begin(), ms.end());
        ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
        pf.systems[sys_name] = std::move(ms);
    }

    // ---- resolve the tangent structure ----
    if (have_tangent) {
        const FinCategory& C = pf.cat;
        TangentStructure ts;
        ts.bound = bound;
        ts.T.obj.assign(C.n_obj(), kNone);
        ts.T.mor.assign(C.n_mor(), kNone);
        auto oid = [&](const std::string& n, Pos p) {
            auto r = C.obj_by_name(n);
            if (!r) diag(p.line, p.col, cat("unknown object '", n, "'"));
            return *r;
        };
        auto mid = [&](const std::string& n, Pos p) {
            auto r = C.mor_by_name(n);
            if (!r) diag(p.line, p.col, cat("unknown morphism '", n, "'"));
            return *r;
        };
        for (auto& [a, bimg] : t_obj)
            ts.T.obj[oid(a, tangent_pos)] = oid(bimg, tangent_pos);
        for (auto& [a, bimg] : t_mor)
            ts.T.mor[mid(a, tangent_pos)] = mid(bimg, tangent_pos);
        for (ObjId x = 0; x < C.n_obj(); ++x)
            if (ts.T.obj[x] == kNone)
                diag(tangent_pos.line, tangent_pos.col,
                     cat("missing T image for object '", C.oname(x), "'"));
        // identities may be left implicit: T preserves them
        for (ObjId x = 0; x < C.n_obj(); ++x)
            if (ts.T.mor[C.id(x)] == kNone)
                ts.T.mor[C.id(x)] = C.id(ts.T.obj[x]);
        for (MorId f = 0; f < C.n_mor(); ++f)
            if (ts.T.mor[f] == kNone)
                diag(tangent_pos.line, tangent_pos.col,
                     cat("missing T image for morphism '", C.mname(f), "'"));

        std::vector<MorId>* fields[6] = {&ts.p, &ts.z, &ts.s,
                                         &ts.l, &ts.c, nullptr};
        std::vector<MorId> negv;
        bool has_neg = !comps[5].empty();
        for (int k = 0; k < 6; ++k) {
            if (k == 5 && !has_neg) break;
            std::vector<MorId>& vec = k == 5 ? negv : *fields[k];
            vec.assign(C.n_obj(), kNone);
            for (auto& [on, mn] : comps[k])
                vec[oid(on, tangent_pos)] = mid(mn, tangent_pos);
            for (ObjId x = 0; x < C.n_obj(); ++x)
                if (vec[x] == kNone)
                    diag(tangent_pos.line, tangent_pos.col,
                         cat("missing ", comp_kw[k], " component at '",
                             C.oname(x), "'"));
        }
        if (has_neg) ts.neg = std::move(negv);

        // validate functor laws and component typing before witnesses
        {
            auto fr = validate_functor(C, C, ts.T);
            if (!fr.valid())
                diag(tangent_pos.line, tangent_pos.col,
                     cat("T is not a functor: ", fr.violations[0]));
        }
        for (const auto& [key, rw] : raw_witness) {
            if (!C.obj_by_name(key.first))
                diag(rw.pos.line, rw.pos.col,
                     cat("unknown object '", key.first, "'"));
            if (key.second < 2 || key.second > ts.bound)
                diag(rw.pos.line, rw.pos.col,
                     cat("witness arity ", key.second,
                         " is outside 2..bound"));
        }
        for (ObjId x = 0; x < C.n_obj(); ++x) {
            auto& w = raw_witness;
            for (unsigned n = 2; n <= ts.bound; ++n) {
                auto it = w.find({C.oname(x), n});
                if (it != w.end() && !it->second.auto_search) {
                    const RawWitness& rw = it->second;
                    TnWitness tw;
                    tw.apex = oid(rw.apex, rw.pos);
                    for (const auto& pn : rw.projs)
                        tw.projections.push_back(mid(pn, rw.pos));
                    for (MorId pr : tw.projections) {
                        if (C.dom(pr) != tw.apex ||
                            C.cod(pr) != ts.T.obj[x])
                            diag(rw.pos.line, rw.pos.col,
                                 cat("witness projection for '", C.oname(x),
                                     "' has the wrong type"));
                    }
                    std::string fd;
                    auto table = scan_wide_pullback(C, tw.apex,
                                                    tw.projections, ts.p[x],
                                                    &fd);
                    if (!table)
                        diag(rw.pos.line, rw.pos.col,
                             cat("declared witness for '", C.oname(x), "' ",
                                 n, " does not certify: ", fd));
                    tw.mediators = std::move(*table);
                    ts.witnesses[{x, n}] = std::move(tw);
                } else {
                    auto nf = compute_nfold_pullback(C, ts.p[x], n);
                    Pos p = it != w.end() ? it->second.pos : tangent_pos;
                    if (!nf)
                        diag(p.line, p.col,
                             cat("no ", n, "-fold pullback of p at '",
                                 C.oname(x), "' found"));
                    ts.witnesses[{x, n}] =
                        TnWitness{nf->apex, nf->projections, nf->mediators};
                }
            }
        }
        try {
            detail::require_component_typing(C, ts);
        } catch (const input_error& e) {
            diag(tangent_pos.line, tangent_pos.col, e.what());
        }
        pf.ts = std::move(ts);
    }

    return pf;
}

inline PresentationFile parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    check_input(bool(in), cat("cannot open '", path, "'"));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

// Canonical serialization: cells sorted by name, witnesses explicit.
inline std::string serialize(const PresentationFile& pf) {
    std::ostringstream o;
    const FinCategory& C = pf.cat;
    if (pf.has_category || C.n_obj() > 0) {
        o << "category\n";
        for (ObjId x = 0; x < C.n_obj(); ++x)
            o << "  object " << C.oname(x) << "\n";
        for (MorId f = 0; f < C.n_mor(); ++f)
            o << "  mor " << C.mname(f) << " : " << C.oname(C.dom(f)) << " -> "
              << C.oname(C.cod(f)) << "\n";
        for (ObjId x = 0; x < C.n_obj(); ++x)
            o << "  id " << C.oname(x) << " = " << C.mname(C.id(x)) << "\n";
        for (MorId f = 0; f < C.n_mor(); ++f) {
            if (C.is_identity(f)) continue;
            for (MorId g = 0; g < C.n_mor(); ++g) {
                if (C.is_identity(g) || !C.composable(f, g)) continue;
                o << "  then(" << C.mname(f) << ", " << C.mname(g) << ") = "
                  << C.mname(C.comp[f][g]) << "\n";
            }
        }
        o << "end\n";
    }
    if (pf.ts) {
        const TangentStructure& ts = *pf.ts;
        o << "tangent\n";
        o << "  bound " << ts.bound << "\n";
        for (ObjId x = 0; x < C.n_obj(); ++x)
            o << "  T " << C.oname(x) << " = " << C.oname(ts.T.obj[x]) << "\n";
        for (MorId f = 0; f < C.n_mor(); ++f) {
            if (C.is_identity(f)) continue;
            o << "  T " << C.mname(f) << " = " << C.mname(ts.T.mor[f]) << "\n";
        }
        const char* kw[5] = {"p", "z", "s", "l", "c"};
        const std::vector<MorId>* vecs[5] = {&ts.p, &ts.z, &ts.s, &ts.l,
                                             &ts.c};
        for (int k = 0; k < 5; ++k)
            for (ObjId x = 0; x < C.n_obj(); ++x)
                o << "  " << kw[k] << " " << C.oname(x) << " = "
                  << C.mname((*vecs[k])[x]) << "\n";
        if (ts.neg)
            for (ObjId x = 0; x < C.n_obj(); ++x)
                o << "  n " << C.oname(x) << " = " << C.mname((*ts.neg)[x])
                  << "\n";
        for (ObjId x = 0; x < C.n_obj(); ++x)
            for (unsigned n = 2; n <= ts.bound; ++n) {
                const TnWitness& w = ts.witnesses.at({x, n});
                o << "  witness " << C.oname(x) << " " << n << " = "
                  << C.oname(w.apex) << " :";
                for (MorId pr : w.projections) o << " " << C.mname(pr);
                o << "\n";
            }
        o << "end\n";
    }
    for (const auto& [name, members] : pf.systems) {
        o << "system " << name << "\n";
        for (MorId m : members) o << "  member " << C.mname(m) << "\n";
        o << "end\n";
    }
    std::vector<const PresentationFile::NamedAlgebra*> algs;
    for (const auto& a : pf.algebras) algs.push_back(&a);
    std::sort(algs.begin(), algs.end(),
              [](auto* a, auto* b) { return a->name < b->name; });
    for (const auto* a : algs) {
        const FiniteAlgebra& A = a->alg;
        o << "algebra " << a->name << "\n";
        o << "  prime " << A.prime << "\n";
        o << "  dim " << A.dim << "\n";
        o << "  basis";
        for (const auto& bl : A.basis) o << " " << bl;
        o << "\n  unit";
        for (unsigned u : A.unit) o << " " << u;
        o << "\n";
        for (unsigned i = 0; i < A.dim; ++i)
            for (unsigned j = 0; j < A.dim; ++j)
                for (unsigned k = 0; k < A.dim; ++k)
                    if (A.mul[i][j][k])
                        o << "  mul " << i << " " << j << " " << k << " "
                          << A.mul[i][j][k] << "\n";
        o << "end\n";
    }
    std::vector<const PresentationFile::NamedHom*> homs;
    for (const auto& h : pf.alghoms) homs.push_back(&h);
    std::sort(homs.begin(), homs.end(),
              [](auto* a, auto* b) { return a->name < b->name; });
    for (const auto* h : homs) {
        o << "alghom " << h->name << " : " << h->src << " -> " << h->tgt
          << "\n";
        for (size_t r = 0; r < h->hom.mat.size(); ++r)
            for (size_t c = 0; c < h->hom.mat[r].size(); ++c)
                if (h->hom.mat[r][c])
                    o << "  mat " << r << " " << c << " " << h->hom.mat[r][c]
                      << "\n";
        o << "end\n";
    }
    return o.str();
}

} // namespace tdm
