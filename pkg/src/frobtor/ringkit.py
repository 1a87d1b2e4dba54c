"""Exact arithmetic in quotients R = F_p[x1..xn]/I.

A ring is described by a prime p, ordered variables, a list of relation
polynomials and a degree cap D.  We fix graded reverse-lexicographic order
(with the declared variable order), compute a reduced Groebner basis of I,
and represent elements by their normal forms supported on the standard
monomials.

If the initial ideal is zero-dimensional (every variable has a pure power
among the lead monomials) the quotient is Artinian: the standard monomials
are finite, the cap is ignored and everything downstream is exact.
Otherwise only monomials of degree < D are kept; dropping higher terms
amounts to working in R/(I + m^D), and elements remember (via a
`truncated` flag) whether anything was dropped so callers can run
stabilization checks at a larger cap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import NotArtinian, PresentationError, RingSyntaxError

DEFAULT_CAP = 12


# ---------------------------------------------------------------------------
# monomials: exponent tuples under graded reverse-lex
# ---------------------------------------------------------------------------


def mono_degree(m):
    return sum(m)


def grevlex_key(m):
    """Sort key: ascending degree, then reverse-lex (last variable cheapest)."""
    return (sum(m), tuple(-e for e in reversed(m)))


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def mono_div(b, a):
    """Exponentwise quotient b/a, i.e. b - a (caller ensures a divides b)."""
    return tuple(x - y for x, y in zip(b, a))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_pow(a, e):
    return tuple(x * e for x in a)


def monomials_of_degree(n, d):
    """All exponent tuples in n variables of total degree d, grevlex order."""
    if n == 0:
        return [()] if d == 0 else []
    out = []
    for bars in itertools.combinations_with_replacement(range(n), d):
        m = [0] * n
        for b in bars:
            m[b] += 1
        out.append(tuple(m))
    out.sort(key=grevlex_key)
    return out


# ---------------------------------------------------------------------------
# raw polynomials: dict {exponent tuple: coeff in 1..p-1}
# ---------------------------------------------------------------------------


def poly_add(f, g, p):
    out = dict(f)
    for m, c in g.items():
        v = (out.get(m, 0) + c) % p
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def poly_scale(f, c, p):
    c %= p
    if c == 0:
        return {}
    return {m: (v * c) % p for m, v in f.items()}


def poly_mul_term(f, mon, c, p):
    c %= p
    if c == 0:
        return {}
    return {mono_mul(m, mon): (v * c) % p for m, v in f.items()}


def poly_mul(f, g, p):
    out = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            m = mono_mul(m1, m2)
            v = (out.get(m, 0) + c1 * c2) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def poly_sub(f, g, p):
    return poly_add(f, poly_scale(g, p - 1, p), p)


def poly_lead(f):
    return max(f, key=grevlex_key)


def poly_degree(f):
    return max((sum(m) for m in f), default=-1)


def poly_is_homogeneous(f):
    degs = {sum(m) for m in f}
    return len(degs) <= 1


def poly_freeze(f):
    return tuple(sorted(f.items()))


# ---------------------------------------------------------------------------
# Groebner bases (Buchberger, graded reverse-lex)
# ---------------------------------------------------------------------------


def _monic(f, p):
    lc = f[poly_lead(f)]
    return poly_scale(f, pow(lc, p - 2, p), p) if lc != 1 else f


def reduce_full(f, basis, p, trace=None):
    """Full normal form of f against (lead, poly) pairs.

    Every term is reduced, not just the lead, so the result is the unique
    normal form when `basis` is a reduced Groebner basis.  When `trace` is a
    list of the same length as basis, the quotients are accumulated so that
    f = sum(trace[i] * basis[i]) + remainder.
    """
    work = dict(f)
    rem = {}
    while work:
        mon = poly_lead(work)
        c = work[mon]
        hit = -1
        for i, (lead, _) in enumerate(basis):
            if mono_divides(lead, mon):
                hit = i
                break
        if hit < 0:
            rem[mon] = c
            del work[mon]
            continue
        lead, g = basis[hit]
        q = mono_div(mon, lead)
        work = poly_sub(work, poly_mul_term(g, q, c, p), p)
        if trace is not None:
            trace[hit] = poly_add(trace[hit], {q: c}, p)
    return rem


def groebner_basis(gens, p):
    """Reduced Groebner basis of the ideal generated by gens.

    Returns a list of monic polynomial dicts sorted by lead monomial.
    """
    basis = []
    for g in gens:
        g = {m: c % p for m, c in g.items() if c % p}
        if g:
            basis.append(_monic(g, p))
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    while pairs:
        # normal selection: smallest lcm first
        pairs.sort(key=lambda ij: grevlex_key(
            mono_lcm(poly_lead(basis[ij[0]]), poly_lead(basis[ij[1]]))), reverse=True)
        i, j = pairs.pop()
        li, lj = poly_lead(basis[i]), poly_lead(basis[j])
        lcm = mono_lcm(li, lj)
        if lcm == mono_mul(li, lj):  # coprime leads: s-poly reduces to 0
            continue
        ci = basis[i][li]
        cj = basis[j][lj]
        s = poly_sub(
            poly_mul_term(basis[i], mono_div(lcm, li), pow(ci, p - 2, p), p),
            poly_mul_term(basis[j], mono_div(lcm, lj), pow(cj, p - 2, p), p),
            p,
        )
        h = reduce_full(s, [(poly_lead(g), g) for g in basis], p)
        if h:
            h = _monic(h, p)
            basis.append(h)
            pairs.extend((len(basis) - 1, t) for t in range(len(basis) - 1))
    # interreduce to the unique reduced basis
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            others = [(poly_lead(g), g) for t, g in enumerate(basis) if t != i and g]
            if not basis[i]:
                continue
            h = reduce_full(basis[i], others, p)
            if h != basis[i]:
                basis[i] = _monic(h, p) if h else {}
                changed = True
    basis = [g for g in basis if g]
    basis.sort(key=lambda g: grevlex_key(poly_lead(g)))
    return basis


# ---------------------------------------------------------------------------
# presentations and parsing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RingPresentation:
    p: int
    variables: tuple
    relations: tuple  # tuple of frozen polys (tuples of (monomial, coeff))
    cap: int = DEFAULT_CAP
    modules: tuple = ()  # ((name, "k" | matrix-of-frozen-polys), ...)

    def relation_dicts(self):
        return [dict(r) for r in self.relations]

    def module_map(self):
        return dict(self.modules)


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class _Lexer:
    SYMBOLS = "[](),/^*+-="

    def __init__(self, text):
        self.tokens = []
        line, col = 1, 1
        i = 0
        while i < len(text):
            ch = text[i]
            if ch == "\n":
                line += 1
                col = 1
                i += 1
                continue
            if ch in " \t\r":
                i += 1
                col += 1
                continue
            if ch == "#":  # comment to end of line
                while i < len(text) and text[i] != "\n":
                    i += 1
                continue
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.tokens.append(("INT", int(text[i:j]), line, col))
                col += j - i
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append(("IDENT", text[i:j], line, col))
                col += j - i
                i = j
                continue
            if ch in self.SYMBOLS:
                self.tokens.append(("SYM", ch, line, col))
                i += 1
                col += 1
                continue
            raise RingSyntaxError(f"unexpected character {ch!r}", line, col)


class _Parser:
    def __init__(self, text):
        self.toks = _Lexer(text).tokens
        self.pos = 0

    def peek(self):
        if self.pos < len(self.toks):
            return self.toks[self.pos]
        return ("EOF", None, -1, -1)

    def next(self):
        t = self.peek()
        self.pos += 1
        return t

    def err(self, msg, tok=None):
        tok = tok or self.peek()
        if tok[0] == "EOF":
            raise RingSyntaxError(msg + " (at end of input)")
        raise RingSyntaxError(msg + f", got {tok[1]!r}", tok[2], tok[3])

    def expect(self, kind, value=None):
        t = self.next()
        if t[0] != kind or (value is not None and t[1] != value):
            self.err(f"expected {value or kind}", t)
        return t

    def accept(self, kind, value=None):
        t = self.peek()
        if t[0] == kind and (value is None or t[1] == value):
            self.pos += 1
            return True
        return False

    # --- grammar ---

    def parse_source(self):
        self.expect("IDENT", "ring")
        # both "F 2" and the fused "F2" are accepted
        ftok = self.expect("IDENT")
        if ftok[1] == "F":
            p = self.expect("INT")[1]
        elif ftok[1][:1] == "F" and ftok[1][1:].isdigit():
            p = int(ftok[1][1:])
        else:
            self.err("expected F<prime>", ftok)
        if not _is_prime(p):
            raise PresentationError(f"characteristic {p} is not prime")
        self.expect("SYM", "[")
        variables = [self.expect("IDENT")[1]]
        while self.accept("SYM", ","):
            variables.append(self.expect("IDENT")[1])
        self.expect("SYM", "]")
        if len(set(variables)) != len(variables):
            raise PresentationError(f"duplicate variable in {variables}")
        for v in variables:
            if v in ("ring", "F", "cap", "module", "coker"):
               raise PresentationError(f"reserved word used as variable: {v}")
        self.expect("SYM", "/")
        self.expect("SYM", "(")
        relations = []
        if not self.accept("SYM", ")"):
            relations.append(self.parse_poly(variables, p))
            while self.accept("SYM", ","):
                relations.append(self.parse_poly(variables, p))
            self.expect("SYM", ")")
        cap = DEFAULT_CAP
        if self.accept("IDENT", "cap"):
            cap = self.expect("INT")[1]
        if cap < 2:
            raise PresentationError(f"cap must be at least 2, got {cap}")
        for rel in relations:
            zero_mono = tuple([0] * len(variables))
            if rel.get(zero_mono):
                raise PresentationError(
                    "relation with nonzero constant term (quotient is not local)"
                )
        modules = []
        while self.peek()[0] != "EOF":
            self.expect("IDENT", "module")
            name = self.expect("IDENT")[1]
            self.expect("SYM", "=")
            if self.accept("IDENT", "k"):
                modules.append((name, "k"))
            else:
                self.expect("IDENT", "coker")
                modules.append((name, self.parse_matrix(variables, p)))
        return RingPresentation(
            p=p,
            variables=tuple(variables),
            relations=tuple(poly_freeze(r) for r in relations),
            cap=cap,
            modules=tuple(modules),
        )

    def parse_matrix(self, variables, p):
        self.expect("SYM", "[")
        rows = [self.parse_row(variables, p)]
        while self.accept("SYM", ","):
            rows.append(self.parse_row(variables, p))
        self.expect("SYM", "]")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise PresentationError("ragged module matrix")
        return tuple(tuple(poly_freeze(e) for e in row) for row in rows)

    def parse_row(self, variables, p):
        self.expect("SYM", "[")
        row = [self.parse_poly(variables, p)]
        while self.accept("SYM", ","):
            row.append(self.parse_poly(variables, p))
        self.expect("SYM", "]")
        return row

    def parse_poly(self, variables, p):
        out = {}
        sign = 1
        if self.accept("SYM", "-"):
            sign = -1
        else:
            self.accept("SYM", "+")
        while True:
            mono, coeff = self.parse_term(variables, p)
            out = poly_add(out, {mono: (sign * coeff) % p}, p)
            if self.accept("SYM", "+"):
                sign = 1
            elif self.accept("SYM", "-"):
                sign = -1
            else:
                return out

    def parse_term(self, variables, p):
        coeff = 1
        exps = [0] * len(variables)
        saw_factor = False
        t = self.peek()
        if t[0] == "INT":
            coeff = self.next()[1] % p
            if not self.accept("SYM", "*"):
                return tuple(exps), coeff  # bare integer term
        while True:
            t = self.peek()
            if t[0] != "IDENT":
                if not saw_factor:
                    self.err("expected a variable")
                break
            name = self.next()[1]
            if name not in variables:
                self.err(f"unknown variable {name!r}", t)
            e = 1
            if self.accept("SYM", "^"):
                e = self.expect("INT")[1]
            exps[variables.index(name)] += e
            saw_factor = True
            if not self.accept("SYM", "*"):
                break
        return tuple(exps), coeff


def parse_presentation(text):
    """Parse a ring declaration (with optional module declarations)."""
    parser = _Parser(text)
    pres = parser.parse_source()
    return pres


def parse_inline_module(text, variables, p):
    """Parse "coker [[...], ...]" against an existing ring's variables.

    Returns the frozen matrix rows, in the same form the file parser
    stores for declared modules.
    """
    parser = _Parser(text)
    parser.expect("IDENT", "coker")
    rows = parser.parse_matrix(list(variables), p)
    if parser.peek()[0] != "EOF":
        parser.err("unexpected trailing input after the matrix")
    return rows


# ---------------------------------------------------------------------------
# canonical printing
# ---------------------------------------------------------------------------


def poly_to_string(f, variables, p=None):
    if not f:
        return "0"
    parts = []
    for mon in sorted(f, key=grevlex_key, reverse=True):
        c = f[mon]
        factors = []
        for name, e in zip(variables, mon):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    return " + ".join(parts)


def presentation_to_string(pres):
    rels = ", ".join(poly_to_string(dict(r), pres.variables) for r in pres.relations)
    head = f"ring F {pres.p} [{','.join(pres.variables)}] / ({rels}) cap {pres.cap}"
    lines = [head]
    for name, mat in pres.modules:
        if mat == "k":
            lines.append(f"module {name} = k")
        else:
            rows = ", ".join(
                "[" + ", ".join(poly_to_string(dict(e), pres.variables) for e in row) + "]"
                for row in mat
            )
            lines.append(f"module {name} = coker [{rows}]")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# the quotient algebra
# ---------------------------------------------------------------------------


class LocalAlgebra:
    """R = F_p[x1..xn]/I with normal-form arithmetic on standard monomials."""

    def __init__(self, presentation, _shared_gb=None, cap_override=None):
        self.presentation = presentation
        self.p = presentation.p
        self.variables = presentation.variables
        self.n = len(presentation.variables)
        rels = presentation.relation_dicts()
        self.graded = all(poly_is_homogeneous(r) for r in rels if r)
        if _shared_gb is not None:
            self.gb = _shared_gb
        else:
            self.gb = groebner_basis(rels, self.p)
        self._gb_pairs = [(poly_lead(g), g) for g in self.gb]
        zero_mono = tuple([0] * self.n)
        for lead, _ in self._gb_pairs:
            if lead == zero_mono:
                raise PresentationError("the ideal contains a unit: quotient is the zero ring")
        self.lead_monomials = [lead for lead, _ in self._gb_pairs]

        # Artinian iff the initial ideal is zero-dimensional: every variable
        # has a pure power among the lead monomials.
        pure = [False] * self.n
        for lead in self.lead_monomials:
            support = [i for i, e in enumerate(lead) if e]
            if len(support) == 1:
                pure[support[0]] = True
        self.artinian = all(pure) if self.n else True

        requested = cap_override if cap_override is not None else presentation.cap
        max_rel_deg = max((poly_degree(r) for r in rels if r), default=0)
        if self.artinian:
            # enumerate all standard monomials; the cap is ignored
            std = []
            d = 0
            while True:
                layer = [m for m in monomials_of_degree(self.n, d)
                         if not self._lead_divides(m)]
                if not layer:
                    break
                std.extend(layer)
                d += 1
            self.cap = max(requested, d + 2)
        else:
            if requested <= max_rel_deg:
                raise PresentationError(
                    f"cap {requested} too small: must exceed the maximum "
                    f"relation degree {max_rel_deg}"
                )
            self.cap = requested
            std = []
            for d in range(self.cap):
                std.extend(m for m in monomials_of_degree(self.n, d)
                           if not self._lead_divides(m))
        self.std_monomials = std
        self.std_index = {m: i for i, m in enumerate(std)}
        self.dim = len(std)
        self.std_degrees = np.array([sum(m) for m in std], dtype=np.int64)
        self.top_degree = int(self.std_degrees.max()) if std else 0
        self.std_by_degree = [[] for _ in range(self.top_degree + 1)]
        for i, m in enumerate(std):
            self.std_by_degree[sum(m)].append(i)

        self._nf_mono_cache = {}
        self._mono_op_cache = {}
        self._op_cache = {}
        self._layer_cache = {}
        self._mpow_gb_cache = {}
        self._resolution_cache = {}
        self._bigger = None

    def _lead_divides(self, m):
        return any(mono_divides(lead, m) for lead in self.lead_monomials)

    # --- normal forms ---

    def nf_monomial(self, m):
        """Normal form of a monomial: (poly dict on std monomials, truncated?)."""
        hit = self._nf_mono_cache.get(m)
        if hit is not None:
            return hit
        deg = sum(m)
        if m in self.std_index:
            res = ({m: 1}, False)
        elif self.graded and not self.artinian and deg >= self.cap:
            res = ({}, True)
        else:
            red = reduce_full({m: 1}, self._gb_pairs, self.p)
            if self.artinian:
                res = (red, False)
            else:
                kept = {mm: c for mm, c in red.items() if sum(mm) < self.cap}
                res = (kept, len(kept) != len(red))
        self._nf_mono_cache[m] = res
        return res

    def nf_dict(self, f):
        """Normal form of a raw polynomial dict: (reduced dict, truncated?)."""
        out = {}
        trunc = False
        p = self.p
        for m, c in f.items():
            c %= p
            if not c:
                continue
            red, t = self.nf_monomial(m)
            trunc = trunc or t
            for mm, cc in red.items():
                v = (out.get(mm, 0) + c * cc) % p
                if v:
                    out[mm] = v
                else:
                    out.pop(mm, None)
        return out, trunc

    def nf(self, f):
        """Normal form as a RingElement; accepts raw dicts or RingElements."""
        if isinstance(f, RingElement):
            return f  # already stored in normal form
        out, trunc = self.nf_dict(f)
        return RingElement(self, out, trunc)

    # --- element constructors ---

    def zero(self):
        return RingElement(self, {}, False)

    def one(self):
        return self.nf({tuple([0] * self.n): 1})

    def var(self, which):
        if isinstance(which, str):
            which = self.variables.index(which)
        e = [0] * self.n
        e[which] = 1
        return self.nf({tuple(e): 1})

    def gens(self):
        return [self.var(i) for i in range(self.n)]

    def element_from_string(self, text):
        parser = _Parser(text)
        f = parser.parse_poly(list(self.variables), self.p)
        if parser.peek()[0] != "EOF":
            parser.err("trailing input after polynomial")
        return self.nf(f)

    def from_vector(self, vec, truncated=False):
        terms = {}
        for i, c in enumerate(vec):
            c = int(c) % self.p
            if c:
                terms[self.std_monomials[i]] = c
        return RingElement(self, terms, truncated)

    def basis_element(self, i):
        return RingElement(self, {self.std_monomials[i]: 1}, False)

    # --- multiplication operators ---

    def mult_operator_monomial(self, m):
        """dim x dim matrix of multiplication by the monomial m on std basis."""
        hit = self._mono_op_cache.get(m)
        if hit is not None:
            return hit
        op = np.zeros((self.dim, self.dim), dtype=np.int8)
        for j, mj in enumerate(self.std_monomials):
            red, _ = self.nf_monomial(mono_mul(m, mj))
            for mm, cc in red.items():
                op[self.std_index[mm], j] = cc
        self._mono_op_cache[m] = op
        return op

    def mult_operator(self, e):
        """Matrix of multiplication by a RingElement on the std basis."""
        key = e.freeze()
        hit = self._op_cache.get(key)
        if hit is not None:
            return hit
        op = np.zeros((self.dim, self.dim), dtype=np.int64)
        for m, c in e.terms.items():
            op += c * self.mult_operator_monomial(m).astype(np.int64)
        out = (op % self.p).astype(np.int8)
        self._op_cache[key] = out
        return out

    # --- ideal-power membership ---

    def _m_power_gb(self, s):
        hit = self._mpow_gb_cache.get(s)
        if hit is None:
            gens = self.presentation.relation_dicts()
            gens += [{m: 1} for m in monomials_of_degree(self.n, s)]
            gb = groebner_basis(gens, self.p)
            hit = [(poly_lead(g), g) for g in gb]
            self._mpow_gb_cache[s] = hit
        return hit

    def in_m_power(self, e, s):
        """Is e in m^s (as an ideal of R)?  Exact for s <= cap."""
        if s <= 0:
            return True
        terms = e.terms if isinstance(e, RingElement) else e
        return not reduce_full(dict(terms), self._m_power_gb(s), self.p)

    # --- cap management ---

    def at_cap(self, new_cap):
        """The same quotient with a different degree cap (shares the GB)."""
        if self.artinian or new_cap == self.cap:
            return self
        return LocalAlgebra(self.presentation, _shared_gb=self.gb, cap_override=new_cap)

    def verification_algebra(self):
        """The cap-(2D-2) twin used by stabilization checks (cached)."""
        if self.artinian:
            return self
        if self._bigger is None:
            self._bigger = self.at_cap(2 * self.cap - 2)
        return self._bigger

    def is_field(self):
        return self.artinian and self.dim == 1

    def __repr__(self):
        kind = "artinian" if self.artinian else f"cap {self.cap}"
        rels = ", ".join(
            poly_to_string(dict(r), self.variables) for r in self.presentation.relations
        )
        return f"F_{self.p}[{','.join(self.variables)}]/({rels}) [{kind}]"


class RingElement:
    """An element of a LocalAlgebra, stored as its (sparse) normal form."""

    __slots__ = ("algebra", "terms", "truncated", "_frozen")

    def __init__(self, algebra, terms, truncated=False):
        self.algebra = algebra
        self.terms = terms
        self.truncated = truncated
        self._frozen = None

    @property
    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def min_degree(self):
        return min((sum(m) for m in self.terms), default=-1)

    def constant_term(self):
        return self.terms.get(tuple([0] * self.algebra.n), 0)

    def is_unit(self):
        return self.constant_term() != 0

    def freeze(self):
        if self._frozen is None:
            self._frozen = poly_freeze(self.terms)
        return self._frozen

    def to_vector(self):
        v = np.zeros(self.algebra.dim, dtype=np.int8)
        for m, c in self.terms.items():
            v[self.algebra.std_index[m]] = c
        return v

    def __add__(self, other):
        other = self._coerce(other)
        return RingElement(
            self.algebra,
            poly_add(self.terms, other.terms, self.algebra.p),
            self.truncated or other.truncated,
        )

    def __sub__(self, other):
        other = self._coerce(other)
        return RingElement(
            self.algebra,
            poly_sub(self.terms, other.terms, self.algebra.p),
            self.truncated or other.truncated,
        )

    def __neg__(self):
        return RingElement(
            self.algebra,
            poly_scale(self.terms, self.algebra.p - 1, self.algebra.p),
            self.truncated,
        )

    def __mul__(self, other):
        alg = self.algebra
        if isinstance(other, int):
            return RingElement(alg, poly_scale(self.terms, other, alg.p), self.truncated)
        out = {}
        trunc = self.truncated or other.truncated
        p = alg.p
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                red, t = alg.nf_monomial(mono_mul(m1, m2))
                trunc = trunc or t
                c = (c1 * c2) % p
                for mm, cc in red.items():
                    v = (out.get(mm, 0) + c * cc) % p
                    if v:
                        out[mm] = v
                    else:
                        out.pop(mm, None)
        return RingElement(alg, out, trunc)

    __rmul__ = __mul__

    def _coerce(self, other):
        if isinstance(other, RingElement):
            return other
        if isinstance(other, int):
            return self.algebra.nf({tuple([0] * self.algebra.n): other})
        raise TypeError(f"cannot combine RingElement with {type(other)}")

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.algebra is other.algebra and self.terms == other.terms
        if isinstance(other, int):
            return self.terms == self._coerce(other).terms
        return NotImplemented

    def __repr__(self):
        return poly_to_string(self.terms, self.algebra.variables)


def build_algebra(pres):
    """Construct the LocalAlgebra for a presentation (spec entry point)."""
    return LocalAlgebra(pres)


def frob_power(e, r):
    """nf(e^{p^r}) computed termwise.

    Raising to the p^r-th power is additive in characteristic p and fixes
    the coefficients (Fermat), so it suffices to raise each standard
    monomial in the support.
    """
    if r < 1:
        raise ValueError(f"twist exponent must be >= 1, got {r}")
    alg = e.algebra
    q = alg.p ** r
    out = {}
    trunc = e.truncated
    for m, c in e.terms.items():
        red, t = alg.nf_monomial(mono_pow(m, q))
        trunc = trunc or t
        for mm, cc in red.items():
            v = (out.get(mm, 0) + c * cc) % alg.p
            if v:
                out[mm] = v
            else:
                out.pop(mm, None)
    return RingElement(alg, out, trunc)


def algebra_length(alg):
    """length of R over itself = dim_k R; defined only in the Artinian case."""
    if not alg.artinian:
        raise NotArtinian(f"{alg!r} has infinite length")
    return alg.dim
