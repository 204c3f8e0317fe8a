"""Line-oriented text format for coefficient superalgebras.

    # group algebra of C2
    ring Z
    basis e g
    unit e
    mul g g = e
    mul e g = g
    mul g e = g
    mul e e = e

Statements: ``ring``, ``basis``, ``parity <name> 0|1``, ``unit <name>`` and
``mul <name> <name> = <term> (+ <term>)*`` where a term is ``coeff*name``,
a bare ``name`` or a single ``0``.  Products never mentioned are zero and
parities default to even.  ``#`` starts a comment.  Parse errors report the
line, the column and the offending token.
"""

from __future__ import annotations

import re

from ..domains import CoefficientDomain
from ..superalg import SuperAlgebra, validate_superalgebra

_TOKEN = re.compile(r"\S+")


class AlgebraParseError(ValueError):
    """Input rejected, with 1-based position and the token at fault."""

    def __init__(self, message: str, line: int, column: int, token: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.token = token
        where = f"line {line}, column {column}"
        if token:
            super().__init__(f"{where}: {message} (got {token!r})")
        else:
            super().__init__(f"{where}: {message}")


def _tokens(raw: str) -> list[tuple[str, int]]:
    """(token, 1-based column) pairs for one line, comments stripped."""
    hash_at = raw.find("#")
    if hash_at >= 0:
        raw = raw[:hash_at]
    return [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(raw)]


class _Builder:
    def __init__(self):
        self.domain = None
        self.names = []
        self.index = {}
        self.parity = {}
        self.unit_name = None
        self.products = {}

    def need_ring(self, line, col):
        if self.domain is None:
            raise AlgebraParseError("ring must be declared first", line, col)

    def need_basis(self, line, col):
        if not self.names:
            raise AlgebraParseError("basis must be declared first", line, col)

    def lookup(self, tok, line, col) -> int:
        if tok not in self.index:
            raise AlgebraParseError("unknown basis name", line, col, tok)
        return self.index[tok]


def _parse_term(tok: str, bld: _Builder, line: int, col: int) -> tuple[int, object]:
    """coeff*name or bare name -> (basis index, coefficient)."""
    if "*" in tok:
        lit, _, name = tok.partition("*")
        if not lit or not name or "*" in name:
            raise AlgebraParseError("term must be coeff*name", line, col, tok)
        try:
            coeff = bld.domain.parse_literal(lit)
        except ValueError:
            raise AlgebraParseError("bad coefficient literal", line, col, lit)
        return bld.lookup(name, line, col), coeff
    return bld.lookup(tok, line, col), bld.domain.one


def _statement(bld: _Builder, toks: list[tuple[str, int]], line: int) -> None:
    head, hcol = toks[0]
    rest = toks[1:]
    if head == "ring":
        if bld.domain is not None:
            raise AlgebraParseError("ring declared twice", line, hcol)
        if len(rest) != 1:
            raise AlgebraParseError("ring takes one name", line, hcol)
        tok, col = rest[0]
        try:
            bld.domain = CoefficientDomain.parse(tok)
        except ValueError:
            raise AlgebraParseError("bad ring name", line, col, tok)
    elif head == "basis":
        if not rest:
            raise AlgebraParseError("basis needs at least one name", line, hcol)
        for tok, col in rest:
            if tok in bld.index:
                raise AlgebraParseError("duplicate basis name", line, col, tok)
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
                raise AlgebraParseError("bad basis name", line, col, tok)
            bld.index[tok] = len(bld.names)
            bld.names.append(tok)
    elif head == "parity":
        bld.need_basis(line, hcol)
        if len(rest) != 2:
            raise AlgebraParseError("parity takes a name and 0 or 1", line, hcol)
        (name, ncol), (val, vcol) = rest
        i = bld.lookup(name, line, ncol)
        if val not in ("0", "1"):
            raise AlgebraParseError("parity must be 0 or 1", line, vcol, val)
        bld.parity[i] = int(val)
    elif head == "unit":
        bld.need_basis(line, hcol)
        if len(rest) != 1:
            raise AlgebraParseError("unit takes one name", line, hcol)
        tok, col = rest[0]
        if bld.unit_name is not None:
            raise AlgebraParseError("unit declared twice", line, col, tok)
        bld.lookup(tok, line, col)
        bld.unit_name = tok
    elif head == "mul":
        bld.need_ring(line, hcol)
        bld.need_basis(line, hcol)
        if len(rest) < 4 or rest[2][0] != "=":
            raise AlgebraParseError("expected mul a b = terms", line, hcol)
        (atok, acol), (btok, bcol) = rest[0], rest[1]
        i = bld.lookup(atok, line, acol)
        j = bld.lookup(btok, line, bcol)
        if (i, j) in bld.products:
            raise AlgebraParseError("product declared twice", line, acol,
                                    f"{atok} {btok}")
        terms = rest[3:]
        vec = [bld.domain.zero] * len(bld.names)
        if len(terms) == 1 and terms[0][0] == "0":
            bld.products[(i, j)] = vec
            return
        expect_term = True
        for tok, col in terms:
            if expect_term:
                k, coeff = _parse_term(tok, bld, line, col)
                vec[k] = bld.domain.add(vec[k], coeff)
                expect_term = False
            else:
                if tok != "+":
                    raise AlgebraParseError("expected +", line, col, tok)
                expect_term = True
        if expect_term:
            raise AlgebraParseError("dangling + at end of product", line, hcol)
        bld.products[(i, j)] = vec
    else:
        raise AlgebraParseError("unknown statement", line, hcol, head)


def parse_algebra(text: str, label: str = "") -> SuperAlgebra:
    """Parse and validate one algebra file.  Raises AlgebraParseError on
    malformed input and SuperAlgebraError if the table fails the axioms."""
    bld = _Builder()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if toks:
            _statement(bld, toks, lineno)
    if bld.domain is None:
        raise AlgebraParseError("missing ring declaration", 1, 1)
    if not bld.names:
        raise AlgebraParseError("missing basis declaration", 1, 1)
    if bld.unit_name is None:
        raise AlgebraParseError("missing unit declaration", 1, 1)
    rank = len(bld.names)
    zero = [bld.domain.zero] * rank
    table = [[tuple(bld.products.get((i, j), zero)) for j in range(rank)]
             for i in range(rank)]
    A = SuperAlgebra(
        domain=bld.domain,
        names=list(bld.names),
        parity=tuple(bld.parity.get(i, 0) for i in range(rank)),
        unit=bld.index[bld.unit_name],
        table=table,
        label=label,
        source=text,
    )
    validate_superalgebra(A)
    return A


def serialize_algebra(A: SuperAlgebra) -> str:
    """Canonical text for A.  parse(serialize(parse(s))) gives the same
    ring, names, parities, unit and table as parse(s)."""
    dom = A.domain
    lines = [f"ring {dom}", "basis " + " ".join(A.names)]
    for i, p in enumerate(A.parity):
        if p:
            lines.append(f"parity {A.names[i]} 1")
    lines.append(f"unit {A.names[A.unit]}")
    for i in range(A.rank):
        for j in range(A.rank):
            terms = []
            for k, c in enumerate(A.table[i][j]):
                if dom.is_zero(c):
                    continue
                if c == dom.one:
                    terms.append(A.names[k])
                else:
                    terms.append(f"{dom.format_element(c)}*{A.names[k]}")
            if terms:
                lines.append(f"mul {A.names[i]} {A.names[j]} = " + " + ".join(terms))
    return "\n".join(lines) + "\n"


def algebras_equal(A: SuperAlgebra, B: SuperAlgebra) -> bool:
    return (A.domain == B.domain and A.names == B.names and A.parity == B.parity
            and A.unit == B.unit and A.table == B.table)
