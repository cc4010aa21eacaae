"""Text formats: form-algebra files, subspace basis files, bivector literals.

Algebra files are UTF-8, line oriented::

    formalgebra v1
    d 2
    q 4
    h 1 4 4
    mult 1
    v0 * b2 -> 1*b0
    v2 * b0 -> -1*b0

``mult i`` opens the block of products ``V x H^i -> H^{i+1}``; each entry
line gives ``v_j * b_a`` as a sum of ``coeff*b_c`` terms with exact
coefficients ``n`` or ``n/m``.  Missing entries are zero.  ``#`` starts a
comment.  The canonical serialisation lists every block and only non-zero
products, sorted by ``(j, a)`` and then ``c``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .algebra import FormAlgebra, MalformedAlgebraError
from .bivector import Bivector
from .field import QQ, format_scalar
from .matrix import ExactMatrix

HEADER = "formalgebra v1"

_ENTRY = re.compile(r"^v(\d+)\s*\*\s*b(\d+)\s*->\s*(.+)$")
_TERM = re.compile(r"^([+-]?\d+(?:/\d+)?)\*b(\d+)$")
_FRACTION = re.compile(r"^[+-]?\d+(?:/\d+)?$")


class AlgebraFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _fraction(text: str, line: int) -> Fraction:
    if not _FRACTION.match(text):
        raise AlgebraFormatError(f"bad exact coefficient {text!r}", line)
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise AlgebraFormatError(f"zero denominator in {text!r}", line) from None


def _int(text: str, line: int, what: str) -> int:
    if not re.fullmatch(r"\d+", text):
        raise AlgebraFormatError(f"{what} must be a non-negative integer, got {text!r}", line)
    return int(text)


def parse_algebra(text: str, name: str = "") -> FormAlgebra:
    lines = text.splitlines()
    seen_header = False
    d = q = None
    h = None
    blocks: dict[int, dict[tuple[int, int], dict[int, Fraction]]] = {}
    current = None
    for no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not seen_header:
            if line != HEADER:
                raise AlgebraFormatError(f"expected header {HEADER!r}", no)
            seen_header = True
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "d":
            d = _int(rest, no, "d")
        elif head == "q":
            q = _int(rest, no, "q")
        elif head == "h":
            h = [_int(x, no, "h entry") for x in rest.split()]
        elif head == "mult":
            i = _int(rest, no, "mult degree")
            if i in blocks:
                raise AlgebraFormatError(f"duplicate mult block {i}", no)
            blocks[i] = {}
            current = i
        elif head.startswith("v") and _ENTRY.match(line):
            if current is None:
                raise AlgebraFormatError("product entry outside a mult block", no)
            m = _ENTRY.match(line)
            j, a = int(m.group(1)), int(m.group(2))
            if (j, a) in blocks[current]:
                raise AlgebraFormatError(f"duplicate entry v{j} * b{a}", no)
            prod: dict[int, Fraction] = {}
            rhs = m.group(3).strip()
            if rhs != "0":
                for term in re.split(r"\s+\+\s+", rhs):
                    tm = _TERM.match(term.strip())
                    if not tm:
                        raise AlgebraFormatError(f"bad term {term!r}", no)
                    c = int(tm.group(2))
                    prod[c] = prod.get(c, Fraction(0)) + _fraction(tm.group(1), no)
            blocks[current][j, a] = {c: x for c, x in prod.items() if x}
        else:
            raise AlgebraFormatError(f"unknown directive {head!r}", no)
    if not seen_header:
        raise AlgebraFormatError("empty input")
    for key, val in (("d", d), ("q", q), ("h", h)):
        if val is None:
            raise AlgebraFormatError(f"missing directive {key!r}")
    top = len(h) - 1
    mult = {}
    for i, entries in blocks.items():
        if not 1 <= i < top:
            raise AlgebraFormatError(f"mult block {i} outside 1..{top - 1}")
        if i >= len(h) - 1:
            raise AlgebraFormatError(f"mult block {i} needs h[{i + 1}]")
        table = [[{} for _ in range(h[i])] for _ in range(q)]
        for (j, a), prod in entries.items():
            if not (0 <= j < q and 0 <= a < h[i]):
                raise AlgebraFormatError(f"entry v{j} * b{a} out of range in mult {i}")
            table[j][a] = prod
        mult[i] = tuple(tuple(row) for row in table)
    try:
        return FormAlgebra(d, q, tuple(h), mult, QQ, name=name)
    except MalformedAlgebraError as exc:
        raise AlgebraFormatError(str(exc)) from None


def serialize_algebra(a: FormAlgebra) -> str:
    a = a.canonical()
    out = [HEADER, f"d {a.d}", f"q {a.q}", "h " + " ".join(map(str, a.h))]
    for i in range(1, a.top):
        out.append(f"mult {i}")
        for j, row in enumerate(a.mult[i]):
            for al, prod in enumerate(row):
                if prod:
                    terms = " + ".join(f"{format_scalar(x)}*b{c}" for c, x in sorted(prod.items()))
                    out.append(f"v{j} * b{al} -> {terms}")
    return "\n".join(out) + "\n"


def load_algebra(path) -> FormAlgebra:
    path = Path(path)
    return parse_algebra(path.read_text(encoding="utf-8"), name=path.name)


def parse_basis(text: str) -> ExactMatrix:
    """Whitespace-separated exact rows, one basis vector of W per line."""
    rows = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append([_fraction(x, no) for x in line.split()])
    if not rows:
        raise AlgebraFormatError("basis file has no rows")
    if len({len(r) for r in rows}) != 1:
        raise AlgebraFormatError("basis rows have different lengths")
    return ExactMatrix.from_rows(rows, QQ)


_BIV_TERM = re.compile(r"([+-])?\s*(?:(\d+(?:/\d+)?)\*)?e(\d+)\^e(\d+)")


def parse_bivector(text: str, q: int) -> Bivector:
    """Literal such as ``e0^e1+e2^e3`` or ``1/2*e0^e2-3*e1^e3``."""
    s = text.replace(" ", "")
    pos = 0
    terms: dict = {}
    while pos < len(s):
        m = _BIV_TERM.match(s, pos)
        if not m or (pos > 0 and not m.group(1)):
            raise ValueError(f"cannot parse bivector {text!r} at offset {pos}")
        coeff = Fraction(m.group(2) or 1) * (-1 if m.group(1) == "-" else 1)
        i, j = int(m.group(3)), int(m.group(4))
        if not (0 <= i < q and 0 <= j < q) or i == j:
            raise ValueError(f"bad indices e{i}^e{j} for q = {q}")
        terms[i, j] = terms.get((i, j), 0) + coeff
        pos = m.end()
    if not terms:
        raise ValueError("empty bivector literal")
    return Bivector.from_terms(q, terms)


def format_bivector(v: Bivector) -> str:
    parts = []
    for (i, j), c in v.to_exterior().items():
        c_txt = format_scalar(c)
        sign = "-" if c_txt.startswith("-") else "+"
        mag = c_txt.lstrip("-")
        body = f"e{i}^e{j}" if mag == "1" else f"{mag}*e{i}^e{j}"
        parts.append((sign, body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += sign + body
    return text
