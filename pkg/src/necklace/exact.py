"""Gaussian rationals: text encoding and exact square roots.

Arithmetic uses sympy's ``QQ_I`` domain.  The text form is ``p/q`` for
real numbers and ``a+bi`` otherwise, with unit imaginary coefficients
written as a bare ``i``:

>>> fmt(QQ_I(1, -1)), fmt(QQ_I(0, 1)), fmt(QQ_I(QQ(1, 2), QQ(3, 4)))
('1-i', 'i', '1/2+3/4i')
>>> parse(" 1/2 + 3/4 i ") == QQ_I(QQ(1, 2), QQ(3, 4))
True
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from sympy.polys.domains import QQ, QQ_I

from .errors import DomainError

__all__ = ["QQ", "QQ_I", "fmt", "fmt_point", "gaussian_sqrt", "normalize", "parse", "parse_point"]


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _fmt_rat(q) -> str:
    f = _frac(q)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def fmt(z) -> str:
    z = QQ_I.convert(z)
    re_, im = z.x, z.y
    if im == 0:
        return _fmt_rat(re_)
    a = abs(im)
    tail = "i" if a == 1 else f"{_fmt_rat(a)}i"
    if re_ == 0:
        return tail if im > 0 else "-" + tail
    return f"{_fmt_rat(re_)}{'+' if im > 0 else '-'}{tail}"


def _rat(text: str):
    f = Fraction(text)
    return QQ(f.numerator, f.denominator)


def parse(text) -> object:
    """Gaussian rational from ``"p/q"``, ``"p/q+r/s i"``, ``"-i"``, ... (whitespace ignored)."""
    if isinstance(text, int):
        return QQ_I(text)
    s = re.sub(r"\s+", "", str(text)).replace("*", "")
    try:
        if not s.endswith("i"):
            return QQ_I(_rat(s), 0)
        body = s[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        real, imag = (body[:cut], body[cut:]) if cut > 0 else ("", body)
        coef = {"": QQ(1), "+": QQ(1), "-": QQ(-1)}.get(imag)
        if coef is None:
            coef = _rat(imag)
        return QQ_I(_rat(real) if real else QQ(0), coef)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a Gaussian rational: {text!r}") from exc


def normalize(vec) -> list:
    """Scale a nonzero vector so its first nonzero entry is 1."""
    vec = [QQ_I.convert(v) for v in vec]
    for v in vec:
        if v:
            return [x / v for x in vec]
    raise DomainError("zero vector has no projective class")


def fmt_point(vec) -> str:
    return "[" + ":".join(fmt(v) for v in vec) + "]"


def parse_point(text: str) -> list:
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise DomainError(f"projective point must look like [a:b:...], got {text!r}")
    return [parse(part) for part in s[1:-1].split(":")]


def _rational_sqrt(q):
    f = _frac(q)
    if f < 0:
        return None
    a, b = math.isqrt(f.numerator), math.isqrt(f.denominator)
    if a * a != f.numerator or b * b != f.denominator:
        return None
    return QQ(a, b)


def gaussian_sqrt(z):
    """A Gaussian-rational square root of ``z``, or None if there is none."""
    z = QQ_I.convert(z)
    x, y = z.x, z.y
    if y == 0:
        r = _rational_sqrt(x)
        if r is not None:
            return QQ_I(r, 0)
        r = _rational_sqrt(-x)
        return None if r is None else QQ_I(0, r)
    modulus = _rational_sqrt(x * x + y * y)
    if modulus is None:
        return None
    u = _rational_sqrt((x + modulus) / 2)
    if u is None or u == 0:
        return None
    return QQ_I(u, y / (2 * u))


def sort_key(vec) -> tuple:
    return tuple((_frac(QQ_I.convert(v).x), _frac(QQ_I.convert(v).y)) for v in vec)
