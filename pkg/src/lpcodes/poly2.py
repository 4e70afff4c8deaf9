"""Polynomials over F2 packed into Python ints (bit i = coefficient of x^i)."""

from __future__ import annotations

import re

from .errors import ParseError


def deg(f: int) -> int:
    """Degree of ``f``; the zero polynomial has degree -1."""
    return f.bit_length() - 1


def mul(a: int, b: int) -> int:
    if a.bit_count() > b.bit_count():
        a, b = b, a
    out = 0
    while a:
        low = a & -a
        out ^= b << (low.bit_length() - 1)
        a ^= low
    return out


def divmod2(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    db = deg(b)
    q = 0
    while a and deg(a) >= db:
        shift = deg(a) - db
        q |= 1 << shift
        a ^= b << shift
    return q, a


def mod(a: int, b: int) -> int:
    return divmod2(a, b)[1]


def gcd(a: int, b: int) -> int:
    while b:
        a, b = b, mod(a, b)
    return a


def mulmod(a: int, b: int, m: int) -> int:
    return mod(mul(a, b), m)


def powmod(a: int, e: int, m: int) -> int:
    result = 1 if deg(m) > 0 else 0
    a = mod(a, m)
    while e:
        if e & 1:
            result = mulmod(result, a, m)
        a = mulmod(a, a, m)
        e >>= 1
    return result


def frobenius_power(d: int, m: int) -> int:
    """x^(2^d) mod m, by repeated squaring of x."""
    r = mod(0b10, m)
    for _ in range(d):
        r = mulmod(r, r, m)
    return r


def is_irreducible(f: int) -> bool:
    """Rabin-style test: gcd(f, x^(2^i) - x) = 1 for 1 <= i <= deg f / 2."""
    n = deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    if not f & 1:  # divisible by x
        return False
    xi = 0b10
    for _ in range(1, n // 2 + 1):
        xi = mulmod(xi, xi, f)
        if gcd(f, xi ^ 0b10) != 1:
            return False
    return True


def derivative(f: int) -> int:
    # only odd powers survive: d/dx x^k = k x^(k-1)
    out = 0
    k = 1
    f >>= 1
    while f:
        if f & 1 and k & 1:
            out |= 1 << (k - 1)
        f >>= 1
        k += 1
    return out


def to_str(f: int, var: str = "x") -> str:
    if f == 0:
        return "0"
    terms = []
    for i in range(f.bit_length()):
        if f >> i & 1:
            terms.append("1" if i == 0 else var if i == 1 else f"{var}^{i}")
    return "+".join(terms)


_TERM = re.compile(r"\s*(?:(1)|([a-zA-Z]\w*)(?:\^(\d+))?)\s*$")


def parse(text: str, var: str = "x") -> int:
    """Parse ``1+x+x^3`` style text; repeated terms cancel mod 2."""
    out = 0
    stripped = text.strip()
    if stripped == "0":
        return 0
    for term in stripped.split("+"):
        match = _TERM.match(term)
        if not match or (match.group(2) and match.group(2) != var):
            raise ParseError(f"bad polynomial term {term.strip()!r}", token=term.strip())
        out ^= 1 if match.group(1) else 1 << int(match.group(3) or 1)
    return out
