"""Exact arithmetic kernel.

Integers are Python ``int`` and rationals are :class:`fractions.Fraction`;
both already give arbitrary precision, canonical zero and reduced fractions.
This module adds the two ring types the determinant engine needs:

* :class:`LaurentPoly`, an element of Z[v, 1/v] stored densely as a lowest
  exponent plus a tuple of integer coefficients, and
* :class:`XPoly`, a polynomial in ``x`` whose coefficients are Laurent
  polynomials.

Both are immutable and support ``+ - *``, integer powers and exact division
(needed by fraction-free elimination).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from qdet.errors import NonExactDivision, ZeroPoint

__all__ = [
    "LaurentPoly",
    "XPoly",
    "exact_divide",
    "lp_eval",
    "lp_exact_div",
    "lp_inflate",
    "lp_mul",
    "xp_arith",
]

# Product sizes (len(a) * len(b)) below this use the schoolbook loop.
_SCHOOLBOOK_LIMIT = 256


# ---------------------------------------------------------------------------
# coefficient-list kernels (index i holds the coefficient of v^i)
# ---------------------------------------------------------------------------

def _max_bits(coeffs: Sequence[int]) -> int:
    return max(abs(c) for c in coeffs).bit_length()


def _bias(width: int, length: int) -> int:
    # sum_{i < length} 2^(width-1) * 2^(width*i)
    return (1 << (width - 1)) * (((1 << (width * length)) - 1) // ((1 << width) - 1))


def _pack(coeffs: Sequence[int], nbytes: int) -> int:
    half = 1 << (8 * nbytes - 1)
    raw = b"".join((c + half).to_bytes(nbytes, "little") for c in coeffs)
    return int.from_bytes(raw, "little") - _bias(8 * nbytes, len(coeffs))


def _unpack(value: int, length: int, nbytes: int) -> list[int]:
    """Inverse of :func:`_pack`; raises OverflowError if a digit is out of range."""
    half = 1 << (8 * nbytes - 1)
    raw = (value + _bias(8 * nbytes, length)).to_bytes(length * nbytes, "little")
    return [
        int.from_bytes(raw[i:i + nbytes], "little") - half
        for i in range(0, length * nbytes, nbytes)
    ]


def _mul_schoolbook(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _mul_kronecker(a: Sequence[int], b: Sequence[int]) -> list[int]:
    # Evaluate at 2^w, multiply as big integers, read the digits back.
    bits = _max_bits(a) + _max_bits(b) + min(len(a), len(b)).bit_length() + 1
    nbytes = bits // 8 + 1
    prod = _pack(a, nbytes) * _pack(b, nbytes)
    return _unpack(prod, len(a) + len(b) - 1, nbytes)


def _mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if len(a) == 1:
        c = a[0]
        return [c * y for y in b]
    if len(b) == 1:
        c = b[0]
        return [c * x for x in a]
    if len(a) * len(b) <= _SCHOOLBOOK_LIMIT:
        return _mul_schoolbook(a, b)
    return _mul_kronecker(a, b)


def _long_div(f: Sequence[int], g: Sequence[int]) -> list[int]:
    """Classical division of f by g; raises unless the remainder is zero."""
    rem = list(f)
    lg = len(g)
    lead = g[-1]
    quot = [0] * (len(f) - lg + 1)
    for i in range(len(quot) - 1, -1, -1):
        c = rem[i + lg - 1]
        if c:
            qc, r = divmod(c, lead)
            if r:
                raise NonExactDivision("leading coefficient does not divide")
            quot[i] = qc
            for j, gj in enumerate(g):
                rem[i + j] -= qc * gj
    if any(rem[:lg - 1]):
        raise NonExactDivision("nonzero remainder")
    return quot


def _div_exact(f: Sequence[int], g: Sequence[int]) -> list[int]:
    """Exact quotient of polynomials with nonzero constant terms."""
    if len(g) > len(f):
        raise NonExactDivision("divisor has larger degree")
    if len(g) == 1:
        d = g[0]
        out = []
        for c in f:
            qc, r = divmod(c, d)
            if r:
                raise NonExactDivision(f"{c} is not divisible by {d}")
            out.append(qc)
        return out
    lq = len(f) - len(g) + 1
    if lq * len(g) <= _SCHOOLBOOK_LIMIT:
        return _long_div(f, g)
    # Fast path: divide the packed integers. If g | f then G | F, so a
    # nonzero integer remainder already proves non-exactness. A wrong digit
    # width can only garble the quotient, which the multiply-back catches.
    bits = _max_bits(f) + lq.bit_length() + 8
    for nbytes in (bits // 8 + 1, bits // 4 + 2):
        quot, r = divmod(_pack(f, nbytes), _pack(g, nbytes))
        if r:
            raise NonExactDivision("nonzero remainder")
        try:
            h = _unpack(quot, lq, nbytes)
        except OverflowError:
            continue
        if h[-1] and _mul(g, h) == list(f):
            return h
    return _long_div(f, g)


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(
    r"^(?P<sign>[+-]?)(?:(?P<coef>\d+)(?:\*(?P<var1>[a-z])(?:\^(?P<exp1>-?\d+))?)?"
    r"|(?P<var2>[a-z])(?:\^(?P<exp2>-?\d+))?)$"
)


class LaurentPoly:
    """Element of Z[v, 1/v] in canonical dense form.

    ``coeffs[i]`` is the coefficient of ``v**(low + i)``. The zero polynomial
    has ``coeffs == ()`` and ``low == 0``; otherwise the first and last
    coefficients are nonzero.
    """

    __slots__ = ("low", "coeffs", "_hash")

    def __init__(self, coeffs: Iterable[int] = (), low: int = 0):
        cs = [int(c) for c in coeffs]
        start = 0
        while start < len(cs) and cs[start] == 0:
            start += 1
        end = len(cs)
        while end > start and cs[end - 1] == 0:
            end -= 1
        if start == end:
            self.low, self.coeffs = 0, ()
        else:
            self.low, self.coeffs = low + start, tuple(cs[start:end])
        self._hash = None

    @classmethod
    def _raw(cls, low: int, coeffs: list[int]) -> LaurentPoly:
        # Canonicalizes by trimming only; avoids the int() pass of __init__.
        start = 0
        n = len(coeffs)
        while start < n and coeffs[start] == 0:
            start += 1
        end = n
        while end > start and coeffs[end - 1] == 0:
            end -= 1
        obj = object.__new__(cls)
        if start == end:
            obj.low, obj.coeffs = 0, ()
        else:
            obj.low, obj.coeffs = low + start, tuple(coeffs[start:end])
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c: int) -> LaurentPoly:
        return cls((c,))

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> LaurentPoly:
        return cls((coeff,), exponent)

    @classmethod
    def coerce(cls, value) -> LaurentPoly:
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, int):
            return cls((value,))
        if isinstance(value, Fraction) and value.denominator == 1:
            return cls((value.numerator,))
        raise TypeError(f"cannot coerce {value!r} to LaurentPoly")

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def high(self) -> int:
        """Largest exponent present (the polynomial must be nonzero)."""
        return self.low + len(self.coeffs) - 1

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def terms(self) -> list[tuple[int, int]]:
        """(exponent, coefficient) pairs with nonzero coefficient, ascending."""
        return [(self.low + i, c) for i, c in enumerate(self.coeffs) if c]

    def coeff(self, exponent: int) -> int:
        i = exponent - self.low
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.low == other.low and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.coeffs
            return self.low == 0 and self.coeffs == (other,)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.low, self.coeffs))
        return self._hash

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly.coerce(other)
            except TypeError:
                return NotImplemented
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        low = min(self.low, other.low)
        high = max(self.high, other.high)
        out = [0] * (high - low + 1)
        off = self.low - low
        for i, c in enumerate(self.coeffs):
            out[off + i] = c
        off = other.low - low
        for i, c in enumerate(other.coeffs):
            out[off + i] += c
        return LaurentPoly._raw(low, out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        obj = object.__new__(LaurentPoly)
        obj.low, obj.coeffs, obj._hash = self.low, tuple(-c for c in self.coeffs), None
        return obj

    def __pos__(self) -> LaurentPoly:
        return self

    def __sub__(self, other) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> LaurentPoly:
        return LaurentPoly.coerce(other) + (-self)

    def __mul__(self, other) -> LaurentPoly:
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly()
            return LaurentPoly._raw(self.low, [c * other for c in self.coeffs])
        if not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly.coerce(other)
            except TypeError:
                return NotImplemented
        if not self.coeffs or not other.coeffs:
            return LaurentPoly()
        return LaurentPoly._raw(self.low + other.low, _mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if len(self.coeffs) != 1 or self.coeffs[0] not in (1, -1):
                raise NonExactDivision("only unit monomials have negative powers")
            return LaurentPoly.monomial(self.low * k, self.coeffs[0] ** (-k))
        result = LaurentPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by v**k."""
        if not self.coeffs:
            return self
        obj = object.__new__(LaurentPoly)
        obj.low, obj.coeffs, obj._hash = self.low + k, self.coeffs, None
        return obj

    def exact_div(self, other) -> LaurentPoly:
        """Return h with ``other * h == self``; raise NonExactDivision otherwise."""
        other = LaurentPoly.coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if not self.coeffs:
            return self
        # Both coefficient tuples start with a nonzero term, so this is
        # already the valuation-normalized ordinary polynomial division.
        quot = _div_exact(self.coeffs, other.coeffs)
        return LaurentPoly._raw(self.low - other.low, quot)

    # -- maps --------------------------------------------------------------

    def eval(self, point) -> Fraction:
        """Exact value at a rational point."""
        point = Fraction(point)
        if not self.coeffs:
            return Fraction(0)
        if point == 0:
            if self.low < 0:
                raise ZeroPoint("negative powers are undefined at 0")
            return Fraction(self.coeff(0))
        p, r = point.numerator, point.denominator
        # Horner on the homogenized form: sum c_i p^i r^(L-1-i)
        acc = 0
        rpow = 1
        for c in reversed(self.coeffs):
            acc = acc * p + c * rpow
            rpow *= r
        value = Fraction(acc, r ** (len(self.coeffs) - 1))
        return value * point ** self.low

    __call__ = eval

    def inflate(self, n: int) -> LaurentPoly:
        """Substitute v -> v**n."""
        if n < 1:
            raise ValueError("inflation factor must be positive")
        if not self.coeffs or n == 1:
            return self
        out = [0] * ((len(self.coeffs) - 1) * n + 1)
        for i, c in enumerate(self.coeffs):
            out[i * n] = c
        return LaurentPoly._raw(self.low * n, out)

    def deflate(self, n: int) -> LaurentPoly:
        """Inverse of :meth:`inflate`; every exponent must be a multiple of n."""
        if any(e % n for e, _ in self.terms()):
            raise ValueError(f"exponents are not all multiples of {n}")
        if not self.coeffs:
            return self
        return LaurentPoly._raw(self.low // n, list(self.coeffs[::n]))

    # -- text and JSON -----------------------------------------------------

    def to_str(self, var: str = "q") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in reversed(self.terms()):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                mono = var if e == 1 else f"{var}^{e}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_str()!r})"

    @classmethod
    def parse(cls, text: str, var: str | None = None) -> LaurentPoly:
        """Parse the signed monomial-list form produced by :meth:`to_str`."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial text")
        pieces = [p for p in re.split(r"(?<!\^)(?=[+-])", s) if p]
        acc: dict[int, int] = {}
        for piece in pieces:
            m = _TERM_RE.match(piece)
            if not m:
                raise ValueError(f"bad term {piece!r} in {text!r}")
            sign = -1 if m["sign"] == "-" else 1
            if m["var2"]:
                name, coef, exp = m["var2"], 1, m["exp2"]
            else:
                name, coef, exp = m["var1"], int(m["coef"]), m["exp1"]
            if name is None:
                e = 0
            else:
                if var is not None and name != var:
                    raise ValueError(f"unexpected variable {name!r} in {text!r}")
                e = 1 if exp is None else int(exp)
            acc[e] = acc.get(e, 0) + sign * coef
        if not acc:
            return cls()
        low = min(acc)
        out = [0] * (max(acc) - low + 1)
        for e, c in acc.items():
            out[e - low] = c
        return cls(out, low)

    def to_json(self) -> dict:
        return {"low": self.low, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> LaurentPoly:
        return cls([int(c) for c in obj["coeffs"]], int(obj["low"]))


# ---------------------------------------------------------------------------
# polynomials in x over Laurent polynomials
# ---------------------------------------------------------------------------

_LP_ZERO = LaurentPoly()


class XPoly:
    """Polynomial in x with Laurent coefficients; ``coeffs[i]`` multiplies x**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [LaurentPoly.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> XPoly:
        return cls((0, 1))

    @classmethod
    def coerce(cls, value) -> XPoly:
        if isinstance(value, XPoly):
            return value
        return cls((value,))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree in x; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> LaurentPoly:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _LP_ZERO

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, XPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, LaurentPoly)):
            return self.coeffs == XPoly.coerce(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> XPoly:
        if not isinstance(other, XPoly):
            if not isinstance(other, (int, LaurentPoly)):
                return NotImplemented
            other = XPoly.coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return XPoly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __neg__(self) -> XPoly:
        return XPoly([-c for c in self.coeffs])

    def __sub__(self, other) -> XPoly:
        if not isinstance(other, XPoly):
            if not isinstance(other, (int, LaurentPoly)):
                return NotImplemented
            other = XPoly.coerce(other)
        return self + (-other)

    def __rsub__(self, other) -> XPoly:
        return XPoly.coerce(other) + (-self)

    def __mul__(self, other) -> XPoly:
        if isinstance(other, (int, LaurentPoly)):
            return XPoly([c * other for c in self.coeffs])
        if not isinstance(other, XPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return XPoly()
        out = [_LP_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        out[i + j] = out[i + j] + x * y
        return XPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> XPoly:
        result = XPoly((1,))
        for _ in range(k):
            result = result * self
        return result

    def exact_div(self, other) -> XPoly:
        other = XPoly.coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero x-polynomial")
        if not self.coeffs:
            return self
        g = other.coeffs
        if len(g) == 1:
            return XPoly([c.exact_div(g[0]) for c in self.coeffs])
        if len(g) > len(self.coeffs):
            raise NonExactDivision("divisor has larger x-degree")
        rem = list(self.coeffs)
        dg = len(g) - 1
        quot = [_LP_ZERO] * (len(rem) - dg)
        for i in range(len(quot) - 1, -1, -1):
            c = rem[i + dg]
            if c:
                qc = c.exact_div(g[-1])
                quot[i] = qc
                for j, gj in enumerate(g):
                    rem[i + j] = rem[i + j] - qc * gj
        if any(rem[:dg]):
            raise NonExactDivision("nonzero remainder in x")
        return XPoly(quot)

    def eval_x(self, x0) -> LaurentPoly:
        """Substitute a Laurent polynomial (or int) for x."""
        x0 = LaurentPoly.coerce(x0)
        acc = _LP_ZERO
        for c in reversed(self.coeffs):
            acc = acc * x0 + c
        return acc

    def to_str(self, var: str = "q") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                body = c.to_str(var)
            else:
                xs = "x" if i == 1 else f"x^{i}"
                if c == 1:
                    body = xs
                elif c == -1:
                    body = "-" + xs
                elif len(c.terms()) == 1:
                    body = f"{c.to_str(var)}*{xs}"
                else:
                    body = f"({c.to_str(var)})*{xs}"
            if parts and body.startswith("-"):
                parts.append("- " + body[1:])
            elif parts:
                parts.append("+ " + body)
            else:
                parts.append(body)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"XPoly({self.to_str()!r})"

    def to_json(self) -> dict:
        return {"coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> XPoly:
        return cls([LaurentPoly.from_json(c) for c in obj["coeffs"]])


# ---------------------------------------------------------------------------
# functional API
# ---------------------------------------------------------------------------

def lp_mul(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f * g


def lp_exact_div(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f.exact_div(g)


def lp_eval(f: LaurentPoly, q0) -> Fraction:
    return f.eval(q0)


def lp_inflate(f: LaurentPoly, n: int) -> LaurentPoly:
    return f.inflate(n)


def xp_arith(f: XPoly, g: XPoly | None, op: str) -> XPoly:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "neg":
        return -f
    raise ValueError(f"unknown XPoly operation {op!r}")


def exact_divide(a, b):
    """Exact quotient in whichever ring ``a`` and ``b`` live in.

    ints divide only when the remainder is zero; Fractions divide freely;
    Laurent and x-polynomials use their ``exact_div``.
    """
    if isinstance(b, (XPoly, LaurentPoly)):
        return type(b).coerce(a).exact_div(b)
    if isinstance(a, (XPoly, LaurentPoly)):
        return a.exact_div(b)
    if isinstance(a, Fraction) or isinstance(b, Fraction):
        return Fraction(a) / b
    q, r = divmod(a, b)
    if r:
        raise NonExactDivision(f"{a} is not divisible by {b}")
    return q
