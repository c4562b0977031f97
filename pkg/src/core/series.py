"""
Truncated Laurent series with exact integer coefficients.

A series is a valuation v, a dense block of coefficients for the exponents
v, v+1, ..., order-1, and an exclusive truncation order. Coefficients below
the valuation are zero by construction; coefficients at or past the order are
unknown and are never read as zero.

Blocks are numpy object arrays of Python ints, so every coefficient is an
arbitrary-precision integer while stride updates stay vectorised.
"""
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

import numpy as np

from src.utils.errors import InvalidSpec, NotAUnit, OutOfRange

Coefficient = int


def zeros_block(length: int) -> np.ndarray:
    """Object array of Python int zeros (np.zeros(dtype=object) yields int 0 entries)."""
    return np.zeros(max(length, 0), dtype=object)


def _frozen(block: np.ndarray) -> np.ndarray:
    block.flags.writeable = False
    return block


class LaurentSeries:
    __slots__ = ("valuation", "_coeffs")

    def __init__(self, valuation: int, coeffs: Iterable[int]):
        block = zeros_block(0)
        values = [int(c) for c in coeffs]
        if values:
            block = np.empty(len(values), dtype=object)
            block[:] = values
        self.valuation = int(valuation)
        self._coeffs = _frozen(block)

    @classmethod
    def _from_block(cls, valuation: int, block: np.ndarray) -> "LaurentSeries":
        series = cls.__new__(cls)
        series.valuation = int(valuation)
        series._coeffs = _frozen(block)
        return series

    # --- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, order: int, valuation: int = 0) -> "LaurentSeries":
        valuation = min(valuation, order)
        return cls._from_block(valuation, zeros_block(order - valuation))

    @classmethod
    def one(cls, order: int) -> "LaurentSeries":
        return cls.monomial(1, 0, order)

    @classmethod
    def monomial(cls, coefficient: int, exponent: int, order: int) -> "LaurentSeries":
        """coefficient * q^exponent known below `order`; an order at or below the exponent gives an empty window."""
        valuation = min(exponent, order)
        block = zeros_block(order - valuation)
        if exponent < order:
            block[exponent - valuation] = int(coefficient)
        return cls._from_block(valuation, block)

    @classmethod
    def from_terms(cls, terms: Dict[int, int], order: int, valuation: Optional[int] = None) -> "LaurentSeries":
        """Build from an {exponent: coefficient} map; terms at or past `order` are dropped."""
        if valuation is None:
            valuation = min([e for e in terms if e < order], default=0)
        valuation = min(valuation, order)
        block = zeros_block(order - valuation)
        for e, c in terms.items():
            if e < valuation:
                raise OutOfRange(f"term q^{e} lies below the requested valuation {valuation}")
            if e < order:
                block[e - valuation] += int(c)
        return cls._from_block(valuation, block)

    # --- window -----------------------------------------------------------

    @property
    def order(self) -> int:
        return self.valuation + len(self._coeffs)

    def __len__(self):
        return len(self._coeffs)

    @property
    def block(self) -> np.ndarray:
        """Read-only view of the coefficient block."""
        return self._coeffs

    def coefficients(self) -> List[Coefficient]:
        return [int(c) for c in self._coeffs]

    def items(self) -> Iterator[Tuple[int, Coefficient]]:
        for i, c in enumerate(self._coeffs):
            yield self.valuation + i, int(c)

    def coeff(self, e: int) -> Coefficient:
        if e < self.valuation:
            return 0
        if e >= self.order:
            raise OutOfRange(f"coefficient of q^{e} is unknown: series is truncated at order {self.order}")
        return int(self._coeffs[e - self.valuation])

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients for exponents lo..hi-1 as a fresh block, zero-padded below the valuation."""
        if hi > self.order:
            raise OutOfRange(f"window up to q^{hi - 1} exceeds truncation order {self.order}")
        out = zeros_block(hi - lo)
        start = max(lo, self.valuation)
        if start < hi:
            out[start - lo:] = self._coeffs[start - self.valuation:hi - self.valuation]
        return out

    def sift(self, modulus: int, residue: int) -> List[Tuple[int, Coefficient]]:
        """(exponent, coefficient) for every known exponent congruent to residue mod modulus."""
        first = self.valuation + (residue - self.valuation) % modulus
        return [(e, int(self._coeffs[e - self.valuation])) for e in range(first, self.order, modulus)]

    def is_zero(self) -> bool:
        return not np.flatnonzero(self._coeffs).size

    # --- arithmetic -------------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        return add(self, other)

    def __neg__(self) -> "LaurentSeries":
        return negate(self)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return add(self, negate(other))

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        return mul(self, other)

    def invert(self) -> "LaurentSeries":
        return invert(self)

    def shift(self, sign: int, exponent: int) -> "LaurentSeries":
        return monomial_mul(self, sign, exponent)

    # --- comparison -------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return first_discrepancy(self, other) is None

    __hash__ = None

    def __repr__(self):
        return f"LaurentSeries(valuation={self.valuation}, order={self.order}, {self})"

    def __str__(self):
        terms = []
        for e, c in self.items():
            if c == 0:
                continue
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                power = "q" if e == 1 else f"q^{e}"
                body = power if mag == 1 else f"{mag}*{power}"
            terms.append(("-" if c < 0 else "+", body))
        text = ""
        for i, (sign, body) in enumerate(terms):
            if i == 0:
                text = f"-{body}" if sign == "-" else body
            else:
                text += f" {sign} {body}"
        tail = f"O(q^{self.order})"
        return f"{text} + {tail}" if text else tail


def add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    lo = min(a.valuation, b.valuation)
    hi = min(a.order, b.order)
    return LaurentSeries._from_block(lo, a.window(lo, hi) + b.window(lo, hi))


def negate(a: LaurentSeries) -> LaurentSeries:
    return LaurentSeries._from_block(a.valuation, -a.block)


def mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Cauchy product; the known window is as long as the shorter operand's."""
    n = min(len(a), len(b))
    out = zeros_block(n)
    if np.flatnonzero(a.block[:n]).size > np.flatnonzero(b.block[:n]).size:
        a, b = b, a
    for j in np.flatnonzero(a.block[:n]):
        out[j:] += a.block[j] * b.block[:n - j]
    return LaurentSeries._from_block(a.valuation + b.valuation, out)


def invert(a: LaurentSeries) -> LaurentSeries:
    """Inverse of a series whose coefficient at the valuation is +1 or -1."""
    n = len(a)
    if n == 0:
        return LaurentSeries.zero(-a.valuation, valuation=-a.valuation)
    unit = int(a.block[0])
    if unit not in (1, -1):
        raise NotAUnit(f"lowest coefficient (at q^{a.valuation}) is {unit}, not +1 or -1")
    out = zeros_block(n)
    # acc[i] holds sum_{j<i} out[j] * a[i-j] for the indices not yet solved.
    acc = zeros_block(n)
    for i in range(n):
        value = unit * ((1 if i == 0 else 0) - acc[i])
        if value:
            out[i] = value
            acc[i + 1:] += value * a.block[1:n - i]
    return LaurentSeries._from_block(-a.valuation, out)


def monomial_mul(a: LaurentSeries, sign: int, exponent: int) -> LaurentSeries:
    """Multiply by sign * q^exponent: shifts valuation and order, keeps the window length."""
    if sign not in (1, -1):
        raise InvalidSpec(f"sign must be +1 or -1, got {sign}")
    block = a.block.copy() if sign == 1 else -a.block
    return LaurentSeries._from_block(a.valuation + exponent, block)


def coeff_at(a: LaurentSeries, e: int) -> Coefficient:
    return a.coeff(e)


def first_discrepancy(a: LaurentSeries, b: LaurentSeries) -> Optional[Tuple[int, Coefficient, Coefficient]]:
    """Lowest exponent on the shared known window where a and b differ, with both coefficients."""
    lo = min(a.valuation, b.valuation)
    hi = min(a.order, b.order)
    if lo >= hi:
        return None
    wa, wb = a.window(lo, hi), b.window(lo, hi)
    diff = np.flatnonzero(wa != wb)
    if not diff.size:
        return None
    i = int(diff[0])
    return lo + i, int(wa[i]), int(wb[i])
