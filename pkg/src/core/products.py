"""
q-Pochhammer products, the Jacobi triple product theta sum, and the Lambert
series side of the specialized 1psi1 summation.

(x; q^M)_inf = prod_{i>=0} (1 - x q^{iM}). Expansions multiply or divide the
coefficient block by one binomial (1 - s q^p) at a time, which is an O(N)
stride update, so no general series inversion is needed for a product.
"""
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.core.series import LaurentSeries, first_discrepancy, monomial_mul, zeros_block
from src.utils.errors import InvalidSpec


def _power(e: int) -> str:
    return "q" if e == 1 else f"q^{e}"


@dataclass(frozen=True)
class PochhammerFactor:
    """(arg_sign * q^offset; q^modulus)_inf. Offsets <= 0 are Laurent factors and only allowed in numerators."""
    offset: int
    modulus: int
    arg_sign: int = 1

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidSpec(f"modulus must be >= 1, got {self.modulus}")
        if self.arg_sign not in (1, -1):
            raise InvalidSpec(f"arg_sign must be +1 or -1, got {self.arg_sign}")

    @property
    def argument(self) -> str:
        return ("-" if self.arg_sign < 0 else "") + _power(self.offset)

    def __str__(self):
        return f"({self.argument};{_power(self.modulus)})"


@dataclass(frozen=True)
class ProductSpec:
    """prefactor_sign * q^prefactor_exponent * prod(numerator) / prod(denominator)."""
    numerator: Tuple[PochhammerFactor, ...] = ()
    denominator: Tuple[PochhammerFactor, ...] = ()
    prefactor_sign: int = 1
    prefactor_exponent: int = 0

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(self.numerator))
        object.__setattr__(self, "denominator", tuple(self.denominator))
        if self.prefactor_sign not in (1, -1):
            raise InvalidSpec(f"prefactor sign must be +1 or -1, got {self.prefactor_sign}")
        for f in self.denominator:
            if f.offset < 1:
                raise InvalidSpec(f"denominator factor {f} must have offset >= 1 so its constant term is 1")

    def normalized(self) -> "ProductSpec":
        """The quotient alone, with the monomial prefactor dropped."""
        return replace(self, prefactor_sign=1, prefactor_exponent=0)

    def signature(self):
        """Comparison key that ignores the order of factors within numerator and denominator."""
        key = lambda f: (f.modulus, f.offset, f.arg_sign)
        return (self.prefactor_sign, self.prefactor_exponent,
                tuple(sorted(self.numerator, key=key)), tuple(sorted(self.denominator, key=key)))

    def __str__(self):
        quotient = _render_factors(self.numerator)
        if self.denominator:
            quotient = f"{quotient}/{_render_factors(self.denominator)}"
        if self.prefactor_sign == 1 and self.prefactor_exponent == 0:
            return quotient
        sign = "-" if self.prefactor_sign < 0 else ""
        return f"{sign}q^{self.prefactor_exponent}*{quotient}"


def _render_factors(factors) -> str:
    """Group consecutive factors sharing a modulus, the way (q^3,q^5;q^8) abbreviates two symbols."""
    if not factors:
        return "1"
    groups: List[Tuple[int, List[str]]] = []
    for f in factors:
        if groups and groups[-1][0] == f.modulus:
            groups[-1][1].append(f.argument)
        else:
            groups.append((f.modulus, [f.argument]))
    return "".join(f"({','.join(args)};{_power(m)})" for m, args in groups)


@dataclass(frozen=True)
class BilateralSpecialization:
    """
    1psi1 with base q -> q^{mk}, a -> q^{-tk}, b -> q^{mk-tk}, z -> q^r.

    r is taken as given (callers pass r = s*m + t); only 1 <= r < mk is enforced.
    """
    m: int
    k: int
    t: int
    r: int

    def __post_init__(self):
        if self.m < 2 or self.k < 2:
            raise InvalidSpec(f"m and k must be > 1, got m={self.m}, k={self.k}")
        if not 1 <= self.t < self.m:
            raise InvalidSpec(f"t must satisfy 1 <= t < m, got t={self.t}, m={self.m}")
        if not 1 <= self.r < self.m * self.k:
            raise InvalidSpec(f"r must satisfy 1 <= r < mk, got r={self.r}, mk={self.m * self.k}")

    @property
    def modulus(self) -> int:
        return self.m * self.k

    @property
    def tk(self) -> int:
        return self.t * self.k


@dataclass
class IdentityCheck:
    """Outcome of comparing two independently expanded sides on their shared window."""
    name: str
    order: int
    holds: bool
    exponent: Optional[int] = None
    left: Optional[int] = None
    right: Optional[int] = None
    params: Dict[str, int] = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    def describe(self) -> str:
        if self.holds:
            return f"{self.name}: pass (order {self.order})"
        return (f"{self.name}: FAIL at q^{self.exponent}: "
                f"left={self.left}, right={self.right} (order {self.order})")

    def to_dict(self) -> dict:
        return {
            "identity": self.name,
            "params": dict(self.params),
            "order": self.order,
            "holds": self.holds,
            "exponent": self.exponent,
            "left": None if self.left is None else str(self.left),
            "right": None if self.right is None else str(self.right),
        }


# --- block updates ----------------------------------------------------------

def _times_binomial(block: np.ndarray, sign: int, p: int):
    """block *= (1 - sign*q^p) in place, p >= 1."""
    n = len(block)
    if p < n:
        block[p:] -= sign * block[:n - p]


def _over_binomial(block: np.ndarray, sign: int, p: int):
    """block /= (1 - sign*q^p) in place, p >= 1: c[i] += sign*c[i-p] in ascending strides."""
    n = len(block)
    for j in range(p, n, p):
        end = min(j + p, n)
        block[j:end] += sign * block[j - p:end - p]


def _peel(f: PochhammerFactor) -> Tuple[int, int, List[int], int]:
    """
    Rewrite a factor as scale * q^shift * prod_{p in turned} (1 - s*q^p) * (s*q^start; q^M)_inf.

    Binomials with a non-positive exponent e are turned around:
    1 - s*q^e = -s*q^e * (1 - s*q^{-e}), and 1 - s*q^0 is the constant 1 - s.
    `start` is the first positive exponent of the factor.
    """
    scale, shift = 1, 0
    turned = []
    e = f.offset
    while e <= 0:
        if e == 0:
            scale *= 1 - f.arg_sign
        else:
            scale *= -f.arg_sign
            shift += e
            turned.append(-e)
        e += f.modulus
    return scale, shift, turned, e


def _unit_block(length: int) -> np.ndarray:
    block = zeros_block(length)
    if length > 0:
        block[0] = 1
    return block


# --- expansions --------------------------------------------------------------

def expand_factor(f: PochhammerFactor, order: int) -> LaurentSeries:
    """Truncated expansion of one q-Pochhammer symbol (valuation 0 when the offset is positive)."""
    return expand_product(ProductSpec(numerator=(f,)), order)


def expand_product(spec: ProductSpec, order: int) -> LaurentSeries:
    """Exact expansion of the product spec below `order`, prefactor included."""
    if order < spec.prefactor_exponent:
        raise InvalidSpec(f"order {order} lies below the prefactor exponent {spec.prefactor_exponent}")
    scale, shift = spec.prefactor_sign, spec.prefactor_exponent
    peeled = []
    for f in spec.numerator:
        s, e, turned, start = _peel(f)
        scale *= s
        shift += e
        peeled.append((f, turned, start))

    length = order - shift
    if length <= 0 or scale == 0:
        return LaurentSeries.zero(order, valuation=shift)

    block = _unit_block(length)
    for f, turned, start in peeled:
        for p in turned:
            _times_binomial(block, f.arg_sign, p)
        for p in range(start, length, f.modulus):
            _times_binomial(block, f.arg_sign, p)
    for f in spec.denominator:
        for p in range(f.offset, length, f.modulus):
            _over_binomial(block, f.arg_sign, p)
    if scale != 1:
        block *= scale
    return LaurentSeries._from_block(shift, block)


def jtp_theta(M: int, a: int, order: int) -> LaurentSeries:
    """
    sum over all integers j of (-1)^j q^{M j(j+1)/2 - a j}, truncated below `order`.

    Equals (q^a, q^{M-a}, q^M; q^M)_inf by the Jacobi triple product.
    """
    if M < 1:
        raise InvalidSpec(f"M must be >= 1, got {M}")

    def exponent(j: int) -> int:
        return M * j * (j + 1) // 2 - a * j

    terms: Dict[int, int] = {}

    def collect(j: int):
        e = exponent(j)
        terms[e] = terms.get(e, 0) + (-1 if j % 2 else 1)

    # The exponent is convex in j with its minimum at j0 or j0 + 1.
    j0 = (2 * a - M) // (2 * M)
    j = j0
    while j <= j0 + 1 or exponent(j) < order:
        if exponent(j) < order:
            collect(j)
        j += 1
    j = j0 - 1
    while exponent(j) < order:
        collect(j)
        j -= 1
    valuation = min([0] + [e for e in terms])
    return LaurentSeries.from_terms(terms, order, valuation=valuation)


def jtp_product_spec(M: int, a: int) -> ProductSpec:
    return ProductSpec(numerator=(PochhammerFactor(a, M), PochhammerFactor(M - a, M), PochhammerFactor(M, M)))


def verify_jtp(M: int, a: int, order: int) -> IdentityCheck:
    theta = jtp_theta(M, a, order)
    product = expand_product(jtp_product_spec(M, a), order)
    return _compare("jtp", order, theta, product, {"M": M, "a": a})


def _geometric_add(block: np.ndarray, sign: int, start: int, step: int):
    """block += sign * q^start / (1 - q^step), by stride accumulation."""
    if start < len(block):
        block[start::step] += sign


def lambert_series(p: BilateralSpecialization, order: int) -> LaurentSeries:
    """
    sum_{n>=0} q^{rn}/(1 - q^{nmk-tk}) - sum_{n>=1} q^{nmk+tk-rn}/(1 - q^{nmk+tk}).

    The n = 0 term 1/(1 - q^{-tk}) is taken as -q^{tk}/(1 - q^{tk}).
    """
    M, tk, r = p.modulus, p.tk, p.r
    block = zeros_block(order)
    _geometric_add(block, -1, tk, tk)
    n = 1
    while r * n < order:
        _geometric_add(block, 1, r * n, n * M - tk)
        n += 1
    n = 1
    while n * M + tk - r * n < order:
        _geometric_add(block, -1, n * M + tk - r * n, n * M + tk)
        n += 1
    return LaurentSeries._from_block(0, block)


def onepsi1_product_spec(p: BilateralSpecialization) -> ProductSpec:
    """Product side of the specialized 1psi1 identity."""
    M, tk, r = p.modulus, p.tk, p.r
    return ProductSpec(
        numerator=(PochhammerFactor(M, M), PochhammerFactor(M, M),
                   PochhammerFactor(r - tk, M), PochhammerFactor(M - (r - tk), M)),
        denominator=(PochhammerFactor(tk, M), PochhammerFactor(M - tk, M),
                     PochhammerFactor(r, M), PochhammerFactor(M - r, M)),
    )


def verify_1psi1(p: BilateralSpecialization, order: int, product: Optional[ProductSpec] = None) -> IdentityCheck:
    """
    Check -q^{-tk} * (Lambert series) against the product side below `order`.

    `product` replaces the product side, which is how negative controls are run.
    """
    left = monomial_mul(lambert_series(p, order + p.tk), -1, -p.tk)
    right = expand_product(product or onepsi1_product_spec(p), order)
    return _compare("1psi1", order, left, right, {"m": p.m, "k": p.k, "t": p.t, "r": p.r})


def cancellation_check(p: BilateralSpecialization, s: int, order: int) -> IdentityCheck:
    """
    Check that the terms of the Lambert series landing on exponents kn - rs cancel:

        sum_{n>=1} q^{r(nk-s)}/(1 - q^{(nk-s)mk-tk})
          - sum_{n>=0} q^{(nk+s)mk+tk-r(nk+s)}/(1 - q^{(nk+s)mk+tk}) = 0.

    For s = 0 the split with the first sum from n = 0 and the second from n = 1
    is checked as well; the two n = 0 terms, -q^{tk}/(1-q^{tk}) and
    q^{tk}/(1-q^{tk}), cancel each other.
    """
    if not 0 <= s < p.k:
        raise InvalidSpec(f"s must satisfy 0 <= s < k, got s={s}, k={p.k}")
    M, k, tk, r = p.modulus, p.k, p.tk, p.r

    def first_sum(block: np.ndarray, n_start: int):
        n = n_start
        while r * (n * k - s) < order:
            if n * k - s == 0:
                _geometric_add(block, -1, tk, tk)
            else:
                _geometric_add(block, 1, r * (n * k - s), (n * k - s) * M - tk)
            n += 1

    def second_sum(block: np.ndarray, n_start: int):
        n = n_start
        while (n * k + s) * (M - r) + tk < order:
            _geometric_add(block, -1, (n * k + s) * (M - r) + tk, (n * k + s) * M + tk)
            n += 1

    params = {"m": p.m, "k": k, "s": s, "t": p.t, "r": r}
    block = zeros_block(order)
    first_sum(block, 1)
    second_sum(block, 0)
    check = _first_nonzero("lambert-cancel", order, block, params)
    if check.holds and s == 0:
        block = zeros_block(order)
        first_sum(block, 0)
        second_sum(block, 1)
        check = _first_nonzero("lambert-cancel", order, block, params)
    return check


def _first_nonzero(name: str, order: int, block: np.ndarray, params: dict) -> IdentityCheck:
    nonzero = np.flatnonzero(block)
    if not nonzero.size:
        return IdentityCheck(name, order, True, params=params)
    e = int(nonzero[0])
    return IdentityCheck(name, order, False, exponent=e, left=int(block[e]), right=0, params=params)


def _compare(name: str, order: int, left: LaurentSeries, right: LaurentSeries, params: dict) -> IdentityCheck:
    found = first_discrepancy(left, right)
    if found is None:
        return IdentityCheck(name, order, True, params=params)
    e, lc, rc = found
    return IdentityCheck(name, order, False, exponent=e, left=lc, right=rc, params=params)
