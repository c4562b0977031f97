"""
Partitions whose parts are restricted to residue classes modulo a fixed modulus.

Two families of counts back the partition forms of the vanishing theorems:

  p_{m,k,r}(n)           parts = 0, +-r (mod mk), repeats allowed
  p^e / p^o_{m,k,s,t}(n) parts = +-r (mod mk) repeatable and +-(r-tk) (mod mk) distinct,
                         split by the parity of the total number of parts

Counting is a knapsack-style dynamic program over the allowed part sizes;
enumeration is an exhaustive search used as an oracle and for listings.
"""
import re
from dataclasses import dataclass
from itertools import groupby
from math import gcd, isqrt
from typing import FrozenSet, Iterable, Iterator, List, Optional, Tuple

from src.utils.errors import InvalidParams, SpecSyntaxError, TooLarge

DEFAULT_ENUMERATION_CAP = 1_000_000


@dataclass(frozen=True)
class RestrictedPartitionSpec:
    modulus: int
    repeatable_residues: FrozenSet[int] = frozenset()
    distinct_residues: FrozenSet[int] = frozenset()
    max_part: Optional[int] = None

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidParams(f"modulus must be >= 1, got {self.modulus}")
        repeatable = frozenset(r % self.modulus for r in self.repeatable_residues)
        distinct = frozenset(r % self.modulus for r in self.distinct_residues)
        if repeatable & distinct:
            raise InvalidParams(f"repeatable and distinct residues overlap: {sorted(repeatable & distinct)}")
        if 0 in distinct:
            raise InvalidParams("residue 0 may only be repeatable")
        object.__setattr__(self, "repeatable_residues", repeatable)
        object.__setattr__(self, "distinct_residues", distinct)

    def allowed_parts(self, n: int) -> List[Tuple[int, bool]]:
        """(part, is_distinct) for every allowed part size <= n, ascending."""
        top = n if self.max_part is None else min(n, self.max_part)
        parts = []
        for a in range(1, top + 1):
            residue = a % self.modulus
            if residue in self.repeatable_residues:
                parts.append((a, False))
            elif residue in self.distinct_residues:
                parts.append((a, True))
        return parts


@dataclass(frozen=True)
class ParityCountPair:
    even_count: int
    odd_count: int

    @property
    def difference(self) -> int:
        return self.even_count - self.odd_count

    @property
    def total(self) -> int:
        return self.even_count + self.odd_count


@dataclass(frozen=True)
class Partition:
    """Parts in ascending order."""
    parts: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(sorted(self.parts)))

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def num_parts(self) -> int:
        return len(self.parts)

    def multiplicities(self) -> List[Tuple[int, int]]:
        return [(part, len(list(group))) for part, group in groupby(self.parts)]

    def __str__(self):
        return "+".join(str(p) if e == 1 else f"{p}^{e}" for p, e in self.multiplicities())

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Inverse of str(); accepts '17^6' and '17^{6}'."""
        text = text.replace(" ", "")
        if not text:
            return cls(())
        parts = []
        for token in text.split("+"):
            match = re.fullmatch(r"(\d+)(?:\^\{?(\d+)\}?)?", token)
            if not match or int(match.group(1)) < 1:
                raise SpecSyntaxError(f"cannot parse partition term {token!r} in {text!r}")
            parts += [int(match.group(1))] * int(match.group(2) or 1)
        return cls(tuple(parts))


# --- spec builders ----------------------------------------------------------

def _theorem_r(m: int, k: int, s: int, t: int) -> int:
    if k < 2 or m < 2:
        raise InvalidParams(f"k and m must be > 1, got k={k}, m={m}")
    if not 0 <= s < k:
        raise InvalidParams(f"s must satisfy 0 <= s < k, got s={s}, k={k}")
    if not 1 <= t < m:
        raise InvalidParams(f"t must satisfy 1 <= t < m, got t={t}, m={m}")
    r = s * m + t
    if gcd(r, k) != 1:
        raise InvalidParams(f"gcd(r,k) != 1 for r={r}, k={k}")
    return r


def signed_sum_spec(m: int, k: int, s: int, t: int) -> RestrictedPartitionSpec:
    """Parts = 0, +-r (mod mk)."""
    r = _theorem_r(m, k, s, t)
    return RestrictedPartitionSpec(modulus=m * k, repeatable_residues=frozenset({0, r, -r}))


def parity_split_spec(m: int, k: int, s: int, t: int) -> RestrictedPartitionSpec:
    """Repeatable parts = +-r (mod mk), distinct parts = +-(r - tk) (mod mk); k odd."""
    r = _theorem_r(m, k, s, t)
    if k % 2 == 0:
        raise InvalidParams(f"k must be odd for the parity split, got k={k}")
    gap = r - t * k
    return RestrictedPartitionSpec(modulus=m * k, repeatable_residues=frozenset({r, -r}),
                                   distinct_residues=frozenset({gap, -gap}))


# --- counting ---------------------------------------------------------------

def restricted_counts(spec: RestrictedPartitionSpec, n_max: int) -> List[int]:
    """counts[n] for 0 <= n <= n_max."""
    if n_max < 0:
        return []
    counts = [1] + [0] * n_max
    for a, distinct in spec.allowed_parts(n_max):
        if distinct:
            for i in range(n_max, a - 1, -1):
                counts[i] += counts[i - a]
        else:
            for i in range(a, n_max + 1):
                counts[i] += counts[i - a]
    return counts


def count_restricted(spec: RestrictedPartitionSpec, n: int) -> int:
    if n < 0:
        raise InvalidParams(f"n must be >= 0, got {n}")
    return restricted_counts(spec, n)[n]


def parity_counts(spec: RestrictedPartitionSpec, n_max: int) -> Tuple[List[int], List[int]]:
    """(even[n], odd[n]) for 0 <= n <= n_max, by parity of the number of parts."""
    even = [1] + [0] * n_max
    odd = [0] * (n_max + 1)
    for a, distinct in spec.allowed_parts(n_max):
        # Each added part flips parity: descending order uses a part at most once,
        # ascending order lets it repeat.
        sizes = range(n_max, a - 1, -1) if distinct else range(a, n_max + 1)
        for i in sizes:
            even[i], odd[i] = even[i] + odd[i - a], odd[i] + even[i - a]
    return even, odd


def count_parity_split(m: int, k: int, s: int, t: int, n: int) -> ParityCountPair:
    if n < 0:
        raise InvalidParams(f"n must be >= 0, got {n}")
    even, odd = parity_counts(parity_split_spec(m, k, s, t), n)
    return ParityCountPair(even[n], odd[n])


# --- signed sum -------------------------------------------------------------

@dataclass(frozen=True)
class SignedSumTerm:
    j: int
    argument: int
    count: int

    @property
    def signed_count(self) -> int:
        return -self.count if self.j % 2 else self.count


@dataclass(frozen=True)
class SignedSumResult:
    m: int
    k: int
    s: int
    t: int
    n: int
    terms: Tuple[SignedSumTerm, ...]

    @property
    def total(self) -> int:
        return sum(term.signed_count for term in self.terms)


def _j_window(total: int, M: int, b: int) -> Iterator[int]:
    """
    Integers j with total - M j(j+1)/2 - b j >= 0, i.e. M j^2 + (M + 2b) j - 2 total <= 0.

    Bounds come from the roots of the quadratic, widened by one and filtered exactly.
    """
    lin = M + 2 * b
    disc = lin * lin + 8 * M * total
    if disc < 0:
        return iter(())
    root = isqrt(disc)
    lo = (-lin - root) // (2 * M) - 1
    hi = (-lin + root) // (2 * M) + 1
    return (j for j in range(lo, hi + 1) if total - M * j * (j + 1) // 2 - b * j >= 0)


def signed_sum(m: int, k: int, s: int, t: int, n: int) -> SignedSumResult:
    """
    sum_j (-1)^j p_{m,k,r}(nk - rs - mk j(j+1)/2 - j(tk - r)) over j with a nonnegative argument.
    """
    spec = signed_sum_spec(m, k, s, t)
    r, M = s * m + t, m * k
    total, b = n * k - r * s, t * k - r
    window = list(_j_window(total, M, b))
    arguments = [total - M * j * (j + 1) // 2 - b * j for j in window]
    counts = restricted_counts(spec, max(arguments, default=-1))
    terms = tuple(SignedSumTerm(j, a, counts[a]) for j, a in zip(window, arguments))
    return SignedSumResult(m, k, s, t, n, terms)


# --- enumeration ------------------------------------------------------------

def _search(parts: List[Tuple[int, bool]], index: int, remaining: int, chosen: List[int]) -> Iterator[Tuple[int, ...]]:
    if remaining == 0:
        yield tuple(chosen)
        return
    for i in range(index, len(parts)):
        a, distinct = parts[i]
        if a > remaining:
            break
        copies = 1 if distinct else remaining // a
        for c in range(1, copies + 1):
            chosen.extend([a] * c)
            yield from _search(parts, i + 1, remaining - a * c, chosen)
            del chosen[-c:]


def enumerate_restricted(spec: RestrictedPartitionSpec, n: int, cap: int = DEFAULT_ENUMERATION_CAP,
                         parity: Optional[str] = None) -> List[Partition]:
    """
    Every partition of n allowed by `spec`, ascending-lexicographic.

    parity = "even" or "odd" keeps only partitions with that many parts.
    """
    if n < 0:
        raise InvalidParams(f"n must be >= 0, got {n}")
    if parity not in (None, "even", "odd"):
        raise InvalidParams(f"parity must be even or odd, got {parity!r}")
    expected = count_restricted(spec, n)
    if expected > cap:
        raise TooLarge(f"{expected} partitions of {n} exceed the enumeration cap {cap}")
    found = [Partition(p) for p in _search(spec.allowed_parts(n), 0, n, [])]
    if parity is not None:
        want = 0 if parity == "even" else 1
        found = [p for p in found if p.num_parts % 2 == want]
    return sorted(found, key=lambda p: p.parts)


# --- parity identity ----------------------------------------------------------

@dataclass
class ParityIdentityReport:
    m: int
    k: int
    s: int
    t: int
    n_max: int
    residue: int
    checked: int
    violations: List[Tuple[int, ParityCountPair]]

    @property
    def verified(self) -> bool:
        return not self.violations

    def summary_line(self) -> str:
        status = "verified" if self.verified else f"{len(self.violations)} violation(s)"
        return (f"p^e = p^o on {self.k}n+{self.residue} for n <= {self.n_max} "
                f"(m={self.m} k={self.k} s={self.s} t={self.t}): {self.checked} values, {status}")


def parity_zero_residue(m: int, k: int, s: int, t: int) -> int:
    """-rs (mod k) when r - tk > 0, and -r(s+1) (mod k) when r - tk < 0."""
    r = s * m + t
    return (-r * s) % k if r - t * k > 0 else (-r * (s + 1)) % k


def verify_parity_identity(m: int, k: int, s: int, t: int, n_max: int) -> ParityIdentityReport:
    spec = parity_split_spec(m, k, s, t)
    residue = parity_zero_residue(m, k, s, t)
    even, odd = parity_counts(spec, max(n_max, 0))
    violations, checked = [], 0
    for n in range(residue, n_max + 1, k):
        checked += 1
        if even[n] != odd[n]:
            violations.append((n, ParityCountPair(even[n], odd[n])))
    return ParityIdentityReport(m, k, s, t, n_max, residue, checked, violations)


def parse_residues(text: str) -> FrozenSet[int]:
    """'0,1,29' -> {0, 1, 29}; empty string -> empty set."""
    text = text.strip()
    if not text:
        return frozenset()
    try:
        return frozenset(int(x) for x in text.split(","))
    except ValueError:
        raise SpecSyntaxError(f"residue list must be comma-separated integers, got {text!r}")


def partitions_to_json(partitions: Iterable[Partition]) -> List[List[List[int]]]:
    return [[[p, e] for p, e in part.multiplicities()] for part in partitions]
