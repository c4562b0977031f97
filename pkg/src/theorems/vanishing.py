"""
Theorem families that predict vanishing coefficients, and their verification.

Families:
  ab     Andrews-Bressoud:  (q^r,q^{2k-r};q^{2k}) / (q^{k-r},q^{k+r};q^{2k}), zero class k n + r(k-r+1)/2
  plus   (q^{r-tk},q^{mk-(r-tk)};q^{mk}) / (q^r,q^{mk-r};q^{mk}),            zero class k n - r s
  minus  same numerator over (-q^r,-q^{mk-r};q^{mk}), k odd
  ag     Alladi-Gordon: (q^r,q^{mk-r};q^{mk}) / (+-q^s,+-q^{mk-s};q^{mk}),  zero class n = r r' (mod k)

Reports index the positive-exponent quotient, i.e. the product spec without
its monomial prefactor. When r - tk < 0 the plus/minus numerator is rewritten
as -q^{-(tk-r)} (q^{mk-(tk-r)},q^{tk-r};q^{mk}), which moves the zero class
from -rs to tk - r - rs (mod k).
"""
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, List, Optional, Tuple, Union

from src.core.products import PochhammerFactor, ProductSpec, expand_product
from src.core.series import Coefficient
from src.utils.console import info, progress, warn
from src.utils.errors import Degenerate, InvalidParams

SIGNS = ("plus", "minus")
FAMILIES = ("ab", "plus", "minus", "ag")


@dataclass(frozen=True)
class ResidueClass:
    modulus: int
    residue: int

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidParams(f"residue class modulus must be >= 1, got {self.modulus}")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def __contains__(self, e: int) -> bool:
        return e % self.modulus == self.residue

    def __str__(self):
        return f"{self.modulus}n+{self.residue}"

    def to_dict(self) -> dict:
        return {"mod": self.modulus, "res": self.residue}


def _pair(a: int, b: int, modulus: int, sign: int = 1) -> Tuple[PochhammerFactor, PochhammerFactor]:
    return PochhammerFactor(a, modulus, sign), PochhammerFactor(b, modulus, sign)


@dataclass(frozen=True)
class AndrewsBressoudParams:
    k: int
    r: int

    def __post_init__(self):
        if self.k < 2:
            raise InvalidParams(f"k must be >= 2, got k={self.k}")
        if not 1 <= self.r < self.k:
            raise InvalidParams(f"r must satisfy 1 <= r < k, got r={self.r}, k={self.k}")
        if gcd(self.r, self.k) != 1:
            raise InvalidParams(f"gcd(r,k) != 1 for r={self.r}, k={self.k}")
        if (self.r + self.k) % 2 == 0:
            raise InvalidParams(f"r and k must have opposite parity, got r={self.r}, k={self.k}")

    @property
    def family(self) -> str:
        return "ab"

    def build_spec(self, normalize: bool = True) -> ProductSpec:
        k, r = self.k, self.r
        return ProductSpec(numerator=_pair(r, 2 * k - r, 2 * k), denominator=_pair(k - r, k + r, 2 * k))

    def zero_class(self) -> ResidueClass:
        # k - r is odd, so r(k - r + 1) is even.
        return ResidueClass(self.k, self.r * (self.k - self.r + 1) // 2)

    def describe(self) -> dict:
        return {"k": self.k, "r": self.r}


@dataclass(frozen=True)
class McLaughlinParams:
    k: int
    m: int
    s: int
    t: int
    sign: str = "plus"

    def __post_init__(self):
        if self.sign not in SIGNS:
            raise InvalidParams(f"sign must be plus or minus, got {self.sign!r}")
        if self.k < 2 or self.m < 2:
            raise InvalidParams(f"k and m must be > 1, got k={self.k}, m={self.m}")
        if not 0 <= self.s < self.k:
            raise InvalidParams(f"s must satisfy 0 <= s < k, got s={self.s}, k={self.k}")
        if not 1 <= self.t < self.m:
            raise InvalidParams(f"t must satisfy 1 <= t < m, got t={self.t}, m={self.m}")
        if gcd(self.r, self.k) != 1:
            raise InvalidParams(f"gcd(r,k) != 1 for r={self.r}, k={self.k}")
        if self.sign == "minus" and self.k % 2 == 0:
            raise InvalidParams(f"k must be odd for the minus family, got k={self.k}")

    @property
    def family(self) -> str:
        return self.sign

    @property
    def r(self) -> int:
        return self.s * self.m + self.t

    @property
    def modulus(self) -> int:
        return self.m * self.k

    @property
    def gap(self) -> int:
        """r - tk, the offset of the first numerator symbol."""
        return self.r - self.t * self.k

    def _check_gap(self):
        # r = tk would need k | r, which gcd(r, k) = 1 with k > 1 excludes; kept as a guard.
        if self.gap == 0:
            raise Degenerate(f"r - tk = 0 for r={self.r}, t={self.t}, k={self.k}: numerator contains (q^0;q^{self.modulus})")

    def build_spec(self, normalize: bool = True) -> ProductSpec:
        """
        The product of the theorem. With normalize=False the numerator is kept as
        displayed, (q^{r-tk},q^{mk-(r-tk)};q^{mk}), even when r - tk < 0.
        """
        self._check_gap()
        M, a = self.modulus, self.gap
        denominator = _pair(self.r, M - self.r, M, -1 if self.sign == "minus" else 1)
        if a > 0 or not normalize:
            return ProductSpec(numerator=_pair(a, M - a, M), denominator=denominator)
        b = -a
        return ProductSpec(numerator=_pair(M - b, b, M), denominator=denominator,
                           prefactor_sign=-1, prefactor_exponent=-b)

    def zero_class(self) -> ResidueClass:
        self._check_gap()
        if self.gap > 0:
            return ResidueClass(self.k, -self.r * self.s)
        return ResidueClass(self.k, self.t * self.k - self.r - self.r * self.s)

    def describe(self) -> dict:
        return {"k": self.k, "m": self.m, "s": self.s, "t": self.t, "sign": self.sign}


@dataclass(frozen=True)
class AlladiGordonParams:
    m: int
    k: int
    s: int
    sign: str = "plus"

    def __post_init__(self):
        if self.sign not in SIGNS:
            raise InvalidParams(f"sign must be plus or minus, got {self.sign!r}")
        if not 1 < self.m < self.k:
            raise InvalidParams(f"m and k must satisfy 1 < m < k, got m={self.m}, k={self.k}")
        if not 1 <= self.s < self.modulus:
            raise InvalidParams(f"s must satisfy 1 <= s < mk, got s={self.s}, mk={self.modulus}")
        if gcd(self.s, self.modulus) != 1:
            raise InvalidParams(f"gcd(s,km) != 1 for s={self.s}, km={self.modulus}")
        if self.sign == "minus" and self.k % 2 == 0:
            raise InvalidParams(f"k must be odd for the minus family, got k={self.k}")
        # ceil(r*/mk) lies in [1, k-1] for 1 <= s < mk, so this never fires in range.
        if self._ceiling() % self.k == 0:
            warn(f"Alladi-Gordon tuple m={self.m}, k={self.k}, s={self.s} has ceil(r*/mk) = 0 (mod k); rejected")
            raise InvalidParams(f"r' = ceil(r*/mk) reduces to 0 mod k for s={self.s}; no representative in [1,k)")

    @property
    def family(self) -> str:
        return "ag"

    @property
    def modulus(self) -> int:
        return self.m * self.k

    @property
    def r_star(self) -> int:
        return (self.k - 1) * self.s

    @property
    def r(self) -> int:
        return self.r_star % self.modulus

    def _ceiling(self) -> int:
        return -(-self.r_star // self.modulus)

    @property
    def r_prime(self) -> int:
        return self._ceiling() % self.k

    def build_spec(self, normalize: bool = True) -> ProductSpec:
        M = self.modulus
        return ProductSpec(numerator=_pair(self.r, M - self.r, M),
                           denominator=_pair(self.s, M - self.s, M, -1 if self.sign == "minus" else 1))

    def zero_class(self) -> ResidueClass:
        return ResidueClass(self.k, self.r * self.r_prime)

    def describe(self) -> dict:
        return {"m": self.m, "k": self.k, "s": self.s, "sign": self.sign}


TheoremInstance = Union[AndrewsBressoudParams, McLaughlinParams, AlladiGordonParams]


def build_spec(params: TheoremInstance, normalize: bool = True) -> ProductSpec:
    return params.build_spec(normalize=normalize)


def zero_class(params: TheoremInstance) -> ResidueClass:
    return params.zero_class()


@dataclass
class VanishingReport:
    family: str
    params: dict
    r: int
    order: int
    zero_class: ResidueClass
    product: ProductSpec
    violations: List[Tuple[int, Coefficient]] = field(default_factory=list)
    observed_zero_classes: List[ResidueClass] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return not self.violations

    def summary_line(self, preview: int = 3) -> str:
        params = " ".join(f"{k}={v}" for k, v in self.params.items())
        status = "verified" if self.verified else f"{len(self.violations)} violation(s)"
        line = f"[{self.family}] {params} r={self.r} class {self.zero_class} order {self.order}: {status}"
        if self.violations:
            shown = ", ".join(f"c_{e}={c}" for e, c in self.violations[:preview])
            line += f" (first: {shown})"
        return line

    def to_dict(self, preview: int = 3) -> dict:
        return {
            "family": self.family,
            "params": dict(self.params),
            "r": self.r,
            "order": self.order,
            "product": str(self.product.normalized()),
            "prefactor": {"sign": self.product.prefactor_sign, "exponent": self.product.prefactor_exponent},
            "zero_class": self.zero_class.to_dict(),
            "verified": self.verified,
            "violation_count": len(self.violations),
            "violations": [[e, str(c)] for e, c in self.violations[:preview]],
            "observed_zero_classes": [c.to_dict() for c in self.observed_zero_classes],
        }


def observed_zero_classes(series, modulus: int, min_samples: int = 10) -> List[ResidueClass]:
    """Residue classes whose every known coefficient is zero, given enough exponents to judge."""
    found = []
    for residue in range(modulus):
        sample = series.sift(modulus, residue)
        if len(sample) >= min_samples and all(c == 0 for _, c in sample):
            found.append(ResidueClass(modulus, residue))
    return found


def verify_vanishing(params: TheoremInstance, order: int, min_class_samples: int = 10) -> VanishingReport:
    if order < 1:
        raise InvalidParams(f"order must be >= 1, got {order}")
    spec = params.build_spec()
    predicted = params.zero_class()
    series = expand_product(spec.normalized(), order)
    violations = [(e, c) for e, c in series.sift(predicted.modulus, predicted.residue) if c != 0]
    return VanishingReport(
        family=params.family,
        params=params.describe(),
        r=params.r,
        order=order,
        zero_class=predicted,
        product=spec,
        violations=violations,
        observed_zero_classes=observed_zero_classes(series, predicted.modulus, min_class_samples),
    )


# --- cross-theorem overlaps ----------------------------------------------------

def alladi_gordon_counterpart(params: McLaughlinParams) -> Optional[AlladiGordonParams]:
    """
    The Alladi-Gordon instance with the same product, when there is one.

    Taking s_AG = r gives r_AG = (k-1) r = -(r - tk) (mod mk) because r = t (mod m),
    so both numerators are (q^{|r-tk|}, q^{mk-|r-tk|}; q^{mk}).
    """
    if not params.m < params.k or gcd(params.r, params.modulus) != 1:
        return None
    return AlladiGordonParams(m=params.m, k=params.k, s=params.r, sign=params.sign)


def andrews_bressoud_counterpart(params: McLaughlinParams) -> Optional[AndrewsBressoudParams]:
    """The Andrews-Bressoud instance whose product equals the normalized plus-family product, if any."""
    if params.sign != "plus" or params.modulus % 2:
        return None
    half = params.modulus // 2
    try:
        candidate = AndrewsBressoudParams(k=half, r=abs(half - params.r))
    except InvalidParams:
        return None
    if candidate.build_spec().signature() != params.build_spec().normalized().signature():
        return None
    return candidate


# --- scans ---------------------------------------------------------------------

@dataclass
class ScanResult:
    family: str
    order: int
    reports: List[VanishingReport] = field(default_factory=list)
    skipped: List[Tuple[dict, str]] = field(default_factory=list)

    @property
    def violated(self) -> List[VanishingReport]:
        return [r for r in self.reports if not r.verified]

    @property
    def all_verified(self) -> bool:
        return not self.violated

    def summary_line(self) -> str:
        return (f"{len(self.reports)} tuples checked, {len(self.skipped)} skipped, "
                f"{len(self.violated)} violated (family {self.family}, order {self.order})")


def _grid(family: str, k_range: Iterable[int], m_range: Iterable[int], sign: str) -> List[Tuple[type, dict]]:
    ks, ms = list(k_range), list(m_range)
    grid = []
    if family == "ab":
        for k in ks:
            for r in range(1, k):
                grid.append((AndrewsBressoudParams, {"k": k, "r": r}))
    elif family in SIGNS:
        for k in ks:
            for m in ms:
                for s in range(k):
                    for t in range(1, m):
                        grid.append((McLaughlinParams, {"k": k, "m": m, "s": s, "t": t, "sign": family}))
    elif family == "ag":
        for k in ks:
            for m in ms:
                for s in range(1, m * k):
                    grid.append((AlladiGordonParams, {"m": m, "k": k, "s": s, "sign": sign}))
    else:
        raise InvalidParams(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    return grid


def _reason_key(reason: str) -> str:
    """The constraint part of an InvalidParams message, without the offending values."""
    return reason.split(" for ")[0].split(", got")[0]


def _verify_job(job) -> VanishingReport:
    params, order, min_class_samples = job
    return verify_vanishing(params, order, min_class_samples)


def scan(k_range: Iterable[int], m_range: Iterable[int], order: int, family: str, sign: str = "plus",
         workers: int = 1, show_progress: bool = False, min_class_samples: int = 10) -> ScanResult:
    """
    Verify every valid tuple of the grid, in the grid's lexicographic order.

    Invalid tuples are skipped and recorded with the violated constraint.
    """
    if order < 1:
        raise InvalidParams(f"order must be >= 1, got {order}")
    result = ScanResult(family=family, order=order)
    instances = []
    for cls, kwargs in _grid(family, k_range, m_range, sign):
        try:
            instances.append(cls(**kwargs))
        except InvalidParams as e:
            result.skipped.append((kwargs, str(e)))

    if result.skipped:
        reasons = Counter(_reason_key(reason) for _, reason in result.skipped)
        info(f"Skipped {len(result.skipped)} tuples: " + "; ".join(f"{r} x{n}" for r, n in sorted(reasons.items())))

    jobs = [(p, order, min_class_samples) for p in instances]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = pool.map(_verify_job, jobs, chunksize=max(1, len(jobs) // (4 * workers)))
            result.reports = list(progress(reports, desc=f"Scanning {family}", total=len(jobs), enabled=show_progress))
    else:
        result.reports = [_verify_job(job) for job in progress(jobs, desc=f"Scanning {family}", enabled=show_progress)]
    return result


def params_from_dict(family: str, values: dict) -> TheoremInstance:
    """Rebuild a theorem instance from a report's params mapping."""
    if family == "ab":
        return AndrewsBressoudParams(k=values["k"], r=values["r"])
    if family in SIGNS:
        return McLaughlinParams(k=values["k"], m=values["m"], s=values["s"], t=values["t"], sign=family)
    if family == "ag":
        return AlladiGordonParams(m=values["m"], k=values["k"], s=values["s"], sign=values.get("sign", "plus"))
    raise InvalidParams(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
