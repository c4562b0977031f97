"""Named products with a known vanishing progression, each tied to the theorem instance that yields it."""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.core.products import PochhammerFactor, ProductSpec
from src.theorems.vanishing import (
    AndrewsBressoudParams,
    McLaughlinParams,
    ResidueClass,
    TheoremInstance,
    VanishingReport,
    verify_vanishing,
)
from src.utils.errors import InvalidParams


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    params: TheoremInstance
    numerator: Tuple[int, ...]
    denominator: Tuple[int, ...]
    modulus: int
    zero_class: ResidueClass
    denominator_sign: int = 1

    @property
    def displayed(self) -> ProductSpec:
        return ProductSpec(
            numerator=tuple(PochhammerFactor(a, self.modulus) for a in self.numerator),
            denominator=tuple(PochhammerFactor(a, self.modulus, self.denominator_sign) for a in self.denominator),
        )


def _mcl(k, m, s, t, sign="plus"):
    return McLaughlinParams(k=k, m=m, s=s, t=t, sign=sign)


def _entries() -> List[CatalogEntry]:
    entries = [
        CatalogEntry("rs-F", "F(q); c_{4n+3} = 0", AndrewsBressoudParams(4, 3), (3, 5), (1, 7), 8, ResidueClass(4, 3)),
        CatalogEntry("rs-1/F", "1/F(q); d_{4n+2} = 0", AndrewsBressoudParams(4, 1), (1, 7), (3, 5), 8, ResidueClass(4, 2)),
        CatalogEntry("rs-G", "G(q); a_{6n+5} = 0", AndrewsBressoudParams(6, 5), (5, 7), (1, 11), 12, ResidueClass(6, 5)),
        CatalogEntry("rs-1/G", "1/G(q); b_{6n+3} = 0", AndrewsBressoudParams(6, 1), (1, 11), (5, 7), 12, ResidueClass(6, 3)),
        # mk = 30, r = t = 1, s = 0; r - k < 0 shifts each class away from kn.
        CatalogEntry("mk30-a", "k=3, r-k=-2", _mcl(3, 10, 0, 1), (2, 28), (1, 29), 30, ResidueClass(3, 2)),
        CatalogEntry("mk30-b", "k=5, r-k=-4", _mcl(5, 6, 0, 1), (4, 26), (1, 29), 30, ResidueClass(5, 4)),
        CatalogEntry("mk30-c", "k=6, r-k=-5", _mcl(6, 5, 0, 1), (5, 25), (1, 29), 30, ResidueClass(6, 5)),
        CatalogEntry("mk30-d", "k=10, r-k=-9", _mcl(10, 3, 0, 1), (9, 21), (1, 29), 30, ResidueClass(10, 9)),
        CatalogEntry("mk30-e", "k=15, r-k=-14", _mcl(15, 2, 0, 1), (14, 16), (1, 29), 30, ResidueClass(15, 14)),
    ]
    # k = m = 3, where the Alladi-Gordon theorem says nothing.
    for sign, dsign in (("plus", 1), ("minus", -1)):
        entries += [
            CatalogEntry(f"k3m3-{sign}-a", "s=t=1, r=4", _mcl(3, 3, 1, 1, sign), (1, 8), (4, 5), 9, ResidueClass(3, 2), dsign),
            CatalogEntry(f"k3m3-{sign}-b", "s=t=2, r=8", _mcl(3, 3, 2, 2, sign), (2, 7), (1, 8), 9, ResidueClass(3, 2), dsign),
            CatalogEntry(f"k3m3-{sign}-c", "s=2, t=1, r=7", _mcl(3, 3, 2, 1, sign), (4, 5), (2, 7), 9, ResidueClass(3, 1), dsign),
        ]
    return entries


CATALOG = {entry.name: entry for entry in _entries()}


@dataclass
class CatalogCheck:
    entry: CatalogEntry
    spec_matches: bool
    class_matches: bool
    report: VanishingReport

    @property
    def passed(self) -> bool:
        return self.spec_matches and self.class_matches and self.report.verified

    def summary_line(self) -> str:
        status = "ok" if self.passed else "FAILED"
        notes = []
        if not self.spec_matches:
            notes.append(f"product {self.report.product.normalized()} != {self.entry.displayed}")
        if not self.class_matches:
            notes.append(f"class {self.report.zero_class} != {self.entry.zero_class}")
        if not self.report.verified:
            notes.append(f"{len(self.report.violations)} violation(s)")
        tail = f" ({'; '.join(notes)})" if notes else ""
        return f"{self.entry.name:14s} {str(self.entry.displayed):32s} {str(self.entry.zero_class):8s} {status}{tail}"


def verify_catalog(order: int, names: Optional[Sequence[str]] = None, min_class_samples: int = 10) -> List[CatalogCheck]:
    selected = list(CATALOG) if not names else list(names)
    checks = []
    for name in selected:
        if name not in CATALOG:
            raise InvalidParams(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG)}")
        entry = CATALOG[name]
        report = verify_vanishing(entry.params, order, min_class_samples)
        checks.append(CatalogCheck(
            entry=entry,
            spec_matches=report.product.normalized().signature() == entry.displayed.signature(),
            class_matches=report.zero_class == entry.zero_class,
            report=report,
        ))
    return checks
