"""
Command-line mini-syntax.

  factor group   "3,5:8"    -> (q^3,q^5;q^8)_inf
                 "-4,-5:9"  -> (-q^4,-q^5;q^9)_inf   (a leading '-' negates the argument)
  prefactor      "-1:-2"    -> -q^{-2}
  range          "2..6"     -> 2, 3, 4, 5, 6;  "5" -> 5;  "6..2" -> empty
"""
from typing import List, Sequence, Tuple

from src.core.products import PochhammerFactor, ProductSpec
from src.utils.errors import InvalidSpec, SpecSyntaxError


def parse_factor_group(text: str, flag: str) -> List[PochhammerFactor]:
    text = text.strip()
    if not text:
        return []
    args, sep, modulus = text.rpartition(":")
    if not sep or not args:
        raise SpecSyntaxError(f"{flag}: expected 'a,b,...:M', got {text!r}")
    try:
        M = int(modulus)
    except ValueError:
        raise SpecSyntaxError(f"{flag}: modulus must be an integer, got {modulus!r}")
    if M < 1:
        raise SpecSyntaxError(f"{flag}: modulus must be >= 1, got {M}")
    factors = []
    for token in args.split(","):
        token = token.strip()
        sign = -1 if token.startswith("-") else 1
        digits = token[1:] if sign < 0 else token
        if not digits.isdigit() or int(digits) < 1:
            raise SpecSyntaxError(f"{flag}: factor argument must be a positive exponent, optionally '-'-prefixed, got {token!r}")
        factors.append(PochhammerFactor(int(digits), M, sign))
    return factors


def parse_prefactor(text: str, flag: str = "--pre") -> Tuple[int, int]:
    sign, sep, exponent = text.strip().partition(":")
    try:
        sign, exponent = int(sign), int(exponent)
    except ValueError:
        raise SpecSyntaxError(f"{flag}: expected 'sign:exponent' such as -1:-2, got {text!r}")
    if not sep or sign not in (1, -1):
        raise SpecSyntaxError(f"{flag}: sign must be 1 or -1, got {text!r}")
    return sign, exponent


def parse_product(numerators: Sequence[str], denominators: Sequence[str], prefactor: str = None) -> ProductSpec:
    numerator, denominator = [], []
    for group in numerators or ():
        numerator += parse_factor_group(group, "--num")
    for group in denominators or ():
        denominator += parse_factor_group(group, "--den")
    sign, exponent = parse_prefactor(prefactor) if prefactor else (1, 0)
    try:
        return ProductSpec(numerator=numerator, denominator=denominator, prefactor_sign=sign, prefactor_exponent=exponent)
    except InvalidSpec as e:
        raise SpecSyntaxError(f"--den: {e}")


def parse_range(text: str, flag: str) -> range:
    lo, sep, hi = text.strip().partition("..")
    try:
        lo = int(lo)
        hi = int(hi) if sep else lo
    except ValueError:
        raise SpecSyntaxError(f"{flag}: expected 'a..b' or a single integer, got {text!r}")
    return range(lo, hi + 1)
