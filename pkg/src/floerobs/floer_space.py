"""Floer-theoretic invariant package of a rational homology sphere.

``FloerPlus`` records HF+ as one plus-tower with bottom ``d`` and a multiset
of finite towers (the reduced part).  The hat version has a minus-tower with
top ``d - 1`` and the same reduced towers in the same degrees.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional
import json

from .qu_modules import (FiniteTower, GradedModule, InfiniteTower, _canon, fmt, grading,
                         tensor_hat, tor_hat)


class InconsistentInvariants(ValueError):
    """Raised when supplied invariants contradict each other."""


@dataclass(frozen=True)
class FloerPlus:
    d: Fraction
    red: tuple = ()
    zhs: bool = True

    def __post_init__(self):
        object.__setattr__(self, "d", grading(self.d))
        red = tuple(t if isinstance(t, FiniteTower) else FiniteTower(*t) for t in self.red)
        object.__setattr__(self, "red", _canon(red))
        if self.zhs:
            if self.d.denominator != 1 or self.d.numerator % 2:
                raise ValueError("an integral homology sphere has even integral d")
            if any(t.top.denominator != 1 for t in self.red):
                raise ValueError("an integral homology sphere has integral gradings")

    def module(self) -> GradedModule:
        return GradedModule(self.red, InfiniteTower("+", self.d))

    def to_json(self):
        return {"d": fmt(self.d), "red": [{"top": fmt(t.top), "len": t.length} for t in self.red]}

    @classmethod
    def from_json(cls, obj, zhs=None):
        if isinstance(obj, str):
            obj = json.loads(obj)
        d = Fraction(obj["d"])
        red = tuple(FiniteTower(Fraction(t["top"]), int(t["len"])) for t in obj.get("red", []))
        if zhs is None:
            zhs = d.denominator == 1 and d.numerator % 2 == 0 and all(
                t.top.denominator == 1 for t in red)
        return cls(d, red, zhs)

    def __repr__(self):
        return "FloerPlus(d=%s, red=%r)" % (fmt(self.d), list(self.red))


@dataclass(frozen=True)
class FloerHat:
    tail_top: Fraction
    red: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "tail_top", grading(self.tail_top))
        object.__setattr__(self, "red", _canon(self.red))

    def module(self) -> GradedModule:
        return GradedModule(self.red, InfiniteTower("-", self.tail_top))


@dataclass(frozen=True)
class ManifoldInvariants:
    floer: FloerPlus
    rohlin: Optional[int] = None
    label: str = ""
    extra: dict = field(default_factory=dict, compare=False)


class Verdict(str, Enum):
    OBSTRUCTED = "OBSTRUCTED"
    TRIVIALLY_DISTINCT = "TRIVIALLY_DISTINCT"
    INCONCLUSIVE = "INCONCLUSIVE"


def h_invariant(M: FloerPlus) -> Fraction:
    return -M.d / 2


def support(M: FloerPlus):
    return frozenset(g for t in M.red for g in t.support())


def red_dim(M: FloerPlus) -> int:
    return sum(t.length for t in M.red)


def is_h_positive(M: FloerPlus) -> bool:
    return all(g >= M.d for g in support(M))


def is_h_negative(M: FloerPlus) -> bool:
    return all(g <= M.d - 1 for g in support(M))


def orientation_reverse(M: FloerPlus) -> FloerPlus:
    # support maps elementwise by a -> -1 - a; the old bottom becomes the new top
    red = tuple(FiniteTower(-1 - t.top + 2 * (t.length - 1), t.length) for t in M.red)
    return FloerPlus(-M.d, red, M.zhs)


def to_hat(M: FloerPlus) -> FloerHat:
    return FloerHat(M.d - 1, M.red)


def to_plus(H: FloerHat, zhs=None) -> FloerPlus:
    d = H.tail_top + 1
    if zhs is None:
        zhs = d.denominator == 1 and d.numerator % 2 == 0 and all(
            t.top.denominator == 1 for t in H.red)
    return FloerPlus(d, H.red, zhs)


def connected_sum(M1: FloerPlus, M2: FloerPlus) -> FloerPlus:
    """HF+ of ``Y1 # Y2`` through the hat tensor/Tor formula."""
    h1, h2 = to_hat(M1).module(), to_hat(M2).module()
    ten = tensor_hat(h1, h2)
    tor = tor_hat(h1, h2)
    hat = FloerHat(ten.infinite.anchor, ten.finite + tor.finite)
    return to_plus(hat, zhs=M1.zhs and M2.zhs)


def connected_sum_many(ms):
    ms = list(ms)
    if not ms:
        raise ValueError("empty connected sum")
    out = ms[0]
    for m in ms[1:]:
        out = connected_sum(out, m)
    return out


def _integral_h(A: ManifoldInvariants) -> int:
    h = h_invariant(A.floer)
    if h.denominator != 1:
        raise ValueError("h must be an integer for %s" % (A.label or "input"))
    return int(h)


def _need_rohlin(A: ManifoldInvariants) -> int:
    if A.rohlin is None:
        raise ValueError("Rohlin invariant missing for %s" % (A.label or "input"))
    return A.rohlin % 2


def cobordism_obstruction(A: ManifoldInvariants, B: ManifoldInvariants) -> Verdict:
    """Decide whether A and B are obstructed from being Z/2-homology cobordant."""
    ra, rb = _need_rohlin(A), _need_rohlin(B)
    ha, hb = _integral_h(A), _integral_h(B)
    if ha != hb or ra != rb:
        return Verdict.TRIVIALLY_DISTINCT
    if not (support(A.floer) & support(B.floer)) and (ha - ra) % 2:
        return Verdict.OBSTRUCTED
    return Verdict.INCONCLUSIVE


def infinite_order_theta_Z(A: ManifoldInvariants) -> bool:
    if not A.floer.zhs:
        raise ValueError("infinite order in the integral cobordism group needs a ZHS")
    rho = _need_rohlin(A)
    return (is_h_positive(A.floer) or is_h_negative(A.floer)) and rho == 1


def check_red_parity(A: ManifoldInvariants):
    """Odd reduced dimension must match ``rho != h (mod 2)``."""
    h, rho = _integral_h(A), _need_rohlin(A)
    if ((h - rho) % 2 == 1) != (red_dim(A.floer) % 2 == 1):
        raise InconsistentInvariants(
            "%s: dim HF_red = %d but h = %d, rho = %d" % (A.label or "input", red_dim(A.floer), h, rho))


def infinite_order_theta_Z2_mod_L(A: ManifoldInvariants) -> bool:
    check_red_parity(A)
    h, rho = _integral_h(A), _need_rohlin(A)
    return (is_h_positive(A.floer) or is_h_negative(A.floer)) and (h - rho) % 2 == 1
