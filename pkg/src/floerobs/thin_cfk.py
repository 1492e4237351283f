"""Bifiltered models of CFK^infinity for thin knots and L-space knots.

A model is a finite list of generators ``x`` with Maslov grading ``M(x)`` and
Alexander grading ``A(x)``; the element ``[x, i, j]`` has ``j - i = A(x)`` and
Maslov grading ``M(x) + 2i``.  An arrow ``(x, y, c, di, dj)`` means that
``d[x, i, j]`` contains ``c [y, i - di, j - dj]``.  The flip ``iota`` sends
``[x, i, j]`` to ``sign * [iota x, j, i]``.
"""

from dataclasses import dataclass
from fractions import Fraction
import json
from collections import defaultdict

from . import _linalg as la
from .knot_invariants import SymmetricLaurent, is_lspace_form


class ModelError(ValueError):
    pass


def _coeff(c):
    c = Fraction(c)
    return int(c) if c.denominator == 1 else c


@dataclass(frozen=True)
class BifilteredComplex:
    gens: tuple    # (maslov, alex) per generator
    arrows: tuple  # (src, tgt, coeff, di, dj)
    flip: tuple    # (image, sign) per generator
    tau: int = None  # thinness parameter when the model is thin

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple((int(m), int(a)) for m, a in self.gens))
        object.__setattr__(self, "arrows", tuple(
            (int(s), int(t), _coeff(c), int(di), int(dj)) for s, t, c, di, dj in self.arrows))
        object.__setattr__(self, "flip", tuple((int(i), int(s)) for i, s in self.flip))
        self.validate()

    @property
    def rank(self):
        return len(self.gens)

    def validate(self):
        n = len(self.gens)
        for s, t, c, di, dj in self.arrows:
            if not (0 <= s < n and 0 <= t < n) or c == 0:
                raise ModelError("bad arrow %r" % ((s, t, c, di, dj),))
            if di < 0 or dj < 0:
                raise ModelError("arrow increases a filtration")
            ms, as_ = self.gens[s]
            mt, at = self.gens[t]
            if mt - 2 * di != ms - 1:
                raise ModelError("arrow does not lower Maslov grading by one")
            if at != as_ + di - dj:
                raise ModelError("arrow inconsistent with Alexander gradings")
        # d^2 = 0
        out = defaultdict(list)
        for a in self.arrows:
            out[a[0]].append(a)
        comp = defaultdict(Fraction)
        for s, m, c1, di1, dj1 in self.arrows:
            for _, t, c2, di2, dj2 in out[m]:
                comp[(s, t, di1 + di2)] += c1 * c2
        if any(v for v in comp.values()):
            raise ModelError("differential does not square to zero")
        if self.tau is not None:
            if any(m != a + self.tau // 2 for m, a in self.gens):
                raise ModelError("generator off the thin diagonal")
        # flip
        if len(self.flip) != n:
            raise ModelError("flip must be given on every generator")
        for x, (y, sgn) in enumerate(self.flip):
            if self.flip[y][0] != x or self.flip[y][1] * sgn != 1 or sgn not in (1, -1):
                raise ModelError("flip is not an involution")
            m, a = self.gens[x]
            if self.gens[y] != (m - 2 * a, -a):
                raise ModelError("flip does not match gradings")
        mine = defaultdict(Fraction)
        for s, t, c, di, dj in self.arrows:
            mine[(s, t, di, dj)] += c
        flipped = defaultdict(Fraction)
        for s, t, c, di, dj in self.arrows:
            (fs, ss), (ft, st) = self.flip[s], self.flip[t]
            flipped[(fs, ft, dj, di)] += c * ss * st
        if {k: v for k, v in mine.items() if v} != {k: v for k, v in flipped.items() if v}:
            raise ModelError("flip is not a chain map")

    def dual(self):
        """Model of the mirror knot: reversed arrows and negated gradings."""
        gens = tuple((-m, -a) for m, a in self.gens)
        arrows = tuple((t, s, c, di, dj) for s, t, c, di, dj in self.arrows)
        tau = None if self.tau is None else -self.tau
        return BifilteredComplex(gens, arrows, self.flip, tau)

    def to_json(self):
        return {"generators": [{"maslov": m, "alex": a} for m, a in self.gens],
                "differential": [[s, t, str(c), di, dj] for s, t, c, di, dj in self.arrows],
                "flip": [list(f) for f in self.flip],
                "tau": self.tau}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        gens = [(g["maslov"], g["alex"]) for g in obj["generators"]]
        arrows = [(s, t, Fraction(c), di, dj) for s, t, c, di, dj in obj["differential"]]
        return cls(gens, arrows, [tuple(f) for f in obj["flip"]], obj.get("tau"))


def _direct_sum(parts, tau=None):
    gens, arrows, flip = [], [], []
    for pg, pa, pf in parts:
        o = len(gens)
        gens += pg
        arrows += [(s + o, t + o, c, di, dj) for s, t, c, di, dj in pa]
        flip += [(i + o, s) for i, s in pf]
    return BifilteredComplex(gens, arrows, flip, tau)


def _staircase_parts(exponents):
    """Generators/arrows of the staircase with Alexander gradings ``exponents``
    (descending, odd length, symmetric)."""
    k = len(exponents)
    gens = []
    m = 0
    for idx, a in enumerate(exponents):
        if idx == 0:
            m = 0
        elif idx % 2 == 1:
            m = m + 1 - 2 * (exponents[idx - 1] - a)
        else:
            m = m - 1
        gens.append((m, a))
    arrows = []
    for idx in range(1, k, 2):
        arrows.append((idx, idx - 1, 1, exponents[idx - 1] - exponents[idx], 0))
        arrows.append((idx, idx + 1, 1, 0, exponents[idx] - exponents[idx + 1]))
    flip = [(k - 1 - idx, 1) for idx in range(k)]
    return gens, arrows, flip


def staircase_model(delta: SymmetricLaurent) -> BifilteredComplex:
    """Staircase complex read off from the exponent gaps of an L-space knot's Delta."""
    if not is_lspace_form(delta):
        raise ModelError("Alexander polynomial is not of L-space knot form")
    exps = [j for j, _ in delta.coeffs]
    return _direct_sum([_staircase_parts(exps)])


def _box_parts(center, tau):
    m = center + tau // 2
    gens = [(m, center), (m + 1, center + 1), (m - 1, center - 1), (m, center)]
    arrows = [(0, 1, 1, 1, 0), (0, 2, 1, 0, 1), (1, 3, 1, 0, 1), (2, 3, -1, 1, 0)]
    return gens, arrows


@dataclass(frozen=True)
class ThinModelSpec:
    delta: SymmetricLaurent
    tau: int


def box_counts(delta: SymmetricLaurent, tau: int):
    """Number of boxes centred at each Alexander grading, solved from the top down."""
    if tau % 2:
        raise ModelError("tau must be even")
    t_os = -tau // 2
    ranks = {j: abs(a) for j, a in delta.coeffs}
    stair = {j: 1 for j in range(-abs(t_os), abs(t_os) + 1)}
    rest = {j: ranks.get(j, 0) - stair.get(j, 0) for j in set(ranks) | set(stair)}
    total = sum(ranks.values()) - (2 * abs(t_os) + 1)
    if total < 0 or total % 4:
        raise ModelError("total rank is not 2|tau_OS| + 1 plus a multiple of 4")
    # box at centre k contributes 1, 2, 1 at k + 1, k, k - 1
    top = max(rest) if rest else 0
    boxes = {}
    for j in range(top, min(rest) - 1 if rest else 0, -1):
        k = j - 1
        need = rest.get(j, 0) - 2 * boxes.get(j, 0) - boxes.get(j + 1, 0)
        if need < 0:
            raise ModelError("Alexander polynomial is not realizable by a thin model")
        if need:
            boxes[k] = need
    # the solve overshoots below the lowest grading only if the data are inconsistent
    for j in rest:
        if rest[j] != boxes.get(j - 1, 0) + 2 * boxes.get(j, 0) + boxes.get(j + 1, 0):
            raise ModelError("Alexander polynomial is not realizable by a thin model")
    if any(boxes.get(k, 0) != boxes.get(-k, 0) for k in boxes):
        raise ModelError("box distribution is not symmetric")
    assert sum(boxes.values()) * 4 == total
    return {k: v for k, v in boxes.items() if v}


def thin_model(spec: ThinModelSpec) -> BifilteredComplex:
    """Staircase of ``2|tau_OS| + 1`` generators with unit steps plus boxes."""
    delta, tau = spec.delta, spec.tau
    for j, a in delta.coeffs:
        if a and (-1) ** ((j + tau // 2) % 2) * a < 0:
            raise ModelError("Alexander coefficient sign inconsistent with thinness")
    boxes = box_counts(delta, tau)
    t_os = -tau // 2
    g, a, f = _staircase_parts(list(range(abs(t_os), -abs(t_os) - 1, -1)))
    stair = _direct_sum([(g, a, f)])
    if t_os < 0:
        stair = stair.dual()
    parts = [(list(stair.gens), list(stair.arrows), list(stair.flip))]
    for k in sorted(boxes, reverse=True):
        if k < 0:
            continue
        for _ in range(boxes[k]):
            if k == 0:
                bg, ba = _box_parts(0, tau)
                parts.append((bg, ba, [(0, 1), (2, 1), (1, 1), (3, -1)]))
            else:
                g1, a1 = _box_parts(k, tau)
                g2, a2 = _box_parts(-k, tau)
                arrows = a1 + [(s + 4, t + 4, c, di, dj) for s, t, c, di, dj in a2]
                flip = [(4, 1), (6, 1), (5, 1), (7, -1), (0, 1), (2, 1), (1, 1), (3, -1)]
                parts.append((g1 + g2, arrows, flip))
    model = _direct_sum(parts, tau)
    assert model.rank == sum(abs(x) for _, x in delta.coeffs)
    return model


def hfk_ranks(C: BifilteredComplex):
    """Ranks of the homology of the associated graded complex, ``{alex: {maslov: rank}}``."""
    by_bideg = defaultdict(list)
    for i, (m, a) in enumerate(C.gens):
        by_bideg[(a, m)].append(i)
    local = [(s, t, c) for s, t, c, di, dj in C.arrows if di == 0 and dj == 0]
    table = defaultdict(dict)
    for (a, m), idx in by_bideg.items():
        pos = {g: k for k, g in enumerate(idx)}
        imgs = [{} for _ in idx]
        for s, t, c in local:
            if s in pos:
                la.axpy(imgs[pos[s]], c, {t: 1})
        z = len(la.kernel(imgs))
        into = [{} for _ in range(len(C.gens))]
        for s, t, c in local:
            if t in pos:
                la.axpy(into[s], c, {pos[t]: 1})
        b = la.rank([v for v in into if v])
        r = z - b
        if r:
            table[a][m] = r
    return {a: dict(v) for a, v in sorted(table.items(), reverse=True)}


def euler_by_alexander(C: BifilteredComplex):
    return {a: sum((-1) ** (m % 2) * r for m, r in row.items())
            for a, row in hfk_ranks(C).items()}
