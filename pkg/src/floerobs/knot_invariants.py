"""Classical invariants of torus, two-bridge and explicitly presented knots.

Sign conventions: the positive torus knots are right-handed and
``signature(T(2,3)) = -2``.  The two-bridge knot ``K(p, q)`` is the one with
``signature = sum_{i=1}^{p-1} (-1)^floor(i q'/p)`` for ``q' = q`` or ``q + p``
(whichever is odd), so ``K(3, 1)`` is the left-handed trefoil.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
import json
import re

from . import _kernels
from . import _linalg as la


class InvalidKnot(ValueError):
    pass


@dataclass(frozen=True)
class KnotDesc:
    kind: str  # "unknot", "torus", "twobridge", "figure8", "seifert"
    p: int = 0
    q: int = 0
    matrix: tuple = None
    mirrored: bool = False

    def __post_init__(self):
        k = self.kind
        if k == "torus":
            if not (2 <= self.p < self.q) or gcd(self.p, self.q) != 1:
                raise InvalidKnot("torus knot needs coprime 2 <= p < q")
        elif k == "twobridge":
            p, q = self.p, self.q
            if p == 1 and q in (0, 1):
                return
            if p < 1 or p % 2 == 0 or not (0 < q < p) or gcd(p, q) != 1:
                raise InvalidKnot("two-bridge knot needs odd p, 0 < q < p, gcd(p, q) = 1")
        elif k == "seifert":
            m = self.matrix
            if m is None or any(len(r) != len(m) for r in m) or len(m) % 2:
                raise InvalidKnot("Seifert matrix must be square of even size")
            object.__setattr__(self, "matrix", tuple(tuple(int(x) for x in r) for r in m))
            skew = [[m[i][j] - m[j][i] for j in range(len(m))] for i in range(len(m))]
            if len(m) and abs(la.determinant(skew)) != 1:
                raise InvalidKnot("V - V^T must be unimodular for a knot")
        elif k not in ("unknot", "figure8"):
            raise InvalidKnot("unknown knot kind %r" % k)

    def mirror(self):
        return KnotDesc(self.kind, self.p, self.q, self.matrix, not self.mirrored)

    def label(self):
        base = {"unknot": "unknot", "figure8": "figure8",
                "torus": "torus:%d,%d" % (self.p, self.q),
                "twobridge": "twobridge:%d,%d" % (self.p, self.q),
                "seifert": "seifert:%s" % json.dumps([list(r) for r in (self.matrix or ())])
                }[self.kind]
        return "mirror:" + base if self.mirrored else base


def torus(p, q):
    return KnotDesc("torus", p, q)


def two_bridge(p, q):
    return KnotDesc("twobridge", p, q)


def figure_eight():
    return KnotDesc("figure8")


def unknot():
    return KnotDesc("unknot")


def explicit(V):
    return KnotDesc("seifert", matrix=tuple(tuple(r) for r in V))


def parse_knot(s: str) -> KnotDesc:
    """Parse ``torus:p,q``, ``twobridge:p,q``, ``figure8``, ``unknot`` or
    ``seifert:[[...]]``; a ``mirror:`` prefix takes the mirror image."""
    s = s.strip()
    if s.startswith("mirror:"):
        return parse_knot(s[len("mirror:"):]).mirror()
    if s in ("figure8", "4_1"):
        return figure_eight()
    if s in ("unknot", "0_1"):
        return unknot()
    m = re.fullmatch(r"(torus|twobridge):\s*(-?\d+)\s*,\s*(-?\d+)", s)
    if m:
        return KnotDesc(m.group(1), int(m.group(2)), int(m.group(3)))
    if s.startswith("seifert:"):
        try:
            V = json.loads(s[len("seifert:"):])
        except json.JSONDecodeError as exc:
            raise InvalidKnot("bad Seifert matrix: %s" % exc) from None
        return explicit(V)
    raise InvalidKnot("cannot parse knot description %r" % s)


@dataclass(frozen=True)
class SymmetricLaurent:
    """Symmetric Laurent polynomial ``sum a_j t^j`` stored as ``{j: a_j}``."""

    coeffs: tuple  # sorted (j, a_j) pairs with a_j != 0

    def __post_init__(self):
        c = dict(self.coeffs)
        c = {int(j): int(a) for j, a in c.items() if a}
        if any(c.get(-j, 0) != a for j, a in c.items()):
            raise ValueError("Laurent polynomial is not symmetric")
        object.__setattr__(self, "coeffs", tuple(sorted(c.items(), reverse=True)))

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d.items()))

    def as_dict(self):
        return dict(self.coeffs)

    def __getitem__(self, j):
        return self.as_dict().get(j, 0)

    @property
    def degree(self):
        return max((j for j, _ in self.coeffs), default=0)

    def __call__(self, t):
        t = Fraction(t)
        return sum(a * t ** j for j, a in self.coeffs)

    def second_derivative_half(self):
        """``Delta''(1) / 2``, which for a symmetric polynomial is ``sum j^2 a_j / 2``."""
        v = sum(j * j * a for j, a in self.coeffs)
        assert v % 2 == 0
        return v // 2

    def __repr__(self):
        terms = []
        for j, a in self.coeffs:
            terms.append("%+d*t^%d" % (a, j))
        return " ".join(terms) or "0"


# --- polynomials -------------------------------------------------------------

def _interpolate(points):
    """Coefficients (low to high) of the polynomial through integer points."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    xs = [x for x, _ in points]
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k in range(n):
            coeffs[k] += yi * basis[k] / denom
    return coeffs


def _symmetrize(low_to_high):
    nz = [k for k, c in enumerate(low_to_high) if c]
    if not nz:
        raise InvalidKnot("Alexander polynomial vanishes: not a knot")
    lo, hi = nz[0], nz[-1]
    if (lo + hi) % 2:
        raise InvalidKnot("Alexander polynomial has odd span")
    centre = (lo + hi) // 2
    d = {}
    for k in range(lo, hi + 1):
        c = low_to_high[k]
        if c.denominator != 1:
            raise InvalidKnot("non-integral Alexander polynomial")
        if c:
            d[k - centre] = int(c)
    total = sum(d.values())
    if total not in (1, -1):
        raise InvalidKnot("Alexander polynomial has |Delta(1)| != 1")
    if total == -1:
        d = {j: -a for j, a in d.items()}
    return SymmetricLaurent.from_dict(d)


def alexander_from_seifert(V) -> SymmetricLaurent:
    n = len(V)
    if n == 0:
        return SymmetricLaurent.from_dict({0: 1})
    pts = []
    for t in range(n + 1):
        M = [[V[i][j] - t * V[j][i] for j in range(n)] for i in range(n)]
        pts.append((t, la.determinant(M)))
    return _symmetrize(_interpolate(pts))


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_divexact(a, b):
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        c, r = divmod(a[k + len(b) - 1], b[-1])
        if r:
            raise ArithmeticError("inexact polynomial division")
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] -= c * y
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return q


def _tpow_minus_one(n):
    return [-1] + [0] * (n - 1) + [1]


def torus_alexander(p, q) -> SymmetricLaurent:
    """``(t^{pq}-1)(t-1) / ((t^p-1)(t^q-1))`` by exact division."""
    num = _poly_mul(_tpow_minus_one(p * q), _tpow_minus_one(1))
    den = _poly_mul(_tpow_minus_one(p), _tpow_minus_one(q))
    return _symmetrize([Fraction(c) for c in _poly_divexact(num, den)])


def _odd_rep(p, q):
    return q if q % 2 else q + p


def two_bridge_epsilons(p, q):
    qq = _odd_rep(p, q)
    return [(-1) ** ((i * qq) // p) for i in range(1, p)]


def two_bridge_alexander_formula(p, q) -> SymmetricLaurent:
    """``sum_k (-1)^k t^{e_1 + ... + e_k}`` with ``e_i = (-1)^floor(i q/p)``."""
    eps = two_bridge_epsilons(p, q)
    d, s = {}, 0
    d[0] = 1
    for k, e in enumerate(eps, start=1):
        s += e
        d[s] = d.get(s, 0) + (-1) ** k
    lo = min(d)
    coeffs = [Fraction(d.get(lo + k, 0)) for k in range(max(d) - lo + 1)]
    return _symmetrize(coeffs)


def even_continued_fraction(p, q):
    """Even entries ``c_i`` with ``p/q' = c_1 - 1/(c_2 - 1/(...))``, ``q' = q mod p`` even."""
    qq = q if q % 2 == 0 else q - p
    x = Fraction(p, qq)
    out = []
    while True:
        c = 2 * round(x / 2)
        if abs(x - c) >= 1:
            raise ArithmeticError("even continued fraction failed")
        out.append(c)
        if x == c:
            return out
        x = 1 / (c - x)


def seifert_matrix(K: KnotDesc):
    """Integer Seifert matrix for the knot (an oracle path for torus knots)."""
    if K.kind == "unknot" or (K.kind == "twobridge" and K.p == 1):
        V = []
    elif K.kind == "figure8":
        V = [[1, 1], [0, -1]]
    elif K.kind == "seifert":
        V = [list(r) for r in K.matrix]
    elif K.kind == "twobridge":
        cs = even_continued_fraction(K.p, K.q)
        n = len(cs)
        V = [[0] * n for _ in range(n)]
        for i, c in enumerate(cs):
            V[i][i] = -(c // 2)
            if i + 1 < n:
                V[i][i + 1] = -1
    elif K.kind == "torus":
        # Seifert form of the Milnor fiber of x^p + y^q as a tensor product
        def L(m):
            return [[1 if i == j else (-1 if i == j + 1 else 0) for j in range(m - 1)]
                    for i in range(m - 1)]
        A, B = L(K.p), L(K.q)
        V = [[-A[i][k] * B[j][l] for k in range(K.p - 1) for l in range(K.q - 1)]
             for i in range(K.p - 1) for j in range(K.q - 1)]
    else:
        raise InvalidKnot(K.kind)
    if K.mirrored:
        V = [[-x for x in r] for r in V]
    return V


def alexander(K: KnotDesc) -> SymmetricLaurent:
    if K.kind == "unknot" or (K.kind == "twobridge" and K.p == 1):
        return SymmetricLaurent.from_dict({0: 1})
    if K.kind == "torus":
        return torus_alexander(K.p, K.q)
    return alexander_from_seifert(seifert_matrix(K))


def signature(K: KnotDesc) -> int:
    if K.kind == "torus":
        s = _kernels.torus_signature_count(K.p, K.q)
    else:
        V = seifert_matrix(K)
        S = [[V[i][j] + V[j][i] for j in range(len(V))] for i in range(len(V))]
        return la.symmetric_signature(S)
    return -s if K.mirrored else s


def determinant(K: KnotDesc) -> int:
    if K.kind in ("twobridge", "seifert") and not (K.kind == "twobridge" and K.p == 1):
        # Delta(-1) = det(V + V^T) up to sign, one determinant instead of a polynomial
        V = seifert_matrix(K)
        v = la.determinant([[V[i][j] + V[j][i] for j in range(len(V))] for i in range(len(V))])
    else:
        v = alexander(K)(-1)
    det = abs(int(v))
    if K.kind == "twobridge":
        assert det == K.p, "determinant of a two-bridge knot must equal p"
    return det


def arf(K: KnotDesc) -> int:
    """Arf invariant from ``Delta(-1) mod 8``."""
    r = determinant(K) % 8
    if r in (1, 7):
        return 0
    if r in (3, 5):
        return 1
    raise ArithmeticError("knot determinant must be odd")


def rohlin_surgery(K: KnotDesc, n: int) -> int:
    """Rohlin invariant of ``S^3_{1/n}(K)``."""
    if n == 0:
        raise ValueError("1/0 surgery is not an integral homology sphere surgery")
    return (n * arf(K)) % 2


def casson_surgery(K: KnotDesc, n: int) -> int:
    """Casson invariant of ``S^3_{1/n}(K)``, ``n * Delta''(1) / 2``."""
    if n == 0:
        raise ValueError("n must be nonzero")
    return n * alexander(K).second_derivative_half()


def is_lspace_form(delta: SymmetricLaurent) -> bool:
    cs = [a for _, a in delta.coeffs]
    return all(a in (1, -1) for a in cs) and all(cs[i] == -cs[i + 1] for i in range(len(cs) - 1)) \
        and (not cs or cs[0] == 1)
