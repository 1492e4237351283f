"""Lefschetz numbers of Z/2-graded maps and the splitting-formula arithmetic.

Matrices are lists of rows of exact rationals; ``m[i][j]`` is the coefficient
of basis vector ``i`` in the image of basis vector ``j``.
"""

from dataclasses import dataclass
from fractions import Fraction
import json

from . import _linalg as la
from .floer_space import FloerPlus, h_invariant
from .qu_modules import fmt, grading


def _mat(m):
    return [[grading(x) for x in row] for row in m]


def _zeros(r, c):
    return [[Fraction(0)] * c for _ in range(r)]


def _trace(m):
    return sum((m[i][i] for i in range(len(m))), Fraction(0))


@dataclass(frozen=True)
class Z2GradedMap:
    even_block: tuple
    odd_block: tuple

    def __post_init__(self):
        for name in ("even_block", "odd_block"):
            m = _mat(getattr(self, name))
            if any(len(row) != len(m) for row in m):
                raise ValueError("%s must be square" % name)
            object.__setattr__(self, name, tuple(tuple(r) for r in m))

    @property
    def even_dim(self):
        return len(self.even_block)

    @property
    def odd_dim(self):
        return len(self.odd_block)

    @classmethod
    def identity(cls, even_dim, odd_dim):
        return cls(la.identity(even_dim), la.identity(odd_dim))

    @classmethod
    def from_graded(cls, parities, mat):
        """Split a parity-preserving matrix on a basis with given parities."""
        ev = [i for i, p in enumerate(parities) if p % 2 == 0]
        od = [i for i, p in enumerate(parities) if p % 2 == 1]
        for i in ev:
            for j in od:
                if mat[i][j] or mat[j][i]:
                    raise ValueError("map does not preserve the Z/2 grading")
        return cls([[mat[i][j] for j in ev] for i in ev], [[mat[i][j] for j in od] for i in od])

    def power(self, k):
        def pw(m):
            out = la.identity(len(m))
            for _ in range(k):
                out = la.matmul(out, [list(r) for r in m]) if m else out
            return out
        return Z2GradedMap(pw(self.even_block), pw(self.odd_block))

    def is_zero(self):
        return all(x == 0 for m in (self.even_block, self.odd_block) for row in m for x in row)

    def to_json(self):
        return {"even_dim": self.even_dim, "odd_dim": self.odd_dim,
                "even_block": [[fmt(x) for x in r] for r in self.even_block],
                "odd_block": [[fmt(x) for x in r] for r in self.odd_block]}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        ev = [[Fraction(x) for x in r] for r in obj["even_block"]]
        od = [[Fraction(x) for x in r] for r in obj["odd_block"]]
        if len(ev) != obj.get("even_dim", len(ev)) or len(od) != obj.get("odd_dim", len(od)):
            raise ValueError("block sizes do not match the declared dimensions")
        return cls(ev, od)


def lefschetz_number(f: Z2GradedMap) -> Fraction:
    return _trace(f.even_block) - _trace(f.odd_block)


def splitting_eval(h, lef):
    """``lambda_SW = -h - Lef`` and its mod 2 reduction (None when not integral)."""
    h, lef = grading(h), grading(lef)
    if (2 * h).denominator != 1:
        raise ValueError("2h must be an integer")
    lam = -h - lef
    return lam, (int(lam) % 2 if lam.denominator == 1 else None)


def euler_red(M: FloerPlus) -> int:
    """Euler characteristic of the reduced part, ``sum (-1)^grading``."""
    chi = 0
    for t in M.red:
        for g in t.support():
            if g.denominator != 1:
                raise ValueError("parity is only defined for integral gradings")
            chi += -1 if g.numerator % 2 else 1
    return chi


def product_case_casson(M: FloerPlus) -> Fraction:
    """Casson invariant forced by the splitting formula on ``S^1 x Y``."""
    if not M.zhs:
        raise ValueError("the product case needs an integral homology sphere")
    return h_invariant(M) + euler_red(M)


def nilpotent_lefschetz_zero(f: Z2GradedMap, k: int) -> bool:
    """Return whether ``f^k = 0``; when it is, assert that ``Lef(f) = 0``."""
    if k < 1:
        raise ValueError("k must be positive")
    nil = f.power(k).is_zero()
    if nil:
        assert lefschetz_number(f) == 0, "nilpotent map with nonzero Lefschetz number"
    return nil


class ChainMapError(ValueError):
    pass


@dataclass(frozen=True)
class TruncatedComplexPair:
    """``C_check<=N = C^o (+) C^s<=N`` together with an endomorphism ``W``.

    ``d_oo`` is the differential on C^o and ``d_os`` its component into C^s.
    ``W`` is block lower triangular: ``w_o`` on C^o, ``w_os`` from C^o to
    C^s, and the identity on C^s.  C^s has one generator in every even degree
    from ``-2n`` to ``N``, all of even Z/2-grading.
    """

    o_gradings: tuple
    n: int
    N: int
    d_oo: tuple
    d_os: tuple
    w_o: tuple
    w_os: tuple = None

    def __post_init__(self):
        if (self.N + 2 * self.n) % 2 or self.N < -2 * self.n:
            raise ValueError("need N >= -2n with N = -2n mod 2")
        k = len(self.o_gradings)
        s = self.s_dim
        object.__setattr__(self, "o_gradings", tuple(int(g) for g in self.o_gradings))
        object.__setattr__(self, "d_oo", tuple(map(tuple, _mat(self.d_oo))))
        object.__setattr__(self, "w_o", tuple(map(tuple, _mat(self.w_o))))
        # an absent (or empty, when C^o is empty) block means zero
        d_os = _mat(self.d_os) if self.d_os else _zeros(s, k)
        w_os = _mat(self.w_os) if self.w_os else _zeros(s, k)
        object.__setattr__(self, "d_os", tuple(map(tuple, d_os)))
        object.__setattr__(self, "w_os", tuple(map(tuple, w_os)))
        for name, m, r in (("d_oo", self.d_oo, k), ("w_o", self.w_o, k),
                           ("d_os", self.d_os, s), ("w_os", self.w_os, s)):
            if len(m) != r or any(len(row) != k for row in m):
                raise ValueError("%s has the wrong shape" % name)

    @property
    def s_dim(self):
        return (self.N + 2 * self.n) // 2 + 1

    @property
    def s_gradings(self):
        return tuple(range(-2 * self.n, self.N + 1, 2))

    def gradings(self):
        return self.o_gradings + self.s_gradings

    def total_differential(self):
        k, s = len(self.o_gradings), self.s_dim
        m = _zeros(k + s, k + s)
        for i in range(k):
            for j in range(k):
                m[i][j] = self.d_oo[i][j]
        for i in range(s):
            for j in range(k):
                m[k + i][j] = self.d_os[i][j]
        return m

    def total_map(self):
        k, s = len(self.o_gradings), self.s_dim
        m = _zeros(k + s, k + s)
        for i in range(k):
            for j in range(k):
                m[i][j] = self.w_o[i][j]
        for i in range(s):
            for j in range(k):
                m[k + i][j] = self.w_os[i][j]
            m[k + i][k + i] = Fraction(1)
        return m

    def to_json(self):
        enc = lambda m: [[fmt(x) for x in r] for r in m]
        return {"o_gradings": list(self.o_gradings), "n": self.n, "N": self.N,
                "d_oo": enc(self.d_oo), "d_os": enc(self.d_os),
                "w_o": enc(self.w_o), "w_os": enc(self.w_os)}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        dec = lambda m: [[Fraction(x) for x in r] for r in m]
        return cls(obj["o_gradings"], int(obj["n"]), int(obj["N"]), dec(obj["d_oo"]),
                   dec(obj["d_os"]), dec(obj["w_o"]), dec(obj["w_os"]))


def _check_complex(gr, d, w):
    n = len(gr)
    for i in range(n):
        for j in range(n):
            if d[i][j] and gr[i] != gr[j] - 1:
                raise ChainMapError("differential must lower the grading by one")
            if w[i][j] and gr[i] != gr[j]:
                raise ChainMapError("endomorphism must preserve the grading")
    if any(x for row in la.matmul(d, d) for x in row):
        raise ChainMapError("differential does not square to zero")
    if la.matmul(d, w) != la.matmul(w, d):
        raise ChainMapError("endomorphism is not a chain map")


def chain_lefschetz(gradings, w) -> Fraction:
    return sum((w[i][i] if g % 2 == 0 else -w[i][i] for i, g in enumerate(gradings)), Fraction(0))


def truncated_identity_check(T: TruncatedComplexPair) -> dict:
    """Compare the directly computed ``Lef`` on the truncated complex with
    ``dim C^s + Lef(C^o)``."""
    d, w, gr = T.total_differential(), T.total_map(), list(T.gradings())
    _check_complex(gr, d, w)
    lhs = chain_lefschetz(gr, w)
    rhs = Fraction(T.N + 2 * T.n, 2) + 1 + chain_lefschetz(list(T.o_gradings), T.w_o)
    return {"lhs": lhs, "rhs": rhs, "dim_s": T.s_dim, "holds": lhs == rhs}


def induced_on_homology(gradings, d, w):
    """Matrix of the map induced by chain map ``w`` on homology, split by parity."""
    n = len(gradings)
    _check_complex(list(gradings), d, w)
    cols = [{i: d[i][j] for i in range(n) if d[i][j]} for j in range(n)]
    wcols = [{i: w[i][j] for i in range(n) if w[i][j]} for j in range(n)]
    hom = {}
    for g in sorted(set(gradings)):
        idx = [j for j in range(n) if gradings[j] == g]
        cyc = [{idx[a]: c for a, c in v.items()} for v in la.kernel([cols[j] for j in idx])]
        bnd = [cols[j] for j in range(n) if gradings[j] == g + 1]
        hom[g] = la.Homology(cyc, bnd)
    parities, blocks = [], []
    ev, od = [], []
    for g, h in hom.items():
        if not h.dim:
            continue
        m = [h.coords(la.apply(wcols, z)) for z in h.reps]
        block = [list(r) for r in zip(*m)]
        (ev if g % 2 == 0 else od).append(block)

    def diag(blocks):
        size = sum(len(b) for b in blocks)
        out = _zeros(size, size)
        o = 0
        for b in blocks:
            for i in range(len(b)):
                for j in range(len(b)):
                    out[o + i][o + j] = b[i][j]
            o += len(b)
        return out

    return Z2GradedMap(diag(ev), diag(od))


def u_tail_lefschetz(N: int, h) -> Fraction:
    """Lef of the identity on a U-tail from ``-2h`` up to ``N`` (all even)."""
    h = grading(h)
    length = (N + 2 * h) / 2 + 1
    if length.denominator != 1 or length < 1:
        raise ValueError("N must lie in -2h + 2Z with N >= -2h")
    tail = Z2GradedMap.identity(int(length), 0)
    return lefschetz_number(tail)
