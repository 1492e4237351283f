"""Graded Q[U]-modules built from towers.

U has degree -2.  A finite tower ``T_a(b) = (Q[U]/U^b)[-a]`` lives in degrees
``a, a-2, ..., a-2(b-1)``.  ``T-_a`` is the free module with top generator in
degree ``a`` and ``T+_a`` is the divisible module with bottom in degree ``a``.

Shift convention: ``(M[c])_k = M_{k+c}``, so an element of degree ``g`` in M
has degree ``g - c`` in ``M[c]``.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import _linalg as la


def grading(x) -> Fraction:
    """Normalize a grading to an exact rational.  Floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError("gradings must be exact rationals, got %r" % (x,))
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError("cannot interpret %r as a grading" % (x,))


def fmt(q: Fraction) -> str:
    """Serialize a rational as ``"p/q"`` (or ``"p"`` when integral)."""
    q = grading(q)
    return str(q.numerator) if q.denominator == 1 else "%d/%d" % (q.numerator, q.denominator)


@dataclass(frozen=True, order=True)
class FiniteTower:
    top: Fraction
    length: int

    def __post_init__(self):
        object.__setattr__(self, "top", grading(self.top))
        if int(self.length) != self.length or self.length < 1:
            raise ValueError("tower length must be a positive integer")
        object.__setattr__(self, "length", int(self.length))

    @property
    def bottom(self) -> Fraction:
        return self.top - 2 * (self.length - 1)

    def support(self):
        return [self.top - 2 * k for k in range(self.length)]

    def __repr__(self):
        return "T_%s(%d)" % (fmt(self.top), self.length)


@dataclass(frozen=True)
class InfiniteTower:
    kind: str  # "+" or "-"
    anchor: Fraction

    def __post_init__(self):
        if self.kind not in ("+", "-"):
            raise ValueError("infinite tower kind must be '+' or '-'")
        object.__setattr__(self, "anchor", grading(self.anchor))

    def __repr__(self):
        return "T%s_%s" % (self.kind, fmt(self.anchor))


def _canon(towers):
    return tuple(sorted(towers, key=lambda t: (-t.top, -t.length)))


@dataclass(frozen=True)
class GradedModule:
    finite: tuple = ()
    infinite: Optional[InfiniteTower] = None

    def __post_init__(self):
        object.__setattr__(self, "finite", _canon(self.finite))

    def dim(self, g) -> int:
        """Dimension in degree ``g`` (finite for every module here)."""
        g = grading(g)
        n = sum(1 for t in self.finite if t.bottom <= g <= t.top and (t.top - g) % 2 == 0)
        inf = self.infinite
        if inf is not None and (g - inf.anchor) % 2 == 0:
            if (inf.kind == "+" and g >= inf.anchor) or (inf.kind == "-" and g <= inf.anchor):
                n += 1
        return n

    def __add__(self, other):
        if self.infinite is not None and other.infinite is not None:
            raise ValueError("direct sum with two infinite towers is not modeled")
        return GradedModule(self.finite + other.finite, self.infinite or other.infinite)

    def __repr__(self):
        parts = [repr(self.infinite)] if self.infinite is not None else []
        parts += [repr(t) for t in self.finite]
        return " + ".join(parts) if parts else "0"


def tower(top, length) -> GradedModule:
    return GradedModule((FiniteTower(top, length),))


def minus(top) -> GradedModule:
    return GradedModule((), InfiniteTower("-", top))


def plus(bottom) -> GradedModule:
    return GradedModule((), InfiniteTower("+", bottom))


def shift(M: GradedModule, c) -> GradedModule:
    """``M[c]``: every degree ``g`` becomes ``g - c``."""
    c = grading(c)
    fin = tuple(FiniteTower(t.top - c, t.length) for t in M.finite)
    inf = None if M.infinite is None else InfiniteTower(M.infinite.kind, M.infinite.anchor - c)
    return GradedModule(fin, inf)


def _check_hat(M):
    if M.infinite is None or M.infinite.kind != "-":
        raise ValueError("expected a module with exactly one minus-kind infinite tower")


def tensor_hat(M1: GradedModule, M2: GradedModule) -> GradedModule:
    """``(M1 (x) M2)[-1]`` for hat-shaped modules, tower by tower."""
    _check_hat(M1)
    _check_hat(M2)
    x, y = M1.infinite.anchor, M2.infinite.anchor
    out = []
    for t in M1.finite:
        out.append(FiniteTower(t.top + y + 1, t.length))
    for t in M2.finite:
        out.append(FiniteTower(t.top + x + 1, t.length))
    for s in M1.finite:
        for t in M2.finite:
            out.append(FiniteTower(s.top + t.top + 1, min(s.length, t.length)))
    return GradedModule(tuple(out), InfiniteTower("-", x + y + 1))


def tor_hat(M1: GradedModule, M2: GradedModule) -> GradedModule:
    """``Tor(M1, M2)[-2]``; only pairs of finite towers contribute."""
    _check_hat(M1)
    _check_hat(M2)
    out = []
    for s in M1.finite:
        for t in M2.finite:
            out.append(FiniteTower(s.top + t.top + 2 - 2 * max(s.length, t.length),
                                   min(s.length, t.length)))
    return GradedModule(tuple(out), None)


# --- decomposition of finite graded modules with a U action -----------------

def towers_from_ranks(rank_fn, degrees, hi=None):
    """Decompose a finite graded Q[U]-module into towers.

    ``rank_fn(t, b)`` returns the rank of ``U^((t-b)/2)`` from degree ``t`` to
    degree ``b`` (for ``t == b`` the dimension).  ``degrees`` lists every
    degree where the module can be nonzero.  A tower covering ``[b, t]`` is
    counted by inclusion-exclusion.  Degrees above ``hi`` are treated as
    absent (towers running into ``hi`` appear cut off there).
    """
    degs = sorted(set(degrees))
    dset = set(degs)

    def R(t, b):
        if t < b or t not in dset or b not in dset:
            return 0
        if hi is not None and t > hi:
            return 0
        return rank_fn(t, b)

    out = []
    for t in degs:
        if hi is not None and t > hi:
            continue
        b = t
        while b in dset:
            n = R(t, b) - R(t + 2, b) - R(t, b - 2) + R(t + 2, b - 2)
            if n < 0:
                raise ArithmeticError("inconsistent rank data at (%s, %s)" % (t, b))
            out.extend([FiniteTower(t, (t - b) // 2 + 1)] * n)
            if R(t, b) == 0:
                break
            b -= 2
    return out


class FiniteModuleData:
    """A finite graded module given by bases and U matrices.

    ``dims[g]`` is the dimension in degree ``g`` and ``umat[g]`` the matrix of
    ``U: M_g -> M_{g-2}`` as a list of rows (``dims[g-2]`` rows, ``dims[g]``
    columns).
    """

    def __init__(self, dims, umat):
        self.dims = {grading(g): n for g, n in dims.items() if n}
        self.umat = {grading(g): m for g, m in umat.items()}
        self._cache = {}

    def _power(self, t, b):
        key = (t, b)
        if key in self._cache:
            return self._cache[key]
        if t == b:
            m = la.identity(self.dims.get(t, 0))
        else:
            upper = self._power(t, b + 2)
            step = self.umat.get(b + 2)
            if step is None or not upper or not self.dims.get(b):
                m = [[0] * self.dims.get(t, 0) for _ in range(self.dims.get(b, 0))]
            else:
                m = la.matmul(step, upper)
        self._cache[key] = m
        return m

    def rank(self, t, b):
        if t == b:
            return self.dims.get(t, 0)
        return la.dense_rank(self._power(t, b))

    def towers(self, hi=None):
        return towers_from_ranks(self.rank, self.dims.keys(), hi=hi)




def subquotient_data(num, den, u_apply):
    """Module data of a U-stable subquotient ``span(num) / span(den)``.

    ``num`` and ``den`` map a degree to a list of sparse vectors in some
    ambient graded space; ``den`` must lie in ``num``.  ``u_apply`` sends a
    vector of degree ``g`` to its U-image in degree ``g - 2``.  Returns the
    ``FiniteModuleData`` together with the per-degree homology objects (which
    hold representatives).
    """
    hs = {g: la.Homology(vs, den.get(g, [])) for g, vs in num.items()}
    dims = {g: h.dim for g, h in hs.items()}
    umat = {}
    for g, h in hs.items():
        low = hs.get(g - 2)
        if not h.dim or low is None or not low.dim:
            continue
        cols = [low.coords(u_apply(z)) for z in h.reps]
        umat[g] = [list(r) for r in zip(*cols)]
    return FiniteModuleData(dims, umat), hs


# --- brute-force oracle ------------------------------------------------------

def _truncated_basis(M, K):
    """Graded basis of M with the free tower cut to ``Q[U]/U^K``.

    Returns ``(degrees, umap)`` where ``umap[i]`` is the index of ``U * e_i``
    or None.
    """
    degrees, umap = [], []
    pieces = [(t.top, t.length) for t in M.finite]
    if M.infinite is not None:
        if M.infinite.kind != "-":
            raise ValueError("oracle handles minus-kind infinite towers only")
        pieces.append((M.infinite.anchor, K))
    for top, length in pieces:
        start = len(degrees)
        for k in range(length):
            degrees.append(top - 2 * k)
            umap.append(start + k + 1 if k + 1 < length else None)
    return degrees, umap


def _oracle_raw(M1, M2, K):
    """Tower lists of the cokernel and kernel of the resolved map at depth K."""
    deg2, u2 = _truncated_basis(M2, K)
    n2 = len(deg2)
    gens = [(t.top, t.length) for t in M1.finite]
    if M1.infinite is not None:
        if M1.infinite.kind != "-":
            raise ValueError("oracle handles minus-kind infinite towers only")
        gens.append((M1.infinite.anchor, None))

    # F0 (x) M2 and F1 (x) M2, indexed by (generator, basis element of M2)
    f0 = {(gi, e): gens[gi][0] + deg2[e] for gi in range(len(gens)) for e in range(n2)}
    f1 = {(gi, e): gens[gi][0] - 2 * gens[gi][1] + deg2[e]
          for gi in range(len(gens)) if gens[gi][1] is not None for e in range(n2)}
    i0 = {x: i for i, x in enumerate(f0)}
    i1 = {x: i for i, x in enumerate(f1)}

    def upow(e, k):
        for _ in range(k):
            if e is None:
                return None
            e = u2[e]
        return e

    def phi(key):
        gi, e = key
        t = upow(e, gens[gi][1])
        return {} if t is None else {i0[(gi, t)]: 1}

    def u_on(index, keys):
        def apply(v):
            out = {}
            for i, c in v.items():
                gi, e = keys[i]
                t = u2[e]
                if t is not None:
                    la.axpy(out, c, {index[(gi, t)]: 1})
            return out
        return apply

    keys0, keys1 = list(f0), list(f1)
    num0, den0 = {}, {}
    for key, g in f0.items():
        num0.setdefault(g, []).append({i0[key]: 1})
    for key, g in f1.items():
        den0.setdefault(g, []).append(phi(key))
    coker, _ = subquotient_data(num0, den0, u_on(i0, keys0))

    num1 = {}
    by_deg = {}
    for key, g in f1.items():
        by_deg.setdefault(g, []).append(key)
    for g, ks in by_deg.items():
        kv = la.kernel([phi(k) for k in ks])
        num1[g] = [{i1[ks[j]]: c for j, c in v.items()} for v in kv]
    ker, _ = subquotient_data(num1, {}, u_on(i1, keys1))
    return coker.towers(), ker.towers()


def _multiset_minus(a, b):
    rest = list(b)
    out = []
    for t in a:
        if t in rest:
            rest.remove(t)
        else:
            out.append(t)
    return out


def oracle_tensor_tor(M1: GradedModule, M2: GradedModule, K: int):
    """Unshifted ``M1 (x) M2`` and ``Tor(M1, M2)`` from explicit presentations.

    Each finite tower ``T_a(b)`` of M1 is resolved by
    ``0 -> T-_{a-2b} -> T-_a -> T_a(b) -> 0`` (the map is ``U^b``) and the
    resolution is tensored with M2, whose free part is cut to ``Q[U]/U^K``.
    The cokernel of the resolved map is the tensor product and its kernel is
    Tor.  The computation is repeated at depth ``K + 1``: towers that change
    with the depth are the free tower (tensor side) or truncation artifacts
    (Tor side, dropped).
    """
    lengths = [t.length for t in M1.finite + M2.finite]
    if K < 1 or (lengths and K <= max(lengths)):
        raise ValueError("truncation depth K must exceed every tower length")
    co_a, ker_a = _oracle_raw(M1, M2, K)
    co_b, ker_b = _oracle_raw(M1, M2, K + 1)
    stable = _multiset_minus(co_a, _multiset_minus(co_a, co_b))
    moving = _multiset_minus(co_a, co_b)
    if len(moving) > 1:
        raise ArithmeticError("more than one free tower in the tensor product")
    inf = InfiniteTower("-", moving[0].top) if moving else None
    tensor = GradedModule(tuple(stable), inf)
    tor = GradedModule(tuple(_multiset_minus(ker_a, _multiset_minus(ker_a, ker_b))), None)
    return tensor, tor
