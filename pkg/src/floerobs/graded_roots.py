"""HF+ of Brieskorn spheres from the tau function of a graded root.

For ``Sigma(a1, a2, a3)`` with Seifert invariants ``e0 + sum w_l/a_l = -1/(a1 a2 a3)``
the increments are ``Delta(n) = 1 + |e0| n - sum_l ceil(n w_l / a_l)`` and
``tau(n) = sum_{m<n} Delta(m)``.  The sublevel sets of ``tau`` form the graded
root; its homology is ``HF+(-Sigma)`` with level ``k`` in degree
``2k - (K^2 + s)/4`` where ``K^2 + s`` comes from the star-shaped plumbing.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
import json
import os

from . import _kernels
from . import _linalg as la
from .floer_space import FloerPlus, ManifoldInvariants, orientation_reverse
from .qu_modules import FiniteTower

MAX_EXPONENT = 10 ** 4
FIXTURE_PATH = os.path.join(os.path.dirname(__file__), "data", "orientation_fixture.json")


class UnsupportedFamily(ValueError):
    pass


@dataclass(frozen=True)
class SeifertData:
    a1: int
    a2: int
    a3: int
    orientation: int = 1

    def __post_init__(self):
        a = sorted((int(self.a1), int(self.a2), int(self.a3)))
        if a[0] < 2:
            raise ValueError("Brieskorn exponents must be at least 2")
        if gcd(a[0], a[1]) != 1 or gcd(a[0], a[2]) != 1 or gcd(a[1], a[2]) != 1:
            raise ValueError("Brieskorn exponents must be pairwise coprime")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        object.__setattr__(self, "a1", a[0])
        object.__setattr__(self, "a2", a[1])
        object.__setattr__(self, "a3", a[2])

    @property
    def alphas(self):
        return (self.a1, self.a2, self.a3)

    def reversed(self):
        return SeifertData(self.a1, self.a2, self.a3, -self.orientation)

    def label(self):
        s = "Sigma(%d,%d,%d)" % self.alphas
        return s if self.orientation > 0 else "-" + s


def parse_brieskorn(text: str) -> SeifertData:
    """``a1,a2,a3[,+|-]``, optionally prefixed by ``brieskorn:``."""
    body = text.split(":", 1)[1] if text.startswith("brieskorn:") else text
    parts = [p.strip() for p in body.split(",")]
    sign = 1
    if parts and parts[-1] in ("+", "-"):
        sign = 1 if parts.pop() == "+" else -1
    if len(parts) != 3:
        raise ValueError("expected three exponents in %r" % text)
    return SeifertData(*(int(p) for p in parts), orientation=sign)


def seifert_invariants(S: SeifertData):
    """Normalized invariants ``(e0, (w1, w2, w3))`` with ``0 < w_l < a_l``."""
    A = S.a1 * S.a2 * S.a3
    ws = []
    for a in S.alphas:
        c = A // a
        ws.append((-pow(c, -1, a)) % a)
    num = -1 - sum(w * (A // a) for w, a in zip(ws, S.alphas))
    assert num % A == 0
    return num // A, tuple(ws)


def _frobenius_bound(S: SeifertData):
    a1, a2, a3 = S.alphas
    return a1 * a2 * a3 - a1 * a2 - a1 * a3 - a2 * a3


@dataclass(frozen=True)
class TauSequence:
    values: tuple
    stable_from: int


def _check_size(S):
    if S.a3 > MAX_EXPONENT:
        raise OverflowError("exponent %d exceeds the supported bound %d" % (S.a3, MAX_EXPONENT))


def delta_function(S: SeifertData, length: int, use_numba=None):
    e0, ws = seifert_invariants(S)
    return _kernels.delta_values(-e0, S.alphas, ws, length, use_numba)


def delta_semigroup(S: SeifertData, n: int) -> int:
    """``Delta(n)`` for ``0 <= n <= N0`` read off the semigroup ``<a2a3, a1a3, a1a2>``."""
    a1, a2, a3 = S.alphas
    gens = (a2 * a3, a1 * a3, a1 * a2)
    N0 = _frobenius_bound(S)

    def member(m):
        if m < 0:
            return False
        for x in range(m // gens[0] + 1):
            r = m - x * gens[0]
            for y in range(r // gens[1] + 1):
                if (r - y * gens[1]) % gens[2] == 0:
                    return True
        return False

    if not 0 <= n <= N0:
        raise ValueError("semigroup description holds on [0, N0]")
    if member(n):
        return 1
    if member(N0 - n):
        return -1
    return 0


def tau_sequence(S: SeifertData, use_numba=None) -> TauSequence:
    _check_size(S)
    N0 = _frobenius_bound(S)
    A = S.a1 * S.a2 * S.a3
    length = max(N0, 0) + A + 2
    delta = delta_function(S, length, use_numba)
    if (delta[max(N0 + 1, 0):] < 0).any():
        raise ArithmeticError("tau is not eventually non-decreasing")
    L = max(N0 + 1, 0)
    tau = [0]
    for n in range(L):
        tau.append(tau[-1] + int(delta[n]))
    return TauSequence(tuple(tau), L)


def root_towers(tau):
    """Finite towers of the graded root as ``(birth, death)`` level pairs.

    Sublevel components merge by the elder rule; the younger minimum gives a
    tower on levels ``birth .. death - 1``.
    """
    order = sorted(range(len(tau)), key=lambda k: (tau[k], k))
    parent = list(range(len(tau)))
    low = list(tau)
    alive = [False] * len(tau)
    pairs = []

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for k in order:
        alive[k] = True
        for nb in (k - 1, k + 1):
            if 0 <= nb < len(tau) and alive[nb]:
                r1, r2 = find(k), find(nb)
                if r1 == r2:
                    continue
                old, young = (r1, r2) if (low[r1], r1) <= (low[r2], r2) else (r2, r1)
                if low[young] < tau[k]:
                    pairs.append((low[young], tau[k]))
                parent[young] = old
    return sorted(pairs)


def plumbing_graph(S: SeifertData):
    """Weights and edges of the negative definite star-shaped plumbing."""
    e0, ws = seifert_invariants(S)
    weights, edges = [e0], []
    for a, w in zip(S.alphas, ws):
        prev = 0
        x, y = a, w
        while y:
            b = -(-x // y)
            weights.append(-b)
            edges.append((prev, len(weights) - 1))
            prev = len(weights) - 1
            x, y = y, b * y - x
    return weights, edges


def k_squared_plus_s(S: SeifertData) -> Fraction:
    weights, edges = plumbing_graph(S)
    n = len(weights)
    Q = [[Fraction(0)] * n for _ in range(n)]
    for i, w in enumerate(weights):
        Q[i][i] = Fraction(w)
    for i, j in edges:
        Q[i][j] = Q[j][i] = Fraction(1)
    if abs(la.determinant(Q)) != 1:
        raise ArithmeticError("plumbing is not unimodular")
    r = [Fraction(-w - 2) for w in weights]
    Qi = la.inverse(Q)
    k2 = sum(r[i] * Qi[i][j] * r[j] for i in range(n) for j in range(n))
    return k2 + n


def d_invariant(S: SeifertData) -> Fraction:
    """d of the positively oriented Brieskorn sphere (sign flips with ``orientation``)."""
    tau = tau_sequence(S).values
    d = k_squared_plus_s(S) / 4 - 2 * min(tau)
    return d * S.orientation


def hf_plus(S: SeifertData) -> FloerPlus:
    tau = tau_sequence(S).values
    shift = -k_squared_plus_s(S) / 4
    red = tuple(FiniteTower(2 * (death - 1) + shift, death - birth)
                for birth, death in root_towers(tau))
    reverse_side = FloerPlus(2 * min(tau) + shift, red)  # HF+(-Sigma)
    pos = orientation_reverse(reverse_side)
    return pos if S.orientation > 0 else reverse_side


def milnor_signature(S: SeifertData, use_numba=None) -> int:
    _check_size(S)
    out, mid = _kernels.brieskorn_counts(*S.alphas, use_numba=use_numba)
    return out - mid


def casson(S: SeifertData) -> int:
    sig = milnor_signature(S)
    if sig % 8:
        raise ArithmeticError("Milnor fiber signature %d is not divisible by 8" % sig)
    return S.orientation * sig // 8


def brieskorn_invariants(S: SeifertData) -> ManifoldInvariants:
    lam = casson(S)
    return ManifoldInvariants(hf_plus(S), lam % 2, S.label(), {"casson": lam})


def load_fixture(path=None):
    with open(path or FIXTURE_PATH) as fh:
        return json.load(fh)


def brieskorn_from_surgery(K, n, fixture=None) -> SeifertData:
    """Seifert data of ``S^3_{1/n}(K)`` for the trefoils and (n = +-1) the figure-eight."""
    if n == 0:
        raise UnsupportedFamily("0-surgery is not a homology sphere")
    table = (fixture or load_fixture())["families"]
    label = K.label()
    sgn = 1 if n > 0 else -1
    for row in table:
        if row["knot"] == label and row["n_sign"] == sgn:
            if row.get("only_abs_n") is not None and abs(n) != row["only_abs_n"]:
                break
            scale, offset = row["a3"]
            a3 = scale * abs(n) + offset
            return SeifertData(2, 3, a3, row["orientation"])
    raise UnsupportedFamily("no Brieskorn description of 1/%d surgery on %s" % (n, label))
