"""HF+ of 1/n surgeries from a bifiltered model, via the truncated mapping cone.

Everything is computed over Q by exact elimination on complexes truncated
from above in grading.  Homology of such a truncation is correct strictly
below the cut, which is where all finite towers must live.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import _linalg as la
from .floer_space import FloerPlus, ManifoldInvariants, h_invariant
from .knot_invariants import (KnotDesc, alexander, arf, casson_surgery, is_lspace_form,
                              rohlin_surgery, signature, unknot)
from .qu_modules import FiniteTower, GradedModule, InfiniteTower, subquotient_data
from .thin_cfk import BifilteredComplex, ThinModelSpec, staircase_model, thin_model

CONSTRAINTS = ("max", "i", "j", "min")


class SurgeryError(RuntimeError):
    pass


class StabilizationError(SurgeryError):
    pass


class SurjectivityError(SurgeryError):
    pass


class CalibrationError(SurgeryError):
    pass


def _genus_bound(C: BifilteredComplex):
    return max(abs(a) for _, a in C.gens)


def _lower_bound(constraint, s, alex):
    """Smallest ``i`` of ``[x, i, i + alex]`` in the quotient complex."""
    if constraint == "max":
        return min(0, s - alex)
    if constraint == "i":
        return 0
    if constraint == "j":
        return s - alex
    if constraint == "min":
        return max(0, s - alex)
    raise ValueError("unknown constraint %r" % constraint)


class _Complex:
    """A chain complex assembled from quotient pieces of a model, cut at ``gmax``."""

    def __init__(self, C: BifilteredComplex, gmax: int):
        self.C = C
        self.gmax = gmax
        self.keys, self.gr, self.index = [], [], {}
        self.pieces = []

    def add_piece(self, constraint, s, shift, sign=1):
        """Append ``C{constraint}`` with gradings shifted by ``shift``; returns the piece id."""
        pid = len(self.pieces)
        bounds = [_lower_bound(constraint, s, a) for _, a in self.C.gens]
        self.pieces.append((constraint, s, shift, sign, bounds))
        for x, (m, a) in enumerate(self.C.gens):
            i = bounds[x]
            while m + 2 * i + shift <= self.gmax:
                self.index[(pid, x, i)] = len(self.keys)
                self.keys.append((pid, x, i))
                self.gr.append(m + 2 * i + shift)
                i += 1
        return pid

    def contains(self, pid, x, i):
        return i >= self.pieces[pid][4][x]

    def internal(self, k):
        """Differential of basis element ``k`` inside its own piece."""
        pid, x, i = self.keys[k]
        sign = self.pieces[pid][3]
        out = {}
        for s_, t, c, di, dj in self.C.arrows:
            if s_ != x or not self.contains(pid, t, i - di):
                continue
            la.axpy(out, sign * c, {self.index[(pid, t, i - di)]: 1})
        return out

    def u_apply(self, v):
        out = {}
        for k, c in v.items():
            pid, x, i = self.keys[k]
            if self.contains(pid, x, i - 1):
                la.axpy(out, c, {self.index[(pid, x, i - 1)]: 1})
        return out

    def by_degree(self, subset=None):
        deg = {}
        for k, g in enumerate(self.gr):
            if subset is None or subset(k):
                deg.setdefault(g, []).append(k)
        return deg


def _homology(cx: _Complex, diff, subset=None, top=None):
    """Cycles/boundaries per degree and the module data, valid up to ``top``."""
    top = cx.gmax - 1 if top is None else top
    deg = cx.by_degree(subset)
    images = {k: diff(k) for ks in deg.values() for k in ks}
    num, den = {}, {}
    for g, ks in deg.items():
        if g > top:
            continue
        num[g] = [{ks[a]: c for a, c in z.items()} for z in la.kernel([images[k] for k in ks])]
        den[g] = [images[k] for k in deg.get(g + 1, []) if images[k]]
    data, hs = subquotient_data(num, den, cx.u_apply)
    return data, hs, images


def _split_towers(data, top):
    """Separate the tower cut off at ``top`` from the genuinely finite ones."""
    towers = data.towers(hi=top)
    cut = [t for t in towers if t.top >= top - 1]
    fin = [t for t in towers if t.top < top - 1]
    return cut, fin


@dataclass(frozen=True)
class SubquotientSpec:
    complex: BifilteredComplex
    constraint: str
    s: int
    trunc: int = None


def _a_plus_raw(spec: SubquotientSpec, trunc):
    C = spec.complex
    low = min(m + 2 * _lower_bound(spec.constraint, spec.s, a) for m, a in C.gens)
    cx = _Complex(C, low + trunc)
    cx.add_piece(spec.constraint, spec.s, 0)
    data, _, _ = _homology(cx, cx.internal)
    top = cx.gmax - 1
    cut, fin = _split_towers(data, top)
    if len(cut) != 1:
        raise StabilizationError("expected one tower reaching the cut, found %d" % len(cut))
    if fin and max(t.top for t in fin) > top - 4:
        raise StabilizationError("finite tower too close to the truncation")
    return GradedModule(tuple(fin), InfiniteTower("+", cut[0].bottom))


def _default_trunc(C):
    return 4 * _genus_bound(C) + 8


@lru_cache(maxsize=4096)
def a_plus(spec: SubquotientSpec) -> GradedModule:
    """Homology of ``C{constraint}``: one plus-tower plus finite towers (natural grading)."""
    if spec.constraint not in CONSTRAINTS:
        raise ValueError("constraint must be one of %s" % (CONSTRAINTS,))
    trunc = spec.trunc or _default_trunc(spec.complex)
    first = _a_plus_raw(spec, trunc)
    if _a_plus_raw(spec, trunc + 2) != first:
        raise StabilizationError("A+ changed when the truncation was raised")
    return first


def e_normalization(spec: SubquotientSpec):
    """Bottom grading of the plus-tower of ``H(C{max(i, j - s) >= 0})``."""
    if spec.constraint != "max":
        spec = SubquotientSpec(spec.complex, "max", spec.s, spec.trunc)
    return a_plus(spec).infinite.anchor


@dataclass(frozen=True)
class MappingConeSpec:
    complex: BifilteredComplex
    n: int
    s_range: int = None
    trunc: int = None


def _positions(n, N):
    return -N * n - 1, N * n + n - 1


def _a_shifts(n, N):
    """Relative grading shift of the A column at each position (B uses the same)."""
    p0, p1 = _positions(n, N)
    sig = {0: 0}
    for p in range(0, p1):
        sig[p + 1] = sig[p] + 2 * (p // n)
    for p in range(-1, p0 - 1, -1):
        sig[p] = sig[p + 1] - 2 * (p // n)
    return sig


def _cone_window(C, n, N, margin):
    """Cut-off grading for the cone: above every reduced piece and the central towers."""
    sig = _a_shifts(n, N)
    p0, p1 = _positions(n, N)
    mods = {s: a_plus(SubquotientSpec(C, "max", s)) for s in range(p0 // n, p1 // n + 1)}
    top = max(sig[p] + mods[0].infinite.anchor for p in range(n))
    for p in range(p0, p1 + 1):
        m = mods[p // n]
        for t in m.finite:
            top = max(top, sig[p] + t.top)
        if m.finite:
            top = max(top, sig[p] + m.infinite.anchor)
    return top + margin


def _cone_raw(C: BifilteredComplex, n, N, margin, check_surjective=True):
    p0, p1 = _positions(n, N)
    sig = _a_shifts(n, N)
    cx = _Complex(C, _cone_window(C, n, N, margin))
    a_id, b_id = {}, {}
    for p in range(p0, p1 + 1):
        a_id[p] = cx.add_piece("max", p // n, sig[p])
    for p in range(p0 + 1, p1 + 1):
        # B columns sit one degree lower in the cone; D = -d on them
        b_id[p] = cx.add_piece("i", 0, sig[p] - 1, sign=-1)
    a_pos = {pid: p for p, pid in a_id.items()}

    def phi(k):
        pid, x, i = cx.keys[k]
        p = a_pos[pid]
        s = p // n
        out = {}
        if p in b_id and i >= 0:
            la.axpy(out, 1, {cx.index[(b_id[p], x, i)]: 1})
        j = i + C.gens[x][1]
        if p + 1 in b_id and j >= s:
            y, sgn = C.flip[x]
            la.axpy(out, sgn, {cx.index[(b_id[p + 1], y, j - s)]: 1})
        return out

    def diff(k):
        out = cx.internal(k)
        if cx.keys[k][0] in a_pos:
            la.axpy(out, 1, phi(k))
        return out

    top = cx.gmax - 1
    data, _, images = _homology(cx, diff)
    for k, img in images.items():
        sq = {}
        for a, c in img.items():
            if a in images:
                la.axpy(sq, c, images[a])
        if sq:
            raise SurgeryError("cone differential does not square to zero")
    cut, fin = _split_towers(data, top)
    # both failures mean homology reaches the cut: the window is too low
    if len(cut) != 1:
        raise StabilizationError("expected one tower reaching the cut, found %d" % len(cut))
    if fin and max(t.top for t in fin) > top - 4:
        raise StabilizationError("reduced tower too close to the truncation")
    if check_surjective:
        _check_surjective(cx, a_pos, phi, top)
    return cut[0].bottom, tuple(fin)


def _check_surjective(cx, a_pos, phi, top):
    is_a = lambda k: cx.keys[k][0] in a_pos
    _, ha, _ = _homology(cx, cx.internal, subset=is_a, top=top)
    _, hb, _ = _homology(cx, cx.internal, subset=lambda k: not is_a(k), top=top - 1)
    for g, hbg in hb.items():
        if not hbg.dim:
            continue
        src = ha.get(g + 1)
        imgs = [hbg.coords(phi_vec(phi, z)) for z in (src.reps if src else [])]
        r = la.dense_rank(imgs) if imgs else 0
        if r != hbg.dim:
            raise SurjectivityError("Phi is not surjective in degree %d" % g)


def phi_vec(phi, z):
    out = {}
    for k, c in z.items():
        la.axpy(out, c, phi(k))
    return out


MAX_WINDOW_RETRIES = 8


def _cone(C, n, N, margin, check_surjective=True):
    """``_cone_raw`` with the cut raised until no homology reaches it.

    Below the cut the truncated complex is exact, so raising it never changes
    what was already computed.  Returns the result and the margin used.
    """
    for attempt in range(MAX_WINDOW_RETRIES):
        try:
            return _cone_raw(C, n, N, margin, check_surjective), margin
        except StabilizationError:
            if attempt == MAX_WINDOW_RETRIES - 1:
                raise
            margin += 4


@lru_cache(maxsize=None)
def _calibration(n):
    """Global grading constant fixed by requiring the unknot to give S^3."""
    d_raw, red = _cone_raw(_model_for(unknot()), n, 1, 6)
    if red:
        raise CalibrationError("unknot cone has a reduced part")
    return -d_raw


def surgery_hf_plus(spec: MappingConeSpec, check_stable=True) -> FloerPlus:
    """HF+ of ``S^3_{1/n}(K)`` as the kernel of the truncated cone map (``n > 0``)."""
    C, n = spec.complex, spec.n
    if n < 1:
        raise ValueError("n must be positive; use the mirror for negative surgeries")
    g = _genus_bound(C)
    N = spec.s_range if spec.s_range is not None else g + 1
    if N < g:
        raise ValueError("s_range must be at least the genus bound %d" % g)
    trunc = spec.trunc if spec.trunc is not None else 6
    off = _calibration(n)
    (d_raw, red), used = _cone(C, n, N, trunc)
    if check_stable and _cone(C, n, N + 1, used + 2, check_surjective=False)[0] != (d_raw, red):
        raise StabilizationError("cone homology changed when N and the truncation were raised")
    d = d_raw + off
    red = tuple(FiniteTower(t.top + off, t.length) for t in red)
    out = FloerPlus(d, red, zhs=True)
    # the tower of A_0 sits exactly at d
    if e_normalization(SubquotientSpec(C, "max", 0)) + off != d:
        raise CalibrationError("bottom of A_0 does not match d")
    return out


def _model_for(K: KnotDesc) -> BifilteredComplex:
    if K.kind == "unknot":
        return BifilteredComplex([(0, 0)], [], [(0, 1)], tau=0)
    delta = alexander(K)
    if K.kind == "torus":
        base = staircase_model(delta)
        return base.dual() if K.mirrored else base
    if K.kind in ("twobridge", "figure8"):
        # alternating, hence thin with tau equal to the signature
        return thin_model(ThinModelSpec(delta, signature(K)))
    raise SurgeryError("no CFK model for knot %s" % K.label())


def model_for(K: KnotDesc) -> BifilteredComplex:
    return _model_for(K)


def surgery_for_knot(K: KnotDesc, n: int, s_range=None, trunc=None, check_stable=True) -> FloerPlus:
    if n == 0:
        raise ValueError("0-surgery is not a homology sphere")
    if n < 0:
        from .floer_space import orientation_reverse
        return orientation_reverse(surgery_for_knot(K.mirror(), -n, s_range, trunc, check_stable))
    return surgery_hf_plus(MappingConeSpec(_model_for(K), n, s_range, trunc), check_stable)


def surgered_manifold_invariants(K: KnotDesc, n: int, s_range=None, trunc=None) -> ManifoldInvariants:
    M = surgery_for_knot(K, n, s_range, trunc)
    extra = {"arf": arf(K), "signature": signature(K), "casson": casson_surgery(K, n),
             "lspace_knot": is_lspace_form(alexander(K))}
    return ManifoldInvariants(M, rohlin_surgery(K, n), "S^3_{1/%d}(%s)" % (n, K.label()), extra)
