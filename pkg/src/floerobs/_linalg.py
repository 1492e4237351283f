"""Exact sparse linear algebra over Q.

Vectors are dicts mapping an integer index to a nonzero ``Fraction`` (or int).
Everything here is exact; there is no floating point.
"""

from fractions import Fraction


def axpy(y, a, x):
    """In place ``y += a * x`` for sparse vectors."""
    for k, v in x.items():
        nv = y.get(k, 0) + a * v
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)


def scale(x, a):
    return {k: a * v for k, v in x.items()} if a else {}


class Echelon:
    """Row echelon basis of a subspace, built one vector at a time.

    Each stored row has its largest index as pivot, normalized to 1.  Rows
    optionally carry a tag vector recording how they were formed, which lets
    callers read off coordinates or kernel relations.
    """

    def __init__(self):
        self.rows = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, v, tag=None, full=False):
        """Reduce ``v`` against the basis.

        Returns ``(residual, tag)``.  Without ``full`` the reduction stops at
        the first non-pivot leading index, which is enough to decide
        membership.
        """
        v = dict(v)
        tag = dict(tag) if tag is not None else None
        rows = self.rows
        bound = None  # in full mode, every index >= bound is a non-pivot left in v
        while v:
            if bound is None:
                k = max(v)
            else:
                k = max((x for x in v if x < bound), default=None)
                if k is None:
                    break
            entry = rows.get(k)
            if entry is None:
                if not full:
                    break
                bound = k
                continue
            row, rtag = entry
            c = v[k]
            axpy(v, -c, row)
            if tag is not None and rtag:
                axpy(tag, -c, rtag)
        return v, tag

    def insert_reduced(self, v, tag=None):
        """Store a residual returned by :meth:`reduce` (must be nonzero)."""
        k = max(v)
        c = v[k]
        # unit pivots keep integer entries integral
        inv = c if c in (1, -1) else Fraction(1) / Fraction(c)
        row = scale(v, inv)
        rtag = scale(tag, inv) if tag is not None else None
        self.rows[k] = (row, rtag)
        return k

    def add(self, v, tag=None):
        """Add ``v``; return True if it enlarged the span."""
        r, t = self.reduce(v, tag)
        if not r:
            return False
        self.insert_reduced(r, t)
        return True

    def contains(self, v):
        r, _ = self.reduce(v)
        return not r


def rank(vectors):
    e = Echelon()
    return sum(1 for v in vectors if e.add(v))


def kernel(images):
    """Kernel of the linear map sending basis vector ``j`` to ``images[j]``.

    Returns a list of sparse source vectors spanning the kernel.
    """
    e = Echelon()
    out = []
    for j, w in enumerate(images):
        r, t = e.reduce(w, {j: 1})
        if r:
            e.insert_reduced(r, t)
        else:
            out.append(t)
    return out


def image_basis(images):
    e = Echelon()
    for w in images:
        e.add(w)
    return e


def apply(images, v):
    """Apply a map (list of column images) to a sparse source vector."""
    out = {}
    for j, c in v.items():
        axpy(out, c, images[j])
    return out


class Homology:
    """Homology of one degree of a complex, with coordinates.

    ``boundaries`` spans B, ``cycles`` spans Z.  Representatives of a basis of
    Z/B are chosen, and :meth:`coords` expresses any cycle in that basis.
    """

    def __init__(self, cycles, boundaries):
        self._ech = Echelon()
        for b in boundaries:
            self._ech.add(b)
        self.nb = len(self._ech)
        self.reps = []
        for z in cycles:
            idx = len(self.reps)
            r, t = self._ech.reduce(z, {})
            if r:
                t = dict(t)
                t[idx] = t.get(idx, 0) + 1
                self._ech.insert_reduced(r, t)
                self.reps.append(z)

    @property
    def dim(self):
        return len(self.reps)

    def coords(self, z):
        r, t = self._ech.reduce(z, {}, full=True)
        if r:
            raise ValueError("vector is not a cycle of this complex")
        # the reduction tag accumulates minus the coefficients
        return [-Fraction(t.get(i, 0)) for i in range(len(self.reps))]


def dense_rank(mat):
    """Rank of a dense matrix given as a list of rows."""
    return rank([{j: x for j, x in enumerate(row) if x} for row in mat])


def matmul(a, b):
    if not a or not b:
        return []
    n, m, p = len(a), len(b), len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p)] for i in range(n)]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def inverse(mat):
    """Exact inverse of a square matrix by Gauss-Jordan."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def determinant(mat):
    """Exact determinant (Fraction) of a square matrix."""
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def symmetric_signature(mat):
    """Signature of a rational symmetric matrix by exact congruence diagonalization."""
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            # no nonzero diagonal entry: use an off-diagonal pair
            pair = next(((i, j) for i in active for j in active if i < j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # replace row/col i by i + j, which makes a[i][i] = 2 a[i][j] + a[j][j] != 0
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            continue
        p = a[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for i in active:
            if i != piv and a[i][piv] != 0:
                f = a[i][piv] / p
                for k in active:
                    a[i][k] -= f * a[piv][k]
        for i in active:
            if i != piv:
                a[piv][i] = Fraction(0)
        active.remove(piv)
    return pos - neg
