"""Graded index bookkeeping, sign rules, graded tensor products, P and theta.

Matrices are square and sparse (dict keyed by (row, col)), with a parity
tuple attached to the basis indices.  Entries can be any commutative or
noncommutative ring element supporting +, -, *; missing entries are exact
zeros.  Operators on tensor products are represented by concrete matrices
with the graded multiplication signs baked in, so that composition of the
concrete matrices is ordinary matrix multiplication:

    gk(A, B)[(i,j),(k,l)] = (-1)^{([j]+[l]) [k]} A[i,k] B[j,l]

for the homogeneous entry decomposition of B, which realizes
(a (x) b)(c (x) d) = (-1)^{[b][c]} (ac (x) bd).
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq


@dataclass(frozen=True)
class GradedDims:
    """Dimension pair (m, n): indices 1..m are even, m+1..m+n are odd."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0 or self.m + self.n < 1:
            raise ValueError("need m >= 0, n >= 0, m + n >= 1")

    @property
    def total(self):
        return self.m + self.n

    def parity(self, i):
        """Z2 parity of basis index i (1-based)."""
        if not 1 <= i <= self.total:
            raise IndexError(f"index {i} out of range 1..{self.total}")
        return 0 if i <= self.m else 1

    def parities(self):
        return tuple(0 if i <= self.m else 1 for i in range(1, self.total + 1))


def parity(dims, i):
    """Z2 parity of basis index i of a GradedDims context."""
    return dims.parity(i)


def _is_zero_entry(x):
    if isinstance(x, (int, type(mpq(0)))):
        return x == 0
    iz = getattr(x, "is_zero", None)
    if iz is not None:
        try:
            return bool(iz())
        except TypeError:
            return False
    return False


class GradedMatrix:
    """Square sparse matrix with a parity label per basis index."""

    __slots__ = ("parities", "data")

    def __init__(self, parities, data=None):
        self.parities = tuple(parities)
        self.data = {}
        if data:
            for (r, c), v in data.items():
                if not _is_zero_entry(v):
                    self.data[(r, c)] = v

    # ---- constructors -------------------------------------------------

    @classmethod
    def from_dims(cls, dims, order=1, data=None):
        p = dims.parities()
        pp = p
        for _ in range(order - 1):
            pp = tuple((a + b) % 2 for a in pp for b in p)
        return cls(pp, data)

    @classmethod
    def identity(cls, parities, one=None):
        one = mpq(1) if one is None else one
        return cls(parities, {(i, i): one for i in range(len(parities))})

    @classmethod
    def unit(cls, dims, i, j, one=None):
        """Matrix unit E^i_j (1-based): maps v_j to v_i."""
        one = mpq(1) if one is None else one
        return cls(dims.parities(), {(i - 1, j - 1): one})

    # ---- basic structure ----------------------------------------------

    @property
    def size(self):
        return len(self.parities)

    def get(self, r, c):
        return self.data.get((r, c), 0)

    def is_zero(self):
        return not self.data

    def entry_homogeneous(self):
        """Matrix parity if every entry connects indices of one parity gap."""
        gaps = {(self.parities[r] + self.parities[c]) % 2 for r, c in self.data}
        if len(gaps) > 1:
            return None
        return gaps.pop() if gaps else 0

    # ---- arithmetic ----------------------------------------------------

    def _check(self, other):
        if self.parities != other.parities:
            raise ValueError("graded matrix dims mismatch")

    def __add__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        self._check(other)
        out = dict(self.data)
        for k, v in other.data.items():
            s = out.get(k, 0) + v
            if _is_zero_entry(s):
                out.pop(k, None)
            else:
                out[k] = s
        return GradedMatrix(self.parities, out)

    def __neg__(self):
        return GradedMatrix(self.parities, {k: -v for k, v in self.data.items()})

    def __sub__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        """Ordinary (sign-free) matrix product; signs live in the entries."""
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        self._check(other)
        cols = {}
        for (r, c), v in other.data.items():
            cols.setdefault(r, []).append((c, v))
        out = {}
        for (r, c), a in self.data.items():
            for c2, b in cols.get(c, ()):
                k = (r, c2)
                s = out.get(k, 0) + a * b
                if _is_zero_entry(s):
                    out.pop(k, None)
                else:
                    out[k] = s
        return GradedMatrix(self.parities, out)

    def scaled(self, s):
        return GradedMatrix(self.parities, {k: s * v for k, v in self.data.items()})

    def scaled_right(self, s):
        return GradedMatrix(self.parities, {k: v * s for k, v in self.data.items()})

    def __eq__(self, other):
        if not isinstance(other, GradedMatrix):
            if other == 0:
                return self.is_zero()
            return NotImplemented
        if self.parities != other.parities:
            return False
        keys = set(self.data) | set(other.data)
        return all(self.get(*k) == other.get(*k) for k in keys)

    def __hash__(self):
        return hash((self.parities, frozenset(self.data)))

    def transform(self, fn):
        return GradedMatrix(self.parities, {k: fn(v) for k, v in self.data.items()})

    def inv(self):
        """Exact inverse by Gauss-Jordan; entries must form a field (mpq or
        rational functions)."""
        n = self.size
        sample = next(iter(self.data.values()), mpq(0))
        if isinstance(sample, (int, type(mpq(0)))):
            zero, one = mpq(0), mpq(1)
            a = [[mpq(self.get(r, c)) for c in range(n)] for r in range(n)]
        else:
            field = type(sample)
            zero, one = field(0), field(1)
            a = [[self.get(r, c) if (r, c) in self.data else zero for c in range(n)] for r in range(n)]
        b = [[one if r == c else zero for c in range(n)] for r in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
            d = a[col][col]
            a[col] = [x / d for x in a[col]]
            b[col] = [x / d for x in b[col]]
            for r in range(n):
                if r != col and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                    b[r] = [x - f * y for x, y in zip(b[r], b[col])]
        return GradedMatrix(
            self.parities,
            {(r, c): b[r][c] for r in range(n) for c in range(n) if b[r][c] != 0},
        )

    def to_dense(self):
        return [[self.get(r, c) for c in range(self.size)] for r in range(self.size)]

    def __repr__(self):
        return f"GradedMatrix(size={self.size}, nnz={len(self.data)})"


def graded_kron(a, b):
    """Graded tensor product of two operators as one concrete matrix.

    Every entry of ``b`` is treated as a homogeneous component; the sign
    (-1)^{[b][c]} of the graded multiplication rule is folded into the
    entries, so products of graded_kron results are ordinary matrix
    products.
    """
    pa, pb = a.parities, b.parities
    nb = len(pb)
    out = {}
    for (i, k), x in a.data.items():
        pk = pa[k]
        for (j, l), y in b.data.items():
            sign = -1 if pk and (pb[j] + pb[l]) % 2 else 1
            v = x * y
            out[(i * nb + j, k * nb + l)] = -v if sign < 0 else v
    parities = tuple((x + y) % 2 for x in pa for y in pb)
    return GradedMatrix(parities, out)


def permutation_op(dims):
    """Graded permutation P: v_a (x) v_b -> (-1)^{[a][b]} v_b (x) v_a."""
    t = dims.total
    p = dims.parities()
    data = {}
    for a in range(t):
        for b in range(t):
            sign = -1 if p[a] and p[b] else 1
            data[(b * t + a, a * t + b)] = mpq(sign)
    return GradedMatrix(tuple((x + y) % 2 for x in p for y in p), data)


def theta_op(dims):
    """Diagonal sign matrix with entry (-1)^{[a][b]} at ((a,b),(a,b))."""
    t = dims.total
    p = dims.parities()
    data = {}
    for a in range(t):
        for b in range(t):
            i = a * t + b
            data[(i, i)] = mpq(-1 if p[a] and p[b] else 1)
    return GradedMatrix(tuple((x + y) % 2 for x in p for y in p), data)


def weight_conserving(mat):
    """True when entries vanish unless row and column parities agree."""
    p = mat.parities
    return all((p[r] + p[c]) % 2 == 0 for r, c in mat.data)
