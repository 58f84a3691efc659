"""Noncommutative Gauss (LDU) decomposition of Lax operators and the
assembly of the current generators.

The Lax matrix L(u) factors as (unit lower) * (diagonal) * (unit upper)
with entries in a noncommutative ring; the factorization is computed by
Schur-complement recursion on the top-left pivot.  The + and - operators
share one rational kernel, so the decomposition is also carried out once
at the rational-function level; expanding that data in the two
directions must reproduce the series-level decompositions, which serves
as an independent oracle.

Currents are differences of the two expansions of the same rational
entry: X+_i = e+_{i+1,i} - e-_{i+1,i}, X-_i = f+_{i,i+1} - f-_{i,i+1},
together with the diagonal ratios psi_i = k-_{i+1} (k-_i)^{-1} and
phi_i = k+_{i+1} (k+_i)^{-1}.

Throughout this module the represented product of two algebra elements
a * b is the operator product in reversed order (the quantum-index
transposition in the Lax slicing makes the representation an
antihomomorphism); the helper ``omul`` keeps this in one place.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import gcd as gmpy_gcd
from gmpy2 import mpq

from .errors import GuardViolation, SingularPivot
from .graded import GradedMatrix
from .lax import LaxOperator
from .rational import Poly, RatFun
from .series import TruncSeries, compare_on_shared, expand_at_infinity, expand_at_zero


def omul(a, b):
    """Represented product a*b of algebra elements (series level)."""
    return b.mul(a)


def omul_rat(a, b):
    """Represented product a*b of algebra elements (rational level)."""
    return b * a


@dataclass
class GaussData:
    """Triangular data of one Lax operator.

    ``e[(i, j)]`` (i > j) fills the unit-lower factor, ``k[i]`` the
    diagonal, ``f[(i, j)]`` (i < j) the unit-upper factor; indices are
    1-based.  Entries are quantum-space-operator-valued series.
    """

    size: int
    sign: str
    e: dict = field(default_factory=dict)
    k: dict = field(default_factory=dict)
    f: dict = field(default_factory=dict)

    def k_inverse(self, i):
        return self.k[i].inverse()


def _schur(entries, size, mul, inverse, association):
    """Shared Schur-complement recursion for both entry rings."""
    e, k, f = {}, {}, {}
    cur = {(i, j): entries[(i, j)] for i in range(size) for j in range(size)}
    for step in range(size):
        pivot = cur[(step, step)]
        k[step + 1] = pivot
        try:
            pinv = inverse(pivot)
        except (SingularPivot, ZeroDivisionError):
            raise SingularPivot(f"pivot {step + 1} is not invertible")
        for j in range(step + 1, size):
            f[(step + 1, j + 1)] = mul(pinv, cur[(step, j)])
            e[(j + 1, step + 1)] = mul(cur[(j, step)], pinv)
        nxt = {}
        for i in range(step + 1, size):
            for j in range(step + 1, size):
                if association == "left":
                    corr = mul(mul(cur[(i, step)], pinv), cur[(step, j)])
                else:
                    corr = mul(cur[(i, step)], mul(pinv, cur[(step, j)]))
                nxt[(i, j)] = cur[(i, j)] - corr
        cur = nxt
    return e, k, f


def gauss_decompose(lax: LaxOperator, association="left") -> GaussData:
    """Decompose a Lax operator at the series level.

    ``association`` picks the grouping of the Schur update product; the
    two choices are mathematically equivalent and must agree, which the
    tests use as an order-robustness probe.
    """
    t = lax.module.dims.total
    e, k, f = _schur(lax.entries, t, omul, lambda s: s.inverse(), association)
    gd = GaussData(t, lax.sign)
    gd.e, gd.k, gd.f = e, k, f
    return gd


@dataclass
class RationalGaussData:
    """Gauss data over the rational-function entry ring (sign-free)."""

    size: int
    e: dict = field(default_factory=dict)
    k: dict = field(default_factory=dict)
    f: dict = field(default_factory=dict)


def _rational_inverse(m):
    try:
        return m.inv()
    except ZeroDivisionError:
        raise SingularPivot("rational pivot is singular")


def rational_generator_entries(module, var="u"):
    """Generator images as rational operator matrices, keyed (upper, lower)."""
    t = module.dims.total
    w = module.quantum_dim
    wpar = module.quantum_parities
    kernel = module.kernel(var)
    zero = RatFun(0)
    out = {}
    for ap in range(t):
        for al in range(t):
            data = {}
            for gp in range(w):
                for gl in range(w):
                    v = kernel.data.get((ap * w + gl, al * w + gp))
                    if v is not None:
                        data[(gp, gl)] = v
            out[(ap, al)] = GradedMatrix(wpar, data)
    return out


def gauss_decompose_rational(module, var="u", association="left"):
    """Decompose the rational kernel once for both signs."""
    t = module.dims.total
    entries = rational_generator_entries(module, var)
    e, k, f = _schur(entries, t, omul_rat, _rational_inverse, association)
    gd = RationalGaussData(t)
    gd.e, gd.k, gd.f = e, k, f
    return gd


def reconstruction_residual(gd: GaussData, lax: LaxOperator):
    """First mismatch of (unit-lower)(diag)(unit-upper) against L, or None."""
    t = gd.size
    one = TruncSeries.constant(
        GradedMatrix.identity(lax.module.quantum_parities))

    def efac(i, j):
        if i == j:
            return one
        return gd.e.get((i, j))

    def ffac(i, j):
        if i == j:
            return one
        return gd.f.get((i, j))

    for i in range(1, t + 1):
        for j in range(1, t + 1):
            acc = None
            for s in range(1, min(i, j) + 1):
                a, b = efac(i, s), ffac(s, j)
                if a is None or b is None:
                    continue
                term = omul(omul(a, gd.k[s]), b)
                acc = term if acc is None else acc + term
            target = lax.entries[(i - 1, j - 1)]
            status, witness, _ = compare_on_shared(acc, target)
            if status != "pass":
                return (i, j, status, witness)
    return None


def expand_rational_matrix(m, sign, var="u", order=8):
    """Expand a rational operator matrix into a matrix-valued series."""
    expand = expand_at_infinity if sign == "+" else expand_at_zero
    win = (-order, float("inf")) if sign == "+" else (float("-inf"), order)
    coeffs = {}
    for (r, c), fct in m.data.items():
        s = expand(fct, var, order)
        for e0, q in s.coeffs.items():
            coeffs.setdefault(e0, {})[(r, c)] = q
    mats = {e0: GradedMatrix(m.parities, d) for e0, d in coeffs.items()}
    return TruncSeries((var,), (win,), mats)


@dataclass
class CurrentSystem:
    """The current generators of one evaluation module at level zero.

    1-based indices; ``xplus``/``xminus`` run over 1..size-1, the
    diagonal families over 1..size.  ``parity[i]`` tags the odd pair.
    """

    module: object
    order: int
    size: int
    xplus: dict = field(default_factory=dict)
    xminus: dict = field(default_factory=dict)
    kplus: dict = field(default_factory=dict)
    kminus: dict = field(default_factory=dict)
    psi: dict = field(default_factory=dict)
    phi: dict = field(default_factory=dict)
    var: str = "u"

    def parity(self, i):
        """Parity of the i-th simple root pair."""
        return 1 if i == self.module.dims.m else 0

    def bracket_is_anticommutator(self, i, j):
        return self.parity(i) == 1 and self.parity(j) == 1


def build_currents(plus: GaussData, minus: GaussData, module, order,
                   var="u") -> CurrentSystem:
    """Assemble the currents from the two triangular decompositions."""
    if plus.sign != "+" or minus.sign != "-":
        raise ValueError("expected one decomposition per sign")
    if plus.size != minus.size:
        raise ValueError("mismatched modules")
    t = plus.size
    cs = CurrentSystem(module, order, t, var=var)
    for i in range(1, t + 1):
        cs.kplus[i] = plus.k[i]
        cs.kminus[i] = minus.k[i]
    for i in range(1, t):
        cs.xplus[i] = plus.e[(i + 1, i)] - minus.e[(i + 1, i)]
        cs.xminus[i] = plus.f[(i, i + 1)] - minus.f[(i, i + 1)]
        cs.psi[i] = omul(cs.kminus[i + 1], cs.kminus[i].inverse())
        cs.phi[i] = omul(cs.kplus[i + 1], cs.kplus[i].inverse())
    return cs


def currents_for(module, order=8, var="u") -> CurrentSystem:
    """One-call construction of the current system of a module."""
    lp = LaxOperator(module, "+", order, var)
    lm = LaxOperator(module, "-", order, var)
    return build_currents(gauss_decompose(lp), gauss_decompose(lm),
                          module, order, var)


# ---- pole data of rational operator matrices --------------------------------


def poly_derivative(p, var):
    """d/dvar of a polynomial univariate in var."""
    cl = p.coeff_list(var)
    x = Poly.var(var)
    out = Poly.const(0)
    for k in range(1, len(cl)):
        if cl[k]:
            out = out + Poly.const(k * cl[k]) * x ** (k - 1)
    return out


def _divisors(n):
    n = abs(int(n))
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def rational_roots(p, var):
    """All roots of a rational-coefficient polynomial, required simple.

    The factorization must be complete over the rationals; a repeated or
    irrational root raises GuardViolation, since the pole bookkeeping
    downstream assumes simple rational poles.
    """
    cl = [mpq(c) for c in p.coeff_list(var)]
    while cl and cl[-1] == 0:
        cl.pop()
    if len(cl) <= 1:
        return []
    roots = []
    if cl[0] == 0:
        if cl[1] == 0:
            raise GuardViolation("repeated pole at 0")
        roots.append(mpq(0))
        cl = cl[1:]

    def deflate(coeffs, r):
        # synthetic division by (var - r), highest degree first
        out = []
        acc = mpq(0)
        for c in reversed(coeffs):
            acc = c + acc * r
            out.append(acc)
        if out[-1] != 0:
            return None
        return list(reversed(out[:-1]))

    scale = 1
    for c in cl:
        scale = scale * c.denominator // gmpy_gcd(scale, c.denominator)
    ints = [c * scale for c in cl]
    cands = set()
    for pnum in _divisors(ints[0]):
        for qden in _divisors(ints[-1]):
            cands.add(mpq(pnum, qden))
            cands.add(-mpq(pnum, qden))
    for r in sorted(cands):
        nxt = deflate(cl, r)
        while nxt is not None:
            if r in roots:
                raise GuardViolation(f"repeated pole at {r}")
            roots.append(r)
            cl = nxt
            nxt = deflate(cl, r)
        if len(cl) <= 1:
            break
    if len(cl) > 1:
        raise GuardViolation("pole is not rational")
    return roots


def evaluate_rational_matrix(m, var, value):
    """Exact evaluation of a rational operator matrix at a point."""
    data = {}
    for key, f in m.data.items():
        den = f.den.eval({var: value}) if not f.den.is_constant() \
            else f.den.const_value()
        if den == 0:
            raise GuardViolation(f"evaluation at a pole: {value}")
        num = f.num.eval({var: value}) if not f.num.is_constant() \
            else f.num.const_value()
        if num:
            data[key] = mpq(num) / mpq(den)
    return GradedMatrix(m.parities, data)


def matrix_pole_residues(m, var):
    """Residues of a rational operator matrix at its (simple) poles."""
    per_root = {}
    for key, f in m.data.items():
        if f.den.is_constant():
            continue
        dprime = poly_derivative(f.den, var)
        for r in rational_roots(f.den, var):
            num = f.num.eval({var: r}) if not f.num.is_constant() \
                else f.num.const_value()
            res = mpq(num) / mpq(dprime.eval({var: r}))
            if res:
                per_root.setdefault(r, {})[key] = res
    return {r: GradedMatrix(m.parities, d) for r, d in per_root.items()}


def series_from_poles(poles, order, var="u"):
    """The delta-supported series sum_c res_c * delta(u - c), truncated."""
    coeffs = {}
    for j in range(-order, order + 1):
        acc = None
        for c, res in poles.items():
            term = res.scaled(mpq(c) ** (-1 - j))
            acc = term if acc is None else acc + term
        if acc is not None and not acc.is_zero():
            coeffs[(j,)] = acc
    return TruncSeries((var,), ((-order, order),), coeffs)
