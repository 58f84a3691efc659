"""Truncated bilateral Laurent series with validity windows.

A TruncSeries stores exact coefficients (rationals or GradedMatrix
operators) on an exponent box.  Per variable it keeps a *known interval*
[lo, hi] (ends may be infinite): inside, missing coefficients are exact
zeros; outside, coefficients are unknown -- unknown is never conflated
with zero.  Products contract the known intervals so that every reported
coefficient is exact.

Expansions of rational functions at infinity (descending powers) and at
zero (Taylor) are provided, plus the formal delta series
delta(u - v) = sum_k u^k v^{-k-1} and diagonal series delta(u - v) A(v)
whose (p, q) coefficient is A_{p+q+1}.
"""

from __future__ import annotations

from gmpy2 import mpq

from .errors import PoleError, SingularPivot, TruncationExhausted
from .graded import GradedMatrix
from .rational import VARS, Poly, RatFun

NEG_INF = float("-inf")
POS_INF = float("inf")
FULL = (NEG_INF, POS_INF)

_VORDER = {name: i for i, name in enumerate(VARS)}


def coeff_mul(a, b):
    if isinstance(a, GradedMatrix):
        if isinstance(b, GradedMatrix):
            return a * b
        return a.scaled_right(b)
    if isinstance(b, GradedMatrix):
        return b.scaled(a)
    return a * b


def coeff_is_zero(c):
    if isinstance(c, GradedMatrix):
        return c.is_zero()
    return c == 0


def coeff_eq(a, b):
    if isinstance(a, GradedMatrix) and not isinstance(b, GradedMatrix):
        return a.is_zero() if b == 0 else NotImplemented
    if isinstance(b, GradedMatrix) and not isinstance(a, GradedMatrix):
        return b.is_zero() if a == 0 else NotImplemented
    return a == b


class TruncSeries:
    """Exact truncated series in up to four spectral variables."""

    __slots__ = ("vars", "windows", "coeffs")

    def __init__(self, vars, windows, coeffs):
        self.vars = tuple(vars)
        if list(self.vars) != sorted(self.vars, key=_VORDER.__getitem__):
            raise ValueError("variables must be in canonical order")
        self.windows = tuple((lo, hi) for lo, hi in windows)
        for v, (lo, hi) in zip(self.vars, self.windows):
            if lo > hi:
                raise TruncationExhausted(v)
        self.coeffs = {}
        for e, c in coeffs.items():
            if coeff_is_zero(c):
                continue
            if not self._inside(e):
                raise ValueError(f"stored exponent {e} outside window")
            self.coeffs[e] = c

    def _inside(self, e):
        return all(lo <= x <= hi for x, (lo, hi) in zip(e, self.windows))

    # ---- constructors ---------------------------------------------------

    @classmethod
    def constant(cls, value):
        c = {} if coeff_is_zero(value) else {(): value}
        return cls((), (), c)

    @classmethod
    def zero(cls):
        return cls((), (), {})

    @classmethod
    def from_poly(cls, poly, scale=None):
        """A polynomial as a fully-known series (optionally matrix-scaled)."""
        names = poly.variables()
        idx = [VARS.index(n) for n in names]
        coeffs = {}
        for e, c in poly.coeffs.items():
            key = tuple(e[i] for i in idx)
            coeffs[key] = c if scale is None else scale.scaled(c)
        return cls(names, tuple(FULL for _ in names), coeffs)

    @classmethod
    def single(cls, var, exponent, value, window=FULL):
        return cls((var,), (window,), {(exponent,): value})

    # ---- bookkeeping ----------------------------------------------------

    def window(self, var):
        return self.windows[self.vars.index(var)]

    def get(self, e):
        """Coefficient at exponent tuple e; raises if outside the window."""
        if not self._inside(e):
            raise KeyError(f"coefficient at {e} is outside the known window")
        return self.coeffs.get(e, 0)

    def support(self, axis):
        ks = [e[axis] for e in self.coeffs]
        return (min(ks), max(ks)) if ks else None

    def rename(self, mapping):
        """Rename variables; result is re-sorted into canonical order."""
        new_names = [mapping.get(v, v) for v in self.vars]
        if len(set(new_names)) != len(new_names):
            raise ValueError("rename collision")
        order = sorted(range(len(new_names)), key=lambda i: _VORDER[new_names[i]])
        vars_ = tuple(new_names[i] for i in order)
        windows = tuple(self.windows[i] for i in order)
        coeffs = {tuple(e[i] for i in order): c for e, c in self.coeffs.items()}
        return TruncSeries(vars_, windows, coeffs)

    def embed(self, vars_):
        """View in a larger variable set (new variables fully known, exp 0)."""
        vars_ = tuple(vars_)
        if vars_ == self.vars:
            return self
        pos = {v: i for i, v in enumerate(self.vars)}
        windows = tuple(
            self.windows[pos[v]] if v in pos else FULL for v in vars_
        )
        coeffs = {}
        for e, c in self.coeffs.items():
            coeffs[tuple(e[pos[v]] if v in pos else 0 for v in vars_)] = c
        return TruncSeries(vars_, windows, coeffs)

    @staticmethod
    def _union_vars(a, b):
        names = sorted(set(a.vars) | set(b.vars), key=_VORDER.__getitem__)
        return tuple(names)

    # ---- linear operations ----------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, type(mpq(0)))):
            if other == 0:
                return self
            other = TruncSeries.constant(other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        names = self._union_vars(self, other)
        a, b = self.embed(names), other.embed(names)
        windows = tuple(
            (max(l1, l2), min(h1, h2))
            for (l1, h1), (l2, h2) in zip(a.windows, b.windows)
        )
        for v, (lo, hi) in zip(names, windows):
            if lo > hi:
                raise TruncationExhausted(v)
        box = lambda e: all(lo <= x <= hi for x, (lo, hi) in zip(e, windows))
        out = {}
        for e, c in a.coeffs.items():
            if box(e):
                out[e] = c
        for e, c in b.coeffs.items():
            if box(e):
                s = out.get(e, 0)
                out[e] = c if s == 0 else s + c
        return TruncSeries(names, windows, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(
            self.vars, self.windows, {e: -c for e, c in self.coeffs.items()}
        )

    def __sub__(self, other):
        if isinstance(other, (int, type(mpq(0)))) and other == 0:
            return self
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scaled(self, s):
        """Left-scale every coefficient by a scalar or matrix."""
        return TruncSeries(
            self.vars, self.windows, {e: coeff_mul(s, c) for e, c in self.coeffs.items()}
        )

    def __rmul__(self, other):
        if isinstance(other, (int, type(mpq(0)))):
            return self.scaled(mpq(other))
        return NotImplemented

    # ---- multiplication --------------------------------------------------

    @staticmethod
    def _axis_window(swin, ssup, twin, tsup):
        (a, b), (c, d) = swin, twin
        ttop = POS_INF if d < POS_INF else (tsup[1] if tsup else NEG_INF)
        stop = POS_INF if b < POS_INF else (ssup[1] if ssup else NEG_INF)
        tbot = NEG_INF if c > NEG_INF else (tsup[0] if tsup else POS_INF)
        sbot = NEG_INF if a > NEG_INF else (ssup[0] if ssup else POS_INF)
        lo, hi = NEG_INF, POS_INF
        if a > NEG_INF:
            lo = max(lo, a + ttop)
        if c > NEG_INF:
            lo = max(lo, c + stop)
        if b < POS_INF:
            hi = min(hi, b + tbot)
        if d < POS_INF:
            hi = min(hi, d + sbot)
        return lo, hi

    def __mul__(self, other):
        if isinstance(other, (int, type(mpq(0)))):
            return self.scaled(mpq(other))
        if isinstance(other, Poly):
            other = TruncSeries.from_poly(other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.mul(other)

    def mul(self, other, combine=coeff_mul):
        names = self._union_vars(self, other)
        a, b = self.embed(names), other.embed(names)
        windows = []
        for i, v in enumerate(names):
            lo, hi = self._axis_window(
                a.windows[i], a.support(i), b.windows[i], b.support(i)
            )
            if lo > hi:
                raise TruncationExhausted(v)
            windows.append((lo, hi))
        box = lambda e: all(lo <= x <= hi for x, (lo, hi) in zip(e, windows))
        out = {}
        for e1, c1 in a.coeffs.items():
            for e2, c2 in b.coeffs.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                if not box(e):
                    continue
                p = combine(c1, c2)
                s = out.get(e, 0)
                out[e] = p if s == 0 else s + p
        return TruncSeries(names, tuple(windows), out)

    # ---- inversion --------------------------------------------------------

    def _coeff_inv(self, c):
        if isinstance(c, GradedMatrix):
            try:
                return c.inv()
            except ZeroDivisionError:
                raise SingularPivot("matrix leading coefficient singular")
        if c == 0:
            raise SingularPivot("zero leading coefficient")
        return 1 / mpq(c)

    def inverse(self):
        """Multiplicative inverse of a one-variable (or constant) series."""
        if not self.vars:
            c = self.coeffs.get((), 0)
            return TruncSeries.constant(self._coeff_inv(c))
        if len(self.vars) != 1:
            raise ValueError("series inverse needs a single variable")
        lo, hi = self.windows[0]
        sup = self.support(0)
        if sup is None:
            raise SingularPivot("inverting a zero series")
        if lo == NEG_INF and hi == POS_INF:
            if sup[0] == sup[1]:
                k = sup[0]
                inv = self._coeff_inv(self.coeffs[(k,)])
                return TruncSeries(self.vars, (FULL,), {(-k,): inv})
            raise SingularPivot("two-sided series with multi-term support")
        if hi == POS_INF:
            top = sup[1]
            order = top - lo  # number of known descending coefficients
            lead = self.coeffs[(top,)]
            descending = True
        elif lo == NEG_INF:
            top = sup[0]
            order = hi - top
            lead = self.coeffs[(top,)]
            descending = False
        else:
            raise SingularPivot("bilateral truncated series is not invertible")
        inv_lead = self._coeff_inv(lead)
        step = -1 if descending else 1
        # power series inversion in the direction of the window
        x = {-top: inv_lead}
        for j in range(1, int(order) + 1):
            # target exponent of s * x to cancel: e = top*0 ... compute
            acc = 0
            for k in range(1, j + 1):
                s_c = self.coeffs.get((top + step * k,), 0)
                if coeff_is_zero(s_c):
                    continue
                x_c = x.get(-top + step * (j - k), 0)
                if coeff_is_zero(x_c):
                    continue
                term = coeff_mul(s_c, x_c)
                acc = term if acc == 0 else acc + term
            if acc == 0:
                continue
            val = coeff_mul(inv_lead, -acc) if isinstance(acc, GradedMatrix) else -coeff_mul(inv_lead, acc)
            if not coeff_is_zero(val):
                x[-top + step * j] = val
        if descending:
            win = (-top - int(order), POS_INF)
        else:
            win = (NEG_INF, -top + int(order))
        return TruncSeries(self.vars, (win,), {(k,): v for k, v in x.items()})

    def __repr__(self):
        w = ", ".join(f"{v}:[{lo},{hi}]" for v, (lo, hi) in zip(self.vars, self.windows))
        return f"TruncSeries({w}; {len(self.coeffs)} coeffs)"


# ---- comparison ------------------------------------------------------------


def compare_on_shared(a, b):
    """Compare two series where both are valid.

    Returns (status, witness, windows): status is 'pass', 'fail' or
    'empty-window'; witness is (exponents, left, right) for a failure.
    """
    if isinstance(b, (int, type(mpq(0)))):
        b = TruncSeries.constant(b) if b != 0 else TruncSeries.zero()
    names = TruncSeries._union_vars(a, b)
    a, b = a.embed(names), b.embed(names)
    windows = []
    for v, (l1, h1), (l2, h2) in zip(names, a.windows, b.windows):
        lo, hi = max(l1, l2), min(h1, h2)
        if lo > hi:
            return "empty-window", None, {v: (lo, hi)}
        windows.append((lo, hi))
    box = lambda e: all(lo <= x <= hi for x, (lo, hi) in zip(e, windows))
    winmap = {v: w for v, w in zip(names, windows)}
    for e in sorted(set(a.coeffs) | set(b.coeffs)):
        if not box(e):
            continue
        ca, cb = a.coeffs.get(e, 0), b.coeffs.get(e, 0)
        if coeff_eq(ca, cb) is not True:
            return "fail", (e, ca, cb), winmap
    return "pass", None, winmap


def is_zero_on_window(s):
    status, witness, _ = compare_on_shared(s, 0)
    return status == "pass", witness


# ---- expansions of rational functions --------------------------------------


def _series_inverse_list(c, order):
    """Inverse of a power series given by coefficient list c (c[0] invertible)."""
    c0 = c[0]
    if isinstance(c0, Poly):
        if not c0.is_constant() or c0.const_value() == 0:
            raise PoleError(c0)
        inv0 = Poly.const(1 / c0.const_value())
        zero = Poly.const(0)
    else:
        if c0 == 0:
            raise PoleError(c0)
        inv0 = 1 / mpq(c0)
        zero = mpq(0)
    out = [inv0]
    for k in range(1, order + 1):
        acc = zero
        for j in range(1, k + 1):
            cj = c[j] if j < len(c) else zero
            acc = acc + cj * out[k - j]
        out.append(-(inv0 * acc))
    return out


def _scatter(coeffs_by_exp, var, var_window):
    """Build a TruncSeries from {exponent-in-var: Poly-or-mpq coefficient}."""
    rows = {}
    other = set()
    for k, c in coeffs_by_exp.items():
        if isinstance(c, Poly):
            if c.is_zero():
                continue
            other.update(c.variables())
        elif c == 0:
            continue
        rows[k] = c
    names = sorted(other | {var}, key=_VORDER.__getitem__)
    vi = names.index(var)
    windows = [FULL] * len(names)
    windows[vi] = var_window
    idx = [VARS.index(n) for n in names]
    coeffs = {}
    for k, c in rows.items():
        if isinstance(c, Poly):
            for e, q in c.coeffs.items():
                key = [e[i] for i in idx]
                key[vi] = k
                coeffs[tuple(key)] = q
        else:
            key = [0] * len(names)
            key[vi] = k
            coeffs[tuple(key)] = c
    return TruncSeries(tuple(names), tuple(windows), coeffs)


def expand_at_infinity(f, var="u", order=8):
    """Expand a rational function in descending powers of ``var``.

    Coefficients may be polynomials in the other variables.  The result is
    exact on exponents >= -order (and exactly zero above the top degree).
    """
    if isinstance(f, Poly):
        f = RatFun(f)
    num, den = f.num.coeffs_in(var), f.den.coeffs_in(var)
    if not den:
        raise ZeroDivisionError("zero denominator")
    qd = max(den)
    lead = den[qd]
    if not lead.is_constant():
        raise ValueError("denominator leading coefficient must be constant")
    pn = max(num) if num else 0
    top = pn - qd
    need = max(top + order, 0)  # inverse power series order required
    dlist = [den.get(qd - j, Poly.const(0)) for j in range(need + 1)]
    inv = _series_inverse_list(dlist, need)
    out = {}
    for i in range(pn + 1):
        ni = num.get(pn - i)
        if ni is None or ni.is_zero():
            continue
        for j in range(need + 1 - i):
            k = top - i - j
            if k < -order:
                continue
            term = ni * inv[j]
            out[k] = out.get(k, Poly.const(0)) + term
    return _scatter(out, var, (-order, POS_INF))


def expand_at_zero(f, var="u", order=8):
    """Taylor-expand a rational function at ``var`` = 0 (no pole allowed)."""
    if isinstance(f, Poly):
        f = RatFun(f)
    num, den = f.num.coeffs_in(var), f.den.coeffs_in(var)
    if not den:
        raise ZeroDivisionError("zero denominator")
    d0 = den.get(0)
    if d0 is None or d0.is_zero():
        raise PoleError(f.den)
    dlist = [den.get(j, Poly.const(0)) for j in range(order + 1)]
    inv = _series_inverse_list(dlist, order)
    out = {}
    for i, ni in num.items():
        for j in range(order + 1 - i):
            out[i + j] = out.get(i + j, Poly.const(0)) + ni * inv[j]
    out = {k: v for k, v in out.items() if k <= order}
    return _scatter(out, var, (NEG_INF, order))


def expand_taylor_box(f, vars_, per_var_order):
    """Joint Taylor expansion at the origin in several variables.

    Exact on the box 0 <= e_i <= per_var_order[i]; requires the denominator
    to be nonzero at the origin.
    """
    if isinstance(f, Poly):
        f = RatFun(f)
    total = sum(per_var_order)
    zero_assign = {v: mpq(0) for v in f.den.variables()}
    if f.den.eval(zero_assign) == 0:
        raise PoleError(f.den)
    const = f.den.coeffs.get((0,) * len(VARS))
    g = Poly.const(1) - f.den * (1 / const)
    inv = Poly.const(1)
    power = Poly.const(1)
    for _ in range(total):
        power = (power * g).truncate_total_degree(total)
        inv = inv + power
    inv = inv * (1 / const)
    prod = (f.num * inv).truncate_total_degree(total)
    names = tuple(sorted(set(vars_), key=_VORDER.__getitem__))
    used = set(f.num.variables()) | set(f.den.variables())
    if not used <= set(names):
        raise ValueError("expansion variables must cover the function")
    order_by = dict(zip(vars_, per_var_order))
    idx = [VARS.index(n) for n in names]
    coeffs = {}
    for e, c in prod.coeffs.items():
        key = tuple(e[i] for i in idx)
        for i, n in enumerate(names):
            if key[i] > order_by[n]:
                break
        else:
            coeffs[key] = c
    windows = tuple((NEG_INF, order_by[n]) for n in names)
    return TruncSeries(names, windows, coeffs)


# ---- formal delta ----------------------------------------------------------


def delta_series(order, uvar="u", vvar="v"):
    """Truncation of delta(u - v) = sum_k u^k v^{-k-1}."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if _VORDER[uvar] > _VORDER[vvar]:
        raise ValueError("variables out of canonical order")
    coeffs = {(k, -k - 1): mpq(1) for k in range(-order, order + 1)}
    return TruncSeries(
        (uvar, vvar), ((-order, order), (-order - 1, order - 1)), coeffs
    )


class DiagSeries:
    """delta(u - v) times a one-variable series: coeff(p, q) = base_{p+q+1}."""

    __slots__ = ("uvar", "vvar", "base")

    def __init__(self, uvar, vvar, base):
        if len(base.vars) > 1:
            raise ValueError("diagonal base must be a one-variable series")
        self.uvar, self.vvar = uvar, vvar
        self.base = base if base.vars else base.embed((uvar,))

    @classmethod
    def delta_times(cls, series, uvar="u", vvar="v"):
        """The product delta(uvar - vvar) * series(w) for one-variable series."""
        base = series.rename({series.vars[0]: uvar}) if series.vars else series
        return cls(uvar, vvar, base)

    def _compat(self, other):
        if (self.uvar, self.vvar) != (other.uvar, other.vvar):
            raise ValueError("diagonal series variable mismatch")

    def __add__(self, other):
        self._compat(other)
        return DiagSeries(self.uvar, self.vvar, self.base + other.base)

    def __sub__(self, other):
        self._compat(other)
        return DiagSeries(self.uvar, self.vvar, self.base - other.base)

    def __neg__(self):
        return DiagSeries(self.uvar, self.vvar, -self.base)

    def scaled(self, s):
        return DiagSeries(self.uvar, self.vvar, self.base.scaled(s))

    def known(self, p, q):
        lo, hi = self.base.windows[0]
        return lo <= p + q + 1 <= hi

    def coeff(self, p, q):
        return self.base.get((p + q + 1,))


def compare_series_to_diag(s, diag):
    """Compare a two-variable series against a diagonal series.

    Checks every exponent known to both sides; the series' box must make
    each shared diagonal finite.
    """
    names = (diag.uvar, diag.vvar)
    s = s.embed(tuple(sorted(set(s.vars) | set(names), key=_VORDER.__getitem__)))
    if s.vars != names:
        raise ValueError("series/diagonal variable mismatch")
    (ulo, uhi), (vlo, vhi) = s.windows
    blo, bhi = diag.base.windows[0]
    checked = 0
    # every stored coefficient of s, where the diagonal is known
    for (p, q), c in sorted(s.coeffs.items()):
        if blo <= p + q + 1 <= bhi:
            checked += 1
            if coeff_eq(c, diag.coeff(p, q)) is not True:
                return "fail", ((p, q), c, diag.coeff(p, q)), checked
    # every nonzero diagonal of the right side, inside s's box
    for (w,), c in sorted(diag.base.coeffs.items()):
        plo = max(ulo, w - 1 - vhi)
        phi = min(uhi, w - 1 - vlo)
        if plo == NEG_INF or phi == POS_INF:
            return "error", ("diagonal intersection not finite", w), checked
        p = int(plo)
        while p <= phi:
            q = w - 1 - p
            checked += 1
            if coeff_eq(s.coeffs.get((p, q), 0), c) is not True:
                return "fail", ((p, q), s.coeffs.get((p, q), 0), c), checked
            p += 1
    if checked == 0:
        return "empty-window", None, 0
    return "pass", None, checked
