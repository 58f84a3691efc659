"""Exact scalar arithmetic: rationals, sparse polynomials, rational functions.

Rationals are gmpy2.mpq.  Polynomials live in the fixed variable set
``VARS = (u, v, u1, u2, v1, v2)`` with exponent tuples of length six and
exact rational coefficients.  Rational functions are quotients of two
polynomials, kept with a lex-monic denominator; common univariate factors
are cancelled.
"""

from __future__ import annotations

from gmpy2 import mpq

from .errors import PoleError

VARS = ("u", "v", "u1", "u2", "v1", "v2")
_VIDX = {name: i for i, name in enumerate(VARS)}
NVARS = len(VARS)
_ZERO_EXP = (0,) * NVARS

Rat = mpq  # the exact scalar type used throughout the package


def rat(x, y=None):
    """Build an exact rational, also accepting 'p/q' strings."""
    if y is not None:
        return mpq(x, y)
    if isinstance(x, str):
        return mpq(x)
    return mpq(x)


def rat_str(q):
    """Serialize a rational as a canonical 'p/q' string."""
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Poly:
    """Sparse polynomial over exact rationals in the variables VARS."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for e, c in coeffs.items():
                c = mpq(c)
                if c != 0:
                    self.coeffs[e] = c

    @classmethod
    def const(cls, c):
        c = mpq(c)
        return cls({_ZERO_EXP: c} if c != 0 else {})

    @classmethod
    def var(cls, name):
        e = [0] * NVARS
        e[_VIDX[name]] = 1
        return cls({tuple(e): mpq(1)})

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return all(e == _ZERO_EXP for e in self.coeffs)

    def const_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.coeffs.get(_ZERO_EXP, mpq(0))

    def variables(self):
        used = set()
        for e in self.coeffs:
            for i, k in enumerate(e):
                if k:
                    used.add(VARS[i])
        return tuple(v for v in VARS if v in used)

    def degree_in(self, name):
        i = _VIDX[name]
        return max((e[i] for e in self.coeffs), default=-1)

    def coeffs_in(self, name):
        """Coefficients as polynomials in the remaining variables, keyed by exponent."""
        i = _VIDX[name]
        out = {}
        for e, c in self.coeffs.items():
            rest = list(e)
            k = rest[i]
            rest[i] = 0
            out.setdefault(k, {})[tuple(rest)] = c
        return {k: Poly(d) for k, d in out.items()}

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, type(mpq(0)))):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, mpq(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        p = Poly.__new__(Poly)
        p.coeffs = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Poly.__new__(Poly)
        p.coeffs = {e: -c for e, c in self.coeffs.items()}
        return p

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, mpq(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        p = Poly.__new__(Poly)
        p.coeffs = out
        return p

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def leading(self):
        """(exponent, coefficient) of the lex-largest monomial."""
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.coeffs)
        return e, self.coeffs[e]

    def content(self):
        """Positive gcd of all coefficient numerators over lcm of denominators."""
        from math import gcd, lcm

        g, l = 0, 1
        for c in self.coeffs.values():
            g = gcd(g, int(c.numerator))
            l = lcm(l, int(c.denominator))
        return mpq(g, l) if g else mpq(0)

    def subs(self, mapping):
        """Substitute variables by polynomials (or rationals)."""
        out = Poly.const(0)
        powers = {}
        for e, c in self.coeffs.items():
            term = Poly.const(c)
            for i, k in enumerate(e):
                if not k:
                    continue
                name = VARS[i]
                if name in mapping:
                    rep = mapping[name]
                    rep = rep if isinstance(rep, Poly) else Poly.const(rep)
                    key = (name, k)
                    if key not in powers:
                        powers[key] = rep ** k
                    term = term * powers[key]
                else:
                    term = term * (Poly.var(name) ** k)
            out = out + term
        return out

    def eval(self, assignment):
        """Evaluate at rational values; every used variable must be assigned."""
        total = mpq(0)
        for e, c in self.coeffs.items():
            val = c
            for i, k in enumerate(e):
                if k:
                    val = val * assignment[VARS[i]] ** k
            total += val
        return total

    def truncate_total_degree(self, maxdeg):
        p = Poly.__new__(Poly)
        p.coeffs = {e: c for e, c in self.coeffs.items() if sum(e) <= maxdeg}
        return p

    def univariate_in(self):
        """The single variable this polynomial depends on, or None if constant.

        Raises ValueError when genuinely multivariate.
        """
        used = self.variables()
        if not used:
            return None
        if len(used) > 1:
            raise ValueError("polynomial is multivariate")
        return used[0]

    def coeff_list(self, name):
        """Dense constant-coefficient list [c_0 .. c_deg] in one variable."""
        i = _VIDX[name]
        deg = self.degree_in(name)
        out = [mpq(0)] * (deg + 1)
        for e, c in self.coeffs.items():
            rest = list(e)
            k = rest[i]
            rest[i] = 0
            if tuple(rest) != _ZERO_EXP:
                raise ValueError("polynomial is not univariate in " + name)
            out[k] = c
        return out

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            mono = "*".join(
                f"{VARS[i]}^{k}" if k > 1 else VARS[i]
                for i, k in enumerate(e)
                if k
            )
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def _poly_from_list(name, lst):
    i = _VIDX[name]
    coeffs = {}
    for k, c in enumerate(lst):
        if c != 0:
            e = [0] * NVARS
            e[i] = k
            coeffs[tuple(e)] = c
    return Poly(coeffs)


def _univariate_gcd(a, b, name):
    """Monic gcd of two univariate polynomials via Euclid."""
    fa, fb = a.coeff_list(name), b.coeff_list(name)

    def strip(f):
        while f and f[-1] == 0:
            f.pop()
        return f

    fa, fb = strip(list(fa)), strip(list(fb))
    while fb:
        # remainder of fa mod fb
        while len(fa) >= len(fb) and fa:
            q = fa[-1] / fb[-1]
            shift = len(fa) - len(fb)
            for i, c in enumerate(fb):
                fa[i + shift] -= q * c
            fa = strip(fa)
        fa, fb = fb, fa
    if not fa:
        return Poly.const(0)
    lead = fa[-1]
    return _poly_from_list(name, [c / lead for c in fa])


def _univariate_exact_div(a, b, name):
    """Exact quotient a / b for univariate polynomials; None if not exact."""
    fa, fb = list(a.coeff_list(name)), b.coeff_list(name)
    out = [mpq(0)] * max(len(fa) - len(fb) + 1, 0)
    while len(fa) >= len(fb):
        if fa[-1] == 0:
            fa.pop()
            continue
        q = fa[-1] / fb[-1]
        shift = len(fa) - len(fb)
        out[shift] = q
        for i, c in enumerate(fb):
            fa[i + shift] -= q * c
        while fa and fa[-1] == 0:
            fa.pop()
    if fa:
        return None
    return _poly_from_list(name, out)


class RatFun:
    """Rational function: quotient of two polynomials, exactly normalized."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, Poly):
            num = Poly.const(num)
        if den is None:
            den = Poly.const(1)
        elif not isinstance(den, Poly):
            den = Poly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator polynomial")
        self.num, self.den = self._normalize(num, den)

    @staticmethod
    def _normalize(num, den):
        if num.is_zero():
            return Poly.const(0), Poly.const(1)
        # cancel common univariate factors when both sides live in one variable
        try:
            vn, vd = num.univariate_in(), den.univariate_in()
        except ValueError:
            vn, vd = "multi", "multi"
        if vn != "multi" and vd != "multi" and (vn is None or vd is None or vn == vd):
            name = vn or vd
            if name is not None:
                g = _univariate_gcd(num, den, name)
                if g.degree_in(name) > 0:
                    num = _univariate_exact_div(num, g, name)
                    den = _univariate_exact_div(den, g, name)
        _, lead = den.leading()
        if lead != 1:
            inv = 1 / lead
            num = num * inv
            den = den * inv
        return num, den

    @classmethod
    def const(cls, c):
        return cls(Poly.const(c))

    @classmethod
    def var(cls, name):
        return cls(Poly.var(name))

    def is_zero(self):
        return self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, RatFun):
            return other
        if isinstance(other, (int, type(mpq(0)), Poly)):
            return RatFun(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFun(other) / self

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def subs(self, mapping):
        return RatFun(self.num.subs(mapping), self.den.subs(mapping))

    def eval(self, assignment):
        d = self.den.eval(assignment)
        if d == 0:
            raise PoleError(self.den)
        return self.num.eval(assignment) / d

    def __repr__(self):
        if self.den == Poly.const(1):
            return f"({self.num})"
        return f"({self.num})/({self.den})"


def ratfun_arith(a, b, op):
    """Field arithmetic dispatcher: op in {'add', 'sub', 'mul', 'div'}."""
    fn = {
        "add": RatFun.__add__,
        "sub": RatFun.__sub__,
        "mul": RatFun.__mul__,
        "div": RatFun.__truediv__,
    }[op]
    return fn(RatFun(a.num, a.den), b)


def ratfun_eval(f, assignment):
    """Evaluate a rational function at exact rational points."""
    return f.eval({k: mpq(v) for k, v in assignment.items()})
