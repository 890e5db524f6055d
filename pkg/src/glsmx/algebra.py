"""Exact-arithmetic kernel: rational functions in lam and z, nilpotent
hyperplane classes, truncated power series, and Laurent expansion in lam."""

from __future__ import annotations

from fractions import Fraction as Frac

from .errors import BadConstantTerm, DivisionByNonUnit, SubstitutionPole

# ---------------------------------------------------------------------------
# polynomials in (lam, z) over Frac, keyed by (lam_exp, z_exp)


def _poly_clean(terms):
    return {k: v for k, v in terms.items() if v != 0}


def _poly_add(a, b):
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, Frac(0)) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _poly_neg(a):
    return {k: -v for k, v in a.items()}


def _poly_mul(a, b):
    out = {}
    for (i, j), u in a.items():
        for (k, l), v in b.items():
            key = (i + k, j + l)
            s = out.get(key, Frac(0)) + u * v
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _poly_pow(a, n):
    out = {(0, 0): Frac(1)}
    for _ in range(n):
        out = _poly_mul(out, a)
    return out


def _poly_lead_key(a):
    # graded lex with lam > z
    return max(a, key=lambda k: (k[0] + k[1], k[0]))


def _poly_total_degrees(a):
    return {i + j for (i, j) in a}


def _sympy_cancel(num, den):
    # only hit when the denominator is not a monomial; rare in practice
    import sympy

    lam, z = sympy.symbols("lam z")

    def to_sympy(p):
        return sympy.Add(*[sympy.Rational(v) * lam**i * z**j for (i, j), v in p.items()])

    def from_sympy(e):
        p = sympy.Poly(sympy.expand(e), lam, z)
        return {(int(i), int(j)): Frac(str(c)) for (i, j), c in zip(p.monoms(), p.coeffs())}

    g = sympy.gcd(to_sympy(num), to_sympy(den))
    if g == 1:
        return num, den
    return from_sympy(sympy.cancel(to_sympy(num) / g)), from_sympy(sympy.cancel(to_sympy(den) / g))


class RatFun:
    """Rational function in lam and z over Frac, kept in canonical form:
    integer coprime numerator/denominator, denominator lead coefficient > 0
    under graded lex (lam > z)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, (int, Frac)):
            num = {(0, 0): Frac(num)} if num else {}
        if den is None:
            den = {(0, 0): Frac(1)}
        elif isinstance(den, (int, Frac)):
            den = {(0, 0): Frac(den)} if den else {}
        num = _poly_clean(num)
        den = _poly_clean(den)
        if not den:
            raise DivisionByNonUnit("zero denominator")
        if not num:
            object.__setattr__(self, "num", {})
            object.__setattr__(self, "den", {(0, 0): Frac(1)})
            return
        # cancel the common monomial factor
        lo_l = min(min(i for i, _ in num), min(i for i, _ in den))
        lo_z = min(min(j for _, j in num), min(j for _, j in den))
        if lo_l or lo_z:
            num = {(i - lo_l, j - lo_z): v for (i, j), v in num.items()}
            den = {(i - lo_l, j - lo_z): v for (i, j), v in den.items()}
        if len(den) > 1 and len(num) >= 1 and (len(num) > 1 or max(num) != (0, 0)):
            num, den = _sympy_cancel(num, den)
        # scale to integer coefficients with joint content 1
        mult = 1
        for v in list(num.values()) + list(den.values()):
            mult = mult * v.denominator // _gcd(mult, v.denominator)
        ints = [v * mult for v in num.values()] + [v * mult for v in den.values()]
        g = 0
        for v in ints:
            g = _gcd(g, int(v))
        scale = Frac(mult, g) if g else Frac(mult)
        if den[_poly_lead_key(den)] < 0:
            scale = -scale
        object.__setattr__(self, "num", {k: v * scale for k, v in num.items()})
        object.__setattr__(self, "den", {k: v * scale for k, v in den.items()})

    def __setattr__(self, *a):
        raise AttributeError("RatFun is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(c):
        return RatFun(Frac(c))

    @staticmethod
    def lam(exp=1):
        return RatFun({(exp, 0): Frac(1)})

    @staticmethod
    def z(exp=1):
        return RatFun({(0, exp): Frac(1)})

    @staticmethod
    def linear(c, c_lam, c_z):
        """c + c_lam*lam + c_z*z"""
        return RatFun({(0, 0): Frac(c), (1, 0): Frac(c_lam), (0, 1): Frac(c_z)})

    # -- ring structure ----------------------------------------------------

    def __add__(self, other):
        other = _as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RatFun(_poly_add(self.num, other.num), self.den)
        return RatFun(
            _poly_add(_poly_mul(self.num, other.den), _poly_mul(other.num, self.den)),
            _poly_mul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return RatFun(_poly_neg(self.num), self.den)

    def __sub__(self, other):
        other = _as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _as_ratfun(other) - self

    def __mul__(self, other):
        other = _as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFun(_poly_mul(self.num, other.num), _poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByNonUnit("division by zero rational function")
        return RatFun(_poly_mul(self.num, other.den), _poly_mul(self.den, other.num))

    def __rtruediv__(self, other):
        return _as_ratfun(other) / self

    def __pow__(self, n):
        if n < 0:
            return RatFun(1) / self ** (-n)
        return RatFun(_poly_pow(self.num, n), _poly_pow(self.den, n))

    def __eq__(self, other):
        other = _as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((frozenset(self.num.items()), frozenset(self.den.items())))

    def __repr__(self):
        return f"RatFun({render_ratfun(self)})"

    # -- structure queries -------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_poly(self):
        return self.den == {(0, 0): Frac(1)} or (len(self.den) == 1 and max(self.den) == (0, 0))

    def as_frac(self):
        """Constant value, or None if lam/z actually occur."""
        if self.is_zero():
            return Frac(0)
        if set(self.num) <= {(0, 0)} and set(self.den) <= {(0, 0)}:
            return self.num[(0, 0)] / self.den[(0, 0)]
        return None

    def homogeneous_degree(self):
        """Total degree when num and den are both homogeneous, else None."""
        if self.is_zero():
            return None
        dn = _poly_total_degrees(self.num)
        dd = _poly_total_degrees(self.den)
        if len(dn) == 1 and len(dd) == 1:
            return dn.pop() - dd.pop()
        return None

    def z_parts(self):
        """Split into {z_exponent: RatFun in lam only}; requires the
        denominator to be a monomial."""
        if self.is_zero():
            return {}
        if len(self.den) != 1:
            raise DivisionByNonUnit("z split needs a monomial denominator")
        (dl, dz), dc = next(iter(self.den.items()))
        out = {}
        for (i, j), v in self.num.items():
            part = out.setdefault(j - dz, {})
            part[(i - dl, 0)] = part.get((i - dl, 0), Frac(0)) + v / dc
        return {e: RatFun(p) for e, p in sorted(out.items())}

    def subs_z(self, value):
        """Substitute z := value (a RatFun in lam or a CohClass)."""
        if isinstance(value, CohClass):
            return _subs_z_coh(self, value)
        num = _eval_z(self.num, value)
        den = _eval_z(self.den, value)
        if den.is_zero():
            raise SubstitutionPole("denominator vanished under z substitution")
        return num / den

    def lam_shift(self, k):
        """Multiply by lam**k (k may be negative)."""
        return self * RatFun.lam(k) if k >= 0 else self / RatFun.lam(-k)


def _gcd(a, b):
    a, b = abs(int(a)), abs(int(b))
    while b:
        a, b = b, a % b
    return a


def _as_ratfun(x):
    if isinstance(x, RatFun):
        return x
    if isinstance(x, (int, Frac)):
        return RatFun(x)
    return NotImplemented


def _eval_z(poly, value):
    value = _as_ratfun(value)
    out = RatFun(0)
    for (i, j), v in poly.items():
        out = out + RatFun({(i, 0): v}) * value**j
    return out


RF_ZERO = RatFun(0)
RF_ONE = RatFun(1)
LAM = RatFun.lam()
Z = RatFun.z()


def render_ratfun(f):
    """Deterministic human/JSON rendering, graded lex descending."""

    def side(poly):
        if not poly:
            return "0"
        bits = []
        for (i, j) in sorted(poly, key=lambda k: (-(k[0] + k[1]), -k[0])):
            v = poly[(i, j)]
            mono = "*".join(
                ([f"lam^{i}" if i > 1 else "lam"] if i else [])
                + ([f"z^{j}" if j > 1 else "z"] if j else [])
            )
            if mono:
                lead = "" if v == 1 else ("-" if v == -1 else f"{v}*")
                bits.append(f"{lead}{mono}")
            else:
                bits.append(str(v))
        out = bits[0]
        for b in bits[1:]:
            out += " - " + b[1:] if b.startswith("-") else " + " + b
        return out

    n = side(f.num)
    if f.den == {(0, 0): Frac(1)}:
        return n
    n = f"({n})" if len(f.num) > 1 else n
    d = side(f.den)
    d = f"({d})" if len(f.den) > 1 else d
    return f"{n}/{d}"


# ---------------------------------------------------------------------------
# cohomology classes: polynomials in H modulo a relation


NILPOTENT = "nilpotent"  # H^r = 0
PROJLINE = "projline"  # H^2 = lam*H


class CohClass:
    """Polynomial in the hyperplane symbol H with RatFun coefficients,
    reduced modulo H^r = 0 (nilpotent) or H^2 = lam*H (projline)."""

    __slots__ = ("coeffs", "relation", "r")

    def __init__(self, coeffs, relation, r=None):
        if relation == PROJLINE:
            r = 2
        elif r is None:
            raise ValueError("nilpotent CohClass needs an order r")
        coeffs = [c if isinstance(c, RatFun) else RatFun(c) for c in coeffs]
        if len(coeffs) > r:
            raise ValueError("too many coefficients for the relation")
        coeffs += [RF_ZERO] * (r - len(coeffs))
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "relation", relation)
        object.__setattr__(self, "r", r)

    def __setattr__(self, *a):
        raise AttributeError("CohClass is immutable")

    @staticmethod
    def unit(relation, r=None):
        return CohClass([RF_ONE], relation, r)

    @staticmethod
    def hyperplane(relation, r=None):
        if relation == PROJLINE:
            return CohClass([RF_ZERO, RF_ONE], relation)
        if r >= 2:
            return CohClass([RF_ZERO, RF_ONE], relation, r)
        return CohClass([RF_ZERO], relation, r)  # H = 0 when r = 1

    def _check(self, other):
        if self.relation != other.relation or self.r != other.r:
            raise ValueError("CohClass relation mismatch")

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check(other)
        return CohClass([a + b for a, b in zip(self.coeffs, other.coeffs)], self.relation, self.r)

    __radd__ = __add__

    def __neg__(self):
        return CohClass([-a for a in self.coeffs], self.relation, self.r)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check(other)
        raw = [RF_ZERO] * (2 * self.r)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    raw[i + j] = raw[i + j] + a * b
        if self.relation == PROJLINE:
            # H^k = lam^(k-1) H for k >= 1
            c0, c1 = raw[0], raw[1]
            for k in range(2, len(raw)):
                c1 = c1 + raw[k] * LAM ** (k - 1)
            return CohClass([c0, c1], PROJLINE)
        return CohClass(raw[: self.r], NILPOTENT, self.r)

    __rmul__ = __mul__

    def _coerce(self, other):
        if isinstance(other, CohClass):
            return other
        f = _as_ratfun(other)
        if f is NotImplemented:
            return NotImplemented
        return CohClass([f], self.relation, self.r)

    def inverse(self):
        c0 = self.coeffs[0]
        if c0.is_zero():
            raise DivisionByNonUnit("CohClass with zero constant term")
        if self.relation == PROJLINE:
            a, b = self.coeffs
            at_zero = a + b * LAM  # restriction where H = lam
            if at_zero.is_zero():
                raise DivisionByNonUnit("CohClass vanishes at the zero fixed point")
            return CohClass([RF_ONE / a, -b / (a * at_zero)], PROJLINE)
        inv0 = RF_ONE / c0
        nil = CohClass([RF_ZERO] + [-c * inv0 for c in self.coeffs[1:]], NILPOTENT, self.r)
        out = CohClass.unit(NILPOTENT, self.r)
        power = CohClass.unit(NILPOTENT, self.r)
        for _ in range(1, self.r):
            power = power * nil
            out = out + power
        return out * inv0

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = CohClass.unit(self.relation, self.r)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (
            self.relation == other.relation
            and self.r == other.r
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.relation, self.r, self.coeffs))

    def __repr__(self):
        bits = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mono = "" if i == 0 else ("H" if i == 1 else f"H^{i}")
            s = render_ratfun(c)
            bits.append(f"({s})*{mono}" if mono else s)
        return "CohClass(" + (" + ".join(bits) if bits else "0") + ")"

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def restrict_zero(self):
        """Projline restriction at the zero fixed point (H -> lam)."""
        if self.relation != PROJLINE:
            raise ValueError("restriction is a projline operation")
        return self.coeffs[0] + self.coeffs[1] * LAM

    def restrict_infinity(self):
        """Projline restriction at the infinity fixed point (H -> 0)."""
        if self.relation != PROJLINE:
            raise ValueError("restriction is a projline operation")
        return self.coeffs[0]

    def integrate_p1(self):
        """Equivariant pushforward to a point for projline classes."""
        if self.relation != PROJLINE:
            raise ValueError("integration is a projline operation")
        return self.coeffs[1]


def _subs_z_coh(f, value):
    num = _eval_z_coh(f.num, value)
    den = _eval_z_coh(f.den, value)
    try:
        return num * den.inverse()
    except DivisionByNonUnit as exc:
        raise SubstitutionPole("denominator not invertible under z substitution") from exc


def _eval_z_coh(poly, value):
    out = CohClass([RF_ZERO], value.relation, value.r)
    for (i, j), v in poly.items():
        term = CohClass([RatFun({(i, 0): v})], value.relation, value.r)
        out = out + term * value**j
    return out


def substitute_z(expr, value):
    """Substitute z := value into a RatFun or CohClass expression.  When the
    value is a CohClass the result is CohClass-valued, relation-reduced."""
    if isinstance(expr, CohClass):
        if isinstance(value, CohClass):
            out = CohClass([RF_ZERO], value.relation, value.r)
            h = CohClass.hyperplane(value.relation, value.r)
            for i, c in enumerate(expr.coeffs):
                if not c.is_zero():
                    out = out + c.subs_z(value) * h**i
            return out
        return CohClass([c.subs_z(value) for c in expr.coeffs], expr.relation, expr.r)
    return _as_ratfun(expr).subs_z(value)


# ---------------------------------------------------------------------------
# truncated power series in one variable over an arbitrary coefficient ring


def _ring_is_zero(x):
    if isinstance(x, (int, Frac)):
        return x == 0
    return x.is_zero()


def _ring_inv(x):
    if isinstance(x, int):
        x = Frac(x)
    if isinstance(x, Frac):
        if x == 0:
            raise DivisionByNonUnit("division by zero")
        return 1 / x
    if isinstance(x, RatFun):
        return RF_ONE / x
    if isinstance(x, CohClass):
        return x.inverse()
    raise DivisionByNonUnit(f"no inverse for {type(x).__name__}")


class TruncSeries:
    """Power series in one formal variable, truncated above `order`."""

    __slots__ = ("variable", "order", "coeffs")

    def __init__(self, variable, order, coeffs=None):
        if order < 0:
            raise ValueError("order must be non-negative")
        cleaned = {}
        for k, v in (coeffs or {}).items():
            if 0 <= k <= order and not _ring_is_zero(v):
                cleaned[k] = v
        object.__setattr__(self, "variable", variable)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", cleaned)

    def __setattr__(self, *a):
        raise AttributeError("TruncSeries is immutable")

    @staticmethod
    def variable_series(variable, order, one=Frac(1)):
        return TruncSeries(variable, order, {1: one})

    @staticmethod
    def constant(variable, order, value):
        return TruncSeries(variable, order, {0: value})

    def coeff(self, k, default=Frac(0)):
        return self.coeffs.get(k, default)

    def _check(self, other):
        if self.variable != other.variable:
            raise ValueError("series variable mismatch")

    def _order_with(self, other):
        return min(self.order, other.order)

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            return TruncSeries(self.variable, self.order, _merge(self.coeffs, {0: other}))
        self._check(other)
        return TruncSeries(self.variable, self._order_with(other), _merge(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.variable, self.order, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, TruncSeries):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return TruncSeries(
                self.variable, self.order, {k: v * other for k, v in self.coeffs.items()}
            )
        self._check(other)
        order = self._order_with(other)
        out = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                if i + j <= order:
                    k = i + j
                    out[k] = out[k] + a * b if k in out else a * b
        return TruncSeries(self.variable, order, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, TruncSeries):
            return self * _ring_inv(other)
        self._check(other)
        c0 = other.coeff(0)
        if _ring_is_zero(c0):
            raise DivisionByNonUnit("series with zero constant term")
        inv0 = _ring_inv(c0)
        order = self._order_with(other)
        # u = 1 - other/c0 is nilpotent to the truncation order
        u = TruncSeries(self.variable, order, {0: _one_like(c0)}) - other * inv0
        out = self
        acc = self
        for _ in range(order):
            acc = acc * u
            out = out + acc
        return out * inv0

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (
            self.variable == other.variable
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.variable, self.order, frozenset(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return f"TruncSeries({self.variable!r}, O({self.variable}^{self.order + 1}), 0)"
        bits = [f"({v!r})*{self.variable}^{k}" for k, v in sorted(self.coeffs.items())]
        return f"TruncSeries({' + '.join(bits)} + O({self.variable}^{self.order + 1}))"

    def truncate(self, order):
        return TruncSeries(self.variable, min(order, self.order), self.coeffs)

    def map_coeffs(self, fn):
        return TruncSeries(self.variable, self.order, {k: fn(v) for k, v in self.coeffs.items()})


def _merge(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out[k] + v if k in out else v
    return out


def _one_like(x):
    if isinstance(x, (int, Frac)):
        return Frac(1)
    if isinstance(x, RatFun):
        return RF_ONE
    if isinstance(x, CohClass):
        return CohClass.unit(x.relation, x.r)
    raise TypeError(f"no unit for {type(x).__name__}")


def _is_one(x):
    if isinstance(x, (int, Frac)):
        return x == 1
    return x == _one_like(x)


def series_root_pow(s, exponent):
    """s**exponent for rational exponent, by exact binomial expansion.
    Requires constant term exactly 1."""
    exponent = Frac(exponent)
    c0 = s.coeff(0)
    if _ring_is_zero(c0) or not _is_one(c0):
        raise BadConstantTerm("series_root_pow needs constant term 1")
    one = _one_like(c0)
    u = s - TruncSeries(s.variable, s.order, {0: one})
    out = TruncSeries(s.variable, s.order, {0: one})
    power = TruncSeries(s.variable, s.order, {0: one})
    binom = Frac(1)
    for k in range(1, s.order + 1):
        binom *= Frac(exponent - (k - 1), k)
        power = power * u
        if not power.coeffs:
            break
        out = out + power * binom
    return out


def ring_arith(a, b, op):
    """Uniform entry point for add/mul/div across all the rings here."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        if isinstance(a, TruncSeries) or isinstance(b, TruncSeries):
            return a / b
        if isinstance(b, RatFun) and b.is_zero():
            raise DivisionByNonUnit("division by zero rational function")
        if isinstance(a, (int, Frac)) and isinstance(b, (int, Frac)):
            if b == 0:
                raise DivisionByNonUnit("division by zero")
            return Frac(a) / Frac(b)
        return a / b
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# Laurent expansion around lam = infinity


class LaurentInLambda:
    """Finite window of a Laurent expansion in lam around lam = infinity:
    coefficients of lam^min_exponent, lam^(min_exponent - 1), ... descending."""

    __slots__ = ("min_exponent", "coeffs", "window")

    def __init__(self, min_exponent, coeffs, window):
        coeffs = [Frac(c) for c in coeffs]
        # leading stored coefficient nonzero unless the series is zero
        while coeffs and coeffs[0] == 0:
            coeffs = coeffs[1:]
            min_exponent -= 1
        if not coeffs:
            min_exponent = 0
        object.__setattr__(self, "min_exponent", min_exponent)
        object.__setattr__(self, "coeffs", tuple(coeffs[:window]))
        object.__setattr__(self, "window", window)

    def __setattr__(self, *a):
        raise AttributeError("LaurentInLambda is immutable")

    def coeff(self, exponent):
        i = self.min_exponent - exponent
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Frac(0)

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, LaurentInLambda):
            return NotImplemented
        n = min(self.window, other.window)
        lo_s = self.min_exponent - n + 1
        lo_o = other.min_exponent - n + 1
        lo = max(lo_s, lo_o)
        hi = max(self.min_exponent, other.min_exponent)
        return all(self.coeff(e) == other.coeff(e) for e in range(lo, hi + 1))

    def __hash__(self):
        return hash((self.min_exponent, self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, LaurentInLambda):
            return LaurentInLambda(
                self.min_exponent, [c * Frac(other) for c in self.coeffs], self.window
            )
        if self.is_zero() or other.is_zero():
            return LaurentInLambda(0, [], min(self.window, other.window))
        window = min(self.window, other.window)
        top = self.min_exponent + other.min_exponent
        out = [Frac(0)] * window
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                if i + j < window:
                    out[i + j] += a * b
        return LaurentInLambda(top, out, window)

    __rmul__ = __mul__

    def __repr__(self):
        if self.is_zero():
            return "LaurentInLambda(0)"
        bits = [
            f"{c}*lam^{self.min_exponent - i}" for i, c in enumerate(self.coeffs) if c != 0
        ]
        return "LaurentInLambda(" + " + ".join(bits) + " + ...)"


def laurent_of_ratfun(f, window):
    """Expand a RatFun in lam alone around lam = infinity."""
    if f.is_zero():
        return LaurentInLambda(0, [], window)
    if any(j for (_, j) in f.num) or any(j for (_, j) in f.den):
        raise ValueError("laurent expansion is for functions of lam alone")
    np = {i: v for (i, _), v in f.num.items()}
    dp = {i: v for (i, _), v in f.den.items()}
    dn, dd = max(np), max(dp)
    # power series division in u = 1/lam
    a = [np.get(dn - k, Frac(0)) for k in range(window)]
    b = [dp.get(dd - k, Frac(0)) for k in range(window)]
    out = []
    for k in range(window):
        acc = a[k]
        for i in range(k):
            acc -= out[i] * b[k - i]
        out.append(acc / b[0])
    return LaurentInLambda(dn - dd, out, window)


def laurent_expand(series, window=8):
    """Per-degree Laurent expansion of a TruncSeries whose coefficients are
    RatFun in lam alone; returns {degree: LaurentInLambda}."""
    out = {}
    for k in range(series.order + 1):
        c = series.coeff(k, RF_ZERO)
        if isinstance(c, (int, Frac)):
            c = RatFun(c)
        out[k] = laurent_of_ratfun(c, window)
    return out
