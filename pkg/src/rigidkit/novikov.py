"""Exact arithmetic in the field of generalized Laurent series s^theta.

Scalars are stored as fractions num/den of finitely supported sums
``sum_theta z_theta * s^theta`` with rational exponents theta and
coefficients z_theta in a base field (GF(2) or the rationals).  All
operations are exact; no series is ever truncated except in the explicit
:func:`NovikovScalar.expand` helper, which exists as an independent
cross-check for the valuation and free-term computations.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

NEG_INF = float("-inf")

F2 = "F2"
QMODEL = "Q"

_FIELDS = (F2, QMODEL)


class FieldMismatchError(ValueError):
    pass


def _rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not a rational: {x!r}")


def rational_gcd(a: Fraction, b: Fraction) -> Fraction:
    """gcd of two rationals: the generator of aZ + bZ (nonnegative)."""
    a, b = abs(_rat(a)), abs(_rat(b))
    if a == 0:
        return b
    if b == 0:
        return a
    num = math.gcd(a.numerator * b.denominator, b.numerator * a.denominator)
    return Fraction(num, a.denominator * b.denominator)


class PeriodGroup:
    """Cyclic subgroup of the rationals, generator * Z (generator 0 = trivial)."""

    __slots__ = ("generator",)

    def __init__(self, generator=0):
        g = _rat(generator)
        if g < 0:
            g = -g
        self.generator = g

    @classmethod
    def trivial(cls) -> "PeriodGroup":
        return cls(0)

    def is_trivial(self) -> bool:
        return self.generator == 0

    def contains(self, theta) -> bool:
        theta = _rat(theta)
        if self.generator == 0:
            return theta == 0
        q = theta / self.generator
        return q.denominator == 1

    def distance(self, theta) -> Fraction:
        """Distance from theta to the nearest group element."""
        theta = _rat(theta)
        if self.generator == 0:
            return abs(theta)
        g = self.generator
        r = theta - g * (theta / g).__floor__()
        return min(r, g - r)

    def __add__(self, other: "PeriodGroup") -> "PeriodGroup":
        return PeriodGroup(rational_gcd(self.generator, other.generator))

    def __eq__(self, other) -> bool:
        return isinstance(other, PeriodGroup) and self.generator == other.generator

    def __hash__(self):
        return hash(("PeriodGroup", self.generator))

    def __repr__(self):
        return f"PeriodGroup({self.generator})"


def group_sum(g1: PeriodGroup, g2: PeriodGroup) -> PeriodGroup:
    return g1 + g2


# ---------------------------------------------------------------------------
# coefficient arithmetic in the base field

def _coeff(field, x):
    if field == F2:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError("GF(2) coefficient must be an integer")
            x = x.numerator
        return int(x) & 1
    return _rat(x)


def _cadd(field, a, b):
    return (a ^ b) if field == F2 else a + b


def _cmul(field, a, b):
    return (a & b) if field == F2 else a * b


def _cneg(field, a):
    return a if field == F2 else -a


def _cinv(field, a):
    if field == F2:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1
    if a == 0:
        raise ZeroDivisionError("inverse of 0")
    return 1 / a


# ---------------------------------------------------------------------------
# finitely supported sums  {exponent: coefficient}

def _poly_clean(field, p):
    return {e: c for e, c in p.items() if c != 0}


def _poly_add(field, a, b):
    out = dict(a)
    for e, c in b.items():
        if e in out:
            s = _cadd(field, out[e], c)
            if s == 0:
                del out[e]
            else:
                out[e] = s
        else:
            out[e] = c
    return out


def _poly_neg(field, a):
    if field == F2:
        return dict(a)
    return {e: -c for e, c in a.items()}


def _poly_mul(field, a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            c = _cmul(field, ca, cb)
            if e in out:
                s = _cadd(field, out[e], c)
                if s == 0:
                    del out[e]
                else:
                    out[e] = s
            elif c != 0:
                out[e] = c
    return out


def _poly_scale(field, a, c, shift=Fraction(0)):
    if c == 0:
        return {}
    return {e + shift: _cmul(field, coef, c) for e, coef in a.items()}


def _poly_top(a):
    return max(a) if a else None


def _poly_lead(a):
    return a[max(a)]


def _poly_gcd_reduce(field, num, den):
    """Divide num and den by their polynomial gcd (via a t = s^(1/delta) substitution)."""
    if not num:
        return num, den
    exps = list(num) + list(den)
    delta = 1
    for e in exps:
        delta = delta * e.denominator // math.gcd(delta, e.denominator)
    lo = min(exps)

    def to_dense(p):
        deg = max(int((e - lo) * delta) for e in p) if p else 0
        v = [0 if field == F2 else Fraction(0)] * (deg + 1)
        for e, c in p.items():
            v[int((e - lo) * delta)] = c
        return v

    def trim(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    def polydiv(a, b):
        # remainder of a by b (b nonzero), dense lists
        a = list(a)
        db, lb = len(b) - 1, b[-1]
        inv_lb = _cinv(field, lb)
        while len(a) - 1 >= db and a:
            f = _cmul(field, a[-1], inv_lb)
            shift = len(a) - 1 - db
            for i, bc in enumerate(b):
                a[shift + i] = _cadd(field, a[shift + i], _cneg(field, _cmul(field, f, bc)))
            a = trim(a)
        return a

    a = trim(to_dense(num))
    b = trim(to_dense(den))
    while b:
        a, b = b, polydiv(a, b)
    g = a
    if len(g) <= 1:
        return num, den

    def polquo(a, b):
        a = list(a)
        db, lb = len(b) - 1, b[-1]
        inv_lb = _cinv(field, lb)
        q = [0 if field == F2 else Fraction(0)] * (len(a) - db)
        while len(a) - 1 >= db and a:
            f = _cmul(field, a[-1], inv_lb)
            shift = len(a) - 1 - db
            q[shift] = f
            for i, bc in enumerate(b):
                a[shift + i] = _cadd(field, a[shift + i], _cneg(field, _cmul(field, f, bc)))
            a = trim(a)
        return q

    def to_sparse(v, base):
        return {base + Fraction(i, delta): c for i, c in enumerate(v) if c != 0}

    qn = polquo(trim(to_dense(num)), g)
    qd = polquo(trim(to_dense(den)), g)
    # num = qn * g * s^lo-ish; the common monomial factor cancels in num/den
    return to_sparse(qn, Fraction(0)), to_sparse(qd, Fraction(0))


class NovikovScalar:
    """Element of the fraction field of finitely supported sums sum z*s^theta.

    The representation is canonical: num/den is reduced by the polynomial
    gcd, the denominator has minimal exponent 0 and leading coefficient 1.
    """

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field, num, den=None, _normalized=False):
        if field not in _FIELDS:
            raise ValueError(f"unknown base field {field!r}")
        self.field = field
        if den is None:
            den = {Fraction(0): _coeff(field, 1)}
        if _normalized:
            self.num, self.den = num, den
            self._hash = None
            return
        num = _poly_clean(field, {_rat(e): _coeff(field, c) for e, c in num.items()})
        den = _poly_clean(field, {_rat(e): _coeff(field, c) for e, c in den.items()})
        if not den:
            raise ZeroDivisionError("denominator is zero")
        if not num:
            self.num = {}
            self.den = {Fraction(0): _coeff(field, 1)}
            self._hash = None
            return
        if len(den) > 1 or len(num) > 4:
            num, den = _poly_gcd_reduce(field, num, den)
        # shift so den has minimal exponent 0, then make den's leading coeff 1
        lo = min(den)
        if lo != 0:
            num = {e - lo: c for e, c in num.items()}
            den = {e - lo: c for e, c in den.items()}
        lead = den[max(den)]
        if lead != 1:
            inv = _cinv(field, lead)
            num = {e: _cmul(field, c, inv) for e, c in num.items()}
            den = {e: _cmul(field, c, inv) for e, c in den.items()}
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, field) -> "NovikovScalar":
        return cls(field, {})

    @classmethod
    def one(cls, field) -> "NovikovScalar":
        return cls(field, {Fraction(0): 1})

    @classmethod
    def monomial(cls, field, coeff, exponent) -> "NovikovScalar":
        return cls(field, {_rat(exponent): coeff})

    @classmethod
    def constant(cls, field, coeff) -> "NovikovScalar":
        return cls(field, {Fraction(0): coeff})

    @classmethod
    def from_terms(cls, field, terms) -> "NovikovScalar":
        return cls(field, dict(terms))

    # -- predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == self.den

    def _check(self, other):
        if not isinstance(other, NovikovScalar):
            raise TypeError(f"expected NovikovScalar, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(
                f"base field mismatch: {self.field} vs {other.field}")

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        self._check(other)
        f = self.field
        num = _poly_add(f, _poly_mul(f, self.num, other.den),
                        _poly_mul(f, other.num, self.den))
        return NovikovScalar(f, num, _poly_mul(f, self.den, other.den))

    def __sub__(self, other):
        self._check(other)
        f = self.field
        num = _poly_add(f, _poly_mul(f, self.num, other.den),
                        _poly_neg(f, _poly_mul(f, other.num, self.den)))
        return NovikovScalar(f, num, _poly_mul(f, self.den, other.den))

    def __neg__(self):
        return NovikovScalar(self.field, _poly_neg(self.field, self.num),
                             dict(self.den), _normalized=True)

    def __mul__(self, other):
        self._check(other)
        f = self.field
        return NovikovScalar(f, _poly_mul(f, self.num, other.num),
                             _poly_mul(f, self.den, other.den))

    def inverse(self) -> "NovikovScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0")
        return NovikovScalar(self.field, dict(self.den), dict(self.num))

    def __truediv__(self, other):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero")
        f = self.field
        return NovikovScalar(f, _poly_mul(f, self.num, other.den),
                             _poly_mul(f, self.den, other.num))

    def __pow__(self, k: int):
        if k == 0:
            return NovikovScalar.one(self.field)
        base = self if k > 0 else self.inverse()
        k = abs(k)
        out = NovikovScalar.one(self.field)
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, NovikovScalar):
            return NotImplemented
        return (self.field == other.field and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field,
                               tuple(sorted(self.num.items())),
                               tuple(sorted(self.den.items()))))
        return self._hash

    # -- valuation and expansion ----------------------------------------
    def valuation(self):
        """Top exponent of the series; -inf for 0."""
        if self.is_zero():
            return NEG_INF
        return _poly_top(self.num) - _poly_top(self.den)

    def leading_coefficient(self):
        if self.is_zero():
            raise ValueError("0 has no leading coefficient")
        f = self.field
        return _cmul(f, _poly_lead(self.num), _cinv(f, _poly_lead(self.den)))

    def expand(self, num_terms: int = 10):
        """Truncated descending-series expansion, at most num_terms terms.

        Returns a dict {exponent: coefficient}.  Independent of the exact
        fraction arithmetic, so it serves as an oracle for valuation and
        free-term computations.
        """
        if self.is_zero():
            return {}
        # expansion exponents live in a discrete progression; step down
        # by the exponent lattice of num/den until enough terms collected
        exps = list(self.num) + list(self.den)
        delta = 1
        for e in exps:
            delta = delta * e.denominator // math.gcd(delta, e.denominator)
        step = Fraction(1, delta)
        top = self.valuation()
        floor = top - num_terms * step * max(1, len(self.den) + len(self.num))
        out = self.expand_to(floor)
        for _ in range(64):
            if len(out) >= num_terms:
                break
            exact = self._expansion_exact(floor)
            if exact:
                break
            floor -= num_terms * step * 4
            out = self.expand_to(floor)
        return dict(sorted(out.items(), reverse=True)[:num_terms])

    def _expansion_exact(self, floor) -> bool:
        # remainder of num by den is zero => the series terminates
        f = self.field
        n, d = _poly_gcd_reduce(f, self.num, self.den)
        return len(d) == 1

    def expand_to(self, min_exponent):
        """All series terms with exponent >= min_exponent, exactly."""
        if self.is_zero():
            return {}
        f = self.field
        m = _rat(min_exponent)
        e_d = _poly_top(self.den)
        c_d = self.den[e_d]
        inv = _cinv(f, c_d)
        # den = c*s^e*(1 - r),  r strictly lower order
        r = {e - e_d: _cneg(f, _cmul(f, c, inv)) for e, c in self.den.items() if e != e_d}
        r = _poly_neg(f, _poly_neg(f, r))  # no-op; keep dict fresh
        base = _poly_scale(f, self.num, inv, -e_d)
        cutoff = m
        out = {}
        power = {Fraction(0): _coeff(f, 1)}
        guard = 0
        while power:
            contrib = _poly_mul(f, base, power)
            for e, c in contrib.items():
                if e >= cutoff:
                    out[e] = _cadd(f, out.get(e, _coeff(f, 0)), c)
            power = _poly_mul(f, power, r)
            # drop power terms that can no longer contribute above cutoff
            if base:
                top_base = _poly_top(base)
                power = {e: c for e, c in power.items() if e + top_base >= cutoff}
            guard += 1
            if guard > 100000:
                raise RuntimeError("expansion did not terminate")
        return {e: c for e, c in out.items() if c != 0}

    def free_term(self):
        """Coefficient of s^0 in the full series expansion."""
        if self.is_zero():
            return _coeff(self.field, 0)
        if self.valuation() < 0:
            return _coeff(self.field, 0)
        return self.expand_to(0).get(Fraction(0), _coeff(self.field, 0))

    def exponents_in(self, group: PeriodGroup) -> bool:
        return (all(group.contains(e) for e in self.num)
                and all(group.contains(e) for e in self.den))

    # -- text form -------------------------------------------------------
    def to_text(self) -> str:
        num = _sum_to_text(self.field, self.num)
        if self.den == {Fraction(0): _coeff(self.field, 1)}:
            return num
        return f"({num})/({_sum_to_text(self.field, self.den)})"

    def __repr__(self):
        return f"NovikovScalar[{self.field}]({self.to_text()})"


def _frac_text(x) -> str:
    x = _rat(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _sum_to_text(field, poly) -> str:
    if not poly:
        return "0"
    parts = []
    for e in sorted(poly, reverse=True):
        c = poly[e]
        if field == F2:
            mag, neg = str(c), False
        else:
            neg = c < 0
            mag = _frac_text(-c if neg else c)
        if "/" in mag:
            mag = f"({mag})"
        term = f"{mag}*s^({_frac_text(e)})"
        if not parts:
            parts.append(("-" if neg else "") + term)
        else:
            parts.append(("- " if neg else "+ ") + term)
    return " ".join(parts)


_TERM_RE = re.compile(
    r"^(?:\(?(?P<coef>-?\d+(?:/\d+)?)\)?\*)?"
    r"(?:s\^\((?P<exp>-?\d+(?:/\d+)?)\))?$")


def _split_top_level(text, seps):
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in seps and cur.strip():
            parts.append(cur)
            parts.append(ch)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts


def _parse_sum(field, text):
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        # strip parens only if they wrap the whole expression
        depth = 0
        wraps = True
        for i, ch in enumerate(text):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0 and i < len(text) - 1:
                    wraps = False
                    break
        if wraps:
            text = text[1:-1].strip()
    if text == "0":
        return {}
    chunks = _split_top_level(text, "+-")
    poly = {}
    sign = 1
    for chunk in chunks:
        chunk = chunk.strip()
        if chunk == "+":
            sign = 1
            continue
        if chunk == "-":
            sign = -1
            continue
        if not chunk:
            continue
        compact = chunk.replace(" ", "")
        while compact and compact[0] in "+-":
            if compact[0] == "-":
                sign = -sign
            compact = compact[1:]
        m = _TERM_RE.match(compact)
        if not m or (m.group("coef") is None and m.group("exp") is None):
            # bare rational constant, possibly parenthesized
            bare = compact.strip("()")
            try:
                coef = Fraction(bare)
                exp = Fraction(0)
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"cannot parse term {chunk!r}")
        else:
            coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
            exp = Fraction(m.group("exp")) if m.group("exp") else Fraction(0)
        coef = sign * coef
        c = _coeff(field, coef if field != F2 else int(coef) & 1)
        if exp in poly:
            c = _cadd(field, poly[exp], c)
        if c == 0:
            poly.pop(exp, None)
        else:
            poly[exp] = c
        sign = 1
    return poly


def parse_scalar(field, text: str) -> NovikovScalar:
    """Parse the textual form produced by NovikovScalar.to_text (exact round-trip)."""
    parts = _split_top_level(text.strip(), "/")
    pieces = [p for p in parts if p.strip() and p.strip() != "/"]
    slashes = sum(1 for p in parts if p.strip() == "/")
    if slashes == 0:
        return NovikovScalar(field, _parse_sum(field, text))
    if slashes == 1 and len(pieces) == 2:
        num = _parse_sum(field, pieces[0])
        den = _parse_sum(field, pieces[1])
        return NovikovScalar(field, num, den)
    # plain rational like 3/4
    m = _TERM_RE.match(text.replace(" ", ""))
    if m and m.group("coef"):
        return NovikovScalar.constant(field, Fraction(text.replace(" ", "")))
    raise ValueError(f"cannot parse scalar {text!r}")


def valuation(x: NovikovScalar):
    return x.valuation()


class LambdaElement:
    """Finitely supported sum of q-powers with NovikovScalar coefficients.

    q has degree 2 and s degree 0; a term at q-power k contributes degree 2k.
    """

    __slots__ = ("field", "terms")

    def __init__(self, field, terms=None):
        self.field = field
        t = {}
        if terms:
            for k, sc in terms.items():
                if not isinstance(sc, NovikovScalar):
                    raise TypeError("LambdaElement coefficients must be NovikovScalar")
                if sc.field != field:
                    raise FieldMismatchError("coefficient field mismatch")
                if not sc.is_zero():
                    t[int(k)] = sc
        self.terms = t

    @classmethod
    def zero(cls, field):
        return cls(field, {})

    @classmethod
    def one(cls, field):
        return cls(field, {0: NovikovScalar.one(field)})

    @classmethod
    def q_power(cls, field, k, scalar=None):
        return cls(field, {k: scalar if scalar is not None else NovikovScalar.one(field)})

    def is_zero(self):
        return not self.terms

    def _check(self, other):
        if not isinstance(other, LambdaElement):
            raise TypeError("expected LambdaElement")
        if other.field != self.field:
            raise FieldMismatchError("base field mismatch")

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        for k, sc in other.terms.items():
            t[k] = t[k] + sc if k in t else sc
        return LambdaElement(self.field, t)

    def __sub__(self, other):
        self._check(other)
        return self + (-other)

    def __neg__(self):
        return LambdaElement(self.field, {k: -sc for k, sc in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NovikovScalar):
            return LambdaElement(self.field,
                                 {k: sc * other for k, sc in self.terms.items()})
        self._check(other)
        out = {}
        for k1, s1 in self.terms.items():
            for k2, s2 in other.terms.items():
                k = k1 + k2
                p = s1 * s2
                out[k] = out[k] + p if k in out else p
        return LambdaElement(self.field, out)

    def scale(self, scalar: NovikovScalar):
        return self * scalar

    def coefficient(self, k: int) -> NovikovScalar:
        return self.terms.get(k, NovikovScalar.zero(self.field))

    def valuation(self):
        if not self.terms:
            return NEG_INF
        return max(sc.valuation() for sc in self.terms.values())

    def q_powers(self):
        return sorted(self.terms)

    def exponents_in(self, group: PeriodGroup) -> bool:
        return all(sc.exponents_in(group) for sc in self.terms.values())

    def __eq__(self, other):
        if not isinstance(other, LambdaElement):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.field, tuple(sorted((k, hash(v)) for k, v in self.terms.items()))))

    def to_text(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({self.terms[k].to_text()})*q^({k})" for k in sorted(self.terms, reverse=True))

    def __repr__(self):
        return f"LambdaElement[{self.field}]({self.to_text()})"


def lambda_valuation(lam: LambdaElement):
    return lam.valuation()
