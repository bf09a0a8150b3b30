# exact_arith.py
from __future__ import annotations
import math, operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Sequence, Union

Op = Literal["add", "sub", "mul", "div"]

_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


class ExactArithError(ArithmeticError):
    pass


# -----------------------------
# Rationals
# -----------------------------
def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ExactArithError(f"not a rational literal: {x!r}") from e
    raise ExactArithError(f"not an exact rational: {x!r}")


def rational_arith(x, y, op: Op) -> Fraction:
    x, y = as_rational(x), as_rational(y)
    if op not in _OPS:
        raise ExactArithError(f"unknown operation: {op}")
    try:
        return _OPS[op](x, y)
    except ZeroDivisionError as e:
        raise ExactArithError(f"division by zero: {x} / {y}") from e


# -----------------------------
# Polynomials over Q (internal, lowest degree first)
# -----------------------------
def _trim(cs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _q_add(p, q):
    n = max(len(p), len(q))
    return _trim(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def _q_scale(p, k):
    return _trim(c * k for c in p)


def _q_mul(p, q):
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _trim(out)


def _q_divmod(num, den):
    if not den:
        raise ExactArithError("polynomial division by zero")
    num = list(num)
    quot = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    while len(num) >= len(den) and num:
        k = num[-1] / lead
        shift = len(num) - len(den)
        quot[shift] = k
        for i, d in enumerate(den):
            num[shift + i] -= k * d
        num = list(_trim(num))
    return _trim(quot), _trim(num)


def _q_monic(p):
    return _q_scale(p, 1 / p[-1]) if p else ()


def _q_gcd(p, q):
    p, q = _trim(p), _trim(q)
    while q:
        p, q = q, _q_divmod(p, q)[1]
    return _q_monic(p)


def _q_derivative(p):
    return _trim(i * c for i, c in enumerate(p) if i > 0)


def _q_eval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


# -----------------------------
# IntPoly
# -----------------------------
@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients lowest degree first."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = [int(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_rational(cls, cs: Iterable) -> "IntPoly":
        """Clear denominators and return the primitive integer multiple."""
        cs = _trim(as_rational(c) for c in cs)
        if not cs:
            return cls(())
        den = math.lcm(*(c.denominator for c in cs))
        ints = [int(c * den) for c in cs]
        g = math.gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return cls(tuple(i // g for i in ints))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def content(self) -> int:
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def is_primitive(self) -> bool:
        return self.content() == 1

    def rational(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c) for c in self.coeffs)

    def __call__(self, x):
        return _q_eval(self.coeffs, x)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        return IntPoly(tuple(int(c) for c in _q_mul(self.rational(), other.rational())))

    def divides(self, other: "IntPoly") -> bool:
        return not _q_divmod(other.rational(), self.rational())[1]

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            mag = abs(c)
            body = str(mag) if (mag != 1 or i == 0) else ""
            body = f"{body}{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def charpoly(m: Sequence[Sequence[int]]) -> IntPoly:
    """Characteristic polynomial det(tI - m) via Faddeev-LeVerrier."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ExactArithError("charpoly needs a square matrix")
    a = [[int(v) for v in row] for row in m]
    mk = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    high_first = [1]
    for k in range(1, n + 1):
        am = [[sum(a[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        tr = sum(am[i][i] for i in range(n))
        ck = -tr // k
        high_first.append(ck)
        mk = [[am[i][j] + (ck if i == j else 0) for j in range(n)] for i in range(n)]
    return IntPoly(tuple(reversed(high_first)))


# -----------------------------
# Root isolation (Sturm)
# -----------------------------
def squarefree_part(p: IntPoly) -> IntPoly:
    if p.is_zero():
        raise ExactArithError("zero polynomial")
    q = p.rational()
    g = _q_gcd(q, _q_derivative(q))
    return IntPoly.from_rational(_q_divmod(q, g)[0])


def sturm_chain(p: IntPoly) -> list[tuple[Fraction, ...]]:
    chain = [p.rational(), _q_derivative(p.rational())]
    while chain[-1]:
        rem = _q_divmod(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append(_q_scale(rem, -1))
    return chain


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(chain, x) -> int:
    signs = [s for s in (_sign(_q_eval(q, x)) for q in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def cauchy_bound(p: IntPoly) -> Fraction:
    lead = abs(p.leading())
    return 1 + max(Fraction(abs(c), lead) for c in p.coeffs[:-1]) if p.degree() > 0 else Fraction(1)


def _split_point(p: IntPoly, lo: Fraction, hi: Fraction) -> Fraction:
    # midpoint unless it is a root; then a nearby non-root
    for num, den in ((1, 2), (1, 3), (2, 3), (2, 5), (3, 5), (3, 7), (4, 7)):
        x = lo + (hi - lo) * num / den
        if p(x) != 0:
            return x
    k = 11
    while True:
        x = lo + (hi - lo) * 5 / k
        if p(x) != 0:
            return x
        k += 1


def isolate_real_roots(p: IntPoly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals, each containing exactly one real root of p."""
    if p.is_zero():
        raise ExactArithError("cannot isolate roots of the zero polynomial")
    sq = squarefree_part(p)
    if sq.degree() <= 0:
        return []
    chain = sturm_chain(sq)
    bound = cauchy_bound(sq)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = _variations(chain, lo) - _variations(chain, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = _split_point(sq, lo, hi)
        stack.append((mid, hi))
        stack.append((lo, mid))
    return sorted(out)


# -----------------------------
# Degree <= 4 factorization over Q
# -----------------------------
def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _rational_root(p: IntPoly) -> Fraction | None:
    if p.coeffs[0] == 0:
        return Fraction(0)
    for num in _divisors(p.coeffs[0]):
        for den in _divisors(p.leading()):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if p(cand) == 0:
                    return cand
    return None


def _quadratic_split(p: IntPoly) -> tuple[IntPoly, IntPoly] | None:
    a0, a1, a2, a3, a4 = p.coeffs
    norm = math.isqrt(sum(c * c for c in p.coeffs)) + 1
    bound = 2 * norm + 1
    for alpha in _divisors(a4):
        delta = a4 // alpha
        for g in _divisors(a0):
            for gamma in (g, -g):
                zeta = a0 // gamma
                det = delta * gamma - alpha * zeta
                if det != 0:
                    beta_num = a3 * gamma - alpha * a1
                    eps_num = delta * a1 - zeta * a3
                    if beta_num % det or eps_num % det:
                        continue
                    pairs = [(beta_num // det, eps_num // det)]
                else:
                    pairs = []
                    for beta in range(-bound, bound + 1):
                        if alpha == 0:
                            continue
                        rest = a3 - beta * delta
                        if rest % alpha:
                            continue
                        eps = rest // alpha
                        if beta * zeta + gamma * eps == a1:
                            pairs.append((beta, eps))
                for beta, eps in pairs:
                    if alpha * zeta + beta * eps + gamma * delta == a2:
                        return IntPoly((gamma, beta, alpha)), IntPoly((zeta, eps, delta))
    return None


def factor_small(p: IntPoly) -> list[IntPoly]:
    """Irreducible primitive factors over Q (with multiplicity) of a degree <= 4 polynomial."""
    if p.is_zero():
        raise ExactArithError("cannot factor the zero polynomial")
    if p.degree() > 4:
        raise ExactArithError(f"degree {p.degree()} exceeds the supported bound 4")
    rest = IntPoly.from_rational(p.rational())
    factors: list[IntPoly] = []
    while rest.degree() >= 1:
        root = _rational_root(rest)
        if root is None:
            break
        lin = IntPoly.from_rational((-root, 1))
        factors.append(lin)
        rest = IntPoly.from_rational(_q_divmod(rest.rational(), lin.rational())[0])
    if rest.degree() == 4:
        split = _quadratic_split(rest)
        if split:
            factors.extend(IntPoly.from_rational(f.rational()) for f in split)
            rest = IntPoly((1,))
    if rest.degree() >= 1:
        factors.append(rest)
    return sorted(factors, key=lambda f: (f.degree(), f.coeffs))


# -----------------------------
# AlgebraicReal
# -----------------------------
@dataclass(frozen=True)
class AlgebraicReal:
    minimal_poly: IntPoly
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ExactArithError(f"isolating interval must satisfy lo < hi: [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def bisect(self) -> "AlgebraicReal":
        p = self.minimal_poly
        mid = (self.lo + self.hi) / 2
        v = p(mid)
        if v == 0:
            quarter = (self.hi - self.lo) / 4
            return AlgebraicReal(p, mid - quarter, mid + quarter)
        if _sign(p(self.lo)) != _sign(v):
            return AlgebraicReal(p, self.lo, mid)
        return AlgebraicReal(p, mid, self.hi)

    def refine(self, width) -> "AlgebraicReal":
        cur = self
        width = as_rational(width)
        while cur.width >= width:
            cur = cur.bisect()
        return cur

    def same_root(self, other: "AlgebraicReal") -> bool:
        if self is other:
            return True
        if self.minimal_poly != other.minimal_poly:
            return False
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return False
        p = self.minimal_poly
        if lo == hi:
            return p(lo) == 0
        return p(lo) == 0 or p(hi) == 0 or _sign(p(lo)) != _sign(p(hi))

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


def build_number_field(m: Sequence[Sequence[int]], *, width=Fraction(1, 10**12)) -> AlgebraicReal:
    """The eigenvalue of m in (0, 1) as an AlgebraicReal over its minimal polynomial."""
    cp = charpoly(m)
    found: list[AlgebraicReal] = []
    for factor in dict.fromkeys(factor_small(cp)):
        if factor.degree() == 1:
            root = Fraction(-factor.coeffs[0], factor.coeffs[1])
            if 0 < root < 1:
                found.append(AlgebraicReal(factor, root - width, root + width))
            continue
        for lo, hi in isolate_real_roots(factor):
            alpha = AlgebraicReal(factor, lo, hi)
            while True:
                if alpha.lo >= 0 and alpha.hi <= 1:
                    found.append(alpha)
                    break
                if alpha.hi <= 0 or alpha.lo >= 1:
                    break
                alpha = alpha.bisect()
    if not found:
        raise ExactArithError(f"no real eigenvalue in (0,1); charpoly = {cp}")
    if len(found) > 1:
        raise ExactArithError(f"{len(found)} eigenvalues in (0,1); charpoly = {cp}")
    return found[0].refine(width)


# -----------------------------
# Number field Q(lambda)
# -----------------------------
def _interval_mul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(ps), max(ps)


def _interval_eval(coeffs, lo, hi):
    acc = (Fraction(0), Fraction(0))
    for c in reversed(coeffs):
        acc = _interval_mul(acc, (lo, hi))
        acc = (acc[0] + c, acc[1] + c)
    return acc


class NumberFieldElement:
    """Element of Q(lambda): coefficients of 1, lambda, lambda^2, ... reduced mod the minimal polynomial."""

    __slots__ = ("generator", "coeffs")

    def __init__(self, generator: AlgebraicReal, coeffs: Iterable = ()):
        deg = generator.minimal_poly.degree()
        rem = _trim(as_rational(c) for c in coeffs)
        if len(rem) > deg:
            rem = _q_divmod(rem, generator.minimal_poly.rational())[1]
        padded = tuple(rem) + (Fraction(0),) * (deg - len(rem))
        object.__setattr__(self, "generator", generator)
        object.__setattr__(self, "coeffs", padded)

    def __setattr__(self, name, value):
        raise AttributeError("NumberFieldElement is immutable")

    @classmethod
    def gen(cls, generator: AlgebraicReal) -> "NumberFieldElement":
        return cls(generator, (0, 1))

    # coercion
    def _coerce(self, other) -> "NumberFieldElement | None":
        if isinstance(other, NumberFieldElement):
            if not self.generator.same_root(other.generator):
                raise ExactArithError("number field generator mismatch")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return NumberFieldElement(self.generator, (other,))
        return None

    def __reduce__(self):
        return (NumberFieldElement, (self.generator, self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    # arithmetic
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NumberFieldElement(self.generator, (a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElement(self.generator, (-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NumberFieldElement(self.generator, (a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NumberFieldElement(self.generator, _q_mul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "NumberFieldElement":
        if self.is_zero():
            raise ExactArithError("division by zero in number field")
        # extended Euclid: s*x + t*m = 1
        m = self.generator.minimal_poly.rational()
        r0, r1 = m, _trim(self.coeffs)
        s0, s1 = (), (Fraction(1),)
        while r1:
            q, r = _q_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _q_add(s0, _q_scale(_q_mul(q, s1), -1))
        if len(r0) != 1:
            raise ExactArithError("minimal polynomial is not irreducible")
        return NumberFieldElement(self.generator, _q_scale(s0, 1 / r0[0]))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    # order
    def enclosure(self, generator: AlgebraicReal | None = None) -> tuple[Fraction, Fraction]:
        g = generator or self.generator
        return _interval_eval(self.coeffs, g.lo, g.hi)

    def sign(self) -> int:
        if self.is_zero():
            return 0
        g = self.generator
        while True:
            lo, hi = self.enclosure(g)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            g = g.bisect()

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ExactArithError:
            return False
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.coeffs, self.generator.minimal_poly.coeffs))

    def _cmp(self, other) -> int | None:
        o = self._coerce(other)
        if o is None:
            return None
        return (self - o).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __bool__(self):
        return not self.is_zero()

    def __floor__(self) -> int:
        if self.is_rational():
            return math.floor(self.coeffs[0])
        g = self.generator
        while True:
            lo, hi = self.enclosure(g)
            if math.floor(lo) == math.floor(hi):
                return math.floor(lo)
            g = g.bisect()

    def __float__(self) -> float:
        lo, hi = self.enclosure(self.generator.refine(Fraction(1, 10**18)))
        return float((lo + hi) / 2)

    def __repr__(self) -> str:
        return f"NumberFieldElement({[str(c) for c in self.coeffs]}, poly={self.generator.minimal_poly})"

    __str__ = __repr__


FieldElement = Union[Fraction, NumberFieldElement]


def nf_arith(x: NumberFieldElement, y: NumberFieldElement, op: Op) -> NumberFieldElement:
    if op not in _OPS:
        raise ExactArithError(f"unknown operation: {op}")
    if not x.generator.same_root(y.generator):
        raise ExactArithError("number field generator mismatch")
    return _OPS[op](x, y)


def nf_compare(x: NumberFieldElement, y: NumberFieldElement) -> Literal["less", "equal", "greater"]:
    s = (x - y).sign()
    return "less" if s < 0 else ("equal" if s == 0 else "greater")


def exact_floor(x: FieldElement) -> int:
    return math.floor(x)


def to_decimal(x: FieldElement, digits: int = 6) -> str:
    """Decimal annotation rounded to `digits` places; never parsed back."""
    if isinstance(x, NumberFieldElement):
        g = x.generator
        tol = Fraction(1, 10 ** (digits + 3))
        lo, hi = x.enclosure(g)
        while hi - lo >= tol:
            g = g.bisect()
            lo, hi = x.enclosure(g)
        value = (lo + hi) / 2
    else:
        value = as_rational(x)
    scaled = round(value * 10**digits)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits > 0 else f"{sign}{whole}"


def det_int(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (fraction-based elimination)."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ExactArithError("determinant needs a square matrix")
    a = [[Fraction(v) for v in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            k = a[r][col] / a[col][col]
            if k:
                a[r] = [x - k * y for x, y in zip(a[r], a[col])]
    return int(det)


def mat_mul(x: Sequence[Sequence[int]], y: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(
        tuple(sum(x[i][t] * y[t][j] for t in range(len(y))) for j in range(len(y[0])))
        for i in range(len(x))
    )
