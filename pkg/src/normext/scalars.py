"""Exact scalars: cyclotomic field elements and multiplicative units.

Two coefficient domains coexist:

* ``Scalar`` -- an element of Q(zeta_N), stored as a rational coefficient
  vector over the power basis 1, z, ..., z^(d-1) where d = deg Phi_N.  All
  linear algebra in the package runs over these.
* ``UnitScalar`` -- an element of the divisible abelian group
  (Q/Z) + Q^k, written multiplicatively as e^(2*pi*i*r) * prod params^a_j.
  The good-tuple equations are purely multiplicative, so this group is
  enough to solve them symbolically.

``Assignment`` bridges the two: it sends parameters (and designated
fractional roots of them) to field values, giving a group homomorphism
from the units it is defined on into Q(zeta_N)*.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

# Conductor ceiling for promotions and exponent-denominator ceiling for
# units.  Both are soft limits: breaching them raises instead of degrading.
MAX_CONDUCTOR = 120
MAX_EXP_DENOM = 12


class ScalarError(ArithmeticError):
    pass


class ConductorLimitError(ScalarError):
    pass


class UnitExponentError(ScalarError):
    pass


class SpecializeError(ScalarError):
    pass


def _poly_divmod_int(num: list[int], den: list[int]) -> list[int]:
    """Exact quotient of integer polynomials (den monic, remainder 0)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("non-exact polynomial division")
    return out


_CYCLO_CACHE: dict[int, tuple[int, ...]] = {}


def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the n-th cyclotomic polynomial."""
    if n in _CYCLO_CACHE:
        return _CYCLO_CACHE[n]
    if n < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divmod_int(poly, list(cyclotomic_poly(d)))
    result = tuple(poly)
    _CYCLO_CACHE[n] = result
    return result


_RED_CACHE: dict[int, list[tuple[Fraction, ...]]] = {}


def _reduction_table(n: int, upto: int) -> list[tuple[Fraction, ...]]:
    """Vectors of z^k mod Phi_n for k in 0..upto-1."""
    phi = cyclotomic_poly(n)
    d = len(phi) - 1
    rows = _RED_CACHE.setdefault(n, [])
    while len(rows) < upto:
        k = len(rows)
        if k < d:
            vec = [Fraction(0)] * d
            vec[k] = Fraction(1)
            rows.append(tuple(vec))
        else:
            # z^(k) = z * z^(k-1), folding z^d = -(phi_0 + ... + phi_{d-1} z^{d-1}).
            cur = rows[k - 1]
            top = cur[d - 1]
            nxt = [Fraction(0)] + list(cur[: d - 1])
            if top:
                for j in range(d):
                    nxt[j] -= top * phi[j]
            rows.append(tuple(nxt))
    return rows


class Scalar:
    """Element of Q(zeta_N) in canonical (reduced, lowest-terms) form."""

    __slots__ = ("n", "c")

    @staticmethod
    def _raw(n: int, coeffs: tuple) -> "Scalar":
        s = Scalar.__new__(Scalar)
        s.n = n
        s.c = coeffs
        return s

    def __init__(self, n: int, coeffs) -> None:
        d = len(cyclotomic_poly(n)) - 1
        c = list(coeffs)
        if len(c) > d:
            table = _reduction_table(n, len(c))
            folded = [Fraction(0)] * d
            for k, v in enumerate(c):
                if v:
                    row = table[k]
                    for j in range(d):
                        if row[j]:
                            folded[j] += v * row[j]
            c = folded
        else:
            c = [Fraction(v) for v in c] + [Fraction(0)] * (d - len(c))
        self.n = n
        self.c = tuple(Fraction(v) for v in c)

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(v, n: int = 1) -> "Scalar":
        return Scalar(n, [Fraction(v)])

    @staticmethod
    def zero(n: int = 1) -> "Scalar":
        return Scalar(n, [])

    @staticmethod
    def one(n: int = 1) -> "Scalar":
        return Scalar(n, [Fraction(1)])

    @staticmethod
    def zeta(n: int, k: int = 1) -> "Scalar":
        """zeta_n^k."""
        k %= n
        vec = [Fraction(0)] * (k + 1)
        vec[k] = Fraction(1)
        return Scalar(n, vec)

    # -- conductor handling -------------------------------------------

    def promote(self, n: int) -> "Scalar":
        if n == self.n:
            return self
        if n % self.n != 0:
            raise ScalarError(f"cannot embed conductor {self.n} into {n}")
        if n > MAX_CONDUCTOR:
            raise ConductorLimitError(f"conductor {n} exceeds limit {MAX_CONDUCTOR}")
        step = n // self.n
        d = len(cyclotomic_poly(n)) - 1
        vec = [Fraction(0)] * ((len(self.c) - 1) * step + 1 or 1)
        for k, v in enumerate(self.c):
            if v:
                vec[k * step] += v
        return Scalar(n, vec)

    @staticmethod
    def common(a: "Scalar", b: "Scalar") -> tuple["Scalar", "Scalar"]:
        if a.n == b.n:
            return a, b
        m = a.n * b.n // gcd(a.n, b.n)
        return a.promote(m), b.promote(m)

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "Scalar") -> "Scalar":
        a, b = Scalar.common(self, other)
        return Scalar(a.n, [x + y for x, y in zip(a.c, b.c)])

    def __sub__(self, other: "Scalar") -> "Scalar":
        a, b = Scalar.common(self, other)
        return Scalar(a.n, [x - y for x, y in zip(a.c, b.c)])

    def __neg__(self) -> "Scalar":
        return Scalar(self.n, [-x for x in self.c])

    def __mul__(self, other: "Scalar") -> "Scalar":
        a, b = Scalar.common(self, other)
        d = len(a.c)
        conv = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        conv[i + j] += x * y
        return Scalar(a.n, conv)

    def inv(self) -> "Scalar":
        """Multiplicative inverse via extended Euclid against Phi_N."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        phi = [Fraction(v) for v in cyclotomic_poly(self.n)]
        # Extended gcd of self (as poly) and phi over Q[x].
        r0, r1 = phi, list(self.c)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        t0 = [Fraction(1)]

        def deg(p):
            for i in range(len(p) - 1, -1, -1):
                if p[i]:
                    return i
            return -1

        while deg(r1) > 0:
            d0, d1 = deg(r0), deg(r1)
            if d0 < d1:
                r0, r1 = r1, r0
                s0, s1 = s1, s0
                continue
            q = [Fraction(0)] * (d0 - d1 + 1)
            rr = list(r0)
            while deg(rr) >= d1 >= 0 and deg(rr) >= 0:
                k = deg(rr) - d1
                coef = rr[deg(rr)] / r1[d1]
                q[k] += coef
                for j in range(d1 + 1):
                    rr[k + j] -= coef * r1[j]
            # r0 - q*r1 = rr ; update Bezout coefficient for self.
            news = list(s0) + [Fraction(0)] * max(0, len(q) + len(s1) - 1 - len(s0))
            for i, qc in enumerate(q):
                if qc:
                    for j, sc in enumerate(s1):
                        if sc:
                            news[i + j] -= qc * sc
            r0, r1 = r1, rr
            s0, s1 = s1, news
        d1 = deg(r1)
        if d1 < 0:
            raise ZeroDivisionError("scalar is a zero divisor (defect)")
        lead = r1[d1]
        return Scalar(self.n, [v / lead for v in s1])

    def __truediv__(self, other: "Scalar") -> "Scalar":
        return self * other.inv()

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inv() ** (-k)
        out = Scalar.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.c)

    def is_one(self) -> bool:
        return self.c[0] == 1 and all(v == 0 for v in self.c[1:])

    def as_rational(self) -> Fraction | None:
        if all(v == 0 for v in self.c[1:]):
            return self.c[0]
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        a, b = Scalar.common(self, other)
        return a.c == b.c

    __hash__ = None  # promotion-dependent representation; compare, don't hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- text ------------------------------------------------------------

    def __str__(self) -> str:
        terms = []
        for k, v in enumerate(self.c):
            if v == 0:
                continue
            if k == 0:
                terms.append(str(v))
            else:
                z = "z" if k == 1 else f"z^{k}"
                if v == 1:
                    terms.append(z)
                elif v == -1:
                    terms.append(f"-{z}")
                else:
                    terms.append(f"{v}*{z}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += f" + {t}" if not t.startswith("-") else f" - {t[1:]}"
        return out

    def __repr__(self) -> str:
        return f"Scalar(N={self.n}, {self})"


_ZERO = Fraction(0)


def _mul_vec(n: int, ca: tuple, cb: tuple) -> tuple:
    """Product coefficient vector in Q(zeta_n), reduced mod Phi_n."""
    d = len(ca)
    if d == 1:
        return (ca[0] * cb[0],)
    conv = [_ZERO] * (2 * d - 1)
    for i, x in enumerate(ca):
        if x:
            for j, y in enumerate(cb):
                if y:
                    conv[i + j] += x * y
    if not any(conv[d:]):
        return tuple(conv[:d])
    table = _reduction_table(n, 2 * d - 1)
    out = list(conv[:d])
    for k in range(d, 2 * d - 1):
        v = conv[k]
        if v:
            row = table[k]
            for j in range(d):
                if row[j]:
                    out[j] += v * row[j]
    return tuple(out)


def sc_mul(a: Scalar, b: Scalar) -> Scalar:
    """Fast product assuming equal conductors (hot path)."""
    if a.n != b.n:
        return a * b
    return Scalar._raw(a.n, _mul_vec(a.n, a.c, b.c))


def sc_fms(a: Scalar | None, c: Scalar, b: Scalar) -> Scalar | None:
    """a - c*b with one allocation; None encodes zero (hot path)."""
    prod = _mul_vec(c.n, c.c, b.c)
    if a is None:
        vec = tuple(-v for v in prod)
    else:
        vec = tuple(x - y for x, y in zip(a.c, prod))
    if any(vec):
        return Scalar._raw(c.n, vec)
    return None


def root_order(n: int) -> int:
    """Order of the group of roots of unity inside Q(zeta_n)."""
    return n if n % 2 == 0 else 2 * n


def torsion_scalar(r: Fraction, n: int) -> Scalar:
    """e^(2*pi*i*r) as an element of Q(zeta_n); raises if it is not one."""
    r = Fraction(r) % 1
    m = root_order(n)
    if (r * m).denominator != 1:
        raise SpecializeError(
            f"torsion denominator {r.denominator} does not divide root order {m} of Q(zeta_{n})"
        )
    j = int(r * m) % m
    if n % 2 == 0:
        return Scalar.zeta(n, j)
    # m = 2n with n odd: e^(2*pi*i*j/2n) = +-zeta_n^(...)
    if j % 2 == 0:
        return Scalar.zeta(n, j // 2)
    return -Scalar.zeta(n, ((j + n) // 2) % n)


def recognize_torsion(s: Scalar) -> Fraction | None:
    """Return r with s = e^(2*pi*i*r), or None if s is not a root of unity."""
    m = root_order(s.n)
    for j in range(m):
        if s == torsion_scalar(Fraction(j, m), s.n):
            return Fraction(j, m)
    return None


class UnitScalar:
    """e^(2*pi*i*tor) * prod_j param_j^exps[j]; always invertible."""

    __slots__ = ("tor", "exps")

    def __init__(self, tor, exps=()) -> None:
        tor = Fraction(tor) % 1
        exps = tuple(Fraction(e) for e in exps)
        for e in (tor, *exps):
            if e.denominator > MAX_EXP_DENOM:
                raise UnitExponentError(
                    f"exponent denominator {e.denominator} exceeds cap {MAX_EXP_DENOM}"
                )
        self.tor = tor
        self.exps = exps

    @staticmethod
    def one(k: int = 0) -> "UnitScalar":
        return UnitScalar(0, (0,) * k)

    @staticmethod
    def minus_one(k: int = 0) -> "UnitScalar":
        return UnitScalar(Fraction(1, 2), (0,) * k)

    @staticmethod
    def param(i: int, k: int) -> "UnitScalar":
        exps = [Fraction(0)] * k
        exps[i] = Fraction(1)
        return UnitScalar(0, exps)

    def _check(self, other: "UnitScalar") -> None:
        if len(self.exps) != len(other.exps):
            raise ScalarError("unit scalars over different parameter lists")

    def __mul__(self, other: "UnitScalar") -> "UnitScalar":
        self._check(other)
        return UnitScalar(self.tor + other.tor, [a + b for a, b in zip(self.exps, other.exps)])

    def inv(self) -> "UnitScalar":
        return UnitScalar(-self.tor, [-a for a in self.exps])

    def __truediv__(self, other: "UnitScalar") -> "UnitScalar":
        return self * other.inv()

    def __neg__(self) -> "UnitScalar":
        return UnitScalar(self.tor + Fraction(1, 2), self.exps)

    def pow(self, r) -> "UnitScalar":
        r = Fraction(r)
        return UnitScalar(self.tor * r, [a * r for a in self.exps])

    def __pow__(self, k: int) -> "UnitScalar":
        return self.pow(k)

    def is_one(self) -> bool:
        return self.tor == 0 and all(e == 0 for e in self.exps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnitScalar):
            return NotImplemented
        return self.tor == other.tor and self.exps == other.exps

    def __hash__(self) -> int:
        return hash((self.tor, self.exps))

    def extend(self, extra: int) -> "UnitScalar":
        """Append `extra` zero exponent slots (new formal symbols)."""
        return UnitScalar(self.tor, self.exps + (Fraction(0),) * extra)

    def text(self, params=()) -> str:
        factors = []
        if self.tor == Fraction(1, 2):
            sign = "-"
        elif self.tor != 0:
            sign = ""
            factors.append(f"e({self.tor})")
        else:
            sign = ""
        for name, e in zip(params, self.exps):
            if e == 0:
                continue
            if e == 1:
                factors.append(name)
            else:
                factors.append(f"{name}^{{{e}}}")
        if not factors:
            return sign + "1"
        return sign + "*".join(factors)

    def __str__(self) -> str:
        return self.text([f"t{i+1}" for i in range(len(self.exps))])

    def __repr__(self) -> str:
        return f"UnitScalar({self})"


class Assignment:
    """Map from formal parameters to nonzero field values.

    Fractional exponents specialize through explicitly designated roots:
    ``roots[(name, q)]`` is the chosen q-th root of ``values[name]``.  The
    designation set is validated for coherence (root_{q'}^{q'/q} = root_q
    whenever q | q'), which makes specialization a group homomorphism on
    everything it is defined on.
    """

    def __init__(self, params, values: dict, roots: dict | None = None, conductor: int = 1):
        self.params = tuple(params)
        self.conductor = conductor
        self.values: dict[str, Scalar] = {}
        for name, v in values.items():
            if name not in self.params:
                raise SpecializeError(f"assignment for undeclared parameter {name!r}")
            s = v if isinstance(v, Scalar) else Scalar.from_rational(v, conductor)
            s = s.promote(conductor) if s.n != conductor and conductor % s.n == 0 else s
            if s.is_zero():
                raise SpecializeError(f"parameter {name!r} assigned zero")
            self.values[name] = s
        self.roots: dict[tuple[str, int], Scalar] = {}
        if roots:
            for (name, q), r in roots.items():
                s = r if isinstance(r, Scalar) else Scalar.from_rational(r, conductor)
                self.roots[(name, int(q))] = s
        self._validate_roots()

    def _validate_roots(self) -> None:
        for (name, q), r in self.roots.items():
            if name not in self.values:
                raise SpecializeError(f"root designated for unassigned parameter {name!r}")
            if r**q != self.values[name]:
                raise SpecializeError(f"designated root for {name!r}^(1/{q}) fails root^{q} = value")
        by_name: dict[str, list[int]] = {}
        for name, q in self.roots:
            by_name.setdefault(name, []).append(q)
        for name, qs in by_name.items():
            for q in qs:
                for q2 in qs:
                    if q2 % q == 0 and q2 != q:
                        if self.roots[(name, q2)] ** (q2 // q) != self.roots[(name, q)]:
                            raise SpecializeError(
                                f"incoherent root designations for {name!r} (1/{q} vs 1/{q2})"
                            )

    def _power(self, name: str, e: Fraction) -> Scalar:
        if name not in self.values:
            raise SpecializeError(f"unassigned parameter {name!r}")
        if e.denominator == 1:
            return self.values[name] ** e.numerator
        q = e.denominator
        candidates = sorted(q2 for (nm, q2) in self.roots if nm == name and q2 % q == 0)
        if not candidates:
            raise SpecializeError(
                f"exponent {e} of {name!r} not realizable: no designated 1/{q} root"
            )
        q2 = candidates[0]
        return self.roots[(name, q2)] ** int(e * q2)

    def specialize(self, u: UnitScalar) -> Scalar:
        """Field value of u; raises when a factor is not realizable."""
        if len(u.exps) != len(self.params):
            raise SpecializeError("unit scalar and assignment parameter lists differ")
        out = torsion_scalar(u.tor, self.conductor)
        for name, e in zip(self.params, u.exps):
            if e:
                out = out * self._power(name, e).promote(self.conductor)
        return out


def unit_from_scalar(s: Scalar, nparams: int = 0) -> UnitScalar | None:
    """Recognize a field scalar as a parameter-free unit (root of unity)."""
    r = recognize_torsion(s)
    if r is None:
        return None
    return UnitScalar(r, (Fraction(0),) * nparams)
