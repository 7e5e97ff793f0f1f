"""Exact arithmetic in discretely valued fields.

Two backends are provided:

* :class:`RationalAtP` -- the rationals with the p-adic valuation; scalars
  are :class:`fractions.Fraction` and the valuation ring is Z localized
  at p, with uniformizer p and residue field F_p.
* :class:`RationalFunctionOverFq` -- rational functions over a finite
  field F_q with the order-of-vanishing-at-0 valuation; scalars are
  :class:`LaurentRational` and the valuation ring is F_q[t] localized at
  (t), with uniformizer t and residue field F_q.

All arithmetic is exact; ``val`` returns an integer or the ``INF``
sentinel for zero.  Residue-field elements are encoded as plain ints in
``[0, q)`` (for non-prime q the int's base-p digits are the coefficients
of the element written over F_p).
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache

from .errors import NegativeValuation, SchurLatticeError

INF = math.inf


# ---------------------------------------------------------------------------
# finite fields
# ---------------------------------------------------------------------------

def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    f = 2
    while f * f <= m:
        if m % f == 0:
            return False
        f += 1
    return True


def _prime_power(q: int) -> tuple[int, int]:
    """Split q = p**e with p prime; raise on anything else."""
    if q < 2:
        raise SchurLatticeError(f"field size must be >= 2, got {q}")
    for p in range(2, q + 1):
        if _is_prime(p) and q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                raise SchurLatticeError(f"{q} is not a prime power")
            return p, e
    raise SchurLatticeError(f"{q} is not a prime power")


def _fp_poly_trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _fp_poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _fp_poly_trim(out)


def _fp_poly_mod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        if a[-1]:
            c = (a[-1] * inv_lead) % p
            shift = len(a) - 1 - dm
            for i, y in enumerate(m):
                a[shift + i] = (a[shift + i] - c * y) % p
        a.pop()
    return _fp_poly_trim(a)


def _find_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree e over F_p, by brute force."""
    def encode(k):
        digits = []
        for _ in range(e):
            digits.append(k % p)
            k //= p
        return tuple(digits) + (1,)

    def divides(d, f):
        # does monic d divide f over F_p?
        r = list(f)
        dd = len(d) - 1
        while len(r) - 1 >= dd and r:
            if r[-1]:
                c = r[-1]
                shift = len(r) - 1 - dd
                for i, y in enumerate(d):
                    r[shift + i] = (r[shift + i] - c * y) % p
            r.pop()
        return not _fp_poly_trim(r)

    for k in range(p ** e):
        f = encode(k)
        ok = True
        for deg in range(1, e // 2 + 1):
            for j in range(p ** deg, 2 * p ** deg if deg > 0 else 0):
                # monic candidates of degree `deg`: digits of j below p**deg
                digits = []
                jj = j - p ** deg
                for _ in range(deg):
                    digits.append(jj % p)
                    jj //= p
                d = tuple(digits) + (1,)
                if divides(d, f):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return f
    raise SchurLatticeError("no irreducible polynomial found")  # pragma: no cover


class GF:
    """The finite field with q elements; elements are ints in [0, q)."""

    def __init__(self, q: int):
        self.q = q
        self.p, self.e = _prime_power(q)
        if self.e > 1:
            self._modulus = _find_irreducible(self.p, self.e)
        else:
            self._modulus = None
        self._tables = None
        self._gen = None

    # -- encoding helpers (non-prime fields store base-p digit vectors) ----
    def _to_poly(self, a: int) -> tuple[int, ...]:
        digits = []
        while a:
            digits.append(a % self.p)
            a //= self.p
        return tuple(digits)

    def _from_poly(self, c) -> int:
        out = 0
        for d in reversed(c):
            out = out * self.p + d
        return out

    # -- field operations ---------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        out = 0
        mult = 1
        while a or b:
            out += ((a + b) % self.p) * mult
            a //= self.p
            b //= self.p
            mult *= self.p
        return out

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return self._from_poly(tuple((-d) % self.p for d in self._to_poly(a)))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        prod = _fp_poly_mul(self._to_poly(a), self._to_poly(b), self.p)
        return self._from_poly(_fp_poly_mod(prod, self._modulus, self.p))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        out, base = 1, a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF")
        return self.pow(a, self.q - 2)

    def generator(self) -> int:
        """A generator of the multiplicative group (1 for q = 2)."""
        if self._gen is None:
            order = self.q - 1
            primes = sorted({f for f in range(2, order + 1)
                             if order % f == 0 and _is_prime(f)})
            g = 1
            for cand in range(1, self.q):
                if all(self.pow(cand, order // f) != 1 for f in primes):
                    g = cand
                    break
            self._gen = g
        return self._gen

    def tables(self):
        """(add, mul, inv) lookup tables as int64 numpy arrays."""
        if self._tables is None:
            import numpy as np

            q = self.q
            add = np.zeros((q, q), dtype=np.int64)
            mul = np.zeros((q, q), dtype=np.int64)
            inv = np.zeros(q, dtype=np.int64)
            for a in range(q):
                for b in range(q):
                    add[a, b] = self.add(a, b)
                    mul[a, b] = self.mul(a, b)
                if a:
                    inv[a] = self.inv(a)
            self._tables = (add, mul, inv)
        return self._tables

    def __eq__(self, other):
        return isinstance(other, GF) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def _gf(q: int) -> GF:
    return GF(q)


# ---------------------------------------------------------------------------
# scalars for the equal-characteristic backend
# ---------------------------------------------------------------------------

def _gf_poly_add(fq, a, b):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] = x
    for i, y in enumerate(b):
        out[i] = fq.add(out[i], y)
    return _fp_poly_trim(out)


def _gf_poly_neg(fq, a):
    return tuple(fq.neg(x) for x in a)


def _gf_poly_mul(fq, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = fq.add(out[i + j], fq.mul(x, y))
    return _fp_poly_trim(out)


def _gf_poly_divmod(fq, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv_lead = fq.inv(b[-1])
    while len(r) >= len(b) and r:
        if r[-1]:
            c = fq.mul(r[-1], inv_lead)
            shift = len(r) - len(b)
            q[shift] = c
            for i, y in enumerate(b):
                r[shift + i] = fq.sub(r[shift + i], fq.mul(c, y))
        r.pop()
    return _fp_poly_trim(q), _fp_poly_trim(r)


def _gf_poly_gcd(fq, a, b):
    while b:
        a, b = b, _gf_poly_divmod(fq, a, b)[1]
    if a:
        inv_lead = fq.inv(a[-1])
        a = tuple(fq.mul(x, inv_lead) for x in a)
    return a


def _gf_series_inv(fq, b, k):
    """Inverse of b (with b(0) != 0) as a power series mod t^k."""
    out = [0] * k
    inv0 = fq.inv(b[0])
    out[0] = inv0
    for i in range(1, k):
        acc = 0
        for j in range(1, min(i, len(b) - 1) + 1):
            acc = fq.add(acc, fq.mul(b[j], out[i - j]))
        out[i] = fq.neg(fq.mul(acc, inv0))
    return _fp_poly_trim(out)


class LaurentRational:
    """Exact element of F_q(t), stored as t^v * num/den.

    ``num`` and ``den`` are coprime polynomials (tuples of GF-encoded
    coefficients, lowest degree first) with nonzero constant terms and a
    monic denominator; ``v`` is the valuation (INF for zero).
    """

    __slots__ = ("fq", "v", "num", "den")

    def __init__(self, fq: GF, v, num, den):
        self.fq = fq
        self.v = v
        self.num = num
        self.den = den

    @classmethod
    def make(cls, fq: GF, v, num, den) -> "LaurentRational":
        """Normalize an arbitrary (v, num, den) triple."""
        num = _fp_poly_trim(list(num))
        den = _fp_poly_trim(list(den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return cls(fq, INF, (), (1,))
        shift = 0
        while num[shift] == 0:
            shift += 1
        v += shift
        num = num[shift:]
        shift = 0
        while den[shift] == 0:
            shift += 1
        v -= shift
        den = den[shift:]
        g = _gf_poly_gcd(fq, num, den)
        if len(g) > 1:
            num = _gf_poly_divmod(fq, num, g)[0]
            den = _gf_poly_divmod(fq, den, g)[0]
        inv_lead = fq.inv(den[-1])
        num = tuple(fq.mul(x, inv_lead) for x in num)
        den = tuple(fq.mul(x, inv_lead) for x in den)
        return cls(fq, v, num, den)

    @classmethod
    def zero(cls, fq: GF) -> "LaurentRational":
        return cls(fq, INF, (), (1,))

    @classmethod
    def const(cls, fq: GF, c: int) -> "LaurentRational":
        if c == 0:
            return cls.zero(fq)
        return cls(fq, 0, (c,), (1,))

    def is_zero(self) -> bool:
        return self.v is INF or self.v == INF

    # -- ring operations ----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentRational):
            return other
        if isinstance(other, int):
            return LaurentRational.const(self.fq, other % self.fq.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        fq = self.fq
        v = min(self.v, other.v)
        a = _gf_poly_mul(fq, self.num, other.den)
        a = (0,) * int(self.v - v) + a
        b = _gf_poly_mul(fq, other.num, self.den)
        b = (0,) * int(other.v - v) + b
        return LaurentRational.make(fq, v, _gf_poly_add(fq, a, b),
                                    _gf_poly_mul(fq, self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return LaurentRational(self.fq, self.v,
                               _gf_poly_neg(self.fq, self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return LaurentRational.zero(self.fq)
        return LaurentRational.make(self.fq, self.v + other.v,
                                    _gf_poly_mul(self.fq, self.num, other.num),
                                    _gf_poly_mul(self.fq, self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        if self.is_zero():
            return self
        return LaurentRational.make(self.fq, self.v - other.v,
                                    _gf_poly_mul(self.fq, self.num, other.den),
                                    _gf_poly_mul(self.fq, self.den, other.num))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if k < 0:
            return LaurentRational.const(self.fq, 1) / self ** (-k)
        out = LaurentRational.const(self.fq, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, LaurentRational):
            return NotImplemented
        return (self.v == other.v and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        return hash((self.v, self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"LaurentRational({laurent_to_str(self)!r})"


def _poly_to_str(coeffs) -> str:
    if not coeffs:
        return "0"
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        elif i == 1:
            parts.append("t" if c == 1 else f"{c}*t")
        else:
            parts.append(f"t^{i}" if c == 1 else f"{c}*t^{i}")
    return " + ".join(parts)


def laurent_to_str(x: LaurentRational) -> str:
    if x.is_zero():
        return "0"
    v = int(x.v)
    num = ((0,) * max(v, 0)) + x.num
    den = ((0,) * max(-v, 0)) + x.den
    ns, ds = _poly_to_str(num), _poly_to_str(den)
    return ns if ds == "1" else f"({ns})/({ds})"


_TERM_RE = re.compile(
    r"^\s*(?P<coef>\d+)?\s*\*?\s*(?P<t>t(\^(?P<exp>-?\d+))?)?\s*$")


def _parse_poly(fq: GF, text: str):
    """Parse a Laurent polynomial; returns (valuation shift, coefficients)."""
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    # a minus sign starts a negated term unless it is an exponent sign
    text = re.sub(r"(?<!\^)-", "+-", text)
    coeffs: dict[int, int] = {}
    for raw in text.split("+"):
        raw = raw.strip()
        if not raw:
            continue
        negate = raw.startswith("-")
        if negate:
            raw = raw[1:]
        m = _TERM_RE.match(raw)
        if not m or (m.group("coef") is None and m.group("t") is None):
            raise ValueError(f"cannot parse polynomial term {raw!r}")
        coef = int(m.group("coef")) if m.group("coef") else 1
        coef %= fq.q
        if negate:
            coef = fq.neg(coef)
        exp = 0
        if m.group("t"):
            exp = int(m.group("exp")) if m.group("exp") else 1
        coeffs[exp] = fq.add(coeffs.get(exp, 0), coef)
    live = [e for e, c in coeffs.items() if c != 0]
    if not live:
        return 0, ()
    lo, hi = min(live), max(live)
    return lo, _fp_poly_trim([coeffs.get(i, 0) for i in range(lo, hi + 1)])


def laurent_parse(fq: GF, text: str) -> LaurentRational:
    """Parse 'num/den' with polynomial parts like '1 + t + 2*t^2'."""
    text = text.strip()
    depth = 0
    split_at = None
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            split_at = i
            break
    if split_at is None:
        num_text, den_text = text, "1"
    else:
        num_text, den_text = text[:split_at], text[split_at + 1:]
    num_text = num_text.strip()
    den_text = den_text.strip()
    if num_text.startswith("(") and num_text.endswith(")"):
        num_text = num_text[1:-1]
    if den_text.startswith("(") and den_text.endswith(")"):
        den_text = den_text[1:-1]
    v_num, num = _parse_poly(fq, num_text)
    v_den, den = _parse_poly(fq, den_text)
    if not den:
        raise ZeroDivisionError("zero denominator")
    return LaurentRational.make(fq, v_num - v_den, num, den)


# ---------------------------------------------------------------------------
# field specifications
# ---------------------------------------------------------------------------

class FieldSpec:
    """Common interface of the two concrete discretely valued fields.

    Attributes: ``residue_char`` (p), ``field_char`` (0 or p),
    ``residue_size`` (size of the residue field), ``residue_field``
    (:class:`GF` instance).
    """

    residue_char: int
    field_char: int
    residue_size: int
    residue_field: GF

    # subclasses implement: zero, one, uniformizer, from_int, val, reduce,
    # lift, mod_uniformizer_power, to_str, parse, describe

    def is_zero(self, x) -> bool:
        return self.val(x) == INF

    def from_residue_matrix(self, rows):
        """Lift a matrix of residue ints entrywise."""
        return tuple(tuple(self.lift(c) for c in row) for row in rows)


class RationalAtP(FieldSpec):
    """Q with the p-adic valuation; scalars are Fractions."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise SchurLatticeError(f"p must be prime, got {p}")
        self.p = p
        self.residue_char = p
        self.field_char = 0
        self.residue_size = p
        self.residue_field = _gf(p)

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def uniformizer(self):
        return Fraction(self.p)

    def from_int(self, k: int):
        return Fraction(k)

    def val(self, x):
        if x == 0:
            return INF
        num, den = x.numerator, x.denominator
        v = 0
        while num % self.p == 0:
            num //= self.p
            v += 1
        while den % self.p == 0:
            den //= self.p
            v -= 1
        return v

    def reduce(self, x) -> int:
        if x == 0:
            return 0
        if self.val(x) < 0:
            raise NegativeValuation(f"cannot reduce {x} mod {self.p}")
        return (x.numerator * pow(x.denominator, -1, self.p)) % self.p

    def lift(self, r: int):
        return Fraction(r % self.p)

    def mod_uniformizer_power(self, x, k: int):
        """Canonical representative of x modulo p^k R (an integer in [0, p^k))."""
        if x == 0:
            return Fraction(0)
        if self.val(x) >= k:
            return Fraction(0)
        if self.val(x) < 0:
            raise NegativeValuation(f"{x} is not integral")
        pk = self.p ** k
        return Fraction((x.numerator * pow(x.denominator, -1, pk)) % pk)

    def to_str(self, x) -> str:
        return str(x)

    def parse(self, text: str):
        return Fraction(text.strip())

    def describe(self) -> dict:
        return {"backend": "p-adic", "p": self.p}

    def __eq__(self, other):
        return isinstance(other, RationalAtP) and other.p == self.p

    def __hash__(self):
        return hash(("RationalAtP", self.p))

    def __repr__(self):
        return f"RationalAtP({self.p})"


class RationalFunctionOverFq(FieldSpec):
    """F_q(t) with the order-of-vanishing valuation at t = 0."""

    def __init__(self, q: int):
        self.q = q
        self.residue_field = _gf(q)
        self.residue_char = self.residue_field.p
        self.field_char = self.residue_field.p
        self.residue_size = q

    def zero(self):
        return LaurentRational.zero(self.residue_field)

    def one(self):
        return LaurentRational.const(self.residue_field, 1)

    def uniformizer(self):
        return LaurentRational(self.residue_field, 1, (1,), (1,))

    def from_int(self, k: int):
        # integers embed through the prime subfield F_p
        return LaurentRational.const(self.residue_field, k % self.residue_char)

    def val(self, x: LaurentRational):
        return x.v

    def reduce(self, x: LaurentRational) -> int:
        if x.is_zero():
            return 0
        if x.v < 0:
            raise NegativeValuation(f"cannot reduce {laurent_to_str(x)}")
        if x.v > 0:
            return 0
        fq = self.residue_field
        return fq.mul(x.num[0], fq.inv(x.den[0]))

    def lift(self, r: int):
        return LaurentRational.const(self.residue_field, r % self.q)

    def mod_uniformizer_power(self, x: LaurentRational, k: int):
        """Canonical representative mod t^k R: the series truncation."""
        if x.is_zero() or x.v >= k:
            return LaurentRational.zero(self.residue_field)
        if x.v < 0:
            raise NegativeValuation(f"{laurent_to_str(x)} is not integral")
        fq = self.residue_field
        order = k - int(x.v)
        inv_den = _gf_series_inv(fq, self.__pad(x.den, order), order)
        series = _gf_poly_mul(fq, x.num, inv_den)[:order]
        return LaurentRational.make(fq, x.v, series, (1,))

    @staticmethod
    def __pad(poly, order):
        return poly if len(poly) >= order else poly + (0,) * (order - len(poly))

    def to_str(self, x) -> str:
        return laurent_to_str(x)

    def parse(self, text: str):
        return laurent_parse(self.residue_field, text)

    def describe(self) -> dict:
        return {"backend": "laurent", "q": self.q}

    def __eq__(self, other):
        return isinstance(other, RationalFunctionOverFq) and other.q == self.q

    def __hash__(self):
        return hash(("RationalFunctionOverFq", self.q))

    def __repr__(self):
        return f"RationalFunctionOverFq({self.q})"


def field_from_descriptor(desc: dict) -> FieldSpec:
    """Inverse of FieldSpec.describe()."""
    backend = desc.get("backend")
    if backend == "p-adic":
        return RationalAtP(int(desc["p"]))
    if backend == "laurent":
        return RationalFunctionOverFq(int(desc["q"]))
    raise SchurLatticeError(f"unknown field backend {backend!r}")


# ---------------------------------------------------------------------------
# unit sample sets
# ---------------------------------------------------------------------------

def _primitive_root_mod_p2(p: int) -> int:
    """Smallest integer that generates the units of Z/p^2 (p odd)."""
    order = p * (p - 1)
    primes = sorted({f for f in range(2, order + 1)
                     if order % f == 0 and _is_prime(f)})
    for g in range(2, p * p):
        if g % p == 0:
            continue
        if all(pow(g, order // f, p * p) != 1 for f in primes):
            return g
    raise SchurLatticeError("no primitive root found")  # pragma: no cover


def unit_sample_set(spec: FieldSpec, level: int = 1):
    """Finite unit set whose generated subgroup is residue-dense to `level`.

    For the p-adic backend with p odd this is {g, -1} with g the smallest
    primitive root mod p^2 (so <g> is dense in the units); for p = 2 it is
    {-1, 3}.  For the equal-characteristic backend it is {c} together with
    {1 + c*t^j : 1 <= j <= level} where c generates the multiplicative
    group of F_q (c = 1 when q = 2).
    """
    if level < 1:
        raise SchurLatticeError(f"level must be >= 1, got {level}")
    if isinstance(spec, RationalAtP):
        if spec.p == 2:
            return [Fraction(-1), Fraction(3)]
        return [Fraction(_primitive_root_mod_p2(spec.p)), Fraction(-1)]
    fq = spec.residue_field
    c = fq.generator()
    out = [LaurentRational.const(fq, c)]
    for j in range(1, level + 1):
        out.append(LaurentRational.make(fq, 0, (1,) + (0,) * (j - 1) + (c,), (1,)))
    return out
