"""Exact arithmetic in a complete discrete valuation ring at fixed precision.

A nonzero element of the ring V (or of its fraction field K) is stored as
``pi^v * u`` where ``v`` is the valuation and ``u`` is a unit residue kept
modulo ``pi^N`` for a single global absolute precision ``N``.  Two backends
share this element model:

* ``padic``  -- V = Z_p, uniformiser pi = p, residue field F_p;
* ``eqchar`` -- V = F_q[[t]], uniformiser pi = t, residue field F_q.

Norms are never materialised as floating-point numbers: |x| = eps^v with
eps = |pi| < 1 symbolic, so every norm comparison in this package is a
comparison of valuation exponents (eps^a <= eps^b iff a >= b).

Precision semantics: representatives are manipulated exactly modulo pi^N.
A coarse ``lossy`` flag (deliberately not per-digit tracking) is set when
an operation produces digits that are no longer determined by the inputs'
stored digits -- cancellation in a sum, or a residue that is
indistinguishable from zero at precision N.  Equality compares stored
representatives; the flag is advisory metadata.
"""

from __future__ import annotations

INFINITY = float("inf")


class PrecisionExhausted(ArithmeticError):
    """A computation needed digits beyond the ring's absolute precision."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _factor_prime_power(q: int) -> tuple[int, int]:
    """Return (p, m) with q = p^m, p prime, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            m = 0
            r = q
            while r % p == 0:
                r //= p
                m += 1
            if r != 1 or not _is_prime(p):
                raise ValueError(f"{q} is not a prime power")
            return p, m
    raise ValueError(f"{q} is not a prime power")


class FiniteField:
    """Arithmetic in GF(q), q = p^m, elements encoded as integers in [0, q).

    The encoding is base p on the coefficient vector with respect to the
    power basis of F_p[x]/(modulus).  For m = 1 the modulus is unused and
    operations reduce to integers mod p.
    """

    def __init__(self, q: int):
        p, m = _factor_prime_power(q)
        self.q = q
        self.p = p
        self.degree = m
        self.modulus = self._find_irreducible(p, m) if m > 1 else None

    # -- F_p[x] helpers on coefficient tuples (low degree first) --

    @staticmethod
    def _poly_trim(f: tuple[int, ...]) -> tuple[int, ...]:
        i = len(f)
        while i > 0 and f[i - 1] == 0:
            i -= 1
        return f[:i]

    @classmethod
    def _poly_mulmod(cls, f, g, mod, p):
        out = [0] * (len(f) + len(g) - 1) if f and g else []
        for i, a in enumerate(f):
            if a:
                for j, b in enumerate(g):
                    out[i + j] = (out[i + j] + a * b) % p
        return cls._poly_rem(tuple(out), mod, p)

    @classmethod
    def _poly_rem(cls, f, mod, p):
        f = list(f)
        dm = len(mod) - 1
        lead_inv = pow(mod[-1], -1, p)
        while len(cls._poly_trim(tuple(f))) - 1 >= dm:
            f = list(cls._poly_trim(tuple(f)))
            d = len(f) - 1
            c = (f[-1] * lead_inv) % p
            for i in range(dm + 1):
                f[d - dm + i] = (f[d - dm + i] - c * mod[i]) % p
        return cls._poly_trim(tuple(f))

    @classmethod
    def _poly_gcd(cls, f, g, p):
        f, g = cls._poly_trim(tuple(f)), cls._poly_trim(tuple(g))
        while g:
            f, g = g, cls._poly_rem(f, g, p)
        return f

    @classmethod
    def _poly_powmod_x(cls, e: int, mod, p):
        """x^e mod (mod) by square and multiply."""
        result = (1,)
        base = (0, 1)
        base = cls._poly_rem(base, mod, p)
        while e > 0:
            if e & 1:
                result = cls._poly_mulmod(result, base, mod, p)
            base = cls._poly_mulmod(base, base, mod, p)
            e >>= 1
        return result

    @classmethod
    def _sub_x(cls, f, p):
        """f(x) - x as a trimmed coefficient tuple."""
        out = list(f) + [0] * (2 - len(f))
        out[1] = (out[1] - 1) % p
        return cls._poly_trim(tuple(out))

    @classmethod
    def _is_irreducible(cls, mod, p: int, m: int) -> bool:
        # x^(p^m) == x mod f, and gcd(x^(p^(m/r)) - x, f) = 1 for primes r | m
        xq = cls._poly_powmod_x(p**m, mod, p)
        if cls._sub_x(xq, p) != ():
            return False
        for r in range(2, m + 1):
            if m % r == 0 and _is_prime(r):
                xr = cls._poly_powmod_x(p ** (m // r), mod, p)
                diff = cls._sub_x(xr, p)
                if diff == ():
                    return False
                g = cls._poly_gcd(mod, diff, p)
                if len(g) != 1:
                    return False
        return True

    @classmethod
    def _find_irreducible(cls, p: int, m: int) -> tuple[int, ...]:
        # deterministic: scan monic polynomials x^m + c_{m-1}x^{m-1} + ... + c_0
        for code in range(p**m):
            coeffs = []
            c = code
            for _ in range(m):
                coeffs.append(c % p)
                c //= p
            mod = tuple(coeffs) + (1,)
            if cls._is_irreducible(mod, p, m):
                return mod
        raise RuntimeError(f"no irreducible polynomial of degree {m} over F_{p}")

    # -- element ops on integer-encoded elements --

    def _decode(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.degree):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def _encode(self, f) -> int:
        out = 0
        for c in reversed(list(f[: self.degree]) + [0] * (self.degree - len(f))):
            out = out * self.p + c
        return out

    def add(self, a: int, b: int) -> int:
        if self.degree == 1:
            return (a + b) % self.p
        return self._encode([(x + y) % self.p
                             for x, y in zip(self._decode(a), self._decode(b))])

    def neg(self, a: int) -> int:
        if self.degree == 1:
            return (-a) % self.p
        return self._encode([(-x) % self.p for x in self._decode(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.degree == 1:
            return (a * b) % self.p
        prod = self._poly_mulmod(self._decode(a), self._decode(b),
                                 self.modulus, self.p)
        return self._encode(list(prod))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in finite field")
        if self.degree == 1:
            return pow(a, -1, self.p)
        out = 1
        e = self.q - 2
        base = a
        while e > 0:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def from_int(self, n: int) -> int:
        return n % self.p


class _PadicOps:
    """Unit-residue arithmetic for V = Z_p: residues are ints in [0, p^N)."""

    def __init__(self, p: int, precision: int):
        self.p = p
        self.precision = precision
        self.modulus = p**precision

    def zero(self):
        return 0

    def one(self):
        return 1

    def is_zero(self, r) -> bool:
        return r == 0

    def val(self, r: int) -> int:
        """Valuation of a residue, capped at the precision."""
        if r == 0:
            return self.precision
        v = 0
        while r % self.p == 0:
            r //= self.p
            v += 1
        return v

    def add(self, a, b):
        return (a + b) % self.modulus

    def neg(self, a):
        return (-a) % self.modulus

    def mul(self, a, b):
        return (a * b) % self.modulus

    def inv(self, a):
        return pow(a, -1, self.modulus)

    def pow(self, a, e: int):
        return pow(a, e, self.modulus)

    def shift_up(self, a, d: int):
        return (a * self.p**d) % self.modulus if d < self.precision else 0

    def shift_down(self, a, w: int):
        return a // self.p**w

    def mod_pi_power(self, a, e: int):
        return a % self.p**e

    def is_unit(self, a) -> bool:
        return a % self.p != 0

    def from_int(self, n: int):
        return n % self.modulus

    def encode(self, a) -> int:
        return a

    def decode(self, n: int):
        return n % self.modulus


class _EqcharOps:
    """Unit-residue arithmetic for V = F_q[[t]]: residues are length-N tuples
    of integer-encoded GF(q) elements, low degree first."""

    def __init__(self, q: int, precision: int):
        self.field = FiniteField(q)
        self.q = q
        self.precision = precision

    def zero(self):
        return (0,) * self.precision

    def one(self):
        return (1,) + (0,) * (self.precision - 1)

    def is_zero(self, r) -> bool:
        return all(c == 0 for c in r)

    def val(self, r) -> int:
        for i, c in enumerate(r):
            if c != 0:
                return i
        return self.precision

    def add(self, a, b):
        return tuple(self.field.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.field.neg(x) for x in a)

    def mul(self, a, b):
        n = self.precision
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                for j in range(n - i):
                    if b[j]:
                        out[i + j] = self.field.add(out[i + j],
                                                    self.field.mul(x, b[j]))
        return tuple(out)

    def inv(self, a):
        if a[0] == 0:
            raise ZeroDivisionError("inverse of a non-unit power series")
        n = self.precision
        c0 = self.field.inv(a[0])
        out = [c0] + [0] * (n - 1)
        for k in range(1, n):
            acc = 0
            for i in range(1, k + 1):
                acc = self.field.add(acc, self.field.mul(a[i], out[k - i]))
            out[k] = self.field.neg(self.field.mul(c0, acc))
        return tuple(out)

    def pow(self, a, e: int):
        out = self.one()
        base = a
        while e > 0:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def shift_up(self, a, d: int):
        if d >= self.precision:
            return self.zero()
        return (0,) * d + a[: self.precision - d]

    def shift_down(self, a, w: int):
        return a[w:] + (0,) * w

    def mod_pi_power(self, a, e: int):
        return a[:e] + (0,) * (self.precision - e)

    def is_unit(self, a) -> bool:
        return a[0] != 0

    def from_int(self, n: int):
        return (self.field.from_int(n),) + (0,) * (self.precision - 1)

    def encode(self, a) -> int:
        out = 0
        for c in reversed(a):
            out = out * self.q + c
        return out

    def decode(self, n: int):
        out = []
        for _ in range(self.precision):
            out.append(n % self.q)
            n //= self.q
        return tuple(out)


class RingDescriptor:
    """A complete discrete valuation ring fixed by backend, base and precision.

    ``backend`` is "padic" (base = prime p) or "eqchar" (base = prime power q).
    ``precision`` is the pi-adic absolute precision N >= 1.
    """

    def __init__(self, backend: str, base: int, precision: int):
        if precision < 1:
            raise ValueError("precision must be >= 1")
        if backend == "padic":
            if not _is_prime(base):
                raise ValueError(f"p = {base} is not prime")
            self.ops = _PadicOps(base, precision)
        elif backend == "eqchar":
            _factor_prime_power(base)
            self.ops = _EqcharOps(base, precision)
        else:
            raise ValueError(f"unknown backend {backend!r}")
        self.backend = backend
        self.base = base
        self.precision = precision

    def __eq__(self, other):
        return (isinstance(other, RingDescriptor)
                and self.backend == other.backend
                and self.base == other.base
                and self.precision == other.precision)

    def __hash__(self):
        return hash((self.backend, self.base, self.precision))

    def __repr__(self):
        sym = "p" if self.backend == "padic" else "q"
        return (f"RingDescriptor({self.backend}, {sym}={self.base}, "
                f"N={self.precision})")

    @property
    def uniformiser_symbol(self) -> str:
        return "p" if self.backend == "padic" else "t"

    def zero(self) -> "ScalarElem":
        return ScalarElem(self, INFINITY, None)

    def one(self) -> "ScalarElem":
        return ScalarElem(self, 0, self.ops.one())

    def pi(self, exponent: int = 1) -> "ScalarElem":
        return ScalarElem(self, exponent, self.ops.one())

    def scalar(self, n: int) -> "ScalarElem":
        """Embed an integer.  Exact: valuation computed on the integer itself."""
        if n == 0:
            return self.zero()
        if self.backend == "padic":
            v = 0
            m = abs(n)
            while m % self.base == 0:
                m //= self.base
                v += 1
            unit = self.ops.from_int(n // self.base**v if n > 0
                                     else -((-n) // self.base**v))
            return ScalarElem(self, v, unit)
        r = self.ops.from_int(n)
        if self.ops.is_zero(r):
            return self.zero()
        return ScalarElem(self, 0, r)

    def from_valuation_unit(self, v, unit_encoded: int) -> "ScalarElem":
        """Build pi^v * u from an integer-encoded unit residue."""
        if v == INFINITY:
            return self.zero()
        u = self.ops.decode(unit_encoded)
        if not self.ops.is_unit(u):
            raise ValueError("encoded residue is not a unit")
        return ScalarElem(self, v, u)

    def _from_residue(self, r, extra_val: int = 0, lossy: bool = False):
        """Canonicalise a raw residue of V/pi^N into pi^(extra_val+w) * unit."""
        w = self.ops.val(r)
        if w >= self.precision:
            return ScalarElem(self, INFINITY, None, lossy=lossy)
        return ScalarElem(self, extra_val + w, self.ops.shift_down(r, w),
                          lossy=lossy)


class ScalarElem:
    """An element pi^v * u of V or K at absolute precision N.

    Zero is canonical: valuation +inf, no unit part.  Elements of K are
    exactly those with negative valuation.  All operations are referentially
    transparent; instances are immutable and safe to share.
    """

    __slots__ = ("ring", "v", "u", "lossy")

    def __init__(self, ring: RingDescriptor, v, u, lossy: bool = False):
        self.ring = ring
        self.v = v
        self.u = u
        self.lossy = lossy

    # -- queries --

    @property
    def valuation(self):
        """nu(x): the largest n with x in pi^n V, +inf for zero."""
        return self.v

    @property
    def is_zero(self) -> bool:
        return self.v == INFINITY

    @property
    def effectively_zero(self) -> bool:
        """True when the element is indistinguishable from 0 at absolute
        precision N, i.e. nu(x) >= N.  Such elements compare equal to zero
        and linear algebra treats them as zero with a validity flag."""
        return self.v == INFINITY or self.v >= self.ring.precision

    @property
    def is_unit(self) -> bool:
        return self.v == 0

    def unit_encoded(self) -> int:
        return 0 if self.is_zero else self.ring.ops.encode(self.u)

    # -- arithmetic --

    def _check(self, other: "ScalarElem"):
        if self.ring != other.ring:
            raise ValueError("ring descriptor mismatch")

    def __add__(self, other: "ScalarElem") -> "ScalarElem":
        self._check(other)
        if self.is_zero:
            return ScalarElem(other.ring, other.v, other.u,
                              other.lossy or self.lossy)
        if other.is_zero:
            return ScalarElem(self.ring, self.v, self.u,
                              self.lossy or other.lossy)
        ops = self.ring.ops
        v = min(self.v, other.v)
        a = ops.shift_up(self.u, self.v - v)
        b = ops.shift_up(other.u, other.v - v)
        s = ops.add(a, b)
        w = ops.val(s)
        carried = self.lossy or other.lossy
        if w >= self.ring.precision:
            return ScalarElem(self.ring, INFINITY, None, lossy=True)
        return ScalarElem(self.ring, v + w, ops.shift_down(s, w),
                          lossy=carried or (w > 0))

    def __neg__(self) -> "ScalarElem":
        if self.is_zero:
            return self
        return ScalarElem(self.ring, self.v, self.ring.ops.neg(self.u),
                          self.lossy)

    def __sub__(self, other: "ScalarElem") -> "ScalarElem":
        return self + (-other)

    def __mul__(self, other: "ScalarElem") -> "ScalarElem":
        self._check(other)
        if self.is_zero or other.is_zero:
            return ScalarElem(self.ring, INFINITY, None,
                              self.lossy or other.lossy)
        return ScalarElem(self.ring, self.v + other.v,
                          self.ring.ops.mul(self.u, other.u),
                          self.lossy or other.lossy)

    def __truediv__(self, other: "ScalarElem") -> "ScalarElem":
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("division by zero")
        if self.is_zero:
            return ScalarElem(self.ring, INFINITY, None, self.lossy)
        return ScalarElem(self.ring, self.v - other.v,
                          self.ring.ops.mul(self.u, self.ring.ops.inv(other.u)),
                          self.lossy or other.lossy)

    def __pow__(self, e: int) -> "ScalarElem":
        if e == 0:
            return self.ring.one()
        if self.is_zero:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return self
        if e < 0:
            inv = ScalarElem(self.ring, -self.v,
                             self.ring.ops.inv(self.u), self.lossy)
            return inv ** (-e)
        return ScalarElem(self.ring, self.v * e,
                          self.ring.ops.pow(self.u, e), self.lossy)

    def scaled_by_pi(self, e: int) -> "ScalarElem":
        """Multiply by pi^e (exact valuation shift, unit part untouched)."""
        if self.is_zero:
            return self
        return ScalarElem(self.ring, self.v + e, self.u, self.lossy)

    def split_at_pi_power(self, e: int):
        """Write x = pi^e * quotient + remainder with remainder canonical
        modulo pi^e.  Requires nu(x) >= 0."""
        if self.is_zero:
            return self, self
        if self.v < 0:
            raise ValueError("split_at_pi_power needs an element of V")
        ops = self.ring.ops
        full = ops.shift_up(self.u, self.v)
        rem = ops.mod_pi_power(full, e)
        quo = ops.shift_down(full, e)
        return (self.ring._from_residue(quo, lossy=self.lossy),
                self.ring._from_residue(rem, lossy=self.lossy))

    # -- comparison and display --

    def _comparable_unit(self):
        """Unit digits inside the absolute window pi^N.

        An element pi^v * u with v >= 0 is determined modulo pi^N by its
        valuation and the bottom N - v unit digits; digits above the window
        depend on the order in which a value was computed and are excluded
        from equality.
        """
        if self.is_zero:
            return None
        window = self.ring.precision - max(self.v, 0)
        if window <= 0:
            return ()
        return self.ring.ops.mod_pi_power(self.u, window)

    def __eq__(self, other):
        if not isinstance(other, ScalarElem):
            return NotImplemented
        if self.ring != other.ring:
            return False
        if self.effectively_zero or other.effectively_zero:
            return self.effectively_zero and other.effectively_zero
        return (self.v == other.v
                and self._comparable_unit() == other._comparable_unit())

    def __hash__(self):
        if self.effectively_zero:
            return hash((self.ring, INFINITY))
        u = self._comparable_unit()
        return hash((self.ring, self.v, self.ring.ops.encode(u)))

    def __repr__(self):
        if self.is_zero:
            return "0"
        sym = "pi"
        if self.v == 0:
            return f"[{self.unit_encoded()}]"
        return f"{sym}^{self.v}*[{self.unit_encoded()}]"


def val(x: ScalarElem):
    """Valuation nu(x) = sup{n : x in pi^n V}; +inf exactly for zero."""
    return x.valuation


_ARITH = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "neg": lambda x, _: -x,
}


def arith(op: str, x: ScalarElem, y: ScalarElem | None = None,
          exponent: int | None = None) -> ScalarElem:
    """Named ring operation dispatcher (used by the CLI surface)."""
    if op == "pow":
        if exponent is None:
            raise ValueError("pow needs an exponent")
        return x**exponent
    if op == "neg":
        return -x
    if op not in _ARITH:
        raise ValueError(f"unknown operation {op!r}")
    if y is None:
        raise ValueError(f"{op} needs two operands")
    return _ARITH[op](x, y)


def div(x: ScalarElem, y: ScalarElem) -> ScalarElem:
    """Division in the fraction field K; nu(x/y) = nu(x) - nu(y)."""
    return x / y
