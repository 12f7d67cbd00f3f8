"""Truncated twisted monoid series with overconvergence certificates.

A series is a finitely supported coefficient map on a finitely generated
monoid, truncated at a degree cap D and at the ring precision N.  A growth
certificate (c, k) asserts nu(x_s) + 1 + k >= c * l(s) for every stored
term; c is an exact rational and k an integer offset.  Products combine
certificates as (min(c1, c2), k1 + k2 + 1), which is sound because
nu(x_s y_t) + 1 >= c * l(s t) - 1 - k1 - k2 termwise and the ultrametric
inequality preserves the bound under coefficient summation.

Everything is scoped to the truncation (D, N): products drop terms above
the cap and set a truncation flag instead of failing.
"""

from __future__ import annotations

from fractions import Fraction

from .monoid import Cocycle, MonoidDescriptor, MonoidElem, TrivialCocycle, compose
from .ring import RingDescriptor, ScalarElem


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


class GrowthCertificate:
    """Asserts nu(x_s) + 1 + k >= c * l(s) on all stored terms."""

    __slots__ = ("c", "k")

    def __init__(self, c, k: int):
        c = Fraction(c)
        if c <= 0:
            raise ValueError("growth constant c must be positive")
        if k < 0:
            raise ValueError("offset k must be nonnegative")
        self.c = c
        self.k = int(k)

    def __eq__(self, other):
        return (isinstance(other, GrowthCertificate)
                and (self.c, self.k) == (other.c, other.k))

    def __repr__(self):
        return f"GrowthCertificate(c={self.c}, k={self.k})"

    def admits(self, length: int, valuation) -> bool:
        return valuation + 1 + self.k >= self.c * length


class DaggerSeries:
    """Finitely supported map MonoidElem -> ScalarElem at truncation (D, N)."""

    __slots__ = ("ring", "monoid", "terms", "degree_cap", "certificate",
                 "truncated")

    def __init__(self, ring: RingDescriptor, monoid: MonoidDescriptor,
                 terms, degree_cap: int,
                 certificate: GrowthCertificate | None = None,
                 truncated: bool = False):
        if degree_cap < 0:
            raise ValueError("degree cap must be nonnegative")
        clean = {}
        for s, x in terms.items():
            if x.is_zero:
                continue
            if s.descriptor != monoid:
                raise ValueError("term index from the wrong monoid")
            if x.ring != ring:
                raise ValueError("coefficient from the wrong ring")
            if s.length > degree_cap:
                raise ValueError(
                    f"term of length {s.length} above the degree cap "
                    f"{degree_cap}")
            clean[s] = x
        self.ring = ring
        self.monoid = monoid
        self.terms = clean
        self.degree_cap = degree_cap
        self.truncated = truncated
        if certificate is not None:
            bad = [s for s, x in clean.items()
                   if not certificate.admits(s.length, x.valuation)]
            if bad:
                raise ValueError(
                    f"certificate {certificate!r} fails on stored terms "
                    f"{bad}")
        self.certificate = certificate

    # -- constructors --

    @classmethod
    def zero(cls, ring, monoid, degree_cap,
             certificate: GrowthCertificate | None = None) -> "DaggerSeries":
        return cls(ring, monoid, {}, degree_cap, certificate)

    @classmethod
    def delta(cls, ring, monoid, s: MonoidElem, degree_cap,
              coefficient: ScalarElem | None = None) -> "DaggerSeries":
        """The basis series delta_s, optionally scaled."""
        x = ring.one() if coefficient is None else coefficient
        return cls(ring, monoid, {s: x}, degree_cap)

    @classmethod
    def unit(cls, ring, monoid, degree_cap) -> "DaggerSeries":
        return cls.delta(ring, monoid, monoid.identity(), degree_cap)

    # -- queries --

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, s: MonoidElem) -> ScalarElem:
        return self.terms.get(s, self.ring.zero())

    def support(self):
        return sorted(self.terms, key=lambda s: (s.length, s.data))

    def max_length(self) -> int:
        return max((s.length for s in self.terms), default=0)

    def __eq__(self, other):
        """Coefficientwise equality at the truncation; certificates and
        flags are metadata and do not participate."""
        if not isinstance(other, DaggerSeries):
            return NotImplemented
        if (self.ring, self.monoid, self.degree_cap) != \
                (other.ring, other.monoid, other.degree_cap):
            return False
        keys = set(self.terms) | set(other.terms)
        return all(self.coefficient(s) == other.coefficient(s) for s in keys)

    def __repr__(self):
        if self.is_zero:
            return "DaggerSeries(0)"
        parts = [f"{x!r}*d{s.data!r}" for s, x in
                 sorted(self.terms.items(), key=lambda kv: (kv[0].length,
                                                            str(kv[0].data)))]
        return "DaggerSeries(" + " + ".join(parts) + ")"

    def _compat(self, other: "DaggerSeries"):
        if self.ring != other.ring or self.monoid != other.monoid:
            raise ValueError("series descriptor mismatch")
        if self.degree_cap != other.degree_cap:
            raise ValueError("degree cap mismatch")


def mul(a: DaggerSeries, b: DaggerSeries,
        cocycle: Cocycle | None = None) -> DaggerSeries:
    """Twisted convolution: coefficient of u is the sum over s t = u of
    x_s y_t c(s, t), truncated to lengths <= D with a flag on drops."""
    a._compat(b)
    if cocycle is None:
        cocycle = TrivialCocycle(a.ring)
    out: dict[MonoidElem, ScalarElem] = {}
    dropped = False
    for s, x in a.terms.items():
        for t, y in b.terms.items():
            u = compose(s, t)
            if u.length > a.degree_cap:
                dropped = True
                continue
            term = x * y * cocycle.value(s, t)
            acc = out.get(u)
            out[u] = term if acc is None else acc + term
    cert = None
    if a.certificate is not None and b.certificate is not None:
        cert = GrowthCertificate(min(a.certificate.c, b.certificate.c),
                                 a.certificate.k + b.certificate.k + 1)
    return DaggerSeries(a.ring, a.monoid, out, a.degree_cap, cert,
                        truncated=dropped or a.truncated or b.truncated)


def add_scale(a: DaggerSeries, b: DaggerSeries,
              s: ScalarElem) -> DaggerSeries:
    """a + s*b with zero pruning; certificates combine componentwise
    (min c, worst offset adjusted by nu(s))."""
    a._compat(b)
    if s.ring != a.ring:
        raise ValueError("scalar from the wrong ring")
    out = dict(a.terms)
    if not s.is_zero:
        for t, y in b.terms.items():
            term = s * y
            acc = out.get(t)
            out[t] = term if acc is None else acc + term
    cert = _sum_certificate(a, b, s)
    return DaggerSeries(a.ring, a.monoid, out, a.degree_cap, cert,
                        truncated=a.truncated or b.truncated)


def _sum_certificate(a, b, s):
    if s.is_zero or b.is_zero:
        return a.certificate
    if b.certificate is None:
        return None
    shifted = GrowthCertificate(b.certificate.c,
                                max(0, b.certificate.k - s.valuation))
    if a.is_zero:
        return shifted
    if a.certificate is None:
        return None
    return GrowthCertificate(min(a.certificate.c, shifted.c),
                             max(a.certificate.k, shifted.k))


def certify(a: DaggerSeries, c) -> tuple[bool, int]:
    """Minimal offset k with nu(x_s) + 1 + k >= c * l(s) over all stored
    terms, and whether the paper-style condition (k = 0) holds.  Scoped to
    the truncation (D, N)."""
    c = Fraction(c)
    if c <= 0:
        raise ValueError("growth constant c must be positive")
    worst = Fraction(0)
    for s, x in a.terms.items():
        gap = c * s.length - 1 - x.valuation
        if gap > worst:
            worst = gap
    k = max(0, _ceil_fraction(worst))
    return k == 0, k


class CertificateEnvelope:
    """Exact lower convex envelope of the points (l(s), nu(x_s) + 1).

    The minimal certificate offset for any growth constant c is read off
    the envelope vertices: k(c) = max(0, ceil(max_i c*L_i - m_i)).  Used as
    the brute-force oracle for certificate soundness.
    """

    def __init__(self, vertices):
        self.vertices = list(vertices)

    def minimal_offset(self, c) -> int:
        c = Fraction(c)
        if c <= 0:
            raise ValueError("growth constant c must be positive")
        worst = max((c * L - m for L, m in self.vertices),
                    default=Fraction(0))
        return max(0, _ceil_fraction(worst))

    def admits(self, cert: GrowthCertificate) -> bool:
        return cert.k >= self.minimal_offset(cert.c)


def best_certificate(a: DaggerSeries) -> CertificateEnvelope:
    """Lower convex hull of the constraint points of a nonzero series."""
    if a.is_zero:
        raise ValueError("the zero series has no certificate envelope")
    by_length: dict[int, int] = {}
    for s, x in a.terms.items():
        m = by_length.get(s.length)
        if m is None or x.valuation + 1 < m:
            by_length[s.length] = x.valuation + 1
    points = sorted(by_length.items())
    hull: list[tuple[int, int]] = []
    for L, m in points:
        while len(hull) >= 2:
            (L1, m1), (L2, m2) = hull[-2], hull[-1]
            # drop the middle point when it lies on or above the chord
            if (m2 - m1) * (L - L1) >= (m - m1) * (L2 - L1):
                hull.pop()
            else:
                break
        hull.append((L, m))
    return CertificateEnvelope(hull)


def membership_filtration(a: DaggerSeries, n: int) -> bool:
    """Does every stored term satisfy nu(x_s) + 1 >= l(s) / n?"""
    if n < 1:
        raise ValueError("filtration index must be positive")
    return all((x.valuation + 1) * n >= s.length
               for s, x in a.terms.items())


def series_pow(x: DaggerSeries, n: int, cocycle: Cocycle | None = None,
               inverse: DaggerSeries | None = None) -> DaggerSeries:
    """n-th twisted power; negative n needs an explicit inverse element."""
    if n < 0:
        if inverse is None:
            raise ValueError("negative power needs an inverse element")
        return series_pow(inverse, -n, cocycle)
    out = DaggerSeries.unit(x.ring, x.monoid, x.degree_cap)
    for _ in range(n):
        out = mul(out, x, cocycle)
    return out


def nc_torus(ring: RingDescriptor, lam: ScalarElem, degree_cap: int):
    """The twisted Z^2 convolution algebra with c(s, t) = lambda^(s2 t1).

    Returns (U1, U2, cocycle, monoid) where U1, U2 are the two generating
    basis series; they satisfy U2 U1 = lambda U1 U2.
    """
    from .monoid import BicharacterCocycle

    monoid = MonoidDescriptor("Z", 2)
    cocycle = BicharacterCocycle(lam, [[0, 0], [1, 0]])
    u1 = DaggerSeries.delta(ring, monoid, monoid.element((1, 0)), degree_cap)
    u2 = DaggerSeries.delta(ring, monoid, monoid.element((0, 1)), degree_cap)
    return u1, u2, cocycle, monoid


def torus_monomial(ring, monoid, cocycle, s1: int, s2: int,
                   degree_cap: int) -> DaggerSeries:
    """U1^s1 * U2^s2 built by repeated twisted multiplication."""
    u1 = DaggerSeries.delta(ring, monoid, monoid.element((1, 0)), degree_cap)
    u1_inv = DaggerSeries.delta(ring, monoid, monoid.element((-1, 0)),
                                degree_cap)
    u2 = DaggerSeries.delta(ring, monoid, monoid.element((0, 1)), degree_cap)
    u2_inv = DaggerSeries.delta(ring, monoid, monoid.element((0, -1)),
                                degree_cap)
    out = series_pow(u1, s1, cocycle, inverse=u1_inv)
    second = series_pow(u2, s2, cocycle, inverse=u2_inv)
    return mul(out, second, cocycle)
