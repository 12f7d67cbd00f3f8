"""Gauge norms, truncated spectral radii, linear-growth closures and
semi-dagger probes for finitely generated lattices in algebras over K.

All radii are reported as exact rational exponents of eps = |pi| (never as
decimals): an exponent t stands for the radius eps^t, so smaller radii have
larger exponents and rho >= 1 exactly when the exponent is <= 0.

Lattice powers are computed by pairwise generator products with immediate
Hermite reduction at every step, which keeps generator counts small and is
exact at precision N.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import Lattice, MatrixV
from .monoid import MonoidDescriptor
from .ring import INFINITY, PrecisionExhausted, RingDescriptor, ScalarElem
from .series import DaggerSeries, mul as series_mul


class MatrixAlgebraContext:
    """d x d matrices over K, coordinatised by their entries."""

    def __init__(self, ring: RingDescriptor, d: int):
        self.ring = ring
        self.d = d
        self.dim = d * d

    def to_vector(self, a: MatrixV):
        return [a[i, j] for i in range(self.d) for j in range(self.d)]

    def from_vector(self, vec) -> MatrixV:
        it = iter(vec)
        return MatrixV(self.ring,
                       [[next(it) for _ in range(self.d)]
                        for _ in range(self.d)])

    def product(self, a: MatrixV, b: MatrixV) -> MatrixV:
        return a * b

    def __repr__(self):
        return f"MatrixAlgebraContext(d={self.d})"


class SeriesAlgebraContext:
    """Truncated monoid series with lengths <= D; products drop overflow.

    For N^1 this is V[x] truncated at degree D: monomials above the cap
    multiply to zero.
    """

    def __init__(self, ring: RingDescriptor, monoid: MonoidDescriptor,
                 degree_cap: int, cocycle=None):
        self.ring = ring
        self.monoid = monoid
        self.degree_cap = degree_cap
        self.cocycle = cocycle
        self.basis = monoid.elements_up_to_length(degree_cap)
        self.index = {s: i for i, s in enumerate(self.basis)}
        self.dim = len(self.basis)

    def to_vector(self, a: DaggerSeries):
        vec = [self.ring.zero()] * self.dim
        for s, x in a.terms.items():
            vec[self.index[s]] = x
        return vec

    def from_vector(self, vec) -> DaggerSeries:
        terms = {s: x for s, x in zip(self.basis, vec) if not x.is_zero}
        return DaggerSeries(self.ring, self.monoid, terms, self.degree_cap)

    def product(self, a: DaggerSeries, b: DaggerSeries) -> DaggerSeries:
        return series_mul(a, b, self.cocycle)

    def __repr__(self):
        return (f"SeriesAlgebraContext({self.monoid!r}, "
                f"D={self.degree_cap})")


def lattice_from_elements(ctx, elements) -> Lattice:
    return Lattice.from_columns(ctx.ring, ctx.dim,
                                [ctx.to_vector(a) for a in elements])


def lattice_elements(ctx, L: Lattice):
    return [ctx.from_vector(v) for v in L.generator_vectors()]


def lattice_product(ctx, L1: Lattice, L2: Lattice) -> Lattice:
    """Reduced span of pairwise products of generators."""
    gens1 = lattice_elements(ctx, L1)
    gens2 = lattice_elements(ctx, L2)
    cols = []
    for a in gens1:
        for b in gens2:
            cols.append(ctx.to_vector(ctx.product(a, b)))
    return Lattice.from_columns(ctx.ring, ctx.dim, cols)


def star_scale(t, L: Lattice) -> Lattice:
    """r * S for r = eps^t <= 1: multiply by pi^ceil(t)."""
    t = Fraction(t)
    if t < 0:
        raise ValueError("star scaling needs r <= 1, i.e. exponent t >= 0")
    return L.scale_by_pi(-(-t.numerator // t.denominator))


def gauge_exponent(L: Lattice):
    """Exponent of the gauge norm of L: maximal e with L inside
    pi^e * (standard lattice); +inf for the zero lattice."""
    return L.gauge_exponent()


class RadiusReport:
    """Estimates nu_n / n of the spectral exponent and the truncated radius.

    rho_exponent is sup_n nu_n/n (Fekete superadditive limit, approached
    from below); the truncated radius is rho1 = eps^rho1_exponent with
    rho1_exponent = min(0, rho_exponent) <= 0.  A nilpotent lattice has
    rho_exponent = +inf and rho1_exponent = 0.
    """

    def __init__(self, exponent_estimates, rho_exponent, verdict):
        self.exponent_estimates = exponent_estimates
        self.rho_exponent = rho_exponent
        self.verdict = verdict

    @property
    def rho1_exponent(self):
        if self.rho_exponent == INFINITY:
            return Fraction(0)
        return min(Fraction(0), self.rho_exponent)

    @property
    def rho1_is_one(self) -> bool:
        return self.rho1_exponent == 0

    def __repr__(self):
        return (f"RadiusReport(rho_exponent={self.rho_exponent}, "
                f"rho1_exponent={self.rho1_exponent}, {self.verdict})")


def rho1_estimate(S: Lattice, ctx, n_max: int) -> RadiusReport:
    """Gauge exponents of S^n for n <= n_max and the resulting radius
    estimate; verdict "converged" when the running estimate is stationary
    over the last ceil(n_max/4) steps."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    ring = ctx.ring
    estimates = []
    running: list[Fraction] = []
    power = S
    nus = {}
    best = None
    for n in range(1, n_max + 1):
        if n > 1:
            power = lattice_product(ctx, power, S)
        nu = power.gauge_exponent()
        if nu == INFINITY:
            # S^n = 0: nilpotent at the cap, radius exponent +inf
            return RadiusReport(estimates, INFINITY, "converged")
        if nu < -ring.precision:
            raise PrecisionExhausted(
                f"gauge exponent {nu} of the {n}-th power is below -N")
        nus[n] = nu
        estimates.append((n, Fraction(nu, n)))
        best = Fraction(nu, n) if best is None else max(best, Fraction(nu, n))
        running.append(best)
    window = -(-n_max // 4)
    converged = (len(running) > window
                 and len(set(running[-window:])) == 1)
    # superadditivity of the gauge exponents is a hard invariant
    for m, num in nus.items():
        for n, nun in nus.items():
            if m + n in nus:
                assert nus[m + n] >= num + nun, "superadditivity violated"
    return RadiusReport(estimates, best, "converged" if converged
                        else "upper_bound_only")


def _poly_mul(ring, f, g):
    out = [ring.zero()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a.is_zero:
            continue
        for j, b in enumerate(g):
            if not b.is_zero:
                out[i + j] = out[i + j] + a * b
    return out


def _poly_add(ring, f, g):
    n = max(len(f), len(g))
    f = f + [ring.zero()] * (n - len(f))
    g = g + [ring.zero()] * (n - len(g))
    return [a + b for a, b in zip(f, g)]


def _poly_det(ring, mat):
    """Determinant of a matrix of polynomials by cofactor expansion."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    out = [ring.zero()]
    for i in range(n):
        minor = [row[1:] for j, row in enumerate(mat) if j != i]
        term = _poly_mul(ring, mat[i][0], _poly_det(ring, minor))
        if i % 2:
            term = [-a for a in term]
        out = _poly_add(ring, out, term)
    return out


def characteristic_polynomial(a: MatrixV):
    """Coefficients of det(x*I - a), degree 0 first, exact at precision N."""
    ring = a.ring
    if a.rows != a.cols:
        raise ValueError("characteristic polynomial of a non-square matrix")
    mat = []
    for i in range(a.rows):
        row = []
        for j in range(a.cols):
            if i == j:
                row.append([-a[i, j], ring.one()])
            else:
                row.append([-a[i, j]])
        mat.append(row)
    return _poly_det(ring, mat)


def newton_polygon_rho(a: MatrixV):
    """Minimal eigenvalue valuation of a, read off the Newton polygon of
    its characteristic polynomial (+inf for nilpotent matrices).

    Independent oracle for singleton spectral radii: the minimal root
    valuation equals lim nu(a^n)/n for diagonalisable (and nilpotent)
    matrices.
    """
    ring = a.ring
    coeffs = characteristic_polynomial(a)
    points = []
    for i, c in enumerate(coeffs):
        if not c.effectively_zero:
            points.append((i, c.valuation))
    if len(points) <= 1:
        return INFINITY
    # lower convex hull, scanning degrees upward
    hull = []
    for (i, v) in points:
        while len(hull) >= 2:
            (i1, v1), (i2, v2) = hull[-2], hull[-1]
            if (v2 - v1) * (i - i1) >= (v - v1) * (i2 - i1):
                hull.pop()
            else:
                break
        hull.append((i, v))
    (i1, v1), (i2, v2) = hull[-2], hull[-1]
    # the rightmost hull segment carries the roots of minimal valuation
    return Fraction(v1 - v2, i2 - i1)


def lgb_closure(S: Lattice, ctx, i_max: int):
    """The chain L_i = sum_{j<=i} pi^j S^(j+1) with reduced generators.

    Returns (chain, stabilized_at) where stabilized_at is the first i with
    L_i = L_(i+1), or None if the chain is still growing at i_max.
    """
    ring = ctx.ring
    power = S
    chain = [S]
    stabilized_at = None
    for i in range(1, i_max + 1):
        power = lattice_product(ctx, power, S)
        term = power.scale_by_pi(i)
        if not term.is_zero and term.gauge_exponent() < -ring.precision:
            raise PrecisionExhausted("closure term has gauge below -N")
        nxt = chain[-1].sum(term)
        chain.append(nxt)
        if stabilized_at is None and nxt == chain[-2]:
            stabilized_at = i - 1
    return chain, stabilized_at


def pi_multiplicative(ctx, U: Lattice) -> bool:
    """Does pi * U * U lie inside U?  (Generator products suffice.)"""
    gens = lattice_elements(ctx, U)
    for a in gens:
        for b in gens:
            prod = ctx.product(a, b)
            vec = [x.scaled_by_pi(1) for x in ctx.to_vector(prod)]
            if not U.membership(vec):
                return False
    return True


class ProbeReport:
    """Outcome of iterating powers of pi^m S^j: "bounded" when the partial
    sums stabilise, "diverging" when the gauge exponents strictly decrease
    long enough, "inconclusive" otherwise."""

    def __init__(self, j, verdict, gauges, stabilized_at=None):
        self.j = j
        self.verdict = verdict
        self.gauges = gauges
        self.stabilized_at = stabilized_at

    def __repr__(self):
        return f"ProbeReport(j={self.j}, {self.verdict})"


def semi_dagger_probe(S: Lattice, ctx, m: int, j_list, l_max: int = 8):
    """For each j: iterate powers of pi^m S^j, reducing at every step and
    tracking gauge exponents of the powers and of their partial sums."""
    if m < 1:
        raise ValueError("m must be at least 1")
    reports = {}
    decrease_window = -(-l_max // 2)
    for j in j_list:
        base = S
        for _ in range(j - 1):
            base = lattice_product(ctx, base, S)
        base = base.scale_by_pi(m)
        power = base
        chain = base
        gauges = [power.gauge_exponent()]
        verdict, stab = "inconclusive", None
        decreasing = 0
        for l in range(2, l_max + 1):
            power = lattice_product(ctx, power, base)
            gauges.append(power.gauge_exponent())
            if gauges[-1] < gauges[-2]:
                decreasing += 1
            else:
                decreasing = 0
            nxt = chain.sum(power)
            if nxt == chain:
                verdict, stab = "bounded", l - 1
                break
            chain = nxt
            if decreasing >= decrease_window:
                verdict = "diverging"
                break
        else:
            if decreasing >= decrease_window:
                verdict = "diverging"
        reports[j] = ProbeReport(j, verdict, gauges, stab)
    return reports
