"""JSON encodings for every public value type.

Schemas:
  ring     {"backend": "padic"|"eqchar", "p"|"q": int, "precision": int}
  scalar   {"v": int | "inf", "u": "<decimal digits of unit residue>"}
  matrix   [[scalar, ...], ...]
  lattice  {"ambient_rank": r, "pi_exponent": e, "generators": matrix}
  monoid   {"kind": "N"|"Z"|"free", "rank": int}
  element  [int, ...] (exponents) or "word"
  cocycle  {"kind": "trivial"} or
           {"kind": "bicharacter", "lambda": scalar, "Q": [[int, ...], ...]}
  series   {"monoid": monoid, "ring": ring, "D": int,
            "terms": [{"s": element, "x": scalar}, ...],
            "certificate": {"c": "p/q", "k": int} | null, "truncated": bool}
  crossed  {"Dz": int, "terms": [{"n": int, "series": series}, ...],
            "certificate": ..., "truncated": bool}
  action   {"a": matrix, "b": [scalar, ...]}
"""

from __future__ import annotations

import re
from fractions import Fraction

from .crossed import AffineAction, CrossedElem
from .linalg import Lattice, MatrixV
from .monoid import (BicharacterCocycle, Cocycle, MonoidDescriptor,
                     TrivialCocycle)
from .ring import INFINITY, RingDescriptor, ScalarElem
from .series import DaggerSeries, GrowthCertificate


class SchemaError(ValueError):
    """Input does not match the published JSON schemas."""


def ring_to_json(ring: RingDescriptor) -> dict:
    key = "p" if ring.backend == "padic" else "q"
    return {"backend": ring.backend, key: ring.base,
            "precision": ring.precision}


def ring_from_json(obj) -> RingDescriptor:
    try:
        backend = obj["backend"]
        base = obj["p"] if backend == "padic" else obj["q"]
        return RingDescriptor(backend, int(base), int(obj["precision"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad ring descriptor: {exc}") from exc


def scalar_to_json(x: ScalarElem) -> dict:
    if x.is_zero:
        return {"v": "inf", "u": "0"}
    return {"v": x.valuation, "u": str(x.unit_encoded())}


def scalar_from_json(ring: RingDescriptor, obj) -> ScalarElem:
    try:
        if obj["v"] == "inf":
            return ring.zero()
        return ring.from_valuation_unit(int(obj["v"]), int(obj["u"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad scalar: {exc}") from exc


_PI_EXPR = re.compile(
    r"^\s*(-?\d+)?\s*\*?\s*pi(?:\^(-?\d+))?\s*$")


def parse_scalar(ring: RingDescriptor, value) -> ScalarElem:
    """Accept a scalar object, an integer, or a shorthand like "pi^2",
    "3*pi", "2*pi^-1"."""
    if isinstance(value, dict):
        return scalar_from_json(ring, value)
    if isinstance(value, int):
        return ring.scalar(value)
    if isinstance(value, str):
        s = value.strip()
        if re.fullmatch(r"-?\d+", s):
            return ring.scalar(int(s))
        m = _PI_EXPR.match(s)
        if m:
            coeff = int(m.group(1)) if m.group(1) else 1
            exp = int(m.group(2)) if m.group(2) else 1
            return ring.scalar(coeff).scaled_by_pi(exp)
    raise SchemaError(f"cannot parse scalar {value!r}")


def matrix_to_json(a: MatrixV) -> list:
    return [[scalar_to_json(x) for x in row] for row in a.entries]


def matrix_from_json(ring: RingDescriptor, obj) -> MatrixV:
    if not isinstance(obj, list) or not obj:
        raise SchemaError("matrix must be a nonempty nested array")
    return MatrixV(ring, [[parse_scalar(ring, x) for x in row]
                          for row in obj])


def lattice_to_json(L: Lattice) -> dict:
    return {"ambient_rank": L.ambient_rank, "pi_exponent": L.pi_exponent,
            "generators": matrix_to_json(L.gens)}


def lattice_from_json(ring: RingDescriptor, obj) -> Lattice:
    try:
        rank = int(obj["ambient_rank"])
        e = int(obj.get("pi_exponent", 0))
        gens = matrix_from_json(ring, obj["generators"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad lattice: {exc}") from exc
    cols = [gens.column(j) for j in range(gens.cols)]
    return Lattice.from_columns(ring, rank, cols).scale_by_pi(e)


def monoid_to_json(m: MonoidDescriptor) -> dict:
    return {"kind": m.kind, "rank": m.rank}


def monoid_from_json(obj) -> MonoidDescriptor:
    try:
        return MonoidDescriptor(obj["kind"], int(obj["rank"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad monoid descriptor: {exc}") from exc


def element_to_json(s):
    return s.data if isinstance(s.data, str) else list(s.data)


def element_from_json(monoid: MonoidDescriptor, obj):
    try:
        return monoid.element(obj)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad monoid element: {exc}") from exc


def cocycle_to_json(c: Cocycle) -> dict:
    if isinstance(c, TrivialCocycle):
        return {"kind": "trivial"}
    if isinstance(c, BicharacterCocycle):
        return {"kind": "bicharacter", "lambda": scalar_to_json(c.lam),
                "Q": [list(row) for row in c.Q]}
    raise SchemaError(f"cocycle {c!r} has no JSON form")


def cocycle_from_json(ring: RingDescriptor, obj) -> Cocycle:
    if obj is None or obj.get("kind") == "trivial":
        return TrivialCocycle(ring)
    if obj.get("kind") == "bicharacter" or "lambda" in obj:
        try:
            lam = parse_scalar(ring, obj["lambda"])
            return BicharacterCocycle(lam, obj["Q"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad cocycle: {exc}") from exc
    raise SchemaError(f"unknown cocycle kind in {obj!r}")


def certificate_to_json(cert: GrowthCertificate | None):
    if cert is None:
        return None
    return {"c": str(cert.c), "k": cert.k}


def certificate_from_json(obj) -> GrowthCertificate | None:
    if obj is None:
        return None
    try:
        return GrowthCertificate(Fraction(obj["c"]), int(obj["k"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad certificate: {exc}") from exc


def series_to_json(a: DaggerSeries) -> dict:
    return {
        "monoid": monoid_to_json(a.monoid),
        "ring": ring_to_json(a.ring),
        "D": a.degree_cap,
        "terms": [{"s": element_to_json(s), "x": scalar_to_json(x)}
                  for s, x in sorted(a.terms.items(),
                                     key=lambda kv: (kv[0].length,
                                                     str(kv[0].data)))],
        "certificate": certificate_to_json(a.certificate),
        "truncated": a.truncated,
    }


def series_from_json(obj, ring: RingDescriptor | None = None) -> DaggerSeries:
    try:
        if ring is None:
            ring = ring_from_json(obj["ring"])
        monoid = monoid_from_json(obj["monoid"])
        cap = int(obj["D"])
        terms = {}
        for item in obj.get("terms", []):
            s = element_from_json(monoid, item["s"])
            terms[s] = parse_scalar(ring, item["x"])
        cert = certificate_from_json(obj.get("certificate"))
        return DaggerSeries(ring, monoid, terms, cap, cert,
                            truncated=bool(obj.get("truncated", False)))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad series: {exc}") from exc


def crossed_to_json(u: CrossedElem) -> dict:
    return {
        "Dz": u.z_cap,
        "terms": [{"n": n, "series": series_to_json(series)}
                  for n, series in sorted(u.terms.items())],
        "certificate": certificate_to_json(u.certificate),
        "truncated": u.truncated,
    }


def crossed_from_json(obj, ring: RingDescriptor,
                      monoid: MonoidDescriptor | None = None,
                      degree_cap: int | None = None) -> CrossedElem:
    try:
        z_cap = int(obj["Dz"])
        terms = {}
        for item in obj.get("terms", []):
            series = series_from_json(item["series"], ring)
            terms[int(item["n"])] = series
            monoid = series.monoid
            degree_cap = series.degree_cap
        if monoid is None or degree_cap is None:
            raise SchemaError("empty crossed element needs explicit caps")
        cert = certificate_from_json(obj.get("certificate"))
        return CrossedElem(ring, monoid, terms, z_cap, degree_cap, cert,
                           truncated=bool(obj.get("truncated", False)))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad crossed element: {exc}") from exc


def action_to_json(alpha: AffineAction) -> dict:
    return {"a": matrix_to_json(alpha.a),
            "b": [scalar_to_json(x) for x in alpha.b]}


def action_from_json(ring: RingDescriptor, obj,
                     strict: bool = True) -> AffineAction:
    try:
        a = matrix_from_json(ring, obj["a"])
        b = [parse_scalar(ring, x) for x in obj["b"]]
        return AffineAction(a, b, strict=strict)
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad action: {exc}") from exc


def fraction_str(x) -> str:
    if x == INFINITY:
        return "inf"
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 \
        else str(f.numerator)
