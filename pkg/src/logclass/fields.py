"""Field constructors and the description format used by the CLI.

Descriptions accepted: "Q", "Q(i)", "Q(sqrt(d))", "cubic(f)" for the
catalogued cyclic cubics, "Q(sqrt(a),sqrt(b))" for biquadratic composita,
or a JSON object {"poly": [c0, c1, ..., 1], "label": "..."}.
"""

from __future__ import annotations

import math
import re

from sympy import factorint

from .errors import UnsupportedField
from .numberfield import CyclicCubicField, NumberField, QQ, QuadraticField

_CUBIC_POLYS = {
    7: (-1, -2, 1),    # x^3 + x^2 - 2x - 1
    9: (1, -3, 0),     # x^3 - 3x + 1
    13: (1, -4, 1),    # x^3 + x^2 - 4x + 1
}

_FIELD_CACHE: dict[str, NumberField] = {}


def _squarefree(n: int) -> int:
    s = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            s *= p
    return s if n > 0 else -s


def quadratic_field(d: int) -> QuadraticField:
    d = _squarefree(d)
    key = f"Q(sqrt({d}))"
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = QuadraticField(d)
    return _FIELD_CACHE[key]


def cubic_field(conductor: int) -> CyclicCubicField:
    key = f"cubic({conductor})"
    if key not in _FIELD_CACHE:
        if conductor not in _CUBIC_POLYS:
            raise UnsupportedField(
                f"cyclic cubic of conductor {conductor} not catalogued")
        c0, c1, c2 = _CUBIC_POLYS[conductor]
        _FIELD_CACHE[key] = CyclicCubicField((c0, c1, c2), conductor)
    return _FIELD_CACHE[key]


def biquadratic_field(d1: int, d2: int):
    from .biquadratic import BiquadraticField
    d1, d2 = _squarefree(d1), _squarefree(d2)
    if d1 == d2 or 1 in (d1, d2):
        raise UnsupportedField("biquadratic needs two distinct irrationalities")
    a, b = sorted((d1, d2), key=abs)
    key = f"Q(sqrt({a}),sqrt({b}))"
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = BiquadraticField(a, b)
    return _FIELD_CACHE[key]


def named_field(desc) -> NumberField:
    """Resolve a CLI field description (string or {"poly": ..., "label": ...})."""
    if isinstance(desc, NumberField):
        return desc
    if isinstance(desc, dict):
        return _field_from_poly(desc["poly"])
    s = str(desc).strip().replace(" ", "")
    if s in ("Q", "QQ"):
        return QQ
    if s == "Q(i)":
        return quadratic_field(-1)
    m = re.fullmatch(r"Q\(sqrt\((-?\d+)\)\)", s)
    if m:
        return quadratic_field(int(m.group(1)))
    m = re.fullmatch(r"cubic\((\d+)\)", s)
    if m:
        return cubic_field(int(m.group(1)))
    m = re.fullmatch(r"Q\(sqrt\((-?\d+)\),sqrt\((-?\d+)\)\)", s)
    if m:
        return biquadratic_field(int(m.group(1)), int(m.group(2)))
    raise UnsupportedField(f"unrecognized field description {desc!r}")


def _field_from_poly(coeffs) -> NumberField:
    coeffs = [int(c) for c in coeffs]
    if coeffs[-1] != 1:
        raise UnsupportedField("defining polynomial must be monic")
    deg = len(coeffs) - 1
    if deg == 1:
        return QQ
    if deg == 2:
        c0, c1, _ = coeffs
        disc = c1 * c1 - 4 * c0
        return quadratic_field(_squarefree(disc))
    if deg == 3:
        c0, c1, c2, _ = coeffs
        disc = (18 * c2 * c1 * c0 - 4 * c2**3 * c0 + c2**2 * c1**2
                - 4 * c1**3 - 27 * c0**2)
        r = math.isqrt(abs(disc))
        if disc <= 0 or r * r != disc:
            raise UnsupportedField("cubic is not cyclic (nonsquare discriminant)")
        key = f"cubic({r})"
        if key not in _FIELD_CACHE:
            _FIELD_CACHE[key] = CyclicCubicField((c0, c1, c2), r)
        return _FIELD_CACHE[key]
    if deg == 4:
        # biquadratic primitive element sqrt(a) + sqrt(b):
        # x^4 - 2(a+b) x^2 + (a-b)^2
        if coeffs[1] != 0 or coeffs[3] != 0:
            raise UnsupportedField("quartic not in biquadratic normal form")
        c0, c2 = coeffs[0], coeffs[2]
        s = -c2 // 2 if c2 % 2 == 0 else None
        r = math.isqrt(abs(c0)) if c0 >= 0 else None
        if s is None or r is None or r * r != c0:
            raise UnsupportedField("quartic is not a biquadratic compositum")
        # a + b = s, a - b = +-r
        if (s + r) % 2:
            raise UnsupportedField("quartic is not a biquadratic compositum")
        a, b = (s + r) // 2, (s - r) // 2
        return biquadratic_field(a, b)
    raise UnsupportedField(f"degree {deg} outside the catalogue")
