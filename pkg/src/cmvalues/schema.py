"""JSON encoding of high-precision numbers and the output schemas of the CLI.

Every high-precision number is emitted as an object

    {"decimal": "<all significant digits>", "display": <float>}

so that machine consumers keep full precision and humans get a short value.
"""

from __future__ import annotations

import math
from fractions import Fraction

import jsonschema
import mpmath

NUMBER = {
    "type": "object",
    "properties": {
        "decimal": {"type": "string"},
        "display": {"type": ["number", "null"]},
    },
    "required": ["decimal", "display"],
    "additionalProperties": False,
}

FORM = {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3}

_int = {"type": "integer"}
_bool = {"type": "boolean"}
_str = {"type": "string"}


def _obj(props: dict, required=None) -> dict:
    return {
        "type": "object",
        "properties": props,
        "required": list(required if required is not None else props),
    }


IDENTITY_REPORT = _obj({
    "D": _int,
    "d": _int,
    "mode": {"enum": ["individual", "averaged"]},
    "lhs": NUMBER,
    "rhs": NUMBER,
    "abs_error": NUMBER,
    "tolerance": NUMBER,
    "precision_bits": _int,
    "terms": {"type": "array", "items": _obj({"m": _int, "n": _int, "delta": {"enum": [1, 2]}, "coefficient": NUMBER})},
    "pass": _bool,
})

SCHEMAS = {
    "classgroup": _obj({
        "D": _int, "h": _int, "w": _int,
        "classes": {"type": "array", "items": FORM},
        "table": {"type": "array", "items": {"type": "array", "items": _int}},
        "genera": {"type": "array", "items": {"type": "object"}},
    }),
    "j": _obj({"tau": _obj({"re": NUMBER, "im": NUMBER}), "j": _obj({"re": NUMBER, "im": NUMBER}), "precision_bits": _int}),
    "theta": _obj({"form": FORM, "r": {"type": "array", "items": _int}}),
    "kappa": _obj({
        "n": _int, "D": _int,
        "diff": {"type": "array", "items": {"type": ["integer", "string"]}},
        "terms": {"type": "array", "items": {"type": "array", "prefixItems": [_str, _int]}},
        "numeric": NUMBER,
    }),
    "gz": _obj({
        "D": _int, "d": _int,
        "lhs_numeric": NUMBER,
        "recognized": _int,
        "factors": {"type": "array", "items": {"type": "array", "items": _int}},
        "expected": _int,
        "residual": NUMBER,
        "pass": _bool,
    }),
    "verify": IDENTITY_REPORT,
    "verify-batch": _obj({
        "reports": {"type": "array", "items": IDENTITY_REPORT},
        "n_pairs": _int,
        "n_failed": _int,
        "pass": _bool,
    }),
    "petersson": _obj({
        "D": _int,
        "characters": {"type": "array", "items": _obj({
            "character_order": _int,
            "exponents": {"type": "array", "items": _str},
            "value": NUMBER,
            "oracle_value": {"oneOf": [NUMBER, {"type": "null"}]},
            "rel_diff": {"type": ["number", "null"]},
        })},
        "pass": _bool,
    }),
    "weilrep": _obj({
        "D": _int, "size": _int, "sgn": _int, "signature_mod_8": _int,
        "milgram_residual": NUMBER, "unitarity_T": NUMBER, "unitarity_S": NUMBER,
        "braid": NUMBER, "s_squared": NUMBER, "s_squared_phase": _str,
        "tolerance": NUMBER, "pass": _bool,
    }, required=["D", "size", "sgn", "signature_mod_8", "milgram_residual"]),
    "sturm": _obj({"D": _int, "sturm": _bool}),
}


def number(x, bits: int | None = None) -> dict:
    """Encode an mpf (or int/Fraction/float) with its full decimal expansion."""
    if bits is None:
        bits = mpmath.mp.prec
    digits = max(15, int(bits * math.log10(2)))
    with mpmath.workprec(bits + 8):
        if isinstance(x, Fraction):
            x = mpmath.mpf(x.numerator) / x.denominator
        x = mpmath.mpmathify(x)
        dec = "0" if x == 0 else mpmath.nstr(x, digits, min_fixed=-5, max_fixed=digits)
    disp = float(x)
    if math.isinf(disp) or math.isnan(disp):
        disp = None
    return {"decimal": dec, "display": disp}


def validate(command: str, payload) -> None:
    jsonschema.validate(payload, SCHEMAS[command])


def decode_number(obj: dict):
    """Inverse of `number` (to an mpf at the current mpmath precision)."""
    return mpmath.mpf(obj["decimal"])
