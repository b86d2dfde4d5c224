"""Precision budget shared by all high-precision evaluations."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

import mpmath

DEFAULT_BITS = 300
PRECISION_ENV = "CMVALUES_PRECISION_BITS"

# Internal guard bits added on top of the requested precision, so that
# values reported at `bits` are not polluted by accumulated rounding.
GUARD_BITS = 24


def default_bits() -> int:
    raw = os.environ.get(PRECISION_ENV)
    return int(raw) if raw else DEFAULT_BITS


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision, optional q-expansion truncation override, and the
    decimal error budget used when recognizing integers."""

    bits: int = DEFAULT_BITS
    q_order: int | None = None
    guard_digits: int = 20

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError(f"precision must be at least 64 bits, got {self.bits}")
        if self.q_order is not None and self.q_order < 1:
            raise ValueError(f"q_order must be positive, got {self.q_order}")

    @property
    def working_bits(self) -> int:
        return self.bits + GUARD_BITS

    def workprec(self, extra: int = 0):
        return mpmath.workprec(self.working_bits + extra)

    def doubled(self) -> "PrecisionContext":
        return replace(self, bits=2 * self.bits)

    def with_bits(self, bits: int) -> "PrecisionContext":
        return replace(self, bits=bits)

    def eps(self):
        """2^-bits as an mpf."""
        return mpmath.ldexp(mpmath.mpf(1), -self.bits)
