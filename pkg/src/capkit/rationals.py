"""Exact rational parsing and canonical formatting.

All quantities in capkit are exact rationals (stdlib ``fractions.Fraction``).
Floats never enter the model: wire-format literals are integers, decimal
strings, or ``p/q`` strings, and every comparison is exact, so there are no
epsilon tolerances anywhere in the engine.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SchemaError

__all__ = ["parse_rational", "format_rational"]


def parse_rational(raw) -> Fraction:
    """Turn a wire-format literal into a Fraction.

    Accepts Python ints, Fractions (passed through), and strings in integer,
    decimal, or ``p/q`` form.  Rejects floats (inexact), zero denominators,
    and non-finite spellings such as ``nan`` or ``inf``.
    """
    if isinstance(raw, Fraction):
        return raw
    if isinstance(raw, bool):
        raise SchemaError(f"expected a rational literal, got boolean {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, float):
        raise SchemaError(
            f"float literal {raw!r} is not admitted; write an integer, "
            "a decimal string, or a 'p/q' string"
        )
    if isinstance(raw, str):
        text = raw.strip()
        try:
            value = Fraction(text)
        except ZeroDivisionError:
            raise SchemaError(f"zero denominator in rational literal {raw!r}") from None
        except (ValueError, OverflowError):
            raise SchemaError(
                f"malformed rational literal {raw!r}; expected an integer, "
                "a decimal, or 'p/q'"
            ) from None
        return value
    raise SchemaError(f"expected a rational literal, got {type(raw).__name__}")


def format_rational(value: Fraction):
    """Canonical wire form: an int when integral, else a lowest-terms 'p/q' string.

    ``Fraction`` already keeps itself in lowest terms, so equal values always
    format identically -- the property the deterministic-serialization tests
    lean on.
    """
    if value.denominator == 1:
        return int(value.numerator)
    return f"{value.numerator}/{value.denominator}"
