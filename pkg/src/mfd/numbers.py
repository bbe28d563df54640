"""Scalar arithmetic shared by every module.

Two modes coexist. Exact values are int or fractions.Fraction and compare by
equality; floats compare within a relative tolerance. Mixed comparisons fall
back to the float rule. Spectral quantities (Perron data, Markov traces) are
always floats; purely algebraic operations keep Fractions intact.
"""

from fractions import Fraction

DEFAULT_TOLERANCE = 1e-12

Scalar = (int, Fraction, float)


def is_exact(x):
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def to_float(x):
    return float(x)


def as_fraction(x):
    """Exact conversion; Fraction(float) uses the full binary expansion."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def div(x, y):
    """Division that keeps exact operands exact (int/int would give float)."""
    if is_exact(x) and is_exact(y):
        return Fraction(x) / Fraction(y)
    return x / y


def close(x, y, tol=None):
    """Equality test honouring the arithmetic mode of the operands.

    Exact operands compare exactly. Otherwise |x - y| is measured against
    max(|x|, |y|, 1), so the tolerance is relative for large values and
    absolute near zero.
    """
    if is_exact(x) and is_exact(y):
        return x == y
    if tol is None:
        tol = DEFAULT_TOLERANCE
    fx, fy = float(x), float(y)
    return abs(fx - fy) <= tol * max(abs(fx), abs(fy), 1.0)


def close_all(xs, ys, tol=None):
    xs, ys = list(xs), list(ys)
    return len(xs) == len(ys) and all(close(x, y, tol) for x, y in zip(xs, ys))


def parse_scalar(text, mode="rational"):
    """Parse "p/q", integer, or decimal strings; numbers pass through.

    In rational mode decimal strings become exact Fractions; in float mode
    everything becomes float.
    """
    if isinstance(text, bool):
        raise ValueError(f"not a scalar: {text!r}")
    if isinstance(text, (int, Fraction)):
        return float(text) if mode == "float" else text
    if isinstance(text, float):
        return Fraction(text) if mode == "rational" else text
    if isinstance(text, str):
        s = text.strip()
        try:
            if "/" in s:
                value = Fraction(s)
            elif any(c in s for c in ".eE") and not s.lstrip("+-").isdigit():
                value = Fraction(s) if mode == "rational" else float(s)
            else:
                value = int(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a scalar: {text!r}") from exc
        return float(value) if mode == "float" else value
    raise ValueError(f"not a scalar: {text!r}")


def format_scalar(x):
    """Rationals as "p/q" (or bare integer), floats with 17 significant digits."""
    if isinstance(x, bool):
        raise ValueError(f"not a scalar: {x!r}")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    return "%.17g" % x


def format_matrix(rows):
    return [[format_scalar(x) if x is not None else None for x in row] for row in rows]


def format_vector(v):
    return [format_scalar(x) for x in v]
