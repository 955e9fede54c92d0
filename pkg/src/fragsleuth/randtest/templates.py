"""Aperiodic templates for the non-overlapping matching test.

A template is aperiodic when no proper shift of it can overlap itself,
i.e. no proper prefix equals the suffix of the same length.  These are
exactly the standard template-set entries for a given length; for
length 9 there are 148 of them.  The set is generated once at import,
in ascending numeric order, instead of shipping a literal table.
"""

from __future__ import annotations

from functools import lru_cache


def _is_aperiodic(value: int, m: int) -> bool:
    bits = [(value >> (m - 1 - k)) & 1 for k in range(m)]
    for shift in range(1, m):
        if bits[: m - shift] == bits[shift:]:
            return False
    return True


@lru_cache(maxsize=None)
def aperiodic_templates(m: int) -> tuple[int, ...]:
    """All aperiodic templates of length m, as window-code integers."""
    if m < 2:
        raise ValueError("template length must be >= 2")
    return tuple(v for v in range(1 << m) if _is_aperiodic(v, m))
