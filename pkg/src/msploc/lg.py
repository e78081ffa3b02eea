"""Index bookkeeping for the hybrid LG theory at infinity."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class LGIndexError(ValueError):
    pass


@dataclass(frozen=True)
class LGIndex:
    g: int
    m: int  # markings with monodromy 2
    k: int  # all markings
    d_prime: int  # deg L2

    def violations(self) -> list[str]:
        out = []
        for name in ("g", "m", "k", "d_prime"):
            if getattr(self, name) < 0:
                out.append(f"{name} must be non-negative")
        if self.m > self.k:
            out.append("m must not exceed k")
        if (self.m - (2 * self.g - 2)) % 3:
            out.append(f"m = {self.m} is not congruent to 2g-2 = {2 * self.g - 2} mod 3")
        return out


def lg_admissible_m(g: int, m_max: int) -> list[int]:
    """m in [0, m_max] with m = 2g - 2 (mod 3)."""
    start = (2 * g - 2) % 3
    return list(range(start, m_max + 1, 3))


def lg_vdim(index: LGIndex) -> int:
    problems = index.violations()
    if problems:
        raise LGIndexError(problems[0])
    return index.k


def potential_index_set(g: int, m_max: int, d_max: int) -> list[tuple[int, int]]:
    """(m, d') pairs indexing the genus-g potential up to the given bounds."""
    return [(m, d) for m in lg_admissible_m(g, m_max) for d in range(d_max + 1)]


# Slot for externally computed invariants N_{g,m,d'}; nothing here fills it.
InvariantTable = dict[tuple[int, int, int], Fraction]


def table_keys(g: int, m_max: int, d_max: int) -> list[tuple[int, int, int]]:
    return [(g, m, d) for m, d in potential_index_set(g, m_max, d_max)]
