"""Exact C*-weights on fixed components and edges."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import Edge, EdgeClass, Level


class WeightError(ValueError):
    pass


def linearization_exponent(w0: Fraction, w1: Fraction, deg: Fraction) -> Fraction:
    """k with (w0 - w1) = k * deg for a degree-`deg` bundle on a P^1 cover."""
    if deg == 0:
        raise WeightError("degenerate linearization")
    return (Fraction(w0) - Fraction(w1)) / Fraction(deg)


def orbifold_exponent(w0: Fraction, w1: Fraction, deg: Fraction) -> Fraction:
    """Same, on a P(1,3) cover of orbifold degree `deg` (total degree 3*deg).

    The tangent weights are then 3k at the scheme end and -k at the orbifold end.
    """
    if deg == 0:
        raise WeightError("degenerate linearization")
    return (Fraction(w0) - Fraction(w1)) / (3 * Fraction(deg))


@dataclass(frozen=True)
class BundleWeights:
    """Weights of (L1, L2, N).  At level inf only wL2 is pinned; wL1 is free
    and wN = -1 - wL1."""

    wL1: Fraction | None
    wL2: Fraction
    wN: Fraction | None

    def pinned(self, wL1: Fraction) -> BundleWeights:
        if self.wL1 is not None:
            return self
        wL1 = Fraction(wL1)
        return BundleWeights(wL1, self.wL2, -1 - wL1)

    def satisfies(self, level: Level) -> bool:
        if self.wL1 is None or self.wN is None:
            return level is Level.INF and self.wL2 == 0
        if level is Level.ZERO:
            return (self.wL1, self.wL2, self.wN) == (0, 0, 0)
        if level is Level.ONE:
            return (self.wL1, self.wL2, self.wN) == (-1, 0, 0)
        return self.wL2 == 0 and self.wL1 + self.wN + 1 == 0


def vertex_bundle_weights(level: Level) -> BundleWeights:
    if level is Level.ZERO:
        return BundleWeights(Fraction(0), Fraction(0), Fraction(0))
    if level is Level.ONE:
        return BundleWeights(Fraction(-1), Fraction(0), Fraction(0))
    return BundleWeights(None, Fraction(0), None)


@dataclass(frozen=True)
class EdgeTangentWeights:
    at_low: Fraction
    at_inf_or_high: Fraction


def edge_tangent_weights(edge: Edge) -> EdgeTangentWeights:
    """Tangent weights of the edge curve at its lower and upper endpoints."""
    d = edge.d
    if edge.cls is EdgeClass.E01:
        if d == 0:
            raise WeightError("degenerate linearization")
        return EdgeTangentWeights(1 / d, -1 / d)
    if edge.cls is EdgeClass.E1INF:
        orb, special = edge.orbifold_at_inf, edge.special_at_inf
        if not special:
            pole = 3 * d + 1
            if pole == 0:
                raise WeightError("weight pole")
            low = Fraction(-3) / pole
            return EdgeTangentWeights(low, -low if not orb else -low / 3)
        if d == 0:
            raise WeightError("degenerate linearization")
        return EdgeTangentWeights(-1 / d, 1 / d if not orb else 1 / (3 * d))
    dinf = edge.deg_inf
    if dinf == 0:
        raise WeightError("degenerate linearization")
    if edge.orbifold_at_inf:
        return EdgeTangentWeights(1 / dinf, -1 / (3 * dinf))
    return EdgeTangentWeights(1 / dinf, -1 / dinf)


def l1_weight_at_inf(edge: Edge) -> Fraction:
    """Weight of L1 at the inf end of an E1Inf edge, -1 - k*d_e.

    k is the linearization exponent read off the tangent weight at the
    level-1 end.  Not used by the certifier.
    """
    if edge.cls is not EdgeClass.E1INF:
        raise WeightError("only defined for E1Inf edges")
    k = edge_tangent_weights(edge).at_low
    return -1 - k * edge.d
