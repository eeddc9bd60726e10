"""Geometry of maximal private channels: staircase rows, the weight
polytope, and the privacy cone.

Subsets of the input alphabet are bitmasks over letter positions, in
ascending order 1 .. 2^m - 2 (nonempty proper subsets only).  The
staircase matrix has one row per subset, a weight vector one entry per
subset, and extremal channels one output row per subset.  All of it is
exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .channels import Channel, DominanceWitness, PrivacyLevel, as_level, is_ldp
from .errors import (
    DecompositionInfeasibleError,
    DimensionCapError,
    NotInConeError,
    NotLdpError,
    NotMaximalError,
    PolytopeViolationError,
    ZeroVectorError,
)
from .groups import FiniteAlphabet, all_subset_masks, mask_to_positions
from .linalg import enumerate_basic_feasible, rank
from .rationals import as_fraction
from .simplex import feasible_point

DEFAULT_ENUM_CAP_M = 5

_ZERO = Fraction(0)
_ONE = Fraction(1)


def staircase_row(mask: int, m: int, t: Fraction) -> tuple[Fraction, ...]:
    """Row vector with t at positions in the subset and 1 elsewhere."""
    return tuple(t if mask >> x & 1 else _ONE for x in range(m))


@dataclass(frozen=True)
class StaircaseMatrix:
    """All staircase rows for an alphabet, one per nonempty proper subset."""

    input_alphabet: FiniteAlphabet
    level: PrivacyLevel
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def masks(self) -> tuple[int, ...]:
        return all_subset_masks(self.input_alphabet.size)


def staircase_matrix(alphabet: FiniteAlphabet, level) -> StaircaseMatrix:
    level = as_level(level)
    m = alphabet.size
    if m < 2:
        raise ValueError("staircase geometry needs at least two letters")
    rows = tuple(staircase_row(mask, m, level.t) for mask in all_subset_masks(m))
    return StaircaseMatrix(input_alphabet=alphabet, level=level, rows=rows)


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative weights on subsets; member of the weight polytope when
    every input letter's weighted staircase column sums to one."""

    input_alphabet: FiniteAlphabet
    level: PrivacyLevel
    values: tuple[Fraction, ...]

    def __post_init__(self):
        expected = (1 << self.input_alphabet.size) - 2
        if len(self.values) != expected:
            raise ValueError(f"expected {expected} weights, got {len(self.values)}")

    @property
    def masks(self) -> tuple[int, ...]:
        return all_subset_masks(self.input_alphabet.size)

    def weight(self, mask: int) -> Fraction:
        return self.values[mask - 1]

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(mask for mask, v in zip(self.masks, self.values) if v != 0)


def make_weight_vector(alphabet: FiniteAlphabet, level, values: Sequence) -> WeightVector:
    return WeightVector(input_alphabet=alphabet, level=as_level(level),
                        values=tuple(as_fraction(v) for v in values))


def in_weight_polytope(weights: WeightVector) -> bool:
    """Membership test: weights nonnegative, columns sum exactly to one."""
    m = weights.input_alphabet.size
    t = weights.level.t
    if any(v < 0 for v in weights.values):
        return False
    for x in range(m):
        total = _ZERO
        for mask, v in zip(weights.masks, weights.values):
            if v:
                total += v * t if mask >> x & 1 else v
        if total != 1:
            return False
    return True


def extremal_channel(weights: WeightVector) -> Channel:
    """The maximal channel with one output row per subset.

    Row y is the staircase row of y scaled by its weight; zero-weight
    rows are kept so the output alphabet is always the full subset
    list.  Output letters are the subset bitmasks themselves.
    """
    if not in_weight_polytope(weights):
        raise PolytopeViolationError("weights are not a member of the weight polytope")
    m = weights.input_alphabet.size
    t = weights.level.t
    rows = tuple(
        tuple(v * t if mask >> x & 1 else v for x in range(m))
        for mask, v in zip(weights.masks, weights.values)
    )
    return Channel(input_alphabet=weights.input_alphabet,
                   output_alphabet=FiniteAlphabet(weights.masks),
                   rows=rows)


@dataclass(frozen=True)
class ConeConstraintMatrix:
    """Facet description of the privacy cone.

    One row t*e_z - e_{z'} per ordered pair z != z' (lexicographic order),
    then the identity block for nonnegativity.
    """

    input_alphabet: FiniteAlphabet
    level: PrivacyLevel
    pairs: tuple[tuple[int, int], ...]

    def pair_rows(self) -> list[list[Fraction]]:
        m = self.input_alphabet.size
        t = self.level.t
        out = []
        for z, z2 in self.pairs:
            row = [_ZERO] * m
            row[z] += t
            row[z2] -= _ONE
            out.append(row)
        return out

    def all_rows(self) -> list[list[Fraction]]:
        m = self.input_alphabet.size
        rows = self.pair_rows()
        for x in range(m):
            row = [_ZERO] * m
            row[x] = _ONE
            rows.append(row)
        return rows

    def active_rows(self, v: Sequence[Fraction]) -> list[list[Fraction]]:
        """Rows whose inequality holds with equality at v."""
        m = self.input_alphabet.size
        t = self.level.t
        active = []
        for z, z2 in self.pairs:
            if t * v[z] == v[z2]:
                row = [_ZERO] * m
                row[z] += t
                row[z2] -= _ONE
                active.append(row)
        for x in range(m):
            if v[x] == 0:
                row = [_ZERO] * m
                row[x] = _ONE
                active.append(row)
        return active


def cone_constraint_matrix(alphabet: FiniteAlphabet, level) -> ConeConstraintMatrix:
    m = alphabet.size
    pairs = tuple((z, z2) for z in range(m) for z2 in range(m) if z != z2)
    return ConeConstraintMatrix(input_alphabet=alphabet, level=as_level(level), pairs=pairs)


def in_cone(v: Sequence[Fraction], level) -> bool:
    """Membership in the privacy cone: v >= 0 and t*min(v) >= max(v)."""
    t = as_level(level).t
    if any(x < 0 for x in v):
        return False
    return t * min(v) >= max(v)


def is_extreme_direction(v: Sequence, alphabet: FiniteAlphabet, level) -> int | None:
    """The subset behind an extreme ray, or None.

    Extreme rays of the privacy cone are exactly the positive multiples
    of staircase rows: value t*c on a nonempty proper subset Z, value c
    elsewhere.  Returns Z as a bitmask when v has that shape.  At t = 1
    the cone degenerates to the constant ray; the lowest singleton is
    returned as the canonical subset there.
    """
    t = as_level(level).t
    vals = [as_fraction(x) for x in v]
    if len(vals) != alphabet.size:
        raise ValueError("vector length must match the alphabet size")
    if all(x == 0 for x in vals):
        raise ZeroVectorError("the zero vector spans no ray")
    distinct = sorted(set(vals))
    if len(distinct) == 1:
        if t == 1 and distinct[0] > 0:
            return 1  # degenerate cone: every subset gives the same ray
        return None
    if len(distinct) != 2:
        return None
    lo, hi = distinct
    if lo <= 0 or hi != t * lo:
        return None
    mask = 0
    for x, val in enumerate(vals):
        if val == hi:
            mask |= 1 << x
    return mask


def kernel_rank_check(v: Sequence, alphabet: FiniteAlphabet, level) -> bool:
    """Extremality via active constraints: true iff the rows of the cone
    description that are tight at v have rank m - 1, i.e. their kernel
    is exactly the line through v."""
    level = as_level(level)
    m = alphabet.size
    vals = [as_fraction(x) for x in v]
    if len(vals) != m:
        raise ValueError("vector length must match the alphabet size")
    if all(x == 0 for x in vals):
        raise ZeroVectorError("the zero vector spans no ray")
    if not in_cone(vals, level):
        raise NotInConeError(f"vector {vals} is outside the t={level.t} cone")
    active = cone_constraint_matrix(alphabet, level).active_rows(vals)
    if not active:
        return m == 1
    return rank(active) == m - 1


def is_maximal(channel: Channel, level) -> bool:
    """A private channel is maximal (not strictly below any other in the
    post-processing order) iff each nonzero row is an extreme direction."""
    level = as_level(level)
    if not is_ldp(channel, level):
        raise NotLdpError(f"channel violates the t={level.t} constraint")
    for row in channel.rows:
        if all(x == 0 for x in row):
            continue
        if is_extreme_direction(row, channel.input_alphabet, level) is None:
            return False
    return True


def canonical_weight(channel: Channel, level) -> WeightVector:
    """Gather a maximal channel's rows into its polytope representative.

    Rows proportional to the same staircase row pool their scales, so
    equivalent maximal channels (up to relabeling, zero rows, and row
    splits) map to the same weight vector.
    """
    level = as_level(level)
    if not is_maximal(channel, level):
        raise NotMaximalError("only maximal channels have a canonical weight")
    m = channel.input_alphabet.size
    totals = [_ZERO] * ((1 << m) - 2)
    for row in channel.rows:
        if all(x == 0 for x in row):
            continue
        mask = is_extreme_direction(row, channel.input_alphabet, level)
        totals[mask - 1] += min(row)
    weights = WeightVector(input_alphabet=channel.input_alphabet, level=level,
                           values=tuple(totals))
    if not in_weight_polytope(weights):
        raise PolytopeViolationError("gathered weights left the polytope; "
                                     "channel columns cannot be stochastic")
    return weights


def dominating_maximal(channel: Channel, level) -> tuple[Channel, DominanceWitness]:
    """A maximal channel above the given one, with the exact witness.

    Each nonzero row is split into a conic combination of staircase
    rows (a feasibility LP; one always exists inside the cone), the
    pieces are gathered by subset, and the bookkeeping of the split
    doubles as the post-processing witness.
    """
    level = as_level(level)
    if not is_ldp(channel, level):
        raise NotLdpError(f"channel violates the t={level.t} constraint")
    m = channel.input_alphabet.size
    masks = all_subset_masks(m)
    n = len(masks)
    t = level.t
    columns = [staircase_row(mask, m, t) for mask in masks]
    decompositions: list[list[Fraction]] = []
    for row in channel.rows:
        if all(x == 0 for x in row):
            decompositions.append([_ZERO] * n)
            continue
        a_eq = [[columns[j][x] for j in range(n)] for x in range(m)]
        b_eq = list(row)
        sol = feasible_point(a_eq, b_eq, n)
        if sol is None:
            raise DecompositionInfeasibleError("row is not a conic combination of "
                                               "staircase rows")
        decompositions.append(sol)
    totals = [sum((d[j] for d in decompositions), _ZERO) for j in range(n)]
    weights = WeightVector(input_alphabet=channel.input_alphabet, level=level,
                           values=tuple(totals))
    maximal = extremal_channel(weights)
    w_rows = []
    for z, d in enumerate(decompositions):
        w_rows.append(tuple(d[j] / totals[j] if totals[j] else _ZERO for j in range(n)))
    # Zero-weight subsets have zero rows in the maximal channel; their
    # witness columns can carry arbitrary mass, parked on the first output.
    w_rows = [list(r) for r in w_rows]
    for j in range(n):
        if totals[j] == 0:
            w_rows[0][j] = _ONE
    post = Channel(input_alphabet=maximal.output_alphabet,
                   output_alphabet=channel.output_alphabet,
                   rows=tuple(tuple(r) for r in w_rows))
    witness = DominanceWitness(base=maximal, derived=channel, post_processor=post)
    return maximal, witness


@lru_cache(maxsize=64)
def _vertices_cached(letters: tuple, t: Fraction, cap: int) -> tuple[tuple[Fraction, ...], ...]:
    m = len(letters)
    if m > cap:
        raise DimensionCapError(f"vertex enumeration capped at m <= {cap}, got m = {m}")
    masks = all_subset_masks(m)
    a_eq = [[t if mask >> x & 1 else _ONE for mask in masks] for x in range(m)]
    b_eq = [_ONE] * m
    return tuple(sorted(enumerate_basic_feasible(a_eq, b_eq)))


def enumerate_polytope_vertices(alphabet: FiniteAlphabet, level,
                                cap: int = DEFAULT_ENUM_CAP_M) -> list[WeightVector]:
    """All vertices of the weight polytope, exactly.

    Support enumeration over subsets of the 2^m - 2 columns, so the
    work grows like C(2^m - 2, m); the cap keeps it at desk scale
    (m <= 5 by default).  Results are sorted and deterministic.
    """
    level = as_level(level)
    if alphabet.size < 2:
        raise ValueError("the weight polytope needs at least two letters")
    vertex_values = _vertices_cached(alphabet.letters, level.t, cap)
    return [WeightVector(input_alphabet=alphabet, level=level, values=values)
            for values in vertex_values]


def subset_size(mask: int) -> int:
    return len(mask_to_positions(mask))
