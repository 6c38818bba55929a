"""Integer dimension analytics for the moduli spaces.

Only numerical invariants are computed here: conjugacy-class dimensions,
the naive dimension count, its defect/superdefect decomposition, the
middle-cohomology dimension, and the classification of the dimension-2
polymultiplicity vectors.  No moduli geometry is modeled.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .divisors import MonodromyVector
from .errors import DefectPrecondition, NoFixedVectorFreePoint
from .katz import defect
from .scalars import GroupElement

__all__ = [
    "DimensionReport",
    "dimension_report",
    "classify_dim2",
    "classify_dim2_pmv",
    "middle_h1_dim",
    "dim2_census",
    "FAMILY_TAGS",
]

# The four dimension-2 families, keyed by the multiset of part counts of
# the (all-equal-multiplicity) partitions at the points.
FAMILY_TAGS = {
    (2, 2, 2, 2): "Quad_dd_x4",
    (3, 3, 3): "Tri_ddd_x3",
    (2, 4, 4): "Tri_2d2d_d4_d4",
    (2, 3, 6): "Tri_3d3d_2d3_d6",
}


def class_dim(r: int, partition: Sequence[int]) -> int:
    """Dimension of the semisimple conjugacy class with these multiplicities."""
    return r * r - sum(m * m for m in partition)


@dataclass(frozen=True)
class DimensionReport:
    """All integer invariants of one local monodromy vector.

    ``naive_dim`` is computed both as sum(class_dims) - 2 r^2 + 2 and as
    2 + r * defect + superdefect; construction asserts the two agree.
    ``mid_h1_end`` equals ``naive_dim`` at any irreducible point, but the
    formula is only proven on a nonempty stable locus, hence the caveat
    flag rather than an asserted nonemptiness.
    """

    r: int
    n: int
    class_dims: tuple[int, ...]
    naive_dim: int
    defect: int
    superdefects: tuple[int, ...]
    superdefect: int
    mid_h1_end: int
    nonemptiness_caveat: bool = True

    def to_json(self) -> dict:
        return {
            "rank": self.r,
            "points": self.n,
            "class_dims": list(self.class_dims),
            "naive_dim": self.naive_dim,
            "defect": self.defect,
            "superdefects": list(self.superdefects),
            "superdefect": self.superdefect,
            "mid_h1_end": self.mid_h1_end,
            "nonemptiness_caveat": self.nonemptiness_caveat,
        }


def _report_from_pmv(r: int, pmv: Sequence[Sequence[int]]) -> DimensionReport:
    n = len(pmv)
    dims = tuple(class_dim(r, p) for p in pmv)
    naive = sum(dims) - 2 * r * r + 2
    nus = [max(p) for p in pmv]
    d = (n - 2) * r - sum(nus)
    sigmas = tuple(dim - r * (r - nu) for dim, nu in zip(dims, nus))
    sigma = sum(sigmas)
    assert all(s >= 0 for s in sigmas), "superdefects are nonnegative"
    assert naive == 2 + r * d + sigma, "the two dimension formulas agree"
    return DimensionReport(r=r, n=n, class_dims=dims, naive_dim=naive,
                           defect=d, superdefects=sigmas, superdefect=sigma,
                           mid_h1_end=naive)


def dimension_report(vector: MonodromyVector) -> DimensionReport:
    return _report_from_pmv(vector.rank, vector.pmv())


def classify_dim2_pmv(r: int, pmv: Sequence[Sequence[int]]) -> Optional[str]:
    """Family tag for a PMV shape with naive dimension 2, else None.

    Precondition defect >= 0 (raises DefectPrecondition otherwise).
    Matching is on the PMV only, up to reordering of points and parts;
    eigenvalue values are irrelevant.
    """
    pmv = [tuple(sorted(p, reverse=True)) for p in pmv]
    n = len(pmv)
    d = (n - 2) * r - sum(p[0] for p in pmv)
    if d < 0:
        raise DefectPrecondition(f"defect {d} < 0")
    report = _report_from_pmv(r, pmv)
    if report.naive_dim != 2:
        return None
    # dimension 2 with d >= 0 forces d = 0 and all superdefects zero,
    # i.e. every point has all multiplicities equal
    assert report.defect == 0 and report.superdefect == 0
    assert all(len(set(p)) == 1 for p in pmv)
    key = tuple(sorted(len(p) for p in pmv))
    tag = FAMILY_TAGS.get(key)
    assert tag is not None, f"unlisted dimension-2 shape {pmv}"
    return tag


def classify_dim2(vector: MonodromyVector) -> Optional[str]:
    return classify_dim2_pmv(vector.rank, vector.pmv())


def middle_h1_dim(vector: MonodromyVector) -> int:
    """r(n-2) minus the total multiplicity of the identity eigenvalue.

    Requires at least one point whose class omits the identity (no local
    fixed vectors); without such a point the formula is not guaranteed
    and NoFixedVectorFreePoint is raised.
    """
    identity = GroupElement.identity(vector.mode)
    cofix = [g.multiplicity(identity) for g in vector]
    if all(c > 0 for c in cofix):
        raise NoFixedVectorFreePoint(
            "every point has identity eigenvalues; dimension formula not guaranteed")
    return vector.rank * (vector.n - 2) - sum(cofix)


# ---------------------------------------------------------------------------
# Exhaustive dimension-2 census
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _partitions(r: int) -> tuple[tuple[int, ...], ...]:
    """All partitions of r, parts in descending order."""
    out = []

    def rec(remaining, cap, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(cap, remaining), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(r, r, [])
    return tuple(out)


def dim2_census(max_rank: int, max_points: int,
                allow_scalar_points: bool = False) -> list[tuple[int, int, tuple]]:
    """All PMV multisets with defect >= 0 and naive dimension exactly 2.

    Scans every rank r <= max_rank and point count 3 <= n <= max_points.
    Scalar classes (the one-part partition, i.e. a puncture that is not
    a genuine singularity) are excluded by default: adding one to any
    solution yields another with the same invariants, so the census is
    stated for honest singularities.

    Returns (r, n, pmv) triples with the pmv sorted as a canonical
    multiset of partitions.
    """
    solutions = []
    for r in range(1, max_rank + 1):
        parts = [p for p in _partitions(r)
                 if allow_scalar_points or len(p) > 1]
        # Per-point data: (partition, class dim, max multiplicity).
        data = sorted(((p, class_dim(r, p), p[0]) for p in parts),
                      key=lambda t: -t[1])
        if not data:
            continue
        max_dim = data[0][1]
        for n in range(3, max_points + 1):
            target = 2 * r * r  # sum of class dims forced by naive_dim = 2
            nu_budget = (n - 2) * r  # defect >= 0

            # Sound pruning: sigma_i = dim_i - r^2 + r*nu_i >= 0 for every
            # partition (checked in the test suite for this range), and on
            # target the identities force sum(sigma_i) = 0; so any positive
            # partial sigma sum kills the branch.
            def rec(idx, count, dim_sum, nu_sum, sigma_sum, chosen):
                if count == n:
                    if dim_sum == target and nu_sum <= nu_budget:
                        solutions.append((r, n, tuple(sorted(chosen))))
                    return
                remaining = n - count
                if dim_sum + remaining * max_dim < target:
                    return
                for k in range(idx, len(data)):
                    p, dim, nu = data[k]
                    if dim_sum + dim + (remaining - 1) * dim < target:
                        break  # data sorted by dim descending
                    if dim_sum + dim > target:
                        continue
                    if nu_sum + nu + (remaining - 1) > nu_budget:
                        continue
                    sigma = dim - r * r + r * nu
                    if sigma_sum + sigma > 0:
                        continue
                    chosen.append(p)
                    rec(k, count + 1, dim_sum + dim, nu_sum + nu,
                        sigma_sum + sigma, chosen)
                    chosen.pop()

            rec(0, 0, 0, 0, 0, [])
    return solutions
