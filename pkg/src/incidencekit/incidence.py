"""Incidence matrices, degrees-of-freedom certification, double-counting
checks, bound-formula evaluation, and exponent fitting.

An incidence is exact vanishing of a curve's defining polynomial at a
point, over Q or Q(i).  Certification is a property of the given
arrangement, decided combinatorially with a hard enumeration cap -- never
sampled."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

import mpmath
import numpy as np

from .cr import iota, realify
from .poly import Coef, GaussianRational, MultiPoly, coef_from_obj, coef_to_obj

SUBSET_TABLE_CAP = 10**7
BOUND_PRECISION_DPS = 30  # ~100-bit significand, above the 64-bit floor


@dataclass(frozen=True)
class Configuration:
    """A point set plus a curve set over a declared ground field."""

    ground_field: str  # "R2" | "C2"
    points: tuple
    curves: tuple  # MultiPoly, num_vars matching the ground field
    metadata: dict = field(default_factory=dict)

    @staticmethod
    def build(ground_field, points, curves, metadata=None) -> "Configuration":
        if ground_field not in ("R2", "C2"):
            raise ValueError("ground field must be R2 or C2")
        seen_pts, pts = set(), []
        for p in points:
            key = tuple(
                GaussianRational.coerce(c) if ground_field == "C2" else Fraction(c)
                for c in p
            )
            if len(key) != 2:
                raise ValueError("points live in a plane")
            if key not in seen_pts:
                seen_pts.add(key)
                pts.append(key)
        seen_curves, cvs = set(), []
        for c in curves:
            if c.is_zero:
                raise ValueError("curves must be nonzero")
            if c.num_vars != 2:
                raise ValueError("curves are plane curves in 2 variables")
            key = c.normalized()
            if key not in seen_curves:
                seen_curves.add(key)
                cvs.append(c)
        return Configuration(
            ground_field, tuple(pts), tuple(cvs), dict(metadata or {})
        )

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.curves)

    def to_obj(self) -> dict:
        return {
            "field": self.ground_field,
            "points": [[coef_to_obj(GaussianRational.coerce(c))
                        if self.ground_field == "C2"
                        else coef_to_obj(Fraction(c)) for c in p]
                       for p in self.points],
            "curves": [c.to_obj() for c in self.curves],
            "metadata": self.metadata,
        }

    @staticmethod
    def from_obj(obj: dict) -> "Configuration":
        gf = obj["field"]
        points = [
            [coef_from_obj(c) for c in p] for p in obj["points"]
        ]
        curves = [MultiPoly.from_obj(c) for c in obj["curves"]]
        return Configuration.build(gf, points, curves, obj.get("metadata", {}))

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True, indent=1)

    @staticmethod
    def from_json(text: str) -> "Configuration":
        return Configuration.from_obj(json.loads(text))


@dataclass(frozen=True)
class IncidenceMatrix:
    m: int
    n: int
    incidences: frozenset  # of (point_index, curve_index)

    @property
    def count(self) -> int:
        return len(self.incidences)

    def curve_rows(self) -> list[tuple[int, ...]]:
        rows = [[] for _ in range(self.n)]
        for i, j in self.incidences:
            rows[j].append(i)
        return [tuple(sorted(r)) for r in rows]

    def to_csv(self) -> str:
        lines = ["point_index,curve_index"]
        for i, j in sorted(self.incidences):
            lines.append(f"{i},{j}")
        return "\n".join(lines) + "\n"


def build_matrix(config: Configuration, cross_check_embedding: bool = False) -> IncidenceMatrix:
    """Exact vanishing test per (point, curve) pair; optionally cross-checks
    complex incidences through the R^4 embedding."""
    pairs = set()
    embedded = None
    if cross_check_embedding and config.ground_field == "C2":
        embedded = [(realify(c), None) for c in config.curves]
    for i, p in enumerate(config.points):
        cache: dict = {}
        for j, curve in enumerate(config.curves):
            val = curve.evaluate(p, _cache=cache)
            hit = (
                val.is_zero if isinstance(val, GaussianRational) else val == 0
            )
            if hit:
                if embedded is not None:
                    pair = embedded[j][0]
                    q = iota(p)
                    assert pair.u.evaluate(q) == 0 and pair.v.evaluate(q) == 0
                pairs.add((i, j))
    return IncidenceMatrix(config.m, config.n, frozenset(pairs))


@dataclass(frozen=True)
class DofCertificate:
    k: int
    s: int
    status: str  # "certified" | "violated" | "indeterminate"
    witness: tuple | None = None  # see certify_dof
    detail: str = ""

    def to_obj(self) -> dict:
        return {
            "k": self.k,
            "s": self.s,
            "status": self.status,
            "witness": list(self.witness) if self.witness else None,
            "detail": self.detail,
        }


def certify_dof(M: IncidenceMatrix, k: int, s: int,
                table_cap: int = SUBSET_TABLE_CAP) -> DofCertificate:
    """Certify k degrees of freedom and multiplicity type s on the arrangement.

    Condition 1: every k-subset of points lies on at most s curves (only
    subsets incident to some curve can violate, so the table enumerates
    per-curve k-subsets).  Condition 2: every curve pair shares at most s
    incident points.  The first violation in deterministic (curve index,
    subset lex) order is returned as a witness."""
    if k < 1 or s < 1:
        raise ValueError("k and s must be positive")
    rows = M.curve_rows()
    table: dict[tuple, list[int]] = {}
    entries = 0
    for j, row in enumerate(rows):
        if len(row) < k:
            continue
        n_subsets = comb(len(row), k)
        entries += n_subsets
        if entries > table_cap:
            return DofCertificate(
                k, s, "indeterminate",
                detail=f"k-subset table exceeded cap {table_cap}",
            )
        for subset in itertools.combinations(row, k):
            curves_here = table.setdefault(subset, [])
            curves_here.append(j)
            if len(curves_here) > s:
                return DofCertificate(
                    k, s, "violated",
                    witness=("point-subset", subset, tuple(curves_here)),
                    detail=f"{len(curves_here)} curves through one {k}-subset",
                )
    for j1 in range(M.n):
        r1 = set(rows[j1])
        if len(r1) <= s:
            continue
        for j2 in range(j1 + 1, M.n):
            shared = r1.intersection(rows[j2])
            if len(shared) > s:
                return DofCertificate(
                    k, s, "violated",
                    witness=("curve-pair", (j1, j2), tuple(sorted(shared))),
                    detail=f"curves share {len(shared)} incident points",
                )
    return DofCertificate(k, s, "certified")


@dataclass(frozen=True)
class KstReport:
    lhs: int  # sum over curves of C(row degree, k)
    rhs: int  # s * C(m, k)
    holds: bool

    def to_obj(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def kst_double_count(M: IncidenceMatrix, k: int, s: int) -> KstReport:
    """Exact double counting of k-subsets with multiplicity: on a certified
    arrangement, sum_curves C(d_curve, k) <= s * C(m, k)."""
    lhs = sum(comb(len(row), k) for row in M.curve_rows())
    rhs = s * comb(M.m, k)
    return KstReport(lhs, rhs, lhs <= rhs)


@dataclass(frozen=True)
class BoundReport:
    m: int
    n: int
    k: int
    s: int
    eps: float
    measured_incidences: int
    ps_value: float
    ps_complex_value: float
    kst_value: float
    ratio_ps: float
    ratio_ps_complex: float
    kst_regime: bool  # n <= m^k
    precision_dps: int = BOUND_PRECISION_DPS

    def to_obj(self):
        return {
            "m": self.m, "n": self.n, "k": self.k, "s": self.s,
            "eps": self.eps, "I": self.measured_incidences,
            "ps_value": self.ps_value,
            "ps_complex_value": self.ps_complex_value,
            "kst_value": self.kst_value,
            "ratio_ps": self.ratio_ps,
            "ratio_ps_complex": self.ratio_ps_complex,
            "kst_regime": self.kst_regime,
            "precision_dps": self.precision_dps,
        }


def evaluate_bounds(m: int, n: int, k: int, s: int, eps: float, I: int) -> BoundReport:
    """The three incidence-bound formulas at stated precision.

    ps:         m^(k/(2k-1)) n^((2k-2)/(2k-1)) + m + n
    ps_complex: m^(k/(2k-1)+eps) n^((2k-2)/(2k-1)) + m + n
    kst:        m n^(1-1/k) + n
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if not 0 <= eps < 1:
        raise ValueError("eps must lie in [0, 1)")
    with mpmath.workdps(BOUND_PRECISION_DPS):
        mm, nn = mpmath.mpf(m), mpmath.mpf(n)
        a = mpmath.mpf(k) / (2 * k - 1)
        b = mpmath.mpf(2 * k - 2) / (2 * k - 1)
        ps = mm**a * nn**b + mm + nn
        psc = mm ** (a + mpmath.mpf(eps)) * nn**b + mm + nn
        kst = mm * nn ** (1 - mpmath.mpf(1) / k) + nn
        return BoundReport(
            m, n, k, s, eps, I,
            float(ps), float(psc), float(kst),
            float(I / ps), float(I / psc),
            n <= m**k,
        )


@dataclass(frozen=True)
class ExponentFit:
    a: float  # exponent of m
    b: float  # exponent of n
    c: float  # log constant
    residual: float
    combined: bool  # degenerate design: a is the single combined exponent

    def predict(self, m: int, n: int) -> float:
        import math

        return math.exp(self.a * math.log(m) + self.b * math.log(n) + self.c)

    def to_obj(self):
        return {"a": self.a, "b": self.b, "c": self.c,
                "residual": self.residual, "combined": self.combined}


def exponent_fit(series: Sequence[tuple[int, int, int]]) -> ExponentFit:
    """Least-squares fit log I ~ a log m + b log n + c.

    When all (log m, log n) lie on an affine line (a family ray), the design
    is degenerate and a single combined exponent of log m is fitted with
    b = 0."""
    if len(series) < 3:
        raise ValueError("need at least 3 data points")
    if any(i < 1 for _, _, i in series):
        raise ValueError("all incidence counts must be >= 1")
    lm = np.log([float(m) for m, _, _ in series])
    ln = np.log([float(n) for _, n, _ in series])
    li = np.log([float(i) for _, _, i in series])
    design = np.column_stack([lm, ln, np.ones(len(series))])
    if np.linalg.matrix_rank(design, tol=1e-9) < 3:
        design2 = np.column_stack([lm, np.ones(len(series))])
        sol, *_ = np.linalg.lstsq(design2, li, rcond=None)
        resid = float(np.linalg.norm(design2 @ sol - li))
        return ExponentFit(float(sol[0]), 0.0, float(sol[1]), resid, True)
    sol, *_ = np.linalg.lstsq(design, li, rcond=None)
    resid = float(np.linalg.norm(design @ sol - li))
    return ExponentFit(float(sol[0]), float(sol[1]), float(sol[2]), resid, False)


def project_generic(points: Sequence[Sequence], seed: int = 0, budget: int = 100):
    """Seeded random rational 2x4 projection, regenerated until exactly
    injective on the given points."""
    import random

    pts = [tuple(Fraction(c) for c in p) for p in points]
    for attempt in range(budget):
        rng = random.Random(seed * 1000003 + attempt)
        matrix = [
            [Fraction(rng.randrange(-2**16, 2**16), 2**8) for _ in range(4)]
            for _ in range(2)
        ]
        images = [
            tuple(sum(a * c for a, c in zip(row, p)) for row in matrix)
            for p in pts
        ]
        seen: dict = {}
        collision = None
        for idx, img in enumerate(images):
            if img in seen:
                collision = (seen[img], idx)
                break
            seen[img] = idx
        if collision is None:
            return matrix, images, True
    raise RuntimeError(
        f"no injective projection found in {budget} attempts; "
        f"last collision {collision}"
    )
