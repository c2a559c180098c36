"""Discrete polynomial partitioning via iterated ham-sandwich bisection on
Veronese lifts.

The bisecting hyperplanes are found numerically (annealed smoothed-imbalance
descent) but every reported count is re-verified by exact sign evaluation
over Q; coefficients are snapped to rationals before anything downstream
sees them.  Sign classes (the vector of bisector signs at a point) stand in
for connected cells: they refine unions of cells and inherit the
few-points-per-class guarantee directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from .poly import MultiPoly
from .roots import isolate_real_roots

SNAP_DENOMINATOR = 2**32


class BudgetExhaustedError(RuntimeError):
    """Bisection search ran out of restarts; carries the best attempt."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


def monomial_exponents(dim: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples of total degree 1..degree, ordered by (degree,
    lexicographically descending) -- e.g. d=2, t=2: x, y, x^2, xy, y^2."""
    out = []
    for t in range(1, degree + 1):
        level = [
            e
            for e in itertools.product(range(t + 1), repeat=dim)
            if sum(e) == t
        ]
        level.sort(reverse=True)
        out.extend(level)
    return out


def veronese_lift(point: Sequence, degree: int) -> tuple[Fraction, ...]:
    """All monomials of degree 1..degree at the point; length C(d+t,d)-1."""
    if degree < 1:
        raise ValueError("lift degree must be >= 1")
    pt = [Fraction(c) for c in point]
    vals = []
    for exp in monomial_exponents(len(pt), degree):
        v = Fraction(1)
        for x, e in zip(pt, exp):
            if e:
                v *= x**e
        vals.append(v)
    return tuple(vals)


def lift_dimension(dim: int, degree: int) -> int:
    return comb(dim + degree, dim) - 1


def min_lift_degree(dim: int, n_sets: int) -> int:
    t = 1
    while lift_dimension(dim, t) < n_sets:
        t += 1
    return t


def hyperplane_poly(coeffs: Sequence[Fraction], dim: int, degree: int) -> MultiPoly:
    """Hyperplane (c0, c1..cD) in lifted space as a polynomial in R^dim."""
    exps = monomial_exponents(dim, degree)
    terms = {(0,) * dim: Fraction(coeffs[0])}
    for exp, c in zip(exps, coeffs[1:]):
        c = Fraction(c)
        if c:
            terms[exp] = c
    return MultiPoly(dim, terms)


def _sign(x: Fraction) -> int:
    return 0 if x == 0 else (1 if x > 0 else -1)


@dataclass
class CutResult:
    coeffs: tuple[Fraction, ...]  # (c0, c1..cD)
    counts: list[tuple[int, int, int]]  # per set: (neg, zero, pos)
    strict_ok: bool  # every side <= ceil(n/2)
    delta_ok: bool
    restarts_used: int


def _exact_projections(lifted_sets, normal):
    """normal excludes the constant term."""
    return [
        [sum(c * x for c, x in zip(normal, p)) for p in s] for s in lifted_sets
    ]


def _counts_from_projections(projs, offset):
    counts = []
    for ps in projs:
        neg = pos = zero = 0
        for v in ps:
            s = _sign(v + offset)
            if s > 0:
                pos += 1
            elif s < 0:
                neg += 1
            else:
                zero += 1
        counts.append((neg, zero, pos))
    return counts


def _strict_ok(counts):
    return all(
        max(neg, pos) <= (neg + zero + pos + 1) // 2 for neg, zero, pos in counts
    )


def _delta_ok(counts, delta):
    for neg, zero, pos in counts:
        n = neg + zero + pos
        if max(neg, pos) > -(-n // 2) * (1 + delta):
            return False
    return True


def _snap(x: float, limit: int = SNAP_DENOMINATOR) -> Fraction:
    return Fraction(x).limit_denominator(limit)


def _best_offset(projs, targets):
    """Exact 1-D scan for the constant term minimizing total side overflow,
    then max overflow; deterministic tie-break on the smaller threshold.

    Implemented as a single sweep over the globally sorted projection values
    (exact comparisons only in the sort), so the cost is O(n log n) rather
    than O(n * candidates)."""
    events: list[tuple[Fraction, int]] = []
    for k, ps in enumerate(projs):
        events.extend((v, k) for v in ps)
    if not events:
        return Fraction(0)
    events.sort(key=lambda e: e[0])
    sizes = [len(ps) for ps in projs]
    less = [0] * len(projs)
    best = None

    def consider(total_over, max_over, zeros, tau):
        nonlocal best
        key = (total_over, max_over, zeros, tau)
        if best is None or key < best:
            best = key

    def score(eq):
        total_over = 0
        max_over = 0
        zeros = 0
        for k, tgt in enumerate(targets):
            neg = less[k]
            z = eq[k] if eq else 0
            pos = sizes[k] - neg - z
            zeros += z
            over = max(neg - tgt, 0) + max(pos - tgt, 0)
            total_over += over
            max_over = max(max_over, over)
        return total_over, max_over, zeros

    # gap before the smallest value
    consider(*score(None), events[0][0] - 1)
    i = 0
    n_events = len(events)
    while i < n_events:
        v = events[i][0]
        eq = [0] * len(projs)
        j = i
        while j < n_events and events[j][0] == v:
            eq[events[j][1]] += 1
            j += 1
        # threshold hitting the value exactly
        consider(*score(eq), v)
        for k, e in enumerate(eq):
            less[k] += e
        # gap strictly after v: midpoint to the next value, or v + 1 at the end
        tau = (v + events[j][0]) / 2 if j < n_events else v + 1
        consider(*score(None), tau)
        i = j
    return -best[3]


def _best_pencil_t(avals, bvals, targets):
    """Exact 1-D search over the hyperplane pencil c + t*g.

    Each point's value along the pencil is a_p + t*b_p, so its side flips at
    t = -a_p/b_p.  A single sweep over the sorted flip values yields, for every
    candidate t, exact per-set (neg, zero, pos) counts; the best key
    (total overflow, max overflow, points on surface, |t|) is returned, or
    None when no point depends on t."""
    n_sets = len(avals)
    neg = [0] * n_sets
    pos = [0] * n_sets
    zer = [0] * n_sets
    events: list[tuple[Fraction, int, int]] = []
    for k, (avs, bvs) in enumerate(zip(avals, bvals)):
        for a, b in zip(avs, bvs):
            if b == 0:
                s = _sign(a)
                if s > 0:
                    pos[k] += 1
                elif s < 0:
                    neg[k] += 1
                else:
                    zer[k] += 1
            else:
                events.append((-a / b, k, 1 if b > 0 else -1))
                # side as t -> -infinity is -sign(b)
                if b > 0:
                    neg[k] += 1
                else:
                    pos[k] += 1
    if not events:
        return None
    events.sort(key=lambda e: e[0])
    best = None

    def consider(tau):
        nonlocal best
        total_over = 0
        max_over = 0
        zeros = 0
        for k in range(n_sets):
            zeros += zer[k]
            over = max(neg[k] - targets[k], 0) + max(pos[k] - targets[k], 0)
            total_over += over
            if over > max_over:
                max_over = over
        key = (total_over, max_over, zeros, abs(tau), tau)
        if best is None or key < best:
            best = key

    consider(events[0][0] - 1)
    i = 0
    n_events = len(events)
    while i < n_events:
        t = events[i][0]
        j = i
        moved = []
        while j < n_events and events[j][0] == t:
            _, k, new_sign = events[j]
            if new_sign > 0:
                neg[k] -= 1
            else:
                pos[k] -= 1
            zer[k] += 1
            moved.append((k, new_sign))
            j += 1
        consider(t)
        for k, new_sign in moved:
            zer[k] -= 1
            if new_sign > 0:
                pos[k] += 1
            else:
                neg[k] += 1
        consider((t + events[j][0]) / 2 if j < n_events else t + 1)
        i = j
    return best


def _pencil_polish(lifted, coeffs, targets, max_rounds=8):
    """Exact coordinate descent over hyperplane coefficients.

    Sweeps each coefficient direction e_j in turn with _best_pencil_t and
    applies any move that strictly improves the overflow key; every step is
    exact, so the key decreases monotonically and near-miss cuts (a side one
    or two points over target) are repaired deterministically.  Returns the
    polished coefficients and their exact per-set counts."""
    dim = len(coeffs) - 1
    aug = [[(Fraction(1),) + tuple(p) for p in s] for s in lifted]
    avals = [
        [sum(c * x for c, x in zip(coeffs, q)) for q in s] for s in aug
    ]

    def key_of(counts):
        total_over = 0
        max_over = 0
        zeros = 0
        for (neg, zero, pos), tgt in zip(counts, targets):
            zeros += zero
            over = max(neg - tgt, 0) + max(pos - tgt, 0)
            total_over += over
            if over > max_over:
                max_over = over
        return (total_over, max_over, zeros)

    def counts_now():
        out = []
        for avs in avals:
            neg = sum(1 for a in avs if a < 0)
            zero = sum(1 for a in avs if a == 0)
            out.append((neg, zero, len(avs) - neg - zero))
        return out

    counts = counts_now()
    current = key_of(counts)
    # axis directions are cheap and usually enough; pairwise combinations
    # only run when a full axis round stalls, to escape plateaus where no
    # single-coefficient move helps
    axis: list[tuple[tuple[int, Fraction], ...]] = [
        ((j, Fraction(1)),) for j in range(dim + 1)
    ]
    pairs: list[tuple[tuple[int, Fraction], ...]] = []
    for j1 in range(dim + 1):
        for j2 in range(j1 + 1, dim + 1):
            pairs.append(((j1, Fraction(1)), (j2, Fraction(1))))
            pairs.append(((j1, Fraction(1)), (j2, Fraction(-1))))

    def sweep_round(directions):
        nonlocal coeffs, avals, counts, current
        improved = False
        for direction in directions:
            bvals = [
                [sum(w * q[j] for j, w in direction) for q in s] for s in aug
            ]
            found = _best_pencil_t(avals, bvals, targets)
            if found is None:
                continue
            total_over, max_over, zeros, _, t = found
            if (total_over, max_over, zeros) >= current or t == 0:
                continue
            trial = list(coeffs)
            for j, w in direction:
                trial[j] += t * w
            if all(c == 0 for c in trial[1:]):
                continue
            coeffs = trial
            avals = [
                [a + t * b for a, b in zip(avs, bvs)]
                for avs, bvs in zip(avals, bvals)
            ]
            counts = counts_now()
            current = key_of(counts)
            improved = True
            if _strict_ok(counts):
                return improved
        return improved

    for _ in range(max_rounds):
        if _strict_ok(counts):
            break
        if sweep_round(axis):
            continue
        if not sweep_round(pairs):
            break
    return coeffs, counts


def _descend(arrays, dim, rng, sigma_schedule):
    """Annealed smoothed-imbalance descent; returns a unit normal in R^{D+1}."""
    from scipy.optimize import minimize

    h = rng.standard_normal(dim)
    stacked = np.vstack([a for a in arrays if len(a)])
    offsets = np.cumsum([0] + [len(a) for a in arrays if len(a)])[:-1]

    def objective(hv, sigma):
        nv = np.linalg.norm(hv)
        if nv < 1e-12:
            return 1e18
        s = np.tanh((stacked @ (hv / nv)) / sigma)
        sums = np.add.reduceat(s, offsets) if len(s) else np.zeros(0)
        return float(np.sum(sums**2)) + 1e-9 * float(np.sum(hv**2))

    for sigma in sigma_schedule:
        res = minimize(
            objective,
            h,
            args=(sigma,),
            method="Powell",
            options={"maxiter": 60, "xtol": 1e-8, "ftol": 1e-10},
        )
        h = res.x
    n = np.linalg.norm(h)
    return h / n if n > 0 else h


def ham_sandwich_bisect(
    sets: Sequence[Sequence[Sequence]],
    delta: float = 0.1,
    restarts: int = 200,
    seed: int = 0,
) -> CutResult:
    """Simultaneously bisect finite point sets in Q^D by an affine hyperplane.

    Strategy: numeric descent for the normal direction, exact rational scan
    for the offset, then exact coordinate-descent polish over the hyperplane
    coefficients (each move is an exact 1-D pencil sweep, so the imbalance
    key decreases monotonically).  All counts exact; failure to reach the
    imbalance target within the restart budget raises BudgetExhaustedError
    carrying the best cut found.
    """
    lifted = [[tuple(Fraction(c) for c in p) for p in s] for s in sets]
    dim = len(lifted[0][0]) if lifted and lifted[0] else 0
    if any(len(p) != dim for s in lifted for p in s):
        raise ValueError("all points must share a dimension")
    # more sets than dimensions leaves no guarantee of a common bisector,
    # but the exact offset scan can still find one (interleaved sets); let
    # the restart budget decide instead of rejecting up front
    sizes = [len(s) for s in lifted]
    targets = [-(-n // 2) for n in sizes]  # ceil(n/2)

    arrays = [
        np.array([[1.0] + [float(c) for c in p] for p in s], dtype=float)
        if s
        else np.zeros((0, dim + 1))
        for s in lifted
    ]
    aug = [[Fraction(1)] + list(p) for s in lifted for p in s]
    scale = max((abs(x) for row in aug for x in row), default=1.0)
    sigma_schedule = [float(scale) * s for s in (0.5, 0.1, 0.02, 0.004)]

    rng = np.random.default_rng(seed)
    best: CutResult | None = None

    for attempt in range(max(restarts, 1)):
        h = _descend(arrays, dim + 1, rng, sigma_schedule)
        normal = [_snap(float(c)) for c in h[1:]]
        if all(c == 0 for c in normal):
            continue
        projs = _exact_projections(lifted, normal)
        offset = _best_offset(projs, targets)
        coeffs = [offset] + normal
        counts = _counts_from_projections(projs, offset)
        if not _strict_ok(counts):
            coeffs, counts = _pencil_polish(lifted, coeffs, targets)

        result = CutResult(
            tuple(coeffs),
            counts,
            _strict_ok(counts),
            _delta_ok(counts, delta),
            attempt + 1,
        )
        if result.strict_ok:
            return result
        if best is None or _badness(result, targets) < _badness(best, targets):
            best = result
        # give strict balance a fair shot, then settle for the tolerance
        if best.delta_ok and attempt + 1 >= min(60, restarts):
            return best

    if best is not None and best.delta_ok:
        return best
    raise BudgetExhaustedError(
        f"no cut met the imbalance tolerance after {restarts} restarts", best
    )


def _badness(result: CutResult, targets):
    return max(
        max(neg, pos) - t for (neg, zero, pos), t in zip(result.counts, targets)
    )


# -- iterated partitioning -----------------------------------------------------


@dataclass
class PartitionResult:
    dim: int
    r: int
    delta: float
    seed: int
    bisectors: list[MultiPoly]
    stage_degrees: list[int]
    sign_assignment: list[tuple[int, ...]]  # per input point
    occupancy: dict[tuple[int, ...], int]
    on_surface: int
    achieved_classes: int

    @property
    def product(self) -> MultiPoly:
        out = MultiPoly.constant(1, self.dim)
        for b in self.bisectors:
            out = out * b
        return out

    @property
    def total_degree(self) -> int:
        return sum(self.stage_degrees)

    def to_obj(self) -> dict:
        return {
            "dim": self.dim,
            "r": self.r,
            "delta": self.delta,
            "seed": self.seed,
            "stage_degrees": self.stage_degrees,
            "bisectors": [b.to_obj() for b in self.bisectors],
            "sign_assignment": ["".join(_sign_char(s) for s in v)
                                 for v in self.sign_assignment],
            "occupancy": {
                "".join(_sign_char(s) for s in k): v
                for k, v in sorted(self.occupancy.items())
            },
            "on_surface": self.on_surface,
            "achieved_classes": self.achieved_classes,
        }


def _sign_char(s: int) -> str:
    return {1: "+", -1: "-", 0: "0"}[s]


# Bisecting many sets with a single cut degrades sharply as the set count
# grows (the search space is high-dimensional while strict halving demands
# one-point precision per set), so each cut handles at most this many sets;
# a stage with more classes uses several cuts of smaller degree instead.
GROUP_CAP = 4


def stage_schedule(dim: int, r: int) -> list[list[int]]:
    """Lift degrees of the cuts per stage.

    Stage j halves the 2^(j-1) classes of the previous stages; classes are
    grouped GROUP_CAP at a time and each group receives its own cut of the
    minimal lift degree, so every class is strictly halved by exactly one cut
    of its stage.  Scheduling stops when the cumulative product degree would
    exceed r or the class count reaches r^dim."""
    stages: list[list[int]] = []
    total = 0
    stage = 0
    while 2**stage < r**dim:
        k = 2**stage
        cuts = []
        while k > 0:
            g = min(k, GROUP_CAP)
            cuts.append(min_lift_degree(dim, g))
            k -= g
        if total + sum(cuts) > r:
            break
        stages.append(cuts)
        total += sum(cuts)
        stage += 1
    return stages


def polynomial_partition(
    points: Sequence[Sequence],
    r: int,
    delta: float = 0.1,
    restarts: int = 200,
    seed: int = 0,
) -> PartitionResult:
    """Iterated simultaneous bisection; deg(product) <= r; occupancy verified
    by exact recount."""
    if r < 2:
        raise ValueError("partition parameter r must be >= 2")
    pts = [tuple(Fraction(c) for c in p) for p in points]
    if not pts:
        raise ValueError("no points to partition")
    dim = len(pts[0])
    stages = stage_schedule(dim, r)
    bisectors: list[MultiPoly] = []
    cut_degrees: list[int] = []
    # classes hold point indices; removed indices are on some bisector
    classes: list[list[int]] = [list(range(len(pts)))]
    cut_index = 0

    for _ in stages:
        # group the surviving classes and halve each group with its own cut
        groups = [
            classes[g : g + GROUP_CAP] for g in range(0, len(classes), GROUP_CAP)
        ]
        next_classes: list[list[int]] = []
        for group in groups:
            t = min_lift_degree(dim, len(group))
            sets = [[veronese_lift(pts[i], t) for i in c] for c in group]
            cut = ham_sandwich_bisect(
                sets,
                delta=delta,
                restarts=restarts,
                seed=seed * 1_000_003 + cut_index,
            )
            cut_index += 1
            bisector = hyperplane_poly(cut.coeffs, dim, t)
            bisectors.append(bisector)
            cut_degrees.append(t)
            # exact recount, never trusting the search
            for c in group:
                pos_idx, neg_idx = [], []
                for i in c:
                    s = _sign(bisector.evaluate(pts[i]))
                    if s > 0:
                        pos_idx.append(i)
                    elif s < 0:
                        neg_idx.append(i)
                if neg_idx:
                    next_classes.append(neg_idx)
                if pos_idx:
                    next_classes.append(pos_idx)
        classes = next_classes

    # joint sign vector of every point across all cuts, recomputed exactly
    assignment = [
        tuple(_sign(b.evaluate(p)) for b in bisectors) for p in pts
    ]
    occupancy: dict[tuple[int, ...], int] = {}
    surface_count = 0
    for v in assignment:
        if 0 in v:
            surface_count += 1
        else:
            occupancy[v] = occupancy.get(v, 0) + 1
    return PartitionResult(
        dim=dim,
        r=r,
        delta=delta,
        seed=seed,
        bisectors=bisectors,
        stage_degrees=cut_degrees,
        sign_assignment=assignment,
        occupancy=occupancy,
        on_surface=surface_count,
        achieved_classes=len(occupancy),
    )


def sign_class(point: Sequence, result: PartitionResult) -> tuple[int, ...]:
    p = [Fraction(c) for c in point]
    return tuple(_sign(b.evaluate(p)) for b in result.bisectors)


# -- curve crossing statistics --------------------------------------------------


@dataclass
class CrossingReport:
    contained: bool
    exact: bool  # exact root isolation (lines) vs sampled lower bound
    segments: int  # root count + 1 along the curve (exact mode)
    classes_visited: int
    bound: int | None = None  # deg(product) + 1 in exact mode


def line_crossings(line: MultiPoly, result: PartitionResult) -> CrossingReport:
    """Exact sign-class visits of a planar line across the partition, via real
    root isolation of the restricted product polynomial."""
    if line.num_vars != 2 or line.total_degree != 1:
        raise ValueError("expected a planar line (degree-1 polynomial in x, y)")
    if result.dim != 2:
        raise ValueError("partition is not planar")
    a = line.terms.get((1, 0), Fraction(0))
    b = line.terms.get((0, 1), Fraction(0))
    c = line.terms.get((0, 0), Fraction(0))
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if b != 0:
        p0 = (Fraction(0), -c / b)
    else:
        p0 = (-c / a, Fraction(0))
    d = (-b, a)
    t = MultiPoly.variable(0, 1)
    x_t = MultiPoly.constant(p0[0], 1) + t * d[0]
    y_t = MultiPoly.constant(p0[1], 1) + t * d[1]
    restricted = [bi.substitute([x_t, y_t]) for bi in result.bisectors]
    if any(rb.is_zero for rb in restricted):
        return CrossingReport(True, True, 0, 0)
    product = MultiPoly.constant(1, 1)
    for rb in restricted:
        product = product * rb
    if product.total_degree == 0:
        roots: list = []
    else:
        roots = isolate_real_roots(product)
    samples = _gap_samples(roots)
    visited = []
    for tv in samples:
        vec = tuple(_sign(rb.evaluate([tv])) for rb in restricted)
        if vec not in visited:
            visited.append(vec)
    return CrossingReport(
        False,
        True,
        len(roots) + 1,
        len(visited),
        bound=result.total_degree + 1,
    )


def _gap_samples(intervals) -> list[Fraction]:
    """Rational points strictly between (and outside) disjoint sorted root
    intervals: one sample per gap."""
    if not intervals:
        return [Fraction(0)]
    samples = [intervals[0][0] - 1]
    for (lo1, hi1), (lo2, hi2) in zip(intervals, intervals[1:]):
        samples.append((hi1 + lo2) / 2)
    samples.append(intervals[-1][1] + 1)
    return samples


def sampled_crossings(
    points: Sequence[Sequence], result: PartitionResult
) -> CrossingReport:
    """Lower bound on classes visited by a parametrized curve: distinct sign
    vectors over the supplied exact sample points (zero signs excluded)."""
    seen = set()
    for p in points:
        vec = sign_class(p, result)
        if 0 not in vec:
            seen.add(vec)
    return CrossingReport(False, False, len(seen), len(seen))
