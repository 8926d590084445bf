"""Monte-Carlo q-index integrals over a sampled manifold.

A :class:`ManifoldSample` is a fixed quadrature: points with weights, each
carrying a curvature tensor and an optional twist form.  For each point the
inner expectation over (simplex, product-of-spheres) draws of

    1_{index q}(form) * det(form),   form = g_k(x, u)  (or the twisted
    renormalization (k r / H_k) g_k + Theta_F when a twist is present)

is estimated by vectorized Monte Carlo, weighted-summed over points, and
compared against the quadrature version of the limiting index integral of
eta.  The comparison is normalized through the exact rational I(k, r, n)
so that normalized_deviation should decay like 1/log k.

Determinism: every point gets its own counter-based stream keyed by
(seed, point id); draws are made in fixed-size chunks at the largest k of a
study and re-used for smaller k (common random numbers: normalizing the
first k of the k_max gamma variables is again an exact symmetric Dirichlet
draw).  Aggregation over points follows the sample's point order, so the
result is bit-identical for any worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .curvature import CurvatureTensor, TwistForm, eta, g_k_batch
from .hermitian import HermitianForm, signed_index_det
from .jet_combinatorics import harmonic, ikrn_exact
from .measures import sample_sphere_batch
from .rng import stream

__all__ = [
    "ManifoldPoint",
    "ManifoldSample",
    "MorseRow",
    "MorseReport",
    "eta_index_integral",
    "reduced_morse_integral",
    "full_morse_constant",
    "convergence_study",
    "twist_delta",
    "default_workers",
]

# fixed inner-MC chunk so that chunked accumulation (and hence the floating
# result) does not depend on the total sample count's factorization
_CHUNK = 16384


def default_workers() -> int:
    env = os.environ.get("JETMORSE_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class ManifoldPoint:
    id: str
    tensor: CurvatureTensor
    weight: float
    twist: Optional[TwistForm] = None

    def __post_init__(self):
        if self.weight <= 0:
            raise ValueError("point weights must be positive")
        if self.twist is not None and self.twist.n != self.tensor.n:
            raise ValueError("twist dimension does not match tensor")


@dataclass(frozen=True)
class ManifoldSample:
    """A finite quadrature on the base manifold; weights sum to total_volume."""

    points: tuple
    total_volume: float = 1.0

    def __post_init__(self):
        pts = tuple(self.points)
        if not pts:
            raise ValueError("sample needs at least one point")
        n, r = pts[0].tensor.n, pts[0].tensor.r
        for p in pts:
            if (p.tensor.n, p.tensor.r) != (n, r):
                raise ValueError("all tensors must share (n, r)")
        if len({p.id for p in pts}) != len(pts):
            raise ValueError("point ids must be unique")
        w = math.fsum(p.weight for p in pts)
        if abs(w - self.total_volume) > 1e-9 * max(1.0, abs(self.total_volume)):
            raise ValueError("weights must sum to the stated total volume")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points[0].tensor.n

    @property
    def r(self) -> int:
        return self.points[0].tensor.r

    @property
    def has_twist(self) -> bool:
        return any(p.twist is not None for p in self.points)


@dataclass(frozen=True)
class MorseRow:
    k: int
    q: int
    reduced_estimate: float
    std_error: float
    eta_integral: float
    normalized_deviation: float
    predicted_decay: float
    degenerate_fraction: float
    log_full_constant: float
    full_constant: Fraction = field(repr=False, default=Fraction(0))


_CSV_HEADER = ("k,q,reduced_estimate,std_error,eta_integral,"
               "normalized_deviation,degenerate_fraction,log_full_constant")


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


@dataclass(frozen=True)
class MorseReport:
    rows: tuple

    def __post_init__(self):
        rows = tuple(self.rows)
        keys = [(r.k, r.q) for r in rows]
        if len(set(keys)) != len(keys):
            raise ValueError("rows must be keyed uniquely by (k, q)")
        if any(r.std_error < 0 for r in rows):
            raise ValueError("standard errors must be nonnegative")
        object.__setattr__(self, "rows", rows)

    def to_csv(self) -> str:
        lines = [_CSV_HEADER]
        for r in self.rows:
            lines.append(",".join([
                str(r.k), str(r.q), _fmt(r.reduced_estimate), _fmt(r.std_error),
                _fmt(r.eta_integral), _fmt(r.normalized_deviation),
                _fmt(r.degenerate_fraction), _fmt(r.log_full_constant),
            ]))
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        rows = []
        for r in self.rows:
            rows.append({
                "k": r.k, "q": r.q,
                "reduced_estimate": r.reduced_estimate,
                "std_error": r.std_error,
                "eta_integral": r.eta_integral,
                "normalized_deviation": r.normalized_deviation,
                "predicted_decay": r.predicted_decay,
                "degenerate_fraction": r.degenerate_fraction,
                "log_full_constant": r.log_full_constant,
                "full_constant": {"num": str(r.full_constant.numerator),
                                  "den": str(r.full_constant.denominator)},
            })
        return {"rows": rows}


def eta_index_integral(M: ManifoldSample, q: int, tol: float) -> float:
    """Quadrature of the limiting index integral: sum_p w_p 1_{eta,q} det(eta + twist)."""
    if not 0 <= q <= M.n:
        raise ValueError("q must lie in [0, n]")
    terms = []
    for p in M.points:
        form = eta(p.tensor)
        if p.twist is not None:
            form = HermitianForm(form.entries + p.twist.theta_F.entries)
        terms.append(p.weight * signed_index_det(form, q, tol))
    return math.fsum(terms)


def full_morse_constant(n: int, k: int, r: int) -> tuple[Fraction, float]:
    """Prefactor (n+kr-1)! / (n! (k!)^r (kr-1)!) as exact rational and natural log."""
    if n < 0 or k < 1 or r < 1:
        raise ValueError("require n >= 0, k >= 1, r >= 1")
    exact = Fraction(math.factorial(n + k * r - 1),
                     math.factorial(n) * math.factorial(k) ** r
                     * math.factorial(k * r - 1))
    log = (math.lgamma(n + k * r) - math.lgamma(n + 1)
           - r * math.lgamma(k + 1) - math.lgamma(k * r))
    return exact, log


def twist_delta(k: int, r: int) -> Fraction:
    """Exact twist amplitude H_k / (k r)."""
    if k < 1 or r < 1:
        raise ValueError("k and r must be >= 1")
    return harmonic(k) / (k * r)


def _index_stats(lam: np.ndarray, q_list: Sequence[int], tol: float):
    """Per-q (sum, sum of squares) of 1_{index q} det and the degenerate count.

    ``lam`` has shape (m, n): ascending eigenvalues of m sampled forms.
    """
    n = lam.shape[1]
    plus = np.sum(lam > tol, axis=1)
    minus = np.sum(lam < -tol, axis=1)
    det = np.prod(lam, axis=1)
    degen = int(np.sum(plus + minus < n))
    out = []
    for q in q_list:
        mask = (minus == q) & (plus == n - q)
        vals = np.where(mask, det, 0.0)
        out.append((float(vals.sum()), float(np.dot(vals, vals))))
    return out, degen


def _point_study(point: ManifoldPoint, k_list, q_list, n_samples, seed, tol):
    """Inner MC for one quadrature point, all k and q at once.

    Returns ({(k, q): (mean, se)}, {k: degenerate_fraction}).
    """
    t = point.tensor
    r = t.r
    k_max = max(k_list)
    rng = stream(seed, "morse", point.id)
    s1 = {(k, q): 0.0 for k in k_list for q in q_list}
    s2 = dict.fromkeys(s1, 0.0)
    degen = dict.fromkeys(k_list, 0)
    done = 0
    while done < n_samples:
        m = min(_CHUNK, n_samples - done)
        g = rng.gamma(shape=r, size=(m, k_max))
        u = sample_sphere_batch(r, (m, k_max), rng)
        for k in k_list:
            x = g[:, :k] / g[:, :k].sum(axis=1, keepdims=True)
            forms = g_k_batch(t, x, u[:, :k])
            if point.twist is not None:
                factor = (k * r) / float(harmonic(k))
                forms = factor * forms + point.twist.theta_F.entries
            lam = np.linalg.eigvalsh(forms)
            stats, d = _index_stats(lam, q_list, tol)
            degen[k] += d
            for q, (a, b) in zip(q_list, stats):
                s1[(k, q)] += a
                s2[(k, q)] += b
        done += m
    out = {}
    m = n_samples
    for key in s1:
        mean = s1[key] / m
        var = max(0.0, (s2[key] - m * mean * mean) / (m - 1))
        out[key] = (mean, math.sqrt(var / m))
    return out, {k: degen[k] / m for k in k_list}


def _run_points(M, k_list, q_list, n_samples, seed, tol, workers):
    workers = workers or default_workers()
    if workers == 1 or len(M.points) == 1:
        results = [_point_study(p, k_list, q_list, n_samples, seed, tol)
                   for p in M.points]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_point_study, p, k_list, q_list,
                                   n_samples, seed, tol) for p in M.points]
            results = [f.result() for f in futures]
    est, var, degen = {}, {}, {}
    for k in k_list:
        frac_terms = []
        for p, (stats, dfrac) in zip(M.points, results):
            frac_terms.append(p.weight * dfrac[k])
        degen[k] = math.fsum(frac_terms) / M.total_volume
        for q in q_list:
            est[(k, q)] = math.fsum(
                p.weight * stats[(k, q)][0]
                for p, (stats, _) in zip(M.points, results))
            var[(k, q)] = math.fsum(
                (p.weight * stats[(k, q)][1]) ** 2
                for p, (stats, _) in zip(M.points, results))
    se = {key: math.sqrt(v) for key, v in var.items()}
    return est, se, degen


def reduced_morse_integral(M: ManifoldSample, k: int, q: int, n_samples: int,
                           seed: int, tol: float,
                           workers: Optional[int] = None) -> tuple[float, float]:
    """MC estimate of sum_p w_p E[1_{form,q} det(form)] with form = g_k (or eta_k).

    Returns (estimate, std_error).  q > n returns (0, 0) exactly: an n x n
    form cannot have index exceeding n.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    if q < 0:
        raise ValueError("q must be nonnegative")
    if q > M.n:
        return 0.0, 0.0
    est, se, _ = _run_points(M, [k], [q], n_samples, seed, tol, workers)
    return est[(k, q)], se[(k, q)]


def convergence_study(M: ManifoldSample, k_list: Sequence[int], q,
                      n_samples: int, seed: int, tol: float,
                      workers: Optional[int] = None) -> MorseReport:
    """Reduced estimates for every k in ascending k_list, compared to eta's integral.

    ``q`` may be a single index or a sequence.  For untwisted samples
    normalized_deviation = |estimate * r^n / I(k, r, n) - eta_integral|;
    with a twist the renormalized form already has expectation
    eta + Theta_F, so the deviation is |estimate - eta_integral| instead.
    predicted_decay is C / log k with C matched on the first k.
    """
    k_list = [int(k) for k in k_list]
    if k_list != sorted(k_list) or len(set(k_list)) != len(k_list):
        raise ValueError("k_list must be strictly ascending")
    q_list = [int(q)] if np.isscalar(q) else [int(v) for v in q]
    if any(v < 0 or v > M.n for v in q_list):
        raise ValueError("q must lie in [0, n]")
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    n, r = M.n, M.r
    est, se, degen = _run_points(M, k_list, q_list, n_samples, seed, tol, workers)
    eta_int = {q: eta_index_integral(M, q, tol) for q in q_list}
    rows = []
    decay_const = {}
    for k in k_list:
        const, log_const = full_morse_constant(n, k, r)
        if M.has_twist:
            scale = 1.0
        else:
            scale = float(r**n / ikrn_exact(k, r, n))
        for q in q_list:
            dev = abs(est[(k, q)] * scale - eta_int[q])
            if q not in decay_const:
                decay_const[q] = dev * math.log(k) if k > 1 else 0.0
            pred = decay_const[q] / math.log(k) if k > 1 else math.inf
            rows.append(MorseRow(
                k=k, q=q,
                reduced_estimate=est[(k, q)], std_error=se[(k, q)],
                eta_integral=eta_int[q], normalized_deviation=dev,
                predicted_decay=pred, degenerate_fraction=degen[k],
                log_full_constant=log_const, full_constant=const))
    return MorseReport(tuple(rows))
