"""Verification suites cross-checking the exact, analytic and shuffling routes."""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Callable, Iterable
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from arcticl.config import ArcticError, ConfigError
from arcticl.curve.branches import compact_grid, curve_branches
from arcticl.curve.regime import (
    CurveError,
    RegimeParams,
    critical_R,
    eta_quartic,
    eta_sign_changes,
    regime_params,
    solve_eta_ab,
)
from arcticl.curve.resolvent import exp_minus_resolvent, inverse_resolvent
from arcticl.curve.sextic import (
    discriminant_check,
    factored_at_beta_one,
    factored_at_beta_zero,
    implicit_sextic_Q0,
    line_factor,
)
from arcticl.curve.tangent import (
    TangentFamily,
    arctic_ellipse,
    ellipse_point,
    phi_general,
    phi_square_cut,
    special_w,
)
from arcticl.loggas.generating import F_at_one, h_coefficients
from arcticl.model.geometry import LGeometry
from arcticl.model.transfer import (
    boundary_distribution,
    framed_partition_function,
    partition_function,
    vertex_marginals,
)
from arcticl.model.vertex import FreeFermionWeights, VertexType
from arcticl.shuffling.order import fluid_boundary, max_curve_deviation, order_parameters
from arcticl.shuffling.probabilities import PlaquetteProbabilities, edge_probabilities
from arcticl.shuffling.sampler import batch_edge_counts, sample_batches, sample_tilings
from arcticl.shuffling.weights import build_weights, log_partition_function

logger = logging.getLogger(__name__)

SUITES = ("oracle", "curve-identities", "sextic", "shuffling", "figures")

ORACLE_ALPHAS = (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))
CALIBRATION_ALPHAS = (Fraction(1, 3), Fraction(3, 4))

# Sampling check: share of edges allowed beyond 3σ, and a hard ceiling
OUTLIER_SHARE = 0.01
MAX_Z_SCORE = 5.0


class VerificationFailed(ArcticError):
    """Raised when at least one check of a suite fails."""

    def __init__(self, report: VerifyReport) -> None:
        names = ", ".join(f"{c.suite}/{c.name}" for c in report.failures)
        super().__init__(f"{len(report.failures)} check(s) failed: {names}")
        self.report = report


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    measured: float | None = None
    tolerance: float | None = None
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class VerifyReport:
    checks: list[CheckResult] = field(default_factory=list)
    elapsed: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def suite(self, name: str) -> list[CheckResult]:
        return [c for c in self.checks if c.suite == name]

    def raise_for_failures(self) -> None:
        if not self.passed:
            raise VerificationFailed(self)

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "failed": len(self.failures),
            "elapsed": {k: round(v, 3) for k, v in self.elapsed.items()},
            "checks": [c.to_dict() for c in self.checks],
        }


@dataclass(frozen=True)
class VerifyOptions:
    """Knobs of the suites that are not fixed by their definition."""

    figure_N: int = 300
    sample_N: int = 16
    samples: int = 100_000
    seed: int = 0
    eps_const: float = 1.0
    max_lattice: int = 1024
    show_progress: bool = False


def _bounded(
    suite: str, name: str, measured: float, tolerance: float, detail: str = ""
) -> CheckResult:
    ok = math.isfinite(measured) and measured <= tolerance
    return CheckResult(suite, name, ok, float(measured), tolerance, detail)


# ── Exact oracle ────────────────────────────────────────────────


def oracle_cases(max_n: int = 5) -> list[tuple[int, int, int]]:
    """Every (N, r, s) with s ≥ 1 the log-gas formulas cover, up to max_n."""
    return [
        (N, r, s)
        for N in range(2, max_n + 1)
        for r in range(1, N + 1)
        for s in range(1, N - r + 1)
        if s <= r
    ]


def _oracle(options: VerifyOptions) -> list[CheckResult]:
    checks = []
    cases = oracle_cases()
    for alpha in ORACLE_ALPHAS:
        w = FreeFermionWeights(alpha)
        bad_h = [
            c for c in cases if h_coefficients(*c, alpha) != boundary_distribution(LGeometry(*c), w)
        ]
        checks.append(
            CheckResult(
                "oracle",
                f"boundary distribution alpha={alpha}",
                not bad_h,
                float(len(bad_h)),
                0.0,
                f"{len(cases)} geometries" + (f", mismatches {bad_h}" if bad_h else ""),
            )
        )
        bad_z = []
        for N, r, s in cases:
            framed = framed_partition_function(LGeometry(N, r, s), w)
            if not isinstance(framed, Fraction) or framed != F_at_one(N, r, s, alpha):
                bad_z.append((N, r, s))
        checks.append(
            CheckResult(
                "oracle",
                f"framed partition function alpha={alpha}",
                not bad_z,
                float(len(bad_z)),
                0.0,
                f"{len(cases)} geometries" + (f", mismatches {bad_z}" if bad_z else ""),
            )
        )
    not_one = [
        (N, str(alpha))
        for N in range(1, 8)
        for alpha in ORACLE_ALPHAS
        if partition_function(LGeometry(N, N, 0), FreeFermionWeights(alpha)) != 1
    ]
    checks.append(
        CheckResult(
            "oracle", "square is normalized", not not_one, float(len(not_one)), 0.0, "N <= 7"
        )
    )
    return checks


# ── Curve identities ────────────────────────────────────────────


def _away_from_poles(w: np.ndarray, alpha: float, gap: float = 1e-6) -> np.ndarray:
    keep = np.isfinite(w) & (np.abs(w) < 1e3)
    for pole in special_w(alpha):
        keep &= np.abs(w - pole) > gap
    return w[keep]


def round_trip_error(params: RegimeParams, branch: int, n_samples: int = 100) -> tuple[float, int]:
    """Worst |exp(−W(z(u))) − u| over u on (α, 1) and the number of points checked."""
    worst, checked = 0.0, 0
    for u in np.linspace(params.alpha + 0.01, 0.99, n_samples):
        try:
            root = inverse_resolvent(float(u), params, branch)
        except CurveError:
            continue
        if root.z <= params.b + 1e-9:
            continue
        worst = max(worst, abs(exp_minus_resolvent(root.z, params, root.sheet) - u))
        checked += 1
    return worst, checked


def _curve_identities(options: VerifyOptions) -> list[CheckResult]:
    suite = "curve-identities"
    checks = []

    alpha = 0.3
    family = TangentFamily(regime_params(4.0, 0.0, alpha))
    w = _away_from_poles(compact_grid(1000), alpha)
    x, y = family.caustic(w)
    residual = float(np.nanmax(np.abs(arctic_ellipse(x, y, alpha))))
    checks.append(
        _bounded(suite, "regime I caustic on the ellipse", residual, 1e-12, f"{len(w)} points")
    )

    targets = {
        1.0: (alpha, 0.0),
        0.0: (0.0, alpha),
        -(1 - alpha) / alpha: (1 - alpha, 1.0),
        1e12: (1.0, 1 - alpha),
    }
    contact_error = max(
        math.hypot(float(px) - tx, float(py) - ty)
        for wk, (tx, ty) in targets.items()
        for px, py in [ellipse_point(wk, alpha)]
    )
    checks.append(_bounded(suite, "ellipse contact points", contact_error, 1e-10))

    cases = [
        ("regime I", regime_params(8.0, 0.0, 0.5), (-1,)),
        ("square cut", solve_eta_ab(1.5, 0.0, 0.3), (-1, 1)),
        ("generic IIA", solve_eta_ab(1.5, 0.4, 0.3), (-1, 1)),
        ("generic IIB", solve_eta_ab(1 + 0.6 * (critical_R(3.0, 0.3) - 1), 3.0, 0.3), (-1, 1)),
    ]
    for label, params, branches in cases:
        for branch in branches:
            worst, checked = round_trip_error(params, branch)
            name = f"resolvent round trip {label} branch {branch:+d}"
            result = _bounded(suite, name, worst, 1e-10)
            if checked == 0:
                result.passed, result.detail = False, "no admissible u sample"
            else:
                result.detail = f"{checked} points"
            checks.append(result)

    nearly = solve_eta_ab(1.5, 1e-8, 0.3)
    sample_w = np.array([-3.0, -0.5, 0.4, 2.0, 5.0, 25.0])
    gaps = [
        np.abs(phi_general(sample_w, nearly, b) - phi_square_cut(sample_w, 1.5, 0.3, b))
        for b in (-1, 1)
    ]
    gap = float(np.nanmax(gaps))
    checks.append(_bounded(suite, "generic chain at Q=1e-8 matches the square cut", gap, 1e-6))

    worst_eta, bad_roots, solved = 0.0, 0, 0
    for a in (0.3, 0.5, 0.7):
        for q in (float(v) for v in np.linspace(0.0, 2.0, 20)):
            Rc = critical_R(q, a)
            for t in np.linspace(0.05, 0.95, 20):
                R = 1 + float(t) * (Rc - 1)
                params = solve_eta_ab(R, q, a)
                assert params.eta is not None
                ends = (abs(eta_quartic(e, R, q, a)) for e in (0.0, 1.0))
                scale = max(1.0, *ends)
                worst_eta = max(worst_eta, abs(eta_quartic(params.eta, R, q, a)) / scale)
                bad_roots += eta_sign_changes(R, q, a) != 1
                solved += 1
    detail = f"{solved} (R, Q, alpha) points"
    checks.append(_bounded(suite, "eta quartic residual", worst_eta, 1e-13, detail))
    checks.append(
        CheckResult(
            suite, "eta root is unique on [0, 1]", bad_roots == 0, float(bad_roots), 0.0, detail
        )
    )
    return checks


# ── Implicit sextic ─────────────────────────────────────────────


def _relative(got: np.ndarray, expected: np.ndarray) -> float:
    return float(np.max(np.abs(got - expected)) / max(float(np.max(np.abs(expected))), 1e-300))


def _sextic(options: VerifyOptions) -> list[CheckResult]:
    suite = "sextic"
    alpha = 0.3
    rng = np.random.default_rng(options.seed)
    Z1, Z2 = rng.uniform(-1.5, 1.5, 200), rng.uniform(-1.5, 1.5, 200)

    middle = implicit_sextic_Q0(alpha, 1.5)
    checks = [
        _bounded(
            suite, "even in Z2", _relative(middle.reduced(Z1, Z2), middle.reduced(Z1, -Z2)), 1e-8
        ),
        _bounded(
            suite,
            "beta=1 factorization",
            _relative(
                implicit_sextic_Q0(alpha, critical_R(0, alpha)).reduced(Z1, Z2),
                factored_at_beta_one(alpha, Z1, Z2),
            ),
            1e-8,
        ),
        _bounded(
            suite,
            "beta=0 factorization",
            _relative(
                implicit_sextic_Q0(alpha, 1.0).reduced(Z1, Z2),
                factored_at_beta_zero(alpha, Z1, Z2),
            ),
            1e-8,
        ),
    ]

    R = 1.5
    points = []
    while len(points) < 100:
        z1, z2 = (float(v) for v in rng.uniform(-1.0, 1.0, 2))
        if abs(line_factor(alpha, R, z1)) < 1e-3:
            continue
        if abs(float(middle(z1, z2))) < 1e-6 * float(middle.local_scale(z1, z2)):
            continue
        points.append((z1, z2))
    curves = curve_branches(R, 0.0, alpha, n_samples=600)
    report = discriminant_check(alpha, R, points, curve=curves)
    checks.append(
        _bounded(suite, "discriminant factorization", report.worst_ratio_error, 1e-8, "100 points")
    )
    checks.append(
        _bounded(suite, "branch points annihilate the sextic", report.curve_residual or 0.0, 1e-8)
    )
    return checks


# ── Shuffling ───────────────────────────────────────────────────


def calibration_error(N: int, r: int, s: int, alpha: Fraction) -> float:
    """Worst gap between shuffling edge probabilities and the six-vertex oracle."""
    marginals = vertex_marginals(LGeometry(N, r, s), FreeFermionWeights(alpha))
    probs = edge_probabilities(build_weights(N, r, s, alpha))
    a = float(alpha)
    worst = 0.0
    for (j, k), cell in marginals.items():
        t = {vt: float(v) for vt, v in cell.items()}
        six = t[VertexType.SIX]
        expected = (
            t[VertexType.TWO] + (1 - a) * six,
            t[VertexType.THREE] + a * six,
            t[VertexType.FOUR] + a * six,
            t[VertexType.ONE] + (1 - a) * six,
        )
        got = probs.quadruple(k - 1, N - j)
        worst = max(worst, max(abs(g - e) for g, e in zip(got, expected)))
    return worst


def frequency_scores(freq: np.ndarray, p: np.ndarray, n: int) -> np.ndarray:
    """|f − p| in units of the binomial σ; deterministic edges score 0 or ∞."""
    sigma = np.sqrt(p * (1 - p) / n)
    gap = np.abs(freq - p)
    with np.errstate(divide="ignore", invalid="ignore"):
        scores = np.where(sigma > 0, gap / sigma, np.where(gap > 1e-12, np.inf, 0.0))
    return scores


def _shuffling(options: VerifyOptions) -> list[CheckResult]:
    suite = "shuffling"
    cases = [(N, r, s) for N in range(1, 5) for r in range(1, N + 1) for s in range(0, r + 1)]
    worst = max(calibration_error(N, r, s, a) for N, r, s in cases for a in CALIBRATION_ALPHAS)
    detail = f"{len(cases)} geometries"
    checks = [_bounded(suite, "calibration against the oracle", worst, 1e-12, detail)]

    log_gap = 0.0
    for N, r, s in cases:
        framed = float(framed_partition_function(LGeometry(N, r, s), FreeFermionWeights(0.3)))
        expected = N * (N + 1) / 2 * math.log(2) + math.log(framed)
        log_gap = max(log_gap, abs(log_partition_function(build_weights(N, r, s, 0.3)) - expected))
    checks.append(_bounded(suite, "log partition function", log_gap, 1e-10))

    count_gap = 0.0
    for N, r, s in [(12, 7, 5), (20, 10, 10), (24, 24, 0)]:
        probs = edge_probabilities(build_weights(N, r, s, 0.35))
        count_gap = max(count_gap, abs(probs.total() - PlaquetteProbabilities.domino_count(N)))
    checks.append(_bounded(suite, "domino count", count_gap, 1e-10))

    N = options.sample_N
    r = N - N * 3 // 8
    wg = build_weights(N, r, N - r, 0.4, max_order=options.max_lattice)
    covered = all(t.covers_every_vertex() for t in sample_tilings(wg, options.seed, 20))
    checks.append(CheckResult(suite, "samples are perfect matchings", covered, detail="20 samples"))

    batches = sample_batches(
        wg, options.seed, options.samples, show_progress=options.show_progress
    )
    counts, n = batch_edge_counts(batches)
    scores = frequency_scores(counts / n, edge_probabilities(wg).edges, n)
    share = float(np.mean(scores > 3))
    top = float(np.max(scores))
    checks.append(
        CheckResult(
            suite,
            f"frequencies within 3 sigma at N={N}",
            share <= OUTLIER_SHARE and top <= MAX_Z_SCORE,
            share,
            OUTLIER_SHARE,
            f"{n} samples, max score {top:.3g}",
        )
    )
    return checks


# ── Figures ─────────────────────────────────────────────────────


def figure_geometry(N: int) -> tuple[int, int, int]:
    """Square cut at the proportions r : s = 168 : 132 of the N = 300 figure."""
    s = round(N * 132 / 300)
    return N, N - s, s


def figure_deviation(
    N: int, eps_const: float = 1.0, max_lattice: int = 1024, show_progress: bool = False
) -> float:
    """Fluid-mask boundary against the analytic curve, in lattice spacings."""
    N, r, s = figure_geometry(N)
    wg = build_weights(N, r, s, 0.5, max_order=max_lattice)
    probs = edge_probabilities(wg, show_progress=show_progress)
    points = fluid_boundary(order_parameters(probs, eps_const=eps_const))
    curves = curve_branches(r / s, 0.0, 0.5, n_samples=4000)
    return max_curve_deviation(points, [(b.x, b.y) for b in curves], N)


def _figures(options: VerifyOptions) -> list[CheckResult]:
    N = options.figure_N
    tolerance = 1.0 if N >= 300 else 2.0
    deviation = figure_deviation(N, options.eps_const, options.max_lattice, options.show_progress)
    _, r, s = figure_geometry(N)
    detail = f"r={r}, s={s}, alpha=1/2"
    return [_bounded("figures", f"fluid boundary at N={N}", deviation, tolerance, detail)]


_RUNNERS: dict[str, Callable[[VerifyOptions], list[CheckResult]]] = {
    "oracle": _oracle,
    "curve-identities": _curve_identities,
    "sextic": _sextic,
    "shuffling": _shuffling,
    "figures": _figures,
}


def resolve_suites(names: Iterable[str]) -> list[str]:
    """Expand ``all`` and reject unknown suite names."""
    resolved: list[str] = []
    for name in names:
        picked = list(SUITES) if name == "all" else [name]
        for suite in picked:
            if suite not in _RUNNERS:
                choices = ", ".join(SUITES)
                raise ConfigError(f"unknown suite {suite!r}; choose from {choices} or all")
            if suite not in resolved:
                resolved.append(suite)
    return resolved


def run_suites(names: Iterable[str], options: VerifyOptions | None = None) -> VerifyReport:
    options = options or VerifyOptions()
    report = VerifyReport()
    for suite in resolve_suites(names):
        start = time.monotonic()
        logger.info(f"running suite {suite}")
        checks = _RUNNERS[suite](options)
        report.elapsed[suite] = time.monotonic() - start
        report.checks.extend(checks)
        failed = sum(not c.passed for c in checks)
        logger.info(f"suite {suite}: {len(checks) - failed} passed, {failed} failed")
    return report


# ── Curve documents ─────────────────────────────────────────────


def verify_curve_document(doc: dict[str, Any], tolerance: float = 1e-12) -> CheckResult:
    """Recompute the branches a `curve` JSON document describes and compare samples."""
    try:
        config = doc["metadata"]["config"]
        branches = doc["branches"]
        if "R" in config:
            R, Q = float(config["R"]), float(config["Q"])
        else:
            N, r, s = int(config["N"]), int(config["r"]), int(config["s"])
            R, Q = r / s, (N - r - s) / s
        alpha = float(Fraction(config["alpha"]))
        n_curve = int(config["n_curve"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"not a curve document: {e}") from e
    curves = curve_branches(R, Q, alpha, n_samples=n_curve)
    worst = 0.0
    for branch in curves:
        stored = next((b for b in branches if b["label"] == branch.label), None)
        if stored is None or len(stored["x"]) != len(branch.x):
            detail = f"{branch.label} differs"
            return CheckResult("curve-document", "branches", False, detail=detail)
        worst = max(
            worst,
            float(np.max(np.abs(np.asarray(stored["x"], dtype=float) - branch.x), initial=0.0)),
            float(np.max(np.abs(np.asarray(stored["y"], dtype=float) - branch.y), initial=0.0)),
        )
    return _bounded("curve-document", "branches", worst, tolerance)
