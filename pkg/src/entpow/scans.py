"""Parameter scans of witness minima over two-parameter channel families.

Each scenario fixes a two-qubit channel family Lambda_{p,q}, a reference
witness W, and reports min over product inputs of <chi| Lambda*(W) |chi> on a
(p, q) grid. Negative values certify that some product input acquires
entanglement. Two engines are available: "closed_form" evaluates an exact
expression for the minimum, "optimizer" runs the multi-start product-state
descent; agreement between them is one of the package's acceptance checks.

Scenarios
---------
``measurement``: measure the singlet projector {P, 1 - P} and prepare
    rho_0 = p * singlet + (1 - p) * I/4 on outcome 0,
    rho_1 = q * singlet + (1 - q) * triplet_plus on outcome 1,
    scanned against the swap witness. The minimum crosses zero along q = 1/2
    and 3p + 4q = 3, which meet at the kink (1/3, 1/2).
``unitary_mix``: mix {identity, controlled-NOT, identity (x) NOT} with
    weights (1 - p - q, p, q), scanned against the shifted witness
    (4/5) * I - P_+ where P_+ projects onto the maximally entangled state.

The historical aliases "fig3" and "fig4" name the same scenarios.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channels import KrausChannel, measurement_channel, random_unitary_channel
from .errors import SpecError
from .states import DensityMatrix, bell_states, max_entangled
from .tensor import DimList
from .witnesses import (
    OptimizerConfig,
    Witness,
    measurement_scan_min,
    min_over_products,
    swap_witness,
    unitary_mix_scan_min,
)

CSV_HEADER = "p,q,min_value"


@dataclass(frozen=True)
class Scenario:
    """A named two-parameter channel family plus its reference witness."""

    name: str
    dims: DimList
    build_channel: Callable[[float, float], KrausChannel]
    build_witness: Callable[[], Witness]
    closed_form: Callable[[float, float], float]
    in_domain: Callable[[float, float], bool]


def _measurement_scenario_channel(p: float, q: float) -> KrausChannel:
    bell = bell_states()
    eye4 = np.eye(4)
    proj = bell.psi_minus.projector()
    rho0 = DensityMatrix(p * proj + (1.0 - p) * eye4 / 4.0, (2, 2))
    rho1 = DensityMatrix(q * proj + (1.0 - q) * bell.psi_plus.projector(), (2, 2))
    return measurement_channel([proj, eye4 - proj], [rho0, rho1], (2, 2))


def _unitary_mix_scenario_channel(p: float, q: float) -> KrausChannel:
    cnot = np.eye(4)[[0, 1, 3, 2]]
    not_on_second = np.kron(np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]]))
    return random_unitary_channel(
        [np.eye(4), cnot, not_on_second], [1.0 - p - q, p, q], (2, 2)
    )


def _unitary_mix_witness() -> Witness:
    proj = max_entangled(2, 2).projector()
    return Witness.from_shift(4.0 / 5.0, proj, (2, 2), label="shifted_4/5")


SCENARIOS: dict[str, Scenario] = {
    "measurement": Scenario(
        name="measurement",
        dims=DimList.of((2, 2)),
        build_channel=_measurement_scenario_channel,
        build_witness=lambda: swap_witness(2),
        closed_form=measurement_scan_min,
        in_domain=lambda p, q: True,
    ),
    "unitary_mix": Scenario(
        name="unitary_mix",
        dims=DimList.of((2, 2)),
        build_channel=_unitary_mix_scenario_channel,
        build_witness=_unitary_mix_witness,
        closed_form=lambda p, q: unitary_mix_scan_min(p, q, shift=4.0 / 5.0),
        in_domain=lambda p, q: p + q <= 1.0 + 1e-9,
    ),
}

SCENARIO_ALIASES = {"fig3": "measurement", "fig4": "unitary_mix"}


def get_scenario(name: str) -> Scenario:
    resolved = SCENARIO_ALIASES.get(name, name)
    try:
        return SCENARIOS[resolved]
    except KeyError:
        known = sorted(set(SCENARIOS) | set(SCENARIO_ALIASES))
        raise SpecError("scenario", f"unknown scenario {name!r}; known: {known}") from None


@dataclass(frozen=True)
class ScanResult:
    scenario: str
    engine: str
    step: float
    rows: tuple[tuple[float, float, float], ...]
    all_converged: bool


def _axis(step: float) -> list[float]:
    n = int(round(1.0 / step))
    vals = [i * step for i in range(n + 1)]
    if vals[-1] < 1.0 - 1e-9:  # step does not divide 1; still include the edge
        vals.append(1.0)
    vals[-1] = min(vals[-1], 1.0)
    return vals


def _check_step(step: float) -> float:
    step = float(step)
    if not (0.0 < step <= 0.25):
        raise SpecError("step", f"step must lie in (0, 0.25], got {step}")
    return step


def _thread_count(threads: int | None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("ENTPOW_THREADS", "")
    if env.strip():
        try:
            return max(1, int(env))
        except ValueError:
            raise SpecError("ENTPOW_THREADS", f"not an integer: {env!r}") from None
    return min(4, os.cpu_count() or 1)


def run_scan(
    scenario_name: str,
    step: float,
    engine: str = "closed_form",
    optimizer: OptimizerConfig | None = None,
    threads: int | None = None,
) -> ScanResult:
    """Evaluate the scenario's witness minimum on the (p, q) grid.

    Grid points are p = i * step, q = j * step clipped to [0, 1], restricted to
    the scenario's domain, emitted in row-major (p outer, q inner) order. The
    result is deterministic: the optimizer engine reuses the same seeded config
    at every grid point, so thread count never affects values or ordering.
    """
    scenario = get_scenario(scenario_name)
    step = _check_step(step)
    if engine not in ("closed_form", "optimizer"):
        raise SpecError("engine", f"unknown engine {engine!r}")
    axis = _axis(step)
    points = [
        (p, q) for p in axis for q in axis if scenario.in_domain(p, q)
    ]

    if engine == "closed_form":
        values = [scenario.closed_form(p, q) for p, q in points]
        converged = [True] * len(points)
    else:
        config = optimizer or OptimizerConfig()
        witness = scenario.build_witness()
        dims = scenario.dims

        def evaluate(point):
            p, q = point
            dual = scenario.build_channel(p, q).dual_apply(witness.operator)
            res = min_over_products(dual, dims, config)
            return res.value, res.converged

        n_threads = _thread_count(threads)
        if n_threads > 1:
            with ThreadPoolExecutor(max_workers=n_threads) as pool:
                results = list(pool.map(evaluate, points))
        else:
            results = [evaluate(pt) for pt in points]
        values = [r[0] for r in results]
        converged = [r[1] for r in results]

    rows = tuple(
        (p, q, float(v)) for (p, q), v in zip(points, values)
    )
    return ScanResult(
        scenario=scenario.name,
        engine=engine,
        step=step,
        rows=rows,
        all_converged=bool(all(converged)),
    )


def format_csv(result: ScanResult) -> str:
    lines = [CSV_HEADER]
    for p, q, v in result.rows:
        lines.append(f"{p:.10g},{q:.10g},{v:.12g}")
    return "\n".join(lines) + "\n"


def write_csv(result: ScanResult, path: str) -> None:
    text = format_csv(result)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def zero_contour_residual(result: ScanResult) -> float:
    """Largest |closed_form - row value| across the grid (engine cross-check)."""
    scenario = get_scenario(result.scenario)
    worst = 0.0
    for p, q, v in result.rows:
        worst = max(worst, abs(scenario.closed_form(p, q) - v))
    return worst
