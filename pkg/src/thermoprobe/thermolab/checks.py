"""End-to-end acceptance checks, shared by ``thermoprobe selftest`` and the test suite.

Each check returns ``(passed, detail)``; :func:`run_check` adds timing.  The
checks always use the default support cutoff.
"""
from __future__ import annotations

import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from ..matcore import matrix_exp
from ..metrology import (
    ParameterizedState,
    Povm,
    classical_fisher_information,
    finite_difference,
    qfi_from_matrices,
    qfi_sld_trace,
    sld_eigenbasis,
)
from ..sensor import (
    SensorParams,
    gibbs_state,
    thermal_state_closed_form,
    thermal_state_derivative,
)
from ..teleport import (
    CLASSICAL_FIDELITY,
    InputState,
    input_state,
    teleport_output,
    teleport_output_closed_form,
)
from .scenario import PRESETS, TGrid, figure_preset
from .sweep import run_sweep

ROUTE_TOL = 1e-10
QFI_ROUTE_RTOL = 1e-8
DATA_PROCESSING_RTOL = 1e-9
DERIVATIVE_RTOL = 1e-6
HIGH_T = 1e6
HIGH_T_TOL = 1e-8
FIG5_MARGIN = 0.95

ANGLE_PAIRS = (
    (0.0, 0.0),
    (math.pi / 4, math.pi / 3),
    (math.pi / 2, 0.0),
    (math.pi / 2, math.pi / 2),
    (math.pi / 2, math.pi),
    (math.pi / 2, math.pi / 6),
    (2 * math.pi / 3, 5 * math.pi / 4),
    (math.pi, 1.0),
)


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    budget: Optional[float]

    @property
    def within_budget(self) -> bool:
        return self.budget is None or self.seconds < self.budget

    @property
    def ok(self) -> bool:
        return self.passed and self.within_budget

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        limit = "no limit" if self.budget is None else f"limit {self.budget:g}s"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s, {limit})"


def preset_parameter_sets() -> list[SensorParams]:
    """Distinct sensor parameters appearing in the figure presets, vary values expanded."""
    out = []
    for spec in PRESETS.values():
        variants = [spec.params]
        if spec.vary is not None:
            variants = [spec.params.replace(**{spec.vary.field: v}) for v in spec.vary.values]
        for p in variants:
            if p not in out:
                out.append(p)
    return out


def random_thermal_family(rng: np.random.Generator, dim: int = 4):
    """``rho = exp(-H/x) / z`` for a random Hermitian ``H``, with its exact derivative in ``x``."""
    a = rng.uniform(-1, 1, (dim, dim)) + 1j * rng.uniform(-1, 1, (dim, dim))
    h = 0.5 * (a + a.conj().T)
    x = float(rng.uniform(0.3, 2.0))
    rho = matrix_exp(-h / x)
    rho = rho / np.trace(rho).real
    energy = np.trace(h @ rho).real
    drho = (h @ rho - energy * rho) / (x * x)
    return rho, 0.5 * (drho + drho.conj().T)


def random_unitary(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def check_thermal_routes():
    grid = np.linspace(0.01, 4.0, 20)
    worst = 0.0
    for ej1 in grid:
        for em in grid:
            p = SensorParams(ej1=float(ej1), ej2=0.1, em=float(em))
            for t in (0.05, 0.5, 5.0):
                diff = np.max(np.abs(gibbs_state(p, t) - thermal_state_closed_form(p, t)))
                worst = max(worst, float(diff))
    return worst <= ROUTE_TOL, f"max entrywise difference {worst:.2e} (tol {ROUTE_TOL:g})"


def check_teleport_closed_form():
    worst = 0.0
    temps = np.linspace(0.05, 5.0, 50)
    inputs = [InputState(th, ph) for th, ph in ANGLE_PAIRS]
    states = [input_state(s) for s in inputs]
    for p in preset_parameter_sets():
        for t in temps:
            rho_ch = gibbs_state(p, float(t))
            for s, rho_in in zip(inputs, states):
                diff = np.max(
                    np.abs(teleport_output(rho_ch, rho_in) - teleport_output_closed_form(p, float(t), s))
                )
                worst = max(worst, float(diff))
    return worst <= ROUTE_TOL, f"max entrywise difference {worst:.2e} (tol {ROUTE_TOL:g})"


def _random_families(n: int = 200, seed: int = 20251017):
    rng = np.random.default_rng(seed)
    return [random_thermal_family(rng) for _ in range(n)]


def check_qfi_routes():
    worst = 0.0
    for rho, drho in _random_families():
        report = qfi_from_matrices(rho, drho)
        split = report.classical_part + report.quantum_part
        trace = qfi_sld_trace(rho, drho)
        worst = max(worst, _rel(report.total, split), _rel(report.total, trace), _rel(split, trace))
    return worst <= QFI_ROUTE_RTOL, f"max relative disagreement {worst:.2e} (tol {QFI_ROUTE_RTOL:g})"


def check_sld_optimality():
    rng = np.random.default_rng(7)
    worst_opt = 0.0
    worst_excess = -math.inf
    for rho, drho in _random_families():
        f_q = qfi_from_matrices(rho, drho).total
        optimal = Povm.projective(sld_eigenbasis(rho, drho))
        worst_opt = max(worst_opt, _rel(classical_fisher_information(rho, drho, optimal), f_q))
        for _ in range(100):
            cfi = classical_fisher_information(rho, drho, Povm.projective(random_unitary(rng)))
            worst_excess = max(worst_excess, (cfi - f_q) / f_q)
    passed = worst_opt <= QFI_ROUTE_RTOL and worst_excess <= DATA_PROCESSING_RTOL
    return passed, (
        f"SLD-basis CFI vs QFI rel {worst_opt:.2e} (tol {QFI_ROUTE_RTOL:g}); "
        f"max (CFI-QFI)/QFI over random POVMs {worst_excess:.2e} (tol {DATA_PROCESSING_RTOL:g})"
    )


def check_derivative():
    worst, where = 0.0, ""
    temps = np.linspace(0.05, 5.0, 20)
    for name in PRESETS:
        for p in _preset_params(name):
            family = ParameterizedState(
                evaluate=lambda t, p=p: thermal_state_closed_form(p, t), lower_bound=0.0
            )
            for t in temps:
                analytic = thermal_state_derivative(p, float(t))
                numeric = finite_difference(family, float(t))
                err = float(np.linalg.norm(analytic - numeric) / np.linalg.norm(analytic))
                if err > worst:
                    worst = err
                    where = f"{name} ej1={p.ej1:g} ej2={p.ej2:g} em={p.em:g} T={t:.3g}"
    return worst <= DERIVATIVE_RTOL, (
        f"max relative Frobenius error {worst:.2e} at {where} (tol {DERIVATIVE_RTOL:g})"
    )


def _preset_params(name: str) -> list[SensorParams]:
    spec = figure_preset(name)
    if spec.vary is None:
        return [spec.params]
    return [spec.params.replace(**{spec.vary.field: v}) for v in spec.vary.values]


def _monotonicity_violation(result) -> float:
    worst = -math.inf
    for r in result.rows:
        worst = max(worst, r.qfi_remote - r.qfi_direct * (1 + DATA_PROCESSING_RTOL))
    return worst


def check_fig4_direct_beats_remote():
    fig4 = run_sweep(figure_preset("fig4"))
    fig4_ok = len(fig4.rows) == 200 and _monotonicity_violation(fig4) <= 0
    others = {}
    for name, spec in PRESETS.items():
        res = run_sweep(spec.replace(scenario="both", input=spec.input or InputState(math.pi / 2, math.pi / 2)))
        others[name] = _monotonicity_violation(res)
    bad = [n for n, v in others.items() if v > 0]
    margin = min(r.qfi_direct - r.qfi_remote for r in fig4.rows)
    return fig4_ok and not bad, (
        f"fig4 min(qfi_direct - qfi_remote) = {margin:.3e} over {len(fig4.rows)} points; "
        f"presets violating monotonicity: {bad or 'none'}"
    )


def fig5_fidelities() -> tuple[float, float]:
    res = run_sweep(figure_preset("fig5"))
    return res.rows[0].fidelity, res.rows[-1].fidelity


def check_fig5_fidelity():
    low, high = fig5_fidelities()
    passed = low > CLASSICAL_FIDELITY and low > FIG5_MARGIN and high < low
    return passed, (
        f"f(T=0.05) = {low:.6f} (> 2/3: {low > CLASSICAL_FIDELITY}, > {FIG5_MARGIN}: {low > FIG5_MARGIN}); "
        f"f(T=5) = {high:.6f} (< f(0.05): {high < low})"
    )


def check_fig3_extrema():
    details = []
    passed = True
    for name, which in (("fig3a", "direct"), ("fig3b", "remote")):
        res = run_sweep(figure_preset(name))
        iq = int(np.argmax(res.column(f"qfi_{which}")))
        ih = int(np.argmax(res.column(f"hss_{which}")))
        passed &= abs(iq - ih) <= 2
        details.append(f"{name}: argmax QFI {iq}, HSS {ih}")
    return passed, "; ".join(details) + " (tol 2 steps)"


def check_fig2d_trend():
    res = run_sweep(figure_preset("fig2d"))
    peaks = [float(np.max(res.column("qfi_remote", v))) for v in res.vary_values()]
    passed = all(b >= a for a, b in zip(peaks, peaks[1:]))
    listed = ", ".join(f"em={v:g}: {pk:.4g}" for v, pk in zip(res.vary_values(), peaks))
    return passed, f"peak qfi_remote {listed}"


def check_high_temperature():
    worst_ch = worst_out = 0.0
    worst_metric = 0.0
    rho_in = input_state(InputState(math.pi / 2, math.pi / 2))
    for p in preset_parameter_sets():
        rho_ch = thermal_state_closed_form(p, HIGH_T)
        rho_out = teleport_output(rho_ch, rho_in)
        worst_ch = max(worst_ch, float(np.max(np.abs(rho_ch - np.eye(4) / 4))))
        worst_out = max(worst_out, float(np.max(np.abs(rho_out - np.eye(2) / 2))))
    for name, spec in PRESETS.items():
        spec = spec.replace(
            scenario="both",
            input=spec.input or InputState(math.pi / 2, math.pi / 2),
            t_grid=TGrid(HIGH_T, HIGH_T, 2),
        )
        for r in run_sweep(spec).rows:
            worst_metric = max(worst_metric, r.qfi_direct, r.hss_direct, r.qfi_remote, r.hss_remote)
    passed = max(worst_ch, worst_out) <= HIGH_T_TOL and worst_metric < HIGH_T_TOL
    return passed, (
        f"max |rho_ch - I/4| {worst_ch:.2e}, max |rho_out - I/2| {worst_out:.2e}, "
        f"largest QFI/HSS {worst_metric:.2e} (tol {HIGH_T_TOL:g})"
    )


def check_cli_determinism():
    from .cli import main

    with tempfile.TemporaryDirectory() as tmp:
        paths = [Path(tmp) / f"fig4_{i}.csv" for i in range(2)]
        codes = [main(["figure", "fig4", "--out", str(path)]) for path in paths]
        same = paths[0].read_bytes() == paths[1].read_bytes()
        size = paths[0].stat().st_size
    return codes == [0, 0] and same, f"exit codes {codes}, identical bytes: {same} ({size} bytes)"


CHECKS: list[tuple[int, str, Callable, Optional[float]]] = [
    (1, "thermal-state route equivalence", check_thermal_routes, 5),
    (2, "teleportation closed form vs channel", check_teleport_closed_form, 2),
    (3, "QFI triple-route agreement", check_qfi_routes, 5),
    (4, "SLD measurement optimality", check_sld_optimality, 10),
    (5, "analytic vs finite-difference derivative", check_derivative, 2),
    (6, "direct sensing beats remote (fig4) and monotonicity", check_fig4_direct_beats_remote, 5),
    (7, "fig5 fidelity above threshold", check_fig5_fidelity, 1),
    (8, "fig3 QFI/HSS extrema coincide", check_fig3_extrema, 2),
    (9, "fig2d peak QFI grows with coupling", check_fig2d_trend, 2),
    (10, "high-temperature limits", check_high_temperature, None),
    (11, "figure export determinism", check_cli_determinism, None),
]


def run_check(number: int) -> CheckResult:
    for num, name, fn, budget in CHECKS:
        if num == number:
            start = time.perf_counter()
            passed, detail = fn()
            elapsed = time.perf_counter() - start
            return CheckResult(num, name, bool(passed), detail, elapsed, budget)
    raise KeyError(number)


def run_all() -> list[CheckResult]:
    return [run_check(num) for num, *_ in CHECKS]
