"""Temperature sweeps for the local (direct) and teleported (remote) thermometers."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass
from typing import Optional

import numpy as np

from .. import __version__
from ..errors import ThermoprobeError
from ..metrology import (
    SUPPORT_CUTOFF,
    ParameterizedState,
    finite_difference,
    hss,
    qfi_from_matrices,
)
from ..sensor import (
    SensorParams,
    gibbs_state,
    thermal_state_closed_form,
    thermal_state_derivative,
    trace_out_second_qubit,
)
from ..teleport import (
    channel_probabilities,
    fidelity,
    input_state,
    teleport_output,
    teleport_output_derivative,
)
from .scenario import ScenarioSpec

COLUMNS = (
    "vary_value",
    "T",
    "qfi_direct",
    "hss_direct",
    "qfi_remote",
    "hss_remote",
    "fidelity",
    "p0",
    "p1",
    "p2",
    "p3",
    "skipped_terms",
)


@dataclass(frozen=True)
class SweepRow:
    """One grid point.  Columns not produced by the scenario are ``None``."""

    vary_value: Optional[float]
    T: float
    qfi_direct: Optional[float]
    hss_direct: Optional[float]
    qfi_remote: Optional[float]
    hss_remote: Optional[float]
    fidelity: Optional[float]
    p0: float
    p1: float
    p2: float
    p3: float
    skipped_terms: int

    def values(self) -> tuple:
        return astuple(self)


@dataclass
class SweepResult:
    rows: list
    meta: dict

    def vary_values(self) -> list:
        seen = []
        for row in self.rows:
            if row.vary_value not in seen:
                seen.append(row.vary_value)
        return seen

    def column(self, name: str, vary_value=None) -> np.ndarray:
        """One column as a float array, restricted to a vary value when given."""
        rows = self.rows if vary_value is None else [r for r in self.rows if r.vary_value == vary_value]
        return np.array([getattr(r, name) for r in rows], dtype=float)


def thermal_family(params: SensorParams) -> ParameterizedState:
    """Thermal state as a function of temperature, with the analytic derivative when available."""
    if params.symmetric_point:
        return ParameterizedState(
            evaluate=lambda t: thermal_state_closed_form(params, t),
            derivative=lambda t: thermal_state_derivative(params, t),
            lower_bound=0.0,
        )
    return ParameterizedState(evaluate=lambda t: gibbs_state(params, t), lower_bound=0.0)


def evaluate_point(
    spec: ScenarioSpec, params: SensorParams, temperature: float, cutoff: float, vary_value=None
) -> SweepRow:
    family = thermal_family(params)
    rho_ch = family.evaluate(temperature)
    if family.derivative is not None:
        drho_ch = family.derivative(temperature)
    else:
        drho_ch = finite_difference(family, temperature)
    probs = channel_probabilities(rho_ch)
    skipped = 0

    qfi_direct = hss_direct = None
    if spec.scenario in ("direct", "both"):
        rho, drho = rho_ch, drho_ch
        if spec.reduced:
            rho, drho = trace_out_second_qubit(rho), trace_out_second_qubit(drho)
        report = qfi_from_matrices(rho, drho, cutoff=cutoff)
        qfi_direct, hss_direct = report.total, hss(drho)
        skipped += report.skipped_terms

    qfi_remote = hss_remote = fid = None
    if spec.scenario in ("remote", "both"):
        rho_in = input_state(spec.input)
        rho_out = teleport_output(rho_ch, rho_in)
        drho_out = teleport_output_derivative(drho_ch, rho_in)
        report = qfi_from_matrices(rho_out, drho_out, cutoff=cutoff)
        qfi_remote, hss_remote = report.total, hss(drho_out)
        fid = fidelity(rho_in, rho_out)
        skipped += report.skipped_terms

    return SweepRow(
        vary_value=vary_value,
        T=temperature,
        qfi_direct=qfi_direct,
        hss_direct=hss_direct,
        qfi_remote=qfi_remote,
        hss_remote=hss_remote,
        fidelity=fid,
        p0=probs[0],
        p1=probs[1],
        p2=probs[2],
        p3=probs[3],
        skipped_terms=skipped,
    )


def run_sweep(spec: ScenarioSpec, *, cutoff: float = SUPPORT_CUTOFF, workers: int = 1) -> SweepResult:
    """Evaluate every (vary value, temperature) grid point of ``spec``.

    Rows come back sorted by vary value, then temperature, regardless of
    ``workers``.  Module errors are re-raised with the offending point attached.
    """
    temps = spec.t_grid.points()
    if spec.vary is None:
        variants = [(None, spec.params)]
    else:
        variants = [
            (v, spec.params.replace(**{spec.vary.field: v})) for v in sorted(set(spec.vary.values))
        ]
    tasks = [(v, p, t) for v, p in variants for t in temps]

    def run(task):
        v, p, t = task
        try:
            return evaluate_point(spec, p, t, cutoff, vary_value=v)
        except ThermoprobeError as exc:
            where = f"vary_value={v!r}, T={t!r}"
            err = type(exc)(f"{exc} [at {where}]")
            err.vary_value, err.temperature = v, t
            raise err from exc

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, tasks))
    else:
        rows = [run(task) for task in tasks]

    for row in rows:
        for value in row.values():
            if isinstance(value, float) and math.isnan(value):
                raise ThermoprobeError(f"NaN produced at vary_value={row.vary_value}, T={row.T}")

    meta = {
        "tool": "thermoprobe",
        "version": __version__,
        "spec": spec.to_dict(),
        "cutoff": cutoff,
        "derivative": "analytic" if spec.params.symmetric_point else "finite_difference",
        "units": "hbar = k_B = 1",
    }
    return SweepResult(rows=rows, meta=meta)
