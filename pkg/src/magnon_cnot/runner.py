"""Scenario execution, sweeps and CSV/JSON emission."""
from __future__ import annotations

import io
import csv
import json
import math
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .chain import FieldProfile, HyperfineParameters, LadderParameters, local_gap
from .config import _UNITLESS, ScenarioConfig
from .coupling import MagnonOccupation, lattice_sum, thermal_occupation, w_ij_general, w_ij_k0
from .decoherence import gate_fidelity_vs_noise
from .dynamics import ExcitationParameters, evolve_population, packet_region
from .gate import (
    GateParameters,
    cnot_image,
    cnot_sequence,
    h_tr_shift,
    measure_h_tr_protocol,
    run_sequence,
    superposition_test,
)
from .initializer import initial_register_state, polarization_buildup, pure_state_fraction
from .states import BASIS_LABELS, Axis, TwoQubitState
from .units import (
    CONSTANTS,
    kelvin_to_hz,
    kilo_oersted_to_tesla,
    larmor_frequency,
    mhz_per_koe_to_hz_per_tesla,
)

JOBS_ENV = "MAGNON_CNOT_JOBS"


@dataclass
class RunReport:
    scenario: str
    parameters: dict
    rows: list
    headline: dict
    errors: list = field(default_factory=list)
    version: str = __version__
    wall_time_s: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "parameters": self.parameters,
            "rows": self.rows,
            "headline": self.headline,
            "errors": self.errors,
            "version": self.version,
            "wall_time_s": self.wall_time_s,
        }

    def to_json(self) -> str:
        return json.dumps(_jsonable(self.to_dict()), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        return rows_to_csv(self.rows)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, str)):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.8e}"


def rows_to_csv(rows: list[dict]) -> str:
    columns: list[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(c)) for c in columns])
    return buf.getvalue()


# -- parameter resolution -------------------------------------------------

def _ladder(p) -> LadderParameters:
    return LadderParameters.from_kelvin(
        p["J_kelvin"], j1=p["j1"], g=p["g"], N_chain=p.get("N_chain_sites", 100)
    )


def _hyperfine(p) -> HyperfineParameters:
    return HyperfineParameters(
        kilo_oersted_to_tesla(p.get("A_par_kOe_per_muB", 100.0)),
        kilo_oersted_to_tesla(p.get("A_perp_kOe_per_muB", 0.0)),
        mhz_per_koe_to_hz_per_tesla(p["gamma_MHz_per_kOe"]),
    )


_INTERNAL = {
    "J_kelvin": ("J_Hz", kelvin_to_hz),
    "A_par_kOe_per_muB": ("A_par_T_per_muB", kilo_oersted_to_tesla),
    "A_perp_kOe_per_muB": ("A_perp_T_per_muB", kilo_oersted_to_tesla),
    "gamma_MHz_per_kOe": ("gamma_Hz_per_T", mhz_per_koe_to_hz_per_tesla),
    "mw_linewidth_MHz": ("mw_linewidth_Hz", lambda x: x * 1e6),
    "omega_n_MHz": ("omega_n_Hz", lambda x: None if x is None else x * 1e6),
}


def resolve_parameters(p: dict) -> dict:
    """Parameters re-expressed in internal units (Hz, T, s, lattice sites)."""
    out = {}
    for key, value in p.items():
        if key in _INTERNAL:
            name, conv = _INTERNAL[key]
            out[name] = conv(value)
        else:
            out[key] = value
    return dict(sorted(out.items()))


def _coupling_W(p) -> float:
    if p.get("W_Hz") is not None:
        return p["W_Hz"]
    return w_ij_k0(p["n0_per_site"], _ladder(p), _hyperfine(p), p["N_modes"], p["r_ij_sites"])


def _gate_params(p) -> GateParameters:
    hf = _hyperfine(p)
    axis = p.get("second_axis", "auto")
    return GateParameters(
        W=_coupling_W(p),
        H_tr=h_tr_shift(hf, p["n0_per_site"], p.get("m_eff_muB", 1.0)),
        gamma_n_over_2pi=hf.gamma_n_over_2pi,
        frame=p.get("frame", "shifted"),
        second_axis=None if axis == "auto" else Axis(axis),
    )


# -- scenarios ------------------------------------------------------------
# each returns (rows, headline)

def _scenario_coupling(p):
    W = _coupling_W(p)
    row = {
        "r_ij_sites": p["r_ij_sites"],
        "n0_per_site": p["n0_per_site"],
        "N_modes_count": p["N_modes"],
        "lattice_sum_dimless": lattice_sum(p["N_modes"], p["r_ij_sites"]),
        "W_ij_Hz": W,
        "t_gate_s": 1 / (2 * abs(W)) if W != 0 else None,
    }
    headline = {k: row[k] for k in ("W_ij_Hz", "t_gate_s", "lattice_sum_dimless")}
    return [row], headline


def _scenario_range_profile(p):
    ladder, hf = _ladder(p), _hyperfine(p)
    N = p["N_modes"]
    driven = MagnonOccupation.driven(N, p["n0_per_site"])
    gap = ladder.zero_field_gap - ladder.g * CONSTANTS.mu_B_over_h * p["field_T"]
    thermal = thermal_occupation(ladder, p["T_kelvin"], N, gap)
    rows = [
        {
            "r_sites": r,
            "W_driven_Hz": w_ij_general(driven, ladder, hf, r),
            "W_thermal_Hz": w_ij_general(thermal, ladder, hf, r),
        }
        for r in range(p["r_max_sites"] + 1)
    ]
    headline = {
        "W_ij_Hz": w_ij_general(driven, ladder, hf, p["r_ij_sites"]),
        "local_gap_Hz": gap,
    }
    return rows, headline


def _scenario_dynamics(p):
    W_ex = p["W_ex_per_s"]
    if p.get("kappa_per_s_per_W") is not None and p.get("P_mw_W") is not None:
        exc = ExcitationParameters.from_power(p["kappa_per_s_per_W"], p["P_mw_W"], p["T_s"])
    else:
        exc = ExcitationParameters(W_ex, p["T_s"])
    times = np.linspace(0.0, p["t_s"], p["samples"])
    rows = [{"t_s": float(t), "n0_frac": evolve_population(p["n_init"], exc, float(t))} for t in times]
    ladder = _ladder(p)
    field = FieldProfile(p["field_T"], p["gradient_T_per_site"], p["N_chain_sites"])
    omega = local_gap(ladder, field, p["mw_center_sites"])
    packet = packet_region(ladder, field, omega, p["mw_linewidth_MHz"] * 1e6)
    headline = {
        "W_ex_per_s": exc.W_ex,
        "n_final_frac": rows[-1]["n0_frac"],
        "n_steady_frac": exc.steady_state,
        "omega_mw_Hz": omega,
        "packet_x_lo_sites": packet.x_lo,
        "packet_x_hi_sites": packet.x_hi,
        "packet_N_region_count": packet.N_region,
    }
    return rows, headline


def _scenario_gate(p):
    params = _gate_params(p)
    seq = cnot_sequence(params)
    rows = []
    for c in (0, 1):
        for t in (0, 1):
            out = run_sequence(TwoQubitState.basis(c, t), seq)
            image = cnot_image(c, t)
            rows.append({
                "input_state": BASIS_LABELS[2 * c + t],
                "output_state": BASIS_LABELS[image],
                "fidelity_frac": float(out.populations()[image]),
            })
    pops, target_purity = superposition_test(params)
    headline = {
        "W_ij_Hz": params.W,
        "t_gate_s": params.gate_time,
        "H_tr_T": params.H_tr,
        "H_tr_measured_T": measure_h_tr_protocol(params),
        "larmor_shift_frac": params.H_tr / p["field_T"],
        "fidelity_min_frac": min(r["fidelity_frac"] for r in rows),
        "superposition_p00_frac": float(pops[0]),
        "superposition_p11_frac": float(pops[3]),
        "target_purity_frac": target_purity,
    }
    return rows, headline


def _scenario_noise_sweep(p):
    params = _gate_params(p)
    t_gate = params.gate_time
    rows = []
    for ratio in p["T1_over_t_gate"]:
        rows.append({
            "T1_over_t_gate_ratio": ratio,
            "t_gate_over_T1_ratio": 1 / ratio,
            "T1_s": ratio * t_gate,
            "fidelity_frac": gate_fidelity_vs_noise(params, ratio * t_gate),
        })
    headline = {"t_gate_s": t_gate, "W_ij_Hz": params.W}
    if len(rows) == 1:
        headline["fidelity_frac"] = rows[0]["fidelity_frac"]
    return rows, headline


def _scenario_init(p):
    if p.get("omega_n_MHz") is not None:
        omega = p["omega_n_MHz"] * 1e6
    else:
        omega = larmor_frequency(mhz_per_koe_to_hz_per_tesla(p["gamma_MHz_per_kOe"]), p["field_T"])
    rows = [
        {"N_qubits_count": n, "pure_state_fraction_rel": pure_state_fraction(omega, p["T_bath_K"], n)}
        for n in range(1, p["N_qubits"] + 1)
    ]
    P_n = polarization_buildup(p["P_e"], p["tau_transfer_s"], p["t_pump_s"])
    pops = initial_register_state(P_n, 2)
    headline = {
        "omega_n_Hz": omega,
        "pure_state_fraction_rel": rows[-1]["pure_state_fraction_rel"],
        "P_n_frac": P_n,
    }
    for label, v in zip(BASIS_LABELS, pops):
        headline[f"register_p{label}_frac"] = float(v)
    return rows, headline


SCENARIO_FUNCS = {
    "coupling": _scenario_coupling,
    "range_profile": _scenario_range_profile,
    "dynamics": _scenario_dynamics,
    "gate": _scenario_gate,
    "noise_sweep": _scenario_noise_sweep,
    "init": _scenario_init,
}


# -- execution ------------------------------------------------------------

def _jobs(jobs: Optional[int]) -> int:
    if jobs is None:
        jobs = int(os.environ.get(JOBS_ENV, "1") or 1)
    return max(1, jobs)


def _sweep_column(key: str) -> str:
    return f"{key}_dimless" if key in _UNITLESS else key


def _sweep_point(config: ScenarioConfig, value: float) -> dict:
    key = config.sweep.key
    row = {_sweep_column(key): value}
    try:
        point = config.with_parameter(key, value)
        _, headline = SCENARIO_FUNCS[config.scenario](point.parameters)
        row.update(headline)
    except Exception as exc:  # per-row failure, run continues
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def run_sweep(config: ScenarioConfig, jobs: Optional[int] = None) -> RunReport:
    """One row per grid point, ordered by grid index."""
    start = time.perf_counter()
    values = config.sweep.values()
    with ThreadPoolExecutor(max_workers=_jobs(jobs)) as pool:
        rows = list(pool.map(lambda v: _sweep_point(config, v), values))
    errors = [
        {"index": i, "message": r["error"]} for i, r in enumerate(rows) if "error" in r
    ]
    return RunReport(
        scenario=config.scenario,
        parameters=resolve_parameters(config.parameters),
        rows=rows,
        headline={"points": len(rows), "failed": len(errors)},
        errors=errors,
        wall_time_s=time.perf_counter() - start,
    )


def run_scenario(
    config: ScenarioConfig,
    out_dir: Optional[str] = None,
    formats: Optional[tuple] = None,
    jobs: Optional[int] = None,
    write: bool = True,
) -> RunReport:
    """Run a validated config; write ``<scenario>.csv`` / ``<scenario>.json``."""
    if config.sweep is not None:
        report = run_sweep(config, jobs)
    else:
        start = time.perf_counter()
        try:
            rows, headline = SCENARIO_FUNCS[config.scenario](config.parameters)
            errors = []
        except Exception as exc:
            rows, headline = [], {}
            errors = [{"index": None, "message": f"{config.scenario}: {type(exc).__name__}: {exc}"}]
        report = RunReport(
            scenario=config.scenario,
            parameters=resolve_parameters(config.parameters),
            rows=rows,
            headline=headline,
            errors=errors,
            wall_time_s=time.perf_counter() - start,
        )
    if write:
        directory = out_dir or config.output_directory
        for fmt in formats or config.formats:
            body = report.to_csv() if fmt == "csv" else report.to_json()
            atomic_write(os.path.join(directory, f"{config.scenario}.{fmt}"), body)
    return report


def atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
