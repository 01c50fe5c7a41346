"""Experiment drivers behind the CLI: parameter sweeps producing CSV or JSON.

Six experiments are registered:

    tetra_sweep          concurrence over the probability simplex at fixed
                         mixing angles (analytic, noisy-simulated, and
                         shot-reconstructed columns)
    heisenberg_conc      concurrence vs time for the zero-field exchange
                         model, 3-observable reconstruction
    field_conc           same with a z-field present, 5-observable
                         reconstruction
    heisenberg_fidelity  reconstruction fidelity vs time, all three
                         protocols
    field_fidelity       same with field; the 3-observable protocol is
                         omitted because the evolved corners are complex
    xprep_single         one-state pipeline inspection, JSON only

Analytic columns are pure functions of the physics parameters; shots, seed,
and noise touch only the simulated columns. Per-point sampling seeds are
derived from the master seed and the point index, so rerunning any
experiment with the same config is byte-identical.

The time-sweep initial state is a two-sector classical mixture: sector
weights (r0, r1) = (cos^2(gamma/2), sin^2(gamma/2)) and an imbalance lambda
within each sector, giving circuit weights (q0 r0, q0 r1, q1 r0, q1 r1)
with q0 = (1+lambda)/2. The zero-field target applies the eigenbasis block
at angles (theta, phi) = (Jk t, J t); the field target evolves the matching
diagonal state with the exact propagator. At B = b = 0 the two targets
agree entry for entry up to a local corner phase, so the analytic
concurrence columns coincide.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit, build_complex_xstate_circuit, build_xstate_circuit, run_density
from .errors import ConfigError, ContractError
from .heisenberg import HeisenbergParams, evolve_diagonal
from .linalg import fidelity, partial_trace
from .noise import NoiseModel, readout_flip, run_noisy
from .rng import derive_seed
from .tomography import (
    PARTIAL3,
    PARTIAL5,
    TomographyReport,
    exact_record,
    reconstruct_x3,
    reconstruct_x5,
    robustness_report,
    sample_setting,
)
from .xstate import (
    XSpectral,
    XState,
    canonicalize_spectral,
    concurrence_wootters_oracle,
    concurrence_x,
    from_spectral,
    leakage,
    xstate_from_matrix,
)

FIDELITY_CONVENTION = "squared-uhlmann"

_REQUIRED = object()

_COMMON_DEFAULTS = {
    "shots": 8000,
    "seed": 0,
    "exact": False,
    "noise": None,  # resolved to NoiseModel defaults
}

_TIME_DEFAULTS = {
    "time_points": 64,
    "t_max": None,
    "lambda": 1.0,
    "J": 1.0,
    "Jz": 0.0,
}

PARAM_SPECS = {
    "tetra_sweep": {
        **_COMMON_DEFAULTS,
        "resolution": 8,
        "theta": math.pi / 6,
        "phi": math.pi / 6,
    },
    "heisenberg_conc": {
        **_COMMON_DEFAULTS,
        **_TIME_DEFAULTS,
        "kappa": 0.75,
        "gamma": 2.0 * math.acos(math.sqrt(7.0 / 8.0)),
    },
    "heisenberg_fidelity": {
        **_COMMON_DEFAULTS,
        **_TIME_DEFAULTS,
        "kappa": 0.75,
        "gamma": 2.0 * math.acos(math.sqrt(7.0 / 8.0)),
    },
    "field_conc": {
        **_COMMON_DEFAULTS,
        **_TIME_DEFAULTS,
        "kappa": 0.95,
        "gamma": 2.0 * math.acos(math.sqrt(3.0 / 4.0)),
        "B": 1.0,
        "b": 0.5,
    },
    "field_fidelity": {
        **_COMMON_DEFAULTS,
        **_TIME_DEFAULTS,
        "kappa": 0.95,
        "gamma": 2.0 * math.acos(math.sqrt(3.0 / 4.0)),
        "B": 1.0,
        "b": 0.5,
    },
    "xprep_single": {
        **_COMMON_DEFAULTS,
        "target": _REQUIRED,
    },
}


@dataclass(frozen=True)
class SimplexGrid:
    """Probability 4-vectors with components that are multiples of 1/resolution."""

    resolution: int

    def __post_init__(self):
        if self.resolution < 1:
            raise ConfigError(f"grid resolution must be >= 1, got {self.resolution}")

    def points(self):
        n = self.resolution
        for i in range(n + 1):
            for j in range(n - i + 1):
                for k in range(n - i - j + 1):
                    yield (i / n, j / n, k / n, (n - i - j - k) / n)

    def __len__(self):
        n = self.resolution
        return (n + 1) * (n + 2) * (n + 3) // 6


@dataclass(frozen=True)
class ExperimentResult:
    columns: tuple
    rows: tuple
    report: dict | None = None
    circuits: tuple = field(default_factory=tuple)  # (label, Circuit) pairs


def resolve_params(experiment: str, given: dict) -> dict:
    """Fill defaults and reject unknown keys; returns plain resolved values."""
    if experiment not in PARAM_SPECS:
        raise ConfigError(f"unknown experiment {experiment!r}")
    spec = PARAM_SPECS[experiment]
    unknown = set(given) - set(spec)
    if unknown:
        raise ConfigError(f"unknown parameter keys for {experiment}: {sorted(unknown)}")
    out = {}
    for key, default in spec.items():
        if key in given:
            out[key] = given[key]
        elif default is _REQUIRED:
            raise ConfigError(f"{experiment} requires parameter {key!r}")
        else:
            out[key] = default
    try:
        out["noise"] = NoiseModel() if out["noise"] is None else NoiseModel.from_json(out["noise"])
    except Exception as exc:
        raise ConfigError(f"invalid noise model: {exc}") from exc
    out["shots"] = int(out["shots"])
    out["seed"] = int(out["seed"])
    out["exact"] = bool(out["exact"])
    if out["shots"] < 1:
        raise ConfigError("shots must be >= 1")
    for key in spec:
        if key in ("shots", "seed", "exact", "noise", "target", "resolution", "time_points", "t_max"):
            continue
        out[key] = float(out[key])
    if "lambda" in out and not -1.0 <= out["lambda"] <= 1.0:
        raise ConfigError("lambda must lie in [-1, 1]")
    if "resolution" in out:
        out["resolution"] = int(out["resolution"])
    if "time_points" in out:
        out["time_points"] = int(out["time_points"])
        if out["time_points"] < 2:
            raise ConfigError("time_points must be >= 2")
    return out


def _couplings(params: dict) -> HeisenbergParams:
    return HeisenbergParams.from_j_kappa(
        j=params["J"],
        kappa=params["kappa"],
        jz=params["Jz"],
        B=params.get("B", 0.0),
        b=params.get("b", 0.0),
    )


def _time_grid(params: dict, hp: HeisenbergParams) -> np.ndarray:
    t_max = params["t_max"]
    if t_max is None:
        scale = max(abs(hp.j), abs(hp.j_kappa), hp.xi, hp.eta)
        if scale <= 0.0:
            raise ConfigError("all energy scales vanish; give t_max explicitly")
        t_max = 2.0 * math.pi / scale
    t_max = float(t_max)
    if t_max <= 0.0:
        raise ConfigError(f"t_max must be positive, got {t_max}")
    return np.linspace(0.0, t_max, params["time_points"])


def _circuit_weights(params: dict) -> tuple:
    """(q0 r0, q0 r1, q1 r0, q1 r1): sector weights from gamma, imbalance
    lambda within each sector."""
    q0 = 0.5 * (1.0 + params["lambda"])
    q1 = 1.0 - q0
    half = 0.5 * params["gamma"]
    r0 = math.cos(half) ** 2
    r1 = 1.0 - r0
    return (q0 * r0, q0 * r1, q1 * r0, q1 * r1)


def _initial_density(width: int) -> np.ndarray:
    rho = np.zeros((2**width, 2**width), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def _prepared_pair(circ: Circuit, nm: NoiseModel) -> np.ndarray:
    """Run the 4-qubit preparation under noise, reduced to the output pair."""
    rho = run_noisy(circ, _initial_density(circ.width), nm)
    return partial_trace(rho, keep=(2, 3))


def _partial_records(rho_pair: np.ndarray, settings, shots: int, seed: int, nm: NoiseModel, exact: bool):
    records = []
    for setting in settings:
        if exact:
            rec = exact_record(rho_pair, setting)
        else:
            rec = sample_setting(rho_pair, setting, shots, seed)
        if nm.p_readout > 0.0:
            rec = readout_flip(rec, nm.p_readout, seed)
        records.append(rec)
    return records


def run_tetra_sweep(params: dict) -> ExperimentResult:
    nm = params["noise"]
    theta, phi = params["theta"], params["phi"]
    rows = []
    circuits = []
    for index, p in enumerate(SimplexGrid(params["resolution"]).points()):
        target = from_spectral(XSpectral(p[0], p[1], p[2], p[3], theta, phi).validate())
        c_analytic = concurrence_x(target)
        circ = build_xstate_circuit(p, theta, phi)
        noisy_pair = _prepared_pair(circ, nm)
        c_noisy = concurrence_wootters_oracle(noisy_pair)
        point_seed = derive_seed(params["seed"], index)
        records = _partial_records(noisy_pair, PARTIAL3, params["shots"], point_seed, nm, params["exact"])
        c_shot = concurrence_x(reconstruct_x3(records))
        rows.append((p[0], p[1], p[2], p[3], c_analytic, c_noisy, c_shot))
        circuits.append((f"point_{index}", circ))
    return ExperimentResult(
        columns=("p00", "p01", "p10", "p11", "c_analytic", "c_noisy_sim", "c_shot_tomo"),
        rows=tuple(rows),
        circuits=tuple(circuits),
    )


def _zero_field_target(params: dict, hp: HeisenbergParams, t: float) -> tuple:
    """(spectral, XState) of the zero-field evolved mixture at time t."""
    spectral = canonicalize_spectral(_circuit_weights(params), hp.j_kappa * t, hp.j * t)
    return spectral, from_spectral(spectral)


def _field_target(params: dict, hp: HeisenbergParams, t: float) -> XState:
    """Exact evolution of the matching diagonal initial state.

    The computational-basis populations are the t -> 0 limit of the
    zero-field construction: (q0 r0, q1 r1, q0 r1, q1 r0)."""
    w00, w01, w10, w11 = _circuit_weights(params)
    populations = (w00, w11, w01, w10)
    return evolve_diagonal(hp, populations, t)


def run_heisenberg_conc(params: dict) -> ExperimentResult:
    nm = params["noise"]
    hp = _couplings(params)
    rows = []
    circuits = []
    for index, t in enumerate(_time_grid(params, hp)):
        spectral, target = _zero_field_target(params, hp, t)
        c_analytic = concurrence_wootters_oracle(target.matrix())
        circ = build_xstate_circuit(spectral.probs, spectral.theta, spectral.phi)
        noisy_pair = _prepared_pair(circ, nm)
        point_seed = derive_seed(params["seed"], index)
        records = _partial_records(noisy_pair, PARTIAL3, params["shots"], point_seed, nm, params["exact"])
        c_rec = concurrence_x(reconstruct_x3(records))
        rows.append((float(t), c_analytic, c_rec))
        circuits.append((f"t_{index}", circ))
    return ExperimentResult(
        columns=("t", "c_analytic", "c_reconstructed"),
        rows=tuple(rows),
        circuits=tuple(circuits),
    )


def run_field_conc(params: dict) -> ExperimentResult:
    nm = params["noise"]
    hp = _couplings(params)
    rows = []
    circuits = []
    for index, t in enumerate(_time_grid(params, hp)):
        target = _field_target(params, hp, t)
        c_analytic = concurrence_wootters_oracle(target.matrix())
        circ, _, _ = build_complex_xstate_circuit(target.matrix())
        noisy_pair = _prepared_pair(circ, nm)
        point_seed = derive_seed(params["seed"], index)
        records = _partial_records(noisy_pair, PARTIAL5, params["shots"], point_seed, nm, params["exact"])
        c_rec = concurrence_x(reconstruct_x5(records))
        rows.append((float(t), c_analytic, c_rec))
        circuits.append((f"t_{index}", circ))
    return ExperimentResult(
        columns=("t", "c_analytic", "c_reconstructed"),
        rows=tuple(rows),
        circuits=tuple(circuits),
    )


def run_fidelity_experiment(params: dict, with_field: bool) -> ExperimentResult:
    nm = params["noise"]
    hp = _couplings(params)
    rows = []
    circuits = []
    for index, t in enumerate(_time_grid(params, hp)):
        if with_field:
            target = _field_target(params, hp, t)
            circ, _, _ = build_complex_xstate_circuit(target.matrix())
        else:
            spectral, target = _zero_field_target(params, hp, t)
            circ = build_xstate_circuit(spectral.probs, spectral.theta, spectral.phi)
        noisy_pair = _prepared_pair(circ, nm)
        point_seed = derive_seed(params["seed"], index)
        full, p5, p3 = robustness_report(
            target.matrix(),
            noisy_pair,
            params["shots"],
            point_seed,
            p_readout=nm.p_readout,
            exact=params["exact"],
        )
        if with_field:
            rows.append((float(t), full.fidelity_to_target, p5.fidelity_to_target, full.leakage))
        else:
            rows.append(
                (float(t), full.fidelity_to_target, p5.fidelity_to_target, p3.fidelity_to_target, full.leakage)
            )
        circuits.append((f"t_{index}", circ))
    columns = ("t", "f_full", "f_partial5", "leakage") if with_field else (
        "t", "f_full", "f_partial5", "f_partial3", "leakage")
    return ExperimentResult(columns=columns, rows=tuple(rows), circuits=tuple(circuits))


def _parse_target(obj) -> tuple:
    """Returns (XState, XSpectral or None) from the xprep_single target key."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigError("target must be an object with a 'kind' key")
    body = {k: v for k, v in obj.items() if k != "kind"}
    # decoding problems are configuration mistakes; a well-formed but
    # unphysical target is a contract violation and propagates as such
    if obj["kind"] == "spectral":
        try:
            spectral = XSpectral.from_json(body)
        except (KeyError, TypeError, ValueError, ContractError) as exc:
            raise ConfigError(f"malformed spectral target: {exc}") from exc
        spectral.validate()
        return from_spectral(spectral), spectral
    if obj["kind"] == "xstate":
        try:
            x = XState.from_json(body)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed xstate target: {exc}") from exc
        x.validate()
        return x, None
    raise ConfigError(f"unknown target kind {obj['kind']!r}")


def run_xprep_single(params: dict) -> ExperimentResult:
    nm = params["noise"]
    target_x, spectral = _parse_target(params["target"])
    if spectral is not None:
        circ = build_xstate_circuit(spectral.probs, spectral.theta, spectral.phi)
        phases = (0.0, 0.0)
    else:
        circ, spectral, phases = build_complex_xstate_circuit(target_x.matrix())
    ideal_pair = partial_trace(run_density(circ, _initial_density(circ.width)), keep=(2, 3))
    noisy_pair = _prepared_pair(circ, nm)
    seed = params["seed"]
    records = _partial_records(noisy_pair, PARTIAL5, params["shots"], seed, nm, params["exact"])
    x5 = reconstruct_x5(records)
    report = TomographyReport(
        protocol="partial5",
        reconstructed=x5.matrix(),
        fidelity_to_target=fidelity(x5.matrix(), target_x.matrix()),
        leakage=leakage(noisy_pair),
        shots=0 if params["exact"] else params["shots"],
        seed=seed,
    )
    payload = {
        "target": target_x.to_json(),
        "spectral": spectral.to_json(),
        "phase_record": list(phases),
        "circuit": circ.to_json(),
        "ideal_output": xstate_from_matrix(ideal_pair).to_json(),
        "noisy_output": {
            "re": noisy_pair.real.tolist(),
            "im": noisy_pair.imag.tolist(),
            "leakage": leakage(noisy_pair),
        },
        "reconstruction": report.to_json(),
        "concurrence": {
            "analytic": concurrence_x(target_x),
            "ideal": concurrence_wootters_oracle(ideal_pair),
            "noisy": concurrence_wootters_oracle(noisy_pair),
            "reconstructed": concurrence_x(x5),
        },
    }
    return ExperimentResult(columns=(), rows=(), report=payload, circuits=(("target", circ),))


RUNNERS = {
    "tetra_sweep": run_tetra_sweep,
    "heisenberg_conc": run_heisenberg_conc,
    "field_conc": run_field_conc,
    "heisenberg_fidelity": lambda p: run_fidelity_experiment(p, with_field=False),
    "field_fidelity": lambda p: run_fidelity_experiment(p, with_field=True),
    "xprep_single": run_xprep_single,
}


def run_experiment(experiment: str, raw_params: dict) -> tuple:
    """Resolve parameters and run; returns (resolved params, result)."""
    params = resolve_params(experiment, raw_params)
    return params, RUNNERS[experiment](params)


def _fmt_value(v) -> str:
    if isinstance(v, float):
        return "%.12g" % v
    return str(v)


def format_csv(result: ExperimentResult) -> str:
    lines = [",".join(result.columns)]
    for row in result.rows:
        lines.append(",".join(_fmt_value(v) for v in row))
    return "\n".join(lines) + "\n"


def provenance(experiment: str, params: dict) -> dict:
    info = {
        "experiment": experiment,
        "seed": params["seed"],
        "shots": params["shots"],
        "exact": params["exact"],
        "noise": params["noise"].to_json(),
        "fidelity_convention": FIDELITY_CONVENTION,
    }
    return info


def format_json(experiment: str, params: dict, result: ExperimentResult) -> str:
    payload = {"provenance": provenance(experiment, params)}
    if result.report is not None:
        payload["report"] = result.report
    else:
        payload["columns"] = list(result.columns)
        payload["rows"] = [list(r) for r in result.rows]
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def format_circuit_dump(result: ExperimentResult) -> str:
    payload = [{"label": label, "circuit": circ.to_json()} for label, circ in result.circuits]
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
