"""Built-in experiments

Each experiment maps one sweep point to CSV rows. Column contracts are the
``columns`` tuples below; rows follow axis order.
"""

import logging
import math

import numpy as np

from channels import apply_channel, bell_state, make_channel, one_sided_bell_error, storage_decay
from dynamics import (
    bell_fidelity,
    bell_schedule,
    first_minimum_time,
    fit_ringdown,
    generate_bell_via_cable,
    infidelity_budget,
    mhz_to_rad_per_ns,
    simulate_cable_ringdown,
    simulate_vacuum_rabi,
)
from dynamics.cable import TimeSeries
from models import ExperimentSummary
from protocols import (
    CHECK,
    CONTROL,
    CYCLE_BUFFER_NS,
    CYCLE_GATE_NS,
    ISWAP_NS,
    STORAGE,
    ProtectionSeries,
    QuasiStaticNoise,
    Selection,
    analytic_purified_fidelity,
    calibrate_quasi_static_sigma,
    fit_effective_t2,
    kept_outcomes,
    protect_dd,
    protect_free,
    protect_rabi,
    purify,
    purify_double_selection,
    reference_noise,
    standard_gate,
    transfer_to_storage,
)
from quantum import CompositeSpace, ConfigError, DensityMatrix
from tomography import (
    VisibilityMatrix,
    apply_confusion,
    chi_of_unitary,
    measure_all_settings,
    process_fidelity,
    process_tomography,
    reconstruct_state,
    tomography_repeats,
)
from tomography.records import dump_records

from .registry import Experiment, ExperimentRegistry, Point, ResolvedRun, Row

logger = logging.getLogger(__name__)

DELAY_GRID = (10.0, 20.0, 50.0, 100.0, 150.0, 200.0, 300.0, 400.0)
PURIFY_GRID = (20.0, 50.0, 100.0, 200.0, 300.0, 400.0)


def _first(rows: list[Row], column: str) -> float:
    return float(rows[0][column])


def _last(rows: list[Row], column: str) -> float:
    return float(rows[-1][column])


def _is_multiple(total: float, step: float) -> bool:
    n = round(total / step)
    return n >= 1 and abs(n * step - total) <= 1e-9 * max(1.0, total)


def _check_unit_interval(run: ResolvedRun, *names: str) -> None:
    for name in names:
        value = float(run.param(name))
        if not 0.0 <= value <= 1.0:
            raise ConfigError(f"{name}={value:g} outside [0, 1]")


# --- vacuum-rabi ---


def _vacuum_rabi_point(point: Point, run: ResolvedRun) -> list[Row]:
    device = run.config.device
    qubit = run.param("qubit")
    t1_eff = device.coupler_on_T1_us or device.qubit(qubit).T1
    series = simulate_vacuum_rabi(
        g=mhz_to_rad_per_ns(point["g_mhz"]),
        T1_eff=t1_eff,
        T_phi=device.qubit(qubit).T_phi,
        T1r=device.T1r_ns,
        t_max=float(run.param("t_max_ns")),
        cable=device.cable(),
        n_points=int(run.param("n_points")),
        qubit=qubit,
    )
    return [
        {"g_mhz": point["g_mhz"], "t_ns": t, "pe": pe}
        for t, pe in zip(series.times_ns, series.values)
    ]


def _vacuum_rabi_summary(rows: list[Row], run: ResolvedRun) -> ExperimentSummary:
    table = []
    for g in run.axes["g_mhz"]:
        subset = [r for r in rows if r["g_mhz"] == g]
        series = TimeSeries(
            times_ns=tuple(r["t_ns"] for r in subset),
            values=tuple(r["pe"] for r in subset),
            observable="pe",
        )
        swap = first_minimum_time(series)
        table.append({"g_mhz": g, "swap_time_ns": swap, "oscillation_mhz": 1e3 / (2 * swap)})
    return ExperimentSummary(
        experiment=run.experiment.name,
        scalars={"swap_time_ns": table[0]["swap_time_ns"], "oscillation_mhz": table[0]["oscillation_mhz"]},
        table=table,
    )


# --- ringdown ---


def _ringdown_point(point: Point, run: ResolvedRun) -> list[Row]:
    device = run.config.device
    qubit = run.param("qubit")
    lifetimes = device.lifetimes(qubit) if run.param("qubit_decay") else (math.inf, math.inf)
    series = simulate_cable_ringdown(
        [point["delay_ns"]],
        swap_duration=float(run.param("swap_ns")),
        cable=device.cable(),
        qubit_lifetimes=lifetimes,
        qubit=qubit,
    )
    return [{"delay_ns": point["delay_ns"], "pe": series.values[0]}]


def _ringdown_summary(rows: list[Row], run: ResolvedRun) -> ExperimentSummary:
    summary = ExperimentSummary(
        experiment=run.experiment.name,
        scalars={"configured_t1r_ns": run.config.device.T1r_ns},
    )
    if len(rows) < 4:
        summary.notes.append("Fewer than 4 delays, no lifetime fit")
        return summary
    fit = fit_ringdown(
        TimeSeries(
            times_ns=tuple(r["delay_ns"] for r in rows),
            values=tuple(r["pe"] for r in rows),
            observable="pe",
        )
    )
    summary.scalars["fitted_t1r_ns"] = fit.t1r_ns
    summary.scalars["fitted_t1r_stderr_ns"] = fit.t1r_stderr_ns
    return summary


# --- bell-vs-delay ---


def _bell_vs_delay_point(point: Point, run: ResolvedRun) -> list[Row]:
    rho = generate_bell_via_cable(
        point["t_d_ns"],
        run.config.device.bell_link(),
        single_excitation=bool(run.param("single_excitation")),
    )
    budget = infidelity_budget(rho)
    ge = rho.space.basis_index("ge")
    eg = rho.space.basis_index("eg")
    return [
        {
            "t_d_ns": point["t_d_ns"],
            "fidelity": budget.fidelity,
            "gg_pop": rho.population("gg"),
            "offdiag_mag": float(abs(rho.entries[eg, ge])),
            "population_infidelity": budget.population,
            "coherence_infidelity": budget.coherence,
        }
    ]


def _bell_vs_delay_summary(rows: list[Row], run: ResolvedRun) -> ExperimentSummary:
    fidelities = [r["fidelity"] for r in rows]
    last = rows[-1]
    total = last["population_infidelity"] + last["coherence_infidelity"]
    summary = ExperimentSummary(
        experiment=run.experiment.name,
        scalars={
            "fidelity_first": fidelities[0],
            "fidelity_last": fidelities[-1],
            "population_fraction_last": last["population_infidelity"] / total if total > 0 else 0.0,
        },
        table=[{"t_d_ns": r["t_d_ns"], "fidelity": r["fidelity"]} for r in rows],
    )
    if any(b >= a for a, b in zip(fidelities, fidelities[1:])):
        summary.notes.append("Fidelity is not strictly decreasing along t_d")
    return summary


# --- purification pipelines ---


def _stored_pair(
    rho: DensityMatrix, run: ResolvedRun, labels: tuple[str, str], wait_ns: float, decay: bool
) -> DensityMatrix:
    stored = transfer_to_storage(rho, float(run.param("efficiency")), labels)
    if decay and wait_ns > 0:
        device = run.config.device
        stored = storage_decay(stored, {q: device.lifetimes(q) for q in labels}, wait_ns)
    return stored


def _pipeline_check(run: ResolvedRun) -> None:
    _check_unit_interval(run, "efficiency")
    if float(run.param("transfer_ns")) < 0:
        raise ConfigError("transfer_ns must be non-negative")
    if any(t_d < 0 for t_d in run.axes["t_d_ns"]):
        raise ConfigError("t_d_ns points must be non-negative")


def _purify_check(run: ResolvedRun) -> None:
    _pipeline_check(run)
    selection = run.param("selection")
    allowed = [s.value for s in Selection]
    if selection not in allowed:
        raise ConfigError(f"selection must be one of {allowed}, got {selection!r}")


def _generation_ns(t_d: float, run: ResolvedRun) -> float:
    """Time the stored pair waits while the next pair is generated and moved."""
    return bell_schedule(t_d, run.config.device.bell_link()).total_ns + float(
        run.param("transfer_ns")
    )


def _purify_point(point: Point, run: ResolvedRun) -> list[Row]:
    t_d = point["t_d_ns"]
    fresh = generate_bell_via_cable(t_d, run.config.device.bell_link())
    stored = _stored_pair(
        fresh, run, STORAGE, _generation_ns(t_d, run), bool(run.param("storage_decay"))
    )
    selection = run.param("selection")
    outcome = purify(stored, fresh, "bit", selection)

    vis = [VisibilityMatrix.from_qubit(run.config.device.qubit(q)) for q in STORAGE]
    true_probs = [outcome.outcome_probs[o] for o in ("gg", "ge", "eg", "ee")]
    measured = dict(zip(("gg", "ge", "eg", "ee"), apply_confusion(true_probs, vis)))
    kept = kept_outcomes(selection)
    f_pre = bell_fidelity(fresh)
    return [
        {
            "t_d_ns": t_d,
            "fidelity_pre": f_pre,
            "fidelity_stored": bell_fidelity(stored),
            "fidelity_post": outcome.fidelity,
            "success": outcome.success_prob,
            "success_raw": float(sum(measured[o] for o in kept)),
            "relative_gain": (outcome.fidelity - f_pre) / f_pre,
        }
    ]


def _purify_summary(rows: list[Row], run: ResolvedRun) -> ExperimentSummary:
    summary = ExperimentSummary(
        experiment=run.experiment.name,
        scalars={
            "fidelity_post_first": _first(rows, "fidelity_post"),
            "relative_gain_last": _last(rows, "relative_gain"),
        },
        table=[
            {
                "t_d_ns": r["t_d_ns"],
                "F_pre": r["fidelity_pre"],
                "F_post": r["fidelity_post"],
                "success": r["success"],
            }
            for r in rows
        ],
    )
    successes = [r["success"] for r in rows]
    if any(b > a for a, b in zip(successes, successes[1:])):
        summary.notes.append("Success rate is not decreasing along t_d")
    return summary


def _compare_point(point: Point, run: ResolvedRun) -> list[Row]:
    t_d, decay = point["t_d_ns"], bool(point["storage_decay"])
    fresh = generate_bell_via_cable(t_d, run.config.device.bell_link())
    wait = _generation_ns(t_d, run)

    # single round: Q1 waits for one more pair
    stored = _stored_pair(fresh, run, STORAGE, wait, decay)
    bit = purify(stored, fresh, "bit", "ee")
    phase = purify(stored, fresh, "phase", "ee")
    # double selection: Q1 waits for two pairs, Q3 for one
    first = _stored_pair(fresh, run, STORAGE, 2 * wait, decay)
    check = _stored_pair(fresh, run, CHECK, wait, decay)
    double = purify_double_selection(first, fresh, check)

    return [
        {
            "t_d_ns": t_d,
            "storage_decay": float(decay),
            "fidelity_pre": bell_fidelity(fresh),
            "bit_fidelity": bit.fidelity,
            "bit_success": bit.success_prob,
            "phase_fidelity": phase.fidelity,
            "phase_success": phase.success_prob,
            "double_fidelity": double.fidelity,
            "double_success": double.success_prob,
        }
    ]


def _compare_summary(rows: list[Row], run: ResolvedRun) -> ExperimentSummary:
    decayed = [r for r in rows if r["storage_decay"]] or rows
    first = decayed[0]
    return ExperimentSummary(
        experiment=run.experiment.name,
        scalars={
            "phase_gain_first": first["phase_fidelity"] - first["fidelity_pre"],
            "bit_minus_double_last": decayed[-1]["bit_fidelity"] - decayed[-1]["double_fidelity"],
        },
        table=[
            {
                "t_d_ns": r["t_d_ns"],
                "storage_decay": r["storage_decay"],
                "F_pre": r["fidelity_pre"],
                "F_bit": r["bit_fidelity"],
                "F_phase": r["phase_fidelity"],
                "F_double": r["double_fidelity"],
            }
            for r in rows
        ],
    )


def _analytic_point(point: Point, run: ResolvedRun) -> list[Row]:
    F = point["F"]
    good = bell_state("psi-").density().entries
    bad = bell_state("phi-").density().entries
    werner = DensityMatrix(space=CompositeSpace.qubits("A", "B"), entries=F * good + (1 - F) * bad)
    outcome = purify(werner, werner, "bit", "both-consistent")
    return [
        {
            "F": F,
            "F_purified": analytic_purified_fidelity(F),
            "F_circuit": outcome.fidelity,
            "success": outcome.success_prob,
        }
    ]


def _analytic_summary(rows: list[Row], run: ResolvedRun) -> ExperimentSummary:
    deviation = max(abs(r["F_purified"] - r["F_circuit"]) for r in rows)
    return ExperimentSummary(
        experiment=run.experiment.name,
        scalars={"max_deviation": deviation},
        table=[{"F": r["F"], "F_purified": r["F_purified"]} for r in rows],
    )


# --- protect ---


def _protect_point(point: Point, run: ResolvedRun) -> list[Row]:
    device = run.config.device
    rho0 = bell_state("psi-", CONTROL).density()
    t1 = tuple(device.qubit(q).T1 for q in CONTROL) if run.param("damping") else math.inf
    white = float(run.param("white_t_phi_us"))
    white = math.inf if white <= 0 else white
    sigma = float(run.param("sigma_rad_per_ns"))
    if sigma <= 0:
        sigma = calibrate_quasi_static_sigma(
            rho0,
            float(run.param("calibrate_fidelity")),
            float(run.param("calibrate_at_ns")),
            t1,
            white_t_phi_us=white,
        )
    noise = QuasiStaticNoise(
        sigma_detuning=sigma,
        n_trajectories=int(run.param("n_trajectories")),
        white_t_phi_us=white,
        seed=run.point_seed(point),
    )
    total = float(run.param("total_ns"))
    omega = mhz_to_rad_per_ns(point["omega_mhz"])
    dd_args = {"buffer_ns": point["dd_buffer_ns"], "gate_error": float(run.param("gate_error"))}

    def methods(n: QuasiStaticNoise) -> list[ProtectionSeries]:
        return [
            protect_free(rho0, total, n, t1),
            protect_dd(rho0, total, n, t1, **dd_args),
            protect_rabi(rho0, total, omega, n, t1),
        ]

    rows = []
    for s, ref in zip(methods(noise), methods(reference_noise(noise))):
        columns = zip(s.times_ns, s.fidelity_mean, s.fidelity_stderr, ref.fidelity_mean)
        for t, f, err, f_ref in columns:
            rows.append(
                {
                    "omega_mhz": point["omega_mhz"],
                    "dd_buffer_ns": point["dd_buffer_ns"],
                    "sigma_rad_per_ns": sigma,
                    "method": s.method,
                    "t_ns": t,
                    "fidelity": f,
                    "stderr": err,
                    "reference": f_ref,
                }
            )
    return rows


def _protect_summary(rows: list[Row], run: ResolvedRun) -> ExperimentSummary:
    at = float(run.param("calibrate_at_ns"))
    point = {k: rows[0][k] for k in ("omega_mhz", "dd_buffer_ns")}
    summary = ExperimentSummary(
        experiment=run.experiment.name,
        scalars={"sigma_rad_per_ns": float(rows[0]["sigma_rad_per_ns"])},
    )
    for method in ("free", "dd", "rabi"):
        subset = [
            r for r in rows if r["method"] == method and all(r[k] == v for k, v in point.items())
        ]
        times = tuple(r["t_ns"] for r in subset)
        series = ProtectionSeries(
            method=method,
            times_ns=times,
            fidelity_mean=tuple(r["fidelity"] for r in subset),
            fidelity_stderr=tuple(r["stderr"] for r in subset),
            n_traj=int(run.param("n_trajectories")),
        )
        reference = ProtectionSeries(
            method=f"{method}-reference",
            times_ns=times,
            fidelity_mean=tuple(r["reference"] for r in subset),
            fidelity_stderr=tuple(0.0 for _ in subset),
            n_traj=1,
        )
        if at <= series.times_ns[-1]:
            summary.scalars[f"{method}_fidelity_at_{at:.0f}ns"] = series.at(at)
        try:
            fit = fit_effective_t2(series, reference=reference)
        except (RuntimeError, ValueError) as e:
            summary.notes.append(f"No T2 fit for {method}: {e}")
            continue
        summary.scalars[f"{method}_t2_us"] = fit.t2_ns / 1e3
    return summary


def _protect_check(run: ResolvedRun) -> None:
    total = float(run.param("total_ns"))
    at = float(run.param("calibrate_at_ns"))
    sample = 2 * (CYCLE_GATE_NS + CYCLE_BUFFER_NS)
    if total <= 0 or not _is_multiple(total, sample):
        raise ConfigError(f"total_ns={total:g} must be a positive multiple of {sample:g} ns")
    for buffer in run.axes["dd_buffer_ns"]:
        cycle = 2 * (CYCLE_GATE_NS + buffer)
        if buffer < 0 or not _is_multiple(total, cycle):
            raise ConfigError(
                f"dd_buffer_ns={buffer:g} gives a {cycle:g} ns DD cycle that does not "
                f"divide total_ns={total:g}"
            )
    if any(omega < 0 for omega in run.axes["omega_mhz"]):
        raise ConfigError("omega_mhz must be non-negative")
    if not 0 < at <= total:
        raise ConfigError(f"calibrate_at_ns={at:g} must lie in (0, total_ns]")
    if not 0 < float(run.param("calibrate_fidelity")) < 1:
        raise ConfigError("calibrate_fidelity must lie in (0, 1)")
    if int(run.param("n_trajectories")) < 1:
        raise ConfigError("n_trajectories must be at least 1")
    if not 0 <= float(run.param("gate_error")) <= 1:
        raise ConfigError("gate_error must lie in [0, 1]")


# --- tomo-demo ---


def _tomo_truth(point: Point) -> DensityMatrix:
    return one_sided_bell_error("amplitude_damping", point["p"], CONTROL)


def _device_vis(run: ResolvedRun) -> list[VisibilityMatrix]:
    return [VisibilityMatrix.from_qubit(run.config.device.qubit(q)) for q in CONTROL]


def _tomo_point(point: Point, run: ResolvedRun) -> list[Row]:
    truth = _tomo_truth(point)
    vis = _device_vis(run)
    seed = run.point_seed(point)
    stats = tomography_repeats(truth, run.config.shots, vis, seed, run.config.repeats)

    cz = standard_gate("CZ").unitary.entries
    damping = make_channel("amplitude_damping", float(run.param("process_damping")))

    def noisy_cz(rho: DensityMatrix) -> DensityMatrix:
        out = DensityMatrix(space=rho.space, entries=cz @ rho.entries @ cz.conj().T)
        return apply_channel(out, damping, [rho.space.labels[1]])

    chi = process_tomography(noisy_cz, shots=run.config.shots, vis=vis, seed=seed)
    return [
        {
            "p": point["p"],
            "shots": float(run.config.shots),
            "mean_fidelity": stats.mean_fidelity,
            "std_fidelity": stats.std_fidelity,
            "process_fidelity": process_fidelity(chi_of_unitary(cz), chi),
        }
    ]


def _tomo_check(run: ResolvedRun) -> None:
    _check_unit_interval(run, "process_damping")
    if any(not 0.0 <= p <= 1.0 for p in run.axes["p"]):
        raise ConfigError("p points must lie in [0, 1]")


def _tomo_summary(rows: list[Row], run: ResolvedRun) -> ExperimentSummary:
    return ExperimentSummary(
        experiment=run.experiment.name,
        scalars={
            "mean_fidelity": _first(rows, "mean_fidelity"),
            "std_fidelity": _first(rows, "std_fidelity"),
            "process_fidelity": _first(rows, "process_fidelity"),
        },
        table=[
            {k: float(r[k]) for k in ("p", "mean_fidelity", "std_fidelity", "process_fidelity")}
            for r in rows
        ],
    )


def _tomo_extras(rows: list[Row], run: ResolvedRun) -> dict[str, str]:
    """Raw counts and reconstruction of the first repeat at each p."""
    files = {}
    for point in run.points():
        truth = _tomo_truth(point)
        seed = int(np.random.SeedSequence(run.point_seed(point)).generate_state(run.config.repeats)[0])
        records = measure_all_settings(truth, run.config.shots, _device_vis(run), seed)
        state = reconstruct_state(records, truth.space)
        files[f"tomography_p{point['p']:g}.json"] = dump_records(records, state)
    return files


def register_builtin_experiments(registry: ExperimentRegistry) -> None:
    registry.register(
        Experiment(
            name="vacuum-rabi",
            description="Excited qubit exchanging its photon with the central cable mode",
            axes={"g_mhz": (4.3,)},
            params={"t_max_ns": 200.0, "n_points": 401, "qubit": "Q2A"},
            columns=("g_mhz", "t_ns", "pe"),
            point=_vacuum_rabi_point,
            summarize=_vacuum_rabi_summary,
        )
    )
    registry.register(
        Experiment(
            name="ringdown",
            description="Photon stored in the cable for a variable delay, then retrieved",
            axes={"delay_ns": tuple(float(d) for d in range(0, 2001, 100))},
            params={"swap_ns": 30.0, "qubit": "Q2A", "qubit_decay": False},
            columns=("delay_ns", "pe"),
            point=_ringdown_point,
            summarize=_ringdown_summary,
        )
    )
    registry.register(
        Experiment(
            name="bell-vs-delay",
            description="Remote Bell-pair fidelity against the coupler idle delay",
            axes={"t_d_ns": DELAY_GRID},
            params={"single_excitation": True},
            columns=(
                "t_d_ns",
                "fidelity",
                "gg_pop",
                "offdiag_mag",
                "population_infidelity",
                "coherence_infidelity",
            ),
            point=_bell_vs_delay_point,
            summarize=_bell_vs_delay_summary,
        )
    )
    registry.register(
        Experiment(
            name="purify-sweep",
            description="One round of bit purification with a stored and a fresh pair",
            axes={"t_d_ns": PURIFY_GRID},
            params={
                "efficiency": 1.0,
                "storage_decay": True,
                "transfer_ns": ISWAP_NS,
                "selection": "ee",
            },
            columns=(
                "t_d_ns",
                "fidelity_pre",
                "fidelity_stored",
                "fidelity_post",
                "success",
                "success_raw",
                "relative_gain",
            ),
            point=_purify_point,
            summarize=_purify_summary,
            check=_purify_check,
        )
    )
    registry.register(
        Experiment(
            name="protocol-compare",
            description="Bit, phase and double-selection purification with and without storage decay",
            axes={"t_d_ns": PURIFY_GRID, "storage_decay": (1.0, 0.0)},
            params={"efficiency": 1.0, "transfer_ns": ISWAP_NS},
            columns=(
                "t_d_ns",
                "storage_decay",
                "fidelity_pre",
                "bit_fidelity",
                "bit_success",
                "phase_fidelity",
                "phase_success",
                "double_fidelity",
                "double_success",
            ),
            point=_compare_point,
            summarize=_compare_summary,
            check=_pipeline_check,
        )
    )
    registry.register(
        Experiment(
            name="analytic-purification",
            description="Closed-form purified fidelity against the circuit on Werner-like pairs",
            axes={"F": tuple(round(0.5 + 0.05 * i, 10) for i in range(11))},
            params={},
            columns=("F", "F_purified", "F_circuit", "success"),
            point=_analytic_point,
            summarize=_analytic_summary,
        )
    )
    registry.register(
        Experiment(
            name="protect",
            description="Free storage against dynamical decoupling and a continuous Rabi drive",
            axes={"omega_mhz": (5.0,), "dd_buffer_ns": (5.0,)},
            params={
                "total_ns": 2800.0,
                "calibrate_at_ns": 1400.0,
                "calibrate_fidelity": 0.576,
                "sigma_rad_per_ns": 0.0,
                "white_t_phi_us": 12.0,
                "n_trajectories": 400,
                "gate_error": 0.0,
                "damping": True,
            },
            columns=(
                "omega_mhz",
                "dd_buffer_ns",
                "sigma_rad_per_ns",
                "method",
                "t_ns",
                "fidelity",
                "stderr",
                "reference",
            ),
            point=_protect_point,
            summarize=_protect_summary,
            check=_protect_check,
        )
    )
    registry.register(
        Experiment(
            name="tomo-demo",
            description="State tomography repeats and CZ process tomography through noisy readout",
            axes={"p": (0.2,)},
            params={"process_damping": 0.02},
            columns=("p", "shots", "mean_fidelity", "std_fidelity", "process_fidelity"),
            point=_tomo_point,
            summarize=_tomo_summary,
            extras=_tomo_extras,
            check=_tomo_check,
        )
    )
