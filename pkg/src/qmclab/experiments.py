"""Named experiments driven by the ``qmclab`` command.

Each experiment is split into independent tasks.  A task gets its own seed,
derived from the master seed and the task index, and returns a list of
records.  Records are concatenated in task order, so the output never
depends on how tasks were scheduled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from ._rng import derive_seed, make_rng
from .clone import SHRINK, bh_clone, clone_then_tomograph
from .estimate import (
    HalfIntervalOracle, angle_from_bloch, bisection_search, circular_axis_std,
    complexity_profile, ESTIMATORS, mle_polarization, pauli_tomography,
    signed_axis_error, uncertainty_product,
)
from .fock import coherent_state, number_statistics, phase_statistics
from .measure import CopyBudget
from .oracle import MODES, false_accept_probability, verify_claim_batch
from .qstate import (
    PureQubit, density_from_pauli_expectations, make_linear_polarization, pauli_expectations,
)
from .wigner import analytic_wigner_coherent, inverse_radon, sample_quadratures

__all__ = ["Param", "Experiment", "EXPERIMENTS", "loglog_fit"]

Record = dict[str, Any]


@dataclass(frozen=True)
class Param:
    default: Any
    kind: str  # int, float, str, int_list, float_list
    minimum: float | None = None
    exclusive: bool = False
    choices: tuple | None = None
    length: int | None = None
    doc: str = ""


@dataclass(frozen=True)
class Experiment:
    name: str
    params: dict[str, Param]
    default_trials: int
    tasks: Callable[[dict, int], list[dict]]
    run: Callable[[dict, int], list[Record]]
    summarize: Callable[[list[Record], dict, int], dict]
    check: Callable[[dict, int], None] = field(default=lambda p, t: None)


def loglog_fit(x, y) -> dict:
    """Least-squares line through ``(log10 x, log10 y)``."""
    lx, ly = np.log10(np.asarray(x, float)), np.log10(np.asarray(y, float))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return {"slope": float(slope), "intercept": float(intercept),
            "residuals": [float(r) for r in resid]}


def _angle(seed: int) -> float:
    return float(make_rng(derive_seed(seed, 0)).uniform(0.0, math.pi))


# --- tomography-scaling ---------------------------------------------------

def _tomo_tasks(p, trials):
    return [{"m": m, "repeat": r} for m in p["m_values"] for r in range(trials)]


def _tomo_run(task, seed):
    p = task["params"]
    source = density_from_pauli_expectations(*p["bloch"])
    truth = pauli_expectations(source)
    budget = CopyBudget()
    res = pauli_tomography(source, task["m"], seed, budget)
    rec = {"copies": budget.consumed, "m_per_axis": task["m"], "repeat": task["repeat"]}
    for ax, est in zip("xyz", res.expectation_estimates):
        rec[f"t{ax}_hat"] = est
    for ax, est, true in zip("xyz", res.expectation_estimates, truth):
        rec[f"err_{ax}"] = est - true
    rec["predicted_std"] = res.predicted_std
    return [rec]


def _tomo_summary(rows, p, trials):
    per_m = []
    for m in p["m_values"]:
        sel = [r for r in rows if r["m_per_axis"] == m]
        stds = [float(np.std([r[f"t{ax}_hat"] for r in sel], ddof=1)) for ax in "xyz"]
        per_m.append({"m": m, "std_x": stds[0], "std_y": stds[1], "std_z": stds[2],
                      "predicted": m ** -0.5,
                      "max_rel_dev": max(abs(s * math.sqrt(m) - 1.0) for s in stds)})
    out = {"per_m": per_m}
    if len(per_m) >= 2:
        out["fit"] = loglog_fit([d["m"] for d in per_m],
                                [np.mean([d["std_x"], d["std_y"], d["std_z"]]) for d in per_m])
    return out


# --- bisection --------------------------------------------------------------

def _bis_tasks(p, trials):
    return [{"m": m} for m in range(1, p["m_max"] + 1)]


def _bis_run(task, seed):
    m, trials = task["m"], task["trials"]
    angles = make_rng(seed).uniform(0.0, math.pi, trials)
    width = math.pi / 2 ** m
    contained = exact_width = queries = 0
    for k in angles:
        oracle = HalfIntervalOracle(k)
        grid = bisection_search(oracle, m)
        contained += grid.contains(oracle.true_k)
        exact_width += grid.bin_width == width
        queries += oracle.queries
    return [{"copies": queries, "m": m, "angles": trials, "bin_width": width,
             "contained": contained, "exact_width": exact_width,
             "all_ok": contained == trials and exact_width == trials}]


def _bis_summary(rows, p, trials):
    return {"all_contained": all(r["contained"] == r["angles"] for r in rows),
            "all_widths_exact": all(r["exact_width"] == r["angles"] for r in rows),
            "copies_per_search_equals_m": all(r["copies"] == r["m"] * r["angles"] for r in rows)}


# --- mle-scaling ------------------------------------------------------------

def _mle_tasks(p, trials):
    return [{"n": n, "repeat": r} for n in p["n_values"] for r in range(trials)]


def _mle_run(task, seed):
    n = task["n"]
    k = _angle(seed)
    budget = CopyBudget()
    k_hat, _ = mle_polarization(make_linear_polarization(k), n, derive_seed(seed, 1), budget)
    return [{"copies": budget.consumed, "n": n, "repeat": task["repeat"], "true_k": k,
             "k_hat": float(k_hat), "error": float(signed_axis_error(k_hat, k))}]


def mle_curve(rows, n_values) -> list[dict]:
    out = []
    for n in n_values:
        errs = [r["error"] for r in rows if r["n"] == n]
        dk = circular_axis_std(errs)
        out.append({"n": n, "circular_std": dk, "product": n * dk,
                    "product_at_least_half": n * dk >= 0.5})
    return out


def _mle_summary(rows, p, trials):
    curve = mle_curve(rows, p["n_values"])
    return {"per_n": curve,
            "fit": loglog_fit([c["n"] for c in curve], [c["circular_std"] for c in curve]),
            "conjecture_report": {
                "description": "m * dk_empirical against 1/2 (reported, not asserted)",
                "stays_at_least_half": all(c["product_at_least_half"] for c in curve),
            }}


# --- uncertainty-curve -------------------------------------------------------

def _unc_tasks(p, trials):
    return [{"m": m} for m in range(p["m_min"], p["m_max"] + 1)]


def _unc_run(task, seed):
    pt = uncertainty_product(task["m"])
    return [{"copies": pt.m, "m": pt.m, "delta_N": pt.delta_N, "delta_k": pt.delta_k,
             "product": pt.product,
             # alternative reading with the Poisson spread sqrt(m); not asserted
             "sqrt_m_product": math.sqrt(pt.m) * pt.delta_k}]


def _unc_summary(rows, p, trials):
    prods = [r["product"] for r in rows]
    ms = [r["m"] for r in rows]
    tail = [r["product"] for r in rows if r["m"] >= 2]
    return {"max_product": max(prods), "argmax_m": [m for m, v in zip(ms, prods) if v == max(prods)],
            "decreasing_from_m2": all(b < a for a, b in zip(tail, tail[1:])),
            "m1_product": next((r["product"] for r in rows if r["m"] == 1), None)}


# --- verifier ---------------------------------------------------------------

def _ver_tasks(p, trials):
    return [{"m": m} for m in p["m_values"]]


def _ver_run(task, seed):
    p, m, trials = task["params"], task["m"], task["trials"]
    state = make_linear_polarization(p["true_k"])
    budget = CopyBudget()
    wrong = verify_claim_batch(state, p["true_k"] + p["epsilon"], m, trials,
                               derive_seed(seed, 0), budget, mode=p["mode"])
    right = verify_claim_batch(state, p["true_k"], m, trials, derive_seed(seed, 1), budget,
                               mode=p["mode"])
    expected = false_accept_probability(p["epsilon"], m)
    rate = wrong / trials
    sigma = math.sqrt(expected * (1 - expected) / trials)
    return [{"copies": budget.consumed, "m": m, "epsilon": p["epsilon"], "runs": trials,
             "false_accepts": wrong, "false_accept_rate": rate, "expected": expected,
             "z_score": (rate - expected) / sigma if sigma > 0 else 0.0,
             "correct_rejects": trials - right, "confidence": 1.0 - 2.0 ** -m}]


def _ver_summary(rows, p, trials):
    return {"max_abs_z": max(abs(r["z_score"]) for r in rows),
            "correct_claims_never_rejected": all(r["correct_rejects"] == 0 for r in rows),
            "rates": {r["m"]: r["false_accept_rate"] for r in rows}}


# --- clone-fidelity -----------------------------------------------------------

def _cf_tasks(p, trials):
    return [{"state": i} for i in range(trials)]


def _cf_run(task, seed):
    v = make_rng(seed).normal(size=4)
    psi = PureQubit.from_vector([v[0] + 1j * v[1], v[2] + 1j * v[3]], normalize=True)
    out = bh_clone(psi.density())
    return [{"copies": 1, "alpha_re": psi.alpha.real, "alpha_im": psi.alpha.imag,
             "beta_re": psi.beta.real, "beta_im": psi.beta.imag,
             "overlap_fidelity": out.input_overlap_fidelity,
             "trace_fidelity": out.trace_fidelity,
             "overlap_deviation": out.input_overlap_fidelity - 5.0 / 6.0,
             "trace_deviation": out.trace_fidelity - math.sqrt(5.0 / 6.0),
             "clones_identical": out.clone_a == out.clone_b}]


def _cf_summary(rows, p, trials):
    return {"max_overlap_deviation": max(abs(r["overlap_deviation"]) for r in rows),
            "max_trace_deviation": max(abs(r["trace_deviation"]) for r in rows),
            "all_clones_identical": all(r["clones_identical"] for r in rows)}


# --- clone-tomography ---------------------------------------------------------

def _ct_tasks(p, trials):
    return [{"repeat": r} for r in range(trials)]


def _ct_run(task, seed):
    p = task["params"]
    k = _angle(seed) if p["true_k"] < 0 else p["true_k"]
    n_clones = p["n_clones"] or 3 * p["m_per_axis"]
    budget = CopyBudget()
    res = clone_then_tomograph(make_linear_polarization(k), n_clones, p["m_per_axis"],
                               derive_seed(seed, 1), budget)
    k_hat = angle_from_bloch(res.expectation_estimates)
    tx, ty, tz = res.expectation_estimates
    return [{"copies": budget.consumed, "clone_copies": res.clone_copies,
             "m_per_axis": p["m_per_axis"], "true_k": k, "tx_hat": tx, "ty_hat": ty,
             "tz_hat": tz, "k_hat": float(k_hat),
             "error": float(signed_axis_error(k_hat, k))}]


def _ct_summary(rows, p, trials):
    errs = [abs(r["error"]) for r in rows]
    return {"median_abs_error": float(np.median(errs)), "max_abs_error": max(errs),
            "original_copies_per_run": sorted({r["copies"] for r in rows}),
            "shrink_factor": SHRINK}


# --- wigner ---------------------------------------------------------------------

def _wig_tasks(p, trials):
    return [{}]


def _wig_run(task, seed):
    p = task["params"]
    alpha0 = complex(p["alpha_re"], p["alpha_im"])
    sino = sample_quadratures(alpha0, p["n_per_angle"], p["theta_bins"], seed,
                              x_bins=p["x_bins"])
    rec = inverse_radon(sino, p["k_c"], step=p["step"])
    ref = analytic_wigner_coherent(alpha0, rec.q_axis, rec.p_axis)
    copies = p["n_per_angle"] * p["theta_bins"]
    rows = []
    for i, q in enumerate(rec.q_axis):
        for j, pp in enumerate(rec.p_axis):
            w, w0 = rec.values[i, j], ref.values[i, j]
            rows.append({"copies": copies, "q": float(q), "p": float(pp), "w_rec": float(w),
                         "w_true": float(w0), "abs_error": abs(float(w - w0))})
    return rows


def _wig_summary(rows, p, trials):
    cell = p["step"] ** 2
    peak = max(rows, key=lambda r: r["w_rec"])
    return {"max_abs_error": max(r["abs_error"] for r in rows),
            "max_abs_error_over_peak": max(r["abs_error"] for r in rows) * math.pi,
            "integral": sum(r["w_rec"] for r in rows) * cell,
            "peak": [peak["q"], peak["p"]]}


# --- number-phase ------------------------------------------------------------

def _np_tasks(p, trials):
    return [{"alpha": a} for a in p["alpha_values"]]


def _np_run(task, seed):
    D = task["params"]["D"]
    psi = coherent_state(task["alpha"], D)
    mean_n, dn = number_statistics(psi)
    mean_phase, dtheta = phase_statistics(psi)
    return [{"copies": 0, "alpha": task["alpha"], "D": D, "mean_N": mean_n, "delta_N": dn,
             "mean_phase": mean_phase, "delta_theta": dtheta, "product": dn * dtheta}]


def _np_summary(rows, p, trials):
    return {"products": {r["alpha"]: r["product"] for r in rows},
            "min_product": min(r["product"] for r in rows)}


# --- complexity-profile ---------------------------------------------------------

def _cp_tasks(p, trials):
    return [{}]


def _cp_run(task, seed):
    p, trials = task["params"], task["trials"]
    pts = complexity_profile(p["estimator"], p["targets"], trials, seed,
                             copy_cap=p["copy_cap"], sigma=p["sigma"])
    return [{"copies": pt.copies, "estimator": p["estimator"], "target": pt.target,
             "median_error": pt.median_error, "saturated": pt.saturated} for pt in pts]


def _cp_summary(rows, p, trials):
    copies = [r["copies"] for r in rows]
    out = {"copies": copies,
           "monotone": all(b >= a for a, b in zip(copies, copies[1:])),
           "any_saturated": any(r["saturated"] for r in rows)}
    ok = [r for r in rows if not r["saturated"] and r["copies"] > 1]
    if len(ok) >= 2 and len({r["copies"] for r in ok}) > 1:
        out["fit"] = loglog_fit([r["target"] for r in ok], [r["copies"] for r in ok])
    return out


def _tomo_check(p, trials):
    if math.fsum(c * c for c in p["bloch"]) > 1.0 + 1e-9:
        raise ValueError("bloch must have length at most 1")


def _cp_check(p, trials):
    t = p["targets"]
    if any(b > a for a, b in zip(t, t[1:])):
        raise ValueError("targets must be non-increasing")


def _unc_check(p, trials):
    if p["m_max"] < p["m_min"]:
        raise ValueError("m_max must be >= m_min")


def _ct_check(p, trials):
    if p["n_clones"] and p["n_clones"] < 3 * p["m_per_axis"]:
        raise ValueError("n_clones must be at least 3 * m_per_axis")


PI = math.pi

EXPERIMENTS: dict[str, Experiment] = {
    "tomography-scaling": Experiment(
        "tomography-scaling",
        {"m_values": Param([100, 1000, 10000], "int_list", 1, doc="shots per axis"),
         "bloch": Param([0.0, 0.0, 0.0], "float_list", length=3,
                        doc="Bloch vector of the source state")},
        200, _tomo_tasks, _tomo_run, _tomo_summary, _tomo_check),
    "bisection": Experiment(
        "bisection",
        {"m_max": Param(20, "int", 1, doc="bisection depths 1..m_max")},
        10_000, _bis_tasks, _bis_run, _bis_summary),
    "mle-scaling": Experiment(
        "mle-scaling",
        {"n_values": Param([100, 1000, 10000, 100000], "int_list", 2, doc="photons per estimate")},
        200, _mle_tasks, _mle_run, _mle_summary),
    "uncertainty-curve": Experiment(
        "uncertainty-curve",
        {"m_min": Param(1, "int", 1), "m_max": Param(20, "int", 1)},
        1, _unc_tasks, _unc_run, _unc_summary, check=_unc_check),
    "verifier": Experiment(
        "verifier",
        {"m_values": Param(list(range(1, 9)), "int_list", 1, doc="copies per verification"),
         "epsilon": Param(PI / 4, "float", 0.0, doc="error of the wrong claim (rad)"),
         "true_k": Param(0.3, "float", 0.0, doc="true polarization angle (rad)"),
         "mode": Param("batch", "str", choices=MODES,
                       doc="batch charges all m copies; sequential stops at the first failure")},
        100_000, _ver_tasks, _ver_run, _ver_summary),
    "clone-fidelity": Experiment(
        "clone-fidelity", {}, 1000, _cf_tasks, _cf_run, _cf_summary),
    "clone-tomography": Experiment(
        "clone-tomography",
        {"m_per_axis": Param(100_000, "int", 1),
         "n_clones": Param(0, "int", 0, doc="0 means exactly 3 * m_per_axis"),
         "true_k": Param(-1.0, "float", doc="negative draws a uniform random angle per trial")},
        20, _ct_tasks, _ct_run, _ct_summary, check=_ct_check),
    "wigner": Experiment(
        "wigner",
        {"alpha_re": Param(0.0, "float"), "alpha_im": Param(0.0, "float"),
         "n_per_angle": Param(10_000, "int", 1), "theta_bins": Param(180, "int", 1),
         "x_bins": Param(240, "int", 2), "k_c": Param(5.0, "float", 0.0, exclusive=True),
         "step": Param(0.1, "float", 0.0, exclusive=True)},
        1, _wig_tasks, _wig_run, _wig_summary),
    "number-phase": Experiment(
        "number-phase",
        {"alpha_values": Param([1.0, 2.0, 3.0, 4.0, 5.0, 6.0], "float_list", 0.0),
         "D": Param(256, "int", 2)},
        1, _np_tasks, _np_run, _np_summary),
    "complexity-profile": Experiment(
        "complexity-profile",
        {"estimator": Param("mle", "str", choices=tuple(sorted(ESTIMATORS))),
         "targets": Param([0.1, 0.03, 0.01], "float_list", 0.0, exclusive=True),
         "sigma": Param(0.1, "float", 0.0),
         "copy_cap": Param(10 ** 7, "int", 1)},
        50, _cp_tasks, _cp_run, _cp_summary, check=_cp_check),
}
