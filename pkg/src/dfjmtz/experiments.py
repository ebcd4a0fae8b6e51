"""Batch runs: containment of DFJ points in MTZ, and the DFJ/MTZ bound gap."""
from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional

from ._numeric import to_text
from .dfj import brute_force_optimum, dfj_check_enumerate, dfj_cutting_plane
from .instance import (
    AtspInstance,
    FractionalPoint,
    Tour,
    check_degrees,
    point_from_tour,
    random_dfj_point,
    random_instance,
    serialize_tsplib,
)
from .lift import lift_point
from .mtz import mtz_check, mtz_lp_bound, visit_order_potentials


class ContainmentFailure(AssertionError):
    """A verified DFJ-feasible point that did not lift to MTZ."""

    def __init__(self, point: FractionalPoint, detail: str):
        super().__init__(f"{detail}: {point.to_json()}")
        self.point = point


@dataclass
class ExperimentReport:
    instance: dict
    dfj_value: Optional[Fraction] = None
    mtz_value: Optional[Fraction] = None
    ip_value: Optional[Fraction] = None
    successes: int = 0
    failures: int = 0
    certificates: list = field(default_factory=list)
    wall_time: dict = field(default_factory=dict)

    @property
    def flagged_strict(self) -> bool:
        return self.dfj_value is not None and self.mtz_value is not None and self.dfj_value > self.mtz_value

    def ordering_holds(self) -> bool:
        chain = [v for v in (self.mtz_value, self.dfj_value, self.ip_value) if v is not None]
        return all(a <= b for a, b in zip(chain, chain[1:]))

    def to_dict(self, timing: bool = False) -> dict:
        def fmt(v):
            return None if v is None else to_text(v)

        out = {
            "instance": self.instance,
            "dfj_value": fmt(self.dfj_value),
            "mtz_value": fmt(self.mtz_value),
            "ip_value": fmt(self.ip_value),
            "lift": {"successes": self.successes, "failures": self.failures},
            "flagged_strict": self.flagged_strict,
        }
        if self.certificates:
            out["lift"]["certificates"] = [c.to_dict() for c in self.certificates]
        if timing:
            out["wall_time"] = {k: round(v, 6) for k, v in self.wall_time.items()}
        return out


def reports_to_json(reports: Iterable[ExperimentReport], timing: bool = False) -> str:
    """Deterministic JSON (timings are excluded unless asked for)."""
    return json.dumps([r.to_dict(timing) for r in reports], indent=2, sort_keys=True) + "\n"


def trial_rng(*key) -> random.Random:
    # str seeds hash deterministically across interpreter runs
    return random.Random(":".join(str(k) for k in key))


def _timed(report, phase, fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    report.wall_time[phase] = report.wall_time.get(phase, 0.0) + time.perf_counter() - t0
    return out


def verify_lift(point: FractionalPoint) -> None:
    """Lift a point already known to be DFJ-feasible; raise if it fails."""
    res = lift_point(point)
    if not res.ok:
        raise ContainmentFailure(point, f"lift found negative cycle {res.cycle}")
    bad = mtz_check(point, res.potentials)
    if bad is not None:
        raise ContainmentFailure(point, f"lifted potentials violate MTZ at arc {bad[:2]}")


def _assert_dfj_feasible(point: FractionalPoint) -> None:
    if not check_degrees(point):
        raise ContainmentFailure(point, "generated point is not degree-feasible")
    cert = dfj_check_enumerate(point)
    if cert is not None:
        raise ContainmentFailure(point, f"generated point violates DFJ on {cert.nodes}")


def containment_trial(n: int, trial: int, seed: int, ip_max_n: int = 8) -> ExperimentReport:
    """One trial: even indices lift a random tour mixture, odd ones a DFJ LP optimum."""
    rng = trial_rng("containment", seed, n, trial)
    if trial % 2 == 0:
        k = rng.randint(1, 2 * n)
        point_seed = rng.getrandbits(32)
        report = ExperimentReport({"n": n, "trial": trial, "kind": "tour_mixture", "tours": k, "seed": point_seed})
        point = _timed(report, "generate", random_dfj_point, n, k, point_seed)
    else:
        inst = random_instance(n, rng)
        report = ExperimentReport({"n": n, "trial": trial, "kind": "dfj_lp_optimum", "costs": _costs(inst)})
        res = _timed(report, "dfj_lp", dfj_cutting_plane, inst)
        report.dfj_value = res.value
        report.mtz_value = _timed(report, "mtz_lp", mtz_lp_bound, inst)[0]
        if n <= ip_max_n:
            report.ip_value = _timed(report, "ip", brute_force_optimum, inst)[0]
        point = res.point
    _timed(report, "verify_dfj", _assert_dfj_feasible, point)
    _timed(report, "lift", verify_lift, point)
    report.successes = 1
    return report


def run_containment_suite(n_range: Iterable[int], trials: int, seed: int, ip_max_n: int = 8) -> list[ExperimentReport]:
    """``trials`` trials per n; raises :class:`ContainmentFailure` on any failed lift."""
    return [containment_trial(n, t, seed, ip_max_n) for n in n_range for t in range(trials)]


def run_tour_sweep(n: int) -> ExperimentReport:
    """Lift every one of the (n-1)! tour points and compare with visit-order potentials."""
    report = ExperimentReport({"n": n, "kind": "all_tours"})
    for perm in itertools.permutations(range(2, n + 1)):
        tour = Tour((1, *perm))
        point = point_from_tour(tour, n)
        verify_lift(point)
        u = lift_point(point).potentials
        expected = visit_order_potentials(tour)
        shift = u.u[0] - expected.u[0]
        if expected.shifted(shift) != u:
            raise ContainmentFailure(point, f"potentials {u.u} differ from visit order {expected.u}")
        report.successes += 1
    return report


def _costs(inst: AtspInstance) -> list:
    return [[to_text(v) for v in row] for row in inst.costs]


def gap_trial(n: int, trial: int, seed: int, ip_max_n: int = 8) -> tuple[ExperimentReport, AtspInstance]:
    rng = trial_rng("gap", seed, n, trial)
    inst = random_instance(n, rng)
    report = ExperimentReport({"n": n, "trial": trial, "seed": seed, "costs": _costs(inst)})
    res = _timed(report, "dfj_lp", dfj_cutting_plane, inst)
    report.dfj_value = res.value
    report.mtz_value = _timed(report, "mtz_lp", mtz_lp_bound, inst)[0]
    if n <= ip_max_n:
        report.ip_value = _timed(report, "ip", brute_force_optimum, inst)[0]
    lifted = lift_point(res.point)
    report.successes, report.failures = (1, 0) if lifted.ok else (0, 1)
    return report, inst


def run_gap_search(n: int, trials: int, seed: int, ip_max_n: int = 8, stop_on_flag: bool = False) -> list[ExperimentReport]:
    """Random integer costs in [1, 100]; every row reports both bounds."""
    if not 4 <= n <= 10:
        raise ValueError("gap search supports 4 <= n <= 10")
    reports = []
    for t in range(trials):
        report, _ = gap_trial(n, t, seed, ip_max_n)
        reports.append(report)
        if stop_on_flag and report.flagged_strict:
            break
    return reports


def persist_gap_fixture(report: ExperimentReport, directory) -> tuple:
    """Write a flagged instance as TSPLIB plus a JSON file of expected values."""
    if not report.flagged_strict:
        raise ValueError("only strictly flagged instances are persisted")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    name = f"gap_n{report.instance['n']}_s{report.instance['seed']}_t{report.instance['trial']}"
    inst = AtspInstance(report.instance["n"], [[Fraction(v) for v in row] for row in report.instance["costs"]])
    tsp_path = directory / f"{name}.atsp"
    json_path = directory / f"{name}.json"
    tsp_path.write_text(serialize_tsplib(inst, name))
    json_path.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    return tsp_path, json_path
