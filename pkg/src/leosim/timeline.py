"""Upload -> FIFO compute -> migrate -> downlink schedule for one episode.

Uploads share the single UE channel and run strictly sequentially in task
order; each satellite computes its tasks FIFO in upload-completion order;
after compute the result migrates hop-by-hop along the ring to a visible
satellite (if needed) and is downlinked at ten times the uplink rate.

Per-task link rates are frozen at the task's upload-start instant;
migration hops are evaluated at compute end, the downlink rate at
migration end.  With a frozen constellation these choices are exact and
the whole schedule collapses to the compiled kernel fast path.
"""
import csv
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .channel import LinkParams, link_quality
from .geometry import ConstellationConfig, hops_to_visible, pose_at


@dataclass(frozen=True)
class TaskSpec:
    index: int
    size_bits: float
    image_ref: str | None = None

    def __post_init__(self):
        if self.size_bits <= 0:
            raise ValueError("task size must be > 0")


@dataclass(frozen=True)
class SatelliteServer:
    index: int
    compute_speed_bps: float   # watermarking speed in bits/s
    unit_price_per_byte: float
    algorithm: str             # watermark kind deployed on this satellite
    bandwidth_hz: float
    mse: float                 # calibrated embed MSE of that algorithm

    def __post_init__(self):
        if self.compute_speed_bps <= 0:
            raise ValueError("compute speed must be > 0")
        if self.unit_price_per_byte < 0:
            raise ValueError("unit price must be >= 0")


@dataclass(frozen=True)
class TaskTrace:
    task_index: int
    assigned_sat: int
    return_sat: int
    upload_start: float
    upload_end: float
    comp_start: float
    comp_end: float
    migrate_hops: int
    migrate_end: float
    download_end: float
    ber: float

    @property
    def t_end(self) -> float:
        return self.download_end


@dataclass(frozen=True)
class ScheduleResult:
    traces: list[TaskTrace]
    total_time: float        # makespan over all tasks
    transmit_energy_j: float
    bers: list[float]


def transmission_energy(p_tran_w: float, traces: list[TaskTrace]) -> float:
    """Upload energy: transmit power times total time on the uplink."""
    return p_tran_w * sum(t.upload_end - t.upload_start for t in traces)


def _simulate_general(assignment, tasks, servers, constellation, link,
                      migrate_speed_bps, t0):
    traces = []
    last_comp_end: dict[int, float] = {}
    clock = t0
    for task, j in zip(tasks, assignment):
        d = task.size_bits
        pose = pose_at(constellation, j, clock)
        lq = link_quality(link, pose.distance_km, j)
        upload_start = clock
        clock = clock + d / lq.rate_bps
        upload_end = clock
        comp_start = max(last_comp_end.get(j, -math.inf), upload_end)
        comp_end = comp_start + d / servers[j].compute_speed_bps
        last_comp_end[j] = comp_end
        hops, target = hops_to_visible(constellation, j, comp_end)
        migrate_end = comp_end + hops * d / migrate_speed_bps
        ret_pose = pose_at(constellation, target, migrate_end)
        ret_lq = link_quality(link, ret_pose.distance_km, target)
        download_end = migrate_end + d / (10.0 * ret_lq.rate_bps)
        traces.append(TaskTrace(
            task_index=task.index, assigned_sat=j, return_sat=target,
            upload_start=upload_start, upload_end=upload_end,
            comp_start=comp_start, comp_end=comp_end,
            migrate_hops=hops, migrate_end=migrate_end,
            download_end=download_end, ber=lq.ber))
    return traces


def _simulate_frozen(assignment, tasks, servers, constellation, link,
                     migrate_speed_bps, t0):
    n_sat = constellation.satellite_count
    up_rate = np.empty(n_sat)
    comp_speed = np.empty(n_sat)
    hops = np.empty(n_sat, dtype=np.int64)
    targets = np.empty(n_sat, dtype=np.int64)
    down_rate = np.empty(n_sat)
    bers = np.empty(n_sat)
    for j in range(n_sat):
        pose = pose_at(constellation, j, t0)
        lq = link_quality(link, pose.distance_km, j)
        up_rate[j] = lq.rate_bps
        bers[j] = lq.ber
        comp_speed[j] = servers[j].compute_speed_bps
        hops[j], targets[j] = hops_to_visible(constellation, j, t0)
        ret_pose = pose_at(constellation, int(targets[j]), t0)
        down_rate[j] = link_quality(link, ret_pose.distance_km,
                                    int(targets[j])).rate_bps
    sizes = np.array([t.size_bits for t in tasks], dtype=np.float64)
    assign = np.asarray(assignment, dtype=np.int64)
    us, ue, cs, ce, me, de = kernels.schedule_frozen(
        sizes, assign, up_rate, comp_speed, hops, down_rate,
        migrate_speed_bps, t0)
    traces = []
    for i, task in enumerate(tasks):
        j = int(assign[i])
        traces.append(TaskTrace(
            task_index=task.index, assigned_sat=j, return_sat=int(targets[j]),
            upload_start=float(us[i]), upload_end=float(ue[i]),
            comp_start=float(cs[i]), comp_end=float(ce[i]),
            migrate_hops=int(hops[j]), migrate_end=float(me[i]),
            download_end=float(de[i]), ber=float(bers[j])))
    return traces


def simulate(assignment: list[int], tasks: list[TaskSpec],
             servers: list[SatelliteServer],
             constellation: ConstellationConfig, link: LinkParams,
             migrate_speed_bps: float, t0: float = 0.0,
             use_kernel: bool = True) -> ScheduleResult:
    """Full schedule for an assignment of tasks to satellites.

    ``assignment[i]`` is the satellite index serving task ``i``; an empty
    task list yields an empty result with total_time 0.  The frozen-mode
    kernel path and the general path are arithmetic-identical.
    """
    if len(assignment) != len(tasks):
        raise ValueError("assignment length must match task count")
    if not tasks:
        return ScheduleResult(traces=[], total_time=0.0,
                              transmit_energy_j=0.0, bers=[])
    for j in assignment:
        if not 0 <= j < len(servers):
            raise IndexError(f"satellite index {j} out of range")

    if constellation.frozen and use_kernel:
        traces = _simulate_frozen(assignment, tasks, servers, constellation,
                                  link, migrate_speed_bps, t0)
    else:
        traces = _simulate_general(assignment, tasks, servers, constellation,
                                   link, migrate_speed_bps, t0)
    return ScheduleResult(
        traces=traces,
        total_time=max(t.t_end for t in traces),
        transmit_energy_j=transmission_energy(link.tx_power_w, traces),
        bers=[t.ber for t in traces],
    )


TRACE_CSV_FIELDS = [
    "task_index", "assigned_sat", "return_sat", "upload_start", "upload_end",
    "comp_start", "comp_end", "migrate_hops", "migrate_end", "download_end",
    "t_end", "ber",
]


def write_trace_csv(path, result: ScheduleResult) -> None:
    """One CSV row per task with the full timestamp chain."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_CSV_FIELDS)
        for t in result.traces:
            writer.writerow([
                t.task_index, t.assigned_sat, t.return_sat,
                repr(t.upload_start), repr(t.upload_end),
                repr(t.comp_start), repr(t.comp_end),
                t.migrate_hops, repr(t.migrate_end), repr(t.download_end),
                repr(t.t_end), repr(t.ber),
            ])
