"""Open-loop runs: feed a frame sequence through one robot brain and log
every frame as a CSV row."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .params import Params
from .pipeline import FrameRecord, Model, RobotBrain

SCHEMA_VERSION = 1
COLUMNS = (
    "frame", "u_lgmd1", "u_lgmd2", "u_dsn",
    "spikes_lgmd1", "spikes_lgmd2", "spikes_dsn_r", "spikes_dsn_l",
    "pattern", "behavior", "tr_prime", "p_r", "p_l",
)
SPIKE_COLUMNS = COLUMNS[4:8]


@dataclass
class Telemetry:
    records: list[FrameRecord]
    model: Model

    def rows(self) -> list[dict[str, object]]:
        out = []
        for r in self.records:
            n = r.neurons
            out.append({
                "frame": r.index,
                "u_lgmd1": n.u_lgmd1, "u_lgmd2": n.u_lgmd2, "u_dsn": n.u_dsn,
                "spikes_lgmd1": n.spikes_lgmd1, "spikes_lgmd2": n.spikes_lgmd2,
                "spikes_dsn_r": n.spikes_dsn_r, "spikes_dsn_l": n.spikes_dsn_l,
                "pattern": r.pattern.value, "behavior": str(r.behavior),
                "tr_prime": r.tr_prime, "p_r": r.powers.p_r, "p_l": r.powers.p_l,
            })
        return out

    def summary(self) -> dict[str, int]:
        """Total spikes per neuron over the whole run."""
        return summarize(self.rows())

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# insectvision telemetry v{SCHEMA_VERSION}\n")
        w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in self.rows():
            w.writerow({k: _fmt(v) for k, v in row.items()})
        return buf.getvalue()

    def summary_csv(self) -> str:
        s = self.summary()
        return "neuron,spikes\n" + "".join(f"{k},{v}\n" for k, v in s.items())

    def write(self, out_dir: str | Path) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "telemetry.csv").write_text(self.to_csv())
        (out / "summary.csv").write_text(self.summary_csv())
        return out


def _fmt(v: object) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def summarize(rows: Iterable[dict[str, object]]) -> dict[str, int]:
    totals = {k: 0 for k in SPIKE_COLUMNS}
    for row in rows:
        for k in SPIKE_COLUMNS:
            totals[k] += int(row[k])
    return totals


def read_telemetry_csv(text: str) -> list[dict[str, str]]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise ValueError(f"unexpected telemetry columns: {reader.fieldnames}")
    return list(reader)


def run_openloop(frames: Iterable[np.ndarray], params: Params,
                 model: Model | str = Model.FULL, seed: int | None = None) -> Telemetry:
    """Run a fresh brain over ``frames``; the robot does not move."""
    model = Model.parse(model)
    rng = np.random.default_rng(params.rng_seed if seed is None else seed)
    brain = RobotBrain(params, model, rng)
    shape = (params.frame_h, params.frame_w)
    records = []
    for i, frame in enumerate(frames):
        arr = np.asarray(frame)
        if arr.shape != shape:
            raise ValueError(f"frame {i}: shape {arr.shape} does not match {shape}")
        records.append(brain.step(arr))
    return Telemetry(records, model)
