"""Run logs: one JSON object per line.

Line 1 is a header ({"kind": "header", ...}: config snapshot, code
version, seeds, start timestamp), then one bare record per step with
fields exactly step, t_wall_s, energy, stderr, lr, grad_norm, n_samples,
then a footer ({"kind": "footer", ...}: final smoothed energy, total
wall time, status).  CSV export reproduces the record fields losslessly
(every float is printed with repr, which round-trips).
"""

import json
from dataclasses import asdict, dataclass, field

RECORD_FIELDS = ("step", "t_wall_s", "energy", "stderr", "lr", "grad_norm", "n_samples")


@dataclass(frozen=True)
class StepRecord:
    step: int
    t_wall_s: float
    energy: float
    stderr: float
    lr: float
    grad_norm: float
    n_samples: int

    def __post_init__(self):
        if self.stderr < 0:
            raise ValueError("stderr must be >= 0")


@dataclass
class RunLog:
    header: dict = field(default_factory=dict)
    records: list = field(default_factory=list)
    footer: dict = field(default_factory=dict)

    @property
    def energies(self):
        return [r.energy for r in self.records]

    def final_energy(self, window=100):
        """Mean energy over the last `window` records (the selection statistic)."""
        if not self.records:
            raise ValueError("no records")
        tail = self.energies[-window:]
        return sum(tail) / len(tail)


class RunLogWriter:
    """Streams a run log to disk line by line, so partial logs survive faults."""

    def __init__(self, path):
        self.path = path
        self._fh = open(path, "w", buffering=1)
        self._wrote_header = False

    def write_header(self, header):
        if self._wrote_header:
            raise ValueError("header already written")
        self._fh.write(json.dumps({"kind": "header", **header}, sort_keys=True) + "\n")
        self._wrote_header = True

    def write_record(self, rec):
        self._fh.write(json.dumps(asdict(rec)) + "\n")

    def write_footer(self, footer):
        self._fh.write(json.dumps({"kind": "footer", **footer}, sort_keys=True) + "\n")

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def _parse_record(obj, lineno):
    if set(obj) != set(RECORD_FIELDS):
        raise ValueError(f"line {lineno}: record fields {sorted(obj)} != {sorted(RECORD_FIELDS)}")
    try:
        return StepRecord(**{k: obj[k] for k in RECORD_FIELDS})
    except (TypeError, ValueError) as e:
        raise ValueError(f"line {lineno}: bad record: {e}") from e


def read_runlog(path):
    """Parse a JSONL run log; malformed lines raise with their line number."""
    log = RunLog()
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise ValueError(f"line {lineno}: invalid JSON: {e}") from e
            kind = obj.pop("kind", None)
            if kind == "header":
                if lineno != 1:
                    raise ValueError(f"line {lineno}: header must be the first line")
                log.header = obj
            elif kind == "footer":
                log.footer = obj
            elif kind is None:
                log.records.append(_parse_record(obj, lineno))
            else:
                raise ValueError(f"line {lineno}: unknown line kind {kind!r}")
    return log


def export_csv(jsonl_path, csv_path):
    """Record lines to CSV, columns exactly RECORD_FIELDS, order preserved."""
    log = read_runlog(jsonl_path)
    with open(csv_path, "w") as fh:
        fh.write(",".join(RECORD_FIELDS) + "\n")
        for r in log.records:
            d = asdict(r)
            fh.write(",".join(repr(d[k]) if isinstance(d[k], float) else str(d[k])
                              for k in RECORD_FIELDS) + "\n")
    return csv_path
