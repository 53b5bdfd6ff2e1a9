"""Reading and writing datasets, reports and curves.

Datasets and reports are JSON, curves and matrices additionally CSV for
plotting. Floats are written with their shortest round-trip repr, so
reading a file back reproduces every value exactly. Writes go to a
temporary file in the target directory which is then renamed.
"""

import csv
import io
import json
import logging
import os
import tempfile
from typing import Any, Iterable, Sequence

import numpy as np

from dapsim.core.dataset import ClickTable, CoincidenceCounts, ScanDataset, ScanSetting
from dapsim.core.errors import DapsDataError
from dapsim.core.simulator.scan import SCHEMA_VERSION

io_logger = logging.getLogger("dapsim.io")


def _default(obj: Any):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"Object of type {type(obj).__name__} is not serialisable")


def dumps(record: Any) -> str:
    """Deterministic JSON text of a record."""
    return json.dumps(record, default=_default, sort_keys=True, indent=1) + "\n"


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(
        prefix=".tmp-", suffix=os.path.basename(path), dir=directory
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    io_logger.debug("Wrote %s", path)


def write_json(path: str, record: dict):
    """Write a record as JSON, atomically."""
    _atomic_write(path, dumps(record))


def read_json(path: str) -> dict:
    """Read a JSON record and check its schema version.

    Raises:
        OSError: The file cannot be read.
        DapsDataError: The file is not JSON or has another schema version.

    """
    with open(path, encoding="utf-8") as f:
        try:
            record = json.load(f)
        except json.JSONDecodeError as err:
            raise DapsDataError(f"{path} is not valid JSON: {err}") from err
    if not isinstance(record, dict):
        raise DapsDataError(f"{path} does not hold a JSON object.")
    version = record.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DapsDataError(
            f"{path} has schema version {version!r}, supported is {SCHEMA_VERSION}."
        )
    return record


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]):
    """Write rows as CSV, atomically."""
    buff = io.StringIO()
    writer = csv.writer(buff, lineterminator="\n")
    if header:
        writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    _atomic_write(path, buff.getvalue())


def read_csv(path: str) -> list:
    """Read CSV rows as lists of strings, header included."""
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.reader(f))


def _setting_to_record(s: ScanSetting) -> dict:
    return {
        "index": s.index,
        "beta": [s.beta.real, s.beta.imag],
        "exact": None if s.exact is None else s.exact.to_sparse(),
        "events": None if s.events is None else s.events.to_sparse(),
    }


def _setting_from_record(rec: dict, N: int, K: int) -> ScanSetting:
    try:
        re, im = rec["beta"]
        exact = rec.get("exact")
        events = rec.get("events")
        return ScanSetting(
            index=int(rec["index"]),
            beta=complex(re, im),
            exact=None if exact is None else ClickTable.from_sparse(exact, N, K),
            events=(
                None if events is None else CoincidenceCounts.from_sparse(events, N, K)
            ),
        )
    except (KeyError, TypeError, ValueError) as err:
        if isinstance(err, DapsDataError):
            raise
        raise DapsDataError(f"Malformed setting record: {err!r}") from err


def dataset_to_record(dataset: ScanDataset) -> dict:
    """JSON record of a dataset, counts stored sparsely."""
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "dataset",
        "N": dataset.N,
        "K": dataset.K,
        "metadata": dataset.metadata,
        "settings": [_setting_to_record(s) for s in dataset.settings],
        "vacuum": None
        if dataset.vacuum is None
        else [_setting_to_record(s) for s in dataset.vacuum],
    }


def dataset_from_record(rec: dict) -> ScanDataset:
    """Rebuild a dataset from :func:`dataset_to_record` output."""
    if rec.get("kind") != "dataset":
        raise DapsDataError(
            f"Expected a dataset record, got kind {rec.get('kind')!r}."
        )
    try:
        N, K = int(rec["N"]), int(rec["K"])
        settings = [_setting_from_record(s, N, K) for s in rec["settings"]]
    except KeyError as err:
        raise DapsDataError(f"Dataset record lacks {err}.") from err
    vac = rec.get("vacuum")
    vacuum = None if vac is None else [_setting_from_record(s, N, K) for s in vac]
    return ScanDataset(
        tuple(settings),
        None if vacuum is None else tuple(vacuum),
        rec.get("metadata", {}),
    )


def write_dataset(path: str, dataset: ScanDataset):
    """Write a dataset file."""
    write_json(path, dataset_to_record(dataset))
    io_logger.info("Wrote dataset with %d settings to %s", len(dataset), path)


def read_dataset(path: str) -> ScanDataset:
    """Read a dataset file."""
    return dataset_from_record(read_json(path))


def write_report(path: str, record: dict):
    """Write an estimate or analysis report, stamped with the schema version."""
    write_json(path, {"schema_version": SCHEMA_VERSION, **record})
