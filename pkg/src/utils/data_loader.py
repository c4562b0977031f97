import csv
import json
from typing import IO, Iterable, List, Sequence

from src.utils.console import error


def dumps_json(obj) -> str:
    """Deterministic JSON: sorted keys, fixed indentation, no timestamps."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def write_jsonl(path: str, rows: Iterable[dict]) -> int:
    """Write one JSON object per line; returns the number of rows written."""
    written = 0
    with open(path, "w", encoding="utf-8") as f_out:
        for row in rows:
            f_out.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")
            written += 1
    return written


def load_jsonl(path: str) -> List[dict]:
    """
    Load a JSONL file written by write_jsonl.

    Lines that fail to parse are reported and skipped.
    """
    rows = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as e:
                error(f"{path}:{line_no}: {e}")
    return rows


def write_csv(stream: IO[str], header: Sequence[str], rows: Iterable[Sequence]):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([str(v) for v in row])
