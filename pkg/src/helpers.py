import csv
import io
from fractions import Fraction
from typing import Dict, List, Sequence


def print_h_bar():
    print("=== knotobs ===")
    print("---------------")


def format_turn(turn: Fraction) -> str:
    """0 and 1 both stand for w = 1"""
    return f"{turn.numerator}/{turn.denominator}" if turn.denominator != 1 else str(turn.numerator)


def format_rows(rows: Sequence[Sequence[int]], indent: str = "  ") -> List[str]:
    if not rows:
        return [f"{indent}(empty)"]
    width = max(len(str(v)) for r in rows for v in r)
    return [indent + "[" + " ".join(str(v).rjust(width) for v in r) + "]" for r in rows]


def to_csv(records: List[Dict], fieldnames: List[str]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    writer.writerows(records)
    return buffer.getvalue()
