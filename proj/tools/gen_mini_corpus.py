#!/usr/bin/env python3
"""Regenerates data/mini: a small three-subgroup corpus used by the end-to-end tests."""

import datetime as dt
import json
import math
import pathlib
import random

ROWS = 1500
STEP = dt.timedelta(minutes=5)
START = dt.datetime(2024, 1, 1)
TRAIN = round(0.7 * ROWS)
VALIDATION_BEGIN = TRAIN - round(0.1 * TRAIN)


def stamp(i):
    return (START + i * STEP).strftime("%Y-%m-%d %H:%M:%S")


def make_file(rng, columns, incidents):
    base = [rng.uniform(20.0, 80.0) for _ in columns]
    rows = []
    for i in range(ROWS):
        daily = math.sin(2.0 * math.pi * i / 288.0)
        values = [b + 3.0 * daily + rng.gauss(0.0, 1.0) for b in base]
        for begin, length, height in incidents:
            if begin <= i < begin + length:
                values = [v + height for v in values]
        rows.append(values)
    windows = [[stamp(b - 3), stamp(b + n + 2)] for b, n, _ in incidents]
    return rows, windows


def write_csv(path, columns, rows):
    with path.open("w") as out:
        out.write("timestamp," + ",".join(columns) + "\n")
        for i, values in enumerate(rows):
            out.write(stamp(i) + "," + ",".join(f"{v:.6f}" for v in values) + "\n")


def main():
    root = pathlib.Path(__file__).resolve().parent.parent / "data" / "mini"
    rng = random.Random(20240101)
    labels = {}
    layout = {
        "cache-latency": {
            "node-a.csv": [(400, 20, 9.0), (VALIDATION_BEGIN + 40, 20, 9.0), (TRAIN + 150, 20, 9.0)],
            "node-b.csv": [(VALIDATION_BEGIN + 60, 15, 8.0), (TRAIN + 300, 25, 8.0)],
        },
        "queue-depth": {
            "broker.csv": [(700, 20, 10.0), (VALIDATION_BEGIN + 30, 20, 10.0), (TRAIN + 100, 20, 10.0),
                           (TRAIN + 350, 20, 10.0)],
        },
        "steady-state": {
            "idle.csv": [],
        },
    }
    columns = ["cpu", "memory", "latency"]
    for subgroup, files in layout.items():
        (root / subgroup).mkdir(parents=True, exist_ok=True)
        for name, incidents in files.items():
            rows, windows = make_file(rng, columns, incidents)
            write_csv(root / subgroup / name, columns, rows)
            labels[f"{subgroup}/{name}"] = windows
    (root / "labels.json").write_text(json.dumps(labels, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
