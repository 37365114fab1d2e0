#!/usr/bin/env python3
"""Regenerates the CSV fixtures in this directory.

The files are checked in; rerun only when a fixture definition changes.
Output is deterministic (fixed seed, fixed float formatting).
"""

import gzip
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent


def fmt(x, digits=6):
    return f"{x:.{digits}f}"


def dialect_a_100(rng):
    # 100 rows whose sensor lists sum to exactly 1295 entries.
    lengths = [13] * 95 + [12] * 5
    rng.shuffle(lengths)
    assert sum(lengths) == 1295
    pool = [f"S{i:03d}" for i in range(60)]
    lines = ["sensors,lat,lon,time"]
    t = 1627000000.0
    for n in lengths:
        sensors = rng.sample(pool, n)
        lat = rng.uniform(40.0, 60.0)
        lon = rng.uniform(-5.0, 25.0)
        t += rng.choice([0.5, 1.0, 1.5])
        lines.append(f'"{{{",".join(sensors)}}}",{fmt(lat)},{fmt(lon)},{t:.1f}')
    return lines


def dialect_b_rows(rng, n, sensors):
    rows = []
    t = 1627000000.0
    for i in range(n):
        t += 0.5
        rows.append(
            (
                rng.choice(sensors),
                rng.uniform(40.0, 60.0),
                rng.uniform(-5.0, 25.0),
                float(rng.randrange(100, 400) * 100),
                round(rng.uniform(0.0, 359.9), 1),
                round(rng.uniform(250.0, 500.0), 1),
                t,
            )
        )
    return rows


def render_b(rows):
    lines = ["sensor,lat,lon,alt,heading,speed,time"]
    for s, lat, lon, alt, hdg, spd, t in rows:
        lines.append(f"{s},{fmt(lat)},{fmt(lon)},{alt:.0f},{hdg:.1f},{spd:.1f},{t:.1f}")
    return lines


def duplicates(rng, total, repeats):
    # `total` messages; the first total - repeats carry distinct 5-tuples
    # (latitude steps guarantee it) and `repeats` copy an earlier tuple with a
    # different sensor and time.
    base = []
    for i in range(total - repeats):
        base.append(
            (
                f"F{rng.randrange(40):02d}",
                45.0 + i * 1e-4,
                rng.uniform(-5.0, 25.0),
                float(rng.randrange(100, 400) * 100),
                round(rng.uniform(0.0, 359.9), 1),
                round(rng.uniform(250.0, 500.0), 1),
                1627000000.0 + i * 0.5,
            )
        )
    rows = list(base)
    sources = rng.sample(range(len(base)), repeats)
    for k, src in enumerate(sources):
        s, lat, lon, alt, hdg, spd, t = base[src]
        copy = (f"D{k:02d}", lat, lon, alt, hdg, spd, t + 3600.0)
        rows.insert(rng.randrange(src + 1, len(rows) + 1), copy)
    return rows


def main():
    rng = random.Random(20210723)
    (HERE / "dialect_a_100.csv").write_text("\n".join(dialect_a_100(rng)) + "\n")

    ten = render_b(dialect_b_rows(rng, 10, ["fr1", "fr2", "fr3"]))
    (HERE / "dialect_b_10.csv").write_text("\n".join(ten) + "\n")
    with gzip.GzipFile(HERE / "dialect_b_10.csv.gz", "wb", mtime=0) as gz:
        gz.write(("\n".join(ten) + "\n").encode())

    (HERE / "duplicates_1000.csv").write_text("\n".join(render_b(duplicates(rng, 1000, 18))) + "\n")
    (HERE / "duplicates_10000.csv").write_text(
        "\n".join(render_b(duplicates(rng, 10000, 18))) + "\n"
    )

    malformed = [
        "sensor,lat,lon,alt,heading,speed,time",
        "ok1,50.0,10.0,30000,90.0,400.0,1627000000.0",
        "bad1,not-a-number,10.0,30000,90.0,400.0,1627000000.5",
        "bad2,95.0,10.0,30000,90.0,400.0,1627000001.0",
        "bad3,50.0,10.0,30000,361.0,400.0,1627000001.5",
        "bad4,50.0,10.0,30000,90.0,-1.0,1627000002.0",
        "bad5,50.0,10.0",
        ",50.0,10.0,30000,90.0,400.0,1627000002.5",
        "ok2,50.5,10.5,,,,",
        "ok3,51.0,11.0,31000,180.0,410.0,1627000003.0",
    ]
    (HERE / "malformed_b.csv").write_text("\r\n".join(malformed) + "\r\n")


if __name__ == "__main__":
    main()
