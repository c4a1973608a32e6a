#!/usr/bin/env python3
"""Builds region aggregations for case9241pegase from the bus zone column.

The zone-to-region grouping is a best-effort stand-in: the case file carries
anonymised zone numbers only, so region names are indicative.
"""
import argparse
import json
import re
from pathlib import Path

GROUPS_4 = {
    "south_western": [3, 4, 8, 9],
    "northern": [2, 10, 11, 12, 14, 15, 16, 17],
    "central": [1, 5, 6, 7, 13],
    "south_eastern": [18, 19, 20, 21, 22, 23, 24],
}
POLAND_ZONE = 6
GERMANY_ZONE = 5


def bus_zones(case_text):
    m = re.search(r"mpc\.bus\s*=\s*\[(.*?)\];", case_text, re.S)
    if not m:
        raise SystemExit("no mpc.bus table")
    zones = []
    for line in m.group(1).splitlines():
        line = line.split("%")[0].split(";")[0].split()
        if line:
            zones.append((int(float(line[0])), int(float(line[10]))))
    return zones


def grouped(zones, groups):
    zone_region = {z: name for name, zs in groups.items() for z in zs}
    regions = {name: [] for name in groups}
    for bus, zone in zones:
        if zone not in zone_region:
            raise SystemExit(f"zone {zone} of bus {bus} has no region")
        regions[zone_region[zone]].append(bus)
    return {"regions": regions}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("case", type=Path)
    ap.add_argument("outdir", type=Path)
    args = ap.parse_args()
    zones = bus_zones(args.case.read_text())
    all_zones = sorted({z for _, z in zones})
    rest = [z for z in all_zones if z not in (POLAND_ZONE, GERMANY_ZONE)]
    polish = {"poland": [POLAND_ZONE], "germany": [GERMANY_ZONE], "rest": rest}
    for name, groups in (("pegase_agg4.json", GROUPS_4), ("pegase_agg_pl.json", polish)):
        (args.outdir / name).write_text(json.dumps(grouped(zones, groups), separators=(",", ":")) + "\n")


if __name__ == "__main__":
    main()
