#!/usr/bin/env python3
"""Regenerate the JSON fixtures under tests/fixtures."""

import argparse
import copy
import json
import shutil
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DIMS = (20, 20, 20)
VOXEL_MM = (5.0, 5.0, 5.0)
RX = 79.2
BACKGROUND = 5.0


def index(i, j, k):
    ny, nz = DIMS[1], DIMS[2]
    return (i * ny + j) * nz + k


def box(lo, hi):
    """Inclusive voxel box [lo, hi] as a list of [i, j, k]."""
    return [[i, j, k]
            for i in range(lo[0], hi[0] + 1)
            for j in range(lo[1], hi[1] + 1)
            for k in range(lo[2], hi[2] + 1)]


PTV = box((7, 7, 7), (12, 12, 12))
CTV = box((8, 8, 8), (11, 11, 11))
GTV = box((9, 9, 9), (10, 10, 10))
RECTUM = box((13, 9, 7), (15, 10, 12))
BLADDER = box((7, 13, 7), (12, 15, 12))
SMALL_BOWEL = box((7, 7, 15), (12, 12, 17))
PENILE_BULB = box((9, 9, 3), (10, 10, 4))


def passing_plan():
    values = [BACKGROUND] * (DIMS[0] * DIMS[1] * DIMS[2])
    # PTV: at or slightly above prescription.
    for i, j, k in PTV:
        values[index(i, j, k)] = round(RX + 0.01 * ((i + j + k) % 10), 2)
    for n, (i, j, k) in enumerate(RECTUM):
        values[index(i, j, k)] = 35.0 + (n % 5)
    # Bladder: gradient from 20 to 55 Gy, 10 voxels above 65% of Rx.
    for n, (i, j, k) in enumerate(BLADDER):
        values[index(i, j, k)] = 55.0 if n < 10 else 20.0 + (n % 20)
    for n, (i, j, k) in enumerate(SMALL_BOWEL):
        values[index(i, j, k)] = 46.0 if n < 10 else 15.0 + (n % 10)
    for n, (i, j, k) in enumerate(PENILE_BULB):
        values[index(i, j, k)] = 50.0 + (n % 4)
    return {
        "prescription": {
            "technique": "3DCRT",
            "total_dose_gy": RX,
            "fractions": 44,
            "dose_per_fraction_gy": 1.8,
        },
        "grid": {"dims": list(DIMS), "voxel_size_mm": list(VOXEL_MM), "values": values},
        "structures": [
            {"name": "PTV", "color": "magenta", "role": "PTV", "voxels": PTV},
            {"name": "CTV", "color": "Dark Blue", "role": "CTV", "voxels": CTV},
            {"name": "GTV", "color": "red", "role": "GTV", "voxels": GTV},
            {"name": "Rectum", "color": "brown", "role": "OAR", "voxels": RECTUM},
            {"name": "Bladder", "color": "yellow", "role": "OAR", "voxels": BLADDER},
            {"name": "Small Bowel", "color": "orange", "role": "OAR", "voxels": SMALL_BOWEL},
            {"name": "PenileBulb", "color": "purple", "role": "OAR", "voxels": PENILE_BULB},
        ],
    }


def failing_plan():
    """Prescription isodose spills 109 voxels outside the PTV (CI 1.5) and one
    PTV voxel sits at 90% of prescription (one cold spot)."""
    plan = copy.deepcopy(passing_plan())
    values = plan["grid"]["values"]
    spill = box((7, 7, 13), (12, 12, 13)) + box((7, 7, 6), (12, 12, 6)) + box((6, 7, 7), (6, 12, 12))
    spill.append([9, 6, 9])
    assert len(spill) == 109
    for i, j, k in spill:
        values[index(i, j, k)] = RX
    values[index(10, 10, 10)] = round(0.9 * RX, 2)
    return plan


PASS_FACTS = {
    "tumour.location": {"value": "C61.9", "system": "ICDO"},
    "tumour.stage": {"value": "T2aN0M0", "system": "TNM"},
    "lab.psa": {"value": 8, "unit": "ng/ml"},
    "lab.gleason": {"value": 6},
}

MUTATIONS = {
    "psa10": ("lab.psa", {"value": 10, "unit": "ng/ml"}),
    "gleason7": ("lab.gleason", {"value": 7}),
    "t2b": ("tumour.stage", {"value": "T2bN0M0", "system": "TNM"}),
    "n1": ("tumour.stage", {"value": "T2aN1M0", "system": "TNM"}),
    "m1": ("tumour.stage", {"value": "T2aN0M1", "system": "TNM"}),
}

ANSWERS = [
    {"criterion": "nodal_ctv_superior_margin", "answer": "pass", "answered_by": "reviewer"},
]


def write_json(path, doc, compact=False):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        if compact:
            json.dump(doc, f, separators=(",", ":"))
        else:
            json.dump(doc, f, indent=2)
        f.write("\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=ROOT / "tests" / "fixtures")
    args = parser.parse_args()
    out = args.out

    write_json(out / "plans" / "plan_pass.json", passing_plan(), compact=True)
    write_json(out / "plans" / "plan_fail.json", failing_plan(), compact=True)
    write_json(out / "facts" / "facts_pass.json", PASS_FACTS)
    for name, (key, value) in MUTATIONS.items():
        facts = dict(PASS_FACTS)
        facts[key] = value
        write_json(out / "facts" / f"facts_{name}.json", facts)
    write_json(out / "answers.json", ANSWERS)

    ontology = ROOT / "rulepacks" / "prostate_3dcrt" / "ontology.json"
    for pack in ("duplicate", "conflict"):
        shutil.copyfile(ontology, out / "lint" / pack / "ontology.json")


if __name__ == "__main__":
    main()
