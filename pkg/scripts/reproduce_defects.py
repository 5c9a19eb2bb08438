#!/usr/bin/env python3
"""Defect table for the catalogue matrices: the Fourier formula against the
first-order linear system, plus the isolated matrix and the circulant.

Writes reproduce_defects.json; reruns produce identical JSON.
"""

import sys

import numpy as np

from mubforge import io
from mubforge.catalogue import bjorck_c6, defect, fourier, fourier_defect, tao_s6

OUT = "reproduce_defects.json"


def main():
    rows = {}
    for d in range(2, 13):
        rep = defect(fourier(d).matrix)
        rows[f"F{d}"] = {"defect": rep.defect, "formula": fourier_defect(d), "rank": rep.system_rank}
    rows["S6"] = {"defect": defect(tao_s6().matrix).defect}
    rows["C6"] = {"defect": defect(bjorck_c6().matrix).defect}
    for name, row in rows.items():
        print(name, row)
    io.save(io.document_for_report(6, rows, {"sv_threshold": "1e-8 * sigma_max"}), OUT)
    print(f"-> {OUT}")
    ok = all(rows[f"F{d}"]["defect"] == rows[f"F{d}"]["formula"] for d in range(2, 13))
    ok &= rows["S6"]["defect"] == 0 and rows["F6"]["defect"] == 4
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
