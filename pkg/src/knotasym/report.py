"""Convergence reports: scaled sequences, two-point extrapolation, verdicts, CSV/JSON output."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import frac, fstr

NORMALIZATION = "T = p (meridian count of the closed orbit); invariant of degree n scaled by p^(-2n)"


@dataclass
class Row:
    key: str
    p: int
    q: int
    raw: Fraction
    scaled: Fraction


@dataclass
class ConvergenceReport:
    family: str
    rows: list[Row] = field(default_factory=list)
    targets: dict[str, dict[str, Fraction]] = field(default_factory=dict)  # key -> label -> value
    key_label: str = "quantity"
    normalization: str = NORMALIZATION
    notes: list[str] = field(default_factory=list)

    def keys(self) -> list[str]:
        seen = []
        for r in self.rows:
            if r.key not in seen:
                seen.append(r.key)
        for k in self.targets:
            if k not in seen:
                seen.append(k)
        return seen

    def sequence(self, key: str) -> list[Row]:
        return sorted((r for r in self.rows if r.key == key), key=lambda r: (r.p, r.q))

    def fit(self, key: str) -> Fraction | None:
        return two_point_fit([(r.p, r.scaled) for r in self.sequence(key)])

    def tail(self, key: str) -> Fraction | None:
        seq = self.sequence(key)
        return seq[-1].scaled if seq else None

    def verdict(self, key: str, rel_tol=Fraction(1, 100)) -> dict[str, bool]:
        f = self.fit(key)
        return verdict(f, self.targets.get(key, {}), rel_tol) if f is not None else {}

    # output -------------------------------------------------------------------------
    def target_labels(self) -> list[str]:
        labels = []
        for d in self.targets.values():
            for lab in d:
                if lab not in labels:
                    labels.append(lab)
        return labels

    def header(self) -> list[str]:
        cols = [self.key_label, "p", "q", "coefficient", "scaled", "scaled_decimal",
                "fitted_limit", "fitted_decimal"]
        for i, lab in enumerate(self.target_labels()):
            cols += [lab, "abs_gap" if i == 0 else f"abs_gap_{lab}"]
        return cols + ["flag"]

    def table(self) -> list[list[str]]:
        labels = self.target_labels()
        out = []
        for key in self.keys():
            seq = self.sequence(key)
            for r in seq:
                line = [key, str(r.p), str(r.q), fstr(r.raw), fstr(r.scaled), dec(r.scaled), "", ""]
                line += [""] * (2 * len(labels))
                out.append(line + [""])
            f = self.fit(key)
            if f is None:
                continue
            last = seq[-1]
            line = [key, str(last.p), str(last.q), "", "", "", fstr(f), dec(f)]
            tg = self.targets.get(key, {})
            for lab in labels:
                if lab in tg:
                    line += [fstr(tg[lab]), dec(abs(f - tg[lab]))]
                else:
                    line += ["", ""]
            v = self.verdict(key)
            matched = [lab for lab, ok in v.items() if ok]
            out.append(line + ["fit" + (":" + "|".join(matched) if matched else "")])
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"# family: {self.family}"])
        w.writerow([f"# normalization: {self.normalization}"])
        w.writerow(self.header())
        w.writerows(self.table())
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "normalization": self.normalization,
            "key_label": self.key_label,
            "rows": [{"key": r.key, "p": r.p, "q": r.q, "raw": fstr(r.raw), "scaled": fstr(r.scaled)}
                     for r in self.rows],
            "targets": {k: {lab: fstr(v) for lab, v in d.items()} for k, d in self.targets.items()},
            "fits": {k: fstr(f) for k in self.keys() if (f := self.fit(k)) is not None},
            "verdicts": {k: self.verdict(k) for k in self.keys()},
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "ConvergenceReport":
        rep = cls(d["family"], key_label=d.get("key_label", "quantity"),
                  normalization=d.get("normalization", NORMALIZATION), notes=list(d.get("notes", [])))
        rep.rows = [Row(r["key"], r["p"], r["q"], frac(r["raw"]), frac(r["scaled"])) for r in d["rows"]]
        rep.targets = {k: {lab: frac(v) for lab, v in t.items()} for k, t in d["targets"].items()}
        return rep


def dec(x: Fraction) -> str:
    """Decimal rendering to 12 significant digits."""
    return f"{float(x):.12g}"


def two_point_fit(points) -> Fraction | None:
    """Limit ``c`` of ``c + a/p`` through the last two points with distinct p."""
    pts = sorted(points)
    if not pts:
        return None
    if len(pts) == 1:
        return frac(pts[0][1])
    (p1, v1), (p2, v2) = pts[-2], pts[-1]
    if p1 == p2:
        return frac(v2)
    a = (frac(v1) - frac(v2)) / (Fraction(1, p1) - Fraction(1, p2))
    return frac(v2) - a / p2


def verdict(fit: Fraction, candidates: dict[str, Fraction], rel_tol=Fraction(1, 100)) -> dict[str, bool]:
    """A candidate matches iff it is strictly the closest one and within ``rel_tol`` relatively."""
    out = {}
    for lab, c in candidates.items():
        gap = abs(fit - c)
        closest = all(gap < abs(fit - o) for ol, o in candidates.items() if ol != lab)
        rel_ok = gap <= rel_tol * abs(c) if c != 0 else gap == 0
        out[lab] = bool(closest and rel_ok)
    return out


def report_emit(r: ConvergenceReport, fmt: str = "csv", path=None) -> str:
    text = r.to_csv() if fmt == "csv" else r.to_json() + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
