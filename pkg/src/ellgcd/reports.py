"""CSV / JSON rendering of engine results.

Every report carries the tool version and the config digest.  CSV output puts
those (and any scalar summary) in leading ``# key=value`` lines, then a header
row and the data rows, comma separated with LF endings.
"""
from __future__ import annotations

import csv
import io
import json

from .divisor import DivisorP1, Place
from .gcd_engine import GcdReport, StabilityReport
from .serialize import divisor_compact, divisor_to_json, fraction_str, poly_to_json

__all__ = ["Report", "gcd_report", "stability_report", "render", "place_json", "fmt_float"]


def fmt_float(x) -> str:
    """Decimal at 12 significant digits; empty for missing values."""
    return "" if x is None else format(float(x), ".12g")


def place_json(place: Place):
    return "oo" if place.is_infinite else poly_to_json(place.poly)


def place_compact(place: Place) -> str:
    return "oo" if place.is_infinite else "[" + " ".join(poly_to_json(place.poly)) + "]"


class Report:
    """Tabular payload plus metadata, rendered on demand."""

    def __init__(self, kind: str, header: list, rows: list, json_body: dict,
                 summary: dict | None = None, complete: bool = True):
        self.kind = kind
        self.header = header
        self.rows = rows
        self.json_body = json_body
        self.summary = summary or {}
        self.complete = complete


def render(report: Report, fmt: str, meta: dict) -> str:
    meta = dict(meta, report=report.kind)
    if not report.complete:
        meta["partial"] = "true"
    if fmt == "json":
        body = {"meta": meta, "complete": report.complete}
        body.update(report.json_body)
        return json.dumps(body, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    for k, v in list(meta.items()) + list(report.summary.items()):
        buf.write(f"# {k}={v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(report.header)
    w.writerows(report.rows)
    return buf.getvalue()


def gcd_report(rep: GcdReport) -> Report:
    rows = [[r.n1, r.n2, "" if r.degree is None else r.degree,
             "" if r.divisor is None else divisor_cell(r.divisor), r.marker] for r in rep.rows]
    body = {
        "n_max": rep.n_max,
        "diagonal_only": rep.diagonal_only,
        "rows": [{"n1": r.n1, "n2": r.n2,
                  "divisor": None if r.divisor is None else divisor_to_json(r.divisor),
                  "degree": r.degree, "marker": r.marker} for r in rep.rows],
        "bad_places": divisor_to_json(rep.bad_places),
        "looks_unbounded": rep.looks_unbounded,
    }
    summary = {"bad_places": divisor_compact(rep.bad_places) or "0",
               "looks_unbounded": str(rep.looks_unbounded).lower()}
    return Report("gcd-table", ["n1", "n2", "degree", "divisor", "marker"], rows, body,
                  summary, rep.complete)


def stability_report(st: StabilityReport) -> Report:
    n_gamma = sorted(st.n_gamma.items(), key=lambda kv: kv[0])
    rows = [[n, n, D.degree, divisor_cell(D)] for n, D in sorted(st.gcds.items())]
    body = {
        "base_gcd": divisor_to_json(st.base_gcd),
        "n_gamma": [{"place": place_json(p), "n_gamma": v} for p, v in n_gamma],
        "density_lower_bound": fraction_str(st.density_lower_bound),
        "stable_primes": st.stable_primes,
        "exceptional_primes": st.exceptional_primes,
        "violations": [{"place": place_json(v.place), "n": v.n, "predicted": v.predicted,
                        "observed": v.observed} for v in st.violations],
        "rows": [{"n1": n, "n2": n, "divisor": divisor_to_json(D), "degree": D.degree}
                 for n, D in sorted(st.gcds.items())],
        "bad_places": divisor_to_json(st.bad_places),
        "n_max": st.n_max,
        "prime_max": st.prime_max,
    }
    summary = {
        "base_gcd": divisor_compact(st.base_gcd) or "0",
        "n_gamma": ";".join(f"{place_compact(p)}:{v}" for p, v in n_gamma),
        "density_lower_bound": fraction_str(st.density_lower_bound),
        "stable_primes": " ".join(map(str, st.stable_primes)),
        "exceptional_primes": " ".join(map(str, st.exceptional_primes)),
        "violations": len(st.violations),
        "bad_places": divisor_compact(st.bad_places) or "0",
    }
    return Report("stability", ["n1", "n2", "degree", "divisor"], rows, body, summary)


def divisor_cell(D: DivisorP1) -> str:
    return divisor_compact(D) or "0"
