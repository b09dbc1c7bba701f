"""Formatting of exact values and result tables."""

import json
import logging

import pandas as pd
from sympy import Rational

logger = logging.getLogger(__name__)


def format_rational(value):
    """Canonical "p/q" string, "p" when the denominator is 1."""
    if value is None:
        return None
    value = Rational(value)
    return str(value.p) if value.q == 1 else f"{value.p}/{value.q}"


def format_number(value):
    """JSON-friendly exact value: int when integral, otherwise "p/q"."""
    value = Rational(value)
    return int(value) if value.q == 1 else format_rational(value)


def format_matrix(M):
    return [[format_rational(M[i, j]) for j in range(M.cols)] for i in range(M.rows)]


def format_polynomial(poly):
    """Coefficient list, constant term first."""
    return [format_rational(c) for c in poly.coeffs]


def polynomial_to_text(poly, var="t"):
    """Human-readable form, highest degree first: 't^2 - t + 1'."""
    if poly.is_zero:
        return "0"
    terms = []
    for k in range(poly.degree, -1, -1):
        c = poly[k]
        if c == 0:
            continue
        magnitude = abs(c)
        if k == 0:
            body = format_rational(magnitude)
        else:
            power = var if k == 1 else f"{var}^{k}"
            body = power if magnitude == 1 else f"{format_rational(magnitude)}*{power}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    first_sign, first_body = terms[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text


def to_json_text(payload):
    """Deterministic JSON rendering for command output."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _fp_sort_key(indexed_row):
    index, row = indexed_row
    value = row.get("fp")
    if value is None:
        return (1, Rational(0), index)
    return (0, Rational(value), index)


RESULT_COLUMNS = ["name", "file", "fp", "status", "expected_fp", "matches_expected", "error"]


def sort_results(rows):
    """Batch rows sorted by FP value; ties keep input order, failed rows go last."""
    return [row for _, row in sorted(enumerate(rows), key=_fp_sort_key)]


def build_results_table(rows):
    """Sorted batch rows as a DataFrame."""
    if not rows:
        return pd.DataFrame(columns=RESULT_COLUMNS)
    df = pd.DataFrame(sort_results(rows))
    for column in RESULT_COLUMNS:
        if column not in df.columns:
            df[column] = None
    return df[RESULT_COLUMNS]


def group_by_fp(df):
    """One row per FP value with the list of diagram names having it, in table order."""
    if df is None or df.empty:
        return pd.DataFrame(columns=["fp", "names"])
    computed = df[df["status"] == "ok"]
    grouped = computed.groupby("fp", sort=False)["name"].apply(list)
    return grouped.reset_index().rename(columns={"name": "names"})


def render_table(df):
    """Plain-text rendering of a DataFrame for the table output mode."""
    if df is None or df.empty:
        return "(no rows)"
    return df.fillna("").to_string(index=False)


def matrix_to_text(M):
    cells = format_matrix(M)
    if not cells:
        return "[]"
    width = max(len(cell) for row in cells for cell in row)
    return "\n".join("  ".join(cell.rjust(width) for cell in row) for row in cells)
