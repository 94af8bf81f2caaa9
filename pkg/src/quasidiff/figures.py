"""CSV + SVG data for the four figures: curious curve, its fitted left half, H and G."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import svg
from .bqf import fit_closed_form
from .signals import curious_signal, sample_curve
from .specfun import eval_G, eval_H

FIGURES = ("fig1", "fig2", "fig3", "fig4")
FIG1_TERMS = 1000
FIG1_POINTS = 1000
FIG2_POINTS = 501
FIG2_T = 0.5
FUNC_MU_MAX = 50.0
FUNC_POINTS = 2001


def write_csv(path, header, columns, fmt=".12g"):
    with Path(path).open("w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*(np.asarray(c, float).tolist() for c in columns)):
            fh.write(",".join(f"{v:{fmt}}" for v in row) + "\n")


def reproduce_figure(fig_id: str, out_dir) -> list[Path]:
    """Write <fig_id>.csv and <fig_id>.svg into out_dir; returns the paths."""
    if fig_id not in FIGURES:
        raise ValueError(f"unknown figure {fig_id!r}; choose from {', '.join(FIGURES)}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path, svg_path = out_dir / f"{fig_id}.csv", out_dir / f"{fig_id}.svg"

    if fig_id == "fig1":
        curve = sample_curve(curious_signal(FIG1_TERMS), 1.0, FIG1_POINTS)
        write_csv(csv_path, ["t", "f"], [curve.t, curve.f])
        svg.line_plot(svg_path, [("f(t)", curve.t, curve.f)], title="Curious curve",
                      xlabel="t", ylabel="f")
    elif fig_id == "fig2":
        sig = curious_signal(FIG1_TERMS)
        curve = sample_curve(sig, FIG2_T, FIG2_POINTS)
        fit = fit_closed_form(sig, FIG2_T)
        q = fit(curve.t)
        write_csv(csv_path, ["t", "f", "q"], [curve.t, curve.f, q])
        svg.line_plot(svg_path, [("f(t)", curve.t, curve.f),
                                 (f"BQF: alpha*={fit.alpha_star:.4g}, gamma*={fit.gamma_star:.4g}",
                                  curve.t, q)],
                      title="Left half with best quadratic fit", xlabel="t", ylabel="f")
    else:
        mu = np.linspace(0.0, FUNC_MU_MAX, FUNC_POINTS)
        name, fn = ("H", eval_H) if fig_id == "fig3" else ("G", eval_G)
        vals = fn(mu)
        write_csv(csv_path, ["mu", name], [mu, vals])
        svg.line_plot(svg_path, [(f"{name}(mu)", mu, vals)], title=f"{name} function",
                      xlabel="mu", ylabel=name)
    return [csv_path, svg_path]
