"""Standalone SVG bar charts for suite results; no display dependency."""

from __future__ import annotations

import os
import xml.etree.ElementTree as ET

from .bench import SuiteResult

_COLORS = ["#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860"]

_W, _H = 640, 360
_MARGIN_L, _MARGIN_B, _MARGIN_T = 60, 70, 30


def _chart_root(title: str) -> ET.Element:
    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg",
                     width=str(_W), height=str(_H),
                     viewBox=f"0 0 {_W} {_H}")
    ET.SubElement(svg, "rect", x="0", y="0", width=str(_W), height=str(_H), fill="white")
    t = ET.SubElement(svg, "text", x=str(_W // 2), y="20", fill="black",
                      attrib={"text-anchor": "middle", "font-size": "14"})
    t.text = title
    # axes
    ET.SubElement(svg, "line", x1=str(_MARGIN_L), y1=str(_H - _MARGIN_B),
                  x2=str(_W - 20), y2=str(_H - _MARGIN_B), stroke="black")
    ET.SubElement(svg, "line", x1=str(_MARGIN_L), y1=str(_MARGIN_T),
                  x2=str(_MARGIN_L), y2=str(_H - _MARGIN_B), stroke="black")
    return svg


def _grouped_bars(svg: ET.Element, groups: list[str], series: list[str],
                  values: dict, y_max: float, y_label: str) -> None:
    plot_w = _W - 20 - _MARGIN_L
    plot_h = _H - _MARGIN_B - _MARGIN_T
    y_max = y_max or 1.0
    label = ET.SubElement(svg, "text", x="15", y=str(_MARGIN_T + plot_h // 2),
                          fill="black", attrib={
                              "font-size": "11", "text-anchor": "middle",
                              "transform": f"rotate(-90 15 {_MARGIN_T + plot_h // 2})"})
    label.text = y_label
    if not groups:
        return
    group_w = plot_w / len(groups)
    bar_w = max(2.0, group_w * 0.8 / max(1, len(series)))
    for gi, group in enumerate(groups):
        gx = _MARGIN_L + gi * group_w
        for si, s in enumerate(series):
            v = values.get((group, s), 0.0)
            h = 0.0 if y_max <= 0 else plot_h * min(v, y_max) / y_max
            x = gx + group_w * 0.1 + si * bar_w
            y = _H - _MARGIN_B - h
            ET.SubElement(svg, "rect", x=f"{x:.2f}", y=f"{y:.2f}",
                          width=f"{bar_w:.2f}", height=f"{h:.2f}",
                          fill=_COLORS[si % len(_COLORS)])
            vt = ET.SubElement(svg, "text", x=f"{x + bar_w / 2:.2f}", y=f"{y - 3:.2f}",
                               fill="black",
                               attrib={"font-size": "8", "text-anchor": "middle"})
            vt.text = f"{v:.3g}"
        gt = ET.SubElement(svg, "text", x=f"{gx + group_w / 2:.2f}",
                           y=str(_H - _MARGIN_B + 16), fill="black",
                           attrib={"font-size": "10", "text-anchor": "middle"})
        gt.text = group
    for si, s in enumerate(series):
        lx = _MARGIN_L + 10 + si * 100
        ET.SubElement(svg, "rect", x=str(lx), y=str(_H - 24), width="10", height="10",
                      fill=_COLORS[si % len(_COLORS)])
        lt = ET.SubElement(svg, "text", x=str(lx + 14), y=str(_H - 15), fill="black",
                           attrib={"font-size": "10"})
        lt.text = s


def _write(svg: ET.Element, path) -> None:
    ET.ElementTree(svg).write(path, encoding="unicode", xml_declaration=True)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write("\n")


def emit_plots(result: SuiteResult, destination) -> list[str]:
    """Write success-rate and runtime bar charts into the destination directory."""
    os.makedirs(destination, exist_ok=True)
    planners = sorted({r.planner for r in result.records})
    buckets = result.buckets()
    groups = [f"{m} {d}" for m, d in buckets]

    sr = _chart_root("Success rate by map and obstacle density")
    sr_values = {(f"{m} {d}", p): result.success_rate(p, m, d)
                 for m, d in buckets for p in planners}
    _grouped_bars(sr, groups, planners, sr_values, 1.0, "success rate")
    sr_path = os.path.join(destination, "success_rate.svg")
    _write(sr, sr_path)

    rt = _chart_root("Mean runtime per planner (ms)")
    rt_values = {("all", p): result.runtime_stats(p)["mean_ms"] for p in planners}
    y_max = max(rt_values.values(), default=0.0)
    _grouped_bars(rt, ["all"] if planners else [], planners, rt_values, y_max,
                  "mean runtime (ms)")
    rt_path = os.path.join(destination, "runtime.svg")
    _write(rt, rt_path)
    return [sr_path, rt_path]
