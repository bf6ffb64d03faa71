/**
 * Evaluation report: ROC polylines drawn as SVG from the server's report
 * JSON, with an AUC / best-threshold / accuracy summary per model. The
 * client plots exactly the points the server computed.
 */

import { el } from "../dom.js";
import type { EvaluationReport, ModelComparison } from "../types.js";

const CURVE_COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"];
const SVG_NS = "http://www.w3.org/2000/svg";
const SIZE = 320;
const PAD = 30;

function svgElement(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

function toPixels(fpr: number, tpr: number): [number, number] {
  const x = PAD + fpr * (SIZE - 2 * PAD);
  const y = SIZE - PAD - tpr * (SIZE - 2 * PAD);
  return [x, y];
}

function rocSvg(reports: EvaluationReport[]): SVGElement {
  const svg = svgElement("svg", {
    viewBox: `0 0 ${SIZE} ${SIZE}`,
    width: String(SIZE),
    height: String(SIZE),
    class: "roc-plot",
  });
  const [x0, y0] = toPixels(0, 0);
  const [x1, y1] = toPixels(1, 1);
  svg.append(
    svgElement("rect", {
      x: String(PAD),
      y: String(PAD),
      width: String(SIZE - 2 * PAD),
      height: String(SIZE - 2 * PAD),
      fill: "none",
      stroke: "#ccc",
    }),
    svgElement("line", {
      x1: String(x0),
      y1: String(y0),
      x2: String(x1),
      y2: String(y1),
      stroke: "#ddd",
      "stroke-dasharray": "4 3",
    }),
  );
  reports.forEach((report, i) => {
    if (!report.auc_defined) return;
    const points = report.roc_points
      .map((p) => toPixels(p.fpr, p.tpr).join(","))
      .join(" ");
    svg.append(
      svgElement("polyline", {
        points,
        fill: "none",
        stroke: CURVE_COLORS[i % CURVE_COLORS.length],
        "stroke-width": "2",
        class: `roc-curve roc-${report.model}`,
      }),
    );
  });
  return svg;
}

export function renderEvalReport(comparison: ModelComparison): HTMLElement {
  const root = el("section", { class: "eval-report" });
  root.append(el("h3", {}, [`Model evaluation on ${comparison.dimension}`]));
  if (!comparison.reports.length) {
    root.append(el("p", { class: "empty" }, ["No prediction sets evaluated yet."]));
    return root;
  }
  root.append(rocSvg(comparison.reports));
  const legend = el("ul", { class: "roc-legend" });
  comparison.reports.forEach((report, i) => {
    const color = CURVE_COLORS[i % CURVE_COLORS.length];
    const swatch = el("span", { class: "swatch" });
    swatch.style.background = color;
    legend.append(
      el("li", { "data-model": report.model }, [
        swatch,
        `${report.model}: ` +
          (report.auc_defined && report.auc !== null
            ? `AUC ${report.auc.toFixed(2)}`
            : "AUC undefined (single-class labels)") +
          `, best threshold ${report.best_threshold.toFixed(4)}` +
          `, accuracy ${report.best_accuracy.toFixed(3)} over ${report.n} entities`,
      ]),
    );
  });
  root.append(legend);

  for (const report of comparison.reports) {
    if (!report.quadrant_breakdown.length) continue;
    const table = el("table", { class: "quadrant-table", "data-model": report.model });
    table.append(
      el("tr", {}, [
        el("th", {}, [report.model]),
        el("th", {}, ["n"]),
        el("th", {}, ["errors"]),
        el("th", {}, ["error rate"]),
      ]),
    );
    for (const q of report.quadrant_breakdown) {
      table.append(
        el("tr", {}, [
          el("td", {}, [q.quadrant]),
          el("td", {}, [String(q.n)]),
          el("td", {}, [String(q.errors)]),
          el("td", {}, [q.error_rate.toFixed(3)]),
        ]),
      );
    }
    root.append(table);
  }
  return root;
}
