/** Dependency-free SVG line charts: fixed layout, deterministic output. */

import { Series } from "./aggregate";

export type AxisScale = "linear" | "log";

export interface ChartOptions {
    title: string;
    xLabel: string;
    yLabel: string;
    xScale: AxisScale;
    yScale: AxisScale;
}

const WIDTH = 840;
const HEIGHT = 520;
const MARGIN = { top: 48, right: 220, bottom: 64, left: 92 };

const PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
];

function scaleFn(scale: AxisScale, domain: [number, number], range: [number, number]) {
    let [d0, d1] = domain;
    if (scale === "log") {
        if (d0 <= 0 || d1 <= 0) throw new Error("log scale needs positive values");
        d0 = Math.log10(d0);
        d1 = Math.log10(d1);
    }
    const span = d1 - d0 || 1;
    return (v: number) => {
        const t = ((scale === "log" ? Math.log10(v) : v) - d0) / span;
        return range[0] + t * (range[1] - range[0]);
    };
}

function ticks(scale: AxisScale, domain: [number, number], count = 6): number[] {
    const [d0, d1] = domain;
    if (scale === "log") {
        const lo = Math.floor(Math.log10(d0));
        const hi = Math.ceil(Math.log10(d1));
        const out: number[] = [];
        for (let e = lo; e <= hi; e++) {
            const v = Math.pow(10, e);
            if (v >= d0 * 0.999 && v <= d1 * 1.001) out.push(v);
        }
        return out.length >= 2 ? out : [d0, d1];
    }
    if (d0 === d1) return [d0];
    const out: number[] = [];
    for (let i = 0; i < count; i++) out.push(d0 + ((d1 - d0) * i) / (count - 1));
    return out;
}

function fmt(v: number): string {
    if (v === 0) return "0";
    const a = Math.abs(v);
    if (a >= 1e6 || a < 1e-3) return v.toExponential(1).replace("e+", "e");
    return Number(v.toPrecision(4)).toString();
}

function esc(text: string): string {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderLineChart(series: Series[], opts: ChartOptions): string {
    if (series.length === 0) throw new Error("nothing to plot: no series");
    const xs = series.flatMap(s => s.x);
    const ys = series.flatMap(s => s.y);
    if (xs.length === 0) throw new Error("nothing to plot: empty series");
    const xDomain: [number, number] = [Math.min(...xs), Math.max(...xs)];
    const yDomain: [number, number] = [Math.min(...ys), Math.max(...ys)];
    if (opts.yScale === "linear" && yDomain[0] === yDomain[1]) {
        yDomain[0] -= 1; yDomain[1] += 1;
    }
    const plotX: [number, number] = [MARGIN.left, WIDTH - MARGIN.right];
    const plotY: [number, number] = [HEIGHT - MARGIN.bottom, MARGIN.top];
    const sx = scaleFn(opts.xScale, xDomain, plotX);
    const sy = scaleFn(opts.yScale, yDomain, plotY);

    const parts: string[] = [];
    parts.push(
        `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
        `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
    );
    parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
    parts.push(
        `<text x="${(plotX[0] + plotX[1]) / 2}" y="26" text-anchor="middle" font-size="17">${esc(opts.title)}</text>`,
    );

    // axes and grid
    for (const t of ticks(opts.xScale, xDomain)) {
        const x = sx(t);
        parts.push(`<line x1="${x.toFixed(1)}" y1="${plotY[0]}" x2="${x.toFixed(1)}" y2="${plotY[1]}" stroke="#dddddd"/>`);
        parts.push(`<text x="${x.toFixed(1)}" y="${plotY[0] + 22}" text-anchor="middle" font-size="12">${fmt(t)}</text>`);
    }
    for (const t of ticks(opts.yScale, yDomain)) {
        const y = sy(t);
        parts.push(`<line x1="${plotX[0]}" y1="${y.toFixed(1)}" x2="${plotX[1]}" y2="${y.toFixed(1)}" stroke="#dddddd"/>`);
        parts.push(`<text x="${plotX[0] - 8}" y="${(y + 4).toFixed(1)}" text-anchor="end" font-size="12">${fmt(t)}</text>`);
    }
    parts.push(`<line x1="${plotX[0]}" y1="${plotY[0]}" x2="${plotX[1]}" y2="${plotY[0]}" stroke="black"/>`);
    parts.push(`<line x1="${plotX[0]}" y1="${plotY[0]}" x2="${plotX[0]}" y2="${plotY[1]}" stroke="black"/>`);
    parts.push(
        `<text x="${(plotX[0] + plotX[1]) / 2}" y="${HEIGHT - 18}" text-anchor="middle" font-size="14">${esc(opts.xLabel)}</text>`,
    );
    parts.push(
        `<text x="24" y="${(plotY[0] + plotY[1]) / 2}" text-anchor="middle" font-size="14" ` +
        `transform="rotate(-90 24 ${(plotY[0] + plotY[1]) / 2})">${esc(opts.yLabel)}</text>`,
    );

    // series polylines, markers and legend
    series.forEach((s, i) => {
        const color = PALETTE[i % PALETTE.length];
        const points = s.x.map((x, k) => `${sx(x).toFixed(2)},${sy(s.y[k]).toFixed(2)}`).join(" ");
        parts.push(`<polyline points="${points}" fill="none" stroke="${color}" stroke-width="2"/>`);
        for (let k = 0; k < s.x.length; k++) {
            parts.push(`<circle cx="${sx(s.x[k]).toFixed(2)}" cy="${sy(s.y[k]).toFixed(2)}" r="3" fill="${color}"/>`);
        }
        const ly = MARGIN.top + 18 * i;
        parts.push(`<line x1="${WIDTH - MARGIN.right + 12}" y1="${ly}" x2="${WIDTH - MARGIN.right + 36}" y2="${ly}" stroke="${color}" stroke-width="2"/>`);
        parts.push(`<text x="${WIDTH - MARGIN.right + 42}" y="${ly + 4}" font-size="12">${esc(s.model)}</text>`);
    });

    parts.push("</svg>");
    return parts.join("\n") + "\n";
}
