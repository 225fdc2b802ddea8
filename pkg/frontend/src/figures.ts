/** Figure registry: which metric each figure id aggregates and how it is drawn. */

import { groupMeanSeries, payloadRatioSeries, Series } from "./aggregate";
import { MetricColumn, ResultRow } from "./csv";
import { AxisScale, renderLineChart } from "./svg";

export interface FigureSpec {
    id: string;
    title: string;
    metric: MetricColumn | "payload_ratio";
    xLabel: string;
    yLabel: string;
    xScale: AxisScale;
    yScale: AxisScale;
}

export const FIGURES: Record<string, FigureSpec> = {
    fig5: {
        id: "fig5",
        title: "Achievable rate vs Rician factor",
        metric: "rate_bpshz",
        xLabel: "Rician factor K [dB]",
        yLabel: "mean achievable rate [bits/s/Hz]",
        xScale: "linear",
        yScale: "linear",
    },
    fig6: {
        id: "fig6",
        title: "Feedback payload ratio vs panel size",
        metric: "payload_ratio",
        xLabel: "reflecting elements N",
        yLabel: "baseline payload / model payload",
        xScale: "log",
        yScale: "linear",
    },
    fig7: {
        id: "fig7",
        title: "Achievable rate vs Rician factor (factor-count sweep)",
        metric: "rate_bpshz",
        xLabel: "Rician factor K [dB]",
        yLabel: "mean achievable rate [bits/s/Hz]",
        xScale: "linear",
        yScale: "linear",
    },
    fig8: {
        id: "fig8",
        title: "Achievable rate under a fixed control budget",
        metric: "rate_bpshz",
        xLabel: "Rician factor K [dB]",
        yLabel: "mean achievable rate [bits/s/Hz]",
        xScale: "linear",
        yScale: "linear",
    },
    fig9: {
        id: "fig9",
        title: "Spectral efficiency vs feedback bandwidth",
        metric: "se_bps",
        xLabel: "feedback bandwidth B_F [Hz]",
        yLabel: "mean spectral efficiency [bits/s]",
        xScale: "log",
        yScale: "linear",
    },
    fig10_12: {
        id: "fig10_12",
        title: "Energy efficiency vs feedback power",
        metric: "ee_bpj",
        xLabel: "feedback power p_F [W]",
        yLabel: "mean energy efficiency [bits/J]",
        xScale: "linear",
        yScale: "linear",
    },
};

export function figureSeries(spec: FigureSpec, rows: ResultRow[]): Series[] {
    if (spec.metric === "payload_ratio") {
        return payloadRatioSeries(rows);
    }
    return groupMeanSeries(rows, spec.metric);
}

export function renderFigure(figId: string, rows: ResultRow[]): string {
    const spec = FIGURES[figId];
    if (!spec) {
        throw new Error(`unknown figure id '${figId}'; known: ${Object.keys(FIGURES).join(", ")}`);
    }
    return renderLineChart(figureSeries(spec, rows), {
        title: spec.title,
        xLabel: spec.xLabel,
        yLabel: spec.yLabel,
        xScale: spec.xScale,
        yScale: spec.yScale,
    });
}
