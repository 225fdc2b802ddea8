/** Group-by mean aggregation over Monte-Carlo trials. */

import { MetricColumn, ResultRow } from "./csv";

export interface Series {
    model: string;
    /** sweep values in ascending order */
    x: number[];
    /** trial means of the metric, aligned with x */
    y: number[];
}

/**
 * Mean of `metric` per (model, sweep_value) cell.  Every cell must contain
 * at least one finite value; models come back sorted by name, x ascending.
 */
export function groupMeanSeries(rows: ResultRow[], metric: MetricColumn): Series[] {
    if (rows.length === 0) {
        throw new Error("no data rows to aggregate");
    }
    const cells = new Map<string, Map<number, number[]>>();
    for (const row of rows) {
        const value = row[metric];
        let byX = cells.get(row.model);
        if (!byX) { byX = new Map(); cells.set(row.model, byX); }
        let bucket = byX.get(row.sweep_value);
        if (!bucket) { bucket = []; byX.set(row.sweep_value, bucket); }
        bucket.push(value);
    }
    const series: Series[] = [];
    for (const model of [...cells.keys()].sort()) {
        const byX = cells.get(model)!;
        const xs = [...byX.keys()].sort((a, b) => a - b);
        const ys = xs.map(x => {
            const values = byX.get(x)!.filter(Number.isFinite);
            if (values.length === 0) {
                throw new Error(`no finite '${metric}' values for model '${model}' at sweep value ${x}`);
            }
            return values.reduce((acc, v) => acc + v, 0) / values.length;
        });
        series.push({ model, x: xs, y: ys });
    }
    return series;
}

/**
 * Payload-ratio series: baseline payload divided by each model's payload at
 * the same sweep value.  The baseline curve itself is dropped (ratio 1).
 */
export function payloadRatioSeries(rows: ResultRow[]): Series[] {
    const payloads = groupMeanSeries(rows, "payload_bits");
    const baseline = payloads.find(s => s.model.startsWith("baseline"));
    if (!baseline) {
        throw new Error("payload-ratio figure needs a baseline model in the CSV");
    }
    const baseAt = new Map(baseline.x.map((x, i) => [x, baseline.y[i]] as const));
    return payloads
        .filter(s => s !== baseline)
        .map(s => ({
            model: s.model,
            x: s.x,
            y: s.x.map((x, i) => {
                const base = baseAt.get(x);
                if (base === undefined) {
                    throw new Error(`baseline has no payload at sweep value ${x}`);
                }
                return base / s.y[i];
            }),
        }));
}
