/**
 * Reader for the simulator's result CSV contract:
 *
 * scenario,model,sweep_name,sweep_value,seed,rate_bpshz,se_bps,ee_bpj,tf_s,payload_bits,nmse,elapsed_s
 *
 * Seeds are 63-bit integers, wider than a JS number mantissa, so they stay
 * strings; every metric column becomes a number (possibly NaN).
 */

export const REQUIRED_COLUMNS = [
    "scenario", "model", "sweep_name", "sweep_value", "seed",
    "rate_bpshz", "se_bps", "ee_bpj", "tf_s", "payload_bits", "nmse", "elapsed_s",
] as const;

export type MetricColumn =
    | "rate_bpshz" | "se_bps" | "ee_bpj" | "tf_s" | "payload_bits" | "nmse" | "elapsed_s";

export interface ResultRow {
    scenario: string;
    model: string;
    sweep_name: string;
    sweep_value: number;
    seed: string;
    rate_bpshz: number;
    se_bps: number;
    ee_bpj: number;
    tf_s: number;
    payload_bits: number;
    nmse: number;
    elapsed_s: number;
}

/** Split one RFC-4180 CSV document into rows of raw string fields. */
export function splitCsv(text: string): string[][] {
    const rows: string[][] = [];
    let field = "";
    let row: string[] = [];
    let inQuotes = false;
    let i = 0;
    const pushField = () => { row.push(field); field = ""; };
    const pushRow = () => { pushField(); rows.push(row); row = []; };
    while (i < text.length) {
        const c = text[i];
        if (inQuotes) {
            if (c === '"') {
                if (text[i + 1] === '"') { field += '"'; i += 2; continue; }
                inQuotes = false; i += 1; continue;
            }
            field += c; i += 1; continue;
        }
        if (c === '"') { inQuotes = true; i += 1; continue; }
        if (c === ",") { pushField(); i += 1; continue; }
        if (c === "\n") { pushRow(); i += 1; continue; }
        if (c === "\r") { if (text[i + 1] === "\n") i += 1; pushRow(); i += 1; continue; }
        field += c; i += 1;
    }
    if (field.length > 0 || row.length > 0) pushRow();
    return rows;
}

export function parseResultsCsv(text: string): ResultRow[] {
    const raw = splitCsv(text).filter(r => !(r.length === 1 && r[0] === ""));
    if (raw.length === 0) {
        throw new Error("empty CSV: no header row");
    }
    const header = raw[0];
    for (const col of REQUIRED_COLUMNS) {
        if (!header.includes(col)) {
            throw new Error(`CSV is missing required column '${col}'`);
        }
    }
    const index = new Map(header.map((name, i) => [name, i] as const));
    const at = (row: string[], name: string) => row[index.get(name)!] ?? "";
    return raw.slice(1).map((row, lineNo) => {
        if (row.length !== header.length) {
            throw new Error(`row ${lineNo + 2} has ${row.length} fields, expected ${header.length}`);
        }
        return {
            scenario: at(row, "scenario"),
            model: at(row, "model"),
            sweep_name: at(row, "sweep_name"),
            sweep_value: Number(at(row, "sweep_value")),
            seed: at(row, "seed"),
            rate_bpshz: Number(at(row, "rate_bpshz")),
            se_bps: Number(at(row, "se_bps")),
            ee_bpj: Number(at(row, "ee_bpj")),
            tf_s: Number(at(row, "tf_s")),
            payload_bits: Number(at(row, "payload_bits")),
            nmse: Number(at(row, "nmse")),
            elapsed_s: Number(at(row, "elapsed_s")),
        };
    });
}
