/**
 * plots --fig fig5 --csv results.csv --out fig5.svg
 *
 * Aggregates the simulator CSV (mean over trials per model and sweep point)
 * and writes one SVG chart for the requested figure id.
 */

import { readFileSync, writeFileSync } from "fs";

import { parseResultsCsv } from "./csv";
import { FIGURES, renderFigure } from "./figures";

interface Args {
    fig: string;
    csv: string;
    out: string;
}

export function parseArgs(argv: string[]): Args {
    const args: Partial<Args> = {};
    for (let i = 0; i < argv.length; i++) {
        const flag = argv[i];
        if (flag === "--fig" || flag === "--csv" || flag === "--out") {
            const value = argv[++i];
            if (value === undefined) throw new Error(`missing value for ${flag}`);
            args[flag.slice(2) as keyof Args] = value;
        } else if (flag === "--help" || flag === "-h") {
            console.log(`usage: plots --fig <${Object.keys(FIGURES).join("|")}> --csv results.csv --out figure.svg`);
            process.exit(0);
        } else {
            throw new Error(`unknown flag ${flag}`);
        }
    }
    for (const key of ["fig", "csv", "out"] as const) {
        if (!args[key]) throw new Error(`--${key} is required`);
    }
    return args as Args;
}

export function main(argv: string[]): number {
    let args: Args;
    try {
        args = parseArgs(argv);
    } catch (err) {
        console.error(`error: ${(err as Error).message}`);
        return 2;
    }
    try {
        const rows = parseResultsCsv(readFileSync(args.csv, "utf-8"));
        const svg = renderFigure(args.fig, rows);
        writeFileSync(args.out, svg);
        console.log(`${args.fig}: ${rows.length} rows -> ${args.out}`);
        return 0;
    } catch (err) {
        console.error(`error: ${(err as Error).message}`);
        return 1;
    }
}

if (require.main === module) {
    process.exit(main(process.argv.slice(2)));
}
