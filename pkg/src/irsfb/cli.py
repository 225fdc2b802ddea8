"""Command-line client for the feedback-compression service.

The CLI talks HTTP to the service; by default it mounts the app in-process
(no network, fully deterministic), while ``--url`` points it at a running
server instead.  Subcommands:

  payload    bit counts, ratios and feedback duration for a configuration
  decompose  fit a phase-shift vector file and print the fit report
  simulate   run an experiment config and write the CSV
  codec      round-trip check a feedback message file
  serve      run the HTTP service with uvicorn
"""

import argparse
import asyncio
import json
import sys

import httpx

from .service import create_app


class _InProcessTransport(httpx.BaseTransport):
    """Drive the ASGI app synchronously so the CLI needs no running server."""

    def __init__(self, app):
        self._asgi = httpx.ASGITransport(app=app)

    def handle_request(self, request: httpx.Request) -> httpx.Response:
        request.read()

        async def roundtrip():
            response = await self._asgi.handle_async_request(request)
            body = b"".join([chunk async for chunk in response.stream])
            return httpx.Response(
                response.status_code, headers=response.headers, content=body
            )

        return asyncio.run(roundtrip())


def _client(url: str | None) -> httpx.Client:
    if url:
        return httpx.Client(base_url=url, timeout=600.0)
    transport = _InProcessTransport(create_app())
    return httpx.Client(transport=transport, base_url="http://irsfb.local", timeout=None)


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _fail(resp: httpx.Response) -> int:
    try:
        detail = resp.json().get("detail", resp.text)
    except Exception:
        detail = resp.text
    print(f"error: {detail}", file=sys.stderr)
    return 1


def _cmd_payload(args) -> int:
    body = {
        "n": args.n,
        "model": args.model,
        "r": args.r,
        "phase_bits": _int_list(args.b) if "," in args.b else int(args.b),
        "weight_bits": args.bw,
        "include_preamble": not args.no_preamble,
        "baseline_bits": args.baseline_bits,
    }
    if args.sizes:
        if args.sizes == "auto":
            body["auto_p"] = args.p
        else:
            body["sizes"] = _int_list(args.sizes)
    if args.ranks:
        body["ranks"] = _int_list(args.ranks)
    if args.bf_hz is not None:
        body["link"] = {
            "bf_hz": args.bf_hz,
            "feedback_power_w": args.pf_w,
            "gf_gain": args.gf_gain,
        }
    with _client(args.url) as client:
        resp = client.post("/payload", json=body)
    if resp.status_code != 200:
        return _fail(resp)
    out = resp.json()
    print(f"model: {out['model']}")
    if out["sizes"]:
        print(f"sizes: {','.join(map(str, out['sizes']))}")
    print(f"phases conveyed: {out['phases_conveyed']}")
    if out["core_phases"]:
        print(f"core phases: {out['core_phases']}")
    print(f"payload bits: {out['payload_bits']}")
    print(f"preamble bits: {out['preamble_bits']}")
    print(f"total bits: {out['total_bits']}")
    print(f"baseline total bits: {out['baseline_total_bits']}")
    print(f"ratio vs baseline: {out['ratio_vs_baseline']:.6g}")
    if out.get("tf_s") is not None:
        print(f"feedback duration: {out['tf_s']:.6g} s")
    return 0


def _load_vector_file(path: str) -> list:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if isinstance(doc, dict) and "values" in doc:
        return doc["values"]
    if isinstance(doc, list):
        return doc
    raise ValueError("expected a JSON list of [re, im] pairs or {\"values\": [...]}")


def _cmd_decompose(args) -> int:
    try:
        values = _load_vector_file(args.input)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    body = {
        "values": values,
        "shape": _int_list(args.shape),
        "model": args.model,
        "r": args.r,
        "max_iters": args.max_iters,
        "epsilon": args.epsilon,
        "seed": args.seed,
    }
    if args.ranks:
        body["ranks"] = _int_list(args.ranks)
    with _client(args.url) as client:
        resp = client.post("/decompose", json=body)
    if resp.status_code != 200:
        return _fail(resp)
    out = resp.json()
    print(f"model: {out['model']}  shape: {','.join(map(str, out['shape']))}")
    print(f"iterations: {out['iterations']}  converged: {out['converged']}")
    if out["over_parameterized"]:
        print("note: component count exceeds the attainable rank bound")
    print(f"final nmse: {out['final_nmse']:.6e}")
    if out.get("weights") is not None:
        print("weights: " + ", ".join(f"{w:.6g}" for w in out["weights"]))
    if out.get("sigmas") is not None:
        for p, sig in enumerate(out["sigmas"], start=1):
            print(f"sigma[{p}]: " + ", ".join(f"{x:.6g}" for x in sig))
    return 0


def _cmd_simulate(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            config_text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    body = {"config_text": config_text}
    if args.quick:
        body["trials_override"] = 20
    with _client(args.url) as client:
        resp = client.post("/simulate", json=body)
    if resp.status_code != 200:
        return _fail(resp)
    out = resp.json()
    output = args.output
    if output is None:
        for line in config_text.splitlines():
            stripped = line.split("#", 1)[0].strip()
            if stripped.startswith("output"):
                output = stripped.split("=", 1)[1].strip()
    output = output or "results.csv"
    with open(output, "w", encoding="utf-8", newline="") as fh:
        fh.write(out["csv"])
    print(f"{out['scenario']}: {out['rows']} rows -> {output}")
    return 0


def _cmd_codec(args) -> int:
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            message = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    with _client(args.url) as client:
        resp = client.post("/codec/roundtrip", json=message)
    if resp.status_code != 200:
        return _fail(resp)
    out = resp.json()
    print(f"model: {out['model']}")
    print(f"encoded bits: {out['bit_length']} ({out['byte_length']} bytes)")
    print(f"analytic bits: {out['analytic_bits']}")
    print(f"length matches: {out['length_matches']}")
    print(f"round trip ok: {out['roundtrip_ok']}")
    if args.show_hex:
        print(f"hex: {out['encoded_hex']}")
    if not (out["roundtrip_ok"] and out["length_matches"]):
        print("error: codec round-trip check failed", file=sys.stderr)
        return 2
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irsfb",
        description="Low-rank tensor compression of IRS phase-shift feedback",
    )
    parser.add_argument("--url", default=None, help="remote service URL (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("payload", help="payload bits, ratio and feedback duration")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--model", choices=["baseline", "parafac", "tucker"], required=True)
    p.add_argument("--sizes", help="comma list, or 'auto' with --p")
    p.add_argument("--p", type=int, help="factor count for sizes=auto")
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--ranks", help="comma list (tucker)")
    p.add_argument("--b", default="3", help="phase bits (single or comma list)")
    p.add_argument("--bw", type=int, default=4, help="weight bits")
    p.add_argument("--no-preamble", action="store_true")
    p.add_argument("--baseline-bits", type=int, default=3)
    p.add_argument("--bf-hz", type=float, help="feedback bandwidth for T_F")
    p.add_argument("--pf-w", type=float, default=15.811388300841896)
    p.add_argument("--gf-gain", type=float, default=1e-11)
    p.set_defaults(func=_cmd_payload)

    d = sub.add_parser("decompose", help="fit a phase vector file")
    d.add_argument("--input", required=True, help="JSON file of [re, im] pairs")
    d.add_argument("--shape", required=True, help="comma list of mode sizes")
    d.add_argument("--model", choices=["parafac", "tucker"], default="parafac")
    d.add_argument("--r", type=int, default=1)
    d.add_argument("--ranks")
    d.add_argument("--max-iters", type=int, default=100)
    d.add_argument("--epsilon", type=float, default=1e-6)
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=_cmd_decompose)

    s = sub.add_parser("simulate", help="run an experiment config")
    s.add_argument("--config", required=True)
    s.add_argument("--output", help="CSV path (default: config's output key)")
    s.add_argument("--quick", action="store_true", help="20-trial CI profile")
    s.set_defaults(func=_cmd_simulate)

    c = sub.add_parser("codec", help="round-trip check a feedback message file")
    c.add_argument("--input", required=True, help="JSON message file")
    c.add_argument("--show-hex", action="store_true")
    c.set_defaults(func=_cmd_codec)

    v = sub.add_parser("serve", help="run the HTTP service")
    v.add_argument("--host", default="127.0.0.1")
    v.add_argument("--port", type=int, default=8000)
    v.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except httpx.HTTPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
