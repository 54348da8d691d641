"""Command-line client for the analysis service.

The CLI is a thin HTTP client: by default it mounts the service in-process
(no network); with ``--server`` it talks to a running instance instead.
Machine-readable JSON goes to stdout, a one-line summary to stderr.

Exit codes: 0 success; 1 valid negative answer (infeasible, inequivalent,
not normal, verification failed); 2 invalid input; 3 unsupported request.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INVALID = 2
EXIT_UNSUPPORTED = 3


def _matrix_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"not a JSON matrix: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--server", help="service URL (default: run in-process)")
    common.add_argument(
        "--tol", type=float, default=None,
        help="numerical tolerance (default 1e-10; dense verification 1e-9)",
    )
    common.add_argument("--out", help="write the JSON response to this file")
    parser = argparse.ArgumentParser(
        prog="timps",
        description="Analyze symmetries, SLOCC classes, and transformations of "
        "translationally invariant matrix product states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_source(p, prefix="", required=True):
        p.add_argument(f"--{prefix}family" if prefix else "--family", required=False)
        p.add_argument(f"--{prefix}param" if prefix else "--param", type=_matrix_arg)
        p.add_argument(f"--{prefix}tensor" if prefix else "--tensor", help="tensor JSON file")

    p = sub.add_parser("state", parents=[common], help="build the dense chain state")
    add_source(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--amplitude-cap", type=int, help="maximum dense amplitude count")

    p = sub.add_parser("chi", parents=[common], help="cross ratio of a 2x2 deformation")
    p.add_argument("--b", type=_matrix_arg, required=True)

    p = sub.add_parser("classify", parents=[common], help="SLOCC class of a d=D=2 chain family")
    add_source(p)

    p = sub.add_parser("normality", parents=[common], help="injectivity length of a chain")
    add_source(p)
    p.add_argument("--l-max", type=int)

    p = sub.add_parser("symmetries", parents=[common], help="all N-site symmetries of a family")
    add_source(p)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("equivalent", parents=[common], help="SLOCC equivalence of two GHZ deformations")
    p.add_argument("--b", type=_matrix_arg, required=True)
    p.add_argument("--c", type=_matrix_arg, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--witness", help="write the witness plan to this file")

    p = sub.add_parser("transform", parents=[common], help="decide and construct a transformation")
    p.add_argument("--from", dest="from_family", required=True)
    p.add_argument("--from-param", type=_matrix_arg)
    p.add_argument("--to", dest="to_family", required=True)
    p.add_argument("--to-param", type=_matrix_arg)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="dense-verify the plan")

    p = sub.add_parser("verify", parents=[common], help="dense-verify a plan file")
    p.add_argument("--plan", required=True, help="plan JSON file")
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--scalar-mode", choices=["strict", "up_to_scalar"])

    p = sub.add_parser("serve", help="run the analysis service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _source_payload(args, prefix="") -> dict:
    family = getattr(args, f"{prefix}family" if prefix else "family", None)
    param = getattr(args, f"{prefix}param" if prefix else "param", None)
    tensor_path = getattr(args, f"{prefix}tensor" if prefix else "tensor", None)
    if tensor_path:
        with open(tensor_path) as fh:
            return {"tensor": json.load(fh)}
    if family:
        out = {"family": family}
        if param is not None:
            out["param"] = param
        return out
    raise SystemExit("either --family or --tensor is required")


def _request_payload(args) -> tuple[str, dict]:
    cmd = args.command
    if args.tol is None:
        args.tol = 1e-9 if cmd == "verify" else 1e-10
    if cmd == "state":
        payload = {"source": _source_payload(args), "n": args.n}
        if args.amplitude_cap is not None:
            payload["amplitude_cap"] = args.amplitude_cap
        return "/state", payload
    if cmd == "chi":
        return "/chi", {"b": args.b, "tol": args.tol}
    if cmd == "classify":
        return "/classify", {"source": _source_payload(args), "tol": args.tol}
    if cmd == "normality":
        payload = {"source": _source_payload(args), "tol": args.tol}
        if args.l_max is not None:
            payload["l_max"] = args.l_max
        return "/normality", payload
    if cmd == "symmetries":
        return "/symmetries", {"source": _source_payload(args), "n": args.n, "tol": args.tol}
    if cmd == "equivalent":
        return "/equivalent", {
            "b": args.b,
            "c": args.c,
            "n": args.n,
            "witness": bool(args.witness),
            "tol": args.tol,
        }
    if cmd == "transform":
        payload = {
            "source": {"family": args.from_family},
            "target": {"family": args.to_family},
            "n": args.n,
            "verify": args.verify,
            "tol": args.tol,
        }
        if args.from_param is not None:
            payload["source"]["param"] = args.from_param
        if args.to_param is not None:
            payload["target"]["param"] = args.to_param
        return "/transform", payload
    if cmd == "verify":
        with open(args.plan) as fh:
            plan = json.load(fh)
        payload = {"plan": plan, "tol": args.tol}
        if args.n_min is not None:
            payload["n_min"] = args.n_min
        if args.n_max is not None:
            payload["n_max"] = args.n_max
        if args.scalar_mode:
            payload["scalar_mode"] = args.scalar_mode
        return "/verify", payload
    raise SystemExit(f"unknown command {cmd}")


async def _post(server: str | None, path: str, payload: dict):
    if server:
        async with httpx.AsyncClient(base_url=server, timeout=300.0) as client:
            resp = await client.post(path, json=payload)
            return resp.status_code, resp.json()
    from .service import app

    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(transport=transport, base_url="http://timps.local") as client:
        resp = await client.post(path, json=payload)
        return resp.status_code, resp.json()


def _verdict(command: str, body: dict) -> tuple[int, str]:
    """Exit code and one-line summary for a 200 response."""
    if command == "transform":
        if body.get("feasible"):
            extra = "" if body.get("residual") is None else f", residual {body['residual']:.2e}"
            return EXIT_OK, f"feasible{extra}"
        return EXIT_NEGATIVE, f"infeasible: {body.get('reason', '')}"
    if command == "equivalent":
        if body.get("equivalent"):
            extra = (
                ""
                if body.get("witness_residual") is None
                else f" (witness residual {body['witness_residual']:.2e})"
            )
            return EXIT_OK, "equivalent" + extra
        return EXIT_NEGATIVE, "inequivalent"
    if command == "normality":
        if body.get("normal"):
            return EXIT_OK, (
                f"normal: injectivity length {body['injectivity_length']}, chain "
                f"theorems apply for N >= {body['normal_for_sites']}"
            )
        return EXIT_NEGATIVE, f"not normal up to length {body.get('searched_up_to')}"
    if command == "verify":
        if body.get("all_passed"):
            return EXIT_OK, (
                f"{body['passed']}/{body['checked']} checks passed, worst residual "
                f"{body['worst_residual']:.2e}"
            )
        return EXIT_NEGATIVE, f"{body['passed']}/{body['checked']} checks passed"
    if command == "symmetries":
        return EXIT_OK, (
            f"{body['count']} explicit certificates ({body['nontrivial_count']} nontrivial), "
            f"{len(body.get('families', []))} continuous families"
        )
    if command == "classify":
        chi_txt = "" if body.get("chi") is None else f", chi = {body['chi']}"
        return EXIT_OK, f"{body['kind']}{chi_txt}"
    if command == "chi":
        return EXIT_OK, f"chi = {body['chi']}"
    return EXIT_OK, "ok"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run("timps.service:app", host=args.host, port=args.port)
        return EXIT_OK
    try:
        path, payload = _request_payload(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    status, body = asyncio.run(_post(args.server, path, payload))
    if status == 501:
        detail = body.get("detail", body)
        print(f"unsupported: {detail.get('message', detail)}", file=sys.stderr)
        print(json.dumps(detail), end="\n", file=sys.stdout)
        return EXIT_UNSUPPORTED
    if status != 200:
        detail = body.get("detail", body)
        message = detail.get("message", detail) if isinstance(detail, dict) else detail
        print(f"invalid request: {message}", file=sys.stderr)
        print(json.dumps(detail), end="\n", file=sys.stdout)
        return EXIT_INVALID
    code, summary = _verdict(args.command, body)
    text = json.dumps(body, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.command == "equivalent" and args.witness and body.get("witness"):
        with open(args.witness, "w") as fh:
            json.dump(body["witness"], fh, indent=2)
        summary += f"; witness plan written to {args.witness}"
    print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
