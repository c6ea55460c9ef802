"""Command line front end: ``toricsplit <command> [options]``.

Exit codes: 0 for a positive verdict (split / pass), 1 for a negative one,
2 for usage or data errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import oracle, sections, splitting
from .errors import IncompleteFanError, ToricSplitError
from .fan import Fan, builtin, load_fan
from .figure import splitting_polygon_svg
from .polytope import anticanonical_polytope, divisor_polytope

log = logging.getLogger("toricsplit")

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


@dataclass
class RunConfig:
    fan_source: str
    fan: Fan | None
    q: int | None = None
    q_min: int | None = None
    q_max: int | None = None
    bound: int = oracle.DEFAULT_BOUND
    n: int = 2
    as_json: bool = False
    out: Path | None = None
    assume_complete: bool = False
    workers: int = 1


def _fmt_point(nums, q) -> str:
    return "(" + ", ".join(str(Fraction(x, q)) for x in nums) + ")"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is not None:
        cfg.out.write_text(text)
    else:
        sys.stdout.write(text)


def _dump(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _require_q(args) -> int:
    if args.q is None:
        raise ToricSplitError("--q is required")
    if args.q < 2:
        raise ToricSplitError(f"q must be >= 2, got {args.q}")
    return args.q


def _config(args) -> RunConfig:
    if args.builtin is not None:
        source, fan = args.builtin, builtin(args.builtin)
    else:
        source, fan = args.fan, load_fan(args.fan)
    return RunConfig(
        fan_source=source,
        fan=fan,
        q=getattr(args, "q", None),
        q_min=getattr(args, "q_min", None),
        q_max=getattr(args, "q_max", None),
        bound=getattr(args, "bound", oracle.DEFAULT_BOUND),
        n=getattr(args, "n", 2),
        as_json=getattr(args, "json", False),
        out=Path(args.out) if getattr(args, "out", None) else None,
        assume_complete=getattr(args, "assume_complete", False),
        workers=getattr(args, "workers", 1),
    )


def _result_json(result) -> dict:
    if isinstance(result, splitting.SplitCertificate):
        return {"q": result.q, "verdict": "split", "certificate": result.to_json()}
    return {"q": result.q, "verdict": "not-split", "witness": result.to_json()}


def _result_text(result) -> list[str]:
    if isinstance(result, splitting.SplitCertificate):
        lines = [f"q = {result.q}: diagonally split ({len(result.representatives)} classes represented)"]
        for cls, rep in result.representatives:
            lines.append(f"  {cls}  {_fmt_point(rep.numerators, rep.q)}")
        return lines
    return [
        f"q = {result.q}: not diagonally split",
        f"  class {result.cls} has no representative in the interior of F_X (box {result.box.to_json()})",
    ]


def _recheck(cfg: RunConfig, path: str) -> int:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ToricSplitError(f"cannot read {path}: {exc}") from None
    if "certificate" in data:
        data = data["certificate"]
    elif "witness" in data:
        data = data["witness"]
    try:
        if "classes" in data:
            obj, code = splitting.SplitCertificate.from_json(data), EXIT_OK
        else:
            obj, code = splitting.NonSplitWitness.from_json(data), EXIT_NEGATIVE
    except (KeyError, TypeError, IndexError) as exc:
        raise ToricSplitError(f"malformed certificate or witness: {exc}") from None
    if cfg.q is not None and obj.q != cfg.q:
        raise ToricSplitError(f"file is for q={obj.q}, not {cfg.q}")
    problems = obj.problems(cfg.fan)
    kind = "certificate" if code == EXIT_OK else "witness"
    if problems:
        if cfg.as_json:
            _emit(cfg, _dump({"kind": kind, "valid": False, "problems": problems}))
        else:
            _emit(cfg, "".join(f"invalid {kind}: {p}\n" for p in problems))
        return EXIT_ERROR
    if cfg.as_json:
        _emit(cfg, _dump({"kind": kind, "valid": True, **_result_json(obj)}))
    else:
        verdict = "diagonally split" if code == EXIT_OK else "not diagonally split"
        _emit(cfg, f"valid {kind}: q = {obj.q}, {verdict}\n")
    return code


def cmd_check(args) -> int:
    cfg = _config(args)
    if args.recheck:
        if not cfg.fan.is_complete and not cfg.assume_complete:
            raise IncompleteFanError(
                f"fan completeness is {cfg.fan.completeness.value}; pass --assume-complete to override"
            )
        return _recheck(cfg, args.recheck)
    q = _require_q(args)
    result = splitting.is_diagonally_split(cfg.fan, q, assume_complete=cfg.assume_complete, workers=cfg.workers)
    if cfg.as_json:
        _emit(cfg, _dump({"fan": cfg.fan_source, **_result_json(result)}))
    else:
        _emit(cfg, "\n".join([f"fan: {cfg.fan_source}"] + _result_text(result)) + "\n")
    return EXIT_OK if isinstance(result, splitting.SplitCertificate) else EXIT_NEGATIVE


def cmd_scan(args) -> int:
    cfg = _config(args)
    if cfg.q_min is None or cfg.q_max is None:
        raise ToricSplitError("--q-min and --q-max are required")
    results = splitting.split_q_scan(
        cfg.fan, cfg.q_min, cfg.q_max, workers=cfg.workers, assume_complete=cfg.assume_complete
    )
    if cfg.as_json:
        _emit(cfg, _dump({"fan": cfg.fan_source, "results": [_result_json(r) for _, r in results]}))
    else:
        lines = [f"fan: {cfg.fan_source}", f"{'q':>4}  {'verdict':<10}  detail"]
        for q, r in results:
            if isinstance(r, splitting.SplitCertificate):
                lines.append(f"{q:>4}  {'split':<10}  {len(r.representatives)} classes")
            else:
                lines.append(f"{q:>4}  {'not split':<10}  witness class {r.cls}")
        split_at = [q for q, r in results if isinstance(r, splitting.SplitCertificate)]
        lines.append("split at q in {" + ", ".join(map(str, split_at)) + "}")
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    q = _require_q(args)
    if cfg.n < 2:
        raise ToricSplitError(f"--n must be >= 2, got {cfg.n}")
    result = splitting.is_diagonally_split(cfg.fan, q, assume_complete=cfg.assume_complete, workers=cfg.workers)
    if isinstance(result, splitting.NonSplitWitness):
        msg = f"not diagonally split at q={q}: class {result.cls} has no representative in the interior of F_X"
        if cfg.as_json:
            _emit(cfg, _dump({"fan": cfg.fan_source, "q": q, "verdict": "not-split", "witness": result.to_json()}))
        else:
            _emit(cfg, msg + "\n")
        return EXIT_NEGATIVE
    pi_diag = splitting.diagonal_splitting(cfg.fan, q, result)
    reports = [
        oracle.verify_splitting_law(pi_diag, cfg.bound),
        oracle.verify_diagonal_compatibility(cfg.fan, q, pi_diag, cfg.bound),
    ]
    if cfg.n > 2:
        build = splitting.telescoping_splitting if args.construction == "telescoping" else splitting.semidiagonal_splitting
        pi = build(cfg.fan, q, cfg.n, result)
        law = oracle.verify_splitting_law(pi, cfg.bound)
        law.check = f"splitting-law-{cfg.n}"
        reports.append(law)
        for i in range(1, cfg.n):
            reports.append(oracle.verify_semidiagonal_compatibility(cfg.fan, q, cfg.n, i, pi, cfg.bound))
    passed = all(r.passed for r in reports)
    exists = None
    if cfg.n > 2 and not passed:
        exists = oracle.compatible_semidiagonal_splitting_exists(cfg.fan, q, cfg.n)
    if cfg.as_json:
        data = {
            "fan": cfg.fan_source,
            "q": q,
            "n": cfg.n,
            "bound": cfg.bound,
            "verdict": "pass" if passed else "fail",
            "reports": [r.to_json() for r in reports],
        }
        if exists is not None:
            data["compatible_splitting_exists"] = exists
        _emit(cfg, _dump(data))
    else:
        lines = [f"fan: {cfg.fan_source}, q = {q}, n = {cfg.n}, bound = {cfg.bound}"]
        for r in reports:
            lines.append(f"  {r.check:<16} {r.verdict}  ({r.elements_checked} elements)")
            if r.counterexample is not None:
                lines.append("    counterexample: " + json.dumps(r.counterexample))
        if exists is not None:
            lines.append(
                f"  a splitting of X^{cfg.n} compatible with every semidiagonal "
                + ("exists" if exists else "does not exist")
                + f" at q={q} (exact linear-algebra check)"
            )
        lines.append("verdict: " + ("pass" if passed else "fail"))
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK if passed else EXIT_NEGATIVE


def cmd_plot(args) -> int:
    cfg = _config(args)
    q = _require_q(args)
    _emit(cfg, splitting_polygon_svg(cfg.fan, q))
    return EXIT_OK


def cmd_basis(args) -> int:
    cfg = _config(args)
    q = _require_q(args)
    pts = splitting.splitting_basis(cfg.fan, q)
    if cfg.as_json:
        _emit(cfg, _dump({"fan": cfg.fan_source, "q": q, "count": len(pts), "points": [list(p.numerators) for p in pts], "den": q}))
    else:
        lines = [f"{len(pts)} basis points for q = {q}"] + [_fmt_point(p.numerators, q) for p in pts]
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def _parse_divisor(text: str | None):
    if text is None:
        return None
    try:
        return [Fraction(x) for x in text.split(",")]
    except ValueError:
        raise ToricSplitError(f"bad divisor coefficients {text!r}") from None


def _random_polygon(rng: random.Random) -> list[tuple[int, int]]:
    k = rng.randint(3, 7)
    return [(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(k)]


def cmd_normality(args) -> int:
    if args.random:
        cfg = RunConfig("random", None, as_json=args.json, out=Path(args.out) if args.out else None)
        rng = random.Random(args.seed)
        reports = []
        for _ in range(args.random):
            pts = _random_polygon(rng)
            reports.append((pts, sections.normality_check(sections.polygon_from_points(pts), args.kmax)))
        passed = all(r.passed for _, r in reports)
        if cfg.as_json:
            _emit(cfg, _dump({"seed": args.seed, "reports": [{"points": [list(p) for p in pts], **r.to_json()} for pts, r in reports]}))
        else:
            lines = [f"{r.verdict}  {pts}" for pts, r in reports]
            _emit(cfg, "\n".join(lines) + "\n")
        return EXIT_OK if passed else EXIT_NEGATIVE
    if args.fan is None and args.builtin is None:
        raise ToricSplitError("one of --fan or --builtin is required")
    cfg = _config(args)
    d = _parse_divisor(args.d)
    poly = anticanonical_polytope(cfg.fan) if d is None else divisor_polytope(cfg.fan, d)
    report = sections.normality_check(poly, args.kmax)
    if cfg.as_json:
        _emit(cfg, _dump({"fan": cfg.fan_source, **report.to_json()}))
    else:
        line = f"normality up to k = {args.kmax}: {report.verdict}"
        if not report.passed:
            line += f"; {list(report.counterexample)} in {report.k}P is not a sum of {report.k} lattice points"
        _emit(cfg, line + "\n")
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toricsplit", description="Diagonal splittings of toric varieties.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, q=True, fan_required=True):
        src = p.add_mutually_exclusive_group(required=fan_required)
        src.add_argument("--fan", help="fan JSON file")
        src.add_argument("--builtin", help="pn:<n>, hirzebruch:<a> or product:<spec>x<spec>")
        if q:
            p.add_argument("--q", type=int)
        p.add_argument("--json", action="store_true", help="JSON output")
        p.add_argument("--out", help="write output to this file")
        p.add_argument("--assume-complete", action="store_true", help="trust that the fan is complete")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("check", help="decide diagonal splitting at one q")
    common(p)
    p.add_argument("--recheck", metavar="JSON", help="re-validate a certificate or witness file instead of searching")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("scan", help="decide diagonal splitting over a range of q")
    common(p, q=False)
    p.add_argument("--q-min", type=int, required=True)
    p.add_argument("--q-max", type=int, required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="run the brute-force oracles on the explicit splittings")
    common(p)
    p.add_argument("--bound", type=int, default=oracle.DEFAULT_BOUND)
    p.add_argument("--n", type=int, default=2, help="number of factors for the semidiagonal check")
    p.add_argument(
        "--construction",
        choices=["adjacent", "telescoping"],
        default="adjacent",
        help="splitting of X^n to test when n > 2",
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="SVG of F_X with representatives (2D only)")
    common(p)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("basis", help="list the a with pi_a regular")
    common(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("normality", help="degree-one generation check for a divisor polytope")
    common(p, q=False, fan_required=False)
    p.add_argument("--d", help="divisor coefficients, comma separated, in ray order (default: anticanonical)")
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--random", type=int, default=0, metavar="N", help="instead check N random lattice polygons")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_normality)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.func(args)
    except ToricSplitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
