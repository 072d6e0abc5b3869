"""Command line front end.

    capvertex hpoly  --l 2 --lambda 2 [--basis p|schur|vecschur]
    capvertex norm   --l 2 --lambda 2,2
    capvertex vertex --l 1 --lambda 1 [--w 1/3 | --z 1,2] [--geometric]
    capvertex eval   --l 2 --lambda 4 --m 1
    capvertex verify --check cauchy --l 2 --degree 2
    capvertex batch  manifest.txt [--jobs 4]

Exit codes: 0 success or pass, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import io
import json
import shlex
import sys
from concurrent.futures import ProcessPoolExecutor

from .exactalg import ONE, ExactAlgError, apply_geometric_relation, field_subst, parse_field
from .partitions import EMPTY, PartitionError, core, is_core, parse_partition
from .report import Report

CHECKS = ("cauchy", "orthogonality", "classical", "abrr", "derivation", "eval-all", "axioms", "vertex", "fail")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _partition(text: str):
    try:
        return parse_partition(text)
    except PartitionError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {v}")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="capvertex", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", parser_class=_Parser)

    def common(sp, need_lambda=True):
        sp.add_argument("--l", type=_positive, required=True)
        if need_lambda:
            sp.add_argument("--lambda", dest="lam", type=_partition, required=True)
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--geometric", action="store_true", help="apply h^2 = t1*t2 to the output")

    sp = sub.add_parser("hpoly", help="solve for the wreath Macdonald polynomial H_lambda")
    common(sp)
    sp.add_argument("--basis", choices=("p", "schur", "vecschur"), default="p")
    sp.add_argument("--rotation", type=int, default=0, help="cyclic relabeling of quotient components")

    sp = sub.add_parser("norm", help="the norm N_lambda")
    common(sp)

    sp = sub.add_parser("vertex", help="capped vertex value for tau_0")
    common(sp)
    sp.add_argument("--route", choices=("pairing", "specialization", "both"), default="both")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--w", help="value bound to w = z0*...*z(l-1)")
    g.add_argument("--z", help="comma separated z0,...,z(l-1); their product is bound to w")

    sp = sub.add_parser("eval", help="evaluation formula, both sides")
    common(sp)
    sp.add_argument("--m", type=_nonneg, default=0)

    sp = sub.add_parser("verify", help="run an identity check")
    sp.add_argument("--check", choices=CHECKS, required=True)
    sp.add_argument("--l", type=_positive, required=True)
    sp.add_argument("--degree", type=_nonneg, default=2)
    sp.add_argument("--m", type=_nonneg, default=None)
    sp.add_argument("--core", type=_partition, default=EMPTY)
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.add_argument("--timing", action="store_true", help="include wall time in the report")

    sp = sub.add_parser("batch", help="run a manifest of commands, one per line")
    sp.add_argument("manifest")
    sp.add_argument("--jobs", type=_positive, default=1)
    sp.add_argument("--format", choices=("json", "text"), default="json")
    return p


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)


def _finish(value, args):
    return apply_geometric_relation(value) if args.geometric else value


# ------------------------------------------------------------------ verbs


def cmd_hpoly(args, out) -> int:
    from .wreath import wreath_macdonald

    if not 0 <= args.rotation < args.l:
        raise UsageError(f"--rotation must lie in [0, {args.l})")
    rec = wreath_macdonald(args.lam, args.l, args.rotation)
    data = rec.to_json(args.basis)
    if args.geometric:
        data["norm"] = str(_finish(rec.norm, args))
    if args.format == "json":
        out.write(_dump(data) + "\n")
        return 0
    out.write(f"H[{rec.lam}] l={rec.l} core={rec.core} degree={rec.d}\n")
    out.write(f"norm = {data['norm']}\n")
    h = data["H"]
    for t in h["terms"]:
        key = t.get("monomial", t.get("index"))
        if isinstance(key, list) and key and isinstance(key[0], list):
            key = "*".join(f"p{c}_{d}" for _, c, d in key) or "1"
        elif isinstance(key, list):
            key = "s[" + ";".join(key) + "]"
        else:
            key = f"vs[{key}]"
        out.write(f"{key}: {t['coeff']}\n")
    return 0


def cmd_norm(args, out) -> int:
    from .wreath import norm

    val = _finish(norm(args.lam, args.l), args)
    if args.format == "json":
        out.write(_dump({"lambda": str(args.lam), "l": args.l, "norm": str(val)}) + "\n")
    else:
        out.write(f"{val}\n")
    return 0


def _w_binding(args, l):
    if args.w is not None:
        return parse_field(args.w)
    if args.z is not None:
        zs = [parse_field(z) for z in args.z.split(",")]
        if len(zs) != l:
            raise UsageError(f"--z needs {l} values, got {len(zs)}")
        acc = ONE
        for z in zs:
            acc = acc * z
        return acc
    return None


def cmd_vertex(args, out) -> int:
    from .vertex import VertexError, capped_vertex

    if core(args.lam, args.l):
        raise UsageError(f"{args.lam} has nonempty {args.l}-core; the capped vertex formula needs core 0")
    w = _w_binding(args, args.l)
    try:
        res = capped_vertex(args.lam, args.l, args.route)
    except VertexError as exc:
        raise UsageError(str(exc)) from None
    value = res.value
    if w is not None:
        value = field_subst(value, {"w": w})
    value = _finish(value, args)
    data = res.to_json()
    data["value"] = str(value)
    data["classical"] = str(_finish(res.classical, args))
    if args.format == "json":
        out.write(_dump(data) + "\n")
    else:
        out.write(f"{value}\n")
    return 0 if res.routes_agree is not False else 1


def cmd_eval(args, out) -> int:
    from .wreath import evaluate_H

    if args.m >= args.l:
        raise UsageError(f"--m must lie in [0, {args.l})")
    if core(args.lam, args.l):
        raise UsageError(f"{args.lam} has nonempty {args.l}-core")
    lhs, rhs = evaluate_H(args.lam, args.l, args.m)
    ok = lhs == rhs
    lhs, rhs = _finish(lhs, args), _finish(rhs, args)
    if args.format == "json":
        out.write(_dump({"lambda": str(args.lam), "l": args.l, "m": args.m,
                         "lhs": str(lhs), "rhs": str(rhs), "equal": ok}) + "\n")
    else:
        out.write(f"{lhs}\n{rhs}\n")
    return 0 if ok else 1


def _merge_reports(name: str, params: dict, reports: list) -> Report:
    failures = [dict(sub=r.params, **f) for r in reports for f in r.failures]
    return Report.build(name, params, failures, sum(r.wall_time for r in reports))


def run_check(check: str, l: int, D: int, m: int | None = None, kappa=EMPTY) -> Report:
    from . import vertex, wreath

    if check == "cauchy":
        if not is_core(kappa, l):
            raise UsageError(f"--core {kappa} is not a {l}-core")
        return wreath.verify_cauchy(l, D, kappa)
    if check == "orthogonality":
        reps = [wreath.verify_orthogonality(l, l * d) for d in range(D + 1)]
        return _merge_reports("orthogonality", {"l": l, "degree": D}, reps)
    if check == "classical":
        ms = range(l) if m is None else [m]
        if m is not None and m >= l:
            raise UsageError(f"--m must lie in [0, {l})")
        reps = [wreath.classical_generating_check(l, k, D) for k in ms]
        return _merge_reports("classical", {"l": l, "degree": D, "m": m}, reps)
    if check == "abrr":
        return vertex.verify_abrr(l, D)
    if check == "derivation":
        return vertex.verify_derivation(l, D)
    if check == "eval-all":
        rep = wreath.verify_evaluation(l, l * D)
        return Report.build("eval-all", {"l": l, "degree": D}, rep.failures, rep.wall_time)
    if check == "axioms":
        rep = wreath.verify_axioms(l, l * D)
        return Report.build("axioms", {"l": l, "degree": D}, rep.failures, rep.wall_time)
    if check == "vertex":
        rep = vertex.verify_vertex(l, [l * d for d in range(1, D + 1)])
        return Report.build("vertex", {"l": l, "degree": D}, rep.failures, rep.wall_time)
    if check == "fail":
        # negative control for batch plumbing: always fails
        return Report.build("fail", {"l": l}, [{"error": "synthetic failure"}])
    raise UsageError(f"unknown check {check!r}")


def _write_report(rep: Report, fmt: str, out, timing: bool = False) -> None:
    if fmt == "json":
        out.write(_dump(rep.to_json(timing)) + "\n")
        return
    params = " ".join(f"{k}={v}" for k, v in rep.params.items())
    out.write(f"{rep.status.upper()} {rep.check} {params}\n")
    for f in rep.failures:
        out.write("  " + _dump(f) + "\n")


def cmd_verify(args, out, err) -> int:
    rep = run_check(args.check, args.l, args.degree, args.m, args.core)
    _write_report(rep, args.format, out, args.timing)
    err.write(f"{rep.check}: {rep.status} in {rep.wall_time:.2f}s\n")
    return 0 if rep.passed else 1


def _run_line(line: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = run(shlex.split(line), out, err)
    return code, out.getvalue(), err.getvalue()


def read_manifest(path: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read manifest {path}: {exc}") from None
    entries = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("capvertex "):
            line = line[len("capvertex "):]
        if line.split()[0] == "batch":
            raise UsageError("nested batch entries are not allowed")
        entries.append(line)
    return entries


def cmd_batch(args, out, err) -> int:
    entries = read_manifest(args.manifest)
    if args.jobs > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_line, entries))
    else:
        results = [_run_line(e) for e in entries]
    rows = []
    failures = []
    for line, (code, stdout, stderr) in zip(entries, results):
        status = "pass" if code == 0 else ("usage-error" if code == 2 else "fail")
        row = {"command": line, "status": status, "exit_code": code}
        try:
            payload = json.loads(stdout.splitlines()[0]) if stdout.strip() else None
        except ValueError:
            payload = None
        if isinstance(payload, dict) and "failures" in payload:
            row["failures"] = payload["failures"]
        if code != 0:
            entry = {"command": line, "exit_code": code}
            if code == 2:
                entry["error"] = stderr.strip()
            failures.append(entry)
        rows.append(row)
    rep = Report.build("batch", {"manifest": args.manifest, "entries": len(entries)}, failures)
    if args.format == "json":
        data = rep.to_json()
        data["results"] = rows
        out.write(_dump(data) + "\n")
    else:
        for row in rows:
            out.write(f"{row['status'].upper()} {row['command']}\n")
        out.write(f"{rep.status.upper()} batch {len(rows)} entries, {len(failures)} failing\n")
    return 0 if rep.passed else 1


def run(argv, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        if args.verb is None:
            raise UsageError("missing command; try --help")
        if args.verb == "hpoly":
            return cmd_hpoly(args, out)
        if args.verb == "norm":
            return cmd_norm(args, out)
        if args.verb == "vertex":
            return cmd_vertex(args, out)
        if args.verb == "eval":
            return cmd_eval(args, out)
        if args.verb == "verify":
            return cmd_verify(args, out, err)
        if args.verb == "batch":
            return cmd_batch(args, out, err)
        raise UsageError(f"unknown command {args.verb!r}")
    except (UsageError, ExactAlgError, PartitionError) as exc:
        err.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
