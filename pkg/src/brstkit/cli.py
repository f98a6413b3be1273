"""Command line driver: validate, flatness, brst, oracle, predict, verify.

Exit codes: 0 success, 1 verification mismatch, 2 validation failure,
3 parse or config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import brst as B
from . import derham as D
from . import models as M
from .config import ParseError, RunConfig, load_config, parse_weights_flag
from .exact import format_fraction
from .liealg import jacobi_check, validate_character

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_PARSE = 0, 1, 2, 3


class ValidationFailure(Exception):
    def __init__(self, checks: list):
        self.checks = checks
        failed = [c["name"] for c in checks if c["status"] == "fail"]
        super().__init__("failed checks: " + ", ".join(failed))


# ------------------------------------------------------------ setup


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_fraction(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


def _check(name: str, result, detail=None) -> dict:
    ok = result.ok if isinstance(result, M.CheckResult) else bool(result)
    entry = {"name": name, "status": "pass" if ok else "fail"}
    witness = getattr(result, "witness", None)
    if not ok and witness is not None:
        entry["witness"] = _jsonable(witness)
    if detail is not None:
        entry["detail"] = _jsonable(detail)
    elif not ok and getattr(result, "detail", ""):
        entry["detail"] = result.detail
    return entry


def _assumed(name: str) -> dict:
    return {"name": name, "status": "assumed"}


def _need(params: dict, key: str):
    if key not in params:
        raise ParseError(f"[setup] is missing '{key}' for kind {params['kind']}")
    return params[key]


def build_setup(cfg: RunConfig):
    """Construct the reduction setup and run every machine-checkable validation."""
    p = cfg.setup
    kind = p["kind"]
    checks: list = []
    setup = None
    try:
        if kind == "hypertoric":
            h = M.HypertoricData(_need(p, "M"), _need(p, "theta"), _need(p, "c"))
            if len(h.theta) != h.d:
                raise ParseError(f"theta needs {h.d} entries")
            chk = M.check_unimodular(h.M)
            checks.append(_check("unimodular", chk))
            checks.append(_check("smoothness", M.check_hypertoric_smoothness(h)))
            if chk.ok:
                setup = M.build_hypertoric_setup(h)
            checks += [_assumed("free action on the stable locus"), _assumed("normality")]
        elif kind == "preprojective":
            Q = M.affine_quiver(str(_need(p, "dynkin")))
            delta = M.minimal_imaginary_root(Q)
            checks.append(_check("affine", M.CheckResult(M.p_of_v(Q, delta) == 1), {"delta": list(delta)}))
            theta = p.get("theta") or M.default_theta_preprojective(Q, delta)
            checks.append(_check("stability", M.check_stability_preprojective(Q, delta, theta)))
            c = p.get("c")
            if c is not None:
                checks.append(_check("c_dot_delta_zero", M.CheckResult(M._dot(c, delta) == 0)))
            if all(ch["status"] != "fail" for ch in checks):
                setup = M.build_preprojective_setup(Q, theta, c, p.get("extended_vertex", 0))
            checks += [_assumed("free action on the stable locus"), _assumed("normality")]
        elif kind == "calogero-moser":
            base = M.affine_quiver(str(_need(p, "base")))
            n = int(_need(p, "n"))
            theta = p.get("theta") or M.default_theta_cm(base)
            checks.append(_check("stability", M.check_stability_cm(base, n, theta)))
            if checks[-1]["status"] == "pass":
                setup = M.build_cm_setup(base, n, theta, p.get("c"))
            checks += [_assumed("free action on the stable locus"), _assumed("normality")]
        else:
            Q = M.Quiver(tuple(_need(p, "vertices")), tuple(tuple(a) for a in _need(p, "arrows")))
            setup = M.build_quiver_setup(
                Q, _need(p, "dimension"), _need(p, "theta"), _need(p, "c"), _need(p, "distinguished"))
            checks.append(_assumed("stability of theta"))
    except (M.StabilityViolation, M.ZeroDimensionVector, M.NotAffine, M.NotUnimodular,
            M.RankDeficient, M.QuiverError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        checks.append({"name": "construction", "status": "fail", "detail": str(exc)})
        setup = None
    if setup is not None:
        if setup.g_dim <= 32:
            ok, triple = jacobi_check(setup.lie)
            checks.append(_check("jacobi", M.CheckResult(ok, triple)))
        checks.append(_check("character", M.CheckResult(validate_character(setup.lie, setup.character))))
        checks.append(_check("symbol_identity", M.check_symbol_identity(setup)))
        checks.append(_check("moment_homomorphism", M.check_moment_homomorphism(setup)))
        if "flatness_dimension_target" in setup.metadata:
            checks.append({"name": "flatness_dimension_target", "status": "info",
                           "detail": setup.metadata["flatness_dimension_target"]})
    return setup, checks


def setup_echo(cfg: RunConfig, setup) -> dict:
    echo = {k: _jsonable(v) for k, v in sorted(cfg.setup.items())}
    if setup is not None:
        echo["n_vars"] = setup.n_vars
        echo["g_dim"] = setup.g_dim
        echo["group"] = "torus" if setup.is_torus else "gl-blocks"
        echo["character"] = _jsonable(list(setup.character.values))
        echo["theta"] = _jsonable(list(setup.theta))
    return echo


# --------------------------------------------------------- sectors


def _sector(args):
    setup, weight, N, with_oracle = args
    report = B.brst_cohomology(B.TruncationSpec(setup, weight, N))
    oracle = B.lc_oracle(setup, weight, N) if with_oracle else None
    return report, oracle


def _run_sectors(setup, weights, N, jobs, with_oracle=True):
    tasks = [(setup, w, N, with_oracle) for w in weights]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sector, tasks))
    return [_sector(t) for t in tasks]


def _weights(cfg: RunConfig, setup, N: int):
    if cfg.weights == "auto":
        return B.scan_weights(setup, N)
    for w in cfg.weights:
        if len(w) != setup.weight_rank:
            raise ParseError(f"weight {w} needs {setup.weight_rank} entries")
    return sorted(cfg.weights)


def _cell_row(source, c) -> dict:
    return {"source": source, "weight": list(c.weight), "ghost_degree": c.ghost_degree,
            "bound": c.bound, "dim": c.dim, "stable": c.stable}


def _predicted(setup) -> dict:
    P = D.predicted_for_setup(setup)
    blocks = D.setup_block_sizes(setup)
    rank = setup.lie.rank()
    # A and D type preprojective groups only have GL_1 and GL_2 blocks
    closed = setup.is_torus or (setup.kind == "preprojective" and max(blocks, default=1) <= 2)
    label = "closed form" if closed else "derived by the blockwise rule"
    return {
        "poincare": P.as_list(),
        "factored": D.factored_form(blocks),
        "rank": rank,
        "value_at_1": P.evaluate(1),
        "matches_2_to_rank": P.evaluate(1) == 2**rank,
        "palindromic": P.is_palindromic(),
        "label": label,
    }


def _identity_checks(setup, samples: int = 50) -> list:
    return [
        {"name": f"identity:{r.name}", "status": "pass" if r.ok else "fail",
         "samples": r.samples, **({"witness": r.witness} if not r.ok else {})}
        for r in B.check_exact_identities(setup, samples)
    ]


# --------------------------------------------------------- commands


def cmd_validate(cfg, setup, checks, args) -> tuple[dict, int]:
    ok = setup is not None and all(c["status"] != "fail" for c in checks)
    return _report(cfg, setup, checks, [], None, "pass" if ok else "fail"), EXIT_OK if ok else EXIT_INVALID


def cmd_flatness(cfg, setup, checks, args):
    cert = B.koszul_flatness_certificate(setup, cfg.max_degree)
    checks = checks + [{
        "name": "koszul_flatness",
        "status": "pass" if cert.ok else "fail",
        "detail": {
            "hilbert": cert.hilbert,
            "expected": cert.expected,
            "first_failing_degree": cert.first_failing_degree,
            "generator_degrees": cert.generator_degrees,
            "expected_dimension": cert.expected_dimension,
            "dimension_target": cert.dimension_target,
        },
    }]
    return _report(cfg, setup, checks, [], None, "pass" if cert.ok else "fail"), EXIT_OK if cert.ok else EXIT_MISMATCH


def cmd_brst(cfg, setup, checks, args):
    notices = []
    tables = []
    if not setup.is_torus:
        checks = checks + _identity_checks(setup)
        notices.append("cohomology tables are computed for torus groups only; ran exact identities")
    else:
        weights = _weights(cfg, setup, cfg.max_degree)
        for report, _ in _run_sectors(setup, weights, cfg.max_degree, cfg.jobs, with_oracle=False):
            tables += [_cell_row("brst", c) for c in report.cells]
        if args.dump_matrices:
            _dump(setup, weights, cfg.max_degree, args.dump_matrices)
    ok = all(c["status"] != "fail" for c in checks)
    return _report(cfg, setup, checks, tables, None, "pass" if ok else "fail", notices), EXIT_OK


def _dump(setup, weights, N, directory):
    import os

    os.makedirs(directory, exist_ok=True)
    for w in weights:
        spec = B.TruncationSpec(setup, w, N)
        tag = "_".join(str(x) for x in w)
        for n in spec.ghost_range:
            B.dump_differential(spec, n, os.path.join(directory, f"d_w{tag}_n{n}_N{N}.txt"))


def cmd_oracle(cfg, setup, checks, args):
    if not setup.is_torus:
        raise B.NonabelianInvariants("the invariant oracle needs a torus group")
    tables = []
    for w in _weights(cfg, setup, cfg.max_degree):
        t = B.lc_oracle(setup, w, cfg.max_degree)
        for k, (d, s) in enumerate(zip(t.dims, t.stable)):
            tables.append({"source": "oracle", "weight": list(w), "ghost_degree": 0,
                           "bound": k, "dim": d, "stable": s})
    return _report(cfg, setup, checks, tables, None, "pass"), EXIT_OK


def cmd_predict(cfg, setup, checks, args):
    return _report(cfg, setup, checks, [], _predicted(setup), "pass"), EXIT_OK


def cmd_verify(cfg, setup, checks, args):
    checks = checks + _identity_checks(setup)
    predicted = _predicted(setup)
    notices, tables, mismatches = [], [], []
    N = cfg.max_degree
    if not setup.is_torus:
        notices.append("nonabelian group: verify runs exact identities, flatness and predictions only")
        cert = B.koszul_flatness_certificate(setup, min(N, 4))
        checks.append({"name": "koszul_flatness", "status": "pass" if cert.ok else "fail",
                       "detail": {"hilbert": cert.hilbert, "expected": cert.expected}})
    else:
        P = D.predicted_for_setup(setup)
        scored = 0
        for report, oracle in _run_sectors(setup, _weights(cfg, setup, N), N, cfg.jobs):
            zero = not any(report.weight)
            for c in report.cells:
                tables.append(_cell_row("brst", c))
                if not (c.stable and oracle.stable[c.bound]):
                    continue
                expected = P[c.ghost_degree] * oracle.dims[c.bound] if zero and c.ghost_degree >= 0 else 0
                scored += 1
                if c.dim != expected:
                    mismatches.append({"weight": list(c.weight), "ghost_degree": c.ghost_degree,
                                       "bound": c.bound, "N": N, "got": c.dim, "expected": expected})
            for k, (d, s) in enumerate(zip(oracle.dims, oracle.stable)):
                tables.append({"source": "oracle", "weight": list(oracle.weight), "ghost_degree": 0,
                               "bound": k, "dim": d, "stable": s})
        notices.append(f"scored {scored} stable cells")
    failed = any(c["status"] == "fail" for c in checks) or bool(mismatches)
    rep = _report(cfg, setup, checks, tables, predicted, "fail" if failed else "pass", notices, mismatches)
    return rep, EXIT_MISMATCH if failed else EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "flatness": cmd_flatness,
    "brst": cmd_brst,
    "oracle": cmd_oracle,
    "predict": cmd_predict,
    "verify": cmd_verify,
}


def _report(cfg, setup, checks, tables, predicted, status, notices=(), mismatches=()):
    return {
        "setup_echo": setup_echo(cfg, setup),
        "checks": checks,
        "tables": tables,
        "predicted": predicted,
        "verdict": {"status": status, "max_degree": cfg.max_degree,
                    "notices": list(notices), "mismatches": list(mismatches)},
    }


# ---------------------------------------------------------- output


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def render_text(report: dict, command: str) -> str:
    lines = [f"command: {command}", "setup:"]
    for k, v in sorted(report["setup_echo"].items()):
        lines.append(f"  {k} = {json.dumps(v)}")
    lines.append("checks:")
    for c in report["checks"]:
        extra = "".join(f" {k}={json.dumps(c[k], sort_keys=True)}" for k in sorted(c) if k not in ("name", "status"))
        lines.append(f"  [{c['status']}] {c['name']}{extra}")
    if report["tables"]:
        lines.append("tables: source weight ghost_degree bound dim stable")
        for r in report["tables"]:
            w = ",".join(str(x) for x in r["weight"])
            lines.append(f"  {r['source']} ({w}) {r['ghost_degree']} {r['bound']} {r['dim']} {'yes' if r['stable'] else 'no'}")
    if report["predicted"] is not None:
        p = report["predicted"]
        lines.append(f"predicted: {p['poincare']} = {p['factored']} ({p['label']}); "
                     f"value at 1 = {p['value_at_1']}, rank = {p['rank']}, palindromic = {p['palindromic']}")
    v = report["verdict"]
    for note in v["notices"]:
        lines.append(f"note: {note}")
    for m in v["mismatches"]:
        lines.append(f"mismatch: weight={m['weight']} n={m['ghost_degree']} bound={m['bound']} "
                     f"N={m['N']} got={m['got']} expected={m['expected']}")
    lines.append(f"verdict: {v['status']}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="brstkit", description="Truncated BRST reduction computations.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, metavar="PATH")
        sp.add_argument("--max-degree", type=int, metavar="N")
        sp.add_argument("--weights", metavar="LIST|auto")
        sp.add_argument("--output", choices=("text", "json"))
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--jobs", type=int, metavar="K")
        if name == "brst":
            sp.add_argument("--dump-matrices", metavar="DIR")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not hasattr(args, "dump_matrices"):
        args.dump_matrices = None
    try:
        cfg = load_config(args.config)
        if args.max_degree is not None:
            cfg.max_degree = args.max_degree
        if args.weights is not None:
            cfg.weights = parse_weights_flag(args.weights)
        if args.output is not None:
            cfg.output_format = args.output
        if args.out is not None:
            cfg.output_path = args.out
        if args.jobs is not None:
            cfg.jobs = args.jobs
        if cfg.max_degree < 0 or cfg.max_degree % 2:
            raise ParseError("max_degree must be even and nonnegative")
        if cfg.jobs < 1:
            raise ParseError("jobs must be positive")
        setup, checks = build_setup(cfg)
        if args.command == "validate" or setup is None or any(c["status"] == "fail" for c in checks):
            report, code = cmd_validate(cfg, setup, checks, args)
            if args.command != "validate" and code == EXIT_OK:  # pragma: no cover
                code = EXIT_INVALID
        else:
            report, code = COMMANDS[args.command](cfg, setup, checks, args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except B.NonabelianInvariants as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = render_json(report) if cfg.output_format == "json" else render_text(report, args.command)
    if cfg.output_path and cfg.output_path != "-":
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
