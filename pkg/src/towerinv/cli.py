"""Command-line front end.

Verbs: ``field``, ``tower``, ``reconstruct``, ``suite``.  Exit codes: 0 when
every requested check passes, 1 on a failed check, 2 on bad input, 3 on an
internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import jsonschema
import mpmath
from sympy import primerange

from . import errors, reconstruct, towers
from .fields import field_from_json
from .lfunc import log_hr
from .numeric import DEFAULT_PREC, exact_tolerance, fmt, precision
from .splitting import split_prime

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = DEFAULT_PREC
    tolerance: float | None = None  # None: per-check defaults
    prime_bound: int = towers.DEFAULT_PRIME_BOUND
    seed: int = 0
    output_format: str = "json"
    depth: int | None = None

    def __post_init__(self):
        if self.precision_bits < 64:
            raise errors.InputError("precision must be at least 64 bits")
        if self.tolerance is not None and not self.tolerance > 0:
            raise errors.InputError("tolerance must be positive")
        if self.output_format not in ("json", "csv"):
            raise errors.InputError(f"unknown output format {self.output_format!r}")


_CONFIG_KEYS = {
    "precisionBits": "precision_bits",
    "tolerance": "tolerance",
    "primeBound": "prime_bound",
    "seed": "seed",
    "outputFormat": "output_format",
    "depth": "depth",
}


# ---------------------------------------------------------------------------
# input


def _schema():
    return json.loads(resources.files("towerinv").joinpath("schema.json").read_text())


def load_document(path, expected=None):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise errors.InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise errors.ParseError(f"invalid JSON in {path}: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict):
        raise errors.SchemaError("top-level value must be an object")
    if doc.get("schemaVersion") != SCHEMA_VERSION:
        raise errors.SchemaError(f"unknown schemaVersion {doc.get('schemaVersion')!r}; expected {SCHEMA_VERSION}")
    validator = jsonschema.Draft202012Validator(_schema())
    problems = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if problems:
        first = problems[0]
        where = "/".join(str(p) for p in first.absolute_path) or "<root>"
        raise errors.SchemaError(f"{path}: {where}: {first.message}")
    if expected and doc["kind"] not in expected:
        raise errors.SchemaError(f"expected a document of kind {' or '.join(expected)}, got {doc['kind']!r}")
    return doc


def load_config(args):
    cfg = RunConfig()
    env = os.environ.get("TOWERINV_CONFIG")
    if env:
        doc = load_document(env, ("config",))
        cfg = replace(cfg, **{_CONFIG_KEYS[k]: v for k, v in doc.items() if k in _CONFIG_KEYS})
    overrides = {
        "precision_bits": args.precision_bits,
        "tolerance": args.tolerance,
        "prime_bound": args.prime_bound,
        "seed": args.seed,
        "output_format": args.format,
        "depth": args.depth,
    }
    return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})


def _ef(x):
    return None if x is None else (int(x[0]), int(x[1]))


def tower_from_doc(doc, cfg):
    if doc["tower"] == "cyclotomic":
        return towers.cyclotomic_tower(
            int(doc["ell"]),
            int(doc["maxLevel"]),
            base_level=int(doc.get("baseLevel", 0)),
            prime_bound=int(doc.get("primeBound", cfg.prime_bound)),
            cap=int(doc.get("cap", towers.DEFAULT_CAP)),
            prec=cfg.precision_bits,
        )
    base = doc.get("base")
    if base is not None and "modulus" in base:
        base = field_from_json(base)
    rule = doc.get("logHR", {"rule": "rhs"})
    return towers.synthetic_tower(
        [int(x) for x in doc["indices"]],
        doc["primes"],
        base=base,
        archimedean=doc.get("archimedean", "real"),
        log_hr_values=rule.get("values"),
        log_hr_rule=rule.get("rule", "rhs"),
        noise=float(rule.get("noise", 0)),
        seed=int(rule.get("seed", 0)),
        bs_constant=rule.get("c"),
        label=doc.get("label", "synthetic"),
        almost_normal=doc.get("almostNormal", True),
        prec=cfg.precision_bits,
    )


def family_from_doc(doc, cfg):
    norms = tuple(int(n) for n in doc["norms"])
    with precision(cfg.precision_bits):
        if doc["family"] == "limit_exchange":
            return towers.ExchangeFamily(
                mpmath.mpf(doc.get("baseGenus", 0)),
                norms,
                tuple(tuple(_ef(x) for x in row) for row in doc["full"]),
                tuple(tuple(_ef(x) for x in row) for row in doc["fixed"]),
                tuple(_ef(x) for x in doc["fullLimit"]),
                tuple(_ef(x) for x in doc["fixedLimit"]),
            )
        members = tuple(
            (
                int(m["degree"]),
                tuple(_ef(x) for x in m["local"]),
                tuple(_ef(x) for x in m["tower"]),
                tuple(_ef(x) for x in m["absolute"]) if "absolute" in m else None,
            )
            for m in doc["members"]
        )
        return towers.ContinuityFamily(norms, members, tuple(_ef(x) for x in doc["union"]))


# ---------------------------------------------------------------------------
# output


@dataclass
class Report:
    command: str
    passed: bool
    data: dict
    tables: list  # (name, header, rows)
    figures: list  # (suffix, callable(path))


def render(report, fmt_name):
    if fmt_name == "json":
        body = {"command": report.command, "verdict": "PASS" if report.passed else "FAIL", **report.data}
        for name, header, rows in report.tables:
            body[name] = [dict(zip(header, row)) for row in rows]
        return json.dumps(body, indent=2) + "\n"
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["quantity", "value"])
    w.writerow(["command", report.command])
    w.writerow(["verdict", "PASS" if report.passed else "FAIL"])
    for k, v in report.data.items():
        w.writerow([k, v if isinstance(v, str) else json.dumps(v)])
    for name, header, rows in report.tables:
        out.write("\n")
        w.writerow([f"# {name}"])
        w.writerow(header)
        w.writerows(rows)
    return out.getvalue()


def _num(x, digits=30):
    return "" if x is None else fmt(x, digits)


# ---------------------------------------------------------------------------
# commands


def cmd_field(args, cfg):
    doc = load_document(args.document, ("field",))
    K = field_from_json(doc)
    with precision(cfg.precision_bits):
        lhr = log_hr(K, cfg.precision_bits).log_hr
        rows = []
        for p in primerange(2, cfg.prime_bound + 1):
            s = split_prime(K, p)
            rows.append([str(p), str(s.e), str(s.f), str(s.g)])
        data = {
            "label": K.label,
            "degree": str(K.degree),
            "r1": str(K.r1),
            "r2": str(K.r2),
            "absDisc": str(K.abs_disc),
            "genus": _num(K.genus),
            "w": str(K.w),
            "logHR": _num(lhr),
            "ramified": [r[0] for r in rows if r[1] != "1"],
        }
    return Report("field", True, data, [("splitting", ["p", "e", "f", "g"], rows)], [])


def cmd_tower(args, cfg):
    doc = load_document(args.document, ("tower", "family"))
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-9
    with precision(cfg.precision_bits):
        if doc["kind"] == "family":
            fam = family_from_doc(doc, cfg)
            if doc["family"] == "limit_exchange":
                rep = towers.check_limit_exchange(fam, tol)
                header = ["n", "lhs", "beta_full", "beta_fixed"]
                rows = [[str(r["n"]), _num(r["lhs"]), _num(r["beta_full"]), _num(r["beta_fixed"])] for r in rep.rows]
            else:
                rep = towers.check_beta_continuity(fam, tol)
                header = ["j", "degree", "rescaled_beta"]
                rows = [[str(r["j"]), str(r["degree"]), _num(r["rescaled_beta"])] for r in rep.rows]
            data = {"checks": {rep.name: _check_summary(rep)}}
            return Report("tower", rep.passed, data, [("levels", header, rows)], [])

        tower = tower_from_doc(doc, cfg)
        depth = towers.check_depth(tower, cfg.depth)
        names = [n.strip() for n in args.invariants.split(",") if n.strip()]
        estimates = [towers.estimate(tower, name, depth, tol) for name in names]
        header = ["n", "degree", "g_n", "g_rel", "logHR"] + names
        rows = []
        for lv in tower.levels[:depth]:
            row = [str(lv.n), str(lv.index), _num(lv.genus), _num(lv.rel_genus), _num(lv.log_hr)]
            for est in estimates:
                v = est.per_level[est.levels_used.index(lv.n)] if lv.n in est.levels_used else None
                row.append(_num(v))
            rows.append(row)
        checks = args.checks.split(",") if args.checks else (["tvz"] if tower.kind == "cyclotomic" else ["tvz", "rel"])
        verdicts = {}
        passed = True
        figures = []
        for chk in (c.strip() for c in checks if c.strip()):
            if chk == "tvz":
                threshold = cfg.tolerance if cfg.tolerance is not None else 0.5
                rep = towers.check_tvz(tower, depth, threshold)
                figures.append(("tvz", lambda path, rows=rep.rows: _plot("tvz_gap", rows, path)))
            elif chk == "rel":
                rep = towers.check_rel_identities(tower, depth, tol)
            elif chk == "bridge":
                bridge_rows = towers.genus_bridge(tower)[:depth]
                worst = max(max(r["genus_residual"], r.get("mu_residual", 0)) for r in bridge_rows)
                rep = towers.CheckReport("bridge", bool(worst < exact_tolerance(mpmath.mp.prec)), bridge_rows, {"max_residual": worst})
            else:
                raise errors.InputError(f"unknown check {chk!r}")
            verdicts[rep.name] = _check_summary(rep)
            passed = passed and rep.passed
        data = {
            "label": tower.label,
            "depth": depth,
            "estimates": {
                e.name: {
                    "limitEstimate": _num(e.limit_estimate),
                    "cauchyGap": _num(e.cauchy_gap),
                    "converged": e.converged,
                    "monotone": e.monotone,
                }
                for e in estimates
            },
            "checks": verdicts,
        }
        if estimates:
            figures.append(("invariants", lambda path, est=estimates: _plot("invariant_levels", est, path)))
        return Report("tower", passed, data, [("levels", header, rows)], figures)


def _check_summary(rep):
    out = {"verdict": "PASS" if rep.passed else "FAIL"}
    for k, v in rep.gaps.items():
        out[k] = v if isinstance(v, bool) else _num(v)
    if rep.name == "tvz":
        out["gaps"] = [_num(r["gap"]) for r in rep.rows]
    return out


def _plot(name, payload, path):
    from . import plotting

    getattr(plotting, name)(payload, path)


def cmd_reconstruct(args, cfg):
    doc = load_document(args.document, ("ztower", "lattice"))
    if doc["kind"] == "lattice":
        lat = reconstruct.lattice_from_json(doc)
        rows = []
        for H in lat.labels:
            c = reconstruct.criterion1(lat, H)
            rows.append([H, str(c.z), str(c.z_is_zero).lower(), str(c.z_exceeds_one).lower(), "" if c.witness is None else "&".join(c.witness)])
        return Report("reconstruct", True, {"top": lat.top}, [("z", ["subgroup", "z", "zIsZero", "zExceedsOne", "witness"], rows)], [])
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-12
    with precision(cfg.precision_bits):
        values = tuple(mpmath.mpf(v) for v in doc["beta"])
        n = len(values)
        datum = reconstruct.ZTowerDatum(
            tuple(doc.get("levels", [f"U{i}" for i in range(n)])),
            tuple(int(x) for x in doc.get("fU", [1] * n)),
            values,
        )
        b = reconstruct.classify_behavior(datum, tol)
        data = {"hasBehavior": b.has_behavior, "C": _num(b.C)}
        if b.has_behavior:
            m = reconstruct.norm_from_c(b.C, tol)
            data.update({"Np": str(m.norm), "f": str(m.f), "x": _num(m.x)})
        figures = [("beta", lambda path: _plot_beta(values, b.C, path))]
        return Report("reconstruct", True, data, [], figures)


def _plot_beta(values, C, path):
    from . import plotting

    plotting.beta_chain(values, path, C)


def cmd_suite(args, cfg):
    from . import suite

    results = suite.run_suite(cfg.seed, cfg.precision_bits)
    rows = []
    for r in results:
        for k, v in r.measured.items():
            rows.append([str(r.number), r.name, "PASS" if r.passed else "FAIL", k, v])
    data = {
        "seed": cfg.seed,
        "precisionBits": cfg.precision_bits,
        "checks": [
            {"number": r.number, "name": r.name, "verdict": "PASS" if r.passed else "FAIL", "detail": r.detail}
            for r in results
        ],
    }

    def figure(path, results=results):
        from . import plotting

        plotting.suite_summary(results, path)

    return Report(
        "suite", all(r.passed for r in results), data,
        [("measurements", ["check", "name", "verdict", "quantity", "value"], rows)], [("summary", figure)],
    )


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int, help="mantissa width in bits (default 128)")
    common.add_argument("--tolerance", type=float, help="override the check tolerance")
    common.add_argument("--prime-bound", type=int, help="largest rational prime tracked")
    common.add_argument("--depth", type=int, help="number of tower levels to use")
    common.add_argument("--seed", type=int, help="seed for randomised checks")
    common.add_argument("--format", choices=["json", "csv"], help="report format (default json)")
    common.add_argument("--out", help="write the report here; figures go next to it")

    parser = argparse.ArgumentParser(prog="towerinv", description="Asymptotic invariants of number-field towers.")
    sub = parser.add_subparsers(dest="verb", required=True)
    p = sub.add_parser("field", parents=[common], help="invariants and splitting of an abelian field")
    p.add_argument("document", help="JSON input document")
    p = sub.add_parser("tower", parents=[common], help="per-level invariants and identity checks")
    p.add_argument("document", help="JSON input document")
    p.add_argument("--invariants", default="mu,bs", help="comma list, e.g. mu,bs,phi(C),psi(2),beta")
    p.add_argument("--checks", help="comma list from tvz,rel,bridge")
    p = sub.add_parser("reconstruct", parents=[common], help="classify beta data or tabulate a lattice")
    p.add_argument("document", help="JSON input document")
    sub.add_parser("suite", parents=[common], help="run every acceptance check")
    return parser


COMMANDS = {"field": cmd_field, "tower": cmd_tower, "reconstruct": cmd_reconstruct, "suite": cmd_suite}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
        report = COMMANDS[args.verb](args, cfg)
        text = render(report, cfg.output_format)
        if args.out:
            out = Path(args.out)
            out.write_text(text)
            for suffix, draw in report.figures:
                draw(out.with_name(f"{out.stem}_{suffix}.png"))
        else:
            sys.stdout.write(text)
        return 0 if report.passed else 1
    except errors.TowerInvError as exc:
        sys.stderr.write(json.dumps({"error": exc.code, "message": str(exc)}) + "\n")
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001
        sys.stderr.write(json.dumps({"error": "internal", "message": f"{type(exc).__name__}: {exc}"}) + "\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
