"""Command-line interface and pipeline orchestration.

Commands:
  analyze   full pipeline: polyhedron -> fan -> KN -> non-degeneracy ->
            exponents -> numeric audits, plus a JSON report
  exponents same pipeline without the audits
  fan       dump the normal fan and its unimodular refinement
  nondegen  per-face non-degeneracy verdicts only
  verify    audits only, with user-supplied exponents

Exit codes: 0 success; 2 a hypothesis gate failed (KN or non-degeneracy;
the report is still written); 3 input error; 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import audit as audit_mod
from . import report as report_mod
from .audit import SamplePlan, _default_radii
from .errors import CapExceededError, InputError, LojexError
from .exponents import (
    ExponentReport,
    Hypotheses,
    alpha_exponent,
    check_kn,
    combined_case,
    convenience,
    convex_shape,
    dist_exponent,
    theta,
    transversals,
)
from .fan import Fan, fan_exponents, normal_fan, simplicialize, unimodularize
from .nondegeneracy import check_model
from .parser import model_to_text, parse_germ
from .polyhedron import build_polyhedron, hat_polyhedron
from .taylor import TaylorModel, poly_eval_many, support


@dataclass
class AnalysisOptions:
    declare_nonnegative: bool = False
    declare_convex: bool = False
    seed: int = 0
    tol: float = 1e-10
    starts: int = 64
    samples: int = 256
    radius: float = 0.1
    force: bool = False
    max_dim: int | None = None


@dataclass
class AnalysisOutcome:
    document: dict
    exit_code: int
    report: ExponentReport | None = None
    audits: list = field(default_factory=list)


def _sampled_negative(model: TaylorModel, seed: int, radius: float) -> tuple[float, ...] | None:
    """Look for a sign witness against a declared-nonnegative germ."""
    rng = np.random.default_rng(seed ^ 0x5EED)
    pts = rng.uniform(-radius, radius, size=(10_000, model.n))
    vals = poly_eval_many(model.poly(), pts)
    worst = int(np.argmin(vals))
    if vals[worst] < -1e-12:
        return tuple(float(x) for x in pts[worst])
    return None


def _provably_nonnegative(model: TaylorModel) -> bool:
    """Positive combinations of even monomials are non-negative outright.

    Remainder factors have unknown sign, so their presence blocks the
    certificate.
    """
    if model.remainders:
        return False
    return all(
        t.coeff > 0 and all(e % 2 == 0 for e in t.exp) for t in model.terms
    )


def _build_fans(poly) -> tuple[Fan, Fan]:
    sigma0 = normal_fan(poly)
    return sigma0, unimodularize(simplicialize(sigma0))


def analyze_germ(
    model: TaylorModel, opts: AnalysisOptions, with_audits: bool = True
) -> AnalysisOutcome:
    if opts.max_dim is not None and model.n > opts.max_dim:
        raise CapExceededError(
            f"dimension {model.n} exceeds --max-dim {opts.max_dim}"
        )
    flags: list[str] = []
    supp = support(model)
    poly = build_polyhedron(supp)
    hat = hat_polyhedron(poly)

    kn = check_kn(model, poly)
    verdicts, nondeg_ok = check_model(
        model, poly, tol=opts.tol, starts=opts.starts, seed=opts.seed
    )
    if nondeg_ok:
        overall = "nondegenerate"
    elif any(v.status == "degenerate" for v in verdicts.values()):
        overall = "degenerate"
    else:
        overall = "inconclusive"

    fan_pair: tuple[Fan, Fan] | None = None
    fanexp = None
    try:
        fan_pair = _build_fans(poly)
        fanexp = fan_exponents(fan_pair[1], poly)
    except CapExceededError as exc:
        flags.append(f"fan-unavailable: {exc}")

    nonnegative = opts.declare_nonnegative or opts.declare_convex
    if nonnegative:
        witness = _sampled_negative(model, opts.seed, opts.radius)
        if witness is not None:
            nonnegative = False
            flags.append(
                "declared-nonnegative-violated: sampled f < 0 at "
                + "(" + ", ".join(f"{x:.4g}" for x in witness) + ")"
            )
    elif _provably_nonnegative(model):
        nonnegative = True
        flags.append("nonnegative-auto-certified: positive combination of even monomials")
    shape_ok = convex_shape(poly)
    if opts.declare_convex and not shape_ok:
        flags.append(
            "declared-convex-shape-violation: a convex germ must have only "
            "even axis vertices"
        )

    conv = convenience(poly)
    fam = transversals(hat)
    hyp = Hypotheses(kn.satisfied, nondeg_ok, nonnegative)
    theta_res = theta(conv, hyp, fanexp.N if fanexp else None)
    alpha_res = alpha_exponent(poly, hat, hyp, fanexp.L if fanexp else None)
    dist_res = dist_exponent(poly, fam, hyp, fanexp.N if fanexp else None)
    if dist_res.extended:
        flags.append("transversal-family-extended")
    combined = combined_case(conv, fam, theta_res, alpha_res, dist_res, hyp)

    report = ExponentReport(
        kn=kn,
        nondegeneracy_overall=overall,
        face_verdicts=verdicts,
        convenience=conv,
        transversal=fam,
        theta=theta_res,
        alpha=alpha_res,
        dist=dist_res,
        combined=combined,
        fan_L=fanexp.L if fanexp else None,
        fan_N=fanexp.N if fanexp else None,
        convex_vertex_shape=shape_ok,
        hypotheses=hyp,
        flags=tuple(flags),
    )

    gates_ok = kn.satisfied and nondeg_ok
    audits = []
    if with_audits and (gates_ok or opts.force):
        audits = _run_audits(model, poly, report, opts, gates_ok)

    doc = {
        "input": report_mod.model_json(model),
        "polyhedron": report_mod.polyhedron_json(poly),
        "hat_polyhedron": report_mod.polyhedron_json(hat),
        "exponents": report_mod.exponent_report_json(report),
        "audits": [report_mod.audit_json(a) for a in audits],
    }
    if fan_pair is not None:
        doc["fan"] = {
            "normal": report_mod.fan_json(fan_pair[0], poly),
            "unimodular": report_mod.fan_json(fan_pair[1], poly),
        }
        if fanexp is not None:
            doc["fan"]["exponents"] = report_mod.fan_exponents_json(fanexp)
    exit_code = 0 if gates_ok else 2
    return AnalysisOutcome(doc, exit_code, report, audits)


def default_plan(opts: AnalysisOptions) -> SamplePlan:
    return SamplePlan(
        radii=_default_radii(opts.radius, opts.radius * 1e-3, 16),
        directions_per_radius=opts.samples,
        seed=opts.seed,
    )


def _run_audits(
    model: TaylorModel,
    poly,
    report: ExponentReport,
    opts: AnalysisOptions,
    gates_ok: bool,
) -> list:
    plan = default_plan(opts)
    forced = not gates_ok
    hat_probes: list[tuple[float, ...]] = []
    for v, _ in report.alpha.per_hat_vertex:
        hat_probes.extend(audit_mod.diagonal_probe(v))
    # degenerate-face witnesses are the directions where the comparison
    # lemmas break down: probe them explicitly under --force
    for verdict in report.face_verdicts.values():
        if verdict.status == "degenerate" and verdict.witness is not None:
            hat_probes.extend(audit_mod.diagonal_probe(verdict.witness))
    audits = []

    theta_exp = report.theta.value if report.theta.value is not None else report.theta.fallback
    if theta_exp is not None:
        audits.append(
            audit_mod.audit_L1(model, theta_exp, plan, hat_probes, forced=forced)
        )

    alpha_formula = (
        max(d for _, d in report.alpha.per_hat_vertex)
        if report.alpha.per_hat_vertex
        else None
    )
    alpha_exp = report.alpha.value
    alpha_forced = forced
    if alpha_exp is None and opts.force and alpha_formula is not None:
        alpha_exp = alpha_formula
        alpha_forced = True
    if alpha_exp is not None and report.alpha.witness is not None:
        audits.append(
            audit_mod.audit_L0(
                model, report.alpha.witness, alpha_exp, plan, hat_probes,
                forced=alpha_forced,
            )
        )

    dist_exp = report.dist.value
    dist_forced = forced
    if dist_exp is None and opts.force and report.dist.per_ranking:
        dist_exp = max(r.exponent for r in report.dist.per_ranking)
        dist_forced = True
    if dist_exp is not None:
        audits.append(
            audit_mod.audit_L2(
                model, dist_exp, report.transversal, plan, forced=dist_forced
            )
        )

    audits.append(
        audit_mod.audit_euler_comparison(model, poly, plan, hat_probes, forced=forced)
    )
    if report.hypotheses.nonnegative or opts.force:
        audits.append(
            audit_mod.audit_f_vs_g(
                model, poly, plan, hat_probes,
                forced=forced or not report.hypotheses.nonnegative,
            )
        )
    return audits


# ---------------------------------------------------------------------------
# commands

def _fmt_frac(x) -> str:
    if x is None:
        return "n/a"
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _summarize(outcome: AnalysisOutcome, out) -> None:
    rep = outcome.report
    assert rep is not None
    doc = outcome.document
    print(f"vertices: {doc['polyhedron']['vertices']}", file=out)
    print(f"KN condition: {'satisfied' if rep.kn.satisfied else 'FAILED'}", file=out)
    print(f"non-degeneracy: {rep.nondegeneracy_overall}", file=out)
    conv = doc["exponents"]["convenience"]
    print(
        "convenient: {} | partially convenient: {} (J = {}, nu = {})".format(
            conv["convenient"], conv["partially_convenient"], conv["J"], conv["nu_max"]
        ),
        file=out,
    )
    theta_v = rep.theta.value
    print(
        "theta = {}{}".format(
            _fmt_frac(theta_v),
            "" if theta_v is not None else f" ({rep.theta.reason}; fallback 1-1/N = {_fmt_frac(rep.theta.fallback)})",
        ),
        file=out,
    )
    print(
        "alpha = {}{}".format(
            _fmt_frac(rep.alpha.value),
            "" if rep.alpha.value is not None else f" ({rep.alpha.reason}; fallback L = {rep.alpha.fallback})",
        ),
        file=out,
    )
    print(
        "dist exponent = {}{}".format(
            _fmt_frac(rep.dist.value),
            "" if rep.dist.value is not None else f" ({rep.dist.reason}; fallback N = {rep.dist.fallback})",
        ),
        file=out,
    )
    print(f"fan bounds: L = {rep.fan_L}, N = {rep.fan_N}", file=out)
    for a in outcome.audits:
        print(
            f"audit {a.inequality}: {a.verdict}"
            + (f" (exponent {a.exponent:g})" if a.exponent is not None else "")
            + (" [forced]" if a.forced else ""),
            file=out,
        )
    for flag in rep.flags:
        print(f"flag: {flag}", file=out)


def _read_input(value: str) -> str:
    if value == "-":
        return sys.stdin.read()
    if os.path.exists(value):
        with open(value, "r", encoding="utf-8") as fh:
            return fh.read()
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with code 2; we reserve that
        raise InputError(message)


def _build_argparser() -> argparse.ArgumentParser:
    p = _Parser(prog="lojex", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("input", help="germ text, JSON, a file path, or '-' for stdin")
        sp.add_argument("--json", dest="json_path", help="write the JSON report here")
        sp.add_argument("--csv", dest="csv_path", help="write audit envelope tables here")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--samples", type=int, default=256, help="directions per radius level")
        sp.add_argument("--radius", type=float, default=0.1, help="outer sampling radius")
        sp.add_argument("--tol", type=float, default=1e-10, help="non-degeneracy residual tolerance")
        sp.add_argument("--starts", type=int, default=64, help="multistart count per sign orthant")
        sp.add_argument("--max-dim", type=int, default=None)
        sp.add_argument("--force", action="store_true", help="run audits despite failed gates (marked)")
        sp.add_argument(
            "--declare", action="append", choices=["nonnegative", "convex"], default=[],
            help="user hypotheses; convex implies nonnegative and triggers the vertex-shape check",
        )

    for name in ("analyze", "exponents", "fan", "nondegen", "verify"):
        sp = sub.add_parser(name)
        common(sp)
    sub.choices["verify"].add_argument("--theta", help="gradient exponent to audit (p/q or decimal)")
    sub.choices["verify"].add_argument("--alpha", help="domination exponent to audit")
    sub.choices["verify"].add_argument("--dist", help="distance exponent to audit")
    return p


def _opts_from_args(args) -> AnalysisOptions:
    return AnalysisOptions(
        declare_nonnegative="nonnegative" in args.declare,
        declare_convex="convex" in args.declare,
        seed=args.seed,
        tol=args.tol,
        starts=args.starts,
        samples=args.samples,
        radius=args.radius,
        force=args.force,
        max_dim=args.max_dim,
    )


def _emit(doc: dict, args, audits) -> None:
    if args.json_path:
        target = sys.stdout if args.json_path == "-" else open(args.json_path, "w", encoding="utf-8")
        try:
            json.dump(doc, target, indent=2)
            target.write("\n")
        finally:
            if target is not sys.stdout:
                target.close()
    if args.csv_path and audits:
        with open(args.csv_path, "w", encoding="utf-8") as fh:
            fh.write(report_mod.audits_csv(audits))


def run(args) -> int:
    model = parse_germ(_read_input(args.input))
    opts = _opts_from_args(args)

    if args.command in ("analyze", "exponents"):
        outcome = analyze_germ(model, opts, with_audits=args.command == "analyze")
        print(f"germ: {model_to_text(model).splitlines()[0]}  (n = {model.n})")
        _summarize(outcome, sys.stdout)
        _emit(outcome.document, args, outcome.audits)
        return outcome.exit_code

    if args.command == "fan":
        if opts.max_dim is not None and model.n > opts.max_dim:
            raise CapExceededError(f"dimension {model.n} exceeds --max-dim {opts.max_dim}")
        poly = build_polyhedron(support(model))
        sigma0, sigma = _build_fans(poly)
        fanexp = fan_exponents(sigma, poly)
        doc = {
            "polyhedron": report_mod.polyhedron_json(poly),
            "normal": report_mod.fan_json(sigma0, poly),
            "unimodular": report_mod.fan_json(sigma, poly),
            "exponents": report_mod.fan_exponents_json(fanexp),
        }
        print(f"normal fan: {len(sigma0.maximal)} maximal cones, {len(sigma0.rays)} rays")
        print(f"refinement: {len(sigma.maximal)} maximal cones, {len(sigma.rays)} rays")
        print(f"L = {fanexp.L}, N = {fanexp.N}")
        _emit(doc, args, [])
        return 0

    if args.command == "nondegen":
        poly = build_polyhedron(support(model))
        verdicts, ok = check_model(model, poly, tol=opts.tol, starts=opts.starts, seed=opts.seed)
        doc = {
            "polyhedron": report_mod.polyhedron_json(poly),
            "faces": [report_mod._verdict_json(k, v) for k, v in sorted(verdicts.items())],
            "overall_nondegenerate": ok,
        }
        for key, v in sorted(verdicts.items()):
            print(f"face {sorted(key)}: {v.status}")
        print(f"overall: {'nondegenerate' if ok else 'NOT certified nondegenerate'}")
        _emit(doc, args, [])
        return 0 if ok else 2

    if args.command == "verify":
        outcome = analyze_germ(model, opts, with_audits=False)
        rep = outcome.report
        assert rep is not None
        plan = default_plan(opts)
        hat_probes = []
        for v, _ in rep.alpha.per_hat_vertex:
            hat_probes.extend(audit_mod.diagonal_probe(v))
        audits = []
        if args.theta:
            audits.append(audit_mod.audit_L1(model, Fraction(args.theta), plan, hat_probes))
        if args.alpha and rep.alpha.witness is not None:
            audits.append(
                audit_mod.audit_L0(model, rep.alpha.witness, Fraction(args.alpha), plan, hat_probes)
            )
        if args.dist:
            audits.append(
                audit_mod.audit_L2(model, Fraction(args.dist), rep.transversal, plan)
            )
        if not audits:
            raise InputError("verify needs at least one of --theta/--alpha/--dist")
        for a in audits:
            print(f"audit {a.inequality} at exponent {a.exponent:g}: {a.verdict}")
        doc = {"audits": [report_mod.audit_json(a) for a in audits]}
        _emit(doc, args, audits)
        return 0

    raise InputError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = _build_argparser()
    try:
        args = parser.parse_args(argv)
        return run(args)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (InputError, LojexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
