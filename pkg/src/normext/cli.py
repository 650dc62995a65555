"""Command-line front end and corpus comparison.

Exit codes: 0 = every check passed, 1 = a mathematical check failed (the
report is still emitted), 2 = input or resource error.  Output is
deterministic for fixed inputs: JSON is dumped with sorted keys and no
timestamps, tables print in a fixed order.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .certify import (
    BuildError,
    build_extension,
    default_bound,
    full_certificate,
)
from .dsl import (
    AlgebraFile,
    DslError,
    parse_algebra_file,
    parse_assignment_text,
    parse_scalar,
    parse_unit,
    print_poly,
)
from .family import flatness_probe, zhang_certificate
from .freealg import AlgebraError, Context
from .linalg import ResourceLimitError
from .quotient import DegreeTable, Presentation, hilbert_table
from .scalars import Assignment, ScalarError, SpecializeError, UnitScalar
from .superpotential import (
    DiagonalMap,
    Superpotential,
    TwistError,
    superpotential_from_relations,
)
from .tuples import SolutionFamily, SolveError, goodness_system, solve_units, w_hash

INPUT_ERRORS = (
    DslError,
    OSError,
    SolveError,
    BuildError,
    SpecializeError,
    ScalarError,
    AlgebraError,
    TwistError,
    ResourceLimitError,
    ValueError,
)


def default_corpus_path() -> Path:
    return Path(__file__).resolve().parent / "corpus"


def _emit(obj, fmt: str = "json", tsv: str | None = None) -> None:
    if fmt == "tsv" and tsv is not None:
        sys.stdout.write(tsv)
    else:
        sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _merged_assignment(af: AlgebraFile, assign_text: str | None) -> Assignment | None:
    values = dict(af.values)
    roots = dict(af.roots)
    if assign_text:
        v2, r2 = parse_assignment_text(assign_text, af.conductor)
        # a re-assigned value invalidates the file's root designations for it
        for name in v2:
            for key in [k for k in roots if k[0] == name]:
                del roots[key]
        values.update(v2)
        roots.update(r2)
    if not af.params:
        return None
    missing = [p for p in af.params if p not in values]
    if missing:
        raise DslError(f"parameters {missing} lack assignments (use --assign)")
    return Assignment(af.params, values, roots, af.conductor)


def _field_superpotential(af: AlgebraFile, assign_text: str | None) -> Superpotential:
    asg = _merged_assignment(af, assign_text)
    if af.w is not None:
        w = af.w.specialize(asg) if asg is not None else af.w
        return Superpotential(w)
    rels = [r.specialize(asg) for r in af.rels] if asg is not None else list(af.rels)
    return Superpotential(superpotential_from_relations(rels))


def _symbolic_superpotential(af: AlgebraFile, assign_text: str | None) -> Superpotential:
    """Unit-mode form when parameters exist, field form otherwise."""
    if af.w is not None:
        return Superpotential(af.w)
    return _field_superpotential(af, assign_text)


def _parse_field_tuple(text: str, ctx: Context):
    return tuple(parse_scalar(part, ctx.conductor) for part in text.split(","))


def _require(option, name: str):
    if option is None:
        raise DslError(f"missing required option {name}")
    return option


# -- subcommands -----------------------------------------------------------------


def cmd_check_superpotential(args) -> int:
    af = parse_algebra_file(args.file)
    sp = _symbolic_superpotential(af, args.assign)
    out = {
        "algebra": af.name,
        "degree": sp.ell,
        "twist": [str(s) if sp.ctx.mode == "field" else s.text(sp.ctx.params) for s in sp.twist.scales],
        "is_superpotential": sp.twist.is_identity(),
        "derivatives_independent": sp.derivatives_independent(),
    }
    _emit(out, args.format)
    return 0


def cmd_derive(args) -> int:
    af = parse_algebra_file(args.file)
    sp = _symbolic_superpotential(af, args.assign)
    out = {
        "algebra": af.name,
        "w": print_poly(sp.w),
        "derivatives": [print_poly(f) for f in sp.f],
        "trailing": [print_poly(g) for g in sp.g],
        "twist": [str(s) if sp.ctx.mode == "field" else s.text(sp.ctx.params) for s in sp.twist.scales],
    }
    _emit(out, args.format)
    return 0


def cmd_solve_tuples(args) -> int:
    af = parse_algebra_file(args.file)
    sp = _symbolic_superpotential(af, args.assign)
    k = _require(args.omit, "--omit") - 1
    system = goodness_system(sp, k)
    fams = solve_units(system, w_hash(sp.w))
    out = {
        "algebra": af.name,
        "k": k + 1,
        "equations": [
            {"counts": list(counts), "rhs": rhs.text(sp.ctx.params), "label": lab}
            for (counts, rhs), lab in zip(system.rows, system.labels)
        ],
        "families": [f.to_json(af.conductor) for f in fams],
    }
    _emit(out, args.format)
    return 0


def cmd_build_extension(args) -> int:
    af = parse_algebra_file(args.file)
    sp = _field_superpotential(af, args.assign)
    k = _require(args.omit, "--omit") - 1
    p = _parse_field_tuple(_require(args.p, "--p"), sp.ctx)
    spec = build_extension(sp, p, k, label=f"D({af.name})")
    _emit(spec.describe(), args.format)
    return 0


def cmd_hilbert(args) -> int:
    af = parse_algebra_file(args.file)
    sp = _field_superpotential(af, args.assign)
    if args.omit is not None:
        p = _parse_field_tuple(_require(args.p, "--p"), sp.ctx)
        spec = build_extension(sp, p, args.omit - 1, label=f"D({af.name})")
        pres = spec.D
    else:
        pres = Presentation(sp.ctx, sp.f, label=f"A({af.name})")
    bound = args.bound if args.bound is not None else default_bound(sp.m)
    table = hilbert_table(pres, bound, args.engine)
    out = table.to_json()
    if args.gb_log and args.engine in ("gb", "both"):
        from .quotient import gb_engine

        gb = gb_engine(pres, bound)
        out["gb_log"] = {
            "leading_words": ["*".join(pres.ctx.gens[i] for i in w) for w in gb.leading_words()],
            "ambiguities_processed": len(gb.log),
        }
    _emit(out, args.format, tsv=table.to_tsv())
    return 0


def cmd_verify(args) -> int:
    af = parse_algebra_file(args.file)
    sp = _field_superpotential(af, args.assign)
    k = _require(args.omit, "--omit") - 1
    p = _parse_field_tuple(_require(args.p, "--p"), sp.ctx)
    spec = build_extension(sp, p, k, label=f"D({af.name})")
    cert = full_certificate(spec, bound=args.bound, engine=args.engine)
    _emit(cert.to_json(), args.format)
    return 0 if cert.passed else 1


def cmd_family_probe(args) -> int:
    af = parse_algebra_file(args.file)
    sp = _field_superpotential(af, args.assign)
    if args.points:
        pts = [
            _parse_field_tuple(part, sp.ctx) for part in args.points.split(";") if part
        ]
    else:
        from .scalars import Scalar

        one = Scalar.one(sp.ctx.conductor)
        zero = Scalar.zero(sp.ctx.conductor)
        pts = [
            tuple(one if j == i else zero for j in range(sp.n)) for i in range(sp.n)
        ]
        pts.append(tuple(one for _ in range(sp.n)))
        pts.append(
            tuple(Scalar.from_rational(j + 1, sp.ctx.conductor) for j in range(sp.n))
        )
    bound = args.bound if args.bound is not None else 6
    report = flatness_probe(sp, pts, bound, args.engine if args.engine != "both" else "gb")
    _emit(report.to_json(), args.format, tsv=report.to_tsv())
    return 0 if report.passed else 1


def cmd_zhang(args) -> int:
    af = parse_algebra_file(args.file)
    sp = _field_superpotential(af, args.assign)
    k = _require(args.omit, "--omit") - 1
    p = _parse_field_tuple(_require(args.p, "--p"), sp.ctx)
    sigma = DiagonalMap(sp.ctx, _parse_field_tuple(_require(args.sigma, "--sigma"), sp.ctx))
    report = zhang_certificate(sp, p, k, sigma)
    _emit(report.to_json(), args.format)
    return 0 if report.passed else 1


# -- corpus comparison ------------------------------------------------------------


@dataclass
class CorpusEntry:
    name: str
    algebra: AlgebraFile
    expect: dict


def load_corpus(dirpath: Path) -> list[CorpusEntry]:
    entries = []
    for alg in sorted(Path(dirpath).glob("*.alg")):
        sidecar = alg.with_suffix("").with_suffix(".expect.json")
        if not sidecar.exists():
            sidecar = alg.parent / (alg.stem + ".expect.json")
        if not sidecar.exists():
            raise DslError(f"missing sidecar for corpus entry {alg.name}")
        with open(sidecar, "r", encoding="utf-8") as fh:
            expect = json.load(fh)
        entries.append(CorpusEntry(alg.stem, parse_algebra_file(alg), expect))
    if not entries:
        raise DslError(f"no corpus entries found in {dirpath}")
    return entries


def _parse_listed_tuple(text: str, conductor: int, params) -> SolutionFamily | list:
    """A listed representative; 'l' denotes a free scalar in table rows."""
    ext = tuple(params) + ("l",)
    units = [parse_unit(part, conductor, ext) for part in text.split(",")]
    n = len(units)
    lvec = [u.exps[-1] for u in units]
    base = [UnitScalar(u.tor, u.exps[:-1]) for u in units]
    if not any(lvec):
        return base
    if any(v.denominator != 1 for v in lvec):
        raise DslError(f"free-symbol exponents must be integers in {text!r}")
    return SolutionFamily(
        params=tuple(params),
        n=n,
        k=0,
        particular=tuple(base),
        directions=(("l", tuple(int(v) for v in lvec)),),
        cosets=(tuple([Fraction(0)] * n),),
    )


def tables_report(corpus_dir: Path) -> tuple[dict, bool]:
    rows = []
    all_ok = True
    for entry in load_corpus(corpus_dir):
        af = entry.algebra
        sp = _symbolic_superpotential(af, None)
        digest = w_hash(sp.w)
        good = entry.expect.get("good", {})
        ks = sorted(int(k) for k in good) if good else list(range(1, sp.n + 1))
        entry_rows = []
        for k in ks:
            fams = solve_units(goodness_system(sp, k - 1), digest)
            listed = good.get(str(k), [])
            verdicts = []
            for rep in listed:
                target = _parse_listed_tuple(rep, af.conductor, af.params)
                if isinstance(target, SolutionFamily):
                    ok = any(f.contains_family(target) for f in fams)
                else:
                    ok = any(f.contains(target) for f in fams)
                verdicts.append({"listed": rep, "contained": ok})
                if not ok:
                    all_ok = False
            surplus = []
            for f in fams:
                listed_families = sum(
                    1 for rep in listed if isinstance(_parse_listed_tuple(rep, af.conductor, af.params), SolutionFamily)
                )
                if len(f.cosets) > max(1, len(listed) - listed_families):
                    surplus.append(
                        f"computed family has {len(f.cosets)} torsion cosets; row lists {len(listed)} representatives"
                    )
                if f.directions and not listed_families:
                    surplus.append("computed family has free directions " + ", ".join(f.symbols))
            entry_rows.append(
                {
                    "k": k,
                    "families": [f.to_json(af.conductor) for f in fams],
                    "listed": verdicts,
                    "surplus": "; ".join(surplus) if listed else "no table row; families only",
                }
            )
        rows.append(
            {
                "entry": entry.name,
                "table": entry.expect.get("table"),
                "row": entry.expect.get("row"),
                "results": entry_rows,
            }
        )
    return {"corpus": rows, "pass": all_ok}, all_ok


def _tables_tsv(report: dict) -> str:
    lines = ["entry\trow\tk\tlisted\tcontained\tsurplus"]
    for row in report["corpus"]:
        for res in row["results"]:
            if res["listed"]:
                for v in res["listed"]:
                    lines.append(
                        f"{row['entry']}\t{row['row'] or '-'}\t{res['k']}\t{v['listed']}"
                        f"\t{str(v['contained']).lower()}\t{res['surplus']}"
                    )
            else:
                lines.append(
                    f"{row['entry']}\t{row['row'] or '-'}\t{res['k']}\t-\t-\t{res['surplus']}"
                )
    lines.append(f"pass\t{str(report['pass']).lower()}")
    return "\n".join(lines) + "\n"


def cmd_tables(args) -> int:
    corpus = Path(args.corpus) if args.corpus else default_corpus_path()
    report, ok = tables_report(corpus)
    _emit(report, args.format, tsv=_tables_tsv(report))
    return 0 if ok else 1


# -- argument plumbing --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="normext",
        description="Construct and certify normal/central extensions of superpotential algebras.",
    )
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p, needs_file=True):
        if needs_file:
            p.add_argument("file", help="algebra file (.alg)")
        p.add_argument("--bound", type=int, default=None, help="degree bound (default 2m+4)")
        p.add_argument("--omit", type=int, default=None, help="omitted relation index k (1-based)")
        p.add_argument("--p", default=None, help="comma-separated tuple of scalars")
        p.add_argument(
            "--engine", choices=["la", "gb", "both"], default="both", help="dimension engine"
        )
        p.add_argument("--format", choices=["json", "tsv"], default="json")
        p.add_argument("--assign", default=None, help='parameter assignments "a:=4,a^{1/2}:=2"')
        return p

    common(sub.add_parser("check-superpotential", help="recognize the diagonal twist"))
    common(sub.add_parser("derive", help="print derivative bundles and the twist"))
    common(sub.add_parser("solve-tuples", help="solve the multiplicative conditions"))
    common(sub.add_parser("build-extension", help="print the extension presentation"))
    hil = common(sub.add_parser("hilbert", help="graded dimension table"))
    hil.add_argument("--gb-log", action="store_true", help="include rewriting-system debug info")
    common(sub.add_parser("verify", help="full certificate for one instance"))
    probe = common(sub.add_parser("family-probe", help="flat-family Hilbert sampling"))
    probe.add_argument("--points", default=None, help='semicolon-separated points "1,0,0;1,1,1"')
    zh = common(sub.add_parser("zhang", help="twist-compatibility certificate"))
    zh.add_argument("--sigma", default=None, help="comma-separated diagonal scales")
    tb = sub.add_parser("tables", help="compare solver output against the reference rows")
    tb.add_argument("corpus", nargs="?", default=None, help="corpus directory (default: packaged)")
    tb.add_argument("--format", choices=["json", "tsv"], default="json")
    return ap


HANDLERS = {
    "check-superpotential": cmd_check_superpotential,
    "derive": cmd_derive,
    "solve-tuples": cmd_solve_tuples,
    "build-extension": cmd_build_extension,
    "hilbert": cmd_hilbert,
    "verify": cmd_verify,
    "family-probe": cmd_family_probe,
    "zhang": cmd_zhang,
    "tables": cmd_tables,
}


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return HANDLERS[args.verb](args)
    except INPUT_ERRORS as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except AssertionError as e:
        sys.stderr.write(f"internal defect: {e}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
