"""``sepcheck`` command line.

Exit codes: 0 positive verdict, 1 negative verdict (certificate or
witness written), 2 input or usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import axioms as ax
from . import crs, generators, io, mixed, separability
from .errors import SepcheckError
from .game import full_order_from_utility, preference_family, strategically_equivalent
from .rationals import format_rational

OK, NEGATIVE, ERROR = 0, 1, 2

_OPERATION = {
    "check": "separability.decide",
    "certify": "separability.minimal_certificate",
    "represent": "separability.decide",
    "verify-cert": "axioms.verify_certificate",
    "verify-rep": "separability.verify_representation",
    "axioms": "axioms.check_*",
    "crs": "canonical-forms.detect_crs",
    "canonicalize": "canonical-forms.canonicalize_crs",
    "mixed": "mixed-strategies.check_pairwise_marginal_condition",
    "gen": "canonical-forms.generate",
    "bound": "separability.certificate_length_bound",
    "equiv": "game-core.strategically_equivalent",
}


def _indices(text):
    return [int(v) for v in text.split(",")] if text else []


def _values(text):
    return [v.strip() for v in text.split(",") if v.strip()]


def _sibling(path: Path, suffix: str) -> Path:
    return path.with_name(path.stem + suffix)


def _prefs(game, mode):
    if separability.Mode(mode) is separability.Mode.STRATEGIC:
        return preference_family(game)
    return full_order_from_utility(game)


def _check_one(path: Path, mode: str, out):
    game = io.load_game(path)
    verdict = separability.decide(game, mode)
    if isinstance(verdict, separability.Separable):
        target = Path(out) if out else _sibling(path, ".rep.json")
        io.write_json(target, io.rep_to_dict(verdict.rep))
        return OK, f"{path}: separable ({mode}); representation written to {target}"
    target = Path(out) if out else _sibling(path, ".cert.json")
    io.write_json(target, io.cert_to_dict(verdict.cert))
    return NEGATIVE, (
        f"{path}: not separable ({mode}); certificate of length {len(verdict.cert)} "
        f"written to {target}"
    )


def _batch_inputs(folder: Path):
    skip = (".cert.json", ".rep.json", ".form.json", ".decomp.json")
    return sorted(p for p in folder.glob("*.json") if not p.name.endswith(skip))


def _safe_check(path, mode):
    try:
        return _check_one(path, mode, None)
    except SepcheckError as exc:
        return ERROR, f"{path}: error [separability.decide]: {exc}"


def cmd_check(args):
    if args.batch:
        files = _batch_inputs(Path(args.batch))
        threads = max(1, int(os.environ.get("SEPCHECK_THREADS", os.cpu_count() or 1)))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda p: _safe_check(p, args.mode), files))
        for _, line in results:
            print(line)
        codes = [c for c, _ in results]
        return ERROR if ERROR in codes else (NEGATIVE if NEGATIVE in codes else OK)
    if not args.game:
        raise SystemExit("check needs a game file or --batch DIR")
    code, line = _check_one(Path(args.game), args.mode, args.out)
    print(line)
    return code


def cmd_certify(args):
    game = io.load_game(args.game)
    res = separability.minimal_certificate(game, args.mode, args.budget)
    if isinstance(res, separability.NoneWithinBudget):
        print(f"no balanced sequence of length <= {res.budget}")
        return OK
    target = Path(args.out) if args.out else _sibling(Path(args.game), ".cert.json")
    io.write_json(target, io.cert_to_dict(res))
    print(f"minimal certificate of length {len(res)} written to {target}")
    return NEGATIVE


def cmd_represent(args):
    game = io.load_game(args.game)
    verdict = separability.decide(game, args.mode)
    if not isinstance(verdict, separability.Separable):
        print(f"not separable ({args.mode}); no representation exists")
        return NEGATIVE
    data = io.rep_to_dict(verdict.rep)
    if args.out:
        io.write_json(args.out, data)
        print(f"representation written to {args.out}")
    else:
        sys.stdout.write(io.dumps(data))
    return OK


def cmd_verify_cert(args):
    game = io.load_game(args.game)
    cert = io.cert_from_dict(io.read_json(args.cert))
    ok, failed = ax.verify_certificate(cert, _prefs(game, args.mode), game)
    print("certificate verifies" if ok else f"certificate fails condition ({failed})")
    return OK if ok else NEGATIVE


def cmd_verify_rep(args):
    game = io.load_game(args.game)
    rep = io.rep_from_dict(io.read_json(args.rep), game)
    ok, bad = separability.verify_representation(rep, game)
    print("representation verifies" if ok else f"representation disagrees at {bad}")
    return OK if ok else NEGATIVE


def _report_dict(rep: ax.AxiomReport) -> dict:
    out = {"axiom": rep.axiom.value, "holds": rep.holds}
    if not rep.holds:
        out["pattern"] = rep.pattern
        out["witness"] = {k: list(v) if isinstance(v, tuple) else v for k, v in rep.witness.items()}
    return out


def cmd_axioms(args):
    game = io.load_game(args.game)
    wanted = ["oi", "si", "ji"] if args.axiom == "all" else [args.axiom]
    reports = []
    for name in wanted:
        if name == "si":
            reports.append(ax.check_strategic_independence(preference_family(game), game))
        elif name == "oi":
            reports.append(ax.check_opponent_independence(full_order_from_utility(game), game))
        else:
            pairs = None
            if args.focal_pairs:
                flat = _indices(args.focal_pairs)
                pairs = list(zip(flat[::2], flat[1::2]))
            reports.append(
                ax.check_joint_independence(
                    full_order_from_utility(game), game, args.budget, focal_pairs=pairs
                )
            )
    for rep in reports:
        line = f"{rep.axiom.value}: {'holds' if rep.holds else 'fails'}"
        if not rep.holds:
            line += f" ({rep.pattern} pattern) witness {rep.witness}"
        print(line)
    if args.out:
        io.write_json(args.out, [_report_dict(r) for r in reports])
    return OK if all(r.holds for r in reports) else NEGATIVE


def cmd_crs(args):
    game = io.load_game(args.game)
    res = crs.detect_crs(game, args.j, args.k)
    if isinstance(res, crs.NotCRS):
        print(f"no constant rate of substitution: {res.reason}; witness {res.witness}")
        return NEGATIVE
    print(f"delta = {format_rational(res)}")
    return OK


def cmd_canonicalize(args):
    game = io.load_game(args.game)
    verdict = separability.decide(game, separability.Mode.STRATEGIC)
    if not isinstance(verdict, separability.Separable):
        print("not strategically separable; no canonical form")
        return NEGATIVE
    form = crs.canonicalize_crs(verdict.rep, game)
    if isinstance(form, crs.NotFactorable):
        print(f"not factorable: {form.relation}")
        return NEGATIVE
    data = io.form_to_dict(form)
    if args.out:
        io.write_json(args.out, data)
        print(f"canonical form written to {args.out}")
    else:
        sys.stdout.write(io.dumps(data))
    return OK


def cmd_mixed(args):
    game = io.load_game(args.game)
    index = mixed.BernoulliIndex.from_game(game)
    ref = _indices(args.reference) or None
    res = mixed.check_pairwise_marginal_condition(index, args.samples, args.seed, ref)
    if args.out:
        io.write_json(args.out, res.decomposition.to_dict())
    if res.holds:
        print("pairwise-marginal condition holds; reconstruction error 0")
        return OK
    p, q = res.counterexample
    print(f"reconstruction error {format_rational(res.decomposition.error)} "
          f"at {res.decomposition.worst_profile}")
    print(f"p = {[(s, format_rational(w)) for s, w in p.support]}")
    print(f"q = {[(s, format_rational(w)) for s, w in q.support]}")
    return NEGATIVE


def cmd_gen(args):
    grids = [_values(g) for g in args.grid]
    if args.opponents and len(grids) == 1:
        grids = grids * args.opponents
    given = {
        "focal_grid": _values(args.focal_grid) if args.focal_grid else None,
        "grids": tuple(tuple(g) for g in grids) or None,
        "b": args.b,
        "weights": tuple(_values(args.weights)) if args.weights else None,
        "psi": args.psi,
        "seed": args.seed,
        "magnitude": args.magnitude,
    }
    given = {k: v for k, v in given.items() if v is not None}
    if args.family == "log_example":
        spec = generators.log_example_spec(**given)
    else:
        spec = generators.GeneratorSpec(family=args.family, **given)
    data = io.game_to_dict(generators.generate(spec))
    if args.out:
        io.write_json(args.out, data)
        print(f"game written to {args.out}")
    else:
        sys.stdout.write(io.dumps(data))
    return OK


def cmd_bound(args):
    game = io.load_game(args.game)
    bound = separability.certificate_length_bound(game)
    print(f"m = {game.num_profiles}")
    print(f"L = {format_rational(bound)} (~ {float(bound):.4f})")
    return OK


def cmd_equiv(args):
    res = strategically_equivalent(io.load_game(args.game_u), io.load_game(args.game_v))
    if res.equivalent:
        print("strategically equivalent")
        return OK
    s_plus, a, b = res.witness
    print(f"not equivalent: actions {a} and {b} compare differently at opponent profile {s_plus}")
    return NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sepcheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def mode(p):
        p.add_argument("--mode", choices=["strategic", "full"], default="strategic")

    p = sub.add_parser("check", help="decide separability, write representation or certificate")
    p.add_argument("game", nargs="?")
    mode(p)
    p.add_argument("--out")
    p.add_argument("--batch", metavar="DIR")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("certify", help="shortest certificate within a length budget")
    p.add_argument("game")
    mode(p)
    p.add_argument("--budget", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("represent", help="print or write a separable representation")
    p.add_argument("game")
    mode(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_represent)

    p = sub.add_parser("verify-cert", help="check a balanced-sequence certificate")
    p.add_argument("game")
    p.add_argument("cert")
    mode(p)
    p.set_defaults(func=cmd_verify_cert)

    p = sub.add_parser("verify-rep", help="check a representation file")
    p.add_argument("game")
    p.add_argument("rep")
    p.set_defaults(func=cmd_verify_rep)

    p = sub.add_parser("axioms", help="independence axiom checks")
    p.add_argument("game")
    p.add_argument("--axiom", choices=["oi", "si", "ji", "all"], default="all")
    p.add_argument("--budget", type=int, default=ax.DEFAULT_JI_BUDGET)
    p.add_argument(
        "--focal-pairs", help="restrict the joint scan to ordered focal pairs, e.g. '1,0'"
    )
    p.add_argument("--out")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("crs", help="constant rate of substitution between two opponents")
    p.add_argument("game")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_crs)

    p = sub.add_parser("canonicalize", help="linear canonical form of a CRS game")
    p.add_argument("game")
    p.add_argument("--out")
    p.set_defaults(func=cmd_canonicalize)

    p = sub.add_parser("mixed", help="bilateral decomposition and pairwise-marginal test")
    p.add_argument("game")
    p.add_argument("--reference", help="comma-separated reference profile")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_mixed)

    p = sub.add_parser("gen", help="generate a game file")
    p.add_argument("family", choices=[f.value for f in generators.Family])
    p.add_argument("--focal-grid", default="")
    p.add_argument("--grid", action="append", default=[], help="opponent grid; repeat per opponent")
    p.add_argument("--opponents", type=int, default=0, help="replicate a single --grid")
    p.add_argument("--weights", default="")
    p.add_argument("--b")
    p.add_argument("--psi", choices=list(generators.PSI))
    p.add_argument("--seed", type=int)
    p.add_argument("--magnitude", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bound", help="certificate length bound")
    p.add_argument("--game", required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("equiv", help="strategic equivalence of two games")
    p.add_argument("game_u")
    p.add_argument("game_v")
    p.set_defaults(func=cmd_equiv)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else OK
    try:
        return args.func(args)
    except (SepcheckError, OSError, ValueError, SystemExit) as exc:
        print(f"error [{_OPERATION[args.command]}]: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
