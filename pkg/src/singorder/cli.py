"""Command-line interface: read JSON, compute, write JSON or DOT, exit.

Exit codes: 0 success, 2 input or schema error, 3 results truncated by a
budget, 4 a partial-order axiom or cross-check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats as fmt
from .algebra import AlgebraError, validate_algebra
from .degen import deg_search, st_compare, verify_certificate
from .modrep import ModuleError, chop, radical_top_socle, syzygy, validate_module, hom_space
from .poset import (RELATIONS, ModuleFamily, build_relation, check_poset_axioms, enumerate_family,
                    equivalence_function, export_dot, matrix_to_json, triangle_consistency)
from .stab import ConsistencyError, StabObject, qst_compare, triangle_compare
from .stablecat import stable_hom

EXIT_OK, EXIT_INPUT, EXIT_TRUNCATED, EXIT_VIOLATION = 0, 2, 3, 4


class InputError(Exception):
    pass


def _load_obj(arg: str):
    path = Path(arg)
    if path.is_file():
        return fmt.read_json(path)
    try:
        obj = json.loads(arg)
    except json.JSONDecodeError:
        return arg  # a module name such as "A" or "S0"
    return obj if isinstance(obj, (dict, str)) else arg  # bare "0" is the zero module


def _kit(args):
    return fmt.load_algebra(args.algebra)


def _module(kit, arg, named=None):
    return fmt.module_from_json(kit, _load_obj(arg), named)


def _emit(args, payload, text: str | None = None) -> None:
    out = fmt.dumps(payload)
    if args.json_out:
        Path(args.json_out).write_text(out)
    sys.stdout.write(text if text is not None else out)


# -- commands ------------------------------------------------------------------------

def cmd_algebra_validate(args) -> int:
    obj = fmt.read_json(args.file)
    try:
        kit = fmt.load_algebra(obj)
    except (AlgebraError, fmt.FormatError) as exc:
        _emit(args, {"valid": False, "message": str(exc)})
        return EXIT_INPUT
    report = validate_algebra(kit.spec)
    _emit(args, {"valid": report.ok, "message": report.message, "p": kit.p, "n": kit.n,
                 "radical_dim": int(kit.radical_basis.shape[1]), "local": kit.is_local,
                 "provenance": kit.provenance})
    return EXIT_OK


def cmd_algebra_build(args) -> int:
    _emit(args, fmt.algebra_to_json(fmt.load_algebra(args.file)))
    return EXIT_OK


def cmd_module_check(args) -> int:
    kit = _kit(args)
    M = _module(kit, args.module)
    report = validate_module(kit, M)
    payload = {"valid": report.ok, "message": report.message, "d": M.d}
    if report.ok:
        rad, top, soc = radical_top_socle(kit, M)
        fac = chop(kit, M, args.seed)
        payload.update({"radical_dim": rad.d, "top_dim": top.d, "socle_dim": soc.d,
                        "composition_factors": {"status": fac.status,
                                                "dims": [S.d for S, k in fac.factors],
                                                "multiplicities": [k for S, k in fac.factors]}})
    _emit(args, payload)
    return EXIT_OK if report.ok else EXIT_INPUT


def cmd_hom(args) -> int:
    kit = _kit(args)
    M, N = _module(kit, args.M), _module(kit, args.N)
    if args.stable:
        sh = stable_hom(kit, M, N)
        payload = {"full": sh.full, "factoring": sh.factoring, "stable": sh.stable,
                   "stable_basis": [sh.complement[:, k].reshape(N.d, M.d).tolist()
                                    for k in range(sh.complement.shape[1])]}
    else:
        H = hom_space(kit, M, N)
        payload = {"dim": int(H.shape[1]),
                   "basis": [H[:, k].reshape(N.d, M.d).tolist() for k in range(H.shape[1])]}
    _emit(args, payload)
    return EXIT_OK


def cmd_syzygy(args) -> int:
    kit = _kit(args)
    M = _module(kit, args.module)
    dims = [syzygy(kit, M, t).d for t in range(args.iterate + 1)]
    _emit(args, {"dims": dims, "module": fmt.module_to_json(syzygy(kit, M, args.iterate))})
    return EXIT_OK


def cmd_deg_verify(args) -> int:
    kit = _kit(args)
    cert = fmt.certificate_from_json(kit, fmt.read_json(args.certificate))
    chk = verify_certificate(kit, cert)
    _emit(args, {"ok": chk.ok, "diagnostics": chk.diagnostics, "shape": cert.shape})
    return EXIT_OK if chk.ok else EXIT_INPUT


def _verdict_exit(v) -> int:
    return EXIT_TRUNCATED if v.witness.get("truncated") else EXIT_OK


def cmd_deg_search(args) -> int:
    kit = _kit(args)
    M, N = _module(kit, args.M), _module(kit, args.N)
    v = deg_search(kit, M, N, args.depth, args.budget, args.seed)
    _emit(args, fmt.verdict_to_json(v))
    return _verdict_exit(v)


def _st_params(args) -> dict:
    return {"padding_bound": args.pad, "depth": args.depth, "budget": args.budget, "seed": args.seed}


def cmd_st_compare(args) -> int:
    kit = _kit(args)
    X, Y = _module(kit, args.X), _module(kit, args.Y)
    v = st_compare(kit, X, Y, **_st_params(args))
    _emit(args, fmt.verdict_to_json(v))
    return EXIT_OK


def cmd_qst_compare(args) -> int:
    kit = _kit(args)
    a = fmt.stab_object_from_json(kit, _load_obj(args.a))
    b = fmt.stab_object_from_json(kit, _load_obj(args.b))
    v = qst_compare(kit, a, b, args.kmax, _st_params(args))
    payload = fmt.verdict_to_json(v)
    if args.triangle:
        tv = triangle_compare(kit, a, b, args.kmax, _st_params(args))
        payload["triangle"] = {"status": tv.status, "consistent": tv.consistent, "level": tv.level,
                               "rotated": tv.rotated,
                               "triangles": [fmt.triangle_to_json(T) for T in tv.triangles]}
    _emit(args, payload)
    return EXIT_OK


def _family(kit, spec: dict, relation: str):
    if "enumerate" in spec:
        e = spec["enumerate"]
        fam = enumerate_family(kit, e.get("dims", [1]), e.get("dedup", "iso"), int(e.get("budget", 1_000_000)))
    elif "modules" in spec:
        named, members = {}, []
        for k, entry in enumerate(spec["modules"]):
            M = fmt.module_from_json(kit, entry, named)
            if not M.label:
                M = M.relabel(f"X{k}")
            report = validate_module(kit, M)
            if not report:
                raise InputError(f"family member {M.label}: {report.message}")
            named[M.label] = M
            members.append(M)
        fam = ModuleFamily(tuple(members), "none", {"members": len(members)})
    else:
        raise InputError('family file needs "modules" or "enumerate"')
    objects = list(fam.members)
    if relation == "qst":
        shifts = spec.get("shifts", [0])
        objects = [StabObject(M, int(s)) for M in fam.members for s in shifts]
    return fam, objects


def cmd_poset(args) -> int:
    kit = _kit(args)
    spec = fmt.read_json(args.family)
    fam, objects = _family(kit, spec, args.relation)
    params = {"depth": args.depth, "budget": args.budget, "seed": args.seed,
              "padding_bound": args.pad, "k_max": args.kmax}
    matrix = build_relation(kit, objects, args.relation, params)
    code = EXIT_TRUNCATED if fam.truncated else EXIT_OK
    if args.action == "build":
        payload = matrix_to_json(matrix)
        payload["census"] = fam.census
        _emit(args, payload)
        return code
    if args.action == "dot":
        dot = export_dot(matrix)
        if args.json_out:
            Path(args.json_out).write_text(fmt.dumps(matrix_to_json(matrix)))
        sys.stdout.write(dot)
        return code
    report = check_poset_axioms(matrix, equivalence_function(kit, matrix))
    payload = {"relation": args.relation, "report": report.to_json(list(matrix.labels)),
               "census": fam.census}
    if args.relation == "qst" and args.triangle:
        grid = triangle_consistency(kit, matrix)
        payload["triangle_consistent"] = all(all(row) for row in grid)
    _emit(args, payload)
    if not report.ok or payload.get("triangle_consistent") is False:
        return EXIT_VIOLATION
    return code


# -- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized searches")
    common.add_argument("--budget", type=int, default=20_000, help="search/enumeration budget")
    common.add_argument("--json-out", default=None, help="also write the JSON result to this file")
    # repeated on subcommands without defaults, so a global value is not overwritten
    local = argparse.ArgumentParser(add_help=False)
    local.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    local.add_argument("--budget", type=int, default=argparse.SUPPRESS)
    local.add_argument("--json-out", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="singorder", parents=[common],
                                     description="Degeneration orders for modules over finite-dimensional algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    alg = sub.add_parser("algebra", help="algebra descriptions").add_subparsers(dest="action", required=True)
    p = alg.add_parser("validate", parents=[local])
    p.add_argument("file")
    p.set_defaults(func=cmd_algebra_validate)
    p = alg.add_parser("build", parents=[local])
    p.add_argument("file")
    p.set_defaults(func=cmd_algebra_build)

    mod = sub.add_parser("module", help="module checks").add_subparsers(dest="action", required=True)
    p = mod.add_parser("check", parents=[local])
    p.add_argument("algebra")
    p.add_argument("module")
    p.set_defaults(func=cmd_module_check)

    p = sub.add_parser("hom", parents=[local], help="hom space dimensions")
    p.add_argument("algebra")
    p.add_argument("M")
    p.add_argument("N")
    p.add_argument("--stable", action="store_true")
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("syzygy", parents=[local], help="iterated syzygies")
    p.add_argument("algebra")
    p.add_argument("module")
    p.add_argument("--iterate", type=int, default=1)
    p.set_defaults(func=cmd_syzygy)

    deg = sub.add_parser("deg", help="degeneration order").add_subparsers(dest="action", required=True)
    p = deg.add_parser("verify", parents=[local])
    p.add_argument("algebra")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_deg_verify)
    p = deg.add_parser("search", parents=[local])
    p.add_argument("algebra")
    p.add_argument("M")
    p.add_argument("N")
    p.add_argument("--depth", type=int, default=3)
    p.set_defaults(func=cmd_deg_search)

    st = sub.add_parser("st", help="stable degeneration").add_subparsers(dest="action", required=True)
    p = st.add_parser("compare", parents=[local])
    p.add_argument("algebra")
    p.add_argument("X")
    p.add_argument("Y")
    p.add_argument("--pad", type=int, default=3)
    p.add_argument("--depth", type=int, default=3)
    p.set_defaults(func=cmd_st_compare)

    qst = sub.add_parser("qst", help="quasi-stable degeneration").add_subparsers(dest="action", required=True)
    p = qst.add_parser("compare", parents=[local])
    p.add_argument("algebra")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--pad", type=int, default=3)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--triangle", action="store_true", help="also run the triangle route")
    p.set_defaults(func=cmd_qst_compare)

    p = sub.add_parser("poset", parents=[local], help="relation matrices over a family")
    p.add_argument("action", choices=["build", "check", "dot"])
    p.add_argument("algebra")
    p.add_argument("family")
    p.add_argument("--relation", choices=RELATIONS, required=True)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--pad", type=int, default=3)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--triangle", action="store_true", help="cross-check qst cells through triangles")
    p.set_defaults(func=cmd_poset)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (fmt.FormatError, AlgebraError, ModuleError, InputError, ValueError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except ConsistencyError as exc:
        sys.stderr.write(f"cross-check failure: {exc}\n")
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
