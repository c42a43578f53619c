"""Command-line front end.

Exit codes: 0 for success or an affirmative verdict, 1 for a negative
verdict, 2 for malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys


from . import f2core, lcs, rm, transversal
from .pauli import PauliParseError
from .stabilizer import CodeError, CodeParseError, StabilizerCode, code_distance, format_code, parse_code
from .symplectic import CircuitParseError, SymplecticError, parse_circuit

SCHEMA = 1
EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2


class InputError(Exception):
    """Malformed user input; reported with exit status 2."""


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _load_code(path: str) -> StabilizerCode:
    try:
        code = parse_code(_read(path))
    except (CodeParseError, CodeError) as exc:
        raise InputError(f"{path}: {exc}") from None
    if not code.name:
        code.name = path
    return code


def _bits(v) -> str:
    return "".join(str(int(x)) for x in v)


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        out = {"schema": SCHEMA}
        out.update(payload)
        sys.stdout.write(json.dumps(out, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


# ---------------------------------------------------------------------------
# Subcommands


def cmd_synthesize(args) -> int:
    if not args.code or not args.target:
        raise InputError("synthesize needs --code and --target")
    code = _load_code(args.code)
    try:
        target = lcs.resolve_target(args.target, code.k)
    except lcs.TargetError as exc:
        raise InputError(f"target: {exc}") from None
    results = lcs.synthesize_all(code, target, max_solutions=args.max_solutions)
    shown = results if args.all else results[:1]
    payload = {
        "command": "synthesize",
        "code": code.name,
        "target": args.target,
        "solution_count": len(results),
        "solutions": [r.to_json() for r in shown],
    }
    lines = [f"{len(results)} solution(s) for {args.target} on {code.name}"]
    for r in shown:
        lines.append(
            f"#{r.index}: {r.circuit}  correction {r.pauli_correction}  "
            f"(2q={r.cost[0]}, depth={r.cost[1]}, verified={r.verified.get('ok')})"
        )
    _emit(args, payload, lines)
    ok = all(r.verified.get("ok") is not False for r in results)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_check_transversal(args) -> int:
    if not args.code:
        raise InputError("check-transversal needs --code")
    code = _load_code(args.code)
    if args.ell is not None and args.ell != 3:
        if args.pattern:
            raise InputError("--pattern and --ell other than 3 cannot be combined")
        verdict = transversal.check_z_rotation(code, args.ell)
        payload = {"command": "check-transversal", "code": code.name, "kind": "z-rotation"}
        payload.update(verdict.to_json())
        lines = [f"{code.name}: level-{args.ell} transversal rotation "
                 f"{'preserves' if verdict.supported else 'does not preserve'} the code space"]
        for g in verdict.groups:
            if not g.passed:
                lines.append(f"  fails for X-part {_bits(g.a)} (support {g.m})")
        _emit(args, payload, lines)
        return EXIT_OK if verdict.supported else EXIT_NEGATIVE
    if args.pattern:
        t = transversal.TransversalPattern.parse(args.pattern)
        if t.n != code.n:
            raise InputError(f"--pattern has {t.n} entries but the code has {code.n} qubits")
    else:
        t = transversal.TransversalPattern.all_ones(code.n)
    verdict = transversal.check_pattern(code, t)
    payload = {"command": "check-transversal", "code": code.name, "kind": "pattern"}
    payload.update(verdict.to_json())
    lines = [f"{code.name}: pattern {t} {'preserves' if verdict.supported else 'does not preserve'} the code space"]
    for g in verdict.failing_groups():
        reason = (
            "odd support" if not g.even_weight
            else "punctured Z-space misses its dual" if not g.dual_contained
            else "Z-signs differ from the prescription"
        )
        lines.append(f"  X-part {_bits(g.a)}: {reason}")
    if not verdict.supported and verdict.pauli_correction is not None:
        lines.append(f"  conjugating by {verdict.pauli_correction} fixes the signs")
    if code.css is not None and verdict.supported and t.t.min() == 1 and t.t.max() == 1:
        li = transversal.check_logical_identity(code)
        payload["logical_identity"] = li.to_json()
        lines.append(f"  logical identity: {li.holds}" + (f" ({li.failing})" if li.failing else ""))
    _emit(args, payload, lines)
    return EXIT_OK if verdict.supported else EXIT_NEGATIVE


def cmd_construct_qrm(args) -> int:
    if args.r is None or args.m is None:
        raise InputError("construct-qrm needs --r and --m")
    try:
        code = rm.qrm_construct(args.r, args.m)
    except rm.RMError as exc:
        raise InputError(str(exc)) from None
    n, k, d = rm.qrm_parameters(args.r, args.m)
    payload = {"command": "construct-qrm", "r": args.r, "m": args.m, "n": n, "k": k, "d": d}
    lines = [f"QRM({args.r},{args.m}): [[{n},{k},{d}]]"]
    if args.emit_code:
        text = format_code(code)
        payload["code"] = text
        lines.append(text.rstrip("\n"))
    if args.emit_logical_poly:
        try:
            poly = rm.qrm_logical_action(args.r, args.m)
        except rm.RMError as exc:
            raise InputError(str(exc)) from None
        payload["logical_poly"] = {
            "terms": [[i + 1 for i in t] for t in poly.terms],
            "labels": ["".join(f"x{j}" for j in lab) for lab in poly.labels],
            "text": poly.format(),
        }
        lines.append(f"q(v) = {poly.format()}  ({len(poly)} terms)")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_verify_circuit(args) -> int:
    if not args.code or not args.circuit or not args.target:
        raise InputError("verify-circuit needs --code, --circuit and --target")
    code = _load_code(args.code)
    try:
        circuit = parse_circuit(_read(args.circuit), code.n)
    except CircuitParseError as exc:
        raise InputError(f"{args.circuit}: {exc}") from None
    try:
        target = lcs.resolve_target(args.target, code.k)
    except lcs.TargetError as exc:
        raise InputError(f"target: {exc}") from None
    if any(g.name in ("T", "Tdg") for g in circuit):
        raise InputError(f"{args.circuit}: only Clifford gates can be verified")
    expected = lcs.assemble_constraints(code, target).expected
    payload = {"command": "verify-circuit", "code": code.name, "circuit": str(circuit)}
    try:
        corr = lcs.fix_signs(code, circuit, expected=expected)
    except SymplecticError as exc:
        payload.update({"ok": False, "reason": str(exc)})
        _emit(args, payload, [f"circuit does not realise {args.target}: {exc}"])
        return EXIT_NEGATIVE
    rep = lcs.verify_symbolic(circuit, corr, expected)
    if code.n <= 10:
        rep = lcs.verify_oracle(code, circuit, corr, expected)
    payload.update({"ok": bool(rep["ok"]), "pauli_correction": str(corr), "verification": rep})
    verdict = "realises" if rep["ok"] else "does not realise"
    _emit(args, payload, [f"circuit {verdict} {args.target} with correction {corr} ({rep['method']})"])
    return EXIT_OK if rep["ok"] else EXIT_NEGATIVE


def cmd_info(args) -> int:
    if not args.code:
        raise InputError("info needs --code")
    code = _load_code(args.code)
    d = code_distance(code, max_n=16)
    payload = {
        "command": "info",
        "code": code.name,
        "n": code.n,
        "k": code.k,
        "r": code.r,
        "distance": d,
        "css": code.css is not None,
        "generators": [str(g) for g in code.generators],
        "logical_x": [str(p) for p in code.logical_x],
        "logical_z": [str(p) for p in code.logical_z],
    }
    lines = [f"{code.name}: [[{code.n},{code.k},{d if d is not None else '?'}]]"
             f"{' CSS' if code.css is not None else ''}"]
    lines += ["  S: " + str(g) for g in code.generators]
    lines += ["  X: " + str(p) for p in code.logical_x]
    lines += ["  Z: " + str(p) for p in code.logical_z]
    _emit(args, payload, lines)
    return EXIT_OK


COMMANDS = {
    "synthesize": cmd_synthesize,
    "check-transversal": cmd_check_transversal,
    "construct-qrm": cmd_construct_qrm,
    "verify-circuit": cmd_verify_circuit,
    "info": cmd_info,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="artifact", description="Logical Clifford synthesis and transversal-gate checks")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--code", metavar="FILE")
        s.add_argument("--target", metavar="NAME|FILE")
        s.add_argument("--all", action="store_true", help="emit every solution")
        s.add_argument("--json", action="store_true")
        s.add_argument("--pattern", metavar="Z8STRING")
        s.add_argument("--ell", type=int)
        s.add_argument("--r", type=int)
        s.add_argument("--m", type=int)
        s.add_argument("--circuit", metavar="FILE")
        s.add_argument("--max-solutions", type=int, default=lcs.DEFAULT_MAX_SOLUTIONS)
        s.add_argument("--emit-code", action="store_true")
        s.add_argument("--emit-logical-poly", action="store_true")
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (transversal.TransversalError, lcs.TargetError, PauliParseError, f2core.F2Error,
            rm.RMError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
