"""Command-line interface.

Exit status: 0 on success, 1 when a verification disagrees with its
expected values, 2 on usage errors (bad flags, malformed or invalid specs,
bounds exceeded).
"""

from __future__ import annotations

import argparse
import json
import sys

from .finitefield import field_for_order, is_prime
from .pgroup import BoundExceeded, SpecError, format_spec, parse_spec, structure_formula

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _field(q: int | None, p: int | None = None):
    if q is None:
        if p is None:
            raise UsageError("--field is required")
        q = p
    if not (is_prime(q) or (q >= 2 and q & (q - 1) == 0)):
        raise UsageError(f"--field {q}: only primes and powers of two are supported")
    return field_for_order(q)


def _spec(text: str):
    try:
        return parse_spec(text)
    except SpecError as exc:
        raise UsageError(f"invalid group parameters {text!r}: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"malformed spec string: {exc}") from None


def _table(rows, header):
    cols = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cols) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cols)


# ---------------------------------------------------------------------------
# commands


def cmd_group_info(args):
    from .battery import log_order
    from .pgroup import nu_profile

    spec = _spec(args.spec)
    sp = structure_formula(spec)
    info = {
        "spec": format_spec(spec),
        "prime": spec.prime,
        "log_order": log_order(spec),
        "zeta": sp.zeta,
        "delta": sp.delta,
        "exponent": sp.exponent,
        "dG": sp.dG,
        "L": list(sp.L),
        "m": sp.mG,
    }
    if spec.form == "Q":
        info["nu"] = [
            {"t": t, **{k: getattr(nu_profile(spec, t), k) for k in ("mu", "nu", "nu_tilde")}}
            for t in range(1, sp.exponent + 1)
        ]
    if args.deep:
        from .pgroup import make_group, structure

        structure(make_group(spec), verify=True)
        info["enumeration_check"] = "agrees"
    lines = [f"{k}: {v}" for k, v in info.items() if k != "nu"]
    for row in info.get("nu", []):
        lines.append(f"  t={row['t']}: mu={row['mu']} nu={row['nu']} nu~={row['nu_tilde']}")
    _emit(args, info, "\n".join(lines))
    return EXIT_OK


def _fingerprint_text(fp) -> str:
    d = fp.to_dict()
    return "\n".join(f"{k}: {d[k]}" for k in sorted(d))


def cmd_fingerprint(args):
    from .recover import fingerprint

    spec = _spec(args.spec)
    F = _field(args.field, spec.prime)
    fp = fingerprint(spec, F, algebra=not args.no_algebra, seed=args.seed)
    _emit(args, fp.to_dict(), _fingerprint_text(fp))
    return EXIT_OK


def cmd_recover(args):
    from .recover import AmbiguousPair, Fingerprint, InconsistentFingerprint, fingerprint, recover_parameters

    if bool(args.spec) == bool(args.fingerprint):
        raise UsageError("give exactly one of --spec or --fingerprint")
    spec = None
    if args.spec:
        spec = _spec(args.spec)
        fp = fingerprint(spec, _field(args.field, spec.prime), seed=args.seed)
    else:
        try:
            with open(args.fingerprint) as fh:
                fp = Fingerprint.from_json(fh.read())
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read fingerprint: {exc}") from None
    try:
        res = recover_parameters(fp)
    except InconsistentFingerprint as exc:
        _emit(args, {"result": "inconsistent", "detail": str(exc)}, f"inconsistent fingerprint: {exc}")
        return EXIT_MISMATCH
    if isinstance(res, AmbiguousPair):
        payload = {"result": "ambiguous", "q_form": format_spec(res.q_form), "r_form": format_spec(res.r_form)}
        text = str(res)
    else:
        payload = {"result": "spec", "spec": format_spec(res)}
        text = format_spec(res)
    if spec is not None:
        payload["input"] = format_spec(spec)
        payload["round_trip"] = res == spec
        text += f"\nround trip: {'ok' if res == spec else 'MISMATCH'}"
        _emit(args, payload, text)
        return EXIT_OK if res == spec else EXIT_MISMATCH
    _emit(args, payload, text)
    return EXIT_OK


def cmd_verdict(args):
    from .recover import mip_verdict

    a, b = _spec(args.a), _spec(args.b)
    F = _field(args.field, a.prime)
    if F.p != a.prime or F.p != b.prime:
        raise UsageError("field characteristic must match both groups")
    v = mip_verdict(a, b, F, use_varieties=not args.no_varieties, seed=args.seed)
    payload = {"a": format_spec(a), "b": format_spec(b), "field": F.q, "verdict": type(v).__name__}
    if hasattr(v, "invariant"):
        payload["invariant"] = v.invariant
    detail = getattr(v, "detail", "") or getattr(v, "reason", "")
    if detail:
        payload["detail"] = detail
    _emit(args, payload, str(v) + (f"  [{detail}]" if detail else ""))
    return EXIT_OK


def cmd_count_varieties(args):
    from .varieties import BudgetExceeded, brute_count, strat_count

    F = _field(args.q)
    if F.p != 2:
        raise UsageError("--q must be a power of two")
    if args.method == "strat":
        n = strat_count(F, args.r, args.pair)
    else:
        try:
            n = brute_count(F, args.r, args.pair, workers=args.threads)
        except BudgetExceeded as exc:
            raise UsageError(f"bound exceeded: {exc}") from None
    _emit(args, {"q": F.q, "r": args.r, "pair": args.pair, "method": args.method, "count": n},
          f"|V({'f' if args.pair == 'fh' else 'g'}_{args.r},h_{args.r})| over GF({F.q}) = {n}")
    return EXIT_OK


def cmd_table1(args):
    from .varieties import format_table1, table1

    rows = table1(brute=args.brute, workers=args.threads)
    ok = all(r.ok for r in rows)
    payload = {
        "ok": ok,
        "rows": [
            {"q": r.q, "r": r.r, "fh": r.fh, "gh": r.gh, "expected": list(r.expected),
             "brute": None if r.brute is None else list(r.brute), "ok": r.ok}
            for r in rows
        ],
    }
    if args.csv and not args.json:
        print(format_table1(rows, csv=True), end="")
    else:
        _emit(args, payload, format_table1(rows) + ("" if ok else "\nMISMATCH against expected values"))
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_arf(args):
    from .quadform import arf, format_form, parse_form

    if bool(args.spec) == bool(args.form):
        raise UsageError("give exactly one of --spec or --form")
    if args.form:
        F = _field(args.field or 2)
        try:
            B = parse_form(F, args.form)
        except ValueError as exc:
            raise UsageError(f"malformed form: {exc}") from None
        source = "literal"
    else:
        from .groupalgebra import lambda_quadratic_form
        from .pgroup import make_group

        spec = _spec(args.spec)
        F = _field(args.field, 2)
        if F.p != 2 or spec.prime != 2:
            raise UsageError("the Arf discriminator works in characteristic 2")
        try:
            B = lambda_quadratic_form(make_group(spec), F, seed=args.seed)
        except SpecError as exc:
            raise UsageError(f"no quadratic form for this group: {exc}") from None
        source = format_spec(spec)
    res = arf(B)
    from .finitefield import has_cube_root_of_unity

    discriminates = not has_cube_root_of_unity(F)
    payload = {
        "source": source,
        "field": F.q,
        "form": format_form(B),
        "arf_value": res.value,
        "arf_class": res.class_bit,
        "radical_dim": res.radical_dim,
        "class_separates_forms": discriminates,
    }
    if args.spec:
        payload["predicted_form"] = "R" if res.class_bit else "Q"
    text = [f"form: {format_form(B)}", f"Arf invariant: {res.value}  class: {res.class_bit}"]
    if args.spec:
        verdict = ("R-form" if res.class_bit else "Q-form") if discriminates else "undetermined (X^2+X+1 splits)"
        text.append(f"type: {verdict}")
    _emit(args, payload, "\n".join(text))
    return EXIT_OK


def cmd_verify_lemma(args):
    from .lemmas import LEMMAS, verify_lemma

    if args.name not in LEMMAS:
        raise UsageError(f"unknown lemma {args.name!r}; choose from {', '.join(LEMMAS)}")
    spec = _spec(args.spec) if args.spec else None
    rep = verify_lemma(args.name, spec, args.field, seed=args.seed, deep=args.deep)
    lines = [f"{'PASS' if rep.passed else 'FAIL'} {rep.name}: {rep.title}"]
    for c in rep.cases:
        extra = ", ".join(f"{k}={v}" for k, v in c.items() if k not in ("case", "failures"))
        lines.append(f"  {c['case']}: failures={c['failures']}" + (f" ({extra})" if extra else ""))
    if not rep.cases:
        lines.append("  no applicable cases")
    _emit(args, rep.to_dict(), "\n".join(lines))
    return EXIT_OK if rep.passed else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--threads", type=int, default=1, help="worker processes for counting")
    common.add_argument("--deep", action="store_true", help="larger batteries and groups")

    ap = argparse.ArgumentParser(prog="cyclic-mip", description=__doc__.splitlines()[0], parents=[common])
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("group-info", parents=[common], help="structure invariants of a group")
    p.add_argument("--spec", required=True)
    p.set_defaults(fn=cmd_group_info)

    p = sub.add_parser("fingerprint", parents=[common], help="invariant fingerprint")
    p.add_argument("--spec", required=True)
    p.add_argument("--field", type=int)
    p.add_argument("--no-algebra", action="store_true", help="formula values for algebra-side entries")
    p.set_defaults(fn=cmd_fingerprint)

    p = sub.add_parser("recover", parents=[common], help="parameters from a fingerprint")
    p.add_argument("--spec")
    p.add_argument("--fingerprint", help="fingerprint JSON file")
    p.add_argument("--field", type=int)
    p.set_defaults(fn=cmd_recover)

    p = sub.add_parser("verdict", parents=[common], help="compare two groups")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--field", type=int)
    p.add_argument("--no-varieties", action="store_true")
    p.set_defaults(fn=cmd_verdict)

    p = sub.add_parser("count-varieties", parents=[common], help="|V(f_r,h_r)| or |V(g_r,h_r)|")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--pair", choices=("fh", "gh"), default="fh")
    p.add_argument("--method", choices=("strat", "brute"), default="strat")
    p.set_defaults(fn=cmd_count_varieties)

    p = sub.add_parser("table1", parents=[common], help="variety counts for q = 4, 16")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--brute", action="store_true", help="cross-check by brute force where affordable")
    p.set_defaults(fn=cmd_table1)

    p = sub.add_parser("arf-discriminate", parents=[common], help="Arf class of the power-map form")
    p.add_argument("--spec")
    p.add_argument("--form", help="form literal, e.g. 'x0^2+y0^2+sum{x0*y0,x1*y1}'")
    p.add_argument("--field", type=int)
    p.set_defaults(fn=cmd_arf)

    p = sub.add_parser("verify-lemma", parents=[common], help="run a property suite")
    p.add_argument("--name", required=True)
    p.add_argument("--spec")
    p.add_argument("--field", type=int)
    p.set_defaults(fn=cmd_verify_lemma)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BoundExceeded as exc:
        print(f"error: bound exceeded: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
