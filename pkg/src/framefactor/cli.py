"""Command-line interface: ``framefactor <command> ...``.

Exit status is 0 on success, 2 for invalid input and 3 when a numerical
check fails (including a bank that does not verify).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from importlib import resources
from pathlib import Path

from . import framelet
from .errors import FrameFactorError, NumericalError, ValidationError
from .factorizer import general_factor
from .laurent import LaurentPoly, ToleranceConfig
from .lpmatrix import LPMatrix


def fixture_names() -> list[str]:
    root = resources.files("framefactor") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_fixture(name: str) -> dict:
    root = resources.files("framefactor") / "fixtures"
    f = root / f"{name}.json"
    if not f.is_file():
        raise ValidationError(f"unknown fixture {name!r}")
    return json.loads(f.read_text())


def _load(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        stem = p.name[:-5] if p.name.endswith(".json") else p.name
        if stem in fixture_names():
            return load_fixture(stem)
        raise ValidationError(f"no such file: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON in {path}: {exc}") from None


def _bank_obj(obj: dict) -> dict:
    obj = obj.get("bank", obj)
    if "a" not in obj:
        raise ValidationError("input has no low-pass filter 'a'")
    return obj


def _inputs(obj: dict):
    b = _bank_obj(obj)
    try:
        a = LaurentPoly.from_json(b["a"])
        th = LaurentPoly.from_json(b["theta"]) if "theta" in b else LaurentPoly([1.0])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed filter: {exc}") from None
    return a, th, int(b.get("dilation", 2)), int(b.get("nb", 1))


def _write_atomic(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(obj, out: str | None):
    text = json.dumps(obj, indent=1) + "\n"
    if out:
        _write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _say(args, line: str):
    # keep stdout clean for JSON when no output file is given
    print(line, file=sys.stdout if getattr(args, "out", None) else sys.stderr)


def _tol(args) -> ToleranceConfig:
    kw = {}
    if args.eps_zero is not None:
        kw["eps_zero"] = args.eps_zero
    if args.eps_residual is not None:
        kw["eps_residual"] = args.eps_residual
    if args.grid is not None:
        kw["grid_size"] = args.grid
    try:
        return ToleranceConfig.from_env(**kw)
    except (TypeError, ValueError) as exc:
        raise ValidationError(str(exc)) from None


def _signs(eps) -> str:
    return ",".join("+" if e > 0 else "-" for e in eps)


def cmd_construct(args) -> int:
    tol = _tol(args)
    a, th, M, nb = _inputs(_load(args.input))
    if args.nb is not None:
        nb = args.nb
    bank = framelet.construct(a, th, nb, M, args.m1, args.m2, tol)
    rep = framelet.verify(bank, tol)
    _emit(bank.to_json(), args.out)
    _say(args, f"s={bank.s} eps={_signs(bank.eps)} residual={rep['residual']:.3e} vmo={rep['vmo']}")
    return 0


def cmd_verify(args) -> int:
    tol = _tol(args)
    bank = framelet.FilterBank.from_json(_bank_obj(_load(args.input)))
    rep = framelet.verify(bank, tol)
    status = "PASS" if rep["passed"] else "FAIL"
    print(f"{status} residual={rep['residual']:.3e} vmo={rep['vmo']} min_vmo={rep['min_vmo']}")
    return 0 if rep["passed"] else NumericalError.exit_code


def cmd_factorize(args) -> int:
    tol = _tol(args)
    obj = _load(args.input)
    A = LPMatrix.from_json(obj.get("matrix", obj))
    res = general_factor(A, args.m1, args.m2, tol)
    _emit(res.to_json(), args.out)
    _say(args, f"m_plus={res.m_plus} m_minus={res.m_minus} residual={res.residual:.3e}")
    return 0


def cmd_classify(args) -> int:
    tol = _tol(args)
    a, th, M, _ = _inputs(_load(args.input))
    if M != 2:
        raise ValidationError("classification is defined for dilation 2")
    c = framelet.classify(a, th, tol)
    print(f"case={c.label} name={c.case_name} s_plus={c.s_plus} s_minus={c.s_minus}")
    return 0


def cmd_smoothness(args) -> int:
    tol = _tol(args)
    a, _, M, _ = _inputs(_load(args.input))
    sm = framelet.smoothness_sm(a, M, restrict_cycles=not args.literal, tol=tol)
    print(f"sm={sm:.6f}")
    return 0


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_render(args) -> int:
    tol = _tol(args)
    bank = framelet.FilterBank.from_json(_bank_obj(_load(args.input)))
    smp = framelet.cascade_sample(bank, args.level, tol)
    head = ["x", "phi"] + [f"psi{i + 1}" for i in range(smp.psi.shape[0])]
    rows = ([f"{x:.10g}", f"{p.real:.12g}"] + [f"{q.real:.12g}" for q in smp.psi[:, k]]
            for k, (x, p) in enumerate(zip(smp.grid, smp.phi)))
    f1 = f"{args.out_prefix}_functions.csv"
    f2 = f"{args.out_prefix}_det.csv"
    _write_atomic(f1, _csv(head, rows))
    _write_atomic(f2, _csv(["xi", "detM"], ([f"{x:.10g}", f"{d:.12g}"] for x, d in zip(smp.xi, smp.det_curve))))
    print(f"wrote {f1} {f2}")
    return 0


def cmd_fixtures(args) -> int:
    names = fixture_names()
    if args.dump:
        for n in names:
            _write_atomic(os.path.join(args.dump, f"{n}.json"), json.dumps(load_fixture(n), indent=1) + "\n")
    for n in names:
        print(f"{n}\t{load_fixture(n).get('note', '')}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="framefactor", description="Quasi-tight framelet filter banks by "
                                "generalized spectral factorization.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps-zero", type=float)
    common.add_argument("--eps-residual", type=float)
    common.add_argument("--grid", type=int, help="number of circle samples (>= 64)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="build a bank with minimal generators")
    c.add_argument("input")
    c.add_argument("--nb", type=int)
    c.add_argument("--m1", type=int)
    c.add_argument("--m2", type=int)
    c.add_argument("--out")
    c.set_defaults(func=cmd_construct)

    c = sub.add_parser("verify", parents=[common], help="check a bank against its identity")
    c.add_argument("input")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("factorize", parents=[common], help="factor a Hermitian matrix A = U D U*")
    c.add_argument("input")
    c.add_argument("--m1", type=int)
    c.add_argument("--m2", type=int)
    c.add_argument("--out")
    c.set_defaults(func=cmd_factorize)

    c = sub.add_parser("classify", parents=[common], help="dilation-2 case table")
    c.add_argument("input")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("smoothness", parents=[common], help="Sobolev smoothness exponent of a")
    c.add_argument("input")
    c.add_argument("--literal", action="store_true", help="spectral radius of the full transition matrix")
    c.set_defaults(func=cmd_smoothness)

    c = sub.add_parser("render", parents=[common], help="cascade samples and det curve as CSV")
    c.add_argument("input")
    c.add_argument("--level", type=int, default=8)
    c.add_argument("--out-prefix", default="framelet")
    c.set_defaults(func=cmd_render)

    c = sub.add_parser("fixtures", help="list bundled examples")
    c.add_argument("--dump", metavar="DIR", help="copy the fixture files into DIR")
    c.set_defaults(func=cmd_fixtures)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FrameFactorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ValidationError.exit_code


if __name__ == "__main__":
    sys.exit(main())
