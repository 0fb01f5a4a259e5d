"""Command line front end.

    curvcert decompose FILE
    curvcert pontryagin FILE [--k K ...] [--alpha 1,1 ...]
    curvcert petrov FILE [--project]
    curvcert em FILE [--axis 1,0,0,0]
    curvcert certify (FILE | --gen) --alpha 1,1 [--axis ...]
    curvcert topology "T4#T4#CP2#CP2"
    curvcert selfcheck [--seed 42] [--sizes default|small]
    curvcert gen NAME [...]

Exit codes: 0 ok, 1 I/O or parse error, 2 failed precondition, 3 certificate
violation (an exact nonzero where a theorem demands zero).
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from fractions import Fraction

from . import battery
from .curvature import CurvatureTensor, decompose, full_contraction, weyl
from .errors import CertificateViolation, CurvcertError, SpecParseError
from .exterior import FLOAT64, MODES, RATIONAL, ScalarSpace
from .generators import (
    TopologyExpr,
    chi_sigma,
    constant_curvature,
    fubini_study_cp2,
    minkowski_fs_block,
    p1_integral,
    random_curvature,
    random_parity,
    verdict,
    weyl_of_petrov_type,
)
from .petrov import DEFAULT_TOLERANCE, PetrovReport, classify, pontryagin_vanishing_for_type
from .pontryagin import PontryaginForm, pontryagin_form, pontryagin_product
from .report import dump, form_terms, matrix_rows, parse_spec, render, spec_from_tensor, tensor_from_spec
from .symmetry import EVEN, ODD, commutation_check, em_split, is_PE, is_PM, reflection, vanishing_certificate

EXIT_OK, EXIT_IO, EXIT_PRECONDITION, EXIT_VIOLATION = 0, 1, 2, 3


class CommandFailed(Exception):
    def __init__(self, code: int, message: str, report: dict | None = None):
        super().__init__(message)
        self.code = code
        self.report = report


# --- argument helpers ---------------------------------------------------------------

def parse_rationals(text: str) -> list[Fraction]:
    try:
        return [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}") from None


def parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def parse_complex_list(text: str) -> list[tuple[Fraction, Fraction]]:
    """"2,-1:1" -> [(2, 0), (-1, 1)]; each item is re or re:im."""
    out = []
    try:
        for item in text.split(","):
            re, _, im = item.strip().partition(":")
            out.append((Fraction(re), Fraction(im or 0)))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected items re or re:im, got {text!r}") from None
    return out


def load_tensor(path: str, mode: str | None) -> tuple[CurvatureTensor, dict]:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise CommandFailed(EXIT_IO, f"{path}: {exc.strerror}") from None
    spec = parse_spec(text)
    C = tensor_from_spec(spec, mode)
    return C, spec_from_tensor(C).to_dict()


def default_axis(space: ScalarSpace) -> list[int]:
    """First timelike basis vector, else e_1."""
    i = space.signs.index(-1) if -1 in space.signs else 0
    return [1 if j == i else 0 for j in range(space.n)]


# --- report pieces --------------------------------------------------------------------

def pontryagin_dict(form: PontryaginForm) -> dict:
    out = {
        "alpha": list(form.alpha),
        "degree": form.degree,
        "two_pi_power": form.two_pi_power,
        "degenerate": form.degenerate,
        "zero": form.is_zero(),
        "top_coefficient": render(form.top_coefficient()) if form.degree == form.space.n else None,
        "reduced": [] if form.reduced is None else form_terms(form.reduced),
        "normalization": f"coefficients are (2 pi)^{form.two_pi_power} times the form",
    }
    return out


def petrov_dict(rep: PetrovReport) -> dict:
    return {
        "type": rep.type,
        "eigenvalues": [{"re": render(e[0]), "im": render(e[1]), "multiplicity": m} for e, m in zip(rep.eigenvalues, rep.multiplicities)],
        "jordan_profile": [list(r) for r in rep.jordan_profile],
        "subtype": rep.subtype,
        "all_real": rep.is_real,
        "all_imaginary": rep.is_imaginary,
        "exact": rep.exact,
        "tolerance": rep.tolerance,
    }


def certificate_dict(cert) -> dict:
    return {
        "dimension": cert.dimension,
        "alpha": list(cert.alpha),
        "parity": cert.parity,
        "theta": matrix_rows(cert.theta.matrix),
        "preconditions": cert.preconditions,
        "top_degree_action": render(cert.top_action),
        "witness": render(cert.witness),
        "all_coefficients_zero": cert.all_coefficients_zero,
        "valid": cert.valid,
        "route": cert.route,
    }


def tensor_terms(C: CurvatureTensor) -> list[dict]:
    return spec_from_tensor(C).to_dict()["components"]


# --- commands ---------------------------------------------------------------------------

def cmd_decompose(args) -> dict:
    C, echo = load_tensor(args.file, args.mode)
    dec = decompose(C)
    W = dec.weyl
    ric = dec.ric0.matrix + C.space.metric() * (dec.scalar / C.n)
    return {
        "command": "decompose",
        "input": echo,
        "ricci": matrix_rows(ric),
        "scalar": render(dec.scalar),
        "ricci_tracefree": matrix_rows(dec.ric0.matrix),
        "schouten": matrix_rows(dec.schouten().matrix),
        "weyl": {"components": tensor_terms(W), "norm_squared": render(full_contraction(W, W)), "zero": W.is_zero()},
        "reconstruction_exact": dec.reconstruct().allclose(C),
    }


def cmd_pontryagin(args) -> dict:
    C, echo = load_tensor(args.file, args.mode)
    n = C.n
    ks = args.k or [k for k in range(1, max(1, n // 4) + 1)]
    out = {"command": "pontryagin", "input": echo, "forms": [], "products": []}
    for k in ks:
        det = pontryagin_form(C, k, "det")
        entry = pontryagin_dict(det)
        if args.route == "both":
            agree = det == pontryagin_form(C, k, "op")
            entry["routes_agree"] = agree
            if not agree:
                raise CommandFailed(EXIT_VIOLATION, f"det and op routes disagree for k={k}", out)
        out["forms"].append(entry)
    for alpha in args.alpha or []:
        out["products"].append(pontryagin_dict(pontryagin_product(C, alpha)))
    return out


def cmd_petrov(args) -> dict:
    C, echo = load_tensor(args.file, args.mode)
    W = weyl(C) if args.project else C
    rep = classify(W, args.tolerance or DEFAULT_TOLERANCE)
    out = {"command": "petrov", "input": echo, "projected_to_weyl": args.project, "petrov": petrov_dict(rep)}
    try:
        res = pontryagin_vanishing_for_type(rep, W)
    except CertificateViolation as exc:
        out["theorem"] = {"applicable": True, "vanishes": False, "witness": render(exc.certificate.witness)}
        raise CommandFailed(EXIT_VIOLATION, "varpi_1 nonzero for a type covered by the vanishing theorem", out) from None
    out["theorem"] = {"applicable": res.applicable, "vanishes": res.vanishes, "witness": render(res.witness)}
    return out


def cmd_em(args) -> dict:
    C, echo = load_tensor(args.file, args.mode)
    u = args.axis if args.axis is not None else default_axis(C.space)
    if len(u) != C.n:
        raise CommandFailed(EXIT_PRECONDITION, f"axis needs {C.n} components")
    split = em_split(C, u)
    pe, pm = is_PE(C, u), is_PM(C, u)
    return {
        "command": "em",
        "input": echo,
        "axis": render(list(split.axis)),
        "electric": tensor_terms(split.electric),
        "magnetic": tensor_terms(split.magnetic),
        "purely_electric": pe.holds,
        "purely_magnetic": pm.holds,
        "degenerate": pe.degenerate,
        "commutation_sign": commutation_check(C, split.theta),
    }


def _gen_space(args) -> ScalarSpace:
    mode = args.mode or RATIONAL
    if args.signs:
        return ScalarSpace(args.signs, mode=mode)
    n = args.n or 4
    return ScalarSpace.lorentzian(n, mode=mode)


def _certify_instance(job):
    signs, mode, axis, par, alpha, seed = job
    space = ScalarSpace(signs, mode=mode)
    theta = reflection(space, axis)
    C = random_parity(space, theta, par, seed)
    try:
        cert = vanishing_certificate(C, theta, alpha)
    except CertificateViolation as exc:
        return seed, par, False, certificate_dict(exc.certificate)
    return seed, par, True, certificate_dict(cert)


def cmd_certify(args) -> dict:
    alpha = args.alpha or ()
    if not alpha:
        raise CommandFailed(EXIT_PRECONDITION, "--alpha is required")
    out = {"command": "certify", "alpha": list(alpha), "certificates": []}
    if args.gen:
        space = _gen_space(args)
        axis = args.axis if args.axis is not None else default_axis(space)
        pars = [EVEN, ODD] if args.parity == "both" else [args.parity]
        jobs = [(space.signs, space.mode, list(axis), p, alpha, args.seed + i) for p in pars for i in range(args.count)]
        out["generator"] = {"signs": list(space.signs), "axis": render(list(axis)), "parities": pars, "count": args.count, "seed": args.seed}
        results = battery._map(_certify_instance, jobs, args.jobs)
        bad = 0
        for seed, par, ok, cert in results:
            cert["seed"] = seed
            out["certificates"].append(cert)
            bad += not ok
        if bad:
            raise CommandFailed(EXIT_VIOLATION, f"{bad} certificate(s) with nonzero witness", out)
        return out
    if not args.file:
        raise CommandFailed(EXIT_PRECONDITION, "give a tensor file or --gen")
    C, echo = load_tensor(args.file, args.mode)
    out["input"] = echo
    u = args.axis if args.axis is not None else default_axis(C.space)
    theta = reflection(C.space, u)
    try:
        cert = vanishing_certificate(C, theta, alpha)
    except CertificateViolation as exc:
        out["certificates"].append(certificate_dict(exc.certificate))
        raise CommandFailed(EXIT_VIOLATION, str(exc), out) from None
    out["certificates"].append(certificate_dict(cert))
    return out


def cmd_topology(args) -> dict:
    expr = TopologyExpr.parse(args.expr)
    chi, sig = chi_sigma(expr)
    return {
        "command": "topology",
        "expression": str(expr),
        "summands": [{"block": name, "chi": c, "sigma": s} for name, c, s in expr.summands],
        "chi": chi,
        "sigma": sig,
        "p1_integral": p1_integral(sig),
        "verdict": verdict(chi, sig),
    }


SIZES = {
    "default": battery.BatteryConfig(),
    "small": battery.BatteryConfig(route_count=12, cert_n4=10, cert_n8=2, structural_count=10, minor_count=5,
                                   expansion_count=1, pairing_count=1),
}


def cmd_selfcheck(args) -> dict:
    cfg = replace(SIZES[args.sizes], seed=args.seed, jobs=args.jobs)
    t0 = time.perf_counter()
    results = battery.run_all(cfg)
    out = {
        "command": "selfcheck",
        "seed": args.seed,
        "sizes": args.sizes,
        "criteria": [
            {"number": r.number, "name": r.name, "passed": r.passed, "instances": r.instances, "detail": r.detail,
             "failures": [repr(f) for f in r.failures[:5]]}
            for r in results
        ],
        "passed": all(r.passed for r in results),
    }
    if args.timing:
        out["seconds"] = round(time.perf_counter() - t0, 3)
        for entry, r in zip(out["criteria"], results):
            entry["seconds"] = round(r.seconds, 3)
    if not out["passed"]:
        raise CommandFailed(EXIT_VIOLATION, "self-check failed", out)
    return out


GENERATORS = ("constant-curvature", "random", "random-parity", "fubini-study", "minkowski-fs", "petrov")


def cmd_gen(args) -> dict:
    name = args.name
    if name == "constant-curvature":
        C = constant_curvature(_gen_space(args), args.kappa)
    elif name == "random":
        C = random_curvature(_gen_space(args), args.seed)
    elif name == "random-parity":
        space = _gen_space(args)
        axis = args.axis if args.axis is not None else default_axis(space)
        par = EVEN if args.parity == "both" else args.parity
        C = random_parity(space, reflection(space, axis), par, args.seed)
    elif name == "fubini-study":
        C = fubini_study_cp2(args.mode or RATIONAL)
    elif name == "minkowski-fs":
        C = minkowski_fs_block(args.mode or RATIONAL)
    elif name == "petrov":
        data = args.eigen
        if data is not None and args.type.upper() in ("D", "II"):
            data = data[0]
        space = ScalarSpace.lorentzian(4, mode=args.mode or RATIONAL)
        try:
            C = weyl_of_petrov_type(args.type, data, space)
        except ValueError as exc:
            if isinstance(exc, CurvcertError):
                raise
            raise CommandFailed(EXIT_PRECONDITION, str(exc)) from None
    else:
        raise CommandFailed(EXIT_PRECONDITION, f"unknown generator {name!r}")
    return spec_from_tensor(C).to_dict()


COMMANDS = {
    "decompose": cmd_decompose,
    "pontryagin": cmd_pontryagin,
    "petrov": cmd_petrov,
    "em": cmd_em,
    "certify": cmd_certify,
    "topology": cmd_topology,
    "selfcheck": cmd_selfcheck,
    "gen": cmd_gen,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=MODES, default=None, help="scalar mode (default: the file's, else rational)")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--tolerance", type=float, default=None, help="clustering tolerance, float mode only")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for batteries")

    parser = argparse.ArgumentParser(prog="curvcert", description="Exact Pontryagin-form certificates for algebraic curvature tensors.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common], help="Ricci/Schouten/Weyl decomposition")
    p.add_argument("file")

    p = sub.add_parser("pontryagin", parents=[common], help="Pontryagin forms and products")
    p.add_argument("file")
    p.add_argument("--k", type=int, action="append", help="form index (repeatable)")
    p.add_argument("--alpha", type=parse_ints, action="append", help="product multi-index, e.g. 1,1 (repeatable)")
    p.add_argument("--route", choices=("det", "both"), default="both")

    p = sub.add_parser("petrov", parents=[common], help="Petrov type of a 4D Lorentzian Weyl tensor")
    p.add_argument("file")
    p.add_argument("--project", action="store_true", help="classify the Weyl part of the input")

    p = sub.add_parser("em", parents=[common], help="electric/magnetic split along an axis")
    p.add_argument("file")
    p.add_argument("--axis", type=parse_rationals, default=None)

    p = sub.add_parser("certify", parents=[common], help="vanishing certificates for theta-even/odd tensors")
    p.add_argument("file", nargs="?")
    p.add_argument("--alpha", type=parse_ints, required=True)
    p.add_argument("--axis", type=parse_rationals, default=None)
    p.add_argument("--gen", action="store_true", help="certify random parity tensors instead of a file")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--signs", type=parse_ints, default=None)
    p.add_argument("--parity", choices=(EVEN, ODD, "both"), default="both")
    p.add_argument("--count", type=int, default=10)

    p = sub.add_parser("topology", parents=[common], help="chi, sigma and the PE/PM verdict for a connected sum")
    p.add_argument("expr")

    p = sub.add_parser("selfcheck", parents=[common], help="run the acceptance battery")
    p.add_argument("--sizes", choices=sorted(SIZES), default="default")
    p.add_argument("--timing", action="store_true", help="include wall times (breaks bit-exact output)")

    p = sub.add_parser("gen", parents=[common], help="emit a generated tensor as a spec document")
    p.add_argument("name", choices=GENERATORS)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--signs", type=parse_ints, default=None)
    p.add_argument("--kappa", type=Fraction, default=Fraction(1))
    p.add_argument("--axis", type=parse_rationals, default=None)
    p.add_argument("--parity", choices=(EVEN, ODD, "both"), default=EVEN)
    p.add_argument("--type", default="D", help="Petrov type O, I, D, II, N or III")
    p.add_argument("--eigen", type=parse_complex_list, default=None, help="eigenvalue data, items re or re:im")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tolerance is not None and args.mode != FLOAT64:
        print("curvcert: --tolerance only applies in float64 mode", file=sys.stderr)
    code = EXIT_OK
    try:
        report = COMMANDS[args.command](args)
    except CommandFailed as exc:
        print(f"curvcert: {exc}", file=sys.stderr)
        code, report = exc.code, exc.report
    except SpecParseError as exc:
        print(f"curvcert: parse error: {exc}", file=sys.stderr)
        code, report = EXIT_IO, None
    except CertificateViolation as exc:
        print(f"curvcert: certificate violation: {exc}", file=sys.stderr)
        code, report = EXIT_VIOLATION, None
    except CurvcertError as exc:
        print(f"curvcert: precondition failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        code, report = EXIT_PRECONDITION, None
    if report is None:
        return code
    fmt = "structured" if args.command == "gen" else args.format
    text = dump(report, fmt)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"curvcert: {args.out}: {exc.strerror}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
