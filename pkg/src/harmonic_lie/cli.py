"""Command-line front end: ``harmonic-lie {check,decompose,reproduce,probe,catalog}``.

Every command prints one JSON report on stdout.  Exit status: 0 pass,
1 failed verification (or a probe candidate), 2 malformed input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import catalog, geometry as geo, linalg, probe, structure as st
from .geometry import GeometryError, MetricLieAlgebra
from .lie_algebra import (
    LieAlgebraError,
    algebra_from_dict,
    algebra_to_dict,
    format_scalar,
    is_ideal,
    jacobi_defect,
    killing_form,
    matrix_from_json,
    matrix_to_json,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# JSON helpers


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, Fraction):
        return format_scalar(x)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


def dumps(obj) -> str:
    # json writes floats with repr, the shortest string that round-trips
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True)


def _read_json(path: str) -> tuple[dict, bytes]:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
        return json.loads(raw), raw
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


class _Inputs:
    """Collects input bytes for the report digest."""

    def __init__(self):
        self.h = hashlib.sha256()

    def add(self, label: str, data: bytes):
        self.h.update(label.encode() + b"\0" + data + b"\0")

    @property
    def digest(self) -> str:
        return "sha256:" + self.h.hexdigest()


def _load_inputs(args, inputs: _Inputs) -> tuple[MetricLieAlgebra, np.ndarray | None]:
    data, raw = _read_json(args.algebra)
    inputs.add("algebra", raw)
    alg = algebra_from_dict(data)
    gram = tensor = None
    exact = alg.exact
    if getattr(args, "metric", None):
        mdata, mraw = _read_json(args.metric)
        inputs.add("metric", mraw)
        if not isinstance(mdata, dict) or "gram" not in mdata:
            raise InputError("metric JSON needs a 'gram' entry")
        mexact = mdata.get("field", "rational" if exact else "float") == "rational"
        gram = matrix_from_json(mdata["gram"], mexact)
        exact = exact and mexact
    if getattr(args, "tensor", None):
        tdata, traw = _read_json(args.tensor)
        inputs.add("tensor", traw)
        if not isinstance(tdata, dict) or "matrix" not in tdata:
            raise InputError("operator JSON needs a 'matrix' entry")
        texact = tdata.get("field", "rational" if exact else "float") == "rational"
        tensor = matrix_from_json(tdata["matrix"], texact)
        exact = exact and texact
    if not exact:
        alg = alg.to_float()
        gram = None if gram is None else linalg.to_float(gram)
        tensor = None if tensor is None else linalg.to_float(tensor)
    if gram is None:
        gram = linalg.eye(alg.dim, alg.exact)
    if gram.shape != (alg.dim, alg.dim) or (tensor is not None and tensor.shape != gram.shape):
        raise InputError("metric/operator size does not match the algebra dimension")
    return MetricLieAlgebra(alg, gram), tensor


def _report(args, argv, inputs: _Inputs, results: dict, tolerances: dict, passed: bool) -> dict:
    return {
        "command": ["harmonic-lie"] + list(argv),
        "input_digest": inputs.digest,
        "results": results,
        "tolerances": tolerances,
        "pass": bool(passed),
    }


def _fieldname(exact: bool) -> str:
    return "rational" if exact else "float"


def _is_zero(x, exact: bool, tol: float) -> bool:
    return x == 0 if exact else float(x) <= tol


# ---------------------------------------------------------------------------
# commands


def _decompose_any(m: MetricLieAlgebra, t, tol_eig: float):
    """Exact decomposition when the spectrum is rational, float otherwise."""
    try:
        return m, st.decompose(m, t, tol_eig), None
    except st.DecompositionError as exc:
        if not m.exact:
            raise
        mf = m.to_float()
        tf = linalg.to_float(t.matrix if isinstance(t, geo.SymmetricOperator) else t)
        return mf, st.decompose(mf, tf, tol_eig), str(exc)


def cmd_check(args, argv):
    inputs = _Inputs()
    m, tensor = _load_inputs(args, inputs)
    exact = m.exact
    tol = args.tol
    t = geo.ricci(m) if tensor is None else geo.SymmetricOperator(tensor, m)
    jac = jacobi_defect(m.alg)
    cod = geo.codazzi_defect(m, t)
    nab2 = geo.nabla_norm_sq(m, t)
    div = geo.curvature_divergence_norm(m)
    m_dec, dec, note = _decompose_any(m, t, args.tol_eig)
    rep = st.verify_structure(m_dec, dec, tol)
    results = {
        "field": _fieldname(exact),
        "tensor": "ricci" if tensor is None else "given",
        "jacobi_defect": jac,
        "codazzi_defect": {"norm": cod.norm, "norm_sq": cod.norm_sq, "max_abs": cod.max_abs},
        "nabla_norm": geo._sqrt(nab2),
        "nabla_norm_sq": nab2,
        "curvature_divergence_norm": div,
        "decomposition": dec.to_dict(),
        "structure": rep.to_dict(),
    }
    if note:
        results["decomposition_note"] = f"float decomposition used: {note}"
    cod_ok = cod.is_zero if exact else cod.norm <= tol
    passed = _is_zero(jac, exact, tol) and cod_ok and rep.passed
    results["checks"] = {"jacobi": _is_zero(jac, exact, tol), "codazzi": cod_ok, "structure": rep.passed}
    tolerances = {"tol": tol, "tol_eig": args.tol_eig, "exact_zero_tests": exact}
    return _report(args, argv, inputs, results, tolerances, passed)


def cmd_decompose(args, argv):
    inputs = _Inputs()
    m, tensor = _load_inputs(args, inputs)
    t = geo.ricci(m) if tensor is None else geo.SymmetricOperator(tensor, m)
    _, dec, note = _decompose_any(m, t, args.tol_eig)
    results = {"tensor": "ricci" if tensor is None else "given", "decomposition": dec.to_dict()}
    if note:
        results["decomposition_note"] = f"float decomposition used: {note}"
    return _report(args, argv, inputs, results, {"tol_eig": args.tol_eig}, True)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {text!r}") from exc


def reproduce_paper_example(lams, mu) -> tuple[dict, bool]:
    """The five guarantees for the six-dimensional essential Codazzi example, exactly."""
    m, a = catalog.paper_codazzi_example(*lams, mu)
    alg = m.alg
    jac = jacobi_defect(alg)
    cod = geo.codazzi_defect(m, a)
    nab2 = geo.nabla_norm_sq(m, a)
    dec = st.decompose(m, a)
    ideals = [is_ideal(alg, dec.subspace(i)) for i in range(dec.r)]
    kf = killing_form(alg)
    neg_def = linalg.is_positive_definite(-kf)
    witness = st.nonparallel_witness(m, dec)
    checks = {
        "jacobi_zero": jac == 0,
        "codazzi_zero": cod.is_zero,
        "nabla_nonzero": nab2 != 0,
        "no_eigenspace_ideal": not any(ideals),
        "killing_negative_definite": neg_def,
    }
    results = {
        "lambda": list(lams),
        "mu": mu,
        "algebra": algebra_to_dict(alg),
        "operator_diagonal": [a.matrix[i, i] for i in range(6)],
        "jacobi_defect": jac,
        "codazzi_defect_norm_sq": cod.norm_sq,
        "nabla_norm_sq": nab2,
        "nabla_norm": geo._sqrt(nab2),
        "eigenvalues": list(dec.eigenvalues),
        "eigenspace_is_ideal": ideals,
        "killing_form": matrix_to_json(kf),
        "nonparallel_witness": None if witness is None else {
            "eigenspaces": [witness.i, witness.j, witness.k],
            "u": witness.u, "v": witness.v, "w": witness.w, "value": witness.value,
        },
        "checks": checks,
    }
    return results, all(checks.values())


def cmd_reproduce(args, argv):
    inputs = _Inputs()
    inputs.add("arguments", f"{args.lambdas};{args.mu}".encode())
    parts = args.lambdas.split(",")
    if len(parts) != 4:
        raise InputError("--lambda needs four comma-separated values")
    lams = tuple(_rational(x) for x in parts)
    mu = _rational(args.mu)
    results, ok = reproduce_paper_example(lams, mu)
    return _report(args, argv, inputs, results, {"arithmetic": "exact rational"}, ok)


def cmd_probe(args, argv):
    inputs = _Inputs()
    data, raw = _read_json(args.algebra)
    inputs.add("algebra", raw)
    alg = algebra_from_dict(data).to_float()
    cfg = probe.ProbeConfig(
        seed=args.seed,
        restarts=args.restarts,
        max_iters=args.max_iter,
        tol_defect=args.tol_defect,
        tol_parallel=args.tol_parallel,
    )
    res = probe.minimize(alg, cfg)
    results = res.to_dict()
    results["metric_gram"] = probe.grams_from_parameters(res.best_params, alg.dim)
    tolerances = {"tol_defect": cfg.tol_defect, "tol_parallel": cfg.tol_parallel}
    return _report(args, argv, inputs, results, tolerances, res.classification != probe.CANDIDATE)


def cmd_catalog(args, argv):
    inputs = _Inputs()
    if args.action == "list":
        results = {"algebras": [{"name": n, "description": catalog.describe(n)} for n in catalog.NAMES]}
        return _report(args, argv, inputs, results, {}, True)
    if args.name is None:
        raise InputError("catalog build needs an algebra name")
    inputs.add("arguments", f"{args.name};{args.n}".encode())
    alg = catalog.named_algebra(args.name, args.n)
    doc = algebra_to_dict(alg)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dumps(doc) + "\n")
    results = {"name": args.name, "algebra": doc, "written_to": args.out}
    return _report(args, argv, inputs, results, {}, True)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmonic-lie",
        description="Curvature, Codazzi and harmonic-curvature checks for metric Lie algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_inputs(p):
        p.add_argument("algebra", help="Lie algebra JSON file")
        p.add_argument("--metric", help="metric JSON file {'gram': ...} (default: identity)")
        p.add_argument("--tensor", help="operator JSON file {'matrix': ...} (default: Ricci)")
        p.add_argument("--tol-eig", type=float, default=st.TOL_EIG, help="relative eigenvalue clustering gap")

    p = sub.add_parser("check", help="Jacobi, Codazzi, nabla and divergence norms plus structure report")
    add_inputs(p)
    p.add_argument("--tol", type=float, default=st.TOL_STRUCTURE, help="absolute tolerance for float residuals")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("decompose", help="eigenspace decomposition of the operator")
    add_inputs(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("reproduce", help="reproduce a worked example in exact arithmetic")
    p.add_argument("example", choices=["paper-example"])
    p.add_argument("--lambda", dest="lambdas", required=True, help="l1,l2,l3,l4 (rationals, pairwise distinct)")
    p.add_argument("--mu", required=True, help="nonzero rational mu1")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("probe", help="search for harmonic, non-parallel metrics")
    p.add_argument("algebra")
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=400)
    p.add_argument("--tol-defect", type=float, default=1e-9)
    p.add_argument("--tol-parallel", type=float, default=1e-6)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("catalog", help="list or build catalog algebras")
    p.add_argument("action", choices=["list", "build"])
    p.add_argument("name", nargs="?")
    p.add_argument("--n", type=int, default=None, help="dimension for abelian / hyperbolic_solvable")
    p.add_argument("--out", help="write the algebra JSON here")
    p.set_defaults(func=cmd_catalog)
    return parser


def run(argv=None, stdout=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        report = args.func(args, argv)
    except (InputError, LieAlgebraError, GeometryError, st.DecompositionError, ValueError) as exc:
        print(f"harmonic-lie: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    stdout.write(dumps(report) + "\n")
    return EXIT_OK if report["pass"] else EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
