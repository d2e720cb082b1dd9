"""Command-line driver: matrix dumps, batch verification, determinants, series.

Exit codes: 0 all checks pass, 1 a verification check failed, 2 configuration
error, 3 non-generic parameters, 4 evaluation point outside the domain.
Reports are JSON with sorted keys, so identical configurations (including the
seed) produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from gmpy2 import mpq

from . import __version__
from .combinatorics import SubsetIndex, basis_order, subset_product_identities
from .determinant import det_bruteforce, det_decomposition_check, det_lambda0_closed
from .intersection import (
    d_self_intersection,
    h_matrix,
    ih_delta_D,
    ih_delta_D_raw,
    lambda0_matrix,
)
from .matrices import CycleVector, RepMatrix
from .monodromy import (
    basis_change_matrix,
    m_i_matrix,
    m_prime_matrix,
    n0_column_entry,
    verify_relations,
)
from .scalars import (
    DEFAULT_PRECISION,
    FieldScalar,
    GenericityError,
    ParamPoint,
    SeriesParams,
    check_genericity,
    sample_generic,
    param_exponentials,
)
from .series import DomainError, ec_residual, f_I_eval, fc_eval, in_convergence_domain

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NON_GENERIC = 3
EXIT_DOMAIN = 4

PRECISION_ENV = "FC_MONODROMY_PRECISION"


class ConfigError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fc-monodromy",
        description=__doc__.splitlines()[0],
    )
    parser.add_argument("--mode", required=True,
                        choices=["matrices", "verify", "det", "series", "sample-params"])
    parser.add_argument("--m", type=int, default=None, help="number of variables")
    parser.add_argument("--params", type=Path, default=None,
                        help="JSON parameter file")
    parser.add_argument("--seed", type=int, default=0, help="base sampling seed")
    parser.add_argument("--samples", type=int, default=1,
                        help="number of seeded parameter points")
    parser.add_argument("--precision", type=int, default=None,
                        help=f"float precision in bits (default ${PRECISION_ENV} or "
                             f"{DEFAULT_PRECISION})")
    parser.add_argument("--order", type=int, default=8, help="series truncation order")
    parser.add_argument("--max-numerator", type=int, default=9,
                        help="numerator bound for sampled rational parameters")
    parser.add_argument("--format", dest="fmt", choices=["json", "latex", "csv"],
                        default="json")
    parser.add_argument("--out", type=Path, default=None,
                        help="output file (csv mode: output directory)")
    parser.add_argument("--version", action="version", version=__version__)
    return parser


def _default_precision(args) -> int:
    if args.precision is not None:
        return args.precision
    env = os.environ.get(PRECISION_ENV)
    return int(env) if env else DEFAULT_PRECISION


def _load_params_file(path: Path):
    if not path.exists():
        raise ConfigError(f"parameter file not found: {path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc


def _point_from_obj(obj, precision: int) -> ParamPoint:
    if "alpha" in obj:
        gamma = tuple(FieldScalar.from_json(g) for g in obj["gamma"])
        return ParamPoint(
            m=len(gamma),
            alpha=FieldScalar.from_json(obj["alpha"]),
            beta=FieldScalar.from_json(obj["beta"]),
            gamma=gamma,
        )
    if "a" in obj:
        sp = _series_params_from_obj(obj)
        return param_exponentials(sp, precision)
    raise ConfigError("parameter file must define alpha/beta/gamma or a/b/c")


def _series_params_from_obj(obj) -> SeriesParams:
    try:
        c = tuple(FieldScalar.from_json(v) for v in obj["c"])
        return SeriesParams(
            m=len(c),
            a=FieldScalar.from_json(obj["a"]),
            b=FieldScalar.from_json(obj["b"]),
            c=c,
        )
    except KeyError as exc:
        raise ConfigError(f"series parameters need key {exc}") from exc


def _resolve_points(args, precision: int) -> list[tuple[int | None, ParamPoint]]:
    """(seed, point) pairs; a file source carries seed None."""
    if args.params is not None:
        return [(None, _point_from_obj(_load_params_file(args.params), precision))]
    if args.m is None:
        raise ConfigError("--m is required when sampling parameters by seed")
    return [
        (seed, sample_generic(seed, args.m, args.max_numerator))
        for seed in range(args.seed, args.seed + args.samples)
    ]


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


def _dump_json(obj, out: Path | None) -> None:
    _write(json.dumps(obj, indent=2, sort_keys=True), out)


def _scalar_latex(s: FieldScalar) -> str:
    def frac(q) -> str:
        if q.denominator == 1:
            return str(q.numerator)
        sign = "-" if q < 0 else ""
        return f"{sign}\\frac{{{abs(q.numerator)}}}{{{q.denominator}}}"

    if s.prec is not None:
        return str(complex(float(s.re), float(s.im)))
    if not s.im:
        return frac(s.re)
    imag = f"{frac(s.im)} i" if s.im > 0 else f"- {frac(-s.im)} i"
    if not s.re:
        return imag
    joiner = " + " if s.im > 0 else " "
    return f"{frac(s.re)}{joiner}{imag}"


def _named_matrices(p: ParamPoint) -> dict[str, RepMatrix]:
    out: dict[str, RepMatrix] = {}
    for i in range(p.m + 1):
        out[f"M{i}"] = m_i_matrix(p, i)
    out["P"] = basis_change_matrix(p)
    for i in range(p.m + 1):
        out[f"Mprime{i}"] = m_prime_matrix(p, i)
    out["H"] = h_matrix(p)
    out["Lambda0"] = lambda0_matrix(p)
    return out


def cmd_sample_params(args) -> int:
    if args.m is None:
        raise ConfigError("--m is required for sample-params")
    points = []
    for seed in range(args.seed, args.seed + args.samples):
        point = sample_generic(seed, args.m, args.max_numerator)
        points.append({"seed": seed, **point.to_json()})
    _dump_json({"mode": "sample-params", "points": points}, args.out)
    return EXIT_OK


def cmd_matrices(args) -> int:
    precision = _default_precision(args)
    (_, point), = _resolve_points_single(args, precision)
    violations = check_genericity(point)
    if violations:
        sys.stderr.write(
            "non-generic parameters: " + ", ".join(str(v) for v in violations) + "\n"
        )
        return EXIT_NON_GENERIC
    named = _named_matrices(point)
    order = basis_order(point.m)
    if args.fmt == "json":
        obj = {
            "mode": "matrices",
            "m": point.m,
            "params": point.to_json(),
            "basis_order": [s.to_json() for s in order],
            "matrices": {name: mat.to_json() for name, mat in named.items()},
        }
        _dump_json(obj, args.out)
        return EXIT_OK
    if args.fmt == "latex":
        lines = []
        for name, mat in named.items():
            body = " \\\\\n".join(
                " & ".join(_scalar_latex(x) for x in row) for row in mat.rows
            )
            lines.append(f"% {name} (basis: {mat.basis})")
            lines.append(f"{name} = \\begin{{pmatrix}}\n{body}\n\\end{{pmatrix}}")
            lines.append("")
        _write("\n".join(lines), args.out)
        return EXIT_OK
    # csv: float matrices only
    if point.is_exact:
        raise ConfigError("csv output needs float matrices; supply a/b/c parameters")
    if args.out is None:
        raise ConfigError("csv output needs --out DIRECTORY")
    args.out.mkdir(parents=True, exist_ok=True)
    for name, mat in named.items():
        rows = [
            ",".join(f"{float(x.re)!r}{float(x.im):+}j" for x in row)
            for row in mat.rows
        ]
        (args.out / f"{name}.csv").write_text("\n".join(rows) + "\n")
    return EXIT_OK


def _resolve_points_single(args, precision):
    points = _resolve_points(args, precision)
    return points[:1]


def _sample_series_params(seed: int, m: int, order: int) -> SeriesParams:
    """Random exact rational a, b, c with no Pochhammer zero inside the cutoff.

    Non-integer c_k keeps both (c_k, n) and the subset-shifted (2 - c_k, n)
    factors away from zero at every order.
    """
    rng = random.Random(seed ^ 0x5E1E5)

    def draw():
        return FieldScalar.exact(mpq(rng.randint(-7, 7), rng.choice([2, 3, 5, 7])))

    def draw_c():
        while True:
            v = draw()
            if v.re.denominator != 1:
                return v

    return SeriesParams(
        m=m, a=draw(), b=draw(), c=tuple(draw_c() for _ in range(m))
    )


def _verify_point(seed: int | None, point: ParamPoint, order: int) -> dict:
    report = verify_relations(point, seed=seed or 0)
    checks = report["checks"]

    def add(name, ok, **extra):
        checks.append({"name": name, "status": "pass" if ok else "fail", **extra})

    suborder = basis_order(point.m)
    full_bits = (1 << point.m) - 1
    oracle_ok = True
    witness = None
    for I in suborder:
        for Ip in suborder:
            if Ip.bits == full_bits:
                continue
            if ih_delta_D(point, I.bits, Ip.bits) != ih_delta_D_raw(point, I.bits, Ip.bits):
                oracle_ok = False
                witness = {"I": I.to_json(), "Iprime": Ip.to_json()}
                break
        if not oracle_ok:
            break
    add("intersection_oracle", oracle_ok, **({"witness": witness} if witness else {}))

    L0 = lambda0_matrix(point)
    zero_ok = True
    for j in range(L0.n - 1):
        col = L0.column(j)
        total = col[0]
        for v in col[1:]:
            total = total + v
        if not total.is_zero():
            zero_ok = False
            break
    add("lambda0_column_sums", zero_ok)
    add("trace_identity", h_matrix(point).trace() == d_self_intersection(point))

    if point.m >= 2:
        det_report = det_decomposition_check(point)
        add("determinant_suite", det_report["all_passed"],
            checks=det_report["checks"])
    else:
        g1 = point.gamma[0]
        expected = (point.alpha * point.beta - g1) / (
            (point.alpha - g1) * (point.beta - 1) * (1 - g1)
        )
        add("determinant_m1", det_bruteforce(L0) == expected)

    identities = subset_product_identities(point.m, list(point.gamma))
    add("subset_identities",
        all(v["status"] in ("pass", "skipped") for v in identities.values()),
        detail=identities)

    # combination of primed basis vectors that reassembles the vanishing cycle
    P = basis_change_matrix(point)
    y = CycleVector(point.m, [n0_column_entry(point, I) for I in suborder])
    add("vanishing_cycle_combination", P.apply(y) == CycleVector.ones(point.m))

    sp = _sample_series_params(seed or 0, point.m, order)
    residual_ok = True
    for I in suborder:
        for res in ec_residual(sp, I, order):
            if any(not v.is_zero() for v in res.values()):
                residual_ok = False
                break
        if not residual_ok:
            break
    add("series_residual", residual_ok, order=order)

    return {
        "seed": seed,
        "m": point.m,
        "params": point.to_json(),
        "checks": checks,
        "all_passed": all(
            c["status"] in ("pass", "not_applicable") for c in checks
        ),
    }


def cmd_verify(args) -> int:
    precision = _default_precision(args)
    points = _resolve_points(args, precision)
    results = []
    for seed, point in points:
        violations = check_genericity(point)
        if violations:
            sys.stderr.write(
                "non-generic parameters: "
                + ", ".join(str(v) for v in violations) + "\n"
            )
            return EXIT_NON_GENERIC
        results.append(_verify_point(seed, point, args.order))
    all_passed = all(r["all_passed"] for r in results)
    _dump_json(
        {"mode": "verify", "points": results, "all_passed": all_passed},
        args.out,
    )
    return EXIT_OK if all_passed else EXIT_VERIFY_FAILED


def cmd_det(args) -> int:
    precision = _default_precision(args)
    points = _resolve_points(args, precision)
    results = []
    for seed, point in points:
        violations = check_genericity(point)
        if violations:
            sys.stderr.write(
                "non-generic parameters: "
                + ", ".join(str(v) for v in violations) + "\n"
            )
            return EXIT_NON_GENERIC
        if point.m < 2:
            raise ConfigError("det mode needs m >= 2")
        brute = det_bruteforce(lambda0_matrix(point))
        closed = det_lambda0_closed(point)
        report = det_decomposition_check(point)
        results.append({
            "seed": seed,
            "m": point.m,
            "closed_form": closed.to_json(),
            "brute_force": brute.to_json(),
            "match": closed == brute,
            "decomposition": report,
        })
    all_passed = all(r["match"] and r["decomposition"]["all_passed"] for r in results)
    _dump_json({"mode": "det", "points": results, "all_passed": all_passed}, args.out)
    return EXIT_OK if all_passed else EXIT_VERIFY_FAILED


def cmd_series(args) -> int:
    precision = _default_precision(args)
    if args.params is None:
        raise ConfigError("series mode needs --params FILE with a/b/c and x")
    obj = _load_params_file(args.params)
    sp = _series_params_from_obj(obj)
    if "x" not in obj:
        raise ConfigError("series mode needs an 'x' array in the parameter file")
    x = obj["x"]
    if len(x) != sp.m:
        raise ConfigError("x must have exactly m entries")
    if not in_convergence_domain(x, precision):
        sys.stderr.write("x lies outside the convergence domain\n")
        return EXIT_DOMAIN
    subset = SubsetIndex.from_elements(obj.get("I", []), sp.m)
    value = fc_eval(sp, x, args.order, precision)
    record = {
        "mode": "series",
        "m": sp.m,
        "order": args.order,
        "precision": precision,
        "x": [str(v) for v in x],
        "fc_value": str(value.value),
        "tail_bound": str(value.tail_bound),
    }
    if not subset.is_empty():
        record["I"] = subset.to_json()
        record["f_I_value"] = str(f_I_eval(sp, subset, x, args.order, precision))
    _dump_json(record, args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        if args.samples < 1:
            raise ConfigError("--samples must be >= 1")
        if args.mode == "sample-params":
            return cmd_sample_params(args)
        if args.mode == "matrices":
            return cmd_matrices(args)
        if args.mode == "verify":
            return cmd_verify(args)
        if args.mode == "det":
            return cmd_det(args)
        return cmd_series(args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except GenericityError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_NON_GENERIC
    except DomainError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_DOMAIN


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
