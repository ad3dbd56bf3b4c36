"""Command-line front end.

Subcommands: basis, discord, scan, appendix-c, verify.  Exit codes: 0 ok,
2 invalid input, 3 unphysical state, 4 optimizer non-convergence flag.  All
randomness flows from --seed; identical invocations produce byte-identical
output files.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import classify as classify_mod
from . import discord as discord_mod
from . import entanglement as ent_mod
from . import lie_algebra as lie
from . import measurement as meas
from . import states as states_mod

SCAN_CSV_VERSION = "scan-csv-v1"
SCAN_COLUMNS = (
    "t",
    "d2_exact_or_bound",
    "d1_exact_or_blank",
    "d1_lower",
    "d1_numeric",
    "negativity",
    "realignment_negativity",
    "ppt",
)


def _fmt(x) -> str:
    if x is None or x == "":
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(doc, out_path) -> None:
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", out_path)


def cmd_basis(args) -> int:
    try:
        basis = lie.build_basis(args.d)
    except lie.UnsupportedDimensionError as exc:
        print(f"error: {exc} (supported: d >= 3)", file=sys.stderr)
        return 2
    tensors = lie.structure_tensors(basis)
    g = basis.generators
    gram = np.einsum("jab,kba->jk", g, g).real
    orth_residual = float(np.max(np.abs(gram - 2.0 * np.eye(basis.n))))
    trace_residual = float(np.max(np.abs(np.einsum("jaa->j", g))))
    star_sum = lie.star_sum_criterion(tensors, np.eye(basis.n), np.eye(basis.n))
    lines = [
        f"su({basis.d}) basis: {basis.n} generators",
        f"diagonal indices: {', '.join(str(i) for i in basis.diagonal_indices)}",
        f"orthogonality residual: {_fmt(orth_residual)}",
        f"trace residual: {_fmt(trace_residual)}",
        f"dhat checksum (frobenius^2): {_fmt(float(np.sum(tensors.dhat ** 2)))}",
        f"fhat checksum (frobenius^2): {_fmt(float(np.sum(tensors.fhat ** 2)))}",
        f"star-sum residual: {_fmt(float(np.max(np.abs(star_sum.residual))))}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _discord_record(basis, state, args) -> tuple[dict, int]:
    exit_code = 0
    record: dict = {"d": basis.d, "lmm": state.is_lmm}
    kind, t = discord_mod.classify_correlation(basis, state.K)
    record["correlation_class"] = kind
    record["t"] = t
    d2_bound, d1_bound = discord_mod.lower_bounds(basis, state.K)
    if state.is_lmm:
        record["d2_lower"] = d2_bound
        record["d1_lower"] = d1_bound
    if kind in ("automorphism", "anti_automorphism", "orthogonal", "zero"):
        record["d2_exact"] = discord_mod.d2_exact_orthogonal(basis.d, t)
        record["d2_method"] = "analytic"
    if kind == "automorphism":
        record["d1_exact"] = discord_mod.d1_exact_automorphism(basis.d, t)
        record["d1_method"] = "analytic"
    elif kind == "anti_automorphism":
        record["d1_exact"] = discord_mod.d1_exact_anti_automorphism(basis.d, t)
        record["d1_method"] = "analytic"
    elif kind == "zero":
        record["d1_exact"] = 0.0
        record["d1_method"] = "analytic"
    if args.numeric:
        config = discord_mod.OptimizerConfig(
            starts=args.starts, seed=args.seed, tol=args.tol, max_iter=args.max_iter
        )
        est1 = discord_mod.minimize_d1(state, config)
        est2 = discord_mod.minimize_d2(state, config)
        record["d1_numeric"] = est1.value
        record["d2_numeric"] = est2.value
        record["optimizer"] = {
            "starts": config.starts,
            "seed": config.seed,
            "best_residual_d1": est1.best_residual,
            "best_residual_d2": est2.best_residual,
        }
        if est1.best_residual > args.tol or est2.best_residual > args.tol:
            record["converged"] = False
            exit_code = 4
        else:
            record["converged"] = True
    return record, exit_code


def cmd_discord(args) -> int:
    try:
        state = states_mod.read_state(args.state)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: cannot read state: {exc}", file=sys.stderr)
        return 2
    report = states_mod.validate(state.rho)
    if not report.physical:
        print(
            "error: unphysical state "
            f"(hermiticity {report.hermiticity_defect:.3e}, "
            f"trace defect {report.trace_defect:.3e}, "
            f"min eigenvalue {report.min_eigenvalue:.3e})",
            file=sys.stderr,
        )
        return 3
    basis = lie.build_basis(state.d)
    record, exit_code = _discord_record(basis, state, args)
    if args.format == "csv":
        keys = sorted(record)
        flat = {
            k: (record[k] if not isinstance(record[k], dict) else "")
            for k in keys
        }
        text = ",".join(keys) + "\n" + ",".join(_fmt(flat[k]) for k in keys) + "\n"
        _emit(text, args.out)
    else:
        _emit_json(record, args.out)
    return exit_code


def _scan_states(args, basis):
    """Yield (t_value, state) pairs for the requested family."""
    family = args.family
    grid = np.linspace(args.t_min, args.t_max, args.t_steps)
    if family == "werner":
        for t in grid:
            yield t, states_mod.class_a_state(basis, np.eye(basis.d, dtype=complex), t)
    elif family == "isotropic":
        for p in grid:
            yield p, states_mod.isotropic(basis, p)
    elif family.startswith("sign:"):
        sm = classify_mod.SignMatrix.from_string(family[len("sign:"):])
        for t in grid:
            yield t, states_mod.sign_class_state(basis, sm.vector, t)
    elif family.startswith("pair:") or family == "pair":
        if family == "pair":
            ps = grid
        else:
            ps = [float(family[len("pair:"):])]
        for p in ps:
            weights = {(0, 0): p, (2, 2): 1.0 - p}
            yield p, states_mod.bell_diagonal(basis, weights)
    elif family.startswith("line:"):
        pa, pb, pg = (float(v) for v in family[len("line:"):].split(","))
        weights = {(0, 0): pa, (1, 1): pb, (2, 2): pg}
        yield pa, states_mod.bell_diagonal(basis, weights)
    else:
        raise ValueError(f"unknown family {family!r}")


def cmd_scan(args) -> int:
    basis = lie.build_basis(args.d)
    rows = []
    config = discord_mod.OptimizerConfig(
        starts=args.starts, seed=args.seed, tol=args.tol, max_iter=args.max_iter
    )
    try:
        pairs = list(_scan_states(args, basis))
    except states_mod.UnphysicalStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for t, state in pairs:
        kind, t_detected = discord_mod.classify_correlation(basis, state.K)
        d2_bound, d1_bound = discord_mod.lower_bounds(basis, state.K)
        if kind in ("automorphism", "anti_automorphism", "orthogonal", "zero"):
            d2_value = discord_mod.d2_exact_orthogonal(basis.d, t_detected)
        else:
            d2_value = d2_bound
        if kind == "automorphism":
            d1_exact = abs(t_detected)
        elif kind == "anti_automorphism":
            d1_exact = 2.0 * abs(t_detected) / basis.d
        elif kind == "zero":
            d1_exact = 0.0
        else:
            d1_exact = None
        d1_numeric = None
        if args.numeric:
            d1_numeric = discord_mod.minimize_d1(state, config).value
        report = ent_mod.entanglement_report(state.rho, basis.d)
        rows.append((
            t, d2_value, d1_exact, d1_bound, d1_numeric,
            report.negativity, report.realignment_negativity, report.ppt,
        ))
    lines = [f"# {SCAN_CSV_VERSION}", ",".join(SCAN_COLUMNS)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_appendix_c(args) -> int:
    basis = lie.build_basis(3)
    report = classify_mod.classification_report(basis)
    doc = classify_mod.report_to_json(report)
    if args.check_fixtures:
        fixtures = classify_mod.verify_adjoint_fixtures(basis)
        doc["fixtures"] = {
            "entries": [
                {
                    "label": list(e.label),
                    "matched": e.matched,
                    "max_abs_diff": e.max_abs_diff,
                    "duplicated": e.duplicated,
                }
                for e in fixtures.entries
            ],
            "duplication_detected": fixtures.duplication_detected,
            "replacements_differ": fixtures.replacements_differ,
            "computed_replacements": {
                f"{m},{n}": mat.tolist()
                for (m, n), mat in sorted(fixtures.computed_replacements.items())
            },
        }
    counts_ok = report.class_sizes == classify_mod.EXPECTED_CLASS_SIZES
    doc["class_counts_match"] = counts_ok
    if args.json:
        _emit_json(doc, args.out)
    else:
        text = classify_mod.report_to_text(report)
        if args.check_fixtures:
            fixtures = classify_mod.verify_adjoint_fixtures(basis)
            text += "\nfixture check:\n"
            for e in fixtures.entries:
                tag = "duplicated" if e.duplicated else ("ok" if e.matched else "MISMATCH")
                text += f"  V{e.label[0]}{e.label[1]}: {tag} (max diff {e.max_abs_diff:.3e})\n"
            text += (
                f"  duplication detected: {fixtures.duplication_detected}; "
                f"computed replacements differ: {fixtures.replacements_differ}\n"
            )
        _emit(text, args.out)
    return 0 if counts_ok else 1


def _verify_checks(d: int, seed: int):
    """Invariant suite for one dimension; yields (name, passed, residual)."""
    basis = lie.build_basis(d)
    tensors = lie.structure_tensors(basis)
    g = basis.generators
    n = basis.n

    gram = np.einsum("jab,kba->jk", g, g).real
    yield ("generator-orthogonality", *_residual_check(
        np.max(np.abs(gram - 2 * np.eye(n))), 1e-12))
    yield ("generator-traceless", *_residual_check(
        np.max(np.abs(np.einsum("jaa->j", g))), 1e-12))
    diag_sq = sum(g[i - 1] @ g[i - 1] for i in basis.diagonal_indices)
    yield ("diagonal-square-sum", *_residual_check(
        np.max(np.abs(diag_sq - (2 * (d - 1) / d) * np.eye(d))), 1e-12))
    yield ("delta-traceless", *_residual_check(
        np.max(np.abs(np.einsum("jkk->j", tensors.dhat))), 1e-12))
    yield ("star-sum-zero", *_residual_check(
        np.max(np.abs(lie.star_sum_criterion(
            tensors, np.eye(n), np.eye(n)).residual)), 1e-12))

    worst_cov = 0.0
    worst_transport = 0.0
    rng = np.random.default_rng([seed, d])
    for k in range(10):
        U = lie.random_special_unitary(d, [seed, d, k])
        R = lie.adjoint_rep(basis, U)
        a, b = rng.standard_normal(n), rng.standard_normal(n)
        worst_cov = max(
            worst_cov,
            float(np.max(np.abs(R @ lie.star(tensors, a, b)
                                - lie.star(tensors, R @ a, R @ b)))),
            float(np.max(np.abs(R @ lie.wedge(tensors, a, b)
                                - lie.wedge(tensors, R @ a, R @ b)))),
        )
        # R^T Delta_j R = sum_k R_jk Delta_k, and likewise for F_j
        lhs_d = np.stack([R.T @ tensors.dhat[j] @ R for j in range(n)])
        rhs_d = np.einsum("jk,kab->jab", R, tensors.dhat)
        lhs_f = np.stack([R.T @ tensors.fhat[j] @ R for j in range(n)])
        rhs_f = np.einsum("jk,kab->jab", R, tensors.fhat)
        worst_transport = max(
            worst_transport,
            float(np.max(np.abs(lhs_d - rhs_d))),
            float(np.max(np.abs(lhs_f - rhs_f))),
        )
    yield ("star-wedge-covariance", *_residual_check(worst_cov, 1e-10))
    yield ("tensor-transport", *_residual_check(worst_transport, 1e-10))

    # path equivalence on random correlation matrices
    worst_path = 0.0
    for k in range(5):
        rng_k = np.random.default_rng([seed, d, 7, k])
        K = rng_k.standard_normal((n, n))
        frame = meas.random_frame(basis, [seed, d, 8, k])
        S = meas.disturbance_from_vectors(basis, np.zeros(n), K, frame)
        q_direct = meas.q_matrix(S)
        q_exp = meas.q_expansion(basis, K, frame)
        worst_path = max(worst_path, float(np.max(np.abs(q_direct - q_exp))))
        V0 = lie.random_orthogonal(n, [seed, d, 9, k])
        t = float(rng_k.uniform(-1.0, 1.0))
        S0 = meas.disturbance_from_vectors(basis, np.zeros(n), t * V0, frame)
        worst_path = max(worst_path, float(np.max(np.abs(
            meas.q_matrix(S0) - meas.q_orthogonal(basis, t, V0, frame)))))
    yield ("path-equivalence", *_residual_check(worst_path, 1e-10))

    # frame invariance of the closed-form classes
    t_a = 0.2
    spread = _frame_spread(basis, t_a, seed)
    yield ("frame-invariance", *_residual_check(spread, 1e-10))

    # closed-form spectra against dense eigensolves
    spec = discord_mod.closed_form_spectra(d, 0.37)
    L, KL = _dense_fixed_operators(basis)
    worst_spec = max(
        _spectrum_defect(L, spec["L"]),
        _spectrum_defect(KL, spec["KL"]),
    )
    frame0 = meas.canonical_frame(basis)
    S_auto = meas.disturbance_from_vectors(
        basis, np.zeros(n), 0.37 * np.eye(n), frame0)
    worst_spec = max(worst_spec, _spectrum_defect(
        meas.q_matrix(S_auto), spec["q_auto"]))
    I0 = np.diag(states_mod.transposition_signs(basis))
    S_anti = meas.disturbance_from_vectors(basis, np.zeros(n), 0.37 * I0, frame0)
    worst_spec = max(worst_spec, _spectrum_defect(
        meas.q_matrix(S_anti), spec["q_anti"]))
    yield ("closed-form-spectra", *_residual_check(worst_spec, 1e-10))


def _residual_check(residual: float, tol: float) -> tuple[bool, float]:
    return float(residual) < tol, float(residual)


def _frame_spread(basis, t, seed) -> float:
    n = basis.n
    values = []
    pref = basis.d / (2.0 * (basis.d - 1))
    for k in range(10):
        frame = meas.random_frame(basis, [seed, basis.d, 31, k])
        S = meas.disturbance_from_vectors(basis, np.zeros(n), t * np.eye(n), frame)
        values.append(pref * meas.trace_norm_hermitian(S))
    return float(max(values) - min(values))


def _dense_fixed_operators(basis):
    d = basis.d
    g = basis.generators
    L = np.zeros((d * d, d * d), dtype=complex)
    for i in basis.diagonal_indices:
        L += np.kron(g[i - 1], g[i - 1])
    K = np.zeros_like(L)
    for j in range(basis.n):
        K += np.kron(g[j], g[j].T)
    return L, (d - 2) * K + L


def _spectrum_defect(matrix, spec) -> float:
    expected = np.sort(np.concatenate([np.full(m, v) for v, m in spec]))
    actual = np.sort(np.linalg.eigvalsh(matrix))
    return float(np.max(np.abs(actual - expected)))


def cmd_verify(args) -> int:
    dims = [3, 4]
    if args.d and args.d not in dims:
        dims.append(args.d)
    failures = 0
    for d in dims:
        for name, passed, residual in _verify_checks(d, args.seed):
            tag = "PASS" if passed else "FAIL"
            print(f"{tag} d={d} {name} (residual {residual:.3e})")
            failures += 0 if passed else 1
    autos, antis = classify_mod.jordan_good_matrices(lie.build_basis(3))
    ok = len(autos) == 4 and len(antis) == 4
    print(f"{'PASS' if ok else 'FAIL'} d=3 jordan-good-count "
          f"(4+4 vs {len(autos)}+{len(antis)})")
    failures += 0 if ok else 1
    if args.inject_failure:
        print("FAIL injected-failure (residual 1.000e+00)")
        failures += 1
    print(f"{'OK' if failures == 0 else 'FAILED'}: {failures} failing checks")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quditdiscord",
        description="Measurement-induced geometric discord toolkit for qudit pairs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--starts", type=int, default=32)
        p.add_argument("--max-iter", type=int, default=2000)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None)

    p_basis = sub.add_parser("basis", help="print generator and tensor checksums")
    p_basis.add_argument("--d", type=int, required=True)
    p_basis.add_argument("--out", default=None)
    p_basis.set_defaults(func=cmd_basis)

    p_disc = sub.add_parser("discord", help="discord values and bounds for a state file")
    p_disc.add_argument("--state", required=True)
    p_disc.add_argument("--numeric", action="store_true")
    add_common(p_disc)
    p_disc.set_defaults(func=cmd_discord)

    p_scan = sub.add_parser("scan", help="CSV sweep over a one-parameter family")
    p_scan.add_argument("--d", type=int, default=3)
    p_scan.add_argument("--family", required=True,
                        help="werner | isotropic | sign:<8 signs> | pair[:<pa>] | line:<pa,pb,pg>")
    p_scan.add_argument("--t-min", type=float, default=0.0)
    p_scan.add_argument("--t-max", type=float, default=0.0)
    p_scan.add_argument("--t-steps", type=int, default=1)
    p_scan.add_argument("--numeric", action="store_true")
    add_common(p_scan)
    p_scan.set_defaults(func=cmd_scan)

    p_app = sub.add_parser("appendix-c", help="qutrit sign-class classification report")
    p_app.add_argument("--json", action="store_true")
    p_app.add_argument("--check-fixtures", action="store_true")
    p_app.add_argument("--out", default=None)
    p_app.set_defaults(func=cmd_appendix_c)

    p_ver = sub.add_parser("verify", help="run the invariant self-test suite")
    p_ver.add_argument("--d", type=int, default=None,
                       help="additionally run algebra checks at this dimension")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--inject-failure", action="store_true")
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except lie.UnsupportedDimensionError as exc:
        print(f"error: {exc} (supported: d >= 3)", file=sys.stderr)
        return 2
    except states_mod.UnphysicalStateError as exc:
        print(f"error: unphysical state: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
