"""Command-line front end. Every command prints a single JSON document.

Exit codes: 0 success, 2 invalid input, 3 certificate violation with ``--strict``.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import choi as choi_mod
from .ball import SimplexBall
from .hermitian import SpectralState, gellmann_basis, matrix_unit
from .io import (ConfigError, dumps, load_json, map_from_config, matrix_from_json,
                 matrix_to_json, parse_angle, state_from_json)
from .maps import compose, mu_max
from .verify import (DEFAULT_TOL, Certificate, ball_image_check, block_positivity, cp_check,
                     positivity_scan)
from .witness import coefficients, detect, negativity_submatrix, witness_from_matrix

FAILING_KINDS = {"violated", "ball-exceeded"}


def _state(path, dim=None) -> SpectralState:
    if path is None:
        return SpectralState.maximally_mixed(3 if dim is None else dim)
    return state_from_json(load_json(path), dim)


def _action(phi, n: int) -> list[dict]:
    return [{"i": i, "j": j, "image": matrix_to_json(phi(matrix_unit(n, i, j)))}
            for i in range(n) for j in range(n)]


def _choi_from_action(action: list[dict], n: int) -> np.ndarray:
    blocks = [[None] * n for _ in range(n)]
    for item in action:
        blocks[item["i"]][item["j"]] = matrix_from_json(item["image"], check_hermitian=False)
    if any(b is None for row in blocks for b in row):
        raise ConfigError("map action is missing some matrix units")
    return np.block(blocks)


def _tol(args):
    return DEFAULT_TOL if args.tol is None else replace(DEFAULT_TOL, eigen=args.tol)


def _certs(args, certs: dict[str, Certificate]) -> dict:
    if args.strict and any(c.kind in FAILING_KINDS for c in certs.values()):
        args._violation = True
    return {name: c.to_dict() for name, c in certs.items()}


# --- commands -------------------------------------------------------------

def cmd_ball(args) -> dict:
    state = _state(args.state)
    ball = SimplexBall.of(state)
    return {
        "r_max": ball.r_max,
        "alpha_star": ball.tangency,
        "lambda": state.shifted,
        "lambda_tilde": state.eigenvalues,
    }


def _map_certificates(args, bmap) -> dict:
    tol = _tol(args)
    return _certs(args, {
        "cp": cp_check(bmap, bmap.dim, tol),
        "positivity": positivity_scan(bmap, bmap.dim, args.samples, args.restarts, args.seed, tol),
        "ball_image": ball_image_check(bmap, args.samples, args.seed, tol=tol),
    })


def cmd_map(args) -> dict:
    bmap = map_from_config(load_json(args.config))
    out = {
        "n": bmap.dim,
        "mu": bmap.mu,
        "mu_max": bmap.mu_max,
        "r_max": bmap.r_max,
        "certified_positive": bmap.certified_positive,
        "warnings": [] if bmap.certified_positive else
        ["|mu| exceeds mu_max: positivity is not guaranteed by the ball construction"],
        "source": bmap.describe(),
        "action": _action(bmap, bmap.dim),
    }
    if args.certify:
        out["certificates"] = _map_certificates(args, bmap)
    return out


def cmd_choi(args) -> dict:
    state = _state(args.state, 3)
    alpha = parse_angle(args.alpha)
    fmap = choi_mod.family_map(state, alpha)
    return {
        "alpha": alpha,
        "mu_max": fmap.mu_max,
        "eta": fmap.eta,
        "xi": fmap.xi,
        "lambda": fmap.lam,
        "action": _action(fmap, 3),
    }


def _witness_doc(args, matrix, n: int, source: str) -> dict:
    tol = _tol(args)
    w = witness_from_matrix(matrix, n, n, restarts=0, source=source, tol=tol)
    cert = block_positivity(w.matrix, n, n, args.restarts, args.seed, tol)
    w = replace(w, block_positivity_lower_bound=cert.bound)
    return {
        "dim_a": n,
        "dim_b": n,
        "matrix": matrix_to_json(w.matrix),
        "min_eigenvalue": w.min_eigenvalue,
        "block_positivity": _certs(args, {"block": cert})["block"],
        "is_witness": w.is_witness,
        "source": source,
    }


def cmd_witness_build(args) -> dict:
    if args.from_map:
        doc = load_json(args.from_map)
        try:
            n, action, source = doc["n"], doc["action"], doc["source"]
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"not a map document: missing {exc}") from exc
        return _witness_doc(args, _choi_from_action(action, n), n, source)
    if args.config:
        bmap = map_from_config(load_json(args.config))
        return _witness_doc(args, _choi_from_action(_action(bmap, bmap.dim), bmap.dim),
                            bmap.dim, bmap.describe())
    if args.alpha is None:
        raise ConfigError("witness build needs --alpha, --config or --from-map")
    state = _state(args.state, 3)
    fmap = choi_mod.family_map(state, parse_angle(args.alpha))
    out = _witness_doc(args, _choi_from_action(_action(fmap, 3), 3), 3, fmap.describe())
    out["coefficients"] = coefficients(state, fmap.alpha)
    return out


def _load_witness(path):
    doc = load_json(path)
    if isinstance(doc, dict) and "matrix" in doc:
        return matrix_from_json(doc["matrix"]), doc.get("dim_a"), doc.get("is_witness")
    return matrix_from_json(doc), None, None


def _split_dims(matrix, dim_a) -> tuple[int, int]:
    d = matrix.shape[0]
    n = dim_a or int(round(np.sqrt(d)))
    if n < 1 or d % n:
        raise ConfigError("cannot infer subsystem dimensions of the witness")
    return n, d // n


def cmd_witness_detect(args) -> dict:
    matrix, dim_a, status = _load_witness(args.witness)
    n_a, n_b = _split_dims(matrix, dim_a)
    restarts = args.restarts if status is None else 0
    w = witness_from_matrix(matrix, n_a, n_b, restarts=restarts, seed=args.seed, tol=_tol(args))
    if status is None:
        status = w.is_witness
    rho = matrix_from_json(load_json(args.rho))
    value = detect(w, rho)
    entangled = bool(status) and value < -_tol(args).eigen
    return {"value": value, "is_witness": bool(status),
            "verdict": "entangled" if entangled else "not detected"}


def cmd_witness_coeffs(args) -> dict:
    state = _state(args.state, 3)
    alpha = parse_angle(args.alpha)
    co = coefficients(state, alpha)
    sub, negative = negativity_submatrix(state, alpha)
    sums = [co["a"][i] + co["b"][(i + 1) % 3] + co["c"][(i + 2) % 3] for i in range(3)]
    return {
        "alpha": alpha,
        "mu_max": mu_max(state),
        "a": co["a"], "b": co["b"], "c": co["c"],
        "cyclic_sums": sums,
        "inverse_mu_max": 1.0 / mu_max(state),
        "negativity_submatrix": sub,
        "submatrix_has_negative_eigenvalue": negative,
    }


def cmd_verify(args) -> dict:
    if args.witness:
        matrix, dim_a, _ = _load_witness(args.witness)
        n_a, n_b = _split_dims(matrix, dim_a)
        cert = block_positivity(matrix, n_a, n_b, args.restarts, args.seed, _tol(args))
        return {"certificates": _certs(args, {"block": cert})}
    if not args.config:
        raise ConfigError("verify needs --config or --witness")
    bmap = map_from_config(load_json(args.config))
    return {"certified_positive": bmap.certified_positive,
            "certificates": _map_certificates(args, bmap)}


def cmd_figure(args) -> dict:
    """Projections onto the (d1, d2) Bloch plane of the images of P_k under
    the maps at ``mu = +mu_max`` and ``-mu_max``."""
    state = _state(args.state, 3)
    if state.dim != 3:
        raise ConfigError("figure is defined for n = 3")
    basis = gellmann_basis(state)
    m = mu_max(state)
    affine = None
    if args.alpha is not None:
        affine = choi_mod.family_rotation(parse_angle(args.alpha))
    proj = state.projectors
    plane = lambda a: basis.coords(a).real[..., :2]  # noqa: E731
    center = plane(state.matrix)
    r = SimplexBall.of(state).r_max
    t = np.linspace(0.0, 2.0 * np.pi, args.circle_points, endpoint=False)
    circle = center + r * np.stack([np.cos(t), np.sin(t)], axis=1)
    panels = []
    for mu in (m, -m):
        bmap = compose(state, mu, affine)
        panels.append({"mu": mu, "P_prime": plane(bmap(proj))})
    return {
        "plane": list(basis.labels[:2]),
        "P": plane(proj),
        "rho": center,
        "circle": {"center": center, "radius": r, "points": circle},
        "panels": panels,
    }


# --- wiring ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ballmaps", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None, help="eigenvalue tolerance override")
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.add_argument("--strict", action="store_true", help="exit 3 on certificate violation")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ball", help="maximal ball radius and tangency point")
    s.add_argument("--state", required=True)
    s.set_defaults(func=cmd_ball)

    s = sub.add_parser("map", help="build a ball map from a JSON config")
    s.add_argument("--config", required=True)
    s.add_argument("--certify", action="store_true")
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--restarts", type=int, default=10)
    s.set_defaults(func=cmd_map)

    s = sub.add_parser("choi", help="qutrit family data at angle alpha")
    s.add_argument("--alpha", required=True)
    s.add_argument("--state", default=None)
    s.set_defaults(func=cmd_choi)

    w = sub.add_parser("witness", help="entanglement witnesses")
    wsub = w.add_subparsers(dest="witness_command", required=True)
    s = wsub.add_parser("build")
    s.add_argument("--alpha", default=None)
    s.add_argument("--state", default=None)
    s.add_argument("--config", default=None)
    s.add_argument("--from-map", default=None)
    s.add_argument("--restarts", type=int, default=100)
    s.set_defaults(func=cmd_witness_build)
    s = wsub.add_parser("detect")
    s.add_argument("--witness", required=True)
    s.add_argument("--rho", required=True)
    s.add_argument("--restarts", type=int, default=100)
    s.set_defaults(func=cmd_witness_detect)
    s = wsub.add_parser("coeffs")
    s.add_argument("--alpha", required=True)
    s.add_argument("--state", default=None)
    s.set_defaults(func=cmd_witness_coeffs)

    s = sub.add_parser("verify", help="certificates for a map config or a witness")
    s.add_argument("--config", default=None)
    s.add_argument("--witness", default=None)
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--restarts", type=int, default=10)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("figure", help="point sets for the qutrit action picture")
    s.add_argument("--state", default=None)
    s.add_argument("--alpha", default=None)
    s.add_argument("--circle-points", type=int, default=64)
    s.set_defaults(func=cmd_figure)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._violation = False
    try:
        result = args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = dumps(result)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 3 if args._violation else 0


if __name__ == "__main__":
    sys.exit(main())
