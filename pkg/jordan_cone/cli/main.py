"""
main.py — Command-line surface of JordanCone

    jordan-cone algebra info ALGEBRA
    jordan-cone metric hilbert X Y | metric variation X | metric deviation X
    jordan-cone dual decompose|support|extreme PHI
    jordan-cone iso make|apply|verify|factor|hamhalter ...
    jordan-cone group classify ALGEBRA [--against OTHER]
    jordan-cone verify SUITE|all [--algebra A ...]
    jordan-cone config show|save|reset
    jordan-cone preset list|show|save|delete

Exit codes: 0 success, 1 a property or verification failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from jordan_cone import __version__
from jordan_cone.cli.report import emit, print_error, summarize, to_json
from jordan_cone.core.algebra import AlgebraDescriptor, Element, trace_weights, unit
from jordan_cone.core.cone import hilbert_distance, inversion_is_linear_up_to_scale, ray_distance, ray_of, upper_gauge
from jordan_cone.core.dual import (
    Functional,
    deviation_witness,
    dual_norm,
    extreme_point_check,
    orthogonal_decomposition,
    sampled_maximal_deviation,
    support_projection,
)
from jordan_cone.core.errors import (
    FactorizationFailed,
    InvalidIsometry,
    InvariantViolation,
    JordanConeError,
    NotAnIsometry,
)
from jordan_cone.core.factorization import factor_hilbert_isometry, factor_variation_isometry, hamhalter_decompose
from jordan_cone.core.isometry import (
    AffineVariationIsometry,
    HilbertIsometry,
    JordanIsomorphism,
    VariationIsometry,
    apply_hilbert_isometry,
    are_jordan_isomorphic,
    atom_coatom_criterion,
    classify_isometry_group,
    jordan_iso_residual,
    max_spectrum_size,
    sample_affine_isometry,
    sample_hilbert_isometry,
    sample_jordan_iso,
    simple_factors,
    two_atoms_join_to_unit,
    verify_jordan_iso,
)
from jordan_cone.core.presets import PresetManager, RunConfig, parse_algebras
from jordan_cone.core.sampling import Rng, sample_element, sample_interior
from jordan_cone.core.settings_store import SettingsStore
from jordan_cone.core.spectral import (
    class_of,
    maximal_deviation,
    order_unit_norm,
    quotient_norm,
    spectrum,
    variation_seminorm,
)
from jordan_cone.core.suite_runner import run_suite
from jordan_cone.core.utils import resolve_seed

log = logging.getLogger("jordan_cone")

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2
VERIFY_TOL = 1e-8


class UsageError(Exception):
    """Bad command-line input that is not a library error (unknown preset, unreadable file)."""


# ── Input loading ─────────────────────────────────────────────────────────────

def load_json(source: str):
    """Parse inline JSON, '-' for stdin, or a file path."""
    text = source.strip()
    if text.startswith(("{", "[")):
        return json.loads(text)
    if source == "-":
        return json.load(sys.stdin)
    try:
        with open(source, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc.strerror or exc}") from None


def load_algebra(text: str) -> AlgebraDescriptor:
    """Shorthand (diag:3, sum(spin:2,diag:2)), inline JSON, or a descriptor file."""
    if text.strip().startswith("{") or text.endswith(".json") or Path(text).is_file():
        return AlgebraDescriptor.from_dict(load_json(text))
    return AlgebraDescriptor.parse(text)


def load_element(source: str) -> Element:
    return Element.from_dict(load_json(source))


def load_functional(source: str) -> Functional:
    return Functional.from_dict(load_json(source))


def load_map(source: str):
    """Jordan isomorphism, Hilbert isometry, affine variation isometry or coordinate matrix."""
    data = load_json(source)
    if not isinstance(data, dict):
        raise InvalidIsometry("an isometry file must hold a JSON object")
    if "matrix" in data:
        algebra = AlgebraDescriptor.from_dict(data.get("algebra"))
        return VariationIsometry(np.array(data["matrix"], dtype=float), algebra)
    if "phi" in data:
        return AffineVariationIsometry.from_dict(data)
    if "y" in data:
        return HilbertIsometry.from_dict(data)
    if "epsilon" in data and "J" in data:
        return VariationIsometry.from_canonical(data["epsilon"], JordanIsomorphism.from_dict(data["J"]))
    return JordanIsomorphism.from_dict(data)


# ── Run configuration ─────────────────────────────────────────────────────────

def effective_config(args: argparse.Namespace) -> RunConfig:
    """Stored settings, then the chosen preset, then command-line flags."""
    base = SettingsStore().load() or RunConfig()
    preset_name = getattr(args, "preset", None) or base.preset
    config = PresetManager().get(preset_name, base)
    if config is None:
        raise UsageError(f"unknown preset {preset_name!r}")
    return config.merged({
        "seed": resolve_seed(getattr(args, "seed", None)),
        "samples": getattr(args, "samples", None),
        "tol_scale": getattr(args, "tol_scale", None),
        "workers": getattr(args, "workers", None),
        "algebras": getattr(args, "algebra", None) or None,
        "json_output": getattr(args, "json_output", None),
    })


def _wants_json(args: argparse.Namespace) -> bool:
    return bool(getattr(args, "json_output", False))


def _seed(args: argparse.Namespace) -> int:
    return resolve_seed(getattr(args, "seed", None))


def _samples(args: argparse.Namespace, default: int) -> int:
    value = getattr(args, "samples", None)
    return default if value is None else max(1, int(value))


# ── algebra / metric ──────────────────────────────────────────────────────────

def cmd_algebra_info(args) -> int:
    algebra = load_algebra(args.algebra)
    emit({
        "algebra": algebra.label,
        "descriptor": algebra.to_dict(),
        "dim": algebra.dim,
        "rank": algebra.rank,
        "unit": unit(algebra).coords.tolist(),
        "trace_weights": trace_weights(algebra).tolist(),
        "simple_factors": [list(f) for f in simple_factors(algebra)],
        "isometry_group": classify_isometry_group(algebra).value,
    }, _wants_json(args))
    return EXIT_OK


def cmd_metric_hilbert(args) -> int:
    x, y = load_element(args.x), load_element(args.y)
    emit({
        "distance": hilbert_distance(x, y),
        "M(x/y)": upper_gauge(x, y),
        "M(y/x)": upper_gauge(y, x),
    }, _wants_json(args))
    return EXIT_OK


def cmd_metric_variation(args) -> int:
    x = load_element(args.x)
    emit({
        "variation": variation_seminorm(x),
        "quotient_norm": quotient_norm(x),
        "order_unit_norm": order_unit_norm(x),
        "spectrum": [float(v) for v in spectrum(x)],
        "class_representative": class_of(x).representative.coords.tolist(),
    }, _wants_json(args))
    return EXIT_OK


def cmd_metric_deviation(args) -> int:
    x = load_element(args.x)
    exact = maximal_deviation(x)
    sampled = sampled_maximal_deviation(x, _samples(args, 64), _seed(args))
    emit({
        "maximal_deviation": exact,
        "sampled_states": sampled,
        "witness_state": deviation_witness(x).representer.coords.tolist(),
        "variation": variation_seminorm(x),
    }, _wants_json(args))
    return EXIT_OK


# ── dual ──────────────────────────────────────────────────────────────────────

def cmd_dual_decompose(args) -> int:
    phi = load_functional(args.phi)
    positive, negative = orthogonal_decomposition(phi)
    emit({
        "positive": positive.to_dict(),
        "negative": negative.to_dict(),
        "norm": dual_norm(phi),
        "norm_positive": dual_norm(positive),
        "norm_negative": dual_norm(negative),
    }, _wants_json(args))
    return EXIT_OK


def cmd_dual_support(args) -> int:
    p = support_projection(load_functional(args.phi))
    emit({"support": p.element.to_dict(), "rank": p.rank, "is_atom": p.is_atom}, _wants_json(args))
    return EXIT_OK


def cmd_dual_extreme(args) -> int:
    emit({"extreme": extreme_point_check(load_functional(args.phi))}, _wants_json(args))
    return EXIT_OK


# ── iso ───────────────────────────────────────────────────────────────────────

def cmd_iso_make(args) -> int:
    algebra = load_algebra(args.algebra)
    rng = Rng(_seed(args))
    if args.kind == "jordan":
        payload = sample_jordan_iso(algebra, rng).to_dict()
    elif args.kind == "hilbert":
        payload = sample_hilbert_isometry(algebra, rng, epsilon=args.epsilon).to_dict()
    elif args.kind == "variation":
        epsilon = args.epsilon if args.epsilon is not None else rng.sign()
        payload = VariationIsometry.from_canonical(epsilon, sample_jordan_iso(algebra, rng)).to_dict()
    else:
        payload = sample_affine_isometry(algebra, rng, epsilon=args.epsilon).to_dict()
    sys.stdout.write(to_json(payload) + "\n")
    return EXIT_OK


def cmd_iso_apply(args) -> int:
    mapping = load_map(args.iso)
    x = load_element(args.x)
    if isinstance(mapping, HilbertIsometry):
        image = apply_hilbert_isometry(mapping, ray_of(x)).representative
    elif isinstance(mapping, VariationIsometry):
        image = mapping.apply(class_of(x)).representative
    else:
        image = mapping.apply(x)
    sys.stdout.write(to_json(image.to_dict()) + "\n")
    return EXIT_OK


def _hilbert_residual(f: HilbertIsometry, samples: int, rng: Rng) -> float:
    worst = 0.0
    for _ in range(samples):
        r1, r2 = ray_of(sample_interior(f.algebra, rng)), ray_of(sample_interior(f.algebra, rng))
        before = ray_distance(r1, r2)
        worst = max(worst, abs(ray_distance(f(r1), f(r2)) - before) / max(1.0, before))
    return worst


def _variation_residual(matrix: np.ndarray, algebra: AlgebraDescriptor, samples: int, rng: Rng) -> float:
    worst = 0.0
    for _ in range(samples):
        x = sample_element(algebra, rng)
        before = variation_seminorm(x)
        worst = max(worst, abs(variation_seminorm(Element(algebra, matrix @ x.coords)) - before) / max(1.0, before))
    return worst


def cmd_iso_verify(args) -> int:
    mapping = load_map(args.iso)
    samples, seed = _samples(args, 100), _seed(args)
    if isinstance(mapping, JordanIsomorphism):
        unit_gap, product_gap = jordan_iso_residual(mapping, samples, seed)
        payload = {"kind": "jordan", "unit_gap": unit_gap, "product_gap": product_gap,
                   "pass": verify_jordan_iso(mapping, samples, seed)}
    elif isinstance(mapping, HilbertIsometry):
        residual = _hilbert_residual(mapping, samples, Rng(seed))
        payload = {"kind": "hilbert", "max_residual": residual, "pass": residual <= VERIFY_TOL}
    else:
        residual = _variation_residual(mapping.matrix, mapping.algebra, samples, Rng(seed))
        payload = {"kind": "variation", "max_residual": residual, "pass": residual <= VERIFY_TOL}
    emit(payload, _wants_json(args))
    return EXIT_OK if payload["pass"] else EXIT_FAILURE


def cmd_iso_factor(args) -> int:
    mapping = load_map(args.iso)
    samples, seed = _samples(args, 1000), _seed(args)
    if isinstance(mapping, HilbertIsometry):
        recovered = factor_hilbert_isometry(mapping, mapping.algebra, mapping.algebra, samples, seed)
        payload = recovered.to_dict()
    elif isinstance(mapping, JordanIsomorphism):
        raise UsageError("a Jordan isomorphism is already factored; pass a variation or Hilbert isometry")
    else:
        epsilon, J = factor_variation_isometry(mapping, mapping.algebra, mapping.algebra, samples, seed)
        payload = {"epsilon": epsilon, "J": J.to_dict()}
    sys.stdout.write(to_json(payload) + "\n")
    return EXIT_OK


def cmd_iso_hamhalter(args) -> int:
    mapping = load_map(args.iso)
    if isinstance(mapping, (JordanIsomorphism, HilbertIsometry)):
        raise UsageError("hamhalter takes a linear map: a coordinate matrix or an affine variation isometry")
    recovered = hamhalter_decompose(mapping, mapping.algebra, _samples(args, 200), _seed(args))
    sys.stdout.write(to_json(recovered.to_dict()) + "\n")
    return EXIT_OK


# ── group ─────────────────────────────────────────────────────────────────────

def cmd_group_classify(args) -> int:
    algebra = load_algebra(args.algebra)
    payload = {
        "algebra": algebra.label,
        "class": classify_isometry_group(algebra).value,
        "max_spectrum_size": max_spectrum_size(algebra),
        "atom_coatom_criterion": atom_coatom_criterion(algebra),
        "two_atoms_join_to_unit": two_atoms_join_to_unit(algebra),
        "inversion_linear_up_to_scale": inversion_is_linear_up_to_scale(algebra, _samples(args, 16), _seed(args)),
    }
    if args.against:
        other = load_algebra(args.against)
        payload["against"] = other.label
        payload["isometric"] = are_jordan_isomorphic(algebra, other)
    emit(payload, _wants_json(args))
    return EXIT_OK


# ── verify ────────────────────────────────────────────────────────────────────

def cmd_verify(args) -> int:
    config = effective_config(args)
    algebras = parse_algebras(config.algebras)
    if not algebras:
        raise UsageError(f"preset {config.preset!r} names no algebras")
    log.info("verify %s: %d algebras, seed %d, workers %d", args.suite, len(algebras), config.seed, config.workers)
    report = run_suite(args.suite, algebras, config.samples, config.seed, config.tol_scale, config.workers)
    sys.stdout.write(report.to_json() + "\n")
    summarize(report)
    return EXIT_OK if report.passed else EXIT_FAILURE


# ── config / preset ───────────────────────────────────────────────────────────

def cmd_config_show(args) -> int:
    emit(effective_config(args).to_dict(), _wants_json(args))
    return EXIT_OK


def cmd_config_save(args) -> int:
    config = effective_config(args)
    SettingsStore().save(config)
    emit({k: v for k, v in config.to_dict().items() if k in SettingsStore.PERSISTENT_FIELDS}, _wants_json(args))
    return EXIT_OK


def cmd_config_reset(args) -> int:
    emit({"reset": SettingsStore().reset()}, _wants_json(args))
    return EXIT_OK


def cmd_preset_list(args) -> int:
    manager = PresetManager()
    emit({name: ("builtin" if manager.is_builtin(name) else "user") for name in manager.all_preset_names()},
         _wants_json(args))
    return EXIT_OK


def cmd_preset_show(args) -> int:
    data = PresetManager().get_data(args.name)
    if data is None:
        raise UsageError(f"unknown preset {args.name!r}")
    emit(dict(data), _wants_json(args))
    return EXIT_OK


def cmd_preset_save(args) -> int:
    manager = PresetManager()
    if manager.is_builtin(args.name):
        raise UsageError(f"{args.name!r} is a built-in preset")
    parse_algebras(args.algebra)
    config = RunConfig(algebras=list(args.algebra)).merged({
        "samples": getattr(args, "samples", None),
        "tol_scale": getattr(args, "tol_scale", None),
    })
    manager.save_user_preset(args.name, config)
    emit(manager.get_data(args.name), _wants_json(args))
    return EXIT_OK


def cmd_preset_delete(args) -> int:
    manager = PresetManager()
    if manager.is_builtin(args.name):
        raise UsageError(f"{args.name!r} is a built-in preset")
    if not manager.delete_user_preset(args.name):
        raise UsageError(f"unknown preset {args.name!r}")
    emit({"deleted": args.name}, _wants_json(args))
    return EXIT_OK


# ── Parser ────────────────────────────────────────────────────────────────────

def _common_options() -> argparse.ArgumentParser:
    """Flags accepted both before and after the subcommand."""
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--seed", type=lambda s: int(s, 0), help="master seed (default: $JORDAN_CONE_SEED or 0)")
    common.add_argument("--samples", type=int, help="override every sample count")
    common.add_argument("--tol-scale", type=float, dest="tol_scale", help="multiply every property tolerance")
    common.add_argument("--workers", type=int, help="run property jobs on this many threads")
    common.add_argument("--preset", help="algebra-set preset for verify")
    common.add_argument("--json", action="store_true", dest="json_output", help="machine-readable output")
    common.add_argument("-v", "--verbose", action="count", help="-v for progress, -vv for debug detail")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="jordan-cone", parents=[common],
        description="Euclidean Jordan algebras, Hilbert's projective metric and their isometries.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    def group(name: str, help_text: str):
        sub = commands.add_parser(name, help=help_text)
        return sub.add_subparsers(dest="action", required=True)

    def leaf(subs, name: str, handler, help_text: str):
        p = subs.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    algebra = group("algebra", "describe an algebra")
    p = leaf(algebra, "info", cmd_algebra_info, "dimension, rank, unit and isometry group")
    p.add_argument("algebra")

    metric = group("metric", "distances and norms")
    p = leaf(metric, "hilbert", cmd_metric_hilbert, "Hilbert projective distance of two interior elements")
    p.add_argument("x")
    p.add_argument("y")
    p = leaf(metric, "variation", cmd_metric_variation, "variation seminorm and quotient norm")
    p.add_argument("x")
    p = leaf(metric, "deviation", cmd_metric_deviation, "maximal deviation over states, with a sampled cross-check")
    p.add_argument("x")

    dual = group("dual", "functionals on the algebra")
    for name, handler, help_text in (
        ("decompose", cmd_dual_decompose, "orthogonal decomposition φ = φ⁺ − φ⁻"),
        ("support", cmd_dual_support, "support projection of a positive functional"),
        ("extreme", cmd_dual_extreme, "is φ an extreme point of 2B_{e^⊥}?"),
    ):
        leaf(dual, name, handler, help_text).add_argument("phi")

    iso = group("iso", "isomorphisms and isometries")
    p = leaf(iso, "make", cmd_iso_make, "sample a random map")
    p.add_argument("algebra")
    p.add_argument("--kind", choices=("jordan", "hilbert", "variation", "affine"), default="jordan")
    p.add_argument("--epsilon", type=int, choices=(1, -1), default=None)
    p = leaf(iso, "apply", cmd_iso_apply, "apply a map to an element")
    p.add_argument("iso")
    p.add_argument("x")
    leaf(iso, "verify", cmd_iso_verify, "sampled isometry / homomorphism check").add_argument("iso")
    leaf(iso, "factor", cmd_iso_factor, "recover (ε, J) or (ε, y, J)").add_argument("iso")
    leaf(iso, "hamhalter", cmd_iso_hamhalter, "write T as εJ + φ(·)e").add_argument("iso")

    grp = group("group", "isometry group structure")
    p = leaf(grp, "classify", cmd_group_classify, "ProjectivitiesOnly or SemidirectWithC2")
    p.add_argument("algebra")
    p.add_argument("--against", help="also decide whether the two Hilbert-metric cones are isometric")

    p = commands.add_parser("verify", parents=[common], help="run a property suite")
    p.add_argument("suite", help="algebra, spectral, cone, dual, isometry or all")
    p.add_argument("--algebra", action="append", help="algebra to include (repeatable; overrides the preset)")
    p.set_defaults(handler=cmd_verify)

    config = group("config", "remembered run defaults")
    leaf(config, "show", cmd_config_show, "effective configuration")
    leaf(config, "save", cmd_config_save, "remember --samples/--tol-scale/--workers/--preset")
    leaf(config, "reset", cmd_config_reset, "forget stored settings")

    preset = group("preset", "algebra-set presets")
    leaf(preset, "list", cmd_preset_list, "built-in and user presets")
    leaf(preset, "show", cmd_preset_show, "algebras of a preset").add_argument("name")
    p = leaf(preset, "save", cmd_preset_save, "save a user preset")
    p.add_argument("name")
    p.add_argument("--algebra", action="append", required=True)
    leaf(preset, "delete", cmd_preset_delete, "delete a user preset").add_argument("name")

    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s", force=True)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    configure_logging(getattr(args, "verbose", 0) or 0)
    try:
        return args.handler(args)
    except (NotAnIsometry, FactorizationFailed, InvariantViolation) as exc:
        print_error(str(exc))
        return EXIT_FAILURE
    except (JordanConeError, UsageError) as exc:
        print_error(str(exc))
    except json.JSONDecodeError as exc:
        print_error(f"bad JSON: {exc}")
    except (ValueError, KeyError, TypeError) as exc:
        print_error(f"invalid input: {exc}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
