"""Command-line front end.

Exit codes: 0 computed / PASS, 1 verification FAIL, 2 invalid input or a
hypothesis the requested check depends on does not hold.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .chains import ChainComplex, ChainError, homology, reduced_homology
from .complexes import ComplexError, SimplicialComplex
from .posets import PosetError
from .report import REPORT_VERSION, HypothesisError, Report
from .ssets import SSetError

log = logging.getLogger("susplit")

VERBS = ("homology", "bbcg", "retractile", "diagonal", "euler", "abbcg", "census")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    verb: str
    action: str | None = None
    inputs: dict = field(default_factory=dict)
    space: str | None = None
    stage: int | None = None
    power: int | None = None
    chi: int | None = None
    n: int | None = None
    m: int | None = None
    manifold_dim: int | None = None
    pairs: str | None = None
    reduced: bool = False
    output: str | None = None
    verbosity: int = 0

    def __post_init__(self):
        if self.verb not in VERBS:
            raise InputError(f"unknown verb {self.verb!r}")


def _load_json(path: str, what: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{what}: cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: {path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _complex(cfg: RunConfig) -> SimplicialComplex:
    path = cfg.inputs.get("complex")
    if not path:
        raise InputError("--complex is required")
    data = _load_json(path, "complex")
    if not isinstance(data, dict) or "m" not in data or "facets" not in data:
        raise InputError(f"complex: {path}: fields 'm' and 'facets' are required")
    return SimplicialComplex.from_json(data)


def _space(cfg: RunConfig):
    from .spaces import space

    if not cfg.space:
        raise InputError("--space is required")
    return space(cfg.space)


def _homology_verb(cfg: RunConfig) -> tuple[dict, int]:
    from .ssets import normalized_chains

    if cfg.inputs.get("chain"):
        C = ChainComplex.from_json(_load_json(cfg.inputs["chain"], "chain complex"))
        if cfg.reduced:
            C.augmented = True
    else:
        C = normalized_chains(_space(cfg))
    from .chains import verify

    rep = verify(C)
    if not rep.ok:
        # not a chain complex: malformed input rather than a failed verification
        return {"check": "homology", "status": "INVALID INPUT", "failures": rep.to_json()["failures"]}, EXIT_INPUT
    h = reduced_homology(C) if cfg.reduced else homology(C)
    return {
        "check": "reduced homology" if cfg.reduced else "homology",
        "status": "COMPUTED",
        "homology": h.to_json(),
        "groups": str(h),
        "cells": [len(b) for b in C.basis],
    }, EXIT_OK


def _pairs(cfg: RunConfig, K: SimplicialComplex):
    from .polyprod import MODELS, pair_from_json

    if cfg.inputs.get("input"):
        data = _load_json(cfg.inputs["input"], "bbcg input")
        try:
            K = SimplicialComplex.from_json(data["K"])
            pairs = [pair_from_json(p) for p in data["pairs"]]
        except KeyError as exc:
            raise InputError(f"bbcg input: missing field {exc}") from exc
        return K, pairs
    name = cfg.pairs or "disk1"
    if name not in MODELS:
        raise InputError(f"unknown pair model {name!r}; choose from {sorted(MODELS)}")
    return K, [MODELS[name]() for _ in range(K.m)]


def _bbcg_verb(cfg: RunConfig) -> Report:
    from .polyprod import bbcg_verify

    K = None if cfg.inputs.get("input") else _complex(cfg)
    K, pairs = _pairs(cfg, K)
    return bbcg_verify(K, pairs)


def _census_verb(cfg: RunConfig) -> Report:
    from .polyprod import based_space, census_report
    from .ssets import normalized_chains

    K = _complex(cfg)
    X = normalized_chains(_space(cfg))
    return census_report(K, based_space(X, cfg.space))


def _retractile_verb(cfg: RunConfig) -> Report:
    from .retractile import diagram_from_json, splitting_verify, validate_retractile

    if cfg.action not in (None, "verify"):
        raise InputError(f"unknown retractile action {cfg.action!r}")
    if not cfg.inputs.get("diagram"):
        raise InputError("--diagram is required")
    D, R = diagram_from_json(_load_json(cfg.inputs["diagram"], "diagram"))
    n = D.P.max_grade() if cfg.stage is None else cfg.stage
    val = validate_retractile(D, R)
    if not val.ok:
        raise HypothesisError(f"diagram is not retractile: {val.failures[0]}")
    return splitting_verify(D, R, n)


def _diagonal_verb(cfg: RunConfig) -> Report:
    from .diagonal import fibration_audit, diagonal_arrangement, second_decomp_verify

    K = _complex(cfg)
    X = _space(cfg)
    if cfg.action == "audit":
        return fibration_audit(diagonal_arrangement(X, K))
    if cfg.action not in (None, "verify"):
        raise InputError(f"unknown diagonal action {cfg.action!r}")
    return second_decomp_verify(X, K)


def _euler_verb(cfg: RunConfig) -> tuple[dict, int]:
    from .diagonal import euler_arrangement, euler_complement, euler_cross_check

    K = _complex(cfg)
    if cfg.action == "complement":
        if cfg.chi is None or cfg.n is None:
            raise InputError("euler complement needs --chi and --n")
        if cfg.manifold_dim is None:
            raise InputError("euler complement needs --manifold-dim (attests X is a closed connected manifold)")
        if cfg.manifold_dim != cfg.n:
            raise InputError("--manifold-dim must equal --n")
        m = K.m if cfg.m is None else cfg.m
        value = euler_complement(cfg.chi, cfg.n, m, K)
        return {
            "check": "euler complement",
            "status": "COMPUTED",
            "value": value,
            "chi_X": cfg.chi,
            "n": cfg.n,
            "m": m,
            "manifold_dim_attested": cfg.manifold_dim,
            "complex": K.to_json(),
        }, EXIT_OK
    if cfg.action == "arrangement":
        if cfg.chi is None:
            raise InputError("euler arrangement needs --chi")
        return {"check": "euler arrangement", "status": "COMPUTED", "value": euler_arrangement(cfg.chi, K)}, EXIT_OK
    if cfg.action == "cross-check":
        out = euler_cross_check(_space(cfg), K, cfg.manifold_dim)
        return out, EXIT_OK if out["status"] == "PASS" else EXIT_FAIL
    raise InputError(f"unknown euler action {cfg.action!r}")


def _abbcg_verb(cfg: RunConfig) -> Report:
    from .diagonal import abbcg_verify

    if cfg.power is None:
        raise InputError("--power is required")
    return abbcg_verify(_space(cfg), cfg.power)


HANDLERS = {
    "homology": _homology_verb,
    "bbcg": _bbcg_verb,
    "census": _census_verb,
    "retractile": _retractile_verb,
    "diagonal": _diagonal_verb,
    "euler": _euler_verb,
    "abbcg": _abbcg_verb,
}


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one verb; returns ``(exit code, report dict)``."""
    try:
        result = HANDLERS[cfg.verb](cfg)
    except HypothesisError as exc:
        return EXIT_INPUT, {"check": cfg.verb, "status": "REJECTED", "reason": str(exc)}
    except (InputError, ChainError, ComplexError, PosetError, SSetError, ValueError) as exc:
        return EXIT_INPUT, {"check": cfg.verb, "status": "INVALID INPUT", "reason": str(exc)}
    if isinstance(result, Report):
        return (EXIT_OK if result.ok else EXIT_FAIL), result.to_json()
    report, code = result
    return code, report


def render(report: dict) -> str:
    report = {"report_version": REPORT_VERSION, **report}
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="susplit", description=__doc__.splitlines()[0])
    ap.add_argument("--seed-corpus", metavar="DIR", help="regenerate acceptance fixtures into DIR and exit")
    ap.add_argument("-o", "--output", help="write the JSON report here instead of stdout")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="verb")

    def common(p):
        p.add_argument("-o", "--output", default=argparse.SUPPRESS)
        p.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)

    p = sub.add_parser("homology", help="(reduced) homology of a space or chain complex")
    p.add_argument("--space")
    p.add_argument("--chain", help="chain complex JSON")
    p.add_argument("--reduced", action="store_true")
    common(p)

    p = sub.add_parser("bbcg", help="polyhedral product splitting check")
    p.add_argument("--input", help='JSON {"K": ..., "pairs": [...]}')
    p.add_argument("--complex")
    p.add_argument("--pairs", help="pair model for every vertex (disk1, disk2, circle)")
    common(p)

    p = sub.add_parser("census", help="smash-power census for pairs (X, *)")
    p.add_argument("--complex", required=True)
    p.add_argument("--space", required=True)
    common(p)

    p = sub.add_parser("retractile", help="retractile diagram splitting check")
    p.add_argument("action", nargs="?", default="verify", choices=["verify"])
    p.add_argument("--diagram", required=True)
    p.add_argument("--stage", type=int)
    common(p)

    p = sub.add_parser("diagonal", help="diagonal arrangement checks")
    p.add_argument("action", nargs="?", default="verify", choices=["verify", "audit"])
    p.add_argument("--space", required=True)
    p.add_argument("--complex", required=True)
    common(p)

    p = sub.add_parser("euler", help="Euler characteristics of arrangements and complements")
    p.add_argument("action", choices=["complement", "arrangement", "cross-check"])
    p.add_argument("--chi", type=int)
    p.add_argument("--n", type=int, help="manifold dimension used in the formula")
    p.add_argument("--m", type=int)
    p.add_argument("--complex", required=True)
    p.add_argument("--manifold-dim", type=int, dest="manifold_dim")
    p.add_argument("--space")
    common(p)

    p = sub.add_parser("abbcg", help="degeneracy-strata splitting of X^n")
    p.add_argument("--space", required=True)
    p.add_argument("--power", type=int, required=True)
    common(p)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    inputs = {k: getattr(ns, k) for k in ("complex", "chain", "input", "diagram") if getattr(ns, k, None)}
    return RunConfig(
        verb=ns.verb,
        action=getattr(ns, "action", None),
        inputs=inputs,
        space=getattr(ns, "space", None),
        stage=getattr(ns, "stage", None),
        power=getattr(ns, "power", None),
        chi=getattr(ns, "chi", None),
        n=getattr(ns, "n", None),
        m=getattr(ns, "m", None),
        manifold_dim=getattr(ns, "manifold_dim", None),
        pairs=getattr(ns, "pairs", None),
        reduced=getattr(ns, "reduced", False),
        output=ns.output,
        verbosity=ns.verbose,
    )


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if ns.verbose > 1 else logging.INFO if ns.verbose else logging.WARNING)
    if ns.seed_corpus:
        from .corpus import seed_corpus

        for path in seed_corpus(Path(ns.seed_corpus)):
            log.info("wrote %s", path)
        return EXIT_OK
    if not ns.verb:
        ap.print_usage(sys.stderr)
        return EXIT_INPUT
    cfg = config_from_args(ns)
    code, report = run(cfg)
    text = render(report)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    log.info("%s: %s", cfg.verb, report.get("status"))
    return code


if __name__ == "__main__":
    sys.exit(main())
