"""Fixed test corpus of small complexes and fixture regeneration."""

from __future__ import annotations

import json
from pathlib import Path

from .complexes import SimplicialComplex, boundary_simplex, discrete, from_facets, full_simplex, skeleton, void


def complex_corpus() -> dict[str, SimplicialComplex]:
    """Twelve complexes on at most four vertices."""
    d3 = full_simplex(4)
    return {
        "delta3_skel-1": void(4),
        "delta3_skel0": skeleton(d3, 0),
        "delta3_skel1": skeleton(d3, 1),
        "delta3_skel2": skeleton(d3, 2),
        "delta3": d3,
        "boundary_delta2": boundary_simplex(3),
        "discrete1": discrete(1),
        "discrete2": discrete(2),
        "discrete3": discrete(3),
        "path4": from_facets(4, [{1, 2}, {2, 3}, {3, 4}]),
        "cycle4": from_facets(4, [{1, 2}, {2, 3}, {3, 4}, {1, 4}]),
        "edge_plus_point": from_facets(3, [{1, 2}, {3}]),
    }


DIAGONAL_CASES = [
    # (space, complex, label)
    ("s1", skeleton(full_simplex(3), 0), "s1_m3_skel0"),
    ("s1", skeleton(full_simplex(5), 1), "s1_m5_skel1"),
    ("s2", skeleton(full_simplex(3), 0), "s2_m3_skel0"),
]


def _write(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def seed_corpus(out: Path) -> list[Path]:
    """Write the corpus complexes and golden reports for every acceptance check."""
    from .diagonal import abbcg_verify, euler_complement, euler_cross_check, second_decomp_verify
    from .polyprod import bbcg_verify, circle_pair, disk1, disk2
    from .complexes import discrete as _discrete
    from .retractile import product_diagram, splitting_verify
    from .spaces import space
    from .ssets import normalized_chains

    out = Path(out)
    written = []
    for name, K in complex_corpus().items():
        p = out / "complexes" / f"{name}.json"
        _write(p, K.to_json())
        written.append(p)
        for label, make in (("disk1", disk1), ("circle", circle_pair)):
            rep = bbcg_verify(K, [make()] * K.m)
            p = out / "bbcg" / f"{name}__{label}.json"
            _write(p, rep.to_json())
            written.append(p)
    p = out / "bbcg" / "moment_angle_two_points__disk2.json"
    _write(p, bbcg_verify(_discrete(2), [disk2(), disk2()]).to_json())
    written.append(p)
    S1 = normalized_chains(space("s1"))
    D, R = product_diagram([S1, S1, S1])
    p = out / "retractile" / "product_s1x3_stage3.json"
    _write(p, splitting_verify(D, R, 3).to_json())
    written.append(p)
    for sp, K, label in DIAGONAL_CASES:
        X = space(sp)
        p = out / "diagonal" / f"{label}.json"
        _write(p, second_decomp_verify(X, K).to_json())
        written.append(p)
        p = out / "euler" / f"{label}.json"
        _write(p, euler_cross_check(X, K, manifold_dim=int(sp[1:])))
        written.append(p)
    p = out / "euler" / "complement_formula.json"
    _write(
        p,
        {
            "s2_m3_skel0": euler_complement(2, 2, 3, skeleton(full_simplex(3), 0)),
            "s2_m5_skel1": euler_complement(2, 2, 5, skeleton(full_simplex(5), 1)),
        },
    )
    written.append(p)
    for n in (2, 3):
        p = out / "abbcg" / f"s1_n{n}.json"
        _write(p, abbcg_verify(space("s1"), n).to_json())
        written.append(p)
    return written
