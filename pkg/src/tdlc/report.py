"""Invariant pipelines assembled into deterministic report documents."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .cache import BallCache, cache_dir
from .localstructure import (build_exhaustion, exhaustion_factors, local_simple_content,
                             md_lower_bound_lsc, md_lower_bound_prime)
from .models import (BMUniversal, DirectedProduct, DirectedTree, EndStab, GroupModel, ModelError,
                     ProductWithFinite, model_from_spec)
from .modular import arc_labelling, md_lower_bound_modular
from .perm import DEFAULT_ORDER_BOUND, from_cycles
from .propertyz import ZMorphismError, arc_fibre_transitivity_check, verify_z_morphism, z_morphism
from .scale import (md_lower_bound_scale, orbit_growth, quotient_scale_check, scale_estimate,
                    tidy_coprime_certificate)
from .lattice import QPlusLattice
from .trees import TypedTranslation, WordMap

COMMANDS = ("md-bounds", "modular", "scale", "lsc", "propertyz", "quotient")
FORMATS = ("text", "json")
SCHEMA_VERSION = 1

# Values settled by arguments outside these pipelines, attached as metadata only.
KNOWN_VALUES = {
    json.dumps({"family": "full_aut", "d": 5}, sort_keys=True):
        "md = 5: no Cayley-Abels graph of degree 4 exists (local actions of degree 4 are ruled out "
        "case by case); the computed bounds stop at 4",
}


class ReportInputError(ValueError):
    """The spec or configuration does not fit the requested command."""


@dataclass
class RunConfig:
    spec: dict
    radius: int | None = None
    depth: int = 3
    order_bound: int = DEFAULT_ORDER_BOUND
    fmt: str = "text"
    cache: str | None = None
    growth_terms: int = 5
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.radius is not None and self.radius < 1:
            raise ReportInputError("radius must be positive")
        if self.depth < 1 or self.order_bound < 1 or self.growth_terms < 3:
            raise ReportInputError("depth, order bound and growth terms must be positive "
                                   "(growth terms at least 3)")
        if self.fmt not in FORMATS:
            raise ReportInputError(f"format must be one of {FORMATS}")

    def to_doc(self) -> dict:
        return {"radius": self.radius, "depth": self.depth, "order_bound": self.order_bound,
                "growth_terms": self.growth_terms}


def _model(cfg: RunConfig) -> GroupModel:
    try:
        return model_from_spec(cfg.spec)
    except ModelError as exc:
        raise ReportInputError(str(exc)) from exc


def _ball(m: GroupModel, r: int, cfg: RunConfig):
    d = cache_dir(cfg.cache)
    if d is None:
        return m.canonical_cayley_abels(r)
    return BallCache(d).ball(m, r)


def sample_translations(m: GroupModel) -> list:
    """Named hyperbolic elements with a ``power_label`` method, where the model provides them."""
    if isinstance(m, ProductWithFinite):
        return sample_translations(m.base)
    if isinstance(m, BMUniversal):
        out = []
        if from_cycles(m.d, (0, 1)) in m.F:
            out.append(("translation length 1", WordMap.translation(m.d, 1)))
        out.append(("translation length 2", WordMap.translation(m.d, 2)))
        return out
    if isinstance(m, DirectedTree):
        return [(f"shift along {c}", TypedTranslation(m.tree, (("out", c),))) for c in m.colours]
    if isinstance(m, EndStab):
        return [("shift toward the end", TypedTranslation(m.tree, (("up", "A"), ("up", "B")))),
                ("shift away from the end", TypedTranslation(m.tree, (("down", "A"), ("down", "B"))))]
    return []


# -- individual pipelines -----------------------------------------------------

def _modular(m, cfg) -> tuple[dict, QPlusLattice]:
    r = cfg.radius or 2
    lab = arc_labelling(m, _ball(m, r, cfg))
    H = QPlusLattice.generated_by(lab.labels.values())
    res = md_lower_bound_modular(H)
    doc = {"radius": r, "arc_labels": lab.to_doc()["labels"], "image": H.to_doc(),
           "unimodular": H.is_trivial(),
           "min_generating_cost": {"value": res.value, "generators": [str(g) for g in res.generators],
                                   "search_nodes": res.nodes}}
    return doc, H


def _scale(m, cfg) -> dict:
    items = []
    for name, g in sample_translations(m):
        s = orbit_growth(m, g, None, cfg.growth_terms)
        est = scale_estimate(s)
        item = {"element": name, "sizes": list(s.sizes), "estimate": est.to_doc()}
        if isinstance(m, DirectedTree):
            item["tidy_certificate"] = tidy_coprime_certificate(m, g).to_doc()
        items.append(item)
    return {"samples": items}


def _lsc(m, cfg, stability: bool = True) -> tuple[dict, object]:
    rep = local_simple_content(m, cfg.depth, order_bound=cfg.order_bound)
    doc = rep.to_doc()
    if stability:
        unions = []
        for order in ("bfs", "reverse"):
            e = build_exhaustion(m.canonical_cayley_abels(rep.radius), order)
            total: dict = {}
            for s in exhaustion_factors(m, e, order_bound=cfg.order_bound):
                for k, v in s.factors.items():
                    total[str(k)] = total.get(str(k), 0) + v
            unions.append(dict(sorted(total.items())))
        doc["factor_union"] = {"bfs": unions[0], "reverse": unions[1], "equal": unions[0] == unions[1]}
    return doc, rep


def _bound_doc(key, label, value, note=""):
    return {"bound": key, "label": label, "value": value, "note": note}


def _md_bounds(m, cfg) -> dict:
    spec_key = json.dumps(m.to_spec(), sort_keys=True)
    if m.is_compact:
        return {"lower": 0, "upper": 0, "verdict": "md = 0", "lower_bounds": [],
                "upper_bounds": [_bound_doc("compact", "one-vertex Cayley-Abels graph of a compact group", 0)],
                "notes": []}
    mod, H = _modular(m, cfg)
    lsc, rep = _lsc(m, cfg, stability=False)
    lsc_b, prime_b = md_lower_bound_lsc(rep), md_lower_bound_prime(rep)
    scale_doc = _scale(m, cfg)
    conv = [s["estimate"]["value"] for s in scale_doc["samples"] if s["estimate"]["converged"]]
    conv = [int(v) for v in conv if isinstance(v, int)]
    scale_v = md_lower_bound_scale(conv) if conv else None
    lowers = [
        _bound_doc("modular", "least generating cost of the modular image", mod["min_generating_cost"]["value"],
                   "unimodular: no information" if H.is_trivial() else f"image {H}"),
        _bound_doc("local_simple_content", "smallest symmetric group holding the local simple content, plus one",
                   lsc_b.value, lsc_b.note or f"stable factors {lsc['stable_factors']} at depth {rep.depth}"),
        _bound_doc("local_prime_content", "largest local prime plus one", prime_b.value,
                   prime_b.note or f"primes {lsc['primes']}"),
        _bound_doc("scale_primes", "largest prime dividing a sampled scale, plus one", scale_v,
                   "no converged scale samples" if scale_v is None else f"scales {sorted(set(conv))}"),
    ]
    uppers = [_bound_doc("canonical_graph", "degree of the canonical Cayley-Abels graph", m.degree)]
    lo = max(b["value"] for b in lowers if b["value"] is not None)
    hi = min(b["value"] for b in uppers)
    notes = []
    if spec_key in KNOWN_VALUES:
        notes.append(KNOWN_VALUES[spec_key])
    verdict = f"md = {lo}" if lo == hi else "inconclusive"
    return {"lower": lo, "upper": hi, "verdict": verdict, "lower_bounds": lowers, "upper_bounds": uppers,
            "notes": notes}


def _propertyz(m, cfg) -> dict:
    if not isinstance(m, (DirectedTree, DirectedProduct)):
        raise ReportInputError("propertyz needs a directed_tree or directed_product spec")
    r = cfg.radius or 3
    fibres = []
    try:
        for rr in range(max(1, r - 2), r + 1):
            ball = _ball(m, rr, cfg)
            zm = z_morphism(m, ball)
            chk = verify_z_morphism(zm, ball)
            fibres.append({"radius": rr, "base_fibre": chk.base_fibre})
    except ZMorphismError as exc:
        return {"radius": r, "applicable": False, "reason": str(exc)}
    base = [f["base_fibre"] for f in fibres]
    doc = {"radius": r, "applicable": True, "basis": zm.to_doc()["basis"], "checks": chk.to_doc(),
           "base_fibre_by_radius": fibres,
           "base_fibre_grows": len(base) > 1 and base[-1] > base[0]}
    if isinstance(m, DirectedTree):
        doc["arc_fibres"] = [arc_fibre_transitivity_check(m, s).to_doc() for s in range(1, cfg.depth + 1)]
    return doc


def _quotient(m, cfg) -> dict:
    if not isinstance(m, ProductWithFinite):
        raise ReportInputError("quotient needs a product_finite spec")
    samples = sample_translations(m.base)
    if not samples:
        raise ReportInputError("the base model provides no sample translation")
    name, g = samples[0]
    res = quotient_scale_check(m, g, cfg.extra.get("f"), N=cfg.growth_terms)
    return {"element": name, "base_sizes": list(res.base_sizes), "quotient_sizes": list(res.quotient_sizes),
            "scale": res.s_base.to_doc(), "scale_modulo_kernel": res.s_quotient.to_doc(), "equal": res.equal}


def run_report(cfg: RunConfig, command: str) -> dict:
    if command not in COMMANDS:
        raise ReportInputError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    m = _model(cfg)
    if command == "md-bounds":
        result = _md_bounds(m, cfg)
    elif command == "modular":
        result = _modular(m, cfg)[0]
    elif command == "scale":
        result = _scale(m, cfg)
    elif command == "lsc":
        doc, rep = _lsc(m, cfg)
        lb, pb = md_lower_bound_lsc(rep), md_lower_bound_prime(rep)
        doc["md_lower_bound"] = {"value": lb.value, "note": lb.note}
        doc["prime_lower_bound"] = {"value": pb.value, "note": pb.note}
        result = doc
    elif command == "propertyz":
        result = _propertyz(m, cfg)
    else:
        result = _quotient(m, cfg)
    return {"schema_version": SCHEMA_VERSION, "command": command, "spec": m.to_spec(),
            "config": cfg.to_doc(), "result": result}


# -- rendering ------------------------------------------------------------------

def to_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _text_lines(x, indent=0):
    pad = "  " * indent
    if isinstance(x, dict):
        for k in sorted(x):
            v = x[k]
            if isinstance(v, (dict, list)) and v:
                yield f"{pad}{k}:"
                yield from _text_lines(v, indent + 1)
            else:
                yield f"{pad}{k}: {json.dumps(v, sort_keys=True)}"
    elif isinstance(x, list):
        for v in x:
            if isinstance(v, (dict, list)) and v:
                yield f"{pad}-"
                yield from _text_lines(v, indent + 1)
            else:
                yield f"{pad}- {json.dumps(v, sort_keys=True)}"
    else:
        yield f"{pad}{json.dumps(x)}"


def to_text(doc: dict) -> str:
    head = f"{doc['command']} for {json.dumps(doc['spec'], sort_keys=True)}"
    res = doc["result"]
    lines = [head]
    if doc["command"] == "md-bounds":
        lines.append(f"verdict: {res['verdict']} (lower {res['lower']}, upper {res['upper']})")
    lines.extend(_text_lines(res))
    return "\n".join(lines) + "\n"


def render(doc: dict, fmt: str) -> str:
    return to_json(doc) if fmt == "json" else to_text(doc)
