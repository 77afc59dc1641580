"""Model -> DSF -> vulnerabilities -> Delta -> realization -> verdict."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import fraction_to_str
from .dsf import DsfPair, dsf_of, h_matrix, transfer_function
from .netmodel import LinearModel, ModelDiagnostics, validate_model
from .perturb import (
    EXISTING,
    LinkCandidate,
    LinkPerturbation,
    PerturbationError,
    synthesize_delta,
    vulnerability_map,
)
from .ratfun import TransferMatrix, rf_eval, to_fraction
from .realize import AugmentedRealization, InstabilityReport, unwind, verify_instability


@dataclass
class PipelineConfig:
    mode: str = EXISTING
    link: tuple[int, int] | None = None  # 1-based (i, j)
    epsilon: Fraction = Fraction(1, 1000)
    allpass_pole: Fraction = Fraction(1)
    allpass_order: int = 2
    shape: str = "allpass"

    def __post_init__(self):
        self.epsilon = to_fraction(self.epsilon)
        self.allpass_pole = to_fraction(self.allpass_pole)
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.allpass_pole <= 0:
            raise ValueError("allpass pole must be > 0")


@dataclass
class Analysis:
    model: LinearModel
    diagnostics: ModelDiagnostics
    dsf: DsfPair
    H: TransferMatrix
    G: TransferMatrix
    candidates: list[LinkCandidate]
    mode: str


@dataclass
class Destabilization:
    analysis: Analysis
    candidate: LinkCandidate
    perturbation: LinkPerturbation
    realization: AugmentedRealization
    instability: InstabilityReport
    config: PipelineConfig = field(default_factory=PipelineConfig)


def analyze(model: LinearModel, mode: str = EXISTING) -> Analysis:
    diag = validate_model(model)
    if not diag.stable:
        raise PerturbationError(f"model is {diag.message}")
    dsf = dsf_of(model)
    H = h_matrix(dsf)
    G = transfer_function(dsf, H)
    return Analysis(model, diag, dsf, H, G, vulnerability_map(H, model, mode), mode)


def choose_link(analysis: Analysis, link: tuple[int, int] | None) -> LinkCandidate:
    if link is None:
        if not analysis.candidates:
            raise PerturbationError(f"no {analysis.mode} links to perturb")
        return analysis.candidates[0]
    i, j = link[0] - 1, link[1] - 1
    for c in analysis.candidates:
        if (c.source, c.target) == (i, j):
            return c
    p = analysis.H.rows
    if not (0 <= i < p and 0 <= j < p):
        raise PerturbationError(f"link {link[0]},{link[1]} is outside the exposed states 1..{p}")
    raise PerturbationError(f"link {link[0]},{link[1]} is not a candidate in {analysis.mode} mode")


def destabilize(model: LinearModel, cfg: PipelineConfig | None = None) -> Destabilization:
    cfg = cfg or PipelineConfig()
    analysis = analyze(model, cfg.mode)
    cand = choose_link(analysis, cfg.link)
    pert = synthesize_delta(cand, analysis.H[cand.source, cand.target], cfg.epsilon,
                            cfg.allpass_pole, cfg.allpass_order, cfg.shape)
    aug = unwind(model, analysis.dsf, pert)
    return Destabilization(analysis, cand, pert, aug, verify_instability(aug), cfg)


# ---------------------------------------------------------------- reporting


def sig(x: float) -> float:
    """Six significant digits, no negative zero."""
    v = float(f"{float(x):.6g}")
    return 0.0 if v == 0 else v


def _complex(z: complex) -> list[float]:
    return [sig(z.real), sig(z.imag)]


def exact_vulnerability(analysis: Analysis, c: LinkCandidate) -> str | None:
    if c.worst_frequency == 0.0:
        return fraction_to_str(abs(rf_eval(analysis.H[c.source, c.target], 0)))
    return None


def _freq(w: float):
    return "inf" if math.isinf(w) else sig(w)


def analysis_dict(a: Analysis) -> dict:
    m = a.model
    return {
        "model": {
            "n": m.n,
            "labels": list(m.labels),
            "exposed": [m.labels[k] for k in m.exposed],
        },
        "stability": {
            "verdict": a.diagnostics.message,
            "eigenvalues": [_complex(z) for z in a.diagnostics.eigenvalues],
        },
        "mode": a.mode,
        "vulnerabilities": [
            {
                "i": c.source + 1,
                "j": c.target + 1,
                "existing": c.existing,
                "V": sig(c.vulnerability),
                "V_exact": exact_vulnerability(a, c),
                "omega": _freq(c.worst_frequency),
            }
            for c in a.candidates
        ],
    }


def report_dict(d: Destabilization) -> dict:
    doc = analysis_dict(d.analysis)
    p, aug, inst = d.perturbation, d.realization, d.instability
    terms = []
    if aug.decomposition is not None:
        for t in aug.decomposition.terms:
            terms.append({
                "pole": _complex(t.pole),
                "residues": [sig(np.real(c)) for c in t.residues],
            })
    doc.update({
        "link": {"i": p.source + 1, "j": p.target + 1},
        "delta": {
            "row": p.target + 1,
            "column": p.source + 1,
            "expression": str(p.entry),
            "nominal": str(p.nominal_entry),
            "gain": fraction_to_str(p.gain),
            "sign": p.sign,
            "allpass_pole": fraction_to_str(p.allpass_pole),
            "allpass_order": p.allpass_order,
            "epsilon": fraction_to_str(p.epsilon),
        },
        "d": {
            "expression": str(aug.d),
            "alpha": sig(aug.alpha),
            "beta": sig(aug.beta),
            "terms": terms,
        },
        "realization": {
            "labels": list(aug.labels),
            "A_tilde": [[sig(x) for x in row] for row in aug.A_tilde],
            "b_tilde": [sig(x) for x in aug.b_tilde],
        },
        "spectrum": [_complex(z) for z in inst.spectrum],
        "lambda_eps": _complex(inst.lambda_eps),
        "verdict": str(inst.verdict),
    })
    return doc
