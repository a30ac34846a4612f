"""End-to-end diagnostics for one instance and the bundled report.

Stages run in a fixed order (host, Schreier ball, geometry, random walks, isoperimetry,
cogrowth, separation) and the verdict is a pure function of their outputs and the configured
thresholds. Nothing in the report depends on wall-clock time except the stage log, which is kept
out of the serialized form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from diagnostics.amenability import (
    CheegerReport,
    DoublingReport,
    cheeger_search,
    doubling_check,
    interval_family,
)
from diagnostics.cogrowth import (
    CogrowthBoundReport,
    CogrowthSeries,
    cogrowth_equivalence,
    cogrowth_rho,
    count_closed_paths,
    verify_cogrowth_bound,
)
from diagnostics.geometry import (
    GeometryEstimates,
    coset_deficiency,
    estimate_delta_slim,
    estimate_delta_trim,
    quasiconvexity_epsilon,
    set_gromov_product,
    subgroup_vertices,
)
from diagnostics.walks import (
    DecayReport,
    MonteCarloSeries,
    ReturnSeries,
    SpectralEstimate,
    decay_sigma,
    estimate_rho,
    monte_carlo_returns,
    return_probabilities,
)
from groups.balls import BallGraph, cayley_ball
from groups.exceptions import ExactnessError, NotFoundError
from groups.presentations import Presentation, format_presentation
from schreier.core import IndexInfo, subgroup_index_info
from schreier.cosets import CosetMode, SchreierBall, schreier_ball
from separation.conjugacy import SeparatedPair, construct_separated_free
from storage.logging_compat import get_logger

from .config import InstanceConfig
from .stages import StageLog

logger = get_logger(__name__)

VERDICT_NONAMENABLE = "consistent with non-amenability"
VERDICT_AMENABLE = "amenable-looking (quasiconvex infinite-index hypothesis not met)"
VERDICT_INCONCLUSIVE = "inconclusive"


@dataclass
class DiagnosticsReport:
    config: InstanceConfig
    host: Presentation
    schreier: SchreierBall
    index: Optional[IndexInfo]
    returns: ReturnSeries
    spectral: SpectralEstimate
    decay: DecayReport
    cheeger: CheegerReport
    folner: CheegerReport
    doubling: DoublingReport
    interval_doubling: Tuple[DoublingReport, ...]
    cogrowth: CogrowthSeries
    geometry: Optional[GeometryEstimates] = None
    geometry_ball: Optional[BallGraph] = field(default=None, repr=False)
    cogrowth_bound: Optional[CogrowthBoundReport] = None
    monte_carlo: Optional[MonteCarloSeries] = None
    separation: Optional[SeparatedPair] = None
    verdict: str = VERDICT_INCONCLUSIVE
    notes: List[str] = field(default_factory=list)
    stages: StageLog = field(default_factory=StageLog, repr=False)

    @property
    def best_ratio(self):
        return min(self.cheeger.best_ratio, self.folner.best_ratio)

    def to_dict(self) -> dict:
        """The report as plain data (Fractions kept; see ``storage.export.canonicalize``)."""
        schreier = self.schreier.summary()
        if self.index is not None:
            schreier["index"] = str(self.index)
        amenability = {
            "returns": {
                "n_max": self.returns.n_max,
                "degree": self.returns.degree,
                "exact_horizon": self.returns.exact_horizon,
                "exact_through": self.returns.exact_through,
                "truncated": self.returns.truncated,
                "p_last": self.returns.p[-1],
            },
            "spectral": self.spectral.to_dict(),
            "decay": {
                "sigma": self.decay.sigma,
                "max_ratio": self.decay.max_ratio,
                "argmax": self.decay.argmax,
            },
            "cheeger": self.cheeger.to_dict(),
            "folner": self.folner.to_dict(),
            "doubling": self.doubling.to_dict(),
            "interval_doubling": [d.to_dict() for d in self.interval_doubling],
        }
        if self.monte_carlo is not None:
            mc = self.monte_carlo
            amenability["monte_carlo"] = {
                "walks": mc.walks,
                "seed": mc.seed,
                "workers": mc.workers,
                "p_hat": list(mc.p_hat),
                "stderr": list(mc.stderr),
                "censored": list(mc.censored),
                "notes": list(mc.notes),
            }
        cogrowth = {
            "alpha_hat": self.cogrowth.alpha_hat,
            "beta_hat": self.cogrowth.beta_hat,
            "exact_horizon": self.cogrowth.exact_horizon,
            "a": list(self.cogrowth.a),
            "b": list(self.cogrowth.b),
        }
        if self.cogrowth_bound is not None:
            bound = self.cogrowth_bound
            d = 2 * bound.k
            cogrowth["bound"] = bound.to_dict()
            cogrowth["formula_rho"] = cogrowth_rho(bound.alpha.alpha, d)
            cogrowth["formula_gap"] = abs(cogrowth_rho(bound.alpha.alpha, d) - self.spectral.rho_hat)
            cogrowth["equivalence_consistent"] = cogrowth_equivalence(
                self.spectral.rho_hat, bound.alpha.alpha, d
            )
        return {
            "instance": {
                "config": self.config.to_dict(),
                "host": format_presentation(self.host),
                "generators": [str(g) for g in self.schreier.generators],
            },
            "schreier": schreier,
            "geometry": self.geometry.to_dict() if self.geometry is not None else None,
            "amenability": amenability,
            "cogrowth": cogrowth,
            "separation": self.separation.to_dict() if self.separation is not None else None,
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def decide_verdict(
    config: InstanceConfig,
    spectral: SpectralEstimate,
    best_ratio,
    doubling: DoublingReport,
    bound: Optional[CogrowthBoundReport],
    free_host: bool,
) -> str:
    t = config.thresholds
    if spectral.rho_hat >= t.rho_amenable_min and best_ratio <= t.folner_amenable_max:
        return VERDICT_AMENABLE
    bound_ok = bound.passed if (free_host and bound is not None) else not free_host
    if spectral.rho_hat <= t.rho_nonamenable_max and not doubling.refuted and bound_ok:
        return VERDICT_NONAMENABLE
    return VERDICT_INCONCLUSIVE


def _geometry(config: InstanceConfig, host: Presentation, sb: SchreierBall):
    ball = cayley_ball(host, config.geometry_radius, budget=config.vertex_budget)
    sampled = config.delta_mode == "sampled"
    kwargs = {"seed": config.seed, "count": config.delta_samples} if sampled else {}
    trim = estimate_delta_trim(ball, config.delta_mode, **kwargs)
    slim = estimate_delta_slim(ball, config.delta_mode, **kwargs)
    epsilon, k_hat = {}, None
    core = sb.core
    if core is not None and core.rank > 0:
        members = subgroup_vertices(ball, core)
        epsilon["H"] = quasiconvexity_epsilon(ball, members)
        reps = sb.graph_at(min(config.geometry_radius, sb.radius)).words
        k_hat = max(coset_deficiency(ball, core, g).k_hat for g in reps)
    return ball, GeometryEstimates(trim.delta, trim.provenance, slim.delta, epsilon, k_hat)


def _interval_doubling(
    config: InstanceConfig, view, notes: List[str]
) -> Tuple[DoublingReport, ...]:
    out = []
    for k in range(1, config.interval_k_max + 1):
        longest = 2 * (view.radius - k) + 1
        lengths = list(range(2 * k + 1, longest + 1))
        if not lengths:
            break
        try:
            sets = interval_family(view, lengths)
        except ExactnessError:
            break
        out.append(doubling_check(view, k, sets=sets, q=config.doubling_q))
    if len(out) < config.interval_k_max:
        notes.append(
            f"interval doubling stopped at k = {len(out)} of {config.interval_k_max}: "
            f"radius {view.radius} leaves no room for longer intervals"
        )
    return tuple(out)


def run_pipeline(config: InstanceConfig, stages: Optional[StageLog] = None) -> DiagnosticsReport:
    stages = stages or StageLog()
    notes: List[str] = []

    with stages.stage("presentations", "host"):
        host = config.presentation()
        gens = config.generators()

    with stages.stage("schreier", "ball"):
        sb = schreier_ball(
            host,
            gens,
            config.radius,
            budget=config.vertex_budget,
            coset_budget=config.coset_budget,
        )
        index = subgroup_index_info(sb.core) if sb.mode is CosetMode.EXACT_FREE else None
        if index is not None and index.finite:
            notes.append(f"H has {index}")
        if not sb.certified:
            notes.append(f"Schreier ball not certified: {sb.unresolved} unresolved comparisons")

    with stages.stage("geometry", "estimates"):
        geometry_ball, geometry = _geometry(config, host, sb)

    with stages.stage("amenability", "random-walk"):
        returns = return_probabilities(sb, config.n_max)
        spectral = estimate_rho(returns)
        decay = decay_sigma(returns, spectral)
        monte_carlo = None
        if config.walks > 0:
            monte_carlo = monte_carlo_returns(
                sb, config.n_max, config.walks, config.seed, workers=config.workers
            )

    with stages.stage("amenability", "isoperimetry"):
        view = sb.view()
        cheeger = cheeger_search(view, config.max_subset_size, config.mode)
        folner = cheeger_search(view, config.folner_size, "greedy")
        doubling = doubling_check(
            view, config.doubling_k, max_size=config.max_subset_size, q=config.doubling_q
        )
        intervals = _interval_doubling(config, view, notes)

    with stages.stage("cogrowth", "closed-paths"):
        cogrowth = count_closed_paths(sb, config.n_max)
        bound = None
        if index is not None and not index.finite:
            bound = verify_cogrowth_bound(sb.core, n_max=config.n_max, ball=sb)
        elif index is not None:
            stages.skip("cogrowth", "bound", "finite index")
            notes.append("cogrowth bound skipped: finite index")

    separation = None
    if config.separation and index is not None and not index.finite and sb.core.rank > 0:
        with stages.stage("separation", "construct"):
            try:
                separation = construct_separated_free(
                    sb.core, config.separation_budget, search_length=config.separation_length
                )
            except NotFoundError as exc:
                notes.append(f"separation search: {exc}")
            if separation is not None and geometry_ball is not None and geometry is not None:
                h_vertices = subgroup_vertices(geometry_ball, sb.core)
                f_vertices = subgroup_vertices(geometry_ball, separation.core)
                geometry = GeometryEstimates(
                    geometry.delta_trim,
                    geometry.provenance,
                    geometry.delta_slim,
                    geometry.epsilon_qc,
                    geometry.k_deficiency,
                    set_gromov_product(geometry_ball, h_vertices, f_vertices),
                )
    elif config.separation:
        stages.skip("separation", "construct", "needs an infinite, infinite-index H in a free host")

    verdict = decide_verdict(
        config,
        spectral,
        min(cheeger.best_ratio, folner.best_ratio),
        doubling,
        bound,
        host.is_free,
    )
    logger.info(f"Verdict for {config.name}: {verdict}")
    return DiagnosticsReport(
        config=config,
        host=host,
        schreier=sb,
        index=index,
        returns=returns,
        spectral=spectral,
        decay=decay,
        cheeger=cheeger,
        folner=folner,
        doubling=doubling,
        interval_doubling=intervals,
        cogrowth=cogrowth,
        geometry=geometry,
        geometry_ball=geometry_ball,
        cogrowth_bound=bound,
        monte_carlo=monte_carlo,
        separation=separation,
        verdict=verdict,
        notes=notes,
        stages=stages,
    )
