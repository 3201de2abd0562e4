"""Semianalytical coverage, spectral-efficiency and energy-efficiency engine.

Coverage of the typical user is computed with the gamma-dummy (Alzer)
approximation: an alternating binomial sum over products of interference
Laplace transforms, averaged over the serving geometry (direct-link
distance, reflected-link distance and the angle between them) on a
Gauss-Chebyshev quadrature grid.  Interferers enter through four thinned
point processes (LOS/NLOS base stations, LOS/NLOS reflectors, the latter
split again into active and idle) whose Laplace transforms share one
half-line integral template.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from ._quad import IntegrationError, gauss_legendre_01
from .association import (
    AssociationCase,
    bs_ris_distance,
    equivalent_los_distance,
    equivalent_nlos_distance,
    ris_case_density,
    ris_joint_expectation,
    serving_bs_density,
    side_condition,
)
from .beamforming import (
    mean_direct_interference_gain,
    mean_reflected_interference_gain,
    serving_gains,
)
from .config import NetworkConfig
from .propagation import LinkKind

_STATES = (LinkKind.LOS, LinkKind.NLOS)


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts and series depth for the semianalytical engine."""

    q1: int = 32  # serving-BS distance nodes
    q2: int = 32  # serving-reflector distance nodes
    q3: int = 16  # angle nodes
    w_alzer: int = 5  # terms in the gamma-dummy binomial sum
    tolerance: float = 1e-3  # relative accuracy target

    def __post_init__(self) -> None:
        for name in ("q1", "q2", "q3"):
            count = getattr(self, name)
            if not isinstance(count, int) or count < 4:
                raise ValueError(f"{name} must be an integer >= 4, got {count!r}")
        if not isinstance(self.w_alzer, int) or self.w_alzer < 1:
            raise ValueError(f"w_alzer must be a positive integer, got {self.w_alzer!r}")
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")


@dataclass
class CoverageResult:
    """Coverage probability with a per-association-case breakdown."""

    total: float
    by_case: dict
    engine: str
    meta: dict = field(default_factory=dict)


@dataclass
class EfficiencyResult:
    ase: float  # bit/s/Hz per m^2
    power_density: float  # W per m^2
    ee: float  # bit/s/Hz per J


class GcqNodes(NamedTuple):
    """Gauss-Chebyshev abscissas/weights for the three serving dimensions."""

    x: np.ndarray
    wx: np.ndarray
    y: np.ndarray
    wy: np.ndarray
    angle: np.ndarray
    w_angle: np.ndarray


def alzer_epsilon(w: int, printed_constant: bool = False) -> float:
    """Scale constant of the gamma-dummy SINR bound.

    W*(W!)^(-1/W) is the tight-bound constant for the CDF of a unit-mean
    gamma variable with shape W: it equals 1 at W=1 (where the bound is
    exact) and approaches e from below.  The variant W*(W!)^(1/W) is
    selectable for debugging comparisons but grows without bound, pushing
    the smoothed threshold to zero.
    """
    if w < 1:
        raise ValueError("w must be >= 1")
    factorial = math.factorial(w)
    if printed_constant:
        return w * factorial ** (1.0 / w)
    return w * factorial ** (-1.0 / w)


def _chebyshev_tan(count: int) -> tuple[np.ndarray, np.ndarray]:
    # tan map sending Chebyshev nodes on (-1, 1) to the positive half line
    k = np.arange(1, count + 1)
    theta = (2 * k - 1) * np.pi / (2 * count)
    arg = 0.25 * np.pi * np.cos(theta) + 0.25 * np.pi
    nodes = np.tan(arg)
    weights = np.pi**2 * np.sin(theta) / (4 * count * np.cos(arg) ** 2)
    return nodes, weights


def _chebyshev_angle(count: int) -> tuple[np.ndarray, np.ndarray]:
    # cosine map onto (0, 2*pi); weights average (the 1/(2*pi) is folded in)
    k = np.arange(1, count + 1)
    theta = (2 * k - 1) * np.pi / (2 * count)
    nodes = np.pi * (np.cos(theta) + 1.0)
    weights = np.pi * np.sin(theta) / (2 * count)
    return nodes, weights


def gcq_nodes(qspec: QuadratureSpec) -> GcqNodes:
    """Abscissa/weight tables for the serving-geometry integrals.

    x and y tables integrate over (0, inf); the angle table averages over
    (0, 2*pi), i.e. its weights sum to ~1.
    """
    x, wx = _chebyshev_tan(qspec.q1)
    y, wy = _chebyshev_tan(qspec.q2)
    angle, w_angle = _chebyshev_angle(qspec.q3)
    return GcqNodes(x=x, wx=wx, y=y, wy=wy, angle=angle, w_angle=w_angle)


# -- cell-load probabilities -------------------------------------------------


def active_prob_bs(cfg: NetworkConfig) -> float:
    """Probability a BS cell holds at least one user (3.5-moment fit)."""
    if cfg.lambda_bs <= 0.0:
        return 0.0
    return 1.0 - (1.0 + cfg.lambda_u / cfg.lambda_bs) ** -3.5


def ris_cell_occupancy(c, lambda_u: float, lambda_ris: float):
    """Occupancy probability of a reflector cell with side-condition factor c.

    The eligible-user region around a reflector is a half-plane sector; its
    effective cell is 1/c times larger than the isotropic Voronoi cell of a
    process with density lambda_ris / 2, hence the 2/c load scaling.
    """
    c = np.asarray(c, dtype=float)
    return 1.0 - (1.0 + 2.0 * lambda_u / (c * lambda_ris)) ** -3.5


@lru_cache(maxsize=64)
def _active_prob_ris_cached(cfg: NetworkConfig) -> float:
    def idle_kernel(x, y, v):
        c = side_condition(x, y, v)
        return (1.0 + 2.0 * cfg.lambda_u / (c * cfg.lambda_ris)) ** -3.5

    idle_mass = ris_joint_expectation(cfg, kernel=idle_kernel)
    total_mass = ris_joint_expectation(cfg)
    if total_mass <= 0.0:
        return 0.0
    return float(np.clip(1.0 - idle_mass / total_mass, 0.0, 1.0))


def active_prob_ris(cfg: NetworkConfig) -> float:
    """Probability a reflector cell holds at least one user.

    Expectation of the occupancy over the serving geometry (x, y, angle),
    normalized to the mass the serving-reflector densities capture.
    """
    if cfg.lambda_ris <= 0.0 or cfg.lambda_u <= 0.0 or cfg.lambda_bs <= 0.0:
        return 0.0
    return _active_prob_ris_cached(cfg)


# -- ambient reflected power -------------------------------------------------


def ris_interference_power(cfg: NetworkConfig) -> float:
    """Mean power scale re-radiated by an interfering reflector.

    Integrates the blockage-weighted dual-slope path loss over all BS
    distances beyond r_min and scales by pi * lambda_bs * P_bs.  The result
    multiplies the reflector-side gains in the reflected Laplace factors.
    """
    if cfg.lambda_bs <= 0.0:
        return 0.0
    if cfg.beta == 0.0 and cfg.alpha_los <= 1.0:
        raise ValueError("ambient reflected power diverges: beta=0 and alpha_los <= 1")
    if cfg.beta > 0.0 and cfg.alpha_nlos <= 1.0:
        raise ValueError("ambient reflected power diverges: alpha_nlos <= 1")

    def integrand(z):
        los = cfg.c_los * z**-cfg.alpha_los * np.exp(-cfg.beta * z)
        nlos = cfg.c_nlos * z**-cfg.alpha_nlos * -np.expm1(-cfg.beta * z)
        return los + nlos

    scale = max(1.0 / cfg.beta if cfg.beta > 0.0 else 10.0 * cfg.r_min, 10.0 * cfg.r_min)
    total = _halfline_integral(integrand, cfg.r_min, scale, 384)
    check = _halfline_integral(integrand, cfg.r_min, scale, 768)
    if abs(total - check) > 1e-9 * max(abs(check), 1e-30):
        raise IntegrationError("ambient reflected power integral did not converge")
    return float(np.pi * cfg.lambda_bs * cfg.p_bs_watt * check)


def _halfline_integral(fn, lower: float, scale: float, count: int) -> float:
    t, w = gauss_legendre_01(count)
    r = lower + scale * t / (1.0 - t)
    jac = scale / (1.0 - t) ** 2
    return float(np.sum(w * jac * fn(r)))


# -- interference Laplace transforms -----------------------------------------


def _set_parameters(set_kind: str, cfg: NetworkConfig) -> tuple[float, float]:
    """(spatial density, power*gain scale) of one interfering point set."""
    if set_kind == "bs":
        density = 2.0 * np.pi * cfg.lambda_bs * active_prob_bs(cfg)
        power_gain = cfg.p_bs_watt * mean_direct_interference_gain(cfg)
    elif set_kind == "ris":
        density = np.pi * cfg.lambda_ris * active_prob_ris(cfg)
        power_gain = ris_interference_power(cfg) * mean_reflected_interference_gain(cfg)
    elif set_kind == "ris_idle":
        density = np.pi * cfg.lambda_ris * (1.0 - active_prob_ris(cfg))
        power_gain = ris_interference_power(cfg) * mean_reflected_interference_gain(
            cfg, idle=True
        )
    else:
        raise ValueError(f"unknown interferer set {set_kind!r}")
    return float(density), float(power_gain)


def _state_parameters(state: LinkKind, cfg: NetworkConfig) -> tuple[float, float]:
    if state is LinkKind.LOS:
        return cfg.c_los, cfg.alpha_los
    return cfg.c_nlos, cfg.alpha_nlos


def laplace_interference(
    set_kind: str,
    state: LinkKind,
    s: float,
    exclusion: float,
    cfg: NetworkConfig,
) -> float:
    """Laplace transform of the interference from one thinned point set.

    set_kind: "bs", "ris" or "ris_idle"; state selects the LOS or NLOS
    thinning; exclusion is the guard radius of the serving link's void.
    """
    if s < 0.0:
        raise ValueError("s must be >= 0")
    if exclusion < 0.0:
        raise ValueError("exclusion must be >= 0")
    density, power_gain = _set_parameters(set_kind, cfg)
    if s == 0.0 or density == 0.0 or power_gain == 0.0:
        return 1.0
    intercept, exponent = _state_parameters(state, cfg)
    c = s * power_gain * intercept

    if state is LinkKind.LOS:
        def integrand(r):
            return np.exp(-cfg.beta * r) * -np.expm1(-c * r**-exponent) * r
    else:
        def integrand(r):
            return -np.expm1(-cfg.beta * r) * -np.expm1(-c * r**-exponent) * r

    scale = _tail_scale(state, exclusion, cfg)
    total = _halfline_integral(integrand, exclusion, scale, 192)
    check = _halfline_integral(integrand, exclusion, scale, 384)
    if abs(total - check) > 1e-8 * max(abs(check), 1e-12):
        raise IntegrationError("interference tail integral did not converge")
    return float(np.exp(-density * check))


def _tail_scale(state: LinkKind, exclusion: float, cfg: NetworkConfig) -> float:
    # support is bounded by the blockage decay for LOS sets and by the
    # pathloss rolloff otherwise; the map reaches far past `scale` anyway
    base = max(3.0 * exclusion, 100.0 * cfg.r_min)
    if state is LinkKind.LOS and cfg.beta > 0.0:
        return max(min(base, 5.0 / cfg.beta), 1.0 / cfg.beta)
    return base


# -- coverage evaluator ------------------------------------------------------

_TAIL_NODES = 48


class _CoverageEvaluator:
    """Precomputed grids and factor tables for one (cfg, quad) pair.

    Building the evaluator costs a few hundred ms; evaluating one threshold
    re-uses every geometry-dependent tensor and only re-exponentiates.
    """

    def __init__(self, cfg: NetworkConfig, quad: QuadratureSpec):
        if cfg.lambda_bs <= 0.0:
            raise ValueError("coverage requires lambda_bs > 0")
        self.cfg = cfg
        self.quad = quad
        self.has_ris = cfg.lambda_ris > 0.0
        self.sigma2 = cfg.noise_power_watt

        nodes = gcq_nodes(quad)
        # serving-BS distance grid, scaled to the nearest-point scale
        sx = 0.6 / math.sqrt(cfg.lambda_bs)
        self.x = sx * nodes.x
        self.fdw = [
            sx * nodes.wx * serving_bs_density(self.x, state, cfg) for state in _STATES
        ]
        self.v = nodes.angle
        self.wv = nodes.w_angle
        # serving-reflector grid; one global scale keeps the factor tables
        # two-dimensional (exclusions depend on y alone)
        if self.has_ris:
            sy = math.sqrt(2.0 / (np.pi * cfg.lambda_ris * 0.4))
            if cfg.beta > 0.0:
                sy = min(sy, 3.0 / cfg.beta)
            sy = max(sy, 10.0 * cfg.r_min)
        else:
            sy = 1.0
        self.y = sy * nodes.y
        wy = sy * nodes.wy

        xg = self.x[:, None, None]
        yg = self.y[None, :, None]
        vg = self.v[None, None, :]
        self.z = bs_ris_distance(xg, yg, vg, r_min=cfg.r_min)
        if self.has_ris:
            self.gw = [
                wy[None, :, None] * ris_case_density(yg, xg, vg, state, cfg)
                for state in _STATES
            ]
        else:
            shape = (quad.q1, quad.q2, quad.q3)
            self.gw = [np.zeros(shape), np.zeros(shape)]
        mass = self.gw[0].sum(axis=1) + self.gw[1].sum(axis=1)
        # conditional case masses cannot exceed one per (x, angle) node; far
        # off the grid's natural scale the tan-map tail can overshoot, which
        # would double-count signal mass, so rescale instead of clipping
        over = np.maximum(mass, 1.0)
        self.gw = [g / over[:, None, :] for g in self.gw]
        self.remainder = np.clip(1.0 - mass / over, 0.0, 1.0)
        # normalizer: total measure of the grid, so T->0 gives exactly 1
        self.norm = sum(float(w.sum()) for w in self.fdw) * float(self.wv.sum())

        self._build_signal_tables()
        self._build_factor_tables()

    # signal powers per association case

    def _build_signal_tables(self) -> None:
        cfg = self.cfg
        gain_direct, gain_reflected = serving_gains(cfg)
        power = cfg.p_bs_watt
        xl = np.maximum(self.x, cfg.r_min)
        yl = np.maximum(self.y, cfg.r_min)
        self.sig_direct = []
        amp_direct = []
        for state in _STATES:
            intercept, exponent = _state_parameters(state, cfg)
            loss = intercept * xl**-exponent
            self.sig_direct.append(power * gain_direct * loss)
            amp_direct.append(np.sqrt(power * gain_direct * loss))
        # reflected amplitude: BS->reflector leg state is mixed per node
        leg_bs = {}
        leg_user = {}
        for idx, state in enumerate(_STATES):
            intercept, exponent = _state_parameters(state, cfg)
            leg_bs[idx] = intercept * self.z**-exponent
            leg_user[idx] = intercept * yl**-exponent
        blocked = -np.expm1(-self.cfg.beta * self.z)
        self.state_prob = {0: 1.0 - blocked, 1: blocked}
        self.sig = {}
        for irho in range(2):
            for ixi in range(2):
                for ig in range(2):
                    amp_r = np.sqrt(
                        power * gain_reflected * leg_bs[ig] * leg_user[ixi][None, :, None]
                    )
                    self.sig[irho, ixi, ig] = (
                        amp_direct[irho][:, None, None] + amp_r
                    ) ** 2

    # half-line tables: J(c) = sum_k A[k]*(1 - exp(-c * B[k]))

    def _build_factor_tables(self) -> None:
        cfg = self.cfg
        chi_l_x = equivalent_los_distance(self.x, cfg)
        chi_n_x = equivalent_nlos_distance(self.x, cfg)
        # exclusion radius of each interference factor given the serving state
        bs_excl = {
            (0, 0): self.x, (0, 1): chi_l_x,  # LOS factor | serving LOS/NLOS
            (1, 0): chi_n_x, (1, 1): self.x,  # NLOS factor
        }
        self.bs_tables = {}
        for (fstate, serving), excl in bs_excl.items():
            self.bs_tables[fstate, serving] = self._tail_table(fstate, excl)
        self.ris_tables = {}
        self.ris_free_tables = {}
        if self.has_ris:
            chi_l_y = equivalent_los_distance(self.y, cfg)
            chi_n_y = equivalent_nlos_distance(self.y, cfg)
            ris_excl = {
                (0, 0): self.y, (0, 1): chi_l_y,
                (1, 0): chi_n_y, (1, 1): self.y,
            }
            for (fstate, serving), excl in ris_excl.items():
                self.ris_tables[fstate, serving] = self._tail_table(fstate, excl)
            for fstate in range(2):
                table = self._tail_table(fstate, np.array([0.0]))
                self.ris_free_tables[fstate] = (table[0][:, 0], table[1][:, 0])

        self.density_bs = 2.0 * np.pi * cfg.lambda_bs * active_prob_bs(cfg)
        if self.has_ris:
            p_active = active_prob_ris(cfg)
            self.density_ris = np.pi * cfg.lambda_ris * p_active
            self.density_idle = np.pi * cfg.lambda_ris * (1.0 - p_active)
            ambient = ris_interference_power(cfg)
            self.pg_ris = ambient * mean_reflected_interference_gain(cfg)
            self.pg_idle = ambient * mean_reflected_interference_gain(cfg, idle=True)
        self.pg_bs = cfg.p_bs_watt * mean_direct_interference_gain(cfg)

    def _tail_table(self, factor_state: int, exclusion: np.ndarray):
        cfg = self.cfg
        t, glw = gauss_legendre_01(_TAIL_NODES)
        state = _STATES[factor_state]
        scale = np.array(
            [_tail_scale(state, float(a), cfg) for a in np.atleast_1d(exclusion)]
        )
        a = np.atleast_1d(exclusion)[None, :]
        r = a + scale[None, :] * t[:, None] / (1.0 - t[:, None])
        jac = scale[None, :] / (1.0 - t[:, None]) ** 2
        if state is LinkKind.LOS:
            weight = np.exp(-cfg.beta * r)
        else:
            weight = -np.expm1(-cfg.beta * r)
        _, exponent = _state_parameters(state, cfg)
        return glw[:, None] * jac * weight * r, r**-exponent

    # factor exponents

    def _j_nodes_x(self, c, table):
        a, b = table  # (K, q1)
        if c.ndim == 1:
            return np.einsum("kx,kx->x", a, -np.expm1(-c[None, :] * b))
        return np.einsum("kx,kxyv->xyv", a, -np.expm1(-c[None] * b[:, :, None, None]))

    def _j_nodes_y(self, c, table):
        a, b = table  # (K, q2)
        if c.ndim == 1:
            # direct-signal mode: c varies along x, exclusion along y
            return np.einsum(
                "ky,kxy->xy", a, -np.expm1(-c[None, :, None] * b[:, None, :])
            )
        return np.einsum("ky,kxyv->xyv", a, -np.expm1(-c[None] * b[:, None, :, None]))

    def _j_free(self, c, table):
        a, b = table  # (K,)
        return np.einsum("k,kx->x", a, -np.expm1(-c[None, :] * b[:, None]))

    def _log_factors(self, s, irho: int, ixi: int | None, los_only: bool):
        """Sum of the factor exponents (log of the Laplace product) at s."""
        cfg = self.cfg
        expo = -(s * self.sigma2)
        intercepts = (cfg.c_los, cfg.c_nlos)
        factor_states = (0,) if los_only else (0, 1)
        for fstate in factor_states:
            c = s * self.pg_bs * intercepts[fstate]
            expo = expo - self.density_bs * self._j_nodes_x(c, self.bs_tables[fstate, irho])
        if self.has_ris:
            for fstate in factor_states:
                if ixi is None:
                    tables = self.ris_free_tables[fstate]
                    j_act = self._j_free(s * self.pg_ris * intercepts[fstate], tables)
                    j_idl = self._j_free(s * self.pg_idle * intercepts[fstate], tables)
                else:
                    tables = self.ris_tables[fstate, ixi]
                    j_act = self._j_nodes_y(s * self.pg_ris * intercepts[fstate], tables)
                    j_idl = self._j_nodes_y(s * self.pg_idle * intercepts[fstate], tables)
                expo = expo - self.density_ris * j_act - self.density_idle * j_idl
        return expo

    # public evaluation

    def evaluate(
        self,
        threshold: float,
        direct_signal: bool = False,
        los_only: bool = False,
        printed_constant: bool = False,
    ) -> CoverageResult:
        if threshold <= 0.0:
            raise ValueError("threshold must be positive")
        w_terms = self.quad.w_alzer
        eps = alzer_epsilon(w_terms, printed_constant=printed_constant)
        coefs = [
            (-1.0) ** (w + 1) * math.comb(w_terms, w) for w in range(1, w_terms + 1)
        ]

        by_case: dict[AssociationCase, float] = {}
        for irho, rho in enumerate(_STATES):
            # cases served through a reflector
            for ixi, xi in enumerate(_STATES):
                if self.has_ris:
                    value = self._case_value(
                        threshold, eps, coefs, irho, ixi, direct_signal, los_only
                    )
                else:
                    value = 0.0
                by_case[AssociationCase(rho, xi)] = value
            # no-reflector bucket: direct signal only
            by_case[AssociationCase(rho, None)] = self._bucket_value(
                threshold, eps, coefs, irho, los_only
            )

        total = sum(by_case.values()) / self.norm
        by_case = {case: val / self.norm for case, val in by_case.items()}
        clamped = not 0.0 <= total <= 1.0
        result_total = float(min(max(total, 0.0), 1.0))
        meta = {
            "quad": self.quad,
            "signal": "direct" if direct_signal else "combined",
            "los_only_interference": los_only,
            "clamped": clamped,
            "raw_total": float(total),
        }
        engine = "analytic-small-beta" if los_only else "analytic"
        return CoverageResult(result_total, by_case, engine, meta)

    def _case_value(self, threshold, eps, coefs, irho, ixi, direct_signal, los_only):
        if direct_signal:
            s_base = eps * threshold / self.sig_direct[irho]
            ksum = np.zeros((self.quad.q1, self.quad.q2))
            for w, coef in enumerate(coefs, start=1):
                s = w * s_base
                expo = -(s[:, None] * self.sigma2)
                intercepts = (self.cfg.c_los, self.cfg.c_nlos)
                for fstate in (0,) if los_only else (0, 1):
                    c = s * self.pg_bs * intercepts[fstate]
                    expo = expo - self.density_bs * self._j_nodes_x(
                        c, self.bs_tables[fstate, irho]
                    )[:, None]
                    if self.has_ris:
                        tables = self.ris_tables[fstate, ixi]
                        expo = expo - self.density_ris * self._j_nodes_y(
                            s * self.pg_ris * intercepts[fstate], tables
                        )
                        expo = expo - self.density_idle * self._j_nodes_y(
                            s * self.pg_idle * intercepts[fstate], tables
                        )
                ksum += coef * np.exp(expo)
            return float(
                np.einsum("x,v,xyv,xy->", self.fdw[irho], self.wv, self.gw[ixi], ksum)
            )
        acc = np.zeros((self.quad.q1, self.quad.q2, self.quad.q3))
        for ig in range(2):
            sig = self.sig[irho, ixi, ig]
            ksum = np.zeros_like(sig)
            for w, coef in enumerate(coefs, start=1):
                s = w * eps * threshold / sig
                ksum += coef * np.exp(self._log_factors(s, irho, ixi, los_only))
            acc += self.state_prob[ig] * ksum
        return float(
            np.einsum("x,v,xyv,xyv->", self.fdw[irho], self.wv, self.gw[ixi], acc)
        )

    def _bucket_value(self, threshold, eps, coefs, irho, los_only):
        s_base = eps * threshold / self.sig_direct[irho]
        ksum = np.zeros(self.quad.q1)
        for w, coef in enumerate(coefs, start=1):
            s = w * s_base
            expo = -(s * self.sigma2)
            intercepts = (self.cfg.c_los, self.cfg.c_nlos)
            for fstate in (0,) if los_only else (0, 1):
                c = s * self.pg_bs * intercepts[fstate]
                expo = expo - self.density_bs * self._j_nodes_x(
                    c, self.bs_tables[fstate, irho]
                )
                if self.has_ris:
                    tables = self.ris_free_tables[fstate]
                    expo = expo - self.density_ris * self._j_free(
                        s * self.pg_ris * intercepts[fstate], tables
                    )
                    expo = expo - self.density_idle * self._j_free(
                        s * self.pg_idle * intercepts[fstate], tables
                    )
            ksum += coef * np.exp(expo)
        weight = np.einsum("v,xv->x", self.wv, self.remainder)
        return float(np.sum(self.fdw[irho] * weight * ksum))


@lru_cache(maxsize=8)
def _get_evaluator(cfg: NetworkConfig, quad: QuadratureSpec) -> _CoverageEvaluator:
    return _CoverageEvaluator(cfg, quad)


def _resolve_quad(quad: QuadratureSpec | None) -> QuadratureSpec:
    return quad if quad is not None else QuadratureSpec()


def coverage_probability(
    threshold: float,
    cfg: NetworkConfig,
    quad: QuadratureSpec | None = None,
    printed_constant: bool = False,
) -> CoverageResult:
    """Coverage of the typical user with the reflected path in the signal."""
    ev = _get_evaluator(cfg, _resolve_quad(quad))
    return ev.evaluate(threshold, printed_constant=printed_constant)


def coverage_direct(
    threshold: float,
    cfg: NetworkConfig,
    quad: QuadratureSpec | None = None,
    printed_constant: bool = False,
) -> CoverageResult:
    """Coverage counting only the direct-link signal power.

    The interference field (including both reflector sets and their voids) is
    unchanged; only the serving signal drops the reflected amplitude.
    """
    ev = _get_evaluator(cfg, _resolve_quad(quad))
    return ev.evaluate(threshold, direct_signal=True, printed_constant=printed_constant)


def coverage_small_beta(
    threshold: float,
    cfg: NetworkConfig,
    quad: QuadratureSpec | None = None,
    printed_constant: bool = False,
) -> CoverageResult:
    """Reduced form for weak blockage: NLOS interference factors dropped.

    Valid when beta is small enough that NLOS serving weights are negligible;
    agrees with the full expression as beta -> 0.
    """
    ev = _get_evaluator(cfg, _resolve_quad(quad))
    return ev.evaluate(threshold, los_only=True, printed_constant=printed_constant)


# -- area spectral efficiency and energy efficiency --------------------------


def ase(
    threshold: float, cfg: NetworkConfig, quad: QuadratureSpec | None = None
) -> EfficiencyResult:
    """Area spectral efficiency in bit/s/Hz per m^2.

    When active reflectors outnumber active BSs every BS serves through a
    reflector; otherwise the surplus BSs serve direct links.
    """
    return energy_efficiency(threshold, cfg, quad)


def energy_efficiency(
    threshold: float, cfg: NetworkConfig, quad: QuadratureSpec | None = None
) -> EfficiencyResult:
    quad = _resolve_quad(quad)
    p_bs = active_prob_bs(cfg)
    p_ris = active_prob_ris(cfg)
    served_bs = cfg.lambda_bs * p_bs
    served_ris = cfg.lambda_ris * p_ris
    rate = math.log2(1.0 + threshold)
    if served_bs > 0.0:
        ev = _get_evaluator(cfg, quad)
        p_cov = ev.evaluate(threshold).total
        if served_bs > served_ris:
            p_dir = ev.evaluate(threshold, direct_signal=True).total
            spectral = (served_ris * p_cov + (served_bs - served_ris) * p_dir) * rate
        else:
            spectral = served_bs * p_cov * rate
    else:
        spectral = 0.0
    power = served_bs * (cfg.p0_watt + cfg.delta * cfg.p_bs_watt)
    power += served_ris * cfg.n_ris * cfg.p_elem_watt
    ee = spectral / power if power > 0.0 else 0.0
    return EfficiencyResult(ase=float(spectral), power_density=float(power), ee=float(ee))
