"""System-level Monte Carlo engine on sampled point processes.

Every quantity the analytic engine derives through Laplace functionals is
realized here directly: deployments are drawn as Poisson point processes,
link states per link, beams from the actual geometry, and cell activity from
the sampled users. The typical user sits at the disk center; interferers are
sampled out to the full radius so edge effects only bias against coverage.

The per-trial draw order is fixed (deployment, then link states, then beam
angles, then activity), so identical seeds reproduce identical samples and
trials can be evaluated in any order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .analytics import CoverageResult, active_prob_bs, active_prob_ris
from .association import AssociationCase
from .beamforming import fejer_kernel, serving_gains, spatial_frequency
from .config import NetworkConfig
from .propagation import BlockageSegment, LinkKind, blockage_density

_TWO_PI = 2.0 * math.pi
_Z95 = 1.959963984540054  # two-sided 95% normal quantile

# blockage segment lengths drawn uniformly from this range [m]
BLOCKAGE_LENGTH_RANGE = (5.0, 15.0)


@dataclass(frozen=True, eq=False)
class Deployment:
    """One sampled realization of the network geometry."""

    bs_points: np.ndarray = field(repr=False)     # (n_bs, 2) [m]
    ris_points: np.ndarray = field(repr=False)    # (n_ris, 2) [m]
    ris_normals: np.ndarray = field(repr=False)   # (n_ris,) coated-face normal [rad]
    user_points: np.ndarray = field(repr=False)   # (n_user, 2) [m]
    radius: float                                 # simulation disk radius [m]
    rng_seed: int | None = None
    blockage_segments: tuple[BlockageSegment, ...] | None = None

    def __post_init__(self) -> None:
        for name in ("bs_points", "ris_points", "user_points"):
            pts = getattr(self, name)
            if pts.ndim != 2 or pts.shape[1] != 2:
                raise ValueError(f"{name} must be an (n, 2) array, got {pts.shape}")
            if pts.size and np.hypot(pts[:, 0], pts[:, 1]).max() > self.radius * (1 + 1e-9):
                raise ValueError(f"{name} contains points outside the simulation disk")
        if self.ris_normals.shape != (self.ris_points.shape[0],):
            raise ValueError("ris_normals must hold one angle per RIS")


@dataclass(frozen=True)
class SinrSample:
    """SINR of the typical user in one realization."""

    sinr: float                    # linear ratio
    serving_case: AssociationCase
    signal_w: float
    interference_w: float
    noise_w: float
    # state of the serving BS to serving RIS leg; None without a serving RIS
    bs_ris_state: LinkKind | None = None


@dataclass(frozen=True, eq=False)
class SinrBatch:
    """SINR draws plus association codes for a block of independent trials.

    State codes: 0 LOS, 1 NLOS, -1 no serving RIS (for the RIS columns).
    """

    sinr: np.ndarray        # (trials,)
    bs_state: np.ndarray    # (trials,) int8
    ris_state: np.ndarray   # (trials,) int8
    leg_state: np.ndarray   # (trials,) int8
    radius: float
    seed: int


def default_radius(cfg: NetworkConfig) -> float:
    """Simulation disk radius covering several nearest-neighbor scales."""
    if cfg.lambda_bs <= 0.0:
        raise ValueError("default radius requires lambda_bs > 0")
    return 5.0 / math.sqrt(cfg.lambda_bs * math.pi)


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    # counter-based: every (seed, trial) pair owns an independent stream
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(trial,))
    return np.random.Generator(np.random.Philox(seq))


def _disk_points(rng: np.random.Generator, count: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.random(count))
    ang = rng.uniform(0.0, _TWO_PI, count)
    return np.column_stack((r * np.cos(ang), r * np.sin(ang)))


def _sample(
    cfg: NetworkConfig,
    radius: float,
    rng: np.random.Generator,
    geometric_blockage: bool,
    seed: int | None = None,
) -> Deployment:
    area = math.pi * radius**2
    n_bs = rng.poisson(cfg.lambda_bs * area)
    n_ris = rng.poisson(cfg.lambda_ris * area)
    n_user = rng.poisson(cfg.lambda_u * area)
    bs = _disk_points(rng, n_bs, radius)
    ris = _disk_points(rng, n_ris, radius)
    normals = rng.uniform(0.0, _TWO_PI, n_ris)
    users = _disk_points(rng, n_user, radius)
    segments = None
    if geometric_blockage:
        lo, hi = BLOCKAGE_LENGTH_RANGE
        lam_b = blockage_density(cfg.beta, 0.5 * (lo + hi))
        # margin so segments whose midpoint falls outside can still cut links
        reach = radius + hi
        n_seg = rng.poisson(lam_b * math.pi * reach**2)
        mid = _disk_points(rng, n_seg, reach)
        length = rng.uniform(lo, hi, n_seg)
        orient = rng.uniform(0.0, math.pi, n_seg)
        segments = tuple(
            BlockageSegment((mid[i, 0], mid[i, 1]), length[i], orient[i])
            for i in range(n_seg)
        )
    return Deployment(bs, ris, normals, users, radius, seed, segments)


def sample_deployment(
    cfg: NetworkConfig,
    radius: float | None = None,
    seed: int = 0,
    geometric_blockage: bool = False,
) -> Deployment:
    """Draw one deployment; identical seeds give identical point sets."""
    if radius is None:
        radius = default_radius(cfg)
    if radius <= 0.0:
        raise ValueError(f"radius must be positive, got {radius}")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    return _sample(cfg, radius, rng, geometric_blockage, seed)


# -- geometric blockage -------------------------------------------------------


def _segment_arrays(segments: Sequence[BlockageSegment]) -> tuple[np.ndarray, np.ndarray]:
    ends = np.array([[*seg.endpoints[0], *seg.endpoints[1]] for seg in segments])
    if ends.size == 0:
        ends = ends.reshape(0, 4)
    return ends[:, :2], ends[:, 2:]


def _blocked(a: np.ndarray, b: np.ndarray, seg_p: np.ndarray, seg_q: np.ndarray) -> np.ndarray:
    """Whether each a[i] -> b[i] link crosses any segment (proper crossings)."""
    if seg_p.shape[0] == 0:
        return np.zeros(a.shape[0], dtype=bool)

    def cross(u, v):
        return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]

    ab = (b - a)[:, None, :]
    pq = (seg_q - seg_p)[None, :, :]
    d1 = cross(ab, seg_p[None, :, :] - a[:, None, :])
    d2 = cross(ab, seg_q[None, :, :] - a[:, None, :])
    d3 = cross(pq, a[:, None, :] - seg_p[None, :, :])
    d4 = cross(pq, b[:, None, :] - seg_p[None, :, :])
    return ((d1 * d2 < 0.0) & (d3 * d4 < 0.0)).any(axis=1)


# -- one realization ----------------------------------------------------------


def _los_draw(rng: np.random.Generator, dist: np.ndarray, beta: float) -> np.ndarray:
    return rng.random(dist.shape) < np.exp(-beta * dist)


def _pathloss(dist: np.ndarray, los: np.ndarray, cfg: NetworkConfig) -> np.ndarray:
    d = np.maximum(dist, cfg.r_min)
    return np.where(los, cfg.c_los * d**-cfg.alpha_los, cfg.c_nlos * d**-cfg.alpha_nlos)


def _angles(vec: np.ndarray) -> np.ndarray:
    return np.arctan2(vec[..., 1], vec[..., 0])


class _Realization:
    """Scratch state of one trial; splits the long computation into steps."""

    def __init__(
        self,
        dep: Deployment,
        cfg: NetworkConfig,
        rng: np.random.Generator,
        draw_serving_gains: bool,
        bernoulli_activity: bool,
    ):
        self.dep = dep
        self.cfg = cfg
        self.rng = rng
        self.draw_serving_gains = draw_serving_gains
        self.bernoulli_activity = bernoulli_activity
        self.geometric = dep.blockage_segments is not None
        if self.geometric:
            self.seg_p, self.seg_q = _segment_arrays(dep.blockage_segments)

    def _typical_los(self, points: np.ndarray) -> np.ndarray:
        """LOS states of links from the origin, per the blockage mode."""
        dist = np.hypot(points[:, 0], points[:, 1])
        if self.geometric:
            origin = np.zeros_like(points)
            return ~_blocked(origin, points, self.seg_p, self.seg_q)
        return _los_draw(self.rng, dist, self.cfg.beta)

    def run(self) -> SinrSample:
        dep, cfg, rng = self.dep, self.cfg, self.rng
        n_bs = dep.bs_points.shape[0]
        if n_bs == 0:
            raise ValueError("deployment has no base stations")

        # link states toward the typical user, then the BS-RIS leg matrix
        self.bs_dist = np.hypot(dep.bs_points[:, 0], dep.bs_points[:, 1])
        self.bs_los = self._typical_los(dep.bs_points)
        self.ris_dist = np.hypot(dep.ris_points[:, 0], dep.ris_points[:, 1])
        self.ris_los = self._typical_los(dep.ris_points)
        diff = dep.bs_points[:, None, :] - dep.ris_points[None, :, :]
        self.leg_dist = np.hypot(diff[..., 0], diff[..., 1])
        if self.geometric and self.leg_dist.size:
            a = np.repeat(dep.bs_points, dep.ris_points.shape[0], axis=0)
            b = np.tile(dep.ris_points, (n_bs, 1))
            self.leg_los = ~_blocked(a, b, self.seg_p, self.seg_q).reshape(self.leg_dist.shape)
        else:
            self.leg_los = _los_draw(rng, self.leg_dist, cfg.beta)

        self._associate()
        self._activity()
        signal = self._signal()
        interference = self._interference()
        noise = cfg.noise_power_watt
        sinr = signal / (interference + noise)

        rho = LinkKind.LOS if self.bs_los[self.serving_bs] else LinkKind.NLOS
        if self.serving_ris is None:
            case = AssociationCase(rho, None)
            leg = None
        else:
            xi = LinkKind.LOS if self.ris_los[self.serving_ris] else LinkKind.NLOS
            case = AssociationCase(rho, xi)
            leg_los = self.leg_los[self.serving_bs, self.serving_ris]
            leg = LinkKind.LOS if leg_los else LinkKind.NLOS
        return SinrSample(float(sinr), case, float(signal), float(interference), noise, leg)

    def _associate(self) -> None:
        """Serving BS by max biased received power, then the strongest
        eligible reflector judged on its user-side leg."""
        dep, cfg = self.dep, self.cfg
        metric_bs = _pathloss(self.bs_dist, self.bs_los, cfg)
        self.serving_bs = int(np.argmax(metric_bs))
        bs0 = dep.bs_points[self.serving_bs]

        normals = np.column_stack((np.cos(dep.ris_normals), np.sin(dep.ris_normals)))
        user_side = np.einsum("ij,ij->i", -dep.ris_points, normals) > 0.0
        bs_side = np.einsum("ij,ij->i", bs0[None, :] - dep.ris_points, normals) > 0.0
        eligible = user_side & bs_side
        if eligible.any():
            metric_ris = np.where(
                eligible, _pathloss(self.ris_dist, self.ris_los, cfg), -np.inf
            )
            self.serving_ris = int(np.argmax(metric_ris))
        else:
            self.serving_ris = None

    def _activity(self) -> None:
        """Mark loaded BSs and RISs from the sampled users' own associations."""
        dep, cfg, rng = self.dep, self.cfg, self.rng
        n_bs = dep.bs_points.shape[0]
        n_ris = dep.ris_points.shape[0]
        self.bs_active = np.zeros(n_bs, dtype=bool)
        self.ris_active = np.zeros(n_ris, dtype=bool)
        self.bs_active[self.serving_bs] = True
        if self.serving_ris is not None:
            self.ris_active[self.serving_ris] = True

        if self.bernoulli_activity:
            self.bs_active |= rng.random(n_bs) < active_prob_bs(cfg)
            self.ris_active |= rng.random(n_ris) < active_prob_ris(cfg)
            return

        users = dep.user_points
        if users.shape[0] == 0:
            return
        # other users associate exactly like the typical one; their link
        # states stay analytic draws even in geometric mode (they only set
        # cell occupancy, not any path toward the origin)
        d_ub = np.hypot(
            users[:, 0, None] - dep.bs_points[None, :, 0],
            users[:, 1, None] - dep.bs_points[None, :, 1],
        )
        los_ub = _los_draw(rng, d_ub, cfg.beta)
        serving = np.argmax(_pathloss(d_ub, los_ub, cfg), axis=1)
        self.bs_active[np.unique(serving)] = True

        if n_ris == 0:
            return
        d_ur = np.hypot(
            users[:, 0, None] - dep.ris_points[None, :, 0],
            users[:, 1, None] - dep.ris_points[None, :, 1],
        )
        los_ur = _los_draw(rng, d_ur, cfg.beta)
        normals = np.column_stack((np.cos(dep.ris_normals), np.sin(dep.ris_normals)))
        to_user = users[:, None, :] - dep.ris_points[None, :, :]
        user_side = np.einsum("uij,ij->ui", to_user, normals) > 0.0
        to_bs = dep.bs_points[serving][:, None, :] - dep.ris_points[None, :, :]
        bs_side = np.einsum("uij,ij->ui", to_bs, normals) > 0.0
        metric = np.where(
            user_side & bs_side, _pathloss(d_ur, los_ur, cfg), -np.inf
        )
        best = np.argmax(metric, axis=1)
        served = best[np.isfinite(metric[np.arange(len(best)), best])]
        self.ris_active[np.unique(served)] = True

    def _signal(self) -> float:
        dep, cfg = self.dep, self.cfg
        power = cfg.p_bs_watt
        bs0 = dep.bs_points[self.serving_bs]
        ld0 = _pathloss(self.bs_dist[self.serving_bs], self.bs_los[self.serving_bs], cfg)

        if self.serving_ris is None:
            # beams can only aim at the direct path
            self.nu_bs0 = spatial_frequency(_angles(-bs0), cfg)
            self.nu_u0 = spatial_frequency(_angles(bs0), cfg)
            return float(power * ld0 * cfg.n_bs * cfg.n_u)

        ris0 = dep.ris_points[self.serving_ris]
        lu0 = _pathloss(self.ris_dist[self.serving_ris], self.ris_los[self.serving_ris], cfg)
        lg0 = _pathloss(
            self.leg_dist[self.serving_bs, self.serving_ris],
            self.leg_los[self.serving_bs, self.serving_ris],
            cfg,
        )
        gain_direct, gain_reflected = serving_gains(cfg)
        # spatial frequencies of the two departure/arrival pairs
        nu_d = spatial_frequency(_angles(-bs0), cfg)           # BS toward user
        nu_g = spatial_frequency(_angles(ris0 - bs0), cfg)     # BS toward RIS
        nu_ud = spatial_frequency(_angles(bs0), cfg)           # user toward BS
        nu_ur = spatial_frequency(_angles(ris0), cfg)          # user toward RIS
        if cfg.antenna_scheme == "scheme1":
            self.nu_bs0, self.nu_u0 = nu_g, nu_ur
            if self.draw_serving_gains:
                gain_direct = (
                    fejer_kernel(nu_d - nu_g, cfg.n_bs)
                    * fejer_kernel(nu_ud - nu_ur, cfg.n_u)
                    / (cfg.n_bs * cfg.n_u)
                )
        else:
            self.nu_bs0, self.nu_u0 = nu_d, nu_ud
            if self.draw_serving_gains:
                gain_reflected = (
                    fejer_kernel(nu_g - nu_d, cfg.n_bs) / cfg.n_bs
                    * fejer_kernel(nu_ur - nu_ud, cfg.n_u) / cfg.n_u
                    * cfg.n_ris**2
                )
        amp = math.sqrt(power * ld0 * gain_direct) + math.sqrt(
            power * lg0 * lu0 * gain_reflected
        )
        return float(amp**2)

    def _interference(self) -> float:
        dep, cfg, rng = self.dep, self.cfg, self.rng
        power = cfg.p_bs_watt
        n_bs = dep.bs_points.shape[0]
        n_ris = dep.ris_points.shape[0]

        # interfering beams target their own scheduled users; under the point
        # process those azimuths are uniform, so they are drawn directly
        beam_nu = spatial_frequency(rng.uniform(0.0, _TWO_PI, n_bs), cfg)
        beam_nu[self.serving_bs] = self.nu_bs0
        # phase profiles of loaded reflectors align to their own served pair
        prof_u = rng.uniform(0.0, _TWO_PI, n_ris)
        prof_g = rng.uniform(0.0, _TWO_PI, n_ris)
        profile_delta = spatial_frequency(prof_u, cfg) - spatial_frequency(prof_g, cfg)

        total = 0.0
        others = self.bs_active.copy()
        others[self.serving_bs] = False
        if others.any():
            nu_arr = spatial_frequency(_angles(-dep.bs_points[others]), cfg)
            g_bs = fejer_kernel(nu_arr - beam_nu[others], cfg.n_bs)
            nu_at_user = spatial_frequency(_angles(dep.bs_points[others]), cfg)
            g_u = fejer_kernel(nu_at_user - self.nu_u0, cfg.n_u)
            ld = _pathloss(self.bs_dist[others], self.bs_los[others], cfg)
            total += float(
                np.sum(power * ld * g_bs * g_u) / (cfg.n_bs * cfg.n_u)
            )

        if n_ris == 0 or not self.bs_active.any():
            return total

        active_bs = np.flatnonzero(self.bs_active)
        bs_pts = dep.bs_points[active_bs]
        for j in range(n_ris):
            if j == self.serving_ris:
                continue
            ris_j = dep.ris_points[j]
            vec = ris_j[None, :] - bs_pts                       # BS -> RIS
            nu_dep = spatial_frequency(_angles(vec), cfg)       # at the BS
            nu_inc = spatial_frequency(_angles(-vec), cfg)      # at the RIS
            lg = _pathloss(self.leg_dist[active_bs, j], self.leg_los[active_bs, j], cfg)
            incident = power * lg * fejer_kernel(nu_dep - beam_nu[active_bs], cfg.n_bs) / cfg.n_bs
            nu_out = spatial_frequency(_angles(-ris_j), cfg)    # RIS toward user
            if self.ris_active[j]:
                element = fejer_kernel(nu_out - nu_inc - profile_delta[j], cfg.n_ris)
            else:
                psi = rng.uniform(0.0, _TWO_PI, cfg.n_ris)
                phase = _TWO_PI * np.arange(cfg.n_ris)[None, :] * (nu_out - nu_inc)[:, None]
                element = np.abs(np.exp(1j * (phase - psi[None, :])).sum(axis=1)) ** 2
            nu_at_user = spatial_frequency(_angles(ris_j), cfg)  # user toward RIS
            g_u = fejer_kernel(nu_at_user - self.nu_u0, cfg.n_u) / cfg.n_u
            lu = _pathloss(self.ris_dist[j], self.ris_los[j], cfg)
            total += float(lu * g_u * np.sum(incident * element))
        return total


def realize_sinr(
    dep: Deployment,
    cfg: NetworkConfig,
    seed: int = 0,
    draw_serving_gains: bool = False,
    bernoulli_activity: bool = False,
) -> SinrSample:
    """Realize link states, beams and activity on a fixed deployment."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    return _Realization(dep, cfg, rng, draw_serving_gains, bernoulli_activity).run()


_STATE_CODE = {LinkKind.LOS: 0, LinkKind.NLOS: 1, None: -1}
_CODE_STATE = {0: LinkKind.LOS, 1: LinkKind.NLOS}


def sinr_samples(
    cfg: NetworkConfig,
    trials: int,
    radius: float | None = None,
    seed: int = 0,
    geometric_blockage: bool = False,
    draw_serving_gains: bool = False,
    bernoulli_activity: bool = False,
) -> SinrBatch:
    """Independent SINR draws; trial t uses the (seed, t) counter stream.

    Trials with an empty BS draw count as outage (sinr 0, NLOS direct case).
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if radius is None:
        radius = default_radius(cfg)
    sinr = np.zeros(trials)
    codes = np.zeros((trials, 3), dtype=np.int8)
    for t in range(trials):
        rng = _trial_rng(seed, t)
        dep = _sample(cfg, radius, rng, geometric_blockage)
        if dep.bs_points.shape[0] == 0:
            codes[t] = (1, -1, -1)
            continue
        sample = _Realization(
            dep, cfg, rng, draw_serving_gains, bernoulli_activity
        ).run()
        sinr[t] = sample.sinr
        codes[t, 0] = _STATE_CODE[sample.serving_case.bs_state]
        codes[t, 1] = _STATE_CODE[sample.serving_case.ris_state]
        codes[t, 2] = _STATE_CODE[sample.bs_ris_state]
    return SinrBatch(sinr, codes[:, 0], codes[:, 1], codes[:, 2], radius, seed)


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    p = successes / trials
    denom = 1.0 + z**2 / trials
    center = (p + z**2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z**2 / (4 * trials**2)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def empirical_coverage(
    threshold: float,
    cfg: NetworkConfig,
    trials: int,
    radius: float | None = None,
    seed: int = 0,
    samples: SinrBatch | None = None,
    **modes,
) -> CoverageResult:
    """Fraction of realizations with SINR at or above the threshold.

    Pass a precomputed ``samples`` batch to evaluate several thresholds on
    the same draws; its trials/radius/seed then take precedence.
    """
    if threshold < 0.0:
        raise ValueError(f"threshold must be nonnegative, got {threshold}")
    if samples is None:
        samples = sinr_samples(cfg, trials, radius, seed, **modes)
    n = samples.sinr.size
    covered = samples.sinr >= threshold
    by_case = {}
    for rho_code, rho in _CODE_STATE.items():
        for xi_code in (0, 1, -1):
            case = AssociationCase(rho, _CODE_STATE.get(xi_code))
            mask = (samples.bs_state == rho_code) & (samples.ris_state == xi_code)
            by_case[case] = float(np.sum(covered & mask)) / n
    low, high = wilson_interval(int(covered.sum()), n)
    meta = {
        "trials": n,
        "covered": int(covered.sum()),
        "ci_low": low,
        "ci_high": high,
        "radius": samples.radius,
        "seed": samples.seed,
    }
    return CoverageResult(float(covered.mean()), by_case, "montecarlo", meta)


def association_frequencies(
    cfg: NetworkConfig,
    trials: int,
    radius: float | None = None,
    seed: int = 0,
) -> dict[str, float]:
    """Empirical association-case frequencies over independent deployments.

    Keys: serving direct-link state (d_los, d_nlos), serving reflector state
    (u_los, u_nlos, no_ris) and the full reflected path state (g_los, g_nlos),
    where g_los needs both reflected legs unblocked.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if radius is None:
        radius = default_radius(cfg)
    counts = {key: 0 for key in ("d_los", "u_los", "u_nlos", "g_los")}
    done = 0
    for t in range(trials):
        rng = _trial_rng(seed, t)
        dep = _sample(cfg, radius, rng, geometric_blockage=False)
        if dep.bs_points.shape[0] == 0:
            continue
        real = _Realization(dep, cfg, rng, False, False)
        real.bs_dist = np.hypot(dep.bs_points[:, 0], dep.bs_points[:, 1])
        real.bs_los = _los_draw(rng, real.bs_dist, cfg.beta)
        real.ris_dist = np.hypot(dep.ris_points[:, 0], dep.ris_points[:, 1])
        real.ris_los = _los_draw(rng, real.ris_dist, cfg.beta)
        real._associate()
        done += 1
        if real.bs_los[real.serving_bs]:
            counts["d_los"] += 1
        if real.serving_ris is None:
            continue
        ris_is_los = bool(real.ris_los[real.serving_ris])
        counts["u_los" if ris_is_los else "u_nlos"] += 1
        if ris_is_los:
            bs0 = dep.bs_points[real.serving_bs]
            leg = np.hypot(*(dep.ris_points[real.serving_ris] - bs0))
            if rng.random() < math.exp(-cfg.beta * max(leg, cfg.r_min)):
                counts["g_los"] += 1
    if done == 0:
        raise ValueError("no deployment contained a base station")
    freq = {key: val / done for key, val in counts.items()}
    freq["d_nlos"] = 1.0 - freq["d_los"]
    freq["no_ris"] = 1.0 - freq["u_los"] - freq["u_nlos"]
    freq["g_nlos"] = 1.0 - freq["g_los"]
    freq["trials"] = float(done)
    return freq
