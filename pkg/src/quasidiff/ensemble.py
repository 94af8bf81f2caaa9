"""Gibbs ensemble of unit-norm coefficient vectors and the MSD it induces.

The law has density proportional to exp(-beta sum |c_k|^2 zeta_k) with
respect to the uniform measure on the unit sphere of C^N.  Under the
uniform measure the weights x_k = |c_k|^2 are uniform on the simplex and
the phases are independent and uniform, so only x needs tilting.

Two samplers are provided:

``exact``
    Independent draws.  With y_k = x_k (k >= 2) and lam_k = beta (zeta_k -
    zeta_1) the target is the product of exponentials restricted to
    sum y <= 1.  Depending on which has the larger acceptance rate, either
    uniform-simplex proposals are accepted with probability exp(-lam . y),
    or proposals from exponentials truncated to [0, 1] are accepted when
    they land in the simplex.
``importance``
    Uniform-sphere proposals reweighted by exp(-beta U), self-normalised.
    Degenerates at large beta; the effective sample size is reported.

Randomness is drawn per fixed-size block, each block from its own
Philox stream keyed by (seed, block index), so worker count never
changes the result.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .signals import QuasiPeriodicSignal
from .specfun import eval_G

BLOCK_SIZE = 8192
_STAT_CHUNK = 4096


class ModelFormatError(ValueError):
    """Malformed model document."""


@dataclass(frozen=True)
class SpectralModel:
    zeta: np.ndarray
    g: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        zeta = np.array(self.zeta, dtype=float).ravel()
        g = np.array(self.g, dtype=float)
        n = zeta.size
        if n < 1:
            raise ValueError("model needs at least one mode")
        if g.shape != (n, n):
            raise ValueError(f"g must be {n}x{n}, got {g.shape}")
        if not (np.all(np.isfinite(zeta)) and np.all(np.isfinite(g))):
            raise ValueError("zeta and g must be finite")
        if np.any(np.diff(zeta) <= 0):
            raise ValueError("zeta must be strictly increasing")
        if np.any(g < 0):
            raise ValueError("g must be nonnegative")
        if not np.allclose(g, g.T, rtol=1e-12, atol=0):
            raise ValueError("g must be symmetric")
        if not (self.hbar > 0 and math.isfinite(self.hbar)):
            raise ValueError("hbar must be positive")
        g = g.copy()
        np.fill_diagonal(g, 0.0)
        zeta.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "hbar", float(self.hbar))

    @property
    def N(self) -> int:
        return self.zeta.size

    @property
    def omega(self) -> np.ndarray:
        return self.zeta / self.hbar

    def pair_weights(self, T: float) -> np.ndarray:
        """Symmetric matrix g_kj G((omega_k - omega_j) T), zero diagonal."""
        mu = np.abs(self.omega[:, None] - self.omega[None, :]) * T
        w = self.g * eval_G(mu)
        np.fill_diagonal(w, 0.0)
        return w


@dataclass(frozen=True)
class EnsembleEstimate:
    beta: float
    h: np.ndarray
    h_se: np.ndarray
    n_samples: int
    seed: int
    method: str
    ess: float


@dataclass(frozen=True)
class DiffusionReport:
    T: float
    beta: np.ndarray
    tau: np.ndarray
    D: np.ndarray
    D_se: np.ndarray
    dD_dtau: np.ndarray
    dD_dtau_se: np.ndarray
    ess: np.ndarray
    estimates: list[EnsembleEstimate] = field(default_factory=list, repr=False)


@dataclass(frozen=True)
class BoundReport:
    C: float
    saturating: list[tuple[int, int]]


# --- models ---------------------------------------------------------------

def particle_in_box_model(N: int, L: float = 1.0, mass: float = 1.0,
                          hbar: float = 1.0) -> SpectralModel:
    """Infinite square well on [0, L]: zeta_k ~ k^2, position matrix elements in closed form."""
    if N < 2:
        raise ValueError("N must be >= 2")
    if not (L > 0 and mass > 0 and hbar > 0):
        raise ValueError("L, mass and hbar must be positive")
    k = np.arange(1, N + 1, dtype=float)
    zeta = hbar**2 * np.pi**2 / (2.0 * mass * L**2) * k**2
    kk, jj = np.meshgrid(k, k, indexing="ij")
    odd = ((kk + jj) % 2) == 1
    with np.errstate(divide="ignore", invalid="ignore"):
        x = np.where(odd, 8.0 * L * kk * jj / (np.pi**2 * (kk**2 - jj**2) ** 2), 0.0)
    return SpectralModel(zeta=zeta, g=x * x, hbar=hbar)


def load_model(path) -> SpectralModel:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: line {exc.lineno}: invalid JSON ({exc.msg})") from None
    return model_from_dict(doc, source=str(path))


def model_from_dict(doc, source: str = "<model>") -> SpectralModel:
    if not isinstance(doc, dict):
        raise ModelFormatError(f"{source}: top level must be an object")
    g = doc.get("g")
    if isinstance(g, dict):
        if g.get("builtin") != "particle_in_box":
            raise ModelFormatError(f"{source}: field g.builtin: unknown builtin {g.get('builtin')!r}")
        try:
            return particle_in_box_model(int(g["N"]), float(g.get("L", 1.0)),
                                         float(g.get("mass", 1.0)), float(g.get("hbar", 1.0)))
        except KeyError as exc:
            raise ModelFormatError(f"{source}: field g.{exc.args[0]}: missing") from None
        except (TypeError, ValueError) as exc:
            raise ModelFormatError(f"{source}: field g: {exc}") from None
    for key in ("N", "zeta", "g"):
        if key not in doc:
            raise ModelFormatError(f"{source}: field {key}: missing")
    try:
        n = int(doc["N"])
        zeta = np.array(doc["zeta"], dtype=float)
        g = np.array(doc["g"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ModelFormatError(f"{source}: non-numeric entry ({exc})") from None
    if zeta.shape != (n,):
        raise ModelFormatError(f"{source}: field zeta: expected {n} entries, got {zeta.size}")
    if g.ndim == 1 and g.size == n * n:
        g = g.reshape(n, n)
    if g.shape != (n, n):
        raise ModelFormatError(f"{source}: field g: expected {n}x{n} entries")
    try:
        return SpectralModel(zeta=zeta, g=g, hbar=float(doc.get("hbar", 1.0)))
    except ValueError as exc:
        raise ModelFormatError(f"{source}: {exc}") from None


def model_to_dict(model: SpectralModel) -> dict:
    return {"N": model.N, "zeta": model.zeta.tolist(), "g": model.g.ravel().tolist(),
            "hbar": model.hbar}


# --- sampling -------------------------------------------------------------

def _block_rng(seed: int, block: int) -> np.random.Generator:
    key = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, block]).generate_state(2, np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _uniform_sphere(rng: np.random.Generator, size: int, n: int):
    """|c_k|^2 and phases of z / |z| for standard complex Gaussian z."""
    z = rng.standard_normal((size, n)) + 1j * rng.standard_normal((size, n))
    c = z / np.linalg.norm(z, axis=1, keepdims=True)
    return np.abs(c) ** 2, np.angle(c)


def _proposal_kind(lam: np.ndarray) -> str:
    """Pick the proposal with the larger acceptance probability.

    Both acceptance rates equal Z times a known factor: (N-1)! for the
    uniform simplex, prod lam / (1 - exp(-lam)) for truncated exponentials.
    """
    m = lam.size
    log_uniform = math.lgamma(m + 1)
    log_trunc = float(np.sum(np.log(lam) - np.log(-np.expm1(-lam))))
    return "trunc_exp" if log_trunc > log_uniform else "uniform"


def _exact_block(rng, size, lam, n):
    if n == 1:
        return np.ones((size, 1)), rng.uniform(-np.pi, np.pi, (size, 1))
    if not np.any(lam > 0):
        return _uniform_sphere(rng, size, n)
    kind = _proposal_kind(lam)
    out = np.empty((size, n))
    filled = 0
    batch = max(64, size)
    while filled < size:
        if kind == "uniform":
            x, _ = _uniform_sphere(rng, batch, n)
            u = rng.random(batch)
            keep = np.log(u) < -(x[:, 1:] @ lam)
            x = x[keep]
        else:
            u = rng.random((batch, n - 1))
            y = -np.log1p(u * np.expm1(-lam)) / lam
            s = y.sum(axis=1)
            keep = s <= 1.0
            y, s = y[keep], s[keep]
            x = np.column_stack([1.0 - s, y])
            x /= x.sum(axis=1, keepdims=True)
        take = min(size - filled, x.shape[0])
        out[filled:filled + take] = x[:take]
        filled += take
        acc = max(keep.mean(), 1e-6)
        batch = int(min(4 * BLOCK_SIZE * 64, max(64, 1.2 * (size - filled) / acc)))
    phases = rng.uniform(-np.pi, np.pi, (size, n))
    return out, phases


def _draw(model: SpectralModel, beta: float, n_samples: int, seed: int,
          method: str, workers: int):
    lam = beta * (model.zeta[1:] - model.zeta[0])
    n = model.N
    sizes = [min(BLOCK_SIZE, n_samples - s) for s in range(0, n_samples, BLOCK_SIZE)]

    def block(i):
        rng = _block_rng(seed, i)
        if method == "exact":
            x, ph = _exact_block(rng, sizes[i], lam, n)
            w = None
        else:
            x, ph = _uniform_sphere(rng, sizes[i], n)
            w = -(beta * (x @ (model.zeta - model.zeta[0])))
        return x, ph, w

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(block, range(len(sizes))))
    else:
        parts = [block(i) for i in range(len(sizes))]
    x = np.concatenate([p[0] for p in parts])
    phases = np.concatenate([p[1] for p in parts])
    if method == "exact":
        w = None
    else:
        logw = np.concatenate([p[2] for p in parts])
        w = np.exp(logw - logw.max())
    return x, phases, w


def sample_coefficients(model: SpectralModel, beta: float, n_samples: int, seed: int,
                        method: str = "exact", workers: int = 1):
    """Draw coefficient vectors c (n_samples x N, complex) and weights.

    Weights are None for the exact sampler.
    """
    _check_sampling_args(beta, n_samples, method)
    x, phases, w = _draw(model, beta, n_samples, seed, method, workers)
    return np.sqrt(x) * np.exp(1j * phases), w


def _check_sampling_args(beta, n_samples, method):
    if not (math.isfinite(beta) and beta >= 0):
        raise ValueError(f"beta must be finite and >= 0, got {beta!r}")
    if int(n_samples) < 1:
        raise ValueError("n_samples must be >= 1")
    if method not in ("exact", "importance"):
        raise ValueError(f"unknown method {method!r}")


def _weighted_mean_se(v: np.ndarray, w: np.ndarray | None):
    """Mean and standard error along axis 0 (iid or self-normalised IS)."""
    n = v.shape[0]
    if w is None:
        mean = v.mean(axis=0)
        se = v.std(axis=0, ddof=1) / math.sqrt(n) if n > 1 else np.full_like(mean, np.inf)
        return mean, se
    sw = w.sum()
    wn = (w / sw).reshape((n,) + (1,) * (v.ndim - 1))
    mean = (wn * v).sum(axis=0)
    se = np.sqrt((wn**2 * (v - mean) ** 2).sum(axis=0))
    return mean, se


def _pair_products(x: np.ndarray) -> np.ndarray:
    return x[:, :, None] * x[:, None, :]


def sample_gibbs(model: SpectralModel, beta: float, n_samples: int, seed: int,
                 method: str = "exact", workers: int = 1) -> EnsembleEstimate:
    """Estimate h_kj = E_beta(|c_k|^2 |c_j|^2) with standard errors."""
    _check_sampling_args(beta, n_samples, method)
    x, _, w = _draw(model, beta, int(n_samples), seed, method, workers)
    h, se = _weighted_mean_se(_pair_products(x), w)
    ess = float(n_samples) if w is None else float(w.sum() ** 2 / np.sum(w * w))
    return EnsembleEstimate(beta=float(beta), h=h, h_se=se, n_samples=int(n_samples),
                            seed=int(seed), method=method, ess=ess)


def uniform_moment_oracle(N: int, k: int, j: int) -> Fraction:
    """Exact E|c_k|^2 |c_j|^2 under the uniform measure on the unit sphere of C^N (1-based)."""
    if not (1 <= k <= N and 1 <= j <= N):
        raise IndexError(f"indices ({k}, {j}) out of range 1..{N}")
    return Fraction(2 if k == j else 1, N * (N + 1))


def r_functional(model: SpectralModel, x: np.ndarray, T: float) -> np.ndarray:
    """R = (12/T) sum_{k>j} g_kj x_k x_j G((omega_k - omega_j) T) per row of x = |c|^2."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    m = model.pair_weights(T)
    out = np.empty(x.shape[0])
    for s in range(0, x.shape[0], _STAT_CHUNK):
        xs = x[s:s + _STAT_CHUNK]
        out[s:s + _STAT_CHUNK] = 0.5 * (_pair_products(xs) * m).sum(axis=(1, 2))
    return 12.0 / T * out


def msd_signal(model: SpectralModel, est: EnsembleEstimate) -> QuasiPeriodicSignal:
    """One term per pair k > j: a = 2 h_kj g_kj, nu = (zeta_k - zeta_j)/hbar."""
    if est.h.shape != (model.N, model.N):
        raise ValueError(f"estimate is {est.h.shape}, model has N={model.N}")
    k, j = np.tril_indices(model.N, -1)
    a = 2.0 * est.h[k, j] * model.g[k, j]
    nu = (model.zeta[k] - model.zeta[j]) / model.hbar
    keep = a > 0
    return QuasiPeriodicSignal(a[keep], nu[keep])


def uniform_diffusion_coefficient(model: SpectralModel, T: float) -> float:
    """Exact D at beta = 0: (12/T) / (N(N+1)) * sum_{k>j} g_kj G(mu_kj)."""
    m = model.pair_weights(T)
    n = model.N
    return 12.0 / T / (n * (n + 1)) * math.fsum(m[np.tril_indices(n, -1)])


def diffusion_vs_temperature(model: SpectralModel, beta_grid, T: float, n_samples: int,
                             seed: int, method: str = "exact",
                             workers: int = 1) -> DiffusionReport:
    """D = E_beta R and dD/dtau = beta^2 Cov_beta(R, U) (K = 1) on a beta grid."""
    if not T > 0:
        raise ValueError("T must be positive")
    betas = np.asarray(beta_grid, dtype=float).ravel()
    if betas.size == 0:
        raise ValueError("beta grid is empty")
    D, D_se, dD, dD_se, ess, ests = [], [], [], [], [], []
    for beta in betas:
        _check_sampling_args(beta, n_samples, method)
        x, _, w = _draw(model, float(beta), int(n_samples), seed, method, workers)
        h, h_se = _weighted_mean_se(_pair_products(x), w)
        r = r_functional(model, x, T)
        u = x @ model.zeta
        r_mean, r_se = _weighted_mean_se(r, w)
        u_mean, _ = _weighted_mean_se(u, w)
        infl = (r - r_mean) * (u - u_mean)
        cov, cov_se = _weighted_mean_se(infl, w)
        e = float(n_samples) if w is None else float(w.sum() ** 2 / np.sum(w * w))
        D.append(float(r_mean))
        D_se.append(float(r_se))
        dD.append(float(beta**2 * cov))
        dD_se.append(float(beta**2 * cov_se))
        ess.append(e)
        ests.append(EnsembleEstimate(beta=float(beta), h=h, h_se=h_se,
                                     n_samples=int(n_samples), seed=int(seed),
                                     method=method, ess=e))
    with np.errstate(divide="ignore"):
        tau = np.where(betas > 0, 1.0 / np.where(betas > 0, betas, 1.0), np.inf)
    return DiffusionReport(T=float(T), beta=betas, tau=tau, D=np.array(D), D_se=np.array(D_se),
                           dD_dtau=np.array(dD), dD_dtau_se=np.array(dD_se),
                           ess=np.array(ess), estimates=ests)


def matrix_element_bound_check(model: SpectralModel, energy_window: float | None = None,
                               rel_tol: float = 0.01) -> BoundReport:
    """Smallest C with sqrt(g_kj) <= C / |zeta_k - zeta_j|, and near-saturating pairs.

    Only pairs with both energies <= energy_window are used when it is given.
    """
    k, j = np.tril_indices(model.N, -1)
    if energy_window is not None:
        keep = (model.zeta[k] <= energy_window) & (model.zeta[j] <= energy_window)
        k, j = k[keep], j[keep]
    if k.size == 0:
        return BoundReport(C=0.0, saturating=[])
    ratio = np.sqrt(model.g[k, j]) * np.abs(model.zeta[k] - model.zeta[j])
    C = float(ratio.max())
    if C == 0:
        return BoundReport(C=0.0, saturating=[])
    sat = ratio >= (1.0 - rel_tol) * C
    return BoundReport(C=C, saturating=[(int(a) + 1, int(b) + 1)
                                        for a, b in zip(k[sat], j[sat])])
