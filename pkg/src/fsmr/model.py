"""Greedy frequency-selective approximation of scattered image samples.

A block of image data is modelled as a sparse weighted superposition of 2-D
cosine basis functions.  The model is grown one atom per iteration: every
candidate atom is fitted to the current residual by weighted least squares,
the atom whose (spectrally weighted) residual energy reduction is largest is
added, and the residual is updated.  Because the basis functions are
evaluable at arbitrary real coordinates, the samples may sit anywhere inside
the block support (mesh positions), and the finished model can likewise be
evaluated anywhere — which is what turns the machinery into a scattered-data
resampler rather than a grid-only transform.

Conventions used throughout:

* A block support of size ``(M, N)`` covers local coordinates
  ``[0, M) x [0, N)``; the first coordinate ``x`` runs horizontally
  (columns), the second ``y`` vertically (rows).
* Sample coordinates are support-local.  When the support consists of an
  ``S x S`` interior plus a border of width ``B`` on each side, the interior
  occupies ``[B, B+S) x [B, B+S)``.
* Sample values are real amplitudes, normalised to ``[0, 1]`` by callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, NoSelectableAtomError

# Below this weighted squared-norm an atom cannot be told apart from noise
# in the sample set and is treated as unobservable.
OBSERVABILITY_EPS = 1e-12


def _as_array(values) -> np.ndarray:
    return np.asarray(values, dtype=np.float64)


# ---------------------------------------------------------------------------
# Sample containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SamplePoint:
    """One known sample: support-local position, amplitude, support weight."""

    x: float
    y: float
    value: float
    support_weight: float = 1.0


@dataclass
class SampleSet:
    """Ordered scattered samples feeding model generation for one block.

    The ordering is fixed at construction (callers deposit samples in
    row-major source order), so every reduction over the set is
    deterministic.  The set may be empty, which downstream code must handle
    explicitly (a fully lost block).

    ``block_size`` and ``border`` describe the geometry the coordinates live
    in: the extended support spans ``[0, block_size + 2 * border)`` in each
    axis, with the block interior at ``[border, border + block_size)``.
    """

    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray
    support_weights: np.ndarray
    block_size: int
    border: int

    def __post_init__(self) -> None:
        self.xs = _as_array(self.xs)
        self.ys = _as_array(self.ys)
        self.values = _as_array(self.values)
        self.support_weights = _as_array(self.support_weights)
        n = len(self.xs)
        if not (len(self.ys) == len(self.values) == len(self.support_weights) == n):
            raise InvalidArgumentError("sample arrays must have equal length")
        if n:
            if np.any(self.support_weights <= 0.0) or np.any(self.support_weights > 1.0):
                raise InvalidArgumentError("support weights must lie in (0, 1]")
            extent = self.block_size + 2 * self.border
            if (self.xs.min() < 0.0 or self.ys.min() < 0.0
                    or self.xs.max() >= extent or self.ys.max() >= extent):
                raise InvalidArgumentError(
                    f"sample coordinates must lie in [0, {extent}) for "
                    f"block_size={self.block_size}, border={self.border}")

    @classmethod
    def from_points(cls, points, block_size: int, border: int) -> "SampleSet":
        pts = list(points)
        return cls(
            xs=np.array([p.x for p in pts], dtype=np.float64),
            ys=np.array([p.y for p in pts], dtype=np.float64),
            values=np.array([p.value for p in pts], dtype=np.float64),
            support_weights=np.array([p.support_weight for p in pts], dtype=np.float64),
            block_size=block_size,
            border=border,
        )

    @property
    def support_size(self) -> tuple[int, int]:
        extent = self.block_size + 2 * self.border
        return (extent, extent)

    @property
    def points(self) -> list[SamplePoint]:
        return [SamplePoint(float(x), float(y), float(v), float(w))
                for x, y, v, w in zip(self.xs, self.ys, self.values, self.support_weights)]

    def __len__(self) -> int:
        return len(self.xs)

    @property
    def is_empty(self) -> bool:
        return len(self.xs) == 0


# ---------------------------------------------------------------------------
# Basis dictionary
# ---------------------------------------------------------------------------


def _axis_profile(size: int, k, coords) -> np.ndarray:
    """1-D orthonormal cosine atom ``u_k`` evaluated at real coordinates.

    ``u_k(x) = a_k * cos(pi * k * (2x + 1) / (2 * size))`` with
    ``a_0 = sqrt(1/size)`` and ``a_k = sqrt(2/size)`` otherwise.  On the
    integer grid ``0..size-1`` these are the rows of the orthonormal cosine
    transform; substituting real ``x`` extends each atom continuously.
    """
    k = np.asarray(k)
    coords = _as_array(coords)
    scale = np.where(k == 0, math.sqrt(1.0 / size), math.sqrt(2.0 / size))
    if k.ndim == 0:
        return scale * np.cos((math.pi / size) * k * (coords + 0.5))
    return scale[:, None] * np.cos(
        (math.pi / size) * k[:, None] * (coords[None, :] + 0.5))


@dataclass(frozen=True)
class BasisDictionary:
    """Separable 2-D cosine dictionary over an ``(M, N)`` support.

    The ``M * N`` atoms are orthonormal when sampled on the full integer
    grid of the support and remain defined for any real coordinate, so a
    model built from them can be evaluated on and off the pixel grid alike.
    """

    size: tuple[int, int]

    @property
    def indices(self) -> list[tuple[int, int]]:
        m, n = self.size
        return [(k, l) for k in range(m) for l in range(n)]

    def evaluate(self, k: int, l: int, x, y):
        """Value of atom ``(k, l)`` at real position(s) ``(x, y)``."""
        m, n = self.size
        if not (0 <= k < m and 0 <= l < n):
            raise InvalidArgumentError(f"atom index {(k, l)} outside {self.size}")
        return _axis_profile(m, k, x) * _axis_profile(n, l, y)

    def x_profiles(self, xs) -> np.ndarray:
        """Matrix ``U[k, i] = u_k(xs[i])`` for all horizontal frequencies."""
        m = self.size[0]
        return _axis_profile(m, np.arange(m), xs)

    def y_profiles(self, ys) -> np.ndarray:
        """Matrix ``V[l, i] = v_l(ys[i])`` for all vertical frequencies."""
        n = self.size[1]
        return _axis_profile(n, np.arange(n), ys)


def build_dictionary(size: tuple[int, int]) -> BasisDictionary:
    """Create the orthonormal separable cosine dictionary for a support."""
    m, n = size
    if m < 1 or n < 1:
        raise InvalidArgumentError(f"dictionary size must be positive, got {size}")
    return BasisDictionary(size=(int(m), int(n)))


# ---------------------------------------------------------------------------
# Weighting functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpatialWindow:
    """Isotropically decaying spatial weight centred on the block.

    ``weight(x, y) = decay ** sqrt((x - cx)^2 + (y - cy)^2)``.  The weight is
    1 at the centre, strictly positive everywhere, and depends on the
    Euclidean distance only.  ``decay = 1`` degenerates to a uniform window,
    which the full-grid recovery paths rely on.
    """

    center: tuple[float, float]
    decay: float

    def __post_init__(self) -> None:
        if not (0.0 < self.decay <= 1.0):
            raise InvalidArgumentError(f"window decay must lie in (0, 1], got {self.decay}")

    def weight(self, x, y):
        cx, cy = self.center
        dist = np.hypot(_as_array(x) - cx, _as_array(y) - cy)
        return np.power(self.decay, dist)


@dataclass(frozen=True)
class SpectralWeight:
    """Frequency prior favouring low radial frequency indices.

    ``weight(k, l) = decay ** sqrt(k^2 + l^2)``, so the DC atom carries
    weight 1 and the weight decreases monotonically with the radial index
    while staying positive: strong high-frequency content remains
    selectable, it just has to earn its place.
    """

    size: tuple[int, int]
    decay: float

    def __post_init__(self) -> None:
        if not (0.0 < self.decay <= 1.0):
            raise InvalidArgumentError(f"spectral decay must lie in (0, 1], got {self.decay}")

    def weight(self, k, l):
        radial = np.hypot(np.asarray(k, dtype=np.float64), np.asarray(l, dtype=np.float64))
        return np.power(self.decay, radial)

    def matrix(self) -> np.ndarray:
        m, n = self.size
        kk = np.arange(m, dtype=np.float64)[:, None]
        ll = np.arange(n, dtype=np.float64)[None, :]
        return np.power(self.decay, np.hypot(kk, ll))


# ---------------------------------------------------------------------------
# Model state
# ---------------------------------------------------------------------------


@dataclass
class SparseModel:
    """Accumulated expansion coefficients, keyed by frequency index.

    Only indices with a nonzero accumulated coefficient are stored; the
    modelled signal is the superposition of the corresponding atoms.
    ``unsupported`` marks models produced from an empty sample set (an
    all-zero signal the caller should treat as a failed block).
    """

    coefficients: dict[tuple[int, int], float]
    dictionary_size: tuple[int, int]
    unsupported: bool = False

    def dense(self) -> np.ndarray:
        out = np.zeros(self.dictionary_size, dtype=np.float64)
        for (k, l), c in self.coefficients.items():
            out[k, l] = c
        return out

    def __len__(self) -> int:
        return len(self.coefficients)


@dataclass
class IterationState:
    """Loop state after model generation.

    ``residuals`` stays aligned with the sample order of the generating
    ``SampleSet``; ``weighted_energy`` is the window-weighted squared
    residual sum; ``energy_history`` records it per iteration, starting at
    the initial energy, and is non-increasing.
    """

    iteration: int
    residuals: np.ndarray
    weighted_energy: float
    energy_history: list[float] = field(default_factory=list)


@dataclass(frozen=True)
class ModelConfig:
    """Parameters of the greedy model-generation loop.

    ``energy_floor`` is relative: the loop stops once the weighted residual
    energy drops below ``energy_floor`` times its initial value.
    ``compensation`` damps each newly estimated coefficient before it is
    accumulated; scattered samples break atom orthogonality, and accumulating
    the full least-squares amplitude routinely overshoots.  The full
    amplitude is still used for ranking candidates.
    """

    iterations: int = 100
    window_decay: float = 0.8
    spectral_decay: float = 0.8
    compensation: float = 0.5
    energy_floor: float = 1e-16
    dictionary_size: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if self.iterations < 0:
            raise InvalidArgumentError("iterations must be >= 0")
        if not (0.0 < self.compensation <= 1.0):
            raise InvalidArgumentError("compensation must lie in (0, 1]")
        if self.energy_floor < 0.0:
            raise InvalidArgumentError("energy_floor must be >= 0")


# ---------------------------------------------------------------------------
# Estimation and selection
# ---------------------------------------------------------------------------


def estimate_coefficient(samples: SampleSet, residuals, window: SpatialWindow,
                         dictionary: BasisDictionary,
                         index: tuple[int, int]) -> tuple[float, float]:
    """Weighted least-squares amplitude of one atom against a residual.

    Minimising the window-weighted residual energy restricted to atom
    ``phi`` gives the closed form

        c = sum_i w_i r_i phi_i / sum_i w_i phi_i^2

    with ``w_i`` the spatial window times the per-sample support weight.
    Returns ``(c, delta_e)`` where ``delta_e = c^2 * sum_i w_i phi_i^2`` is
    the energy this atom would remove if accumulated undamped.  An atom
    whose weighted squared norm falls below ``OBSERVABILITY_EPS`` cannot be
    estimated from these samples; ``(0.0, 0.0)`` is returned for it.
    """
    if samples.is_empty:
        raise InvalidArgumentError("cannot estimate a coefficient from an empty sample set")
    residuals = _as_array(residuals)
    if residuals.shape != samples.xs.shape:
        raise InvalidArgumentError("residuals must align with the sample set")
    w = window.weight(samples.xs, samples.ys) * samples.support_weights
    phi = dictionary.evaluate(index[0], index[1], samples.xs, samples.ys)
    denom = float(np.dot(w, phi * phi))
    if denom < OBSERVABILITY_EPS:
        return 0.0, 0.0
    coeff = float(np.dot(w * residuals, phi)) / denom
    return coeff, coeff * coeff * denom


def _argmax_low_frequency_ties(scores: np.ndarray) -> tuple[int, int]:
    """Index of the maximum score; ties resolve to smallest k+l, then k."""
    best = scores.max()
    ks, ls = np.nonzero(scores == best)
    if len(ks) == 1:
        return int(ks[0]), int(ls[0])
    order = np.lexsort((ks, ks + ls))
    pick = order[0]
    return int(ks[pick]), int(ls[pick])


class _FitWorkspace:
    """Precomputed per-block quantities reused across iterations/channels.

    ``U`` and ``V`` hold the separable atom profiles at the sample
    positions, ``weights`` the combined spatial weights, and ``denom`` the
    weighted squared norm of every atom — all independent of the residual,
    so the per-iteration work reduces to one small matrix product.
    """

    def __init__(self, samples: SampleSet, window: SpatialWindow,
                 dictionary: BasisDictionary, spectral: SpectralWeight):
        self.dictionary = dictionary
        self.weights = window.weight(samples.xs, samples.ys) * samples.support_weights
        self.U = dictionary.x_profiles(samples.xs)
        self.V = dictionary.y_profiles(samples.ys)
        self.denom = (self.U * self.U * self.weights) @ (self.V * self.V).T
        self.observable = self.denom >= OBSERVABILITY_EPS
        self.safe_denom = np.where(self.observable, self.denom, 1.0)
        self.spectral = spectral.matrix()

    def select(self, residuals: np.ndarray) -> tuple[tuple[int, int], float, float]:
        """Best atom for this residual: ``((u, v), coefficient, score)``."""
        if not self.observable.any():
            raise NoSelectableAtomError("no atom is observable from this sample set")
        correlation = (self.U * (self.weights * residuals)) @ self.V.T
        coeffs = correlation / self.safe_denom
        scores = np.where(self.observable,
                          coeffs * correlation * self.spectral, 0.0)
        u, v = _argmax_low_frequency_ties(scores)
        return (u, v), float(coeffs[u, v]), float(scores[u, v])

    def atom_at_samples(self, u: int, v: int) -> np.ndarray:
        return self.U[u] * self.V[v]

    def energy(self, residuals: np.ndarray) -> float:
        return float(np.dot(self.weights, residuals * residuals))


def select_basis(samples: SampleSet, state: IterationState, window: SpatialWindow,
                 dictionary: BasisDictionary,
                 spectral: SpectralWeight) -> tuple[tuple[int, int], float]:
    """Atom maximising spectrally weighted energy reduction for a residual.

    Scans the whole dictionary, scoring each atom by its energy reduction
    times the spectral weight, and returns the winning index together with
    its least-squares coefficient.  Ties break towards low frequencies:
    smallest ``k + l`` first, then smallest ``k``.
    """
    if samples.is_empty:
        raise NoSelectableAtomError("empty sample set")
    workspace = _FitWorkspace(samples, window, dictionary, spectral)
    index, coeff, _ = workspace.select(_as_array(state.residuals))
    return index, coeff


# ---------------------------------------------------------------------------
# Model generation and evaluation
# ---------------------------------------------------------------------------


def generate_model(samples: SampleSet, config: ModelConfig, *,
                   full_output: bool = False):
    """Grow a sparse model of the sample set by greedy atom selection.

    Each iteration selects the best-scoring atom, accumulates its damped
    coefficient into the model and subtracts the same damped contribution
    from every residual, keeping model and residuals consistent.  The loop
    runs for ``config.iterations`` steps, stopping early when the weighted
    residual energy falls below the relative floor or no atom can reduce it
    further.  The weighted energy is non-increasing across iterations.

    An empty sample set yields an empty model flagged ``unsupported`` so the
    caller can widen the block support and retry.

    With ``full_output=True`` returns ``(model, state)`` where ``state``
    carries the final residuals and the per-iteration energy history.
    """
    size = config.dictionary_size or samples.support_size
    dictionary = build_dictionary(size)
    if samples.is_empty:
        model = SparseModel({}, dictionary.size, unsupported=True)
        if full_output:
            return model, IterationState(0, np.zeros(0), 0.0, [0.0])
        return model

    m, n = dictionary.size
    window = SpatialWindow(center=((m - 1) / 2.0, (n - 1) / 2.0), decay=config.window_decay)
    spectral = SpectralWeight(dictionary.size, config.spectral_decay)
    workspace = _FitWorkspace(samples, window, dictionary, spectral)

    residuals = samples.values.copy()
    coeffs = np.zeros(dictionary.size, dtype=np.float64)
    energy = workspace.energy(residuals)
    history = [energy]
    floor = config.energy_floor * energy
    steps = 0

    for _ in range(config.iterations):
        if energy <= floor:
            break
        try:
            (u, v), coeff, score = workspace.select(residuals)
        except NoSelectableAtomError:
            break
        if score <= 0.0:
            break
        damped = config.compensation * coeff
        coeffs[u, v] += damped
        residuals -= damped * workspace.atom_at_samples(u, v)
        energy = workspace.energy(residuals)
        history.append(energy)
        steps += 1

    model = SparseModel(
        {(int(k), int(l)): float(coeffs[k, l])
         for k, l in zip(*np.nonzero(coeffs))},
        dictionary.size,
    )
    if full_output:
        state = IterationState(steps, residuals, energy, history)
        return model, state
    return model


def evaluate_model(model: SparseModel, dictionary: BasisDictionary, xs, ys) -> np.ndarray:
    """Superpose the model's atoms at arbitrary real target positions.

    ``xs`` and ``ys`` are equal-length coordinate arrays; the result holds
    the model signal at each ``(xs[i], ys[i])``.  An empty model evaluates
    to zeros.
    """
    xs = _as_array(xs)
    ys = _as_array(ys)
    if xs.shape != ys.shape:
        raise InvalidArgumentError("xs and ys must have equal shape")
    if not model.coefficients:
        return np.zeros(xs.shape, dtype=np.float64)
    if model.dictionary_size != dictionary.size:
        raise InvalidArgumentError(
            f"model built for support {model.dictionary_size}, "
            f"dictionary is {dictionary.size}")
    flat_x = xs.ravel()
    flat_y = ys.ravel()
    dense = model.dense()
    u = dictionary.x_profiles(flat_x)
    v = dictionary.y_profiles(flat_y)
    values = ((dense @ v) * u).sum(axis=0)
    return values.reshape(xs.shape)
