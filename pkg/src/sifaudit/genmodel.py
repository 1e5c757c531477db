"""Executable form of the generative-model arguments behind SIF.

Covers the two-part word emission model (unigram mixed with a log-linear
term), the lower bound forcing its mixture weight toward 1, the Taylor
linearization of the sentence log-likelihood and the size of its error on
the unit sphere, and a numeric check that the SIF weighted average is the
MAP context of the reweighted log-linear model.

Everything that exponentiates goes through log-space with max subtraction;
vocabulary-sized normalizers overflow otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from .corpus import UnigramDistribution
from .errors import DegenerateResultError, ParameterError
from .svd import EmbeddingMatrix

_CONVERGENCE_TOL = 1e-10


@dataclass(frozen=True)
class GenModelParams:
    """Parameters of the mixture emission model.

    ``alpha`` weighs the unigram term, ``beta`` the common-discourse
    direction ``c0`` inside the smoothed context; both live in [0, 1].
    """

    word_vectors: EmbeddingMatrix
    p: UnigramDistribution
    alpha: float
    beta: float
    c0: np.ndarray

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0 or not 0.0 <= self.beta <= 1.0:
            raise ParameterError("alpha and beta must lie in [0, 1]")
        if self.p.n != self.word_vectors.n:
            raise ParameterError("unigram distribution does not match vocabulary size")
        if self.c0.shape != (self.word_vectors.d,):
            raise ParameterError("c0 dimension does not match word vectors")
        if abs(np.linalg.norm(self.c0) - 1.0) > 1e-9:
            raise ParameterError("c0 must have unit norm within 1e-9")

    @property
    def n(self) -> int:
        return self.word_vectors.n

    @property
    def d(self) -> int:
        return self.word_vectors.d


@dataclass(frozen=True)
class SmoothedContext:
    """Context smoothed toward the common-discourse direction.

    Construction projects the raw context off c0 (the model poses c0 ⊥ c as
    a side condition without a mechanism) and stores
    c_tilde = beta * c0 + (1 - beta) * c.
    """

    c: np.ndarray
    c_tilde: np.ndarray
    orthogonality_residual: float


def smooth_context(c_raw: np.ndarray, params: GenModelParams) -> SmoothedContext:
    c = np.asarray(c_raw, dtype=np.float64)
    if c.shape != (params.d,):
        raise ParameterError("context dimension does not match word vectors")
    c = c - (params.c0 @ c) * params.c0
    residual = abs(float(params.c0 @ c))
    if residual > 1e-9:
        raise ParameterError("projection failed to enforce c0-orthogonality")
    return SmoothedContext(
        c=c,
        c_tilde=params.beta * params.c0 + (1.0 - params.beta) * c,
        orthogonality_residual=residual,
    )


@dataclass(frozen=True)
class AlphaBoundReport:
    """Lower bound on the unigram mixture weight implied by the tuned
    weight range and the normalizer's vocabulary-size floor."""

    n: int
    weight_low: float
    weight_high: float
    z_lower_bound: float  # = n: the normalizer's expectation is at least n
    alpha_min: float
    unigram_residual: float  # 1 - alpha_min: all the mass left for the context term


def alpha_lower_bound(
    n: int, weight_high: float = 1e-3, weight_low: float = 1e-4
) -> AlphaBoundReport:
    """Smallest mixture weight alpha consistent with (1-alpha)/(alpha Z) <= weight_high.

    Since the normalizer satisfies Z >= n, the constraint gives
    alpha >= (n / weight_high) / (n / weight_high + 1); at weight_high 1e-3
    and n = 1e5 this prints as 0.99999999, i.e. the model is essentially
    unigram.
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    if weight_high <= 0:
        raise ParameterError("weight_high must be positive")
    ratio = n / weight_high
    alpha_min = ratio / (ratio + 1.0)
    return AlphaBoundReport(
        n=n,
        weight_low=weight_low,
        weight_high=weight_high,
        z_lower_bound=float(n),
        alpha_min=alpha_min,
        unigram_residual=1.0 - alpha_min,
    )


def _log_emission_all(c_tilde: np.ndarray, params: GenModelParams) -> np.ndarray:
    """log p(w | c_tilde) for every vocabulary word, computed stably."""
    scores = params.word_vectors.vectors @ c_tilde
    log_softmax = scores - logsumexp(scores)
    mix = params.alpha * params.p.p + (1.0 - params.alpha) * np.exp(log_softmax)
    return np.log(mix)


def emission_probs(context: SmoothedContext, params: GenModelParams) -> np.ndarray:
    """Emission probabilities of all words given a smoothed context; sums to 1."""
    return np.exp(_log_emission_all(context.c_tilde, params))


def emission_prob(word_id: int, context: SmoothedContext, params: GenModelParams) -> float:
    """alpha * p(w) + (1 - alpha) * exp(<w, c_tilde>) / Z over the full vocabulary."""
    if not 0 <= word_id < params.n:
        raise ParameterError(f"word id {word_id} out of range")
    return float(np.exp(_log_emission_all(context.c_tilde, params)[word_id]))


def _check_sentence(sentence: Sequence[int], n: int) -> np.ndarray:
    ids = np.asarray(sentence, dtype=np.int64)
    if ids.size == 0:
        raise ParameterError("sentence must contain at least one word id")
    if ids.min() < 0 or ids.max() >= n:
        raise ParameterError("sentence contains out-of-range word ids")
    return ids


def sentence_loglik(sentence: Sequence[int], c_tilde: np.ndarray, params: GenModelParams) -> float:
    """Sum of log emission probabilities of the sentence's words given c_tilde."""
    ids = _check_sentence(sentence, params.n)
    return float(_log_emission_all(np.asarray(c_tilde, dtype=np.float64), params)[ids].sum())


def gradient_at_zero(sentence: Sequence[int], params: GenModelParams) -> np.ndarray:
    """Analytic gradient of the sentence log-likelihood at c_tilde = 0.

    At zero the log-linear term is uniform, so each word contributes
    ((1-alpha)/n) / (alpha p(w) + (1-alpha)/n) times (w - mean of all word
    vectors); the mean term is the gradient of -log Z at zero.
    """
    ids = _check_sentence(sentence, params.n)
    vectors = params.word_vectors.vectors
    n = params.n
    uniform = (1.0 - params.alpha) / n
    coef = uniform / (params.alpha * params.p.p[ids] + uniform)
    centered = vectors[ids] - vectors.mean(axis=0)
    return coef @ centered


def sphere_argmax(gradient: np.ndarray) -> np.ndarray:
    """Exact maximizer of a linear objective over the unit sphere: g / ||g||."""
    g = np.asarray(gradient, dtype=np.float64)
    norm = np.linalg.norm(g)
    if norm == 0.0:
        raise DegenerateResultError("zero gradient: every unit vector maximizes")
    return g / norm


@dataclass(frozen=True)
class LinearizationGapReport:
    """Both sides of the first-order expansion, evaluated where the
    linearized objective is maximized (scaled if requested)."""

    ell_at_zero: float
    linear_value_at_cstar: float
    true_value_at_cstar: float
    gap: float
    scale: float
    gradient_norm: float


def linearization_gap(
    sentence: Sequence[int], params: GenModelParams, scale: float = 1.0
) -> LinearizationGapReport:
    """Quantify the error of linearizing the log-likelihood at 0.

    The linearized objective is maximized on the unit sphere at
    c* = grad / ||grad||; the report compares ell(0) + grad . (scale c*)
    against the true ell(scale c*). At scale 1 — where the maximization is
    actually performed — the gap measures how far the expansion point
    assumption is violated.
    """
    ids = _check_sentence(sentence, params.n)
    grad = gradient_at_zero(ids, params)
    ell_zero = sentence_loglik(ids, np.zeros(params.d), params)
    if params.alpha == 1.0:
        # objective is constant in the context; the expansion is exact
        return LinearizationGapReport(
            ell_at_zero=ell_zero,
            linear_value_at_cstar=ell_zero,
            true_value_at_cstar=ell_zero,
            gap=0.0,
            scale=scale,
            gradient_norm=0.0,
        )
    c_star = sphere_argmax(grad) * scale
    linear = ell_zero + float(grad @ c_star)
    true = sentence_loglik(ids, c_star, params)
    return LinearizationGapReport(
        ell_at_zero=ell_zero,
        linear_value_at_cstar=linear,
        true_value_at_cstar=true,
        gap=abs(true - linear),
        scale=scale,
        gradient_norm=float(np.linalg.norm(grad)),
    )


@dataclass(frozen=True)
class SifModelParams:
    """Reweighted log-linear emission model: p(w|c) ∝ exp(weight(w) <w, c>)
    with weight(w) = a / (p(w) + a)."""

    word_vectors: EmbeddingMatrix
    p: np.ndarray  # unigram probabilities, length n
    a: float

    def __post_init__(self):
        if self.a <= 0:
            raise ParameterError("a must be positive")
        p = np.asarray(self.p, dtype=np.float64)
        if p.shape != (self.word_vectors.n,):
            raise ParameterError("p length does not match vocabulary size")
        object.__setattr__(self, "p", p)

    @property
    def weights(self) -> np.ndarray:
        return self.a / (self.p + self.a)


@dataclass(frozen=True)
class SifMapReport:
    """Numeric MAP context vs the SIF closed form."""

    numeric_argmax: np.ndarray
    closed_form: np.ndarray
    linearized_argmax: np.ndarray
    cosine: float
    converged: bool
    steps_taken: int


def sif_map_oracle(
    sentence: Sequence[int],
    params: SifModelParams,
    steps: int = 2000,
    step_size: float = 0.1,
    init: Optional[np.ndarray] = None,
) -> SifMapReport:
    """Maximize the reweighted-model sentence likelihood over the unit sphere.

    The numeric argmax comes from projected gradient ascent on
    sum_w weight(w) <w, c> - |s| log sum_w' exp(weight(w') <w', c>); the
    closed form normalize(sum_w weight(w) w) is exact for the linearized
    objective (normalizer treated as the constant it concentrates around)
    and is compared to the ascent by cosine. Non-convergence is reported,
    not raised.
    """
    ids = _check_sentence(sentence, params.word_vectors.n)
    vectors = params.word_vectors.vectors
    gamma = params.weights
    weighted = gamma[:, None] * vectors  # rows weight(w) * w
    linear_grad = weighted[ids].sum(axis=0)
    if np.linalg.norm(linear_grad) == 0.0:
        raise DegenerateResultError("sentence has a zero weighted vector sum")
    closed_form = linear_grad / np.linalg.norm(linear_grad)
    linearized_argmax = sphere_argmax(linear_grad)

    size = float(ids.size)

    def ascent_gradient(c: np.ndarray) -> np.ndarray:
        scores = weighted @ c
        soft = np.exp(scores - logsumexp(scores))
        return linear_grad - size * (soft @ weighted)

    c = init / np.linalg.norm(init) if init is not None else np.full(params.word_vectors.d, 1.0)
    c = c / np.linalg.norm(c)
    converged = False
    taken = 0
    for taken in range(1, steps + 1):
        step = c + step_size * ascent_gradient(c)
        step /= np.linalg.norm(step)
        delta = float(np.linalg.norm(step - c))
        c = step
        if delta < _CONVERGENCE_TOL:
            converged = True
            break
    return SifMapReport(
        numeric_argmax=c,
        closed_form=closed_form,
        linearized_argmax=linearized_argmax,
        cosine=float(c @ closed_form),
        converged=converged,
        steps_taken=taken,
    )


def make_toy_gen_params(
    seed: int, n: int = 50, d: int = 10, alpha: float = 0.5, beta: float = 0.5
) -> GenModelParams:
    """Deterministic small random model for audits and tests: Gaussian word
    vectors and a Zipf-shaped unigram distribution."""
    rng = np.random.default_rng(seed)
    vectors = rng.standard_normal((n, d))
    c0 = rng.standard_normal(d)
    c0 /= np.linalg.norm(c0)
    return GenModelParams(
        word_vectors=EmbeddingMatrix(vectors=vectors),
        p=UnigramDistribution(p=_zipf(n)),
        alpha=alpha,
        beta=beta,
        c0=c0,
    )


def make_toy_sif_params(seed: int, n: int = 50, d: int = 10, a: float = 1e-3) -> SifModelParams:
    rng = np.random.default_rng(seed)
    return SifModelParams(
        word_vectors=EmbeddingMatrix(vectors=rng.standard_normal((n, d))),
        p=_zipf(n),
        a=a,
    )


def _zipf(n: int) -> np.ndarray:
    ranks = np.arange(1, n + 1, dtype=np.float64)
    p = 1.0 / ranks
    return p / p.sum()
