"""
Flow-matching pretraining on the drift corpus.

Regresses v̂_θ(z_t, t, c) onto z₁ − z₀ along the straight path
z_t = (1 − t)z₀ + t z₁, with z₀ ~ 𝒩(0, I), z₁ the encoded (scale-corrupted)
target and c the encoded condition. Plain SGD, constant rate.

Times are drawn uniformly from [0, 1 − 1/num_steps), the span the Euler
sampler evaluates. Past it the 1/(1 − t) factor of the velocity head makes
the regression weights unbounded.
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from typing_extensions import TypeAlias

from ..core.exceptions import InvalidInputError, NonFiniteGradientError
from ..core.logging import LoggerAdapter
from ..core.seeding import make_rng
from ..sampling.bank import DriftSample
from .latent import encode
from .network import FlowPolicy, PolicyArchitecture, backward, forward, init_policy
from .optim import SGD, clip_grad_norm

_logger = LoggerAdapter.get_logger(__name__)

_VALIDATION_BATCH = 64

ProgressCallback: TypeAlias = Callable[[int, float], None]


@dataclass(frozen=True, eq=False)
class PretrainResult:
    """Trained policy and its loss history.

    Attributes:
        policy: the trained FlowPolicy
        losses: mean training loss per epoch
        validation_losses: loss on the frozen validation batch, before
            training (index 0) and after every epoch
    """

    policy: FlowPolicy
    losses: np.ndarray
    validation_losses: np.ndarray

    @property
    def initial_validation_loss(self) -> float:
        return float(self.validation_losses[0])

    @property
    def final_validation_loss(self) -> float:
        return float(self.validation_losses[-1])


def encode_corpus(corpus: Sequence[DriftSample]) -> Tuple[np.ndarray, np.ndarray]:
    """(conditions, targets) latents, one row per sample."""
    conditions = np.stack([encode(sample.condition) for sample in corpus])
    targets = np.stack([encode(sample.target) for sample in corpus])
    return conditions, targets


def flow_matching_loss(
    policy: FlowPolicy,
    z0: np.ndarray,
    z1: np.ndarray,
    t: np.ndarray,
    c: np.ndarray,
    with_grad: bool = True,
) -> Tuple[float, Optional[np.ndarray]]:
    """Batch mean of ‖v̂(z_t, t, c) − (z₁ − z₀)‖² and its flat gradient."""
    t = np.asarray(t, dtype=float).reshape(-1)
    zt = (1.0 - t)[:, None] * z0 + t[:, None] * z1
    velocity, cache = forward(policy, zt, t, c)
    residual = velocity - (z1 - z0)
    batch = zt.shape[0]
    loss = float(np.sum(residual ** 2) / batch)
    if not with_grad:
        return loss, None
    return loss, backward(policy, cache, 2.0 * residual / batch)


def max_training_time(num_steps: int) -> float:
    """Upper end of the pretraining time range: the last Euler step time plus Δt."""
    return 1.0 - 1.0 / num_steps


def _validation_batch(conditions: np.ndarray, targets: np.ndarray, seed: int, t_max: float):
    rng = make_rng(seed, "pretrain-validation")
    size = min(_VALIDATION_BATCH, max(len(targets), 8))
    index = rng.integers(len(targets), size=size)
    z0 = rng.standard_normal((size, targets.shape[1]))
    t = rng.uniform(0.0, t_max, size=size)
    return z0, targets[index], t, conditions[index]


def flow_pretrain(
    corpus: Sequence[DriftSample],
    config,
    policy: Optional[FlowPolicy] = None,
    progress: Optional[ProgressCallback] = None,
) -> PretrainResult:
    """Fit a FlowPolicy to ``corpus`` by flow matching.

    An epoch is one shuffled pass over the corpus in minibatches of
    ``pretrain_batch_size``; each minibatch gradient is clipped to
    ``pretrain_max_grad_norm``. Deterministic given ``config.seed``.

    Args:
        corpus: drift samples (condition, scale-corrupted target)
        config: RunConfig supplying sizes, rates and the seed
        policy: starting point; freshly initialised from the config if omitted
        progress: called as ``progress(epoch, mean_loss)`` after every epoch

    Raises:
        InvalidInputError: empty corpus or mismatched architecture
        NonFiniteGradientError: a gradient became NaN/inf
    """
    if len(corpus) == 0:
        raise InvalidInputError(field_name="corpus", value=0, expected="non-empty drift corpus")
    architecture = PolicyArchitecture.from_config(config)
    if policy is None:
        policy = init_policy(architecture, config.seed, config.config_hash())
    elif policy.architecture != architecture:
        raise InvalidInputError(
            field_name="policy",
            expected=f"architecture {architecture.to_dict()}",
            received=f"{policy.architecture.to_dict()}",
        )

    conditions, targets = encode_corpus(corpus)
    t_max = max_training_time(config.num_steps)
    val_z0, val_z1, val_t, val_c = _validation_batch(conditions, targets, config.seed, t_max)
    optimizer = SGD(config.pretrain_learning_rate)
    params = np.array(policy.params)
    n = len(targets)
    batch_size = min(config.pretrain_batch_size, n)

    losses: List[float] = []
    validation = [flow_matching_loss(policy, val_z0, val_z1, val_t, val_c, with_grad=False)[0]]
    _logger.info(
        f"Pretraining on {n} samples: epochs={config.pretrain_epochs}, batch={batch_size}, "
        f"lr={config.pretrain_learning_rate}, initial validation loss={validation[0]:.6f}"
    )

    for epoch in range(config.pretrain_epochs):
        rng = make_rng(config.seed, "pretrain-epoch", epoch)
        order = rng.permutation(n)
        epoch_loss = 0.0
        batches = 0
        for start in range(0, n, batch_size):
            index = order[start:start + batch_size]
            z1 = targets[index]
            z0 = rng.standard_normal(z1.shape)
            t = rng.uniform(0.0, t_max, size=len(index))
            loss, grad = flow_matching_loss(policy, z0, z1, t, conditions[index])
            if not np.all(np.isfinite(grad)):
                raise NonFiniteGradientError(iteration=epoch, phase="pretrain")
            grad, _ = clip_grad_norm(grad, config.pretrain_max_grad_norm)
            params = optimizer.step(params, grad)
            policy = policy.with_params(params)
            epoch_loss += loss
            batches += 1
        losses.append(epoch_loss / batches)
        validation.append(flow_matching_loss(policy, val_z0, val_z1, val_t, val_c, with_grad=False)[0])
        _logger.debug(f"Epoch {epoch}: loss={losses[-1]:.6f} validation={validation[-1]:.6f}")
        if progress is not None:
            progress(epoch, losses[-1])

    _logger.info(f"Pretraining finished: validation loss {validation[0]:.6f} -> {validation[-1]:.6f}")
    return PretrainResult(policy=policy, losses=np.array(losses), validation_losses=np.array(validation))
