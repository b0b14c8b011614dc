"""Prototype-assembly mask head and its gradient-descent trainer."""

import logging
from dataclasses import dataclass, field

import numpy as np

from .edges import EdgeOperator, as_operator
from .exceptions import TrainingError, ValidationError
from .gt import GtConfig
from .losses import LossBreakdown, LossWeights, loss_and_grad_batch, sigmoid
from .metrics import boundary_f1, iou, jaggedness

logger = logging.getLogger(__name__)


@dataclass
class PrototypeModel:
    """``k`` shared prototype grids and one coefficient vector per instance."""

    prototypes: np.ndarray  # (k, h, w)
    coefficients: np.ndarray  # (n_instances, k)

    def __post_init__(self):
        self.prototypes = np.asarray(self.prototypes, dtype=np.float64)
        self.coefficients = np.atleast_2d(np.asarray(self.coefficients, dtype=np.float64))
        if self.prototypes.ndim != 3 or self.prototypes.shape[0] < 1:
            raise ValidationError("prototypes must have shape (k, h, w) with k >= 1")
        if self.coefficients.shape[1] != self.k:
            raise ValidationError(
                f"coefficient length {self.coefficients.shape[1]} != k={self.k}"
            )

    @property
    def k(self):
        return self.prototypes.shape[0]

    @property
    def shape(self):
        return self.prototypes.shape[1:]

    @classmethod
    def initialize(cls, k, n_instances, shape, init_scale=0.01, rng=None):
        rng = np.random.default_rng(rng)
        prototypes = rng.uniform(-init_scale, init_scale, size=(k, *shape))
        coefficients = rng.uniform(-init_scale, init_scale, size=(n_instances, k))
        return cls(prototypes, coefficients)

    def logits(self):
        """Assembled logits for every instance, shape (n_instances, h, w)."""
        k, h, w = self.prototypes.shape
        return (self.coefficients @ self.prototypes.reshape(k, h * w)).reshape(-1, h, w)

    def copy(self):
        return PrototypeModel(self.prototypes.copy(), self.coefficients.copy())


def assemble_mask(model, coefficients):
    """Pre-sigmoid logits ``sum_i c_i * P_i`` for one coefficient vector."""
    coefficients = np.asarray(coefficients, dtype=np.float64)
    if coefficients.shape != (model.k,):
        raise ValidationError(f"expected {model.k} coefficients, got shape {coefficients.shape}")
    return np.tensordot(coefficients, model.prototypes, axes=1)


def assembly_backward(model, grad_logits):
    """Gradients of a loss w.r.t. (prototypes, coefficients) given d loss / d logits."""
    k, h, w = model.prototypes.shape
    g = grad_logits.reshape(-1, h * w)
    d_coef = g @ model.prototypes.reshape(k, h * w).T
    d_proto = (model.coefficients.T @ g).reshape(k, h, w)
    return d_proto, d_coef


class GradientDescent:
    """Plain full-batch gradient descent with a fixed learning rate."""

    def __init__(self, learning_rate):
        self.learning_rate = learning_rate

    def step(self, params, grads):
        for param, grad in zip(params, grads):
            param -= self.learning_rate * grad


class Adam:
    """Adam with bias correction; updates parameter arrays in place.

    The per-parameter step normalization keeps prototype pixels learning even
    though each pixel's gradient is diluted by the mean over the grid, and it
    bounds the step where the clamped edge BCE gradient becomes stiff.
    """

    def __init__(self, learning_rate, beta1=0.9, beta2=0.999, eps=1e-8):
        self.learning_rate = learning_rate
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.t = 0
        self.moments = None

    def step(self, params, grads):
        if self.moments is None:
            self.moments = [(np.zeros_like(g), np.zeros_like(g)) for g in grads]
        self.t += 1
        c1 = 1.0 - self.beta1 ** self.t
        c2 = 1.0 - self.beta2 ** self.t
        for param, grad, (m, v) in zip(params, grads, self.moments):
            m *= self.beta1
            m += (1.0 - self.beta1) * grad
            v *= self.beta2
            v += (1.0 - self.beta2) * grad * grad
            param -= self.learning_rate * (m / c1) / (np.sqrt(v / c2) + self.eps)


OPTIMIZERS = {"adam": Adam, "gd": GradientDescent}


def make_optimizer(cfg):
    return OPTIMIZERS[cfg.optimizer](cfg.learning_rate)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.05
    steps: int = 2000
    seed: int = 0
    use_edge_loss: bool = True
    operator: EdgeOperator = EdgeOperator.LAPLACIAN
    weights: LossWeights = field(default_factory=LossWeights)
    gt: GtConfig = field(default_factory=GtConfig)
    init_scale: float = 0.01
    k: int = 8
    optimizer: str = "adam"

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValidationError("learning_rate must be positive")
        if isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 1:
            raise ValidationError("steps must be a positive integer")
        if not self.init_scale > 0:
            raise ValidationError("init_scale must be positive")
        if int(self.k) != self.k or self.k < 1:
            raise ValidationError("k must be a positive integer")
        if self.optimizer not in OPTIMIZERS:
            raise ValidationError(f"optimizer must be one of {sorted(OPTIMIZERS)}")
        object.__setattr__(self, "operator", as_operator(self.operator))


@dataclass
class EvalReport:
    iou: float
    boundary_f1: float
    jaggedness: float
    loss_history: list = field(repr=False, default_factory=list)

    def metrics(self):
        return {"iou": self.iou, "boundary_f1": self.boundary_f1, "jaggedness": self.jaggedness}


@dataclass
class TrainResult:
    model: PrototypeModel
    reports: list
    history: list
    masks: np.ndarray


def training_loss_and_grad(model, mask_targets, edge_targets, cfg):
    """Summed loss over instances and its gradients w.r.t. the model parameters."""
    logits = model.logits()
    losses, grad_logits = loss_and_grad_batch(
        logits, mask_targets, edge_targets, cfg.operator, cfg.weights, cfg.gt.padding,
        use_edge_loss=cfg.use_edge_loss)
    d_proto, d_coef = assembly_backward(model, grad_logits)
    return LossBreakdown.sum(losses), d_proto, d_coef


def evaluate(masks, references, history=()):
    """Per-instance reports; predictions are compared to binarized ``references``."""
    return [EvalReport(iou(p, r), boundary_f1(p, r), jaggedness(p), list(history))
            for p, r in zip(masks, references)]


def train(model, dataset, cfg=TrainConfig(), callback=None):
    """Full-batch first-order training on the loss summed over ``dataset``.

    ``dataset`` is a list of :class:`~railedge.gt.GtLabel`. The model is not
    modified; the trained copy is returned in a :class:`TrainResult`.
    Metrics are computed against each label's unsmoothed mask.
    """
    if not dataset:
        raise ValidationError("dataset must not be empty")
    if model.coefficients.shape[0] != len(dataset):
        raise ValidationError("model has a different number of instances than the dataset")
    mask_targets = np.stack([label.mask_smoothed for label in dataset])
    edge_targets = np.stack([label.edge_target for label in dataset])
    if mask_targets.shape[1:] != model.shape:
        raise ValidationError("label size does not match the prototype size")

    model = model.copy()
    history = []
    optimizer = make_optimizer(cfg)
    for step in range(int(cfg.steps)):
        loss, d_proto, d_coef = training_loss_and_grad(model, mask_targets, edge_targets, cfg)
        if not np.isfinite(loss.total):
            raise TrainingError(step)
        history.append(loss)
        optimizer.step((model.prototypes, model.coefficients), (d_proto, d_coef))
        if callback is not None:
            callback(step, loss, model)
        if step % 500 == 0:
            logger.debug("step %d total %.6f", step, loss.total)

    masks = sigmoid(model.logits())
    reports = evaluate(masks, [label.mask_raw for label in dataset], history)
    return TrainResult(model, reports, history, masks)
