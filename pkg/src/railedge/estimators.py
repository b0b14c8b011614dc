"""scikit-learn compatible wrappers around the functional API.

Inputs are stacks of masks shaped ``(n_instances, H, W)``; a single 2-D mask is
treated as a stack of one.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .edges import EdgeOperator, extract_edges
from .grid import PaddingMode
from .gt import GtConfig, prepare_gt
from .losses import LossWeights, sigmoid
from .metrics import boundary_f1
from .model import PrototypeModel, TrainConfig, train
from .validation import check_grid


def check_masks(X, min_size=1):
    X = check_grid(X, "X", min_size=min_size, batched=True)
    if X.ndim == 2:
        X = X[None]
    if X.ndim != 3:
        raise ValueError(f"expected masks of shape (n, H, W), got {X.shape}")
    return X


class EdgeExtractor(TransformerMixin, BaseEstimator):
    """Stateless transformer mapping masks to normalized edge maps."""

    def __init__(self, operator="laplacian", padding="replicate"):
        self.operator = operator
        self.padding = padding

    def fit(self, X, y=None):
        check_masks(X, min_size=3)
        self.operator_ = EdgeOperator(self.operator)
        self.padding_ = PaddingMode(self.padding)
        return self

    def transform(self, X):
        check_is_fitted(self, "operator_")
        return extract_edges(check_masks(X, min_size=3), self.operator_, self.padding_)


class MaskSmoother(TransformerMixin, BaseEstimator):
    """Downscale binary masks bilinearly, then box-filter them."""

    def __init__(self, target_size=(200, 200), box_size=3, smoothing=True,
                 padding="replicate"):
        self.target_size = target_size
        self.box_size = box_size
        self.smoothing = smoothing
        self.padding = padding

    def _config(self, shape):
        return GtConfig(source_size=shape, target_size=tuple(self.target_size),
                        box_size=self.box_size, smoothing_enabled=self.smoothing,
                        padding=self.padding)

    def fit(self, X, y=None):
        X = check_masks(X)
        self.config_ = self._config(X.shape[1:])
        return self

    def transform(self, X):
        check_is_fitted(self, "config_")
        X = check_masks(X)
        return np.stack([prepare_gt(m, self.config_).mask_smoothed for m in X])


class PrototypeSegmenter(BaseEstimator):
    """Fit a prototype-assembly mask head to a set of instance masks.

    The model is transductive, like clustering or t-SNE: every fitted instance
    owns a coefficient vector, so predictions exist only for the masks passed
    to :meth:`fit`. Use :meth:`fit_predict` / :meth:`fit_transform`, or read
    ``masks_`` after fitting.

    Parameters mirror :class:`~railedge.model.TrainConfig`; ``random_state``
    seeds the parameter initialization.
    """

    def __init__(self, n_prototypes=8, learning_rate=0.05, steps=2000,
                 use_edge_loss=True, smoothing=True, operator="laplacian",
                 target_size=(200, 200), box_size=3, padding="replicate",
                 w_mask=1.125, edge_temperature=4.0, init_scale=0.01,
                 optimizer="adam", random_state=0):
        self.n_prototypes = n_prototypes
        self.learning_rate = learning_rate
        self.steps = steps
        self.use_edge_loss = use_edge_loss
        self.smoothing = smoothing
        self.operator = operator
        self.target_size = target_size
        self.box_size = box_size
        self.padding = padding
        self.w_mask = w_mask
        self.edge_temperature = edge_temperature
        self.init_scale = init_scale
        self.optimizer = optimizer
        self.random_state = random_state

    def _train_config(self, source_size):
        gt = GtConfig(source_size=source_size, target_size=tuple(self.target_size),
                      box_size=self.box_size, smoothing_enabled=self.smoothing,
                      padding=self.padding)
        weights = LossWeights(w_mask=self.w_mask, edge_temperature=self.edge_temperature)
        return TrainConfig(learning_rate=self.learning_rate, steps=self.steps,
                           seed=self.random_state, use_edge_loss=self.use_edge_loss,
                           operator=self.operator, weights=weights, gt=gt,
                           init_scale=self.init_scale, k=self.n_prototypes,
                           optimizer=self.optimizer)

    def fit(self, X, y=None):
        """Fit to binary full-resolution masks ``X`` of shape (n, H, W)."""
        X = check_masks(X)
        cfg = self._train_config(X.shape[1:])
        self.labels_ = [prepare_gt(m, cfg.gt, cfg.operator) for m in X]
        model = PrototypeModel.initialize(cfg.k, len(X), cfg.gt.target_size,
                                          cfg.init_scale, rng=cfg.seed)
        result = train(model, self.labels_, cfg)
        self.model_ = result.model
        self.reports_ = result.reports
        self.loss_history_ = result.history
        self.masks_ = result.masks
        return self

    @property
    def prototypes_(self):
        return self.model_.prototypes

    @property
    def coefficients_(self):
        return self.model_.coefficients

    def decision_function(self, X=None):
        """Assembled logits of the fitted instances."""
        check_is_fitted(self, "model_")
        return self.model_.logits()

    def predict_proba(self, X=None):
        return sigmoid(self.decision_function())

    def predict(self, X=None):
        return (self.predict_proba() >= 0.5).astype(np.float64)

    def fit_transform(self, X, y=None):
        return self.fit(X).masks_

    def fit_predict(self, X, y=None):
        return self.fit(X).predict()

    def score(self, X=None, y=None):
        """Mean boundary F1 of the fitted masks against their unsmoothed targets."""
        check_is_fitted(self, "model_")
        return float(np.mean([boundary_f1(p, label.mask_raw)
                              for p, label in zip(self.masks_, self.labels_)]))
