"""Edge-aware mask losses: Sobel/Laplacian edge maps, box-filter label smoothing,
the coupled edge/mask loss with analytic gradients, and a prototype mask head."""

from .edges import EdgeOperator, extract_edges, laplacian_kernel, sobel_kernels
from .estimators import EdgeExtractor, MaskSmoother, PrototypeSegmenter
from .exceptions import DimensionError, TrainingError, ValidationError
from .grid import Kernel, PaddingMode, box_filter, correlate, resize_bilinear
from .gt import GtConfig, GtLabel, prepare_gt, rasterize_trapezoid
from .losses import (LossBreakdown, LossWeights, bce, coupled_loss, edge_loss_raw,
                     total_loss_and_grad)
from .metrics import boundary_f1, iou, jaggedness
from .model import EvalReport, PrototypeModel, TrainConfig, assemble_mask, train

__version__ = "0.1.0"
