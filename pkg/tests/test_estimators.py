import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from railedge.estimators import EdgeExtractor, MaskSmoother, PrototypeSegmenter
from railedge.edges import extract_edges
from railedge.gt import GtConfig, prepare_gt, random_rail_trapezoids, rasterize_shape


@pytest.fixture(scope="module")
def masks():
    shapes = random_rail_trapezoids(2, (96, 96), rng=5)
    return np.stack([rasterize_shape(s, (96, 96)) for s in shapes])


def test_edge_extractor_matches_function(masks):
    out = EdgeExtractor(operator="sobel", padding="zero").fit_transform(masks)
    np.testing.assert_array_equal(out, extract_edges(masks, "sobel", "zero"))


def test_edge_extractor_accepts_single_mask(masks):
    assert EdgeExtractor().fit_transform(masks[0]).shape == (1, 96, 96)


def test_edge_extractor_rejects_bad_operator(masks):
    with pytest.raises(ValueError):
        EdgeExtractor(operator="canny").fit(masks)


def test_unfitted_transform_raises(masks):
    with pytest.raises(NotFittedError):
        MaskSmoother().transform(masks)


def test_smoother_matches_prepare_gt(masks):
    out = MaskSmoother(target_size=(24, 24)).fit_transform(masks)
    cfg = GtConfig((96, 96), (24, 24))
    for got, m in zip(out, masks):
        np.testing.assert_array_equal(got, prepare_gt(m, cfg).mask_smoothed)


def test_pipeline_composes(masks):
    pipe = make_pipeline(MaskSmoother(target_size=(24, 24)), EdgeExtractor())
    edges = pipe.fit_transform(masks)
    assert edges.shape == (2, 24, 24)
    assert edges.min() >= 0 and edges.max() <= 1


def test_params_and_clone():
    est = PrototypeSegmenter(n_prototypes=4, steps=10, random_state=3)
    params = est.get_params()
    assert params["n_prototypes"] == 4 and params["random_state"] == 3
    twin = clone(est).set_params(steps=20)
    assert twin.steps == 20 and est.steps == 10


def test_segmenter_fit_and_predict(masks):
    est = PrototypeSegmenter(n_prototypes=4, steps=150, target_size=(24, 24))
    pred = est.fit_predict(masks)
    assert pred.shape == (2, 24, 24)
    assert set(np.unique(pred)) <= {0.0, 1.0}
    assert est.prototypes_.shape == (4, 24, 24) and est.coefficients_.shape == (2, 4)
    assert len(est.loss_history_) == 150
    np.testing.assert_array_equal(est.predict_proba(), est.masks_)
    assert 0.0 <= est.score() <= 1.0
    assert est.score() >= 0.8


def test_segmenter_deterministic(masks):
    a = PrototypeSegmenter(n_prototypes=4, steps=20, target_size=(24, 24)).fit_transform(masks)
    b = PrototypeSegmenter(n_prototypes=4, steps=20, target_size=(24, 24)).fit_transform(masks)
    assert a.tobytes() == b.tobytes()


def test_segmenter_unfitted():
    with pytest.raises(NotFittedError):
        PrototypeSegmenter().predict()
