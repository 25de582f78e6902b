"""The sklearn-style front end."""

import numpy as np
import pytest
from sklearn.base import clone

from dctfuse import DctFusion, FusionOptions, fuse, fuse_multi
from dctfuse.bench import box_blur, synthetic_reference


@pytest.fixture(scope="module")
def pair():
    ref = synthetic_reference(21, 64)
    blurred = box_blur(ref, 3)
    a = ref.copy()
    a[:, :32] = blurred[:, :32]
    b = blurred.copy()
    b[:, :32] = ref[:, :32]
    return a, b


def test_get_set_params_round_trip():
    est = DctFusion(measure="variance", consistency_verification=True)
    params = est.get_params()
    assert params["measure"] == "variance"
    assert params["consistency_verification"] is True
    est.set_params(measure="sf", majority_radius=2)
    assert est.measure == "sf"
    assert est.majority_radius == 2


def test_clone_preserves_params():
    est = DctFusion(measure="acmax", ac_threshold=2.0, arithmetic="fixed")
    copy = clone(est)
    assert copy.get_params() == est.get_params()


def test_fit_validates_and_returns_self():
    est = DctFusion()
    assert est.fit() is est
    with pytest.raises(ValueError):
        DctFusion(measure="nope").fit()
    with pytest.raises(ValueError):
        DctFusion(arithmetic="decimal").fit()


def test_transform_matches_fuse_multi(pair):
    a, b = pair
    est = DctFusion()
    got = est.fit().transform([a, b])
    want, _ = fuse_multi([a, b], FusionOptions())
    assert np.array_equal(got, want)


def test_transform_accepts_stacked_array(pair):
    a, b = pair
    stack = np.stack([a, b])
    assert np.array_equal(DctFusion().transform(stack),
                          DctFusion().transform([a, b]))


def test_fit_transform_shortcut(pair):
    a, b = pair
    assert np.array_equal(DctFusion().fit_transform([a, b]),
                          DctFusion().transform([a, b]))


def test_fuse_pair_matches_functional_api(pair):
    a, b = pair
    est = DctFusion(consistency_verification=True)
    fused, labels, report = est.fuse_pair(a, b)
    want, want_labels, _ = fuse(a, b, FusionOptions(consistency_verification=True))
    assert np.array_equal(fused, want)
    assert np.array_equal(labels, want_labels)
    assert report.consistency_verification
