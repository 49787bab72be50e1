import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# jit warmup on first kernel call can blow hypothesis' default deadline
settings.register_profile("blindmark", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("blindmark")

CLASSIC_NAMES = ("lena", "baboon", "peppers", "goldhill")
CLASSICS_HINT = ("classic test images not available; set BLINDMARK_IMAGE_DIR to a "
                 "directory holding lena/baboon/peppers/goldhill as 512x512 .pgm or .png")


def find_classic_paths():
    root = os.environ.get("BLINDMARK_IMAGE_DIR")
    if not root:
        return None
    found = {}
    for name in CLASSIC_NAMES:
        for ext in (".pgm", ".png"):
            path = os.path.join(root, name + ext)
            if os.path.exists(path):
                found[name] = path
                break
        else:
            return None
    return found


@pytest.fixture(scope="session")
def classics():
    paths = find_classic_paths()
    if paths is None:
        pytest.skip(CLASSICS_HINT)
    from blindmark import image_core
    images = {name: image_core.load_image(path) for name, path in paths.items()}
    for name, img in images.items():
        if img.shape != (512, 512):
            pytest.skip(f"classic image {name} has shape {img.shape}, need (512, 512)")
    return images


@pytest.fixture(scope="session")
def camera():
    data = pytest.importorskip("skimage.data")
    return data.camera()


@pytest.fixture(scope="session")
def texture512():
    from blindmark import fixtures
    return fixtures.make("texture")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
