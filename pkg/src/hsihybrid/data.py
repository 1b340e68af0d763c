"""Hyperspectral cubes, label maps, sample extraction, and splits.

Conventions used throughout the package:

* a cube is indexed ``(row, col, band)`` and stored as float64;
* label 0 marks unlabeled background, classes are 1..C;
* every seeded routine draws from ``numpy.random.default_rng`` (PCG64),
  so a fixed seed reproduces results bit-for-bit.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ClassTooSmall,
    DimensionMismatch,
    EvenPatchSize,
    TooManyClasses,
)

INTERLEAVES = ("bsq", "bil", "bip")
DATA_TYPES = ("f32", "f64", "u8", "i16", "u16", "i32")
BYTE_ORDERS = ("little", "big")


@dataclass(frozen=True)
class CubeHeader:
    """Raster geometry and storage layout of a cube file.

    Attributes:
        lines: image rows.
        samples: image columns.
        bands: spectral channels.
        interleave: one of ``bsq``, ``bil``, ``bip``.
        data_type: one of ``f32 f64 u8 i16 u16 i32``.
        byte_order: ``little`` or ``big``.
    """

    lines: int
    samples: int
    bands: int
    interleave: str
    data_type: str
    byte_order: str

    def __post_init__(self):
        if min(self.lines, self.samples, self.bands) <= 0:
            raise DimensionMismatch("header dimensions must be positive")
        if self.interleave not in INTERLEAVES:
            raise DimensionMismatch(f"bad interleave {self.interleave!r}")
        if self.data_type not in DATA_TYPES:
            raise DimensionMismatch(f"bad data type {self.data_type!r}")
        if self.byte_order not in BYTE_ORDERS:
            raise DimensionMismatch(f"bad byte order {self.byte_order!r}")


@dataclass(frozen=True)
class HyperCube:
    """A radiance/reflectance raster: float64 values shaped (lines, samples, bands)."""

    header: CubeHeader
    values: np.ndarray

    def __post_init__(self):
        expected = (self.header.lines, self.header.samples, self.header.bands)
        if self.values.shape != expected:
            raise DimensionMismatch(
                f"cube values shaped {self.values.shape}, header says {expected}")
        if not np.all(np.isfinite(self.values)):
            raise DimensionMismatch("cube contains non-finite values")

    @property
    def lines(self):
        return self.header.lines

    @property
    def samples(self):
        return self.header.samples

    @property
    def bands(self):
        return self.header.bands


def cube_from_array(values):
    """Wrap a (lines, samples, bands) array in a HyperCube with a synthetic header."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 3:
        raise DimensionMismatch(f"cube array must be 3-D, got rank {values.ndim}")
    header = CubeHeader(values.shape[0], values.shape[1], values.shape[2],
                        "bip", "f64", "little")
    return HyperCube(header, values)


@dataclass(frozen=True)
class LabelMap:
    """Per-pixel class ids; 0 is unlabeled background, classes run 1..num_classes."""

    labels: np.ndarray
    num_classes: int

    def __post_init__(self):
        if self.labels.ndim != 2:
            raise DimensionMismatch("label map must be 2-D")
        if self.labels.size == 0:
            raise DimensionMismatch("label map is empty")
        lo = int(self.labels.min())
        hi = int(self.labels.max())
        if lo < 0 or hi > self.num_classes:
            raise DimensionMismatch(
                f"labels span [{lo}, {hi}], outside [0, {self.num_classes}]")

    @property
    def lines(self):
        return self.labels.shape[0]

    @property
    def samples(self):
        return self.labels.shape[1]


def label_map_from_array(labels, num_classes=None):
    labels = np.asarray(labels)
    if not np.issubdtype(labels.dtype, np.integer):
        rounded = np.rint(labels)
        if not np.array_equal(rounded, labels):
            raise DimensionMismatch("label map values must be integers")
        labels = rounded
    labels = labels.astype(np.int64)
    if num_classes is None:
        num_classes = int(labels.max()) if labels.size else 0
    return LabelMap(labels, int(num_classes))


@dataclass(frozen=True)
class SampleSet:
    """Flattened per-pixel feature vectors for every labeled pixel."""

    features: np.ndarray
    labels: np.ndarray
    coords: np.ndarray
    patch_size: int

    def __post_init__(self):
        n = self.features.shape[0]
        if self.labels.shape[0] != n or self.coords.shape[0] != n:
            raise DimensionMismatch("features, labels and coords must align")
        if n and self.labels.min() < 1:
            raise DimensionMismatch("sample sets must not contain label 0")

    def __len__(self):
        return self.features.shape[0]


@dataclass(frozen=True)
class SplitIndices:
    """Disjoint train/test index sets over a SampleSet."""

    train: np.ndarray
    test: np.ndarray
    seed: int = 0


def normalize_cube(cube, per_band=False):
    """Min-max scale cube values into [0, 1].

    Statistics are taken over the whole cube by default; ``per_band=True``
    scales each band independently. A constant cube (or band) maps to all
    zeros.
    """
    v = cube.values
    if per_band:
        mn = v.min(axis=(0, 1), keepdims=True)
        mx = v.max(axis=(0, 1), keepdims=True)
        span = mx - mn
        out = np.zeros_like(v)
        np.divide(v - mn, span, out=out, where=span > 0)
    else:
        mn = v.min()
        mx = v.max()
        if mx == mn:
            out = np.zeros_like(v)
        else:
            out = (v - mn) / (mx - mn)
    return HyperCube(cube.header, out)


def _reflect_index(i, n):
    # np.pad 'reflect' semantics: mirror about the edge sample, no duplication
    if n == 1:
        return 0
    period = 2 * n - 2
    i = abs(i) % period
    return period - i if i >= n else i


def extract_patch(cube, row, col, patch_size):
    """Flatten the patch_size x patch_size window centered at (row, col).

    Window pixels appear in row-major order, each contributing its full
    band vector. Out-of-image neighbors are filled by mirror reflection.
    """
    if patch_size % 2 == 0 or patch_size < 1:
        raise EvenPatchSize(patch_size)
    if not (0 <= row < cube.lines and 0 <= col < cube.samples):
        raise IndexError(f"pixel ({row}, {col}) outside image")
    half = patch_size // 2
    rows = [_reflect_index(row + dr, cube.lines) for dr in range(-half, half + 1)]
    cols = [_reflect_index(col + dc, cube.samples) for dc in range(-half, half + 1)]
    window = cube.values[np.ix_(rows, cols)]
    return window.reshape(-1)


def build_samples(cube, labels, patch_size=1, per_band=False):
    """Turn every labeled pixel into a (feature vector, class id, coord) sample.

    The cube is min-max normalized first; background pixels (label 0) are
    skipped. Features have length patch_size**2 * bands.
    """
    if (cube.lines, cube.samples) != (labels.lines, labels.samples):
        raise DimensionMismatch(
            f"cube is {cube.lines}x{cube.samples}, labels are "
            f"{labels.lines}x{labels.samples}")
    if patch_size % 2 == 0 or patch_size < 1:
        raise EvenPatchSize(patch_size)
    norm = normalize_cube(cube, per_band=per_band)
    mask = labels.labels > 0
    coords = np.argwhere(mask).astype(np.int64)
    y = labels.labels[mask].astype(np.int64)
    if patch_size == 1:
        feats = norm.values[mask].astype(np.float64)
    else:
        feats = np.empty((len(coords), patch_size * patch_size * cube.bands))
        for i, (r, c) in enumerate(coords):
            feats[i] = extract_patch(norm, int(r), int(c), patch_size)
    return SampleSet(feats, y, coords, patch_size)


def split_samples(sample_set, train_fraction=0.8, seed=0):
    """Stratified train/test split: floor(train_fraction * n_c) of each class trains.

    The shuffle order is fixed by the seed, so identical inputs always
    produce identical splits. Classes with fewer than 2 samples are
    rejected so both sides of the split see every class.
    """
    y = sample_set.labels
    classes = np.unique(y)
    counts = {int(c): int(np.sum(y == c)) for c in classes}
    for c, n_c in counts.items():
        if n_c < 2:
            raise ClassTooSmall(c, n_c)
    rng = np.random.default_rng(seed)
    train_parts = []
    test_parts = []
    for c in classes:
        idx = np.nonzero(y == c)[0]
        perm = rng.permutation(idx)
        k = math.floor(train_fraction * len(idx))
        train_parts.append(perm[:k])
        test_parts.append(perm[k:])
    train = np.concatenate(train_parts).astype(np.int64)
    test = np.concatenate(test_parts).astype(np.int64)
    return SplitIndices(train, test, seed)


def gen_synthetic_scene(lines, samples, bands, n_classes, seed,
                        noise_sigma=0.05):
    """Generate a desk-scale scene: C rectangular class regions inside a
    background border, each class with its own random spectral signature
    plus Gaussian noise.

    Deterministic for a fixed seed (PCG64). With noise_sigma=0 every pixel
    equals its class mean exactly.
    """
    if bands < 2:
        raise ValueError("synthetic scenes need at least 2 bands")
    if n_classes < 1:
        raise ValueError("need at least one class")
    ir = lines - 2
    ic = samples - 2
    if ir < 1 or ic < 1 or n_classes > ir * ic:
        raise TooManyClasses(
            f"{n_classes} classes do not fit a {lines}x{samples} scene")
    n_rows = max(1, int(math.floor(math.sqrt(n_classes))))
    n_rows = min(n_rows, ir, n_classes)
    while math.ceil(n_classes / n_rows) > ic:
        n_rows += 1
        if n_rows > min(ir, n_classes):
            raise TooManyClasses(
                f"{n_classes} classes do not fit a {lines}x{samples} scene")

    label_grid = np.zeros((lines, samples), dtype=np.int64)
    per_row = [n_classes // n_rows + (1 if i < n_classes % n_rows else 0)
               for i in range(n_rows)]
    cls = 1
    for i in range(n_rows):
        r0 = 1 + i * ir // n_rows
        r1 = 1 + (i + 1) * ir // n_rows
        k = per_row[i]
        for j in range(k):
            c0 = 1 + j * ic // k
            c1 = 1 + (j + 1) * ic // k
            label_grid[r0:r1, c0:c1] = cls
            cls += 1

    rng = np.random.default_rng(seed)
    means = rng.uniform(0.1, 0.9, size=(n_classes + 1, bands))
    noise = rng.standard_normal(size=(lines, samples, bands))
    values = means[label_grid] + noise_sigma * noise
    return cube_from_array(values), LabelMap(label_grid, n_classes)
