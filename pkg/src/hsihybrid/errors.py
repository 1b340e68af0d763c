"""Exception types raised by the pipeline.

Every validation failure has a dedicated class so callers (and the CLI
exit-code mapping) can distinguish bad configuration from bad data.
"""


class HsiHybridError(Exception):
    """Base class for all errors raised by this package."""


# ---------------------------------------------------------------- ingestion


class BadMagic(HsiHybridError):
    """File does not start with the expected magic bytes."""


class MissingKey(HsiHybridError):
    def __init__(self, name):
        super().__init__(f"required header key missing: {name!r}")
        self.name = name


class UnsupportedDataType(HsiHybridError):
    def __init__(self, code):
        super().__init__(f"unsupported ENVI data type code: {code}")
        self.code = code


class SizeMismatch(HsiHybridError):
    def __init__(self, expected, got):
        super().__init__(f"raw stream size mismatch: expected {expected} bytes, got {got}")
        self.expected = expected
        self.got = got


class UnsupportedDtype(HsiHybridError):
    def __init__(self, descr):
        super().__init__(f"unsupported NPY dtype descriptor: {descr!r}")
        self.descr = descr


class FortranOrderUnsupported(HsiHybridError):
    """NPY file stores Fortran-ordered data, which the loader rejects."""


class ShapeRankUnsupported(HsiHybridError):
    def __init__(self, rank):
        super().__init__(f"NPY array rank {rank} unsupported (need 2 or 3)")
        self.rank = rank


# --------------------------------------------------------------------- data


class DimensionMismatch(HsiHybridError):
    """Shapes of two inputs are incompatible."""


class EvenPatchSize(HsiHybridError):
    def __init__(self, n):
        super().__init__(f"patch size must be odd, got {n}")
        self.n = n


class ClassTooSmall(HsiHybridError):
    def __init__(self, class_id, count=None):
        msg = f"class {class_id} has too few samples to split"
        if count is not None:
            msg += f" ({count})"
        super().__init__(msg)
        self.class_id = class_id


class TooManyClasses(HsiHybridError):
    """Requested more classes than the synthetic scene can hold."""


# ------------------------------------------------------------------- models


class BadArchitecture(HsiHybridError):
    """Layer size list cannot form a valid network."""


class EmptyTrainingSet(HsiHybridError):
    """Training requires at least one sample."""


class BadLabel(HsiHybridError):
    def __init__(self, label):
        super().__init__(f"binary label must be -1 or +1, got {label}")
        self.label = label


class SingleClassInput(HsiHybridError):
    def __init__(self, class_id=None):
        msg = "training data contains a single class"
        if class_id is not None:
            msg = f"no positive samples for class {class_id}"
        super().__init__(msg)
        self.class_id = class_id


class NonLinearKernel(HsiHybridError):
    """The primal solver only supports the linear kernel."""


class EmptyInput(HsiHybridError):
    """Operation requires a nonempty input."""


# ------------------------------------------------------------------ metrics


class LengthMismatch(HsiHybridError):
    """Truth and prediction vectors differ in length."""


class LabelOutOfRange(HsiHybridError):
    def __init__(self, label, n_classes):
        super().__init__(f"label {label} outside [1, {n_classes}]")
        self.label = label
        self.n_classes = n_classes


class EmptyMatrix(HsiHybridError):
    """Confusion matrix holds no samples."""


class ClassOutOfRange(HsiHybridError):
    def __init__(self, class_id, n_classes):
        super().__init__(f"class {class_id} outside [1, {n_classes}]")
        self.class_id = class_id
        self.n_classes = n_classes


class NoDefinedClasses(HsiHybridError):
    """Macro average requires at least one class with defined metrics."""


# ------------------------------------------------------------------- render


class PaletteTooSmall(HsiHybridError):
    def __init__(self, needed, got):
        super().__init__(f"palette has {got} colors, grid needs at least {needed}")
        self.needed = needed
        self.got = got


# ---------------------------------------------------------------- config/io


class ConfigError(HsiHybridError):
    """Run configuration is malformed or inconsistent."""
