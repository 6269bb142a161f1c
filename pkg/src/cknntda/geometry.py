"""Point clouds, exact pairwise distances, and neighborhood bandwidths."""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import DegenerateBandwidthError, ValidationError

__all__ = [
    "PointCloud",
    "BandwidthProfile",
    "pairwise_distances",
    "validate_distance_matrix",
    "knn_bandwidth",
    "analytic_bandwidth",
    "bandwidth_array",
    "read_points_csv",
    "write_points_csv",
    "read_labels_csv",
    "write_labels_csv",
]


@dataclass(frozen=True)
class PointCloud:
    """A finite set of points in Euclidean space.

    Parameters
    ----------
    points : (N, n) float64 array, one row per point. Must be finite, N >= 1.
    labels : optional (N,) int array of ground-truth group labels.
    seed : optional seed the cloud was generated from.
    intrinsic_dim_hint : optional intrinsic dimension of the underlying set,
        carried as metadata for bandwidth/normalization choices downstream.
    """

    points: np.ndarray
    labels: np.ndarray | None = None
    seed: int | None = None
    intrinsic_dim_hint: int | None = None

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2:
            raise ValidationError(f"points must be a 2-D array, got shape {pts.shape}")
        if pts.shape[0] < 1:
            raise ValidationError("point cloud must contain at least one point")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("points contain non-finite values")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=np.int64)
            if lab.shape != (pts.shape[0],):
                raise ValidationError(
                    f"labels shape {lab.shape} does not match {pts.shape[0]} points"
                )
            lab.setflags(write=False)
            object.__setattr__(self, "labels", lab)

    @property
    def n_points(self):
        return self.points.shape[0]

    @property
    def dim_ambient(self):
        return self.points.shape[1]


@dataclass(frozen=True)
class BandwidthProfile:
    """Per-point bandwidths rho(x) with a record of how they were obtained.

    source is "knn" (rho_i = distance to the k-th nearest neighbor) or
    "analytic" (rho_i = q_i ** beta for a supplied density q).
    """

    rho: np.ndarray
    source: str
    k: int | None = None
    beta: float | None = None

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=np.float64)
        if rho.ndim != 1:
            raise ValidationError("rho must be a 1-D array")
        if not np.all(np.isfinite(rho)):
            raise ValidationError("bandwidths contain non-finite values")
        bad = np.where(rho <= 0)[0]
        if bad.size:
            raise DegenerateBandwidthError(
                f"non-positive bandwidth at point index {bad[0]} (rho={rho[bad[0]]!r})"
            )
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def n_points(self):
        return self.rho.shape[0]


def _as_points(data):
    if isinstance(data, PointCloud):
        return data.points
    pts = np.asarray(data, dtype=np.float64)
    if pts.ndim != 2:
        raise ValidationError("expected a PointCloud or a 2-D array of points")
    return pts


def pairwise_distances(data):
    """Exact Euclidean distance matrix of a point cloud.

    Returns an (N, N) float64 array: symmetric, zero diagonal, non-negative.
    """
    pts = _as_points(data)
    n = pts.shape[0]
    if n == 1:
        return np.zeros((1, 1))
    return squareform(pdist(pts))


def validate_distance_matrix(d):
    """Check distance-matrix invariants; returns the validated float64 array."""
    d = np.asarray(d, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValidationError(f"distance matrix must be square, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise ValidationError("distance matrix contains non-finite values")
    if np.any(d < 0):
        raise ValidationError("distance matrix contains negative entries")
    if np.any(np.diagonal(d) != 0.0):
        raise ValidationError("distance matrix diagonal must be exactly zero")
    if not np.array_equal(d, d.T):
        raise ValidationError("distance matrix must be exactly symmetric")
    return d


def knn_bandwidth(d, k):
    """Distance to the k-th nearest neighbor of every point, self excluded.

    Ties among equidistant neighbors do not affect the returned distance.
    Raises DegenerateBandwidthError (naming the point) if any bandwidth is
    zero, which happens when a point has k or more exact duplicates.
    """
    d = validate_distance_matrix(d)
    n = d.shape[0]
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise ValidationError(f"k must be an integer, got {k!r}")
    if k < 1 or k > n - 1:
        raise ValidationError(f"k must satisfy 1 <= k <= N-1 = {n - 1}, got {k}")
    # Row-sorted ascending: index 0 absorbs the self-distance zero, so index k
    # is the k-th neighbor distance even in the presence of duplicate points.
    rho = np.sort(d, axis=1)[:, k]
    bad = np.where(rho <= 0)[0]
    if bad.size:
        raise DegenerateBandwidthError(
            f"point {bad[0]} has zero distance to its {k} nearest neighbors "
            "(duplicate points)"
        )
    return BandwidthProfile(rho=rho, source="knn", k=int(k))


def analytic_bandwidth(q, beta):
    """Bandwidths rho_i = q_i ** beta from a positive density sample q."""
    q = np.asarray(q, dtype=np.float64)
    if q.ndim != 1:
        raise ValidationError("q must be a 1-D array of density values")
    if not np.all(np.isfinite(q)) or np.any(q <= 0):
        raise ValidationError("density values must be finite and positive")
    beta = float(beta)
    return BandwidthProfile(rho=q**beta, source="analytic", beta=beta)


def bandwidth_array(rho, n_points):
    """Accept a BandwidthProfile or bare array; return validated float64 rho."""
    if isinstance(rho, BandwidthProfile):
        arr = rho.rho
    else:
        arr = np.asarray(rho, dtype=np.float64)
    if arr.shape != (n_points,):
        raise ValidationError(
            f"bandwidth length {arr.shape} does not match {n_points} points"
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError("bandwidths contain non-finite values")
    bad = np.where(arr <= 0)[0]
    if bad.size:
        raise DegenerateBandwidthError(
            f"non-positive bandwidth at point index {bad[0]}"
        )
    return arr


# CSV I/O. Floats are written with 17 significant digits so values round-trip
# bit-exactly through text.

FLOAT_FMT = "%.17g"


def write_points_csv(path, data):
    pts = _as_points(data)
    np.savetxt(path, pts, fmt=FLOAT_FMT, delimiter=",")


def read_points_csv(path):
    try:
        with warnings.catch_warnings():
            # An empty file is reported through the size check below.
            warnings.simplefilter("ignore", UserWarning)
            pts = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    except (ValueError, OSError) as exc:
        raise ValidationError(f"could not read points CSV {path}: {exc}") from exc
    if pts.size == 0:
        raise ValidationError(f"points CSV {path} is empty")
    return PointCloud(points=pts)


def write_labels_csv(path, labels):
    labels = np.asarray(labels, dtype=np.int64)
    np.savetxt(path, labels[:, None], fmt="%d", delimiter=",")


def read_labels_csv(path):
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            lab = np.loadtxt(path, delimiter=",", dtype=np.int64, ndmin=1)
    except (ValueError, OSError) as exc:
        raise ValidationError(f"could not read labels CSV {path}: {exc}") from exc
    return lab.reshape(-1)
