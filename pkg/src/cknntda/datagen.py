"""Seeded dataset generators, pattern-image synthesis, and image-patch clouds.

Every generator is a pure function of its parameters and seed. Randomness
comes from numpy's default_rng (PCG64); each docstring lists the exact draw
sequence ("stream") so fixtures are reproducible bit-for-bit.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .geometry import PointCloud

__all__ = [
    "PATTERN_KINDS",
    "PatchCloudSpec",
    "gen_figure_eight",
    "gen_cut_gaussian",
    "gen_cut_gaussian_1d_embedded",
    "gen_uniform_circle",
    "gen_three_boxes",
    "gen_spirals",
    "gaussian_density",
    "gen_pattern_image",
    "pattern_periods",
    "pattern_default_size",
    "extract_patches",
    "patch_cloud",
    "decimate",
    "write_pgm",
    "read_pgm",
]


def _rng(seed):
    return np.random.default_rng(seed)


def _annulus(rng, n, center, r_in, r_out):
    # stream: one uniform (n,) draw for radii, one uniform (n,) draw for angles
    u = rng.random(n)
    theta = 2.0 * math.pi * rng.random(n)
    r = np.sqrt(r_in**2 + u * (r_out**2 - r_in**2))
    return np.column_stack([center[0] + r * np.cos(theta), center[1] + r * np.sin(theta)])


def gen_figure_eight(seed=0, n_large=60, n_small=60):
    """Two overlapping annuli whose union deformation-retracts to a wedge of
    two circles: Betti numbers (1, 2).

    Uniform-area sampling: 60 points on the annulus centered (-1, 0) with
    radii [2/3, 1], then 60 on the annulus centered (1/5, 0) with radii
    [1/5, 3/10]; radii via the sqrt inverse CDF. Stream: large-annulus radii,
    large-annulus angles, small-annulus radii, small-annulus angles.
    """
    rng = _rng(seed)
    big = _annulus(rng, n_large, (-1.0, 0.0), 2.0 / 3.0, 1.0)
    small = _annulus(rng, n_small, (0.2, 0.0), 0.2, 0.3)
    return PointCloud(points=np.vstack([big, small]), seed=seed, intrinsic_dim_hint=1)


def _cut_gaussian_labels(points, lo, hi):
    r = np.linalg.norm(points, axis=1)
    labels = (r > hi).astype(np.int64)
    if points.shape[1] == 1:
        # On the line the outside of the gap is two rays, so the truth
        # partition has three blocks: interior, left ray, right ray.
        labels = labels * np.where(points[:, 0] > 0, 2, 1)
    return labels


def gen_cut_gaussian(m=2, n_target=200, seed=0, variant="count", n_sample=150, gap=None):
    """Standard normal sample in R^m with a radial band removed.

    variant="count": reject radii within w/2 of w + 0.3*m (w = 0.1^(1/m))
    until exactly n_target points remain. The gap splits the support into a
    compact ball and an unbounded shell; for m = 1 the shell is two rays, so
    labels have three blocks (0 interior, 1 left, 2 right), otherwise two.
    variant="sample": draw n_sample points once and discard radii inside the
    gap (default [1/4, 3/4]), so the output count varies with the seed.
    Stream: standard-normal batches of shape (batch, m) with batch =
    max(256, 2*n_target) ("count") or a single (n_sample, m) draw ("sample").
    """
    if variant not in ("count", "sample"):
        raise ValidationError(f"variant must be 'count' or 'sample', got {variant!r}")
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool) or m < 1:
        raise ValidationError(f"dimension m must be a positive integer, got {m!r}")
    m = int(m)
    rng = _rng(seed)
    if gap is None:
        if variant == "sample":
            lo, hi = 0.25, 0.75
        else:
            w = 0.1 ** (1.0 / m)
            center = w + 0.3 * m
            lo, hi = center - w / 2.0, center + w / 2.0
    else:
        lo, hi = map(float, gap)
    if not 0 < lo < hi:
        raise ValidationError(f"gap must satisfy 0 < lo < hi, got ({lo}, {hi})")

    def keep(x):
        r = np.linalg.norm(x, axis=1)
        return x[(r < lo) | (r > hi)]

    if variant == "sample":
        pts = keep(rng.standard_normal((int(n_sample), m)))
    else:
        n_target = int(n_target)
        if n_target < 1:
            raise ValidationError("n_target must be positive")
        batch = max(256, 2 * n_target)
        chunks, have = [], 0
        while have < n_target:
            good = keep(rng.standard_normal((batch, m)))
            chunks.append(good)
            have += len(good)
        pts = np.vstack(chunks)[:n_target]
    labels = _cut_gaussian_labels(pts, lo, hi)
    return PointCloud(points=pts, labels=labels, seed=seed, intrinsic_dim_hint=m)


def gen_cut_gaussian_1d_embedded(n=200, seed=0):
    """Gaussian sample on the line with 0.4 < t < 0.8 removed, embedded in the
    plane by t -> (t^3 - t, 1/(t^2 + 1)).

    The image curve self-intersects, so the two pieces carry Betti numbers
    (2, 1). Labels: 0 for t <= 0.4, 1 for t >= 0.8. Stream: standard-normal
    batches of size max(256, 2n), kept while outside (0.4, 0.8), truncated.
    """
    n = int(n)
    if n < 1:
        raise ValidationError("n must be positive")
    rng = _rng(seed)
    batch = max(256, 2 * n)
    kept = []
    have = 0
    while have < n:
        t = rng.standard_normal(batch)
        t = t[(t <= 0.4) | (t >= 0.8)]
        kept.append(t)
        have += len(t)
    t = np.concatenate(kept)[:n]
    pts = np.column_stack([t**3 - t, 1.0 / (t**2 + 1.0)])
    labels = (t >= 0.8).astype(np.int64)
    return PointCloud(points=pts, labels=labels, seed=seed, intrinsic_dim_hint=1)


def gen_uniform_circle(n, seed=0):
    """n points (sin(theta), cos(theta)) with theta uniform on [0, 2pi).

    Stream: one uniform (n,) draw for the angles.
    """
    n = int(n)
    if n < 1:
        raise ValidationError("n must be positive")
    rng = _rng(seed)
    theta = 2.0 * math.pi * rng.random(n)
    pts = np.column_stack([np.sin(theta), np.cos(theta)])
    return PointCloud(points=pts, seed=seed, intrinsic_dim_hint=1)


DEFAULT_THREE_BOXES = (
    (0.0, 0.0, 1.0, 1.0),
    (1.15, 0.0, 2.15, 1.0),
    (2.75, 0.0, 3.75, 1.5),
)


def gen_three_boxes(counts=(150, 150, 25), rects=DEFAULT_THREE_BOXES, seed=0):
    """Uniform samples in three disjoint axis-aligned rectangles.

    Defaults: two unit boxes densely sampled either side of a gap narrower
    than the sparse third box's typical spacing, so no single distance scale
    recovers the three-block truth but a density-adaptive one does. Labels
    are rectangle indices. Stream: per rectangle in order, one uniform
    (count, 2) draw.
    """
    if len(counts) != len(rects):
        raise ValidationError("counts and rects must have equal length")
    rects = [tuple(map(float, r)) for r in rects]
    for xmin, ymin, xmax, ymax in rects:
        if not (xmin < xmax and ymin < ymax):
            raise ValidationError("each rectangle needs xmin < xmax and ymin < ymax")
    for a in range(len(rects)):
        for b in range(a + 1, len(rects)):
            ax0, ay0, ax1, ay1 = rects[a]
            bx0, by0, bx1, by1 = rects[b]
            if ax0 < bx1 and bx0 < ax1 and ay0 < by1 and by0 < ay1:
                raise ValidationError(f"rectangles {a} and {b} overlap")
    rng = _rng(seed)
    pieces, labels = [], []
    for idx, ((xmin, ymin, xmax, ymax), cnt) in enumerate(zip(rects, counts)):
        cnt = int(cnt)
        if cnt < 1:
            raise ValidationError("counts must be positive")
        u = rng.random((cnt, 2))
        pieces.append(np.column_stack([xmin + u[:, 0] * (xmax - xmin), ymin + u[:, 1] * (ymax - ymin)]))
        labels.append(np.full(cnt, idx, dtype=np.int64))
    return PointCloud(
        points=np.vstack(pieces), labels=np.concatenate(labels), seed=seed, intrinsic_dim_hint=2
    )


def _spiral_angle(s, b):
    # Invert s(phi) = (b/2)(phi sqrt(1+phi^2) + asinh(phi)) by Newton.
    phi = np.sqrt(2.0 * np.maximum(s, 0.0) / b)
    for _ in range(30):
        f = 0.5 * b * (phi * np.sqrt(1.0 + phi**2) + np.arcsinh(phi)) - s
        df = b * np.sqrt(1.0 + phi**2)
        step = f / df
        phi = np.maximum(phi - step, 0.0)
        if np.max(np.abs(step)) < 1e-13:
            break
    return phi


def gen_spirals(
    dim=2,
    n_total=300,
    seed=0,
    radius_coeff=0.25,
    phi0=2.0,
    arclength_scale=2.5,
    max_arclength=8.0,
    pitch=0.1,
):
    """Three congruent Archimedean spiral arms offset by 120 degrees, with
    sampling density decaying exponentially along each arm.

    Radius grows linearly with winding angle (r = radius_coeff * (phi0 +
    phi)); arclength beyond the offset is drawn from an exponential of scale
    arclength_scale truncated at max_arclength (inverse CDF, so the count is
    exact). Arms are assigned round-robin, labels are arm indices, and dim=3
    appends a coordinate linear in arclength (slope pitch). Stream: one
    uniform (n_total,) draw for arclengths.
    """
    if dim not in (2, 3):
        raise ValidationError(f"dim must be 2 or 3, got {dim!r}")
    n_total = int(n_total)
    if n_total < 3:
        raise ValidationError("n_total must be at least 3")
    if radius_coeff <= 0 or arclength_scale <= 0 or max_arclength <= 0:
        raise ValidationError("spiral shape parameters must be positive")
    rng = _rng(seed)
    u = rng.random(n_total)
    s = -arclength_scale * np.log1p(-u * (1.0 - math.exp(-max_arclength / arclength_scale)))
    arm = np.arange(n_total, dtype=np.int64) % 3
    # Arclength is measured from the arm start: shift the inversion so phi=phi0 at s=0.
    b = radius_coeff
    s0 = 0.5 * b * (phi0 * math.sqrt(1.0 + phi0**2) + math.asinh(phi0))
    phi = _spiral_angle(s + s0, b)
    theta = phi + 2.0 * math.pi * arm / 3.0
    r = b * phi
    cols = [r * np.cos(theta), r * np.sin(theta)]
    if dim == 3:
        cols.append(pitch * s)
    return PointCloud(
        points=np.column_stack(cols), labels=arm, seed=seed, intrinsic_dim_hint=1
    )


def gaussian_density(points):
    """Standard normal density (2pi)^(-m/2) exp(-|x|^2/2) at each row."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ValidationError("points must be a 2-D array")
    m = pts.shape[1]
    r2 = np.einsum("ij,ij->i", pts, pts)
    return (2.0 * math.pi) ** (-m / 2.0) * np.exp(-0.5 * r2)


# --- pattern images -------------------------------------------------------

PATTERN_KINDS = ("stripes", "biperiodic", "checkerboard", "hexagonal")

# Phase periods of the constituent cosine systems (pixels). The loop space of
# 9x9 patches is one circle per system: 1, 2, 2, and 3 circles respectively.
# Periods share no factor with 3, so sliding a 9x9 window by strides 1, 3, or
# 9 still visits every phase of every system.
DEFAULT_PATTERN_PERIODS = {
    "stripes": (5,),
    "biperiodic": (7, 8),
    "checkerboard": (8,),
    "hexagonal": (5, 7, 8),
}


def _pattern_grid(size):
    h, w = size
    y = np.arange(h, dtype=np.int64)[:, None]
    x = np.arange(w, dtype=np.int64)[None, :]
    return y, x


def _phase_cos(idx, period):
    # Integer mod before the trig call keeps periodicity bit-exact.
    return np.cos(2.0 * math.pi * (idx % period) / period)


def pattern_default_size(kind, periods=None):
    """Smallest image whose stride-1 9x9 patch grid hits each distinct patch
    phase exactly once (avoids duplicate patch points)."""
    p = DEFAULT_PATTERN_PERIODS[kind] if periods is None else tuple(periods)
    if kind == "stripes":
        return (9, p[0] + 8)
    if kind == "biperiodic":
        return (p[1] + 8, p[0] + 8)
    if kind == "checkerboard":
        # Patches at (y, x) and (y + p/2, x + p/2) coincide; halving the row
        # range keeps one representative per phase class.
        return (p[0] // 2 + 8, p[0] + 8)
    if kind == "hexagonal":
        p1, p2, p3 = p
        return (p2 + 8, p1 * p3 + 8)
    raise ValidationError(f"kind must be one of {PATTERN_KINDS}")


def gen_pattern_image(
    kind, size=None, gradient=False, gradient_strength=0.175, periods=None, amplitudes=None
):
    """Periodic grayscale test pattern in [0, 1], optionally corrupted by a
    linear brightness ramp.

    Kinds (phase circles of the 9x9 patch space, hence its first Betti
    number): stripes, one vertical cosine system (1); biperiodic, independent
    x and y cosines with different periods (2); checkerboard, a product
    cosine whose lattice is the half-period diagonal (2); hexagonal, three
    stripe systems (x, y, and diagonal) with pairwise coprime periods (3).
    With gradient=True the pattern is compressed to amplitude 1 -
    gradient_strength and a plane ramp in x + y fills the rest, so patches a
    full period apart no longer match exactly.
    """
    if kind not in PATTERN_KINDS:
        raise ValidationError(f"kind must be one of {PATTERN_KINDS}")
    p = DEFAULT_PATTERN_PERIODS[kind] if periods is None else tuple(int(v) for v in periods)
    if any(v < 2 for v in p):
        raise ValidationError("pattern periods must be at least 2")
    if size is None:
        size = pattern_default_size(kind, p)
    h, w = int(size[0]), int(size[1])
    if h < 1 or w < 1:
        raise ValidationError("image size must be positive")
    y, x = _pattern_grid((h, w))
    if kind == "stripes":
        base = 0.5 + 0.5 * _phase_cos(x, p[0]) + np.zeros((h, 1))
    elif kind == "biperiodic":
        base = 0.5 + 0.25 * _phase_cos(x, p[0]) + 0.25 * _phase_cos(y, p[1])
    elif kind == "checkerboard":
        if p[0] % 2:
            raise ValidationError("checkerboard period must be even")
        base = 0.5 + 0.5 * _phase_cos(x, p[0]) * _phase_cos(y, p[0])
    else:
        p1, p2, p3 = p
        if math.gcd(p1, p3) != 1 or math.gcd(p2, p3) != 1 or math.gcd(p1, p2) != 1:
            raise ValidationError("hexagonal periods must be pairwise coprime")
        if amplitudes is None:
            # Each stripe system traces a regular p-gon circle in patch
            # space whose 1-cycle fills at a chord proportional to the
            # amplitude times 2*sin(pi*ceil(p/3)/p). Weighting amplitudes by
            # the inverse chord factor aligns the three loop deaths, so the
            # full (1,3) Betti state forms the longest constant run.
            inv = np.array([
                1.0 / (2.0 * math.sin(math.pi * math.ceil(q / 3.0) / q))
                for q in (p1, p2, p3)
            ])
            amplitudes = tuple(inv / inv.sum() * 0.5)
        a1, a2, a3 = amplitudes
        if a1 <= 0 or a2 <= 0 or a3 <= 0 or a1 + a2 + a3 > 0.5 + 1e-12:
            raise ValidationError("hexagonal amplitudes must be positive with sum <= 1/2")
        base = (
            0.5
            + a1 * _phase_cos(x, p1)
            + a2 * _phase_cos(y, p2)
            + a3 * _phase_cos((x + y), p3)
        )
    if not gradient:
        return base
    g = float(gradient_strength)
    if not 0.0 < g < 1.0:
        raise ValidationError("gradient_strength must lie in (0, 1)")
    span = max((h - 1) + (w - 1), 1)
    ramp = (y + x) / span
    return (1.0 - g) * base + g * ramp


def pattern_periods(kind, periods=None):
    """Exact per-axis pixel periods (period_y, period_x) of the ungraded
    pattern, for periodicity checks."""
    p = DEFAULT_PATTERN_PERIODS[kind] if periods is None else tuple(int(v) for v in periods)
    if kind == "stripes":
        return (1, p[0])
    if kind == "biperiodic":
        return (p[1], p[0])
    if kind == "checkerboard":
        return (p[0], p[0])
    if kind == "hexagonal":
        p1, p2, p3 = p
        return (math.lcm(p2, p3), math.lcm(p1, p3))
    raise ValidationError(f"kind must be one of {PATTERN_KINDS}")


# --- patch clouds ---------------------------------------------------------


@dataclass(frozen=True)
class PatchCloudSpec:
    """Sliding-window extraction parameters: image, patch side s, stride, and
    a decimation factor applied to the image first."""

    image: np.ndarray
    patch_size: int
    stride: int = 1
    decimation: int = 1


def decimate(image, factor):
    """Keep every factor-th pixel per axis, anchored at the top-left."""
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 2:
        raise ValidationError("image must be 2-D")
    if not isinstance(factor, (int, np.integer)) or isinstance(factor, bool) or factor < 1:
        raise ValidationError(f"decimation factor must be an integer >= 1, got {factor!r}")
    return img[::factor, ::factor]


def extract_patches(image, patch_size, stride=1):
    """All s x s windows at the given stride, flattened row-major.

    Output shape (n_patches, s*s) with n_patches = prod over axes of
    floor((L - s)/stride + 1); windows enumerated row-major over their
    top-left corners.
    """
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 2:
        raise ValidationError("image must be 2-D")
    s = int(patch_size)
    stride = int(stride)
    if s < 1 or stride < 1:
        raise ValidationError("patch_size and stride must be positive")
    h, w = img.shape
    if s > h or s > w:
        raise ValidationError(f"patch size {s} exceeds image shape {img.shape}")
    n_r = (h - s) // stride + 1
    n_c = (w - s) // stride + 1
    windows = np.lib.stride_tricks.sliding_window_view(img, (s, s))[::stride, ::stride]
    return windows.reshape(n_r * n_c, s * s).copy()


def patch_cloud(spec):
    """Decimate, slide, and flatten into a PointCloud in R^(s^2)."""
    img = decimate(spec.image, spec.decimation)
    pts = extract_patches(img, spec.patch_size, spec.stride)
    return PointCloud(points=pts, intrinsic_dim_hint=None)


# --- PGM I/O ---------------------------------------------------------------


def write_pgm(path, image, binary=True):
    """Write a [0, 1] grayscale image as PGM with maxval 255 (P5 if binary,
    P2 ascii otherwise)."""
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 2:
        raise ValidationError("image must be 2-D")
    if img.size == 0:
        raise ValidationError("image must be non-empty")
    if np.nanmin(img) < 0.0 or np.nanmax(img) > 1.0 or not np.all(np.isfinite(img)):
        raise ValidationError("image values must lie in [0, 1]")
    quant = np.rint(img * 255.0).astype(np.uint8)
    h, w = img.shape
    if binary:
        with open(path, "wb") as fh:
            fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
            fh.write(quant.tobytes())
    else:
        with open(path, "w") as fh:
            fh.write(f"P2\n{w} {h}\n255\n")
            for row in quant:
                fh.write(" ".join(str(int(v)) for v in row) + "\n")


def read_pgm(path):
    """Read P2/P5 PGM into floats in [0, 1] (values divided by maxval)."""
    with open(path, "rb") as fh:
        data = fh.read()

    def tokens(buf):
        i = 0
        while i < len(buf):
            c = buf[i : i + 1]
            if c == b"#":
                while i < len(buf) and buf[i : i + 1] != b"\n":
                    i += 1
            elif c.isspace():
                i += 1
            else:
                j = i
                while j < len(buf) and not buf[j : j + 1].isspace() and buf[j : j + 1] != b"#":
                    j += 1
                yield i, buf[i:j]
                i = j

    it = tokens(data)
    try:
        _, magic = next(it)
        if magic not in (b"P2", b"P5"):
            raise ValidationError(f"not a PGM file: magic {magic!r}")
        _, wtok = next(it)
        _, htok = next(it)
        mpos, mtok = next(it)
        w, h, maxval = int(wtok), int(htok), int(mtok)
    except StopIteration:
        raise ValidationError("truncated PGM header") from None
    if w < 1 or h < 1 or maxval < 1 or maxval > 65535:
        raise ValidationError("invalid PGM dimensions or maxval")
    if magic == b"P5":
        # Raster starts one whitespace byte after maxval.
        pos = mpos + len(mtok) + 1
        count = w * h
        itemsize = 2 if maxval > 255 else 1
        if len(data) - pos < count * itemsize:
            raise ValidationError("truncated PGM raster")
        if maxval > 255:
            raw = np.frombuffer(data, dtype=">u2", count=count, offset=pos)
        else:
            raw = np.frombuffer(data, dtype=np.uint8, count=count, offset=pos)
        vals = raw.astype(np.float64)
    else:
        rest = [int(tok) for _, tok in it]
        if len(rest) != w * h:
            raise ValidationError(f"expected {w * h} pixels, found {len(rest)}")
        vals = np.array(rest, dtype=np.float64)
    if vals.min(initial=0) < 0 or vals.max(initial=0) > maxval:
        raise ValidationError("pixel values exceed declared maxval")
    return (vals / maxval).reshape(h, w)
