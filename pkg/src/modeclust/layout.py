"""Two-stage classical MDS layout of modes and their clusters."""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import EmptyCluster, InvalidInput
from .numerics import sym_eigen

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LayoutResult:
    mode_xy: np.ndarray  # (k, 2), already scaled by rho0
    point_xy: np.ndarray  # (n, 2), rows in data order
    edges: tuple
    rho0: float


def classical_mds(points, target_dim=2):
    """Embed the rows of ``points`` so centered inner products are preserved.

    Coordinates are the rows of ``V_k diag(sqrt(lambda_k))`` from the top
    eigenpairs of the centered Gram matrix. Negative eigenvalues among the
    top ``target_dim`` (round-off on rank-deficient input) give a zero column.
    """
    x = np.asarray(points, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise InvalidInput("classical MDS needs at least two points")
    if not np.all(np.isfinite(x)):
        raise InvalidInput("points must be finite")
    xc = x - x.mean(axis=0)
    gram = xc @ xc.T
    gram = 0.5 * (gram + gram.T)
    eig = sym_eigen(gram)
    m = x.shape[0]
    use = min(target_dim, m)
    lam = eig.values[:use]
    neg = lam < 0
    if neg.any() and lam[neg].min() < -1e-9 * max(abs(eig.values[0]), 1.0):
        logger.warning("classical MDS: clamped negative Gram eigenvalue(s) %s", lam[neg].tolist())
    coords = np.zeros((m, target_dim))
    coords[:, :use] = eig.vectors[:, :use] * np.sqrt(np.clip(lam, 0.0, None))
    return coords


def two_stage_layout(modes, assign, cm, rho0, data):
    """Place modes by MDS (scaled by ``rho0``) and each cluster around its mode.

    Parameters
    ----------
    modes : ModeSet or (k, d) array
    assign : ClusterAssignment or (n,) labels
    cm : ConnectivityMatrix or None
        Only its edge list is used.
    rho0 : float
        Expansion of the mode layout; within-cluster spreads are not scaled.
    data : (n, d) array or DataMatrix
    """
    m = np.atleast_2d(np.asarray(getattr(modes, "modes", modes), dtype=float))
    labels = np.asarray(getattr(assign, "labels", assign))
    x = np.asarray(getattr(data, "x", data), dtype=float)
    k = m.shape[0]
    if labels.shape[0] != x.shape[0]:
        raise InvalidInput("labels and data differ in length")
    if not rho0 > 0:
        raise InvalidInput(f"rho0 must be positive, got {rho0}")
    counts = np.bincount(labels, minlength=k)
    if counts.shape[0] != k or (counts == 0).any():
        raise EmptyCluster("every mode needs at least one member point")

    if k == 1:
        mode_xy = np.zeros((1, 2))
    else:
        mode_xy = rho0 * classical_mds(m, 2)

    point_xy = np.empty((x.shape[0], 2))
    for j in range(k):
        idx = np.flatnonzero(labels == j)
        if idx.size == 1:
            # a single point plus its mode: put it on the +x axis at its true distance
            point_xy[idx[0]] = mode_xy[j] + [np.linalg.norm(x[idx[0]] - m[j]), 0.0]
            continue
        local = classical_mds(np.vstack([m[j], x[idx]]), 2)
        point_xy[idx] = local[1:] - local[0] + mode_xy[j]

    edges = tuple(getattr(cm, "edges", ()) or ())
    return LayoutResult(mode_xy=mode_xy, point_xy=point_xy, edges=edges, rho0=float(rho0))


PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#ad494a",
)


def _viewport(xy, size, margin):
    lo = xy.min(axis=0)
    span = np.maximum(xy.max(axis=0) - lo, 1e-12)
    scale = (size - 2 * margin) / span.max()
    def to_px(p):
        p = np.atleast_2d(p)
        px = margin + (p[:, 0] - lo[0]) * scale
        py = size - margin - (p[:, 1] - lo[1]) * scale
        return np.column_stack([px, py])
    return to_px


def layout_svg(result, labels, color_by=None, size=800, margin=40):
    """Render a layout as an SVG document string.

    Points are colored by cluster index, or by ``color_by`` (per-point class
    labels) when given. Edge stroke width is ``1 + 10 * omega`` px.
    """
    labels = np.asarray(getattr(labels, "labels", labels))
    allxy = np.vstack([result.mode_xy, result.point_xy])
    to_px = _viewport(allxy, size, margin)
    if color_by is None:
        colors = [PALETTE[int(c) % len(PALETTE)] for c in labels]
    else:
        order = list(dict.fromkeys(str(c) for c in color_by))
        colors = [PALETTE[order.index(str(c)) % len(PALETTE)] for c in color_by]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        '<g class="edges">',
    ]
    mode_px = to_px(result.mode_xy)
    for e in result.edges:
        (x1, y1), (x2, y2) = mode_px[e.i], mode_px[e.j]
        out.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="#444444" '
            f'stroke-width="{1 + 10 * e.weight:.3f}" stroke-opacity="0.7" data-omega="{e.weight:.6g}"/>'
        )
    out.append('</g>\n<g class="points">')
    for (px, py), c in zip(to_px(result.point_xy), colors):
        out.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="2.5" fill="{c}" fill-opacity="0.8"/>')
    out.append('</g>\n<g class="modes">')
    for j, (px, py) in enumerate(mode_px):
        out.append(
            f'<circle cx="{px:.2f}" cy="{py:.2f}" r="7" fill="{PALETTE[j % len(PALETTE)]}" '
            f'stroke="black" stroke-width="2"/>'
        )
        out.append(f'<text x="{px + 9:.2f}" y="{py - 9:.2f}" font-size="14" font-family="sans-serif">{j + 1}</text>')
    out.append("</g>\n</svg>\n")
    return "\n".join(out)


def scplot_svg(sc, width=640, height=400, margin=50):
    """Bar chart of descending cluster sizes with a dashed line at the threshold."""
    sizes = list(sc.sorted_sizes)
    top = max(max(sizes), sc.threshold) * 1.05
    plot_w = width - 2 * margin
    plot_h = height - 2 * margin
    bar_w = plot_w / max(len(sizes), 1)

    def y(v):
        return height - margin - v / top * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
    ]
    for i, s in enumerate(sizes):
        fill = "#1f77b4" if s >= sc.threshold else "#bbbbbb"
        out.append(
            f'<rect x="{margin + i * bar_w + 0.1 * bar_w:.2f}" y="{y(s):.2f}" width="{0.8 * bar_w:.2f}" '
            f'height="{height - margin - y(s):.2f}" fill="{fill}"><title>{s}</title></rect>'
        )
    ty = y(sc.threshold)
    out.append(
        f'<line x1="{margin}" y1="{ty:.2f}" x2="{width - margin}" y2="{ty:.2f}" stroke="#d62728" '
        f'stroke-dasharray="6 4" stroke-width="1.5" class="threshold"/>'
    )
    out.append(
        f'<text x="{width - margin}" y="{ty - 6:.2f}" font-size="12" text-anchor="end" '
        f'font-family="sans-serif">n0 = {sc.threshold:.2f}</text>'
    )
    out.append(
        f'<text x="{width / 2}" y="{height - 15}" font-size="13" text-anchor="middle" '
        f'font-family="sans-serif">cluster rank</text>'
    )
    out.append(
        f'<text x="15" y="{height / 2}" font-size="13" text-anchor="middle" font-family="sans-serif" '
        f'transform="rotate(-90 15 {height / 2})">cluster size</text>'
    )
    out.append("</svg>\n")
    return "\n".join(out)
