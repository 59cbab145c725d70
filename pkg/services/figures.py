"""
SVG drawings of the freehedra F_0..F_3.

Vertices are placed by a spectral embedding of the edge graph; F_3 is
projected to the plane. Facets are labelled by their face operators.
"""
import logging
import os

import numpy as np

from exceptions import PreconditionError
from services.freehedra import boundary, codim_one_faces, enumerate_faces

logger = logging.getLogger(__name__)

MAX_FIGURE = 3
SIZE = 480
MARGIN = 60
PROJECTION = np.array([[1.0, 0.0, -0.45], [0.0, 1.0, -0.3]])


def _vertices_of(cell):
    if cell.dimension == 0:
        return {cell}
    found = set()
    for target in boundary(cell):
        found |= _vertices_of(target)
    return found


def skeleton(n):
    """Vertices, edges (as vertex pairs) and labelled facets of F_n"""
    if not 0 <= n <= MAX_FIGURE:
        raise PreconditionError(f"Figures are drawn for 0 <= n <= {MAX_FIGURE}")
    faces = enumerate_faces(n, 0)
    vertices = faces.get(0, [])
    edges = []
    for cell in faces.get(1, []):
        ends = sorted(_vertices_of(cell))
        edges.append((ends[0], ends[1], cell))
    facets = [(f"{op}_{i}", cell, sorted(_vertices_of(cell))) for op, i, cell in codim_one_faces(n)] if n > 0 else []
    return vertices, edges, facets


def layout(vertices, edges, dimension):
    """Planar positions in [0, 1]^2 from Laplacian eigenvectors"""
    count = len(vertices)
    if count == 1:
        return {vertices[0]: (0.5, 0.5)}
    index = {v: i for i, v in enumerate(vertices)}
    laplacian = np.zeros((count, count))
    for a, b, _ in edges:
        i, j = index[a], index[b]
        laplacian[i, j] -= 1
        laplacian[j, i] -= 1
        laplacian[i, i] += 1
        laplacian[j, j] += 1
    _, vectors = np.linalg.eigh(laplacian)
    columns = min(dimension, count - 1)
    embedding = np.zeros((count, 3))
    embedding[:, :columns] = vectors[:, 1:columns + 1]
    for c in range(columns):
        # fix the sign of each eigenvector
        pivot = np.argmax(np.abs(embedding[:, c]))
        if embedding[pivot, c] < 0:
            embedding[:, c] *= -1
    planar = embedding @ PROJECTION.T if dimension > 2 else embedding[:, :2]
    low = planar.min(axis=0)
    span = planar.max(axis=0) - low
    span[span == 0] = 1.0
    scaled = (planar - low) / span.max()
    scaled += (1.0 - scaled.max(axis=0)) / 2
    return {v: (float(scaled[i, 0]), float(scaled[i, 1])) for v, i in index.items()}


def _point(position):
    x, y = position
    return MARGIN + x * (SIZE - 2 * MARGIN), MARGIN + (1 - y) * (SIZE - 2 * MARGIN)


def svg_wrap(n, vertices, edges, body):
    return f"""<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" role="img" aria-label="F_{n}" data-vertices="{vertices}" data-edges="{edges}">
  <rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>
  {body}
</svg>"""


def svg_edge(start, end):
    (x1, y1), (x2, y2) = _point(start), _point(end)
    return f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" stroke="#2f4a63" stroke-width="2"/>'


def svg_vertex(position, text):
    x, y = _point(position)
    return (f'<circle cx="{x:.1f}" cy="{y:.1f}" r="4" fill="#0b6eff"/>\n'
            f'<text x="{x + 6:.1f}" y="{y - 6:.1f}" font-size="10" fill="#0b1a2b" font-family="monospace">{text}</text>')


def svg_facet_label(position, name):
    x, y = _point(position)
    op, index = name.split('_')
    return (f'<text x="{x:.1f}" y="{y:.1f}" text-anchor="middle" font-size="13" fill="#16b879" font-family="serif">'
            f'd<tspan baseline-shift="super" font-size="9">{op[1:]}</tspan>'
            f'<tspan baseline-shift="sub" font-size="9">{index}</tspan></text>')


def render_svg(n):
    vertices, edges, facets = skeleton(n)
    positions = layout(vertices, edges, n)
    parts = [svg_edge(positions[a], positions[b]) for a, b, _ in edges]
    for name, _, corners in facets:
        centre = tuple(sum(positions[v][axis] for v in corners) / len(corners) for axis in (0, 1))
        parts.append(svg_facet_label(centre, name))
    parts.extend(svg_vertex(positions[v], str(v)) for v in vertices)
    return svg_wrap(n, len(vertices), len(edges), '\n  '.join(parts))


def export_figures(n, output_dir):
    """Write freehedron_<k>.svg for k = 0..n; return the paths"""
    if not 0 <= n <= MAX_FIGURE:
        raise PreconditionError(f"Figures are drawn for 0 <= n <= {MAX_FIGURE}")
    os.makedirs(output_dir, exist_ok=True)
    paths = []
    for k in range(n + 1):
        path = os.path.join(output_dir, f"freehedron_{k}.svg")
        with open(path, 'w') as handle:
            handle.write(render_svg(k))
        paths.append(path)
    logger.info(f"Wrote {len(paths)} figures to {output_dir}")
    return paths


class FigureService:

    @staticmethod
    def export(n, output_dir):
        """Write the freehedron drawings up to F_n"""
        try:
            return export_figures(n, output_dir), None
        except Exception as e:
            logger.error(f"Figure export error: {str(e)}")
            return None, str(e)
