"""Graph file ingestion, layout CSV round-trips, and SVG rendering."""

import numpy as np

from .graph import build_graph, largest_connected_component


class FormatError(ValueError):
    pass


def _maybe_int(token):
    try:
        return int(token)
    except ValueError:
        return token


def read_edge_list(path, keep_disconnected=False):
    """Read a whitespace-separated edge list file into a Graph.

    Grammar: lines matching ``^\\s*[#%]`` are comments; every other line must
    start with two tokens (the edge endpoints, further tokens ignored).
    By default the largest connected component is extracted afterwards;
    ``keep_disconnected=True`` disables that.

    Raises
    ------
    FormatError
        On a line with fewer than two tokens, with its 1-based line number.
    """
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.lstrip()
            if stripped.startswith("#") or stripped.startswith("%"):
                continue
            tokens = line.split()
            if len(tokens) < 2:
                raise FormatError(f"{path}: line {lineno}: expected two tokens")
            pairs.append((_maybe_int(tokens[0]), _maybe_int(tokens[1])))
    g = build_graph(pairs)
    if not keep_disconnected:
        g = largest_connected_component(g)
    return g


def read_matrix_market(path, keep_disconnected=False):
    """Read a Matrix Market coordinate file (pattern/real/integer) as a graph.

    Off-diagonal nonzeros become edges; values and symmetry qualifiers are
    ignored beyond validation (the graph is symmetrized regardless).
    """
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("%%MatrixMarket"):
            raise FormatError(f"{path}: missing MatrixMarket header")
        fields = header.split()
        if len(fields) < 3 or fields[1].lower() != "matrix":
            raise FormatError(f"{path}: unsupported MatrixMarket object")
        if fields[2].lower() != "coordinate":
            raise FormatError(f"{path}: non-coordinate format")
        value_type = fields[3].lower() if len(fields) > 3 else "real"

        size_line = None
        for line in fh:
            if line.startswith("%") or not line.strip():
                continue
            size_line = line
            break
        if size_line is None:
            raise FormatError(f"{path}: missing size line")
        try:
            rows, cols, nnz = (int(t) for t in size_line.split()[:3])
        except ValueError as exc:
            raise FormatError(f"{path}: malformed size line") from exc

        pairs = []
        count = 0
        for line in fh:
            if line.startswith("%") or not line.strip():
                continue
            tokens = line.split()
            min_tokens = 2 if value_type == "pattern" else 3
            if len(tokens) < min_tokens:
                raise FormatError(f"{path}: malformed entry: {line.strip()!r}")
            i, j = int(tokens[0]), int(tokens[1])
            if not (1 <= i <= rows and 1 <= j <= cols):
                raise FormatError(
                    f"{path}: entry ({i}, {j}) outside declared {rows}x{cols} dimensions"
                )
            pairs.append((i - 1, j - 1))
            count += 1
        if count != nnz:
            raise FormatError(f"{path}: expected {nnz} entries, found {count}")

    g = build_graph(pairs)
    if not keep_disconnected:
        g = largest_connected_component(g)
    return g


def write_layout_csv(layout, path, labels=None):
    """Write ``id,x,y`` rows, one per vertex, at full float precision.

    ``labels`` supplies the original vertex names (defaults to dense ids).
    The ``%.17g`` float format round-trips float64 exactly.
    """
    n = layout.n
    if labels is None:
        labels = range(n)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id,x,y\n")
        for label, (x, y) in zip(labels, layout.coords):
            fh.write(f"{label},{x:.17g},{y:.17g}\n")


def read_layout_csv(path):
    """Read a layout CSV written by :func:`write_layout_csv`.

    Returns (labels, coords) where coords is an (n, 2) float64 array in file
    order.
    """
    labels = []
    xs = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "id,x,y":
            raise FormatError(f"{path}: expected 'id,x,y' header, got {header!r}")
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split(",")
            if len(parts) != 3:
                raise FormatError(f"{path}: line {lineno}: expected 3 fields")
            labels.append(_maybe_int(parts[0]))
            xs.append((float(parts[1]), float(parts[2])))
    return labels, np.asarray(xs, dtype=np.float64)


def render_svg(g, layout, path, vertex_radius=2.0, edge_opacity=0.35):
    """Render a drawing as SVG: one line per edge, one circle per vertex.

    Coordinates are affinely mapped into a 1000x1000 viewbox preserving aspect
    ratio, with a fixed margin. A layout with zero extent maps every vertex to
    the viewbox center.
    """
    if layout.n != g.n:
        raise ValueError("layout does not match graph")
    size, margin = 1000.0, 20.0
    coords = layout.coords
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    extent = float(max(hi[0] - lo[0], hi[1] - lo[1]))
    if extent > 0.0:
        scale = (size - 2 * margin) / extent
    else:
        scale = 0.0
    center = (lo + hi) / 2.0
    mapped = (coords - center) * scale
    mapped[:, 1] *= -1.0  # SVG y grows downward
    mapped += size / 2.0

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size:g} {size:g}">'
    ]
    parts.append(
        f'<g stroke="black" stroke-width="1" stroke-opacity="{edge_opacity:g}">'
    )
    for u, v in g.edges:
        x1, y1 = mapped[u]
        x2, y2 = mapped[v]
        parts.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}"/>')
    parts.append("</g>")
    parts.append('<g fill="#1f77b4">')
    for x, y in mapped:
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{vertex_radius:g}"/>')
    parts.append("</g>")
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
