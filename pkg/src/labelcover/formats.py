"""Versioned text formats for instances, assignments, decompositions,
tilings and coloring graphs.

All formats are line oriented, whitespace separated, and diff friendly.
Lines starting with '#' and blank lines are ignored on input and never
produced on output, so emit(parse(text)) is byte identical for canonical
files.
"""

from __future__ import annotations

from .core import Assignment, LabelCoverError, ProjectionGame, build_game
from .exact import TreeDecomposition
from .reductions import (
    ColoringGraph,
    MatrixTiling,
    build_coloring_graph,
    build_matrix_tiling,
)


class ParseError(LabelCoverError):
    """Malformed input file; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _content_lines(text: str):
    for num, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield num, line


def _ints(num: int, line: str, expected: int | None = None) -> list[int]:
    parts = line.split()
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise ParseError(num, f"expected integers, got {line!r}")
    if expected is not None and len(values) != expected:
        raise ParseError(num, f"expected {expected} fields, got {len(values)}")
    return values


def _header(lines, want: str):
    try:
        num, line = next(lines)
    except StopIteration:
        raise ParseError(1, f"empty file, expected {want!r} header")
    if line != want:
        raise ParseError(num, f"expected {want!r} header, got {line!r}")


def parse_labelcover(text: str) -> ProjectionGame:
    """Read the `labelcover v1` format.

    Line 1: header.  Line 2: nA nB kA kB m.  Then m lines, each
    ``a b t_0 .. t_{kA-1}`` giving an edge and its full projection table.
    """
    lines = _content_lines(text)
    _header(lines, "labelcover v1")
    try:
        num, line = next(lines)
    except StopIteration:
        raise ParseError(2, "missing size line")
    n_a, n_b, k_a, k_b, m = _ints(num, line, 5)
    edges = []
    tables = []
    for _ in range(m):
        try:
            num, line = next(lines)
        except StopIteration:
            raise ParseError(num + 1, f"expected {m} edge lines, file ended early")
        vals = _ints(num, line)
        if len(vals) != 2 + k_a:
            raise ParseError(
                num, f"edge line needs {2 + k_a} fields, got {len(vals)}"
            )
        edges.append((vals[0], vals[1]))
        tables.append(tuple(vals[2:]))
    try:
        num, line = next(lines)
        raise ParseError(num, "trailing content after last edge line")
    except StopIteration:
        pass
    try:
        return build_game(n_a, n_b, k_a, k_b, edges, tables)
    except LabelCoverError as exc:
        raise ParseError(0, f"invalid instance: {exc}") from exc


def emit_labelcover(game: ProjectionGame) -> str:
    out = ["labelcover v1"]
    out.append(
        f"{game.a_count} {game.b_count} {game.sigma_a} {game.sigma_b} "
        f"{game.edge_count}"
    )
    for (a, b), table in zip(game.edges, game.projections):
        out.append(" ".join(str(x) for x in (a, b, *table)))
    return "\n".join(out) + "\n"


def parse_assignment(text: str) -> Assignment:
    """`assign v1`: header, then one line of A labels, one of B labels.

    Either label line may be empty for an empty side, but both lines must
    be present.
    """
    rows = text.splitlines()
    idx = 0
    while idx < len(rows) and (not rows[idx].strip() or rows[idx].lstrip().startswith("#")):
        idx += 1
    if idx >= len(rows) or rows[idx].strip() != "assign v1":
        raise ParseError(idx + 1, "expected 'assign v1' header")
    data = []
    for off, raw in enumerate(rows[idx + 1:], start=idx + 2):
        if raw.lstrip().startswith("#"):
            continue
        data.append((off, raw))
        if len(data) == 2:
            break
    if len(data) < 2:
        raise ParseError(len(rows), "expected two label lines")
    a_line, b_line = data

    def labels(entry):
        num, raw = entry
        raw = raw.strip()
        if not raw:
            return ()
        return tuple(_ints(num, raw))

    return Assignment(labels(a_line), labels(b_line))


def emit_assignment(phi: Assignment) -> str:
    a = " ".join(str(x) for x in phi.a_labels)
    b = " ".join(str(x) for x in phi.b_labels)
    return f"assign v1\n{a}\n{b}\n"


def parse_td(text: str) -> TreeDecomposition:
    """`td v1`: header; `B T` counts; B ``bag ...`` lines; T ``link i j``."""
    lines = _content_lines(text)
    _header(lines, "td v1")
    try:
        num, line = next(lines)
    except StopIteration:
        raise ParseError(2, "missing size line")
    nbags, nlinks = _ints(num, line, 2)
    bags = []
    for _ in range(nbags):
        try:
            num, line = next(lines)
        except StopIteration:
            raise ParseError(num + 1, "expected more bag lines")
        parts = line.split()
        if parts[0] != "bag":
            raise ParseError(num, f"expected 'bag', got {parts[0]!r}")
        bags.append(frozenset(_ints(num, " ".join(parts[1:])) if parts[1:] else []))
    links = []
    for _ in range(nlinks):
        try:
            num, line = next(lines)
        except StopIteration:
            raise ParseError(num + 1, "expected more link lines")
        parts = line.split()
        if parts[0] != "link":
            raise ParseError(num, f"expected 'link', got {parts[0]!r}")
        i, j = _ints(num, " ".join(parts[1:]), 2)
        links.append((i, j))
    return TreeDecomposition(tuple(bags), tuple(links))


def emit_td(td: TreeDecomposition) -> str:
    out = ["td v1", f"{len(td.bags)} {len(td.tree)}"]
    for bag in td.bags:
        out.append(" ".join(["bag"] + [str(v) for v in sorted(bag)]))
    for i, j in td.tree:
        out.append(f"link {i} {j}")
    return "\n".join(out) + "\n"


def parse_matrix_tiling(text: str) -> MatrixTiling:
    """`matrixtiling v1`: header; `k n`; then k*k row-major cell lines
    ``i j count x1 y1 .. x_count y_count`` with 1-based coordinates."""
    lines = _content_lines(text)
    _header(lines, "matrixtiling v1")
    try:
        num, line = next(lines)
    except StopIteration:
        raise ParseError(2, "missing size line")
    k, n = _ints(num, line, 2)
    cells = []
    for want in range(k * k):
        try:
            num, line = next(lines)
        except StopIteration:
            raise ParseError(num + 1, f"expected {k * k} cell lines")
        vals = _ints(num, line)
        if len(vals) < 3:
            raise ParseError(num, "cell line needs i j count")
        i, j, count = vals[0], vals[1], vals[2]
        if (i - 1) * k + (j - 1) != want:
            raise ParseError(num, f"cell ({i}, {j}) out of row-major order")
        if len(vals) != 3 + 2 * count:
            raise ParseError(num, f"cell ({i}, {j}): expected {count} pairs")
        pairs = [(vals[3 + 2 * p], vals[4 + 2 * p]) for p in range(count)]
        cells.append(pairs)
    try:
        return build_matrix_tiling(k, n, cells)
    except LabelCoverError as exc:
        raise ParseError(0, f"invalid tiling: {exc}") from exc


def emit_matrix_tiling(t: MatrixTiling) -> str:
    out = ["matrixtiling v1", f"{t.grid_size} {t.coord_max}"]
    for idx, cell in enumerate(t.cells):
        i, j = divmod(idx, t.grid_size)
        pairs = sorted(cell)
        flat = " ".join(f"{x} {y}" for x, y in pairs)
        line = f"{i + 1} {j + 1} {len(pairs)}"
        out.append(f"{line} {flat}" if flat else line)
    return "\n".join(out) + "\n"


def parse_coloring_graph(text: str) -> ColoringGraph:
    """`colgraph v1`: header; `n m planar_flag`; then m ``u v`` lines."""
    lines = _content_lines(text)
    _header(lines, "colgraph v1")
    try:
        num, line = next(lines)
    except StopIteration:
        raise ParseError(2, "missing size line")
    n, m, planar = _ints(num, line, 3)
    edges = []
    for _ in range(m):
        try:
            num, line = next(lines)
        except StopIteration:
            raise ParseError(num + 1, f"expected {m} edge lines")
        u, v = _ints(num, line, 2)
        edges.append((u, v))
    try:
        return build_coloring_graph(n, edges, claimed_planar=bool(planar))
    except LabelCoverError as exc:
        raise ParseError(0, f"invalid graph: {exc}") from exc


def emit_coloring_graph(g: ColoringGraph) -> str:
    out = ["colgraph v1", f"{g.vertex_count} {len(g.edges)} {int(g.claimed_planar)}"]
    for u, v in g.edges:
        out.append(f"{u} {v}")
    return "\n".join(out) + "\n"
