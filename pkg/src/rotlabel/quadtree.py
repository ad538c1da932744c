"""Unit-square normalization, diagonal shifts, and compressed quadtrees.

Sweep disks are scaled into [0, 1]^2 and stored in a quadtree over the fixed
root cell [0, 2)^2, so that every diagonal shift in [0, 1) keeps all content
inside the root.  Shifts move the disks rather than the grid, which keeps
cell coordinates dyadic and exact.  Each disk is assigned to the smallest
cell that fully contains it; chains of single-occupancy cells are compressed
away, leaving at most 2n + 1 nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import Point, SweepDisk

ROOT_SIDE = 2.0


@dataclass(frozen=True)
class UnitTransform:
    """Translate-then-scale similarity mapping input disks into [0, 1]^2.

    Uniform scaling preserves every conflict predicate, so solving the
    normalized instance solves the original one.
    """

    scale: float
    translate: tuple[float, float]

    def apply_point(self, p: Point) -> Point:
        return Point((p.x + self.translate[0]) * self.scale, (p.y + self.translate[1]) * self.scale)

    def apply_disk(self, disk: SweepDisk) -> SweepDisk:
        return SweepDisk(self.apply_point(disk.centre), disk.radius * self.scale)


def normalize_to_unit_square(disks: list[SweepDisk]) -> tuple[list[SweepDisk], UnitTransform]:
    """Scale and translate all disks to fit in the unit square at the origin.

    Canonical transform: divide by the larger extent of the joint bounding
    box, then move its lower-left corner to the origin.
    """
    if not disks:
        raise ValueError("at least one disk is required")
    xmin = min(d.centre.x - d.radius for d in disks)
    xmax = max(d.centre.x + d.radius for d in disks)
    ymin = min(d.centre.y - d.radius for d in disks)
    ymax = max(d.centre.y + d.radius for d in disks)
    extent = max(xmax - xmin, ymax - ymin)
    transform = UnitTransform(scale=1.0 / extent, translate=(-xmin, -ymin))
    return [transform.apply_disk(d) for d in disks], transform


def shift_family(k: int) -> list[float]:
    """The k diagonal shift offsets t / k for t = 0 .. k-1."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    return [t / k for t in range(k)]


@dataclass(frozen=True)
class QuadtreeCell:
    """Half-open square cell [origin, origin + side)^2 of the dyadic grid
    over the root [0, ROOT_SIDE)^2."""

    depth: int
    ix: int
    iy: int

    @property
    def side(self) -> float:
        return ROOT_SIDE / (1 << self.depth)

    @property
    def origin(self) -> tuple[float, float]:
        s = self.side
        return (self.ix * s, self.iy * s)

    def contains_disk(self, cx: float, cy: float, r: float) -> bool:
        # Closed containment: a disk tangent to the cell wall from inside fits.
        ox, oy = self.origin
        s = self.side
        return ox <= cx - r and cx + r <= ox + s and oy <= cy - r and cy + r <= oy + s

    def intersects_disk(self, cx: float, cy: float, r: float) -> bool:
        ox, oy = self.origin
        s = self.side
        dx = max(ox - cx, 0.0, cx - (ox + s))
        dy = max(oy - cy, 0.0, cy - (oy + s))
        return dx * dx + dy * dy <= r * r

    def path(self) -> tuple[int, ...]:
        # Quadrant digits root-down; digit = bit_x + 2 * bit_y per level.
        digits = []
        for level in range(self.depth):
            shift = self.depth - 1 - level
            digits.append(((self.ix >> shift) & 1) + 2 * ((self.iy >> shift) & 1))
        return tuple(digits)


def _cell_from_path(path: tuple[int, ...]) -> QuadtreeCell:
    ix = iy = 0
    for digit in path:
        ix = (ix << 1) | (digit & 1)
        iy = (iy << 1) | (digit >> 1)
    return QuadtreeCell(len(path), ix, iy)


def depth_cap_for(disks: list[SweepDisk]) -> int:
    """Deepest allowed subdivision: cells never get smaller than a quarter of
    the smallest radius, which bounds recursion for clustered tiny disks
    without affecting alignment classification."""
    rmin = min(d.radius for d in disks)
    return max(0, math.floor(math.log2(4.0 * ROOT_SIDE / rmin)))


def minimal_enclosing_cell(cx: float, cy: float, r: float, depth_cap: int) -> QuadtreeCell:
    """Smallest grid cell (depth capped) that fully contains the disk."""
    if not (0.0 <= cx - r and cx + r <= ROOT_SIDE and 0.0 <= cy - r and cy + r <= ROOT_SIDE):
        raise ValueError(
            f"disk at ({cx}, {cy}) radius {r} lies outside the root cell; "
            "normalize and shift before building the tree"
        )
    cell = QuadtreeCell(0, 0, 0)
    while cell.depth < depth_cap:
        side = cell.side / 2.0
        child = QuadtreeCell(cell.depth + 1, math.floor(cx / side), math.floor(cy / side))
        if not child.contains_disk(cx, cy, r):
            break
        cell = child
    return cell


@dataclass
class QuadtreeNode:
    cell: QuadtreeCell
    node_id: int
    disk_ids: list[int] = field(default_factory=list)
    children: list["QuadtreeNode"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class CompressedQuadtree:
    """Compressed quadtree over shifted sweep disks for one shift value.

    ``disks`` are the inputs as given (pre-shift); ``shifted`` holds the
    translated centres actually used for cell geometry.  ``cell_of`` maps a
    disk id to its minimal enclosing cell.
    """

    disks: list[SweepDisk]
    shifted: list[tuple[float, float, float]]
    shift: float
    k: int
    depth_cap: int
    root: QuadtreeNode
    nodes: list[QuadtreeNode]
    cell_of: dict[int, QuadtreeCell]

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def index_of(self, disk: SweepDisk) -> int:
        for i, d in enumerate(self.disks):
            if d == disk:
                return i
        raise KeyError(f"disk {disk} is not stored in this tree")

    def aligned(self, disk_id: int) -> bool:
        return self.cell_of[disk_id].side <= self.k * self.disks[disk_id].radius

    def dump(self) -> str:
        """Indented text rendering (cell depth, index, disk ids)."""
        lines: list[str] = []

        def walk(node: QuadtreeNode, indent: int) -> None:
            cell = node.cell
            lines.append(
                "{}cell depth={} ix={} iy={} side={:g} disks={}".format(
                    "  " * indent, cell.depth, cell.ix, cell.iy, cell.side, node.disk_ids
                )
            )
            for child in node.children:
                walk(child, indent + 1)

        walk(self.root, 0)
        return "\n".join(lines) + "\n"


def build_compressed_quadtree(
    disks: list[SweepDisk],
    shift: float,
    k: int,
    depth_cap: int | None = None,
) -> CompressedQuadtree:
    """Store each disk at its smallest enclosing cell and compress chains of
    cells with a single non-empty child, so the tree has at most 2n + 1
    nodes.

    The tree is the union of the occupied cells, their pairwise lowest
    common ancestors, and the root; computing ancestors of neighbours in
    quadrant-path order yields exactly that closure.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if depth_cap is None:
        depth_cap = depth_cap_for(disks) if disks else 0
    shifted = [(d.centre.x + shift, d.centre.y + shift, d.radius) for d in disks]
    cell_of = {
        i: minimal_enclosing_cell(cx, cy, r, depth_cap) for i, (cx, cy, r) in enumerate(shifted)
    }

    occupied: dict[tuple[int, ...], list[int]] = {}
    for i, cell in cell_of.items():
        occupied.setdefault(cell.path(), []).append(i)

    paths = sorted(occupied)
    keys = {(), *paths}
    for a, b in zip(paths, paths[1:]):
        common = 0
        for x, y in zip(a, b):
            if x != y:
                break
            common += 1
        keys.add(a[:common])

    nodes_by_path: dict[tuple[int, ...], QuadtreeNode] = {}
    nodes: list[QuadtreeNode] = []
    for node_id, path in enumerate(sorted(keys)):
        node = QuadtreeNode(cell=_cell_from_path(path), node_id=node_id)
        node.disk_ids = sorted(occupied.get(path, []))
        nodes_by_path[path] = node
        nodes.append(node)
    for path, node in nodes_by_path.items():
        if not path:
            continue
        parent = path[:-1]
        while parent not in nodes_by_path:
            parent = parent[:-1]
        nodes_by_path[parent].children.append(node)
    for node in nodes:
        node.children.sort(key=lambda c: c.cell.path())

    return CompressedQuadtree(
        disks=list(disks),
        shifted=shifted,
        shift=shift,
        k=k,
        depth_cap=depth_cap,
        root=nodes_by_path[()],
        nodes=nodes,
        cell_of=cell_of,
    )


def is_k_aligned(disk: SweepDisk, tree: CompressedQuadtree) -> bool:
    """True when the disk's smallest enclosing cell has side at most k times
    its radius.  The disk must be stored in the tree."""
    return tree.aligned(tree.index_of(disk))
