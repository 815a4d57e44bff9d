"""Check computation: reproducible re-traversal and hand-checkable proofs.

A first (possibly human-steered) computation is hard to reproduce, so its
result is validated by a standalone pass guided only by the store it
produced: a couple claimed losing gets all of its children recomputed and
verified winning, a winning couple gets only its one provably losing
child followed, and a multi-land couple is resolved through its lands'
records.  The traversal yields a solution DAG (minimal evidence of the
root's outcome), the subset of records it actually used, a text form of
the proof, and a Graphviz export.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .canonize import parse_key
from .engine import Couple, Engine, Outcome, land_keys_of
from .errors import CheckError
from .position import lex_key, total_lives
from .store import Store

__all__ = [
    "SolutionNode",
    "SolutionTree",
    "check_compute",
    "verify_solution",
    "export_dot",
    "write_solution_text",
    "read_solution_text",
]

# Node kinds: how a node's outcome is evidenced.
TERMINAL = "terminal"  # empty position: loses exactly when the heap is 0
LANDS = "lands"        # nimbers of all lands, XOR-merged against the heap
EXPANDED = "expanded"  # children evidence: all (Loss) or one losing (Win)


@dataclass
class SolutionNode:
    couple: Couple
    outcome: Outcome
    kind: str
    children: list[Couple] = field(default_factory=list)

    @property
    def is_loss(self) -> bool:
        return self.outcome is Outcome.LOSS


@dataclass
class SolutionTree:
    root: Couple
    nodes: dict[Couple, SolutionNode]
    used_records: dict[str, int]

    def __len__(self) -> int:
        return len(self.nodes)


def check_compute(root: Couple, reference: Store) -> SolutionTree:
    """Re-derive the root's outcome using only `reference` for guidance.

    Raises CheckError when the reference lacks a record the proof needs,
    or when a stored record fails its re-check.
    """
    engine = Engine(store=Store())  # scratch store: children cache host only
    nodes: dict[Couple, SolutionNode] = {}
    used: dict[str, int] = {}

    def proven_loss(couple: Couple) -> bool:
        """True when the reference proves this couple losing outright."""
        heap = couple.nim_part
        for land_key in land_keys_of(couple.key):
            stored = reference.get(land_key)
            if stored is None:
                return False
            heap ^= stored
        return heap == 0

    def visit(couple: Couple) -> SolutionNode:
        node = nodes.get(couple)
        if node is not None:
            return node
        lands = land_keys_of(couple.key)

        if not lands:
            outcome = Outcome.LOSS if couple.nim_part == 0 else Outcome.WIN
            if outcome is Outcome.LOSS:
                node = SolutionNode(couple, outcome, TERMINAL)
            else:
                node = SolutionNode(couple, outcome, EXPANDED, [Couple("!", 0)])
                nodes[couple] = node
                visit(Couple("!", 0))
                return node
            nodes[couple] = node
            return node

        if len(lands) > 1:
            nimbers = [reference.get(land_key) for land_key in lands]
            if all(n is not None for n in nimbers):
                # Fully resolved: the outcome follows from the lands' nimbers.
                heap = couple.nim_part
                land_couples: list[Couple] = []
                for land_key, nimber in zip(lands, nimbers):
                    used[land_key] = nimber  # type: ignore[assignment]
                    heap ^= nimber  # type: ignore[operator]
                    land_couples.append(Couple(land_key, nimber))  # type: ignore[arg-type]
                outcome = Outcome.LOSS if heap == 0 else Outcome.WIN
                node = SolutionNode(couple, outcome, LANDS, land_couples)
                nodes[couple] = node
                for lc in land_couples:
                    sub = visit(lc)
                    if sub.outcome is not Outcome.LOSS:
                        raise CheckError(f"land record {lc} failed its re-check")
                return node
            # A losing couple would have all of its lands stored, so this
            # one is winning: prove it through a losing child below.
            return scan_winning(couple)

        (land_key,) = lands
        stored = reference.get(land_key)
        if stored is not None and stored == couple.nim_part:
            # Claimed losing: recompute every child and verify all winning.
            used[land_key] = stored
            kids = _couple_children(engine, couple)
            node = SolutionNode(couple, Outcome.LOSS, EXPANDED, list(kids))
            nodes[couple] = node
            for kid in kids:
                sub = visit(kid)
                if sub.outcome is not Outcome.LOSS:
                    continue
                raise CheckError(
                    f"stored record {land_key}={stored} fails re-check: "
                    f"child {kid} is losing"
                )
            return node

        # Winning (or unknown): find the one child the reference proves losing.
        return scan_winning(couple)

    def scan_winning(couple: Couple) -> SolutionNode:
        for kid in _couple_children(engine, couple):
            if proven_loss(kid):
                for land in land_keys_of(kid.key):
                    used[land] = reference.get(land)  # type: ignore[assignment]
                node = SolutionNode(couple, Outcome.WIN, EXPANDED, [kid])
                nodes[couple] = node
                sub = visit(kid)
                if sub.outcome is not Outcome.LOSS:
                    raise CheckError(f"chosen losing child {kid} failed its re-check")
                return node
        raise CheckError(f"reference store proves no losing child of {couple}")

    def _couple_children(engine: Engine, couple: Couple) -> list[Couple]:
        kids = [Couple(e.key, couple.nim_part) for e in engine.children_entries(couple.key)]
        kids.extend(Couple(couple.key, m) for m in range(couple.nim_part))
        kids.sort(key=engine._order_key)
        return kids

    root_node = visit(root)
    tree = SolutionTree(root, nodes, used)
    # The tree must carry a definite outcome for the root.
    assert root_node.outcome in (Outcome.WIN, Outcome.LOSS)
    return tree


def verify_solution(tree: SolutionTree) -> list[str]:
    """Engine-independent validation of a solution tree.

    Re-derives every expanded node's child set from the move generator
    alone and checks the evidence shape: losing nodes list all children
    (each winning), winning nodes name one losing child, land nodes
    decompose correctly, terminals obey the heap rule.  Returns a list of
    problems; empty means the proof stands.
    """
    from .moves import child_keys as fresh_child_keys

    problems: list[str] = []
    seen_on_path: set[Couple] = set()
    checked: set[Couple] = set()

    def expected_children(couple: Couple) -> set[Couple]:
        pos = parse_key(couple.key)
        kids = {Couple(k, couple.nim_part) for k in fresh_child_keys(pos)}
        kids.update(Couple(couple.key, m) for m in range(couple.nim_part))
        return kids

    def walk(couple: Couple) -> None:
        if couple in checked:
            return
        if couple in seen_on_path:
            problems.append(f"cycle through {couple}")
            return
        node = tree.nodes.get(couple)
        if node is None:
            problems.append(f"missing node for {couple}")
            return
        seen_on_path.add(couple)
        try:
            if node.kind == TERMINAL:
                if couple.key != "!" or (couple.nim_part == 0) != node.is_loss:
                    problems.append(f"bad terminal {couple}")
            elif node.kind == LANDS:
                lands = land_keys_of(couple.key)
                got = [c.key for c in node.children]
                if sorted(got, key=lex_key) != sorted(lands, key=lex_key):
                    problems.append(f"land decomposition of {couple} is wrong")
                heap = couple.nim_part
                for child in node.children:
                    child_node = tree.nodes.get(child)
                    if child_node is None or not child_node.is_loss:
                        problems.append(f"land evidence {child} of {couple} is not losing")
                        continue
                    heap ^= child.nim_part
                if (heap == 0) != node.is_loss:
                    problems.append(f"XOR of land nimbers contradicts outcome of {couple}")
            elif node.kind == EXPANDED:
                expected = expected_children(couple)
                if node.is_loss:
                    if set(node.children) != expected:
                        problems.append(f"losing node {couple} does not list all children")
                    for child in node.children:
                        child_node = tree.nodes.get(child)
                        if child_node is None or child_node.is_loss:
                            problems.append(
                                f"losing node {couple} needs winning child {child}"
                            )
                else:
                    if len(node.children) != 1:
                        problems.append(f"winning node {couple} must cite one child")
                    else:
                        child = node.children[0]
                        if child not in expected:
                            problems.append(f"{child} is not a child of {couple}")
                        child_node = tree.nodes.get(child)
                        if child_node is None or not child_node.is_loss:
                            problems.append(f"cited child {child} of {couple} is not losing")
            else:
                problems.append(f"unknown node kind {node.kind!r} at {couple}")
            for child in node.children:
                walk(child)
        finally:
            seen_on_path.discard(couple)
        checked.add(couple)

    walk(tree.root)
    return problems


# --- text serialization -----------------------------------------------------


def write_solution_text(tree: SolutionTree, path: str) -> None:
    """Line-per-node text proof, sorted for diffing.

    Format: `root <key> <n>` then `node <key> <n> <outcome> <kind> [<key> <n> ...]`.
    """
    lines = []
    for couple in sorted(tree.nodes, key=lambda c: (lex_key(c.key), c.nim_part)):
        node = tree.nodes[couple]
        parts = ["node", couple.key, str(couple.nim_part), node.outcome.value, node.kind]
        for child in node.children:
            parts.append(child.key)
            parts.append(str(child.nim_part))
        lines.append(" ".join(parts))
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"root {tree.root.key} {tree.root.nim_part}\n")
        fh.write("\n".join(lines) + "\n")


def read_solution_text(path: str) -> SolutionTree:
    root: Couple | None = None
    nodes: dict[Couple, SolutionNode] = {}
    with open(path, encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            words = line.split()
            if not words:
                continue
            if words[0] == "root":
                if len(words) != 3:
                    raise CheckError(f"{path}:{lineno}: bad root line")
                root = Couple(words[1], int(words[2]))
            elif words[0] == "node":
                if len(words) < 5 or (len(words) - 5) % 2:
                    raise CheckError(f"{path}:{lineno}: bad node line")
                couple = Couple(words[1], int(words[2]))
                outcome = Outcome(words[3])
                kind = words[4]
                children = [
                    Couple(words[i], int(words[i + 1]))
                    for i in range(5, len(words), 2)
                ]
                nodes[couple] = SolutionNode(couple, outcome, kind, children)
            else:
                raise CheckError(f"{path}:{lineno}: unknown line kind {words[0]!r}")
    if root is None:
        raise CheckError(f"{path}: missing root line")
    return SolutionTree(root, nodes, {})


# --- Graphviz ---------------------------------------------------------------


def export_dot(
    tree: SolutionTree,
    min_lives: int = 0,
    labels: str = "full",
) -> tuple[str, str | None]:
    """DOT text of the solution graph (plus a legend in reference mode).

    Only couples whose position has at least `min_lives` lives are drawn.
    Losing couples use ellipses, multi-land couples rectangles, winning
    single-land couples plain text.  With `labels="reference-numbers"`
    nodes carry numbers and the second return value lists
    `<number> <position> <nimber info>` lines, one per drawn node.
    """
    if labels not in ("full", "reference-numbers"):
        raise ValueError(f"unknown label mode {labels!r}")
    couples = sorted(tree.nodes, key=lambda c: (lex_key(c.key), c.nim_part))
    drawn = [
        c for c in couples
        if total_lives(parse_key(c.key)) >= min_lives
    ]
    index = {c: i for i, c in enumerate(drawn)}
    lines = ["digraph solution {"]
    legend: list[str] = []
    for c in drawn:
        node = tree.nodes[c]
        if node.is_loss:
            shape = "ellipse"
        elif node.kind == LANDS:
            shape = "box"
        else:
            shape = "plaintext"
        if labels == "full":
            label = f"{c.key}+{c.nim_part}"
        else:
            label = str(index[c])
            info = f"{c.nim_part}" if node.is_loss else f"!= {c.nim_part}"
            legend.append(f"{index[c]} {c.key} {info}")
        lines.append(f'  n{index[c]} [shape={shape}, label="{label}"];')
    for c in drawn:
        for child in tree.nodes[c].children:
            if child in index:
                lines.append(f"  n{index[c]} -> n{index[child]};")
    lines.append("}")
    dot = "\n".join(lines) + "\n"
    return dot, ("\n".join(legend) + "\n" if labels == "reference-numbers" else None)
