"""Weighted stochastic L-systems over a voxel-turtle alphabet.

A genotype is a flat string of atoms derived from a rule set. Placement
atoms drop a block and advance the turtle, rotation atoms re-orient it,
and square brackets push/pop the pose. Symbols without a production (and
without a turtle meaning) are structural and are skipped by the
interpreter, so partially expanded strings are still valid genotypes.

Rule sets carry a per-symbol ``mutable`` flag. Atoms emitted by an
immutable production are locked: the genetic operators in this module
never edit inside a locked span.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources

import numpy as np

# Placement atoms (block placed at the turtle position, then one step forward).
ATOM_BLOCKS = {
    "B": "body",
    "C": "corridor",
    "K": "cockpit",
    "R": "reactor",
    "T": "thruster",
    "N": "container",
}
# Rotation atoms: quarter turns about the turtle's up / left / heading axes.
ATOM_ROTATIONS = ("+", "-", "^", "&", "<", ">")
ATOM_PUSH, ATOM_POP = "[", "]"

DEFAULT_MAX_LENGTH = 128


class GenotypeError(ValueError):
    """Raised for genotypes that violate the string invariants."""


def brackets_balanced(atoms: str) -> bool:
    depth = 0
    for a in atoms:
        if a == ATOM_PUSH:
            depth += 1
        elif a == ATOM_POP:
            depth -= 1
            if depth < 0:
                return False
    return depth == 0


def bracketed_spans(atoms: str) -> list[tuple[int, int]]:
    """All [i, j] index pairs of matching bracket pairs, j inclusive."""
    spans = []
    stack = []
    for i, a in enumerate(atoms):
        if a == ATOM_PUSH:
            stack.append(i)
        elif a == ATOM_POP:
            if not stack:
                raise GenotypeError(f"unbalanced brackets in {atoms!r}")
            spans.append((stack.pop(), i))
    if stack:
        raise GenotypeError(f"unbalanced brackets in {atoms!r}")
    return spans


def truncate_balanced(atoms: str, max_length: int) -> str:
    """Longest prefix of length <= max_length with balanced brackets."""
    if len(atoms) <= max_length and brackets_balanced(atoms):
        return atoms
    best = 0
    depth = 0
    for i, a in enumerate(atoms[:max_length]):
        if a == ATOM_PUSH:
            depth += 1
        elif a == ATOM_POP:
            depth -= 1
        if depth == 0:
            best = i + 1
    return atoms[:best]


@dataclass(frozen=True)
class Genotype:
    """Flat atom string plus the lock mask from immutable productions."""

    atoms: str
    max_length: int = DEFAULT_MAX_LENGTH
    locked: frozenset[int] = frozenset()

    def __post_init__(self):
        if len(self.atoms) > self.max_length:
            raise GenotypeError(
                f"genotype length {len(self.atoms)} exceeds {self.max_length}"
            )
        if not brackets_balanced(self.atoms):
            raise GenotypeError(f"unbalanced brackets in {self.atoms!r}")

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def complexity(self) -> int:
        return len(self.atoms)

    def to_dict(self) -> dict:
        return {
            "atoms": self.atoms,
            "max_length": self.max_length,
            "locked": sorted(self.locked),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Genotype":
        return cls(
            atoms=d["atoms"],
            max_length=int(d.get("max_length", DEFAULT_MAX_LENGTH)),
            locked=frozenset(d.get("locked", ())),
        )


@dataclass
class Production:
    """Weighted expansion alternatives for one symbol."""

    options: list[tuple[str, float]]
    mutable: bool = True

    def __post_init__(self):
        total = sum(w for _, w in self.options)
        if total <= 0:
            raise GenotypeError("production weights must sum > 0")
        for out, w in self.options:
            if w < 0:
                raise GenotypeError("production weights must be >= 0")
            if not brackets_balanced(out):
                raise GenotypeError(f"unbalanced expansion {out!r}")

    def sample(self, rng: np.random.Generator) -> str:
        weights = np.array([w for _, w in self.options], dtype=float)
        idx = rng.choice(len(self.options), p=weights / weights.sum())
        return self.options[idx][0]


@dataclass
class RuleSet:
    axiom: str
    productions: dict[str, Production]
    iterations: int = 3
    max_length: int = DEFAULT_MAX_LENGTH

    def __post_init__(self):
        if self.iterations < 1:
            raise GenotypeError("iterations must be >= 1")
        if not brackets_balanced(self.axiom):
            raise GenotypeError("axiom brackets unbalanced")

    def set_mutable(self, symbol: str, mutable: bool) -> None:
        self.productions[symbol].mutable = mutable

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "axiom": self.axiom,
            "iterations": self.iterations,
            "max_length": self.max_length,
            "rules": {
                sym: {
                    "mutable": prod.mutable,
                    "options": [{"out": out, "weight": w} for out, w in prod.options],
                }
                for sym, prod in self.productions.items()
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RuleSet":
        prods = {
            sym: Production(
                options=[(o["out"], float(o["weight"])) for o in spec["options"]],
                mutable=bool(spec.get("mutable", True)),
            )
            for sym, spec in d["rules"].items()
        }
        return cls(
            axiom=d["axiom"],
            productions=prods,
            iterations=int(d.get("iterations", 3)),
            max_length=int(d.get("max_length", DEFAULT_MAX_LENGTH)),
        )


def load_rules(path=None) -> RuleSet:
    """Load a rule set from a JSON file, or the bundled defaults."""
    if path is None:
        text = resources.files("voxelites.data").joinpath("default_rules.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return RuleSet.from_dict(json.loads(text))


def expand(rules: RuleSet, rng: np.random.Generator) -> Genotype:
    """Rewrite the axiom ``rules.iterations`` times.

    Productions are chosen by normalised weight. Atoms produced by (or
    inside) an immutable production come out locked. If the result
    exceeds max_length it is cut back to the longest balanced prefix.
    """
    atoms = list(rules.axiom)
    locked = [False] * len(atoms)
    for _ in range(rules.iterations):
        out_atoms: list[str] = []
        out_locked: list[bool] = []
        for a, lk in zip(atoms, locked):
            prod = rules.productions.get(a)
            if prod is None:
                out_atoms.append(a)
                out_locked.append(lk)
                continue
            expansion = prod.sample(rng)
            child_lock = lk or not prod.mutable
            out_atoms.extend(expansion)
            out_locked.extend([child_lock] * len(expansion))
        atoms, locked = out_atoms, out_locked

    text = truncate_balanced("".join(atoms), rules.max_length)
    mask = frozenset(i for i in range(len(text)) if locked[i])
    return Genotype(atoms=text, max_length=rules.max_length, locked=mask)


@dataclass(frozen=True)
class MutationConfig:
    rate: float = 0.8
    # relative weights of {substitute, reexpand, delete_subtree, duplicate_subtree}
    op_weights: tuple[float, float, float, float] = (0.4, 0.2, 0.2, 0.2)


def _shift_locked(locked: frozenset[int], at: int, delta: int) -> frozenset[int]:
    """Shift lock indices >= at by delta (delta may be negative)."""
    return frozenset(i + delta if i >= at else i for i in locked)


def _span_unlocked(locked: frozenset[int], lo: int, hi: int) -> bool:
    return not any(lo <= i <= hi for i in locked)


def mutate(
    g: Genotype,
    rules: RuleSet,
    rng: np.random.Generator,
    config: MutationConfig = MutationConfig(),
) -> Genotype:
    """Apply at most one structural edit, never touching locked atoms."""
    if rng.random() >= config.rate:
        return g

    weights = np.array(config.op_weights, dtype=float)
    op = rng.choice(4, p=weights / weights.sum())
    atoms = g.atoms
    locked = g.locked

    if op == 0:  # substitute a placement atom
        candidates = [
            i for i, a in enumerate(atoms) if a in ATOM_BLOCKS and i not in locked
        ]
        if not candidates:
            return g
        i = candidates[rng.choice(len(candidates))]
        choices = [b for b in ATOM_BLOCKS if b != atoms[i]]
        new_atom = choices[rng.choice(len(choices))]
        return replace(g, atoms=atoms[:i] + new_atom + atoms[i + 1 :])

    if op == 1:  # re-expand one symbol occurrence via its production
        candidates = [
            i
            for i, a in enumerate(atoms)
            if a in rules.productions and i not in locked
        ]
        if not candidates:
            return g
        i = candidates[rng.choice(len(candidates))]
        prod = rules.productions[atoms[i]]
        expansion = prod.sample(rng)
        new_atoms = atoms[:i] + expansion + atoms[i + 1 :]
        if len(new_atoms) > g.max_length:
            return g
        new_locked = _shift_locked(locked, i + 1, len(expansion) - 1)
        if not prod.mutable:
            new_locked |= frozenset(range(i, i + len(expansion)))
        return replace(g, atoms=new_atoms, locked=new_locked)

    spans = [
        (lo, hi)
        for lo, hi in bracketed_spans(atoms)
        if _span_unlocked(locked, lo, hi)
    ]
    if not spans:
        return g
    lo, hi = spans[rng.choice(len(spans))]

    if op == 2:  # delete the bracketed subtree
        new_atoms = atoms[:lo] + atoms[hi + 1 :]
        new_locked = _shift_locked(locked, hi + 1, -(hi + 1 - lo))
        return replace(g, atoms=new_atoms, locked=new_locked)

    # duplicate the bracketed subtree in place
    chunk = atoms[lo : hi + 1]
    new_atoms = atoms[: hi + 1] + chunk + atoms[hi + 1 :]
    if len(new_atoms) > g.max_length:
        return g
    new_locked = _shift_locked(locked, hi + 1, len(chunk))
    return replace(g, atoms=new_atoms, locked=new_locked)


def crossover(
    a: Genotype, b: Genotype, rng: np.random.Generator
) -> tuple[Genotype, Genotype]:
    """Swap one bracketed subtree between the parents.

    Spans containing locked atoms are never exchanged, so immutable
    modules survive recombination. Parents without an exchangeable
    subtree are returned unchanged, as are children that would exceed
    max_length.
    """
    spans_a = [s for s in bracketed_spans(a.atoms) if _span_unlocked(a.locked, *s)]
    spans_b = [s for s in bracketed_spans(b.atoms) if _span_unlocked(b.locked, *s)]
    if not spans_a or not spans_b:
        return a, b

    lo_a, hi_a = spans_a[rng.choice(len(spans_a))]
    lo_b, hi_b = spans_b[rng.choice(len(spans_b))]
    chunk_a = a.atoms[lo_a : hi_a + 1]
    chunk_b = b.atoms[lo_b : hi_b + 1]

    def graft(parent: Genotype, lo: int, hi: int, donor: str) -> Genotype:
        new_atoms = parent.atoms[:lo] + donor + parent.atoms[hi + 1 :]
        if len(new_atoms) > parent.max_length:
            return parent
        # swapped span holds no locked atoms, so only indices past it shift
        new_locked = _shift_locked(parent.locked, hi + 1, len(donor) - (hi + 1 - lo))
        return replace(parent, atoms=new_atoms, locked=new_locked)

    return graft(a, lo_a, hi_a, chunk_b), graft(b, lo_b, hi_b, chunk_a)
