"""Shared acceptance corpora, rebuilt from scratch on every call."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from singorder.formats import load_algebra, module_from_json, read_json
from singorder.poset import (RelationMatrix, build_relation, check_poset_axioms, enumerate_family,
                             equivalence_function)
from singorder.stab import StabObject

DATA = Path(__file__).resolve().parent.parent / "data"
SHIFTS = (-2, -1, 0, 1, 2)
PARAMS = {"depth": 3, "budget": 20_000, "seed": 0, "padding_bound": 3, "k_max": 6}


@dataclass
class Corpus:
    name: str
    kit: object
    modules: list
    matrices: dict = field(default_factory=dict)

    def stab_objects(self):
        return [StabObject(M, m) for M in self.modules for m in SHIFTS]

    def matrix(self, relation: str) -> RelationMatrix:
        if relation not in self.matrices:
            objs = self.stab_objects() if relation == "qst" else self.modules
            self.matrices[relation] = build_relation(self.kit, objs, relation, PARAMS)
        return self.matrices[relation]

    def report(self, relation: str):
        mat = self.matrix(relation)
        return check_poset_axioms(mat, equivalence_function(self.kit, mat))


def f2_corpus() -> Corpus:
    kit = load_algebra(DATA / "f2_dual.json")
    return Corpus("F2[x]/(x^2)", kit, list(enumerate_family(kit, [0, 1, 2]).members))


def f3_corpus() -> Corpus:
    kit = load_algebra(DATA / "f3_cubic.json")
    return Corpus("F3[x]/(x^3)", kit, list(enumerate_family(kit, [0, 1, 2, 3]).members))


def a2_corpus() -> Corpus:
    kit = load_algebra(DATA / "a2_quiver.json")
    fam = read_json(DATA / "a2_family.json")
    return Corpus("A2 quiver over F2", kit, [module_from_json(kit, m) for m in fam["modules"]])


def all_corpora() -> list[Corpus]:
    return [f2_corpus(), f3_corpus(), a2_corpus()]
