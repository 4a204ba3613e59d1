"""JSON wire form for chaos objects.

A poly is ``{"dim": n, "cap": d, "weights": [...] | null, "terms": [{"alpha": [..], "c": x}]}``
with ``alpha`` a dense list of length ``dim``. Fields carry ``"components"``
(one term list per component) and matrices carry ``"entries"`` (row-major,
one term list per entry). Coefficients are written as shortest round-trip
decimals; hex-float strings (``float.hex``) are accepted on input.
"""

import json
from pathlib import Path
from typing import List, Union

from pydantic import BaseModel, ConfigDict, field_validator

from .field import ChaosField, ChaosMatrix
from .poly import ChaosPoly
from .space import ChaosError, GaussianSpace


class TermDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    alpha: List[int]
    c: float

    @field_validator("c", mode="before")
    @classmethod
    def _accept_hex(cls, value):
        if isinstance(value, str) and "0x" in value.lower():
            return float.fromhex(value)
        return value


class _SpaceDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int
    cap: int
    weights: List[float] | None = None

    def to_space(self) -> GaussianSpace:
        weights = tuple(self.weights) if self.weights is not None else None
        return GaussianSpace(self.dim, self.cap, weights)


class PolyDoc(_SpaceDoc):
    terms: List[TermDoc]


class FieldDoc(_SpaceDoc):
    components: List[List[TermDoc]]


class MatrixDoc(_SpaceDoc):
    entries: List[List[List[TermDoc]]]


ChaosDoc = Union[PolyDoc, FieldDoc, MatrixDoc]


def _space_header(space: GaussianSpace) -> dict:
    weights = list(space.weights) if space.weights is not None else None
    return {"dim": space.dim, "cap": space.degree_cap, "weights": weights}


def _terms(p: ChaosPoly) -> List[TermDoc]:
    return [TermDoc(alpha=alpha.to_dense(p.space.dim), c=c) for alpha, c in p.coeffs.items()]


def _poly_from_terms(space: GaussianSpace, terms: List[TermDoc]) -> ChaosPoly:
    for term in terms:
        if len(term.alpha) != space.dim:
            raise ChaosError(
                f"multi-index {term.alpha} has length {len(term.alpha)}, expected {space.dim}"
            )
    return ChaosPoly.from_terms(space, [(t.alpha, t.c) for t in terms])


def poly_to_doc(p: ChaosPoly) -> PolyDoc:
    return PolyDoc(**_space_header(p.space), terms=_terms(p))


def poly_from_doc(doc: PolyDoc) -> ChaosPoly:
    return _poly_from_terms(doc.to_space(), doc.terms)


def field_to_doc(v: ChaosField) -> FieldDoc:
    return FieldDoc(**_space_header(v.space), components=[_terms(c) for c in v.components])


def field_from_doc(doc: FieldDoc) -> ChaosField:
    space = doc.to_space()
    return ChaosField(space, tuple(_poly_from_terms(space, terms) for terms in doc.components))


def matrix_to_doc(k: ChaosMatrix) -> MatrixDoc:
    return MatrixDoc(
        **_space_header(k.space),
        entries=[[_terms(e) for e in row] for row in k.entries],
    )


def matrix_from_doc(doc: MatrixDoc) -> ChaosMatrix:
    space = doc.to_space()
    return ChaosMatrix(
        space,
        tuple(tuple(_poly_from_terms(space, terms) for terms in row) for row in doc.entries),
    )


def to_document(obj: ChaosPoly | ChaosField | ChaosMatrix) -> ChaosDoc:
    if isinstance(obj, ChaosPoly):
        return poly_to_doc(obj)
    if isinstance(obj, ChaosField):
        return field_to_doc(obj)
    if isinstance(obj, ChaosMatrix):
        return matrix_to_doc(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: ChaosPoly | ChaosField | ChaosMatrix) -> str:
    return to_document(obj).model_dump_json()


def loads(text: str) -> ChaosPoly | ChaosField | ChaosMatrix:
    """Parse any chaos document; the kind is told apart by its payload key."""
    raw = json.loads(text)
    if not isinstance(raw, dict):
        raise ChaosError("chaos document must be a JSON object")
    if "terms" in raw:
        return poly_from_doc(PolyDoc.model_validate(raw))
    if "components" in raw:
        return field_from_doc(FieldDoc.model_validate(raw))
    if "entries" in raw:
        return matrix_from_doc(MatrixDoc.model_validate(raw))
    raise ChaosError("chaos document needs one of 'terms', 'components' or 'entries'")


def load_file(path: str | Path) -> ChaosPoly | ChaosField | ChaosMatrix:
    return loads(Path(path).read_text())


def dump_file(obj: ChaosPoly | ChaosField | ChaosMatrix, path: str | Path) -> None:
    Path(path).write_text(dumps(obj))