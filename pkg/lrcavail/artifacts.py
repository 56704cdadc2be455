"""
Code artifact schema and JSON persistence.

Base-field entries are integers in [0, 2^w); extension elements (evaluation
points) are stored as length-m coordinate arrays.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ValidationError, model_validator

from .config import FORMAT_VERSION, PRIMITIVE_POLYNOMIALS
from .constructions import CompositeCode, LinearCode
from .errors import ArtifactError, FieldError, LRCError
from .gabidulin import GabidulinSpec
from .galois import FieldTower, build_base_field
from .linalg import as_matrix, rank

logger = logging.getLogger(__name__)

Kind = Literal["wzl", "expander", "concat", "raw"]

# CompositeCode.kind -> artifact kind
_COMPOSITE_KINDS = {"expander": "expander", "concatenated": "concat"}


class FieldDescriptor(BaseModel):
    w: int
    modulus: int
    m: Optional[int] = None
    ext_modulus: Optional[List[int]] = None


class Matrices(BaseModel):
    parity: Optional[List[List[int]]] = None
    generator: Optional[List[List[int]]] = None
    eval_points: Optional[List[List[int]]] = None


class Provenance(BaseModel):
    seed: Optional[int] = None
    parameters: Dict[str, Any] = {}


class CodeArtifact(BaseModel):
    format_version: str = FORMAT_VERSION
    field: FieldDescriptor
    kind: Kind
    n: int
    k: int
    r: Optional[int] = None
    t: Optional[int] = None
    d: Optional[int] = None
    blocks: Optional[int] = None
    matrices: Matrices
    provenance: Provenance = Provenance()

    @model_validator(mode="after")
    def check_shapes(self):
        if self.format_version != FORMAT_VERSION:
            raise ValueError(f"unsupported format_version {self.format_version!r}")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"k={self.k} outside [0, n={self.n}]")
        for name in ("parity", "generator"):
            rows = getattr(self.matrices, name)
            if rows is not None and any(len(row) != self.n for row in rows):
                raise ValueError(f"{name} rows must have length n={self.n}")
        if self.matrices.parity is None and self.matrices.generator is None:
            raise ValueError("artifact carries neither parity nor generator")
        if self.kind in ("expander", "concat"):
            if self.field.m is None or self.field.ext_modulus is None:
                raise ValueError(f"{self.kind} artifacts need an extension field")
            if self.matrices.eval_points is None or self.matrices.generator is None:
                raise ValueError(f"{self.kind} artifacts need eval_points and generator")
            if any(len(p) != self.field.m for p in self.matrices.eval_points):
                raise ValueError(f"evaluation points must have m={self.field.m} coordinates")
        return self

    @property
    def is_composite(self) -> bool:
        return self.kind in ("expander", "concat")


def _field_descriptor(field: Union[FieldTower, Any]) -> FieldDescriptor:
    return FieldDescriptor(**field.descriptor())


def artifact_from_linear(code: LinearCode, seed: Optional[int] = None, parameters: Optional[dict] = None) -> CodeArtifact:
    kind = code.kind if code.kind in ("wzl", "raw") else "raw"
    return CodeArtifact(
        field=_field_descriptor(code.field),
        kind=kind,
        n=code.n,
        k=code.k,
        r=code.claimed_r,
        t=code.claimed_t,
        d=code.claimed_d,
        matrices=Matrices(parity=code.parity.tolist()),
        provenance=Provenance(seed=seed, parameters=parameters or {}),
    )


def artifact_from_composite(code: CompositeCode, seed: Optional[int] = None, parameters: Optional[dict] = None, d: Optional[int] = None) -> CodeArtifact:
    t = code.tower
    return CodeArtifact(
        field=_field_descriptor(t),
        kind=_COMPOSITE_KINDS[code.kind],
        n=code.n,
        k=code.k,
        r=code.r,
        t=code.t,
        d=d,
        blocks=code.blocks,
        matrices=Matrices(
            parity=code.parity.tolist(),
            generator=code.outer_map.tolist(),
            eval_points=[list(t.coords(a)) for a in code.gab.eval_points],
        ),
        provenance=Provenance(seed=seed, parameters=parameters or {}),
    )


def _base_field(desc: FieldDescriptor):
    try:
        base = build_base_field(desc.w)
    except FieldError as exc:
        raise ArtifactError(str(exc)) from exc
    if PRIMITIVE_POLYNOMIALS[desc.w] != desc.modulus:
        raise ArtifactError(f"Modulus {desc.modulus} does not match the fixed polynomial for w={desc.w}")
    return base


def to_linear(artifact: CodeArtifact) -> LinearCode:
    """The base-field code an artifact describes (C_E or the block code for composites)."""
    base = _base_field(artifact.field)
    try:
        meta = dict(claimed_r=artifact.r, claimed_t=artifact.t, claimed_d=artifact.d)
        kind = artifact.kind if not artifact.is_composite else f"{artifact.kind}_outer"
        if artifact.matrices.parity is not None:
            code = LinearCode(base, artifact.n, as_matrix(base, artifact.matrices.parity, cols=artifact.n), kind=kind, **meta)
        else:
            code = LinearCode.from_generator(base, artifact.matrices.generator, kind=kind, **meta)
    except LRCError as exc:
        raise ArtifactError(f"Inconsistent matrices: {exc}") from exc
    if not artifact.is_composite and code.k != artifact.k:
        raise ArtifactError(f"Declared k={artifact.k} but parity gives k={code.k}")
    return code


def to_composite(artifact: CodeArtifact) -> CompositeCode:
    if not artifact.is_composite:
        raise ArtifactError(f"{artifact.kind} artifact is not a composite code")
    base = _base_field(artifact.field)
    try:
        tower = FieldTower(base, artifact.field.m, tuple(artifact.field.ext_modulus))
        points = tuple(tower.from_coords(p) for p in artifact.matrices.eval_points)
        gab = GabidulinSpec(tower, len(points), artifact.k, points)
        outer_map = as_matrix(base, artifact.matrices.generator, cols=artifact.n)
        parity = as_matrix(base, artifact.matrices.parity or [], cols=artifact.n)
    except LRCError as exc:
        raise ArtifactError(f"Inconsistent composite artifact: {exc}") from exc

    if outer_map.shape[0] != gab.n_G or rank(base, outer_map) != gab.n_G:
        raise ArtifactError("Outer map must have full row rank n_G")
    kind = "concatenated" if artifact.kind == "concat" else "expander"
    n_I = k_I = None
    if kind == "concatenated":
        if not artifact.blocks or artifact.n % artifact.blocks or gab.n_G % artifact.blocks:
            raise ArtifactError("Concatenated artifact needs a block count dividing n and n_G")
        n_I, k_I = artifact.n // artifact.blocks, gab.n_G // artifact.blocks
    return CompositeCode(
        kind, tower, gab, outer_map, parity,
        r=artifact.r or 0, t=artifact.t or 0,
        n_I=n_I, k_I=k_I, blocks=artifact.blocks,
        provenance=artifact.provenance.model_dump(),
    )


def dump_artifact(artifact: CodeArtifact) -> str:
    return artifact.model_dump_json(indent=2) + "\n"


def save_artifact(artifact: CodeArtifact, path) -> Path:
    path = Path(path)
    try:
        path.write_text(dump_artifact(artifact))
    except OSError as exc:
        raise ArtifactError(f"Cannot write {path}: {exc}") from exc
    logger.info(f"Wrote {artifact.kind} artifact n={artifact.n} k={artifact.k} to {path}")
    return path


def load_artifact(path) -> CodeArtifact:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ArtifactError(f"Cannot read {path}: {exc}") from exc
    try:
        return CodeArtifact.model_validate_json(text)
    except ValidationError as exc:
        raise ArtifactError(f"{path} is not a valid code artifact: {exc.errors()[0]['msg']}") from exc
