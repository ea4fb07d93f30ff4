"""Algebra, bimodule and corpus files.

Algebra files:
    {"field": {"kind": "Q"} | {"kind": "Fp", "p": 5}, "dim": n, "labels": [...],
     "products": [{"i": 1, "j": 2, "out": ["1", "0", ...]}, ...]}
with 1-based indices, scalar strings and unlisted products zero.
"""
import json
import logging
import os
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from backend.core import LeibnizAlgebra
from backend.errors import NotLeibniz, ParseError
from backend.exactfield import Field as ExactField
from backend.generators import CorpusEntry, check_flags
from backend.linalg import Matrix
from backend.representations import Bimodule

logger = logging.getLogger('AlgebraIO')

MANIFEST = 'manifest.json'

ScalarText = Union[str, int]


class FieldModel(BaseModel):
    kind: Literal['Q', 'Fp']
    p: Optional[int] = None

    @model_validator(mode='after')
    def _prime_given(self):
        if self.kind == 'Fp' and self.p is None:
            raise ValueError("prime field needs p")
        if self.kind == 'Q' and self.p is not None:
            raise ValueError("rational field takes no p")
        return self


class ProductModel(BaseModel):
    i: int = Field(ge=1)
    j: int = Field(ge=1)
    out: List[ScalarText]


class AlgebraFile(BaseModel):
    field: FieldModel
    dim: int = Field(ge=0)
    labels: Optional[List[str]] = None
    products: List[ProductModel] = []


class BimoduleFile(BaseModel):
    field: FieldModel
    algebra_dim: int = Field(ge=0)
    module_dim: int = Field(ge=0)
    T: List[ProductModel] = []
    S: List[ProductModel] = []


class ManifestEntry(BaseModel):
    file: str
    name: Optional[str] = None
    provenance: Dict[str, Any] = {}
    known_flags: Dict[str, bool] = {}


class Manifest(BaseModel):
    entries: List[ManifestEntry] = []


def _read_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}: line {e.lineno} column {e.colno}: {e.msg}")


def _validate(model, data: Any, source: str):
    try:
        return model.model_validate(data)
    except ValidationError as e:
        problems = '; '.join(f"{'.'.join(str(x) for x in err['loc'])}: {err['msg']}" for err in e.errors())
        raise ParseError(f"{source}: {problems}")


def _field(model: FieldModel, source: str) -> ExactField:
    try:
        return ExactField(model.kind, model.p)
    except ValueError as e:
        raise ParseError(f"{source}: field.p: {str(e)}")


def _scalars(field: ExactField, values: List[ScalarText], where: str, source: str) -> list:
    try:
        return [field.parse(str(v)) for v in values]
    except ParseError as e:
        raise ParseError(f"{source}: {where}: {str(e)}")


def _sparse(field: ExactField, items: List[ProductModel], rows: int, width: int, name: str,
            source: str) -> Dict:
    table = {}
    for idx, item in enumerate(items):
        where = f"{name}.{idx}"
        if item.i > rows or item.j > (rows if name == 'products' else width):
            raise ParseError(f"{source}: {where}: index ({item.i}, {item.j}) out of range")
        if len(item.out) != width:
            raise ParseError(f"{source}: {where}.out: expected {width} scalars, got {len(item.out)}")
        key = (item.i - 1, item.j - 1)
        if key in table:
            raise ParseError(f"{source}: {where}: duplicate entry ({item.i}, {item.j})")
        table[key] = _scalars(field, item.out, f"{where}.out", source)
    return table


def parse_algebra(text: str, source: str = '<string>', verify: bool = True) -> LeibnizAlgebra:
    model = _validate(AlgebraFile, _read_json(text, source), source)
    field = _field(model.field, source)
    if model.labels is not None and len(model.labels) != model.dim:
        raise ParseError(f"{source}: labels: expected {model.dim} labels, got {len(model.labels)}")
    products = _sparse(field, model.products, model.dim, model.dim, 'products', source)
    algebra = LeibnizAlgebra(field, model.dim, products, model.labels)
    if verify:
        verdict = algebra.verify_leibniz()
        if not verdict.passed:
            raise NotLeibniz(f"{source}: Leibniz identity fails at basis triple {verdict.triple}", verdict.triple)
    return algebra


def load_algebra(path: str, verify: bool = True) -> LeibnizAlgebra:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise ParseError(f"{path}: {str(e)}")
    return parse_algebra(text, path, verify)


def _dump(model: BaseModel) -> str:
    return json.dumps(model.model_dump(exclude_none=True), indent=2) + "\n"


def _field_model(field: ExactField) -> FieldModel:
    return FieldModel(**field.descriptor())


def dump_algebra(algebra: LeibnizAlgebra) -> str:
    """Deterministic text: products sorted by (i, j), zero products left out."""
    f = algebra.field
    products = [ProductModel(i=i + 1, j=j + 1, out=[f.format(x) for x in out])
                for (i, j), out in algebra.nonzero_products()]
    model = AlgebraFile(field=_field_model(f), dim=algebra.dim,
                        labels=list(algebra.labels) if algebra.labels is not None else None,
                        products=products)
    return _dump(model)


def write_algebra(algebra: LeibnizAlgebra, path: str) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dump_algebra(algebra))


def _operators(field: ExactField, table: Dict, algebra_dim: int, module_dim: int) -> List[Matrix]:
    ops = []
    for i in range(algebra_dim):
        columns = [table.get((i, j), [field.zero] * module_dim) for j in range(module_dim)]
        ops.append(Matrix.from_columns(field, columns, module_dim))
    return ops


def parse_bimodule(text: str, algebra: LeibnizAlgebra, source: str = '<string>') -> Bimodule:
    """Sparse "T" and "S" entries give T_(e_i)(m_j) and S_(e_i)(m_j)."""
    model = _validate(BimoduleFile, _read_json(text, source), source)
    field = _field(model.field, source)
    if field != algebra.field or model.algebra_dim != algebra.dim:
        raise ParseError(f"{source}: bimodule is over {field}^{model.algebra_dim}, algebra is {algebra.field}^{algebra.dim}")
    m = model.module_dim
    t_table = _sparse(field, model.T, algebra.dim, m, 'T', source)
    s_table = _sparse(field, model.S, algebra.dim, m, 'S', source)
    return Bimodule(algebra, m, _operators(field, t_table, algebra.dim, m), _operators(field, s_table, algebra.dim, m))


def load_bimodule(path: str, algebra: LeibnizAlgebra) -> Bimodule:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise ParseError(f"{path}: {str(e)}")
    return parse_bimodule(text, algebra, path)


def dump_bimodule(bimodule: Bimodule) -> str:
    f = bimodule.field

    def sparse(ops):
        out = []
        for i, op in enumerate(ops):
            for j in range(bimodule.module_dim):
                column = op.column(j)
                if any(not f.is_zero(x) for x in column):
                    out.append(ProductModel(i=i + 1, j=j + 1, out=[f.format(x) for x in column]))
        return out

    model = BimoduleFile(field=_field_model(f), algebra_dim=bimodule.algebra.dim,
                         module_dim=bimodule.module_dim, T=sparse(bimodule.t_ops), S=sparse(bimodule.s_ops))
    return _dump(model)


def write_corpus(entries: List[CorpusEntry], out_dir: str) -> List[str]:
    """Write algebra files and merge their entries into the directory's manifest."""
    os.makedirs(out_dir, exist_ok=True)
    manifest_path = os.path.join(out_dir, MANIFEST)
    manifest = Manifest()
    if os.path.exists(manifest_path):
        with open(manifest_path, 'r', encoding='utf-8') as f:
            manifest = _validate(Manifest, _read_json(f.read(), manifest_path), manifest_path)
    written = []
    for entry in entries:
        file_name = f"{entry.name}.json"
        path = os.path.join(out_dir, file_name)
        write_algebra(entry.algebra, path)
        written.append(path)
        manifest.entries = [e for e in manifest.entries if e.file != file_name]
        manifest.entries.append(ManifestEntry(file=file_name, name=entry.name,
                                              provenance=entry.provenance, known_flags=entry.known_flags))
    with open(manifest_path, 'w', encoding='utf-8') as f:
        f.write(_dump(manifest))
    logger.info(f"Wrote {len(written)} algebras to {out_dir}")
    return written


def load_corpus(corpus_dir: str, budget: int = 10**6) -> List[CorpusEntry]:
    """Every algebra of a corpus directory, re-verified along with its recorded flags."""
    manifest_path = os.path.join(corpus_dir, MANIFEST)
    if os.path.exists(manifest_path):
        with open(manifest_path, 'r', encoding='utf-8') as f:
            manifest = _validate(Manifest, _read_json(f.read(), manifest_path), manifest_path)
    else:
        files = sorted(name for name in os.listdir(corpus_dir) if name.endswith('.json'))
        manifest = Manifest(entries=[ManifestEntry(file=name) for name in files])

    entries = []
    for item in manifest.entries:
        path = os.path.join(corpus_dir, item.file)
        try:
            algebra = load_algebra(path)
            entry = CorpusEntry(item.name or os.path.splitext(item.file)[0], algebra,
                                dict(item.provenance), dict(item.known_flags))
            check_flags(entry, budget)
        except Exception as e:
            logger.error(f"Error loading corpus entry {item.file}: {str(e)}")
            raise
        entries.append(entry)
    logger.info(f"Loaded {len(entries)} algebras from {corpus_dir}")
    return entries
