"""Annotation metadata registry: specs, equivalence tuples, load/query/write.

The registry is a versioned flat file (see docs/formats.md) curated offline.
Equivalence between annotations is declared in the file and validated against
the conservative rule: all tuple members share the simple name and the exact
target set.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

from .textfmt import FormatError, Record, check_header, parse_records, quote


class ElementKind(enum.Enum):
    """Program-element kinds an annotation may target."""

    TYPE = "TYPE"
    FIELD = "FIELD"
    METHOD = "METHOD"
    PARAMETER = "PARAMETER"
    CONSTRUCTOR = "CONSTRUCTOR"
    LOCAL_VARIABLE = "LOCAL_VARIABLE"
    ANNOTATION_TYPE = "ANNOTATION_TYPE"
    PACKAGE = "PACKAGE"
    TYPE_PARAMETER = "TYPE_PARAMETER"
    TYPE_USE = "TYPE_USE"
    MODULE = "MODULE"
    RECORD_COMPONENT = "RECORD_COMPONENT"


ALL_KINDS = frozenset(ElementKind)

# Use-position subkinds for TYPE_USE sites.
TYPE_USE_SUBKINDS = (
    "GENERIC_ARGUMENT",
    "ARRAY_DIMENSION",
    "CAST",
    "THROWS",
    "METHOD_REFERENCE_QUALIFIER",
    "QUALIFIED_NAME_SEGMENT",
    "VARARG",
)


class Retention(enum.Enum):
    SOURCE = "SOURCE"
    CLASS = "CLASS"
    RUNTIME = "RUNTIME"


class RegistryError(Exception):
    pass


@dataclass(frozen=True)
class PropertySpec:
    """One annotation property: name, value kind, and whether a default exists."""

    name: str
    value_kind: str
    has_default: bool


@dataclass(frozen=True)
class AnnotationSpec:
    fq_name: str
    library: str
    targets: frozenset[ElementKind]
    retention: Retention
    properties: tuple[PropertySpec, ...] = ()
    definition_source: str | None = None

    @property
    def simple_name(self) -> str:
        return self.fq_name.rsplit(".", 1)[-1]

    @property
    def no_arg_legal(self) -> bool:
        """An annotation is usable without arguments iff every property has a default."""
        return all(p.has_default for p in self.properties)

    def validate(self) -> None:
        if not self.fq_name or any(not seg for seg in self.fq_name.split(".")):
            raise RegistryError(f"malformed fq_name {self.fq_name!r}")
        if not self.targets:
            raise RegistryError(f"{self.fq_name}: targets must be non-empty")


@dataclass(frozen=True)
class EquivalenceTuple:
    name: str
    members: tuple[str, ...]
    verified: bool
    rationale: str = ""

    def validate(self, specs: dict[str, AnnotationSpec]) -> None:
        if len(self.members) < 2:
            raise RegistryError(f"tuple {self.name}: needs at least 2 members")
        if len(set(self.members)) != len(self.members):
            raise RegistryError(f"tuple {self.name}: members must be pairwise distinct")
        resolved = []
        for fq in self.members:
            if fq not in specs:
                raise RegistryError(f"tuple {self.name}: unknown member {fq}")
            resolved.append(specs[fq])
        names = {s.simple_name for s in resolved}
        if len(names) != 1:
            raise RegistryError(
                f"tuple {self.name}: members disagree on simple name ({sorted(names)})")
        targets = {s.targets for s in resolved}
        if len(targets) != 1:
            raise RegistryError(f"tuple {self.name}: members disagree on target sets")


@dataclass
class Registry:
    """Immutable after load; safe for concurrent reads."""

    annotations: dict[str, AnnotationSpec] = field(default_factory=dict)
    tuples: dict[str, EquivalenceTuple] = field(default_factory=dict)
    source: str = "<memory>"

    def spec(self, fq_name: str) -> AnnotationSpec:
        try:
            return self.annotations[fq_name]
        except KeyError:
            raise RegistryError(f"unknown annotation {fq_name!r}") from None


def _parse_targets(raw: str, rec: Record) -> frozenset[ElementKind]:
    kinds = set()
    for part in filter(None, raw.split(",")):
        try:
            kinds.add(ElementKind(part))
        except ValueError:
            raise FormatError(f"unknown target kind {part!r}", rec.source, rec.line) from None
    return frozenset(kinds)


def _parse_props(raw: str, rec: Record) -> tuple[PropertySpec, ...]:
    props = []
    for part in filter(None, raw.split(",")):
        bits = part.split(":")
        if len(bits) == 2:
            props.append(PropertySpec(bits[0], bits[1], has_default=False))
        elif len(bits) == 3 and bits[2] == "default":
            props.append(PropertySpec(bits[0], bits[1], has_default=True))
        else:
            raise FormatError(
                f"malformed property {part!r} (want name:kind or name:kind:default)",
                rec.source, rec.line)
    return tuple(props)


_ANNOTATION_KEYS = {"lib", "targets", "retention", "props", "define"}
_TUPLE_KEYS = {"members", "verified", "rationale"}


def load_registry_text(text: str, source: str = "<memory>") -> Registry:
    records = check_header(parse_records(text, source), "registry", source)
    reg = Registry(source=source)
    for rec in records:
        if rec.rtype == "annotation":
            if len(rec.positional) != 1:
                raise FormatError("annotation record wants exactly one fq name",
                                  rec.source, rec.line)
            unknown = set(rec.pairs) - _ANNOTATION_KEYS
            if unknown:
                raise FormatError(f"unknown keys {sorted(unknown)}", rec.source, rec.line)
            fq = rec.positional[0]
            if fq in reg.annotations:
                raise FormatError(f"duplicate annotation {fq}", rec.source, rec.line)
            try:
                retention = Retention(rec.require("retention"))
            except ValueError:
                raise FormatError(f"bad retention {rec.pairs['retention']!r}",
                                  rec.source, rec.line) from None
            spec = AnnotationSpec(
                fq_name=fq,
                library=rec.require("lib"),
                targets=_parse_targets(rec.require("targets"), rec),
                retention=retention,
                properties=_parse_props(rec.pairs.get("props", ""), rec),
                definition_source=rec.pairs.get("define"),
            )
            try:
                spec.validate()
            except RegistryError as exc:
                raise FormatError(str(exc), rec.source, rec.line) from None
            reg.annotations[fq] = spec
        elif rec.rtype == "tuple":
            if len(rec.positional) != 1:
                raise FormatError("tuple record wants exactly one name", rec.source, rec.line)
            unknown = set(rec.pairs) - _TUPLE_KEYS
            if unknown:
                raise FormatError(f"unknown keys {sorted(unknown)}", rec.source, rec.line)
            name = rec.positional[0]
            if name in reg.tuples:
                raise FormatError(f"duplicate tuple {name}", rec.source, rec.line)
            verified_raw = rec.require("verified")
            if verified_raw not in ("true", "false"):
                raise FormatError("verified must be true|false", rec.source, rec.line)
            tup = EquivalenceTuple(
                name=name,
                members=tuple(filter(None, rec.require("members").split(","))),
                verified=verified_raw == "true",
                rationale=rec.pairs.get("rationale", ""),
            )
            reg.tuples[name] = tup
        else:
            raise FormatError(f"unknown record type {rec.rtype!r}", rec.source, rec.line)
    for tup in reg.tuples.values():
        try:
            tup.validate(reg.annotations)
        except RegistryError as exc:
            raise FormatError(str(exc), source, 0) from None
    return reg


def load_registry(path: str | Path) -> Registry:
    path = Path(path)
    return load_registry_text(path.read_text(encoding="utf-8"), source=str(path))


def write_registry(reg: Registry) -> str:
    """Serialize back to the flat format; load(write(r)) == r field-for-field."""
    lines = ["registry v1"]
    for fq in sorted(reg.annotations):
        spec = reg.annotations[fq]
        parts = [
            "annotation", fq,
            f"lib={quote(spec.library)}",
            "targets=" + ",".join(sorted(k.value for k in spec.targets)),
            f"retention={spec.retention.value}",
        ]
        if spec.properties:
            rendered = ",".join(
                f"{p.name}:{p.value_kind}:default" if p.has_default else f"{p.name}:{p.value_kind}"
                for p in spec.properties)
            parts.append(f"props={rendered}")
        if spec.definition_source is not None:
            parts.append(f"define={quote(spec.definition_source)}")
        lines.append(" ".join(parts))
    for name in sorted(reg.tuples):
        tup = reg.tuples[name]
        parts = [
            "tuple", name,
            "members=" + ",".join(tup.members),
            f"verified={'true' if tup.verified else 'false'}",
        ]
        if tup.rationale:
            parts.append(f"rationale={quote(tup.rationale)}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def query_by_target(reg: Registry, kind: ElementKind,
                    retention_filter: Retention | None = None) -> list[AnnotationSpec]:
    """All specs targeting `kind`, optionally filtered by retention, sorted by fq name."""
    out = [
        spec for spec in reg.annotations.values()
        if kind in spec.targets
        and (retention_filter is None or spec.retention == retention_filter)
    ]
    return sorted(out, key=lambda s: s.fq_name)


def equivalence_tuples(reg: Registry, selection: list[str] | None = None) -> list[EquivalenceTuple]:
    """Selected tuples by name, or all verified tuples when no selection given."""
    if selection is None:
        return sorted((t for t in reg.tuples.values() if t.verified), key=lambda t: t.name)
    out = []
    for name in selection:
        if name not in reg.tuples:
            raise RegistryError(f"unknown tuple {name!r}")
        out.append(reg.tuples[name])
    return out
