"""Injection-site enumeration: every position where an annotation of a given
element kind may legally be spliced in.

Anchors always point at the first existing token of the annotatable thing
(modifiers and existing annotations included), so splicing `@X ` at the anchor
makes the new annotation the leading one. The brute-force oracle in the test
suite validates this walk by exhaustive insertion and reparse; keep the two
honest by never sharing position arithmetic with it.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..registry import ElementKind
from . import nodes as N


@dataclass(frozen=True)
class InjectionSite:
    seed_id: str
    path: str
    anchor: int
    kind: ElementKind
    subkind: str | None
    node_path: str

    def sort_key(self):
        return (self.path, self.anchor, self.kind.value, self.subkind or "")


def enumerate_sites(unit: N.CompilationUnitNode, kinds: set[ElementKind], *,
                    seed_id: str = "", path: str = "", is_package_info: bool = False,
                    is_module_info: bool = False) -> list[InjectionSite]:
    walker = _Walker(kinds, seed_id, path)
    if unit.package is not None and is_package_info and ElementKind.PACKAGE in kinds:
        walker.emit(unit.package.start, ElementKind.PACKAGE, None, "package")
    if unit.module is not None and is_module_info and ElementKind.MODULE in kinds:
        walker.emit(unit.module.start, ElementKind.MODULE, None, "module")
    for td in unit.types:
        walker.type_decl(td, in_anon=False)
    sites = sorted(walker.sites, key=InjectionSite.sort_key)
    seen = set()
    for site in sites:
        key = (site.anchor, site.kind, site.subkind)
        if key in seen:
            raise AssertionError(f"duplicate site {key} in {path}")
        seen.add(key)
    return sites


class _Walker:
    def __init__(self, kinds: set[ElementKind], seed_id: str, path: str):
        self.kinds = kinds
        self.seed_id = seed_id
        self.path = path
        self.sites: list[InjectionSite] = []
        self.crumbs: list[str] = []
        self._counters: list[dict[str, int]] = [{}]

    def emit(self, anchor: int, kind: ElementKind, subkind: str | None, label: str):
        if kind not in self.kinds:
            return
        node_path = "/".join(self.crumbs + [label]) if self.crumbs else label
        self.sites.append(InjectionSite(self.seed_id, self.path, anchor, kind,
                                        subkind, node_path))

    def _label(self, base: str) -> str:
        counter = self._counters[-1]
        idx = counter.get(base, 0)
        counter[base] = idx + 1
        return base if idx == 0 else f"{base}~{idx}"

    def push(self, crumb: str):
        self.crumbs.append(crumb)
        self._counters.append({})

    def pop(self):
        self.crumbs.pop()
        self._counters.pop()

    # ------------------------------------------------------------ declarations

    def type_decl(self, td: N.TypeDecl, in_anon: bool):
        kind = (ElementKind.ANNOTATION_TYPE if td.decl_kind == "annotation"
                else ElementKind.TYPE)
        crumb = f"{td.decl_kind}[{td.name}]"
        self.emit(td.start, kind, None, crumb)
        self.push(crumb)
        try:
            for tp in td.type_params:
                self.type_param(tp, in_anon)
            for t in td.extends + td.implements + td.permits:
                self.type(t, "other", in_anon)
            for comp in td.components:
                self.emit(comp.start, ElementKind.RECORD_COMPONENT, None,
                          f"component[{comp.name}]")
                self.type(comp.type, "other", in_anon)
            for const in td.enum_constants:
                self.emit(const.start, ElementKind.FIELD, None,
                          f"constant[{const.name}]")
                for arg in const.args or []:
                    self.expr(arg, in_anon)
                if const.body is not None:
                    self.push(f"constant[{const.name}]")
                    try:
                        for member in const.body:
                            self.member(member, in_anon=True)
                    finally:
                        self.pop()
            for member in td.members:
                self.member(member, in_anon)
        finally:
            self.pop()

    def type_param(self, tp: N.TypeParam, in_anon: bool):
        self.emit(tp.start, ElementKind.TYPE_PARAMETER, None, f"typeparam[{tp.name}]")
        for bound in tp.bounds:
            self.type(bound, "other", in_anon)

    def member(self, member: N.Member, in_anon: bool):
        if isinstance(member, N.TypeDecl):
            self.type_decl(member, in_anon)
        elif isinstance(member, N.FieldDecl):
            first = member.declarators[0].name if member.declarators else "?"
            crumb = self._label(f"field[{first}]")
            self.emit(member.start, ElementKind.FIELD, None, crumb)
            self.push(crumb)
            try:
                self.type(member.type, "other", in_anon)
                for decl in member.declarators:
                    for dim in decl.extra_dims:
                        self.dim(dim)
                    if decl.init is not None:
                        self.expr(decl.init, in_anon)
            finally:
                self.pop()
        elif isinstance(member, N.MethodDecl):
            kind = ElementKind.CONSTRUCTOR if member.is_ctor else ElementKind.METHOD
            base = "ctor" if member.is_ctor else f"method[{member.name}]"
            crumb = self._label(base)
            self.emit(member.start, kind, None, crumb)
            self.push(crumb)
            try:
                for tp in member.type_params:
                    self.type_param(tp, in_anon)
                if member.return_type is not None:
                    self.type(member.return_type, "other", in_anon)
                for idx, param in enumerate(member.params):
                    self.param(param, idx, in_anon)
                for dim in member.extra_dims:
                    self.dim(dim)
                for t in member.throws:
                    self.type(t, "throws", in_anon)
                if member.body is not None:
                    self.stmt(member.body, in_anon)
            finally:
                self.pop()
        elif isinstance(member, N.InitBlock):
            self.push(self._label("init"))
            try:
                self.stmt(member.body, in_anon)
            finally:
                self.pop()

    def param(self, param: N.Param, idx: int, in_anon: bool):
        if not in_anon and not param.is_receiver and not param.is_var_type \
                and param.type is not None:
            self.emit(param.start, ElementKind.PARAMETER, None, f"param[{idx}]")
        if param.type is not None:
            self.type(param.type, "other", in_anon)
        if param.is_vararg:
            self.emit(param.vararg_group_start, ElementKind.TYPE_USE, "VARARG",
                      f"param[{idx}]/vararg")
        for dim in param.extra_dims:
            self.dim(dim)

    def dim(self, dim: N.Dim):
        self.emit(dim.start, ElementKind.TYPE_USE, "ARRAY_DIMENSION",
                  self._label("dim"))

    # ------------------------------------------------------------ types

    _WHOLE_TYPE_SUBKIND = {
        "type_arg": "GENERIC_ARGUMENT",
        "cast": "CAST",
        "throws": "THROWS",
    }
    _SUBKIND_LABEL = {
        "GENERIC_ARGUMENT": "targ",
        "CAST": "cast",
        "THROWS": "throws",
    }

    def type(self, t: N.TypeNode | None, context: str | None, in_anon: bool):
        """Emit TYPE_USE sites inside a type. `context` names the whole-type
        position; None means the whole-type site was already handled."""
        if t is None:
            return
        if isinstance(t, N.ArrayType):
            for dim in t.dims:
                self.dim(dim)
            self.type(t.element, context, in_anon)
            return
        if isinstance(t, N.PrimitiveType):
            sub = self._WHOLE_TYPE_SUBKIND.get(context or "")
            if sub:
                self.emit(t.start, ElementKind.TYPE_USE, sub,
                          self._label(self._SUBKIND_LABEL[sub]))
            return
        if isinstance(t, N.UnionType):
            for alt in t.alternatives:
                self.type(alt, "other", in_anon)
            return
        if isinstance(t, N.VarType):
            return
        assert isinstance(t, N.ClassType)
        single = len(t.segments) == 1
        sub = self._WHOLE_TYPE_SUBKIND.get(context or "")
        if sub and single:
            self.emit(t.start, ElementKind.TYPE_USE, sub,
                      self._label(self._SUBKIND_LABEL[sub]))
        if not single and not t.from_name_chain:
            last = t.segments[-1]
            self.emit(last.start, ElementKind.TYPE_USE, "QUALIFIED_NAME_SEGMENT",
                      self._label(f"segment[{last.name}]"))
        for seg in t.segments:
            for arg in seg.type_args or []:
                if isinstance(arg, N.Wildcard):
                    self.emit(arg.start, ElementKind.TYPE_USE, "GENERIC_ARGUMENT",
                              self._label("targ"))
                    if arg.bound is not None:
                        self.type(arg.bound, "other", in_anon)
                else:
                    self.type(arg, "type_arg", in_anon)

    # ------------------------------------------------------------ statements

    def stmt(self, stmt: N.Stmt, in_anon: bool):
        if isinstance(stmt, N.Block):
            for s in stmt.statements:
                self.stmt(s, in_anon)
        elif isinstance(stmt, N.LocalVarDecl):
            if not in_anon and not isinstance(stmt.type, N.VarType):
                name = stmt.declarators[0].name if stmt.declarators else "?"
                self.emit(stmt.start, ElementKind.LOCAL_VARIABLE, None,
                          self._label(f"local[{name}]"))
            self.type(stmt.type, "other", in_anon)
            for decl in stmt.declarators:
                for dim in decl.extra_dims:
                    self.dim(dim)
                if decl.init is not None:
                    self.expr(decl.init, in_anon)
        elif isinstance(stmt, N.LocalTypeDeclStmt):
            self.type_decl(stmt.decl, in_anon)
        elif isinstance(stmt, N.ExprStmt):
            self.expr(stmt.expr, in_anon)
        elif isinstance(stmt, N.IfStmt):
            self.expr(stmt.cond, in_anon)
            self.stmt(stmt.then, in_anon)
            if stmt.orelse is not None:
                self.stmt(stmt.orelse, in_anon)
        elif isinstance(stmt, N.WhileStmt):
            self.expr(stmt.cond, in_anon)
            self.stmt(stmt.body, in_anon)
        elif isinstance(stmt, N.DoWhileStmt):
            self.stmt(stmt.body, in_anon)
            self.expr(stmt.cond, in_anon)
        elif isinstance(stmt, N.BasicForStmt):
            for s in stmt.init:
                self.stmt(s, in_anon)
            if stmt.cond is not None:
                self.expr(stmt.cond, in_anon)
            for e in stmt.update:
                self.expr(e, in_anon)
            self.stmt(stmt.body, in_anon)
        elif isinstance(stmt, N.EnhancedForStmt):
            self.stmt(stmt.var, in_anon)
            self.expr(stmt.iterable, in_anon)
            self.stmt(stmt.body, in_anon)
        elif isinstance(stmt, N.TryStmt):
            for res in stmt.resources:
                self.stmt(res, in_anon)
            self.stmt(stmt.body, in_anon)
            for catch in stmt.catches:
                if not in_anon:
                    self.emit(catch.param_start, ElementKind.PARAMETER, None,
                              self._label("catch"))
                for t in catch.types:
                    self.type(t, "other", in_anon)
                self.stmt(catch.body, in_anon)
            if stmt.finally_block is not None:
                self.stmt(stmt.finally_block, in_anon)
        elif isinstance(stmt, N.SwitchNode):
            self.switch(stmt, in_anon)
        elif isinstance(stmt, N.ReturnStmt):
            if stmt.value is not None:
                self.expr(stmt.value, in_anon)
        elif isinstance(stmt, N.ThrowStmt):
            self.expr(stmt.value, in_anon)
        elif isinstance(stmt, N.SynchronizedStmt):
            self.expr(stmt.lock, in_anon)
            self.stmt(stmt.body, in_anon)
        elif isinstance(stmt, N.LabeledStmt):
            self.stmt(stmt.body, in_anon)
        elif isinstance(stmt, N.AssertStmt):
            self.expr(stmt.cond, in_anon)
            if stmt.message is not None:
                self.expr(stmt.message, in_anon)
        elif isinstance(stmt, N.YieldStmt):
            self.expr(stmt.value, in_anon)

    def switch(self, node: N.SwitchNode, in_anon: bool):
        self.expr(node.selector, in_anon)
        for group in node.groups:
            for label in group.labels:
                for e in label.exprs:
                    self.expr(e, in_anon)
            for s in group.body:
                self.stmt(s, in_anon)

    # ------------------------------------------------------------ expressions

    def expr(self, expr: N.Expr, in_anon: bool):
        if isinstance(expr, (N.Literal, N.NameExpr, N.ClassLiteral, N.ThisExpr,
                             N.SuperExpr)):
            return
        if isinstance(expr, N.FieldAccess):
            self.expr(expr.obj, in_anon)
        elif isinstance(expr, N.ArrayAccess):
            self.expr(expr.array, in_anon)
            self.expr(expr.index, in_anon)
        elif isinstance(expr, N.Call):
            if expr.target is not None:
                self.expr(expr.target, in_anon)
            for arg in expr.args:
                self.expr(arg, in_anon)
        elif isinstance(expr, N.MethodRef):
            if expr.qualifier_is_type:
                q = expr.qualifier
                self.emit(q.start, ElementKind.TYPE_USE, "METHOD_REFERENCE_QUALIFIER",
                          self._label("mref"))
                # An array qualifier rebuilt from a bare name (`Foo[]::new`)
                # cannot take dimension annotations without a leading one, so
                # its interior positions are not insertable.
                chain_array = (isinstance(q, N.ArrayType)
                               and isinstance(q.element, N.ClassType)
                               and q.element.from_name_chain)
                if not chain_array:
                    self.type(q, None, in_anon)
            elif isinstance(expr.qualifier, N.NameExpr):
                self.emit(expr.qualifier.start, ElementKind.TYPE_USE,
                          "METHOD_REFERENCE_QUALIFIER", self._label("mref"))
            else:
                self.expr(expr.qualifier, in_anon)
        elif isinstance(expr, N.NewObject):
            if expr.outer is not None:
                self.expr(expr.outer, in_anon)
            self.type(expr.type, "other", in_anon)
            for arg in expr.args:
                self.expr(arg, in_anon)
            if expr.body is not None:
                self.push(self._label("anon"))
                try:
                    for member in expr.body:
                        self.member(member, in_anon=True)
                finally:
                    self.pop()
        elif isinstance(expr, N.NewArray):
            self.type(expr.element, "other", in_anon)
            for dim in expr.sized_dims + expr.extra_dims:
                self.dim(dim)
            for size in expr.sizes:
                self.expr(size, in_anon)
            if expr.initializer is not None:
                self.expr(expr.initializer, in_anon)
        elif isinstance(expr, N.ArrayInit):
            for e in expr.elements:
                self.expr(e, in_anon)
        elif isinstance(expr, N.Lambda):
            for idx, param in enumerate(expr.params):
                self.param(param, idx, in_anon)
            if isinstance(expr.body, N.Block):
                self.stmt(expr.body, in_anon)
            else:
                self.expr(expr.body, in_anon)
        elif isinstance(expr, N.Assign):
            self.expr(expr.target, in_anon)
            self.expr(expr.value, in_anon)
        elif isinstance(expr, N.Ternary):
            self.expr(expr.cond, in_anon)
            self.expr(expr.then, in_anon)
            self.expr(expr.orelse, in_anon)
        elif isinstance(expr, N.Binary):
            self.expr(expr.left, in_anon)
            self.expr(expr.right, in_anon)
        elif isinstance(expr, N.InstanceOf):
            self.expr(expr.value, in_anon)
            self.type(expr.type, "other", in_anon)
        elif isinstance(expr, N.Cast):
            for idx, t in enumerate(expr.types):
                self.type(t, "cast" if idx == 0 else "other", in_anon)
            self.expr(expr.value, in_anon)
        elif isinstance(expr, N.Unary):
            self.expr(expr.operand, in_anon)
        elif isinstance(expr, N.Paren):
            self.expr(expr.inner, in_anon)
        elif isinstance(expr, N.SwitchNode):
            self.switch(expr, in_anon)
