"""Annotation attachment classification.

Stamps every Annotation node in a parsed tree with the element kind it
attaches to, the owning node's start offset, and whether the position is one
this framework injects at. The insertion oracle reparses a probe-annotated
source and reads these stamps; keep the rules here in sync with the Java
grammar, not with the site enumerator (that's the point of having both).
"""

from __future__ import annotations

from . import nodes as N

# Positions we classify but never inject at (not in the supported subkind set
# or not an annotatable declaration in our model).
INELIGIBLE = "ineligible"


def assign_attachments(unit: N.CompilationUnitNode, *, is_package_info: bool = False,
                       is_module_info: bool = False) -> None:
    if unit.package is not None:
        for ann in unit.package.annotations:
            _stamp(ann, "PACKAGE", None, unit.package.start,
                   eligible=is_package_info,
                   note="" if is_package_info else "package annotation outside package-info")
    if unit.module is not None:
        for ann in unit.module.annotations:
            _stamp(ann, "MODULE", None, unit.module.start, eligible=is_module_info,
                   note="" if is_module_info else "module annotation outside module-info")
    for td in unit.types:
        _visit_type_decl(td, in_anon=False)


def _stamp(ann: N.Annotation, kind: str | None, subkind: str | None,
           owner_start: int, eligible: bool, note: str = "") -> None:
    ann.attach_kind = kind
    ann.attach_subkind = subkind
    ann.owner_start = owner_start
    ann.eligible = eligible
    ann.note = note


def _mod_annotations(mods: list[N.ModLike]):
    return [m for m in mods if isinstance(m, N.Annotation)]


def _visit_type_decl(td: N.TypeDecl, in_anon: bool) -> None:
    kind = "ANNOTATION_TYPE" if td.decl_kind == "annotation" else "TYPE"
    for ann in _mod_annotations(td.modifiers):
        _stamp(ann, kind, None, td.start, eligible=True)
    for tp in td.type_params:
        _visit_type_param(tp, in_anon)
    for t in td.extends + td.implements + td.permits:
        _visit_type(t, "other", in_anon)
    for comp in td.components:
        for ann in comp.annotations:
            _stamp(ann, "RECORD_COMPONENT", None, comp.start, eligible=True)
        _visit_type(comp.type, "other", in_anon)
    for const in td.enum_constants:
        for ann in const.annotations:
            _stamp(ann, "FIELD", None, const.start, eligible=True)
        for arg in const.args or []:
            _visit_expr(arg, in_anon)
        if const.body is not None:
            for member in const.body:
                _visit_member(member, in_anon=True)
    for member in td.members:
        _visit_member(member, in_anon)


def _visit_type_param(tp: N.TypeParam, in_anon: bool) -> None:
    for ann in tp.annotations:
        _stamp(ann, "TYPE_PARAMETER", None, tp.start, eligible=True)
    for bound in tp.bounds:
        _visit_type(bound, "other", in_anon)


def _visit_member(member: N.Member, in_anon: bool) -> None:
    if isinstance(member, N.TypeDecl):
        _visit_type_decl(member, in_anon)
    elif isinstance(member, N.FieldDecl):
        for ann in _mod_annotations(member.modifiers):
            _stamp(ann, "FIELD", None, member.start, eligible=True)
        _visit_type(member.type, "other", in_anon)
        for decl in member.declarators:
            _visit_declarator(decl, in_anon)
    elif isinstance(member, N.MethodDecl):
        kind = "CONSTRUCTOR" if member.is_ctor else "METHOD"
        for ann in _mod_annotations(member.modifiers):
            _stamp(ann, kind, None, member.start, eligible=True)
        for tp in member.type_params:
            _visit_type_param(tp, in_anon)
        if member.return_type is not None:
            _visit_type(member.return_type, "other", in_anon)
        for param in member.params:
            _visit_param(param, in_anon)
        for dim in member.extra_dims:
            _visit_dim(dim)
        for t in member.throws:
            _visit_type(t, "throws", in_anon)
        if member.body is not None:
            _visit_stmt(member.body, in_anon)
    elif isinstance(member, N.InitBlock):
        _visit_stmt(member.body, in_anon)


def _visit_param(param: N.Param, in_anon: bool) -> None:
    eligible = not in_anon and not param.is_receiver and not param.is_var_type
    note = ""
    if in_anon:
        note = "parameter inside anonymous class body"
    elif param.is_receiver:
        note = "receiver parameter"
    elif param.is_var_type:
        note = "var-typed parameter"
    for ann in _mod_annotations(param.modifiers):
        _stamp(ann, "PARAMETER", None, param.start, eligible=eligible, note=note)
    if param.type is not None:
        _visit_type(param.type, "other", in_anon)
    for ann in param.vararg_annotations:
        _stamp(ann, "TYPE_USE", "VARARG", param.vararg_group_start, eligible=True)
    for dim in param.extra_dims:
        _visit_dim(dim)


def _visit_declarator(decl: N.VarDeclarator, in_anon: bool) -> None:
    for dim in decl.extra_dims:
        _visit_dim(dim)
    if decl.init is not None:
        _visit_expr(decl.init, in_anon)


def _visit_dim(dim: N.Dim) -> None:
    for ann in dim.annotations:
        _stamp(ann, "TYPE_USE", "ARRAY_DIMENSION", dim.start, eligible=True)


_FIRST_SEGMENT_CONTEXTS = {
    "type_arg": "GENERIC_ARGUMENT",
    "cast": "CAST",
    "throws": "THROWS",
    "mref": "METHOD_REFERENCE_QUALIFIER",
}


def _visit_type(t: N.TypeNode | None, context: str, in_anon: bool) -> None:
    if t is None:
        return
    if isinstance(t, N.ArrayType):
        for dim in t.dims:
            _visit_dim(dim)
        _visit_type(t.element, context, in_anon)
        return
    if isinstance(t, N.PrimitiveType):
        _classify_leading(t.annotations, context, t.start, multi_segment=False)
        return
    if isinstance(t, N.UnionType):
        for alt in t.alternatives:
            _visit_type(alt, "other", in_anon)
        return
    if isinstance(t, (N.VarType,)):
        return
    assert isinstance(t, N.ClassType)
    segments = t.segments
    multi = len(segments) > 1
    _classify_leading(segments[0].annotations, context, t.start, multi_segment=multi)
    for idx, seg in enumerate(segments):
        if idx > 0:
            for ann in seg.annotations:
                if idx == len(segments) - 1 and not t.from_name_chain:
                    _stamp(ann, "TYPE_USE", "QUALIFIED_NAME_SEGMENT", seg.start,
                           eligible=True)
                else:
                    _stamp(ann, "TYPE_USE", None, seg.start, eligible=False,
                           note="annotation on a name position, not a type use")
        for arg in seg.type_args or []:
            if isinstance(arg, N.Wildcard):
                for ann in arg.annotations:
                    _stamp(ann, "TYPE_USE", "GENERIC_ARGUMENT", arg.start, eligible=True)
                if arg.bound is not None:
                    _visit_type(arg.bound, "other", in_anon)
            else:
                _visit_type(arg, "type_arg", in_anon)


def _classify_leading(anns: list[N.Annotation], context: str, owner_start: int,
                      multi_segment: bool) -> None:
    if not anns:
        return
    # A method-reference qualifier may be annotated as a whole even when its
    # name is qualified; other type contexts require a simple name.
    if context == "mref":
        for ann in anns:
            _stamp(ann, "TYPE_USE", "METHOD_REFERENCE_QUALIFIER", owner_start,
                   eligible=True)
        return
    if multi_segment:
        for ann in anns:
            _stamp(ann, "TYPE_USE", None, owner_start, eligible=False,
                   note="annotation before a qualified name")
        return
    subkind = _FIRST_SEGMENT_CONTEXTS.get(context)
    for ann in anns:
        if subkind is None:
            _stamp(ann, "TYPE_USE", None, owner_start, eligible=False,
                   note=f"type-use position {context!r} not supported")
        else:
            _stamp(ann, "TYPE_USE", subkind, owner_start, eligible=True)


def _visit_stmt(stmt: N.Stmt, in_anon: bool) -> None:
    if isinstance(stmt, N.Block):
        for s in stmt.statements:
            _visit_stmt(s, in_anon)
    elif isinstance(stmt, N.LocalVarDecl):
        eligible = not in_anon and not isinstance(stmt.type, N.VarType)
        note = ""
        if in_anon:
            note = "local inside anonymous class body"
        elif isinstance(stmt.type, N.VarType):
            note = "var-typed local"
        for ann in _mod_annotations(stmt.modifiers):
            _stamp(ann, "LOCAL_VARIABLE", None, stmt.start, eligible=eligible, note=note)
        _visit_type(stmt.type, "other", in_anon)
        for decl in stmt.declarators:
            _visit_declarator(decl, in_anon)
    elif isinstance(stmt, N.LocalTypeDeclStmt):
        _visit_type_decl(stmt.decl, in_anon)
    elif isinstance(stmt, N.ExprStmt):
        _visit_expr(stmt.expr, in_anon)
    elif isinstance(stmt, N.IfStmt):
        _visit_expr(stmt.cond, in_anon)
        _visit_stmt(stmt.then, in_anon)
        if stmt.orelse is not None:
            _visit_stmt(stmt.orelse, in_anon)
    elif isinstance(stmt, N.WhileStmt):
        _visit_expr(stmt.cond, in_anon)
        _visit_stmt(stmt.body, in_anon)
    elif isinstance(stmt, N.DoWhileStmt):
        _visit_stmt(stmt.body, in_anon)
        _visit_expr(stmt.cond, in_anon)
    elif isinstance(stmt, N.BasicForStmt):
        for s in stmt.init:
            _visit_stmt(s, in_anon)
        if stmt.cond is not None:
            _visit_expr(stmt.cond, in_anon)
        for e in stmt.update:
            _visit_expr(e, in_anon)
        _visit_stmt(stmt.body, in_anon)
    elif isinstance(stmt, N.EnhancedForStmt):
        _visit_stmt(stmt.var, in_anon)
        _visit_expr(stmt.iterable, in_anon)
        _visit_stmt(stmt.body, in_anon)
    elif isinstance(stmt, N.TryStmt):
        for res in stmt.resources:
            _visit_stmt(res, in_anon)
        _visit_stmt(stmt.body, in_anon)
        for catch in stmt.catches:
            eligible = not in_anon
            for ann in _mod_annotations(catch.modifiers):
                _stamp(ann, "PARAMETER", None, catch.param_start, eligible=eligible,
                       note="" if eligible else "catch parameter inside anonymous body")
            for t in catch.types:
                _visit_type(t, "other", in_anon)
            _visit_stmt(catch.body, in_anon)
        if stmt.finally_block is not None:
            _visit_stmt(stmt.finally_block, in_anon)
    elif isinstance(stmt, N.SwitchNode):
        _visit_switch(stmt, in_anon)
    elif isinstance(stmt, N.ReturnStmt):
        if stmt.value is not None:
            _visit_expr(stmt.value, in_anon)
    elif isinstance(stmt, N.ThrowStmt):
        _visit_expr(stmt.value, in_anon)
    elif isinstance(stmt, N.SynchronizedStmt):
        _visit_expr(stmt.lock, in_anon)
        _visit_stmt(stmt.body, in_anon)
    elif isinstance(stmt, N.LabeledStmt):
        _visit_stmt(stmt.body, in_anon)
    elif isinstance(stmt, N.AssertStmt):
        _visit_expr(stmt.cond, in_anon)
        if stmt.message is not None:
            _visit_expr(stmt.message, in_anon)
    elif isinstance(stmt, N.YieldStmt):
        _visit_expr(stmt.value, in_anon)
    # Break/Continue/Empty carry nothing


def _visit_switch(node: N.SwitchNode, in_anon: bool) -> None:
    _visit_expr(node.selector, in_anon)
    for group in node.groups:
        for label in group.labels:
            for e in label.exprs:
                _visit_expr(e, in_anon)
        for s in group.body:
            _visit_stmt(s, in_anon)


def _visit_expr(expr: N.Expr, in_anon: bool) -> None:
    if isinstance(expr, (N.Literal, N.NameExpr, N.ClassLiteral, N.ThisExpr, N.SuperExpr)):
        return
    if isinstance(expr, N.FieldAccess):
        _visit_expr(expr.obj, in_anon)
    elif isinstance(expr, N.ArrayAccess):
        _visit_expr(expr.array, in_anon)
        _visit_expr(expr.index, in_anon)
    elif isinstance(expr, N.Call):
        if expr.target is not None:
            _visit_expr(expr.target, in_anon)
        for arg in expr.args:
            _visit_expr(arg, in_anon)
    elif isinstance(expr, N.MethodRef):
        if expr.qualifier_is_type:
            _visit_type(expr.qualifier, "mref", in_anon)
        else:
            _visit_expr(expr.qualifier, in_anon)
    elif isinstance(expr, N.NewObject):
        if expr.outer is not None:
            _visit_expr(expr.outer, in_anon)
        _visit_type(expr.type, "other", in_anon)
        for arg in expr.args:
            _visit_expr(arg, in_anon)
        if expr.body is not None:
            for member in expr.body:
                _visit_member(member, in_anon=True)
    elif isinstance(expr, N.NewArray):
        _visit_type(expr.element, "other", in_anon)
        for dim in expr.sized_dims + expr.extra_dims:
            _visit_dim(dim)
        for size in expr.sizes:
            _visit_expr(size, in_anon)
        if expr.initializer is not None:
            _visit_expr(expr.initializer, in_anon)
    elif isinstance(expr, N.ArrayInit):
        for e in expr.elements:
            _visit_expr(e, in_anon)
    elif isinstance(expr, N.Lambda):
        for param in expr.params:
            _visit_param(param, in_anon)
        if isinstance(expr.body, N.Block):
            _visit_stmt(expr.body, in_anon)
        else:
            _visit_expr(expr.body, in_anon)
    elif isinstance(expr, N.Assign):
        _visit_expr(expr.target, in_anon)
        _visit_expr(expr.value, in_anon)
    elif isinstance(expr, N.Ternary):
        _visit_expr(expr.cond, in_anon)
        _visit_expr(expr.then, in_anon)
        _visit_expr(expr.orelse, in_anon)
    elif isinstance(expr, N.Binary):
        _visit_expr(expr.left, in_anon)
        _visit_expr(expr.right, in_anon)
    elif isinstance(expr, N.InstanceOf):
        _visit_expr(expr.value, in_anon)
        _visit_type(expr.type, "other", in_anon)
    elif isinstance(expr, N.Cast):
        for idx, t in enumerate(expr.types):
            _visit_type(t, "cast" if idx == 0 else "other", in_anon)
        _visit_expr(expr.value, in_anon)
    elif isinstance(expr, N.Unary):
        _visit_expr(expr.operand, in_anon)
    elif isinstance(expr, N.Paren):
        _visit_expr(expr.inner, in_anon)
    elif isinstance(expr, N.SwitchNode):
        _visit_switch(expr, in_anon)


def find_annotation_at(unit: N.CompilationUnitNode, start: int,
                       simple_name: str) -> N.Annotation | None:
    """Locate the annotation node starting at `start` with the given simple name."""
    for node in N.walk(unit):
        if isinstance(node, N.Annotation) and node.start == start \
                and node.simple_name == simple_name:
            return node
    return None
