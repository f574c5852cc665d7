"""Syntax tree node types. Every node records its [start, end) character span.

Declaration nodes start at their first modifier or annotation token; type
nodes start at their leading type annotations. That convention makes a node's
`start` the canonical injection anchor for anything annotatable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass
class Node:
    start: int
    end: int


@dataclass
class Annotation(Node):
    name: str                      # dotted source text of the name
    args_present: bool = False
    # attachment, stamped after parsing by attach.assign_attachments
    attach_kind: Optional[str] = None      # ElementKind value name or None
    attach_subkind: Optional[str] = None   # TYPE_USE subkind or None
    owner_start: int = -1
    eligible: bool = False
    note: str = ""

    @property
    def simple_name(self) -> str:
        return self.name.rsplit(".", 1)[-1]


@dataclass
class Modifier(Node):
    text: str


ModLike = Union[Annotation, Modifier]


# ---------------------------------------------------------------- types

@dataclass
class PrimitiveType(Node):
    name: str
    annotations: list[Annotation] = field(default_factory=list)


@dataclass
class TypeSegment(Node):
    name: str
    annotations: list[Annotation] = field(default_factory=list)
    type_args: Optional[list["TypeArg"]] = None   # None = no <...> present


@dataclass
class ClassType(Node):
    segments: list[TypeSegment] = field(default_factory=list)
    # True when rebuilt from a dotted-name expression (method-ref qualifiers);
    # such names cannot legally carry mid-name annotations in expression position.
    from_name_chain: bool = False


@dataclass
class Wildcard(Node):
    annotations: list[Annotation] = field(default_factory=list)
    bound_kind: Optional[str] = None   # "extends" | "super"
    bound: Optional["TypeNode"] = None


TypeArg = Union["TypeNode", Wildcard]


@dataclass
class Dim(Node):
    """One array dimension `[]`, possibly annotated; start covers annotations."""
    annotations: list[Annotation] = field(default_factory=list)


@dataclass
class ArrayType(Node):
    element: "TypeNode" = None  # type: ignore[assignment]
    dims: list[Dim] = field(default_factory=list)


@dataclass
class VarType(Node):
    """The contextual `var` in a local declaration."""


@dataclass
class UnionType(Node):
    alternatives: list["TypeNode"] = field(default_factory=list)


TypeNode = Union[PrimitiveType, ClassType, ArrayType, VarType, UnionType]


# ---------------------------------------------------------------- declarations

@dataclass
class PackageDecl(Node):
    annotations: list[Annotation]
    name: str


@dataclass
class ImportDecl(Node):
    is_static: bool
    name: str
    on_demand: bool


@dataclass
class ModuleDecl(Node):
    annotations: list[Annotation]
    is_open: bool
    name: str
    directives: list[str]


@dataclass
class TypeParam(Node):
    annotations: list[Annotation]
    name: str
    bounds: list[TypeNode]


@dataclass
class RecordComponent(Node):
    annotations: list[Annotation]
    type: TypeNode
    name: str
    is_vararg: bool = False


@dataclass
class EnumConstant(Node):
    annotations: list[Annotation]
    name: str
    args: Optional[list["Expr"]]
    body: Optional[list["Member"]]


@dataclass
class TypeDecl(Node):
    decl_kind: str                 # class | interface | enum | record | annotation
    modifiers: list[ModLike]
    name: str
    type_params: list[TypeParam]
    extends: list[TypeNode]
    implements: list[TypeNode]
    permits: list[TypeNode]
    components: list[RecordComponent]      # records only
    enum_constants: list[EnumConstant]     # enums only
    members: list["Member"]
    is_local: bool = False
    body_open: int = -1            # offset of the body's '{'


@dataclass
class VarDeclarator(Node):
    name: str
    extra_dims: list[Dim]
    init: Optional["Expr"]


@dataclass
class FieldDecl(Node):
    modifiers: list[ModLike]
    type: TypeNode
    declarators: list[VarDeclarator]


@dataclass
class Param(Node):
    modifiers: list[ModLike]
    type: Optional[TypeNode]      # None for implicit lambda params
    name: str
    extra_dims: list[Dim] = field(default_factory=list)
    is_vararg: bool = False
    vararg_annotations: list[Annotation] = field(default_factory=list)
    vararg_group_start: int = -1   # start of annotations+`...`; -1 if not vararg
    is_receiver: bool = False
    is_var_type: bool = False


@dataclass
class MethodDecl(Node):
    modifiers: list[ModLike]
    type_params: list[TypeParam]
    return_type: Optional[TypeNode]     # None for constructors
    name: str
    params: list[Param]
    extra_dims: list[Dim]
    throws: list[TypeNode]
    body: Optional["Block"]
    is_ctor: bool = False
    is_compact_ctor: bool = False
    default_value_present: bool = False   # annotation-type members


@dataclass
class InitBlock(Node):
    is_static: bool
    body: "Block" = None  # type: ignore[assignment]


Member = Union[TypeDecl, FieldDecl, MethodDecl, InitBlock]


# ---------------------------------------------------------------- statements

@dataclass
class Block(Node):
    statements: list["Stmt"] = field(default_factory=list)


@dataclass
class LocalVarDecl(Node):
    modifiers: list[ModLike]
    type: TypeNode
    declarators: list[VarDeclarator]
    context: str = "block"     # block | for_init | foreach | resource


@dataclass
class LocalTypeDeclStmt(Node):
    decl: TypeDecl = None  # type: ignore[assignment]


@dataclass
class ExprStmt(Node):
    expr: "Expr" = None  # type: ignore[assignment]


@dataclass
class IfStmt(Node):
    cond: "Expr"
    then: "Stmt"
    orelse: Optional["Stmt"]


@dataclass
class WhileStmt(Node):
    cond: "Expr"
    body: "Stmt"


@dataclass
class DoWhileStmt(Node):
    body: "Stmt"
    cond: "Expr"


@dataclass
class BasicForStmt(Node):
    init: list["Stmt"]           # LocalVarDecl or ExprStmt entries
    cond: Optional["Expr"]
    update: list["Expr"]
    body: "Stmt"


@dataclass
class EnhancedForStmt(Node):
    var: LocalVarDecl
    iterable: "Expr"
    body: "Stmt"


@dataclass
class CatchClause(Node):
    modifiers: list[ModLike]
    types: list[TypeNode]
    name: str
    body: Block
    param_start: int = -1   # first token of the catch formal (after '(')


@dataclass
class TryStmt(Node):
    resources: list["Stmt"]      # LocalVarDecl or ExprStmt entries
    body: Block
    catches: list[CatchClause]
    finally_block: Optional[Block]


@dataclass
class SwitchLabel(Node):
    exprs: list["Expr"]          # empty for `default`
    is_default: bool


@dataclass
class SwitchGroup(Node):
    labels: list[SwitchLabel]
    arrow: bool
    body: list["Stmt"]


@dataclass
class SwitchNode(Node):
    selector: "Expr"
    groups: list[SwitchGroup]
    is_expr: bool


@dataclass
class ReturnStmt(Node):
    value: Optional["Expr"]


@dataclass
class ThrowStmt(Node):
    value: "Expr"


@dataclass
class SynchronizedStmt(Node):
    lock: "Expr"
    body: Block


@dataclass
class BreakStmt(Node):
    label: Optional[str]


@dataclass
class ContinueStmt(Node):
    label: Optional[str]


@dataclass
class LabeledStmt(Node):
    label: str
    body: "Stmt"


@dataclass
class AssertStmt(Node):
    cond: "Expr"
    message: Optional["Expr"]


@dataclass
class YieldStmt(Node):
    value: "Expr"


@dataclass
class EmptyStmt(Node):
    pass


Stmt = Union[
    Block, LocalVarDecl, LocalTypeDeclStmt, ExprStmt, IfStmt, WhileStmt,
    DoWhileStmt, BasicForStmt, EnhancedForStmt, TryStmt, SwitchNode,
    ReturnStmt, ThrowStmt, SynchronizedStmt, BreakStmt, ContinueStmt,
    LabeledStmt, AssertStmt, YieldStmt, EmptyStmt,
]


# ---------------------------------------------------------------- expressions

@dataclass
class Literal(Node):
    kind: str
    text: str


@dataclass
class NameExpr(Node):
    parts: list[str]
    part_spans: list[tuple[int, int]] = field(default_factory=list)


@dataclass
class FieldAccess(Node):
    obj: "Expr"
    name: str


@dataclass
class ArrayAccess(Node):
    array: "Expr"
    index: "Expr"


@dataclass
class Call(Node):
    target: Optional["Expr"]     # None = unqualified
    name: str
    args: list["Expr"]
    is_super_call: bool = False


@dataclass
class MethodRef(Node):
    qualifier: Union["Expr", TypeNode]
    qualifier_is_type: bool
    name: str                    # method name or "new"


@dataclass
class NewObject(Node):
    outer: Optional["Expr"]      # for qualified `expr.new Inner()`
    type: ClassType
    args: list["Expr"]
    body: Optional[list[Member]]


@dataclass
class NewArray(Node):
    element: TypeNode
    sized_dims: list[Dim]        # dims carrying a size expression
    sizes: list["Expr"]
    extra_dims: list[Dim]
    initializer: Optional["ArrayInit"]


@dataclass
class ArrayInit(Node):
    elements: list["Expr"]


@dataclass
class Lambda(Node):
    params: list[Param]
    body: Union[Block, "Expr"]


@dataclass
class Assign(Node):
    target: "Expr"
    op: str
    value: "Expr"


@dataclass
class Ternary(Node):
    cond: "Expr"
    then: "Expr"
    orelse: "Expr"


@dataclass
class Binary(Node):
    op: str
    left: "Expr"
    right: "Expr"


@dataclass
class InstanceOf(Node):
    value: "Expr"
    type: TypeNode
    binding: Optional[str]


@dataclass
class Cast(Node):
    types: list[TypeNode]        # >1 for intersection casts
    value: "Expr"


@dataclass
class Unary(Node):
    op: str
    operand: "Expr"
    prefix: bool


@dataclass
class ClassLiteral(Node):
    type_text: str               # e.g. "int[]", "a.b.C"


@dataclass
class ThisExpr(Node):
    qualifier: Optional[str]


@dataclass
class SuperExpr(Node):
    qualifier: Optional[str]


@dataclass
class Paren(Node):
    inner: "Expr"


Expr = Union[
    Literal, NameExpr, FieldAccess, ArrayAccess, Call, MethodRef, NewObject,
    NewArray, ArrayInit, Lambda, Assign, Ternary, Binary, InstanceOf, Cast,
    Unary, ClassLiteral, ThisExpr, SuperExpr, Paren, SwitchNode,
]


@dataclass
class CompilationUnitNode(Node):
    package: Optional[PackageDecl]
    imports: list[ImportDecl]
    types: list[TypeDecl]
    module: Optional[ModuleDecl]


def iter_child_nodes(node: Node):
    """Yield direct Node children, in syntactic order where it matters."""
    for value in vars(node).values():
        if isinstance(value, Node):
            yield value
        elif isinstance(value, list):
            for item in value:
                if isinstance(item, Node):
                    yield item


def walk(node: Node):
    """Pre-order traversal of the whole subtree, the node itself included."""
    stack = [node]
    while stack:
        cur = stack.pop()
        yield cur
        children = list(iter_child_nodes(cur))
        stack.extend(reversed(children))
