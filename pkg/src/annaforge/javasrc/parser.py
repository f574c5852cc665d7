"""Recursive-descent parser for Java up to language level 17.

Covers records, sealed types, switch expressions, instanceof patterns, text
blocks, type-use annotations (JSR 308 positions), and module/package-info
units. Annotations are consumed only in grammar positions where Java allows
them; this strictness is relied upon by the insertion-site oracle.

Disambiguation strategy: a handful of speculative parses (statement vs local
declaration, cast vs parenthesized expression, lambda parameter lists) using
token-index checkpoints. `>` arrives from the lexer as single tokens; shift
and shift-assign operators are reconstructed here from adjacency.
"""

from __future__ import annotations

from .lexer import PRIMITIVES, Token, lex
from . import nodes as N


class ParseError(Exception):
    def __init__(self, msg: str, offset: int, line: int):
        super().__init__(f"line {line}: {msg}")
        self.offset = offset
        self.line = line


class _Backtrack(Exception):
    """Internal: abort a speculative parse."""


_MODIFIER_KWS = frozenset("""
    public protected private static abstract final native synchronized
    transient volatile strictfp default
""".split())

# Tokens that may begin an expression (used by yield detection and cast checks).
_EXPR_START_OPS = frozenset({"(", "!", "~", "+", "-", "++", "--", "@"})
_EXPR_START_KWS = frozenset({"this", "super", "new", "switch", "true", "false", "null"}) | PRIMITIVES


def parse_compilation_unit(text: str, path: str = "<memory>") -> N.CompilationUnitNode:
    toks = lex(text)
    return _Parser(toks, path).parse_unit()


class _Parser:
    def __init__(self, toks: list[Token], path: str):
        self.toks = toks
        self.i = 0
        self.path = path
        self._spec = 0        # >0 while inside a speculative parse
        self._no_lambda = 0   # >0 while lambda interpretation is disabled

    # ------------------------------------------------------------ plumbing

    def cur(self) -> Token:
        return self.toks[self.i]

    def la(self, k: int = 1) -> Token:
        j = min(self.i + k, len(self.toks) - 1)
        return self.toks[j]

    def advance(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at_op(self, text: str) -> bool:
        return self.cur().is_op(text)

    def at_kw(self, text: str) -> bool:
        return self.cur().is_kw(text)

    def at_ident(self, text: str | None = None) -> bool:
        tok = self.cur()
        return tok.kind == "ident" and (text is None or tok.text == text)

    def fail(self, msg: str):
        if self._spec:
            raise _Backtrack()
        tok = self.cur()
        raise ParseError(f"{msg} (found {tok.text!r})", tok.start, tok.line)

    def expect_op(self, text: str) -> Token:
        if not self.at_op(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def expect_kw(self, text: str) -> Token:
        if not self.at_kw(text):
            self.fail(f"expected keyword {text!r}")
        return self.advance()

    def expect_ident(self) -> Token:
        if self.cur().kind != "ident":
            self.fail("expected identifier")
        return self.advance()

    def mark(self) -> int:
        return self.i

    def reset(self, mark: int) -> None:
        self.i = mark

    def speculate(self, fn, *args):
        """Run fn speculatively; on failure restore position and return None."""
        pos = self.mark()
        self._spec += 1
        try:
            return fn(*args)
        except _Backtrack:
            self.reset(pos)
            return None
        finally:
            self._spec -= 1

    # `>` adjacency: how many '>' tokens in a row with no gap, and whether an
    # adjacent '=' follows the run.
    def _gt_run(self) -> tuple[int, bool]:
        count = 0
        j = self.i
        while self.toks[j].is_op(">") and (count == 0 or self.toks[j].start == self.toks[j - 1].end):
            count += 1
            j += 1
        has_eq = (
            count > 0
            and self.toks[j].is_op("=")
            and self.toks[j].start == self.toks[j - 1].end
        )
        return count, has_eq

    # ------------------------------------------------------------ unit level

    def parse_unit(self) -> N.CompilationUnitNode:
        start = self.cur().start
        leading = self.parse_annotations()
        package = None
        module = None
        types: list[N.TypeDecl] = []
        imports: list[N.ImportDecl] = []
        pending_mods: list[N.ModLike] = list(leading)

        if self.at_kw("package"):
            pstart = leading[0].start if leading else self.cur().start
            self.advance()
            name = self._dotted_name()
            end = self.expect_op(";").end
            package = N.PackageDecl(pstart, end, list(leading), name)
            pending_mods = []

        while self.at_kw("import"):
            if pending_mods:
                self.fail("annotations are not allowed before imports")
            imports.append(self._parse_import())

        if self._at_module_start():
            module = self._parse_module(pending_mods)
            pending_mods = []
        else:
            while not self.cur().kind == "eof":
                if self.at_op(";") and not pending_mods:
                    self.advance()
                    continue
                mods = self.parse_modifiers(initial=pending_mods)
                pending_mods = []
                types.append(self.parse_type_decl(mods))

        if pending_mods:
            self.fail("dangling annotations at end of file")
        end = self.toks[-1].start
        return N.CompilationUnitNode(start, end, package, imports, types, module)

    def _at_module_start(self) -> bool:
        if self.at_ident("module") and self.la().kind == "ident":
            return True
        return self.at_ident("open") and self.la().kind == "ident" and self.la().text == "module"

    def _parse_import(self) -> N.ImportDecl:
        start = self.expect_kw("import").start
        is_static = False
        if self.at_kw("static"):
            is_static = True
            self.advance()
        parts = [self.expect_ident().text]
        on_demand = False
        while self.at_op("."):
            self.advance()
            if self.at_op("*"):
                self.advance()
                on_demand = True
                break
            parts.append(self.expect_ident().text)
        end = self.expect_op(";").end
        return N.ImportDecl(start, end, is_static, ".".join(parts), on_demand)

    def _parse_module(self, annotations: list[N.ModLike]) -> N.ModuleDecl:
        anns = [a for a in annotations if isinstance(a, N.Annotation)]
        start = anns[0].start if anns else self.cur().start
        is_open = False
        if self.at_ident("open"):
            is_open = True
            self.advance()
        self.advance()  # 'module'
        name = self._dotted_name()
        self.expect_op("{")
        directives = []
        while not self.at_op("}"):
            words = []
            while not self.at_op(";"):
                if self.cur().kind == "eof":
                    self.fail("unterminated module body")
                words.append(self.advance().text)
            self.expect_op(";")
            directives.append(" ".join(words))
        end = self.expect_op("}").end
        return N.ModuleDecl(start, end, anns, is_open, name, directives)

    def _dotted_name(self) -> str:
        parts = [self.expect_ident().text]
        while self.at_op(".") and self.la().kind == "ident":
            self.advance()
            parts.append(self.expect_ident().text)
        return ".".join(parts)

    # ------------------------------------------------------------ annotations

    def parse_annotations(self) -> list[N.Annotation]:
        out = []
        while self.at_op("@") and not self.la().is_kw("interface"):
            out.append(self.parse_annotation())
        return out

    def parse_annotation(self) -> N.Annotation:
        start = self.expect_op("@").start
        name = self._dotted_name()
        end = self.toks[self.i - 1].end
        args_present = False
        if self.at_op("("):
            args_present = True
            depth = 0
            while True:
                tok = self.cur()
                if tok.kind == "eof":
                    self.fail("unterminated annotation arguments")
                if tok.is_op("("):
                    depth += 1
                elif tok.is_op(")"):
                    depth -= 1
                    if depth == 0:
                        end = self.advance().end
                        break
                self.advance()
        return N.Annotation(start, end, name, args_present)

    # ------------------------------------------------------------ modifiers

    def parse_modifiers(self, initial: list[N.ModLike] | None = None) -> list[N.ModLike]:
        mods: list[N.ModLike] = list(initial or [])
        while True:
            tok = self.cur()
            if tok.is_op("@") and not self.la().is_kw("interface"):
                mods.append(self.parse_annotation())
                continue
            if tok.kind == "keyword" and tok.text in _MODIFIER_KWS:
                self.advance()
                mods.append(N.Modifier(tok.start, tok.end, tok.text))
                continue
            if tok.kind == "ident" and tok.text == "sealed" and self._sealed_context():
                self.advance()
                mods.append(N.Modifier(tok.start, tok.end, "sealed"))
                continue
            if (tok.kind == "ident" and tok.text == "non"
                    and self.la().is_op("-") and self.la().start == tok.end
                    and self.la(2).kind == "ident" and self.la(2).text == "sealed"
                    and self.la(2).start == self.la().end):
                end = self.la(2).end
                self.advance(); self.advance(); self.advance()
                mods.append(N.Modifier(tok.start, end, "non-sealed"))
                continue
            break
        return mods

    def _sealed_context(self) -> bool:
        nxt = self.la()
        if nxt.kind == "keyword" and nxt.text in (
                "class", "interface", "abstract", "static", "final", "strictfp",
                "public", "private", "protected"):
            return True
        return nxt.kind == "ident" and nxt.text == "record"

    # ------------------------------------------------------------ type decls

    def _at_type_decl_start(self) -> bool:
        if self.at_kw("class") or self.at_kw("interface") or self.at_kw("enum"):
            return True
        if self.at_op("@") and self.la().is_kw("interface"):
            return True
        return self.at_ident("record") and self.la().kind == "ident" and (
            self.la(2).is_op("(") or self.la(2).is_op("<"))

    def parse_type_decl(self, mods: list[N.ModLike], is_local: bool = False) -> N.TypeDecl:
        start = mods[0].start if mods else self.cur().start
        if self.at_op("@") and self.la().is_kw("interface"):
            self.advance(); self.advance()
            decl_kind = "annotation"
        elif self.at_kw("class"):
            self.advance()
            decl_kind = "class"
        elif self.at_kw("interface"):
            self.advance()
            decl_kind = "interface"
        elif self.at_kw("enum"):
            self.advance()
            decl_kind = "enum"
        elif self.at_ident("record"):
            self.advance()
            decl_kind = "record"
        else:
            self.fail("expected a type declaration")
            raise AssertionError
        name = self.expect_ident().text
        type_params = self.parse_type_params() if self.at_op("<") else []

        components: list[N.RecordComponent] = []
        if decl_kind == "record":
            components = self._parse_record_components()

        extends: list[N.TypeNode] = []
        implements: list[N.TypeNode] = []
        permits: list[N.TypeNode] = []
        if self.at_kw("extends"):
            self.advance()
            extends.append(self.parse_type())
            while decl_kind == "interface" and self.at_op(","):
                self.advance()
                extends.append(self.parse_type())
        if self.at_kw("implements"):
            self.advance()
            implements.append(self.parse_type())
            while self.at_op(","):
                self.advance()
                implements.append(self.parse_type())
        if self.at_ident("permits"):
            # permitted subtypes are type names, not annotatable type uses
            self.advance()
            permits.append(self._mark_name_position(self.parse_type()))
            while self.at_op(","):
                self.advance()
                permits.append(self._mark_name_position(self.parse_type()))

        enum_constants: list[N.EnumConstant] = []
        members: list[N.Member] = []
        body_open = self.expect_op("{").start
        if decl_kind == "enum":
            enum_constants = self._parse_enum_constants()
            if self.at_op(";"):
                self.advance()
                members = self._parse_members(name)
        else:
            members = self._parse_members(name)
        end = self.expect_op("}").end
        return N.TypeDecl(start, end, decl_kind, mods, name, type_params, extends,
                          implements, permits, components, enum_constants, members,
                          is_local=is_local, body_open=body_open)

    def _parse_record_components(self) -> list[N.RecordComponent]:
        self.expect_op("(")
        comps = []
        while not self.at_op(")"):
            anns = self.parse_annotations()
            start = anns[0].start if anns else self.cur().start
            ctype = self.parse_type(annotations_pre=[])
            is_vararg = False
            if self.at_op("..."):
                self.advance()
                is_vararg = True
            name_tok = self.expect_ident()
            comps.append(N.RecordComponent(start, name_tok.end, anns, ctype,
                                           name_tok.text, is_vararg))
            if self.at_op(","):
                self.advance()
        self.expect_op(")")
        return comps

    def _parse_enum_constants(self) -> list[N.EnumConstant]:
        constants = []
        while not (self.at_op(";") or self.at_op("}")):
            anns = self.parse_annotations()
            start = anns[0].start if anns else self.cur().start
            name_tok = self.expect_ident()
            end = name_tok.end
            args = None
            if self.at_op("("):
                self.advance()
                args = self._parse_arg_list()
                end = self.expect_op(")").end
            body = None
            if self.at_op("{"):
                self.advance()
                body = self._parse_members("<anonymous>")
                end = self.expect_op("}").end
            constants.append(N.EnumConstant(start, end, anns, name_tok.text, args, body))
            if self.at_op(","):
                self.advance()
            else:
                break
        return constants

    def _parse_members(self, type_name: str) -> list[N.Member]:
        members: list[N.Member] = []
        while not (self.at_op("}") or self.cur().kind == "eof"):
            if self.at_op(";"):
                self.advance()
                continue
            members.append(self._parse_member(type_name))
        return members

    def _parse_member(self, type_name: str) -> N.Member:
        mods = self.parse_modifiers()
        start = mods[0].start if mods else self.cur().start

        if self.at_op("{"):
            is_static = any(isinstance(m, N.Modifier) and m.text == "static" for m in mods)
            body = self.parse_block()
            return N.InitBlock(start, body.end, is_static, body)

        if self._at_type_decl_start():
            return self.parse_type_decl(mods)

        type_params = self.parse_type_params() if self.at_op("<") else []

        # compact constructor in records: `Name {`
        if self.at_ident(type_name) and self.la().is_op("{"):
            self.advance()
            body = self.parse_block()
            return N.MethodDecl(start, body.end, mods, type_params, None, type_name,
                                [], [], [], body, is_ctor=True, is_compact_ctor=True)

        # constructor: identifier directly followed by '('
        if self.cur().kind == "ident" and self.la().is_op("("):
            name = self.advance().text
            return self._finish_method(start, mods, type_params, None, name)

        rtype: N.TypeNode | None
        if self.at_kw("void"):
            tok = self.advance()
            rtype = N.PrimitiveType(tok.start, tok.end, "void")
        else:
            rtype = self.parse_type(annotations_pre=[])
        name = self.expect_ident().text
        if self.at_op("("):
            return self._finish_method(start, mods, type_params, rtype, name)
        if type_params:
            self.fail("type parameters on a field declaration")
        declarators = self._parse_declarators(name)
        end = self.expect_op(";").end
        return N.FieldDecl(start, end, mods, rtype, declarators)

    def _finish_method(self, start: int, mods, type_params, rtype,
                       name: str) -> N.MethodDecl:
        params = self._parse_params()
        extra_dims = self.parse_dims()
        throws: list[N.TypeNode] = []
        if self.at_kw("throws"):
            self.advance()
            throws.append(self.parse_type())
            while self.at_op(","):
                self.advance()
                throws.append(self.parse_type())
        default_present = False
        if self.at_kw("default"):
            self.advance()
            self._parse_element_value()
            default_present = True
        body = None
        if self.at_op("{"):
            body = self.parse_block()
            end = body.end
        else:
            end = self.expect_op(";").end
        return N.MethodDecl(start, end, mods, type_params, rtype, name, params,
                            extra_dims, throws, body, is_ctor=rtype is None,
                            default_value_present=default_present)

    def _parse_element_value(self):
        if self.at_op("@"):
            return self.parse_annotation()
        if self.at_op("{"):
            start = self.advance().start
            elems = []
            while not self.at_op("}"):
                elems.append(self._parse_element_value())
                if self.at_op(","):
                    self.advance()
            end = self.expect_op("}").end
            return N.ArrayInit(start, end, elems)
        self._no_lambda += 1
        try:
            return self.parse_ternary()
        finally:
            self._no_lambda -= 1

    def _parse_params(self) -> list[N.Param]:
        self.expect_op("(")
        params: list[N.Param] = []
        first = True
        while not self.at_op(")"):
            if not first:
                self.expect_op(",")
            param = None
            if first:
                param = self.speculate(self._parse_receiver_param)
            if param is None:
                param = self._parse_formal_param()
            params.append(param)
            first = False
        self.expect_op(")")
        return params

    def _parse_receiver_param(self) -> N.Param:
        anns = self.parse_annotations()
        start = anns[0].start if anns else self.cur().start
        ptype = self.parse_type(annotations_pre=anns)
        if self.at_kw("this"):
            end = self.advance().end
            return N.Param(start, end, [], ptype, "this", is_receiver=True)
        if self.at_op(".") and self.la().is_kw("this"):
            self.advance()
            end = self.advance().end
            return N.Param(start, end, [], ptype, "this", is_receiver=True)
        self.fail("not a receiver parameter")
        raise AssertionError

    def _parse_formal_param(self) -> N.Param:
        mods = self.parse_modifiers()
        start = mods[0].start if mods else self.cur().start
        is_var = False
        if self.at_ident("var") and self.la().kind == "ident":
            tok = self.advance()
            ptype: N.TypeNode = N.VarType(tok.start, tok.end)
            is_var = True
        else:
            ptype = self.parse_type(annotations_pre=[])
        vararg_annotations: list[N.Annotation] = []
        is_vararg = False
        vararg_group_start = -1
        probe = self.mark()
        anns = self.parse_annotations()
        if self.at_op("..."):
            dots = self.advance()
            is_vararg = True
            vararg_annotations = anns
            vararg_group_start = anns[0].start if anns else dots.start
        else:
            self.reset(probe)
        name_tok = self.expect_ident()
        extra_dims = self.parse_dims()
        end = extra_dims[-1].end if extra_dims else name_tok.end
        return N.Param(start, end, mods, ptype, name_tok.text, extra_dims,
                       is_vararg, vararg_annotations, vararg_group_start,
                       is_var_type=is_var)

    def _parse_declarators(self, first_name: str) -> list[N.VarDeclarator]:
        declarators = []
        name = first_name
        name_end = self.toks[self.i - 1].end
        name_start = self.toks[self.i - 1].start
        while True:
            dims = self.parse_dims()
            init = None
            end = dims[-1].end if dims else name_end
            if self.at_op("="):
                self.advance()
                init = self._parse_var_init()
                init_any: N.Node = init
                end = init_any.end
            declarators.append(N.VarDeclarator(name_start, end, name, dims, init))
            if self.at_op(","):
                self.advance()
                tok = self.expect_ident()
                name, name_start, name_end = tok.text, tok.start, tok.end
            else:
                break
        return declarators

    def _parse_var_init(self):
        if self.at_op("{"):
            return self._parse_array_init()
        return self.parse_expression()

    def _parse_array_init(self) -> N.ArrayInit:
        start = self.expect_op("{").start
        elems = []
        while not self.at_op("}"):
            elems.append(self._parse_var_init())
            if self.at_op(","):
                self.advance()
            else:
                break
        end = self.expect_op("}").end
        return N.ArrayInit(start, end, elems)

    # ------------------------------------------------------------ type params & types

    def parse_type_params(self) -> list[N.TypeParam]:
        self.expect_op("<")
        params = []
        while True:
            anns = self.parse_annotations()
            start = anns[0].start if anns else self.cur().start
            name_tok = self.expect_ident()
            bounds: list[N.TypeNode] = []
            end = name_tok.end
            if self.at_kw("extends"):
                self.advance()
                bounds.append(self.parse_type())
                while self.at_op("&"):
                    self.advance()
                    bounds.append(self.parse_type())
                end = bounds[-1].end
            params.append(N.TypeParam(start, end, anns, name_tok.text, bounds))
            if self.at_op(","):
                self.advance()
            else:
                break
        self.expect_op(">")
        return params

    def parse_type_args(self) -> list[N.TypeArg]:
        self.expect_op("<")
        args: list[N.TypeArg] = []
        if self.at_op(">"):      # diamond
            self.advance()
            return args
        while True:
            anns = self.parse_annotations()
            if self.at_op("?"):
                qtok = self.advance()
                start = anns[0].start if anns else qtok.start
                bound_kind = None
                bound = None
                end = qtok.end
                if self.at_kw("extends") or self.at_kw("super"):
                    bound_kind = self.advance().text
                    bound = self.parse_type()
                    end = bound.end
                args.append(N.Wildcard(start, end, anns, bound_kind, bound))
            else:
                args.append(self.parse_type(annotations_pre=anns))
            if self.at_op(","):
                self.advance()
            else:
                break
        self.expect_op(">")
        return args

    def parse_type(self, annotations_pre: list[N.Annotation] | None = None) -> N.TypeNode:
        anns = self.parse_annotations() if annotations_pre is None else list(annotations_pre)
        start = anns[0].start if anns else self.cur().start
        base: N.TypeNode
        tok = self.cur()
        if tok.kind == "keyword" and tok.text in PRIMITIVES:
            self.advance()
            base = N.PrimitiveType(start, tok.end, tok.text, anns)
        elif tok.kind == "ident":
            base = self._parse_class_type(anns, start)
        else:
            self.fail("expected a type")
            raise AssertionError
        dims = self.parse_dims()
        if dims:
            return N.ArrayType(start, dims[-1].end, base, dims)
        return base

    def _parse_class_type(self, first_anns: list[N.Annotation], start: int) -> N.ClassType:
        segments = []
        name_tok = self.expect_ident()
        seg_args = self._maybe_type_args()
        seg_end = self.toks[self.i - 1].end
        segments.append(N.TypeSegment(start, seg_end, name_tok.text, first_anns, seg_args))
        while self.at_op(".") and (self.la().kind == "ident"
                                   or (self.la().is_op("@") and not self.la(2).is_kw("interface"))):
            self.advance()
            anns = self.parse_annotations()
            seg_start = anns[0].start if anns else self.cur().start
            name_tok = self.expect_ident()
            seg_args = self._maybe_type_args()
            seg_end = self.toks[self.i - 1].end
            segments.append(N.TypeSegment(seg_start, seg_end, name_tok.text, anns, seg_args))
        return N.ClassType(start, segments[-1].end, segments)

    def _maybe_type_args(self) -> list[N.TypeArg] | None:
        if not self.at_op("<"):
            return None
        return self.parse_type_args()

    def _mark_name_position(self, t: N.TypeNode) -> N.TypeNode:
        if isinstance(t, N.ClassType):
            t.from_name_chain = True
        return t

    def parse_dims(self) -> list[N.Dim]:
        dims = []
        while True:
            probe = self.mark()
            anns = self.parse_annotations()
            if self.at_op("[") and self.la().is_op("]"):
                lb = self.advance()
                rb = self.advance()
                start = anns[0].start if anns else lb.start
                dims.append(N.Dim(start, rb.end, anns))
            else:
                self.reset(probe)
                break
        return dims

    # ------------------------------------------------------------ statements

    def parse_block(self) -> N.Block:
        start = self.expect_op("{").start
        stmts = []
        while not self.at_op("}"):
            if self.cur().kind == "eof":
                self.fail("unterminated block")
            stmts.append(self.parse_statement())
        end = self.expect_op("}").end
        return N.Block(start, end, stmts)

    def parse_statement(self) -> N.Stmt:
        tok = self.cur()
        if tok.is_op("{"):
            return self.parse_block()
        if tok.is_op(";"):
            self.advance()
            return N.EmptyStmt(tok.start, tok.end)
        if tok.kind == "keyword":
            handler = {
                "if": self._parse_if, "while": self._parse_while, "do": self._parse_do,
                "for": self._parse_for, "try": self._parse_try,
                "return": self._parse_return, "throw": self._parse_throw,
                "synchronized": self._parse_synchronized, "break": self._parse_break,
                "continue": self._parse_continue, "assert": self._parse_assert,
            }.get(tok.text)
            if handler:
                return handler()
            if tok.text == "switch":
                return self._parse_switch(is_expr=False)
            if tok.text in ("class", "interface", "enum"):
                decl = self.parse_type_decl([], is_local=True)
                return N.LocalTypeDeclStmt(decl.start, decl.end, decl)
            if tok.text in ("final",) or tok.text in _MODIFIER_KWS:
                mods = self.parse_modifiers()
                if self._at_type_decl_start():
                    decl = self.parse_type_decl(mods, is_local=True)
                    return N.LocalTypeDeclStmt(decl.start, decl.end, decl)
                return self._parse_local_var_decl(mods)
            if tok.text in PRIMITIVES:
                # `int.class` starts an expression; `int x` starts a declaration
                if self.la().is_op("."):
                    return self._parse_expr_statement()
                return self._parse_local_var_decl([])
        if tok.is_op("@"):
            mods = self.parse_modifiers()
            if self._at_type_decl_start():
                decl = self.parse_type_decl(mods, is_local=True)
                return N.LocalTypeDeclStmt(decl.start, decl.end, decl)
            return self._parse_local_var_decl(mods)
        if self._at_type_decl_start():
            decl = self.parse_type_decl([], is_local=True)
            return N.LocalTypeDeclStmt(decl.start, decl.end, decl)
        if tok.kind == "ident":
            if self.la().is_op(":") and not self.la().is_op("::"):
                label = self.advance().text
                self.advance()
                body = self.parse_statement()
                return N.LabeledStmt(tok.start, body.end, label, body)
            if tok.text == "yield" and self._starts_expression(self.la()):
                self.advance()
                value = self.parse_expression()
                end = self.expect_op(";").end
                return N.YieldStmt(tok.start, end, value)
            if tok.text == "var" and self.la().kind == "ident":
                return self._parse_local_var_decl([])
        if self._looks_like_local_decl():
            return self._parse_local_var_decl([])
        return self._parse_expr_statement()

    def _starts_expression(self, tok: Token) -> bool:
        if tok.kind in ("ident", "int", "float", "char", "string", "textblock"):
            return True
        if tok.kind == "keyword":
            return tok.text in _EXPR_START_KWS
        return tok.kind == "op" and tok.text in _EXPR_START_OPS

    def _looks_like_local_decl(self) -> bool:
        def probe():
            self.parse_type(annotations_pre=[])
            if self.cur().kind != "ident":
                raise _Backtrack()
            self.advance()
            if not (self.at_op("=") or self.at_op(";") or self.at_op(",")
                    or (self.at_op("[") and self.la().is_op("]"))):
                raise _Backtrack()
            return True
        pos = self.mark()
        ok = self.speculate(probe)
        self.reset(pos)
        return bool(ok)

    def _parse_local_var_decl(self, mods: list[N.ModLike],
                              context: str = "block") -> N.LocalVarDecl:
        start = mods[0].start if mods else self.cur().start
        if self.at_ident("var") and self.la().kind == "ident":
            tok = self.advance()
            vtype: N.TypeNode = N.VarType(tok.start, tok.end)
        else:
            vtype = self.parse_type(annotations_pre=[])
        self.expect_ident()
        declarators = self._parse_declarators(self.toks[self.i - 1].text)
        end = self.expect_op(";").end if context == "block" else declarators[-1].end
        return N.LocalVarDecl(start, end, mods, vtype, declarators, context)

    def _parse_expr_statement(self) -> N.ExprStmt:
        expr = self.parse_expression()
        end = self.expect_op(";").end
        return N.ExprStmt(expr.start, end, expr)

    def _parse_if(self) -> N.IfStmt:
        start = self.expect_kw("if").start
        self.expect_op("(")
        cond = self.parse_expression()
        self.expect_op(")")
        then = self.parse_statement()
        orelse = None
        end = then.end
        if self.at_kw("else"):
            self.advance()
            orelse = self.parse_statement()
            end = orelse.end
        return N.IfStmt(start, end, cond, then, orelse)

    def _parse_while(self) -> N.WhileStmt:
        start = self.expect_kw("while").start
        self.expect_op("(")
        cond = self.parse_expression()
        self.expect_op(")")
        body = self.parse_statement()
        return N.WhileStmt(start, body.end, cond, body)

    def _parse_do(self) -> N.DoWhileStmt:
        start = self.expect_kw("do").start
        body = self.parse_statement()
        self.expect_kw("while")
        self.expect_op("(")
        cond = self.parse_expression()
        self.expect_op(")")
        end = self.expect_op(";").end
        return N.DoWhileStmt(start, end, body, cond)

    def _parse_for(self) -> N.Stmt:
        start = self.expect_kw("for").start
        self.expect_op("(")

        def enhanced_header():
            mods = self.parse_modifiers()
            hstart = mods[0].start if mods else self.cur().start
            if self.at_ident("var") and self.la().kind == "ident":
                tok = self.advance()
                vtype: N.TypeNode = N.VarType(tok.start, tok.end)
            else:
                vtype = self.parse_type(annotations_pre=[])
            name_tok = self.expect_ident()
            self.expect_op(":")
            decl = N.LocalVarDecl(
                hstart, name_tok.end, mods, vtype,
                [N.VarDeclarator(name_tok.start, name_tok.end, name_tok.text, [], None)],
                context="foreach")
            return decl

        var = self.speculate(enhanced_header)
        if var is not None:
            iterable = self.parse_expression()
            self.expect_op(")")
            body = self.parse_statement()
            return N.EnhancedForStmt(start, body.end, var, iterable, body)

        init: list[N.Stmt] = []
        if not self.at_op(";"):
            if self._looks_like_local_decl() or (self.at_ident("var") and self.la().kind == "ident") \
                    or self.at_op("@") or self.at_kw("final") \
                    or (self.cur().kind == "keyword" and self.cur().text in PRIMITIVES):
                mods = self.parse_modifiers()
                init.append(self._parse_local_var_decl(mods, context="for_init"))
            else:
                expr = self.parse_expression()
                init.append(N.ExprStmt(expr.start, expr.end, expr))
                while self.at_op(","):
                    self.advance()
                    expr = self.parse_expression()
                    init.append(N.ExprStmt(expr.start, expr.end, expr))
        self.expect_op(";")
        cond = None
        if not self.at_op(";"):
            cond = self.parse_expression()
        self.expect_op(";")
        update: list[N.Expr] = []
        if not self.at_op(")"):
            update.append(self.parse_expression())
            while self.at_op(","):
                self.advance()
                update.append(self.parse_expression())
        self.expect_op(")")
        body = self.parse_statement()
        return N.BasicForStmt(start, body.end, init, cond, update, body)

    def _parse_try(self) -> N.TryStmt:
        start = self.expect_kw("try").start
        resources: list[N.Stmt] = []
        if self.at_op("("):
            self.advance()
            while not self.at_op(")"):
                def res_decl():
                    mods = self.parse_modifiers()
                    decl = self._parse_local_var_decl(mods, context="resource")
                    if decl.declarators[0].init is None:
                        raise _Backtrack()
                    return decl
                decl = self.speculate(res_decl)
                if decl is not None:
                    resources.append(decl)
                else:
                    expr = self.parse_expression()
                    resources.append(N.ExprStmt(expr.start, expr.end, expr))
                if self.at_op(";"):
                    self.advance()
            self.expect_op(")")
        body = self.parse_block()
        catches = []
        while self.at_kw("catch"):
            cstart = self.advance().start
            self.expect_op("(")
            param_start = self.cur().start
            mods = self.parse_modifiers()
            types = [self.parse_type(annotations_pre=[])]
            while self.at_op("|"):
                self.advance()
                types.append(self.parse_type())
            name_tok = self.expect_ident()
            self.expect_op(")")
            cbody = self.parse_block()
            catches.append(N.CatchClause(cstart, cbody.end, mods, types,
                                         name_tok.text, cbody, param_start))
        finally_block = None
        end = catches[-1].end if catches else body.end
        if self.at_kw("finally"):
            self.advance()
            finally_block = self.parse_block()
            end = finally_block.end
        if not catches and finally_block is None and not resources:
            self.fail("try statement needs catch, finally, or resources")
        return N.TryStmt(start, end, resources, body, catches, finally_block)

    def _parse_return(self) -> N.ReturnStmt:
        start = self.expect_kw("return").start
        value = None
        if not self.at_op(";"):
            value = self.parse_expression()
        end = self.expect_op(";").end
        return N.ReturnStmt(start, end, value)

    def _parse_throw(self) -> N.ThrowStmt:
        start = self.expect_kw("throw").start
        value = self.parse_expression()
        end = self.expect_op(";").end
        return N.ThrowStmt(start, end, value)

    def _parse_synchronized(self) -> N.SynchronizedStmt:
        start = self.expect_kw("synchronized").start
        self.expect_op("(")
        lock = self.parse_expression()
        self.expect_op(")")
        body = self.parse_block()
        return N.SynchronizedStmt(start, body.end, lock, body)

    def _parse_break(self) -> N.BreakStmt:
        start = self.expect_kw("break").start
        label = None
        if self.cur().kind == "ident":
            label = self.advance().text
        end = self.expect_op(";").end
        return N.BreakStmt(start, end, label)

    def _parse_continue(self) -> N.ContinueStmt:
        start = self.expect_kw("continue").start
        label = None
        if self.cur().kind == "ident":
            label = self.advance().text
        end = self.expect_op(";").end
        return N.ContinueStmt(start, end, label)

    def _parse_assert(self) -> N.AssertStmt:
        start = self.expect_kw("assert").start
        cond = self.parse_expression()
        msg = None
        if self.at_op(":"):
            self.advance()
            msg = self.parse_expression()
        end = self.expect_op(";").end
        return N.AssertStmt(start, end, cond, msg)

    def _parse_switch(self, is_expr: bool) -> N.SwitchNode:
        start = self.expect_kw("switch").start
        self.expect_op("(")
        selector = self.parse_expression()
        self.expect_op(")")
        self.expect_op("{")
        groups: list[N.SwitchGroup] = []
        while not self.at_op("}"):
            labels = [self._parse_switch_label()]
            if self.at_op("->"):
                self.advance()
                body = self._parse_arrow_body()
                groups.append(N.SwitchGroup(labels[0].start, body[-1].end if body else labels[0].end,
                                            labels, True, body))
                continue
            self.expect_op(":")
            while self.at_kw("case") or (self.at_kw("default") and self.la().is_op(":")):
                labels.append(self._parse_switch_label())
                self.expect_op(":")
            stmts = []
            while not (self.at_op("}") or self.at_kw("case")
                       or (self.at_kw("default") and (self.la().is_op(":") or self.la().is_op("->")))):
                stmts.append(self.parse_statement())
            end = stmts[-1].end if stmts else labels[-1].end
            groups.append(N.SwitchGroup(labels[0].start, end, labels, False, stmts))
        end = self.expect_op("}").end
        return N.SwitchNode(start, end, selector, groups, is_expr)

    def _parse_switch_label(self) -> N.SwitchLabel:
        if self.at_kw("default"):
            tok = self.advance()
            return N.SwitchLabel(tok.start, tok.end, [], True)
        start = self.expect_kw("case").start
        self._no_lambda += 1
        try:
            exprs = [self.parse_ternary()]
            while self.at_op(","):
                self.advance()
                exprs.append(self.parse_ternary())
        finally:
            self._no_lambda -= 1
        return N.SwitchLabel(start, exprs[-1].end, exprs, False)

    def _parse_arrow_body(self) -> list[N.Stmt]:
        if self.at_op("{"):
            return [self.parse_block()]
        if self.at_kw("throw"):
            return [self._parse_throw()]
        expr = self.parse_expression()
        end = self.expect_op(";").end
        return [N.ExprStmt(expr.start, end, expr)]

    # ------------------------------------------------------------ expressions

    def parse_expression(self) -> N.Expr:
        return self.parse_assignment()

    def parse_assignment(self) -> N.Expr:
        left = self.parse_ternary()
        tok = self.cur()
        if tok.kind == "op" and tok.text in ("=", "+=", "-=", "*=", "/=", "&=",
                                             "|=", "^=", "%=", "<<="):
            self.advance()
            value = self.parse_assignment()
            return N.Assign(left.start, value.end, left, tok.text, value)
        if tok.is_op(">"):
            count, has_eq = self._gt_run()
            if count in (2, 3) and has_eq:
                for _ in range(count + 1):
                    self.advance()
                value = self.parse_assignment()
                op = ">" * count + "="
                return N.Assign(left.start, value.end, left, op, value)
        return left

    def parse_ternary(self) -> N.Expr:
        cond = self._parse_binary(0)
        if self.at_op("?"):
            self.advance()
            then = self.parse_expression()
            self.expect_op(":")
            orelse = self.parse_assignment()
            return N.Ternary(cond.start, orelse.end, cond, then, orelse)
        return cond

    _LEVELS = [
        ("||",), ("&&",), ("|",), ("^",), ("&",), ("==", "!="),
        ("<", ">", "<=", ">=", "instanceof"),
        ("<<", ">>", ">>>"), ("+", "-"), ("*", "/", "%"),
    ]

    def _parse_binary(self, level: int) -> N.Expr:
        if level >= len(self._LEVELS):
            return self.parse_unary()
        ops = self._LEVELS[level]
        left = self._parse_binary(level + 1)
        while True:
            tok = self.cur()
            if "instanceof" in ops and tok.is_kw("instanceof"):
                self.advance()
                itype = self.parse_type(annotations_pre=[])
                binding = None
                end = itype.end
                if self.cur().kind == "ident":
                    bind_tok = self.advance()
                    binding = bind_tok.text
                    end = bind_tok.end
                left = N.InstanceOf(left.start, end, left, itype, binding)
                continue
            if tok.is_op(">"):
                count, has_eq = self._gt_run()
                if has_eq and count == 1 and ">=" in ops:
                    self.advance(); self.advance()
                    right = self._parse_binary(level + 1)
                    left = N.Binary(left.start, right.end, ">=", left, right)
                    continue
                if has_eq and count > 1:
                    break  # shift-assign handled at assignment level
                if count in (2, 3) and (">" * count) in ops:
                    for _ in range(count):
                        self.advance()
                    right = self._parse_binary(level + 1)
                    left = N.Binary(left.start, right.end, ">" * count, left, right)
                    continue
                if count == 1 and ">" in ops:
                    self.advance()
                    right = self._parse_binary(level + 1)
                    left = N.Binary(left.start, right.end, ">", left, right)
                    continue
                break
            if tok.kind == "op" and tok.text in ops and tok.text != ">":
                self.advance()
                right = self._parse_binary(level + 1)
                left = N.Binary(left.start, right.end, tok.text, left, right)
                continue
            break
        return left

    def parse_unary(self) -> N.Expr:
        tok = self.cur()
        if not self._no_lambda:
            lam = self._maybe_lambda()
            if lam is not None:
                return lam
        if tok.kind == "op" and tok.text in ("+", "-", "++", "--", "~", "!"):
            self.advance()
            operand = self.parse_unary()
            return N.Unary(tok.start, operand.end, tok.text, operand, prefix=True)
        if tok.is_op("("):
            cast = self.speculate(self._parse_cast)
            if cast is not None:
                return cast
        return self.parse_postfix()

    def _maybe_lambda(self) -> N.Lambda | None:
        tok = self.cur()
        if tok.kind == "ident" and self.la().is_op("->"):
            self.advance()
            arrow = self.advance()
            body = self._parse_lambda_body()
            param = N.Param(tok.start, tok.end, [], None, tok.text)
            del arrow
            body_any: N.Node = body
            return N.Lambda(tok.start, body_any.end, [param], body)
        if tok.is_op("(") and self._paren_scan_is_lambda():
            return self._parse_paren_lambda()
        return None

    def _paren_scan_is_lambda(self) -> bool:
        depth = 0
        j = self.i
        while j < len(self.toks):
            t = self.toks[j]
            if t.is_op("("):
                depth += 1
            elif t.is_op(")"):
                depth -= 1
                if depth == 0:
                    return self.toks[j + 1].is_op("->") if j + 1 < len(self.toks) else False
            elif t.kind == "eof":
                return False
            j += 1
        return False

    def _parse_paren_lambda(self) -> N.Lambda:
        start = self.expect_op("(").start
        params: list[N.Param] = []
        if not self.at_op(")"):
            # implicit form: bare identifiers only
            implicit = all_idents = True
            j = self.i
            while not self.toks[j].is_op(")"):
                if self.toks[j].kind != "ident" or (
                        not self.toks[j + 1].is_op(",") and not self.toks[j + 1].is_op(")")):
                    all_idents = False
                    break
                j += 2 if self.toks[j + 1].is_op(",") else 1
            implicit = all_idents
            if implicit:
                while not self.at_op(")"):
                    tok = self.expect_ident()
                    params.append(N.Param(tok.start, tok.end, [], None, tok.text))
                    if self.at_op(","):
                        self.advance()
            else:
                while not self.at_op(")"):
                    params.append(self._parse_formal_param())
                    if self.at_op(","):
                        self.advance()
        self.expect_op(")")
        self.expect_op("->")
        body = self._parse_lambda_body()
        body_any: N.Node = body
        return N.Lambda(start, body_any.end, params, body)

    def _parse_lambda_body(self):
        if self.at_op("{"):
            return self.parse_block()
        return self.parse_expression()

    def _parse_cast(self) -> N.Cast:
        start = self.expect_op("(").start
        if not (self.at_op("@") or self.cur().kind == "ident"
                or (self.cur().kind == "keyword" and self.cur().text in PRIMITIVES)):
            raise _Backtrack()
        types = [self.parse_type()]
        while self.at_op("&"):
            self.advance()
            types.append(self.parse_type())
        self.expect_op(")")
        primitive = isinstance(types[0], N.PrimitiveType) or (
            isinstance(types[0], N.ArrayType)
            and isinstance(types[0].element, N.PrimitiveType))
        tok = self.cur()
        ok = (
            tok.kind in ("ident", "int", "float", "char", "string", "textblock")
            or (tok.kind == "keyword" and tok.text in _EXPR_START_KWS)
            or tok.is_op("(") or tok.is_op("!") or tok.is_op("~") or tok.is_op("@")
        )
        if primitive:
            ok = ok or (tok.kind == "op" and tok.text in ("+", "-", "++", "--"))
        if not ok:
            raise _Backtrack()
        value = self.parse_unary()
        return N.Cast(start, value.end, types, value)

    def parse_postfix(self) -> N.Expr:
        expr = self.parse_primary()
        while True:
            tok = self.cur()
            if tok.is_op("."):
                expr = self._parse_dot_selector(expr)
            elif tok.is_op("[") and self.la().is_op("]"):
                # array-type suffix: only valid before `::` or `.class`
                dims = self.parse_dims()
                expr = self._array_type_suffix(expr, dims)
            elif tok.is_op("["):
                self.advance()
                index = self.parse_expression()
                end = self.expect_op("]").end
                expr = N.ArrayAccess(expr.start, end, expr, index)
            elif tok.is_op("::"):
                expr = self._parse_method_ref(expr, qualifier_is_type=False)
            elif tok.kind == "op" and tok.text in ("++", "--"):
                self.advance()
                expr = N.Unary(expr.start, tok.end, tok.text, expr, prefix=False)
            else:
                break
        return expr

    def _parse_dot_selector(self, expr: N.Expr) -> N.Expr:
        self.expect_op(".")
        tok = self.cur()
        if tok.is_kw("class"):
            end = self.advance().end
            return N.ClassLiteral(expr.start, end, self._expr_text(expr))
        if tok.is_kw("this"):
            end = self.advance().end
            return N.ThisExpr(expr.start, end, self._expr_text(expr))
        if tok.is_kw("super"):
            end = self.advance().end
            return N.SuperExpr(expr.start, end, self._expr_text(expr))
        if tok.is_kw("new"):
            return self._parse_new(outer=expr)
        if tok.is_op("<"):
            self.parse_type_args()     # explicit type args on a call
            name_tok = self.expect_ident()
            self.expect_op("(")
            args = self._parse_arg_list()
            end = self.expect_op(")").end
            return N.Call(expr.start, end, expr, name_tok.text, args)
        name_tok = self.expect_ident()
        if self.at_op("("):
            self.advance()
            args = self._parse_arg_list()
            end = self.expect_op(")").end
            return N.Call(expr.start, end, expr, name_tok.text, args)
        return N.FieldAccess(expr.start, name_tok.end, expr, name_tok.text)

    def _expr_text(self, expr: N.Expr) -> str:
        if isinstance(expr, N.NameExpr):
            return ".".join(expr.parts)
        return "<expr>"

    def _array_type_suffix(self, expr: N.Expr, dims: list[N.Dim]) -> N.Expr:
        if self.at_op("::"):
            base = self._expr_to_type(expr)
            arr = N.ArrayType(expr.start, dims[-1].end, base, dims)
            return self._parse_method_ref(arr, qualifier_is_type=True)
        if self.at_op(".") and self.la().is_kw("class"):
            self.advance()
            end = self.advance().end
            return N.ClassLiteral(expr.start, end, self._expr_text(expr) + "[]" * len(dims))
        self.fail("array type in expression must be followed by '::' or '.class'")
        raise AssertionError

    def _expr_to_type(self, expr: N.Expr) -> N.TypeNode:
        if isinstance(expr, N.NameExpr):
            segs = [
                N.TypeSegment(span[0], span[1], part, [], None)
                for part, span in zip(expr.parts, expr.part_spans)
            ]
            return N.ClassType(expr.start, expr.end, segs, from_name_chain=True)
        if isinstance(expr, (N.PrimitiveType, N.ClassType, N.ArrayType)):
            return expr
        self.fail("expected a type")
        raise AssertionError

    def _parse_method_ref(self, qualifier, qualifier_is_type: bool) -> N.MethodRef:
        self.expect_op("::")
        if self.at_op("<"):
            self.parse_type_args()
        if self.at_kw("new"):
            tok = self.advance()
            name = "new"
        else:
            tok = self.expect_ident()
            name = tok.text
        q_any: N.Node = qualifier
        return N.MethodRef(q_any.start, tok.end, qualifier, qualifier_is_type, name)

    def _parse_arg_list(self) -> list[N.Expr]:
        args = []
        while not self.at_op(")"):
            args.append(self.parse_expression())
            if self.at_op(","):
                self.advance()
            else:
                break
        return args

    def parse_primary(self) -> N.Expr:
        tok = self.cur()
        if tok.kind in ("int", "float", "char", "string", "textblock"):
            self.advance()
            return N.Literal(tok.start, tok.end, tok.kind, tok.text)
        if tok.kind == "keyword":
            if tok.text in ("true", "false", "null"):
                self.advance()
                return N.Literal(tok.start, tok.end, "keyword", tok.text)
            if tok.text == "this":
                self.advance()
                if self.at_op("("):
                    self.advance()
                    args = self._parse_arg_list()
                    end = self.expect_op(")").end
                    return N.Call(tok.start, end, None, "this", args)
                return N.ThisExpr(tok.start, tok.end, None)
            if tok.text == "super":
                self.advance()
                if self.at_op("("):
                    self.advance()
                    args = self._parse_arg_list()
                    end = self.expect_op(")").end
                    return N.Call(tok.start, end, None, "super", args)
                return N.SuperExpr(tok.start, tok.end, None)
            if tok.text == "new":
                return self._parse_new(outer=None)
            if tok.text == "switch":
                return self._parse_switch(is_expr=True)
            if tok.text in PRIMITIVES:
                return self._parse_primitive_type_expr()
            if tok.text == "void":
                self.advance()
                self.expect_op(".")
                end = self.expect_kw("class").end
                return N.ClassLiteral(tok.start, end, "void")
        if tok.is_op("@"):
            anns = self.parse_annotations()
            qtype = self.parse_type(annotations_pre=anns)
            if not self.at_op("::"):
                self.fail("annotated type in expression must be a method reference qualifier")
            return self._parse_method_ref(qtype, qualifier_is_type=True)
        if tok.is_op("("):
            self.advance()
            inner = self.parse_expression()
            end = self.expect_op(")").end
            return N.Paren(tok.start, end, inner)
        if tok.kind == "ident":
            return self._parse_name_expr()
        self.fail("expected an expression")
        raise AssertionError

    def _parse_primitive_type_expr(self) -> N.Expr:
        tok = self.advance()
        base = N.PrimitiveType(tok.start, tok.end, tok.text)
        dims = self.parse_dims()
        if dims:
            arr = N.ArrayType(tok.start, dims[-1].end, base, dims)
            if self.at_op("::"):
                return self._parse_method_ref(arr, qualifier_is_type=True)
            self.expect_op(".")
            end = self.expect_kw("class").end
            return N.ClassLiteral(tok.start, end, tok.text + "[]" * len(dims))
        if self.at_op("::"):
            return self._parse_method_ref(base, qualifier_is_type=True)
        self.expect_op(".")
        end = self.expect_kw("class").end
        return N.ClassLiteral(tok.start, end, tok.text)

    def _parse_name_expr(self) -> N.Expr:
        first = self.expect_ident()
        parts = [first.text]
        spans = [(first.start, first.end)]
        end = first.end
        # greedy dotted-name chain; stop before a call so the call target stays
        # structured, and before anything non-identifier
        while (self.at_op(".") and self.la().kind == "ident"
               and not self.la(2).is_op("(")):
            self.advance()
            tok = self.expect_ident()
            parts.append(tok.text)
            spans.append((tok.start, tok.end))
            end = tok.end
        name = N.NameExpr(first.start, end, parts, spans)
        if self.at_op("<"):
            ref = self.speculate(self._generic_type_method_ref, name)
            if ref is not None:
                return ref
        if self.at_op("(") and len(parts) == 1:
            self.advance()
            args = self._parse_arg_list()
            cend = self.expect_op(")").end
            return N.Call(first.start, cend, None, parts[0], args)
        return name

    def _generic_type_method_ref(self, name: N.NameExpr) -> N.MethodRef:
        args = self.parse_type_args()
        if not self.at_op("::"):
            raise _Backtrack()
        qtype = self._expr_to_type(name)
        assert isinstance(qtype, N.ClassType)
        qtype.segments[-1].type_args = args
        return self._parse_method_ref(qtype, qualifier_is_type=True)

    def _parse_new(self, outer: N.Expr | None) -> N.Expr:
        start = self.expect_kw("new").start if outer is None else outer.start
        if outer is not None:
            self.expect_kw("new")
        anns = self.parse_annotations()
        tok = self.cur()
        if tok.kind == "keyword" and tok.text in PRIMITIVES:
            self.advance()
            base: N.TypeNode = N.PrimitiveType(
                anns[0].start if anns else tok.start, tok.end, tok.text, anns)
            return self._parse_new_array(start, base)
        ctype = self._parse_class_type(anns, anns[0].start if anns else tok.start)
        if self.at_op("(") :
            self.advance()
            args = self._parse_arg_list()
            end = self.expect_op(")").end
            body = None
            if self.at_op("{"):
                self.advance()
                body = self._parse_members("<anonymous>")
                end = self.expect_op("}").end
            return N.NewObject(start, end, outer, ctype, args, body)
        return self._parse_new_array(start, ctype)

    def _parse_new_array(self, start: int, base: N.TypeNode) -> N.NewArray:
        sized_dims: list[N.Dim] = []
        sizes: list[N.Expr] = []
        extra_dims: list[N.Dim] = []
        saw_any = False
        while True:
            probe = self.mark()
            anns = self.parse_annotations()
            if not self.at_op("["):
                self.reset(probe)
                break
            lb = self.advance()
            dstart = anns[0].start if anns else lb.start
            if self.at_op("]"):
                rb = self.advance()
                extra_dims.append(N.Dim(dstart, rb.end, anns))
            else:
                if extra_dims:
                    self.fail("sized dimension after unsized dimension")
                size = self.parse_expression()
                rb = self.expect_op("]")
                sized_dims.append(N.Dim(dstart, rb.end, anns))
                sizes.append(size)
            saw_any = True
        if not saw_any:
            self.fail("expected array dimensions in array creation")
        initializer = None
        end = (extra_dims or sized_dims)[-1].end
        if self.at_op("{"):
            initializer = self._parse_array_init()
            end = initializer.end
        if not sizes and initializer is None:
            self.fail("array creation needs sizes or an initializer")
        return N.NewArray(start, end, base, sized_dims, sizes, extra_dims, initializer)
