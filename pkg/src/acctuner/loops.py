"""Loop-tree construction and variable-access extraction.

The loop tree numbers every for/while/do-while statement in textual
pre-order and records nesting, so genome positions stay stable across runs.
Access extraction classifies every identifier occurrence as define/set/ref
together with its enclosing-loop chain; those records drive both the
parallelizability checks and the data-transfer planner.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .nodes import (
    Assign,
    BinaryExpr,
    Block,
    CallExpr,
    CallStmt,
    Decl,
    DoWhileLoop,
    ForLoop,
    Function,
    If,
    IncDec,
    IndexExpr,
    LOOP_KIND,
    LOOP_STMTS,
    NumLit,
    Program,
    Return,
    SourcePos,
    UnaryExpr,
    VarExpr,
    WhileLoop,
)

DEFINE = "define"
SET = "set"
REF = "ref"


@dataclass
class LoopNode:
    loop_id: int
    kind: str                   # 'for' | 'while' | 'dowhile'
    parent: int | None
    children: list[int]
    function: str
    header_pos: SourcePos
    canonical: bool
    counter: str | None         # loop variable of a for-loop, if identifiable
    span: tuple[int, int]


@dataclass
class LoopTree:
    nodes: list[LoopNode] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, loop_id: int) -> LoopNode:
        return self.nodes[loop_id]

    def ancestors(self, loop_id: int) -> tuple[int, ...]:
        """Ancestor chain of a loop, nearest first."""
        out = []
        parent = self.nodes[loop_id].parent
        while parent is not None:
            out.append(parent)
            parent = self.nodes[parent].parent
        return tuple(out)

    def subtree(self, loop_id: int) -> tuple[int, ...]:
        """Pre-order loop ids of the subtree rooted at loop_id, inclusive."""
        out = [loop_id]
        stack = list(reversed(self.nodes[loop_id].children))
        while stack:
            lid = stack.pop()
            out.append(lid)
            stack.extend(reversed(self.nodes[lid].children))
        return tuple(out)

    def signature(self) -> tuple:
        """Structural identity: stable under line-shifting edits such as
        pragma insertion."""
        return tuple(
            (n.loop_id, n.kind, n.parent, n.function, n.canonical)
            for n in self.nodes
        )


@dataclass(frozen=True)
class VarAccess:
    var: str
    is_array: bool
    kind: str                       # 'define' | 'set' | 'ref'
    pos: SourcePos
    loop_path: tuple[int, ...]      # outermost..innermost enclosing loop ids
    function: str
    header_of: int | None = None    # loop whose header contains this access
    indices: tuple | None = None    # per-dimension (var|None, offset), or None


def _is_canonical(loop: ForLoop) -> tuple[bool, str | None]:
    """Canonical counted loop: `i = e`; `i < e` or `i <= e`; `i++` or `i += c`."""
    counter = None
    if isinstance(loop.step, IncDec):
        counter = loop.step.target.name
    elif isinstance(loop.step, Assign) and isinstance(loop.step.target, VarExpr):
        counter = loop.step.target.name
    elif isinstance(loop.init, Assign) and isinstance(loop.init.target, VarExpr):
        counter = loop.init.target.name

    if not (isinstance(loop.init, Assign) and loop.init.op == "="
            and isinstance(loop.init.target, VarExpr)):
        return False, counter
    name = loop.init.target.name
    if not (isinstance(loop.cond, BinaryExpr) and loop.cond.op in ("<", "<=")
            and isinstance(loop.cond.left, VarExpr) and loop.cond.left.name == name):
        return False, counter
    step = loop.step
    if isinstance(step, IncDec):
        if step.op == "++" and step.target.name == name:
            return True, name
        return False, counter
    if (isinstance(step, Assign) and step.op == "+=" and isinstance(step.target, VarExpr)
            and step.target.name == name and isinstance(step.value, NumLit)
            and not step.value.is_float and step.value.value > 0):
        return True, name
    return False, counter


def build_loop_tree(program: Program) -> LoopTree:
    """Collect all loop statements into a pre-order-numbered tree."""
    nodes: dict[int, LoopNode] = {}

    def walk(stmt, parent: int | None, function: str):
        if isinstance(stmt, LOOP_STMTS):
            kind = LOOP_KIND[type(stmt)]
            canonical, counter = _is_canonical(stmt) if isinstance(stmt, ForLoop) else (False, None)
            node = LoopNode(stmt.loop_id, kind, parent, [], function,
                            stmt.pos, canonical, counter, stmt.span)
            nodes[stmt.loop_id] = node
            if parent is not None:
                nodes[parent].children.append(stmt.loop_id)
            walk(stmt.body, stmt.loop_id, function)
            return
        if isinstance(stmt, Block):
            for child in stmt.statements:
                walk(child, parent, function)
        elif isinstance(stmt, If):
            walk(stmt.then_body, parent, function)
            if stmt.else_body is not None:
                walk(stmt.else_body, parent, function)
        # Decl/Assign/IncDec/CallStmt/Return contain no loops

    for fn in program.functions:
        walk(fn.body, None, fn.name)

    tree = LoopTree([nodes[i] for i in sorted(nodes)])
    assert [n.loop_id for n in tree.nodes] == list(range(len(tree.nodes)))
    return tree


def _normalize_index(expr) -> tuple | None:
    """Reduce an index expression to (var, offset) where possible.

    `i` -> (i, 0); `i + 2` / `2 + i` -> (i, 2); `i - 1` -> (i, -1);
    integer literal c -> (None, c); anything else -> None (unanalyzable).
    """
    if isinstance(expr, VarExpr):
        return (expr.name, 0)
    if isinstance(expr, NumLit) and not expr.is_float:
        return (None, int(expr.value))
    if isinstance(expr, BinaryExpr) and expr.op in ("+", "-"):
        left, right = expr.left, expr.right
        if isinstance(left, VarExpr) and isinstance(right, NumLit) and not right.is_float:
            off = int(right.value)
            return (left.name, off if expr.op == "+" else -off)
        if (expr.op == "+" and isinstance(left, NumLit) and not left.is_float
                and isinstance(right, VarExpr)):
            return (right.name, int(left.value))
    return None


class _Scope:
    def __init__(self, parent: "_Scope | None" = None):
        self.parent = parent
        self.names: dict[str, bool] = {}  # name -> is_array

    def define(self, name: str, is_array: bool):
        self.names[name] = is_array

    def lookup(self, name: str) -> bool | None:
        scope = self
        while scope is not None:
            if name in scope.names:
                return scope.names[name]
            scope = scope.parent
        return None


class _AccessWalker:
    def __init__(self, fn: Function, out: list[VarAccess]):
        self.fn = fn
        self.out = out
        self.scope = _Scope()
        self.loop_path: list[int] = []
        self.header_of: int | None = None

    def run(self):
        for param in self.fn.params:
            self.scope.define(param.name, param.is_array)
            self.emit(param.name, DEFINE, param.pos, is_array=param.is_array)
        self.stmt(self.fn.body)

    def emit(self, name: str, kind: str, pos: SourcePos,
             is_array: bool | None = None, indices: tuple | None = None):
        if is_array is None:
            declared = self.scope.lookup(name)
            is_array = bool(indices) if declared is None else declared
        self.out.append(VarAccess(
            var=name, is_array=is_array, kind=kind, pos=pos,
            loop_path=tuple(self.loop_path), function=self.fn.name,
            header_of=self.header_of, indices=indices))

    # -- expressions: everything read --

    def expr(self, e):
        if e is None or isinstance(e, NumLit):
            return
        if isinstance(e, VarExpr):
            self.emit(e.name, REF, e.pos)
        elif isinstance(e, IndexExpr):
            norm = tuple(_normalize_index(ix) for ix in e.indices)
            self.emit(e.name, REF, e.pos, is_array=True, indices=norm)
            for ix in e.indices:
                self.expr(ix)
        elif isinstance(e, UnaryExpr):
            self.expr(e.operand)
        elif isinstance(e, BinaryExpr):
            self.expr(e.left)
            self.expr(e.right)
        elif isinstance(e, CallExpr):
            self.call(e)

    def call(self, e: CallExpr):
        # An array passed whole to a call may be read and written inside the
        # callee; record both, with unknown element indices.
        for arg in e.args:
            if isinstance(arg, VarExpr) and self.scope.lookup(arg.name):
                self.emit(arg.name, REF, arg.pos, is_array=True)
                self.emit(arg.name, SET, arg.pos, is_array=True)
            else:
                self.expr(arg)

    # -- statements --

    def assign(self, stmt: Assign):
        target = stmt.target
        if isinstance(target, IndexExpr):
            norm = tuple(_normalize_index(ix) for ix in target.indices)
            self.emit(target.name, SET, target.pos, is_array=True, indices=norm)
            if stmt.op != "=":
                self.emit(target.name, REF, target.pos, is_array=True, indices=norm)
            for ix in target.indices:
                self.expr(ix)
        else:
            self.emit(target.name, SET, target.pos)
            if stmt.op != "=":
                self.emit(target.name, REF, target.pos)
        self.expr(stmt.value)

    def incdec(self, stmt: IncDec):
        self.emit(stmt.target.name, SET, stmt.target.pos)
        self.emit(stmt.target.name, REF, stmt.target.pos)

    def header(self, loop_id: int, *parts):
        prev = self.header_of
        self.header_of = loop_id
        for part in parts:
            if part is None:
                continue
            if isinstance(part, Assign):
                self.assign(part)
            elif isinstance(part, IncDec):
                self.incdec(part)
            else:
                self.expr(part)
        self.header_of = prev

    def stmt(self, s):
        if isinstance(s, Decl):
            self.scope.define(s.name, s.is_array)
            self.emit(s.name, DEFINE, s.pos, is_array=s.is_array)
            for dim in s.dims:
                self.expr(dim)
            self.expr(s.init)
        elif isinstance(s, Assign):
            self.assign(s)
        elif isinstance(s, IncDec):
            self.incdec(s)
        elif isinstance(s, If):
            self.expr(s.cond)
            self.stmt(s.then_body)
            if s.else_body is not None:
                self.stmt(s.else_body)
        elif isinstance(s, ForLoop):
            self.loop_path.append(s.loop_id)
            self.header(s.loop_id, s.init, s.cond, s.step)
            self.stmt(s.body)
            self.loop_path.pop()
        elif isinstance(s, WhileLoop):
            self.loop_path.append(s.loop_id)
            self.header(s.loop_id, s.cond)
            self.stmt(s.body)
            self.loop_path.pop()
        elif isinstance(s, DoWhileLoop):
            self.loop_path.append(s.loop_id)
            self.stmt(s.body)
            self.header(s.loop_id, s.cond)
            self.loop_path.pop()
        elif isinstance(s, CallStmt):
            self.call(s.call)
        elif isinstance(s, Return):
            self.expr(s.value)
        elif isinstance(s, Block):
            outer = self.scope
            self.scope = _Scope(outer)
            for child in s.statements:
                self.stmt(child)
            self.scope = outer


def extract_accesses(program: Program) -> list[VarAccess]:
    """Classify every identifier occurrence as define/set/ref.

    Compound assignments produce both a set and a ref at the same position.
    Whole arrays passed to calls are conservatively marked ref and set.
    """
    out: list[VarAccess] = []
    for fn in program.functions:
        _AccessWalker(fn, out).run()
    return out
