"""Recursive-descent parser for the C-like subset language.

Grammar (informal):

    unit      = { function }
    function  = type IDENT '(' [ param { ',' param } ] ')' block
    param     = type IDENT [ dims ]
    block     = '{' { stmt } '}'
    stmt      = decl | assign ';' | incdec ';' | call ';' | if | for
              | while | dowhile | return | block
    decl      = type declarator { ',' declarator } ';'
    declarator= IDENT [ dims ] [ '=' expr ]
    dims      = '[' [ expr ] ']' [ '[' [ expr ] ']' ]
    assign    = lvalue ( '=' | '+=' | '-=' | '*=' | '/=' ) expr
    for       = 'for' '(' [ assign ] ';' [ expr ] ';' [ assign | incdec ] ')' body
    while     = 'while' '(' expr ')' body
    dowhile   = 'do' body 'while' '(' expr ')' ';'

Expressions support || && comparisons + - * / % unary !/- literals,
identifiers, indexing and calls.  Comments are // and /* */; lines starting
with '#' (inserted pragmas) are skipped like comments.  Pointers, goto,
switch/break/continue and the preprocessor are outside the subset and are
rejected with a ParseError.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError
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
    NumLit,
    Program,
    Return,
    SourcePos,
    UnaryExpr,
    VarExpr,
    WhileLoop,
)

TYPE_KEYWORDS = ("int", "float", "double")
KEYWORDS = TYPE_KEYWORDS + ("if", "else", "for", "while", "do", "return")

# Constructs the subset deliberately leaves out; seeing one is a parse error
# at that token rather than a confusing failure later.
UNSUPPORTED_KEYWORDS = frozenset(
    "goto switch case default break continue struct union enum typedef "
    "void char long short unsigned signed static extern const sizeof".split()
)

_PUNCT2 = ("++", "--", "+=", "-=", "*=", "/=", "==", "!=", "<=", ">=", "&&", "||")
_PUNCT1 = "+-*/%<>=!(){}[];,"

ASSIGN_OPS = ("=", "+=", "-=", "*=", "/=")


@dataclass(frozen=True)
class Token:
    kind: str       # 'ident' | 'num' | 'punct' | 'eof'
    text: str
    line: int
    col: int
    offset: int

    @property
    def pos(self) -> SourcePos:
        return SourcePos(self.line, self.col, self.offset)

    @property
    def end(self) -> int:
        return self.offset + len(self.text)


def tokenize(text: str, path: str = "<source>") -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def err(msg: str, l: int, c: int):
        raise ParseError(msg, l, c, path)

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "/" and text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "/" and text.startswith("/*", i):
            end = text.find("*/", i + 2)
            if end < 0:
                err("unterminated block comment", line, col)
            skipped = text[i : end + 2]
            line += skipped.count("\n")
            col = (len(skipped) - skipped.rfind("\n")) if "\n" in skipped else col + len(skipped)
            i = end + 2
            continue
        if ch == "#":
            # inserted pragma / preprocessor-looking line: skip to end of line
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], line, col, i))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            tokens.append(Token("num", text[i:j], line, col, i))
            col += j - i
            i = j
            continue
        two = text[i : i + 2]
        if two in _PUNCT2:
            tokens.append(Token("punct", two, line, col, i))
            i += 2
            col += 2
            continue
        if ch in _PUNCT1:
            tokens.append(Token("punct", ch, line, col, i))
            i += 1
            col += 1
            continue
        err(f"unexpected character {ch!r}", line, col)

    tokens.append(Token("eof", "", line, col, n))
    return tokens


class _Parser:
    def __init__(self, text: str, path: str = "<source>"):
        self.text = text
        self.path = path
        self.tokens = tokenize(text, path)
        self.i = 0
        self.next_loop_id = 0

    # -- token plumbing --

    def peek(self, k: int = 0) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind in ("punct", "ident")

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            return self.advance()
        return None

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text:
            found = repr(tok.text) if tok.text else "end of input"
            self.error(f"expected {text!r}, found {found}", tok)
        return self.advance()

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col, self.path)

    def check_supported(self, tok: Token):
        if tok.kind == "ident" and tok.text in UNSUPPORTED_KEYWORDS:
            self.error(f"unsupported construct {tok.text!r}", tok)

    # -- grammar --

    def parse_program(self) -> Program:
        functions = []
        while self.peek().kind != "eof":
            functions.append(self.parse_function())
        return Program(functions, self.text)

    def parse_function(self) -> Function:
        start = self.peek()
        self.check_supported(start)
        if start.text not in TYPE_KEYWORDS:
            self.error(f"expected a function definition, found {start.text!r}", start)
        self.advance()
        name = self.expect_ident()
        self.expect("(")
        params: list[Decl] = []
        if not self.at(")"):
            params.append(self.parse_param())
            while self.accept(","):
                params.append(self.parse_param())
        self.expect(")")
        body = self.parse_block()
        return Function(name.text, start.text, params, body, start.pos, (start.offset, body.span[1]))

    def expect_ident(self) -> Token:
        tok = self.peek()
        self.check_supported(tok)
        if tok.kind != "ident" or tok.text in KEYWORDS:
            self.error(f"expected identifier, found {tok.text!r}", tok)
        return self.advance()

    def parse_param(self) -> Decl:
        type_tok = self.peek()
        self.check_supported(type_tok)
        if type_tok.text not in TYPE_KEYWORDS:
            self.error(f"expected parameter type, found {type_tok.text!r}", type_tok)
        self.advance()
        name = self.expect_ident()
        dims = self.parse_dims(allow_empty=True)
        end = self.tokens[self.i - 1].end
        return Decl(type_tok.text, name.text, dims, None, name.pos, (type_tok.offset, end))

    def parse_dims(self, allow_empty: bool) -> tuple:
        dims = []
        while self.at("["):
            self.advance()
            if self.at("]"):
                if not allow_empty:
                    self.error("array dimension requires a size expression")
                dims.append(None)
            else:
                dims.append(self.parse_expr())
            self.expect("]")
            if len(dims) > 2:
                self.error("arrays of more than two dimensions are not supported")
        return tuple(dims)

    def parse_block(self) -> Block:
        open_tok = self.expect("{")
        statements = []
        while not self.at("}"):
            if self.peek().kind == "eof":
                self.error("unterminated block; expected '}'")
            stmt = self.parse_stmt()
            if isinstance(stmt, list):  # comma-separated declarators
                statements.extend(stmt)
            else:
                statements.append(stmt)
        close = self.expect("}")
        return Block(statements, open_tok.pos, (open_tok.offset, close.end))

    def parse_stmt(self):
        tok = self.peek()
        self.check_supported(tok)
        if tok.text in TYPE_KEYWORDS:
            return self.parse_decl_stmt()
        if tok.text == "if":
            return self.parse_if()
        if tok.text == "for":
            return self.parse_for()
        if tok.text == "while":
            return self.parse_while()
        if tok.text == "do":
            return self.parse_dowhile()
        if tok.text == "return":
            return self.parse_return()
        if tok.text == "{":
            return self.parse_block()
        if tok.kind == "ident":
            return self.parse_simple_stmt()
        self.error(f"expected a statement, found {tok.text!r}", tok)

    def parse_decl_stmt(self) -> Decl | list[Decl]:
        type_tok = self.advance()
        decls = [self.parse_declarator(type_tok)]
        while self.accept(","):
            decls.append(self.parse_declarator(type_tok))
        semi = self.expect(";")
        for d in decls:
            d.span = (d.span[0], semi.end)
        # a comma list stays a flat run of Decls in the enclosing block so the
        # declared names land in the enclosing scope
        return decls[0] if len(decls) == 1 else decls

    def parse_declarator(self, type_tok: Token) -> Decl:
        name = self.expect_ident()
        dims = self.parse_dims(allow_empty=False)
        init = None
        if self.accept("="):
            if dims:
                self.error("array initializers are not supported", name)
            init = self.parse_expr()
        end = self.tokens[self.i - 1].end
        return Decl(type_tok.text, name.text, dims, init, name.pos, (type_tok.offset, end))

    def parse_simple_stmt(self):
        start = self.peek()
        if self.peek(1).text == "(":
            call = self.parse_primary()
            if not isinstance(call, CallExpr):
                self.error("expected a call statement", start)
            semi = self.expect(";")
            return CallStmt(call, start.pos, (start.offset, semi.end))
        stmt = self.parse_assign_or_incdec()
        semi = self.expect(";")
        stmt.span = (stmt.span[0], semi.end)
        return stmt

    def parse_assign_or_incdec(self):
        start = self.peek()
        name = self.expect_ident()
        if self.peek().text in ("++", "--"):
            op = self.advance()
            target = VarExpr(name.text, name.pos)
            return IncDec(target, op.text, start.pos, (start.offset, op.end))
        if self.at("["):
            indices = []
            while self.at("["):
                self.advance()
                indices.append(self.parse_expr())
                self.expect("]")
            if len(indices) > 2:
                self.error("arrays of more than two dimensions are not supported", start)
            target = IndexExpr(name.text, tuple(indices), name.pos)
        else:
            target = VarExpr(name.text, name.pos)
        op_tok = self.peek()
        if op_tok.text not in ASSIGN_OPS:
            self.error(f"expected an assignment operator, found {op_tok.text!r}", op_tok)
        self.advance()
        value = self.parse_expr()
        end = self.tokens[self.i - 1].end
        return Assign(target, op_tok.text, value, start.pos, (start.offset, end))

    def parse_if(self) -> If:
        start = self.expect("if")
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        then_body = self.parse_body()
        else_body = None
        if self.accept("else"):
            else_body = self.parse_body()
        end = (else_body or then_body).span[1]
        return If(cond, then_body, else_body, start.pos, (start.offset, end))

    def parse_body(self) -> Block:
        """A loop/if body: a braced block, or a single statement wrapped in one."""
        if self.at("{"):
            return self.parse_block()
        stmt = self.parse_stmt()
        if isinstance(stmt, list):
            return Block(stmt, stmt[0].pos, (stmt[0].span[0], stmt[-1].span[1]))
        return Block([stmt], stmt.pos, stmt.span)

    def parse_for(self) -> ForLoop:
        start = self.expect("for")
        loop_id = self.next_loop_id
        self.next_loop_id += 1
        self.expect("(")
        init = None
        if not self.at(";"):
            init = self.parse_assign_or_incdec()
            if isinstance(init, IncDec):
                self.error("for-loop initializer must be an assignment", start)
        self.expect(";")
        cond = None if self.at(";") else self.parse_expr()
        self.expect(";")
        step = None
        if not self.at(")"):
            step = self.parse_assign_or_incdec()
        self.expect(")")
        body = self.parse_body()
        return ForLoop(init, cond, step, body, loop_id, start.pos, (start.offset, body.span[1]))

    def parse_while(self) -> WhileLoop:
        start = self.expect("while")
        loop_id = self.next_loop_id
        self.next_loop_id += 1
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        body = self.parse_body()
        return WhileLoop(cond, body, loop_id, start.pos, (start.offset, body.span[1]))

    def parse_dowhile(self) -> DoWhileLoop:
        start = self.expect("do")
        loop_id = self.next_loop_id
        self.next_loop_id += 1
        body = self.parse_body()
        self.expect("while")
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        semi = self.expect(";")
        return DoWhileLoop(body, cond, loop_id, start.pos, (start.offset, semi.end))

    def parse_return(self) -> Return:
        start = self.expect("return")
        value = None
        if not self.at(";"):
            value = self.parse_expr()
        semi = self.expect(";")
        return Return(value, start.pos, (start.offset, semi.end))

    # -- expressions, precedence climbing --

    def parse_expr(self):
        return self.parse_or()

    def parse_or(self):
        left = self.parse_and()
        while self.at("||"):
            op = self.advance()
            left = BinaryExpr("||", left, self.parse_and(), op.pos)
        return left

    def parse_and(self):
        left = self.parse_equality()
        while self.at("&&"):
            op = self.advance()
            left = BinaryExpr("&&", left, self.parse_equality(), op.pos)
        return left

    def parse_equality(self):
        left = self.parse_relational()
        while self.peek().text in ("==", "!="):
            op = self.advance()
            left = BinaryExpr(op.text, left, self.parse_relational(), op.pos)
        return left

    def parse_relational(self):
        left = self.parse_additive()
        while self.peek().text in ("<", "<=", ">", ">="):
            op = self.advance()
            left = BinaryExpr(op.text, left, self.parse_additive(), op.pos)
        return left

    def parse_additive(self):
        left = self.parse_multiplicative()
        while self.peek().kind == "punct" and self.peek().text in ("+", "-"):
            op = self.advance()
            left = BinaryExpr(op.text, left, self.parse_multiplicative(), op.pos)
        return left

    def parse_multiplicative(self):
        left = self.parse_unary()
        while self.peek().kind == "punct" and self.peek().text in ("*", "/", "%"):
            op = self.advance()
            left = BinaryExpr(op.text, left, self.parse_unary(), op.pos)
        return left

    def parse_unary(self):
        tok = self.peek()
        if tok.text in ("!", "-") and tok.kind == "punct":
            self.advance()
            return UnaryExpr(tok.text, self.parse_unary(), tok.pos)
        return self.parse_primary()

    def parse_primary(self):
        tok = self.peek()
        self.check_supported(tok)
        if tok.kind == "num":
            self.advance()
            is_float = "." in tok.text or "e" in tok.text or "E" in tok.text
            return NumLit(float(tok.text), is_float, tok.pos)
        if tok.text == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            name = self.advance()
            if self.at("("):
                self.advance()
                args = []
                if not self.at(")"):
                    args.append(self.parse_expr())
                    while self.accept(","):
                        args.append(self.parse_expr())
                self.expect(")")
                return CallExpr(name.text, tuple(args), name.pos)
            if self.at("["):
                indices = []
                while self.at("["):
                    self.advance()
                    indices.append(self.parse_expr())
                    self.expect("]")
                if len(indices) > 2:
                    self.error("arrays of more than two dimensions are not supported", name)
                return IndexExpr(name.text, tuple(indices), name.pos)
            return VarExpr(name.text, name.pos)
        self.error(f"expected an expression, found {tok.text!r}", tok)


def parse(text: str, path: str = "<source>") -> Program:
    """Parse source text into a Program.

    Loop statements are numbered 0..n-1 in textual (pre-order) appearance.
    Empty input yields a Program with zero functions.  Any construct outside
    the subset grammar raises ParseError at the offending token.
    """
    return _Parser(text, path).parse_program()
