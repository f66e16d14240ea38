"""Text format for programs and queries: a small Prolog-like syntax."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .program import NEGATION, Clause, Literal, Program, ProgramError, QuerySeq, conjunction_to_list
from .terms import NIL, Compound, Term, Variable, VarSupply, make_list

logger = logging.getLogger(__name__)

_SHARED_SUPPLY = VarSupply()

_SYMBOL_CHARS = set("+-*/\\^<>=~:.?@#&$")
_INFIX: Dict[str, Tuple[int, str]] = {
    ":-": (1200, "xfx"),
    ",": (1000, "xfy"),
    "=": (700, "xfx"),
    "\\=": (700, "xfx"),
}
_PREFIX: Dict[str, int] = {NEGATION: 900}
_ARITHMETIC = {"is", "+", "-", "*", "/", "//", "<", ">", "=<", ">=", "=:=", "=\\=", "mod"}


class ParseError(Exception):
    """Custom exception for program text parsing operations."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


@dataclass
class Token:
    kind: str  # name, var, number, punct, end, eof
    text: str
    line: int
    column: int
    layout_before: bool = False
    quoted: bool = False


@dataclass
class SourceProgram:
    """A parsed program together with where it came from."""
    text: str
    program: Program
    path: Optional[str] = None
    diagnostics: List[str] = field(default_factory=list)


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1

    def _advance(self, count: int = 1) -> None:
        for _ in range(count):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.column = 1
            else:
                self.column += 1
            self.pos += 1

    def _peek(self, offset: int = 0) -> str:
        index = self.pos + offset
        return self.text[index] if index < len(self.text) else ""

    def _skip_layout(self) -> bool:
        skipped = False
        while self.pos < len(self.text):
            char = self._peek()
            if char.isspace():
                self._advance()
            elif char == "%":
                while self.pos < len(self.text) and self._peek() != "\n":
                    self._advance()
            elif char == "/" and self._peek(1) == "*":
                start_line, start_column = self.line, self.column
                self._advance(2)
                while self.pos < len(self.text) and not (self._peek() == "*" and self._peek(1) == "/"):
                    self._advance()
                if self.pos >= len(self.text):
                    raise ParseError("unterminated block comment", start_line, start_column)
                self._advance(2)
            else:
                break
            skipped = True
        return skipped

    def tokens(self) -> List[Token]:
        result: List[Token] = []
        while True:
            layout = self._skip_layout()
            line, column = self.line, self.column
            if self.pos >= len(self.text):
                result.append(Token("eof", "", line, column, layout))
                return result
            char = self._peek()
            if char.isalpha() or char == "_":
                match = re.match(r"[A-Za-z0-9_]*", self.text[self.pos:])
                word = match.group(0)
                self._advance(len(word))
                kind = "var" if (word[0].isupper() or word[0] == "_") else "name"
                result.append(Token(kind, word, line, column, layout))
            elif char.isdigit():
                match = re.match(r"\d+(\.\d+)?", self.text[self.pos:])
                number = match.group(0)
                self._advance(len(number))
                result.append(Token("number", number, line, column, layout))
            elif char == "'":
                result.append(Token("name", self._quoted(line, column), line, column, layout, quoted=True))
            elif char in "()[]|,":
                self._advance()
                result.append(Token("punct", char, line, column, layout))
            elif char == "!":
                raise ParseError("cut is not supported", line, column)
            elif char == ";":
                raise ParseError("disjunction is not supported", line, column)
            elif char == "." and (self._peek(1) == "" or self._peek(1).isspace() or self._peek(1) == "%"):
                self._advance()
                result.append(Token("end", ".", line, column, layout))
            elif char in _SYMBOL_CHARS:
                start = self.pos
                while self._peek() in _SYMBOL_CHARS and self._peek() != "":
                    self._advance()
                result.append(Token("name", self.text[start:self.pos], line, column, layout))
            else:
                raise ParseError(f"unexpected character {char!r}", line, column)

    def _quoted(self, line: int, column: int) -> str:
        self._advance()
        chars: List[str] = []
        while True:
            if self.pos >= len(self.text):
                raise ParseError("unterminated quoted atom", line, column)
            char = self._peek()
            if char == "\\" and self._peek(1) in ("\\", "'"):
                chars.append(self._peek(1))
                self._advance(2)
            elif char == "'" and self._peek(1) == "'":
                chars.append("'")
                self._advance(2)
            elif char == "'":
                self._advance()
                return "".join(chars)
            else:
                chars.append(char)
                self._advance()


class _Parser:
    def __init__(self, text: str, supply: VarSupply):
        self.tokens = _Lexer(text).tokens()
        self.index = 0
        self.supply = supply
        self.variables: Dict[str, Variable] = {}

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _next(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _error(self, message: str, token: Optional[Token] = None) -> ParseError:
        token = token or self.current
        return ParseError(message, token.line, token.column)

    def _expect(self, kind: str, text: Optional[str] = None) -> Token:
        token = self.current
        if token.kind != kind or (text is not None and token.text != text):
            wanted = text or kind
            found = token.text or token.kind
            raise self._error(f"expected {wanted!r} but found {found!r}")
        return self._next()

    def at_eof(self) -> bool:
        return self.current.kind == "eof"

    def clause_term(self) -> Term:
        self.variables = {}
        term = self.parse(1200)
        self._expect("end")
        return term

    def parse(self, max_priority: int) -> Term:
        left, left_priority = self._primary(max_priority)
        while True:
            token = self.current
            op = token.text if token.kind in ("name", "punct") and not token.quoted else None
            if op in _ARITHMETIC and token.kind == "name":
                raise self._error("arithmetic is not supported")
            if op not in _INFIX:
                return left
            priority, kind = _INFIX[op]
            if priority > max_priority or left_priority > priority - 1:
                return left
            self._next()
            right_max = priority if kind == "xfy" else priority - 1
            right = self.parse(right_max)
            left = Compound(op, (left, right))
            left_priority = priority

    def _starts_term(self, token: Token) -> bool:
        if token.kind in ("var", "number"):
            return True
        if token.kind == "punct":
            return token.text in ("(", "[")
        return token.kind == "name" and token.text not in _INFIX

    def _primary(self, max_priority: int) -> Tuple[Term, int]:
        token = self._next()
        if token.kind == "var":
            return self._variable(token.text), 0
        if token.kind == "number":
            return Compound(token.text), 0
        if token.kind == "punct" and token.text == "(":
            inner = self.parse(1200)
            self._expect("punct", ")")
            return inner, 0
        if token.kind == "punct" and token.text == "[":
            return self._list(), 0
        if token.kind != "name":
            raise self._error(f"unexpected {token.text or token.kind!r}", token)
        name = token.text
        if not token.quoted and name in _ARITHMETIC:
            raise self._error("arithmetic is not supported", token)
        following = self.current
        if following.kind == "punct" and following.text == "(" and not following.layout_before:
            self._next()
            args = [self.parse(999)]
            while self.current.kind == "punct" and self.current.text == ",":
                self._next()
                args.append(self.parse(999))
            self._expect("punct", ")")
            return Compound(name, tuple(args)), 0
        if not token.quoted and name in _PREFIX and self._starts_term(following):
            priority = _PREFIX[name]
            if priority > max_priority:
                raise self._error(f"operator {name} needs parentheses here", token)
            operand = self.parse(priority)
            return Compound(name, (operand,)), priority
        return Compound(name), 0

    def _list(self) -> Term:
        if self.current.kind == "punct" and self.current.text == "]":
            self._next()
            return NIL
        items = [self.parse(999)]
        while self.current.kind == "punct" and self.current.text == ",":
            self._next()
            items.append(self.parse(999))
        tail: Term = NIL
        if self.current.kind == "punct" and self.current.text == "|":
            self._next()
            tail = self.parse(999)
        self._expect("punct", "]")
        return make_list(items, tail)

    def _variable(self, name: str) -> Variable:
        if name == "_":
            return self.supply.fresh("_")
        if name not in self.variables:
            self.variables[name] = self.supply.fresh(name)
        return self.variables[name]


def _to_literal(term: Term, token_hint: Token) -> Literal:
    if isinstance(term, Variable):
        raise ParseError("variable goals are not supported", token_hint.line, token_hint.column)
    if term.functor in (NEGATION, "not") and len(term.args) == 1:
        if isinstance(term.args[0], Variable):
            raise ParseError("negated variable goals are not supported", token_hint.line, token_hint.column)
        return Literal(term.args[0], positive=False)
    return Literal(term)


def _to_clause(term: Term, token: Token) -> Clause:
    if isinstance(term, Compound) and term.functor == ":-" and len(term.args) == 1:
        raise ParseError("directives are not supported", token.line, token.column)
    if isinstance(term, Compound) and term.functor == ":-" and len(term.args) == 2:
        head, body = term.args
        literals = tuple(_to_literal(goal, token) for goal in conjunction_to_list(body))
    else:
        head, literals = term, ()
    if not isinstance(head, Compound) or head.key in (("\\+", 1), (",", 2)):
        raise ParseError("clause head must be an atom", token.line, token.column)
    try:
        return Clause(head, literals)
    except ProgramError as e:
        raise ParseError(str(e), token.line, token.column) from e


def parse_program(text: str, supply: Optional[VarSupply] = None) -> Program:
    """Parse program text into a Program.

    Raises:
        ParseError: On any syntax error, with line and column.
    """
    parser = _Parser(text, supply or _SHARED_SUPPLY)
    clauses: List[Clause] = []
    while not parser.at_eof():
        start = parser.current
        clauses.append(_to_clause(parser.clause_term(), start))
    logger.debug(f"Parsed {len(clauses)} clauses")
    return Program(clauses)


def parse_term(text: str, supply: Optional[VarSupply] = None,
               variables: Optional[Dict[str, Variable]] = None) -> Term:
    """Parse a single term; a trailing period is optional."""
    parser = _Parser(text, supply or _SHARED_SUPPLY)
    if variables is not None:
        parser.variables = variables
    term = parser.parse(1200)
    if parser.current.kind == "end":
        parser._next()
    if not parser.at_eof():
        raise parser._error(f"unexpected {parser.current.text!r} after term")
    return term


def parse_query(text: str, supply: Optional[VarSupply] = None,
                variables: Optional[Dict[str, Variable]] = None) -> QuerySeq:
    """Parse a query such as 'p(X), \\+ q(X)'; variables names are shared with later parses."""
    term = parse_term(text, supply, variables)
    first = Token("name", text, 1, 1)
    return QuerySeq(tuple(_to_literal(goal, first) for goal in conjunction_to_list(term)))


def load_source(path: str, supply: Optional[VarSupply] = None) -> SourceProgram:
    """Read and parse a UTF-8 program file."""
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    return SourceProgram(text=text, program=parse_program(text, supply), path=path)


def pretty_print(program: Program) -> str:
    return program.format() + ("\n" if len(program) else "")
