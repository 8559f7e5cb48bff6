"""Tokenizer and recursive-descent parser for the query language.

Grammar (see docs/query-grammar.md for the EBNF):

    query       = clause+ ;
    clause      = match | create | merge | delete | return ;
    match       = MATCH pattern [WHERE condition (AND condition)*] ;
    create      = CREATE pattern ;
    merge       = MERGE node_atom ;
    delete      = [DETACH] DELETE identifier ;
    return      = RETURN projection (, projection)* [LIMIT integer] ;
    pattern     = node_atom (edge_atom node_atom)* ;

Keywords are case-insensitive; identifiers, labels, and relation names are
case-sensitive. Diagnostics carry a byte offset into the source text plus
the set of token kinds that would have been accepted.

Structural validation happens after the grammar pass: RETURN must be the
single final clause, read and write clauses cannot mix (MATCH may precede
DELETE to bind its target), MERGE takes a lone node atom, and every
variable used in WHERE / RETURN / DELETE must be bound by some pattern.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from ..errors import MixedReadWriteError, QuerySyntaxError, UnboundVariableError
from ..store.graph import Scalar
from .ast import (
    Comparison,
    CreateClause,
    DeleteClause,
    EdgeAtom,
    IN,
    MatchClause,
    MergeClause,
    NodeAtom,
    OUT,
    Pattern,
    Projection,
    PropertyRef,
    QueryAst,
    ReturnClause,
    WherePredicate,
)

KEYWORDS = {"MATCH", "WHERE", "CREATE", "MERGE", "DELETE", "DETACH", "RETURN", "LIMIT", "AND", "TRUE", "FALSE", "NULL"}

_PUNCT = {
    "(": "LPAREN",
    ")": "RPAREN",
    "[": "LBRACKET",
    "]": "RBRACKET",
    "{": "LBRACE",
    "}": "RBRACE",
    ":": "COLON",
    ",": "COMMA",
    ".": "DOT",
    "=": "EQ",
    "-": "DASH",
    ">": "GT",
    "<": "LT",
}


@dataclass
class Token:
    kind: str  # keyword name, IDENT, STRING, INT, FLOAT, punctuation name, EOF
    text: str
    value: object
    offset: int  # character offset into the source


class _Tokenizer:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def tokens(self) -> List[Token]:
        out: List[Token] = []
        text = self.text
        n = len(text)
        while self.pos < n:
            ch = text[self.pos]
            if ch.isspace():
                self.pos += 1
                continue
            start = self.pos
            if ch == "'":
                out.append(self._string(start))
            elif ch.isdigit():
                out.append(self._number(start))
            elif ch.isalpha() or ch == "_":
                end = start
                while end < n and (text[end].isalnum() or text[end] == "_"):
                    end += 1
                word = text[start:end]
                self.pos = end
                upper = word.upper()
                if upper in KEYWORDS:
                    out.append(Token(upper, word, None, start))
                else:
                    out.append(Token("IDENT", word, word, start))
            elif ch == "<" and self.pos + 1 < n and text[self.pos + 1] == ">":
                self.pos += 2
                out.append(Token("NEQ", "<>", None, start))
            elif ch in _PUNCT:
                self.pos += 1
                out.append(Token(_PUNCT[ch], ch, None, start))
            else:
                raise _syntax_error(text, start, f"unexpected character {ch!r}", [])
        out.append(Token("EOF", "", None, n))
        return out

    def _string(self, start: int) -> Token:
        text = self.text
        n = len(text)
        pos = start + 1
        pieces: List[str] = []
        while pos < n:
            ch = text[pos]
            if ch == "'":
                if pos + 1 < n and text[pos + 1] == "'":
                    pieces.append("'")
                    pos += 2
                    continue
                self.pos = pos + 1
                return Token("STRING", text[start : pos + 1], "".join(pieces), start)
            pieces.append(ch)
            pos += 1
        raise _syntax_error(text, start, "unterminated string literal", ["'"])

    def _number(self, start: int) -> Token:
        text = self.text
        n = len(text)
        end = start
        while end < n and text[end].isdigit():
            end += 1
        if end < n and text[end] == "." and end + 1 < n and text[end + 1].isdigit():
            end += 1
            while end < n and text[end].isdigit():
                end += 1
            self.pos = end
            raw = text[start:end]
            return Token("FLOAT", raw, float(raw), start)
        self.pos = end
        raw = text[start:end]
        return Token("INT", raw, int(raw), start)


def _byte_offset(text: str, char_offset: int) -> int:
    return len(text[:char_offset].encode("utf-8"))


def _syntax_error(text: str, char_offset: int, message: str, expected: Sequence[str]) -> QuerySyntaxError:
    return QuerySyntaxError(_byte_offset(text, char_offset), message, sorted(set(expected)))


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _Tokenizer(text).tokens()
        self.index = 0

    # --- token helpers ---

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _accept(self, kind: str) -> Optional[Token]:
        if self.current.kind == kind:
            return self._advance()
        return None

    def _expect(self, kind: str, description: Optional[str] = None) -> Token:
        if self.current.kind == kind:
            return self._advance()
        raise self._error(f"expected {description or kind}", [kind])

    def _error(self, message: str, expected: Sequence[str]) -> QuerySyntaxError:
        token = self.current
        shown = token.text if token.kind != "EOF" else "end of input"
        return _syntax_error(self.text, token.offset, f"{message}, found {shown!r}", expected)

    # --- grammar ---

    def parse(self) -> QueryAst:
        clauses: List[object] = []
        clause_offsets: List[int] = []
        while self.current.kind != "EOF":
            clause_offsets.append(self.current.offset)
            clauses.append(self._clause())
        if not clauses:
            raise self._error("expected a clause", ["MATCH", "CREATE", "MERGE", "DELETE", "DETACH", "RETURN"])
        ast = QueryAst(clauses=tuple(clauses))
        self._validate(ast, clause_offsets)
        return ast

    def _clause(self):
        kind = self.current.kind
        if kind == "MATCH":
            return self._match()
        if kind == "CREATE":
            self._advance()
            return CreateClause(pattern=self._pattern())
        if kind == "MERGE":
            return self._merge()
        if kind in ("DELETE", "DETACH"):
            return self._delete()
        if kind == "RETURN":
            return self._return()
        raise self._error("expected a clause keyword", ["MATCH", "CREATE", "MERGE", "DELETE", "DETACH", "RETURN"])

    def _match(self) -> MatchClause:
        self._expect("MATCH")
        pattern = self._pattern()
        where = None
        if self._accept("WHERE"):
            comparisons = [self._comparison()]
            while self._accept("AND"):
                comparisons.append(self._comparison())
            where = WherePredicate(comparisons=tuple(comparisons))
        return MatchClause(pattern=pattern, where=where)

    def _merge(self) -> MergeClause:
        self._expect("MERGE")
        node = self._node_atom()
        if self.current.kind in ("DASH", "LT"):
            raise self._error("MERGE accepts a single node pattern", ["MATCH", "MERGE", "EOF"])
        return MergeClause(pattern=Pattern(nodes=(node,)))

    def _delete(self) -> DeleteClause:
        detach = bool(self._accept("DETACH"))
        self._expect("DELETE")
        token = self._expect("IDENT", "a variable name")
        return DeleteClause(variable=token.text, detach=detach)

    def _return(self) -> ReturnClause:
        self._expect("RETURN")
        projections = [self._projection()]
        while self._accept("COMMA"):
            projections.append(self._projection())
        limit = None
        if self._accept("LIMIT"):
            token = self._expect("INT", "a non-negative integer")
            limit = int(token.value)
        return ReturnClause(projections=tuple(projections), limit=limit)

    def _projection(self) -> Projection:
        token = self._expect("IDENT", "a variable name")
        if self._accept("DOT"):
            key = self._expect("IDENT", "a property name")
            return Projection(expression=PropertyRef(variable=token.text, key=key.text))
        return Projection(expression=token.text)

    def _comparison(self) -> Comparison:
        var = self._expect("IDENT", "a variable name")
        self._expect("DOT", "'.'")
        key = self._expect("IDENT", "a property name")
        ref = PropertyRef(variable=var.text, key=key.text)
        if self._accept("EQ"):
            op = "="
        elif self._accept("NEQ"):
            op = "<>"
        else:
            raise self._error("expected a comparison operator", ["EQ", "NEQ"])
        value = self._literal()
        return Comparison(ref=ref, op=op, value=value)

    def _pattern(self) -> Pattern:
        nodes = [self._node_atom()]
        edges: List[EdgeAtom] = []
        while self.current.kind in ("DASH", "LT"):
            edges.append(self._edge_atom())
            nodes.append(self._node_atom())
        return Pattern(nodes=tuple(nodes), edges=tuple(edges))

    def _node_atom(self) -> NodeAtom:
        self._expect("LPAREN", "'('")
        variable = None
        label = None
        token = self._accept("IDENT")
        if token is not None:
            variable = token.text
        if self._accept("COLON"):
            label = self._expect("IDENT", "a label").text
        properties: Tuple[Tuple[str, Scalar], ...] = ()
        if self.current.kind == "LBRACE":
            properties = self._property_map()
        self._expect("RPAREN", "')'")
        return NodeAtom(variable=variable, label=label, properties=properties)

    def _edge_atom(self) -> EdgeAtom:
        if self._accept("LT"):
            # <-[var:REL]-   or the arrow shorthand <--
            self._expect("DASH", "'-'")
            variable, relation = self._edge_body()
            self._expect("DASH", "'-'")
            return EdgeAtom(variable=variable, relation=relation, direction=IN)
        self._expect("DASH", "'-'")
        variable, relation = self._edge_body()
        self._expect("DASH", "'-'")
        self._expect("GT", "'>'")
        return EdgeAtom(variable=variable, relation=relation, direction=OUT)

    def _edge_body(self) -> Tuple[Optional[str], Optional[str]]:
        """The optional [var:REL] part between the dashes; absent for -- arrows."""
        if self.current.kind != "LBRACKET":
            return None, None
        self._advance()
        variable = None
        relation = None
        token = self._accept("IDENT")
        if token is not None:
            variable = token.text
        if self._accept("COLON"):
            relation = self._expect("IDENT", "a relation name").text
        self._expect("RBRACKET", "']'")
        return variable, relation

    def _property_map(self) -> Tuple[Tuple[str, Scalar], ...]:
        self._expect("LBRACE", "'{'")
        pairs: List[Tuple[str, Scalar]] = []
        if self.current.kind != "RBRACE":
            pairs.append(self._property_pair())
            while self._accept("COMMA"):
                pairs.append(self._property_pair())
        self._expect("RBRACE", "'}'")
        return tuple(pairs)

    def _property_pair(self) -> Tuple[str, Scalar]:
        key = self._expect("IDENT", "a property key")
        self._expect("COLON", "':'")
        return key.text, self._literal()

    def _literal(self) -> Scalar:
        token = self.current
        if token.kind == "STRING":
            self._advance()
            return token.value
        if token.kind == "INT":
            self._advance()
            return int(token.value)
        if token.kind == "FLOAT":
            self._advance()
            return float(token.value)
        if token.kind == "TRUE":
            self._advance()
            return True
        if token.kind == "FALSE":
            self._advance()
            return False
        if token.kind == "DASH":
            self._advance()
            number = self.current
            if number.kind == "INT":
                self._advance()
                return -int(number.value)
            if number.kind == "FLOAT":
                self._advance()
                return -float(number.value)
            raise self._error("expected a number after '-'", ["INT", "FLOAT"])
        raise self._error("expected a literal value", ["STRING", "INT", "FLOAT", "TRUE", "FALSE"])

    # --- structural validation ---

    def _validate(self, ast: QueryAst, offsets: List[int]) -> None:
        clauses = ast.clauses
        for position, clause in enumerate(clauses):
            if isinstance(clause, ReturnClause) and position != len(clauses) - 1:
                raise _syntax_error(
                    self.text, offsets[position + 1], "RETURN must be the final clause", ["EOF"]
                )
        if sum(isinstance(c, ReturnClause) for c in clauses) > 1:
            raise _syntax_error(self.text, offsets[-1], "only one RETURN clause is allowed", ["EOF"])

        has_return = any(isinstance(c, ReturnClause) for c in clauses)
        has_create_or_merge = any(isinstance(c, (CreateClause, MergeClause)) for c in clauses)
        has_delete = any(isinstance(c, DeleteClause) for c in clauses)
        has_match = any(isinstance(c, MatchClause) for c in clauses)
        if has_return and (has_create_or_merge or has_delete):
            raise MixedReadWriteError("a query cannot both return rows and modify the graph")
        if has_create_or_merge and (has_match or has_delete):
            # MATCH binds nothing CREATE/MERGE can use in this subset
            raise MixedReadWriteError("CREATE/MERGE cannot be combined with MATCH or DELETE")
        if has_match and not (has_return or has_delete):
            raise _syntax_error(
                self.text, len(self.text), "MATCH must be followed by RETURN or DELETE", ["RETURN", "DELETE"]
            )
        if has_delete and not has_match:
            # DELETE variables can only come from MATCH; report the first one
            first = next(c for c in clauses if isinstance(c, DeleteClause))
            raise UnboundVariableError(first.variable)

        bound = set()
        for clause in clauses:
            if isinstance(clause, (MatchClause, CreateClause, MergeClause)):
                bound.update(clause.pattern.variables())
        for clause in clauses:
            if isinstance(clause, MatchClause) and clause.where is not None:
                for comparison in clause.where.comparisons:
                    if comparison.ref.variable not in bound:
                        raise UnboundVariableError(comparison.ref.variable)
            elif isinstance(clause, DeleteClause):
                if clause.variable not in bound:
                    raise UnboundVariableError(clause.variable)
            elif isinstance(clause, ReturnClause):
                for projection in clause.projections:
                    name = (
                        projection.expression.variable
                        if isinstance(projection.expression, PropertyRef)
                        else projection.expression
                    )
                    if name not in bound:
                        raise UnboundVariableError(name)


def parse(text: str) -> QueryAst:
    """Parse query text into an AST, or raise QuerySyntaxError / UnboundVariableError / MixedReadWriteError."""
    return _Parser(text).parse()
