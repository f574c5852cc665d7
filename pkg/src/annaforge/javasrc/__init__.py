"""Hand-written Java 17 front end: lexer, recursive-descent parser, site model.

No JVM, no external grammar. The parser is deliberately strict about where
annotations may appear, because site enumeration and the brute-force insertion
oracle both hinge on parse acceptance being a meaningful predicate.
"""

from .lexer import LexError, Token, lex
from .parser import ParseError, parse_compilation_unit
