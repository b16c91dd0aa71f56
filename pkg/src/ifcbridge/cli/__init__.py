"""Surface syntax and the command-line driver."""

from .syntax import (
    ParseError, SourceProgram, parse_expr, parse_program, parse_type, print_expr, print_program,
    print_type, print_value,
)
