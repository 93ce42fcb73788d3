"""matcert: certify termination and polynomial derivational complexity of
term rewrite systems from matrix interpretations, with exact arithmetic."""

__version__ = "0.1.0"

from .errors import InputError, MatcertError
from .formats import Certificate, parse_certificate, parse_trs, print_certificate, print_trs
from .growth import certify_complexity
from .interpretation import LinearInterpretation, SymbolInterpretation, certify_termination
from .matrix import GuardedMatrix, identity, matrix
from .poly import Polynomial, char_poly
from .terms import App, Rule, Trs, Var
from .verdict import Verdict

__all__ = [
    "App",
    "Certificate",
    "GuardedMatrix",
    "InputError",
    "LinearInterpretation",
    "MatcertError",
    "Polynomial",
    "Rule",
    "SymbolInterpretation",
    "Trs",
    "Var",
    "Verdict",
    "certify_complexity",
    "certify_termination",
    "char_poly",
    "identity",
    "matrix",
    "parse_certificate",
    "parse_trs",
    "print_certificate",
    "print_trs",
]
