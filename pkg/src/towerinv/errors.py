"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the CLI can report
it without parsing messages.
"""


class TowerInvError(Exception):
    code = "error"
    exit_code = 3


class InputError(TowerInvError):
    """Base for errors caused by bad caller input (CLI exit code 2)."""

    code = "input_error"
    exit_code = 2


class ParseError(InputError):
    code = "parse_error"

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class SchemaError(InputError):
    code = "schema_error"


class InvalidCharacter(InputError):
    code = "invalid_character"


class NotASubfield(InputError):
    code = "not_a_subfield"


class NonIntegralExponent(InputError):
    code = "non_integral_exponent"


class InconsistentRamification(TowerInvError):
    code = "inconsistent_ramification"


class NumericalInconsistency(TowerInvError):
    code = "numerical_inconsistency"


class PrincipalCharacter(InputError):
    code = "principal_character"


class ZeroGenus(InputError):
    code = "zero_genus"


class CapExceeded(InputError):
    code = "cap_exceeded"


class InsufficientLevels(InputError):
    code = "insufficient_levels"


class UnramifiedTower(InputError):
    code = "unramified_tower"


class UndecidableTail(InputError):
    code = "undecidable_tail"


class HypothesisViolated(InputError):
    code = "hypothesis_violated"


class MonotonicityViolated(InputError):
    code = "monotonicity_violated"


class TransitivityViolated(InputError):
    code = "transitivity_violated"


class UnknownSubgroup(InputError):
    code = "unknown_subgroup"


class InconsistentLattice(InputError):
    code = "inconsistent_lattice"


class NoPrimePowerMatch(InputError):
    code = "no_prime_power_match"


class AmbiguousMatch(InputError):
    code = "ambiguous_match"
