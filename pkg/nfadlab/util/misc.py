# =============================================================================
# nfadlab
#
# MISCELLANEOUS UTILITIES SUB-MODULE
# =============================================================================

# Python stdlib imports
import enum as _enum
import typing as _typing

# External dependencies
try:
    import forge as _forge
except ImportError: # pragma: no cover
    _forge = None
finally:
    FORGE_VOID = _forge.void if _forge else "<void>"

# =============================================================================

def format_si(value, unit="", digits=4):
    # type: (float, str, int) -> str
    """
    Formats a physical quantity in engineering notation with an SI prefix,
    e.g. `format_si(2.79e-9, "W")` returns `"2.79 nW"`.
    """
    prefixes = [
        (1e-15, "f"), (1e-12, "p"), (1e-9, "n"), (1e-6, "u"),
        (1e-3, "m"), (1.0, ""), (1e3, "k"), (1e6, "M"), (1e9, "G"),
    ]
    if value is None:
        return "N/A"
    magnitude = abs(value)
    if magnitude == 0.0:
        return "0 {}".format(unit).strip()

    scale, prefix = prefixes[0]
    for (candidate_scale, candidate_prefix) in prefixes:
        if magnitude >= candidate_scale:
            scale, prefix = candidate_scale, candidate_prefix

    return "{:.{digits}g} {}{}".format(
        value / scale, prefix, unit, digits=digits).strip()


# =============================================================================

def is_field_set_in_kwargs(field, kwargs):
    # type: (str, dict) -> bool
    """
    Returns `True` if the keyword argument `field` was explicitly provided:
    `forge`-signed methods pass `FORGE_VOID` for omitted parameters.
    """
    # Easy case: The field is not in the dict
    if not field in kwargs:
        return False

    if _forge:
        return not (kwargs.get(field) is FORGE_VOID)

    return True # pragma: no cover


# =============================================================================

class DocEnum(_enum.Enum):
    """
    Enumeration whose members are declared as `NAME = value, doc`.
    """

    def __new__(cls, value, doc):
        # type: (str, str) -> DocEnum
        # The value must be set here to be registered for lookup by value
        member = object.__new__(cls)
        member._value_ = value
        member.__doc__ = doc
        return member

    def __str__(self):
        return str(self.value)


# =============================================================================

class MissingFormatKey(DocEnum):
    """
    Describes all possible ways that the formatting helper method can address
    the problem of missing format keys.
    """

    ERROR = "missing-keys-error", "Missing format keys throw an error."

    REMAIN = "missing-keys-remain", """
                                    Missing format keys are unaffected, and
                                    can be filled by a later formatting call
                                    """

    REMOVE = "missing-keys-remove", "Missing format keys are removed."


def _make_f(globals, locals):

    def _f(s, missing=MissingFormatKey.REMAIN, **kwargs):
        """
        Formats a string using the local and global symbols available.
        Suppresses any warning that is not related to string formatting.
        """
        # Resolve the arguments (may be dictionaries or callables)
        g = globals
        l = locals
        if callable(g):
            g = g()
        if callable(l):
            l = l()

        # Make the substitution if the string provided is not empty
        if s:
            try:
                # Make two substitutions for patterns who unspool their
                # own substitutions (the missing key will be captured)
                merged = dict(g)
                merged.update(l)
                merged.update(kwargs)

                temp = s.format(**merged)
                temp = temp.format(**merged)
                return temp
            except KeyError as err:
                missing_key = err.args[0]
                missing_key_val = None

                if missing == MissingFormatKey.ERROR:
                    raise

                elif missing == MissingFormatKey.REMAIN:
                    # Keep {missing key} for a subsequent call.
                    missing_key_val = "{{{key}}}".format(key=missing_key)

                elif missing == MissingFormatKey.REMOVE:
                    missing_key_val = ""

                merged = { missing_key: missing_key_val }
                merged.update(kwargs)

                return _f(
                    s=s,
                    missing=missing,
                    **merged
                )
            except (ValueError, IndexError):
                raise
        return s

    return _f

# =============================================================================
