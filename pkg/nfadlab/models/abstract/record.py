# =============================================================================
# nfadlab
#
# RECORD SUB-MODULE
# =============================================================================

# Python stdlib imports
import copy as _copy
import enum as _enum
import math as _math

# External dependencies
import numpy as _np

# Local imports
import nfadlab.errors as _errors
import nfadlab.util.custom_logging as _logging
import nfadlab.util.misc as _misc

from .record_metaclass import RecordMetaclass

# =============================================================================

# Global submodule constants
_LOG_SCOPE = "{}".format(__name__)

# Global submodule protected attributes
_logger = _logging.get_logger(name=_LOG_SCOPE)

# =============================================================================

def freeze(value):
    """
    Converts `value` into a hashable equivalent (lists and tuples into
    tuples, mappings into sorted item tuples, arrays into their bytes).
    """
    if isinstance(value, _np.ndarray):
        return ("ndarray", value.dtype.str, value.shape, value.tobytes())
    if isinstance(value, dict):
        return tuple(sorted((key, freeze(val)) for (key, val) in value.items()))
    if isinstance(value, (list, tuple)) and not hasattr(value, "_fields"):
        return tuple(freeze(item) for item in value)
    return value


def to_plain(value):
    """
    Converts `value` into plain Python data (for YAML manifests and CSV).
    """
    if isinstance(value, Record):
        return value.to_dict()
    if isinstance(value, _enum.Enum):
        return value.value
    if hasattr(value, "_asdict"):
        return {key: to_plain(val) for (key, val) in value._asdict().items()}
    if isinstance(value, _np.ndarray):
        return value.tolist()
    if isinstance(value, (_np.floating, _np.integer, _np.bool_)):
        return value.item()
    if isinstance(value, dict):
        return {key: to_plain(val) for (key, val) in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    return value

# =============================================================================

class Record(object, metaclass=RecordMetaclass):
    """
    Immutable value type whose fields are declared by the `_FIELDS` class
    attribute, `{name: (type, doc, default)}`; fields listed in
    `_FIELDS_REQUIRED` have no default.
    """

    _FIELDS = dict()
    _FIELDS_REQUIRED = list()

    def __init__(self, **kwargs):
        owner = type(self).__name__

        unknown = sorted(
            key for key in kwargs
            if key not in self._FIELDS and
            _misc.is_field_set_in_kwargs(key, kwargs))
        if unknown:
            raise _errors.ParameterValidationError(
                owner=owner,
                reason="unknown field(s) {}".format(", ".join(unknown)))

        data = dict()
        for (name, (field_type, _, default)) in self._FIELDS.items():
            if _misc.is_field_set_in_kwargs(name, kwargs):
                value = kwargs[name]
            elif name in self._FIELDS_REQUIRED:
                raise _errors.ParameterValidationError(
                    owner=owner,
                    reason="missing required field '{}'".format(name))
            else:
                value = _copy.deepcopy(default)
            data[name] = self._coerce(name, field_type, value)

        object.__setattr__(self, "_data", self._normalize(data))
        self._validate()

    def _coerce(self, name, field_type, value):
        if value is None:
            return None
        try:
            if field_type is float and not isinstance(value, bool):
                return float(value)
            if field_type is int and not isinstance(value, bool):
                if isinstance(value, float) and not value.is_integer():
                    raise ValueError("not integral")
                return int(value)
            if field_type is tuple:
                return tuple(value)
            if isinstance(field_type, type) and issubclass(field_type, _enum.Enum):
                return field_type(value)
        except (TypeError, ValueError) as exc:
            raise _errors.ParameterValidationError(
                owner=type(self).__name__,
                reason="field '{}' cannot be read as {}: {!r} ({})".format(
                    name, field_type.__name__, value, exc))
        return value

    def _normalize(self, data):
        """
        Hook to canonicalize field values before validation.
        """
        return data

    def _validate(self):
        """
        Hook to check invariants; raises `ParameterValidationError`.
        """
        pass

    def _fail(self, reason):
        raise _errors.ParameterValidationError(
            owner=type(self).__name__, reason=reason)

    def _require(self, condition, reason):
        if not condition:
            self._fail(reason)

    def _require_finite(self, *names):
        for name in names:
            value = self._data[name]
            self._require(
                value is not None and _math.isfinite(value),
                "{} must be a finite number, got {!r}".format(name, value))

    # -------------------------------------------------------------------------

    def __setattr__(self, name, value):
        raise AttributeError(
            "{} is immutable; use replace()".format(type(self).__name__))

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return freeze(self._data) == freeze(other._data)

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash((type(self).__name__, freeze(self._data)))

    def __repr__(self):
        return "{}({})".format(
            type(self).__name__,
            ", ".join(
                "{}={!r}".format(name, self._data[name])
                for name in self._FIELDS))

    def to_dict(self):
        # type: () -> dict
        return {name: to_plain(self._data[name]) for name in self._FIELDS}

    def replace(self, **kwargs):
        """
        Returns a copy of this record with the provided fields changed.
        """
        data = dict(self._data)
        for name in list(kwargs):
            if _misc.is_field_set_in_kwargs(name, kwargs):
                data[name] = kwargs[name]
        return type(self)(**data)

# =============================================================================
