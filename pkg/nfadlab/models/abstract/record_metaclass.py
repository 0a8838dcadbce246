# =============================================================================
# nfadlab
#
# RECORD METACLASS SUB-MODULE
# =============================================================================

# Python stdlib imports
import functools as _functools
import textwrap as _textwrap

# Local imports
import nfadlab.util.custom_logging as _logging
import nfadlab.util.misc as _misc

from nfadlab.util.misc import _forge, FORGE_VOID as _FORGE_VOID

# =============================================================================

# Global submodule constants
_LOG_SCOPE = "{}".format(__name__)

# Global submodule protected attributes
_logger = _logging.get_logger(name=_LOG_SCOPE)

# =============================================================================

def normalize_fields(fields):
    # type: (dict) -> dict
    """
    Expands a `_FIELDS` declaration into `{name: (type, doc, default)}`.

    Entries may be given as `type`, `(type, doc)` or `(type, doc, default)`;
    a missing default is `None`.
    """
    normalized = dict()
    for (name, spec) in fields.items():
        if not isinstance(spec, tuple):
            spec = (spec,)
        field_type = spec[0] if len(spec) >= 1 else object
        field_doc = spec[1] if len(spec) >= 2 else ""
        field_default = spec[2] if len(spec) >= 3 else None
        normalized[name] = (field_type, field_doc, field_default)
    return normalized

# =============================================================================


class RecordMetaclass(type):
    """
    Metaclass to configure immutable nfadlab record classes: every field
    declared in `_FIELDS` becomes a documented read-only property, and the
    constructor and `replace` receive an explicit keyword signature.
    """

    @staticmethod
    def __bound_getitem(obj, field_name=None):
        return obj._data[field_name]

    def __mk_property(cls, field_name=None, field_type=None, field_doc=None):

        doc = "\n".join(_textwrap.wrap(" ".join((field_doc or "").split())))
        if field_type is not None and hasattr(field_type, "__name__"):
            doc = "({}) {}".format(field_type.__name__, doc).strip()

        return property(
            fget=_functools.partial(RecordMetaclass.__bound_getitem,
                                    field_name=field_name),
            doc=doc,
        )

    @classmethod
    def _build_signature(
        cls,
        obj,
        with_self=True,
        all_optional=False):

        parameters = []

        if with_self:
            parameters.append(_forge.arg("self"))

        required = getattr(obj, "_FIELDS_REQUIRED", list())

        for (key, val) in obj._FIELDS.items():
            if all_optional or not key in required:
                parameters.append(
                    _forge.kwo(key, type=val[0], default=_FORGE_VOID))
            else:
                parameters.append(
                    _forge.kwo(key, type=val[0]))

        return _forge.FSignature(parameters=parameters)

    def __init__(cls, name, bases, attrs):
        super(RecordMetaclass, cls).__init__(name, bases, attrs)

        # Post-process _FIELDS dictionary
        fields = normalize_fields(getattr(cls, "_FIELDS", dict()))
        cls._FIELDS = fields

        for field_name in fields:
            (field_type, field_doc, _) = fields[field_name]
            setattr(cls,
                    field_name,
                    RecordMetaclass.__mk_property(
                        cls,
                        field_name=field_name,
                        field_type=field_type,
                        field_doc=field_doc))

        if _forge and fields:
            # The undecorated methods are kept on the class, so that
            # subclasses are signed from the original implementation.
            init = (attrs.get("__init__") or
                    getattr(cls, "_unsigned_init", None) or cls.__init__)
            replace = (attrs.get("replace") or
                       getattr(cls, "_unsigned_replace", None) or
                       getattr(cls, "replace", None))

            if init is not None:
                cls._unsigned_init = init
                cls.__init__ = _forge.sign(
                    *RecordMetaclass._build_signature(
                        obj=cls,
                        all_optional=False))(init)

            if replace is not None:
                cls._unsigned_replace = replace
                cls.replace = _forge.sign(
                    *RecordMetaclass._build_signature(
                        obj=cls,
                        all_optional=True))(replace)

# =============================================================================
