
import collections
import enum
import inspect

import numpy as np
import pytest

import nfadlab.errors as _errors
import nfadlab.models.abstract.record as _record
import nfadlab.models.abstract.record_metaclass as _rm

FixtureTestData = collections.namedtuple(
    'FixtureTestData',
    ['input', 'output'])


class _Shape(enum.Enum):
    ROUND = "round"
    SQUARE = "square"


class _Widget(_record.Record):

    _FIELDS = {
        "name": (str, "Widget name."),
        "width": (float, "Width in meters.", 1.0),
        "count": (int, "Number of widgets.", 3),
        "shape": (_Shape, "Outline.", _Shape.ROUND),
        "tags": (tuple, "Free-form tags.", ()),
    }

    _FIELDS_REQUIRED = ["name"]

    def _validate(self):
        self._require(self.width > 0, "width must be positive")


class _LabelledWidget(_Widget):

    _FIELDS = dict(_Widget._FIELDS, label=(str, "Label text.", "none"))


class TestNormalizeFields:
    """
    Tests for the `nfadlab.models.abstract.record_metaclass.normalize_fields`
    method.
    """

    test_data = [
        FixtureTestData({"a": int}, {"a": (int, "", None)}),
        FixtureTestData({"a": (int, "doc")}, {"a": (int, "doc", None)}),
        FixtureTestData({"a": (int, "doc", 5)}, {"a": (int, "doc", 5)}),
    ]

    test_ids = [
        "{input} => {output}".format(input=d.input, output=d.output)
        for d in test_data
    ]

    @pytest.mark.parametrize("test_data", test_data, ids=test_ids)
    def test_correctness(self, test_data):
        assert _rm.normalize_fields(test_data.input) == test_data.output


class TestRecordMetaclass:

    def test_properties_documented(self):
        assert isinstance(_Widget.width, property)
        assert _Widget.width.__doc__ == "(float) Width in meters."

    def test_signature(self):
        parameters = inspect.signature(_Widget.__init__).parameters
        assert set(parameters) == {"self", "name", "width", "count", "shape", "tags"}
        assert parameters["name"].kind == inspect.Parameter.KEYWORD_ONLY

    def test_subclass_signature(self):
        parameters = inspect.signature(_LabelledWidget.__init__).parameters
        assert "label" in parameters
        widget = _LabelledWidget(name="w", label="x")
        assert widget.label == "x"
        assert widget.replace(label="y").label == "y"


class TestRecord:

    def test_defaults_and_coercion(self):
        widget = _Widget(name="w", width=2, count=4.0, shape="square", tags=["a"])

        assert widget.width == 2.0 and isinstance(widget.width, float)
        assert widget.count == 4 and isinstance(widget.count, int)
        assert widget.shape is _Shape.SQUARE
        assert widget.tags == ("a",)
        assert _Widget(name="w").count == 3

    def test_missing_required(self):
        with pytest.raises((_errors.ParameterValidationError, TypeError)):
            _Widget(width=1.0)

    def test_unknown_field(self):
        with pytest.raises((_errors.ParameterValidationError, TypeError)):
            _Widget(name="w", colour="red")

    def test_non_integral_count(self):
        with pytest.raises(_errors.ParameterValidationError):
            _Widget(name="w", count=2.5)

    def test_large_int_kept_exact(self):
        assert _Widget(name="w", count=2 ** 63 + 1).count == 2 ** 63 + 1
        assert _Widget(name="w", count=np.uint64(2 ** 64 - 1)).count == 2 ** 64 - 1

    def test_bad_enum(self):
        with pytest.raises(_errors.ParameterValidationError):
            _Widget(name="w", shape="triangle")

    def test_validate_hook(self):
        with pytest.raises(_errors.ParameterValidationError) as excinfo:
            _Widget(name="w", width=-1.0)
        assert excinfo.value.details["owner"] == "_Widget"

    def test_immutable(self):
        widget = _Widget(name="w")
        with pytest.raises(AttributeError):
            widget.width = 3.0

    def test_replace(self):
        widget = _Widget(name="w")
        other = widget.replace(width=5.0)

        assert other.width == 5.0
        assert other.name == "w"
        assert widget.width == 1.0

    def test_replace_validates(self):
        with pytest.raises(_errors.ParameterValidationError):
            _Widget(name="w").replace(width=0.0)

    def test_eq_hash(self):
        a = _Widget(name="w", tags=["x", "y"])
        b = _Widget(name="w", tags=("x", "y"))

        assert a == b
        assert hash(a) == hash(b)
        assert a != a.replace(count=9)
        assert len({a, b}) == 1

    def test_to_dict(self):
        assert _Widget(name="w").to_dict() == {
            "name": "w", "width": 1.0, "count": 3,
            "shape": "round", "tags": [],
        }


class TestToPlain:

    def test_numpy(self):
        plain = _record.to_plain({"a": np.float64(1.5), "b": np.arange(2)})
        assert plain == {"a": 1.5, "b": [0, 1]}
        assert type(plain["a"]) is float

    def test_namedtuple(self):
        Pair = collections.namedtuple("Pair", ["x", "y"])
        assert _record.to_plain([Pair(1, _Shape.ROUND)]) == [{"x": 1, "y": "round"}]

    def test_freeze_arrays(self):
        assert _record.freeze(np.zeros(3)) == _record.freeze(np.zeros(3))
        assert _record.freeze(np.zeros(3)) != _record.freeze(np.ones(3))
