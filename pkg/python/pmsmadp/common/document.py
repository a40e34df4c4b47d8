"""Contains the `Document` class used for all declarative inputs and outputs
(motor parameters, training configurations, scenarios, weight files and
summaries)."""

import copy
import hashlib
import json
import os
import cbor

def _check_json(ob):
    try:
        cbor.dumps(ob)
    except ValueError:
        raise TypeError("Invalid JSON/CBOR object: {!r}".format(ob))
    try:
        json.dumps(ob, allow_nan=True)
    except (TypeError, ValueError):
        raise TypeError("Invalid JSON/CBOR object: {!r}".format(ob))

def _canonical(ob):
    """Returns a copy of `ob` with all dictionaries replaced by lists of
    sorted key-value pairs, so the CBOR encoding does not depend on
    insertion order."""
    if isinstance(ob, dict):
        return [[str(key), _canonical(ob[key])] for key in sorted(ob)]
    if isinstance(ob, (list, tuple)):
        return [_canonical(x) for x in ob]
    return ob

def fingerprint(ob):
    """Returns the hex SHA-256 digest of the canonical CBOR encoding of a
    JSON-like object."""
    return hashlib.sha256(cbor.dumps(_canonical(ob))).hexdigest()


class Document(object):
    """Represents a structured key-value document.

    Documents behave like a dict whose values are restricted to the
    JSON/CBOR data model; assignments that cannot be serialized raise a
    `TypeError`. They are stored as UTF-8 JSON (`.json`) or as CBOR
    (`.cbor`) depending on the file extension.
    """

    def __init__(self, *args, **kwargs):
        """Constructs a Document.

        Positional arguments must be mappings (dicts or other Documents);
        they are merged from left to right, after which the keyword
        arguments are applied. For instance:

            Document({'preset': 'nominal'}, stator_resistance_ohm=1.5)

        All entries are deep-copied.
        """
        super().__init__()
        data = {}
        for arg in args:
            if isinstance(arg, Document):
                arg = arg._json
            if not isinstance(arg, dict):
                raise TypeError("Document positional arguments must be mappings")
            data.update(copy.deepcopy(arg))
        data.update(copy.deepcopy(kwargs))
        for key in data:
            if not isinstance(key, str):
                raise TypeError("Document keys must be strings: {!r}".format(key))
        _check_json(data)
        self._json = data

    def __bool__(self):
        """Returns whether there is any data in this document."""
        return bool(self._json)

    def __len__(self):
        return len(self._json)

    def __getitem__(self, key):
        return self._json[key]

    def __setitem__(self, key, value):
        if not isinstance(key, str):
            raise TypeError("Document keys must be strings: {!r}".format(key))
        _check_json(value)
        self._json[key] = copy.deepcopy(value)

    def __delitem__(self, key):
        del self._json[key]

    def __contains__(self, key):
        return key in self._json

    def __iter__(self):
        return iter(self._json)

    def get(self, key, default=None):
        """Returns the entry for `key`, or `default` if there is none."""
        return self._json.get(key, default)

    def keys(self):
        return self._json.keys()

    def values(self):
        return self._json.values()

    def items(self):
        return self._json.items()

    def to_dict(self):
        """Returns a deep copy of the contents as a plain dict."""
        return copy.deepcopy(self._json)

    def fingerprint(self):
        """Returns the SHA-256 fingerprint of the document contents."""
        return fingerprint(self._json)

    def dumps(self):
        """Serializes the document to a JSON string with sorted keys and
        full float precision."""
        return json.dumps(self._json, sort_keys=True, indent=2) + '\n'

    @classmethod
    def loads(cls, text):
        """Parses a JSON string into a document."""
        data = json.loads(text)
        if not isinstance(data, dict):
            raise TypeError("Document must be a JSON object at the top level")
        return cls(data)

    def dump(self, path):
        """Writes the document to `path`. Files ending in `.cbor` are written
        as CBOR, anything else as JSON."""
        if str(path).endswith('.cbor'):
            with open(path, 'wb') as f:
                f.write(cbor.dumps(self._json))
        else:
            with open(path, 'w') as f:
                f.write(self.dumps())

    @classmethod
    def load(cls, path):
        """Reads a document from `path`; see `dump()`."""
        if not os.path.isfile(path):
            raise ValueError("document not found: {!r}".format(path))
        if str(path).endswith('.cbor'):
            with open(path, 'rb') as f:
                data = cbor.loads(f.read())
            if not isinstance(data, dict):
                raise TypeError("Document must be a CBOR map at the top level")
            return cls(data)
        with open(path, 'r') as f:
            return cls.loads(f.read())

    def __eq__(self, other):
        if isinstance(other, Document):
            return self._json == other._json
        return False

    def __repr__(self):
        e = []
        for key, value in sorted(self._json.items()):
            e.append("{!s}={!r}".format(key, value))
        return "Document({})".format(', '.join(e))

    __str__ = __repr__


def pop_value(kwargs, key, typ, default, check=None, message=None):
    """Pops and converts a configuration entry.

    `typ` is applied to the value to convert it; conversion failures raise
    `TypeError`. If `check` is specified and returns false for the converted
    value, `ValueError` is raised with `message`. Missing entries yield
    `default` (which is returned unconverted and unchecked when `None`)."""
    if key not in kwargs:
        if default is None:
            return None
        value = default
    else:
        value = kwargs.pop(key)
    if typ is int and isinstance(value, float) and not value.is_integer():
        raise TypeError("{} must be an integer".format(key))
    if isinstance(value, bool) and typ is not bool:
        raise TypeError("{} must be a number, not a bool".format(key))
    try:
        value = typ(value)
    except (TypeError, ValueError):
        raise TypeError("{} must be convertible to {}".format(key, typ.__name__))
    if check is not None and not check(value):
        raise ValueError(message or "invalid value for {}: {!r}".format(key, value))
    return value

def check_empty(kwargs):
    """Raises the conventional `TypeError` for leftover configuration keys."""
    if kwargs:
        raise TypeError("unexpected keyword argument {!r}".format(next(iter(kwargs.keys()))))
