# Copyright (C) 2024 mlglm Contributors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""JSON Schema validation of configuration documents.

``config.schema.json`` describes a complete run configuration. Its
``definitions`` describe the pieces (``model``, ``prior``,
``activation`` and the per task ``parameters/<task>`` objects) which
are validated on their own when built directly.
"""

import functools
import json
import pathlib

from mlglm._imports import jsonschema

from .errors import ConfigError

HERE = pathlib.Path(__file__).parent
SCHEMA_PATH = HERE.joinpath("config.schema.json")


@functools.lru_cache()
def load_schema(definition=None):
    """The run configuration schema, or one of its definitions."""
    with open(SCHEMA_PATH) as f:
        schema = json.load(f)

    if definition is None:
        return schema

    return {
        "$schema": schema["$schema"],
        "allOf": [{"$ref": f"#/definitions/{definition}"}],
        "definitions": schema["definitions"],
    }


@functools.lru_cache()
def _validator_class():
    # Floats such as 16.0 are not counts
    def is_integer(_, instance):
        return isinstance(instance, int) and not isinstance(instance, bool)

    base = jsonschema.Draft7Validator
    return jsonschema.validators.extend(
        base, type_checker=base.TYPE_CHECKER.redefine("integer", is_integer)
    )


def error_path(error):
    """Dotted location of a ``jsonschema.ValidationError``.

    Strings are joined with ``.`` and list indices are written
    ``[i]``, ``layers[0].alpha`` for example. Unknown and missing keys
    are reported at the key itself rather than at its parent object.
    """
    keys = list(error.absolute_path)

    if error.validator == "additionalProperties" and isinstance(error.instance, dict):
        known = set(error.schema.get("properties", {}))
        keys += sorted(set(error.instance) - known)[:1]
    elif error.validator == "required" and isinstance(error.instance, dict):
        keys += [key for key in error.validator_value if key not in error.instance][:1]

    path = ""
    for key in keys:
        if isinstance(key, int):
            path += f"[{key}]"
        elif path:
            path += f".{key}"
        else:
            path = key

    return path or None


def validate(instance, definition=None, path=None):
    """Validate ``instance`` or raise ``ConfigError`` naming the offending key.

    Parameters
    ----------
    instance
        A decoded JSON document.
    definition : str, optional
        Validate against ``#/definitions/<definition>`` rather than a
        complete run configuration.
    path : str, optional
        Location of ``instance`` within a larger document, prefixed
        onto the reported path.
    """
    try:
        jsonschema.validate(
            instance=instance, schema=load_schema(definition), cls=_validator_class()
        )
    except jsonschema.ValidationError as error:
        config_error = ConfigError(error.message, error_path(error))
        if path:
            config_error = config_error.with_prefix(path)

        raise config_error from None
