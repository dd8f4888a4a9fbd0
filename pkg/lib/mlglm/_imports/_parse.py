import ast


def parse_imports(filepath):
    """Collect the third-party modules listed within a python file.

    Only plain ``import a`` / ``import a.b`` / ``import a as b``
    statements are accepted. A dotted import without an alias registers
    the submodule under its dotted name, next to its top level package,
    so both are handed to ``apipkg`` as aliases.

    Parameters
    ----------
    filepath
        The python file containing the imports to be parsed.

    Returns
    -------
    imports_for_apipkg : dict
        Maps each exposed name to the module path ``apipkg`` aliases it
        to.

    """
    with open(filepath) as f:
        imports_string = f.read()

    imports_for_apipkg = {}

    for node in ast.parse(imports_string).body:
        if not isinstance(node, ast.Import):
            raise ValueError("Only direct import statements are supported")

        aliases = list(node.names)
        if len(aliases) != 1:
            raise ValueError("Only one alias per import supported")

        alias = aliases[0]

        if alias.asname is None and "." in alias.name:
            top_level = alias.name.split(".")[0]
            imports_for_apipkg.setdefault(top_level, top_level)
            imports_for_apipkg[alias.name] = alias.name
            continue

        asname = alias.asname
        if asname is None:
            asname = alias.name

        imports_for_apipkg[asname] = alias.name

    return imports_for_apipkg
